"""Experiment configuration: typed sections, a plain-text sectioned format,
and a canonical writer so write(parse(write(defaults))) is a fixpoint."""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .errors import ConfigError


@dataclass
class GeometryConfig:
    pickup_kinds: tuple[str, ...] = ("box", "disk", "capsule")
    push_kinds: tuple[str, ...] = ("box", "capsule")  # disks roll away
    carry_kinds: tuple[str, ...] = ("box", "disk", "capsule")
    sit_kinds: tuple[str, ...] = ("box",)
    scale_lo: float = 0.4
    scale_hi: float = 1.6
    anisotropy_max: float = 1.0  # per-axis ratio cap; hard limit 1.3


@dataclass
class SimConfig:
    dt: float = 0.02
    substeps: int = 4
    gravity: float = 9.81
    contact_k: float = 2000.0
    contact_c: float = 20.0
    tangent_c: float = 100.0  # viscous slope of the regularized Coulomb friction
    contact_eps: float = 0.02
    reach: float = 0.75
    root_accel_max: float = 6.0
    root_vel_max: float = 2.5
    effector_vel_max: float = 1.5
    grasp_steps: int = 5
    grasp_oppose: float = -0.5
    detach_margin: float = 0.1
    fall_height: float = 0.1
    angular_drag: float = 0.5
    mass_default: float = 1.0
    push_mass_factor: float = 2.2
    friction_default: float = 0.5
    restitution_default: float = 0.0


@dataclass
class ReprConfig:
    window: int = 8
    num_links: int = 3
    latent_dim: int = 16
    vae_hidden: tuple[int, ...] = (128, 128)
    vae_beta: float = 1e-3
    n_rays: int = 16
    depth_frames: int = 4
    depth_max_range: float = 5.0


@dataclass
class TrainConfig:
    lr_pretrain: float = 1e-3
    lr_policy: float = 1e-3
    lr_disc: float = 2e-4
    lr_distill: float = 1e-3
    lr_vae: float = 1e-3
    gamma: float = 0.99
    gae_lambda: float = 0.95
    clip: float = 0.2
    entropy_coef: float = 5e-4
    value_coef: float = 0.5
    n_envs: int = 64
    rollout_horizon: int = 64
    ppo_epochs: int = 4
    minibatch: int = 512
    kl_stop: float = 0.05  # stop the epoch loop once approx KL exceeds this
    grad_clip: float = 0.5
    rl_log_std_init: float = -2.3  # fine-tuning exploration around the cloned policy
    value_warmup_iters: int = 10   # critic-only iterations before policy updates
    # the tabulated action-reg weight assumes joint-space units; normalized
    # [-1,1] commands need it scaled down or it swamps the task signal
    rl_action_scale: float = 0.1
    d_steps_per_epoch: int = 1
    d_updates_per_iter: int = 1  # discriminator steps per rollout iteration
    disc_batch: int = 256
    policy_replay: int = 50000   # fake-side replay so D tracks history, not the instant policy
    bc_steps: int = 20000
    bc_batch: int = 256
    rl_steps: int = 2000000
    distill_steps: int = 100000
    distill_batch: int = 256
    vae_steps: int = 3000
    vae_batch: int = 256
    vae_episodes: int = 60
    ref_capacity: int = 200000
    ref_episodes: int = 200
    w_root: float = 1.0
    w_interact: float = 2.0
    w_style: float = 1.0
    w_object: float = 1.0
    w_action: float = 5.0
    w_termination: float = 10.0
    w_limit: float = 5.0
    sigma_obj: float = 0.3
    squared_root_reward: bool = False
    use_aip: bool = True        # ablation toggles: each variant flips one
    use_synthetic: bool = True
    use_rl: bool = True
    policy_hidden: tuple[int, ...] = (128, 128)
    value_hidden: tuple[int, ...] = (128, 128)
    disc_hidden: tuple[int, ...] = (256, 128)
    student_hidden: tuple[int, ...] = (256, 128)


@dataclass
class RandomizationConfig:
    geometry: bool = True
    physics: bool = True
    initial: bool = True
    command: bool = True
    actuation: bool = True
    perception: bool = True
    command_jitter: float = 0.05
    actuation_noise: float = 0.02
    mass_lo: float = 0.6
    mass_hi: float = 1.6
    friction_lo: float = 0.4
    friction_hi: float = 0.8
    restitution_lo: float = 0.0
    restitution_hi: float = 0.2
    init_pos_jitter: float = 0.05
    init_rot_jitter: float = 0.1
    depth_noise: float = 0.01
    depth_dropout: float = 0.05
    depth_extrinsic: float = 0.05


@dataclass
class EvalConfig:
    scales: tuple[float, ...] = (0.4, 0.6, 1.0, 1.4, 1.6)
    horizons: tuple[int, ...] = (5, 10, 15, 25, 40)
    episodes: int = 100
    seeds: int = 3
    compose_scale_lo: float = 0.75
    compose_scale_hi: float = 1.25


@dataclass
class IoConfig:
    out_dir: str = "runs"
    seed: int = 0
    log_every: int = 10
    checkpoint_every: int = 50


@dataclass
class Config:
    geometry: GeometryConfig = field(default_factory=GeometryConfig)
    sim: SimConfig = field(default_factory=SimConfig)
    representation: ReprConfig = field(default_factory=ReprConfig)
    training: TrainConfig = field(default_factory=TrainConfig)
    randomization: RandomizationConfig = field(default_factory=RandomizationConfig)
    eval: EvalConfig = field(default_factory=EvalConfig)
    io: IoConfig = field(default_factory=IoConfig)

    def replace_field(self, dotted: str, value) -> "Config":
        """Copy with one 'section.key' overridden (validated)."""
        section, key = _split_key(dotted)
        sub = getattr(self, section)
        if not any(f.name == key for f in fields(sub)):
            raise ConfigError(f"unknown key {dotted}")
        cfg = replace(self, **{section: replace(sub, **{key: value})})
        validate_config(cfg)
        return cfg


_SECTIONS = ("geometry", "sim", "representation", "training", "randomization",
             "eval", "io")


def _split_key(dotted):
    if "." not in dotted:
        raise ConfigError(f"expected section.key, got {dotted!r}")
    section, key = dotted.split(".", 1)
    if section not in _SECTIONS:
        raise ConfigError(f"unknown section {section!r}")
    return section, key


def _parse_scalar(text, default, where):
    kind = type(default)
    text = text.strip()
    try:
        if kind is bool:
            if text.lower() in ("true", "1", "yes"):
                return True
            if text.lower() in ("false", "0", "no"):
                return False
            raise ValueError(text)
        if kind is int:
            return int(text)
        if kind is float:
            return float(text)
        if kind is str:
            return text
        if kind is tuple:
            elem = type(default[0])
            if text == "":
                return ()
            return tuple(elem(part.strip()) for part in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"{where}: cannot parse {text!r} as {kind.__name__}") from exc
    raise ConfigError(f"{where}: unsupported field type {kind!r}")


def _format_scalar(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, tuple):
        return ",".join(_format_scalar(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def parse_config(path) -> Config:
    """Parse the sectioned key=value format with defaults for absent keys."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file {path} does not exist")
    cfg = Config()
    section = None
    sub_fields = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section not in _SECTIONS:
                raise ConfigError(f"line {lineno}: unknown section [{section}]")
            sub = getattr(cfg, section)
            sub_fields = {f.name: f for f in fields(sub)}
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        if section is None:
            raise ConfigError(f"line {lineno}: key outside any [section]")
        key, text = (part.strip() for part in line.split("=", 1))
        if key not in sub_fields:
            raise ConfigError(f"line {lineno}: unknown key {section}.{key}")
        sub = getattr(cfg, section)
        default = getattr(type(sub)(), key)
        value = _parse_scalar(text, default, f"line {lineno} ({section}.{key})")
        setattr(cfg, section, replace(sub, **{key: value}))
    validate_config(cfg)
    return cfg


def write_config(cfg: Config, path) -> None:
    """Emit the canonical form: every section, every key, declaration order."""
    lines = []
    for section in _SECTIONS:
        lines.append(f"[{section}]")
        sub = getattr(cfg, section)
        for f in fields(sub):
            lines.append(f"{f.name} = {_format_scalar(getattr(sub, f.name))}")
        lines.append("")
    Path(path).write_text("\n".join(lines))


def _positive(cfg, dotted):
    section, key = _split_key(dotted)
    if getattr(getattr(cfg, section), key) <= 0:
        raise ConfigError(f"{dotted} must be > 0")


def validate_config(cfg: Config) -> Config:
    """Constraint checks; error messages name the offending key."""
    for dotted in ("sim.dt", "sim.gravity", "sim.contact_k", "sim.contact_c",
                   "sim.contact_eps", "sim.reach", "sim.root_accel_max",
                   "sim.effector_vel_max", "sim.mass_default",
                   "representation.window", "representation.num_links",
                   "representation.latent_dim", "representation.n_rays",
                   "representation.depth_frames", "representation.depth_max_range",
                   "training.n_envs", "training.rollout_horizon",
                   "training.minibatch", "geometry.scale_lo", "eval.episodes",
                   "eval.seeds"):
        _positive(cfg, dotted)
    g = cfg.geometry
    if g.scale_hi < g.scale_lo:
        raise ConfigError("geometry.scale_hi must be >= geometry.scale_lo")
    if not (1.0 <= g.anisotropy_max <= 1.3):
        raise ConfigError("geometry.anisotropy_max must lie in [1.0, 1.3]")
    for name in ("pickup_kinds", "push_kinds", "carry_kinds", "sit_kinds"):
        kinds = getattr(g, name)
        if not kinds or any(k not in ("box", "disk", "capsule") for k in kinds):
            raise ConfigError(f"geometry.{name} must be a non-empty subset of box,disk,capsule")
    if cfg.representation.n_rays < 4:
        raise ConfigError("representation.n_rays must be >= 4")
    r = cfg.randomization
    for lo, hi in (("mass_lo", "mass_hi"), ("friction_lo", "friction_hi"),
                   ("restitution_lo", "restitution_hi")):
        if getattr(r, hi) < getattr(r, lo):
            raise ConfigError(f"randomization.{hi} must be >= randomization.{lo}")
    if r.mass_lo <= 0:
        raise ConfigError("randomization.mass_lo must be > 0")
    if not (0 <= cfg.training.gamma <= 1):
        raise ConfigError("training.gamma must lie in [0, 1]")
    if not cfg.eval.scales:
        raise ConfigError("eval.scales must be non-empty")
    return cfg


def default_config() -> Config:
    return Config()
