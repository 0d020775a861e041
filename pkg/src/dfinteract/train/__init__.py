"""Training pipeline: scripted teacher, DAgger cloning, adversarial-prior
PPO post-training, and depth-scan distillation."""

from .aip import ReferenceBuffer, aip_update, build_ref_buffer
from .dagger import AggregateDataset, bc_update, collect_dagger
from .distill import collect_distill, distill_stage, distill_update
from .kinematic import collect_kinematic_data
from .pipeline import (ABLATIONS, FULL, MLP_BACKBONE_NOTE, NO_AIP,
                       NO_RANDOMIZATION, NO_RL, NO_SYNTHETIC, VARIANTS,
                       apply_variant, load_pipeline, run_pipeline, variant_diff)
from .ppo import (gae_advantages, policy_loss_and_grads, ppo_update,
                  value_loss_and_grad, value_of)
from .rewards import (AMP_FEATURE_DIM, AMP_FRAME_DIM, RewardBreakdown,
                      RewardWeights, Transition, amp_feature, amp_frame,
                      compute_rewards, discriminator_reward)
from .rollout import (EnvPool, StepResult, policy_act_fn, run_episode,
                      slot_seed, teacher_act_fn, vision_act_fn)
from .stages import (PUSH_QUAL_RATE, MetricsLog, collect_teacher_data,
                     episode_success, qualify_teacher, task_sampler,
                     train_bc_stage, train_rl_stage, train_track_stage,
                     train_vae_stage)
from .teacher import TeacherContext, teacher_action

__all__ = [
    "ABLATIONS", "AMP_FEATURE_DIM", "AMP_FRAME_DIM", "AggregateDataset",
    "EnvPool", "FULL", "MLP_BACKBONE_NOTE", "MetricsLog", "NO_AIP",
    "NO_RANDOMIZATION", "NO_RL", "NO_SYNTHETIC", "PUSH_QUAL_RATE",
    "ReferenceBuffer", "RewardBreakdown", "RewardWeights", "StepResult",
    "TeacherContext", "Transition", "VARIANTS", "aip_update", "amp_feature",
    "amp_frame", "apply_variant", "bc_update", "build_ref_buffer",
    "collect_dagger", "collect_distill", "collect_kinematic_data",
    "collect_teacher_data", "compute_rewards", "discriminator_reward",
    "distill_stage", "distill_update", "episode_success", "gae_advantages",
    "load_pipeline", "policy_act_fn", "policy_loss_and_grads", "ppo_update",
    "qualify_teacher", "run_episode", "run_pipeline", "slot_seed",
    "task_sampler", "teacher_act_fn", "teacher_action", "train_bc_stage",
    "train_rl_stage", "train_track_stage", "train_vae_stage",
    "value_loss_and_grad", "value_of", "variant_diff", "vision_act_fn",
]
