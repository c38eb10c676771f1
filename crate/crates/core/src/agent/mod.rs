//! Deep Q-learning agent for dismantling.
//!
//! The state is the residual hypernetwork, an action removes one node, and the
//! reward after each removal is minus the remaining connectivity. Experiences
//! are n-step windows over an episode's decision sequence.

mod episode;
mod loss;
mod replay;
mod train;

pub use episode::{extract_experiences, reward, run_episode, select_action, Episode, Experience, Termination};
pub use loss::{recon_grad, recon_loss, td_loss, td_target, total_loss, total_loss_and_grad, LossConfig};
pub use replay::ReplayBuffer;
pub use train::{
    initial_params, mean_agent_anc, train, train_with, validation_set, TrainConfig, TrainEvent, TrainReport,
    ValidationPoint,
};
