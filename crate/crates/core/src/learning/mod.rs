//! Actor-critic learning with prioritized replay and the APD filter.

mod agent;
pub mod encoding;
mod filter;
pub mod nn;
mod replay;

pub use agent::{A2cAgent, A2cConfig, Gradients, Losses, ParamSnapshot};
pub use filter::{apply_filter, argmax, sample_index, ApdFilter, FilterMode};
pub use nn::{Adam, Mlp};
pub use replay::{ReplayMemory, Sample, SumTree, Transition};
