//! TurboNet: the unrolled, weight-parameterized max-log-MAP turbo decoder.
//!
//! Each of the `M` decoding units replaces one turbo iteration with two
//! subnets. A subnet is a max-log-MAP SISO decoder whose branch metrics,
//! posterior reductions and extrinsic outputs carry one multiplicative weight
//! per term and per trellis position. The forward and backward state
//! recursions stay unweighted. With every weight equal to one the network is
//! exactly the max-log-MAP turbo decoder.
//!
//! Training minimizes the mean squared distance between the network's final
//! a posteriori LLRs and those of a log-MAP decoder run for more iterations,
//! with hand-written reverse-mode gradients and ADAM.

mod adam;
mod model;
mod subnet;
mod train;
mod weights;

pub use adam::{adam_step, AdamConfig, AdamState};
pub use model::{
    backward, forward_with_tape, loss, loss_and_gradient, sigmoid, turbonet_forward, ForwardTape,
    TurboNetOutput,
};
pub use subnet::{
    subnet_forward, weighted_branch_metrics, weighted_extrinsic, weighted_posterior, SubnetInput,
    SubnetTape,
};
pub use train::{
    batch_gradient, generate_sample, generate_training_set, train, train_with_observer,
    EpochRecord, TrainingConfig, TrainingOutcome, TrainingSample,
};
pub use weights::{
    parameter_count_formula, WeightSet, EXT_WEIGHTS, GAMMA_WEIGHTS, LLR_WEIGHTS, SUBNETS,
    WEIGHTS_PER_POSITION,
};
