//! Minimal tensor engine with hand-derived backward passes.
//!
//! Everything is `f64` and deterministic: convolutions run as im2col GEMMs
//! split into fixed row blocks, so results do not depend on thread count,
//! and all randomness (init, shuffling, augmentation) is seed-derived.

pub mod adam;
pub mod augment;
pub mod infer;
pub mod layers;
pub mod model_io;
pub mod tensor;
pub mod train;
pub mod unet;

mod gemm;

pub use adam::{AdamConfig, AdamState};
pub use augment::{copy_paste_augment, AugmentConfig};
pub use infer::{clean_image, predict_artifact_layer};
pub use layers::{
    concat_channels, conv2d_backward, conv2d_forward, convtranspose2x2_backward,
    convtranspose2x2_forward, gelu, gelu_backward, maxpool2x2_backward, maxpool2x2_forward,
    split_channels_backward, weighted_l1_loss, LossConfig,
};
pub use model_io::{load_model, save_model};
pub use tensor::Tensor4;
pub use train::{train, EpochStats, TrainConfig};
pub use unet::{count_parameters, unet_backward, unet_forward, UNetConfig, UNetModel};
