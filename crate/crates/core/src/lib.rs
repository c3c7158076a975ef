pub mod dgp;
pub mod cli;
pub mod error;
pub mod harness;
pub mod model;
pub mod optimize;
pub mod presets;

pub use error::{Error, Result};
pub use model::{Dataset, LikelihoodEval, ParamVector};
