pub mod dilation;
pub mod dynmaps;
pub mod error;
pub mod models;
pub mod sweep;
pub mod tensor;

pub use error::{Error, Result};
pub use tensor::CMatrix;
