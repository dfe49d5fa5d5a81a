pub mod discrimination;
pub mod error;
pub mod io;
pub mod multichannel;
pub mod operator;
pub mod quantum;
pub mod robustness;
pub mod schmidt;
pub mod sdp;
pub mod tol;

pub use error::{Error, Result};
