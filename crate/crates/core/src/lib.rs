pub mod angle;
pub mod benchgen;
pub mod circuit;
pub mod decompose;
pub mod error;
pub mod hardware;
pub mod metrics;
pub mod oracle;
pub mod pipeline;
pub mod routing;

pub use circuit::{Circuit, Gate, Moment, MomentKind, Offset};
pub use error::{Error, Result};
