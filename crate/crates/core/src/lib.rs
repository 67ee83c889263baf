pub mod dimension;
pub mod error;
pub mod functions;
pub mod group;
pub mod hamming;
pub mod metric;

pub use error::{Error, Result};
pub use group::{Element, GroupSpec, Window, WindowShape};
pub use metric::{DistanceResult, GeneratorSpec, GeneratorSystem};
