pub mod biot_savart;
pub mod conv;
pub mod error;
pub mod fields;
pub mod moc;
pub mod pressure;
pub mod quad;
pub mod scenario;
pub mod serfati;
pub mod solver;
pub mod verify;

pub use error::{Error, Result};
