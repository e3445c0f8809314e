pub mod codec;
pub mod curve;
pub mod error;
pub mod field;
pub mod hash;
pub mod identity;
pub mod ledger;
pub mod novel;
pub mod pairing;
pub mod schemes;
pub mod scorecard;

pub use error::{Error, Result};
pub use identity::Identity;
