pub mod analysis;
pub mod error;
pub mod exactreal;
pub mod gpexpr;
pub mod pisot;
pub mod poly;
pub mod sclab;
pub mod verify;
pub mod words;

pub use error::{Error, ErrorKind, Result};
