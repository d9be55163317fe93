pub mod analysis;
pub mod arith;
pub mod cli;
pub mod codec;
pub mod error;
pub mod map;
pub mod plot;
pub mod shift;
pub mod verify;
