//! The benchmark domains.

pub mod blocksworld;
pub mod crosswords;
pub mod game24;
