pub mod analysis;
pub mod cli;
pub mod codes;
pub mod error;
pub mod forms;
pub mod gf2;
pub mod group;
