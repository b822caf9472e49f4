pub mod algebra;
pub mod error;
pub mod linalg;
pub mod morphism;
pub mod state;
pub mod entropy;
pub mod disintegration;
pub mod harness;
pub mod cli;
pub mod json;
