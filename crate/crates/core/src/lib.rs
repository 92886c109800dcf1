pub mod bounds;
pub mod circle;
pub mod cli;
pub mod generate;
pub mod harness;
pub mod poly;
