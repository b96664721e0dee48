pub mod rat;
pub mod oct;
