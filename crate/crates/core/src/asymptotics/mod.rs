pub mod airy;
pub mod envelope;
pub mod phase;
pub mod predict;
