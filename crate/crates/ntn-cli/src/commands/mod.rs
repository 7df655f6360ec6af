pub mod common;
pub mod coverage;
pub mod localize;
pub mod sample;
pub mod study;
pub mod topology;
