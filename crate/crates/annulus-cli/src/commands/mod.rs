pub mod evaluate;
pub mod extract;
pub mod report;
pub mod select;
pub mod synth;
pub mod train;
