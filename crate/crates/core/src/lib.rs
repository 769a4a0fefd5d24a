pub mod cli;
pub mod frontal;
pub mod graph;
pub mod imgseq;
pub mod lle;
pub mod synth;
