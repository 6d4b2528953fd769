pub mod algorithms;
pub mod engine;
pub mod experiments;
pub mod graph;
pub mod verify;
