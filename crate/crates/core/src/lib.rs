//! Exact solver and verifier for the radius-r splitter game.

pub mod bounds;
pub mod generators;
pub mod graph;
pub mod play;
pub mod rank;
pub mod server;
pub mod verify;
pub mod witness;
