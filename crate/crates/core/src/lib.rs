//! Qubit mapping and routing for devices with restricted connectivity.

pub mod arch;
pub mod circuit;
pub mod cli;
pub mod mapping;
pub mod peephole;
pub mod pipeline;
pub mod placement;
pub mod qasm;
pub mod router;
pub mod tiebreak;
pub mod verify;
