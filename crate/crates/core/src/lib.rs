//! Entanglement and quantum discord of pseudo-entangled two-qubit states seen
//! by a uniformly accelerated observer.
//!
//! * [`linalg`]: dense complex matrices, partial trace/transpose, Jacobi eigensolver.
//! * [`states`]: state families and the single-mode fermionic Unruh channel.
//! * [`measures`]: logarithmic negativity, concurrence, entanglement of formation,
//!   mutual information and directional discord.
//! * [`analysis`]: parameter sweeps, separability thresholds and the claim checks.

pub mod analysis;
pub mod error;
pub mod linalg;
pub mod measures;
mod optimize;
pub mod states;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, EigenResult, SubsystemDims, C64};
pub use measures::{Bipartition, DiscordMethod, DiscordOptions, DiscordResult, MeasurementPoint, OracleResolution, Side};
pub use states::{AcceleratedSlot, AlphaBeta, FractionP, RindlerR};
