//! Transfer-matrix simulation of cascaded Mach-Zehnder interferometer chains.
//!
//! The crate composes 50:50 beam splitters and phase shifters into the
//! lower-arm block `D`, the upper-arm block `D'` and their product, the
//! cross-coupled double block `CM = D' D`. Chains of `n` such blocks produce
//! a second-order intensity correlation whose fringe period is `pi / 2n`,
//! i.e. an effective wavelength of `lambda0 / 4n`.
//!
//! Everything here is `no_std` (with `alloc`): file formats, the command line
//! and parallel execution live in the `cohpbw` crate.
//!
//! ```
//! use cohpbw_core::{analysis, ChainConfig};
//!
//! let cfg = ChainConfig::lossless(2).unwrap();
//! let trace = analysis::g2_trace(&cfg, 4096, core::f64::consts::TAU).unwrap();
//! let result = analysis::analyze(&trace, cfg.lambda0).unwrap();
//! assert_eq!(result.inferred_n, 2);
//! assert_eq!(result.equivalent_photon_number, 8);
//! ```
#![no_std]
#![warn(missing_docs)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod circuit;
pub mod elements;
mod error;
pub mod linalg;
pub mod noise;

pub use analysis::{AnalysisResult, CoherenceBudget, CorrelationTrace, TraceSource};
pub use circuit::{Arm, Circuit, PhaseExpr, Stmt};
pub use elements::{ChainConfig, MagicPhase};
pub use error::{Error, Result};
pub use linalg::{ComplexAmplitude, FieldPair, TransferMatrix};
pub use noise::{JitterMode, NoiseConfig, NoisyTrace};
