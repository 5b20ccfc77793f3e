//! Pulsed quantum-dot–microcavity single-photon source: purity and
//! Hong–Ou–Mandel indistinguishability.
//!
//! The crate models a three-level quantum dot (pump level, exciton, ground)
//! coupled to one cavity mode, truncated to the single-excitation manifold.
//! It offers
//!
//! * closed forms for the Purcell-enhanced decay rate, the two-photon
//!   interference visibility and the HOM dip versus delay,
//! * a dense Lindblad/TCL2 solver with quantum-regression two-time
//!   correlation functions and a numerical HOM pipeline,
//! * an exciton–phonon dissipator built from a superohmic spectral density,
//! * derivative-free least-squares fits of lifetime, dip, visibility and
//!   Michelson data,
//! * file formats and a command-line front end (`qd-hom`).
//!
//! Internal units are meV, ps, ps⁻¹ and K throughout; conversions from μeV
//! and ns happen at the IO boundary.
//!
//! Runnable examples live in `examples/`:
//!
//! ```bash
//! cargo run --release -p qd-hom --example purcell_lifetime
//! cargo run --release -p qd-hom --example hom_dip
//! cargo run --release -p qd-hom --example phonon_asymmetry
//! ```

pub mod cli;
pub mod correlations;
pub mod dynamics;
pub mod error;
pub mod fitting;
pub mod io;
pub mod linalg;
pub mod model;
pub mod phonon;
pub mod units;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, Superoperator, C64};
pub use model::{EffectiveParams, EmissionChannel, EmitterModel, SystemParams};
pub use phonon::PhononParams;
