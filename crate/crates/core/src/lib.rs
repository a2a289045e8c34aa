//! Resonances of short-range radial barriers.
//!
//! * [`wkb`] locates sub-barrier resonances with the extended WKB quantization
//!   rule and assigns widths from the barrier penetration integral.
//! * [`siegert`] integrates the radial equation at complex energy and refines
//!   those seeds against the purely outgoing boundary condition.
//! * [`darboux`] turns a Siegert solution into complex first-order and real
//!   second-order ("haired") partner potentials.
//!
//! Energies use `hbar^2 / 2m = 1`, so `E = k^2`.

// quadrature nodes and reference values are kept at published digits;
// negated float comparisons are deliberate so NaN lands on the error path
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod darboux;
pub mod error;
pub mod potential;
pub mod quadrature;
pub mod roots;
pub mod siegert;
pub mod turning;
pub mod wkb;

pub use darboux::{beta_function, first_partner, riccati_residual, second_partner, BetaSamples, PartnerPotential};
pub use error::{ResonanceError, Result};
pub use potential::{BarrierSummit, Potential, TabulatedPotential};
pub use quadrature::{action_w, barrier_omega, beta_zero, classical_period, gamma_constant, kinetic_parameter, PhaseIntegrals};
pub use siegert::{integrate_radial, refine_resonance, siegert_mismatch, ComplexEnergy, Shooter, WaveSolution};
pub use turning::{find_turning_points, TurningPair};
pub use wkb::{compute_width, count_resonances, count_resonances_bbjs, locate_position, resonance, resonance_spectrum, Resonance};
