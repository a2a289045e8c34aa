use thiserror::Error;

/// Failure modes shared by the solver modules.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ResonanceError {
    #[error("invalid potential parameters: {0}")]
    InvalidPotential(String),

    #[error("radius {r} outside tabulated range [{lo}, {hi}]")]
    OutOfRange { r: f64, lo: f64, hi: f64 },

    #[error("tabulated potential has no interior maximum")]
    NoInteriorMaximum,

    #[error("energy {energy} is at or above the barrier summit {v_max}")]
    EnergyAboveBarrier { energy: f64, v_max: f64 },

    #[error("energy {energy} does not exceed V(0) = {v_origin}")]
    EnergyNonPositive { energy: f64, v_origin: f64 },

    #[error("no outer turning point found for energy {0}")]
    NoOuterTurningPoint(f64),

    #[error("root not bracketed on [{lo}, {hi}]")]
    NotBracketed { lo: f64, hi: f64 },

    #[error("interval [{c}, {r}] is not classically allowed at energy {energy}")]
    IntervalNotAllowed { c: f64, r: f64, energy: f64 },

    #[error("interval [{a}, {b}] is not classically forbidden at energy {energy}")]
    IntervalNotForbidden { a: f64, b: f64, energy: f64 },

    #[error("adaptive quadrature did not reach tolerance (estimated error {0:e})")]
    QuadratureFailed(f64),

    #[error("no resonance with index {0} below the barrier summit")]
    NoSuchResonance(usize),

    #[error("r_max = {r_max} is not in the asymptotic region (|V| = {v:e})")]
    NotAsymptotic { r_max: f64, v: f64 },

    #[error("integration step {0} too coarse: plug-back residual {1:e}")]
    StepTooCoarse(f64, f64),

    #[error("wavefunction vanishes at the matching radius {0}")]
    NodeAtMatchPoint(f64),

    #[error("secant refinement did not converge after {0} iterations")]
    NoConvergence(usize),

    #[error("refinement left the seed basin: seed Re = {seed}, converged Re = {found}")]
    WrongBasin { seed: f64, found: f64 },

    #[error("wavefunction has an interior node at r = {0}")]
    InteriorNode(f64),

    #[error("second partner is not real: |Im| = {0:e}")]
    RealityViolation(f64),

    #[error("{0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, ResonanceError>;
