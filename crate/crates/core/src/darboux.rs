//! First- and second-order Darboux partners of a barrier built from a
//! Siegert solution.
//!
//! With `beta = -psi'/psi` solving `-beta' + beta^2 = V - eps`, the first
//! partner is `V + 2 beta'` (complex) and composing with the conjugate factor
//! gives the real partner `V + 2 (beta + beta*)'`.

use std::io::Write;

use num_complex::Complex64;

use crate::error::{ResonanceError, Result};
use crate::potential::Potential;
use crate::siegert::{ComplexEnergy, WaveSolution};

/// Nodes closer to the origin than this many steps are dropped from partners.
pub const ORIGIN_EXCLUSION_STEPS: usize = 5;

const REALITY_TOL: f64 = 1e-8;

/// `beta = -psi'/psi` on the solution grid, origin excluded.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaSamples {
    pub step: f64,
    pub radii: Vec<f64>,
    pub values: Vec<Complex64>,
    pub energy: ComplexEnergy,
}

/// Logarithmic derivative from the integrator's simultaneous `(psi, psi')`.
pub fn beta_function(w: &WaveSolution) -> Result<BetaSamples> {
    let mut radii = Vec::with_capacity(w.len().saturating_sub(1));
    let mut values = Vec::with_capacity(w.len().saturating_sub(1));
    for i in 1..w.len() {
        let psi = w.psi[i];
        if psi.norm() < 1e-280 {
            return Err(ResonanceError::InteriorNode(w.radii[i]));
        }
        radii.push(w.radii[i]);
        values.push(-w.dpsi[i] / psi);
    }
    Ok(BetaSamples {
        step: w.step,
        radii,
        values,
        energy: w.energy,
    })
}

/// `beta'` from the Riccati identity `beta' = beta^2 - (V - eps)`.
fn beta_prime<'a>(p: &'a Potential, beta: &'a BetaSamples) -> impl Iterator<Item = Complex64> + 'a {
    let e = beta.energy.as_complex();
    beta.radii
        .iter()
        .zip(&beta.values)
        .map(move |(&r, &b)| b * b - (p.value(r) - e))
}

/// `V + 2 beta'`.
pub fn first_partner(p: &Potential, beta: &BetaSamples) -> Vec<Complex64> {
    beta.radii
        .iter()
        .zip(beta_prime(p, beta))
        .map(|(&r, bp)| p.value(r) + 2.0 * bp)
        .collect()
}

/// `V + 2 (beta + beta*)'`; fails if the composed values are not real.
pub fn second_partner(p: &Potential, beta: &BetaSamples) -> Result<Vec<f64>> {
    let raw: Vec<Complex64> = beta
        .radii
        .iter()
        .zip(beta_prime(p, beta))
        .map(|(&r, bp)| p.value(r) + 2.0 * (bp + bp.conj()))
        .collect();
    let scale = raw.iter().map(|z| z.re.abs()).fold(0.0, f64::max);
    let imag = raw.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if imag > REALITY_TOL * scale {
        return Err(ResonanceError::RealityViolation(imag));
    }
    Ok(raw.into_iter().map(|z| z.re).collect())
}

/// Finite-difference audit of the Riccati equation:
/// `max |-beta'_fd + beta^2 - (V - eps)|` over interior nodes with `r >= r_min`.
///
/// `beta` has a `-1/r` pole at the origin, so the central difference error
/// there scales like `h^2 / r^4`; `r_min` keeps the audit on the region where
/// the check is meaningful.
pub fn riccati_residual(beta: &BetaSamples, p: &Potential, eps: ComplexEnergy, r_min: f64) -> f64 {
    let e = eps.as_complex();
    let h = beta.step;
    let b = &beta.values;
    (1..b.len().saturating_sub(1))
        .filter(|&i| beta.radii[i] >= r_min)
        .map(|i| {
            let fd = (b[i + 1] - b[i - 1]) / (2.0 * h);
            (-fd + b[i] * b[i] - (p.value(beta.radii[i]) - e)).norm()
        })
        .fold(0.0, f64::max)
}

/// Partner potentials on the solution grid beyond the origin exclusion zone.
#[derive(Debug, Clone, PartialEq)]
pub struct PartnerPotential {
    pub radii: Vec<f64>,
    pub base: Vec<f64>,
    pub first_order: Vec<Complex64>,
    pub second_order: Vec<f64>,
    pub seed_energy: ComplexEnergy,
}

impl PartnerPotential {
    pub fn build(p: &Potential, w: &WaveSolution) -> Result<Self> {
        let beta = beta_function(w)?;
        let first = first_partner(p, &beta);
        let second = second_partner(p, &beta)?;
        let r_min = ORIGIN_EXCLUSION_STEPS as f64 * w.step;
        let keep: Vec<usize> = (0..beta.radii.len())
            .filter(|&i| beta.radii[i] >= r_min - 0.5 * w.step)
            .collect();
        Ok(Self {
            radii: keep.iter().map(|&i| beta.radii[i]).collect(),
            base: keep.iter().map(|&i| p.value(beta.radii[i])).collect(),
            first_order: keep.iter().map(|&i| first[i]).collect(),
            second_order: keep.iter().map(|&i| second[i]).collect(),
            seed_energy: w.energy,
        })
    }

    /// Writes `r,V,re_V1,im_V1,V2`.
    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["r", "V", "re_V1", "im_V1", "V2"])?;
        for i in 0..self.radii.len() {
            w.write_record([
                format!("{:.16e}", self.radii[i]),
                format!("{:.16e}", self.base[i]),
                format!("{:.16e}", self.first_order[i].re),
                format!("{:.16e}", self.first_order[i].im),
                format!("{:.16e}", self.second_order[i]),
            ])?;
        }
        w.flush()
    }

    /// `|V2 - V|` at the outer end of the grid.
    pub fn tail_deviation(&self) -> f64 {
        let i = self.radii.len() - 1;
        (self.second_order[i] - self.base[i]).abs()
    }
}
