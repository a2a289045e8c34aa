//! Complex-energy shooting of the s-wave radial equation and refinement of
//! resonance seeds against the purely outgoing (Siegert) boundary condition.

use std::io::Write;

use num_complex::Complex64;

use crate::error::{ResonanceError, Result};
use crate::potential::Potential;

/// Samples are rescaled once `|psi|` passes this cap.
pub const RENORM_CAP: f64 = 1e100;
pub const DEFAULT_R_MAX: f64 = 40.0;
pub const DEFAULT_STEP: f64 = 1e-3;
pub const MAX_SECANT_ITER: usize = 50;

const ASYMPTOTIC_TOL: f64 = 1e-12;
const RESIDUAL_TOL: f64 = 1e-3;
const MISMATCH_TOL: f64 = 1e-8;
const STEP_TOL: f64 = 1e-10;
const BASIN_FRACTION: f64 = 0.25;

/// Complex energy `E - i Gamma/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexEnergy {
    pub re: f64,
    pub im: f64,
}

impl ComplexEnergy {
    pub fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    pub fn as_complex(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    /// `k = sqrt(eps)` on the branch with `Re k > 0`.
    pub fn momentum(self) -> Complex64 {
        let k = self.as_complex().sqrt();
        if k.re < 0.0 {
            -k
        } else {
            k
        }
    }

    /// Resonances sit below the real axis with `k` in the fourth quadrant.
    pub fn is_resonance_like(self) -> bool {
        let k = self.momentum();
        self.im < 0.0 && k.re > 0.0 && k.im < 0.0
    }
}

impl From<Complex64> for ComplexEnergy {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

/// Outward solution of `psi'' = (V - eps) psi` with `psi(0) = 0`, `psi'(0) = 1`.
///
/// True values are `psi[i] * exp(log_norm[i])`; `log_norm` only changes where
/// the integrator rescaled to stay below [`RENORM_CAP`].
#[derive(Debug, Clone, PartialEq)]
pub struct WaveSolution {
    pub step: f64,
    pub radii: Vec<f64>,
    pub psi: Vec<Complex64>,
    pub dpsi: Vec<Complex64>,
    pub log_norm: Vec<f64>,
    pub energy: ComplexEnergy,
    /// Normalized second-difference defect measured after integration.
    pub residual: f64,
}

impl WaveSolution {
    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    /// `ln |psi_i|` including the stored rescaling.
    pub fn log_abs(&self, i: usize) -> f64 {
        self.psi[i].norm().ln() + self.log_norm[i]
    }

    /// Writes `r,re_psi,im_psi,log_norm`, normalized so `max |psi| = 1`.
    ///
    /// Rows whose normalized magnitude would underflow keep their stored
    /// mantissa and carry the remaining exponent in `log_norm`.
    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let peak = (0..self.len())
            .map(|i| self.log_abs(i))
            .filter(|x| x.is_finite())
            .fold(f64::NEG_INFINITY, f64::max);
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["r", "re_psi", "im_psi", "log_norm"])?;
        for i in 0..self.len() {
            let shift = self.log_norm[i] - peak;
            let (z, ln) = if shift > -600.0 {
                (self.psi[i] * shift.exp(), 0.0)
            } else {
                (self.psi[i], shift)
            };
            w.write_record([
                format!("{:.16e}", self.radii[i]),
                format!("{:.16e}", z.re),
                format!("{:.16e}", z.im),
                format!("{:.16e}", ln),
            ])?;
        }
        w.flush()
    }
}

/// Fixed-step classical Runge-Kutta on the first-order system `(psi, psi')`.
pub fn integrate_radial(p: &Potential, eps: ComplexEnergy, r_max: f64, h: f64) -> Result<WaveSolution> {
    if !(h > 0.0 && r_max > 0.0) {
        return Err(ResonanceError::Config(format!(
            "integration needs h > 0 and r_max > 0, got h = {h}, r_max = {r_max}"
        )));
    }
    let steps = (r_max / h).round() as usize;
    if steps < 4 {
        return Err(ResonanceError::StepTooCoarse(h, f64::INFINITY));
    }
    let r_end = steps as f64 * h;
    if r_end > p.domain_end() {
        return Err(ResonanceError::OutOfRange {
            r: r_end,
            lo: 0.0,
            hi: p.domain_end(),
        });
    }
    let e = eps.as_complex();
    let v_tail = p.value(r_end);
    if v_tail.abs() >= ASYMPTOTIC_TOL * e.norm() {
        return Err(ResonanceError::NotAsymptotic {
            r_max: r_end,
            v: v_tail,
        });
    }

    let mut radii = Vec::with_capacity(steps + 1);
    let mut psi = Vec::with_capacity(steps + 1);
    let mut dpsi = Vec::with_capacity(steps + 1);
    let mut log_norm = Vec::with_capacity(steps + 1);

    let mut y = Complex64::new(0.0, 0.0);
    let mut dy = Complex64::new(1.0, 0.0);
    let mut scale = 0.0;
    radii.push(0.0);
    psi.push(y);
    dpsi.push(dy);
    log_norm.push(scale);

    let q = |r: f64| Complex64::new(p.value(r), 0.0) - e;
    let mut q0 = q(0.0);
    for i in 0..steps {
        let r = i as f64 * h;
        let qm = q(r + 0.5 * h);
        let q1 = q(r + h);

        let k1y = dy;
        let k1d = q0 * y;
        let k2y = dy + 0.5 * h * k1d;
        let k2d = qm * (y + 0.5 * h * k1y);
        let k3y = dy + 0.5 * h * k2d;
        let k3d = qm * (y + 0.5 * h * k2y);
        let k4y = dy + h * k3d;
        let k4d = q1 * (y + h * k3y);
        y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        dy += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
        q0 = q1;

        let mag = y.norm();
        if mag > RENORM_CAP {
            y /= mag;
            dy /= mag;
            scale += mag.ln();
        }
        radii.push((i + 1) as f64 * h);
        psi.push(y);
        dpsi.push(dy);
        log_norm.push(scale);
    }

    let mut sol = WaveSolution {
        step: h,
        radii,
        psi,
        dpsi,
        log_norm,
        energy: eps,
        residual: 0.0,
    };
    sol.residual = plug_back_residual(p, &sol);
    if !(sol.residual < RESIDUAL_TOL) {
        return Err(ResonanceError::StepTooCoarse(h, sol.residual));
    }
    Ok(sol)
}

/// `max_i |psi_{i-1} - 2 psi_i + psi_{i+1} - h^2 (V_i - eps) psi_i|`, divided by
/// `h^2 max|psi| max|V - eps|`. Neighbours are brought to a common scale first.
pub fn plug_back_residual(p: &Potential, w: &WaveSolution) -> f64 {
    let h = w.step;
    let e = w.energy.as_complex();
    let n = w.len();
    let mut log_peak = f64::NEG_INFINITY;
    let mut q_peak: f64 = 0.0;
    for i in 0..n {
        log_peak = log_peak.max(w.log_abs(i));
        q_peak = q_peak.max((p.value(w.radii[i]) - e).norm());
    }
    let mut worst = f64::NEG_INFINITY;
    for i in 1..n - 1 {
        let lm = (w.log_norm[i - 1] - w.log_norm[i]).exp();
        let lp = (w.log_norm[i + 1] - w.log_norm[i]).exp();
        let q = Complex64::new(p.value(w.radii[i]), 0.0) - e;
        let d = w.psi[i - 1] * lm - 2.0 * w.psi[i] + w.psi[i + 1] * lp - h * h * q * w.psi[i];
        let m = d.norm();
        if m > 0.0 {
            worst = worst.max(m.ln() + w.log_norm[i]);
        }
    }
    (worst - log_peak).exp() / (h * h * q_peak.max(f64::MIN_POSITIVE))
}

/// Integration settings for the Siegert shooter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shooter {
    pub step: f64,
    pub r_match: f64,
}

impl Default for Shooter {
    fn default() -> Self {
        Self {
            step: DEFAULT_STEP,
            r_match: DEFAULT_R_MAX,
        }
    }
}

/// Values of the outgoing-wave conditions at one trial energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mismatch {
    /// `psi'/psi - i k` at the matching radius.
    pub log_derivative: Complex64,
    /// Coefficient of `exp(-i k r)` in the asymptotic solution.
    pub incoming: Complex64,
}

/// Result of a secant refinement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Refinement {
    pub energy: ComplexEnergy,
    pub iterations: usize,
    pub mismatch: Complex64,
}

impl Shooter {
    pub fn new(step: f64, r_match: f64) -> Self {
        Self { step, r_match }
    }

    pub fn integrate(&self, p: &Potential, eps: ComplexEnergy) -> Result<WaveSolution> {
        integrate_radial(p, eps, self.r_match, self.step)
    }

    pub fn mismatch(&self, p: &Potential, eps: ComplexEnergy) -> Result<Mismatch> {
        let w = self.integrate(p, eps)?;
        mismatch_at_end(&w)
    }

    /// Secant iteration on the incoming amplitude, started at `seed` and
    /// `seed (1 + 1e-4)`.
    ///
    /// The incoming amplitude is used instead of `psi'/psi - ik` because the
    /// latter decays like `exp(2 Im(k) r)` deep in the lower half plane and so
    /// has spurious near-zeros there; both vanish together at a resonance.
    pub fn refine(&self, p: &Potential, seed: ComplexEnergy) -> Result<Refinement> {
        let mut e0 = seed.as_complex();
        let mut e1 = e0 * (1.0 + 1e-4);
        let mut f0 = self.mismatch(p, e0.into())?.incoming;
        let mut last = self.mismatch(p, e1.into())?;
        let mut f1 = last.incoming;

        for iter in 1..=MAX_SECANT_ITER {
            let denom = f1 - f0;
            if denom.norm() == 0.0 {
                break;
            }
            let e2 = e1 - f1 * (e1 - e0) / denom;
            if !(e2.re.is_finite() && e2.im.is_finite()) {
                break;
            }
            e0 = e1;
            f0 = f1;
            e1 = e2;
            last = self.mismatch(p, e1.into())?;
            f1 = last.incoming;

            let moved = (e1 - e0).norm();
            if moved < STEP_TOL * e1.norm().max(1.0) && last.log_derivative.norm() < MISMATCH_TOL {
                if (e1.re - seed.re).abs() > BASIN_FRACTION * seed.re.abs() {
                    return Err(ResonanceError::WrongBasin {
                        seed: seed.re,
                        found: e1.re,
                    });
                }
                return Ok(Refinement {
                    energy: e1.into(),
                    iterations: iter,
                    mismatch: last.log_derivative,
                });
            }
        }
        Err(ResonanceError::NoConvergence(MAX_SECANT_ITER))
    }
}

/// Evaluates both outgoing-wave conditions from the last usable sample,
/// stepping inward once if `psi` vanishes at the matching radius.
pub fn mismatch_at_end(w: &WaveSolution) -> Result<Mismatch> {
    let last = w.len() - 1;
    let k = w.energy.momentum();
    let ik = Complex64::i() * k;
    for i in [last, last - 1] {
        let psi = w.psi[i];
        if psi.norm() < 1e-280 || !psi.norm().is_finite() {
            continue;
        }
        let dpsi = w.dpsi[i];
        let r = w.radii[i];
        let incoming = (ik * psi - dpsi) * (ik * r + w.log_norm[i]).exp() / (2.0 * ik);
        return Ok(Mismatch {
            log_derivative: dpsi / psi - ik,
            incoming,
        });
    }
    Err(ResonanceError::NodeAtMatchPoint(w.radii[last]))
}

/// `psi'(r_match)/psi(r_match) - i k` with the default step.
pub fn siegert_mismatch(p: &Potential, eps: ComplexEnergy, r_match: f64) -> Result<Complex64> {
    Shooter::new(DEFAULT_STEP, r_match)
        .mismatch(p, eps)
        .map(|m| m.log_derivative)
}

/// Refines a seed (typically the WKB eigenvalue) with default settings.
pub fn refine_resonance(p: &Potential, seed: ComplexEnergy) -> Result<ComplexEnergy> {
    Shooter::default().refine(p, seed).map(|r| r.energy)
}
