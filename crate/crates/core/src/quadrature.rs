//! Phase integrals over classically allowed and forbidden regions.
//!
//! Integrands with a square-root zero (or an inverse square-root pole) at a
//! turning point are mapped through `r = c +/- t^2`, which makes them smooth in
//! `t` so the Gauss-Kronrod panels converge at their design order.

use std::sync::OnceLock;

use crate::error::{ResonanceError, Result};
use crate::potential::Potential;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const MAX_PANELS: usize = 4000;

/// One 15-point Kronrod panel with its embedded 7-point Gauss error estimate.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = half * XGK[j];
        let sum = f(center - x) + f(center + x);
        kronrod += WGK[j] * sum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * sum;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Globally adaptive Gauss-Kronrod integration of `f` on `[a, b]`.
///
/// Splits the panel with the largest error estimate until the summed estimate
/// is below `max(abs_tol, rel_tol * |I|)`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let (v, e) = gk15(&f, a, b);
    let mut panels = vec![(a, b, v, e)];
    let mut total = v;
    let mut error = e;

    while error > abs_tol.max(rel_tol * total.abs()) {
        if panels.len() >= MAX_PANELS {
            return Err(ResonanceError::QuadratureFailed(error));
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap();
        let (lo, hi, v, e) = panels.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            // panel at machine resolution; accept what we have
            panels.push((lo, hi, v, 0.0));
            error -= e;
            continue;
        }
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        panels.push((lo, mid, v1, e1));
        panels.push((mid, hi, v2, e2));
        total += v1 + v2 - v;
        error += e1 + e2 - e;
        if error < 0.0 {
            error = panels.iter().map(|p| p.3).sum();
        }
    }
    // resum to shed accumulated update rounding
    Ok(panels.iter().map(|p| p.2).sum())
}

/// Integrates `g(r)` over `[lo, hi]` by splitting at the midpoint and mapping
/// each half with `r = endpoint +/- t^2` anchored at its outer end.
fn integrate_endpoint_mapped<G: Fn(f64) -> f64>(g: G, lo: f64, hi: f64, abs_tol: f64) -> Result<f64> {
    if hi <= lo {
        return Ok(0.0);
    }
    let mid = 0.5 * (lo + hi);
    let half = (mid - lo).sqrt();
    let left = integrate(|t| 2.0 * t * g(lo + t * t), 0.0, half, 0.5 * abs_tol, 1e-14)?;
    let right = integrate(|t| 2.0 * t * g(hi - t * t), 0.0, half, 0.5 * abs_tol, 1e-14)?;
    Ok(left + right)
}

const ACTION_TOL: f64 = 1e-11;
const PERIOD_TOL: f64 = 1e-10;
const SIGN_PROBES: usize = 256;

/// `p(r) = sqrt(|E - V(r)|)`.
pub fn kinetic_parameter(p: &Potential, energy: f64, r: f64) -> f64 {
    (energy - p.value(r)).abs().sqrt()
}

/// Classical action `W(c, r) = int_c^r sqrt(E - V) dr` over an allowed interval.
///
/// Reversed limits give the negated integral.
pub fn action_w(p: &Potential, energy: f64, c: f64, r: f64) -> Result<f64> {
    if c == r {
        return Ok(0.0);
    }
    if c > r {
        return action_w(p, energy, r, c).map(|w| -w);
    }
    check_sign(p, energy, c, r, 1.0).map_err(|_| ResonanceError::IntervalNotAllowed {
        c,
        r,
        energy,
    })?;
    integrate_endpoint_mapped(|x| (energy - p.value(x)).max(0.0).sqrt(), c, r, ACTION_TOL)
}

/// Barrier integral `Omega(a, b) = int_a^b sqrt(V - E) dr` over a forbidden interval.
pub fn barrier_omega(p: &Potential, energy: f64, a: f64, b: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if a > b {
        return barrier_omega(p, energy, b, a).map(|w| -w);
    }
    check_sign(p, energy, a, b, -1.0).map_err(|_| ResonanceError::IntervalNotForbidden {
        a,
        b,
        energy,
    })?;
    integrate_endpoint_mapped(|x| (p.value(x) - energy).max(0.0).sqrt(), a, b, ACTION_TOL)
}

/// Period `tau = 2 int_0^a dr / sqrt(E - V)` of the trapped classical orbit,
/// with `a` the inner turning point.
pub fn classical_period(p: &Potential, energy: f64, a: f64) -> Result<f64> {
    if a <= 0.0 {
        return Ok(0.0);
    }
    check_sign(p, energy, 0.0, a, 1.0).map_err(|_| ResonanceError::IntervalNotAllowed {
        c: 0.0,
        r: a,
        energy,
    })?;
    let slope = p.derivative(a).abs();
    let offset = energy - p.value(a);
    let integrand = |t: f64| {
        if t == 0.0 {
            return if slope > 0.0 { 2.0 / slope.sqrt() } else { 0.0 };
        }
        let gap = offset + drop_below(p, a, t * t);
        if gap <= 0.0 {
            return 0.0;
        }
        2.0 * t / gap.sqrt()
    };
    let half_period = integrate(integrand, 0.0, a.sqrt(), 0.5 * PERIOD_TOL, 1e-14)?;
    Ok(2.0 * half_period)
}

/// `V(a) - V(a - s)`. Short steps integrate `V'` with five-point
/// Gauss-Legendre instead of differencing two nearly equal values.
fn drop_below(p: &Potential, a: f64, s: f64) -> f64 {
    const NODES: [f64; 5] = [
        -0.906_179_845_938_664,
        -0.538_469_310_105_683,
        0.0,
        0.538_469_310_105_683,
        0.906_179_845_938_664,
    ];
    const WEIGHTS: [f64; 5] = [
        0.236_926_885_056_189,
        0.478_628_670_499_366,
        0.568_888_888_888_889,
        0.478_628_670_499_366,
        0.236_926_885_056_189,
    ];
    if s > 0.02 * a {
        return p.value(a) - p.value(a - s);
    }
    let mid = a - 0.5 * s;
    0.5 * s
        * NODES
            .iter()
            .zip(WEIGHTS)
            .map(|(x, w)| w * p.derivative(mid + 0.5 * s * x))
            .sum::<f64>()
}

/// `W(0,a)`, `Omega(a,b)` and `tau` at energy `E` for turning points `a < b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseIntegrals {
    pub w_0a: f64,
    pub omega_ab: f64,
    pub tau: f64,
}

impl PhaseIntegrals {
    pub fn compute(p: &Potential, energy: f64, a: f64, b: f64) -> Result<Self> {
        Ok(Self {
            w_0a: action_w(p, energy, 0.0, a)?,
            omega_ab: barrier_omega(p, energy, a, b)?,
            tau: classical_period(p, energy, a)?,
        })
    }
}

/// Rejects intervals where `sign * (E - V)` goes clearly negative inside.
fn check_sign(p: &Potential, energy: f64, lo: f64, hi: f64, sign: f64) -> std::result::Result<(), ()> {
    let slack = 1e-9 * energy.abs().max(1.0);
    let bad = (1..SIGN_PROBES).any(|i| {
        let r = lo + (hi - lo) * i as f64 / SIGN_PROBES as f64;
        sign * (energy - p.value(r)) < -slack
    });
    if bad {
        Err(())
    } else {
        Ok(())
    }
}

static GAMMA: OnceLock<f64> = OnceLock::new();

/// `gamma = int_0^1 sqrt(1 - z^2 e^{2(1-z)}) dz`, the dimensionless action of
/// the BBJS family at its summit energy. Computed once and cached.
pub fn gamma_constant() -> f64 {
    *GAMMA.get_or_init(|| {
        integrate(gamma_integrand, 0.0, 1.0, 1e-14, 1e-14)
            .expect("gamma integrand is smooth on [0, 1]")
    })
}

pub(crate) fn gamma_integrand(z: f64) -> f64 {
    (1.0 - z * z * (2.0 * (1.0 - z)).exp()).max(0.0).sqrt()
}

/// `beta0 = (pi e / (4 gamma))^2`, the strength unit of the resonance-count bound.
pub fn beta_zero() -> f64 {
    (std::f64::consts::PI * std::f64::consts::E / (4.0 * gamma_constant())).powi(2)
}
