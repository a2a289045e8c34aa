//! Classical turning points `V(r) = E` below the barrier summit.

use crate::error::{ResonanceError, Result};
use crate::potential::Potential;
use crate::roots::brent;

/// Energies this close to the summit (relative to `v_max`) are degenerate.
pub const SUMMIT_GUARD: f64 = 1e-9;

/// Inner and outer turning points at one energy, `inner <= r_top <= outer`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurningPair {
    pub energy: f64,
    pub inner: f64,
    pub outer: f64,
}

pub fn find_turning_points(p: &Potential, energy: f64) -> Result<TurningPair> {
    let summit = p.barrier_summit()?;
    let v_origin = p.value(0.0);
    if !(energy > v_origin) {
        return Err(ResonanceError::EnergyNonPositive { energy, v_origin });
    }
    if energy >= summit.v_max - SUMMIT_GUARD * summit.v_max.abs() {
        return Err(ResonanceError::EnergyAboveBarrier {
            energy,
            v_max: summit.v_max,
        });
    }

    let f = |r: f64| p.value(r) - energy;
    let inner = brent(f, 0.0, summit.r_top, 0.0)?;

    let limit = p.domain_end();
    let mut cut = 2.0 * summit.r_top;
    while f(cut.min(limit)) >= 0.0 {
        if cut >= limit || cut > 1e6 * summit.r_top {
            return Err(ResonanceError::NoOuterTurningPoint(energy));
        }
        cut *= 2.0;
    }
    let outer = brent(f, summit.r_top, cut.min(limit), 0.0)?;

    let tol = 1e-12 * energy.abs().max(1.0);
    debug_assert!(f(inner).abs() <= tol && f(outer).abs() <= tol);
    Ok(TurningPair {
        energy,
        inner,
        outer,
    })
}
