//! Radial barrier models.
//!
//! Units follow the reduced radial equation with `hbar^2 / 2m = 1`, so an
//! energy `E` corresponds to the wavenumber `k = sqrt(E)`.

use std::io::Read;
use std::path::Path;

use crate::error::{ResonanceError, Result};
use crate::roots::golden_max;

/// Location and height of the single barrier maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierSummit {
    pub r_top: f64,
    pub v_max: f64,
}

/// A radial potential `V(r)` on `r >= 0` with one interior maximum.
#[derive(Debug, Clone, PartialEq)]
pub enum Potential {
    /// `V(r) = V0 r^2 exp(-lambda r)`.
    Bbjs { strength: f64, inverse_length: f64 },
    /// `V(r) = k r^2 / 2 - g r^N` with odd `N >= 3`.
    Anharmonic {
        force_constant: f64,
        anharmonicity: f64,
        power: u32,
    },
    Tabulated(TabulatedPotential),
}

impl Potential {
    pub fn bbjs(strength: f64, inverse_length: f64) -> Result<Self> {
        if !(strength > 0.0 && strength.is_finite()) {
            return Err(ResonanceError::InvalidPotential(format!(
                "BBJS strength must be positive, got {strength}"
            )));
        }
        if !(inverse_length > 0.0 && inverse_length.is_finite()) {
            return Err(ResonanceError::InvalidPotential(format!(
                "BBJS lambda must be positive, got {inverse_length}"
            )));
        }
        Ok(Potential::Bbjs {
            strength,
            inverse_length,
        })
    }

    pub fn anharmonic(force_constant: f64, anharmonicity: f64, power: u32) -> Result<Self> {
        if !(force_constant > 0.0 && anharmonicity > 0.0) {
            return Err(ResonanceError::InvalidPotential(format!(
                "anharmonic oscillator needs k > 0 and g > 0, got k = {force_constant}, g = {anharmonicity}"
            )));
        }
        if power < 3 || power.is_multiple_of(2) {
            return Err(ResonanceError::InvalidPotential(format!(
                "anharmonic power must be odd and >= 3, got {power}"
            )));
        }
        Ok(Potential::Anharmonic {
            force_constant,
            anharmonicity,
            power,
        })
    }

    pub fn tabulated(radii: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        TabulatedPotential::new(radii, values).map(Potential::Tabulated)
    }

    /// `V(r)`. Tabulated potentials reject radii outside their sample range.
    pub fn evaluate(&self, r: f64) -> Result<f64> {
        if r < 0.0 || r.is_nan() {
            return Err(ResonanceError::OutOfRange {
                r,
                lo: 0.0,
                hi: f64::INFINITY,
            });
        }
        if let Potential::Tabulated(t) = self {
            t.check_range(r)?;
        }
        Ok(self.value(r))
    }

    /// `V(r) + l(l+1)/r^2`.
    pub fn effective_potential(&self, ell: u32, r: f64) -> Result<f64> {
        let v = self.evaluate(r)?;
        if ell == 0 {
            return Ok(v);
        }
        if r <= 0.0 {
            return Err(ResonanceError::OutOfRange {
                r,
                lo: 0.0,
                hi: f64::INFINITY,
            });
        }
        let l = f64::from(ell);
        Ok(v + l * (l + 1.0) / (r * r))
    }

    /// Unchecked evaluation for inner loops; tabulated data is clamped at its ends.
    pub(crate) fn value(&self, r: f64) -> f64 {
        match *self {
            Potential::Bbjs {
                strength,
                inverse_length,
            } => strength * r * r * (-inverse_length * r).exp(),
            Potential::Anharmonic {
                force_constant,
                anharmonicity,
                power,
            } => 0.5 * force_constant * r * r - anharmonicity * r.powi(power as i32),
            Potential::Tabulated(ref t) => t.value(r),
        }
    }

    /// `dV/dr`.
    pub fn derivative(&self, r: f64) -> f64 {
        match *self {
            Potential::Bbjs {
                strength,
                inverse_length,
            } => strength * (-inverse_length * r).exp() * r * (2.0 - inverse_length * r),
            Potential::Anharmonic {
                force_constant,
                anharmonicity,
                power,
            } => {
                force_constant * r
                    - anharmonicity * f64::from(power) * r.powi(power as i32 - 1)
            }
            Potential::Tabulated(ref t) => t.derivative(r),
        }
    }

    /// Upper end of the radial domain on which the potential is defined.
    pub fn domain_end(&self) -> f64 {
        match self {
            Potential::Tabulated(t) => t.r_max(),
            _ => f64::INFINITY,
        }
    }

    pub fn barrier_summit(&self) -> Result<BarrierSummit> {
        match *self {
            Potential::Bbjs {
                strength,
                inverse_length,
            } => {
                let r_top = 2.0 / inverse_length;
                let v_max = 4.0 * strength / (inverse_length * std::f64::consts::E).powi(2);
                Ok(BarrierSummit { r_top, v_max })
            }
            Potential::Anharmonic {
                force_constant: k,
                anharmonicity: g,
                power,
            } => {
                let n = f64::from(power);
                let r_top = (k / (g * n)).powf(1.0 / (n - 2.0));
                let v_max = (n - 2.0) / (2.0 * n)
                    * k.powf(n / (n - 2.0))
                    * (g * n).powf(-2.0 / (n - 2.0));
                Ok(BarrierSummit { r_top, v_max })
            }
            Potential::Tabulated(ref t) => t.summit(),
        }
    }
}

/// Sampled potential with a C1 piecewise-cubic Hermite interpolant.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedPotential {
    radii: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl TabulatedPotential {
    pub fn new(radii: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if radii.len() != values.len() {
            return Err(ResonanceError::InvalidPotential(
                "radius and value columns differ in length".into(),
            ));
        }
        if radii.len() < 3 {
            return Err(ResonanceError::InvalidPotential(
                "tabulated potential needs at least three samples".into(),
            ));
        }
        if radii[0] != 0.0 {
            return Err(ResonanceError::InvalidPotential(format!(
                "first tabulated radius must be 0, got {}",
                radii[0]
            )));
        }
        if radii.windows(2).any(|w| w[1] <= w[0]) {
            return Err(ResonanceError::InvalidPotential(
                "tabulated radii must be strictly increasing".into(),
            ));
        }
        if values.iter().chain(radii.iter()).any(|x| !x.is_finite()) {
            return Err(ResonanceError::InvalidPotential(
                "tabulated samples must be finite".into(),
            ));
        }
        let slopes = node_slopes(&radii, &values);
        Ok(Self {
            radii,
            values,
            slopes,
        })
    }

    /// Reads a two-column CSV with header `r,V`.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr
            .headers()
            .map_err(|e| ResonanceError::InvalidPotential(e.to_string()))?
            .clone();
        if headers.len() != 2 || &headers[0] != "r" || &headers[1] != "V" {
            return Err(ResonanceError::InvalidPotential(format!(
                "expected header `r,V`, found `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut radii = Vec::new();
        let mut values = Vec::new();
        for record in rdr.records() {
            let record = record.map_err(|e| ResonanceError::InvalidPotential(e.to_string()))?;
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| ResonanceError::InvalidPotential(format!("bad number `{s}`")))
            };
            radii.push(parse(&record[0])?);
            values.push(parse(&record[1])?);
        }
        Self::new(radii, values)
    }

    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        let file = std::fs::File::open(path.as_ref()).map_err(|e| {
            ResonanceError::InvalidPotential(format!("{}: {e}", path.as_ref().display()))
        })?;
        Self::from_csv_reader(file)
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn r_max(&self) -> f64 {
        *self.radii.last().unwrap()
    }

    fn check_range(&self, r: f64) -> Result<()> {
        if r > self.r_max() {
            return Err(ResonanceError::OutOfRange {
                r,
                lo: 0.0,
                hi: self.r_max(),
            });
        }
        Ok(())
    }

    fn segment(&self, r: f64) -> usize {
        let i = self.radii.partition_point(|&x| x <= r);
        i.clamp(1, self.radii.len() - 1) - 1
    }

    fn value(&self, r: f64) -> f64 {
        let r = r.clamp(0.0, self.r_max());
        let i = self.segment(r);
        let (x0, x1) = (self.radii[i], self.radii[i + 1]);
        let h = x1 - x0;
        let t = (r - x0) / h;
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.values[i]
            + h10 * h * self.slopes[i]
            + h01 * self.values[i + 1]
            + h11 * h * self.slopes[i + 1]
    }

    fn derivative(&self, r: f64) -> f64 {
        let r = r.clamp(0.0, self.r_max());
        let i = self.segment(r);
        let (x0, x1) = (self.radii[i], self.radii[i + 1]);
        let h = x1 - x0;
        let t = (r - x0) / h;
        let t2 = t * t;
        let d00 = 6.0 * t2 - 6.0 * t;
        let d10 = 3.0 * t2 - 4.0 * t + 1.0;
        let d01 = -6.0 * t2 + 6.0 * t;
        let d11 = 3.0 * t2 - 2.0 * t;
        (d00 * self.values[i] + d01 * self.values[i + 1]) / h
            + d10 * self.slopes[i]
            + d11 * self.slopes[i + 1]
    }

    fn summit(&self) -> Result<BarrierSummit> {
        let (imax, _) = self
            .values
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, &v)| {
                if v > acc.1 {
                    (i, v)
                } else {
                    acc
                }
            });
        if imax == 0 || imax == self.values.len() - 1 {
            return Err(ResonanceError::NoInteriorMaximum);
        }
        let (r_top, v_max) = golden_max(
            |r| self.value(r),
            self.radii[imax - 1],
            self.radii[imax + 1],
            1e-10,
        );
        Ok(BarrierSummit { r_top, v_max })
    }
}

/// Second-order node derivatives for non-uniform spacing.
fn node_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let secant: Vec<f64> = (0..n - 1)
        .map(|i| (y[i + 1] - y[i]) / (x[i + 1] - x[i]))
        .collect();
    let mut d = vec![0.0; n];
    for i in 1..n - 1 {
        let (hl, hr) = (x[i] - x[i - 1], x[i + 1] - x[i]);
        d[i] = (hr * secant[i - 1] + hl * secant[i]) / (hl + hr);
    }
    let (h0, h1) = (x[1] - x[0], x[2] - x[1]);
    d[0] = ((2.0 * h0 + h1) * secant[0] - h0 * secant[1]) / (h0 + h1);
    let (hm, hp) = (x[n - 2] - x[n - 3], x[n - 1] - x[n - 2]);
    d[n - 1] = ((2.0 * hp + hm) * secant[n - 2] - hp * secant[n - 3]) / (hm + hp);
    d
}
