//! Python module `resonance`.

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use resonance_core as core;
use resonance_core::siegert::ComplexEnergy;

create_exception!(resonance, ResonanceError, PyException);

fn err(e: core::ResonanceError) -> PyErr {
    ResonanceError::new_err(e.to_string())
}

/// Radial barrier: `bbjs`, `anharmonic`, or tabulated from samples.
#[pyclass(name = "Potential", frozen)]
struct PyPotential {
    inner: core::Potential,
}

#[pymethods]
impl PyPotential {
    #[staticmethod]
    #[pyo3(signature = (strength, inverse_length = 1.0))]
    fn bbjs(strength: f64, inverse_length: f64) -> PyResult<Self> {
        let inner = core::Potential::bbjs(strength, inverse_length).map_err(err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn anharmonic(force_constant: f64, anharmonicity: f64, power: u32) -> PyResult<Self> {
        let inner = core::Potential::anharmonic(force_constant, anharmonicity, power).map_err(err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn tabulated(radii: Vec<f64>, values: Vec<f64>) -> PyResult<Self> {
        let inner = core::Potential::tabulated(radii, values).map_err(err)?;
        Ok(Self { inner })
    }

    /// Reads an `r,V` CSV file.
    #[staticmethod]
    fn from_csv(path: &str) -> PyResult<Self> {
        let table = core::TabulatedPotential::from_csv_path(path).map_err(err)?;
        Ok(Self {
            inner: core::Potential::Tabulated(table),
        })
    }

    fn __call__(&self, r: f64) -> PyResult<f64> {
        self.inner.evaluate(r).map_err(err)
    }

    fn effective(&self, ell: u32, r: f64) -> PyResult<f64> {
        self.inner.effective_potential(ell, r).map_err(err)
    }

    /// `(r_top, v_max)`.
    fn summit(&self) -> PyResult<(f64, f64)> {
        let s = self.inner.barrier_summit().map_err(err)?;
        Ok((s.r_top, s.v_max))
    }

    /// Inner and outer classical turning points at `energy`.
    fn turning_points(&self, energy: f64) -> PyResult<(f64, f64)> {
        let t = core::find_turning_points(&self.inner, energy).map_err(err)?;
        Ok((t.inner, t.outer))
    }

    /// `(W(0, a), Omega(a, b), tau)` at `energy`.
    fn phase_integrals(&self, energy: f64) -> PyResult<(f64, f64, f64)> {
        let t = core::find_turning_points(&self.inner, energy).map_err(err)?;
        let p = core::PhaseIntegrals::compute(&self.inner, energy, t.inner, t.outer).map_err(err)?;
        Ok((p.w_0a, p.omega_ab, p.tau))
    }

    fn count(&self) -> PyResult<usize> {
        core::count_resonances(&self.inner).map_err(err)
    }

    fn locate_position(&self, n: usize) -> PyResult<f64> {
        core::locate_position(&self.inner, n).map_err(err)
    }

    /// `(half_width, tau, omega)` at an arbitrary sub-barrier energy.
    fn compute_width(&self, energy: f64) -> PyResult<(f64, f64, f64)> {
        let w = core::compute_width(&self.inner, energy).map_err(err)?;
        Ok((w.half_width, w.period, w.barrier_integral))
    }

    fn resonance(&self, n: usize) -> PyResult<PyResonance> {
        core::resonance(&self.inner, n).map(PyResonance).map_err(err)
    }

    fn spectrum(&self) -> PyResult<Vec<PyResonance>> {
        let s = core::resonance_spectrum(&self.inner).map_err(err)?;
        Ok(s.into_iter().map(PyResonance).collect())
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.inner).chars().take(120).collect()
    }
}

/// Extended-WKB resonance with its diagnostics.
#[pyclass(name = "Resonance", frozen)]
struct PyResonance(core::Resonance);

#[pymethods]
impl PyResonance {
    #[getter]
    fn index(&self) -> usize {
        self.0.index
    }
    #[getter]
    fn position(&self) -> f64 {
        self.0.position
    }
    #[getter]
    fn half_width(&self) -> f64 {
        self.0.half_width
    }
    #[getter]
    fn log_half_width(&self) -> f64 {
        self.0.log_half_width
    }
    #[getter]
    fn tau(&self) -> f64 {
        self.0.period
    }
    #[getter]
    fn omega(&self) -> f64 {
        self.0.barrier_integral
    }
    #[getter]
    fn tau_gamma(&self) -> f64 {
        self.0.validity_ratio
    }
    #[getter]
    fn lifetime(&self) -> f64 {
        self.0.lifetime
    }
    #[getter]
    fn turning_points(&self) -> (f64, f64) {
        (self.0.turning.inner, self.0.turning.outer)
    }
    #[getter]
    fn valid(&self) -> bool {
        self.0.is_valid()
    }
    /// `E - i Gamma/2`.
    #[getter]
    fn eigenvalue(&self) -> Complex64 {
        self.0.eigenvalue()
    }

    fn __repr__(&self) -> String {
        format!(
            "Resonance(n={}, E={}, half_width={:e}, tau_gamma={})",
            self.0.index, self.0.position, self.0.half_width, self.0.validity_ratio
        )
    }
}

/// Radial solution at complex energy.
#[pyclass(name = "WaveSolution", frozen)]
struct PyWave(core::WaveSolution);

#[pymethods]
impl PyWave {
    #[getter]
    fn radii(&self) -> Vec<f64> {
        self.0.radii.clone()
    }
    /// Stored samples; the true amplitude is `psi * exp(log_norm)`.
    #[getter]
    fn psi(&self) -> Vec<Complex64> {
        self.0.psi.clone()
    }
    #[getter]
    fn log_norm(&self) -> Vec<f64> {
        self.0.log_norm.clone()
    }
    #[getter]
    fn energy(&self) -> Complex64 {
        self.0.energy.as_complex()
    }
    #[getter]
    fn residual(&self) -> f64 {
        self.0.residual
    }
    fn log_abs(&self) -> Vec<f64> {
        (0..self.0.len()).map(|i| self.0.log_abs(i)).collect()
    }
    fn __len__(&self) -> usize {
        self.0.len()
    }
}

#[pyfunction]
fn gamma_constant() -> f64 {
    core::gamma_constant()
}

#[pyfunction]
fn beta_zero() -> f64 {
    core::beta_zero()
}

#[pyfunction]
fn count_bbjs(strength: f64) -> usize {
    core::count_resonances_bbjs(strength)
}

/// Shooting refinement of a complex seed energy.
#[pyfunction]
#[pyo3(signature = (potential, seed, step = core::siegert::DEFAULT_STEP, r_match = core::siegert::DEFAULT_R_MAX))]
fn refine(potential: &PyPotential, seed: Complex64, step: f64, r_match: f64) -> PyResult<Complex64> {
    let r = core::Shooter::new(step, r_match)
        .refine(&potential.inner, ComplexEnergy::from(seed))
        .map_err(err)?;
    Ok(r.energy.as_complex())
}

#[pyfunction]
#[pyo3(signature = (potential, energy, r_max = core::siegert::DEFAULT_R_MAX, step = core::siegert::DEFAULT_STEP))]
fn integrate_radial(potential: &PyPotential, energy: Complex64, r_max: f64, step: f64) -> PyResult<PyWave> {
    core::integrate_radial(&potential.inner, energy.into(), r_max, step)
        .map(PyWave)
        .map_err(err)
}

/// `(radii, V, V1, V2)` for the partner potentials at `energy`.
#[pyfunction]
#[pyo3(signature = (potential, energy, r_max = core::siegert::DEFAULT_R_MAX, step = core::siegert::DEFAULT_STEP))]
#[allow(clippy::type_complexity)]
fn partner(
    potential: &PyPotential,
    energy: Complex64,
    r_max: f64,
    step: f64,
) -> PyResult<(Vec<f64>, Vec<f64>, Vec<Complex64>, Vec<f64>)> {
    let w = core::integrate_radial(&potential.inner, energy.into(), r_max, step).map_err(err)?;
    let p = core::PartnerPotential::build(&potential.inner, &w).map_err(err)?;
    Ok((p.radii, p.base, p.first_order, p.second_order))
}

#[pymodule]
fn resonance(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("ResonanceError", m.py().get_type::<ResonanceError>())?;
    m.add_class::<PyPotential>()?;
    m.add_class::<PyResonance>()?;
    m.add_class::<PyWave>()?;
    m.add_function(wrap_pyfunction!(gamma_constant, m)?)?;
    m.add_function(wrap_pyfunction!(beta_zero, m)?)?;
    m.add_function(wrap_pyfunction!(count_bbjs, m)?)?;
    m.add_function(wrap_pyfunction!(refine, m)?)?;
    m.add_function(wrap_pyfunction!(integrate_radial, m)?)?;
    m.add_function(wrap_pyfunction!(partner, m)?)?;
    Ok(())
}
