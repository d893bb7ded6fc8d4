//! Python bindings for the spectral Chern-Simons-Higgs toolkit.
//!
//! Builds a `cdylib` importable as the module `cshpy`. It exposes the two
//! halves of `csh-core`:
//!
//! * [`Simulator`] — seeded rough initial data on a periodic grid, evolved
//!   with the exponential integrator (or the direct classical stepper), with
//!   the same diagnostics the CLI writes to CSV.
//! * [`check_estimates`] / [`angle_sample`] — the exact-arithmetic exponent
//!   registry and the seeded angular-bound sampler, reported as JSON so
//!   Python sees the same artifact shape the CLI emits.
//!
//! `python/smoke_test.py` at the workspace root builds, loads, and exercises
//! the module end to end.

use std::collections::HashMap;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use csh_core::dynamics::{gauss_residual_fields, split_halfwave};
use csh_core::estimates::{angle_bound_sample, verify_claim_registry, ExtScalar};
use csh_core::integrator::Record;
use csh_core::{
    charge, curl, energy, gen_lowreg_data, helmholtz_split, init_from_data, simulate, CoreError,
    CshState, Formulation, Grid, Potential, QuarticGrouping, SpectralField, StepperConfig,
};

/// Map core failures onto Python exceptions: a numerical blow-up becomes a
/// `RuntimeError`, everything else (bad arguments, shape mismatches) a
/// `ValueError`.
fn core_err(err: CoreError) -> PyErr {
    match err {
        CoreError::NonFiniteState { time } => {
            PyRuntimeError::new_err(format!("state became non-finite at t = {time}"))
        }
        other => PyValueError::new_err(other.to_string()),
    }
}

fn parse_formulation(name: &str) -> PyResult<Formulation> {
    match name {
        "reformulated" => Ok(Formulation::Reformulated),
        "direct" => Ok(Formulation::Direct),
        other => Err(PyValueError::new_err(format!(
            "unknown formulation `{other}` (expected `reformulated` or `direct`)"
        ))),
    }
}

type Diagnostics = HashMap<&'static str, f64>;

fn record_map(r: &Record) -> Diagnostics {
    HashMap::from([
        ("step", r.step as f64),
        ("t", r.time),
        ("h_phi", r.h_phi),
        ("h_dphi", r.h_dphi),
        ("gauss_abs", r.gauss_abs),
        ("gauss_rel", r.gauss_rel),
        ("energy", r.energy),
        ("acf_l2", r.acf_l2),
        ("adf_l2", r.adf_l2),
        ("charge", r.charge),
        ("acf_curl", r.acf_curl),
    ])
}

/// A seeded simulation of the (2+1)-dimensional Chern-Simons-Higgs system in
/// temporal gauge on a periodic box.
///
/// Construction draws random low-regularity initial data (Higgs field in
/// `H^{s+1}`, its velocity in `H^s`) and installs it in the reformulated
/// state whose divergence-free gauge part is recomputed from the matter
/// fields, so the Gauss constraint holds by construction.
///
/// Usage from Python:
///
///     from cshpy import Simulator
///     sim = Simulator(n=32, s=0.3, amplitude=0.05, seed=7)
///     rows = sim.run(dt=1e-2, t_end=0.5, record_every=10)
///     print(sim.time, rows[-1]["gauss_rel"])
#[pyclass]
struct Simulator {
    state: CshState,
    potential: Potential,
    sobolev_s: f64,
    formulation: Formulation,
    amplitude: f64,
    seed: u64,
}

#[pymethods]
impl Simulator {
    /// Create a simulator with seeded random initial data.
    ///
    /// Args:
    ///     n: grid size per axis (power of two, at least 4).
    ///     length: box side length (defaults to 16π).
    ///     s: Sobolev regularity of the velocity; the field sits in `H^{s+1}`.
    ///     amplitude: data scale (0 gives the vacuum).
    ///     seed: RNG seed; equal seeds give bit-identical data.
    ///     potential: coefficients `[c₁, c₂, …]` of `V(r) = c₁r + c₂r² + …`.
    ///     formulation: `"reformulated"` (exponential stepper on the
    ///         constraint-reduced variables) or `"direct"` (classical RK4 on
    ///         the full gauge potential).
    #[new]
    #[pyo3(signature = (n=64, length=None, s=0.3, amplitude=0.1, seed=2026,
                        potential=vec![1.0], formulation="reformulated"))]
    fn new(
        n: usize,
        length: Option<f64>,
        s: f64,
        amplitude: f64,
        seed: u64,
        potential: Vec<f64>,
        formulation: &str,
    ) -> PyResult<Self> {
        let length = length.unwrap_or(16.0 * std::f64::consts::PI);
        let formulation = parse_formulation(formulation)?;
        let grid = Grid::new(n, length).map_err(core_err)?;
        let data = gen_lowreg_data(grid, s, amplitude, seed).map_err(core_err)?;
        let (state, _) =
            init_from_data(&data.phi0, &data.dphi0, &data.acf0, [0.0, 0.0]).map_err(core_err)?;
        Ok(Self {
            state,
            potential: Potential::new(potential).map_err(core_err)?,
            sobolev_s: s,
            formulation,
            amplitude,
            seed,
        })
    }

    /// Current simulation time.
    #[getter]
    fn time(&self) -> f64 {
        self.state.time
    }

    /// Grid size per axis.
    #[getter]
    fn n(&self) -> usize {
        self.state.grid().n()
    }

    /// Box side length.
    #[getter]
    fn length(&self) -> f64 {
        self.state.grid().length()
    }

    /// Evolve from the current time to `time + t_end` and return the recorded
    /// diagnostics as a list of dicts (first and last step always included;
    /// `record_every=k` adds every k-th step in between).
    ///
    /// On success the simulator's state advances to the final time. If the
    /// state blows up, a `RuntimeError` carries the abort time and the
    /// simulator is left at its pre-call state.
    #[pyo3(signature = (dt, t_end, record_every=0))]
    fn run(&mut self, dt: f64, t_end: f64, record_every: usize) -> PyResult<Vec<Diagnostics>> {
        let cfg = StepperConfig {
            dt,
            t_end,
            record_every,
            formulation: self.formulation,
            grouping: QuarticGrouping::FullProduct,
            sobolev_s: self.sobolev_s,
            zero_nonlinearity: false,
        };
        let outcome = simulate(&self.state, &cfg, &self.potential).map_err(core_err)?;
        if let Some(time) = outcome.aborted {
            return Err(PyRuntimeError::new_err(format!(
                "run aborted: state became non-finite at t = {time}"
            )));
        }
        // Re-install the terminal fields: split the full gauge potential and
        // the Higgs pair back into the reduced state layout.
        let split = helmholtz_split(&outcome.final_a[0], &outcome.final_a[1]).map_err(core_err)?;
        let (plus, minus) =
            split_halfwave(&outcome.final_phi, &outcome.final_dphi).map_err(core_err)?;
        self.state = CshState::new(plus, minus, split.cf, split.mean, outcome.final_time)
            .map_err(core_err)?;
        Ok(outcome.records.iter().map(record_map).collect())
    }

    /// Diagnostics of the current state: one dict with the same keys as the
    /// rows returned by `run` (norms, Gauss residual, energy, gauge norms,
    /// charge), minus the step counter.
    fn diagnostics(&self) -> PyResult<Diagnostics> {
        let (phi, dphi) = self.state.higgs_pair();
        let (a, adf) = self.state.full_gauge();
        let gauss = gauss_residual_fields(&phi, &dphi, &a).map_err(core_err)?;
        let norm2 = |pair: &[SpectralField; 2]| {
            (pair[0].l2_norm().powi(2) + pair[1].l2_norm().powi(2)).sqrt()
        };
        Ok(HashMap::from([
            ("t", self.state.time),
            ("h_phi", phi.sobolev_norm(self.sobolev_s + 1.0)),
            ("h_dphi", dphi.sobolev_norm(self.sobolev_s)),
            ("gauss_abs", gauss.abs),
            ("gauss_rel", gauss.rel),
            (
                "energy",
                energy(&phi, &dphi, &a, &self.potential).map_err(core_err)?,
            ),
            ("acf_l2", norm2(&self.state.acf)),
            ("adf_l2", norm2(&adf)),
            ("charge", charge(&phi, &dphi).map_err(core_err)?),
            (
                "acf_curl",
                curl(&self.state.acf[0], &self.state.acf[1])
                    .map_err(core_err)?
                    .l2_norm(),
            ),
        ]))
    }

    fn __repr__(&self) -> String {
        format!(
            "Simulator(n={}, length={:.6}, s={}, amplitude={}, seed={}, formulation={:?}, t={:.6})",
            self.state.grid().n(),
            self.state.grid().length(),
            self.sobolev_s,
            self.amplitude,
            self.seed,
            self.formulation,
            self.state.time,
        )
    }
}

/// Verify every exponent tuple in the claim registry at the exact regularity
/// `s = numerator/denominator + eps_ticks·ε` (ε an infinitesimal), returning
/// one NDJSON line per instance with keys
/// `{label, tuple, verdict, binding_condition, margin}` — the same artifact
/// the CLI's estimate checker writes.
#[pyfunction]
#[pyo3(signature = (numerator, denominator, eps_ticks=0))]
fn check_estimates(numerator: i64, denominator: i64, eps_ticks: i64) -> PyResult<String> {
    if denominator == 0 {
        return Err(PyValueError::new_err("denominator must be nonzero"));
    }
    let s = ExtScalar::rational(numerator, denominator).tick(eps_ticks);
    let lines: Vec<String> = verify_claim_registry(s)
        .iter()
        .map(|r| r.to_ndjson())
        .collect();
    Ok(lines.join("\n"))
}

/// Randomized search for the largest `angle / bound` ratio over the angular
/// interaction estimate, returned as a JSON report (`max_ratio`, `samples`,
/// `seed`, extremal witness). Deterministic per seed.
#[pyfunction]
#[pyo3(signature = (samples=100_000, seed=2026))]
fn angle_sample(samples: u64, seed: u64) -> PyResult<String> {
    if samples == 0 {
        return Err(PyValueError::new_err("samples must be positive"));
    }
    let report = angle_bound_sample(samples, seed);
    serde_json::to_string(&report)
        .map_err(|e| PyRuntimeError::new_err(format!("serialization error: {e}")))
}

#[pymodule]
fn cshpy(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<Simulator>()?;
    m.add_function(wrap_pyfunction!(check_estimates, m)?)?;
    m.add_function(wrap_pyfunction!(angle_sample, m)?)?;
    Ok(())
}
