//! Time integration of both formulations, state initialization from Cauchy
//! data, trajectory recording, refinement studies and the data-continuity
//! probe.
//!
//! The reformulated system is stepped with a Lawson-type exponential RK4:
//! the stiff diagonal phase `e^{±i t⟨∇⟩}` on `φ±` is applied exactly, and
//! classical RK4 stages handle the nonlinearity together with the `A^cf` and
//! gauge-mean components (whose linear part is zero). The direct system
//! `(φ, ∂_tφ, A)` is stepped with classical RK4 and serves as the
//! cross-formulation oracle.

use crate::dynamics::{
    charge, energy, gauss_residual_fields, rhs_direct, rhs_reformulated, split_halfwave, CshState,
    DirectState, Potential, QuarticGrouping,
};
use crate::error::{CoreError, CoreResult};
use crate::field::SpectralField;
use crate::gauge::{curl, helmholtz_split};
use crate::C64;

/// Which system of equations to evolve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Formulation {
    /// Half-wave `φ±`, curl-free gauge remainder, gauge means; the
    /// divergence-free gauge part is recomputed algebraically each stage.
    #[default]
    Reformulated,
    /// `(φ, ∂_tφ, A₁, A₂)` evolved as written, constraint free to drift.
    Direct,
}

/// Integration parameters shared by every driver.
#[derive(Clone, Copy, Debug)]
pub struct StepperConfig {
    pub dt: f64,
    pub t_end: f64,
    /// Steps between diagnostic records (0 ⇒ only initial and final).
    pub record_every: usize,
    pub formulation: Formulation,
    pub grouping: QuarticGrouping,
    /// Regularity parameter: records track `H^{s+1}(φ)` and `H^s(∂_tφ)`.
    pub sobolev_s: f64,
    /// Freeze the nonlinearity (free flow); used by unitarity tests.
    pub zero_nonlinearity: bool,
}

impl Default for StepperConfig {
    fn default() -> Self {
        StepperConfig {
            dt: 1.0 / 1024.0,
            t_end: 1.0,
            record_every: 0,
            formulation: Formulation::Reformulated,
            grouping: QuarticGrouping::FullProduct,
            sobolev_s: 0.3,
            zero_nonlinearity: false,
        }
    }
}

impl StepperConfig {
    fn validate(&self) -> CoreResult<()> {
        if self.dt <= 0.0 || !self.dt.is_finite() {
            return Err(CoreError::InvalidParameter {
                name: "dt",
                reason: format!("must be positive and finite, got {}", self.dt),
            });
        }
        if self.t_end < 0.0 || !self.t_end.is_finite() {
            return Err(CoreError::InvalidParameter {
                name: "t_end",
                reason: format!("must be nonnegative and finite, got {}", self.t_end),
            });
        }
        Ok(())
    }

    fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }
}

/// One diagnostic record along a trajectory.
#[derive(Clone, Copy, Debug)]
pub struct Record {
    pub step: usize,
    pub time: f64,
    /// `‖φ‖_{H^{s+1}}`.
    pub h_phi: f64,
    /// `‖∂_tφ‖_{H^s}`.
    pub h_dphi: f64,
    pub gauss_abs: f64,
    pub gauss_rel: f64,
    pub energy: f64,
    /// `L²` norm of the mean-free curl-free gauge part.
    pub acf_l2: f64,
    /// `L²` norm of the divergence-free gauge part.
    pub adf_l2: f64,
    /// Total charge `∫Im(φ̄∂_tφ)` (diagnostic; zero for compatible data).
    pub charge: f64,
    /// `‖curl A^cf‖` — must stay at rounding level in the reformulation.
    pub acf_curl: f64,
}

/// Result of a simulation run: records plus the terminal fields.
#[derive(Clone, Debug)]
pub struct SimOutcome {
    pub records: Vec<Record>,
    pub final_phi: SpectralField,
    pub final_dphi: SpectralField,
    pub final_a: [SpectralField; 2],
    pub final_time: f64,
    /// Time at which a non-finite state was detected, if the run aborted.
    pub aborted: Option<f64>,
}

/// Diagnostics produced when initial data is adapted to the state layout.
#[derive(Clone, Copy, Debug)]
pub struct InitReport {
    /// `L²` norm of gauge content that had to be removed: for curl-free
    /// input, its stray divergence-free part; for raw input, the distance
    /// between its divergence-free part and the constraint-derived one.
    pub discarded_norm: f64,
    /// Gauge means installed in the state.
    pub mean: [C64; 2],
}

/// Build a reformulated state from `(φ₀, φ₁, A^cf₀, mean₀)`.
///
/// `acf0` is expected curl-free and mean-free; any other content is
/// projected away and reported. The divergence-free part is never stored —
/// it is recomputed from `(φ, ∂_tφ)` at every evaluation, so the assembled
/// state satisfies the Gauss law by construction.
pub fn init_from_data(
    phi0: &SpectralField,
    phi1: &SpectralField,
    acf0: &[SpectralField; 2],
    mean0: [f64; 2],
) -> CoreResult<(CshState, InitReport)> {
    let split = helmholtz_split(&acf0[0], &acf0[1])?;
    let discarded = (split.df[0].l2_norm().powi(2) + split.df[1].l2_norm().powi(2)).sqrt();
    let mean = [
        C64::new(mean0[0], 0.0) + split.mean[0],
        C64::new(mean0[1], 0.0) + split.mean[1],
    ];
    let (plus, minus) = split_halfwave(phi0, phi1)?;
    let state = CshState::new(plus, minus, split.cf, mean, 0.0)?;
    Ok((
        state,
        InitReport {
            discarded_norm: discarded,
            mean,
        },
    ))
}

/// Build a reformulated state from raw gauge data `(φ₀, φ₁, a₁, a₂)`:
/// split `a`, keep its curl-free part and means, and *replace* its
/// divergence-free part by the constraint-derived one. The report carries
/// the size of the replaced mismatch (zero iff `a` was compatible).
pub fn init_from_gauge(
    phi0: &SpectralField,
    phi1: &SpectralField,
    a: &[SpectralField; 2],
) -> CoreResult<(CshState, InitReport)> {
    let split = helmholtz_split(&a[0], &a[1])?;
    let derived = crate::dynamics::compute_adf(phi0, phi1);
    let discarded = ((&split.df[0] - &derived[0]).l2_norm().powi(2)
        + (&split.df[1] - &derived[1]).l2_norm().powi(2))
    .sqrt();
    let (plus, minus) = split_halfwave(phi0, phi1)?;
    let state = CshState::new(plus, minus, split.cf, split.mean, 0.0)?;
    Ok((
        state,
        InitReport {
            discarded_norm: discarded,
            mean: split.mean,
        },
    ))
}

// ---------------------------------------------------------------------------
// Reformulated stepper (Lawson exponential RK4)
// ---------------------------------------------------------------------------

/// Evolved unknowns of the reformulated system, used for both states and
/// stage tangents (the linear algebra is identical).
#[derive(Clone)]
struct Bundle {
    plus: SpectralField,
    minus: SpectralField,
    acf: [SpectralField; 2],
    mean: [C64; 2],
}

impl Bundle {
    fn from_state(s: &CshState) -> Self {
        Bundle {
            plus: s.phi_plus.clone(),
            minus: s.phi_minus.clone(),
            acf: s.acf.clone(),
            mean: s.mean,
        }
    }

    fn into_state(self, time: f64) -> CshState {
        CshState {
            phi_plus: self.plus,
            phi_minus: self.minus,
            acf: self.acf,
            mean: self.mean,
            time,
        }
    }

    fn as_state(&self, time: f64) -> CshState {
        self.clone().into_state(time)
    }

    fn add_scaled(&mut self, h: f64, k: &Bundle) {
        let a = C64::new(h, 0.0);
        self.plus.add_scaled(a, &k.plus);
        self.minus.add_scaled(a, &k.minus);
        self.acf[0].add_scaled(a, &k.acf[0]);
        self.acf[1].add_scaled(a, &k.acf[1]);
        self.mean[0] += a * k.mean[0];
        self.mean[1] += a * k.mean[1];
    }

    /// Exact free flow over time `h`: `φ± ↦ e^{±ih⟨∇⟩}φ±`; identity on the
    /// gauge components (their linear part vanishes).
    fn propagate(&mut self, h: f64) {
        self.plus
            .multiply_in_place(|x1, x2| C64::from_polar(1.0, h * (1.0 + x1 * x1 + x2 * x2).sqrt()));
        self.minus.multiply_in_place(|x1, x2| {
            C64::from_polar(1.0, -h * (1.0 + x1 * x1 + x2 * x2).sqrt())
        });
    }

    fn is_finite(&self) -> bool {
        self.plus.is_finite()
            && self.minus.is_finite()
            && self.acf.iter().all(|f| f.is_finite())
            && self
                .mean
                .iter()
                .all(|m| m.re.is_finite() && m.im.is_finite())
    }
}

/// Nonlinear part of the reformulated tendency:
/// `(−iN₊, −iN₋, ∂_tA^cf, ∂_t mean)` with `N± = ±n_half`.
fn nonlinearity(
    y: &Bundle,
    time: f64,
    potential: &Potential,
    grouping: QuarticGrouping,
    zero_nonlinearity: bool,
) -> CoreResult<Bundle> {
    if zero_nonlinearity {
        let g = y.plus.grid();
        return Ok(Bundle {
            plus: SpectralField::zeros(g),
            minus: SpectralField::zeros(g),
            acf: [SpectralField::zeros(g), SpectralField::zeros(g)],
            mean: [C64::new(0.0, 0.0); 2],
        });
    }
    let state = y.as_state(time);
    let f = rhs_reformulated(&state, potential, grouping)?;
    let minus_i = C64::new(0.0, -1.0);
    Ok(Bundle {
        plus: f.n_half.scaled(minus_i),   // −i·N₊ = −i·n_half
        minus: f.n_half.scaled(-minus_i), // −i·N₋ = −i·(−n_half)
        acf: f.acf_dot,
        mean: f.mean_dot,
    })
}

/// One Lawson-RK4 step of size `h` (may be negative: the scheme is built
/// from the reversible exponential core).
fn step_lawson(
    y: &Bundle,
    time: f64,
    h: f64,
    potential: &Potential,
    grouping: QuarticGrouping,
    zero_nonlinearity: bool,
) -> CoreResult<Bundle> {
    let nl = |y: &Bundle, t: f64| nonlinearity(y, t, potential, grouping, zero_nonlinearity);

    let g1 = nl(y, time)?;

    let mut y2 = y.clone();
    y2.add_scaled(h / 2.0, &g1);
    y2.propagate(h / 2.0);
    let mut g2 = nl(&y2, time + h / 2.0)?;
    g2.propagate(-h / 2.0);

    let mut y3 = y.clone();
    y3.add_scaled(h / 2.0, &g2);
    y3.propagate(h / 2.0);
    let mut g3 = nl(&y3, time + h / 2.0)?;
    g3.propagate(-h / 2.0);

    let mut y4 = y.clone();
    y4.add_scaled(h, &g3);
    y4.propagate(h);
    let mut g4 = nl(&y4, time + h)?;
    g4.propagate(-h);

    let mut out = y.clone();
    out.add_scaled(h / 6.0, &g1);
    out.add_scaled(h / 3.0, &g2);
    out.add_scaled(h / 3.0, &g3);
    out.add_scaled(h / 6.0, &g4);
    out.propagate(h);
    Ok(out)
}

/// Advance a reformulated state by one step of size `dt`.
pub fn step(
    state: &CshState,
    dt: f64,
    potential: &Potential,
    grouping: QuarticGrouping,
) -> CoreResult<CshState> {
    let y = Bundle::from_state(state);
    let out = step_lawson(&y, state.time, dt, potential, grouping, false)?;
    if !out.is_finite() {
        return Err(CoreError::NonFiniteState {
            time: state.time + dt,
        });
    }
    Ok(out.into_state(state.time + dt))
}

// ---------------------------------------------------------------------------
// Direct stepper (classical RK4)
// ---------------------------------------------------------------------------

#[derive(Clone)]
struct DirectBundle {
    phi: SpectralField,
    dphi: SpectralField,
    a: [SpectralField; 2],
}

impl DirectBundle {
    fn add_scaled(&mut self, h: f64, k: &DirectBundle) {
        let a = C64::new(h, 0.0);
        self.phi.add_scaled(a, &k.phi);
        self.dphi.add_scaled(a, &k.dphi);
        self.a[0].add_scaled(a, &k.a[0]);
        self.a[1].add_scaled(a, &k.a[1]);
    }

    fn is_finite(&self) -> bool {
        self.phi.is_finite() && self.dphi.is_finite() && self.a.iter().all(|f| f.is_finite())
    }
}

fn direct_tendency(
    y: &DirectBundle,
    time: f64,
    potential: &Potential,
    zero_nonlinearity: bool,
) -> CoreResult<DirectBundle> {
    if zero_nonlinearity {
        // Linear core matching ⟨∇⟩²: ∂_t²φ = (Δ − 1)φ, gauge frozen.
        let mut ddphi = y.phi.laplacian();
        ddphi.add_scaled(C64::new(-1.0, 0.0), &y.phi);
        let g = y.phi.grid();
        return Ok(DirectBundle {
            phi: y.dphi.clone(),
            dphi: ddphi,
            a: [SpectralField::zeros(g), SpectralField::zeros(g)],
        });
    }
    let state = DirectState {
        phi: y.phi.clone(),
        dphi: y.dphi.clone(),
        a: y.a.clone(),
        time,
    };
    let (phi_dot, dphi_dot, a_dot) = rhs_direct(&state, potential)?;
    Ok(DirectBundle {
        phi: phi_dot,
        dphi: dphi_dot,
        a: a_dot,
    })
}

fn step_rk4_direct(
    y: &DirectBundle,
    time: f64,
    h: f64,
    potential: &Potential,
    zero_nonlinearity: bool,
) -> CoreResult<DirectBundle> {
    let f = |y: &DirectBundle, t: f64| direct_tendency(y, t, potential, zero_nonlinearity);
    let k1 = f(y, time)?;
    let mut y2 = y.clone();
    y2.add_scaled(h / 2.0, &k1);
    let k2 = f(&y2, time + h / 2.0)?;
    let mut y3 = y.clone();
    y3.add_scaled(h / 2.0, &k2);
    let k3 = f(&y3, time + h / 2.0)?;
    let mut y4 = y.clone();
    y4.add_scaled(h, &k3);
    let k4 = f(&y4, time + h)?;
    let mut out = y.clone();
    out.add_scaled(h / 6.0, &k1);
    out.add_scaled(h / 3.0, &k2);
    out.add_scaled(h / 3.0, &k3);
    out.add_scaled(h / 6.0, &k4);
    Ok(out)
}

// ---------------------------------------------------------------------------
// Simulation driver
// ---------------------------------------------------------------------------

#[allow(clippy::too_many_arguments)]
fn record_fields(
    step: usize,
    time: f64,
    phi: &SpectralField,
    dphi: &SpectralField,
    a: &[SpectralField; 2],
    acf: &[SpectralField; 2],
    adf: &[SpectralField; 2],
    cfg: &StepperConfig,
    potential: &Potential,
) -> CoreResult<Record> {
    let s = cfg.sobolev_s;
    let gauss = gauss_residual_fields(phi, dphi, a)?;
    let norm2 =
        |pair: &[SpectralField; 2]| (pair[0].l2_norm().powi(2) + pair[1].l2_norm().powi(2)).sqrt();
    Ok(Record {
        step,
        time,
        h_phi: phi.sobolev_norm(s + 1.0),
        h_dphi: dphi.sobolev_norm(s),
        gauss_abs: gauss.abs,
        gauss_rel: gauss.rel,
        energy: energy(phi, dphi, a, potential)?,
        acf_l2: norm2(acf),
        adf_l2: norm2(adf),
        charge: charge(phi, dphi)?,
        acf_curl: curl(&acf[0], &acf[1])?.l2_norm(),
    })
}

fn record_reformulated(
    step: usize,
    state: &CshState,
    cfg: &StepperConfig,
    potential: &Potential,
) -> CoreResult<Record> {
    let (phi, dphi) = state.higgs_pair();
    let (a, adf) = state.full_gauge();
    record_fields(
        step, state.time, &phi, &dphi, &a, &state.acf, &adf, cfg, potential,
    )
}

fn record_direct(
    step: usize,
    state: &DirectState,
    cfg: &StepperConfig,
    potential: &Potential,
) -> CoreResult<Record> {
    let split = helmholtz_split(&state.a[0], &state.a[1])?;
    record_fields(
        step,
        state.time,
        &state.phi,
        &state.dphi,
        &state.a,
        &split.cf,
        &split.df,
        cfg,
        potential,
    )
}

/// Run a full trajectory from a reformulated initial state. With
/// `cfg.formulation == Direct` the state is converted once (gauge fully
/// reassembled) and evolved in the direct variables; diagnostics are
/// identical in either case. A non-finite state aborts the run and returns
/// the partial trajectory with `aborted` set.
pub fn simulate(
    state0: &CshState,
    cfg: &StepperConfig,
    potential: &Potential,
) -> CoreResult<SimOutcome> {
    cfg.validate()?;
    let steps = cfg.steps();
    let should_record =
        |i: usize| i == 0 || i == steps || (cfg.record_every > 0 && i % cfg.record_every == 0);

    match cfg.formulation {
        Formulation::Reformulated => {
            let mut y = Bundle::from_state(state0);
            let mut records = Vec::new();
            let mut aborted = None;
            let mut time = state0.time;
            if !y.is_finite() {
                aborted = Some(time);
            } else {
                records.push(record_reformulated(0, &y.as_state(time), cfg, potential)?);
                for i in 1..=steps {
                    y = step_lawson(
                        &y,
                        time,
                        cfg.dt,
                        potential,
                        cfg.grouping,
                        cfg.zero_nonlinearity,
                    )?;
                    time = state0.time + i as f64 * cfg.dt;
                    if !y.is_finite() {
                        aborted = Some(time);
                        break;
                    }
                    if should_record(i) {
                        records.push(record_reformulated(i, &y.as_state(time), cfg, potential)?);
                    }
                }
            }
            let state = y.into_state(time);
            let (phi, dphi) = if aborted.is_none() {
                state.higgs_pair()
            } else {
                (state.phi_plus.clone(), state.phi_minus.clone())
            };
            let (a, _) = if aborted.is_none() {
                state.full_gauge()
            } else {
                (state.acf.clone(), state.acf.clone())
            };
            Ok(SimOutcome {
                records,
                final_phi: phi,
                final_dphi: dphi,
                final_a: a,
                final_time: time,
                aborted,
            })
        }
        Formulation::Direct => {
            let (phi, dphi) = state0.higgs_pair();
            let (a, _) = state0.full_gauge();
            let mut y = DirectBundle { phi, dphi, a };
            let mut records = Vec::new();
            let mut aborted = None;
            let mut time = state0.time;
            if !y.is_finite() {
                aborted = Some(time);
            } else {
                let st = DirectState {
                    phi: y.phi.clone(),
                    dphi: y.dphi.clone(),
                    a: y.a.clone(),
                    time,
                };
                records.push(record_direct(0, &st, cfg, potential)?);
                for i in 1..=steps {
                    y = step_rk4_direct(&y, time, cfg.dt, potential, cfg.zero_nonlinearity)?;
                    time = state0.time + i as f64 * cfg.dt;
                    if !y.is_finite() {
                        aborted = Some(time);
                        break;
                    }
                    if should_record(i) {
                        let st = DirectState {
                            phi: y.phi.clone(),
                            dphi: y.dphi.clone(),
                            a: y.a.clone(),
                            time,
                        };
                        records.push(record_direct(i, &st, cfg, potential)?);
                    }
                }
            }
            Ok(SimOutcome {
                records,
                final_phi: y.phi,
                final_dphi: y.dphi,
                final_a: y.a,
                final_time: time,
                aborted,
            })
        }
    }
}

// ---------------------------------------------------------------------------
// Refinement study
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug)]
pub struct ConvergenceRow {
    pub dt: f64,
    /// Terminal error vs the reference run: `(‖Δφ‖²_{H^{s+1}} + ‖Δ∂_tφ‖²_{H^s})^{1/2}`.
    pub error: f64,
    /// Terminal relative Gauss residual of this run.
    pub gauss_rel: f64,
}

#[derive(Clone, Debug)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    /// Observed orders `log(e_i/e_{i+1}) / log(dt_i/dt_{i+1})`; empty when
    /// the errors sit at the rounding floor.
    pub orders: Vec<f64>,
    /// All errors at rounding level (linear-exact regime).
    pub exact: bool,
}

/// Self-convergence under `dt` refinement: runs at each `dts[i]` (strictly
/// decreasing) are compared at `t_end` against a reference run at
/// `min(dts)/4`.
pub fn convergence_study(
    state0: &CshState,
    cfg: &StepperConfig,
    potential: &Potential,
    dts: &[f64],
) -> CoreResult<ConvergenceReport> {
    if dts.is_empty() || dts.windows(2).any(|w| w[1] >= w[0]) || dts.iter().any(|&d| d <= 0.0) {
        return Err(CoreError::InvalidParameter {
            name: "dts",
            reason: "need a strictly decreasing list of positive steps".into(),
        });
    }
    let s = cfg.sobolev_s;
    let run = |dt: f64| -> CoreResult<(SpectralField, SpectralField, f64)> {
        let mut c = *cfg;
        c.dt = dt;
        c.record_every = 0;
        let out = simulate(state0, &c, potential)?;
        if let Some(t) = out.aborted {
            return Err(CoreError::NonFiniteState { time: t });
        }
        let gauss = out.records.last().map(|r| r.gauss_rel).unwrap_or(0.0);
        Ok((out.final_phi, out.final_dphi, gauss))
    };

    let dt_ref = dts[dts.len() - 1] / 4.0;
    let (phi_ref, dphi_ref, _) = run(dt_ref)?;
    let scale = 1.0 + phi_ref.sobolev_norm(s + 1.0) + dphi_ref.sobolev_norm(s);

    let mut rows = Vec::with_capacity(dts.len());
    for &dt in dts {
        let (phi, dphi, gauss_rel) = run(dt)?;
        let error = ((&phi - &phi_ref).sobolev_norm(s + 1.0).powi(2)
            + (&dphi - &dphi_ref).sobolev_norm(s).powi(2))
        .sqrt();
        rows.push(ConvergenceRow {
            dt,
            error,
            gauss_rel,
        });
    }

    let exact = rows.iter().all(|r| r.error <= 1e-12 * scale);
    let orders = if exact {
        Vec::new()
    } else {
        rows.windows(2)
            .map(|w| (w[0].error / w[1].error).ln() / (w[0].dt / w[1].dt).ln())
            .collect()
    };
    Ok(ConvergenceReport {
        rows,
        orders,
        exact,
    })
}

// ---------------------------------------------------------------------------
// Data-continuity probe
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug)]
pub struct ContinuityRow {
    pub delta: f64,
    /// Terminal `(‖Δφ‖²_{H^{s+1}} + ‖Δ∂_tφ‖²_{H^s})^{1/2}` distance.
    pub distance: f64,
    /// `distance / delta`.
    pub ratio: f64,
}

#[derive(Clone, Debug)]
pub struct ContinuityReport {
    pub rows: Vec<ContinuityRow>,
    /// `max(ratio) / min(ratio)` — 1 for perfectly linear response.
    pub ratio_spread: f64,
}

/// Perturb `(φ₀, φ₁)` by `δ` in `H^{s+1}×H^s` along a seeded random
/// direction (joint norm 1), evolve both, and report terminal solution
/// distances. Linear response (spread close to 1) is the desk-scale proxy
/// for continuous dependence on the data.
#[allow(clippy::too_many_arguments)]
pub fn continuity_probe(
    phi0: &SpectralField,
    phi1: &SpectralField,
    acf0: &[SpectralField; 2],
    mean0: [f64; 2],
    cfg: &StepperConfig,
    potential: &Potential,
    deltas: &[f64],
    direction_seed: u64,
) -> CoreResult<ContinuityReport> {
    if deltas.is_empty() || deltas.iter().any(|&d| d <= 0.0 || !d.is_finite()) {
        return Err(CoreError::InvalidParameter {
            name: "deltas",
            reason: "need positive finite perturbation sizes".into(),
        });
    }
    let s = cfg.sobolev_s;
    let (dir_phi, dir_dphi) = perturbation_direction(phi0.grid(), s, direction_seed);

    let run =
        |p0: &SpectralField, p1: &SpectralField| -> CoreResult<(SpectralField, SpectralField)> {
            let (state, _) = init_from_data(p0, p1, acf0, mean0)?;
            let out = simulate(&state, cfg, potential)?;
            if let Some(t) = out.aborted {
                return Err(CoreError::NonFiniteState { time: t });
            }
            Ok((out.final_phi, out.final_dphi))
        };

    let (base_phi, base_dphi) = run(phi0, phi1)?;
    let mut rows = Vec::with_capacity(deltas.len());
    for &delta in deltas {
        let mut p0 = phi0.clone();
        p0.add_scaled(C64::new(delta, 0.0), &dir_phi);
        let mut p1 = phi1.clone();
        p1.add_scaled(C64::new(delta, 0.0), &dir_dphi);
        let (phi_t, dphi_t) = run(&p0, &p1)?;
        let distance = ((&phi_t - &base_phi).sobolev_norm(s + 1.0).powi(2)
            + (&dphi_t - &base_dphi).sobolev_norm(s).powi(2))
        .sqrt();
        rows.push(ContinuityRow {
            delta,
            distance,
            ratio: distance / delta,
        });
    }
    let max = rows.iter().map(|r| r.ratio).fold(f64::MIN, f64::max);
    let min = rows.iter().map(|r| r.ratio).fold(f64::MAX, f64::min);
    Ok(ContinuityReport {
        rows,
        ratio_spread: if min > 0.0 { max / min } else { f64::INFINITY },
    })
}

/// Seeded random direction with joint `H^{s+1}×H^s` norm 1 (each component
/// carries half the squared norm), spectrally distributed like the
/// low-regularity data class.
fn perturbation_direction(
    grid: crate::field::Grid,
    s: f64,
    seed: u64,
) -> (SpectralField, SpectralField) {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |decay: f64| {
        SpectralField::from_modes(grid, |m1, m2| {
            use rand::Rng;
            let w = (1.0 + (m1 * m1 + m2 * m2) as f64).powf(-decay / 2.0);
            C64::new(
                w * rng.random_range(-1.0..1.0),
                w * rng.random_range(-1.0..1.0),
            )
        })
    };
    let raw_phi = draw(2.0 * (s + 2.0));
    let raw_dphi = draw(2.0 * (s + 1.0));
    let inv = 0.5f64.sqrt();
    (
        raw_phi.scaled(C64::new(inv / raw_phi.sobolev_norm(s + 1.0), 0.0)),
        raw_dphi.scaled(C64::new(inv / raw_dphi.sobolev_norm(s), 0.0)),
    )
}
