//! The three synchronous-round max-consensus engines.
//!
//! - **naive-MC**: flooding max update, optionally over noisy links.
//! - **D-MC**: ADMM-derived iteration exchanging raw estimates `x` and
//!   maintaining the neighbor dual aggregate `v` explicitly.
//! - **RD-MC**: noise-robust variant that eliminates `v`, exchanges the
//!   smoothed message `s`, and averages `x` over a sliding window.
//!
//! All engines update every agent in lockstep once per round and consume
//! exactly one noise draw per directed link per round (D-MC's sensitivity
//! mode with independent redraws is the one exception).

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::noise::{LinkNoiseModel, NoiseField};

/// Runs whose estimates pass this magnitude are flagged as diverged.
pub const DIVERGENCE_LIMIT: f64 = 1e6;

/// Weight vectors must sum to one within this tolerance.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-12;

/// Which engine a run drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EngineKind {
    Naive,
    Dmc,
    Rdmc,
}

impl EngineKind {
    pub fn label(&self) -> &'static str {
        match self {
            EngineKind::Naive => "naive",
            EngineKind::Dmc => "dmc",
            EngineKind::Rdmc => "rdmc",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "naive" => Ok(EngineKind::Naive),
            "dmc" => Ok(EngineKind::Dmc),
            "rdmc" => Ok(EngineKind::Rdmc),
            other => Err(Error::parameter(
                "algo",
                format!("unknown algorithm `{other}` (expected naive, dmc, or rdmc)"),
            )),
        }
    }
}

impl std::fmt::Display for EngineKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Initial values a_i and their exact maximum a*.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    values: Vec<f64>,
    max: f64,
}

impl ProblemInstance {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::ShapeMismatch(
                "problem instance needs at least one agent".to_string(),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::parameter(
                "initial_values",
                "all initial values must be finite",
            ));
        }
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(ProblemInstance { values, max })
    }

    pub fn initial_values(&self) -> &[f64] {
        &self.values
    }

    /// The exact network maximum a*.
    pub fn true_max(&self) -> f64 {
        self.max
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// ADMM penalty parameters ρ_y, ρ_z and the per-agent step gain
/// n_i = (ρ_y + 2 ρ_z d_i)⁻¹ they induce.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenaltyParams {
    rho_y: f64,
    rho_z: f64,
}

impl PenaltyParams {
    pub fn new(rho_y: f64, rho_z: f64) -> Result<Self> {
        if !rho_y.is_finite() || rho_y <= 0.0 {
            return Err(Error::parameter("rho_y", "penalty must be finite and > 0"));
        }
        if !rho_z.is_finite() || rho_z <= 0.0 {
            return Err(Error::parameter("rho_z", "penalty must be finite and > 0"));
        }
        Ok(PenaltyParams { rho_y, rho_z })
    }

    pub fn rho_y(&self) -> f64 {
        self.rho_y
    }

    pub fn rho_z(&self) -> f64 {
        self.rho_z
    }

    /// Step gain for an agent of the given degree.
    pub fn gain(&self, degree: usize) -> f64 {
        1.0 / (self.rho_y + 2.0 * self.rho_z * degree as f64)
    }

    /// Per-agent gains n_i over a graph.
    pub fn gains(&self, graph: &Graph) -> Vec<f64> {
        (0..graph.num_agents())
            .map(|i| self.gain(graph.degree(i)))
            .collect()
    }
}

/// Uniform window weights α_ℓ = 1/C.
pub fn uniform_weights(window: usize) -> Vec<f64> {
    vec![1.0 / window as f64; window]
}

fn validate_weights(window: usize, weights: &[f64]) -> Result<()> {
    if window == 0 {
        return Err(Error::parameter("window", "window size C must be >= 1"));
    }
    if weights.len() != window {
        return Err(Error::parameter(
            "alpha",
            format!(
                "expected {window} weights for window size {window}, got {}",
                weights.len()
            ),
        ));
    }
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(Error::parameter("alpha", "weights must be finite and >= 0"));
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
        return Err(Error::parameter(
            "alpha",
            format!("weights sum to {sum}, expected 1 within {WEIGHT_SUM_TOLERANCE:e}"),
        ));
    }
    Ok(())
}

fn check_dims(graph: &Graph, instance: &ProblemInstance) -> Result<()> {
    if instance.len() != graph.num_agents() {
        return Err(Error::ShapeMismatch(format!(
            "instance has {} values but graph has {} agents",
            instance.len(),
            graph.num_agents()
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// naive-MC
// ---------------------------------------------------------------------------

/// Flooding max-consensus state: one estimate per agent, initialized to a_i.
#[derive(Debug, Clone)]
pub struct NaiveState {
    x: Vec<f64>,
}

impl NaiveState {
    pub fn new(instance: &ProblemInstance) -> Self {
        NaiveState {
            x: instance.initial_values().to_vec(),
        }
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    /// One synchronous round: x_i <- max(x_i, max_j (x_j + w_{j->i})).
    pub fn round(&mut self, graph: &Graph, mut noise: Option<&mut NoiseField>) -> Result<()> {
        if self.x.len() != graph.num_agents() {
            return Err(Error::ShapeMismatch(format!(
                "state has {} agents but graph has {}",
                self.x.len(),
                graph.num_agents()
            )));
        }
        let mut new_x = self.x.clone();
        for i in 0..graph.num_agents() {
            for &nb in graph.neighbors(i) {
                let mut rx = self.x[nb];
                if let Some(field) = noise.as_deref_mut() {
                    rx += field.draw(nb, i)?;
                }
                new_x[i] = new_x[i].max(rx);
            }
        }
        self.x = new_x;
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// D-MC (Eqs. 4a-4d)
// ---------------------------------------------------------------------------

/// D-MC per-agent state: estimates x, projected values y, scaled dual ū,
/// neighbor dual aggregate v, plus the noisy receptions cached from the
/// previous round for the next x-update.
#[derive(Debug, Clone)]
pub struct DmcState {
    x: Vec<f64>,
    y: Vec<f64>,
    u_bar: Vec<f64>,
    v: Vec<f64>,
    /// x̃_j(k) per receiver, in sorted-neighbor order; `None` before the
    /// first broadcast (round 0 reads it as all zeros).
    rx_cache: Option<Vec<Vec<f64>>>,
    round: usize,
    /// Sensitivity mode: redraw the x-update receptions independently
    /// instead of reusing the cached v-update receptions.
    fresh_receptions: bool,
}

impl DmcState {
    /// All-zero initialization (x, y, ū, v all start at 0).
    pub fn new(graph: &Graph, fresh_receptions: bool) -> Self {
        let j = graph.num_agents();
        DmcState {
            x: vec![0.0; j],
            y: vec![0.0; j],
            u_bar: vec![0.0; j],
            v: vec![0.0; j],
            rx_cache: None,
            round: 0,
            fresh_receptions,
        }
    }

    /// Resume from an explicit snapshot. `rx_cache`, when present, must be
    /// shaped like the graph's adjacency (receiver-major, sorted neighbors).
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        graph: &Graph,
        x: Vec<f64>,
        y: Vec<f64>,
        u_bar: Vec<f64>,
        v: Vec<f64>,
        rx_cache: Option<Vec<Vec<f64>>>,
        round: usize,
        fresh_receptions: bool,
    ) -> Result<Self> {
        let j = graph.num_agents();
        if [x.len(), y.len(), u_bar.len(), v.len()] != [j, j, j, j] {
            return Err(Error::ShapeMismatch(
                "snapshot vectors must all have one entry per agent".to_string(),
            ));
        }
        if let Some(cache) = &rx_cache {
            let shaped = cache.len() == j
                && (0..j).all(|i| cache[i].len() == graph.neighbors(i).len());
            if !shaped {
                return Err(Error::ShapeMismatch(
                    "reception cache must mirror the adjacency structure".to_string(),
                ));
            }
        }
        Ok(DmcState {
            x,
            y,
            u_bar,
            v,
            rx_cache,
            round,
            fresh_receptions,
        })
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn u_bar(&self) -> &[f64] {
        &self.u_bar
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    pub fn round_index(&self) -> usize {
        self.round
    }

    /// One synchronous D-MC round: Eq. 4a with the previous round's cached
    /// receptions, Eqs. 4b-4c, then broadcast x(k+1), receive fresh noisy
    /// copies, apply Eq. 4d, and cache those receptions for the next round.
    pub fn round(
        &mut self,
        graph: &Graph,
        instance: &ProblemInstance,
        params: &PenaltyParams,
        mut noise: Option<&mut NoiseField>,
    ) -> Result<()> {
        let j = graph.num_agents();
        check_dims(graph, instance)?;
        if self.x.len() != j {
            return Err(Error::ShapeMismatch(format!(
                "state has {} agents but graph has {}",
                self.x.len(),
                j
            )));
        }
        if self.round > 0 && !self.fresh_receptions && self.rx_cache.is_none() {
            return Err(Error::ProtocolOrder(format!(
                "round {} x-update needs the receptions cached by the previous round",
                self.round
            )));
        }

        let j_inv = 1.0 / j as f64;
        let a = instance.initial_values();
        let (rho_y, rho_z) = (params.rho_y, params.rho_z);

        // Eq. 4a: x(k+1). Round 0 has no prior broadcast, so the reception
        // terms are exactly zero.
        let mut new_x = vec![0.0; j];
        for i in 0..j {
            let n_i = params.gain(graph.degree(i));
            let mut pair_sum = 0.0;
            for (t, &nb) in graph.neighbors(i).iter().enumerate() {
                let rx = if self.round == 0 {
                    0.0
                } else if self.fresh_receptions {
                    let mut rx = self.x[nb];
                    if let Some(field) = noise.as_deref_mut() {
                        rx += field.draw(nb, i)?;
                    }
                    rx
                } else {
                    self.rx_cache.as_ref().expect("checked above")[i][t]
                };
                pair_sum += self.x[i] + rx;
            }
            new_x[i] = n_i
                * (-j_inv + rho_y * (self.y[i] - self.u_bar[i]) - self.v[i] + rho_z * pair_sum);
        }

        // Eqs. 4b-4c: project onto y >= a and accumulate the dual.
        for i in 0..j {
            let new_y = (new_x[i] + self.u_bar[i]).max(a[i]);
            self.u_bar[i] += new_x[i] - new_y;
            self.y[i] = new_y;
        }

        // Broadcast x(k+1); Eq. 4d on the fresh receptions, which are cached
        // for the next round's Eq. 4a (one transmission per link per round).
        let mut cache = self
            .rx_cache
            .take()
            .unwrap_or_else(|| (0..j).map(|i| vec![0.0; graph.neighbors(i).len()]).collect());
        for i in 0..j {
            let mut residual = 0.0;
            for (t, &nb) in graph.neighbors(i).iter().enumerate() {
                let mut rx = new_x[nb];
                if let Some(field) = noise.as_deref_mut() {
                    rx += field.draw(nb, i)?;
                }
                residual += new_x[i] - rx;
                cache[i][t] = rx;
            }
            self.v[i] += rho_z * residual;
        }
        self.rx_cache = Some(cache);
        self.x = new_x;
        self.round += 1;
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// RD-MC (Eqs. 6a-6d with 4b-4c; Algorithm 1)
// ---------------------------------------------------------------------------

/// How RD-MC seeds the k=1 state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum RdmcInit {
    /// Verbatim Algorithm 1: y(1)=0, ū(1)=0, z(1)=0.
    #[default]
    Algorithm1,
    /// Honest first y-projection, as the D-MC derivation implies:
    /// y(1)=max(x(1), a), ū(1)=x(1)-y(1), z(1)=2·y(1).
    DerivationConsistent,
}

impl RdmcInit {
    pub fn label(&self) -> &'static str {
        match self {
            RdmcInit::Algorithm1 => "algorithm1",
            RdmcInit::DerivationConsistent => "derivation",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "algorithm1" => Ok(RdmcInit::Algorithm1),
            "derivation" => Ok(RdmcInit::DerivationConsistent),
            other => Err(Error::parameter(
                "rdmc_init",
                format!("unknown init `{other}` (expected algorithm1 or derivation)"),
            )),
        }
    }
}

/// RD-MC per-agent state: a sliding window of recent estimates, the
/// projection/dual pair (y, ū), the extrapolated z, and the outgoing
/// smoothed message s.
#[derive(Debug, Clone)]
pub struct RdmcState {
    /// Newest first: hist[0] = x(k), hist[1] = x(k-1), ...; length
    /// max(C, 2), zero-padded below time 0.
    hist: VecDeque<Vec<f64>>,
    y: Vec<f64>,
    u_bar: Vec<f64>,
    z: Vec<f64>,
    s: Vec<f64>,
    weights: Vec<f64>,
    round: usize,
}

impl RdmcState {
    /// Initialization per Algorithm 1: x(0)=0, x(1) = -J⁻¹ n_i, ū(1)=0,
    /// z(1)=0, s(1) = -2 J⁻¹ n_i (the variant init applies the honest
    /// first y-projection instead).
    pub fn new(
        graph: &Graph,
        instance: &ProblemInstance,
        params: &PenaltyParams,
        window: usize,
        weights: &[f64],
        init: RdmcInit,
    ) -> Result<Self> {
        check_dims(graph, instance)?;
        validate_weights(window, weights)?;
        let j = graph.num_agents();
        let j_inv = 1.0 / j as f64;
        let depth = window.max(2);

        let x1: Vec<f64> = (0..j)
            .map(|i| -j_inv * params.gain(graph.degree(i)))
            .collect();
        let mut hist: VecDeque<Vec<f64>> = (0..depth).map(|_| vec![0.0; j]).collect();
        hist.push_front(x1);
        hist.truncate(depth);

        let mut state = RdmcState {
            hist,
            y: vec![0.0; j],
            u_bar: vec![0.0; j],
            z: vec![0.0; j],
            s: (0..j)
                .map(|i| -2.0 * j_inv * params.gain(graph.degree(i)))
                .collect(),
            weights: weights.to_vec(),
            round: 1,
        };
        if init == RdmcInit::DerivationConsistent {
            let a = instance.initial_values();
            for i in 0..j {
                let x1_i = state.hist[0][i];
                let y1 = x1_i.max(a[i]);
                state.y[i] = y1;
                state.u_bar[i] = x1_i - y1;
                state.z[i] = 2.0 * y1;
            }
            let x_bar = state.window_average();
            for i in 0..j {
                state.s[i] = 2.0 * x_bar[i];
            }
        }
        Ok(state)
    }

    /// Resume from a snapshot holding the two most recent estimate vectors;
    /// older window history is taken as zero.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        graph: &Graph,
        x_curr: Vec<f64>,
        x_prev: Vec<f64>,
        y: Vec<f64>,
        u_bar: Vec<f64>,
        z: Vec<f64>,
        s: Vec<f64>,
        window: usize,
        weights: &[f64],
        round: usize,
    ) -> Result<Self> {
        validate_weights(window, weights)?;
        let j = graph.num_agents();
        let dims = [
            x_curr.len(),
            x_prev.len(),
            y.len(),
            u_bar.len(),
            z.len(),
            s.len(),
        ];
        if dims != [j; 6] {
            return Err(Error::ShapeMismatch(
                "snapshot vectors must all have one entry per agent".to_string(),
            ));
        }
        let depth = window.max(2);
        let mut hist: VecDeque<Vec<f64>> = VecDeque::with_capacity(depth);
        hist.push_back(x_curr);
        hist.push_back(x_prev);
        while hist.len() < depth {
            hist.push_back(vec![0.0; j]);
        }
        Ok(RdmcState {
            hist,
            y,
            u_bar,
            z,
            s,
            weights: weights.to_vec(),
            round,
        })
    }

    pub fn x(&self) -> &[f64] {
        &self.hist[0]
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn u_bar(&self) -> &[f64] {
        &self.u_bar
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }

    /// The outgoing smoothed message s(k).
    pub fn s(&self) -> &[f64] {
        &self.s
    }

    pub fn round_index(&self) -> usize {
        self.round
    }

    fn window_average(&self) -> Vec<f64> {
        let j = self.hist[0].len();
        let mut x_bar = vec![0.0; j];
        for i in 0..j {
            let mut acc = 0.0;
            for (l, w) in self.weights.iter().enumerate() {
                acc += w * self.hist[l][i];
            }
            x_bar[i] = acc;
        }
        x_bar
    }

    /// One synchronous RD-MC round, in Algorithm 1 order: receive s̃_j(k),
    /// x-update (6a), window average (6b), y-update (4b), ū-update (4c),
    /// z-update (6c), emit s(k+1) (6d).
    pub fn round(
        &mut self,
        graph: &Graph,
        instance: &ProblemInstance,
        params: &PenaltyParams,
        mut noise: Option<&mut NoiseField>,
    ) -> Result<()> {
        let j = graph.num_agents();
        check_dims(graph, instance)?;
        if self.hist[0].len() != j {
            return Err(Error::ShapeMismatch(format!(
                "state has {} agents but graph has {}",
                self.hist[0].len(),
                j
            )));
        }
        let a = instance.initial_values();
        let (rho_y, rho_z) = (params.rho_y, params.rho_z);

        // Receive s̃_j(k) and apply Eq. 6a.
        let mut new_x = vec![0.0; j];
        for i in 0..j {
            let d_i = graph.degree(i);
            let n_i = params.gain(d_i);
            let mut recv = 0.0;
            for &nb in graph.neighbors(i) {
                let mut rx = self.s[nb];
                if let Some(field) = noise.as_deref_mut() {
                    rx += field.draw(nb, i)?;
                }
                recv += rx;
            }
            new_x[i] = (1.0 - rho_y * n_i) * self.hist[0][i]
                - rho_z * d_i as f64 * n_i * self.hist[1][i]
                + n_i * (rho_y * self.z[i] + rho_z * recv);
        }

        let depth = self.weights.len().max(2);
        self.hist.push_front(new_x);
        self.hist.truncate(depth);

        // Eq. 6b on the updated window, then 4b, 4c, 6c, 6d.
        let x_bar = self.window_average();
        for i in 0..j {
            let x_new = self.hist[0][i];
            let new_y = (x_new + self.u_bar[i]).max(a[i]);
            self.u_bar[i] += x_new - new_y;
            self.z[i] = 2.0 * new_y - self.y[i];
            self.y[i] = new_y;
            self.s[i] = 2.0 * x_bar[i] - self.hist[1][i];
        }
        self.round += 1;
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Run driver
// ---------------------------------------------------------------------------

/// Everything one realization run needs.
#[derive(Debug, Clone)]
pub struct RunConfig<'a> {
    pub kind: EngineKind,
    pub graph: &'a Graph,
    pub instance: &'a ProblemInstance,
    pub params: PenaltyParams,
    /// Window size C (RD-MC only).
    pub window: usize,
    /// Window weights α (RD-MC only); must sum to 1.
    pub weights: Vec<f64>,
    /// `None` runs noiseless.
    pub noise: Option<LinkNoiseModel>,
    pub realization: u64,
    /// Iteration count K; the trajectory has K+1 points.
    pub rounds: usize,
    pub rdmc_init: RdmcInit,
    pub dmc_fresh_receptions: bool,
}

impl<'a> RunConfig<'a> {
    pub fn new(
        kind: EngineKind,
        graph: &'a Graph,
        instance: &'a ProblemInstance,
        params: PenaltyParams,
        rounds: usize,
    ) -> Self {
        RunConfig {
            kind,
            graph,
            instance,
            params,
            window: 1,
            weights: uniform_weights(1),
            noise: None,
            realization: 0,
            rounds,
            rdmc_init: RdmcInit::Algorithm1,
            dmc_fresh_receptions: false,
        }
    }
}

/// Full per-agent estimate history of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    x: Vec<Vec<f64>>,
    final_y: Option<Vec<f64>>,
    diverged_at: Option<usize>,
    requested_points: usize,
}

impl Trajectory {
    /// Time-major estimates: `x()[k][i]` is agent i at iteration k. When the
    /// run diverged, points from `diverged_at` on are absent, not
    /// extrapolated.
    pub fn x(&self) -> &[Vec<f64>] {
        &self.x
    }

    pub fn point(&self, k: usize) -> Option<&[f64]> {
        self.x.get(k).map(Vec::as_slice)
    }

    /// Final projected values y (ADMM engines only), for inspection.
    pub fn final_y(&self) -> Option<&[f64]> {
        self.final_y.as_deref()
    }

    /// First iteration whose estimates left the divergence guard, if any.
    pub fn diverged_at(&self) -> Option<usize> {
        self.diverged_at
    }

    pub fn is_diverged(&self) -> bool {
        self.diverged_at.is_some()
    }

    /// Points actually recorded (K+1, or `diverged_at` when flagged).
    pub fn num_points(&self) -> usize {
        self.x.len()
    }

    /// K+1: the points a non-diverged run records.
    pub fn requested_points(&self) -> usize {
        self.requested_points
    }
}

fn out_of_bounds(xs: &[f64]) -> bool {
    xs.iter().any(|x| !x.is_finite() || x.abs() > DIVERGENCE_LIMIT)
}

/// Drives one engine for K rounds and records the estimate trajectory.
/// Deterministic given the config (master seed and realization included).
pub fn run(cfg: &RunConfig) -> Result<Trajectory> {
    check_dims(cfg.graph, cfg.instance)?;
    if cfg.rounds == 0 {
        return Err(Error::parameter("iters", "iteration count K must be >= 1"));
    }
    let mut field = match &cfg.noise {
        Some(model) => Some(NoiseField::new(model, cfg.graph, cfg.realization)?),
        None => None,
    };
    let requested_points = cfg.rounds + 1;
    let mut x = Vec::with_capacity(requested_points);
    let mut diverged_at = None;

    let final_y = match cfg.kind {
        EngineKind::Naive => {
            let mut state = NaiveState::new(cfg.instance);
            x.push(state.x().to_vec());
            for k in 1..=cfg.rounds {
                state.round(cfg.graph, field.as_mut())?;
                if out_of_bounds(state.x()) {
                    diverged_at = Some(k);
                    break;
                }
                x.push(state.x().to_vec());
            }
            None
        }
        EngineKind::Dmc => {
            let mut state = DmcState::new(cfg.graph, cfg.dmc_fresh_receptions);
            x.push(state.x().to_vec());
            for k in 1..=cfg.rounds {
                state.round(cfg.graph, cfg.instance, &cfg.params, field.as_mut())?;
                if out_of_bounds(state.x()) {
                    diverged_at = Some(k);
                    break;
                }
                x.push(state.x().to_vec());
            }
            Some(state.y().to_vec())
        }
        EngineKind::Rdmc => {
            let mut state = RdmcState::new(
                cfg.graph,
                cfg.instance,
                &cfg.params,
                cfg.window,
                &cfg.weights,
                cfg.rdmc_init,
            )?;
            x.push(vec![0.0; cfg.graph.num_agents()]);
            if out_of_bounds(state.x()) {
                diverged_at = Some(1);
            } else {
                x.push(state.x().to_vec());
                for k in 2..=cfg.rounds {
                    state.round(cfg.graph, cfg.instance, &cfg.params, field.as_mut())?;
                    if out_of_bounds(state.x()) {
                        diverged_at = Some(k);
                        break;
                    }
                    x.push(state.x().to_vec());
                }
            }
            Some(state.y().to_vec())
        }
    };

    Ok(Trajectory {
        x,
        final_y,
        diverged_at,
        requested_points,
    })
}
