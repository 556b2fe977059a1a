//! The CHSH game played with the entangled two-superqubit state `Υ`.
//!
//! Alice and Bob apply `S(2r_iη_A)U(α_i, β_i)` and `S(2s_jη_B)U(γ_j, δ_j)`
//! depending on their input bits, measure in the standard basis and announce
//! `0` for `|0⟩` and `1` for `|1⟩` or `|•⟩`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::superstate::{measure_real, upsilon, Ket};
use crate::supermatrix::Supermatrix;
use crate::uosp::{s_matrix, u_matrix, GroupElementParams};

const ORDER: u8 = 4;

/// Number of free parameters in a strategy.
pub const DIM: usize = 14;

/// Indices of the super displacements in the parameter vector.
const SUPER_PARAMS: [usize; 6] = [0, 1, 2, 3, 4, 5];

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Angles {
    pub theta: f64,
    pub phi: f64,
}

impl Angles {
    pub fn new(theta: f64, phi: f64) -> Self {
        Angles { theta, phi }
    }
}

/// Full parameter set of a CHSH strategy.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Strategy {
    #[serde(rename = "pA")]
    pub pa: f64,
    #[serde(rename = "pB")]
    pub pb: f64,
    pub r: [f64; 2],
    pub s: [f64; 2],
    pub alice: [Angles; 2],
    pub bob: [Angles; 2],
}

impl Strategy {
    /// Layout: `[pA, pB, r0, r1, s0, s1, θA0, φA0, θA1, φA1, θB0, φB0, θB1, φB1]`.
    pub fn to_vec(&self) -> [f64; DIM] {
        [
            self.pa,
            self.pb,
            self.r[0],
            self.r[1],
            self.s[0],
            self.s[1],
            self.alice[0].theta,
            self.alice[0].phi,
            self.alice[1].theta,
            self.alice[1].phi,
            self.bob[0].theta,
            self.bob[0].phi,
            self.bob[1].theta,
            self.bob[1].phi,
        ]
    }

    pub fn from_slice(x: &[f64]) -> Self {
        assert_eq!(x.len(), DIM, "strategy vectors have {DIM} entries");
        Strategy {
            pa: x[0],
            pb: x[1],
            r: [x[2], x[3]],
            s: [x[4], x[5]],
            alice: [Angles::new(x[6], x[7]), Angles::new(x[8], x[9])],
            bob: [Angles::new(x[10], x[11]), Angles::new(x[12], x[13])],
        }
    }

    /// The ordinary quantum strategy reaching `cos²(π/8)`.
    pub fn tsirelson() -> Self {
        Strategy {
            alice: [Angles::new(0.0, 0.0), Angles::new(PI / 4.0, 0.0)],
            bob: [Angles::new(PI / 8.0, 0.0), Angles::new(-PI / 8.0, 0.0)],
            ..Strategy::default()
        }
    }

    /// Same strategy with every super displacement multiplied by `t`.
    pub fn scaled_super(&self, t: f64) -> Self {
        Strategy {
            pa: self.pa * t,
            pb: self.pb * t,
            r: self.r.map(|v| v * t),
            s: self.s.map(|v| v * t),
            ..*self
        }
    }

    pub fn is_finite(&self) -> bool {
        self.to_vec().iter().all(|v| v.is_finite())
    }

    /// Largest excess of `|pA|, |pB|, |r_i|, |s_j|` over `1/2`.
    pub fn box_excess(&self) -> f64 {
        [self.pa, self.pb, self.r[0], self.r[1], self.s[0], self.s[1]]
            .iter()
            .map(|v| (v.abs() - 0.5).max(0.0))
            .fold(0.0, f64::max)
    }
}

/// `S(2rη)U(α, β)` on the given party's generator pair of `CΛ₄`.
pub fn local_rotation(pair: u8, displacement: f64, angles: Angles) -> Supermatrix {
    let g = GroupElementParams::new(angles.theta, angles.phi, 0.0);
    &s_matrix(ORDER, pair, displacement) * &u_matrix(ORDER, g.alpha(), g.beta())
}

/// Whether outcome `(m, n)` wins on inputs `(i, j)`: `a ⊕ b = i·j`.
pub fn is_winning(i: usize, j: usize, m: Ket, n: Ket) -> bool {
    usize::from(m.bit() ^ n.bit()) == (i & j)
}

/// Real probabilities of the nine outcomes `(m_A, n_B)` on inputs `(i, j)`,
/// in lexicographic ket order.
pub fn outcome_probs(i: usize, j: usize, strat: &Strategy) -> Result<[f64; 9]> {
    let za = local_rotation(1, strat.r[i], strat.alice[i]);
    let zb = local_rotation(2, strat.s[j], strat.bob[j]);
    let rotated = upsilon(strat.pa, strat.pb).apply_local(&za, &zb)?;
    let probs = measure_real(&rotated)?;
    let mut out = [0.0; 9];
    out.copy_from_slice(&probs);
    Ok(out)
}

/// Probability tables indexed `[i][j][outcome]`.
pub type Tables = [[[f64; 9]; 2]; 2];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub p_win: f64,
    pub violation: f64,
    pub tables: Tables,
}

fn win_from_tables(tables: &Tables) -> f64 {
    let mut total = 0.0;
    for (i, row) in tables.iter().enumerate() {
        for (j, probs) in row.iter().enumerate() {
            for (k, p) in probs.iter().enumerate() {
                let (m, n) = (Ket::from_index(k / 3), Ket::from_index(k % 3));
                if is_winning(i, j, m, n) {
                    total += p;
                }
            }
        }
    }
    total / 4.0
}

fn probability_violation(tables: &Tables) -> f64 {
    tables
        .iter()
        .flatten()
        .flatten()
        .map(|&p| (-p).max(p - 1.0).max(0.0))
        .fold(0.0, f64::max)
}

pub fn evaluate(strat: &Strategy) -> Result<Evaluation> {
    if !strat.is_finite() {
        return Err(Error::InvalidParameter("strategy has non-finite entries".into()));
    }
    // Υ and the four local rotations are shared across the 36 probabilities.
    let state = upsilon(strat.pa, strat.pb);
    let za = [0, 1].map(|i| local_rotation(1, strat.r[i], strat.alice[i]));
    let zb = [0, 1].map(|j| local_rotation(2, strat.s[j], strat.bob[j]));
    let mut tables = [[[0.0; 9]; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let rotated = state.apply_local(&za[i], &zb[j])?;
            tables[i][j].copy_from_slice(&measure_real(&rotated)?);
        }
    }
    Ok(Evaluation {
        p_win: win_from_tables(&tables),
        violation: probability_violation(&tables) + strat.box_excess(),
        tables,
    })
}

/// `(1/4) Σ_ij Σ_{winning mn} p^{(ij)}_{mn}`
pub fn win_prob(strat: &Strategy) -> Result<f64> {
    Ok(evaluate(strat)?.p_win)
}

/// Largest distance of any of the 36 probabilities outside `[0, 1]`, plus
/// the box excess of the displacements.
pub fn constraint_violation(strat: &Strategy) -> Result<f64> {
    Ok(evaluate(strat)?.violation)
}

/// Best classical deterministic strategy, found by enumerating all 16
/// answer functions. Returns the winning probability and the answers
/// `(a(0), a(1), b(0), b(1))`.
pub fn classical_optimum() -> (f64, [u8; 4]) {
    let mut best = (f64::NEG_INFINITY, [0u8; 4]);
    for code in 0u8..16 {
        let answers = [code & 1, (code >> 1) & 1, (code >> 2) & 1, (code >> 3) & 1];
        let mut wins = 0;
        for i in 0..2 {
            for j in 0..2 {
                if (answers[i] ^ answers[2 + j]) as usize == i & j {
                    wins += 1;
                }
            }
        }
        let p = wins as f64 / 4.0;
        if p > best.0 {
            best = (p, answers);
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizeConfig {
    pub seed: u64,
    pub restarts: usize,
    pub max_iters: usize,
    pub penalty_weight: f64,
    pub tolerance: f64,
    /// Pin every super displacement to zero.
    pub quantum_only: bool,
    /// Run restarts on the rayon pool; results do not depend on this.
    pub parallel: bool,
}

impl Default for OptimizeConfig {
    fn default() -> Self {
        OptimizeConfig {
            seed: 1,
            restarts: 200,
            max_iters: 2000,
            penalty_weight: 1e3,
            tolerance: 1e-9,
            quantum_only: false,
            parallel: false,
        }
    }
}

impl OptimizeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::InvalidParameter("restarts must be positive".into()));
        }
        if !(self.penalty_weight > 0.0 && self.penalty_weight.is_finite()) {
            return Err(Error::InvalidParameter("penalty weight must be positive".into()));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::InvalidParameter("tolerance must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub strategy: Strategy,
    pub evaluation: Evaluation,
    pub seed: u64,
    pub restarts: usize,
    /// Restart that produced the reported strategy.
    pub best_restart: usize,
    /// Simplex iterations summed over all restarts.
    pub iterations: usize,
}

struct RestartOutcome {
    strategy: Strategy,
    evaluation: Evaluation,
    iterations: usize,
}

/// Seed of restart `r`, a SplitMix64 mix of the master seed and the index.
fn restart_seed(master: u64, r: usize) -> u64 {
    let mut z = master ^ (r as u64).wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Projects a parameter vector onto the search domain.
fn project(x: &mut [f64], quantum_only: bool) {
    for &k in &SUPER_PARAMS {
        x[k] = if quantum_only { 0.0 } else { x[k].clamp(-0.5, 0.5) };
    }
}

/// Penalized objective to be maximized. Evaluation failures count as -∞.
fn penalized(x: &[f64], weight: f64) -> (f64, Option<Evaluation>) {
    match evaluate(&Strategy::from_slice(x)) {
        Ok(e) => (e.p_win - weight * e.violation * e.violation, Some(e)),
        Err(_) => (f64::NEG_INFINITY, None),
    }
}

/// Largest `t ∈ [0, 1]` (by bisection) such that scaling the super
/// displacements by `t` is feasible. `t = 0` is an ordinary quantum strategy.
fn restore_feasibility(strat: &Strategy, tol: f64) -> Result<(Strategy, Evaluation)> {
    let full = evaluate(strat)?;
    if full.violation <= tol {
        return Ok((*strat, full));
    }
    let mut lo = (strat.scaled_super(0.0), evaluate(&strat.scaled_super(0.0))?);
    if lo.1.violation > tol {
        return Err(Error::Infeasible {
            violation: lo.1.violation,
            tolerance: tol,
        });
    }
    let (mut a, mut b) = (0.0, 1.0);
    for _ in 0..60 {
        let t = 0.5 * (a + b);
        let cand = strat.scaled_super(t);
        let e = evaluate(&cand)?;
        if e.violation <= tol {
            a = t;
            lo = (cand, e);
        } else {
            b = t;
        }
    }
    Ok(lo)
}

/// Adaptive Nelder–Mead maximizer. Returns the best vertex, its value and the
/// number of iterations used.
fn nelder_mead(
    f: &dyn Fn(&[f64]) -> f64,
    x0: &[f64],
    steps: &[f64],
    max_iters: usize,
    ftol: f64,
) -> (Vec<f64>, f64, usize) {
    let n = x0.len();
    let nf = n as f64;
    let (alpha, beta, gamma, delta) = (1.0, 1.0 + 2.0 / nf, 0.75 - 0.5 / nf, 1.0 - 1.0 / nf);
    // Work with minimization of -f.
    let g = |x: &[f64]| -f(x);
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), g(x0)));
    for k in 0..n {
        let mut v = x0.to_vec();
        v[k] += steps[k];
        let fv = g(&v);
        simplex.push((v, fv));
    }
    let order = |s: &mut Vec<(Vec<f64>, f64)>| {
        s.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    };
    let mut iters = 0;
    while iters < max_iters {
        order(&mut simplex);
        let best = simplex[0].1;
        let worst = simplex[n].1;
        if (worst - best).abs() <= ftol * (1.0 + best.abs()) {
            break;
        }
        iters += 1;
        let mut centroid = vec![0.0; n];
        for (v, _) in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / nf;
            }
        }
        let towards = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[n].0)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };
        let xr = towards(alpha);
        let fr = g(&xr);
        if fr < simplex[0].1 {
            let xe = towards(alpha * beta);
            let fe = g(&xe);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
        } else {
            let (xc, fc) = if fr < simplex[n].1 {
                let xc = towards(alpha * gamma);
                let fc = g(&xc);
                (xc, fc)
            } else {
                let xc = towards(-gamma);
                let fc = g(&xc);
                (xc, fc)
            };
            if fc < fr.min(simplex[n].1) {
                simplex[n] = (xc, fc);
            } else {
                let x0 = simplex[0].0.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    let v: Vec<f64> = x0
                        .iter()
                        .zip(&vertex.0)
                        .map(|(b, x)| b + delta * (x - b))
                        .collect();
                    let fv = g(&v);
                    *vertex = (v, fv);
                }
            }
        }
    }
    order(&mut simplex);
    let (x, v) = simplex.swap_remove(0);
    (x, -v, iters)
}

fn random_start(rng: &mut ChaCha8Rng, quantum_only: bool) -> Vec<f64> {
    let mut x = vec![0.0; DIM];
    for (k, v) in x.iter_mut().enumerate() {
        *v = if k < 6 {
            rng.gen_range(-0.5..=0.5)
        } else {
            rng.gen_range(-PI..PI)
        };
    }
    project(&mut x, quantum_only);
    x
}

fn run_restart(config: &OptimizeConfig, r: usize) -> Result<RestartOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(restart_seed(config.seed, r));
    let start = random_start(&mut rng, config.quantum_only);
    let (mut strat, mut eval) = restore_feasibility(&Strategy::from_slice(&start), config.tolerance)?;
    if config.max_iters == 0 {
        return Ok(RestartOutcome {
            strategy: strat,
            evaluation: eval,
            iterations: 0,
        });
    }

    let quantum_only = config.quantum_only;
    let mut steps = vec![0.6; DIM];
    for &k in &SUPER_PARAMS {
        steps[k] = if quantum_only { 0.0 } else { 0.15 };
    }

    // Penalty continuation: most of the budget at the configured weight, then
    // two short stages with stiffer weights to push the iterate onto the
    // feasible set before the final restoration.
    let stages = [
        (config.penalty_weight, 0.6),
        (config.penalty_weight * 1e2, 0.2),
        (config.penalty_weight * 1e4, 0.2),
    ];
    let mut x = strat.to_vec().to_vec();
    let mut used = 0;
    for (k, &(weight, share)) in stages.iter().enumerate() {
        let budget = if k + 1 == stages.len() {
            config.max_iters - used
        } else {
            ((config.max_iters as f64) * share).round() as usize
        };
        let budget = budget.min(config.max_iters - used);
        if budget == 0 {
            continue;
        }
        let objective = |v: &[f64]| {
            let mut y = v.to_vec();
            project(&mut y, quantum_only);
            penalized(&y, weight).0
        };
        let scale = if k == 0 { 1.0 } else { 0.1 };
        let stage_steps: Vec<f64> = steps.iter().map(|s| s * scale).collect();
        let (best, _, it) = nelder_mead(&objective, &x, &stage_steps, budget, 1e-15);
        used += it;
        x = best;
        project(&mut x, quantum_only);
    }

    let (cand, cand_eval) = restore_feasibility(&Strategy::from_slice(&x), config.tolerance)?;
    if cand_eval.p_win > eval.p_win {
        strat = cand;
        eval = cand_eval;
    }
    Ok(RestartOutcome {
        strategy: strat,
        evaluation: eval,
        iterations: used,
    })
}

/// Seeded multi-start maximization of the winning probability subject to all
/// 36 probabilities lying in `[0, 1]` and `|p|, |r|, |s| ≤ 1/2`.
pub fn optimize(config: &OptimizeConfig) -> Result<OptimizationResult> {
    config.validate()?;
    let outcomes: Vec<Result<RestartOutcome>> = if config.parallel {
        (0..config.restarts)
            .into_par_iter()
            .map(|r| run_restart(config, r))
            .collect()
    } else {
        (0..config.restarts).map(|r| run_restart(config, r)).collect()
    };

    let mut best: Option<(usize, RestartOutcome)> = None;
    let mut iterations = 0;
    let mut worst_violation: f64 = 0.0;
    for (r, outcome) in outcomes.into_iter().enumerate() {
        let outcome = match outcome {
            Ok(o) => o,
            Err(Error::Infeasible { violation, .. }) => {
                worst_violation = worst_violation.max(violation);
                continue;
            }
            Err(e) => return Err(e),
        };
        iterations += outcome.iterations;
        if outcome.evaluation.violation > config.tolerance {
            worst_violation = worst_violation.max(outcome.evaluation.violation);
            continue;
        }
        let better = match &best {
            None => true,
            Some((_, b)) => outcome.evaluation.p_win > b.evaluation.p_win,
        };
        if better {
            best = Some((r, outcome));
        }
    }
    let (best_restart, outcome) = best.ok_or(Error::Infeasible {
        violation: worst_violation,
        tolerance: config.tolerance,
    })?;
    Ok(OptimizationResult {
        strategy: outcome.strategy,
        evaluation: outcome.evaluation,
        seed: config.seed,
        restarts: config.restarts,
        best_restart,
        iterations,
    })
}
