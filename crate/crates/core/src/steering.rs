//! Steering robustness, the classical heat benchmark over unsteerable
//! assemblages with fixed marginals, and canonical MUB witnesses.
//!
//! Robustness is computed from both sides of one dual pair:
//!
//! ```text
//!   max  Σ_{a,x} Tr(F_{a|x} σ_{a|x}) − 1   s.t. Σ_x F_{λ(x)|x} ⪯ I  ∀λ,  F ⪰ 0
//!   min  Σ_λ Tr σ_λ − 1                    s.t. Σ_λ D(a|x,λ) σ_λ ⪰ σ_{a|x},  σ_λ ⪰ 0
//! ```
//!
//! Either solve returns a witness family and an LHS model; their objective
//! values bracket `R` and their difference is the reported gap.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::assemblage::{
    enumerate_strategies_with_cap, Assemblage, DeterministicStrategySet, OperatorFamily,
    DEFAULT_STRATEGY_CAP,
};
use crate::conic::{check_certificates, solve_with, SdpProblem, SdpSolution, SdpStatus, Sense, SolveOptions};
use crate::cooling::{gibbs_state, CoolingTask};
use crate::error::{Error, Result};
use crate::linop::HermitianOperator;
use crate::mub::MubFamily;

/// `is_steerable` threshold on `R`.
pub const STEERABLE_THRESHOLD: f64 = 1e-6;
/// `|R|` below this is reported as exactly zero.
pub const ZERO_CLIP: f64 = 1e-7;
/// Slack on `‖Σ_x F_{λ(x)|x}‖ ≤ 1` in witness checks.
pub const FEASIBILITY_TOL: f64 = 1e-9;
/// Relative tolerance handed to the certificate checker and bound on the gap.
pub const CERTIFICATE_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug)]
pub struct SteeringOptions {
    /// Interior-point tolerance.
    pub tol: f64,
    pub strategy_cap: u64,
}

impl Default for SteeringOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            strategy_cap: DEFAULT_STRATEGY_CAP,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SteeringResult {
    /// `R`, clipped to 0 when `|R| ≤ 1e-7`.
    pub robustness: f64,
    /// Feasible dual point `F*_{a|x}`.
    pub witnesses: OperatorFamily,
    /// `σ_λ` indexed by strategy number.
    pub lhs_model: Vec<HermitianOperator>,
    pub strategies: DeterministicStrategySet,
    /// `1 + R` certified by the witnesses (a lower bound).
    pub witness_value: f64,
    /// `Σ_λ Tr σ_λ` of the model (an upper bound up to solver residuals).
    pub model_value: f64,
    /// `|model_value − witness_value|`.
    pub gap: f64,
    pub certified: bool,
    pub iterations: usize,
}

impl SteeringResult {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "schema_version": 1,
            "R": self.robustness,
            "gap": self.gap,
            "certified": self.certified,
            "witness_value": self.witness_value,
            "model_value": self.model_value,
            "iterations": self.iterations,
            "witnesses": self.witnesses.to_json(),
        })
    }
}

fn clip(r: f64) -> f64 {
    if r.abs() <= ZERO_CLIP {
        0.0
    } else {
        r
    }
}

fn require_optimal(sol: &SdpSolution) -> Result<()> {
    if sol.status != SdpStatus::Optimal {
        return Err(Error::SolverFailure(format!(
            "status {:?} after {} iterations (primal residual {:.2e}, dual residual {:.2e}, gap {:.2e})",
            sol.status, sol.iterations, sol.primal_residual, sol.dual_residual, sol.duality_gap
        )));
    }
    Ok(())
}

fn solve_options(opts: &SteeringOptions) -> SolveOptions {
    SolveOptions {
        tol: opts.tol,
        ..SolveOptions::default()
    }
}

/// Strategy numbers grouped by `(x, λ(x))`, index `x * o + a`.
fn strategy_buckets(s: &DeterministicStrategySet) -> Vec<Vec<usize>> {
    let (n, o) = (s.settings(), s.outcomes());
    let mut buckets = vec![Vec::new(); n * o];
    let mut lam = vec![0; n];
    for k in 0..s.len() {
        s.decode_into(k, &mut lam);
        for (x, &a) in lam.iter().enumerate() {
            buckets[x * o + a].push(k);
        }
    }
    buckets
}

/// Largest eigenvalue of `Σ_x F_{λ(x)|x}` for every strategy, in order.
fn strategy_maxima(f: &OperatorFamily, s: &DeterministicStrategySet) -> Vec<f64> {
    (0..s.len())
        .into_par_iter()
        .map(|k| {
            f.strategy_sum(&s.strategy(k))
                .max_eigenvalue()
                .unwrap_or(f64::NAN)
        })
        .collect()
}

/// Clips every witness to the PSD cone and rescales so that every
/// strategy constraint holds exactly.
fn polish_witness(raw: &OperatorFamily, s: &DeterministicStrategySet) -> Result<OperatorFamily> {
    let grid = (0..raw.settings())
        .map(|x| (0..raw.outcomes()).map(|a| raw.get(a, x).psd_part()).collect())
        .collect::<Result<Vec<Vec<_>>>>()?;
    let clipped = OperatorFamily::new(raw.dim(), grid)?;
    let worst = strategy_maxima(&clipped, s).into_iter().fold(0.0, f64::max);
    if !worst.is_finite() {
        return Err(Error::EigenFailure);
    }
    Ok(if worst > 1.0 { clipped.scale(1.0 / worst) } else { clipped })
}

fn family_from_blocks(d: usize, n: usize, o: usize, ops: &[HermitianOperator]) -> Result<OperatorFamily> {
    OperatorFamily::from_fn(d, n, o, |a, x| ops[x * o + a].clone())
}

/// Robustness from the witness side.
pub fn robustness_dual(a: &Assemblage) -> Result<SteeringResult> {
    robustness_dual_with(a, &SteeringOptions::default())
}

pub fn robustness_dual_with(a: &Assemblage, opts: &SteeringOptions) -> Result<SteeringResult> {
    let (d, n, o) = (a.dim(), a.settings(), a.outcomes());
    let s = enumerate_strategies_with_cap(n, o, opts.strategy_cap)?;

    let mut p = SdpProblem::new(Sense::Maximize);
    for x in 0..n {
        for o_ in 0..o {
            let b = p.add_block(format!("F[{o_}|{x}]"), d);
            p.set_objective(b, a.member(o_, x).clone())?;
        }
    }
    let id = HermitianOperator::identity(d);
    let mut lam = vec![0; n];
    for k in 0..s.len() {
        s.decode_into(k, &mut lam);
        let terms = lam.iter().enumerate().map(|(x, &ax)| (x * o + ax, 1.0)).collect();
        p.add_operator_le(format!("lambda {k}"), terms, id.clone())?;
    }

    let sol = solve_with(&p, &solve_options(opts))?;
    require_optimal(&sol)?;
    let report = check_certificates(&p, &sol, CERTIFICATE_TOL);

    let raw = family_from_blocks(d, n, o, &sol.primal)?;
    let witnesses = polish_witness(&raw, &s)?;
    let witness_value = witnesses.pair(a)?;
    let lhs_model: Vec<HermitianOperator> = sol
        .inequality_multipliers
        .iter()
        .map(HermitianOperator::psd_part)
        .collect::<Result<_>>()?;
    let model_value: f64 = lhs_model.iter().map(HermitianOperator::trace).sum();
    let gap = (model_value - witness_value).abs();

    Ok(SteeringResult {
        robustness: clip(witness_value - 1.0),
        witnesses,
        lhs_model,
        strategies: s,
        witness_value,
        model_value,
        gap,
        certified: report.passed && gap <= CERTIFICATE_TOL,
        iterations: sol.iterations,
    })
}

/// Robustness from the LHS-model side.
pub fn robustness_primal(a: &Assemblage) -> Result<SteeringResult> {
    robustness_primal_with(a, &SteeringOptions::default())
}

pub fn robustness_primal_with(a: &Assemblage, opts: &SteeringOptions) -> Result<SteeringResult> {
    let (d, n, o) = (a.dim(), a.settings(), a.outcomes());
    let s = enumerate_strategies_with_cap(n, o, opts.strategy_cap)?;

    let mut p = SdpProblem::new(Sense::Minimize);
    let id = HermitianOperator::identity(d);
    for k in 0..s.len() {
        let b = p.add_block(format!("sigma[{k}]"), d);
        p.set_objective(b, id.clone())?;
    }
    for (i, bucket) in strategy_buckets(&s).into_iter().enumerate() {
        let (x, o_) = (i / o, i % o);
        let terms = bucket.into_iter().map(|k| (k, -1.0)).collect();
        p.add_operator_le(format!("cover {o_}|{x}"), terms, a.member(o_, x).scale(-1.0))?;
    }

    let sol = solve_with(&p, &solve_options(opts))?;
    require_optimal(&sol)?;
    let report = check_certificates(&p, &sol, CERTIFICATE_TOL);

    let lhs_model: Vec<HermitianOperator> = sol
        .primal
        .iter()
        .map(HermitianOperator::psd_part)
        .collect::<Result<_>>()?;
    let model_value: f64 = lhs_model.iter().map(HermitianOperator::trace).sum();
    let raw = family_from_blocks(d, n, o, &sol.inequality_multipliers)?;
    let witnesses = polish_witness(&raw, &s)?;
    let witness_value = witnesses.pair(a)?;
    let gap = (model_value - witness_value).abs();

    Ok(SteeringResult {
        robustness: clip(model_value - 1.0),
        witnesses,
        lhs_model,
        strategies: s,
        witness_value,
        model_value,
        gap,
        certified: report.passed && gap <= CERTIFICATE_TOL,
        iterations: sol.iterations,
    })
}

/// `robustness_dual(a).R > 1e-6`.
pub fn is_steerable(a: &Assemblage) -> Result<bool> {
    Ok(robustness_dual(a)?.robustness > STEERABLE_THRESHOLD)
}

/// Maximum of the averaged heat over unsteerable assemblages with the
/// marginals of the input.
#[derive(Clone, Debug)]
pub struct ClassicalHeat {
    /// `max_{σ ∈ L_ρ} Q_c(σ, H)`, as a rigorous upper bound built from the
    /// optimal trace multipliers. Exceeds `attained` by at most the solver gap.
    pub value: f64,
    /// `Q_c(σ*, H)` at the returned maximiser (a lower bound).
    pub attained: f64,
    /// `Σ_{a,x} Tr(H_{a|x} σ*_{a|x})` at the maximiser.
    pub energy: f64,
    /// Upper bound on `max_{σ ∈ L_ρ} Σ_{a,x} Tr(H_{a|x} σ_{a|x})`.
    pub energy_upper: f64,
    /// `Σ_{a,x} p(a|x) Tr(H_{a|x} γ̂_{a|x})`.
    pub gibbs_energy: f64,
    pub argmax: Assemblage,
    /// `σ*_λ` indexed by strategy number.
    pub hidden_states: Vec<HermitianOperator>,
    pub certified: bool,
}

pub fn classical_heat_max(a: &Assemblage, task: &CoolingTask) -> Result<ClassicalHeat> {
    classical_heat_max_with(a, task, &SteeringOptions::default())
}

pub fn classical_heat_max_with(
    a: &Assemblage,
    task: &CoolingTask,
    opts: &SteeringOptions,
) -> Result<ClassicalHeat> {
    let h = task.hamiltonians();
    h.check_shape(a)?;
    let (d, n, o) = (a.dim(), a.settings(), a.outcomes());
    let s = enumerate_strategies_with_cap(n, o, opts.strategy_cap)?;

    let mut p = SdpProblem::new(Sense::Maximize);
    let mut lam = vec![0; n];
    for k in 0..s.len() {
        s.decode_into(k, &mut lam);
        let b = p.add_block(format!("sigma[{k}]"), d);
        p.set_objective(b, h.strategy_sum(&lam))?;
    }
    // Traces are pinned to p(a|x). Per setting the rows sum to the same
    // total, so only setting 0 keeps its last outcome.
    let id = HermitianOperator::identity(d);
    let mut row_of = vec![None; n * o];
    for (i, bucket) in strategy_buckets(&s).into_iter().enumerate() {
        let (x, o_) = (i / o, i % o);
        if x > 0 && o_ + 1 == o {
            continue;
        }
        let terms = bucket.into_iter().map(|k| (k, id.clone())).collect();
        row_of[i] = Some(p.add_equality(format!("trace {o_}|{x}"), terms, a.probability(o_, x))?);
    }

    let sol = solve_with(&p, &solve_options(opts))?;
    require_optimal(&sol)?;
    let report = check_certificates(&p, &sol, CERTIFICATE_TOL);

    let mut hidden: Vec<HermitianOperator> = sol
        .primal
        .iter()
        .map(HermitianOperator::psd_part)
        .collect::<Result<_>>()?;
    let total: f64 = hidden.iter().map(HermitianOperator::trace).sum();
    if total <= 0.0 {
        return Err(Error::SolverFailure("empty hidden-state model".into()));
    }
    for sigma in &mut hidden {
        *sigma = sigma.scale(1.0 / total);
    }
    let indexed: Vec<(usize, HermitianOperator)> = hidden.iter().cloned().enumerate().collect();
    let argmax = Assemblage::from_lhs_model(d, &s, &indexed)?;

    // For any multipliers ν and any σ ∈ L_ρ (total trace t):
    //   Σ_λ ⟨G_λ, σ_λ⟩ = Σ_i p_i ν_i + Σ_λ ⟨G_λ − ν(λ) I, σ_λ⟩
    //                  ≤ Σ_i p_i ν_i + t · max(0, max_λ λmax(G_λ) − ν(λ)),
    // where G_λ = Σ_x H_{λ(x)|x} and ν(λ) sums the rows λ contributes to.
    let nu = &sol.equality_multipliers;
    let base: f64 = p.equalities().iter().zip(nu).map(|(e, v)| e.rhs * v).sum();
    let excess = (0..s.len())
        .into_par_iter()
        .map(|k| {
            let lam = s.strategy(k);
            let shift: f64 = lam
                .iter()
                .enumerate()
                .filter_map(|(x, &ax)| row_of[x * o + ax].map(|i| nu[i]))
                .sum();
            h.strategy_sum(&lam).max_eigenvalue().map(|top| top - shift).unwrap_or(f64::NAN)
        })
        .reduce(|| 0.0, |u, v| if u.is_nan() || v.is_nan() { f64::NAN } else { u.max(v) });
    if excess.is_nan() {
        return Err(Error::EigenFailure);
    }
    let t: f64 = (0..o).map(|o_| a.probability(o_, 0)).sum();

    let energy = h.pair(&argmax)?;
    let energy_upper = (base + t * excess).max(energy);
    let gibbs_energy = gibbs_energy(a, task)?;
    Ok(ClassicalHeat {
        value: (energy_upper - gibbs_energy) / n as f64,
        attained: (energy - gibbs_energy) / n as f64,
        energy,
        energy_upper,
        gibbs_energy,
        argmax,
        hidden_states: hidden,
        certified: report.passed,
    })
}

/// `Σ_{a,x} p(a|x) Tr(H_{a|x} γ̂_{a|x})`, which depends on the assemblage
/// only through its marginals.
pub(crate) fn gibbs_energy(a: &Assemblage, task: &CoolingTask) -> Result<f64> {
    let mut acc = 0.0;
    for (o_, x, h) in task.hamiltonians().iter() {
        let gamma = gibbs_state(h, task.beta())?;
        acc += a.probability(o_, x) * h.inner(gamma.op());
    }
    Ok(acc)
}

/// `F_{a|x} = |φ^a_x⟩⟨φ^a_x| / (1 + √d)` over the whole family.
pub fn canonical_mub_witness(f: &MubFamily) -> OperatorFamily {
    let w = 1.0 / (1.0 + (f.dim as f64).sqrt());
    let grid = f
        .bases
        .iter()
        .map(|basis| basis.iter().map(|k| k.projector().scale(w)).collect())
        .collect();
    OperatorFamily::new(f.dim, grid).expect("MUB family is a square grid")
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct FeasibilityReport {
    /// `max_λ ‖Σ_x F_{λ(x)|x}‖_∞` over the strategies checked.
    pub max_norm: f64,
    pub worst_strategy: Vec<usize>,
    /// Number of strategies exceeding `1 + 1e-9`.
    pub violation_count: usize,
    pub checked: usize,
    /// False when the strategies were sampled rather than enumerated.
    pub exhaustive: bool,
    pub passed: bool,
}

fn summarise(norms: impl Iterator<Item = (Vec<usize>, f64)>, exhaustive: bool) -> FeasibilityReport {
    let mut max_norm = f64::NEG_INFINITY;
    let mut worst = Vec::new();
    let mut violations = 0;
    let mut checked = 0;
    let mut broken = false;
    for (lam, v) in norms {
        checked += 1;
        if !v.is_finite() {
            broken = true;
            continue;
        }
        if v > 1.0 + FEASIBILITY_TOL {
            violations += 1;
        }
        if v > max_norm {
            max_norm = v;
            worst = lam;
        }
    }
    FeasibilityReport {
        max_norm,
        worst_strategy: worst,
        violation_count: violations,
        checked,
        exhaustive,
        passed: !broken && violations == 0 && checked > 0,
    }
}

fn strategy_norm(f: &OperatorFamily, lam: &[usize]) -> f64 {
    crate::linop::hermitian_operator_norm(&f.strategy_sum(lam)).unwrap_or(f64::NAN)
}

fn check_family_shape(f: &OperatorFamily, n: usize, o: usize) -> Result<()> {
    if (f.settings(), f.outcomes()) != (n, o) {
        return Err(Error::DimensionMismatch(format!(
            "witness family has n={} o={}, strategies have n={n} o={o}",
            f.settings(),
            f.outcomes()
        )));
    }
    Ok(())
}

/// Exhaustive check of `‖Σ_x F_{λ(x)|x}‖_∞ ≤ 1` over every strategy.
pub fn verify_witness_feasibility(f: &OperatorFamily, s: &DeterministicStrategySet) -> Result<FeasibilityReport> {
    check_family_shape(f, s.settings(), s.outcomes())?;
    let norms: Vec<f64> = (0..s.len())
        .into_par_iter()
        .map(|k| strategy_norm(f, &s.strategy(k)))
        .collect();
    Ok(summarise(
        norms.into_iter().enumerate().map(|(k, v)| (s.strategy(k), v)),
        true,
    ))
}

/// Non-exhaustive variant for strategy sets too large to enumerate:
/// `samples` strategies drawn uniformly from a seeded stream.
pub fn sample_witness_feasibility(f: &OperatorFamily, samples: usize, seed: u64) -> FeasibilityReport {
    let (n, o) = (f.settings(), f.outcomes());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<Vec<usize>> = (0..samples)
        .map(|_| (0..n).map(|_| rng.gen_range(0..o)).collect())
        .collect();
    summarise(
        draws.into_iter().map(|lam| {
            let v = strategy_norm(f, &lam);
            (lam, v)
        }),
        false,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assemblage::{enumerate_strategies, isotropic_assemblage, max_entangled_assemblage};
    use crate::mub::mub_family;

    #[test]
    fn canonical_witness_qubit_spectrum() {
        let f = canonical_mub_witness(&mub_family(2).unwrap());
        for (_, _, h) in f.iter() {
            let ev = h.eigenvalues().unwrap();
            assert!(ev[0].abs() < 1e-15);
            assert!((ev[1] - 0.414_213_562_373_095).abs() < 1e-12);
        }
    }

    #[test]
    fn canonical_witness_value_on_max_entangled() {
        for d in [2usize, 3, 5] {
            let fam = mub_family(d).unwrap();
            let w = canonical_mub_witness(&fam);
            let a = max_entangled_assemblage(&fam).unwrap();
            let sd = (d as f64).sqrt();
            let want = sd * (sd - 1.0) / (sd + 1.0);
            assert!((w.pair(&a).unwrap() - 1.0 - want).abs() < 1e-12, "d={d}");
        }
    }

    #[test]
    fn canonical_witness_feasible_and_scaled_one_not() {
        let fam = mub_family(2).unwrap();
        let s = enumerate_strategies(3, 2).unwrap();
        let w = canonical_mub_witness(&fam);
        let r = verify_witness_feasibility(&w, &s).unwrap();
        assert!(r.passed && r.exhaustive && r.checked == 8);
        assert!(r.max_norm <= 1.0 + 1e-12);
        let bad = verify_witness_feasibility(&w.scale(2.0), &s).unwrap();
        assert!(!bad.passed);
        assert!(bad.max_norm >= 1.2426);
        let sampled = sample_witness_feasibility(&w, 50, 7);
        assert!(sampled.passed && !sampled.exhaustive);
        assert_eq!(sampled, sample_witness_feasibility(&w, 50, 7));
    }

    #[test]
    fn single_setting_is_unsteerable() {
        let fam = mub_family(2).unwrap();
        let full = max_entangled_assemblage(&fam).unwrap();
        let one = Assemblage::new(2, vec![vec![full.member(0, 0).clone(), full.member(1, 0).clone()]]).unwrap();
        let r = robustness_dual(&one).unwrap();
        assert_eq!(r.robustness, 0.0);
        assert!(r.certified);
    }

    #[test]
    fn qubit_isotropic_values() {
        let fam = mub_family(2).unwrap();
        let half = robustness_dual(&isotropic_assemblage(2, 0.5, &fam).unwrap()).unwrap();
        assert!(half.robustness.abs() <= 1e-6, "{}", half.robustness);
        assert!(half.certified);
        let full = isotropic_assemblage(2, 1.0, &fam).unwrap();
        let dual = robustness_dual(&full).unwrap();
        let primal = robustness_primal(&full).unwrap();
        assert!(dual.certified && primal.certified);
        // Reference value 2 − √3 from an independent general-purpose SDP solve.
        assert!((dual.robustness - (2.0 - 3f64.sqrt())).abs() <= 1e-6, "{}", dual.robustness);
        assert!((dual.robustness - primal.robustness).abs() <= 1e-6);
        assert!(dual.robustness >= 0.24264 - 1e-6);
        let feas = verify_witness_feasibility(&dual.witnesses, &dual.strategies).unwrap();
        assert!(feas.passed);
    }
}
