//! Small dense semidefinite programs over complex Hermitian PSD blocks.
//!
//! A problem is stated over PSD matrix variables `X_b` ("blocks"):
//!
//! ```text
//!   max / min   Σ_b ⟨C_b, X_b⟩
//!   s.t.        Σ_b ⟨A_ib, X_b⟩ = c_i            (scalar equalities)
//!               Σ_b κ_jb · X_b ⪯ B_j             (operator inequalities)
//!               X_b ⪰ 0
//! ```
//!
//! Writing the problem in max form with `C' = ±C`, its Lagrange dual is
//!
//! ```text
//!   min  Σ_j ⟨B_j, M_j⟩ + Σ_i c_i ν_i
//!   s.t. Z_b = Σ_j κ_jb M_j + Σ_i ν_i A_ib − C'_b ⪰ 0,   M_j ⪰ 0.
//! ```
//!
//! [`solve`] returns both sides (`X_b`, `M_j`, `ν_i`) so that
//! [`check_certificates`] can verify optimality from the problem data alone.
//!
//! Internally the problem is compiled to a real standard-form pair (complex
//! blocks realified, inner products halved) under one of two embeddings:
//! either the blocks become the standard primal variable and every operator
//! inequality gets a PSD slack block, or (when there are no scalar
//! equalities) the block coordinates become the free dual vector and every
//! constraint becomes an LMI block. The embedding with the smaller Schur
//! complement is used unless one is forced.

pub mod coords;
mod standard;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::linop::{tol, HermitianOperator};
use standard::{IpmSettings, IpmStatus, StdBlock, StdProblem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Minimize,
    Maximize,
}

impl Sense {
    fn sign(self) -> f64 {
        match self {
            Sense::Maximize => 1.0,
            Sense::Minimize => -1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlockSpec {
    pub label: String,
    pub dim: usize,
}

/// `Σ_b ⟨A_b, X_b⟩ = rhs`.
#[derive(Clone, Debug)]
pub struct ScalarEquality {
    pub label: String,
    pub terms: Vec<(usize, HermitianOperator)>,
    pub rhs: f64,
}

/// `Σ_b coef_b · X_b ⪯ bound`. Every block in `terms` must have the
/// dimension of `bound`.
#[derive(Clone, Debug)]
pub struct OperatorInequality {
    pub label: String,
    pub terms: Vec<(usize, f64)>,
    pub bound: HermitianOperator,
}

#[derive(Clone, Debug)]
pub struct SdpProblem {
    sense: Sense,
    blocks: Vec<BlockSpec>,
    objective: Vec<Option<HermitianOperator>>,
    equalities: Vec<ScalarEquality>,
    inequalities: Vec<OperatorInequality>,
}

impl SdpProblem {
    pub fn new(sense: Sense) -> Self {
        Self {
            sense,
            blocks: Vec::new(),
            objective: Vec::new(),
            equalities: Vec::new(),
            inequalities: Vec::new(),
        }
    }

    pub fn add_block(&mut self, label: impl Into<String>, dim: usize) -> usize {
        self.blocks.push(BlockSpec {
            label: label.into(),
            dim,
        });
        self.objective.push(None);
        self.blocks.len() - 1
    }

    fn check_block(&self, b: usize, dim: usize, what: &str) -> Result<()> {
        let spec = self
            .blocks
            .get(b)
            .ok_or_else(|| Error::MalformedProblem(format!("{what}: unknown block {b}")))?;
        if spec.dim != dim {
            return Err(Error::MalformedProblem(format!(
                "{what}: block {} has dimension {}, data has {dim}",
                spec.label, spec.dim
            )));
        }
        Ok(())
    }

    pub fn set_objective(&mut self, block: usize, c: HermitianOperator) -> Result<()> {
        self.check_block(block, c.dim(), "objective")?;
        self.objective[block] = Some(c);
        Ok(())
    }

    pub fn add_equality(
        &mut self,
        label: impl Into<String>,
        terms: Vec<(usize, HermitianOperator)>,
        rhs: f64,
    ) -> Result<usize> {
        let label = label.into();
        for (b, a) in &terms {
            self.check_block(*b, a.dim(), &label)?;
        }
        if !rhs.is_finite() {
            return Err(Error::MalformedProblem(format!("{label}: non-finite right-hand side")));
        }
        self.equalities.push(ScalarEquality { label, terms, rhs });
        Ok(self.equalities.len() - 1)
    }

    pub fn add_operator_le(
        &mut self,
        label: impl Into<String>,
        terms: Vec<(usize, f64)>,
        bound: HermitianOperator,
    ) -> Result<usize> {
        let label = label.into();
        for (b, coef) in &terms {
            self.check_block(*b, bound.dim(), &label)?;
            if !coef.is_finite() {
                return Err(Error::MalformedProblem(format!("{label}: non-finite coefficient")));
            }
        }
        self.inequalities.push(OperatorInequality { label, terms, bound });
        Ok(self.inequalities.len() - 1)
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn blocks(&self) -> &[BlockSpec] {
        &self.blocks
    }

    pub fn equalities(&self) -> &[ScalarEquality] {
        &self.equalities
    }

    pub fn inequalities(&self) -> &[OperatorInequality] {
        &self.inequalities
    }

    pub fn objective(&self, block: usize) -> Option<&HermitianOperator> {
        self.objective[block].as_ref()
    }

    /// Same problem with every objective block multiplied by `k`.
    pub fn with_scaled_objective(&self, k: f64) -> Self {
        let mut out = self.clone();
        for c in out.objective.iter_mut().flatten() {
            *c = c.scale(k);
        }
        out
    }

    fn primal_rows(&self) -> usize {
        self.equalities.len() + self.inequalities.iter().map(|q| q.bound.dim().pow(2)).sum::<usize>()
    }

    fn dual_rows(&self) -> Option<usize> {
        self.equalities
            .is_empty()
            .then(|| self.blocks.iter().map(|b| b.dim * b.dim).sum())
    }

    /// Self-describing dump for offline cross-checking.
    pub fn to_json(&self) -> serde_json::Value {
        let m = |h: &HermitianOperator| serde_json::to_value(h).expect("matrix serialises");
        json!({
            "schema_version": 1,
            "sense": self.sense,
            "blocks": self.blocks,
            "objective": self.objective.iter().enumerate()
                .filter_map(|(b, c)| c.as_ref().map(|c| json!({"block": b, "matrix": m(c)})))
                .collect::<Vec<_>>(),
            "equalities": self.equalities.iter().map(|e| json!({
                "label": e.label,
                "terms": e.terms.iter().map(|(b, a)| json!({"block": b, "matrix": m(a)})).collect::<Vec<_>>(),
                "rhs": e.rhs,
            })).collect::<Vec<_>>(),
            "inequalities": self.inequalities.iter().map(|q| json!({
                "label": q.label,
                "terms": q.terms.iter().map(|(b, c)| json!({"block": b, "coef": c})).collect::<Vec<_>>(),
                "bound": m(&q.bound),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Which side of the standard pair carries the problem's blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Embedding {
    /// Blocks are standard-form primal matrices; operator inequalities get slack blocks.
    Primal,
    /// Block coordinates are the free dual vector; constraints become LMI blocks.
    Dual,
}

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    pub tol: f64,
    pub max_iterations: usize,
    /// Cap on Schur-complement rows.
    pub max_rows: usize,
    pub embedding: Option<Embedding>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: tol::SOLVER,
            max_iterations: 200,
            max_rows: 6000,
            embedding: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SdpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    NumericalTrouble,
}

#[derive(Clone, Debug)]
pub struct SdpSolution {
    pub status: SdpStatus,
    /// `X_b`, one per block.
    pub primal: Vec<HermitianOperator>,
    /// `M_j ⪰ 0`, one per operator inequality.
    pub inequality_multipliers: Vec<HermitianOperator>,
    /// `ν_i`, one per scalar equality.
    pub equality_multipliers: Vec<f64>,
    pub primal_objective: f64,
    pub dual_objective: f64,
    /// Worst relative primal violation (PSD-ness, equalities, inequalities).
    pub primal_residual: f64,
    /// Worst relative dual violation (multiplier and slack PSD-ness).
    pub dual_residual: f64,
    /// `|p − d| / (1 + |p| + |d|)`.
    pub duality_gap: f64,
    pub iterations: usize,
    pub embedding: Embedding,
}

impl SdpSolution {
    pub fn objective(&self) -> f64 {
        self.primal_objective
    }
}

pub fn solve(p: &SdpProblem, tol: f64) -> Result<SdpSolution> {
    solve_with(
        p,
        &SolveOptions {
            tol,
            ..SolveOptions::default()
        },
    )
}

pub fn solve_with(p: &SdpProblem, opts: &SolveOptions) -> Result<SdpSolution> {
    if p.blocks.is_empty() {
        return Err(Error::MalformedProblem("no variable blocks".into()));
    }
    if p.blocks.iter().any(|b| b.dim == 0) {
        return Err(Error::MalformedProblem("zero-dimensional block".into()));
    }
    let embedding = match opts.embedding {
        Some(Embedding::Dual) if !p.equalities.is_empty() => {
            return Err(Error::MalformedProblem(
                "the dual embedding does not support scalar equalities".into(),
            ))
        }
        Some(e) => e,
        None => match p.dual_rows() {
            Some(d) if d < p.primal_rows() => Embedding::Dual,
            _ => Embedding::Primal,
        },
    };
    let rows = match embedding {
        Embedding::Primal => p.primal_rows(),
        Embedding::Dual => p.dual_rows().unwrap_or(0),
    };
    if rows > opts.max_rows {
        return Err(Error::MalformedProblem(format!(
            "{rows} Schur-complement rows exceed the cap of {}",
            opts.max_rows
        )));
    }

    let std = match embedding {
        Embedding::Primal => compile_primal(p),
        Embedding::Dual => compile_dual(p),
    };
    let res = standard::solve(
        &std,
        IpmSettings {
            tol: opts.tol * 0.1,
            max_iterations: opts.max_iterations,
        },
    );

    let u = p.blocks.len();
    let (primal, ineq, eq) = match embedding {
        Embedding::Primal => {
            let primal = res.x[..u].iter().map(coords::unrealify).collect();
            let mut row = p.equalities.len();
            let ineq = p
                .inequalities
                .iter()
                .map(|q| {
                    let n = q.bound.dim();
                    let y: Vec<f64> = res.y.as_slice()[row..row + n * n].iter().map(|v| -v).collect();
                    row += n * n;
                    coords::synthesize(n, &y)
                })
                .collect();
            let eq = res.y.as_slice()[..p.equalities.len()].iter().map(|v| -v).collect();
            (primal, ineq, eq)
        }
        Embedding::Dual => {
            let mut row = 0;
            let primal = p
                .blocks
                .iter()
                .map(|b| {
                    let n = b.dim;
                    let x = coords::synthesize(n, &res.y.as_slice()[row..row + n * n]);
                    row += n * n;
                    x
                })
                .collect();
            let ineq = res.x[u..].iter().map(coords::unrealify).collect();
            (primal, ineq, Vec::new())
        }
    };

    let mut sol = SdpSolution {
        status: SdpStatus::NumericalTrouble,
        primal,
        inequality_multipliers: ineq,
        equality_multipliers: eq,
        primal_objective: 0.0,
        dual_objective: 0.0,
        primal_residual: f64::INFINITY,
        dual_residual: f64::INFINITY,
        duality_gap: f64::INFINITY,
        iterations: res.iterations,
        embedding,
    };
    let report = evaluate(p, &sol)?;
    sol.primal_objective = report.primal_objective;
    sol.dual_objective = report.dual_objective;
    sol.primal_residual = report.primal_residual;
    sol.dual_residual = report.dual_residual;
    sol.duality_gap = report.duality_gap;

    let (std_primal_infeasible, std_dual_infeasible) = match embedding {
        Embedding::Primal => (SdpStatus::Infeasible, SdpStatus::Unbounded),
        Embedding::Dual => (SdpStatus::Unbounded, SdpStatus::Infeasible),
    };
    // The interior-point run aims ten times tighter than requested; a run
    // that stalls short of that still counts if the recovered solution
    // meets the requested tolerance at the problem's own level.
    let meets_tol = sol.primal_residual.max(sol.dual_residual).max(sol.duality_gap) <= opts.tol;
    sol.status = match res.status {
        IpmStatus::PrimalInfeasible => std_primal_infeasible,
        IpmStatus::DualInfeasible => std_dual_infeasible,
        IpmStatus::Optimal | IpmStatus::IterationLimit | IpmStatus::Stalled if meets_tol => SdpStatus::Optimal,
        _ => SdpStatus::NumericalTrouble,
    };
    Ok(sol)
}

fn compile_primal(p: &SdpProblem) -> StdProblem {
    let s = p.sense.sign();
    let neq = p.equalities.len();
    let mut blocks: Vec<StdBlock> = p
        .blocks
        .iter()
        .enumerate()
        .map(|(b, spec)| StdBlock {
            cdim: spec.dim,
            c: match &p.objective[b] {
                Some(c) => coords::realify_half(c.matrix()) * (-s),
                None => nalgebra::DMatrix::zeros(2 * spec.dim, 2 * spec.dim),
            },
            links: vec![Vec::new(); spec.dim * spec.dim],
        })
        .collect();
    let mut rhs = Vec::with_capacity(p.primal_rows());
    for (i, e) in p.equalities.iter().enumerate() {
        rhs.push(e.rhs);
        for (b, a) in &e.terms {
            for (k, v) in coords::coordinates(a.matrix()).into_iter().enumerate() {
                if v != 0.0 {
                    blocks[*b].links[k].push((i, v));
                }
            }
        }
    }
    let mut row = neq;
    for q in &p.inequalities {
        let n = q.bound.dim();
        for (b, coef) in &q.terms {
            for k in 0..n * n {
                blocks[*b].links[k].push((row + k, *coef));
            }
        }
        blocks.push(StdBlock {
            cdim: n,
            c: nalgebra::DMatrix::zeros(2 * n, 2 * n),
            links: (0..n * n).map(|k| vec![(row + k, 1.0)]).collect(),
        });
        rhs.extend(coords::weights(q.bound.matrix()));
        row += n * n;
    }
    StdProblem::new(blocks, DVector::from_vec(rhs))
}

fn compile_dual(p: &SdpProblem) -> StdProblem {
    let s = p.sense.sign();
    let mut offsets = Vec::with_capacity(p.blocks.len());
    let mut rhs = Vec::new();
    let mut blocks = Vec::with_capacity(p.blocks.len() + p.inequalities.len());
    for (b, spec) in p.blocks.iter().enumerate() {
        let n = spec.dim;
        let off = rhs.len();
        offsets.push(off);
        match &p.objective[b] {
            Some(c) => rhs.extend(coords::weights(c.matrix()).into_iter().map(|w| s * w)),
            None => rhs.extend(std::iter::repeat_n(0.0, n * n)),
        }
        blocks.push(StdBlock {
            cdim: n,
            c: nalgebra::DMatrix::zeros(2 * n, 2 * n),
            links: (0..n * n).map(|k| vec![(off + k, -1.0)]).collect(),
        });
    }
    for q in &p.inequalities {
        let n = q.bound.dim();
        let mut links = vec![Vec::with_capacity(q.terms.len()); n * n];
        for (b, coef) in &q.terms {
            for (k, l) in links.iter_mut().enumerate() {
                l.push((offsets[*b] + k, *coef));
            }
        }
        blocks.push(StdBlock {
            cdim: n,
            c: coords::realify_half(q.bound.matrix()),
            links,
        });
    }
    StdProblem::new(blocks, DVector::from_vec(rhs))
}

/// One named check of a [`CertificateReport`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateCheck {
    pub name: String,
    /// Relative violation; `≤ tol` passes.
    pub violation: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateReport {
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub duality_gap: f64,
    /// Only the failing checks, worst first.
    pub failures: Vec<CertificateCheck>,
    pub passed: bool,
}

struct Evaluation {
    primal_objective: f64,
    dual_objective: f64,
    primal_residual: f64,
    dual_residual: f64,
    duality_gap: f64,
    checks: Vec<(String, f64, bool)>,
}

/// Recomputes feasibility and optimality of `s` from the problem data:
/// PSD-ness of every block and multiplier, every constraint residual, the
/// dual slacks `Z_b`, and the objective gap. Passes iff every relative
/// violation is at most `tol`.
pub fn check_certificates(p: &SdpProblem, s: &SdpSolution, tol: f64) -> CertificateReport {
    match evaluate(p, s) {
        Ok(ev) => {
            let mut failures: Vec<CertificateCheck> = ev
                .checks
                .into_iter()
                .filter(|(_, v, _)| *v > tol || v.is_nan())
                .map(|(name, violation, _)| CertificateCheck {
                    name,
                    violation,
                    passed: false,
                })
                .collect();
            failures.sort_by(|a, b| b.violation.total_cmp(&a.violation));
            CertificateReport {
                primal_objective: ev.primal_objective,
                dual_objective: ev.dual_objective,
                primal_residual: ev.primal_residual,
                dual_residual: ev.dual_residual,
                duality_gap: ev.duality_gap,
                passed: failures.is_empty(),
                failures,
            }
        }
        Err(e) => CertificateReport {
            primal_objective: f64::NAN,
            dual_objective: f64::NAN,
            primal_residual: f64::INFINITY,
            dual_residual: f64::INFINITY,
            duality_gap: f64::INFINITY,
            failures: vec![CertificateCheck {
                name: format!("solution shape: {e}"),
                violation: f64::INFINITY,
                passed: false,
            }],
            passed: false,
        },
    }
}

fn evaluate(p: &SdpProblem, s: &SdpSolution) -> Result<Evaluation> {
    if s.primal.len() != p.blocks.len()
        || s.inequality_multipliers.len() != p.inequalities.len()
        || s.equality_multipliers.len() != p.equalities.len()
    {
        return Err(Error::DimensionMismatch("solution does not match the problem".into()));
    }
    for (x, spec) in s.primal.iter().zip(&p.blocks) {
        if x.dim() != spec.dim {
            return Err(Error::DimensionMismatch(format!("block {}", spec.label)));
        }
    }
    let sign = p.sense.sign();
    let mut checks = Vec::new();
    let mut primal_residual: f64 = 0.0;
    let mut dual_residual: f64 = 0.0;

    let primal_objective: f64 = p
        .objective
        .iter()
        .zip(&s.primal)
        .filter_map(|(c, x)| c.as_ref().map(|c| c.inner(x)))
        .sum();

    for (x, spec) in s.primal.iter().zip(&p.blocks) {
        let v = (-x.min_eigenvalue()?).max(0.0);
        primal_residual = primal_residual.max(v);
        checks.push((format!("block {} is PSD", spec.label), v, true));
    }
    for e in &p.equalities {
        let lhs: f64 = e.terms.iter().map(|(b, a)| a.inner(&s.primal[*b])).sum();
        let v = (lhs - e.rhs).abs() / (1.0 + e.rhs.abs());
        primal_residual = primal_residual.max(v);
        checks.push((format!("equality {}", e.label), v, true));
    }
    for q in &p.inequalities {
        let mut lhs = q.bound.scale(-1.0);
        for (b, coef) in &q.terms {
            lhs = lhs.add(&s.primal[*b].scale(*coef));
        }
        let v = lhs.max_eigenvalue()?.max(0.0) / (1.0 + q.bound.matrix().norm());
        primal_residual = primal_residual.max(v);
        checks.push((format!("inequality {}", q.label), v, true));
    }

    // Dual side: Z_b = Σ_j κ_jb M_j + Σ_i ν_i A_ib − C'_b.
    let mut slack: Vec<HermitianOperator> = p
        .blocks
        .iter()
        .zip(&p.objective)
        .map(|(spec, c)| match c {
            Some(c) => c.scale(-sign),
            None => HermitianOperator::zeros(spec.dim),
        })
        .collect();
    let mut dual_value = 0.0;
    for (q, m) in p.inequalities.iter().zip(&s.inequality_multipliers) {
        if m.dim() != q.bound.dim() {
            return Err(Error::DimensionMismatch(format!("multiplier for {}", q.label)));
        }
        let v = (-m.min_eigenvalue()?).max(0.0);
        dual_residual = dual_residual.max(v);
        checks.push((format!("multiplier of inequality {} is PSD", q.label), v, true));
        dual_value += q.bound.inner(m);
        for (b, coef) in &q.terms {
            slack[*b] = slack[*b].add(&m.scale(*coef));
        }
    }
    for (e, nu) in p.equalities.iter().zip(&s.equality_multipliers) {
        dual_value += e.rhs * nu;
        for (b, a) in &e.terms {
            slack[*b] = slack[*b].add(&a.scale(*nu));
        }
    }
    for ((z, spec), c) in slack.iter().zip(&p.blocks).zip(&p.objective) {
        let scale = 1.0 + c.as_ref().map_or(0.0, |c| c.matrix().norm());
        let v = (-z.min_eigenvalue()?).max(0.0) / scale;
        dual_residual = dual_residual.max(v);
        checks.push((format!("dual slack of block {} is PSD", spec.label), v, true));
    }
    let dual_objective = sign * dual_value;
    let duality_gap =
        (primal_objective - dual_objective).abs() / (1.0 + primal_objective.abs() + dual_objective.abs());
    checks.push(("duality gap".to_string(), duality_gap, true));

    Ok(Evaluation {
        primal_objective,
        dual_objective,
        primal_residual,
        dual_residual,
        duality_gap,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linop::c;
    use nalgebra::DMatrix;

    #[test]
    fn local_basis_matches_realified_synthesis_basis() {
        for n in 1..4 {
            let basis = standard::CoordBasis::new(n);
            for k in 0..n * n {
                let mut y = vec![0.0; n * n];
                y[k] = 1.0;
                let pk = coords::synthesize(n, &y);
                let want = coords::realify_half(pk.matrix());
                let mut got = DMatrix::zeros(2 * n, 2 * n);
                for &(r, s, v) in &basis.entries[k] {
                    got[(r, s)] += v;
                }
                assert!((got - want).norm() < 1e-15, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn scalar_lp_as_sdp() {
        // max x, x ≤ 1, x ⪰ 0.
        let mut p = SdpProblem::new(Sense::Maximize);
        let x = p.add_block("x", 1);
        p.set_objective(x, HermitianOperator::identity(1)).unwrap();
        p.add_operator_le("cap", vec![(x, 1.0)], HermitianOperator::identity(1)).unwrap();
        for emb in [Embedding::Primal, Embedding::Dual] {
            let opts = SolveOptions {
                embedding: Some(emb),
                ..SolveOptions::default()
            };
            let s = solve_with(&p, &opts).unwrap();
            assert_eq!(s.status, SdpStatus::Optimal, "{emb:?}");
            assert!((s.objective() - 1.0).abs() < 1e-7);
            assert!(check_certificates(&p, &s, 1e-6).passed);
        }
    }

    #[test]
    fn top_eigenvalue() {
        // max ⟨σ_z, X⟩, Tr X = 1.
        let mut p = SdpProblem::new(Sense::Maximize);
        let x = p.add_block("X", 2);
        p.set_objective(x, HermitianOperator::from_real_diagonal(&[1.0, -1.0])).unwrap();
        p.add_equality("trace", vec![(x, HermitianOperator::identity(2))], 1.0).unwrap();
        let s = solve(&p, 1e-8).unwrap();
        assert_eq!(s.status, SdpStatus::Optimal);
        assert!((s.objective() - 1.0).abs() < 1e-7);
        let want = HermitianOperator::from_real_diagonal(&[1.0, 0.0]);
        assert!(s.primal[0].frobenius_distance(&want) < 1e-6);
        let report = check_certificates(&p, &s, 1e-6);
        assert!(report.passed, "{:?}", report.failures);
    }

    #[test]
    fn complex_objective() {
        // max ⟨σ_y, X⟩, Tr X = 1 → 1 with X = |+i⟩⟨+i|.
        let mut sy = DMatrix::zeros(2, 2);
        sy[(0, 1)] = c(0.0, -1.0);
        sy[(1, 0)] = c(0.0, 1.0);
        let sy = HermitianOperator::new(sy).unwrap();
        let mut p = SdpProblem::new(Sense::Maximize);
        let x = p.add_block("X", 2);
        p.set_objective(x, sy.clone()).unwrap();
        p.add_equality("trace", vec![(x, HermitianOperator::identity(2))], 1.0).unwrap();
        let s = solve(&p, 1e-8).unwrap();
        assert!((s.objective() - 1.0).abs() < 1e-7);
        assert!((s.primal[0].inner(&sy) - 1.0).abs() < 1e-7);
    }

    #[test]
    fn minimization_and_homogeneity() {
        // min ⟨C, X⟩ s.t. X ⪰ I/2 written as −X ⪯ −I/2, plus Tr X = 3.
        let cmat = HermitianOperator::new(
            DMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.5, 0.3), c(0.5, -0.3), c(1.0, 0.0)]),
        )
        .unwrap();
        let mut p = SdpProblem::new(Sense::Minimize);
        let x = p.add_block("X", 2);
        p.set_objective(x, cmat).unwrap();
        p.add_operator_le("floor", vec![(x, -1.0)], HermitianOperator::identity(2).scale(-0.5))
            .unwrap();
        p.add_equality("trace", vec![(x, HermitianOperator::identity(2))], 3.0).unwrap();
        let s = solve(&p, 1e-9).unwrap();
        assert_eq!(s.status, SdpStatus::Optimal);
        assert!(check_certificates(&p, &s, 1e-7).passed);
        for k in [0.5, 3.0, 10.0] {
            let sk = solve(&p.with_scaled_objective(k), 1e-9).unwrap();
            assert!((sk.objective() - k * s.objective()).abs() < 1e-8 * k.max(1.0), "k={k}");
        }
        let again = solve(&p, 1e-9).unwrap();
        assert_eq!(again.objective(), s.objective());
    }

    #[test]
    fn detects_infeasibility_and_unboundedness() {
        // X ⪰ 0 with Tr X = −1.
        let mut p = SdpProblem::new(Sense::Minimize);
        let x = p.add_block("X", 2);
        p.set_objective(x, HermitianOperator::identity(2)).unwrap();
        p.add_equality("trace", vec![(x, HermitianOperator::identity(2))], -1.0).unwrap();
        assert_eq!(solve(&p, 1e-7).unwrap().status, SdpStatus::Infeasible);

        // max Tr X with no constraints.
        let mut p = SdpProblem::new(Sense::Maximize);
        let x = p.add_block("X", 2);
        p.set_objective(x, HermitianOperator::identity(2)).unwrap();
        p.add_operator_le("lower", vec![(x, -1.0)], HermitianOperator::zeros(2)).unwrap();
        for emb in [Embedding::Primal, Embedding::Dual] {
            let opts = SolveOptions {
                embedding: Some(emb),
                ..SolveOptions::default()
            };
            assert_eq!(solve_with(&p, &opts).unwrap().status, SdpStatus::Unbounded, "{emb:?}");
        }
    }

    #[test]
    fn malformed_problems_rejected() {
        let mut p = SdpProblem::new(Sense::Maximize);
        let x = p.add_block("X", 2);
        assert!(p.set_objective(x, HermitianOperator::identity(3)).is_err());
        assert!(p.add_operator_le("bad", vec![(7, 1.0)], HermitianOperator::identity(2)).is_err());
        assert!(solve(&SdpProblem::new(Sense::Minimize), 1e-7).is_err());
        p.add_equality("t", vec![(x, HermitianOperator::identity(2))], 1.0).unwrap();
        let opts = SolveOptions {
            embedding: Some(Embedding::Dual),
            ..SolveOptions::default()
        };
        assert!(solve_with(&p, &opts).is_err());
    }

    #[test]
    fn zeroed_multiplier_fails_certificate() {
        let mut p = SdpProblem::new(Sense::Maximize);
        let x = p.add_block("x", 1);
        p.set_objective(x, HermitianOperator::identity(1)).unwrap();
        p.add_operator_le("cap", vec![(x, 1.0)], HermitianOperator::identity(1)).unwrap();
        let mut s = solve(&p, 1e-8).unwrap();
        assert!(check_certificates(&p, &s, 1e-6).passed);
        s.inequality_multipliers[0] = HermitianOperator::zeros(1);
        let r = check_certificates(&p, &s, 1e-6);
        assert!(!r.passed);
        assert!(r.failures.iter().any(|f| f.name.contains("block x")));
        assert!(r.failures.iter().any(|f| f.name == "duality gap"));
    }

    #[test]
    fn dump_is_self_describing() {
        let mut p = SdpProblem::new(Sense::Maximize);
        let x = p.add_block("x", 1);
        p.set_objective(x, HermitianOperator::identity(1)).unwrap();
        p.add_operator_le("cap", vec![(x, 1.0)], HermitianOperator::identity(1)).unwrap();
        let v = p.to_json();
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["sense"], "maximize");
        assert_eq!(v["inequalities"][0]["label"], "cap");
        assert_eq!(v["blocks"][0]["dim"], 1);
    }
}
