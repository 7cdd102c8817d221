//! Assemblages, measurements and deterministic local-hidden-state strategies.
//!
//! An assemblage `{σ_{a|x}}` is stored unnormalised: `Tr σ_{a|x} = p(a|x)`.
//! Members are indexed by setting `x ∈ 0..n` and outcome `a ∈ 0..o`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linop::{
    c, partial_trace, tensor_hermitian, tol, ComplexMatrix, DensityOperator, HermitianOperator,
    Subsystem, C64,
};
use crate::mub::{conjugate_projectors, MubFamily};

/// Non-signalling tolerance on `‖Σ_a σ_{a|x} − Σ_a σ_{a|0}‖_F`.
pub const NO_SIGNALLING_TOL: f64 = 1e-9;
/// Branches with `p(a|x)` at or below this are treated as probability zero.
pub const ZERO_BRANCH: f64 = 1e-12;
/// Default cap on `o^n` for strategy enumeration.
pub const DEFAULT_STRATEGY_CAP: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct Assemblage {
    dim: usize,
    settings: usize,
    outcomes: usize,
    /// Flat, index `x * outcomes + a`.
    members: Vec<HermitianOperator>,
}

impl Assemblage {
    /// Validates and builds an assemblage from `members[x][a]`.
    pub fn new(dim: usize, members: Vec<Vec<HermitianOperator>>) -> Result<Self> {
        let settings = members.len();
        if settings == 0 {
            return Err(Error::InvalidAssemblage("no settings".into()));
        }
        let outcomes = members[0].len();
        if outcomes == 0 {
            return Err(Error::InvalidAssemblage("no outcomes".into()));
        }
        if members.iter().any(|row| row.len() != outcomes) {
            return Err(Error::InvalidAssemblage(
                "every setting must have the same number of outcomes".into(),
            ));
        }
        let flat: Vec<HermitianOperator> = members.into_iter().flatten().collect();
        let a = Self {
            dim,
            settings,
            outcomes,
            members: flat,
        };
        a.validate()?;
        Ok(a)
    }

    fn validate(&self) -> Result<()> {
        for x in 0..self.settings {
            let mut total = 0.0;
            for a in 0..self.outcomes {
                let m = self.member(a, x);
                if m.dim() != self.dim {
                    return Err(Error::InvalidAssemblage(format!(
                        "member {a}|{x} has dimension {}, expected {}",
                        m.dim(),
                        self.dim
                    )));
                }
                let min = m.min_eigenvalue()?;
                if min < -tol::PSD {
                    return Err(Error::InvalidAssemblage(format!(
                        "member {a}|{x} is not positive semidefinite (min eigenvalue {min:.3e})"
                    )));
                }
                total += m.trace();
            }
            if (total - 1.0).abs() > tol::TRACE {
                return Err(Error::InvalidAssemblage(format!(
                    "traces for setting {x} sum to {total}, expected 1"
                )));
            }
        }
        let reference = self.setting_marginal(0);
        for x in 1..self.settings {
            let dev = self.setting_marginal(x).frobenius_distance(&reference);
            if dev > NO_SIGNALLING_TOL {
                return Err(Error::InvalidAssemblage(format!(
                    "signalling: marginal of setting {x} differs from setting 0 by {dev:.3e}"
                )));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn settings(&self) -> usize {
        self.settings
    }

    pub fn outcomes(&self) -> usize {
        self.outcomes
    }

    pub fn member(&self, a: usize, x: usize) -> &HermitianOperator {
        &self.members[x * self.outcomes + a]
    }

    /// Iterates `(a, x, σ_{a|x})` with `x` outer.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &HermitianOperator)> + '_ {
        self.members
            .iter()
            .enumerate()
            .map(move |(k, m)| (k % self.outcomes, k / self.outcomes, m))
    }

    pub fn probability(&self, a: usize, x: usize) -> f64 {
        self.member(a, x).trace()
    }

    pub fn probabilities(&self) -> ProbabilityTable {
        let p = self.members.iter().map(|m| m.trace().max(0.0)).collect();
        ProbabilityTable {
            settings: self.settings,
            outcomes: self.outcomes,
            p,
        }
    }

    /// `Σ_a σ_{a|x}`.
    pub fn setting_marginal(&self, x: usize) -> HermitianOperator {
        (0..self.outcomes).fold(HermitianOperator::zeros(self.dim), |acc, a| {
            acc.add(self.member(a, x))
        })
    }

    /// Bob's reduced state `ρ_B`.
    pub fn reduced_state(&self) -> HermitianOperator {
        self.setting_marginal(0)
    }

    /// Normalised conditional state `σ̂_{a|x}`, or `None` on a probability-zero branch.
    pub fn conditional_state(&self, a: usize, x: usize) -> Option<DensityOperator> {
        let p = self.probability(a, x);
        if p <= ZERO_BRANCH {
            return None;
        }
        DensityOperator::new(self.member(a, x).scale(1.0 / p)).ok()
    }

    /// Convex mixture `w·self + (1−w)·other`.
    pub fn mix(&self, other: &Assemblage, w: f64) -> Result<Assemblage> {
        self.check_same_shape(other)?;
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::InvalidParameter(format!("mixing weight {w} outside [0, 1]")));
        }
        let members = self
            .members
            .iter()
            .zip(&other.members)
            .map(|(p, q)| p.scale(w).add(&q.scale(1.0 - w)))
            .collect();
        Ok(Self {
            members,
            ..self.clone()
        })
    }

    pub fn check_same_shape(&self, other: &Assemblage) -> Result<()> {
        if (self.dim, self.settings, self.outcomes) != (other.dim, other.settings, other.outcomes) {
            return Err(Error::DimensionMismatch(format!(
                "assemblage shapes (d={}, n={}, o={}) and (d={}, n={}, o={})",
                self.dim, self.settings, self.outcomes, other.dim, other.settings, other.outcomes
            )));
        }
        Ok(())
    }

    /// `σ_{a|x} = Σ_λ D(a|x,λ) σ_λ` for hidden states indexed by strategy.
    pub fn from_lhs_model(
        dim: usize,
        strategies: &DeterministicStrategySet,
        hidden: &[(usize, HermitianOperator)],
    ) -> Result<Self> {
        let n = strategies.settings();
        let o = strategies.outcomes();
        let mut members = vec![vec![HermitianOperator::zeros(dim); o]; n];
        for (k, sigma) in hidden {
            if sigma.dim() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "hidden state of dimension {} in a d={dim} model",
                    sigma.dim()
                )));
            }
            let lam = strategies.strategy(*k);
            for (x, &a) in lam.iter().enumerate() {
                members[x][a] = members[x][a].add(sigma);
            }
        }
        Self::new(dim, members)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(AssemblageFile::from(self)).expect("assemblage serialises")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: AssemblageFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        file.try_into()
    }
}

fn parse_key(key: &str) -> Result<(usize, usize)> {
    let (a, x) = key
        .split_once('|')
        .ok_or_else(|| Error::Parse(format!("member key {key:?} is not of the form \"a|x\"")))?;
    let a = a.parse().map_err(|_| Error::Parse(format!("bad outcome in key {key:?}")))?;
    let x = x.parse().map_err(|_| Error::Parse(format!("bad setting in key {key:?}")))?;
    Ok((a, x))
}

fn schema_v1() -> u32 {
    1
}

/// On-disk assemblage format.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AssemblageFile {
    #[serde(default = "schema_v1")]
    schema_version: u32,
    dim: usize,
    settings: usize,
    outcomes: usize,
    members: BTreeMap<String, ComplexMatrix>,
}

impl From<&Assemblage> for AssemblageFile {
    fn from(a: &Assemblage) -> Self {
        let members = a
            .iter()
            .map(|(o, x, m)| (format!("{o}|{x}"), m.as_complex()))
            .collect();
        Self {
            schema_version: 1,
            dim: a.dim,
            settings: a.settings,
            outcomes: a.outcomes,
            members,
        }
    }
}

impl TryFrom<AssemblageFile> for Assemblage {
    type Error = Error;

    fn try_from(f: AssemblageFile) -> Result<Self> {
        if f.schema_version != 1 {
            return Err(Error::Parse(format!("unsupported schema_version {}", f.schema_version)));
        }
        let grid = indexed_grid(f.settings, f.outcomes, f.members)?;
        Assemblage::new(f.dim, grid)
    }
}

fn indexed_grid(
    settings: usize,
    outcomes: usize,
    entries: BTreeMap<String, ComplexMatrix>,
) -> Result<Vec<Vec<HermitianOperator>>> {
    let mut grid: Vec<Vec<Option<HermitianOperator>>> = vec![vec![None; outcomes]; settings];
    for (key, m) in entries {
        let (a, x) = parse_key(&key)?;
        if a >= outcomes || x >= settings {
            return Err(Error::Parse(format!("key {key:?} out of range")));
        }
        grid[x][a] = Some(HermitianOperator::new(m.into_matrix())?);
    }
    grid.into_iter()
        .enumerate()
        .map(|(x, row)| {
            row.into_iter()
                .enumerate()
                .map(|(a, m)| m.ok_or_else(|| Error::Parse(format!("missing entry {a}|{x}"))))
                .collect()
        })
        .collect()
}

/// Hermitian operators indexed like an assemblage: witnesses `F_{a|x}`,
/// Hamiltonians `H_{a|x}`.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorFamily {
    dim: usize,
    settings: usize,
    outcomes: usize,
    /// Flat, index `x * outcomes + a`.
    ops: Vec<HermitianOperator>,
}

impl OperatorFamily {
    /// Builds a family from `ops[x][a]`.
    pub fn new(dim: usize, ops: Vec<Vec<HermitianOperator>>) -> Result<Self> {
        let settings = ops.len();
        let outcomes = ops.first().map_or(0, Vec::len);
        if settings == 0 || outcomes == 0 || ops.iter().any(|r| r.len() != outcomes) {
            return Err(Error::DimensionMismatch(
                "operator family must be a non-empty settings × outcomes grid".into(),
            ));
        }
        let ops: Vec<HermitianOperator> = ops.into_iter().flatten().collect();
        if let Some(bad) = ops.iter().find(|h| h.dim() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "operator of dimension {} in a d={dim} family",
                bad.dim()
            )));
        }
        Ok(Self {
            dim,
            settings,
            outcomes,
            ops,
        })
    }

    pub fn from_fn(
        dim: usize,
        settings: usize,
        outcomes: usize,
        mut f: impl FnMut(usize, usize) -> HermitianOperator,
    ) -> Result<Self> {
        let grid = (0..settings)
            .map(|x| (0..outcomes).map(|a| f(a, x)).collect())
            .collect();
        Self::new(dim, grid)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn settings(&self) -> usize {
        self.settings
    }

    pub fn outcomes(&self) -> usize {
        self.outcomes
    }

    pub fn get(&self, a: usize, x: usize) -> &HermitianOperator {
        &self.ops[x * self.outcomes + a]
    }

    /// `(a, x, op)` in storage order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &HermitianOperator)> + '_ {
        self.ops
            .iter()
            .enumerate()
            .map(move |(i, h)| (i % self.outcomes, i / self.outcomes, h))
    }

    pub fn map(&self, f: impl Fn(&HermitianOperator) -> HermitianOperator) -> Self {
        Self {
            ops: self.ops.iter().map(f).collect(),
            ..*self
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|h| h.scale(s))
    }

    /// `Σ_x O_{λ(x)|x}`.
    pub fn strategy_sum(&self, lambda: &[usize]) -> HermitianOperator {
        let mut acc = HermitianOperator::zeros(self.dim);
        for (x, &a) in lambda.iter().enumerate() {
            acc = acc.add(self.get(a, x));
        }
        acc
    }

    /// `Σ_{a,x} ⟨O_{a|x}, σ_{a|x}⟩`.
    pub fn pair(&self, a: &Assemblage) -> Result<f64> {
        self.check_shape(a)?;
        Ok(self.iter().map(|(o, x, h)| h.inner(a.member(o, x))).sum())
    }

    pub fn check_shape(&self, a: &Assemblage) -> Result<()> {
        if (self.dim, self.settings, self.outcomes) != (a.dim(), a.settings(), a.outcomes()) {
            return Err(Error::DimensionMismatch(format!(
                "operator family is d={} n={} o={}, assemblage is d={} n={} o={}",
                self.dim,
                self.settings,
                self.outcomes,
                a.dim(),
                a.settings(),
                a.outcomes()
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let members: BTreeMap<String, ComplexMatrix> = self
            .iter()
            .map(|(a, x, h)| (format!("{a}|{x}"), h.as_complex()))
            .collect();
        serde_json::json!({
            "dim": self.dim,
            "settings": self.settings,
            "outcomes": self.outcomes,
            "members": members,
        })
    }
}

/// A family of POVMs `{M_{a|x}}` on Alice's side.
#[derive(Clone, Debug, PartialEq)]
pub struct Measurements {
    dim: usize,
    settings: usize,
    outcomes: usize,
    effects: Vec<HermitianOperator>,
}

impl Measurements {
    pub fn new(dim: usize, effects: Vec<Vec<HermitianOperator>>) -> Result<Self> {
        let m = Self::from_effects_unchecked(dim, effects);
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn from_effects_unchecked(dim: usize, effects: Vec<Vec<HermitianOperator>>) -> Self {
        let settings = effects.len();
        let outcomes = effects.first().map_or(0, Vec::len);
        Self {
            dim,
            settings,
            outcomes,
            effects: effects.into_iter().flatten().collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.settings == 0 || self.outcomes == 0 {
            return Err(Error::InvalidMeasurement("empty measurement set".into()));
        }
        if self.effects.len() != self.settings * self.outcomes {
            return Err(Error::InvalidMeasurement("ragged effect table".into()));
        }
        let id = HermitianOperator::identity(self.dim);
        for x in 0..self.settings {
            let mut sum = HermitianOperator::zeros(self.dim);
            for a in 0..self.outcomes {
                let e = self.effect(a, x);
                if e.dim() != self.dim {
                    return Err(Error::InvalidMeasurement(format!(
                        "effect {a}|{x} has dimension {}, expected {}",
                        e.dim(),
                        self.dim
                    )));
                }
                let min = e.min_eigenvalue()?;
                if min < -tol::PSD {
                    return Err(Error::InvalidMeasurement(format!(
                        "effect {a}|{x} is not positive (min eigenvalue {min:.3e})"
                    )));
                }
                sum = sum.add(e);
            }
            let dev = sum.frobenius_distance(&id);
            if dev > tol::PSD {
                return Err(Error::InvalidMeasurement(format!(
                    "effects of setting {x} sum to identity only within {dev:.3e}"
                )));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn settings(&self) -> usize {
        self.settings
    }

    pub fn outcomes(&self) -> usize {
        self.outcomes
    }

    pub fn effect(&self, a: usize, x: usize) -> &HermitianOperator {
        &self.effects[x * self.outcomes + a]
    }

    pub fn to_json(&self) -> serde_json::Value {
        let effects: BTreeMap<String, ComplexMatrix> = (0..self.settings)
            .flat_map(|x| (0..self.outcomes).map(move |a| (a, x)))
            .map(|(a, x)| (format!("{a}|{x}"), self.effect(a, x).as_complex()))
            .collect();
        serde_json::json!({
            "schema_version": 1,
            "dim": self.dim,
            "settings": self.settings,
            "outcomes": self.outcomes,
            "effects": effects,
        })
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct File {
            #[serde(default = "schema_v1")]
            schema_version: u32,
            dim: usize,
            settings: usize,
            outcomes: usize,
            effects: BTreeMap<String, ComplexMatrix>,
        }
        let f: File = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        if f.schema_version != 1 {
            return Err(Error::Parse(format!("unsupported schema_version {}", f.schema_version)));
        }
        let grid = indexed_grid(f.settings, f.outcomes, f.effects)?;
        Measurements::new(f.dim, grid)
    }
}

/// `σ_{a|x} = Tr_A[(M_{a|x} ⊗ I) ρ_AB]`.
pub fn assemblage_from_state(rho_ab: &DensityOperator, m: &Measurements) -> Result<Assemblage> {
    m.validate()?;
    let total = rho_ab.dim();
    let da = m.dim();
    if da == 0 || !total.is_multiple_of(da) {
        return Err(Error::DimensionMismatch(format!(
            "state of dimension {total} cannot host a {da}-dimensional measured system"
        )));
    }
    let db = total / da;
    let id_b = HermitianOperator::identity(db);
    let mut members = Vec::with_capacity(m.settings());
    for x in 0..m.settings() {
        let mut row = Vec::with_capacity(m.outcomes());
        for a in 0..m.outcomes() {
            let lifted = tensor_hermitian(m.effect(a, x), &id_b);
            let prod = ComplexMatrix::from_matrix(lifted.matrix() * rho_ab.matrix())?;
            let reduced = partial_trace(&prod, (da, db), Subsystem::B)?;
            row.push(HermitianOperator::from_hermitian_part(reduced.into_matrix()));
        }
        members.push(row);
    }
    Assemblage::new(db, members)
}

fn check_eta(eta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::InvalidParameter(format!("eta = {eta} outside [0, 1]")));
    }
    Ok(())
}

/// `η Φ⁺ + (1 − η) I/d²` with `Φ⁺ = (1/d) Σ_ij |ii⟩⟨jj|`.
pub fn isotropic_state(d: usize, eta: f64) -> Result<DensityOperator> {
    check_eta(eta)?;
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let n = d * d;
    let mut m = DMatrix::<C64>::identity(n, n) * c((1.0 - eta) / n as f64, 0.0);
    for i in 0..d {
        for j in 0..d {
            m[(i * d + i, j * d + j)] += c(eta / d as f64, 0.0);
        }
    }
    DensityOperator::new(HermitianOperator::from_hermitian_part(m))
}

/// Closed form `η (1/d)|φ^a_x⟩⟨φ^a_x| + (1 − η) I/d²`.
pub fn isotropic_assemblage(d: usize, eta: f64, f: &MubFamily) -> Result<Assemblage> {
    check_eta(eta)?;
    if f.dim != d {
        return Err(Error::DimensionMismatch(format!(
            "MUB family of dimension {} for d = {d}",
            f.dim
        )));
    }
    let noise = HermitianOperator::identity(d).scale((1.0 - eta) / (d * d) as f64);
    let members = f
        .bases
        .iter()
        .map(|basis| {
            basis
                .iter()
                .map(|k| k.projector().scale(eta / d as f64).add(&noise))
                .collect()
        })
        .collect();
    Assemblage::new(d, members)
}

/// `(1/d)|φ^a_x⟩⟨φ^a_x|`: the maximally entangled state measured in the
/// conjugate bases of `f`.
pub fn max_entangled_assemblage(f: &MubFamily) -> Result<Assemblage> {
    isotropic_assemblage(f.dim, 1.0, f)
}

/// Builds the isotropic assemblage through the state route.
pub fn isotropic_assemblage_from_state(d: usize, eta: f64, f: &MubFamily) -> Result<Assemblage> {
    assemblage_from_state(&isotropic_state(d, eta)?, &conjugate_projectors(f))
}

/// All deterministic maps `λ: x ↦ a`, in lexicographic order with setting 0
/// as the most significant digit. Strategies are decoded on demand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeterministicStrategySet {
    settings: usize,
    outcomes: usize,
    count: usize,
}

pub fn enumerate_strategies(n: usize, o: usize) -> Result<DeterministicStrategySet> {
    enumerate_strategies_with_cap(n, o, DEFAULT_STRATEGY_CAP)
}

pub fn enumerate_strategies_with_cap(n: usize, o: usize, cap: u64) -> Result<DeterministicStrategySet> {
    if n == 0 || o == 0 {
        return Err(Error::InvalidParameter("settings and outcomes must be positive".into()));
    }
    let count = strategy_count(n, o);
    if count > cap as u128 {
        return Err(Error::TooManyStrategies { count, cap });
    }
    Ok(DeterministicStrategySet {
        settings: n,
        outcomes: o,
        count: count as usize,
    })
}

/// `o^n`, saturating.
pub fn strategy_count(n: usize, o: usize) -> u128 {
    let mut count: u128 = 1;
    for _ in 0..n {
        count = count.saturating_mul(o as u128);
    }
    count
}

impl DeterministicStrategySet {
    pub fn settings(&self) -> usize {
        self.settings
    }

    pub fn outcomes(&self) -> usize {
        self.outcomes
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// `λ(x)` for every setting, strategy number `k`.
    pub fn strategy(&self, k: usize) -> Vec<usize> {
        let mut out = vec![0; self.settings];
        self.decode_into(k, &mut out);
        out
    }

    pub(crate) fn decode_into(&self, mut k: usize, out: &mut [usize]) {
        for x in (0..self.settings).rev() {
            out[x] = k % self.outcomes;
            k /= self.outcomes;
        }
    }

    /// Deterministic response `D(a|x,λ) = δ_{a,λ(x)}`.
    pub fn response(&self, a: usize, x: usize, k: usize) -> f64 {
        if self.strategy(k)[x] == a {
            1.0
        } else {
            0.0
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.count).map(|k| self.strategy(k))
    }
}

/// A conditional distribution `p(a|x)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbabilityTable {
    settings: usize,
    outcomes: usize,
    /// Flat, index `x * outcomes + a`.
    p: Vec<f64>,
}

impl ProbabilityTable {
    /// `rows[x][a] = p(a|x)`.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let settings = rows.len();
        let outcomes = rows.first().map_or(0, Vec::len);
        if settings == 0 || outcomes == 0 || rows.iter().any(|r| r.len() != outcomes) {
            return Err(Error::InvalidDistribution("table must be rectangular and non-empty".into()));
        }
        for (x, row) in rows.iter().enumerate() {
            if row.iter().any(|&v| !v.is_finite() || !(-tol::TRACE..=1.0 + tol::TRACE).contains(&v)) {
                return Err(Error::InvalidDistribution(format!("setting {x} has an entry outside [0, 1]")));
            }
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > tol::TRACE {
                return Err(Error::InvalidDistribution(format!("setting {x} sums to {s}")));
            }
        }
        Ok(Self {
            settings,
            outcomes,
            p: rows.into_iter().flatten().collect(),
        })
    }

    pub fn uniform(settings: usize, outcomes: usize) -> Self {
        Self {
            settings,
            outcomes,
            p: vec![1.0 / outcomes as f64; settings * outcomes],
        }
    }

    pub fn get(&self, a: usize, x: usize) -> f64 {
        self.p[x * self.outcomes + a]
    }

    pub fn settings(&self) -> usize {
        self.settings
    }

    pub fn outcomes(&self) -> usize {
        self.outcomes
    }
}

/// `p(a|x) · I/d`: the unsteerable reference assemblage with the given marginals.
pub fn maximally_mixed_reference(p: &ProbabilityTable, d: usize) -> Result<Assemblage> {
    if d == 0 {
        return Err(Error::InvalidDimension(d));
    }
    let members = (0..p.settings())
        .map(|x| {
            (0..p.outcomes())
                .map(|a| HermitianOperator::identity(d).scale(p.get(a, x).max(0.0) / d as f64))
                .collect()
        })
        .collect();
    Assemblage::new(d, members)
}
