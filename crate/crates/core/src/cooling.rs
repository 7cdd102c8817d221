//! Heat withdrawn by thermalising steered states, and the certified
//! advantage of a steerable assemblage over every unsteerable one with the
//! same marginals.
//!
//! Units: `k_B = 1`; energies and `β` are dimensionless.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::assemblage::{Assemblage, OperatorFamily, ZERO_BRANCH};
use crate::error::{Error, Result};
use crate::linop::{eigh, spectral_map, DensityOperator, HermitianOperator};
use crate::steering::{classical_heat_max_with, gibbs_energy, robustness_dual_with, SteeringOptions};

/// `ξ` is only formed when the classical benchmark exceeds this.
pub const DENOMINATOR_FLOOR: f64 = 1e-12;
/// Slack on `ξ ≥ 1 + R` in the verdict.
pub const ADVANTAGE_TOL: f64 = 1e-6;

/// Hamiltonians `H_{a|x}` applied after outcome `a` of setting `x`, and the
/// bath's inverse temperature.
#[derive(Clone, Debug, PartialEq)]
pub struct CoolingTask {
    hamiltonians: OperatorFamily,
    beta: f64,
}

fn check_beta(beta: f64) -> Result<()> {
    if !beta.is_finite() || beta < 0.0 {
        return Err(Error::InvalidParameter(format!("beta = {beta} must be finite and non-negative")));
    }
    Ok(())
}

impl CoolingTask {
    /// `beta = 0` is the infinite-temperature special case.
    pub fn new(hamiltonians: OperatorFamily, beta: f64) -> Result<Self> {
        check_beta(beta)?;
        Ok(Self { hamiltonians, beta })
    }

    pub fn hamiltonians(&self) -> &OperatorFamily {
        &self.hamiltonians
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn dim(&self) -> usize {
        self.hamiltonians.dim()
    }

    pub fn settings(&self) -> usize {
        self.hamiltonians.settings()
    }

    pub fn outcomes(&self) -> usize {
        self.hamiltonians.outcomes()
    }
}

/// `e^{−βH} / Tr e^{−βH}`, exponentiated after shifting the spectrum so the
/// largest weight is 1.
pub fn gibbs_state(h: &HermitianOperator, beta: f64) -> Result<DensityOperator> {
    check_beta(beta)?;
    let (values, vectors) = eigh(h)?;
    let min = values.min();
    let z: f64 = values.iter().map(|&e| (-beta * (e - min)).exp()).sum();
    DensityOperator::new(spectral_map(&values, &vectors, |e| (-beta * (e - min)).exp() / z))
}

/// `Tr(Hρ) − Tr(Hγ)`; positive when heat leaves the bath.
pub fn heat_withdrawn(rho: &DensityOperator, h: &HermitianOperator, beta: f64) -> Result<f64> {
    if rho.dim() != h.dim() {
        return Err(Error::DimensionMismatch(format!(
            "state of dimension {} with a d={} Hamiltonian",
            rho.dim(),
            h.dim()
        )));
    }
    let gamma = gibbs_state(h, beta)?;
    Ok(h.inner(rho.op()) - h.inner(gamma.op()))
}

/// `(1/n) Σ_{a,x} [Tr(H_{a|x} σ_{a|x}) − p(a|x) Tr(H_{a|x} γ̂_{a|x})]`.
pub fn average_heat(a: &Assemblage, task: &CoolingTask) -> Result<f64> {
    let energy = task.hamiltonians().pair(a)?;
    Ok((energy - gibbs_energy(a, task)?) / a.settings() as f64)
}

/// `H_{a|x} = ε F_{a|x}`.
pub fn witness_hamiltonians(f: &OperatorFamily, epsilon: f64, beta: f64) -> Result<CoolingTask> {
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(Error::InvalidParameter(format!("epsilon = {epsilon} must be positive")));
    }
    CoolingTask::new(f.scale(epsilon), beta)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    AdvantageCertified,
    NoAdvantage,
    DenominatorNonpositive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdvantageReport {
    pub q_quantum: f64,
    pub q_classical_max: f64,
    /// `q_quantum / q_classical_max`; absent when the denominator is not positive.
    pub xi: Option<f64>,
    #[serde(rename = "R")]
    pub robustness: f64,
    #[serde(rename = "one_plus_R")]
    pub one_plus_r: f64,
    /// `Σ_{a,x} p(a|x) Tr(F_{a|x} γ̂_{a|x})`, Gibbs states of `εF` at `β`.
    pub z: f64,
    /// `Σ_{a,x} Tr(F_{a|x} σ*_{a|x})` at the classical maximiser.
    #[serde(rename = "S")]
    pub s: f64,
    pub epsilon: f64,
    pub beta: f64,
    pub verdict: Verdict,
    /// Both underlying SDPs passed the certificate check.
    pub certified: bool,
}

impl AdvantageReport {
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("report serialises");
        v["schema_version"] = 1.into();
        v
    }
}

/// Builds the witness Hamiltonians from the optimal dual of the robustness
/// SDP and compares the heat withdrawn by `a` with the best unsteerable
/// assemblage sharing its marginals.
pub fn certified_advantage(a: &Assemblage, epsilon: f64, beta: f64) -> Result<AdvantageReport> {
    certified_advantage_with(a, epsilon, beta, &SteeringOptions::default())
}

pub fn certified_advantage_with(
    a: &Assemblage,
    epsilon: f64,
    beta: f64,
    opts: &SteeringOptions,
) -> Result<AdvantageReport> {
    if !beta.is_finite() || beta <= 0.0 {
        return Err(Error::InvalidParameter(format!("beta = {beta} must be positive")));
    }
    let r = robustness_dual_with(a, opts)?;
    let task = witness_hamiltonians(&r.witnesses, epsilon, beta)?;
    advantage_for_task(a, &task, epsilon, r.robustness, r.certified, opts)
}

/// Same comparison for a caller-supplied witness family `F` (`H = εF`).
pub fn advantage_with_witness(
    a: &Assemblage,
    f: &OperatorFamily,
    robustness: f64,
    epsilon: f64,
    beta: f64,
) -> Result<AdvantageReport> {
    let task = witness_hamiltonians(f, epsilon, beta)?;
    advantage_for_task(a, &task, epsilon, robustness, true, &SteeringOptions::default())
}

fn advantage_for_task(
    a: &Assemblage,
    task: &CoolingTask,
    epsilon: f64,
    robustness: f64,
    robustness_certified: bool,
    opts: &SteeringOptions,
) -> Result<AdvantageReport> {
    let q_quantum = average_heat(a, task)?;
    let heat = classical_heat_max_with(a, task, opts)?;
    let q_classical_max = heat.value;
    let one_plus_r = 1.0 + robustness;
    let (xi, verdict) = if q_classical_max <= DENOMINATOR_FLOOR {
        (None, Verdict::DenominatorNonpositive)
    } else {
        let xi = q_quantum / q_classical_max;
        let verdict = if xi >= one_plus_r - ADVANTAGE_TOL && xi > 1.0 + ADVANTAGE_TOL {
            Verdict::AdvantageCertified
        } else {
            Verdict::NoAdvantage
        };
        (Some(xi), verdict)
    };
    Ok(AdvantageReport {
        q_quantum,
        q_classical_max,
        xi,
        robustness,
        one_plus_r,
        z: heat.gibbs_energy / epsilon,
        s: heat.energy / epsilon,
        epsilon,
        beta: task.beta(),
        verdict,
        certified: robustness_certified && heat.certified,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MonteCarloEstimate {
    pub shots: u64,
    pub mean: f64,
    pub std_error: f64,
    pub seed: u64,
}

/// Shots per work unit; results do not depend on how units are scheduled.
const CHUNK: u64 = 4096;

#[derive(Clone, Copy, Default)]
struct Moments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, v: f64) {
        self.count += 1;
        let delta = v - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (v - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        Moments {
            count,
            mean: self.mean + delta * other.count as f64 / count as f64,
            m2: self.m2 + other.m2 + delta * delta * (self.count as f64 * other.count as f64) / count as f64,
        }
    }
}

/// Runs the protocol shot by shot: draw `x` uniformly, draw `a` from
/// `p(a|x)`, thermalise `ρ̂_{a|x}` under `H_{a|x}` and record the heat.
///
/// Shot `i` draws from its own ChaCha stream `(seed, i)`, so the estimate
/// is bit-identical for a given seed regardless of thread count.
pub fn simulate_protocol(a: &Assemblage, task: &CoolingTask, shots: u64, seed: u64) -> Result<MonteCarloEstimate> {
    if shots == 0 {
        return Err(Error::InvalidParameter("shots must be at least 1".into()));
    }
    let h = task.hamiltonians();
    h.check_shape(a)?;
    let (n, o) = (a.settings(), a.outcomes());

    let mut branch_heat = vec![0.0; n * o];
    let mut cumulative = vec![0.0; n * o];
    for x in 0..n {
        let mut acc = 0.0;
        for o_ in 0..o {
            let p = a.probability(o_, x);
            if p > ZERO_BRANCH {
                let rho = a.conditional_state(o_, x).expect("branch above the zero threshold");
                branch_heat[x * o + o_] = heat_withdrawn(&rho, h.get(o_, x), task.beta())?;
                acc += p;
            }
            cumulative[x * o + o_] = acc;
        }
    }

    let base = ChaCha8Rng::seed_from_u64(seed);
    let shot = |i: u64| {
        let mut rng = base.clone();
        rng.set_stream(i);
        let x = rng.gen_range(0..n);
        let row = &cumulative[x * o..(x + 1) * o];
        let u: f64 = rng.gen::<f64>() * row[o - 1];
        let a_ = row.iter().position(|&c| u < c).unwrap_or(o - 1);
        branch_heat[x * o + a_]
    };

    let chunks = shots.div_ceil(CHUNK);
    let parts: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut m = Moments::default();
            for i in c * CHUNK..((c + 1) * CHUNK).min(shots) {
                m.push(shot(i));
            }
            m
        })
        .collect();
    let total = parts.into_iter().fold(Moments::default(), Moments::merge);
    let std_error = if total.count > 1 {
        (total.m2 / (total.count - 1) as f64).sqrt() / (total.count as f64).sqrt()
    } else {
        0.0
    };
    Ok(MonteCarloEstimate {
        shots,
        mean: total.mean,
        std_error,
        seed,
    })
}
