//! Seeded random instances: states, POVMs, LHS-model and quantum
//! assemblages, Hamiltonian families.

use nalgebra::DMatrix;
use rand::Rng;

use crate::assemblage::{
    assemblage_from_state, enumerate_strategies, Assemblage, Measurements, OperatorFamily,
};
use crate::cooling::CoolingTask;
use crate::error::Result;
use crate::linop::{c, eigh, spectral_map, DensityOperator, HermitianOperator, C64};

fn uniform_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<C64> {
    DMatrix::from_fn(rows, cols, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

/// `G G†` for a `d × rank` matrix with uniform complex entries.
pub fn random_psd<R: Rng + ?Sized>(d: usize, rank: usize, rng: &mut R) -> HermitianOperator {
    let g = uniform_matrix(d, rank.max(1), rng);
    HermitianOperator::from_hermitian_part(&g * g.adjoint())
}

pub fn random_density<R: Rng + ?Sized>(d: usize, rank: usize, rng: &mut R) -> DensityOperator {
    let p = random_psd(d, rank, rng);
    DensityOperator::new(p.scale(1.0 / p.trace())).expect("normalised Gram matrix is a state")
}

pub fn random_hermitian<R: Rng + ?Sized>(d: usize, scale: f64, rng: &mut R) -> HermitianOperator {
    let g = uniform_matrix(d, d, rng);
    HermitianOperator::from_hermitian_part((&g + g.adjoint()) * c(0.5 * scale, 0.0))
}

/// `M_a = S^{-1/2} G_a S^{-1/2}` with random PSD `G_a` and `S = Σ_a G_a`.
pub fn random_povm<R: Rng + ?Sized>(d: usize, outcomes: usize, rng: &mut R) -> Result<Vec<HermitianOperator>> {
    let g: Vec<HermitianOperator> = (0..outcomes).map(|_| random_psd(d, d, rng)).collect();
    let total = g.iter().fold(HermitianOperator::zeros(d), |acc, m| acc.add(m));
    let (values, vectors) = eigh(&total)?;
    let inv_sqrt = spectral_map(&values, &vectors, |v| 1.0 / v.sqrt());
    Ok(g.iter()
        .map(|m| HermitianOperator::from_hermitian_part(inv_sqrt.matrix() * m.matrix() * inv_sqrt.matrix()))
        .collect())
}

/// `σ_{a|x} = Σ_λ D(a|x,λ) w_λ ρ_λ` with random weights and hidden states.
pub fn random_lhs_assemblage<R: Rng + ?Sized>(d: usize, n: usize, o: usize, rng: &mut R) -> Result<Assemblage> {
    let s = enumerate_strategies(n, o)?;
    let weights: Vec<f64> = (0..s.len()).map(|_| rng.gen_range(0.0..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let hidden: Vec<(usize, HermitianOperator)> = weights
        .iter()
        .enumerate()
        .map(|(k, w)| (k, random_density(d, 1 + k % d, rng).op().scale(w / total)))
        .collect();
    Assemblage::from_lhs_model(d, &s, &hidden)
}

/// Random POVMs on half of a random bipartite state of the given rank.
pub fn random_quantum_assemblage<R: Rng + ?Sized>(
    d: usize,
    n: usize,
    o: usize,
    rank: usize,
    rng: &mut R,
) -> Result<Assemblage> {
    let state = random_density(d * d, rank, rng);
    let effects = (0..n).map(|_| random_povm(d, o, rng)).collect::<Result<Vec<_>>>()?;
    assemblage_from_state(&state, &Measurements::new(d, effects)?)
}

pub fn random_task<R: Rng + ?Sized>(d: usize, n: usize, o: usize, beta: f64, rng: &mut R) -> Result<CoolingTask> {
    let h = OperatorFamily::from_fn(d, n, o, |_, _| random_hermitian(d, 1.0, rng))?;
    CoolingTask::new(h, beta)
}
