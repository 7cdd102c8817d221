//! Real standard-form SDP pair and its primal-dual interior-point solver.
//!
//! ```text
//!   (P)  min ⟨C, X⟩   s.t. A(X) = b,          X ⪰ 0
//!   (D)  max bᵀy      s.t. Aᵀ(y) + Z = C,     Z ⪰ 0
//! ```
//!
//! Every block is the realification `½·R(H)` of a complex Hermitian space of
//! dimension `cdim` (real dimension `2·cdim`). The restriction of each
//! constraint row to a block is a sparse combination of the block's local
//! basis `p_k = ½·R(P_k)`, where `{P_k}` is the synthesis basis of
//! [`super::coords`]. Keeping the restriction in that form lets the Schur
//! complement be assembled from one small `K` matrix per block.

use std::collections::BTreeMap;

use nalgebra::{Cholesky, DMatrix, DVector, Dyn, SymmetricEigen};

/// Sparse entries `(row, col, value)` of every local basis matrix, both triangles.
#[derive(Debug, Clone)]
pub(crate) struct CoordBasis {
    pub entries: Vec<Vec<(usize, usize, f64)>>,
    pub sq_norms: Vec<f64>,
}

impl CoordBasis {
    pub fn new(cdim: usize) -> Self {
        let n = cdim;
        let mut entries = Vec::with_capacity(n * n);
        for p in 0..n {
            entries.push(vec![(p, p, 0.5), (p + n, p + n, 0.5)]);
        }
        for p in 0..n {
            for q in (p + 1)..n {
                entries.push(vec![(p, q, 0.5), (q, p, 0.5), (p + n, q + n, 0.5), (q + n, p + n, 0.5)]);
                entries.push(vec![
                    (p, q + n, -0.5),
                    (q, p + n, 0.5),
                    (p + n, q, 0.5),
                    (q + n, p, -0.5),
                ]);
            }
        }
        let sq_norms = entries
            .iter()
            .map(|e| e.iter().map(|&(_, _, v)| v * v).sum())
            .collect();
        Self { entries, sq_norms }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct StdBlock {
    pub cdim: usize,
    /// Realified cost block.
    pub c: DMatrix<f64>,
    /// For every local coordinate `k`: the rows it feeds and their coefficients.
    pub links: Vec<Vec<(usize, f64)>>,
}

impl StdBlock {
    pub fn n(&self) -> usize {
        2 * self.cdim
    }
}

#[derive(Debug, Clone)]
pub(crate) struct StdProblem {
    pub blocks: Vec<StdBlock>,
    pub b: DVector<f64>,
    pub bases: BTreeMap<usize, CoordBasis>,
}

impl StdProblem {
    pub fn new(blocks: Vec<StdBlock>, b: DVector<f64>) -> Self {
        let mut bases = BTreeMap::new();
        for blk in &blocks {
            bases.entry(blk.cdim).or_insert_with(|| CoordBasis::new(blk.cdim));
        }
        Self { blocks, b, bases }
    }

    pub fn rows(&self) -> usize {
        self.b.len()
    }

    fn basis(&self, blk: &StdBlock) -> &CoordBasis {
        &self.bases[&blk.cdim]
    }

    /// `A(X)`; `X` need not be symmetric.
    pub fn apply_a(&self, xs: &[DMatrix<f64>]) -> DVector<f64> {
        let mut out = DVector::zeros(self.rows());
        for (blk, x) in self.blocks.iter().zip(xs) {
            let basis = self.basis(blk);
            for (k, links) in blk.links.iter().enumerate() {
                if links.is_empty() {
                    continue;
                }
                let val: f64 = basis.entries[k].iter().map(|&(r, s, v)| v * x[(r, s)]).sum();
                for &(i, coef) in links {
                    out[i] += coef * val;
                }
            }
        }
        out
    }

    /// `Aᵀ(y)` per block.
    pub fn apply_at(&self, y: &DVector<f64>) -> Vec<DMatrix<f64>> {
        self.blocks
            .iter()
            .map(|blk| {
                let basis = self.basis(blk);
                let n = blk.n();
                let mut m = DMatrix::zeros(n, n);
                for (k, links) in blk.links.iter().enumerate() {
                    let w: f64 = links.iter().map(|&(i, coef)| coef * y[i]).sum();
                    if w != 0.0 {
                        for &(r, s, v) in &basis.entries[k] {
                            m[(r, s)] += w * v;
                        }
                    }
                }
                m
            })
            .collect()
    }

    /// HKM Schur complement `M_ij = Σ_blocks tr(A_i X A_j Z⁻¹)`.
    pub fn schur(&self, xs: &[DMatrix<f64>], zinvs: &[DMatrix<f64>]) -> DMatrix<f64> {
        let m = self.rows();
        let mut out = DMatrix::zeros(m, m);
        let mut active = Vec::new();
        let mut kmat = Vec::new();
        for ((blk, x), w) in self.blocks.iter().zip(xs).zip(zinvs) {
            let basis = self.basis(blk);
            active.clear();
            active.extend((0..blk.links.len()).filter(|&k| !blk.links[k].is_empty()));
            let na = active.len();
            kmat.clear();
            kmat.resize(na * na, 0.0);
            for (ia, &k) in active.iter().enumerate() {
                for (ja, &l) in active.iter().enumerate().skip(ia) {
                    let mut acc = 0.0;
                    for &(p, q, v) in &basis.entries[k] {
                        for &(r, s, u) in &basis.entries[l] {
                            acc += v * u * x[(q, r)] * w[(s, p)];
                        }
                    }
                    kmat[ia * na + ja] = acc;
                    kmat[ja * na + ia] = acc;
                }
            }
            for (ia, &k) in active.iter().enumerate() {
                for (ja, &l) in active.iter().enumerate() {
                    let kv = kmat[ia * na + ja];
                    if kv == 0.0 {
                        continue;
                    }
                    for &(i, ci) in &blk.links[k] {
                        let s = ci * kv;
                        for &(j, cj) in &blk.links[l] {
                            out[(i, j)] += s * cj;
                        }
                    }
                }
            }
        }
        out
    }

    /// Frobenius norm of each row restricted to each block, squared and summed per block.
    fn row_block_norms(&self) -> Vec<Vec<(usize, f64)>> {
        self.blocks
            .iter()
            .map(|blk| {
                let basis = self.basis(blk);
                let mut acc: BTreeMap<usize, f64> = BTreeMap::new();
                for (k, links) in blk.links.iter().enumerate() {
                    for &(i, coef) in links {
                        *acc.entry(i).or_insert(0.0) += coef * coef * basis.sq_norms[k];
                    }
                }
                acc.into_iter().map(|(i, s)| (i, s.sqrt())).collect()
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum IpmStatus {
    Optimal,
    PrimalInfeasible,
    DualInfeasible,
    IterationLimit,
    Stalled,
}

#[derive(Debug, Clone)]
pub(crate) struct IpmResult {
    pub x: Vec<DMatrix<f64>>,
    pub y: DVector<f64>,
    pub status: IpmStatus,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct IpmSettings {
    pub tol: f64,
    pub max_iterations: usize,
}

fn inner(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.dot(b)
}

fn sym(m: DMatrix<f64>) -> DMatrix<f64> {
    (&m + m.transpose()) * 0.5
}

/// Largest `α` with `X + α·ΔX ⪰ 0`, given the Cholesky factor of `X`.
fn max_step(chol: &Cholesky<f64, Dyn>, dx: &DMatrix<f64>) -> f64 {
    let l = chol.l();
    let Some(t) = l.solve_lower_triangular(dx) else {
        return 0.0;
    };
    let Some(s) = l.solve_lower_triangular(&t.transpose()) else {
        return 0.0;
    };
    let s = sym(s);
    let min = SymmetricEigen::new(s).eigenvalues.min();
    if min >= 0.0 {
        f64::INFINITY
    } else {
        -1.0 / min
    }
}

fn step_length(chols: &[Cholesky<f64, Dyn>], ds: &[DMatrix<f64>]) -> f64 {
    chols
        .iter()
        .zip(ds)
        .map(|(c, d)| max_step(c, d))
        .fold(f64::INFINITY, f64::min)
}

fn factor_schur(m: &DMatrix<f64>) -> Option<Cholesky<f64, Dyn>> {
    if let Some(c) = Cholesky::new(m.clone()) {
        return Some(c);
    }
    let scale = m.diagonal().amax().max(1e-300);
    let mut reg = 1e-14 * scale;
    for _ in 0..8 {
        let mut r = m.clone();
        for i in 0..r.nrows() {
            r[(i, i)] += reg;
        }
        if let Some(c) = Cholesky::new(r) {
            return Some(c);
        }
        reg *= 100.0;
    }
    None
}

fn blocks_norm(ms: &[DMatrix<f64>]) -> f64 {
    ms.iter().map(|m| m.norm_squared()).sum::<f64>().sqrt()
}

/// Mehrotra predictor-corrector with the HKM search direction.
pub(crate) fn solve(p: &StdProblem, settings: IpmSettings) -> IpmResult {
    let nblocks = p.blocks.len();
    let total_dim: usize = p.blocks.iter().map(StdBlock::n).sum();
    let norm_b = p.b.norm();
    let norm_c = p.blocks.iter().map(|b| b.c.norm_squared()).sum::<f64>().sqrt();

    // Starting point scaled to the data.
    let row_norms = p.row_block_norms();
    let mut x: Vec<DMatrix<f64>> = Vec::with_capacity(nblocks);
    let mut z: Vec<DMatrix<f64>> = Vec::with_capacity(nblocks);
    for (blk, rn) in p.blocks.iter().zip(&row_norms) {
        let n = blk.n() as f64;
        let mut xi = 10f64.max(n.sqrt());
        let mut eta = 10f64.max(n.sqrt()).max(blk.c.norm());
        for &(i, a_norm) in rn {
            xi = xi.max(n * (1.0 + p.b[i].abs()) / (1.0 + a_norm));
            eta = eta.max(a_norm);
        }
        x.push(DMatrix::identity(blk.n(), blk.n()) * xi);
        z.push(DMatrix::identity(blk.n(), blk.n()) * eta);
    }
    let mut y = DVector::zeros(p.rows());

    let mut status = IpmStatus::IterationLimit;
    let mut iterations = 0;
    let mut stalls = 0;
    // Late iterations can lose feasibility to round-off in the Schur solve;
    // the best iterate seen is returned if the run ends without converging.
    let mut best: Option<(f64, Vec<DMatrix<f64>>, DVector<f64>)> = None;

    for iter in 0..=settings.max_iterations {
        iterations = iter;
        let ax = p.apply_a(&x);
        let rp = &p.b - &ax;
        let aty = p.apply_at(&y);
        let rd: Vec<DMatrix<f64>> = (0..nblocks).map(|j| &p.blocks[j].c - &z[j] - &aty[j]).collect();
        let pobj: f64 = p.blocks.iter().zip(&x).map(|(b, xj)| inner(&b.c, xj)).sum();
        let dobj = p.b.dot(&y);
        let xz: f64 = x.iter().zip(&z).map(|(a, b)| inner(a, b)).sum();
        let mu = xz / total_dim.max(1) as f64;

        let pinf = rp.norm() / (1.0 + norm_b);
        let dinf = blocks_norm(&rd) / (1.0 + norm_c);
        let gap = (pobj - dobj).abs().max(xz.abs()) / (1.0 + pobj.abs() + dobj.abs());
        if pinf <= settings.tol && dinf <= settings.tol && gap <= settings.tol {
            status = IpmStatus::Optimal;
            break;
        }
        let merit = pinf.max(dinf).max(gap);
        if best.as_ref().is_none_or(|(m, _, _)| merit < *m) {
            best = Some((merit, x.clone(), y.clone()));
        }
        if dobj > 0.0 {
            let ray: Vec<DMatrix<f64>> = (0..nblocks).map(|j| &aty[j] + &z[j]).collect();
            if blocks_norm(&ray) <= 1e-8 * dobj && dobj > 1e3 * (1.0 + norm_c) {
                status = IpmStatus::PrimalInfeasible;
                break;
            }
        }
        if pobj < 0.0 && ax.norm() <= 1e-8 * (-pobj) && -pobj > 1e3 * (1.0 + norm_b) {
            status = IpmStatus::DualInfeasible;
            break;
        }
        if iter == settings.max_iterations {
            break;
        }

        let zchol: Option<Vec<_>> = z.iter().map(|m| Cholesky::new(m.clone())).collect();
        let xchol: Option<Vec<_>> = x.iter().map(|m| Cholesky::new(m.clone())).collect();
        let (Some(zchol), Some(xchol)) = (zchol, xchol) else {
            status = IpmStatus::Stalled;
            break;
        };
        let zinv: Vec<DMatrix<f64>> = zchol.iter().map(|c| sym(c.inverse())).collect();

        let schur = p.schur(&x, &zinv);
        let Some(schur_chol) = factor_schur(&schur) else {
            status = IpmStatus::Stalled;
            break;
        };

        let a_zinv = p.apply_a(&zinv);
        let x_rd_zinv: Vec<DMatrix<f64>> = (0..nblocks).map(|j| &x[j] * &rd[j] * &zinv[j]).collect();
        let a_x_rd_zinv = p.apply_a(&x_rd_zinv);

        let direction = |sigma_mu: f64, corr: Option<&Vec<DMatrix<f64>>>| {
            let mut rhs = &p.b - &a_zinv * sigma_mu + &a_x_rd_zinv;
            if let Some(c) = corr {
                rhs += p.apply_a(c);
            }
            let mut dy = schur_chol.solve(&rhs);
            let resid = &rhs - &schur * &dy;
            dy += schur_chol.solve(&resid);
            let atdy = p.apply_at(&dy);
            let dz: Vec<DMatrix<f64>> = (0..nblocks).map(|j| &rd[j] - &atdy[j]).collect();
            let dx: Vec<DMatrix<f64>> = (0..nblocks)
                .map(|j| {
                    let mut d = &zinv[j] * sigma_mu - &x[j] - sym(&x[j] * &dz[j] * &zinv[j]);
                    if let Some(c) = corr {
                        d -= sym(c[j].clone());
                    }
                    d
                })
                .collect();
            (dx, dy, dz)
        };

        // Predictor.
        let (dxa, _, dza) = direction(0.0, None);
        let ap_a = step_length(&xchol, &dxa).min(1.0);
        let ad_a = step_length(&zchol, &dza).min(1.0);
        let mu_aff: f64 = (0..nblocks)
            .map(|j| inner(&(&x[j] + &dxa[j] * ap_a), &(&z[j] + &dza[j] * ad_a)))
            .sum::<f64>()
            / total_dim.max(1) as f64;
        let expon = if mu > 1e-6 { 3f64.max(3.0 * ap_a.min(ad_a).powi(2)) } else { 3.0 };
        let sigma = if mu > 0.0 { (mu_aff / mu).max(0.0).powf(expon).min(1.0) } else { 0.0 };

        // Corrector.
        let corr: Vec<DMatrix<f64>> = (0..nblocks).map(|j| &dxa[j] * &dza[j] * &zinv[j]).collect();
        let (dx, dy, dz) = direction(sigma * mu, Some(&corr));
        let ap_max = step_length(&xchol, &dx);
        let ad_max = step_length(&zchol, &dz);
        let gamma = 0.9 + 0.09 * ap_a.min(ad_a);
        let ap = (gamma * ap_max).min(1.0);
        let ad = (gamma * ad_max).min(1.0);

        if ap < 1e-10 && ad < 1e-10 {
            stalls += 1;
            if stalls >= 3 {
                status = IpmStatus::Stalled;
                break;
            }
        } else {
            stalls = 0;
        }

        for j in 0..nblocks {
            x[j] = sym(&x[j] + &dx[j] * ap);
            z[j] = sym(&z[j] + &dz[j] * ad);
        }
        y += dy * ad;
    }

    if status != IpmStatus::Optimal {
        if let Some((_, bx, by)) = best {
            x = bx;
            y = by;
        }
    }
    IpmResult {
        x,
        y,
        status,
        iterations,
    }
}
