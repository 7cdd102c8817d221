//! Real coordinates of a complex Hermitian `n×n` matrix.
//!
//! Coordinate `k` runs over the `n` diagonal entries, then for every pair
//! `p < q` the real and imaginary parts of `H_pq`. The synthesis basis
//! `P_k` (`E_pp`, `E_pq + E_qp`, `i·E_pq − i·E_qp`) satisfies
//! `H = Σ_k x_k(H)·P_k`, and `w_k(H) = ⟨P_k, H⟩ = Re Tr(P_k H)`.

use nalgebra::DMatrix;

use crate::linop::{c, HermitianOperator, C64};

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |p| ((p + 1)..n).map(move |q| (p, q)))
}

/// `x_k(H)`.
pub fn coordinates(h: &DMatrix<C64>) -> Vec<f64> {
    let n = h.nrows();
    let mut out = Vec::with_capacity(n * n);
    out.extend((0..n).map(|p| h[(p, p)].re));
    for (p, q) in pairs(n) {
        out.push(h[(p, q)].re);
        out.push(h[(p, q)].im);
    }
    out
}

/// `w_k(H) = ⟨P_k, H⟩`.
pub fn weights(h: &DMatrix<C64>) -> Vec<f64> {
    let n = h.nrows();
    let mut out = Vec::with_capacity(n * n);
    out.extend((0..n).map(|p| h[(p, p)].re));
    for (p, q) in pairs(n) {
        out.push(2.0 * h[(p, q)].re);
        out.push(2.0 * h[(p, q)].im);
    }
    out
}

/// `Σ_k y_k P_k`.
pub fn synthesize(n: usize, y: &[f64]) -> HermitianOperator {
    let mut m = DMatrix::zeros(n, n);
    for p in 0..n {
        m[(p, p)] = c(y[p], 0.0);
    }
    for (k, (p, q)) in pairs(n).enumerate() {
        let z = c(y[n + 2 * k], y[n + 2 * k + 1]);
        m[(p, q)] = z;
        m[(q, p)] = z.conj();
    }
    HermitianOperator::from_hermitian_part(m)
}

/// `½·R(H)` with `R(A + iB) = [[A, −B], [B, A]]`.
pub fn realify_half(h: &DMatrix<C64>) -> DMatrix<f64> {
    let n = h.nrows();
    DMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let (bi, bj) = (i / n, j / n);
        let z = h[(i % n, j % n)];
        0.5 * match (bi, bj) {
            (0, 0) | (1, 1) => z.re,
            (0, 1) => -z.im,
            _ => z.im,
        }
    })
}

/// Inverse of `R`: `A + iB` read from a (nearly) structured real matrix.
pub fn unrealify(m: &DMatrix<f64>) -> HermitianOperator {
    let n = m.nrows() / 2;
    let h = DMatrix::from_fn(n, n, |i, j| {
        let re = 0.5 * (m[(i, j)] + m[(i + n, j + n)]);
        let im = 0.5 * (m[(i + n, j)] - m[(i, j + n)]);
        c(re, im)
    });
    HermitianOperator::from_hermitian_part(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linop::hs_inner;

    fn sample(n: usize) -> DMatrix<C64> {
        let m = DMatrix::from_fn(n, n, |i, j| c((i * 3 + j) as f64 * 0.1 - 0.4, (j as f64 - i as f64) * 0.07));
        (&m + m.adjoint()) * c(0.5, 0.0)
    }

    #[test]
    fn synthesis_inverts_coordinates() {
        for n in 1..5 {
            let h = sample(n);
            let back = synthesize(n, &coordinates(&h));
            assert!((back.matrix() - &h).norm() < 1e-15);
        }
    }

    #[test]
    fn weights_are_inner_products() {
        let n = 3;
        let h = sample(n);
        let g = sample(n).map(|z| z * c(0.3, 0.0)) + DMatrix::identity(n, n);
        let lhs = hs_inner(&h, &g);
        let rhs: f64 = weights(&h).iter().zip(coordinates(&g)).map(|(w, x)| w * x).sum();
        assert!((lhs - rhs).abs() < 1e-14);
    }

    #[test]
    fn realification_halves_inner_products() {
        let a = sample(3);
        let b = sample(3).map(|z| z * z);
        let b = (&b + b.adjoint()) * c(0.5, 0.0);
        let ra = realify_half(&a) * 2.0;
        let rb = realify_half(&b) * 2.0;
        assert!((ra.dot(&rb) - 2.0 * hs_inner(&a, &b)).abs() < 1e-13);
        assert!((unrealify(&rb).matrix() - &b).norm() < 1e-15);
    }
}
