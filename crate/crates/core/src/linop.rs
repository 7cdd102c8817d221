//! Dense complex linear algebra shared by every other module.
//!
//! Matrices are `nalgebra` dense complex matrices wrapped in small newtypes
//! that carry the invariants the rest of the crate relies on: finiteness,
//! Hermiticity, positivity and normalisation. All Hermitian spectral work
//! (exponentials, norms, PSD tests) goes through [`eigh`].

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Centralised numerical tolerances.
pub mod tol {
    /// Relative Hermiticity tolerance on `‖M − M†‖_F`.
    pub const HERMITICITY: f64 = 1e-12;
    /// Smallest eigenvalue accepted as "positive semidefinite".
    pub const PSD: f64 = 1e-10;
    /// Trace normalisation tolerance.
    pub const TRACE: f64 = 1e-10;
    /// Default interior-point tolerance.
    pub const SOLVER: f64 = 1e-7;
}

pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// A finite dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Self::from_matrix(DMatrix::from_row_slice(rows, cols, &entries))
    }

    pub fn from_matrix(m: DMatrix<C64>) -> Result<Self> {
        check_finite(&m)?;
        Ok(Self(m))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn frobenius_distance(&self, other: &Self) -> f64 {
        (&self.0 - &other.0).norm()
    }
}

fn check_finite(m: &DMatrix<C64>) -> Result<()> {
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let z = m[(i, j)];
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite { row: i, col: j });
            }
        }
    }
    Ok(())
}

/// Hermitian part `(M + M†)/2`.
pub fn hermitian_part(m: &DMatrix<C64>) -> DMatrix<C64> {
    (m + m.adjoint()) * c(0.5, 0.0)
}

/// A square Hermitian matrix. Construction symmetrises away rounding drift
/// after checking that the input is Hermitian within tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator(DMatrix<C64>);

impl HermitianOperator {
    pub fn new(m: DMatrix<C64>) -> Result<Self> {
        Self::with_tolerance(m, tol::HERMITICITY)
    }

    /// Like [`HermitianOperator::new`] but with an explicit relative
    /// Hermiticity tolerance; used for solver outputs.
    pub fn with_tolerance(m: DMatrix<C64>, rel_tol: f64) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        check_finite(&m)?;
        let deviation = (&m - m.adjoint()).norm();
        if deviation > rel_tol * m.norm().max(1.0) {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self(hermitian_part(&m)))
    }

    /// Wraps a matrix that is Hermitian by construction, symmetrising it.
    pub(crate) fn from_hermitian_part(m: DMatrix<C64>) -> Self {
        Self(hermitian_part(&m))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let v = DVector::from_iterator(diag.len(), diag.iter().map(|&x| c(x, 0.0)));
        Self(DMatrix::from_diagonal(&v))
    }

    pub fn identity(d: usize) -> Self {
        Self(DMatrix::identity(d, d))
    }

    pub fn zeros(d: usize) -> Self {
        Self(DMatrix::zeros(d, d))
    }

    /// Rank-one projector `|ψ⟩⟨ψ|` (not normalised if `ψ` is not).
    pub fn projector(ket: &DVector<C64>) -> Self {
        Self::from_hermitian_part(ket * ket.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    /// Real inner product `Re Tr(A B)`.
    pub fn inner(&self, other: &Self) -> f64 {
        hs_inner(&self.0, &other.0)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(&self.0 * c(s, 0.0))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(&self.0 - &other.0)
    }

    pub fn eigenvalues(&self) -> Result<DVector<f64>> {
        Ok(eigh(self)?.0)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.eigenvalues()?[0])
    }

    pub fn max_eigenvalue(&self) -> Result<f64> {
        let ev = self.eigenvalues()?;
        Ok(ev[ev.len() - 1])
    }

    /// Projection onto the PSD cone: negative eigenvalues set to zero.
    pub fn psd_part(&self) -> Result<Self> {
        let (values, vectors) = eigh(self)?;
        Ok(spectral_map(&values, &vectors, |lam| lam.max(0.0)))
    }

    pub fn frobenius_distance(&self, other: &Self) -> f64 {
        (&self.0 - &other.0).norm()
    }

    pub fn as_complex(&self) -> ComplexMatrix {
        ComplexMatrix(self.0.clone())
    }
}

/// `Re Tr(A B)` for square matrices of equal size.
pub fn hs_inner(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for k in 0..n {
            acc += (a[(i, k)] * b[(k, i)]).re;
        }
    }
    acc
}

/// A positive semidefinite, unit-trace Hermitian operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator(HermitianOperator);

impl DensityOperator {
    pub fn new(op: HermitianOperator) -> Result<Self> {
        let trace = op.trace();
        if (trace - 1.0).abs() > tol::TRACE {
            return Err(Error::TraceNotOne { trace });
        }
        let min_eigenvalue = op.min_eigenvalue()?;
        if min_eigenvalue < -tol::PSD {
            return Err(Error::NotPsd { min_eigenvalue });
        }
        Ok(Self(op))
    }

    pub fn from_ket(ket: &Ket) -> Self {
        Self(HermitianOperator::projector(ket.amplitudes()))
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self(HermitianOperator::identity(d).scale(1.0 / d as f64))
    }

    pub fn op(&self) -> &HermitianOperator {
        &self.0
    }

    pub fn into_op(self) -> HermitianOperator {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        self.0.matrix()
    }
}

/// A unit vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Ket(DVector<C64>);

impl Ket {
    pub fn new(amplitudes: DVector<C64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self(amplitudes))
    }

    /// Skips the normalisation check; used for injected-defect tests and by
    /// validators that report rather than reject.
    pub fn new_unchecked(amplitudes: DVector<C64>) -> Self {
        Self(amplitudes)
    }

    pub fn basis(d: usize, i: usize) -> Self {
        let mut v = DVector::zeros(d);
        v[i] = c(1.0, 0.0);
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.0
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &Ket) -> C64 {
        self.0.dotc(&other.0)
    }

    pub fn conjugate(&self) -> Ket {
        Ket(self.0.map(|z| z.conj()))
    }

    pub fn projector(&self) -> HermitianOperator {
        HermitianOperator::projector(&self.0)
    }
}

/// Eigendecomposition of a Hermitian operator: eigenvalues ascending and the
/// matching unitary of column eigenvectors.
pub fn eigh(h: &HermitianOperator) -> Result<(DVector<f64>, DMatrix<C64>)> {
    eigh_matrix(h.matrix())
}

pub(crate) fn eigh_matrix(m: &DMatrix<C64>) -> Result<(DVector<f64>, DMatrix<C64>)> {
    let sym = hermitian_part(m);
    let n = sym.nrows();
    let eig = nalgebra::SymmetricEigen::try_new(sym, f64::EPSILON, 0).ok_or(Error::EigenFailure)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok((values, vectors))
}

/// Kronecker product with A-major block ordering: row index `i_A·d_B + i_B`.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix(a.0.kronecker(&b.0))
}

pub fn tensor_hermitian(a: &HermitianOperator, b: &HermitianOperator) -> HermitianOperator {
    HermitianOperator::from_hermitian_part(a.0.kronecker(&b.0))
}

/// Which factor of a bipartite space survives a partial trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Partial trace over the subsystem *not* named by `keep`.
pub fn partial_trace(
    m: &ComplexMatrix,
    dims: (usize, usize),
    keep: Subsystem,
) -> Result<ComplexMatrix> {
    let (da, db) = dims;
    if m.rows() != m.cols() || m.rows() != da * db {
        return Err(Error::DimensionMismatch(format!(
            "partial trace of a {}x{} matrix over dims ({da}, {db})",
            m.rows(),
            m.cols()
        )));
    }
    let src = &m.0;
    let out = match keep {
        Subsystem::B => DMatrix::from_fn(db, db, |i, j| {
            (0..da).map(|k| src[(k * db + i, k * db + j)]).sum()
        }),
        Subsystem::A => DMatrix::from_fn(da, da, |i, j| {
            (0..db).map(|k| src[(i * db + k, j * db + k)]).sum()
        }),
    };
    Ok(ComplexMatrix(out))
}

/// `exp(scale · h)` through the eigendecomposition of `h`.
pub fn matrix_exp_hermitian(h: &HermitianOperator, scale: f64) -> Result<HermitianOperator> {
    let (values, vectors) = eigh(h)?;
    Ok(spectral_map(&values, &vectors, |lam| (scale * lam).exp()))
}

/// `V f(Λ) V†`.
pub fn spectral_map(
    values: &DVector<f64>,
    vectors: &DMatrix<C64>,
    f: impl Fn(f64) -> f64,
) -> HermitianOperator {
    let n = values.len();
    let mut scaled = vectors.clone();
    for j in 0..n {
        let w = c(f(values[j]), 0.0);
        for i in 0..n {
            scaled[(i, j)] *= w;
        }
    }
    HermitianOperator::from_hermitian_part(scaled * vectors.adjoint())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MatrixNorms {
    /// Largest singular value.
    pub operator: f64,
    pub frobenius: f64,
}

pub fn norms(m: &ComplexMatrix) -> Result<MatrixNorms> {
    let gram = HermitianOperator::from_hermitian_part(m.0.adjoint() * &m.0);
    let top = if gram.dim() == 0 { 0.0 } else { gram.max_eigenvalue()? };
    Ok(MatrixNorms {
        operator: top.max(0.0).sqrt(),
        frobenius: m.0.norm(),
    })
}

/// Operator norm of a Hermitian operator: largest absolute eigenvalue.
pub fn hermitian_operator_norm(h: &HermitianOperator) -> Result<f64> {
    let ev = h.eigenvalues()?;
    Ok(ev[0].abs().max(ev[ev.len() - 1].abs()))
}

// JSON: nested row-major arrays of [re, im] pairs.

pub(crate) fn matrix_to_json(m: &DMatrix<C64>) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub(crate) fn matrix_from_json(rows: Vec<Vec<[f64; 2]>>) -> Result<DMatrix<C64>> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Parse("ragged matrix rows".into()));
    }
    let entries: Vec<C64> = rows.into_iter().flatten().map(|[re, im]| c(re, im)).collect();
    let m = DMatrix::from_row_slice(nrows, ncols, &entries);
    check_finite(&m)?;
    Ok(m)
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        matrix_to_json(&self.0).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
        matrix_from_json(rows)
            .map(ComplexMatrix)
            .map_err(serde::de::Error::custom)
    }
}

impl Serialize for HermitianOperator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        matrix_to_json(&self.0).serialize(s)
    }
}

impl<'de> Deserialize<'de> for HermitianOperator {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
        matrix_from_json(rows)
            .and_then(HermitianOperator::new)
            .map_err(serde::de::Error::custom)
    }
}

impl Serialize for DensityOperator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DensityOperator {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let op = HermitianOperator::deserialize(d)?;
        DensityOperator::new(op).map_err(serde::de::Error::custom)
    }
}

impl Serialize for Ket {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0
            .iter()
            .map(|z| [z.re, z.im])
            .collect::<Vec<_>>()
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Ket {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let amps = Vec::<[f64; 2]>::deserialize(d)?;
        let v = DVector::from_iterator(amps.len(), amps.into_iter().map(|[re, im]| c(re, im)));
        Ket::new(v).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cm(rows: usize, cols: usize, re: &[f64]) -> ComplexMatrix {
        ComplexMatrix::new(rows, cols, re.iter().map(|&x| c(x, 0.0)).collect()).unwrap()
    }

    fn bell() -> ComplexMatrix {
        let mut m = DMatrix::zeros(4, 4);
        for &i in &[0usize, 3] {
            for &j in &[0usize, 3] {
                m[(i, j)] = c(0.5, 0.0);
            }
        }
        ComplexMatrix(m)
    }

    fn random_matrix(rows: usize, cols: usize, vals: &[f64]) -> DMatrix<C64> {
        DMatrix::from_fn(rows, cols, |i, j| {
            let k = 2 * (i * cols + j);
            c(vals[k % vals.len()], vals[(k + 1) % vals.len()])
        })
    }

    #[test]
    fn tensor_identity_and_projectors() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(tensor(&i2, &i2), ComplexMatrix::identity(4));

        let p0 = cm(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let blocks = tensor(&p0, &i2);
        assert_eq!(blocks, cm(4, 4, &[1., 0., 0., 0., 0., 1., 0., 0., 0., 0., 0., 0., 0., 0., 0., 0.]));

        let p1 = cm(2, 2, &[0.0, 0.0, 0.0, 1.0]);
        let prod = tensor(&p0, &p1);
        // |0⟩⊗|1⟩ is basis vector 1 in A-major ordering.
        let mut expected = DMatrix::zeros(4, 4);
        expected[(1, 1)] = c(1.0, 0.0);
        assert_eq!(prod.matrix(), &expected);
    }

    #[test]
    fn partial_trace_examples() {
        let mut m = DMatrix::zeros(4, 4);
        m[(0, 0)] = c(1.0, 0.0);
        let r = partial_trace(&ComplexMatrix(m), (2, 2), Subsystem::B).unwrap();
        assert_eq!(r, cm(2, 2, &[1.0, 0.0, 0.0, 0.0]));

        let r = partial_trace(&bell(), (2, 2), Subsystem::B).unwrap();
        assert!(r.frobenius_distance(&cm(2, 2, &[0.5, 0.0, 0.0, 0.5])) < 1e-15);

        // (|0⟩⟨0| ⊗ I) Φ⁺ keeps only the |00⟩ row of Φ⁺.
        let p0 = cm(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let lhs = tensor(&p0, &ComplexMatrix::identity(2));
        let prod = ComplexMatrix(lhs.matrix() * bell().matrix());
        let r = partial_trace(&prod, (2, 2), Subsystem::B).unwrap();
        assert!(r.frobenius_distance(&cm(2, 2, &[0.5, 0.0, 0.0, 0.0])) < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_bad_dims() {
        let err = partial_trace(&ComplexMatrix::identity(4), (2, 3), Subsystem::A).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch(_)));
    }

    #[test]
    fn exp_examples() {
        let zero = HermitianOperator::zeros(3);
        let e = matrix_exp_hermitian(&zero, -1.0).unwrap();
        assert!(e.frobenius_distance(&HermitianOperator::identity(3)) < 1e-14);

        let h = HermitianOperator::from_real_diagonal(&[0.0, 1.0]);
        let e = matrix_exp_hermitian(&h, -1.0).unwrap();
        let expected = HermitianOperator::from_real_diagonal(&[1.0, (-1.0f64).exp()]);
        assert!(e.frobenius_distance(&expected) < 1e-14);

        let sx = HermitianOperator::new(cm(2, 2, &[0.0, 1.0, 1.0, 0.0]).into_matrix()).unwrap();
        for &t in &[-2.0, -0.3, 0.7, 3.0] {
            let e = matrix_exp_hermitian(&sx, t).unwrap();
            let expected = HermitianOperator::identity(2)
                .scale(f64::cosh(t))
                .add(&sx.scale(f64::sinh(t)));
            assert!(e.frobenius_distance(&expected) < 1e-12 * f64::cosh(t));
        }
    }

    #[test]
    fn norm_examples() {
        for d in 1..6 {
            let n = norms(&ComplexMatrix::identity(d)).unwrap();
            assert!((n.operator - 1.0).abs() < 1e-14);
            assert!((n.frobenius - (d as f64).sqrt()).abs() < 1e-14);
        }
        let n = norms(&cm(2, 2, &[0.0, 1.0, 1.0, 0.0])).unwrap();
        assert!((n.operator - 1.0).abs() < 1e-14);
        assert!((n.frobenius - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn hermitian_rejects_non_hermitian() {
        let m = cm(2, 2, &[0.0, 1.0, 0.0, 0.0]).into_matrix();
        assert!(matches!(HermitianOperator::new(m), Err(Error::NotHermitian { .. })));
        let m = cm(2, 3, &[0.0; 6]).into_matrix();
        assert!(matches!(HermitianOperator::new(m), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn non_finite_rejected() {
        let err = ComplexMatrix::new(1, 2, vec![c(0.0, 0.0), c(f64::NAN, 0.0)]).unwrap_err();
        assert_eq!(err, Error::NonFinite { row: 0, col: 1 });
    }

    #[test]
    fn density_operator_checks() {
        assert!(matches!(
            DensityOperator::new(HermitianOperator::identity(2)),
            Err(Error::TraceNotOne { .. })
        ));
        let bad = HermitianOperator::from_real_diagonal(&[1.5, -0.5]);
        assert!(matches!(DensityOperator::new(bad), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn json_round_trip() {
        let m = ComplexMatrix::new(2, 2, vec![c(1.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(2.0, 0.0)])
            .unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, "[[[1.0,0.0],[0.0,-1.0]],[[0.0,1.0],[2.0,0.0]]]");
        let back: HermitianOperator = serde_json::from_str(&s).unwrap();
        assert_eq!(back.matrix(), m.matrix());
        assert!(serde_json::from_str::<HermitianOperator>("[[[1,0],[1,0]],[[0,0],[1,0]]]").is_err());
    }

    proptest! {
        #[test]
        fn partial_trace_of_product(da in 2usize..=5, db in 2usize..=5,
                                    vals in prop::collection::vec(-1.0f64..1.0, 64)) {
            let a = ComplexMatrix(random_matrix(da, da, &vals));
            let b = ComplexMatrix(random_matrix(db, db, &vals[7..]));
            let ab = tensor(&a, &b);
            let ra = partial_trace(&ab, (da, db), Subsystem::A).unwrap();
            let expected = a.matrix() * b.trace();
            prop_assert!((ra.matrix() - expected).norm() < 1e-12);
            let rb = partial_trace(&ab, (da, db), Subsystem::B).unwrap();
            prop_assert!((rb.matrix() - b.matrix() * a.trace()).norm() < 1e-12);
            prop_assert!((rb.trace() - ab.trace()).norm() < 1e-12);
        }

        #[test]
        fn exp_inverse_and_hermiticity(d in 2usize..=6, s in -2.0f64..2.0,
                                       vals in prop::collection::vec(-1.0f64..1.0, 72)) {
            let h = HermitianOperator::from_hermitian_part(random_matrix(d, d, &vals));
            let e1 = matrix_exp_hermitian(&h, s).unwrap();
            let e2 = matrix_exp_hermitian(&h, -s).unwrap();
            let prod = e1.matrix() * e2.matrix();
            prop_assert!((prod - DMatrix::<C64>::identity(d, d)).norm() < 1e-9);
            prop_assert!((e1.matrix() - e1.matrix().adjoint()).norm() < 1e-11);
            prop_assert!(e1.min_eigenvalue().unwrap() > 0.0);
        }

        #[test]
        fn operator_norm_below_frobenius(d in 2usize..=7,
                                         vals in prop::collection::vec(-3.0f64..3.0, 98)) {
            let m = ComplexMatrix(random_matrix(d, d, &vals));
            let n = norms(&m).unwrap();
            prop_assert!(n.operator <= n.frobenius * (1.0 + 1e-12));
        }
    }
}
