//! Complete families of mutually unbiased bases in prime dimension.
//!
//! Conventions (the canonical witnesses inherit them):
//! - `d = 2`: basis 0 is the X eigenbasis `|±⟩`, basis 1 the Y eigenbasis
//!   `|±i⟩`, basis 2 the computational (Z) basis.
//! - odd prime `d`: basis `x < d` has vectors
//!   `|φ^a_x⟩ = d^{-1/2} Σ_s ω^{x s² + a s} |s⟩` with `ω = e^{2πi/d}`, and
//!   basis `d` is the computational basis.

use std::f64::consts::PI;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::assemblage::Measurements;
use crate::error::{Error, Result};
use crate::linop::{c, HermitianOperator, Ket, C64};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MubFamily {
    pub dim: usize,
    /// `bases[x][a] = |φ^a_x⟩`.
    pub bases: Vec<Vec<Ket>>,
}

pub fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// Builds the `d + 1` bases for prime `d`.
pub fn mub_family(d: usize) -> Result<MubFamily> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    if !is_prime(d) {
        return Err(Error::Unsupported(format!(
            "mutually unbiased bases are only constructed for prime dimensions; {d} is not prime"
        )));
    }
    let bases = if d == 2 { qubit_bases() } else { odd_prime_bases(d) };
    Ok(MubFamily { dim: d, bases })
}

fn qubit_bases() -> Vec<Vec<Ket>> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let ket = |a: C64, b: C64| Ket::new_unchecked(DVector::from_vec(vec![a, b]));
    vec![
        vec![ket(c(h, 0.0), c(h, 0.0)), ket(c(h, 0.0), c(-h, 0.0))],
        vec![ket(c(h, 0.0), c(0.0, h)), ket(c(h, 0.0), c(0.0, -h))],
        vec![Ket::basis(2, 0), Ket::basis(2, 1)],
    ]
}

fn odd_prime_bases(d: usize) -> Vec<Vec<Ket>> {
    let norm = 1.0 / (d as f64).sqrt();
    let mut bases: Vec<Vec<Ket>> = (0..d)
        .map(|x| {
            (0..d)
                .map(|a| {
                    let amps = (0..d).map(|s| {
                        // Exponent reduced mod d before converting to an angle.
                        let k = (x * s * s + a * s) % d;
                        C64::from_polar(norm, 2.0 * PI * k as f64 / d as f64)
                    });
                    Ket::new_unchecked(DVector::from_iterator(d, amps))
                })
                .collect()
        })
        .collect();
    bases.push((0..d).map(|a| Ket::basis(d, a)).collect());
    bases
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    /// `max |⟨φ^a_x|φ^b_x⟩ − δ_ab|` over every basis.
    pub orthonormality_deviation: f64,
    /// `max ||⟨φ^a_x|φ^b_y⟩| − 1/√d|` over `x ≠ y`.
    pub unbiasedness_deviation: f64,
    pub violations: Vec<String>,
    pub passed: bool,
}

pub fn verify_unbiased(f: &MubFamily, tol: f64) -> ValidationReport {
    let d = f.dim;
    let target = 1.0 / (d as f64).sqrt();
    let mut ortho: f64 = 0.0;
    let mut unbiased: f64 = 0.0;
    let mut violations = Vec::new();

    for (x, basis) in f.bases.iter().enumerate() {
        if basis.len() != d || basis.iter().any(|k| k.dim() != d) {
            violations.push(format!("basis {x} does not hold {d} vectors of dimension {d}"));
            continue;
        }
        for a in 0..d {
            for b in 0..d {
                let want = if a == b { 1.0 } else { 0.0 };
                let dev = (basis[a].overlap(&basis[b]) - c(want, 0.0)).norm();
                if dev > tol {
                    violations.push(format!(
                        "orthonormality: basis {x}, vectors {a},{b} deviate by {dev:.3e}"
                    ));
                }
                ortho = ortho.max(dev);
            }
        }
    }
    for x in 0..f.bases.len() {
        for y in (x + 1)..f.bases.len() {
            for (a, u) in f.bases[x].iter().enumerate() {
                for (b, v) in f.bases[y].iter().enumerate() {
                    if u.dim() != v.dim() {
                        continue;
                    }
                    let dev = (u.overlap(v).norm() - target).abs();
                    if dev > tol {
                        violations.push(format!(
                            "unbiasedness: bases {x},{y}, vectors {a},{b} deviate by {dev:.3e}"
                        ));
                    }
                    unbiased = unbiased.max(dev);
                }
            }
        }
    }
    let passed = violations.is_empty();
    ValidationReport {
        orthonormality_deviation: ortho,
        unbiasedness_deviation: unbiased,
        violations,
        passed,
    }
}

/// Projective measurements onto the entrywise conjugates `|φ^{*a}_x⟩`.
pub fn conjugate_projectors(f: &MubFamily) -> Measurements {
    let effects: Vec<Vec<HermitianOperator>> = f
        .bases
        .iter()
        .map(|basis| basis.iter().map(|k| k.conjugate().projector()).collect())
        .collect();
    Measurements::from_effects_unchecked(f.dim, effects)
}
