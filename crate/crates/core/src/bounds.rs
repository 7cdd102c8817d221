//! Closed-form robustness and advantage bounds for isotropic assemblages
//! measured in a complete MUB family, and the η-thresholds they imply.
//!
//! Pure functions with no solver dependency, so they can referee the SDPs.
//! Dimensions below 2 are a programming error and panic.

use serde::Serialize;

fn check_dim(d: usize) -> f64 {
    assert!(d >= 2, "dimension must be at least 2, got {d}");
    d as f64
}

/// `H_d = Σ_{k=1}^{d} 1/k`.
pub fn harmonic_number(d: usize) -> f64 {
    (1..=d).map(|k| 1.0 / k as f64).sum()
}

/// `√d(√d − 1)/(√d + 1)`.
pub fn maxent_robustness_lb(d: usize) -> f64 {
    let s = check_dim(d).sqrt();
    s * (s - 1.0) / (s + 1.0)
}

/// `√d(√d − 1)/(√d + 1)·η − (d√d − 1)/(d(√d + 1))·(1 − η)`; negative values are vacuous.
pub fn isotropic_robustness_lb(d: usize, eta: f64) -> f64 {
    let df = check_dim(d);
    let s = df.sqrt();
    s * (s - 1.0) / (s + 1.0) * eta - (df * s - 1.0) / (df * (s + 1.0)) * (1.0 - eta)
}

/// `(d + 1)(1 + η(d − 1))/(d(1 + √d))`.
pub fn xi_lb_isotropic(d: usize, eta: f64) -> f64 {
    let df = check_dim(d);
    (df + 1.0) * (1.0 + eta * (df - 1.0)) / (df * (1.0 + df.sqrt()))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Thresholds {
    /// `(H_d − 1)/(d − 1)`: unsteerable at or below.
    pub unsteerable: f64,
    /// `1/(√d + 1/(d + √d + 1))`: the advantage bound exceeds 1 above.
    pub advantage: f64,
    /// `(2 + √d(3 + d))/(2 + 3√d + 2d² + d^{5/2})`: the robustness bound
    /// grows with `d` above.
    pub dim_scaling: f64,
}

pub fn thresholds(d: usize) -> Thresholds {
    let df = check_dim(d);
    let s = df.sqrt();
    Thresholds {
        unsteerable: (harmonic_number(d) - 1.0) / (df - 1.0),
        advantage: 1.0 / (s + 1.0 / (df + s + 1.0)),
        dim_scaling: (2.0 + s * (3.0 + df)) / (2.0 + 3.0 * s + 2.0 * df * df + df * df * s),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundSet {
    pub d: usize,
    pub eta: f64,
    pub r_lb_maxent: f64,
    pub r_lb_isotropic: f64,
    pub xi_lb: f64,
    pub eta_threshold_unsteerable: f64,
    pub eta_threshold_advantage: f64,
    pub eta_threshold_dim_scaling: f64,
}

pub fn bound_set(d: usize, eta: f64) -> BoundSet {
    let t = thresholds(d);
    BoundSet {
        d,
        eta,
        r_lb_maxent: maxent_robustness_lb(d),
        r_lb_isotropic: isotropic_robustness_lb(d, eta),
        xi_lb: xi_lb_isotropic(d, eta),
        eta_threshold_unsteerable: t.unsteerable,
        eta_threshold_advantage: t.advantage,
        eta_threshold_dim_scaling: t.dim_scaling,
    }
}

/// One row of the advantage-bound surface over `(d, η)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SurfaceRow {
    pub d: usize,
    pub eta: f64,
    pub xi_lb: f64,
    #[serde(rename = "R_lb")]
    pub r_lb: f64,
    pub unsteerable_threshold: f64,
    pub advantage_threshold: f64,
}

/// Rows in `d`-major order, `η` in the order given.
pub fn fig3_surface(dims: &[usize], etas: &[f64]) -> Vec<SurfaceRow> {
    dims.iter()
        .flat_map(|&d| {
            let t = thresholds(d);
            etas.iter().map(move |&eta| SurfaceRow {
                d,
                eta,
                xi_lb: xi_lb_isotropic(d, eta),
                r_lb: isotropic_robustness_lb(d, eta),
                unsteerable_threshold: t.unsteerable,
                advantage_threshold: t.advantage,
            })
        })
        .collect()
}
