//! Quadrature rules for resolvent integrals.
//!
//! Every rule is normalized so that `Σ_ℓ ω_ℓ g(z_ℓ)` approximates the
//! integral the engines need without further prefactors: `(1/2πi)∮ g(σ)dσ`
//! for contour rules, and `f(z) = Σ_ℓ ω_ℓ (z_ℓ − z)⁻¹` directly for the
//! Stieltjes rule.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::functions::FunctionSpec;
use crate::c64;

/// Circle `{c + r e^{iθ}}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleContour {
    pub center: c64,
    pub radius: f64,
}

impl CircleContour {
    pub fn new(center: c64, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) || !center.re.is_finite() || !center.im.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "circle needs a finite center and positive radius, got c = {center}, r = {radius}"
            )));
        }
        Ok(Self { center, radius })
    }

    /// Strictly inside the circle.
    pub fn encloses(&self, z: c64) -> bool {
        (z - self.center).norm() < self.radius
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleKind {
    Contour,
    Stieltjes,
}

#[derive(Debug, Clone)]
pub struct QuadratureRule {
    nodes: Vec<c64>,
    weights: Vec<c64>,
    kind: RuleKind,
    contour: Option<CircleContour>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[c64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[c64] {
        &self.weights
    }

    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    pub fn contour(&self) -> Option<CircleContour> {
        self.contour
    }

    /// `Σ_ℓ ω_ℓ g(z_ℓ)`, accumulated in ascending node order.
    pub fn sum<G: FnMut(c64) -> c64>(&self, mut g: G) -> c64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(c64::new(0.0, 0.0), |acc, (&z, &w)| acc + w * g(z))
    }

    /// Per-node factors `μ_ℓ` multiplying the resolvent solutions.
    ///
    /// Contour rules give `ω_ℓ f(z_ℓ)`; the Stieltjes rule already carries
    /// the density of its function in the weights, so `μ_ℓ = ω_ℓ`.
    pub fn coefficients(&self, fun: &FunctionSpec) -> Result<Vec<c64>> {
        match self.kind {
            RuleKind::Contour => {
                if let Some(circle) = &self.contour {
                    fun.check_contour(circle)?;
                }
                self.nodes
                    .iter()
                    .zip(&self.weights)
                    .map(|(&z, &w)| Ok(w * fun.scalar(z)?))
                    .collect()
            }
            RuleKind::Stieltjes => {
                if !fun.is_inverse_sqrt() {
                    return Err(Error::InvalidArgument(format!(
                        "the Stieltjes rule represents z^(-1/2), not {}",
                        fun.name()
                    )));
                }
                Ok(self.weights.clone())
            }
        }
    }
}

/// `n_quad`-point trapezoidal rule on a circle.
pub fn trapezoid_contour(contour: CircleContour, n_quad: usize) -> Result<QuadratureRule> {
    if n_quad == 0 {
        return Err(Error::InvalidArgument("n_quad must be positive".into()));
    }
    let dtheta = 2.0 * PI / n_quad as f64;
    let mut nodes = Vec::with_capacity(n_quad);
    let mut weights = Vec::with_capacity(n_quad);
    for l in 0..n_quad {
        let e = c64::from_polar(contour.radius, l as f64 * dtheta);
        nodes.push(contour.center + e);
        // 1/(2πi) · i r e^{iθ} · Δθ
        weights.push(e / n_quad as f64);
    }
    Ok(QuadratureRule { nodes, weights, kind: RuleKind::Contour, contour: Some(contour) })
}

/// Gauss–Legendre nodes (ascending) and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
                p1 = z;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

/// Rule for `z^{-1/2} = (2/π)∫₀^∞ (t² + z)⁻¹ dt`, mapped to `u ∈ (−1, 1]` by
/// `t = (1 − u)/(1 + u)` and integrated with Gauss–Legendre. Nodes are
/// `σ_ℓ = −t_ℓ² < 0`; `Σ ω_ℓ (σ_ℓ − z)⁻¹ ≈ z^{-1/2}` off `(−∞, 0]`.
pub fn stieltjes_invsqrt(n_quad: usize) -> Result<QuadratureRule> {
    if n_quad == 0 {
        return Err(Error::InvalidArgument("n_quad must be positive".into()));
    }
    let (u, w) = gauss_legendre(n_quad);
    let mut nodes = Vec::with_capacity(n_quad);
    let mut weights = Vec::with_capacity(n_quad);
    for (&ul, &wl) in u.iter().zip(&w) {
        let t = (1.0 - ul) / (1.0 + ul);
        let jac = 2.0 / ((1.0 + ul) * (1.0 + ul));
        nodes.push(c64::new(-t * t, 0.0));
        weights.push(c64::new(-(2.0 / PI) * wl * jac, 0.0));
    }
    Ok(QuadratureRule { nodes, weights, kind: RuleKind::Stieltjes, contour: None })
}

/// Circle enclosing `estimates`.
///
/// Without `fun`, or for an entire `fun`, the circle is centered at the
/// centroid with the enclosing radius inflated by `1 + margin` (a single
/// point gets `margin·max(|λ|, 1)`). When `fun` has a singular set, the
/// center is the middle of the bounding box and the radius the geometric
/// mean of the enclosing radius and the distance `d` to the singular set,
/// which balances the two convergence rates of the trapezoid rule;
/// `margin` is then unused.
pub fn suggest_contour(
    estimates: &[c64],
    margin: f64,
    fun: Option<&FunctionSpec>,
) -> Result<CircleContour> {
    if estimates.is_empty() {
        return Err(Error::InvalidArgument("no spectrum estimates given".into()));
    }
    if !(margin > 0.0) {
        return Err(Error::InvalidArgument("margin must be positive".into()));
    }
    let spread_from = |c: c64| estimates.iter().map(|z| (z - c).norm()).fold(0.0, f64::max);
    let singular = fun.filter(|f| f.clearance(c64::new(0.0, 0.0)).is_some());
    let Some(fun) = singular else {
        let center = estimates.iter().sum::<c64>() / estimates.len() as f64;
        let floor = margin * center.norm().max(1.0);
        return CircleContour::new(center, (spread_from(center) * (1.0 + margin)).max(floor));
    };
    let (mut lo, mut hi) = (estimates[0], estimates[0]);
    for z in estimates {
        lo = c64::new(lo.re.min(z.re), lo.im.min(z.im));
        hi = c64::new(hi.re.max(z.re), hi.im.max(z.im));
    }
    let center = (lo + hi) * 0.5;
    let spread = spread_from(center);
    let floor = margin * center.norm().max(1.0);
    let d = fun.clearance(center).expect("checked above");
    if spread >= d {
        return Err(Error::InvalidArgument(format!(
            "no circle centered at {center} encloses the estimates and avoids the singular set"
        )));
    }
    let radius = if spread > 0.0 { (spread * d).sqrt() } else { floor.min(0.5 * d) };
    CircleContour::new(center, radius)
}
