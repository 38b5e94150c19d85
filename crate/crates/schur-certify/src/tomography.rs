//! Risk bound for ancilla-free unitary tomography and its query planner.
//!
//! The estimation strategy measures a covariant POVM on ⊕_λ c_λ|φ_λ⁺⟩ and
//! its point risk admits a closed-form upper bound
//!
//!   R(n,d) ≤ (d²−1)(3d−2)(3d−1) / (6(n+1)² − 6(n+1)(3d−1) + (3d−2)(3d−1)(d²+2)),
//!
//! the large-n assembly of a finite sum over partitions of n+1. This module
//! implements the closed form (float and exact rational), the literal finite
//! sum, the beta-function closed forms of the underlying simplex integrals,
//! a Monte-Carlo oracle for those integrals, and the minimal-n planner, which
//! lands at n = O(d²ε^{−1/2}).

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::partitions::{enumerate_partitions, Partition};
use crate::scalar::{ln_factorial, Scalar};

/// Which evaluation route produced a risk value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RiskRegime {
    FiniteSum,
    ClosedForm,
}

/// Risk bound for a given budget of n uses on a d-level system.
#[derive(Debug, Clone, Serialize)]
pub struct RiskProfile<T: Scalar> {
    pub n: u64,
    pub d: u64,
    pub risk_bound: T,
    pub regime: RiskRegime,
}

impl<T: Scalar> RiskProfile<T> {
    pub fn new(n: u64, d: u64, regime: RiskRegime) -> Result<Self> {
        let risk_bound = match regime {
            RiskRegime::ClosedForm => risk_closed_form(n, d)?,
            RiskRegime::FiniteSum => risk_finite_sum(n, d)?,
        };
        Ok(Self { n, d, risk_bound, regime })
    }
}

fn closed_form_parts(n: u64, d: u64) -> (i128, i128) {
    let n1 = (n + 1) as i128;
    let d = d as i128;
    let numerator = (d * d - 1) * (3 * d - 2) * (3 * d - 1);
    let denominator = 6 * n1 * n1 - 6 * n1 * (3 * d - 1) + (3 * d - 2) * (3 * d - 1) * (d * d + 2);
    (numerator, denominator)
}

/// The closed-form risk bound. Positive and below 1 whenever the
/// denominator is positive (which holds for every n ≥ 1, d ≥ 2).
pub fn risk_closed_form<T: Scalar>(n: u64, d: u64) -> Result<T> {
    let exact = risk_closed_form_exact(n, d)?;
    Ok(T::from_f64_lossy(*exact.numer() as f64 / *exact.denom() as f64))
}

/// The closed form as an exact reduced rational.
pub fn risk_closed_form_exact(n: u64, d: u64) -> Result<Ratio<i128>> {
    assert!(n >= 1, "risk bound needs n ≥ 1");
    assert!(d >= 2, "risk bound needs d ≥ 2");
    let (numerator, denominator) = closed_form_parts(n, d);
    if denominator <= 0 {
        return Err(Error::NonpositiveDenominator { n, d });
    }
    Ok(Ratio::new(numerator, denominator))
}

/// Gap coordinates of a partition μ of n+1: q_i = μ_i − μ_{i+1}, the
/// normalized x_i = q_i/(n+1), and the tails T_k = 1 − Σ_{j≤k} j·x_j
/// (T_d = 0 exactly).
#[derive(Debug, Clone, Serialize)]
#[serde(bound(serialize = "T: Serialize"))]
pub struct PartitionGaps<T: Scalar> {
    pub q: Vec<u64>,
    pub x: Vec<T>,
    #[serde(rename = "T")]
    pub t: Vec<T>,
}

impl<T: Scalar> PartitionGaps<T> {
    pub fn new(mu: &Partition) -> Self {
        let padded = mu.parts_padded();
        let d = mu.d();
        let total = T::from_u64_lossy(mu.n());
        let q: Vec<u64> = (0..d)
            .map(|i| padded[i] - if i + 1 < d { padded[i + 1] } else { 0 })
            .collect();
        let x: Vec<T> = q.iter().map(|&qi| T::from_u64_lossy(qi) / total).collect();
        let mut t = Vec::with_capacity(d);
        let mut acc = T::one();
        for (j, &xj) in x.iter().enumerate() {
            acc -= T::from_u64_lossy(j as u64 + 1) * xj;
            t.push(acc);
        }
        Self { q, x, t }
    }

    pub fn is_strict(&self) -> bool {
        self.q.iter().all(|&qi| qi >= 1)
    }

    /// x_{\i} = x_μ/x_i for 1-based i: zero whenever x_μ = 0 (any zero
    /// gap), so every term of a partition with a zero gap vanishes; for
    /// strict partitions it is the product over j ≠ i.
    pub fn x_slash(&self, i: usize) -> T {
        if self.x.iter().any(|&xj| xj == T::zero()) {
            return T::zero();
        }
        self.x
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i - 1)
            .map(|(_, &xj)| xj)
            .fold(T::one(), |acc, xj| acc * xj)
    }

    pub fn x_mu(&self) -> T {
        self.x.iter().fold(T::one(), |acc, &xj| acc * xj)
    }
}

fn finite_sum_guard(n: u64, d: u64) -> Result<()> {
    let limit = match d {
        2 => 200,
        3 => 60,
        _ => 40,
    };
    if n > limit {
        return Err(Error::EnumerationGuard {
            reason: format!("finite risk sum enumerates partitions of n+1; d = {d} is capped at n = {limit}, got n = {n}"),
        });
    }
    Ok(())
}

/// The finite-n risk sum: 1 minus the ratio of the strict-partition
/// quadratic form ((n+1)d·x_μ − x_{\d})² to d times the all-partition form
/// Σ_i ((n+1)x_μ + x_{\i−1} − x_{\i})², with x_{\0} = 0. Converges to the
/// closed form as n grows; small-n discrepancy is expected.
pub fn risk_finite_sum<T: Scalar>(n: u64, d: u64) -> Result<T> {
    assert!(n >= 1, "finite sum needs n ≥ 1");
    assert!(d >= 2, "finite sum needs d ≥ 2");
    finite_sum_guard(n, d)?;
    // below this the sum has no strict partition and the denominator
    // vanishes: the estimation strategy itself is undefined
    if n + 1 < d * (d + 1) / 2 {
        return Err(Error::NonpositiveDenominator { n, d });
    }
    let n1 = T::from_u64_lossy(n + 1);
    let df = T::from_u64_lossy(d);
    let mut numerator = T::zero();
    let mut denominator = T::zero();
    for mu in enumerate_partitions(n + 1, d as usize) {
        let gaps = PartitionGaps::<T>::new(&mu);
        let x_mu = gaps.x_mu();
        if gaps.is_strict() {
            let term = n1 * df * x_mu - gaps.x_slash(d as usize);
            numerator += term * term;
        }
        let mut prev_slash = T::zero(); // x_{\0} = 0
        for i in 1..=d as usize {
            let slash = gaps.x_slash(i);
            let term = n1 * x_mu + prev_slash - slash;
            denominator += term * term;
            prev_slash = slash;
        }
    }
    Ok(T::one() - numerator / (df * denominator))
}

/// Closed forms of the simplex integrals behind the risk assembly, indexed
/// the way they appear there: `x_mu` is ∫x_μ² dx, `x_slash_sq[i−1]` is
/// ∫x_{\i}² dx for i ∈ \[d\], `x_slash_cross[i−1]` is ∫x_{\i}x_{\i+1} dx for
/// i ∈ \[d−1\], and `x_mu_sq_over_xd` is ∫x_μ²/x_d dx. All over the domain
/// {x_i ≥ 0, T_{d−1} ≥ 0}, computed with log-factorials.
#[derive(Debug, Clone, Serialize)]
#[serde(bound(serialize = "T: Serialize"))]
pub struct IntegralClosedForms<T: Scalar> {
    pub x_mu: T,
    pub x_slash_sq: Vec<T>,
    pub x_slash_cross: Vec<T>,
    pub x_mu_sq_over_xd: T,
}

pub fn integral_closed_forms<T: Scalar>(d: u64) -> IntegralClosedForms<T> {
    assert!(d >= 2, "integrals need d ≥ 2");
    let ln2 = T::from_f64_lossy(2.0).ln();
    let ln_d = T::from_u64_lossy(d).ln();
    let ln_fd1 = ln_factorial::<T>(d - 1);
    let df = T::from_u64_lossy(d);
    let x_mu = (df * ln2 - ln_d - ln_d - T::from_f64_lossy(3.0) * ln_fd1 - ln_factorial::<T>(3 * d - 1)).exp();
    let base_sq = (df - T::one()) * ln2 - ln_d - ln_d - T::from_f64_lossy(3.0) * ln_fd1 - ln_factorial::<T>(3 * d - 3);
    let x_slash_sq: Vec<T> = (1..=d)
        .map(|i| {
            let lni = T::from_u64_lossy(i).ln();
            (base_sq + lni + lni).exp()
        })
        .collect();
    let x_slash_cross: Vec<T> = (1..d)
        .map(|i| (base_sq - ln2 + T::from_u64_lossy(i).ln() + T::from_u64_lossy(i + 1).ln()).exp())
        .collect();
    let x_mu_sq_over_xd =
        ((df - T::one()) * ln2 - ln_d - T::from_f64_lossy(3.0) * ln_fd1 - ln_factorial::<T>(3 * d - 2)).exp();
    IntegralClosedForms { x_mu, x_slash_sq, x_slash_cross, x_mu_sq_over_xd }
}

/// The integrand families of the risk assembly, all functions of
/// x_1..x_{d−1} with x_d = T_{d−1}/d.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimplexIntegrand {
    /// x_μ² = (Π_{i∈\[d\]} x_i)².
    MuSquared,
    /// x_{\i}² for 1-based i.
    SlashSquared(u64),
    /// x_{\i}·x_{\i+1} for 1-based i ≤ d−1.
    SlashCross(u64),
    /// x_μ²/x_d = (Π_{i<d} x_i)²·x_d.
    MuSquaredOverLast,
    /// Constant 1: integrates to the domain volume 1/((d−1)!)².
    Constant,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct McEstimate<T> {
    pub estimate: T,
    pub std_error: T,
}

/// Monte-Carlo check of the closed-form integrals: samples the domain
/// uniformly via sorted-uniform spacings of the simplex {y ≥ 0, Σy ≤ 1}
/// mapped through x_j = y_j/j (Jacobian Π 1/j), averages the integrand.
pub fn mc_integral_oracle<T: Scalar>(
    d: u64,
    integrand: SimplexIntegrand,
    samples: u64,
    seed: u64,
) -> McEstimate<T> {
    assert!(d >= 2, "integrals need d ≥ 2");
    assert!(samples >= 10_000, "at least 10⁴ samples for a meaningful σ");
    let k = (d - 1) as usize;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut sum = 0.0f64;
    let mut sum_sq = 0.0f64;
    let mut uniforms = vec![0.0f64; k];
    let mut x = vec![0.0f64; d as usize];
    for _ in 0..samples {
        for u in uniforms.iter_mut() {
            *u = rng.gen::<f64>();
        }
        uniforms.sort_by(|a, b| a.partial_cmp(b).expect("uniforms are finite"));
        let mut prev = 0.0;
        for j in 0..k {
            let y = uniforms[j] - prev;
            prev = uniforms[j];
            x[j] = y / (j + 1) as f64;
        }
        // T_{d−1} = 1 − Σ j·x_j = 1 − Σ y_j; x_d = T_{d−1}/d
        x[k] = (1.0 - prev) / d as f64;
        let f = eval_integrand(&x, integrand);
        sum += f;
        sum_sq += f * f;
    }
    let nf = samples as f64;
    let mean = sum / nf;
    let variance = (sum_sq / nf - mean * mean).max(0.0);
    // simplex volume 1/(d−1)! times the Jacobian 1/(d−1)!
    let mut ln_scale = 0.0;
    for j in 2..d {
        ln_scale -= 2.0 * (j as f64).ln();
    }
    let scale = ln_scale.exp();
    McEstimate {
        estimate: T::from_f64_lossy(mean * scale),
        std_error: T::from_f64_lossy((variance / nf).sqrt() * scale),
    }
}

fn eval_integrand(x: &[f64], integrand: SimplexIntegrand) -> f64 {
    let d = x.len();
    match integrand {
        SimplexIntegrand::MuSquared => {
            let p: f64 = x.iter().product();
            p * p
        }
        SimplexIntegrand::SlashSquared(i) => {
            let p: f64 = x
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != (i - 1) as usize)
                .map(|(_, &v)| v)
                .product();
            p * p
        }
        SimplexIntegrand::SlashCross(i) => {
            let a: f64 = x
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != (i - 1) as usize)
                .map(|(_, &v)| v)
                .product();
            let b: f64 = x
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i as usize)
                .map(|(_, &v)| v)
                .product();
            a * b
        }
        SimplexIntegrand::MuSquaredOverLast => {
            let p: f64 = x[..d - 1].iter().product();
            p * p * x[d - 1]
        }
        SimplexIntegrand::Constant => 1.0,
    }
}

/// Minimal n with risk_closed_form(n, d) ≤ ε: scans the small-n side of the
/// denominator's vertex, then bisects the decreasing branch.
pub fn plan_queries_tomography<T: Scalar>(d: u64, epsilon: T) -> Result<u64> {
    assert!(d >= 2, "planner needs d ≥ 2");
    let eps = epsilon.to_f64().unwrap_or(f64::NAN);
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::EpsilonOutOfRange { epsilon: eps });
    }
    let ok = |n: u64| -> bool {
        matches!(risk_closed_form::<f64>(n, d), Ok(r) if r <= eps)
    };
    // left of the vertex the risk is not monotone; scan it directly
    let vertex = (3 * d).saturating_sub(3) / 2 + 1;
    for n in 1..=vertex {
        if ok(n) {
            return Ok(n);
        }
    }
    let mut lo = vertex; // known: risk(lo) > ε
    let mut hi = vertex.max(1) * 2;
    while !ok(hi) {
        lo = hi;
        hi *= 2;
        assert!(hi < 1 << 60, "risk target unreachable");
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
