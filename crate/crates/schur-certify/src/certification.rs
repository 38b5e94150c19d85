//! The certification testers: planners, exact acceptance probabilities, and
//! soundness bounds.
//!
//! Acceptance probabilities are computed at the character level via
//! p = (|χ_λ(U†V)| / dim H_λ)², never by building 2ⁿ-dimensional states, so
//! they are exact up to eigendecomposition rounding. The two qubit testers
//! use λ = (n−1,1); the qudit testers use the staircase family with an odd
//! step s, where the pair-counting lemma with m well-separated eigenphase
//! pairs gives |χ|/dim ≤ (2/(sε))^m.

use num_bigint::BigUint;
use num_complex::Complex;
use num_traits::One;
use serde::{Serialize, Serializer};

use crate::characters::{char_spin, char_staircase, CharacterValue};
use crate::error::{Error, Result};
use crate::partitions::{
    biguint_as_number, dim_irrep, dim_multiplicity, staircase_partition, Partition,
};
use crate::scalar::{choose2, Scalar};
use crate::unitary::{distance, eigenphases, EigenPhases, UnitaryMatrix};

/// Slack used when comparing against analytically exact thresholds, so that
/// instances constructed exactly on a boundary are classified stably.
const BOUNDARY_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TesterKind {
    QubitKnownV,
    QubitSwapPair,
    QuditKnownV,
    QuditSwapPair,
}

impl TesterKind {
    pub fn is_qubit(self) -> bool {
        matches!(self, Self::QubitKnownV | Self::QubitSwapPair)
    }

    pub fn is_swap(self) -> bool {
        matches!(self, Self::QubitSwapPair | Self::QuditSwapPair)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::QubitKnownV => "qubit_known_v",
            Self::QubitSwapPair => "qubit_swap_pair",
            Self::QuditKnownV => "qudit_known_v",
            Self::QuditSwapPair => "qudit_swap_pair",
        }
    }
}

impl std::fmt::Display for TesterKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Everything needed to run or audit one certification: the tester family,
/// its partition, copies per round, rounds, and total query counts.
#[derive(Debug, Clone, Serialize)]
pub struct TesterPlan<T: Scalar> {
    pub kind: TesterKind,
    pub d: usize,
    pub epsilon: T,
    /// Copies of the unknown unitary consumed per round.
    pub n: u64,
    /// Staircase step (qudit kinds only, always odd).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<u64>,
    pub lambda: Partition,
    pub rounds: u32,
    #[serde(rename = "total_uses_U")]
    pub total_uses_u: u64,
    #[serde(rename = "total_uses_V")]
    pub total_uses_v: u64,
}

/// Exact acceptance probability for one instance, with the soundness bound
/// that applies to it.
///
/// `bound` is an upper bound on `p_accept` valid under the promise
/// dist(U,V) ≥ ε; it is 1 when the instance is closer than ε (no claim).
#[derive(Debug, Clone, Serialize)]
#[serde(bound(serialize = "T: Serialize"))]
pub struct AcceptanceReport<T: Scalar> {
    pub p_accept: T,
    #[serde(serialize_with = "complex_pair")]
    pub character: Complex<T>,
    /// |χ_λ(U†V)| / dim H_λ.
    pub char_ratio: T,
    pub bound: T,
    pub decision_threshold: T,
}

fn complex_pair<T: Scalar + Serialize, S: Serializer>(z: &Complex<T>, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

/// Instance-level audit of the pair-counting lemma: m eigenphase pairs of
/// U†V clear the separation threshold, certifying |χ|/dim ≤ (2/(sε))^m.
#[derive(Debug, Clone, Serialize)]
pub struct BlowupReport<T: Scalar> {
    /// Count of pairs with sin²((θ_k−θ_j)/2) at or above `threshold`.
    pub m: u64,
    /// d(2ε²−ε⁴)/(2(d−1)).
    pub threshold: T,
    /// (2/(sε))^m, or 1 when not applicable.
    pub bound: T,
    pub char_ratio: T,
    /// False when dist(U,V) < ε, where the lemma promises nothing.
    pub applicable: bool,
}

/// Whether a maximally entangled state of rank dim H_λ fits inside
/// H_λ ⊗ K_λ, and the reference-system dimension needed if it does not.
#[derive(Debug, Clone, Serialize)]
pub struct AncillaReport {
    pub needs_ancilla: bool,
    #[serde(with = "biguint_as_number")]
    pub ancilla_dim: BigUint,
}

fn validate_epsilon<T: Scalar>(epsilon: T) -> Result<()> {
    if !(epsilon > T::zero() && epsilon <= T::one()) {
        return Err(Error::EpsilonOutOfRange {
            epsilon: epsilon.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(())
}

fn smallest_odd_above(x: f64) -> u64 {
    let k = x.floor() as u64 + 1;
    if k % 2 == 1 {
        k
    } else {
        k + 1
    }
}

/// Build the query plan for a tester kind at accuracy ε.
///
/// - qubit known-V: n = max(3, ⌈√3/ε + 1⌉), one round, guarantees
///   (n−1)ε ≥ √3 and hence p ≤ 1/3 under the promise;
/// - qubit swap-pair: n = max(3, ⌈3/ε + 1⌉), two rounds (accept iff both
///   swap tests accept);
/// - qudit kinds: s = smallest odd integer > 6/ε, n = C(d,2)(s−1); the
///   known-V variant needs a single round since (2/(sε))² < 1/9 already.
pub fn plan<T: Scalar>(kind: TesterKind, d: usize, epsilon: T) -> Result<TesterPlan<T>> {
    validate_epsilon(epsilon)?;
    let eps = epsilon.to_f64().expect("epsilon is finite");
    if kind.is_qubit() && d != 2 {
        return Err(Error::InvalidParameter {
            name: "d",
            value: d.to_string(),
            reason: "qubit testers require d = 2",
        });
    }
    if !kind.is_qubit() && d < 2 {
        return Err(Error::InvalidParameter {
            name: "d",
            value: d.to_string(),
            reason: "qudit testers require d ≥ 2",
        });
    }
    let (n, s, lambda, rounds) = match kind {
        TesterKind::QubitKnownV => {
            let n = ((3f64.sqrt() / eps + 1.0).ceil() as u64).max(3);
            (n, None, Partition::new(&[n - 1, 1], 2)?, 1)
        }
        TesterKind::QubitSwapPair => {
            let n = ((3.0 / eps + 1.0).ceil() as u64).max(3);
            (n, None, Partition::new(&[n - 1, 1], 2)?, 2)
        }
        TesterKind::QuditKnownV | TesterKind::QuditSwapPair => {
            let s = smallest_odd_above(6.0 / eps);
            let n = choose2(d as u64) * (s - 1);
            let rounds = if kind.is_swap() { 2 } else { 1 };
            (n, Some(s), staircase_partition(d, s), rounds)
        }
    };
    let total = n * rounds as u64;
    Ok(TesterPlan {
        kind,
        d,
        epsilon,
        n,
        s,
        lambda,
        rounds,
        total_uses_u: total,
        total_uses_v: if kind.is_swap() { total } else { 0 },
    })
}

impl<T: Scalar> TesterPlan<T> {
    /// Replace the planner's n (qubit kinds): λ becomes (n−1,1) and the
    /// query totals follow. The soundness guarantee is the caller's
    /// responsibility once the planner value is overridden.
    pub fn override_n(mut self, n: u64) -> Result<Self> {
        if !self.kind.is_qubit() {
            return Err(Error::PlanKindMismatch { kind: self.kind.as_str() });
        }
        if n < 3 {
            return Err(Error::InvalidParameter {
                name: "n",
                value: n.to_string(),
                reason: "qubit testers need n ≥ 3 so λ = (n−1,1) has two parts",
            });
        }
        self.n = n;
        self.lambda = Partition::new(&[n - 1, 1], 2)?;
        self.total_uses_u = n * self.rounds as u64;
        self.total_uses_v = if self.kind.is_swap() { self.total_uses_u } else { 0 };
        Ok(self)
    }

    /// Replace the planner's s (qudit kinds): λ becomes the staircase with
    /// step s and n = C(d,2)(s−1).
    pub fn override_s(mut self, s: u64) -> Result<Self> {
        if self.kind.is_qubit() {
            return Err(Error::PlanKindMismatch { kind: self.kind.as_str() });
        }
        if s.is_multiple_of(2) {
            return Err(Error::EvenS { s });
        }
        if s < 3 {
            return Err(Error::InvalidParameter {
                name: "s",
                value: s.to_string(),
                reason: "staircase testers need odd s ≥ 3",
            });
        }
        self.s = Some(s);
        self.n = choose2(self.d as u64) * (s - 1);
        self.lambda = staircase_partition(self.d, s);
        self.total_uses_u = self.n * self.rounds as u64;
        self.total_uses_v = if self.kind.is_swap() { self.total_uses_u } else { 0 };
        Ok(self)
    }
}

/// Character of U†V for the plan's irrep, from one eigendecomposition.
fn plan_character<T: Scalar>(plan: &TesterPlan<T>, phases: &EigenPhases<T>) -> Result<CharacterValue<T>> {
    if plan.kind.is_qubit() {
        char_spin(phases, plan.n)
    } else {
        Ok(char_staircase(phases, plan.s.expect("qudit plans carry s")))
    }
}

fn relative_phases<T: Scalar>(u: &UnitaryMatrix<T>, v: &UnitaryMatrix<T>, plan: &TesterPlan<T>) -> Result<(EigenPhases<T>, T)> {
    if u.d() != v.d() {
        return Err(Error::DimensionMismatch { left: u.d(), right: v.d() });
    }
    if u.d() != plan.d {
        return Err(Error::DimensionMismatch { left: u.d(), right: plan.d });
    }
    let rel = u.adjoint().mul(v)?;
    let phases = eigenphases(&rel)?;
    Ok((phases, distance(u, v)?))
}

/// Count of eigenphase pairs with sin²((θ_k−θ_j)/2) at or above the lemma
/// threshold d(2ε²−ε⁴)/(2(d−1)). A hair of slack keeps instances built
/// exactly on the threshold (ε = 1 zero-trace spectra) counted.
fn separated_pair_count<T: Scalar>(phases: &[T], epsilon: T) -> (u64, T) {
    let d = phases.len();
    let two = T::from_f64_lossy(2.0);
    let e2 = epsilon * epsilon;
    let threshold = T::from_u64_lossy(d as u64) * (two * e2 - e2 * e2)
        / (two * T::from_u64_lossy((d - 1) as u64));
    let slack = T::from_f64_lossy(BOUNDARY_SLACK);
    let mut m = 0;
    for j in 0..d {
        for k in j + 1..d {
            let s = ((phases[k] - phases[j]) / two).sin();
            if s * s >= threshold - slack {
                m += 1;
            }
        }
    }
    (m, threshold)
}

/// Upper bound on |χ|/dim under the distance promise, per tester family.
fn ratio_bound<T: Scalar>(plan: &TesterPlan<T>, phases: &EigenPhases<T>, dist: T) -> T {
    let slack = T::from_f64_lossy(BOUNDARY_SLACK);
    if dist + slack < plan.epsilon {
        return T::one();
    }
    let raw = if plan.kind.is_qubit() {
        soundness_bound_qubit(plan.n, plan.epsilon)
    } else {
        let (m, _) = separated_pair_count(phases.phases(), plan.epsilon);
        let s = plan.s.expect("qudit plans carry s");
        (T::from_f64_lossy(2.0) / (T::from_u64_lossy(s) * plan.epsilon)).powi(m as i32)
    };
    raw.min(T::one())
}

/// Acceptance probability of the known-V tester: p = (|χ_λ(U†V)|/dim H_λ)².
/// Perfect completeness: U = e^{iθ}V gives p = 1.
pub fn accept_prob_known<T: Scalar>(
    u: &UnitaryMatrix<T>,
    v: &UnitaryMatrix<T>,
    plan: &TesterPlan<T>,
) -> Result<AcceptanceReport<T>> {
    if plan.kind.is_swap() {
        return Err(Error::PlanKindMismatch { kind: plan.kind.as_str() });
    }
    let (phases, dist) = relative_phases(u, v, plan)?;
    let character = plan_character(plan, &phases)?;
    let ratio = character.ratio();
    let rb = ratio_bound(plan, &phases, dist);
    Ok(AcceptanceReport {
        p_accept: ratio * ratio,
        character: character.value,
        char_ratio: ratio,
        bound: rb * rb,
        decision_threshold: T::one() / T::from_f64_lossy(3.0),
    })
}

/// Acceptance probability of the swap-pair tester: each round accepts with
/// q = (1 + F)/2, F = (|χ|/dim)², and the tester accepts iff every round
/// does, so p = q^rounds.
pub fn accept_prob_swap<T: Scalar>(
    u: &UnitaryMatrix<T>,
    v: &UnitaryMatrix<T>,
    plan: &TesterPlan<T>,
) -> Result<AcceptanceReport<T>> {
    if !plan.kind.is_swap() {
        return Err(Error::PlanKindMismatch { kind: plan.kind.as_str() });
    }
    let (phases, dist) = relative_phases(u, v, plan)?;
    let character = plan_character(plan, &phases)?;
    let ratio = character.ratio();
    let half = T::from_f64_lossy(0.5);
    let q = half * (T::one() + ratio * ratio);
    let rb = ratio_bound(plan, &phases, dist);
    let q_bound = half * (T::one() + rb * rb);
    Ok(AcceptanceReport {
        p_accept: q.powi(plan.rounds as i32),
        character: character.value,
        char_ratio: ratio,
        bound: q_bound.powi(plan.rounds as i32),
        decision_threshold: T::one() / T::from_f64_lossy(3.0),
    })
}

/// The qubit soundness chain's final bound on |χ|/dim: 1/((n−1)ε).
/// Acceptance probability is at most its square.
pub fn soundness_bound_qubit<T: Scalar>(n: u64, epsilon: T) -> T {
    assert!(n >= 2, "qubit bound needs n ≥ 2");
    T::one() / (T::from_u64_lossy(n - 1) * epsilon)
}

/// |sin(sx)| ≤ s|sin x| for odd s: true iff the inequality holds at x
/// within a rounding slack. Even s is rejected; the bound is only proven
/// for odd s.
pub fn dirichlet_bound_check<T: Scalar>(s: u64, x: T) -> Result<bool> {
    if s.is_multiple_of(2) {
        return Err(Error::EvenS { s });
    }
    let sf = T::from_u64_lossy(s);
    let slack = T::from_f64_lossy(1e-12).max(T::epsilon() * T::from_f64_lossy(8.0) * sf);
    Ok((sf * x).sin().abs() <= sf * x.sin().abs() + slack)
}

/// Audit the pair-counting lemma on one instance: count separated pairs of
/// eigenphases of U†V, form the bound (2/(sε))^m, and report the staircase
/// character ratio it dominates. When dist(U,V) < ε the report is flagged
/// not applicable with m = 0 and bound 1.
pub fn blowup_report<T: Scalar>(
    u: &UnitaryMatrix<T>,
    v: &UnitaryMatrix<T>,
    d: usize,
    s: u64,
    epsilon: T,
) -> Result<BlowupReport<T>> {
    if s.is_multiple_of(2) {
        return Err(Error::EvenS { s });
    }
    validate_epsilon(epsilon)?;
    if u.d() != v.d() {
        return Err(Error::DimensionMismatch { left: u.d(), right: v.d() });
    }
    if u.d() != d {
        return Err(Error::DimensionMismatch { left: u.d(), right: d });
    }
    let rel = u.adjoint().mul(v)?;
    let phases = eigenphases(&rel)?;
    let dist = distance(u, v)?;
    let character = char_staircase(&phases, s);
    let char_ratio = character.ratio();
    let (m_raw, threshold) = separated_pair_count(phases.phases(), epsilon);
    let applicable = dist + T::from_f64_lossy(BOUNDARY_SLACK) >= epsilon;
    let (m, bound) = if applicable {
        let b = (T::from_f64_lossy(2.0) / (T::from_u64_lossy(s) * epsilon)).powi(m_raw as i32);
        (m_raw, b)
    } else {
        (0, T::one())
    };
    debug_assert!(
        !applicable || char_ratio <= bound * T::from_f64_lossy(1.0 + 1e-9),
        "lemma violated: ratio {char_ratio} > bound {bound}"
    );
    Ok(BlowupReport { m, threshold, bound, char_ratio, applicable })
}

/// Residual of |Σ_k e^{iθ_k}|² = d² − 4Σ_{j<k} sin²((θ_k−θ_j)/2); zero up
/// to rounding for any phase configuration.
pub fn trace_identity_check<T: Scalar>(phases: &EigenPhases<T>) -> T {
    let th = phases.phases();
    let d = th.len();
    let mut trace = Complex::<T>::new(T::zero(), T::zero());
    for &t in th {
        trace += Complex::from_polar(T::one(), t);
    }
    let two = T::from_f64_lossy(2.0);
    let mut sin_sum = T::zero();
    for j in 0..d {
        for k in j + 1..d {
            let s = ((th[k] - th[j]) / two).sin();
            sin_sum += s * s;
        }
    }
    let d2 = T::from_u64_lossy((d * d) as u64);
    trace.norm_sqr() - (d2 - T::from_f64_lossy(4.0) * sin_sum)
}

/// Whether running the tester on λ needs a reference system: the maximally
/// entangled state of rank dim H_λ fits in H_λ ⊗ K_λ only when
/// dim K_λ ≥ dim H_λ; otherwise an ancilla of dimension
/// ⌈dim H_λ / dim K_λ⌉ restores it.
pub fn ancilla_requirement(lambda: &Partition) -> AncillaReport {
    let h = dim_irrep(lambda);
    let k = dim_multiplicity(lambda);
    let needs_ancilla = h > k;
    let ancilla_dim = if needs_ancilla {
        (&h + &k - BigUint::one()) / &k
    } else {
        BigUint::one()
    };
    AncillaReport { needs_ancilla, ancilla_dim }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unitary::{haar_random, unitary_from_phases};
    use std::f64::consts::{FRAC_PI_2, PI};

    fn qubit_plan(kind: TesterKind, eps: f64) -> TesterPlan<f64> {
        plan(kind, 2, eps).unwrap()
    }

    #[test]
    fn plan_examples() {
        let p = qubit_plan(TesterKind::QubitKnownV, 0.1);
        assert_eq!(p.n, 19);
        assert_eq!(p.lambda.parts(), &[18, 1]);
        assert_eq!(p.rounds, 1);
        assert_eq!(p.total_uses_u, 19);
        assert_eq!(p.total_uses_v, 0);

        let p = qubit_plan(TesterKind::QubitSwapPair, 0.1);
        assert_eq!(p.n, 31);
        assert_eq!(p.rounds, 2);
        assert_eq!(p.total_uses_u, 62);
        assert_eq!(p.total_uses_v, 62);

        let p = plan(TesterKind::QuditKnownV, 3, 0.5).unwrap();
        assert_eq!(p.s, Some(13));
        assert_eq!(p.n, 36);
        assert_eq!(p.rounds, 1);

        assert!(plan::<f64>(TesterKind::QubitKnownV, 2, 0.0).is_err());
        assert!(plan::<f64>(TesterKind::QubitKnownV, 2, 1.5).is_err());
        assert!(plan::<f64>(TesterKind::QubitKnownV, 3, 0.1).is_err());
        assert!(plan::<f64>(TesterKind::QuditKnownV, 1, 0.1).is_err());
    }

    #[test]
    fn planner_guarantees() {
        for &eps in &[0.05, 0.1, 0.2, 0.37, 0.5, 0.91, 1.0] {
            let p = qubit_plan(TesterKind::QubitKnownV, eps);
            assert!((p.n - 1) as f64 * eps >= 3f64.sqrt() - 1e-12, "eps={eps}");
            assert!(p.total_uses_u <= (3f64.sqrt() / eps).ceil() as u64 + 2);

            let p = qubit_plan(TesterKind::QubitSwapPair, eps);
            assert!((p.n - 1) as f64 * eps >= 3.0 - 1e-12, "eps={eps}");
            assert!(p.total_uses_u <= 2 * ((3.0 / eps).ceil() as u64 + 2));

            for d in 2..=4usize {
                let p = plan(TesterKind::QuditKnownV, d, eps).unwrap();
                let s = p.s.unwrap();
                assert_eq!(s % 2, 1);
                assert!(s as f64 > 6.0 / eps - 1e-9, "eps={eps}");
                assert_eq!(p.n, choose2(d as u64) * (s - 1));
                assert!(p.n as f64 <= choose2(d as u64) as f64 * (6.0 / eps + 3.0) + 1e-9);
            }
        }
    }

    #[test]
    fn known_v_completeness() {
        for seed in 0..10u64 {
            let v = haar_random::<f64>(2, seed);
            let u = v.phased(0.3 + seed as f64);
            let p = qubit_plan(TesterKind::QubitKnownV, 0.2);
            let r = accept_prob_known(&u, &v, &p).unwrap();
            assert!((r.p_accept - 1.0).abs() <= 1e-10, "seed={seed}: {}", r.p_accept);
        }
        for seed in 0..10u64 {
            let v = haar_random::<f64>(3, seed);
            let u = v.phased(1.1);
            let p = plan(TesterKind::QuditKnownV, 3, 0.5).unwrap();
            let r = accept_prob_known(&u, &v, &p).unwrap();
            assert!((r.p_accept - 1.0).abs() <= 1e-10, "seed={seed}");
        }
    }

    #[test]
    fn known_v_examples() {
        // U†V = diag(1, e^{iπ/2}) with n = 4: |χ_(3,1)| = 1, dim = 3
        let v = unitary_from_phases(&[0.0, FRAC_PI_2], None).unwrap();
        let u = UnitaryMatrix::identity(2);
        let mut p = qubit_plan(TesterKind::QubitKnownV, 0.5);
        p.n = 4;
        p.lambda = Partition::new(&[3, 1], 2).unwrap();
        let r = accept_prob_known(&u, &v, &p).unwrap();
        assert!((r.p_accept - 1.0 / 9.0).abs() < 1e-12);
        assert!((r.char_ratio - 1.0 / 3.0).abs() < 1e-12);

        // U†V = diag(1, −1) with n = 3: χ_(2,1)(1,−1) = 0
        let v = unitary_from_phases(&[0.0, PI], None).unwrap();
        let mut p = qubit_plan(TesterKind::QubitKnownV, 1.0);
        p.n = 3;
        p.lambda = Partition::new(&[2, 1], 2).unwrap();
        let r = accept_prob_known(&u, &v, &p).unwrap();
        assert!(r.p_accept < 1e-20);
    }

    #[test]
    fn swap_examples() {
        let v = haar_random::<f64>(2, 5);
        let p = qubit_plan(TesterKind::QubitSwapPair, 0.3);
        let r = accept_prob_swap(&v, &v, &p).unwrap();
        assert!((r.p_accept - 1.0).abs() <= 1e-12);

        // F = 1/9 → p = ((1 + 1/9)/2)² = 25/81
        let u = UnitaryMatrix::identity(2);
        let v = unitary_from_phases(&[0.0, FRAC_PI_2], None).unwrap();
        let mut p = qubit_plan(TesterKind::QubitSwapPair, 0.5);
        p.n = 4;
        p.lambda = Partition::new(&[3, 1], 2).unwrap();
        let r = accept_prob_swap(&u, &v, &p).unwrap();
        assert!((r.p_accept - 25.0 / 81.0).abs() < 1e-12);

        // F = 0 → q = 1/2 per round → p = 1/4
        let v = unitary_from_phases(&[0.0, PI], None).unwrap();
        let mut p = qubit_plan(TesterKind::QubitSwapPair, 1.0);
        p.n = 3;
        p.lambda = Partition::new(&[2, 1], 2).unwrap();
        let r = accept_prob_swap(&u, &v, &p).unwrap();
        assert!((r.p_accept - 0.25).abs() < 1e-12);
    }

    #[test]
    fn kind_mismatch_rejected() {
        let u = UnitaryMatrix::<f64>::identity(2);
        let swap = qubit_plan(TesterKind::QubitSwapPair, 0.5);
        assert!(matches!(
            accept_prob_known(&u, &u, &swap),
            Err(Error::PlanKindMismatch { .. })
        ));
        let known = qubit_plan(TesterKind::QubitKnownV, 0.5);
        assert!(matches!(
            accept_prob_swap(&u, &u, &known),
            Err(Error::PlanKindMismatch { .. })
        ));
        let u3 = UnitaryMatrix::<f64>::identity(3);
        assert!(accept_prob_known(&u3, &u3, &known).is_err());
    }

    #[test]
    fn qubit_bound_examples() {
        assert!((soundness_bound_qubit(4, 0.5f64) - 2.0 / 3.0).abs() < 1e-15);
        assert!((soundness_bound_qubit(2, 1.0f64) - 1.0).abs() < 1e-15);
        for &eps in &[0.05, 0.1, 0.2, 0.5] {
            let n = ((3f64.sqrt() / eps).ceil() as u64) + 1;
            let b = soundness_bound_qubit(n, eps);
            assert!(b <= 1.0 / 3f64.sqrt() + 1e-12, "eps={eps}");
            assert!(b * b <= 1.0 / 3.0 + 1e-12);
        }
    }

    #[test]
    fn dirichlet_examples() {
        assert!(dirichlet_bound_check(3, FRAC_PI_2).unwrap());
        for s in [1u64, 5, 9, 33] {
            assert!(dirichlet_bound_check(s, 0.0).unwrap());
        }
        for k in 0..=2000 {
            let x = -PI + 2.0 * PI * (k as f64) / 2000.0;
            assert!(dirichlet_bound_check(5, x).unwrap(), "x={x}");
        }
        assert!(matches!(dirichlet_bound_check(4, 0.5f64), Err(Error::EvenS { s: 4 })));
    }

    #[test]
    fn blowup_examples() {
        // d=2, U†V = diag(1,−1), ε=1, s=3: m=1, bound=2/3, χ=1 over dim 3
        let u = UnitaryMatrix::identity(2);
        let v = unitary_from_phases(&[0.0, PI], None).unwrap();
        let r = blowup_report(&u, &v, 2, 3, 1.0).unwrap();
        assert!(r.applicable);
        assert_eq!(r.m, 1);
        assert!((r.bound - 2.0 / 3.0).abs() < 1e-12);
        assert!((r.char_ratio - 1.0 / 3.0).abs() < 1e-12);

        // U = V: not applicable
        let r = blowup_report(&u, &u, 2, 3, 0.5).unwrap();
        assert!(!r.applicable);
        assert_eq!(r.m, 0);
        assert_eq!(r.bound, 1.0);

        assert!(matches!(blowup_report(&u, &v, 2, 4, 0.5), Err(Error::EvenS { .. })));
    }

    #[test]
    fn blowup_random_instances() {
        let eps = 0.3;
        let s = 41;
        let mut found = 0;
        for seed in 0..200u64 {
            let u = haar_random::<f64>(3, seed);
            let v = haar_random::<f64>(3, seed + 10_000);
            if distance(&u, &v).unwrap() < eps {
                continue;
            }
            found += 1;
            let r = blowup_report(&u, &v, 3, s, eps).unwrap();
            assert!(r.applicable);
            assert!(r.m <= choose2(3));
            assert!(r.char_ratio <= r.bound * (1.0 + 1e-9), "seed={seed}");
            // m ≥ 1 is guaranteed under the stronger trace premise
            let rel = u.adjoint().mul(&v).unwrap();
            if rel.trace().norm() / 3.0 <= 1.0 - eps * eps {
                assert!(r.m >= 1, "seed={seed}");
            }
        }
        assert!(found > 100, "rejection sampling starved: {found}");
    }

    #[test]
    fn trace_identity_examples() {
        let e = EigenPhases::<f64>::from_phases(&[0.0, PI]);
        assert!(trace_identity_check(&e).abs() < 1e-12);

        let e = EigenPhases::<f64>::from_phases(&[0.0, 0.0, 0.0]);
        assert!(trace_identity_check(&e).abs() < 1e-12);

        for seed in 0..50u64 {
            let u = haar_random::<f64>(4, seed);
            let e = eigenphases(&u).unwrap();
            assert!(trace_identity_check(&e).abs() <= 1e-10, "seed={seed}");
        }
    }

    #[test]
    fn ancilla_examples() {
        // λ = (n−1,1), d = 2: both dimensions are n−1
        for n in 3..=9u64 {
            let lambda = Partition::new(&[n - 1, 1], 2).unwrap();
            let r = ancilla_requirement(&lambda);
            assert!(!r.needs_ancilla);
            assert_eq!(r.ancilla_dim, BigUint::one());
        }

        // staircase d=3, s=3: dim H = 27, dim K = 9 → ancilla 3
        let lambda = staircase_partition(3, 3);
        assert_eq!(dim_multiplicity(&lambda), BigUint::from(9u8));
        let r = ancilla_requirement(&lambda);
        assert!(r.needs_ancilla);
        assert_eq!(r.ancilla_dim, BigUint::from(3u8));

        // single row: dim H = n+1, dim K = 1 → ancilla n+1
        for n in 1..=6u64 {
            let lambda = Partition::new(&[n], 2).unwrap();
            let r = ancilla_requirement(&lambda);
            assert!(r.needs_ancilla);
            assert_eq!(r.ancilla_dim, BigUint::from(n + 1));
        }
    }

    #[test]
    fn phase_invariance_of_reports() {
        let p = qubit_plan(TesterKind::QubitKnownV, 0.2);
        let u = haar_random::<f64>(2, 3);
        let v = haar_random::<f64>(2, 4);
        let r0 = accept_prob_known(&u, &v, &p).unwrap();
        let r1 = accept_prob_known(&u.phased(2.2), &v, &p).unwrap();
        assert!((r0.p_accept - r1.p_accept).abs() < 1e-12);
        assert!((r0.char_ratio - r1.char_ratio).abs() < 1e-12);
        assert!((r0.bound - r1.bound).abs() < 1e-12);
    }
}
