//! Tester executions as Bernoulli trials at the exact acceptance
//! probability, plus parameter sweeps over ε grids.
//!
//! Per-point RNG streams are derived from the master seed by a splitmix64
//! hash of the point index, so sweeps are reproducible independently of
//! execution order. Tables serialize to CSV and JSON with every float at 17
//! significant digits.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::Serialize;

use crate::certification::{accept_prob_known, accept_prob_swap, soundness_bound_qubit, TesterKind, TesterPlan};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::unitary::{haar_random_using, unitary_from_phases, UnitaryMatrix};

/// Width of the rejection window above ε for sweep instance conditioning.
pub const DISTANCE_WINDOW: f64 = 0.01;

/// Rejection attempts per conditioned sample before falling back to
/// distance-targeted phase scaling.
const REJECTION_CAP: u32 = 50_000;

/// Outcome counts of seeded Bernoulli trials at an exact probability, with
/// the 99% Wilson score interval (z = 2.576).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialStats<T: Scalar> {
    pub trials: u64,
    pub accepts: u64,
    pub p_hat: T,
    pub wilson_ci_99: (T, T),
    pub exact_p: T,
    pub seed: u64,
}

/// Derive an independent stream seed for point `index` of a sweep.
pub fn stream_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn wilson_ci<T: Scalar>(accepts: u64, trials: u64) -> (T, T) {
    let z = T::from_f64_lossy(2.576);
    let n = T::from_u64_lossy(trials);
    let p_hat = T::from_u64_lossy(accepts) / n;
    let z2 = z * z;
    let denom = T::one() + z2 / n;
    let center = (p_hat + z2 / (T::from_f64_lossy(2.0) * n)) / denom;
    let half = z * (p_hat * (T::one() - p_hat) / n + z2 / (T::from_f64_lossy(4.0) * n * n)).sqrt() / denom;
    ((center - half).max(T::zero()), (center + half).min(T::one()))
}

/// Run `trials` independent Bernoulli draws at the plan's exact acceptance
/// probability for (U, V). Deterministic per seed.
pub fn run_trials<T: Scalar>(
    u: &UnitaryMatrix<T>,
    v: &UnitaryMatrix<T>,
    plan: &TesterPlan<T>,
    trials: u64,
    seed: u64,
) -> Result<TrialStats<T>> {
    assert!(trials >= 1, "at least one trial");
    let exact_p = if plan.kind.is_swap() {
        accept_prob_swap(u, v, plan)?.p_accept
    } else {
        accept_prob_known(u, v, plan)?.p_accept
    };
    let p = exact_p.to_f64().expect("probability is finite");
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut accepts = 0u64;
    for _ in 0..trials {
        if rng.gen::<f64>() < p {
            accepts += 1;
        }
    }
    let (lo, hi) = wilson_ci(accepts, trials);
    Ok(TrialStats {
        trials,
        accepts,
        p_hat: T::from_u64_lossy(accepts) / T::from_u64_lossy(trials),
        wilson_ci_99: (lo, hi),
        exact_p,
        seed,
    })
}

/// One grid point of a distance sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow<T: Scalar> {
    pub eps: T,
    pub n: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<u64>,
    pub rounds: u32,
    pub total_uses: u64,
    pub worst_p_accept: T,
    pub soundness_bound: T,
}

/// Sweep output: rows in grid order plus the metadata needed to reproduce
/// them.
#[derive(Debug, Clone, Serialize)]
pub struct SweepTable<T: Scalar> {
    pub kind: TesterKind,
    pub d: usize,
    pub per_point: u64,
    pub seed: u64,
    pub distance_window: T,
    /// How adversarial instances were produced per dimension.
    pub conditioning: String,
    pub rows: Vec<SweepRow<T>>,
}

fn sig17<T: Scalar>(x: T) -> String {
    format!("{:.16e}", x.to_f64().expect("finite float"))
}

impl<T: Scalar> SweepTable<T> {
    /// CSV with a header row; floats carry 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("eps,n,s,rounds,total_uses,worst_p_accept,soundness_bound\n");
        for row in &self.rows {
            let s = row.s.map(|v| v.to_string()).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                sig17(row.eps),
                row.n,
                s,
                row.rounds,
                row.total_uses,
                sig17(row.worst_p_accept),
                sig17(row.soundness_bound),
            ));
        }
        out
    }

    /// JSON mirror of the CSV, hand-assembled so floats keep the same
    /// 17-significant-digit form.
    pub fn to_json(&self) -> String {
        let mut out = format!(
            "{{\"kind\":\"{}\",\"d\":{},\"per_point\":{},\"seed\":{},\"distance_window\":{},\"conditioning\":\"{}\",\"rows\":[",
            self.kind, self.d, self.per_point, self.seed, sig17(self.distance_window), self.conditioning
        );
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let s = row.s.map(|v| v.to_string()).unwrap_or_else(|| "null".into());
            out.push_str(&format!(
                "{{\"eps\":{},\"n\":{},\"s\":{},\"rounds\":{},\"total_uses\":{},\"worst_p_accept\":{},\"soundness_bound\":{}}}",
                sig17(row.eps),
                row.n,
                s,
                row.rounds,
                row.total_uses,
                sig17(row.worst_p_accept),
                sig17(row.soundness_bound),
            ));
        }
        out.push_str("]}");
        out
    }
}

/// Worst-case acceptance probability over adversarial instances at distance
/// ε for each grid value, with planner parameters and the exact soundness
/// bound.
///
/// For d = 2 the adversarial set at distance exactly ε is diag(1, e^{±iΔ})
/// with Δ = 2·asin(ε), evaluated exactly. For d > 2 instances are Haar
/// samples conditioned by rejection on distance ∈ [ε, ε + 0.01] (capped,
/// with a deterministic phase-scaling fallback); ε = 1 uses zero-trace
/// spectra since the window above 1 is empty.
pub fn sweep_distance<T: Scalar>(
    kind: TesterKind,
    d: usize,
    epsilon_grid: &[T],
    per_point: u64,
    seed: u64,
) -> Result<SweepTable<T>> {
    if epsilon_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let window = T::from_f64_lossy(DISTANCE_WINDOW);
    let mut rows = Vec::with_capacity(epsilon_grid.len());
    for (index, &eps) in epsilon_grid.iter().enumerate() {
        let plan = crate::certification::plan(kind, d, eps)?;
        let eval = |u: &UnitaryMatrix<T>, v: &UnitaryMatrix<T>| -> Result<T> {
            if kind.is_swap() {
                Ok(accept_prob_swap(u, v, &plan)?.p_accept)
            } else {
                Ok(accept_prob_known(u, v, &plan)?.p_accept)
            }
        };
        let identity = UnitaryMatrix::identity(d);
        let mut worst = T::zero();
        if d == 2 {
            let delta = T::from_f64_lossy(2.0) * eps.asin();
            for sign in [T::one(), -T::one()] {
                let v = unitary_from_phases(&[T::zero(), sign * delta], None)?;
                worst = worst.max(eval(&identity, &v)?);
            }
        } else {
            let mut rng = ChaCha12Rng::seed_from_u64(stream_seed(seed, index as u64));
            for _ in 0..per_point.max(1) {
                let v = conditioned_relative(d, eps, window, &mut rng);
                worst = worst.max(eval(&identity, &v)?);
            }
        }
        let ratio_bound = if kind.is_qubit() {
            soundness_bound_qubit(plan.n, eps).min(T::one())
        } else {
            // guaranteed m ≥ 1 under the promise
            (T::from_f64_lossy(2.0) / (T::from_u64_lossy(plan.s.expect("qudit plan")) * eps)).min(T::one())
        };
        let soundness_bound = if kind.is_swap() {
            let half = T::from_f64_lossy(0.5);
            (half * (T::one() + ratio_bound * ratio_bound)).powi(plan.rounds as i32)
        } else {
            ratio_bound * ratio_bound
        };
        rows.push(SweepRow {
            eps,
            n: plan.n,
            s: plan.s,
            rounds: plan.rounds,
            total_uses: plan.total_uses_u + plan.total_uses_v,
            worst_p_accept: worst,
            soundness_bound,
        });
    }
    Ok(SweepTable {
        kind,
        d,
        per_point,
        seed,
        distance_window: window,
        conditioning: format!(
            "d=2: exact diag(1,e^{{±i·2asin(eps)}}); d>2: Haar rejection into [eps, eps+{DISTANCE_WINDOW}] capped at {REJECTION_CAP} tries then phase-scaling; eps=1: zero-trace spectrum"
        ),
        rows,
    })
}

/// A Haar-like relative unitary U†V at distance in [ε, ε + window].
fn conditioned_relative<T: Scalar>(d: usize, eps: T, window: T, rng: &mut ChaCha12Rng) -> UnitaryMatrix<T> {
    let identity = UnitaryMatrix::identity(d);
    if eps >= T::one() {
        // distance 1 needs a traceless spectrum: equally spaced phases in a
        // Haar-random basis
        let tau = T::TAU();
        let shift = T::from_f64_lossy(rng.gen::<f64>()) * tau;
        let phases: Vec<T> = (0..d)
            .map(|k| shift + tau * T::from_u64_lossy(k as u64) / T::from_u64_lossy(d as u64))
            .collect();
        let basis = haar_random_using::<T>(d, rng);
        return unitary_from_phases(&phases, Some(&basis)).expect("basis is unitary");
    }
    let mut last: Option<UnitaryMatrix<T>> = None;
    for _ in 0..REJECTION_CAP {
        let w = haar_random_using::<T>(d, rng);
        let dist = crate::unitary::distance(&identity, &w).expect("same dimension");
        if dist >= eps && dist <= eps + window {
            return w;
        }
        if dist >= eps + window {
            last = Some(w);
        }
    }
    // fallback: shrink the signed phases of a far sample until the distance
    // lands mid-window
    let w = last.unwrap_or_else(|| haar_random_using::<T>(d, rng));
    let decomp = crate::unitary::eigenphases(&w).expect("Haar sample decomposes");
    let pi = T::PI();
    let signed: Vec<T> = decomp
        .phases()
        .iter()
        .map(|&t| if t > pi { t - T::TAU() } else { t })
        .collect();
    let target = eps + window / T::from_f64_lossy(2.0);
    let dist_at = |t: T| -> T {
        let scaled: Vec<T> = signed.iter().map(|&p| p * t).collect();
        let u = UnitaryMatrix::from_diagonal_phases(&scaled);
        crate::unitary::distance(&UnitaryMatrix::identity(d), &u).expect("same dimension")
    };
    let mut lo = T::zero();
    let mut hi = T::one();
    for _ in 0..80 {
        let mid = (lo + hi) / T::from_f64_lossy(2.0);
        if dist_at(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let scaled: Vec<T> = signed.iter().map(|&p| p * hi).collect();
    unitary_from_phases(&scaled, Some(decomp.basis())).expect("basis is unitary")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certification::plan;
    use crate::unitary::{distance, haar_random};
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn trials_at_certainty() {
        let v = haar_random::<f64>(2, 8);
        let p = plan(TesterKind::QubitKnownV, 2, 0.2).unwrap();
        let stats = run_trials(&v, &v, &p, 10_000, 77).unwrap();
        assert_eq!(stats.accepts, 10_000);
        assert_eq!(stats.p_hat, 1.0);
        assert!((stats.exact_p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn trials_at_one_ninth() {
        // U†V = diag(1, i) with n = 4 gives exact_p = 1/9
        let u = UnitaryMatrix::identity(2);
        let v = unitary_from_phases(&[0.0, FRAC_PI_2], None).unwrap();
        let mut p = plan(TesterKind::QubitKnownV, 2, 0.5).unwrap();
        p.n = 4;
        p.lambda = crate::partitions::Partition::new(&[3, 1], 2).unwrap();
        let stats = run_trials(&u, &v, &p, 100_000, 0xC0FFEE).unwrap();
        assert!((stats.exact_p - 1.0 / 9.0).abs() < 1e-12);
        assert!(stats.p_hat > 0.108 && stats.p_hat < 0.114, "p_hat={}", stats.p_hat);
        let (lo, hi) = stats.wilson_ci_99;
        assert!(lo <= stats.exact_p && stats.exact_p <= hi);
        assert!(lo <= stats.p_hat && stats.p_hat <= hi);
    }

    #[test]
    fn trials_deterministic() {
        let v = haar_random::<f64>(2, 9);
        let u = haar_random::<f64>(2, 10);
        let p = plan(TesterKind::QubitSwapPair, 2, 0.4).unwrap();
        let a = run_trials(&u, &v, &p, 5000, 123).unwrap();
        let b = run_trials(&u, &v, &p, 5000, 123).unwrap();
        assert_eq!(a, b);
        let c = run_trials(&u, &v, &p, 5000, 124).unwrap();
        assert_ne!(a.accepts, c.accepts);
    }

    #[test]
    fn wilson_interval_brackets_p_hat() {
        for (accepts, trials) in [(0u64, 100u64), (100, 100), (11, 100), (997, 10_000)] {
            let (lo, hi) = wilson_ci::<f64>(accepts, trials);
            let p_hat = accepts as f64 / trials as f64;
            assert!(lo <= p_hat + 1e-15 && p_hat <= hi + 1e-15);
            assert!((0.0..=1.0).contains(&lo) && (0.0..=1.0).contains(&hi));
        }
    }

    #[test]
    fn sweep_qubit_known_v() {
        let table = sweep_distance(TesterKind::QubitKnownV, 2, &[0.5f64], 4, 99).unwrap();
        assert_eq!(table.rows.len(), 1);
        let row = &table.rows[0];
        assert_eq!(row.n, 5);
        assert!(row.worst_p_accept <= 0.25 + 1e-12, "worst={}", row.worst_p_accept);
        assert!(row.worst_p_accept <= 1.0 / 3.0);
        assert!((row.soundness_bound - 0.25).abs() < 1e-12);
    }

    #[test]
    fn sweep_rows_bounded_by_third() {
        for kind in [
            TesterKind::QubitKnownV,
            TesterKind::QubitSwapPair,
            TesterKind::QuditKnownV,
            TesterKind::QuditSwapPair,
        ] {
            let d = if kind.is_qubit() { 2 } else { 3 };
            let table = sweep_distance(kind, d, &[0.3f64, 0.7, 1.0], 3, 5).unwrap();
            for row in &table.rows {
                assert!(row.worst_p_accept <= 1.0 / 3.0 + 1e-12, "{kind} eps={}", row.eps);
            }
        }
    }

    #[test]
    fn sweep_uses_scale_inversely() {
        let table = sweep_distance(TesterKind::QubitKnownV, 2, &[0.1f64, 0.05], 1, 7).unwrap();
        let ratio = table.rows[1].total_uses as f64 / table.rows[0].total_uses as f64;
        assert!((ratio - 2.0).abs() < 0.15, "ratio={ratio}");
    }

    #[test]
    fn sweep_reproducible() {
        let a = sweep_distance(TesterKind::QuditKnownV, 3, &[0.4f64, 0.8], 5, 11).unwrap();
        let b = sweep_distance(TesterKind::QuditKnownV, 3, &[0.4f64, 0.8], 5, 11).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn sweep_empty_grid_rejected() {
        assert!(matches!(
            sweep_distance(TesterKind::QubitKnownV, 2, &[] as &[f64], 1, 0),
            Err(Error::EmptyGrid)
        ));
    }

    #[test]
    fn csv_floats_have_17_digits() {
        let table = sweep_distance(TesterKind::QubitKnownV, 2, &[0.5f64], 1, 3).unwrap();
        let csv = table.to_csv();
        assert!(csv.starts_with("eps,n,s,rounds,total_uses,worst_p_accept,soundness_bound\n"));
        assert!(csv.contains("5.0000000000000000e-1"), "{csv}");
        let json = table.to_json();
        assert!(serde_json::from_str::<serde_json::Value>(&json).is_ok(), "{json}");
    }

    #[test]
    fn conditioned_sampler_hits_window() {
        let mut rng = ChaCha12Rng::seed_from_u64(42);
        let id = UnitaryMatrix::identity(3);
        for &eps in &[0.3f64, 0.6, 0.9] {
            for _ in 0..5 {
                let w = conditioned_relative(3, eps, 0.01, &mut rng);
                let dist = distance(&id, &w).unwrap();
                assert!(dist >= eps - 1e-9 && dist <= eps + 0.011, "eps={eps} dist={dist}");
            }
        }
        // distance-1 construction
        let w = conditioned_relative(4, 1.0f64, 0.01, &mut rng);
        assert!(distance(&id4(), &w).unwrap() >= 1.0 - 1e-12);
    }

    fn id4() -> UnitaryMatrix<f64> {
        UnitaryMatrix::identity(4)
    }

    #[test]
    fn stream_seeds_distinct() {
        let seeds: Vec<u64> = (0..100).map(|i| stream_seed(0xC0FFEE, i)).collect();
        let mut unique = seeds.clone();
        unique.sort_unstable();
        unique.dedup();
        assert_eq!(unique.len(), seeds.len());
    }
}
