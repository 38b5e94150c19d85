//! Integer partitions and the Schur-Weyl dimension formulas.
//!
//! A partition λ of n with length at most d indexes one block H_λ ⊗ K_λ of
//! the decomposition of (ℂ^d)^⊗n. This module provides the exact dimensions
//! of both factors (big-integer arithmetic, no rounding), entropy-based
//! bounds on them, and the staircase family used by the qudit tester.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{choose2, Scalar};

/// Integer partition λ_1 ≥ λ_2 ≥ … ≥ 0 with a declared length bound d.
///
/// Parts are stored without trailing zeros; `parts_padded` restores them.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Partition {
    parts: Vec<u64>,
    n: u64,
    d: usize,
}

impl Partition {
    /// Validates non-increasing parts and the length bound, trims trailing
    /// zeros, and records n = Σλ_i.
    pub fn new(parts: &[u64], d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidPartition {
                reason: "length bound d must be at least 1".into(),
            });
        }
        for w in parts.windows(2) {
            if w[0] < w[1] {
                return Err(Error::InvalidPartition {
                    reason: format!("parts not non-increasing: {:?}", parts),
                });
            }
        }
        let trimmed: Vec<u64> = parts.iter().copied().take_while(|&p| p > 0).collect();
        if trimmed.len() > d {
            return Err(Error::InvalidPartition {
                reason: format!("{} nonzero parts exceed length bound d = {}", trimmed.len(), d),
            });
        }
        let n = trimmed.iter().sum();
        Ok(Self { parts: trimmed, n, d })
    }

    /// The empty partition of 0.
    pub fn empty(d: usize) -> Self {
        Self { parts: Vec::new(), n: 0, d: d.max(1) }
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    /// Parts padded with zeros to exactly d entries.
    pub fn parts_padded(&self) -> Vec<u64> {
        let mut p = self.parts.clone();
        p.resize(self.d, 0);
        p
    }

    /// λ̃_i = λ_i + d − i (1-based i), strictly decreasing for a valid λ.
    pub fn tilde(&self) -> Vec<u64> {
        let padded = self.parts_padded();
        padded
            .iter()
            .enumerate()
            .map(|(i, &p)| p + (self.d - 1 - i) as u64)
            .collect()
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Shannon entropy H(λ̄) in nats of the normalized partition λ̄ = λ/n,
    /// with the convention 0·log 0 = 0. Zero for the empty partition.
    pub fn entropy<T: Scalar>(&self) -> T {
        if self.n == 0 {
            return T::zero();
        }
        let n = T::from_u64_lossy(self.n);
        let mut h = T::zero();
        for &p in &self.parts {
            let f = T::from_u64_lossy(p) / n;
            h -= f * f.ln();
        }
        h
    }

    /// Whether this is the staircase shape λ_i = (d−i)(s−1) for some s ≥ 2.
    pub fn staircase_step(&self) -> Option<u64> {
        if self.d < 2 {
            return None;
        }
        let padded = self.parts_padded();
        let step = padded[self.d - 2];
        if step == 0 {
            return None;
        }
        let matches = padded
            .iter()
            .enumerate()
            .all(|(i, &p)| p == (self.d - 1 - i) as u64 * step);
        matches.then_some(step + 1)
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            parts: Vec<u64>,
            d: usize,
        }
        let raw = Raw::deserialize(deserializer)?;
        Partition::new(&raw.parts, raw.d).map_err(serde::de::Error::custom)
    }
}

/// Exact dimensions of both Schur-Weyl factors plus the entropy of λ̄.
#[derive(Debug, Clone, Serialize)]
pub struct PartitionDims<T> {
    #[serde(with = "biguint_as_number")]
    pub dim_irrep: BigUint,
    #[serde(with = "biguint_as_number")]
    pub dim_mult: BigUint,
    pub entropy: T,
}

/// Serialize a BigUint as an exact decimal JSON number (arbitrary
/// precision), never as limbs or a string.
pub mod biguint_as_number {
    use num_bigint::BigUint;
    use serde::{Serialize, Serializer};

    pub fn serialize<S: Serializer>(x: &BigUint, serializer: S) -> Result<S::Ok, S::Error> {
        serde_json::Number::from_string_unchecked(x.to_string()).serialize(serializer)
    }
}

/// Entropy and polynomial bounds on the two dimensions.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DimBounds<T> {
    pub mult_lower: T,
    pub mult_upper: T,
    pub irrep_upper: T,
}

/// All partitions of n with length ≤ d, in lexicographically decreasing
/// order. n = 0 yields the single empty partition.
pub fn enumerate_partitions(n: u64, d: usize) -> Vec<Partition> {
    assert!(d >= 1, "length bound d must be at least 1");
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    descend(n, n, d, &mut prefix, &mut out);
    out.iter()
        .map(|parts| Partition::new(parts, d).expect("enumeration yields valid partitions"))
        .collect()
}

fn descend(remaining: u64, max_part: u64, slots: usize, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    if remaining == 0 {
        out.push(prefix.clone());
        return;
    }
    if slots == 0 {
        return;
    }
    let hi = remaining.min(max_part);
    // smallest admissible first part: k·slots ≥ remaining
    let lo = remaining.div_ceil(slots as u64);
    let mut k = hi;
    while k >= lo {
        prefix.push(k);
        descend(remaining - k, k, slots - 1, prefix, out);
        prefix.pop();
        if k == 0 {
            break;
        }
        k -= 1;
    }
}

fn factorial(k: u64) -> BigUint {
    let mut acc = BigUint::one();
    for j in 2..=k {
        acc *= j;
    }
    acc
}

/// dim K_λ = n!/(λ̃_1!⋯λ̃_d!)·Π_{i<j}(λ̃_i − λ̃_j): the multiplicity-space
/// dimension, equal to the number of standard Young tableaux of shape λ.
pub fn dim_multiplicity(lambda: &Partition) -> BigUint {
    let tilde = lambda.tilde();
    debug_assert!(
        tilde.windows(2).all(|w| w[0] > w[1]),
        "λ̃ must be strictly decreasing for a valid partition"
    );
    let mut numerator = factorial(lambda.n());
    for i in 0..tilde.len() {
        for j in i + 1..tilde.len() {
            numerator *= tilde[i] - tilde[j];
        }
    }
    let mut denominator = BigUint::one();
    for &t in &tilde {
        denominator *= factorial(t);
    }
    numerator / denominator
}

/// dim H_λ = Π_{i<j}(λ_i − λ_j + j − i)/(j − i): the unitary-group irrep
/// dimension, equal to the number of semistandard tableaux with entries ≤ d.
pub fn dim_irrep(lambda: &Partition) -> BigUint {
    let padded = lambda.parts_padded();
    let d = lambda.d();
    let mut numerator = BigUint::one();
    let mut denominator = BigUint::one();
    for i in 0..d {
        for j in i + 1..d {
            numerator *= padded[i] - padded[j] + (j - i) as u64;
            denominator *= (j - i) as u64;
        }
    }
    numerator / denominator
}

/// Both dimensions plus the entropy of λ̄, computed exactly.
pub fn partition_dims<T: Scalar>(lambda: &Partition) -> PartitionDims<T> {
    PartitionDims {
        dim_irrep: dim_irrep(lambda),
        dim_mult: dim_multiplicity(lambda),
        entropy: lambda.entropy(),
    }
}

/// Bounds exp(nH)(n+d)^{−d(d+1)/2} ≤ dim K_λ ≤ exp(nH) and
/// dim H_λ ≤ (n+1)^{d(d−1)/2}.
pub fn dim_bounds<T: Scalar>(lambda: &Partition) -> DimBounds<T> {
    let n = lambda.n();
    let d = lambda.d() as u64;
    let nh = T::from_u64_lossy(n) * lambda.entropy();
    let mult_upper = nh.exp();
    let np_d = T::from_u64_lossy(n + d);
    let mult_lower = (nh - T::from_u64_lossy(d * (d + 1) / 2) * np_d.ln()).exp();
    let irrep_upper = T::from_u64_lossy(n + 1).powi((d * (d - 1) / 2) as i32);
    DimBounds { mult_lower, mult_upper, irrep_upper }
}

/// The staircase partition λ_i = (d−i)(s−1), a partition of C(d,2)(s−1)
/// whose irrep dimension is exactly s^{d(d−1)/2}.
pub fn staircase_partition(d: usize, s: u64) -> Partition {
    assert!(d >= 2, "staircase needs d ≥ 2");
    assert!(s >= 2, "staircase needs s ≥ 2");
    let parts: Vec<u64> = (0..d).map(|i| (d - 1 - i) as u64 * (s - 1)).collect();
    Partition::new(&parts, d).expect("staircase parts are non-increasing")
}

/// dim H_λ for the staircase: s^{C(d,2)} without going through the product
/// formula.
pub fn staircase_dim_irrep(d: usize, s: u64) -> BigUint {
    BigUint::from(s).pow(choose2(d as u64) as u32)
}

/// dim H_λ as a float, for probability formulas downstream.
pub fn dim_irrep_as<T: Scalar>(lambda: &Partition) -> T {
    T::from_f64_lossy(dim_irrep(lambda).to_f64().unwrap_or(f64::INFINITY))
}

/// Number of semistandard Young tableaux of shape λ with entries in 1..=d,
/// by direct enumeration. Exponential-cost oracle shared with the character
/// module; callers must guard the size themselves.
pub fn count_ssyt(lambda: &Partition) -> u128 {
    let mut count = 0u128;
    for_each_ssyt(lambda, &mut |_| count += 1);
    count
}

/// Visit every semistandard tableau of shape λ (entries 1..=d), row-major.
/// The callback receives the flat entry list in cell order.
pub fn for_each_ssyt(lambda: &Partition, visit: &mut dyn FnMut(&[usize])) {
    let rows: Vec<usize> = lambda.parts().iter().map(|&p| p as usize).collect();
    if rows.is_empty() {
        visit(&[]);
        return;
    }
    let d = lambda.d();
    let total: usize = rows.iter().sum();
    let mut entries = vec![0usize; total];
    let mut offsets = vec![0usize; rows.len()];
    for r in 1..rows.len() {
        offsets[r] = offsets[r - 1] + rows[r - 1];
    }
    fill_ssyt(&rows, &offsets, d, 0, 0, &mut entries, visit);
}

fn fill_ssyt(
    rows: &[usize],
    offsets: &[usize],
    d: usize,
    row: usize,
    col: usize,
    entries: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]),
) {
    if row == rows.len() {
        visit(entries);
        return;
    }
    let (next_row, next_col) = if col + 1 < rows[row] { (row, col + 1) } else { (row + 1, 0) };
    let mut lo = 1;
    if col > 0 {
        lo = lo.max(entries[offsets[row] + col - 1]); // row weakly increasing
    }
    if row > 0 && col < rows[row - 1] {
        lo = lo.max(entries[offsets[row - 1] + col] + 1); // column strictly increasing
    }
    for v in lo..=d {
        entries[offsets[row] + col] = v;
        fill_ssyt(rows, offsets, d, next_row, next_col, entries, visit);
    }
}
