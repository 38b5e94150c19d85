//! Characters χ_λ(U) of unitary-group irreps, evaluated from eigenphases.
//!
//! Four routes with different trade-offs, kept independent so they can check
//! each other:
//! - geometric products for the two tester families (staircase shapes and
//!   (n−1,1)), exact with or without spectral degeneracy;
//! - the bialternant ratio of determinants, fast but 0/0 at degenerate
//!   spectra;
//! - the Jacobi–Trudi determinant in complete homogeneous polynomials,
//!   degeneracy-robust universal fallback;
//! - brute-force summation over semistandard tableaux, the exponential-cost
//!   ground truth.
//!
//! Everything takes phases, never a matrix: χ_λ(WUW†) = χ_λ(U) holds by
//! construction.

use num_complex::Complex;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::partitions::{dim_irrep, for_each_ssyt, staircase_partition, Partition};
use crate::scalar::Scalar;
use crate::unitary::EigenPhases;

/// Which evaluation route produced a character value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CharMethod {
    GeometricProduct,
    Bialternant,
    JacobiTrudi,
    SsytOracle,
}

/// A character value together with its partition and provenance.
#[derive(Debug, Clone, Serialize)]
#[serde(bound(serialize = "T: Serialize"))]
pub struct CharacterValue<T: Scalar> {
    #[serde(serialize_with = "complex_pair")]
    pub value: Complex<T>,
    pub lambda: Partition,
    pub method: CharMethod,
}

fn complex_pair<T: Scalar + Serialize, S: Serializer>(z: &Complex<T>, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

impl<T: Scalar> CharacterValue<T> {
    fn new(value: Complex<T>, lambda: Partition, method: CharMethod) -> Self {
        debug_assert!(
            value.norm()
                <= T::from_f64_lossy(dim_irrep(&lambda).to_f64().unwrap_or(f64::INFINITY))
                    + T::from_f64_lossy(1e-6),
            "character modulus exceeds the irrep dimension"
        );
        Self { value, lambda, method }
    }

    /// |χ| / dim H_λ.
    pub fn ratio(&self) -> T {
        self.value.norm() / T::from_f64_lossy(dim_irrep(&self.lambda).to_f64().unwrap_or(f64::INFINITY))
    }
}

/// Σ_{t=0}^{s−1} e^{i(tθ_k + (s−1−t)θ_j)}: the factor (x_k^s − x_j^s)/(x_k −
/// x_j) in a form valid at x_j = x_k, where it becomes s·e^{i(s−1)φ}.
fn geometric_pair_sum<T: Scalar>(theta_j: T, theta_k: T, s: u64) -> Complex<T> {
    let mut acc = Complex::zero();
    for t in 0..s {
        let angle = T::from_u64_lossy(t) * theta_k + T::from_u64_lossy(s - 1 - t) * theta_j;
        acc += Complex::from_polar(T::one(), angle);
    }
    acc
}

/// Character of the staircase irrep λ_i = (d−i)(s−1): the product over pairs
/// j<k of geometric sums. Exact for any spectrum, degenerate or not.
pub fn char_staircase<T: Scalar>(phases: &EigenPhases<T>, s: u64) -> CharacterValue<T> {
    let d = phases.d();
    assert!(d >= 2, "staircase character needs d ≥ 2");
    assert!(s >= 2, "staircase character needs s ≥ 2");
    let th = phases.phases();
    let mut product = Complex::new(T::one(), T::zero());
    for j in 0..d {
        for k in j + 1..d {
            product *= geometric_pair_sum(th[j], th[k], s);
        }
    }
    CharacterValue::new(product, staircase_partition(d, s), CharMethod::GeometricProduct)
}

/// Character of λ = (n−1,1) on U(2): e^{i(α+β)}·Σ_{k=0}^{n−2} e^{i(kα +
/// (n−2−k)β)}. On separated spectra |χ| = |sin((n−1)Δ/2)/sin(Δ/2)|.
pub fn char_spin<T: Scalar>(phases: &EigenPhases<T>, n: u64) -> Result<CharacterValue<T>> {
    if phases.d() != 2 {
        return Err(Error::DimensionMismatch { left: phases.d(), right: 2 });
    }
    assert!(n >= 3, "the (n−1,1) family needs n ≥ 3");
    let alpha = phases.phases()[0];
    let beta = phases.phases()[1];
    let base = alpha + beta;
    let mut acc = Complex::zero();
    for k in 0..=(n - 2) {
        let angle = base + T::from_u64_lossy(k) * alpha + T::from_u64_lossy(n - 2 - k) * beta;
        acc += Complex::from_polar(T::one(), angle);
    }
    let lambda = Partition::new(&[n - 1, 1], 2).expect("(n−1,1) is valid for n ≥ 3");
    Ok(CharacterValue::new(acc, lambda, CharMethod::GeometricProduct))
}

/// Weyl bialternant det(x_i^{λ_j+d−j}) / det(x_i^{d−j}). Requires all
/// pairwise eigenvalue gaps above the degeneracy threshold; callers fall
/// back to [`char_jacobi_trudi`] when it reports a degenerate spectrum.
pub fn char_bialternant<T: Scalar>(lambda: &Partition, phases: &EigenPhases<T>) -> Result<CharacterValue<T>> {
    let d = phases.d();
    if lambda.d() != d {
        return Err(Error::DimensionMismatch { left: lambda.d(), right: d });
    }
    let th = phases.phases();
    let mut min_gap = T::infinity();
    for j in 0..d {
        for k in j + 1..d {
            let gap = (Complex::from_polar(T::one(), th[j]) - Complex::from_polar(T::one(), th[k])).norm();
            min_gap = min_gap.min(gap);
        }
    }
    if d >= 2 && min_gap <= T::bialternant_gap() {
        return Err(Error::DegenerateSpectrum {
            gap: min_gap.to_f64().unwrap_or(f64::NAN),
            tolerance: T::bialternant_gap().to_f64().unwrap_or(f64::NAN),
        });
    }
    let padded = lambda.parts_padded();
    let numerator: Vec<Complex<T>> = (0..d * d)
        .map(|idx| {
            let (i, j) = (idx / d, idx % d);
            let power = padded[j] + (d - 1 - j) as u64;
            Complex::from_polar(T::one(), T::from_u64_lossy(power) * th[i])
        })
        .collect();
    let denominator: Vec<Complex<T>> = (0..d * d)
        .map(|idx| {
            let (i, j) = (idx / d, idx % d);
            Complex::from_polar(T::one(), T::from_u64_lossy((d - 1 - j) as u64) * th[i])
        })
        .collect();
    let value = det_complex(numerator, d) / det_complex(denominator, d);
    Ok(CharacterValue::new(value, lambda.clone(), CharMethod::Bialternant))
}

/// Jacobi–Trudi determinant det(h_{λ_i−i+j}) with the complete homogeneous
/// polynomials built from power sums via Newton's identities. Works on any
/// spectrum.
pub fn char_jacobi_trudi<T: Scalar>(lambda: &Partition, phases: &EigenPhases<T>) -> Result<CharacterValue<T>> {
    let d = phases.d();
    if lambda.d() != d {
        return Err(Error::DimensionMismatch { left: lambda.d(), right: d });
    }
    let padded = lambda.parts_padded();
    let max_h = padded[0] as usize + d;
    if max_h > 10_000 {
        return Err(Error::EnumerationGuard {
            reason: format!("Jacobi–Trudi needs h up to degree {max_h}, cap is 10000"),
        });
    }
    let th = phases.phases();
    // power sums p_k = Σ_j e^{ikθ_j}
    let mut power_sums = vec![Complex::<T>::zero(); max_h + 1];
    for (k, slot) in power_sums.iter_mut().enumerate().skip(1) {
        let mut acc = Complex::zero();
        for &t in th {
            acc += Complex::from_polar(T::one(), T::from_u64_lossy(k as u64) * t);
        }
        *slot = acc;
    }
    // Newton: k·h_k = Σ_{i=1}^k p_i·h_{k−i}
    let mut h = vec![Complex::<T>::zero(); max_h + 1];
    h[0] = Complex::new(T::one(), T::zero());
    for k in 1..=max_h {
        let mut acc = Complex::<T>::zero();
        for i in 1..=k {
            acc += power_sums[i] * h[k - i];
        }
        h[k] = acc / Complex::new(T::from_u64_lossy(k as u64), T::zero());
    }
    let matrix: Vec<Complex<T>> = (0..d * d)
        .map(|idx| {
            let (i, j) = (idx / d, idx % d);
            let degree = padded[i] as i64 - i as i64 + j as i64;
            if degree < 0 {
                Complex::zero()
            } else {
                h[degree as usize]
            }
        })
        .collect();
    let value = det_complex(matrix, d);
    Ok(CharacterValue::new(value, lambda.clone(), CharMethod::JacobiTrudi))
}

/// Ground truth: Σ over semistandard tableaux of Π_cells x_{T(cell)}.
/// Guarded at 10⁶ tableaux.
pub fn char_ssyt_oracle<T: Scalar>(lambda: &Partition, phases: &EigenPhases<T>) -> Result<CharacterValue<T>> {
    let d = phases.d();
    if lambda.d() != d {
        return Err(Error::DimensionMismatch { left: lambda.d(), right: d });
    }
    const LIMIT: u128 = 1_000_000;
    let count = dim_irrep(lambda).to_u128().unwrap_or(u128::MAX);
    if count > LIMIT {
        return Err(Error::OracleTooLarge { count, limit: LIMIT });
    }
    let th = phases.phases();
    let mut acc = Complex::<T>::zero();
    for_each_ssyt(lambda, &mut |entries| {
        let mut angle = T::zero();
        for &v in entries {
            angle += th[v - 1];
        }
        acc += Complex::from_polar(T::one(), angle);
    });
    Ok(CharacterValue::new(acc, lambda.clone(), CharMethod::SsytOracle))
}

/// Determinant via Gaussian elimination with partial pivoting.
fn det_complex<T: Scalar>(mut m: Vec<Complex<T>>, n: usize) -> Complex<T> {
    let mut det = Complex::new(T::one(), T::zero());
    for col in 0..n {
        let mut pivot = col;
        for row in col + 1..n {
            if m[row * n + col].norm_sqr() > m[pivot * n + col].norm_sqr() {
                pivot = row;
            }
        }
        if m[pivot * n + col].norm_sqr() == T::zero() {
            return Complex::zero();
        }
        if pivot != col {
            for k in 0..n {
                m.swap(col * n + k, pivot * n + k);
            }
            det = -det;
        }
        let diag = m[col * n + col];
        det *= diag;
        for row in col + 1..n {
            let factor = m[row * n + col] / diag;
            for k in col..n {
                let sub = factor * m[col * n + k];
                m[row * n + k] -= sub;
            }
        }
    }
    det
}
