//! Scalar abstraction: the numerical core is generic over the floating-point
//! type via `num-traits`, with per-type tolerances. `f64` is the default used
//! by the CLI and the acceptance suite; `f32` works at looser tolerances.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar the library computes with.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + NumAssign + Sum + Debug + Display + Send + Sync + 'static
{
    /// Max |U†U − I| entry accepted when constructing a unitary.
    fn unitary_tol() -> Self;
    /// Max |W diag(e^{iθ}) W† − U| entry accepted for a spectral decomposition.
    fn reconstruction_tol() -> Self;
    /// Width used to group near-equal eigenvalues into degenerate clusters.
    fn cluster_tol() -> Self;
    /// Minimal pairwise eigenvalue gap required by the bialternant character.
    fn bialternant_gap() -> Self;

    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("f64 converts into every scalar")
    }

    fn from_u64_lossy(x: u64) -> Self {
        Self::from_u64(x).expect("u64 converts into every scalar")
    }
}

impl Scalar for f64 {
    fn unitary_tol() -> Self {
        1e-10
    }
    fn reconstruction_tol() -> Self {
        1e-8
    }
    fn cluster_tol() -> Self {
        1e-8
    }
    fn bialternant_gap() -> Self {
        1e-6
    }
}

impl Scalar for f32 {
    fn unitary_tol() -> Self {
        1e-4
    }
    fn reconstruction_tol() -> Self {
        1e-3
    }
    fn cluster_tol() -> Self {
        1e-4
    }
    fn bialternant_gap() -> Self {
        1e-3
    }
}

/// ln(k!) as a scalar, by direct summation of logarithms.
///
/// Exact to rounding for the factorial ranges used here (k up to a few
/// thousand); avoids overflowing the factorial itself.
pub fn ln_factorial<T: Scalar>(k: u64) -> T {
    let mut acc = T::zero();
    for j in 2..=k {
        acc += T::from_u64_lossy(j).ln();
    }
    acc
}

/// Wrap an angle into [0, 2π).
pub fn wrap_phase<T: Scalar>(theta: T) -> T {
    let tau = T::TAU();
    let mut t = theta - (theta / tau).floor() * tau;
    if t >= tau {
        t -= tau;
    }
    if t < T::zero() {
        t += tau;
    }
    t
}

/// C(n, 2) = n(n−1)/2.
pub fn choose2(n: u64) -> u64 {
    n * (n - 1) / 2
}
