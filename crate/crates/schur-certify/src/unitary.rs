//! Unitary matrices, spectra as phases, Haar sampling, and the certification
//! distance dist(U,V) = sqrt(1 − |tr(U†V)/d|²).
//!
//! Eigendecomposition goes through the commuting Hermitian pair
//! A = (U + U†)/2, B = (U − U†)/2i, which a joint Jacobi iteration
//! diagonalizes simultaneously. Phases come out as atan2(b, a), so the
//! eigenvalues are on the unit circle by construction and the eigenvectors
//! stay orthonormal even for degenerate spectra.

use num_complex::Complex;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{wrap_phase, Scalar};

/// d×d complex matrix with the unitarity invariant ‖U†U − I‖_max ≤ tol,
/// checked at construction. Entries are row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix<T = f64> {
    d: usize,
    entries: Vec<Complex<T>>,
}

impl<T: Scalar> UnitaryMatrix<T> {
    pub fn new(d: usize, entries: Vec<Complex<T>>) -> Result<Self> {
        if d == 0 || entries.len() != d * d {
            return Err(Error::DimensionMismatch { left: entries.len(), right: d * d });
        }
        let m = Self { d, entries };
        let residual = m.unitarity_residual();
        if residual > T::unitary_tol() {
            return Err(Error::NotUnitary {
                residual: residual.to_f64().unwrap_or(f64::NAN),
                tolerance: T::unitary_tol().to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(m)
    }

    pub fn identity(d: usize) -> Self {
        let mut entries = vec![Complex::zero(); d * d];
        for i in 0..d {
            entries[i * d + i] = Complex::new(T::one(), T::zero());
        }
        Self { d, entries }
    }

    /// diag(e^{iθ_1}, …, e^{iθ_d}).
    pub fn from_diagonal_phases(phases: &[T]) -> Self {
        let d = phases.len();
        let mut entries = vec![Complex::zero(); d * d];
        for (i, &theta) in phases.iter().enumerate() {
            entries[i * d + i] = Complex::from_polar(T::one(), theta);
        }
        Self { d, entries }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex<T> {
        self.entries[r * self.d + c]
    }

    /// Max-entry residual of U†U − I.
    pub fn unitarity_residual(&self) -> T {
        let d = self.d;
        let mut worst = T::zero();
        for i in 0..d {
            for j in 0..d {
                let mut acc = Complex::<T>::zero();
                for k in 0..d {
                    acc += self.entries[k * d + i].conj() * self.entries[k * d + j];
                }
                if i == j {
                    acc -= Complex::new(T::one(), T::zero());
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }

    pub fn adjoint(&self) -> Self {
        let d = self.d;
        let mut entries = vec![Complex::zero(); d * d];
        for r in 0..d {
            for c in 0..d {
                entries[c * d + r] = self.entries[r * d + c].conj();
            }
        }
        Self { d, entries }
    }

    /// Matrix product; stays unitary up to rounding so no re-validation.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch { left: self.d, right: other.d });
        }
        let d = self.d;
        let mut entries = vec![Complex::zero(); d * d];
        for r in 0..d {
            for k in 0..d {
                let a = self.entries[r * d + k];
                for c in 0..d {
                    entries[r * d + c] += a * other.entries[k * d + c];
                }
            }
        }
        Ok(Self { d, entries })
    }

    /// Global phase rotation e^{iθ}·U.
    pub fn phased(&self, theta: T) -> Self {
        let z = Complex::from_polar(T::one(), theta);
        Self {
            d: self.d,
            entries: self.entries.iter().map(|&e| e * z).collect(),
        }
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.d).fold(Complex::zero(), |acc, i| acc + self.entries[i * self.d + i])
    }

    /// tr(U†V) without forming the product.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch { left: self.d, right: other.d });
        }
        let mut acc = Complex::zero();
        for (a, b) in self.entries.iter().zip(other.entries.iter()) {
            acc += a.conj() * *b;
        }
        Ok(acc)
    }

    fn max_abs_diff(&self, other: &Self) -> T {
        self.entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max)
    }
}

/// Spectrum of a unitary as phases θ_k ∈ [0, 2π), sorted ascending, with the
/// diagonalizing basis W so that U = W diag(e^{iθ}) W†.
#[derive(Debug, Clone)]
pub struct EigenPhases<T = f64> {
    phases: Vec<T>,
    basis: UnitaryMatrix<T>,
}

impl<T: Scalar> EigenPhases<T> {
    /// Phases with the identity basis (columns permuted to keep phases
    /// sorted): the spectrum of diag(e^{iθ}).
    pub fn from_phases(phases: &[T]) -> Self {
        let d = phases.len();
        let mut order: Vec<usize> = (0..d).collect();
        let wrapped: Vec<T> = phases.iter().map(|&t| wrap_phase(t)).collect();
        order.sort_by(|&a, &b| wrapped[a].partial_cmp(&wrapped[b]).expect("phases are finite"));
        let sorted: Vec<T> = order.iter().map(|&i| wrapped[i]).collect();
        let mut basis = vec![Complex::zero(); d * d];
        for (col, &src) in order.iter().enumerate() {
            basis[src * d + col] = Complex::new(T::one(), T::zero());
        }
        Self { phases: sorted, basis: UnitaryMatrix { d, entries: basis } }
    }

    pub fn d(&self) -> usize {
        self.phases.len()
    }

    pub fn phases(&self) -> &[T] {
        &self.phases
    }

    pub fn basis(&self) -> &UnitaryMatrix<T> {
        &self.basis
    }

    /// Unit-circle eigenvalues e^{iθ_k}.
    pub fn eigenvalues(&self) -> Vec<Complex<T>> {
        self.phases.iter().map(|&t| Complex::from_polar(T::one(), t)).collect()
    }

    /// W diag(e^{iθ}) W†.
    pub fn reconstruct(&self) -> UnitaryMatrix<T> {
        let d = self.d();
        let w = &self.basis;
        let mut entries = vec![Complex::zero(); d * d];
        for r in 0..d {
            for c in 0..d {
                let mut acc = Complex::zero();
                for k in 0..d {
                    acc += w.get(r, k) * Complex::from_polar(T::one(), self.phases[k]) * w.get(c, k).conj();
                }
                entries[r * d + c] = acc;
            }
        }
        UnitaryMatrix { d, entries }
    }
}

/// dist(U,V) = sqrt(max(0, 1 − |tr(U†V)/d|²)) ∈ \[0,1\]. Zero iff U = e^{iθ}V.
pub fn distance<T: Scalar>(u: &UnitaryMatrix<T>, v: &UnitaryMatrix<T>) -> Result<T> {
    let inner = u.inner(v)?;
    let scaled = inner.norm() / T::from_u64_lossy(u.d() as u64);
    Ok((T::one() - scaled * scaled).max(T::zero()).sqrt())
}

/// Spectral decomposition of a unitary into sorted phases and an orthonormal
/// eigenbasis, via joint Jacobi diagonalization of (U+U†)/2 and (U−U†)/2i.
pub fn eigenphases<T: Scalar>(u: &UnitaryMatrix<T>) -> Result<EigenPhases<T>> {
    let d = u.d();
    let half = T::from_f64_lossy(0.5);
    let mut a = vec![Complex::zero(); d * d];
    let mut b = vec![Complex::zero(); d * d];
    for r in 0..d {
        for c in 0..d {
            let urc = u.get(r, c);
            let ucr_conj = u.get(c, r).conj();
            // A = (U + U†)/2, B = (U − U†)/(2i); both Hermitian, commuting.
            a[r * d + c] = (urc + ucr_conj) * Complex::new(half, T::zero());
            let diff = urc - ucr_conj;
            b[r * d + c] = Complex::new(diff.im * half, -diff.re * half);
        }
    }

    let w = joint_diagonalize(&mut a, &mut b, d);

    let mut order: Vec<usize> = (0..d).collect();
    let thetas: Vec<T> = (0..d)
        .map(|k| wrap_phase(b[k * d + k].re.atan2(a[k * d + k].re)))
        .collect();
    order.sort_by(|&i, &j| thetas[i].partial_cmp(&thetas[j]).expect("phases are finite"));

    let phases: Vec<T> = order.iter().map(|&k| thetas[k]).collect();
    let mut basis = vec![Complex::zero(); d * d];
    for (col, &src) in order.iter().enumerate() {
        for r in 0..d {
            basis[r * d + col] = w[r * d + src];
        }
    }
    let decomp = EigenPhases { phases, basis: UnitaryMatrix { d, entries: basis } };

    let residual = decomp.reconstruct().max_abs_diff(u);
    if residual > T::reconstruction_tol() {
        return Err(Error::ReconstructionFailed {
            residual: residual.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(decomp)
}

/// One Jacobi-style pass structure for two Hermitian matrices at once
/// (Cardoso–Souloumiac angles). Returns W with A = W diag(a) W† and
/// B = W diag(b) W† up to the size of their commutator.
fn joint_diagonalize<T: Scalar>(a: &mut [Complex<T>], b: &mut [Complex<T>], d: usize) -> Vec<Complex<T>> {
    let mut w = vec![Complex::zero(); d * d];
    for i in 0..d {
        w[i * d + i] = Complex::new(T::one(), T::zero());
    }
    if d < 2 {
        return w;
    }
    let threshold = T::epsilon() * T::from_u64_lossy(d as u64);
    for _sweep in 0..100 {
        let mut rotated = false;
        for p in 0..d - 1 {
            for q in p + 1..d {
                let off = a[p * d + q].norm() + b[p * d + q].norm();
                if off <= threshold {
                    continue;
                }
                let (c, s) = cs_rotation(a, b, d, p, q);
                // skip no-op rotations so convergence detection terminates
                if s.norm() <= T::epsilon() {
                    continue;
                }
                apply_rotation(a, d, p, q, c, s);
                apply_rotation(b, d, p, q, c, s);
                // accumulate eigenvectors: W ← W V†
                for r in 0..d {
                    let wp = w[r * d + p];
                    let wq = w[r * d + q];
                    w[r * d + p] = wp * Complex::new(c, T::zero()) + wq * s;
                    w[r * d + q] = wq * Complex::new(c, T::zero()) - wp * s.conj();
                }
                rotated = true;
            }
        }
        if !rotated {
            break;
        }
    }
    w
}

/// Optimal joint rotation for the (p,q) plane: top eigenvector of the 3×3
/// Gram matrix of [M_pp−M_qq, 2Re M_pq, 2Im M_pq] over both matrices.
fn cs_rotation<T: Scalar>(a: &[Complex<T>], b: &[Complex<T>], d: usize, p: usize, q: usize) -> (T, Complex<T>) {
    let two = T::from_f64_lossy(2.0);
    let mut g = [[T::zero(); 3]; 3];
    for m in [a, b] {
        let u = [
            m[p * d + p].re - m[q * d + q].re,
            two * m[p * d + q].re,
            two * m[p * d + q].im,
        ];
        for i in 0..3 {
            for j in 0..3 {
                g[i][j] += u[i] * u[j];
            }
        }
    }
    let mut top = sym3_top_eigenvector(g);
    if top[0] < T::zero() {
        for t in &mut top {
            *t = -*t;
        }
    }
    let x = top[0];
    let denom = (two * (x + T::one())).sqrt();
    let c = ((x + T::one()) / two).sqrt();
    let s = Complex::new(top[1] / denom, -top[2] / denom);
    (c, s)
}

/// M ← V M V† where V is identity except V[p][p]=c, V[p][q]=conj(s),
/// V[q][p]=−s, V[q][q]=c.
fn apply_rotation<T: Scalar>(m: &mut [Complex<T>], d: usize, p: usize, q: usize, c: T, s: Complex<T>) {
    let cc = Complex::new(c, T::zero());
    for col in 0..d {
        let mp = m[p * d + col];
        let mq = m[q * d + col];
        m[p * d + col] = cc * mp + s.conj() * mq;
        m[q * d + col] = cc * mq - s * mp;
    }
    for row in 0..d {
        let mp = m[row * d + p];
        let mq = m[row * d + q];
        m[row * d + p] = cc * mp + s * mq;
        m[row * d + q] = cc * mq - s.conj() * mp;
    }
}

/// Top eigenvector of a 3×3 real symmetric PSD matrix via cyclic Jacobi.
fn sym3_top_eigenvector<T: Scalar>(mut g: [[T; 3]; 3]) -> [T; 3] {
    let mut v = [[T::zero(); 3]; 3];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = T::one();
    }
    let scale = (0..3).map(|i| g[i][i].abs()).fold(T::one(), T::max);
    let tol = T::epsilon() * scale;
    for _ in 0..30 {
        let mut done = true;
        for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
            let apq = g[p][q];
            if apq.abs() <= tol {
                continue;
            }
            done = false;
            let tau = (g[q][q] - g[p][p]) / (two(apq));
            let t = if tau >= T::zero() {
                T::one() / (tau + (T::one() + tau * tau).sqrt())
            } else {
                -T::one() / (-tau + (T::one() + tau * tau).sqrt())
            };
            let c = T::one() / (T::one() + t * t).sqrt();
            let s = t * c;
            for row in g.iter_mut() {
                let grp = row[p];
                let grq = row[q];
                row[p] = c * grp - s * grq;
                row[q] = s * grp + c * grq;
            }
            let (head, tail) = g.split_at_mut(q);
            for (gpc, gqc) in head[p].iter_mut().zip(tail[0].iter_mut()) {
                let (a, b) = (*gpc, *gqc);
                *gpc = c * a - s * b;
                *gqc = s * a + c * b;
            }
            for row in v.iter_mut() {
                let vrp = row[p];
                let vrq = row[q];
                row[p] = c * vrp - s * vrq;
                row[q] = s * vrp + c * vrq;
            }
        }
        if done {
            break;
        }
    }
    let mut best = 0;
    for i in 1..3 {
        if g[i][i] > g[best][best] {
            best = i;
        }
    }
    let mut out = [v[0][best], v[1][best], v[2][best]];
    let norm = (out[0] * out[0] + out[1] * out[1] + out[2] * out[2]).sqrt();
    if norm > T::zero() {
        for o in &mut out {
            *o /= norm;
        }
    }
    out
}

fn two<T: Scalar>(x: T) -> T {
    x + x
}

/// QR-based Haar sample: complex Gaussian matrix, modified Gram–Schmidt with
/// positive-real diagonal R. Deterministic per seed; the Gaussian stream is
/// drawn in f64 so every scalar type sees the same draws.
pub fn haar_random<T: Scalar>(d: usize, seed: u64) -> UnitaryMatrix<T> {
    assert!(d >= 1, "dimension must be at least 1");
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    haar_random_using(d, &mut rng)
}

/// Haar sample drawing from a caller-managed RNG stream.
pub fn haar_random_using<T: Scalar>(d: usize, rng: &mut ChaCha12Rng) -> UnitaryMatrix<T> {
    let mut cols: Vec<Vec<Complex<T>>> = (0..d)
        .map(|_| (0..d).map(|_| complex_gaussian(rng)).collect())
        .collect();
    // MGS with one re-orthogonalization pass per column
    for j in 0..d {
        let (settled, rest) = cols.split_at_mut(j);
        let col = &mut rest[0];
        for _pass in 0..2 {
            for basis in settled.iter() {
                let mut proj = Complex::<T>::zero();
                for (b, c) in basis.iter().zip(col.iter()) {
                    proj += b.conj() * *c;
                }
                for (b, c) in basis.iter().zip(col.iter_mut()) {
                    *c -= proj * *b;
                }
            }
        }
        let norm = col
            .iter()
            .map(|z| z.norm_sqr())
            .fold(T::zero(), |acc, x| acc + x)
            .sqrt();
        debug_assert!(norm > T::epsilon(), "Gaussian column collapsed");
        for c in col.iter_mut() {
            *c /= norm;
        }
    }
    let mut entries = vec![Complex::zero(); d * d];
    for (j, col) in cols.iter().enumerate() {
        for r in 0..d {
            entries[r * d + j] = col[r];
        }
    }
    UnitaryMatrix { d, entries }
}

fn complex_gaussian<T: Scalar>(rng: &mut ChaCha12Rng) -> Complex<T> {
    // Box-Muller in f64, then convert
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    let r = (-2.0 * u1.ln()).sqrt();
    let angle = std::f64::consts::TAU * u2;
    Complex::new(
        T::from_f64_lossy(r * angle.cos() / std::f64::consts::SQRT_2),
        T::from_f64_lossy(r * angle.sin() / std::f64::consts::SQRT_2),
    )
}

/// W diag(e^{iθ}) W† for given phases; identity basis when W is None.
pub fn unitary_from_phases<T: Scalar>(phases: &[T], basis: Option<&UnitaryMatrix<T>>) -> Result<UnitaryMatrix<T>> {
    match basis {
        None => Ok(UnitaryMatrix::from_diagonal_phases(phases)),
        Some(w) => {
            if w.d() != phases.len() {
                return Err(Error::DimensionMismatch { left: w.d(), right: phases.len() });
            }
            let residual = w.unitarity_residual();
            if residual > T::unitary_tol() {
                return Err(Error::NotUnitary {
                    residual: residual.to_f64().unwrap_or(f64::NAN),
                    tolerance: T::unitary_tol().to_f64().unwrap_or(f64::NAN),
                });
            }
            let d = w.d();
            let diag = UnitaryMatrix::from_diagonal_phases(phases);
            let prod = w.mul(&diag)?.mul(&w.adjoint())?;
            Ok(UnitaryMatrix { d, entries: prod.entries })
        }
    }
}

// --- JSON wire format: row-major [re, im] pairs with d declared ---

#[derive(Serialize, Deserialize)]
struct Wire<T> {
    d: usize,
    entries: Vec<[T; 2]>,
}

impl<T: Scalar + Serialize> Serialize for UnitaryMatrix<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        Wire {
            d: self.d,
            entries: self.entries.iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de, T: Scalar + Deserialize<'de>> Deserialize<'de> for UnitaryMatrix<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = Wire::<T>::deserialize(deserializer)?;
        let entries: Vec<Complex<T>> = wire.entries.iter().map(|&[re, im]| Complex::new(re, im)).collect();
        UnitaryMatrix::new(wire.d, entries).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI, TAU};

    fn diag2(theta: f64) -> UnitaryMatrix<f64> {
        UnitaryMatrix::from_diagonal_phases(&[0.0, theta])
    }

    #[test]
    fn distance_examples() {
        let id = UnitaryMatrix::<f64>::identity(2);
        assert_eq!(distance(&id, &id).unwrap(), 0.0);

        let z = diag2(PI); // diag(1, −1), traceless against I
        assert!((distance(&id, &z).unwrap() - 1.0).abs() < 1e-15);

        let q = diag2(FRAC_PI_2);
        assert!((distance(&id, &q).unwrap() - (PI / 4.0).sin()).abs() < 1e-15);
    }

    #[test]
    fn distance_dimension_mismatch() {
        let a = UnitaryMatrix::<f64>::identity(2);
        let b = UnitaryMatrix::<f64>::identity(3);
        assert!(matches!(distance(&a, &b), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn distance_phase_invariance_and_identity() {
        for seed in 0..20u64 {
            let u = haar_random::<f64>(3, seed);
            let v = haar_random::<f64>(3, seed + 1000);
            let d0 = distance(&u, &v).unwrap();
            let d1 = distance(&u.phased(1.234), &v).unwrap();
            assert!((d0 - d1).abs() < 1e-12);

            let inner = u.inner(&v).unwrap().norm() / 3.0;
            assert!((d0 * d0 + inner * inner - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn qubit_distance_matches_sine() {
        let id = UnitaryMatrix::<f64>::identity(2);
        for k in 0..100 {
            let delta = TAU * (k as f64) / 99.0;
            let u = diag2(delta);
            let expected = (delta / 2.0).sin().abs();
            assert!((distance(&id, &u).unwrap() - expected).abs() < 1e-10, "delta={delta}");
        }
    }

    #[test]
    fn eigenphases_diag() {
        let u = diag2(PI);
        let e = eigenphases(&u).unwrap();
        assert!((e.phases()[0] - 0.0).abs() < 1e-12);
        assert!((e.phases()[1] - PI).abs() < 1e-12);
    }

    #[test]
    fn eigenphases_identity_degenerate() {
        let u = UnitaryMatrix::<f64>::identity(3);
        let e = eigenphases(&u).unwrap();
        for &p in e.phases() {
            assert!(p.abs() < 1e-12);
        }
    }

    #[test]
    fn eigenphases_haar_reconstructs() {
        for seed in 0..50u64 {
            for d in 1..=6usize {
                let u = haar_random::<f64>(d, seed * 7 + d as u64);
                let e = eigenphases(&u).unwrap();
                let residual = e.reconstruct().max_abs_diff(&u);
                assert!(residual <= 1e-8, "d={d} seed={seed} residual={residual:e}");
                assert!(e.basis().unitarity_residual() <= 1e-10);
                for w in e.phases().windows(2) {
                    assert!(w[0] <= w[1]);
                }
            }
        }
    }

    #[test]
    fn eigenphases_handles_cosine_collision() {
        // θ and 2π−θ share the same real part; B must separate them
        let u = UnitaryMatrix::from_diagonal_phases(&[1.0, TAU - 1.0]);
        let e = eigenphases(&u).unwrap();
        assert!((e.phases()[0] - 1.0).abs() < 1e-12);
        assert!((e.phases()[1] - (TAU - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn eigenphases_conjugation_invariant() {
        // phases of WUW† match those of U
        for seed in 0..10u64 {
            let u = haar_random::<f64>(3, seed);
            let w = haar_random::<f64>(3, seed + 99);
            let conj = w.mul(&u).unwrap().mul(&w.adjoint()).unwrap();
            let pu = eigenphases(&u).unwrap();
            let pc = eigenphases(&conj).unwrap();
            for (a, b) in pu.phases().iter().zip(pc.phases()) {
                let diff = (a - b).abs().min(TAU - (a - b).abs());
                assert!(diff < 1e-9, "seed={seed}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn haar_deterministic_per_seed() {
        let a = haar_random::<f64>(2, 42);
        let b = haar_random::<f64>(2, 42);
        assert_eq!(a, b);
        let c = haar_random::<f64>(2, 43);
        assert_ne!(a, c);
    }

    #[test]
    fn haar_unitarity_residual() {
        for seed in 0..200u64 {
            let u = haar_random::<f64>(4, seed);
            assert!(u.unitarity_residual() <= 1e-12, "seed={seed}");
        }
    }

    #[test]
    fn haar_mean_trace_squared() {
        // E |tr U|² = 1 for Haar measure on U(d)
        let mut rng = ChaCha12Rng::seed_from_u64(0xC0FFEE);
        let samples = 100_000;
        let mut acc = 0.0;
        for _ in 0..samples {
            let u = haar_random_using::<f64>(2, &mut rng);
            acc += u.trace().norm_sqr();
        }
        let mean = acc / samples as f64;
        assert!((mean - 1.0).abs() < 0.02, "mean={mean}");
    }

    #[test]
    fn from_phases_round_trip() {
        let u = unitary_from_phases(&[0.0, PI], None).unwrap();
        assert_eq!(u, diag2(PI));

        let id = unitary_from_phases(&[0.0, 0.0, 0.0], Some(&haar_random::<f64>(3, 5))). unwrap();
        assert!(id.max_abs_diff(&UnitaryMatrix::identity(3)) < 1e-12);

        let w = haar_random::<f64>(4, 17);
        let phases = [0.3, 1.1, 2.9, 5.5];
        let u = unitary_from_phases(&phases, Some(&w)).unwrap();
        let recovered = eigenphases(&u).unwrap();
        for (a, b) in recovered.phases().iter().zip(phases.iter()) {
            assert!((a - b).abs() < 1e-8, "{a} vs {b}");
        }
    }

    #[test]
    fn from_phases_unsorted_keeps_diagonal_order() {
        // sorting the phases permutes the basis, not the matrix
        let phases = [4.0, 0.5, 2.0];
        let e = EigenPhases::from_phases(&phases);
        assert!(e.phases().windows(2).all(|w| w[0] <= w[1]));
        let direct = UnitaryMatrix::from_diagonal_phases(&phases);
        assert!(e.reconstruct().max_abs_diff(&direct) < 1e-12);
    }

    #[test]
    fn constructor_rejects_nonunitary() {
        let entries = vec![
            Complex::new(1.0, 0.0),
            Complex::new(0.1, 0.0),
            Complex::new(0.0, 0.0),
            Complex::new(1.0, 0.0),
        ];
        assert!(matches!(
            UnitaryMatrix::<f64>::new(2, entries),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn wire_format_round_trip() {
        let u = haar_random::<f64>(3, 7);
        let json = serde_json::to_string(&u).unwrap();
        assert!(json.contains("\"d\":3"));
        let back: UnitaryMatrix<f64> = serde_json::from_str(&json).unwrap();
        assert!(u.max_abs_diff(&back) < 1e-15);

        let bad = r#"{"d":2,"entries":[[1.0,0.0],[0.5,0.0],[0.0,0.0],[1.0,0.0]]}"#;
        assert!(serde_json::from_str::<UnitaryMatrix<f64>>(bad).is_err());
    }

    #[test]
    fn f32_path_works() {
        let u = haar_random::<f32>(3, 9);
        assert!(u.unitarity_residual() <= f32::unitary_tol());
        let e = eigenphases(&u).unwrap();
        assert!(e.reconstruct().max_abs_diff(&u) <= f32::reconstruction_tol());
    }
}
