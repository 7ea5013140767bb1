//! Dense complex matrices and Hermitian spectral calculus.
//!
//! Dimensions in this crate stay small (at most 16), so everything is a plain
//! row-major `Vec<C64>` and the eigensolver is a cyclic complex Jacobi sweep.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Absolute Hermiticity tolerance applied to validated inputs.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues in `[-PSD_TOL, 0)` are treated as rounding noise and clipped.
pub const PSD_TOL: f64 = 1e-9;
/// Relative eigenvalue floor below which an eigenvalue counts as zero in
/// spectral functions (`0^p := 0`).
pub const ZERO_EIGENVALUE: f64 = 1e-14;

const JACOBI_MAX_SWEEPS: usize = 64;

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Square complex matrix stored row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    /// Builds a matrix from rows, rejecting ragged or non-finite input.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::InvalidParameter("empty matrix".into()));
        }
        let mut data = Vec::with_capacity(dim * dim);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::NotSquare {
                    rows: dim,
                    row: r,
                    len: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        let m = Self { dim, data };
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(m)
    }

    /// Builds a matrix from separate real and imaginary parts.
    pub fn from_real_imag(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<Self> {
        if re.len() != im.len() {
            return Err(Error::DimensionMismatch {
                expected: re.len(),
                found: im.len(),
            });
        }
        let rows: Vec<Vec<C64>> = re
            .iter()
            .zip(im)
            .enumerate()
            .map(|(r, (a, b))| {
                if a.len() != b.len() {
                    Err(Error::NotSquare {
                        rows: re.len(),
                        row: r,
                        len: b.len(),
                    })
                } else {
                    Ok(a.iter().zip(b).map(|(&x, &y)| C64::new(x, y)).collect())
                }
            })
            .collect::<Result<_>>()?;
        Self::from_rows(&rows)
    }

    /// `|v><v|`.
    pub fn outer(v: &[C64]) -> Self {
        Self::from_fn(v.len(), |i, j| v[i] * v[j].conj())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn real_parts(&self) -> Vec<Vec<f64>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self[(i, j)].re).collect())
            .collect()
    }

    pub fn imag_parts(&self) -> Vec<Vec<f64>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self[(i, j)].im).collect())
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// `Tr(AB)` without forming the product.
    pub fn trace_of_product(&self, other: &Self) -> C64 {
        debug_assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..n {
            for k in 0..n {
                acc += self.data[i * n + k] * other.data[k * n + i];
            }
        }
        acc
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_complex(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max-entry distance to another matrix of the same size.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Max-entry deviation from Hermiticity.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// `(A + A^†)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.dim, |i, j| 0.5 * (self[(i, j)] + self[(j, i)].conj()))
    }

    pub fn kron(&self, other: &Self) -> Self {
        let (n, m) = (self.dim, other.dim);
        Self::from_fn(n * m, |i, j| self[(i / m, j / m)] * other[(i % m, j % m)])
    }

    /// Block-diagonal `A ⊕ B`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let n = self.dim;
        Self::from_fn(n + other.dim, |i, j| match (i < n, j < n) {
            (true, true) => self[(i, j)],
            (false, false) => other[(i - n, j - n)],
            _ => C64::new(0.0, 0.0),
        })
    }

    /// `U A U^†`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        &(u * self) * &u.adjoint()
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// `<v|A|v>`.
    pub fn expectation(&self, v: &[C64]) -> C64 {
        let av = self.apply(v);
        v.iter().zip(&av).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn unitarity_defect(&self) -> f64 {
        (self * &self.adjoint()).max_abs_diff(&Self::identity(self.dim))
    }

    pub(crate) fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix product dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix sum dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix difference dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale(-1.0)
    }
}

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        assert_eq!(self.dim, rhs.dim, "matrix sum dimension mismatch");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

/// `[A, B] = AB - BA`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    &(a * b) - &(b * a)
}

/// Eigen-decomposition of a Hermitian matrix: `m = V diag(values) V^†`,
/// eigenvalues sorted in descending order, eigenvectors as columns of `V`.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `V diag(f(λ)) V^†`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.vectors.dim();
        let fl: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        let v = &self.vectors;
        ComplexMatrix::from_fn(n, |i, j| {
            let mut acc = C64::new(0.0, 0.0);
            for (k, &w) in fl.iter().enumerate() {
                if w != 0.0 {
                    acc += v[(i, k)] * v[(j, k)].conj() * w;
                }
            }
            acc
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map(|l| l)
    }

    /// Column `k` of the eigenvector matrix.
    pub fn vector(&self, k: usize) -> Vec<C64> {
        let n = self.vectors.dim();
        (0..n).map(|i| self.vectors[(i, k)]).collect()
    }
}

/// Hermitian eigendecomposition with input validation.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianEigen> {
    check_hermitian(m)?;
    let (values, vectors) = jacobi(&m.hermitian_part(), true);
    Ok(HermitianEigen {
        values,
        vectors: vectors.expect("vectors requested"),
    })
}

/// Eigenvalues (descending) of a matrix that is Hermitian up to rounding; the
/// Hermitian part is used without validation.
pub fn eigvalsh(m: &ComplexMatrix) -> Vec<f64> {
    jacobi(&m.hermitian_part(), false).0
}

/// Eigendecomposition of the Hermitian part, without validation.
pub(crate) fn eigh_unchecked(m: &ComplexMatrix) -> HermitianEigen {
    let (values, vectors) = jacobi(&m.hermitian_part(), true);
    HermitianEigen {
        values,
        vectors: vectors.expect("vectors requested"),
    }
}

fn check_hermitian(m: &ComplexMatrix) -> Result<()> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let defect = m.hermiticity_defect();
    if defect > HERMITIAN_TOL * m.max_abs().max(1.0) {
        return Err(Error::NotHermitian { deviation: defect });
    }
    Ok(())
}

/// Cyclic Jacobi for a Hermitian matrix. Each rotation zeroes one
/// off-diagonal pair; sweeps continue until the off-diagonal mass is at
/// rounding level.
fn jacobi(m: &ComplexMatrix, want_vectors: bool) -> (Vec<f64>, Option<ComplexMatrix>) {
    let n = m.dim();
    let mut a = m.clone();
    let mut v = want_vectors.then(|| ComplexMatrix::identity(n));
    let scale = a.frobenius_norm();
    if n > 1 && scale > 0.0 {
        let threshold = (f64::EPSILON * scale).powi(2);
        for _ in 0..JACOBI_MAX_SWEEPS {
            let mut off = 0.0;
            for p in 0..n {
                for q in (p + 1)..n {
                    off += a[(p, q)].norm_sqr();
                }
            }
            if off <= threshold {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    rotate(&mut a, v.as_mut(), p, q);
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = v.map(|v| ComplexMatrix::from_fn(n, |i, k| v[(i, order[k])]));
    (values, vectors)
}

fn rotate(a: &mut ComplexMatrix, v: Option<&mut ComplexMatrix>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag <= f64::MIN_POSITIVE * 1e10 {
        return;
    }
    let phase = apq / mag;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    // J = [[c, s e^{iφ}], [-s e^{-iφ}, c]] on (p, q); A <- J^† A J.
    let jpq = phase * s;
    let jqp = -phase.conj() * s;
    let n = a.dim();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c + akq * jqp;
        a[(k, q)] = akp * jpq + akq * c;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c + aqk * jqp.conj();
        a[(q, k)] = apk * jpq.conj() + aqk * c;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(app - t * mag, 0.0);
    a[(q, q)] = C64::new(aqq + t * mag, 0.0);
    if let Some(v) = v {
        for k in 0..n {
            let vkp = v[(k, p)];
            let vkq = v[(k, q)];
            v[(k, p)] = vkp * c + vkq * jqp;
            v[(k, q)] = vkp * jpq + vkq * c;
        }
    }
}

/// Validates positive semidefiniteness of a Hermitian eigen-spectrum.
pub(crate) fn check_psd_spectrum(values: &[f64]) -> Result<()> {
    if let Some(&min) = values.last() {
        if min < -PSD_TOL {
            return Err(Error::NotPsd {
                min_eigenvalue: min,
            });
        }
    }
    Ok(())
}

#[inline]
pub(crate) fn zero_floor(values: &[f64]) -> f64 {
    ZERO_EIGENVALUE * values.first().copied().unwrap_or(0.0).max(1.0)
}

/// Power `p` of a PSD eigen-spectrum with the support convention `0^p := 0`.
pub(crate) fn power_of_spectrum(eig: &HermitianEigen, p: f64) -> ComplexMatrix {
    let floor = zero_floor(&eig.values);
    eig.map(|l| if l > floor { l.powf(p) } else { 0.0 })
}

/// Spectral power of a PSD matrix. Eigenvalues in `[-1e-9, 0)` are clipped to
/// zero and `0^p := 0`, so negative `p` gives the power on the support.
pub fn frac_power(m: &ComplexMatrix, p: f64) -> Result<ComplexMatrix> {
    if !p.is_finite() {
        return Err(Error::InvalidParameter(format!("power {p} is not finite")));
    }
    let eig = hermitian_eig(m)?;
    check_psd_spectrum(&eig.values)?;
    Ok(power_of_spectrum(&eig, p))
}

/// Unvalidated spectral power of a matrix known to be PSD up to rounding.
pub(crate) fn psd_power(m: &ComplexMatrix, p: f64) -> ComplexMatrix {
    power_of_spectrum(&eigh_unchecked(m), p)
}

/// `Tr(m^p)` for a PSD matrix, eigenvalues only.
pub(crate) fn psd_trace_power(m: &ComplexMatrix, p: f64) -> f64 {
    let vals = eigvalsh(m);
    let floor = zero_floor(&vals);
    vals.iter()
        .filter(|&&l| l > floor)
        .map(|&l| l.powf(p))
        .sum()
}

/// Sum of singular values.
pub fn trace_norm(m: &ComplexMatrix) -> f64 {
    if m.is_hermitian(1e-14 * m.max_abs().max(1.0)) {
        eigvalsh(m).iter().map(|l| l.abs()).sum()
    } else {
        // eigenvalues of [[0, m], [m^†, 0]] are ± the singular values of m
        let n = m.dim();
        let dilation = ComplexMatrix::from_fn(2 * n, |i, j| match (i < n, j < n) {
            (true, false) => m[(i, j - n)],
            (false, true) => m[(j, i - n)].conj(),
            _ => c64(0.0, 0.0),
        });
        0.5 * eigvalsh(&dilation).iter().map(|l| l.abs()).sum::<f64>()
    }
}

/// Logarithm base for entropic quantities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum LogBase {
    #[default]
    Bits,
    Nats,
}

impl LogBase {
    #[inline]
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Bits => x.log2(),
            LogBase::Nats => x.ln(),
        }
    }
}

/// `-Σ λ log λ` over a spectrum with `0 log 0 := 0`.
pub(crate) fn spectrum_entropy(values: &[f64], base: LogBase) -> f64 {
    values
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * base.log(l))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_hermitian() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[
            vec![c64(2.0, 0.0), c64(0.5, 0.3), c64(0.0, -1.0)],
            vec![c64(0.5, -0.3), c64(-1.0, 0.0), c64(0.2, 0.2)],
            vec![c64(0.0, 1.0), c64(0.2, -0.2), c64(0.5, 0.0)],
        ])
        .unwrap()
    }

    #[test]
    fn identity_spectrum() {
        let eig = hermitian_eig(&ComplexMatrix::identity(4)).unwrap();
        assert!(eig.values.iter().all(|&l| (l - 1.0).abs() < 1e-15));
    }

    #[test]
    fn diagonal_spectrum_sorted() {
        let eig = hermitian_eig(&ComplexMatrix::from_real_diagonal(&[0.3, 0.7])).unwrap();
        assert_eq!(eig.values, vec![0.7, 0.3]);
    }

    #[test]
    fn reconstructs_and_is_unitary() {
        let m = sample_hermitian();
        let eig = hermitian_eig(&m).unwrap();
        assert!(eig.reconstruct().max_abs_diff(&m) < 1e-12);
        assert!(eig.vectors.unitarity_defect() < 1e-12);
        assert!(eig.values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = sample_hermitian();
        m[(0, 1)] = c64(3.0, 0.0);
        assert!(matches!(hermitian_eig(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn frac_power_conventions() {
        let id = ComplexMatrix::identity(4);
        assert!(frac_power(&id, 0.37).unwrap().max_abs_diff(&id) < 1e-14);
        let d = frac_power(&ComplexMatrix::from_real_diagonal(&[4.0, 0.0]), 0.5).unwrap();
        assert!(d.max_abs_diff(&ComplexMatrix::from_real_diagonal(&[2.0, 0.0])) < 1e-14);
        let inv = frac_power(&ComplexMatrix::from_real_diagonal(&[4.0, 0.0]), -0.5).unwrap();
        assert!(inv.max_abs_diff(&ComplexMatrix::from_real_diagonal(&[0.5, 0.0])) < 1e-14);
    }

    #[test]
    fn frac_power_rejects_indefinite() {
        let m = ComplexMatrix::from_real_diagonal(&[1.0, -1e-6]);
        assert!(matches!(frac_power(&m, 0.5), Err(Error::NotPsd { .. })));
        // rounding-level negativity is clipped
        let m = ComplexMatrix::from_real_diagonal(&[1.0, -1e-12]);
        assert!(frac_power(&m, 0.5).is_ok());
    }

    #[test]
    fn trace_norm_cases() {
        assert_eq!(trace_norm(&ComplexMatrix::zeros(3)), 0.0);
        let m = ComplexMatrix::from_real_diagonal(&[0.5, -0.5]);
        assert!((trace_norm(&m) - 1.0).abs() < 1e-15);
        // non-Hermitian: single entry 2 at (0,1) has singular values (2, 0)
        let mut n = ComplexMatrix::zeros(2);
        n[(0, 1)] = c64(0.0, 2.0);
        assert!((trace_norm(&n) - 2.0).abs() < 1e-14);
        // rank one: the zero singular values must not leak in as sqrt(rounding)
        let mut r = ComplexMatrix::zeros(4);
        r[(0, 1)] = c64(0.3, -0.1);
        r[(0, 2)] = c64(0.05, 0.2);
        r[(0, 3)] = c64(-0.07, 0.0);
        let want = (0.09f64 + 0.01 + 0.0025 + 0.04 + 0.0049).sqrt();
        assert!((trace_norm(&r) - want).abs() < 1e-15, "{}", trace_norm(&r) - want);
    }

    #[test]
    fn kron_and_direct_sum_shapes() {
        let a = ComplexMatrix::from_real_diagonal(&[1.0, 2.0]);
        let b = ComplexMatrix::from_real_diagonal(&[3.0, 5.0]);
        let k = a.kron(&b);
        assert_eq!(k.dim(), 4);
        assert_eq!(k[(3, 3)], c64(10.0, 0.0));
        let s = a.direct_sum(&b);
        assert_eq!(s[(2, 2)], c64(3.0, 0.0));
        assert_eq!(s[(0, 2)], c64(0.0, 0.0));
    }

    #[test]
    fn entropy_of_spectrum() {
        let h = spectrum_entropy(&[0.75, 0.25], LogBase::Bits);
        assert!((h - 0.811_278_124_459_132_8).abs() < 1e-12);
        assert!((spectrum_entropy(&[0.5, 0.5], LogBase::Nats) - 2f64.ln()).abs() < 1e-15);
    }
}
