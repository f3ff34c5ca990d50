//! Dense complex linear algebra for small Hilbert spaces.
//!
//! Matrices are square and stored row-major. Tensor products use the
//! big-endian convention: the first factor is the slow (major) index, so
//! `tensor(a, b)[(i·db + k, j·db + l)] == a[(i, j)] · b[(k, l)]`. Every module
//! in the crate relies on this single convention.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub type Complex = num_complex::Complex64;

/// Largest dimension accepted by any constructor or tensor product.
pub const MAX_DIM: usize = 4096;
/// Absolute entrywise tolerance for Hermiticity checks.
pub const HERMITIAN_TOL: f64 = 1e-9;
/// Tolerance on `|⟨ψ|ψ⟩ − 1|` and on `|Tr ρ − 1|`.
pub const NORM_TOL: f64 = 1e-9;
/// A density matrix may have eigenvalues down to `-PSD_TOL`.
pub const PSD_TOL: f64 = 1e-9;
/// Iteration cap for [`spectral_radius`].
pub const MAX_POWER_ITERATIONS: usize = 100_000;

pub const ZERO: Complex = Complex64::new(0.0, 0.0);
pub const ONE: Complex = Complex64::new(1.0, 0.0);
pub const I: Complex = Complex64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> Complex {
    Complex64::new(re, im)
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    if dim > MAX_DIM {
        return Err(Error::DimensionTooLarge(dim));
    }
    Ok(())
}

fn check_finite(entries: &[Complex], what: &'static str) -> Result<()> {
    if entries.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

/// Column vector of complex amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector {
    entries: Vec<Complex>,
}

impl Vector {
    pub fn new(entries: Vec<Complex>) -> Result<Self> {
        check_dim(entries.len())?;
        check_finite(&entries, "vector")?;
        Ok(Self { entries })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| c(x, 0.0)).collect())
    }

    /// Computational basis vector `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        check_dim(dim)?;
        if index >= dim {
            return Err(Error::InvalidArgument(format!("basis index {index} out of range for dimension {dim}")));
        }
        let mut entries = vec![ZERO; dim];
        entries[index] = ONE;
        Ok(Self { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Complex] {
        &self.entries
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::Numerical("cannot normalize the zero vector".into()));
        }
        Ok(self.scale(c(1.0 / n, 0.0)))
    }

    pub fn scale(&self, k: Complex) -> Self {
        Self { entries: self.entries.iter().map(|z| z * k).collect() }
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Vector) -> Result<Complex> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: other.dim() });
        }
        Ok(self.entries.iter().zip(&other.entries).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn add(&self, other: &Vector) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: other.dim() });
        }
        Ok(Self { entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect() })
    }

    /// Projector-like outer product `|self⟩⟨self|`.
    pub fn projector(&self) -> Matrix {
        Matrix::outer(self, self)
    }
}

impl Index<usize> for Vector {
    type Output = Complex;
    fn index(&self, i: usize) -> &Complex {
        &self.entries[i]
    }
}

/// Square complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    dim: usize,
    entries: Vec<Complex>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix({}x{})", self.dim, self.dim)?;
        for r in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|col| {
                    let z = self[(r, col)];
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self { dim, entries: vec![ZERO; dim * dim] })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        Ok(m)
    }

    pub fn from_entries(dim: usize, entries: Vec<Complex>) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, got: entries.len() });
        }
        check_finite(&entries, "matrix")?;
        Ok(Self { dim, entries })
    }

    pub fn from_rows(rows: &[Vec<Complex>]) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: row.len() });
            }
            entries.extend_from_slice(row);
        }
        Self::from_entries(dim, entries)
    }

    /// Row-major real matrix.
    pub fn from_real(dim: usize, values: &[f64]) -> Result<Self> {
        Self::from_entries(dim, values.iter().map(|&x| c(x, 0.0)).collect())
    }

    pub fn diag(values: &[Complex]) -> Result<Self> {
        let mut m = Self::zeros(values.len())?;
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        check_finite(&m.entries, "matrix")?;
        Ok(m)
    }

    /// `|ket⟩⟨bra|`.
    pub fn outer(ket: &Vector, bra: &Vector) -> Matrix {
        assert_eq!(ket.dim(), bra.dim(), "outer product of mismatched vectors");
        let dim = ket.dim();
        let mut entries = Vec::with_capacity(dim * dim);
        for k in ket.entries() {
            for b in bra.entries() {
                entries.push(k * b.conj());
            }
        }
        Matrix { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex] {
        &self.entries
    }

    pub fn row(&self, r: usize) -> &[Complex] {
        &self.entries[r * self.dim..(r + 1) * self.dim]
    }

    pub fn adjoint(&self) -> Matrix {
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for r in 0..n {
            for col in 0..n {
                out[col * n + r] = self.entries[r * n + col].conj();
            }
        }
        Matrix { dim: n, entries: out }
    }

    pub fn trace(&self) -> Complex {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, k: Complex) -> Matrix {
        Matrix { dim: self.dim, entries: self.entries.iter().map(|z| z * k).collect() }
    }

    fn same_dim(&self, other: &Matrix) -> Result<()> {
        if self.dim != other.dim {
            Err(Error::DimensionMismatch { expected: self.dim, got: other.dim })
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Matrix) -> Result<Matrix> {
        self.same_dim(other)?;
        Ok(Matrix { dim: self.dim, entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect() })
    }

    pub fn try_sub(&self, other: &Matrix) -> Result<Matrix> {
        self.try_add(&other.scale(c(-1.0, 0.0)))
    }

    pub fn try_mul(&self, other: &Matrix) -> Result<Matrix> {
        self.same_dim(other)?;
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for r in 0..n {
            let out_row = &mut out[r * n..(r + 1) * n];
            for k in 0..n {
                let a = self.entries[r * n + k];
                if a == ZERO {
                    continue;
                }
                let b_row = &other.entries[k * n..(k + 1) * n];
                for (o, b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        Ok(Matrix { dim: n, entries: out })
    }

    pub fn apply(&self, v: &Vector) -> Result<Vector> {
        if v.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: v.dim() });
        }
        Ok(Vector { entries: self.apply_raw(v.entries()) })
    }

    fn apply_raw(&self, v: &[Complex]) -> Vec<Complex> {
        (0..self.dim).map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &Matrix) -> Result<Matrix> {
        self.try_mul(other)?.try_sub(&other.try_mul(self)?)
    }

    /// `{self, other} = self·other + other·self`.
    pub fn anticommutator(&self, other: &Matrix) -> Result<Matrix> {
        self.try_mul(other)?.try_add(&other.try_mul(self)?)
    }

    /// Largest entrywise `|self − other|`; infinite when dimensions differ.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.entries.iter().zip(&other.entries).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for r in 0..n {
            for col in r..n {
                let d = (self[(r, col)] - self[(col, r)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// True when `self + tol·I` admits a Cholesky factorization, i.e. every
    /// eigenvalue of a Hermitian `self` exceeds `-tol`.
    pub fn is_positive_semidefinite(&self, tol: f64) -> bool {
        let n = self.dim;
        let mut l = vec![ZERO; n * n];
        for j in 0..n {
            let mut d = self[(j, j)].re + tol;
            for k in 0..j {
                d -= l[j * n + k].norm_sqr();
            }
            if d <= 0.0 || !d.is_finite() {
                return false;
            }
            let ljj = d.sqrt();
            l[j * n + j] = c(ljj, 0.0);
            for i in j + 1..n {
                let mut s = self[(i, j)];
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k].conj();
                }
                l[i * n + j] = s / ljj;
            }
        }
        true
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Complex;
    fn index(&self, (r, col): (usize, usize)) -> &Complex {
        &self.entries[r * self.dim + col]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, col): (usize, usize)) -> &mut Complex {
        &mut self.entries[r * self.dim + col]
    }
}

// Operator sugar for code paths where dimensions are known to agree.
// Mismatches panic; use the `try_*` methods for untrusted input.

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.try_mul(rhs).expect("matrix product dimension mismatch")
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        self.try_add(rhs).expect("matrix sum dimension mismatch")
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        self.try_sub(rhs).expect("matrix difference dimension mismatch")
    }
}

/// Kronecker product with `a` as the major factor.
pub fn tensor(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    let dim = a
        .dim
        .checked_mul(b.dim)
        .filter(|&d| d <= MAX_DIM)
        .ok_or(Error::DimensionTooLarge(a.dim.saturating_mul(b.dim)))?;
    let mut entries = vec![ZERO; dim * dim];
    for ar in 0..a.dim {
        for ac in 0..a.dim {
            let x = a[(ar, ac)];
            if x == ZERO {
                continue;
            }
            for br in 0..b.dim {
                let row = ar * b.dim + br;
                for bc in 0..b.dim {
                    entries[row * dim + ac * b.dim + bc] = x * b[(br, bc)];
                }
            }
        }
    }
    Ok(Matrix { dim, entries })
}

/// Left-to-right Kronecker product of all factors.
pub fn tensor_all<'a, I>(factors: I) -> Result<Matrix>
where
    I: IntoIterator<Item = &'a Matrix>,
{
    let mut iter = factors.into_iter();
    let first = iter.next().ok_or_else(|| Error::InvalidArgument("empty tensor product".into()))?;
    iter.try_fold(first.clone(), |acc, m| tensor(&acc, m))
}

/// Kronecker product of vectors, `a` major.
pub fn tensor_vec(a: &Vector, b: &Vector) -> Result<Vector> {
    let dim = a.dim() * b.dim();
    check_dim(dim)?;
    let mut entries = Vec::with_capacity(dim);
    for x in a.entries() {
        for y in b.entries() {
            entries.push(x * y);
        }
    }
    Ok(Vector { entries })
}

/// `⟨ψ|op|ψ⟩` for a normalized `ψ`.
pub fn expectation(op: &Matrix, psi: &Vector) -> Result<Complex> {
    if op.dim() != psi.dim() {
        return Err(Error::DimensionMismatch { expected: op.dim(), got: psi.dim() });
    }
    let n2 = psi.norm_sqr();
    if (n2 - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized(n2));
    }
    psi.inner(&op.apply(psi)?)
}

/// Checks Hermiticity, unit trace and positivity of `rho`.
pub fn validate_density(rho: &Matrix) -> Result<()> {
    let dev = rho.hermitian_deviation();
    if dev > HERMITIAN_TOL {
        return Err(Error::InvalidDensityMatrix(format!("not Hermitian (deviation {dev:e})")));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > NORM_TOL || tr.im.abs() > NORM_TOL {
        return Err(Error::InvalidDensityMatrix(format!("trace is {}{:+}i", tr.re, tr.im)));
    }
    if !rho.is_positive_semidefinite(PSD_TOL) {
        return Err(Error::InvalidDensityMatrix(format!("eigenvalue below -{PSD_TOL:e}")));
    }
    Ok(())
}

/// `Tr[ρ·op]` for a valid density matrix `ρ`.
pub fn expectation_mixed(op: &Matrix, rho: &Matrix) -> Result<Complex> {
    if op.dim() != rho.dim() {
        return Err(Error::DimensionMismatch { expected: op.dim(), got: rho.dim() });
    }
    validate_density(rho)?;
    Ok(trace_of_product(rho, op))
}

/// `Tr[a·b]` without forming the product.
pub(crate) fn trace_of_product(a: &Matrix, b: &Matrix) -> Complex {
    let n = a.dim();
    let mut acc = ZERO;
    for r in 0..n {
        for k in 0..n {
            acc += a[(r, k)] * b[(k, r)];
        }
    }
    acc
}

/// Largest `|λ|` of a Hermitian operator.
///
/// Power iteration on `op²` from a fixed pseudo-random start vector;
/// `‖op·v‖` converges to the spectral radius once `v` lies in the dominant
/// eigenspace of `op²`, which also absorbs `±λ` degeneracies.
pub fn spectral_radius(op: &Matrix) -> Result<f64> {
    let dev = op.hermitian_deviation();
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian(dev));
    }
    let n = op.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(0x005e_ed0f_5ec7);
    let mut v: Vec<Complex> = (0..n).map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
    normalize_in_place(&mut v);

    let mut prev = f64::NAN;
    let mut stable = 0;
    for _ in 0..MAX_POWER_ITERATIONS {
        let u = op.apply_raw(&v);
        let radius = l2(&u);
        if radius == 0.0 {
            // op·v vanishes on a generic vector only for op == 0
            if op.entries().iter().all(|z| *z == ZERO) {
                return Ok(0.0);
            }
            return Err(Error::Numerical("power iteration collapsed".into()));
        }
        if (radius - prev).abs() <= 1e-14 * radius {
            stable += 1;
            if stable >= 3 {
                return Ok(radius);
            }
        } else {
            stable = 0;
        }
        prev = radius;
        v = op.apply_raw(&u);
        if l2(&v) == 0.0 {
            return Err(Error::Numerical("power iteration collapsed".into()));
        }
        normalize_in_place(&mut v);
    }
    Err(Error::Numerical(format!("spectral radius did not converge within {MAX_POWER_ITERATIONS} iterations")))
}

fn l2(v: &[Complex]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn normalize_in_place(v: &mut [Complex]) {
    let n = l2(v);
    for z in v.iter_mut() {
        *z /= n;
    }
}

/// Pauli matrices in the `{|0⟩, |1⟩}` basis.
pub mod pauli {
    use super::*;

    pub fn x() -> Matrix {
        Matrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    pub fn y() -> Matrix {
        Matrix::from_entries(2, vec![ZERO, -I, I, ZERO]).unwrap()
    }

    pub fn z() -> Matrix {
        Matrix::from_real(2, &[1.0, 0.0, 0.0, -1.0]).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn sqrt2() -> f64 {
        std::f64::consts::SQRT_2
    }

    #[test]
    fn identity_tensor_identity() {
        let i2 = Matrix::identity(2).unwrap();
        assert_eq!(tensor(&i2, &i2).unwrap(), Matrix::identity(4).unwrap());
    }

    #[test]
    fn zz_is_diag_pm() {
        // hand expansion of σz⊗σz
        let zz = tensor(&pauli::z(), &pauli::z()).unwrap();
        let expected = Matrix::diag(&[ONE, -ONE, -ONE, ONE]).unwrap();
        assert_eq!(zz, expected);
    }

    #[test]
    fn tensor_major_factor_is_first() {
        let a = Matrix::from_real(2, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        let b = Matrix::from_real(2, &[0.0, 5.0, 6.0, 7.0]).unwrap();
        let k = tensor(&a, &b).unwrap();
        // a[(0,1)] * b[(1,0)] lands at row 0*2+1, col 1*2+0
        assert_eq!(k[(1, 2)], c(12.0, 0.0));
        assert_eq!(k[(3, 3)], c(28.0, 0.0));
    }

    #[test]
    fn tensor_rejects_oversized() {
        let a = Matrix::identity(64).unwrap();
        let b = Matrix::identity(128).unwrap();
        assert!(matches!(tensor(&a, &b), Err(Error::DimensionTooLarge(8192))));
    }

    #[test]
    fn constructors_reject_nan() {
        assert!(matches!(Matrix::from_real(1, &[f64::NAN]), Err(Error::NonFinite(_))));
        assert!(Vector::from_real(&[f64::INFINITY]).is_err());
        assert!(Matrix::from_entries(2, vec![ONE; 3]).is_err());
    }

    #[test]
    fn expectation_bell_states() {
        let h = 1.0 / sqrt2();
        let phi_minus = Vector::from_real(&[h, 0.0, 0.0, -h]).unwrap();
        let zz = tensor(&pauli::z(), &pauli::z()).unwrap();
        assert_abs_diff_eq!(expectation(&zz, &phi_minus).unwrap().re, 1.0, epsilon = 1e-15);

        let psi_plus = Vector::from_real(&[0.0, h, h, 0.0]).unwrap();
        let yy = tensor(&pauli::y(), &pauli::y()).unwrap();
        let e = expectation(&yy, &psi_plus).unwrap();
        assert_abs_diff_eq!(e.re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(e.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn expectation_errors() {
        let op = Matrix::identity(4).unwrap();
        let short = Vector::from_real(&[1.0, 0.0]).unwrap();
        assert!(matches!(expectation(&op, &short), Err(Error::DimensionMismatch { .. })));
        let unnorm = Vector::from_real(&[1.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(expectation(&op, &unnorm), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn expectation_mixed_cases() {
        let mixed = Matrix::identity(4).unwrap().scale(c(0.25, 0.0));
        let zz = tensor(&pauli::z(), &pauli::z()).unwrap();
        assert_abs_diff_eq!(expectation_mixed(&zz, &mixed).unwrap().re, 0.0);
        assert_abs_diff_eq!(expectation_mixed(&Matrix::identity(4).unwrap(), &mixed).unwrap().re, 1.0);

        let h = 1.0 / sqrt2();
        let phi_minus = Vector::from_real(&[h, 0.0, 0.0, -h]).unwrap();
        let xx = tensor(&pauli::x(), &pauli::x()).unwrap();
        let e = expectation_mixed(&xx, &phi_minus.projector()).unwrap();
        assert_abs_diff_eq!(e.re, -1.0, epsilon = 1e-15);
    }

    #[test]
    fn invalid_density_rejected() {
        let not_psd = Matrix::diag(&[c(1.5, 0.0), c(-0.5, 0.0)]).unwrap();
        assert!(matches!(validate_density(&not_psd), Err(Error::InvalidDensityMatrix(_))));
        let bad_trace = Matrix::identity(2).unwrap();
        assert!(validate_density(&bad_trace).is_err());
        let not_herm = Matrix::from_entries(2, vec![c(0.5, 0.0), ONE, ZERO, c(0.5, 0.0)]).unwrap();
        assert!(validate_density(&not_herm).is_err());
        // tiny negative eigenvalue inside tolerance is accepted
        let nearly = Matrix::diag(&[c(1.0 + 1e-10, 0.0), c(-1e-10, 0.0)]).unwrap();
        assert!(validate_density(&nearly).is_ok());
    }

    #[test]
    fn spectral_radius_basic() {
        assert_abs_diff_eq!(spectral_radius(&Matrix::identity(7).unwrap()).unwrap(), 1.0, epsilon = 1e-12);
        assert_eq!(spectral_radius(&Matrix::zeros(3).unwrap()).unwrap(), 0.0);
        let d = Matrix::diag(&[c(-3.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]).unwrap();
        assert_abs_diff_eq!(spectral_radius(&d).unwrap(), 3.0, epsilon = 1e-12);
    }

    #[test]
    fn spectral_radius_rejects_non_hermitian() {
        let m = Matrix::from_real(2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(spectral_radius(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn anticommuting_paulis() {
        let ac = pauli::x().anticommutator(&pauli::z()).unwrap();
        assert_eq!(ac, Matrix::zeros(2).unwrap());
    }
}
