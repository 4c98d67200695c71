//! Dense complex linear algebra for 2..=8 dimensional operators.
//!
//! Composite indices are big-endian: for subsystem dimensions `[d0, d1, d2]`
//! the basis state `|i0 i1 i2⟩` sits at index `(i0 * d1 + i1) * d2 + i2`, so
//! for three qubits `|lmn⟩ ↔ 4l + 2m + n`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 8;

/// Max `|M - M†|` entry accepted as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Max `|tr M - 1|` accepted for a density matrix.
pub const TRACE_TOL: f64 = 1e-12;
/// Eigenvalues in `[-PSD_WINDOW, 0)` are roundoff and clamp to zero; below is an error.
pub const PSD_WINDOW: f64 = 1e-10;

const JACOBI_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<C64>,
}

fn check_dim(dim: usize) -> Result<()> {
    if (MIN_DIM..=MAX_DIM).contains(&dim) {
        Ok(())
    } else {
        Err(Error::InvalidDimension(dim))
    }
}

impl ComplexMatrix {
    pub fn new(dim: usize, entries: Vec<C64>) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                actual: entries.len(),
            });
        }
        Ok(Self { dim, entries })
    }

    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        Self::new(dim, entries.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// Builds a matrix and checks it is Hermitian with unit trace.
    pub fn density(dim: usize, entries: Vec<C64>) -> Result<Self> {
        let m = Self::new(dim, entries)?;
        m.check_hermitian_unit_trace()?;
        Ok(m)
    }

    /// # Panics
    /// If `dim` is outside `2..=8`.
    pub fn zeros(dim: usize) -> Self {
        check_dim(dim).expect("matrix dimension");
        Self {
            dim,
            entries: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    /// # Panics
    /// If `dim` is outside `2..=8`.
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn diag(values: &[f64]) -> Result<Self> {
        check_dim(values.len())?;
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = C64::new(v, 0.0);
        }
        Ok(m)
    }

    /// `|ψ⟩⟨ψ|` for the given (not necessarily normalized) vector.
    pub fn projector(psi: &[C64]) -> Result<Self> {
        check_dim(psi.len())?;
        let n = psi.len();
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = psi[i] * psi[j].conj();
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    /// `U M U†`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Self {
        &(u * self) * &u.adjoint()
    }

    /// Largest entrywise modulus of `self - other`. Infinite on dimension mismatch.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        let n = self.dim;
        let mut dev = 0.0f64;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }

    /// `(M + M†)/2`, used to scrub roundoff asymmetry out of products.
    pub fn hermitian_part(&self) -> Self {
        let adj = self.adjoint();
        let mut out = self.clone();
        for (o, a) in out.entries.iter_mut().zip(&adj.entries) {
            *o = (*o + a) * 0.5;
        }
        out
    }

    /// True when only the diagonal and anti-diagonal are populated (within `tol`).
    pub fn x_shape_deviation(&self) -> f64 {
        let n = self.dim;
        let mut dev = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                if i != j && i + j != n - 1 {
                    dev = dev.max(self[(i, j)].norm());
                }
            }
        }
        dev
    }

    pub fn max_imag(&self) -> f64 {
        self.entries.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    fn check_hermitian_unit_trace(&self) -> Result<()> {
        let dev = self.hermiticity_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::NotAState(format!("trace is {tr}, expected 1")));
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.entries[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.entries[i * self.dim + j]
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
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += a * rhs[(k, j)];
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
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix difference dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Ordered local dimensions of a composite system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsystemDims {
    factors: Vec<usize>,
}

impl SubsystemDims {
    pub fn new(factors: Vec<usize>) -> Result<Self> {
        if factors.is_empty() || factors.contains(&0) {
            return Err(Error::InvalidDimension(0));
        }
        check_dim(factors.iter().product())?;
        Ok(Self { factors })
    }

    /// `n` qubits, `n` in `1..=3`.
    pub fn qubits(n: usize) -> Self {
        Self::new(vec![2; n]).expect("1..=3 qubits")
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn total(&self) -> usize {
        self.factors.iter().product()
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.factors.len()];
        for (slot, &d) in out.iter_mut().zip(&self.factors).rev() {
            *slot = index % d;
            index /= d;
        }
        out
    }

    fn compose(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(&self.factors)
            .fold(0, |acc, (&x, &d)| acc * d + x)
    }

    fn check_matrix(&self, m: &ComplexMatrix) -> Result<()> {
        if self.total() != m.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.total(),
                actual: m.dim(),
            });
        }
        Ok(())
    }
}

/// `(a⊗b)[(i·db+k),(j·db+l)] = a[i,j]·b[k,l]`.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (da, db) = (a.dim(), b.dim());
    check_dim(da * db)?;
    let n = da * db;
    let mut out = ComplexMatrix::zeros(n);
    for i in 0..da {
        for j in 0..da {
            let aij = a[(i, j)];
            for k in 0..db {
                for l in 0..db {
                    out[(i * db + k, j * db + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    Ok(out)
}

/// Traces out every subsystem not listed in `keep`. The kept factors stay in
/// their original relative order.
pub fn partial_trace(m: &ComplexMatrix, dims: &SubsystemDims, keep: &[usize]) -> Result<ComplexMatrix> {
    dims.check_matrix(m)?;
    if keep.is_empty() {
        return Err(Error::InvalidDimension(1));
    }
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    for &k in &keep_sorted {
        if k >= dims.len() {
            return Err(Error::IndexOutOfRange {
                index: k,
                count: dims.len(),
            });
        }
    }
    let kept_dims = SubsystemDims::new(keep_sorted.iter().map(|&k| dims.factors[k]).collect())?;
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep_sorted.contains(k)).collect();

    let n = m.dim();
    let mut out = ComplexMatrix::zeros(kept_dims.total());
    let digits: Vec<Vec<usize>> = (0..n).map(|i| dims.digits(i)).collect();
    let reduced: Vec<usize> = digits
        .iter()
        .map(|d| kept_dims.compose(&keep_sorted.iter().map(|&k| d[k]).collect::<Vec<_>>()))
        .collect();
    for i in 0..n {
        for j in 0..n {
            if traced.iter().all(|&t| digits[i][t] == digits[j][t]) {
                out[(reduced[i], reduced[j])] += m[(i, j)];
            }
        }
    }
    Ok(out)
}

/// Transposes the indices of one subsystem.
pub fn partial_transpose(m: &ComplexMatrix, dims: &SubsystemDims, subsystem: usize) -> Result<ComplexMatrix> {
    dims.check_matrix(m)?;
    if subsystem >= dims.len() {
        return Err(Error::IndexOutOfRange {
            index: subsystem,
            count: dims.len(),
        });
    }
    let n = m.dim();
    let mut out = ComplexMatrix::zeros(n);
    for i in 0..n {
        let di = dims.digits(i);
        for j in 0..n {
            let dj = dims.digits(j);
            let mut si = di.clone();
            let mut sj = dj.clone();
            si[subsystem] = dj[subsystem];
            sj[subsystem] = di[subsystem];
            out[(i, j)] = m[(dims.compose(&si), dims.compose(&sj))];
        }
    }
    Ok(out)
}

/// Eigenvalues in descending order, optionally with eigenvectors as the
/// columns of a unitary matrix (column `k` belongs to `values[k]`).
#[derive(Debug, Clone)]
pub struct EigenResult {
    pub values: Vec<f64>,
    pub vectors: Option<ComplexMatrix>,
}

impl EigenResult {
    /// `V diag(f(λ)) V†`. Requires vectors.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> Option<ComplexMatrix> {
        let v = self.vectors.as_ref()?;
        let n = v.dim();
        let mut out = ComplexMatrix::zeros(n);
        for (k, &lambda) in self.values.iter().enumerate() {
            let w = f(lambda);
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = v[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += vik * v[(j, k)].conj();
                }
            }
        }
        Some(out)
    }
}

/// Cyclic complex Jacobi eigensolver for Hermitian matrices.
pub fn hermitian_eigen(m: &ComplexMatrix, with_vectors: bool) -> Result<EigenResult> {
    let dev = m.hermiticity_deviation();
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let n = m.dim();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);

    let frob = a.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let tol = JACOBI_TOL * frob.max(1.0);
    let off_norm = |a: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off_norm(&a) > tol {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                residual: off_norm(&a),
            });
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for q in p + 1..n {
                jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = with_vectors.then(|| {
        let mut out = ComplexMatrix::zeros(n);
        for (col, &src) in order.iter().enumerate() {
            for row in 0..n {
                out[(row, col)] = v[(row, src)];
            }
        }
        out
    });
    Ok(EigenResult { values, vectors })
}

/// Annihilates `a[p,q]` with `A ← U† A U`, `V ← V U`, where `U` first rotates
/// the phase of `a[p,q]` away and then applies a real Givens rotation.
fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let b = apq.norm();
    if b < 1e-300 {
        return;
    }
    let phase = (apq / b).conj();
    let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * b);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let upp = C64::new(c, 0.0);
    let upq = C64::new(s, 0.0);
    let uqp = phase * -s;
    let uqq = phase * c;

    let n = a.dim();
    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = akp * upp + akq * uqp;
        a[(k, q)] = akp * upq + akq * uqq;
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * upp + vkq * uqp;
        v[(k, q)] = vkp * upq + vkq * uqq;
    }
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = upp.conj() * apk + uqp.conj() * aqk;
        a[(q, k)] = upq.conj() * apk + uqq.conj() * aqk;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
}

/// Hermitian, unit trace, and no eigenvalue below `-PSD_WINDOW`.
/// Returns the spectrum (descending) on success.
pub fn validate_density(m: &ComplexMatrix) -> Result<Vec<f64>> {
    m.check_hermitian_unit_trace()?;
    let values = hermitian_eigen(m, false)?.values;
    check_spectrum(&values)?;
    Ok(values)
}

fn check_spectrum(values: &[f64]) -> Result<()> {
    match values.iter().copied().reduce(f64::min) {
        Some(min) if min < -PSD_WINDOW => Err(Error::NotAState(format!("negative eigenvalue {min:e}"))),
        _ => Ok(()),
    }
}

/// Shannon entropy in bits of a spectrum, with `0·log 0 = 0` and roundoff
/// negatives clamped.
pub fn spectrum_entropy(values: &[f64]) -> Result<f64> {
    check_spectrum(values)?;
    Ok(values
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * x.log2())
        .sum::<f64>()
        .max(0.0))
}

/// `S(ρ) = -tr ρ log₂ ρ` in bits.
pub fn von_neumann_entropy(m: &ComplexMatrix) -> Result<f64> {
    let values = validate_density(m)?;
    let s = spectrum_entropy(&values)?;
    Ok(s.min((m.dim() as f64).log2()))
}

/// Principal square root of a positive semidefinite matrix. Eigenvalues at or
/// below `floor` are treated as exact zeros.
pub fn psd_sqrt(m: &ComplexMatrix, floor: f64) -> Result<ComplexMatrix> {
    let eig = hermitian_eigen(m, true)?;
    check_spectrum(&eig.values)?;
    Ok(eig
        .reconstruct_with(|x| if x > floor { x.sqrt() } else { 0.0 })
        .expect("vectors requested"))
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]).expect("2x2")
}

pub fn pauli_y() -> ComplexMatrix {
    let i = C64::new(0.0, 1.0);
    ComplexMatrix::new(2, vec![C64::new(0.0, 0.0), -i, i, C64::new(0.0, 0.0)]).expect("2x2")
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real(2, &[1.0, 0.0, 0.0, -1.0]).expect("2x2")
}

pub fn hadamard() -> ComplexMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_real(2, &[h, h, h, -h]).expect("2x2")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn bell_phi_plus() -> ComplexMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        ComplexMatrix::projector(&[c(h), c(0.0), c(0.0), c(h)]).unwrap()
    }

    #[test]
    fn identity_tensor_identity() {
        let i2 = ComplexMatrix::identity(2);
        let i4 = tensor_product(&i2, &i2).unwrap();
        assert_eq!(i4, ComplexMatrix::identity(4));
    }

    #[test]
    fn basis_projector_placement_is_big_endian() {
        let p0 = ComplexMatrix::diag(&[1.0, 0.0]).unwrap();
        let p1 = ComplexMatrix::diag(&[0.0, 1.0]).unwrap();
        let m = tensor_product(&p0, &p1).unwrap();
        assert_eq!(m, ComplexMatrix::diag(&[0.0, 1.0, 0.0, 0.0]).unwrap());
    }

    #[test]
    fn sigma_x_on_first_maps_phi_plus_to_psi_plus() {
        let x1 = tensor_product(&pauli_x(), &ComplexMatrix::identity(2)).unwrap();
        let out = bell_phi_plus().conjugate_by(&x1);
        // |Ψ+⟩⟨Ψ+| has 1/2 on the (01,01), (01,10), (10,01), (10,10) entries.
        let mut expected = ComplexMatrix::zeros(4);
        for &(i, j) in &[(1, 1), (1, 2), (2, 1), (2, 2)] {
            expected[(i, j)] = c(0.5);
        }
        assert!(out.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn tensor_product_rejects_oversized_result() {
        let i4 = ComplexMatrix::identity(4);
        assert!(matches!(tensor_product(&i4, &i4), Err(Error::InvalidDimension(16))));
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let dims = SubsystemDims::qubits(2);
        let a = partial_trace(&bell_phi_plus(), &dims, &[0]).unwrap();
        assert!(a.max_abs_diff(&ComplexMatrix::identity(2).scale(0.5)) < 1e-15);
    }

    #[test]
    fn product_marginal_recovers_factor() {
        let ra = ComplexMatrix::from_real(2, &[0.7, 0.2, 0.2, 0.3]).unwrap();
        let mut rb = ComplexMatrix::from_real(2, &[0.4, 0.0, 0.0, 0.6]).unwrap();
        rb[(0, 1)] = C64::new(0.1, 0.2);
        rb[(1, 0)] = C64::new(0.1, -0.2);
        let m = tensor_product(&ra, &rb).unwrap();
        let dims = SubsystemDims::qubits(2);
        assert!(partial_trace(&m, &dims, &[1]).unwrap().max_abs_diff(&rb) < 1e-15);
        assert!(partial_trace(&m, &dims, &[0]).unwrap().max_abs_diff(&ra) < 1e-15);
    }

    #[test]
    fn partial_trace_dimension_mismatch() {
        let dims = SubsystemDims::qubits(3);
        let err = partial_trace(&ComplexMatrix::identity(4), &dims, &[0]).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { expected: 8, actual: 4 }));
        let dims2 = SubsystemDims::qubits(2);
        assert!(partial_trace(&ComplexMatrix::identity(4), &dims2, &[]).is_err());
        assert!(partial_trace(&ComplexMatrix::identity(4), &dims2, &[2]).is_err());
    }

    #[test]
    fn bell_partial_transpose_spectrum() {
        let dims = SubsystemDims::qubits(2);
        let pt = partial_transpose(&bell_phi_plus(), &dims, 1).unwrap();
        let vals = hermitian_eigen(&pt, false).unwrap().values;
        let expected = [0.5, 0.5, 0.5, -0.5];
        for (v, e) in vals.iter().zip(expected) {
            assert!((v - e).abs() < 1e-14, "{vals:?}");
        }
    }

    #[test]
    fn diagonal_is_partial_transpose_fixed_point() {
        let dims = SubsystemDims::qubits(3);
        let d = ComplexMatrix::diag(&[0.1, 0.2, 0.05, 0.05, 0.3, 0.1, 0.1, 0.1]).unwrap();
        for s in 0..3 {
            assert_eq!(partial_transpose(&d, &dims, s).unwrap(), d);
        }
        assert!(matches!(
            partial_transpose(&d, &dims, 3),
            Err(Error::IndexOutOfRange { index: 3, count: 3 })
        ));
    }

    #[test]
    fn diagonal_eigenvalues_sorted() {
        let m = ComplexMatrix::diag(&[3.0, 1.0, 2.0]).unwrap();
        assert_eq!(hermitian_eigen(&m, false).unwrap().values, vec![3.0, 2.0, 1.0]);
    }

    #[test]
    fn pauli_spectra() {
        for p in [pauli_x(), pauli_y(), pauli_z()] {
            let v = hermitian_eigen(&p, false).unwrap().values;
            assert!((v[0] - 1.0).abs() < 1e-15 && (v[1] + 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = ComplexMatrix::from_real(2, &[1.0, 2.0, 0.0, 1.0]).unwrap();
        assert!(matches!(hermitian_eigen(&m, false), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn reconstruction_of_complex_hermitian() {
        let mut m = ComplexMatrix::zeros(3);
        m[(0, 0)] = c(2.0);
        m[(1, 1)] = c(-1.0);
        m[(2, 2)] = c(0.5);
        m[(0, 1)] = C64::new(0.3, -0.7);
        m[(1, 0)] = C64::new(0.3, 0.7);
        m[(1, 2)] = C64::new(-0.2, 0.4);
        m[(2, 1)] = C64::new(-0.2, -0.4);
        m[(0, 2)] = C64::new(0.0, 1.1);
        m[(2, 0)] = C64::new(0.0, -1.1);
        let eig = hermitian_eigen(&m, true).unwrap();
        let back = eig.reconstruct_with(|x| x).unwrap();
        assert!(back.max_abs_diff(&m) < 1e-12);
        let v = eig.vectors.unwrap();
        assert!((&v.adjoint() * &v).max_abs_diff(&ComplexMatrix::identity(3)) < 1e-12);
        let sum: f64 = eig.values.iter().sum();
        assert!((sum - m.trace().re).abs() < 1e-12);
    }

    #[test]
    fn entropy_edge_cases() {
        let mixed = ComplexMatrix::identity(2).scale(0.5);
        assert!((von_neumann_entropy(&mixed).unwrap() - 1.0).abs() < 1e-15);
        assert!(von_neumann_entropy(&bell_phi_plus()).unwrap().abs() < 1e-14);
        let bad = ComplexMatrix::diag(&[1.1, -0.1]).unwrap();
        assert!(matches!(von_neumann_entropy(&bad), Err(Error::NotAState(_))));
        let not_unit = ComplexMatrix::diag(&[0.5, 0.4]).unwrap();
        assert!(matches!(von_neumann_entropy(&not_unit), Err(Error::NotAState(_))));
        let tiny_negative = ComplexMatrix::diag(&[1.0 + 5e-13, -5e-13]).unwrap();
        assert!(von_neumann_entropy(&tiny_negative).unwrap().abs() < 1e-11);
    }

    #[test]
    fn psd_sqrt_squares_back() {
        let m = ComplexMatrix::from_real(2, &[0.7, 0.2, 0.2, 0.3]).unwrap();
        let s = psd_sqrt(&m, 1e-14).unwrap();
        assert!((&s * &s).max_abs_diff(&m) < 1e-14);
    }
}
