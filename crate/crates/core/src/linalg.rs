//! Dense complex matrices and Liouville-space superoperators.
//!
//! Density matrices are vectorized column-major, so that
//! `vec(A ρ B) = (Bᵀ ⊗ A) vec(ρ)`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for r in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|c| {
                    let z = self[(r, c)];
                    format!("{:+.4e}{:+.4e}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries; fails unless `data.len()` is a
    /// perfect square.
    pub fn from_row_major(data: Vec<C64>) -> Result<Self> {
        let dim = (data.len() as f64).sqrt().round() as usize;
        if dim * dim != data.len() {
            return Err(Error::NonSquare {
                rows: data.len(),
                cols: 1,
            });
        }
        Ok(ComplexMatrix { dim, data })
    }

    /// Builds a matrix from nested rows; every row must have `rows.len()` entries.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::NonSquare {
                    rows: dim,
                    cols: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(ComplexMatrix { dim, data })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(f(r, c));
            }
        }
        ComplexMatrix { dim, data }
    }

    pub fn diagonal(values: &[C64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// The operator |row⟩⟨col| in a `dim`-dimensional basis.
    pub fn basis_op(dim: usize, row: usize, col: usize) -> Self {
        let mut m = Self::zeros(dim);
        m[(row, col)] = ONE;
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self[(c, r)])
    }

    pub fn conj(&self) -> Self {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        (0..self.dim)
            .map(|c| (0..self.dim).map(|r| self[(r, c)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// max |M − M†|.
    pub fn hermiticity_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.dim {
            for c in r..self.dim {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() < tol
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn kron(&self, other: &Self) -> Self {
        let (n, m) = (self.dim, other.dim);
        let mut out = Self::zeros(n * m);
        for i in 0..n {
            for j in 0..n {
                let a = self[(i, j)];
                if a == ZERO {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        out[(i * m + k, j * m + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// Matrix–vector product.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim);
        self.data
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Column-major vectorization.
    pub fn vectorize(&self) -> Vec<C64> {
        let d = self.dim;
        let mut v = vec![ZERO; d * d];
        for c in 0..d {
            for r in 0..d {
                v[r + c * d] = self[(r, c)];
            }
        }
        v
    }

    /// Inverse of [`vectorize`](Self::vectorize).
    pub fn unvectorize(v: &[C64]) -> Result<Self> {
        let d = (v.len() as f64).sqrt().round() as usize;
        if d * d != v.len() {
            return Err(Error::NonSquare {
                rows: v.len(),
                cols: 1,
            });
        }
        Ok(Self::from_fn(d, |r, c| v[r + c * d]))
    }

    pub fn powi(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.dim);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Checks the density-matrix invariants: unit trace, hermiticity and
    /// minimum eigenvalue above `-positivity_tol`.
    pub fn check_density(&self, positivity_tol: f64) -> Result<()> {
        let tr = self.trace();
        if (tr - ONE).norm() > 1e-9 {
            return Err(Error::InvalidState(format!("trace {tr}")));
        }
        let herm = self.hermiticity_error();
        if herm > 1e-12 {
            return Err(Error::InvalidState(format!("hermiticity error {herm:e}")));
        }
        let min = self.min_eigenvalue()?;
        if min < -positivity_tol {
            return Err(Error::InvalidState(format!("minimum eigenvalue {min:e}")));
        }
        Ok(())
    }

    /// Smallest eigenvalue of the Hermitian part of the matrix.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        let herm = (self + &self.adjoint()).scale(C64::new(0.5, 0.0));
        let (vals, _) = eigendecompose_hermitian(&herm)?;
        Ok(vals[0])
    }

    pub fn lu(&self) -> Result<LuDecomposition> {
        LuDecomposition::new(self)
    }

    pub fn solve(&self, b: &[C64]) -> Result<Vec<C64>> {
        Ok(self.lu()?.solve(b))
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.dim + c]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in product");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for r in 0..n {
            let out_row = &mut out.data[r * n..(r + 1) * n];
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == ZERO {
                    continue;
                }
                let rhs_row = &rhs.data[k * n..(k + 1) * n];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sum");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in difference");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale(-ONE)
    }
}

/// LU factorization with partial pivoting.
#[derive(Debug, Clone)]
pub struct LuDecomposition {
    lu: ComplexMatrix,
    perm: Vec<usize>,
}

impl LuDecomposition {
    pub fn new(m: &ComplexMatrix) -> Result<Self> {
        let n = m.dim;
        let mut lu = m.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = m.max_abs().max(f64::MIN_POSITIVE);
        for k in 0..n {
            let (p, best) = (k..n)
                .map(|r| (r, lu[(r, k)].norm()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if best <= 1e-14 * scale {
                return Err(Error::Singular);
            }
            if p != k {
                for c in 0..n {
                    lu.data.swap(k * n + c, p * n + c);
                }
                perm.swap(k, p);
            }
            let pivot = lu[(k, k)];
            for r in k + 1..n {
                let f = lu[(r, k)] / pivot;
                lu[(r, k)] = f;
                if f == ZERO {
                    continue;
                }
                for c in k + 1..n {
                    let t = lu[(k, c)];
                    lu[(r, c)] -= f * t;
                }
            }
        }
        Ok(LuDecomposition { lu, perm })
    }

    pub fn solve(&self, b: &[C64]) -> Vec<C64> {
        let n = self.lu.dim;
        assert_eq!(b.len(), n);
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for r in 0..n {
            let mut s = x[r];
            for c in 0..r {
                s -= self.lu[(r, c)] * x[c];
            }
            x[r] = s;
        }
        for r in (0..n).rev() {
            let mut s = x[r];
            for c in r + 1..n {
                s -= self.lu[(r, c)] * x[c];
            }
            x[r] = s / self.lu[(r, r)];
        }
        x
    }
}

/// Matrix exponential by scaling and squaring of a truncated Taylor series.
pub fn matrix_exponential(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.dim();
    let norm = m.norm_one();
    let mut squarings = 0u32;
    if norm > 0.5 {
        squarings = (norm / 0.5).log2().ceil() as u32;
    }
    let scaled = m.scale(C64::new(0.5f64.powi(squarings as i32), 0.0));
    let mut result = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..=30 {
        term = (&term * &scaled).scale(C64::new(1.0 / k as f64, 0.0));
        result = &result + &term;
        if term.max_abs() <= 1e-18 * result.max_abs() {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// Hermitian eigendecomposition by cyclic Jacobi rotations.
///
/// Returns ascending eigenvalues and a unitary matrix whose columns are the
/// matching eigenvectors, so that `M = V diag(λ) V†`.
pub fn eigendecompose_hermitian(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let n = m.dim();
    let scale = m.max_abs().max(1.0);
    let deviation = m.hermiticity_error();
    if deviation > 1e-12 * scale {
        return Err(Error::NotHermitian { deviation });
    }
    let mut a = m.clone();
    // exact hermitian symmetrization
    for r in 0..n {
        a[(r, r)] = C64::new(a[(r, r)].re, 0.0);
        for c in r + 1..n {
            let avg = (a[(r, c)] + a[(c, r)].conj()) * 0.5;
            a[(r, c)] = avg;
            a[(c, r)] = avg.conj();
        }
    }
    let mut v = ComplexMatrix::identity(n);
    let total: f64 = a.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    const MAX_SWEEPS: usize = 100;
    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|r| (0..n).filter(move |&c| c != r).map(move |c| (r, c)))
            .map(|(r, c)| a[(r, c)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * total.max(f64::MIN_POSITIVE) {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let b = a[(p, q)];
                let babs = b.norm();
                if babs == 0.0 {
                    continue;
                }
                let phase = b / babs;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = 0.5 * (2.0 * babs).atan2(app - aqq);
                let (s, c) = theta.sin_cos();
                // W = diag(1, conj(phase)) · [[c, -s], [s, c]]
                let w_pp = C64::new(c, 0.0);
                let w_pq = C64::new(-s, 0.0);
                let w_qp = phase.conj() * s;
                let w_qq = phase.conj() * c;
                // A <- A W (columns p, q)
                for r in 0..n {
                    let arp = a[(r, p)];
                    let arq = a[(r, q)];
                    a[(r, p)] = arp * w_pp + arq * w_qp;
                    a[(r, q)] = arp * w_pq + arq * w_qq;
                }
                // A <- W† A (rows p, q)
                for col in 0..n {
                    let apc = a[(p, col)];
                    let aqc = a[(q, col)];
                    a[(p, col)] = w_pp.conj() * apc + w_qp.conj() * aqc;
                    a[(q, col)] = w_pq.conj() * apc + w_qq.conj() * aqc;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                for r in 0..n {
                    let vrp = v[(r, p)];
                    let vrq = v[(r, q)];
                    v[(r, p)] = vrp * w_pp + vrq * w_qp;
                    v[(r, q)] = vrp * w_pq + vrq * w_qq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::EigenNoConvergence { sweeps: MAX_SWEEPS });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, |r, c| v[(r, order[c])]);
    Ok((values, vectors))
}

/// Linear map on column-vectorized `d×d` operators.
#[derive(Clone, Debug, PartialEq)]
pub struct Superoperator {
    hilbert_dim: usize,
    matrix: ComplexMatrix,
}

impl Superoperator {
    pub fn zeros(hilbert_dim: usize) -> Self {
        Superoperator {
            hilbert_dim,
            matrix: ComplexMatrix::zeros(hilbert_dim * hilbert_dim),
        }
    }

    pub fn identity(hilbert_dim: usize) -> Self {
        Superoperator {
            hilbert_dim,
            matrix: ComplexMatrix::identity(hilbert_dim * hilbert_dim),
        }
    }

    pub fn from_matrix(hilbert_dim: usize, matrix: ComplexMatrix) -> Result<Self> {
        if matrix.dim() != hilbert_dim * hilbert_dim {
            return Err(Error::DimensionMismatch {
                expected: hilbert_dim * hilbert_dim,
                found: matrix.dim(),
            });
        }
        Ok(Superoperator {
            hilbert_dim,
            matrix,
        })
    }

    /// ρ ↦ Aρ
    pub fn left(a: &ComplexMatrix) -> Self {
        let d = a.dim();
        Superoperator {
            hilbert_dim: d,
            matrix: ComplexMatrix::identity(d).kron(a),
        }
    }

    /// ρ ↦ ρB
    pub fn right(b: &ComplexMatrix) -> Self {
        let d = b.dim();
        Superoperator {
            hilbert_dim: d,
            matrix: b.transpose().kron(&ComplexMatrix::identity(d)),
        }
    }

    /// ρ ↦ AρB
    pub fn sandwich(a: &ComplexMatrix, b: &ComplexMatrix) -> Self {
        let d = a.dim();
        assert_eq!(d, b.dim());
        Superoperator {
            hilbert_dim: d,
            matrix: b.transpose().kron(a),
        }
    }

    /// ρ ↦ −(i/ħ)[H, ρ] for `h` in meV.
    pub fn hamiltonian(h: &ComplexMatrix) -> Self {
        let comm = &Self::left(h) - &Self::right(h);
        comm.scale(C64::new(0.0, -1.0 / crate::units::HBAR))
    }

    /// ρ ↦ rate·(AρA† − ½{A†A, ρ})
    pub fn lindblad(a: &ComplexMatrix, rate: f64) -> Self {
        let ad = a.adjoint();
        let ada = &ad * a;
        let jump = Self::sandwich(a, &ad);
        let anti = &Self::left(&ada) + &Self::right(&ada);
        (&jump - &anti.scale(C64::new(0.5, 0.0))).scale(C64::new(rate, 0.0))
    }

    pub fn hilbert_dim(&self) -> usize {
        self.hilbert_dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn scale(&self, s: C64) -> Self {
        Superoperator {
            hilbert_dim: self.hilbert_dim,
            matrix: self.matrix.scale(s),
        }
    }

    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.dim() != self.hilbert_dim {
            return Err(Error::DimensionMismatch {
                expected: self.hilbert_dim,
                found: rho.dim(),
            });
        }
        ComplexMatrix::unvectorize(&self.matrix.apply(&rho.vectorize()))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if other.hilbert_dim != self.hilbert_dim {
            return Err(Error::DimensionMismatch {
                expected: self.hilbert_dim,
                found: other.hilbert_dim,
            });
        }
        Ok(self + other)
    }

    pub fn exp(&self, t: f64) -> Self {
        Superoperator {
            hilbert_dim: self.hilbert_dim,
            matrix: matrix_exponential(&self.matrix.scale(C64::new(t, 0.0))),
        }
    }

    pub fn compose(&self, other: &Self) -> Self {
        Superoperator {
            hilbert_dim: self.hilbert_dim,
            matrix: &self.matrix * &other.matrix,
        }
    }
}

impl Add for &Superoperator {
    type Output = Superoperator;
    fn add(self, rhs: &Superoperator) -> Superoperator {
        Superoperator {
            hilbert_dim: self.hilbert_dim,
            matrix: &self.matrix + &rhs.matrix,
        }
    }
}

impl Sub for &Superoperator {
    type Output = Superoperator;
    fn sub(self, rhs: &Superoperator) -> Superoperator {
        Superoperator {
            hilbert_dim: self.hilbert_dim,
            matrix: &self.matrix - &rhs.matrix,
        }
    }
}

/// Linear functional `X ↦ Tr[A X]` as a vector acting on `vec(X)`.
pub fn trace_functional(a: &ComplexMatrix) -> Vec<C64> {
    // Tr[A X] = Σ_ij A_ji X_ij and vec(X)[i + j d] = X_ij
    a.transpose().vectorize()
}

pub fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(dim, |_, _| {
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
    }

    fn random_hermitian(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix {
        let a = random_matrix(rng, dim);
        (&a + &a.adjoint()).scale(C64::new(0.5, 0.0))
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let e = matrix_exponential(&ComplexMatrix::zeros(4));
        assert_eq!(e.max_abs_diff(&ComplexMatrix::identity(4)), 0.0);
    }

    #[test]
    fn exp_of_imaginary_diagonal() {
        let thetas = [0.3, -1.2, 2.5, 7.0];
        let m = ComplexMatrix::diagonal(&thetas.map(|t| C64::new(0.0, t)));
        let e = matrix_exponential(&m);
        let expected = ComplexMatrix::diagonal(&thetas.map(|t| C64::from_polar(1.0, t)));
        assert!(e.max_abs_diff(&expected) < 1e-13);
    }

    #[test]
    fn exp_inverse_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let m = random_matrix(&mut rng, 4);
            let prod = &matrix_exponential(&m) * &matrix_exponential(&-&m);
            assert!(prod.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-10);
        }
    }

    #[test]
    fn exp_matches_eigen_route_for_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let h = random_hermitian(&mut rng, 4).scale(C64::new(3.0, 0.0));
        let (vals, v) = eigendecompose_hermitian(&h).unwrap();
        let d = ComplexMatrix::diagonal(&vals.iter().map(|&l| C64::from_polar(1.0, -l)).collect::<Vec<_>>());
        let via_eigen = &(&v * &d) * &v.adjoint();
        let direct = matrix_exponential(&h.scale(C64::new(0.0, -1.0)));
        assert!(via_eigen.max_abs_diff(&direct) < 1e-12);
    }

    #[test]
    fn eigen_identity() {
        let (vals, v) = eigendecompose_hermitian(&ComplexMatrix::identity(4)).unwrap();
        assert!(vals.iter().all(|&l| (l - 1.0).abs() < 1e-15));
        let vv = &v.adjoint() * &v;
        assert!(vv.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-12);
    }

    #[test]
    fn eigen_two_level_split() {
        let g = 0.034;
        let mut m = ComplexMatrix::zeros(4);
        m[(1, 2)] = C64::new(g, 0.0);
        m[(2, 1)] = C64::new(g, 0.0);
        let (vals, _) = eigendecompose_hermitian(&m).unwrap();
        assert!((vals[0] + g).abs() < 1e-14);
        assert!((vals[3] - g).abs() < 1e-14);
    }

    #[test]
    fn eigen_jc_block_closed_form() {
        let (delta, g) = (0.3, 0.034);
        let mut m = ComplexMatrix::zeros(4);
        m[(1, 1)] = C64::new(delta, 0.0);
        m[(1, 2)] = C64::new(g, 0.0);
        m[(2, 1)] = C64::new(g, 0.0);
        let (vals, _) = eigendecompose_hermitian(&m).unwrap();
        let root = ((delta / 2.0f64).powi(2) + g * g).sqrt();
        let (lo, hi) = (delta / 2.0 - root, delta / 2.0 + root);
        assert!((vals[0] - lo).abs() < 1e-14);
        assert!((vals[3] - hi).abs() < 1e-14);
    }

    #[test]
    fn eigen_reconstruction_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for dim in [2, 3, 4, 6] {
            let h = random_hermitian(&mut rng, dim);
            let (vals, v) = eigendecompose_hermitian(&h).unwrap();
            assert!(vals.windows(2).all(|w| w[0] <= w[1]));
            let d = ComplexMatrix::diagonal(&vals.iter().map(|&l| C64::new(l, 0.0)).collect::<Vec<_>>());
            let rebuilt = &(&v * &d) * &v.adjoint();
            assert!(rebuilt.max_abs_diff(&h) < 1e-10);
            let vv = &v.adjoint() * &v;
            assert!(vv.max_abs_diff(&ComplexMatrix::identity(dim)) < 1e-10);
        }
    }

    #[test]
    fn eigen_rejects_non_hermitian() {
        let m = ComplexMatrix::basis_op(3, 0, 1);
        assert!(matches!(
            eigendecompose_hermitian(&m),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn non_square_input_rejected() {
        assert!(ComplexMatrix::from_row_major(vec![ONE; 6]).is_err());
        assert!(ComplexMatrix::from_rows(&[vec![ONE, ONE], vec![ONE]]).is_err());
    }

    #[test]
    fn vectorization_convention() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (a, b, rho) = (
            random_matrix(&mut rng, 3),
            random_matrix(&mut rng, 3),
            random_matrix(&mut rng, 3),
        );
        let direct = &(&a * &rho) * &b;
        let via_super = Superoperator::sandwich(&a, &b).apply(&rho).unwrap();
        assert!(direct.max_abs_diff(&via_super) < 1e-14);
        let tr = dot(&trace_functional(&a), &rho.vectorize());
        assert!((tr - (&a * &rho).trace()).norm() < 1e-14);
    }

    #[test]
    fn lu_solves_random_system() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let m = random_matrix(&mut rng, 16);
        let x: Vec<C64> = (0..16).map(|i| C64::new(i as f64, -0.5)).collect();
        let b = m.apply(&x);
        let sol = m.solve(&b).unwrap();
        for (s, e) in sol.iter().zip(&x) {
            assert!((s - e).norm() < 1e-10);
        }
        assert!(matches!(ComplexMatrix::zeros(3).solve(&[ONE; 3]), Err(Error::Singular)));
    }

    #[test]
    fn lindblad_is_trace_preserving_and_hermiticity_preserving() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let a = random_matrix(&mut rng, 4);
        let h = random_hermitian(&mut rng, 4);
        let l = &Superoperator::lindblad(&a, 0.7) + &Superoperator::hamiltonian(&h);
        let rho = random_hermitian(&mut rng, 4);
        let out = l.apply(&rho).unwrap();
        assert!(out.trace().norm() < 1e-12);
        assert!(out.hermiticity_error() < 1e-12);
    }

    #[test]
    fn semigroup_property() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let a = random_matrix(&mut rng, 3);
        let l = Superoperator::lindblad(&a, 0.4);
        let lhs = l.exp(0.7).compose(&l.exp(1.9));
        let rhs = l.exp(2.6);
        assert!(lhs.matrix().max_abs_diff(rhs.matrix()) < 1e-9);
    }

    #[test]
    fn powi_matches_repeated_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let m = random_matrix(&mut rng, 3).scale(C64::new(0.3, 0.0));
        let mut acc = ComplexMatrix::identity(3);
        for _ in 0..13 {
            acc = &acc * &m;
        }
        assert!(m.powi(13).max_abs_diff(&acc) < 1e-12);
    }
}
