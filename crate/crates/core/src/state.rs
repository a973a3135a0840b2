//! Reduced atomic density matrix and basis-dependent coherence.
//!
//! Matrices are stored in the energy basis ordered `[|C⟩, |B⟩, |A⟩]`.

use num_complex::Complex;
use thiserror::Error;

use crate::model::AmplitudeSet;
use crate::scalar::Real;

/// Row/column index of `|C⟩`.
pub const IDX_C: usize = 0;
/// Row/column index of `|B⟩`.
pub const IDX_B: usize = 1;
/// Row/column index of `|A⟩`.
pub const IDX_A: usize = 2;

pub type Matrix3<T> = [[Complex<T>; 3]; 3];
pub type Vector3<T> = [Complex<T>; 3];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StateError {
    #[error("density matrix is not Hermitian (max defect {0:e})")]
    NotHermitian(f64),
    #[error("density matrix trace is {0}, expected 1")]
    TraceNotOne(f64),
    #[error("density matrix has negative eigenvalue {0:e}")]
    NotPositive(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix3<T> {
    pub entries: Matrix3<T>,
    pub source_time: T,
}

impl<T: Real> DensityMatrix3<T> {
    pub fn new(entries: Matrix3<T>, source_time: T) -> Self {
        Self { entries, source_time }
    }

    /// `|ψ⟩⟨ψ|` for a normalized vector in `[C, B, A]` order.
    pub fn pure(psi: &Vector3<T>) -> Self {
        let mut entries = [[Complex::from(T::zero()); 3]; 3];
        for (i, row) in entries.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = psi[i] * psi[j].conj();
            }
        }
        Self::new(entries, T::zero())
    }

    pub fn diagonal(diag: [T; 3]) -> Self {
        let mut entries = [[Complex::from(T::zero()); 3]; 3];
        for (k, d) in diag.into_iter().enumerate() {
            entries[k][k] = Complex::from(d);
        }
        Self::new(entries, T::zero())
    }

    pub fn maximally_mixed() -> Self {
        let third = T::one() / T::lit(3.0);
        Self::diagonal([third; 3])
    }

    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.entries[row][col]
    }

    pub fn trace(&self) -> Complex<T> {
        (0..3).fold(Complex::from(T::zero()), |acc, k| acc + self.entries[k][k])
    }

    /// Largest `|ρ_ij − conj(ρ_ji)|`.
    pub fn hermiticity_defect(&self) -> T {
        let mut worst = T::zero();
        for i in 0..3 {
            for j in i..3 {
                worst = worst.max((self.entries[i][j] - self.entries[j][i].conj()).norm());
            }
        }
        worst
    }

    /// Eigenvalues in descending order, from the trigonometric solution of
    /// the characteristic cubic. Assumes Hermitian input.
    pub fn eigenvalues(&self) -> [T; 3] {
        hermitian_eigenvalues(&self.entries)
    }

    pub fn min_eigenvalue(&self) -> T {
        self.eigenvalues()[2]
    }

    /// Checks Hermiticity and unit trace to 1e-12 and positivity to −1e-10.
    pub fn validate(&self) -> Result<(), StateError> {
        let defect = self.hermiticity_defect();
        if defect > T::tol(1e-12) {
            return Err(StateError::NotHermitian(defect.to_f64_lossy()));
        }
        let tr = self.trace();
        if (tr.re - T::one()).abs() > T::tol(1e-12) || tr.im.abs() > T::tol(1e-12) {
            return Err(StateError::TraceNotOne(tr.re.to_f64_lossy()));
        }
        let min = self.min_eigenvalue();
        if min < -T::tol(1e-10) {
            return Err(StateError::NotPositive(min.to_f64_lossy()));
        }
        Ok(())
    }
}

/// Eigenvalues of a 3×3 Hermitian matrix, descending.
///
/// Cyclic Jacobi on the real symmetric embedding `[[Re, −Im], [Im, Re]]`,
/// whose spectrum is that of `m` with every eigenvalue doubled. Unlike the
/// trigonometric closed form this keeps full accuracy at degeneracies.
pub fn hermitian_eigenvalues<T: Real>(m: &Matrix3<T>) -> [T; 3] {
    let mut a = [[T::zero(); 6]; 6];
    for i in 0..3 {
        for j in 0..3 {
            let z = m[i][j];
            a[i][j] = z.re;
            a[i + 3][j + 3] = z.re;
            a[i][j + 3] = -z.im;
            a[i + 3][j] = z.im;
        }
    }
    let frob: T = a.iter().flatten().fold(T::zero(), |acc, &x| acc + x * x);
    let stop = T::epsilon() * T::epsilon() * frob * T::lit(1e-4);
    for _sweep in 0..50 {
        let mut off = T::zero();
        for p in 0..6 {
            for q in p + 1..6 {
                off = off + a[p][q] * a[p][q];
            }
        }
        if off <= stop {
            break;
        }
        for p in 0..6 {
            for q in p + 1..6 {
                let apq = a[p][q];
                if apq == T::zero() {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (T::lit(2.0) * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (kp, kq) = (row[p], row[q]);
                    row[p] = c * kp - s * kq;
                    row[q] = s * kp + c * kq;
                }
                for k in 0..6 {
                    let (pk, qk) = (a[p][k], a[q][k]);
                    a[p][k] = c * pk - s * qk;
                    a[q][k] = s * pk + c * qk;
                }
            }
        }
    }
    let mut d: [T; 6] = std::array::from_fn(|k| a[k][k]);
    d.sort_by(|x, y| y.partial_cmp(x).unwrap_or(std::cmp::Ordering::Equal));
    [d[0], d[2], d[4]]
}

/// Reduced density matrix obtained by tracing out the reservoir: the
/// reservoir population is returned to `|C⟩⟨C|`.
pub fn density_matrix<T: Real>(a: &AmplitudeSet<T>) -> DensityMatrix3<T> {
    let psi = [a.c, a.b, a.a];
    let mut rho = DensityMatrix3::pure(&psi);
    rho.entries[IDX_C][IDX_C] = rho.entries[IDX_C][IDX_C] + Complex::from(a.bath_weight);
    rho.source_time = a.t;
    rho
}

/// l1-norm of coherence: sum of the moduli of the six off-diagonal entries.
pub fn l1_coherence<T: Real>(rho: &DensityMatrix3<T>) -> T {
    let mut sum = T::zero();
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                sum = sum + rho.entries[i][j].norm();
            }
        }
    }
    sum
}
