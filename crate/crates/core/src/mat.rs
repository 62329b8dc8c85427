//! Small dense complex matrices: 2×2 and 4×4, exact or double precision.
//!
//! The 4×4 matrices act on the tensor product of two spinor spaces; tensor
//! factor 1 is always the *left* Kronecker factor, which fixes the layout of
//! the permutation operator and the r-matrix unambiguously. Matrix functions
//! (square root, exponential, logarithm, arcsine) exist only in double
//! precision; square roots leave the rational field.

use std::fmt;

pub use num::complex::Complex64;
use num::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::scalar::{gauss, Gauss, Rat};

#[derive(Debug, Error)]
pub enum MatError {
    #[error("matrix is not hermitean: max asymmetry {asymmetry:.3e} exceeds tolerance {tol:.3e}")]
    NotHermitean { asymmetry: f64, tol: f64 },
    #[error("eigenvalue {eigenvalue} lies on the branch cut")]
    BranchCut { eigenvalue: Complex64 },
    #[error("eigenvalue {eigenvalue} outside the principal domain")]
    OutOfDomain { eigenvalue: Complex64 },
    #[error("singular matrix: eigenvalue {eigenvalue} too close to zero")]
    Singular { eigenvalue: Complex64 },
}

/// Scalar entry of a matrix: complex, exact or floating.
pub trait MatScalar: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn conj(&self) -> Self;
    fn from_int(n: i64) -> Self;
}

impl MatScalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        Complex64::new(self.re, -self.im)
    }
    fn from_int(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
}

impl MatScalar for Gauss {
    fn zero() -> Self {
        Gauss::new(Rat::zero(), Rat::zero())
    }
    fn one() -> Self {
        Gauss::new(Rat::one(), Rat::zero())
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        gauss(self.re.clone(), -self.im.clone())
    }
    fn from_int(n: i64) -> Self {
        Gauss::new(Rat::from_integer(n as i128), Rat::zero())
    }
}

/// 2×2 complex matrix.
#[derive(Clone, PartialEq, Debug)]
pub struct Mat2<S: MatScalar> {
    pub e: [[S; 2]; 2],
}

/// 4×4 complex matrix on space-1 ⊗ space-2.
#[derive(Clone, PartialEq, Debug)]
pub struct Mat4<S: MatScalar> {
    pub e: [[S; 4]; 4],
}

pub type Mat2c = Mat2<Complex64>;
pub type Mat4c = Mat4<Complex64>;

impl<S: MatScalar> Mat2<S> {
    pub fn new(e: [[S; 2]; 2]) -> Self {
        Self { e }
    }

    pub fn zero() -> Self {
        Self::new([[S::zero(), S::zero()], [S::zero(), S::zero()]])
    }

    pub fn identity() -> Self {
        Self::new([[S::one(), S::zero()], [S::zero(), S::one()]])
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut r = Self::zero();
        for i in 0..2 {
            for j in 0..2 {
                r.e[i][j] = self.e[i][j].add(&rhs.e[i][j]);
            }
        }
        r
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut r = Self::zero();
        for i in 0..2 {
            for j in 0..2 {
                r.e[i][j] = self.e[i][j].sub(&rhs.e[i][j]);
            }
        }
        r
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut r = Self::zero();
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = S::zero();
                for k in 0..2 {
                    acc = acc.add(&self.e[i][k].mul(&rhs.e[k][j]));
                }
                r.e[i][j] = acc;
            }
        }
        r
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut r = self.clone();
        for i in 0..2 {
            for j in 0..2 {
                r.e[i][j] = r.e[i][j].mul(s);
            }
        }
        r
    }

    pub fn neg(&self) -> Self {
        self.scale(&S::from_int(-1))
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let mut r = Self::zero();
        for i in 0..2 {
            for j in 0..2 {
                r.e[i][j] = self.e[j][i].conj();
            }
        }
        r
    }

    /// The adjugate σ₂ Mᵀ σ₂ = [[d,−b],[−c,a]]; satisfies M·tilde(M) = det(M)·1l
    /// and flips the spatial components of a vector matrix.
    pub fn tilde(&self) -> Self {
        Self::new([
            [self.e[1][1].clone(), self.e[0][1].neg()],
            [self.e[1][0].neg(), self.e[0][0].clone()],
        ])
    }

    pub fn det(&self) -> S {
        self.e[0][0]
            .mul(&self.e[1][1])
            .sub(&self.e[0][1].mul(&self.e[1][0]))
    }

    pub fn trace(&self) -> S {
        self.e[0][0].add(&self.e[1][1])
    }

    /// Kronecker product; `self` is tensor factor 1 (left).
    pub fn kron(&self, rhs: &Self) -> Mat4<S> {
        let mut r = Mat4::zero();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        r.e[2 * i + k][2 * j + l] = self.e[i][j].mul(&rhs.e[k][l]);
                    }
                }
            }
        }
        r
    }
}

impl<S: MatScalar> Mat4<S> {
    pub fn new(e: [[S; 4]; 4]) -> Self {
        Self { e }
    }

    pub fn zero() -> Self {
        Self::new(std::array::from_fn(|_| std::array::from_fn(|_| S::zero())))
    }

    pub fn identity() -> Self {
        let mut r = Self::zero();
        for i in 0..4 {
            r.e[i][i] = S::one();
        }
        r
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut r = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                r.e[i][j] = self.e[i][j].add(&rhs.e[i][j]);
            }
        }
        r
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut r = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                r.e[i][j] = self.e[i][j].sub(&rhs.e[i][j]);
            }
        }
        r
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut r = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = S::zero();
                for k in 0..4 {
                    acc = acc.add(&self.e[i][k].mul(&rhs.e[k][j]));
                }
                r.e[i][j] = acc;
            }
        }
        r
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut r = self.clone();
        for i in 0..4 {
            for j in 0..4 {
                r.e[i][j] = r.e[i][j].mul(s);
            }
        }
        r
    }

    pub fn dagger(&self) -> Self {
        let mut r = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                r.e[i][j] = self.e[j][i].conj();
            }
        }
        r
    }

    pub fn commutator(&self, rhs: &Self) -> Self {
        self.mul(rhs).sub(&rhs.mul(self))
    }

    /// Permutation operator: 𝒫·kron(A,B)·𝒫 = kron(B,A), 𝒫² = 1l.
    pub fn perm() -> Self {
        let mut r = Self::zero();
        for i in 0..2 {
            for k in 0..2 {
                r.e[2 * i + k][2 * k + i] = S::one();
            }
        }
        r
    }
}

/// Real space-time components of a vector (natural units).
#[derive(Clone, Copy, PartialEq, Debug, Serialize)]
pub struct FourVector {
    pub c: [f64; 4],
}

impl FourVector {
    pub fn new(v0: f64, v1: f64, v2: f64, v3: f64) -> Self {
        Self { c: [v0, v1, v2, v3] }
    }

    pub fn zero() -> Self {
        Self { c: [0.0; 4] }
    }

    /// Minkowski norm v₀² − v₁² − v₂² − v₃².
    pub fn minkowski_sq(&self) -> f64 {
        self.c[0] * self.c[0] - self.c[1] * self.c[1] - self.c[2] * self.c[2] - self.c[3] * self.c[3]
    }
}

/// The hermitean matrix of a four-vector:
/// [[−v₀−v₃, −v₁+iv₂], [−v₁−iv₂, −v₀+v₃]]; its determinant is the
/// Minkowski norm.
pub fn fourvector_to_matrix(v: &FourVector) -> Mat2c {
    let [v0, v1, v2, v3] = v.c;
    Mat2::new([
        [Complex64::new(-v0 - v3, 0.0), Complex64::new(-v1, v2)],
        [Complex64::new(-v1, -v2), Complex64::new(-v0 + v3, 0.0)],
    ])
}

/// Exact-arithmetic version of [`fourvector_to_matrix`].
pub fn fourvector_to_matrix_exact(v: &[Rat; 4]) -> Mat2<Gauss> {
    let z = Rat::zero();
    Mat2::new([
        [
            gauss(-v[0].clone() - v[3].clone(), z.clone()),
            gauss(-v[1].clone(), v[2].clone()),
        ],
        [
            gauss(-v[1].clone(), -v[2].clone()),
            gauss(-v[0].clone() + v[3].clone(), z),
        ],
    ])
}

/// Relative tolerance used for hermiticity of floating-point matrices.
pub const HERMITICITY_TOL: f64 = 1e-10;

pub fn hermiticity_defect(m: &Mat2c) -> f64 {
    max_abs2(&m.sub(&m.dagger()))
}

/// Inverts [`fourvector_to_matrix`]. Rejects non-hermitean input, reporting
/// the largest asymmetry.
pub fn matrix_to_fourvector(m: &Mat2c) -> Result<FourVector, MatError> {
    let scale = max_abs2(m).max(1.0);
    let asymmetry = hermiticity_defect(m);
    let tol = HERMITICITY_TOL * scale;
    if asymmetry > tol {
        return Err(MatError::NotHermitean { asymmetry, tol });
    }
    Ok(FourVector::new(
        -0.5 * (m.e[0][0].re + m.e[1][1].re),
        -0.5 * (m.e[0][1].re + m.e[1][0].re),
        0.5 * (m.e[0][1].im - m.e[1][0].im),
        0.5 * (m.e[1][1].re - m.e[0][0].re),
    ))
}

/// Exact inverse dictionary; input must be exactly hermitean.
pub fn matrix_to_fourvector_exact(m: &Mat2<Gauss>) -> Result<[Rat; 4], MatError> {
    if m != &m.dagger() {
        return Err(MatError::NotHermitean {
            asymmetry: 1.0,
            tol: 0.0,
        });
    }
    let half = Rat::new(1, 2);
    Ok([
        -(m.e[0][0].re.clone() + m.e[1][1].re.clone()) * half,
        -(m.e[0][1].re.clone() + m.e[1][0].re.clone()) * half,
        (m.e[0][1].im.clone() - m.e[1][0].im.clone()) * half,
        (m.e[1][1].re.clone() - m.e[0][0].re.clone()) * half,
    ])
}

/// The classical r-matrix as a 4×4 operator,
/// (iλ/2)·[[1,0,0,0],[0,−1,0,0],[0,4,−1,0],[0,0,0,1]].
pub fn build_r_matrix(lambda: f64) -> Mat4c {
    let s = Complex64::new(0.0, 0.5 * lambda);
    let mut r = Mat4::zero();
    r.e[0][0] = s;
    r.e[1][1] = -s;
    r.e[2][2] = -s;
    r.e[3][3] = s;
    r.e[2][1] = 4.0 * s;
    r
}

pub fn max_abs2(m: &Mat2c) -> f64 {
    m.e.iter()
        .flatten()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

pub fn max_abs4(m: &Mat4c) -> f64 {
    m.e.iter()
        .flatten()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// Eigenvalues of a 2×2 complex matrix.
pub fn eigenvalues2(m: &Mat2c) -> [Complex64; 2] {
    let tr = m.trace();
    let det = m.det();
    let disc = (tr * tr - 4.0 * det).sqrt();
    [(tr + disc) * 0.5, (tr - disc) * 0.5]
}

/// Applies an analytic function to a 2×2 matrix through its characteristic
/// decomposition M = ζ̄·1l + N with N² = δ²·1l, δ = (ζ₊−ζ₋)/2:
///
///   h(M) = ½(h(ζ̄+δ) + h(ζ̄−δ))·1l + B·N,
///   B    = (h(ζ̄+δ) − h(ζ̄−δ)) / (2δ),
///
/// switching to the Taylor form B = h′(ζ̄) + δ²/6·h‴(ζ̄) when the spectrum is
/// (nearly) degenerate, which also covers defective input exactly.
fn mat2_analytic<F, G>(m: &Mat2c, h: F, b_taylor: G) -> Mat2c
where
    F: Fn(Complex64) -> Complex64,
    G: Fn(Complex64, Complex64) -> Complex64,
{
    let half = Complex64::new(0.5, 0.0);
    let mean = m.trace() * half;
    let det = m.det();
    let delta = (mean * mean - det).sqrt();
    let scale = max_abs2(m).max(1.0);
    let n = m.sub(&Mat2::identity().scale(&mean));
    let (a, b) = if delta.norm() > 1e-4 * scale {
        let hp = h(mean + delta);
        let hm = h(mean - delta);
        ((hp + hm) * half, (hp - hm) * half / delta)
    } else {
        let hp = h(mean + delta);
        let hm = h(mean - delta);
        ((hp + hm) * half, b_taylor(mean, delta * delta))
    };
    Mat2::identity().scale(&a).add(&n.scale(&b))
}

fn spectrum_check(m: &Mat2c, reject: impl Fn(Complex64) -> Option<MatError>) -> Result<(), MatError> {
    for ev in eigenvalues2(m) {
        if let Some(e) = reject(ev) {
            return Err(e);
        }
    }
    Ok(())
}

/// Principal matrix square root; branch cut on the negative real axis, equal
/// to 1l at the identity (continuous in the vanishing-deformation limit, the
/// branch every canonical-limit statement relies on).
pub fn mat2_sqrt(m: &Mat2c) -> Result<Mat2c, MatError> {
    let scale = max_abs2(m).max(1.0);
    spectrum_check(m, |ev| {
        if ev.re < 0.0 && ev.im.abs() <= 1e-12 * scale {
            Some(MatError::BranchCut { eigenvalue: ev })
        } else {
            None
        }
    })?;
    Ok(mat2_analytic(
        m,
        |z| z.sqrt(),
        // B ≈ h′(ζ̄) + δ²/6·h‴(ζ̄), h = √: h′ = ζ^{-1/2}/2, h‴ = 3/8·ζ^{-5/2}
        |mean, d2| {
            let s = mean.sqrt();
            0.5 / s + d2 * 0.0625 * 3.0 / (s * mean * mean)
        },
    ))
}

pub fn mat2_exp(m: &Mat2c) -> Mat2c {
    mat2_analytic(m, |z| z.exp(), |mean, d2| mean.exp() * (1.0 + d2 / 6.0))
}

/// Principal matrix logarithm; requires an invertible argument.
pub fn mat2_log(m: &Mat2c) -> Result<Mat2c, MatError> {
    let scale = max_abs2(m).max(1.0);
    spectrum_check(m, |ev| {
        if ev.norm() <= 1e-14 * scale {
            Some(MatError::Singular { eigenvalue: ev })
        } else if ev.re < 0.0 && ev.im.abs() <= 1e-14 * scale {
            Some(MatError::BranchCut { eigenvalue: ev })
        } else {
            None
        }
    })?;
    Ok(mat2_analytic(
        m,
        |z| z.ln(),
        // h = ln: h′ = 1/ζ, h‴ = 2/ζ³
        |mean, d2| 1.0 / mean + d2 / (3.0 * mean * mean * mean),
    ))
}

/// Principal matrix arcsine; eigenvalues must avoid the real cuts |Re| ≥ 1.
pub fn mat2_arcsin(m: &Mat2c) -> Result<Mat2c, MatError> {
    spectrum_check(m, |ev| {
        if ev.re.abs() >= 1.0 && ev.im.abs() <= 1e-12 {
            Some(MatError::OutOfDomain { eigenvalue: ev })
        } else {
            None
        }
    })?;
    Ok(mat2_analytic(
        m,
        |z| z.asin(),
        // h = asin: h′ = (1−ζ²)^{-1/2}, h‴ = (1+2ζ²)(1−ζ²)^{-5/2}
        |mean, d2| {
            let w = Complex64::new(1.0, 0.0) - mean * mean;
            let w12 = w.sqrt();
            1.0 / w12 + d2 / 6.0 * (1.0 + 2.0 * mean * mean) / (w * w * w12)
        },
    ))
}

/// Matrix sine via the exponential.
pub fn mat2_sin(m: &Mat2c) -> Mat2c {
    let i = Complex64::new(0.0, 1.0);
    let a = mat2_exp(&m.scale(&i));
    let b = mat2_exp(&m.scale(&(-i)));
    a.sub(&b).scale(&(Complex64::new(0.0, -0.5)))
}
