//! Square matrices with graded-polynomial entries (2×2 working matrices and
//! their 4×4 tensor-product forms).

use std::sync::Arc;

use super::algebra::Algebra;
use super::poly::GradedPoly;

use crate::scalar::Coeff;

#[derive(Clone, Debug, PartialEq)]
pub struct PolyMat<C: Coeff> {
    pub n: usize,
    e: Vec<GradedPoly<C>>,
}

impl<C: Coeff> PolyMat<C> {
    pub fn zero(alg: &Arc<Algebra>, trunc: u8, n: usize) -> Self {
        Self {
            n,
            e: vec![GradedPoly::zero(alg, trunc); n * n],
        }
    }

    pub fn identity(alg: &Arc<Algebra>, trunc: u8, n: usize) -> Self {
        let mut m = Self::zero(alg, trunc, n);
        for i in 0..n {
            m.e[i * n + i] = GradedPoly::one(alg, trunc);
        }
        m
    }

    pub fn from_fn(
        alg: &Arc<Algebra>,
        trunc: u8,
        n: usize,
        mut f: impl FnMut(usize, usize) -> GradedPoly<C>,
    ) -> Self {
        let mut m = Self::zero(alg, trunc, n);
        for i in 0..n {
            for j in 0..n {
                m.e[i * n + j] = f(i, j);
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &GradedPoly<C> {
        &self.e[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: GradedPoly<C>) {
        self.e[i * self.n + j] = p;
    }

    pub fn trunc(&self) -> u8 {
        self.e[0].truncation()
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        self.e[0].algebra()
    }

    fn zip(&self, rhs: &Self, f: impl Fn(&GradedPoly<C>, &GradedPoly<C>) -> GradedPoly<C>) -> Self {
        assert_eq!(self.n, rhs.n);
        Self {
            n: self.n,
            e: self.e.iter().zip(rhs.e.iter()).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.zip(rhs, |a, b| a.add(b))
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.zip(rhs, |a, b| a.sub(b))
    }

    pub fn neg(&self) -> Self {
        Self {
            n: self.n,
            e: self.e.iter().map(|a| a.neg()).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        Self::from_fn(self.algebra(), self.trunc().min(rhs.trunc()), n, |i, j| {
            let mut acc = GradedPoly::zero(self.algebra(), self.trunc().min(rhs.trunc()));
            for k in 0..n {
                acc.accumulate_product(self.get(i, k), rhs.get(k, j));
            }
            acc
        })
    }

    pub fn scale_poly(&self, p: &GradedPoly<C>) -> Self {
        Self {
            n: self.n,
            e: self.e.iter().map(|a| a.mul(p)).collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        Self {
            n: self.n,
            e: self.e.iter().map(|a| a.scale(c)).collect(),
        }
    }

    /// Conjugate transpose: transposes and conjugates coefficients. This is
    /// the honest adjoint only when every variable stands for a real
    /// quantity (barred group entries are independent variables and get
    /// their own matrices instead).
    pub fn dagger(&self) -> Self {
        let n = self.n;
        Self::from_fn(self.algebra(), self.trunc(), n, |i, j| {
            self.get(j, i).conj_coeffs()
        })
    }

    pub fn trace(&self) -> GradedPoly<C> {
        let mut acc = GradedPoly::zero(self.algebra(), self.trunc());
        for i in 0..self.n {
            acc.add_assign(self.get(i, i));
        }
        acc
    }

    /// 2×2 determinant.
    pub fn det2(&self) -> GradedPoly<C> {
        assert_eq!(self.n, 2);
        self.get(0, 0)
            .mul(self.get(1, 1))
            .sub(&self.get(0, 1).mul(self.get(1, 0)))
    }

    /// 2×2 adjugate σ₂ Mᵀ σ₂ = [[d,−b],[−c,a]].
    pub fn tilde2(&self) -> Self {
        assert_eq!(self.n, 2);
        let alg = self.algebra();
        let mut m = Self::zero(alg, self.trunc(), 2);
        m.set(0, 0, self.get(1, 1).clone());
        m.set(0, 1, self.get(0, 1).neg());
        m.set(1, 0, self.get(1, 0).neg());
        m.set(1, 1, self.get(0, 0).clone());
        m
    }

    /// Kronecker product of two 2×2 matrices; `self` is tensor factor 1.
    pub fn kron(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, 2);
        assert_eq!(rhs.n, 2);
        let trunc = self.trunc().min(rhs.trunc());
        Self::from_fn(self.algebra(), trunc, 4, |r, c| {
            let (i, k) = (r / 2, r % 2);
            let (j, l) = (c / 2, c % 2);
            self.get(i, j).mul(rhs.get(k, l))
        })
    }

    pub fn commutator(&self, rhs: &Self) -> Self {
        self.mul(rhs).sub(&rhs.mul(self))
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().all(|p| p.is_zero())
    }

    /// The 4×4 permutation operator 𝒫 (entries 0/1).
    pub fn perm(alg: &Arc<Algebra>, trunc: u8) -> Self {
        let mut m = Self::zero(alg, trunc, 4);
        for i in 0..2 {
            for k in 0..2 {
                m.set(2 * i + k, 2 * k + i, GradedPoly::one(alg, trunc));
            }
        }
        m
    }

    pub fn map_entries(&self, f: impl Fn(&GradedPoly<C>) -> GradedPoly<C>) -> Self {
        Self {
            n: self.n,
            e: self.e.iter().map(f).collect(),
        }
    }

    pub fn entries(&self) -> &[GradedPoly<C>] {
        &self.e
    }
}

impl PolyMat<crate::scalar::Gauss> {
    /// Symbolic classical r-matrix, (iλ/2)·[[1,,,],[,−1,,],[,4,−1,],[,,,1]];
    /// `dagger` selects its conjugate transpose.
    pub fn r_matrix(alg: &Arc<Algebra>, trunc: u8, dagger: bool) -> Self {
        let i_half = crate::scalar::gauss(crate::scalar::Rat::from_integer(0), crate::scalar::rat(1, 2));
        let lam = GradedPoly::var(alg, super::Var::Lambda, trunc);
        let s = lam.scale(&i_half); // iλ/2
        let s = if dagger { s.conj_coeffs() } else { s };
        let mut m = Self::zero(alg, trunc, 4);
        m.set(0, 0, s.clone());
        m.set(1, 1, s.neg());
        m.set(2, 2, s.neg());
        m.set(3, 3, s.clone());
        let four = s.scale(&crate::scalar::gauss_int(4));
        if dagger {
            m.set(1, 2, four);
        } else {
            m.set(2, 1, four);
        }
        m
    }
}
