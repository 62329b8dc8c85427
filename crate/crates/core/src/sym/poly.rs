//! Graded polynomials over commuting and Grassmann variables.

use std::collections::HashMap;
use std::fmt;
use std::hash::{BuildHasherDefault, Hasher};
use std::sync::Arc;

use num::complex::Complex64;
use num::Zero;

use super::algebra::{Algebra, Parity, Var, MAX_EVEN};
use super::SymError;
use crate::scalar::{Coeff, Gauss, Rat};

/// Packed monomial: one byte per even-variable exponent, one for the λ
/// power, one for the odd-generator bitmask. The fixed 16-byte layout makes
/// multiplication two word additions and hashing two word mixes.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Monomial(pub(crate) [u8; 16]);

const LAM_BYTE: usize = 12;
const ODD_BYTE: usize = 13;

impl Monomial {
    pub fn one() -> Self {
        Self([0u8; 16])
    }

    pub fn lam(&self) -> u8 {
        self.0[LAM_BYTE]
    }

    pub fn with_lam(mut self, k: u8) -> Self {
        self.0[LAM_BYTE] = k;
        self
    }

    pub fn ev(&self, i: usize) -> u8 {
        self.0[i]
    }

    pub fn with_ev(mut self, i: usize, e: u8) -> Self {
        self.0[i] = e;
        self
    }

    pub fn odd(&self) -> u8 {
        self.0[ODD_BYTE]
    }

    pub fn with_odd(mut self, mask: u8) -> Self {
        self.0[ODD_BYTE] = mask;
        self
    }

    pub fn parity(&self) -> Parity {
        if self.odd().count_ones() % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn degree(&self) -> u32 {
        self.0[..MAX_EVEN].iter().map(|&e| e as u32).sum::<u32>() + self.odd().count_ones()
    }

    fn halves(&self) -> (u64, u64) {
        (
            u64::from_le_bytes(self.0[0..8].try_into().unwrap()),
            u64::from_le_bytes(self.0[8..16].try_into().unwrap()),
        )
    }

    /// Product of two purely even monomials (no odd generators): exponent
    /// vectors add bytewise, exact as long as no byte overflows;
    /// degrees stay far below 255 in every shipped computation.
    #[inline]
    fn mul_even(&self, rhs: &Self) -> Self {
        debug_assert!(self.odd() == 0 && rhs.odd() == 0);
        debug_assert!((0..MAX_EVEN).all(|i| self.0[i] as u16 + rhs.0[i] as u16 <= 255));
        let (a0, a1) = self.halves();
        let (b0, b1) = rhs.halves();
        let mut out = [0u8; 16];
        out[0..8].copy_from_slice(&(a0.wrapping_add(b0)).to_le_bytes());
        out[8..16].copy_from_slice(&(a1.wrapping_add(b1)).to_le_bytes());
        Self(out)
    }

    /// Graded product. `None` when an odd generator squares to zero;
    /// otherwise the combined monomial and whether reordering the odd
    /// generators into canonical order flips the sign.
    #[inline]
    pub fn mul(&self, rhs: &Self) -> Option<(Self, bool)> {
        let (o1, o2) = (self.odd(), rhs.odd());
        if o1 == 0 && o2 == 0 {
            return Some((self.mul_even(rhs), false));
        }
        if o1 & o2 != 0 {
            return None;
        }
        let mut inversions = 0u32;
        let mut bits = o1;
        while bits != 0 {
            let i = bits.trailing_zeros();
            inversions += (o2 & ((1u8 << i) - 1)).count_ones();
            bits &= bits - 1;
        }
        let mut out = *self;
        for i in 0..MAX_EVEN {
            out.0[i] += rhs.0[i];
        }
        out.0[LAM_BYTE] += rhs.0[LAM_BYTE];
        out.0[ODD_BYTE] = o1 | o2;
        Some((out, inversions % 2 == 1))
    }
}

/// Multiply-xor mixer in the spirit of FxHash; the default SipHash is far
/// too slow for the Jacobi-order scan's accumulation maps.
#[derive(Default)]
pub struct MonoHasher(u64);

impl Hasher for MonoHasher {
    #[inline]
    fn write(&mut self, bytes: &[u8]) {
        for chunk in bytes.chunks(8) {
            let mut buf = [0u8; 8];
            buf[..chunk.len()].copy_from_slice(chunk);
            self.write_u64(u64::from_le_bytes(buf));
        }
    }

    #[inline]
    fn write_u64(&mut self, v: u64) {
        self.0 = (self.0.rotate_left(5) ^ v).wrapping_mul(0x517c_c1b7_2722_0a95);
    }

    #[inline]
    fn finish(&self) -> u64 {
        self.0
    }
}

impl std::hash::Hash for Monomial {
    #[inline]
    fn hash<H: Hasher>(&self, state: &mut H) {
        let (a, b) = self.halves();
        state.write_u64(a);
        state.write_u64(b);
    }
}

pub(crate) type TermMap<C> = HashMap<Monomial, C, BuildHasherDefault<MonoHasher>>;

/// Sum of exact-coefficient graded monomials, truncated at a fixed order in
/// λ. Terms beyond the truncation order are dropped; combining two
/// polynomials tracks the finer of the two truncations.
#[derive(Clone, Debug)]
pub struct GradedPoly<C: Coeff> {
    alg: Arc<Algebra>,
    trunc: u8,
    terms: TermMap<C>,
}

impl<C: Coeff> PartialEq for GradedPoly<C> {
    fn eq(&self, other: &Self) -> bool {
        self.alg.same(&other.alg) && self.terms == other.terms
    }
}

impl<C: Coeff> GradedPoly<C> {
    pub fn zero(alg: &Arc<Algebra>, trunc: u8) -> Self {
        Self {
            alg: alg.clone(),
            trunc,
            terms: TermMap::default(),
        }
    }

    pub fn constant(alg: &Arc<Algebra>, trunc: u8, c: C) -> Self {
        let mut p = Self::zero(alg, trunc);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn one(alg: &Arc<Algebra>, trunc: u8) -> Self {
        Self::constant(alg, trunc, C::one())
    }

    pub fn var(alg: &Arc<Algebra>, v: Var, trunc: u8) -> Self {
        let m = match v {
            Var::Lambda => Monomial::one().with_lam(1),
            Var::Even(i) => Monomial::one().with_ev(i as usize, 1),
            Var::Odd(i) => Monomial::one().with_odd(1 << i),
        };
        let mut p = Self::zero(alg, trunc);
        if m.lam() <= trunc {
            p.terms.insert(m, C::one());
        }
        p
    }

    pub fn var_named(alg: &Arc<Algebra>, name: &str, trunc: u8) -> Result<Self, SymError> {
        Ok(Self::var(alg, alg.var(name)?, trunc))
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn truncation(&self) -> u8 {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub(crate) fn insert_term(&mut self, m: Monomial, c: C) {
        if m.lam() > self.trunc || c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::hash_map::Entry::Occupied(mut e) => {
                let v = e.get().add(&c);
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    fn assert_compatible(&self, other: &Self) {
        assert!(
            self.alg.same(&other.alg),
            "graded polynomials over different algebras"
        );
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.assert_compatible(rhs);
        let trunc = self.trunc.min(rhs.trunc);
        let mut out = Self::zero(&self.alg, trunc);
        out.terms.reserve(self.terms.len() + rhs.terms.len());
        for (m, c) in self.terms.iter().chain(rhs.terms.iter()) {
            out.insert_term(*m, *c);
        }
        out
    }

    pub fn add_assign(&mut self, rhs: &Self) {
        self.assert_compatible(rhs);
        if rhs.trunc < self.trunc {
            self.trunc = rhs.trunc;
            self.terms.retain(|m, _| m.lam() <= rhs.trunc);
        }
        // rhs terms above the common order are filtered on insert
        for (m, c) in rhs.terms.iter() {
            self.insert_term(*m, *c);
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn scale(&self, s: &C) -> Self {
        let mut out = Self::zero(&self.alg, self.trunc);
        if s.is_zero() {
            return out;
        }
        out.terms.reserve(self.terms.len());
        for (m, c) in self.terms.iter() {
            out.insert_term(*m, c.mul(s));
        }
        out
    }

    /// Multiply a single monomial term onto the polynomial (from the left).
    pub fn mul_term(&self, m0: &Monomial, c0: &C) -> Self {
        let mut out = Self::zero(&self.alg, self.trunc);
        if c0.is_zero() {
            return out;
        }
        for (m, c) in self.terms.iter() {
            if let Some((prod, negate)) = m0.mul(m) {
                let cc = c0.mul(c);
                out.insert_term(prod, if negate { cc.neg() } else { cc });
            }
        }
        out
    }

    fn lam_buckets(&self) -> Vec<(u8, Vec<(Monomial, C)>)> {
        let mut buckets: Vec<Vec<(Monomial, C)>> = vec![Vec::new(); self.trunc as usize + 1];
        for (m, c) in self.terms.iter() {
            buckets[m.lam() as usize].push((*m, *c));
        }
        buckets
            .into_iter()
            .enumerate()
            .filter(|(_, b)| !b.is_empty())
            .map(|(k, b)| (k as u8, b))
            .collect()
    }

    /// Accumulate `a * b` into `self`, skipping λ-order pairs beyond the
    /// truncation before any coefficient work happens.
    pub fn accumulate_product(&mut self, a: &Self, b: &Self) {
        self.assert_compatible(a);
        self.assert_compatible(b);
        let trunc = self.trunc;
        for (la, ba) in a.lam_buckets() {
            if la > trunc {
                continue;
            }
            for (lb, bb) in b.lam_buckets() {
                if la + lb > trunc {
                    continue;
                }
                for (ma, ca) in &ba {
                    for (mb, cb) in &bb {
                        if let Some((m, negate)) = ma.mul(mb) {
                            let c = ca.mul(cb);
                            self.insert_term(m, if negate { c.neg() } else { c });
                        }
                    }
                }
            }
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero(&self.alg, self.trunc.min(rhs.trunc));
        out.terms
            .reserve((self.terms.len().max(rhs.terms.len())).min(1 << 20));
        out.accumulate_product(self, rhs);
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(&self.alg, self.trunc);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Complex-conjugate the coefficients. This is conjugation of the
    /// polynomial itself only when every variable stands for a real quantity.
    pub fn conj_coeffs(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.conj();
        }
        out
    }

    pub fn deriv_even(&self, i: u8) -> Self {
        let mut out = Self::zero(&self.alg, self.trunc);
        let i = i as usize;
        for (m, c) in self.terms.iter() {
            let e = m.ev(i);
            if e > 0 {
                out.terms
                    .insert(m.with_ev(i, e - 1), c.mul(&C::from_int(e as i64)));
            }
        }
        out
    }

    /// Drop terms above `n` and lower the tracked truncation order.
    pub fn truncate(&self, n: u8) -> Self {
        let mut out = Self::zero(&self.alg, n.min(self.trunc));
        for (m, c) in self.terms.iter() {
            if m.lam() <= out.trunc {
                out.terms.insert(*m, *c);
            }
        }
        out
    }

    pub fn min_lambda_order(&self) -> Option<u8> {
        self.terms.keys().map(|m| m.lam()).min()
    }

    pub fn max_lambda_order(&self) -> Option<u8> {
        self.terms.keys().map(|m| m.lam()).max()
    }

    /// Coefficient polynomial of λᵏ (the λ power is stripped).
    pub fn lambda_coefficient(&self, k: u8) -> Self {
        let mut out = Self::zero(&self.alg, self.trunc);
        for (m, c) in self.terms.iter() {
            if m.lam() == k {
                out.terms.insert(m.with_lam(0), *c);
            }
        }
        out
    }

    /// Bitmask of even variables that actually occur.
    pub fn even_support(&self) -> u16 {
        let mut mask = 0u16;
        for m in self.terms.keys() {
            for i in 0..self.alg.n_even() {
                if m.ev(i) > 0 {
                    mask |= 1 << i;
                }
            }
        }
        mask
    }

    /// Grassmann parity, if homogeneous. The zero polynomial counts as even.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys();
        let first = match it.next() {
            None => return Some(Parity::Even),
            Some(m) => m.parity(),
        };
        for m in it {
            if m.parity() != first {
                return None;
            }
        }
        Some(first)
    }

    /// Split into (odd-generator mask, even coefficient polynomial) parts.
    pub fn odd_components(&self) -> Vec<(u8, Self)> {
        let mut parts: HashMap<u8, Self> = HashMap::new();
        for (m, c) in self.terms.iter() {
            parts
                .entry(m.odd())
                .or_insert_with(|| Self::zero(&self.alg, self.trunc))
                .terms
                .insert(m.with_odd(0), *c);
        }
        let mut out: Vec<_> = parts.into_iter().collect();
        out.sort_by_key(|(mask, _)| *mask);
        out
    }

    fn sorted_terms(&self) -> Vec<(Monomial, C)> {
        let mut v: Vec<_> = self.terms.iter().map(|(m, c)| (*m, *c)).collect();
        v.sort_by_key(|(m, _)| (m.lam(), *m));
        v
    }
}

/// Exact rational values for λ and the even variables of an algebra.
#[derive(Clone, Debug)]
pub struct Assignment {
    alg: Arc<Algebra>,
    lambda: Option<Rat>,
    evens: Vec<Option<Rat>>,
}

impl Assignment {
    pub fn new(alg: &Arc<Algebra>) -> Self {
        Self {
            alg: alg.clone(),
            lambda: None,
            evens: vec![None; alg.n_even()],
        }
    }

    pub fn set(mut self, name: &str, v: Rat) -> Result<Self, SymError> {
        match self.alg.var(name)? {
            Var::Lambda => self.lambda = Some(v),
            Var::Even(i) => self.evens[i as usize] = Some(v),
            Var::Odd(_) => return Err(SymError::OddInSubstitution(name.into())),
        }
        Ok(self)
    }

    pub fn set_lambda(mut self, v: Rat) -> Self {
        self.lambda = Some(v);
        self
    }

    fn even(&self, i: usize) -> Option<&Rat> {
        self.evens[i].as_ref()
    }
}

impl GradedPoly<Gauss> {
    /// Exact evaluation at a rational point. Every even variable occurring in
    /// the polynomial (and λ, if present) must be assigned; odd generators
    /// must be absent.
    pub fn eval_exact(&self, asn: &Assignment) -> Result<Gauss, SymError> {
        assert!(self.alg.same(&asn.alg));
        let mut acc: Gauss = num::Zero::zero();
        for (m, c) in self.terms.iter() {
            if m.odd() != 0 {
                let i = m.odd().trailing_zeros() as u8;
                return Err(SymError::OddInSubstitution(
                    self.alg.name(Var::Odd(i)).to_string(),
                ));
            }
            let mut factor: Rat = num::One::one();
            if m.lam() > 0 {
                let l = asn.lambda.as_ref().ok_or_else(|| {
                    SymError::MissingAssignment(super::algebra::LAMBDA_NAME.into())
                })?;
                factor *= rat_pow(l, m.lam() as u32);
            }
            for i in 0..self.alg.n_even() {
                let e = m.ev(i);
                if e > 0 {
                    let v = asn.even(i).ok_or_else(|| {
                        SymError::MissingAssignment(self.alg.name(Var::Even(i as u8)).to_string())
                    })?;
                    factor *= rat_pow(v, e as u32);
                }
            }
            acc += c * Gauss::new(factor, Rat::zero());
        }
        Ok(acc)
    }

    /// Substitute the assigned variables, leaving the rest symbolic. Odd
    /// generators pass through untouched.
    pub fn substitute_evens(&self, asn: &Assignment) -> Result<Self, SymError> {
        assert!(self.alg.same(&asn.alg));
        let mut out = Self::zero(&self.alg, self.trunc);
        for (m, c) in self.terms.iter() {
            let mut factor: Rat = num::One::one();
            let mut mm = *m;
            if m.lam() > 0 {
                if let Some(l) = &asn.lambda {
                    factor *= rat_pow(l, m.lam() as u32);
                    mm = mm.with_lam(0);
                }
            }
            for i in 0..self.alg.n_even() {
                let e = m.ev(i);
                if e > 0 {
                    if let Some(v) = asn.even(i) {
                        factor *= rat_pow(v, e as u32);
                        mm = mm.with_ev(i, 0);
                    }
                }
            }
            out.insert_term(mm, c * Gauss::new(factor, Rat::zero()));
        }
        Ok(out)
    }

    /// Double-precision evaluation (numeric bivector entries).
    pub fn eval_f64(&self, lambda: f64, evens: &[f64]) -> Complex64 {
        debug_assert_eq!(evens.len(), self.alg.n_even());
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in self.terms.iter() {
            debug_assert_eq!(m.odd(), 0);
            let mut factor = lambda.powi(m.lam() as i32);
            for (i, v) in evens.iter().enumerate() {
                let e = m.ev(i);
                if e > 0 {
                    factor *= v.powi(e as i32);
                }
            }
            acc += Complex64::new(rat_f64(&c.re), rat_f64(&c.im)) * factor;
        }
        acc
    }
}

pub(crate) fn rat_f64(r: &Rat) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn rat_pow(r: &Rat, e: u32) -> Rat {
    let mut acc: Rat = num::One::one();
    for _ in 0..e {
        acc *= r;
    }
    acc
}

impl<C: Coeff> fmt::Display for GradedPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.sorted_terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            if m.lam() == 1 {
                write!(f, "*{}", super::algebra::LAMBDA_NAME)?;
            } else if m.lam() > 1 {
                write!(f, "*{}^{}", super::algebra::LAMBDA_NAME, m.lam())?;
            }
            for i in 0..self.alg.n_even() {
                let e = m.ev(i);
                if e == 1 {
                    write!(f, "*{}", self.alg.name(Var::Even(i as u8)))?;
                } else if e > 1 {
                    write!(f, "*{}^{}", self.alg.name(Var::Even(i as u8)), e)?;
                }
            }
            for i in 0..self.alg.n_odd() {
                if m.odd() & (1 << i) != 0 {
                    write!(f, "*{}", self.alg.name(Var::Odd(i as u8)))?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{gauss_int, gauss_rat, rat, Dyadic};

    fn xp_algebra() -> Arc<Algebra> {
        Algebra::new(&["x0", "x1", "x2", "x3", "p0", "p1", "p2", "p3"], &[]).unwrap()
    }

    #[test]
    fn grassmann_generators_square_to_zero_and_anticommute() {
        let alg = Algebra::new(&[], &["u", "v"]).unwrap();
        let u = GradedPoly::<Gauss>::var_named(&alg, "u", 10).unwrap();
        let v = GradedPoly::<Gauss>::var_named(&alg, "v", 10).unwrap();
        assert!(u.mul(&u).is_zero());
        assert!(v.mul(&v).is_zero());
        let uv = u.mul(&v);
        let vu = v.mul(&u);
        assert_eq!(vu, uv.neg());
        assert!(uv.add(&vu).is_zero());
        assert_eq!(u.parity(), Some(Parity::Odd));
        assert_eq!(uv.parity(), Some(Parity::Even));
    }

    #[test]
    fn arithmetic_associative_distributive() {
        let alg = xp_algebra();
        let x0 = GradedPoly::<Gauss>::var_named(&alg, "x0", 6).unwrap();
        let x1 = GradedPoly::<Gauss>::var_named(&alg, "x1", 6).unwrap();
        let l = GradedPoly::<Gauss>::var(&alg, Var::Lambda, 6);
        let a = x0.add(&l.mul(&x1)).add(&GradedPoly::constant(&alg, 6, gauss_rat(1, 3)));
        let b = x1.sub(&l.mul(&l));
        let c = x0.mul(&x1).add(&l);
        assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    }

    #[test]
    fn truncation_drops_high_orders() {
        let alg = xp_algebra();
        let l = GradedPoly::<Gauss>::var(&alg, Var::Lambda, 3);
        // (1 + λ)^5 at truncation 3 keeps orders 0..=3
        let p = GradedPoly::one(&alg, 3).add(&l).pow(5);
        assert_eq!(p.max_lambda_order(), Some(3));
        assert_eq!(p.lambda_coefficient(3), GradedPoly::constant(&alg, 3, gauss_int(10)));
        // computing at higher order then truncating matches computing low
        let l6 = GradedPoly::<Gauss>::var(&alg, Var::Lambda, 6);
        let q = GradedPoly::one(&alg, 6).add(&l6).pow(5).truncate(3);
        assert_eq!(q, p);
    }

    #[test]
    fn substitute_numeric_examples() {
        // det-1 point: ad - bc - 1 = 0 at a=2,b=1,c=1,d=1... (2*1-1*1-1=0)
        let alg = Algebra::new(&["a", "b", "c", "d"], &[]).unwrap();
        let a = GradedPoly::<Gauss>::var_named(&alg, "a", 4).unwrap();
        let b = GradedPoly::<Gauss>::var_named(&alg, "b", 4).unwrap();
        let c = GradedPoly::<Gauss>::var_named(&alg, "c", 4).unwrap();
        let d = GradedPoly::<Gauss>::var_named(&alg, "d", 4).unwrap();
        let f = a.mul(&d).sub(&b.mul(&c)).sub(&GradedPoly::one(&alg, 4));
        let asn = Assignment::new(&alg)
            .set("a", rat(2, 1)).unwrap()
            .set("b", rat(1, 1)).unwrap()
            .set("c", rat(1, 1)).unwrap()
            .set("d", rat(1, 1)).unwrap();
        assert_eq!(f.eval_exact(&asn).unwrap(), num::Zero::zero());

        // 2λx₃(x₀+x₃) at λ=1/3, x=(0,0,0,1) → 2/3
        let alg = xp_algebra();
        let x0 = GradedPoly::<Gauss>::var_named(&alg, "x0", 4).unwrap();
        let x3 = GradedPoly::<Gauss>::var_named(&alg, "x3", 4).unwrap();
        let l = GradedPoly::<Gauss>::var(&alg, Var::Lambda, 4);
        let f = l.scale(&gauss_int(2)).mul(&x3).mul(&x0.add(&x3));
        let asn = Assignment::new(&alg)
            .set_lambda(rat(1, 3))
            .set("x0", rat(0, 1)).unwrap()
            .set("x1", rat(0, 1)).unwrap()
            .set("x2", rat(0, 1)).unwrap()
            .set("x3", rat(1, 1)).unwrap();
        assert_eq!(f.eval_exact(&asn).unwrap(), gauss_rat(2, 3));

        // the zero polynomial evaluates to zero anywhere
        let z = GradedPoly::<Gauss>::zero(&alg, 4);
        assert_eq!(z.eval_exact(&asn).unwrap(), num::Zero::zero());
    }

    #[test]
    fn substitute_rejects_odd_and_missing() {
        let alg = Algebra::new(&["a"], &["u"]).unwrap();
        let a = GradedPoly::<Gauss>::var_named(&alg, "a", 4).unwrap();
        let u = GradedPoly::<Gauss>::var_named(&alg, "u", 4).unwrap();
        let asn = Assignment::new(&alg).set("a", rat(1, 2)).unwrap();
        match a.mul(&u).eval_exact(&asn) {
            Err(SymError::OddInSubstitution(name)) => assert_eq!(name, "u"),
            other => panic!("expected odd rejection, got {other:?}"),
        }
        let empty = Assignment::new(&alg);
        match a.eval_exact(&empty) {
            Err(SymError::MissingAssignment(name)) => assert_eq!(name, "a"),
            other => panic!("expected missing assignment, got {other:?}"),
        }
    }

    #[test]
    fn odd_components_split() {
        let alg = Algebra::new(&["a"], &["u", "v"]).unwrap();
        let a = GradedPoly::<Gauss>::var_named(&alg, "a", 4).unwrap();
        let u = GradedPoly::<Gauss>::var_named(&alg, "u", 4).unwrap();
        let v = GradedPoly::<Gauss>::var_named(&alg, "v", 4).unwrap();
        let p = a.mul(&u).add(&u.mul(&v).scale(&gauss_int(3))).add(&GradedPoly::one(&alg, 4));
        let parts = p.odd_components();
        assert_eq!(parts.len(), 3);
        assert_eq!(parts[0].0, 0);
        assert_eq!(parts[0].1, GradedPoly::one(&alg, 4));
        assert_eq!(parts[1].0, 0b01);
        assert_eq!(parts[1].1, a);
        assert_eq!(parts[2].0, 0b11);
        assert_eq!(parts[2].1, GradedPoly::constant(&alg, 4, gauss_int(3)));
    }

    #[test]
    fn dyadic_and_gauss_multiplication_agree() {
        let alg = xp_algebra();
        let build = |c: i64, names: &[&str]| {
            let mut pg = GradedPoly::<Gauss>::constant(&alg, 8, gauss_int(c as i128));
            let mut pd = GradedPoly::<Dyadic>::constant(&alg, 8, Dyadic::from_int(c));
            for n in names {
                pg = pg.mul(&GradedPoly::var_named(&alg, n, 8).unwrap());
                pd = pd.mul(&GradedPoly::var_named(&alg, n, 8).unwrap());
            }
            (pg, pd)
        };
        let (g1, d1) = build(3, &["x0", "p1"]);
        let (g2, d2) = build(-2, &["x0", "x0", "p2"]);
        let (g3, d3) = build(7, &["x3"]);
        let gg = g1.add(&g2).mul(&g2.add(&g3));
        let dd = d1.add(&d2).mul(&d2.add(&d3));
        assert_eq!(gg.num_terms(), dd.num_terms());
        for (m, c) in dd.terms() {
            let gc = gg.terms().find(|(mm, _)| *mm == m).unwrap().1;
            assert_eq!(Dyadic::try_from_gauss(gc).unwrap(), *c);
        }
    }
}
