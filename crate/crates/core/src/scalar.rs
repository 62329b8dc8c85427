//! Exact coefficient arithmetic for the symbolic engine.
//!
//! Two coefficient rings are used: [`Gauss`] (Gaussian rationals, the general
//! ring every bracket table is built over) and [`Dyadic`] (rationals whose
//! denominator is a power of two). Every coefficient in the phase-space
//! sector is dyadic: the tensor dictionaries contribute ±1/2, the r-matrix
//! ±λ/2, and the deformation series 1, −1/2, −1/8, −1/16, −5/128. The heavy
//! Jacobi-order scan therefore runs over [`Dyadic`], which needs no gcd
//! reduction.

use std::fmt;

use num::rational::Ratio;
use num::{Complex, One, Signed, Zero};
use serde::Serialize;

/// Exact rational scalar. `i128` leaves ample headroom: the identity checks
/// never produce numerators beyond ~10^20, and overflow checks are enabled
/// workspace-wide so a silent wrap is impossible.
pub type Rat = Ratio<i128>;

/// Exact Gaussian rational.
pub type Gauss = Complex<Rat>;

pub fn rat(n: i128, d: i128) -> Rat {
    Ratio::new(n, d)
}

pub fn gauss(re: Rat, im: Rat) -> Gauss {
    Complex::new(re, im)
}

pub fn gauss_int(n: i128) -> Gauss {
    Complex::new(Ratio::from_integer(n), Rat::zero())
}

pub fn gauss_rat(n: i128, d: i128) -> Gauss {
    Complex::new(rat(n, d), Rat::zero())
}

/// The imaginary unit.
pub fn gauss_i() -> Gauss {
    Complex::new(Rat::zero(), Rat::one())
}

/// Coefficient ring used by [`crate::sym::GradedPoly`].
pub trait Coeff: Copy + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Complex conjugate; the identity on real rings.
    fn conj(&self) -> Self;
    fn from_int(n: i64) -> Self;
}

impl Coeff for Gauss {
    fn zero() -> Self {
        Complex::new(Rat::zero(), Rat::zero())
    }
    fn one() -> Self {
        Complex::new(Rat::one(), Rat::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }
    fn from_int(n: i64) -> Self {
        gauss_int(n as i128)
    }
}

/// Dyadic rational `num * 2^exp` with `num` odd (or zero with `exp = 0`).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct Dyadic {
    num: i128,
    exp: i32,
}

impl Dyadic {
    pub fn new(num: i128, exp: i32) -> Self {
        Self { num, exp }.normalized()
    }

    fn normalized(self) -> Self {
        if self.num == 0 {
            return Self { num: 0, exp: 0 };
        }
        let tz = self.num.trailing_zeros() as i32;
        Self {
            num: self.num >> tz,
            exp: self.exp + tz,
        }
    }

    pub fn numer(&self) -> i128 {
        self.num
    }

    pub fn exponent(&self) -> i32 {
        self.exp
    }

    /// Exact conversion from a real dyadic Gaussian rational.
    pub fn try_from_gauss(g: &Gauss) -> Option<Self> {
        if !g.im.is_zero() {
            return None;
        }
        let d = *g.re.denom();
        if d <= 0 || (d & (d - 1)) != 0 {
            return None;
        }
        Some(Self::new(*g.re.numer(), -(d.trailing_zeros() as i32)))
    }

    pub fn to_rat(&self) -> Rat {
        if self.exp >= 0 {
            Ratio::from_integer(self.num << self.exp)
        } else {
            rat(self.num, 1i128 << (-self.exp))
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 * (self.exp as f64).exp2()
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp >= 0 {
            write!(f, "{}", self.num << self.exp)
        } else {
            write!(f, "{}/{}", self.num, 1i128 << (-self.exp))
        }
    }
}

impl Coeff for Dyadic {
    fn zero() -> Self {
        Self { num: 0, exp: 0 }
    }
    fn one() -> Self {
        Self { num: 1, exp: 0 }
    }
    fn is_zero(&self) -> bool {
        self.num == 0
    }
    fn add(&self, rhs: &Self) -> Self {
        if self.num == 0 {
            return *rhs;
        }
        if rhs.num == 0 {
            return *self;
        }
        // Align to the smaller exponent; odd + odd cancels, so renormalize.
        let (lo, hi) = if self.exp <= rhs.exp {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let shift = hi.exp - lo.exp;
        assert!(shift < 100, "dyadic exponent spread too large: {shift}");
        Self {
            num: lo.num + (hi.num << shift),
            exp: lo.exp,
        }
        .normalized()
    }
    fn mul(&self, rhs: &Self) -> Self {
        // odd * odd stays odd; no renormalization needed.
        Self {
            num: self.num * rhs.num,
            exp: self.exp + rhs.exp,
        }
    }
    fn neg(&self) -> Self {
        Self {
            num: -self.num,
            exp: self.exp,
        }
    }
    fn conj(&self) -> Self {
        *self
    }
    fn from_int(n: i64) -> Self {
        Self::new(n as i128, 0)
    }
}

/// Render a Gaussian rational compactly, e.g. `-2`, `1/3`, `i`, `(1/2-3i)`.
pub fn format_gauss(g: &Gauss) -> String {
    fn fr(r: &Rat) -> String {
        if r.denom().is_one() {
            format!("{}", r.numer())
        } else {
            format!("{}/{}", r.numer(), r.denom())
        }
    }
    match (g.re.is_zero(), g.im.is_zero()) {
        (true, true) => "0".into(),
        (false, true) => fr(&g.re),
        (true, false) => {
            if g.im.is_one() {
                "i".into()
            } else if (-g.im.clone()).is_one() {
                "-i".into()
            } else {
                format!("{}i", fr(&g.im))
            }
        }
        (false, false) => {
            let im = if g.im.is_positive() {
                format!("+{}i", fr(&g.im))
            } else {
                format!("{}i", fr(&g.im))
            };
            format!("({}{})", fr(&g.re), im)
        }
    }
}
