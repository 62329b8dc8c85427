//! Variable sets for the graded polynomial algebra.

use std::sync::Arc;

use super::SymError;

/// Most variables any shipped bracket structure needs at once is twelve
/// (two group-element families plus four vector components).
pub const MAX_EVEN: usize = 12;
/// Monomials carry the odd generators as a bitmask.
pub const MAX_ODD: usize = 8;

/// Name λ prints under; reserved so it cannot collide with a user variable.
pub const LAMBDA_NAME: &str = "l";

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Parity {
    Even,
    Odd,
}

/// Reference to a variable of an [`Algebra`]. λ is always present.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Var {
    Lambda,
    Even(u8),
    Odd(u8),
}

impl Var {
    pub fn parity(&self) -> Parity {
        match self {
            Var::Odd(_) => Parity::Odd,
            _ => Parity::Even,
        }
    }
}

/// An immutable set of named variables. Even names are stored sorted so the
/// monomial exponent layout is the lexicographic order of the names; odd
/// generators come after all even ones.
#[derive(PartialEq, Eq, Debug)]
pub struct Algebra {
    evens: Vec<String>,
    odds: Vec<String>,
}

impl Algebra {
    pub fn new(evens: &[&str], odds: &[&str]) -> Result<Arc<Self>, SymError> {
        if evens.len() > MAX_EVEN {
            return Err(SymError::TooManyVariables {
                n: evens.len(),
                parity: "even",
                limit: MAX_EVEN,
            });
        }
        if odds.len() > MAX_ODD {
            return Err(SymError::TooManyVariables {
                n: odds.len(),
                parity: "odd",
                limit: MAX_ODD,
            });
        }
        let mut ev: Vec<String> = evens.iter().map(|s| s.to_string()).collect();
        let mut od: Vec<String> = odds.iter().map(|s| s.to_string()).collect();
        ev.sort();
        od.sort();
        for name in ev.iter().chain(od.iter()) {
            if name == LAMBDA_NAME {
                return Err(SymError::ReservedName(name.clone()));
            }
        }
        let mut all: Vec<&String> = ev.iter().chain(od.iter()).collect();
        all.sort();
        for w in all.windows(2) {
            if w[0] == w[1] {
                return Err(SymError::DuplicateVariable(w[0].clone()));
            }
        }
        Ok(Arc::new(Self { evens: ev, odds: od }))
    }

    pub fn n_even(&self) -> usize {
        self.evens.len()
    }

    pub fn n_odd(&self) -> usize {
        self.odds.len()
    }

    pub fn var(&self, name: &str) -> Result<Var, SymError> {
        if name == LAMBDA_NAME {
            return Ok(Var::Lambda);
        }
        if let Ok(i) = self.evens.binary_search_by(|v| v.as_str().cmp(name)) {
            return Ok(Var::Even(i as u8));
        }
        if let Ok(i) = self.odds.binary_search_by(|v| v.as_str().cmp(name)) {
            return Ok(Var::Odd(i as u8));
        }
        Err(SymError::UnknownVariable(name.to_string()))
    }

    pub fn name(&self, v: Var) -> &str {
        match v {
            Var::Lambda => LAMBDA_NAME,
            Var::Even(i) => &self.evens[i as usize],
            Var::Odd(i) => &self.odds[i as usize],
        }
    }

    pub fn even_names(&self) -> &[String] {
        &self.evens
    }

    pub fn odd_names(&self) -> &[String] {
        &self.odds
    }

    /// True when `other` declares the same variables.
    pub fn same(&self, other: &Self) -> bool {
        self == other
    }
}
