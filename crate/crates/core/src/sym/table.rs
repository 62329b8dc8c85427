//! Fundamental Poisson brackets and their Leibniz extension.

use std::collections::HashMap;
use std::sync::Arc;

use super::algebra::{Algebra, Parity, Var};
use super::poly::{GradedPoly, Monomial};
use super::SymError;
use crate::scalar::Coeff;

/// Fundamental brackets between generator pairs. Only nonzero entries are
/// stored; both orientations are kept so lookup never needs a sign fixup.
/// Inserting a pair derives its mirror through graded antisymmetry
/// {A,B} = −(−1)^{|A||B|}{B,A} and rejects inconsistent double entries.
#[derive(Clone, Debug)]
pub struct BracketTable<C: Coeff> {
    alg: Arc<Algebra>,
    entries: HashMap<(Var, Var), GradedPoly<C>>,
}

impl<C: Coeff> BracketTable<C> {
    pub fn new(alg: &Arc<Algebra>) -> Self {
        Self {
            alg: alg.clone(),
            entries: HashMap::new(),
        }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn insert(&mut self, u: Var, v: Var, poly: GradedPoly<C>) -> Result<(), SymError> {
        assert!(poly.algebra().same(&self.alg));
        let mirror_sign_flip = !(u.parity() == Parity::Odd && v.parity() == Parity::Odd);
        if u == v {
            // {A,A} must vanish unless A is odd
            if mirror_sign_flip && !poly.is_zero() {
                return Err(SymError::AntisymmetryInconsistency {
                    u: self.alg.name(u).to_string(),
                    v: self.alg.name(v).to_string(),
                });
            }
            return self.insert_directed(u, u, poly);
        }
        let mirror = if mirror_sign_flip { poly.neg() } else { poly.clone() };
        self.insert_directed(u, v, poly)?;
        self.insert_directed(v, u, mirror)
    }

    fn insert_directed(&mut self, u: Var, v: Var, poly: GradedPoly<C>) -> Result<(), SymError> {
        if let Some(existing) = self.entries.get(&(u, v)) {
            if existing != &poly {
                return Err(SymError::AntisymmetryInconsistency {
                    u: self.alg.name(u).to_string(),
                    v: self.alg.name(v).to_string(),
                });
            }
            return Ok(());
        }
        if !poly.is_zero() {
            self.entries.insert((u, v), poly);
        }
        Ok(())
    }

    /// {u, v}; absent pairs bracket to zero.
    pub fn get(&self, u: Var, v: Var) -> Option<&GradedPoly<C>> {
        self.entries.get(&(u, v))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&(Var, Var), &GradedPoly<C>)> {
        self.entries.iter()
    }

    /// Map every entry's coefficients into another ring (used to move the
    /// phase-space sector onto the dyadic fast path).
    pub fn map_coeffs<D: Coeff, F>(&self, f: F) -> Result<BracketTable<D>, SymError>
    where
        F: Fn(&C) -> Result<D, SymError>,
    {
        let mut out = BracketTable::new(&self.alg);
        for ((u, v), p) in self.entries.iter() {
            let mut q = GradedPoly::<D>::zero(&self.alg, p.truncation());
            for (m, c) in p.terms() {
                q.insert_term(*m, f(c)?);
            }
            out.entries.insert((*u, *v), q);
        }
        Ok(out)
    }
}

/// Bilinear graded-antisymmetric extension of the fundamental brackets,
/// satisfying {A, BC} = {A,B}C + (−1)^{|A||B|} B{A,C}. The truncation order
/// of the result is the finer of the two inputs'.
pub fn poisson_bracket<C: Coeff>(
    f: &GradedPoly<C>,
    g: &GradedPoly<C>,
    table: &BracketTable<C>,
) -> Result<GradedPoly<C>, SymError> {
    check_algebra(f, table)?;
    check_algebra(g, table)?;
    let trunc = f.truncation().min(g.truncation());
    let alg = table.algebra();

    // Purely even arguments: the Leibniz extension collapses to the
    // biderivation Σ ∂F/∂a ∂G/∂b {a,b}.
    let f_even = f.terms().all(|(m, _)| m.odd() == 0);
    let g_even = g.terms().all(|(m, _)| m.odd() == 0);
    if f_even && g_even {
        let mut out = GradedPoly::zero(alg, trunc);
        let fa = f.even_support();
        let gb = g.even_support();
        let mut dg: HashMap<u8, GradedPoly<C>> = HashMap::new();
        for a in 0..alg.n_even() as u8 {
            if fa & (1 << a) == 0 {
                continue;
            }
            let mut dfa: Option<GradedPoly<C>> = None;
            for b in 0..alg.n_even() as u8 {
                if gb & (1 << b) == 0 {
                    continue;
                }
                let t = match table.get(Var::Even(a), Var::Even(b)) {
                    Some(t) => t,
                    None => continue,
                };
                let dfa = dfa.get_or_insert_with(|| f.deriv_even(a));
                if dfa.is_zero() {
                    break;
                }
                let dgb = dg.entry(b).or_insert_with(|| g.deriv_even(b));
                if dgb.is_zero() {
                    continue;
                }
                let small = dfa.mul(dgb);
                out.accumulate_product(&small, t);
            }
        }
        return Ok(out);
    }

    // General case: recursive super-Leibniz expansion monomial by monomial.
    let mut out = GradedPoly::zero(alg, trunc);
    for (m1, c1) in f.terms() {
        for (m2, c2) in g.terms() {
            if m1.lam() + m2.lam() > trunc {
                continue;
            }
            let b = bracket_monomials(alg, trunc, m1, m2, table)?;
            if !b.is_zero() {
                let c = c1.mul(c2);
                out.add_assign(&b.scale(&c));
            }
        }
    }
    Ok(out)
}

fn check_algebra<C: Coeff>(p: &GradedPoly<C>, table: &BracketTable<C>) -> Result<(), SymError> {
    if p.algebra().same(table.algebra()) {
        return Ok(());
    }
    // Name the first variable the table's algebra does not know.
    for name in p
        .algebra()
        .even_names()
        .iter()
        .chain(p.algebra().odd_names().iter())
    {
        if table.algebra().var(name).is_err() {
            return Err(SymError::UnknownVariable(name.clone()));
        }
    }
    Err(SymError::UnknownVariable("<algebra mismatch>".into()))
}

fn factor_list(alg: &Arc<Algebra>, m: &Monomial) -> Vec<Var> {
    let mut out = Vec::new();
    for i in 0..alg.n_even() {
        for _ in 0..m.ev(i) {
            out.push(Var::Even(i as u8));
        }
    }
    for i in 0..alg.n_odd() as u8 {
        if m.odd() & (1 << i) != 0 {
            out.push(Var::Odd(i));
        }
    }
    out
}

fn vars_poly<C: Coeff>(alg: &Arc<Algebra>, trunc: u8, vars: &[Var]) -> GradedPoly<C> {
    let mut out = GradedPoly::one(alg, trunc);
    for v in vars {
        out = out.mul(&GradedPoly::var(alg, *v, trunc));
    }
    out
}

fn vars_parity(vars: &[Var]) -> Parity {
    if vars.iter().filter(|v| v.parity() == Parity::Odd).count() % 2 == 0 {
        Parity::Even
    } else {
        Parity::Odd
    }
}

fn bracket_monomials<C: Coeff>(
    alg: &Arc<Algebra>,
    trunc: u8,
    m1: &Monomial,
    m2: &Monomial,
    table: &BracketTable<C>,
) -> Result<GradedPoly<C>, SymError> {
    // λ is central: strip its powers and restore them afterwards.
    let lam = m1.lam() + m2.lam();
    let f1 = factor_list(alg, m1);
    let f2 = factor_list(alg, m2);
    let b = bracket_factors(alg, trunc, &f1, &f2, table)?;
    if lam == 0 || b.is_zero() {
        return Ok(b);
    }
    Ok(b.mul_term(&Monomial::one().with_lam(lam), &C::one()))
}

fn bracket_factors<C: Coeff>(
    alg: &Arc<Algebra>,
    trunc: u8,
    f1: &[Var],
    f2: &[Var],
    table: &BracketTable<C>,
) -> Result<GradedPoly<C>, SymError> {
    if f1.is_empty() || f2.is_empty() {
        return Ok(GradedPoly::zero(alg, trunc));
    }
    if f1.len() == 1 && f2.len() == 1 {
        return Ok(match table.get(f1[0], f2[0]) {
            Some(p) => p.truncate(trunc),
            None => GradedPoly::zero(alg, trunc),
        });
    }
    if f1.len() > 1 {
        // {AB, C} = A{B,C} + (−1)^{|B||C|}{A,C}B
        let a = &f1[..1];
        let b = &f1[1..];
        let term1 = vars_poly::<C>(alg, trunc, a).mul(&bracket_factors(alg, trunc, b, f2, table)?);
        let ac = bracket_factors(alg, trunc, a, f2, table)?;
        let mut term2 = ac.mul(&vars_poly::<C>(alg, trunc, b));
        if vars_parity(b) == Parity::Odd && vars_parity(f2) == Parity::Odd {
            term2 = term2.neg();
        }
        return Ok(term1.add(&term2));
    }
    // {A, hT} = {A,h}T + (−1)^{|A||h|} h{A,T}
    let h = &f2[..1];
    let t = &f2[1..];
    let term1 = bracket_factors(alg, trunc, f1, h, table)?.mul(&vars_poly::<C>(alg, trunc, t));
    let mut term2 = vars_poly::<C>(alg, trunc, h).mul(&bracket_factors(alg, trunc, f1, t, table)?);
    if vars_parity(f1) == Parity::Odd && vars_parity(h) == Parity::Odd {
        term2 = term2.neg();
    }
    Ok(term1.add(&term2))
}

/// {F,{G,H}} + {G,{H,F}} + {H,{F,G}} with graded cyclic signs,
/// (−1)^{|F||H|}{F,{G,H}} + (−1)^{|G||F|}{G,{H,F}} + (−1)^{|H||G|}{H,{F,G}}.
/// Vanishes identically exactly when the table restricts to a Poisson
/// structure on these arguments up to the truncation order.
pub fn jacobiator<C: Coeff>(
    f: &GradedPoly<C>,
    g: &GradedPoly<C>,
    h: &GradedPoly<C>,
    table: &BracketTable<C>,
) -> Result<GradedPoly<C>, SymError> {
    let pf = f.parity().ok_or(SymError::MixedParity)?;
    let pg = g.parity().ok_or(SymError::MixedParity)?;
    let ph = h.parity().ok_or(SymError::MixedParity)?;
    let sign = |a: Parity, b: Parity| a == Parity::Odd && b == Parity::Odd;

    let mut out = {
        let inner = poisson_bracket(g, h, table)?;
        let t = poisson_bracket(f, &inner, table)?;
        if sign(pf, ph) {
            t.neg()
        } else {
            t
        }
    };
    {
        let inner = poisson_bracket(h, f, table)?;
        let t = poisson_bracket(g, &inner, table)?;
        out.add_assign(&if sign(pg, pf) { t.neg() } else { t });
    }
    {
        let inner = poisson_bracket(f, g, table)?;
        let t = poisson_bracket(h, &inner, table)?;
        out.add_assign(&if sign(ph, pg) { t.neg() } else { t });
    }
    Ok(out)
}

/// Entrywise bracket of two 2×2 polynomial matrices placed in tensor slots 1
/// and 2: result_{(ik),(jl)} = {A_ij, B_kl}, rows (i,k), columns (j,l).
pub fn bracket_matrix<C: Coeff>(
    a: &super::PolyMat<C>,
    b: &super::PolyMat<C>,
    table: &BracketTable<C>,
) -> Result<super::PolyMat<C>, SymError> {
    if a.n != 2 || b.n != 2 {
        return Err(SymError::DimensionMismatch(a.n, b.n));
    }
    let mut out = super::PolyMat::zero(table.algebra(), a.trunc().min(b.trunc()), 4);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    let br = poisson_bracket(a.get(i, j), b.get(k, l), table)?;
                    out.set(2 * i + k, 2 * j + l, br);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{gauss, gauss_int, rat, Gauss, Rat};
    use crate::sym::{Assignment, GradedPoly};
    use num::Zero;

    fn gp(alg: &Arc<Algebra>, name: &str) -> GradedPoly<Gauss> {
        GradedPoly::var_named(alg, name, 10).unwrap()
    }

    fn canonical() -> (Arc<Algebra>, BracketTable<Gauss>) {
        let alg = Algebra::new(&["x0", "x1", "x2", "x3", "p0", "p1", "p2", "p3"], &[]).unwrap();
        let mut t = BracketTable::new(&alg);
        let eta = [-1i64, 1, 1, 1];
        for mu in 0..4usize {
            t.insert(
                alg.var(&format!("x{mu}")).unwrap(),
                alg.var(&format!("p{mu}")).unwrap(),
                GradedPoly::constant(&alg, 10, gauss_int(eta[mu] as i128)),
            )
            .unwrap();
        }
        (alg, t)
    }

    /// Hand-entered quadratic group-entry brackets:
    /// {a,b}=−iλab, {a,c}=−iλac, {b,d}=−iλbd, {c,d}=−iλcd, {b,c}=0, {a,d}=−2iλbc.
    fn group_hand() -> (Arc<Algebra>, BracketTable<Gauss>) {
        let alg = Algebra::new(&["a", "b", "c", "d"], &[]).unwrap();
        let mut t = BracketTable::new(&alg);
        let l = GradedPoly::<Gauss>::var(&alg, Var::Lambda, 10);
        let mi = gauss(Rat::zero(), rat(-1, 1)); // -i
        let set = |t: &mut BracketTable<Gauss>, u: &str, v: &str, rhs: GradedPoly<Gauss>| {
            t.insert(alg.var(u).unwrap(), alg.var(v).unwrap(), rhs).unwrap();
        };
        set(&mut t, "a", "b", l.mul(&gp(&alg, "a")).mul(&gp(&alg, "b")).scale(&mi));
        set(&mut t, "a", "c", l.mul(&gp(&alg, "a")).mul(&gp(&alg, "c")).scale(&mi));
        set(&mut t, "b", "d", l.mul(&gp(&alg, "b")).mul(&gp(&alg, "d")).scale(&mi));
        set(&mut t, "c", "d", l.mul(&gp(&alg, "c")).mul(&gp(&alg, "d")).scale(&mi));
        set(&mut t, "a", "d", l.mul(&gp(&alg, "b")).mul(&gp(&alg, "c")).scale(&(mi * gauss_int(2))));
        (alg, t)
    }

    /// Hand-entered x-sector component brackets:
    /// {x_i,x_j} = 2λ ε_ijk x_k (x₀+x₃), {x_i,x₀} = 0.
    fn x_sector_hand() -> (Arc<Algebra>, BracketTable<Gauss>) {
        let alg = Algebra::new(&["x0", "x1", "x2", "x3"], &[]).unwrap();
        let mut t = BracketTable::new(&alg);
        let l = GradedPoly::<Gauss>::var(&alg, Var::Lambda, 10);
        let x0px3 = gp(&alg, "x0").add(&gp(&alg, "x3"));
        for (i, j, k) in [(1usize, 2usize, 3usize), (2, 3, 1), (3, 1, 2)] {
            let rhs = l
                .scale(&gauss_int(2))
                .mul(&gp(&alg, &format!("x{k}")))
                .mul(&x0px3);
            t.insert(
                alg.var(&format!("x{i}")).unwrap(),
                alg.var(&format!("x{j}")).unwrap(),
                rhs,
            )
            .unwrap();
        }
        (alg, t)
    }

    #[test]
    fn canonical_bracket_example() {
        let (alg, t) = canonical();
        let b = poisson_bracket(&gp(&alg, "x1"), &gp(&alg, "p1"), &t).unwrap();
        assert_eq!(b, GradedPoly::one(&alg, 10));
        // antisymmetry of the even extension: {F,F} = 0
        let f = gp(&alg, "x1").mul(&gp(&alg, "p2")).add(&gp(&alg, "x0").pow(3));
        assert!(poisson_bracket(&f, &f, &t).unwrap().is_zero());
    }

    #[test]
    fn spinor_bracket_example() {
        let alg = Algebra::new(&[], &["u", "v"]).unwrap();
        let mut t = BracketTable::new(&alg);
        let u = gp(&alg, "u");
        let v = gp(&alg, "v");
        let l = GradedPoly::<Gauss>::var(&alg, Var::Lambda, 10);
        let iluv = l.mul(&u).mul(&v).scale(&gauss(Rat::zero(), rat(1, 1)));
        t.insert(alg.var("u").unwrap(), alg.var("v").unwrap(), iluv.clone())
            .unwrap();
        assert_eq!(poisson_bracket(&u, &v, &t).unwrap(), iluv);
        // odd-odd brackets are symmetric: {v,u} = {u,v}
        assert_eq!(poisson_bracket(&v, &u, &t).unwrap(), iluv);
        assert!(poisson_bracket(&u, &u, &t).unwrap().is_zero());
        // Leibniz through an odd product: {u, uv} = {u,u}v - u{u,v} = 0
        assert!(poisson_bracket(&u, &u.mul(&v), &t).unwrap().is_zero());
    }

    #[test]
    fn unknown_variable_rejected() {
        let (_, t) = canonical();
        let other = Algebra::new(&["y0"], &[]).unwrap();
        let y = gp(&other, "y0");
        match poisson_bracket(&y, &y, &t) {
            Err(SymError::UnknownVariable(name)) => assert_eq!(name, "y0"),
            other => panic!("expected unknown-variable rejection, got {other:?}"),
        }
    }

    #[test]
    fn jacobiator_constant_table_vanishes() {
        let (alg, t) = canonical();
        assert!(jacobiator(&gp(&alg, "x1"), &gp(&alg, "p1"), &gp(&alg, "x2"), &t)
            .unwrap()
            .is_zero());
        // any polynomial triple over a constant table
        let f = gp(&alg, "x1").mul(&gp(&alg, "p1"));
        let g = gp(&alg, "x2").pow(2).add(&gp(&alg, "p3"));
        let h = gp(&alg, "x0").mul(&gp(&alg, "p2")).mul(&gp(&alg, "p0"));
        assert!(jacobiator(&f, &g, &h, &t).unwrap().is_zero());
    }

    #[test]
    fn jacobiator_group_entries_vanishes() {
        let (alg, t) = group_hand();
        for (f, g, h) in [("a", "b", "d"), ("a", "b", "c"), ("a", "c", "d"), ("b", "c", "d")] {
            assert!(
                jacobiator(&gp(&alg, f), &gp(&alg, g), &gp(&alg, h), &t).unwrap().is_zero(),
                "jacobiator({f},{g},{h}) nonzero"
            );
        }
        // det g is central
        let det = gp(&alg, "a").mul(&gp(&alg, "d")).sub(&gp(&alg, "b").mul(&gp(&alg, "c")));
        for n in ["a", "b", "c", "d"] {
            assert!(poisson_bracket(&det, &gp(&alg, n), &t).unwrap().is_zero());
        }
    }

    #[test]
    fn jacobiator_x_sector_vanishes() {
        let (alg, t) = x_sector_hand();
        for i in 0..4usize {
            for j in (i + 1)..4 {
                for k in (j + 1)..4 {
                    let jac = jacobiator(
                        &gp(&alg, &format!("x{i}")),
                        &gp(&alg, &format!("x{j}")),
                        &gp(&alg, &format!("x{k}")),
                        &t,
                    )
                    .unwrap();
                    assert!(jac.is_zero(), "jacobiator(x{i},x{j},x{k}) = {jac}");
                }
            }
        }
    }

    #[test]
    fn bracket_of_spinor_products_matches_hand_expansion() {
        // mixed even/odd Leibniz: ψ' = gψ with zero g-ψ cross brackets
        let alg = Algebra::new(&["a", "b"], &["u", "v"]).unwrap();
        let mut t = BracketTable::new(&alg);
        let l = GradedPoly::<Gauss>::var(&alg, Var::Lambda, 10);
        let i1 = gauss(Rat::zero(), rat(1, 1));
        let u = gp(&alg, "u");
        let v = gp(&alg, "v");
        let a = gp(&alg, "a");
        let b = gp(&alg, "b");
        t.insert(alg.var("u").unwrap(), alg.var("v").unwrap(), l.mul(&u).mul(&v).scale(&i1))
            .unwrap();
        t.insert(alg.var("a").unwrap(), alg.var("b").unwrap(), l.mul(&a).mul(&b).scale(&(-i1)))
            .unwrap();
        // {au, bv} = ab{u,v} + {a,b}uv = iλab·uv − iλab·uv = 0
        let lhs = poisson_bracket(&a.mul(&u), &b.mul(&v), &t).unwrap();
        assert!(lhs.is_zero(), "got {lhs}");
        // {au, bu} = {a,b}uu + ab{u,u} = 0
        assert!(poisson_bracket(&a.mul(&u), &b.mul(&u), &t).unwrap().is_zero());
    }

    #[test]
    fn leibniz_rule_holds_on_odd_products() {
        let (alg, t) = {
            let alg = Algebra::new(&["a"], &["u", "v"]).unwrap();
            let mut t = BracketTable::new(&alg);
            let l = GradedPoly::<Gauss>::var(&alg, Var::Lambda, 10);
            let i1 = gauss(Rat::zero(), rat(1, 1));
            let uv = GradedPoly::var_named(&alg, "u", 10).unwrap()
                .mul(&GradedPoly::var_named(&alg, "v", 10).unwrap());
            t.insert(alg.var("u").unwrap(), alg.var("v").unwrap(), l.mul(&uv).scale(&i1))
                .unwrap();
            let au = GradedPoly::var_named(&alg, "a", 10).unwrap()
                .mul(&GradedPoly::var_named(&alg, "u", 10).unwrap());
            t.insert(alg.var("a").unwrap(), alg.var("v").unwrap(), au.scale(&i1)).unwrap();
            (alg, t)
        };
        // {A, BC} = {A,B}C + (−1)^{|A||B|} B{A,C} with A = v (odd), B = u (odd), C = a (even)
        let a = gp(&alg, "a");
        let u = gp(&alg, "u");
        let v = gp(&alg, "v");
        let lhs = poisson_bracket(&v, &u.mul(&a), &t).unwrap();
        let rhs = poisson_bracket(&v, &u, &t)
            .unwrap()
            .mul(&a)
            .sub(&u.mul(&poisson_bracket(&v, &a, &t).unwrap()));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn evaluation_after_bracket_matches_substitution() {
        let (alg, t) = x_sector_hand();
        let b = poisson_bracket(&gp(&alg, "x1"), &gp(&alg, "x2"), &t).unwrap();
        // {x1,x2} at x=(0,0,0,1), λ=1 → 2
        let asn = Assignment::new(&alg)
            .set_lambda(rat(1, 1))
            .set("x0", rat(0, 1)).unwrap()
            .set("x1", rat(0, 1)).unwrap()
            .set("x2", rat(0, 1)).unwrap()
            .set("x3", rat(1, 1)).unwrap();
        assert_eq!(b.eval_exact(&asn).unwrap(), gauss_int(2));
    }
}
