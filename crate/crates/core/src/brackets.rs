//! The deformed Poisson structures: spinor, group-element, vector, momentum
//! and position–momentum bracket tables, plus the 8×8 bivector at a phase
//! point.
//!
//! Component brackets are machine-generated by expanding the defining tensor
//! equations entrywise and contracting with the vector-component dictionary;
//! only the x-sector has an independently known component form, which the
//! construction checks against exactly. The sign conventions of the
//! hermitean-matrix dictionary are the single source of truth for every
//! component extraction, and the canonical λ⁰ block is required to come out
//! as η = diag(−1,1,1,1); a mismatch fails construction rather than
//! propagating a convention error.

use std::sync::Arc;

use num::complex::Complex64;
use num::{One, Zero};
use thiserror::Error;

use crate::mat::{
    build_r_matrix, fourvector_to_matrix, mat2_sqrt, FourVector, Mat2, Mat2c, Mat4c,
    MatError,
};
use crate::scalar::{gauss, gauss_int, rat, Coeff, Dyadic, Gauss, Rat};
use crate::sym::{rat_f64, Algebra, BracketTable, GradedPoly, PolyMat, SymError, Var};

#[derive(Debug, Error)]
pub enum BracketError {
    #[error("series truncation order {0} is odd; the deformation series has even structure")]
    OddSeriesOrder(u8),
    #[error("tensor expansion disagrees with the component form: {0}")]
    ConventionMismatch(String),
    #[error("component bracket {{{u},{v}}} has a non-real coefficient")]
    NonRealComponent { u: String, v: String },
    #[error("imaginary residue {imag:.3e} in numeric component (tolerance {tol:.3e})")]
    ImaginaryResidue { imag: f64, tol: f64 },
    #[error("invalid deformation context: {0}")]
    InvalidContext(String),
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error(transparent)]
    Sym(#[from] SymError),
}

/// Deformation parameter, mass and evolution-gauge multiplier.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DeformationContext {
    pub lambda: f64,
    pub mass: f64,
    pub alpha: f64,
}

impl DeformationContext {
    pub fn new(lambda: f64, mass: f64, alpha: f64) -> Result<Self, BracketError> {
        if !(lambda.is_finite() && mass.is_finite() && alpha.is_finite()) {
            return Err(BracketError::InvalidContext("non-finite parameter".into()));
        }
        if mass <= 0.0 {
            return Err(BracketError::InvalidContext(format!(
                "mass must be positive, got {mass}"
            )));
        }
        Ok(Self { lambda, mass, alpha })
    }
}

// ---------------------------------------------------------------------------
// Vector-component dictionary
// ---------------------------------------------------------------------------

/// Coefficients c^μ_{ij} with v_μ = Σ_{ij} c^μ_{ij} M_{ij} for the matrix of
/// a four-vector.
pub type Dict = [[[Gauss; 2]; 2]; 4];

fn g0() -> Gauss {
    <Gauss as num::Zero>::zero()
}

fn gh(n: i128) -> Gauss {
    gauss(rat(n, 2), Rat::zero())
}

fn gih(n: i128) -> Gauss {
    gauss(Rat::zero(), rat(n, 2))
}

/// Dictionary for the vector matrix [[−v₀−v₃, −v₁+iv₂],[−v₁−iv₂, −v₀+v₃]].
pub fn vector_dict() -> Dict {
    [
        [[gh(-1), g0()], [g0(), gh(-1)]],
        [[g0(), gh(-1)], [gh(-1), g0()]],
        [[g0(), gih(-1)], [gih(1), g0()]],
        [[gh(-1), g0()], [g0(), gh(1)]],
    ]
}

/// Dictionary for the tilded matrix [[−v₀+v₃, v₁−iv₂],[v₁+iv₂, −v₀−v₃]].
pub fn tilde_dict() -> Dict {
    [
        [[gh(-1), g0()], [g0(), gh(-1)]],
        [[g0(), gh(1)], [gh(1), g0()]],
        [[g0(), gih(1)], [gih(-1), g0()]],
        [[gh(1), g0()], [g0(), gh(-1)]],
    ]
}

/// Symbolic vector matrix with the given component names.
pub fn vector_matrix_sym(
    alg: &Arc<Algebra>,
    names: [&str; 4],
    trunc: u8,
) -> Result<PolyMat<Gauss>, SymError> {
    let v: Vec<GradedPoly<Gauss>> = names
        .iter()
        .map(|n| GradedPoly::var_named(alg, n, trunc))
        .collect::<Result<_, _>>()?;
    let i1 = gauss(Rat::zero(), Rat::one());
    let mut m = PolyMat::zero(alg, trunc, 2);
    m.set(0, 0, v[0].neg().sub(&v[3]));
    m.set(0, 1, v[1].neg().add(&v[2].scale(&i1)));
    m.set(1, 0, v[1].neg().sub(&v[2].scale(&i1)));
    m.set(1, 1, v[0].neg().add(&v[3]));
    Ok(m)
}

/// Contract a 4×4 tensor-slot matrix of brackets into vector components:
/// {v_μ, w_ν} = Σ c^μ_{ij} c^ν_{kl} RHS_{(ik),(jl)}.
pub fn extract_components(
    rhs: &PolyMat<Gauss>,
    row_dict: &Dict,
    col_dict: &Dict,
) -> Vec<Vec<GradedPoly<Gauss>>> {
    let alg = rhs.algebra();
    let trunc = rhs.trunc();
    let mut out = vec![vec![GradedPoly::zero(alg, trunc); 4]; 4];
    for (mu, row) in out.iter_mut().enumerate() {
        for (nu, comp) in row.iter_mut().enumerate() {
            for i in 0..2 {
                for j in 0..2 {
                    for k in 0..2 {
                        for l in 0..2 {
                            let c = row_dict[mu][i][j] * col_dict[nu][k][l];
                            if Coeff::is_zero(&c) {
                                continue;
                            }
                            comp.add_assign(&rhs.get(2 * i + k, 2 * j + l).scale(&c));
                        }
                    }
                }
            }
        }
    }
    out
}

pub fn poly_is_real(p: &GradedPoly<Gauss>) -> bool {
    p.terms().all(|(_, c)| c.im.is_zero())
}

// ---------------------------------------------------------------------------
// Spinor and group-element tables
// ---------------------------------------------------------------------------

/// Odd generators u, v with {u,v} = {v,u} = iλuv and vanishing squares.
pub fn spinor_table(trunc: u8) -> (Arc<Algebra>, BracketTable<Gauss>) {
    let alg = Algebra::new(&[], &["u", "v"]).unwrap();
    let mut t = BracketTable::new(&alg);
    let u = GradedPoly::<Gauss>::var_named(&alg, "u", trunc).unwrap();
    let v = GradedPoly::<Gauss>::var_named(&alg, "v", trunc).unwrap();
    let l = GradedPoly::<Gauss>::var(&alg, Var::Lambda, trunc);
    let iluv = l.mul(&u).mul(&v).scale(&gauss(Rat::zero(), Rat::one()));
    t.insert(alg.var("u").unwrap(), alg.var("v").unwrap(), iluv)
        .unwrap();
    (alg, t)
}

/// One independent family of group-element entries. `prefix` qualifies the
/// variable names (`""` → a,b,c,d; `"h"` → ha,…); `with_conjugate` adds the
/// barred entries as independent variables.
#[derive(Clone, Debug)]
pub struct GroupFamily {
    pub prefix: String,
    pub with_conjugate: bool,
}

impl GroupFamily {
    pub fn new(prefix: &str, with_conjugate: bool) -> Self {
        Self {
            prefix: prefix.to_string(),
            with_conjugate,
        }
    }

    pub fn entry_names(&self) -> [String; 4] {
        ["a", "b", "c", "d"].map(|e| format!("{}{e}", self.prefix))
    }

    pub fn bar_names(&self) -> [String; 4] {
        ["a", "b", "c", "d"].map(|e| format!("{}{e}bar", self.prefix))
    }
}

pub struct GroupTables {
    pub alg: Arc<Algebra>,
    pub table: BracketTable<Gauss>,
}

pub fn entry_matrix(
    alg: &Arc<Algebra>,
    names: &[String; 4],
    trunc: u8,
) -> Result<PolyMat<Gauss>, SymError> {
    let mut m = PolyMat::zero(alg, trunc, 2);
    m.set(0, 0, GradedPoly::var_named(alg, &names[0], trunc)?);
    m.set(0, 1, GradedPoly::var_named(alg, &names[1], trunc)?);
    m.set(1, 0, GradedPoly::var_named(alg, &names[2], trunc)?);
    m.set(1, 1, GradedPoly::var_named(alg, &names[3], trunc)?);
    Ok(m)
}

/// Insert the entry-level brackets of the given families into a table whose
/// algebra already declares the entry names, generated from the tensor
/// equations {g₁,g₂} = [r, g₁g₂], {g₁,ḡ₂} = [r, g₁ḡ₂], {ḡ₁,g₂} = [r†, ḡ₁g₂],
/// {ḡ₁,ḡ₂} = [r†, ḡ₁ḡ₂]. Distinct families keep zero mutual brackets.
pub fn insert_group_blocks(
    table: &mut BracketTable<Gauss>,
    families: &[GroupFamily],
    trunc: u8,
) -> Result<(), BracketError> {
    let alg = table.algebra().clone();
    let r = PolyMat::r_matrix(&alg, trunc, false);
    let rdag = PolyMat::r_matrix(&alg, trunc, true);
    for f in families {
        let g_names = f.entry_names();
        let g = entry_matrix(&alg, &g_names, trunc)?;
        let mut blocks: Vec<([String; 4], [String; 4], &PolyMat<Gauss>, PolyMat<Gauss>)> =
            vec![(g_names.clone(), g_names.clone(), &r, g.kron(&g))];
        if f.with_conjugate {
            let gbar_names = f.bar_names();
            let gb = entry_matrix(&alg, &gbar_names, trunc)?;
            blocks.push((g_names.clone(), gbar_names.clone(), &r, g.kron(&gb)));
            blocks.push((gbar_names.clone(), g_names.clone(), &rdag, gb.kron(&g)));
            blocks.push((gbar_names.clone(), gbar_names.clone(), &rdag, gb.kron(&gb)));
        }
        for (row_names, col_names, rmat, prod) in blocks {
            let rhs = rmat.commutator(&prod);
            for i in 0..2 {
                for j in 0..2 {
                    for k in 0..2 {
                        for l in 0..2 {
                            let u = alg.var(&row_names[2 * i + j])?;
                            let v = alg.var(&col_names[2 * k + l])?;
                            table.insert(u, v, rhs.get(2 * i + k, 2 * j + l).clone())?;
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// Variable names declared by a list of group families.
pub fn family_names(families: &[GroupFamily]) -> Vec<String> {
    let mut names: Vec<String> = Vec::new();
    for f in families {
        names.extend(f.entry_names());
        if f.with_conjugate {
            names.extend(f.bar_names());
        }
    }
    names
}

/// Standalone group-entry table over its own algebra.
pub fn group_table(families: &[GroupFamily], trunc: u8) -> Result<GroupTables, BracketError> {
    let names = family_names(families);
    let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let alg = Algebra::new(&name_refs, &[])?;
    let mut table = BracketTable::new(&alg);
    insert_group_blocks(&mut table, families, trunc)?;
    Ok(GroupTables { alg, table })
}

// ---------------------------------------------------------------------------
// Vector and momentum sectors
// ---------------------------------------------------------------------------

/// A four-component sector with machine-generated component brackets.
pub struct Sector {
    pub alg: Arc<Algebra>,
    pub names: [String; 4],
    pub table: BracketTable<Gauss>,
    /// comp[μ][ν] = {v_μ, v_ν}
    pub comp: Vec<Vec<GradedPoly<Gauss>>>,
}

pub fn sector_from_components(
    alg: &Arc<Algebra>,
    names: [&str; 4],
    comp: Vec<Vec<GradedPoly<Gauss>>>,
) -> Result<Sector, BracketError> {
    let mut table = BracketTable::new(alg);
    for mu in 0..4 {
        for nu in 0..4 {
            if !poly_is_real(&comp[mu][nu]) {
                return Err(BracketError::NonRealComponent {
                    u: names[mu].into(),
                    v: names[nu].into(),
                });
            }
            table.insert(alg.var(names[mu])?, alg.var(names[nu])?, comp[mu][nu].clone())?;
        }
    }
    Ok(Sector {
        alg: alg.clone(),
        names: names.map(|s| s.to_string()),
        table,
        comp,
    })
}

/// {x₁,x₂} components with rational weights (μ,ν) on the two-sided r-terms:
/// (μr+νr†)x₁x₂ + x₁x₂(μr†+νr) − x₂ r x₁ − x₁ r† x₂.
pub fn x_components_in(
    alg: &Arc<Algebra>,
    names: [&str; 4],
    trunc: u8,
    mu_weight: &GradedPoly<Gauss>,
    nu_weight: &GradedPoly<Gauss>,
) -> Result<Vec<Vec<GradedPoly<Gauss>>>, BracketError> {
    let x = vector_matrix_sym(alg, names, trunc)?;
    let r = PolyMat::r_matrix(alg, trunc, false);
    let rdag = PolyMat::r_matrix(alg, trunc, true);
    let id = PolyMat::identity(alg, trunc, 2);
    let x1 = x.kron(&id);
    let x2 = id.kron(&x);
    let x1x2 = x.kron(&x);
    let left = r.scale_poly(mu_weight).add(&rdag.scale_poly(nu_weight));
    let right = rdag.scale_poly(mu_weight).add(&r.scale_poly(nu_weight));
    let rhs = left
        .mul(&x1x2)
        .add(&x1x2.mul(&right))
        .sub(&x2.mul(&r).mul(&x1))
        .sub(&x1.mul(&rdag).mul(&x2));
    Ok(extract_components(&rhs, &vector_dict(), &vector_dict()))
}

/// Expected x-sector component form: {x_i,x_j} = 2λ ε_ijk x_k (x₀+x₃),
/// {x_i,x₀} = 0.
pub fn x_component_oracle(
    alg: &Arc<Algebra>,
    names: [&str; 4],
    trunc: u8,
) -> Result<Vec<Vec<GradedPoly<Gauss>>>, SymError> {
    let v: Vec<GradedPoly<Gauss>> = names
        .iter()
        .map(|n| GradedPoly::var_named(alg, n, trunc))
        .collect::<Result<_, _>>()?;
    let l = GradedPoly::<Gauss>::var(alg, Var::Lambda, trunc);
    let sum03 = v[0].add(&v[3]);
    let mut comp = vec![vec![GradedPoly::zero(alg, trunc); 4]; 4];
    for (i, j, k) in [(1usize, 2usize, 3usize), (2, 3, 1), (3, 1, 2)] {
        let rhs = l.scale(&gauss_int(2)).mul(&v[k]).mul(&sum03);
        comp[i][j] = rhs.clone();
        comp[j][i] = rhs.neg();
    }
    Ok(comp)
}

/// The x-sector table. Construction fails if the tensor expansion does not
/// reproduce the component form exactly.
pub fn x_sector(trunc: u8) -> Result<Sector, BracketError> {
    let names = ["x0", "x1", "x2", "x3"];
    let alg = Algebra::new(&names, &[])?;
    let one = GradedPoly::one(&alg, trunc);
    let zero = GradedPoly::zero(&alg, trunc);
    let comp = x_components_in(&alg, names, trunc, &one, &zero)?;
    let oracle = x_component_oracle(&alg, names, trunc)?;
    for mu in 0..4 {
        for nu in 0..4 {
            if comp[mu][nu] != oracle[mu][nu] {
                return Err(BracketError::ConventionMismatch(format!(
                    "{{{},{}}}: expansion {} vs component form {}",
                    names[mu], names[nu], comp[mu][nu], oracle[mu][nu]
                )));
            }
        }
    }
    sector_from_components(&alg, names, comp)
}

/// x-sector built from the rewritten two-parameter form with rational μ, ν
/// (the table is independent of the split whenever μ+ν = 1).
pub fn x_sector_munu(mu: Rat, nu: Rat, trunc: u8) -> Result<Sector, BracketError> {
    let names = ["x0", "x1", "x2", "x3"];
    let alg = Algebra::new(&names, &[])?;
    let muw = GradedPoly::constant(&alg, trunc, gauss(mu, Rat::zero()));
    let nuw = GradedPoly::constant(&alg, trunc, gauss(nu, Rat::zero()));
    let comp = x_components_in(&alg, names, trunc, &muw, &nuw)?;
    sector_from_components(&alg, names, comp)
}

/// Components of the two-parameter form with a *symbolic* weight μ (and
/// ν = 1 − μ); lets callers show the μ-dependence cancels identically.
pub fn x_components_munu_symbolic(trunc: u8) -> Result<Vec<Vec<GradedPoly<Gauss>>>, BracketError> {
    let alg = Algebra::new(&["mu", "x0", "x1", "x2", "x3"], &[])?;
    let muw = GradedPoly::<Gauss>::var_named(&alg, "mu", trunc)?;
    let nuw = GradedPoly::one(&alg, trunc).sub(&muw);
    x_components_in(&alg, ["x0", "x1", "x2", "x3"], trunc, &muw, &nuw)
}

/// Momentum sector from the tilded tensor equation
/// {p̃₁,p̃₂} = r p̃₁p̃₂ + p̃₁p̃₂ r† − p̃₂ r† p̃₁ − p̃₁ r p̃₂ (note the swapped
/// r, r† in the subtracted terms). The component form is an output here, not
/// an input.
pub fn p_sector(trunc: u8) -> Result<Sector, BracketError> {
    let names = ["p0", "p1", "p2", "p3"];
    let alg = Algebra::new(&names, &[])?;
    let comp = p_components_in(&alg, names, trunc)?;
    sector_from_components(&alg, names, comp)
}

pub fn p_components_in(
    alg: &Arc<Algebra>,
    names: [&str; 4],
    trunc: u8,
) -> Result<Vec<Vec<GradedPoly<Gauss>>>, BracketError> {
    let pt = vector_matrix_sym(alg, names, trunc)?.tilde2();
    let r = PolyMat::r_matrix(alg, trunc, false);
    let rdag = PolyMat::r_matrix(alg, trunc, true);
    let id = PolyMat::identity(alg, trunc, 2);
    let p1 = pt.kron(&id);
    let p2 = id.kron(&pt);
    let p1p2 = pt.kron(&pt);
    let rhs = r
        .mul(&p1p2)
        .add(&p1p2.mul(&rdag))
        .sub(&p2.mul(&rdag).mul(&p1))
        .sub(&p1.mul(&r).mul(&p2));
    Ok(extract_components(&rhs, &tilde_dict(), &tilde_dict()))
}

// ---------------------------------------------------------------------------
// Deformation series f and the position–momentum sector
// ---------------------------------------------------------------------------

/// Taylor coefficients of √(1−u): 1, −1/2, −1/8, −1/16, −5/128, …
pub fn sqrt_series_coefficient(n: u32) -> Rat {
    let mut c = Rat::one();
    for k in 1..=n as i128 {
        c *= rat(2 * k - 3, 2 * k);
    }
    c
}

/// Truncated deformation factor
/// f_N = Σ_{n≤N/2} c_n λ^{2n} M^{2n} + iλM with M = x·p̃ symbolic.
/// `n` must be even.
pub fn f_series(
    alg: &Arc<Algebra>,
    x_names: [&str; 4],
    p_names: [&str; 4],
    n: u8,
    trunc: u8,
) -> Result<PolyMat<Gauss>, BracketError> {
    if n % 2 != 0 {
        return Err(BracketError::OddSeriesOrder(n));
    }
    let x = vector_matrix_sym(alg, x_names, trunc)?;
    let pt = vector_matrix_sym(alg, p_names, trunc)?.tilde2();
    let m = x.mul(&pt);
    let m2 = m.mul(&m);
    let lam = GradedPoly::<Gauss>::var(alg, Var::Lambda, trunc);
    let lam2 = lam.mul(&lam);

    // Σ c_k (λ²M²)^k
    let mut acc = PolyMat::identity(alg, trunc, 2);
    let mut lam2k = GradedPoly::one(alg, trunc);
    let mut m2k = PolyMat::identity(alg, trunc, 2);
    for k in 1..=(n / 2) as u32 {
        lam2k = lam2k.mul(&lam2);
        m2k = m2k.mul(&m2);
        let c = gauss(sqrt_series_coefficient(k), Rat::zero());
        acc = acc.add(&m2k.scale_poly(&lam2k.scale(&c)));
    }
    // + iλM
    let ilam = lam.scale(&gauss(Rat::zero(), Rat::one()));
    Ok(acc.add(&m.scale_poly(&ilam)))
}

/// The full eight-coordinate bracket structure with f truncated at order
/// `f_order`, carried to engine truncation `trunc` in λ.
pub struct PhaseSpace {
    pub alg: Arc<Algebra>,
    pub f_order: u8,
    pub trunc: u8,
    pub table: BracketTable<Gauss>,
    /// comp[a][b] over coordinates z = (x0..x3, p0..p3)
    pub comp: Vec<Vec<GradedPoly<Gauss>>>,
}

pub const COORD_NAMES: [&str; 8] = ["x0", "x1", "x2", "x3", "p0", "p1", "p2", "p3"];

/// Builds the x-x, p-p and x-p component tables over one algebra. The x-p
/// block comes from r x₁p̃₂ + x₁p̃₂ r† − p̃₂ r x₁ − x₁ r† p̃₂ + Δ with
/// Δ = −(f₁𝒫 + 𝒫f₁†); its λ⁰ part must equal η = diag(−1,1,1,1).
pub fn phase_space(f_order: u8, trunc: u8) -> Result<PhaseSpace, BracketError> {
    let alg = Algebra::new(&COORD_NAMES, &[])?;
    let x_names = ["x0", "x1", "x2", "x3"];
    let p_names = ["p0", "p1", "p2", "p3"];
    let one = GradedPoly::one(&alg, trunc);
    let zero = GradedPoly::zero(&alg, trunc);

    let xx = x_components_in(&alg, x_names, trunc, &one, &zero)?;
    let pp = p_components_in(&alg, p_names, trunc)?;

    let x = vector_matrix_sym(&alg, x_names, trunc)?;
    let pt = vector_matrix_sym(&alg, p_names, trunc)?.tilde2();
    let id = PolyMat::identity(&alg, trunc, 2);
    let x1 = x.kron(&id);
    let pt2 = id.kron(&pt);
    let x1pt2 = x.kron(&pt);
    let r = PolyMat::r_matrix(&alg, trunc, false);
    let rdag = PolyMat::r_matrix(&alg, trunc, true);
    let perm = PolyMat::perm(&alg, trunc);

    let f = f_series(&alg, x_names, p_names, f_order, trunc)?;
    let f1 = f.kron(&id);
    let f1dag = f.dagger().kron(&id);
    let delta = f1.mul(&perm).add(&perm.mul(&f1dag)).neg();

    let rhs = r
        .mul(&x1pt2)
        .add(&x1pt2.mul(&rdag))
        .sub(&pt2.mul(&r).mul(&x1))
        .sub(&x1.mul(&rdag).mul(&pt2))
        .add(&delta);
    let xp = extract_components(&rhs, &vector_dict(), &tilde_dict());

    // canonical block: λ⁰ part of {x_μ, p_ν} is η
    let eta = [-1i128, 1, 1, 1];
    for mu in 0..4 {
        for nu in 0..4 {
            let lam0 = xp[mu][nu].lambda_coefficient(0);
            let expect = if mu == nu {
                GradedPoly::constant(&alg, trunc, gauss_int(eta[mu]))
            } else {
                GradedPoly::zero(&alg, trunc)
            };
            if lam0 != expect {
                return Err(BracketError::ConventionMismatch(format!(
                    "λ⁰ block of {{x{mu},p{nu}}} is {lam0}, expected η"
                )));
            }
        }
    }

    let mut comp = vec![vec![GradedPoly::zero(&alg, trunc); 8]; 8];
    for a in 0..4 {
        for b in 0..4 {
            comp[a][b] = xx[a][b].clone();
            comp[4 + a][4 + b] = pp[a][b].clone();
            comp[a][4 + b] = xp[a][b].clone();
            comp[4 + b][a] = xp[a][b].neg();
        }
    }
    let mut table = BracketTable::new(&alg);
    for a in 0..8 {
        for b in 0..8 {
            if !poly_is_real(&comp[a][b]) {
                return Err(BracketError::NonRealComponent {
                    u: COORD_NAMES[a].into(),
                    v: COORD_NAMES[b].into(),
                });
            }
            table.insert(alg.var(COORD_NAMES[a])?, alg.var(COORD_NAMES[b])?, comp[a][b].clone())?;
        }
    }
    Ok(PhaseSpace {
        alg,
        f_order,
        trunc,
        table,
        comp,
    })
}

impl PhaseSpace {
    /// Dyadic copy of the table for the exact Jacobi-order scan.
    pub fn dyadic_table(&self) -> Result<BracketTable<Dyadic>, SymError> {
        self.table.map_coeffs(|c| {
            Dyadic::try_from_gauss(c)
                .ok_or_else(|| SymError::NonDyadicCoefficient(crate::scalar::format_gauss(c)))
        })
    }

    pub fn coordinate(&self, a: usize) -> Var {
        self.alg.var(COORD_NAMES[a]).unwrap()
    }

    /// Values of the algebra's even variables (name-sorted) at a phase point.
    pub fn coordinate_values(&self, x: &FourVector, p: &FourVector) -> [f64; 8] {
        let mut vals = [0.0f64; 8];
        for (i, name) in self.alg.even_names().iter().enumerate() {
            let (kind, idx) = name.split_at(1);
            let idx: usize = idx.parse().unwrap();
            vals[i] = if kind == "p" { p.c[idx] } else { x.c[idx] };
        }
        vals
    }

    /// Series-mode bivector at a phase point.
    pub fn bivector(&self, x: &FourVector, p: &FourVector, lambda: f64) -> Bivector {
        let vals = self.coordinate_values(x, p);
        let mut m = [[0.0f64; 8]; 8];
        for a in 0..8 {
            for b in 0..8 {
                m[a][b] = self.comp[a][b].eval_f64(lambda, &vals).re;
            }
        }
        Bivector { m }
    }
}

// ---------------------------------------------------------------------------
// Exact deformation factor and numeric bivector
// ---------------------------------------------------------------------------

/// f = iλ xp̃ + √(1l − λ²(xp̃)²), principal branch.
pub fn f_exact(x: &FourVector, p: &FourVector, lambda: f64) -> Result<Mat2c, BracketError> {
    let m = fourvector_to_matrix(x).mul(&fourvector_to_matrix(p).tilde());
    f_exact_from_m(&m, lambda)
}

pub fn f_exact_from_m(m: &Mat2c, lambda: f64) -> Result<Mat2c, BracketError> {
    let arg = sqrt_argument(m, lambda);
    let root = mat2_sqrt(&arg)?;
    Ok(m.scale(&Complex64::new(0.0, lambda)).add(&root))
}

/// 1l − λ²M² with M = xp̃.
pub fn sqrt_argument(m: &Mat2c, lambda: f64) -> Mat2c {
    Mat2::identity().sub(&m.mul(m).scale(&Complex64::new(lambda * lambda, 0.0)))
}

/// Smallest eigenvalue magnitude of the square-root argument; the endpoint
/// guard for trajectories.
pub fn sqrt_argument_margin(x: &FourVector, p: &FourVector, lambda: f64) -> f64 {
    let m = fourvector_to_matrix(x).mul(&fourvector_to_matrix(p).tilde());
    crate::mat::eigenvalues2(&sqrt_argument(&m, lambda))
        .iter()
        .map(|e| e.norm())
        .fold(f64::INFINITY, f64::min)
}

/// True when the spectrum of λ²(xp̃)² stays inside the disc of the given
/// radius, keeping the square root away from its cut.
pub fn spectrum_in_disc(x: &FourVector, p: &FourVector, lambda: f64, radius: f64) -> bool {
    let m = fourvector_to_matrix(x).mul(&fourvector_to_matrix(p).tilde());
    crate::mat::eigenvalues2(&m)
        .iter()
        .all(|e| (lambda * e.norm()).powi(2) <= radius)
}

/// 8×8 real antisymmetric bracket matrix at a phase point,
/// {z_a, z_b} = Π_ab over z = (x₀..x₃, p₀..p₃).
#[derive(Clone, Debug, PartialEq)]
pub struct Bivector {
    pub m: [[f64; 8]; 8],
}

impl Bivector {
    pub fn antisymmetry_defect(&self) -> f64 {
        let mut d = 0.0f64;
        for a in 0..8 {
            for b in 0..8 {
                d = d.max((self.m[a][b] + self.m[b][a]).abs());
            }
        }
        d
    }

    pub fn max_abs(&self) -> f64 {
        self.m.iter().flatten().map(|v| v.abs()).fold(0.0, f64::max)
    }
}

fn dict_c64(d: &Dict) -> [[[Complex64; 2]; 2]; 4] {
    std::array::from_fn(|mu| {
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let g = &d[mu][i][j];
                Complex64::new(rat_f64(&g.re), rat_f64(&g.im))
            })
        })
    })
}

fn extract_components_numeric(
    rhs: &Mat4c,
    row_dict: &[[[Complex64; 2]; 2]; 4],
    col_dict: &[[[Complex64; 2]; 2]; 4],
    scale: f64,
) -> Result<[[f64; 4]; 4], BracketError> {
    let mut out = [[0.0f64; 4]; 4];
    for mu in 0..4 {
        for nu in 0..4 {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..2 {
                for j in 0..2 {
                    for k in 0..2 {
                        for l in 0..2 {
                            acc +=
                                row_dict[mu][i][j] * col_dict[nu][k][l] * rhs.e[2 * i + k][2 * j + l];
                        }
                    }
                }
            }
            let tol = 1e-12 * scale.max(1.0);
            if acc.im.abs() > tol {
                return Err(BracketError::ImaginaryResidue {
                    imag: acc.im.abs(),
                    tol,
                });
            }
            out[mu][nu] = acc.re;
        }
    }
    Ok(out)
}

/// Bivector with the exact (non-polynomial) deformation factor, assembled
/// entirely from numeric tensor contractions.
pub fn bivector_exact(
    x: &FourVector,
    p: &FourVector,
    lambda: f64,
) -> Result<Bivector, BracketError> {
    let xm = fourvector_to_matrix(x);
    let ptm = fourvector_to_matrix(p).tilde();
    let id = Mat2c::identity();
    let r = build_r_matrix(lambda);
    let rdag = r.dagger();
    let perm = Mat4c::perm();

    let scale = crate::mat::max_abs2(&xm).max(crate::mat::max_abs2(&ptm)).max(1.0);
    let scale = scale * scale * (1.0 + lambda.abs());

    let x1 = xm.kron(&id);
    let x2 = id.kron(&xm);
    let pt1 = ptm.kron(&id);
    let pt2 = id.kron(&ptm);

    let xx_rhs = r
        .mul(&xm.kron(&xm))
        .add(&xm.kron(&xm).mul(&rdag))
        .sub(&x2.mul(&r).mul(&x1))
        .sub(&x1.mul(&rdag).mul(&x2));
    let pp_rhs = r
        .mul(&ptm.kron(&ptm))
        .add(&ptm.kron(&ptm).mul(&rdag))
        .sub(&pt2.mul(&rdag).mul(&pt1))
        .sub(&pt1.mul(&r).mul(&pt2));

    let f = f_exact_from_m(&xm.mul(&ptm), lambda)?;
    let f1 = f.kron(&id);
    let f1dag = f.dagger().kron(&id);
    let delta = f1
        .mul(&perm)
        .add(&perm.mul(&f1dag))
        .scale(&Complex64::new(-1.0, 0.0));
    let xp_rhs = r
        .mul(&xm.kron(&ptm))
        .add(&xm.kron(&ptm).mul(&rdag))
        .sub(&pt2.mul(&r).mul(&x1))
        .sub(&x1.mul(&rdag).mul(&pt2))
        .add(&delta);

    let vd = dict_c64(&vector_dict());
    let td = dict_c64(&tilde_dict());
    let xx = extract_components_numeric(&xx_rhs, &vd, &vd, scale)?;
    let pp = extract_components_numeric(&pp_rhs, &td, &td, scale)?;
    let xp = extract_components_numeric(&xp_rhs, &vd, &td, scale)?;

    let mut m = [[0.0f64; 8]; 8];
    for a in 0..4 {
        for b in 0..4 {
            m[a][b] = xx[a][b];
            m[4 + a][4 + b] = pp[a][b];
            m[a][4 + b] = xp[a][b];
            m[4 + b][a] = -xp[a][b];
        }
    }
    Ok(Bivector { m })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::trial_rng;
    use crate::sym::{jacobiator, poisson_bracket, Assignment};
    use rand::Rng;

    fn gp(alg: &Arc<Algebra>, name: &str, trunc: u8) -> GradedPoly<Gauss> {
        GradedPoly::var_named(alg, name, trunc).unwrap()
    }

    #[test]
    fn dictionary_inverts_vector_matrix() {
        let alg = Algebra::new(&["v0", "v1", "v2", "v3"], &[]).unwrap();
        let names = ["v0", "v1", "v2", "v3"];
        let m = vector_matrix_sym(&alg, names, 4).unwrap();
        let t = m.tilde2();
        let vd = vector_dict();
        let td = tilde_dict();
        for mu in 0..4 {
            let mut from_m = GradedPoly::zero(&alg, 4);
            let mut from_t = GradedPoly::zero(&alg, 4);
            for i in 0..2 {
                for j in 0..2 {
                    from_m.add_assign(&m.get(i, j).scale(&vd[mu][i][j]));
                    from_t.add_assign(&t.get(i, j).scale(&td[mu][i][j]));
                }
            }
            assert_eq!(from_m, gp(&alg, names[mu], 4), "vector dict row {mu}");
            assert_eq!(from_t, gp(&alg, names[mu], 4), "tilde dict row {mu}");
        }
    }

    #[test]
    fn group_table_reproduces_quadratic_relations() {
        let gt = group_table(&[GroupFamily::new("", false)], 6).unwrap();
        let alg = &gt.alg;
        let l = GradedPoly::<Gauss>::var(alg, Var::Lambda, 6);
        let mi = gauss(Rat::zero(), rat(-1, 1));
        let prod = |u: &str, v: &str| gp(alg, u, 6).mul(&gp(alg, v, 6));
        let expect = [
            (("a", "b"), prod("a", "b").scale(&mi)),
            (("a", "c"), prod("a", "c").scale(&mi)),
            (("b", "d"), prod("b", "d").scale(&mi)),
            (("c", "d"), prod("c", "d").scale(&mi)),
            (("b", "c"), GradedPoly::zero(alg, 6)),
            (("a", "d"), prod("b", "c").scale(&(mi * gauss_int(2)))),
        ];
        for ((u, v), rhs) in expect {
            let got = poisson_bracket(&gp(alg, u, 6), &gp(alg, v, 6), &gt.table).unwrap();
            assert_eq!(got, l.mul(&rhs), "{{{u},{v}}}");
        }
        // det g is a Casimir
        let det = prod("a", "d").sub(&prod("b", "c"));
        for n in ["a", "b", "c", "d"] {
            assert!(poisson_bracket(&det, &gp(alg, n, 6), &gt.table).unwrap().is_zero());
        }
    }

    #[test]
    fn spinor_table_relations() {
        let (alg, table) = spinor_table(6);
        let u = gp(&alg, "u", 6);
        let v = gp(&alg, "v", 6);
        let l = GradedPoly::<Gauss>::var(&alg, Var::Lambda, 6);
        let iluv = l.mul(&u).mul(&v).scale(&gauss(Rat::zero(), Rat::one()));
        let uv = poisson_bracket(&u, &v, &table).unwrap();
        assert_eq!(uv, iluv);
        assert_eq!(poisson_bracket(&v, &u, &table).unwrap(), iluv);
        assert!(poisson_bracket(&u, &u, &table).unwrap().is_zero());
        assert!(poisson_bracket(&v, &v, &table).unwrap().is_zero());
        // the canonical limit: substituting λ = 0 kills every bracket
        let at_zero = Assignment::new(&alg).set_lambda(Rat::zero());
        assert!(uv.substitute_evens(&at_zero).unwrap().is_zero());
    }

    #[test]
    fn det_g_survives_in_mixed_table() {
        let gt = group_table(&[GroupFamily::new("", true)], 6).unwrap();
        let alg = &gt.alg;
        let det = gp(alg, "a", 6)
            .mul(&gp(alg, "d", 6))
            .sub(&gp(alg, "b", 6).mul(&gp(alg, "c", 6)));
        for n in ["a", "b", "c", "d", "abar", "bbar", "cbar", "dbar"] {
            assert!(
                poisson_bracket(&det, &gp(alg, n, 6), &gt.table).unwrap().is_zero(),
                "det g fails to commute with {n}"
            );
        }
    }

    #[test]
    fn x_sector_matches_component_form() {
        // construction itself cross-checks; spot-check an entry and a value
        let xs = x_sector(6).unwrap();
        let b = poisson_bracket(&gp(&xs.alg, "x1", 6), &gp(&xs.alg, "x2", 6), &xs.table).unwrap();
        let asn = Assignment::new(&xs.alg)
            .set_lambda(Rat::one())
            .set("x0", rat(0, 1)).unwrap()
            .set("x1", rat(0, 1)).unwrap()
            .set("x2", rat(0, 1)).unwrap()
            .set("x3", rat(1, 1)).unwrap();
        assert_eq!(b.eval_exact(&asn).unwrap(), gauss_int(2));
        // the time component is central
        for j in 1..4 {
            assert!(xs.comp[j][0].is_zero() && xs.comp[0][j].is_zero());
        }
    }

    #[test]
    fn p_sector_component_form_mirrors_x_sector() {
        // {p_i,p_j} = 2λ ε_ijk p_k (p₀+p₃): the tilded transformation leaves
        // the component form invariant
        let ps = p_sector(6).unwrap();
        let oracle = x_component_oracle(&ps.alg, ["p0", "p1", "p2", "p3"], 6).unwrap();
        for mu in 0..4 {
            for nu in 0..4 {
                assert_eq!(
                    ps.comp[mu][nu], oracle[mu][nu],
                    "{{p{mu},p{nu}}} = {} differs from the x-sector pattern {}",
                    ps.comp[mu][nu], oracle[mu][nu]
                );
            }
        }
        // vanishing at λ = 0 and Jacobi for all momentum triples
        for mu in 0..4 {
            for nu in 0..4 {
                assert!(ps.comp[mu][nu].lambda_coefficient(0).is_zero());
            }
        }
        for i in 0..4usize {
            for j in (i + 1)..4 {
                for k in (j + 1)..4 {
                    let jac = jacobiator(
                        &gp(&ps.alg, &format!("p{i}"), 6),
                        &gp(&ps.alg, &format!("p{j}"), 6),
                        &gp(&ps.alg, &format!("p{k}"), 6),
                        &ps.table,
                    )
                    .unwrap();
                    assert!(jac.is_zero());
                }
            }
        }
    }

    #[test]
    fn sqrt_series_coefficients() {
        assert_eq!(sqrt_series_coefficient(0), Rat::one());
        assert_eq!(sqrt_series_coefficient(1), rat(-1, 2));
        assert_eq!(sqrt_series_coefficient(2), rat(-1, 8));
        assert_eq!(sqrt_series_coefficient(3), rat(-1, 16));
        assert_eq!(sqrt_series_coefficient(4), rat(-5, 128));
        // numeric cross-check against the closed form √(1−u)
        let u = 0.1f64;
        let mut acc = 0.0;
        for n in 0..12u32 {
            acc += rat_f64(&sqrt_series_coefficient(n)) * u.powi(n as i32);
        }
        assert!((acc - (1.0 - u).sqrt()).abs() < 1e-13);
    }

    #[test]
    fn f_series_examples() {
        let alg = Algebra::new(&COORD_NAMES, &[]).unwrap();
        let xn = ["x0", "x1", "x2", "x3"];
        let pn = ["p0", "p1", "p2", "p3"];
        // N=0 is the identity (canonical limit) plus the iλM term
        let f0 = f_series(&alg, xn, pn, 0, 8).unwrap();
        let x = vector_matrix_sym(&alg, xn, 8).unwrap();
        let pt = vector_matrix_sym(&alg, pn, 8).unwrap().tilde2();
        let m = x.mul(&pt);
        let lam = GradedPoly::<Gauss>::var(&alg, Var::Lambda, 8);
        let il = lam.scale(&gauss(Rat::zero(), Rat::one()));
        let id = PolyMat::identity(&alg, 8, 2);
        assert_eq!(f0, id.add(&m.scale_poly(&il)));

        // N=6 matches the explicit low-order expansion
        let f6 = f_series(&alg, xn, pn, 6, 8).unwrap();
        let m2 = m.mul(&m);
        let m4 = m2.mul(&m2);
        let m6 = m4.mul(&m2);
        let l2 = lam.mul(&lam);
        let l4 = l2.mul(&l2);
        let l6 = l4.mul(&l2);
        let expect = id
            .add(&m.scale_poly(&il))
            .add(&m2.scale_poly(&l2.scale(&gauss(rat(-1, 2), Rat::zero()))))
            .add(&m4.scale_poly(&l4.scale(&gauss(rat(-1, 8), Rat::zero()))))
            .add(&m6.scale_poly(&l6.scale(&gauss(rat(-1, 16), Rat::zero()))));
        assert_eq!(f6, expect);

        // N=8 brings in the λ⁸M⁸ coefficient −5/128
        let f8 = f_series(&alg, xn, pn, 8, 8).unwrap();
        let diff = f8.sub(&f6);
        let m8 = m4.mul(&m4);
        let l8 = l6.mul(&l2);
        assert_eq!(diff, m8.scale_poly(&l8.scale(&gauss(rat(-5, 128), Rat::zero()))));

        // odd order rejected
        assert!(matches!(
            f_series(&alg, xn, pn, 3, 8),
            Err(BracketError::OddSeriesOrder(3))
        ));
    }

    #[test]
    fn phase_space_canonical_block() {
        let ps = phase_space(0, 4).unwrap();
        // λ⁰ of {x0,p0} = −1, {x1,p1} = +1 (η signature)
        assert_eq!(
            ps.comp[0][4].lambda_coefficient(0),
            GradedPoly::constant(&ps.alg, 4, gauss_int(-1))
        );
        assert_eq!(
            ps.comp[1][5].lambda_coefficient(0),
            GradedPoly::constant(&ps.alg, 4, gauss_int(1))
        );
        // at λ=0 the full table collapses to the canonical one
        for a in 0..8 {
            for b in 0..8 {
                let c0 = ps.comp[a][b].lambda_coefficient(0);
                if (a < 4) == (b < 4) {
                    assert!(c0.is_zero());
                }
            }
        }
    }

    #[test]
    fn f_exact_examples() {
        // x = 0 → f = 1l
        let f = f_exact(&FourVector::zero(), &FourVector::new(1.0, 0.2, 0.0, 0.0), 0.3).unwrap();
        assert!(crate::mat::max_abs2(&f.sub(&Mat2::identity())) < 1e-14);
        // λ = 0 → 1l
        let f = f_exact(
            &FourVector::new(0.5, 0.1, -0.3, 0.2),
            &FourVector::new(1.0, 0.2, 0.0, 0.4),
            0.0,
        )
        .unwrap();
        assert!(crate::mat::max_abs2(&f.sub(&Mat2::identity())) < 1e-14);
        // xp̃ = 1l at λ = 0.6: f = (0.8 + 0.6i)·1l
        let x = FourVector::new(-1.0, 0.0, 0.0, 0.0);
        let p = FourVector::new(-1.0, 0.0, 0.0, 0.0);
        let m = fourvector_to_matrix(&x).mul(&fourvector_to_matrix(&p).tilde());
        assert!(crate::mat::max_abs2(&m.sub(&Mat2::identity())) < 1e-15);
        let f = f_exact(&x, &p, 0.6).unwrap();
        let expect = Mat2::identity().scale(&Complex64::new(0.8, 0.6));
        assert!(crate::mat::max_abs2(&f.sub(&expect)) < 1e-14);
    }

    #[test]
    fn f_exact_agrees_with_series_for_small_lambda() {
        let x = FourVector::new(0.4, -0.2, 0.3, 0.1);
        let p = FourVector::new(1.1, 0.3, -0.2, 0.5);
        let alg = Algebra::new(&COORD_NAMES, &[]).unwrap();
        let f6 = f_series(&alg, ["x0", "x1", "x2", "x3"], ["p0", "p1", "p2", "p3"], 6, 8).unwrap();
        let ps = phase_space(6, 8).unwrap();
        let vals = ps.coordinate_values(&x, &p);
        for &lambda in &[0.05f64, 0.025] {
            let fe = f_exact(&x, &p, lambda).unwrap();
            let mut dmax: f64 = 0.0;
            for i in 0..2 {
                for j in 0..2 {
                    let s = f6.get(i, j).eval_f64(lambda, &vals);
                    dmax = dmax.max((fe.e[i][j] - s).norm());
                }
            }
            // agreement to O(λ⁸)
            assert!(dmax < lambda.powi(8) * 100.0, "λ={lambda}: {dmax:.3e}");
        }
    }

    #[test]
    fn bivector_canonical_at_lambda_zero() {
        let ps = phase_space(0, 4).unwrap();
        let x = FourVector::new(0.3, -0.7, 0.4, 0.9);
        let p = FourVector::new(1.2, 0.1, -0.5, 0.3);
        let eta = [-1.0f64, 1.0, 1.0, 1.0];
        for bv in [ps.bivector(&x, &p, 0.0), bivector_exact(&x, &p, 0.0).unwrap()] {
            for a in 0..8 {
                for b in 0..8 {
                    let expect = if a < 4 && b == a + 4 {
                        eta[a]
                    } else if a >= 4 && b == a - 4 {
                        -eta[b]
                    } else {
                        0.0
                    };
                    assert_eq!(bv.m[a][b], expect, "Π[{a}][{b}]");
                }
            }
        }
    }

    #[test]
    fn bivector_xx_block_matches_component_formula() {
        let ps = phase_space(6, 8).unwrap();
        let mut rng = trial_rng(5, 0);
        let mut done = 0;
        while done < 100 {
            let x = FourVector::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            let p = FourVector::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            let lambda = rng.gen_range(-0.5..0.5);
            if !spectrum_in_disc(&x, &p, lambda, 0.9) {
                continue;
            }
            done += 1;
            let bv = bivector_exact(&x, &p, lambda).unwrap();
            // {x1,x2} = 2λ x3 (x0+x3)
            let expect = 2.0 * lambda * x.c[3] * (x.c[0] + x.c[3]);
            assert!((bv.m[1][2] - expect).abs() < 1e-12);
            assert!(bv.m[1][0].abs() < 1e-12);
            assert!(bv.antisymmetry_defect() < 1e-12);
            // series mode agrees on the polynomial blocks
            let bs = ps.bivector(&x, &p, lambda);
            for a in 0..4 {
                for b in 0..4 {
                    assert!((bs.m[a][b] - bv.m[a][b]).abs() < 1e-12);
                    assert!((bs.m[4 + a][4 + b] - bv.m[4 + a][4 + b]).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn bivector_series_approaches_exact_at_high_order() {
        // ‖Π_series-8 − Π_exact‖ = O(λ^10)
        let ps8 = phase_space(8, 10).unwrap();
        let x = FourVector::new(0.4, -0.2, 0.3, 0.1);
        let p = FourVector::new(1.1, 0.3, -0.2, 0.5);
        let dev = |lambda: f64| {
            let a = ps8.bivector(&x, &p, lambda);
            let b = bivector_exact(&x, &p, lambda).unwrap();
            let mut d: f64 = 0.0;
            for i in 0..8 {
                for j in 0..8 {
                    d = d.max((a.m[i][j] - b.m[i][j]).abs());
                }
            }
            d
        };
        let d1 = dev(0.2);
        let d2 = dev(0.1);
        let ratio = d1 / d2;
        assert!(
            (500.0..2000.0).contains(&ratio),
            "deviation ratio {ratio} not ≈ 2^10"
        );
    }

    #[test]
    fn munu_tables_identical() {
        let base = x_sector(6).unwrap();
        for (mu, nu) in [(rat(1, 1), rat(0, 1)), (rat(2, 1), rat(-1, 1)), (rat(1, 2), rat(1, 2))] {
            let s = x_sector_munu(mu, nu, 6).unwrap();
            for a in 0..4 {
                for b in 0..4 {
                    assert_eq!(s.comp[a][b], base.comp[a][b], "(μ,ν)=({mu},{nu})");
                }
            }
        }
        // symbolic μ: the μ-dependence cancels identically
        let sym = x_components_munu_symbolic(6).unwrap();
        let alg5 = sym[1][2].algebra().clone();
        let mu_idx = match alg5.var("mu").unwrap() {
            Var::Even(i) => i,
            _ => unreachable!(),
        };
        let oracle = x_component_oracle(&alg5, ["x0", "x1", "x2", "x3"], 6).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                assert!(sym[a][b].deriv_even(mu_idx).is_zero(), "μ-dependence in ({a},{b})");
                assert_eq!(sym[a][b], oracle[a][b]);
            }
        }
    }

    #[test]
    fn deformation_context_validation() {
        assert!(DeformationContext::new(0.1, 1.0, 1.0).is_ok());
        assert!(DeformationContext::new(0.1, -1.0, 1.0).is_err());
        assert!(DeformationContext::new(f64::NAN, 1.0, 1.0).is_err());
    }
}
