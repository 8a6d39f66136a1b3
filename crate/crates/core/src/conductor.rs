//! Conductor ideal of the apparent contour and the pair `(G0, G1)`.
//!
//! Two realizations share the generator formulas:
//!
//! * a global one on [`Ideal`]s (candidate ideals, localization by adding a
//!   power of the cluster radical, intersection), usable on small inputs;
//! * a local one used by the pipeline: each contribution is expanded at a
//!   generic point of its cluster over the field `Q[t]/r(t)`, and membership
//!   of a form in the localized ideal becomes a set of rational linear
//!   conditions on its coefficients.

use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::contour::{Analysis, ClusterKind, ContourInput, GuessVector, NodeOnCeVariant, SpecialPointCluster};
use crate::forward::absolute_form;
use crate::ideals::{Ideal, IdealError};
use crate::linalg::{kernel_q, primitive_integer_row};
use crate::nf::{Nf, NumberField};
use crate::poly::{count_monomials, monomials_of_degree, Monomial, Poly, Vars};
use crate::scalar::{Rational, Scalar};
use crate::QPoly;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConductorError {
    #[error("degree-6 piece of the conductor has dimension {0}, expected 1")]
    AssertG0Failed(usize),
    #[error("degree-7 piece of the conductor has dimension {0}, expected 4")]
    AssertG1Failed(usize),
    #[error("localization at cluster {cluster} did not stabilize below order {bound}")]
    NotStabilized { cluster: usize, bound: usize },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Ideal(#[from] IdealError),
}

pub const NODAL_TANGENTIAL_LAMBDA: i64 = -4;
pub const CUSPIDAL_TANGENTIAL_LAMBDA: i64 = -9;

// ---------------------------------------------------------------------------
// Generator formulas, generic in the coefficient field and the variables.
// ---------------------------------------------------------------------------

/// `F*G` and `d_v(F)*G + lambda*F*d_v(G)` for each variable `v`.
pub fn mixed_derivative_gens<C: Scalar>(f: &Poly<C>, g: &Poly<C>, lambda: &C) -> Vec<Poly<C>> {
    let mut out = vec![f * g];
    for v in 0..f.nvars() {
        out.push(&(&f.partial(v) * g) + &(f * &g.partial(v)).scale(lambda));
    }
    out
}

fn jac<C: Scalar>(p: &Poly<C>, q: &Poly<C>, u: usize, v: usize) -> Poly<C> {
    &(&p.partial(u) * &q.partial(v)) - &(&p.partial(v) * &q.partial(u))
}

/// Generators of the mixed jacobian ideal with respect to the ideal generated by `k`.
pub fn mixed_jacobian_gens<C: Scalar>(f: &Poly<C>, g: &Poly<C>, lambda: &C, k: &[Poly<C>]) -> Vec<Poly<C>> {
    let n = f.nvars();
    let fg = f * g;
    let mut out = Vec::new();
    for h in k {
        for v in 0..n {
            let d = h.partial(v);
            if !d.is_zero() {
                out.push(&fg * &d);
            }
        }
    }
    let md = mixed_derivative_gens(f, g, lambda);
    for h in k {
        for m in &md {
            out.push(h * m);
        }
    }
    for h in k {
        for u in 0..n {
            for v in u + 1..n {
                out.push(&(&jac(f, h, u, v) * g) + &(f * &jac(g, h, u, v)).scale(lambda));
            }
        }
    }
    out.retain(|p| !p.is_zero());
    out
}

// ---------------------------------------------------------------------------
// Global realization.
// ---------------------------------------------------------------------------

pub fn maximal_ideal_contribution(cluster: &SpecialPointCluster) -> Result<Ideal, ConductorError> {
    if !cluster.kind.is_isolated_candidate() && cluster.kind != ClusterKind::NodeOnCE {
        return Err(ConductorError::Invalid(format!("cluster {} of kind {} has no maximal-ideal contribution", cluster.id, cluster.kind)));
    }
    Ok(cluster.radical_ideal().clone())
}

/// `<U1, A^k>`.
pub fn cross_contribution(input: &ContourInput) -> Ideal {
    let a = absolute_form(input.u1.vars());
    Ideal::new(input.u1.vars(), vec![input.u1.clone(), a.pow(input.k)])
}

pub fn mixed_derivative_ideal(f: &QPoly, g: &QPoly, lambda: &Rational) -> Result<Ideal, ConductorError> {
    if lambda.is_zero() {
        return Err(ConductorError::Invalid("lambda must be nonzero".into()));
    }
    Ok(Ideal::new(f.vars(), mixed_derivative_gens(f, g, lambda)))
}

pub fn mixed_jacobian_ideal(f: &QPoly, g: &QPoly, lambda: &Rational, k: &Ideal) -> Result<Ideal, ConductorError> {
    if lambda.is_zero() {
        return Err(ConductorError::Invalid("lambda must be nonzero".into()));
    }
    if k.is_zero() {
        return Err(ConductorError::Invalid("K must be nonzero".into()));
    }
    Ok(Ideal::new(f.vars(), mixed_jacobian_gens(f, g, lambda, k.generators())))
}

fn hilbert_values(i: &Ideal, top: u32) -> Result<Vec<usize>, ConductorError> {
    (0..=top).map(|d| i.quotient_dimension(d).map_err(Into::into)).collect()
}

/// `candidate + radical^N` for the first `N` after which adding a higher
/// power changes no Hilbert function value up to `degree_cap` or beyond the
/// degrees of the Gröbner basis.
pub fn localize(candidate: &Ideal, cluster: &SpecialPointCluster, degree_cap: u32) -> Result<Ideal, ConductorError> {
    if degree_cap < 7 {
        return Err(ConductorError::Invalid("degree cap must be at least 7".into()));
    }
    let rad = cluster.radical_ideal();
    let bound = degree_cap as usize + 2;
    let mut power = rad.clone();
    let mut current = candidate.sum(&power)?;
    for _ in 1..bound {
        power = power.product(rad)?;
        let next = candidate.sum(&power)?;
        let top = next.groebner().iter().filter_map(|g| g.total_degree()).max().unwrap_or(0).max(degree_cap) + 1;
        if hilbert_values(&current, top)? == hilbert_values(&next, top)? {
            return Ok(current);
        }
        current = next;
    }
    Err(ConductorError::NotStabilized { cluster: cluster.id, bound })
}

/// Intersect the localized ideals and extract `(G0, G1)`.
pub fn assemble_ideals(localized: &[Ideal]) -> Result<ConductorPair, ConductorError> {
    let xyz = Vars::xyz();
    let mut c = Ideal::unit(&xyz);
    for i in localized {
        c = c.intersect(i)?;
    }
    let c6 = c.graded_piece(6)?;
    let c7 = c.graded_piece(7)?;
    ConductorPair::from_pieces(c6, c7)
}

// ---------------------------------------------------------------------------
// Local realization.
// ---------------------------------------------------------------------------

/// Local conductor formula applied at a cluster.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum LocalFormula {
    /// Vanishing at the point.
    Maximal,
    /// `<U1, A^k>`.
    Cross,
    /// Mixed derivative ideal with `lambda = -4`.
    NodalTangential,
    /// Mixed jacobian ideal with `lambda = -9` and the squared maximal ideal.
    CuspidalTangential,
    /// Maximal ideal times `<U1, A^k>`.
    CrossTimesMaximal,
}

/// Rational linear conditions cutting out the forms of one degree that lie
/// in a localized contribution.
#[derive(Debug, Clone)]
pub struct Contribution {
    pub cluster: usize,
    pub formula: LocalFormula,
    /// Colength of the local ideal at each point of the cluster.
    pub colength: usize,
    /// Truncation order at which the local ideal stabilized.
    pub order: usize,
    /// Condition rows per requested degree, over `monomials_of_degree(3, d)`.
    pub conditions: Vec<(u32, Vec<Vec<Rational>>)>,
}

/// Monomials `X^i Y^j` with `i + j < n`, indexed degree by degree.
fn index(i: usize, j: usize) -> usize {
    let d = i + j;
    d * (d + 1) / 2 + j
}

fn width(n: usize) -> usize {
    n * (n + 1) / 2
}

fn series(p: &Poly<Nf>, n: usize) -> Vec<Nf> {
    let mut v = vec![Nf::zero(); width(n)];
    for (m, c) in p.terms() {
        let (i, j) = (m.exp(0) as usize, m.exp(1) as usize);
        if i + j < n {
            v[index(i, j)] = c.clone();
        }
    }
    v
}

fn shifted(v: &[Nf], a: usize, b: usize, n: usize) -> Vec<Nf> {
    let mut out = vec![Nf::zero(); width(n)];
    for d in 0..n {
        for j in 0..=d {
            let i = d - j;
            if d + a + b < n && !v[index(i, j)].is_zero() {
                out[index(i + a, j + b)] = v[index(i, j)].clone();
            }
        }
    }
    out
}

/// Reduced row echelon basis built incrementally.
struct Echelon {
    rows: Vec<(usize, Vec<Nf>)>,
}

impl Echelon {
    fn new() -> Self {
        Echelon { rows: Vec::new() }
    }

    fn reduce(&self, mut v: Vec<Nf>) -> Vec<Nf> {
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    x.sub_mul_assign(&f, r);
                }
            }
        }
        v
    }

    fn insert(&mut self, v: Vec<Nf>) {
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else { return };
        let inv = v[p].inv();
        for x in v.iter_mut() {
            if !x.is_zero() {
                *x = x.mul_ref(&inv);
            }
        }
        for (_, row) in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (x, r) in row.iter_mut().zip(&v) {
                if !r.is_zero() {
                    x.sub_mul_assign(&f, r);
                }
            }
        }
        self.rows.push((p, v));
    }

    fn is_pivot(&self, c: usize) -> bool {
        self.rows.iter().any(|(p, _)| *p == c)
    }
}

/// Chart `z = 1` polynomials `f = U1` and `g = A` moved to the cluster point.
struct LocalData {
    field: Arc<NumberField>,
    x0: Nf,
    y0: Nf,
    f: Poly<Nf>,
    g: Poly<Nf>,
}

fn local_data(input: &ContourInput, cluster: &SpecialPointCluster) -> LocalData {
    let field = cluster.field().clone();
    let (x0, y0) = cluster.point();
    let xy = Vars::new(&["X", "Y"]);
    let shift = |p: &QPoly| -> Poly<Nf> {
        let chart = p.eval_var(2, &Rational::one());
        let lifted: Poly<Nf> = chart.map_coeffs(|q| Nf::from_rational(&field, q.clone()));
        let lifted = lifted.remap(&Vars::new(&["X", "Y", "Z"]), &[0, 1, 2]);
        let images = [
            &Poly::var(&xy, 0) + &Poly::constant(&xy, x0.clone()),
            &Poly::var(&xy, 1) + &Poly::constant(&xy, y0.clone()),
            Poly::one(&xy),
        ];
        lifted.compose(&images)
    };
    let f = shift(&input.u1);
    let g = shift(&absolute_form(&Vars::xyz()));
    LocalData { field, x0, y0, f, g }
}

fn local_generators(formula: LocalFormula, data: &LocalData, k: u32) -> Vec<Poly<Nf>> {
    let xy = data.f.vars().clone();
    let (f, g) = (&data.f, &data.g);
    let x = Poly::var(&xy, 0);
    let y = Poly::var(&xy, 1);
    match formula {
        LocalFormula::Maximal => vec![x, y],
        LocalFormula::Cross => vec![f.clone(), g.pow(k)],
        LocalFormula::CrossTimesMaximal => {
            let gk = g.pow(k);
            vec![f * &x, f * &y, &gk * &x, &gk * &y]
        }
        LocalFormula::NodalTangential => mixed_derivative_gens(f, g, &Nf::from_i64(NODAL_TANGENTIAL_LAMBDA)),
        LocalFormula::CuspidalTangential => {
            let k2 = vec![x.pow(2), &x * &y, y.pow(2)];
            mixed_jacobian_gens(f, g, &Nf::from_i64(CUSPIDAL_TANGENTIAL_LAMBDA), &k2)
        }
    }
}

/// Largest truncation order tried before giving up.
pub const MAX_LOCAL_ORDER: usize = 24;

fn stabilized(gens: &[Poly<Nf>], start: usize, cluster: usize) -> Result<(usize, Echelon), ConductorError> {
    let mut n = start.max(2);
    loop {
        let base: Vec<Vec<Nf>> = gens.iter().map(|g| series(g, n)).collect();
        let mut ech = Echelon::new();
        for d in 0..n {
            for b in 0..=d {
                for v in &base {
                    let s = shifted(v, d - b, b, n);
                    if s.iter().any(|x| !x.is_zero()) {
                        ech.insert(s);
                    }
                }
            }
            if ech.rows.len() == width(n) {
                break;
            }
        }
        if (0..n).all(|j| ech.is_pivot(index(n - 1 - j, j))) {
            return Ok((n, ech));
        }
        n += 2;
        if n > MAX_LOCAL_ORDER {
            return Err(ConductorError::NotStabilized { cluster, bound: MAX_LOCAL_ORDER });
        }
    }
}

/// Truncated expansion of `x^a y^b` at the point.
fn monomial_series(m: &Monomial, xpow: &[Vec<Nf>], ypow: &[Vec<Nf>], n: usize) -> Vec<Nf> {
    let (a, b) = (m.exp(0) as usize, m.exp(1) as usize);
    let mut out = vec![Nf::zero(); width(n)];
    for i in 0..=a.min(n - 1) {
        for j in 0..=b.min(n - 1 - i) {
            out[index(i, j)] = xpow[a][i].mul_ref(&ypow[b][j]);
        }
    }
    out
}

/// Coefficients of `(c + X)^e`, `e <= top`, as rows `[X^0, X^1, ...]`.
fn binomial_rows(c: &Nf, top: usize) -> Vec<Vec<Nf>> {
    let mut rows = vec![vec![Nf::one()]];
    for e in 1..=top {
        let prev = &rows[e - 1];
        let mut row = vec![Nf::zero(); e + 1];
        for (i, v) in prev.iter().enumerate() {
            row[i] += v.mul_ref(c);
            row[i + 1] += v.clone();
        }
        rows.push(row);
    }
    rows
}

/// Conditions of one contribution for forms of the given degrees.
pub fn local_contribution(input: &ContourInput, cluster: &SpecialPointCluster, formula: LocalFormula, degrees: &[u32]) -> Result<Contribution, ConductorError> {
    let data = local_data(input, cluster);
    let s = data.field.degree();
    let top = degrees.iter().copied().max().unwrap_or(0) as usize;
    let xpow = binomial_rows(&data.x0, top);
    let ypow = binomial_rows(&data.y0, top);
    let (n, ech) = match formula {
        LocalFormula::Maximal => {
            let mut e = Echelon::new();
            for c in 1..width(2) {
                let mut v = vec![Nf::zero(); width(2)];
                v[c] = Nf::one();
                e.insert(v);
            }
            (2, e)
        }
        _ => {
            let gens = local_generators(formula, &data, input.k);
            stabilized(&gens, 6, cluster.id)?
        }
    };
    let free: Vec<usize> = (0..width(n)).filter(|&c| !ech.is_pivot(c)).collect();
    let mut conditions = Vec::new();
    for &d in degrees {
        let monos = monomials_of_degree(3, d);
        let rems: Vec<Vec<Nf>> = monos.iter().map(|m| ech.reduce(monomial_series(m, &xpow, &ypow, n))).collect();
        let mut rows = Vec::new();
        for &c in &free {
            for l in 0..s {
                rows.push(rems.iter().map(|r| r[c].coordinates(s)[l].clone()).collect());
            }
        }
        conditions.push((d, rows));
    }
    Ok(Contribution { cluster: cluster.id, formula, colength: free.len(), order: n, conditions })
}

/// Formula used for a contributing cluster under a guess; `None` when skipped.
pub fn formula_for(analysis: &Analysis, cluster: &SpecialPointCluster, guess: &GuessVector) -> Option<LocalFormula> {
    if cluster.guessable && guess.skips(cluster.id) {
        return None;
    }
    Some(match cluster.kind {
        ClusterKind::CuspOffCE | ClusterKind::NodeOffCE => LocalFormula::Maximal,
        ClusterKind::TransversalCE => LocalFormula::Cross,
        ClusterKind::TangentialCE if analysis.input.k == 2 => LocalFormula::NodalTangential,
        ClusterKind::TangentialCE => LocalFormula::CuspidalTangential,
        ClusterKind::NodeOnCE => match guess.variant(cluster.id) {
            NodeOnCeVariant::Cross => LocalFormula::Cross,
            NodeOnCeVariant::CrossAndMaximal => LocalFormula::CrossTimesMaximal,
        },
    })
}

/// Contributions of all clusters under a guess, for degrees 6 and 7.
pub fn contributions(analysis: &Analysis, guess: &GuessVector) -> Result<Vec<Contribution>, ConductorError> {
    analysis
        .clusters
        .iter()
        .filter_map(|c| formula_for(analysis, c, guess).map(|f| (c, f)))
        .map(|(c, f)| local_contribution(&analysis.input, c, f, &[6, 7]))
        .collect()
}

/// Degree-`d` forms satisfying every condition.
pub fn graded_piece_from(contribs: &[Contribution], d: u32) -> Vec<QPoly> {
    let monos = monomials_of_degree(3, d);
    let rows: Vec<Vec<Rational>> = contribs
        .iter()
        .flat_map(|c| c.conditions.iter().filter(|(e, _)| *e == d).flat_map(|(_, r)| r.iter().cloned()))
        .collect();
    let ker = if rows.is_empty() {
        (0..monos.len())
            .map(|i| (0..monos.len()).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect()
    } else {
        kernel_q(&rows, monos.len())
    };
    ker.iter().map(|v| form(&monos, v)).collect()
}

fn form(monos: &[Monomial], v: &[Rational]) -> QPoly {
    let row = primitive_integer_row(v);
    Poly::from_terms(&Vars::xyz(), monos.iter().zip(row).map(|(m, c)| (*m, Rational::from_integer(c))))
}

/// Intersect the contributions and extract `(G0, G1)`.
pub fn assemble(contribs: &[Contribution]) -> Result<ConductorPair, ConductorError> {
    ConductorPair::from_pieces(graded_piece_from(contribs, 6), graded_piece_from(contribs, 7))
}

/// `G0` spanning the degree-6 piece and `G1` completing `x G0, y G0, z G0`
/// to the degree-7 piece.
#[derive(Debug, Clone, PartialEq)]
pub struct ConductorPair {
    pub g0: QPoly,
    pub g1: QPoly,
    pub degree6: Vec<QPoly>,
    pub degree7: Vec<QPoly>,
}

impl ConductorPair {
    pub fn from_pieces(c6: Vec<QPoly>, c7: Vec<QPoly>) -> Result<Self, ConductorError> {
        if c6.len() != 1 {
            return Err(ConductorError::AssertG0Failed(c6.len()));
        }
        if c7.len() != 4 {
            return Err(ConductorError::AssertG1Failed(c7.len()));
        }
        let g0 = c6[0].normalized();
        let monos = monomials_of_degree(3, 7);
        let coords = |p: &QPoly| -> Vec<Rational> { monos.iter().map(|m| p.coeff(m)).collect() };
        let xyz = Vars::xyz();
        let mut ech = RationalEchelon::default();
        for i in 0..3 {
            ech.insert(coords(&(&Poly::var(&xyz, i) * &g0)));
        }
        if ech.rows.len() != 3 {
            return Err(ConductorError::AssertG1Failed(c7.len()));
        }
        for p in &c7 {
            let r = ech.reduce(coords(p));
            if r.iter().any(|v| !v.is_zero()) {
                let g1 = form(&monos, &r).normalized();
                return Ok(ConductorPair { g0, g1, degree6: c6, degree7: c7 });
            }
        }
        Err(ConductorError::AssertG1Failed(c7.len()))
    }

    /// `x G0, y G0, z G0` all lie in the degree-7 piece.
    pub fn is_consistent(&self) -> bool {
        let monos = monomials_of_degree(3, 7);
        let coords = |p: &QPoly| -> Vec<Rational> { monos.iter().map(|m| p.coeff(m)).collect() };
        let mut ech = RationalEchelon::default();
        for p in &self.degree7 {
            ech.insert(coords(p));
        }
        let xyz = Vars::xyz();
        (0..3).all(|i| ech.reduce(coords(&(&Poly::var(&xyz, i) * &self.g0))).iter().all(|v| v.is_zero()))
    }
}

#[derive(Default)]
struct RationalEchelon {
    rows: Vec<(usize, Vec<Rational>)>,
}

impl RationalEchelon {
    fn reduce(&self, mut v: Vec<Rational>) -> Vec<Rational> {
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                x.sub_mul_assign(&f, r);
            }
        }
        v
    }

    fn insert(&mut self, v: Vec<Rational>) {
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else { return };
        let inv = v[p].inv();
        for x in v.iter_mut() {
            *x = x.mul_ref(&inv);
        }
        for (_, row) in self.rows.iter_mut() {
            let f = row[p].clone();
            if f.is_zero() {
                continue;
            }
            for (x, r) in row.iter_mut().zip(&v) {
                x.sub_mul_assign(&f, r);
            }
        }
        self.rows.push((p, v));
    }
}

/// Number of forms of degree `d` in `x, y, z`.
pub fn forms_of_degree(d: u32) -> usize {
    count_monomials(3, d)
}
