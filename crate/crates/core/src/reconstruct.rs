//! From the conductor pair to the surface: lift the apparent contour to the
//! space contour, integrate, solve the five-constant ansatz, recover the
//! plane at infinity and verify.

use std::collections::BTreeMap;
use std::time::Instant;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::conductor::{assemble, contributions, ConductorError, ConductorPair};
use crate::contour::{analyze, enumerate_guesses, strip_absolute, Analysis, ClusterRow, ContourError, ContourInput, GuessVector, Rotation};
use crate::forward::{absolute_form, equal_up_to_scaling, invert_at_camera, random_instance, CaseTag};
use crate::ideals::{Ideal, TermOrder};
use crate::linalg::{kernel_q, solve, Solution};
use crate::poly::binary::{factor_univariate, to_uni, UnivariateView};
use crate::poly::resultant::proportional;
use crate::poly::{discriminant, monomials_of_degree, subresultant, Monomial, Poly, Vars};
use crate::scalar::{Rational, Scalar};
use crate::QPoly;

/// Assertions of the reconstruction algorithm, named by their line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FailedAssertion {
    /// Unique conductor element of degree 6.
    #[serde(rename = "line14")]
    Line14,
    /// Conductor element of degree 7 independent of the degree-6 multiples.
    #[serde(rename = "line15")]
    Line15,
    /// Space contour cut out by a cubic and a quartic.
    #[serde(rename = "line19")]
    Line19,
    /// Plane at infinity meeting the surface in a double conic.
    #[serde(rename = "line24")]
    Line24,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ReconstructError {
    #[error("assertion {0:?} failed: {1}")]
    Assertion(FailedAssertion, String),
    #[error("verification failed: {0}")]
    Internal(String),
}

impl ReconstructError {
    pub fn assertion(&self) -> Option<FailedAssertion> {
        match self {
            ReconstructError::Assertion(a, _) => Some(*a),
            ReconstructError::Internal(_) => None,
        }
    }
}

impl From<ConductorError> for ReconstructError {
    fn from(e: ConductorError) -> Self {
        match e {
            ConductorError::AssertG0Failed(_) => ReconstructError::Assertion(FailedAssertion::Line14, e.to_string()),
            ConductorError::AssertG1Failed(_) => ReconstructError::Assertion(FailedAssertion::Line15, e.to_string()),
            other => ReconstructError::Internal(other.to_string()),
        }
    }
}

fn line19(msg: impl Into<String>) -> ReconstructError {
    ReconstructError::Assertion(FailedAssertion::Line19, msg.into())
}

fn line24(msg: impl Into<String>) -> ReconstructError {
    ReconstructError::Assertion(FailedAssertion::Line24, msg.into())
}

/// Space contour ideal `<H0, H1>` in `x, y, z, w`.
#[derive(Debug, Clone)]
pub struct ContourIdeal {
    pub h0: QPoly,
    pub h1: QPoly,
    pub ideal: Ideal,
    /// Dimensions of the degree-3 and degree-4 pieces.
    pub cubics: usize,
    pub quartics: usize,
}

/// Whether `U1` and `G0` share no component, by univariate gcds at random
/// lines `y = y0 z`; `U1` must have constant leading coefficient in `x`.
fn coprime_with(u1: &QPoly, g0: &QPoly, seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let view = UnivariateView::Single(0);
    for _ in 0..3 {
        let y0 = Rational::from(rng.gen_range(-1000i64..=1000));
        let at = |p: &QPoly| to_uni(&p.eval_var(2, &Rational::one()).eval_var(1, &y0), view);
        if at(u1).gcd(&at(g0)).degree() == Some(0) {
            return true;
        }
    }
    false
}

/// Remainder of `p` on division by `d` in `x`; `d` has constant leading
/// coefficient in `x`.
fn rem_x(p: &QPoly, d: &QPoly) -> QPoly {
    let n = d.degree_in(0).expect("nonzero divisor");
    let dc = d.coefficients_in(0);
    let lc = dc[n as usize].constant_term();
    debug_assert!(dc[n as usize].is_constant());
    let lc_inv = lc.inv();
    let mut r = p.clone();
    while let Some(e) = r.degree_in(0).filter(|&e| e >= n && !r.is_zero()) {
        let top = &r.coefficients_in(0)[e as usize];
        let shift = &top.mul_monomial(&Monomial::var(0, e - n)).scale(&lc_inv);
        r = &r - &(shift * d);
    }
    r
}

/// Forms `h` of degree `e` in `x, y, z, w` with `modulus | h(xG0, yG0, zG0, G1)`.
fn lifted_piece(e: u32, g0: &QPoly, g1: &QPoly, modulus: &QPoly) -> Vec<QPoly> {
    let xyz = Vars::xyz();
    let xyzw = Vars::xyzw();
    let monos = monomials_of_degree(4, e);
    let g0p: Vec<QPoly> = (0..=e).map(|i| g0.pow(i)).collect();
    let g1p: Vec<QPoly> = (0..=e).map(|i| g1.pow(i)).collect();
    let images: Vec<QPoly> = monos
        .iter()
        .map(|m| {
            let j = m.exp(3);
            let base = Poly::monomial(&xyz, Monomial::from_exps(&[m.exp(0), m.exp(1), m.exp(2)]), Rational::one());
            rem_x(&(&(&base * &g0p[(e - j) as usize]) * &g1p[j as usize]), modulus)
        })
        .collect();
    let mut support: Vec<Monomial> = images.iter().flat_map(|p| p.terms().iter().map(|(m, _)| *m)).collect();
    support.sort();
    support.dedup();
    let rows: Vec<Vec<Rational>> = support.iter().map(|m| images.iter().map(|p| p.coeff(m)).collect()).collect();
    let ker = if rows.is_empty() {
        (0..monos.len()).map(|i| (0..monos.len()).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect()
    } else {
        kernel_q(&rows, monos.len())
    };
    ker.into_iter()
        .map(|v| Poly::from_terms(&xyzw, monos.iter().zip(v).map(|(m, c)| (*m, c))).normalized())
        .collect()
}

/// Ideal of the image of the contour under `(x G0 : y G0 : z G0 : G1)`,
/// computed degree by degree as the kernel of the substitution modulo the
/// part of `U` on which `G0` does not vanish.
pub fn lift_contour(input: &ContourInput, pair: &ConductorPair) -> Result<ContourIdeal, ReconstructError> {
    let a = absolute_form(&Vars::xyz());
    if !coprime_with(&input.u1, &pair.g0, 17) {
        return Err(line19("G0 vanishes on a component of U1"));
    }
    let modulus = if pair.g0.div_exact(&a).is_some() { input.u1.clone() } else { input.u.clone() };
    let j3 = lifted_piece(3, &pair.g0, &pair.g1, &modulus);
    if j3.len() != 1 {
        return Err(line19(format!("contour ideal has {} independent cubics", j3.len())));
    }
    let h0 = j3[0].clone();
    let j4 = lifted_piece(4, &pair.g0, &pair.g1, &modulus);
    if j4.len() != 5 {
        return Err(line19(format!("contour ideal has {} independent quartics, expected 5", j4.len())));
    }
    let xyzw = Vars::xyzw();
    let monos = monomials_of_degree(4, 4);
    let coords = |p: &QPoly| -> Vec<Rational> { monos.iter().map(|m| p.coeff(m)).collect() };
    let mut rows: Vec<Vec<Rational>> = (0..4).map(|i| coords(&(&Poly::var(&xyzw, i) * &h0))).collect();
    let base_rank = crate::linalg::rank(&rows, monos.len());
    if base_rank != 4 {
        return Err(line19("cubic of the contour ideal is degenerate"));
    }
    let mut h1 = None;
    for q in &j4 {
        rows.push(coords(q));
        if crate::linalg::rank(&rows, monos.len()) == 5 {
            h1 = Some(q.clone());
            break;
        }
        rows.pop();
    }
    let h1 = h1.ok_or_else(|| line19("no quartic independent of the cubic multiples"))?;
    let ideal = Ideal::with_order(&xyzw, vec![h0.clone(), h1.clone()], TermOrder::Grevlex);
    Ok(ContourIdeal { h0, h1, ideal, cubics: j3.len(), quartics: j4.len() })
}

/// Antiderivative in `w` without `w`-free terms.
pub fn integrate_w(h0: &QPoly) -> QPoly {
    let wi = h0.nvars() - 1;
    Poly::from_terms(
        h0.vars(),
        h0.terms().iter().map(|(m, c)| {
            let e = m.exp(wi);
            (m.mul(&Monomial::var(wi, 1)), c.clone() / Rational::from(e as i64 + 1))
        }),
    )
}

/// Constants `c1..c5` and `F0 = c1 x H0 + c2 y H0 + c3 z H0 + c4 w H0 + c5 H1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ansatz {
    pub c: [Rational; 5],
    pub f0: QPoly,
}

/// Choose `F0` in `<H0, H1>` of degree 4 with `F0 - H2` free of `w`.
pub fn solve_ansatz(h2: &QPoly, h0: &QPoly, h1: &QPoly) -> Result<Ansatz, ReconstructError> {
    let vars = h0.vars().clone();
    let wi = vars.len() - 1;
    let basis: Vec<QPoly> = (0..4).map(|i| &Poly::var(&vars, i) * h0).chain(std::iter::once(h1.clone())).collect();
    let mut support: Vec<Monomial> = basis
        .iter()
        .chain(std::iter::once(h2))
        .flat_map(|p| p.terms().iter().map(|(m, _)| *m))
        .filter(|m| m.exp(wi) > 0)
        .collect();
    support.sort();
    support.dedup();
    let a: Vec<Vec<Rational>> = support.iter().map(|m| basis.iter().map(|p| p.coeff(m)).collect()).collect();
    let b: Vec<Rational> = support.iter().map(|m| h2.coeff(m)).collect();
    let c = match solve(&a, &b, 5) {
        Solution::Unique(c) => c,
        Solution::Inconsistent => return Err(line24("ansatz for F0 has no solution")),
        Solution::Family(..) => return Err(line24("ansatz for F0 is underdetermined")),
    };
    let mut f0 = Poly::zero(&vars);
    for (ci, p) in c.iter().zip(&basis) {
        f0 = &f0 + &p.scale(ci);
    }
    Ok(Ansatz { c: c.try_into().expect("five constants"), f0 })
}

/// `F0(x, y, z, w - a x - b y - c z)`.
pub fn shift_plane(f0: &QPoly, abc: &[Rational; 3]) -> QPoly {
    let vars = f0.vars().clone();
    let mut w = Poly::var(&vars, 3);
    for (i, v) in abc.iter().enumerate() {
        w = &w - &Poly::var(&vars, i).scale(v);
    }
    let images = [Poly::var(&vars, 0), Poly::var(&vars, 1), Poly::var(&vars, 2), w];
    f0.compose(&images)
}

/// `alpha` with `F|_{w=0} = alpha A^2` and `dF/dw|_{w=0}` divisible by `A`.
pub fn darboux_alpha(f: &QPoly) -> Option<Rational> {
    let vars = f.vars();
    let a = absolute_form(vars);
    let c = f.coefficients_in(3);
    let c0 = c.first().cloned().unwrap_or_else(|| Poly::zero(vars));
    let c1 = c.get(1).cloned().unwrap_or_else(|| Poly::zero(vars));
    let a2 = a.pow(2);
    let alpha = c0.coeff(&a2.leading()?.0) / a2.leading_coeff();
    if alpha.is_zero() || c0 != a2.scale(&alpha) {
        return None;
    }
    if !c1.is_zero() && c1.div_exact(&a).is_none() {
        return None;
    }
    Some(alpha)
}

fn nf_mod_a(p: &QPoly, a_chart: &QPoly) -> QPoly {
    rem_x(p, a_chart)
}

/// Plane coefficients from the common root of `F0` and `dF0/dw` along the
/// absolute conic: `s0 = (a x + b y + c z) s1 mod A` for the first
/// subresultant `s1 w + s0`.
pub fn recover_infinity_plane_linear(f0: &QPoly) -> Result<[Rational; 3], ReconstructError> {
    let xyzw = f0.vars().clone();
    let s = subresultant(f0, &f0.partial(3), 3, 1).map_err(|e| line24(e.to_string()))?;
    let a = absolute_form(&xyzw);
    let s0 = nf_mod_a(&s[0], &a);
    let s1 = nf_mod_a(&s[1], &a);
    if s1.is_zero() {
        return Err(line24("F0 and its w-derivative share more than one root along the absolute conic"));
    }
    let cols: Vec<QPoly> = (0..3).map(|i| nf_mod_a(&(&Poly::var(&xyzw, i) * &s1), &a)).collect();
    let mut support: Vec<Monomial> = cols.iter().chain(std::iter::once(&s0)).flat_map(|p| p.terms().iter().map(|(m, _)| *m)).collect();
    support.sort();
    support.dedup();
    let m: Vec<Vec<Rational>> = support.iter().map(|mm| cols.iter().map(|p| p.coeff(mm)).collect()).collect();
    let b: Vec<Rational> = support.iter().map(|mm| s0.coeff(mm)).collect();
    match solve(&m, &b, 3) {
        Solution::Unique(v) => Ok(v.try_into().expect("three coefficients")),
        Solution::Inconsistent => Err(line24("no plane through the singular conic")),
        Solution::Family(..) => Err(line24("plane at infinity is not determined")),
    }
}

/// Polynomial in `x, y, z` with coefficients in the unknowns.
type Split = BTreeMap<Monomial, QPoly>;

fn split_mul(p: &Split, q: &Split) -> Split {
    let mut out = Split::new();
    for (m, c) in p {
        for (n, d) in q {
            let prod = c * d;
            let e = out.entry(m.mul(n)).or_insert_with(|| Poly::zero(prod.vars()));
            *e = &*e + &prod;
        }
    }
    out
}

fn split_linear(coeffs: [QPoly; 3]) -> Split {
    coeffs.into_iter().enumerate().map(|(i, c)| (Monomial::var(i, 1), c)).collect()
}

/// `p(x, y, z, w)` at `w = ell`.
fn split_substitute(p: &QPoly, ell: &Split, unknowns: &Vars) -> Split {
    let wi = 3;
    let top = p.degree_in(wi).unwrap_or(0);
    let mut powers = vec![Split::from([(Monomial::one(), Poly::one(unknowns))])];
    for j in 1..=top as usize {
        powers.push(split_mul(&powers[j - 1], ell));
    }
    let mut out = Split::new();
    for (m, c) in p.terms() {
        let base = Monomial::from_exps(&[m.exp(0), m.exp(1), m.exp(2)]);
        for (n, d) in &powers[m.exp(wi) as usize] {
            let e = out.entry(base.mul(n)).or_insert_with(|| Poly::zero(unknowns));
            *e = &*e + &d.scale(c);
        }
    }
    out
}

/// Quotient and remainder of `p` by `A = x^2 + y^2 + z^2`, reducing `x^2`.
fn split_divmod_a(p: &Split) -> (Split, Split) {
    let mut rem = p.clone();
    let mut quo = Split::new();
    loop {
        let Some((m, c)) = rem.iter().rev().find(|(m, c)| m.exp(0) >= 2 && !c.is_zero()).map(|(m, c)| (*m, c.clone())) else {
            break;
        };
        rem.remove(&m);
        let q = Monomial::from_exps(&[m.exp(0) - 2, m.exp(1), m.exp(2)]);
        let e = quo.entry(q).or_insert_with(|| Poly::zero(c.vars()));
        *e = &*e + &c;
        for i in 1..3 {
            let t = q.mul(&Monomial::var(i, 2));
            let e = rem.entry(t).or_insert_with(|| Poly::zero(c.vars()));
            *e = &*e - &c;
        }
    }
    (quo, rem)
}

/// All rational `(a, b, c)` making `F0(x, y, z, w - a x - b y - c z)` a
/// Darboux cyclide, by solving the coefficient system with Gröbner bases.
pub fn recover_infinity_plane(f0: &QPoly) -> Result<Vec<[Rational; 3]>, ReconstructError> {
    let unknowns = Vars::new(&["a", "b", "c"]);
    let u = |i: usize| Poly::<Rational>::var(&unknowns, i);
    let minus_ell = split_linear([-u(0), -u(1), -u(2)]);
    let (q0, r0) = split_divmod_a(&split_substitute(f0, &minus_ell, &unknowns));
    let (_, rq) = split_divmod_a(&q0);
    let (_, r1) = split_divmod_a(&split_substitute(&f0.partial(3), &minus_ell, &unknowns));
    let gens: Vec<QPoly> = [r0, rq, r1].into_iter().flat_map(|s| s.into_values()).filter(|p| !p.is_zero()).collect();
    let ideal = Ideal::new(&unknowns, gens);
    if ideal.is_unit() {
        return Ok(Vec::new());
    }
    let basis = ideal.groebner();
    let sols = if basis.iter().all(|g| g.total_degree() == Some(1)) {
        linear_points(basis)?
    } else {
        rational_points_abc(&ideal)?
    };
    Ok(sols.into_iter().filter(|abc| darboux_alpha(&shift_plane(f0, abc)).is_some()).collect())
}

/// The point cut out by a linear Gröbner basis in `a, b, c`.
fn linear_points(basis: &[QPoly]) -> Result<Vec<[Rational; 3]>, ReconstructError> {
    let rows: Vec<Vec<Rational>> = basis.iter().map(|g| (0..3).map(|i| g.coeff(&Monomial::var(i, 1))).collect()).collect();
    let rhs: Vec<Rational> = basis.iter().map(|g| -g.constant_term()).collect();
    match solve(&rows, &rhs, 3) {
        Solution::Unique(v) => Ok(vec![v.try_into().expect("three coefficients")]),
        Solution::Inconsistent => Ok(Vec::new()),
        Solution::Family(..) => Err(line24("plane coefficients are not isolated")),
    }
}

/// Rational points of a zero-dimensional ideal in `a, b, c`.
fn rational_points_abc(ideal: &Ideal) -> Result<Vec<[Rational; 3]>, ReconstructError> {
    let names = ["a", "b", "c"];
    let mut roots: Vec<Vec<Rational>> = Vec::new();
    for (i, n) in names.iter().enumerate() {
        let others: Vec<&str> = names.iter().filter(|m| *m != n).copied().collect();
        let uni = ideal.eliminate(&others).map_err(|e| ReconstructError::Internal(e.to_string()))?;
        let Some(p) = uni.groebner().iter().find(|g| !g.is_zero()).cloned() else {
            return Err(line24("plane coefficients are not isolated"));
        };
        let p = p.embed(&Vars::new(&["a", "b", "c"])).map_err(|e| ReconstructError::Internal(e.to_string()))?;
        let mut r = Vec::new();
        if !p.is_constant() {
            for (f, _) in factor_univariate(&p).map_err(|e| ReconstructError::Internal(e.to_string()))?.factors {
                if f.total_degree() == Some(1) {
                    let u = to_uni(&f, UnivariateView::Single(i));
                    r.push(-u.coeff(0) / u.coeff(1));
                }
            }
        }
        roots.push(r);
    }
    let abc = Vars::new(&["a", "b", "c"]);
    let gens: Vec<QPoly> = ideal.generators().iter().map(|g| g.embed(&abc).expect("subset")).collect();
    let mut out = Vec::new();
    for a in &roots[0] {
        for b in &roots[1] {
            for c in &roots[2] {
                let pt = [a.clone(), b.clone(), c.clone()];
                if gens.iter().all(|g| g.eval(&pt).is_zero()) {
                    out.push(pt);
                }
            }
        }
    }
    Ok(out)
}

/// A verified reconstruction in the input coordinates.
#[derive(Debug, Clone)]
pub struct CandidateSurface {
    pub f: QPoly,
    pub abc: [Rational; 3],
    pub guess: GuessVector,
}

/// Shift, rotate back, normalize and verify against the input contour.
pub fn finalize(f0: &QPoly, abc: &[Rational; 3], u: &QPoly, rotation: &Rotation, guess: &GuessVector) -> Result<CandidateSurface, ReconstructError> {
    let f_rot = shift_plane(f0, abc);
    if darboux_alpha(&f_rot).is_none() {
        return Err(line24("shifted quartic is not in Darboux form"));
    }
    let f = rotation.transpose().apply(&f_rot).normalized();
    let m = &rotation.0;
    let abc_orig: [Rational; 3] = std::array::from_fn(|i| (0..3).fold(Rational::zero(), |acc, j| acc + m[i][j].clone() * abc[j].clone()));
    if darboux_alpha(&f).is_none() {
        return Err(ReconstructError::Internal("rotation broke Darboux form".into()));
    }
    let disc = discriminant(&f, 3).map_err(|e| ReconstructError::Internal(e.to_string()))?;
    let disc = disc.restrict(u.vars()).map_err(|e| ReconstructError::Internal(e.to_string()))?;
    if !proportional(&disc, u) {
        return Err(ReconstructError::Internal("discriminant of the result differs from the input".into()));
    }
    Ok(CandidateSurface { f, abc: abc_orig, guess: guess.clone() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Success,
    Fail,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Diagnostics {
    pub dim_deg6: Option<usize>,
    pub dim_deg7: Option<usize>,
    pub contour_degrees: Option<[u32; 2]>,
    pub contour_cubics: Option<usize>,
    pub contour_quartics: Option<usize>,
    /// Local colength per contributing cluster id.
    pub colengths: Vec<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ReconstructionReport {
    pub guess: GuessVector,
    pub outcome: Outcome,
    pub failed_assertion: Option<FailedAssertion>,
    #[serde(rename = "F")]
    pub f: Option<String>,
    pub abc: Option<[String; 3]>,
    pub diagnostics: Diagnostics,
    #[serde(skip)]
    pub surface: Option<QPoly>,
}

impl ReconstructionReport {
    pub fn succeeded(&self) -> bool {
        self.outcome == Outcome::Success
    }
}

/// Run every step for one guess; failures are recorded, not raised.
pub fn reconstruct_guess(analysis: &Analysis, original: &QPoly, guess: &GuessVector) -> ReconstructionReport {
    let mut diag = Diagnostics::default();
    let result = run_steps(analysis, original, guess, &mut diag);
    match result {
        Ok(c) => ReconstructionReport {
            guess: guess.clone(),
            outcome: Outcome::Success,
            failed_assertion: None,
            f: Some(c.f.to_string()),
            abc: Some(c.abc.clone().map(|v| v.to_string())),
            diagnostics: diag,
            surface: Some(c.f),
        },
        Err(e) => {
            diag.message = Some(e.to_string());
            ReconstructionReport {
                guess: guess.clone(),
                outcome: Outcome::Fail,
                failed_assertion: e.assertion(),
                f: None,
                abc: None,
                diagnostics: diag,
                surface: None,
            }
        }
    }
}

fn run_steps(analysis: &Analysis, original: &QPoly, guess: &GuessVector, diag: &mut Diagnostics) -> Result<CandidateSurface, ReconstructError> {
    let contribs = contributions(analysis, guess)?;
    diag.colengths = contribs.iter().map(|c| (c.cluster, c.colength)).collect();
    let c6 = crate::conductor::graded_piece_from(&contribs, 6);
    let c7 = crate::conductor::graded_piece_from(&contribs, 7);
    diag.dim_deg6 = Some(c6.len());
    diag.dim_deg7 = Some(c7.len());
    let pair = ConductorPair::from_pieces(c6, c7)?;
    let _ = assemble;
    let lifted = lift_contour(&analysis.input, &pair)?;
    diag.contour_degrees = Some([3, 4]);
    diag.contour_cubics = Some(lifted.cubics);
    diag.contour_quartics = Some(lifted.quartics);
    let h2 = integrate_w(&lifted.h0);
    let ansatz = solve_ansatz(&h2, &lifted.h0, &lifted.h1)?;
    let abc = match recover_infinity_plane_linear(&ansatz.f0) {
        Ok(abc) => abc,
        Err(_) => {
            let sols = recover_infinity_plane(&ansatz.f0)?;
            match sols.as_slice() {
                [one] => one.clone(),
                [] => return Err(line24("no rational plane at infinity")),
                _ => return Err(line24(format!("{} planes at infinity", sols.len()))),
            }
        }
    };
    finalize(&ansatz.f0, &abc, original, &analysis.rotation, guess)
}

/// Settings of a full reconstruction run.
#[derive(Debug, Clone)]
pub struct RunOptions {
    pub seed: u64,
    pub guess_limit: usize,
    pub isolated_bound: usize,
    pub jobs: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { seed: 0, guess_limit: 16, isolated_bound: 4, jobs: 1 }
    }
}

/// Everything `reconstruct` reports.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RunReport {
    pub k: u32,
    pub case: CaseTag,
    pub rotation: Rotation,
    pub clusters: Vec<ClusterRow>,
    pub isolated_bound: usize,
    pub reports: Vec<ReconstructionReport>,
    #[serde(skip)]
    pub analysis_seconds: f64,
    #[serde(skip)]
    pub guesses_seconds: f64,
}

impl RunReport {
    pub fn successes(&self) -> impl Iterator<Item = &ReconstructionReport> {
        self.reports.iter().filter(|r| r.succeeded())
    }
}

/// Analyze `u` and reconstruct under every admissible guess.
pub fn run_all_guesses(u: &QPoly, opts: &RunOptions) -> Result<RunReport, ContourError> {
    let t0 = Instant::now();
    let input = strip_absolute(u)?;
    let analysis = analyze(&input, opts.seed)?;
    let guesses = enumerate_guesses(&analysis.clusters, opts.guess_limit, opts.isolated_bound)?;
    let t1 = Instant::now();
    let original = input.u.clone();
    let run = |g: &GuessVector| reconstruct_guess(&analysis, &original, g);
    let reports: Vec<ReconstructionReport> = if opts.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(opts.jobs).build().expect("thread pool");
        pool.install(|| guesses.par_iter().map(run).collect())
    } else {
        guesses.iter().map(run).collect()
    };
    Ok(RunReport {
        k: analysis.input.k,
        case: analysis.input.case,
        rotation: analysis.rotation.clone(),
        clusters: analysis.clusters.iter().map(ClusterRow::from).collect(),
        isolated_bound: opts.isolated_bound,
        reports,
        analysis_seconds: (t1 - t0).as_secs_f64(),
        guesses_seconds: t1.elapsed().as_secs_f64(),
    })
}

/// Wall-clock seconds per stage of a round trip.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Timings {
    pub generate: f64,
    pub analyze: f64,
    pub reconstruct: f64,
    pub compare: f64,
}

/// Outcome of generate, reconstruct and compare for one seed.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RoundtripVerdict {
    pub seed: u64,
    pub case: CaseTag,
    pub camera: [Rational; 3],
    pub hidden: String,
    pub guesses: usize,
    pub successes: usize,
    /// Guesses whose surface equals the hidden one up to scaling.
    pub matched: Vec<GuessVector>,
    /// Successful surfaces that are the inversion of the hidden one.
    pub inverted: Vec<GuessVector>,
    pub verdict: bool,
    pub timings: Timings,
    #[serde(skip)]
    pub run: Option<RunReport>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RoundtripError {
    #[error(transparent)]
    Forward(#[from] crate::forward::ForwardError),
    #[error(transparent)]
    Contour(#[from] ContourError),
}

/// Generate a seeded instance, reconstruct it from its contour and compare.
pub fn roundtrip(seed: u64, case: CaseTag, opts: &RunOptions) -> Result<RoundtripVerdict, RoundtripError> {
    let t = Instant::now();
    let inst = random_instance(seed, case)?;
    let generate = t.elapsed().as_secs_f64();
    let run = run_all_guesses(&inst.contour, &RunOptions { seed: opts.seed ^ seed, ..opts.clone() })?;
    let t = Instant::now();
    let inverse = invert_at_camera(&inst.surface).ok();
    let mut matched = Vec::new();
    let mut inverted = Vec::new();
    for r in run.successes() {
        let f = r.surface.as_ref().expect("successful report carries its surface");
        if equal_up_to_scaling(f, &inst.surface).is_some() {
            matched.push(r.guess.clone());
        } else if inverse.as_ref().is_some_and(|g| equal_up_to_scaling(f, g).is_some()) {
            inverted.push(r.guess.clone());
        }
    }
    Ok(RoundtripVerdict {
        seed,
        case,
        camera: inst.camera.clone(),
        hidden: inst.surface.to_string(),
        guesses: run.reports.len(),
        successes: run.successes().count(),
        verdict: !matched.is_empty(),
        matched,
        inverted,
        timings: Timings { generate, analyze: run.analysis_seconds, reconstruct: run.guesses_seconds, compare: t.elapsed().as_secs_f64() },
        run: Some(run),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forward::make_cyclide;

    fn q(s: &str) -> QPoly {
        Poly::parse(s, &Vars::xyzw()).unwrap()
    }

    #[test]
    fn integration_examples() {
        assert_eq!(integrate_w(&q("w^2")), q("1/3*w^3"));
        assert_eq!(integrate_w(&q("x^2*y")), q("x^2*y*w"));
        let h = q("x^3 - 2*x*y*w + 5*z*w^2 - w^3 + y^2*z");
        assert_eq!(integrate_w(&h).partial(3), h);
    }

    #[test]
    fn ansatz_identity_case() {
        let h0 = q("x^2*w + y^3 - z*w^2");
        let h1 = integrate_w(&h0);
        let a = solve_ansatz(&h1, &h0, &h1).unwrap();
        assert_eq!(a.c[4], Rational::one());
        assert!(a.c[..4].iter().all(|c| c.is_zero()));
    }

    #[test]
    fn plane_recovery_inverts_a_shift() {
        let inst = random_instance(5, CaseTag::Nodal).unwrap();
        let f = inst.surface.clone();
        assert!(darboux_alpha(&f).is_some());
        assert_eq!(recover_infinity_plane_linear(&f).unwrap(), [Rational::zero(), Rational::zero(), Rational::zero()]);
        let shift = [Rational::from(-1), Rational::zero(), Rational::new(1, 2)];
        // F0 = F(x, y, z, w + a x + b y + c z) with abc = shift.
        let neg: [Rational; 3] = shift.clone().map(|v| -v);
        let f0 = shift_plane(&f, &neg);
        assert_eq!(recover_infinity_plane_linear(&f0).unwrap(), shift);
        assert_eq!(recover_infinity_plane(&f0).unwrap(), vec![shift.clone()]);
        assert_eq!(shift_plane(&f0, &shift), f);
    }

    #[test]
    fn darboux_form_detection() {
        let f = make_cyclide(&crate::forward::torus(3, 1)).unwrap();
        assert!(darboux_alpha(&f).is_some());
        assert!(darboux_alpha(&q("x^4 + w^4")).is_none());
    }

    #[test]
    fn nodal_roundtrip_seed_1() {
        let inst = random_instance(1, CaseTag::Nodal).unwrap();
        let rep = run_all_guesses(&inst.contour, &RunOptions::default()).unwrap();
        let inverse = invert_at_camera(&inst.surface).unwrap();
        let ok: Vec<&QPoly> = rep.successes().map(|r| r.surface.as_ref().unwrap()).collect();
        assert!(ok.iter().any(|f| equal_up_to_scaling(f, &inst.surface).is_some()));
        assert!(ok.iter().all(|f| equal_up_to_scaling(f, &inst.surface).is_some() || equal_up_to_scaling(f, &inverse).is_some()));
        for r in rep.successes() {
            assert_eq!((r.diagnostics.dim_deg6, r.diagnostics.dim_deg7), (Some(1), Some(4)));
        }
    }

    #[test]
    fn cuspidal_roundtrip() {
        let v = roundtrip(2, CaseTag::Cuspidal, &RunOptions::default()).unwrap();
        assert!(v.verdict);
        assert!(v.timings.generate >= 0.0 && v.timings.reconstruct >= 0.0);
    }
}
