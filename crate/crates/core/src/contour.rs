//! Analysis of an input contour: strip the absolute conic, move to generic
//! coordinates, find the special points as Galois-stable clusters and
//! enumerate the guesses over the ambiguous ones.
//!
//! All cluster computations happen in the affine chart `z = 1`. Generic
//! coordinates guarantee that no special point lies on `z = 0` and that each
//! cluster is the set `{(phi(t) : t : 1) | r(t) = 0}` for an irreducible
//! resolvent `r` and a polynomial `phi` of degree below `deg r`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::forward::{absolute_form, CaseTag};
use crate::ideals::Ideal;
use crate::nf::{Nf, NumberField};
use crate::poly::binary::{factor_univariate, from_uni, squarefree, to_uni, UnivariateView};
use crate::poly::{discriminant, resultant, subresultant, trial_divide, Poly, PolyError, UniPoly, Vars};
use crate::scalar::{Rational, Scalar};
use crate::QPoly;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ContourError {
    #[error("input must be a nonzero form of degree 12 in x, y, z: {0}")]
    BadInput(String),
    #[error("not the apparent contour of a Darboux cyclide in general position: x^2+y^2+z^2 has multiplicity {0}")]
    Multiplicity(u32),
    #[error("non-generic coordinates: {0}")]
    NotGeneric(String),
    #[error("genericity not reached after {attempts} rotations; last failure: {reason}")]
    GenericityExhausted { attempts: usize, reason: String },
    #[error("{found} guessable clusters exceed the bound {bound}")]
    TooManyGuesses { found: usize, bound: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Input contour split as `U = U1 * A^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourInput {
    pub u: QPoly,
    pub u1: QPoly,
    pub k: u32,
    pub case: CaseTag,
}

/// Split off the power of `x^2 + y^2 + z^2`.
pub fn strip_absolute(u: &QPoly) -> Result<ContourInput, ContourError> {
    let xyz = Vars::xyz();
    let u = u.restrict(&xyz).map_err(|e| ContourError::BadInput(e.to_string()))?;
    if u.is_zero() || !u.is_homogeneous() || u.total_degree() != Some(12) {
        return Err(ContourError::BadInput(format!(
            "got degree {:?}, homogeneous: {}",
            u.total_degree(),
            u.is_homogeneous()
        )));
    }
    let (u1, k) = trial_divide(&u, &absolute_form(&xyz))?;
    let case = match k {
        2 => CaseTag::Nodal,
        3 => CaseTag::Cuspidal,
        _ => return Err(ContourError::Multiplicity(k)),
    };
    Ok(ContourInput { u1: u1.normalized(), u, k, case })
}

/// Rational orthogonal 3x3 matrix acting on `(x, y, z)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rotation(pub [[Rational; 3]; 3]);

impl Rotation {
    pub fn identity() -> Self {
        let e = |i: usize, j: usize| if i == j { Rational::one() } else { Rational::zero() };
        Rotation(std::array::from_fn(|i| std::array::from_fn(|j| e(i, j))))
    }

    /// Cayley transform `(I - S)(I + S)^-1` of the skew matrix with axis `(a, b, c)`.
    pub fn cayley(a: &Rational, b: &Rational, c: &Rational) -> Self {
        let n = Rational::one() + a.clone() * a.clone() + b.clone() * b.clone() + c.clone() * c.clone();
        let two = Rational::from(2);
        let sq = |v: &Rational| v.clone() * v.clone();
        let p = |u: &Rational, v: &Rational| two.clone() * u.clone() * v.clone();
        let one = Rational::one();
        let m = [
            [
                one.clone() + sq(a) - sq(b) - sq(c),
                p(a, b) + two.clone() * c.clone(),
                p(a, c) - two.clone() * b.clone(),
            ],
            [
                p(a, b) - two.clone() * c.clone(),
                one.clone() - sq(a) + sq(b) - sq(c),
                p(b, c) + two.clone() * a.clone(),
            ],
            [
                p(a, c) + two.clone() * b.clone(),
                p(b, c) - two.clone() * a.clone(),
                one.clone() - sq(a) - sq(b) + sq(c),
            ],
        ];
        Rotation(m.map(|row| row.map(|v| v / n.clone())))
    }

    pub fn transpose(&self) -> Self {
        Rotation(std::array::from_fn(|i| std::array::from_fn(|j| self.0[j][i].clone())))
    }

    pub fn is_identity(&self) -> bool {
        *self == Rotation::identity()
    }

    pub fn mul(&self, o: &Rotation) -> Rotation {
        Rotation(std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                (0..3).fold(Rational::zero(), |acc, k| acc + self.0[i][k].clone() * o.0[k][j].clone())
            })
        }))
    }

    /// `p(M v)` where `v` are the first three variables of `p`.
    pub fn apply(&self, p: &QPoly) -> QPoly {
        let vars = p.vars();
        let mut images: Vec<QPoly> = (0..vars.len()).map(|i| Poly::var(vars, i)).collect();
        for (i, img) in images.iter_mut().take(3).enumerate() {
            let mut acc = Poly::zero(vars);
            for j in 0..3 {
                acc = &acc + &Poly::var(vars, j).scale(&self.0[i][j]);
            }
            *img = acc;
        }
        p.compose(&images)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClusterKind {
    CuspOffCE,
    NodeOffCE,
    NodeOnCE,
    TransversalCE,
    TangentialCE,
}

impl ClusterKind {
    pub fn guessable(self) -> bool {
        !matches!(self, ClusterKind::NodeOnCE)
    }

    /// Singular points of the octic part away from the absolute conic.
    pub fn is_isolated_candidate(self) -> bool {
        matches!(self, ClusterKind::CuspOffCE | ClusterKind::NodeOffCE)
    }
}

impl fmt::Display for ClusterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Conjugacy class of special points `{(phi(t) : t : 1) | r(t) = 0}`.
#[derive(Debug, Clone)]
pub struct SpecialPointCluster {
    pub id: usize,
    pub kind: ClusterKind,
    /// Irreducible binary form `r(y, z)`.
    pub resolvent: QPoly,
    pub size: usize,
    pub guessable: bool,
    field: Arc<NumberField>,
    phi: UniPoly<Rational>,
    radical: OnceLock<Ideal>,
}

impl SpecialPointCluster {
    fn new(kind: ClusterKind, r: &UniPoly<Rational>, phi: UniPoly<Rational>) -> Self {
        let xyz = Vars::xyz();
        let resolvent = from_uni(
            &r.monic(),
            UnivariateView::Binary { affine: 1, chart: 2, degree: 0 },
            &Poly::zero(&xyz),
        );
        SpecialPointCluster {
            id: 0,
            kind,
            size: r.degree().unwrap_or(0),
            resolvent: resolvent.normalized(),
            guessable: kind.guessable(),
            field: NumberField::new(r),
            phi,
            radical: OnceLock::new(),
        }
    }

    /// Field generated by the `y`-coordinate of one cluster point.
    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    /// Affine coordinates `(x, y)` of the generic cluster point in the chart `z = 1`.
    pub fn point(&self) -> (Nf, Nf) {
        (Nf::from_uni(&self.field, &self.phi), self.field.generator())
    }

    /// `x = phi(y)` on the cluster.
    pub fn x_of_y(&self) -> &UniPoly<Rational> {
        &self.phi
    }

    /// Homogeneous radical ideal of the cluster points.
    pub fn radical_ideal(&self) -> &Ideal {
        self.radical.get_or_init(|| shape_radical(&self.field.modulus(), &self.phi))
    }
}

/// Homogenization of `<r(y), x - phi(y)>`, saturated by `z`.
fn shape_radical(r: &UniPoly<Rational>, phi: &UniPoly<Rational>) -> Ideal {
    let xyz = Vars::xyz();
    let hom = |u: &UniPoly<Rational>, deg: usize| -> QPoly {
        Poly::from_terms(
            &xyz,
            u.coeffs().iter().enumerate().map(|(i, c)| {
                (crate::poly::Monomial::from_exps(&[0, i as u32, (deg - i) as u32]), c.clone())
            }),
        )
    };
    let s = r.degree().unwrap_or(0);
    let e = phi.degree().unwrap_or(0).max(1);
    let x = Poly::var(&xyz, 0);
    let z = Poly::var(&xyz, 2);
    let lin = &(&x * &z.pow(e as u32 - 1)) - &hom(phi, e);
    let base = Ideal::new(&xyz, vec![hom(r, s), lin]);
    base.saturate(&Ideal::principal(z)).expect("same ring")
}

/// Affine chart `z = 1` in variables `(x, y)`.
fn chart(p: &QPoly) -> QPoly {
    p.eval_var(2, &Rational::one()).restrict(&Vars::new(&["x", "y"])).expect("z eliminated")
}

fn uni_y(p: &QPoly) -> UniPoly<Rational> {
    to_uni(p, UnivariateView::Single(1))
}

/// `phi` with `x = phi(t)` the unique common root in `x` of `p`, `q` over `Q[t]/r`.
fn common_root(p: &QPoly, q: &QPoly, r: &UniPoly<Rational>) -> Result<UniPoly<Rational>, ContourError> {
    let s = subresultant(p, q, 0, 1)?;
    let s0 = uni_y(&s[0]).rem(r);
    let s1 = uni_y(&s[1]).rem(r);
    if s1.is_zero() {
        return Err(ContourError::NotGeneric("two special points share a projection".into()));
    }
    let k = NumberField::new(r);
    let x = (-Nf::from_uni(&k, &s0)).div_ref(&Nf::from_uni(&k, &s1));
    let mut c = x.coordinates(r.degree().unwrap_or(0));
    while c.last().is_some_and(|v| v.is_zero()) {
        c.pop();
    }
    Ok(UniPoly::new(c))
}

/// Irreducible factors with multiplicities of a univariate polynomial,
/// factoring only the parts of multiplicity at least two.
fn repeated_factors(p: &UniPoly<Rational>) -> Result<(Vec<(UniPoly<Rational>, u32)>, UniPoly<Rational>), ContourError> {
    let vars = Vars::new(&["x", "y"]);
    let poly = from_uni(p, UnivariateView::Single(1), &Poly::zero(&vars));
    let sq = squarefree(&poly)?;
    let mut out = Vec::new();
    let mut simple = UniPoly::constant(Rational::one());
    for (part, m) in &sq.factors {
        if *m == 1 {
            simple = simple.mul(&uni_y(part));
            continue;
        }
        for (f, e) in factor_univariate(part)?.factors {
            debug_assert_eq!(e, 1);
            out.push((uni_y(&f).monic(), *m));
        }
    }
    Ok((out, simple))
}

fn all_factors(p: &UniPoly<Rational>) -> Result<Vec<(UniPoly<Rational>, u32)>, ContourError> {
    let vars = Vars::new(&["x", "y"]);
    let poly = from_uni(p, UnivariateView::Single(1), &Poly::zero(&vars));
    Ok(factor_univariate(&poly)?
        .factors
        .into_iter()
        .filter(|(f, _)| !f.is_constant())
        .map(|(f, m)| (uni_y(&f).monic(), m))
        .collect())
}

fn coprime(a: &UniPoly<Rational>, b: &UniPoly<Rational>) -> bool {
    a.gcd(b).degree() == Some(0)
}

/// Intermediate data shared by the two cluster finders.
struct ChartData {
    f: QPoly,
    g: QPoly,
    disc: UniPoly<Rational>,
    res: UniPoly<Rational>,
}

fn chart_data(input: &ContourInput) -> Result<ChartData, ContourError> {
    let n = input.u1.total_degree().unwrap_or(0) as usize;
    let f = chart(&input.u1);
    if f.degree_in(0) != Some(n as u32) {
        return Err(ContourError::NotGeneric("leading coefficient of U1 in x vanishes".into()));
    }
    let g = chart(&absolute_form(&Vars::xyz()));
    let disc = uni_y(&discriminant(&f, 0)?);
    if disc.is_zero() {
        return Err(ContourError::NotGeneric("U1 has a repeated component".into()));
    }
    if disc.degree() != Some(n * (n - 1)) {
        return Err(ContourError::NotGeneric("a singular or branch point lies on z = 0".into()));
    }
    let res = uni_y(&resultant(&f, &g, 0)?);
    if res.degree() != Some(2 * n) {
        return Err(ContourError::NotGeneric("U1 meets the absolute conic on z = 0".into()));
    }
    Ok(ChartData { f, g, disc, res })
}

fn singular_clusters(input: &ContourInput, data: &ChartData) -> Result<Vec<SpecialPointCluster>, ContourError> {
    let (factors, simple) = repeated_factors(&data.disc)?;
    let fx = data.f.partial(0);
    let mut out = Vec::new();
    for (r, m) in factors {
        let kind = match m {
            2 => ClusterKind::NodeOffCE,
            3 => ClusterKind::CuspOffCE,
            _ => return Err(ContourError::NotGeneric(format!("discriminant factor of multiplicity {m}"))),
        };
        if !coprime(&r, &simple) {
            return Err(ContourError::NotGeneric("branch point shares a projection with a singular point".into()));
        }
        let phi = common_root(&data.f, &fx, &r)?;
        out.push(SpecialPointCluster::new(kind, &r, phi));
    }
    if !coprime(&simple, &data.res) {
        return Err(ContourError::NotGeneric("branch point shares a projection with the absolute conic".into()));
    }
    let _ = input;
    Ok(out)
}

fn ce_clusters(input: &ContourInput, data: &ChartData, nodes: &[SpecialPointCluster]) -> Result<Vec<SpecialPointCluster>, ContourError> {
    let mut out = Vec::new();
    for (r, m) in all_factors(&data.res)? {
        let shared = nodes.iter().find(|c| c.field.modulus() == r);
        let kind = match (m, shared) {
            (2, Some(c)) if c.kind == ClusterKind::NodeOffCE => ClusterKind::NodeOnCE,
            (_, Some(_)) => return Err(ContourError::NotGeneric("a cusp of U1 lies on the absolute conic".into())),
            (1, None) => ClusterKind::TransversalCE,
            (m, None) if m == input.k => ClusterKind::TangentialCE,
            _ => return Err(ContourError::NotGeneric(format!("resultant factor of multiplicity {m}"))),
        };
        let phi = common_root(&data.f, &data.g, &r)?;
        if let Some(node) = shared {
            if node.phi != phi {
                return Err(ContourError::NotGeneric("a node and a conic point share a projection".into()));
            }
        }
        for c in nodes {
            if c.field.modulus() != r && !coprime(&c.field.modulus(), &r) {
                return Err(ContourError::NotGeneric("resolvents overlap".into()));
            }
        }
        out.push(SpecialPointCluster::new(kind, &r, phi));
    }
    Ok(out)
}

/// Nodes and cusps of `U1`; nodes on the absolute conic are tagged `NodeOnCE`.
pub fn find_singular_clusters(input: &ContourInput) -> Result<Vec<SpecialPointCluster>, ContourError> {
    let data = chart_data(input)?;
    let sing = singular_clusters(input, &data)?;
    let ce = ce_clusters(input, &data, &sing)?;
    Ok(merge(sing, &ce).into_iter().filter(|c| !matches!(c.kind, ClusterKind::TransversalCE | ClusterKind::TangentialCE)).collect())
}

/// Points of `U1` on the absolute conic, excluding nodes of `U1`.
pub fn find_ce_clusters(input: &ContourInput) -> Result<Vec<SpecialPointCluster>, ContourError> {
    let data = chart_data(input)?;
    let sing = singular_clusters(input, &data)?;
    let ce = ce_clusters(input, &data, &sing)?;
    Ok(ce.into_iter().filter(|c| c.kind != ClusterKind::NodeOnCE).collect())
}

fn merge(sing: Vec<SpecialPointCluster>, ce: &[SpecialPointCluster]) -> Vec<SpecialPointCluster> {
    let mut all: Vec<SpecialPointCluster> = sing
        .into_iter()
        .map(|mut c| {
            if ce.iter().any(|e| e.kind == ClusterKind::NodeOnCE && e.field.modulus() == c.field.modulus()) {
                c.kind = ClusterKind::NodeOnCE;
                c.guessable = false;
            }
            c
        })
        .collect();
    all.extend(ce.iter().filter(|c| c.kind != ClusterKind::NodeOnCE).cloned());
    all.sort_by(|a, b| {
        a.kind
            .cmp(&b.kind)
            .then(a.size.cmp(&b.size))
            .then_with(|| a.resolvent.to_string().cmp(&b.resolvent.to_string()))
    });
    for (i, c) in all.iter_mut().enumerate() {
        c.id = i;
    }
    all
}

/// All clusters of an input in generic coordinates, numbered by kind and size.
pub fn find_clusters(input: &ContourInput) -> Result<Vec<SpecialPointCluster>, ContourError> {
    let data = chart_data(input)?;
    let sing = singular_clusters(input, &data)?;
    let ce = ce_clusters(input, &data, &sing)?;
    Ok(merge(sing, &ce))
}

/// Result of [`analyze`]: the input in generic coordinates and its clusters.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub input: ContourInput,
    /// `input.u(v) = original(M v)`.
    pub rotation: Rotation,
    pub clusters: Vec<SpecialPointCluster>,
}

/// Number of random rotations tried after the identity.
pub const GENERICITY_RETRIES: usize = 12;

/// Find generic coordinates and the clusters in them.
pub fn analyze(input: &ContourInput, seed: u64) -> Result<Analysis, ContourError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reason = String::new();
    for attempt in 0..=GENERICITY_RETRIES {
        let rotation = if attempt == 0 {
            Rotation::identity()
        } else {
            let mut draw = || Rational::new(rng.gen_range(-4i64..=4), rng.gen_range(1i64..=3));
            Rotation::cayley(&draw(), &draw(), &draw())
        };
        let rotated = if rotation.is_identity() {
            input.clone()
        } else {
            let u = rotation.apply(&input.u);
            ContourInput { u1: rotation.apply(&input.u1).normalized(), u, k: input.k, case: input.case }
        };
        match find_clusters(&rotated) {
            Ok(clusters) => return Ok(Analysis { input: rotated, rotation, clusters }),
            Err(ContourError::NotGeneric(r)) => reason = r,
            Err(e) => return Err(e),
        }
    }
    Err(ContourError::GenericityExhausted { attempts: GENERICITY_RETRIES + 1, reason })
}

/// Rotate into generic coordinates; the rotation maps results back.
pub fn ensure_generic(input: &ContourInput, seed: u64) -> Result<(ContourInput, Rotation), ContourError> {
    analyze(input, seed).map(|a| (a.input, a.rotation))
}

/// Local conductor formula for a node lying on the absolute conic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum NodeOnCeVariant {
    /// Crossing contribution only.
    Cross,
    /// Crossing contribution intersected with the maximal ideal.
    CrossAndMaximal,
}

/// One run of the reconstruction: `true` skips a cluster's contribution.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GuessVector {
    pub choices: BTreeMap<usize, bool>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub variants: BTreeMap<usize, NodeOnCeVariant>,
}

impl GuessVector {
    pub fn skips(&self, id: usize) -> bool {
        self.choices.get(&id).copied().unwrap_or(false)
    }

    pub fn variant(&self, id: usize) -> NodeOnCeVariant {
        self.variants.get(&id).copied().unwrap_or(NodeOnCeVariant::Cross)
    }

    /// Number of points declared images of isolated singularities.
    pub fn isolated_points(&self, clusters: &[SpecialPointCluster]) -> usize {
        clusters.iter().filter(|c| c.kind.is_isolated_candidate() && self.skips(c.id)).map(|c| c.size).sum()
    }
}

impl fmt::Display for GuessVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bits: String = self.choices.values().map(|&b| if b { '1' } else { '0' }).collect();
        let vars: String = self
            .variants
            .values()
            .map(|v| match v {
                NodeOnCeVariant::Cross => 'c',
                NodeOnCeVariant::CrossAndMaximal => 'm',
            })
            .collect();
        if vars.is_empty() {
            write!(f, "[{bits}]")
        } else {
            write!(f, "[{bits}|{vars}]")
        }
    }
}

/// Cartesian product of the binary choices, pruning guesses that declare
/// more than `isolated_bound` points to be isolated singularities.
pub fn enumerate_guesses(clusters: &[SpecialPointCluster], limit: usize, isolated_bound: usize) -> Result<Vec<GuessVector>, ContourError> {
    let guessable: Vec<usize> = clusters.iter().filter(|c| c.guessable).map(|c| c.id).collect();
    let on_ce: Vec<usize> = clusters.iter().filter(|c| c.kind == ClusterKind::NodeOnCE).map(|c| c.id).collect();
    let bits = guessable.len() + on_ce.len();
    if bits > limit {
        return Err(ContourError::TooManyGuesses { found: bits, bound: limit });
    }
    let mut out = Vec::new();
    for code in 0u64..(1u64 << bits) {
        let bit = |i: usize| code >> (bits - 1 - i) & 1 == 1;
        let mut g = GuessVector::default();
        for (i, &id) in guessable.iter().enumerate() {
            g.choices.insert(id, bit(i));
        }
        for (i, &id) in on_ce.iter().enumerate() {
            let v = if bit(guessable.len() + i) { NodeOnCeVariant::CrossAndMaximal } else { NodeOnCeVariant::Cross };
            g.variants.insert(id, v);
        }
        if g.isolated_points(clusters) <= isolated_bound {
            out.push(g);
        }
    }
    Ok(out)
}

/// Row of the `analyze` cluster table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterRow {
    pub id: usize,
    pub kind: ClusterKind,
    pub resolvent: String,
    pub size: usize,
    pub guessable: bool,
}

impl From<&SpecialPointCluster> for ClusterRow {
    fn from(c: &SpecialPointCluster) -> Self {
        ClusterRow { id: c.id, kind: c.kind, resolvent: c.resolvent.to_string(), size: c.size, guessable: c.guessable }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forward::{instance_from, random_instance, torus};

    fn p(s: &str) -> QPoly {
        Poly::parse(s, &Vars::xyz()).unwrap()
    }

    #[test]
    fn strip_nodal_and_cuspidal() {
        let v = p("x^8 + y^8 + z^8 + x*y^3*z^4");
        let a = absolute_form(&Vars::xyz());
        let u = &v * &a.pow(2);
        let inp = strip_absolute(&u).unwrap();
        assert_eq!((inp.k, inp.case), (2, CaseTag::Nodal));
        assert_eq!(inp.u1.total_degree(), Some(8));
        let w = p("x^6 - 3*y^5*z + z^6");
        let inp = strip_absolute(&(&w * &a.pow(3))).unwrap();
        assert_eq!((inp.k, inp.case), (3, CaseTag::Cuspidal));
        assert_eq!(inp.u1.total_degree(), Some(6));
        let bad = &p("x^10 + y^10 + z^10") * &a;
        assert_eq!(strip_absolute(&bad).unwrap_err(), ContourError::Multiplicity(1));
        assert!(matches!(strip_absolute(&p("x^3")), Err(ContourError::BadInput(_))));
    }

    #[test]
    fn cayley_is_orthogonal_and_preserves_a() {
        let r = Rotation::cayley(&Rational::new(1, 2), &Rational::from(-3), &Rational::new(2, 3));
        assert!(r.mul(&r.transpose()).is_identity());
        let a = absolute_form(&Vars::xyz());
        assert_eq!(r.apply(&a), a);
        let f = p("x^3 + 2*x*y*z - z^2*y");
        assert_eq!(r.transpose().apply(&r.apply(&f)), f);
    }

    #[test]
    fn rational_node_cluster() {
        // Random octic whose lowest term at (0:0:1) is a node with tangents x = y, x = -2y.
        let xyz = Vars::xyz();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut u1 = Poly::zero(&xyz);
        for m in crate::poly::monomials_of_degree(3, 8) {
            if m.exp(2) < 6 {
                u1 = &u1 + &Poly::monomial(&xyz, m, Rational::from(rng.gen_range(-3i64..=3)));
            }
        }
        u1 = &u1 + &p("(x^2 + x*y - 2*y^2)*z^6");
        let a = absolute_form(&xyz);
        let inp = strip_absolute(&(&u1 * &a.pow(2))).unwrap();
        let cl = find_singular_clusters(&inp).unwrap();
        let node = cl.iter().find(|c| c.size == 1 && c.kind == ClusterKind::NodeOffCE).expect("rational node");
        assert_eq!(node.resolvent, p("y"));
        let expect = Ideal::new(&xyz, vec![p("x"), p("y")]);
        assert!(node.radical_ideal().equals(&expect));
    }

    #[test]
    fn torus_clusters() {
        let inst = instance_from(torus(2, 1), [Rational::new(1, 2), Rational::from(1), Rational::from(5)]).unwrap();
        let inp = strip_absolute(&inst.contour).unwrap();
        assert_eq!((inp.k, inp.u1.total_degree()), (2, Some(8)));
        let an = analyze(&inp, 7).unwrap();
        assert!(!an.clusters.is_empty());
        let ce: usize = an.clusters.iter().filter(|c| !c.kind.is_isolated_candidate()).map(|c| c.size).sum();
        assert!(ce <= 16);
    }

    #[test]
    fn random_nodal_instance_clusters() {
        let inst = random_instance(1, CaseTag::Nodal).unwrap();
        let inp = strip_absolute(&inst.contour).unwrap();
        let an = analyze(&inp, 1).unwrap();
        // Cluster radical ideals have the right number of points.
        for c in &an.clusters {
            let rad = c.radical_ideal();
            let d = c.size as u32 + 1;
            let codim = crate::poly::count_monomials(3, d) - rad.graded_piece(d).unwrap().len();
            assert_eq!(codim, c.size, "cluster {} of kind {}", c.id, c.kind);
            let (x, y) = c.point();
            let f = an.input.u1.map_coeffs(|q| Nf::from_rational(c.field(), q.clone()));
            assert!(f.eval(&[x, y, Nf::one()]).is_zero());
        }
        // Intersection with the conic counts 2 * deg U1 points with multiplicity.
        let mult = |k: ClusterKind| match k {
            ClusterKind::TransversalCE => 1,
            ClusterKind::TangentialCE | ClusterKind::NodeOnCE => 2,
            _ => 0,
        };
        let total: usize = an.clusters.iter().map(|c| mult(c.kind) * c.size).sum();
        assert_eq!(total, 16);
    }

    #[test]
    fn guess_enumeration() {
        let r = UniPoly::new(vec![Rational::from(1), Rational::zero(), Rational::one()]);
        let mk = |kind, id| {
            let mut c = SpecialPointCluster::new(kind, &r, UniPoly::zero());
            c.id = id;
            c
        };
        let cl = vec![mk(ClusterKind::NodeOffCE, 0), mk(ClusterKind::TransversalCE, 1), mk(ClusterKind::TangentialCE, 2)];
        assert_eq!(enumerate_guesses(&cl, 16, 4).unwrap().len(), 8);
        assert_eq!(enumerate_guesses(&cl, 16, 1).unwrap().len(), 4);
        assert!(matches!(enumerate_guesses(&cl, 2, 4), Err(ContourError::TooManyGuesses { .. })));
        assert_eq!(enumerate_guesses(&[], 16, 4).unwrap(), vec![GuessVector::default()]);
        let with_on = vec![mk(ClusterKind::NodeOnCE, 0)];
        let gs = enumerate_guesses(&with_on, 16, 4).unwrap();
        assert_eq!(gs.len(), 2);
        assert!(gs.iter().all(|g| g.choices.is_empty()));
    }
}
