use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;

use num_traits::One;

use super::groebner::groebner;
use super::order::TermOrder;
use crate::poly::{monomials_of_degree, Monomial, Poly, Vars};
use crate::scalar::{Rational, Scalar};
use crate::QPoly;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IdealError {
    #[error("ideals live in different rings: {0}")]
    VarMismatch(String),
    #[error("operation needs homogeneous generators")]
    NotHomogeneous,
    #[error("unknown variable '{0}'")]
    UnknownVariable(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

/// Finitely generated ideal of a polynomial ring over the rationals with a
/// lazily computed reduced Gröbner basis.
///
/// The basis is computed at most once and may be shared across threads.
#[derive(Clone)]
pub struct Ideal {
    vars: Vars,
    gens: Vec<QPoly>,
    order: TermOrder,
    basis: OnceLock<Vec<QPoly>>,
}

impl Ideal {
    /// Grevlex ideal; zero generators are dropped.
    pub fn new(vars: &Vars, gens: impl IntoIterator<Item = QPoly>) -> Self {
        Self::with_order(vars, gens, TermOrder::Grevlex)
    }

    pub fn with_order(vars: &Vars, gens: impl IntoIterator<Item = QPoly>, order: TermOrder) -> Self {
        let gens: Vec<QPoly> = gens
            .into_iter()
            .filter(|g| !g.is_zero())
            .map(|g| {
                assert_eq!(g.vars(), vars, "generator outside the ring");
                g.normalized()
            })
            .collect();
        Ideal { vars: vars.clone(), gens, order, basis: OnceLock::new() }
    }

    /// Trust `basis` to be the reduced basis of the ideal it generates.
    fn from_reduced_basis(vars: &Vars, basis: Vec<QPoly>, order: TermOrder) -> Self {
        let cell = OnceLock::new();
        let _ = cell.set(basis.clone());
        Ideal { vars: vars.clone(), gens: basis, order, basis: cell }
    }

    pub fn principal(p: QPoly) -> Self {
        let vars = p.vars().clone();
        Self::new(&vars, [p])
    }

    pub fn unit(vars: &Vars) -> Self {
        Self::new(vars, [Poly::one(vars)])
    }

    pub fn zero(vars: &Vars) -> Self {
        Self::new(vars, [])
    }

    /// The ideal generated by all variables.
    pub fn irrelevant(vars: &Vars) -> Self {
        Self::new(vars, (0..vars.len()).map(|i| Poly::var(vars, i)))
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn generators(&self) -> &[QPoly] {
        &self.gens
    }

    pub fn order(&self) -> TermOrder {
        self.order
    }

    pub fn is_homogeneous(&self) -> bool {
        self.gens.iter().all(|g| g.is_homogeneous())
    }

    /// Reduced, monic Gröbner basis sorted by descending leading monomial.
    pub fn groebner(&self) -> &[QPoly] {
        self.basis.get_or_init(|| groebner(&self.gens, &self.vars, self.order))
    }

    fn leading_monomial(&self, p: &QPoly) -> Monomial {
        self.order.leading(p.terms()).expect("nonzero").0
    }

    pub fn is_unit(&self) -> bool {
        self.groebner().first().is_some_and(|g| g.is_constant())
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    /// Remainder of `p` under division by the reduced basis.
    pub fn normal_form(&self, p: &QPoly) -> QPoly {
        assert_eq!(p.vars(), &self.vars, "polynomial outside the ring");
        let basis = self.groebner();
        let sorted: Vec<(Monomial, Vec<(Monomial, Rational)>)> = basis
            .iter()
            .map(|g| {
                let mut t = g.terms().to_vec();
                t.sort_by(|a, b| self.order.cmp(&b.0, &a.0));
                (t[0].0, t)
            })
            .collect();
        let mut rem: Vec<(Monomial, Rational)> = p.terms().to_vec();
        rem.sort_by(|a, b| self.order.cmp(&b.0, &a.0));
        let mut out: Vec<(Monomial, Rational)> = Vec::new();
        let mut start = 0;
        while start < rem.len() {
            let m = rem[start].0;
            match sorted.iter().find(|(lm, _)| lm.divides(&m)) {
                None => {
                    out.push(rem[start].clone());
                    start += 1;
                }
                Some((lm, g)) => {
                    // Basis elements are monic.
                    let c = rem[start].1.clone();
                    rem = sub_shifted(&rem[start..], g, &lm.quotient_of(&m), &c, self.order);
                    start = 0;
                }
            }
        }
        Poly::from_terms(&self.vars, out)
    }

    pub fn contains(&self, p: &QPoly) -> bool {
        self.normal_form(p).is_zero()
    }

    pub fn contains_ideal(&self, other: &Ideal) -> bool {
        other.gens.iter().all(|g| self.contains(g))
    }

    /// Equality as ideals, by mutual membership of generators.
    pub fn equals(&self, other: &Ideal) -> bool {
        self.vars == other.vars && self.contains_ideal(other) && other.contains_ideal(self)
    }

    fn check_ring(&self, other: &Ideal) -> Result<(), IdealError> {
        if self.vars != other.vars {
            return Err(IdealError::VarMismatch(format!("{:?} vs {:?}", self.vars, other.vars)));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal, IdealError> {
        self.check_ring(other)?;
        Ok(Ideal::with_order(&self.vars, self.gens.iter().chain(&other.gens).cloned(), self.order))
    }

    pub fn product(&self, other: &Ideal) -> Result<Ideal, IdealError> {
        self.check_ring(other)?;
        let gens: Vec<QPoly> = self.gens.iter().flat_map(|a| other.gens.iter().map(move |b| a * b)).collect();
        Ok(Ideal::with_order(&self.vars, gens, self.order))
    }

    pub fn power(&self, n: u32) -> Result<Ideal, IdealError> {
        if n < 1 {
            return Err(IdealError::Invalid("power needs n >= 1".into()));
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.product(self)?;
            acc = acc.pruned();
        }
        Ok(acc)
    }

    /// Drop duplicate generators up to scalars.
    fn pruned(mut self) -> Ideal {
        let mut seen: Vec<QPoly> = Vec::new();
        for g in self.gens.drain(..) {
            if !seen.contains(&g) {
                seen.push(g);
            }
        }
        Ideal::with_order(&self.vars, seen, self.order)
    }

    /// `I ∩ J` by eliminating `t` from `t I + (1 - t) J`.
    pub fn intersect(&self, other: &Ideal) -> Result<Ideal, IdealError> {
        self.check_ring(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Ideal::zero(&self.vars));
        }
        let big = self.vars.extended(&[fresh_name(&self.vars)], true);
        let t = Poly::var(&big, 0);
        let one_minus_t = &Poly::one(&big) - &t;
        let mut gens = Vec::new();
        for g in &self.gens {
            gens.push(&t * &g.embed(&big).expect("subring"));
        }
        for g in &other.gens {
            gens.push(&one_minus_t * &g.embed(&big).expect("subring"));
        }
        let basis = groebner(&gens, &big, TermOrder::Elimination(1));
        let kept: Vec<QPoly> = basis
            .into_iter()
            .filter(|g| g.is_free_of(0))
            .map(|g| g.restrict(&self.vars).expect("free of t"))
            .collect();
        Ok(self.rebuild(kept))
    }

    /// Wrap generators in this ring and order, reusing them as the basis
    /// when they came from a compatible elimination.
    fn rebuild(&self, gens: Vec<QPoly>) -> Ideal {
        if self.order == TermOrder::Grevlex {
            let mut gens = gens;
            gens.sort_by(|a, b| self.order.cmp(&self.leading_monomial(b), &self.leading_monomial(a)));
            Ideal::from_reduced_basis(&self.vars, gens, self.order)
        } else {
            Ideal::with_order(&self.vars, gens, self.order)
        }
    }

    /// `I : f`.
    pub fn quotient_poly(&self, f: &QPoly) -> Result<Ideal, IdealError> {
        if f.is_zero() {
            return Ok(Ideal::unit(&self.vars));
        }
        let inter = self.intersect(&Ideal::principal(f.clone()))?;
        let gens: Vec<QPoly> = inter
            .groebner()
            .iter()
            .map(|g| g.div_exact(f).expect("elements of I ∩ <f> are multiples of f"))
            .collect();
        Ok(Ideal::with_order(&self.vars, gens, self.order))
    }

    /// `I : J`, the intersection of `I : g` over the generators of `J`.
    pub fn quotient(&self, other: &Ideal) -> Result<Ideal, IdealError> {
        self.check_ring(other)?;
        let mut acc: Option<Ideal> = None;
        for g in &other.gens {
            let q = self.quotient_poly(g)?;
            acc = Some(match acc {
                None => q,
                Some(a) => a.intersect(&q)?,
            });
        }
        Ok(acc.unwrap_or_else(|| Ideal::unit(&self.vars)))
    }

    /// `I : J^∞` by iterated quotients until stable.
    pub fn saturate(&self, other: &Ideal) -> Result<Ideal, IdealError> {
        let mut cur = self.clone();
        loop {
            let next = cur.quotient(other)?;
            if cur.contains_ideal(&next) {
                return Ok(cur);
            }
            cur = next;
        }
    }

    /// `I ∩ Q[remaining variables]`, returned in the smaller ring.
    pub fn eliminate(&self, names: &[&str]) -> Result<Ideal, IdealError> {
        let mut front = Vec::new();
        for n in names {
            front.push(self.vars.index(n).map_err(|_| IdealError::UnknownVariable(n.to_string()))?);
        }
        let rest: Vec<usize> = (0..self.vars.len()).filter(|i| !front.contains(i)).collect();
        let all_names = self.vars.names();
        let perm_names: Vec<&str> = front.iter().chain(&rest).map(|&i| all_names[i].as_str()).collect();
        let perm = Vars::new(&perm_names);
        let sub = Vars::new(&rest.iter().map(|&i| all_names[i].as_str()).collect::<Vec<_>>());
        let gens: Vec<QPoly> = self.gens.iter().map(|g| g.embed(&perm).expect("same names")).collect();
        let k = front.len();
        let basis = groebner(&gens, &perm, TermOrder::Elimination(k));
        let kept: Vec<QPoly> = basis
            .into_iter()
            .filter(|g| (0..k).all(|i| g.is_free_of(i)))
            .map(|g| g.restrict(&sub).expect("eliminated variables absent"))
            .collect();
        Ok(Ideal::with_order(&sub, kept, TermOrder::Grevlex))
    }

    fn standard(&self, m: &Monomial) -> bool {
        let basis = self.groebner();
        !basis.iter().any(|g| self.leading_monomial(g).divides(m))
    }

    /// `dim (S/I)_d`; needs homogeneous generators.
    pub fn quotient_dimension(&self, d: u32) -> Result<usize, IdealError> {
        if !self.is_homogeneous() {
            return Err(IdealError::NotHomogeneous);
        }
        Ok(monomials_of_degree(self.vars.len(), d).iter().filter(|m| self.standard(m)).count())
    }

    /// Basis of the degree-`d` component, one element per non-standard
    /// monomial `m`, namely `m - NF(m)`; sorted by descending `m`.
    pub fn graded_piece(&self, d: u32) -> Result<Vec<QPoly>, IdealError> {
        if !self.is_homogeneous() {
            return Err(IdealError::NotHomogeneous);
        }
        let mut out = Vec::new();
        for m in monomials_of_degree(self.vars.len(), d) {
            if self.standard(&m) {
                continue;
            }
            let mono = Poly::monomial(&self.vars, m, Rational::one());
            out.push(&mono - &self.normal_form(&mono));
        }
        out.sort_by(|a, b| self.order.cmp(&self.leading_monomial(b), &self.leading_monomial(a)));
        Ok(out)
    }
}

/// `p - c * m * g` for terms sorted descending in `order`.
fn sub_shifted<C: Scalar>(p: &[(Monomial, C)], g: &[(Monomial, C)], m: &Monomial, c: &C, order: TermOrder) -> Vec<(Monomial, C)> {
    let mut out = Vec::with_capacity(p.len() + g.len());
    let (mut i, mut j) = (0, 0);
    while i < p.len() && j < g.len() {
        let gm = g[j].0.mul(m);
        match order.cmp(&p[i].0, &gm) {
            Ordering::Greater => {
                out.push(p[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push((gm, -g[j].1.mul_ref(c)));
                j += 1;
            }
            Ordering::Equal => {
                let mut v = p[i].1.clone();
                v.sub_mul_assign(&g[j].1, c);
                if !v.is_zero() {
                    out.push((gm, v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&p[i..]);
    out.extend(g[j..].iter().map(|(mm, cc)| (mm.mul(m), -cc.mul_ref(c))));
    out
}

fn fresh_name(vars: &Vars) -> String {
    (0..)
        .map(|k| format!("t{k}"))
        .find(|n| vars.index(n).is_err())
        .expect("some name is free")
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ">")
    }
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Vars {
        Vars::xyzw()
    }

    fn q(s: &str) -> QPoly {
        Poly::parse(s, &ring()).unwrap()
    }

    fn ideal(gens: &[&str]) -> Ideal {
        Ideal::new(&ring(), gens.iter().map(|s| q(s)))
    }

    #[test]
    fn reduced_basis_of_linear_forms() {
        let i = ideal(&["x", "x + y"]);
        assert_eq!(i.groebner(), &[q("x"), q("y")]);
    }

    #[test]
    fn principal_basis_is_monic_generator() {
        let i = ideal(&["3*x^2 - 6*y*z"]);
        assert_eq!(i.groebner(), &[q("x^2 - 2*y*z")]);
    }

    #[test]
    fn normal_forms() {
        let i = ideal(&["x^2 - y*z", "x*y - z^2"]);
        for g in i.generators() {
            assert!(i.normal_form(g).is_zero());
        }
        let m = Ideal::irrelevant(&ring());
        assert_eq!(m.normal_form(&Poly::one(&ring())), Poly::one(&ring()));
    }

    #[test]
    fn intersection_of_coordinate_ideals() {
        let i = ideal(&["x"]).intersect(&ideal(&["y"])).unwrap();
        assert!(i.equals(&ideal(&["x*y"])));
        let a = ideal(&["x^2", "y"]);
        assert!(a.intersect(&a).unwrap().equals(&a));
    }

    #[test]
    fn intersection_of_two_points_in_the_plane() {
        let v = Vars::xyz();
        let p = |s: &[&str]| Ideal::new(&v, s.iter().map(|t| Poly::parse(t, &v).unwrap()));
        let i = p(&["y", "z"]).intersect(&p(&["x", "z"])).unwrap();
        let lin = i.graded_piece(1).unwrap();
        assert_eq!(lin, vec![Poly::parse("z", &v).unwrap()]);
    }

    #[test]
    fn saturation_and_quotient() {
        let s = ideal(&["x^2*y"]).saturate(&ideal(&["x"])).unwrap();
        assert!(s.equals(&ideal(&["y"])));
        let i = ideal(&["x^2", "y^3"]);
        let unit = Ideal::unit(&ring());
        assert!(i.quotient(&unit).unwrap().equals(&i));
    }

    #[test]
    fn elimination() {
        let e = ideal(&["x - w", "y - w"]).eliminate(&["w"]).unwrap();
        assert_eq!(e.vars().names(), &["x", "y", "z"]);
        assert_eq!(e.groebner(), &[Poly::parse("x - y", e.vars()).unwrap()]);
    }

    #[test]
    fn graded_pieces() {
        let i = ideal(&["x^2", "x*y"]);
        assert_eq!(i.graded_piece(2).unwrap().len(), 2);
        // x^2 * {x,y,z,w} and x*y * {y,z,w}: x^2*y is shared.
        assert_eq!(i.graded_piece(3).unwrap().len(), 7);
        let v = Vars::xyz();
        let j = Ideal::new(&v, ["x^2", "x*y"].iter().map(|s| Poly::parse(s, &v).unwrap()));
        assert_eq!(j.graded_piece(3).unwrap().len(), 5);
    }

    #[test]
    fn powers_and_sums() {
        let v = Vars::xyz();
        let m = Ideal::new(&v, [Poly::parse("x", &v).unwrap(), Poly::parse("y", &v).unwrap()]);
        let sq = m.power(2).unwrap();
        let expected = Ideal::new(&v, ["x^2", "x*y", "y^2"].iter().map(|s| Poly::parse(s, &v).unwrap()));
        assert!(sq.equals(&expected));
        assert!(m.sum(&Ideal::zero(&v)).unwrap().equals(&m));
        assert!(m.power(0).is_err());
    }

    #[test]
    fn twisted_cubic() {
        let v = Vars::xyzw();
        let i = Ideal::new(&v, ["x*z - y^2", "y*w - z^2", "x*w - y*z"].iter().map(|s| Poly::parse(s, &v).unwrap()));
        assert_eq!(i.groebner().len(), 3);
        assert_eq!(i.quotient_dimension(3).unwrap(), 10);
        assert!(i.contains(&q("x*z*w - y^2*w")));
    }
}
