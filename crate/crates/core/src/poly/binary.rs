//! Squarefree decomposition and factorization of polynomials that are
//! univariate or binary forms, via the integer univariate toolkit.

use num_traits::{One, Zero};

use super::factor::factor_zpoly;
use super::intpoly::ZPoly;
use super::monomial::Monomial;
use super::polynomial::Poly;
use super::univariate::UniPoly;
use super::PolyError;
use crate::scalar::Rational;

/// Degree limit of [`factor_univariate`].
pub const FACTOR_DEGREE_LIMIT: usize = 20;

/// `unit * prod(f^m)` with pairwise coprime squarefree primitive factors.
#[derive(Clone, Debug, PartialEq)]
pub struct SquarefreeDecomposition {
    pub unit: Rational,
    pub factors: Vec<(Poly<Rational>, u32)>,
}

impl SquarefreeDecomposition {
    pub fn expand(&self, like: &Poly<Rational>) -> Poly<Rational> {
        let mut acc = Poly::constant(like.vars(), self.unit.clone());
        for (f, m) in &self.factors {
            acc = &acc * &f.pow(*m);
        }
        acc
    }
}

/// How a polynomial is read as univariate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnivariateView {
    /// Only this variable occurs.
    Single(usize),
    /// Homogeneous in `(affine, chart)`; dehomogenized at `chart = 1`.
    Binary { affine: usize, chart: usize, degree: u32 },
}

/// Decide how to read `p` as univariate.
pub fn univariate_view(p: &Poly<Rational>) -> Result<UnivariateView, PolyError> {
    if p.is_zero() {
        return Err(PolyError::Degenerate("zero polynomial".into()));
    }
    let used: Vec<usize> = (0..p.nvars()).filter(|&i| !p.is_free_of(i)).collect();
    match used.as_slice() {
        [] => Ok(UnivariateView::Single(0)),
        [v] => Ok(UnivariateView::Single(*v)),
        [a, b] if p.is_homogeneous() => Ok(UnivariateView::Binary {
            affine: *a,
            chart: *b,
            degree: p.total_degree().unwrap(),
        }),
        _ => Err(PolyError::Degenerate("not univariate and not a binary form".into())),
    }
}

/// Univariate image of `p` under `view`.
pub fn to_uni(p: &Poly<Rational>, view: UnivariateView) -> UniPoly<Rational> {
    let v = match view {
        UnivariateView::Single(v) => v,
        UnivariateView::Binary { affine, .. } => affine,
    };
    let deg = p.degree_in(v).unwrap_or(0) as usize;
    let mut c = vec![Rational::zero(); deg + 1];
    for (m, k) in p.terms() {
        c[m.exp(v) as usize] += k.clone();
    }
    UniPoly::new(c)
}

/// Inverse of [`to_uni`]; binary forms are rehomogenized to the degree of `u`.
pub fn from_uni(u: &UniPoly<Rational>, view: UnivariateView, like: &Poly<Rational>) -> Poly<Rational> {
    let vars = like.vars();
    let deg = u.degree().unwrap_or(0) as u32;
    let terms = u.coeffs().iter().enumerate().map(|(i, c)| {
        let mut m = Monomial::one();
        match view {
            UnivariateView::Single(v) => m.set_exp(v, i as u32),
            UnivariateView::Binary { affine, chart, .. } => {
                m.set_exp(affine, i as u32);
                m.set_exp(chart, deg - i as u32);
            }
        }
        (m, c.clone())
    });
    Poly::from_terms(vars, terms.collect::<Vec<_>>())
}

fn chart_power(view: UnivariateView, uni_degree: usize) -> Option<(usize, u32)> {
    match view {
        UnivariateView::Binary { chart, degree, .. } if degree as usize > uni_degree => {
            Some((chart, degree - uni_degree as u32))
        }
        _ => None,
    }
}

fn finish(p: &Poly<Rational>, mut factors: Vec<(Poly<Rational>, u32)>) -> SquarefreeDecomposition {
    factors.sort_by(|a, b| {
        a.1.cmp(&b.1)
            .then(a.0.total_degree().cmp(&b.0.total_degree()))
            .then_with(|| a.0.to_string().cmp(&b.0.to_string()))
    });
    let mut prod = Poly::one(p.vars());
    for (f, m) in &factors {
        prod = &prod * &f.pow(*m);
    }
    let unit = p.leading_coeff() / prod.leading_coeff();
    SquarefreeDecomposition { unit, factors }
}

fn uni_to_z(u: &UniPoly<Rational>) -> ZPoly {
    ZPoly::from_rational(u)
}

/// Squarefree decomposition of a univariate polynomial or binary form.
pub fn squarefree(p: &Poly<Rational>) -> Result<SquarefreeDecomposition, PolyError> {
    let view = univariate_view(p)?;
    let u = to_uni(p, view);
    let z = uni_to_z(&u);
    let mut factors: Vec<(Poly<Rational>, u32)> = z
        .squarefree()
        .into_iter()
        .map(|(f, m)| (from_uni(&f.to_rational(), view, p), m))
        .collect();
    if let Some((chart, k)) = chart_power(view, u.degree().unwrap_or(0)) {
        let zf = Poly::var(p.vars(), chart);
        match factors.iter_mut().find(|(_, m)| *m == k) {
            Some(entry) => entry.0 = &entry.0 * &zf,
            None => factors.push((zf, k)),
        }
    }
    Ok(finish(p, factors))
}

/// Irreducible factorization over the rationals of a univariate polynomial
/// or binary form of degree at most [`FACTOR_DEGREE_LIMIT`].
pub fn factor_univariate(p: &Poly<Rational>) -> Result<SquarefreeDecomposition, PolyError> {
    factor_univariate_bounded(p, FACTOR_DEGREE_LIMIT)
}

/// As [`factor_univariate`] but with a caller-chosen bound that applies to
/// each squarefree part separately.
pub fn factor_univariate_bounded(p: &Poly<Rational>, limit: usize) -> Result<SquarefreeDecomposition, PolyError> {
    let view = univariate_view(p)?;
    let u = to_uni(p, view);
    let z = uni_to_z(&u);
    let mut factors = Vec::new();
    for (part, m) in z.squarefree() {
        let d = part.degree().unwrap_or(0);
        if d > limit {
            return Err(PolyError::DegreeBound(format!("squarefree part of degree {d} exceeds {limit}")));
        }
        for f in factor_zpoly(&part)? {
            factors.push((from_uni(&f.0.to_rational(), view, p), m * f.1));
        }
    }
    if let Some((chart, k)) = chart_power(view, u.degree().unwrap_or(0)) {
        factors.push((Poly::var(p.vars(), chart), k));
    }
    Ok(finish(p, factors))
}

impl SquarefreeDecomposition {
    /// Product of the factors with multiplicity exactly `m`.
    pub fn part(&self, m: u32, like: &Poly<Rational>) -> Poly<Rational> {
        let mut acc = Poly::constant(like.vars(), Rational::one());
        for (f, k) in &self.factors {
            if *k == m {
                acc = &acc * f;
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Vars;

    fn q(s: &str) -> Poly<Rational> {
        Poly::parse(s, &Vars::xyz()).unwrap()
    }

    #[test]
    fn binary_form_with_root_at_infinity() {
        let p = q("y^2*z^3*(y+z)");
        let d = squarefree(&p).unwrap();
        assert_eq!(d.expand(&p), p);
        let mut got: Vec<(String, u32)> = d.factors.iter().map(|(f, m)| (f.to_string(), *m)).collect();
        got.sort();
        assert_eq!(got, vec![("y".into(), 2), ("y + z".into(), 1), ("z".into(), 3)]);
    }

    #[test]
    fn squarefree_input_is_single_factor() {
        let p = q("y^3 - y - 1");
        let d = squarefree(&p).unwrap();
        assert_eq!(d.factors, vec![(p.clone(), 1)]);
    }

    #[test]
    fn factors_univariate() {
        let p = q("(x^2-2)^2*(x^3-x-1)");
        let d = factor_univariate(&p).unwrap();
        assert_eq!(d.factors, vec![(q("x^3 - x - 1"), 1), (q("x^2 - 2"), 2)]);
        let d = factor_univariate(&q("x^2 - 1")).unwrap();
        assert_eq!(d.factors.len(), 2);
        assert_eq!(factor_univariate(&q("x^2 + 1")).unwrap().factors, vec![(q("x^2 + 1"), 1)]);
    }

    #[test]
    fn rejects_genuinely_multivariate() {
        assert!(squarefree(&q("x*y + z")).is_err());
        assert!(factor_univariate(&q("x^21 + 1")).is_err());
    }
}
