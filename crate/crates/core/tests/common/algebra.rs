//! Sample builders and checks for the algebra-core invariants, shared by
//! the property suite and the acceptance gate.

use darboux::ideals::{Ideal, TermOrder};
use darboux::poly::{factor_univariate, monomials_of_degree, resultant, squarefree, Monomial};
use darboux::{Poly, QPoly, Rational, Vars};
use num_traits::Zero;

use super::reference;

pub type Check = Result<(), String>;

pub fn dense(p: &QPoly) -> Vec<Rational> {
    let deg = p.degree_in(0).unwrap_or(0) as usize;
    (0..=deg).map(|k| p.coeff(&Monomial::var(0, k as u32))).collect()
}

pub fn from_dense(c: &[i64], vars: &Vars) -> QPoly {
    Poly::from_terms(vars, c.iter().enumerate().map(|(k, v)| (Monomial::var(0, k as u32), Rational::from(*v))))
}

/// Homogeneous form in x, y, z of degree `d`; coefficients are cycled.
pub fn form(d: u32, coeffs: &[i64]) -> QPoly {
    let vars = Vars::xyz();
    Poly::from_terms(&vars, monomials_of_degree(3, d).into_iter().zip(coeffs.iter().cycle()).map(|(m, c)| (m, Rational::from(*c))))
}

pub fn ideal_sample(gens: &[(u32, Vec<i64>)]) -> Vec<QPoly> {
    gens.iter().map(|(d, c)| form(*d, c)).filter(|p| !p.is_zero()).collect()
}

/// Sum over k of (a + b y + c z) w^k in y, z, w.
pub fn build_yzw(c: &[(i64, i64, i64)]) -> QPoly {
    let vars = Vars::new(&["y", "z", "w"]);
    let mut terms = Vec::new();
    for (k, (a, b, cc)) in c.iter().enumerate() {
        let k = k as u32;
        terms.push((Monomial::from_exps(&[0, 0, k]), Rational::from(*a)));
        terms.push((Monomial::from_exps(&[1, 0, k]), Rational::from(*b)));
        terms.push((Monomial::from_exps(&[0, 1, k]), Rational::from(*cc)));
    }
    Poly::from_terms(&vars, terms)
}

/// Product of powers of small factors, total degree at most 16.
pub fn univariate_product(fs: &[(Vec<i64>, u32)]) -> QPoly {
    let vars = Vars::new(&["x"]);
    let mut acc = Poly::one(&vars);
    let mut deg = 0;
    for (c, m) in fs {
        let f = from_dense(c, &vars);
        let d = f.degree_in(0).unwrap_or(0);
        if f.is_zero() || d == 0 || deg + d * m > 16 {
            continue;
        }
        deg += d * m;
        acc = &acc * &f.pow(*m);
    }
    if deg == 0 {
        from_dense(&[1, 1], &vars)
    } else {
        acc
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Every S-polynomial of the computed basis, and every generator, reduces
/// to zero under plain multivariate division.
pub fn check_s_polynomials(gens: &[QPoly]) -> Check {
    let basis = Ideal::new(&Vars::xyz(), gens.to_vec()).groebner().to_vec();
    let order = TermOrder::Grevlex;
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let s = reference::s_polynomial(&basis[i], &basis[j], order);
            ensure(reference::remainder(&s, &basis, order).is_zero(), || format!("S({}, {}) does not reduce", basis[i], basis[j]))?;
        }
    }
    for g in gens {
        ensure(reference::remainder(g, &basis, order).is_zero(), || format!("generator {g} not reduced to zero"))?;
    }
    Ok(())
}

/// `None` when a leading coefficient vanishes at the point.
pub fn check_resultant(p: &[(i64, i64, i64)], q: &[(i64, i64, i64)], y0: i64, z0: i64) -> Option<Check> {
    let (fp, fq) = (build_yzw(p), build_yzw(q));
    let (dp, dq) = (fp.degree_in(2).unwrap_or(0), fq.degree_in(2).unwrap_or(0));
    if dp == 0 || dq == 0 {
        return None;
    }
    let pt = [Rational::from(y0), Rational::from(z0), Rational::zero()];
    let spec = |f: &QPoly| -> Vec<Rational> { reference::trim(f.coefficients_in(2).iter().map(|c| c.eval(&pt)).collect()) };
    let (sp, sq) = (spec(&fp), spec(&fq));
    if sp.len() != dp as usize + 1 || sq.len() != dq as usize + 1 {
        return None;
    }
    let lhs = match resultant(&fp, &fq, 2) {
        Ok(r) => r.eval(&pt),
        Err(e) => return Some(Err(e.to_string())),
    };
    let rhs = reference::sylvester(&sp, &sq);
    Some(ensure(lhs == rhs, || format!("resultant {lhs} != {rhs} at ({y0}, {z0})")))
}

pub fn check_squarefree(p: &QPoly) -> Check {
    let d = squarefree(p).map_err(|e| e.to_string())?;
    ensure(d.expand(p) == *p, || format!("squarefree parts of {p} do not multiply back"))?;
    for (i, (f, _)) in d.factors.iter().enumerate() {
        let fd = dense(f);
        ensure(reference::gcd_degree(&fd, &reference::derivative(&fd)) == 0, || format!("{f} is not squarefree"))?;
        for (g, _) in &d.factors[i + 1..] {
            ensure(reference::gcd_degree(&fd, &dense(g)) == 0, || format!("{f} and {g} share a factor"))?;
        }
    }
    Ok(())
}

pub fn check_factorization(p: &QPoly) -> Check {
    let d = factor_univariate(p).map_err(|e| e.to_string())?;
    ensure(d.expand(p) == *p, || format!("factors of {p} do not multiply back"))?;
    for (f, _) in &d.factors {
        let fd = dense(f);
        ensure(reference::gcd_degree(&fd, &reference::derivative(&fd)) == 0, || format!("{f} is not squarefree"))?;
        if fd.len() > 2 {
            let (_, prim) = f.primitive();
            ensure(!reference::has_rational_root(&dense(&prim)), || format!("{f} has a rational root"))?;
        }
    }
    Ok(())
}
