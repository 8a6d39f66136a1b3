//! Small reference implementations used as independent oracles.

use darboux::ideals::TermOrder;
use darboux::{Poly, QPoly, Rational, Scalar};
use num_traits::{One, Zero};

/// Multivariate division by a list, returning the remainder.
pub fn remainder(p: &QPoly, divisors: &[QPoly], order: TermOrder) -> QPoly {
    let mut p = p.clone();
    let mut r = Poly::zero(p.vars());
    while let Some((m, c)) = order.leading(p.terms()).cloned() {
        let hit = divisors.iter().find_map(|d| {
            let (dm, dc) = order.leading(d.terms())?;
            dm.divides(&m).then(|| (d, dm.quotient_of(&m), c.clone() / dc.clone()))
        });
        match hit {
            Some((d, q, s)) => p = &p - &d.mul_term(&q, &s),
            None => {
                let t = Poly::monomial(p.vars(), m, c);
                r = &r + &t;
                p = &p - &t;
            }
        }
    }
    r
}

pub fn s_polynomial(f: &QPoly, g: &QPoly, order: TermOrder) -> QPoly {
    let (fm, fc) = order.leading(f.terms()).unwrap().clone();
    let (gm, gc) = order.leading(g.terms()).unwrap().clone();
    let l = fm.lcm(&gm);
    &f.mul_term(&fm.quotient_of(&l), &fc.inv()) - &g.mul_term(&gm.quotient_of(&l), &gc.inv())
}

/// Determinant by Gaussian elimination over the rationals.
pub fn det(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut d = Rational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if piv != col {
            m.swap(piv, col);
            d = -d;
        }
        d *= m[col][col].clone();
        for r in col + 1..n {
            let f = m[r][col].clone() / m[col][col].clone();
            for c in col..n {
                let v = m[col][c].clone() * f.clone();
                m[r][c] -= v;
            }
        }
    }
    d
}

/// Sylvester resultant of coefficient lists, lowest degree first.
pub fn sylvester(p: &[Rational], q: &[Rational]) -> Rational {
    let (m, n) = (p.len() - 1, q.len() - 1);
    let size = m + n;
    if size == 0 {
        return Rational::one();
    }
    let mut rows = Vec::new();
    for i in 0..n {
        let mut r = vec![Rational::zero(); size];
        for (j, c) in p.iter().rev().enumerate() {
            r[i + j] = c.clone();
        }
        rows.push(r);
    }
    for i in 0..m {
        let mut r = vec![Rational::zero(); size];
        for (j, c) in q.iter().rev().enumerate() {
            r[i + j] = c.clone();
        }
        rows.push(r);
    }
    det(rows)
}

/// Dense univariate helpers, coefficients lowest degree first.
pub fn trim(mut a: Vec<Rational>) -> Vec<Rational> {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

pub fn rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut a = trim(a.to_vec());
    let b = trim(b.to_vec());
    while a.len() >= b.len() && !a.is_empty() {
        let f = a.last().unwrap().clone() / b.last().unwrap().clone();
        let shift = a.len() - b.len();
        for (i, c) in b.iter().enumerate() {
            let v = c.clone() * f.clone();
            a[i + shift] -= v;
        }
        a = trim(a);
    }
    a
}

pub fn gcd_degree(a: &[Rational], b: &[Rational]) -> usize {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = rem(&a, &b);
        a = b;
        b = r;
    }
    a.len().saturating_sub(1)
}

pub fn derivative(a: &[Rational]) -> Vec<Rational> {
    a.iter().enumerate().skip(1).map(|(i, c)| c.clone() * Rational::from(i as i64)).collect()
}

pub fn eval(a: &[Rational], x: &Rational) -> Rational {
    a.iter().rev().fold(Rational::zero(), |acc, c| acc * x.clone() + c.clone())
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            out.push(n / d);
        }
        d += 1;
    }
    out
}

/// Rational roots by the rational root theorem; `a` has integer coefficients.
pub fn has_rational_root(a: &[Rational]) -> bool {
    let a = trim(a.to_vec());
    if a.len() <= 1 {
        return false;
    }
    if a[0].is_zero() {
        return true;
    }
    let to_u = |c: &Rational| -> u64 { c.numer().clone().abs().to_u64().expect("small coefficients") };
    for p in divisors(to_u(&a[0])) {
        for q in divisors(to_u(a.last().unwrap())) {
            for s in [1i64, -1] {
                let x = Rational::from(s) * Rational::from(p as i64) / Rational::from(q as i64);
                if eval(&a, &x).is_zero() {
                    return true;
                }
            }
        }
    }
    false
}
