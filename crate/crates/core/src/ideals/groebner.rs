//! Fraction-free Buchberger over the integers with sugar selection and the
//! Gebauer-Möller pair criteria.

use std::cmp::Ordering;

use rug::Integer;

use super::order::TermOrder;
use crate::poly::{Monomial, Poly, Vars};
use crate::scalar::Rational;
use crate::QPoly;

/// Primitive integer polynomial with terms sorted descending in the order.
#[derive(Clone, Debug)]
pub(crate) struct ZTerms {
    pub terms: Vec<(Monomial, Integer)>,
    pub sugar: u32,
}

impl ZTerms {
    pub fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    pub fn lc(&self) -> &Integer {
        &self.terms[0].1
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

pub(crate) fn to_zterms(p: &QPoly, order: TermOrder) -> ZTerms {
    let mut den = Integer::from(1);
    for (_, c) in p.terms() {
        den.lcm_mut(c.denom());
    }
    let mut terms: Vec<(Monomial, Integer)> = p
        .terms()
        .iter()
        .map(|(m, c)| (*m, Integer::from(c.numer() * Integer::from(den.div_exact_ref(c.denom())))))
        .collect();
    terms.sort_unstable_by(|a, b| order.cmp(&b.0, &a.0));
    let sugar = p.total_degree().unwrap_or(0);
    let mut z = ZTerms { terms, sugar };
    make_primitive(&mut z);
    z
}

/// Back to a rational polynomial scaled to leading coefficient one.
pub(crate) fn to_monic_qpoly(z: &ZTerms, vars: &Vars) -> QPoly {
    if z.is_zero() {
        return Poly::zero(vars);
    }
    let lc = z.lc().clone();
    Poly::from_terms(vars, z.terms.iter().map(|(m, c)| (*m, Rational::new(c.clone(), lc.clone()))))
}

pub(crate) fn make_primitive(z: &mut ZTerms) {
    let Some(first) = z.terms.first() else { return };
    let mut g = first.1.clone().abs();
    for (_, c) in &z.terms[1..] {
        if g == 1 {
            break;
        }
        g.gcd_mut(c);
    }
    if first.1 < 0 {
        g = -g;
    }
    if g != 1 {
        for (_, c) in &mut z.terms {
            c.div_exact_mut(&g);
        }
    }
}

/// `a * p - b * m * q` merged in the given order.
fn combine(p: &[(Monomial, Integer)], a: &Integer, q: &[(Monomial, Integer)], b: &Integer, m: &Monomial, order: TermOrder) -> Vec<(Monomial, Integer)> {
    let mut out = Vec::with_capacity(p.len() + q.len());
    let (mut i, mut j) = (0, 0);
    while i < p.len() && j < q.len() {
        let qm = q[j].0.mul(m);
        match order.cmp(&p[i].0, &qm) {
            Ordering::Greater => {
                out.push((p[i].0, Integer::from(&p[i].1 * a)));
                i += 1;
            }
            Ordering::Less => {
                out.push((qm, -Integer::from(&q[j].1 * b)));
                j += 1;
            }
            Ordering::Equal => {
                let mut v = Integer::from(&p[i].1 * a);
                v -= Integer::from(&q[j].1 * b);
                if v != 0 {
                    out.push((qm, v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(p[i..].iter().map(|(mm, c)| (*mm, Integer::from(c * a))));
    out.extend(q[j..].iter().map(|(mm, c)| (mm.mul(m), -Integer::from(c * b))));
    out
}

/// Reduce `p` fully modulo `basis`; returns a primitive remainder.
pub(crate) fn reduce(p: &ZTerms, basis: &[&ZTerms], order: TermOrder) -> ZTerms {
    reduce_from(p, basis, order, 0)
}

/// Reduce every non-leading term of `p` modulo `basis`.
pub(crate) fn reduce_tail(p: &ZTerms, basis: &[&ZTerms], order: TermOrder) -> ZTerms {
    reduce_from(p, basis, order, 1)
}

/// Terms before index `keep` are left untouched.
fn reduce_from(p: &ZTerms, basis: &[&ZTerms], order: TermOrder, keep: usize) -> ZTerms {
    let keep = keep.min(p.terms.len());
    // Irreducible terms, final up to a common scale factor.
    let mut done: Vec<(Monomial, Integer)> = p.terms[..keep].to_vec();
    let mut rem: Vec<(Monomial, Integer)> = p.terms[keep..].to_vec();
    let mut start = 0;
    let mut sugar = p.sugar;
    let mut steps = 0usize;
    while start < rem.len() {
        let (m, c) = (&rem[start].0, &rem[start].1);
        let Some(g) = basis.iter().find(|g| g.lm().divides(m)) else {
            done.push(rem[start].clone());
            start += 1;
            continue;
        };
        let shift = g.lm().quotient_of(m);
        let gcd = Integer::from(c.gcd_ref(g.lc()));
        let a = Integer::from(g.lc().div_exact_ref(&gcd));
        let b = Integer::from(c.div_exact_ref(&gcd));
        rem = combine(&rem[start..], &a, &g.terms, &b, &shift, order);
        start = 0;
        if a != 1 {
            for (_, v) in &mut done {
                *v *= &a;
            }
        }
        sugar = sugar.max(g.sugar + shift.degree());
        steps += 1;
        if steps % 8 == 0 {
            remove_common_content(&mut done, &mut rem);
        }
    }
    let mut out = ZTerms { terms: done, sugar };
    make_primitive(&mut out);
    out
}

fn remove_common_content(a: &mut [(Monomial, Integer)], b: &mut [(Monomial, Integer)]) {
    let mut g = Integer::new();
    for (_, c) in a.iter().chain(b.iter()) {
        g.gcd_mut(c);
        if g == 1 {
            return;
        }
    }
    if g > 1 {
        for (_, c) in a.iter_mut().chain(b.iter_mut()) {
            c.div_exact_mut(&g);
        }
    }
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

fn pair(polys: &[ZTerms], i: usize, j: usize) -> Pair {
    let lcm = polys[i].lm().lcm(polys[j].lm());
    let si = polys[i].sugar + lcm.degree() - polys[i].lm().degree();
    let sj = polys[j].sugar + lcm.degree() - polys[j].lm().degree();
    Pair { i, j, lcm, sugar: si.max(sj) }
}

/// Gebauer-Möller update after adding `polys[h]`.
fn update(polys: &[ZTerms], active: &mut Vec<usize>, pairs: &mut Vec<Pair>, h: usize) {
    let lh = *polys[h].lm();
    let mut cands: Vec<Pair> = active.iter().map(|&g| pair(polys, g, h)).collect();
    // Keep a new pair unless another new pair's lcm properly divides it,
    // or it equals an earlier kept lcm; coprime pairs survive this step.
    let mut kept: Vec<Pair> = Vec::new();
    while let Some(p) = cands.pop() {
        let coprime = polys[p.i].lm().is_coprime(&lh);
        let dominated = cands.iter().chain(kept.iter()).any(|q| q.lcm.divides(&p.lcm));
        if coprime || !dominated {
            kept.push(p);
        }
    }
    kept.retain(|p| !polys[p.i].lm().is_coprime(&lh));
    pairs.retain(|p| {
        !(lh.divides(&p.lcm)
            && polys[p.i].lm().lcm(&lh) != p.lcm
            && polys[p.j].lm().lcm(&lh) != p.lcm)
    });
    pairs.extend(kept);
    active.retain(|&g| !lh.divides(polys[g].lm()));
    active.push(h);
}

/// Reduced Gröbner basis of the ideal generated by `gens`, monic.
pub(crate) fn groebner(gens: &[QPoly], vars: &Vars, order: TermOrder) -> Vec<QPoly> {
    let mut polys: Vec<ZTerms> = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let mut input: Vec<ZTerms> = gens.iter().filter(|g| !g.is_zero()).map(|g| to_zterms(g, order)).collect();
    input.sort_by(|a, b| order.cmp(a.lm(), b.lm()));
    for g in input {
        let basis: Vec<&ZTerms> = active.iter().map(|&i| &polys[i]).collect();
        let r = reduce(&g, &basis, order);
        if r.is_zero() {
            continue;
        }
        if r.lm().is_one() {
            return vec![Poly::one(vars)];
        }
        polys.push(r);
        let h = polys.len() - 1;
        update(&polys, &mut active, &mut pairs, h);
    }
    while !pairs.is_empty() {
        let (best, _) = pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| a.sugar.cmp(&b.sugar).then_with(|| order.cmp(&a.lcm, &b.lcm)))
            .expect("nonempty");
        let p = pairs.swap_remove(best);
        let s = spoly(&polys[p.i], &polys[p.j], &p.lcm, p.sugar, order);
        let basis: Vec<&ZTerms> = active.iter().map(|&i| &polys[i]).collect();
        let r = reduce(&s, &basis, order);
        if r.is_zero() {
            continue;
        }
        if r.lm().is_one() {
            return vec![Poly::one(vars)];
        }
        polys.push(r);
        let h = polys.len() - 1;
        update(&polys, &mut active, &mut pairs, h);
    }
    interreduce(&polys, &active, vars, order)
}

pub(crate) fn spoly(f: &ZTerms, g: &ZTerms, lcm: &Monomial, sugar: u32, order: TermOrder) -> ZTerms {
    let mf = f.lm().quotient_of(lcm);
    let mg = g.lm().quotient_of(lcm);
    let gcd = Integer::from(f.lc().gcd_ref(g.lc()));
    let a = Integer::from(g.lc().div_exact_ref(&gcd));
    let b = Integer::from(f.lc().div_exact_ref(&gcd));
    let fm: Vec<(Monomial, Integer)> = f.terms.iter().map(|(m, c)| (m.mul(&mf), c.clone())).collect();
    let mut terms = combine(&fm, &a, &g.terms, &b, &mg, order);
    // Leading terms cancel by construction.
    while terms.first().is_some_and(|(m, _)| m == lcm) {
        terms.remove(0);
    }
    remove_common_content(&mut terms, &mut []);
    ZTerms { terms, sugar }
}

fn interreduce(polys: &[ZTerms], active: &[usize], vars: &Vars, order: TermOrder) -> Vec<QPoly> {
    let mut min: Vec<&ZTerms> = active.iter().map(|&i| &polys[i]).collect();
    min.sort_by(|a, b| order.cmp(b.lm(), a.lm()));
    (0..min.len())
        .map(|k| {
            let others: Vec<&ZTerms> = min.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, p)| *p).collect();
            to_monic_qpoly(&reduce_tail(min[k], &others, order), vars)
        })
        .collect()
}
