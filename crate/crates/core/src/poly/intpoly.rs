use std::fmt;

use rug::{Assign, Integer};

use super::univariate::UniPoly;
use crate::scalar::Rational;

/// Dense univariate polynomial over the integers, lowest degree first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ZPoly {
    c: Vec<Integer>,
}

impl ZPoly {
    pub fn new(mut c: Vec<Integer>) -> Self {
        while c.last().is_some_and(|v| *v == 0) {
            c.pop();
        }
        ZPoly { c }
    }

    pub fn from_i64(v: &[i64]) -> Self {
        Self::new(v.iter().map(|&x| Integer::from(x)).collect())
    }

    pub fn zero() -> Self {
        ZPoly { c: Vec::new() }
    }

    pub fn one() -> Self {
        ZPoly { c: vec![Integer::from(1)] }
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> Integer {
        self.c.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lc(&self) -> &Integer {
        self.c.last().expect("zero polynomial has no leading coefficient")
    }

    pub fn content(&self) -> Integer {
        let mut g = Integer::new();
        for v in &self.c {
            g.gcd_mut(v);
            if g == 1 {
                break;
            }
        }
        g
    }

    /// Divide by the content and make the leading coefficient positive.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if *self.lc() < 0 {
            g = -g;
        }
        ZPoly { c: self.c.iter().map(|v| Integer::from(v.div_exact_ref(&g))).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Integer::new(); self.c.len() + o.c.len() - 1];
        let mut tmp = Integer::new();
        for (i, a) in self.c.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                tmp.assign(a * b);
                out[i + j] += &tmp;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, k: &Integer) -> Self {
        Self::new(self.c.iter().map(|v| Integer::from(v * k)).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.c.iter().enumerate().skip(1).map(|(i, v)| Integer::from(v * i as u64)).collect())
    }

    pub fn eval(&self, x: &Integer) -> Integer {
        let mut acc = Integer::new();
        for v in self.c.iter().rev() {
            acc *= x;
            acc += v;
        }
        acc
    }

    /// Exact quotient over the integers, or `None` if `d` does not divide.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let dd = d.degree().expect("division by zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        let n = self.degree().unwrap();
        if n < dd {
            return None;
        }
        let mut r = self.c.clone();
        let mut q = vec![Integer::new(); n - dd + 1];
        let lc = d.lc();
        for k in (0..q.len()).rev() {
            if r[k + dd] == 0 {
                continue;
            }
            if !r[k + dd].is_divisible(lc) {
                return None;
            }
            let c = Integer::from(r[k + dd].div_exact_ref(lc));
            for (j, dc) in d.c.iter().enumerate() {
                r[k + j] -= Integer::from(&c * dc);
            }
            q[k] = c;
        }
        if r.iter().any(|v| *v != 0) {
            return None;
        }
        Some(Self::new(q))
    }

    /// Pseudo-remainder `lc(d)^(deg self - deg d + 1) * self mod d`.
    pub fn pseudo_rem(&self, d: &Self) -> Self {
        let dd = d.degree().expect("division by zero polynomial");
        let mut r = self.c.clone();
        let lc = d.lc().clone();
        while r.len() > dd {
            let k = r.len() - 1 - dd;
            let top = r.pop().unwrap();
            for v in r.iter_mut() {
                *v *= &lc;
            }
            for (j, dc) in d.c[..dd].iter().enumerate() {
                r[k + j] -= Integer::from(&top * dc);
            }
            while r.last().is_some_and(|v| *v == 0) {
                r.pop();
            }
        }
        Self::new(r)
    }

    /// Primitive gcd with positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.primitive();
        }
        if other.is_zero() {
            return self.primitive();
        }
        let cont = Integer::from(self.content().gcd_ref(&other.content()));
        let (mut a, mut b) = (self.primitive(), other.primitive());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            if b.degree() == Some(0) {
                return ZPoly::new(vec![cont]);
            }
            let r = a.pseudo_rem(&b).primitive();
            a = b;
            b = r;
        }
        a.scale(&cont)
    }

    /// Yun's squarefree decomposition of a primitive polynomial: pairs
    /// `(factor, multiplicity)` with primitive, pairwise coprime factors
    /// whose product is `self` up to sign and content.
    pub fn squarefree(&self) -> Vec<(ZPoly, u32)> {
        assert!(!self.is_zero(), "squarefree decomposition of zero");
        let f = self.primitive();
        let mut out = Vec::new();
        if f.degree() == Some(0) {
            return out;
        }
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_exact(&a0).expect("gcd divides");
        let mut c = df.div_exact(&a0).expect("gcd divides");
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        loop {
            let a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            b = b.div_exact(&a).expect("gcd divides");
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
            c = d.div_exact(&a).expect("gcd divides");
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    pub fn to_rational(&self) -> UniPoly<Rational> {
        UniPoly::new(self.c.iter().map(|v| Rational::from(v.clone())).collect())
    }

    /// Clear denominators: the primitive integer multiple of `p`.
    pub fn from_rational(p: &UniPoly<Rational>) -> Self {
        let mut den = Integer::from(1);
        for v in p.coeffs() {
            den.lcm_mut(v.denom());
        }
        Self::new(
            p.coeffs()
                .iter()
                .map(|v| Integer::from(v.numer() * Integer::from(&den / v.denom())))
                .collect(),
        )
        .primitive()
    }

    /// Largest absolute coefficient.
    pub fn max_norm(&self) -> Integer {
        self.c.iter().map(|v| v.clone().abs()).max().unwrap_or_default()
    }
}

impl fmt::Debug for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_rational())
    }
}
