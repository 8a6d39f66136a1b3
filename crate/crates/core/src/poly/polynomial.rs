use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::monomial::{Monomial, MAX_VARS};
use super::PolyError;
use crate::scalar::{Rational, Scalar};

/// Ordered list of variable names shared by all polynomials of one ring.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Vars(Arc<[String]>);

impl Vars {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Self {
        assert!(names.len() <= MAX_VARS, "at most {MAX_VARS} variables");
        Vars(names.iter().map(|s| s.as_ref().to_string()).collect())
    }

    /// The projective plane ring `x, y, z`.
    pub fn xyz() -> Self {
        Vars::new(&["x", "y", "z"])
    }

    /// The projective space ring `x, y, z, w`.
    pub fn xyzw() -> Self {
        Vars::new(&["x", "y", "z", "w"])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index(&self, name: &str) -> Result<usize, PolyError> {
        self.0
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))
    }

    /// Ring with extra variables appended (or prepended when `front`).
    pub fn extended<S: AsRef<str>>(&self, extra: &[S], front: bool) -> Vars {
        let mut names: Vec<String> = Vec::new();
        if front {
            names.extend(extra.iter().map(|s| s.as_ref().to_string()));
            names.extend(self.0.iter().cloned());
        } else {
            names.extend(self.0.iter().cloned());
            names.extend(extra.iter().map(|s| s.as_ref().to_string()));
        }
        Vars::new(&names)
    }
}

impl fmt::Debug for Vars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &self.0[..])
    }
}

/// Sparse multivariate polynomial.
///
/// Terms are kept sorted in descending graded reverse lexicographic order
/// with no zero coefficients, so structural equality is ideal equality of
/// the represented polynomials.
#[derive(Clone, PartialEq)]
pub struct Poly<C> {
    vars: Vars,
    terms: Vec<(Monomial, C)>,
}

impl<C: Scalar> Poly<C> {
    pub fn zero(vars: &Vars) -> Self {
        Poly { vars: vars.clone(), terms: Vec::new() }
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, C::one())
    }

    pub fn constant(vars: &Vars, c: C) -> Self {
        Self::monomial(vars, Monomial::one(), c)
    }

    pub fn monomial(vars: &Vars, m: Monomial, c: C) -> Self {
        if c.is_negligible() {
            return Self::zero(vars);
        }
        Poly { vars: vars.clone(), terms: vec![(m, c)] }
    }

    pub fn var(vars: &Vars, i: usize) -> Self {
        assert!(i < vars.len());
        Self::monomial(vars, Monomial::var(i, 1), C::one())
    }

    pub fn var_named(vars: &Vars, name: &str) -> Result<Self, PolyError> {
        Ok(Self::var(vars, vars.index(name)?))
    }

    /// Build from arbitrary terms; duplicates are merged, zeros dropped.
    pub fn from_terms(vars: &Vars, terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut map: HashMap<Monomial, C> = HashMap::new();
        for (m, c) in terms {
            debug_assert!((vars.len()..MAX_VARS).all(|i| m.exp(i) == 0));
            match map.get_mut(&m) {
                Some(acc) => *acc += c,
                None => {
                    map.insert(m, c);
                }
            }
        }
        Self::from_map(vars, map)
    }

    fn from_map(vars: &Vars, map: HashMap<Monomial, C>) -> Self {
        let mut terms: Vec<(Monomial, C)> = map.into_iter().filter(|(_, c)| !c.is_negligible()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Poly { vars: vars.clone(), terms }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> &[(Monomial, C)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, C)> {
        self.terms
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    /// Leading term in grevlex.
    pub fn leading(&self) -> Option<&(Monomial, C)> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> C {
        self.terms.first().map_or_else(C::zero, |t| t.1.clone())
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms
            .binary_search_by(|t| m.cmp(&t.0))
            .map_or_else(|_| C::zero(), |i| self.terms[i].1.clone())
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&Monomial::one())
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.exp(i)).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m0, _)) => {
                let d = m0.degree();
                self.terms.iter().all(|(m, _)| m.degree() == d)
            }
        }
    }

    /// Whether the variables `idx` do not occur.
    pub fn is_free_of(&self, idx: usize) -> bool {
        self.terms.iter().all(|(m, _)| m.exp(idx) == 0)
    }

    fn check_vars(&self, other: &Self) -> Result<(), PolyError> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(PolyError::VarMismatch(format!("{:?} vs {:?}", self.vars, other.vars)))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_vars(other)?;
        Ok(self.add_impl(other, false))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_vars(other)?;
        Ok(self.add_impl(other, true))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_vars(other)?;
        Ok(self.mul_impl(other))
    }

    fn add_impl(&self, other: &Self, negate: bool) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &other.terms;
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    let c = if negate { -b[j].1.clone() } else { b[j].1.clone() };
                    out.push((b[j].0, c));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate { a[i].1.sub_ref(&b[j].1) } else { a[i].1.add_ref(&b[j].1) };
                    if !c.is_negligible() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for t in &b[j..] {
            let c = if negate { -t.1.clone() } else { t.1.clone() };
            out.push((t.0, c));
        }
        Poly { vars: self.vars.clone(), terms: out }
    }

    fn mul_impl(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.vars);
        }
        if other.terms.len() == 1 {
            return self.mul_term(&other.terms[0].0, &other.terms[0].1);
        }
        if self.terms.len() == 1 {
            return other.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        let mut map: HashMap<Monomial, C> = HashMap::with_capacity(self.terms.len() * other.terms.len() / 2 + 1);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                match map.get_mut(&m) {
                    Some(acc) => acc.add_mul_assign(ca, cb),
                    None => {
                        map.insert(m, ca.mul_ref(cb));
                    }
                }
            }
        }
        Self::from_map(&self.vars, map)
    }

    pub fn mul_term(&self, m: &Monomial, c: &C) -> Self {
        if c.is_negligible() {
            return Self::zero(&self.vars);
        }
        let terms = self.terms.iter().map(|(mm, cc)| (mm.mul(m), cc.mul_ref(c))).collect();
        Poly { vars: self.vars.clone(), terms }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        let terms = self.terms.iter().map(|(mm, cc)| (mm.mul(m), cc.clone())).collect();
        Poly { vars: self.vars.clone(), terms }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_negligible() {
            return Self::zero(&self.vars);
        }
        let terms = self.terms.iter().map(|(m, cc)| (*m, cc.mul_ref(c))).collect();
        Poly { vars: self.vars.clone(), terms }
    }

    /// Make the leading coefficient one (no-op on zero).
    pub fn monic(&self) -> Self {
        match self.terms.first() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv()),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(&self.vars);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul_impl(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul_impl(&base);
            }
        }
        acc
    }

    /// Exact partial derivative in variable `i`.
    pub fn partial(&self, i: usize) -> Self {
        assert!(i < self.nvars());
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exp(i) > 0)
            .map(|(m, c)| {
                let e = m.exp(i);
                let mut mm = *m;
                mm.set_exp(i, e - 1);
                (mm, c.mul_ref(&C::from_i64(i64::from(e))))
            })
            .filter(|(_, c)| !c.is_negligible());
        // Differentiation can reorder terms, so rebuild.
        Self::from_terms(&self.vars, terms.collect::<Vec<_>>())
    }

    pub fn partial_named(&self, name: &str) -> Result<Self, PolyError> {
        Ok(self.partial(self.vars.index(name)?))
    }

    /// Coefficients as polynomials in the other variables:
    /// `self = sum_k out[k] * v^k`.
    pub fn coefficients_in(&self, i: usize) -> Vec<Self> {
        let deg = self.degree_in(i).unwrap_or(0) as usize;
        let mut buckets: Vec<Vec<(Monomial, C)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let e = m.exp(i) as usize;
            let mut mm = *m;
            mm.set_exp(i, 0);
            buckets[e].push((mm, c.clone()));
        }
        // Removing one variable preserves relative grevlex order only up to
        // ties in degree, so sort again.
        buckets.into_iter().map(|t| Self::from_terms(&self.vars, t)).collect()
    }

    pub fn from_coefficients_in(vars: &Vars, i: usize, coeffs: &[Self]) -> Self {
        let mut terms = Vec::new();
        for (k, p) in coeffs.iter().enumerate() {
            for (m, c) in &p.terms {
                let mut mm = *m;
                mm.set_exp(i, m.exp(i) + k as u32);
                terms.push((mm, c.clone()));
            }
        }
        Self::from_terms(vars, terms)
    }

    /// Replace variable `i` by the polynomial `r`.
    pub fn substitute(&self, i: usize, r: &Self) -> Self {
        assert_eq!(self.vars, r.vars, "substitution across rings");
        let coeffs = self.coefficients_in(i);
        // Horner in r.
        let mut acc = Self::zero(&self.vars);
        for c in coeffs.iter().rev() {
            acc = acc.mul_impl(r).add_impl(c, false);
        }
        acc
    }

    pub fn checked_substitute(&self, name: &str, r: &Self) -> Result<Self, PolyError> {
        self.check_vars(r)?;
        Ok(self.substitute(self.vars.index(name)?, r))
    }

    /// Simultaneous substitution of every variable; `images` may live in a
    /// different ring.
    pub fn compose(&self, images: &[Poly<C>]) -> Poly<C> {
        assert_eq!(images.len(), self.nvars());
        let target = images.first().map(|p| p.vars.clone()).expect("at least one variable");
        let mut powers: Vec<Vec<Poly<C>>> = images.iter().map(|p| vec![Poly::one(&target), p.clone()]).collect();
        let mut acc: HashMap<Monomial, C> = HashMap::new();
        for (m, c) in &self.terms {
            let mut t = Poly::constant(&target, c.clone());
            for (v, pw) in powers.iter_mut().enumerate() {
                let e = m.exp(v) as usize;
                while pw.len() <= e {
                    let next = pw.last().unwrap().mul_impl(&images[v]);
                    pw.push(next);
                }
                if e > 0 {
                    t = t.mul_impl(&pw[e]);
                }
            }
            for (mm, cc) in t.terms {
                match acc.get_mut(&mm) {
                    Some(a) => *a += cc,
                    None => {
                        acc.insert(mm, cc);
                    }
                }
            }
        }
        Poly::from_map(&target, acc)
    }

    pub fn eval(&self, point: &[C]) -> C {
        assert_eq!(point.len(), self.nvars());
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, x) in point.iter().enumerate() {
                let e = m.exp(v);
                if e > 0 {
                    t = t.mul_ref(&x.pow_u32(e));
                }
            }
            acc += t;
        }
        acc
    }

    /// Set variable `i` to the constant `value`.
    pub fn eval_var(&self, i: usize, value: &C) -> Self {
        let terms = self.terms.iter().map(|(m, c)| {
            let e = m.exp(i);
            let mut mm = *m;
            mm.set_exp(i, 0);
            (mm, c.mul_ref(&value.pow_u32(e)))
        });
        Self::from_terms(&self.vars, terms.collect::<Vec<_>>())
    }

    /// Part of total degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        let terms = self.terms.iter().filter(|(m, _)| m.degree() == d).cloned().collect();
        Poly { vars: self.vars.clone(), terms }
    }

    /// Homogenize to total degree `d` using variable `h` (which must not occur).
    pub fn homogenize(&self, h: usize, d: u32) -> Self {
        let terms = self.terms.iter().map(|(m, c)| {
            let mut mm = *m;
            let deg = m.degree();
            assert!(deg <= d, "homogenization degree too small");
            mm.set_exp(h, m.exp(h) + d - deg);
            (mm, c.clone())
        });
        Self::from_terms(&self.vars, terms.collect::<Vec<_>>())
    }

    /// Quotient when `d` divides `self` exactly, otherwise `None`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Self::zero(&self.vars));
        }
        if d.terms.len() == 1 {
            let (dm, dc) = &d.terms[0];
            let inv = dc.inv();
            let mut terms = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                if !dm.divides(m) {
                    return None;
                }
                terms.push((dm.quotient_of(m), c.mul_ref(&inv)));
            }
            return Some(Poly { vars: self.vars.clone(), terms });
        }
        let (lm, lc) = d.terms[0].clone();
        let lc_inv = lc.inv();
        let mut rem = self.clone();
        let mut quot: Vec<(Monomial, C)> = Vec::new();
        while let Some((m, c)) = rem.terms.first().cloned() {
            if !lm.divides(&m) {
                return None;
            }
            let qm = lm.quotient_of(&m);
            let qc = c.mul_ref(&lc_inv);
            rem = rem.sub_scaled_shifted(d, &qm, &qc);
            quot.push((qm, qc));
        }
        Some(Poly { vars: self.vars.clone(), terms: quot })
    }

    /// `self - c * m * other`, used by division loops.
    pub fn sub_scaled_shifted(&self, other: &Self, m: &Monomial, c: &C) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let a = &self.terms;
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < other.terms.len() {
            let bm = other.terms[j].0.mul(m);
            match a[i].0.cmp(&bm) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push((bm, -(other.terms[j].1.mul_ref(c))));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let mut v = a[i].1.clone();
                    v.sub_mul_assign(&other.terms[j].1, c);
                    if !v.is_negligible() {
                        out.push((bm, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for t in &other.terms[j..] {
            out.push((t.0.mul(m), -(t.1.mul_ref(c))));
        }
        Poly { vars: self.vars.clone(), terms: out }
    }

    pub fn map_coeffs<D: Scalar>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (*m, f(c)))
            .filter(|(_, c)| !c.is_negligible())
            .collect();
        Poly { vars: self.vars.clone(), terms }
    }

    /// Move into another ring; `map[i]` is the target index of variable `i`.
    pub fn remap(&self, target: &Vars, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.nvars());
        let terms = self.terms.iter().map(|(m, c)| {
            let mut mm = Monomial::one();
            for (i, &t) in map.iter().enumerate() {
                mm.set_exp(t, mm.exp(t) + m.exp(i));
            }
            (mm, c.clone())
        });
        Self::from_terms(target, terms.collect::<Vec<_>>())
    }

    /// Move into a ring that contains all of our variable names.
    pub fn embed(&self, target: &Vars) -> Result<Self, PolyError> {
        let map = self
            .vars
            .names()
            .iter()
            .map(|n| target.index(n))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.remap(target, &map))
    }

    /// Move into a ring with fewer variables; fails if a dropped variable occurs.
    pub fn restrict(&self, target: &Vars) -> Result<Self, PolyError> {
        let mut map = Vec::with_capacity(self.nvars());
        for (i, n) in self.vars.names().iter().enumerate() {
            match target.index(n) {
                Ok(t) => map.push(Some(t)),
                Err(_) => {
                    if !self.is_free_of(i) {
                        return Err(PolyError::UnknownVariable(n.clone()));
                    }
                    map.push(None);
                }
            }
        }
        let terms = self.terms.iter().map(|(m, c)| {
            let mut mm = Monomial::one();
            for (i, t) in map.iter().enumerate() {
                if let Some(t) = t {
                    mm.set_exp(*t, m.exp(i));
                }
            }
            (mm, c.clone())
        });
        Ok(Self::from_terms(target, terms.collect::<Vec<_>>()))
    }

    /// Whether `self = c * other` for some nonzero constant `c`.
    pub fn is_scalar_multiple_of(&self, other: &Self) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        if self.terms.len() != other.terms.len() {
            return false;
        }
        let ratio = self.terms[0].1.div_ref(&other.terms[0].1);
        self.terms
            .iter()
            .zip(&other.terms)
            .all(|((ma, ca), (mb, cb))| ma == mb && (ca.sub_ref(&cb.mul_ref(&ratio))).is_negligible())
    }
}

impl Poly<Rational> {
    /// Positive rational content: gcd of numerators over lcm of denominators.
    pub fn content(&self) -> Rational {
        let mut num = rug::Integer::new();
        let mut den = rug::Integer::from(1);
        for (_, c) in &self.terms {
            num.gcd_mut(c.numer());
            den.lcm_mut(c.denom());
        }
        if num == 0 {
            return Rational::zero();
        }
        Rational::new(num, den)
    }

    /// Integer primitive part with positive leading coefficient, plus the
    /// factor `c` with `self = c * primitive`.
    pub fn primitive(&self) -> (Rational, Self) {
        if self.is_zero() {
            return (Rational::one(), self.clone());
        }
        let mut c = self.content();
        if self.terms[0].1.is_negative() {
            c = -c;
        }
        let inv = c.inv();
        (c, self.scale(&inv))
    }

    /// Canonical representative up to nonzero rational scaling.
    pub fn normalized(&self) -> Self {
        self.primitive().1
    }

    pub fn max_coeff_bits(&self) -> u64 {
        self.terms.iter().map(|(_, c)| c.bits()).max().unwrap_or(0)
    }
}

impl<C: Scalar> Add for &Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: &Poly<C>) -> Poly<C> {
        self.checked_add(rhs).expect("variable lists differ")
    }
}

impl<C: Scalar> Sub for &Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: &Poly<C>) -> Poly<C> {
        self.checked_sub(rhs).expect("variable lists differ")
    }
}

impl<C: Scalar> Mul for &Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: &Poly<C>) -> Poly<C> {
        self.checked_mul(rhs).expect("variable lists differ")
    }
}

impl<C: Scalar> Add for Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: Poly<C>) -> Poly<C> {
        &self + &rhs
    }
}

impl<C: Scalar> Sub for Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: Poly<C>) -> Poly<C> {
        &self - &rhs
    }
}

impl<C: Scalar> Mul for Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: Poly<C>) -> Poly<C> {
        &self * &rhs
    }
}

impl<C: Scalar> Neg for Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        let terms = self.terms.into_iter().map(|(m, c)| (m, -c)).collect();
        Poly { vars: self.vars, terms }
    }
}

impl<C: Scalar> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        -(self.clone())
    }
}

impl<C: Scalar> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
