//! Simple algebraic number fields `Q[t]/(r)` with `r` irreducible.
//!
//! Elements carry a shared handle to their field. Constants built through
//! [`Zero`]/[`One`]/[`Scalar::from_i64`] have no field attached and adopt the
//! field of whatever they are combined with.

use std::fmt;
use std::ops::{AddAssign, Div, MulAssign, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::poly::UniPoly;
use crate::scalar::{Rational, Scalar};

/// The field `Q[t]/(r)`; `r` is stored monic.
#[derive(Debug, PartialEq, Eq)]
pub struct NumberField {
    modulus: Vec<Rational>,
}

impl NumberField {
    /// `r` must be irreducible over the rationals; this is not checked.
    pub fn new(r: &UniPoly<Rational>) -> Arc<Self> {
        assert!(r.degree().unwrap_or(0) >= 1, "defining polynomial must be non-constant");
        Arc::new(NumberField { modulus: r.monic().coeffs().to_vec() })
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> UniPoly<Rational> {
        UniPoly::new(self.modulus.clone())
    }

    /// The class of `t`.
    pub fn generator(self: &Arc<Self>) -> Nf {
        Nf::from_coeffs(self, vec![Rational::zero(), Rational::one()])
    }

    fn reduce(&self, mut c: Vec<Rational>) -> Vec<Rational> {
        let n = self.degree();
        while c.len() > n {
            let top = c.pop().expect("nonempty");
            if !top.is_zero() {
                let shift = c.len() - n;
                for (i, m) in self.modulus[..n].iter().enumerate() {
                    c[shift + i].sub_mul_assign(&top, m);
                }
            }
        }
        trim(&mut c);
        c
    }
}

fn trim(c: &mut Vec<Rational>) {
    while c.last().is_some_and(|v| v.is_zero()) {
        c.pop();
    }
}

/// Element of a [`NumberField`], stored as coefficients in the power basis.
#[derive(Clone)]
pub struct Nf {
    field: Option<Arc<NumberField>>,
    coeffs: Vec<Rational>,
}

impl Nf {
    pub fn from_coeffs(field: &Arc<NumberField>, coeffs: Vec<Rational>) -> Self {
        Nf { field: Some(field.clone()), coeffs: field.reduce(coeffs) }
    }

    pub fn from_rational(field: &Arc<NumberField>, q: Rational) -> Self {
        Self::from_coeffs(field, vec![q])
    }

    /// Image of a univariate polynomial evaluated at the generator.
    pub fn from_uni(field: &Arc<NumberField>, p: &UniPoly<Rational>) -> Self {
        Self::from_coeffs(field, p.coeffs().to_vec())
    }

    pub fn field(&self) -> Option<&Arc<NumberField>> {
        self.field.as_ref()
    }

    /// Coordinates in the basis `1, t, ..., t^(n-1)`, padded to `n`.
    pub fn coordinates(&self, n: usize) -> Vec<Rational> {
        let mut c = self.coeffs.clone();
        assert!(c.len() <= n, "element does not fit the requested basis size");
        c.resize(n, Rational::zero());
        c
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    fn join(&self, other: &Nf) -> Option<Arc<NumberField>> {
        match (&self.field, &other.field) {
            (Some(a), Some(b)) => {
                debug_assert!(Arc::ptr_eq(a, b) || a == b, "mixing number fields");
                Some(a.clone())
            }
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (None, None) => None,
        }
    }

    fn combine(&self, other: &Nf, sign: bool) -> Nf {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i);
            let b = other.coeffs.get(i);
            c.push(match (a, b) {
                (Some(a), Some(b)) => {
                    if sign {
                        a - b
                    } else {
                        a + b
                    }
                }
                (Some(a), None) => a.clone(),
                (None, Some(b)) => {
                    if sign {
                        -b.clone()
                    } else {
                        b.clone()
                    }
                }
                (None, None) => unreachable!(),
            });
        }
        trim(&mut c);
        Nf { field: self.join(other), coeffs: c }
    }
}

impl fmt::Debug for Nf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Nf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*t")?,
                _ => write!(f, "({c})*t^{i}")?,
            }
        }
        Ok(())
    }
}

impl PartialEq for Nf {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl Zero for Nf {
    fn zero() -> Self {
        Nf { field: None, coeffs: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for Nf {
    fn one() -> Self {
        Nf { field: None, coeffs: vec![Rational::one()] }
    }
}

impl std::ops::Add for Nf {
    type Output = Nf;
    fn add(self, o: Nf) -> Nf {
        self.combine(&o, false)
    }
}

impl std::ops::Mul for Nf {
    type Output = Nf;
    fn mul(self, o: Nf) -> Nf {
        self.mul_ref(&o)
    }
}

impl Sub for Nf {
    type Output = Nf;
    fn sub(self, o: Nf) -> Nf {
        self.combine(&o, true)
    }
}

impl Div for Nf {
    type Output = Nf;
    fn div(self, o: Nf) -> Nf {
        self.div_ref(&o)
    }
}

impl Neg for Nf {
    type Output = Nf;
    fn neg(self) -> Nf {
        Nf { field: self.field, coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl AddAssign for Nf {
    fn add_assign(&mut self, o: Nf) {
        *self = self.combine(&o, false);
    }
}

impl SubAssign for Nf {
    fn sub_assign(&mut self, o: Nf) {
        *self = self.combine(&o, true);
    }
}

impl MulAssign for Nf {
    fn mul_assign(&mut self, o: Nf) {
        *self = self.mul_ref(&o);
    }
}

impl Scalar for Nf {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        let mut c = vec![Rational::from(v)];
        trim(&mut c);
        Nf { field: None, coeffs: c }
    }

    fn from_rational(q: &Rational) -> Option<Self> {
        let mut c = vec![q.clone()];
        trim(&mut c);
        Some(Nf { field: None, coeffs: c })
    }

    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        if self.coeffs.len() == 1 {
            return Nf { field: self.field.clone(), coeffs: vec![self.coeffs[0].inv()] };
        }
        let field = self.field.as_ref().expect("non-rational element has a field");
        let a = UniPoly::new(self.coeffs.clone());
        let (g, s, _) = a.ext_gcd(&field.modulus());
        debug_assert_eq!(g.degree(), Some(0), "defining polynomial is not irreducible");
        let s = s.scale(&g.coeff(0).inv());
        Nf::from_uni(field, &s)
    }

    fn add_ref(&self, o: &Self) -> Self {
        self.combine(o, false)
    }

    fn sub_ref(&self, o: &Self) -> Self {
        self.combine(o, true)
    }

    fn mul_ref(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Nf::zero();
        }
        let mut c = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j].add_mul_assign(a, b);
            }
        }
        let field = self.join(o);
        match &field {
            Some(f) => Nf { coeffs: f.reduce(c), field },
            None => {
                trim(&mut c);
                Nf { field, coeffs: c }
            }
        }
    }

    fn weight(&self) -> u64 {
        self.coeffs.iter().map(|c| c.bits()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt2() -> Arc<NumberField> {
        NumberField::new(&UniPoly::new(vec![Rational::from(-2), Rational::zero(), Rational::one()]))
    }

    #[test]
    fn arithmetic_in_quadratic_field() {
        let k = sqrt2();
        let t = k.generator();
        assert_eq!(t.mul_ref(&t), Nf::from_rational(&k, Rational::from(2)));
        let a = t.add_ref(&Nf::one());
        let b = a.inv();
        assert_eq!(a.mul_ref(&b), Nf::one());
        // (1 + t)^-1 = t - 1 in Q(sqrt 2).
        assert_eq!(b, t.sub_ref(&Nf::one()));
    }

    #[test]
    fn constants_adopt_the_field() {
        let k = sqrt2();
        let t = k.generator();
        let c = Nf::from_i64(3);
        assert!(c.field().is_none());
        let s = c.mul_ref(&t).mul_ref(&t);
        assert_eq!(s.as_rational(), Some(Rational::from(6)));
        assert!(s.field().is_some());
    }

    #[test]
    fn cubic_field_inverse() {
        // t^3 - t - 1 is irreducible.
        let k = NumberField::new(&UniPoly::new(vec![Rational::from(-1), Rational::from(-1), Rational::zero(), Rational::one()]));
        let t = k.generator();
        let x = t.mul_ref(&t).add_ref(&Nf::from_i64(5));
        assert_eq!(x.mul_ref(&x.inv()), Nf::one());
        assert_eq!(x.coordinates(3).len(), 3);
    }
}
