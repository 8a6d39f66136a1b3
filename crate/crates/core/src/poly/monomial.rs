use std::cmp::Ordering;
use std::fmt;

/// Upper bound on the number of ring variables.
pub const MAX_VARS: usize = 8;

/// Exponent vector. Unused trailing slots stay zero, so comparisons do not
/// need to know the ambient variable count.
///
/// The `Ord` instance is graded reverse lexicographic with the first
/// variable largest (x > y > z > w for the standard ring).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: [u16; MAX_VARS],
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn from_exps(exps: &[u32]) -> Self {
        assert!(exps.len() <= MAX_VARS, "too many variables");
        let mut m = Monomial::default();
        for (slot, &e) in m.exps.iter_mut().zip(exps) {
            *slot = u16::try_from(e).expect("exponent overflow");
        }
        m
    }

    pub fn var(i: usize, e: u32) -> Self {
        let mut m = Monomial::default();
        m.exps[i] = u16::try_from(e).expect("exponent overflow");
        m
    }

    #[inline]
    pub fn exp(&self, i: usize) -> u32 {
        u32::from(self.exps[i])
    }

    pub fn set_exp(&mut self, i: usize, e: u32) {
        self.exps[i] = u16::try_from(e).expect("exponent overflow");
    }

    pub fn exps(&self, nvars: usize) -> Vec<u32> {
        self.exps[..nvars].iter().map(|&e| u32::from(e)).collect()
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&e| u32::from(e)).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut m = *self;
        for (a, b) in m.exps.iter_mut().zip(other.exps.iter()) {
            *a = a.checked_add(*b).expect("exponent overflow");
        }
        m
    }

    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming divisibility.
    #[inline]
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        let mut m = *other;
        for (a, b) in m.exps.iter_mut().zip(self.exps.iter()) {
            *a -= *b;
        }
        m
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut m = *self;
        for (a, b) in m.exps.iter_mut().zip(other.exps.iter()) {
            *a = (*a).max(*b);
        }
        m
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut m = *self;
        for (a, b) in m.exps.iter_mut().zip(other.exps.iter()) {
            *a = (*a).min(*b);
        }
        m
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Degree in the variables `range`.
    pub fn partial_degree(&self, range: std::ops::Range<usize>) -> u32 {
        self.exps[range].iter().map(|&e| u32::from(e)).sum()
    }

    /// Monomial with the variables in `range` set to zero.
    pub fn without(&self, range: std::ops::Range<usize>) -> Monomial {
        let mut m = *self;
        for e in &mut m.exps[range] {
            *e = 0;
        }
        m
    }

    pub fn grevlex_cmp(&self, other: &Monomial) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        for i in (0..MAX_VARS).rev() {
            match self.exps[i].cmp(&other.exps[i]) {
                Ordering::Equal => continue,
                o => return o.reverse(),
            }
        }
        Ordering::Equal
    }

    pub fn lex_cmp(&self, other: &Monomial) -> Ordering {
        self.exps.cmp(&other.exps)
    }

    /// Graded reverse lex restricted to the variables in `range`.
    pub fn grevlex_cmp_range(&self, other: &Monomial, range: std::ops::Range<usize>) -> Ordering {
        let da = self.partial_degree(range.clone());
        let db = other.partial_degree(range.clone());
        match da.cmp(&db) {
            Ordering::Equal => {}
            o => return o,
        }
        for i in range.rev() {
            match self.exps[i].cmp(&other.exps[i]) {
                Ordering::Equal => continue,
                o => return o.reverse(),
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.grevlex_cmp(other)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.exps.iter().rposition(|&e| e != 0).map_or(0, |i| i + 1);
        write!(f, "{:?}", &self.exps[..last])
    }
}

/// All monomials of total degree `d` in `nvars` variables, in descending
/// grevlex order.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut exps = vec![0u32; nvars];
    fn rec(i: usize, left: u32, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        let n = exps.len();
        if i + 1 == n {
            exps[i] = left;
            out.push(Monomial::from_exps(exps));
            return;
        }
        for e in (0..=left).rev() {
            exps[i] = e;
            rec(i + 1, left - e, exps, out);
        }
        exps[i] = 0;
    }
    if nvars == 0 {
        if d == 0 {
            out.push(Monomial::one());
        }
        return out;
    }
    rec(0, d, &mut exps, &mut out);
    out.sort_by(|a, b| b.cmp(a));
    out
}

/// Number of monomials of degree `d` in `n` variables.
pub fn count_monomials(n: usize, d: u32) -> usize {
    if n == 0 {
        return usize::from(d == 0);
    }
    // binom(d + n - 1, n - 1)
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..(n as u128 - 1) {
        num *= u128::from(d) + 1 + i;
        den *= i + 1;
    }
    (num / den) as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grevlex_basics() {
        let x2 = Monomial::from_exps(&[2, 0, 0]);
        let xy = Monomial::from_exps(&[1, 1, 0]);
        let y2 = Monomial::from_exps(&[0, 2, 0]);
        let xz = Monomial::from_exps(&[1, 0, 1]);
        let x = Monomial::from_exps(&[1, 0, 0]);
        assert!(x2 > xy && xy > y2 && y2 > xz && xz > x);
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        assert_eq!(count_monomials(3, 7), 36);
        assert_eq!(count_monomials(4, 3), 20);
        for d in 0..6 {
            assert_eq!(monomials_of_degree(4, d).len(), count_monomials(4, d));
        }
    }

    #[test]
    fn divisibility() {
        let a = Monomial::from_exps(&[1, 2]);
        let b = Monomial::from_exps(&[2, 3, 1]);
        assert!(a.divides(&b));
        assert_eq!(a.quotient_of(&b), Monomial::from_exps(&[1, 1, 1]));
        assert_eq!(a.lcm(&Monomial::from_exps(&[3])), Monomial::from_exps(&[3, 2]));
    }
}
