//! Dense univariate arithmetic over a prime field chosen at runtime.

use rand::Rng;
use rug::ops::Pow;
use rug::Integer;

use super::intpoly::ZPoly;

/// Prime field `Z/p` with `p < 2^62`. Polynomials are coefficient vectors,
/// lowest degree first, without trailing zeros.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Zp {
    pub p: u64,
}

pub type PolyP = Vec<u64>;

impl Zp {
    pub fn new(p: u64) -> Self {
        assert!(p >= 2 && p < (1 << 62));
        Zp { p }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((u128::from(a) * u128::from(b)) % u128::from(self.p)) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> u64 {
        assert!(a != 0, "inverse of zero mod {}", self.p);
        self.pow(a, self.p - 2)
    }

    pub fn reduce_int(&self, v: &Integer) -> u64 {
        v.mod_u(self.p as u32) as u64
    }

    pub fn reduce(&self, f: &ZPoly) -> PolyP {
        debug_assert!(self.p < (1 << 32), "reduce needs a 32-bit prime");
        trim(f.coeffs().iter().map(|v| self.reduce_int(v)).collect())
    }

    pub fn poly_mul(&self, a: &[u64], b: &[u64]) -> PolyP {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = self.add(out[i + j], self.mul(x, y));
            }
        }
        trim(out)
    }

    pub fn poly_sub(&self, a: &[u64], b: &[u64]) -> PolyP {
        let n = a.len().max(b.len());
        trim(
            (0..n)
                .map(|i| self.sub(a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0)))
                .collect(),
        )
    }

    pub fn poly_add(&self, a: &[u64], b: &[u64]) -> PolyP {
        let n = a.len().max(b.len());
        trim(
            (0..n)
                .map(|i| self.add(a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0)))
                .collect(),
        )
    }

    pub fn poly_scale(&self, a: &[u64], c: u64) -> PolyP {
        trim(a.iter().map(|&x| self.mul(x, c)).collect())
    }

    pub fn monic(&self, a: &[u64]) -> PolyP {
        match a.last() {
            None => Vec::new(),
            Some(&l) => self.poly_scale(a, self.inv(l)),
        }
    }

    pub fn divrem(&self, a: &[u64], d: &[u64]) -> (PolyP, PolyP) {
        assert!(!d.is_empty(), "division by zero polynomial");
        let dd = d.len() - 1;
        if a.len() <= dd {
            return (Vec::new(), a.to_vec());
        }
        let inv = self.inv(d[dd]);
        let mut r = a.to_vec();
        let mut q = vec![0u64; a.len() - dd];
        for k in (0..q.len()).rev() {
            let c = self.mul(r[k + dd], inv);
            if c == 0 {
                continue;
            }
            for (j, &dc) in d.iter().enumerate() {
                r[k + j] = self.sub(r[k + j], self.mul(c, dc));
            }
            q[k] = c;
        }
        r.truncate(dd);
        (trim(q), trim(r))
    }

    pub fn rem(&self, a: &[u64], d: &[u64]) -> PolyP {
        self.divrem(a, d).1
    }

    pub fn gcd(&self, a: &[u64], b: &[u64]) -> PolyP {
        let (mut a, mut b) = (a.to_vec(), b.to_vec());
        while !b.is_empty() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    /// `(g, s, t)` with `s*a + t*b = g`, `g` monic.
    pub fn ext_gcd(&self, a: &[u64], b: &[u64]) -> (PolyP, PolyP, PolyP) {
        let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
        let (mut s0, mut s1) = (vec![1u64], Vec::new());
        let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
        while !r1.is_empty() {
            let (q, r) = self.divrem(&r0, &r1);
            let s = self.poly_sub(&s0, &self.poly_mul(&q, &s1));
            let t = self.poly_sub(&t0, &self.poly_mul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        let inv = self.inv(*r0.last().expect("gcd of zeros"));
        (self.poly_scale(&r0, inv), self.poly_scale(&s0, inv), self.poly_scale(&t0, inv))
    }

    pub fn derivative(&self, a: &[u64]) -> PolyP {
        trim(a.iter().enumerate().skip(1).map(|(i, &c)| self.mul(c, i as u64 % self.p)).collect())
    }

    /// `base^e mod m` for an arbitrary-size exponent.
    pub fn powmod(&self, base: &[u64], e: &Integer, m: &[u64]) -> PolyP {
        let mut acc = vec![1u64];
        let b = self.rem(base, m);
        for i in (0..e.significant_bits()).rev() {
            acc = self.rem(&self.poly_mul(&acc, &acc), m);
            if e.get_bit(i) {
                acc = self.rem(&self.poly_mul(&acc, &b), m);
            }
        }
        acc
    }

    pub fn is_squarefree(&self, a: &[u64]) -> bool {
        let g = self.gcd(a, &self.derivative(a));
        g.len() == 1
    }

    /// Distinct-degree factorization of a monic squarefree polynomial:
    /// pairs `(product of all irreducible factors of degree d, d)`.
    pub fn distinct_degree(&self, f: &[u64]) -> Vec<(PolyP, usize)> {
        let mut out = Vec::new();
        let mut f = f.to_vec();
        let x = vec![0u64, 1];
        let mut h = x.clone();
        let p = Integer::from(self.p);
        let mut d = 0;
        while f.len() > 1 {
            d += 1;
            if 2 * d > f.len() - 1 {
                let deg = f.len() - 1;
                out.push((f, deg));
                break;
            }
            h = self.powmod(&h, &p, &f);
            let g = self.gcd(&self.poly_sub(&h, &x), &f);
            if g.len() > 1 {
                f = self.divrem(&f, &g).0;
                h = self.rem(&h, &f);
                out.push((g, d));
            }
        }
        out
    }

    /// Split a product of distinct monic irreducibles of degree `d` (odd `p`).
    pub fn equal_degree(&self, f: &[u64], d: usize, rng: &mut impl Rng) -> Vec<PolyP> {
        let n = f.len() - 1;
        if n == d {
            return vec![f.to_vec()];
        }
        let e = (Integer::from(self.p).pow(d as u32) - 1u32) / 2u32;
        loop {
            let a: PolyP = trim((0..n).map(|_| rng.gen_range(0..self.p)).collect());
            if a.len() < 2 {
                continue;
            }
            let b = self.powmod(&a, &e, f);
            let g = self.gcd(&self.poly_sub(&b, &[1]), f);
            if g.len() > 1 && g.len() < f.len() {
                let h = self.divrem(f, &g).0;
                let mut out = self.equal_degree(&g, d, rng);
                out.extend(self.equal_degree(&self.monic(&h), d, rng));
                return out;
            }
        }
    }

    /// Monic irreducible factors of a monic squarefree polynomial.
    pub fn factor_squarefree(&self, f: &[u64], rng: &mut impl Rng) -> Vec<PolyP> {
        let mut out = Vec::new();
        for (g, d) in self.distinct_degree(f) {
            out.extend(self.equal_degree(&g, d, rng));
        }
        out.sort();
        out
    }
}

pub fn trim(mut v: PolyP) -> PolyP {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// Deterministic primality for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let f = Zp { p: n };
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = f.pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = f.mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes below `start`, descending.
pub fn primes_below(start: u64) -> impl Iterator<Item = u64> {
    (2..start).rev().filter(|&n| is_prime(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn factors_mod_seven() {
        let f = Zp::new(7);
        // (t + 1)(t + 2)(t^2 + 1) over F7; t^2 + 1 is irreducible since 7 = 3 mod 4.
        let g = f.poly_mul(&f.poly_mul(&[1, 1], &[2, 1]), &[1, 0, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let fs = f.factor_squarefree(&g, &mut rng);
        assert_eq!(fs, vec![vec![1, 0, 1], vec![1, 1], vec![2, 1]]);
    }

    #[test]
    fn primality() {
        assert!(is_prime(2_147_483_647));
        assert!(!is_prime(2_147_483_649));
        assert_eq!(primes_below(20).collect::<Vec<_>>(), vec![19, 17, 13, 11, 7, 5, 3, 2]);
    }

    #[test]
    fn bezout_mod_p() {
        let f = Zp::new(101);
        let (g, s, t) = f.ext_gcd(&[3, 1, 1], &[5, 2]);
        let lhs = f.poly_add(&f.poly_mul(&s, &[3, 1, 1]), &f.poly_mul(&t, &[5, 2]));
        assert_eq!(lhs, g);
    }
}
