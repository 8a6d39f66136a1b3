//! Factorization of univariate integer polynomials: modular factorization,
//! Hensel lifting and exhaustive recombination.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::Integer;

use super::intpoly::ZPoly;
use super::modp::{primes_below, PolyP, Zp};
use super::PolyError;

/// Largest degree accepted by [`factor_zpoly`].
pub const MAX_FACTOR_DEGREE: usize = 40;

/// Irreducible factorization with multiplicities; factors are primitive
/// with positive leading coefficient, sorted by degree then coefficients.
pub fn factor_zpoly(f: &ZPoly) -> Result<Vec<(ZPoly, u32)>, PolyError> {
    if f.is_zero() {
        return Err(PolyError::Degenerate("factorization of zero".into()));
    }
    let n = f.degree().unwrap();
    if n > MAX_FACTOR_DEGREE {
        return Err(PolyError::DegreeBound(format!("degree {n} > {MAX_FACTOR_DEGREE}")));
    }
    let mut out = Vec::new();
    for (g, m) in f.squarefree() {
        for h in factor_squarefree(&g) {
            out.push((h, m));
        }
    }
    out.sort_by(|a, b| {
        a.0.degree()
            .cmp(&b.0.degree())
            .then_with(|| a.0.coeffs().cmp(b.0.coeffs()))
    });
    Ok(out)
}

/// Irreducible factors of a primitive squarefree polynomial.
pub fn factor_squarefree(f: &ZPoly) -> Vec<ZPoly> {
    let f = f.primitive();
    let n = f.degree().unwrap_or(0);
    if n <= 1 {
        return if n == 1 { vec![f] } else { Vec::new() };
    }
    // Pull out powers of t so the constant term is nonzero.
    if f.coeffs()[0] == 0 {
        let k = f.coeffs().iter().position(|c| *c != 0).unwrap();
        let rest = ZPoly::new(f.coeffs()[k..].to_vec());
        let mut out = vec![ZPoly::from_i64(&[0, 1])];
        out.extend(factor_squarefree(&rest));
        return out;
    }
    let (field, mods) = choose_prime(&f);
    if mods.len() == 1 {
        return vec![f];
    }
    let bound = coefficient_bound(&f);
    let mut k = 1u32;
    let mut pk = Integer::from(field.p);
    while pk <= bound {
        pk *= field.p;
        k += 1;
    }
    let lifted = hensel_lift(&f, field, &mods, k);
    recombine(&f, lifted, &pk)
}

/// Try a handful of primes and keep the one with the fewest modular factors.
fn choose_prime(f: &ZPoly) -> (Zp, Vec<PolyP>) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut best: Option<(Zp, Vec<PolyP>)> = None;
    let mut tried = 0;
    for p in primes_below(1 << 31) {
        let field = Zp::new(p);
        if field.reduce_int(f.lc()) == 0 {
            continue;
        }
        let fp = field.monic(&field.reduce(f));
        if !field.is_squarefree(&fp) {
            continue;
        }
        let fs = field.factor_squarefree(&fp, &mut rng);
        let better = best.as_ref().map_or(true, |(_, b)| fs.len() < b.len());
        if better {
            best = Some((field, fs));
        }
        tried += 1;
        if tried == 5 || best.as_ref().is_some_and(|(_, b)| b.len() == 1) {
            break;
        }
    }
    best.expect("a suitable prime exists")
}

/// Twice the Mignotte bound times the leading coefficient.
fn coefficient_bound(f: &ZPoly) -> Integer {
    let n = f.degree().unwrap() as u32;
    let mut norm2 = Integer::new();
    for c in f.coeffs() {
        norm2 += Integer::from(c * c);
    }
    let norm = norm2.sqrt() + 1u32;
    let lc = f.lc().clone().abs();
    Integer::from(2) * Integer::from(2).pow(n) * norm * lc
}

fn symmetric_mod(v: &Integer, m: &Integer) -> Integer {
    let mut r = modulo(v, m);
    if Integer::from(&r * 2u32) > *m {
        r -= m;
    }
    r
}

fn modulo(v: &Integer, m: &Integer) -> Integer {
    let mut r = Integer::from(v % m);
    if r < 0 {
        r += m;
    }
    r
}

fn to_z(p: &PolyP) -> ZPoly {
    ZPoly::new(p.iter().map(|&c| Integer::from(c)).collect())
}

fn mod_poly(f: &ZPoly, m: &Integer) -> ZPoly {
    ZPoly::new(f.coeffs().iter().map(|c| modulo(c, m)).collect())
}

/// Lift `f = lc * prod(mods)` (mods monic mod p) to monic factors mod `p^k`.
fn hensel_lift(f: &ZPoly, field: Zp, mods: &[PolyP], k: u32) -> Vec<ZPoly> {
    let pk = Integer::from(field.p).pow(k);
    let lc_inv = f.lc().clone().invert(&pk).expect("lc coprime to p");
    let monic_f = mod_poly(&f.scale(&lc_inv), &pk);
    lift_tree(&monic_f, field, mods, k)
}

fn lift_tree(f: &ZPoly, field: Zp, mods: &[PolyP], k: u32) -> Vec<ZPoly> {
    if mods.len() == 1 {
        return vec![f.clone()];
    }
    let mid = mods.len() / 2;
    let g0 = mods[..mid].iter().fold(vec![1u64], |acc, m| field.poly_mul(&acc, m));
    let h0 = mods[mid..].iter().fold(vec![1u64], |acc, m| field.poly_mul(&acc, m));
    let (g, h) = lift_pair(f, field, &g0, &h0, k);
    let mut out = lift_tree(&g, field, &mods[..mid], k);
    out.extend(lift_tree(&h, field, &mods[mid..], k));
    out
}

/// Linear Hensel lifting of a coprime monic pair `f = g*h mod p` to `p^k`.
fn lift_pair(f: &ZPoly, field: Zp, g0: &PolyP, h0: &PolyP, k: u32) -> (ZPoly, ZPoly) {
    let p = Integer::from(field.p);
    let (one, _, t) = field.ext_gcd(g0, h0);
    debug_assert_eq!(one, vec![1]);
    let mut g = to_z(g0);
    let mut h = to_z(h0);
    let mut pj = p.clone();
    for _ in 1..k {
        let next = Integer::from(&pj * &p);
        let diff = mod_poly(&f.sub(&g.mul(&h)), &next);
        let e: ZPoly = ZPoly::new(diff.coeffs().iter().map(|c| Integer::from(c / &pj)).collect());
        let ep = field.reduce(&e);
        // sigma*g + tau*h = e mod p with deg tau < deg g.
        let tau = field.rem(&field.poly_mul(&ep, &t), g0);
        let sigma = field.divrem(&field.poly_sub(&ep, &field.poly_mul(&tau, h0)), g0).0;
        h = mod_poly(&h.add(&to_z(&sigma).scale(&pj)), &next);
        g = mod_poly(&g.add(&to_z(&tau).scale(&pj)), &next);
        pj = next;
    }
    (g, h)
}

/// Combine lifted factors into true factors over the integers.
fn recombine(f: &ZPoly, mut lifted: Vec<ZPoly>, pk: &Integer) -> Vec<ZPoly> {
    let mut out = Vec::new();
    let mut f = f.clone();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut found = false;
        for subset in subsets(lifted.len(), size) {
            let lc = f.lc().clone();
            let mut cand = ZPoly::new(vec![lc.clone()]);
            for &i in &subset {
                cand = mod_poly(&cand.mul(&lifted[i]), pk);
            }
            let cand = ZPoly::new(cand.coeffs().iter().map(|c| symmetric_mod(c, pk)).collect()).primitive();
            if let Some(q) = f.div_exact(&cand) {
                out.push(cand);
                f = q.primitive();
                for &i in subset.iter().rev() {
                    lifted.remove(i);
                }
                found = true;
                break;
            }
        }
        if !found {
            size += 1;
        }
    }
    if f.degree().unwrap_or(0) > 0 {
        out.push(f.primitive());
    }
    out
}

/// All increasing index subsets of `0..n` with `k` elements.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_difference_of_squares() {
        let f = ZPoly::from_i64(&[-1, 0, 1]);
        let fs = factor_zpoly(&f).unwrap();
        assert_eq!(fs, vec![(ZPoly::from_i64(&[-1, 1]), 1), (ZPoly::from_i64(&[1, 1]), 1)]);
    }

    #[test]
    fn keeps_irreducibles() {
        let f = ZPoly::from_i64(&[1, 0, 1]);
        assert_eq!(factor_zpoly(&f).unwrap(), vec![(f, 1)]);
        // t^4 + 1 splits modulo every prime but is irreducible over Q.
        let g = ZPoly::from_i64(&[1, 0, 0, 0, 1]);
        assert_eq!(factor_zpoly(&g).unwrap(), vec![(g, 1)]);
    }

    #[test]
    fn repeated_and_cubic() {
        let a = ZPoly::from_i64(&[-2, 0, 1]);
        let b = ZPoly::from_i64(&[-1, -1, 0, 1]);
        let f = a.pow(2).mul(&b);
        assert_eq!(factor_zpoly(&f).unwrap(), vec![(a, 2), (b, 1)]);
    }

    #[test]
    fn non_monic_factors() {
        let a = ZPoly::from_i64(&[3, 0, 0, 5]);
        let b = ZPoly::from_i64(&[-7, 2, 0, 0, 4]);
        let c = ZPoly::from_i64(&[1, -6]);
        let f = a.mul(&b).mul(&c);
        let fs = factor_zpoly(&f).unwrap();
        let c = c.primitive();
        assert_eq!(fs, vec![(c, 1), (a, 1), (b, 1)]);
    }
}
