//! Sylvester resultants, subresultants and discriminants by fraction-free
//! elimination over the polynomial ring.

use super::polynomial::Poly;
use super::PolyError;
use crate::scalar::{Rational, Scalar};

/// Determinant of a square matrix of polynomials by Bareiss elimination.
pub fn det_bareiss<C: Scalar>(mut m: Vec<Vec<Poly<C>>>, vars: &super::Vars) -> Poly<C> {
    let n = m.len();
    if n == 0 {
        return Poly::one(vars);
    }
    debug_assert!(m.iter().all(|r| r.len() == n));
    let mut sign_flip = false;
    let mut prev = Poly::one(vars);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            // Prefer the sparsest nonzero pivot.
            let swap = (k + 1..n)
                .filter(|&i| !m[i][k].is_zero())
                .min_by_key(|&i| m[i][k].nterms());
            match swap {
                Some(i) => {
                    m.swap(k, i);
                    sign_flip = !sign_flip;
                }
                None => return Poly::zero(vars),
            }
        }
        let (top, rest) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let pivot = &pivot_row[k];
        for row in rest.iter_mut() {
            let lead = row[k].clone();
            for j in k + 1..n {
                let mut v = pivot * &row[j];
                if !lead.is_zero() && !pivot_row[j].is_zero() {
                    v = &v - &(&lead * &pivot_row[j]);
                }
                row[j] = if k == 0 { v } else { v.div_exact(&prev).expect("Bareiss division is exact") };
            }
            row[k] = Poly::zero(vars);
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign_flip {
        -d
    } else {
        d
    }
}

fn sylvester_rows<C: Scalar>(p: &[Poly<C>], q: &[Poly<C>], j: usize) -> Vec<Vec<Poly<C>>> {
    let m = p.len() - 1;
    let n = q.len() - 1;
    let width = m + n - j;
    let vars = p[0].vars().clone();
    let mut rows = Vec::with_capacity(m + n - 2 * j);
    for (coeffs, count) in [(p, n - j), (q, m - j)] {
        for r in 0..count {
            let mut row = vec![Poly::zero(&vars); width];
            // Row for v^(count-1-r) * poly; column c holds degree width-1-c.
            let shift = count - 1 - r;
            for (e, c) in coeffs.iter().enumerate() {
                let col = width - 1 - (e + shift);
                row[col] = c.clone();
            }
            rows.push(row);
        }
    }
    rows
}

fn coefficients_with_degree<C: Scalar>(p: &Poly<C>, v: usize, what: &str) -> Result<Vec<Poly<C>>, PolyError> {
    let c = p.coefficients_in(v);
    if c.len() < 2 || p.is_zero() {
        return Err(PolyError::Degenerate(format!("{what} is constant in {}", p.vars().names()[v])));
    }
    Ok(c)
}

/// Sylvester resultant of `p` and `q` with respect to variable `v`.
pub fn resultant<C: Scalar>(p: &Poly<C>, q: &Poly<C>, v: usize) -> Result<Poly<C>, PolyError> {
    if p.vars() != q.vars() {
        return Err(PolyError::VarMismatch(format!("{:?} vs {:?}", p.vars(), q.vars())));
    }
    let pc = coefficients_with_degree(p, v, "first argument")?;
    let qc = coefficients_with_degree(q, v, "second argument")?;
    let rows = sylvester_rows(&pc, &qc, 0);
    Ok(det_bareiss(rows, p.vars()))
}

/// The `j`-th subresultant as coefficients `[s_0, ..., s_j]` of `v^0..v^j`.
pub fn subresultant<C: Scalar>(p: &Poly<C>, q: &Poly<C>, v: usize, j: usize) -> Result<Vec<Poly<C>>, PolyError> {
    let pc = coefficients_with_degree(p, v, "first argument")?;
    let qc = coefficients_with_degree(q, v, "second argument")?;
    let (m, n) = (pc.len() - 1, qc.len() - 1);
    if j >= m.min(n) {
        return Err(PolyError::Degenerate(format!("subresultant index {j} too large")));
    }
    let rows = sylvester_rows(&pc, &qc, j);
    let width = m + n - j;
    let lead_cols = m + n - 2 * j - 1;
    let mut out = Vec::with_capacity(j + 1);
    for i in 0..=j {
        let col = width - 1 - i;
        let sq: Vec<Vec<Poly<C>>> = rows
            .iter()
            .map(|r| {
                let mut s: Vec<Poly<C>> = r[..lead_cols].to_vec();
                s.push(r[col].clone());
                s
            })
            .collect();
        out.push(det_bareiss(sq, p.vars()));
    }
    Ok(out)
}

/// `Res_v(p, dp/dv)` with content removed and positive leading coefficient.
pub fn discriminant(p: &Poly<Rational>, v: usize) -> Result<Poly<Rational>, PolyError> {
    if p.degree_in(v).unwrap_or(0) < 2 {
        return Err(PolyError::Degenerate("discriminant needs degree at least 2".into()));
    }
    let r = resultant(p, &p.partial(v), v)?;
    Ok(r.normalized())
}

/// Largest `k` with `d^k | p`, and `p / d^k`.
pub fn trial_divide<C: Scalar>(p: &Poly<C>, d: &Poly<C>) -> Result<(Poly<C>, u32), PolyError> {
    if p.is_zero() {
        return Err(PolyError::Degenerate("trial division of zero".into()));
    }
    if d.is_constant() {
        return Err(PolyError::Degenerate("trial division by a constant".into()));
    }
    let mut q = p.clone();
    let mut k = 0;
    while let Some(next) = q.div_exact(d) {
        q = next;
        k += 1;
    }
    Ok((q, k))
}

/// Whether `a = c * b` for some nonzero rational `c`, by cross-multiplying
/// leading coefficients.
pub fn proportional(a: &Poly<Rational>, b: &Poly<Rational>) -> bool {
    if a.is_zero() || b.is_zero() {
        return a.is_zero() && b.is_zero();
    }
    let la = a.leading_coeff();
    let lb = b.leading_coeff();
    (&a.scale(&lb) - &b.scale(&la)).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Vars;

    fn q(s: &str) -> Poly<Rational> {
        Poly::parse(s, &Vars::xyzw()).unwrap()
    }

    #[test]
    fn linear_resultant() {
        let r = resultant(&q("w - x"), &q("w - y"), 3).unwrap();
        assert!(proportional(&r, &q("x - y")));
    }

    #[test]
    fn sylvester_three_by_three() {
        let a = "(x^2+y^2+z^2)";
        let r = resultant(&q(&format!("3*w^2 - 4*z*w + {a}")), &q("6*w - 4*z"), 3).unwrap();
        // a*e^2 - b*d*e + c*d^2 with (a,b,c,d,e) = (3, -4z, A, 6, -4z).
        assert_eq!(r, q(&format!("36*{a} - 48*z^2")));
    }

    #[test]
    fn quadratic_discriminant() {
        let d = discriminant(&q("3*w^2 - 4*z*w + x^2 + y^2 + z^2"), 3).unwrap();
        // b^2 - 4ac = 16z^2 - 12A, content 4, grevlex leads with x^2 (negative).
        assert_eq!(d, q("3*x^2 + 3*y^2 - z^2"));
        assert!(discriminant(&q("w^2"), 3).unwrap().is_zero());
    }

    #[test]
    fn subresultant_gives_common_root() {
        // (w - x)(w - y) and (w - x)(w + z): first subresultant is proportional to w - x.
        let p = q("(w - x)*(w - y)");
        let r = q("(w - x)*(w + z)");
        let s = subresultant(&p, &r, 3, 1).unwrap();
        let lin = &s[0] + &(&s[1] * &q("w"));
        let g = lin.div_exact(&q("w - x")).expect("divisible");
        assert!(g.is_free_of(3));
    }

    #[test]
    fn trial_division_counts() {
        let a = q("x^2 + y^2 + z^2");
        let p = &a.pow(2) * &q("x^8");
        assert_eq!(trial_divide(&p, &a).unwrap(), (q("x^8"), 2));
        assert_eq!(trial_divide(&q("x^8"), &a).unwrap(), (q("x^8"), 0));
        assert!(trial_divide(&Poly::zero(&Vars::xyzw()), &a).is_err());
    }
}
