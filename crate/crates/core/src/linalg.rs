//! Dense exact linear algebra over a [`Scalar`] field.

use crate::scalar::{Rational, Scalar};

/// Row-reduce in place to reduced row echelon form; returns pivot columns.
///
/// Pivots are chosen by smallest [`Scalar::weight`] to limit coefficient
/// growth over the rationals.
pub fn rref<C: Scalar>(rows: &mut Vec<Vec<C>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let best = (r..rows.len())
            .filter(|&i| !rows[i][c].is_negligible())
            .min_by_key(|&i| rows[i][c].weight());
        let Some(p) = best else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].inv();
        for v in rows[r].iter_mut().skip(c) {
            *v = v.mul_ref(&inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for j in c..ncols {
                if !pivot_row[j].is_zero() {
                    row[j].sub_mul_assign(&f, &pivot_row[j]);
                }
            }
            row[c] = C::zero();
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank<C: Scalar>(rows: &[Vec<C>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, ncols).len()
}

/// Basis of `{v : M v = 0}` for the matrix with the given rows.
pub fn kernel<C: Scalar>(rows: &[Vec<C>], ncols: usize) -> Vec<Vec<C>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    let mut is_pivot = vec![None; ncols];
    for (r, &c) in pivots.iter().enumerate() {
        is_pivot[c] = Some(r);
    }
    let mut out = Vec::new();
    for free in 0..ncols {
        if is_pivot[free].is_some() {
            continue;
        }
        let mut v = vec![C::zero(); ncols];
        v[free] = C::one();
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = -m[r][free].clone();
        }
        out.push(v);
    }
    out
}

/// Basis of `{u : u^T M = 0}`, the left kernel.
pub fn left_kernel<C: Scalar>(rows: &[Vec<C>], ncols: usize) -> Vec<Vec<C>> {
    kernel(&transpose(rows, ncols), rows.len())
}

pub fn transpose<C: Scalar>(rows: &[Vec<C>], ncols: usize) -> Vec<Vec<C>> {
    (0..ncols).map(|j| rows.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Outcome of solving `A x = b`.
#[derive(Clone, Debug, PartialEq)]
pub enum Solution<C> {
    Inconsistent,
    Unique(Vec<C>),
    /// A particular solution and a kernel basis.
    Family(Vec<C>, Vec<Vec<C>>),
}

pub fn solve<C: Scalar>(a: &[Vec<C>], b: &[C], ncols: usize) -> Solution<C> {
    let mut aug: Vec<Vec<C>> = a
        .iter()
        .zip(b)
        .map(|(r, bv)| {
            let mut r = r.clone();
            r.push(bv.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return Solution::Inconsistent;
    }
    let mut x = vec![C::zero(); ncols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][ncols].clone();
    }
    let ker = kernel(a, ncols);
    if ker.is_empty() {
        Solution::Unique(x)
    } else {
        Solution::Family(x, ker)
    }
}

/// Kernel of a rational matrix by fraction-free integer elimination.
///
/// Rows are scaled to primitive integer vectors before elimination; this is
/// much faster than field elimination when entries are large.
pub fn kernel_q(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    use rug::Integer;
    let mut m: Vec<Vec<Integer>> = rows.iter().map(|r| primitive_integer_row(r)).collect();
    m.retain(|r| r.iter().any(|v| *v != 0));
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let best = (r..m.len())
            .filter(|&i| m[i][c] != 0)
            .min_by_key(|&i| m[i][c].significant_bits());
        let Some(p) = best else { continue };
        m.swap(r, p);
        let (head, tail) = m.split_at_mut(r + 1);
        let prow = &head[r];
        for row in tail.iter_mut() {
            if row[c] == 0 {
                continue;
            }
            let g = Integer::from(prow[c].gcd_ref(&row[c]));
            let a = Integer::from(prow[c].div_exact_ref(&g));
            let b = Integer::from(row[c].div_exact_ref(&g));
            for j in c..ncols {
                let mut v = Integer::from(&row[j] * &a);
                v -= Integer::from(&prow[j] * &b);
                row[j] = v;
            }
            make_primitive(row);
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    // Back substitution over the rationals on the small echelon system.
    let echelon: Vec<Vec<Rational>> = m
        .into_iter()
        .map(|row| row.into_iter().map(Rational::from).collect())
        .collect();
    let mut e = echelon;
    rref(&mut e, ncols);
    kernel(&e, ncols)
}

fn make_primitive(row: &mut [rug::Integer]) {
    let mut g = rug::Integer::new();
    for v in row.iter() {
        g.gcd_mut(v);
        if g == 1 {
            return;
        }
    }
    if g > 1 {
        for v in row.iter_mut() {
            v.div_exact_mut(&g);
        }
    }
}

/// Integer vector proportional to a rational vector.
pub fn primitive_integer_row(r: &[Rational]) -> Vec<rug::Integer> {
    let mut den = rug::Integer::from(1);
    for v in r {
        den.lcm_mut(v.denom());
    }
    let mut out: Vec<rug::Integer> = r
        .iter()
        .map(|v| rug::Integer::from(v.numer() * rug::Integer::from(den.div_exact_ref(v.denom()))))
        .collect();
    make_primitive(&mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[&[i64]]) -> Vec<Vec<Rational>> {
        v.iter().map(|r| r.iter().map(|&x| Rational::from(x)).collect()).collect()
    }

    fn mat_vec(a: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
        a.iter()
            .map(|r| r.iter().zip(v).fold(Rational::from(0), |acc, (x, y)| acc + x.clone() * y.clone()))
            .collect()
    }

    #[test]
    fn kernel_of_rank_two() {
        let a = q(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let k = kernel(&a, 3);
        assert_eq!(k.len(), 1);
        assert!(mat_vec(&a, &k[0]).iter().all(|v| *v == Rational::from(0)));
        assert_eq!(kernel_q(&a, 3).len(), 1);
    }

    #[test]
    fn solve_cases() {
        let a = q(&[&[1, 1], &[1, -1]]);
        let b = vec![Rational::from(3), Rational::from(1)];
        assert_eq!(solve(&a, &b, 2), Solution::Unique(vec![Rational::from(2), Rational::from(1)]));
        let a = q(&[&[1, 1], &[2, 2]]);
        assert_eq!(solve(&a, &b, 2), Solution::Inconsistent);
    }

    #[test]
    fn fraction_free_kernel_agrees() {
        let a = q(&[&[3, -7, 2, 0, 5], &[1, 1, 1, 1, 1], &[4, -6, 3, 1, 6], &[0, 2, -5, 9, 1]]);
        let k1 = kernel(&a, 5);
        let k2 = kernel_q(&a, 5);
        assert_eq!(k1, k2);
    }
}
