#![allow(dead_code)]

pub mod algebra;
pub mod reference;

use darboux::conductor::{mixed_derivative_gens, mixed_jacobian_gens, CUSPIDAL_TANGENTIAL_LAMBDA, NODAL_TANGENTIAL_LAMBDA};
use darboux::ideals::{Ideal, TermOrder};
use darboux::{Poly, QPoly, Rational, Vars};

pub fn zxy() -> Vars {
    Vars::new(&["z", "x", "y"])
}

pub fn xy() -> Vars {
    Vars::new(&["x", "y"])
}

pub fn p(s: &str, vars: &Vars) -> QPoly {
    Poly::parse(s, vars).unwrap()
}

/// A space curve over the `(x, y)` plane whose projection is not a local
/// isomorphism at the origin, and the ideal the formulas predict there.
pub struct LocalModel {
    pub name: &'static str,
    pub curve: Ideal,
    pub formula: Ideal,
}

fn curve(gens: &[&str]) -> Ideal {
    let v = zxy();
    Ideal::new(&v, gens.iter().map(|g| p(g, &v)))
}

fn plane(gens: Vec<QPoly>) -> Ideal {
    Ideal::new(&xy(), gens)
}

/// Contour scheme `F = dF/dz = 0` of a surface.
fn contour_of(f: &str) -> Ideal {
    let v = zxy();
    let f = p(f, &v);
    Ideal::new(&v, [f.partial(0), f])
}

pub fn models() -> Vec<LocalModel> {
    let v = xy();
    let m = || vec![p("x", &v), p("y", &v)];
    let transversal = curve(&["x", "z - 1"]).intersect(&curve(&["y^2", "z"])).unwrap();
    // Fold sheet y = z^2 + x z against the plane y = z; the double line is the x-axis.
    let nodal_surface = "(y - z^2 - x*z)*(y - z)";
    let nodal = mixed_derivative_gens(&p("x^2 + 4*y", &v), &p("y", &v), &Rational::from(NODAL_TANGENTIAL_LAMBDA));
    let m2 = vec![p("x^2", &v), p("x*y", &v), p("y^2", &v)];
    let cuspidal = mixed_jacobian_gens(&p("4*x^3 - 27*y", &v), &p("y", &v), &Rational::from(CUSPIDAL_TANGENTIAL_LAMBDA), &m2);
    vec![
        LocalModel { name: "node", curve: curve(&["y - x*z", "z^2 - 1 - x"]), formula: plane(m()) },
        LocalModel { name: "cusp", curve: curve(&["x - z^2", "y - z^3"]), formula: plane(m()) },
        LocalModel { name: "transversal", curve: transversal, formula: plane(vec![p("x", &v), p("y^2", &v)]) },
        LocalModel { name: "nodal tangential", curve: contour_of(nodal_surface), formula: plane(nodal) },
        LocalModel { name: "cuspidal tangential", curve: contour_of("z^3 - (y - x*z)^2"), formula: plane(cuspidal) },
    ]
}

/// `{g : g O_R ⊆ O_B}` for a curve `R` whose coordinate ring is generated by
/// `1, z` over the image `B`, as `(I_B + <q>) : p` with `z = p / q` on `R`.
pub fn quotient_conductor(curve: &Ideal) -> Ideal {
    let v = zxy();
    let image = curve.eliminate(&["z"]).unwrap();
    let elim = Ideal::with_order(&v, curve.generators().to_vec(), TermOrder::Elimination(1));
    let linear: Vec<QPoly> = elim.groebner().iter().filter(|g| g.degree_in(0) == Some(1)).cloned().collect();
    let sums = linear.iter().enumerate().flat_map(|(i, a)| linear[i + 1..].iter().map(move |b| a + b));
    let (q, pp) = linear
        .iter()
        .cloned()
        .chain(sums)
        .filter(|g| g.degree_in(0) == Some(1))
        .map(|g| {
            let c = g.coefficients_in(0);
            (c[1].restrict(&xy()).unwrap(), (-&c[0]).restrict(&xy()).unwrap())
        })
        .find(|(q, _)| {
            let qz = q.embed(&v).unwrap();
            curve.quotient_poly(&qz).unwrap().equals(curve)
        })
        .expect("z is a fraction with a nonzerodivisor denominator");
    let mut gens = image.generators().to_vec();
    gens.push(q);
    Ideal::new(&xy(), gens).quotient_poly(&pp).unwrap()
}

/// Equality of the localizations at the origin, for ideals whose local
/// colength there is below `n`.
pub fn locally_equal(a: &Ideal, b: &Ideal, n: u32) -> bool {
    let mn = Ideal::irrelevant(&xy()).power(n).unwrap();
    let a = a.sum(&mn).unwrap();
    let b = b.sum(&mn).unwrap();
    a.contains_ideal(&b) && b.contains_ideal(&a)
}

pub const LOCAL_ORDER: u32 = 10;

/// `U1 * A^k` with a random `U1` of degree `12 - 2k`: right shape, not a contour.
pub fn garbage_contour(seed: u64) -> QPoly {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let k = if seed % 3 == 2 { 3 } else { 2 };
    let vars = Vars::xyz();
    let u1 = Poly::from_terms(
        &vars,
        darboux::poly::monomials_of_degree(3, 12 - 2 * k).into_iter().map(|m| (m, Rational::from(rng.gen_range(-5i64..=5)))),
    );
    &u1 * &darboux::forward::absolute_form(&vars).pow(k)
}
