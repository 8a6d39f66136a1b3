//! Forward pipeline: generate Darboux cyclides, move the camera to the
//! origin and compute the apparent contour as a discriminant.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::Integer;
use serde::{Deserialize, Serialize};

use crate::poly::{discriminant, trial_divide, Poly, PolyError, Vars};
use crate::scalar::{Rational, Scalar};
use crate::QPoly;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ForwardError {
    #[error("degenerate cyclide: {0}")]
    Degenerate(String),
    #[error("camera lies on the surface")]
    CameraOnSurface,
    #[error("non-generic camera: {0}")]
    NonGenericCamera(String),
    #[error("instance generation gave up after {0} attempts")]
    Exhausted(usize),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseTag {
    Nodal,
    Cuspidal,
}

impl CaseTag {
    /// Multiplicity of `x^2 + y^2 + z^2` in the contour.
    pub fn a_multiplicity(self) -> u32 {
        match self {
            CaseTag::Nodal => 2,
            CaseTag::Cuspidal => 3,
        }
    }
}

/// `L` linear in `x, y, z` and `Q` quadratic in `x, y, z, w`, both over
/// the ring `x, y, z, w`.
#[derive(Debug, Clone, PartialEq)]
pub struct CyclideSpec {
    pub l: QPoly,
    pub q: QPoly,
    pub case: CaseTag,
}

pub fn absolute_form(vars: &Vars) -> QPoly {
    let mut a = Poly::zero(vars);
    for i in 0..3 {
        a = &a + &Poly::var(vars, i).pow(2);
    }
    a
}

/// Whether `L^2 - Q|_{w=0}` vanishes on the absolute conic.
pub fn is_cuspidal_spec(l: &QPoly, q: &QPoly) -> bool {
    let q0 = q.eval_var(3, &Rational::zero());
    let r = &l.pow(2) - &q0;
    r.is_zero() || r.div_exact(&absolute_form(l.vars())).is_some()
}

/// `A^2 + 2 A L w + Q w^2`.
pub fn make_cyclide(spec: &CyclideSpec) -> Result<QPoly, ForwardError> {
    let vars = Vars::xyzw();
    let l = spec.l.embed(&vars)?;
    let q = spec.q.embed(&vars)?;
    if !l.is_zero() && (!l.is_homogeneous() || l.total_degree() != Some(1) || !l.is_free_of(3)) {
        return Err(ForwardError::Degenerate("L must be a linear form in x, y, z".into()));
    }
    if !q.is_zero() && (!q.is_homogeneous() || q.total_degree() != Some(2)) {
        return Err(ForwardError::Degenerate("Q must be a quadratic form".into()));
    }
    if spec.case == CaseTag::Cuspidal && !is_cuspidal_spec(&l, &q) {
        return Err(ForwardError::Degenerate("cuspidal tag needs L^2 - Q(w=0) in <A>".into()));
    }
    let a = absolute_form(&vars);
    let w = Poly::var(&vars, 3);
    let two = Poly::constant(&vars, Rational::from(2));
    let f = &(&a.pow(2) + &(&(&two * &a) * &(&l * &w))) + &(&q * &w.pow(2));
    if f.div_exact(&w).is_some() {
        return Err(ForwardError::Degenerate("surface contains the plane w = 0".into()));
    }
    if is_square(&f, &l) {
        return Err(ForwardError::Degenerate("surface is a double quadric".into()));
    }
    Ok(f)
}

/// Whether `f = (A + L w + c w^2)^2`, the only way a cyclide can be a square.
fn is_square(f: &QPoly, l: &QPoly) -> bool {
    let vars = f.vars().clone();
    let top = f.coefficients_in(3).get(4).map(|c| c.constant_term()).unwrap_or_else(Rational::zero);
    let Some(c) = rational_root(&top, 2) else { return false };
    let w = Poly::var(&vars, 3);
    let base = &absolute_form(&vars) + &(l * &w);
    [c.clone(), -c].into_iter().any(|c| (&base + &w.pow(2).scale(&c)).pow(2) == *f)
}

/// `F(x + p1 w, y + p2 w, z + p3 w, w)`: moves the point `(p1:p2:p3:1)` to
/// the origin of the affine chart.
pub fn translate_camera(f: &QPoly, p: &[Rational; 3]) -> Result<QPoly, ForwardError> {
    let vars = f.vars().clone();
    let at = [p[0].clone(), p[1].clone(), p[2].clone(), Rational::one()];
    if f.eval(&at).is_zero() {
        return Err(ForwardError::CameraOnSurface);
    }
    let w = Poly::var(&vars, 3);
    let images: Vec<QPoly> = (0..3)
        .map(|i| &Poly::var(&vars, i) + &w.scale(&p[i]))
        .chain(std::iter::once(w.clone()))
        .collect();
    Ok(f.compose(&images))
}

/// `Disc_w(F)` in the ring `x, y, z`, normalized; requires `deg_w F = 4`.
pub fn apparent_contour(f: &QPoly) -> Result<QPoly, ForwardError> {
    if f.degree_in(3) != Some(4) {
        return Err(ForwardError::NonGenericCamera("degree in w is not 4".into()));
    }
    let d = discriminant(f, 3)?;
    Ok(d.restrict(&Vars::xyz())?)
}

/// Witness `G(x,y,z,w) = mu * F(x,y,z,d*w)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Scaling {
    pub d: Rational,
    pub mu: Rational,
}

/// Exact rational `k`-th root, if any.
pub fn rational_root(v: &Rational, k: u32) -> Option<Rational> {
    if v.is_negative() && k % 2 == 0 {
        return None;
    }
    let root = |n: &Integer| -> Option<Integer> {
        let neg = *n < 0;
        let a = n.clone().abs();
        let r = a.clone().root(k);
        if r.clone().pow(k) == a {
            Some(if neg { -r } else { r })
        } else {
            None
        }
    };
    let n = root(v.numer())?;
    let d = root(v.denom())?;
    Some(Rational::new(n, d))
}

/// Decide whether `g = mu * f(x, y, z, d w)` for rationals `d, mu != 0`.
pub fn equal_up_to_scaling(f: &QPoly, g: &QPoly) -> Option<Scaling> {
    if f.vars() != g.vars() || f.is_zero() || g.is_zero() {
        return None;
    }
    let wi = f.nvars() - 1;
    let fc = f.coefficients_in(wi);
    let gc = g.coefficients_in(wi);
    if fc.len() != gc.len() {
        return None;
    }
    let nonzero: Vec<usize> = (0..fc.len()).filter(|&k| !fc[k].is_zero()).collect();
    if (0..fc.len()).any(|k| fc[k].is_zero() != gc[k].is_zero()) {
        return None;
    }
    let ratio = |k: usize| -> Option<Rational> {
        let (m, c) = fc[k].leading()?;
        let r = gc[k].coeff(m) / c.clone();
        if gc[k] == fc[k].scale(&r) {
            Some(r)
        } else {
            None
        }
    };
    let k0 = nonzero[0];
    let r0 = ratio(k0)?;
    let candidates: Vec<Rational> = match nonzero.get(1) {
        None => vec![Rational::one()],
        Some(&k1) => {
            let r1 = ratio(k1)?;
            let e = (k1 - k0) as u32;
            let base = rational_root(&(r1 / r0.clone()), e)?;
            if e % 2 == 0 {
                vec![base.clone(), -base]
            } else {
                vec![base]
            }
        }
    };
    for d in candidates {
        let mu = r0.clone() / d.pow_u32(k0 as u32);
        let ok = nonzero
            .iter()
            .all(|&k| ratio(k).is_some_and(|r| r == mu.clone() * d.pow_u32(k as u32)));
        if ok {
            return Some(Scaling { d, mu });
        }
    }
    None
}

/// Ring torus with radii `big > small > 0`, centered at the origin with axis `z`.
pub fn torus(big: i64, small: i64) -> CyclideSpec {
    let vars = Vars::xyzw();
    let c = big * big - small * small;
    let text = format!("{} * (x^2 + y^2 + z^2) - {} * (x^2 + y^2) + {} * w^2", 2 * c, 4 * big * big, c * c);
    CyclideSpec {
        l: Poly::zero(&vars),
        q: Poly::parse(&text, &vars).expect("valid torus quadric"),
        case: CaseTag::Nodal,
    }
}

fn small(rng: &mut ChaCha8Rng) -> Rational {
    Rational::from(rng.gen_range(-5i64..=5))
}

/// Random spec with coefficients in `-5..=5`.
pub fn random_spec(rng: &mut ChaCha8Rng, case: CaseTag) -> CyclideSpec {
    let vars = Vars::xyzw();
    let var = |i: usize| Poly::<Rational>::var(&vars, i);
    let mut l = Poly::zero(&vars);
    for i in 0..3 {
        l = &l + &var(i).scale(&small(rng));
    }
    let q = match case {
        CaseTag::Nodal => {
            let mut q = Poly::zero(&vars);
            for i in 0..4 {
                for j in i..4 {
                    q = &q + &(&var(i) * &var(j)).scale(&small(rng));
                }
            }
            q
        }
        CaseTag::Cuspidal => {
            let gamma = loop {
                let g = small(rng);
                if !g.is_zero() {
                    break g;
                }
            };
            let mut m = Poly::zero(&vars);
            for i in 0..4 {
                m = &m + &var(i).scale(&small(rng));
            }
            &(&l.pow(2) + &absolute_form(&vars).scale(&gamma)) + &(&var(3) * &m)
        }
    };
    CyclideSpec { l, q, case }
}

/// A generated surface seen from a generic camera.
#[derive(Debug, Clone)]
pub struct Instance {
    pub spec: CyclideSpec,
    pub camera: [Rational; 3],
    /// Surface in camera coordinates.
    pub surface: QPoly,
    /// Apparent contour, degree 12.
    pub contour: QPoly,
}

/// Image of `f` under inversion in the unit sphere centred at the camera,
/// `(x : y : z : w) -> (x w : y w : z w : A)`; again a Darboux cyclide.
pub fn invert_at_camera(f: &QPoly) -> Result<QPoly, ForwardError> {
    let vars = f.vars().clone();
    let w = Poly::var(&vars, 3);
    let a = absolute_form(&vars);
    let images = [&Poly::var(&vars, 0) * &w, &Poly::var(&vars, 1) * &w, &Poly::var(&vars, 2) * &w, a.clone()];
    let mut g = f.compose(&images);
    while let Some(h) = g.div_exact(&a) {
        g = h;
    }
    while let Some(h) = g.div_exact(&w) {
        g = h;
    }
    if g.total_degree() != Some(4) {
        return Err(ForwardError::Degenerate("inversion does not give a quartic".into()));
    }
    Ok(g.normalized())
}

/// Check the contour has degree 12 and the expected power of `A`.
pub fn check_contour(u: &QPoly, case: CaseTag) -> Result<(), ForwardError> {
    if u.total_degree() != Some(12) || !u.is_homogeneous() {
        return Err(ForwardError::NonGenericCamera("contour is not a curve of degree 12".into()));
    }
    let (_, k) = trial_divide(u, &absolute_form(u.vars()))?;
    if k != case.a_multiplicity() {
        return Err(ForwardError::NonGenericCamera(format!("absolute conic has multiplicity {k}")));
    }
    Ok(())
}

/// Build the instance for a given spec and camera.
pub fn instance_from(spec: CyclideSpec, camera: [Rational; 3]) -> Result<Instance, ForwardError> {
    let f = make_cyclide(&spec)?;
    let surface = translate_camera(&f, &camera)?;
    let contour = apparent_contour(&surface)?;
    check_contour(&contour, spec.case)?;
    Ok(Instance { spec, camera, surface, contour })
}

/// Deterministic random instance; degenerate draws are resampled.
pub fn random_instance(seed: u64, case: CaseTag) -> Result<Instance, ForwardError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    const ATTEMPTS: usize = 64;
    for _ in 0..ATTEMPTS {
        let spec = random_spec(&mut rng, case);
        let camera = [small(&mut rng), small(&mut rng), small(&mut rng)];
        if let Ok(inst) = instance_from(spec, camera) {
            return Ok(inst);
        }
    }
    Err(ForwardError::Exhausted(ATTEMPTS))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> QPoly {
        Poly::parse(s, &Vars::xyzw()).unwrap()
    }

    #[test]
    fn inversion_keeps_the_contour() {
        let inst = random_instance(2, CaseTag::Nodal).unwrap();
        let g = invert_at_camera(&inst.surface).unwrap();
        assert!(equal_up_to_scaling(&g, &inst.surface).is_none());
        assert!(equal_up_to_scaling(&invert_at_camera(&g).unwrap(), &inst.surface).is_some());
        let u = apparent_contour(&g).unwrap();
        assert!(u.is_scalar_multiple_of(&inst.contour));
    }

    #[test]
    fn torus_equation() {
        let f = make_cyclide(&torus(2, 1)).unwrap();
        assert_eq!(f, q("(x^2 + y^2 + z^2 + 3*w^2)^2 - 16*w^2*(x^2 + y^2)"));
    }

    #[test]
    fn double_quadric_rejected() {
        let sq = CyclideSpec { l: q("x"), q: q("x^2"), case: CaseTag::Nodal };
        assert!(matches!(make_cyclide(&sq), Err(ForwardError::Degenerate(_))));
        let sq = CyclideSpec {
            l: q("x"),
            q: q("x^2 + 2*(x^2 + y^2 + z^2) + 2*x*w + w^2"),
            case: CaseTag::Nodal,
        };
        assert!(matches!(make_cyclide(&sq), Err(ForwardError::Degenerate(_))));
    }

    #[test]
    fn translation_preserves_slice() {
        let f = make_cyclide(&torus(2, 1)).unwrap();
        let p = [Rational::from(1), Rational::from(-2), Rational::from(5)];
        let g = translate_camera(&f, &p).unwrap();
        assert_eq!(g.eval_var(3, &Rational::zero()), f.eval_var(3, &Rational::zero()));
        let zero = [Rational::zero(), Rational::zero(), Rational::zero()];
        assert_eq!(translate_camera(&f, &zero).unwrap(), f);
    }

    #[test]
    fn translations_compose() {
        let f = make_cyclide(&torus(3, 1)).unwrap();
        let p = [Rational::from(1), Rational::from(2), Rational::from(3)];
        let r = [Rational::from(-4), Rational::from(1), Rational::from(1)];
        let pr = [Rational::from(-3), Rational::from(3), Rational::from(4)];
        let a = translate_camera(&translate_camera(&f, &p).unwrap(), &r).unwrap();
        assert_eq!(a, translate_camera(&f, &pr).unwrap());
    }

    #[test]
    fn scaling_witness() {
        let f = make_cyclide(&torus(2, 1)).unwrap();
        assert_eq!(equal_up_to_scaling(&f, &f), Some(Scaling { d: Rational::one(), mu: Rational::one() }));
        let vars = f.vars().clone();
        let images: Vec<QPoly> = (0..4)
            .map(|i| if i == 3 { Poly::var(&vars, 3).scale(&Rational::from(2)) } else { Poly::var(&vars, i) })
            .collect();
        let g = f.compose(&images).scale(&Rational::from((-3, 7)));
        let s = equal_up_to_scaling(&f, &g).unwrap();
        assert_eq!(s.mu, Rational::from((-3, 7)));
        assert!(s.d == Rational::from(2) || s.d == Rational::from(-2));
        assert!(equal_up_to_scaling(&f, &q("x^4 + w^4")).is_none());
    }

    #[test]
    fn random_nodal_contour_has_double_conic() {
        let inst = random_instance(1, CaseTag::Nodal).unwrap();
        let (u1, k) = trial_divide(&inst.contour, &absolute_form(&Vars::xyz())).unwrap();
        assert_eq!(k, 2);
        assert_eq!(u1.total_degree(), Some(8));
    }

    #[test]
    fn random_cuspidal_contour_has_triple_conic() {
        let inst = random_instance(2, CaseTag::Cuspidal).unwrap();
        let (u1, k) = trial_divide(&inst.contour, &absolute_form(&Vars::xyz())).unwrap();
        assert_eq!(k, 3);
        assert_eq!(u1.total_degree(), Some(6));
    }
}
