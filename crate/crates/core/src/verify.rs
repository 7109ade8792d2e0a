//! Lax-pair identities, the entwining Yang–Baxter equation, the Yang–Baxter
//! equation and Lax-triple uniqueness, all checked in exact arithmetic.

use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::leaves::{family_lax, EdgeMap, LaxFamily, LeafPoint, MapOutput};
use crate::matpoly::char_poly;
use crate::numerics::{Rational, Scalar};
use crate::refactor::{recover_from_triple_product, TripleProduct};
use crate::sample::{random_leaf_point, random_rational};

/// Points `x, y, z` with parameters `α, β, γ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TriplePoint<T> {
    pub x: LeafPoint<T>,
    pub y: LeafPoint<T>,
    pub z: LeafPoint<T>,
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
}

impl<T: Scalar> TriplePoint<T> {
    pub fn new(x: LeafPoint<T>, y: LeafPoint<T>, z: LeafPoint<T>, alpha: T, beta: T, gamma: T) -> Self {
        TriplePoint { x, y, z, alpha, beta, gamma }
    }

    pub fn points(&self) -> [LeafPoint<T>; 3] {
        [self.x.clone(), self.y.clone(), self.z.clone()]
    }

    pub fn params(&self) -> [T; 3] {
        [self.alpha.clone(), self.beta.clone(), self.gamma.clone()]
    }

    /// Same parameters, new points.
    pub fn with_points(&self, [x, y, z]: [LeafPoint<T>; 3]) -> Self {
        TriplePoint { x, y, z, ..self.clone() }
    }
}

impl<T: fmt::Display> fmt::Display for TriplePoint<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "x=({}, {}), y=({}, {}), z=({}, {}), α={}, β={}, γ={}",
            self.x.x1, self.x.x2, self.y.x1, self.y.x2, self.z.x1, self.z.x2, self.alpha, self.beta, self.gamma
        )
    }
}

/// A parametric map on pairs: `(α, β, x, y) ↦ (u, v)`.
pub type PairMap<'a, T> = dyn Fn(&T, &T, &LeafPoint<T>, &LeafPoint<T>) -> Result<MapOutput<T>> + 'a;

/// `S^{ij}`: applies `f` to slots `i < j` of the triple with their parameters,
/// identity on the remaining slot.
pub fn act_on_slots<T: Scalar>(
    f: &PairMap<'_, T>,
    i: usize,
    j: usize,
    params: &[T; 3],
    pts: &mut [LeafPoint<T>; 3],
) -> Result<()> {
    let (u, v) = f(&params[i], &params[j], &pts[i], &pts[j])?;
    pts[i] = u;
    pts[j] = v;
    Ok(())
}

fn labelled<T: Scalar>(
    name: &str,
    f: &PairMap<'_, T>,
    i: usize,
    j: usize,
    params: &[T; 3],
    pts: &mut [LeafPoint<T>; 3],
) -> Result<()> {
    act_on_slots(f, i, j, params, pts).map_err(|e| Error::Factor { factor: name.into(), source: Box::new(e) })
}

/// Images of the triple under the left and right chains.
pub type Sides<T> = ([LeafPoint<T>; 3], [LeafPoint<T>; 3]);

/// Both sides of `T²³∘R¹³∘S¹² = S¹²∘R¹³∘T²³`: the left chain gives
/// `(x″, y″, z″)`, the right chain gives `(x̃̃, ỹ̃, z̃̃)`.
pub fn entwining_sides<T: Scalar>(
    s: &PairMap<'_, T>,
    r: &PairMap<'_, T>,
    t: &PairMap<'_, T>,
    tp: &TriplePoint<T>,
) -> Result<Sides<T>> {
    let params = tp.params();
    let mut left = tp.points();
    labelled("S¹² (left)", s, 0, 1, &params, &mut left)?;
    labelled("R¹³ (left)", r, 0, 2, &params, &mut left)?;
    labelled("T²³ (left)", t, 1, 2, &params, &mut left)?;
    let mut right = tp.points();
    labelled("T²³ (right)", t, 1, 2, &params, &mut right)?;
    labelled("R¹³ (right)", r, 0, 2, &params, &mut right)?;
    labelled("S¹² (right)", s, 0, 1, &params, &mut right)?;
    Ok((left, right))
}

fn as_pair_map<T: Scalar>(map: &EdgeMap) -> impl Fn(&T, &T, &LeafPoint<T>, &LeafPoint<T>) -> Result<MapOutput<T>> + '_ {
    move |a, b, x, y| map.apply(a, b, x, y)
}

/// `L(u)M(v) = M(y)L(x)` as exact polynomial equality, `(u, v) = map(x, y)`.
pub fn check_lax_pair<T: Scalar>(
    l: LaxFamily,
    m: LaxFamily,
    map: &EdgeMap,
    alpha: &T,
    beta: &T,
    x: &LeafPoint<T>,
    y: &LeafPoint<T>,
) -> Result<bool> {
    let (u, v) = map.apply(alpha, beta, x, y)?;
    let lhs = family_lax(l, &u, alpha)?.to_poly().mul_binomial(&family_lax(m, &v, beta)?);
    let rhs = family_lax(m, y, beta)?.to_poly().mul_binomial(&family_lax(l, x, alpha)?);
    Ok(lhs.matches(&rhs))
}

/// Entwining Yang–Baxter equation for `(S, R, T)`, compared componentwise.
pub fn check_entwining<T: Scalar>(s: &EdgeMap, r: &EdgeMap, t: &EdgeMap, tp: &TriplePoint<T>) -> Result<bool> {
    let (left, right) = entwining_sides(&as_pair_map(s), &as_pair_map(r), &as_pair_map(t), tp)?;
    Ok(left.iter().zip(&right).all(|(a, b)| a.x1.matches(&b.x1) && a.x2.matches(&b.x2)))
}

/// Yang–Baxter equation: the entwining equation with `S = R = T`.
pub fn check_yb<T: Scalar>(s: &EdgeMap, tp: &TriplePoint<T>) -> Result<bool> {
    check_entwining(s, s, s, tp)
}

/// `L₃(z)L₂(y)L₁(x)` equals `L₁(x″)L₂(y″)L₃(z″)` and `L₁(x̃̃)L₂(ỹ̃)L₃(z̃̃)`.
pub fn check_cube_products<T: Scalar>(
    fams: [LaxFamily; 3],
    s: &EdgeMap,
    r: &EdgeMap,
    t: &EdgeMap,
    tp: &TriplePoint<T>,
) -> Result<bool> {
    let params = tp.params();
    let lax = |k: usize, p: &LeafPoint<T>| family_lax(fams[k], p, &params[k]);
    let start = lax(2, &tp.z)?.to_poly().mul_binomial(&lax(1, &tp.y)?).mul_binomial(&lax(0, &tp.x)?);
    let (left, right) = entwining_sides(&as_pair_map(s), &as_pair_map(r), &as_pair_map(t), tp)?;
    for [a, b, c] in [left, right] {
        let end = lax(0, &a)?.to_poly().mul_binomial(&lax(1, &b)?).mul_binomial(&lax(2, &c)?);
        if !end.matches(&start) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Builds `L₁(x)L₂(y)L₃(z)`, recovers the factors from it and the spectra,
/// and confirms they are the input factors.
pub fn check_triple_uniqueness<T: Scalar>(fams: [LaxFamily; 3], tp: &TriplePoint<T>) -> Result<bool> {
    let params = tp.params();
    let factors = tp
        .points()
        .iter()
        .enumerate()
        .map(|(k, p)| family_lax(fams[k], p, &params[k]))
        .collect::<Result<Vec<_>>>()?;
    let [f1, f2, f3] = [&factors[0], &factors[1], &factors[2]];
    let product = TripleProduct::from_factors(&f1.x_part, &f2.x_part, &f3.x_part, &f1.a_part, &f2.a_part, &f3.a_part);
    let cps = factors.iter().map(|f| char_poly(&f.x_part, &f.a_part)).collect::<Vec<_>>();
    let (x, y, z) = recover_from_triple_product(&product, &cps[0], &cps[1], &cps[2])?;
    Ok(x.matches(&f1.x_part) && y.matches(&f2.x_part) && z.matches(&f3.x_part))
}

/// Random triple with small numerators and denominators, `x₂ ≠ 0` on every point.
pub fn random_triple<R: Rng + ?Sized>(rng: &mut R) -> TriplePoint<Rational> {
    TriplePoint::new(
        random_leaf_point(rng),
        random_leaf_point(rng),
        random_leaf_point(rng),
        random_rational(rng),
        random_rational(rng),
        random_rational(rng),
    )
}
