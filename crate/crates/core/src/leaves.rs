//! Symplectic-leaf Lax families and the parametric maps between them.
//!
//! Families:
//! * `L1`: `A₁ = I`, leaf coordinates are the (1,1) and (1,2) entries.
//! * `L2`: the degenerate `A = diag(1, 0)`, coordinates are (1,2) and (2,1).
//! * `Meps`: `A₂ = diag(1, ε)` on the float path, coordinates (1,2) and (2,1).
//!
//! All families are normalized to `f₁ = 1`; `α` is the value of `f₀`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matpoly::{BinomialMatrix, Mat2};
use crate::numerics::{Float, Scalar};
use crate::refactor::{refactor_pair, RefactorInput};

/// Casimir values `(α₀, α₁)` of a leaf.
#[derive(Clone, Debug, PartialEq)]
pub struct LeafParams<T> {
    pub alpha0: T,
    pub alpha1: T,
}

impl<T: Scalar> LeafParams<T> {
    pub fn new(alpha0: T, alpha1: T) -> Self {
        LeafParams { alpha0, alpha1 }
    }

    /// The normalization used by every concrete family: `α₁ = 1`.
    pub fn unit(alpha0: T) -> Self {
        LeafParams { alpha0, alpha1: T::one() }
    }
}

#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct LeafPoint<T> {
    pub x1: T,
    pub x2: T,
}

impl<T: Scalar> LeafPoint<T> {
    pub fn new(x1: T, x2: T) -> Self {
        LeafPoint { x1, x2 }
    }

    pub fn map<U, F: Fn(&T) -> U>(&self, f: F) -> LeafPoint<U> {
        LeafPoint { x1: f(&self.x1), x2: f(&self.x2) }
    }
}

impl<T: fmt::Debug> fmt::Debug for LeafPoint<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.x1, self.x2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LaxFamily {
    L1,
    L2,
    Meps,
}

impl LaxFamily {
    /// Structure matrix over an exact scalar; `Meps` has no exact form.
    pub fn structure<T: Scalar>(self) -> Result<Mat2<T>> {
        match self {
            LaxFamily::L1 => Ok(Mat2::identity()),
            LaxFamily::L2 => Ok(Mat2::diag(T::one(), T::zero())),
            LaxFamily::Meps => Err(Error::Unsupported("Meps lives on the float path".into())),
        }
    }

    pub fn structure_float(self, eps: f64) -> Mat2<Float> {
        match self {
            LaxFamily::L1 => Mat2::identity(),
            LaxFamily::L2 => Mat2::diag(Float(1.0), Float(0.0)),
            LaxFamily::Meps => Mat2::diag(Float(1.0), Float(eps)),
        }
    }
}

impl fmt::Display for LaxFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LaxFamily::L1 => "L1",
            LaxFamily::L2 => "L2",
            LaxFamily::Meps => "Meps",
        })
    }
}

impl FromStr for LaxFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "L1" => Ok(LaxFamily::L1),
            "L2" => Ok(LaxFamily::L2),
            "Meps" => Ok(LaxFamily::Meps),
            _ => Err(Error::Parse(format!("unknown Lax family {s:?}"))),
        }
    }
}

/// A coordinatized level set of `(f₀, f₁)` inside `{X − ζA}` for fixed `A`.
pub trait LeafChart<T: Scalar> {
    fn family(&self) -> LaxFamily;
    fn structure(&self) -> Mat2<T>;
    /// The `X` part at leaf coordinates `p`.
    fn point_matrix(&self, p: &LeafPoint<T>, params: &LeafParams<T>) -> Result<Mat2<T>>;
    /// Reads the two designated entries back out of an `X`.
    fn coordinates(&self, x: &Mat2<T>) -> LeafPoint<T>;

    fn lax(&self, p: &LeafPoint<T>, params: &LeafParams<T>) -> Result<BinomialMatrix<T>> {
        Ok(BinomialMatrix::new(self.point_matrix(p, params)?, self.structure()))
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct L1Chart;

#[derive(Clone, Copy, Debug, Default)]
pub struct L2Chart;

#[derive(Clone, Copy, Debug)]
pub struct MepsChart {
    pub eps: Float,
}

impl<T: Scalar> LeafChart<T> for L1Chart {
    fn family(&self) -> LaxFamily {
        LaxFamily::L1
    }

    fn structure(&self) -> Mat2<T> {
        Mat2::identity()
    }

    fn point_matrix(&self, p: &LeafPoint<T>, params: &LeafParams<T>) -> Result<Mat2<T>> {
        if p.x2.is_zero() {
            return Err(Error::domain("L1 leaf", format!("x₂ = 0 at {p:?}; f₀(X) = α solves x₂₁ by dividing by x₂")));
        }
        let x22 = params.alpha1.clone() - &p.x1;
        let x21 = (p.x1.clone() * &x22 - &params.alpha0).div(&p.x2)?;
        Ok(Mat2::new(p.x1.clone(), p.x2.clone(), x21, x22))
    }

    fn coordinates(&self, x: &Mat2<T>) -> LeafPoint<T> {
        LeafPoint::new(x.m[0][0].clone(), x.m[0][1].clone())
    }
}

impl<T: Scalar> LeafChart<T> for L2Chart {
    fn family(&self) -> LaxFamily {
        LaxFamily::L2
    }

    fn structure(&self) -> Mat2<T> {
        Mat2::diag(T::one(), T::zero())
    }

    fn point_matrix(&self, p: &LeafPoint<T>, params: &LeafParams<T>) -> Result<Mat2<T>> {
        let x11 = (params.alpha0.clone() + p.x1.clone() * &p.x2).div(&params.alpha1)?;
        Ok(Mat2::new(x11, p.x1.clone(), p.x2.clone(), params.alpha1.clone()))
    }

    fn coordinates(&self, x: &Mat2<T>) -> LeafPoint<T> {
        LeafPoint::new(x.m[0][1].clone(), x.m[1][0].clone())
    }
}

impl LeafChart<Float> for MepsChart {
    fn family(&self) -> LaxFamily {
        LaxFamily::Meps
    }

    fn structure(&self) -> Mat2<Float> {
        Mat2::diag(Float(1.0), self.eps)
    }

    fn point_matrix(&self, p: &LeafPoint<Float>, params: &LeafParams<Float>) -> Result<Mat2<Float>> {
        if self.eps.is_zero() {
            return Err(Error::ZeroEpsilon);
        }
        let (a1, c) = (params.alpha1, params.alpha0 + p.x1 * p.x2);
        let root = (a1 * a1 - Float(4.0) * self.eps * c).sqrt()?;
        let x11 = Float((a1.0 - root.0) / (2.0 * self.eps.0));
        let x22 = Float((root.0 + a1.0) / 2.0);
        Ok(Mat2::new(x11, p.x1, p.x2, x22))
    }

    fn coordinates(&self, x: &Mat2<Float>) -> LeafPoint<Float> {
        LeafPoint::new(x.m[0][1], x.m[1][0])
    }
}

/// `L₁(x; α) = [[x₁, x₂], [−(α + (x₁ − 1)x₁)/x₂, 1 − x₁]] − ζI`.
pub fn leaf_l1<T: Scalar>(p: &LeafPoint<T>, alpha: &T) -> Result<BinomialMatrix<T>> {
    L1Chart.lax(p, &LeafParams::unit(alpha.clone()))
}

/// `L₂(x; α) = [[x₁x₂ + α − ζ, x₁], [x₂, 1]]`.
pub fn leaf_l2<T: Scalar>(p: &LeafPoint<T>, alpha: &T) -> BinomialMatrix<T> {
    L2Chart
        .lax(p, &LeafParams::unit(alpha.clone()))
        .expect("α₁ = 1 is invertible")
}

/// `M_ε(x; α)` with the printed square-root branch, `A = diag(1, ε)`.
pub fn leaf_meps(p: &LeafPoint<Float>, alpha: Float, eps: Float) -> Result<BinomialMatrix<Float>> {
    MepsChart { eps }.lax(p, &LeafParams::unit(alpha))
}

pub type MapOutput<T> = (LeafPoint<T>, LeafPoint<T>);

fn nonzero<T: Scalar>(d: T, map: &str, alpha: &T, beta: &T, x: &LeafPoint<T>, y: &LeafPoint<T>) -> Result<T> {
    if d.is_zero() {
        Err(Error::domain(map, format!("α={alpha:?}, β={beta:?}, x={x:?}, y={y:?}")))
    } else {
        Ok(d)
    }
}

/// The Yang–Baxter map on `Σ_{A₁}(α,1) × Σ_{A₁}(β,1)`.
pub fn map_r<T: Scalar>(alpha: &T, beta: &T, x: &LeafPoint<T>, y: &LeafPoint<T>) -> Result<MapOutput<T>> {
    let (x1, x2, y1, y2) = (&x.x1, &x.x2, &y.x1, &y.x2);
    if x2.is_zero() || y2.is_zero() {
        nonzero(T::zero(), "R", alpha, beta, x, y)?;
    }
    let one = T::one();
    let w = x2.clone() * y1 - x1.clone() * y2;
    let n = alpha.clone() * y2 * y2
        + beta.clone() * x2 * x2
        + (alpha.clone() + beta - &one) * y2 * x2
        + w.clone() * &(w.clone() + y2 - x2);
    let n = nonzero(n, "R", alpha, beta, x, y)?;
    let shift = (x2.clone() * y2 * &(alpha.clone() - beta) * &(x1.clone() + y1 - &one)).div(&n)?;
    let common = (x2.clone() * &(y1.clone() - &one) - x1.clone() * y2) * &(w + y2);
    let s2 = (x2.clone() + y2).square();
    let u2 = (y2.clone() * &(alpha.clone() * &s2 + &common)).div(&n)?;
    let v2 = (x2.clone() * &(beta.clone() * &s2 + &common)).div(&n)?;
    Ok((LeafPoint::new(y1.clone() + &shift, u2), LeafPoint::new(x1.clone() - &shift, v2)))
}

/// The degenerate Yang–Baxter map on `Σ_{A₂}(α,1) × Σ_{A₂}(β,1)` at ε = 0.
pub fn map_rbar<T: Scalar>(alpha: &T, beta: &T, x: &LeafPoint<T>, y: &LeafPoint<T>) -> Result<MapOutput<T>> {
    let (x1, x2, y1, y2) = (&x.x1, &x.x2, &y.x1, &y.x2);
    let d = nonzero(T::one() + &(x1.clone() * y2), "Rbar", alpha, beta, x, y)?;
    let diff = alpha.clone() - beta;
    let u1 = y1.clone() - &(diff.clone() * x1).div(&d)?;
    let v2 = x2.clone() + &(diff * y2).div(&d)?;
    Ok((LeafPoint::new(u1, y2.clone()), LeafPoint::new(x1.clone(), v2)))
}

/// The map with strong Lax pair `(L₁, L₂)`.
pub fn map_s<T: Scalar>(alpha: &T, beta: &T, x: &LeafPoint<T>, y: &LeafPoint<T>) -> Result<MapOutput<T>> {
    let (x1, x2, y1, y2) = (&x.x1, &x.x2, &y.x1, &y.x2);
    let one = T::one();
    nonzero(x2.clone(), "S", alpha, beta, x, y)?;
    let g = x2.clone() * y2 - x1 - beta + &one;
    let d = nonzero(x2.clone() * &g, "S", alpha, beta, x, y)?;
    let h = alpha.clone() + &(beta.clone() * &(x2.clone() * y2 - x1));
    let x1_over_x2 = x1.div(x2)?;
    let u1 = y2.clone() * y1 - &(x1_over_x2.clone() * y1) + &(h.clone() * &(x2.clone() + y1)).div(&d)?;
    let u2_num = alpha.clone() * &(x2.clone() + y1).square()
        + (beta.clone() * x2 + &(y1.clone() * y2 * x2) - &(x1.clone() * y1) + y1)
            * &(x2.clone() * &(beta.clone() + &(y1.clone() * y2) - &one) - &(x1.clone() * y1));
    let u2 = -u2_num.div(&d)?;
    let v1 = x2.clone() + y1;
    let v2 = x1_over_x2 - &h.div(&d)?;
    Ok((LeafPoint::new(u1, u2), LeafPoint::new(v1, v2)))
}

/// The twisted map with strong Lax pair `(L₂, L₁)`.
pub fn map_t<T: Scalar>(alpha: &T, beta: &T, x: &LeafPoint<T>, y: &LeafPoint<T>) -> Result<MapOutput<T>> {
    let (x1, x2, y1, y2) = (&x.x1, &x.x2, &y.x1, &y.x2);
    let one = T::one();
    nonzero(y2.clone(), "T", alpha, beta, x, y)?;
    let d = beta.clone() * x1
        + (y1.clone() - &one) * y1 * x1
        + (alpha.clone() + y1 - &one) * y2;
    let d = nonzero(d, "T", alpha, beta, x, y)?;
    let frac = ((alpha.clone() * x1 - &(y1.clone() * x1) - y2) * y2).div(&d)?;
    let u2 = x2.clone() - &(beta.clone() + &((y1.clone() - &one) * y1)).div(y2)?;
    let v1_num = beta.clone() * &(alpha.clone() * x1 - y2)
        + (y1.clone() * x1 - x1 + y2) * &(alpha.clone() * y1 + &(x2.clone() * y2))
        + x1.clone() * x2 * &(x1.clone() * &(y1.square() - y1 + beta) + &(y1.clone() * y2));
    let v1 = v1_num.div(&d)?;
    let v2 = x1.clone() - &frac;
    Ok((LeafPoint::new(frac, u2), LeafPoint::new(v1, v2)))
}

/// Refactorization-backed map between two leaf charts with invertible,
/// commuting structure matrices.
///
/// Builds `X`, `Y` on their leaves, refactorizes, reads `u` from `U` and `v`
/// from `V`, and checks that the leaf matrices rebuilt from `(u, v)` satisfy
/// `L(u)M(v) = M(y)L(x)`.
pub fn generic_edge_map<T: Scalar>(
    chart_i: &dyn LeafChart<T>,
    chart_j: &dyn LeafChart<T>,
    alpha: &LeafParams<T>,
    beta: &LeafParams<T>,
    x: &LeafPoint<T>,
    y: &LeafPoint<T>,
) -> Result<MapOutput<T>> {
    let lx = chart_i.lax(x, alpha)?;
    let my = chart_j.lax(y, beta)?;
    let input = RefactorInput::new(lx.x_part.clone(), my.x_part.clone(), lx.a_part.clone(), my.a_part.clone())?;
    let (u, v) = refactor_pair(&input)?;
    let (pu, pv) = (chart_i.coordinates(&u), chart_j.coordinates(&v));
    let lu = chart_i.lax(&pu, alpha)?;
    let mv = chart_j.lax(&pv, beta)?;
    let (lu, mv, my, lx) = (lu.to_poly(), mv.to_poly(), my.to_poly(), lx.to_poly());
    // float tolerance relative to the factor sizes (backward error)
    let scale = lu.magnitude() * mv.magnitude() + my.magnitude() * lx.magnitude();
    let (lhs, rhs) = (lu.mul(&mv), my.mul(&lx));
    if !lhs.matches_at_scale(&rhs, scale) {
        return Err(Error::LeafExtractionMismatch(format!(
            "u={pu:?}, v={pv:?}: L(u)M(v)={lhs:?}, M(y)L(x)={rhs:?}"
        )));
    }
    Ok((pu, pv))
}

/// Edge map selector. Tags: `R`, `Rbar`, `S`, `T`, `generic:<Fi>:<Fj>`.
#[derive(Clone, Debug, PartialEq)]
pub enum EdgeMap {
    R,
    Rbar,
    S,
    T,
    Generic(LaxFamily, LaxFamily),
    /// Harness self-test fixture: the wrapped map with `1` added to `u₁`.
    Perturbed(Box<EdgeMap>),
}

impl EdgeMap {
    /// `(L, M)` families of the strong Lax pair: `L(u)M(v) = M(y)L(x)`.
    pub fn families(&self) -> (LaxFamily, LaxFamily) {
        match self {
            EdgeMap::R => (LaxFamily::L1, LaxFamily::L1),
            EdgeMap::Rbar => (LaxFamily::L2, LaxFamily::L2),
            EdgeMap::S => (LaxFamily::L1, LaxFamily::L2),
            EdgeMap::T => (LaxFamily::L2, LaxFamily::L1),
            EdgeMap::Generic(i, j) => (*i, *j),
            EdgeMap::Perturbed(inner) => inner.families(),
        }
    }

    pub fn apply<T: Scalar>(&self, alpha: &T, beta: &T, x: &LeafPoint<T>, y: &LeafPoint<T>) -> Result<MapOutput<T>> {
        match self {
            EdgeMap::R => map_r(alpha, beta, x, y),
            EdgeMap::Rbar => map_rbar(alpha, beta, x, y),
            EdgeMap::S => map_s(alpha, beta, x, y),
            EdgeMap::T => map_t(alpha, beta, x, y),
            EdgeMap::Generic(i, j) => {
                let ci = exact_chart::<T>(*i)?;
                let cj = exact_chart::<T>(*j)?;
                let (a, b) = (LeafParams::unit(alpha.clone()), LeafParams::unit(beta.clone()));
                generic_edge_map(ci.as_ref(), cj.as_ref(), &a, &b, x, y)
            }
            EdgeMap::Perturbed(inner) => {
                let (mut u, v) = inner.apply(alpha, beta, x, y)?;
                u.x1 = u.x1 + &T::one();
                Ok((u, v))
            }
        }
    }
}

/// Chart for a family over an exact scalar (`Meps` needs square roots).
pub fn exact_chart<T: Scalar>(family: LaxFamily) -> Result<Box<dyn LeafChart<T>>> {
    match family {
        LaxFamily::L1 => Ok(Box::new(L1Chart)),
        LaxFamily::L2 => Ok(Box::new(L2Chart)),
        LaxFamily::Meps => Err(Error::Unsupported("Meps requires the float path".into())),
    }
}

/// Lax matrix of a family at a leaf point with `α₁ = 1`, exact scalars.
pub fn family_lax<T: Scalar>(family: LaxFamily, p: &LeafPoint<T>, alpha: &T) -> Result<BinomialMatrix<T>> {
    exact_chart::<T>(family)?.lax(p, &LeafParams::unit(alpha.clone()))
}

impl fmt::Display for EdgeMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeMap::R => f.write_str("R"),
            EdgeMap::Rbar => f.write_str("Rbar"),
            EdgeMap::S => f.write_str("S"),
            EdgeMap::T => f.write_str("T"),
            EdgeMap::Generic(i, j) => write!(f, "generic:{i}:{j}"),
            EdgeMap::Perturbed(inner) => write!(f, "perturbed:{inner}"),
        }
    }
}

impl FromStr for EdgeMap {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "R" => Ok(EdgeMap::R),
            "Rbar" => Ok(EdgeMap::Rbar),
            "S" => Ok(EdgeMap::S),
            "T" => Ok(EdgeMap::T),
            _ => {
                if let Some(rest) = s.strip_prefix("generic:") {
                    let (i, j) = rest
                        .split_once(':')
                        .ok_or_else(|| Error::Parse(format!("expected generic:<Fi>:<Fj>, got {s:?}")))?;
                    Ok(EdgeMap::Generic(i.parse()?, j.parse()?))
                } else if let Some(rest) = s.strip_prefix("perturbed:") {
                    Ok(EdgeMap::Perturbed(Box::new(rest.parse()?)))
                } else {
                    Err(Error::Parse(format!("unknown edge map {s:?}")))
                }
            }
        }
    }
}

impl Serialize for EdgeMap {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for EdgeMap {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(deserializer)?.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matpoly::{char_poly, MatPoly};
    use crate::numerics::Rational;
    use crate::sample::{random_leaf_point, random_rational};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn pt(a: i64, b: i64) -> LeafPoint<Rational> {
        LeafPoint::new(q(a, 1), q(b, 1))
    }

    fn zero() -> Rational {
        Rational::zero()
    }

    #[test]
    fn l1_examples() {
        let l = leaf_l1(&pt(1, 1), &zero()).unwrap();
        assert_eq!(l.x_part, Mat2::from_i64([[1, 1], [0, 0]]));
        assert_eq!(l.a_part, Mat2::identity());
        let l = leaf_l1(&pt(0, 1), &zero()).unwrap();
        assert_eq!(l.x_part, Mat2::from_i64([[0, 1], [0, 1]]));
        assert!(matches!(leaf_l1(&pt(1, 0), &zero()), Err(Error::Domain { .. })));
    }

    #[test]
    fn l2_examples() {
        let l = leaf_l2(&pt(1, 1), &zero());
        assert_eq!(l.x_part, Mat2::from_i64([[1, 1], [1, 1]]));
        assert_eq!(l.a_part, Mat2::diag(q(1, 1), zero()));
        let beta = q(7, 3);
        let l = leaf_l2(&pt(0, 0), &beta);
        assert_eq!(l.x_part, Mat2::diag(beta.clone(), q(1, 1)));
    }

    #[test]
    fn leaf_constraints_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..30 {
            let p = random_leaf_point(&mut rng);
            let a = random_rational(&mut rng);
            let cp = leaf_l1(&p, &a).unwrap().char_poly();
            assert_eq!((cp.f2, cp.f1, cp.f0), (q(1, 1), q(1, 1), a.clone()));
            let l2 = leaf_l2(&p, &a);
            let cp = l2.char_poly();
            assert_eq!((cp.f2, cp.f1, cp.f0), (zero(), q(1, 1), a.clone()));
            // det(X − ζA) = α − ζ
            assert_eq!(l2.to_poly().det(), vec![a.clone(), q(-1, 1), zero()]);
        }
    }

    #[test]
    fn meps_examples() {
        let l = leaf_meps(&LeafPoint::new(Float(1.0), Float(1.0)), Float(0.0), Float(0.125)).unwrap();
        let expected = (1.0 - 0.5f64.sqrt()) * 4.0;
        assert!((l.x_part.m[0][0].0 - expected).abs() < 1e-12);
        assert!((l.x_part.m[0][0].0 - 1.17157).abs() < 1e-5);
        assert_eq!(l.a_part, Mat2::diag(Float(1.0), Float(0.125)));

        let p = LeafPoint::new(Float(1.0), Float(1.0));
        assert_eq!(leaf_meps(&p, Float(0.0), Float(0.0)), Err(Error::ZeroEpsilon));
        assert!(matches!(leaf_meps(&p, Float(10.0), Float(1.0)), Err(Error::NegativeRadicand(_))));

        // pointwise ε → 0 limit of the (1,1) entry
        let (alpha, c) = (0.3, 0.3 + 1.0);
        for k in 2..7 {
            let eps = 10f64.powi(-k);
            let l = leaf_meps(&p, Float(alpha), Float(eps)).unwrap();
            assert!((l.x_part.m[0][0].0 - c).abs() < 3.0 * eps * c * c);
        }
    }

    #[test]
    fn meps_casimirs() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..30 {
            let p = LeafPoint::new(Float(rng.gen_range(-3.0..3.0)), Float(rng.gen_range(-3.0..3.0)));
            let alpha = Float(rng.gen_range(-2.0..2.0));
            let eps = Float(rng.gen_range(0.001..0.01));
            let l = leaf_meps(&p, alpha, eps).unwrap();
            let cp = char_poly(&l.x_part, &l.a_part);
            assert!((cp.f0.0 - alpha.0).abs() < 1e-10);
            assert!((cp.f1.0 - 1.0).abs() < 1e-10);
            // f₁(X; A₂) = εx₁₁ + x₂₂
            assert!((cp.f1.0 - (eps.0 * l.x_part.m[0][0].0 + l.x_part.m[1][1].0)).abs() < 1e-12);
        }
    }

    use rand::Rng;

    fn lax_identity(map: &EdgeMap, a: &Rational, b: &Rational, x: &LeafPoint<Rational>, y: &LeafPoint<Rational>) -> bool {
        let (fl, fm) = map.families();
        let (u, v) = map.apply(a, b, x, y).unwrap();
        let lhs = family_lax(fl, &u, a).unwrap().to_poly().mul_binomial(&family_lax(fm, &v, b).unwrap());
        let rhs = family_lax(fm, y, b).unwrap().to_poly().mul_binomial(&family_lax(fl, x, a).unwrap());
        lhs == rhs
    }

    #[test]
    fn worked_examples() {
        let (u, v) = map_s(&zero(), &zero(), &pt(1, 1), &pt(1, 1)).unwrap();
        assert_eq!((u, v), (pt(0, 1), pt(2, 1)));
        let (u, v) = map_t(&q(1, 1), &zero(), &pt(1, 1), &pt(1, 1)).unwrap();
        assert_eq!((u, v), (pt(-1, 1), pt(3, 2)));
        let (u, v) = map_rbar(&q(2, 1), &q(1, 1), &pt(1, 1), &pt(1, 1)).unwrap();
        assert_eq!((u, v), (LeafPoint::new(q(1, 2), q(1, 1)), LeafPoint::new(q(1, 1), q(3, 2))));
    }

    #[test]
    fn worked_example_products() {
        // S: both sides equal [[(1−ζ)², 1−2ζ], [1−ζ, 1−ζ]]
        let z = zero();
        let lhs = leaf_l1(&pt(0, 1), &z).unwrap().to_poly().mul_binomial(&leaf_l2(&pt(2, 1), &z));
        let expected = MatPoly::new(vec![
            Mat2::from_i64([[1, 1], [1, 1]]),
            Mat2::from_i64([[-2, -2], [-1, -1]]),
            Mat2::from_i64([[1, 0], [0, 0]]),
        ]);
        assert_eq!(lhs, expected);
        // T: both sides equal [[ζ² − 3ζ + 3, 2 − ζ], [−ζ, −ζ]]
        let lhs = leaf_l2(&pt(-1, 1), &q(1, 1)).to_poly().mul_binomial(&leaf_l1(&pt(3, 2), &z).unwrap());
        let expected = MatPoly::new(vec![
            Mat2::from_i64([[3, 2], [0, 0]]),
            Mat2::from_i64([[-3, -1], [-1, -1]]),
            Mat2::from_i64([[1, 0], [0, 0]]),
        ]);
        assert_eq!(lhs, expected);
    }

    #[test]
    fn closed_forms_satisfy_lax_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for map in [EdgeMap::R, EdgeMap::Rbar, EdgeMap::S, EdgeMap::T] {
            let mut checked = 0;
            while checked < 25 {
                let (a, b) = (random_rational(&mut rng), random_rational(&mut rng));
                let (x, y) = (random_leaf_point(&mut rng), random_leaf_point(&mut rng));
                if map.apply(&a, &b, &x, &y).is_err() {
                    continue;
                }
                assert!(lax_identity(&map, &a, &b, &x, &y), "{map} at {x:?} {y:?}");
                checked += 1;
            }
        }
    }

    #[test]
    fn equal_parameters() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        for _ in 0..20 {
            let a = random_rational(&mut rng);
            let (x, y) = (random_leaf_point(&mut rng), random_leaf_point(&mut rng));
            if let Ok(out) = map_r(&a, &a, &x, &y) {
                assert_eq!(out, (y.clone(), x.clone()));
            }
            if let Ok(out) = map_rbar(&a, &a, &x, &y) {
                assert_eq!(out, (y.clone(), x.clone()));
            }
            if let Ok(out) = map_r(&a, &a, &x, &x) {
                assert_eq!(out, (x.clone(), x.clone()));
            }
        }
    }

    #[test]
    fn s_and_t_structural_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        for _ in 0..30 {
            let (a, b) = (random_rational(&mut rng), random_rational(&mut rng));
            let (x, y) = (random_leaf_point(&mut rng), random_leaf_point(&mut rng));
            if let Ok((_, v)) = map_s(&a, &b, &x, &y) {
                assert_eq!(v.x1, x.x2.clone() + &y.x1);
            }
            if let Ok((u, v)) = map_t(&a, &b, &x, &y) {
                assert_eq!(v.x2 + &u.x1, x.x1.clone());
            }
        }
    }

    #[test]
    fn degenerate_denominators_are_errors() {
        // 1 + x₁y₂ = 0
        let err = map_rbar(&q(1, 1), &zero(), &pt(1, 0), &pt(0, -1)).unwrap_err();
        assert!(matches!(err, Error::Domain { ref map, .. } if map == "Rbar"));
        assert!(map_s(&zero(), &zero(), &pt(1, 0), &pt(1, 1)).is_err());
        assert!(map_t(&zero(), &zero(), &pt(1, 1), &pt(1, 0)).is_err());
        assert!(map_r(&zero(), &q(1, 1), &pt(1, 0), &pt(1, 1)).is_err());
    }

    #[test]
    fn generic_l1_l1_matches_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(26);
        let mut checked = 0;
        while checked < 50 {
            let (a, b) = (random_rational(&mut rng), random_rational(&mut rng));
            let (x, y) = (random_leaf_point(&mut rng), random_leaf_point(&mut rng));
            let generic = EdgeMap::Generic(LaxFamily::L1, LaxFamily::L1).apply(&a, &b, &x, &y);
            let closed = map_r(&a, &b, &x, &y);
            match (generic, closed) {
                (Ok(g), Ok(c)) => {
                    assert_eq!(g, c);
                    checked += 1;
                }
                (Err(_), Err(_)) => {}
                (g, c) => panic!("disagreeing domains at {x:?} {y:?}: {g:?} vs {c:?}"),
            }
        }
    }

    #[test]
    fn generic_rejects_degenerate_structure() {
        let r = EdgeMap::Generic(LaxFamily::L1, LaxFamily::L2).apply(&zero(), &zero(), &pt(1, 2), &pt(3, 1));
        assert_eq!(r, Err(Error::SingularMatrix));
        let r = EdgeMap::Generic(LaxFamily::Meps, LaxFamily::L1).apply(&zero(), &zero(), &pt(1, 2), &pt(3, 1));
        assert!(matches!(r, Err(Error::Unsupported(_))));
    }

    fn rel_err(a: &MapOutput<Float>, b: &MapOutput<Rational>) -> f64 {
        [(a.0.x1, &b.0.x1), (a.0.x2, &b.0.x2), (a.1.x1, &b.1.x1), (a.1.x2, &b.1.x2)]
            .iter()
            .map(|(p, q)| (p.0 - q.to_f64()).abs() / q.to_f64().abs().max(1.0))
            .fold(0.0, f64::max)
    }

    fn float_generic(fi: LaxFamily, fj: LaxFamily, eps: f64, a: &Rational, b: &Rational, x: &LeafPoint<Rational>, y: &LeafPoint<Rational>) -> MapOutput<Float> {
        let chart = |f: LaxFamily| -> Box<dyn LeafChart<Float>> {
            match f {
                LaxFamily::Meps => Box::new(MepsChart { eps: Float(eps) }),
                _ => exact_chart(f).unwrap(),
            }
        };
        let (af, bf) = (LeafParams::unit(Float(a.to_f64())), LeafParams::unit(Float(b.to_f64())));
        let (xf, yf) = (x.map(|v| Float(v.to_f64())), y.map(|v| Float(v.to_f64())));
        generic_edge_map(chart(fi).as_ref(), chart(fj).as_ref(), &af, &bf, &xf, &yf).unwrap()
    }

    #[test]
    fn float_generic_approaches_degenerate_closed_forms() {
        use LaxFamily::{Meps, L1};
        let mut rng = ChaCha8Rng::seed_from_u64(27);
        let mut checked = 0;
        while checked < 20 {
            let (a, b) = (random_rational(&mut rng), random_rational(&mut rng));
            let (x, y) = (random_leaf_point(&mut rng), random_leaf_point(&mut rng));
            let (Ok(s), Ok(t), Ok(rb)) = (map_s(&a, &b, &x, &y), map_t(&a, &b, &x, &y), map_rbar(&a, &b, &x, &y))
            else {
                continue;
            };
            assert!(rel_err(&float_generic(L1, Meps, 1e-6, &a, &b, &x, &y), &s) <= 1e-4);
            // first-order convergence: a tenfold smaller ε shrinks the gap about tenfold
            for (fi, fj, closed) in [(L1, Meps, &s), (Meps, L1, &t), (Meps, Meps, &rb)] {
                let coarse = rel_err(&float_generic(fi, fj, 1e-5, &a, &b, &x, &y), closed);
                let fine = rel_err(&float_generic(fi, fj, 1e-6, &a, &b, &x, &y), closed);
                assert!(fine <= 0.2 * coarse + 1e-9, "{fi}/{fj}: {coarse:e} -> {fine:e}");
            }
            checked += 1;
        }
    }

    #[test]
    fn edge_map_tags_roundtrip() {
        for tag in ["R", "Rbar", "S", "T", "generic:L1:L1", "generic:Meps:L2", "perturbed:S"] {
            let m: EdgeMap = tag.parse().unwrap();
            assert_eq!(m.to_string(), tag);
        }
        assert!("Q".parse::<EdgeMap>().is_err());
        assert!("generic:L1".parse::<EdgeMap>().is_err());
    }

    #[test]
    fn perturbed_map_breaks_lax_identity() {
        let m = EdgeMap::Perturbed(Box::new(EdgeMap::S));
        assert!(!lax_identity(&m, &zero(), &zero(), &pt(1, 1), &pt(1, 1)));
    }
}
