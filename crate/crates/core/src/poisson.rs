//! Sklyanin bracket on `X − ζA`, its reduction to the leaf charts, and the
//! exact symplecticity and involution checks.
//!
//! With `r` the permutation matrix the bracket is linear in `X`:
//! `{x_ij, x_kl} = a_il·x_kj − a_kj·x_il`. This sign reproduces
//! `{x₁, x₂} = −x₂` on the `A = I` leaf.
//!
//! Points on a leaf pair are `ξ = (x₁, x₂, y₁, y₂)`; gradients are computed
//! exactly with one dual-number pass per coordinate.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::leaves::{exact_chart, EdgeMap, LaxFamily, LeafParams, LeafPoint};
use crate::matpoly::{f1, Mat2};
use crate::numerics::{Dual, DualScalar, Rational, Scalar};

/// Flattened entry index `2i + j` of `x_ij` (zero-based).
fn entry(idx: usize) -> (usize, usize) {
    (idx / 2, idx % 2)
}

/// The linear bracket table of the entries of `X` for a fixed `A`.
#[derive(Clone, Debug, PartialEq)]
pub struct BracketTable<T> {
    pub a: Mat2<T>,
}

/// `{x_ij, x_kl}` over the ambient four entries, for any structure matrix.
pub fn sklyanin_entry_brackets<T: Scalar>(a: &Mat2<T>) -> BracketTable<T> {
    BracketTable { a: a.clone() }
}

impl<T: Scalar> BracketTable<T> {
    /// Coefficients of `{x_p, x_q}` as a linear form in the entries of `X`.
    pub fn coefficients(&self, p: usize, q: usize) -> Mat2<T> {
        let ((i, j), (k, l)) = (entry(p), entry(q));
        let mut c: Mat2<T> = Mat2::zero();
        c.m[k][j] = c.m[k][j].clone() + &self.a.m[i][l];
        c.m[i][l] = c.m[i][l].clone() - &self.a.m[k][j];
        c
    }

    pub fn eval(&self, x: &Mat2<T>, p: usize, q: usize) -> T {
        let c = self.coefficients(p, q);
        c.entries().zip(x.entries()).fold(T::zero(), |acc, (c, x)| acc + c.clone() * x)
    }

    /// The 4×4 Poisson tensor at `X` in flattened entry order.
    pub fn tensor(&self, x: &Mat2<T>) -> [[T; 4]; 4] {
        std::array::from_fn(|p| std::array::from_fn(|q| self.eval(x, p, q)))
    }

    /// `{f, g}(X) = ∇f · P(X) · ∇g` for gradients in flattened entry order.
    pub fn bracket(&self, x: &Mat2<T>, grad_f: &[T; 4], grad_g: &[T; 4]) -> T {
        quadratic_form(&self.tensor(x), grad_f, grad_g)
    }

    pub fn is_antisymmetric(&self, x: &Mat2<T>) -> bool {
        let p = self.tensor(x);
        (0..4).all(|a| (0..4).all(|b| (p[a][b].clone() + &p[b][a]).is_zero()))
    }

    /// Jacobi identity for the coordinate functions at `X`.
    pub fn satisfies_jacobi(&self, x: &Mat2<T>) -> bool {
        // {x_a, {x_b, x_c}} = Σ_d c^{bc}_d {x_a, x_d} since the table is linear
        let p = self.tensor(x);
        let nested = |a: usize, b: usize, c: usize| {
            let coeffs = self.coefficients(b, c);
            coeffs
                .entries()
                .enumerate()
                .fold(T::zero(), |acc, (d, cd)| acc + cd.clone() * &p[a][d])
        };
        (0..4).all(|a| {
            (0..4).all(|b| {
                (0..4).all(|c| (nested(a, b, c) + nested(b, c, a) + nested(c, a, b)).is_zero())
            })
        })
    }
}

fn quadratic_form<T: Scalar, const N: usize>(p: &[[T; N]; N], u: &[T; N], v: &[T; N]) -> T {
    let mut acc = T::zero();
    for a in 0..N {
        if u[a].is_zero() {
            continue;
        }
        for b in 0..N {
            acc = acc + u[a].clone() * &p[a][b] * &v[b];
        }
    }
    acc
}

/// Value and exact gradient of `f` at `p`, one dual pass per coordinate.
pub fn gradient<const N: usize, F>(f: F, p: &[Rational; N]) -> Result<(Rational, [Rational; N])>
where
    F: Fn(&[DualScalar; N]) -> Result<DualScalar>,
{
    let mut value = None;
    let mut grad: [Rational; N] = std::array::from_fn(|_| Rational::zero());
    for (k, g) in grad.iter_mut().enumerate() {
        let lifted: [DualScalar; N] = std::array::from_fn(|m| {
            Dual::new(p[m].clone(), if m == k { Rational::one() } else { Rational::zero() })
        });
        let out = f(&lifted)?;
        *g = out.derivative;
        value.get_or_insert(out.value);
    }
    let value = match value {
        Some(v) => v,
        None => f(&std::array::from_fn(|m| Dual::constant(p[m].clone())))?.value,
    };
    Ok((value, grad))
}

/// Casimirs `det X` and `f₁(X; A)` annihilate every entry at `X`.
/// The remaining four Casimirs are the constant entries of `A`.
pub fn casimirs_annihilate(table: &BracketTable<Rational>, x: &Mat2<Rational>) -> Result<bool> {
    let a = table.a.clone();
    let to_mat = |v: &[DualScalar; 4]| Mat2::new(v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone());
    let flat: [Rational; 4] = std::array::from_fn(|p| x.m[p / 2][p % 2].clone());
    let (_, g0) = gradient(|v| Ok(to_mat(v).det()), &flat)?;
    let a_dual = a.map(|e| Dual::constant(e.clone()));
    let (_, g1) = gradient(|v| Ok(f1(&to_mat(v), &a_dual)), &flat)?;
    let p = table.tensor(x);
    Ok([g0, g1].iter().all(|g| {
        (0..4).all(|q| {
            let unit: [Rational; 4] = std::array::from_fn(|m| if m == q { Rational::one() } else { Rational::zero() });
            quadratic_form(&p, g, &unit).is_zero()
        })
    }))
}

/// Leaf pair on which a map acts; names the printed reduced tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LeafPair {
    S,
    R,
    Rbar,
    T,
}

impl LeafPair {
    pub const ALL: [LeafPair; 4] = [LeafPair::S, LeafPair::R, LeafPair::Rbar, LeafPair::T];

    pub fn families(self) -> (LaxFamily, LaxFamily) {
        match self {
            LeafPair::S => (LaxFamily::L1, LaxFamily::L2),
            LeafPair::R => (LaxFamily::L1, LaxFamily::L1),
            LeafPair::Rbar => (LaxFamily::L2, LaxFamily::L2),
            LeafPair::T => (LaxFamily::L2, LaxFamily::L1),
        }
    }

    pub fn from_families(fx: LaxFamily, fy: LaxFamily) -> Result<Self> {
        LeafPair::ALL
            .into_iter()
            .find(|t| t.families() == (fx, fy))
            .ok_or_else(|| Error::Unsupported(format!("no reduced bracket for {fx} × {fy}")))
    }

    pub fn of_map(map: &EdgeMap) -> Result<Self> {
        let (fx, fy) = map.families();
        LeafPair::from_families(fx, fy)
    }
}

impl fmt::Display for LeafPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LeafPair::S => "S",
            LeafPair::R => "R",
            LeafPair::Rbar => "Rbar",
            LeafPair::T => "T",
        })
    }
}

impl FromStr for LeafPair {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        LeafPair::ALL
            .into_iter()
            .find(|t| t.to_string() == s)
            .ok_or_else(|| Error::Parse(format!("unknown leaf pair {s:?}")))
    }
}

/// Product bracket on a leaf pair; cross brackets vanish.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReducedBracket {
    pub tag: LeafPair,
}

/// The printed coordinate bracket `{x₁, x₂}` on one leaf.
pub fn leaf_bracket<T: Scalar>(family: LaxFamily, p: &LeafPoint<T>) -> Result<T> {
    match family {
        LaxFamily::L1 => Ok(-p.x2.clone()),
        LaxFamily::L2 => Ok(T::one()),
        LaxFamily::Meps => Err(Error::Unsupported("no reduced table for Meps".into())),
    }
}

pub fn reduced_bracket(tag: LeafPair) -> ReducedBracket {
    ReducedBracket { tag }
}

impl ReducedBracket {
    /// Poisson tensor at `ξ = (x₁, x₂, y₁, y₂)`.
    pub fn tensor<T: Scalar>(&self, xi: &[T; 4]) -> Result<[[T; 4]; 4]> {
        let (fx, fy) = self.tag.families();
        let bx = leaf_bracket(fx, &LeafPoint::new(xi[0].clone(), xi[1].clone()))?;
        let by = leaf_bracket(fy, &LeafPoint::new(xi[2].clone(), xi[3].clone()))?;
        let mut p: [[T; 4]; 4] = std::array::from_fn(|_| std::array::from_fn(|_| T::zero()));
        p[0][1] = bx.clone();
        p[1][0] = -bx;
        p[2][3] = by.clone();
        p[3][2] = -by;
        Ok(p)
    }
}

pub type Point4 = [Rational; 4];

pub fn split(xi: &Point4) -> (LeafPoint<Rational>, LeafPoint<Rational>) {
    (
        LeafPoint::new(xi[0].clone(), xi[1].clone()),
        LeafPoint::new(xi[2].clone(), xi[3].clone()),
    )
}

/// `{f, g}(ξ)` under a reduced bracket, exact.
pub fn bracket_eval<F, G>(f: F, g: G, rb: &ReducedBracket, xi: &Point4) -> Result<Rational>
where
    F: Fn(&[DualScalar; 4]) -> Result<DualScalar>,
    G: Fn(&[DualScalar; 4]) -> Result<DualScalar>,
{
    let (_, gf) = gradient(f, xi)?;
    let (_, gg) = gradient(g, xi)?;
    Ok(quadratic_form(&rb.tensor(xi)?, &gf, &gg))
}

/// Image of `ξ` and the Jacobian of a map at `ξ`, exact.
pub fn map_jacobian(map: &EdgeMap, alpha: &Rational, beta: &Rational, xi: &Point4) -> Result<(Point4, [[Rational; 4]; 4])> {
    let (a, b) = (Dual::constant(alpha.clone()), Dual::constant(beta.clone()));
    let mut image: Option<Point4> = None;
    let mut jac: [[Rational; 4]; 4] = std::array::from_fn(|_| std::array::from_fn(|_| Rational::zero()));
    for k in 0..4 {
        let lifted: [DualScalar; 4] =
            std::array::from_fn(|m| Dual::new(xi[m].clone(), if m == k { Rational::one() } else { Rational::zero() }));
        let x = LeafPoint::new(lifted[0].clone(), lifted[1].clone());
        let y = LeafPoint::new(lifted[2].clone(), lifted[3].clone());
        let (u, v) = map.apply(&a, &b, &x, &y)?;
        let out = [u.x1, u.x2, v.x1, v.x2];
        for (row, o) in out.iter().enumerate() {
            jac[row][k] = o.derivative.clone();
        }
        image.get_or_insert_with(|| std::array::from_fn(|m| out[m].value.clone()));
    }
    Ok((image.expect("four passes"), jac))
}

/// Pushforward test `J·P(ξ)·Jᵀ = P(Φ(ξ))`, i.e. `{f∘Φ, g∘Φ} = {f, g}∘Φ` for
/// all coordinate pairs.
pub fn check_symplectic(map: &EdgeMap, rb: &ReducedBracket, alpha: &Rational, beta: &Rational, xi: &Point4) -> Result<bool> {
    let (image, jac) = map_jacobian(map, alpha, beta, xi)?;
    let p = rb.tensor(xi)?;
    let target = rb.tensor(&image)?;
    Ok((0..4).all(|r| (0..4).all(|s| quadratic_form(&p, &jac[r], &jac[s]) == target[r][s])))
}

/// First integrals listed for the maps `S`, `R̄` and `T`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Integral {
    S1,
    S2,
    Rbar1,
    Rbar2,
    T1,
    T2,
}

impl Integral {
    pub fn name(self) -> &'static str {
        match self {
            Integral::S1 => "J^s1",
            Integral::S2 => "J^s2",
            Integral::Rbar1 => "J^Rbar1",
            Integral::Rbar2 => "J^Rbar2",
            Integral::T1 => "J^T1",
            Integral::T2 => "J^T2",
        }
    }

    pub fn eval<T: Scalar>(self, alpha: &T, beta: &T, xi: &[T; 4]) -> Result<T> {
        let [x1, x2, y1, y2] = xi;
        let one = T::one();
        match self {
            Integral::S1 => {
                let tail = (y1.clone() * &(x1.square() - x1 + alpha)).div(x2)?;
                Ok(x2.clone() * y2 + &(x1.clone() * &(y1.clone() * y2 + beta - &one)) - &tail)
            }
            Integral::S2 => Ok(x1.clone() + &(y1.clone() * y2)),
            Integral::Rbar1 => Ok(alpha.clone() * y1 * y2
                + &(beta.clone() * x1 * x2)
                + &((x2.clone() * y1 + &one) * &(x1.clone() * y2 + &one))),
            Integral::Rbar2 => Ok(x1.clone() * x2 + &(y1.clone() * y2)),
            Integral::T1 => {
                let tail = (x1.clone() * &(y1.square() - y1 + beta)).div(y2)?;
                Ok(x2.clone() * y2 + &(y1.clone() * &(x1.clone() * x2 + alpha - &one)) - &tail)
            }
            Integral::T2 => Ok(y1.clone() + &(x1.clone() * x2)),
        }
    }
}

/// Integrals of a map together with the leaf pair they live on.
pub fn integral_catalog(tag: LeafPair) -> Vec<Integral> {
    match tag {
        LeafPair::S => vec![Integral::S1, Integral::S2],
        LeafPair::Rbar => vec![Integral::Rbar1, Integral::Rbar2],
        LeafPair::T => vec![Integral::T1, Integral::T2],
        LeafPair::R => Vec::new(),
    }
}

fn closed_map(tag: LeafPair) -> EdgeMap {
    match tag {
        LeafPair::S => EdgeMap::S,
        LeafPair::R => EdgeMap::R,
        LeafPair::Rbar => EdgeMap::Rbar,
        LeafPair::T => EdgeMap::T,
    }
}

/// Every catalogued integral of the map is unchanged at `ξ ↦ Φ(ξ)`.
pub fn integrals_invariant(tag: LeafPair, alpha: &Rational, beta: &Rational, xi: &Point4) -> Result<bool> {
    let (x, y) = split(xi);
    let (u, v) = closed_map(tag).apply(alpha, beta, &x, &y)?;
    let image = [u.x1, u.x2, v.x1, v.x2];
    for j in integral_catalog(tag) {
        if j.eval(alpha, beta, xi)? != j.eval(alpha, beta, &image)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `{J₁, J₂}(ξ)` under the map's reduced bracket.
pub fn integrals_involution(tag: LeafPair, alpha: &Rational, beta: &Rational, xi: &Point4) -> Result<Rational> {
    let catalog = integral_catalog(tag);
    let [j1, j2] = catalog[..] else {
        return Err(Error::Unsupported(format!("no integral pair catalogued for {tag}")));
    };
    let (a, b) = (Dual::constant(alpha.clone()), Dual::constant(beta.clone()));
    bracket_eval(|v| j1.eval(&a, &b, v), |v| j2.eval(&a, &b, v), &reduced_bracket(tag), xi)
}

/// `{x₁, x₂}` on a leaf, obtained by restricting the ambient table to the
/// chart's two coordinate entries.
pub fn derived_leaf_bracket(family: LaxFamily, alpha: &Rational, p: &LeafPoint<Rational>) -> Result<Rational> {
    let chart = exact_chart::<Rational>(family)?;
    let params = LeafParams::unit(alpha.clone());
    let lax = chart.lax(p, &params)?;
    let table = sklyanin_entry_brackets(&lax.a_part);
    let (c1, c2) = match family {
        LaxFamily::L1 => (0, 1),
        _ => (1, 2),
    };
    Ok(table.eval(&lax.x_part, c1, c2))
}

/// Chain-rule consistency: for every pair of ambient entries, the ambient
/// bracket on the leaf equals the reduced bracket of the chart functions.
pub fn chart_consistent(family: LaxFamily, alpha: &Rational, p: &LeafPoint<Rational>) -> Result<bool> {
    let chart = exact_chart::<Rational>(family)?;
    let params = LeafParams::unit(alpha.clone());
    let lax = chart.lax(p, &params)?;
    let table = sklyanin_entry_brackets(&lax.a_part);
    let dual_chart = exact_chart::<DualScalar>(family)?;
    let dual_params = LeafParams::unit(Dual::constant(alpha.clone()));
    let pt = [p.x1.clone(), p.x2.clone()];
    let mut grads = Vec::with_capacity(4);
    for idx in 0..4 {
        let (i, j) = entry(idx);
        let (_, g) = gradient(
            |v: &[DualScalar; 2]| {
                let m = dual_chart.point_matrix(&LeafPoint::new(v[0].clone(), v[1].clone()), &dual_params)?;
                Ok(m.m[i][j].clone())
            },
            &pt,
        )?;
        grads.push(g);
    }
    let b = leaf_bracket(family, p)?;
    let reduced = [[Rational::zero(), b.clone()], [-b, Rational::zero()]];
    Ok((0..4).all(|s| (0..4).all(|t| quadratic_form(&reduced, &grads[s], &grads[t]) == table.eval(&lax.x_part, s, t))))
}
