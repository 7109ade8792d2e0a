//! 2×2 matrices, binomial matrices `X − ζA` and matrix polynomials in ζ.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use rug::Integer;

use crate::numerics::{Int, Rational, Scalar};

/// A 2×2 matrix, row-major.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Mat2<T> {
    pub m: [[T; 2]; 2],
}

impl<T: fmt::Debug> fmt::Debug for Mat2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{:?}, {:?}], [{:?}, {:?}]]",
            self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1]
        )
    }
}

impl<T: Scalar> Mat2<T> {
    pub fn new(a11: T, a12: T, a21: T, a22: T) -> Self {
        Mat2 { m: [[a11, a12], [a21, a22]] }
    }

    pub fn from_i64(m: [[i64; 2]; 2]) -> Self {
        Mat2::new(
            T::from_i64(m[0][0]),
            T::from_i64(m[0][1]),
            T::from_i64(m[1][0]),
            T::from_i64(m[1][1]),
        )
    }

    pub fn zero() -> Self {
        Mat2::new(T::zero(), T::zero(), T::zero(), T::zero())
    }

    pub fn identity() -> Self {
        Mat2::diag(T::one(), T::one())
    }

    pub fn diag(a: T, d: T) -> Self {
        Mat2::new(a, T::zero(), T::zero(), d)
    }

    pub fn scalar(c: T) -> Self {
        Mat2::diag(c.clone(), c)
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.m[i][j]
    }

    pub fn det(&self) -> T {
        let [[a, b], [c, d]] = &self.m;
        a.clone() * d - b.clone() * c
    }

    pub fn trace(&self) -> T {
        self.m[0][0].clone() + &self.m[1][1]
    }

    pub fn transpose(&self) -> Self {
        let [[a, b], [c, d]] = self.m.clone();
        Mat2::new(a, c, b, d)
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|e| e.clone() * c)
    }

    pub fn map<U, F: Fn(&T) -> U>(&self, f: F) -> Mat2<U> {
        Mat2 {
            m: [
                [f(&self.m[0][0]), f(&self.m[0][1])],
                [f(&self.m[1][0]), f(&self.m[1][1])],
            ],
        }
    }

    /// Adjugate: `adj(M)·M = det(M)·I`.
    pub fn adjugate(&self) -> Self {
        let [[a, b], [c, d]] = self.m.clone();
        Mat2::new(d, -b, -c, a)
    }

    pub fn inverse(&self) -> Result<Self> {
        let det = self.det();
        if det.is_zero() {
            return Err(Error::SingularMatrix);
        }
        let r = det.inv()?;
        Ok(self.adjugate().scale(&r))
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        self * other == other * self
    }

    pub fn is_zero(&self) -> bool {
        self.entries().all(|e| e.is_zero())
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.m.iter().flatten()
    }

    /// Entry-wise [`Scalar::matches`].
    pub fn matches(&self, other: &Self) -> bool {
        self.entries().zip(other.entries()).all(|(a, b)| a.matches(b))
    }
}

impl<'b, T: Scalar> Mul<&'b Mat2<T>> for &Mat2<T> {
    type Output = Mat2<T>;
    fn mul(self, rhs: &'b Mat2<T>) -> Mat2<T> {
        let a = &self.m;
        let b = &rhs.m;
        let e = |i: usize, j: usize| a[i][0].clone() * &b[0][j] + a[i][1].clone() * &b[1][j];
        Mat2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }
}

impl<T: Scalar> Mul for Mat2<T> {
    type Output = Mat2<T>;
    fn mul(self, rhs: Mat2<T>) -> Mat2<T> {
        &self * &rhs
    }
}

impl<'a, T: Scalar> Mul<&'a Mat2<T>> for Mat2<T> {
    type Output = Mat2<T>;
    fn mul(self, rhs: &'a Mat2<T>) -> Mat2<T> {
        &self * rhs
    }
}

impl<'b, T: Scalar> Add<&'b Mat2<T>> for &Mat2<T> {
    type Output = Mat2<T>;
    fn add(self, rhs: &'b Mat2<T>) -> Mat2<T> {
        let e = |i: usize, j: usize| self.m[i][j].clone() + &rhs.m[i][j];
        Mat2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }
}

impl<T: Scalar> Add for Mat2<T> {
    type Output = Mat2<T>;
    fn add(self, rhs: Mat2<T>) -> Mat2<T> {
        &self + &rhs
    }
}

impl<'a, T: Scalar> Add<&'a Mat2<T>> for Mat2<T> {
    type Output = Mat2<T>;
    fn add(self, rhs: &'a Mat2<T>) -> Mat2<T> {
        &self + rhs
    }
}

impl<'b, T: Scalar> Sub<&'b Mat2<T>> for &Mat2<T> {
    type Output = Mat2<T>;
    fn sub(self, rhs: &'b Mat2<T>) -> Mat2<T> {
        let e = |i: usize, j: usize| self.m[i][j].clone() - &rhs.m[i][j];
        Mat2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }
}

impl<T: Scalar> Sub for Mat2<T> {
    type Output = Mat2<T>;
    fn sub(self, rhs: Mat2<T>) -> Mat2<T> {
        &self - &rhs
    }
}

impl<'a, T: Scalar> Sub<&'a Mat2<T>> for Mat2<T> {
    type Output = Mat2<T>;
    fn sub(self, rhs: &'a Mat2<T>) -> Mat2<T> {
        &self - rhs
    }
}

impl<T: Scalar> Neg for Mat2<T> {
    type Output = Mat2<T>;
    fn neg(self) -> Mat2<T> {
        self.map(|e| -e.clone())
    }
}

/// Coefficients of `det(X − ζA) = f₂ζ² − f₁ζ + f₀`.
#[derive(Clone, Debug, PartialEq)]
pub struct CharPoly<T> {
    pub f2: T,
    pub f1: T,
    pub f0: T,
}

impl<T: Scalar> CharPoly<T> {
    pub fn eval(&self, zeta: &T) -> T {
        self.f2.clone() * zeta * zeta - self.f1.clone() * zeta + &self.f0
    }

    /// Evaluates the polynomial at a matrix argument: `f₂M² − f₁M + f₀I`.
    pub fn eval_matrix(&self, m: &Mat2<T>) -> Mat2<T> {
        (m * m).scale(&self.f2) - m.scale(&self.f1) + Mat2::scalar(self.f0.clone())
    }

    pub fn matches(&self, other: &Self) -> bool {
        self.f2.matches(&other.f2) && self.f1.matches(&other.f1) && self.f0.matches(&other.f0)
    }
}

/// `f₁(X; A) = a₂₂x₁₁ − a₂₁x₁₂ − a₁₂x₂₁ + a₁₁x₂₂`.
pub fn f1<T: Scalar>(x: &Mat2<T>, a: &Mat2<T>) -> T {
    let [[x11, x12], [x21, x22]] = &x.m;
    let [[a11, a12], [a21, a22]] = &a.m;
    a22.clone() * x11 - a21.clone() * x12 - a12.clone() * x21 + a11.clone() * x22
}

pub fn char_poly<T: Scalar>(x: &Mat2<T>, a: &Mat2<T>) -> CharPoly<T> {
    CharPoly { f2: a.det(), f1: f1(x, a), f0: x.det() }
}

/// `f₂(XA⁻¹)² − f₁(XA⁻¹) + f₀I`, identically zero by Cayley–Hamilton.
pub fn cayley_hamilton_residual<T: Scalar>(x: &Mat2<T>, a: &Mat2<T>) -> Result<Mat2<T>> {
    let xa = x * &a.inverse()?;
    Ok(char_poly(x, a).eval_matrix(&xa))
}

/// The binomial matrix `L(ζ) = X − ζA`.
#[derive(Clone, Debug, PartialEq)]
pub struct BinomialMatrix<T> {
    pub x_part: Mat2<T>,
    pub a_part: Mat2<T>,
}

impl<T: Scalar> BinomialMatrix<T> {
    pub fn new(x_part: Mat2<T>, a_part: Mat2<T>) -> Self {
        BinomialMatrix { x_part, a_part }
    }

    pub fn eval(&self, zeta: &T) -> Mat2<T> {
        &self.x_part - &self.a_part.scale(zeta)
    }

    pub fn char_poly(&self) -> CharPoly<T> {
        char_poly(&self.x_part, &self.a_part)
    }

    pub fn to_poly(&self) -> MatPoly<T> {
        MatPoly::new(vec![self.x_part.clone(), -self.a_part.clone()])
    }
}

impl BinomialMatrix<Rational> {
    /// `(d, d·(X − ζA))` with `d` the lcm of all entry denominators.
    pub fn clear_denominators(&self) -> (Int, BinomialMatrix<Int>) {
        let d = self
            .x_part
            .entries()
            .chain(self.a_part.entries())
            .fold(Int::one(), |acc, e| acc.lcm(&e.to_fraction().1));
        let scale = |m: &Mat2<Rational>| {
            m.map(|e| {
                let (n, q) = e.to_fraction();
                Int(Integer::from(&d.0 / &q.0) * n.0)
            })
        };
        let scaled = BinomialMatrix::new(scale(&self.x_part), scale(&self.a_part));
        (d, scaled)
    }
}

/// `P/scale` with an integer polynomial `P`; products stay fraction-free.
#[derive(Clone, Debug)]
pub struct ScaledMatPoly {
    pub scale: Int,
    pub poly: MatPoly<Int>,
}

impl ScaledMatPoly {
    /// Ordered product of rational binomial factors.
    pub fn product<'a>(factors: impl IntoIterator<Item = &'a BinomialMatrix<Rational>>) -> Self {
        factors.into_iter().fold(
            ScaledMatPoly { scale: Int::one(), poly: MatPoly::identity() },
            |acc, f| acc.mul_binomial(f),
        )
    }

    pub fn from_binomial(f: &BinomialMatrix<Rational>) -> Self {
        let (d, b) = f.clear_denominators();
        ScaledMatPoly { scale: d, poly: b.to_poly() }
    }

    pub fn mul_binomial(&self, f: &BinomialMatrix<Rational>) -> Self {
        let (d, b) = f.clear_denominators();
        ScaledMatPoly { scale: self.scale.clone() * &d, poly: self.poly.mul_binomial(&b) }
    }

    pub fn mul(&self, other: &ScaledMatPoly) -> Self {
        ScaledMatPoly { scale: self.scale.clone() * &other.scale, poly: self.poly.mul(&other.poly) }
    }

    pub fn to_rational(&self) -> MatPoly<Rational> {
        let coeffs = self
            .poly
            .coeffs
            .iter()
            .map(|c| c.map(|e| Rational::from_ints(e, &self.scale).expect("scale is nonzero")))
            .collect();
        MatPoly::new(coeffs)
    }

    /// Trace coefficients, exact.
    pub fn trace(&self) -> Vec<Rational> {
        let scale = &self.scale;
        self.poly.trace().iter().map(|t| Rational::from_ints(t, scale).expect("scale is nonzero")).collect()
    }

    /// Determinant coefficients, exact.
    pub fn det(&self) -> Vec<Rational> {
        let sq = self.scale.clone() * &self.scale;
        self.poly.det().iter().map(|t| Rational::from_ints(t, &sq).expect("scale is nonzero")).collect()
    }

    /// Exact test of the trace coefficients against known rationals, without
    /// reducing any fraction.
    pub fn trace_equals(&self, expected: &[Rational]) -> bool {
        let trace = self.poly.trace();
        trace.len() == expected.len()
            && trace.iter().zip(expected).all(|(v, r)| {
                let (n, d) = r.to_fraction();
                v.clone() * &d == n * &self.scale
            })
    }

    /// Exact equality as rational polynomials, by cross-multiplying scales.
    pub fn same_as(&self, other: &ScaledMatPoly) -> bool {
        let n = self.poly.coeffs.len().max(other.poly.coeffs.len());
        (0..n).all(|k| {
            let (a, b) = (self.poly.coeff(k), other.poly.coeff(k));
            let equal = a
                .entries()
                .zip(b.entries())
                .all(|(p, q)| p.clone() * &other.scale == q.clone() * &self.scale);
            equal
        })
    }
}

/// Dense matrix polynomial; `coeffs[k]` multiplies `ζᵏ`.
#[derive(Clone, Debug)]
pub struct MatPoly<T> {
    pub coeffs: Vec<Mat2<T>>,
}

impl<T: Scalar> MatPoly<T> {
    pub fn new(coeffs: Vec<Mat2<T>>) -> Self {
        assert!(!coeffs.is_empty(), "matrix polynomial needs at least one coefficient");
        MatPoly { coeffs }
    }

    pub fn constant(m: Mat2<T>) -> Self {
        MatPoly::new(vec![m])
    }

    pub fn identity() -> Self {
        MatPoly::constant(Mat2::identity())
    }

    /// Nominal degree (the stored length minus one, zeros included).
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> Mat2<T> {
        self.coeffs.get(k).cloned().unwrap_or_else(Mat2::zero)
    }

    pub fn eval(&self, zeta: &T) -> Mat2<T> {
        // Horner
        let mut acc = Mat2::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.scale(zeta) + c;
        }
        acc
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![Mat2::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, p) in self.coeffs.iter().enumerate() {
            for (j, q) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(p * q);
            }
        }
        MatPoly::new(out)
    }

    pub fn mul_binomial(&self, b: &BinomialMatrix<T>) -> Self {
        self.mul(&b.to_poly())
    }

    /// Multiplies every coefficient by a constant matrix on the left.
    pub fn left_mul(&self, m: &Mat2<T>) -> Self {
        MatPoly::new(self.coeffs.iter().map(|c| m * c).collect())
    }

    pub fn right_mul(&self, m: &Mat2<T>) -> Self {
        MatPoly::new(self.coeffs.iter().map(|c| c * m).collect())
    }

    /// Scalar polynomial `tr P(ζ)`, coefficients ascending.
    pub fn trace(&self) -> Vec<T> {
        self.coeffs.iter().map(Mat2::trace).collect()
    }

    /// Scalar polynomial `det P(ζ)`, coefficients ascending.
    pub fn det(&self) -> Vec<T> {
        let entry = |i: usize, j: usize| -> Vec<T> {
            self.coeffs.iter().map(|c| c.m[i][j].clone()).collect()
        };
        let ad = poly_mul(&entry(0, 0), &entry(1, 1));
        let bc = poly_mul(&entry(0, 1), &entry(1, 0));
        ad.into_iter().zip(bc).map(|(x, y)| x - y).collect()
    }

    /// Coefficient-wise [`Scalar::matches`], missing coefficients read as zero.
    pub fn matches(&self, other: &Self) -> bool {
        self.matches_at_scale(other, 1.0)
    }

    pub fn matches_at_scale(&self, other: &Self, scale: f64) -> bool {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).all(|k| {
            let (a, b) = (self.coeff(k), other.coeff(k));
            let ok = a.entries().zip(b.entries()).all(|(p, q)| p.matches_at_scale(q, scale));
            ok
        })
    }

    /// Largest entry magnitude over all coefficients.
    pub fn magnitude(&self) -> f64 {
        self.coeffs.iter().flat_map(|c| c.entries()).map(|e| e.magnitude()).fold(0.0, f64::max)
    }
}

/// Polynomial identity over an infinite field is coefficient identity; missing
/// high coefficients compare as zero.
impl<T: Scalar> PartialEq for MatPoly<T> {
    fn eq(&self, other: &Self) -> bool {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).all(|k| self.coeff(k) == other.coeff(k))
    }
}

/// Ordered product `P₁·P₂·…·Pₖ` of binomial factors.
pub fn product<'a, T: Scalar + 'a>(factors: impl IntoIterator<Item = &'a BinomialMatrix<T>>) -> MatPoly<T> {
    factors.into_iter().fold(MatPoly::identity(), |acc, f| acc.mul_binomial(f))
}

fn poly_mul<T: Scalar>(p: &[T], q: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            out[i + j] = out[i + j].clone() + &(a.clone() * b);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Rational;
    use crate::sample::{random_invertible, random_mat, random_rational};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type M = Mat2<Rational>;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn diagonal_inverse() {
        let a = M::from_i64([[1, 0], [0, 2]]);
        assert_eq!(a.inverse().unwrap(), M::diag(q(1, 1), q(1, 2)));
        assert_eq!(M::from_i64([[1, 2], [2, 4]]).inverse(), Err(Error::SingularMatrix));
    }

    #[test]
    fn identity_commutes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = random_mat(&mut rng);
        assert!(M::identity().commutes_with(&m));
        assert!(!M::from_i64([[1, 1], [0, 1]]).commutes_with(&M::from_i64([[1, 0], [1, 1]])));
    }

    #[test]
    fn det_by_cofactors() {
        assert_eq!(M::from_i64([[1, 2], [3, 4]]).det(), q(-2, 1));
    }

    #[test]
    fn char_poly_examples() {
        let cp = char_poly(&M::from_i64([[1, 2], [3, 4]]), &M::identity());
        assert_eq!(cp, CharPoly { f2: q(1, 1), f1: q(5, 1), f0: q(-2, 1) });

        let cp = char_poly(&M::zero(), &M::identity());
        assert_eq!(cp, CharPoly { f2: q(1, 1), f1: q(0, 1), f0: q(0, 1) });

        // A = diag(1, ε): f₁ = ε·x₁₁ + x₂₂
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let x = random_mat(&mut rng);
        let eps = q(3, 7);
        let cp = char_poly(&x, &M::diag(q(1, 1), eps.clone()));
        assert_eq!(cp.f1, eps * &x.m[0][0] + &x.m[1][1]);
    }

    #[test]
    fn char_poly_matches_expanded_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let x = random_mat(&mut rng);
            let a = random_mat(&mut rng);
            let cp = char_poly(&x, &a);
            let b = BinomialMatrix::new(x, a);
            for _ in 0..3 {
                let z = random_rational(&mut rng);
                assert_eq!(b.eval(&z).det(), cp.eval(&z));
            }
        }
    }

    #[test]
    fn binomial_product_expansion() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let x = random_mat(&mut rng);
        let y = random_mat(&mut rng);
        let p = BinomialMatrix::new(x.clone(), M::identity()).to_poly();
        let qq = BinomialMatrix::new(y.clone(), M::identity()).to_poly();
        let prod = p.mul(&qq);
        assert_eq!(prod.degree(), 2);
        assert_eq!(prod.coeffs[0], &x * &y);
        assert_eq!(prod.coeffs[1], -(&x + &y));
        assert_eq!(prod.coeffs[2], M::identity());
        assert_eq!(p.mul(&MatPoly::identity()), p);
    }

    #[test]
    fn binomial_eval_convention() {
        let b = BinomialMatrix::new(M::from_i64([[1, 2], [3, 4]]), M::from_i64([[5, 6], [7, 8]]));
        assert_eq!(b.eval(&Rational::from_integer(0)), b.x_part);
        assert_eq!(b.to_poly().coeffs[1], -b.a_part.clone());
    }

    #[test]
    fn cayley_hamilton_cases() {
        let i = M::identity();
        assert!(cayley_hamilton_residual(&M::from_i64([[1, 2], [3, 4]]), &i).unwrap().is_zero());
        assert!(cayley_hamilton_residual(&i, &i).unwrap().is_zero());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = M::diag(q(1, 1), q(3, 1));
        for _ in 0..10 {
            let x = random_mat(&mut rng);
            assert!(cayley_hamilton_residual(&x, &a).unwrap().is_zero());
        }
        assert_eq!(
            cayley_hamilton_residual(&i, &M::from_i64([[1, 1], [1, 1]])),
            Err(Error::SingularMatrix)
        );
    }

    #[test]
    fn matpoly_equality_ignores_trailing_zeros() {
        let a = MatPoly::new(vec![M::identity()]);
        let b = MatPoly::new(vec![M::identity(), M::zero()]);
        assert_eq!(a, b);
    }

    #[test]
    fn randomized_matrix_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..30 {
            let a = random_invertible(&mut rng);
            let b = random_mat(&mut rng);
            let x = random_mat(&mut rng);
            assert_eq!((&a * &b).det(), a.det() * &b.det());
            assert_eq!(&a * &a.inverse().unwrap(), M::identity());

            // conjugation invariance of the characteristic coefficients
            let p = random_invertible(&mut rng);
            let pi = p.inverse().unwrap();
            let conj = |m: &M| &(&p * m) * &pi;
            assert_eq!(char_poly(&conj(&x), &conj(&b)), char_poly(&x, &b));

            // evaluation homomorphism and multiplicativity of det
            let p1 = BinomialMatrix::new(random_mat(&mut rng), random_mat(&mut rng)).to_poly();
            let p2 = product([
                &BinomialMatrix::new(random_mat(&mut rng), random_mat(&mut rng)),
                &BinomialMatrix::new(random_mat(&mut rng), random_mat(&mut rng)),
            ]);
            let prod = p1.mul(&p2);
            assert_eq!(prod.degree(), 3);
            let det_poly = prod.det();
            for _ in 0..3 {
                let z = random_rational(&mut rng);
                assert_eq!(prod.eval(&z), &p1.eval(&z) * &p2.eval(&z));
                let dz = det_poly.iter().rev().fold(Rational::from_integer(0), |acc, c| acc * &z + c);
                assert_eq!(dz, p1.eval(&z).det() * &p2.eval(&z).det());
            }
        }
    }
}
