//! Spectrum-preserving refactorization of binomial products, and recovery of
//! the three factors from a triple product.
//!
//! Given invertible commuting `A`, `B`, the unique `(U, V)` with
//!
//! ```text
//! (U − ζA)(V − ζB) = (Y − ζB)(X − ζA),   det(U − ζA) = det(X − ζA)
//! ```
//!
//! is `U = Π₂Π₁⁻¹A`, `V = A⁻¹(YA + BX − UB)` where
//! `Π₁ = f₂(YA + BX) − f₁AB` and `Π₂ = f₂YX − f₀AB` with `fᵢ = fᵢ(X; A)`.

pub mod oracle;

use crate::error::{Error, Result};
use crate::matpoly::{char_poly, BinomialMatrix, CharPoly, Mat2, MatPoly};
use crate::numerics::Scalar;

pub use oracle::{refactor_oracle, OracleConfig, OracleReport};

/// Validated refactorization input: `det A ≠ 0`, `det B ≠ 0`, `AB = BA`.
#[derive(Clone, Debug, PartialEq)]
pub struct RefactorInput<T> {
    pub x: Mat2<T>,
    pub y: Mat2<T>,
    pub a: Mat2<T>,
    pub b: Mat2<T>,
}

impl<T: Scalar> RefactorInput<T> {
    pub fn new(x: Mat2<T>, y: Mat2<T>, a: Mat2<T>, b: Mat2<T>) -> Result<Self> {
        if a.det().is_zero() || b.det().is_zero() {
            return Err(Error::SingularMatrix);
        }
        if !a.commutes_with(&b) {
            return Err(Error::NonCommuting);
        }
        Ok(RefactorInput { x, y, a, b })
    }
}

/// `(Π₁(X, Y), Π₂(X, Y))`.
pub fn pi_matrices<T: Scalar>(input: &RefactorInput<T>) -> (Mat2<T>, Mat2<T>) {
    let RefactorInput { x, y, a, b } = input;
    let cp = char_poly(x, a);
    let ab = a * b;
    let pi1 = (&(y * a) + &(b * x)).scale(&cp.f2) - ab.scale(&cp.f1);
    let pi2 = (y * x).scale(&cp.f2) - ab.scale(&cp.f0);
    (pi1, pi2)
}

/// Returns `(U, V)`; fails with [`Error::SingularPi1`] where the map is undefined.
pub fn refactor_pair<T: Scalar>(input: &RefactorInput<T>) -> Result<(Mat2<T>, Mat2<T>)> {
    let RefactorInput { x, y, a, b } = input;
    let (pi1, pi2) = pi_matrices(input);
    let pi1_inv = pi1.inverse().map_err(|_| Error::SingularPi1)?;
    let u = &(&pi2 * &pi1_inv) * a;
    let v = &a.inverse()? * &(&(&(y * a) + &(b * x)) - &(&u * b));
    Ok((u, v))
}

/// True iff `(U − ζA)(V − ζB) = (Y − ζB)(X − ζA)` coefficient-wise and both
/// characteristic polynomials are preserved.
pub fn verify_refactorization<T: Scalar>(
    u: &Mat2<T>,
    v: &Mat2<T>,
    x: &Mat2<T>,
    y: &Mat2<T>,
    a: &Mat2<T>,
    b: &Mat2<T>,
) -> bool {
    let lhs = BinomialMatrix::new(u.clone(), a.clone())
        .to_poly()
        .mul_binomial(&BinomialMatrix::new(v.clone(), b.clone()));
    let rhs = BinomialMatrix::new(y.clone(), b.clone())
        .to_poly()
        .mul_binomial(&BinomialMatrix::new(x.clone(), a.clone()));
    lhs.matches(&rhs) && char_poly(u, a).matches(&char_poly(x, a)) && char_poly(v, b).matches(&char_poly(y, b))
}

/// Coefficients of `(X − ζA₁)(Y − ζA₂)(Z − ζA₃) = K − ζL + ζ²M − ζ³A₁A₂A₃`.
#[derive(Clone, Debug, PartialEq)]
pub struct TripleProduct<T> {
    pub k: Mat2<T>,
    pub l: Mat2<T>,
    pub m: Mat2<T>,
    pub a1: Mat2<T>,
    pub a2: Mat2<T>,
    pub a3: Mat2<T>,
}

impl<T: Scalar> TripleProduct<T> {
    pub fn from_factors(
        x: &Mat2<T>,
        y: &Mat2<T>,
        z: &Mat2<T>,
        a1: &Mat2<T>,
        a2: &Mat2<T>,
        a3: &Mat2<T>,
    ) -> Self {
        let k = &(x * y) * z;
        let l = &(&(&(x * y) * a3) + &(&(x * a2) * z)) + &(&(a1 * y) * z);
        let m = &(&(&(x * a2) * a3) + &(&(a1 * y) * a3)) + &(&(a1 * a2) * z);
        TripleProduct { k, l, m, a1: a1.clone(), a2: a2.clone(), a3: a3.clone() }
    }

    pub fn leading(&self) -> Mat2<T> {
        &(&self.a1 * &self.a2) * &self.a3
    }

    pub fn to_poly(&self) -> MatPoly<T> {
        MatPoly::new(vec![self.k.clone(), -self.l.clone(), self.m.clone(), -self.leading()])
    }

    fn transposed_reversed(&self) -> Self {
        TripleProduct {
            k: self.k.transpose(),
            l: self.l.transpose(),
            m: self.m.transpose(),
            a1: self.a3.transpose(),
            a2: self.a2.transpose(),
            a3: self.a1.transpose(),
        }
    }
}

/// `α₂²L − α₂α₁M + (α₁² − α₂α₀)A₁A₂A₃`.
fn recovery_bracket<T: Scalar>(tp: &TripleProduct<T>, cp: &CharPoly<T>) -> Mat2<T> {
    let (a2, a1, a0) = (&cp.f2, &cp.f1, &cp.f0);
    tp.l.scale(&a2.square()) - tp.m.scale(&(a2.clone() * a1))
        + tp.leading().scale(&(a1.square() - a2.clone() * a0))
}

/// `α₂²K − α₂α₀M + α₁α₀A₁A₂A₃`.
fn recovery_rhs<T: Scalar>(tp: &TripleProduct<T>, cp: &CharPoly<T>) -> Mat2<T> {
    let (a2, a1, a0) = (&cp.f2, &cp.f1, &cp.f0);
    tp.k.scale(&a2.square()) - tp.m.scale(&(a2.clone() * a0)) + tp.leading().scale(&(a1.clone() * a0))
}

fn recover_first<T: Scalar>(tp: &TripleProduct<T>, cp: &CharPoly<T>) -> Result<Mat2<T>> {
    let bracket = recovery_bracket(tp, cp);
    let inv = bracket.inverse().map_err(|_| Error::SingularRecovery)?;
    Ok(&(&recovery_rhs(tp, cp) * &inv) * &tp.a1)
}

/// `Q = α₂²K − α₂α₀M + α₁α₀A₁A₂A₃ − XA₁⁻¹[α₂²L − α₂α₁M + (α₁² − α₂α₀)A₁A₂A₃]`
/// for the product built from `(X, Y, Z)`, with `αᵢ = fᵢ(X; A₁)`.
pub fn q_residual<T: Scalar>(tp: &TripleProduct<T>, x: &Mat2<T>) -> Result<Mat2<T>> {
    let cp = char_poly(x, &tp.a1);
    let xa = x * &tp.a1.inverse()?;
    Ok(recovery_rhs(tp, &cp) - &xa * &recovery_bracket(tp, &cp))
}

/// Factorized form `p_X^{A₁}(XA₁⁻¹)·(α₁A₁A₂A₃ − α₂(A₁YA₃ + A₁A₂Z))`.
pub fn q_factorized<T: Scalar>(tp: &TripleProduct<T>, x: &Mat2<T>, y: &Mat2<T>, z: &Mat2<T>) -> Result<Mat2<T>> {
    let cp = char_poly(x, &tp.a1);
    let xa = x * &tp.a1.inverse()?;
    let tail = tp.leading().scale(&cp.f1)
        - (&(&(&tp.a1 * y) * &tp.a3) + &(&(&tp.a1 * &tp.a2) * z)).scale(&cp.f2);
    Ok(&cp.eval_matrix(&xa) * &tail)
}

/// Recovers `(X, Y, Z)` from the triple product and the prescribed spectra.
///
/// `X` and `Z` come from the closed-form resolvent (the latter on the
/// transposed, reversed product), `Y` from the `ζ²` coefficient. The
/// reconstructed product must equal the input, otherwise
/// [`Error::InconsistentProduct`].
pub fn recover_from_triple_product<T: Scalar>(
    tp: &TripleProduct<T>,
    cp1: &CharPoly<T>,
    cp2: &CharPoly<T>,
    cp3: &CharPoly<T>,
) -> Result<(Mat2<T>, Mat2<T>, Mat2<T>)> {
    for a in [&tp.a1, &tp.a2, &tp.a3] {
        if a.det().is_zero() {
            return Err(Error::SingularMatrix);
        }
    }
    if !(tp.a1.commutes_with(&tp.a2) && tp.a1.commutes_with(&tp.a3) && tp.a2.commutes_with(&tp.a3)) {
        return Err(Error::NonCommuting);
    }
    let x = recover_first(tp, cp1)?;
    let z = recover_first(&tp.transposed_reversed(), cp3)?.transpose();
    // M = XA₂A₃ + A₁YA₃ + A₁A₂Z
    let rest = &(&tp.m - &(&(&x * &tp.a2) * &tp.a3)) - &(&(&tp.a1 * &tp.a2) * &z);
    let y = &(&tp.a1.inverse()? * &rest) * &tp.a3.inverse()?;

    let rebuilt = TripleProduct::from_factors(&x, &y, &z, &tp.a1, &tp.a2, &tp.a3);
    let spectra_ok = char_poly(&x, &tp.a1).matches(cp1)
        && char_poly(&y, &tp.a2).matches(cp2)
        && char_poly(&z, &tp.a3).matches(cp3);
    if !(rebuilt.k.matches(&tp.k) && rebuilt.l.matches(&tp.l) && rebuilt.m.matches(&tp.m) && spectra_ok) {
        return Err(Error::InconsistentProduct);
    }
    Ok((x, y, z))
}
