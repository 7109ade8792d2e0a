//! Seeded sampling of small rationals, matrices and leaf points.
//!
//! Numerators and denominators are bounded by [`HEIGHT`] to keep bit growth
//! small across composed rational maps.

use rand::Rng;

use crate::leaves::LeafPoint;
use crate::matpoly::Mat2;
use crate::numerics::{Rational, Scalar};

pub const HEIGHT: i64 = 20;

pub fn random_rational<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    random_rational_bounded(rng, HEIGHT)
}

pub fn random_rational_bounded<R: Rng + ?Sized>(rng: &mut R, height: i64) -> Rational {
    let n = rng.gen_range(-height..=height);
    let d = rng.gen_range(1..=height);
    Rational::new(n, d).expect("denominator is positive")
}

pub fn random_nonzero<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    loop {
        let r = random_rational(rng);
        if !r.is_zero() {
            return r;
        }
    }
}

pub fn random_mat<R: Rng + ?Sized>(rng: &mut R) -> Mat2<Rational> {
    Mat2::new(
        random_rational(rng),
        random_rational(rng),
        random_rational(rng),
        random_rational(rng),
    )
}

pub fn random_invertible<R: Rng + ?Sized>(rng: &mut R) -> Mat2<Rational> {
    loop {
        let m = random_mat(rng);
        if !m.det().is_zero() {
            return m;
        }
    }
}

/// `A` invertible and `B = c₀I + c₁A` invertible, so `AB = BA` by construction.
pub fn random_commuting_pair<R: Rng + ?Sized>(rng: &mut R) -> (Mat2<Rational>, Mat2<Rational>) {
    let a = random_invertible(rng);
    loop {
        let c0 = random_rational(rng);
        let c1 = random_rational(rng);
        let b = Mat2::scalar(c0) + a.scale(&c1);
        if !b.det().is_zero() {
            return (a, b);
        }
    }
}

/// A leaf point with `x₂ ≠ 0` (the L1 chart divides by it).
pub fn random_leaf_point<R: Rng + ?Sized>(rng: &mut R) -> LeafPoint<Rational> {
    LeafPoint::new(random_rational(rng), random_nonzero(rng))
}

pub fn random_leaf_point_bounded<R: Rng + ?Sized>(rng: &mut R, height: i64) -> LeafPoint<Rational> {
    loop {
        let p = LeafPoint::new(
            random_rational_bounded(rng, height),
            random_rational_bounded(rng, height),
        );
        if !p.x2.is_zero() {
            return p;
        }
    }
}
