//! Periodic staircase initial-value problem.
//!
//! A state carries `n` edges `(xᵢ, yᵢ)` with parameters `(αᵢ, βᵢ)`; indices
//! wrap mod `n`. The transfer map applies the edge map at every site and then
//! shifts the `y` row cyclically by one, `(y′₂, …, y′ₙ, y′₁)`, carrying `β`
//! along with its `y`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::leaves::{family_lax, EdgeMap, LaxFamily, LeafPoint};
use crate::matpoly::{BinomialMatrix, MatPoly, ScaledMatPoly};
use crate::numerics::{Rational, Scalar};
use crate::sample::{random_leaf_point_bounded, random_rational_bounded};

#[derive(Clone, Debug, PartialEq)]
pub struct LatticeState {
    pub edge_map: EdgeMap,
    pub x: Vec<LeafPoint<Rational>>,
    pub y: Vec<LeafPoint<Rational>>,
    pub alpha: Vec<Rational>,
    pub beta: Vec<Rational>,
}

impl LatticeState {
    /// Validates lengths and that every point lies in its family's chart.
    pub fn new(
        edge_map: EdgeMap,
        x: Vec<LeafPoint<Rational>>,
        y: Vec<LeafPoint<Rational>>,
        alpha: Vec<Rational>,
        beta: Vec<Rational>,
    ) -> Result<Self> {
        let n = x.len();
        if n == 0 {
            return Err(Error::Config("period must be at least 1".into()));
        }
        if y.len() != n || alpha.len() != n || beta.len() != n {
            return Err(Error::Config(format!(
                "length mismatch: x={}, y={}, alpha={}, beta={}",
                n,
                y.len(),
                alpha.len(),
                beta.len()
            )));
        }
        let s = LatticeState { edge_map, x, y, alpha, beta };
        for i in 0..n {
            s.lax_x(i).map_err(|e| Error::Config(format!("x_{}: {e}", i + 1)))?;
            s.lax_y(i).map_err(|e| Error::Config(format!("y_{}: {e}", i + 1)))?;
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn families(&self) -> (LaxFamily, LaxFamily) {
        self.edge_map.families()
    }

    /// `L(xᵢ; αᵢ)`, zero-based site.
    pub fn lax_x(&self, i: usize) -> Result<BinomialMatrix<Rational>> {
        family_lax(self.families().0, &self.x[i], &self.alpha[i])
    }

    /// `M(yᵢ; βᵢ)`, zero-based site.
    pub fn lax_y(&self, i: usize) -> Result<BinomialMatrix<Rational>> {
        family_lax(self.families().1, &self.y[i], &self.beta[i])
    }

    /// Every factor has `f₀` equal to its parameter and `f₁ = 1`.
    pub fn on_leaves(&self) -> bool {
        (0..self.n()).all(|i| {
            let check = |l: Result<BinomialMatrix<Rational>>, p: &Rational| {
                l.map(|l| {
                    let cp = l.char_poly();
                    cp.f0 == *p && cp.f1 == Rational::one()
                })
                .unwrap_or(false)
            };
            check(self.lax_x(i), &self.alpha[i]) && check(self.lax_y(i), &self.beta[i])
        })
    }

    /// Largest numerator or denominator bit length over all coordinates.
    pub fn max_bits(&self) -> u64 {
        self.x
            .iter()
            .chain(&self.y)
            .flat_map(|p| [p.x1.bits(), p.x2.bits()])
            .max()
            .unwrap_or(0)
    }
}

/// JSON form: points as `["p/q", "p/q"]` pairs. A one-element `alpha` or
/// `beta` list is broadcast to all `n` sites.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeConfig {
    pub n: usize,
    pub edge_map: EdgeMap,
    pub x: Vec<[Rational; 2]>,
    pub y: Vec<[Rational; 2]>,
    pub alpha: Vec<Rational>,
    pub beta: Vec<Rational>,
}

impl LatticeConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

impl TryFrom<LatticeConfig> for LatticeState {
    type Error = Error;

    fn try_from(c: LatticeConfig) -> Result<Self> {
        let broadcast = |v: Vec<Rational>, name: &str| -> Result<Vec<Rational>> {
            match v.len() {
                1 => Ok(vec![v[0].clone(); c.n]),
                len if len == c.n => Ok(v),
                len => Err(Error::Config(format!("{name} has {len} entries, expected 1 or {}", c.n))),
            }
        };
        let points = |v: &[[Rational; 2]], name: &str| -> Result<Vec<LeafPoint<Rational>>> {
            if v.len() != c.n {
                return Err(Error::Config(format!("{name} has {} points, expected {}", v.len(), c.n)));
            }
            Ok(v.iter().map(|[a, b]| LeafPoint::new(a.clone(), b.clone())).collect())
        };
        let (x, y) = (points(&c.x, "x")?, points(&c.y, "y")?);
        let alpha = broadcast(c.alpha.clone(), "alpha")?;
        let beta = broadcast(c.beta.clone(), "beta")?;
        LatticeState::new(c.edge_map, x, y, alpha, beta)
    }
}

impl From<&LatticeState> for LatticeConfig {
    fn from(s: &LatticeState) -> Self {
        let pts = |v: &[LeafPoint<Rational>]| v.iter().map(|p| [p.x1.clone(), p.x2.clone()]).collect();
        LatticeConfig {
            n: s.n(),
            edge_map: s.edge_map.clone(),
            x: pts(&s.x),
            y: pts(&s.y),
            alpha: s.alpha.clone(),
            beta: s.beta.clone(),
        }
    }
}

/// `Mₙ = M(yₙ;βₙ)L(xₙ;αₙ) ⋯ M(y₁;β₁)L(x₁;α₁)`.
pub fn monodromy(s: &LatticeState) -> Result<MatPoly<Rational>> {
    Ok(monodromy_scaled(s)?.to_rational())
}

/// The monodromy with denominators cleared factor by factor.
pub fn monodromy_scaled(s: &LatticeState) -> Result<ScaledMatPoly> {
    let mut factors = Vec::with_capacity(2 * s.n());
    for i in (0..s.n()).rev() {
        factors.push(s.lax_y(i)?);
        factors.push(s.lax_x(i)?);
    }
    Ok(ScaledMatPoly::product(&factors))
}

fn apply_site(s: &LatticeState, i: usize, j: usize, x: &LeafPoint<Rational>, y: &LeafPoint<Rational>, level: usize) -> Result<(LeafPoint<Rational>, LeafPoint<Rational>)> {
    s.edge_map
        .apply(&s.alpha[i], &s.beta[j], x, y)
        .map_err(|e| Error::Site { site: i + 1, level, source: Box::new(e) })
}

/// One transfer step together with `y′₁` (the conjugating factor's point).
pub fn transfer_with_pivot(s: &LatticeState) -> Result<(LatticeState, LeafPoint<Rational>)> {
    let n = s.n();
    let mut xs = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);
    for i in 0..n {
        let (u, v) = apply_site(s, i, i, &s.x[i], &s.y[i], 1)?;
        xs.push(u);
        ys.push(v);
    }
    let pivot = ys[0].clone();
    ys.rotate_left(1);
    let mut beta = s.beta.clone();
    beta.rotate_left(1);
    let next = LatticeState { edge_map: s.edge_map.clone(), x: xs, y: ys, alpha: s.alpha.clone(), beta };
    Ok((next, pivot))
}

pub fn transfer(s: &LatticeState) -> Result<LatticeState> {
    transfer_with_pivot(s).map(|(next, _)| next)
}

/// The k-transfer map: at level `m` the site `i` meets `y_{i+m−1}`, and the
/// output `y` row is `(y⁽ᵏ⁾_{d+1}, …, y⁽ᵏ⁾ₙ, y⁽ᵏ⁾₁, …, y⁽ᵏ⁾_d)` with `d ≡ k mod n`.
pub fn k_transfer(s: &LatticeState, k: usize) -> Result<LatticeState> {
    if k == 0 {
        return Err(Error::Config("k must be positive".into()));
    }
    let n = s.n();
    let mut xs = s.x.clone();
    let mut ys = s.y.clone();
    for m in 0..k {
        for (i, x) in xs.iter_mut().enumerate() {
            let j = (i + m) % n;
            let (u, v) = apply_site(s, i, j, x, &ys[j], m + 1)?;
            *x = u;
            ys[j] = v;
        }
    }
    let d = k % n;
    ys.rotate_left(d);
    let mut beta = s.beta.clone();
    beta.rotate_left(d);
    Ok(LatticeState { edge_map: s.edge_map.clone(), x: xs, y: ys, alpha: s.alpha.clone(), beta })
}

/// Coefficients (ascending in `ζ`) of `tr Mₙ` followed by those of `det Mₙ`.
pub fn spectral_invariants(s: &LatticeState) -> Result<Vec<Rational>> {
    let mut out = monodromy_scaled(s)?.trace();
    out.extend(monodromy_det(s)?);
    Ok(out)
}

/// `det Mₙ(ζ)` as the product of the factors' `det(X − ζA)`.
pub fn monodromy_det(s: &LatticeState) -> Result<Vec<Rational>> {
    let mut acc = vec![Rational::one()];
    for i in 0..s.n() {
        for f in [s.lax_x(i)?, s.lax_y(i)?] {
            let cp = f.char_poly();
            acc = poly_mul(&acc, &[cp.f0, -cp.f1, cp.f2]);
        }
    }
    Ok(acc)
}

fn poly_mul(p: &[Rational], q: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            out[i + j] = out[i + j].clone() + &(a.clone() * b);
        }
    }
    out
}

/// `Mₙ(Tₙ(s))·M(y′₁;β₁) = M(y′₁;β₁)·Mₙ(s)`.
pub fn conjugation_holds(s: &LatticeState, next: &LatticeState, pivot: &LeafPoint<Rational>) -> Result<bool> {
    conjugation_holds_with(s, &monodromy_scaled(s)?, &monodromy_scaled(next)?, pivot)
}

fn conjugation_holds_with(
    s: &LatticeState,
    m_current: &ScaledMatPoly,
    m_next: &ScaledMatPoly,
    pivot: &LeafPoint<Rational>,
) -> Result<bool> {
    let m_pivot = family_lax(s.families().1, pivot, &s.beta[0])?;
    let lhs = m_next.mul_binomial(&m_pivot);
    let rhs = ScaledMatPoly::from_binomial(&m_pivot).mul(m_current);
    Ok(lhs.same_as(&rhs))
}

#[derive(Clone, Copy, Debug, Default)]
pub struct EvolveOptions {
    /// Abort once any coordinate exceeds this many bits.
    pub bit_limit: Option<u64>,
    /// Check the conjugation identity at every step.
    pub check_conjugation: bool,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub states: Vec<LatticeState>,
    pub invariant_log: Vec<Vec<Rational>>,
    pub max_bits: Vec<u64>,
    /// Steps (1-based) at which the conjugation identity failed.
    pub conjugation_failures: Vec<usize>,
}

impl Trajectory {
    pub fn invariants_constant(&self) -> bool {
        self.invariant_log.windows(2).all(|w| w[0] == w[1])
    }

    pub fn peak_bits(&self) -> u64 {
        self.max_bits.iter().copied().max().unwrap_or(0)
    }
}

/// Iterates the transfer map, logging invariants and coefficient size.
pub fn evolve(s: &LatticeState, steps: usize, opts: EvolveOptions) -> Result<Trajectory> {
    let mut m_current = monodromy_scaled(s)?;
    let mut traj = Trajectory {
        states: vec![s.clone()],
        invariant_log: vec![spectral_invariants(s)?],
        max_bits: vec![s.max_bits()],
        conjugation_failures: Vec::new(),
    };
    for step in 1..=steps {
        let current = traj.states.last().expect("nonempty");
        let wrap = |e: Error| Error::Step { step, source: Box::new(e) };
        let (next, pivot) = transfer_with_pivot(current).map_err(wrap)?;
        let bits = next.max_bits();
        if let Some(limit) = opts.bit_limit {
            if bits > limit {
                return Err(Error::BitLimit { step, bits, limit });
            }
        }
        let m_next = monodromy_scaled(&next).map_err(wrap)?;
        if opts.check_conjugation && !conjugation_holds_with(current, &m_current, &m_next, &pivot).map_err(wrap)? {
            traj.conjugation_failures.push(step);
        }
        let previous = traj.invariant_log.last().expect("nonempty");
        let det = monodromy_det(&next).map_err(wrap)?;
        let split = previous.len() - det.len();
        let invariants = if det == previous[split..] && m_next.trace_equals(&previous[..split]) {
            previous.clone()
        } else {
            let mut fresh = m_next.trace();
            fresh.extend(det);
            fresh
        };
        traj.invariant_log.push(invariants);
        traj.max_bits.push(bits);
        traj.states.push(next);
        m_current = m_next;
    }
    Ok(traj)
}

/// Random on-leaf state with numerators and denominators bounded by `height`.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, map: EdgeMap, n: usize, height: i64) -> Result<LatticeState> {
    let points = |rng: &mut R| (0..n).map(|_| random_leaf_point_bounded(rng, height)).collect::<Vec<_>>();
    let params = |rng: &mut R| (0..n).map(|_| random_rational_bounded(rng, height)).collect::<Vec<_>>();
    let (x, y) = (points(rng), points(rng));
    let (alpha, beta) = (params(rng), params(rng));
    LatticeState::new(map, x, y, alpha, beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matpoly::Mat2;
    use crate::poisson::Integral;
    use crate::sample::{random_invertible, random_leaf_point, random_rational};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    fn pt(a: i64, b: i64) -> LeafPoint<Rational> {
        LeafPoint::new(q(a), q(b))
    }

    fn ones_s() -> LatticeState {
        LatticeState::new(EdgeMap::S, vec![pt(1, 1)], vec![pt(1, 1)], vec![q(0)], vec![q(0)]).unwrap()
    }

    fn random_state(rng: &mut ChaCha8Rng, map: EdgeMap, n: usize) -> LatticeState {
        loop {
            let s = LatticeState::new(
                map.clone(),
                (0..n).map(|_| random_leaf_point(rng)).collect(),
                (0..n).map(|_| random_leaf_point(rng)).collect(),
                (0..n).map(|_| random_rational(rng)).collect(),
                (0..n).map(|_| random_rational(rng)).collect(),
            )
            .unwrap();
            // keep states whose first few steps are defined
            if evolve(&s, 3, EvolveOptions::default()).is_ok() {
                return s;
            }
        }
    }

    #[test]
    fn single_site_worked_example() {
        let next = transfer(&ones_s()).unwrap();
        assert_eq!((next.x[0].clone(), next.y[0].clone()), (pt(0, 1), pt(2, 1)));
    }

    #[test]
    fn monodromy_shapes() {
        let s = ones_s();
        let m = monodromy(&s).unwrap();
        assert_eq!(m, s.lax_y(0).unwrap().to_poly().mul_binomial(&s.lax_x(0).unwrap()));
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let s = random_state(&mut rng, EdgeMap::S, 2);
        let expected = s
            .lax_y(1)
            .unwrap()
            .to_poly()
            .mul_binomial(&s.lax_x(1).unwrap())
            .mul_binomial(&s.lax_y(0).unwrap())
            .mul_binomial(&s.lax_x(0).unwrap());
        assert_eq!(monodromy(&s).unwrap(), expected);
        assert_eq!(monodromy(&s).unwrap().degree(), 4);
    }

    #[test]
    fn det_by_multiplicativity_matches_direct() {
        let mut rng = ChaCha8Rng::seed_from_u64(49);
        for map in [EdgeMap::S, EdgeMap::R, EdgeMap::T] {
            for n in 1..=3 {
                let s = random_state(&mut rng, map.clone(), n);
                let direct = monodromy(&s).unwrap().det();
                let scaled = monodromy_scaled(&s).unwrap().det();
                let product = monodromy_det(&s).unwrap();
                assert_eq!(direct, scaled);
                let padded: Vec<_> = (0..direct.len().max(product.len()))
                    .map(|k| (direct.get(k).cloned().unwrap_or_else(Rational::zero), product.get(k).cloned().unwrap_or_else(Rational::zero)))
                    .collect();
                assert!(padded.iter().all(|(a, b)| a == b), "{map} n={n}");
            }
        }
    }

    #[test]
    fn two_site_ordering() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let s = random_state(&mut rng, EdgeMap::S, 2);
        let next = transfer(&s).unwrap();
        let (x1, y1) = map_at(&s, 0);
        let (x2, y2) = map_at(&s, 1);
        assert_eq!(next.x, vec![x1, x2]);
        assert_eq!(next.y, vec![y2, y1]);
        assert_eq!(next.beta, vec![s.beta[1].clone(), s.beta[0].clone()]);
    }

    fn map_at(s: &LatticeState, i: usize) -> (LeafPoint<Rational>, LeafPoint<Rational>) {
        s.edge_map.apply(&s.alpha[i], &s.beta[i], &s.x[i], &s.y[i]).unwrap()
    }

    #[test]
    fn single_site_invariants_encode_integrals() {
        let s = ones_s();
        let inv = spectral_invariants(&s).unwrap();
        assert_eq!(inv[..3], [q(2), q(-3), q(1)]);
        assert_eq!(inv, spectral_invariants(&transfer(&s).unwrap()).unwrap());
        // tr M₁ = ζ² − (J^s₂ + c₁)ζ + (J^s₁ + c₀) with c depending on α, β only
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let (a, b) = (random_rational(&mut rng), random_rational(&mut rng));
        let mut offsets = Vec::new();
        for _ in 0..5 {
            let (x, y) = (random_leaf_point(&mut rng), random_leaf_point(&mut rng));
            let s = LatticeState::new(EdgeMap::S, vec![x.clone()], vec![y.clone()], vec![a.clone()], vec![b.clone()]).unwrap();
            let tr = monodromy(&s).unwrap().trace();
            let xi = [x.x1, x.x2, y.x1, y.x2];
            let j1 = Integral::S1.eval(&a, &b, &xi).unwrap();
            let j2 = Integral::S2.eval(&a, &b, &xi).unwrap();
            offsets.push((tr[0].clone() - &j1, tr[1].clone() + &j2));
        }
        assert!(offsets.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn invariants_conserved_for_every_map() {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        for map in [EdgeMap::S, EdgeMap::R, EdgeMap::Rbar, EdgeMap::T] {
            for n in 1..=3 {
                let s = random_state(&mut rng, map.clone(), n);
                let opts = EvolveOptions { check_conjugation: true, ..Default::default() };
                let Ok(traj) = evolve(&s, 10, opts) else { continue };
                assert!(traj.invariants_constant(), "{map} n={n}");
                assert!(traj.conjugation_failures.is_empty());
                assert!(traj.states.iter().all(LatticeState::on_leaves));
            }
        }
    }

    #[test]
    fn perturbed_map_breaks_conservation() {
        let s = LatticeState { edge_map: EdgeMap::Perturbed(Box::new(EdgeMap::S)), ..ones_s() };
        let traj = evolve(&s, 1, EvolveOptions { check_conjugation: true, ..Default::default() }).unwrap();
        assert!(!traj.invariants_constant());
        assert_eq!(traj.conjugation_failures, vec![1]);
    }

    #[test]
    fn k_transfer_definitions() {
        let mut rng = ChaCha8Rng::seed_from_u64(45);
        for n in 1..=4 {
            let s = random_state(&mut rng, EdgeMap::S, n);
            assert_eq!(k_transfer(&s, 1).unwrap(), transfer(&s).unwrap());
            let mut iterate = s.clone();
            for k in 1..=n + 1 {
                let Ok(next) = transfer(&iterate) else { break };
                iterate = next;
                let Ok(tk) = k_transfer(&s, k) else { break };
                assert_eq!(tk, iterate, "n={n}, k={k}");
                assert_eq!(spectral_invariants(&tk).unwrap(), spectral_invariants(&s).unwrap());
            }
        }
        assert!(k_transfer(&ones_s(), 0).is_err());
    }

    #[test]
    fn k_equals_n_keeps_natural_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(46);
        let s = random_state(&mut rng, EdgeMap::S, 3);
        let Ok(t) = k_transfer(&s, 3) else { return };
        assert_eq!(t.beta, s.beta);
    }

    #[test]
    fn invariants_are_similarity_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        let s = random_state(&mut rng, EdgeMap::S, 2);
        let m = monodromy(&s).unwrap();
        let c = random_invertible(&mut rng);
        let conj = m.left_mul(&c).right_mul(&c.inverse().unwrap());
        assert_eq!(conj.trace(), m.trace());
        assert_eq!(conj.det(), m.det());
        assert_ne!(conj, m.left_mul(&Mat2::identity()).right_mul(&c));
    }

    #[test]
    fn evolve_edges() {
        let s = ones_s();
        let traj = evolve(&s, 0, EvolveOptions::default()).unwrap();
        assert_eq!(traj.states, vec![s.clone()]);
        let mut rng = ChaCha8Rng::seed_from_u64(48);
        let s = random_state(&mut rng, EdgeMap::S, 3);
        let err = evolve(&s, 50, EvolveOptions { bit_limit: Some(8), ..Default::default() }).unwrap_err();
        assert!(matches!(err, Error::BitLimit { limit: 8, .. }));
    }

    #[test]
    fn domain_errors_carry_site_and_step() {
        // x₂ = 0 at the image site makes the second step undefined
        let s = LatticeState::new(EdgeMap::S, vec![pt(1, 1)], vec![pt(0, 0)], vec![q(0)], vec![q(0)]);
        let s = s.unwrap();
        match evolve(&s, 5, EvolveOptions::default()) {
            Ok(traj) => assert!(traj.invariants_constant()),
            Err(Error::Step { step, source }) => {
                assert!(step >= 1);
                assert!(matches!(*source, Error::Site { site: 1, level: 1, .. }));
            }
            Err(e) => panic!("{e}"),
        }
        let bad = LatticeState::new(EdgeMap::S, vec![pt(1, 0)], vec![pt(1, 1)], vec![q(0)], vec![q(0)]);
        assert!(matches!(bad, Err(Error::Config(_))));
    }

    #[test]
    fn config_roundtrip() {
        let json = r#"{"n": 2, "edge_map": "S", "x": [["1","1"],["1/2","-3"]], "y": [["1","1"],["0","2"]], "alpha": ["0"], "beta": ["1/3", "2"]}"#;
        let c = LatticeConfig::from_json(json).unwrap();
        let s = LatticeState::try_from(c).unwrap();
        assert_eq!(s.alpha, vec![q(0), q(0)]);
        assert_eq!(s.x[1], LeafPoint::new(Rational::new(1, 2).unwrap(), q(-3)));
        let back = LatticeConfig::from(&s);
        assert_eq!(LatticeState::try_from(LatticeConfig::from_json(&back.to_json()).unwrap()).unwrap(), s);

        let bad = r#"{"n": 2, "edge_map": "S", "x": [["1","1"]], "y": [["1","1"],["0","2"]], "alpha": ["0"], "beta": ["0"]}"#;
        assert!(matches!(LatticeState::try_from(LatticeConfig::from_json(bad).unwrap()), Err(Error::Config(_))));
        assert!(LatticeConfig::from_json(r#"{"n": 1}"#).is_err());
        assert!(LatticeConfig::from_json(&json.replace("\"S\"", "\"Q\"")).is_err());
    }
}
