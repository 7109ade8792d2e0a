//! Brute-force float solver for the refactorization constraints.
//!
//! Unknowns are the four entries of `U`; `V = A⁻¹(YA + BX − UB)` is eliminated
//! and the residual stacks `UV − YX` (four equations) with
//! `f₀(U; A) − f₀(X; A)` and `f₁(U; A) − f₁(X; A)`. Roots are found by
//! Levenberg–Marquardt from many random starts and deduplicated. Nothing here
//! shares code with the closed form in the parent module.

use nalgebra::{Matrix2, Matrix4, SMatrix, Vector4, Vector6};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::RefactorInput;
use crate::error::{Error, Result};
use crate::matpoly::Mat2;
use crate::numerics::Rational;

#[derive(Clone, Copy, Debug)]
pub struct OracleConfig {
    pub starts: usize,
    pub seed: u64,
    pub max_iters: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { starts: 64, seed: 0, max_iters: 200 }
    }
}

/// Row-major `(U, V)`.
pub type RootPair = ([[f64; 2]; 2], [[f64; 2]; 2]);

#[derive(Clone, Debug)]
pub struct OracleReport {
    /// Distinct `(U, V)` roots, row-major.
    pub roots: Vec<RootPair>,
    pub starts: usize,
    pub converged_starts: usize,
    pub seed: u64,
}

struct System {
    x: Matrix2<f64>,
    y: Matrix2<f64>,
    a: Matrix2<f64>,
    b: Matrix2<f64>,
    a_inv: Matrix2<f64>,
    yx: Matrix2<f64>,
    f0: f64,
    f1: f64,
    scale: f64,
}

fn to_na(m: &Mat2<Rational>) -> Matrix2<f64> {
    Matrix2::new(m.m[0][0].to_f64(), m.m[0][1].to_f64(), m.m[1][0].to_f64(), m.m[1][1].to_f64())
}

fn f1(x: &Matrix2<f64>, a: &Matrix2<f64>) -> f64 {
    a[(1, 1)] * x[(0, 0)] - a[(1, 0)] * x[(0, 1)] - a[(0, 1)] * x[(1, 0)] + a[(0, 0)] * x[(1, 1)]
}

fn unpack(u: &Vector4<f64>) -> Matrix2<f64> {
    Matrix2::new(u[0], u[1], u[2], u[3])
}

impl System {
    fn new(input: &RefactorInput<Rational>) -> Option<Self> {
        let (x, y, a, b) = (to_na(&input.x), to_na(&input.y), to_na(&input.a), to_na(&input.b));
        let a_inv = a.try_inverse()?;
        let scale = [x, y, a, b].iter().map(|m| m.amax()).fold(1.0, f64::max);
        Some(System { yx: y * x, f0: x.determinant(), f1: f1(&x, &a), x, y, a, b, a_inv, scale })
    }

    fn v_of(&self, u: &Matrix2<f64>) -> Matrix2<f64> {
        self.a_inv * (self.y * self.a + self.b * self.x - u * self.b)
    }

    fn residual(&self, uv: &Vector4<f64>) -> Vector6<f64> {
        let u = unpack(uv);
        let p = u * self.v_of(&u) - self.yx;
        Vector6::new(
            p[(0, 0)],
            p[(0, 1)],
            p[(1, 0)],
            p[(1, 1)],
            u.determinant() - self.f0,
            f1(&u, &self.a) - self.f1,
        )
    }

    fn jacobian(&self, uv: &Vector4<f64>) -> SMatrix<f64, 6, 4> {
        let mut j = SMatrix::<f64, 6, 4>::zeros();
        for k in 0..4 {
            let h = 1e-6 * uv[k].abs().max(1.0);
            let mut plus = *uv;
            let mut minus = *uv;
            plus[k] += h;
            minus[k] -= h;
            let col = (self.residual(&plus) - self.residual(&minus)) / (2.0 * h);
            j.set_column(k, &col);
        }
        j
    }

    /// Levenberg–Marquardt followed by a few undamped Gauss–Newton polish steps.
    fn solve_from(&self, start: Vector4<f64>, max_iters: usize) -> Option<Vector4<f64>> {
        let mut u = start;
        let mut r = self.residual(&u);
        let mut cost = r.norm_squared();
        let mut lambda = 1e-3;
        for _ in 0..max_iters {
            let j = self.jacobian(&u);
            let jt = j.transpose();
            let jtj: Matrix4<f64> = jt * j;
            let g = jt * r;
            let mut damped = jtj;
            for d in 0..4 {
                damped[(d, d)] += lambda * jtj[(d, d)].max(1e-12);
            }
            let Some(step) = damped.lu().solve(&(-g)) else {
                lambda *= 10.0;
                continue;
            };
            let cand = u + step;
            let rc = self.residual(&cand);
            let cc = rc.norm_squared();
            if cc < cost {
                u = cand;
                r = rc;
                cost = cc;
                lambda = (lambda * 0.3).max(1e-15);
                if step.norm() <= 1e-15 * (1.0 + u.norm()) {
                    break;
                }
            } else {
                lambda *= 10.0;
                if lambda > 1e16 {
                    break;
                }
            }
            if !u.iter().all(|v| v.is_finite()) {
                return None;
            }
        }
        for _ in 0..5 {
            let j = self.jacobian(&u);
            let jt = j.transpose();
            if let Some(step) = (jt * j).lu().solve(&(-(jt * self.residual(&u)))) {
                let cand = u + step;
                if self.residual(&cand).norm() <= self.residual(&u).norm() {
                    u = cand;
                }
            }
        }
        // absolute at problem scale: far-field LM stalls leave residuals that are
        // small only relative to |U|²
        let tol = 1e-9 * self.scale.powi(2);
        (self.residual(&u).amax() <= tol).then_some(u)
    }
}

/// Multi-start root search. Fails with [`Error::OracleInconclusive`] when no
/// start converges.
pub fn refactor_oracle(input: &RefactorInput<Rational>, cfg: OracleConfig) -> Result<OracleReport> {
    let starts = cfg.starts.max(64);
    let sys = System::new(input).ok_or(Error::SingularMatrix)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut roots: Vec<Vector4<f64>> = Vec::new();
    let mut converged = 0;
    for _ in 0..starts {
        // log-uniform radius so both small and large roots get nearby starts
        let radius = sys.scale * 10f64.powf(rng.gen_range(-1.0..2.0));
        let start = Vector4::from_fn(|_, _| rng.gen_range(-radius..radius));
        let Some(root) = sys.solve_from(start, cfg.max_iters) else { continue };
        converged += 1;
        let dup = roots.iter().any(|r| (r - root).amax() <= 1e-6 * (1.0 + r.amax()));
        if !dup {
            roots.push(root);
        }
    }
    if roots.is_empty() {
        return Err(Error::OracleInconclusive { starts, seed: cfg.seed });
    }
    let roots = roots
        .into_iter()
        .map(|r| {
            let u = unpack(&r);
            let v = sys.v_of(&u);
            let rows = |m: Matrix2<f64>| [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]];
            (rows(u), rows(v))
        })
        .collect();
    Ok(OracleReport { roots, starts, converged_starts: converged, seed: cfg.seed })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(v: [[i64; 2]; 2]) -> Mat2<Rational> {
        Mat2::from_i64(v)
    }

    #[test]
    fn worked_example_root() {
        let input = RefactorInput::new(
            m([[1, 0], [0, 2]]),
            m([[0, 1], [1, 0]]),
            Mat2::identity(),
            Mat2::identity(),
        )
        .unwrap();
        let report = refactor_oracle(&input, OracleConfig { seed: 9, ..Default::default() }).unwrap();
        assert_eq!(report.roots.len(), 1, "{report:?}");
        let (u, _) = report.roots[0];
        let expected = [[0.0, -2.0], [1.0, 3.0]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((u[i][j] - expected[i][j]).abs() < 1e-9, "{u:?}");
            }
        }
    }

    #[test]
    fn equal_inputs_root_at_x() {
        let x = m([[2, 3], [-1, 5]]);
        let a = m([[1, 1], [0, 2]]);
        let input = RefactorInput::new(x.clone(), x.clone(), a.clone(), a).unwrap();
        let report = refactor_oracle(&input, OracleConfig::default()).unwrap();
        assert_eq!(report.roots.len(), 1, "{report:?}");
        let (u, _) = report.roots[0];
        for i in 0..2 {
            for j in 0..2 {
                assert!((u[i][j] - x.m[i][j].to_f64()).abs() < 1e-9);
            }
        }
    }
}
