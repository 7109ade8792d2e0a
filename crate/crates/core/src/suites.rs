//! Seeded randomized suites over the exact checks, with JSON-ready reports.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{evolve, random_state, EvolveOptions, LatticeConfig};
use crate::leaves::{EdgeMap, LaxFamily};
use crate::matpoly::Mat2;
use crate::numerics::{Rational, Scalar};
use crate::poisson::{
    casimirs_annihilate, check_symplectic, integrals_invariant, integrals_involution, reduced_bracket,
    sklyanin_entry_brackets, LeafPair, Point4,
};
use crate::refactor::{refactor_pair, verify_refactorization, RefactorInput};
use crate::sample::{random_commuting_pair, random_leaf_point, random_mat, random_rational};
use crate::verify::{check_cube_products, check_entwining, check_lax_pair, check_triple_uniqueness, check_yb, random_triple};

/// Undefined samples tolerated per requested sample before a suite gives up.
const RESAMPLE_FACTOR: usize = 100;
/// Lattice suite: transfer steps per state and sampling height.
const LATTICE_STEPS: usize = 10;
const LATTICE_HEIGHT: i64 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Refactor,
    Maps,
    Entwine,
    Yb,
    Poisson,
    Lattice,
}

impl Suite {
    pub const ALL: [Suite; 6] = [Suite::Refactor, Suite::Maps, Suite::Entwine, Suite::Yb, Suite::Poisson, Suite::Lattice];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Refactor => "refactor",
            Suite::Maps => "maps",
            Suite::Entwine => "entwine",
            Suite::Yb => "yb",
            Suite::Poisson => "poisson",
            Suite::Lattice => "lattice",
        }
    }

    /// The identity the suite certifies.
    pub fn tag(self) -> &'static str {
        match self {
            Suite::Refactor => "refactorization (U - ζA)(V - ζB) = (Y - ζB)(X - ζA) with preserved spectra",
            Suite::Maps => "Lax pair L(u)M(v) = M(y)L(x) for R, Rbar, S, T; R involutive",
            Suite::Entwine => "entwining Yang-Baxter T23 R13 S12 = S12 R13 T23 for (S,R,T) and (S,S,Rbar)",
            Suite::Yb => "Yang-Baxter S23 S13 S12 = S12 S13 S23 for R and Rbar; Lax triple uniqueness",
            Suite::Poisson => "Sklyanin Casimirs, Poisson maps S, Rbar, T and involutive integrals",
            Suite::Lattice => "periodic lattice: monodromy trace and det conserved, conjugation per step",
        }
    }

    /// Parses a selector; `all` expands to every suite.
    pub fn parse_selector(s: &str) -> Result<Vec<Suite>> {
        if s == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        Ok(vec![s.parse()?])
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}; expected refactor, maps, entwine, yb, poisson, lattice or all")))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteOptions {
    pub samples: usize,
    pub seed: u64,
    /// Harness self-test: swap `S` for a perturbed copy and corrupt `U`.
    pub corrupt: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub tag: String,
    pub samples: usize,
    pub passed: usize,
    pub failed: usize,
    pub resampled: usize,
    pub seed: u64,
    /// First failing point, verbatim.
    pub counterexample: Option<String>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failed == 0 && self.passed == self.samples
    }
}

/// Outcome of one defined sample: pass flag and the point it was checked at.
type Sample = (bool, String);

struct Runner {
    rng: ChaCha8Rng,
    report: SuiteReport,
    budget: usize,
}

impl Runner {
    fn new(suite: Suite, opts: &SuiteOptions) -> Self {
        Runner {
            rng: ChaCha8Rng::seed_from_u64(opts.seed),
            report: SuiteReport {
                suite: suite.name().into(),
                tag: suite.tag().into(),
                samples: 0,
                passed: 0,
                failed: 0,
                resampled: 0,
                seed: opts.seed,
                counterexample: None,
            },
            budget: RESAMPLE_FACTOR * opts.samples.max(1),
        }
    }

    /// Draws until `samples` points are defined; undefined points are resampled.
    fn check<F>(&mut self, label: &str, samples: usize, mut f: F)
    where
        F: FnMut(&mut ChaCha8Rng) -> Result<Sample>,
    {
        let mut done = 0;
        while done < samples {
            match f(&mut self.rng) {
                Ok((ok, point)) => {
                    done += 1;
                    self.report.samples += 1;
                    if ok {
                        self.report.passed += 1;
                    } else {
                        self.fail(format!("{label}: {point}"));
                    }
                }
                Err(_) if self.report.resampled < self.budget => self.report.resampled += 1,
                Err(e) => {
                    self.report.samples += samples - done;
                    self.report.failed += samples - done;
                    self.report.counterexample.get_or_insert(format!("{label}: resample budget exhausted, last error: {e}"));
                    return;
                }
            }
        }
    }

    fn fail(&mut self, point: String) {
        self.report.failed += 1;
        self.report.counterexample.get_or_insert(point);
    }
}

fn point4(rng: &mut ChaCha8Rng) -> Point4 {
    let (x, y) = (random_leaf_point(rng), random_leaf_point(rng));
    [x.x1, x.x2, y.x1, y.x2]
}

fn show4(alpha: &Rational, beta: &Rational, xi: &Point4) -> String {
    format!("α={alpha}, β={beta}, x=({}, {}), y=({}, {})", xi[0], xi[1], xi[2], xi[3])
}

pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Result<SuiteReport> {
    if opts.samples == 0 {
        return Err(Error::Config("samples must be positive".into()));
    }
    let n = opts.samples;
    let s_map = if opts.corrupt { EdgeMap::Perturbed(Box::new(EdgeMap::S)) } else { EdgeMap::S };
    let mut run = Runner::new(suite, opts);
    match suite {
        Suite::Refactor => run.check("refactorization", n, |rng| {
            let (a, b) = random_commuting_pair(rng);
            let input = RefactorInput::new(random_mat(rng), random_mat(rng), a, b)?;
            let (mut u, v) = refactor_pair(&input)?;
            if opts.corrupt {
                u = u + Mat2::identity();
            }
            let RefactorInput { x, y, a, b } = &input;
            Ok((verify_refactorization(&u, &v, x, y, a, b), format!("X={x:?}, Y={y:?}, A={a:?}, B={b:?}")))
        }),
        Suite::Maps => {
            for map in [EdgeMap::R, EdgeMap::Rbar, s_map.clone(), EdgeMap::T] {
                let (l, m) = map.families();
                run.check(&format!("Lax pair {map}"), n, |rng| {
                    let (alpha, beta) = (random_rational(rng), random_rational(rng));
                    let (x, y) = (random_leaf_point(rng), random_leaf_point(rng));
                    let ok = check_lax_pair(l, m, &map, &alpha, &beta, &x, &y)?;
                    Ok((ok, format!("α={alpha}, β={beta}, x={x:?}, y={y:?}")))
                });
            }
            run.check("R involution", n, |rng| {
                let (alpha, beta) = (random_rational(rng), random_rational(rng));
                let (x, y) = (random_leaf_point(rng), random_leaf_point(rng));
                let (u, v) = EdgeMap::R.apply(&alpha, &beta, &x, &y)?;
                let back = EdgeMap::R.apply(&alpha, &beta, &u, &v)?;
                Ok((back == (x.clone(), y.clone()), format!("α={alpha}, β={beta}, x={x:?}, y={y:?}")))
            });
        }
        Suite::Entwine => {
            let cases = [
                ([s_map.clone(), EdgeMap::R, EdgeMap::T], [LaxFamily::L1, LaxFamily::L2, LaxFamily::L1]),
                ([s_map.clone(), s_map.clone(), EdgeMap::Rbar], [LaxFamily::L1, LaxFamily::L2, LaxFamily::L2]),
            ];
            for ([s, r, t], fams) in cases {
                run.check(&format!("entwining ({s}, {r}, {t})"), n, |rng| {
                    let tp = random_triple(rng);
                    let ok = check_entwining(&s, &r, &t, &tp)? && check_cube_products(fams, &s, &r, &t, &tp)?;
                    Ok((ok, tp.to_string()))
                });
            }
        }
        Suite::Yb => {
            for map in [EdgeMap::R, EdgeMap::Rbar] {
                run.check(&format!("Yang-Baxter {map}"), n, |rng| {
                    let tp = random_triple(rng);
                    Ok((check_yb(&map, &tp)?, tp.to_string()))
                });
            }
            run.check("triple uniqueness (L1, L1, L1)", n, |rng| {
                let tp = random_triple(rng);
                Ok((check_triple_uniqueness([LaxFamily::L1; 3], &tp)?, tp.to_string()))
            });
        }
        Suite::Poisson => {
            for family in [LaxFamily::L1, LaxFamily::L2] {
                let a = family.structure::<Rational>()?;
                let table = sklyanin_entry_brackets(&a);
                run.check(&format!("Casimirs for A of {family}"), n, |rng| {
                    let x = random_mat(rng);
                    Ok((casimirs_annihilate(&table, &x)?, format!("X={x:?}")))
                });
            }
            for tag in [LeafPair::S, LeafPair::Rbar, LeafPair::T] {
                let map = if tag == LeafPair::S { s_map.clone() } else { tag_map(tag) };
                let rb = reduced_bracket(tag);
                run.check(&format!("Poisson map {map}"), n, |rng| {
                    let (alpha, beta) = (random_rational(rng), random_rational(rng));
                    let xi = point4(rng);
                    Ok((check_symplectic(&map, &rb, &alpha, &beta, &xi)?, show4(&alpha, &beta, &xi)))
                });
                run.check(&format!("integrals of {tag}"), n, |rng| {
                    let (alpha, beta) = (random_rational(rng), random_rational(rng));
                    let xi = point4(rng);
                    let ok = integrals_invariant(tag, &alpha, &beta, &xi)?
                        && integrals_involution(tag, &alpha, &beta, &xi)?.is_zero();
                    Ok((ok, show4(&alpha, &beta, &xi)))
                });
            }
        }
        Suite::Lattice => {
            let mut k = 0;
            run.check("lattice conservation", n, |rng| {
                let sites = 1 + k % 3;
                k += 1;
                let map = [s_map.clone(), EdgeMap::R, EdgeMap::Rbar, EdgeMap::T][rng.gen_range(0..4)].clone();
                let state = random_state(rng, map, sites, LATTICE_HEIGHT)?;
                let traj = evolve(&state, LATTICE_STEPS, EvolveOptions { bit_limit: None, check_conjugation: true })?;
                let ok = traj.invariants_constant() && traj.conjugation_failures.is_empty();
                Ok((ok, LatticeConfig::from(&state).to_json()))
            });
        }
    }
    Ok(run.report)
}

fn tag_map(tag: LeafPair) -> EdgeMap {
    match tag {
        LeafPair::S => EdgeMap::S,
        LeafPair::R => EdgeMap::R,
        LeafPair::Rbar => EdgeMap::Rbar,
        LeafPair::T => EdgeMap::T,
    }
}

/// Runs each selected suite with the same options.
pub fn run_suites(suites: &[Suite], opts: &SuiteOptions) -> Result<Vec<SuiteReport>> {
    suites.iter().map(|s| run_suite(*s, opts)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(samples: usize, corrupt: bool) -> SuiteOptions {
        SuiteOptions { samples, seed: 7, corrupt }
    }

    #[test]
    fn selectors() {
        assert_eq!(Suite::parse_selector("all").unwrap().len(), 6);
        assert_eq!(Suite::parse_selector("yb").unwrap(), vec![Suite::Yb]);
        assert!(Suite::parse_selector("nope").is_err());
    }

    #[test]
    fn zero_samples_rejected() {
        assert!(matches!(run_suite(Suite::Entwine, &opts(0, false)), Err(Error::Config(_))));
    }

    #[test]
    fn every_suite_passes_and_is_reproducible() {
        for suite in Suite::ALL {
            let a = run_suite(suite, &opts(5, false)).unwrap();
            assert!(a.ok(), "{a:?}");
            assert_eq!(a, run_suite(suite, &opts(5, false)).unwrap());
        }
    }

    #[test]
    fn corrupted_fixture_is_caught() {
        for suite in [Suite::Refactor, Suite::Maps, Suite::Entwine, Suite::Lattice] {
            let r = run_suite(suite, &opts(5, true)).unwrap();
            assert!(!r.ok(), "{suite}");
            assert!(r.counterexample.is_some());
        }
    }
}
