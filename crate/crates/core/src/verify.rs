//! The verification suite: structural claims checked at finite scale.
//!
//! Each criterion returns a [`CriterionResult`]. Reports carry no timings,
//! so a fixed seed always yields the same text.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::abomination::{
    abomination_truncation, canonical_coloring, index_count, ladder_truncation, triple_table,
};
use crate::algebra::UpsetAlgebra;
use crate::coloring::{
    for_each_weak_coloring, is_coloring, is_n_colorable, random_weak_coloring, Coloring,
    DEFAULT_BUDGET,
};
use crate::error::{Error, Result};
use crate::lemma::{certify, check_schedule, corollary_check, schedule_beta_reductions};
use crate::poset::{posets_up_to_iso, rooted_posets_up_to_iso, Poset};
use crate::probe::{kc_probe, quotient_census_sampled, size_bound, size_bound_by_levels};
use crate::reduction::{all_epartitions, coarsest_color_respecting, Partition};

pub const LEMMA_COLORINGS: usize = 200;
pub const LEMMA_MAX_DEPTH: usize = 5;
pub const CENSUS_SAMPLES: u64 = 400;
pub const CENSUS_MIN_ENTRIES: usize = 50;
pub const ORACLE_INSTANCES: usize = 500;
pub const ORACLE_MAX_SIZE: usize = 8;
pub const ORACLE_SWEEP_SIZE: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    /// A claimed property failed.
    Fail,
    /// A search budget ran out before the check could finish.
    Budget,
    /// Any other error.
    Error,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub outcome: Outcome,
    pub detail: String,
}

impl CriterionResult {
    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }

    pub fn line(&self) -> String {
        let tag = match self.outcome {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::Budget => "BUDGET",
            Outcome::Error => "ERROR",
        };
        format!(
            "criterion {:>2} {:<22} {tag}  {}",
            self.id, self.name, self.detail
        )
    }
}

fn result(id: u32, name: &'static str, r: Result<(bool, String)>) -> CriterionResult {
    let (outcome, detail) = match r {
        Ok((true, d)) => (Outcome::Pass, d),
        Ok((false, d)) => (Outcome::Fail, d),
        Err(Error::Falsified(d)) => (Outcome::Fail, d),
        Err(e @ Error::BudgetExceeded(_)) => (Outcome::Budget, e.to_string()),
        Err(e) => (Outcome::Error, e.to_string()),
    };
    CriterionResult {
        id,
        name,
        outcome,
        detail,
    }
}

/// Independent stream for criterion `id` under `seed`.
fn rng_for(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

pub fn width_criterion() -> CriterionResult {
    let run = || -> Result<(bool, String)> {
        let mut ok = true;
        let mut parts = Vec::new();
        for (n, m) in [(2, 1), (2, 2), (3, 1)] {
            let w = abomination_truncation(n, m)?.poset.max_antichain_size();
            ok &= w == 1 << (n + 2);
            parts.push(format!("(n={n},M={m}):{w}"));
        }
        Ok((ok, parts.join(" ")))
    };
    result(1, "width", run())
}

pub fn colorability_criterion() -> CriterionResult {
    let run = || -> Result<(bool, String)> {
        let mut ok = true;
        let mut parts = Vec::new();
        for m in 0..=2 {
            let t = abomination_truncation(2, m)?;
            let strict = is_coloring(&t.poset, &canonical_coloring(&t)?)?;
            let alpha = (0..t.len())
                .filter(|&x| t.poset.upper_covers(x).len() == 1)
                .count();
            ok &= strict && alpha == 0;
            parts.push(format!("M={m}:strict={strict},alpha={alpha}"));
        }
        Ok((ok, parts.join(" ")))
    };
    result(2, "colorability", run())
}

pub fn lemma_criterion(seed: u64) -> CriterionResult {
    let run = || -> Result<(bool, String)> {
        let mut checked = 0;
        let mut steps = 0;
        for n in 0..=2 {
            let ladders = (0..=LEMMA_MAX_DEPTH)
                .map(|d| ladder_truncation(n, d))
                .collect::<Result<Vec<_>>>()?;
            let mut rng = rng_for(seed, 3 + 16 * n as u64);
            let cases: Vec<(usize, Coloring)> = (0..LEMMA_COLORINGS)
                .map(|i| {
                    let d = i % ladders.len();
                    random_weak_coloring(&ladders[d].poset, n, &mut rng).map(|f| (d, f))
                })
                .collect::<Result<_>>()?;
            let counts = cases
                .par_iter()
                .map(|(d, f)| {
                    let v = &ladders[*d];
                    let s = schedule_beta_reductions(v, f)?;
                    check_schedule(v, f, &s)?;
                    Ok(s.steps.len())
                })
                .collect::<Result<Vec<_>>>()?;
            checked += counts.len();
            steps += counts.iter().sum::<usize>();
        }
        Ok((
            true,
            format!("schedules={checked} steps={steps} violations=0"),
        ))
    };
    result(3, "lemma", run())
}

pub fn corollary_criterion(seed: u64) -> CriterionResult {
    let run = || -> Result<(bool, String)> {
        let z = abomination_truncation(2, 1)?;
        let census_seed = rng_for(seed, 4).gen::<u64>();
        let census = quotient_census_sampled(&z.poset, 2, CENSUS_SAMPLES, census_seed)?;
        let full = z.full_levels(crate::abomination::Kind::C).len();
        let outcomes = census
            .entries
            .par_iter()
            .map(|e| -> Result<bool> {
                if !corollary_check(&z, &e.partition, 2, Some(&e.witness), 0)? {
                    return Ok(false);
                }
                // The constructive route must land inside the same partition.
                let cert = certify(&z, &census.pulled_back(e))?;
                Ok(cert.levels.len() == full && cert.kernel.refines(&e.partition))
            })
            .collect::<Result<Vec<bool>>>()?;
        let violations = outcomes.iter().filter(|&&ok| !ok).count();
        let entries = census.entries.len();
        Ok((
            entries >= CENSUS_MIN_ENTRIES && violations == 0,
            format!(
                "census_seed={census_seed} samples={CENSUS_SAMPLES} entries={entries} classes={} violations={violations}",
                census.classes.len()
            ),
        ))
    };
    result(4, "corollary", run())
}

/// Rooted posets up to six elements, color bits 0..=2.
pub fn coloring_theorem_criterion() -> CriterionResult {
    let run = || -> Result<(bool, String)> {
        let posets: Vec<Poset> = rooted_posets_up_to_iso(6).into_iter().flatten().collect();
        let mismatches = posets
            .par_iter()
            .map(|p| -> Result<usize> {
                let gens = UpsetAlgebra::new(p)?.min_generators(2);
                let mut bad = 0;
                for m in 0..=2 {
                    let colorable = is_n_colorable(p, m, DEFAULT_BUDGET)?.is_some();
                    bad += usize::from(colorable != gens.is_some_and(|g| g <= m));
                }
                Ok(bad)
            })
            .sum::<Result<usize>>()?;
        Ok((
            mismatches == 0,
            format!(
                "posets={} checks={} mismatches={mismatches}",
                posets.len(),
                3 * posets.len()
            ),
        ))
    };
    result(5, "coloring-theorem", run())
}

pub fn kc_criterion() -> CriterionResult {
    let run = || -> Result<(bool, String)> {
        let r = kc_probe(6)?;
        Ok((
            r.maximum == 3,
            format!(
                "rooted_posets={} qualifying={} maximum={}",
                r.rooted_posets,
                r.qualifying.len(),
                r.maximum
            ),
        ))
    };
    result(6, "kc", run())
}

/// The greatest color-respecting E-partition by exhaustive search: the join
/// of all of them, which must itself be one.
pub fn brute_force_coarsest(p: &Poset, f: &Coloring) -> Result<Partition> {
    let respecting: Vec<Partition> = all_epartitions(p)?
        .into_iter()
        .filter(|r| {
            r.blocks()
                .iter()
                .all(|b| b.iter().all(|&x| f.color(x) == f.color(b[0])))
        })
        .collect();
    let join = respecting
        .iter()
        .fold(Partition::identity(p.len()), |acc, r| acc.join(r));
    if !respecting.contains(&join) {
        return Err(Error::Falsified(
            "color-respecting E-partitions have no greatest element".into(),
        ));
    }
    Ok(join)
}

/// A random poset on `n` elements: each pair `i < j` is related with
/// probability `density`.
pub fn random_poset<R: Rng>(n: usize, density: f64, rng: &mut R) -> Poset {
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                pairs.push((i, j));
            }
        }
    }
    Poset::from_covers(n, &pairs).expect("pairs go upward in id order")
}

pub fn oracle_criterion(seed: u64) -> CriterionResult {
    let run = || -> Result<(bool, String)> {
        let mut rng = rng_for(seed, 7);
        let instances: Vec<(Poset, Coloring)> = (0..ORACLE_INSTANCES)
            .map(|_| {
                let n = rng.gen_range(1..=ORACLE_MAX_SIZE);
                let p = random_poset(n, rng.gen_range(0.1..0.6), &mut rng);
                let bits = rng.gen_range(0..=2);
                random_weak_coloring(&p, bits, &mut rng).map(|f| (p, f))
            })
            .collect::<Result<_>>()?;
        let compare = |p: &Poset, f: &Coloring| -> Result<bool> {
            Ok(*coarsest_color_respecting(p, f)? == brute_force_coarsest(p, f)?)
        };
        let sampled = instances
            .par_iter()
            .map(|(p, f)| compare(p, f).map(|ok| usize::from(!ok)))
            .sum::<Result<usize>>()?;

        let sweep: Vec<Poset> = posets_up_to_iso(ORACLE_SWEEP_SIZE)
            .into_iter()
            .flatten()
            .collect();
        let (sweep_cases, sweep_bad) = sweep
            .par_iter()
            .map(|p| -> Result<(usize, usize)> {
                let mut colorings = Vec::new();
                for bits in 0..=2 {
                    for_each_weak_coloring(p, bits, u64::MAX, |f| colorings.push(f.clone()))?;
                }
                let mut bad = 0;
                for f in &colorings {
                    bad += usize::from(!compare(p, f)?);
                }
                Ok((colorings.len(), bad))
            })
            .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))?;
        let mismatches = sampled + sweep_bad;
        Ok((
            mismatches == 0,
            format!(
                "sampled={ORACLE_INSTANCES} sweep_posets={} sweep_colorings={sweep_cases} mismatches={mismatches}",
                sweep.len()
            ),
        ))
    };
    result(7, "oracle", run())
}

pub fn duality_criterion() -> CriterionResult {
    let run = || -> Result<(bool, String)> {
        let posets: Vec<Poset> = posets_up_to_iso(6).into_iter().flatten().collect();
        let (residuation_bad, count_bad) = posets
            .par_iter()
            .map(|p| -> Result<(usize, usize)> {
                let a = UpsetAlgebra::new(p)?;
                let k = a.len();
                let mut bad = 0;
                for x in 0..k {
                    for y in 0..k {
                        for z in 0..k {
                            bad += usize::from(a.leq(a.meet(x, y), z) != a.leq(x, a.implies(y, z)));
                        }
                    }
                }
                let subalgebras = a.subalgebras().len();
                let epartitions = all_epartitions(p)?.len();
                Ok((bad, usize::from(subalgebras != epartitions)))
            })
            .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))?;
        Ok((
            residuation_bad == 0 && count_bad == 0,
            format!(
                "posets={} residuation_violations={residuation_bad} count_mismatches={count_bad}",
                posets.len()
            ),
        ))
    };
    result(8, "duality", run())
}

pub fn bound_criterion() -> CriterionResult {
    let run = || -> Result<(bool, String)> {
        let t = triple_table(2)?.t() as u64;
        let formula = size_bound(2, 0, t)?;
        let levels = size_bound_by_levels(2, 0, t)?;
        Ok((
            t == 335 && formula == 11493 && levels == 11493,
            format!(
                "t={t} formula={formula} by_levels={levels} indices={}",
                index_count(2)
            ),
        ))
    };
    result(9, "bound", run())
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub seed: u64,
    pub results: Vec<CriterionResult>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(CriterionResult::passed)
    }

    pub fn render(&self) -> String {
        let mut out = format!("suite {} seed {}\n", self.suite, self.seed);
        for r in &self.results {
            out.push_str(&r.line());
            out.push('\n');
        }
        let passed = self.results.iter().filter(|r| r.passed()).count();
        out.push_str(&format!("{passed}/{} passed\n", self.results.len()));
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

/// Criteria 1 to 9 in order.
pub fn run_paper_suite(seed: u64) -> SuiteReport {
    let results = vec![
        width_criterion(),
        colorability_criterion(),
        lemma_criterion(seed),
        corollary_criterion(seed),
        coloring_theorem_criterion(),
        kc_criterion(),
        oracle_criterion(seed),
        duality_criterion(),
        bound_criterion(),
    ];
    SuiteReport {
        suite: "paper",
        seed,
        results,
    }
}
