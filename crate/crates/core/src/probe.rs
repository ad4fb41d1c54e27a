//! Bounded experiments on colorable quotients and the bounds that govern
//! their size.
//!
//! Every report records whether its search was complete. A census entry is
//! the coarsest color-respecting E-partition of some weak coloring; the
//! coloring induced on its quotient is then strict, which is the witness.

use std::collections::{BTreeMap, BTreeSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::abomination::{
    abomination_truncation, canonical_coloring, level_members, level_size, MAX_N,
};
use crate::algebra::{Equation, UpsetAlgebra};
use crate::coloring::{
    for_each_weak_coloring, is_coloring, is_n_colorable, random_weak_coloring, Coloring,
};
use crate::error::{Error, Result};
use crate::poset::{rooted_posets_up_to_iso, CanonicalForm, Poset};
use crate::reduction::{coarsest_reduction, EPartition, Partition};

/// Largest poset whose weak colorings are enumerated exhaustively.
pub const EXHAUSTIVE_MAX: usize = 12;
/// Colorings drawn when a census has to sample.
pub const DEFAULT_SAMPLES: u64 = 2_000;
pub const DEFAULT_SEED: u64 = 0;
const CHUNK: usize = 4096;

#[derive(Clone, Debug)]
pub struct CensusEntry {
    pub partition: EPartition,
    pub quotient: Poset,
    /// Source id to quotient id.
    pub projection: Vec<usize>,
    /// An n-coloring of the quotient.
    pub witness: Coloring,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum CensusMode {
    Exhaustive { budget: u64 },
    Sampled { samples: u64, seed: u64 },
}

#[derive(Clone, Debug)]
pub struct QuotientCensus {
    pub source: Poset,
    pub n: usize,
    pub mode: CensusMode,
    /// Distinct partitions, ordered.
    pub entries: Vec<CensusEntry>,
    /// Canonical forms of the quotients, one per isomorphism class.
    pub classes: BTreeSet<CanonicalForm>,
    pub colorings_examined: u64,
    /// The coloring budget ran out before enumeration finished.
    pub partial: bool,
}

impl QuotientCensus {
    /// The weak coloring of the source induced by an entry's witness.
    pub fn pulled_back(&self, e: &CensusEntry) -> Coloring {
        e.witness.restrict(&e.projection)
    }

    pub fn max_quotient_size(&self) -> usize {
        self.entries
            .iter()
            .map(|e| e.quotient.len())
            .max()
            .unwrap_or(0)
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Entry<'a> {
            blocks: &'a [Vec<usize>],
            size: usize,
            witness: Vec<String>,
        }
        #[derive(Serialize)]
        struct Report<'a> {
            n: usize,
            source_size: usize,
            search: CensusMode,
            partial: bool,
            colorings_examined: u64,
            partitions: usize,
            isomorphism_classes: usize,
            entries: Vec<Entry<'a>>,
        }
        let entries = self
            .entries
            .iter()
            .map(|e| Entry {
                blocks: e.partition.blocks(),
                size: e.quotient.len(),
                witness: (0..e.witness.len()).map(|x| e.witness.bits(x)).collect(),
            })
            .collect();
        serde_json::to_string(&Report {
            n: self.n,
            source_size: self.source.len(),
            search: self.mode,
            partial: self.partial,
            colorings_examined: self.colorings_examined,
            partitions: self.entries.len(),
            isomorphism_classes: self.classes.len(),
            entries,
        })
        .expect("serializable")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("entry,quotient_size,blocks\n");
        for (i, e) in self.entries.iter().enumerate() {
            let blocks: Vec<String> = e
                .partition
                .blocks()
                .iter()
                .map(|b| b.iter().map(usize::to_string).collect::<Vec<_>>().join(" "))
                .collect();
            out.push_str(&format!("{i},{},{}\n", e.quotient.len(), blocks.join("|")));
        }
        out
    }
}

fn entry_for(p: &Poset, f: &Coloring) -> Result<CensusEntry> {
    let red = coarsest_reduction(p, f)?;
    let mut reps = vec![usize::MAX; red.quotient.len()];
    for (x, &b) in red.projection.iter().enumerate().rev() {
        reps[b] = x;
    }
    let witness = f.restrict(&reps);
    if !is_coloring(&red.quotient, &witness)? {
        return Err(Error::Falsified(
            "coloring induced on a coarsest quotient is not strict".into(),
        ));
    }
    Ok(CensusEntry {
        partition: red.kernel,
        quotient: red.quotient,
        projection: red.projection,
        witness,
    })
}

/// Folds a batch of colorings into `found`, keeping the first witness seen
/// for each partition.
fn absorb(
    p: &Poset,
    batch: &[Coloring],
    found: &mut BTreeMap<Partition, CensusEntry>,
) -> Result<()> {
    let entries: Vec<CensusEntry> = batch
        .par_iter()
        .map(|f| entry_for(p, f))
        .collect::<Result<_>>()?;
    for e in entries {
        found.entry((*e.partition).clone()).or_insert(e);
    }
    Ok(())
}

fn finish(
    p: &Poset,
    n: usize,
    mode: CensusMode,
    found: BTreeMap<Partition, CensusEntry>,
    examined: u64,
    partial: bool,
) -> QuotientCensus {
    let entries: Vec<CensusEntry> = found.into_values().collect();
    let classes = entries
        .par_iter()
        .map(|e| e.quotient.canonical_form())
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    QuotientCensus {
        source: p.clone(),
        n,
        mode,
        entries,
        classes,
        colorings_examined: examined,
        partial,
    }
}

/// Exhaustive over weak colorings up to `budget` of them when `p` has at
/// most [`EXHAUSTIVE_MAX`] elements, otherwise sampled with the default
/// seed and `min(budget, DEFAULT_SAMPLES)` draws.
pub fn quotient_census(p: &Poset, n: usize, budget: u64) -> Result<QuotientCensus> {
    if p.len() <= EXHAUSTIVE_MAX {
        quotient_census_exhaustive(p, n, budget)
    } else {
        quotient_census_sampled(p, n, budget.min(DEFAULT_SAMPLES), DEFAULT_SEED)
    }
}

pub fn quotient_census_exhaustive(p: &Poset, n: usize, budget: u64) -> Result<QuotientCensus> {
    let mut found = BTreeMap::new();
    let mut batch = Vec::with_capacity(CHUNK);
    let mut failure = None;
    let outcome = for_each_weak_coloring(p, n, budget, |f| {
        if failure.is_some() {
            return;
        }
        batch.push(f.clone());
        if batch.len() == CHUNK {
            if let Err(e) = absorb(p, &batch, &mut found) {
                failure = Some(e);
            }
            batch.clear();
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    absorb(p, &batch, &mut found)?;
    let (examined, partial) = match outcome {
        Ok(count) => (count, false),
        Err(Error::BudgetExceeded(b)) => (b, true),
        Err(e) => return Err(e),
    };
    Ok(finish(
        p,
        n,
        CensusMode::Exhaustive { budget },
        found,
        examined,
        partial,
    ))
}

/// Census over `samples` seeded random weak colorings. Never complete, so
/// `partial` is always set.
pub fn quotient_census_sampled(
    p: &Poset,
    n: usize,
    samples: u64,
    seed: u64,
) -> Result<QuotientCensus> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let colorings = (0..samples)
        .map(|_| random_weak_coloring(p, n, &mut rng))
        .collect::<Result<Vec<_>>>()?;
    let mut found = BTreeMap::new();
    for batch in colorings.chunks(CHUNK) {
        absorb(p, batch, &mut found)?;
    }
    Ok(finish(
        p,
        n,
        CensusMode::Sampled { samples, seed },
        found,
        samples,
        true,
    ))
}

/// `k + 1 + (3 + t)(2^(n+3) + 2)` with overflow checks.
pub fn size_bound(n: usize, k: u64, t: u64) -> Result<u64> {
    let level = 2u64
        .checked_pow(u32::try_from(n + 3).map_err(|_| Error::Overflow)?)
        .and_then(|p| p.checked_add(2))
        .ok_or(Error::Overflow)?;
    t.checked_add(3)
        .and_then(|l| l.checked_mul(level))
        .and_then(|v| v.checked_add(k))
        .and_then(|v| v.checked_add(1))
        .ok_or(Error::Overflow)
}

/// The same bound as `k` plus the sizes of `t + 3` consecutive levels,
/// counted from the generator's level contents, plus one.
pub fn size_bound_by_levels(n: usize, k: u64, t: u64) -> Result<u64> {
    if n > MAX_N {
        return Err(Error::OutOfRange(format!("n = {n} (max {MAX_N})")));
    }
    let mut total = k;
    for p in 0..=t.checked_add(2).ok_or(Error::Overflow)? {
        let size = level_members(n, p as usize).len() as u64;
        total = total.checked_add(size).ok_or(Error::Overflow)?;
    }
    total.checked_add(1).ok_or(Error::Overflow)
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub k: u64,
    pub t: u64,
    pub bound: u64,
    pub by_levels: u64,
    pub observed_max: Option<usize>,
}

pub fn bound_report(n: usize, k: u64, t: u64, observed_max: Option<usize>) -> Result<BoundReport> {
    Ok(BoundReport {
        n,
        k,
        t,
        bound: size_bound(n, k, t)?,
        by_levels: size_bound_by_levels(n, k, t)?,
        observed_max,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct KcReport {
    pub max_size: usize,
    pub rooted_posets: usize,
    /// `(poset size, algebra size)` for each qualifying poset.
    pub qualifying: Vec<(usize, usize)>,
    pub maximum: usize,
}

pub const KC_MAX_SIZE: usize = 7;

/// Among rooted posets with at most `max_size` elements, those whose upset
/// algebra satisfies `~x | ~~x = 1`, is subdirectly irreducible and is
/// one-generated; reports the largest algebra.
pub fn kc_probe(max_size: usize) -> Result<KcReport> {
    if max_size > KC_MAX_SIZE {
        return Err(Error::TooLarge(format!(
            "rooted posets of size {max_size} (limit {KC_MAX_SIZE})"
        )));
    }
    let posets: Vec<Poset> = rooted_posets_up_to_iso(max_size)
        .into_iter()
        .flatten()
        .collect();
    let wem = Equation::weak_excluded_middle();
    let qualifying = posets
        .par_iter()
        .map(|p| -> Result<Option<(usize, usize)>> {
            if is_n_colorable(p, 1, u64::MAX)?.is_none() {
                return Ok(None);
            }
            let a = UpsetAlgebra::new(p)?;
            Ok((a.is_si() && a.validates(&wem)?).then(|| (p.len(), a.len())))
        })
        .collect::<Result<Vec<_>>>()?;
    let qualifying: Vec<(usize, usize)> = qualifying.into_iter().flatten().collect();
    Ok(KcReport {
        max_size,
        rooted_posets: posets.len(),
        maximum: qualifying.iter().map(|q| q.1).max().unwrap_or(0),
        qualifying,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LfReport {
    pub count: usize,
    pub partial: bool,
}

/// Non-isomorphic n-colorable quotients of the rooted upsets `↑x` of `p`
/// with at most `size_cap` elements.
pub fn local_finiteness_probe(
    p: &Poset,
    n: usize,
    size_cap: usize,
    budget: u64,
) -> Result<LfReport> {
    let mut classes = BTreeSet::new();
    let mut partial = false;
    for x in 0..p.len() {
        let (up, _) = p.induced(p.up(x));
        let census = quotient_census(&up, n, budget)?;
        partial |= census.partial;
        for e in &census.entries {
            if e.quotient.len() <= size_cap {
                classes.insert(e.quotient.canonical_form());
            }
        }
    }
    Ok(LfReport {
        count: classes.len(),
        partial,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthRow {
    pub depth: usize,
    pub size: usize,
    /// The canonical (n+1)-coloring is strict, so the truncation is its own
    /// largest (n+1)-colorable quotient.
    pub canonical_strict: bool,
}

pub fn growth_probe(n: usize, depths: &[usize]) -> Result<Vec<GrowthRow>> {
    depths
        .iter()
        .map(|&depth| {
            let t = abomination_truncation(n, depth)?;
            debug_assert_eq!(t.len(), (depth + 1) * level_size(n));
            Ok(GrowthRow {
                depth,
                size: t.len(),
                canonical_strict: is_coloring(&t.poset, &canonical_coloring(&t)?)?,
            })
        })
        .collect()
}
