//! β-reduction schedules on ladder subspaces.
//!
//! Given an upset `V` of a ladder truncation over `Y_n` and a weak
//! n-coloring, [`schedule_beta_reductions`] produces β-steps whose kernel
//! never merges two colors yet merges a pair in every full level. Levels are
//! handled top-down. When a full level cannot be merged color by color, the
//! colors on it span fewer bits than the current region, and the work
//! continues on a sub-ladder of `2^(d+1)` indices colored in `d` bits.

mod lift;

pub use lift::{certify, corollary_check, delta_label, lift_schedule, Certificate, DeltaMap};

use std::collections::BTreeMap;

use crate::abomination::{index_count, AbominationLabel, Kind, LabeledPoset};
use crate::coloring::Coloring;
use crate::error::{Error, Result};
use crate::poset::Poset;
use crate::reduction::{replay, EPartition, Reducer, ReductionStep, StepKind};

/// β-steps on a ladder subspace, in application order.
#[derive(Clone, Debug)]
pub struct Schedule {
    pub steps: Vec<ReductionStep>,
    pub source: Poset,
    pub kernel: EPartition,
}

/// The ladder level and index of every element.
fn coordinates(v: &LabeledPoset) -> Result<Vec<(usize, usize)>> {
    let k = index_count(v.n);
    v.labels()
        .iter()
        .map(|l| match (l.kind, l.index) {
            (Kind::Y, Some(i)) if i < k => Ok((l.level, i)),
            _ => Err(Error::Invalid(format!("{l} is not a ladder element"))),
        })
        .collect()
}

/// Checks that `v` is an upset of a ladder truncation with the induced order.
fn check_ladder_upset(v: &LabeledPoset) -> Result<Vec<(usize, usize)>> {
    let coords = coordinates(v)?;
    let k = index_count(v.n);
    for (x, &(q, i)) in coords.iter().enumerate() {
        let mut expected = Vec::new();
        if q > 0 {
            for j in (0..k).filter(|&j| j != i) {
                match v.id(&AbominationLabel::y(q - 1, j)) {
                    Some(y) => expected.push(y),
                    None => {
                        return Err(Error::NotUpset(format!(
                            "y{}_{j} is above {} but missing",
                            q - 1,
                            v.label(x)
                        )))
                    }
                }
            }
        }
        expected.sort_unstable();
        if v.poset.upper_covers(x) != expected.as_slice() {
            return Err(Error::Invalid(format!(
                "{} does not have the ladder covers",
                v.label(x)
            )));
        }
    }
    Ok(coords)
}

/// Ids of level `q` for the given indices, or `None` if one is missing.
fn level_ids(v: &LabeledPoset, q: usize, indices: &[usize]) -> Option<Vec<(usize, usize)>> {
    indices
        .iter()
        .map(|&i| v.id(&AbominationLabel::y(q, i)).map(|x| (i, x)))
        .collect()
}

/// Runs the scheduling algorithm. The result is replay-checked against
/// conditions (i)-(iii) before it is returned.
pub fn schedule_beta_reductions(v: &LabeledPoset, f: &Coloring) -> Result<Schedule> {
    let coords = check_ladder_upset(v)?;
    f.check_weak(&v.poset)?;
    if f.n() > v.n {
        return Err(Error::OutOfRange(format!(
            "{}-coloring of a ladder over {} bits",
            f.n(),
            v.n
        )));
    }
    let depth = coords.iter().map(|c| c.0).max();
    let mut red = Reducer::new(&v.poset);
    let mut indices: Vec<usize> = (0..index_count(v.n)).collect();
    // Colors of the current region fit in `dim` bits.
    let mut dim = v.n;
    let mut q = 0;
    while depth.is_some_and(|d| q <= d) {
        let Some(members) = level_ids(v, q, &indices) else {
            // Nothing below a non-full level is full.
            break;
        };
        let mut classes: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for &(_, x) in &members {
            classes.entry(f.color(x)).or_default().push(x);
        }
        let covers = |red: &Reducer, x: usize| red.current().upper_covers(red.image(x)).to_vec();
        let stuck = classes.values().any(|class| {
            let first = covers(&red, class[0]);
            class[1..].iter().any(|&x| covers(&red, x) != first)
        });
        if !stuck {
            for class in classes.values() {
                for &x in &class[1..] {
                    merge(&mut red, v, class[0], x)?;
                }
            }
            q += 1;
            continue;
        }

        let span = members.iter().fold(0u32, |acc, &(_, x)| acc | f.color(x));
        let d = span.count_ones() as usize;
        if d >= dim {
            return Err(Error::Falsified(format!(
                "level {q} is stuck but its colors span {d} bits (region has {dim})"
            )));
        }
        // Per color, the largest group sharing upper covers, least index first.
        let mut groups: Vec<Vec<(usize, usize)>> = Vec::new();
        for class in classes.values() {
            let mut by_covers: BTreeMap<Vec<usize>, Vec<(usize, usize)>> = BTreeMap::new();
            for &x in class {
                by_covers
                    .entry(covers(&red, x))
                    .or_default()
                    .push((coords[x].1, x));
            }
            let best = by_covers
                .into_values()
                .max_by(|a, b| a.len().cmp(&b.len()).then(b[0].0.cmp(&a[0].0)))
                .expect("class is nonempty");
            groups.push(best);
        }
        let need = 1usize << (d + 1);
        let available: usize = groups.iter().map(Vec::len).sum();
        if available < need {
            return Err(Error::Falsified(format!(
                "level {q}: only {available} mergeable indices, need {need}"
            )));
        }
        let mut chosen = Vec::with_capacity(need);
        for group in &mut groups {
            group.truncate(need - chosen.len());
            chosen.extend(group.iter().map(|&(i, _)| i));
            for &(_, x) in &group[1..] {
                merge(&mut red, v, group[0].1, x)?;
            }
            if chosen.len() == need {
                break;
            }
        }
        chosen.sort_unstable();
        indices = chosen;
        dim = d;
        q += 1;
    }

    let r = red.finish();
    let schedule = Schedule {
        steps: r.steps,
        source: v.poset.clone(),
        kernel: r.kernel,
    };
    check_schedule(v, f, &schedule)?;
    Ok(schedule)
}

fn merge(red: &mut Reducer, v: &LabeledPoset, x: usize, y: usize) -> Result<()> {
    match red.apply_source(StepKind::Beta, x, y) {
        Ok(_) => Ok(()),
        Err(Error::NotMergeable(..)) => Err(Error::Falsified(format!(
            "{} and {} are not β-mergeable when scheduled",
            v.label(x),
            v.label(y)
        ))),
        Err(e) => Err(e),
    }
}

/// Independent check of a schedule: every step is a valid β-step, the
/// kernel is monochromatic on blocks, and each full level has a merged pair.
pub fn check_schedule(v: &LabeledPoset, f: &Coloring, s: &Schedule) -> Result<()> {
    let fail = |msg: String| Err(Error::Falsified(msg));
    if let Some(step) = s.steps.iter().find(|s| s.kind != StepKind::Beta) {
        return fail(format!("step {:?} is not a β-step", step.pair));
    }
    let r = match replay(&v.poset, &s.steps) {
        Ok(r) => r,
        Err(e) => return fail(format!("schedule does not replay: {e}")),
    };
    if r.kernel != s.kernel {
        return fail("recorded kernel differs from the replayed one".into());
    }
    for block in r.kernel.blocks() {
        if let Some(&x) = block.iter().find(|&&x| f.color(x) != f.color(block[0])) {
            return fail(format!(
                "{} and {} have different colors but are merged",
                v.label(block[0]),
                v.label(x)
            ));
        }
    }
    let max_level = v.labels().iter().map(|l| l.level).max();
    let all: Vec<usize> = (0..index_count(v.n)).collect();
    for q in (0..max_level.map_or(0, |m| m + 1)).filter(|&q| level_ids(v, q, &all).is_some()) {
        if level_merged_pair(v, &r.kernel, Kind::Y, q).is_none() {
            return fail(format!("full level {q} has no merged pair"));
        }
    }
    Ok(())
}

/// The least `(i, j)`, `i < j`, with both members of `kind` at `level`
/// in one block.
pub(crate) fn level_merged_pair(
    t: &LabeledPoset,
    kernel: &EPartition,
    kind: Kind,
    level: usize,
) -> Option<(usize, usize)> {
    let fam = t.family(kind, level);
    fam.iter().enumerate().find_map(|(a, &(i, x))| {
        fam[a + 1..]
            .iter()
            .find(|&&(_, y)| kernel.same(x, y))
            .map(|&(j, _)| (i, j))
    })
}
