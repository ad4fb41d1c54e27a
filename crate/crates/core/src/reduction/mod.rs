//! E-partitions, quotients and the two elementary reductions.
//!
//! An α-step merges an element into its unique upper cover; a β-step merges
//! two elements with the same upper covers. Every surjective p-morphism of
//! finite posets factors into such steps, which is what makes the greedy
//! fixpoint in [`coarsest_color_respecting`] exact: whenever a coarser
//! color-respecting E-partition exists, some same-colored elementary step
//! is available.

mod partition;

pub use partition::{EPartition, Partition};

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::coloring::Coloring;
use crate::error::{Error, Result};
use crate::poset::{ElementSet, Poset};

/// Largest poset accepted by [`all_epartitions`].
pub const ALL_EPARTITIONS_MAX: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepKind {
    Alpha,
    Beta,
}

impl StepKind {
    pub fn name(self) -> &'static str {
        match self {
            StepKind::Alpha => "alpha",
            StepKind::Beta => "beta",
        }
    }
}

/// One elementary merge. `pair` uses the ids of the poset the step applies
/// to; `source_pair` names least representatives in the original poset.
/// For α-steps the first component is the lower element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReductionStep {
    pub kind: StepKind,
    pub pair: (usize, usize),
    pub source_pair: (usize, usize),
}

/// The outcome of a sequence of steps applied to a source poset. The
/// quotient is numbered as [`quotient`] numbers it, so it depends only on
/// the source and the kernel.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub steps: Vec<ReductionStep>,
    pub quotient: Poset,
    /// Source id to quotient id.
    pub projection: Vec<usize>,
    pub kernel: EPartition,
}

pub fn is_epartition(p: &Poset, r: &Partition) -> bool {
    if r.len() != p.len() {
        return false;
    }
    let nb = r.num_blocks();
    let sig: Vec<FixedBitSet> = (0..p.len())
        .map(|x| {
            let mut s = FixedBitSet::with_capacity(nb);
            for y in p.up(x).iter() {
                s.insert(r.block_of(y));
            }
            s
        })
        .collect();
    r.blocks()
        .iter()
        .all(|b| b[1..].iter().all(|&x| sig[x] == sig[b[0]]))
}

/// The quotient poset and the projection onto it. Quotient ids follow the
/// order of (least depth in the block, least id in the block).
pub fn quotient(p: &Poset, r: &Partition) -> Result<(Poset, Vec<usize>)> {
    if !is_epartition(p, r) {
        return Err(Error::NotEPartition);
    }
    Ok(quotient_unchecked(p, r))
}

fn quotient_unchecked(p: &Poset, r: &Partition) -> (Poset, Vec<usize>) {
    let depths = p.depths();
    let mut order: Vec<usize> = (0..r.num_blocks()).collect();
    order.sort_by_key(|&b| {
        let block = &r.blocks()[b];
        (block.iter().map(|&x| depths[x]).min(), block[0])
    });
    let mut new_id = vec![0; r.num_blocks()];
    for (i, &b) in order.iter().enumerate() {
        new_id[b] = i;
    }
    let projection: Vec<usize> = (0..p.len()).map(|x| new_id[r.block_of(x)]).collect();
    let pairs: Vec<(usize, usize)> = p
        .covers()
        .into_iter()
        .map(|(x, y)| (projection[x], projection[y]))
        .filter(|(a, b)| a != b)
        .collect();
    let labels = order
        .iter()
        .map(|&b| p.labels()[r.blocks()[b][0]].clone())
        .collect();
    let q = Poset::from_covers(order.len(), &pairs)
        .expect("quotient by an E-partition is a poset")
        .with_labels(labels)
        .expect("label count matches");
    (q, projection)
}

/// Order-preserving with the back condition: `f(↑x) = ↑f(x)` for all `x`.
pub fn is_pmorphism(p: &Poset, q: &Poset, f: &[usize]) -> bool {
    if f.len() != p.len() || f.iter().any(|&y| y >= q.len()) {
        return false;
    }
    (0..p.len()).all(|x| {
        let image = ElementSet::from_ids(q.len(), p.up(x).iter().map(|z| f[z]));
        image == *q.up(f[x])
    })
}

pub fn is_surjective(q_len: usize, f: &[usize]) -> bool {
    let mut hit = vec![false; q_len];
    for &y in f {
        if y < q_len {
            hit[y] = true;
        }
    }
    hit.into_iter().all(|h| h)
}

/// `y` is the unique upper cover of `x`.
pub fn alpha_mergeable(p: &Poset, x: usize, y: usize) -> bool {
    x < p.len() && y < p.len() && p.upper_covers(x) == [y]
}

/// `x != y` and both have the same upper covers.
pub fn beta_mergeable(p: &Poset, x: usize, y: usize) -> bool {
    x != y && x < p.len() && y < p.len() && p.upper_covers(x) == p.upper_covers(y)
}

/// Merges one pair, returning the reduced poset and the projection onto it.
pub fn merge_step(p: &Poset, kind: StepKind, x: usize, y: usize) -> Result<(Poset, Vec<usize>)> {
    let ok = match kind {
        StepKind::Alpha => alpha_mergeable(p, x, y),
        StepKind::Beta => beta_mergeable(p, x, y),
    };
    if !ok {
        return Err(Error::NotMergeable(x, y, kind.name()));
    }
    let r = Partition::from_pairs(p.len(), &[(x, y)])?;
    Ok(quotient_unchecked(p, &r))
}

fn step_key(
    p: &Poset,
    &(kind, x, y): &(StepKind, usize, usize),
) -> (usize, usize, usize, StepKind) {
    let d = p.depths();
    (d[x].max(d[y]), x.min(y), x.max(y), kind)
}

fn candidates(p: &Poset, accept: impl Fn(usize, usize) -> bool) -> Vec<(StepKind, usize, usize)> {
    let mut out = Vec::new();
    let mut groups: HashMap<&[usize], Vec<usize>> = HashMap::new();
    for x in 0..p.len() {
        if let [y] = p.upper_covers(x) {
            if accept(x, *y) {
                out.push((StepKind::Alpha, x, *y));
            }
        }
        groups.entry(p.upper_covers(x)).or_default().push(x);
    }
    for members in groups.values() {
        for (i, &x) in members.iter().enumerate() {
            for &y in &members[i + 1..] {
                if accept(x, y) {
                    out.push((StepKind::Beta, x, y));
                }
            }
        }
    }
    out
}

/// All elementary steps available in `p`, ordered by (larger depth of the
/// two elements, smaller id, larger id). With `colors`, only pairs of equal
/// color are returned.
pub fn mergeable_pairs(p: &Poset, colors: Option<&[u32]>) -> Vec<(StepKind, usize, usize)> {
    let mut out = candidates(p, |x, y| colors.is_none_or(|c| c[x] == c[y]));
    out.sort_by_key(|c| step_key(p, c));
    out
}

fn first_mergeable(
    p: &Poset,
    accept: impl Fn(usize, usize) -> bool,
) -> Option<(StepKind, usize, usize)> {
    candidates(p, accept)
        .into_iter()
        .min_by_key(|c| step_key(p, c))
}

/// Applies elementary steps to a source poset one at a time, tracking the
/// projection from source ids to the current quotient.
#[derive(Clone, Debug)]
pub struct Reducer {
    source: Poset,
    current: Poset,
    projection: Vec<usize>,
    /// Least source id per current element.
    rep: Vec<usize>,
    steps: Vec<ReductionStep>,
}

impl Reducer {
    pub fn new(p: &Poset) -> Self {
        Reducer {
            source: p.clone(),
            current: p.clone(),
            projection: (0..p.len()).collect(),
            rep: (0..p.len()).collect(),
            steps: Vec::new(),
        }
    }

    pub fn current(&self) -> &Poset {
        &self.current
    }

    /// Current id of source element `x`.
    pub fn image(&self, x: usize) -> usize {
        self.projection[x]
    }

    /// Least source id mapped onto current element `y`.
    pub fn representative(&self, y: usize) -> usize {
        self.rep[y]
    }

    pub fn steps(&self) -> &[ReductionStep] {
        &self.steps
    }

    /// Merges current elements `x` and `y`.
    pub fn apply_current(&mut self, kind: StepKind, x: usize, y: usize) -> Result<()> {
        let (next, proj) = merge_step(&self.current, kind, x, y)?;
        self.steps.push(ReductionStep {
            kind,
            pair: (x, y),
            source_pair: (self.rep[x], self.rep[y]),
        });
        let mut next_rep = vec![usize::MAX; next.len()];
        for (old, &new) in proj.iter().enumerate() {
            next_rep[new] = next_rep[new].min(self.rep[old]);
        }
        for v in &mut self.projection {
            *v = proj[*v];
        }
        self.rep = next_rep;
        self.current = next;
        Ok(())
    }

    /// Merges the images of source elements `x` and `y`. Returns `false`
    /// without a step when they already coincide.
    pub fn apply_source(&mut self, kind: StepKind, x: usize, y: usize) -> Result<bool> {
        let (a, b) = (self.projection[x], self.projection[y]);
        if a == b {
            return Ok(false);
        }
        self.apply_current(kind, a, b)?;
        Ok(true)
    }

    pub fn finish(self) -> Reduction {
        finished(&self.source, self.steps, &self.projection)
    }
}

/// Repeatedly applies the least step accepted by `accept`, which receives
/// the least source id of every current element and the candidate pair.
fn greedy(p: &Poset, accept: impl Fn(&[usize], usize, usize) -> bool) -> Reduction {
    let mut red = Reducer::new(p);
    while let Some((kind, x, y)) = first_mergeable(&red.current, |x, y| accept(&red.rep, x, y)) {
        red.apply_current(kind, x, y)
            .expect("candidate is mergeable");
    }
    red.finish()
}

/// Factors a surjective p-morphism into elementary steps, each merging a
/// pair that `f` identifies.
pub fn decompose_pmorphism(p: &Poset, q: &Poset, f: &[usize]) -> Result<Vec<ReductionStep>> {
    if !is_pmorphism(p, q, f) {
        return Err(Error::NotPMorphism);
    }
    if !is_surjective(q.len(), f) {
        return Err(Error::NotSurjective);
    }
    let red = greedy(p, |rep, x, y| f[rep[x]] == f[rep[y]]);
    if red.quotient.len() != q.len() {
        return Err(Error::Falsified(format!(
            "no elementary step inside the kernel after {} steps ({} elements left, target {})",
            red.steps.len(),
            red.quotient.len(),
            q.len()
        )));
    }
    Ok(red.steps)
}

/// Applies `steps` in order, checking each against its intermediate poset.
pub fn replay(p: &Poset, steps: &[ReductionStep]) -> Result<Reduction> {
    let mut cur = p.clone();
    let mut projection: Vec<usize> = (0..p.len()).collect();
    for s in steps {
        let (a, b) = s.source_pair;
        p.check_id(a)?;
        p.check_id(b)?;
        if (projection[a], projection[b]) != s.pair {
            return Err(Error::Invalid(format!(
                "step {:?} does not match its source pair",
                s.pair
            )));
        }
        let (next, proj) = merge_step(&cur, s.kind, s.pair.0, s.pair.1)?;
        for v in &mut projection {
            *v = proj[*v];
        }
        cur = next;
    }
    Ok(finished(p, steps.to_vec(), &projection))
}

fn finished(p: &Poset, steps: Vec<ReductionStep>, projection: &[usize]) -> Reduction {
    let kernel = Partition::from_labels(projection);
    let (quotient, projection) = quotient_unchecked(p, &kernel);
    Reduction {
        steps,
        quotient,
        projection,
        kernel: EPartition::trusted(kernel),
    }
}

/// Replays `steps` and returns every intermediate poset, starting with `p`.
pub fn replay_snapshots(p: &Poset, steps: &[ReductionStep]) -> Result<Vec<Poset>> {
    let mut out = vec![p.clone()];
    for s in steps {
        let cur = out.last().expect("nonempty");
        let (next, _) = merge_step(cur, s.kind, s.pair.0, s.pair.1)?;
        out.push(next);
    }
    Ok(out)
}

/// The largest E-partition whose blocks are monochromatic.
pub fn coarsest_color_respecting(p: &Poset, c: &Coloring) -> Result<EPartition> {
    Ok(coarsest_reduction(p, c)?.kernel)
}

/// As [`coarsest_color_respecting`], keeping the steps and the quotient.
pub fn coarsest_reduction(p: &Poset, c: &Coloring) -> Result<Reduction> {
    c.check_weak(p)?;
    let colors = c.colors();
    Ok(greedy(p, |rep, x, y| colors[rep[x]] == colors[rep[y]]))
}

/// Every E-partition of a poset with at most [`ALL_EPARTITIONS_MAX`]
/// elements, in restricted-growth-string order.
pub fn all_epartitions(p: &Poset) -> Result<Vec<Partition>> {
    let n = p.len();
    if n > ALL_EPARTITIONS_MAX {
        return Err(Error::TooLarge(format!(
            "E-partition enumeration on {n} elements (limit {ALL_EPARTITIONS_MAX})"
        )));
    }
    let mut out = Vec::new();
    let mut labels = vec![0usize; n];
    fn rec(p: &Poset, i: usize, max: usize, labels: &mut [usize], out: &mut Vec<Partition>) {
        if i == labels.len() {
            let r = Partition::from_labels(labels);
            if is_epartition(p, &r) {
                out.push(r);
            }
            return;
        }
        for l in 0..=max {
            labels[i] = l;
            rec(p, i + 1, max.max(l + 1), labels, out);
        }
    }
    if n == 0 {
        return Ok(vec![Partition::identity(0)]);
    }
    rec(p, 1, 1, &mut labels, &mut out);
    Ok(out)
}

/// Serializes steps as `[{"kind": "beta", "pair": [x, y], ...}, ...]`.
pub fn trace_json(steps: &[ReductionStep]) -> String {
    serde_json::to_string(steps).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vee() -> Poset {
        Poset::from_covers(3, &[(0, 1), (0, 2)]).unwrap()
    }

    #[test]
    fn epartition_examples() {
        let c2 = Poset::chain(2);
        assert!(is_epartition(&c2, &Partition::identity(2)));
        assert!(is_epartition(&c2, &Partition::full(2)));
        let c3 = Poset::chain(3);
        assert!(!is_epartition(
            &c3,
            &Partition::from_pairs(3, &[(0, 2)]).unwrap()
        ));
    }

    #[test]
    fn quotient_examples() {
        let (q, proj) = quotient(&Poset::antichain(2), &Partition::full(2)).unwrap();
        assert_eq!(q.len(), 1);
        assert_eq!(proj, vec![0, 0]);

        let v = vee();
        let (q, proj) = quotient(&v, &Partition::from_pairs(3, &[(1, 2)]).unwrap()).unwrap();
        assert!(q.isomorphic(&Poset::chain(2)));
        assert!(is_pmorphism(&v, &q, &proj));
        // Maximal block first.
        assert_eq!(proj, vec![1, 0, 0]);

        let (q, _) = quotient(&v, &Partition::identity(3)).unwrap();
        assert!(q.isomorphic(&v));
        assert_eq!(
            quotient(
                &Poset::chain(3),
                &Partition::from_pairs(3, &[(0, 2)]).unwrap()
            )
            .unwrap_err(),
            Error::NotEPartition
        );
    }

    #[test]
    fn pmorphism_examples() {
        let v = vee();
        assert!(is_pmorphism(&v, &v, &[0, 1, 2]));
        // r -> bottom (0), a, b -> top (1)
        assert!(is_pmorphism(&v, &Poset::chain(2), &[0, 1, 1]));
        assert!(!is_pmorphism(
            &Poset::antichain(2),
            &Poset::chain(2),
            &[0, 1]
        ));
    }

    #[test]
    fn mergeability() {
        let c2 = Poset::chain(2);
        assert!(alpha_mergeable(&c2, 0, 1));
        assert!(!alpha_mergeable(&c2, 1, 0));
        assert!(beta_mergeable(&vee(), 1, 2));
        assert!(!beta_mergeable(&vee(), 1, 1));
        assert_eq!(
            merge_step(&vee(), StepKind::Alpha, 0, 1).unwrap_err(),
            Error::NotMergeable(0, 1, "alpha")
        );
    }

    #[test]
    fn decompose_examples() {
        let v = vee();
        assert!(decompose_pmorphism(&v, &v, &[0, 1, 2]).unwrap().is_empty());
        let steps = decompose_pmorphism(&v, &Poset::chain(2), &[0, 1, 1]).unwrap();
        assert_eq!(steps.len(), 1);
        assert_eq!(steps[0].kind, StepKind::Beta);
        assert_eq!(steps[0].source_pair, (1, 2));

        let c4 = Poset::chain(4);
        let steps = decompose_pmorphism(&c4, &Poset::chain(1), &[0; 4]).unwrap();
        assert_eq!(steps.len(), 3);
        assert!(steps.iter().all(|s| s.kind == StepKind::Alpha));
        let r = replay(&c4, &steps).unwrap();
        assert_eq!(*r.kernel, Partition::full(4));

        assert_eq!(
            decompose_pmorphism(&Poset::antichain(2), &Poset::chain(2), &[0, 1]).unwrap_err(),
            Error::NotPMorphism
        );
        assert_eq!(
            decompose_pmorphism(&Poset::chain(1), &Poset::antichain(2), &[0]).unwrap_err(),
            Error::NotSurjective
        );
    }

    #[test]
    fn all_epartition_counts() {
        assert_eq!(all_epartitions(&Poset::chain(1)).unwrap().len(), 1);
        assert_eq!(all_epartitions(&Poset::chain(2)).unwrap().len(), 2);
        assert_eq!(all_epartitions(&Poset::antichain(2)).unwrap().len(), 2);
        assert_eq!(all_epartitions(&Poset::empty()).unwrap().len(), 1);
        assert!(all_epartitions(&Poset::antichain(9)).is_err());
    }

    #[test]
    fn coarsest_examples() {
        let anti = Poset::antichain(2);
        let distinct = Coloring::new(1, vec![0, 1]).unwrap();
        assert!(coarsest_color_respecting(&anti, &distinct)
            .unwrap()
            .is_identity());
        let same = Coloring::new(1, vec![0, 0]).unwrap();
        assert_eq!(
            *coarsest_color_respecting(&anti, &same).unwrap(),
            Partition::full(2)
        );
        let bad = Coloring::new(1, vec![1, 0]).unwrap();
        assert!(matches!(
            coarsest_color_respecting(&Poset::chain(2), &bad),
            Err(Error::NotWeakColoring(_))
        ));
    }

    #[test]
    fn trace_json_shape() {
        let steps = decompose_pmorphism(&vee(), &Poset::chain(2), &[0, 1, 1]).unwrap();
        assert_eq!(
            trace_json(&steps),
            r#"[{"kind":"beta","pair":[1,2],"source_pair":[1,2]}]"#
        );
    }
}
