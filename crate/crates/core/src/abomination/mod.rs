//! Level truncations of the abomination `X_n` and the ladder `Y_n`.
//!
//! Levels are numbered from the top. A truncation to levels `0..=M` is an
//! upset of the infinite space, so every construction here stays inside the
//! finite E-subspaces the separation argument works with. Ids are assigned by
//! (level, kind, index) with kinds ordered `A < B < C < D < EA < EB`.

mod label;

pub use label::{AbominationLabel, Kind};

use std::collections::HashMap;

use crate::coloring::Coloring;
use crate::error::{Error, Result};
use crate::poset::{ElementSet, Poset};

/// Largest `n` accepted by the generators; level sizes grow as `2^(n+3)`.
pub const MAX_N: usize = 10;

/// `2^(n+1)`, the number of indices per family.
pub fn index_count(n: usize) -> usize {
    1 << (n + 1)
}

/// `2^(n+3) + 2`, the size of one abomination level.
pub fn level_size(n: usize) -> usize {
    4 * index_count(n) + 2
}

/// Ordered triples of pairwise distinct indices below `2^(n+1)`, listed
/// lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleTable {
    pub n: usize,
    pub triples: Vec<[usize; 3]>,
}

impl TripleTable {
    /// The largest triple index, so there are `t + 1` triples.
    pub fn t(&self) -> usize {
        self.triples.len() - 1
    }

    /// The triple governing level `m`.
    pub fn for_level(&self, m: usize) -> [usize; 3] {
        self.triples[m % self.triples.len()]
    }
}

fn check_n(n: usize) -> Result<()> {
    if !(2..=MAX_N).contains(&n) {
        return Err(Error::OutOfRange(format!("n = {n} (expected 2..={MAX_N})")));
    }
    Ok(())
}

pub fn triple_table(n: usize) -> Result<TripleTable> {
    check_n(n)?;
    let k = index_count(n);
    let mut triples = Vec::with_capacity(k * (k - 1) * (k - 2));
    for a in 0..k {
        for b in (0..k).filter(|&b| b != a) {
            for c in (0..k).filter(|&c| c != a && c != b) {
                triples.push([a, b, c]);
            }
        }
    }
    Ok(TripleTable { n, triples })
}

/// A poset whose elements carry structured labels.
#[derive(Clone, Debug)]
pub struct LabeledPoset {
    /// Index range parameter: indices run below `2^(n+1)`.
    pub n: usize,
    pub poset: Poset,
    labels: Vec<AbominationLabel>,
    ids: HashMap<AbominationLabel, usize>,
}

impl LabeledPoset {
    fn new(n: usize, pairs: &[(usize, usize)], labels: Vec<AbominationLabel>) -> Self {
        let text = labels.iter().map(|l| Some(l.to_string())).collect();
        let poset = Poset::from_covers(labels.len(), pairs)
            .expect("generated relations are acyclic")
            .with_labels(text)
            .expect("label count matches");
        let ids = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        LabeledPoset {
            n,
            poset,
            labels,
            ids,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[AbominationLabel] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> AbominationLabel {
        self.labels[x]
    }

    pub fn id(&self, l: &AbominationLabel) -> Option<usize> {
        self.ids.get(l).copied()
    }

    /// Ids of `kind` at `level`, for indices present, ascending by index.
    pub fn family(&self, kind: Kind, level: usize) -> Vec<(usize, usize)> {
        (0..index_count(self.n))
            .filter_map(|i| {
                self.id(&AbominationLabel::indexed(kind, level, i))
                    .map(|x| (i, x))
            })
            .collect()
    }

    /// Levels at which every index of `kind` is present.
    pub fn full_levels(&self, kind: Kind) -> Vec<usize> {
        let max = self.labels.iter().map(|l| l.level).max();
        (0..max.map_or(0, |m| m + 1))
            .filter(|&p| self.family(kind, p).len() == index_count(self.n))
            .collect()
    }

    /// The subspace on an upset `s`, ids renumbered in increasing order.
    pub fn subspace(&self, s: &ElementSet) -> Result<(LabeledPoset, Vec<usize>)> {
        if s.universe() != self.len() || !self.poset.is_upset(s) {
            let missing = s
                .iter()
                .flat_map(|x| self.poset.up(x).iter())
                .find(|&y| !s.contains(y));
            return Err(Error::NotUpset(match missing {
                Some(y) => format!("{} is above a member but missing", self.labels[y]),
                None => "size mismatch".into(),
            }));
        }
        let (sub, map) = self.poset.induced(s);
        let labels: Vec<AbominationLabel> = map.iter().map(|&x| self.labels[x]).collect();
        let ids = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        Ok((
            LabeledPoset {
                n: self.n,
                poset: sub,
                labels,
                ids,
            },
            map,
        ))
    }
}

/// Labels of level `p` in id order.
pub fn level_members(n: usize, p: usize) -> Vec<AbominationLabel> {
    let k = index_count(n);
    let mut out = vec![AbominationLabel::a(p), AbominationLabel::b(p)];
    for kind in [Kind::C, Kind::D, Kind::EA, Kind::EB] {
        out.extend((0..k).map(|i| AbominationLabel::indexed(kind, p, i)));
    }
    out
}

/// Levels `0..=depth` of `X_n` with the cover relation restricted to them.
pub fn abomination_truncation(n: usize, depth: usize) -> Result<LabeledPoset> {
    let table = triple_table(n)?;
    let k = index_count(n);
    let size = level_size(n);
    let count = (depth + 1).checked_mul(size).ok_or(Error::Overflow)?;
    let a = |m: usize| m * size;
    let b = |m: usize| m * size + 1;
    let c = |m: usize, i: usize| m * size + 2 + i;
    let d = |m: usize, i: usize| m * size + 2 + k + i;
    let ea = |m: usize, i: usize| m * size + 2 + 2 * k + i;
    let eb = |m: usize, i: usize| m * size + 2 + 3 * k + i;

    let mut labels = Vec::with_capacity(count);
    let mut pairs = Vec::new();
    for m in 0..=depth {
        labels.extend(level_members(n, m));
        let [k1, k2, k3] = table.for_level(m);
        pairs.extend([(a(m), c(m, k1)), (a(m), c(m, k2))]);
        pairs.extend([(b(m), c(m, k1)), (b(m), c(m, k3))]);
        for x in 0..k {
            if m >= 1 {
                for y in 0..k {
                    if y != x {
                        pairs.push((c(m, x), ea(m - 1, y)));
                    }
                    pairs.push((c(m, x), eb(m - 1, y)));
                }
            }
            for y in (0..k).filter(|&y| y != x) {
                pairs.push((d(m, x), c(m, y)));
                pairs.push((ea(m, x), d(m, y)));
                pairs.push((eb(m, x), d(m, y)));
            }
            pairs.push((ea(m, x), a(m)));
            pairs.push((eb(m, x), b(m)));
        }
    }
    Ok(LabeledPoset::new(n, &pairs, labels))
}

/// Levels `0..=depth` of `Y_n`: `y_{m,i}` is covered by every `y_{m-1,j}`
/// with `j != i`.
pub fn ladder_truncation(n: usize, depth: usize) -> Result<LabeledPoset> {
    if n > MAX_N {
        return Err(Error::OutOfRange(format!("n = {n} (max {MAX_N})")));
    }
    let k = index_count(n);
    let mut labels = Vec::with_capacity((depth + 1) * k);
    let mut pairs = Vec::new();
    for m in 0..=depth {
        labels.extend((0..k).map(|i| AbominationLabel::y(m, i)));
        if m >= 1 {
            for i in 0..k {
                for j in (0..k).filter(|&j| j != i) {
                    pairs.push((m * k + i, (m - 1) * k + j));
                }
            }
        }
    }
    Ok(LabeledPoset::new(n, &pairs, labels))
}

/// The weak `(n+1)`-coloring sending `c_{0,k}` to color `k` and every other
/// element to 0.
pub fn canonical_coloring(t: &LabeledPoset) -> Result<Coloring> {
    check_n(t.n)?;
    let colors = t
        .labels()
        .iter()
        .map(|l| match (l.kind, l.level, l.index) {
            (Kind::C, 0, Some(i)) => i as u32,
            _ => 0,
        })
        .collect();
    Coloring::new(t.n + 1, colors)
}

/// Whether every element of level `m + 1` lies below `e^b_{m,k}`.
pub fn verify_downset_claim(n: usize, depth: usize, m: usize, k: usize) -> Result<bool> {
    if m + 1 > depth {
        return Err(Error::OutOfRange(format!(
            "level {} beyond depth {depth}",
            m + 1
        )));
    }
    if k >= index_count(n) {
        return Err(Error::OutOfRange(format!("index {k} for n = {n}")));
    }
    let t = abomination_truncation(n, depth)?;
    let top = t.id(&AbominationLabel::eb(m, k)).expect("present");
    let below = t.poset.down(top);
    Ok(level_members(n, m + 1)
        .iter()
        .all(|l| below.contains(t.id(l).expect("present"))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{is_coloring, is_weak_coloring};
    use crate::reduction::alpha_mergeable;

    #[test]
    fn triples() {
        let t = triple_table(2).unwrap();
        assert_eq!(t.triples.len(), 336);
        assert_eq!(t.t(), 335);
        assert_eq!(t.triples[0], [0, 1, 2]);
        assert!(t.triples.iter().flatten().all(|&k| k <= 7));
        assert!(triple_table(1).is_err());
    }

    #[test]
    fn level_zero_shape() {
        let t = abomination_truncation(2, 0).unwrap();
        assert_eq!(t.len(), 34);
        let max: Vec<String> = t
            .poset
            .maximal_elements()
            .iter()
            .map(|&x| t.label(x).to_string())
            .collect();
        assert_eq!(max, (0..8).map(|k| format!("c0_{k}")).collect::<Vec<_>>());
        let d00 = t.id(&AbominationLabel::d(0, 0)).unwrap();
        assert_eq!(t.poset.depth(d00).unwrap(), 2);
    }

    #[test]
    fn generated_covers_are_already_reduced() {
        let t = abomination_truncation(2, 2).unwrap();
        // (i)+(ii): 4, (iii): 8*15 per lower level, (iv)-(vi): 3*8*7, plus 16 to a/b.
        let per_level = 4 + 3 * 8 * 7 + 16;
        assert_eq!(t.poset.covers().len(), 3 * per_level + 2 * 8 * 15);
    }

    #[test]
    fn a_has_every_ea_below() {
        let t = abomination_truncation(2, 1).unwrap();
        let a0 = t.id(&AbominationLabel::a(0)).unwrap();
        let lower: Vec<AbominationLabel> = t
            .poset
            .lower_covers(a0)
            .iter()
            .map(|&x| t.label(x))
            .collect();
        assert_eq!(
            lower,
            (0..8)
                .map(|k| AbominationLabel::ea(0, k))
                .collect::<Vec<_>>()
        );
    }

    #[test]
    fn ladder_shapes() {
        let y = ladder_truncation(2, 3).unwrap();
        assert_eq!(y.len(), 32);
        let y0 = ladder_truncation(0, 1).unwrap();
        let id = |s: &str| y0.id(&s.parse().unwrap()).unwrap();
        assert!(y0.poset.lt(id("y1_0"), id("y0_1")));
        assert!(y0.poset.lt(id("y1_1"), id("y0_0")));
        assert!(!y0.poset.comparable(id("y1_0"), id("y0_0")));
        let flat = ladder_truncation(3, 0).unwrap();
        assert_eq!(flat.poset.max_antichain_size(), 16);
        assert_eq!(flat.poset.covers().len(), 0);
    }

    #[test]
    fn canonical_coloring_examples() {
        for m in 0..=2 {
            let t = abomination_truncation(2, m).unwrap();
            let c = canonical_coloring(&t).unwrap();
            assert!(is_weak_coloring(&t.poset, &c));
            assert!(is_coloring(&t.poset, &c).unwrap());
            assert_eq!(c.bits(t.id(&AbominationLabel::c(0, 0)).unwrap()), "000");
            assert_eq!(c.bits(t.id(&AbominationLabel::c(0, 7)).unwrap()), "111");
            for l in t.labels() {
                if l.kind != Kind::C || l.level > 0 {
                    assert_eq!(c.color(t.id(l).unwrap()), 0);
                }
            }
        }
    }

    #[test]
    fn no_unique_upper_covers() {
        let t = abomination_truncation(2, 2).unwrap();
        for x in 0..t.len() {
            for y in 0..t.len() {
                assert!(!alpha_mergeable(&t.poset, x, y));
            }
        }
    }

    #[test]
    fn downset_claim() {
        assert!(verify_downset_claim(2, 1, 0, 0).unwrap());
        assert!(verify_downset_claim(2, 1, 0, 7).unwrap());
        for k in 0..8 {
            assert!(verify_downset_claim(2, 2, 1, k).unwrap());
        }
        assert!(verify_downset_claim(2, 1, 1, 0).is_err());
    }

    #[test]
    fn level_member_counts() {
        let l = level_members(2, 5);
        assert_eq!(l.len(), 34);
        assert_eq!(l.iter().filter(|x| x.index.is_none()).count(), 2);
        for kind in [Kind::C, Kind::D, Kind::EA, Kind::EB] {
            assert_eq!(l.iter().filter(|x| x.kind == kind).count(), 8);
        }
    }

    #[test]
    fn subspace_requires_upset() {
        let t = abomination_truncation(2, 1).unwrap();
        let d00 = t.id(&AbominationLabel::d(0, 0)).unwrap();
        let s = ElementSet::from_ids(t.len(), [d00]);
        assert!(matches!(t.subspace(&s), Err(Error::NotUpset(_))));
        let (sub, map) = t.subspace(&t.poset.up(d00).clone()).unwrap();
        assert_eq!(sub.len(), 8);
        assert_eq!(sub.label(0), t.label(map[0]));
    }
}
