//! Finite posets with cached reachability.
//!
//! Elements are dense ids `0..n`. The order is given by its cover relation and
//! every element keeps its principal upset and downset as bitset rows, so
//! comparability tests are constant time and upset closures are word-parallel.

mod antichain;
mod canon;
mod enumerate;
mod io;
mod set;

pub use canon::CanonicalForm;
pub use enumerate::{posets_up_to_iso, rooted_posets_up_to_iso};
pub use io::PosetJson;
pub use set::ElementSet;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    labels: Vec<Option<String>>,
    /// Immediate successors, sorted.
    upper: Vec<Vec<usize>>,
    /// Immediate predecessors, sorted.
    lower: Vec<Vec<usize>>,
    /// `up[x] = { y : x <= y }`.
    up: Vec<ElementSet>,
    /// `down[x] = { y : y <= x }`.
    down: Vec<ElementSet>,
    /// Number of elements in the longest chain of `up[x]`.
    depth: Vec<usize>,
}

impl Poset {
    /// Builds a poset from pairs `(x, y)` meaning `x < y`.
    ///
    /// Redundant pairs are dropped: the stored covers are the transitive
    /// reduction of the input.
    pub fn from_covers(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut succ = vec![Vec::new(); n];
        for &(x, y) in pairs {
            for id in [x, y] {
                if id >= n {
                    return Err(Error::InvalidId { id, len: n });
                }
            }
            if x == y {
                return Err(Error::CycleDetected(x));
            }
            succ[x].push(y);
        }
        for s in &mut succ {
            s.sort_unstable();
            s.dedup();
        }

        // Kahn's algorithm from the maximal elements downwards.
        let mut out_degree: Vec<usize> = succ.iter().map(Vec::len).collect();
        let mut pred = vec![Vec::new(); n];
        for (x, s) in succ.iter().enumerate() {
            for &y in s {
                pred[y].push(x);
            }
        }
        let mut order = Vec::with_capacity(n);
        let mut stack: Vec<usize> = (0..n).filter(|&x| out_degree[x] == 0).collect();
        while let Some(y) = stack.pop() {
            order.push(y);
            for &x in &pred[y] {
                out_degree[x] -= 1;
                if out_degree[x] == 0 {
                    stack.push(x);
                }
            }
        }
        if order.len() < n {
            let stuck = (0..n).find(|&x| out_degree[x] > 0).unwrap_or(0);
            return Err(Error::CycleDetected(stuck));
        }

        // `order` lists every element after all of its successors.
        let mut up = vec![ElementSet::new(n); n];
        for &x in &order {
            let mut row = ElementSet::new(n);
            row.insert(x);
            for &y in &succ[x] {
                row.union_with(&up[y]);
            }
            up[x] = row;
        }

        let mut upper = vec![Vec::new(); n];
        for x in 0..n {
            let mut strict = up[x].clone();
            strict.remove(x);
            let mut above_strict = ElementSet::new(n);
            for &y in &succ[x] {
                let mut s = up[y].clone();
                s.remove(y);
                above_strict.union_with(&s);
            }
            strict.difference_with(&above_strict);
            upper[x] = strict.iter().collect();
        }

        Ok(Self::assemble(vec![None; n], upper, up, &order))
    }

    fn assemble(
        labels: Vec<Option<String>>,
        upper: Vec<Vec<usize>>,
        up: Vec<ElementSet>,
        top_down: &[usize],
    ) -> Self {
        let n = up.len();
        let mut lower = vec![Vec::new(); n];
        for (x, ys) in upper.iter().enumerate() {
            for &y in ys {
                lower[y].push(x);
            }
        }
        let mut down = vec![ElementSet::new(n); n];
        for (x, row) in up.iter().enumerate() {
            for y in row.iter() {
                down[y].insert(x);
            }
        }
        let mut depth = vec![1; n];
        for &x in top_down {
            depth[x] = 1 + upper[x].iter().map(|&y| depth[y]).max().unwrap_or(0);
        }
        Poset {
            labels,
            upper,
            lower,
            up,
            down,
            depth,
        }
    }

    pub fn chain(n: usize) -> Self {
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_covers(n, &pairs).expect("chain is acyclic")
    }

    pub fn antichain(n: usize) -> Self {
        Self::from_covers(n, &[]).expect("no covers")
    }

    pub fn empty() -> Self {
        Self::antichain(0)
    }

    pub fn with_labels(mut self, labels: Vec<Option<String>>) -> Result<Self> {
        if labels.len() != self.len() {
            return Err(Error::Invalid(format!(
                "{} labels for {} elements",
                labels.len(),
                self.len()
            )));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.up.len()
    }

    pub fn is_empty(&self) -> bool {
        self.up.is_empty()
    }

    pub fn label(&self, x: usize) -> Option<&str> {
        self.labels.get(x).and_then(|l| l.as_deref())
    }

    pub fn labels(&self) -> &[Option<String>] {
        &self.labels
    }

    pub fn check_id(&self, x: usize) -> Result<()> {
        if x < self.len() {
            Ok(())
        } else {
            Err(Error::InvalidId {
                id: x,
                len: self.len(),
            })
        }
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    #[inline]
    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    /// Principal upset `↑x`.
    pub fn up(&self, x: usize) -> &ElementSet {
        &self.up[x]
    }

    /// Principal downset `↓x`.
    pub fn down(&self, x: usize) -> &ElementSet {
        &self.down[x]
    }

    pub fn upper_covers(&self, x: usize) -> &[usize] {
        &self.upper[x]
    }

    pub fn lower_covers(&self, x: usize) -> &[usize] {
        &self.lower[x]
    }

    pub fn covers(&self) -> Vec<(usize, usize)> {
        self.upper
            .iter()
            .enumerate()
            .flat_map(|(x, ys)| ys.iter().map(move |&y| (x, y)))
            .collect()
    }

    pub fn full_set(&self) -> ElementSet {
        ElementSet::full(self.len())
    }

    pub fn empty_set(&self) -> ElementSet {
        ElementSet::new(self.len())
    }

    pub fn up_set(&self, s: &ElementSet) -> ElementSet {
        let mut out = self.empty_set();
        for x in s.iter() {
            out.union_with(&self.up[x]);
        }
        out
    }

    pub fn down_set(&self, s: &ElementSet) -> ElementSet {
        let mut out = self.empty_set();
        for x in s.iter() {
            out.union_with(&self.down[x]);
        }
        out
    }

    pub fn is_upset(&self, s: &ElementSet) -> bool {
        s.iter().all(|x| self.up[x].is_subset(s))
    }

    pub fn is_downset(&self, s: &ElementSet) -> bool {
        s.iter().all(|x| self.down[x].is_subset(s))
    }

    pub fn is_antichain(&self, s: &ElementSet) -> bool {
        let members: Vec<usize> = s.iter().collect();
        members
            .iter()
            .enumerate()
            .all(|(i, &x)| members[i + 1..].iter().all(|&y| !self.comparable(x, y)))
    }

    /// Length of the longest chain in `↑x`.
    pub fn depth(&self, x: usize) -> Result<usize> {
        self.check_id(x)?;
        Ok(self.depth[x])
    }

    pub fn depths(&self) -> &[usize] {
        &self.depth
    }

    /// Size of the longest chain.
    pub fn height(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&x| self.upper[x].is_empty())
            .collect()
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&x| self.lower[x].is_empty())
            .collect()
    }

    /// The least element, if there is one.
    pub fn root(&self) -> Option<usize> {
        let n = self.len();
        (0..n).find(|&x| self.up[x].count() == n)
    }

    pub fn is_rooted(&self) -> bool {
        self.root().is_some()
    }

    /// Ids in a linear extension listing every element after its successors.
    pub fn top_down_order(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = (0..self.len()).collect();
        ids.sort_by_key(|&x| (self.depth[x], x));
        ids
    }

    /// The subposet induced on `s`, with ids renumbered in increasing order.
    /// Returns the subposet and the map from new ids to old ids.
    pub fn induced(&self, s: &ElementSet) -> (Poset, Vec<usize>) {
        let old: Vec<usize> = s.iter().collect();
        let mut new_of = vec![usize::MAX; self.len()];
        for (i, &x) in old.iter().enumerate() {
            new_of[x] = i;
        }
        let mut pairs = Vec::new();
        if self.is_upset(s) {
            for (i, &x) in old.iter().enumerate() {
                for &y in &self.upper[x] {
                    pairs.push((i, new_of[y]));
                }
            }
        } else {
            for (i, &x) in old.iter().enumerate() {
                for y in self.up[x].iter() {
                    if y != x && s.contains(y) {
                        pairs.push((i, new_of[y]));
                    }
                }
            }
        }
        let labels = old.iter().map(|&x| self.labels[x].clone()).collect();
        let sub = Poset::from_covers(old.len(), &pairs)
            .expect("subposet of a poset is acyclic")
            .with_labels(labels)
            .expect("label count matches");
        (sub, old)
    }

    /// Adjoins a new least element with id `len()`.
    pub fn with_bottom(&self, label: Option<String>) -> Poset {
        let n = self.len();
        let mut pairs = self.covers();
        pairs.extend(self.minimal_elements().into_iter().map(|m| (n, m)));
        let mut labels = self.labels.clone();
        labels.push(label);
        Poset::from_covers(n + 1, &pairs)
            .expect("adding a bottom keeps the order acyclic")
            .with_labels(labels)
            .expect("label count matches")
    }

    /// Renames element `x` to `perm[x]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Poset> {
        let n = self.len();
        let mut seen = vec![false; n];
        if perm.len() != n {
            return Err(Error::Invalid("permutation length mismatch".into()));
        }
        for &p in perm {
            if p >= n || seen[p] {
                return Err(Error::Invalid("not a permutation".into()));
            }
            seen[p] = true;
        }
        let pairs: Vec<_> = self
            .covers()
            .into_iter()
            .map(|(x, y)| (perm[x], perm[y]))
            .collect();
        let mut labels = vec![None; n];
        for (x, l) in self.labels.iter().enumerate() {
            labels[perm[x]] = l.clone();
        }
        Poset::from_covers(n, &pairs)?.with_labels(labels)
    }

    /// Every antichain, found by depth-first extension in id order.
    pub fn antichains(&self) -> Vec<ElementSet> {
        let mut out = Vec::new();
        let mut current = self.empty_set();
        let blocked = self.empty_set();
        self.extend_antichains(0, &mut current, &blocked, &mut out);
        out
    }

    fn extend_antichains(
        &self,
        start: usize,
        current: &mut ElementSet,
        blocked: &ElementSet,
        out: &mut Vec<ElementSet>,
    ) {
        out.push(current.clone());
        for x in start..self.len() {
            if blocked.contains(x) {
                continue;
            }
            current.insert(x);
            let mut next = blocked.clone();
            next.union_with(&self.up[x]);
            next.union_with(&self.down[x]);
            self.extend_antichains(x + 1, current, &next, out);
            current.remove(x);
        }
    }

    /// Every upset, as `↑A` over the antichains `A`.
    pub fn upsets(&self) -> Vec<ElementSet> {
        self.antichains().iter().map(|a| self.up_set(a)).collect()
    }

    /// Every downset, as `↓A` over the antichains `A`.
    pub fn downsets(&self) -> Vec<ElementSet> {
        self.antichains().iter().map(|a| self.down_set(a)).collect()
    }

    /// Maximum width of a principal upset; 0 for the empty poset.
    pub fn width(&self) -> usize {
        (0..self.len())
            .map(|x| self.induced(&self.up[x]).0.max_antichain_size())
            .max()
            .unwrap_or(0)
    }
}
