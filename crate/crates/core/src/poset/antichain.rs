//! Maximum antichains through bipartite matching.
//!
//! A maximum matching in the strict comparability graph, split into a left and
//! a right copy of the elements, corresponds to a minimum chain cover. König's
//! construction recovers an antichain of matching size from the alternating
//! reachability set.

use super::{ElementSet, Poset};

struct Matching {
    /// `right_of[x] = Some(y)` when left copy of `x` is matched to right copy of `y`.
    right_of: Vec<Option<usize>>,
    left_of: Vec<Option<usize>>,
}

impl Poset {
    fn strict_up(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.up(x).iter().filter(move |&y| y != x)
    }

    fn max_matching(&self) -> Matching {
        let n = self.len();
        let mut m = Matching {
            right_of: vec![None; n],
            left_of: vec![None; n],
        };
        let mut seen = vec![false; n];
        for x in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            self.augment(x, &mut seen, &mut m);
        }
        m
    }

    fn augment(&self, x: usize, seen: &mut [bool], m: &mut Matching) -> bool {
        for y in self.strict_up(x) {
            if seen[y] {
                continue;
            }
            seen[y] = true;
            let free = match m.left_of[y] {
                None => true,
                Some(x2) => self.augment(x2, seen, m),
            };
            if free {
                m.left_of[y] = Some(x);
                m.right_of[x] = Some(y);
                return true;
            }
        }
        false
    }

    /// Size of a largest antichain.
    pub fn max_antichain_size(&self) -> usize {
        let m = self.max_matching();
        self.len() - m.right_of.iter().filter(|r| r.is_some()).count()
    }

    /// A largest antichain.
    pub fn max_antichain(&self) -> ElementSet {
        let n = self.len();
        let m = self.max_matching();
        let mut left_seen = vec![false; n];
        let mut right_seen = vec![false; n];
        let mut stack: Vec<usize> = (0..n).filter(|&x| m.right_of[x].is_none()).collect();
        for &x in &stack {
            left_seen[x] = true;
        }
        while let Some(x) = stack.pop() {
            for y in self.strict_up(x) {
                if right_seen[y] || m.right_of[x] == Some(y) {
                    continue;
                }
                right_seen[y] = true;
                if let Some(x2) = m.left_of[y] {
                    if !left_seen[x2] {
                        left_seen[x2] = true;
                        stack.push(x2);
                    }
                }
            }
        }
        // The minimum vertex cover is (left unseen) plus (right seen); the
        // elements with neither copy in it are pairwise incomparable.
        ElementSet::from_ids(n, (0..n).filter(|&x| left_seen[x] && !right_seen[x]))
    }
}
