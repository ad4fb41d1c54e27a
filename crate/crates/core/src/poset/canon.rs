//! Canonical forms by individualization and refinement.
//!
//! The ordered partition of the elements is refined by counting strict upper
//! and lower neighbours per cell until it is equitable. Non-singleton cells are
//! then split by individualizing each member in turn; every discrete leaf gives
//! a candidate order whose leq matrix is a certificate, and the least
//! certificate wins. Leaves with equal certificates yield automorphisms, which
//! prune sibling branches lying in the same orbit.

use petgraph::unionfind::UnionFind;

use super::Poset;

/// Isomorphism-invariant key: the leq matrix under a canonical ordering.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    n: usize,
    bits: Vec<u64>,
}

impl CanonicalForm {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }
}

type Cells = Vec<Vec<usize>>;

struct Search<'a> {
    p: &'a Poset,
    best: Option<(Vec<u64>, Vec<usize>)>,
    autos: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn certificate(&self, order: &[usize]) -> Vec<u64> {
        let n = order.len();
        let mut bits = vec![0u64; (n * n).div_ceil(64)];
        for (i, &x) in order.iter().enumerate() {
            for (j, &y) in order.iter().enumerate() {
                if self.p.leq(x, y) {
                    let k = i * n + j;
                    bits[k / 64] |= 1 << (k % 64);
                }
            }
        }
        bits
    }

    fn refine(&self, mut cells: Cells) -> Cells {
        let n = self.p.len();
        let mut cell_of = vec![0usize; n];
        loop {
            for (c, cell) in cells.iter().enumerate() {
                for &v in cell {
                    cell_of[v] = c;
                }
            }
            let k = cells.len();
            let mut next: Cells = Vec::with_capacity(k);
            for cell in &cells {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut keyed: Vec<(Vec<u32>, usize)> = cell
                    .iter()
                    .map(|&v| {
                        let mut sig = vec![0u32; 2 * k];
                        for w in self.p.up(v).iter() {
                            if w != v {
                                sig[2 * cell_of[w]] += 1;
                            }
                        }
                        for w in self.p.down(v).iter() {
                            if w != v {
                                sig[2 * cell_of[w] + 1] += 1;
                            }
                        }
                        (sig, v)
                    })
                    .collect();
                keyed.sort();
                let mut group = vec![keyed[0].1];
                for w in keyed.windows(2) {
                    if w[0].0 != w[1].0 {
                        next.push(std::mem::take(&mut group));
                    }
                    group.push(w[1].1);
                }
                next.push(group);
            }
            if next.len() == k {
                return next;
            }
            cells = next;
        }
    }

    fn same_orbit(&self, u: usize, v: usize, fixed: &[usize]) -> bool {
        let mut uf = UnionFind::<usize>::new(self.p.len());
        let mut any = false;
        for a in &self.autos {
            if fixed.iter().all(|&f| a[f] == f) {
                any = true;
                for (x, &y) in a.iter().enumerate() {
                    uf.union(x, y);
                }
            }
        }
        any && uf.equiv(u, v)
    }

    fn run(&mut self, cells: Cells, fixed: &mut Vec<usize>) {
        let cells = self.refine(cells);
        let Some(target) = cells.iter().position(|c| c.len() > 1) else {
            let order: Vec<usize> = cells.iter().map(|c| c[0]).collect();
            let cert = self.certificate(&order);
            match &self.best {
                Some((best, best_order)) if *best == cert => {
                    let mut sigma = vec![0; order.len()];
                    for (i, &b) in best_order.iter().enumerate() {
                        sigma[b] = order[i];
                    }
                    self.autos.push(sigma);
                }
                Some((best, _)) if *best < cert => {}
                _ => self.best = Some((cert, order)),
            }
            return;
        };
        let mut tried: Vec<usize> = Vec::new();
        for &v in &cells[target] {
            if tried.iter().any(|&u| self.same_orbit(u, v, fixed)) {
                continue;
            }
            tried.push(v);
            let mut child = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..target]);
            child.push(vec![v]);
            child.push(cells[target].iter().copied().filter(|&w| w != v).collect());
            child.extend_from_slice(&cells[target + 1..]);
            fixed.push(v);
            self.run(child, fixed);
            fixed.pop();
        }
    }
}

impl Poset {
    pub fn canonical_form(&self) -> CanonicalForm {
        self.canonical_labeling().0
    }

    /// The canonical form together with the order of ids that produces it.
    pub fn canonical_labeling(&self) -> (CanonicalForm, Vec<usize>) {
        let n = self.len();
        if n == 0 {
            return (CanonicalForm { n, bits: vec![] }, vec![]);
        }
        let mut s = Search {
            p: self,
            best: None,
            autos: Vec::new(),
        };
        s.run(vec![(0..n).collect()], &mut Vec::new());
        let (bits, order) = s.best.expect("search visits at least one leaf");
        (CanonicalForm { n, bits }, order)
    }

    pub fn isomorphic(&self, other: &Poset) -> bool {
        self.len() == other.len()
            && self.covers().len() == other.covers().len()
            && self.canonical_form() == other.canonical_form()
    }
}
