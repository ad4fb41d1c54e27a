use std::ops::Deref;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset::Poset;

/// An equivalence relation on `0..n`, stored canonically: blocks are sorted
/// internally and ordered by their least member.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    block_of: Vec<usize>,
    blocks: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct PartitionJson {
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn identity(n: usize) -> Self {
        Self::from_labels(&(0..n).collect::<Vec<_>>())
    }

    pub fn full(n: usize) -> Self {
        Self::from_labels(&vec![0; n])
    }

    /// The kernel of a map given as its value table.
    pub fn from_labels<T: Eq + std::hash::Hash + Clone>(labels: &[T]) -> Self {
        let mut first: std::collections::HashMap<T, usize> = Default::default();
        let mut block_of = Vec::with_capacity(labels.len());
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (x, l) in labels.iter().enumerate() {
            let b = *first.entry(l.clone()).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[b].push(x);
            block_of.push(b);
        }
        Partition { block_of, blocks }
    }

    /// The least equivalence containing `pairs`.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut uf = UnionFind::<usize>::new(n);
        for &(x, y) in pairs {
            for id in [x, y] {
                if id >= n {
                    return Err(Error::InvalidId { id, len: n });
                }
            }
            uf.union(x, y);
        }
        Ok(Self::from_labels(&uf.into_labeling()))
    }

    /// Fails unless every id in `0..n` occurs in exactly one block.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut label = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            for &x in block {
                if x >= n {
                    return Err(Error::InvalidId { id: x, len: n });
                }
                if label[x] != usize::MAX {
                    return Err(Error::Invalid(format!("element {x} appears in two blocks")));
                }
                label[x] = b;
            }
        }
        if let Some(x) = label.iter().position(|&l| l == usize::MAX) {
            return Err(Error::Invalid(format!("element {x} is in no block")));
        }
        Ok(Self::from_labels(&label))
    }

    pub fn len(&self) -> usize {
        self.block_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block_of.is_empty()
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.block_of[x]
    }

    pub fn labels(&self) -> &[usize] {
        &self.block_of
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn same(&self, x: usize, y: usize) -> bool {
        self.block_of[x] == self.block_of[y]
    }

    pub fn is_identity(&self) -> bool {
        self.blocks.len() == self.block_of.len()
    }

    /// Every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        self.len() == other.len()
            && self
                .blocks
                .iter()
                .all(|b| b.iter().all(|&x| other.same(x, b[0])))
    }

    /// The least equivalence containing both.
    pub fn join(&self, other: &Partition) -> Partition {
        let mut uf = UnionFind::<usize>::new(self.len());
        for p in [self, other] {
            for b in &p.blocks {
                for &x in &b[1..] {
                    uf.union(b[0], x);
                }
            }
        }
        Self::from_labels(&uf.into_labeling())
    }

    /// Pairs `(x, y)` with `x < y` in the same block.
    pub fn merged_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.blocks.iter().flat_map(|b| {
            b.iter()
                .enumerate()
                .flat_map(move |(i, &x)| b[i + 1..].iter().map(move |&y| (x, y)))
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&PartitionJson {
            blocks: self.blocks.clone(),
        })
        .expect("serializable")
    }

    pub fn from_json(n: usize, s: &str) -> Result<Self> {
        let j: PartitionJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_blocks(n, &j.blocks)
    }
}

/// A partition known to satisfy the back-and-forth condition on its poset.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EPartition(Partition);

impl EPartition {
    pub fn new(p: &Poset, r: Partition) -> Result<Self> {
        if r.len() == p.len() && super::is_epartition(p, &r) {
            Ok(EPartition(r))
        } else {
            Err(Error::NotEPartition)
        }
    }

    pub(crate) fn trusted(r: Partition) -> Self {
        EPartition(r)
    }

    pub fn into_partition(self) -> Partition {
        self.0
    }
}

impl Deref for EPartition {
    type Target = Partition;

    fn deref(&self) -> &Partition {
        &self.0
    }
}
