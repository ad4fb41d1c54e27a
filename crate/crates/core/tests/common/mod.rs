//! Strategies and brute-force oracles shared by the integration tests. The
//! oracles work from definitions and avoid the library's own predicates.
#![allow(dead_code)]

use esakia_core::coloring::Coloring;
use esakia_core::reduction::Partition;
use esakia_core::Poset;
use proptest::prelude::*;

/// Builds a poset from a flag per pair `i < j` (relation `i < j` if set).
pub fn poset_from_flags(n: usize, flags: &[bool]) -> Poset {
    let mut pairs = Vec::new();
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            if flags[k] {
                pairs.push((i, j));
            }
            k += 1;
        }
    }
    Poset::from_covers(n, &pairs).unwrap()
}

pub fn arb_poset(min: usize, max: usize) -> impl Strategy<Value = Poset> {
    (min..=max).prop_flat_map(|n| {
        proptest::collection::vec(proptest::bool::weighted(0.3), n * n.saturating_sub(1) / 2)
            .prop_map(move |flags| poset_from_flags(n, &flags))
    })
}

/// A poset with a weak coloring over `bits` bits, drawn from `seed`.
pub fn arb_colored(max: usize, bits: usize) -> impl Strategy<Value = (Poset, Coloring)> {
    (arb_poset(1, max), any::<u64>(), 0..=bits).prop_map(|(p, seed, b)| {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let c = esakia_core::coloring::random_weak_coloring(&p, b, &mut rng).unwrap();
        (p, c)
    })
}

pub fn brute_max_antichain(p: &Poset) -> usize {
    let n = p.len();
    (0u32..1 << n)
        .filter(|&s| {
            (0..n).all(|x| {
                s >> x & 1 == 0 || (0..n).all(|y| y == x || s >> y & 1 == 0 || !p.leq(x, y))
            })
        })
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

pub fn brute_upsets(p: &Poset) -> Vec<u32> {
    let n = p.len();
    (0u32..1 << n)
        .filter(|&s| {
            (0..n).all(|x| s >> x & 1 == 0 || (0..n).all(|y| !p.leq(x, y) || s >> y & 1 == 1))
        })
        .collect()
}

/// Every set partition of `0..n` as a label vector.
pub fn all_label_vectors(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0; n];
    fn rec(i: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for l in 0..=max {
            cur[i] = l;
            rec(i + 1, max.max(l + 1), cur, out);
        }
    }
    if n == 0 {
        return vec![vec![]];
    }
    rec(1, 1, &mut cur, &mut out);
    out
}

/// Back-and-forth condition: related elements see the same classes above them.
pub fn oracle_is_epartition(p: &Poset, labels: &[usize]) -> bool {
    let n = p.len();
    (0..n).all(|x| {
        (0..n).filter(|&y| labels[y] == labels[x]).all(|y| {
            (0..n)
                .filter(|&z| p.leq(x, z))
                .all(|z| (0..n).any(|w| p.leq(y, w) && labels[w] == labels[z]))
        })
    })
}

pub fn monochromatic(c: &Coloring, labels: &[usize]) -> bool {
    (0..labels.len())
        .all(|x| (0..labels.len()).all(|y| labels[x] != labels[y] || c.color(x) == c.color(y)))
}

/// The greatest color-respecting E-partition, found by exhaustive search.
pub fn oracle_coarsest(p: &Poset, c: &Coloring) -> Partition {
    let candidates: Vec<Vec<usize>> = all_label_vectors(p.len())
        .into_iter()
        .filter(|l| monochromatic(c, l) && oracle_is_epartition(p, l))
        .collect();
    let best = candidates
        .iter()
        .min_by_key(|l| l.iter().max().map_or(0, |m| m + 1))
        .unwrap();
    let best = Partition::from_labels(best);
    for l in &candidates {
        assert!(
            Partition::from_labels(l).refines(&best),
            "no greatest element"
        );
    }
    best
}

/// Order-preserving maps into `C_bits`, by exhaustive enumeration.
pub fn oracle_weak_colorings(p: &Poset, bits: usize) -> Vec<Coloring> {
    let n = p.len();
    let k = 1usize << bits;
    let mut out = Vec::new();
    let total = k.pow(n as u32);
    for code in 0..total {
        let colors: Vec<u32> = (0..n)
            .map(|x| (code / k.pow(x as u32) % k) as u32)
            .collect();
        let ok = (0..n).all(|x| (0..n).all(|y| !p.leq(x, y) || colors[x] & !colors[y] == 0));
        if ok {
            out.push(Coloring::new(bits, colors).unwrap());
        }
    }
    out
}

/// Strict: no nontrivial monochromatic E-partition.
pub fn oracle_is_strict(p: &Poset, c: &Coloring) -> bool {
    oracle_coarsest(p, c).is_identity()
}

/// A random permutation of `0..n` from `seed`.
pub fn permutation(n: usize, seed: u64) -> Vec<usize> {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
    perm
}
