//! Posets up to isomorphism, grown one maximal element at a time.
//!
//! Every poset on `k + 1` elements arises from one on `k` elements by adding a
//! new maximal element above some downset, so extending each representative in
//! all possible ways and deduplicating by canonical form is exhaustive.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{CanonicalForm, Poset};

/// `result[k]` holds one representative of every poset on `k` elements, for
/// `k <= max_n`, ordered by canonical form.
pub fn posets_up_to_iso(max_n: usize) -> Vec<Vec<Poset>> {
    let mut levels = vec![vec![Poset::empty()]];
    for _ in 0..max_n {
        let prev = levels.last().expect("nonempty");
        let extended: Vec<Vec<(CanonicalForm, Poset)>> = prev
            .par_iter()
            .map(|p| {
                let n = p.len();
                p.downsets()
                    .into_iter()
                    .map(|below| {
                        let mut pairs = p.covers();
                        pairs.extend(below.iter().map(|x| (x, n)));
                        let q = Poset::from_covers(n + 1, &pairs).expect("new element is maximal");
                        (q.canonical_form(), q)
                    })
                    .collect()
            })
            .collect();
        let mut seen: BTreeMap<CanonicalForm, Poset> = BTreeMap::new();
        for (form, q) in extended.into_iter().flatten() {
            seen.entry(form).or_insert(q);
        }
        levels.push(seen.into_values().collect());
    }
    levels
}

/// `result[k]` holds every rooted poset on `k` elements up to isomorphism.
/// A rooted poset is a bottom adjoined to an arbitrary poset one smaller.
pub fn rooted_posets_up_to_iso(max_n: usize) -> Vec<Vec<Poset>> {
    let mut out = vec![Vec::new()];
    if max_n == 0 {
        return out;
    }
    for level in posets_up_to_iso(max_n - 1) {
        out.push(level.iter().map(|p| p.with_bottom(None)).collect());
    }
    out
}
