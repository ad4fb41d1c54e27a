//! Colors, weak colorings and strict colorings.
//!
//! A color in `C_n` is an `n`-bit mask; `a ⊑ b` iff every bit of `a` is set in
//! `b`. Bitstrings are written most significant bit first, so color `k` prints
//! as the binary expansion of `k`.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset::Poset;
use crate::reduction::mergeable_pairs;

/// Widest palette supported.
pub const MAX_BITS: usize = 31;
/// Default node budget for [`is_n_colorable`].
pub const DEFAULT_BUDGET: u64 = 5_000_000;

#[inline]
pub fn color_leq(a: u32, b: u32) -> bool {
    a & !b == 0
}

fn full_mask(n: usize) -> u32 {
    if n == 0 {
        0
    } else {
        u32::MAX >> (32 - n)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coloring {
    n: usize,
    colors: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct ColoringJson {
    n: usize,
    colors: BTreeMap<usize, String>,
}

impl Coloring {
    pub fn new(n: usize, colors: Vec<u32>) -> Result<Self> {
        if n > MAX_BITS {
            return Err(Error::OutOfRange(format!(
                "{n} color bits (max {MAX_BITS})"
            )));
        }
        if let Some((x, &c)) = colors
            .iter()
            .enumerate()
            .find(|(_, &c)| c & !full_mask(n) != 0)
        {
            return Err(Error::OutOfRange(format!(
                "color {c} of element {x} has more than {n} bits"
            )));
        }
        Ok(Coloring { n, colors })
    }

    pub fn constant(n: usize, len: usize, color: u32) -> Result<Self> {
        Self::new(n, vec![color; len])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn color(&self, x: usize) -> u32 {
        self.colors[x]
    }

    pub fn bits(&self, x: usize) -> String {
        (0..self.n)
            .rev()
            .map(|b| {
                if self.colors[x] >> b & 1 == 1 {
                    '1'
                } else {
                    '0'
                }
            })
            .collect()
    }

    /// The same colors read in a palette with `extra` more leading bits.
    pub fn pad(&self, extra: usize) -> Result<Coloring> {
        Coloring::new(self.n + extra, self.colors.clone())
    }

    /// Colors of the listed elements, in order.
    pub fn restrict(&self, ids: &[usize]) -> Coloring {
        Coloring {
            n: self.n,
            colors: ids.iter().map(|&x| self.colors[x]).collect(),
        }
    }

    /// Fails unless this is an order-preserving map on `p`.
    pub fn check_weak(&self, p: &Poset) -> Result<()> {
        if self.len() != p.len() {
            return Err(Error::NotWeakColoring(format!(
                "{} colors for {} elements",
                self.len(),
                p.len()
            )));
        }
        for (x, y) in p.covers() {
            if !color_leq(self.colors[x], self.colors[y]) {
                return Err(Error::NotWeakColoring(format!(
                    "{x} < {y} but {} is not below {}",
                    self.bits(x),
                    self.bits(y)
                )));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let j = ColoringJson {
            n: self.n,
            colors: (0..self.len()).map(|x| (x, self.bits(x))).collect(),
        };
        serde_json::to_string(&j).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: ColoringJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let len = j.colors.keys().next_back().map_or(0, |m| m + 1);
        if j.colors.len() != len {
            return Err(Error::Parse(
                "coloring must list ids 0..len without gaps".into(),
            ));
        }
        let colors = j
            .colors
            .values()
            .map(|b| {
                if b.len() != j.n || !b.bytes().all(|c| c == b'0' || c == b'1') {
                    return Err(Error::Parse(format!("bad bitstring {b:?} for n = {}", j.n)));
                }
                Ok(b.bytes()
                    .fold(0u32, |acc, c| acc << 1 | u32::from(c == b'1')))
            })
            .collect::<Result<Vec<_>>>()?;
        Coloring::new(j.n, colors)
    }
}

/// `C_n`: element ids are the masks themselves.
pub fn color_poset(n: usize) -> Result<Poset> {
    if n > 20 {
        return Err(Error::OutOfRange(format!("color poset with {n} bits")));
    }
    let size = 1usize << n;
    let pairs: Vec<(usize, usize)> = (0..size)
        .flat_map(|m| {
            (0..n)
                .filter(move |b| m >> b & 1 == 0)
                .map(move |b| (m, m | 1 << b))
        })
        .collect();
    Poset::from_covers(size, &pairs)
}

pub fn is_weak_coloring(p: &Poset, c: &Coloring) -> bool {
    c.check_weak(p).is_ok()
}

/// A weak coloring is strict iff no same-colored pair admits an α- or
/// β-step.
pub fn is_coloring(p: &Poset, c: &Coloring) -> Result<bool> {
    c.check_weak(p)?;
    Ok(first_violation(p, c).is_none())
}

/// The least same-colored mergeable pair, if any.
pub fn first_violation(p: &Poset, c: &Coloring) -> Option<(usize, usize)> {
    mergeable_pairs(p, Some(c.colors()))
        .first()
        .map(|&(_, x, y)| (x, y))
}

struct Search<'a> {
    p: &'a Poset,
    n: usize,
    order: Vec<usize>,
    /// Earlier elements (in visiting order) with the same upper covers.
    siblings_before: Vec<Vec<usize>>,
    /// Later elements with the same upper covers.
    siblings_after: Vec<usize>,
    colors: Vec<u32>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn bound(&self, x: usize) -> u32 {
        self.p
            .upper_covers(x)
            .iter()
            .fold(full_mask(self.n), |acc, &y| acc & self.colors[y])
    }

    fn run(&mut self, i: usize) -> Result<bool> {
        if i == self.order.len() {
            return Ok(true);
        }
        let x = self.order[i];
        let bound = self.bound(x);
        let alpha = match self.p.upper_covers(x) {
            [y] => Some(self.colors[*y]),
            _ => None,
        };
        let taken: Vec<u32> = self.siblings_before[x]
            .iter()
            .map(|&s| self.colors[s])
            .collect();
        // Siblings need pairwise distinct colors below the same bound.
        let room = (1u64 << bound.count_ones()) - taken.len() as u64 - u64::from(alpha.is_some());
        if room < 1 + self.siblings_after[x] as u64 {
            return Ok(false);
        }
        // Submasks of `bound` in increasing numeric order.
        let mut sub = 0u32;
        loop {
            if Some(sub) != alpha && !taken.contains(&sub) {
                self.nodes += 1;
                if self.nodes > self.budget {
                    return Err(Error::BudgetExceeded(self.budget));
                }
                self.colors[x] = sub;
                if self.run(i + 1)? {
                    return Ok(true);
                }
            }
            if sub == bound {
                break;
            }
            sub = (sub.wrapping_sub(bound)) & bound;
        }
        Ok(false)
    }
}

/// Searches for an `n`-coloring of `p`, visiting elements top-down in
/// (depth, id) order and colors in increasing numeric order, so the witness
/// is the least one in that order. `Ok(None)` means none exists.
pub fn is_n_colorable(p: &Poset, n: usize, budget: u64) -> Result<Option<Coloring>> {
    if n > MAX_BITS {
        return Err(Error::OutOfRange(format!(
            "{n} color bits (max {MAX_BITS})"
        )));
    }
    let order = p.top_down_order();
    let mut siblings_before = vec![Vec::new(); p.len()];
    let mut siblings_after = vec![0; p.len()];
    let mut groups: std::collections::HashMap<&[usize], Vec<usize>> = Default::default();
    for &x in &order {
        let g = groups.entry(p.upper_covers(x)).or_default();
        siblings_before[x] = g.clone();
        g.push(x);
    }
    for g in groups.values() {
        for (i, &x) in g.iter().enumerate() {
            siblings_after[x] = g.len() - 1 - i;
        }
    }
    let mut s = Search {
        p,
        n,
        order,
        siblings_before,
        siblings_after,
        colors: vec![0; p.len()],
        nodes: 0,
        budget,
    };
    if s.run(0)? {
        Ok(Some(Coloring {
            n,
            colors: s.colors,
        }))
    } else {
        Ok(None)
    }
}

/// Recolors `↑x`: elements sharing the color of `x` become `0`, the rest keep
/// their color. Returns the subposet, its id map into `p`, and the coloring.
pub fn promote_subspace_coloring(
    p: &Poset,
    f: &Coloring,
    x: usize,
) -> Result<(Poset, Vec<usize>, Coloring)> {
    p.check_id(x)?;
    if !is_coloring(p, f).map_err(|e| Error::NotColoring(e.to_string()))? {
        return Err(Error::NotColoring(
            "a same-colored pair is mergeable".into(),
        ));
    }
    let c = f.color(x);
    let (sub, ids) = p.induced(p.up(x));
    let colors = ids
        .iter()
        .map(|&y| if f.color(y) == c { 0 } else { f.color(y) })
        .collect();
    Ok((sub, ids, Coloring { n: f.n, colors }))
}

/// A random weak coloring drawn top-down: each element takes the meet of its
/// upper covers' colors with probability 1/2, otherwise a uniform submask of
/// it.
pub fn random_weak_coloring<R: Rng>(p: &Poset, n: usize, rng: &mut R) -> Result<Coloring> {
    if n > MAX_BITS {
        return Err(Error::OutOfRange(format!(
            "{n} color bits (max {MAX_BITS})"
        )));
    }
    let mut colors = vec![0u32; p.len()];
    for x in p.top_down_order() {
        let bound = p
            .upper_covers(x)
            .iter()
            .fold(full_mask(n), |acc, &y| acc & colors[y]);
        colors[x] = if rng.gen_bool(0.5) {
            bound
        } else {
            rng.gen::<u32>() & bound
        };
    }
    Ok(Coloring { n, colors })
}

/// Calls `visit` on every weak `n`-coloring of `p`, in lexicographic order of
/// the top-down color sequence. Stops with `BudgetExceeded` after `budget`
/// colorings.
pub fn for_each_weak_coloring(
    p: &Poset,
    n: usize,
    budget: u64,
    mut visit: impl FnMut(&Coloring),
) -> Result<u64> {
    if n > MAX_BITS {
        return Err(Error::OutOfRange(format!(
            "{n} color bits (max {MAX_BITS})"
        )));
    }
    let order = p.top_down_order();
    let mut c = Coloring {
        n,
        colors: vec![0; p.len()],
    };
    let mut count = 0u64;
    fn rec(
        p: &Poset,
        order: &[usize],
        i: usize,
        c: &mut Coloring,
        count: &mut u64,
        budget: u64,
        visit: &mut dyn FnMut(&Coloring),
    ) -> Result<()> {
        if i == order.len() {
            *count += 1;
            if *count > budget {
                return Err(Error::BudgetExceeded(budget));
            }
            visit(c);
            return Ok(());
        }
        let x = order[i];
        let bound = p
            .upper_covers(x)
            .iter()
            .fold(full_mask(c.n), |acc, &y| acc & c.colors[y]);
        let mut sub = 0u32;
        loop {
            c.colors[x] = sub;
            rec(p, order, i + 1, c, count, budget, visit)?;
            if sub == bound {
                break;
            }
            sub = (sub.wrapping_sub(bound)) & bound;
        }
        Ok(())
    }
    rec(p, &order, 0, &mut c, &mut count, budget, &mut visit)?;
    Ok(count)
}
