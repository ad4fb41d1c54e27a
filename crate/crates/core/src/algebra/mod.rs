//! The Heyting algebra of upsets of a finite poset.

mod term;

pub use term::{Equation, Term};

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use itertools::Itertools;

use crate::error::{Error, Result};
use crate::poset::{ElementSet, Poset};

/// Largest base poset accepted by [`UpsetAlgebra::new`].
pub const DEFAULT_MAX_BASE: usize = 20;
/// Assignment count above which [`UpsetAlgebra::validates`] refuses to run.
pub const DEFAULT_ASSIGNMENT_CAP: u128 = 10_000_000;
/// Operation tables are materialized only up to this many carrier elements.
const TABLE_LIMIT: usize = 1024;

struct Tables {
    meet: Vec<u32>,
    join: Vec<u32>,
    imp: Vec<u32>,
}

/// Carrier elements are addressed by index into [`UpsetAlgebra::carrier`];
/// index 0 is the empty upset and the last index is the full set.
pub struct UpsetAlgebra {
    base: Poset,
    carrier: Vec<ElementSet>,
    index: HashMap<ElementSet, usize>,
    tables: OnceLock<Option<Tables>>,
}

impl std::fmt::Debug for UpsetAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("UpsetAlgebra")
            .field("base_len", &self.base.len())
            .field("carrier_len", &self.carrier.len())
            .finish()
    }
}

impl UpsetAlgebra {
    pub fn new(base: &Poset) -> Result<Self> {
        Self::with_limit(base, DEFAULT_MAX_BASE)
    }

    pub fn with_limit(base: &Poset, max_base: usize) -> Result<Self> {
        if base.len() > max_base {
            return Err(Error::TooLarge(format!(
                "upset algebra of a {}-element poset (limit {max_base})",
                base.len()
            )));
        }
        let mut carrier = base.upsets();
        carrier.sort_by_cached_key(|u| (u.count(), u.to_vec()));
        let index = carrier
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, u)| (u, i))
            .collect();
        Ok(UpsetAlgebra {
            base: base.clone(),
            carrier,
            index,
            tables: OnceLock::new(),
        })
    }

    pub fn base(&self) -> &Poset {
        &self.base
    }

    pub fn carrier(&self) -> &[ElementSet] {
        &self.carrier
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    /// Never true: the carrier always holds the empty upset.
    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    pub fn zero(&self) -> usize {
        0
    }

    pub fn one(&self) -> usize {
        self.carrier.len() - 1
    }

    pub fn index_of(&self, u: &ElementSet) -> Option<usize> {
        self.index.get(u).copied()
    }

    pub fn element(&self, i: usize) -> &ElementSet {
        &self.carrier[i]
    }

    /// `U -> V`: everything not below a point of `U` outside `V`.
    pub fn implies_sets(&self, u: &ElementSet, v: &ElementSet) -> ElementSet {
        self.base.down_set(&u.difference(v)).complement()
    }

    fn tables(&self) -> Option<&Tables> {
        self.tables
            .get_or_init(|| {
                let k = self.carrier.len();
                if k > TABLE_LIMIT {
                    return None;
                }
                let mut t = Tables {
                    meet: Vec::with_capacity(k * k),
                    join: Vec::with_capacity(k * k),
                    imp: Vec::with_capacity(k * k),
                };
                for u in &self.carrier {
                    for v in &self.carrier {
                        t.meet.push(self.index[&u.intersection(v)] as u32);
                        t.join.push(self.index[&u.union(v)] as u32);
                        t.imp.push(self.index[&self.implies_sets(u, v)] as u32);
                    }
                }
                Some(t)
            })
            .as_ref()
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        match self.tables() {
            Some(t) => t.meet[a * self.len() + b] as usize,
            None => self.index[&self.carrier[a].intersection(&self.carrier[b])],
        }
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        match self.tables() {
            Some(t) => t.join[a * self.len() + b] as usize,
            None => self.index[&self.carrier[a].union(&self.carrier[b])],
        }
    }

    pub fn implies(&self, a: usize, b: usize) -> usize {
        match self.tables() {
            Some(t) => t.imp[a * self.len() + b] as usize,
            None => self.index[&self.implies_sets(&self.carrier[a], &self.carrier[b])],
        }
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.carrier[a].is_subset(&self.carrier[b])
    }

    /// Evaluates `t` with variable `i` sent to `assignment[i]`.
    pub fn evaluate(&self, t: &Term, assignment: &[ElementSet]) -> Result<ElementSet> {
        let idx = assignment
            .iter()
            .map(|u| {
                self.index_of(u)
                    .ok_or_else(|| Error::Invalid(format!("{u:?} is not an upset")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.carrier[self.evaluate_index(t, &idx)?].clone())
    }

    pub fn evaluate_index(&self, t: &Term, assignment: &[usize]) -> Result<usize> {
        Ok(match t {
            Term::Var(i) => *assignment.get(*i).ok_or(Error::UnboundVariable(*i))?,
            Term::Zero => self.zero(),
            Term::One => self.one(),
            Term::Meet(a, b) => self.meet(
                self.evaluate_index(a, assignment)?,
                self.evaluate_index(b, assignment)?,
            ),
            Term::Join(a, b) => self.join(
                self.evaluate_index(a, assignment)?,
                self.evaluate_index(b, assignment)?,
            ),
            Term::Imp(a, b) => self.implies(
                self.evaluate_index(a, assignment)?,
                self.evaluate_index(b, assignment)?,
            ),
        })
    }

    pub fn validates(&self, eq: &Equation) -> Result<bool> {
        Ok(self.counterexample(eq, DEFAULT_ASSIGNMENT_CAP)?.is_none())
    }

    /// The first assignment (in odometer order over carrier indices) on which
    /// the two sides differ.
    pub fn counterexample(&self, eq: &Equation, cap: u128) -> Result<Option<Vec<usize>>> {
        let arity = eq.arity();
        let k = self.len() as u128;
        let needed = (0..arity).try_fold(1u128, |acc, _| acc.checked_mul(k));
        match needed {
            Some(needed) if needed <= cap => {}
            other => {
                return Err(Error::TooManyAssignments {
                    needed: other.unwrap_or(u128::MAX),
                    cap,
                })
            }
        }
        for assignment in (0..arity).map(|_| 0..self.len()).multi_cartesian_product() {
            if self.evaluate_index(&eq.lhs, &assignment)?
                != self.evaluate_index(&eq.rhs, &assignment)?
            {
                return Ok(Some(assignment));
            }
        }
        if arity == 0 && self.evaluate_index(&eq.lhs, &[])? != self.evaluate_index(&eq.rhs, &[])? {
            return Ok(Some(Vec::new()));
        }
        Ok(None)
    }

    /// Subdirectly irreducible: the base poset has a least element.
    pub fn is_si(&self) -> bool {
        self.base.is_rooted()
    }

    fn close(&self, members: &mut FixedBitSet, mut queue: VecDeque<usize>) {
        let mut list: Vec<usize> = members.ones().collect();
        while let Some(a) = queue.pop_front() {
            let mut i = 0;
            while i < list.len() {
                let b = list[i];
                i += 1;
                for c in [
                    self.meet(a, b),
                    self.join(a, b),
                    self.implies(a, b),
                    self.implies(b, a),
                ] {
                    if !members.put(c) {
                        list.push(c);
                        queue.push_back(c);
                    }
                }
            }
        }
    }

    fn generated_bits(&self, gens: &[usize]) -> FixedBitSet {
        let mut members = FixedBitSet::with_capacity(self.len());
        let mut seeds = VecDeque::new();
        for &g in [self.zero(), self.one()].iter().chain(gens) {
            if !members.put(g) {
                seeds.push_back(g);
            }
        }
        self.close(&mut members, seeds);
        members
    }

    /// Carrier indices of the subalgebra generated by `gens`, ascending.
    pub fn generated_subalgebra(&self, gens: &[usize]) -> Vec<usize> {
        self.generated_bits(gens).ones().collect()
    }

    /// Least number of generators, searching subsets of size up to `cap`.
    /// `None` means no generating set of size at most `cap` exists.
    pub fn min_generators(&self, cap: usize) -> Option<usize> {
        let k = self.len();
        if self.generated_bits(&[]).count_ones(..) == k {
            return Some(0);
        }
        // Constants never help, so candidates exclude 0 and 1.
        let candidates: Vec<usize> = (1..k.saturating_sub(1)).collect();
        (1..=cap).find(|&m| {
            candidates
                .iter()
                .copied()
                .combinations(m)
                .any(|gens| self.generated_bits(&gens).count_ones(..) == k)
        })
    }

    /// Every subalgebra, as sorted carrier index lists, ordered by size then
    /// contents.
    pub fn subalgebras(&self) -> Vec<Vec<usize>> {
        let bottom = self.generated_bits(&[]);
        let mut seen: HashSet<FixedBitSet> = HashSet::new();
        seen.insert(bottom.clone());
        let mut frontier = vec![bottom];
        while let Some(s) = frontier.pop() {
            for a in 0..self.len() {
                if s.contains(a) {
                    continue;
                }
                let mut t = s.clone();
                t.insert(a);
                self.close(&mut t, VecDeque::from([a]));
                if seen.insert(t.clone()) {
                    frontier.push(t);
                }
            }
        }
        let mut out: Vec<Vec<usize>> = seen.into_iter().map(|s| s.ones().collect()).collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vee() -> Poset {
        Poset::from_covers(3, &[(0, 1), (0, 2)]).unwrap()
    }

    fn set(n: usize, ids: &[usize]) -> ElementSet {
        ElementSet::from_ids(n, ids.iter().copied())
    }

    #[test]
    fn carrier_sizes() {
        assert_eq!(UpsetAlgebra::new(&Poset::chain(1)).unwrap().len(), 2);
        assert_eq!(UpsetAlgebra::new(&Poset::chain(2)).unwrap().len(), 3);
        assert_eq!(UpsetAlgebra::new(&Poset::antichain(2)).unwrap().len(), 4);
        assert!(matches!(
            UpsetAlgebra::new(&Poset::antichain(21)),
            Err(Error::TooLarge(_))
        ));
    }

    #[test]
    fn negation_examples() {
        let a = UpsetAlgebra::new(&vee()).unwrap();
        let not = Term::not(Term::var(0));
        assert_eq!(
            a.evaluate(&not, &[set(3, &[])]).unwrap(),
            set(3, &[0, 1, 2])
        );
        assert_eq!(a.evaluate(&not, &[set(3, &[1])]).unwrap(), set(3, &[2]));
        let xx = Term::imp(Term::var(0), Term::var(0));
        for u in a.carrier() {
            assert_eq!(
                a.evaluate(&xx, std::slice::from_ref(u)).unwrap(),
                set(3, &[0, 1, 2])
            );
        }
        assert_eq!(
            a.evaluate(&Term::var(1), &[set(3, &[])]),
            Err(Error::UnboundVariable(1))
        );
    }

    #[test]
    fn weak_excluded_middle() {
        let wem = Equation::weak_excluded_middle();
        assert!(UpsetAlgebra::new(&Poset::chain(2))
            .unwrap()
            .validates(&wem)
            .unwrap());
        let v = UpsetAlgebra::new(&vee()).unwrap();
        let cex = v
            .counterexample(&wem, DEFAULT_ASSIGNMENT_CAP)
            .unwrap()
            .unwrap();
        let x = v.element(cex[0]);
        let value = v.evaluate(&wem.lhs, std::slice::from_ref(x)).unwrap();
        assert_ne!(value, set(3, &[0, 1, 2]));
        let refl: Equation = "x0 = x0".parse().unwrap();
        assert!(v.validates(&refl).unwrap());
    }

    #[test]
    fn assignment_cap_is_enforced() {
        let a = UpsetAlgebra::new(&Poset::antichain(4)).unwrap();
        let eq: Equation = "x0 & x1 & x2 = x2 & x1 & x0".parse().unwrap();
        assert!(matches!(
            a.counterexample(&eq, 100),
            Err(Error::TooManyAssignments {
                needed: 4096,
                cap: 100
            })
        ));
    }

    #[test]
    fn si_follows_root() {
        assert!(UpsetAlgebra::new(&Poset::chain(2)).unwrap().is_si());
        assert!(!UpsetAlgebra::new(&Poset::antichain(2)).unwrap().is_si());
    }

    #[test]
    fn generated_subalgebras() {
        let b4 = UpsetAlgebra::new(&Poset::antichain(2)).unwrap();
        assert_eq!(b4.generated_subalgebra(&[]).len(), 2);
        let p = b4.index_of(&set(2, &[0])).unwrap();
        assert_eq!(b4.generated_subalgebra(&[p]).len(), 4);
        let v = UpsetAlgebra::new(&vee()).unwrap();
        let a = v.index_of(&set(3, &[1])).unwrap();
        assert_eq!(v.generated_subalgebra(&[a]).len(), 5);
        let trivial = UpsetAlgebra::new(&Poset::empty()).unwrap();
        assert_eq!(trivial.generated_subalgebra(&[]).len(), 1);
    }

    #[test]
    fn min_generator_counts() {
        assert_eq!(
            UpsetAlgebra::new(&Poset::chain(1))
                .unwrap()
                .min_generators(3),
            Some(0)
        );
        assert_eq!(
            UpsetAlgebra::new(&Poset::antichain(2))
                .unwrap()
                .min_generators(3),
            Some(1)
        );
        assert_eq!(
            UpsetAlgebra::new(&Poset::chain(2))
                .unwrap()
                .min_generators(3),
            Some(1)
        );
        // The 8-element Boolean algebra needs two generators.
        assert_eq!(
            UpsetAlgebra::new(&Poset::antichain(3))
                .unwrap()
                .min_generators(3),
            Some(2)
        );
        assert_eq!(
            UpsetAlgebra::new(&Poset::antichain(3))
                .unwrap()
                .min_generators(1),
            None
        );
    }

    #[test]
    fn boolean_subalgebras_are_partitions() {
        // Subalgebras of 2^k correspond to set partitions of k atoms.
        let bell = [1, 1, 2, 5, 15];
        for (k, &b) in bell.iter().enumerate() {
            let a = UpsetAlgebra::new(&Poset::antichain(k)).unwrap();
            assert_eq!(a.subalgebras().len(), b, "k = {k}");
        }
    }
}
