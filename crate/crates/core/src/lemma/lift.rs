use std::collections::BTreeMap;

use serde::Serialize;

use super::{level_merged_pair, schedule_beta_reductions, Schedule};
use crate::abomination::{ladder_truncation, AbominationLabel, Kind, LabeledPoset};
use crate::coloring::{is_coloring, is_n_colorable, Coloring};
use crate::error::{Error, Result};
use crate::reduction::{
    coarsest_color_respecting, quotient, EPartition, Partition, Reducer, ReductionStep, StepKind,
};

/// `y_{3r,i} -> c_{r,i}`, `y_{3r+1,i} -> d_{r,i}`, `y_{3r+2,i} -> e^a_{r,i}`.
pub fn delta_label(l: AbominationLabel) -> Result<AbominationLabel> {
    let (Kind::Y, Some(i)) = (l.kind, l.index) else {
        return Err(Error::Invalid(format!("{l} is not a ladder element")));
    };
    let kind = [Kind::C, Kind::D, Kind::EA][l.level % 3];
    Ok(AbominationLabel::indexed(kind, l.level / 3, i))
}

/// The embedding of a ladder truncation into an abomination subspace.
#[derive(Clone, Debug)]
pub struct DeltaMap {
    pub ladder: LabeledPoset,
    /// Ladder id to abomination id.
    pub map: Vec<usize>,
}

impl DeltaMap {
    /// Maps ladder levels `0..=ladder_depth` into `z` and checks that the
    /// result is an order embedding.
    pub fn new(z: &LabeledPoset, ladder_depth: usize) -> Result<DeltaMap> {
        let ladder = ladder_truncation(z.n, ladder_depth)?;
        let map = ladder
            .labels()
            .iter()
            .map(|&l| {
                let target = delta_label(l)?;
                z.id(&target)
                    .ok_or_else(|| Error::EmbeddingMismatch(format!("{target} is missing")))
            })
            .collect::<Result<Vec<_>>>()?;
        let delta = DeltaMap { ladder, map };
        delta.check_embedding(z)?;
        Ok(delta)
    }

    /// The map used for `z`: ladder levels up to `3m`, where `m` is the
    /// deepest full c-level. `None` when `z` has no full c-level.
    pub fn for_subspace(z: &LabeledPoset) -> Result<Option<DeltaMap>> {
        match z.full_levels(Kind::C).last() {
            Some(&m) => DeltaMap::new(z, 3 * m).map(Some),
            None => Ok(None),
        }
    }

    /// Compares the order on every pair of ladder elements with the order on
    /// their images.
    pub fn check_embedding(&self, z: &LabeledPoset) -> Result<()> {
        let p = &self.ladder.poset;
        for x in 0..p.len() {
            for y in 0..p.len() {
                if p.leq(x, y) != z.poset.leq(self.map[x], self.map[y]) {
                    return Err(Error::EmbeddingMismatch(format!(
                        "order between {} and {} is not preserved",
                        self.ladder.label(x),
                        self.ladder.label(y)
                    )));
                }
            }
        }
        Ok(())
    }

    /// The coloring `f ∘ δ` of the ladder.
    pub fn pull_back(&self, f: &Coloring) -> Coloring {
        f.restrict(&self.map)
    }
}

/// Lifted steps on `z` and one merged c-pair per full c-level.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub levels: BTreeMap<usize, (usize, usize)>,
    pub steps: Vec<ReductionStep>,
    pub kernel: EPartition,
}

#[derive(Serialize)]
struct CertificateJson<'a> {
    levels: BTreeMap<String, [usize; 2]>,
    steps: &'a [ReductionStep],
}

impl Certificate {
    pub fn to_json(&self) -> String {
        let levels = self
            .levels
            .iter()
            .map(|(p, &(i, j))| (p.to_string(), [i, j]))
            .collect();
        serde_json::to_string(&CertificateJson {
            levels,
            steps: &self.steps,
        })
        .expect("serializable")
    }
}

/// Replays a ladder schedule on `z` through `delta`, re-checking every step.
pub fn lift_schedule(
    z: &LabeledPoset,
    f: &Coloring,
    delta: &DeltaMap,
    s: &Schedule,
) -> Result<Certificate> {
    f.check_weak(&z.poset)?;
    delta.check_embedding(z)?;
    let mut red = Reducer::new(&z.poset);
    for step in &s.steps {
        let (a, b) = step.source_pair;
        let (x, y) = (delta.map[a], delta.map[b]);
        match red.apply_source(StepKind::Beta, x, y) {
            Ok(_) => {}
            Err(Error::NotMergeable(..)) => {
                return Err(Error::Falsified(format!(
                    "lifted step {} ~ {} is not a β-step in the subspace",
                    z.label(x),
                    z.label(y)
                )))
            }
            Err(e) => return Err(e),
        }
    }
    let r = red.finish();
    for block in r.kernel.blocks() {
        if block.iter().any(|&x| f.color(x) != f.color(block[0])) {
            return Err(Error::Falsified(format!(
                "lifted kernel merges colors at {}",
                z.label(block[0])
            )));
        }
    }
    let mut levels = BTreeMap::new();
    for p in z.full_levels(Kind::C) {
        match level_merged_pair(z, &r.kernel, Kind::C, p) {
            Some(pair) => {
                levels.insert(p, pair);
            }
            None => {
                return Err(Error::Falsified(format!(
                    "full c-level {p} has no merged pair after lifting"
                )))
            }
        }
    }
    let coarsest = coarsest_color_respecting(&z.poset, f)?;
    if !r.kernel.refines(&coarsest) {
        return Err(Error::Falsified(
            "lifted kernel is not inside the coarsest color-respecting partition".into(),
        ));
    }
    Ok(Certificate {
        levels,
        steps: r.steps,
        kernel: r.kernel,
    })
}

/// Builds the embedding and the ladder schedule for `z` and lifts it.
pub fn certify(z: &LabeledPoset, f: &Coloring) -> Result<Certificate> {
    let Some(delta) = DeltaMap::for_subspace(z)? else {
        f.check_weak(&z.poset)?;
        return Ok(Certificate {
            levels: BTreeMap::new(),
            steps: Vec::new(),
            kernel: EPartition::new(&z.poset, Partition::identity(z.len()))?,
        });
    };
    let s = schedule_beta_reductions(&delta.ladder, &delta.pull_back(f))?;
    lift_schedule(z, f, &delta, &s)
}

/// Whether every full c-level of `z` has a pair merged by `r`, given that
/// `z / r` is n-colorable. A `witness` coloring of the quotient is checked;
/// otherwise one is searched for within `budget`.
pub fn corollary_check(
    z: &LabeledPoset,
    r: &Partition,
    n: usize,
    witness: Option<&Coloring>,
    budget: u64,
) -> Result<bool> {
    let (q, _) = quotient(&z.poset, r)?;
    match witness {
        Some(w) => {
            if w.n() > n || w.len() != q.len() || !is_coloring(&q, w)? {
                return Err(Error::NotColoring(format!(
                    "witness is not a {n}-coloring of the quotient"
                )));
            }
        }
        None => {
            if is_n_colorable(&q, n, budget)?.is_none() {
                return Err(Error::QuotientNotColorable(n));
            }
        }
    }
    let kernel = EPartition::new(&z.poset, r.clone())?;
    Ok(z.full_levels(Kind::C)
        .into_iter()
        .all(|p| level_merged_pair(z, &kernel, Kind::C, p).is_some()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abomination::abomination_truncation;
    use crate::coloring::random_weak_coloring;
    use crate::poset::ElementSet;
    use crate::reduction::coarsest_reduction;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn delta_labels() {
        let d = |q, i| delta_label(AbominationLabel::y(q, i)).unwrap();
        assert_eq!(d(0, 3), AbominationLabel::c(0, 3));
        assert_eq!(d(1, 3), AbominationLabel::d(0, 3));
        assert_eq!(d(2, 3), AbominationLabel::ea(0, 3));
        assert_eq!(d(6, 1), AbominationLabel::c(2, 1));
        assert!(delta_label(AbominationLabel::a(0)).is_err());
    }

    #[test]
    fn embedding_into_two_levels() {
        let z = abomination_truncation(2, 2).unwrap();
        for depth in 0..=6 {
            DeltaMap::new(&z, depth).unwrap();
        }
        assert!(matches!(
            DeltaMap::new(&z, 9),
            Err(Error::EmbeddingMismatch(_))
        ));
    }

    #[test]
    fn constant_coloring_certificate() {
        let z = abomination_truncation(2, 1).unwrap();
        let f = Coloring::constant(2, z.len(), 0).unwrap();
        let cert = certify(&z, &f).unwrap();
        assert_eq!(cert.levels.keys().copied().collect::<Vec<_>>(), vec![0, 1]);
        let coarsest = coarsest_color_respecting(&z.poset, &f).unwrap();
        for (&p, &(i, j)) in &cert.levels {
            let x = z.id(&AbominationLabel::c(p, i)).unwrap();
            let y = z.id(&AbominationLabel::c(p, j)).unwrap();
            assert!(coarsest.same(x, y));
        }
        let json = cert.to_json();
        assert!(json.starts_with(r#"{"levels":{"0":["#));
    }

    #[test]
    fn no_full_c_level() {
        let z = abomination_truncation(2, 0).unwrap();
        let mut keep = ElementSet::full(z.len());
        // Dropping c0_7 forces dropping everything below it.
        let c07 = z.id(&AbominationLabel::c(0, 7)).unwrap();
        for x in z.poset.down(c07).iter() {
            keep.remove(x);
        }
        let (w, _) = z.subspace(&keep).unwrap();
        assert!(w.full_levels(Kind::C).is_empty());
        let f = Coloring::constant(2, w.len(), 0).unwrap();
        let cert = certify(&w, &f).unwrap();
        assert!(cert.levels.is_empty() && cert.steps.is_empty());
        let r = coarsest_color_respecting(&w.poset, &f).unwrap();
        assert!(corollary_check(&w, &r, 2, None, 1_000_000).unwrap());
    }

    #[test]
    fn sampled_quotients_of_two_levels() {
        let z = abomination_truncation(2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            let g = random_weak_coloring(&z.poset, 2, &mut rng).unwrap();
            let red = coarsest_reduction(&z.poset, &g).unwrap();
            // The coloring induced on the quotient is strict.
            let reps: Vec<usize> = (0..red.quotient.len())
                .map(|b| red.projection.iter().position(|&y| y == b).unwrap())
                .collect();
            let witness = g.restrict(&reps);
            assert!(corollary_check(&z, &red.kernel, 2, Some(&witness), 0).unwrap());
            let f = g;
            let cert = certify(&z, &f).unwrap();
            assert_eq!(cert.levels.len(), 3);
            assert!(cert.kernel.refines(&red.kernel));
        }
    }

    #[test]
    fn corollary_on_one_level_sweep() {
        let z = abomination_truncation(2, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let g = random_weak_coloring(&z.poset, 2, &mut rng).unwrap();
            let r = coarsest_color_respecting(&z.poset, &g).unwrap();
            assert!(corollary_check(&z, &r, 2, None, 1_000_000).unwrap());
        }
    }

    #[test]
    fn rejects_uncolorable_quotient() {
        let z = abomination_truncation(2, 0).unwrap();
        assert!(matches!(
            corollary_check(&z, &Partition::identity(z.len()), 0, None, 1_000_000),
            Err(Error::QuotientNotColorable(0))
        ));
    }
}
