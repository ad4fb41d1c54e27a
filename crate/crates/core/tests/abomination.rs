use esakia_core::abomination::{
    abomination_truncation, canonical_coloring, index_count, ladder_truncation, level_size,
    verify_downset_claim, AbominationLabel, Kind,
};
use esakia_core::coloring::is_coloring;
use esakia_core::poset::ElementSet;
use esakia_core::reduction::{alpha_mergeable, beta_mergeable};

#[test]
fn width_is_witnessed_by_the_e_elements() {
    for n in [2, 3] {
        for depth in [1, 2] {
            let t = abomination_truncation(n, depth).unwrap();
            let k = index_count(n);
            let witness = ElementSet::from_ids(
                t.len(),
                (0..k).flat_map(|i| {
                    [
                        AbominationLabel::ea(depth, i),
                        AbominationLabel::eb(depth, i),
                    ]
                    .map(|l| t.id(&l).unwrap())
                }),
            );
            assert!(t.poset.is_antichain(&witness));
            assert_eq!(witness.count(), 1 << (n + 2));
            assert_eq!(t.poset.width(), witness.count(), "n = {n}, depth = {depth}");
        }
    }
}

#[test]
fn sizes() {
    for n in [2, 3] {
        for depth in 0..3 {
            assert_eq!(
                abomination_truncation(n, depth).unwrap().len(),
                (depth + 1) * level_size(n)
            );
            assert_eq!(
                ladder_truncation(n, depth).unwrap().len(),
                (depth + 1) * index_count(n)
            );
        }
    }
}

#[test]
fn only_the_top_level_c_elements_are_mergeable() {
    let t = abomination_truncation(2, 2).unwrap();
    let p = &t.poset;
    for x in 0..p.len() {
        for y in x + 1..p.len() {
            assert!(!alpha_mergeable(p, x, y), "{} {}", t.label(x), t.label(y));
            let both_max = p.upper_covers(x).is_empty() && p.upper_covers(y).is_empty();
            assert_eq!(
                beta_mergeable(p, x, y),
                both_max,
                "{} {}",
                t.label(x),
                t.label(y)
            );
        }
    }
    for x in p.maximal_elements() {
        let l = t.label(x);
        assert_eq!((l.kind, l.level), (Kind::C, 0));
    }
}

#[test]
fn truncations_are_upsets_of_deeper_ones() {
    for (small, big) in [
        (
            abomination_truncation(2, 1).unwrap(),
            abomination_truncation(2, 2).unwrap(),
        ),
        (
            ladder_truncation(1, 2).unwrap(),
            ladder_truncation(1, 3).unwrap(),
        ),
    ] {
        let ids: Vec<usize> = small.labels().iter().map(|l| big.id(l).unwrap()).collect();
        let set = ElementSet::from_ids(big.len(), ids.iter().copied());
        assert!(big.poset.is_upset(&set));
        for x in 0..small.len() {
            for y in 0..small.len() {
                assert_eq!(small.poset.leq(x, y), big.poset.leq(ids[x], ids[y]));
            }
        }
    }
}

#[test]
fn ladder_levels_two_apart_are_comparable() {
    let t = ladder_truncation(1, 4).unwrap();
    let k = index_count(1);
    let id = |m, i| t.id(&AbominationLabel::y(m, i)).unwrap();
    for m in 2..=4 {
        for i in 0..k {
            for j in 0..k {
                assert!(t.poset.lt(id(m, i), id(m - 2, j)));
                assert_eq!(t.poset.lt(id(m, i), id(m - 1, j)), i != j);
            }
        }
    }
}

#[test]
fn every_next_level_sits_below_each_eb() {
    for m in 0..2 {
        for k in [0, 3, 7] {
            assert!(verify_downset_claim(2, 2, m, k).unwrap());
        }
    }
    assert!(verify_downset_claim(2, 2, 2, 0).is_err());
}

#[test]
fn canonical_coloring_is_strict() {
    for depth in 0..3 {
        let t = abomination_truncation(2, depth).unwrap();
        let c = canonical_coloring(&t).unwrap();
        assert_eq!(c.n(), 3);
        assert!(is_coloring(&t.poset, &c).unwrap());
    }
}
