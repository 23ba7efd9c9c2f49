//! Structural invariants of the combinatorial and algebraic layers.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

use mucoh_core::incidence::{identity_one, mobius_hall, mobius_recursive, zeta, GrFunction};
use mucoh_core::linalg::{FieldSpec, Matrix};
use mucoh_core::poset::{random_poset, random_spread, Chain, ElemId, Poset};
use mucoh_core::rng::SplitMix64;

fn index_pairs(n: usize) -> impl Strategy<Value = Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    proptest::sample::subsequence(pairs.clone(), 0..=pairs.len())
}

proptest! {
    /// Rebuilding a poset from its full closed relation gives the same poset.
    #[test]
    fn closure_is_idempotent(n in 1usize..8, pairs in index_pairs(7)) {
        let names: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
        let pairs: Vec<(usize, usize)> = pairs.into_iter().filter(|&(a, b)| a < n && b < n).collect();
        let p = Poset::from_index_relations(names.clone(), &pairs).unwrap();
        let closed: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| p.leq(ElemId(a), ElemId(b)))
            .collect();
        let again = Poset::from_index_relations(names, &closed).unwrap();
        prop_assert_eq!(p, again);
    }

    /// rank + nullity = number of columns, over both fields.
    #[test]
    fn rank_nullity(rows in 0usize..6, cols in 0usize..6, data in proptest::collection::vec(-3i64..=3, 36)) {
        for field in [FieldSpec::Rationals, FieldSpec::prime(7).unwrap()] {
            let m = Matrix::from_i64(field, rows, cols, &data[..rows * cols]);
            prop_assert_eq!(m.rank() + m.kernel_basis().cols(), cols);
            prop_assert!(m.compose(&m.kernel_basis()).unwrap().is_zero());
        }
    }

    /// Composition cannot raise rank.
    #[test]
    fn composition_rank_bound(
        n in 1usize..5, k in 1usize..5, m in 1usize..5,
        data in proptest::collection::vec(-3i64..=3, 50),
    ) {
        let f = Matrix::from_i64(FieldSpec::Rationals, n, k, &data[..n * k]);
        let g = Matrix::from_i64(FieldSpec::Rationals, k, m, &data[n * k..n * k + k * m]);
        let fg = f.compose(&g).unwrap();
        prop_assert!(fg.rank() <= f.rank().min(g.rank()));
    }
}

/// Counting chains by their minimum agrees with direct enumeration of
/// totally ordered subsets.
#[test]
fn chain_census_matches_subset_enumeration() {
    let mut rng = SplitMix64::new(101);
    for _ in 0..50 {
        let p = random_poset(8, &mut rng);
        for d in 0..=p.max_chain_dim() {
            let by_min: usize = p.elements().map(|a| p.chains_with_min(a, d).len()).sum();
            let direct = count_ordered_subsets(&p, d + 1);
            assert_eq!(by_min, direct, "dimension {d}");
        }
    }
}

fn count_ordered_subsets(p: &Poset, size: usize) -> usize {
    let ids: Vec<ElemId> = p.elements().collect();
    let mut count = 0;
    let mut pick = vec![0usize; size];
    fn rec(
        p: &Poset,
        ids: &[ElemId],
        pick: &mut [usize],
        depth: usize,
        start: usize,
        count: &mut usize,
    ) {
        if depth == pick.len() {
            // subset is a chain iff all pairs are comparable
            for i in 0..pick.len() {
                for j in (i + 1)..pick.len() {
                    let (a, b) = (ids[pick[i]], ids[pick[j]]);
                    if !p.leq(a, b) && !p.leq(b, a) {
                        return;
                    }
                }
            }
            *count += 1;
            return;
        }
        for next in start..ids.len() {
            pick[depth] = next;
            rec(p, ids, pick, depth + 1, next + 1, count);
        }
    }
    rec(p, &ids, &mut pick, 0, 0, &mut count);
    count
}

/// Double deletion: summed signs over each codimension-2 face cancel. This
/// is the combinatorial heart of the complex law.
#[test]
fn face_of_face_signs_cancel() {
    let mut rng = SplitMix64::new(202);
    let mut seen = 0;
    while seen < 200 {
        let p = random_poset(8, &mut rng);
        let top = p.max_chain_dim();
        if top < 2 {
            continue;
        }
        for a in p.elements() {
            for tau in p.chains_with_min(a, 2.min(top)) {
                let mut sums: BTreeMap<Vec<ElemId>, i64> = BTreeMap::new();
                for (sigma, s1) in tau.facets() {
                    for (rho, s2) in sigma.facets() {
                        *sums.entry(rho.vertices().to_vec()).or_insert(0) += s1 * s2;
                    }
                }
                assert!(sums.values().all(|&v| v == 0));
                seen += 1;
            }
        }
    }
}

/// Singletons and intervals are spreads; random spreads validate.
#[test]
fn singletons_intervals_and_samples_are_spreads() {
    let mut rng = SplitMix64::new(303);
    for _ in 0..50 {
        let p = random_poset(8, &mut rng);
        for a in p.elements() {
            assert!(p.is_spread(mucoh_core::ElemSet::singleton(a)));
            for c in p.up_set(a).iter() {
                assert!(p.is_spread(p.interval(a, c).unwrap()));
            }
        }
        assert!(p.is_spread(random_spread(&p, &mut rng)));
    }
}

/// The two Möbius computations agree on every interval of 100 random posets.
#[test]
fn mobius_oracles_agree() {
    let mut rng = SplitMix64::new(404);
    for _ in 0..100 {
        let p = random_poset(8, &mut rng);
        assert_eq!(mobius_recursive(&p), mobius_hall(&p));
    }
}

/// zeta * mu = 1 = mu * zeta, exactly, on every generated poset.
#[test]
fn zeta_mobius_inverse_law() {
    let mut rng = SplitMix64::new(505);
    for _ in 0..100 {
        let p = random_poset(8, &mut rng);
        let z = zeta(&p);
        let mu = mobius_recursive(&p);
        let one = identity_one(&p);
        assert_eq!(z.convolve(&mu).unwrap(), one);
        assert_eq!(mu.convolve(&z).unwrap(), one);
    }
}

/// The defining identity of the inversion and its lower dual.
#[test]
fn inversion_defining_identities() {
    let mut rng = SplitMix64::new(606);
    for _ in 0..100 {
        let p = random_poset(8, &mut rng);
        let f = GrFunction::random(&p, -9, 9, &mut rng);
        let upper = f.upper_inversion();
        let lower = f.lower_inversion();
        for a in p.elements() {
            let mut up_sum = BigInt::zero();
            for b in p.up_set(a).iter() {
                up_sum += upper.get(b);
            }
            assert_eq!(&up_sum, f.get(a));
            let mut down_sum = BigInt::zero();
            for b in p.down_set(a).iter() {
                down_sum += lower.get(b);
            }
            assert_eq!(&down_sum, f.get(a));
        }
    }
}

/// Uniqueness: solving the triangular system directly gives the inversion.
#[test]
fn inversion_is_the_unique_solution() {
    let mut rng = SplitMix64::new(707);
    for _ in 0..50 {
        let p = random_poset(8, &mut rng);
        let f = GrFunction::random(&p, -9, 9, &mut rng);
        // solve g from the top down: g(a) = f(a) - sum of g(b) for b > a
        let mut order: Vec<ElemId> = p.elements().collect();
        order.sort_by_key(|&a| (p.up_set(a).len(), a.index()));
        let mut g = vec![BigInt::zero(); p.len()];
        for &a in &order {
            let mut acc = f.get(a).clone();
            for b in p.strict_up(a).iter() {
                acc -= &g[b.index()];
            }
            g[a.index()] = acc;
        }
        let solved = GrFunction::new(Arc::clone(&p), g);
        assert_eq!(solved, f.upper_inversion());
    }
}

/// Rank over a large prime field never exceeds the rational rank, and
/// matches it in at least 99% of small-entry trials.
#[test]
fn rank_agreement_across_fields() {
    let big_prime = FieldSpec::prime(1_000_003).unwrap();
    let mut rng = SplitMix64::new(808);
    let trials = 300;
    let mut equal = 0;
    for _ in 0..trials {
        let rows = 1 + rng.below(6) as usize;
        let cols = 1 + rng.below(6) as usize;
        let data: Vec<i64> = (0..rows * cols).map(|_| rng.int_in(-3, 3)).collect();
        let rank_q = Matrix::from_i64(FieldSpec::Rationals, rows, cols, &data).rank();
        let rank_p = Matrix::from_i64(big_prime, rows, cols, &data).rank();
        assert!(rank_p <= rank_q);
        if rank_p == rank_q {
            equal += 1;
        }
    }
    assert!(equal * 100 >= trials * 99, "{equal}/{trials} agreed");
}

/// A chain knows its endpoints.
#[test]
fn chain_endpoints() {
    let p = Poset::chain(4);
    let c = Chain::new(&p, vec![ElemId(0), ElemId(2), ElemId(3)]).unwrap();
    assert_eq!(c.min(), ElemId(0));
    assert_eq!(c.max(), ElemId(3));
    assert_eq!(c.dim(), 2);
    assert!(Chain::new(&p, vec![ElemId(2), ElemId(0)]).is_err());
}
