//! Acceptance suite: every identity the library promises, run end to end at
//! its stated scale, exactly (no tolerances: all checks are integer
//! identities). Each test prints one PASS/FAIL line. Criterion 12
//! (determinism of the CLI self-test) lives in the CLI crate's acceptance
//! suite, next to the binary it exercises.

use num_bigint::BigInt;
use num_traits::Zero;

use mucoh_core::cohomology::{
    check_resolution_exact, hom_complex, mobius_cohomology, standard_resolution,
};
use mucoh_core::galois::{
    adjunction_dim_check, check_functor_equalities, enumerate_connections, poset_catalog,
    rota_classical_check, rota_ext_check, rota_inversion_check, ENUMERATION_CAP,
};
use mucoh_core::incidence::{mobius_hall, mobius_recursive, GrFunction};
use mucoh_core::linalg::FieldSpec;
use mucoh_core::module::{nat_space, PosetModule};
use mucoh_core::poset::{random_monotone_map, random_poset, random_spread, ElemSet};
use mucoh_core::rng::SplitMix64;

const Q: FieldSpec = FieldSpec::Rationals;

fn f7() -> FieldSpec {
    FieldSpec::prime(7).unwrap()
}

fn verdict(number: u8, label: &str, pass: bool, stats: &str) {
    let word = if pass { "PASS" } else { "FAIL" };
    println!("[{word}] criterion {number:02}: {label} ({stats})");
    assert!(pass, "criterion {number:02} failed: {label}");
}

/// Criterion 1: the recursive and chain-counting Möbius functions agree on
/// every interval of 200 seeded random posets of size <= 8.
#[test]
fn a01_mobius_oracle_agreement() {
    let mut rng = SplitMix64::new(0xA01);
    let mut checked_intervals = 0usize;
    let mut pass = true;
    for _ in 0..200 {
        let p = random_poset(8, &mut rng);
        let recursive = mobius_recursive(&p);
        let hall = mobius_hall(&p);
        for a in p.elements() {
            for b in p.up_set(a).iter() {
                checked_intervals += 1;
                if recursive.get(a, b) != hall.get(a, b) {
                    pass = false;
                }
            }
        }
    }
    verdict(
        1,
        "mobius_recursive == mobius_hall",
        pass,
        &format!("200 posets, {checked_intervals} intervals"),
    );
}

/// Criterion 2: the inversion identity and its lower dual hold for 200
/// random integer functions on random posets.
#[test]
fn a02_inversion_identity() {
    let mut rng = SplitMix64::new(0xA02);
    let mut pass = true;
    for _ in 0..200 {
        let p = random_poset(8, &mut rng);
        let f = GrFunction::random(&p, -9, 9, &mut rng);
        let upper = f.upper_inversion();
        let lower = f.lower_inversion();
        for a in p.elements() {
            let mut up = BigInt::zero();
            for b in p.up_set(a).iter() {
                up += upper.get(b);
            }
            let mut down = BigInt::zero();
            for b in p.down_set(a).iter() {
                down += lower.get(b);
            }
            pass &= &up == f.get(a) && &down == f.get(a);
        }
    }
    verdict(
        2,
        "sum of inversions recovers f (both duals)",
        pass,
        "200 functions",
    );
}

fn euler_instances() -> impl Iterator<Item = (std::sync::Arc<mucoh_core::Poset>, PosetModule)> {
    let mut rng = SplitMix64::new(0xA03);
    (0..200).flat_map(move |_| {
        let p = random_poset(7, &mut rng);
        let over_q = PosetModule::random(&p, Q, 4, rng.next_u64());
        let over_p7 = PosetModule::random(&p, f7(), 4, rng.next_u64());
        [(p.clone(), over_q), (p, over_p7)]
    })
}

/// Criterion 3: the Möbius inversion of the dimension function equals the
/// Euler characteristic of Möbius cohomology at every element, for 200
/// random poset/module pairs over the rationals and over F_7.
#[test]
fn a03_euler_characteristic_theorem() {
    let mut pass = true;
    let mut elements = 0usize;
    for (p, n) in euler_instances() {
        let inverted = n.dimension_function().upper_inversion();
        for a in p.elements() {
            elements += 1;
            pass &= inverted.get(a) == &mobius_cohomology(a, &n).euler;
        }
    }
    verdict(
        3,
        "inversion of dimension function == euler of cohomology",
        pass,
        &format!("200 pairs x 2 fields, {elements} elements"),
    );
}

/// Criterion 4: the chain-sum formula computes the Euler characteristic of
/// the hom complex of a spread, for 50 random spreads.
#[test]
fn a04_spread_euler_formula() {
    let mut rng = SplitMix64::new(0xA04);
    let mut pass = true;
    for _ in 0..50 {
        let p = random_poset(7, &mut rng);
        let n = PosetModule::random(&p, Q, 4, rng.next_u64());
        let z = random_spread(&p, &mut rng);
        let complex = hom_complex(z, &n).unwrap();
        let chi = complex.cohomology().euler;
        let mut chain_sum = BigInt::zero();
        for d in 0..=p.max_chain_dim() {
            for sigma in p.chains_with_min_in(z, d) {
                let term = BigInt::from(n.dim(sigma.max()));
                if d % 2 == 0 {
                    chain_sum += term;
                } else {
                    chain_sum -= term;
                }
            }
        }
        pass &= chi == chain_sum;
    }
    verdict(4, "chain-sum formula == chi(1_Z, N)", pass, "50 spreads");
}

/// Criterion 5: the standard cofree resolution is exact for 100 random
/// modules over posets of size <= 5.
#[test]
fn a05_resolution_exactness() {
    let mut rng = SplitMix64::new(0xA05);
    let mut pass = true;
    for _ in 0..100 {
        let p = random_poset(5, &mut rng);
        let n = PosetModule::random(&p, Q, 3, rng.next_u64());
        pass &= check_resolution_exact(&n).unwrap().is_ok();
    }
    verdict(
        5,
        "standard cofree resolution is exact",
        pass,
        "100 modules",
    );
}

/// Criterion 6: the complex law holds on every complex assembled for
/// criteria 3-5, verified by direct composition rather than by construction.
#[test]
fn a06_complex_law() {
    let mut pass = true;
    let mut complexes = 0usize;
    for (p, n) in euler_instances() {
        for a in p.elements() {
            let complex = hom_complex(ElemSet::singleton(a), &n).unwrap();
            for w in complex.deltas().windows(2) {
                pass &= w[1].compose(&w[0]).unwrap().is_zero();
            }
            complexes += 1;
        }
    }
    let mut rng = SplitMix64::new(0xA04);
    for _ in 0..50 {
        let p = random_poset(7, &mut rng);
        let n = PosetModule::random(&p, Q, 4, rng.next_u64());
        let z = random_spread(&p, &mut rng);
        let complex = hom_complex(z, &n).unwrap();
        for w in complex.deltas().windows(2) {
            pass &= w[1].compose(&w[0]).unwrap().is_zero();
        }
        complexes += 1;
    }
    let mut rng = SplitMix64::new(0xA05);
    for _ in 0..100 {
        let p = random_poset(5, &mut rng);
        let n = PosetModule::random(&p, Q, 3, rng.next_u64());
        let res = standard_resolution(&n).unwrap();
        for x in p.elements() {
            let eps = res.augmentation.component(x);
            if let Some(first) = res.deltas.first() {
                pass &= first.component(x).compose(eps).unwrap().is_zero();
            }
            for w in res.deltas.windows(2) {
                pass &= w[1]
                    .component(x)
                    .compose(w[0].component(x))
                    .unwrap()
                    .is_zero();
            }
        }
        complexes += 1;
    }
    verdict(
        6,
        "delta o delta == 0 on all assembled complexes",
        pass,
        &format!("{complexes} complexes"),
    );
}

/// Criterion 7: degree-0 cohomology is the hom space out of the point
/// indicator, on all instances of criterion 3.
#[test]
fn a07_degree_zero_is_hom() {
    let mut pass = true;
    let mut checked = 0usize;
    for (p, n) in euler_instances() {
        for a in p.elements() {
            let betti0 = mobius_cohomology(a, &n).betti[0];
            let ind = PosetModule::indicator(&p, n.field(), ElemSet::singleton(a)).unwrap();
            pass &= betti0 == nat_space(&ind, &n).unwrap().dimension;
            checked += 1;
        }
    }
    verdict(
        7,
        "H^0 == dim Nat(1_a, N)",
        pass,
        &format!("{checked} elements"),
    );
}

/// Criterion 8: Rota's classical identity and its inversion form hold for
/// every connection between every ordered pair of catalog posets, the
/// inversion form with 20 random functions per connection.
#[test]
fn a08_rota_classical_and_inversion() {
    let cat = poset_catalog();
    let mut rng = SplitMix64::new(0xA08);
    let mut pass = true;
    let mut connections = 0usize;
    for (_, p) in &cat {
        for (_, q) in &cat {
            for c in enumerate_connections(p, q, ENUMERATION_CAP).unwrap() {
                connections += 1;
                pass &= rota_classical_check(&c).passed();
                for _ in 0..20 {
                    let n = GrFunction::random(q, -5, 5, &mut rng);
                    pass &= rota_inversion_check(&c, &n).unwrap().passed();
                }
            }
        }
    }
    verdict(
        8,
        "rota classical + inversion form over the catalog",
        pass,
        &format!("{connections} connections x 20 functions"),
    );
}

/// Criterion 9: the Ext form of Rota's theorem: per-degree dimension
/// equality and the four-way Euler identity, for every catalog connection
/// and 5 random modules each.
#[test]
fn a09_rota_ext() {
    let cat = poset_catalog();
    let mut rng = SplitMix64::new(0xA09);
    let mut pass = true;
    let mut checks = 0usize;
    for (_, p) in &cat {
        for (_, q) in &cat {
            for c in enumerate_connections(p, q, ENUMERATION_CAP).unwrap() {
                for _ in 0..5 {
                    let n = PosetModule::random(q, Q, 3, rng.next_u64());
                    for a in p.elements() {
                        pass &= rota_ext_check(&c, &n, a).unwrap().passed();
                        checks += 1;
                    }
                }
            }
        }
    }
    verdict(
        9,
        "four-way euler identity + per-degree ext dims",
        pass,
        &format!("{checks} (connection, module, element) checks"),
    );
}

/// Criterion 10: both hom-dimension adjunction identities for 50 random
/// monotone maps between random posets of size <= 5 with random modules.
#[test]
fn a10_adjunction_dimensions() {
    let mut rng = SplitMix64::new(0xA10);
    let mut pass = true;
    for _ in 0..50 {
        let p = random_poset(5, &mut rng);
        let q = random_poset(5, &mut rng);
        let f = random_monotone_map(&p, &q, &mut rng);
        let m = PosetModule::random(&p, Q, 3, rng.next_u64());
        let n = PosetModule::random(&q, Q, 3, rng.next_u64());
        pass &= adjunction_dim_check(&f, &m, &n).unwrap().passed();
    }
    verdict(10, "hom-dimension adjunctions", pass, "50 monotone maps");
}

/// Criterion 11: the functor equalities of a Galois connection, as equal
/// dimension functions plus invertible canonical comparison maps, for all
/// catalog connections and 5 random modules each.
#[test]
fn a11_functor_equalities() {
    let cat = poset_catalog();
    let mut rng = SplitMix64::new(0xA11);
    let mut pass = true;
    let mut checks = 0usize;
    for (_, p) in &cat {
        for (_, q) in &cat {
            for c in enumerate_connections(p, q, ENUMERATION_CAP).unwrap() {
                for _ in 0..5 {
                    let n = PosetModule::random(q, Q, 3, rng.next_u64());
                    let m = PosetModule::random(p, Q, 3, rng.next_u64());
                    pass &= check_functor_equalities(&c, &n, &m).unwrap().passed();
                    checks += 1;
                }
            }
        }
    }
    verdict(
        11,
        "f*N == g_*N and f_dagger M == g*M",
        pass,
        &format!("{checks} (connection, modules) checks"),
    );
}
