//! Galois connections between posets and the Rota-style checks they satisfy.
//!
//! A connection `f : P <-> Q : g` is an adjoint pair of monotone maps,
//! verified extensionally: `f(a) <= x` iff `a <= g(x)` for every pair.
//! Enumeration walks the monotone maps `f` and constructs the unique
//! candidate right adjoint `g(x) = max {a : f(a) <= x}`; when every such
//! maximum exists the pair is a connection, so the output is exactly the set
//! of connections without searching over pairs of maps.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::cohomology::hom_complex;
use crate::incidence::{mobius_recursive, GrFunction};
use crate::module::{
    nat_space, pullback, pushforward, pushforward_data, pushforward_open, pushforward_open_data,
    ModuleError, PosetModule,
};
use crate::poset::{
    enumerate_monotone_maps, same_poset, ElemId, ElemSet, MonotoneMap, Poset, PosetError,
};
use crate::report::CheckReport;

/// Default size cap for brute-force enumeration of connections.
pub const ENUMERATION_CAP: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GaloisError {
    #[error("maps do not form a pair P \u{21c4} Q: sources and targets misalign")]
    SourceTargetMismatch,
    #[error("not a Galois connection: witnessed at a = {a}, x = {x}")]
    NotAdjoint { a: String, x: String },
    #[error("poset of size {0} exceeds the enumeration cap {1}")]
    SizeCap(usize, usize),
    #[error(transparent)]
    Poset(#[from] PosetError),
}

/// An adjoint pair of monotone maps between two posets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisConnection {
    f: MonotoneMap,
    g: MonotoneMap,
}

impl GaloisConnection {
    pub fn new(f: MonotoneMap, g: MonotoneMap) -> Result<GaloisConnection, GaloisError> {
        verify_connection(&f, &g)?;
        Ok(GaloisConnection { f, g })
    }

    pub fn identity(p: &Arc<Poset>) -> GaloisConnection {
        GaloisConnection {
            f: MonotoneMap::identity(p),
            g: MonotoneMap::identity(p),
        }
    }

    /// The left adjoint `f : P -> Q`.
    pub fn f(&self) -> &MonotoneMap {
        &self.f
    }

    /// The right adjoint `g : Q -> P`.
    pub fn g(&self) -> &MonotoneMap {
        &self.g
    }

    pub fn source(&self) -> &Arc<Poset> {
        self.f.source()
    }

    pub fn target(&self) -> &Arc<Poset> {
        self.f.target()
    }
}

/// Exhaustively checks the adjunction biconditional; reports the first
/// violating pair.
pub fn verify_connection(f: &MonotoneMap, g: &MonotoneMap) -> Result<(), GaloisError> {
    if !same_poset(f.source(), g.target()) || !same_poset(f.target(), g.source()) {
        return Err(GaloisError::SourceTargetMismatch);
    }
    let p = f.source();
    let q = f.target();
    for a in p.elements() {
        for x in q.elements() {
            if q.leq(f.apply(a), x) != p.leq(a, g.apply(x)) {
                return Err(GaloisError::NotAdjoint {
                    a: p.name(a).to_string(),
                    x: q.name(x).to_string(),
                });
            }
        }
    }
    Ok(())
}

/// The right adjoint of `f`, when it exists: `g(x)` is the maximum of
/// `{a : f(a) <= x}`, which must exist for every `x`.
pub fn right_adjoint(f: &MonotoneMap) -> Option<MonotoneMap> {
    let p = f.source();
    let q = f.target();
    let mut values = Vec::with_capacity(q.len());
    for x in q.elements() {
        let fiber: ElemSet = p.elements().filter(|&a| q.leq(f.apply(a), x)).collect();
        let max = fiber.iter().find(|&m| fiber.is_subset_of(p.down_set(m)))?;
        values.push(max);
    }
    let g = MonotoneMap::new(Arc::clone(q), Arc::clone(p), values).ok()?;
    verify_connection(f, &g).ok()?;
    Some(g)
}

/// All Galois connections from `p` to `q`, ordered by the enumeration order
/// of their left adjoints.
pub fn enumerate_connections(
    p: &Arc<Poset>,
    q: &Arc<Poset>,
    cap: usize,
) -> Result<Vec<GaloisConnection>, GaloisError> {
    if p.len() > cap {
        return Err(GaloisError::SizeCap(p.len(), cap));
    }
    if q.len() > cap {
        return Err(GaloisError::SizeCap(q.len(), cap));
    }
    Ok(enumerate_monotone_maps(p, q)
        .into_iter()
        .filter_map(|f| right_adjoint(&f).map(|g| GaloisConnection { f, g }))
        .collect())
}

/// The fixed family of posets used by exhaustive connection tests.
pub fn poset_catalog() -> Vec<(&'static str, Arc<Poset>)> {
    vec![
        ("chain1", Poset::chain(1)),
        ("chain2", Poset::chain(2)),
        ("chain3", Poset::chain(3)),
        ("chain4", Poset::chain(4)),
        ("antichain3", Poset::antichain(3)),
        ("diamond", Poset::diamond()),
        ("boolean2", Poset::boolean2()),
        ("zigzag4", Poset::zigzag4()),
    ]
}

/// Rota's classical identity: for all `a` in P and `y` in Q, the Möbius
/// fiber sums agree. Values off intervals count as zero, since fibers may
/// contain incomparable elements.
pub fn rota_classical_check(c: &GaloisConnection) -> CheckReport {
    let p = c.source();
    let q = c.target();
    let mu_p = mobius_recursive(p);
    let mu_q = mobius_recursive(q);
    let mut report = CheckReport::new();
    for a in p.elements() {
        for y in q.elements() {
            let mut lhs = BigInt::zero();
            for x in c.g.fiber(a).iter() {
                lhs += mu_q.get_or_zero(x, y);
            }
            let mut rhs = BigInt::zero();
            for b in c.f.fiber(y).iter() {
                rhs += mu_p.get_or_zero(a, b);
            }
            report.check(format!("a={} y={}", p.name(a), q.name(y)), lhs, rhs);
        }
    }
    report
}

/// The inversion form of Rota's theorem: upper inversion commutes with the
/// connection, `partial_P(f# n) = g#(partial_Q n)` as functions on P.
pub fn rota_inversion_check(
    c: &GaloisConnection,
    n: &GrFunction,
) -> Result<CheckReport, PosetError> {
    let p = c.source();
    let lhs = n.pullback(&c.f)?.upper_inversion();
    let rhs = n.upper_inversion().pushforward(&c.g)?;
    let mut report = CheckReport::new();
    for a in p.elements() {
        report.check(
            format!("at {}", p.name(a)),
            lhs.get(a).clone(),
            rhs.get(a).clone(),
        );
    }
    Ok(report)
}

/// The Ext form of Rota's theorem at one element `a` of P: the four
/// quantities
/// `partial_P(f# n)(a)`, `chi(1_a, f*N)`, `chi(1_Z, N)` for the spread
/// `Z = g^{-1}(a)`, and `g#(partial_Q n)(a)` all agree, and the cohomology
/// dimensions of `(1_a, f*N)` and `(1_Z, N)` agree degree by degree.
pub fn rota_ext_check(
    c: &GaloisConnection,
    n: &PosetModule,
    a: ElemId,
) -> Result<CheckReport, ModuleError> {
    let p = c.source();
    let q = c.target();
    if !same_poset(n.poset(), q) {
        return Err(ModuleError::PosetMismatch);
    }
    let dim_fn = n.dimension_function();
    let a_name = p.name(a);

    let inverted_pullback = dim_fn.pullback(&c.f)?.upper_inversion().get(a).clone();
    let pulled = pullback(&c.f, n)?;
    let over_p = hom_complex(ElemSet::singleton(a), &pulled)?.cohomology();

    let fiber = c.g.fiber(a);
    // fibers of monotone maps are always spreads; fail loudly if not
    if !q.is_spread(fiber) {
        let names: Vec<&str> = fiber.iter().map(|x| q.name(x)).collect();
        return Err(ModuleError::NotASpread(format!("{{{}}}", names.join(","))));
    }
    let over_q = hom_complex(fiber, n)?.cohomology();
    let pushed_inversion = dim_fn.upper_inversion().pushforward(&c.g)?.get(a).clone();

    let mut report = CheckReport::new();
    report.check(
        format!("inverted pullback vs chi(1_{a_name}, f*N)"),
        inverted_pullback,
        over_p.euler.clone(),
    );
    report.check(
        format!("chi(1_{a_name}, f*N) vs chi(1_Z, N)"),
        over_p.euler.clone(),
        over_q.euler.clone(),
    );
    report.check(
        format!("chi(1_Z, N) vs pushed inversion at {a_name}"),
        over_q.euler,
        pushed_inversion,
    );
    let degrees = over_p.betti.len().max(over_q.betti.len());
    for d in 0..degrees {
        report.check(
            format!("ext^{d} dims at {a_name}"),
            over_p.betti.get(d).copied().unwrap_or(0),
            over_q.betti.get(d).copied().unwrap_or(0),
        );
    }
    Ok(report)
}

/// The two hom-dimension adjunction identities of a monotone map `f`:
/// `dim Nat(f_dagger M, N) = dim Nat(M, f* N)` and
/// `dim Nat(f* N, M) = dim Nat(N, f_* M)`.
pub fn adjunction_dim_check(
    f: &MonotoneMap,
    m: &PosetModule,
    n: &PosetModule,
) -> Result<CheckReport, ModuleError> {
    if !same_poset(m.poset(), f.source()) || !same_poset(n.poset(), f.target()) {
        return Err(ModuleError::PosetMismatch);
    }
    let pulled = pullback(f, n)?;
    let open = pushforward_open(f, m)?;
    let star = pushforward(f, m)?;
    let mut report = CheckReport::new();
    report.check(
        "dim Nat(f\u{2020}M, N) vs dim Nat(M, f*N)",
        nat_space(&open, n)?.dimension,
        nat_space(m, &pulled)?.dimension,
    );
    report.check(
        "dim Nat(f*N, M) vs dim Nat(N, f_*M)",
        nat_space(&pulled, m)?.dimension,
        nat_space(n, &star)?.dimension,
    );
    Ok(report)
}

/// The functor equalities of a Galois connection: `f*N` agrees with `g_*N`
/// and `f_dagger M` with `g*M`, checked as equal dimension functions plus
/// invertibility of the canonical comparison maps (the limit projection to
/// the `f(a)` component, and the colimit injection from the `g(x)`
/// component).
pub fn check_functor_equalities(
    c: &GaloisConnection,
    n: &PosetModule,
    m: &PosetModule,
) -> Result<CheckReport, ModuleError> {
    let p = c.source();
    let q = c.target();
    if !same_poset(n.poset(), q) || !same_poset(m.poset(), p) {
        return Err(ModuleError::PosetMismatch);
    }
    let mut report = CheckReport::new();

    let star = pushforward_data(&c.g, n)?;
    let pulled = pullback(&c.f, n)?;
    for a in p.elements() {
        let name = p.name(a);
        report.check(
            format!("dim f*N({name}) vs dim g_*N({name})"),
            pulled.dim(a),
            star.module.dim(a),
        );
        let cmp = star
            .projection(a, c.f.apply(a))
            .expect("f(a) lies in the up-fiber of a");
        report.check(
            format!("comparison rank at {name} (f*N vs g_*N)"),
            cmp.rank(),
            pulled.dim(a).max(star.module.dim(a)),
        );
    }

    let open = pushforward_open_data(&c.f, m)?;
    let gpull = pullback(&c.g, m)?;
    for x in q.elements() {
        let name = q.name(x);
        report.check(
            format!("dim f\u{2020}M({name}) vs dim g*M({name})"),
            open.module.dim(x),
            gpull.dim(x),
        );
        let cmp = open
            .injection(x, c.g.apply(x))
            .expect("g(x) lies in the down-fiber of x");
        report.check(
            format!("comparison rank at {name} (f\u{2020}M vs g*M)"),
            cmp.rank(),
            open.module.dim(x).max(gpull.dim(x)),
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::FieldSpec;
    use crate::rng::SplitMix64;

    const Q: FieldSpec = FieldSpec::Rationals;

    #[test]
    fn identity_is_a_connection() {
        let p = Poset::diamond();
        let c = GaloisConnection::identity(&p);
        assert!(verify_connection(c.f(), c.g()).is_ok());
    }

    #[test]
    fn swap_on_chain_is_not_a_connection() {
        let p = Poset::chain(2);
        // the only non-identity bijection reverses the order and is not
        // monotone, so test a monotone non-adjoint pair instead
        let f =
            MonotoneMap::new(Arc::clone(&p), Arc::clone(&p), vec![ElemId(1), ElemId(1)]).unwrap();
        let g = MonotoneMap::identity(&p);
        let err = verify_connection(&f, &g).unwrap_err();
        assert!(matches!(err, GaloisError::NotAdjoint { .. }));
    }

    #[test]
    fn floor_inclusion_pair_on_chains() {
        // inclusion of a 2-chain into a 3-chain as the bottom two elements,
        // with the "floor" map back: inclusion -| floor
        let small = Poset::chain(2);
        let big = Poset::chain(3);
        let floor = MonotoneMap::new(
            Arc::clone(&big),
            Arc::clone(&small),
            vec![ElemId(0), ElemId(1), ElemId(1)],
        )
        .unwrap();
        let include = MonotoneMap::new(
            Arc::clone(&small),
            Arc::clone(&big),
            vec![ElemId(0), ElemId(1)],
        )
        .unwrap();
        assert!(verify_connection(&include, &floor).is_ok());
        assert_eq!(right_adjoint(&include), Some(floor));
    }

    #[test]
    fn single_point_enumeration() {
        let p = Poset::chain(1);
        let got = enumerate_connections(&p, &p, ENUMERATION_CAP).unwrap();
        assert_eq!(got.len(), 1);
    }

    #[test]
    fn chain_to_point_enumeration() {
        let p = Poset::chain(2);
        let point = Poset::chain(1);
        let got = enumerate_connections(&p, &point, ENUMERATION_CAP).unwrap();
        assert_eq!(got.len(), 1);
        // g must send the point to the top of the chain
        assert_eq!(got[0].g().apply(ElemId(0)), ElemId(1));
    }

    #[test]
    fn enumerated_pairs_verify_and_adjoints_are_unique() {
        let cat = poset_catalog();
        for (_, p) in &cat {
            for (_, q) in &cat {
                let all = enumerate_connections(p, q, ENUMERATION_CAP).unwrap();
                for c in &all {
                    assert!(verify_connection(c.f(), c.g()).is_ok());
                }
                for i in 0..all.len() {
                    for j in (i + 1)..all.len() {
                        assert_ne!(all[i].f(), all[j].f());
                        assert_ne!(all[i].g(), all[j].g());
                    }
                }
            }
        }
    }

    #[test]
    fn size_cap_is_enforced() {
        let p = Poset::chain(7);
        let q = Poset::chain(2);
        assert!(matches!(
            enumerate_connections(&p, &q, ENUMERATION_CAP),
            Err(GaloisError::SizeCap(7, 6))
        ));
    }

    #[test]
    fn rota_classical_on_identity_and_empty_fibers() {
        let p = Poset::diamond();
        let c = GaloisConnection::identity(&p);
        assert!(rota_classical_check(&c).passed());
    }

    #[test]
    fn rota_inversion_trivial_cases() {
        let p = Poset::chain(3);
        let c = GaloisConnection::identity(&p);
        let zero = GrFunction::zero(&p);
        assert!(rota_inversion_check(&c, &zero).unwrap().passed());
    }

    #[test]
    fn rota_inversion_on_indicator_functions_matches_classical() {
        let p = Poset::chain(3);
        let q = Poset::diamond();
        for c in enumerate_connections(&p, &q, ENUMERATION_CAP).unwrap() {
            for y in q.elements() {
                let ind = GrFunction::indicator(&q, y);
                assert!(rota_inversion_check(&c, &ind).unwrap().passed());
            }
            assert!(rota_classical_check(&c).passed());
        }
    }

    #[test]
    fn rota_ext_identity_connection_reduces_to_euler_check() {
        let p = Poset::diamond();
        let c = GaloisConnection::identity(&p);
        let n = PosetModule::random(&p, Q, 3, 3);
        for a in p.elements() {
            assert!(rota_ext_check(&c, &n, a).unwrap().passed());
        }
    }

    #[test]
    fn rota_ext_zero_module_is_all_zero() {
        let p = Poset::chain(2);
        let q = Poset::boolean2();
        for c in enumerate_connections(&p, &q, ENUMERATION_CAP).unwrap() {
            let n = PosetModule::zero(&q, Q);
            for a in p.elements() {
                let report = rota_ext_check(&c, &n, a).unwrap();
                assert!(report.passed());
                for item in &report.items {
                    assert_eq!(item.lhs, "0");
                }
            }
        }
    }

    #[test]
    fn adjunction_dims_for_identity() {
        let p = Poset::diamond();
        let f = MonotoneMap::identity(&p);
        let m = PosetModule::random(&p, Q, 3, 21);
        let n = PosetModule::random(&p, Q, 3, 22);
        assert!(adjunction_dim_check(&f, &m, &n).unwrap().passed());
    }

    #[test]
    fn adjunction_dims_for_zero_modules() {
        let p = Poset::chain(2);
        let q = Poset::diamond();
        let mut rng = SplitMix64::new(8);
        let f = crate::poset::random_monotone_map(&p, &q, &mut rng);
        let m = PosetModule::zero(&p, Q);
        let n = PosetModule::zero(&q, Q);
        let report = adjunction_dim_check(&f, &m, &n).unwrap();
        assert!(report.passed());
        assert!(report.items.iter().all(|i| i.lhs == "0"));
    }

    #[test]
    fn functor_equalities_on_identity_connection() {
        let p = Poset::diamond();
        let c = GaloisConnection::identity(&p);
        let n = PosetModule::random(&p, Q, 3, 31);
        let m = PosetModule::random(&p, Q, 3, 32);
        assert!(check_functor_equalities(&c, &n, &m).unwrap().passed());
    }

    #[test]
    fn functor_equalities_on_enumerated_connections() {
        let p = Poset::chain(3);
        let q = Poset::diamond();
        let mut seed = 100;
        for c in enumerate_connections(&p, &q, ENUMERATION_CAP).unwrap() {
            let n = PosetModule::random(&q, Q, 2, seed);
            let m = PosetModule::random(&p, Q, 2, seed + 1);
            seed += 2;
            assert!(check_functor_equalities(&c, &n, &m).unwrap().passed());
        }
    }

    #[test]
    fn fibers_of_right_adjoints_are_spreads() {
        let cat = poset_catalog();
        for (_, p) in &cat {
            for (_, q) in &cat {
                for c in enumerate_connections(p, q, ENUMERATION_CAP).unwrap() {
                    for a in p.elements() {
                        assert!(q.is_spread(c.g().fiber(a)));
                    }
                }
            }
        }
    }
}
