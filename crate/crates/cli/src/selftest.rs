//! The randomized verification battery behind `mucoh selftest`.
//!
//! Everything is derived from one 64-bit seed through split streams, one per
//! (category, trial) pair, so the report is byte-identical across runs and
//! independent of the worker count.

use mucoh_core::cohomology::check_resolution_exact;
use mucoh_core::galois::{
    enumerate_connections, poset_catalog, rota_classical_check, rota_inversion_check,
    ENUMERATION_CAP,
};
use mucoh_core::incidence::{mobius_hall, mobius_recursive, GrFunction};
use mucoh_core::linalg::FieldSpec;
use mucoh_core::module::PosetModule;
use mucoh_core::poset::random_poset;
use mucoh_core::report::{CheckItem, CheckReport};
use mucoh_core::rng::SplitMix64;

use crate::output::Report;

/// How many failing trials to describe in detail per category.
const FAILURE_DETAIL_CAP: usize = 5;

struct Category {
    name: &'static str,
    passed: usize,
    total: usize,
    failures: Vec<String>,
}

impl Category {
    fn collect(name: &'static str, outcomes: Vec<Result<(), String>>) -> Category {
        let total = outcomes.len();
        let failures: Vec<String> = outcomes.into_iter().filter_map(Result::err).collect();
        Category {
            name,
            passed: total - failures.len(),
            total,
            failures,
        }
    }
}

/// Runs the battery: Möbius oracle agreement, euler-check, resolution-check,
/// and the Rota checks over the poset catalog. Trial counts scale with
/// `trials`; zero trials yields a trivially passing empty report.
pub fn run(seed: u64, trials: usize, jobs: usize) -> Report {
    let base = SplitMix64::new(seed);
    let mut categories = Vec::new();

    let oracle = parallel_map(jobs, trials, |i| {
        let mut rng = base.derive((1 << 32) | i as u64);
        let p = random_poset(8, &mut rng);
        if mobius_recursive(&p) == mobius_hall(&p) {
            Ok(())
        } else {
            Err(format!("oracle disagreement on poset #{i}"))
        }
    });
    categories.push(Category::collect("mobius oracle agreement", oracle));

    let per_field = trials.div_ceil(4).min(trials);
    let euler = parallel_map(jobs, 2 * per_field, |i| {
        let mut rng = base.derive((2 << 32) | i as u64);
        let field = if i < per_field {
            FieldSpec::Rationals
        } else {
            FieldSpec::prime(7).expect("7 is prime")
        };
        let p = random_poset(6, &mut rng);
        let n = PosetModule::random(&p, field, 3, rng.next_u64());
        if mucoh_core::cohomology::euler_check(&n).passed() {
            Ok(())
        } else {
            Err(format!("euler-check failed on module #{i}"))
        }
    });
    categories.push(Category::collect("euler-check", euler));

    let resolution = parallel_map(jobs, per_field, |i| {
        let mut rng = base.derive((3 << 32) | i as u64);
        let p = random_poset(5, &mut rng);
        let n = PosetModule::random(&p, FieldSpec::Rationals, 3, rng.next_u64());
        match check_resolution_exact(&n) {
            Ok(Ok(())) => Ok(()),
            Ok(Err(fail)) => Err(format!(
                "resolution of module #{i} inexact at ({}, degree {})",
                p.name(fail.element),
                fail.degree
            )),
            Err(e) => Err(format!("resolution of module #{i}: {e}")),
        }
    });
    categories.push(Category::collect("resolution-check", resolution));

    let rota = if trials == 0 {
        Vec::new()
    } else {
        let functions_per_connection = trials.min(20);
        let mut connections = Vec::new();
        let catalog = poset_catalog();
        for (pname, p) in &catalog {
            for (qname, q) in &catalog {
                for (k, c) in enumerate_connections(p, q, ENUMERATION_CAP)
                    .expect("catalog posets fit the cap")
                    .into_iter()
                    .enumerate()
                {
                    connections.push((format!("{pname}->{qname}#{k}"), c));
                }
            }
        }
        parallel_map(jobs, connections.len(), |i| {
            let (label, c) = &connections[i];
            let mut rng = base.derive((4 << 32) | i as u64);
            if !rota_classical_check(c).passed() {
                return Err(format!("classical rota failed for {label}"));
            }
            for _ in 0..functions_per_connection {
                let n = GrFunction::random(c.target(), -5, 5, &mut rng);
                let report = rota_inversion_check(c, &n).expect("connection posets align");
                if !report.passed() {
                    return Err(format!("rota inversion failed for {label}"));
                }
            }
            Ok(())
        })
    };
    categories.push(Category::collect("rota checks over catalog", rota));

    let mut check = CheckReport::new();
    for cat in &categories {
        check.push(CheckItem {
            label: cat.name.to_string(),
            lhs: format!("{} passed", cat.passed),
            rhs: format!("{} passed", cat.total),
            pass: cat.passed == cat.total,
        });
        for failure in cat.failures.iter().take(FAILURE_DETAIL_CAP) {
            check.push(CheckItem {
                label: format!("{}: {failure}", cat.name),
                lhs: "fail".to_string(),
                rhs: "pass".to_string(),
                pass: false,
            });
        }
    }
    let mut report = Report::from_check("selftest", check);
    report.seed = Some(seed);
    report.trials = Some(trials);
    report
}

/// Maps `f` over `0..count`, fanning out over at most `jobs` threads. The
/// output order is by index, so results do not depend on scheduling.
fn parallel_map<T, F>(jobs: usize, count: usize, f: F) -> Vec<Result<T, String>>
where
    T: Send,
    F: Fn(usize) -> Result<T, String> + Sync,
{
    let jobs = jobs.max(1).min(count.max(1));
    if jobs == 1 {
        return (0..count).map(&f).collect();
    }
    let chunk = count.div_ceil(jobs);
    let mut out: Vec<Vec<Result<T, String>>> = Vec::new();
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..jobs)
            .map(|w| {
                let f = &f;
                scope.spawn(move || {
                    let lo = w * chunk;
                    let hi = ((w + 1) * chunk).min(count);
                    (lo..hi).map(f).collect::<Vec<_>>()
                })
            })
            .collect();
        for handle in handles {
            out.push(handle.join().expect("worker thread panicked"));
        }
    });
    out.into_iter().flatten().collect()
}
