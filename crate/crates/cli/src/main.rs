//! `mucoh`: exact Möbius cohomology of poset modules from the command line.
//!
//! Exit codes: 0 when every requested check passes, 1 when a check fails,
//! 2 on usage errors, 3 on invalid input files.

mod output;
mod selftest;

use std::error::Error;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand};

use mucoh_core::cohomology::{check_resolution_exact, euler_check, hom_complex};
use mucoh_core::galois::{
    adjunction_dim_check, enumerate_connections, rota_classical_check, rota_ext_check,
    rota_inversion_check, verify_connection, GaloisConnection,
};
use mucoh_core::incidence::mobius_recursive;
use mucoh_core::io::{parse_grfunction, parse_module, parse_monotone_map, parse_poset};
use mucoh_core::poset::{ElemSet, Poset};
use mucoh_core::report::CheckReport;

use output::{Format, Report, ValueTable};

#[derive(Parser)]
#[command(
    name = "mucoh",
    version,
    about = "Exact Möbius cohomology of poset modules: inversion tables, cochain complexes, and Galois connection checks"
)]
struct Cli {
    /// Output format for tables and reports
    #[arg(long, global = true, value_enum, default_value = "table")]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Möbius function table of a poset
    Mobius {
        /// Poset file (JSON)
        poset: PathBuf,
    },
    /// Möbius inversion of an integer function on a poset
    Invert {
        /// Poset file (JSON)
        poset: PathBuf,
        /// Function file (JSON)
        function: PathBuf,
        /// Compute the lower inversion instead of the upper one
        #[arg(long)]
        lower: bool,
    },
    /// Per-degree cohomology dimensions and Euler characteristic of a module
    Cohomology {
        /// Module file (JSON); the poset is read from the file
        module: PathBuf,
        /// Restrict to the Möbius cohomology at one element
        #[arg(long)]
        at: Option<String>,
        /// Compute over a spread, given as comma-separated element names
        #[arg(long, conflicts_with = "at", value_delimiter = ',')]
        spread: Option<Vec<String>>,
    },
    /// Compare the inversion of the dimension function with the Euler
    /// characteristic of Möbius cohomology at every element
    EulerCheck {
        /// Module file (JSON)
        module: PathBuf,
    },
    /// Verify exactness of the standard cofree resolution of a module
    ResolutionCheck {
        /// Module file (JSON)
        module: PathBuf,
    },
    /// Verify a Galois connection and run the requested theorem checks
    GaloisCheck {
        /// Source poset P (JSON)
        p: PathBuf,
        /// Target poset Q (JSON)
        q: PathBuf,
        /// Left adjoint f : P -> Q (JSON map file)
        #[arg(long)]
        f: PathBuf,
        /// Right adjoint g : Q -> P (JSON map file)
        #[arg(long)]
        g: PathBuf,
        /// Check Rota's classical identity for all (a, y)
        #[arg(long)]
        rota: bool,
        /// Check the inversion form against a function on Q
        #[arg(long, value_name = "FN_JSON")]
        rota_inversion: Option<PathBuf>,
        /// Check the Ext form against a module on Q (requires --at)
        #[arg(long, value_name = "MODULE_JSON", requires = "at")]
        rota_ext: Option<PathBuf>,
        /// Element of P for --rota-ext
        #[arg(long)]
        at: Option<String>,
        /// Check the hom-dimension adjunctions against modules on P and Q
        #[arg(long, value_names = ["MP_JSON", "MQ_JSON"], num_args = 2)]
        adjunctions: Option<Vec<PathBuf>>,
    },
    /// List all Galois connections between two posets
    EnumerateGalois {
        /// Source poset P (JSON)
        p: PathBuf,
        /// Target poset Q (JSON)
        q: PathBuf,
        /// Size cap for the brute-force enumeration
        #[arg(long, default_value_t = mucoh_core::galois::ENUMERATION_CAP)]
        max_size: usize,
    },
    /// Run the randomized verification battery
    Selftest {
        /// Seed for the deterministic generator (default: MOBIUS_SEED or 42)
        #[arg(long)]
        seed: Option<u64>,
        /// Number of random trials per category
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// Worker threads for independent trials
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(3)
        }
    }
}

fn read(path: &Path) -> Result<String, Box<dyn Error>> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn resolve(poset: &Poset, name: &str) -> Result<mucoh_core::ElemId, Box<dyn Error>> {
    Ok(poset.require(name)?)
}

fn run(cli: Cli) -> Result<ExitCode, Box<dyn Error>> {
    let format = cli.format;
    match cli.command {
        Command::Mobius { poset } => {
            let p = Arc::new(parse_poset(&read(&poset)?)?);
            let mu = mobius_recursive(&p);
            let mut rows = Vec::new();
            for a in p.elements() {
                for b in p.up_set(a).iter() {
                    rows.push(vec![
                        p.name(a).to_string(),
                        p.name(b).to_string(),
                        mu.get(a, b).expect("interval").to_string(),
                    ]);
                }
            }
            ValueTable {
                command: "mobius".into(),
                columns: vec!["from".into(), "to".into(), "mu".into()],
                rows,
            }
            .print(format);
            Ok(ExitCode::SUCCESS)
        }
        Command::Invert {
            poset,
            function,
            lower,
        } => {
            let p = Arc::new(parse_poset(&read(&poset)?)?);
            let f = parse_grfunction(&read(&function)?, &p)?;
            let inverted = if lower {
                f.lower_inversion()
            } else {
                f.upper_inversion()
            };
            let column = if lower {
                "lower_inversion"
            } else {
                "upper_inversion"
            };
            let rows = p
                .elements()
                .map(|a| vec![p.name(a).to_string(), inverted.get(a).to_string()])
                .collect();
            ValueTable {
                command: "invert".into(),
                columns: vec!["element".into(), column.into()],
                rows,
            }
            .print(format);
            Ok(ExitCode::SUCCESS)
        }
        Command::Cohomology { module, at, spread } => {
            let n = parse_module(&read(&module)?, None)?;
            let p = Arc::clone(n.poset());
            let mut targets: Vec<(String, ElemSet)> = Vec::new();
            if let Some(name) = at {
                let a = resolve(&p, &name)?;
                targets.push((name, ElemSet::singleton(a)));
            } else if let Some(names) = spread {
                let mut z = ElemSet::empty();
                for name in &names {
                    z.insert(resolve(&p, name)?);
                }
                targets.push((format!("{{{}}}", names.join(",")), z));
            } else {
                for a in p.elements() {
                    targets.push((p.name(a).to_string(), ElemSet::singleton(a)));
                }
            }
            let mut rows = Vec::new();
            for (label, z) in targets {
                let result = hom_complex(z, &n)?.cohomology();
                let betti: Vec<String> = result.betti.iter().map(usize::to_string).collect();
                rows.push(vec![
                    label,
                    format!("[{}]", betti.join(", ")),
                    result.euler.to_string(),
                ]);
            }
            ValueTable {
                command: "cohomology".into(),
                columns: vec!["at".into(), "betti".into(), "euler".into()],
                rows,
            }
            .print(format);
            Ok(ExitCode::SUCCESS)
        }
        Command::EulerCheck { module } => {
            let n = parse_module(&read(&module)?, None)?;
            let report = Report::from_check("euler-check", euler_check(&n));
            report.print(format);
            Ok(exit_by_status(&report))
        }
        Command::ResolutionCheck { module } => {
            let n = parse_module(&read(&module)?, None)?;
            let poset = Arc::clone(n.poset());
            let mut check = CheckReport::new();
            let outcome = match check_resolution_exact(&n)? {
                Ok(()) => "exact".to_string(),
                Err(fail) => format!(
                    "first failure at ({}, degree {})",
                    poset.name(fail.element),
                    fail.degree
                ),
            };
            check.check("standard cofree resolution", "exact".to_string(), outcome);
            let report = Report::from_check("resolution-check", check);
            report.print(format);
            Ok(exit_by_status(&report))
        }
        Command::GaloisCheck {
            p,
            q,
            f,
            g,
            rota,
            rota_inversion,
            rota_ext,
            at,
            adjunctions,
        } => {
            let p = Arc::new(parse_poset(&read(&p)?)?);
            let q = Arc::new(parse_poset(&read(&q)?)?);
            let f = parse_monotone_map(&read(&f)?, &p, &q)?;
            let g = parse_monotone_map(&read(&g)?, &q, &p)?;
            let mut check = CheckReport::new();
            let verdict = match verify_connection(&f, &g) {
                Ok(()) => "adjoint".to_string(),
                Err(e) => e.to_string(),
            };
            let is_connection = check.check("f -| g adjointness", "adjoint".to_string(), verdict);
            if is_connection {
                let connection = GaloisConnection::new(f.clone(), g)?;
                if rota {
                    check.merge(rota_classical_check(&connection));
                }
                if let Some(path) = rota_inversion {
                    let n = parse_grfunction(&read(&path)?, &q)?;
                    check.merge(rota_inversion_check(&connection, &n)?);
                }
                if let Some(path) = rota_ext {
                    let n = parse_module(&read(&path)?, Some(&q))?;
                    let name = at.expect("clap enforces --at with --rota-ext");
                    let a = resolve(&p, &name)?;
                    check.merge(rota_ext_check(&connection, &n, a)?);
                }
                if let Some(paths) = adjunctions {
                    let m_p = parse_module(&read(&paths[0])?, Some(&p))?;
                    let m_q = parse_module(&read(&paths[1])?, Some(&q))?;
                    check.merge(adjunction_dim_check(&f, &m_p, &m_q)?);
                }
            }
            let report = Report::from_check("galois-check", check);
            report.print(format);
            Ok(exit_by_status(&report))
        }
        Command::EnumerateGalois { p, q, max_size } => {
            let p = Arc::new(parse_poset(&read(&p)?)?);
            let q = Arc::new(parse_poset(&read(&q)?)?);
            let connections = enumerate_connections(&p, &q, max_size)?;
            let rows = connections
                .iter()
                .enumerate()
                .map(|(i, c)| vec![i.to_string(), c.f().to_string(), c.g().to_string()])
                .collect();
            ValueTable {
                command: "enumerate-galois".into(),
                columns: vec!["index".into(), "f".into(), "g".into()],
                rows,
            }
            .print(format);
            Ok(ExitCode::SUCCESS)
        }
        Command::Selftest { seed, trials, jobs } => {
            let seed = seed
                .or_else(|| {
                    std::env::var("MOBIUS_SEED")
                        .ok()
                        .and_then(|v| v.parse().ok())
                })
                .unwrap_or(42);
            let start = Instant::now();
            let mut report = selftest::run(seed, trials, jobs);
            report.elapsed = Some(start.elapsed());
            report.print(format);
            Ok(exit_by_status(&report))
        }
    }
}

fn exit_by_status(report: &Report) -> ExitCode {
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
