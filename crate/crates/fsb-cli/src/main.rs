//! `fsb`: exact computations with formed spaces over Z and Z/m.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use fsb_cli::io;
use fsb_cli::ranges::{stability_ranges, RangeQuery};
use fsb_cli::suites::{run_suite, SUITE_NAMES};
use fsb_core::{
    arc_genus, aut_group, braid_matrix, build_complex, connectivity_report,
    destabilization_count_check, is_isomorphic, orbit_nonseparating, reduce_to_standard,
    reduced_homology, ComplexKind, Error, FormedSpace, Morphism,
};

#[derive(Parser)]
#[command(
    name = "fsb",
    version,
    about = "Exact computations with formed spaces with boundary over Z and Z/m"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify a space: invariant tuple, standard model, and a checked
    /// base change from the model onto the input.
    Classify {
        /// Formed space JSON file ("-" for stdin).
        space: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide isomorphism of two spaces; emits a checked witness or null.
    Iso {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Genus invariants of a space: hyperbolic genus, kernel genus, arc
    /// genus, and the method that certified them.
    Genus {
        space: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The braiding isomorphism X^n # X^m -> X^m # X^n.
    Braid {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value = "Z")]
        ring: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build an arc complex; optionally compute reduced homology or verify
    /// the closed-form connectivity bound.
    Complex {
        /// Formed space JSON file; exclusive with --x-power.
        #[arg(long, conflicts_with = "x_power")]
        space: Option<PathBuf>,
        /// Use the n-th X-power as the space (needs --ring).
        #[arg(long)]
        x_power: Option<usize>,
        #[arg(long)]
        ring: Option<String>,
        /// Complex kind: aalg, b, d, or u (case-insensitive).
        #[arg(long)]
        kind: String,
        /// Coset JSON {"base": [...], "subgens": [[...], ...]} for --kind u;
        /// defaults to the full module.
        #[arg(long)]
        coset: Option<PathBuf>,
        /// Largest simplex dimension to build.
        #[arg(long, default_value_t = 2)]
        max_dim: usize,
        /// Compute reduced homology through degree max_dim - 1.
        #[arg(long)]
        homology: bool,
        /// Verify the closed-form connectivity bound (implies homology).
        #[arg(long)]
        connectivity: bool,
        /// Emit the homology table as CSV instead of JSON.
        #[arg(long)]
        csv: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Counting identity: ordered p-simplices of the disordered complex
    /// against the automorphism order ratio.
    Wcount {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        ring: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Automorphism group of a space over a prime field: order, generators,
    /// and orbits on non-separating arcs.
    Aut {
        #[arg(long, conflicts_with = "x_power")]
        space: Option<PathBuf>,
        #[arg(long)]
        x_power: Option<usize>,
        #[arg(long)]
        ring: Option<String>,
        /// Enumeration budget on the group order.
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Stable ranges for homology in rank n with constant or degree-r
    /// polynomial coefficients.
    Ranges {
        #[arg(long)]
        n: i64,
        #[arg(long, default_value = "Z")]
        ring: String,
        /// Polynomial coefficient degree; omit for constant coefficients.
        #[arg(long)]
        degree: Option<i64>,
        /// Emit as CSV instead of JSON.
        #[arg(long)]
        csv: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named verification suite and emit its JSON report. Exits
    /// nonzero when any check fails, printing the first failing
    /// certificate to stderr.
    Suite {
        /// One of: braid, classify, genus, connectivity, counting,
        /// cancellation.
        name: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Cost budget; checks that exceed it are reported as skipped.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn u128_json(x: u128) -> Value {
    serde_json::Number::from_u128(x).map(Value::Number).unwrap_or_else(|| json!(x.to_string()))
}

fn morphism_json(w: &Morphism) -> Value {
    json!({
        "src": w.src.to_json(),
        "tgt": w.tgt.to_json(),
        "mat": fsb_core::formed::mat_to_json_rows(&w.mat),
        "inverse": w
            .inverse_morphism()
            .map(|i| fsb_core::formed::mat_to_json_rows(&i.mat))
            .unwrap_or(Value::Null),
    })
}

fn parse_kind(kind: &str, coset: Option<&Path>, rank: usize) -> anyhow::Result<ComplexKind> {
    let lowered = kind.to_ascii_lowercase();
    match lowered.as_str() {
        "aalg" | "a" => Ok(ComplexKind::Aalg),
        "b" => Ok(ComplexKind::B),
        "d" => Ok(ComplexKind::D),
        "u" => {
            let (base, subgens) = match coset {
                Some(path) => io::load_coset(path)?,
                None => (
                    vec![BigInt::zero(); rank],
                    (0..rank)
                        .map(|i| {
                            let mut v = vec![BigInt::zero(); rank];
                            v[i] = BigInt::one();
                            v
                        })
                        .collect(),
                ),
            };
            Ok(ComplexKind::U { base, subgens })
        }
        other => bail!("unknown complex kind '{other}': expected aalg, b, d, or u"),
    }
}

/// The space for commands that accept either a file or an X-power.
fn space_arg(
    space: Option<&Path>,
    x_power: Option<usize>,
    ring: Option<&str>,
) -> anyhow::Result<FormedSpace> {
    match (space, x_power) {
        (Some(path), None) => io::load_space(path),
        (None, Some(n)) => {
            let ring = ring.context("--x-power needs --ring")?;
            Ok(FormedSpace::x_power(io::parse_ring(ring)?, n))
        }
        (None, None) => bail!("need either --space or --x-power"),
        (Some(_), Some(_)) => unreachable!("clap rejects the conflict"),
    }
}

fn main() -> std::process::ExitCode {
    match run() {
        Ok(()) => std::process::ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::ExitCode::from(1)
        }
    }
}

fn run() -> anyhow::Result<()> {
    match Cli::parse().cmd {
        Cmd::Classify { space, out } => {
            let a = io::load_space(&space)?;
            let (fd, witness) = reduce_to_standard(&a)?;
            io::emit_json(
                &json!({
                    "form_data": fd.to_json(),
                    "standard_model": witness.src.to_json(),
                    "base_change": morphism_json(&witness),
                }),
                out.as_deref(),
            )
        }
        Cmd::Iso { a, b, out } => {
            let sa = io::load_space(&a)?;
            let sb = io::load_space(&b)?;
            let witness = is_isomorphic(&sa, &sb)?;
            io::emit_json(
                &json!({
                    "isomorphic": witness.is_some(),
                    "witness": witness.map(|w| morphism_json(&w)).unwrap_or(Value::Null),
                }),
                out.as_deref(),
            )
        }
        Cmd::Genus { space, out } => {
            let a = io::load_space(&space)?;
            let report = arc_genus(&a)?;
            io::emit_json(&serde_json::to_value(&report)?, out.as_deref())
        }
        Cmd::Braid { n, m, ring, out } => {
            let ring = io::parse_ring(&ring)?;
            let beta = braid_matrix(ring, n, m);
            io::emit_json(&morphism_json(&beta), out.as_deref())
        }
        Cmd::Complex {
            space,
            x_power,
            ring,
            kind,
            coset,
            max_dim,
            homology,
            connectivity,
            csv,
            out,
        } => {
            let a = space_arg(space.as_deref(), x_power, ring.as_deref())?;
            let kind = parse_kind(&kind, coset.as_deref(), a.rank)?;
            if csv && !(homology || connectivity) {
                bail!("--csv emits the homology table; pass --homology or --connectivity");
            }
            let report = if connectivity {
                Some(connectivity_report(&a, kind.clone(), max_dim)?)
            } else if homology {
                let cx = build_complex(&a, kind.clone(), max_dim)?;
                Some(reduced_homology(&cx, max_dim as i64 - 1)?)
            } else {
                None
            };
            if csv {
                return io::emit_text(&io::homology_csv(report.as_ref().unwrap())?, out.as_deref());
            }
            let cx = build_complex(&a, kind, max_dim)?;
            let mut payload = json!({
                "ring": io::ring_to_string(a.ring),
                "rank": a.rank,
                "kind": format!("{:?}", cx.kind),
                "max_dim": max_dim,
                "counts": cx.counts(),
            });
            if let Some(r) = report {
                payload["homology"] = io::homology_json(&r);
            }
            io::emit_json(&payload, out.as_deref())
        }
        Cmd::Wcount { n, p, ring, out } => {
            let ring = io::parse_ring(&ring)?;
            let check = destabilization_count_check(n, p, ring)?;
            io::emit_json(
                &json!({
                    "n": n,
                    "p": p,
                    "ring": io::ring_to_string(ring),
                    "ordered_simplices": u128_json(check.lhs),
                    "order_ratio": u128_json(check.rhs),
                    "equal": check.equal,
                }),
                out.as_deref(),
            )?;
            if !check.equal {
                bail!("counting identity fails at n={n}, p={p}");
            }
            Ok(())
        }
        Cmd::Aut { space, x_power, ring, budget, out } => {
            let a = space_arg(space.as_deref(), x_power, ring.as_deref())?;
            let payload = match aut_group(&a, budget) {
                Ok(group) => {
                    let orbits = orbit_nonseparating(&a)?;
                    json!({
                        "ring": io::ring_to_string(a.ring),
                        "rank": a.rank,
                        "order": group.order.map(u128_json).unwrap_or(Value::Null),
                        "generator_count": group.generators.len(),
                        "enumerated": group.elements.is_some(),
                        "nonseparating_orbit_sizes":
                            orbits.iter().map(Vec::len).collect::<Vec<_>>(),
                        "transitive_on_nonseparating": orbits.len() == 1,
                    })
                }
                Err(Error::BudgetExceeded(note)) => json!({
                    "ring": io::ring_to_string(a.ring),
                    "rank": a.rank,
                    "order": Value::Null,
                    "note": note,
                }),
                Err(e) => return Err(e.into()),
            };
            io::emit_json(&payload, out.as_deref())
        }
        Cmd::Ranges { n, ring, degree, csv, out } => {
            let query = RangeQuery::new(n, io::parse_ring(&ring)?, degree)?;
            let row = stability_ranges(&query)?;
            if csv {
                return io::emit_text(&io::ranges_csv(std::slice::from_ref(&row))?, out.as_deref());
            }
            io::emit_json(&serde_json::to_value(&row)?, out.as_deref())
        }
        Cmd::Suite { name, seed, budget, out } => {
            if !SUITE_NAMES.contains(&name.as_str()) {
                bail!("unknown suite '{name}': expected one of {}", SUITE_NAMES.join(", "));
            }
            let report = run_suite(&name, seed, budget)?;
            io::emit_json(&serde_json::to_value(&report)?, out.as_deref())?;
            if !report.all_passed {
                let first = report.first_failure().expect("a failed check exists");
                eprintln!(
                    "suite '{name}' failed at check '{}':\n{}",
                    first.name,
                    serde_json::to_string_pretty(first)?
                );
                bail!("suite '{name}' failed {} of {} checks", report.failed, report.checks.len());
            }
            Ok(())
        }
    }
}
