//! Command-line front end: counts, zeta data, pencil analysis,
//! automorphisms, the elliptic cover, the quotient, the exhaustive
//! sextic search, and the full claim suite, all driven by the model
//! registry.
//!
//! Exit codes: 0 when every executed claim passed, 1 when a verification
//! claim failed (the claim is named on stderr), 2 for usage and input
//! errors.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::json;

use maxcurve::counting::{
    count_net, count_plane, is_smooth_plane, NetStrategy, DEFAULT_BUDGET,
};
use maxcurve::cover::{quotient_membership, verify_cover, CoverMap};
use maxcurve::gf::Field;
use maxcurve::pencil::{brute_force_plane_autos, discriminant_curve};
use maxcurve::poly::MultiPoly;
use maxcurve::registry::{bundled, parse_field_spec, registry_load, Model, Payload, Registry};
use maxcurve::report::{report_emit, Report, ReportFormat};
use maxcurve::search::{
    build_tables, candidate_index, run_search, screen, sextic_space, SearchConfig,
};
use maxcurve::verify;
use maxcurve::zeta::{count_to_u64, counts_from_lpoly, lpoly_from_counts};

#[derive(Parser)]
#[command(
    name = "maxcurve",
    version,
    about = "Exact verification of a genus-5 curve over F_3 with 13 rational points"
)]
struct Cli {
    /// Emit the report as JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Load models from this registry file instead of the bundled one.
    #[arg(long, global = true, value_name = "PATH")]
    registry: Option<PathBuf>,

    /// Worker threads for parallel subcommands (0 = all available).
    /// Thread count never changes a result payload.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count rational points of a model over an extension field.
    Count {
        /// Registry id of the model to count.
        #[arg(long)]
        model: String,
        /// Extension field, written p^k.
        #[arg(long, default_value = "3^1")]
        ext: String,
        /// Operation budget (term evaluations) before refusing.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Point counts over a tower of extensions, and the L-polynomial
    /// once enough counts are available.
    Zeta {
        #[arg(long)]
        model: String,
        /// Count over F_{p^k} for k = 1..=through.
        #[arg(long)]
        through: u32,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Discriminant curve of a quadric net and its smoothness
    /// certificate.
    Pencil {
        #[arg(long, default_value = "C.canonical")]
        model: String,
    },
    /// Exhaustive linear automorphism search for a plane curve.
    Autos {
        #[arg(long)]
        model: String,
        #[arg(long, default_value = "3^1")]
        ext: String,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Verify the rational map between two curve models and report its
    /// fiber census.
    Cover {
        #[arg(long, default_value = "cover.map")]
        model: String,
        /// Census extension ceiling (fibers over points of degree <= through).
        #[arg(long, default_value_t = 2)]
        through: u32,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Check that a quartic form lies in the structure generated by a
    /// quadric net (the quotient-curve relation).
    Quotient {
        #[arg(long, default_value = "D.quartic")]
        model: String,
        #[arg(long, default_value = "C.canonical")]
        net: String,
    },
    /// Scan all canonical sextics through the 13 rational plane points
    /// and shortlist those matching the counting profile.
    Search {
        /// Write periodic checkpoints to this file.
        #[arg(long, value_name = "PATH")]
        checkpoint: Option<PathBuf>,
        /// Continue from the checkpoint instead of starting over.
        #[arg(long)]
        resume: bool,
        /// Stop after this many candidates (a checkpoint is written).
        #[arg(long, value_name = "EVALS")]
        budget: Option<u64>,
    },
    /// Run the complete claim suite and report each claim.
    VerifyAll {},
}

/// How a run can fail, mapped onto the exit-code contract.
enum CliError {
    /// Bad arguments, unknown models, unreadable files: exit 2.
    Usage(String),
    /// A verification claim failed: exit 1, claim named.
    Claim(String),
}

impl CliError {
    fn usage<E: std::fmt::Display>(e: E) -> CliError {
        CliError::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        // applies to every rayon-parallel stage below; results never
        // depend on it
        let threads = if n == 0 { num_threads_available() } else { n };
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    let registry = match &cli.registry {
        None => bundled(),
        Some(path) => match registry_load(path) {
            Ok(r) => r,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        },
    };
    let format = if cli.json {
        ReportFormat::Json
    } else {
        ReportFormat::Text
    };
    match dispatch(&cli, &registry) {
        Ok((report, all_passed)) => {
            print!("{}", report_emit(&report, format));
            if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Claim(msg)) => {
            eprintln!("claim failed: {msg}");
            ExitCode::from(1)
        }
    }
}

fn num_threads_available() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

fn lookup<'a>(reg: &'a Registry, id: &str) -> Result<&'a Model, CliError> {
    reg.get(id).ok_or_else(|| {
        CliError::Usage(format!(
            "model `{id}` is not in the registry (known: {})",
            reg.ids().join(", ")
        ))
    })
}

fn parse_ext(spec: &str) -> Result<Field, CliError> {
    let (p, k) = parse_field_spec(spec)
        .ok_or_else(|| CliError::Usage(format!("cannot parse extension `{spec}`; use p^k")))?;
    Field::new(p, k).map_err(CliError::usage)
}

/// Run one subcommand against the registry.  Returns the report and
/// whether every claim the command executed passed.
fn dispatch(cli: &Cli, reg: &Registry) -> Result<(Report, bool), CliError> {
    let start = Instant::now();
    let mut out = match &cli.command {
        Command::Count { model, ext, budget } => cmd_count(reg, model, ext, *budget)?,
        Command::Zeta {
            model,
            through,
            budget,
        } => cmd_zeta(reg, model, *through, *budget)?,
        Command::Pencil { model } => cmd_pencil(reg, model)?,
        Command::Autos { model, ext, budget } => cmd_autos(reg, model, ext, *budget)?,
        Command::Cover {
            model,
            through,
            budget,
        } => cmd_cover(reg, model, *through, *budget)?,
        Command::Quotient { model, net } => cmd_quotient(reg, model, net)?,
        Command::Search {
            checkpoint,
            resume,
            budget,
        } => cmd_search(reg, cli.threads.unwrap_or(0), checkpoint, *resume, *budget)?,
        Command::VerifyAll {} => cmd_verify_all(reg)?,
    };
    out.0.elapsed_ms = start.elapsed().as_millis();
    Ok(out)
}

fn cmd_count(
    reg: &Registry,
    model_id: &str,
    ext_spec: &str,
    budget: Option<u64>,
) -> Result<(Report, bool), CliError> {
    let model = lookup(reg, model_id)?;
    let ext = parse_ext(ext_spec)?;
    let budget = budget.unwrap_or(DEFAULT_BUDGET);
    let record = if let Some(curve) = model.plane_curve() {
        count_plane(curve, &ext, budget).map_err(CliError::usage)?
    } else if let Some(net) = model.quadric_net() {
        // naive enumeration is fine in P^4(F_3) and P^4(F_9); beyond
        // that only variable elimination fits the budget
        let strategy = if ext.k() <= 2 {
            NetStrategy::Naive
        } else {
            NetStrategy::Eliminate
        };
        count_net(net, &ext, strategy, budget).map_err(CliError::usage)?
    } else {
        return Err(CliError::Usage(format!(
            "model `{model_id}` is a {}, which has no point count",
            model.kind.as_str()
        )));
    };
    let mut report = Report::new("count", ext.p(), ext.k(), &[model_id]);
    report.result = json!({
        "n": record.n,
        "strategy": record.strategy,
    });
    Ok((report, true))
}

fn cmd_zeta(
    reg: &Registry,
    model_id: &str,
    through: u32,
    budget: Option<u64>,
) -> Result<(Report, bool), CliError> {
    if through == 0 {
        return Err(CliError::Usage("--through must be at least 1".into()));
    }
    let model = lookup(reg, model_id)?;
    let budget = budget.unwrap_or(DEFAULT_BUDGET);
    let genus = model.genus.ok_or_else(|| {
        CliError::Usage(format!("model `{model_id}` declares no genus; zeta data needs one"))
    })?;
    let base = model.field.clone();

    // counts of a singular plane model are not the counts of the smooth
    // curve, so refuse those models here rather than emit wrong zeta data
    if let Some(curve) = model.plane_curve() {
        let smooth = is_smooth_plane(curve).map_err(CliError::usage)?;
        if !smooth.smooth {
            return Err(CliError::Usage(format!(
                "`{model_id}` has a singular plane model ({}); its raw counts do not \
                 define zeta data",
                smooth.detail
            )));
        }
    }

    let mut counts: Vec<u64> = Vec::new();
    for k in 1..=through {
        let ext = Field::new(base.p(), k).map_err(CliError::usage)?;
        let n = if let Some(curve) = model.plane_curve() {
            count_plane(curve, &ext, budget).map_err(CliError::usage)?.n
        } else if let Some(net) = model.quadric_net() {
            let strategy = if k <= 2 {
                NetStrategy::Naive
            } else {
                NetStrategy::Eliminate
            };
            count_net(net, &ext, strategy, budget).map_err(CliError::usage)?.n
        } else {
            return Err(CliError::Usage(format!(
                "model `{model_id}` is a {}, which has no zeta data",
                model.kind.as_str()
            )));
        };
        counts.push(n);
    }

    let mut lpoly = serde_json::Value::Null;
    let mut roundtrip = serde_json::Value::Null;
    let mut all_passed = true;
    if through >= genus {
        let l = lpoly_from_counts(&counts[..genus as usize], base.q(), genus)
            .map_err(CliError::usage)?;
        let coeffs: Vec<i64> = l
            .poly()
            .coeffs()
            .iter()
            .map(|c| i64::try_from(c).map_err(|_| ()))
            .collect::<Result<_, _>>()
            .map_err(|_| CliError::Usage("L-polynomial coefficient exceeds i64".into()))?;
        // audit: the polynomial must reproduce every count sent in
        let ok = (1..=through).all(|k| {
            count_to_u64(&counts_from_lpoly(&l, k)) == Some(counts[(k - 1) as usize])
        });
        all_passed = ok;
        lpoly = json!({
            "coefficients_ascending": coeffs,
            "degree": coeffs.len() - 1,
        });
        roundtrip = json!(ok);
    }
    let mut report = Report::new("zeta", base.p(), base.k(), &[model_id]);
    report.result = json!({
        "genus": genus,
        "through": through,
        "counts": counts,
        "lpoly": lpoly,
        "counts_match_lpoly": roundtrip,
    });
    if !all_passed {
        return Err(CliError::Claim(format!(
            "zeta {model_id}: reconstructed L-polynomial does not reproduce the counts"
        )));
    }
    Ok((report, true))
}

fn cmd_pencil(reg: &Registry, model_id: &str) -> Result<(Report, bool), CliError> {
    let model = lookup(reg, model_id)?;
    let net = model.quadric_net().ok_or_else(|| {
        CliError::Usage(format!("model `{model_id}` is not a quadric net"))
    })?;
    let disc = discriminant_curve(net).map_err(CliError::usage)?;
    let smooth = is_smooth_plane(&disc).map_err(CliError::usage)?;
    let mut report = Report::new("pencil", model.field.p(), model.field.k(), &[model_id]);
    report.result = json!({
        "discriminant": disc.equation().render(&["x", "y", "z"]),
        "degree": disc.degree(),
        "smooth": smooth.smooth,
        "extensions_searched": smooth.extensions_searched,
        "bezout_bound": smooth.bezout_bound,
        "detail": smooth.detail,
    });
    Ok((report, true))
}

fn cmd_autos(
    reg: &Registry,
    model_id: &str,
    ext_spec: &str,
    budget: Option<u64>,
) -> Result<(Report, bool), CliError> {
    let model = lookup(reg, model_id)?;
    let ext = parse_ext(ext_spec)?;
    let budget = budget.unwrap_or(DEFAULT_BUDGET);
    let curve = model.plane_curve().ok_or_else(|| {
        CliError::Usage(format!("model `{model_id}` is not a plane curve"))
    })?;
    let autos = brute_force_plane_autos(curve, &ext, budget).map_err(CliError::usage)?;
    let rendered: Vec<Vec<String>> = autos
        .iter()
        .map(|m| {
            m.matrix()
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|e| ext.render(e))
                        .collect::<Vec<_>>()
                        .join(" ")
                })
                .collect()
        })
        .collect();
    let mut report = Report::new("autos", ext.p(), ext.k(), &[model_id]);
    report.result = json!({
        "count": autos.len(),
        "matrices": rendered,
    });
    Ok((report, true))
}

fn cmd_cover(
    reg: &Registry,
    model_id: &str,
    through: u32,
    budget: Option<u64>,
) -> Result<(Report, bool), CliError> {
    let model = lookup(reg, model_id)?;
    let Payload::Rational {
        source: source_id,
        target: target_id,
        fractions,
        ..
    } = &model.payload
    else {
        return Err(CliError::Usage(format!(
            "model `{model_id}` is not a rational map"
        )));
    };
    let source_model = lookup(reg, source_id)?;
    let target_model = lookup(reg, target_id)?;
    let source = source_model.affine_equation().ok_or_else(|| {
        CliError::Usage(format!("source `{source_id}` has no affine equation"))
    })?;
    let target = target_model.affine_equation().ok_or_else(|| {
        CliError::Usage(format!("target `{target_id}` has no affine equation"))
    })?;
    let (genus_source, genus_target) = match (source_model.genus, target_model.genus) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Err(CliError::Usage(
                "source and target must declare their genus for the census".into(),
            ))
        }
    };

    let cert = verify_cover(source, fractions, target).map_err(CliError::usage)?;
    if !cert.holds {
        return Err(CliError::Claim(format!(
            "cover {model_id}: pulled-back target relation is not divisible by the source"
        )));
    }
    let map = CoverMap::new(source, fractions, target).map_err(CliError::usage)?;

    // generic degree: the largest rational fiber observed over the base
    // field; the census then checks that split fibers sum to it
    let base = model.field.clone();
    let degree = {
        let mut best = 1u32;
        let target_curve = target_model
            .plane_curve()
            .ok_or_else(|| CliError::Usage("target has no projective model".into()))?;
        let pts = maxcurve::counting::plane_points(target_curve, &base, DEFAULT_BUDGET)
            .map_err(CliError::usage)?;
        for pt in &pts {
            let fiber = map.fiber(pt, &base, DEFAULT_BUDGET).map_err(CliError::usage)?;
            best = best.max(fiber.len() as u32);
        }
        best
    };

    let census = map
        .fiber_census(
            through,
            genus_source,
            genus_target,
            degree,
            budget.unwrap_or(100_000_000),
        )
        .map_err(CliError::usage)?;
    let consistent = census.riemann_hurwitz.consistent;
    let mut report = Report::new(
        "cover",
        base.p(),
        base.k(),
        &[model_id, source_id, target_id],
    );
    report.result = json!({
        "verified": cert.holds,
        "quotient_degree": cert.quotient_degree,
        "representations": map.representation_count(),
        "degree": degree,
        "census": census,
    });
    if !consistent {
        return Err(CliError::Claim(format!(
            "cover {model_id}: fiber census is inconsistent with Riemann-Hurwitz"
        )));
    }
    Ok((report, true))
}

fn cmd_quotient(reg: &Registry, model_id: &str, net_id: &str) -> Result<(Report, bool), CliError> {
    let model = lookup(reg, model_id)?;
    let net_model = lookup(reg, net_id)?;
    let net = net_model.quadric_net().ok_or_else(|| {
        CliError::Usage(format!("model `{net_id}` is not a quadric net"))
    })?;
    let curve = model.plane_curve().ok_or_else(|| {
        CliError::Usage(format!("model `{model_id}` is not a plane curve"))
    })?;
    let base = model.field.clone();
    // embed the plane quartic into the net's five-dimensional space
    let wide: Vec<MultiPoly> = (0..3).map(|i| MultiPoly::var(&base, 5, i)).collect();
    let lifted = curve.equation().compose(&wide).map_err(CliError::usage)?;
    let member = quotient_membership(&lifted, net).map_err(CliError::usage)?;
    let mut report = Report::new("quotient", base.p(), base.k(), &[model_id, net_id]);
    report.result = json!({ "member": member });
    if !member {
        return Err(CliError::Claim(format!(
            "quotient {model_id}: form is not composed of the net's quadrics"
        )));
    }
    Ok((report, true))
}

fn cmd_search(
    reg: &Registry,
    threads: usize,
    checkpoint: &Option<PathBuf>,
    resume: bool,
    budget: Option<u64>,
) -> Result<(Report, bool), CliError> {
    let f3 = Field::new(3, 1).map_err(CliError::usage)?;
    let points: Vec<_> = f3
        .proj_points(2)
        .map(|p| [p[0].clone(), p[1].clone(), p[2].clone()])
        .collect();
    let basis = sextic_space(&f3, &points).map_err(CliError::usage)?;
    let config = SearchConfig {
        threads,
        checkpoint: checkpoint.clone(),
        resume,
        stop_after: budget,
        ..SearchConfig::default()
    };
    let outcome = run_search(&basis, &config).map_err(CliError::usage)?;

    // locate the reference sextic inside the candidate order
    let reference = reg
        .get("C.sextic2")
        .and_then(|m| m.plane_curve())
        .and_then(|curve| basis.coordinates_of(curve.equation()).ok().flatten())
        .and_then(|digits| {
            let canonical = match digits.iter().find(|&&d| d != 0) {
                Some(2) => digits.iter().map(|&d| (2 * d) % 3).collect(),
                _ => digits,
            };
            candidate_index(&canonical)
        });
    let reference_found = reference.map(|idx| {
        outcome
            .shortlist
            .binary_search_by_key(&idx, |e| e.index)
            .is_ok()
    });
    let reference_stats = reference.and_then(|_| {
        let tables = build_tables(&basis).ok()?;
        let curve = reg.get("C.sextic2")?.plane_curve()?;
        let digits = basis.coordinates_of(curve.equation()).ok()??;
        let canonical: Vec<u8> = match digits.iter().find(|&&d| d != 0) {
            Some(2) => digits.iter().map(|&d| (2 * d) % 3).collect(),
            _ => digits,
        };
        let stats = screen(&tables, &canonical).ok()?;
        Some(json!({
            "n3_plane": stats.n3_plane,
            "n9": stats.n9,
            "n27": stats.n27,
            "singular_points": stats.singular.len(),
        }))
    });

    let head: Vec<_> = outcome
        .shortlist
        .iter()
        .take(10)
        .map(|e| json!({ "index": e.index, "n9": e.n9, "n27": e.n27 }))
        .collect();
    let mut report = Report::new("search", 3, 1, &["C.sextic2"]);
    report.result = json!({
        "space_dimension": basis.dimension(),
        "canonical_total": outcome.canonical_total,
        "raw_vector_total": outcome.raw_vector_total,
        "processed": outcome.processed,
        "finished": outcome.finished,
        "resumed_from": outcome.resumed_from,
        "truncated": outcome.truncated,
        "shortlist_len": outcome.shortlist.len(),
        "shortlist_head": head,
        "reference_index": reference,
        "reference_in_shortlist": reference_found,
        "reference_profile": reference_stats,
    });
    // a finished, untruncated scan that misses the reference model is a
    // failed claim, not a usage problem
    if outcome.finished && !outcome.truncated && reference_found != Some(true) {
        return Err(CliError::Claim(
            "search: finished scan does not shortlist the reference sextic".into(),
        ));
    }
    Ok((report, true))
}

fn cmd_verify_all(reg: &Registry) -> Result<(Report, bool), CliError> {
    let claims = verify::run_all(reg);
    let passed = claims.iter().filter(|c| c.passed).count();
    let total = claims.len();
    let all = passed == total;
    for c in &claims {
        eprintln!(
            "[{}] {} — {} ({} ms)",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail,
            c.elapsed_ms
        );
    }
    let mut report = Report::new("verify-all", 3, 1, &[]);
    report.result = json!({
        "claims": claims,
        "passed": passed,
        "total": total,
        "all_passed": all,
    });
    if !all {
        let first = claims
            .iter()
            .find(|c| !c.passed)
            .map(|c| c.name)
            .unwrap_or("unknown");
        // report still goes to stdout in the requested format; the
        // failing claim is named on stderr and the exit code is 1
        eprintln!("claim failed: {first}");
    }
    Ok((report, all))
}
