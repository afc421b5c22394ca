//! gamma4: exact torus-knot invariants and certified bounds on the
//! nonorientable 4-ball genus.

mod cache;
mod config;
mod output;
mod tablespec;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand};
use gamma4_core::arith::ArithError;
use gamma4_core::bounds::{self, BoundsConfig};
use gamma4_core::floer::{self, FloerError};
use gamma4_core::linkform::{self, LinkformError};
use gamma4_core::topobstruct::{self, TopVerdict};
use gamma4_core::torusknot::{self, KnotError, Stretch, StretchCf, TorusKnot};
use num_bigint::BigUint;
use output::{Format, OutputRecord};
use rayon::prelude::*;
use serde::Serialize;
use std::io::IsTerminal;
use std::path::PathBuf;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "gamma4",
    version,
    about = "Torus knot invariants and nonorientable 4-ball genus bounds, all in exact arithmetic"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format; defaults to a table on a terminal and JSON when piped
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker pool size for batch subcommands
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Disable the on-disk cache
    #[arg(long, global = true)]
    no_cache: bool,
    /// Skip Floer-theoretic invariants (υ, ῡ, ῡ̲)
    #[arg(long, global = true)]
    skip_floer: bool,
    /// Skip the linking-form block
    #[arg(long, global = true)]
    skip_linkform: bool,
    /// Reject factorizations above this many decimal digits
    #[arg(long, global = true, value_name = "D")]
    max_factor_digits: Option<u32>,
    /// Size cap for explicit Goeritz matrices
    #[arg(long, global = true, value_name = "N")]
    max_matrix: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// All computable invariants of T(p,q)
    Invariants { p: u64, q: u64 },
    /// Certified smooth and topological γ₄ intervals for T(p,q)
    Bounds { p: u64, q: u64 },
    /// The pinch-move sequence from T(p,q) to the unknot
    Pinch { p: u64, q: u64 },
    /// Linking form of the double branched cover (needs an even parameter)
    LinkingForm { p: u64, q: u64 },
    /// Locally flat Möbius-band obstruction for T(p,q)
    ObstructTop { p: u64, q: u64 },
    /// Density of obstructed q ≤ N coprime to p, with the Mertens estimate
    Density { p: u64, n: u64 },
    /// Batch over a family, e.g. "p=4 q=5..99 odd"
    Table { spec: String },
    /// Involutive invariants of a complex-description file
    Floer { fixture: PathBuf },
    /// Calibration suite; exits 0 iff every contract holds
    Selftest,
}

fn main() {
    let cli = Cli::parse();
    let flags = config::Flags {
        jobs: cli.jobs,
        no_cache: cli.no_cache,
        skip_floer: cli.skip_floer,
        skip_linkform: cli.skip_linkform,
        max_factor_digits: cli.max_factor_digits,
        max_matrix: cli.max_matrix,
    };
    let settings = config::load(&flags);
    if let Some(jobs) = settings.jobs {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    let format = cli.format.unwrap_or_else(|| {
        if std::io::stdout().is_terminal() {
            Format::Table
        } else {
            Format::Json
        }
    });

    let result = dispatch(&cli.command, &settings, format);
    match result {
        Ok(()) => {}
        Err(err) => {
            let code = exit_code_for(&err);
            let payload = output::ErrorOut {
                error: format!("{err:#}"),
                kind: error_kind(&err).to_string(),
            };
            if format == Format::Json {
                println!("{}", serde_json::to_string(&payload).unwrap());
            } else {
                eprintln!("error: {}", payload.error);
            }
            std::process::exit(code);
        }
    }
}

/// 2 for validation errors, 3 for computational ceilings, 1 otherwise.
fn exit_code_for(err: &anyhow::Error) -> i32 {
    match error_kind(err) {
        "validation" => 2,
        "ceiling" => 3,
        _ => 1,
    }
}

fn error_kind(err: &anyhow::Error) -> &'static str {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<ArithError>() {
            return match e {
                ArithError::FactorizationTooHard { .. }
                | ArithError::SearchExhausted { .. }
                | ArithError::PrimalityOutOfRange(_) => "ceiling",
                _ => "validation",
            };
        }
        if let Some(e) = cause.downcast_ref::<LinkformError>() {
            return match e {
                LinkformError::MatrixTooLarge { .. } => "ceiling",
                LinkformError::NeedsEvenP { .. } => "validation",
                LinkformError::InternalError(_) => "internal",
            };
        }
        if let Some(e) = cause.downcast_ref::<gamma4_core::topobstruct::ObstructError>() {
            return match e {
                gamma4_core::topobstruct::ObstructError::Arith(
                    ArithError::FactorizationTooHard { .. },
                )
                | gamma4_core::topobstruct::ObstructError::SieveTooLarge { .. } => "ceiling",
                _ => "validation",
            };
        }
        if cause.downcast_ref::<KnotError>().is_some() {
            return "validation";
        }
        if cause.downcast_ref::<FloerError>().is_some() {
            // bad fixtures and structure violations both trace back to the
            // supplied complex
            return "validation";
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return "validation";
        }
        if cause.downcast_ref::<clap::Error>().is_some() {
            return "validation";
        }
    }
    if err.to_string().contains("table") || err.to_string().contains("spec") {
        return "validation";
    }
    "internal"
}

fn dispatch(command: &Command, settings: &config::Settings, format: Format) -> Result<()> {
    match command {
        Command::Invariants { p, q } => {
            let knot = TorusKnot::new(*p, *q)?;
            let record = build_record(&knot, settings, true)?;
            print_record(&record, format);
            Ok(())
        }
        Command::Bounds { p, q } => {
            let knot = TorusKnot::new(*p, *q)?;
            let report = bounds::topological_bounds_with(&knot, &bounds_config(settings))?;
            let out = output::BoundsOut::from(&report);
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&out)?),
                Format::Csv => {
                    println!("p,q,smooth_lo,smooth_hi,smooth_exact,top_lo,top_hi,top_exact");
                    println!(
                        "{},{},{},{},{},{},{},{}",
                        knot.p,
                        knot.q,
                        report.smooth.lo,
                        report.smooth.hi,
                        report.smooth.exact,
                        report.topological.lo,
                        report.topological.hi,
                        report.topological.exact
                    );
                }
                Format::Table => {
                    println!(
                        "gamma4 (smooth)    [{}, {}]{}",
                        report.smooth.lo,
                        report.smooth.hi,
                        if report.smooth.exact { " exact" } else { "" }
                    );
                    println!(
                        "gamma4 (top)       [{}, {}]{}",
                        report.topological.lo,
                        report.topological.hi,
                        if report.topological.exact {
                            " exact"
                        } else {
                            ""
                        }
                    );
                    for c in &out.certificates {
                        println!(
                            "  {:<16} {} {}  ({})",
                            c.name, c.direction, c.value, c.citation
                        );
                    }
                }
            }
            Ok(())
        }
        Command::Pinch { p, q } => {
            let knot = TorusKnot::new(*p, *q)?;
            if knot.is_unknot {
                return Err(anyhow!(KnotError::UnknotInput));
            }
            let seq = torusknot::pinch_sequence(&knot);
            #[derive(Serialize)]
            struct StepOut {
                from: String,
                to: String,
                t: u64,
                h: u64,
                sign: String,
            }
            let steps: Vec<StepOut> = seq
                .iter()
                .map(|s| StepOut {
                    from: format!("T({},{})", s.from.p, s.from.q),
                    to: if s.to.is_unknot {
                        "unknot".into()
                    } else {
                        format!("T({},{})", s.to.p, s.to.q)
                    },
                    t: s.t,
                    h: s.h,
                    sign: match s.sign {
                        torusknot::PinchSign::Positive => "positive".into(),
                        torusknot::PinchSign::Negative => "negative".into(),
                    },
                })
                .collect();
            match format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&serde_json::json!({
                        "theta": steps.len(),
                        "steps": steps,
                    }))?
                ),
                _ => {
                    for (i, s) in steps.iter().enumerate() {
                        println!(
                            "{:>3}. {} -> {}  (t={}, h={}, {})",
                            i + 1,
                            s.from,
                            s.to,
                            s.t,
                            s.h,
                            s.sign
                        );
                    }
                    println!("theta = {}", steps.len());
                }
            }
            Ok(())
        }
        Command::LinkingForm { p, q } => {
            let knot = TorusKnot::new(*p, *q)?;
            let value = linkform::linking_form(&knot)?;
            let size = if knot.is_unknot {
                1
            } else {
                let (e, o) = knot.even_first();
                (1 + o * (e - 2) / 2) as usize
            };
            let verified = if size <= settings.max_matrix {
                let via = linkform::linking_form_via_matrix(&knot, settings.max_matrix)?;
                via == value
            } else {
                false
            };
            match format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&serde_json::json!({
                        "group_order": value.group_order,
                        "value": format!("{}/{}", value.numerator, value.denominator),
                        "matrix_verified": verified,
                    }))?
                ),
                _ => {
                    println!(
                        "H1 = Z/{}  lambda(x,x) = {}/{} mod 1  (matrix verified: {})",
                        value.group_order, value.numerator, value.denominator, verified
                    );
                }
            }
            Ok(())
        }
        Command::ObstructTop { p, q } => {
            let knot = TorusKnot::new(*p, *q)?;
            let verdict =
                topobstruct::lf_mobius_obstructed_with_limit(&knot, settings.max_factor_digits)?;
            let residues = if knot.p % 2 == 0 || knot.q % 2 == 0 {
                topobstruct::obstructing_residues(knot.even_first().0).ok()
            } else {
                None
            };
            match format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&serde_json::json!({
                        "verdict": verdict_str(verdict),
                        "residues": residues,
                    }))?
                ),
                _ => {
                    println!("verdict: {}", verdict_str(verdict));
                    if let Some(r) = residues {
                        println!("obstructing classes mod {}: {:?}", r.modulus, r.classes);
                    }
                }
            }
            Ok(())
        }
        Command::Density { p, n } => {
            let report = topobstruct::density_experiment(*p, *n)?;
            match format {
                Format::Json => {
                    let value = serde_json::json!({
                        "p": report.p,
                        "n": report.n,
                        "eligible": report.eligible,
                        "obstructed": report.obstructed,
                        "ratio": report.ratio_f64(),
                        "mertens": report.mertens_f64(),
                        "monotone_nonincreasing": report.monotone_nonincreasing,
                    });
                    println!("{}", serde_json::to_string_pretty(&value)?);
                }
                Format::Csv => {
                    println!("p,N,eligible,obstructed,ratio_num,ratio_den,mertens_num,mertens_den");
                    println!("{}", report.csv_row());
                }
                Format::Table => {
                    println!("p = {}, N = {}", report.p, report.n);
                    println!("eligible    {}", report.eligible);
                    println!("obstructed  {}", report.obstructed);
                    println!("non-obstructed ratio  {:.6}", report.ratio_f64());
                    println!("mertens estimate      {:.6}", report.mertens_f64());
                    println!("monotone nonincreasing: {}", report.monotone_nonincreasing);
                }
            }
            Ok(())
        }
        Command::Table { spec } => run_table(spec, settings, format),
        Command::Floer { fixture } => {
            let text = std::fs::read_to_string(fixture)
                .with_context(|| format!("cannot read {}", fixture.display()))?;
            let (complex, iota) = floer::parse_complex(&text)?;
            let summary = floer::involutive_upsilons(&complex, &iota)?;
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&summary)?),
                _ => {
                    println!("upsilon           {}", summary.upsilon);
                    println!("upsilon_bar       {}", summary.upsilon_bar);
                    println!("upsilon_underbar  {}", summary.upsilon_underbar);
                }
            }
            Ok(())
        }
        Command::Selftest => run_selftest(),
    }
}

fn verdict_str(v: TopVerdict) -> &'static str {
    match v {
        TopVerdict::Obstructed => "obstructed",
        TopVerdict::NotObstructedByThisTest => "not_obstructed_by_this_test",
        TopVerdict::Inapplicable => "inapplicable",
    }
}

fn bounds_config(settings: &config::Settings) -> BoundsConfig {
    BoundsConfig {
        skip_floer: settings.skip_floer,
        max_factor_digits: settings.max_factor_digits,
        ..Default::default()
    }
}

/// Alexander data needs O(pq) work and memory; above this genus the record
/// reports nulls for the polynomial-derived fields instead of thrashing.
const ALEXANDER_GENUS_CAP: u64 = 2_000_000;

fn build_record(
    knot: &TorusKnot,
    settings: &config::Settings,
    with_bounds: bool,
) -> Result<OutputRecord> {
    let start = Instant::now();
    let mut cache = cache::Cache::open(settings.cache_dir.clone(), settings.cache_enabled);

    let theta = torusknot::pinch_number(knot);
    let polynomial_ok = !knot.is_unknot && knot.genus() <= ALEXANDER_GENUS_CAP;
    let (alexander, stretch) = if polynomial_ok {
        let delta = torusknot::alexander(knot)?;
        let map = delta.terms().collect();
        let stretch = match torusknot::stretch_of_poly(&delta) {
            Stretch::Defined(k) => Some(k),
            Stretch::Undefined => None,
        };
        (Some(map), stretch)
    } else {
        (None, None)
    };
    let stretch_cf = if knot.is_unknot {
        None
    } else {
        match torusknot::stretch_cf(knot)? {
            StretchCf::Applicable(k) => Some(k),
            StretchCf::Inapplicable => None,
        }
    };

    let calibrated = bounds::floer_calibrated();
    let floer_wanted = !settings.skip_floer && calibrated && polynomial_ok;
    let (upsilon, upsilon_bar, upsilon_underbar) = if knot.is_unknot && !settings.skip_floer {
        (Some(0), Some(0), Some(0))
    } else if floer_wanted {
        let summary = match cache.get_floer(knot.p, knot.q) {
            Some(hit) => hit,
            None => {
                let s = floer::involutive_upsilons_torus(knot)?;
                cache.put_floer(knot.p, knot.q, &s);
                s
            }
        };
        (
            Some(summary.upsilon),
            Some(summary.upsilon_bar),
            Some(summary.upsilon_underbar),
        )
    } else {
        (None, None, None)
    };

    let linking_form =
        if !settings.skip_linkform && (knot.p.is_multiple_of(2) || knot.q.is_multiple_of(2)) {
            let v = linkform::linking_form(knot)?;
            Some(format!("{}/{}", v.numerator, v.denominator))
        } else {
            None
        };

    let bounds_out = if with_bounds {
        let report = bounds::topological_bounds_with(knot, &bounds_config(settings))?;
        Some(output::BoundsOut::from(&report))
    } else {
        None
    };

    cache.flush();
    let elapsed = start.elapsed().as_millis() as u64;
    Ok(OutputRecord {
        knot: knot.into(),
        invariants: output::InvariantsOut {
            signature: gamma4_core::classical::signature(knot),
            arf: gamma4_core::classical::arf(knot),
            determinant: knot.determinant(),
            genus: knot.genus(),
            theta,
            stretch,
            stretch_cf,
            upsilon,
            upsilon_bar,
            upsilon_underbar,
            alexander,
            linking_form,
        },
        bounds: bounds_out,
        diagnostics: output::DiagnosticsOut {
            floer_calibrated: calibrated,
            floer_skipped: settings.skip_floer,
            linkform_skipped: settings.skip_linkform,
            // timings are opt-in so identical invocations stay bit-identical
            elapsed_ms: if std::env::var("GAMMA4_TIMINGS").is_ok() {
                elapsed
            } else {
                0
            },
        },
    })
}

fn print_record(record: &OutputRecord, format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(record).unwrap()),
        Format::Csv => {
            println!("{}", output::CSV_HEADER);
            println!("{}", record.csv_row());
        }
        Format::Table => print!("{}", record.render_table()),
    }
}

fn run_table(spec: &str, settings: &config::Settings, format: Format) -> Result<()> {
    let spec = tablespec::TableSpec::parse(spec)?;
    let rows: Vec<(u64, Result<OutputRecord>)> = spec
        .knots()
        .par_iter()
        .map(|&q| {
            let row = TorusKnot::new(spec.p, q)
                .map_err(anyhow::Error::from)
                .and_then(|knot| build_record(&knot, settings, true));
            (q, row)
        })
        .collect();

    match format {
        Format::Json => {
            for (q, row) in &rows {
                match row {
                    Ok(record) => println!("{}", serde_json::to_string(record)?),
                    Err(err) => println!(
                        "{}",
                        serde_json::to_string(&serde_json::json!({
                            "knot": {"p": spec.p, "q": q},
                            "error": format!("{err:#}"),
                        }))?
                    ),
                }
            }
        }
        Format::Csv | Format::Table => {
            println!("{}", output::CSV_HEADER);
            for (q, row) in &rows {
                match row {
                    Ok(record) => println!("{}", record.csv_row()),
                    Err(err) => {
                        let mut blank = vec![String::new(); 16];
                        blank[0] = spec.p.to_string();
                        blank[1] = q.to_string();
                        println!("{},\"{}\"", blank.join(","), err);
                    }
                }
            }
        }
    }
    Ok(())
}

const FIGURE8_FIXTURE: &str = include_str!("../../../fixtures/figure8.cfk");

fn run_selftest() -> Result<()> {
    let mut all_ok = true;
    let mut check = |name: &str, ok: bool| {
        println!("{} {}", if ok { "ok  " } else { "FAIL" }, name);
        all_ok &= ok;
    };

    check("floer calibration gate", bounds::floer_calibrated());

    let mut upsilon_ok = true;
    for q in (5u64..=25).step_by(2) {
        let knot = TorusKnot::new(4, q).unwrap();
        upsilon_ok &= floer::upsilon(&knot) == Ok(-(q as i64 - 1));
    }
    check("upsilon(T(4,q)) = -(q-1) for odd q <= 25", upsilon_ok);

    let fig8 = floer::parse_complex(FIGURE8_FIXTURE)
        .ok()
        .and_then(|(c, i)| floer::involutive_upsilons(&c, &i).ok());
    check(
        "figure-eight fixture gives (ubar, uunder) = (1, -1)",
        fig8.is_some_and(|s| (s.upsilon_bar, s.upsilon_underbar) == (1, -1)),
    );

    let mut goeritz_ok = true;
    for (p, q) in [(4u64, 5u64), (6, 7), (8, 3)] {
        let knot = TorusKnot::new(p, q).unwrap();
        goeritz_ok &= linkform::goeritz_matrix(&knot).is_ok_and(|g| {
            let vg = g.left_multiply(&g.witness_vector());
            let zero = num_bigint::BigInt::from(0);
            vg[0] == num_bigint::BigInt::from(q)
                && vg[1..].iter().all(|x| *x == zero)
                && linkform::linking_form_via_matrix(&knot, 2000).ok()
                    == linkform::linking_form(&knot).ok()
        });
    }
    check(
        "Goeritz witness vector identity vG = (q,0,...,0)",
        goeritz_ok,
    );

    let mut theta_ok = true;
    for q in (5u64..=99).step_by(2) {
        theta_ok &= torusknot::pinch_number(&TorusKnot::new(4, q).unwrap()) == 2;
    }
    check("theta(T(4,q)) = 2 for odd 5 <= q <= 99", theta_ok);

    check(
        "obstructing residues mod 8 are exactly {5}",
        topobstruct::obstructing_residues(4).is_ok_and(|r| r.classes == vec![5]),
    );

    let det_ok = gamma4_core::arith::factorize(&BigUint::from(360u32))
        .is_ok_and(|f| f.recompose() == BigUint::from(360u32));
    check("factorization recomposes", det_ok);

    if all_ok {
        Ok(())
    } else {
        std::process::exit(1);
    }
}
