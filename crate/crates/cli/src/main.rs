//! `ekr3`: one executable exposing the library as subcommands that emit
//! reproducible JSON records and CSV tables.
//!
//! Conventions shared by every subcommand:
//! * exact integers print as decimal strings, rationals as "a/b",
//!   floats as 15-significant-digit strings;
//! * identical invocations produce byte-identical primary output (the
//!   manifest carries the timestamp and is exempt);
//! * exit 0 on success, 1 when a verification-style check fails or a
//!   search exhausts its budget (stderr names the failed assertion),
//!   2 on usage errors.

mod cache;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use ekr3::asymptotics::{
    erf_limit_report, ln_theta_approx, residual_report, round_k, sum_theta_window_exact,
    theta_exact, theta_window, verify_c_lower_bound,
};
use ekr3::constructions::{generate, ConstructionId};
use ekr3::counting::{card, classify_m3, f_exact, f_ratio_report, verify_a_gt_b, verify_a_lt_b};
use ekr3::family::{Family, IntersectionSpec};
use ekr3::measure::{mu, w3_limit, MeasureParam};
use ekr3::ratio::{ln_ratio, parse_ratio, ratio_string};
use ekr3::search::{
    default_claims_grid, max_family, shifted_lower_bound, verify_claims, SearchBudget,
    SearchStatus,
};
use num_rational::BigRational;
use num_traits::One;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "ekr3",
    version,
    about = "Exact counts, exhaustive searches, measures, and asymptotic tables for intersecting uniform set families"
)]
struct Cli {
    /// Output format for records and tables
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Also write the output to this file, plus `<file>.manifest.json`
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a named construction in the family text format
    Construct {
        /// One of A, B, Bi, C, Bmeasure
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        /// Window index, required for family Bi
        #[arg(long)]
        i: Option<u32>,
    },
    /// Exact cardinality of a named construction
    Count {
        /// One of A, B, Bi, C
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        /// Window index, required for family Bi
        #[arg(long)]
        i: Option<u32>,
    },
    /// Regime, value or bounds, and witness for the 3-wise maximum
    Classify {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
    },
    /// Exhaustive maximum-family search (cached across runs)
    Search {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        /// Intersection arity (how many members must share points)
        #[arg(long)]
        r: u32,
        /// Minimum number of shared points
        #[arg(long)]
        t: u32,
        /// Restrict to families with no t common points overall
        #[arg(long)]
        nontrivial: bool,
        /// Restrict to shifted families (implies --nontrivial); the
        /// result is a lower bound for the unrestricted problem
        #[arg(long)]
        shifted: bool,
        /// Wall-clock cap in seconds
        #[arg(long, value_name = "SECS")]
        time_limit: Option<u64>,
        /// Maximum witness families to keep
        #[arg(long, default_value_t = 4)]
        witnesses: usize,
        /// Bypass the cache for this run (result is still stored)
        #[arg(long)]
        no_cache: bool,
    },
    /// Exact product measure of a family file at bias p
    Measure {
        /// Path to a family in the text format
        #[arg(long)]
        family: PathBuf,
        /// Bias as a fraction a/b in (0, 1)
        #[arg(long)]
        p: String,
    },
    /// Limit of the maximum non-trivial 3-wise measure at bias p
    W3 {
        /// Bias as a fraction a/b in (0, 1)
        #[arg(long)]
        p: String,
    },
    /// Window tables for the hypergeometric overlap distribution
    Asymptotics {
        #[command(subcommand)]
        what: Asym,
    },
    /// Re-check the exact comparison statements on finite windows
    VerifyLemmas {
        /// Upper end of the uniformity range
        #[arg(long, default_value_t = 40)]
        k_hi: u32,
        /// Ground sets scanned up to n-factor * k
        #[arg(long, default_value_t = 10)]
        n_factor: u32,
    },
    /// Cross-check search optima against the classifier on a small grid
    VerifyClaims,
}

#[derive(Subcommand)]
enum Asym {
    /// Per-j table of exact vs approximate overlap probabilities
    Theta {
        #[arg(long)]
        n: u32,
        /// Density as a fraction a/b; the uniformity is its rounding
        #[arg(long)]
        p: String,
        /// Window half-width multiplier (window is |j - p^2 n| <= c sqrt(n))
        #[arg(long)]
        c: String,
    },
    /// Max |log exact - log approx| over the window, per ground set
    Residuals {
        #[arg(long)]
        p: String,
        #[arg(long)]
        c: String,
        /// Comma-separated ground-set sizes
        #[arg(long = "n-list", value_delimiter = ',', required = true)]
        n_list: Vec<u32>,
    },
    /// Windowed sums against the two candidate limit forms
    ErfLimit {
        #[arg(long)]
        p: String,
        #[arg(long)]
        c: String,
        /// Comma-separated ground-set sizes
        #[arg(long = "n-list", value_delimiter = ',', required = true)]
        n_list: Vec<u32>,
    },
    /// Exact ratio of the window-majority count to the star bound
    CBound {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        /// Required slack: the check demands ratio > 1 - delta
        #[arg(long)]
        delta: String,
    },
}

/// Primary output, parameter echo for the manifest, and an optional
/// verification failure (printed to stderr, exit 1).
struct Outcome {
    payload: String,
    params: Value,
    failure: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    let out = cli.out.clone();
    match run(cli, format) {
        Ok(outcome) => {
            print!("{}", outcome.payload);
            if let Some(path) = out {
                if let Err(e) = output::write_with_manifest(&path, &outcome.payload, &outcome.params)
                {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            }
            match outcome.failure {
                Some(msg) => {
                    eprintln!("verification failed: {msg}");
                    ExitCode::from(1)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli, format: Format) -> Result<Outcome, String> {
    match cli.cmd {
        Cmd::Construct { family, n, k, i } => construct(&family, n, k, i),
        Cmd::Count { family, n, k, i } => count(&family, n, k, i, format),
        Cmd::Classify { n, k } => classify(n, k, format),
        Cmd::Search {
            n,
            k,
            r,
            t,
            nontrivial,
            shifted,
            time_limit,
            witnesses,
            no_cache,
        } => search(n, k, r, t, nontrivial, shifted, time_limit, witnesses, no_cache, format),
        Cmd::Measure { family, p } => measure(&family, &p, format),
        Cmd::W3 { p } => w3(&p, format),
        Cmd::Asymptotics { what } => match what {
            Asym::Theta { n, p, c } => theta_table(n, &p, &c, format),
            Asym::Residuals { p, c, n_list } => residuals_table(&p, &c, &n_list, format),
            Asym::ErfLimit { p, c, n_list } => erf_limit_table(&p, &c, &n_list, format),
            Asym::CBound { n, k, delta } => c_bound_table(n, k, &delta, format),
        },
        Cmd::VerifyLemmas { k_hi, n_factor } => verify_lemmas(k_hi, n_factor, format),
        Cmd::VerifyClaims => verify_claims_cmd(format),
    }
}

fn parse_family_id(name: &str, i: Option<u32>) -> Result<ConstructionId, String> {
    match name {
        "A" => Ok(ConstructionId::A),
        "B" => Ok(ConstructionId::B),
        "C" => Ok(ConstructionId::C),
        "Bmeasure" => Ok(ConstructionId::BMeasure),
        "Bi" => i
            .map(ConstructionId::Bi)
            .ok_or_else(|| "family Bi needs --i".to_string()),
        other => Err(format!("unknown family {other:?}; expected A|B|Bi|C|Bmeasure")),
    }
}

fn construct(family: &str, n: u32, k: u32, i: Option<u32>) -> Result<Outcome, String> {
    let id = parse_family_id(family, i)?;
    let fam = generate(id, n, k).map_err(|e| e.to_string())?;
    Ok(Outcome {
        payload: fam.to_text(),
        params: json!({"cmd": "construct", "family": id.to_string(), "n": n, "k": k}),
        failure: None,
    })
}

fn count(family: &str, n: u32, k: u32, i: Option<u32>, format: Format) -> Result<Outcome, String> {
    let id = parse_family_id(family, i)?;
    let value = card(id, n, k).map_err(|e| e.to_string())?;
    let payload = match format {
        Format::Json => output::json_line(&json!({
            "family": id.to_string(),
            "n": n,
            "k": k,
            "value": value.to_string(),
        })),
        Format::Csv => output::csv(
            &["family", "n", "k", "value"],
            &[vec![id.to_string(), n.to_string(), k.to_string(), value.to_string()]],
        ),
    };
    Ok(Outcome {
        payload,
        params: json!({"cmd": "count", "family": id.to_string(), "n": n, "k": k}),
        failure: None,
    })
}

fn classify(n: u32, k: u32, format: Format) -> Result<Outcome, String> {
    let rec = classify_m3(n, k).map_err(|e| e.to_string())?;
    let witness = rec
        .witness
        .map(|w| Value::String(w.to_string()))
        .unwrap_or(Value::Null);
    let payload = match format {
        Format::Json => output::json_line(&json!({
            "n": rec.n,
            "k": rec.k,
            "regime": rec.regime.to_string(),
            "value": output::opt_uint(&rec.value),
            "lower": output::opt_uint(&rec.lower),
            "upper": output::opt_uint(&rec.upper),
            "witness": witness,
        })),
        Format::Csv => {
            let blank = |v: &Option<num_bigint::BigUint>| {
                v.as_ref().map(|x| x.to_string()).unwrap_or_default()
            };
            output::csv(
                &["n", "k", "regime", "value", "lower", "upper", "witness"],
                &[vec![
                    rec.n.to_string(),
                    rec.k.to_string(),
                    rec.regime.to_string(),
                    blank(&rec.value),
                    blank(&rec.lower),
                    blank(&rec.upper),
                    rec.witness.map(|w| w.to_string()).unwrap_or_default(),
                ]],
            )
        }
    };
    Ok(Outcome {
        payload,
        params: json!({"cmd": "classify", "n": n, "k": k}),
        failure: None,
    })
}

#[allow(clippy::too_many_arguments)]
fn search(
    n: u32,
    k: u32,
    r: u32,
    t: u32,
    nontrivial: bool,
    shifted: bool,
    time_limit: Option<u64>,
    witnesses: usize,
    no_cache: bool,
    format: Format,
) -> Result<Outcome, String> {
    let spec = IntersectionSpec::new(r, t).map_err(|e| e.to_string())?;
    let nontrivial = nontrivial || shifted;
    let key = cache::Key { n, k, r, t, nontrivial, shifted };
    let budget = SearchBudget {
        time_limit: time_limit.map(Duration::from_secs),
        max_witnesses: witnesses,
        ..SearchBudget::default()
    };

    let cached = if no_cache { None } else { cache::lookup(key) };
    let entry = match cached {
        Some(mut e) => {
            e.witnesses.truncate(witnesses);
            e
        }
        None => {
            let res = if shifted {
                shifted_lower_bound(n, k, spec, &budget)
            } else {
                max_family(n, k, spec, nontrivial, &budget)
            }
            .map_err(|e| e.to_string())?;
            let entry = cache::Entry {
                status: res.status.to_string(),
                value: res.value,
                nodes: res.nodes,
                witnesses: res.witnesses.iter().map(Family::to_text).collect(),
            };
            if res.status != SearchStatus::Incomplete {
                cache::append(key, &entry)?;
            }
            entry
        }
    };

    let payload = match format {
        Format::Json => output::json_line(&json!({
            "n": n,
            "k": k,
            "r": r,
            "t": t,
            "nontrivial": nontrivial,
            "shifted": shifted,
            "status": entry.status,
            "value": entry.value.to_string(),
            "nodes": entry.nodes,
            "witnesses": entry.witnesses,
        })),
        Format::Csv => output::csv(
            &["n", "k", "r", "t", "nontrivial", "shifted", "status", "value", "nodes"],
            &[vec![
                n.to_string(),
                k.to_string(),
                r.to_string(),
                t.to_string(),
                nontrivial.to_string(),
                shifted.to_string(),
                entry.status.clone(),
                entry.value.to_string(),
                entry.nodes.to_string(),
            ]],
        ),
    };
    let failure = (entry.status == "INCOMPLETE").then(|| {
        format!(
            "search at n={n} k={k}: INCOMPLETE within budget (best bound {})",
            entry.value
        )
    });
    Ok(Outcome {
        payload,
        params: json!({
            "cmd": "search", "n": n, "k": k, "r": r, "t": t,
            "nontrivial": nontrivial, "shifted": shifted,
        }),
        failure,
    })
}

fn measure(path: &PathBuf, p: &str, format: Format) -> Result<Outcome, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let fam = Family::from_text(&text).map_err(|e| e.to_string())?;
    let pr = parse_ratio(p).map_err(|e| e.to_string())?;
    let param = MeasureParam::new(pr).map_err(|e| e.to_string())?;
    let value = mu(&fam, &param).map_err(|e| e.to_string())?;
    let payload = match format {
        Format::Json => output::json_line(&json!({
            "family": path.display().to_string(),
            "n": fam.n(),
            "k": fam.k(),
            "members": fam.len(),
            "p": ratio_string(param.p()),
            "value": output::rat(&value),
        })),
        Format::Csv => output::csv(
            &["n", "k", "members", "p", "value"],
            &[vec![
                fam.n().to_string(),
                fam.k().to_string(),
                fam.len().to_string(),
                ratio_string(param.p()),
                ratio_string(&value),
            ]],
        ),
    };
    Ok(Outcome {
        payload,
        params: json!({"cmd": "measure", "family": path.display().to_string(), "p": p}),
        failure: None,
    })
}

fn w3(p: &str, format: Format) -> Result<Outcome, String> {
    let pr = parse_ratio(p).map_err(|e| e.to_string())?;
    let param = MeasureParam::new(pr).map_err(|e| e.to_string())?;
    let (value, branch) = w3_limit(&param);
    let payload = match format {
        Format::Json => output::json_line(&json!({
            "p": ratio_string(param.p()),
            "branch": branch.to_string(),
            "value": output::rat(&value),
        })),
        Format::Csv => output::csv(
            &["p", "branch", "value"],
            &[vec![
                ratio_string(param.p()),
                branch.to_string(),
                ratio_string(&value),
            ]],
        ),
    };
    Ok(Outcome {
        payload,
        params: json!({"cmd": "w3", "p": p}),
        failure: None,
    })
}

/// Shared per-j row: exact probability, local approximation, and the
/// log-scale residual between them.
fn window_rows(n: u32, k: u32, c: &BigRational) -> Result<Vec<(u32, String, f64, f64)>, String> {
    let window = theta_window(n, k, c).map_err(|e| e.to_string())?;
    let p_eff = window.p.clone();
    let mut rows = Vec::with_capacity(window.members.len());
    for &j in &window.members {
        let exact = theta_exact(n, k, j).map_err(|e| e.to_string())?;
        let ln_approx = ln_theta_approx(n, &p_eff, j);
        let residual = ln_ratio(&exact).map_err(|e| e.to_string())? - ln_approx;
        rows.push((j, ratio_string(&exact), ln_approx.exp(), residual));
    }
    Ok(rows)
}

fn theta_table(n: u32, p: &str, c: &str, format: Format) -> Result<Outcome, String> {
    let pr = parse_ratio(p).map_err(|e| e.to_string())?;
    let cr = parse_ratio(c).map_err(|e| e.to_string())?;
    let k = round_k(n, &pr).map_err(|e| e.to_string())?;
    let window = theta_window(n, k, &cr).map_err(|e| e.to_string())?;
    let rows = window_rows(n, k, &cr)?;
    let sum = sum_theta_window_exact(n, k, &cr).map_err(|e| e.to_string())?;
    let payload = match format {
        Format::Json => {
            let jrows: Vec<Value> = rows
                .iter()
                .map(|(j, exact, approx, residual)| {
                    json!({
                        "j": j,
                        "exact": exact,
                        "approx": output::float(*approx),
                        "residual": output::float(*residual),
                    })
                })
                .collect();
            output::json_line(&json!({
                "n": n,
                "k": k,
                "p": ratio_string(&pr),
                "p_effective": ratio_string(&window.p),
                "c": ratio_string(&cr),
                "window_lo": window.members.first(),
                "window_hi": window.members.last(),
                "escaped": window.escaped,
                "sum_exact": output::rat(&sum),
                "rows": jrows,
            }))
        }
        Format::Csv => output::csv(
            &["n", "j", "exact", "approx", "residual"],
            &rows
                .iter()
                .map(|(j, exact, approx, residual)| {
                    vec![
                        n.to_string(),
                        j.to_string(),
                        exact.clone(),
                        ekr3::ratio::format_sig15(*approx),
                        ekr3::ratio::format_sig15(*residual),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
    };
    Ok(Outcome {
        payload,
        params: json!({"cmd": "asymptotics theta", "n": n, "p": p, "c": c}),
        failure: None,
    })
}

fn residuals_table(p: &str, c: &str, n_list: &[u32], format: Format) -> Result<Outcome, String> {
    let pr = parse_ratio(p).map_err(|e| e.to_string())?;
    let cr = parse_ratio(c).map_err(|e| e.to_string())?;
    let report = residual_report(&pr, &cr, n_list).map_err(|e| e.to_string())?;
    let payload = match format {
        Format::Json => {
            let jrows: Vec<Value> = report
                .rows
                .iter()
                .map(|r| {
                    json!({
                        "n": r.n,
                        "k": r.k,
                        "window_lo": r.window_lo,
                        "window_hi": r.window_hi,
                        "max_abs_residual": output::float(r.max_abs_residual),
                    })
                })
                .collect();
            output::json_line(&json!({
                "p": ratio_string(&pr),
                "c": ratio_string(&cr),
                "rows": jrows,
                "non_monotone_steps": report.non_monotone_steps(),
                "final_max_residual": report
                    .final_max_residual()
                    .map(output::float)
                    .unwrap_or(Value::Null),
            }))
        }
        Format::Csv => {
            // Full per-j table across the listed ground sets.
            let mut rows = Vec::new();
            for &n in n_list {
                let k = round_k(n, &pr).map_err(|e| e.to_string())?;
                for (j, exact, approx, residual) in window_rows(n, k, &cr)? {
                    rows.push(vec![
                        n.to_string(),
                        j.to_string(),
                        exact,
                        ekr3::ratio::format_sig15(approx),
                        ekr3::ratio::format_sig15(residual),
                    ]);
                }
            }
            output::csv(&["n", "j", "exact", "approx", "residual"], &rows)
        }
    };
    Ok(Outcome {
        payload,
        params: json!({"cmd": "asymptotics residuals", "p": p, "c": c, "n_list": n_list}),
        failure: None,
    })
}

fn erf_limit_table(p: &str, c: &str, n_list: &[u32], format: Format) -> Result<Outcome, String> {
    let pr = parse_ratio(p).map_err(|e| e.to_string())?;
    let cr = parse_ratio(c).map_err(|e| e.to_string())?;
    let report = erf_limit_report(&pr, &cr, n_list).map_err(|e| e.to_string())?;
    let payload = match format {
        Format::Json => {
            let jrows: Vec<Value> = report
                .rows
                .iter()
                .map(|r| {
                    json!({
                        "n": r.n,
                        "k": r.k,
                        "window_size": r.window_size,
                        "sum": output::float(r.sum),
                    })
                })
                .collect();
            let diffs: Vec<Value> = report.successive_diffs().into_iter().map(output::float).collect();
            output::json_line(&json!({
                "p": ratio_string(&pr),
                "c": ratio_string(&cr),
                "rows": jrows,
                "successive_diffs": diffs,
                "statement_value": output::float(report.statement_value),
                "gaussian_value": output::float(report.gaussian_value),
                "final_gap_statement": report.final_gap_statement().map(output::float).unwrap_or(Value::Null),
                "final_gap_gaussian": report.final_gap_gaussian().map(output::float).unwrap_or(Value::Null),
                "matched_form": report.matched_form(0.01),
            }))
        }
        Format::Csv => output::csv(
            &["n", "k", "window_size", "sum"],
            &report
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.n.to_string(),
                        r.k.to_string(),
                        r.window_size.to_string(),
                        ekr3::ratio::format_sig15(r.sum),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
    };
    Ok(Outcome {
        payload,
        params: json!({"cmd": "asymptotics erf-limit", "p": p, "c": c, "n_list": n_list}),
        failure: None,
    })
}

fn c_bound_table(n: u32, k: u32, delta: &str, format: Format) -> Result<Outcome, String> {
    let dr = parse_ratio(delta).map_err(|e| e.to_string())?;
    let report = verify_c_lower_bound(n, k, &dr).map_err(|e| e.to_string())?;
    let second = |s: &Option<bool>| match s {
        Some(b) => b.to_string(),
        None => String::new(),
    };
    let payload = match format {
        Format::Json => {
            let jrows: Vec<Value> = report
                .rows
                .iter()
                .map(|r| {
                    json!({
                        "j": r.j,
                        "first_holds": r.first_holds,
                        "second_holds": r.second_holds,
                        "holds": r.holds,
                    })
                })
                .collect();
            output::json_line(&json!({
                "n": report.n,
                "k": report.k,
                "delta": ratio_string(&dr),
                "threshold": output::rat(&report.threshold),
                "ratio": output::rat(&report.ratio),
                "ratio_f64": output::float(report.ratio_f64()),
                "passes": report.passes,
                "window_c": output::rat(&report.window_c),
                "window_contained": report.window_contained,
                "rows": jrows,
            }))
        }
        Format::Csv => output::csv(
            &["j", "first_holds", "second_holds", "holds"],
            &report
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.j.to_string(),
                        r.first_holds.to_string(),
                        second(&r.second_holds),
                        r.holds.to_string(),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
    };
    let failure = (!report.passes).then(|| {
        format!(
            "c-bound at n={n} k={k}: ratio {} below threshold {}",
            ratio_string(&report.ratio),
            ratio_string(&report.threshold)
        )
    });
    Ok(Outcome {
        payload,
        params: json!({"cmd": "asymptotics c-bound", "n": n, "k": k, "delta": delta}),
        failure,
    })
}

struct LemmaRow {
    id: &'static str,
    ok: bool,
    cases: usize,
    detail: String,
}

fn verify_lemmas(k_hi: u32, n_factor: u32, format: Format) -> Result<Outcome, String> {
    if k_hi < 18 || n_factor < 4 {
        return Err(format!("need k-hi >= 18 and n-factor >= 4, got {k_hi} and {n_factor}"));
    }
    let mut lemmas: Vec<LemmaRow> = Vec::new();

    let lt = verify_a_lt_b(4, k_hi).map_err(|e| e.to_string())?;
    lemmas.push(LemmaRow {
        id: "a-lt-b",
        ok: lt.all_hold(),
        cases: lt.rows.len(),
        detail: lt
            .violations
            .first()
            .map(|(n, k)| format!("first violation at n={n} k={k}"))
            .unwrap_or_else(|| "strict on every point".into()),
    });

    let gt = verify_a_gt_b(9, k_hi, |k| n_factor * k).map_err(|e| e.to_string())?;
    let gt_detail = match (gt.violations.first(), gt.equivalence_breaks.first()) {
        (Some((n, k)), _) => format!("first violation at n={n} k={k}"),
        (None, Some((n, k))) => format!("rational form disagrees with counts at n={n} k={k}"),
        (None, None) => "rational form and direct counts agree".into(),
    };
    lemmas.push(LemmaRow {
        id: "a-gt-b",
        ok: gt.all_hold(),
        cases: gt.rows.len(),
        detail: gt_detail,
    });

    let mut chain_ok = true;
    let mut chain_break = None;
    let mut prev = f_exact(9).map_err(|e| e.to_string())?;
    if prev <= BigRational::one() {
        chain_ok = false;
        chain_break = Some(9);
    }
    for k in 10..=k_hi {
        let cur = f_exact(k).map_err(|e| e.to_string())?;
        if cur <= prev && chain_break.is_none() {
            chain_ok = false;
            chain_break = Some(k);
        }
        prev = cur;
    }
    lemmas.push(LemmaRow {
        id: "f-chain",
        ok: chain_ok,
        cases: (k_hi - 8) as usize,
        detail: chain_break
            .map(|k| format!("chain breaks at k={k}"))
            .unwrap_or_else(|| "strictly increasing above 1".into()),
    });

    let mut shape_ok = true;
    let mut shape_break = None;
    for k in 18..=k_hi.min(26) {
        let rep = ekr3::counting::verify_g_shape(k, 3 * k + 20).map_err(|e| e.to_string())?;
        if !(rep.chain_holds && rep.decreasing_after_peak == Some(true)) && shape_break.is_none() {
            shape_ok = false;
            shape_break = Some(k);
        }
    }
    lemmas.push(LemmaRow {
        id: "g-shape",
        ok: shape_ok,
        cases: (k_hi.min(26) - 17) as usize,
        detail: shape_break
            .map(|k| format!("shape breaks at k={k}"))
            .unwrap_or_else(|| "rises through the peak then decreases".into()),
    });

    let hs = ekr3::counting::verify_h_sign_agreement(18, k_hi).map_err(|e| e.to_string())?;
    lemmas.push(LemmaRow {
        id: "h-sign",
        ok: hs.disagreements.is_empty(),
        cases: hs.rows.len(),
        detail: hs
            .disagreements
            .first()
            .map(|(k, n)| format!("surrogate sign disagrees at n={n} k={k}"))
            .unwrap_or_else(|| "surrogate sign matches the exact difference".into()),
    });

    let mut ratio_ok = true;
    let mut ratio_break = None;
    let mut printed_matches = 0usize;
    for k in 9..=k_hi {
        let rep = f_ratio_report(k).map_err(|e| e.to_string())?;
        if rep.matches_printed_variant {
            printed_matches += 1;
        }
        if !(rep.matches_closed_form && rep.less_than_one) && ratio_break.is_none() {
            ratio_ok = false;
            ratio_break = Some(k);
        }
    }
    lemmas.push(LemmaRow {
        id: "f-ratio",
        ok: ratio_ok,
        cases: (k_hi - 8) as usize,
        detail: ratio_break
            .map(|k| format!("closed form disagrees at k={k}"))
            .unwrap_or_else(|| {
                format!("closed form exact; printed variant matches {printed_matches} cases")
            }),
    });

    let all_ok = lemmas.iter().all(|l| l.ok);
    let failure = lemmas
        .iter()
        .find(|l| !l.ok)
        .map(|l| format!("lemma {} over k<={k_hi}: {}", l.id, l.detail));

    let payload = match format {
        Format::Json => {
            let jrows: Vec<Value> = lemmas
                .iter()
                .map(|l| json!({"id": l.id, "ok": l.ok, "cases": l.cases, "detail": l.detail}))
                .collect();
            output::json_line(&json!({"k_hi": k_hi, "n_factor": n_factor, "lemmas": jrows, "all_ok": all_ok}))
        }
        Format::Csv => output::csv(
            &["id", "ok", "cases", "detail"],
            &lemmas
                .iter()
                .map(|l| {
                    vec![l.id.to_string(), l.ok.to_string(), l.cases.to_string(), l.detail.clone()]
                })
                .collect::<Vec<_>>(),
        ),
    };
    Ok(Outcome {
        payload,
        params: json!({"cmd": "verify-lemmas", "k_hi": k_hi, "n_factor": n_factor}),
        failure,
    })
}

fn verify_claims_cmd(format: Format) -> Result<Outcome, String> {
    let grid = default_claims_grid();
    let report = verify_claims(&grid, &SearchBudget::default()).map_err(|e| e.to_string())?;
    let payload = match format {
        Format::Json => {
            let jrows: Vec<Value> = report
                .rows
                .iter()
                .map(|r| {
                    json!({
                        "n": r.n,
                        "k": r.k,
                        "status": r.search_status.to_string(),
                        "search_value": r.search_value.to_string(),
                        "regime": r.classify.regime.to_string(),
                        "classify_value": output::opt_uint(&r.classify.value),
                        "agreement": r.agreement,
                    })
                })
                .collect();
            output::json_line(&json!({"rows": jrows, "all_agree": report.all_agree()}))
        }
        Format::Csv => output::csv(
            &["n", "k", "status", "search_value", "regime", "classify_value", "agreement"],
            &report
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.n.to_string(),
                        r.k.to_string(),
                        r.search_status.to_string(),
                        r.search_value.to_string(),
                        r.classify.regime.to_string(),
                        r.classify.value.as_ref().map(|v| v.to_string()).unwrap_or_default(),
                        r.agreement.map(|a| a.to_string()).unwrap_or_default(),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
    };
    let failure = report
        .rows
        .iter()
        .find(|r| r.agreement == Some(false))
        .map(|r| {
            format!(
                "claims at n={} k={}: search value {} disagrees with classification",
                r.n, r.k, r.search_value
            )
        });
    Ok(Outcome {
        payload,
        params: json!({"cmd": "verify-claims"}),
        failure,
    })
}
