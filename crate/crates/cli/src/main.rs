use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use amen_core::exec::{configure_threads, threads_from_env};
use amen_core::folner::{set_report, subspace_report, subspace_to_function, words_as_multipliers};
use amen_core::groups::{
    ball, family_generate, generator_words, parse_group_spec, Family, FamilyMember, GroupAction,
    Word,
};
use amen_core::linalg::{read_field_spec, FieldSpec, LabeledSubspace, PrimeField, Rationals};
use amen_core::matroid::SubspaceMatroid;
use amen_core::profile::{iso_family_upper, iso_set_exact, ProfileTable, MAX_WINDOW};
use amen_core::steiner::{estimate_steiner_with, SteinerConfig, DEFAULT_SEED};
use amen_core::{verify, Error, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "amen",
    version,
    about = "Følner sets, subspace matroids, Steiner points and isoperimetric profiles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Write the document here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Emit JSON.
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    /// Emit CSV (profile tables only).
    #[arg(long)]
    csv: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the Steiner point of a subspace's matroid base polytope.
    Steiner {
        /// Subspace JSON: {"field": {"char": p}, "labels": [...], "rows": [[...]]}.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 4096)]
        samples: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Include per-basis exterior angle estimates.
        #[arg(long)]
        angles: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Boundary report of a member of an explicit Følner family.
    Folner {
        #[arg(long)]
        group: String,
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        /// Comma-separated words, e.g. "+1,-1,b". Defaults to the family's generators.
        #[arg(long)]
        gens: Option<String>,
        /// A prime, or 0 / Q for the rationals.
        #[arg(long, default_value = "2")]
        field: String,
        /// Also certify the Steiner-point function of a subspace member.
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Isoperimetric profile table.
    Profile {
        #[arg(long)]
        group: String,
        #[arg(long)]
        gens: Option<String>,
        #[arg(long, value_enum, default_value_t = Mode::Family)]
        mode: Mode,
        #[arg(long, default_value_t = 2)]
        window_radius: usize,
        #[arg(long, default_value_t = 6)]
        vmax: usize,
        #[arg(long)]
        family: Option<String>,
        #[arg(long, default_value_t = 6)]
        nmax: usize,
        #[arg(long, default_value = "2")]
        field: String,
        #[command(flatten)]
        output: Output,
    },
    /// Rank, greedy basis and bases of a subspace's coordinate matroid.
    Matroid {
        #[arg(long)]
        input: PathBuf,
        /// Comma-separated label weights for a greedy minimum-weight basis.
        #[arg(long)]
        weights: Option<String>,
        /// List all bases, up to --cap.
        #[arg(long)]
        enumerate: bool,
        #[arg(long, default_value_t = 10_000)]
        cap: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Run the built-in acceptance suite.
    Verify {
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Family,
}

macro_rules! with_field {
    ($spec:expr, |$f:ident| $body:expr) => {
        match $spec.characteristic {
            0 => {
                let $f = Rationals;
                $body
            }
            p => {
                let $f = PrimeField::new(p)?;
                $body
            }
        }
    };
}

fn parse_field(text: &str) -> Result<FieldSpec> {
    match text.trim() {
        "Q" | "q" | "0" => Ok(FieldSpec::rationals()),
        t => FieldSpec::new(
            t.parse()
                .map_err(|_| Error::Parse(format!("bad field {t:?}")))?,
        ),
    }
}

fn generators(
    action: &dyn GroupAction,
    gens: Option<&str>,
    fallback: Vec<Word>,
) -> Result<Vec<Word>> {
    match gens {
        Some(text) => Word::parse_list(action, text),
        None => Ok(fallback),
    }
}

fn read_json(path: &PathBuf) -> Result<Value> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

enum Document {
    Json(Value),
    Csv(String),
}

fn steiner(input: &PathBuf, samples: u64, seed: u64, angles: bool) -> Result<Value> {
    let value = read_json(input)?;
    let spec = read_field_spec(&value)?;
    with_field!(spec, |field| {
        let space = LabeledSubspace::from_json(field, &value)?;
        let mut cfg = SteinerConfig::new(samples, seed);
        cfg.track_vertices = angles;
        let est = estimate_steiner_with(&SubspaceMatroid::new(space), &cfg)?;
        let mut out = est.to_json(angles);
        out["field"] = json!(spec);
        Ok(out)
    })
}

#[allow(clippy::too_many_arguments)]
fn folner(
    group: &str,
    family: &str,
    n: usize,
    gens: Option<&str>,
    field: &str,
    samples: Option<u64>,
    seed: u64,
) -> Result<Value> {
    let action = parse_group_spec(group)?;
    let kind: Family = family.parse()?;
    if kind.action().name() != action.name() {
        return Err(Error::Domain(format!(
            "family {kind} lives in {}, not {}",
            kind.action().name(),
            action.name()
        )));
    }
    let s = generators(action.as_ref(), gens, kind.default_generators())?;
    let spec = parse_field(field)?;
    let mut out = json!({ "group": action.name(), "family": kind.to_string(), "n": n, "field": spec, "seed": seed });
    with_field!(spec, |f| {
        match family_generate(kind, n, &f)? {
            FamilyMember::Set(points) => {
                out["report"] = serde_json::to_value(set_report(&points, &s, action.as_ref())?)
                    .expect("report");
            }
            FamilyMember::Span(space) => {
                let r = subspace_report(&space, &words_as_multipliers(&s), action.as_ref())?;
                out["report"] = serde_json::to_value(r).expect("report");
                if let Some(samples) = samples {
                    let cfg = SteinerConfig::new(samples, seed).without_vertices();
                    let cert = subspace_to_function(&space, &s, action.as_ref(), &cfg)?;
                    out["certificate"] = json!({
                        "samples": samples,
                        "generators": serde_json::to_value(&cert.per_generator).expect("certificate"),
                        "function": cert.function.to_json(false),
                    });
                }
            }
        }
        Ok(out)
    })
}

#[allow(clippy::too_many_arguments)]
fn profile(
    group: &str,
    gens: Option<&str>,
    mode: Mode,
    radius: usize,
    vmax: usize,
    family: Option<&str>,
    nmax: usize,
    field: &str,
) -> Result<ProfileTable> {
    let action = parse_group_spec(group)?;
    match mode {
        Mode::Exact => {
            let s = generators(action.as_ref(), gens, generator_words(action.as_ref()))?;
            let window = ball(action.as_ref(), &action.base_point(), radius, MAX_WINDOW)?;
            iso_set_exact(action.as_ref(), &window, &s, vmax, Default::default())
        }
        Mode::Family => {
            let kind: Family = family
                .ok_or_else(|| Error::Domain("--mode family needs --family".into()))?
                .parse()?;
            if kind.action().name() != action.name() {
                return Err(Error::Domain(format!(
                    "family {kind} lives in {}, not {}",
                    kind.action().name(),
                    action.name()
                )));
            }
            let s = generators(action.as_ref(), gens, kind.default_generators())?;
            let spec = parse_field(field)?;
            with_field!(spec, |f| iso_family_upper(
                kind,
                nmax,
                &s,
                action.as_ref(),
                &f
            ))
        }
    }
}

fn profile_csv(table: &ProfileTable) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["v", "ratio_num", "ratio_den", "witness"])
        .expect("csv");
    for rec in table.csv_records() {
        w.write_record(&rec).expect("csv");
    }
    String::from_utf8(w.into_inner().expect("csv")).expect("utf8")
}

fn matroid(input: &PathBuf, weights: Option<&str>, enumerate: bool, cap: usize) -> Result<Value> {
    let value = read_json(input)?;
    let spec = read_field_spec(&value)?;
    with_field!(spec, |field| {
        let m = SubspaceMatroid::new(LabeledSubspace::from_json(field, &value)?);
        let mut out = json!({ "field": spec, "labels": m.labels(), "rank": m.rank() });
        if let Some(w) = weights {
            let w: Vec<f64> = w
                .split(',')
                .map(|x| {
                    x.trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad weight {x:?}")))
                })
                .collect::<Result<_>>()?;
            out["greedy_basis"] = json!(m.greedy_min_basis(&w)?);
        }
        if enumerate {
            out["bases"] = json!(m.enumerate_bases(cap)?);
        }
        Ok(out)
    })
}

fn run(command: Command) -> Result<(Document, Output, bool)> {
    Ok(match command {
        Command::Steiner {
            input,
            samples,
            seed,
            angles,
            output,
        } => (
            Document::Json(steiner(&input, samples, seed, angles)?),
            output,
            true,
        ),
        Command::Folner {
            group,
            family,
            n,
            gens,
            field,
            samples,
            seed,
            output,
        } => (
            Document::Json(folner(
                &group,
                &family,
                n,
                gens.as_deref(),
                &field,
                samples,
                seed,
            )?),
            output,
            true,
        ),
        Command::Profile {
            group,
            gens,
            mode,
            window_radius,
            vmax,
            family,
            nmax,
            field,
            output,
        } => {
            let table = profile(
                &group,
                gens.as_deref(),
                mode,
                window_radius,
                vmax,
                family.as_deref(),
                nmax,
                &field,
            )?;
            let doc = if output.json {
                Document::Json(serde_json::to_value(&table).expect("table"))
            } else {
                Document::Csv(profile_csv(&table))
            };
            (doc, output, true)
        }
        Command::Matroid {
            input,
            weights,
            enumerate,
            cap,
            output,
        } => (
            Document::Json(matroid(&input, weights.as_deref(), enumerate, cap)?),
            output,
            true,
        ),
        Command::Verify { output } => {
            let outcomes = verify::run_all();
            for o in &outcomes {
                eprintln!("{}", o.line());
            }
            let passed = outcomes.iter().all(|o| o.passed);
            let doc = json!({ "passed": passed, "criteria": outcomes.iter().map(|o| o.to_json()).collect::<Vec<_>>() });
            (Document::Json(doc), output, passed)
        }
    })
}

fn emit(doc: &Document, out: Option<&PathBuf>) -> std::io::Result<()> {
    let text = match doc {
        Document::Json(v) => serde_json::to_string_pretty(v).expect("json") + "\n",
        Document::Csv(s) => s.clone(),
    };
    match out {
        Some(path) => fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = threads_from_env() {
        configure_threads(n);
    }
    match run(cli.command) {
        Ok((doc, output, ok)) => {
            if output.csv && matches!(doc, Document::Json(_)) {
                eprintln!("note: CSV output is only available for profile tables; writing JSON");
            }
            if let Err(e) = emit(&doc, output.out.as_ref()) {
                eprintln!("error: {e}");
                return ExitCode::FAILURE;
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            let doc = json!({ "error": { "kind": e.kind(), "message": e.to_string() } });
            println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
            ExitCode::FAILURE
        }
    }
}
