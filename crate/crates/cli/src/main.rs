//! `matlen` command-line front end.

mod report;

use std::collections::BTreeSet;
use std::fs::{self, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use matlen::bounds::{analyze, AnalysisOptions};
use matlen::exact_linalg::FieldSpec;
use matlen::formats::{parse_certificate, parse_matrix_set, parse_word, render_matrix_set};
use matlen::pbw::{check_pbw, default_up_to, PbwVerdict};
use matlen::rewrite::{rewrite_word_with, verify_certificate, RewriteOptions};
use matlen::span_engine::{build_filtration, filtration, GeneratorSet};
use matlen::witnesses::{
    is_lie_closed, quantum_plane, random_set, search_sharpness_with, sl2_irrep_in, FamilyResult,
    SharpnessFamily,
};
use matlen::words::verify_census_exhaustive;
use matlen::Error;

use report::{digest, RunReport, Timings};

#[derive(Debug, Parser)]
#[command(name = "matlen", version)]
#[command(about = "Exact generation length of finite sets of square matrices")]
#[command(after_help = "Letter i in any word refers to generators[i-1] of the input file.\n\
Exit codes: 0 success, 2 input error, 3 truncated by a resource cap, 4 verification failure.")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rank sequence, length and bound analysis of a matrix set
    Length {
        input: PathBuf,
        /// Stop building the filtration after this many levels.
        #[arg(long)]
        max_len: Option<usize>,
        /// Plain text output (the default).
        #[arg(long, conflicts_with = "json")]
        text: bool,
        /// Also run the ordered-rewriting check up to 2n-1.
        #[arg(long)]
        pbw: bool,
        /// Include wall-clock timings (makes the output nondeterministic).
        #[arg(long)]
        timings: bool,
    },
    /// Check the ordered-rewriting property up to a word length
    Pbw {
        input: PathBuf,
        /// Defaults to 2n-1.
        #[arg(long)]
        up_to: Option<usize>,
    },
    /// Write a generator family as a matrix set file
    Gen {
        #[command(subcommand)]
        family: GenFamily,
    },
    /// Rewrite a word into terms with few distinct k-subwords
    Rewrite {
        input: PathBuf,
        /// Letters, e.g. "122" or "1,2,2".
        #[arg(long)]
        word: String,
        #[arg(long)]
        k: usize,
        /// Keep every term ordered (requires the ordered-rewriting property).
        #[arg(long)]
        ordered: bool,
        /// Override the subword threshold (at least r_k - r_{k-1}).
        #[arg(long)]
        threshold: Option<usize>,
    },
    /// Replay a rewrite certificate against a matrix set
    VerifyCert { input: PathBuf, certificate: PathBuf },
    /// Exhaustive distinct-subword census of ordered words of length 2n-1
    Census {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
    },
    /// Measure commutator-closed families, appending to a JSON-lines ledger
    Search(SearchArgs),
}

#[derive(Debug, Args)]
struct FieldArgs {
    /// Work over F_p instead of the default field.
    #[arg(long)]
    p: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum GenFamily {
    /// X = diag(1, q, ..., q^(n-1)) and the cyclic shift Y over F_p
    QuantumPlane {
        #[arg(long)]
        n: usize,
        /// Prime with p = 1 (mod n); defaults to the smallest above n.
        #[arg(long)]
        p: Option<u64>,
    },
    /// The n-dimensional irreducible sl2 triple E, F, H (over Q by default)
    Sl2 {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Seeded random matrices (over F_5 by default)
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        seed: u64,
        /// Prime modulus.
        #[arg(long, default_value_t = 5, conflicts_with = "rational")]
        p: u64,
        /// Small integer entries over Q.
        #[arg(long)]
        rational: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyArg {
    Sl2,
    RandomLieClosure,
    RandomFiltered,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long, default_value_t = 2)]
    n_min: usize,
    #[arg(long)]
    n_max: usize,
    /// Maximum number of filtration builds in this run.
    #[arg(long, default_value_t = 100)]
    budget: usize,
    /// Seeds 0..seeds per n for the random families.
    #[arg(long, default_value_t = 10)]
    seeds: u64,
    /// Generators per random candidate.
    #[arg(long, default_value_t = 2)]
    t: usize,
    #[arg(long, default_value_t = 5)]
    p: u64,
    /// JSON-lines file; entries already present are skipped.
    #[arg(long)]
    ledger: PathBuf,
}

enum Failure {
    Input(String),
    Truncated(String),
    Verification(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Truncated(_) => 3,
            Failure::Verification(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Truncated(m) | Failure::Verification(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Truncated(_) | Error::EnumerationCap { .. } | Error::FiltrationTooShallow { .. } => {
                Failure::Truncated(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let res = match cli.command {
        Command::Length {
            input,
            max_len,
            text: _,
            pbw,
            timings,
        } => cmd_length(&input, max_len, pbw, timings, cli.json, argv),
        Command::Pbw { input, up_to } => cmd_pbw(&input, up_to, cli.json),
        Command::Gen { family } => cmd_gen(family),
        Command::Rewrite {
            input,
            word,
            k,
            ordered,
            threshold,
        } => cmd_rewrite(&input, &word, k, RewriteOptions { threshold, ordered }),
        Command::VerifyCert { input, certificate } => {
            cmd_verify_cert(&input, &certificate, cli.json)
        }
        Command::Census { n, t } => cmd_census(n, t, cli.json),
        Command::Search(args) => cmd_search(args, cli.json),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn read_input(path: &Path) -> Result<(GeneratorSet, String), Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let g = parse_matrix_set(&text)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok((g, digest(text.as_bytes())))
}

fn print_json<T: serde::Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("report serializes")
    );
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(" ")
}

fn cmd_length(
    input: &Path,
    max_len: Option<usize>,
    with_pbw: bool,
    with_timings: bool,
    json: bool,
    argv: Vec<String>,
) -> Outcome {
    let (g, input_digest) = read_input(input)?;
    let start = Instant::now();
    let build = build_filtration(&g, max_len);
    let filtration_ms = start.elapsed().as_secs_f64() * 1e3;
    if build.is_truncated() {
        let f = build.filtration();
        let msg = format!(
            "rank sequence did not stabilize within {} levels: {}",
            f.levels_built(),
            join(f.ranks())
        );
        if json {
            print_json(&RunReport::truncated(argv, input_digest, &g, f));
        } else {
            println!("ranks: {}", join(f.ranks()));
        }
        return Err(Failure::Truncated(msg));
    }
    let f = build.complete()?;

    let start = Instant::now();
    let pbw = if with_pbw {
        Some(check_pbw(&g, default_up_to(&g), &f)?)
    } else {
        None
    };
    let pbw_ms = with_pbw.then(|| start.elapsed().as_secs_f64() * 1e3);
    let lie_closed = is_lie_closed(&g)?;
    let bounds = analyze(
        &f,
        AnalysisOptions {
            pbw_holds: pbw.as_ref().and_then(|r| match r.verdict {
                PbwVerdict::Holds => Some(true),
                PbwVerdict::Fails => Some(false),
                PbwVerdict::Truncated => None,
            }),
            claim_proper_subalgebra: None,
            lie_closed: Some(lie_closed),
        },
    )?;
    let report = RunReport {
        command: argv,
        input_digest,
        n: g.n(),
        t: g.t(),
        field: g.field(),
        ranks: f.ranks().to_vec(),
        complete: true,
        c: Some(f.length()),
        r_star: Some(f.r_star()),
        lie_closed: Some(lie_closed),
        bounds: Some(bounds),
        pbw,
        timings: with_timings.then_some(Timings {
            filtration_ms,
            pbw_ms,
        }),
    };
    if json {
        print_json(&report);
    } else {
        print!("{}", report.render_text());
    }
    if report.bounds.as_ref().is_some_and(|b| !b.consistent) {
        return Err(Failure::Verification(
            "measured length contradicts an applicable bound".into(),
        ));
    }
    Ok(())
}

fn cmd_pbw(input: &Path, up_to: Option<usize>, json: bool) -> Outcome {
    let (g, _) = read_input(input)?;
    let up_to = up_to.unwrap_or_else(|| default_up_to(&g));
    let f = filtration(&g);
    let r = check_pbw(&g, up_to, &f)?;
    if json {
        print_json(&r);
    } else {
        match r.verdict {
            PbwVerdict::Holds => println!("holds up to length {}", r.checked_up_to),
            PbwVerdict::Fails => {
                let ce = r.counterexample.as_ref().expect("failure carries a word");
                println!(
                    "fails at length {}: word {} is outside L_{} plus {} larger ordered words (rank {} of {})",
                    ce.length,
                    ce.word,
                    ce.length - 1,
                    ce.larger_ordered,
                    ce.span_rank,
                    f.rank_at(ce.length)?
                );
            }
            PbwVerdict::Truncated => println!(
                "checked up to length {} before the word cap",
                r.checked_up_to
            ),
        }
    }
    match r.verdict {
        PbwVerdict::Holds => Ok(()),
        PbwVerdict::Fails => Err(Failure::Verification(format!(
            "ordered rewriting fails at {}",
            r.counterexample.expect("failure carries a word").word
        ))),
        PbwVerdict::Truncated => Err(Failure::Truncated(format!(
            "word cap reached after length {}",
            r.checked_up_to
        ))),
    }
}

fn cmd_gen(family: GenFamily) -> Outcome {
    let field_of = |p: Option<u64>| match p {
        Some(p) => FieldSpec::prime(p),
        None => Ok(FieldSpec::rational()),
    };
    let g = match family {
        GenFamily::QuantumPlane { n, p } => quantum_plane(n, p)?,
        GenFamily::Sl2 { n, field } => sl2_irrep_in(field_of(field.p)?, n)?,
        GenFamily::Random {
            n,
            t,
            seed,
            p,
            rational,
        } => {
            let field = if rational {
                FieldSpec::rational()
            } else {
                FieldSpec::prime(p)?
            };
            random_set(n, t, field, seed)?
        }
    };
    print!("{}", render_matrix_set(&g));
    Ok(())
}

fn cmd_rewrite(input: &Path, word: &str, k: usize, opts: RewriteOptions) -> Outcome {
    let (g, _) = read_input(input)?;
    let u = parse_word(word, g.t())?;
    let f = filtration(&g);
    let cert = rewrite_word_with(&g, &u, k, &f, opts)?;
    let v = verify_certificate(&g, &cert, &f);
    if !v.valid {
        return Err(Failure::Verification(v.problems.join("; ")));
    }
    print_json(&cert);
    Ok(())
}

fn cmd_verify_cert(input: &Path, certificate: &Path, json: bool) -> Outcome {
    let (g, _) = read_input(input)?;
    let text = fs::read_to_string(certificate)
        .map_err(|e| Failure::Input(format!("{}: {e}", certificate.display())))?;
    let cert = parse_certificate(&text, g.t())
        .map_err(|e| Failure::Input(format!("{}: {e}", certificate.display())))?;
    let f = filtration(&g);
    let v = verify_certificate(&g, &cert, &f);
    if json {
        print_json(&v);
    } else if v.valid {
        println!("certificate valid: {} terms, {} steps", cert.terms.len(), cert.steps.len());
    } else {
        for p in &v.problems {
            println!("problem: {p}");
        }
    }
    if v.valid {
        Ok(())
    } else {
        Err(Failure::Verification(format!(
            "certificate rejected with {} problem(s)",
            v.problems.len()
        )))
    }
}

fn cmd_census(n: usize, t: usize, json: bool) -> Outcome {
    let r = verify_census_exhaustive(n, t)?;
    if json {
        print_json(&r);
    } else {
        println!(
            "n={n} t={t}: {} words enumerated, {} ordered without a run of length {n}",
            r.words_enumerated, r.words_checked
        );
        match r.min_slack {
            Some(s) => println!("{} violations, minimum slack {s}", r.violations.len()),
            None => println!("{} violations, no words to check", r.violations.len()),
        }
        for v in r.violations.iter().take(20) {
            println!("violation: {v:?}");
        }
    }
    if r.violations.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(format!(
            "{} violations",
            r.violations.len()
        )))
    }
}

fn read_ledger(path: &Path, family: &str) -> Result<BTreeSet<(usize, Option<u64>)>, Failure> {
    let mut seen = BTreeSet::new();
    let file = match fs::File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(seen),
        Err(e) => return Err(Failure::Input(format!("{}: {e}", path.display()))),
    };
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        if line.trim().is_empty() {
            continue;
        }
        let r: FamilyResult = serde_json::from_str(&line).map_err(|e| {
            Failure::Input(format!("{} line {}: {e}", path.display(), i + 1))
        })?;
        if r.family == family {
            seen.insert((r.n, r.seed));
        }
    }
    Ok(seen)
}

fn cmd_search(args: SearchArgs, json: bool) -> Outcome {
    let field = FieldSpec::prime(args.p)?;
    let family = match args.family {
        FamilyArg::Sl2 => SharpnessFamily::Sl2,
        FamilyArg::RandomLieClosure => SharpnessFamily::RandomLieClosure { t: args.t, field },
        FamilyArg::RandomFiltered => SharpnessFamily::RandomFiltered { t: args.t, field },
    };
    let skip = read_ledger(&args.ledger, family.id())?;
    let mut ledger = OpenOptions::new()
        .create(true)
        .append(true)
        .open(&args.ledger)
        .map_err(|e| Failure::Input(format!("{}: {e}", args.ledger.display())))?;
    let mut record = |r: &FamilyResult| -> matlen::Result<()> {
        let line = serde_json::to_string(r).expect("result serializes");
        writeln!(ledger, "{line}").map_err(|e| Error::Invalid(format!("ledger write: {e}")))
    };
    let out = search_sharpness_with(
        family,
        args.n_min..=args.n_max,
        args.budget,
        args.seeds,
        &skip,
        &mut record,
    )?;
    if json {
        print_json(&out);
    } else {
        for r in &out.results {
            println!(
                "{} n={} seed={} c={} gap(2n-3)={} ranks: {}",
                r.family,
                r.n,
                r.seed.map_or("-".into(), |s| s.to_string()),
                r.c,
                r.gap_2n3,
                join(&r.ranks)
            );
        }
        for (n, c) in &out.max_c_per_n {
            println!("max c for n={n}: {c} (2n-3 = {})", 2 * n - 3);
        }
        println!(
            "{} measured, {} skipped from ledger, {} rejected as not commutator-closed",
            out.results.len(),
            skip.len(),
            out.rejected
        );
    }
    if out.results.iter().any(|r| !r.consistent) {
        return Err(Failure::Verification("a measured set contradicts an applicable bound".into()));
    }
    if out.budget_exhausted {
        return Err(Failure::Truncated("budget exhausted; rerun to resume".into()));
    }
    Ok(())
}
