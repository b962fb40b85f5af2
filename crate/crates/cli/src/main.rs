use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use qmds::artifact::{write_catalog_csv, CodeArtifact};
use qmds::families::{
    catalog, closed_form_s_set, construct, validate, CatalogOptions, Family, FamilyError, IndexLemma,
    ParamsRequest,
};
use qmds::gf::{prime_power, FieldContext, DEFAULT_TABLE_BUDGET};
use qmds::grs::{binomial, DEFAULT_MDS_TRIALS, EXHAUSTIVE_MDS_BUDGET};
use qmds::oracle::{brute_force_s_set, full_verify, s_set_agrees, MdsPolicy};

const BUDGET_VAR: &str = "QMDS_TABLE_BUDGET";

#[derive(Parser)]
#[command(name = "qmds", version, about = "Quantum MDS codes from Hermitian self-orthogonal GRS codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a code and write its JSON artifact.
    Construct {
        #[arg(long)]
        q: u64,
        /// 1, 2, 3 or 4.
        #[arg(long)]
        family: u8,
        #[arg(long, default_value_t = 1)]
        case: u8,
        #[arg(long)]
        h: u64,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        k: u64,
        /// Comma-separated coset exponents (default 0..r-1).
        #[arg(long, value_delimiter = ',')]
        cosets: Option<Vec<u64>>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check an artifact and print the verification report.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Auto)]
        mode: Mode,
        #[arg(long, default_value_t = DEFAULT_MDS_TRIALS)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compare the closed-form index set with brute-force enumeration.
    Sset {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        h: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        family: u8,
        #[arg(long)]
        t: u64,
        /// Index-set variant (1 or 2) for families 3 and 4.
        #[arg(long, default_value_t = 1)]
        part: u8,
    },
    /// Enumerate, verify and list every construction up to qmax.
    Catalog {
        #[arg(long, default_value_t = 13)]
        qmax: u64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        verify_all: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_MDS_TRIALS)]
        trials: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Auto,
    Exhaustive,
    Sampled,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

enum Failure {
    Usage(String),
    Construction(String),
    Verification(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Construction(_) => 3,
            Failure::Verification(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Construction(m) | Failure::Verification(m) => m,
        }
    }
}

type Outcome = Result<(), Failure>;

fn table_budget() -> Result<u64, Failure> {
    match std::env::var(BUDGET_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{BUDGET_VAR} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_TABLE_BUDGET),
    }
}

fn field(q: u64) -> Result<Arc<FieldContext>, Failure> {
    let (p, e) = prime_power(q)
        .filter(|(p, _)| p % 2 == 1)
        .ok_or_else(|| Failure::Usage(format!("q = {q} is not an odd prime power")))?;
    FieldContext::with_budget(p, e, table_budget()?)
        .map(Arc::new)
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn family(n: u8) -> Result<Family, Failure> {
    Family::from_number(n).ok_or_else(|| Failure::Usage(format!("family must be 1..=4, got {n}")))
}

fn emit(out: Option<&PathBuf>, bytes: &[u8]) -> Outcome {
    match out {
        Some(path) => fs::write(path, bytes).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| Failure::Usage(e.to_string())),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_construct(
    q: u64,
    fam: u8,
    case: u8,
    h: u64,
    r: u64,
    k: u64,
    cosets: Option<Vec<u64>>,
    seed: u64,
    out: Option<PathBuf>,
) -> Outcome {
    let ctx = field(q)?;
    let request = ParamsRequest {
        family: family(fam)?,
        case,
        h,
        r,
        k,
        coset_exponents: cosets,
    };
    let params = validate(ctx, &request).map_err(|e| Failure::Usage(e.to_string()))?;
    for w in &params.warnings {
        eprintln!("warning: {w}");
    }
    let built = construct(&params, seed).map_err(|e| match e {
        FamilyError::HypothesisViolated(m) => Failure::Usage(m),
        other => Failure::Construction(other.to_string()),
    })?;
    let artifact = CodeArtifact::from_construction(&built).map_err(|e| Failure::Construction(e.to_string()))?;
    emit(out.as_ref(), artifact.to_json().as_bytes())?;
    let line = format!("{} via {:?}", artifact.quantum, built.route);
    if out.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
    Ok(())
}

fn cmd_verify(input: PathBuf, mode: Mode, trials: u64, seed: u64) -> Outcome {
    let text = fs::read_to_string(&input).map_err(|e| Failure::Usage(format!("{}: {e}", input.display())))?;
    let artifact = CodeArtifact::parse(&text).map_err(|e| Failure::Usage(e.to_string()))?;
    let code = artifact
        .rebuild(table_budget()?)
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let policy = match mode {
        Mode::Auto => MdsPolicy::Auto { trials, seed },
        Mode::Sampled => MdsPolicy::Sampled { trials, seed },
        Mode::Exhaustive => {
            let needed = binomial(code.n() as u64, code.k() as u64);
            if needed > EXHAUSTIVE_MDS_BUDGET {
                return Err(Failure::Usage(format!(
                    "exhaustive MDS check needs {needed} subsets, budget is {EXHAUSTIVE_MDS_BUDGET}"
                )));
            }
            MdsPolicy::Exhaustive
        }
    };
    let report = full_verify(&code, Some(artifact.quantum), policy);
    let json = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    emit(None, json.as_bytes())?;
    if report.all_pass() {
        Ok(())
    } else {
        Err(Failure::Verification("verification failed".into()))
    }
}

fn show_set<I: IntoIterator<Item = u64>>(values: I) -> String {
    let items: Vec<String> = values.into_iter().map(|s| s.to_string()).collect();
    if items.is_empty() {
        "∅".into()
    } else {
        format!("{{{}}}", items.join(","))
    }
}

fn cmd_sset(q: u64, h: u64, k: u64, fam: u8, t: u64, part: u8) -> Outcome {
    let family = family(fam)?;
    let lemma = IndexLemma { family, part };
    if !IndexLemma::all().contains(&lemma) {
        return Err(Failure::Usage(format!("{family} has no index-set part {part}")));
    }
    if prime_power(q).filter(|(p, _)| p % 2 == 1).is_none() {
        return Err(Failure::Usage(format!("q = {q} is not an odd prime power")));
    }
    if family.quotient(q, h).is_none() {
        return Err(Failure::Usage(format!("h = {h} is not admissible for {family} at q = {q}")));
    }
    if !lemma.t_range(h).contains(&t) {
        return Err(Failure::Usage(format!("t must lie in {:?} for h = {h}", lemma.t_range(h))));
    }
    let closed = closed_form_s_set(lemma, q, h, t, k).expect("quotient checked");
    let brute = brute_force_s_set(q, h, k, closed.shift).map_err(|e| Failure::Usage(e.to_string()))?;
    let agree = s_set_agrees(&closed, &brute);

    let mut out = String::new();
    out += &format!("closed form: {}\n", show_set(closed.values.iter().copied()));
    out += &format!("oracle:      {}\n", show_set(brute.keys().copied()));
    out += "s\tclosed\toracle\n";
    let keys: std::collections::BTreeSet<u64> = closed.values.iter().chain(brute.keys()).copied().collect();
    for s in keys {
        let c = closed
            .witnesses
            .get(&s)
            .map_or("-".to_string(), |(i, j)| format!("({i},{j})"));
        let b = brute.get(&s).map_or("-".to_string(), |w| {
            w.iter().map(|(i, j)| format!("({i},{j})")).collect::<Vec<_>>().join(" ")
        });
        out += &format!("{s}\t{c}\t{b}\n");
    }
    out += if agree { "AGREE\n" } else { "DISAGREE\n" };
    emit(None, out.as_bytes())?;
    if agree {
        Ok(())
    } else {
        Err(Failure::Verification("closed form and oracle disagree".into()))
    }
}

fn cmd_catalog(qmax: u64, format: Format, verify: bool, seed: u64, trials: u64, out: Option<PathBuf>) -> Outcome {
    let opts = CatalogOptions {
        qmax,
        seed,
        mds_trials: trials,
        table_budget: table_budget()?,
        verify,
    };
    let cat = catalog(&opts).map_err(|e| Failure::Usage(e.to_string()))?;
    let bytes = match format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_catalog_csv(&cat.entries, &mut buf).map_err(|e| Failure::Usage(e.to_string()))?;
            buf
        }
        Format::Json => (serde_json::to_string_pretty(&cat.entries).expect("entries serialize") + "\n").into_bytes(),
    };
    emit(out.as_ref(), &bytes)?;
    if cat.skipped.is_empty() {
        Ok(())
    } else {
        for s in &cat.skipped {
            eprintln!("skipped: {s}");
        }
        Err(Failure::Construction(format!("{} instance(s) not emitted", cat.skipped.len())))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Construct {
            q,
            family,
            case,
            h,
            r,
            k,
            cosets,
            seed,
            out,
        } => cmd_construct(q, family, case, h, r, k, cosets, seed, out),
        Command::Verify {
            input,
            mode,
            trials,
            seed,
        } => cmd_verify(input, mode, trials, seed),
        Command::Sset {
            q,
            h,
            k,
            family,
            t,
            part,
        } => cmd_sset(q, h, k, family, t, part),
        Command::Catalog {
            qmax,
            format,
            verify_all,
            seed,
            trials,
            out,
        } => cmd_catalog(qmax, format, verify_all, seed, trials, out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
