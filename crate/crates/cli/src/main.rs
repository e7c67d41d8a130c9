use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use quadra_core::enumeration::{count_table, enumerate_classes, CensusFilter, CensusTable};
use quadra_core::equivalence::{aut_group_order, is_symmetric_equivalent, is_transpose_equivalent};
use quadra_core::forbidden::{detect_cond, detect_newcond};
use quadra_core::matrix::{
    has_zero_line, is_indecomposable, is_quadrangular, is_regular, is_row_strongly_quadrangular,
    is_strongly_quadrangular, row_sum_multiset, BinMatrix,
};
use quadra_core::witness::{find_witness, WitnessBudget, WitnessResult, WitnessStatus};

const EXIT_INPUT_ERROR: u8 = 1;
const EXIT_CERTIFIED_IMPOSSIBLE: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "quadra", version, about = "Census and unitary-support tools for SQ (0,1)-matrices")]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, env = "QUADRA_JOBS")]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the equivalence classes of SQ matrices of one degree.
    Enumerate(EnumerateArgs),
    /// Print the six census sequences.
    Counts(CountsArgs),
    /// Evaluate every predicate on a matrix file.
    Check(FileArgs),
    /// Search a matrix file for forbidden block embeddings.
    Detect(FileArgs),
    /// Look for a unitary supported by a matrix file.
    Witness(WitnessArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[arg(long)]
    degree: usize,
    #[arg(long)]
    indecomposable: bool,
    #[arg(long)]
    symmetric: bool,
    #[arg(long)]
    regular: bool,
    /// Fixed row sum, requires --regular.
    #[arg(long, requires = "regular")]
    sigma: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CountsArgs {
    #[arg(long, default_value_t = 5)]
    max_degree: usize,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args, Debug)]
struct FileArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args, Debug)]
struct WitnessArgs {
    file: PathBuf,
    #[arg(long, default_value_t = 200)]
    restarts: usize,
    #[arg(long, default_value_t = 2000)]
    iters: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-8)]
    support_tol: f64,
    #[arg(long, default_value_t = 1e-9)]
    unitary_tol: f64,
    /// Write the witness matrix JSON here.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT_ERROR);
        }
    }
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT_ERROR)
        }
    }
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Enumerate(args) => enumerate(args),
        Command::Counts(args) => counts(args),
        Command::Check(args) => check(args),
        Command::Detect(args) => detect(args),
        Command::Witness(args) => witness(args),
    }
}

fn read_matrix(path: &Path) -> Result<BinMatrix> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    BinMatrix::parse_text(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(output: Option<&Path>, content: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, content).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(content.as_bytes())?;
            Ok(())
        }
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn enumerate(args: EnumerateArgs) -> Result<u8> {
    let filter = CensusFilter {
        require_indecomposable: args.indecomposable,
        require_symmetric_equivalent: args.symmetric,
        require_regular: args.regular,
        sigma: args.sigma,
    };
    let table = enumerate_classes(args.degree, filter)?;
    let rendered = match args.format {
        Format::Text => census_text(&table),
        Format::Json => serde_json::to_string_pretty(&table)? + "\n",
        Format::Csv => census_csv(&table)?,
    };
    emit(args.output.as_deref(), &rendered)?;
    Ok(0)
}

fn census_text(table: &CensusTable) -> String {
    let mut out = format!("# degree {}: {} classes\n", table.degree, table.total_classes);
    for (idx, class) in table.entries.iter().enumerate() {
        let flags = class.flag_string();
        out.push_str(&format!(
            "# class {}: aut {}, index {}, zeros {}\n",
            idx + 1,
            class.aut_order,
            if flags.is_empty() { "-" } else { &flags },
            class.zero_count
        ));
        out.push_str(&class.canonical.to_text());
    }
    out
}

fn census_csv(table: &CensusTable) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(["degree", "canonical", "aut_order", "S", "T", "R", "N", "zeros"])?;
    for class in &table.entries {
        writer.write_record([
            class.degree().to_string(),
            class.canonical.row_strings().join("/"),
            class.aut_order.to_string(),
            u8::from(class.flag_symmetric).to_string(),
            u8::from(class.flag_transpose_inequivalent).to_string(),
            u8::from(class.flag_regular).to_string(),
            u8::from(class.flag_no_unitary).to_string(),
            class.zero_count.to_string(),
        ])?;
    }
    Ok(String::from_utf8(writer.into_inner()?)?)
}

fn counts(args: CountsArgs) -> Result<u8> {
    let table = count_table(args.max_degree)?;
    match args.format {
        Format::Json => {
            #[derive(Serialize)]
            struct CountsJson<'a> {
                max_degree: usize,
                sequences: std::collections::BTreeMap<&'a str, &'a [usize]>,
            }
            let json = CountsJson {
                max_degree: args.max_degree,
                sequences: table.rows().into_iter().collect(),
            };
            println!("{}", serde_json::to_string_pretty(&json)?);
        }
        _ => print!("{table}"),
    }
    Ok(0)
}

#[derive(Serialize)]
struct CheckReport {
    degree: usize,
    quadrangular: bool,
    row_strongly_quadrangular: bool,
    strongly_quadrangular: bool,
    indecomposable: bool,
    zero_line: bool,
    regular: bool,
    row_sums: Vec<usize>,
    zeros: usize,
    aut_order: u128,
    flags: CheckFlags,
}

#[derive(Serialize)]
struct CheckFlags {
    #[serde(rename = "S")]
    s: bool,
    #[serde(rename = "T")]
    t: bool,
    #[serde(rename = "R")]
    r: bool,
}

fn check(args: FileArgs) -> Result<u8> {
    let m = read_matrix(&args.file)?;
    let regular = is_regular(&m);
    let report = CheckReport {
        degree: m.degree(),
        quadrangular: is_quadrangular(&m),
        row_strongly_quadrangular: is_row_strongly_quadrangular(&m),
        strongly_quadrangular: is_strongly_quadrangular(&m),
        indecomposable: is_indecomposable(&m),
        zero_line: has_zero_line(&m),
        regular,
        row_sums: row_sum_multiset(&m).sums().to_vec(),
        zeros: m.zero_count(),
        aut_order: aut_group_order(&m),
        flags: CheckFlags {
            s: is_symmetric_equivalent(&m),
            t: !is_transpose_equivalent(&m),
            r: regular,
        },
    };
    match args.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report)?),
        _ => {
            let sums: Vec<String> = report.row_sums.iter().map(|s| s.to_string()).collect();
            println!("degree: {}", report.degree);
            println!("quadrangular: {}", yes_no(report.quadrangular));
            println!("row-SQ: {}", yes_no(report.row_strongly_quadrangular));
            println!("SQ: {}", yes_no(report.strongly_quadrangular));
            println!("indecomposable: {}", yes_no(report.indecomposable));
            println!("zero line: {}", yes_no(report.zero_line));
            println!("regular: {}", yes_no(report.regular));
            println!("row sums: {}", sums.join(" "));
            println!("zeros: {}", report.zeros);
            println!("aut order: {}", report.aut_order);
            println!("S: {}", yes_no(report.flags.s));
            println!("T: {}", yes_no(report.flags.t));
            println!("R: {}", yes_no(report.flags.r));
        }
    }
    Ok(0)
}

fn detect(args: FileArgs) -> Result<u8> {
    let m = read_matrix(&args.file)?;
    let cond = detect_cond(&m);
    let newcond = detect_newcond(&m);
    match args.format {
        Format::Json => {
            let certs: Vec<_> = cond.iter().chain(newcond.iter()).collect();
            println!("{}", serde_json::to_string_pretty(&certs)?);
        }
        _ => {
            if cond.is_none() && newcond.is_none() {
                println!("none");
            }
            for cert in cond.iter().chain(newcond.iter()) {
                println!("{:?}: {}", cert.kind, serde_json::to_string(cert)?);
            }
        }
    }
    Ok(0)
}

fn witness(args: WitnessArgs) -> Result<u8> {
    let m = read_matrix(&args.file)?;
    let budget = WitnessBudget {
        restarts: args.restarts,
        iterations: args.iters,
        support_tol: args.support_tol,
        unitary_tol: args.unitary_tol,
        seed: args.seed,
    };
    let result = find_witness(&m, &budget)?;
    println!("{}", serde_json::to_string_pretty(&result)?);
    report(&result);
    if let (Some(path), Some(w)) = (&args.output, &result.witness) {
        emit(Some(path), &(serde_json::to_string_pretty(w)? + "\n"))?;
    }
    Ok(match result.status {
        WitnessStatus::Witness => 0,
        WitnessStatus::CertifiedImpossible => EXIT_CERTIFIED_IMPOSSIBLE,
        WitnessStatus::Inconclusive => EXIT_INCONCLUSIVE,
    })
}

fn report(result: &WitnessResult) {
    eprintln!("status: {:?}", result.status);
    eprintln!("restarts used: {}", result.restarts_used);
    eprintln!("pattern residual: {:e}", result.final_residual);
    if let Some(w) = &result.witness {
        eprintln!("unitarity residual: {:e}", w.unitarity_residual());
    }
    if let Some(cert) = &result.certificate {
        eprintln!(
            "certificate: {:?} rows {:?} q_cols {:?} j_cols {:?}{}",
            cert.kind,
            cert.rows,
            cert.q_cols,
            cert.j_cols,
            if cert.transposed { " (transpose)" } else { "" }
        );
    }
}
