//! `latmon`: command line access to the lattice engine and the verification
//! pipelines.
//!
//! Exit codes: 0 success, 1 a verification found a mismatch, 2 bad input.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use latmon_core::fixture::{self, TableRow};
use latmon_core::isometry::{self, IsometryReport};
use latmon_core::verify::{self, Verification};
use latmon_core::{discform, genus, named, walls, Lattice, StandardLambdaModel};

/// Environment variable naming the isometry database root.
const DB_ENV: &str = "LATMON_DB";

#[derive(Parser)]
#[command(name = "latmon", version, about = "Exact checks on the lattice U(2)^3 + E8 + A1^2")]
struct Cli {
    /// worker threads (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// table fixture to use instead of the bundled one
    #[arg(long, global = true)]
    fixture: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Describe the standard model of Λ
    Info,
    /// Genus symbol of a lattice expression or lattice JSON file
    Genus { lattice: String },
    /// Discriminant form of a lattice expression or lattice JSON file
    Disc { lattice: String },
    /// Full report for an isometry file
    Report { file: PathBuf },
    /// Wall vectors in the coinvariant lattice of an isometry
    Walls {
        file: PathBuf,
        #[arg(long)]
        pex_only: bool,
    },
    /// Check a directory of isometry files against the table
    VerifyTable { dir: Option<PathBuf> },
    /// Check the discriminant group of Λ and its reflection group
    VerifyDiscgroup,
    /// Check squares and divisibilities of the orbit representatives
    VerifyOrbits,
    /// Check the reflection and lifting arguments for the monodromy group
    VerifyMonodromy,
    /// Check every genus string of the table against its lattice
    VerifyGenus,
}

enum Failure {
    Mismatch,
    Input(String),
}

impl From<latmon_core::Error> for Failure {
    fn from(e: latmon_core::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn load_lattice(arg: &str) -> Result<Lattice, Failure> {
    let p = Path::new(arg);
    if p.extension().is_some_and(|e| e == "json") {
        let text = std::fs::read_to_string(p).map_err(|e| Failure::Input(format!("{arg}: {e}")))?;
        return Ok(Lattice::from_json(&text)?);
    }
    Ok(named::build_named(arg)?)
}

fn load_table(cli: &Cli) -> Result<Vec<TableRow>, Failure> {
    Ok(match &cli.fixture {
        Some(p) => fixture::load_table(p)?,
        None => fixture::table1()?,
    })
}

fn print_json(v: &impl serde::Serialize) {
    println!("{}", serde_json::to_string(v).expect("serializable"));
}

fn emit(cli: &Cli, v: &Verification) -> Outcome {
    match cli.format {
        Format::Json => {
            for c in &v.checks {
                print_json(c);
            }
            print_json(&serde_json::json!({ "summary": v.summary(), "pass": v.passed(), "skipped": v.skipped }));
        }
        Format::Text => {
            for c in &v.checks {
                let tag = if c.pass { "ok  " } else { "FAIL" };
                if c.detail.is_empty() {
                    println!("{tag} {}", c.name);
                } else {
                    println!("{tag} {}: {}", c.name, c.detail);
                }
            }
            println!("{}", v.summary());
        }
    }
    if v.passed() {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}

fn info(cli: &Cli) -> Outcome {
    let m = StandardLambdaModel::new();
    let g = genus::genus_symbol(&m.lattice)?;
    let t = discform::discriminant_form(&m.lattice)?;
    let (p, n) = m.lattice.signature();
    match cli.format {
        Format::Json => print_json(&serde_json::json!({
            "lattice": m.lattice.name(),
            "rank": m.lattice.rank(),
            "signature": [p, n],
            "genus": g,
            "disc_order": t.order(),
        })),
        Format::Text => {
            println!("{}", m.lattice.describe());
            println!("genus {g}");
            println!("|D| = {}", t.order());
            println!("coordinates: U(2)^3 at 0..6, E8 at 6..14 (Bourbaki order), A1^2 at 14, 15");
        }
    }
    Ok(())
}

fn genus_cmd(cli: &Cli, arg: &str) -> Outcome {
    let l = load_lattice(arg)?;
    let raw = genus::genus_symbol_raw(&l)?;
    let g = genus::genus_symbol(&l)?;
    match cli.format {
        Format::Json => print_json(&serde_json::json!({ "lattice": arg, "genus": g, "raw": raw })),
        Format::Text => {
            println!("{g}");
            if raw != g {
                println!("raw {raw}");
            }
        }
    }
    Ok(())
}

fn disc_cmd(cli: &Cli, arg: &str) -> Outcome {
    let l = load_lattice(arg)?;
    let t = discform::discriminant_form(&l)?;
    let kr = if t.is_two_elementary() { discform::kernel_and_radical(&t).ok() } else { None };
    match cli.format {
        Format::Json => print_json(&serde_json::json!({
            "orders": t.orders(),
            "order": t.order(),
            "two_elementary": t.is_two_elementary(),
            "dim_kernel": kr.as_ref().map(|k| k.dim_kernel),
            "dim_radical": kr.as_ref().map(|k| k.dim_radical),
        })),
        Format::Text => {
            println!("invariants {:?}, order {}", t.orders(), t.order());
            if let Some(k) = kr {
                println!("dim K = {}, dim R = {}", k.dim_kernel, k.dim_radical);
            }
        }
    }
    Ok(())
}

fn print_report(r: &IsometryReport) {
    println!("order {}, ord(D_f) {}", r.order, r.disc_order);
    println!("inv  rank {:2}  {}", r.inv_rank, r.inv_genus);
    match &r.coinv_genus {
        Some(g) => println!("coinv rank {:2}  {g}", r.coinv_rank),
        None => println!("coinv 0"),
    }
    println!("O+ {}, coinv negative definite {}", r.in_o_plus, r.coinv_neg_def);
    println!("symplectic {}, regular {}, exceptional {}", r.symplectic, r.regular, r.exceptional);
    for w in &r.witnesses {
        println!("  {} {:?} square {} div {}", w.wclass.name(), w.vector, w.square, w.divisibility);
    }
    match r.fixture_row {
        Some(n) => println!("table row {n}, type ({})", r.type_letter),
        None if r.outside_table => println!("OUTSIDE TABLE"),
        None => println!("type {}", r.type_letter),
    }
}

fn report_cmd(cli: &Cli, file: &Path) -> Outcome {
    let m = StandardLambdaModel::new();
    let table = load_table(cli)?;
    let f = isometry::load_isometry_file(file, &m)?;
    let r = isometry::report(&m, &f.isometry, Some(&table))?;
    match cli.format {
        Format::Json => print_json(&r),
        Format::Text => print_report(&r),
    }
    if r.outside_table || f.row.is_some_and(|n| r.fixture_row != Some(n)) {
        Err(Failure::Mismatch)
    } else {
        Ok(())
    }
}

fn walls_cmd(cli: &Cli, file: &Path, pex_only: bool) -> Outcome {
    let m = StandardLambdaModel::new();
    let f = isometry::load_isometry_file(file, &m)?;
    let ws = walls::coinvariant_wall_scan(&m, &f.isometry, pex_only)?;
    for w in &ws {
        match cli.format {
            Format::Json => print_json(w),
            Format::Text => println!("{} {:?} square {} div {}", w.wclass.name(), w.vector, w.square, w.divisibility),
        }
    }
    if cli.format == Format::Text {
        println!("{} witnesses", ws.len());
    }
    Ok(())
}

fn verify_table_cmd(cli: &Cli, dir: Option<&Path>) -> Outcome {
    let env = std::env::var_os(DB_ENV).map(PathBuf::from);
    let Some(dir) = dir.map(Path::to_path_buf).or(env) else {
        let mut v = Verification { title: "isometry database".into(), checks: vec![], skipped: None };
        v.skipped = Some(format!("external data required: pass a directory or set {DB_ENV}"));
        return emit(cli, &v);
    };
    if !dir.is_dir() {
        return Err(Failure::Input(format!("{} is not a directory", dir.display())));
    }
    let table = load_table(cli)?;
    let (v, results) = verify::verify_table(&dir, &table)?;
    if cli.format == Format::Json {
        for r in &results {
            print_json(&serde_json::json!({
                "file": r.file, "claimed_row": r.claimed_row, "matched_row": r.matched_row,
                "pass": r.pass, "detail": r.detail,
            }));
        }
    } else {
        for r in &results {
            let row = r.matched_row.map(|n| format!("row {n}")).unwrap_or_else(|| "no row".into());
            println!("{} {} {row} {}", if r.pass { "ok  " } else { "FAIL" }, r.file, r.detail);
        }
    }
    emit(cli, &v)
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Info => info(cli),
        Command::Genus { lattice } => genus_cmd(cli, lattice),
        Command::Disc { lattice } => disc_cmd(cli, lattice),
        Command::Report { file } => report_cmd(cli, file),
        Command::Walls { file, pex_only } => walls_cmd(cli, file, *pex_only),
        Command::VerifyTable { dir } => verify_table_cmd(cli, dir.as_deref()),
        Command::VerifyDiscgroup => emit(cli, &verify::verify_discgroup()?),
        Command::VerifyOrbits => emit(cli, &verify::verify_orbits()?),
        Command::VerifyMonodromy => emit(cli, &verify::verify_monodromy()?),
        Command::VerifyGenus => emit(cli, &verify::verify_genus_table(&load_table(cli)?)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("latmon: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("latmon: {msg}");
            ExitCode::from(2)
        }
    }
}
