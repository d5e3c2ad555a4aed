//! Command-line front end. `build` writes the quiver presentation of the
//! corner algebra as JSON and DOT, `verify` runs the check suites for one
//! root order and coefficient field, `demo-permmod` walks the induced
//! permutation-module demonstration. Reports go to standard output as JSON
//! lines; the human-readable summary and timings go to standard error, so
//! the machine output stays byte-identical between runs.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use hecke_core::modrep::example_checks;
use hecke_core::{suites, BlockConstruction, Check, Field, FieldSpec, RunReport};

#[derive(Parser)]
#[command(name = "hecke", version, about = "Exact corner-algebra toolkit for Hecke algebras at a root of unity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FieldArg {
    /// cyclotomic field Q(zeta_l)
    Cyclo,
    /// finite field GF(p^k)
    Gf,
}

#[derive(Subcommand)]
enum Command {
    /// Build the corner algebra and write its quiver presentation
    Build {
        /// order of the root of unity
        #[arg(long)]
        l: u32,
        #[arg(long, value_enum, default_value = "cyclo")]
        field: FieldArg,
        /// characteristic, finite fields only
        #[arg(long)]
        p: Option<u32>,
        /// extension degree, finite fields only
        #[arg(long, default_value_t = 1)]
        k: u32,
        /// path stem: writes <out>.json and <out>.dot
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the verification suites for one order and field
    Verify {
        #[arg(long)]
        l: u32,
        #[arg(long, value_enum, default_value = "cyclo")]
        field: FieldArg,
        #[arg(long)]
        p: Option<u32>,
        #[arg(long, default_value_t = 1)]
        k: u32,
        /// also run the whole-algebra projectivity oracle of the demo module
        #[arg(long)]
        slow: bool,
    },
    /// Induced-module walkthrough: order 3, degree 6, GF(4)
    DemoPermmod {
        /// run over the characteristic-2 field GF(4) (the only scenario; on by default)
        #[arg(long)]
        char2: bool,
        /// also test projectivity over the whole degree-6 algebra
        #[arg(long)]
        slow: bool,
    },
}

fn degree_cap() -> Result<usize, String> {
    match std::env::var("HECKE_MAX_N") {
        Ok(v) => v.parse().map_err(|_| format!("HECKE_MAX_N is not a degree: {v:?}")),
        Err(_) => Ok(7),
    }
}

fn check_cap(n: usize) -> Result<(), String> {
    let cap = degree_cap()?;
    if n > cap {
        return Err(format!("degree {n} exceeds the cap {cap}; raise HECKE_MAX_N to allow it"));
    }
    Ok(())
}

fn make_field(l: u32, field: FieldArg, p: Option<u32>, k: u32) -> Result<Field, String> {
    match field {
        FieldArg::Cyclo => {
            if p.is_some() {
                return Err("--p only applies to --field gf".into());
            }
            Field::cyclotomic(l).map_err(|e| e.to_string())
        }
        FieldArg::Gf => {
            let p = p.ok_or("--field gf needs --p")?;
            Field::finite(p, k, l).map_err(|e| e.to_string())
        }
    }
}

fn field_label(spec: &FieldSpec) -> String {
    match spec {
        FieldSpec::Cyclotomic { l } => format!("Q(zeta_{l})"),
        FieldSpec::Finite { p, k: 1, .. } => format!("GF({p})"),
        FieldSpec::Finite { p, k, .. } => format!("GF({p}^{k})"),
    }
}

fn emit_report(report: &RunReport) {
    let header = serde_json::json!({"command": report.command, "field": report.field});
    println!("{header}");
    for c in &report.checks {
        println!("{}", serde_json::to_string(c).expect("serializable check"));
    }
    let passed = report.checks.iter().filter(|c| c.passed()).count();
    let summary = serde_json::json!({"summary": {"passed": passed, "total": report.checks.len()}});
    println!("{summary}");
    for c in &report.checks {
        let tag = if c.passed() { "PASS" } else { "FAIL" };
        eprintln!("  {tag} {} ({})", c.name, c.witness);
    }
    eprintln!("{}: {passed}/{} checks passed", report.command, report.checks.len());
}

fn run_suite(
    report: &mut RunReport,
    label: &str,
    f: impl FnOnce() -> hecke_core::Result<Vec<Check>>,
) -> Result<(), String> {
    let t = Instant::now();
    let checks = f().map_err(|e| format!("suite {label}: {e}"))?;
    eprintln!("  [{label}] {} checks in {:.2?}", checks.len(), t.elapsed());
    report.extend(checks);
    Ok(())
}

fn cmd_build(l: u32, field: Field, out: Option<PathBuf>, echo: String) -> Result<i32, String> {
    check_cap(l as usize)?;
    let t = Instant::now();
    let b = BlockConstruction::build(l as usize, field).map_err(|e| e.to_string())?;
    let pres = b.presentation();
    let json = serde_json::to_string(&pres).expect("serializable presentation");
    let dot = pres.to_dot();
    println!("{json}");
    if let Some(stem) = &out {
        let json_path = stem.with_extension("json");
        let dot_path = stem.with_extension("dot");
        std::fs::write(&json_path, format!("{json}\n")).map_err(|e| format!("{}: {e}", json_path.display()))?;
        std::fs::write(&dot_path, &dot).map_err(|e| format!("{}: {e}", dot_path.display()))?;
        eprintln!("  wrote {} and {}", json_path.display(), dot_path.display());
    }
    eprintln!(
        "{echo}: {} vertices, {} arrows, dimension {} over {} in {:.2?}",
        pres.vertices.len(),
        pres.arrows.len(),
        pres.dimension,
        field_label(&pres.field),
        t.elapsed()
    );
    Ok(0)
}

fn cmd_verify(l: u32, field: Field, slow: bool, echo: String) -> Result<i32, String> {
    check_cap(l as usize)?;
    let n = l as usize;
    let t = Instant::now();
    let mut report = RunReport::new(echo, Some(field.spec()));
    run_suite(&mut report, "presentation", || suites::suite_presentation(n, field.clone()))?;
    run_suite(&mut report, "relations", || suites::suite_hecke_properties(n, field.clone()))?;
    run_suite(&mut report, "vanishing", || suites::suite_vanishing_table(n, field.clone()))?;
    run_suite(&mut report, "factorizations", || suites::suite_factorizations(n, field.clone()))?;
    run_suite(&mut report, "cosets", || suites::suite_coset_equivalence(n, field.clone()))?;
    if n >= 3 {
        run_suite(&mut report, "nilpotent", || suites::suite_sigma_structure(n, field.clone()))?;
        run_suite(&mut report, "jordan", || suites::suite_jordan(n, field.clone()))?;
    }
    if n == 3 || n == 4 {
        run_suite(&mut report, "projectivity m=1", || {
            suites::suite_module_agreement(n, field.clone(), 1)
        })?;
    }
    if n == 3 {
        run_suite(&mut report, "projectivity m=2", || {
            suites::suite_module_agreement(n, field.clone(), 2)
        })?;
    }
    if slow {
        check_cap(6)?;
        run_suite(&mut report, "demo with slow oracle", || example_checks(true))?;
    }
    emit_report(&report);
    eprintln!("  total {:.2?}", t.elapsed());
    Ok(report.exit_code())
}

fn cmd_demo(slow: bool, echo: String) -> Result<i32, String> {
    check_cap(6)?;
    let t = Instant::now();
    let field = Field::finite(2, 2, 3).map_err(|e| e.to_string())?;
    let mut report = RunReport::new(echo, Some(field.spec()));
    run_suite(&mut report, "induced module", || example_checks(slow))?;
    emit_report(&report);
    eprintln!("  total {:.2?}", t.elapsed());
    Ok(report.exit_code())
}

fn run() -> Result<i32, String> {
    let cli = Cli::parse();
    match cli.command {
        Command::Build { l, field, p, k, out } => {
            let f = make_field(l, field, p, k)?;
            let mut echo = format!("build --l {l}");
            match field {
                FieldArg::Cyclo => echo.push_str(" --field cyclo"),
                FieldArg::Gf => echo.push_str(&format!(" --field gf --p {} --k {k}", p.unwrap_or(0))),
            }
            cmd_build(l, f, out, echo)
        }
        Command::Verify { l, field, p, k, slow } => {
            let f = make_field(l, field, p, k)?;
            let mut echo = format!("verify --l {l}");
            match field {
                FieldArg::Cyclo => echo.push_str(" --field cyclo"),
                FieldArg::Gf => echo.push_str(&format!(" --field gf --p {} --k {k}", p.unwrap_or(0))),
            }
            if slow {
                echo.push_str(" --slow");
            }
            cmd_verify(l, f, slow, echo)
        }
        Command::DemoPermmod { char2, slow } => {
            let mut echo = String::from("demo-permmod");
            if char2 {
                echo.push_str(" --char2");
            }
            if slow {
                echo.push_str(" --slow");
            }
            cmd_demo(slow, echo)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(0) => ExitCode::SUCCESS,
        Ok(_) => ExitCode::FAILURE,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
