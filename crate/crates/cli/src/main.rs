use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use twisted_cubic::check::{all_pass, Check};
use twisted_cubic::classify::Geometry;
use twisted_cubic::covering::{
    build_gdrs, mu_and_density, newton_radius_check, scalar_invariance_check, syndrome_census,
};
use twisted_cubic::gf::{field_of_order, make_field, FieldSpec};
use twisted_cubic::incidence::{dump_submatrix, full_report, DumpFormat, DEFAULT_CELL_CEILING};
use twisted_cubic::verify::{verify_field, VerifyOptions, VerifyReport, SUITE_GRID};

/// Largest field order the commands accept.
const MAX_ORDER: u32 = 32;

#[derive(Parser)]
#[command(name = "tcubic", version, about = "Twisted cubic orbits, incidence tables and the associated covering code")]
struct Cli {
    /// Worker threads for the parallel passes
    #[arg(long, global = true, env = "TCUBIC_THREADS", value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,

    /// Write output here instead of stdout
    #[arg(long, global = true, env = "TCUBIC_OUT")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct FieldArgs {
    /// Field order (a prime power)
    #[arg(long, env = "TCUBIC_Q", conflicts_with_all = ["p", "e"])]
    q: Option<u64>,
    /// Characteristic
    #[arg(long, env = "TCUBIC_P", requires = "e")]
    p: Option<u32>,
    /// Extension degree
    #[arg(long, env = "TCUBIC_E", requires = "p")]
    e: Option<u32>,
    /// Monic irreducible modulus, coefficients low to high, comma separated
    #[arg(long, env = "TCUBIC_MODULUS", requires = "p", value_delimiter = ',')]
    modulus: Option<Vec<u32>>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Markdown,
}

#[derive(Clone, Copy, ValueEnum)]
enum DumpFmt {
    Csv,
    Rle,
}

#[derive(Subcommand)]
enum Command {
    /// Print the 5×5 grid of (k_ij, r_ij)
    Tables {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_enum, default_value = "markdown", env = "TCUBIC_FORMAT")]
        format: Format,
    },
    /// Run the checks and exit non-zero on any failure
    Verify {
        #[command(flatten)]
        field: FieldArgs,
        /// Run every q of the default grid instead of one field
        #[arg(long, env = "TCUBIC_SUITE")]
        suite: bool,
        /// Check that every single-point deletion breaks saturation
        #[arg(long, env = "TCUBIC_MINIMALITY")]
        minimality: bool,
        /// Compare transposed submatrices, not only their parameters
        #[arg(long, env = "TCUBIC_MATRIX_TRANSPOSE_CHECK")]
        matrix_transpose_check: bool,
        /// Both optional checks
        #[arg(long)]
        all: bool,
        #[arg(long, value_enum, default_value = "markdown", env = "TCUBIC_FORMAT")]
        format: Format,
    },
    /// Covering radius, multiplicity and density of the code
    Code {
        #[command(flatten)]
        field: FieldArgs,
        /// Emit the coset-leader weight histogram as CSV
        #[arg(long)]
        histogram: bool,
        #[arg(long, value_enum, default_value = "markdown", env = "TCUBIC_FORMAT")]
        format: Format,
    },
    /// Write one submatrix I_ij
    Dump {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, num_args = 2, value_names = ["I", "J"], required = true)]
        submatrix: Vec<usize>,
        #[arg(long, value_enum, default_value = "csv")]
        format: DumpFmt,
        /// Refuse submatrices with more cells than this
        #[arg(long, default_value_t = DEFAULT_CELL_CEILING, env = "TCUBIC_CELL_CEILING")]
        cell_ceiling: usize,
    },
}

enum Failure {
    Usage(String),
    Verification(String),
}

type Outcome = Result<String, (Failure, Option<String>)>;

fn usage<E: std::fmt::Display>(e: E) -> (Failure, Option<String>) {
    (Failure::Usage(e.to_string()), None)
}

fn build_field(args: &FieldArgs) -> Result<FieldSpec, (Failure, Option<String>)> {
    let field = match (args.q, args.p, args.e) {
        (Some(q), _, _) => field_of_order(q).map_err(usage)?,
        (None, Some(p), Some(e)) => make_field(p, e, args.modulus.as_deref()).map_err(usage)?,
        _ => return Err(usage("give --q or both --p and --e")),
    };
    if field.order() > MAX_ORDER {
        return Err(usage(format!("q = {} is above the supported ceiling {MAX_ORDER}", field.order())));
    }
    Ok(field)
}

fn render_tables(field: FieldSpec, format: Format) -> Outcome {
    let geom = Geometry::new(field).map_err(usage)?;
    let part = geom.partition().map_err(|e| (Failure::Verification(e.to_string()), None))?;
    let report = full_report(&geom, &part).map_err(|e| (Failure::Verification(e.to_string()), None))?;
    let checks = report.table_checks();
    let mut s = String::new();
    match format {
        Format::Json => s = serde_json::to_string_pretty(&report.to_json(&checks)).unwrap() + "\n",
        Format::Csv => {
            s.push_str("i,j,k,r,rows,cols\n");
            for row in &report.grid {
                for c in row {
                    let _ = writeln!(s, "{},{},{},{},{},{}", c.i, c.j, c.k, c.r, c.rows, c.cols);
                }
            }
        }
        Format::Markdown => {
            let _ = writeln!(s, "q = {}, ξ = {}; cells show k_ij/r_ij\n", report.q, report.xi);
            let _ = writeln!(
                s,
                "| | M1 ({}) | M2 ({}) | M3 ({}) | M4 ({}) | M5 ({}) |",
                report.point_sizes[0],
                report.point_sizes[1],
                report.point_sizes[2],
                report.point_sizes[3],
                report.point_sizes[4]
            );
            s.push_str("|---|---|---|---|---|---|\n");
            for (i, row) in report.grid.iter().enumerate() {
                let _ = write!(s, "| N{} ({}) |", i + 1, report.plane_sizes[i]);
                for c in row {
                    let _ = write!(s, " {}/{} |", c.k, c.r);
                }
                s.push('\n');
            }
        }
    }
    if all_pass(&checks) {
        Ok(s)
    } else {
        let first = checks.iter().find(|c| !c.pass).unwrap();
        Err((Failure::Verification(format!("{}: {}", first.name, first.witness.clone().unwrap_or_default())), Some(s)))
    }
}

fn render_check_lines(s: &mut String, section: &str, checks: &[Check]) {
    for c in checks {
        let status = match (c.pass, &c.skipped) {
            (true, Some(_)) => "SKIP",
            (true, None) => "PASS",
            (false, _) => "FAIL",
        };
        let _ = write!(s, "{status} {section}: {}", c.name);
        if let Some(w) = c.witness.as_ref().or(c.skipped.as_ref()) {
            let _ = write!(s, " ({w})");
        }
        s.push('\n');
    }
}

fn render_verify(reports: &[VerifyReport], format: Format) -> Outcome {
    let mut s = String::new();
    match format {
        Format::Json => {
            let v = if reports.len() == 1 {
                serde_json::to_value(&reports[0]).unwrap()
            } else {
                serde_json::json!({"schema_version": reports[0].schema_version, "runs": reports})
            };
            s = serde_json::to_string_pretty(&v).unwrap() + "\n";
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["q", "section", "check", "pass", "skipped", "witness"]).expect("in-memory write");
            for r in reports {
                for (sec, c) in r.checks() {
                    let q = r.q.to_string();
                    let pass = c.pass.to_string();
                    let skipped = c.skipped.as_deref().unwrap_or("");
                    let witness = c.witness.as_deref().unwrap_or("");
                    w.write_record([q.as_str(), sec, &c.name, &pass, skipped, witness]).expect("in-memory write");
                }
            }
            s = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8");
        }
        Format::Markdown => {
            for r in reports {
                let _ = writeln!(s, "## q = {} (ξ = {})", r.q, r.xi);
                for sec in &r.sections {
                    render_check_lines(&mut s, sec.name, &sec.checks);
                }
                if let Some(code) = &r.code {
                    let _ = writeln!(s, "{}", code.summary());
                }
                s.push('\n');
            }
        }
    }
    match reports.iter().find_map(|r| r.first_failure().map(|f| (r.q, f))) {
        None => Ok(s),
        Some((q, (sec, c))) => Err((
            Failure::Verification(format!("q={q} {sec}: {} ({})", c.name, c.witness.clone().unwrap_or_default())),
            Some(s),
        )),
    }
}

fn render_code(field: FieldSpec, histogram: bool, format: Format) -> Outcome {
    let geom = Geometry::new(field).map_err(usage)?;
    let code = build_gdrs(&geom).map_err(usage)?;
    let census = syndrome_census(&code);
    if histogram {
        return Ok(census.histogram_csv());
    }
    let report = mu_and_density(&code, &census).map_err(|e| (Failure::Verification(e.to_string()), None))?;
    let mut checks = report.checks();
    checks.extend(newton_radius_check(&census));
    checks.push(scalar_invariance_check(&code, &census));
    let mut s = String::new();
    match format {
        Format::Json => s = serde_json::to_string_pretty(&report.to_json(&checks)).unwrap() + "\n",
        Format::Csv => {
            let g = &report.gamma_direct;
            s.push_str("q,n,k,d,R,mu,D,gamma_num,gamma_den\n");
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{}",
                report.q,
                report.n,
                report.k,
                report.d,
                report.radius,
                report.mu_min,
                report.deep_holes,
                g.numer(),
                g.denom()
            );
        }
        Format::Markdown => {
            let _ = writeln!(s, "{}", report.summary());
            if let Some((p, same)) = report.printed_closed_form() {
                let verdict = if same { "agrees" } else { "differs" };
                let _ = writeln!(s, "printed closed form gives {}/{}, which {verdict}", p.numer(), p.denom());
            }
            render_check_lines(&mut s, "code", &checks);
        }
    }
    if all_pass(&checks) {
        Ok(s)
    } else {
        let first = checks.iter().find(|c| !c.pass).unwrap();
        Err((Failure::Verification(format!("{}: {}", first.name, first.witness.clone().unwrap_or_default())), Some(s)))
    }
}

fn run(cli: Cli) -> Outcome {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(t as usize).build_global().map_err(usage)?;
    }
    match cli.command {
        Command::Tables { field, format } => render_tables(build_field(&field)?, format),
        Command::Verify { field, suite, minimality, matrix_transpose_check, all, format } => {
            let opts = VerifyOptions { minimality: minimality || all, matrix_transpose: matrix_transpose_check || all };
            let reports: Vec<VerifyReport> = if suite {
                SUITE_GRID
                    .iter()
                    .map(|&q| {
                        let o = VerifyOptions { minimality: opts.minimality && q <= 9, ..opts };
                        verify_field(field_of_order(q).expect("grid orders are prime powers"), o)
                    })
                    .collect()
            } else {
                vec![verify_field(build_field(&field)?, opts)]
            };
            render_verify(&reports, format)
        }
        Command::Code { field, histogram, format } => render_code(build_field(&field)?, histogram, format),
        Command::Dump { field, submatrix, format, cell_ceiling } => {
            let geom = Geometry::new(build_field(&field)?).map_err(usage)?;
            let part = geom.partition().map_err(|e| (Failure::Verification(e.to_string()), None))?;
            let fmt = match format {
                DumpFmt::Csv => DumpFormat::Csv,
                DumpFmt::Rle => DumpFormat::RunLength,
            };
            dump_submatrix(&geom, &part, submatrix[0], submatrix[1], fmt, cell_ceiling).map_err(usage)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.out.clone();
    let emit = |text: &str| -> Result<(), String> {
        match &out {
            Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    };
    match run(cli) {
        Ok(text) => match emit(&text) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Err((failure, partial)) => {
            if let Some(text) = partial {
                if let Err(e) = emit(&text) {
                    eprintln!("error: {e}");
                }
            }
            match failure {
                Failure::Usage(m) => {
                    eprintln!("error: {m}");
                    ExitCode::from(2)
                }
                Failure::Verification(m) => {
                    eprintln!("verification failed: {m}");
                    ExitCode::from(1)
                }
            }
        }
    }
}
