//! Command-line front end. Exit status: 0 success, 1 verification failure, 2 unusable
//! input or arguments, 3 numerical failure.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::json;

use crate::contractions::{containment_region, equality_check, strip_bounds_check};
use crate::error::Error;
use crate::essherm::{
    essherm_dilation_region, essherm_dilation_region_with_endpoints, two_point_product_region,
    two_point_product_region_with_endpoints, EssHermDilation, Endpoints,
};
use crate::matkernel::{parse_complex, parse_matrix, write_matrix, ComplexMatrix};
use crate::numrange::range_polygon;
use crate::plot::render_svg;
use crate::projpairs::{build_pair, wpq_region, ProjPairCanonicalForm};
use crate::regions::{check_grid, ConvexRegion};
use crate::report::VerifyReport;
use crate::verify::{all_as_expected, run_suite, summary_table, to_jsonl, Suite};
use crate::DEFAULT_GRID;

#[derive(Debug, Parser)]
#[command(name = "numrange", version, about = "Numerical ranges of matrix products and their elliptical regions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Support-function sweep of W(A) for one matrix file.
    Range {
        matrix: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Elliptical region for a pair of matrices.
    Region {
        #[arg(long, value_enum)]
        mode: Mode,
        /// Canonical form p,q,r,s:c1,c2,... instead of matrix files.
        #[arg(long)]
        form: Option<String>,
        /// Segment endpoints a1,a2,b1,b2 overriding detection.
        #[arg(long)]
        endpoints: Option<String>,
        matrices: Vec<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Randomized verification suite.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = crate::EQUALITY_TOL)]
        tol: f64,
        /// Write the JSON-lines report stream here (`-` for standard output).
        #[arg(long)]
        jsonl: Option<PathBuf>,
    },
    /// Regenerates the worked examples into a directory.
    Demo {
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, env = "NUMRANGE_GRID", default_value_t = DEFAULT_GRID)]
        grid: usize,
    },
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, env = "NUMRANGE_GRID", default_value_t = DEFAULT_GRID)]
    pub grid: usize,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Projections,
    Contractions,
    #[value(name = "two_point")]
    TwoPoint,
    Essherm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Svg,
    Jsonl,
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Compute(Error),
    Verification(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Compute(e) => e.exit_code(),
            Failure::Verification(_) => 1,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage: {m}"),
            Failure::Compute(e) => write!(f, "{e}"),
            Failure::Verification(m) => write!(f, "verification failed: {m}"),
        }
    }
}

type CliResult = std::result::Result<(), Failure>;

/// Parses arguments, runs the command and returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli.command) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("numrange: {f}");
            f.exit_code()
        }
    }
}

pub fn run(command: Command) -> CliResult {
    match command {
        Command::Range { matrix, output } => cmd_range(&matrix, &output),
        Command::Region {
            mode,
            form,
            endpoints,
            matrices,
            output,
        } => cmd_region(mode, form.as_deref(), endpoints.as_deref(), &matrices, &output),
        Command::Verify {
            suite,
            trials,
            n,
            seed,
            tol,
            jsonl,
        } => cmd_verify(&suite, trials, n, seed, tol, jsonl.as_deref()),
        Command::Demo { out_dir, grid } => cmd_demo(&out_dir, grid),
    }
}

fn validate_grid(m: usize) -> CliResult {
    check_grid(m).map_err(|e| Failure::Usage(e.to_string()))
}

fn read_matrix(path: &Path) -> std::result::Result<ComplexMatrix, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    parse_matrix(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn emit(output: &OutputArgs, body: &str) -> CliResult {
    match &output.out {
        Some(path) => fs::write(path, body).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .map_err(|e| Failure::Compute(Error::Io(e)))
        }
    }
}

/// One JSON object per generator, then one per grid angle.
pub fn region_jsonl(region: &ConvexRegion) -> String {
    let mut out = String::new();
    for g in &region.generators {
        out.push_str(&json!({ "generator": g.label }).to_string());
        out.push('\n');
    }
    for s in &region.samples {
        let line = json!({
            "theta": s.theta,
            "h": s.value,
            "re": s.boundary_point.re,
            "im": s.boundary_point.im,
        });
        out.push_str(&line.to_string());
        out.push('\n');
    }
    out
}

fn render(region: &ConvexRegion, format: Format) -> String {
    match format {
        Format::Csv => region.to_csv(),
        Format::Svg => render_svg(&[region]),
        Format::Jsonl => region_jsonl(region),
    }
}

pub fn cmd_range(path: &Path, output: &OutputArgs) -> CliResult {
    validate_grid(output.grid)?;
    let a = read_matrix(path)?;
    let region = range_polygon(&a, output.grid)?;
    emit(output, &render(&region, output.format))
}

/// Parses `a1,a2,b1,b2` with complex tokens such as `1`, `0.5-2i`, `i`.
pub fn parse_endpoints(text: &str) -> std::result::Result<Endpoints, Failure> {
    let tokens: Vec<&str> = text.split(',').collect();
    if tokens.len() != 4 {
        return Err(Failure::Usage(format!("--endpoints needs four values a1,a2,b1,b2, found `{text}`")));
    }
    let mut ends = [Complex64::new(0.0, 0.0); 4];
    for (slot, tok) in ends.iter_mut().zip(&tokens) {
        *slot = parse_complex(tok.trim())
            .ok_or_else(|| Failure::Usage(format!("--endpoints: `{tok}` is not a complex number")))?;
    }
    Ok(ends)
}

fn parse_form(text: &str) -> std::result::Result<ProjPairCanonicalForm, Failure> {
    text.parse()
        .map_err(|e: Error| Failure::Usage(format!("--form: {e}")))
}

fn matrix_pair(paths: &[PathBuf]) -> std::result::Result<(ComplexMatrix, ComplexMatrix), Failure> {
    match paths {
        [a, b] => Ok((read_matrix(a)?, read_matrix(b)?)),
        _ => Err(Failure::Usage(format!("expected two matrix files, found {}", paths.len()))),
    }
}

pub fn cmd_region(
    mode: Mode,
    form: Option<&str>,
    endpoints: Option<&str>,
    matrices: &[PathBuf],
    output: &OutputArgs,
) -> CliResult {
    validate_grid(output.grid)?;
    let form = form.map(parse_form).transpose()?;
    let ends = endpoints.map(parse_endpoints).transpose()?;
    if form.is_some() && !matrices.is_empty() {
        return Err(Failure::Usage("give either --form or matrix files, not both".into()));
    }
    if ends.is_some() && matches!(mode, Mode::Projections | Mode::Contractions) {
        return Err(Failure::Usage("--endpoints applies to two_point and essherm modes".into()));
    }
    let m = output.grid;
    let (a, b) = match &form {
        Some(f) => {
            let pair = build_pair(f, None)?;
            match (mode, ends) {
                (Mode::Projections | Mode::Contractions, _) => (pair.p, pair.q),
                (_, Some([a1, a2, b1, b2])) => (pair.p.scale(a1 - a2).shift(a2), pair.q.scale(b1 - b2).shift(b2)),
                (_, None) => return Err(Failure::Usage("--form in this mode needs --endpoints".into())),
            }
        }
        None => matrix_pair(matrices)?,
    };
    let mut verdict: Option<EssHermDilation> = None;
    let region = match mode {
        Mode::Projections => wpq_region(&a, &b, m)?,
        Mode::Contractions => containment_region(&a, &b, m)?,
        Mode::TwoPoint => match ends {
            Some(e) => two_point_product_region_with_endpoints(&a, &b, e, m)?,
            None => two_point_product_region(&a, &b, m)?,
        },
        Mode::Essherm => {
            let d = match ends {
                Some(e) => essherm_dilation_region_with_endpoints(&a, &b, e, m)?,
                None => essherm_dilation_region(&a, &b, m)?,
            };
            let region = d.region.clone();
            verdict = Some(d);
            region
        }
    };
    emit(output, &render(&region, output.format))?;
    if let Some(d) = verdict {
        eprintln!("containment {}", d.containment.verdict_line());
        eprintln!("equality {}", d.equality.verdict_line());
        if !d.containment.pass || !d.equality.ok() {
            return Err(Failure::Verification(
                "dilation region disagrees with the sweep of W(AB)".into(),
            ));
        }
    }
    Ok(())
}

pub fn cmd_verify(suite: &str, trials: usize, n: usize, seed: u64, tol: f64, jsonl: Option<&Path>) -> CliResult {
    let suite: Suite = suite.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
    if n < 2 {
        return Err(Failure::Usage(format!("--n must be at least 2, found {n}")));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Failure::Usage(format!("--tol must be positive, found {tol}")));
    }
    let reports = run_suite(suite, trials, n, seed, tol)?;
    let stream = to_jsonl(&reports);
    let table = summary_table(suite, &reports);
    match jsonl {
        Some(p) if p == Path::new("-") => {
            print!("{stream}");
            eprint!("{table}");
        }
        Some(p) => {
            fs::write(p, &stream).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
            print!("{table}");
        }
        None => print!("{table}"),
    }
    if all_as_expected(&reports) {
        Ok(())
    } else {
        Err(Failure::Verification(format!("{suite}: some reports did not meet their expected verdict")))
    }
}

fn write_file(dir: &Path, name: &str, body: &str) -> CliResult {
    let path = dir.join(name);
    fs::write(&path, body).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write_region(dir: &Path, stem: &str, region: &ConvexRegion) -> CliResult {
    write_file(dir, &format!("{stem}.csv"), &region.to_csv())?;
    write_file(dir, &format!("{stem}.svg"), &render_svg(&[region]))
}

fn write_report(dir: &Path, stem: &str, report: &VerifyReport) -> CliResult {
    write_file(dir, &format!("{stem}.csv"), &report.to_csv())?;
    write_file(dir, &format!("{stem}.txt"), &format!("{}\n", report.verdict_line()))
}

/// Every worked example, written as matrices, regions (CSV and SVG) and reports.
pub fn cmd_demo(dir: &Path, m: usize) -> CliResult {
    validate_grid(m)?;
    fs::create_dir_all(dir).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;

    let nilpotent = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
    write_file(dir, "nilpotent.txt", &write_matrix(&nilpotent))?;
    write_region(dir, "nilpotent_range", &range_polygon(&nilpotent, m)?)?;

    // A = B = diag(1, 1/2): W(AB) = [1/4, 1], strictly inside conv{E(1), E(1/4)}
    let diag = ComplexMatrix::from_real_diag(&[1.0, 0.5]);
    write_file(dir, "diag_fixture.txt", &write_matrix(&diag))?;
    let product_range = range_polygon(&diag.matmul(&diag), m)?;
    write_region(dir, "diag_product_range", &product_range)?;
    let contain = containment_region(&diag, &diag, m)?;
    write_region(dir, "diag_containment_region", &contain)?;
    write_file(dir, "diag_overlay.svg", &render_svg(&[&contain, &product_range]))?;
    write_report(dir, "diag_equality", &equality_check(&diag, &diag, m, crate::EQUALITY_TOL)?)?;
    write_report(dir, "diag_strip", &strip_bounds_check(&diag, &diag)?)?;

    let form: ProjPairCanonicalForm = "0,0,0,0:0.8".parse()?;
    let pair = build_pair(&form, None)?;
    write_region(dir, "form_0.8_projections", &wpq_region(&pair.p, &pair.q, m)?)?;

    let half = ProjPairCanonicalForm::new(0, 0, 0, 0, vec![0.5f64.sqrt()])?;
    let pair = build_pair(&half, None)?;
    write_report(dir, "strip_attained", &strip_bounds_check(&pair.p, &pair.q)?)?;
    let reflect = |x: &ComplexMatrix| x.scale_real(2.0).shift(Complex64::new(-1.0, 0.0));
    let (ra, rb) = (reflect(&pair.p), reflect(&pair.q));
    write_region(dir, "reflections_two_point", &two_point_product_region(&ra, &rb, m)?)?;

    let d = essherm_dilation_region(&diag, &diag, m)?;
    write_region(dir, "essherm_diag_dilation", &d.region)?;
    write_report(dir, "essherm_diag_equality", &d.equality)?;
    let a3 = ComplexMatrix::from_real_diag(&[0.0, 0.5, 1.0]);
    let b3 = ComplexMatrix::from_real_diag(&[1.0, 0.5, 0.0]);
    let d = essherm_dilation_region(&a3, &b3, m)?;
    write_region(dir, "essherm_three_point_dilation", &d.region)?;
    write_report(dir, "essherm_three_point_containment", &d.containment)?;
    write_report(dir, "essherm_three_point_equality", &d.equality)?;

    let mut summary = String::new();
    for suite in Suite::ALL {
        let reports = run_suite(suite, 10, 4, 7, crate::EQUALITY_TOL)?;
        write_file(dir, &format!("verify_{suite}.jsonl"), &to_jsonl(&reports))?;
        summary.push_str(&summary_table(suite, &reports));
    }
    write_file(dir, "verify_summary.txt", &summary)?;
    println!("wrote worked examples to {}", dir.display());
    Ok(())
}
