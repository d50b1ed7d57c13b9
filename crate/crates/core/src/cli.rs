//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 on usage or
//! runtime errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::Value;

use crate::equivalence::verify_decomposition;
use crate::error::{Error, Result};
use crate::exact::{parse_rational, parse_rational_list, to_f64, Rational};
use crate::function::{CylinderFunction, Generator};
use crate::path_space::{cantor_check, enumerate_paths, GraphSpec, Path};
use crate::representation::cuntz_check;
use crate::sierpinski::{parse_matrix, render, RenderFormat, SymbolSet};
use crate::spectral::{spectrum_table, EigenRecord, SpectralParams};
use crate::wavelets::{uneven_wavelet_basis, wavelet_basis, ComplementBasis, OnbMode, Wavelet};
use crate::weights::{MeasureRecord, WeightScheme};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "cuntz-spectral",
    version,
    about = "Spectra, Cuntz isometries and wavelets on Bratteli path spaces"
)]
pub struct Cli {
    /// Collapse exact numerator/denominator pairs to binary64 numbers.
    #[arg(long, global = true)]
    float: bool,

    /// Write the result to this file instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Cantor check and path enumeration for a vertex matrix.
    Graph(GraphArgs),
    /// Closed-form ζ-function.
    Zeta(ZetaArgs),
    /// Measure of a cylinder set.
    Measure(MeasureArgs),
    /// Eigenvalues of the Laplace–Beltrami operator up to a path depth.
    Eigen(EigenArgs),
    /// Wavelet detail-space generators at one level.
    Wavelets(WaveletArgs),
    /// Exact verifications.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Render a function on a Sierpinski fractal.
    Sierpinski(SierpinskiArgs),
}

#[derive(Debug, Subcommand)]
enum VerifyCommand {
    /// Cuntz relations and adjointness on the indicator basis of a level.
    Cuntz(CuntzArgs),
    /// Wavelet spaces against sums of eigenspaces.
    Equivalence(EquivalenceArgs),
}

#[derive(Debug, Args)]
struct WeightArgs {
    /// Number of vertices.
    #[arg(long)]
    d: usize,
    /// Scaling factor of a self-similar weight (defaults to D).
    #[arg(long, conflicts_with = "r")]
    lambda: Option<String>,
    /// Comma-separated vertex weights of a product weight, summing to 1.
    #[arg(long)]
    r: Option<String>,
}

impl WeightArgs {
    fn scheme(&self) -> Result<WeightScheme> {
        match (&self.r, &self.lambda) {
            (Some(r), _) => {
                let r = parse_rational_list(r)?;
                if r.len() != self.d {
                    return Err(Error::InvalidWeight(format!(
                        "--r has {} entries but --d is {}",
                        r.len(),
                        self.d
                    )));
                }
                WeightScheme::product(r)
            }
            (None, Some(lambda)) => WeightScheme::self_similar(self.d, parse_rational(lambda)?),
            (None, None) => WeightScheme::even(self.d),
        }
    }
}

#[derive(Debug, Args)]
struct GraphArgs {
    /// Number of vertices of the full graph.
    #[arg(long, required_unless_present = "matrix")]
    d: Option<usize>,
    /// Vertex matrix rows as digit strings, comma-separated (e.g. "10,11").
    #[arg(long)]
    matrix: Option<String>,
    /// Also list the paths of this length.
    #[arg(long, allow_negative_numbers = true)]
    paths: Option<isize>,
}

#[derive(Debug, Args)]
struct ZetaArgs {
    #[command(flatten)]
    weight: WeightArgs,
    #[arg(long, allow_negative_numbers = true)]
    s: f64,
}

#[derive(Debug, Args)]
struct MeasureArgs {
    #[command(flatten)]
    weight: WeightArgs,
    /// Vertex string, or "()" for the empty path.
    #[arg(long)]
    path: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TableFormat {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct EigenArgs {
    #[command(flatten)]
    weight: WeightArgs,
    #[arg(long, allow_negative_numbers = true)]
    s: f64,
    #[arg(long)]
    depth: usize,
    #[arg(long, value_enum, default_value = "json")]
    format: TableFormat,
    /// Include the eigenspace basis functions in JSON output.
    #[arg(long)]
    with_basis: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Onb {
    Fourier,
    Real,
}

#[derive(Debug, Args)]
struct WaveletArgs {
    #[command(flatten)]
    weight: WeightArgs,
    /// Detail level n (words of length n).
    #[arg(long)]
    level: usize,
    #[arg(long, value_enum, default_value = "fourier")]
    onb: Onb,
}

#[derive(Debug, Args)]
struct CuntzArgs {
    #[command(flatten)]
    weight: WeightArgs,
    #[arg(long)]
    level: usize,
}

#[derive(Debug, Args)]
struct EquivalenceArgs {
    #[command(flatten)]
    weight: WeightArgs,
    #[arg(long)]
    depth: usize,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, value_enum, default_value = "json")]
    format: JsonOnly,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum JsonOnly {
    Json,
}

#[derive(Debug, Args)]
struct SierpinskiArgs {
    /// Symbol matrix rows as 0/1 strings, comma-separated (e.g. "10,11").
    #[arg(long)]
    matrix: String,
    /// Render boxes of depth M + 1 (paths of length M).
    #[arg(long)]
    depth: usize,
    /// JSON file produced by `wavelets` or `eigen --with-basis`.
    #[arg(long)]
    function: Option<PathBuf>,
    /// Which function of the file to render, in document order.
    #[arg(long, default_value_t = 0)]
    index: usize,
    #[arg(long, default_value = "csv")]
    format: String,
}

/// Output of one command: the text and whether verification passed.
struct Outcome {
    text: String,
    passed: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, passed: true }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code. Results go to `stdout` unless `--out` is given.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &outcome.text).map_err(Error::from),
                None => stdout
                    .write_all(outcome.text.as_bytes())
                    .map_err(Error::from),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: {e}");
                return EXIT_ERROR;
            }
            if outcome.passed {
                EXIT_OK
            } else {
                let _ = writeln!(stderr, "verification failed");
                EXIT_FAILED
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Graph(args) => graph(args),
        Command::Zeta(args) => zeta(args),
        Command::Measure(args) => measure(args, cli.float),
        Command::Eigen(args) => eigen(args, cli.float),
        Command::Wavelets(args) => wavelets(args, cli.float),
        Command::Verify(VerifyCommand::Cuntz(args)) => {
            let report = cuntz_check(&args.weight.scheme()?, args.level)?;
            Ok(Outcome {
                text: to_json(&report)?,
                passed: report.exact && report.max_deviation == 0.0,
            })
        }
        Command::Verify(VerifyCommand::Equivalence(args)) => {
            let JsonOnly::Json = args.format;
            let report = verify_decomposition(&args.weight.scheme()?, args.depth, args.tol)?;
            Ok(Outcome {
                text: to_json(&report)?,
                passed: report.pass,
            })
        }
        Command::Sierpinski(args) => sierpinski(args),
    }
}

#[derive(Serialize)]
struct GraphReport {
    d: usize,
    vertex_matrix: Vec<Vec<u32>>,
    is_cantor: bool,
    row_sums: Vec<u64>,
    offending_rows: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    path_length: Option<isize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    path_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    paths: Option<Vec<Path>>,
}

fn graph(args: &GraphArgs) -> Result<Outcome> {
    let g = match (&args.matrix, args.d) {
        (Some(m), _) => GraphSpec::from_matrix(parse_matrix_digits(m)?)?,
        (None, Some(d)) => GraphSpec::full(d)?,
        (None, None) => {
            return Err(Error::InvalidGraph(
                "either --d or --matrix is required".into(),
            ))
        }
    };
    let report = cantor_check(&g);
    let paths = args.paths.map(|n| enumerate_paths(&g, n));
    Ok(Outcome::ok(to_json(&GraphReport {
        d: g.d(),
        vertex_matrix: g.vertex_matrix().to_vec(),
        is_cantor: report.is_cantor,
        row_sums: report.row_sums,
        offending_rows: report.offending_rows,
        path_length: args.paths,
        path_count: paths.as_ref().map(Vec::len),
        paths,
    })?))
}

/// Vertex-matrix rows may hold any decimal digits (multiplicities).
fn parse_matrix_digits(text: &str) -> Result<Vec<Vec<u32>>> {
    text.split(',')
        .map(|row| {
            row.trim()
                .chars()
                .map(|c| c.to_digit(10).ok_or_else(|| Error::Parse(text.to_string())))
                .collect()
        })
        .collect()
}

#[derive(Serialize)]
struct ZetaReport {
    s: f64,
    abscissa: f64,
    zeta: f64,
}

fn zeta(args: &ZetaArgs) -> Result<Outcome> {
    let w = args.weight.scheme()?;
    let zeta = w.zeta(args.s)?;
    Ok(Outcome::ok(to_json(&ZetaReport {
        s: args.s,
        abscissa: w.abscissa(),
        zeta,
    })?))
}

#[derive(Serialize)]
struct FloatMeasure {
    path: Path,
    measure: f64,
}

fn measure(args: &MeasureArgs, float: bool) -> Result<Outcome> {
    let w = args.weight.scheme()?;
    let path = Path::checked(args.path.parse::<Path>()?.vertices().to_vec(), w.d())?;
    let m = w.dixmier_measure(&path);
    let text = if float {
        to_json(&FloatMeasure {
            measure: to_f64(&m),
            path,
        })?
    } else {
        to_json(&MeasureRecord::new(path, &m))?
    };
    Ok(Outcome::ok(text))
}

/// `[re, im]` pairs for every coefficient of a function.
fn complex_pairs(f: &CylinderFunction<Complex64>) -> Vec<[f64; 2]> {
    f.coeffs().iter().map(|c| [c.re, c.im]).collect()
}

#[derive(Serialize)]
struct BasisDump {
    level: usize,
    coefficients: Vec<[f64; 2]>,
}

#[derive(Serialize)]
struct EigenRow<'a> {
    #[serde(flatten)]
    record: &'a EigenRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    eigen_general_num: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    eigen_general_den: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    basis: Option<Vec<BasisDump>>,
}

fn exact_parts(q: Option<&Rational>, float: bool) -> (Option<String>, Option<String>) {
    match q {
        Some(q) if !float => (Some(q.numer().to_string()), Some(q.denom().to_string())),
        _ => (None, None),
    }
}

fn eigen(args: &EigenArgs, float: bool) -> Result<Outcome> {
    let params = SpectralParams::new(args.s, args.weight.scheme()?);
    let table = spectrum_table(&params, args.depth);
    let text = match args.format {
        TableFormat::Json => {
            let rows: Vec<EigenRow> = table
                .iter()
                .map(|record| {
                    let (num, den) = exact_parts(record.eigen_general_exact.as_ref(), float);
                    let basis = args.with_basis.then(|| {
                        record
                            .basis
                            .iter()
                            .map(|b| BasisDump {
                                level: b.level(),
                                coefficients: complex_pairs(&b.to_complex()),
                            })
                            .collect()
                    });
                    EigenRow {
                        record,
                        eigen_general_num: num,
                        eigen_general_den: den,
                        basis,
                    }
                })
                .collect();
            to_json(&rows)?
        }
        TableFormat::Csv => {
            let mut out = String::from(if float {
                "path,eigen_closed,eigen_general,abs_diff,dim\n"
            } else {
                "path,eigen_closed,eigen_general,eigen_general_num,eigen_general_den,abs_diff,dim\n"
            });
            let opt = |x: Option<f64>| x.map_or(String::new(), |v| v.to_string());
            for r in &table {
                let exact = if float {
                    String::new()
                } else {
                    let (num, den) = exact_parts(r.eigen_general_exact.as_ref(), false);
                    format!("{},{},", num.unwrap_or_default(), den.unwrap_or_default())
                };
                out.push_str(&format!(
                    "{},{},{},{}{},{}\n",
                    r.path,
                    opt(r.eigen_closed),
                    r.eigen_general,
                    exact,
                    opt(r.abs_diff),
                    r.dim
                ));
            }
            out
        }
    };
    Ok(Outcome::ok(text))
}

#[derive(Serialize)]
struct WaveletDump {
    word: String,
    j: usize,
    k: usize,
    level: usize,
    coefficients: Vec<[f64; 2]>,
    /// Exact form `scale * body`, when available.
    #[serde(skip_serializing_if = "Option::is_none")]
    scale: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    body: Option<Vec<String>>,
}

impl WaveletDump {
    fn new(w: &Wavelet, float: bool) -> Self {
        let (scale, body) = match (&w.function, float) {
            (Generator::Exact(f), false) => (
                Some(f.scale().to_string()),
                Some(f.body().coeffs().iter().map(|c| c.to_string()).collect()),
            ),
            _ => (None, None),
        };
        WaveletDump {
            word: w
                .word
                .iter()
                .map(|&v| std::char::from_digit(v as u32, 36).unwrap_or('?'))
                .collect(),
            j: w.j,
            k: w.k,
            level: w.function.level(),
            coefficients: complex_pairs(&w.function.to_complex()),
            scale,
            body,
        }
    }
}

fn wavelets(args: &WaveletArgs, float: bool) -> Result<Outcome> {
    let w = args.weight.scheme()?;
    let family = match (&w, args.onb) {
        (WeightScheme::Product { .. }, _) => uneven_wavelet_basis(&w, args.level)?,
        (_, Onb::Fourier) => wavelet_basis(
            w.d(),
            args.level,
            &ComplementBasis::new(w.d(), OnbMode::Fourier)?,
        )?,
        (_, Onb::Real) => wavelet_basis(
            w.d(),
            args.level,
            &ComplementBasis::new(w.d(), OnbMode::GramSchmidtReal)?,
        )?,
    };
    let dump: Vec<WaveletDump> = family.iter().map(|w| WaveletDump::new(w, float)).collect();
    Ok(Outcome::ok(to_json(&dump)?))
}

/// Collects, in document order, every object with `level` and `coefficients`.
fn collect_functions(value: &Value, out: &mut Vec<(usize, Vec<Complex64>)>) -> Result<()> {
    match value {
        Value::Object(map) => {
            if let (Some(level), Some(Value::Array(coeffs))) =
                (map.get("level"), map.get("coefficients"))
            {
                let level = level
                    .as_u64()
                    .ok_or_else(|| Error::Parse(format!("level {level}")))?
                    as usize;
                let coeffs = coeffs
                    .iter()
                    .map(|c| match c {
                        Value::Number(x) => x.as_f64().map(|re| Complex64::new(re, 0.0)),
                        Value::Array(pair) if pair.len() == 2 => {
                            Some(Complex64::new(pair[0].as_f64()?, pair[1].as_f64()?))
                        }
                        _ => None,
                    })
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| {
                        Error::Parse("coefficients must be numbers or [re, im] pairs".into())
                    })?;
                out.push((level, coeffs));
            } else {
                for v in map.values() {
                    collect_functions(v, out)?;
                }
            }
        }
        Value::Array(items) => {
            for v in items {
                collect_functions(v, out)?;
            }
        }
        _ => {}
    }
    Ok(())
}

fn load_function(path: &PathBuf, index: usize, d: usize) -> Result<CylinderFunction<Complex64>> {
    let value: Value = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    let mut found = Vec::new();
    collect_functions(&value, &mut found)?;
    let count = found.len();
    let (level, coeffs) = found.into_iter().nth(index).ok_or_else(|| {
        Error::Parse(format!(
            "{}: no function at index {index} ({count} found)",
            path.display()
        ))
    })?;
    CylinderFunction::new(d, level, coeffs)
}

fn sierpinski(args: &SierpinskiArgs) -> Result<Outcome> {
    let format: RenderFormat = args.format.parse()?;
    let symbols = SymbolSet::from_matrix(&parse_matrix(&args.matrix)?)?;
    let f = match &args.function {
        Some(path) => load_function(path, args.index, symbols.d())?,
        None => CylinderFunction::constant(symbols.d(), 0, Complex64::new(1.0, 0.0)),
    };
    if f.level() > args.depth {
        return Err(Error::Refinement {
            from: f.level(),
            to: args.depth,
        });
    }
    Ok(Outcome::ok(render(&symbols, &f, args.depth, format)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("cuntz-spectral").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn usage_errors_exit_two() {
        let (code, _, err) = run_args(&["zeta", "--d", "2"]);
        assert_eq!(code, EXIT_ERROR);
        assert!(err.contains("--s"));
        assert_eq!(run_args(&["frobnicate"]).0, EXIT_ERROR);
        assert_eq!(run_args(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn divergence_exits_two() {
        let (code, _, err) = run_args(&["zeta", "--d", "2", "--lambda", "2", "--s", "1"]);
        assert_eq!(code, EXIT_ERROR);
        assert!(err.contains("diverges"));
    }

    #[test]
    fn weight_arguments_are_validated() {
        assert_eq!(
            run_args(&["measure", "--d", "3", "--r", "1/2,1/2", "--path", "0"]).0,
            EXIT_ERROR
        );
        assert_eq!(
            run_args(&["measure", "--d", "2", "--path", "02"]).0,
            EXIT_ERROR
        );
        let (code, out, _) = run_args(&["measure", "--d", "2", "--r", "1/3,2/3", "--path", "01"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("\"measure_num\": \"2\"") && out.contains("\"measure_den\": \"9\""));
    }

    #[test]
    fn loads_functions_from_nested_json() {
        let value: Value = serde_json::json!([
            {"path": "()", "basis": [{"level": 0, "coefficients": [[2.0, 0.0], [-2.0, 0.0]]}]},
            {"level": 1, "coefficients": [1.0, 2.0, 3.0, 4.0]}
        ]);
        let mut found = Vec::new();
        collect_functions(&value, &mut found).unwrap();
        assert_eq!(found.len(), 2);
        assert_eq!(found[0].0, 0);
        assert_eq!(found[1].1[3], Complex64::new(4.0, 0.0));
    }
}
