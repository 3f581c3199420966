//! Batch front end behind the `gmoment` binary.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error,
//! 3 internal invariant failure. Results go to stdout, diagnostics to
//! stderr.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

use crate::coefficients::{coefficient_closed_form, coefficient_recursive};
use crate::error::MomentError;
use crate::evaluator::{build_polynomial, differentiate_wrt_cov, moment, moment_in_mode};
use crate::input::load_spec;
use crate::oracles::{isserlis_sum, mc_estimate, stein_moment};
use crate::scalar::{rational_to_f64, NumericMode, Scalar};
use crate::spec::{make_gaussian_spec, ExactSpec};
use crate::support::{count_support, enumerate_support};
use crate::symbolic::{to_symbolic, SymbolicFormat};
use crate::types::{make_multi_index, MultiIndex};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "gmoment",
    version,
    about = "Exact product moments of multivariate Gaussian variables"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Float,
}

impl From<ModeArg> for NumericMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => NumericMode::Exact,
            ModeArg::Float => NumericMode::Float,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Text,
    Latex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleArg {
    Stein,
    Isserlis,
    Mc,
    Price,
    Factor,
    Recursive,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the moment for a spec file (standard normal if omitted).
    Compute {
        /// Comma-separated exponents, e.g. 2,3,1
        #[arg(long = "a", allow_hyphen_values = true)]
        a: String,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
        #[arg(long)]
        parallel: bool,
    },
    /// Print the moment polynomial.
    Symbolic {
        #[arg(long = "a", allow_hyphen_values = true)]
        a: String,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
    },
    /// Cross-check the formula against an independent route.
    Verify {
        #[arg(long = "a", allow_hyphen_values = true)]
        a: String,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, value_enum)]
        oracle: OracleArg,
        /// 1-based row of the covariance entry (price)
        #[arg(long)]
        i: Option<usize>,
        /// 1-based column of the covariance entry (price)
        #[arg(long)]
        j: Option<usize>,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Print |S_a|, the number of terms.
    Terms {
        #[arg(long = "a", allow_hyphen_values = true)]
        a: String,
    },
    /// Time streaming evaluation and bare enumeration.
    Bench {
        #[arg(long = "a", allow_hyphen_values = true)]
        a: String,
        #[arg(long, default_value_t = 3)]
        reps: u32,
        /// Spec file; a dense rational default is used if omitted.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
        #[arg(long)]
        parallel: bool,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Moment(MomentError),
    Io(std::io::Error),
}

impl From<MomentError> for Failure {
    fn from(e: MomentError) -> Self {
        Failure::Moment(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome = Result<i32, Failure>;

/// Parses `"2,3,1"` into a validated multi-index.
pub fn parse_exponents(text: &str) -> Result<MultiIndex, MomentError> {
    let raw = text
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<i64>()
                .map_err(|_| MomentError::Parse(format!("invalid exponent '{}'", s.trim())))
        })
        .collect::<Result<Vec<_>, _>>()?;
    make_multi_index(&raw)
}

fn spec_or_standard(input: &Option<PathBuf>, n: usize) -> Result<ExactSpec, MomentError> {
    match input {
        Some(path) => {
            let spec = load_spec(path)?;
            spec.check_dim(n)?;
            Ok(spec)
        }
        None => Ok(ExactSpec::standard(n)),
    }
}

/// Dense rational spec used by `bench` when no input is given:
/// `mu_j = 1/(j+1)`, `phi_ij = 1/(i+j-1)` with 1-based indices (a Hilbert matrix).
pub fn dense_bench_spec(n: usize) -> ExactSpec {
    let r = |p: usize, q: usize| BigRational::new((p as i64).into(), (q as i64).into());
    make_gaussian_spec(
        (0..n).map(|j| r(1, j + 2)).collect(),
        (0..n)
            .map(|i| (0..n).map(|j| r(1, i + j + 1)).collect())
            .collect(),
    )
    .expect("Hilbert matrix is symmetric")
}

/// Runs the CLI on explicit arguments (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{rendered}")
            } else {
                write!(out, "{rendered}")
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Moment(e)) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_internal() {
                EXIT_INTERNAL
            } else {
                EXIT_USAGE
            }
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INTERNAL
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Compute {
            a,
            input,
            mode,
            parallel,
        } => {
            let a = parse_exponents(&a)?;
            let spec = spec_or_standard(&input, a.dim())?;
            let value = moment_in_mode(&a, &spec, mode.into(), parallel)?;
            writeln!(out, "value: {value}")?;
            writeln!(out, "terms: {}", count_support(&a))?;
            Ok(EXIT_OK)
        }
        Command::Symbolic { a, format } => {
            let a = parse_exponents(&a)?;
            let format = match format {
                FormatArg::Text => SymbolicFormat::Text,
                FormatArg::Latex => SymbolicFormat::Latex,
            };
            writeln!(out, "{}", to_symbolic(&build_polynomial(&a)?, format))?;
            Ok(EXIT_OK)
        }
        Command::Terms { a } => {
            let a = parse_exponents(&a)?;
            writeln!(out, "{}", count_support(&a))?;
            Ok(EXIT_OK)
        }
        Command::Verify {
            a,
            input,
            oracle,
            i,
            j,
            samples,
            seed,
        } => {
            let a = parse_exponents(&a)?;
            verify(&a, &input, oracle, i, j, samples, seed, out)
        }
        Command::Bench {
            a,
            reps,
            input,
            mode,
            parallel,
        } => {
            let a = parse_exponents(&a)?;
            let spec = match &input {
                Some(_) => spec_or_standard(&input, a.dim())?,
                None => dense_bench_spec(a.dim()),
            };
            bench(&a, &spec, reps, mode.into(), parallel, out)
        }
    }
}

fn verdict(ok: bool) -> (&'static str, i32) {
    if ok {
        ("PASS", EXIT_OK)
    } else {
        ("FAIL", EXIT_VERIFY_FAILED)
    }
}

#[allow(clippy::too_many_arguments)]
fn verify(
    a: &MultiIndex,
    input: &Option<PathBuf>,
    oracle: OracleArg,
    i: Option<usize>,
    j: Option<usize>,
    samples: u64,
    seed: u64,
    out: &mut dyn Write,
) -> Outcome {
    match oracle {
        OracleArg::Stein => {
            let spec = spec_or_standard(input, a.dim())?;
            let formula = moment::<BigRational>(a, &spec)?;
            let reference = stein_moment(a, &spec);
            let (tag, code) = verdict(formula == reference);
            writeln!(out, "{tag} stein formula={formula} oracle={reference}")?;
            Ok(code)
        }
        OracleArg::Isserlis => {
            let spec = spec_or_standard(input, a.dim())?.centered();
            let formula = moment::<BigRational>(a, &spec)?;
            let reference = isserlis_sum(a, spec.cov_rows());
            let (tag, code) = verdict(formula == reference);
            writeln!(out, "{tag} isserlis formula={formula} oracle={reference}")?;
            Ok(code)
        }
        OracleArg::Mc => {
            let spec = spec_or_standard(input, a.dim())?;
            let exact = rational_to_f64(&moment::<BigRational>(a, &spec)?);
            let report = mc_estimate(a, &spec.to_float(), samples, seed)?;
            let delta = report.estimate - exact;
            let (tag, code) = verdict(report.agrees_with(exact, 5.0));
            writeln!(
                out,
                "{tag} mc exact={} estimate={} std_error={} delta={} samples={} seed={}",
                Scalar::Float(exact),
                Scalar::Float(report.estimate),
                Scalar::Float(report.std_error),
                Scalar::Float(delta),
                report.n_samples,
                report.seed
            )?;
            Ok(code)
        }
        OracleArg::Price => {
            let (Some(i), Some(j)) = (i, j) else {
                return Err(Failure::Usage("price oracle needs --i and --j".into()));
            };
            if i == 0 || j == 0 {
                return Err(Failure::Usage("--i and --j are 1-based".into()));
            }
            let (i, j) = (i.min(j) - 1, i.max(j) - 1);
            let derivative = differentiate_wrt_cov(a, i, j)?;
            let ai = a.get(i) as u64;
            let aj = a.get(j) as u64;
            let (rhs_label, expected) = match a.lowered_pair(i, j) {
                Some(lowered) => {
                    let p = build_polynomial(&lowered)?.scaled(ai * aj);
                    (lowered.to_string(), p)
                }
                None => (
                    String::from("0"),
                    crate::types::MomentPolynomial::zero(a.clone()),
                ),
            };
            let (tag, code) = verdict(derivative.same_terms(&expected));
            writeln!(
                out,
                "{tag} price d/dc{}{} P{a} = {ai}*{aj}*P{rhs_label} terms={}",
                i + 1,
                j + 1,
                derivative.len()
            )?;
            Ok(code)
        }
        OracleArg::Factor => {
            let spec = spec_or_standard(input, a.dim())?;
            let blocks = spec.covariance_blocks();
            let whole = moment::<BigRational>(a, &spec)?;
            let mut product = BigRational::from_integer(1.into());
            for block in &blocks {
                product *= moment::<BigRational>(&a.select(block)?, &spec.restrict(block))?;
            }
            let (tag, code) = verdict(whole == product);
            writeln!(
                out,
                "{tag} factor blocks={} moment={whole} product={product}",
                blocks.len()
            )?;
            Ok(code)
        }
        OracleArg::Recursive => {
            let mut checked = 0u64;
            let mut mismatches = 0u64;
            for l in enumerate_support(a) {
                if coefficient_recursive(a, &l)? != coefficient_closed_form(a, &l)? {
                    mismatches += 1;
                }
                checked += 1;
            }
            let (tag, code) = verdict(mismatches == 0);
            writeln!(
                out,
                "{tag} recursive terms={checked} mismatches={mismatches}"
            )?;
            Ok(code)
        }
    }
}

fn bench(
    a: &MultiIndex,
    spec: &ExactSpec,
    reps: u32,
    mode: NumericMode,
    parallel: bool,
    out: &mut dyn Write,
) -> Outcome {
    let terms = count_support(a);
    writeln!(out, "terms={terms}")?;
    let terms_f = rational_to_f64(&BigRational::from_integer(terms.into()));
    for rep in 1..=reps {
        let start = Instant::now();
        let value = moment_in_mode(a, spec, mode, parallel)?;
        let eval = start.elapsed().as_secs_f64();
        std::hint::black_box(value);

        let start = Instant::now();
        let mut it = enumerate_support(a);
        while it.advance() {
            std::hint::black_box(it.current_entries());
        }
        let enumerate = start.elapsed().as_secs_f64();

        let rate = if eval > 0.0 {
            terms_f / eval
        } else {
            f64::INFINITY
        };
        writeln!(
            out,
            "rep={rep} eval_seconds={eval:.6} enum_seconds={enumerate:.6} terms_per_second={rate:.1}"
        )?;
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("gmoment").chain(args.iter().copied()),
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
    fn parse_exponent_list() {
        assert_eq!(parse_exponents("2, 3,1").unwrap().exponents(), &[2, 3, 1]);
        assert!(matches!(parse_exponents("2,x"), Err(MomentError::Parse(_))));
        assert_eq!(
            parse_exponents("2,-1").unwrap_err(),
            MomentError::NegativeExponent { position: 2 }
        );
    }

    #[test]
    fn terms_and_symbolic() {
        assert_eq!(run_args(&["terms", "--a", "1,1,1,1"]).1, "10\n");
        assert_eq!(run_args(&["terms", "--a", "2,2"]).1, "6\n");
        assert_eq!(run_args(&["terms", "--a", "0"]).1, "1\n");
        assert_eq!(run_args(&["symbolic", "--a", "1,1"]).1, "m1*m2 + c12\n");
        assert_eq!(run_args(&["symbolic", "--a", "2"]).1, "m1^2 + c11\n");
        let (code, out, _) = run_args(&["symbolic", "--a", "2,2", "--format", "latex"]);
        assert_eq!(code, 0);
        assert!(out.contains("2\\varphi_{12}^{2}"));
    }

    #[test]
    fn negative_exponent_is_usage_error() {
        let (code, out, err) = run_args(&["compute", "--a", "2,-1"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(out.is_empty());
        assert!(err.contains("negative exponent"), "{err}");
    }

    #[test]
    fn unknown_flag_is_usage_error() {
        assert_eq!(run_args(&["compute", "--b", "1"]).0, EXIT_USAGE);
        assert_eq!(
            run_args(&["verify", "--a", "1", "--oracle", "nope"]).0,
            EXIT_USAGE
        );
    }

    #[test]
    fn price_needs_indices_and_rejects_diagonal() {
        assert_eq!(
            run_args(&["verify", "--a", "3,1", "--oracle", "price"]).0,
            EXIT_USAGE
        );
        let (code, _, err) = run_args(&[
            "verify", "--a", "3,1", "--oracle", "price", "--i", "1", "--j", "1",
        ]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("unsupported"), "{err}");
    }

    #[test]
    fn price_passes() {
        let (code, out, _) = run_args(&[
            "verify", "--a", "3,1", "--oracle", "price", "--i", "1", "--j", "2",
        ]);
        assert_eq!(code, 0, "{out}");
        assert!(
            out.starts_with("PASS price d/dc12 P(3,1) = 3*1*P(2,0)"),
            "{out}"
        );
    }

    #[test]
    fn recursive_and_standard_defaults() {
        let (code, out, _) = run_args(&["verify", "--a", "2,3,1", "--oracle", "recursive"]);
        assert_eq!(code, 0);
        assert_eq!(out, "PASS recursive terms=17 mismatches=0\n");
        let (code, out, _) = run_args(&["compute", "--a", "4"]);
        assert_eq!(code, 0);
        assert_eq!(out, "value: 3\nterms: 3\n");
    }

    #[test]
    fn bench_output_shape() {
        let (code, out, _) = run_args(&["bench", "--a", "3,3", "--reps", "3"]);
        assert_eq!(code, 0);
        let lines: Vec<_> = out.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(
            lines[0],
            format!("terms={}", count_support(&parse_exponents("3,3").unwrap()))
        );
        assert!(lines[1..]
            .iter()
            .all(|l| l.starts_with("rep=") && l.contains("eval_seconds=")));
    }
}
