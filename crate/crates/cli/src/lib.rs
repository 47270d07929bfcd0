//! Command-line front end: exact quantization and conversion, coefficient
//! tables, grid operator application, and the self-check suite.

mod emit;
mod input;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use bjcalc::numeric::{apply_operator, NumericParams, NumericScheme, SampledWavefunction, UniformGrid};
use bjcalc::quantize::quantize_symbol;
use bjcalc::symlang::{format, format_op, parse};
use bjcalc::transform::{bernoulli, c_coeff_1d, convert_symbol, CoeffTable};
use bjcalc::verify::{catalogue, run_one, VerifyConfig};
use bjcalc::{Error, MultiIndex, Rational, Scheme, SymbolPoly, TauParam};
use clap::{Parser, Subcommand, ValueEnum};

use emit::TableRow;

#[derive(Debug)]
pub enum CliError {
    /// Malformed flags or arguments; exit code 1.
    Usage(String),
    /// Invalid user-supplied symbol text, reported with a caret; exit code 1.
    Symbol(String, Error),
    /// Other invalid input detected by the library; exit code 1.
    Input(Error),
    /// Failure during computation; exit code 2.
    Compute(Error),
    /// At least one self-check failed; carries the report. Exit code 3.
    Verification(Vec<u32>, String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Symbol(..) | CliError::Input(_) => 1,
            CliError::Compute(_) => 2,
            CliError::Verification(..) => 3,
        }
    }

    fn report(&self) -> String {
        match self {
            CliError::Usage(m) => format!("error: {m}"),
            CliError::Symbol(text, e) => match e {
                Error::Parse { position, .. } => {
                    format!("error: {e}\n  {text}\n  {}^", " ".repeat(position.saturating_sub(1)))
                }
                _ => format!("error: {e}\n  {text}"),
            },
            CliError::Input(e) => format!("error: {e}"),
            CliError::Compute(e) => format!("error: computation failed: {e}"),
            CliError::Verification(ids, _) => format!("error: checks failed: {ids:?}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
    Csv,
}

#[derive(Parser, Debug)]
#[command(name = "bjcalc", version, about = "Born-Jordan, Weyl and tau quantization calculator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normal-ordered operator of a polynomial symbol.
    Quantize {
        /// weyl, bj, tau:<rational>, or tau (formal).
        #[arg(long, default_value = "weyl")]
        rule: String,
        symbol: String,
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long)]
        max_degree: Option<u32>,
        #[arg(long, value_enum, default_value_t = Output::Text)]
        output: Output,
    },
    /// Symbol of the same operator under another rule.
    Convert {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        symbol: String,
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long)]
        max_degree: Option<u32>,
        #[arg(long, value_enum, default_value_t = Output::Text)]
        output: Output,
    },
    /// Inverse-transform coefficients with the Bernoulli column (one dimension)
    /// or per multi-index.
    Coeffs {
        #[arg(long, default_value_t = 12)]
        max: u32,
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long, value_enum, default_value_t = Output::Text)]
        output: Output,
    },
    /// Applies a sampled symbol to a sampled state on the periodic grid.
    Apply {
        /// harmonic, monomial:r:s, sinc-null:x0:p0, or a polynomial in x and p.
        #[arg(long)]
        symbol: String,
        /// gaussian or hermite:k.
        #[arg(long, default_value = "gaussian", conflicts_with = "input")]
        state: String,
        /// CSV file with x,re,im rows.
        #[arg(long)]
        input: Option<PathBuf>,
        /// weyl, tau:<real>, bj-quadrature[:K], or bj-sinc.
        #[arg(long, default_value = "weyl")]
        scheme: String,
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
        #[arg(long, default_value_t = 512)]
        grid: usize,
        #[arg(long = "box", default_value_t = 20.0)]
        box_length: f64,
        #[arg(long, default_value_t = 16)]
        quadrature: usize,
        #[arg(long, default_value_t = 1e-8)]
        tolerance: f64,
        #[arg(long, value_enum, default_value_t = Output::Text)]
        output: Output,
    },
    /// Runs the self-check suite.
    Verify {
        #[arg(long)]
        max_degree: Option<u32>,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        /// Restrict to these check numbers.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
        #[arg(long, value_enum, default_value_t = Output::Text)]
        output: Output,
    },
}

/// Parses `argv` (including the program name), writes results to `out` and
/// diagnostics to `err`, and returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(e @ CliError::Verification(..)) => {
            if let CliError::Verification(_, text) = &e {
                let _ = out.write_all(text.as_bytes());
            }
            let _ = writeln!(err, "{}", e.report());
            3
        }
        Err(e) => {
            let _ = writeln!(err, "{}", e.report());
            e.exit_code()
        }
    }
}

fn parse_rational(text: &str) -> Result<Rational, CliError> {
    let bad = || CliError::Usage(format!("invalid rational '{text}'"));
    if let Some((int, frac)) = text.split_once('.') {
        // exact decimal
        let digits = format!("{int}{frac}");
        let num: i64 = digits.parse().map_err(|_| bad())?;
        let den = 10i64.checked_pow(frac.len() as u32).ok_or_else(bad)?;
        return Ok(Rational::new(num.into(), den.into()));
    }
    text.parse::<Rational>().map_err(|_| bad())
}

fn parse_rule(text: &str) -> Result<Scheme, CliError> {
    match text {
        "weyl" => Ok(Scheme::Weyl),
        "bj" | "born-jordan" => Ok(Scheme::BornJordan),
        "tau" => Ok(Scheme::Tau(TauParam::Formal)),
        _ => match text.strip_prefix("tau:") {
            Some(v) => Ok(Scheme::Tau(TauParam::Value(parse_rational(v)?))),
            None => Err(CliError::Usage(format!("unknown rule '{text}' (weyl, bj, tau, tau:<rational>)"))),
        },
    }
}

fn read_symbol(text: &str, dim: usize, max_degree: Option<u32>) -> Result<SymbolPoly, CliError> {
    if dim == 0 {
        return Err(CliError::Usage("--dim must be at least 1".into()));
    }
    let a = parse(text, dim).map_err(|e| CliError::Symbol(text.to_string(), e))?;
    if let Some(limit) = max_degree {
        if a.degree() > limit {
            return Err(CliError::Input(Error::DegreeLimit { degree: a.degree(), limit }));
        }
    }
    Ok(a)
}

fn exact_output(output: Output, text: String, json: serde_json::Value) -> Result<String, CliError> {
    match output {
        Output::Text => Ok(text + "\n"),
        Output::Json => Ok(json.to_string() + "\n"),
        Output::Csv => Err(CliError::Usage("csv output is available for coeffs and apply only".into())),
    }
}

fn coefficient_rows(max: u32, dim: usize) -> Result<Vec<TableRow>, CliError> {
    if dim == 0 {
        return Err(CliError::Usage("--dim must be at least 1".into()));
    }
    if dim == 1 {
        return Ok((0..=max)
            .step_by(2)
            .map(|k| TableRow { alpha: MultiIndex(vec![k]), c: c_coeff_1d(k), bernoulli: Some(bernoulli(k)) })
            .collect());
    }
    let table = CoeffTable::new(dim, max).map_err(CliError::Compute)?;
    let mut rows: Vec<TableRow> = table
        .values
        .into_iter()
        .filter(|(alpha, _)| alpha.order() % 2 == 0)
        .map(|(alpha, c)| TableRow { alpha, c, bernoulli: None })
        .collect();
    rows.sort_by(|a, b| (a.alpha.order(), &b.alpha).cmp(&(b.alpha.order(), &a.alpha)));
    Ok(rows)
}

#[allow(clippy::too_many_arguments)]
fn apply(
    symbol: &str,
    state: &str,
    input: Option<&PathBuf>,
    scheme: &str,
    hbar: f64,
    n: usize,
    box_length: f64,
    quadrature: usize,
    tolerance: f64,
    output: Output,
) -> Result<String, CliError> {
    let params = NumericParams { hbar, quadrature, tolerance };
    params.validate().map_err(CliError::Input)?;
    let grid = UniformGrid::new(n, box_length).map_err(CliError::Input)?;
    let scheme = match scheme {
        "bj-quadrature" => NumericScheme::BjQuadrature(quadrature),
        other => other.parse::<NumericScheme>().map_err(CliError::Input)?,
    };
    if let NumericScheme::BjQuadrature(k) = scheme {
        if k < 2 {
            return Err(CliError::Usage(format!("quadrature order {k} is below 2")));
        }
    }
    let psi = match input {
        Some(path) => {
            let file = std::fs::File::open(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            input::read_state_csv(file, grid, hbar)?
        }
        None => input::named_state(state, grid, hbar)?,
    };
    let a = input::named_symbol(symbol, grid, hbar)?;
    log::info!("applying {symbol} with {scheme} on N={n}, L={box_length}, hbar={hbar}");
    let result = apply_operator(&a, &psi, scheme, &params).map_err(CliError::Compute)?;
    match output {
        Output::Text => Ok(summary(&psi, &result, scheme)),
        Output::Json => Ok(emit::grid_json(&result).to_string() + "\n"),
        Output::Csv => emit::grid_csv(&result).map_err(|e| CliError::Compute(Error::Io(e.to_string()))),
    }
}

fn summary(psi: &SampledWavefunction, out: &SampledWavefunction, scheme: NumericScheme) -> String {
    let expectation = psi.inner(out) / psi.inner(psi).re;
    format!(
        "scheme       {scheme}\ngrid         N={} L={} hbar={}\ninput norm   {:.12e}\noutput norm  {:.12e}\nexpectation  {:.12e} {:+.12e}i\n",
        psi.grid.len(),
        psi.grid.length(),
        psi.hbar,
        psi.norm(),
        out.norm(),
        expectation.re,
        expectation.im
    )
}

fn verify(max_degree: Option<u32>, seed: u64, only: &[u32], output: Output) -> Result<String, CliError> {
    let mut out_text = String::new();
    let ids: Vec<u32> = if only.is_empty() { catalogue().into_iter().map(|c| c.0).collect() } else { only.to_vec() };
    let config = VerifyConfig { seed, max_degree };
    let mut failed = Vec::new();
    let mut json_rows = Vec::new();
    for id in ids {
        let report = run_one(id, &config).ok_or_else(|| CliError::Usage(format!("no check numbered {id}")))?;
        if !report.passed {
            failed.push(id);
        }
        match output {
            Output::Json => json_rows.push(serde_json::json!({
                "id": report.id,
                "name": report.name,
                "passed": report.passed,
                "detail": report.detail,
            })),
            _ => {
                out_text.push_str(&report.line());
                out_text.push('\n');
            }
        }
    }
    if output == Output::Json {
        out_text.push_str(&serde_json::json!({ "kind": "verify", "checks": json_rows }).to_string());
        out_text.push('\n');
    }
    if failed.is_empty() {
        Ok(out_text)
    } else {
        Err(CliError::Verification(failed, out_text))
    }
}

fn execute(command: Command) -> Result<String, CliError> {
    match command {
        Command::Quantize { rule, symbol, dim, max_degree, output } => {
            let scheme = parse_rule(&rule)?;
            let a = read_symbol(&symbol, dim, max_degree)?;
            let op = quantize_symbol(&scheme, &a).map_err(CliError::Compute)?;
            exact_output(output, format_op(&op), emit::op_json(&op))
        }
        Command::Convert { from, to, symbol, dim, max_degree, output } => {
            let (from, to) = (parse_rule(&from)?, parse_rule(&to)?);
            let a = read_symbol(&symbol, dim, max_degree)?;
            let b = convert_symbol(&a, &from, &to).map_err(|e| match e {
                Error::FormalTau(_) => CliError::Input(e),
                e => CliError::Compute(e),
            })?;
            exact_output(output, format(&b), emit::symbol_json(&b))
        }
        Command::Coeffs { max, dim, output } => {
            let rows = coefficient_rows(max, dim)?;
            match output {
                Output::Text => Ok(emit::table_text(&rows)),
                Output::Json => Ok(emit::table_json(dim, &rows).to_string() + "\n"),
                Output::Csv => emit::table_csv(&rows).map_err(|e| CliError::Compute(Error::Io(e.to_string()))),
            }
        }
        Command::Apply { symbol, state, input, scheme, hbar, grid, box_length, quadrature, tolerance, output } => apply(
            &symbol,
            &state,
            input.as_ref(),
            &scheme,
            hbar,
            grid,
            box_length,
            quadrature,
            tolerance,
            output,
        ),
        Command::Verify { max_degree, seed, only, output } => verify(max_degree, seed, &only, output),
    }
}
