use std::io::Read;

use bjcalc::numeric::{windowed_plane_wave, SampledSymbol, SampledWavefunction, Taper, UniformGrid};
use bjcalc::symlang::parse;
use num_complex::Complex64;

use crate::CliError;

fn number<T: std::str::FromStr>(text: &str, what: &str) -> Result<T, CliError> {
    text.parse().map_err(|_| CliError::Usage(format!("invalid {what} '{text}'")))
}

/// `gaussian` or `hermite:k`.
pub fn named_state(name: &str, grid: UniformGrid, hbar: f64) -> Result<SampledWavefunction, CliError> {
    let parts: Vec<&str> = name.split(':').collect();
    let psi = match parts.as_slice() {
        ["gaussian"] => SampledWavefunction::gaussian(grid, hbar),
        ["hermite", k] => SampledWavefunction::hermite(grid, hbar, number(k, "hermite index")?),
        _ => return Err(CliError::Usage(format!("unknown state '{name}' (gaussian, hermite:k)"))),
    };
    psi.map_err(CliError::Compute)
}

/// `harmonic`, `monomial:r:s`, `sinc-null:x0:p0`, or any one-dimensional
/// polynomial in the symbol grammar; polynomials are windowed by the grid taper.
pub fn named_symbol(name: &str, grid: UniformGrid, hbar: f64) -> Result<SampledSymbol, CliError> {
    let taper = Taper::for_grid(&grid, hbar);
    let parts: Vec<&str> = name.split(':').collect();
    let poly = match parts.as_slice() {
        ["harmonic"] => parse("(1/2)*(x^2 + p^2)", 1).expect("fixed text"),
        ["monomial", r, s] => {
            let (r, s): (u32, u32) = (number(r, "exponent")?, number(s, "exponent")?);
            parse(&format!("x^{r}*p^{s}"), 1).map_err(CliError::Input)?
        }
        ["sinc-null", x0, p0] => {
            let (x0, p0) = (number(x0, "shift")?, number(p0, "shift")?);
            return windowed_plane_wave(grid, hbar, x0, p0, &taper).map_err(CliError::Compute);
        }
        _ => parse(name, 1).map_err(|e| CliError::Symbol(name.to_string(), e))?,
    };
    SampledSymbol::from_poly(&poly, grid, hbar, &taper).map_err(CliError::Compute)
}

/// Reads `x,re,im` rows; the `x` column must reproduce the grid.
pub fn read_state_csv(reader: impl Read, grid: UniformGrid, hbar: f64) -> Result<SampledWavefunction, CliError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
    let mut values = Vec::with_capacity(grid.len());
    for (row, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| CliError::Usage(format!("csv: {e}")))?;
        if record.len() != 3 {
            return Err(CliError::Usage(format!("csv row {}: expected x,re,im", row + 2)));
        }
        let field = |i: usize| number::<f64>(&record[i], "csv value");
        let (x, re, im) = (field(0)?, field(1)?, field(2)?);
        if row < grid.len() && (x - grid.x(row)).abs() > 1e-9 * grid.length() {
            return Err(CliError::Usage(format!(
                "csv row {}: x = {x} does not match the grid point {} (check --grid and --box)",
                row + 2,
                grid.x(row)
            )));
        }
        values.push(Complex64::new(re, im));
    }
    if values.len() != grid.len() {
        return Err(CliError::Usage(format!("csv has {} samples, grid has {}", values.len(), grid.len())));
    }
    SampledWavefunction::new(grid, hbar, values).map_err(CliError::Input)
}
