//! Self-checks shared by the test suite and the command-line `verify` run.
//!
//! Every check compares two independent routes to the same object: an exact
//! closed form against the ordering oracle, or two grid discretizations of
//! the same operator.

use std::time::{Duration, Instant};

use num_complex::Complex64;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::exact::{rational, GaussRational, Power, Rational, Scalar, SymbolPoly, Var};
use crate::numeric::{
    antiwick_apply, antiwick_dense, apply_operator, null_point, symplectic_ft, windowed_plane_wave, NumericParams,
    NumericScheme, SampledSymbol, SampledWavefunction, Taper, UniformGrid,
};
use crate::quantize::{amplitude_average, amplitude_to_tau_symbol, quantize_monomial, quantize_symbol, tau_average};
use crate::symlang::{format, parse};
use crate::transform::{
    bj_to_tau, bj_to_weyl, c_coeff_multi, monomial_closed_form, tau_shift, weyl_to_bj, Direction,
};
use crate::{MultiIndex, Scheme, TauParam};

/// Result of one check.
#[derive(Clone, Debug)]
pub struct Report {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl Report {
    /// `PASS`/`FAIL` line with timing.
    pub fn line(&self) -> String {
        format!(
            "{} [{:>2}] {:<44} {:>8.2}s / {:>3}s  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.budget.as_secs(),
            self.detail
        )
    }
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { passed, detail: detail.into() })
}

/// Seed and optional degree cap for the exact checks.
#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Caps monomial exponents and random-symbol degrees; `None` keeps each check's own bound.
    pub max_degree: Option<u32>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { seed: 0x5eed, max_degree: None }
    }
}

impl VerifyConfig {
    fn deg(&self, default: u32) -> u32 {
        self.max_degree.map_or(default, |m| m.min(default))
    }
}

type Check = fn(&mut ChaCha8Rng, &VerifyConfig) -> Result<Outcome>;

const CHECKS: [(u32, &str, u64, Check); 11] = [
    (1, "monomial ordering rules", 5, monomial_rules),
    (2, "born-jordan = weyl of transformed symbol", 30, oracle_equivalence),
    (3, "reciprocity and bernoulli coefficients", 10, reciprocity),
    (4, "closed monomial formulas", 1, closed_forms),
    (5, "tau calculus coherence", 30, tau_coherence),
    (6, "harmonic oscillator ground state", 10, harmonic_oscillator),
    (7, "born-jordan quadrature vs sinc route", 20, route_equivalence),
    (8, "null symbol non-injectivity", 10, null_symbol),
    (9, "symplectic transform involution", 5, involution),
    (10, "anti-wick identity constant and positivity", 30, antiwick_probes),
    (11, "parser round trip and fuzz", 30, parser),
];

/// Identifiers and names of all checks.
pub fn catalogue() -> Vec<(u32, &'static str)> {
    CHECKS.iter().map(|c| (c.0, c.1)).collect()
}

/// Runs the check `id`; an error inside a check is reported as a failure.
pub fn run_one(id: u32, config: &VerifyConfig) -> Option<Report> {
    let &(id, name, budget, check) = CHECKS.iter().find(|c| c.0 == id)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ u64::from(id));
    let start = Instant::now();
    let result = check(&mut rng, config);
    let elapsed = start.elapsed();
    let budget = Duration::from_secs(budget);
    let (passed, mut detail) = match result {
        Ok(o) => (o.passed, o.detail),
        Err(e) => (false, format!("error: {e}")),
    };
    let in_time = elapsed <= budget;
    if !in_time {
        detail.push_str(" (over time budget)");
    }
    Some(Report { id, name, passed: passed && in_time, detail, elapsed, budget })
}

pub fn run_all(config: &VerifyConfig) -> Vec<Report> {
    CHECKS.iter().filter_map(|c| run_one(c.0, config)).collect()
}

/// Random τ-free symbol with small Gaussian-rational coefficients, occasionally
/// carrying powers of `ħ`.
pub fn random_symbol(rng: &mut impl Rng, dim: usize, max_degree: u32, max_terms: usize) -> SymbolPoly {
    let count = rng.gen_range(1..=max_terms);
    let terms = (0..count).map(|_| {
        let mut e = vec![0u32; 2 * dim];
        let total = rng.gen_range(0..=max_degree);
        for _ in 0..total {
            e[rng.gen_range(0..2 * dim)] += 1;
        }
        let den = rng.gen_range(1..=4i64);
        let g = GaussRational::new(rational(rng.gen_range(-5..=5), den), rational(rng.gen_range(-2..=2), den));
        let hbar = if rng.gen_bool(0.2) { rng.gen_range(1..=2) } else { 0 };
        (e, Scalar::monomial(Power { hbar, tau: 0 }, g))
    });
    SymbolPoly::from_terms(dim, terms).expect("bounded degree")
}

fn monomial(r: u32, s: u32) -> SymbolPoly {
    SymbolPoly::monomial(1, &[(Var::x(0), r), (Var::p(0), s)], Scalar::one()).expect("one dimension")
}

fn monomial_rules(_: &mut ChaCha8Rng, cfg: &VerifyConfig) -> Result<Outcome> {
    let half = Scheme::Tau(TauParam::value(1, 2));
    let formal = Scheme::Tau(TauParam::Formal);
    let mut bad = Vec::new();
    for r in 0..=cfg.deg(6) {
        for s in 0..=cfg.deg(6) {
            if quantize_monomial(&Scheme::BornJordan, r, s)? != tau_average(&quantize_monomial(&formal, r, s)?) {
                bad.push(format!("bj x^{r}p^{s}"));
            }
            if quantize_monomial(&half, r, s)? != quantize_monomial(&Scheme::Weyl, r, s)? {
                bad.push(format!("weyl x^{r}p^{s}"));
            }
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { format!("{} identities", 2 * (cfg.deg(6) + 1).pow(2)) } else { bad.join(", ") })
}

fn oracle_equivalence(rng: &mut ChaCha8Rng, cfg: &VerifyConfig) -> Result<Outcome> {
    let mut cases: Vec<SymbolPoly> = (0..=cfg.deg(6)).flat_map(|r| (0..=cfg.deg(6)).map(move |s| monomial(r, s))).collect();
    cases.extend((0..100).map(|_| random_symbol(rng, 1, cfg.deg(6), 6)));
    cases.extend((0..20).map(|_| random_symbol(rng, 2, cfg.deg(6), 4)));
    let mut failures = 0;
    for a in &cases {
        if quantize_symbol(&Scheme::Weyl, &bj_to_weyl(a))? != quantize_symbol(&Scheme::BornJordan, a)? {
            failures += 1;
        }
    }
    outcome(failures == 0, format!("{} symbols, {failures} mismatches", cases.len()))
}

fn reciprocity(rng: &mut ChaCha8Rng, cfg: &VerifyConfig) -> Result<Outcome> {
    let mut failures = 0;
    for i in 0..100 {
        let a = random_symbol(rng, 1 + i % 2, cfg.deg(8), 6);
        if weyl_to_bj(&bj_to_weyl(&a))? != a || bj_to_weyl(&weyl_to_bj(&a)?) != a {
            failures += 1;
        }
    }
    let expected = [(2, rational(-1, 3)), (4, rational(7, 15)), (6, rational(-31, 21)), (8, rational(127, 15))];
    let mut table_ok = expected.iter().all(|(k, v)| c_coeff_multi(&MultiIndex(vec![*k])).ok().as_ref() == Some(v));
    for k in (0..=12u32).step_by(2) {
        let closed = Rational::from_integer((2 - (1i64 << k)).into()) * crate::transform::bernoulli(k);
        table_ok &= c_coeff_multi(&MultiIndex(vec![k]))? == closed;
    }
    outcome(failures == 0 && table_ok, format!("{failures}/100 round-trip failures, table {}", if table_ok { "ok" } else { "wrong" }))
}

fn closed_forms(_: &mut ChaCha8Rng, cfg: &VerifyConfig) -> Result<Outcome> {
    let mut bad = Vec::new();
    for r in 0..=cfg.deg(6) {
        for s in 0..=cfg.deg(6) {
            let m = monomial(r, s);
            if monomial_closed_form(Direction::WeylOfBj, r, s) != bj_to_weyl(&m)
                || monomial_closed_form(Direction::BjOfWeyl, r, s) != weyl_to_bj(&m)?
            {
                bad.push(format!("x^{r}p^{s}"));
            }
        }
    }
    let sixth = SymbolPoly::constant(1, Scalar::hbar().pow(2).scale(&rational(1, 6)));
    let x2p2 = monomial(2, 2);
    let derived = bj_to_weyl(&x2p2) == &x2p2 - &sixth && weyl_to_bj(&x2p2)? == &x2p2 + &sixth;
    if !derived {
        bad.push("x^2p^2 +- hbar^2/6".into());
    }
    outcome(bad.is_empty(), if bad.is_empty() { format!("{} monomials both ways", (cfg.deg(6) + 1).pow(2)) } else { bad.join(", ") })
}

fn tau_coherence(rng: &mut ChaCha8Rng, cfg: &VerifyConfig) -> Result<Outcome> {
    let taus = [TauParam::value(0, 1), TauParam::value(1, 4), TauParam::value(1, 3), TauParam::value(1, 2), TauParam::value(1, 1)];
    let mut failures = Vec::new();
    for i in 0..20 {
        let a = random_symbol(rng, 1 + i % 2, cfg.deg(6), 4);
        let bj = quantize_symbol(&Scheme::BornJordan, &a)?;
        let averaged = amplitude_average(&a)?;
        for t in &taus {
            let at = bj_to_tau(&a, t);
            if quantize_symbol(&Scheme::Tau(t.clone()), &at)? != bj {
                failures.push(format!("bj_to_tau@{t}"));
            }
            if amplitude_to_tau_symbol(&averaged, t)? != at {
                failures.push(format!("amplitude@{t}"));
            }
            for from in &taus {
                let shifted = tau_shift(&a, from, t);
                if quantize_symbol(&Scheme::Tau(t.clone()), &shifted)? != quantize_symbol(&Scheme::Tau(from.clone()), &a)? {
                    failures.push(format!("shift {from}->{t}"));
                }
            }
        }
        if amplitude_to_tau_symbol(&averaged, &TauParam::Formal)? != bj_to_tau(&a, &TauParam::Formal) {
            failures.push("amplitude@formal".into());
        }
    }
    outcome(failures.is_empty(), if failures.is_empty() { "20 symbols x 5 tau values".into() } else { failures.join(", ") })
}

fn standard_grid() -> Result<(UniformGrid, NumericParams)> {
    Ok((UniformGrid::new(512, 20.0)?, NumericParams::default()))
}

fn sample(text: &str, grid: UniformGrid) -> Result<SampledSymbol> {
    SampledSymbol::from_poly(&parse(text, 1)?, grid, 1.0, &Taper::for_grid(&grid, 1.0))
}

fn harmonic_oscillator(_: &mut ChaCha8Rng, _: &VerifyConfig) -> Result<Outcome> {
    let (grid, params) = standard_grid()?;
    let a = sample("(1/2)*(x^2 + p^2)", grid)?;
    let psi = SampledWavefunction::gaussian(grid, 1.0)?;
    let expect = psi.scale(Complex64::new(0.5, 0.0));
    let schemes = [NumericScheme::Weyl, NumericScheme::Tau(0.3), NumericScheme::BjQuadrature(16), NumericScheme::BjSinc];
    let outs: Vec<SampledWavefunction> =
        schemes.iter().map(|s| apply_operator(&a, &psi, *s, &params)).collect::<Result<_>>()?;
    let worst = outs.iter().map(|o| o.relative_error(&expect)).fold(0.0, f64::max);
    let mut pair: f64 = 0.0;
    for i in 0..outs.len() {
        for j in i + 1..outs.len() {
            pair = pair.max(outs[i].relative_error(&outs[j]));
        }
    }
    outcome(worst <= 1e-8 && pair <= 1e-8, format!("max error {worst:.2e}, max pairwise {pair:.2e}"))
}

fn route_equivalence(_: &mut ChaCha8Rng, _: &VerifyConfig) -> Result<Outcome> {
    let (grid, params) = standard_grid()?;
    let states = [SampledWavefunction::hermite(grid, 1.0, 0)?, SampledWavefunction::hermite(grid, 1.0, 1)?];
    let mut worst: f64 = 0.0;
    for text in ["x^2*p^2", "x^3*p"] {
        let a = sample(text, grid)?;
        for psi in &states {
            let quad = apply_operator(&a, psi, NumericScheme::BjQuadrature(16), &params)?;
            let sinc = apply_operator(&a, psi, NumericScheme::BjSinc, &params)?;
            worst = worst.max(quad.relative_error(&sinc));
        }
    }
    outcome(worst <= 1e-6, format!("max relative difference {worst:.2e}"))
}

fn null_symbol(_: &mut ChaCha8Rng, _: &VerifyConfig) -> Result<Outcome> {
    let (grid, params) = standard_grid()?;
    let (x0, p0) = null_point(&grid, 1.0, 1)?;
    let c = windowed_plane_wave(grid, 1.0, x0, p0, &Taper::for_grid(&grid, 1.0))?;
    let psi = SampledWavefunction::gaussian(grid, 1.0)?;
    let ratio = |s| -> Result<f64> { Ok(apply_operator(&c, &psi, s, &params)?.norm() / psi.norm()) };
    let bj = ratio(NumericScheme::BjSinc)?.max(ratio(NumericScheme::BjQuadrature(16))?);
    let weyl = ratio(NumericScheme::Weyl)?;
    outcome(bj <= 1e-4 && weyl >= 0.1, format!("x0*p0 = {:.6}, born-jordan {bj:.2e}, weyl {weyl:.3}", x0 * p0))
}

/// Sum of a few random Gaussian wave packets in phase space.
fn random_packets(rng: &mut ChaCha8Rng, grid: UniformGrid, count: usize) -> Result<SampledSymbol> {
    let half = 0.5 * grid.length();
    let pmax = grid.p_max(1.0);
    let packets: Vec<[f64; 7]> = (0..count)
        .map(|_| {
            [
                rng.gen_range(-0.4..0.4) * half,
                rng.gen_range(-0.4..0.4) * pmax,
                rng.gen_range(0.5..2.0),
                rng.gen_range(0.5..2.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-2.0..2.0),
            ]
        })
        .collect();
    SampledSymbol::from_fn(grid, 1.0, |x, p| {
        packets
            .iter()
            .map(|&[x0, p0, sx, sp, re, im, k]| {
                let g = (-((x - x0) / sx).powi(2) / 2.0 - ((p - p0) / sp).powi(2) / 2.0).exp();
                Complex64::new(re, im) * Complex64::from_polar(g, k * (x - x0))
            })
            .sum()
    })
}

fn involution(rng: &mut ChaCha8Rng, _: &VerifyConfig) -> Result<Outcome> {
    let grid = UniformGrid::new(256, 20.0)?;
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let a = random_packets(rng, grid, 3)?;
        let back = symplectic_ft(&symplectic_ft(&a)?)?;
        let err = back.values.iter().zip(&a.values).map(|(u, v)| (u - v).norm_sqr()).sum::<f64>().sqrt()
            / a.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        worst = worst.max(err);
    }
    outcome(worst <= 1e-10, format!("max relative deviation {worst:.2e}"))
}

fn antiwick_probes(rng: &mut ChaCha8Rng, _: &VerifyConfig) -> Result<Outcome> {
    let grid = UniformGrid::new(64, 16.0)?;
    let one = SampledSymbol::from_fn(grid, 1.0, |_, _| Complex64::new(1.0, 0.0))?;
    let ground = SampledWavefunction::hermite(grid, 1.0, 0)?;
    let c = antiwick_dense(&one, &ground)?.inner(&ground).re / ground.inner(&ground).re;
    let mut spread: f64 = 0.0;
    for k in 0..5 {
        let psi = SampledWavefunction::hermite(grid, 1.0, k)?;
        let out = antiwick_apply(&one, &psi)?;
        spread = spread.max(out.relative_error(&psi.scale(Complex64::new(c, 0.0))));
    }
    let mut lowest = f64::INFINITY;
    for _ in 0..20 {
        let a = random_packets(rng, grid, 4)?.map(|_, _, v| Complex64::new(v.norm(), 0.0));
        let basis: Vec<SampledWavefunction> =
            (0..6).map(|k| SampledWavefunction::hermite(grid, 1.0, k)).collect::<Result<_>>()?;
        let mut v = vec![Complex64::new(0.0, 0.0); grid.len()];
        for h in &basis {
            let w = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            v.iter_mut().zip(&h.values).for_each(|(s, b)| *s += w * b);
        }
        let psi = SampledWavefunction::new(grid, 1.0, v)?;
        lowest = lowest.min(antiwick_apply(&a, &psi)?.inner(&psi).re);
    }
    outcome(
        spread <= 1e-4 && lowest >= -1e-10,
        format!("c = {c:.10} (2*pi = {:.10}), spread {spread:.2e}, min <Op psi, psi> {lowest:.2e}", 2.0 * std::f64::consts::PI),
    )
}

const FUZZ_ALPHABET: &[u8] = b"xpyi0123456789+-*^/() hbartau";

fn parser(rng: &mut ChaCha8Rng, cfg: &VerifyConfig) -> Result<Outcome> {
    let mut mismatches = 0;
    for i in 0..1000 {
        let a = random_symbol(rng, 1 + i % 3, cfg.deg(8), 6);
        if parse(&format(&a), a.dim()).ok().as_ref() != Some(&a) {
            mismatches += 1;
        }
    }
    let mut accepted = 0;
    let panics = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| {
        for i in 0..100_000 {
            let len = rng.gen_range(0..40);
            let text: String = if i % 2 == 0 {
                (0..len).map(|_| FUZZ_ALPHABET[rng.gen_range(0..FUZZ_ALPHABET.len())] as char).collect()
            } else {
                let bytes: Vec<u8> = (0..len).map(|_| rng.gen()).collect();
                String::from_utf8_lossy(&bytes).into_owned()
            };
            if parse(&text, 1 + i % 3).is_ok() {
                accepted += 1;
            }
        }
    }))
    .is_err();
    outcome(
        mismatches == 0 && !panics,
        format!("{mismatches}/1000 round-trip mismatches, fuzz {} ({accepted} of 100000 inputs parsed)", if panics { "crashed" } else { "clean" }),
    )
}
