//! The `scatter1d` command line.
//!
//! Exit codes: 0 success, 1 a verified invariant failed, 2 bad
//! configuration or arguments, 3 a computation failed, 4 the request lies
//! outside the analyticity strip of the potential's tails, 5 no reference
//! available for `compare`.

pub mod output;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::born::{born_first_order, born_second_order, volterra_series};
use crate::complexplane::{find_zeros, jost_a_handle, Rectangle, ScanOptions, ZeroReport};
use crate::error::Error;
use crate::oracles::{a_pole_lattice, oracle_for};
use crate::potentials::{Potential, PotentialConfig};
use crate::semiclassical::{wkb_jost, wkb_theta};
use crate::solver::{amplitudes, jost, solver_support, SolverOptions};
use crate::transfer::{compose, to_jost, AmplitudePair, JostCoefficients};

use output::{fmt_num, Cell, Table};

type C = Complex64;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_COMPUTE: i32 = 3;
pub const EXIT_STRIP: i32 = 4;
pub const EXIT_NO_REFERENCE: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "scatter1d", version, about = "One-dimensional barrier scattering amplitudes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// α, β, a, b, T, R on a momentum grid.
    Amplitudes(Common),
    /// Zeros of a(κ) in a rectangle of the complex plane.
    Scan(Common),
    /// Compose the parts of a composite potential and compare with a direct solve.
    Compose(Common),
    /// Run the invariant suite.
    Verify(Common),
    /// Errors of solver, Born, Volterra and WKB amplitudes against a reference.
    Compare(Common),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Potential config: a JSON file, or inline JSON.
    #[arg(long)]
    pub potential: Option<String>,
    /// Momentum grid `start:stop:count`; endpoints may be complex (`1-0.5i`).
    #[arg(long, allow_hyphen_values = true)]
    pub kappa: Option<String>,
    /// Rectangle `re0:re1:im0:im1` for scans.
    #[arg(long, allow_hyphen_values = true)]
    pub rect: Option<String>,
    /// Relative tolerance for solver, series and root refinement.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Use closed forms where available.
    #[arg(long)]
    pub oracle: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads (0: one per core).
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// Momentum samples for `verify`.
    #[arg(long, default_value_t = 12)]
    pub samples: usize,
    #[arg(long, hide = true)]
    pub fault: Option<String>,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }

    fn config(e: impl std::fmt::Display) -> Self {
        Self::new(EXIT_CONFIG, e.to_string())
    }

    fn compute(kappa: C, e: Error) -> Self {
        let code = match e {
            Error::TailLimited { .. } => EXIT_STRIP,
            _ => EXIT_COMPUTE,
        };
        Self::new(code, format!("kappa = {}: {e} [{}]", fmt_complex(kappa), e.code()))
    }
}

type Outcome = std::result::Result<(String, i32), Failure>;

fn fmt_complex(z: C) -> String {
    format!("{}{:+}i", z.re, z.im)
}

/// Parse `a`, `bi`, `a+bi`, `a-bi` (also with `j`).
pub fn parse_complex(s: &str) -> std::result::Result<C, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot parse complex number `{s}`");
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) else {
        return t.parse::<f64>().map(|x| C::new(x, 0.0)).map_err(|_| bad());
    };
    // split before the last sign that is not an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let imag = |u: &str| match u {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        v => v.parse::<f64>().map_err(|_| bad()),
    };
    match split {
        Some(i) => {
            let re = body[..i].parse::<f64>().map_err(|_| bad())?;
            Ok(C::new(re, imag(&body[i..])?))
        }
        None => Ok(C::new(0.0, imag(body)?)),
    }
}

/// `start:stop:count`, evenly spaced, endpoints included.
pub fn parse_grid(s: &str) -> std::result::Result<Vec<C>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("kappa grid `{s}`: expected start:stop:count"));
    }
    let a = parse_complex(parts[0])?;
    let b = parse_complex(parts[1])?;
    let n: usize = parts[2]
        .trim()
        .parse()
        .map_err(|_| format!("kappa grid `{s}`: bad count"))?;
    if n == 0 {
        return Err(format!("kappa grid `{s}`: empty grid"));
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    Ok((0..n).map(|i| a + (b - a) * (i as f64 / (n - 1) as f64)).collect())
}

fn load_potential(c: &Common) -> std::result::Result<Potential, Failure> {
    let arg = c
        .potential
        .as_deref()
        .ok_or_else(|| Failure::config("--potential is required"))?;
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| Failure::config(format!("reading {arg}: {e}")))?
    };
    PotentialConfig::from_json(&text)
        .and_then(|cfg| cfg.build())
        .map_err(Failure::config)
}

fn grid(c: &Common) -> std::result::Result<Vec<C>, Failure> {
    let s = c.kappa.as_deref().ok_or_else(|| Failure::config("--kappa is required"))?;
    parse_grid(s).map_err(Failure::config)
}

fn solver_opts(c: &Common) -> std::result::Result<SolverOptions, Failure> {
    let mut o = SolverOptions::default();
    if let Some(t) = c.tol {
        if !(t > 0.0 && t < 1.0) {
            return Err(Failure::config(format!("--tol must lie in (0, 1), got {t}")));
        }
        o.ode_rel_tol = t;
        o.ode_abs_tol = 1e-2 * t;
    }
    o.validate().map_err(Failure::config)?;
    Ok(o)
}

fn render(t: &Table, format: Format) -> std::result::Result<String, Failure> {
    match format {
        Format::Json => Ok(t.to_json()),
        Format::Csv => {
            let mut buf = Vec::new();
            t.write_csv(&mut buf).map_err(|e| Failure::new(EXIT_COMPUTE, e.to_string()))?;
            Ok(String::from_utf8(buf).expect("CSV is UTF-8"))
        }
    }
}

/// Evaluate per κ in parallel, keeping grid order; the first failure in
/// grid order wins.
fn per_kappa<T: Send>(
    ks: &[C],
    f: impl Fn(C) -> crate::error::Result<T> + Sync,
) -> std::result::Result<Vec<T>, Failure> {
    let res: Vec<_> = ks.par_iter().map(|&k| f(k).map_err(|e| (k, e))).collect();
    let failed: Vec<String> = res
        .iter()
        .filter_map(|r| r.as_ref().err().map(|(k, e)| format!("{} ({})", fmt_complex(*k), e.code())))
        .collect();
    let mut out = Vec::with_capacity(res.len());
    for r in res {
        match r {
            Ok(v) => out.push(v),
            Err((k, e)) => {
                let mut f = Failure::compute(k, e);
                if failed.len() > 1 {
                    f.message.push_str(&format!("; failing kappa: {}", failed.join(", ")));
                }
                return Err(f);
            }
        }
    }
    Ok(out)
}

fn pair_and_jost(p: &Potential, k: C, use_oracle: bool, opts: &SolverOptions) -> crate::error::Result<(AmplitudePair, JostCoefficients)> {
    if use_oracle {
        if let Some(fam) = p.family() {
            let j = oracle_for(fam, k)?.jost;
            return Ok((j.to_pair(), j));
        }
    }
    let ap = amplitudes(p, k, opts)?;
    Ok((ap, to_jost(&ap)?))
}

fn cmd_amplitudes(c: &Common) -> Outcome {
    let p = load_potential(c)?;
    let ks = grid(c)?;
    let opts = solver_opts(c)?;
    let rows = per_kappa(&ks, |k| pair_and_jost(&p, k, c.oracle, &opts))?;
    let mut t = Table::new(&[
        "kappa_re", "kappa_im", "alpha_re", "alpha_im", "beta_re", "beta_im", "a_re", "a_im", "b_re", "b_im", "T", "R",
        "unitarity_defect",
    ]);
    for (ap, j) in rows {
        // |1/a|², |b/a|²; probabilities on the real axis
        let tr = 1.0 / j.a.norm_sqr();
        let r = j.b.norm_sqr() * tr;
        t.push(
            [
                ap.kappa.re, ap.kappa.im, ap.alpha.re, ap.alpha.im, ap.beta.re, ap.beta.im, j.a.re, j.a.im, j.b.re, j.b.im,
                tr, r, j.unitarity_defect(),
            ]
            .into_iter()
            .map(Cell::Num)
            .collect(),
        );
    }
    Ok((render(&t, c.format.unwrap_or(Format::Csv))?, EXIT_OK))
}

fn report_json(r: &ZeroReport, rect: &Rectangle, handle: &str) -> String {
    let mut s = String::from("{\n");
    s.push_str(&format!(
        "  \"rect\": [{}, {}, {}, {}],\n",
        fmt_num(rect.re_min),
        fmt_num(rect.re_max),
        fmt_num(rect.im_min),
        fmt_num(rect.im_max)
    ));
    s.push_str(&format!("  \"handle\": \"{handle}\",\n"));
    s.push_str(&format!("  \"total_winding\": {},\n", r.total_winding));
    s.push_str(&format!("  \"contour_samples_used\": {},\n", r.contour_samples_used));
    s.push_str("  \"zeros\": [");
    for (i, z) in r.zeros.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        let res = if z.residual.is_finite() { fmt_num(z.residual) } else { "null".into() };
        s.push_str(&format!(
            "\n    {{\"re\": {}, \"im\": {}, \"multiplicity\": {}, \"residual\": {}, \"resolved\": {}}}",
            fmt_num(z.location.re),
            fmt_num(z.location.im),
            z.multiplicity,
            res,
            z.resolved
        ));
    }
    if !r.zeros.is_empty() {
        s.push_str("\n  ");
    }
    s.push_str("]\n}\n");
    s
}

fn cmd_scan(c: &Common) -> Outcome {
    let p = load_potential(c)?;
    let rect = Rectangle::parse(c.rect.as_deref().ok_or_else(|| Failure::config("--rect is required"))?)
        .map_err(Failure::config)?;
    let opts = solver_opts(c)?;
    let family = if c.oracle { p.family() } else { None };
    if family.is_none() {
        if let Some(s) = p.min_tail_slope() {
            if rect.im_min <= -s {
                return Err(Failure::new(
                    EXIT_STRIP,
                    format!(
                        "rectangle reaches Im kappa = {} but the solver is analytic only for Im kappa > {}; \
                         shrink the rectangle or use --oracle",
                        rect.im_min, -s
                    ),
                ));
            }
        }
    }
    let mut so = ScanOptions::default();
    if let Some(t) = c.tol {
        so.tol = t;
    }
    if let Some(f) = family {
        so.known_poles = a_pole_lattice(f, rect.im_min - 1.0);
    }
    let handle = jost_a_handle(&p, family.is_some(), opts);
    let report = find_zeros(&handle, &rect, &so).map_err(|e| Failure::compute(rect.center(), e))?;
    let name = if family.is_some() { "oracle" } else { "solver" };
    let out = match c.format.unwrap_or(Format::Json) {
        Format::Json => report_json(&report, &rect, name),
        Format::Csv => {
            let mut t = Table::new(&["re", "im", "multiplicity", "residual", "resolved"]);
            for z in &report.zeros {
                t.push(vec![
                    Cell::Num(z.location.re),
                    Cell::Num(z.location.im),
                    Cell::Int(z.multiplicity as i64),
                    Cell::Num(z.residual),
                    Cell::Bool(z.resolved),
                ]);
            }
            render(&t, Format::Csv)?
        }
    };
    Ok((out, EXIT_OK))
}

fn cmd_compose(c: &Common) -> Outcome {
    let text = match c.potential.as_deref() {
        Some(s) if s.trim_start().starts_with('{') => s.to_string(),
        Some(s) => std::fs::read_to_string(s).map_err(|e| Failure::config(format!("reading {s}: {e}")))?,
        None => return Err(Failure::config("--potential is required")),
    };
    let cfg = PotentialConfig::from_json(&text).map_err(Failure::config)?;
    if cfg.family != "composite" || cfg.parts.len() < 2 {
        return Err(Failure::config("compose needs a composite potential with at least two parts"));
    }
    let whole = cfg.build().map_err(Failure::config)?;
    let mut parts = cfg
        .parts
        .iter()
        .map(|pc| {
            let mut inner = pc.clone();
            let d = inner.displacement + cfg.displacement;
            inner.displacement = 0.0;
            Ok((inner.build()?, d))
        })
        .collect::<crate::error::Result<Vec<(Potential, f64)>>>()
        .map_err(Failure::config)?;
    parts.sort_by(|x, y| x.1.total_cmp(&y.1));
    let ks = grid(c)?;
    let opts = solver_opts(c)?;
    let part_jost = |p: &Potential, k: C| -> crate::error::Result<JostCoefficients> {
        if c.oracle {
            if let Some(f) = p.family() {
                return Ok(oracle_for(f, k)?.jost);
            }
        }
        jost(p, k, &opts)
    };
    let rows = per_kappa(&ks, |k| {
        let mut acc = part_jost(&parts[0].0, k)?;
        let mut at = parts[0].1;
        for (p, d) in &parts[1..] {
            acc = compose(&acc, at, &part_jost(p, k)?, *d)?;
            at = 0.0;
        }
        let direct = to_jost(&amplitudes(&whole, k, &opts)?)?;
        Ok((k, acc, direct))
    })?;
    let mut t = Table::new(&[
        "kappa_re", "kappa_im", "a_composed_re", "a_composed_im", "b_composed_re", "b_composed_im", "a_direct_re",
        "a_direct_im", "b_direct_re", "b_direct_im", "max_error",
    ]);
    for (k, x, y) in rows {
        let err = (x.a - y.a).norm().max((x.b - y.b).norm());
        t.push(
            [k.re, k.im, x.a.re, x.a.im, x.b.re, x.b.im, y.a.re, y.a.im, y.b.re, y.b.im, err]
                .into_iter()
                .map(Cell::Num)
                .collect(),
        );
    }
    Ok((render(&t, c.format.unwrap_or(Format::Csv))?, EXIT_OK))
}

fn cmd_verify(c: &Common) -> Outcome {
    let fault = match c.fault.as_deref() {
        Some(f) => Some(f.parse::<verify::Fault>().map_err(Failure::config)?),
        None => None,
    };
    let checks = verify::run_suite(c.seed, c.samples, fault);
    let all = checks.iter().all(|k| k.passed);
    let out = match c.format {
        Some(fmt) => {
            let mut t = Table::new(&["check", "passed", "max_defect", "tol", "detail"]);
            for k in &checks {
                t.push(vec![
                    Cell::Text(k.name.clone()),
                    Cell::Bool(k.passed),
                    Cell::Num(k.max_defect),
                    Cell::Num(k.tol),
                    Cell::Text(k.detail.clone()),
                ]);
            }
            render(&t, fmt)?
        }
        None => {
            let mut s = String::new();
            for k in &checks {
                s.push_str(&format!(
                    "{} {:<18} max_defect={} tol={} {}\n",
                    if k.passed { "PASS" } else { "FAIL" },
                    k.name,
                    fmt_num(k.max_defect),
                    fmt_num(k.tol),
                    k.detail
                ));
            }
            s
        }
    };
    Ok((out, if all { EXIT_OK } else { EXIT_VERIFY_FAILED }))
}

fn pair_error(x: &AmplitudePair, y: &AmplitudePair) -> f64 {
    (x.alpha - y.alpha).norm().max((x.beta - y.beta).norm())
}

fn cmd_compare(c: &Common) -> Outcome {
    let p = load_potential(c)?;
    let ks = grid(c)?;
    let opts = solver_opts(c)?;
    let family = p.family();
    if family.is_none() && !p.has_finite_range() {
        return Err(Failure::new(
            EXIT_NO_REFERENCE,
            "no reference: the potential has no closed form and no finite range",
        ));
    }
    let tol = c.tol.unwrap_or(1e-12);
    let (lo, hi) = solver_support(&p, &opts);
    let rows = per_kappa(&ks, |k| {
        let solver = amplitudes(&p, k, &opts);
        let reference = match family {
            Some(f) => oracle_for(f, k)?.jost.to_pair(),
            None => solver.clone()?,
        };
        let err = |r: crate::error::Result<AmplitudePair>| r.map(|a| pair_error(&a, &reference)).unwrap_or(f64::NAN);
        let wkb = if hi > lo {
            wkb_theta(&p, k, lo, hi).and_then(|w| wkb_jost(&w, k, lo, hi)).map(|j| j.to_pair())
        } else {
            Err(Error::InvalidParameter("empty support".into()))
        };
        Ok((
            k,
            [
                err(solver),
                err(born_first_order(&p, k)),
                err(born_second_order(&p, k, tol.max(1e-13))),
                err(volterra_series(&p, k, 400, tol.max(1e-14)).map(|s| s.amplitudes)),
                err(wkb),
            ],
        ))
    })?;
    let mut t = Table::new(&[
        "kappa_re", "kappa_im", "reference", "err_solver", "err_born1", "err_born2", "err_volterra", "err_wkb",
    ]);
    let reference = if family.is_some() { "oracle" } else { "solver" };
    for (k, e) in rows {
        let mut row = vec![Cell::Num(k.re), Cell::Num(k.im), Cell::Text(reference.into())];
        row.extend(e.into_iter().map(Cell::Num));
        t.push(row);
    }
    Ok((render(&t, c.format.unwrap_or(Format::Csv))?, EXIT_OK))
}

fn dispatch(cli: &Cli) -> Outcome {
    let common = match &cli.command {
        Command::Amplitudes(c) | Command::Scan(c) | Command::Compose(c) | Command::Verify(c) | Command::Compare(c) => c,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(common.jobs)
        .build()
        .map_err(|e| Failure::config(format!("--jobs: {e}")))?;
    pool.install(|| match &cli.command {
        Command::Amplitudes(c) => cmd_amplitudes(c),
        Command::Scan(c) => cmd_scan(c),
        Command::Compose(c) => cmd_compose(c),
        Command::Verify(c) => cmd_verify(c),
        Command::Compare(c) => cmd_compare(c),
    })
}

/// Parse arguments, run, write output; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let out_path = match &cli.command {
        Command::Amplitudes(c) | Command::Scan(c) | Command::Compose(c) | Command::Verify(c) | Command::Compare(c) => {
            c.out.clone()
        }
    };
    match dispatch(&cli) {
        Ok((text, code)) => {
            let written = match &out_path {
                Some(path) => std::fs::write(path, text.as_bytes()),
                None => std::io::stdout().write_all(text.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: writing output: {e}");
                return EXIT_COMPUTE;
            }
            code
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_parsing() {
        assert_eq!(parse_complex("1.5").unwrap(), C::new(1.5, 0.0));
        assert_eq!(parse_complex("-0.5i").unwrap(), C::new(0.0, -0.5));
        assert_eq!(parse_complex("1-0.5i").unwrap(), C::new(1.0, -0.5));
        assert_eq!(parse_complex("1e-3+2e+1i").unwrap(), C::new(1e-3, 20.0));
        assert_eq!(parse_complex("-i").unwrap(), C::new(0.0, -1.0));
        assert_eq!(parse_complex("2+i").unwrap(), C::new(2.0, 1.0));
        assert!(parse_complex("x").is_err());
    }

    #[test]
    fn grid_parsing() {
        let g = parse_grid("1:3:3").unwrap();
        assert_eq!(g, vec![C::new(1.0, 0.0), C::new(2.0, 0.0), C::new(3.0, 0.0)]);
        assert_eq!(parse_grid("2:5:1").unwrap().len(), 1);
        assert!(parse_grid("1:3:0").is_err());
        assert!(parse_grid("1:3").is_err());
    }
}
