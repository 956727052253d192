use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use invmills::bounds::derivative_bound;
use invmills::derivatives::{derivative_cauchy, CauchyConfig};
use invmills::extremal::extremal_constants;
use invmills::figure::{format_sig17, grid_values, write_grid, GridQuantity, GridSpec};
use invmills::gaussian::{gaussian_tail, inverse_mills, mills_ratio, normalized_ratio, phi};
use invmills::summation::{sum_direct, sum_euler_maclaurin, SumRequest, SumResult};
use invmills::verify::{self, Level, VerifyConfig};
use invmills::{Complex64, Error, HalfPlanePoint};
use serde_json::json;

/// Inverse Mills ratio on the right half-plane: evaluation, plot data,
/// constants, verification, derivatives and sums.
#[derive(Parser)]
#[command(name = "invmills", version)]
struct Cli {
    /// Worker threads for grids, sweeps and sums (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one quantity at a point.
    Eval {
        /// The point as `x,y`.
        #[arg(long, allow_hyphen_values = true)]
        z: Point,
        #[arg(long, value_enum)]
        q: Quantity,
    },
    /// Write a surface table of |S|, Re S or Im S.
    Grid {
        #[arg(long, value_parser = GridQuantity::from_str)]
        q: GridQuantity,
        #[arg(long, allow_hyphen_values = true)]
        x_min: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        x_max: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        y_min: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        y_max: Option<f64>,
        /// Number of x values.
        #[arg(long)]
        rows: Option<usize>,
        /// Number of y values.
        #[arg(long)]
        cols: Option<usize>,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Prefix the table with `#` comment lines.
        #[arg(long)]
        header: bool,
    },
    /// Report the extremal constants.
    Constants {
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Run the verification suites.
    Verify {
        #[arg(long, value_enum, default_value = "quick")]
        level: VerifyLevel,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Replaces the lower end of the |S| band (fault injection).
        #[arg(long, hide = true)]
        band_floor: Option<f64>,
    },
    /// n-th derivative of R by the Cauchy integral, with its envelope.
    Deriv {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        z: Point,
    },
    /// Sum R(x0 + i delta) for i = 0..N-1.
    Sum {
        #[arg(long)]
        x0: f64,
        #[arg(long)]
        delta: f64,
        /// Number of terms.
        #[arg(long = "count", short = 'N')]
        count: usize,
        /// Euler-Maclaurin order (2, 4, 6 or 8).
        #[arg(long, default_value_t = 4)]
        order: u32,
        #[arg(long, value_enum, default_value = "both")]
        method: SumChoice,
        /// Warn when the Euler-Maclaurin bound exceeds this fraction of the sum.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
}

#[derive(Clone, Copy)]
struct Point(f64, f64);

impl FromStr for Point {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (x, y) = s.split_once(',').ok_or_else(|| format!("expected x,y, got {s:?}"))?;
        let parse = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
        Ok(Point(parse(x)?, parse(y)?))
    }
}

impl Point {
    fn half_plane(self) -> invmills::Result<HalfPlanePoint> {
        HalfPlanePoint::new(self.0, self.1)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Quantity {
    #[value(name = "R")]
    InverseMills,
    #[value(name = "S")]
    Normalized,
    #[value(name = "r")]
    Mills,
    #[value(name = "phi")]
    Density,
    #[value(name = "tail")]
    Tail,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyLevel {
    Quick,
    Full,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SumChoice {
    Direct,
    Em,
    Both,
}

/// A failure that maps to exit status 2.
struct UsageError(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(UsageError(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command) -> Result<ExitCode, UsageError> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cmd {
        Command::Eval { z, q } => eval(&mut out, z, q)?,
        Command::Grid { q, x_min, x_max, y_min, y_max, rows, cols, out: path, header } => {
            let d = GridSpec::default_for(q);
            let spec = GridSpec::new(
                x_min.unwrap_or(d.x_min),
                x_max.unwrap_or(d.x_max),
                y_min.unwrap_or(d.y_min),
                y_max.unwrap_or(d.y_max),
                rows.unwrap_or(d.rows),
                cols.unwrap_or(d.cols),
            )?;
            let blocks = grid_values(&spec, q)?;
            match path {
                Some(p) => {
                    let f = File::create(&p).with_context(|| format!("cannot write {}", p.display()))?;
                    let mut w = BufWriter::new(f);
                    write_grid(&mut w, &spec, q, &blocks, header)?;
                    w.flush().with_context(|| format!("cannot write {}", p.display()))?;
                }
                None => write_grid(&mut out, &spec, q, &blocks, header)?,
            }
        }
        Command::Constants { format } => constants(&mut out, format)?,
        Command::Verify { level, seed, band_floor } => return verify_cmd(&mut out, level, seed, band_floor),
        Command::Deriv { n, z } => {
            let p = z.half_plane()?;
            let d = derivative_cauchy(n, p, CauchyConfig::default())?;
            let bound = derivative_bound(n, p)?;
            let mark = if d.value.norm() <= bound { "bound_respected" } else { "bound_exceeded" };
            writeln!(
                out,
                "{n} {} {} {} {} {mark}",
                format_sig17(d.value.re),
                format_sig17(d.value.im),
                format_sig17(d.abs_error_estimate),
                format_sig17(bound)
            )?;
        }
        Command::Sum { x0, delta, count, order, method, tol } => sum(&mut out, x0, delta, count, order, method, tol)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn eval(out: &mut impl Write, z: Point, q: Quantity) -> Result<(), UsageError> {
    let p = z.half_plane()?;
    let (name, e) = match q {
        Quantity::InverseMills => ("R", inverse_mills(p)),
        Quantity::Normalized => ("S", normalized_ratio(p)),
        Quantity::Mills => ("r", mills_ratio(p)),
        Quantity::Tail => ("tail", gaussian_tail(p)?),
        Quantity::Density => {
            let v: Complex64 = phi(p.z())?;
            let err = 4.0 * f64::EPSILON * v.norm() * (1.0 + p.norm() * p.norm());
            return line(out, "phi", v, err, "closed_form");
        }
    };
    line(out, name, e.value, e.abs_error_estimate, e.method.as_str())
}

fn line(out: &mut impl Write, name: &str, v: Complex64, err: f64, method: &str) -> Result<(), UsageError> {
    writeln!(
        out,
        "{name} {} {} {} {} {method}",
        format_sig17(v.re),
        format_sig17(v.im),
        format_sig17(v.norm()),
        format_sig17(err)
    )?;
    Ok(())
}

fn constants(out: &mut impl Write, format: Format) -> Result<(), UsageError> {
    let k = extremal_constants()?;
    match format {
        Format::Json => {
            let v = json!({
                "y_star": k.y_star,
                "s_at_y_star": k.s_at_y_star,
                "x_star": k.x_star,
                "x_star_closed_form": "(pi - 1) * sqrt(2/pi)",
                "S_at_x_star": k.s_at_x_star,
                "y21": k.y21,
                "y22": k.y22,
                "s1_prime_at_y22": k.s1_prime_at_y22,
                "s1_prime_over_y_limit": k.s1_prime_over_y_limit,
                "brackets": {
                    "y_star": [k.y_star_bracket.lo, k.y_star_bracket.hi],
                    "y21": [k.y21_bracket.lo, k.y21_bracket.hi],
                    "y22": [k.y22_bracket.lo, k.y22_bracket.hi],
                },
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
        }
        Format::Text => {
            let b = |lo: f64, hi: f64| format!("[{lo:.12}, {hi:.12}]");
            writeln!(out, "y*            {:.10}  bracket {}", k.y_star, b(k.y_star_bracket.lo, k.y_star_bracket.hi))?;
            writeln!(out, "|S(iy*)|      {:.10}", k.s_at_y_star)?;
            writeln!(out, "x*            {:.10}  = (pi - 1) sqrt(2/pi)", k.x_star)?;
            writeln!(out, "S(x*)         {:.10}", k.s_at_x_star)?;
            writeln!(out, "y21           {:.10}  bracket {}", k.y21, b(k.y21_bracket.lo, k.y21_bracket.hi))?;
            writeln!(out, "y22           {:.10}  bracket {}", k.y22, b(k.y22_bracket.lo, k.y22_bracket.hi))?;
            writeln!(out, "s1'(y22)      {:.10}", k.s1_prime_at_y22)?;
            writeln!(out, "lim s1'(y)/y  {:.10}  = pi (2 - 4 pi + 3 pi^2)/6", k.s1_prime_over_y_limit)?;
        }
    }
    Ok(())
}

fn verify_cmd(
    out: &mut impl Write,
    level: VerifyLevel,
    seed: u64,
    band_floor: Option<f64>,
) -> Result<ExitCode, UsageError> {
    let level = match level {
        VerifyLevel::Quick => Level::Quick,
        VerifyLevel::Full => Level::Full,
    };
    let mut cfg = VerifyConfig::new(level, seed);
    if let Some(f) = band_floor {
        if !(f > 0.0 && f < 1.0) {
            return Err(anyhow!("band floor must lie in (0, 1), got {f}").into());
        }
        cfg.band_floor = f;
    }
    let summary = verify::run(&cfg);
    for s in &summary.suites {
        let status = if s.passed() { "ok" } else { "FAILED" };
        writeln!(out, "{:<26} {:>6} checks {:>4} failures  {status}", s.name, s.checks, s.failures.len())?;
    }
    for (suite, f) in summary.failures() {
        writeln!(out, "failure [{suite}] {}: at {}: {}", f.check, f.point, f.detail)?;
    }
    let failed = summary.failures().count();
    writeln!(out, "{} suites, {} checks, {failed} failures", summary.suites.len(), summary.checks_run())?;
    eprintln!("wall time {:.2} s", summary.wall_time.as_secs_f64());
    Ok(if summary.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn sum_row(out: &mut impl Write, r: &SumResult) -> io::Result<()> {
    writeln!(
        out,
        "{} {} {} {}",
        r.method.as_str(),
        format_sig17(r.value),
        format_sig17(r.remainder_bound),
        r.terms_evaluated
    )
}

fn sum(
    out: &mut impl Write,
    x0: f64,
    delta: f64,
    count: usize,
    order: u32,
    method: SumChoice,
    tol: f64,
) -> Result<(), UsageError> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(anyhow!("tol must be positive, got {tol}").into());
    }
    let req = SumRequest::new(x0, delta, count, order)?;
    let em = if method == SumChoice::Direct {
        None
    } else {
        match sum_euler_maclaurin(&req) {
            Ok(e) => {
                if e.remainder_bound > tol * e.value.abs() {
                    eprintln!(
                        "warning: Euler-Maclaurin remainder bound {:e} exceeds tol {tol:e} relative to the sum",
                        e.remainder_bound
                    );
                }
                Some(e)
            }
            Err(Error::Overflow(msg)) => {
                eprintln!("warning: {msg}; using the direct sum");
                None
            }
            Err(e) => return Err(e.into()),
        }
    };
    let direct = if method == SumChoice::Em && em.is_some() { None } else { Some(sum_direct(&req)?) };
    writeln!(out, "method value remainder_bound terms_evaluated")?;
    if let Some(d) = &direct {
        sum_row(out, d)?;
    }
    if let Some(e) = &em {
        sum_row(out, e)?;
    }
    if let (Some(d), Some(e)) = (&direct, &em) {
        let gap = (d.value - e.value).abs();
        let within = if gap <= e.remainder_bound { "within_bound" } else { "exceeds_bound" };
        writeln!(out, "discrepancy {} {within}", format_sig17(gap))?;
    }
    Ok(())
}
