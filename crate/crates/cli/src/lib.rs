//! Command-line front end: figure renders, certificate suites, landmarks and
//! locus scans.
//!
//! Exit codes: 0 success, 1 certificate failure or I/O error, 2 inconclusive,
//! 64 usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mcmullen::certify::{
    certify_escape_bounds, certify_polynomial_like_with, certify_symmetries, certify_winding,
    escape_regimes, CertificateReport, Outcome, PolyLikeOptions,
};
use mcmullen::dynamics::{default_escape_radius, EscapeSettings, MapParams, CERTIFY_MAX_ITER};
use mcmullen::features::{
    center_pair, interval_positions, overlap_parameter, scan_boundedness_locus,
};
use mcmullen::regions::{DomainSpec, ParamWindow};
use mcmullen::render::{
    render, write_ppm, Palette, Plane, RadiusChoice, RenderSpec, Rgb, Viewport,
};
use mcmullen::{Complex64, Error};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "MCM_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "mcm",
    version,
    about = "Dynamics of z^n + a/z^n + c: renders, certificates and landmarks",
    allow_negative_numbers = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Render the dynamical plane of one map.
    RenderJulia(RenderArgs),
    /// Render the a-parameter plane for fixed n and c.
    RenderAplane(RenderArgs),
    /// Render the c-parameter plane for fixed n and a.
    RenderCplane(RenderArgs),
    /// Run a certificate suite.
    Verify(VerifyArgs),
    /// Baby Mandelbrot centers and the overlap parameter.
    Centers(CentersArgs),
    /// Scan the boundedness locus of v+ over a parameter window.
    Scan(ScanArgs),
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Cx(Complex64);

impl FromStr for Cx {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').collect();
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("'{t}' is not a real number"))
                .and_then(|x| {
                    if x.is_finite() {
                        Ok(x)
                    } else {
                        Err(format!("'{t}' is not finite"))
                    }
                })
        };
        match parts.as_slice() {
            [re] => Ok(Cx(Complex64::new(num(re)?, 0.0))),
            [re, im] => Ok(Cx(Complex64::new(num(re)?, num(im)?))),
            _ => Err(format!("expected re or re,im (got '{s}')")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum RadiusArg {
    Auto,
    Fixed(f64),
}

impl FromStr for RadiusArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(RadiusArg::Auto);
        }
        match s.parse::<f64>() {
            Ok(r) if r.is_finite() && r > 1.0 => Ok(RadiusArg::Fixed(r)),
            _ => Err(format!(
                "expected 'auto' or a real number above 1 (got '{s}')"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Color(Rgb);

impl FromStr for Color {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<Result<u8, _>> = s.split(',').map(|t| t.trim().parse::<u8>()).collect();
        match parts.as_slice() {
            [Ok(r), Ok(g), Ok(b)] => Ok(Color(Rgb::new(*r, *g, *b))),
            _ => Err(format!(
                "expected r,g,b with components 0..=255 (got '{s}')"
            )),
        }
    }
}

/// Inclusive degree range `N` or `A..B`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct DegreeRange(u32, u32);

impl FromStr for DegreeRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |t: &str| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| format!("'{t}' is not a degree"))
        };
        let (lo, hi) = match s.split_once("..") {
            Some((lo, hi)) => (parse(lo)?, parse(hi.trim_start_matches('='))?),
            None => {
                let n = parse(s)?;
                (n, n)
            }
        };
        if lo > hi {
            return Err(format!("empty degree range {s}"));
        }
        Ok(DegreeRange(lo, hi))
    }
}

impl DegreeRange {
    fn iter(self) -> impl Iterator<Item = u32> {
        self.0..=self.1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Ppm,
}

#[derive(Debug, Args)]
struct RenderArgs {
    #[arg(long)]
    n: u32,
    /// Coefficient a as re[,im]; required except for render-aplane.
    #[arg(long, allow_hyphen_values = true)]
    a: Option<Cx>,
    /// Constant c as re[,im]; required except for render-cplane.
    #[arg(long, allow_hyphen_values = true)]
    c: Option<Cx>,
    #[arg(long, allow_hyphen_values = true, default_value_t = -2.0)]
    re: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 2.0)]
    re2: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = -2.0)]
    im: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 2.0)]
    im2: f64,
    #[arg(long, default_value_t = 512)]
    w: usize,
    #[arg(long, default_value_t = 512)]
    h: usize,
    #[arg(long, default_value_t = mcmullen::dynamics::RENDER_MAX_ITER)]
    max_iter: u32,
    #[arg(long, default_value = "auto")]
    escape_radius: RadiusArg,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Ppm)]
    format: Format,
    /// Base color of escaping v+ orbits as r,g,b.
    #[arg(long, default_value = "0,255,0")]
    plus_color: Color,
    /// Base color of escaping v- orbits as r,g,b.
    #[arg(long, default_value = "160,32,240")]
    minus_color: Color,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    MainTheoremA,
    MainTheoremB1,
    MainTheoremB2,
    Symmetries,
    Escape,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    /// Degree or inclusive range such as 3..7.
    #[arg(long)]
    n: Option<DegreeRange>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<Cx>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<Cx>,
    #[arg(long)]
    k: Option<usize>,
    /// Samples per check: window-boundary parameters for the theorem suites,
    /// shell points for escape, seeds for symmetries.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = CERTIFY_MAX_ITER)]
    max_iter: u32,
    #[arg(long)]
    escape_radius: Option<RadiusArg>,
    /// Emit reports as a JSON array instead of CHECK lines.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct CentersArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    a: Option<f64>,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(long)]
    n: u32,
    /// Fixed real a for a c-plane window.
    #[arg(long)]
    a: Option<f64>,
    /// Fixed real c for an a-plane window.
    #[arg(long, allow_hyphen_values = true)]
    c: Option<f64>,
    #[arg(long)]
    k: Option<usize>,
    /// Use the small-a window with radii (4/5) a^(1/n) and 5/4.
    #[arg(long)]
    tight: bool,
    /// Grid density per axis.
    #[arg(long, default_value_t = 128)]
    samples: usize,
    #[arg(long, default_value_t = mcmullen::dynamics::RENDER_MAX_ITER)]
    max_iter: u32,
    #[arg(long, default_value = "auto")]
    escape_radius: RadiusArg,
    /// CSV destination for every sample.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure modes of a command, mapped onto exit codes.
#[derive(Debug)]
enum CliError {
    Usage(String),
    Runtime(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Io { .. } => CliError::Runtime(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

type CliResult = Result<i32, CliError>;

fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}

/// Parse `args` (including the program name), run the command and return the
/// exit code. Reports go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let pool = match thread_pool() {
        Ok(p) => p,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    let mut buffer = Vec::new();
    let result = match &pool {
        Some(pool) => pool.install(|| dispatch(&cli.command, &mut buffer)),
        None => dispatch(&cli.command, &mut buffer),
    };
    if let Err(e) = out.write_all(&buffer) {
        let _ = writeln!(err, "error: cannot write output: {e}");
        return EXIT_FAIL;
    }
    match result {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Runtime(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_FAIL
        }
    }
}

fn thread_pool() -> Result<Option<rayon::ThreadPool>, String> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(None);
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| format!("{THREADS_ENV} must be a positive integer (got '{raw}')"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map(Some)
        .map_err(|e| e.to_string())
}

fn dispatch(command: &Command, out: &mut dyn Write) -> CliResult {
    match command {
        Command::RenderJulia(args) => cmd_render(args, PlaneKind::Julia, out),
        Command::RenderAplane(args) => cmd_render(args, PlaneKind::A, out),
        Command::RenderCplane(args) => cmd_render(args, PlaneKind::C, out),
        Command::Verify(args) => cmd_verify(args, out),
        Command::Centers(args) => cmd_centers(args, out),
        Command::Scan(args) => cmd_scan(args, out),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::Runtime(format!("cannot write output: {e}")))
}

#[derive(Debug, Clone, Copy)]
enum PlaneKind {
    Julia,
    A,
    C,
}

fn cmd_render(args: &RenderArgs, kind: PlaneKind, out: &mut dyn Write) -> CliResult {
    let n = args.n;
    if n < 2 {
        return usage(format!("--n requires n >= 2 (got {n})"));
    }
    let need = |v: Option<Cx>, flag: &str| match v {
        Some(Cx(z)) => Ok(z),
        None => usage(format!("{flag} is required for this plane")),
    };
    let plane = match kind {
        PlaneKind::Julia => Plane::Dynamical(MapParams::new(
            n,
            need(args.a, "--a")?,
            need(args.c, "--c")?,
        )?),
        PlaneKind::A => Plane::APlane {
            n,
            c: need(args.c, "--c")?,
        },
        PlaneKind::C => {
            let a = need(args.a, "--a")?;
            if a.norm_sqr() == 0.0 {
                return usage("--a requires a != 0");
            }
            Plane::CPlane { n, a }
        }
    };
    let viewport = Viewport::new(args.re, args.re2, args.im, args.im2)?;
    if args.w == 0 || args.h == 0 {
        return usage("--w and --h must be positive");
    }
    if args.max_iter == 0 {
        return usage("--max-iter must be at least 1");
    }
    let mut spec = RenderSpec::new(plane, viewport, args.w, args.h);
    spec.max_iter = args.max_iter;
    spec.radius = match args.escape_radius {
        RadiusArg::Auto => RadiusChoice::Auto,
        RadiusArg::Fixed(r) => RadiusChoice::Fixed(r),
    };
    spec.palette = Palette {
        plus: args.plus_color.0,
        minus: args.minus_color.0,
    };
    let Format::Ppm = args.format;
    let start = Instant::now();
    let image = render(&spec)?;
    write_ppm(&image, &args.out)?;
    emit(
        out,
        &format!(
            "wrote {} ({}x{}) in {:.3}s\n",
            args.out.display(),
            args.w,
            args.h,
            start.elapsed().as_secs_f64()
        ),
    )?;
    Ok(EXIT_OK)
}

fn real_of(v: Option<Cx>, flag: &str) -> Result<Option<f64>, CliError> {
    match v {
        None => Ok(None),
        Some(Cx(z)) if z.im == 0.0 => Ok(Some(z.re)),
        Some(_) => usage(format!("{flag} must be real for this suite")),
    }
}

fn check_range(values: &[f64], lo: f64, hi: f64, what: &str) -> Result<(), CliError> {
    match values.iter().find(|v| !(lo..=hi).contains(*v)) {
        Some(v) => usage(format!(
            "this suite requires {lo} ≤ {what} ≤ {hi} (got {v})"
        )),
        None => Ok(()),
    }
}

fn degrees(arg: Option<DegreeRange>, default: DegreeRange, min: u32) -> Result<Vec<u32>, CliError> {
    let range = arg.unwrap_or(default);
    if range.0 < min {
        return usage(format!("this suite requires n ≥ {min} (got {})", range.0));
    }
    Ok(range.iter().collect())
}

fn poly_options() -> PolyLikeOptions {
    PolyLikeOptions::default()
}

fn plan_theorem_a(args: &VerifyArgs) -> Result<Vec<CertificateReport>, CliError> {
    let ns = degrees(args.n, DegreeRange(3, 7), 3)?;
    let cs = match real_of(args.c, "--c")? {
        Some(c) => vec![c],
        None => vec![-1.0, -0.75, -0.5, -0.25],
    };
    check_range(&cs, -1.0, 0.0, "c")?;
    let per_window = args.samples.unwrap_or(8).max(1);
    let mut reports = Vec::new();
    for &n in &ns {
        for &c in &cs {
            let window = ParamWindow::a_plane(n, c)?;
            reports.push(certify_winding(&window, window.domain(), 1024)?);
            for a in boundary_params(&window, per_window)? {
                let params = window.params_at(a)?;
                reports.push(certify_polynomial_like_with(
                    &params,
                    DomainSpec::standard(0),
                    &poly_options(),
                ));
            }
        }
    }
    Ok(reports)
}

/// `count` parameters spread evenly along the window boundary.
fn boundary_params(window: &ParamWindow, count: usize) -> Result<Vec<Complex64>, CliError> {
    let m = (8 * count).max(8);
    let all = window.sample_boundary(m)?;
    Ok(all.into_iter().step_by(m / count).take(count).collect())
}

fn plan_theorem_b1(args: &VerifyArgs) -> Result<Vec<CertificateReport>, CliError> {
    let ns = degrees(args.n, DegreeRange(5, 7), 5)?;
    let as_ = match real_of(args.a, "--a")? {
        Some(a) => vec![a],
        None => vec![1.0, 2.0, 4.0],
    };
    check_range(&as_, 1.0, 4.0, "a")?;
    let per_window = args.samples.unwrap_or(8).max(1);
    let mut reports = Vec::new();
    for &n in &ns {
        let ks = match args.k {
            Some(k) if k < n as usize => vec![k],
            Some(k) => return usage(format!("--k requires 0 ≤ k ≤ n - 1 (got {k} for n = {n})")),
            None => {
                let mut ks = vec![0, n as usize / 2, n as usize - 1];
                ks.dedup();
                ks
            }
        };
        for &a in &as_ {
            for &k in &ks {
                let window = ParamWindow::c_plane(n, a, k)?;
                let domain = window.domain();
                reports.push(certify_winding(&window, domain, 1024)?);
                for c in window_cs(&window, domain, a, per_window)? {
                    let params = window.params_at(c)?;
                    reports.push(certify_polynomial_like_with(
                        &params,
                        domain,
                        &poly_options(),
                    ));
                }
            }
        }
    }
    Ok(reports)
}

/// Boundary parameters of a `c`-plane window plus the one placing `v+` on the
/// centered critical point.
fn window_cs(
    window: &ParamWindow,
    domain: DomainSpec,
    a: f64,
    count: usize,
) -> Result<Vec<Complex64>, CliError> {
    let probe = MapParams::real(window.n(), a, 0.0)?;
    let p = mcmullen::dynamics::critical_points(&probe)[domain.critical_index()];
    let mut cs = vec![p - 2.0 * a.sqrt()];
    cs.extend(boundary_params(window, count)?);
    Ok(cs)
}

fn plan_theorem_b2(args: &VerifyArgs) -> Result<Vec<CertificateReport>, CliError> {
    let ns = degrees(args.n, DegreeRange(11, 13), 11)?;
    let as_ = match real_of(args.a, "--a")? {
        Some(a) => vec![a],
        None => vec![0.1, 0.5, 1.0],
    };
    check_range(&as_, 0.1, 1.0, "a")?;
    if args.k.is_some_and(|k| k != 0) {
        return usage("main-theorem-b2 requires k = 0");
    }
    let per_window = args.samples.unwrap_or(8).max(1);
    let mut reports = Vec::new();
    for &n in &ns {
        for &a in &as_ {
            let window = ParamWindow::c_plane_tight(n, a)?;
            let domain = window.domain();
            reports.push(certify_winding(&window, domain, 1024)?);
            for c in window_cs(&window, domain, a, per_window)? {
                let params = window.params_at(c)?;
                reports.push(certify_polynomial_like_with(
                    &params,
                    domain,
                    &poly_options(),
                ));
            }
        }
    }
    Ok(reports)
}

fn plan_symmetries(args: &VerifyArgs) -> Result<Vec<CertificateReport>, CliError> {
    let ns = degrees(args.n, DegreeRange(3, 3), 2)?;
    let a = args.a.map_or(Complex64::new(0.5, 0.0), |Cx(z)| z);
    let c = args.c.map_or(Complex64::new(0.3, 0.0), |Cx(z)| z);
    let seeds = args.samples.unwrap_or(100);
    let mut reports = Vec::new();
    for n in ns {
        let params = MapParams::new(n, a, c)?;
        reports.push(certify_symmetries(&params, 20, seeds));
    }
    Ok(reports)
}

/// Default escape grids: a few parameters from each regime.
fn escape_grid() -> Vec<MapParams> {
    let mut out = Vec::new();
    for c in [-1.0, -0.5, 0.5] {
        let lo = (c * c / 4.0f64).max(1e-3);
        let hi = (1.0 - c / 2.0f64).powi(2);
        for abs_a in [lo, (lo * hi).sqrt(), hi] {
            out.push(MapParams::real(3, abs_a, c).expect("grid parameters are valid"));
        }
    }
    for a in [1.0f64, 2.5, 4.0] {
        for v in [
            Complex64::new(2.0, 0.0),
            Complex64::new(0.0, 2.0),
            Complex64::new(-2.0, 0.0),
        ] {
            let c = v - 2.0 * a.sqrt();
            out.push(MapParams::new(5, Complex64::new(a, 0.0), c).expect("valid"));
        }
    }
    for a in [0.1f64, 0.5, 1.0] {
        for v in [
            Complex64::new(1.25, 0.0),
            Complex64::new(0.0, 1.25),
            Complex64::new(-1.25, 0.0),
        ] {
            let c = v - 2.0 * a.sqrt();
            out.push(MapParams::new(11, Complex64::new(a, 0.0), c).expect("valid"));
        }
    }
    out
}

fn plan_escape(args: &VerifyArgs) -> Result<Vec<CertificateReport>, CliError> {
    let m = args.samples.unwrap_or(10_000);
    let params: Vec<MapParams> = match (args.n, args.a, args.c) {
        (None, None, None) => escape_grid(),
        (n, a, c) => {
            let (Some(n), Some(Cx(a)), Some(Cx(c))) = (n, a, c) else {
                return usage("escape needs all of --n, --a and --c, or none of them");
            };
            n.iter()
                .map(|n| MapParams::new(n, a, c))
                .collect::<Result<_, _>>()?
        }
    };
    let mut reports = Vec::new();
    for p in params {
        let radius = match args.escape_radius {
            Some(RadiusArg::Fixed(r)) => r,
            _ => escape_regimes(&p)
                .iter()
                .map(|r| r.radius())
                .fold(None, |acc: Option<f64>, r| {
                    Some(acc.map_or(r, |x| x.min(r)))
                })
                .unwrap_or_else(|| default_escape_radius(&p)),
        };
        let settings = EscapeSettings::new(radius, args.max_iter)?;
        reports.push(certify_escape_bounds(&p, &settings, m)?);
    }
    Ok(reports)
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> CliResult {
    let suite_name = args
        .suite
        .to_possible_value()
        .map(|v| v.get_name().to_string())
        .unwrap_or_default();
    let reports = match args.suite {
        Suite::MainTheoremA => plan_theorem_a(args)?,
        Suite::MainTheoremB1 => plan_theorem_b1(args)?,
        Suite::MainTheoremB2 => plan_theorem_b2(args)?,
        Suite::Symmetries => plan_symmetries(args)?,
        Suite::Escape => plan_escape(args)?,
    };
    let failed = reports
        .iter()
        .filter(|r| r.outcome == Outcome::Fail)
        .count();
    let inconclusive = reports
        .iter()
        .filter(|r| r.outcome == Outcome::Inconclusive)
        .count();
    if args.json {
        let doc =
            serde_json::to_string_pretty(&reports).map_err(|e| CliError::Runtime(e.to_string()))?;
        emit(out, &doc)?;
        emit(out, "\n")?;
    } else {
        for r in &reports {
            emit(out, &r.to_text())?;
        }
        emit(
            out,
            &format!(
                "SUMMARY suite={suite_name} checks={} passed={} failed={failed} inconclusive={inconclusive}\n",
                reports.len(),
                reports.len() - failed - inconclusive,
            ),
        )?;
    }
    Ok(if failed > 0 {
        EXIT_FAIL
    } else if inconclusive > 0 {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_OK
    })
}

fn cmd_centers(args: &CentersArgs, out: &mut dyn Write) -> CliResult {
    let n = args.n;
    let overlap = overlap_parameter(n)?;
    let mut text = format!("n={n}\noverlap_a={overlap}\n");
    let at_overlap = center_pair(n, overlap)?;
    text.push_str(&format!("c_plus(overlap_a)={}\n", at_overlap.c_plus));
    if let Some(c) = at_overlap.c_minus {
        text.push_str(&format!("c_minus(overlap_a)={c}\n"));
    }
    if let Some(a) = args.a {
        let pair = center_pair(n, a)?;
        text.push_str(&format!("a={a}\nc_plus={}\n", pair.c_plus));
        if let Some(c) = pair.c_minus {
            text.push_str(&format!("c_minus={c}\n"));
        }
        if let Ok(iv) = interval_positions(n, a) {
            text.push_str(&format!(
                "I1=[{}, {}]\nI2=[{}, {}]\nordering={}\n",
                iv.omega1,
                iv.omega2,
                -iv.omega2,
                -iv.omega1,
                iv.ordering.label()
            ));
        }
    }
    emit(out, &text)?;
    Ok(EXIT_OK)
}

fn cmd_scan(args: &ScanArgs, out: &mut dyn Write) -> CliResult {
    let window = match (args.a, args.c) {
        (Some(a), None) if args.tight => {
            if args.k.is_some_and(|k| k != 0) {
                return usage("--tight requires k = 0");
            }
            ParamWindow::c_plane_tight(args.n, a)?
        }
        (Some(a), None) => ParamWindow::c_plane(args.n, a, args.k.unwrap_or(0))?,
        (None, Some(c)) => {
            if args.tight || args.k.is_some() {
                return usage("--tight and --k apply only to c-plane scans (--a)");
            }
            ParamWindow::a_plane(args.n, c)?
        }
        _ => return usage("give exactly one of --a (c-plane window) or --c (a-plane window)"),
    };
    let radius = match args.escape_radius {
        RadiusArg::Fixed(r) => r,
        RadiusArg::Auto => window.domain().regime.outer_radius(),
    };
    let settings = EscapeSettings::new(radius, args.max_iter)?;
    let result = scan_boundedness_locus(&window, args.samples, &settings)?;
    if let Some(path) = &args.out {
        result.write_csv(path)?;
    }
    let s = &result.summary;
    let mut text = format!(
        "SCAN window=\"{}\" density={} samples={} bounded={} bounded_in_uprime={} nonempty={} components={}",
        window.describe(),
        result.density,
        s.samples,
        s.bounded,
        s.bounded_in_uprime,
        s.nonempty,
        s.components
    );
    if let (Some(center), Some(hit)) = (s.center, s.contains_center) {
        text.push_str(&format!(" center={} contains_center={hit}", center.re));
    }
    text.push('\n');
    emit(out, &text)?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_complex_values() {
        assert_eq!("0.5".parse::<Cx>().unwrap().0, Complex64::new(0.5, 0.0));
        assert_eq!("-1,2".parse::<Cx>().unwrap().0, Complex64::new(-1.0, 2.0));
        assert!("1,2,3".parse::<Cx>().is_err());
        assert!("nan".parse::<Cx>().is_err());
    }

    #[test]
    fn parses_degree_ranges() {
        assert_eq!("3..7".parse::<DegreeRange>().unwrap(), DegreeRange(3, 7));
        assert_eq!("3..=7".parse::<DegreeRange>().unwrap(), DegreeRange(3, 7));
        assert_eq!("5".parse::<DegreeRange>().unwrap(), DegreeRange(5, 5));
        assert!("7..3".parse::<DegreeRange>().is_err());
    }

    #[test]
    fn parses_radius_and_color() {
        assert_eq!("auto".parse::<RadiusArg>().unwrap(), RadiusArg::Auto);
        assert_eq!("2.5".parse::<RadiusArg>().unwrap(), RadiusArg::Fixed(2.5));
        assert!("0.5".parse::<RadiusArg>().is_err());
        assert_eq!("1,2,3".parse::<Color>().unwrap().0, Rgb::new(1, 2, 3));
        assert!("1,2,300".parse::<Color>().is_err());
    }

    #[test]
    fn boundary_params_are_spread() {
        let w = ParamWindow::c_plane(5, 1.0, 0).unwrap();
        let ps = boundary_params(&w, 8).unwrap();
        assert_eq!(ps.len(), 8);
        for p in ps {
            assert!(w.contains(p));
        }
    }
}
