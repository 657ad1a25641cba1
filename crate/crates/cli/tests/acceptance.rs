//! Acceptance criteria 1-9. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line under `cargo test`.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use mcmullen::certify::{
    certify_escape_bounds, certify_polynomial_like, certify_symmetries, certify_winding,
    CertificateReport, Outcome, WINDING_TOLERANCE,
};
use mcmullen::dynamics::{
    critical_points, mandelbrot_classify, EscapeSettings, MapParams, OrbitStatus, CERTIFY_MAX_ITER,
};
use mcmullen::features::{
    baby_center, interval_positions, scan_boundedness_locus, Ordering, Which,
};
use mcmullen::regions::{DomainSpec, ParamWindow};
use mcmullen::render::{classify_grid, encode_ppm, render, Plane, RenderSpec, Viewport, BLACK};
use mcmullen::Complex64;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_s: f64, what: &str) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit_s, || {
        format!(
            "{what} took {:.2}s, limit {limit_s}s",
            elapsed.as_secs_f64()
        )
    })
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = mcmullen_cli::run(
        std::iter::once("mcm").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (code, String::from_utf8_lossy(&out).into_owned())
}

fn require_pass(r: &CertificateReport) -> Result<(), String> {
    ensure(
        r.passed && r.outcome == Outcome::Pass && r.margin > 0.0,
        || r.to_text(),
    )
}

fn landmarks() -> Verdict {
    let start = Instant::now();
    let (code, out) = cli(&["centers", "--n", "11"]);
    ensure(code == 0, || format!("centers exited {code}"))?;
    let field = |key: &str| -> Result<f64, String> {
        out.lines()
            .find_map(|l| l.strip_prefix(key)?.strip_prefix('='))
            .ok_or(format!("missing {key}"))?
            .parse()
            .map_err(|e| format!("{key}: {e}"))
    };
    let a = field("overlap_a")?;
    let expected = 0.25f64.powf(1.1);
    ensure((a - expected).abs() <= 1e-15 * expected, || {
        format!("overlap a = {a}, expected {expected}")
    })?;
    let center = baby_center(11, a, Which::Plus).map_err(|e| e.to_string())?;
    ensure(center.abs() < 1e-12, || {
        format!("|c+| = {center:e} at overlap")
    })?;
    let figure = baby_center(11, 0.2176, Which::Plus).map_err(|e| e.to_string())?;
    ensure(figure.abs() < 3e-4, || {
        format!("|c+| = {figure:e} at a = 0.2176")
    })?;
    within(start.elapsed(), 1.0, "landmarks")?;
    Ok(format!(
        "a = {a:.15}, |c+(a)| = {:.1e}, |c+(0.2176)| = {:.2e}",
        center.abs(),
        figure.abs()
    ))
}

fn escape_grids() -> Vec<(&'static str, MapParams, f64)> {
    let mut grid = Vec::new();
    // n = 3 with |c| <= 1 and |c|^2/4 <= |a| <= (1 - |c|/2)^2
    for cc in [c(-1.0, 0.0), c(0.3, 0.4), c(0.0, 1e-3), c(0.8, -0.6)] {
        let m = cc.norm();
        let lo = (m * m / 4.0).max(1e-3);
        let hi = (1.0 - m / 2.0).powi(2);
        for abs_a in [lo, (lo * hi).sqrt(), hi] {
            for psi in [0.0, 2.0 * PI / 3.0, -PI / 2.0] {
                let a = Complex64::from_polar(abs_a, psi);
                grid.push(("n=3", MapParams::new(3, a, cc).unwrap(), 2.0));
            }
        }
    }
    // v+ on and inside the regime circle
    let vs = |r: f64| {
        let mut vs: Vec<Complex64> = (0..8)
            .map(|j| Complex64::from_polar(r, j as f64 * PI / 4.0))
            .collect();
        vs.push(c(0.0, 0.0));
        vs.push(c(r / 2.0, -r / 3.0));
        vs
    };
    for a in [1.0f64, 1.75, 2.5, 4.0] {
        for v in vs(2.0) {
            let p = MapParams::new(5, c(a, 0.0), v - 2.0 * a.sqrt()).unwrap();
            grid.push(("n=5", p, 2.0));
        }
    }
    for a in [0.1f64, 0.22, 0.5, 1.0] {
        for v in vs(1.25) {
            let p = MapParams::new(11, c(a, 0.0), v - 2.0 * a.sqrt()).unwrap();
            grid.push(("n=11", p, 1.25));
        }
    }
    grid
}

fn escape() -> Verdict {
    let start = Instant::now();
    let grid = escape_grids();
    let mut worst = f64::INFINITY;
    for (_, p, radius) in &grid {
        let settings = EscapeSettings::new(*radius, CERTIFY_MAX_ITER).unwrap();
        let r = certify_escape_bounds(p, &settings, 10_000).map_err(|e| e.to_string())?;
        require_pass(&r)?;
        worst = worst.min(r.margin);
    }
    within(start.elapsed(), 30.0, "escape grids")?;
    Ok(format!(
        "{} parameters over three regimes, min margin {worst:.3e}",
        grid.len()
    ))
}

/// `count` evenly spread parameters along the window boundary.
fn boundary(window: &ParamWindow, count: usize) -> Vec<Complex64> {
    let m = 8 * count;
    window
        .sample_boundary(m)
        .unwrap()
        .into_iter()
        .step_by(8)
        .collect()
}

fn center_c(n: u32, a: f64, domain: DomainSpec) -> Complex64 {
    let probe = MapParams::real(n, a, 0.0).unwrap();
    critical_points(&probe)[domain.critical_index()] - 2.0 * a.sqrt()
}

fn polynomial_like() -> Verdict {
    let start = Instant::now();
    let mut checked = 0;
    let mut worst = f64::INFINITY;
    let mut check = |p: MapParams, d: DomainSpec| -> Result<(), String> {
        let r = certify_polynomial_like(&p, d);
        require_pass(&r)?;
        worst = worst.min(r.margin);
        checked += 1;
        Ok(())
    };
    for n in 3..=7 {
        for cv in [-1.0, -0.5, -0.25] {
            let w = ParamWindow::a_plane(n, cv).unwrap();
            for a in boundary(&w, 16) {
                check(w.params_at(a).unwrap(), w.domain())?;
            }
        }
    }
    for n in [5u32, 6, 7] {
        for a in [1.0, 2.0, 4.0] {
            for k in [0, n as usize / 2, n as usize - 1] {
                let w = ParamWindow::c_plane(n, a, k).unwrap();
                check(w.params_at(center_c(n, a, w.domain())).unwrap(), w.domain())?;
                for cv in boundary(&w, 16) {
                    check(w.params_at(cv).unwrap(), w.domain())?;
                }
            }
        }
    }
    for n in [11u32, 13] {
        for a in [0.1, 0.5, 1.0] {
            let w = ParamWindow::c_plane_tight(n, a).unwrap();
            check(w.params_at(center_c(n, a, w.domain())).unwrap(), w.domain())?;
            for cv in boundary(&w, 16) {
                check(w.params_at(cv).unwrap(), w.domain())?;
            }
        }
    }
    within(start.elapsed(), 120.0, "polynomial-like grid")?;
    Ok(format!("{checked} maps certified, min margin {worst:.3e}"))
}

fn winding() -> Verdict {
    let windows = [
        ParamWindow::a_plane(4, -0.5).unwrap(),
        ParamWindow::a_plane(3, -1.0).unwrap(),
        ParamWindow::c_plane(5, 1.0, 0).unwrap(),
        ParamWindow::c_plane(6, 1.0, 4).unwrap(),
        ParamWindow::c_plane_tight(11, 0.22).unwrap(),
    ];
    let mut worst_slack = f64::INFINITY;
    for w in &windows {
        let r = certify_winding(w, w.domain(), 1024).map_err(|e| e.to_string())?;
        require_pass(&r)?;
        ensure(r.winding == Some(1), || r.to_text())?;
        worst_slack = worst_slack.min(r.margin);
    }
    let control = ParamWindow::c_plane(5, 1.0, 1).unwrap();
    let r = certify_winding(&control, DomainSpec::standard(0), 1024).map_err(|e| e.to_string())?;
    ensure(r.winding == Some(0) && r.outcome == Outcome::Fail, || {
        r.to_text()
    })?;
    Ok(format!(
        "five windows wind once (min slack {worst_slack:.1e}), shifted control winds zero (tolerance {WINDING_TOLERANCE:e})"
    ))
}

fn symmetries() -> Verdict {
    let configs = [
        MapParams::new(3, c(0.5, 0.0), c(0.3, 0.2)).unwrap(),
        MapParams::new(5, c(1.0, 0.0), c(-0.4, 0.1)).unwrap(),
        MapParams::new(7, c(2.0, 0.0), c(0.2, -0.3)).unwrap(),
        MapParams::new(11, c(0.3, 0.0), c(0.05, 0.02)).unwrap(),
    ];
    for p in &configs {
        let r = certify_symmetries(p, 20, 100);
        require_pass(&r)?;
        ensure(r.samples_used >= 100, || r.to_text())?;
        ensure(
            !r.notes.iter().any(|n| n.contains("not applicable")),
            || r.to_text(),
        )?;
    }
    let view = Viewport::new(-2.0, 2.0, -2.0, 2.0).unwrap();
    for n in [3u32, 5, 7] {
        let spec = RenderSpec::new(Plane::CPlane { n, a: c(0.5, 0.0) }, view, 64, 64);
        let flags = classify_grid(&spec).map_err(|e| e.to_string())?;
        let at = |x: usize, y: usize| flags[y * 64 + x];
        for y in 0..64 {
            for x in 0..64 {
                ensure(at(x, y) == at(x, 63 - y), || {
                    format!("real-axis mirror breaks at n={n} ({x},{y})")
                })?;
                let (p, m) = at(63 - x, y);
                ensure(at(x, y) == (m, p), || {
                    format!("imaginary-axis swap breaks at n={n} ({x},{y})")
                })?;
            }
        }
    }
    Ok(format!(
        "{} configurations x 100 seeds x 20 iterates; mirrors exact on 64x64",
        configs.len()
    ))
}

fn pass_through() -> Verdict {
    let start = Instant::now();
    let grid = [0.1, 0.15, 0.2176, 0.3, 0.6, 1.0];
    let verdicts: Vec<Ordering> = grid
        .iter()
        .map(|&a| interval_positions(11, a).map(|iv| iv.ordering))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let rank = |o: Ordering| match o {
        Ordering::I2LeftOfI1 => 0,
        Ordering::Overlapping => 1,
        Ordering::I1LeftOfI2 => 2,
    };
    let ranks: Vec<u8> = verdicts.iter().map(|&o| rank(o)).collect();
    let labels: Vec<&str> = verdicts.iter().map(|o| o.label()).collect();
    ensure(ranks.windows(2).all(|w| w[0] <= w[1]), || {
        format!("non-monotone verdicts {labels:?}")
    })?;
    ensure(
        ranks.first() == Some(&0) && ranks.last() == Some(&2),
        || format!("missing an end state in {labels:?}"),
    )?;
    ensure(verdicts[2] == Ordering::Overlapping, || {
        format!("a = 0.2176 is {}", labels[2])
    })?;
    within(start.elapsed(), 1.0, "interval positions")?;
    Ok(labels.join(" -> "))
}

fn figures() -> Verdict {
    let view = Viewport::new(-2.0, 2.0, -2.0, 2.0).unwrap();
    let dynamical = MapParams::real(5, 0.7, -0.75).unwrap();
    let specs = [
        (
            "c-plane n=3 a=0.5",
            Plane::CPlane {
                n: 3,
                a: c(0.5, 0.0),
            },
        ),
        (
            "a-plane n=5 c=0.5",
            Plane::APlane {
                n: 5,
                c: c(0.5, 0.0),
            },
        ),
        ("dynamical n=5 a=0.7 c=-0.75", Plane::Dynamical(dynamical)),
    ];
    let threads = std::thread::available_parallelism().map_or(4, |t| t.get().max(2));
    let pool = |t: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .unwrap()
    };
    let (single, many) = (pool(1), pool(threads));
    let mut timings = Vec::new();
    for (label, plane) in specs {
        let spec = RenderSpec::new(plane, view, 512, 512);
        let start = Instant::now();
        let image = many.install(|| render(&spec)).map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        within(elapsed, 10.0, label)?;
        timings.push(format!("{:.2}s", elapsed.as_secs_f64()));
        let serial = single
            .install(|| render(&spec))
            .map_err(|e| e.to_string())?;
        ensure(encode_ppm(&image) == encode_ppm(&serial), || {
            format!("{label}: 1-thread and {threads}-thread bytes differ")
        })?;
        if let Plane::Dynamical(p) = plane {
            let r_in = p.a().norm().powf(1.0 / p.n() as f64) / 2.0;
            let mut violations = 0;
            let mut black = 0;
            for y in 0..512 {
                for x in 0..512 {
                    if image.get(x, y) == BLACK {
                        black += 1;
                        let r = spec.pixel_center(x, y).norm();
                        if r < r_in || r > 2.0 {
                            violations += 1;
                        }
                    }
                }
            }
            ensure(black > 0 && violations == 0, || {
                format!("{label}: {violations} of {black} black pixels outside the annulus")
            })?;
        }
    }
    Ok(format!(
        "512x512 in {} with {threads} threads; identical to 1 thread",
        timings.join(", ")
    ))
}

fn scans() -> Verdict {
    let start = Instant::now();
    let settings = EscapeSettings::new(2.0, mcmullen::dynamics::RENDER_MAX_ITER).unwrap();
    let w = ParamWindow::c_plane(5, 1.0, 0).unwrap();
    let s = scan_boundedness_locus(&w, 128, &settings).map_err(|e| e.to_string())?;
    ensure(s.summary.nonempty, || "W(5,1,0) locus empty".into())?;
    ensure(s.summary.contains_center == Some(true), || {
        format!("W(5,1,0) center check {:?}", s.summary.center)
    })?;
    let center = s.summary.center.unwrap();
    ensure((center - c(-1.0, 0.0)).norm() < 1e-12, || {
        format!("center {center}")
    })?;
    let first = s.summary.bounded;
    let w = ParamWindow::a_plane(4, -0.5).unwrap();
    let t = scan_boundedness_locus(&w, 128, &settings).map_err(|e| e.to_string())?;
    ensure(t.summary.nonempty, || "W(4,-0.5) locus empty".into())?;
    within(start.elapsed(), 30.0, "scans")?;
    Ok(format!(
        "W(5,1,0): {first} bounded incl. c = -1; W(4,-0.5): {} bounded",
        t.summary.bounded
    ))
}

/// Textbook escape-time loop on real and imaginary parts.
fn reference_mandelbrot(cr: f64, ci: f64, max_iter: u32) -> Option<u32> {
    let (mut x, mut y) = (0.0f64, 0.0f64);
    for step in 1..=max_iter {
        let xt = x * x - y * y + cr;
        y = 2.0 * x * y + ci;
        x = xt;
        if x * x + y * y > 4.0 {
            return Some(step);
        }
    }
    None
}

fn oracle() -> Verdict {
    let settings = EscapeSettings::new(2.0, 256).unwrap();
    let mut mismatches = 0;
    let mut inside = 0;
    for j in 0..128 {
        for i in 0..128 {
            let cr = -2.0 + 3.0 * (i as f64 + 0.5) / 128.0;
            let ci = 1.5 - 3.0 * (j as f64 + 0.5) / 128.0;
            let ours = match mandelbrot_classify(c(cr, ci), &settings).status {
                OrbitStatus::Escaped { step, .. } => Some(step),
                OrbitStatus::Bounded { .. } => None,
            };
            let theirs = reference_mandelbrot(cr, ci, 256);
            inside += usize::from(theirs.is_none());
            mismatches += usize::from(ours != theirs);
        }
    }
    ensure(mismatches == 0, || {
        format!("{mismatches} of 16384 pixels disagree")
    })?;
    Ok(format!("16384 of 16384 pixels agree ({inside} bounded)"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("closed-form landmarks", landmarks),
        ("escape-lemma certification", escape),
        ("polynomial-like grid", polynomial_like),
        ("winding certificates", winding),
        ("symmetry suite", symmetries),
        ("pass-through reproduction", pass_through),
        ("figure-level renders", figures),
        ("boundedness-locus scans", scans),
        ("oracle equivalence", oracle),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("ACCEPTANCE {} PASS {name}: {detail} [{secs:.2}s]", i + 1),
            Err(why) => {
                failures += 1;
                println!("ACCEPTANCE {} FAIL {name}: {why} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
