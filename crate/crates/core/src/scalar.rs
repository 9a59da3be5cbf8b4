//! The scalar update map `Φ(x) = β·tanh(x + α·sin x)` with ε-grid projection.
//!
//! One step of the iteration is `x ↦ project(Φ(x))`. The projection rounds to
//! the nearest multiple of ε (ties to the even multiple), so "same
//! projection" is a genuine equivalence relation on ℝ.

use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};

use crate::{Error, Result};

/// Number of samples in a map plot.
pub const PLOT_SAMPLES: usize = 300;
/// Grid spacing of the sign-change scan in [`find_fixed_points`].
pub const SCAN_STEP: f64 = 1e-3;
/// Bracket width at which bisection stops.
pub const BISECTION_WIDTH: f64 = 1e-12;
/// Grid used by [`contraction_report`] for the empirical derivative maximum.
pub const DERIVATIVE_GRID: (f64, f64, usize) = (-10.0, 10.0, 10_001);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarParams {
    /// Contextual modulation, `α ≥ 0`.
    pub alpha: f64,
    /// Damping, `β > 0`.
    pub beta: f64,
    /// Grid width of the projection.
    pub epsilon: f64,
    /// Convergence threshold on `|x_{t+1} − x_t|`.
    pub tol: f64,
    pub max_iter: usize,
}

impl ScalarParams {
    pub const DEFAULT_EPSILON: f64 = 1e-12;
    pub const DEFAULT_TOL: f64 = 1e-10;
    pub const DEFAULT_MAX_ITER: usize = 10_000;

    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let p = ScalarParams {
            alpha,
            beta,
            epsilon: Self::DEFAULT_EPSILON,
            tol: Self::DEFAULT_TOL,
            max_iter: Self::DEFAULT_MAX_ITER,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Result<Self> {
        self.epsilon = epsilon;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |name, reason: &str| Err(Error::InvalidParam { name, reason: reason.to_string() });
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return bad("alpha", "must be finite and >= 0");
        }
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return bad("beta", "must be finite and > 0");
        }
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return bad("epsilon", "must be finite and > 0");
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return bad("tol", "must be finite and > 0");
        }
        if self.max_iter < 1 {
            return bad("max_iter", "must be >= 1");
        }
        Ok(())
    }

    fn eval(&self, x: f64) -> f64 {
        self.beta * (x + self.alpha * x.sin()).tanh()
    }

    fn eval_derivative(&self, x: f64) -> f64 {
        let c = (x + self.alpha * x.sin()).cosh();
        self.beta / (c * c) * (1.0 + self.alpha * x.cos())
    }

    fn round(&self, x: f64) -> f64 {
        // `+ 0.0` folds −0 into +0 so equal states have equal bits.
        (x / self.epsilon).round_ties_even() * self.epsilon + 0.0
    }
}

fn finite(x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::NonFinite { value: x })
    }
}

/// `Φ(x) = β·tanh(x + α·sin x)`.
pub fn phi(params: &ScalarParams, x: f64) -> Result<f64> {
    params.validate()?;
    Ok(params.eval(finite(x)?))
}

/// `Φ'(x) = β·sech²(x + α·sin x)·(1 + α·cos x)`.
pub fn phi_derivative(params: &ScalarParams, x: f64) -> Result<f64> {
    params.validate()?;
    Ok(params.eval_derivative(finite(x)?))
}

/// Nearest multiple of ε, ties to the even multiple.
pub fn project(params: &ScalarParams, x: f64) -> f64 {
    params.round(x)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContractionReport {
    /// The Lipschitz bound `β(1 + α)`.
    pub bound: f64,
    pub is_certified: bool,
    /// `max |Φ'|` over the sampling grid.
    pub empirical_max: f64,
}

impl fmt::Display for ContractionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "bound beta*(1+alpha) = {} ({}), empirical max |phi'| = {}",
            fmt_short(self.bound),
            if self.is_certified { "certified contraction" } else { "not certified" },
            fmt_short(self.empirical_max)
        )
    }
}

pub fn contraction_report(params: &ScalarParams) -> Result<ContractionReport> {
    let (lo, hi, n) = DERIVATIVE_GRID;
    contraction_report_on_grid(params, lo, hi, n)
}

/// Like [`contraction_report`] with an explicit `n`-point grid on `[lo, hi]`.
pub fn contraction_report_on_grid(params: &ScalarParams, lo: f64, hi: f64, n: usize) -> Result<ContractionReport> {
    params.validate()?;
    check_range(lo, hi)?;
    let bound = params.beta * (1.0 + params.alpha);
    let empirical_max = linspace(lo, hi, n.max(2)).map(|x| params.eval_derivative(x).abs()).fold(0.0, f64::max);
    Ok(ContractionReport { bound, is_certified: bound < 1.0, empirical_max })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TrajectoryStatus {
    /// `|x_{step+1} − x_step| < tol`; `fixed_point` is `x_{step+1}`.
    Converged {
        fixed_point: f64,
        step: usize,
    },
    MaxIterReached,
    /// A projected state was revisited after `period ≥ 2` steps.
    CycleDetected {
        period: usize,
    },
}

impl fmt::Display for TrajectoryStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrajectoryStatus::Converged { fixed_point, step } => {
                write!(f, "converged to {} at t={step}", fmt17(*fixed_point))
            }
            TrajectoryStatus::MaxIterReached => write!(f, "max_iter reached"),
            TrajectoryStatus::CycleDetected { period } => write!(f, "cycle of period {period}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub params: ScalarParams,
    pub x0: f64,
    /// `(t, x_t)`, starting with `(0, x0)`.
    pub samples: Vec<(usize, f64)>,
    pub status: TrajectoryStatus,
}

impl TrajectoryRecord {
    /// Number of map evaluations performed.
    pub fn steps(&self) -> usize {
        self.samples.len() - 1
    }

    pub fn last(&self) -> f64 {
        self.samples.last().expect("samples start with x0").1
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,x\n");
        for (t, x) in &self.samples {
            let _ = writeln!(out, "{t},{}", fmt17(*x));
        }
        out
    }
}

/// Iterates `x ↦ project(Φ(x))` from `x0` until two consecutive states are
/// within `tol`, a projected state repeats, or `max_iter` steps have run.
pub fn iterate(params: &ScalarParams, x0: f64) -> Result<TrajectoryRecord> {
    params.validate()?;
    finite(x0)?;
    let mut samples = vec![(0, x0)];
    let mut visited: HashMap<u64, usize> = HashMap::from([((x0 + 0.0).to_bits(), 0)]);
    let mut x = x0;
    let mut status = TrajectoryStatus::MaxIterReached;
    for t in 0..params.max_iter {
        let next = params.round(params.eval(x));
        samples.push((t + 1, next));
        if (next - x).abs() < params.tol {
            status = TrajectoryStatus::Converged { fixed_point: next, step: t };
            break;
        }
        if let Some(&s) = visited.get(&next.to_bits()) {
            status = TrajectoryStatus::CycleDetected { period: t + 1 - s };
            break;
        }
        visited.insert(next.to_bits(), t + 1);
        x = next;
    }
    Ok(TrajectoryRecord { params: *params, x0, samples, status })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    Attracting,
    Repelling,
    Neutral,
}

impl fmt::Display for Stability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stability::Attracting => "attracting",
            Stability::Repelling => "repelling",
            Stability::Neutral => "neutral",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPoint {
    pub x: f64,
    pub derivative: f64,
    pub stability: Stability,
}

/// Fixed points of Φ in `[lo, hi]`: sign changes of `Φ(x) − x` on a
/// [`SCAN_STEP`] grid, each refined by bisection to [`BISECTION_WIDTH`].
///
/// Tangential roots without a sign change are not detected.
pub fn find_fixed_points(params: &ScalarParams, lo: f64, hi: f64) -> Result<Vec<FixedPoint>> {
    params.validate()?;
    check_range(lo, hi)?;
    let g = |x: f64| params.eval(x) - x;
    let n = ((hi - lo) / SCAN_STEP).ceil().max(1.0) as usize;
    let xs: Vec<f64> = linspace(lo, hi, n + 1).collect();
    let gs: Vec<f64> = xs.iter().map(|&x| g(x)).collect();
    let mut roots = Vec::new();
    for i in 0..xs.len() {
        if gs[i] == 0.0 {
            roots.push(xs[i]);
        } else if i + 1 < xs.len() && gs[i] * gs[i + 1] < 0.0 {
            roots.push(bisect(g, xs[i], xs[i + 1]));
        }
    }
    Ok(roots
        .into_iter()
        .map(|x| {
            let derivative = params.eval_derivative(x);
            let stability = if derivative.abs() < 1.0 - 1e-9 {
                Stability::Attracting
            } else if derivative.abs() > 1.0 + 1e-9 {
                Stability::Repelling
            } else {
                Stability::Neutral
            };
            FixedPoint { x, derivative, stability }
        })
        .collect())
}

fn bisect(g: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut ga = g(a);
    for _ in 0..200 {
        if b - a <= BISECTION_WIDTH {
            break;
        }
        let m = 0.5 * (a + b);
        let gm = g(m);
        if gm == 0.0 {
            return m;
        }
        if (gm < 0.0) == (ga < 0.0) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

fn check_range(lo: f64, hi: f64) -> Result<()> {
    if lo.is_finite() && hi.is_finite() && lo < hi {
        Ok(())
    } else {
        Err(Error::InvalidParam { name: "range", reason: format!("need finite lo < hi, got [{lo}, {hi}]") })
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let last = (n - 1) as f64;
    (0..n).map(move |i| if i + 1 == n { hi } else { lo + (hi - lo) * (i as f64) / last })
}

/// Float formatting used in every emitted artifact: 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Shortest round-trip form, in scientific notation for very small or large
/// magnitudes.
pub fn fmt_short(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e15).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

/// Samples of Φ on a range together with its fixed points.
#[derive(Debug, Clone, PartialEq)]
pub struct MapPlot {
    pub params: ScalarParams,
    pub range: (f64, f64),
    /// `(x, Φ(x))`, [`PLOT_SAMPLES`] evenly spaced points including both ends.
    pub samples: Vec<(f64, f64)>,
    pub fixed_points: Vec<FixedPoint>,
}

pub fn map_plot(params: &ScalarParams, lo: f64, hi: f64) -> Result<MapPlot> {
    params.validate()?;
    check_range(lo, hi)?;
    let samples = linspace(lo, hi, PLOT_SAMPLES).map(|x| (x, params.eval(x))).collect();
    let fixed_points = find_fixed_points(params, lo, hi)?;
    Ok(MapPlot { params: *params, range: (lo, hi), samples, fixed_points })
}

const SVG_W: f64 = 640.0;
const SVG_H: f64 = 400.0;
const SVG_MARGIN: f64 = 50.0;

impl MapPlot {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,phi,diag\n");
        for (x, y) in &self.samples {
            let _ = writeln!(out, "{},{},{}", fmt17(*x), fmt17(*y), fmt17(*x));
        }
        out
    }

    /// 640×400 plot of the curve, the diagonal and the fixed points
    /// (filled = attracting, hollow = repelling or neutral).
    pub fn to_svg(&self) -> String {
        let (lo, hi) = self.range;
        let ylim = (2.0 * self.params.beta).max(1.2);
        let sx = |x: f64| SVG_MARGIN + (x - lo) / (hi - lo) * (SVG_W - 2.0 * SVG_MARGIN);
        let sy = |y: f64| SVG_H - SVG_MARGIN - (y + ylim) / (2.0 * ylim) * (SVG_H - 2.0 * SVG_MARGIN);
        let mut s = String::new();
        let _ =
            writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="640" height="400" viewBox="0 0 640 400">"#);
        let _ = writeln!(s, r#"<rect x="0" y="0" width="640" height="400" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<rect x="{m}" y="{m}" width="{w}" height="{h}" fill="none" stroke="black"/>"#,
            m = SVG_MARGIN,
            w = SVG_W - 2.0 * SVG_MARGIN,
            h = SVG_H - 2.0 * SVG_MARGIN
        );
        if lo < 0.0 && hi > 0.0 {
            let _ = writeln!(
                s,
                r##"<line x1="{x:.3}" y1="{y1:.3}" x2="{x:.3}" y2="{y2:.3}" stroke="#bbbbbb"/>"##,
                x = sx(0.0),
                y1 = sy(-ylim),
                y2 = sy(ylim)
            );
        }
        let _ = writeln!(
            s,
            r##"<line x1="{x1:.3}" y1="{y:.3}" x2="{x2:.3}" y2="{y:.3}" stroke="#bbbbbb"/>"##,
            x1 = sx(lo),
            x2 = sx(hi),
            y = sy(0.0)
        );
        let (d0, d1) = (lo.max(-ylim), hi.min(ylim));
        if d0 < d1 {
            let _ = writeln!(
                s,
                r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="black" stroke-dasharray="6,4"/>"#,
                sx(d0),
                sy(d0),
                sx(d1),
                sy(d1)
            );
        }
        let points: Vec<String> = self.samples.iter().map(|(x, y)| format!("{:.3},{:.3}", sx(*x), sy(*y))).collect();
        let _ = writeln!(s, r#"<polyline fill="none" stroke="blue" stroke-width="2" points="{}"/>"#, points.join(" "));
        for fp in &self.fixed_points {
            let fill = if fp.stability == Stability::Attracting { "red" } else { "white" };
            let _ = writeln!(
                s,
                r#"<circle cx="{:.3}" cy="{:.3}" r="5" fill="{fill}" stroke="red" stroke-width="2"/>"#,
                sx(fp.x),
                sy(fp.x)
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="320" y="30" text-anchor="middle" font-family="sans-serif" font-size="14">phi(x) = {} tanh(x + {} sin x)</text>"#,
            self.params.beta, self.params.alpha
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.3}" y="390" text-anchor="middle" font-family="sans-serif" font-size="12">x_t in [{lo}, {hi}]</text>"#,
            SVG_W / 2.0
        );
        s.push_str("</svg>\n");
        s
    }
}

/// Writes `<stem>.csv` and, if `svg`, `<stem>.svg` into `dir`.
pub fn emit_map_plot(plot: &MapPlot, dir: &Path, stem: &str, svg: bool) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    let csv = dir.join(format!("{stem}.csv"));
    fs::write(&csv, plot.to_csv()).map_err(|e| Error::io(&csv, e))?;
    written.push(csv);
    if svg {
        let path = dir.join(format!("{stem}.svg"));
        fs::write(&path, plot.to_svg()).map_err(|e| Error::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}

pub fn emit_trajectory(record: &TrajectoryRecord, path: &Path) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    fs::write(path, record.to_csv()).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(alpha: f64, beta: f64) -> ScalarParams {
        ScalarParams::new(alpha, beta).unwrap()
    }

    /// Independent root oracle: plain bisection on `Φ(x) − x` written out
    /// from the closed form.
    fn bisection_oracle(alpha: f64, beta: f64, mut a: f64, mut b: f64) -> f64 {
        let g = |x: f64| beta * (x + alpha * x.sin()).tanh() - x;
        assert!(g(a) * g(b) < 0.0);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if g(m) * g(a) > 0.0 {
                a = m
            } else {
                b = m
            }
        }
        0.5 * (a + b)
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi(&p(0.8, 0.5), 0.0).unwrap(), 0.0);
        assert!((phi(&p(0.8, 0.6), 50.0).unwrap() - 0.6).abs() < 1e-12);
        let q = p(0.8, 0.6);
        assert!(phi(&q, 0.26).unwrap() > 0.26);
        assert!(phi(&q, 0.27).unwrap() < 0.27);
        let root = bisection_oracle(0.8, 0.6, 0.26, 0.27);
        assert!((0.26..0.27).contains(&root));
        assert!(matches!(phi(&q, f64::NAN), Err(Error::NonFinite { .. })));
        assert!(matches!(phi(&q, f64::INFINITY), Err(Error::NonFinite { .. })));
    }

    #[test]
    fn derivative_examples() {
        assert!((phi_derivative(&p(0.8, 0.5), 0.0).unwrap() - 0.9).abs() < 1e-15);
        for (a, b) in [(0.8, 0.5), (0.3, 0.9), (0.0, 0.2)] {
            let x = std::f64::consts::PI;
            let sech2 = 1.0 / x.cosh().powi(2);
            assert!((phi_derivative(&p(a, b), x).unwrap() - b * sech2 * (1.0 - a)).abs() < 1e-12);
        }
        let q = p(0.8, 0.6);
        let h = 1e-6;
        let fd = (phi(&q, 0.5 + h).unwrap() - phi(&q, 0.5 - h).unwrap()) / (2.0 * h);
        assert!((phi_derivative(&q, 0.5).unwrap() - fd).abs() < 1e-6);
    }

    #[test]
    fn contraction_examples() {
        let r = contraction_report(&p(0.8, 0.5)).unwrap();
        assert_eq!(r.bound, 0.9);
        assert!(r.is_certified);
        assert!(r.empirical_max <= r.bound + 1e-9);
        let r = contraction_report(&p(0.8, 0.6)).unwrap();
        assert!((r.bound - 1.08).abs() < 1e-15);
        assert!(!r.is_certified);
        let r = contraction_report(&p(0.0, 0.99)).unwrap();
        assert_eq!(r.bound, 0.99);
        assert!(r.is_certified);
    }

    #[test]
    fn projection_examples() {
        let half = p(0.8, 0.5).with_epsilon(0.5).unwrap();
        assert_eq!(project(&half, 0.74), 0.5);
        assert_eq!(project(&half, 0.75), 1.0);
        assert_eq!(project(&half, 0.25), 0.0);
        assert_eq!(project(&half, -0.75), -1.0);
        assert_eq!(project(&half, project(&half, 0.75)), 1.0);
        let fine = p(0.8, 0.5).with_epsilon(1e-6).unwrap();
        assert_eq!(project(&fine, 0.0), 0.0);
        assert_eq!(project(&fine, -0.0).to_bits(), 0.0f64.to_bits());
    }

    #[test]
    fn iterate_examples() {
        let q = p(0.8, 0.5);
        let rec = iterate(&q, 3.0).unwrap();
        match rec.status {
            TrajectoryStatus::Converged { fixed_point, .. } => assert!(fixed_point.abs() < 1e-8),
            s => panic!("unexpected {s:?}"),
        }
        assert!(rec.steps() <= 200, "{} steps", rec.steps());
        assert_eq!(rec.samples[0], (0, 3.0));

        let rec = iterate(&q, 0.0).unwrap();
        assert_eq!(rec.status, TrajectoryStatus::Converged { fixed_point: 0.0, step: 0 });

        let rec = iterate(&p(0.8, 0.6), 0.1).unwrap();
        let TrajectoryStatus::Converged { fixed_point, .. } = rec.status else { panic!("{:?}", rec.status) };
        let oracle = bisection_oracle(0.8, 0.6, 0.2, 0.3);
        assert!((0.2..0.3).contains(&fixed_point));
        assert!((fixed_point - oracle).abs() < 1e-8);
    }

    #[test]
    fn iterate_follows_projected_map() {
        let q = p(0.8, 0.6).with_epsilon(1e-3).unwrap();
        let rec = iterate(&q, -2.5).unwrap();
        for w in rec.samples.windows(2) {
            assert_eq!(w[1].1, project(&q, phi(&q, w[0].1).unwrap()));
            assert_eq!(w[1].0, w[0].0 + 1);
        }
    }

    #[test]
    fn coarse_grid_cycle_is_detected() {
        // Φ'(x) < −1 near the outer fixed points for α = β = 4; on a 0.25
        // grid the iterates settle into a 2-cycle.
        let q = ScalarParams { alpha: 4.0, beta: 4.0, epsilon: 0.25, tol: 1e-10, max_iter: 1000 };
        let rec = iterate(&q, 2.0).unwrap();
        assert_eq!(rec.status, TrajectoryStatus::CycleDetected { period: 2 });
        let n = rec.samples.len();
        assert_eq!(rec.samples[n - 1].1, rec.samples[n - 3].1);

        let capped = ScalarParams { max_iter: 1, ..p(0.8, 0.5) };
        assert_eq!(iterate(&capped, 3.0).unwrap().status, TrajectoryStatus::MaxIterReached);
    }

    #[test]
    fn fixed_point_examples() {
        let fps = find_fixed_points(&p(0.8, 0.5), -3.0, 3.0).unwrap();
        assert_eq!(fps.len(), 1);
        assert_eq!(fps[0].x, 0.0);
        assert_eq!(fps[0].stability, Stability::Attracting);

        let fps = find_fixed_points(&p(0.8, 0.6), -3.0, 3.0).unwrap();
        assert_eq!(fps.len(), 3);
        assert!(fps[1].x.abs() < 1e-10);
        assert_eq!(fps[1].stability, Stability::Repelling);
        assert_eq!(fps[0].stability, Stability::Attracting);
        assert_eq!(fps[2].stability, Stability::Attracting);
        assert!((fps[0].x + fps[2].x).abs() < 1e-9);
        assert!((fps[2].x - bisection_oracle(0.8, 0.6, 0.2, 0.3)).abs() < 1e-10);

        assert!(find_fixed_points(&p(0.8, 0.6), 5.0, 6.0).unwrap().is_empty());
        assert!(find_fixed_points(&p(0.8, 0.6), 1.0, 1.0).is_err());
    }

    #[test]
    fn params_are_validated() {
        assert!(ScalarParams::new(-0.1, 0.5).is_err());
        assert!(ScalarParams::new(0.1, 0.0).is_err());
        assert!(p(0.1, 0.5).with_epsilon(0.0).is_err());
    }

    #[test]
    fn plot_examples() {
        let plot = map_plot(&p(0.8, 0.6), -3.0, 3.0).unwrap();
        assert_eq!(plot.samples.len(), PLOT_SAMPLES);
        assert!(plot.samples.iter().all(|(_, y)| y.abs() < 0.6));
        assert_eq!(plot.fixed_points, find_fixed_points(&p(0.8, 0.6), -3.0, 3.0).unwrap());
        let csv = plot.to_csv();
        assert!(csv.starts_with("x,phi,diag\n"));
        assert_eq!(csv.lines().count(), PLOT_SAMPLES + 1);
        let svg = plot.to_svg();
        assert!(svg.contains(r#"width="640" height="400""#));
        assert_eq!(svg.matches("<circle").count(), 3);

        let flat = map_plot(&p(0.0, 0.5), -3.0, 3.0).unwrap();
        for (x, y) in flat.samples {
            assert!((y - 0.5 * x.tanh()).abs() < 1e-15);
        }
    }

    #[test]
    fn fmt17_has_seventeen_digits() {
        let s = fmt17(0.1);
        let mantissa = s.split('e').next().unwrap().replace(['.', '-'], "");
        assert_eq!(mantissa.len(), 17);
        assert_eq!(s.parse::<f64>().unwrap(), 0.1);
    }
}
