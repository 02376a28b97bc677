//! Glued initial data: broken ladder profiles made of clipped Grim
//! Reapers joined by straight lines, the oval piece (top lobe), the
//! two-reaper barrier profile, and the open cap barrier.
//!
//! All builders are exact piecewise evaluations; sampling onto a uniform
//! grid happens last. Reaper lobes are placed so that the signed area
//! between consecutive ladder rungs is `area_budget * a^{-2}` per rung
//! (the lobe pair's horizontal offset is `area_budget / (pi * a)`).

use alloc::vec::Vec;

use crate::curve::{Point, PolyCurve, SampledGraph};
use crate::error::{Error, Result};
use crate::exact::{grim_scaled, GrimSpec};
use crate::math;

/// Ladder construction parameters: reaper scales `a_1..a_n`, gluing
/// time gaps `B_1..B_n`, and the per-rung signed-area budget.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderConfig {
    /// Reaper scales, each `>= 1`.
    pub scales: Vec<f64>,
    /// Time gaps between consecutive gluing epochs, each `> 0`.
    pub gaps: Vec<f64>,
    /// Signed area between rung `n` and rung `n+1` is
    /// `area_budget * scales[n]^{-2}`.
    pub area_budget: f64,
}

impl LadderConfig {
    pub fn new(scales: Vec<f64>, gaps: Vec<f64>, area_budget: f64) -> Result<Self> {
        let cfg = LadderConfig {
            scales,
            gaps,
            area_budget,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// The default family `a_k = k` with a uniform gap.
    pub fn arithmetic(n: usize, gap: f64, area_budget: f64) -> Result<Self> {
        let scales = (1..=n).map(|k| k as f64).collect();
        let gaps = (0..n).map(|_| gap).collect();
        LadderConfig::new(scales, gaps, area_budget)
    }

    pub fn validate(&self) -> Result<()> {
        if self.scales.len() != self.gaps.len() {
            return Err(Error::InvalidConfig {
                reason: "scales and gaps must have equal length",
            });
        }
        if self.scales.iter().any(|a| !(*a >= 1.0) || !a.is_finite()) {
            return Err(Error::InvalidConfig {
                reason: "every scale must satisfy a >= 1",
            });
        }
        if self.gaps.iter().any(|b| !(*b > 0.0) || !b.is_finite()) {
            return Err(Error::InvalidConfig {
                reason: "every gap must be positive",
            });
        }
        if !(self.area_budget > 0.0) || !self.area_budget.is_finite() {
            return Err(Error::InvalidConfig {
                reason: "area budget must be positive",
            });
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.scales.len()
    }

    /// Prefix of the first `m` rungs.
    pub fn truncated(&self, m: usize) -> LadderConfig {
        LadderConfig {
            scales: self.scales[..m].to_vec(),
            gaps: self.gaps[..m].to_vec(),
            area_budget: self.area_budget,
        }
    }

    /// Diagnostic partial sum of `a_k^{-1}`; grows without bound for the
    /// halfplane family.
    pub fn sum_inv_scales(&self) -> f64 {
        self.scales.iter().map(|a| 1.0 / a).sum()
    }

    /// Diagnostic partial sum of `a_k^{-2}`; stays bounded.
    pub fn sum_inv_sq_scales(&self) -> f64 {
        self.scales.iter().map(|a| 1.0 / (a * a)).sum()
    }

    /// Tail sum of `a_k^{-2}` for `k >= from` (1-based), extending past
    /// the listed scales with unit increments (the default `a_k = k`
    /// family) until increments fall below 1e-10, plus the integral
    /// remainder for that extension.
    pub fn tail_inv_sq_sum(&self, from: usize) -> f64 {
        let mut acc = 0.0;
        for k in from..=self.n() {
            let a = self.scales[k - 1];
            acc += 1.0 / (a * a);
        }
        let mut a = match self.scales.last() {
            Some(last) if from <= self.n() => *last,
            _ => {
                // Tail starts past the listed scales.
                let base = self.scales.last().copied().unwrap_or(0.0);
                base + (from.saturating_sub(self.n() + 1)) as f64
            }
        };
        loop {
            a += 1.0;
            let term = 1.0 / (a * a);
            if term < 1e-10 {
                acc += 1.0 / a;
                break;
            }
            acc += term;
        }
        acc
    }
}

/// Prefix sums derived from a ladder: slab offsets `h` and gluing
/// epochs `c`, both with a leading zero.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedLadder {
    pub h: Vec<f64>,
    pub c: Vec<f64>,
}

impl DerivedLadder {
    /// Latest time at which the `n`-rung broken curve exists.
    pub fn latest_time(&self, n: usize) -> f64 {
        -self.c[n] - 1.0
    }

    /// Slab of the negative lobe of rung `m` (1-based).
    pub fn neg_slab(&self, m: usize, cfg: &LadderConfig) -> (f64, f64) {
        let base = 2.0 * math::PI * self.h[m - 1];
        (base, base + math::PI / cfg.scales[m - 1])
    }

    /// Slab of the positive lobe of rung `m` (1-based).
    pub fn pos_slab(&self, m: usize, cfg: &LadderConfig) -> (f64, f64) {
        let a = cfg.scales[m - 1];
        let base = 2.0 * math::PI * self.h[m - 1] + math::PI / a;
        (base, 2.0 * math::PI * self.h[m])
    }
}

/// Exact prefix sums `h_k = sum a_j^{-1}` and `c_k = sum B_j`.
pub fn ladder_derive(cfg: &LadderConfig) -> Result<DerivedLadder> {
    cfg.validate()?;
    let n = cfg.n();
    let mut h = Vec::with_capacity(n + 1);
    let mut c = Vec::with_capacity(n + 1);
    h.push(0.0);
    c.push(0.0);
    for k in 0..n {
        h.push(h[k] + 1.0 / cfg.scales[k]);
        c.push(c[k] + cfg.gaps[k]);
    }
    Ok(DerivedLadder { h, c })
}

/// One analytic piece of a broken profile.
#[derive(Debug, Clone)]
enum Piece {
    Line { y0: f64, y1: f64, u0: f64, u1: f64 },
    Reaper { y0: f64, y1: f64, spec: GrimSpec, t: f64 },
}

impl Piece {
    fn span(&self) -> (f64, f64) {
        match self {
            Piece::Line { y0, y1, .. } => (*y0, *y1),
            Piece::Reaper { y0, y1, .. } => (*y0, *y1),
        }
    }

    fn eval(&self, y: f64) -> f64 {
        match self {
            Piece::Line { y0, y1, u0, u1 } => {
                let frac = ((y - y0) / (y1 - y0)).clamp(0.0, 1.0);
                u0 * (1.0 - frac) + u1 * frac
            }
            Piece::Reaper { spec, t, .. } => {
                // Clamp a hair inside the slab; pieces end strictly
                // inside it, so this only guards roundoff at breakpoints.
                let (lo, hi) = spec.slab();
                let eps = 1e-12 / spec.scale;
                let yc = y.clamp(lo + eps, hi - eps);
                grim_scaled(spec, *t, yc).unwrap_or(0.0)
            }
        }
    }
}

/// A piecewise reaper-and-line graph with exact breakpoints.
#[derive(Debug, Clone)]
pub struct BrokenProfile {
    pieces: Vec<Piece>,
    y_lo: f64,
    y_hi: f64,
}

impl BrokenProfile {
    fn from_pieces(pieces: Vec<Piece>) -> Self {
        let y_lo = pieces.first().map(|p| p.span().0).unwrap_or(0.0);
        let y_hi = pieces.last().map(|p| p.span().1).unwrap_or(1.0);
        BrokenProfile { pieces, y_lo, y_hi }
    }

    pub fn y_lo(&self) -> f64 {
        self.y_lo
    }

    pub fn y_hi(&self) -> f64 {
        self.y_hi
    }

    /// Ordinates where adjacent pieces meet (piece boundaries).
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.pieces.len() + 1);
        for p in &self.pieces {
            out.push(p.span().0);
        }
        out.push(self.y_hi);
        out
    }

    /// Exact piecewise evaluation; clamps to the profile domain.
    pub fn eval(&self, y: f64) -> f64 {
        let yc = y.clamp(self.y_lo, self.y_hi);
        // Last piece whose start is <= yc.
        let mut lo = 0usize;
        let mut hi = self.pieces.len();
        while lo + 1 < hi {
            let mid = (lo + hi) / 2;
            if self.pieces[mid].span().0 <= yc {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        self.pieces[lo].eval(yc)
    }

    /// Sample onto a uniform grid.
    pub fn sample(&self, n: usize) -> Result<SampledGraph> {
        SampledGraph::from_fn(self.y_lo, self.y_hi, n, |y| self.eval(y))
    }
}

fn push_line(pieces: &mut Vec<Piece>, y0: f64, y1: f64, u0: f64, u1: f64) {
    if y1 > y0 {
        pieces.push(Piece::Line { y0, y1, u0, u1 });
    }
}

/// Clip ordinate half-width: `xi` with `sin xi = exp(arg)`, `arg < 0`.
fn clip_xi(arg: f64) -> f64 {
    debug_assert!(arg < 0.0);
    math::asin(math::exp(arg))
}

/// The broken ladder graph on `(-pi, 2 pi h_n)` at time
/// `t < -C_n - 1`: base reaper clipped at `x = 1`, then for each rung a
/// negative and a positive lobe clipped at `x = -+ 1/a_m`, all joined by
/// straight lines through the axis.
pub fn broken_ladder_profile(
    cfg: &LadderConfig,
    dl: &DerivedLadder,
    t: f64,
) -> Result<BrokenProfile> {
    cfg.validate()?;
    let n = cfg.n();
    let latest = dl.latest_time(n);
    if !(t < latest) {
        return Err(Error::TimeTooLate { t, latest });
    }
    let lambda = cfg.area_budget / math::PI;
    let mut pieces = Vec::new();

    // Base reaper in (-pi, 0), clipped at x = 1.
    let xi0 = clip_xi(1.0 + t);
    let y1 = -math::PI + xi0;
    let y2 = -xi0;
    push_line(&mut pieces, -math::PI, y1, 0.0, 1.0);
    pieces.push(Piece::Reaper {
        y0: y1,
        y1: y2,
        spec: GrimSpec::new(1.0, -math::PI, 1, 0.0)?,
        t,
    });
    push_line(&mut pieces, y2, 0.0, 1.0, 0.0);

    for m in 1..=n {
        let a = cfg.scales[m - 1];
        let inv_a = 1.0 / a;
        let s = t + dl.c[m];
        let base_neg = 2.0 * math::PI * dl.h[m - 1];
        let base_pos = base_neg + math::PI * inv_a;
        let top = 2.0 * math::PI * dl.h[m];

        let xi_neg = clip_xi(1.0 + a * a * s);
        let z1 = base_neg + xi_neg * inv_a;
        let z2 = base_neg + (math::PI - xi_neg) * inv_a;
        push_line(&mut pieces, base_neg, z1, 0.0, -inv_a);
        pieces.push(Piece::Reaper {
            y0: z1,
            y1: z2,
            spec: GrimSpec::new(a, base_neg, -1, dl.c[m])?,
            t,
        });
        push_line(&mut pieces, z2, base_pos, -inv_a, 0.0);

        let xi_pos = clip_xi(1.0 + a * a * s - lambda);
        let w1 = base_pos + xi_pos * inv_a;
        let w2 = base_pos + (math::PI - xi_pos) * inv_a;
        push_line(&mut pieces, base_pos, w1, 0.0, inv_a);
        pieces.push(Piece::Reaper {
            y0: w1,
            y1: w2,
            spec: GrimSpec::new(a, base_pos, 1, dl.c[m] - lambda * inv_a * inv_a)?,
            t,
        });
        push_line(&mut pieces, w2, top, inv_a, 0.0);
    }
    Ok(BrokenProfile::from_pieces(pieces))
}

/// Sampled broken ladder; `n_samples >= 64 (n + 1)`.
pub fn build_broken_ladder(
    cfg: &LadderConfig,
    dl: &DerivedLadder,
    t: f64,
    n_samples: usize,
) -> Result<SampledGraph> {
    if n_samples < 64 * (cfg.n() + 1) {
        return Err(Error::InvalidInput {
            reason: "ladder sampling needs at least 64 (n + 1) nodes",
        });
    }
    broken_ladder_profile(cfg, dl, t)?.sample(n_samples)
}

/// The top positive lobe of the `n`-rung ladder restricted to
/// `[2 pi h_{n-1} + pi / a_n, 2 pi h_n]`; for `n = 0` this is the whole
/// base rung.
pub fn broken_oval_profile(
    cfg: &LadderConfig,
    dl: &DerivedLadder,
    n: usize,
    t: f64,
) -> Result<BrokenProfile> {
    if n == 0 {
        return broken_ladder_profile(&cfg.truncated(0), &ladder_derive(&cfg.truncated(0))?, t);
    }
    if n > cfg.n() {
        return Err(Error::InvalidConfig {
            reason: "oval index exceeds ladder length",
        });
    }
    let latest = dl.latest_time(n);
    if !(t < latest) {
        return Err(Error::TimeTooLate { t, latest });
    }
    let lambda = cfg.area_budget / math::PI;
    let a = cfg.scales[n - 1];
    let inv_a = 1.0 / a;
    let s = t + dl.c[n];
    let base_pos = 2.0 * math::PI * dl.h[n - 1] + math::PI * inv_a;
    let top = 2.0 * math::PI * dl.h[n];

    let xi_pos = clip_xi(1.0 + a * a * s - lambda);
    let w1 = base_pos + xi_pos * inv_a;
    let w2 = base_pos + (math::PI - xi_pos) * inv_a;
    let mut pieces = Vec::new();
    push_line(&mut pieces, base_pos, w1, 0.0, inv_a);
    pieces.push(Piece::Reaper {
        y0: w1,
        y1: w2,
        spec: GrimSpec::new(a, base_pos, 1, dl.c[n] - lambda * inv_a * inv_a)?,
        t,
    });
    push_line(&mut pieces, w2, top, inv_a, 0.0);
    Ok(BrokenProfile::from_pieces(pieces))
}

/// Sampled oval piece.
pub fn build_broken_oval(
    cfg: &LadderConfig,
    dl: &DerivedLadder,
    n: usize,
    t: f64,
    n_samples: usize,
) -> Result<SampledGraph> {
    if n_samples < 64 {
        return Err(Error::InvalidInput {
            reason: "oval sampling needs at least 64 nodes",
        });
    }
    broken_oval_profile(cfg, dl, n, t)?.sample(n_samples)
}

/// Two-reaper barrier profile on `(0, 2 pi)` at time `t < -1`: an inner
/// lobe `-G(y) + t` clipped at `x = -1` and an outer lobe
/// `G(y - pi) - t + area_budget/pi` clipped at `x = 1`, joined linearly
/// through `(0, 0)`, `(0, pi)` and `(0, 2 pi)`. Its integral is
/// `area_budget + o(1)` as `t -> -infinity`.
pub fn barrier_profile(area_budget: f64, t: f64) -> Result<BrokenProfile> {
    if !(area_budget > 0.0) || !area_budget.is_finite() {
        return Err(Error::InvalidInput {
            reason: "barrier area budget must be positive",
        });
    }
    let lambda = area_budget / math::PI;
    let latest = (-1.0f64).min(lambda - 1.0);
    if !(t < latest) {
        return Err(Error::TimeTooLate { t, latest });
    }
    let xi_in = clip_xi(1.0 + t);
    let xi_out = clip_xi(1.0 + t - lambda);
    let pi = math::PI;
    let mut pieces = Vec::new();
    push_line(&mut pieces, 0.0, xi_in, 0.0, -1.0);
    pieces.push(Piece::Reaper {
        y0: xi_in,
        y1: pi - xi_in,
        spec: GrimSpec::new(1.0, 0.0, -1, 0.0)?,
        t,
    });
    push_line(&mut pieces, pi - xi_in, pi, -1.0, 0.0);
    push_line(&mut pieces, pi, pi + xi_out, 0.0, 1.0);
    pieces.push(Piece::Reaper {
        y0: pi + xi_out,
        y1: 2.0 * pi - xi_out,
        spec: GrimSpec::new(1.0, pi, 1, -lambda)?,
        t,
    });
    push_line(&mut pieces, 2.0 * pi - xi_out, 2.0 * pi, 1.0, 0.0);
    Ok(BrokenProfile::from_pieces(pieces))
}

/// Sampled barrier graph; `n_samples >= 128`. The full barrier curve
/// appends the ray `{(x, 0): x >= 0}` and reflects; see
/// [`assemble_barrier_curve`].
pub fn build_barrier_b(area_budget: f64, t: f64, n_samples: usize) -> Result<SampledGraph> {
    if n_samples < 128 {
        return Err(Error::InvalidInput {
            reason: "barrier sampling needs at least 128 nodes",
        });
    }
    barrier_profile(area_budget, t)?.sample(n_samples)
}

/// Open curve for the full barrier: incoming ray along `y = 0` from
/// `x = ray_len`, up the graph, back down its mirror, and out along the
/// mirrored ray. Endpoints are intended to be held fixed by the
/// parametric solver.
pub fn assemble_barrier_curve(
    graph: &SampledGraph,
    ray_len: f64,
    ray_samples: usize,
) -> Result<PolyCurve> {
    if !(ray_len > 0.0) || ray_samples < 2 {
        return Err(Error::InvalidInput {
            reason: "barrier ray needs positive length and >= 2 samples",
        });
    }
    let n = graph.len();
    let mut verts = Vec::with_capacity(2 * n + 2 * ray_samples);
    for i in 0..ray_samples {
        let x = ray_len * (1.0 - i as f64 / ray_samples as f64);
        verts.push(Point::new(x, 0.0));
    }
    // Graph start (0, y_lo) with y_lo = 0 joins the ray end.
    for i in 0..n {
        verts.push(Point::new(graph.values()[i], graph.grid_y(i)));
    }
    for i in (0..n - 1).rev() {
        verts.push(Point::new(-graph.values()[i], graph.grid_y(i)));
    }
    for i in 1..=ray_samples {
        let x = -ray_len * i as f64 / ray_samples as f64;
        verts.push(Point::new(x, 0.0));
    }
    // Drop exact duplicates at the axis joins.
    let mut cleaned: Vec<Point> = Vec::with_capacity(verts.len());
    for v in verts {
        if cleaned.last().map_or(true, |p| p.dist(v) > 1e-12) {
            cleaned.push(v);
        }
    }
    PolyCurve::open(cleaned)
}

/// Reflected cap barrier: the rung-`n` negative-lobe reaper at its
/// latest time, truncated at `x = x_max`, followed by a vertical wall at
/// `x = width` up to the cap ordinate `2 pi h_n + pi / a_{n+1}` and a
/// horizontal cap to the axis, then mirrored.
pub fn build_barrier_p(
    width: f64,
    cfg: &LadderConfig,
    dl: &DerivedLadder,
    n: usize,
    x_max: f64,
    n_samples: usize,
) -> Result<PolyCurve> {
    cfg.validate()?;
    if n == 0 || n >= cfg.n() + 1 {
        return Err(Error::InvalidConfig {
            reason: "cap barrier needs 1 <= n <= ladder length",
        });
    }
    if cfg.scales.len() < n + 1 {
        return Err(Error::InvalidConfig {
            reason: "cap barrier needs scale a_{n+1}",
        });
    }
    let a = cfg.scales[n - 1];
    if !(width > 0.0) {
        return Err(Error::InvalidInput {
            reason: "cap barrier width must be positive",
        });
    }
    if width >= a {
        return Err(Error::BarrierTooWide { width, max: a });
    }
    if !(x_max > width) || n_samples < 8 {
        return Err(Error::InvalidInput {
            reason: "cap barrier needs x_max > width and >= 8 samples",
        });
    }
    let base = 2.0 * math::PI * dl.h[n - 1];
    // Reaper lobe at its latest time: x = -G_a(y)/a + a * (-1).
    let xi_at = |x: f64| math::asin(math::exp(-a * (x + a)));
    let xi_start = xi_at(x_max);
    let xi_p = xi_at(width);
    let cap_y = 2.0 * math::PI * dl.h[n] + math::PI / cfg.scales[n];

    let mut verts = Vec::with_capacity(2 * n_samples + 6);
    for i in 0..n_samples {
        let xi = xi_start + (xi_p - xi_start) * i as f64 / (n_samples - 1) as f64;
        let y = base + xi / a;
        let x = -math::ln(math::sin(xi)) / a - a;
        verts.push(Point::new(x, y));
    }
    verts.push(Point::new(width, cap_y));
    verts.push(Point::new(0.0, cap_y));
    verts.push(Point::new(-width, cap_y));
    for i in (0..n_samples).rev() {
        let xi = xi_start + (xi_p - xi_start) * i as f64 / (n_samples - 1) as f64;
        let y = base + xi / a;
        let x = -math::ln(math::sin(xi)) / a - a;
        verts.push(Point::new(-x, y));
    }
    PolyCurve::open(verts)
}
