//! Closed-form curve shortening flow solutions: the Grim Reaper family,
//! the shrinking circle, and the Angenent oval. These serve both as
//! construction pieces for the glued initial data and as solver oracles.

use alloc::vec::Vec;

use crate::curve::{Point, PolyCurve};
use crate::error::{Error, Result};
use crate::math;

/// A rescaled, translated Grim Reaper `x = sign/a * G(a (y - base)) -
/// sign * a (t + time_offset)` living in the slab
/// `base < y < base + pi/a` and translating in `x` at speed `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrimSpec {
    /// Scale `a > 0`; ladder constructions use `a >= 1`.
    pub scale: f64,
    /// Lower slab ordinate.
    pub base: f64,
    /// +1 for a lobe opening in `+x`, -1 for `-x`.
    pub sign: i8,
    /// Additive time offset.
    pub time_offset: f64,
}

impl GrimSpec {
    pub fn new(scale: f64, base: f64, sign: i8, time_offset: f64) -> Result<Self> {
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::InvalidInput {
                reason: "grim reaper scale must be positive",
            });
        }
        Ok(GrimSpec {
            scale,
            base,
            sign,
            time_offset,
        })
    }

    /// Slab of validity `(base, base + pi/scale)`.
    pub fn slab(&self) -> (f64, f64) {
        (self.base, self.base + math::PI / self.scale)
    }
}

/// The unit profile `G(y) = ln sin y` on `(0, pi)`; `x = G(y) - t`
/// translates at unit speed under the flow.
pub fn grim_profile(y: f64) -> Result<f64> {
    if !(y > 0.0 && y < math::PI) {
        return Err(Error::DomainError { value: y });
    }
    Ok(math::ln(math::sin(y)))
}

/// Evaluate the rescaled reaper at flow time `t` and ordinate `y`.
///
/// `sign = -1` gives `-G_a(y) + a (t + tau)` (lobe opening in `-x`,
/// translating in `+x`); `sign = +1` gives `G_a(y) - a (t + tau)`.
/// Either way `value(t + s, y) - value(t, y) = -sign * a * s`.
pub fn grim_scaled(spec: &GrimSpec, t: f64, y: f64) -> Result<f64> {
    let (lo, hi) = spec.slab();
    if !(y > lo && y < hi) {
        return Err(Error::DomainError { value: y });
    }
    let a = spec.scale;
    let g = grim_profile(a * (y - spec.base))? / a;
    let shift = a * (t + spec.time_offset);
    Ok(if spec.sign < 0 { -g + shift } else { g - shift })
}

/// Radius of the shrinking circle `R(t) = sqrt(R0^2 - 2t)`.
pub fn shrinking_circle_radius(r0: f64, t: f64) -> Result<f64> {
    if !(r0 > 0.0) {
        return Err(Error::InvalidInput {
            reason: "initial radius must be positive",
        });
    }
    let extinction = 0.5 * r0 * r0;
    if t >= extinction {
        return Err(Error::Extinct { time: extinction });
    }
    Ok(math::sqrt(r0 * r0 - 2.0 * t))
}

/// Closed convex polyline sampling the locus `cosh y = e^{-t} cos x`
/// for `t < 0`, symmetric under both `x -> -x` and `y -> -y`.
///
/// Vertices are emitted exactly on the locus; the count is rounded down
/// to a multiple of four so the four quadrants mirror each other.
pub fn angenent_oval(t: f64, n: usize) -> Result<PolyCurve> {
    if !(t < 0.0) {
        return Err(Error::DomainError { value: t });
    }
    if n < 16 {
        return Err(Error::InvalidInput {
            reason: "oval needs at least 16 vertices",
        });
    }
    let x_max = math::acos(math::exp(t));
    let point_at = |phi: f64| -> Point {
        // Equal-angle parameter: clusters samples near the tips where
        // the ordinate has square-root behaviour.
        let x = x_max * math::sin(phi);
        let arg = (math::exp(-t) * math::cos(x)).max(1.0);
        Point::new(x, math::acosh(arg))
    };

    // Dense quadrant from the top (phi = 0) to the right tip (phi = pi/2),
    // then pick near-arclength-uniform parameters and re-evaluate exactly.
    let quarter = n / 4;
    let dense = 16 * quarter;
    let mut phis = Vec::with_capacity(dense + 1);
    let mut pts = Vec::with_capacity(dense + 1);
    for i in 0..=dense {
        let phi = 0.5 * math::PI * i as f64 / dense as f64;
        phis.push(phi);
        pts.push(point_at(phi));
    }
    let mut cum = Vec::with_capacity(dense + 1);
    cum.push(0.0);
    for i in 1..=dense {
        cum.push(cum[i - 1] + pts[i].dist(pts[i - 1]));
    }
    let total = cum[dense];

    let mut quad = Vec::with_capacity(quarter + 1);
    let mut seg = 0usize;
    for k in 0..=quarter {
        let target = total * k as f64 / quarter as f64;
        while seg + 1 < dense && cum[seg + 1] < target {
            seg += 1;
        }
        let span = cum[seg + 1] - cum[seg];
        let frac = if span > 0.0 {
            (target - cum[seg]) / span
        } else {
            0.0
        };
        let phi = phis[seg] + (phis[seg + 1] - phis[seg]) * frac;
        quad.push(point_at(phi));
    }
    // Pin the exact cardinal points.
    quad[0] = Point::new(0.0, math::acosh(math::exp(-t)));
    quad[quarter] = Point::new(x_max, 0.0);

    // Assemble counterclockwise from the right tip, mirroring the
    // quadrant exactly so the symmetries hold bit-for-bit.
    let mut verts = Vec::with_capacity(4 * quarter);
    for p in quad.iter().rev() {
        verts.push(*p);
    }
    for p in quad.iter().skip(1) {
        verts.push(Point::new(-p.x, p.y));
    }
    for p in quad.iter().rev().skip(1) {
        verts.push(Point::new(-p.x, -p.y));
    }
    for p in quad.iter().skip(1).take(quarter - 1) {
        verts.push(Point::new(p.x, -p.y));
    }
    PolyCurve::closed(verts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn profile_values() {
        assert_abs_diff_eq!(grim_profile(math::PI / 2.0).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            grim_profile(math::PI / 6.0).unwrap(),
            -0.6931471805599453,
            epsilon = 1e-12
        );
        assert!(matches!(grim_profile(0.0), Err(Error::DomainError { .. })));
        assert!(matches!(
            grim_profile(math::PI),
            Err(Error::DomainError { .. })
        ));
    }

    #[test]
    fn scaled_reaper_values() {
        let s = GrimSpec::new(2.0, 0.0, 1, 0.0).unwrap();
        assert_abs_diff_eq!(
            grim_scaled(&s, 0.0, math::PI / 4.0).unwrap(),
            0.0,
            epsilon = 1e-15
        );
        let s = GrimSpec::new(1.0, 0.0, -1, 0.0).unwrap();
        assert_abs_diff_eq!(
            grim_scaled(&s, -5.0, math::PI / 2.0).unwrap(),
            -5.0,
            epsilon = 1e-15
        );
        let s = GrimSpec::new(2.0, 0.0, -1, 0.0).unwrap();
        let expect = 0.25 * math::ln(2.0) - 6.0;
        assert_abs_diff_eq!(
            grim_scaled(&s, -3.0, math::PI / 8.0).unwrap(),
            expect,
            epsilon = 1e-12
        );
        assert!(matches!(
            grim_scaled(&s, 0.0, 2.0),
            Err(Error::DomainError { .. })
        ));
    }

    #[test]
    fn translation_contract() {
        for &(a, sign) in &[(1.0, 1i8), (2.5, -1i8)] {
            let spec = GrimSpec::new(a, 0.3, sign, 0.7).unwrap();
            let y = 0.3 + 0.5 * math::PI / a;
            let v0 = grim_scaled(&spec, 1.0, y).unwrap();
            let v1 = grim_scaled(&spec, 1.0 + 0.25, y).unwrap();
            let expect = -(sign as f64) * a * 0.25;
            assert_abs_diff_eq!(v1 - v0, expect, epsilon = 1e-12);
        }
    }

    #[test]
    fn reaper_diverges_toward_slab_edges() {
        let spec = GrimSpec::new(2.0, 0.0, 1, 0.0).unwrap();
        let apex = grim_scaled(&spec, 0.0, math::PI / 4.0).unwrap();
        let near_edge = grim_scaled(&spec, 0.0, 1e-6).unwrap();
        assert!(near_edge < apex - 5.0);
        let spec_neg = GrimSpec::new(2.0, 0.0, -1, 0.0).unwrap();
        assert!(grim_scaled(&spec_neg, 0.0, 1e-6).unwrap() > 5.0);
    }

    #[test]
    fn circle_radius() {
        assert_abs_diff_eq!(shrinking_circle_radius(1.0, 0.0).unwrap(), 1.0);
        assert_abs_diff_eq!(shrinking_circle_radius(1.0, 0.375).unwrap(), 0.5);
        assert!(matches!(
            shrinking_circle_radius(1.0, 0.5),
            Err(Error::Extinct { .. })
        ));
    }

    #[test]
    fn circle_invariant_r2_plus_2t() {
        for i in 0..20 {
            let t = -1.0 + i as f64 * 0.07;
            let r = shrinking_circle_radius(1.0, t).unwrap();
            assert_abs_diff_eq!(r * r + 2.0 * t, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn oval_slice_and_residual() {
        let t = -math::ln(2.0);
        let oval = angenent_oval(t, 64).unwrap();
        // y = 0 slice at x = +-arccos(e^t) = +-pi/3.
        let tip = oval
            .vertices()
            .iter()
            .cloned()
            .fold(Point::new(f64::NEG_INFINITY, 0.0), |m, p| {
                if p.x > m.x {
                    p
                } else {
                    m
                }
            });
        assert_abs_diff_eq!(tip.x, math::PI / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(tip.y, 0.0, epsilon = 1e-12);
        // Every vertex sits on the locus.
        for p in oval.vertices() {
            let residual = math::fabs(math::cosh(p.y) - math::exp(-t) * math::cos(p.x));
            assert!(residual <= 1e-10, "residual {residual}");
        }
    }

    #[test]
    fn oval_symmetries() {
        let oval = angenent_oval(-0.7, 100).unwrap();
        assert_eq!(oval.len(), 100);
        assert!(oval.reflection_asymmetry() <= 1e-12);
        assert_eq!(oval.orientation, 1);
        assert!(matches!(
            angenent_oval(0.0, 64),
            Err(Error::DomainError { .. })
        ));
    }

    /// Finite-difference residual of the graphical flow equation for the
    /// translating reaper: du/dt - u'' / (1 + u'^2) should vanish.
    #[test]
    fn translating_soliton_residual() {
        for &a in &[1.0, 2.0] {
            let spec = GrimSpec::new(a, 0.0, 1, 0.0).unwrap();
            let h = 1e-4;
            let guard = 0.1 / a;
            let (lo, hi) = spec.slab();
            let mut y = lo + guard;
            let mut worst = 0.0f64;
            while y < hi - guard {
                let um2 = grim_scaled(&spec, 0.0, y - 2.0 * h).unwrap();
                let um = grim_scaled(&spec, 0.0, y - h).unwrap();
                let u0 = grim_scaled(&spec, 0.0, y).unwrap();
                let up = grim_scaled(&spec, 0.0, y + h).unwrap();
                let up2 = grim_scaled(&spec, 0.0, y + 2.0 * h).unwrap();
                let du = (um2 - 8.0 * um + 8.0 * up - up2) / (12.0 * h);
                let ddu = (-um2 + 16.0 * um - 30.0 * u0 + 16.0 * up - up2) / (12.0 * h * h);
                let rhs = ddu / (1.0 + du * du);
                // du/dt = -sign * a = -a here.
                worst = worst.max(math::fabs(rhs - (-a)));
                y += guard / 7.0;
            }
            assert!(worst <= 1e-6, "a={a} residual {worst}");
        }
    }
}
