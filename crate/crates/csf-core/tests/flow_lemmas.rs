//! Flow-level oracles for the glued curves: conservation of the signed
//! area between rungs, one-sided ordering, and reaper-barrier
//! domination, measured on paired parametric evolutions.

use csf_core::analysis::{min_gap_on_common_grid, signed_area_between};
use csf_core::curve::{graph_from_curve, reflect_close, SampledGraph, Snapshot};
use csf_core::exact::{grim_scaled, GrimSpec};
use csf_core::gluing::{build_broken_ladder, ladder_derive, LadderConfig};
use csf_core::param_flow::{evolve_param, ParamRun, StepController};

const PI: f64 = std::f64::consts::PI;

struct PairedRun {
    times: Vec<f64>,
    lower: Vec<SampledGraph>,
    upper: Vec<SampledGraph>,
}

/// Evolve the 0-rung and n-rung reflected ladders from the same start
/// time with the same snapshot cadence and extract graphs per frame.
fn paired_ladder_run(cfg: &LadderConfig, alpha: f64, t_end: f64, dt_max: f64) -> PairedRun {
    let dl = ladder_derive(cfg).unwrap();
    let cfg0 = cfg.truncated(0);
    let dl0 = ladder_derive(&cfg0).unwrap();

    let n_build = 64 * (cfg.n() + 1) * 8;
    let g_hi = build_broken_ladder(cfg, &dl, -alpha, n_build).unwrap();
    let g_lo = build_broken_ladder(&cfg0, &dl0, -alpha, 512).unwrap();

    let run = |g: &SampledGraph| -> ParamRun {
        let c = reflect_close(g).unwrap();
        let mut ctrl = StepController::new(dt_max, c.arclength() / 1800.0);
        ctrl.snapshot_dt = 0.25;
        evolve_param(&c, -alpha, t_end, &ctrl).unwrap()
    };
    let run_hi = run(&g_hi);
    let run_lo = run(&g_lo);

    let extract = |run: &ParamRun| -> (Vec<f64>, Vec<SampledGraph>) {
        let mut times = Vec::new();
        let mut graphs = Vec::new();
        for (i, snap) in run.trajectory.snapshots().iter().enumerate() {
            if let Snapshot::Curve(c) = snap {
                times.push(run.trajectory.times()[i]);
                graphs.push(graph_from_curve(c, 1, 1200).unwrap());
            }
        }
        (times, graphs)
    };
    let (t_hi, upper) = extract(&run_hi);
    let (t_lo, lower) = extract(&run_lo);
    // Frames line up because cadence and endpoints match.
    assert_eq!(t_hi.len(), t_lo.len());
    for (a, b) in t_hi.iter().zip(t_lo.iter()) {
        assert!((a - b).abs() < 1e-9);
    }
    PairedRun {
        times: t_hi,
        lower,
        upper,
    }
}

#[test]
fn rung_area_is_conserved_along_the_flow() {
    let budget = 4.0;
    let cfg = LadderConfig::new(vec![1.0], vec![3.0], budget).unwrap();
    let alpha = 12.0;
    let pair = paired_ladder_run(&cfg, alpha, -4.5, 1e-3);

    let target = budget; // budget * a_1^{-2}
    let mut worst = 0.0f64;
    for k in 0..pair.times.len() {
        let area = signed_area_between(&pair.lower[k], &pair.upper[k]).unwrap();
        worst = worst.max((area - target).abs());
    }
    assert!(
        worst <= 0.005 * target,
        "area drift {worst} exceeds 0.5% of {target}"
    );
}

#[test]
fn higher_rung_stays_above_lower_rung() {
    let cfg = LadderConfig::new(vec![1.0], vec![3.0], 4.0).unwrap();
    let alpha = 12.0;
    let pair = paired_ladder_run(&cfg, alpha, -4.5, 1e-3);

    // Settling window: the farthest shared point sits distance ~pi below
    // the rungs that differ, so gaps are decidable after s0 ~ 1.
    let settle = -alpha + 1.5;
    let mut checked = 0;
    for k in 0..pair.times.len() {
        if pair.times[k] < settle {
            continue;
        }
        let gap = min_gap_on_common_grid(&pair.upper[k], &pair.lower[k], 2).unwrap();
        assert!(
            gap >= -1e-6,
            "frame at t={} has ordering violation {gap}",
            pair.times[k]
        );
        checked += 1;
    }
    assert!(checked >= 10, "only {checked} frames in the window");
}

#[test]
fn rung_is_dominated_by_reaper_barrier() {
    let budget = 4.0;
    let cfg = LadderConfig::new(vec![1.0], vec![3.0], budget).unwrap();
    let dl = ladder_derive(&cfg).unwrap();
    let alpha = 12.0;
    let pair = paired_ladder_run(&cfg, alpha, -4.5, 1e-3);

    // Barrier: -G_1(y) + a_1 (t + C_1) on the first negative-lobe slab.
    let spec = GrimSpec::new(1.0, 0.0, -1, dl.c[1]).unwrap();
    let settle = -alpha + 1.5;
    let mut checked = 0;
    for k in 0..pair.times.len() {
        let t = pair.times[k];
        if t < settle {
            continue;
        }
        let g = &pair.upper[k];
        let mut margin = f64::NEG_INFINITY;
        for i in 0..g.len() {
            let y = g.grid_y(i);
            if y <= 0.05 || y >= PI - 0.05 {
                continue;
            }
            margin = margin.max(g.values()[i] - grim_scaled(&spec, t, y).unwrap());
        }
        assert!(
            margin < 1e-6,
            "frame at t={t} violates barrier domination by {margin}"
        );
        checked += 1;
    }
    assert!(checked >= 10);
}
