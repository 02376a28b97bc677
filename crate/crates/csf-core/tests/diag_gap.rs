use csf_core::curve::{graph_from_curve, reflect_close, Snapshot};
use csf_core::gluing::{build_broken_ladder, ladder_derive, LadderConfig};
use csf_core::param_flow::{evolve_param, StepController};

#[test]
fn gap_profile() {
    let cfg = LadderConfig::new(vec![1.0], vec![3.0], 4.0).unwrap();
    let dl = ladder_derive(&cfg).unwrap();
    let cfg0 = cfg.truncated(0);
    let dl0 = ladder_derive(&cfg0).unwrap();
    let alpha = 12.0;
    let g1 = build_broken_ladder(&cfg, &dl, -alpha, 1024).unwrap();
    let g0 = build_broken_ladder(&cfg0, &dl0, -alpha, 512).unwrap();
    let run = |g: &csf_core::curve::SampledGraph| {
        let c = reflect_close(g).unwrap();
        let mut ctrl = StepController::new(1e-3, c.arclength() / 1800.0);
        ctrl.snapshot_dt = 0.25;
        evolve_param(&c, -alpha, -9.75, &ctrl).unwrap()
    };
    let r1 = run(&g1);
    let r0 = run(&g0);
    let c1 = r1.trajectory.last_curve().unwrap();
    let c0 = r0.trajectory.last_curve().unwrap();
    println!("t = {}", r1.trajectory.times().last().unwrap());
    let e1 = graph_from_curve(c1, 1, 1200).unwrap();
    let e0 = graph_from_curve(c0, 1, 1200).unwrap();
    println!("dom1 = [{:.4},{:.4}]  dom0 = [{:.4},{:.4}]", e1.y_lo(), e1.y_hi(), e0.y_lo(), e0.y_hi());
    // gap profile on common domain
    let lo = e1.y_lo().max(e0.y_lo());
    let hi = e1.y_hi().min(e0.y_hi());
    let mut worst = (0.0, f64::INFINITY);
    for i in 0..600 {
        let y = lo + (hi - lo) * i as f64 / 599.0;
        let gap = e1.eval(y) - e0.eval(y);
        if gap < worst.1 {
            worst = (y, gap);
        }
    }
    println!("worst gap {:.5} at y={:.5} (hi={hi:.5})", worst.1, worst.0);
    for i in 0..12 {
        let y = worst.0 + (i as f64 - 6.0) * 0.01;
        if y < lo || y > hi { continue; }
        println!("  y={y:.4} g1={:.5} g0={:.5}", e1.eval(y), e0.eval(y));
    }
    let _ = Snapshot::Curve(c1.clone());
}
