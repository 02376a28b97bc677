//! Semi-implicit solver for the graphical flow `du/dt = u'' / (1 + u'^2)`:
//! the slope is lagged from the current state and the resulting linear
//! tridiagonal system is solved implicitly. Endpoints are either held at
//! Dirichlet values or pinned to the reflection axis.

use alloc::vec;

use crate::curve::{FlowTrajectory, SampledGraph, Snapshot, StepStats};
use crate::error::{Error, Result};
use crate::math;
use crate::tridiag;

/// Endpoint condition for the graphical solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BcEnd {
    /// Endpoint held at the given abscissa.
    Dirichlet(f64),
    /// Endpoint pinned to `x = 0` on the reflection axis (odd closure).
    /// Near-axis dynamics belong to the parametric solver; this keeps
    /// slab-interior comparisons honest.
    FreeAxis,
}

/// Pair of endpoint conditions, low end then high end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphBc {
    pub lo: BcEnd,
    pub hi: BcEnd,
}

impl GraphBc {
    pub const fn dirichlet(lo: f64, hi: f64) -> Self {
        GraphBc {
            lo: BcEnd::Dirichlet(lo),
            hi: BcEnd::Dirichlet(hi),
        }
    }

    pub const fn free_axis() -> Self {
        GraphBc {
            lo: BcEnd::FreeAxis,
            hi: BcEnd::FreeAxis,
        }
    }
}

/// One semi-implicit step of the graphical flow.
pub fn step_graph(u: &SampledGraph, dt: f64, bc: &GraphBc) -> Result<SampledGraph> {
    let dy = u.dy();
    if !(dt > 0.0) || dt > dy {
        return Err(Error::StepTooLarge { dt, limit: dy });
    }
    let n = u.len();
    let vals = u.values();

    let mut lower = vec![0.0; n - 1];
    let mut diag = vec![1.0; n];
    let mut upper = vec![0.0; n - 1];
    let mut rhs = vals.to_vec();

    let r = dt / (dy * dy);
    for i in 1..n - 1 {
        let slope = (vals[i + 1] - vals[i - 1]) / (2.0 * dy);
        let c = r / (1.0 + slope * slope);
        lower[i - 1] = -c;
        diag[i] = 1.0 + 2.0 * c;
        upper[i] = -c;
    }
    match bc.lo {
        BcEnd::Dirichlet(v) => {
            diag[0] = 1.0;
            upper[0] = 0.0;
            rhs[0] = v;
        }
        BcEnd::FreeAxis => {
            diag[0] = 1.0;
            upper[0] = 0.0;
            rhs[0] = 0.0;
        }
    }
    match bc.hi {
        BcEnd::Dirichlet(v) => {
            diag[n - 1] = 1.0;
            lower[n - 2] = 0.0;
            rhs[n - 1] = v;
        }
        BcEnd::FreeAxis => {
            diag[n - 1] = 1.0;
            lower[n - 2] = 0.0;
            rhs[n - 1] = 0.0;
        }
    }
    let next = tridiag::solve(&lower, &mut diag, &upper, &mut rhs)?;
    SampledGraph::new(u.y_lo(), u.y_hi(), next)
}

/// Boundary angles `theta = arctan u'` from one-sided second-order
/// differences at each endpoint.
pub fn boundary_angles(u: &SampledGraph) -> (f64, f64) {
    let n = u.len();
    let v = u.values();
    let dy = u.dy();
    let d_lo = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * dy);
    let d_hi = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * dy);
    (math::atan(d_lo), math::atan(d_hi))
}

/// Maximum |curvature| of the graph, `|u''| / (1 + u'^2)^{3/2}` on the
/// interior stencil.
pub fn graph_max_curvature(u: &SampledGraph) -> f64 {
    let n = u.len();
    let v = u.values();
    let dy = u.dy();
    let mut worst = 0.0f64;
    for i in 1..n - 1 {
        let slope = (v[i + 1] - v[i - 1]) / (2.0 * dy);
        let second = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (dy * dy);
        let denom = (1.0 + slope * slope) * math::sqrt(1.0 + slope * slope);
        worst = worst.max(math::fabs(second / denom));
    }
    worst
}

/// Evolve with time-dependent boundary data supplied by `bc_at` (called
/// with the time the step lands on). Snapshots are recorded every
/// `snapshot_dt` of flow time plus the initial and final states.
pub fn evolve_graph_with(
    u0: &SampledGraph,
    t0: f64,
    t1: f64,
    dt: f64,
    snapshot_dt: f64,
    mut bc_at: impl FnMut(f64) -> GraphBc,
) -> Result<FlowTrajectory> {
    if !(t0 < t1) {
        return Err(Error::InvalidInput {
            reason: "evolution needs t0 < t1",
        });
    }
    let mut traj = FlowTrajectory::new();
    let mut u = u0.clone();
    let mut t = t0;
    traj.push(
        t,
        Snapshot::Graph(u.clone()),
        StepStats {
            dt: 0.0,
            max_curvature: graph_max_curvature(&u),
            remeshed: false,
        },
    )?;
    let mut next_snap = t0 + snapshot_dt;
    while t < t1 {
        let step = dt.min(t1 - t);
        let t_next = if t1 - t <= dt { t1 } else { t + step };
        u = step_graph(&u, step, &bc_at(t_next))?;
        t = t_next;
        if t >= next_snap - 1e-12 || t >= t1 {
            traj.push(
                t,
                Snapshot::Graph(u.clone()),
                StepStats {
                    dt: step,
                    max_curvature: graph_max_curvature(&u),
                    remeshed: false,
                },
            )?;
            while next_snap <= t + 1e-12 {
                next_snap += snapshot_dt;
            }
        }
    }
    Ok(traj)
}

/// Evolve with fixed boundary conditions.
pub fn evolve_graph(
    u0: &SampledGraph,
    t0: f64,
    t1: f64,
    dt: f64,
    bc: &GraphBc,
    snapshot_dt: f64,
) -> Result<FlowTrajectory> {
    let bc = *bc;
    evolve_graph_with(u0, t0, t1, dt, snapshot_dt, move |_| bc)
}
