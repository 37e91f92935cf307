//! Natural-parameter continuation of equilibrium families along mass paths.

use serde::Serialize;

use crate::model::{build_configuration_with, MassTriple, ModelOptions, PrimaryConfiguration};

use super::newton::{refine_with, NewtonSettings};
use super::{EquilibriumPoint, Label};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub initial_step: f64,
    pub min_step: f64,
    pub max_step: f64,
    /// Largest position change allowed in one accepted step.
    pub max_move: f64,
    pub newton: NewtonSettings,
    pub degeneracy_tol: f64,
    pub collision_tol: f64,
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            initial_step: 0.02,
            min_step: 1e-10,
            max_step: 0.1,
            max_move: 0.05,
            newton: NewtonSettings::default(),
            degeneracy_tol: 1e-8,
            collision_tol: crate::model::DEFAULT_COLLISION_TOL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Termination {
    PathEnd,
    Fold,
    Collision,
    /// Step halving stalled away from any fold.
    Stalled,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FoldPoint {
    pub masses: MassTriple,
    pub position: [f64; 2],
    pub det: f64,
    /// Path parameter of the fold within its segment.
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyTrace {
    pub label: Label,
    pub path: Vec<(MassTriple, [f64; 2])>,
    pub terminated_by: Termination,
    pub fold: Option<FoldPoint>,
}

impl FamilyTrace {
    pub fn last_position(&self) -> Option<[f64; 2]> {
        self.path.last().map(|s| s.1)
    }
}

/// Outcome of tracking one root along a straight mass segment.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentTrack {
    pub samples: Vec<(f64, [f64; 2])>,
    pub termination: Termination,
    pub fold: Option<FoldPoint>,
}

impl SegmentTrack {
    pub fn end(&self) -> Option<[f64; 2]> {
        match self.termination {
            Termination::PathEnd => self.samples.last().map(|s| s.1),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct MassSegment {
    a: MassTriple,
    b: MassTriple,
    opts: ModelOptions,
}

impl MassSegment {
    pub(crate) fn new(a: MassTriple, b: MassTriple, collision_tol: f64) -> Self {
        let opts = ModelOptions { collision_tol, ..ModelOptions::degenerate() };
        Self { a, b, opts }
    }

    fn length(&self) -> f64 {
        let d = [self.b.m1 - self.a.m1, self.b.m2 - self.a.m2, self.b.m3 - self.a.m3];
        d.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    pub(crate) fn masses(&self, t: f64) -> MassTriple {
        let l = |u: f64, v: f64| u + t * (v - u);
        MassTriple { m1: l(self.a.m1, self.b.m1), m2: l(self.a.m2, self.b.m2), m3: l(self.a.m3, self.b.m3) }
    }

    pub(crate) fn config(&self, t: f64) -> Option<PrimaryConfiguration> {
        let m = self.masses(t);
        if m.as_array().iter().any(|&v| v < 0.0) {
            return None;
        }
        build_configuration_with(m, &self.opts).ok()
    }

    /// ∂∇Ω/∂t at fixed position, by finite differences.
    fn grad_t(&self, z: [f64; 2], t: f64) -> Option<[f64; 2]> {
        let dt = (1e-7 / self.length().max(1e-300)).min(1e-4);
        let (lo, hi) = match (self.config(t - dt), self.config(t + dt)) {
            (Some(l), Some(h)) => ((l, t - dt), (h, t + dt)),
            (None, Some(h)) => ((self.config(t)?, t), (h, t + dt)),
            (Some(l), None) => ((l, t - dt), (self.config(t)?, t)),
            _ => return None,
        };
        let (g0, g1) = (lo.0.gradient(z), hi.0.gradient(z));
        let w = hi.1 - lo.1;
        Some([(g1[0] - g0[0]) / w, (g1[1] - g0[1]) / w])
    }

    fn det_t(&self, z: [f64; 2], t: f64) -> Option<f64> {
        let dt = (1e-6 / self.length().max(1e-300)).min(1e-3);
        let det = |t: f64| self.config(t).map(|c| c.gradient_hessian(z).1.det());
        match (det(t - dt), det(t + dt)) {
            (Some(l), Some(h)) => Some((h - l) / (2.0 * dt)),
            (None, Some(h)) => Some((h - det(t)?) / dt),
            (Some(l), None) => Some((det(t)? - l) / dt),
            _ => None,
        }
    }
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn tangent(seg: &MassSegment, cfg: &PrimaryConfiguration, z: [f64; 2], t: f64) -> [f64; 2] {
    let Some(gt) = seg.grad_t(z, t) else { return [0.0, 0.0] };
    let (_, h) = cfg.gradient_hessian(z);
    let det = h.det();
    if det == 0.0 || !det.is_finite() {
        return [0.0, 0.0];
    }
    [-(h.yy * gt[0] - h.xy * gt[1]) / det, -(-h.xy * gt[0] + h.xx * gt[1]) / det]
}

/// Tracks a root from masses `a` to masses `b` along the straight segment.
pub fn track_segment(
    z0: [f64; 2],
    a: MassTriple,
    b: MassTriple,
    control: &StepControl,
) -> SegmentTrack {
    let seg = MassSegment::new(a, b, control.collision_tol);
    let mut samples = vec![(0.0, z0)];
    if seg.length() < 1e-15 {
        samples.push((1.0, z0));
        return SegmentTrack { samples, termination: Termination::PathEnd, fold: None };
    }
    let Some(mut cfg) = seg.config(0.0) else {
        return SegmentTrack { samples, termination: Termination::Collision, fold: None };
    };
    let (mut t, mut z) = (0.0, z0);
    let mut h = control.initial_step;
    let mut tan = tangent(&seg, &cfg, z, t);
    let mut det = cfg.gradient_hessian(z).1.det();
    while t < 1.0 {
        let step = h.min(1.0 - t);
        let t1 = if step >= 1.0 - t { 1.0 } else { t + step };
        let near = cfg.nearest_primary(z).1;
        let max_move = control.max_move.min(0.3 * near);
        let pred = [z[0] + step * tan[0], z[1] + step * tan[1]];
        let accepted = seg.config(t1).and_then(|c1| {
            if dist(pred, z) > max_move {
                return None;
            }
            let s = NewtonSettings { max_iter: 15, basin: max_move, polish_steps: 1, ..control.newton };
            let r = refine_with(pred, &c1, &s).ok()?;
            let z1 = r.point.position;
            let d1 = r.point.degeneracy;
            let sign_flip = det.signum() != d1.signum() && det.abs() > 1e-12 && d1.abs() > 1e-12;
            (dist(z1, z) <= max_move && !sign_flip).then_some((c1, z1, d1))
        });
        match accepted {
            Some((c1, z1, d1)) => {
                t = t1;
                z = z1;
                det = d1;
                cfg = c1;
                samples.push((t, z));
                tan = tangent(&seg, &cfg, z, t);
                h = (1.5 * h).min(control.max_step);
            }
            None => {
                h *= 0.5;
                if h < control.min_step {
                    return stalled(&seg, samples, z, t, control);
                }
            }
        }
    }
    SegmentTrack { samples, termination: Termination::PathEnd, fold: None }
}

fn stalled(
    seg: &MassSegment,
    samples: Vec<(f64, [f64; 2])>,
    z: [f64; 2],
    t: f64,
    control: &StepControl,
) -> SegmentTrack {
    if let Some(f) = fold_solve(seg, z, t) {
        if f.det.abs() < control.degeneracy_tol && dist(f.position, z) < 0.05 && f.t >= t - 1e-3 {
            return SegmentTrack { samples, termination: Termination::Fold, fold: Some(f) };
        }
    }
    let near = seg.config(t).map(|c| c.nearest_primary(z).1).unwrap_or(0.0);
    let termination = if near < 1e3 * control.collision_tol { Termination::Collision } else { Termination::Stalled };
    SegmentTrack { samples, termination, fold: None }
}

/// Solves ∇Ω = 0, det H = 0 for (x, y, t) starting near a fold.
fn fold_solve(seg: &MassSegment, z0: [f64; 2], t0: f64) -> Option<FoldPoint> {
    let (mut z, mut t) = (z0, t0);
    let mut best: Option<(f64, FoldPoint)> = None;
    for _ in 0..40 {
        let cfg = seg.config(t)?;
        let near = cfg.nearest_primary(z).1;
        let (g, h) = cfg.gradient_hessian(z);
        let det = h.det();
        let scale = near.powi(-3).max(1.0);
        let res = g[0].hypot(g[1]) + det.abs() / (scale * scale);
        if best.as_ref().map_or(true, |b| res < b.0) {
            best = Some((res, FoldPoint { masses: seg.masses(t), position: z, det, t }));
        }
        if g[0].hypot(g[1]) < 1e-13 && det.abs() < 1e-13 * scale * scale {
            break;
        }
        let gt = seg.grad_t(z, t)?;
        let e = 1e-6 * near;
        let dd = |p: [f64; 2]| cfg.gradient_hessian(p).1.det();
        let dx = (dd([z[0] + e, z[1]]) - dd([z[0] - e, z[1]])) / (2.0 * e);
        let dy = (dd([z[0], z[1] + e]) - dd([z[0], z[1] - e])) / (2.0 * e);
        let dt = seg.det_t(z, t)?;
        let j = [[h.xx, h.xy, gt[0]], [h.xy, h.yy, gt[1]], [dx, dy, dt]];
        let du = solve3(j, [g[0], g[1], det])?;
        let lim = 0.2 * near;
        let step = du[0].hypot(du[1]);
        let damp = if step > lim { lim / step } else { 1.0 };
        z = [z[0] - damp * du[0], z[1] - damp * du[1]];
        t -= damp * du[2];
        if !t.is_finite() {
            return None;
        }
    }
    best.map(|b| b.1)
}

fn solve3(a: [[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let mut m = [[0.0; 4]; 3];
    for i in 0..3 {
        m[i][..3].copy_from_slice(&a[i]);
        m[i][3] = b[i];
    }
    for c in 0..3 {
        let p = (c..3).max_by(|&i, &k| m[i][c].abs().total_cmp(&m[k][c].abs()))?;
        if m[p][c] == 0.0 || !m[p][c].is_finite() {
            return None;
        }
        m.swap(c, p);
        for r in c + 1..3 {
            let f = m[r][c] / m[c][c];
            for k in c..4 {
                m[r][k] -= f * m[c][k];
            }
        }
    }
    let mut x = [0.0; 3];
    for r in (0..3).rev() {
        let s: f64 = (r + 1..3).map(|k| m[r][k] * x[k]).sum();
        x[r] = (m[r][3] - s) / m[r][r];
    }
    Some(x)
}

/// Locates the fold of the family through `z` near parameter `t` of the segment a → b.
pub fn locate_fold(
    z: [f64; 2],
    a: MassTriple,
    b: MassTriple,
    t: f64,
    collision_tol: f64,
) -> Option<FoldPoint> {
    fold_solve(&MassSegment::new(a, b, collision_tol), z, t)
}

pub fn continue_family(
    start: &EquilibriumPoint,
    path: &[MassTriple],
    control: &StepControl,
) -> FamilyTrace {
    let mut trace = FamilyTrace {
        label: start.label,
        path: Vec::new(),
        terminated_by: Termination::PathEnd,
        fold: None,
    };
    let Some(first) = path.first() else { return trace };
    trace.path.push((*first, start.position));
    let mut z = start.position;
    for w in path.windows(2) {
        let seg = track_segment(z, w[0], w[1], control);
        let ms = MassSegment::new(w[0], w[1], control.collision_tol);
        for &(t, p) in seg.samples.iter().skip(1) {
            trace.path.push((ms.masses(t), p));
        }
        if seg.termination != Termination::PathEnd {
            trace.terminated_by = seg.termination;
            trace.fold = seg.fold;
            return trace;
        }
        z = seg.samples.last().map(|s| s.1).unwrap_or(z);
    }
    trace
}
