//! Routh, resonance and bifurcation curves in the (m1, m2) plane, and their
//! intersections with lines and with each other.

use rayon::prelude::*;
use serde::Serialize;

use crate::equilibria::{
    find_equilibria_in, inside_triangle, track_segment, FoldPoint, Label, NewtonSettings, SearchGrid,
    StepControl, Termination,
};
use crate::error::{ErfbpError, Result};
use crate::model::{build_configuration, routh_polynomial, MassTriple, MU_ROUTH};

use super::contour::{bracket_root, march, Lattice, PlanarCurve};
use super::family_field::FamilyField;
use super::grid::GridSpec;
use super::region_map::RegionMap;
use super::CurveKind;

/// Scalar function whose zero set defines a curve; `None` where undefined.
pub type Residual<'a> = &'a (dyn Fn([f64; 2]) -> Option<f64> + Sync);

/// The line `a·m1 + b·m2 = c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineSpec {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl LineSpec {
    pub const fn new(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c }
    }

    /// m1 = m2.
    pub const fn diagonal() -> Self {
        Self::new(1.0, -1.0, 0.0)
    }

    /// m1 = value.
    pub const fn m1(value: f64) -> Self {
        Self::new(1.0, 0.0, value)
    }

    /// m2 = value.
    pub const fn m2(value: f64) -> Self {
        Self::new(0.0, 1.0, value)
    }

    /// m3 = value, i.e. m1 + m2 = 1 - value.
    pub fn m3(value: f64) -> Self {
        Self::new(1.0, 1.0, 1.0 - value)
    }

    /// m1 = m3, i.e. m2 = 1 - 2 m1.
    pub const fn m1_eq_m3() -> Self {
        Self::new(2.0, 1.0, 1.0)
    }

    /// m2 = m3, i.e. m1 = 1 - 2 m2.
    pub const fn m2_eq_m3() -> Self {
        Self::new(1.0, 2.0, 1.0)
    }

    pub fn eval(&self, m: [f64; 2]) -> f64 {
        self.a * m[0] + self.b * m[1] - self.c
    }

    fn direction(&self) -> [f64; 2] {
        let n = self.a.hypot(self.b);
        [-self.b / n, self.a / n]
    }

    fn project(&self, m: [f64; 2]) -> [f64; 2] {
        let n2 = self.a * self.a + self.b * self.b;
        let g = self.eval(m) / n2;
        [m[0] - g * self.a, m[1] - g * self.b]
    }
}

/// Second operand of [`locate_curve_intersection`].
pub enum Target<'a> {
    Line(LineSpec),
    Curve(&'a PlanarCurve, Residual<'a>),
}

fn lerp(a: [f64; 2], b: [f64; 2], t: f64) -> [f64; 2] {
    [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn in_simplex(m: [f64; 2]) -> bool {
    m[0] >= 0.0 && m[1] >= 0.0 && m[0] + m[1] <= 1.0
}

/// Zero set of the Routh quantity inside the simplex, refined to 1e-12.
///
/// Marches a box containing the whole conic and clips the result at the
/// simplex edges, where the endpoints are the exact roots of m(1 - m) = 1/27.
pub fn routh_curve(resolution: usize) -> Vec<PlanarCurve> {
    let n = resolution.max(8) + 1;
    let (lo, hi) = (-0.35, 1.05);
    let h = (hi - lo) / (n - 1) as f64;
    let coord = |i: usize, j: usize| [lo + i as f64 * h, lo + j as f64 * h];
    let values: Vec<Option<f64>> =
        (0..n * n).map(|k| { let [a, b] = coord(k % n, k / n); Some(routh_polynomial(a, b)) }).collect();
    let lat = Lattice { nx: n, ny: n, values: &values };
    let f = |m: [f64; 2]| routh_polynomial(m[0], m[1]);
    let rings = march(
        &lat,
        coord,
        |a, b| {
            let (pa, pb) = (coord(a.0, a.1), coord(b.0, b.1));
            bracket_root(|t| Some(f(lerp(pa, pb, t))), f(pa), f(pb), 1e-15).map(|t| lerp(pa, pb, t))
        },
        |_, _| None,
    );
    let mut out = Vec::new();
    for (ring, closed) in rings {
        for vertices in clip_to_simplex(&ring, closed) {
            out.push(PlanarCurve { kind: CurveKind::Routh, vertices, refinement_tol: 1e-12, closed: false });
        }
    }
    out.sort_by(|a, b| a.vertices[0].partial_cmp(&b.vertices[0]).unwrap());
    out
}

/// Exact crossing of the Routh conic with the simplex edge between an
/// inside vertex `p` and an outside vertex `q`.
fn routh_edge_point(p: [f64; 2], q: [f64; 2]) -> [f64; 2] {
    let roots = [MU_ROUTH, 1.0 - MU_ROUTH];
    let mut cands = Vec::new();
    if q[1] < 0.0 {
        cands.extend(roots.iter().map(|&r| [r, 0.0]));
    }
    if q[0] < 0.0 {
        cands.extend(roots.iter().map(|&r| [0.0, r]));
    }
    if q[0] + q[1] > 1.0 {
        cands.extend(roots.iter().map(|&r| [r, 1.0 - r]));
    }
    let mid = lerp(p, q, 0.5);
    cands.into_iter().min_by(|a, b| dist(*a, mid).partial_cmp(&dist(*b, mid)).unwrap()).unwrap_or(p)
}

fn clip_to_simplex(ring: &[[f64; 2]], closed: bool) -> Vec<Vec<[f64; 2]>> {
    let n = ring.len();
    if n == 0 {
        return Vec::new();
    }
    // rotate a closed ring so that it starts outside, making arcs contiguous
    let start = if closed { ring.iter().position(|p| !in_simplex(*p)).unwrap_or(0) } else { 0 };
    let mut pts: Vec<[f64; 2]> = (0..n).map(|k| ring[(start + k) % n]).collect();
    if closed {
        pts.push(pts[0]);
    }
    let mut arcs = Vec::new();
    let mut cur: Vec<[f64; 2]> = Vec::new();
    for k in 0..pts.len() {
        let p = pts[k];
        if in_simplex(p) {
            if cur.is_empty() && k > 0 {
                let e = routh_edge_point(p, pts[k - 1]);
                cur.push(e);
                if dist(e, p) < 1e-9 {
                    continue;
                }
            }
            cur.push(p);
        } else if !cur.is_empty() {
            let e = routh_edge_point(*cur.last().unwrap(), p);
            // a vertex sitting on the edge itself is replaced by the exact root
            if dist(e, *cur.last().unwrap()) < 1e-9 {
                cur.pop();
            }
            cur.push(e);
            arcs.push(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        arcs.push(cur);
    }
    arcs
}

fn check_ratio(p: u32, q: u32) -> Result<()> {
    fn gcd(a: u32, b: u32) -> u32 {
        if b == 0 { a } else { gcd(b, a % b) }
    }
    if q == 0 || p < q || gcd(p, q) != 1 {
        return Err(ErfbpError::InvalidInput(format!("resonance ratio {p}:{q} must have p >= q >= 1, coprime")));
    }
    Ok(())
}

/// p:q resonance curve of one family over a grid.
pub fn trace_resonance_curve(label: Label, p: u32, q: u32, grid: &GridSpec, tol: f64) -> Result<Vec<PlanarCurve>> {
    check_ratio(p, q)?;
    grid.validate()?;
    let field = FamilyField::walk(grid, &[label]);
    trace_resonance_in(&field, label, p, q, tol)
}

/// As [`trace_resonance_curve`] on an already walked family field.
pub fn trace_resonance_in(field: &FamilyField, label: Label, p: u32, q: u32, tol: f64) -> Result<Vec<PlanarCurve>> {
    check_ratio(p, q)?;
    let grid = &field.grid;
    let n = grid.resolution;
    let coeffs: Vec<Option<(f64, f64)>> = (0..grid.len()).map(|k| field.coefficients(k % n, k / n, label)).collect();
    if coeffs.iter().all(Option::is_none) {
        let [m1, m2] = grid.center(n / 2, n / 2);
        return Err(ErfbpError::FamilyLost { label: label.to_string(), m1, m2 });
    }
    let res = |c: (f64, f64)| crate::stability::resonance_function(c.0, c.1, p, q);
    let values: Vec<Option<f64>> = coeffs.iter().map(|c| c.filter(|c| c.0 > 0.0).map(res)).collect();
    let probe = field.probe(label);
    let lat = Lattice { nx: n, ny: n, values: &values };
    let polylines = march(
        &lat,
        |i, j| grid.center(i, j),
        |a, b| {
            let (pa, pb) = (grid.center(a.0, a.1), grid.center(b.0, b.1));
            let (fa, fb) = (values[grid.index(a.0, a.1)]?, values[grid.index(b.0, b.1)]?);
            bracket_root(|t| probe.resonance(lerp(pa, pb, t), p, q), fa, fb, 0.1 * tol).map(|t| lerp(pa, pb, t))
        },
        |i, j| probe.resonance(lerp(grid.center(i, j), grid.center(i + 1, j + 1), 0.5), p, q),
    );
    Ok(polylines
        .into_iter()
        .map(|(vertices, closed)| PlanarCurve {
            kind: CurveKind::Resonance { label, p, q },
            vertices,
            refinement_tol: tol,
            closed,
        })
        .collect())
}

/// Points where a curve meets a line or another curve, refined on the
/// defining residuals.
pub fn locate_curve_intersection(a: &PlanarCurve, fa: Residual, b: Target) -> Vec<[f64; 2]> {
    let mut out: Vec<[f64; 2]> = Vec::new();
    match b {
        Target::Line(line) => {
            for (p, q) in a.segments() {
                let (gp, gq) = (line.eval(p), line.eval(q));
                if gp == 0.0 && gq == 0.0 || (gp > 0.0) == (gq > 0.0) && gp != 0.0 && gq != 0.0 {
                    continue;
                }
                let guess = if gp == gq { p } else { lerp(p, q, gp / (gp - gq)) };
                if let Some(x) = refine_on_line(fa, line, line.project(guess), dist(p, q).max(1e-9)) {
                    out.push(x);
                }
            }
        }
        Target::Curve(cb, fb) => {
            for (p, q) in a.segments() {
                for (r, s) in cb.segments() {
                    if let Some(t) = segment_intersection(p, q, r, s) {
                        let guess = lerp(p, q, t);
                        if let Some(x) = newton2(fa, fb, guess, 2.0 * dist(p, q).max(dist(r, s))) {
                            out.push(x);
                        }
                    }
                }
            }
        }
    }
    // shared vertices produce duplicate hits
    let mut uniq: Vec<[f64; 2]> = Vec::new();
    for x in out {
        if uniq.iter().all(|u| dist(*u, x) > 1e-9) {
            uniq.push(x);
        }
    }
    uniq
}

/// Root of `f` along `line`, bracketed by expanding around `center`.
pub fn refine_on_line(f: Residual, line: LineSpec, center: [f64; 2], scale: f64) -> Option<[f64; 2]> {
    let d = line.direction();
    let at = |s: f64| [center[0] + s * d[0], center[1] + s * d[1]];
    let mut h = scale;
    for _ in 0..6 {
        let (lo, hi) = (at(-h), at(h));
        if let (Some(fl), Some(fh)) = (f(lo), f(hi)) {
            if (fl > 0.0) != (fh > 0.0) || fl == 0.0 || fh == 0.0 {
                return bracket_root(|t| f(lerp(lo, hi, t)), fl, fh, 0.0).map(|t| lerp(lo, hi, t));
            }
        }
        h *= 2.0;
    }
    None
}

fn segment_intersection(p: [f64; 2], q: [f64; 2], r: [f64; 2], s: [f64; 2]) -> Option<f64> {
    let d1 = [q[0] - p[0], q[1] - p[1]];
    let d2 = [s[0] - r[0], s[1] - r[1]];
    let den = d1[0] * d2[1] - d1[1] * d2[0];
    if den == 0.0 {
        return None;
    }
    let w = [r[0] - p[0], r[1] - p[1]];
    let t = (w[0] * d2[1] - w[1] * d2[0]) / den;
    let u = (w[0] * d1[1] - w[1] * d1[0]) / den;
    ((0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u)).then_some(t)
}

/// Newton on two residuals with a finite-difference Jacobian.
fn newton2(fa: Residual, fb: Residual, mut x: [f64; 2], radius: f64) -> Option<[f64; 2]> {
    let x0 = x;
    let eval = |x: [f64; 2]| Some([fa(x)?, fb(x)?]);
    for _ in 0..30 {
        let f = eval(x)?;
        let h = 1e-7;
        let fx = eval([x[0] + h, x[1]])?;
        let fy = eval([x[0], x[1] + h])?;
        let j = [[(fx[0] - f[0]) / h, (fy[0] - f[0]) / h], [(fx[1] - f[1]) / h, (fy[1] - f[1]) / h]];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let dx = [(j[1][1] * f[0] - j[0][1] * f[1]) / det, (-j[1][0] * f[0] + j[0][0] * f[1]) / det];
        x = [x[0] - dx[0], x[1] - dx[1]];
        if dist(x, x0) > radius {
            return None;
        }
        if dx[0].hypot(dx[1]) < 1e-13 {
            return Some(x);
        }
    }
    Some(x)
}

/// Which simplex edge an extrapolated endpoint lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Edge {
    M1Zero,
    M2Zero,
    M3Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EdgeEndpoint {
    pub point: [f64; 2],
    /// Difference between the two samples used for extrapolation.
    pub extrapolation_error: f64,
}

/// Intersection of a curve with a zero-mass edge by continuing to mass 1e-6
/// and 2e-6 along lines parallel to the edge and extrapolating linearly.
pub fn edge_endpoint(f: Residual, edge: Edge, guess: [f64; 2], scale: f64) -> Option<EdgeEndpoint> {
    let line = |eps: f64| match edge {
        Edge::M1Zero => LineSpec::m1(eps),
        Edge::M2Zero => LineSpec::m2(eps),
        Edge::M3Zero => LineSpec::m3(eps),
    };
    let p1 = refine_on_line(f, line(1e-6), line(1e-6).project(guess), scale)?;
    let p2 = refine_on_line(f, line(2e-6), line(2e-6).project(p1), scale)?;
    let point = [2.0 * p1[0] - p2[0], 2.0 * p1[1] - p2[1]];
    Some(EdgeEndpoint { point, extrapolation_error: dist(p1, p2) })
}

/// Closes the gap between open curve ends and nearby zero-mass edges with
/// extrapolated endpoints. Ends farther than `reach` from every edge are kept.
pub fn extend_to_edges(curve: &PlanarCurve, f: Residual, reach: f64, scale: f64) -> PlanarCurve {
    let mut out = curve.clone();
    if curve.closed || curve.vertices.is_empty() {
        return out;
    }
    let end_point = |v: [f64; 2]| {
        let gaps = [(v[0], Edge::M1Zero), (v[1], Edge::M2Zero), (1.0 - v[0] - v[1], Edge::M3Zero)];
        let (gap, edge) = gaps.into_iter().min_by(|a, b| a.0.partial_cmp(&b.0).unwrap())?;
        if gap > reach {
            return None;
        }
        let mut p = edge_endpoint(f, edge, v, scale)?.point;
        match edge {
            Edge::M1Zero => p[0] = 0.0,
            Edge::M2Zero => p[1] = 0.0,
            Edge::M3Zero => p[1] = 1.0 - p[0],
        }
        Some(p)
    };
    if let Some(p) = end_point(curve.vertices[0]) {
        out.vertices.insert(0, p);
    }
    if curve.vertices.len() > 1 {
        if let Some(p) = end_point(*curve.vertices.last().unwrap()) {
            out.vertices.push(p);
        }
    }
    out
}

/// Bifurcation curves with the fold found on every refined grid edge.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BifurcationExtraction {
    pub curves: Vec<PlanarCurve>,
    /// `folds[k][v]` is the fold behind vertex `v` of curve `k`, if refined.
    pub folds: Vec<Vec<Option<FoldPoint>>>,
}

impl BifurcationExtraction {
    pub fn all_closed(&self) -> bool {
        self.curves.iter().all(|c| c.closed)
    }
}

/// Boundary between the 8- and 10-equilibrium regimes of a count map.
pub fn extract_bifurcation_curve(map: &RegionMap) -> Result<Vec<PlanarCurve>> {
    let ex = extract_bifurcation(map);
    if ex.curves.is_empty() || !ex.all_closed() {
        return Err(ErfbpError::OpenCurveWarning);
    }
    Ok(ex.curves)
}

/// As [`extract_bifurcation_curve`], keeping open fragments and fold data.
pub fn extract_bifurcation(map: &RegionMap) -> BifurcationExtraction {
    let g = &map.grid;
    let n = g.resolution;
    let values: Vec<Option<f64>> = map
        .cells
        .iter()
        .map(|c| c.as_ref().and_then(|c| c.count).map(|k| if k >= 9 { 1.0 } else { -1.0 }))
        .collect();
    let lat = Lattice { nx: n, ny: n, values: &values };
    // edges first, concurrently; march then picks the refined points up by node pair
    let mut edges = Vec::new();
    for j in 0..n {
        for i in 0..n {
            let Some(v) = values[g.index(i, j)] else { continue };
            for (a, b) in [(i + 1, j), (i, j + 1)] {
                if a < n && b < n {
                    if let Some(w) = values[g.index(a, b)] {
                        if (v > 0.0) != (w > 0.0) {
                            edges.push(((i, j), (a, b)));
                        }
                    }
                }
            }
        }
    }
    let folds: Vec<Option<FoldPoint>> = edges
        .par_iter()
        .map(|&(a, b)| {
            let (ten, eight) = if values[g.index(a.0, a.1)].unwrap() > 0.0 { (a, b) } else { (b, a) };
            refine_fold(g.masses(ten.0, ten.1)?, g.masses(eight.0, eight.1)?)
        })
        .collect();
    let lookup = |a: (usize, usize), b: (usize, usize)| {
        edges.iter().position(|e| *e == (a, b) || *e == (b, a)).and_then(|k| folds[k])
    };
    let polylines = march(
        &lat,
        |i, j| g.center(i, j),
        |a, b| lookup(a, b).map(|f| [f.masses.m1, f.masses.m2]),
        |_, _| None,
    );
    let mut out_folds = Vec::new();
    let curves = polylines
        .into_iter()
        .map(|(vertices, closed)| {
            out_folds.push(
                vertices
                    .iter()
                    .map(|v| folds.iter().flatten().find(|f| f.masses.m1 == v[0] && f.masses.m2 == v[1]).copied())
                    .collect(),
            );
            PlanarCurve { kind: CurveKind::Bifurcation, vertices, refinement_tol: 1e-8, closed }
        })
        .collect();
    BifurcationExtraction { curves, folds: out_folds }
}

/// Fold of the annihilating pair on the segment from a 10-equilibrium mass
/// point to an 8-equilibrium one.
pub fn refine_fold(ten: MassTriple, eight: MassTriple) -> Option<FoldPoint> {
    let cfg = build_configuration(ten).ok()?;
    let set = find_equilibria_in(&cfg, &SearchGrid::scan(), &NewtonSettings::default()).ok()?;
    let det = |p: [f64; 2]| cfg.gradient_hessian(p).1.det();
    // the interior extremum is the member of the pair that annihilates first
    let mut cands: Vec<[f64; 2]> = set.points.iter().map(|p| p.position).collect();
    cands.sort_by_key(|p| !(inside_triangle(*p, &cfg) && det(*p) > 0.0));
    let control = StepControl::default();
    cands.into_iter().find_map(|z| {
        let tr = track_segment(z, ten, eight, &control);
        (tr.termination == Termination::Fold).then_some(tr.fold).flatten()
    })
}
