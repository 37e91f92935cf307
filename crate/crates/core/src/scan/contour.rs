//! Marching squares over a node lattice with per-edge refinement.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::equilibria::Label;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CurveKind {
    Resonance { label: Label, p: u32, q: u32 },
    Routh,
    Bifurcation,
    StabilityBoundary { label: Label },
}

impl CurveKind {
    pub fn header(&self, tol: f64) -> String {
        match self {
            CurveKind::Resonance { label, p, q } => {
                format!("# kind=resonance label={label} p={p} q={q} tol={tol:e}")
            }
            CurveKind::Routh => format!("# kind=routh tol={tol:e}"),
            CurveKind::Bifurcation => format!("# kind=bifurcation tol={tol:e}"),
            CurveKind::StabilityBoundary { label } => {
                format!("# kind=stability-boundary label={label} tol={tol:e}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlanarCurve {
    pub kind: CurveKind,
    /// Ordered (m1, m2) vertices.
    pub vertices: Vec<[f64; 2]>,
    pub refinement_tol: f64,
    pub closed: bool,
}

impl PlanarCurve {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn segments(&self) -> impl Iterator<Item = ([f64; 2], [f64; 2])> + '_ {
        let n = self.vertices.len();
        let extra = if self.closed && n > 2 { 1 } else { 0 };
        (0..(n.saturating_sub(1) + extra)).map(move |k| (self.vertices[k], self.vertices[(k + 1) % n]))
    }
}

/// Node lattice: `nx × ny` nodes, value `None` where undefined.
pub struct Lattice<'a> {
    pub nx: usize,
    pub ny: usize,
    pub values: &'a [Option<f64>],
}

impl Lattice<'_> {
    fn at(&self, i: usize, j: usize) -> Option<f64> {
        self.values[j * self.nx + i]
    }
}

type Node = (usize, usize);

/// Polylines of the zero set; each is (points, closed).
///
/// `refine` gets the two nodes of a crossed edge and returns the crossing
/// point (or `None` to fall back to linear interpolation); `center` resolves
/// saddle squares.
pub fn march<C, R, S>(lat: &Lattice, coord: C, mut refine: R, mut center: S) -> Vec<(Vec<[f64; 2]>, bool)>
where
    C: Fn(usize, usize) -> [f64; 2],
    R: FnMut(Node, Node) -> Option<[f64; 2]>,
    S: FnMut(usize, usize) -> Option<f64>,
{
    let (nx, ny) = (lat.nx, lat.ny);
    let h_edge = |i: usize, j: usize| 2 * (j * nx + i);
    let v_edge = |i: usize, j: usize| 2 * (j * nx + i) + 1;
    let mut segs: Vec<(usize, usize)> = Vec::new();
    let mut ends: BTreeMap<usize, (Node, Node)> = BTreeMap::new();
    for j in 0..ny.saturating_sub(1) {
        for i in 0..nx.saturating_sub(1) {
            let (Some(bl), Some(br), Some(tr), Some(tl)) =
                (lat.at(i, j), lat.at(i + 1, j), lat.at(i + 1, j + 1), lat.at(i, j + 1))
            else {
                continue;
            };
            let s = [bl >= 0.0, br >= 0.0, tr >= 0.0, tl >= 0.0];
            // edges: bottom, right, top, left
            let edges = [
                (h_edge(i, j), ((i, j), (i + 1, j)), s[0] != s[1]),
                (v_edge(i + 1, j), ((i + 1, j), (i + 1, j + 1)), s[1] != s[2]),
                (h_edge(i, j + 1), ((i, j + 1), (i + 1, j + 1)), s[3] != s[2]),
                (v_edge(i, j), ((i, j), (i, j + 1)), s[0] != s[3]),
            ];
            let crossed: Vec<usize> = (0..4).filter(|&k| edges[k].2).collect();
            for &k in &crossed {
                ends.entry(edges[k].0).or_insert(edges[k].1);
            }
            match crossed.len() {
                2 => segs.push((edges[crossed[0]].0, edges[crossed[1]].0)),
                4 => {
                    let c = center(i, j).unwrap_or(0.25 * (bl + br + tr + tl));
                    if (c >= 0.0) == s[0] {
                        segs.push((edges[0].0, edges[1].0));
                        segs.push((edges[2].0, edges[3].0));
                    } else {
                        segs.push((edges[3].0, edges[0].0));
                        segs.push((edges[1].0, edges[2].0));
                    }
                }
                _ => {}
            }
        }
    }
    let mut points: BTreeMap<usize, [f64; 2]> = BTreeMap::new();
    for (&e, &(a, b)) in &ends {
        let p = refine(a, b).unwrap_or_else(|| {
            let (va, vb) = (lat.at(a.0, a.1).unwrap(), lat.at(b.0, b.1).unwrap());
            let (pa, pb) = (coord(a.0, a.1), coord(b.0, b.1));
            let w = va / (va - vb);
            [pa[0] + w * (pb[0] - pa[0]), pa[1] + w * (pb[1] - pa[1])]
        });
        points.insert(e, p);
    }
    chain(&segs).into_iter().map(|(ids, closed)| (ids.iter().map(|e| points[e]).collect(), closed)).collect()
}

fn chain(segs: &[(usize, usize)]) -> Vec<(Vec<usize>, bool)> {
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (k, &(a, b)) in segs.iter().enumerate() {
        adj.entry(a).or_default().push(k);
        adj.entry(b).or_default().push(k);
    }
    let mut used = vec![false; segs.len()];
    let mut out = Vec::new();
    let walk = |start: usize, used: &mut Vec<bool>| -> (Vec<usize>, bool) {
        let mut path = vec![start];
        let mut cur = start;
        loop {
            let next = adj[&cur].iter().copied().find(|&k| !used[k]);
            let Some(k) = next else { break };
            used[k] = true;
            let (a, b) = segs[k];
            cur = if a == cur { b } else { a };
            if cur == start {
                return (path, true);
            }
            path.push(cur);
        }
        (path, false)
    };
    // open chains start at edges used by a single segment
    let starts: Vec<usize> = adj.iter().filter(|(_, v)| v.len() == 1).map(|(&e, _)| e).collect();
    for e in starts {
        if adj[&e].iter().any(|&k| !used[k]) {
            out.push(walk(e, &mut used));
        }
    }
    for k in 0..segs.len() {
        if !used[k] {
            out.push(walk(segs[k].0, &mut used));
        }
    }
    out
}

/// Illinois-type bracketed root of a scalar function on [0, 1].
pub fn bracket_root<F: FnMut(f64) -> Option<f64>>(mut f: F, fa: f64, fb: f64, tol: f64) -> Option<f64> {
    let (mut a, mut b, mut fa, mut fb) = (0.0, 1.0, fa, fb);
    if fa == 0.0 {
        return Some(0.0);
    }
    if fb == 0.0 {
        return Some(1.0);
    }
    if fa.signum() == fb.signum() {
        return None;
    }
    let mut side = 0;
    for _ in 0..200 {
        let c = if (b - a) > 1e-3 {
            let c = (a * fb - b * fa) / (fb - fa);
            c.clamp(a + 0.01 * (b - a), b - 0.01 * (b - a))
        } else {
            0.5 * (a + b)
        };
        let fc = f(c)?;
        if fc.abs() < tol || (b - a) < 1e-15 {
            return Some(c);
        }
        if fc.signum() == fa.signum() {
            a = c;
            fa = fc;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        } else {
            b = c;
            fb = fc;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        }
    }
    Some(0.5 * (a + b))
}

pub fn hausdorff(a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
    directed(a, b).max(directed(b, a))
}

/// Largest distance from a point of `a` to the polyline `b`.
pub fn directed(a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
    a.iter().map(|p| distance_to_polyline(*p, b)).fold(0.0, f64::max)
}

pub fn distance_to_polyline(p: [f64; 2], line: &[[f64; 2]]) -> f64 {
    if line.len() == 1 {
        return (p[0] - line[0][0]).hypot(p[1] - line[0][1]);
    }
    line.windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            let d = [b[0] - a[0], b[1] - a[1]];
            let l2 = d[0] * d[0] + d[1] * d[1];
            let t = if l2 > 0.0 { (((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / l2).clamp(0.0, 1.0) } else { 0.0 };
            (p[0] - a[0] - t * d[0]).hypot(p[1] - a[1] - t * d[1])
        })
        .fold(f64::INFINITY, f64::min)
}
