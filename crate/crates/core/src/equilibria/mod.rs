//! Equilibrium search, labelling and family continuation.

pub mod continuation;
pub mod labels;
pub mod newton;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{ErfbpError, Result};
use crate::model::{build_configuration, MassTriple, PrimaryConfiguration};

pub use continuation::{
    continue_family, locate_fold, track_segment, FamilyTrace, FoldPoint, StepControl, Termination,
};
pub use labels::{find_labeled, label_equilibria, label_with_config, reference_atlas, REFERENCE_MASSES};
pub use newton::{refine_root, refine_with, NewtonSettings, RefineFailure, RootReport};

pub const DEFAULT_DEDUP_RADIUS: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    L1,
    L2,
    L3,
    L4,
    L5,
    L6,
    L7,
    L8,
    L9,
    L10,
    Unlabeled,
}

impl Label {
    pub const ALL: [Label; 10] = [
        Label::L1,
        Label::L2,
        Label::L3,
        Label::L4,
        Label::L5,
        Label::L6,
        Label::L7,
        Label::L8,
        Label::L9,
        Label::L10,
    ];

    pub fn from_number(n: u8) -> Option<Label> {
        (1..=10).contains(&n).then(|| Self::ALL[n as usize - 1])
    }

    pub fn number(self) -> Option<u8> {
        Self::ALL.iter().position(|&l| l == self).map(|i| i as u8 + 1)
    }
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.number() {
            Some(n) => write!(f, "L{n}"),
            None => f.write_str("Unlabeled"),
        }
    }
}

impl std::str::FromStr for Label {
    type Err = ErfbpError;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("unlabeled") {
            return Ok(Label::Unlabeled);
        }
        t.strip_prefix(['L', 'l'])
            .and_then(|n| n.parse::<u8>().ok())
            .and_then(Label::from_number)
            .ok_or_else(|| ErfbpError::InvalidInput(format!("unknown label '{s}'")))
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumPoint {
    pub position: [f64; 2],
    pub grad_norm: f64,
    pub label: Label,
    /// Determinant of the Hessian of Ω at the point.
    pub degeneracy: f64,
    /// Set on points that annihilate in a fold along a labelling path.
    pub fold: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumSet {
    pub masses: MassTriple,
    pub points: Vec<EquilibriumPoint>,
    pub count: usize,
}

impl EquilibriumSet {
    pub fn get(&self, label: Label) -> Option<&EquilibriumPoint> {
        self.points.iter().find(|p| p.label == label)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchGrid {
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    /// Cells per axis.
    pub resolution: usize,
    /// Extra log-polar seeding around each primary for small-mass clusters.
    pub polar_seeding: bool,
    /// Re-run at doubled resolution and require an unchanged count.
    pub completeness_check: bool,
    pub dedup_radius: f64,
}

impl Default for SearchGrid {
    fn default() -> Self {
        Self {
            x_range: (-2.0, 2.0),
            y_range: (-2.0, 2.0),
            resolution: 400,
            polar_seeding: true,
            completeness_check: true,
            dedup_radius: DEFAULT_DEDUP_RADIUS,
        }
    }
}

impl SearchGrid {
    /// Cheaper setting for mass scans: coarser grid, no resolution doubling.
    pub fn scan() -> Self {
        Self { resolution: 160, completeness_check: false, ..Self::default() }
    }

    fn with_resolution(&self, n: usize) -> Self {
        Self { resolution: n, ..self.clone() }
    }
}

pub fn find_equilibria(masses: MassTriple, grid: &SearchGrid, tol: f64) -> Result<EquilibriumSet> {
    let config = build_configuration(masses)?;
    find_equilibria_in(&config, grid, &NewtonSettings::with_tol(tol))
}

pub fn find_equilibria_in(
    config: &PrimaryConfiguration,
    grid: &SearchGrid,
    newton: &NewtonSettings,
) -> Result<EquilibriumSet> {
    if grid.resolution < 4 || !(grid.x_range.0 < grid.x_range.1 && grid.y_range.0 < grid.y_range.1) {
        return Err(ErfbpError::InvalidInput("degenerate search grid".into()));
    }
    let first = search_once(config, grid, newton);
    if !grid.completeness_check {
        return Ok(first);
    }
    let second = search_once(config, &grid.with_resolution(2 * grid.resolution), newton);
    if second.count == first.count {
        return Ok(merge(config, &first, &second, grid.dedup_radius));
    }
    let third = search_once(config, &grid.with_resolution(4 * grid.resolution), newton);
    if third.count == second.count {
        return Ok(merge(config, &second, &third, grid.dedup_radius));
    }
    Err(ErfbpError::GridTooCoarse { counts: vec![first.count, second.count, third.count] })
}

fn merge(
    config: &PrimaryConfiguration,
    a: &EquilibriumSet,
    b: &EquilibriumSet,
    radius: f64,
) -> EquilibriumSet {
    let pts: Vec<EquilibriumPoint> = a.points.iter().chain(&b.points).copied().collect();
    let points = dedup(pts, radius);
    EquilibriumSet { masses: config.masses, count: points.len(), points }
}

fn search_once(
    config: &PrimaryConfiguration,
    grid: &SearchGrid,
    newton: &NewtonSettings,
) -> EquilibriumSet {
    let mut seeds = cartesian_seeds(config, grid);
    if grid.polar_seeding {
        seeds.extend(polar_seeds(config));
    }
    let found: Vec<EquilibriumPoint> = seeds
        .par_iter()
        .filter_map(|&s| refine_with(s, config, newton).ok().map(|r| r.point))
        .collect();
    let mut points = dedup(found, grid.dedup_radius);
    // near a fold the partner root may sit inside the same grid cell
    let extra: Vec<EquilibriumPoint> = points
        .iter()
        .filter(|p| p.degeneracy.abs() < 0.05)
        .flat_map(|p| probe_partner(p, config, newton))
        .collect();
    if !extra.is_empty() {
        points.extend(extra);
        points = dedup(points, grid.dedup_radius);
    }
    EquilibriumSet { masses: config.masses, count: points.len(), points }
}

fn cartesian_seeds(config: &PrimaryConfiguration, grid: &SearchGrid) -> Vec<[f64; 2]> {
    let n = grid.resolution;
    let (x0, x1) = grid.x_range;
    let (y0, y1) = grid.y_range;
    let dx = (x1 - x0) / n as f64;
    let dy = (y1 - y0) / n as f64;
    let guard = 2.0 * config.collision_tol;
    let rows: Vec<Vec<[f64; 2]>> = (0..=n)
        .into_par_iter()
        .map(|j| {
            let y = y0 + j as f64 * dy;
            (0..=n)
                .map(|i| {
                    let p = [x0 + i as f64 * dx, y];
                    if config.nearest_primary(p).1 > guard {
                        config.gradient(p)
                    } else {
                        [f64::NAN, f64::NAN]
                    }
                })
                .collect()
        })
        .collect();
    let mut seeds = Vec::new();
    for j in 0..n {
        for i in 0..n {
            let c = [rows[j][i], rows[j][i + 1], rows[j + 1][i], rows[j + 1][i + 1]];
            if changes_sign(c.map(|g| g[0])) && changes_sign(c.map(|g| g[1])) {
                seeds.push([x0 + (i as f64 + 0.5) * dx, y0 + (j as f64 + 0.5) * dy]);
            }
        }
    }
    seeds
}

fn changes_sign(v: [f64; 4]) -> bool {
    if v.iter().any(|x| x.is_nan()) {
        return false;
    }
    let pos = v.iter().any(|&x| x >= 0.0);
    let neg = v.iter().any(|&x| x <= 0.0);
    pos && neg
}

fn polar_seeds(config: &PrimaryConfiguration) -> Vec<[f64; 2]> {
    let (nr, nt) = (48usize, 64usize);
    let r_min = (10.0 * config.collision_tol).max(1e-5);
    let r_max = 0.3;
    let mut seeds = Vec::new();
    for q in &config.positions {
        let radius = |k: usize| r_min * (r_max / r_min).powf(k as f64 / nr as f64);
        let angle = |l: usize| 2.0 * std::f64::consts::PI * l as f64 / nt as f64;
        let at = |r: f64, th: f64| [q[0] + r * th.cos(), q[1] + r * th.sin()];
        let vals: Vec<Vec<[f64; 2]>> = (0..=nr)
            .map(|k| (0..=nt).map(|l| config.gradient(at(radius(k), angle(l)))).collect())
            .collect();
        for k in 0..nr {
            for l in 0..nt {
                let c = [vals[k][l], vals[k][l + 1], vals[k + 1][l], vals[k + 1][l + 1]];
                if changes_sign(c.map(|g| g[0])) && changes_sign(c.map(|g| g[1])) {
                    let r = (radius(k) * radius(k + 1)).sqrt();
                    seeds.push(at(r, 0.5 * (angle(l) + angle(l + 1))));
                }
            }
        }
    }
    seeds
}

/// Seeds along the soft Hessian direction of a nearly degenerate root.
fn probe_partner(
    p: &EquilibriumPoint,
    config: &PrimaryConfiguration,
    newton: &NewtonSettings,
) -> Vec<EquilibriumPoint> {
    let (_, h) = config.gradient_hessian(p.position);
    let tr = h.trace();
    let disc = ((h.xx - h.yy).powi(2) + 4.0 * h.xy * h.xy).sqrt();
    let l1 = 0.5 * (tr + disc);
    let l2 = 0.5 * (tr - disc);
    let soft = if l1.abs() < l2.abs() { l1 } else { l2 };
    let v = if h.xy.abs() > 1e-300 {
        let v = [soft - h.yy, h.xy];
        let n = v[0].hypot(v[1]);
        [v[0] / n, v[1] / n]
    } else if (h.xx - soft).abs() < (h.yy - soft).abs() {
        [1.0, 0.0]
    } else {
        [0.0, 1.0]
    };
    let mut out = Vec::new();
    for d in [1e-4, 3e-4, 1e-3, 3e-3, 1e-2, 3e-2] {
        for sgn in [-1.0, 1.0] {
            let s = [p.position[0] + sgn * d * v[0], p.position[1] + sgn * d * v[1]];
            if let Ok(r) = refine_with(s, config, newton) {
                out.push(r.point);
            }
        }
    }
    out
}

/// Lexicographic sort followed by radius-based deduplication.
pub fn dedup(mut pts: Vec<EquilibriumPoint>, radius: f64) -> Vec<EquilibriumPoint> {
    pts.sort_by(|a, b| {
        a.position[0]
            .total_cmp(&b.position[0])
            .then(a.position[1].total_cmp(&b.position[1]))
    });
    let mut kept: Vec<EquilibriumPoint> = Vec::with_capacity(pts.len());
    for p in pts {
        let dup = kept.iter_mut().find(|k| {
            (k.position[0] - p.position[0]).hypot(k.position[1] - p.position[1]) < radius
        });
        match dup {
            Some(k) if p.grad_norm < k.grad_norm => *k = p,
            Some(_) => {}
            None => kept.push(p),
        }
    }
    kept
}

pub fn degeneracy_measure(point: &EquilibriumPoint, config: &PrimaryConfiguration) -> Result<f64> {
    config.check_position(point.position)?;
    Ok(config.gradient_hessian(point.position).1.det())
}

/// Barycentric coordinates of a point with respect to the primaries.
pub fn barycentric(p: [f64; 2], config: &PrimaryConfiguration) -> [f64; 3] {
    let [a, b, c] = config.positions;
    let area = |u: [f64; 2], v: [f64; 2], w: [f64; 2]| {
        (v[0] - u[0]) * (w[1] - u[1]) - (v[1] - u[1]) * (w[0] - u[0])
    };
    let total = area(a, b, c);
    [area(p, b, c) / total, area(a, p, c) / total, area(a, b, p) / total]
}

pub fn inside_triangle(p: [f64; 2], config: &PrimaryConfiguration) -> bool {
    barycentric(p, config).iter().all(|&l| l >= 0.0)
}
