//! CSV and JSON writers for equilibrium sets, maps, curves and trajectories.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use crate::equilibria::{EquilibriumSet, Label};
use crate::error::Result;
use crate::integrator::Trajectory;
use crate::model::{jacobi_constant, MassTriple, PrimaryConfiguration};
use crate::scan::{GridSpec, PlanarCurve, RegionMap};
use crate::stability::{analyze, Classification, StabilityReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = crate::ErfbpError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(crate::ErfbpError::InvalidInput(format!("unknown format '{s}' (csv or json)"))),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EquilibriumRecord {
    pub grad_norm: f64,
    pub det: f64,
    pub fold: bool,
    pub stability: StabilityReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct EquilibriumDocument {
    pub masses: MassTriple,
    pub count: usize,
    pub points: Vec<EquilibriumRecord>,
}

pub fn equilibrium_document(set: &EquilibriumSet, config: &PrimaryConfiguration) -> Result<EquilibriumDocument> {
    let points = set
        .points
        .iter()
        .map(|p| {
            Ok(EquilibriumRecord { grad_norm: p.grad_norm, det: p.degeneracy, fold: p.fold, stability: analyze(p, config)? })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EquilibriumDocument { masses: set.masses, count: set.count, points })
}

/// Shortest round-trip text, in exponent form for very small or large magnitudes.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e15).contains(&a) {
        format!("{x:e}")
    } else {
        x.to_string()
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

pub fn write_equilibria<W: Write>(doc: &EquilibriumDocument, format: Format, w: W) -> Result<()> {
    match format {
        Format::Json => write_json(doc, w),
        Format::Csv => {
            let mut out = csv::Writer::from_writer(w);
            out.write_record([
                "label", "x", "y", "grad_norm", "det", "fold", "c2", "c0", "discriminant", "classification", "omega1",
                "omega2",
            ])?;
            for p in &doc.points {
                let s = &p.stability;
                out.write_record([
                    s.label.to_string(),
                    num(s.x),
                    num(s.y),
                    num(p.grad_norm),
                    num(p.det),
                    p.fold.to_string(),
                    num(s.c2),
                    num(s.c0),
                    num(s.discriminant),
                    s.classification.to_string(),
                    opt(s.omega1),
                    opt(s.omega2),
                ])?;
            }
            out.flush()?;
            Ok(())
        }
    }
}

pub fn write_json<T: Serialize, W: Write>(value: &T, mut w: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    Ok(())
}

const MAP_LABELS: [Label; 3] = [Label::L3, Label::L5, Label::L6];

fn stable_flag(v: Option<Classification>) -> &'static str {
    match v {
        Some(Classification::LinearlyStable) => "1",
        Some(_) => "0",
        None => "",
    }
}

/// One row per valid cell: m1, m2, count, stableL3, stableL5, stableL6, routh_sign.
pub fn write_region_map_csv<W: Write>(map: &RegionMap, w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["m1", "m2", "count", "stableL3", "stableL5", "stableL6", "routh_sign"])?;
    for (_, c) in map.valid_cells() {
        let mut row = vec![num(c.m1), num(c.m2), c.count.map(|k| k.to_string()).unwrap_or_default()];
        row.extend(MAP_LABELS.iter().map(|l| stable_flag(c.verdict(*l)).to_string()));
        row.push(c.routh_sign.to_string());
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct RegionSummary {
    pub grid: GridSpec,
    pub valid_cells: usize,
    pub failed_cells: usize,
    pub counts: BTreeMap<usize, usize>,
    pub stable_cells: BTreeMap<String, usize>,
    pub routh_negative_cells: usize,
}

pub fn region_summary(map: &RegionMap) -> RegionSummary {
    let mut s = RegionSummary {
        grid: map.grid,
        valid_cells: 0,
        failed_cells: 0,
        counts: BTreeMap::new(),
        stable_cells: BTreeMap::new(),
        routh_negative_cells: 0,
    };
    for (_, c) in map.valid_cells() {
        s.valid_cells += 1;
        s.failed_cells += c.error.is_some() as usize;
        if let Some(k) = c.count {
            *s.counts.entry(k).or_default() += 1;
        }
        for l in c.stable_labels() {
            *s.stable_cells.entry(l.to_string()).or_default() += 1;
        }
        s.routh_negative_cells += (c.routh_sign < 0) as usize;
    }
    s
}

/// Curves as header-prefixed polylines separated by blank lines.
pub fn write_curves_csv<W: Write>(curves: &[PlanarCurve], mut w: W) -> Result<()> {
    for (k, c) in curves.iter().enumerate() {
        if k > 0 {
            writeln!(w)?;
        }
        writeln!(w, "{}", c.kind.header(c.refinement_tol))?;
        writeln!(w, "m1,m2")?;
        for v in &c.vertices {
            writeln!(w, "{},{}", num(v[0]), num(v[1]))?;
        }
        if c.closed && c.vertices.len() > 2 {
            writeln!(w, "{},{}", num(c.vertices[0][0]), num(c.vertices[0][1]))?;
        }
    }
    Ok(())
}

pub fn write_curves<W: Write>(curves: &[PlanarCurve], format: Format, w: W) -> Result<()> {
    match format {
        Format::Csv => write_curves_csv(curves, w),
        Format::Json => write_json(&curves, w),
    }
}

/// Rows t, x, y, vx, vy, C.
pub fn write_trajectory_csv<W: Write>(traj: &Trajectory, config: &PrimaryConfiguration, w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["t", "x", "y", "vx", "vy", "C"])?;
    for (t, s) in &traj.samples {
        let c = jacobi_constant(s, config).map(num).unwrap_or_default();
        out.write_record([num(*t), num(s.x), num(s.y), num(s.vx), num(s.vy), c])?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct TrajectoryRow {
    t: f64,
    x: f64,
    y: f64,
    vx: f64,
    vy: f64,
    #[serde(rename = "C")]
    c: Option<f64>,
}

#[derive(Serialize)]
struct TrajectoryDocument {
    termination: crate::integrator::TrajectoryTermination,
    jacobi_drift: f64,
    accepted_steps: usize,
    rejected_steps: usize,
    samples: Vec<TrajectoryRow>,
}

pub fn write_trajectory<W: Write>(traj: &Trajectory, config: &PrimaryConfiguration, format: Format, w: W) -> Result<()> {
    match format {
        Format::Csv => write_trajectory_csv(traj, config, w),
        Format::Json => {
            let doc = TrajectoryDocument {
                termination: traj.termination,
                jacobi_drift: traj.jacobi_drift,
                accepted_steps: traj.accepted_steps,
                rejected_steps: traj.rejected_steps,
                samples: traj
                    .samples
                    .iter()
                    .map(|(t, s)| TrajectoryRow {
                        t: *t,
                        x: s.x,
                        y: s.y,
                        vx: s.vx,
                        vy: s.vy,
                        c: jacobi_constant(s, config).ok(),
                    })
                    .collect(),
            };
            write_json(&doc, w)
        }
    }
}
