use rayon::prelude::*;
use serde::Serialize;

use crate::equilibria::{find_equilibria_in, Label, NewtonSettings, SearchGrid};
use crate::error::Result;
use crate::model::{build_configuration, routh_quantity};
use crate::stability::Classification;

use super::contour::{bracket_root, march, Lattice, PlanarCurve};
use super::family_field::{stability_margin, FamilyField};
use super::grid::{GridSpec, Region};
use super::CurveKind;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellPayload {
    pub m1: f64,
    pub m2: f64,
    pub count: Option<usize>,
    /// Verdict per label L1..L10 where the family was followed.
    pub verdicts: [Option<Classification>; 10],
    pub routh_sign: i8,
    pub error: Option<String>,
}

impl CellPayload {
    pub fn verdict(&self, label: Label) -> Option<Classification> {
        label.number().and_then(|n| self.verdicts[n as usize - 1])
    }

    pub fn stable_labels(&self) -> Vec<Label> {
        Label::ALL
            .iter()
            .copied()
            .filter(|l| self.verdict(*l) == Some(Classification::LinearlyStable))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionMap {
    pub grid: GridSpec,
    /// Row-major cells (index j * n + i); `None` outside the simplex.
    pub cells: Vec<Option<CellPayload>>,
}

impl RegionMap {
    pub fn cell(&self, i: usize, j: usize) -> Option<&CellPayload> {
        self.cells[self.grid.index(i, j)].as_ref()
    }

    pub fn valid_cells(&self) -> impl Iterator<Item = ((usize, usize), &CellPayload)> {
        let n = self.grid.resolution;
        self.cells
            .iter()
            .enumerate()
            .filter_map(move |(k, c)| c.as_ref().map(|c| ((k % n, k / n), c)))
    }

    /// Cells of the Lagrange-stable region carried by this grid.
    pub fn region_cells(&self) -> impl Iterator<Item = ((usize, usize), &CellPayload)> {
        let g = self.grid;
        self.valid_cells().filter(move |((i, j), _)| g.in_region(*i, *j))
    }

    pub fn stable_set(&self, label: Label) -> Vec<(usize, usize)> {
        self.region_cells()
            .filter(|(_, c)| c.verdict(label) == Some(Classification::LinearlyStable))
            .map(|(ij, _)| ij)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanOptions {
    /// Run the equilibrium search per cell.
    pub counts: bool,
    /// Families followed for stability verdicts.
    pub labels: Vec<Label>,
    pub search: SearchGrid,
}

impl ScanOptions {
    /// Counts everywhere, verdicts for the outer families (these never fold).
    pub fn simplex() -> Self {
        Self {
            counts: true,
            labels: vec![Label::L1, Label::L2, Label::L3, Label::L4, Label::L5, Label::L6],
            search: SearchGrid::scan(),
        }
    }

    /// Counts and verdicts for the eight families present in the regions.
    pub fn region() -> Self {
        Self { labels: Label::ALL[..8].to_vec(), ..Self::simplex() }
    }

    pub fn counts_only() -> Self {
        Self { labels: Vec::new(), ..Self::simplex() }
    }
}

pub fn scan_simplex(grid: &GridSpec) -> Result<RegionMap> {
    let opts = if grid.region == Region::Simplex { ScanOptions::simplex() } else { ScanOptions::region() };
    scan_with(grid, &opts)
}

pub fn scan_with(grid: &GridSpec, opts: &ScanOptions) -> Result<RegionMap> {
    grid.validate()?;
    let field = (!opts.labels.is_empty()).then(|| FamilyField::walk(grid, &opts.labels));
    scan_from_field(grid, opts, field.as_ref())
}

pub(crate) fn scan_from_field(grid: &GridSpec, opts: &ScanOptions, field: Option<&FamilyField>) -> Result<RegionMap> {
    let n = grid.resolution;
    let newton = NewtonSettings::default();
    let cells: Vec<Option<CellPayload>> = (0..grid.len())
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k % n, k / n);
            let masses = grid.masses(i, j)?;
            let [m1, m2] = grid.center(i, j);
            let r = routh_quantity(&masses);
            let mut cell = CellPayload {
                m1,
                m2,
                count: None,
                verdicts: [None; 10],
                routh_sign: if r > 0.0 { 1 } else if r < 0.0 { -1 } else { 0 },
                error: None,
            };
            if opts.counts {
                let count = |search: &SearchGrid| {
                    build_configuration(masses).and_then(|c| find_equilibria_in(&c, search, &newton)).map(|s| s.count)
                };
                // a coarse search can miss a root; odd or out-of-range counts get the full search
                let first = count(&opts.search);
                let result = match first {
                    Ok(8) | Ok(10) => first,
                    _ => count(&SearchGrid::default()),
                };
                match result {
                    Ok(k) => cell.count = Some(k),
                    Err(e) => cell.error = Some(e.to_string()),
                }
            }
            if let Some(f) = field {
                for l in &f.labels {
                    if let (Some(v), Some(nr)) = (f.classification(i, j, *l), l.number()) {
                        cell.verdicts[nr as usize - 1] = Some(v);
                    }
                }
            }
            Some(cell)
        })
        .collect();
    Ok(RegionMap { grid: *grid, cells })
}

/// Stability verdicts of one family over a grid and the boundary of its stable set.
pub fn stability_domain(label: Label, grid: &GridSpec) -> Result<(RegionMap, Vec<PlanarCurve>)> {
    let field = FamilyField::walk(grid, &[label]);
    stability_domain_from(&field, label)
}

pub fn stability_domain_from(field: &FamilyField, label: Label) -> Result<(RegionMap, Vec<PlanarCurve>)> {
    let grid = &field.grid;
    let opts = ScanOptions { counts: false, labels: vec![label], search: SearchGrid::scan() };
    let map = scan_from_field(grid, &opts, Some(field))?;
    let n = grid.resolution;
    let values: Vec<Option<f64>> = (0..grid.len())
        .map(|k| field.coefficients(k % n, k / n, label).map(|(c2, c0)| stability_margin(c2, c0)))
        .collect();
    let probe = field.probe(label);
    let tol = 1e-8;
    let lat = Lattice { nx: n, ny: n, values: &values };
    let polylines = march(
        &lat,
        |i, j| grid.center(i, j),
        |a, b| {
            let (pa, pb) = (grid.center(a.0, a.1), grid.center(b.0, b.1));
            let at = |t: f64| [pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1])];
            let (fa, fb) = (values[grid.index(a.0, a.1)]?, values[grid.index(b.0, b.1)]?);
            bracket_root(|t| probe.stability_margin(at(t)), fa, fb, 0.1 * tol).map(at)
        },
        |i, j| {
            let (a, b) = (grid.center(i, j), grid.center(i + 1, j + 1));
            probe.stability_margin([0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])])
        },
    );
    let curves = polylines
        .into_iter()
        .map(|(vertices, closed)| PlanarCurve {
            kind: CurveKind::StabilityBoundary { label },
            vertices,
            refinement_tol: tol,
            closed,
        })
        .collect();
    Ok((map, curves))
}
