//! Labelled equilibrium families sampled over a mass grid by a breadth-first
//! continuation walk from a seed cell.

use std::collections::VecDeque;

use crate::equilibria::labels::reference_families;
use crate::equilibria::{track_segment, Label, StepControl, Termination};
use crate::model::{build_configuration_with, MassTriple, ModelOptions, PrimaryConfiguration};
use crate::stability::{classify, resonance_function, Classification};

use super::grid::GridSpec;

/// Step control for short hops between neighbouring cells.
pub fn walk_control() -> StepControl {
    StepControl { initial_step: 1.0, max_step: 1.0, ..StepControl::default() }
}

#[derive(Debug, Clone)]
pub struct FamilyField {
    pub grid: GridSpec,
    pub labels: Vec<Label>,
    /// `positions[cell][k]` is the position of family `labels[k]`.
    pub positions: Vec<Vec<Option<[f64; 2]>>>,
}

fn masses_at(m: [f64; 2]) -> Option<MassTriple> {
    let m3 = 1.0 - m[0] - m[1];
    if m[0] < 0.0 || m[1] < 0.0 || m3 < 0.0 {
        return None;
    }
    Some(MassTriple { m1: m[0], m2: m[1], m3 })
}

pub fn config_at(m: [f64; 2]) -> Option<PrimaryConfiguration> {
    build_configuration_with(masses_at(m)?, &ModelOptions::degenerate()).ok()
}

impl FamilyField {
    /// Walks the given families over every valid cell of `grid`.
    pub fn walk(grid: &GridSpec, labels: &[Label]) -> FamilyField {
        let n = grid.resolution;
        let mut positions = vec![vec![None; labels.len()]; grid.len()];
        let Some(seed) = seed_cell(grid) else {
            return FamilyField { grid: *grid, labels: labels.to_vec(), positions };
        };
        let seed_masses = grid.masses(seed.0, seed.1).expect("seed cell valid");
        let fams = reference_families(seed_masses, &StepControl::default());
        for (k, l) in labels.iter().enumerate() {
            positions[grid.index(seed.0, seed.1)][k] = fams.iter().find(|f| f.0 == *l).map(|f| f.1);
        }
        let control = walk_control();
        let mut visited = vec![false; grid.len()];
        visited[grid.index(seed.0, seed.1)] = true;
        let mut queue = VecDeque::from([seed]);
        while let Some((i, j)) = queue.pop_front() {
            let from = grid.masses(i, j).expect("queued cells are valid");
            let src = positions[grid.index(i, j)].clone();
            let nbrs = [
                (i.wrapping_sub(1), j),
                (i + 1, j),
                (i, j.wrapping_sub(1)),
                (i, j + 1),
            ];
            for (a, b) in nbrs {
                if a >= n || b >= n || visited[grid.index(a, b)] || !grid.is_valid(a, b) {
                    continue;
                }
                visited[grid.index(a, b)] = true;
                let to = grid.masses(a, b).expect("valid cell");
                let dst: Vec<Option<[f64; 2]>> = src
                    .iter()
                    .map(|p| {
                        let z = (*p)?;
                        let tr = track_segment(z, from, to, &control);
                        (tr.termination == Termination::PathEnd).then(|| tr.samples.last().unwrap().1)
                    })
                    .collect();
                positions[grid.index(a, b)] = dst;
                queue.push_back((a, b));
            }
        }
        FamilyField { grid: *grid, labels: labels.to_vec(), positions }
    }

    pub fn slot(&self, label: Label) -> Option<usize> {
        self.labels.iter().position(|l| *l == label)
    }

    pub fn position(&self, i: usize, j: usize, label: Label) -> Option<[f64; 2]> {
        self.positions[self.grid.index(i, j)][self.slot(label)?]
    }

    pub fn coefficients(&self, i: usize, j: usize, label: Label) -> Option<(f64, f64)> {
        let p = self.position(i, j, label)?;
        let cfg = config_at(self.grid.center(i, j))?;
        crate::stability::coefficients_at(p, &cfg).ok()
    }

    pub fn classification(&self, i: usize, j: usize, label: Label) -> Option<Classification> {
        self.coefficients(i, j, label).map(|(c2, c0)| classify(c2, c0))
    }

    /// Continues a family from the nearest sampled cell to arbitrary masses.
    pub fn probe(&self, label: Label) -> FamilyProbe<'_> {
        FamilyProbe { field: self, slot: self.slot(label) }
    }
}

fn seed_cell(grid: &GridSpec) -> Option<(usize, usize)> {
    let n = grid.resolution;
    let mid = [
        0.5 * (grid.m1_range.0 + grid.m1_range.1),
        0.5 * (grid.m2_range.0 + grid.m2_range.1),
    ];
    let mut best: Option<((usize, usize), f64)> = None;
    for j in 0..n {
        for i in 0..n {
            if !grid.is_valid(i, j) {
                continue;
            }
            let [a, b] = grid.center(i, j);
            // prefer well-interior cells
            let m3 = 1.0 - a - b;
            let d = (a - mid[0]).hypot(b - mid[1]) - 0.5 * a.min(b).min(m3);
            if best.map_or(true, |x| d < x.1) {
                best = Some(((i, j), d));
            }
        }
    }
    best.map(|b| b.0)
}

pub struct FamilyProbe<'a> {
    field: &'a FamilyField,
    slot: Option<usize>,
}

impl FamilyProbe<'_> {
    pub fn position(&self, m: [f64; 2]) -> Option<[f64; 2]> {
        let k = self.slot?;
        let g = &self.field.grid;
        let (ci, cj) = g.locate(m);
        let n = g.resolution as isize;
        let mut best: Option<((usize, usize), f64)> = None;
        for dj in -2isize..=2 {
            for di in -2isize..=2 {
                let (a, b) = (ci as isize + di, cj as isize + dj);
                if a < 0 || b < 0 || a >= n || b >= n {
                    continue;
                }
                let (a, b) = (a as usize, b as usize);
                if self.field.positions[g.index(a, b)][k].is_none() {
                    continue;
                }
                let c = g.center(a, b);
                let d = (c[0] - m[0]).hypot(c[1] - m[1]);
                if best.map_or(true, |x| d < x.1) {
                    best = Some(((a, b), d));
                }
            }
        }
        let ((a, b), _) = best?;
        let z = self.field.positions[g.index(a, b)][k]?;
        let from = g.masses(a, b)?;
        let to = masses_at(m)?;
        let tr = track_segment(z, from, to, &walk_control());
        (tr.termination == Termination::PathEnd).then(|| tr.samples.last().unwrap().1)
    }

    pub fn coefficients(&self, m: [f64; 2]) -> Option<(f64, f64)> {
        let p = self.position(m)?;
        crate::stability::coefficients_at(p, &config_at(m)?).ok()
    }

    pub fn resonance(&self, m: [f64; 2], p: u32, q: u32) -> Option<f64> {
        self.coefficients(m).map(|(c2, c0)| resonance_function(c2, c0, p, q))
    }

    pub fn stability_margin(&self, m: [f64; 2]) -> Option<f64> {
        self.coefficients(m).map(|(c2, c0)| stability_margin(c2, c0))
    }
}

/// min(c2, c0, discriminant): positive exactly on the stable set.
pub fn stability_margin(c2: f64, c0: f64) -> f64 {
    c2.min(c0).min(crate::stability::discriminant(c2, c0))
}
