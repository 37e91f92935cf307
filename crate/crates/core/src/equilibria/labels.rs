//! Family labels L1..L10.
//!
//! The reference atlas at masses (0.4, 0.35) is labelled geometrically from the
//! barycentric coordinates (b1, b2, b3) of each point:
//!
//! | region                         | label |
//! |--------------------------------|-------|
//! | beyond vertex m1 / m2 / m3     | L1 / L2 / L4 |
//! | beyond edge 3-1 (b2 < 0)       | L3 |
//! | beyond edge 1-2 (b3 < 0)       | L5 |
//! | beyond edge 2-3 (b1 < 0)       | L6 |
//! | inside, saddle nearest edge 3-1 / 2-3 / 1-2 | L7 / L8 / L9 |
//! | inside, det H > 0              | L10 |
//!
//! Other masses are labelled by continuing every reference family along the
//! straight mass segment from the reference. When L10 annihilates with Lx
//! (x ≠ 9) the surviving L9 family inherits Lx, so points with eight
//! equilibria carry L1..L8.

use std::sync::OnceLock;

use crate::error::{ErfbpError, Result};
use crate::model::{build_configuration_with, MassTriple, ModelOptions, PrimaryConfiguration};

use super::continuation::{track_segment, FoldPoint, StepControl, Termination};
use super::{barycentric, find_equilibria, find_equilibria_in, EquilibriumSet, Label, NewtonSettings, SearchGrid};

pub const REFERENCE_MASSES: (f64, f64) = (0.4, 0.35);

/// Geometric label used for the reference atlas.
pub fn geometric_label(p: [f64; 2], det: f64, config: &PrimaryConfiguration) -> Label {
    let b = barycentric(p, config);
    let neg: Vec<usize> = (0..3).filter(|&i| b[i] < 0.0).collect();
    match neg.as_slice() {
        [] if det > 0.0 => Label::L10,
        [] => {
            let imin = (0..3).fold(0, |a, i| if b[i] < b[a] { i } else { a });
            [Label::L8, Label::L7, Label::L9][imin]
        }
        [k] => [Label::L6, Label::L3, Label::L5][*k],
        _ => {
            let vertex = (0..3).find(|i| b[*i] >= 0.0).unwrap_or(0);
            [Label::L1, Label::L2, Label::L4][vertex]
        }
    }
}

pub fn reference_masses() -> MassTriple {
    MassTriple::from_pair(REFERENCE_MASSES.0, REFERENCE_MASSES.1).expect("valid reference masses")
}

/// The labelled equilibrium set at the reference masses.
pub fn reference_atlas() -> &'static EquilibriumSet {
    static ATLAS: OnceLock<EquilibriumSet> = OnceLock::new();
    ATLAS.get_or_init(|| {
        let m = reference_masses();
        let cfg = build_configuration_with(m, &ModelOptions::default()).expect("reference configuration");
        let mut set = find_equilibria(m, &SearchGrid::default(), 1e-11).expect("reference equilibria");
        for p in &mut set.points {
            p.label = geometric_label(p.position, p.degeneracy, &cfg);
        }
        set.points.sort_by_key(|p| p.label);
        set
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrackedFamily {
    pub label: Label,
    pub position: Option<[f64; 2]>,
    pub termination: Termination,
    pub fold: Option<FoldPoint>,
}

/// Continues all reference families to `target` and applies the fold transfer.
pub fn track_reference(target: MassTriple, control: &StepControl) -> Vec<TrackedFamily> {
    let atlas = reference_atlas();
    let mut fams: Vec<TrackedFamily> = atlas
        .points
        .iter()
        .map(|p| {
            let tr = track_segment(p.position, atlas.masses, target, control);
            TrackedFamily {
                label: p.label,
                position: tr.end(),
                termination: tr.termination,
                fold: tr.fold,
            }
        })
        .collect();
    apply_fold_transfer(&mut fams);
    fams
}

pub(crate) fn apply_fold_transfer(fams: &mut [TrackedFamily]) {
    let find = |fams: &[TrackedFamily], l: Label| fams.iter().position(|f| f.label == l);
    let Some(i10) = find(fams, Label::L10) else { return };
    let Some(f10) = fams[i10].fold else { return };
    let partner = fams
        .iter()
        .enumerate()
        .filter(|(i, f)| *i != i10 && f.fold.is_some())
        .min_by(|a, b| {
            let d = |f: &TrackedFamily| {
                let p = f.fold.unwrap();
                (p.position[0] - f10.position[0]).hypot(p.position[1] - f10.position[1]) + (p.t - f10.t).abs()
            };
            d(a.1).total_cmp(&d(b.1))
        })
        .map(|(_, f)| f.label);
    if let (Some(lx), Some(i9)) = (partner, find(fams, Label::L9)) {
        if lx != Label::L9 && fams[i9].position.is_some() {
            fams[i9].label = lx;
            if let Some(ix) = fams.iter().position(|f| f.label == lx && f.position.is_none()) {
                fams[ix].label = Label::Unlabeled;
            }
        }
    }
}

/// Labelled positions of every family alive at `target`.
pub fn reference_families(target: MassTriple, control: &StepControl) -> Vec<(Label, [f64; 2])> {
    track_reference(target, control)
        .into_iter()
        .filter_map(|f| f.position.map(|p| (f.label, p)))
        .filter(|(l, _)| *l != Label::Unlabeled)
        .collect()
}

pub fn label_equilibria(set: &EquilibriumSet) -> Result<EquilibriumSet> {
    let cfg = build_configuration_with(set.masses, &ModelOptions::degenerate())?;
    label_with_config(set, &cfg, &StepControl::default())
}

pub fn label_with_config(
    set: &EquilibriumSet,
    config: &PrimaryConfiguration,
    control: &StepControl,
) -> Result<EquilibriumSet> {
    if !(8..=10).contains(&set.count) {
        return Err(ErfbpError::LabelAmbiguity(format!(
            "cannot label a set of {} equilibria",
            set.count
        )));
    }
    let control = StepControl { collision_tol: config.collision_tol, ..*control };
    let fams = reference_families(set.masses, &control);
    let mut out = set.clone();
    let mut used: Vec<Label> = Vec::new();
    for p in &mut out.points {
        let hits: Vec<Label> = fams
            .iter()
            .filter(|(_, q)| (q[0] - p.position[0]).hypot(q[1] - p.position[1]) < 1e-7)
            .map(|(l, _)| *l)
            .collect();
        p.label = match hits.as_slice() {
            [l] => *l,
            _ => Label::Unlabeled,
        };
        p.fold = false;
        if p.label != Label::Unlabeled {
            used.push(p.label);
        }
    }
    // roots born along the path take the free inside labels
    for p in &mut out.points {
        if p.label == Label::Unlabeled {
            let want = if p.degeneracy > 0.0 { Label::L10 } else { Label::L9 };
            if !used.contains(&want) {
                p.label = want;
                used.push(want);
            } else {
                p.fold = p.degeneracy.abs() < control.degeneracy_tol;
            }
        }
    }
    Ok(out)
}

/// Finds all equilibria and labels them when the count admits labelling.
///
/// Sets outside the 8..=10 range (degenerate-limit masses) come back unlabelled.
pub fn find_labeled(
    config: &PrimaryConfiguration,
    grid: &SearchGrid,
    newton: &NewtonSettings,
) -> Result<EquilibriumSet> {
    let set = find_equilibria_in(config, grid, newton)?;
    let mut out = if (8..=10).contains(&set.count) {
        label_with_config(&set, config, &StepControl::default())?
    } else {
        set
    };
    out.points.sort_by(|a, b| a.label.cmp(&b.label).then(a.position.partial_cmp(&b.position).unwrap()));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_atlas_has_all_labels() {
        let a = reference_atlas();
        let labels: Vec<Label> = a.points.iter().map(|p| p.label).collect();
        assert_eq!(labels, Label::ALL.to_vec());
    }

    #[test]
    fn eight_regime_gets_first_eight_labels() {
        let m = MassTriple::from_pair(0.02, 0.015).unwrap();
        let set = find_equilibria(m, &SearchGrid::default(), 1e-11).unwrap();
        let lab = label_equilibria(&set).unwrap();
        let mut ls: Vec<Label> = lab.points.iter().map(|p| p.label).collect();
        ls.sort();
        assert_eq!(ls, Label::ALL[..8].to_vec());
    }
}
