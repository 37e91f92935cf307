//! Named presets that regenerate a fixed set of data files.

use std::path::Path;

use erfbp::equilibria::Label;
use erfbp::io::{self, Format};
use erfbp::scan::{self, GridSpec, Region, ScanOptions};

use crate::{equilibrium_doc, region_grid, resonance_curves, MassArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Fig2,
    FigReg1,
    FigZot1CountMap,
    Fig4L3,
    Fig4L5,
    Fig4L6,
    Fig4LT,
    Res11,
    FigCebolla1,
    FigCebolla2,
    FigSimo,
}

pub const NAMES: [(&str, Preset); 11] = [
    ("fig2", Preset::Fig2),
    ("fig_reg1", Preset::FigReg1),
    ("fig_zot1-count-map", Preset::FigZot1CountMap),
    ("fig4L3", Preset::Fig4L3),
    ("fig4L5", Preset::Fig4L5),
    ("fig4L6", Preset::Fig4L6),
    ("fig4LT", Preset::Fig4LT),
    ("res-1-1", Preset::Res11),
    ("fig_cebolla1", Preset::FigCebolla1),
    ("fig_cebolla2", Preset::FigCebolla2),
    ("fig_simo", Preset::FigSimo),
];

pub fn parse_preset(s: &str) -> Result<Preset, String> {
    NAMES.iter().find(|(n, _)| *n == s).map(|(_, p)| *p).ok_or_else(|| {
        let known: Vec<&str> = NAMES.iter().map(|(n, _)| *n).collect();
        format!("unknown preset '{s}' (one of: {})", known.join(", "))
    })
}

const RATIOS: [(u32, u32); 3] = [(1, 1), (2, 1), (3, 1)];
const TRIANGULAR: [Label; 3] = [Label::L3, Label::L5, Label::L6];

fn write(dir: &Path, name: &str, buf: Vec<u8>) -> erfbp::Result<()> {
    std::fs::write(dir.join(name), buf)?;
    Ok(())
}

fn curves_file(dir: &Path, name: &str, label: Label, ratio: (u32, u32), grid: &GridSpec) -> erfbp::Result<()> {
    let curves = resonance_curves(label, ratio, grid, 1e-8, true)?;
    let mut buf = Vec::new();
    io::write_curves(&curves, Format::Csv, &mut buf)?;
    write(dir, name, buf)
}

fn stability_map(dir: &Path, name: &str, region: Region) -> erfbp::Result<()> {
    let grid = region_grid(region, None)?;
    let opts = ScanOptions { counts: false, labels: TRIANGULAR.to_vec(), ..ScanOptions::region() };
    let map = scan::scan_with(&grid, &opts)?;
    let mut buf = Vec::new();
    io::write_region_map_csv(&map, &mut buf)?;
    write(dir, name, buf)
}

fn family_curves(dir: &Path, label: Label, regions: &[Region]) -> erfbp::Result<()> {
    for &r in regions {
        let grid = region_grid(r, None)?;
        for ratio in RATIOS {
            curves_file(dir, &format!("resonance_{label}_{}-{}_region{r}.csv", ratio.0, ratio.1), label, ratio, &grid)?;
        }
    }
    Ok(())
}

pub fn run(preset: Preset, dir: &Path) -> erfbp::Result<()> {
    std::fs::create_dir_all(dir)?;
    match preset {
        Preset::Fig2 => {
            for (m1, m2) in [(0.02, 0.015), (0.4, 0.35)] {
                let m = MassArgs { m1, m2, newton_tol: 1e-11, search_resolution: 400 };
                let mut buf = Vec::new();
                io::write_equilibria(&equilibrium_doc(&m, false)?, Format::Json, &mut buf)?;
                write(dir, &format!("equilibria_{m1}_{m2}.json"), buf)?;
            }
        }
        Preset::FigReg1 => {
            let mut buf = Vec::new();
            io::write_curves(&scan::routh_curve(400), Format::Csv, &mut buf)?;
            write(dir, "routh.csv", buf)?;
        }
        Preset::FigZot1CountMap => {
            let grid = region_grid(Region::Simplex, None)?;
            let map = scan::scan_with(&grid, &ScanOptions::counts_only())?;
            let mut buf = Vec::new();
            io::write_region_map_csv(&map, &mut buf)?;
            write(dir, "count_map.csv", buf)?;
            let mut buf = Vec::new();
            io::write_curves(&scan::extract_bifurcation(&map).curves, Format::Csv, &mut buf)?;
            write(dir, "bifurcation.csv", buf)?;
        }
        Preset::Fig4L3 => family_curves(dir, Label::L3, &[Region::I, Region::III])?,
        Preset::Fig4L5 => family_curves(dir, Label::L5, &[Region::I, Region::III])?,
        Preset::Fig4L6 => family_curves(dir, Label::L6, &[Region::I, Region::III])?,
        Preset::Fig4LT => {
            for l in TRIANGULAR {
                family_curves(dir, l, &[Region::I])?;
            }
        }
        Preset::Res11 => {
            for r in [Region::I, Region::II, Region::III] {
                let grid = region_grid(r, None)?;
                for l in TRIANGULAR {
                    curves_file(dir, &format!("resonance_{l}_1-1_region{r}.csv"), l, (1, 1), &grid)?;
                }
            }
        }
        Preset::FigCebolla1 => stability_map(dir, "stability_regionI.csv", Region::I)?,
        Preset::FigCebolla2 => stability_map(dir, "stability_regionIII.csv", Region::III)?,
        Preset::FigSimo => {
            stability_map(dir, "stability_regionI.csv", Region::I)?;
            let grid = region_grid(Region::I, None)?;
            for l in TRIANGULAR {
                curves_file(dir, &format!("resonance_{l}_1-1_regionI.csv"), l, (1, 1), &grid)?;
            }
            let mut buf = Vec::new();
            io::write_curves(&scan::routh_curve(400), Format::Csv, &mut buf)?;
            write(dir, "routh.csv", buf)?;
        }
    }
    Ok(())
}
