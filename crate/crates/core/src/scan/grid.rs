use serde::Serialize;

use crate::error::{ErfbpError, Result};
use crate::model::{routh_polynomial, MassTriple};

/// Side of the square boxes used for the Lagrange-stable regions.
pub const REGION_BOX: f64 = 0.04;
pub const DEFAULT_MARGIN: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Region {
    Simplex,
    /// m3 dominant (lower-left corner of the (m1, m2) plane).
    I,
    /// m1 dominant (lower-right corner).
    II,
    /// m2 dominant (upper-left corner).
    III,
    Rect,
}

impl std::str::FromStr for Region {
    type Err = ErfbpError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "simplex" | "full" => Ok(Region::Simplex),
            "i" | "1" => Ok(Region::I),
            "ii" | "2" => Ok(Region::II),
            "iii" | "3" => Ok(Region::III),
            _ => Err(ErfbpError::InvalidInput(format!("unknown region '{s}'"))),
        }
    }
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Region::Simplex => "simplex",
            Region::I => "I",
            Region::II => "II",
            Region::III => "III",
            Region::Rect => "rect",
        };
        f.write_str(s)
    }
}

/// Cell-centred grid over a rectangle of the (m1, m2) plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub region: Region,
    pub m1_range: (f64, f64),
    pub m2_range: (f64, f64),
    pub resolution: usize,
    pub margin: f64,
}

impl GridSpec {
    pub fn new(region: Region, resolution: usize) -> Self {
        let (m1_range, m2_range) = match region {
            Region::Simplex | Region::Rect => ((0.0, 1.0), (0.0, 1.0)),
            Region::I => ((0.0, REGION_BOX), (0.0, REGION_BOX)),
            Region::II => ((1.0 - REGION_BOX, 1.0), (0.0, REGION_BOX)),
            Region::III => ((0.0, REGION_BOX), (1.0 - REGION_BOX, 1.0)),
        };
        Self { region, m1_range, m2_range, resolution, margin: DEFAULT_MARGIN }
    }

    pub fn rect(m1_range: (f64, f64), m2_range: (f64, f64), resolution: usize) -> Self {
        Self { region: Region::Rect, m1_range, m2_range, resolution, margin: DEFAULT_MARGIN }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.resolution >= 2
            && self.m1_range.0 < self.m1_range.1
            && self.m2_range.0 < self.m2_range.1
            && self.margin > 0.0;
        if ok {
            Ok(())
        } else {
            Err(ErfbpError::InvalidInput("invalid grid specification".into()))
        }
    }

    pub fn cell_size(&self) -> (f64, f64) {
        let n = self.resolution as f64;
        ((self.m1_range.1 - self.m1_range.0) / n, (self.m2_range.1 - self.m2_range.0) / n)
    }

    pub fn diagonal(&self) -> f64 {
        let (a, b) = self.cell_size();
        a.hypot(b)
    }

    pub fn len(&self) -> usize {
        self.resolution * self.resolution
    }

    pub fn is_empty(&self) -> bool {
        self.resolution == 0
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.resolution + i
    }

    pub fn center(&self, i: usize, j: usize) -> [f64; 2] {
        let (d1, d2) = self.cell_size();
        [self.m1_range.0 + (i as f64 + 0.5) * d1, self.m2_range.0 + (j as f64 + 0.5) * d2]
    }

    /// Cell containing (or nearest to) a mass point.
    pub fn locate(&self, m: [f64; 2]) -> (usize, usize) {
        let (d1, d2) = self.cell_size();
        let n = self.resolution as f64;
        let i = ((m[0] - self.m1_range.0) / d1).floor().clamp(0.0, n - 1.0);
        let j = ((m[1] - self.m2_range.0) / d2).floor().clamp(0.0, n - 1.0);
        (i as usize, j as usize)
    }

    /// Cell centre strictly inside the simplex by the margin.
    pub fn is_valid(&self, i: usize, j: usize) -> bool {
        let [a, b] = self.center(i, j);
        a > self.margin && b > self.margin && 1.0 - a - b > self.margin
    }

    pub fn masses(&self, i: usize, j: usize) -> Option<MassTriple> {
        if !self.is_valid(i, j) {
            return None;
        }
        let [a, b] = self.center(i, j);
        MassTriple::from_pair(a, b).ok()
    }

    /// Membership of a cell centre in the Lagrange-stable region of this grid.
    pub fn in_region(&self, i: usize, j: usize) -> bool {
        self.is_valid(i, j) && region_of(self.center(i, j)) == Some(self.region)
    }

    /// Mirror cell under m1 <-> m2 between region II and region III grids.
    pub fn mirror(&self, i: usize, j: usize) -> (usize, usize) {
        (j, i)
    }
}

/// Lagrange-stable region (Routh quantity negative) containing a mass point.
pub fn region_of(m: [f64; 2]) -> Option<Region> {
    let m3 = 1.0 - m[0] - m[1];
    if m[0] <= 0.0 || m[1] <= 0.0 || m3 <= 0.0 || routh_polynomial(m[0], m[1]) >= 0.0 {
        return None;
    }
    if m3 > 0.5 {
        Some(Region::I)
    } else if m[0] > 0.5 {
        Some(Region::II)
    } else if m[1] > 0.5 {
        Some(Region::III)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn region_boxes_contain_regions() {
        assert_eq!(region_of([0.005, 0.005]), Some(Region::I));
        assert_eq!(region_of([0.98, 0.01]), Some(Region::II));
        assert_eq!(region_of([0.01, 0.98]), Some(Region::III));
        assert_eq!(region_of([0.3, 0.3]), None);
        let g2 = GridSpec::new(Region::II, 50);
        let g3 = GridSpec::new(Region::III, 50);
        for (i, j) in [(0, 0), (3, 17), (49, 2)] {
            let a = g2.center(i, j);
            let (mi, mj) = g2.mirror(i, j);
            let b = g3.center(mi, mj);
            assert_eq!(a, [b[1], b[0]]);
            assert_eq!(g2.in_region(i, j), g3.in_region(mi, mj));
        }
    }
}
