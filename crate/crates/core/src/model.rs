//! Primary configuration, effective potential and rotating-frame dynamics.

use serde::{Deserialize, Serialize};

use crate::error::{ErfbpError, Result};

/// Routh critical mass ratio, root of m(1 - m) = 1/27.
pub const MU_ROUTH: f64 = 0.038_520_896_504_551_37;

pub const DEFAULT_MASS_FLOOR: f64 = 1e-9;
pub const DEFAULT_COLLISION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelOptions {
    pub mass_floor: f64,
    pub collision_tol: f64,
    /// Allows masses below the floor (down to zero) for three-body cross-checks.
    pub degenerate_limit: bool,
}

impl Default for ModelOptions {
    fn default() -> Self {
        Self {
            mass_floor: DEFAULT_MASS_FLOOR,
            collision_tol: DEFAULT_COLLISION_TOL,
            degenerate_limit: false,
        }
    }
}

impl ModelOptions {
    pub fn degenerate() -> Self {
        Self { degenerate_limit: true, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassTriple {
    pub m1: f64,
    pub m2: f64,
    pub m3: f64,
}

impl MassTriple {
    /// Normalizes to unit total mass and checks the default floor.
    pub fn new(m1: f64, m2: f64, m3: f64) -> Result<Self> {
        Self::with_options(m1, m2, m3, &ModelOptions::default())
    }

    /// Free parameters (m1, m2) with m3 = 1 - m1 - m2.
    pub fn from_pair(m1: f64, m2: f64) -> Result<Self> {
        Self::with_options(m1, m2, 1.0 - m1 - m2, &ModelOptions::default())
    }

    pub fn from_pair_with(m1: f64, m2: f64, opts: &ModelOptions) -> Result<Self> {
        Self::with_options(m1, m2, 1.0 - m1 - m2, opts)
    }

    pub fn with_options(m1: f64, m2: f64, m3: f64, opts: &ModelOptions) -> Result<Self> {
        let raw = [m1, m2, m3];
        if raw.iter().any(|m| !m.is_finite()) {
            return Err(ErfbpError::InvalidMasses(format!("non-finite mass in {raw:?}")));
        }
        let names = ["m1", "m2", "m3"];
        // small negative round-off on the derived mass is tolerated
        for (name, &m) in names.iter().zip(&raw) {
            if m < -1e-15 {
                return Err(ErfbpError::MassOutOfRange { name, value: m, floor: 0.0 });
            }
        }
        let sum: f64 = raw.iter().map(|m| m.max(0.0)).sum();
        if sum <= 0.0 {
            return Err(ErfbpError::InvalidMasses("total mass must be positive".into()));
        }
        let mut m = raw.map(|v| v.max(0.0) / sum);
        // put the rounding remainder on the largest mass
        let imax = (0..3).fold(0, |a, i| if m[i] > m[a] { i } else { a });
        m[imax] = 1.0 - m.iter().enumerate().filter(|(i, _)| *i != imax).map(|(_, v)| v).sum::<f64>();
        let floor = if opts.degenerate_limit { 0.0 } else { opts.mass_floor };
        for (name, &v) in names.iter().zip(&m) {
            if v < floor {
                return Err(ErfbpError::MassOutOfRange { name, value: v, floor });
            }
        }
        Ok(Self { m1: m[0], m2: m[1], m3: m[2] })
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.m1, self.m2, self.m3]
    }

    /// The m2 <-> m3 relabelled triple.
    pub fn swap23(&self) -> Self {
        Self { m1: self.m1, m2: self.m3, m3: self.m2 }
    }

    pub fn k_constant(&self) -> f64 {
        let [m1, m2, m3] = self.as_array();
        m2 * (m3 - m2) + m1 * (m2 + 2.0 * m3)
    }
}

pub fn routh_quantity(masses: &MassTriple) -> f64 {
    let [m1, m2, m3] = masses.as_array();
    m1 * m2 + m1 * m3 + m2 * m3 - 1.0 / 27.0
}

/// Routh quantity as a polynomial in the free parameters (valid off the simplex too).
pub fn routh_polynomial(m1: f64, m2: f64) -> f64 {
    let m3 = 1.0 - m1 - m2;
    m1 * m2 + m1 * m3 + m2 * m3 - 1.0 / 27.0
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrimaryConfiguration {
    pub masses: MassTriple,
    pub positions: [[f64; 2]; 3],
    pub k: f64,
    /// Set when K vanishes; the geometric construction is still valid there.
    pub k_degenerate: bool,
    pub collision_tol: f64,
}

pub fn build_configuration(masses: MassTriple) -> Result<PrimaryConfiguration> {
    build_configuration_with(masses, &ModelOptions::default())
}

pub fn build_configuration_with(
    masses: MassTriple,
    opts: &ModelOptions,
) -> Result<PrimaryConfiguration> {
    let m = masses.as_array();
    let floor = if opts.degenerate_limit { 0.0 } else { opts.mass_floor };
    for (name, &v) in ["m1", "m2", "m3"].iter().zip(&m) {
        if v < floor || !v.is_finite() {
            return Err(ErfbpError::MassOutOfRange { name, value: v, floor });
        }
    }
    let rc = 1.0 / 3f64.sqrt();
    let mut q = [[0.0; 2]; 3];
    for (k, qk) in q.iter_mut().enumerate() {
        let th = 2.0 * std::f64::consts::PI * k as f64 / 3.0;
        *qk = [rc * th.cos(), rc * th.sin()];
    }
    let c = [
        m[0] * q[0][0] + m[1] * q[1][0] + m[2] * q[2][0],
        m[0] * q[0][1] + m[1] * q[1][1] + m[2] * q[2][1],
    ];
    for qk in q.iter_mut() {
        qk[0] -= c[0];
        qk[1] -= c[1];
    }
    let r1 = q[0][0].hypot(q[0][1]);
    if r1 < 1e-14 {
        return Err(ErfbpError::DegenerateK);
    }
    let (s, co) = (q[0][1] / r1, q[0][0] / r1);
    let mut positions = [[0.0; 2]; 3];
    for (p, qk) in positions.iter_mut().zip(&q) {
        *p = [co * qk[0] + s * qk[1], -s * qk[0] + co * qk[1]];
    }
    positions[0][1] = 0.0;
    let k = masses.k_constant();
    Ok(PrimaryConfiguration {
        masses,
        positions,
        k,
        k_degenerate: k.abs() < 1e-14,
        collision_tol: opts.collision_tol,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Hessian {
    pub xx: f64,
    pub xy: f64,
    pub yy: f64,
}

impl Hessian {
    pub fn det(&self) -> f64 {
        self.xx * self.yy - self.xy * self.xy
    }

    pub fn trace(&self) -> f64 {
        self.xx + self.yy
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialEvaluation {
    pub omega: f64,
    pub grad: Option<[f64; 2]>,
    pub hessian: Option<Hessian>,
}

impl PrimaryConfiguration {
    pub fn masses_array(&self) -> [f64; 3] {
        self.masses.as_array()
    }

    /// Index and distance of the closest primary.
    pub fn nearest_primary(&self, p: [f64; 2]) -> (usize, f64) {
        let mut best = (0, f64::INFINITY);
        for (i, q) in self.positions.iter().enumerate() {
            let d = (p[0] - q[0]).hypot(p[1] - q[1]);
            if d < best.1 {
                best = (i, d);
            }
        }
        best
    }

    pub fn check_position(&self, p: [f64; 2]) -> Result<()> {
        let (i, d) = self.nearest_primary(p);
        if !(d > self.collision_tol) {
            return Err(ErfbpError::CollisionSingularity { x: p[0], y: p[1], primary: i + 1 });
        }
        Ok(())
    }

    pub fn omega(&self, p: [f64; 2]) -> f64 {
        let m = self.masses_array();
        let mut v = 0.5 * (p[0] * p[0] + p[1] * p[1]);
        for (mi, q) in m.iter().zip(&self.positions) {
            v += mi / (p[0] - q[0]).hypot(p[1] - q[1]);
        }
        v
    }

    /// Unchecked gradient of the effective potential.
    #[inline]
    pub fn gradient(&self, p: [f64; 2]) -> [f64; 2] {
        let m = self.masses_array();
        let mut g = p;
        for (mi, q) in m.iter().zip(&self.positions) {
            let (dx, dy) = (p[0] - q[0], p[1] - q[1]);
            let r2 = dx * dx + dy * dy;
            let f = mi / (r2 * r2.sqrt());
            g[0] -= f * dx;
            g[1] -= f * dy;
        }
        g
    }

    /// Unchecked gradient and Hessian.
    #[inline]
    pub fn gradient_hessian(&self, p: [f64; 2]) -> ([f64; 2], Hessian) {
        let m = self.masses_array();
        let mut g = p;
        let mut h = Hessian { xx: 1.0, xy: 0.0, yy: 1.0 };
        for (mi, q) in m.iter().zip(&self.positions) {
            let (dx, dy) = (p[0] - q[0], p[1] - q[1]);
            let r2 = dx * dx + dy * dy;
            let r3 = r2 * r2.sqrt();
            let f = mi / r3;
            let f5 = f / r2;
            g[0] -= f * dx;
            g[1] -= f * dy;
            h.xx += f5 * (2.0 * dx * dx - dy * dy);
            h.yy += f5 * (2.0 * dy * dy - dx * dx);
            h.xy += 3.0 * f5 * dx * dy;
        }
        (g, h)
    }

    /// Σ mᵢ/rᵢ³, the non-centrifugal part of the Hessian trace.
    pub fn inverse_cube_sum(&self, p: [f64; 2]) -> f64 {
        let m = self.masses_array();
        m.iter()
            .zip(&self.positions)
            .map(|(mi, q)| {
                let r = (p[0] - q[0]).hypot(p[1] - q[1]);
                mi / (r * r * r)
            })
            .sum()
    }

    pub fn swapped23(&self) -> Result<PrimaryConfiguration> {
        let opts = ModelOptions {
            collision_tol: self.collision_tol,
            degenerate_limit: true,
            ..ModelOptions::default()
        };
        build_configuration_with(self.masses.swap23(), &opts)
    }
}

pub fn evaluate_potential(
    pos: [f64; 2],
    config: &PrimaryConfiguration,
    order: u8,
) -> Result<PotentialEvaluation> {
    config.check_position(pos)?;
    let omega = config.omega(pos);
    Ok(match order {
        0 => PotentialEvaluation { omega, grad: None, hessian: None },
        1 => PotentialEvaluation { omega, grad: Some(config.gradient(pos)), hessian: None },
        _ => {
            let (g, h) = config.gradient_hessian(pos);
            PotentialEvaluation { omega, grad: Some(g), hessian: Some(h) }
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseState {
    pub x: f64,
    pub y: f64,
    pub vx: f64,
    pub vy: f64,
}

impl PhaseState {
    pub fn new(x: f64, y: f64, vx: f64, vy: f64) -> Self {
        Self { x, y, vx, vy }
    }

    pub fn at_rest(p: [f64; 2]) -> Self {
        Self::new(p[0], p[1], 0.0, 0.0)
    }

    pub fn position(&self) -> [f64; 2] {
        [self.x, self.y]
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.x, self.y, self.vx, self.vy]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }
}

/// Time derivative (vx, vy, 2vy + Ωx, -2vx + Ωy).
pub fn equations_of_motion(state: &PhaseState, config: &PrimaryConfiguration) -> Result<PhaseState> {
    if !state.to_array().iter().all(|v| v.is_finite()) {
        return Err(ErfbpError::InvalidInput("non-finite phase state".into()));
    }
    config.check_position(state.position())?;
    let g = config.gradient(state.position());
    Ok(PhaseState::new(
        state.vx,
        state.vy,
        2.0 * state.vy + g[0],
        -2.0 * state.vx + g[1],
    ))
}

pub fn jacobi_constant(state: &PhaseState, config: &PrimaryConfiguration) -> Result<f64> {
    config.check_position(state.position())?;
    Ok(2.0 * config.omega(state.position()) - (state.vx * state.vx + state.vy * state.vy))
}

#[derive(Serialize)]
struct ConfigRecord {
    m1: f64,
    m2: f64,
    m3: f64,
    x1: f64,
    y1: f64,
    x2: f64,
    y2: f64,
    x3: f64,
    y3: f64,
    #[serde(rename = "K")]
    k: f64,
    k_degenerate: bool,
}

impl Serialize for PrimaryConfiguration {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let p = &self.positions;
        ConfigRecord {
            m1: self.masses.m1,
            m2: self.masses.m2,
            m3: self.masses.m3,
            x1: p[0][0],
            y1: p[0][1],
            x2: p[1][0],
            y2: p[1][1],
            x3: p[2][0],
            y3: p[2][1],
            k: self.k,
            k_degenerate: self.k_degenerate,
        }
        .serialize(s)
    }
}
