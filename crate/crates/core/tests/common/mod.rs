//! Independent oracles shared by the property and acceptance suites.
#![allow(dead_code)]

use erfbp::model::PrimaryConfiguration;
use nalgebra::{Complex, Matrix4};

pub fn omega(cfg: &PrimaryConfiguration, p: [f64; 2]) -> f64 {
    let mut v = 0.5 * (p[0] * p[0] + p[1] * p[1]);
    for (m, q) in cfg.masses_array().iter().zip(cfg.positions.iter()) {
        v += m / (p[0] - q[0]).hypot(p[1] - q[1]);
    }
    v
}

fn central_gradient(cfg: &PrimaryConfiguration, p: [f64; 2], h: f64) -> [f64; 2] {
    let dx = (omega(cfg, [p[0] + h, p[1]]) - omega(cfg, [p[0] - h, p[1]])) / (2.0 * h);
    let dy = (omega(cfg, [p[0], p[1] + h]) - omega(cfg, [p[0], p[1] - h])) / (2.0 * h);
    [dx, dy]
}

fn second_differences(cfg: &PrimaryConfiguration, p: [f64; 2], h: f64) -> [f64; 3] {
    let f = |dx: f64, dy: f64| omega(cfg, [p[0] + dx, p[1] + dy]);
    let c = f(0.0, 0.0);
    let xx = (f(h, 0.0) - 2.0 * c + f(-h, 0.0)) / (h * h);
    let yy = (f(0.0, h) - 2.0 * c + f(0.0, -h)) / (h * h);
    let xy = (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4.0 * h * h);
    [xx, xy, yy]
}

/// Step relative to the distance from the nearest primary.
fn step(cfg: &PrimaryConfiguration, p: [f64; 2], rel: f64) -> f64 {
    rel * cfg.positions.iter().map(|q| dist(p, *q)).fold(f64::INFINITY, f64::min)
}

/// Richardson-extrapolated central differences of the potential.
pub fn fd_gradient(cfg: &PrimaryConfiguration, p: [f64; 2]) -> [f64; 2] {
    let h = step(cfg, p, 1e-3);
    let (a, b) = (central_gradient(cfg, p, h), central_gradient(cfg, p, 0.5 * h));
    [(4.0 * b[0] - a[0]) / 3.0, (4.0 * b[1] - a[1]) / 3.0]
}

/// Richardson-extrapolated second differences: (xx, xy, yy).
pub fn fd_hessian(cfg: &PrimaryConfiguration, p: [f64; 2]) -> [f64; 3] {
    let h = step(cfg, p, 1e-2);
    let (a, b) = (second_differences(cfg, p, h), second_differences(cfg, p, 0.5 * h));
    [(4.0 * b[0] - a[0]) / 3.0, (4.0 * b[1] - a[1]) / 3.0, (4.0 * b[2] - a[2]) / 3.0]
}

/// Hessian of the potential summed primary by primary from the point-mass tensor.
pub fn tensor_hessian(cfg: &PrimaryConfiguration, p: [f64; 2]) -> [f64; 3] {
    let mut h = [1.0, 0.0, 1.0];
    for (m, q) in cfg.masses_array().iter().zip(cfg.positions.iter()) {
        let d = [p[0] - q[0], p[1] - q[1]];
        let r2 = d[0] * d[0] + d[1] * d[1];
        let k = m / (r2 * r2 * r2.sqrt());
        h[0] += k * (3.0 * d[0] * d[0] - r2);
        h[1] += k * 3.0 * d[0] * d[1];
        h[2] += k * (3.0 * d[1] * d[1] - r2);
    }
    h
}

/// Linearized rotating-frame vector field at an equilibrium.
pub fn linearization(h: [f64; 3]) -> Matrix4<f64> {
    Matrix4::new(
        0.0, 0.0, 1.0, 0.0, //
        0.0, 0.0, 0.0, 1.0, //
        h[0], h[1], 0.0, 2.0, //
        h[1], h[2], -2.0, 0.0,
    )
}

pub fn eigenvalues_4x4(h: [f64; 3]) -> Vec<Complex<f64>> {
    linearization(h).complex_eigenvalues().iter().copied().collect()
}

/// Largest distance from each of `a` to its nearest partner in `b`, after greedy matching.
pub fn match_error(a: &[Complex<f64>], b: &[Complex<f64>]) -> f64 {
    let mut pool: Vec<Complex<f64>> = b.to_vec();
    let mut worst: f64 = 0.0;
    for x in a {
        let (k, d) = pool
            .iter()
            .enumerate()
            .map(|(k, y)| (k, (x - y).norm()))
            .min_by(|u, v| u.1.partial_cmp(&v.1).unwrap())
            .unwrap();
        worst = worst.max(d);
        pool.swap_remove(k);
    }
    worst
}

/// Lagrange points of the two-body problem formed by primaries `i` and `j`,
/// rotating at unit rate about the origin: three collinear points found by
/// bisection along the line through the primaries, two closed-form apexes.
pub fn lagrange_points(cfg: &PrimaryConfiguration, i: usize, j: usize) -> Vec<[f64; 2]> {
    let m = cfg.masses_array();
    let (a, b) = (cfg.positions[i], cfg.positions[j]);
    let (ma, mb) = (m[i], m[j]);
    let len = (b[0] - a[0]).hypot(b[1] - a[1]);
    let u = [(b[0] - a[0]) / len, (b[1] - a[1]) / len];
    let at = |s: f64| [a[0] + s * u[0], a[1] + s * u[1]];
    // tangential force of the reduced potential along the line
    let force = |s: f64| {
        let p = at(s);
        let mut g = p[0] * u[0] + p[1] * u[1];
        for (mass, q) in [(ma, a), (mb, b)] {
            let d = [p[0] - q[0], p[1] - q[1]];
            let r = d[0].hypot(d[1]);
            g -= mass * (d[0] * u[0] + d[1] * u[1]) / (r * r * r);
        }
        g
    };
    let bisect = |mut lo: f64, mut hi: f64| {
        let flo = force(lo);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if (force(mid) > 0.0) == (flo > 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        at(0.5 * (lo + hi))
    };
    let e = 1e-9;
    let mut pts = vec![bisect(-3.0, -e), bisect(e, len - e), bisect(len + e, len + 3.0)];
    let mid = [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
    let w = 3f64.sqrt() / 2.0 * len;
    pts.push([mid[0] - w * u[1], mid[1] + w * u[0]]);
    pts.push([mid[0] + w * u[1], mid[1] - w * u[0]]);
    pts
}

pub fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}
