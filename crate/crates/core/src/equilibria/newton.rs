use serde::Serialize;

use crate::model::PrimaryConfiguration;

use super::{EquilibriumPoint, Label};

pub const DEFAULT_NEWTON_TOL: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonSettings {
    pub tol: f64,
    pub max_iter: usize,
    /// Maximum distance the iterate may travel from the seed.
    pub basin: f64,
    /// Extra Newton steps after the tolerance is met.
    pub polish_steps: usize,
}

impl Default for NewtonSettings {
    fn default() -> Self {
        Self { tol: DEFAULT_NEWTON_TOL, max_iter: 50, basin: 0.5, polish_steps: 2 }
    }
}

impl NewtonSettings {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum RefineFailure {
    Diverged { residual: f64, distance: f64 },
    HitSingularity { primary: usize },
    MaxIterations { residual: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootReport {
    pub point: EquilibriumPoint,
    pub iterations: usize,
    /// Residual |∇Ω| after each iteration, starting with the seed.
    pub residuals: Vec<f64>,
}

fn norm(g: [f64; 2]) -> f64 {
    g[0].hypot(g[1])
}

pub fn refine_root(
    seed: [f64; 2],
    config: &PrimaryConfiguration,
    tol: f64,
) -> Result<RootReport, RefineFailure> {
    refine_with(seed, config, &NewtonSettings::with_tol(tol))
}

/// Damped Newton on ∇Ω = 0 with Armijo halving.
pub fn refine_with(
    seed: [f64; 2],
    config: &PrimaryConfiguration,
    s: &NewtonSettings,
) -> Result<RootReport, RefineFailure> {
    let guard = |z: [f64; 2]| -> Result<(), RefineFailure> {
        let (i, d) = config.nearest_primary(z);
        if d <= config.collision_tol {
            Err(RefineFailure::HitSingularity { primary: i + 1 })
        } else {
            Ok(())
        }
    };
    guard(seed)?;
    let mut z = seed;
    let mut r = norm(config.gradient(z));
    if !r.is_finite() {
        return Err(RefineFailure::Diverged { residual: r, distance: 0.0 });
    }
    let mut residuals = vec![r];
    if r < s.tol {
        return Ok(finish(z, r, 1, residuals, config));
    }
    let mut polished = 0;
    let mut converged = false;
    for it in 1..=s.max_iter {
        let (g, h) = config.gradient_hessian(z);
        let det = h.det();
        if det == 0.0 || !det.is_finite() {
            return Err(RefineFailure::Diverged { residual: r, distance: dist(z, seed) });
        }
        let dz = [-(h.yy * g[0] - h.xy * g[1]) / det, -(-h.xy * g[0] + h.xx * g[1]) / det];
        let mut alpha = 1.0;
        let (znew, rnew) = loop {
            let zt = [z[0] + alpha * dz[0], z[1] + alpha * dz[1]];
            let ok = config.nearest_primary(zt).1 > config.collision_tol;
            let rt = if ok { norm(config.gradient(zt)) } else { f64::INFINITY };
            if rt.is_finite() && rt <= (1.0 - 1e-4 * alpha) * r {
                break (zt, rt);
            }
            alpha *= 0.5;
            if alpha < 1.0 / 1024.0 {
                if converged {
                    // no further progress possible at machine precision
                    return Ok(finish(z, r, it, residuals, config));
                }
                return Err(RefineFailure::Diverged { residual: r, distance: dist(z, seed) });
            }
        };
        z = znew;
        r = rnew;
        residuals.push(r);
        guard(z)?;
        if dist(z, seed) > s.basin {
            return Err(RefineFailure::Diverged { residual: r, distance: dist(z, seed) });
        }
        if r < s.tol {
            converged = true;
        }
        if converged {
            if polished >= s.polish_steps || r == 0.0 {
                return Ok(finish(z, r, it + 1, residuals, config));
            }
            polished += 1;
        }
    }
    if converged {
        return Ok(finish(z, r, s.max_iter + 1, residuals, config));
    }
    Err(RefineFailure::MaxIterations { residual: r })
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn finish(
    z: [f64; 2],
    r: f64,
    iterations: usize,
    residuals: Vec<f64>,
    config: &PrimaryConfiguration,
) -> RootReport {
    let (_, h) = config.gradient_hessian(z);
    RootReport {
        point: EquilibriumPoint {
            position: z,
            grad_norm: r,
            label: Label::Unlabeled,
            degeneracy: h.det(),
            fold: false,
        },
        iterations,
        residuals,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_configuration, MassTriple};

    fn cfg() -> PrimaryConfiguration {
        build_configuration(MassTriple::from_pair(0.4, 0.35).unwrap()).unwrap()
    }

    #[test]
    fn converged_seed_is_fixed_point() {
        let c = cfg();
        let p = refine_root([1.17, 0.0], &c, 1e-11).unwrap().point.position;
        let again = refine_root(p, &c, 1e-11).unwrap();
        assert_eq!(again.iterations, 1);
        assert_eq!(again.point.position, p);
    }

    #[test]
    fn seed_at_primary_is_singular() {
        let c = cfg();
        let r = refine_root(c.positions[1], &c, 1e-11);
        assert_eq!(r, Err(RefineFailure::HitSingularity { primary: 2 }));
    }

    #[test]
    fn quadratic_convergence_from_perturbed_seed() {
        let c = cfg();
        let p = refine_root([1.17, 0.0], &c, 1e-11).unwrap().point.position;
        let rep = refine_with(
            [p[0] + 1e-3, p[1] - 7e-4],
            &c,
            &NewtonSettings { polish_steps: 0, ..NewtonSettings::default() },
        )
        .unwrap();
        assert!((rep.point.position[0] - p[0]).hypot(rep.point.position[1] - p[1]) < 1e-12);
        // e_{k+1} / e_k² stays bounded while the error shrinks
        let r = &rep.residuals;
        assert!(r.len() >= 3);
        for w in r.windows(2).take(r.len() - 2) {
            if w[1] > 1e-13 {
                assert!(w[1] / (w[0] * w[0]) < 1e3, "{r:?}");
            }
        }
    }
}
