//! Variational solver for the fundamental mode of a graded Ti:LiNbO3
//! channel.
//!
//! The trial field is the lowest odd Hermite-Gauss function in depth times a
//! Gaussian in width, which vanishes at the air interface `z = 0`:
//!
//! ```text
//! psi(y, z) = sqrt(16 ay az / (pi w h)) az (-z/h) exp(-ay^2 y^2/w^2) exp(-az^2 z^2/h^2),  z < 0
//! ```
//!
//! For this family and a Gaussian index profile the effective-index
//! functional has a closed form; the solver maximizes it over `(ay, az)`.
//! The scalar approximation is used throughout: polarization enters only
//! through the bulk index and the index increment.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::dispersion::WaveguideGeometry;
use crate::error::{Error, Result};
use crate::optimize::NelderMead;
use crate::quadrature::{self, Tolerance};
use crate::Polarization;

/// Vacuum wavenumber in rad/um.
pub fn wavenumber(wavelength_nm: f64) -> f64 {
    2.0 * PI / (wavelength_nm * 1e-3)
}

/// Member of the two-parameter Hermite-Gauss trial family.
///
/// The field is taken non-negative inside the substrate; the global sign of
/// a mode is arbitrary and this choice keeps overlap integrals positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialField {
    pub alpha_y: f64,
    pub alpha_z: f64,
    pub width_um: f64,
    pub depth_um: f64,
}

impl TrialField {
    pub fn new(alpha_y: f64, alpha_z: f64, geom: &WaveguideGeometry) -> Self {
        Self {
            alpha_y,
            alpha_z,
            width_um: geom.width_um,
            depth_um: geom.depth_um,
        }
    }

    /// Amplitude prefactor `sqrt(16 ay az / (pi w h)) az`, which makes the
    /// field unit-norm over the half-space.
    pub fn amplitude(&self) -> f64 {
        (16.0 * self.alpha_y * self.alpha_z / (PI * self.width_um * self.depth_um)).sqrt()
            * self.alpha_z
    }

    fn envelope(&self, y: f64, z: f64) -> f64 {
        let ty = self.alpha_y * y / self.width_um;
        let tz = self.alpha_z * z / self.depth_um;
        (-ty * ty - tz * tz).exp()
    }

    pub fn value(&self, y: f64, z: f64) -> f64 {
        if z >= 0.0 {
            return 0.0;
        }
        self.amplitude() * (-z / self.depth_um) * self.envelope(y, z)
    }

    /// `(d psi/dy, d psi/dz)`.
    pub fn gradient(&self, y: f64, z: f64) -> (f64, f64) {
        if z >= 0.0 {
            return (0.0, 0.0);
        }
        let (w, h) = (self.width_um, self.depth_um);
        let e = self.amplitude() * self.envelope(y, z);
        let psi = e * (-z / h);
        let dy = -2.0 * self.alpha_y.powi(2) * y / (w * w) * psi;
        let dz = -e / h * (1.0 - 2.0 * self.alpha_z.powi(2) * z * z / (h * h));
        (dy, dz)
    }

    /// Transverse window outside which the field is below ~e^-100 of its peak.
    pub fn support(&self) -> ((f64, f64), (f64, f64)) {
        let y = 10.0 * self.width_um / self.alpha_y;
        let z = 11.0 * self.depth_um / self.alpha_z;
        ((-y, y), (-z, 0.0))
    }
}

/// Closed-form effective-index functional `n_eff^2(ay, az)` for the
/// Gaussian-graded profile.
pub fn neff_squared(field: &TrialField, n_b: f64, delta_n: f64, wavelength_nm: f64) -> f64 {
    let (ay, az) = (field.alpha_y, field.alpha_z);
    let (w, h) = (field.width_um, field.depth_um);
    let k0 = wavenumber(wavelength_nm);
    let kinetic = (ay * ay * h * h + 3.0 * w * w * az * az) / (k0 * k0 * w * w * h * h);
    let guiding = 8.0 * n_b * delta_n * ay * az.powi(3)
        / ((2.0 * az * az + 1.0).powf(1.5) * (2.0 * ay * ay + 1.0).sqrt());
    n_b * n_b - kinetic + guiding
}

/// The same functional evaluated by direct 2-D quadrature against an
/// arbitrary squared-index profile `n2(y, z)`.
pub fn neff_squared_quadrature(
    field: &TrialField,
    n2: impl Fn(f64, f64) -> f64,
    wavelength_nm: f64,
    tol: Tolerance,
) -> Result<f64> {
    let k0 = wavenumber(wavelength_nm);
    let (ys, zs) = field.support();
    quadrature::integrate_2d(
        |y, z| {
            let (gy, gz) = field.gradient(y, z);
            let psi = field.value(y, z);
            n2(y, z) * psi * psi - (gy * gy + gz * gz) / (k0 * k0)
        },
        ys,
        zs,
        tol,
    )
}

/// Norm `int int psi^2` by quadrature.
pub fn norm_quadrature(field: &TrialField, tol: Tolerance) -> Result<f64> {
    let (ys, zs) = field.support();
    quadrature::integrate_2d(|y, z| field.value(y, z).powi(2), ys, zs, tol)
}

/// What to do when the best stationary point of the functional lies below
/// the substrate index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CutoffPolicy {
    /// Report [`Error::NoGuidedMode`].
    Strict,
    /// Return the stationary point, flagged `guided = false`. Close to
    /// cutoff this is what a plain local maximization of the functional
    /// produces.
    #[default]
    Stationary,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverSettings {
    /// Seed grid is `grid_points x grid_points` over `[grid_min, grid_max]^2`.
    pub grid_points: usize,
    pub grid_min: f64,
    pub grid_max: f64,
    /// Simplex diameter in `(ay, az)` at convergence.
    pub simplex_tol: f64,
    pub max_iterations: usize,
    /// A search whose best vertex leaves `[alpha_floor, alpha_ceiling]` has
    /// run off to a non-stationary limit and is discarded.
    pub alpha_floor: f64,
    pub alpha_ceiling: f64,
    /// Central-difference step for group indices, nm.
    pub group_index_step_nm: f64,
    pub cutoff: CutoffPolicy,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            grid_points: 16,
            grid_min: 0.2,
            grid_max: 8.0,
            simplex_tol: 1e-7,
            max_iterations: 5000,
            alpha_floor: 1e-3,
            alpha_ceiling: 1e3,
            group_index_step_nm: 0.1,
            cutoff: CutoffPolicy::Stationary,
        }
    }
}

impl SolverSettings {
    pub fn validate(&self) -> Result<()> {
        let ok = self.grid_points >= 2
            && self.grid_min > 0.0
            && self.grid_max > self.grid_min
            && self.simplex_tol > 0.0
            && self.max_iterations > 0
            && self.alpha_floor > 0.0
            && self.alpha_ceiling > self.grid_max
            && self.alpha_floor < self.grid_min
            && self.group_index_step_nm > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "invalid solver settings: {self:?}"
            )))
        }
    }
}

/// Fundamental mode at one wavelength and polarization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModalSolution {
    pub wavelength_nm: f64,
    pub polarization: Polarization,
    pub n_eff: f64,
    /// Bulk index the mode was solved against.
    pub substrate_index: f64,
    pub field: TrialField,
    /// False when the returned stationary point lies at or below the
    /// substrate index (only possible with [`CutoffPolicy::Stationary`]).
    pub guided: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub group_index: Option<f64>,
}

/// Finds the `(ay, az)` maximizing [`neff_squared`].
///
/// A coarse grid seeds Nelder-Mead runs from every discrete local maximum of
/// the grid. If all of them run off towards `alpha -> 0` (the weak-guidance
/// limit, where the functional tends to `n_b^2` without a stationary point),
/// every grid node is tried before giving up.
pub fn solve_mode(
    geom: &WaveguideGeometry,
    polarization: Polarization,
    n_b: f64,
    delta_n: f64,
    wavelength_nm: f64,
    settings: &SolverSettings,
) -> Result<ModalSolution> {
    if !(delta_n >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "index increment {delta_n} < 0"
        )));
    }
    let no_mode = || Error::NoGuidedMode {
        wavelength_nm,
        polarization,
    };
    let objective = |p: [f64; 2]| {
        if p[0] <= 0.0 || p[1] <= 0.0 {
            return f64::NEG_INFINITY;
        }
        neff_squared(
            &TrialField::new(p[0], p[1], geom),
            n_b,
            delta_n,
            wavelength_nm,
        )
    };

    let n = settings.grid_points;
    let step = (settings.grid_max - settings.grid_min) / (n - 1) as f64;
    let node = |i: usize| settings.grid_min + step * i as f64;
    let grid: Vec<f64> = (0..n * n)
        .map(|k| objective([node(k / n), node(k % n)]))
        .collect();
    let is_local_max = |i: usize, j: usize| {
        let v = grid[i * n + j];
        (-1i64..=1).all(|di| {
            (-1i64..=1).all(|dj| {
                let (a, b) = (i as i64 + di, j as i64 + dj);
                (di == 0 && dj == 0)
                    || a < 0
                    || b < 0
                    || a >= n as i64
                    || b >= n as i64
                    || grid[a as usize * n + b as usize] <= v
            })
        })
    };

    let nm = NelderMead {
        diameter_tol: settings.simplex_tol,
        max_iterations: settings.max_iterations,
        initial_step: 0.25 * step,
    };
    let inside = |p: [f64; 2]| {
        p.iter()
            .all(|&a| a > settings.alpha_floor && a < settings.alpha_ceiling)
    };
    let search = |starts: &mut dyn Iterator<Item = (usize, usize)>| {
        starts
            .map(|(i, j)| nm.maximize(objective, [node(i), node(j)], inside))
            .filter(|m| m.converged && inside(m.x))
            .max_by(|a, b| a.value.total_cmp(&b.value))
    };

    let mut seeds = (0..n).flat_map(|i| (0..n).map(move |j| (i, j)));
    let best = search(&mut seeds.clone().filter(|&(i, j)| is_local_max(i, j)))
        .or_else(|| search(&mut seeds))
        .ok_or_else(no_mode)?;

    if !(best.value > 0.0) {
        return Err(no_mode());
    }
    let n_eff = best.value.sqrt();
    let guided = n_eff > n_b + 1e-9;
    if !guided && settings.cutoff == CutoffPolicy::Strict {
        return Err(no_mode());
    }
    Ok(ModalSolution {
        wavelength_nm,
        polarization,
        n_eff,
        substrate_index: n_b,
        field: TrialField::new(best.x[0], best.x[1], geom),
        guided,
        group_index: None,
    })
}

/// Group effective index `N = n - lambda dn/dlambda` by central difference.
/// `n_eff_at` must re-solve the mode at each wavelength it is asked for.
pub fn group_index(
    n_eff_at: impl Fn(f64) -> Result<f64>,
    wavelength_nm: f64,
    step_nm: f64,
) -> Result<f64> {
    let n0 = n_eff_at(wavelength_nm)?;
    let plus = n_eff_at(wavelength_nm + step_nm)?;
    let minus = n_eff_at(wavelength_nm - step_nm)?;
    Ok(n0 - wavelength_nm * (plus - minus) / (2.0 * step_nm))
}
