//! Bulk and waveguide refractive indices of Ti-indiffused congruent LiNbO3.
//!
//! Bulk indices use the temperature-dependent Sellmeier form
//!
//! ```text
//! n^2 = A1 + (A2 + B1 F) / (lambda^2 - (A3 + B2 F)^2) + B3 F - A4 lambda^2
//! F   = (T - T0) (T + T0 + offset)
//! ```
//!
//! with lambda in um and T in degrees Celsius. Coefficient sets are plain
//! JSON so a different published set can be dropped in.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Polarization;

/// Simulation temperature used when none is given.
pub const DEFAULT_TEMPERATURE_C: f64 = 25.0;

/// Refractive index of air above the substrate.
pub const AIR_INDEX: f64 = 1.0;

const BUILTIN_SELLMEIER: &str = include_str!("../data/congruent_ln_edwards_lawrence.json");

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TemperatureModel {
    /// T0 in degrees Celsius.
    pub reference_c: f64,
    /// Additive constant in the second factor of F.
    pub offset_c: f64,
    /// B1, B2, B3.
    pub coefficients: [f64; 3],
}

impl TemperatureModel {
    fn factor(&self, temperature_c: f64) -> f64 {
        (temperature_c - self.reference_c) * (temperature_c + self.reference_c + self.offset_c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidityDomain {
    pub wavelength_nm: [f64; 2],
    pub temperature_c: [f64; 2],
}

/// Sellmeier coefficients for one polarization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SellmeierSet {
    pub polarization: Polarization,
    /// A1..A4.
    pub coefficients: [f64; 4],
    pub temperature_model: TemperatureModel,
    pub domain: ValidityDomain,
}

impl SellmeierSet {
    /// Bulk index at `wavelength_nm` and `temperature_c`.
    pub fn bulk_index(&self, wavelength_nm: f64, temperature_c: f64) -> Result<f64> {
        check_range("wavelength_nm", wavelength_nm, self.domain.wavelength_nm)?;
        check_range("temperature_c", temperature_c, self.domain.temperature_c)?;
        Ok(self.eval_unchecked(wavelength_nm, temperature_c))
    }

    fn eval_unchecked(&self, wavelength_nm: f64, temperature_c: f64) -> f64 {
        let [a1, a2, a3, a4] = self.coefficients;
        let [b1, b2, b3] = self.temperature_model.coefficients;
        let f = self.temperature_model.factor(temperature_c);
        let l2 = (wavelength_nm * 1e-3).powi(2);
        let pole = a3 + b2 * f;
        (a1 + (a2 + b1 * f) / (l2 - pole * pole) + b3 * f - a4 * l2).sqrt()
    }
}

fn check_range(quantity: &'static str, value: f64, [min, max]: [f64; 2]) -> Result<()> {
    if value.is_finite() && value >= min && value <= max {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            quantity,
            value,
            min,
            max,
        })
    }
}

/// Ordinary and extraordinary Sellmeier sets for one crystal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SellmeierModel {
    pub name: String,
    #[serde(default)]
    pub reference: String,
    sets: Vec<SellmeierSet>,
}

impl SellmeierModel {
    /// The coefficient set shipped with the crate.
    pub fn builtin() -> Self {
        Self::from_json(BUILTIN_SELLMEIER).expect("built-in Sellmeier data is valid")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let model: SellmeierModel = serde_json::from_str(text).map_err(|e| Error::Parse {
            what: "Sellmeier data",
            message: e.to_string(),
        })?;
        model.validate()?;
        Ok(model)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_json(&text)
    }

    pub fn set(&self, polarization: Polarization) -> &SellmeierSet {
        // validate() guarantees exactly one set per polarization
        self.sets
            .iter()
            .find(|s| s.polarization == polarization)
            .expect("validated model has both polarizations")
    }

    pub fn bulk_index(
        &self,
        polarization: Polarization,
        wavelength_nm: f64,
        temperature_c: f64,
    ) -> Result<f64> {
        self.set(polarization)
            .bulk_index(wavelength_nm, temperature_c)
    }

    /// Checks that both polarizations are present and that the sets behave
    /// like a negative uniaxial crystal with normal dispersion over their
    /// shared domain.
    pub fn validate(&self) -> Result<()> {
        let invalid = |msg: String| Err(Error::InvalidInput(format!("Sellmeier data: {msg}")));
        for pol in [Polarization::Ordinary, Polarization::Extraordinary] {
            let n = self.sets.iter().filter(|s| s.polarization == pol).count();
            if n != 1 {
                return invalid(format!("expected one {pol} set, found {n}"));
            }
        }
        let o = self.set(Polarization::Ordinary);
        let e = self.set(Polarization::Extraordinary);
        let lmin = o.domain.wavelength_nm[0].max(e.domain.wavelength_nm[0]);
        let lmax = o.domain.wavelength_nm[1].min(e.domain.wavelength_nm[1]);
        let tmin = o.domain.temperature_c[0].max(e.domain.temperature_c[0]);
        let tmax = o.domain.temperature_c[1].min(e.domain.temperature_c[1]);
        if !(lmin < lmax && tmin <= tmax) {
            return invalid("empty validity domain".into());
        }
        for i in 0..=16 {
            let t = tmin + (tmax - tmin) * i as f64 / 16.0;
            let mut prev: Option<(f64, f64)> = None;
            for j in 0..=64 {
                let l = lmin + (lmax - lmin) * j as f64 / 64.0;
                let no = o.eval_unchecked(l, t);
                let ne = e.eval_unchecked(l, t);
                if !(no > 1.0 && ne > 1.0) {
                    return invalid(format!("index not > 1 at {l} nm, {t} C"));
                }
                if no <= ne {
                    return invalid(format!(
                        "ordinary index not above extraordinary at {l} nm, {t} C"
                    ));
                }
                if let Some((po, pe)) = prev {
                    if (500.0..=1600.0).contains(&l) && (no >= po || ne >= pe) {
                        return invalid(format!("index not decreasing near {l} nm, {t} C"));
                    }
                }
                prev = Some((no, ne));
            }
        }
        Ok(())
    }
}

/// One row of the index-increment table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndexIncrement {
    pub wavelength_nm: f64,
    pub delta_n_o: f64,
    pub delta_n_e: f64,
}

impl IndexIncrement {
    fn get(&self, polarization: Polarization) -> f64 {
        match polarization {
            Polarization::Ordinary => self.delta_n_o,
            Polarization::Extraordinary => self.delta_n_e,
        }
    }
}

/// Peak index increments from Ti in-diffusion, tabulated against wavelength.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<IndexIncrement>", into = "Vec<IndexIncrement>")]
pub struct IndexIncrementTable {
    entries: Vec<IndexIncrement>,
}

impl IndexIncrementTable {
    pub fn new(entries: Vec<IndexIncrement>) -> Result<Self> {
        if entries.len() < 2 {
            return Err(Error::InvalidInput(
                "index-increment table needs at least two rows".into(),
            ));
        }
        for w in entries.windows(2) {
            if !(w[1].wavelength_nm > w[0].wavelength_nm) {
                return Err(Error::InvalidInput(
                    "index-increment wavelengths must be strictly increasing".into(),
                ));
            }
        }
        for row in &entries {
            for dn in [row.delta_n_o, row.delta_n_e] {
                // zero is allowed: it describes an unguiding substrate
                if !(0.0..0.01).contains(&dn) {
                    return Err(Error::InvalidInput(format!(
                        "index increment {dn} at {} nm outside [0, 0.01)",
                        row.wavelength_nm
                    )));
                }
            }
        }
        Ok(Self { entries })
    }

    /// Ti:LiNbO3 increments at 519, 780 and 1550 nm for a diffusion recipe
    /// giving nearly equal ordinary and extraordinary changes.
    pub fn ti_indiffused() -> Self {
        let row = |wavelength_nm, delta_n_o, delta_n_e| IndexIncrement {
            wavelength_nm,
            delta_n_o,
            delta_n_e,
        };
        Self::new(vec![
            row(519.0, 0.0038, 0.0037),
            row(780.0, 0.0034, 0.0030),
            row(1550.0, 0.0025, 0.0025),
        ])
        .unwrap()
    }

    pub fn entries(&self) -> &[IndexIncrement] {
        &self.entries
    }

    pub fn span_nm(&self) -> (f64, f64) {
        (
            self.entries[0].wavelength_nm,
            self.entries[self.entries.len() - 1].wavelength_nm,
        )
    }

    /// Increment at `wavelength_nm`, linearly interpolated between rows.
    /// Fails outside the tabulated span.
    pub fn index_increment(&self, polarization: Polarization, wavelength_nm: f64) -> Result<f64> {
        self.index_increment_extrapolated(polarization, wavelength_nm, 0.0)
    }

    /// Like [`Self::index_increment`], but continues the first/last segment
    /// linearly up to `margin_nm` beyond the table ends. The result is
    /// clamped at zero.
    pub fn index_increment_extrapolated(
        &self,
        polarization: Polarization,
        wavelength_nm: f64,
        margin_nm: f64,
    ) -> Result<f64> {
        let (lo, hi) = self.span_nm();
        check_range(
            "wavelength_nm",
            wavelength_nm,
            [lo - margin_nm, hi + margin_nm],
        )?;
        let last = self.entries.len() - 2;
        let seg = self
            .entries
            .windows(2)
            .position(|w| wavelength_nm <= w[1].wavelength_nm)
            .unwrap_or(last);
        let (a, b) = (&self.entries[seg], &self.entries[seg + 1]);
        if wavelength_nm == a.wavelength_nm {
            return Ok(a.get(polarization));
        }
        if wavelength_nm == b.wavelength_nm {
            return Ok(b.get(polarization));
        }
        let t = (wavelength_nm - a.wavelength_nm) / (b.wavelength_nm - a.wavelength_nm);
        let v = a.get(polarization) + t * (b.get(polarization) - a.get(polarization));
        Ok(v.max(0.0))
    }
}

impl TryFrom<Vec<IndexIncrement>> for IndexIncrementTable {
    type Error = Error;
    fn try_from(entries: Vec<IndexIncrement>) -> Result<Self> {
        Self::new(entries)
    }
}

impl From<IndexIncrementTable> for Vec<IndexIncrement> {
    fn from(t: IndexIncrementTable) -> Self {
        t.entries
    }
}

/// Transverse size of the diffused channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveguideGeometry {
    /// Gaussian 1/e half-width along y, um.
    pub width_um: f64,
    /// Gaussian 1/e depth along z, um.
    pub depth_um: f64,
    #[serde(default = "default_cover")]
    pub cover_index: f64,
}

fn default_cover() -> f64 {
    AIR_INDEX
}

impl WaveguideGeometry {
    pub fn new(width_um: f64, depth_um: f64) -> Result<Self> {
        Self::with_cover(width_um, depth_um, AIR_INDEX)
    }

    pub fn with_cover(width_um: f64, depth_um: f64, cover_index: f64) -> Result<Self> {
        let g = Self {
            width_um,
            depth_um,
            cover_index,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.width_um > 0.0 && self.width_um.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "width {} um must be > 0",
                self.width_um
            )));
        }
        if !(self.depth_um > 0.0 && self.depth_um.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "depth {} um must be > 0",
                self.depth_um
            )));
        }
        if !(self.cover_index >= 1.0) {
            return Err(Error::InvalidInput(format!(
                "cover index {} must be >= 1",
                self.cover_index
            )));
        }
        Ok(())
    }
}

/// Squared refractive index of the channel at transverse position `(y, z)`.
/// The substrate occupies `z < 0`; the cover starts at `z = 0`.
pub fn index_profile(geom: &WaveguideGeometry, n_b: f64, delta_n: f64, y: f64, z: f64) -> f64 {
    if z >= 0.0 {
        return geom.cover_index * geom.cover_index;
    }
    let gy = (y / geom.width_um).powi(2);
    let gz = (z / geom.depth_um).powi(2);
    n_b * n_b + 2.0 * n_b * delta_n * (-gy - gz).exp()
}
