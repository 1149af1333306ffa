//! JSON run configuration.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use dppln_core::{
    IndexIncrementTable, InteractionSpec, Material, SellmeierModel, SolverSettings,
    SpectrumOptions, WaveguideGeometry,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InteractionConfig {
    pub lambda_p_nm: f64,
    pub lambda_s_nm: f64,
    /// Quoted idler. Left out, it is derived from the pump and signal.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_i_nm: Option<f64>,
    /// Largest accepted distance between a quoted idler and the one
    /// energy conservation demands. Quoted wavelengths are often rounded
    /// (519/780/1551 nm misses exact conservation by 0.03 nm).
    #[serde(default = "default_idler_tolerance")]
    pub idler_tolerance_nm: f64,
    pub temperature_c: f64,
    pub length_mm: f64,
}

fn default_idler_tolerance() -> f64 {
    0.5
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMode {
    /// Every depth with every width.
    Grid,
    /// `depths_um[k]` with `widths_um[k]`.
    Paired,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub depths_um: Vec<f64>,
    pub widths_um: Vec<f64>,
    pub mode: SweepMode,
    #[serde(default = "default_cover")]
    pub cover_index: f64,
}

fn default_cover() -> f64 {
    dppln_core::dispersion::AIR_INDEX
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GeometryConfig {
    Single(WaveguideGeometry),
    Sweep(SweepConfig),
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MaterialConfig {
    /// Sellmeier JSON; the built-in congruent LiNbO3 set when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sellmeier_path: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub increments: Option<IndexIncrementTable>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub increments_path: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub increment_margin_nm: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub directory: Option<PathBuf>,
    /// Also write `field_<mode>.csv` maps from `design`.
    pub field_maps: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignConfig {
    pub interaction: InteractionConfig,
    pub geometry: GeometryConfig,
    #[serde(default)]
    pub material: MaterialConfig,
    #[serde(default)]
    pub solver: SolverSettings,
    #[serde(default)]
    pub spectrum: SpectrumOptions,
    #[serde(default)]
    pub outputs: OutputConfig,
}

impl Default for DesignConfig {
    fn default() -> Self {
        Self {
            interaction: InteractionConfig {
                lambda_p_nm: 519.0,
                lambda_s_nm: 780.0,
                lambda_i_nm: Some(1551.0),
                idler_tolerance_nm: default_idler_tolerance(),
                temperature_c: dppln_core::dispersion::DEFAULT_TEMPERATURE_C,
                length_mm: 10.0,
            },
            geometry: GeometryConfig::Single(WaveguideGeometry {
                width_um: 10.0,
                depth_um: 10.0,
                cover_index: default_cover(),
            }),
            material: MaterialConfig::default(),
            solver: SolverSettings::default(),
            spectrum: SpectrumOptions::default(),
            outputs: OutputConfig::default(),
        }
    }
}

impl DesignConfig {
    /// Reads a config; relative paths inside it are taken relative to the
    /// file and stored absolute, so a dumped config runs from anywhere.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let mut cfg: Self = serde_json::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        let absolute = |p: &mut Option<PathBuf>| {
            if let Some(p) = p {
                if p.is_relative() {
                    *p = base.join(&*p);
                }
            }
        };
        absolute(&mut cfg.material.sellmeier_path);
        absolute(&mut cfg.material.increments_path);
        absolute(&mut cfg.outputs.directory);
        Ok(cfg)
    }

    /// Interaction with the idler set by energy conservation.
    pub fn interaction_spec(&self) -> Result<InteractionSpec> {
        let c = &self.interaction;
        let spec = InteractionSpec::from_pump_and_signal(
            c.lambda_p_nm,
            c.lambda_s_nm,
            c.temperature_c,
            c.length_mm,
        )?;
        if let Some(quoted) = c.lambda_i_nm {
            if !((quoted - spec.lambda_i_nm).abs() <= c.idler_tolerance_nm) {
                return Err(dppln_core::Error::EnergyConservation {
                    lambda_p_nm: c.lambda_p_nm,
                    lambda_s_nm: c.lambda_s_nm,
                    lambda_i_nm: quoted,
                })
                .with_context(|| {
                    format!(
                        "quoted idler {quoted} nm is {:.4} nm from the conserving {:.4} nm (tolerance {} nm)",
                        (quoted - spec.lambda_i_nm).abs(),
                        spec.lambda_i_nm,
                        c.idler_tolerance_nm
                    )
                });
            }
        }
        Ok(spec)
    }

    pub fn material(&self) -> Result<Material> {
        let m = &self.material;
        let sellmeier = match &m.sellmeier_path {
            Some(p) => SellmeierModel::from_path(p)
                .with_context(|| format!("loading Sellmeier data {}", p.display()))?,
            None => SellmeierModel::builtin(),
        };
        let increments = match (&m.increments, &m.increments_path) {
            (Some(_), Some(_)) => {
                bail!("give either material.increments or material.increments_path, not both")
            }
            (Some(t), None) => t.clone(),
            (None, Some(p)) => {
                let text = std::fs::read_to_string(p)
                    .with_context(|| format!("reading increments {}", p.display()))?;
                serde_json::from_str(&text)
                    .with_context(|| format!("parsing increments {}", p.display()))?
            }
            (None, None) => IndexIncrementTable::ti_indiffused(),
        };
        let mut material = Material {
            sellmeier,
            increments,
            ..Material::default()
        };
        if let Some(margin) = m.increment_margin_nm {
            if !(margin >= 0.0) {
                bail!("material.increment_margin_nm must be >= 0, got {margin}");
            }
            material.increment_margin_nm = margin;
        }
        Ok(material)
    }

    /// Geometries in output order: depth-major, width-minor.
    pub fn geometries(&self) -> Result<Vec<WaveguideGeometry>> {
        match &self.geometry {
            GeometryConfig::Single(g) => {
                g.validate()?;
                Ok(vec![*g])
            }
            GeometryConfig::Sweep(s) => {
                if s.depths_um.is_empty() || s.widths_um.is_empty() {
                    bail!("sweep ranges must be non-empty");
                }
                let pairs: Vec<(f64, f64)> = match s.mode {
                    SweepMode::Grid => s
                        .depths_um
                        .iter()
                        .flat_map(|&d| s.widths_um.iter().map(move |&w| (d, w)))
                        .collect(),
                    SweepMode::Paired => {
                        if s.depths_um.len() != s.widths_um.len() {
                            bail!(
                                "paired sweep needs equal-length lists (got {} depths, {} widths)",
                                s.depths_um.len(),
                                s.widths_um.len()
                            );
                        }
                        s.depths_um
                            .iter()
                            .copied()
                            .zip(s.widths_um.iter().copied())
                            .collect()
                    }
                };
                pairs
                    .into_iter()
                    .map(|(d, w)| Ok(WaveguideGeometry::with_cover(w, d, s.cover_index)?))
                    .collect()
            }
        }
    }

    pub fn single_geometry(&self) -> Result<WaveguideGeometry> {
        match &self.geometry {
            GeometryConfig::Single(g) => {
                g.validate()?;
                Ok(*g)
            }
            GeometryConfig::Sweep(_) => {
                bail!("this command needs a single geometry; use `sweep` for ranges")
            }
        }
    }

    /// Checks everything that does not need a mode solve.
    pub fn validate(&self) -> Result<()> {
        self.interaction_spec()?;
        self.material()?;
        self.geometries()?;
        self.solver.validate()?;
        if self.spectrum.samples < 3 || !(self.spectrum.half_range_nm > 0.0) {
            bail!("spectrum needs at least 3 samples and a positive half range");
        }
        Ok(())
    }
}
