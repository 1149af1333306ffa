//! Subcommand bodies. Each returns its artifacts; `main` decides where
//! they go.

use anyhow::{Context, Result};
use dppln_core::export::{sig6, write_field_map, write_poling_pattern, write_spectra};
use dppln_core::spdc::COMPOUND_GRATING_COEFFICIENT;
use dppln_core::{
    EntanglementReport, GratingDesign, InteractionSpec, SourceDesigner, WaveguideGeometry,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::DesignConfig;

/// A named output file.
pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
    /// Printed when no output directory is given.
    pub primary: bool,
}

impl Artifact {
    fn new(name: impl Into<String>, bytes: Vec<u8>, primary: bool) -> Self {
        Self {
            name: name.into(),
            bytes,
            primary,
        }
    }
}

fn json(value: &impl Serialize) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn designer(cfg: &DesignConfig, geometry: WaveguideGeometry) -> Result<SourceDesigner> {
    Ok(SourceDesigner::new(
        cfg.material()?,
        geometry,
        cfg.interaction_spec()?,
        cfg.solver,
    )?)
}

fn interaction_header(s: &InteractionSpec) -> String {
    format!(
        "lambda_p_nm={} lambda_s_nm={} lambda_i_nm={} temperature_c={} length_mm={}",
        sig6(s.lambda_p_nm),
        sig6(s.lambda_s_nm),
        sig6(s.lambda_i_nm),
        sig6(s.temperature_c),
        sig6(s.length_mm)
    )
}

#[derive(Serialize)]
struct DesignOutput<'a> {
    report: &'a EntanglementReport,
    grating: &'a GratingDesign,
}

pub fn design(cfg: &DesignConfig) -> Result<Vec<Artifact>> {
    let d = designer(cfg, cfg.single_geometry()?)?;
    let report = d.report(&cfg.spectrum)?;
    let mut out = vec![Artifact::new(
        "design.json",
        json(&DesignOutput {
            report: &report,
            grating: &report.grating_periods,
        })?,
        true,
    )];
    if cfg.outputs.field_maps {
        for (name, mode) in report.modes.iter() {
            let mut bytes = Vec::new();
            write_field_map(&mode.field, &mut bytes)?;
            out.push(Artifact::new(format!("field_{name}.csv"), bytes, false));
        }
    }
    Ok(out)
}

struct SweepRow {
    depth_um: f64,
    width_um: f64,
    values: Option<(f64, f64, f64)>,
    status: String,
}

pub fn sweep(cfg: &DesignConfig) -> Result<Vec<Artifact>> {
    let geometries = cfg.geometries()?;
    let spec = cfg.interaction_spec()?;
    // build every designer first so configuration problems abort the run
    let designers = geometries
        .iter()
        .map(|&g| designer(cfg, g))
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<SweepRow> = designers
        .par_iter()
        .map(|d| {
            let (depth_um, width_um) = (d.geometry.depth_um, d.geometry.width_um);
            match d.evaluate() {
                Ok(r) => {
                    let cut = r.modes.below_cutoff();
                    Ok(SweepRow {
                        depth_um,
                        width_um,
                        values: Some((r.gamma, r.grating.lambda1_um, r.grating.lambda2_um)),
                        status: if cut.is_empty() {
                            "ok".into()
                        } else {
                            format!("below_cutoff:{}", cut.join("+"))
                        },
                    })
                }
                Err(e) if e.is_physics_infeasibility() => Ok(SweepRow {
                    depth_um,
                    width_um,
                    values: None,
                    status: format!("failed: {e}").replace(',', ";"),
                }),
                Err(e) => Err(e)
                    .with_context(|| format!("geometry depth {depth_um} um width {width_um} um")),
            }
        })
        .collect::<Result<_>>()?;

    let mut text = String::new();
    text.push_str(&format!("# {}\n", interaction_header(&spec)));
    text.push_str("# depth and width in um; periods in um; gamma dimensionless\n");
    text.push_str("depth_um,width_um,gamma,Lambda1_um,Lambda2_um,status\n");
    for r in rows {
        let (g, l1, l2) = match r.values {
            Some((g, l1, l2)) => (sig6(g), sig6(l1), sig6(l2)),
            None => Default::default(),
        };
        text.push_str(&format!(
            "{},{},{g},{l1},{l2},{}\n",
            sig6(r.depth_um),
            sig6(r.width_um),
            r.status
        ));
    }
    Ok(vec![Artifact::new("sweep.csv", text.into_bytes(), true)])
}

pub fn spectrum(cfg: &DesignConfig) -> Result<Vec<Artifact>> {
    let d = designer(cfg, cfg.single_geometry()?)?;
    let r = d.report(&cfg.spectrum)?;
    let g = &d.geometry;
    let header = vec![
        interaction_header(&d.interaction),
        format!(
            "depth_um={} width_um={}",
            sig6(g.depth_um),
            sig6(g.width_um)
        ),
        format!(
            "method={} samples={}",
            if cfg.spectrum.taylor {
                "taylor"
            } else {
                "exact"
            },
            cfg.spectrum.samples
        ),
        format!("fwhm_oe_nm={}", sig6(r.bandwidth_oe_nm)),
        format!("fwhm_eo_nm={}", sig6(r.bandwidth_eo_nm)),
        format!("fwhm_ratio={}", sig6(r.bandwidth_ratio)),
        format!("gamma={}", sig6(r.gamma)),
        "intensity is sinc^2(dk L/2), 1 at perfect phase matching".into(),
    ];
    let mut bytes = Vec::new();
    write_spectra(&r.spectrum_oe, &r.spectrum_eo, &header, &mut bytes)?;
    Ok(vec![Artifact::new("spectrum.csv", bytes, true)])
}

#[derive(Serialize)]
struct Component {
    k_rad_per_um: f64,
    re: f64,
    im: f64,
    magnitude: f64,
    relative_deviation: f64,
}

#[derive(Serialize)]
struct FourierCheck {
    #[serde(flatten)]
    grating: GratingDesign,
    length_um: f64,
    modulation_periods: f64,
    boundaries: usize,
    target_magnitude: f64,
    c_k1: Component,
    c_k2: Component,
}

pub fn grating(cfg: &DesignConfig) -> Result<Vec<Artifact>> {
    let d = designer(cfg, cfg.single_geometry()?)?;
    let r = d.evaluate()?;
    let g = r.grating;
    let pattern = d.poling_pattern(&g)?;
    let component = |k: f64| {
        let c = pattern.fourier_component(k);
        Component {
            k_rad_per_um: k,
            re: c.re,
            im: c.im,
            magnitude: c.norm(),
            relative_deviation: (c.norm() - COMPOUND_GRATING_COEFFICIENT)
                / COMPOUND_GRATING_COEFFICIENT,
        }
    };
    let check = FourierCheck {
        grating: g,
        length_um: pattern.length_um,
        modulation_periods: (pattern.length_um / g.lambdap_um).round(),
        boundaries: pattern.boundaries.len(),
        target_magnitude: COMPOUND_GRATING_COEFFICIENT,
        c_k1: component(g.k1),
        c_k2: component(g.k2),
    };
    let mut csv = Vec::new();
    write_poling_pattern(&pattern, &g, &mut csv)?;
    Ok(vec![
        Artifact::new("fourier_check.json", json(&check)?, true),
        Artifact::new("poling_pattern.csv", csv, false),
    ])
}
