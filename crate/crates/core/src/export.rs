//! Text artifacts: CSV tables and JSON reports.
//!
//! CSV numbers carry six significant digits; JSON keeps full precision.
//! Header comment lines start with `#` and record units and parameters.

use std::io::{self, Write};

use crate::modesolver::TrialField;
use crate::qpm::{GratingDesign, PolingPattern};
use crate::spdc::Spectrum;

/// `%.6g`-style formatting.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    let s = if (-5..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{x:.5e}");
        let (mantissa, e) = s.split_once('e').unwrap();
        let mantissa = if mantissa.contains('.') {
            mantissa.trim_end_matches('0').trim_end_matches('.')
        } else {
            mantissa
        };
        format!("{mantissa}e{e}")
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

/// Grid samples of a trial field over `[-3w, 3w] x [-4h, 0]`.
pub const FIELD_MAP_POINTS: usize = 201;

pub fn write_field_map(field: &TrialField, mut out: impl Write) -> io::Result<()> {
    writeln!(
        out,
        "# alpha_y={} alpha_z={} width_um={} depth_um={}",
        field.alpha_y, field.alpha_z, field.width_um, field.depth_um
    )?;
    writeln!(out, "y_um,z_um,psi")?;
    let n = FIELD_MAP_POINTS;
    let (w, h) = (field.width_um, field.depth_um);
    for i in 0..n {
        let y = -3.0 * w + 6.0 * w * i as f64 / (n - 1) as f64;
        for j in 0..n {
            let z = -4.0 * h + 4.0 * h * j as f64 / (n - 1) as f64;
            writeln!(out, "{},{},{}", sig6(y), sig6(z), sig6(field.value(y, z)))?;
        }
    }
    Ok(())
}

pub fn write_poling_pattern(
    pattern: &PolingPattern,
    grating: &GratingDesign,
    mut out: impl Write,
) -> io::Result<()> {
    writeln!(out, "# Lambda0_um={}", sig6(grating.lambda0_um))?;
    writeln!(out, "# Lambdap_um={}", sig6(grating.lambdap_um))?;
    writeln!(out, "# L_um={}", sig6(pattern.length_um))?;
    writeln!(out, "# initial_sign={}", pattern.initial_sign)?;
    writeln!(out, "boundary_index,x_um,sign_after_boundary")?;
    for (k, &x) in pattern.boundaries.iter().enumerate() {
        // positions need more than six digits to stay ordered over a 1 cm chip
        writeln!(out, "{k},{x:.6},{}", pattern.sign_after(k))?;
    }
    Ok(())
}

/// Header lines are written verbatim after a `# ` prefix.
pub fn write_spectra(
    oe: &Spectrum,
    eo: &Spectrum,
    header: &[String],
    mut out: impl Write,
) -> io::Result<()> {
    if oe.lambda_s_nm != eo.lambda_s_nm {
        return Err(io::Error::new(
            io::ErrorKind::InvalidInput,
            "spectra sampled on different grids",
        ));
    }
    for line in header {
        writeln!(out, "# {line}")?;
    }
    writeln!(out, "lambda_s_nm,intensity_oe,intensity_eo")?;
    for ((l, a), b) in oe.lambda_s_nm.iter().zip(&oe.intensity).zip(&eo.intensity) {
        writeln!(out, "{},{},{}", sig6(*l), sig6(*a), sig6(*b))?;
    }
    Ok(())
}
