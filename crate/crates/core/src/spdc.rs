//! Two-photon amplitudes of the two simultaneously phase-matched processes.
//!
//! Amplitudes are kept relative: the common factor `4 d24 E_p0 hbar
//! sqrt(w_s w_i) / pi^2` (and the interaction time) is dropped, which leaves
//!
//! ```text
//! C_oe ~ I_oe / (n_so n_ie) exp(-i dk_oe L/2) sinc(dk_oe L/2)
//! C_eo ~ I_eo / (n_se n_io) exp(-i dk_eo L/2) sinc(dk_eo L/2)
//! ```
//!
//! Everything computed here (the entanglement parameter, normalized
//! spectra, bandwidths) is independent of that factor.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dispersion::WaveguideGeometry;
use crate::error::{Error, Result};
use crate::modesolver::{ModalSolution, TrialField};
use crate::qpm::{
    phase_mismatch, EffectiveIndex, GratingDesign, InteractionSpec, ModeIndices, Process,
};
use crate::quadrature::{self, integrate, Tolerance};
use crate::sinc;

/// The five modes taking part in the two processes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignModes {
    pub pump_o: ModalSolution,
    pub signal_o: ModalSolution,
    pub signal_e: ModalSolution,
    pub idler_o: ModalSolution,
    pub idler_e: ModalSolution,
}

impl DesignModes {
    pub fn indices(&self) -> ModeIndices {
        ModeIndices {
            pump_o: self.pump_o.n_eff,
            signal_o: self.signal_o.n_eff,
            signal_e: self.signal_e.n_eff,
            idler_o: self.idler_o.n_eff,
            idler_e: self.idler_e.n_eff,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'static str, &ModalSolution)> {
        [
            ("pump_o", &self.pump_o),
            ("signal_o", &self.signal_o),
            ("signal_e", &self.signal_e),
            ("idler_o", &self.idler_o),
            ("idler_e", &self.idler_e),
        ]
        .into_iter()
    }

    /// Names of modes whose stationary point lies below cutoff.
    pub fn below_cutoff(&self) -> Vec<&'static str> {
        self.iter()
            .filter(|(_, m)| !m.guided)
            .map(|(n, _)| n)
            .collect()
    }
}

/// Transverse overlap `int int e_p e_a e_b dy dz` of three trial fields on
/// the same channel, in um^-1.
///
/// The product is a Gaussian in y times `z^3` times a Gaussian in z, so
/// with `A = sum ay^2`, `B = sum az^2`:
/// `I = prod(amplitude) w h sqrt(pi/A) / (2 B^2)`.
pub fn overlap_integral(pump: &TrialField, a: &TrialField, b: &TrialField) -> f64 {
    debug_assert!(
        pump.width_um == a.width_um
            && pump.width_um == b.width_um
            && pump.depth_um == a.depth_um
            && pump.depth_um == b.depth_um,
        "fields must share one geometry"
    );
    let sum_y = pump.alpha_y.powi(2) + a.alpha_y.powi(2) + b.alpha_y.powi(2);
    let sum_z = pump.alpha_z.powi(2) + a.alpha_z.powi(2) + b.alpha_z.powi(2);
    pump.amplitude()
        * a.amplitude()
        * b.amplitude()
        * pump.width_um
        * pump.depth_um
        * (PI / sum_y).sqrt()
        / (2.0 * sum_z * sum_z)
}

/// [`overlap_integral`] by 2-D adaptive quadrature.
pub fn overlap_integral_quadrature(
    pump: &TrialField,
    a: &TrialField,
    b: &TrialField,
    tol: Tolerance,
) -> Result<f64> {
    let ((y0, y1), (z0, z1)) = [pump, a, b].iter().map(|f| f.support()).fold(
        ((0.0, 0.0), (0.0, 0.0)),
        |((ya, yb), (za, zb)), ((y0, y1), (z0, _))| {
            ((f64::min(ya, y0), f64::max(yb, y1)), (f64::min(za, z0), zb))
        },
    );
    quadrature::integrate_2d(
        |y, z| pump.value(y, z) * a.value(y, z) * b.value(y, z),
        (y0, y1),
        (z0, z1),
        tol,
    )
}

/// Relative amplitudes of the two processes at one signal wavelength.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProcessAmplitudes {
    /// um^-1
    pub overlap_oe: f64,
    /// um^-1
    pub overlap_eo: f64,
    pub c_oe: Complex64,
    pub c_eo: Complex64,
    pub dk_oe: f64,
    pub dk_eo: f64,
    /// Always true: the absolute scale of `c_oe`, `c_eo` is undefined.
    pub shared_prefactor_omitted: bool,
}

impl ProcessAmplitudes {
    pub fn get(&self, process: Process) -> Complex64 {
        match process {
            Process::Oe => self.c_oe,
            Process::Eo => self.c_eo,
        }
    }
}

/// Amplitudes for given mismatches (rad/um) and interaction length.
pub fn amplitudes_at_mismatch(
    modes: &DesignModes,
    dk_oe: f64,
    dk_eo: f64,
    length_mm: f64,
) -> ProcessAmplitudes {
    let l = length_mm * 1e3;
    let overlap_oe = overlap_integral(
        &modes.pump_o.field,
        &modes.signal_o.field,
        &modes.idler_e.field,
    );
    let overlap_eo = overlap_integral(
        &modes.pump_o.field,
        &modes.signal_e.field,
        &modes.idler_o.field,
    );
    let term = |overlap: f64, n_s: f64, n_i: f64, dk: f64| {
        let x = 0.5 * dk * l;
        Complex64::from_polar(overlap / (n_s * n_i) * sinc(x), -x)
    };
    ProcessAmplitudes {
        overlap_oe,
        overlap_eo,
        c_oe: term(overlap_oe, modes.signal_o.n_eff, modes.idler_e.n_eff, dk_oe),
        c_eo: term(overlap_eo, modes.signal_e.n_eff, modes.idler_o.n_eff, dk_eo),
        dk_oe,
        dk_eo,
        shared_prefactor_omitted: true,
    }
}

/// Amplitudes at signal wavelength `lambda_s_nm`; mismatches come from
/// [`phase_mismatch`] with indices re-evaluated by `indices`.
pub fn relative_amplitudes(
    modes: &DesignModes,
    design: &GratingDesign,
    spec: &InteractionSpec,
    lambda_s_nm: f64,
    indices: &impl EffectiveIndex,
) -> Result<ProcessAmplitudes> {
    let dk_oe = phase_mismatch(spec, design, Process::Oe, lambda_s_nm, indices)?;
    let dk_eo = phase_mismatch(spec, design, Process::Eo, lambda_s_nm, indices)?;
    Ok(amplitudes_at_mismatch(modes, dk_oe, dk_eo, spec.length_mm))
}

/// `C_oe / C_eo` at zero mismatch written out in the variational parameters
/// of the five modes. Equivalent to the ratio of
/// [`amplitudes_at_mismatch`] with both mismatches zero.
pub fn amplitude_ratio_closed_form(modes: &DesignModes) -> f64 {
    let (p, so, se, io, ie) = (
        &modes.pump_o.field,
        &modes.signal_o.field,
        &modes.signal_e.field,
        &modes.idler_o.field,
        &modes.idler_e.field,
    );
    let weight = |f: &TrialField| f.alpha_y.sqrt() * f.alpha_z.powf(1.5);
    let spread_y = |a: &TrialField, b: &TrialField| {
        (p.alpha_y.powi(2) + a.alpha_y.powi(2) + b.alpha_y.powi(2)).sqrt()
    };
    let spread_z = |a: &TrialField, b: &TrialField| {
        (p.alpha_z.powi(2) + a.alpha_z.powi(2) + b.alpha_z.powi(2)).powi(2)
    };
    let num = weight(so)
        * weight(ie)
        * spread_y(se, io)
        * spread_z(se, io)
        * modes.signal_e.n_eff
        * modes.idler_o.n_eff;
    let den = weight(se)
        * weight(io)
        * spread_y(so, ie)
        * spread_z(so, ie)
        * modes.signal_o.n_eff
        * modes.idler_e.n_eff;
    num / den
}

/// Degree of entanglement `min(|C_oe|, |C_eo|) / max(|C_oe|, |C_eo|)`.
pub fn gamma(amplitudes: &ProcessAmplitudes) -> Result<f64> {
    gamma_from_magnitudes(amplitudes.c_oe.norm(), amplitudes.c_eo.norm())
}

pub fn gamma_from_magnitudes(a: f64, b: f64) -> Result<f64> {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    if !(hi > 0.0) {
        return Err(Error::UndefinedGamma);
    }
    Ok(lo / hi)
}

/// Group effective indices of the signal and idler modes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupIndices {
    pub signal_o: f64,
    pub signal_e: f64,
    pub idler_o: f64,
    pub idler_e: f64,
}

impl GroupIndices {
    /// `(N_signal, N_idler)` for a process.
    pub fn pair(&self, process: Process) -> (f64, f64) {
        match process {
            Process::Oe => (self.signal_o, self.idler_e),
            Process::Eo => (self.signal_e, self.idler_o),
        }
    }
}

/// Smallest group-index difference for which a bandwidth is reported.
pub const MIN_GROUP_INDEX_DIFFERENCE: f64 = 1e-6;

/// First-order signal bandwidths `lambda_s^2 / (L |N_i - N_s|)` in nm for
/// the `Oe` and `Eo` processes.
pub fn bandwidth_approx(
    group: &GroupIndices,
    lambda_s_nm: f64,
    length_mm: f64,
) -> Result<(f64, f64)> {
    let l_nm = length_mm * 1e6;
    let width = |process| {
        let (ns, ni) = group.pair(process);
        let diff = (ni - ns).abs();
        if diff < MIN_GROUP_INDEX_DIFFERENCE {
            return Err(Error::DegenerateGroupIndices { difference: diff });
        }
        Ok(lambda_s_nm * lambda_s_nm / (l_nm * diff))
    };
    Ok((width(Process::Oe)?, width(Process::Eo)?))
}

/// How the mismatch is evaluated across a spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectrumMethod {
    /// Re-solve every mode at every sample.
    Exact,
    /// Linearize the mismatch with group indices at the design point.
    Taylor(GroupIndices),
}

/// Normalized emission spectrum `sinc^2(dk L / 2)` against signal
/// wavelength.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub process: Process,
    pub lambda_s_nm: Vec<f64>,
    pub intensity: Vec<f64>,
}

impl Spectrum {
    /// Full width at half maximum from the samples, with linear
    /// interpolation of the two half-maximum crossings around the peak.
    pub fn fwhm(&self) -> Result<f64> {
        let (peak, &max) = self
            .intensity
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .ok_or_else(|| Error::InvalidInput("empty spectrum".into()))?;
        let half = 0.5 * max;
        let crossing = |i: usize, j: usize| {
            let (x0, x1) = (self.lambda_s_nm[i], self.lambda_s_nm[j]);
            let (y0, y1) = (self.intensity[i], self.intensity[j]);
            x0 + (half - y0) * (x1 - x0) / (y1 - y0)
        };
        let right = (peak + 1..self.intensity.len())
            .find(|&j| self.intensity[j] < half)
            .map(|j| crossing(j - 1, j));
        let left = (0..peak)
            .rev()
            .find(|&j| self.intensity[j] < half)
            .map(|j| crossing(j + 1, j));
        match (left, right) {
            (Some(l), Some(r)) => Ok(r - l),
            _ => Err(Error::InvalidInput(format!(
                "{:?} spectrum does not fall to half maximum inside the sampled range",
                self.process
            ))),
        }
    }

    /// Linear interpolation of the sampled intensity.
    pub fn intensity_at(&self, lambda_s_nm: f64) -> Option<f64> {
        let x = &self.lambda_s_nm;
        if x.is_empty() || lambda_s_nm < x[0] || lambda_s_nm > x[x.len() - 1] {
            return None;
        }
        let j = x.partition_point(|&v| v < lambda_s_nm);
        if j == 0 {
            return Some(self.intensity[0]);
        }
        let t = (lambda_s_nm - x[j - 1]) / (x[j] - x[j - 1]);
        Some(self.intensity[j - 1] + t * (self.intensity[j] - self.intensity[j - 1]))
    }
}

/// Evenly spaced wavelengths over `[lo, hi]`.
pub fn wavelength_grid(lo: f64, hi: f64, samples: usize) -> Vec<f64> {
    match samples {
        0 => Vec::new(),
        1 => vec![0.5 * (lo + hi)],
        n => (0..n)
            .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// Samples the spectrum of `process` over `[lo, hi]` nm of signal
/// wavelength.
pub fn spectrum(
    spec: &InteractionSpec,
    design: &GratingDesign,
    process: Process,
    (lo, hi): (f64, f64),
    samples: usize,
    indices: &(impl EffectiveIndex + Sync),
    method: SpectrumMethod,
) -> Result<Spectrum> {
    if !(lo <= spec.lambda_s_nm && spec.lambda_s_nm <= hi) || samples < 2 {
        return Err(Error::InvalidInput(format!(
            "spectrum range [{lo}, {hi}] nm must bracket {} nm with at least 2 samples",
            spec.lambda_s_nm
        )));
    }
    let lambdas = wavelength_grid(lo, hi, samples);
    let half_length = 0.5 * spec.length_um();
    let intensity = match method {
        SpectrumMethod::Exact => lambdas
            .par_iter()
            .map(|&l| {
                phase_mismatch(spec, design, process, l, indices)
                    .map(|dk| sinc(dk * half_length).powi(2))
            })
            .collect::<Result<Vec<_>>>()?,
        SpectrumMethod::Taylor(group) => {
            let (ns, ni) = group.pair(process);
            let l0 = spec.lambda_s_nm * 1e-3;
            let slope = 2.0 * PI * (ni - ns) / (l0 * l0);
            lambdas
                .iter()
                .map(|&l| sinc(slope * (l - spec.lambda_s_nm) * 1e-3 * half_length).powi(2))
                .collect()
        }
    };
    Ok(Spectrum {
        process,
        lambda_s_nm: lambdas,
        intensity,
    })
}

/// Full design-point analysis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntanglementReport {
    pub interaction: InteractionSpec,
    pub geometry: WaveguideGeometry,
    pub gamma: f64,
    /// Zero-mismatch amplitudes.
    pub amplitudes: ProcessAmplitudes,
    pub amplitude_ratio_closed_form: f64,
    /// Numeric FWHM of the sampled spectra, nm.
    pub bandwidth_oe_nm: f64,
    pub bandwidth_eo_nm: f64,
    pub bandwidth_ratio: f64,
    /// First-order group-index estimates, nm.
    pub bandwidth_approx_oe_nm: f64,
    pub bandwidth_approx_eo_nm: f64,
    pub group_indices: GroupIndices,
    pub grating_periods: GratingDesign,
    pub modes: DesignModes,
    pub below_cutoff: Vec<String>,
    pub spectrum_oe: Spectrum,
    pub spectrum_eo: Spectrum,
}

/// Entanglement parameter after a rectangular band-pass of full width
/// `filter_fwhm_nm` (in signal wavelength) centred on the design signal.
///
/// Each process contributes `|C(0)|^2 <sinc^2>` inside the pass band; the
/// filtered amplitudes are the square roots of those pair probabilities.
/// Inside a pass band narrower than either process the mismatch is linear
/// in wavelength, so the average uses the report's group indices rather
/// than interpolating the sampled spectra.
pub fn filtered_gamma(report: &EntanglementReport, filter_fwhm_nm: f64) -> Result<f64> {
    let narrowest = report.bandwidth_oe_nm.min(report.bandwidth_eo_nm);
    if !(filter_fwhm_nm < narrowest) {
        return Err(Error::FilterTooWide {
            filter_nm: filter_fwhm_nm,
            bandwidth_nm: narrowest,
        });
    }
    if !(filter_fwhm_nm >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "filter width {filter_fwhm_nm} nm < 0"
        )));
    }
    let l0_um = report.interaction.lambda_s_nm * 1e-3;
    let half_length = 0.5 * report.interaction.length_um();
    let mean_intensity = |process| -> Result<f64> {
        let (ns, ni) = report.group_indices.pair(process);
        // sinc argument at the pass-band edge
        let edge =
            (2.0 * PI * (ni - ns) / (l0_um * l0_um) * 0.5 * filter_fwhm_nm * 1e-3 * half_length)
                .abs();
        if edge == 0.0 {
            return Ok(1.0);
        }
        Ok(integrate(|u| sinc(u).powi(2), 0.0, edge, Tolerance::default())? / edge)
    };
    let a_oe = report.amplitudes.c_oe.norm() * mean_intensity(Process::Oe)?.sqrt();
    let a_eo = report.amplitudes.c_eo.norm() * mean_intensity(Process::Eo)?.sqrt();
    gamma_from_magnitudes(a_oe, a_eo)
}

/// First-order Fourier amplitude of the compound grating at `K1` or `K2`.
pub const COMPOUND_GRATING_COEFFICIENT: f64 = 4.0 / (PI * PI);
/// First-order Fourier amplitude of a plain 50% duty grating.
pub const SINGLE_GRATING_COEFFICIENT: f64 = 2.0 / PI;

/// Pair-generation efficiency of one process in a compound grating of
/// length `L`, relative to the same process in one half of a substrate split
/// into two single-period sections: `(c_compound L)^2 / (c_single L/2)^2`.
pub fn efficiency_ratio(c_compound: f64, c_single: f64) -> f64 {
    let length = 1.0;
    (c_compound * length).powi(2) / (c_single * 0.5 * length).powi(2)
}

/// `(4/pi)^2`: the compound grating wins despite its weaker coefficient
/// because each process uses the full length.
pub fn grating_scheme_efficiency_ratio() -> f64 {
    efficiency_ratio(COMPOUND_GRATING_COEFFICIENT, SINGLE_GRATING_COEFFICIENT)
}
