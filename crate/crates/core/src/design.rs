//! End-to-end design pipeline: material -> five modes -> grating ->
//! amplitudes -> entanglement, bandwidths and spectra.

use serde::{Deserialize, Serialize};

use crate::dispersion::{IndexIncrementTable, SellmeierModel, WaveguideGeometry};
use crate::error::{Error, Result};
use crate::modesolver::{self, solve_mode, ModalSolution, SolverSettings};
use crate::qpm::{
    required_frequencies, EffectiveIndex, GratingDesign, InteractionSpec, ModeIndices,
    PolingPattern, Process,
};
use crate::spdc::{
    self, amplitude_ratio_closed_form, amplitudes_at_mismatch, bandwidth_approx,
    EntanglementReport, GroupIndices, ProcessAmplitudes, SpectrumMethod,
};
use crate::Polarization;

pub use crate::spdc::DesignModes;

/// Default extension of the index-increment table beyond its last row, nm.
/// The design idler (1551 nm) and the spectral scans around it fall just
/// outside a table ending at 1550 nm.
pub const DEFAULT_INCREMENT_MARGIN_NM: f64 = 100.0;

/// Substrate dispersion plus waveguide index increments.
#[derive(Debug, Clone, PartialEq)]
pub struct Material {
    pub sellmeier: SellmeierModel,
    pub increments: IndexIncrementTable,
    pub increment_margin_nm: f64,
}

impl Default for Material {
    fn default() -> Self {
        Self {
            sellmeier: SellmeierModel::builtin(),
            increments: IndexIncrementTable::ti_indiffused(),
            increment_margin_nm: DEFAULT_INCREMENT_MARGIN_NM,
        }
    }
}

impl Material {
    pub fn substrate_index(
        &self,
        pol: Polarization,
        wavelength_nm: f64,
        temperature_c: f64,
    ) -> Result<f64> {
        self.sellmeier.bulk_index(pol, wavelength_nm, temperature_c)
    }

    pub fn increment(&self, pol: Polarization, wavelength_nm: f64) -> Result<f64> {
        self.increments
            .index_increment_extrapolated(pol, wavelength_nm, self.increment_margin_nm)
    }
}

/// Everything needed to evaluate one source design.
#[derive(Debug, Clone)]
pub struct SourceDesigner {
    pub material: Material,
    pub geometry: WaveguideGeometry,
    pub interaction: InteractionSpec,
    pub solver: SolverSettings,
}

/// Zero-mismatch result at the design wavelengths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignResult {
    pub modes: DesignModes,
    pub indices: ModeIndices,
    pub grating: GratingDesign,
    pub amplitudes: ProcessAmplitudes,
    pub gamma: f64,
    pub amplitude_ratio_closed_form: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SpectrumOptions {
    /// Scan `lambda_s +- half_range_nm`.
    pub half_range_nm: f64,
    pub samples: usize,
    /// Use the group-index linearization instead of re-solving modes.
    pub taylor: bool,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self {
            half_range_nm: 10.0,
            samples: 2001,
            taylor: false,
        }
    }
}

impl SourceDesigner {
    pub fn new(
        material: Material,
        geometry: WaveguideGeometry,
        interaction: InteractionSpec,
        solver: SolverSettings,
    ) -> Result<Self> {
        geometry.validate()?;
        interaction.validate()?;
        solver.validate()?;
        let d = Self {
            material,
            geometry,
            interaction,
            solver,
        };
        for pol in [Polarization::Ordinary, Polarization::Extraordinary] {
            for l in [
                interaction.lambda_p_nm,
                interaction.lambda_s_nm,
                interaction.lambda_i_nm,
            ] {
                let n_b = d
                    .material
                    .substrate_index(pol, l, interaction.temperature_c)?;
                if geometry.cover_index >= n_b {
                    return Err(Error::InvalidInput(format!(
                        "cover index {} is not below the {pol} substrate index {n_b} at {l} nm",
                        geometry.cover_index
                    )));
                }
                d.material.increment(pol, l)?;
            }
        }
        Ok(d)
    }

    /// Reference interaction for any geometry: 519/780 nm at 25 C
    /// over 10 mm, built-in material and solver settings.
    pub fn with_defaults(geometry: WaveguideGeometry) -> Result<Self> {
        Self::new(
            Material::default(),
            geometry,
            InteractionSpec::from_pump_and_signal(519.0, 780.0, 25.0, 10.0)?,
            SolverSettings::default(),
        )
    }

    pub fn solve(&self, pol: Polarization, wavelength_nm: f64) -> Result<ModalSolution> {
        let t = self.interaction.temperature_c;
        let n_b = self.material.substrate_index(pol, wavelength_nm, t)?;
        let dn = self.material.increment(pol, wavelength_nm)?;
        solve_mode(&self.geometry, pol, n_b, dn, wavelength_nm, &self.solver)
    }

    pub fn group_index(&self, pol: Polarization, wavelength_nm: f64) -> Result<f64> {
        modesolver::group_index(
            |l| self.effective_index(pol, l),
            wavelength_nm,
            self.solver.group_index_step_nm,
        )
    }

    pub fn modes(&self) -> Result<DesignModes> {
        use Polarization::*;
        let s = &self.interaction;
        Ok(DesignModes {
            pump_o: self.solve(Ordinary, s.lambda_p_nm)?,
            signal_o: self.solve(Ordinary, s.lambda_s_nm)?,
            signal_e: self.solve(Extraordinary, s.lambda_s_nm)?,
            idler_o: self.solve(Ordinary, s.lambda_i_nm)?,
            idler_e: self.solve(Extraordinary, s.lambda_i_nm)?,
        })
    }

    pub fn group_indices(&self) -> Result<GroupIndices> {
        use Polarization::*;
        let s = &self.interaction;
        Ok(GroupIndices {
            signal_o: self.group_index(Ordinary, s.lambda_s_nm)?,
            signal_e: self.group_index(Extraordinary, s.lambda_s_nm)?,
            idler_o: self.group_index(Ordinary, s.lambda_i_nm)?,
            idler_e: self.group_index(Extraordinary, s.lambda_i_nm)?,
        })
    }

    /// Modes, grating and zero-mismatch entanglement.
    pub fn evaluate(&self) -> Result<DesignResult> {
        let modes = self.modes()?;
        let indices = modes.indices();
        let (k1, k2) = required_frequencies(&self.interaction, &indices)?;
        let grating = GratingDesign::from_frequencies(k1, k2)?;
        let amplitudes = amplitudes_at_mismatch(&modes, 0.0, 0.0, self.interaction.length_mm);
        Ok(DesignResult {
            modes,
            indices,
            grating,
            gamma: spdc::gamma(&amplitudes)?,
            amplitudes,
            amplitude_ratio_closed_form: amplitude_ratio_closed_form(&modes),
        })
    }

    pub fn spectrum(
        &self,
        grating: &GratingDesign,
        process: Process,
        opts: &SpectrumOptions,
        group: Option<&GroupIndices>,
    ) -> Result<spdc::Spectrum> {
        let method = match (opts.taylor, group) {
            (true, Some(g)) => SpectrumMethod::Taylor(*g),
            (true, None) => SpectrumMethod::Taylor(self.group_indices()?),
            (false, _) => SpectrumMethod::Exact,
        };
        let c = self.interaction.lambda_s_nm;
        spdc::spectrum(
            &self.interaction,
            grating,
            process,
            (c - opts.half_range_nm, c + opts.half_range_nm),
            opts.samples,
            self,
            method,
        )
    }

    /// Full report including bandwidths and sampled spectra.
    pub fn report(&self, opts: &SpectrumOptions) -> Result<EntanglementReport> {
        let r = self.evaluate()?;
        let mut modes = r.modes;
        let group = self.group_indices()?;
        modes.signal_o.group_index = Some(group.signal_o);
        modes.signal_e.group_index = Some(group.signal_e);
        modes.idler_o.group_index = Some(group.idler_o);
        modes.idler_e.group_index = Some(group.idler_e);
        modes.pump_o.group_index =
            Some(self.group_index(Polarization::Ordinary, self.interaction.lambda_p_nm)?);
        let (approx_oe, approx_eo) = bandwidth_approx(
            &group,
            self.interaction.lambda_s_nm,
            self.interaction.length_mm,
        )?;
        let spectrum_oe = self.spectrum(&r.grating, Process::Oe, opts, Some(&group))?;
        let spectrum_eo = self.spectrum(&r.grating, Process::Eo, opts, Some(&group))?;
        let fwhm_oe = spectrum_oe.fwhm()?;
        let fwhm_eo = spectrum_eo.fwhm()?;
        Ok(EntanglementReport {
            interaction: self.interaction,
            geometry: self.geometry,
            gamma: r.gamma,
            amplitudes: r.amplitudes,
            amplitude_ratio_closed_form: r.amplitude_ratio_closed_form,
            bandwidth_oe_nm: fwhm_oe,
            bandwidth_eo_nm: fwhm_eo,
            bandwidth_ratio: fwhm_eo / fwhm_oe,
            bandwidth_approx_oe_nm: approx_oe,
            bandwidth_approx_eo_nm: approx_eo,
            group_indices: group,
            grating_periods: r.grating,
            below_cutoff: modes.below_cutoff().into_iter().map(String::from).collect(),
            modes,
            spectrum_oe,
            spectrum_eo,
        })
    }

    /// Poling pattern over the largest whole number of modulation periods
    /// that fits in the interaction length.
    pub fn poling_pattern(&self, grating: &GratingDesign) -> Result<PolingPattern> {
        let periods = (self.interaction.length_um() / grating.lambdap_um).floor();
        if periods < 1.0 {
            return Err(Error::InvalidInput(format!(
                "interaction length {} mm is shorter than one modulation period ({} um)",
                self.interaction.length_mm, grating.lambdap_um
            )));
        }
        PolingPattern::synthesize(grating, periods * grating.lambdap_um * 1e-3)
    }
}

impl EffectiveIndex for SourceDesigner {
    fn effective_index(&self, pol: Polarization, wavelength_nm: f64) -> Result<f64> {
        self.solve(pol, wavelength_nm).map(|m| m.n_eff)
    }
}
