//! Dual-period quasi-phase-matching.
//!
//! Two type-II processes share one ordinary pump:
//!
//! * `Oe`: pump(o) -> signal(o) + idler(e), needs spatial frequency `K1`;
//! * `Eo`: pump(o) -> signal(e) + idler(o), needs `K2`.
//!
//! A carrier square wave of period `Lambda0` multiplied by a slower square
//! wave of period `Lambdap` has its strongest components at `K0 +- Kp`, so
//! choosing `K0 = (K1 + K2)/2`, `|Kp| = |K1 - K2|/2` phase-matches both.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{idler_wavelength_nm, sinc, Polarization};

/// Relative tolerance on `1/lambda_p = 1/lambda_s + 1/lambda_i`.
pub const ENERGY_CONSERVATION_TOL: f64 = 1e-9;

/// Source of effective indices at arbitrary wavelengths.
pub trait EffectiveIndex {
    fn effective_index(&self, polarization: Polarization, wavelength_nm: f64) -> Result<f64>;
}

impl<F> EffectiveIndex for F
where
    F: Fn(Polarization, f64) -> Result<f64>,
{
    fn effective_index(&self, polarization: Polarization, wavelength_nm: f64) -> Result<f64> {
        self(polarization, wavelength_nm)
    }
}

/// Wavelengths, temperature and interaction length of the source.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InteractionSpec {
    pub lambda_p_nm: f64,
    pub lambda_s_nm: f64,
    pub lambda_i_nm: f64,
    pub temperature_c: f64,
    pub length_mm: f64,
}

impl InteractionSpec {
    pub fn new(
        lambda_p_nm: f64,
        lambda_s_nm: f64,
        lambda_i_nm: f64,
        temperature_c: f64,
        length_mm: f64,
    ) -> Result<Self> {
        let spec = Self {
            lambda_p_nm,
            lambda_s_nm,
            lambda_i_nm,
            temperature_c,
            length_mm,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Idler fixed by energy conservation.
    pub fn from_pump_and_signal(
        lambda_p_nm: f64,
        lambda_s_nm: f64,
        temperature_c: f64,
        length_mm: f64,
    ) -> Result<Self> {
        if !(lambda_p_nm > 0.0 && lambda_s_nm > lambda_p_nm) {
            return Err(Error::InvalidInput(format!(
                "need 0 < lambda_p ({lambda_p_nm} nm) < lambda_s ({lambda_s_nm} nm)"
            )));
        }
        let li = idler_wavelength_nm(lambda_p_nm, lambda_s_nm);
        Self::new(lambda_p_nm, lambda_s_nm, li, temperature_c, length_mm)
    }

    pub fn validate(&self) -> Result<()> {
        let (p, s, i) = (self.lambda_p_nm, self.lambda_s_nm, self.lambda_i_nm);
        if !(p > 0.0 && p < s && s < i && i.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "wavelengths must satisfy 0 < lambda_p < lambda_s < lambda_i (got {p}, {s}, {i} nm)"
            )));
        }
        if !(self.length_mm > 0.0 && self.length_mm.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "interaction length {} mm must be > 0",
                self.length_mm
            )));
        }
        if !self.temperature_c.is_finite() {
            return Err(Error::InvalidInput("temperature must be finite".into()));
        }
        let residual = (1.0 / p - 1.0 / s - 1.0 / i) * p;
        if residual.abs() > ENERGY_CONSERVATION_TOL {
            return Err(Error::EnergyConservation {
                lambda_p_nm: p,
                lambda_s_nm: s,
                lambda_i_nm: i,
            });
        }
        Ok(())
    }

    pub fn length_um(&self) -> f64 {
        self.length_mm * 1e3
    }

    /// Idler wavelength paired with `lambda_s_nm` at this pump.
    pub fn idler_for(&self, lambda_s_nm: f64) -> f64 {
        idler_wavelength_nm(self.lambda_p_nm, lambda_s_nm)
    }
}

/// Effective indices of the five interacting modes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeIndices {
    pub pump_o: f64,
    pub signal_o: f64,
    pub signal_e: f64,
    pub idler_o: f64,
    pub idler_e: f64,
}

/// One of the two down-conversion channels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Process {
    /// Ordinary signal, extraordinary idler.
    Oe,
    /// Extraordinary signal, ordinary idler.
    Eo,
}

impl Process {
    pub fn signal_polarization(self) -> Polarization {
        match self {
            Process::Oe => Polarization::Ordinary,
            Process::Eo => Polarization::Extraordinary,
        }
    }

    pub fn idler_polarization(self) -> Polarization {
        match self {
            Process::Oe => Polarization::Extraordinary,
            Process::Eo => Polarization::Ordinary,
        }
    }
}

/// Wave-vector mismatch `k_p - k_s - k_i` in rad/um, without grating.
fn material_mismatch(
    lambda_p_nm: f64,
    lambda_s_nm: f64,
    lambda_i_nm: f64,
    n_p: f64,
    n_s: f64,
    n_i: f64,
) -> f64 {
    2.0 * PI
        * (n_p / (lambda_p_nm * 1e-3) - n_s / (lambda_s_nm * 1e-3) - n_i / (lambda_i_nm * 1e-3))
}

/// Grating spatial frequencies `(K1, K2)` in rad/um that phase-match the
/// `Oe` and `Eo` processes at the design wavelengths.
pub fn required_frequencies(spec: &InteractionSpec, n: &ModeIndices) -> Result<(f64, f64)> {
    let (p, s, i) = (spec.lambda_p_nm, spec.lambda_s_nm, spec.lambda_i_nm);
    let k1 = material_mismatch(p, s, i, n.pump_o, n.signal_o, n.idler_e);
    let k2 = material_mismatch(p, s, i, n.pump_o, n.signal_e, n.idler_o);
    for (name, value) in [("K1", k1), ("K2", k2)] {
        if !(value > 0.0) {
            return Err(Error::NonPositiveFrequency { name, value });
        }
    }
    Ok((k1, k2))
}

/// Carrier/modulation periods realising a pair of spatial frequencies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GratingDesign {
    #[serde(rename = "K1_rad_per_um")]
    pub k1: f64,
    #[serde(rename = "K2_rad_per_um")]
    pub k2: f64,
    #[serde(rename = "Lambda1_um")]
    pub lambda1_um: f64,
    #[serde(rename = "Lambda2_um")]
    pub lambda2_um: f64,
    #[serde(rename = "Lambda0_um")]
    pub lambda0_um: f64,
    #[serde(rename = "Lambdap_um")]
    pub lambdap_um: f64,
}

impl GratingDesign {
    /// Inverts `K1 = K0 + Kp`, `K2 = K0 - Kp`. `Kp` may be negative (the
    /// usual case, since the `Oe` period is the longer one); the stored
    /// modulation period is `2 pi / |Kp|`.
    pub fn from_frequencies(k1: f64, k2: f64) -> Result<Self> {
        if !(k2 > 0.0) {
            return Err(Error::NonPositiveFrequency {
                name: "K2",
                value: k2,
            });
        }
        if (k1 - k2).abs() <= 1e-12 * k1.abs() {
            return Err(Error::DegenerateModulation);
        }
        let k0 = 0.5 * (k1 + k2);
        // a square wave carries both +-Kp, so only the magnitude matters
        let kp = 0.5 * (k1 - k2).abs();
        Ok(Self {
            k1,
            k2,
            lambda1_um: 2.0 * PI / k1,
            lambda2_um: 2.0 * PI / k2,
            lambda0_um: 2.0 * PI / k0,
            lambdap_um: 2.0 * PI / kp,
        })
    }

    pub fn carrier_frequency(&self) -> f64 {
        2.0 * PI / self.lambda0_um
    }

    pub fn modulation_frequency(&self) -> f64 {
        2.0 * PI / self.lambdap_um
    }

    pub fn frequency(&self, process: Process) -> f64 {
        match process {
            Process::Oe => self.k1,
            Process::Eo => self.k2,
        }
    }
}

/// Phase mismatch `K_grating - (k_p - k_s - k_i)` in rad/um for `process` at
/// signal wavelength `lambda_s_nm`, with the idler slaved by energy
/// conservation and the indices re-evaluated at the shifted wavelengths.
pub fn phase_mismatch(
    spec: &InteractionSpec,
    design: &GratingDesign,
    process: Process,
    lambda_s_nm: f64,
    indices: &impl EffectiveIndex,
) -> Result<f64> {
    let lambda_i_nm = spec.idler_for(lambda_s_nm);
    let n_p = indices.effective_index(Polarization::Ordinary, spec.lambda_p_nm)?;
    let n_s = indices.effective_index(process.signal_polarization(), lambda_s_nm)?;
    let n_i = indices.effective_index(process.idler_polarization(), lambda_i_nm)?;
    let k = material_mismatch(spec.lambda_p_nm, lambda_s_nm, lambda_i_nm, n_p, n_s, n_i);
    Ok(design.frequency(process) - k)
}

/// Sign pattern of the poled nonlinear coefficient along the propagation
/// axis. The sign flips at every boundary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolingPattern {
    pub length_um: f64,
    pub initial_sign: i8,
    pub boundaries: Vec<f64>,
}

/// Flips closer than this (um) are treated as coincident.
const COINCIDENCE_UM: f64 = 1e-9;

fn square_wave_flips(period_um: f64, length_um: f64) -> impl Iterator<Item = f64> {
    let half = 0.5 * period_um;
    (1..)
        .map(move |m| m as f64 * half)
        .take_while(move |&x| x < length_um)
}

impl PolingPattern {
    /// Product of a `Lambda0` and a `Lambdap` square wave, both +1 on the
    /// first half period, over `[0, length_mm]`.
    pub fn synthesize(design: &GratingDesign, length_mm: f64) -> Result<Self> {
        let length_um = length_mm * 1e3;
        if !(length_um > design.lambdap_um) {
            return Err(Error::InvalidInput(format!(
                "pattern length {length_um} um must exceed the modulation period {} um",
                design.lambdap_um
            )));
        }
        let mut carrier = square_wave_flips(design.lambda0_um, length_um).peekable();
        let mut envelope = square_wave_flips(design.lambdap_um, length_um).peekable();
        let mut boundaries = Vec::new();
        loop {
            match (carrier.peek().copied(), envelope.peek().copied()) {
                (Some(a), Some(b)) if (a - b).abs() <= COINCIDENCE_UM => {
                    // both factors flip: the product keeps its sign
                    carrier.next();
                    envelope.next();
                }
                (Some(a), Some(b)) => {
                    if a < b {
                        boundaries.push(a);
                        carrier.next();
                    } else {
                        boundaries.push(b);
                        envelope.next();
                    }
                }
                (Some(a), None) => {
                    boundaries.push(a);
                    carrier.next();
                }
                (None, Some(b)) => {
                    boundaries.push(b);
                    envelope.next();
                }
                (None, None) => break,
            }
        }
        Ok(Self {
            length_um,
            initial_sign: 1,
            boundaries,
        })
    }

    /// Plain 50%-duty grating of one period, for comparison.
    pub fn single_period(period_um: f64, length_um: f64) -> Self {
        Self {
            length_um,
            initial_sign: 1,
            boundaries: square_wave_flips(period_um, length_um).collect(),
        }
    }

    /// Sign of the nonlinear coefficient at `x` (um). At a boundary the sign
    /// of the following domain is returned.
    pub fn sign_at(&self, x: f64) -> i8 {
        let flips = self.boundaries.partition_point(|&b| b <= x);
        if flips % 2 == 0 {
            self.initial_sign
        } else {
            -self.initial_sign
        }
    }

    /// Sign immediately after boundary `k`.
    pub fn sign_after(&self, k: usize) -> i8 {
        if k % 2 == 0 {
            -self.initial_sign
        } else {
            self.initial_sign
        }
    }

    /// `(start, end, sign)` of every domain.
    pub fn domains(&self) -> impl Iterator<Item = (f64, f64, i8)> + '_ {
        let edges = std::iter::once(0.0)
            .chain(self.boundaries.iter().copied())
            .chain(std::iter::once(self.length_um));
        let ends = edges.clone().skip(1);
        edges.zip(ends).enumerate().map(move |(k, (a, b))| {
            let s = if k % 2 == 0 {
                self.initial_sign
            } else {
                -self.initial_sign
            };
            (a, b, s)
        })
    }

    /// `(1/L) int_0^L sign(x) exp(-i K x) dx`, integrated exactly domain by
    /// domain. `K` in rad/um.
    pub fn fourier_component(&self, k: f64) -> Complex64 {
        let sum: Complex64 = self
            .domains()
            .map(|(a, b, s)| {
                let width = b - a;
                let phase = Complex64::from_polar(1.0, -k * 0.5 * (a + b));
                phase * (f64::from(s) * width * sinc(0.5 * k * width))
            })
            .sum();
        sum / self.length_um
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn reference_design() -> GratingDesign {
        GratingDesign::from_frequencies(2.0 * PI / 4.580, 2.0 * PI / 3.653).unwrap()
    }

    #[test]
    fn energy_conservation_is_enforced() {
        assert!(InteractionSpec::from_pump_and_signal(519.0, 780.0, 25.0, 10.0).is_ok());
        assert!(matches!(
            InteractionSpec::new(519.0, 780.0, 1500.0, 25.0, 10.0),
            Err(Error::EnergyConservation { .. })
        ));
        assert!(InteractionSpec::new(780.0, 519.0, 1551.0, 25.0, 10.0).is_err());
        assert!(InteractionSpec::from_pump_and_signal(519.0, 780.0, 25.0, 0.0).is_err());
    }

    #[test]
    fn periods_from_reference_values() {
        let d = reference_design();
        let l0 = 2.0 * 4.580 * 3.653 / (4.580 + 3.653);
        assert_relative_eq!(d.lambda0_um, l0, max_relative = 1e-12);
        assert!((d.lambda0_um - 4.064).abs() < 1e-3);
        assert!((d.lambdap_um - 36.1).abs() < 0.1, "{}", d.lambdap_um);
        assert!(d.lambdap_um > d.lambda0_um);
    }

    #[test]
    fn equal_frequencies_are_degenerate() {
        assert_eq!(
            GratingDesign::from_frequencies(1.5, 1.5),
            Err(Error::DegenerateModulation)
        );
        assert!(GratingDesign::from_frequencies(1.2, -0.1).is_err());
    }

    #[test]
    fn isotropic_indices_give_equal_frequencies() {
        let spec = InteractionSpec::from_pump_and_signal(519.0, 780.0, 25.0, 10.0).unwrap();
        let n = ModeIndices {
            pump_o: 2.33,
            signal_o: 2.26,
            signal_e: 2.26,
            idler_o: 2.21,
            idler_e: 2.21,
        };
        let (k1, k2) = required_frequencies(&spec, &n).unwrap();
        assert_eq!(k1, k2);
    }

    #[test]
    fn negative_frequency_is_infeasible() {
        let spec = InteractionSpec::from_pump_and_signal(519.0, 780.0, 25.0, 10.0).unwrap();
        let n = ModeIndices {
            pump_o: 1.5,
            signal_o: 2.26,
            signal_e: 2.18,
            idler_o: 2.21,
            idler_e: 2.14,
        };
        assert!(matches!(
            required_frequencies(&spec, &n),
            Err(Error::NonPositiveFrequency { .. })
        ));
    }

    #[test]
    fn pattern_signs_near_origin() {
        let d = reference_design();
        let p = PolingPattern::synthesize(&d, 1.0).unwrap();
        assert_eq!(p.sign_at(1e-6), 1);
        assert!(d.lambda0_um / 2.0 < d.lambdap_um / 2.0);
        assert_eq!(p.sign_at(d.lambda0_um / 2.0 + 1e-6), -1);
        assert!(p.boundaries.windows(2).all(|w| w[0] < w[1]));
        assert!(p.boundaries.iter().all(|&b| b > 0.0 && b < p.length_um));
    }

    #[test]
    fn pattern_matches_product_of_square_waves() {
        let d = reference_design();
        let p = PolingPattern::synthesize(&d, 0.5).unwrap();
        let square = |x: f64, period: f64| if (x / period).fract() < 0.5 { 1 } else { -1 };
        for k in 0..5000 {
            let x = 0.0137 + k as f64 * 0.0999;
            assert_eq!(
                p.sign_at(x),
                square(x, d.lambda0_um) * square(x, d.lambdap_um),
                "x = {x}"
            );
        }
    }

    #[test]
    fn coincident_flips_cancel() {
        // Lambdap = 3 Lambda0: f2 flips every 1.5 carrier periods, i.e. on
        // every third carrier flip
        let d = GratingDesign::from_frequencies(
            2.0 * PI * (1.0 + 1.0 / 3.0) / 3.0,
            2.0 * PI * (1.0 - 1.0 / 3.0) / 3.0,
        )
        .unwrap();
        assert_relative_eq!(d.lambda0_um, 3.0, max_relative = 1e-12);
        assert_relative_eq!(d.lambdap_um, 9.0, max_relative = 1e-12);
        let p = PolingPattern::synthesize(&d, 0.09).unwrap();
        // carrier flips at 1.5 k, envelope at 4.5 k: every third carrier flip is cancelled
        assert!(!p.boundaries.iter().any(|&b| (b - 4.5).abs() < 1e-6));
        assert_eq!(p.sign_at(4.4), p.sign_at(4.6));
    }

    #[test]
    fn single_period_fundamental() {
        let p = PolingPattern::single_period(4.0, 4000.0);
        let c = p.fourier_component(2.0 * PI / 4.0);
        assert_relative_eq!(c.norm(), 2.0 / PI, max_relative = 1e-12);
        assert!(p.fourier_component(0.0).norm() < 1e-12);
        assert!(p.fourier_component(4.0 * PI / 4.0).norm() < 1e-12);
    }

    #[test]
    fn commensurate_pattern_spectrum() {
        // exact periodicity: Lambdap = 9 Lambda0
        let k0 = 2.0 * PI / 4.0;
        let kp = k0 / 9.0;
        let d = GratingDesign::from_frequencies(k0 + kp, k0 - kp).unwrap();
        let p = PolingPattern::synthesize(&d, 100.0 * d.lambdap_um * 1e-3).unwrap();
        // The pattern is exactly periodic, so each component is the sum of
        // product coefficients -4/(pi^2 n m) over odd (n, m) with
        // 9n + m fixed: 10 for K0 + Kp, 8 for K0 - Kp.
        let series = |target: i64| {
            let mut s = 0.0;
            for n in (-2_000_001..=2_000_001i64).step_by(2) {
                s += 1.0 / (n * (target - 9 * n)) as f64;
            }
            -4.0 / (PI * PI) * s
        };
        let c1 = p.fourier_component(k0 + kp);
        let c2 = p.fourier_component(k0 - kp);
        assert!((c1.re - series(10)).abs() < 1e-6, "{c1} vs {}", series(10));
        assert!((c2.re - series(8)).abs() < 1e-6, "{c2} vs {}", series(8));
        assert!(c1.im.abs() < 1e-9 && c2.im.abs() < 1e-9);
        assert!(c1.re * c2.re < 0.0);
        // (n, -9n) pairs alias onto DC: the mean is 1/9, not zero
        assert!((p.fourier_component(0.0).re - 1.0 / 9.0).abs() < 1e-12);
        for off in [k0, kp, 3.0 * kp, 3.0 * k0] {
            assert!(p.fourier_component(off).norm() < 1e-9, "{off}");
        }
    }

    proptest! {
        #[test]
        fn frequency_round_trip(k2 in 0.5f64..3.0, dk in 1e-3f64..1.0, flip in proptest::bool::ANY) {
            let (k1, k2) = if flip { (k2, k2 + dk) } else { (k2 + dk, k2) };
            let d = GratingDesign::from_frequencies(k1, k2).unwrap();
            let (k0, kp) = (d.carrier_frequency(), d.modulation_frequency());
            let scale = k1.max(k2);
            prop_assert!(((k0 + kp) - k1.max(k2)).abs() <= 1e-12 * scale);
            prop_assert!(((k0 - kp) - k1.min(k2)).abs() <= 1e-12 * scale);
            prop_assert!(d.lambdap_um > d.lambda0_um);
        }

        #[test]
        fn pattern_signs_are_unit(x in 0.0f64..2000.0) {
            let p = PolingPattern::synthesize(&reference_design(), 2.0).unwrap();
            let s = p.sign_at(x);
            prop_assert!(s == 1 || s == -1);
        }
    }
}
