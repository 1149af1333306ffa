//! Poling-pattern spectra against a sampled FFT.

use std::f64::consts::PI;

use dppln_core::{GratingDesign, PolingPattern};
use proptest::prelude::*;
use rustfft::{num_complex::Complex, FftPlanner};

fn sampled_spectrum(p: &PolingPattern, n: usize) -> Vec<Complex<f64>> {
    let dx = p.length_um / n as f64;
    let mut buf: Vec<Complex<f64>> = (0..n)
        .map(|j| Complex::new(p.sign_at((j as f64 + 0.5) * dx) as f64, 0.0))
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    buf.iter()
        .enumerate()
        .map(|(k, c)| c * Complex::from_polar(1.0 / n as f64, -PI * k as f64 / n as f64))
        .collect()
}

#[test]
fn fft_matches_piecewise_integral_on_strong_bins() {
    let g = GratingDesign::from_frequencies(1.4, 1.65).unwrap();
    let p = PolingPattern::synthesize(&g, 37.0 * g.lambdap_um * 1e-3).unwrap();
    let n = 1 << 20;
    let fft = sampled_spectrum(&p, n);
    let bin_of = |k: f64| (k * p.length_um / (2.0 * PI)).round() as usize;
    for k in [
        g.k1,
        g.k2,
        3.0 * g.carrier_frequency() + g.modulation_frequency(),
    ] {
        let b = bin_of(k);
        let exact = p.fourier_component(2.0 * PI * b as f64 / p.length_um);
        assert!((fft[b] - exact).norm() < 1e-3 * exact.norm(), "bin {b}");
    }
}

#[test]
fn even_multiples_of_modulation_vanish() {
    // K0 = 12 Kp: odd-odd products land on odd multiples of Kp only
    let kp = 0.1;
    let g = GratingDesign::from_frequencies(13.0 * kp, 11.0 * kp).unwrap();
    let p = PolingPattern::synthesize(&g, 50.0 * g.lambdap_um * 1e-3).unwrap();
    for m in (0..40).step_by(2) {
        assert!(p.fourier_component(m as f64 * kp).norm() < 1e-10, "{m} Kp");
    }
    assert!(p.fourier_component(13.0 * kp).norm() > 0.3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn components_are_bounded_and_conjugate(k in -5.0f64..5.0, k2 in 0.8f64..1.6, dk in 0.05f64..0.6) {
        let g = GratingDesign::from_frequencies(k2 + dk, k2).unwrap();
        let p = PolingPattern::synthesize(&g, 3.0 * g.lambdap_um * 1e-3).unwrap();
        let c = p.fourier_component(k);
        prop_assert!(c.norm() <= 1.0 + 1e-12);
        let m = p.fourier_component(-k);
        prop_assert!((c - m.conj()).norm() < 1e-12);
    }
}
