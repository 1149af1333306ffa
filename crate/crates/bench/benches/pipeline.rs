use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use dppln_core::modesolver::solve_mode;
use dppln_core::{
    Polarization, Process, SolverSettings, SourceDesigner, SpectrumOptions, WaveguideGeometry,
};

fn reference() -> SourceDesigner {
    SourceDesigner::with_defaults(WaveguideGeometry::new(10.0, 10.0).unwrap()).unwrap()
}

fn mode_solver(c: &mut Criterion) {
    let d = reference();
    let settings = SolverSettings::default();
    let n_b = d
        .material
        .substrate_index(Polarization::Extraordinary, 1551.0, 25.0)
        .unwrap();
    let dn = d
        .material
        .increment(Polarization::Extraordinary, 1551.0)
        .unwrap();
    c.bench_function("solve_mode guided idler", |b| {
        b.iter(|| {
            solve_mode(
                &d.geometry,
                Polarization::Extraordinary,
                n_b,
                black_box(dn),
                1551.0,
                &settings,
            )
        })
    });
    // below cutoff the solver falls back to seeding from every grid node
    let small = WaveguideGeometry::new(6.0, 6.5).unwrap();
    c.bench_function("solve_mode below cutoff", |b| {
        b.iter(|| {
            solve_mode(
                &small,
                Polarization::Extraordinary,
                n_b,
                black_box(dn),
                1551.0,
                &settings,
            )
        })
    });
}

fn pipeline(c: &mut Criterion) {
    let d = reference();
    c.bench_function("evaluate design", |b| {
        b.iter(|| black_box(&d).evaluate().unwrap())
    });
    let mut g = c.benchmark_group("report");
    g.sample_size(10);
    g.bench_function("exact spectra 2001 samples", |b| {
        b.iter(|| d.report(&SpectrumOptions::default()).unwrap())
    });
    g.finish();
}

fn spectra(c: &mut Criterion) {
    let d = reference();
    let r = d.evaluate().unwrap();
    let group = d.group_indices().unwrap();
    let opts = SpectrumOptions {
        taylor: true,
        ..Default::default()
    };
    c.bench_function("taylor spectrum 2001 samples", |b| {
        b.iter(|| {
            d.spectrum(&r.grating, Process::Oe, &opts, Some(&group))
                .unwrap()
        })
    });
}

fn fourier(c: &mut Criterion) {
    let d = reference();
    let r = d.evaluate().unwrap();
    let p = d.poling_pattern(&r.grating).unwrap();
    c.bench_function("fourier_component 1 cm pattern", |b| {
        b.iter(|| p.fourier_component(black_box(r.grating.k1)))
    });
}

criterion_group!(benches, mode_solver, pipeline, spectra, fourier);
criterion_main!(benches);
