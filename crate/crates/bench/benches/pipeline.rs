//! Benchmarks for the hot path: assembly, Schur reduction, sawtooth
//! construction and the closed-form oracle.

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use steklov_core::density::{catenoid_density, BoundaryDensity};
use steklov_core::fem::{assemble, dtn_matrix, solve_pencil, steklov_spectrum};
use steklov_core::geometry::{mesh_domain, AnnularDomain};
use steklov_core::homogenise::{homogenise_domain, HomogenisationSpec};
use steklov_core::oracle;

fn bench_assemble(c: &mut Criterion) {
    let domain = AnnularDomain::annulus(1.0, 2.0, 64).unwrap().refined(128).unwrap();
    let mesh = mesh_domain(&domain, 128, 16).unwrap();
    let density = BoundaryDensity::uniform_for(&domain);
    c.bench_function("assemble 128x16 annulus", |b| {
        b.iter(|| assemble(black_box(&mesh), black_box(&density)).unwrap())
    });
}

fn bench_dtn(c: &mut Criterion) {
    let domain = AnnularDomain::annulus(1.0, 2.0, 64).unwrap().refined(128).unwrap();
    let mesh = mesh_domain(&domain, 128, 16).unwrap();
    let density = BoundaryDensity::uniform_for(&domain);
    let system = assemble(&mesh, &density).unwrap();
    c.bench_function("dtn 128x16 annulus", |b| {
        b.iter(|| dtn_matrix(black_box(&system)).unwrap())
    });
}

fn bench_pencil(c: &mut Criterion) {
    let domain = AnnularDomain::annulus(1.0, 2.0, 64).unwrap().refined(128).unwrap();
    let mesh = mesh_domain(&domain, 128, 16).unwrap();
    let density = BoundaryDensity::uniform_for(&domain);
    let system = assemble(&mesh, &density).unwrap();
    let s = dtn_matrix(&system).unwrap();
    c.bench_function("pencil 256 boundary nodes", |b| {
        b.iter(|| solve_pencil(black_box(&s), black_box(&system.boundary_mass), 6).unwrap())
    });
}

fn bench_homogenise(c: &mut Criterion) {
    let base = AnnularDomain::annulus(1.0, 11.0, 64).unwrap();
    let density = catenoid_density(1.0, 11.0).unwrap();
    let spec = HomogenisationSpec::new(32, 8, base.components()).unwrap();
    c.bench_function("homogenise 32 teeth", |b| {
        b.iter(|| homogenise_domain(black_box(&base), black_box(&density), black_box(&spec)).unwrap())
    });
}

fn bench_end_to_end(c: &mut Criterion) {
    let domain = AnnularDomain::annulus(1.0, 2.0, 64).unwrap();
    let density = BoundaryDensity::uniform_for(&domain);
    c.bench_function("spectrum 128x16 annulus", |b| {
        b.iter(|| steklov_spectrum(black_box(&domain), black_box(&density), 128, 16, 6).unwrap())
    });
}

fn bench_oracle(c: &mut Criterion) {
    c.bench_function("annulus oracle k_max 8", |b| {
        b.iter(|| oracle::annulus_spectrum(black_box(1.0), black_box(11.0), 11.0, 1.0, 8).unwrap())
    });
}

criterion_group!(
    benches,
    bench_assemble,
    bench_dtn,
    bench_pencil,
    bench_homogenise,
    bench_end_to_end,
    bench_oracle
);
criterion_main!(benches);
