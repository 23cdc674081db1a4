use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use illposed_bench::{diagonal_fixture, generic_data, mazur_fixture};
use illposed_core::diagnostics::{pseudoinverse_growth, weak_star_probe};
use illposed_core::operators::injective_counterexample;
use illposed_core::sphere_enum::{enumerate_directions, Directions};
use illposed_core::tikhonov::{check_closed_form, TikhonovProblem};
use illposed_core::EnumerationParams;
use nalgebra::DVector;

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate");
    for m in [5, 10, 20] {
        let params = EnumerationParams::new(2.0, 3, m).unwrap();
        group.bench_with_input(BenchmarkId::new("s3", m), &params, |b, &p| {
            b.iter(|| enumerate_directions(black_box(p)).len())
        });
    }
    group.bench_function("first_3200_lazy", |b| {
        b.iter(|| Directions::new(EnumerationParams::default()).take(black_box(3200)).count())
    });
    group.finish();
}

fn solver(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve");
    for depth in [200, 800, 3200] {
        let (_, op) = mazur_fixture(depth);
        let y = generic_data(op.n_rows());
        group.bench_with_input(BenchmarkId::new("mazur_generic", depth), &op, |b, op| {
            b.iter(|| {
                let problem = TikhonovProblem::new(op, y.clone(), 0.1).unwrap();
                problem.solve(1e-10, 100_000).unwrap().residual
            })
        });
    }
    let (set, op) = mazur_fixture(400);
    group.bench_function("closed_form_check_400", |b| {
        b.iter(|| check_closed_form(&op, &set, black_box(201), 3.0, 0.3, 1e-12, 10_000).unwrap().deviation)
    });
    let d = diagonal_fixture(64);
    let mut x_true = DVector::zeros(64);
    x_true[0] = 1.0;
    let data = d.apply(&x_true).unwrap() + generic_data(64) * 1e-3;
    group.bench_function("diag_64", |b| {
        b.iter(|| {
            let problem = TikhonovProblem::new(&d, data.clone(), 1e-3).unwrap();
            problem.solve(1e-10, 100_000).unwrap().residual
        })
    });
    group.finish();
}

fn diagnostics(c: &mut Criterion) {
    let (_, op) = mazur_fixture(2000);
    let mut eta = DVector::zeros(op.n_rows());
    eta[0] = 1.0;
    c.bench_function("probe_mazur_2000", |b| {
        b.iter(|| weak_star_probe(&op, black_box(&eta), 2000).unwrap().sup_tail)
    });
    let family: Vec<_> = [8, 64, 256].iter().map(|&n| injective_counterexample(n).unwrap()).collect();
    c.bench_function("growth_injective_8_64_256", |b| {
        b.iter(|| pseudoinverse_growth(black_box(&family)).unwrap().len())
    });
}

criterion_group!(benches, enumeration, solver, diagnostics);
criterion_main!(benches);
