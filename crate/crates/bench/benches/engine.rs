use criterion::{black_box, criterion_group, criterion_main, Criterion};

use varbi::brst::{descent_solve, dh_solve, nilpotency_check, s_operator};
use varbi::variational::{check_decomposition, euler_lagrange};
use varbi_bench::{descent_inputs, forms, lagrangians, polys, su2};

fn kernel(c: &mut Criterion) {
    let (_, ps) = polys(50);
    c.bench_function("total_derivative/50", |b| {
        b.iter(|| {
            for p in &ps {
                black_box(p.total_derivative(1).total_derivative(2));
            }
        })
    });
    c.bench_function("mul/50", |b| {
        b.iter(|| {
            for w in ps.windows(2) {
                black_box(&w[0] * &w[1]);
            }
        })
    });
}

fn bicomplex(c: &mut Criterion) {
    let (_, fs) = forms(50);
    c.bench_function("d/50", |b| {
        b.iter(|| {
            for f in &fs {
                black_box(f.d(3));
            }
        })
    });
    c.bench_function("split_d/50", |b| {
        b.iter(|| {
            for f in &fs {
                black_box(f.split_d(3));
            }
        })
    });
}

fn variational(c: &mut Criterion) {
    let ls = lagrangians(20);
    c.bench_function("euler_lagrange/20", |b| {
        b.iter(|| {
            for l in &ls {
                black_box(euler_lagrange(l));
            }
        })
    });
    c.bench_function("decomposition/20", |b| {
        b.iter(|| {
            for l in &ls {
                black_box(check_decomposition(l));
            }
        })
    });
}

fn brst(c: &mut Criterion) {
    let (m, _, s) = su2(2);
    let fields = m.fields();
    c.bench_function("nilpotency/su2", |b| b.iter(|| black_box(nilpotency_check(&s, &fields).unwrap())));
    let (s1, inputs) = descent_inputs(10);
    c.bench_function("s_operator/10", |b| {
        b.iter(|| {
            for f in &inputs {
                black_box(s_operator(&s1, f).unwrap());
            }
        })
    });
    c.bench_function("dh_solve/10", |b| {
        b.iter(|| {
            for f in &inputs {
                black_box(dh_solve(f, 1, 2).unwrap());
            }
        })
    });
    c.bench_function("descent/10", |b| {
        b.iter(|| {
            for f in &inputs {
                black_box(descent_solve(&s1, f, 3).unwrap());
            }
        })
    });
}

criterion_group!(benches, kernel, bicomplex, variational, brst);
criterion_main!(benches);
