use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use sl3char::gluing::{qstar, verify_anti_poisson};
use sl3char::leaves::transversality_survey;
use sl3char::oracle::sample_points;
use sl3char::poisson::{jacobi_defect, pants, torus};
use sl3char::{tol, Exec, RingElement, VarIndex};

const MODES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn triples() -> Vec<[VarIndex; 3]> {
    let v = VarIndex::ALL;
    let mut out = vec![];
    for a in 0..v.len() {
        for b in a + 1..v.len() {
            for c in b + 1..v.len() {
                out.push([v[a], v[b], v[c]]);
            }
        }
    }
    out
}

fn sampling(c: &mut Criterion) {
    let mut g = c.benchmark_group("sample_points_200");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| sample_points(black_box(7), 200, exec).unwrap())
        });
    }
    g.finish();
}

fn transversality(c: &mut Criterion) {
    let mut g = c.benchmark_group("transversality_200");
    g.sample_size(20);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| transversality_survey(black_box(7), 200, tol::RANK, exec).unwrap())
        });
    }
    g.finish();
}

fn jacobi(c: &mut Criterion) {
    let ts = triples();
    let mut g = c.benchmark_group("jacobi_84_triples");
    g.sample_size(20);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                for bv in [pants(), torus()] {
                    let ok = exec.map_slice(&ts, |t| {
                        let [f, h, k] = t.map(RingElement::generator);
                        jacobi_defect(bv, &f, &h, &k).is_zero()
                    });
                    assert!(ok.into_iter().all(|z| z));
                }
            })
        });
    }
    g.finish();
}

fn anti_poisson(c: &mut Criterion) {
    qstar();
    let mut g = c.benchmark_group("anti_poisson_36_pairs");
    g.sample_size(20);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| verify_anti_poisson(exec).sign)
        });
    }
    g.finish();
}

criterion_group!(benches, sampling, transversality, jacobi, anti_poisson);
criterion_main!(benches);
