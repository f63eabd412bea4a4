//! Support evaluation over a whole net, on the calling thread versus the
//! rayon pool.

use std::hint::black_box;

use ballbody::geom::{make_sphere_net, vector};
use ballbody::par;
use ballbody::{BallBodyExpr, Support, SupportEval};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn bodies() -> Vec<(&'static str, BallBodyExpr)> {
    let lens = BallBodyExpr::generators(vec![vector(&[0.0, 0.0]), vector(&[1.0, 0.0])]).unwrap();
    let spiky = BallBodyExpr::generators(vec![
        vector(&[0.3, 0.1]),
        vector(&[-0.4, 0.2]),
        vector(&[0.1, -0.5]),
        vector(&[0.2, 0.4]),
        vector(&[-0.2, -0.3]),
    ])
    .unwrap();
    let mixed = BallBodyExpr::combine(0.4, &spiky.c_dual().unwrap(), &lens).unwrap();
    vec![("lens", lens), ("five", spiky), ("mixed", mixed)]
}

fn net_support(c: &mut Criterion) {
    let net = make_sphere_net(2, 0.005).unwrap();
    let mut group = c.benchmark_group("net_support");
    group.sample_size(20);
    for (name, k) in bodies() {
        let e = SupportEval::with_default_tol(k);
        group.bench_with_input(BenchmarkId::new("seq", name), &e, |b, e| {
            b.iter(|| par::map_seq(net.directions(), |u| e.support(black_box(u)).unwrap()))
        });
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("par", name), &e, |b, e| {
            b.iter(|| par::map_par(net.directions(), |u| e.support(black_box(u)).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, net_support);
criterion_main!(benches);
