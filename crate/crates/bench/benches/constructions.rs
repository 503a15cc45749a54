use criterion::{black_box, criterion_group, criterion_main, Criterion};

use pathlink::apex::{p4_decompose_two_apex, ApexInput};
use pathlink::bipartite::decompose_k_bipartite;
use pathlink::cyclic::{c4_difference_family, develop, walecki};
use pathlink::graph::{complete_bipartite, complete_graph, BlockShape};
use pathlink::linker::{downlink_c4, downlink_p5};
use pathlink::oracle::{find_decomposition, SearchBudget};
use pathlink::verify_design;

fn bipartite(c: &mut Criterion) {
    c.bench_function("matrix plan k=16 x=16", |b| b.iter(|| decompose_k_bipartite(black_box(16), 16).unwrap()));
}

fn apex(c: &mut Criterion) {
    let g = complete_graph(30).unwrap();
    c.bench_function("two-apex K30", |b| {
        b.iter(|| p4_decompose_two_apex(&ApexInput::new(g.clone(), 28, 29).unwrap()).unwrap())
    });
}

fn cyclic(c: &mut Criterion) {
    c.bench_function("develop C4 family v=57", |b| {
        b.iter(|| develop(&c4_difference_family(black_box(57)).unwrap()).unwrap())
    });
    c.bench_function("walecki K31", |b| b.iter(|| walecki(black_box(31)).unwrap()));
}

fn linker(c: &mut Criterion) {
    c.bench_function("downlink_c4 57→58", |b| b.iter(|| downlink_c4(black_box(57), 58).unwrap()));
    c.bench_function("downlink_p5 48→49", |b| b.iter(|| downlink_p5(black_box(48), 49).unwrap()));
}

fn oracle(c: &mut Criterion) {
    let g = complete_bipartite(3, 4).unwrap();
    c.bench_function("oracle P5 on K3,4", |b| {
        b.iter(|| find_decomposition(&g, BlockShape::path(5), SearchBudget::default()))
    });
}

fn verify(c: &mut Criterion) {
    let d = develop(&c4_difference_family(57).unwrap()).unwrap();
    c.bench_function("verify C4 on K57", |b| b.iter(|| verify_design(black_box(&d))));
}

criterion_group!(benches, bipartite, apex, cyclic, linker, oracle, verify);
criterion_main!(benches);
