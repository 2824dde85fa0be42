use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use mqlogic_bench::{sentences, valuation};
use mqlogic_core::semantics::{eval_formula, eval_parametric, fixed_points, QuantifierMode, Valuation};
use mqlogic_core::syntax::parse_formula;

fn evaluation(c: &mut Criterion) {
    let mut group = c.benchmark_group("eval_formula");
    for mode in [QuantifierMode::Sup, QuantifierMode::Sum] {
        let v = valuation(mode);
        for (i, a) in sentences(&v).iter().enumerate() {
            group.bench_with_input(BenchmarkId::new(format!("{mode:?}"), i), a, |b, a| {
                b.iter(|| eval_formula(&v, black_box(a)).unwrap())
            });
        }
    }
    group.finish();
}

fn liar(c: &mut Criterion) {
    let mut v = Valuation::parse("const l\nname l = ~Ex x T(l)\nmode sum\n").unwrap();
    let tl = parse_formula("T(l)", v.signature()).unwrap();
    v.set_unknown(&tl).unwrap();
    let a = parse_formula("~Ex x T(l)", v.signature()).unwrap();
    c.bench_function("liar_fixed_points", |b| {
        b.iter(|| fixed_points(&eval_parametric(&v, black_box(&a)).unwrap()))
    });
}

criterion_group!(benches, evaluation, liar);
criterion_main!(benches);
