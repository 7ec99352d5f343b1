use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use squadsim::{plan_squads, simulate, DistanceField, PlanOptions};
use squadsim_bench::{environment, scenario};

fn graph_build(c: &mut Criterion) {
    let mut g = c.benchmark_group("graph_build");
    g.sample_size(10);
    for name in ["corridor", "office"] {
        let env = environment(&scenario(name));
        g.bench_function(name, |b| b.iter(|| env.reseeded(env.seed).unwrap()));
    }
    g.finish();
}

fn distance_field(c: &mut Criterion) {
    let env = environment(&scenario("office"));
    c.bench_function("distance_field/office", |b| {
        b.iter(|| DistanceField::compute(&env.map, env.graph.metric))
    });
}

fn plan(c: &mut Criterion) {
    let mut g = c.benchmark_group("plan");
    g.sample_size(10);
    for name in ["corridor", "office"] {
        let sc = scenario(name);
        let env = environment(&sc);
        g.bench_function(name, |b| {
            b.iter(|| plan_squads(&env, &sc, PlanOptions::default()).unwrap())
        });
    }
    g.finish();
}

fn simulate_mission(c: &mut Criterion) {
    let mut g = c.benchmark_group("simulate");
    g.sample_size(10);
    for name in ["corridor", "office"] {
        let mut sc = scenario(name);
        sc.dt_report = None;
        let env = environment(&sc);
        let plans = plan_squads(&env, &sc, PlanOptions::default()).unwrap();
        g.bench_function(name, |b| {
            b.iter_batched(
                || plans.clone(),
                |p| simulate(&env, &sc, &p).unwrap(),
                BatchSize::SmallInput,
            )
        });
    }
    g.finish();
}

criterion_group!(benches, graph_build, distance_field, plan, simulate_mission);
criterion_main!(benches);
