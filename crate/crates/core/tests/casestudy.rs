use monoset::casestudy::*;
use monoset::graphs::GraphDoc;
use monoset::rational::Q;
use monoset::separation::audit_shape;
use monoset::setsys::Subset;
use monoset::solver::{SolveLimits, SolveStatus};

fn eps(num: i64, den: i64) -> Q {
    Q::new(num, den)
}

/// Best benefit over independent site sets meeting every scenario count,
/// computed straight from the raw instance data.
fn brute_force(inst: &Instance) -> Option<i64> {
    let n = inst.graph.n;
    let need = |k: usize| {
        let mut c = 0;
        while Q::from_integer(c as i64) < (Q::from_integer(1) - inst.epsilon) * Q::from_integer(k as i64) {
            c += 1;
        }
        c
    };
    let req = need(inst.k);
    (0u64..1 << n)
        .filter(|&t| {
            inst.graph
                .edges
                .iter()
                .all(|&[u, v]| t >> (u - 1) & 1 == 0 || t >> (v - 1) & 1 == 0)
        })
        .filter(|&t| {
            inst.scenarios.iter().all(|sc| {
                let ok = (0..inst.k)
                    .filter(|&k| {
                        let mut supply = 0i64;
                        for (p, &i) in sc.support.iter().enumerate() {
                            if t >> (i - 1) & 1 == 1 {
                                supply += sc.a[k][p];
                            }
                        }
                        supply >= sc.b[k]
                    })
                    .count();
                ok >= req
            })
        })
        .map(|t| (0..n).filter(|&i| t >> i & 1 == 1).map(|i| inst.benefits[i]).sum())
        .max()
}

fn tiny(benefits: Vec<i64>, b: Vec<Vec<i64>>, a: Vec<Vec<Vec<i64>>>, k: usize) -> Instance {
    let inst = Instance {
        seed: 0,
        density: 1.0,
        epsilon: Q::from_integer(0),
        k,
        graph: GraphDoc {
            n: 2,
            edges: vec![[1, 2]],
            weights: None,
            vertex_weights: None,
        },
        benefits,
        scenarios: (0..2)
            .map(|j| VertexScenarios {
                support: vec![1, 2],
                a: a[j].clone(),
                b: b[j].clone(),
            })
            .collect(),
    };
    inst.validate().unwrap();
    inst
}

#[test]
fn generation_is_reproducible() {
    let a = generate_instance(8, 0.3, eps(1, 10), 20, 7).unwrap();
    let b = generate_instance(8, 0.3, eps(1, 10), 20, 7).unwrap();
    assert_eq!(a, b);
    assert_eq!(Instance::from_json(&a.to_json()).unwrap(), a);
    assert_ne!(a, generate_instance(8, 0.3, eps(1, 10), 20, 8).unwrap());
    let g = a.to_graph().unwrap();
    assert_eq!(g.m(), 8);
    let c = g.components(g.edge_ground().unwrap().full());
    assert!(c.iter().all(|&r| r == c[0]));
    for sc in &a.scenarios {
        assert!(sc.a.iter().flatten().all(|&v| (0..=SCALE).contains(&v)));
        assert!(sc.b.iter().all(|&v| (0..=SCALE / 10).contains(&v)));
    }
    let k4 = generate_instance(4, 1.0, eps(1, 10), 5, 1).unwrap();
    assert_eq!(k4.graph.edges.len(), 6);
}

#[test]
fn generation_rejects_bad_input() {
    assert!(generate_instance(8, 0.1, eps(1, 10), 20, 1).is_err());
    assert!(generate_instance(17, 0.5, eps(1, 10), 20, 1).is_err());
    assert!(generate_instance(8, 0.5, eps(1, 10), 201, 1).is_err());
    assert!(generate_instance(8, 1.5, eps(1, 10), 20, 1).is_err());
    assert!(generate_instance(8, 0.5, eps(1, 1), 20, 1).is_err());
}

#[test]
fn beta_draws_follow_the_cdf() {
    assert_eq!(beta22_micro(0), 0);
    assert_eq!(beta22_micro(1 << 31), SCALE / 2);
    assert!(beta22_micro(u32::MAX) < SCALE);
    let mut last = 0;
    for u in (0..=u32::MAX).step_by(1 << 24) {
        let v = beta22_micro(u);
        assert!(v >= last);
        last = v;
        let x = v as f64 / SCALE as f64;
        let f = 3.0 * x * x - 2.0 * x * x * x;
        assert!(f >= u as f64 / 4294967296.0 - 1e-12);
    }
}

#[test]
fn satisfaction_oracle_examples() {
    let inst = generate_instance(8, 0.3, eps(1, 10), 20, 3).unwrap();
    let o = satisfaction_oracle(&inst).unwrap();
    assert!(audit_shape(&o, 200, 1).passed());
    let full = Subset::from_bits(0xff);
    let any = (0u64..256).any(|t| o.call(Subset::from_bits(t)));
    assert_eq!(o.call(full), any);
    if inst.scenarios.iter().all(|sc| sc.b.iter().all(|&b| b > 0)) {
        assert!(!o.call(Subset::EMPTY));
    }

    let hand = tiny(
        vec![5, 3],
        vec![vec![10, 50], vec![40, 0]],
        vec![vec![vec![20, 0], vec![30, 60]], vec![vec![5, 30], vec![0, 0]]],
        2,
    );
    // Vertex 1 needs 10 and 50 from (20,0) and (30,60); vertex 2 needs 40 and 0.
    assert_eq!(hand.satisfied_count(0, Subset::from_bits(0b01)), 1);
    assert_eq!(hand.satisfied_count(0, Subset::from_bits(0b10)), 1);
    assert_eq!(hand.satisfied_count(0, Subset::from_bits(0b11)), 2);
    assert_eq!(hand.satisfied_count(1, Subset::from_bits(0b01)), 1);
    assert_eq!(hand.satisfied_count(1, Subset::from_bits(0b11)), 1);
    assert_eq!(hand.need(), 2);
    assert!(!satisfaction_oracle(&hand).unwrap().call(Subset::from_bits(0b11)));
}

#[test]
fn strategies_on_small_instances() {
    let easy = tiny(
        vec![5, 3],
        vec![vec![0], vec![0]],
        vec![vec![vec![0, 0]], vec![vec![0, 0]]],
        1,
    );
    for s in Strategy::ALL {
        let run = run_strategy(&easy, s, SolveLimits::default()).unwrap();
        assert_eq!(run.report.objective_value.to_string(), "5", "{s:?}");
        assert_eq!(run.report.best_point, Some(Subset::singleton(0)));
    }
    let negative = tiny(
        vec![-5, -3],
        vec![vec![0], vec![0]],
        vec![vec![vec![0, 0]], vec![vec![0, 0]]],
        1,
    );
    for s in Strategy::ALL {
        let run = run_strategy(&negative, s, SolveLimits::default()).unwrap();
        assert_eq!(run.report.objective_value.to_string(), "0");
        assert_eq!(run.report.best_point, Some(Subset::EMPTY));
    }
}

#[test]
fn strategies_agree_with_enumeration() {
    for seed in 0..6 {
        for (n, density, k) in [(8, 0.3, 20), (8, 0.7, 20), (10, 0.3, 30), (12, 0.5, 50)] {
            let inst = generate_instance(n, density, eps(1, 10), k, seed).unwrap();
            let expected = brute_force(&inst);
            for s in Strategy::ALL {
                let run = run_strategy(&inst, s, SolveLimits::default()).unwrap();
                match expected {
                    Some(v) => {
                        assert_eq!(
                            run.report.objective_value.finite(),
                            Some(Q::from_integer(v)),
                            "{s:?} seed {seed} n {n}"
                        );
                        let p = run.report.best_point.unwrap();
                        assert_eq!(inst.benefit(p), v);
                    }
                    None => assert_eq!(run.report.status, SolveStatus::Infeasible),
                }
                match s {
                    Strategy::NoCut => assert_eq!(run.sat_cuts + run.clique_cuts, 0),
                    Strategy::ClqCut => assert_eq!(run.sat_cuts, 0),
                    Strategy::SatCut => assert_eq!(run.clique_cuts, 0),
                    Strategy::AllCut => {}
                }
            }
        }
    }
}

#[test]
fn sat_cuts_keep_every_feasible_site_set() {
    for seed in 0..5 {
        let inst = generate_instance(10, 0.4, eps(1, 10), 30, seed).unwrap();
        let oracle = satisfaction_oracle(&inst).unwrap();
        let feasible: Vec<Subset> = (0u64..1 << 10)
            .map(Subset::from_bits)
            .filter(|&t| oracle.call(t))
            .collect();
        let model = build_strategy_model(&inst, Strategy::SatCut).unwrap();
        let report = monoset::solver::solve(&model, SolveLimits::default()).unwrap();
        for row in &report.lazy_rows {
            for &t in &feasible {
                let x: Vec<bool> = (0..10).map(|i| t.contains(i)).collect();
                assert!(row.is_satisfied(&x), "cut {row} removes feasible {t}");
            }
        }
    }
}

#[test]
fn campaign_grid() {
    let config = CampaignConfig {
        n: 8,
        density: 0.3,
        epsilon: eps(1, 10),
        k: 20,
    };
    let report = campaign(
        std::slice::from_ref(&config),
        &[1, 2, 3],
        &Strategy::ALL,
        SolveLimits::default(),
    )
    .unwrap();
    assert_eq!(report.rows.len(), 12);
    assert!(report.all_agree());
    assert!(report.rows.iter().all(|r| r.agrees == "true"));
    let csv = report.to_csv().unwrap();
    assert!(csv.starts_with("config,seed,strategy,status,value,nodes,cuts,millis,agrees\n"));

    let empty = campaign(&[], &[1], &Strategy::ALL, SolveLimits::default()).unwrap();
    assert!(empty.rows.is_empty());

    let limited = campaign(
        &[config],
        &[1],
        &Strategy::ALL,
        SolveLimits {
            node_limit: Some(2),
            ..SolveLimits::default()
        },
    )
    .unwrap();
    assert!(limited
        .rows
        .iter()
        .all(|r| r.status != "node-limit" || r.agrees.is_empty()));
    assert!(limited.all_agree());
}
