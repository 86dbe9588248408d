use monoset::approx::{bimonotone_closure, interval_decompose, Bipartition, DecomposeStrategy};
use monoset::cuts::LinearCut;
use monoset::graphs::fixtures::{path3, star3, triangle};
use monoset::graphs::{
    sign_split, signed_mincut_oracle, system_bipartite_subgraphs, system_dominating, system_forests,
    system_st_connected,
};
use monoset::rational::Q;
use monoset::separation::{MembershipOracle, Shape};
use monoset::setsys::{GroundSet, SetSystem, Subset};
use monoset::solver::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(n: i64) -> Q {
    Q::from_integer(n)
}

fn qs(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| q(x)).collect()
}

fn cost_of(costs: &[Q], t: Subset) -> Q {
    t.indices().map(|i| costs[i]).sum()
}

/// Exhaustive minimum over the members of `s`.
fn brute_min(s: &SetSystem, costs: &[Q]) -> Option<Q> {
    s.members().map(|t| cost_of(costs, t)).min()
}

fn random_costs(rng: &mut ChaCha8Rng, n: usize) -> Vec<Q> {
    (0..n)
        .map(|_| Q::new(rng.gen_range(-6..=6), rng.gen_range(1..=3)))
        .collect()
}

fn finite(r: &SolveReport) -> Q {
    r.objective_value.finite().expect("finite objective")
}

fn check_against(report: &SolveReport, s: &SetSystem, costs: &[Q]) {
    match brute_min(s, costs) {
        Some(v) => {
            assert_eq!(report.status, SolveStatus::Optimal);
            assert_eq!(finite(report), v);
            let p = report.best_point.unwrap();
            assert!(s.contains(p));
            assert_eq!(cost_of(costs, p), v);
        }
        None => {
            assert_eq!(report.status, SolveStatus::Infeasible);
            assert_eq!(report.objective_value, ObjectiveValue::PosInf);
        }
    }
}

fn oracle(s: &SetSystem, shape: Shape) -> MembershipOracle {
    MembershipOracle::from_system(s.clone(), shape).unwrap()
}

#[test]
fn solve_examples() {
    let empty = BipModel::new(3, 3)
        .unwrap()
        .with_costs(Sense::Min, &qs(&[1, 1, 1]))
        .unwrap();
    let r = solve(&empty, SolveLimits::default()).unwrap();
    assert_eq!(
        (r.status, finite(&r), r.best_point),
        (SolveStatus::Optimal, q(0), Some(Subset::EMPTY))
    );

    let dom = system_dominating(&path3()).unwrap();
    let r = solve(
        &build_upper_model(&dom, &qs(&[1, 1, 1])).unwrap(),
        SolveLimits::default(),
    )
    .unwrap();
    assert_eq!((finite(&r), r.best_point), (q(1), Some(Subset::singleton(1))));

    let mut bad = BipModel::new(1, 1).unwrap();
    let g1 = GroundSet::new(1).unwrap();
    bad.add_cut(&LinearCut::covering(g1, Subset::singleton(0))).unwrap();
    bad.add_cut(&LinearCut::new(g1, Subset::EMPTY, Subset::singleton(0), 1).unwrap())
        .unwrap();
    let r = solve(&bad, SolveLimits::default()).unwrap();
    assert_eq!(
        (r.status, r.objective_value),
        (SolveStatus::Infeasible, ObjectiveValue::PosInf)
    );
    assert_eq!(r.objective_value.to_string(), "+inf");
    bad.sense = Sense::Max;
    assert_eq!(
        solve(&bad, SolveLimits::default()).unwrap().objective_value,
        ObjectiveValue::NegInf
    );
}

#[test]
fn upper_model_examples() {
    let tri = triangle();
    let conn = system_st_connected(&tri, 0, 2).unwrap();
    let r = solve(
        &build_upper_model(&conn, &qs(&[1, 1, 1])).unwrap(),
        SolveLimits::default(),
    )
    .unwrap();
    assert_eq!((finite(&r), r.best_point), (q(1), Some(Subset::singleton(2))));

    let g = GroundSet::new(3).unwrap();
    let all = oracle(&SetSystem::power_set(g).unwrap(), Shape::Upper);
    let r = solve(
        &build_upper_model(&all, &qs(&[2, -1, -3])).unwrap(),
        SolveLimits::default(),
    )
    .unwrap();
    assert_eq!(finite(&r), q(-4));

    let dom = system_dominating(&star3()).unwrap();
    let r = solve(
        &build_upper_model(&dom, &qs(&[1, 1, 1, 1])).unwrap(),
        SolveLimits::default(),
    )
    .unwrap();
    assert_eq!((finite(&r), r.best_point), (q(1), Some(Subset::singleton(0))));
}

#[test]
fn lower_model_examples() {
    let tri = triangle();
    let bip = system_bipartite_subgraphs(&tri).unwrap();
    let mut m = build_lower_model(&bip, &qs(&[1, 1, 1])).unwrap();
    m.sense = Sense::Max;
    let r = solve(&m, SolveLimits::default()).unwrap();
    assert_eq!(finite(&r), q(2));
    assert_eq!(r.best_point.unwrap().len(), 2);

    let forests = system_forests(&tri).unwrap();
    let mut m = build_lower_model(&forests, &qs(&[3, 2, 1])).unwrap();
    m.sense = Sense::Max;
    let r = solve(&m, SolveLimits::default()).unwrap();
    assert_eq!((finite(&r), r.best_point), (q(5), Some(Subset::from_bits(0b011))));

    let mut m = build_lower_model(&forests, &qs(&[0, 0, 0])).unwrap();
    m.sense = Sense::Max;
    assert_eq!(finite(&solve(&m, SolveLimits::default()).unwrap()), q(0));
}

#[test]
fn bimonotone_model_examples() {
    let tri = triangle().with_weights(qs(&[1, -2, -2])).unwrap();
    let o = signed_mincut_oracle(&tri, sign_split(&tri).unwrap()).unwrap();
    let r = solve(
        &build_bimonotone_model(&o, &tri.weights()).unwrap(),
        SolveLimits::default(),
    )
    .unwrap();
    assert_eq!((finite(&r), r.best_point), (q(-4), Some(Subset::from_bits(0b110))));

    let pos = triangle().with_weights(qs(&[1, 2, 3])).unwrap();
    let o = signed_mincut_oracle(&pos, sign_split(&pos).unwrap()).unwrap();
    let r = solve(
        &build_bimonotone_model(&o, &pos.weights()).unwrap(),
        SolveLimits::default(),
    )
    .unwrap();
    assert_eq!((finite(&r), r.best_point), (q(0), Some(Subset::EMPTY)));

    let edge = monoset::graphs::Graph::new(2, vec![(0, 1)])
        .unwrap()
        .with_weights(qs(&[-1]))
        .unwrap();
    let o = signed_mincut_oracle(&edge, sign_split(&edge).unwrap()).unwrap();
    let r = solve(
        &build_bimonotone_model(&o, &edge.weights()).unwrap(),
        SolveLimits::default(),
    )
    .unwrap();
    assert_eq!(finite(&r), q(-1));
}

#[test]
fn interval_model_examples() {
    let g = GroundSet::new(3).unwrap();
    let s = SetSystem::from_labels(g, &[&[1], &[2, 3]]).unwrap();
    let comps: Vec<IntervalComponent> = [&[1usize][..], &[2, 3]]
        .iter()
        .map(|m| IntervalComponent::from_system(&SetSystem::from_labels(g, &[m]).unwrap()).unwrap())
        .collect();
    let r = solve(
        &build_interval_model(&comps, &qs(&[1, 1, 1])).unwrap(),
        SolveLimits::default(),
    )
    .unwrap();
    assert_eq!((finite(&r), r.best_point), (q(1), Some(Subset::singleton(0))));
    check_against(&r, &s, &qs(&[1, 1, 1]));

    let costs = qs(&[5, 1, 1]);
    let r = solve(&build_interval_model(&comps, &costs).unwrap(), SolveLimits::default()).unwrap();
    assert_eq!((finite(&r), r.best_point), (q(2), Some(Subset::from_bits(0b110))));

    let none = solve(&build_interval_model(&[], &costs).unwrap(), SolveLimits::default()).unwrap();
    assert_eq!(none.status, SolveStatus::Infeasible);
}

#[test]
fn builders_exact_on_random_systems() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..150 {
        let n = rng.gen_range(1..=5);
        let g = GroundSet::new(n).unwrap();
        let density = [0.0, 0.15, 0.4, 0.8][trial % 4];
        let s = SetSystem::random(g, density, &mut rng).unwrap();
        let costs = random_costs(&mut rng, n);
        let up = s.up_closure();
        let r = solve(
            &build_upper_model(&oracle(&up, Shape::Upper), &costs).unwrap(),
            SolveLimits::default(),
        )
        .unwrap();
        check_against(&r, &up, &costs);
        let down = s.down_closure();
        let r = solve(
            &build_lower_model(&oracle(&down, Shape::Lower), &costs).unwrap(),
            SolveLimits::default(),
        )
        .unwrap();
        check_against(&r, &down, &costs);
        let split = Bipartition::from_i(g, Subset::from_bits(rng.gen_range(0..1u64 << n))).unwrap();
        let b = bimonotone_closure(&s, &split).unwrap();
        let r = solve(
            &build_bimonotone_model(&bimonotone_oracle(&b), &costs).unwrap(),
            SolveLimits::default(),
        )
        .unwrap();
        check_against(&r, &b.closure, &costs);
        let comps: Vec<IntervalComponent> = interval_decompose(&s, DecomposeStrategy::Greedy)
            .iter()
            .map(|c| IntervalComponent::from_system(c).unwrap())
            .collect();
        let r = solve(&build_interval_model(&comps, &costs).unwrap(), SolveLimits::default()).unwrap();
        check_against(&r, &s, &costs);
    }
}

#[test]
fn max_sense_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..60 {
        let n = rng.gen_range(1..=5);
        let g = GroundSet::new(n).unwrap();
        let down = SetSystem::random(g, 0.3, &mut rng).unwrap().down_closure();
        let costs = random_costs(&mut rng, n);
        let mut m = build_lower_model(&oracle(&down, Shape::Lower), &costs).unwrap();
        m.sense = Sense::Max;
        let r = solve(&m, SolveLimits::default()).unwrap();
        match down.members().map(|t| cost_of(&costs, t)).max() {
            Some(v) => assert_eq!(finite(&r), v),
            None => assert_eq!(r.objective_value, ObjectiveValue::NegInf),
        }
    }
}

#[test]
fn lazy_cuts_never_exclude_members() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..80 {
        let n = rng.gen_range(2..=5);
        let g = GroundSet::new(n).unwrap();
        let s = SetSystem::random(g, 0.3, &mut rng).unwrap();
        let costs = random_costs(&mut rng, n);
        let split = Bipartition::from_i(g, Subset::from_bits(rng.gen_range(0..1u64 << n))).unwrap();
        let b = bimonotone_closure(&s, &split).unwrap();
        let targets = [
            (
                build_upper_model(&oracle(&s.up_closure(), Shape::Upper), &costs).unwrap(),
                s.up_closure(),
            ),
            (
                build_lower_model(&oracle(&s.down_closure(), Shape::Lower), &costs).unwrap(),
                s.down_closure(),
            ),
            (
                build_bimonotone_model(&bimonotone_oracle(&b), &costs).unwrap(),
                b.closure.clone(),
            ),
        ];
        for (m, target) in targets {
            let r = solve(&m, SolveLimits::default()).unwrap();
            for row in &r.lazy_rows {
                for t in target.members() {
                    let x: Vec<bool> = (0..n).map(|i| t.contains(i)).collect();
                    assert!(row.is_satisfied(&x), "row {row} cuts off member {t}");
                }
            }
        }
    }
}

#[test]
fn increasing_costs_over_upper_closure() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..100 {
        let n = rng.gen_range(1..=5);
        let g = GroundSet::new(n).unwrap();
        let s = SetSystem::random(g, 0.25, &mut rng).unwrap();
        let costs: Vec<Q> = (0..n)
            .map(|_| Q::new(rng.gen_range(0..=7), rng.gen_range(1..=4)))
            .collect();
        let r = solve(
            &build_upper_model(&oracle(&s.up_closure(), Shape::Upper), &costs).unwrap(),
            SolveLimits::default(),
        )
        .unwrap();
        match brute_min(&s, &costs) {
            Some(v) => assert_eq!(finite(&r), v),
            None => assert_eq!(r.status, SolveStatus::Infeasible),
        }
    }
}

#[test]
fn reports_are_deterministic() {
    let tri = triangle().with_weights(qs(&[1, -2, -2])).unwrap();
    let o = signed_mincut_oracle(&tri, sign_split(&tri).unwrap()).unwrap();
    let m = build_bimonotone_model(&o, &tri.weights()).unwrap();
    let a = solve(&m, SolveLimits::default()).unwrap();
    let b = solve(&m, SolveLimits::default()).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.to_json(), b.to_json());
}

#[test]
fn node_limit_and_size_limit() {
    let g = GroundSet::new(8).unwrap();
    let s = SetSystem::from_predicate(g, |t| t.len() >= 4).unwrap();
    let m = build_upper_model(&oracle(&s, Shape::Upper), &[q(1); 8]).unwrap();
    let r = solve(
        &m,
        SolveLimits {
            node_limit: Some(3),
            ..SolveLimits::default()
        },
    )
    .unwrap();
    assert_eq!(r.status, SolveStatus::NodeLimit);
    assert!(solve(
        &m,
        SolveLimits {
            max_vars: 4,
            ..SolveLimits::default()
        }
    )
    .is_err());
}

#[test]
fn model_doc_solves() {
    let text = r#"{"n":3,"costs":[1,"1/2",2],"cuts":[{"pos":[1,2],"neg":[],"rhs":1}],
        "lazy":[{"system":{"n":3,"members":[[],[1],[2],[3],[1,3]]},"shape":"lower"}]}"#;
    let doc: ModelDoc = serde_json::from_str(text).unwrap();
    let r = solve(&doc.to_model().unwrap(), SolveLimits::default()).unwrap();
    assert_eq!((finite(&r), r.best_point), (Q::new(1, 2), Some(Subset::singleton(1))));
    let bad = r#"{"n":2,"costs":[1,1],"lazy":[{"system":{"n":2,"members":[[1]]},"shape":"upper"}]}"#;
    let doc: ModelDoc = serde_json::from_str(bad).unwrap();
    assert!(doc.to_model().is_err());
}

fn region(n: usize, pred: impl Fn(Subset) -> bool + Send + Sync + 'static) -> MembershipOracle {
    MembershipOracle::new(GroundSet::new(n).unwrap(), Shape::General, pred).unwrap()
}

/// Exhaustive minimum of the piecewise objective over the base system.
fn brute_piecewise(regions: &[PiecewiseRegion], base: &MembershipOracle) -> Option<Q> {
    base.ground()
        .subsets()
        .filter(|&t| base.call(t))
        .map(|t| {
            let r = regions.iter().find(|r| r.region.call(t)).unwrap();
            r.value(t)
        })
        .min()
}

#[test]
fn piecewise_examples() {
    let n = 3;
    let g = GroundSet::new(n).unwrap();
    let base = oracle(
        &SetSystem::from_labels(g, &[&[1], &[2, 3], &[1, 2, 3]]).unwrap(),
        Shape::General,
    );
    let one = vec![PiecewiseRegion {
        region: region(n, |_| true),
        coefs: qs(&[3, 1, 1]),
        constant: q(2),
        direction: Direction::Increasing,
    }];
    let r = solve_piecewise(&one, &base, None, SolveLimits::default()).unwrap();
    assert_eq!((finite(&r), r.best_point), (q(4), Some(Subset::from_bits(0b110))));

    let two = vec![
        PiecewiseRegion {
            region: region(n, |t| t.contains(0)),
            coefs: qs(&[-1, -2, -2]),
            constant: q(1),
            direction: Direction::Decreasing,
        },
        PiecewiseRegion {
            region: region(n, |t| !t.contains(0)),
            coefs: qs(&[0, 1, 3]),
            constant: q(0),
            direction: Direction::Increasing,
        },
    ];
    let r = solve_piecewise(&two, &base, None, SolveLimits::default()).unwrap();
    assert_eq!((finite(&r), r.best_point), (q(-4), Some(Subset::from_bits(0b111))));
    assert!(build_piecewise_model(&two, &base, Some(q(2))).is_err());
    let m = default_big_m(&two);
    assert_eq!(m, q(1 + 5 + 1 + 4));
    assert!(build_piecewise_model(&two, &base, Some(m)).is_ok());

    let mixed = vec![PiecewiseRegion {
        region: region(n, |_| true),
        coefs: qs(&[1, -1, 0]),
        constant: q(0),
        direction: Direction::Increasing,
    }];
    assert!(build_piecewise_model(&mixed, &base, None).is_err());
    let overlap = vec![one[0].clone(), one[0].clone()];
    assert!(build_piecewise_model(&overlap, &base, None).is_err());
}

#[test]
fn piecewise_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    for _ in 0..80 {
        let n = rng.gen_range(2..=4);
        let g = GroundSet::new(n).unwrap();
        let base = oracle(&SetSystem::random(g, 0.4, &mut rng).unwrap(), Shape::General);
        let pivot = rng.gen_range(0..n);
        let mut regions = Vec::new();
        for side in [true, false] {
            let inc = rng.gen_bool(0.5);
            let coefs: Vec<Q> = (0..n)
                .map(|_| {
                    let c = Q::new(rng.gen_range(0..=5), rng.gen_range(1..=2));
                    if inc {
                        c
                    } else {
                        -c
                    }
                })
                .collect();
            regions.push(PiecewiseRegion {
                region: region(n, move |t| t.contains(pivot) == side),
                coefs,
                constant: q(rng.gen_range(-3..=3)),
                direction: if inc {
                    Direction::Increasing
                } else {
                    Direction::Decreasing
                },
            });
        }
        let r = solve_piecewise(&regions, &base, None, SolveLimits::default()).unwrap();
        match brute_piecewise(&regions, &base) {
            Some(v) => {
                assert_eq!(finite(&r), v);
                let p = r.best_point.unwrap();
                assert!(base.call(p));
                let k = regions.iter().position(|rg| rg.region.call(p)).unwrap();
                assert_eq!(regions[k].value(p), v);
            }
            None => assert_eq!(r.status, SolveStatus::Infeasible),
        }
    }
}

fn identity() -> Vec<Vec<Q>> {
    vec![qs(&[1, 0]), qs(&[0, 1])]
}

#[test]
fn bilinear_constrained_examples() {
    let ones = qs(&[1, 1]);
    let run =
        |alpha| solve_bilinear_constrained(&identity(), q(alpha), &ones, &ones, &[], SolveLimits::default()).unwrap();
    assert_eq!(finite(&run(1)), q(2));
    assert_eq!(finite(&run(2)), q(4));
    assert_eq!(finite(&run(0)), q(0));
    assert_eq!(run(3).status, SolveStatus::Infeasible);
}

#[test]
fn bilinear_objective_examples() {
    let g = GroundSet::new(4).unwrap();
    let feas = MembershipOracle::new(g, Shape::Upper, |t| {
        (t.bits() & 0b0011) != 0 && (t.bits() & 0b1100) != 0
    })
    .unwrap();
    let r = solve_bilinear_objective(&identity(), Some(&feas), None, SolveLimits::default()).unwrap();
    assert!(r.exact);
    assert_eq!(finite(&r.report), q(0));
    let p = r.report.best_point.unwrap();
    assert!(feas.call(p));

    let zero = vec![qs(&[0, 0]), qs(&[0, 0])];
    let r = solve_bilinear_objective(&zero, None, None, SolveLimits::default()).unwrap();
    assert_eq!((finite(&r.report), r.incumbents.len()), (q(0), 1));

    let g2 = GroundSet::new(2).unwrap();
    let both = MembershipOracle::new(g2, Shape::Upper, |t| t.bits() == 0b11).unwrap();
    let r = solve_bilinear_objective(&[qs(&[1])], Some(&both), None, SolveLimits::default()).unwrap();
    assert_eq!((finite(&r.report), r.incumbents.len()), (q(1), 1));
    assert_eq!(r.report.status, SolveStatus::Optimal);

    let never = MembershipOracle::new(g2, Shape::Upper, |_| false).unwrap();
    let r = solve_bilinear_objective(&[qs(&[1])], Some(&never), None, SolveLimits::default()).unwrap();
    assert_eq!(r.report.status, SolveStatus::Infeasible);
}

/// Brute-force `⟨x, R y⟩`.
fn bilinear_value(r: &[Vec<Q>], t: Subset) -> Q {
    let rows = r.len();
    let mut v = q(0);
    for (i, row) in r.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            if t.contains(i) && t.contains(rows + j) {
                v += e;
            }
        }
    }
    v
}

#[test]
fn bilinear_schemes_match_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(59);
    for _ in 0..60 {
        let (rows, cols) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let r: Vec<Vec<Q>> = (0..rows)
            .map(|_| (0..cols).map(|_| q(rng.gen_range(0..=3))).collect())
            .collect();
        let alpha = q(rng.gen_range(0..=6));
        let cx = random_costs(&mut rng, rows);
        let cy = random_costs(&mut rng, cols);
        let g = GroundSet::new(rows + cols).unwrap();
        let costs: Vec<Q> = cx.iter().chain(&cy).copied().collect();
        let best = g
            .subsets()
            .filter(|&t| bilinear_value(&r, t) >= alpha)
            .map(|t| cost_of(&costs, t))
            .min();
        let rep = solve_bilinear_constrained(&r, alpha, &cx, &cy, &[], SolveLimits::default()).unwrap();
        assert_eq!(rep.objective_value.finite(), best);

        let lvl = rng.gen_range(1..=rows + cols);
        let feas = MembershipOracle::new(g, Shape::Upper, move |t| t.len() >= lvl).unwrap();
        let best = g
            .subsets()
            .filter(|t| t.len() >= lvl)
            .map(|t| bilinear_value(&r, t))
            .min()
            .unwrap();
        let rep = solve_bilinear_objective(&r, Some(&feas), None, SolveLimits::default()).unwrap();
        assert_eq!(finite(&rep.report), best);
    }
}
