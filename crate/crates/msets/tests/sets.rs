use fixtures::load;
use game_core::{q, qi, uniform, Polytope, Q};
use msets::{
    belief_set, colorability, enumerate_m_equilibria, membership, membership_symmetric, Definition, MEquilibrium, MarkerKind,
    MsetsError, Options, RankAssignment,
};

/// Range of the first coordinate over a polytope's vertices.
fn span(p: &Polytope<Q>) -> (Q, Q) {
    let xs: Vec<Q> = p.vertices().iter().map(|v| v[0].clone()).collect();
    (xs.iter().min().unwrap().clone(), xs.iter().max().unwrap().clone())
}

/// A 2×2 product set as `((p_lo, p_hi), (q_lo, q_hi))`: Column's p first.
fn rect(factors: &[Polytope<Q>]) -> ((Q, Q), (Q, Q)) {
    (span(&factors[1]), span(&factors[0]))
}

fn iv(a: (i64, i64), b: (i64, i64)) -> (Q, Q) {
    (q(a.0, a.1), q(b.0, b.1))
}

fn colorable(ms: &[MEquilibrium]) -> Vec<&MEquilibrium> {
    ms.iter().filter(|m| m.colorable).collect()
}

fn dist(xs: &[(i64, i64)]) -> Vec<Q> {
    xs.iter().map(|&(n, d)| q(n, d)).collect()
}

#[test]
fn coordination_sets() {
    let g = load("coord").unwrap();
    let ms = enumerate_m_equilibria(&g, &Options::exact()).unwrap();
    assert_eq!(ms.len(), 2);
    let yellow = ms
        .iter()
        .find(|m| m.choice_set.color == Some(RankAssignment::new(vec![vec![1, 0], vec![1, 0]])))
        .unwrap();
    let red = ms
        .iter()
        .find(|m| m.choice_set.color == Some(RankAssignment::new(vec![vec![0, 1], vec![0, 1]])))
        .unwrap();
    let third = iv((2, 3), (1, 1));
    assert_eq!(rect(yellow.choice_set.factors().unwrap()), (third.clone(), third.clone()));
    assert_eq!(rect(yellow.belief_set.factors().unwrap()), (third.clone(), third));
    let half = iv((0, 1), (1, 2));
    assert_eq!(rect(red.choice_set.factors().unwrap()), (half.clone(), half));
    let two_thirds = iv((0, 1), (2, 3));
    assert_eq!(rect(red.belief_set.factors().unwrap()), (two_thirds.clone(), two_thirds));
    assert_eq!(yellow.choice_set.measure.exact, Some(q(1, 9)));
    assert_eq!(red.choice_set.measure.exact, Some(q(1, 4)));
}

#[test]
fn amp_panel_sets() {
    let g = load("amp").unwrap();
    let ms = enumerate_m_equilibria(&g, &Options::exact()).unwrap();
    let mut rects: Vec<_> = colorable(&ms).iter().map(|m| rect(m.choice_set.factors().unwrap())).collect();
    rects.sort();
    assert_eq!(
        rects,
        vec![
            (iv((0, 1), (1, 2)), iv((1, 6), (1, 2))),
            (iv((1, 2), (5, 6)), iv((0, 1), (1, 6))),
        ]
    );
}

#[test]
fn nongeneric_two_by_two() {
    let g = load("nongeneric_2x2").unwrap();
    let ms = enumerate_m_equilibria(&g, &Options::exact()).unwrap();
    let c = colorable(&ms);
    assert_eq!(c.len(), 1);
    assert_eq!(rect(c[0].choice_set.factors().unwrap()), (iv((1, 2), (1, 1)), iv((0, 1), (1, 2))));
    let full = iv((0, 1), (1, 1));
    assert_eq!(rect(c[0].belief_set.factors().unwrap()), (full.clone(), full));
    assert_eq!(c[0].belief_set.measure.exact, Some(qi(1)));
    // the Nash line p = 1 continues above the colorable square
    let line = ms.iter().find(|m| !m.colorable).unwrap();
    assert_eq!(line.choice_set.dimension, 1);
    assert!(line.choice_set.contains_closed(&[dist(&[(1, 1), (0, 1)]), dist(&[(1, 1), (0, 1)])]));
    assert!(line.choice_set.contains_closed(&[dist(&[(3, 4), (1, 4)]), dist(&[(1, 1), (0, 1)])]));
}

#[test]
fn matching_pennies_has_the_center_only() {
    let g = load("matching_pennies").unwrap();
    let ms = enumerate_m_equilibria(&g, &Options::exact()).unwrap();
    assert_eq!(ms.len(), 1);
    assert!(!ms[0].colorable);
    assert!(!colorability(&ms[0]));
    assert_eq!(ms[0].choice_set.dimension, 0);
    let u = vec![uniform::<Q>(2), uniform(2)];
    assert!(ms[0].choice_set.contains_closed(&u));
    let kinds: Vec<MarkerKind> = ms[0].choice_set.boundary_markers.iter().map(|m| m.kind).collect();
    assert!(kinds.contains(&MarkerKind::Nash) && kinds.contains(&MarkerKind::Uniform));
}

#[test]
fn mondrian_three_colorable_sets() {
    let g = load("mondrian").unwrap();
    let ms = enumerate_m_equilibria(&g, &Options::symmetric_exact()).unwrap();
    assert_eq!(ms.len(), 3);
    assert!(ms.iter().all(colorability));
    let mut nash: Vec<Vec<Q>> = ms
        .iter()
        .flat_map(|m| m.choice_set.boundary_markers.iter())
        .filter(|m| m.kind == MarkerKind::Nash)
        .map(|m| m.point[0].clone())
        .collect();
    nash.sort();
    nash.dedup();
    assert_eq!(nash.len(), 5);
    // red: R ranked highest
    let red = ms.iter().find(|m| m.choice_set.colors[0].order(0)[2] == 0).unwrap();
    let pts: Vec<&Vec<Q>> = red.choice_set.boundary_markers.iter().map(|m| &m.point[0]).collect();
    assert!(pts.contains(&&dist(&[(1, 1), (0, 1), (0, 1)])));
    assert!(pts.contains(&&dist(&[(2, 3), (1, 3), (0, 1)])));
    let yellow = ms.iter().find(|m| m.choice_set.colors[0].order(0)[2] == 2).unwrap();
    assert!(yellow.choice_set.contains_closed(&[dist(&[(1, 6), (0, 1), (5, 6)])]));
}

#[test]
fn fixture_counts() {
    let count = |name: &str| enumerate_m_equilibria(&load(name).unwrap(), &Options::symmetric_exact()).unwrap();
    let ds1 = count("ds1");
    assert_eq!(ds1.len(), 4);
    assert!(ds1.iter().all(|m| m.colorable));
    let coord = enumerate_m_equilibria(&load("coord").unwrap(), &Options::exact()).unwrap();
    // odd and even counts both occur
    assert_eq!(coord.len() % 2, 0);
    assert_eq!(count("mondrian").len() % 2, 1);
}

#[test]
fn degenerate_three_action_components() {
    let g = load("nongeneric_3x3_left").unwrap();
    let ms = enumerate_m_equilibria(&g, &Options::symmetric_exact()).unwrap();
    let mut dims: Vec<usize> = ms.iter().map(|m| m.choice_set.dimension).collect();
    dims.sort();
    assert_eq!(dims, vec![0, 0, 1, 2]);
    let full = ms.iter().find(|m| m.choice_set.dimension == 2).unwrap();
    assert!(full.colorable);
    assert_eq!(full.choice_set.colors[0].order(0), &[0, 1, 2]);
    let points: Vec<Vec<Q>> = ms
        .iter()
        .filter(|m| m.choice_set.dimension == 0)
        .map(|m| m.choice_set.pieces()[0][0].vertices()[0].clone())
        .collect();
    assert!(points.contains(&dist(&[(8, 13), (0, 1), (5, 13)])));
    assert!(points.contains(&dist(&[(1, 1), (0, 1), (0, 1)])));
    let seg = ms.iter().find(|m| m.choice_set.dimension == 1).unwrap();
    assert!(!colorability(seg));
    assert!(seg.choice_set.contains_closed(&[dist(&[(1, 4), (0, 1), (3, 4)])]));
    assert!(seg.choice_set.contains_closed(&[dist(&[(1, 2), (0, 1), (1, 2)])]));
    assert!(!seg.choice_set.contains_closed(&[dist(&[(3, 5), (0, 1), (2, 5)])]));
}

#[test]
fn set_without_nash_or_uniform() {
    let ms = enumerate_m_equilibria(&load("seven_eq").unwrap(), &Options::symmetric_exact()).unwrap();
    assert!(ms.iter().any(|m| m.colorable && m.choice_set.boundary_markers.is_empty()));
}

#[test]
fn coordination_red_closure_holds_uniform() {
    let ms = enumerate_m_equilibria(&load("coord").unwrap(), &Options::exact()).unwrap();
    let red = ms.iter().find(|m| m.choice_set.colors[0].order(0) == [0, 1]).unwrap();
    assert!(red
        .choice_set
        .boundary_markers
        .iter()
        .any(|m| m.kind == MarkerKind::Uniform));
}

#[test]
fn belief_set_examples() {
    let opts = Options::exact();
    let coord = load("coord").unwrap();
    let red = belief_set(&coord, &RankAssignment::new(vec![vec![0, 1], vec![0, 1]]), &opts).unwrap();
    for f in red.factors().unwrap() {
        assert_eq!(span(f), iv((0, 1), (2, 3)));
    }
    // the dominant color of a dominance-solvable game takes every belief
    let g = load("intro_dominance").unwrap();
    let ms = enumerate_m_equilibria(&g, &opts).unwrap();
    assert_eq!(ms.len(), 1);
    let b = belief_set(&g, ms[0].choice_set.color.as_ref().unwrap(), &opts).unwrap();
    assert_eq!(b.measure.exact, Some(qi(1)));
    assert_eq!(ms[0].belief_set.measure.exact, Some(qi(1)));
}

#[test]
fn membership_examples() {
    let g = load("coord").unwrap();
    let c = vec![vec![0.8, 0.2], vec![0.8, 0.2]];
    let good = vec![vec![vec![0.9, 0.1]], vec![vec![0.9, 0.1]]];
    let bad = vec![vec![vec![0.4, 0.6]], vec![vec![0.4, 0.6]]];
    let m = membership(&g, &c, &good, Definition::Two).unwrap();
    assert!(m.member && !m.boundary);
    assert_eq!(m.color, Some(RankAssignment::new(vec![vec![1, 0], vec![1, 0]])));
    assert!(!membership(&g, &c, &bad, Definition::Two).unwrap().member);
    assert!(!membership(&g, &c, &bad, Definition::One).unwrap().member);

    let mp = load("matching_pennies").unwrap();
    let u = vec![uniform::<Q>(2), uniform(2)];
    let m = membership(&mp, &u, &[vec![u[1].clone()], vec![u[0].clone()]], Definition::Two).unwrap();
    assert!(m.member && m.boundary && m.color.is_none());
}

#[test]
fn pure_nash_with_tie_needs_definition_two() {
    let g = load("nongeneric_3x3_left").unwrap();
    let r = dist(&[(1, 1), (0, 1), (0, 1)]);
    assert!(membership_symmetric(&g, &r, &r, Definition::Two).unwrap().member);
    assert!(!membership_symmetric(&g, &r, &r, Definition::One).unwrap().member);
    let mixed = dist(&[(8, 13), (0, 1), (5, 13)]);
    assert!(membership_symmetric(&g, &mixed, &mixed, Definition::One).unwrap().member);
    let seg = dist(&[(1, 4), (0, 1), (3, 4)]);
    assert!(membership_symmetric(&g, &seg, &seg, Definition::One).unwrap().member);
}

#[test]
fn capability_and_symmetry_errors() {
    let three = load("three_player").unwrap();
    assert!(matches!(
        enumerate_m_equilibria(&three, &Options::exact()),
        Err(MsetsError::Capability(_))
    ));
    let chicken = load("chicken").unwrap();
    assert_eq!(
        enumerate_m_equilibria(&chicken, &Options::symmetric_exact()).unwrap_err(),
        MsetsError::NotSymmetric
    );
}

#[test]
fn three_player_sampled() {
    let g = load("three_player").unwrap();
    let opts = Options {
        symmetric: true,
        ..Options::sampled(20_000, 7)
    };
    let a = enumerate_m_equilibria(&g, &opts).unwrap();
    let b = enumerate_m_equilibria(&g, &opts).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.choice_set.measure, y.choice_set.measure);
        assert!(x.choice_set.measure.value <= 1.0 / 6.0 + 3.0 * x.choice_set.measure.std_error);
    }
    // the set has several connected pieces
    assert!(a.iter().any(|m| m.disconnected_warning));
}
