use fixtures::load;
use game_core::{q, Q};
use msets::{enumerate_m_equilibria, membership, Definition, Options};
use mu_eq::{mu_equilibria, mu_power_exact, verify_meta_inclusion};

fn check(name: &str, samples: usize) {
    let g = load(name).unwrap();
    let colors: Vec<_> = enumerate_m_equilibria(&g, &Options { colorable_only: true, ..Options::exact() })
        .unwrap()
        .into_iter()
        .filter_map(|m| m.choice_set.color)
        .collect();
    assert!(!colors.is_empty());
    let per = samples.div_ceil(colors.len());
    let mut same = 0;
    for c in &colors {
        let r = verify_meta_inclusion(&g, c, per, 9).unwrap();
        assert_eq!(r.forward_violations, 0, "{name} {c}");
        assert_eq!(r.backward_violations, 0, "{name} {c}");
        assert!(r.fixed_points >= per);
        same += r.same_color;
    }
    assert!(same > 0);
}

#[test]
fn coordination() {
    check("coord", 500);
}

#[test]
fn chicken() {
    check("chicken", 500);
}

#[test]
fn mondrian() {
    check("mondrian", 200);
}

#[test]
fn ds1() {
    check("ds1", 200);
}

#[test]
fn chicken_fixed_point_is_an_m_profile() {
    let g = load("chicken").unwrap();
    let e = mu_equilibria(&g, &mu_power_exact(&g, 1)).unwrap();
    let x = e[0].point().unwrap();
    assert_eq!(x[0][0], q(2, 3));
    let b: Vec<Vec<Vec<Q>>> = vec![vec![x[1].clone()], vec![x[0].clone()]];
    let m = membership(&g, &x, &b, Definition::Two).unwrap();
    assert!(m.member && m.color.is_some());
}

#[test]
fn non_colorable_color_is_rejected() {
    let g = load("coord").unwrap();
    let c = msets::RankAssignment::new(vec![vec![0, 1], vec![1, 0]]);
    assert!(verify_meta_inclusion(&g, &c, 5, 0).is_err());
}
