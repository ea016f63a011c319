use game_core::{Game, Scalar};
use proptest::prelude::*;
use qre::*;

fn bimatrix(k: usize, cells: &[(i64, i64)]) -> Game {
    let rows: Vec<Vec<(i64, i64)>> = cells.chunks(k).map(<[_]>::to_vec).collect();
    Game::bimatrix(&rows).unwrap()
}

fn games(k: usize) -> impl Strategy<Value = Game> {
    prop::collection::vec((-20i64..=20, -20i64..=20), k * k).prop_map(move |c| bimatrix(k, &c))
}

/// A 3×3 game whose first row action sits at or below the average of the
/// other two in every column.
fn dominated_games() -> impl Strategy<Value = Game> {
    (
        prop::collection::vec(-20i64..=20, 6),
        prop::collection::vec(0i64..=6, 3),
        prop::collection::vec(-20i64..=20, 9),
    )
        .prop_map(|(rows, slack, col)| {
            let mut cells = Vec::new();
            for c in 0..3 {
                let (a, b) = (rows[c], rows[3 + c]);
                // integer payoffs: double the two mixing rows
                cells.push((a + b - slack[c], col[c]));
            }
            for r in 0..2 {
                for c in 0..3 {
                    cells.push((2 * rows[3 * r + c], col[3 * (r + 1) + c]));
                }
            }
            bimatrix(3, &cells)
        })
}

fn check_trace(g: &Game) -> Result<(), TestCaseError> {
    let t = logit_qre_trace(g, &default_grid(g)).map_err(|e| TestCaseError::fail(e.to_string()))?;
    for (i, s) in t[0].profile.iter().enumerate() {
        let u = 1.0 / g.actions(i) as f64;
        prop_assert!(s.iter().all(|x| (x - u).abs() < 1e-15));
    }
    for p in &t {
        prop_assert!(p.residual <= 1e-10);
        prop_assert!(logit_residual(g, p.lambda, &p.profile) <= 1e-10);
        prop_assert!(p.profile.iter().flatten().all(|&x| x > 0.0));
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn traces_2x2(g in games(2)) {
        check_trace(&g)?;
    }

    #[test]
    fn traces_3x3(g in games(3)) {
        check_trace(&g)?;
    }

    #[test]
    fn even_domination_bounds_every_trace(g in dominated_games()) {
        let d = dominated_pairs(&g);
        prop_assert!(d.iter().any(|d| d.player == 0 && d.dominated == 0 && d.even()));
        let t = logit_qre_trace(&g, &default_grid(&g)).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert!(t.iter().all(|p| p.profile[0][0] <= 1.0 / 3.0 + BOUND_SLACK));
        // the bound holds for any belief, not only on the trace
        let m = g.payoff_matrix(0);
        for lambda in [0.1, 1.0, 10.0] {
            for b in [[1.0, 0.0, 0.0], [0.2, 0.3, 0.5], [0.0, 0.0, 1.0]] {
                let pi: Vec<f64> = m.iter().map(|r| r.iter().zip(&b).map(|(a, w)| a.to_f64() * w).sum()).collect();
                let r = logit_response(&g, 0, &[vec![1.0 / 3.0; 3], b.to_vec()], lambda);
                let direct = 1.0 / (1.0 + (lambda * (pi[1] - pi[0])).exp() + (lambda * (pi[2] - pi[0])).exp());
                prop_assert!((r[0] - direct).abs() < 1e-12);
                prop_assert!(r[0] <= 1.0 / 3.0 + BOUND_SLACK);
            }
        }
    }

    #[test]
    fn luce_points_stay_in_the_union(r in 0.0f64..1e3, c in 0.0f64..1e3) {
        let (p, q) = luce_amp_closed_form(r, c);
        prop_assert!(in_luce_union(p, q, 1e-9));
        // below ρ_R = 1 Column leans to B; above it to A
        if r < 1.0 { prop_assert!(p <= 0.5); } else { prop_assert!(p >= 0.5); }
    }
}
