//! Luce-QRE of asymmetric matching pennies, `(1,0) (0,5) / (0,1) (5,0)`.
//!
//! With `p` Column's and `q` Row's probability of `A`, the fixed point is
//!
//! `p = 1/(1+5^{ρ_C(1−ρ_R)/(ρ_Cρ_R+1)})`, `q = 1/(1+5^{ρ_R(1+ρ_C)/(ρ_Cρ_R+1)})`.
//!
//! Infinite precisions are taken as limits.

use game_core::Q;
use num_traits::{One, Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// `(p range, q range)` of the two rectangles whose union is the closure of
/// all Luce fixed points.
pub const LUCE_UNION: [[(f64, f64); 2]; 2] = [[(0.0, 0.5), (1.0 / 6.0, 0.5)], [(0.5, 5.0 / 6.0), (0.0, 1.0 / 6.0)]];

fn p_exponent(r: f64, c: f64) -> f64 {
    match (r.is_infinite(), c.is_infinite()) {
        (false, false) => c * (1.0 - r) / (c * r + 1.0),
        (true, true) => -1.0,
        (true, false) => {
            if c == 0.0 {
                0.0
            } else {
                -1.0
            }
        }
        (false, true) => {
            if r == 0.0 {
                f64::INFINITY
            } else {
                (1.0 - r) / r
            }
        }
    }
}

fn q_exponent(r: f64, c: f64) -> f64 {
    match (r.is_infinite(), c.is_infinite()) {
        (false, false) => r * (1.0 + c) / (c * r + 1.0),
        (true, true) => 1.0,
        (true, false) => {
            if c == 0.0 {
                f64::INFINITY
            } else {
                (1.0 + c) / c
            }
        }
        (false, true) => {
            if r == 0.0 {
                0.0
            } else {
                1.0
            }
        }
    }
}

/// `(p, q)` at precisions `(ρ_R, ρ_C)`; both must be non-negative (infinity
/// allowed).
pub fn luce_amp_closed_form(rho_r: f64, rho_c: f64) -> (f64, f64) {
    assert!(rho_r >= 0.0 && rho_c >= 0.0, "precisions must be non-negative");
    let f = |e: f64| 1.0 / (1.0 + 5f64.powf(e));
    (f(p_exponent(rho_r, rho_c)), f(q_exponent(rho_r, rho_c)))
}

/// The closed form over the rationals, when both exponents are integers.
pub fn luce_amp_exact(rho_r: &Q, rho_c: &Q) -> Option<(Q, Q)> {
    if rho_r.is_negative() || rho_c.is_negative() {
        return None;
    }
    let one = Q::one();
    let den = rho_c * rho_r + &one;
    let ep = rho_c * (&one - rho_r) / &den;
    let eq = rho_r * (&one + rho_c) / &den;
    let f = |e: &Q| -> Option<Q> {
        if !e.is_integer() {
            return None;
        }
        let k = e.to_integer().to_i32()?;
        let five = Q::from_integer(5.into());
        let pow = if k >= 0 { num_traits::pow(five, k as usize) } else { Q::one() / num_traits::pow(five, (-k) as usize) };
        Some(Q::one() / (Q::one() + pow))
    };
    Some((f(&ep)?, f(&eq)?))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LuceSample {
    pub rho_r: f64,
    pub rho_c: f64,
    pub p: f64,
    pub q: f64,
}

/// `n` uniform draws of `(ρ_R, ρ_C)` from `[0, r_max]²` with their fixed points.
pub fn luce_amp_samples(n: usize, r_max: f64, seed: u64) -> Vec<LuceSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let rho_r = rng.random_range(0.0..=r_max);
            let rho_c = rng.random_range(0.0..=r_max);
            let (p, q) = luce_amp_closed_form(rho_r, rho_c);
            LuceSample { rho_r, rho_c, p, q }
        })
        .collect()
}

/// Whether `(p, q)` lies within `tol` of one of the two rectangles.
pub fn in_luce_union(p: f64, q: f64, tol: f64) -> bool {
    LUCE_UNION.iter().any(|[(p0, p1), (q0, q1)]| {
        p >= p0 - tol && p <= p1 + tol && q >= q0 - tol && q <= q1 + tol
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_sided_limits() {
        let (p, q) = luce_amp_closed_form(f64::INFINITY, 0.0);
        assert_eq!((p, q), (0.5, 0.0));
        let (p, q) = luce_amp_closed_form(0.0, f64::INFINITY);
        assert_eq!((p, q), (0.0, 0.5));
        let (p, q) = luce_amp_closed_form(2.0, f64::INFINITY);
        assert!((p - 1.0 / (1.0 + 5f64.powf(-0.5))).abs() < 1e-15 && (q - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn exact_needs_integer_exponents() {
        assert!(luce_amp_exact(&Q::new(1.into(), 2.into()), &Q::one()).is_none());
    }
}
