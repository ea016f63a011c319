//! Rank assignments ("colors").

use std::fmt;

use game_core::{Scalar, Q};

/// One strict ordering per player, listed from lowest to highest rank.
///
/// Symmetric sets carry a single ordering shared by every player.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct RankAssignment {
    orders: Vec<Vec<usize>>,
}

impl RankAssignment {
    pub fn new(orders: Vec<Vec<usize>>) -> Self {
        for o in &orders {
            let mut s = o.clone();
            s.sort_unstable();
            assert!(s.iter().enumerate().all(|(i, &a)| i == a), "not a permutation: {o:?}");
        }
        RankAssignment { orders }
    }

    /// Every assignment for the given action counts, in lexicographic order.
    pub fn all(counts: &[usize]) -> Vec<Self> {
        let per: Vec<Vec<Vec<usize>>> = counts
            .iter()
            .map(|&k| game_core::correspondence::permutations(&(0..k).collect::<Vec<_>>()))
            .collect();
        let mut out = vec![Vec::new()];
        for options in per {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<Vec<usize>>| {
                    options.iter().map(move |o| {
                        let mut p = prefix.clone();
                        p.push(o.clone());
                        p
                    })
                })
                .collect();
        }
        out.into_iter().map(RankAssignment::new).collect()
    }

    pub fn orders(&self) -> &[Vec<usize>] {
        &self.orders
    }

    pub fn order(&self, player: usize) -> &[usize] {
        &self.orders[player]
    }

    /// Normalized rank vectors: action at position `s` gets `(s+1)/(K(K+1)/2)`.
    pub fn rank_vectors<S: Scalar>(&self) -> Vec<Vec<S>> {
        self.orders
            .iter()
            .map(|o| {
                let base = game_core::rank_vector::<S>(o.len());
                let mut r = vec![S::zero(); o.len()];
                for (s, &a) in o.iter().enumerate() {
                    r[a] = base[s].clone();
                }
                r
            })
            .collect()
    }

    pub fn rank_vectors_exact(&self) -> Vec<Vec<Q>> {
        self.rank_vectors::<Q>()
    }

    /// `"B<A | A<B"` style label using action names.
    pub fn label(&self, labels: &[Vec<String>]) -> String {
        self.orders
            .iter()
            .enumerate()
            .map(|(i, o)| {
                o.iter()
                    .map(|&a| labels.get(i).and_then(|l| l.get(a)).cloned().unwrap_or_else(|| a.to_string()))
                    .collect::<Vec<_>>()
                    .join("<")
            })
            .collect::<Vec<_>>()
            .join(" | ")
    }
}

impl fmt::Display for RankAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .orders
            .iter()
            .map(|o| o.iter().map(|a| (a + 1).to_string()).collect::<Vec<_>>().join("<"))
            .collect();
        write!(f, "{}", parts.join(" | "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use game_core::q;

    #[test]
    fn counts_and_vectors() {
        assert_eq!(RankAssignment::all(&[3, 3]).len(), 36);
        assert_eq!(RankAssignment::all(&[2, 2, 2]).len(), 8);
        let r = RankAssignment::new(vec![vec![2, 0, 1]]);
        assert_eq!(r.rank_vectors_exact()[0], vec![q(2, 6), q(3, 6), q(1, 6)]);
        assert_eq!(r.to_string(), "3<1<2");
    }
}
