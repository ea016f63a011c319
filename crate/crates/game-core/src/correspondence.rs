//! Best-response, rank and rank-μ correspondences.
//!
//! All three map a payoff vector to the convex hull of a finite vertex set.
//! `rank_mu` is the general case: sort `μ` ascending and hand its values to the
//! payoff blocks from worst to best, permuting freely inside tied blocks.
//! Best response is `rank_mu` with a unit vector, rank uses `(1,…,K)/(K(K+1)/2)`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use crate::scalar::Scalar;

/// Weak ordering of coordinates, as blocks of tied indices in ascending order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeakOrder {
    blocks: Vec<Vec<usize>>,
}

impl WeakOrder {
    /// Blocks are listed lowest first; each block is sorted.
    pub fn from_blocks(mut blocks: Vec<Vec<usize>>) -> Self {
        for b in &mut blocks {
            b.sort_unstable();
        }
        WeakOrder { blocks }
    }

    /// Strict order from an ascending list of indices.
    pub fn strict(ascending: &[usize]) -> Self {
        WeakOrder {
            blocks: ascending.iter().map(|&a| vec![a]).collect(),
        }
    }

    /// Weak order of a vector under tie comparison.
    pub fn of<S: Scalar>(values: &[S]) -> Self {
        let mut idx: Vec<usize> = (0..values.len()).collect();
        idx.sort_by(|&a, &b| {
            values[a]
                .partial_cmp(&values[b])
                .unwrap_or(Ordering::Equal)
                .then(a.cmp(&b))
        });
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for i in idx {
            match blocks.last_mut() {
                Some(b) if values[b[0]].cmp_tie(&values[i]) == Ordering::Equal => b.push(i),
                _ => blocks.push(vec![i]),
            }
        }
        WeakOrder::from_blocks(blocks)
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn is_strict(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1)
    }

    /// Position of each index's block (0 = lowest).
    pub fn levels(&self) -> Vec<usize> {
        let mut out = vec![0; self.len()];
        for (lvl, b) in self.blocks.iter().enumerate() {
            for &a in b {
                out[a] = lvl;
            }
        }
        out
    }

    /// Indices in the highest block.
    pub fn top(&self) -> &[usize] {
        self.blocks.last().map_or(&[], Vec::as_slice)
    }

    /// All strict orders refining this one, as ascending index lists.
    pub fn linear_extensions(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for b in &self.blocks {
            let perms = permutations(b);
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    perms.iter().map(move |p| {
                        let mut v = prefix.clone();
                        v.extend_from_slice(p);
                        v
                    })
                })
                .collect();
        }
        out
    }

    /// Whether `other` (usually strict) refines this order.
    pub fn refined_by(&self, other: &WeakOrder) -> bool {
        let mine = self.levels();
        let theirs = other.levels();
        (0..mine.len()).all(|a| {
            (0..mine.len()).all(|b| mine[a] >= mine[b] || theirs[a] < theirs[b])
        })
    }
}

impl fmt::Display for WeakOrder {
    /// One-based labels: `1 < 3 < 2`, ties as `1 = 2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                b.iter()
                    .map(|a| (a + 1).to_string())
                    .collect::<Vec<_>>()
                    .join(" = ")
            })
            .collect();
        f.write_str(&parts.join(" < "))
    }
}

/// All permutations of a slice, in lexicographic order of positions.
pub fn permutations<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head.clone());
            out.push(tail);
        }
    }
    out
}

/// Shape of a correspondence value by affine dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Point,
    Segment,
    Face,
    Hull,
}

/// Convex hull of a finite vertex set in the simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrespondenceValue<S> {
    pub vertices: Vec<Vec<S>>,
    pub kind: Kind,
    /// Block structure behind the vertices: `(indices, sorted values)` per tied
    /// block. The hull is the product of the block permutahedra.
    blocks: Vec<(Vec<usize>, Vec<S>)>,
}

impl<S: Scalar> CorrespondenceValue<S> {
    pub fn dimension(&self) -> usize {
        self.blocks.iter().map(|(idx, vals)| block_dim(idx, vals)).sum()
    }

    /// Membership of `x` in the hull (exact in rational mode, tie-tolerant in
    /// float mode). A permutahedron contains `x` iff the sorted coordinates of
    /// `x` majorize-dominate the sorted values from below with equal totals.
    pub fn contains(&self, x: &[S]) -> bool {
        let k: usize = self.blocks.iter().map(|b| b.0.len()).sum();
        if x.len() != k {
            return false;
        }
        self.blocks.iter().all(|(idx, vals)| {
            let mut xs: Vec<S> = idx.iter().map(|&a| x[a].clone()).collect();
            xs.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
            let mut px = S::zero();
            let mut pv = S::zero();
            for (xi, vi) in xs.iter().zip(vals) {
                px = px + xi.clone();
                pv = pv + vi.clone();
                if px.cmp_tie(&pv) == Ordering::Less {
                    return false;
                }
            }
            px.cmp_tie(&pv) == Ordering::Equal
        })
    }

    /// Average of the vertices (a relative-interior point).
    pub fn barycenter(&self) -> Vec<S> {
        let k = self.vertices[0].len();
        let n = S::from_i64(self.vertices.len() as i64);
        (0..k)
            .map(|c| {
                self.vertices
                    .iter()
                    .fold(S::zero(), |acc, v| acc + v[c].clone())
                    / n.clone()
            })
            .collect()
    }

    /// Same hull, compared as vertex sets.
    pub fn same_hull(&self, other: &Self) -> bool {
        self.vertices.len() == other.vertices.len()
            && self
                .vertices
                .iter()
                .all(|v| other.vertices.iter().any(|w| vec_tie(v, w)))
    }
}

fn vec_tie<S: Scalar>(a: &[S], b: &[S]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.cmp_tie(y) == Ordering::Equal)
}

fn block_dim<S: Scalar>(idx: &[usize], vals: &[S]) -> usize {
    // distinct values inside a block each add freedom; all-equal values pin it
    if vals.first().zip(vals.last()).is_some_and(|(a, b)| a.cmp_tie(b) == Ordering::Equal) {
        0
    } else {
        idx.len() - 1
    }
}

/// `rank^μ(π)`: convex hull of the permutations of `μ` whose order agrees with
/// the weak order of `π`.
pub fn rank_mu<S: Scalar>(payoffs: &[S], mu: &[S]) -> CorrespondenceValue<S> {
    assert_eq!(payoffs.len(), mu.len(), "payoff and mu dimensions differ");
    rank_mu_order(&WeakOrder::of(payoffs), mu)
}

/// `rank^μ` for a given weak order of payoffs.
pub fn rank_mu_order<S: Scalar>(order: &WeakOrder, mu: &[S]) -> CorrespondenceValue<S> {
    let k = mu.len();
    let mut sorted = mu.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    let mut blocks = Vec::with_capacity(order.blocks().len());
    let mut pos = 0;
    for b in order.blocks() {
        blocks.push((b.clone(), sorted[pos..pos + b.len()].to_vec()));
        pos += b.len();
    }

    let mut vertices: Vec<Vec<S>> = vec![vec![S::zero(); k]];
    for (idx, vals) in &blocks {
        let perms = distinct_permutations(vals);
        let mut next = Vec::with_capacity(vertices.len() * perms.len());
        for v in &vertices {
            for p in &perms {
                let mut w = v.clone();
                for (&a, val) in idx.iter().zip(p) {
                    w[a] = val.clone();
                }
                next.push(w);
            }
        }
        vertices = next;
    }
    vertices.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));

    let mut value = CorrespondenceValue {
        vertices,
        kind: Kind::Point,
        blocks,
    };
    value.kind = kind_of(value.dimension(), k);
    value
}

fn kind_of(dim: usize, k: usize) -> Kind {
    match dim {
        0 => Kind::Point,
        1 => Kind::Segment,
        d if d + 1 == k => Kind::Hull,
        _ => Kind::Face,
    }
}

/// Permutations of a sorted value list, skipping repeats (exact equality in
/// rational mode, ties in float mode).
fn distinct_permutations<S: Scalar>(vals: &[S]) -> Vec<Vec<S>> {
    let mut groups: Vec<(S, usize)> = Vec::new();
    for v in vals {
        match groups.last_mut() {
            Some((g, n)) if g.cmp_tie(v) == Ordering::Equal => *n += 1,
            _ => groups.push((v.clone(), 1)),
        }
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(vals.len());
    fill(&mut groups, vals.len(), &mut cur, &mut out);
    out
}

fn fill<S: Scalar>(groups: &mut [(S, usize)], left: usize, cur: &mut Vec<S>, out: &mut Vec<Vec<S>>) {
    if left == 0 {
        out.push(cur.clone());
        return;
    }
    for g in 0..groups.len() {
        if groups[g].1 == 0 {
            continue;
        }
        groups[g].1 -= 1;
        cur.push(groups[g].0.clone());
        fill(groups, left - 1, cur, out);
        cur.pop();
        groups[g].1 += 1;
    }
}

/// Normalized rank vector `r_1 = (1,2,…,K)/(K(K+1)/2)`.
pub fn rank_vector<S: Scalar>(k: usize) -> Vec<S> {
    let total = S::from_i64((k * (k + 1) / 2) as i64);
    (1..=k).map(|j| S::from_i64(j as i64) / total.clone()).collect()
}

/// Best response: hull of the unit vectors of payoff-maximizing actions.
pub fn best_response<S: Scalar>(payoffs: &[S]) -> CorrespondenceValue<S> {
    let order = WeakOrder::of(payoffs);
    let k = payoffs.len();
    let top: BTreeSet<usize> = order.top().iter().copied().collect();
    let vertices: Vec<Vec<S>> = top
        .iter()
        .map(|&a| crate::game::pure(k, a))
        .collect();
    let mut blocks: Vec<(Vec<usize>, Vec<S>)> = Vec::new();
    let rest: Vec<usize> = (0..k).filter(|a| !top.contains(a)).collect();
    if !rest.is_empty() {
        blocks.push((rest.clone(), vec![S::zero(); rest.len()]));
    }
    let mut top_vals = vec![S::zero(); top.len()];
    *top_vals.last_mut().expect("nonempty") = S::one();
    blocks.push((top.into_iter().collect(), top_vals));
    let dim = vertices.len() - 1;
    CorrespondenceValue {
        vertices,
        kind: kind_of(dim, k),
        blocks,
    }
}

/// Rank correspondence.
pub fn rank<S: Scalar>(payoffs: &[S]) -> CorrespondenceValue<S> {
    rank_mu(payoffs, &rank_vector::<S>(payoffs.len()))
}

/// Orderings of a point's coordinates (ascending, several at ties).
pub fn rank_assignment_of<S: Scalar>(point: &[S]) -> Vec<Vec<usize>> {
    WeakOrder::of(point).linear_extensions()
}

/// `μ(ρ) = (1^ρ,…,K^ρ)/Σ k^ρ` with an integer exponent, exact.
pub fn mu_power_exact(k: usize, rho: u32) -> Vec<crate::scalar::Q> {
    use num_bigint::BigInt;
    let w: Vec<BigInt> = (1..=k).map(|j| num_traits::pow(BigInt::from(j), rho as usize)).collect();
    let total: BigInt = w.iter().sum();
    w.into_iter()
        .map(|x| crate::scalar::Q::new(x, total.clone()))
        .collect()
}

/// `μ(ρ)` for a real exponent, in floating point. Computed as
/// `(j/K)^ρ / Σ (k/K)^ρ` so large exponents do not overflow.
pub fn mu_power_f64(k: usize, rho: f64) -> Vec<f64> {
    let w: Vec<f64> = (1..=k).map(|j| (j as f64 / k as f64).powf(rho)).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|x| x / total).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi, Q};

    fn qs(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| qi(x)).collect()
    }

    #[test]
    fn best_response_cases() {
        let v = best_response(&qs(&[3, 1, 2]));
        assert_eq!(v.vertices, vec![qs(&[1, 0, 0])]);
        assert_eq!(v.kind, Kind::Point);
        let v = best_response(&qs(&[3, 3, 1]));
        assert_eq!(v.vertices, vec![qs(&[1, 0, 0]), qs(&[0, 1, 0])]);
        assert_eq!(v.kind, Kind::Segment);
        let v = best_response(&qs(&[2, 2, 2]));
        assert_eq!(v.vertices.len(), 3);
        assert_eq!(v.kind, Kind::Hull);
        assert!(v.contains(&[q(1, 3), q(1, 3), q(1, 3)]));
        assert!(!best_response(&qs(&[3, 3, 1])).contains(&[q(1, 2), q(1, 4), q(1, 4)]));
    }

    #[test]
    fn rank_cases() {
        let v = rank(&qs(&[3, 1, 2]));
        assert_eq!(v.vertices, vec![vec![q(1, 2), q(1, 6), q(1, 3)]]);
        let v = rank(&qs(&[2, 2, 1]));
        assert_eq!(
            v.vertices,
            vec![vec![q(1, 2), q(1, 3), q(1, 6)], vec![q(1, 3), q(1, 2), q(1, 6)]]
        );
        assert_eq!(v.kind, Kind::Segment);
        let v = rank(&qs(&[5, 5, 5]));
        assert_eq!(v.vertices.len(), 6);
        assert_eq!(v.kind, Kind::Hull);
        assert!(v.contains(&[q(1, 3), q(1, 3), q(1, 3)]));
        assert!(!v.contains(&[q(1, 10), q(1, 2), q(2, 5)]));
    }

    #[test]
    fn rank_mu_special_cases() {
        // two-action chicken row payoffs at p = 1/2: A = 3, B = 1.5
        let v = rank_mu(&[qi(3), q(3, 2)], &[q(1, 3), q(2, 3)]);
        assert_eq!(v.vertices, vec![vec![q(2, 3), q(1, 3)]]);
        let u = vec![q(1, 3); 3];
        assert_eq!(rank_mu(&qs(&[1, 7, 4]), &u).vertices, vec![u.clone()]);
        assert_eq!(rank_mu(&qs(&[1, 7, 4]), &u).kind, Kind::Point);
        let e = vec![qi(1), qi(0), qi(0)];
        assert_eq!(rank_mu(&qs(&[3, 1, 2]), &e).vertices, vec![qs(&[1, 0, 0])]);
    }

    #[test]
    fn assignments() {
        assert_eq!(rank_assignment_of(&[0.2, 0.5, 0.3]), vec![vec![0, 2, 1]]);
        assert_eq!(rank_assignment_of(&[0.5, 0.5]).len(), 2);
        assert_eq!(
            rank_assignment_of(&[q(1, 6), q(1, 3), q(1, 2)]),
            vec![vec![0, 1, 2]]
        );
        assert_eq!(WeakOrder::of(&[0.2, 0.5, 0.3]).to_string(), "1 < 3 < 2");
    }

    #[test]
    fn mu_generator() {
        assert_eq!(mu_power_exact(3, 0), vec![q(1, 3); 3]);
        assert_eq!(mu_power_exact(2, 1), vec![q(1, 3), q(2, 3)]);
        let f = mu_power_f64(3, 2.5);
        assert!((f.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(f[0] < f[1] && f[1] < f[2]);
    }
}
