//! Convex polytopes inside a probability simplex.
//!
//! A [`Polytope`] keeps both representations: the constraint list and the
//! vertex list. Constraints are added one at a time with the double description
//! update, starting from the simplex itself. Vertices carry the set of
//! constraints they make tight; two vertices are adjacent iff no third vertex
//! is tight on every constraint they share.
//!
//! Strict inequalities are stored with their closure. The strict set is
//! nonempty iff the closure is nonempty and each strict constraint has positive
//! slack at some vertex (the vertex barycenter then satisfies all of them).

use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::linalg;
use crate::scalar::{dot, Scalar};

/// Relation of a linear constraint `a·x (rel) b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Rel {
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = "=")]
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint<S> {
    pub a: Vec<S>,
    pub rel: Rel,
    pub b: S,
}

impl<S: Scalar> Constraint<S> {
    pub fn ge(a: Vec<S>, b: S) -> Self {
        Constraint { a, rel: Rel::Ge, b }
    }
    pub fn gt(a: Vec<S>, b: S) -> Self {
        Constraint { a, rel: Rel::Gt, b }
    }
    pub fn eq(a: Vec<S>, b: S) -> Self {
        Constraint { a, rel: Rel::Eq, b }
    }

    /// `a·x - b`.
    pub fn slack(&self, x: &[S]) -> S {
        dot(&self.a, x) - self.b.clone()
    }

    pub fn holds(&self, x: &[S]) -> bool {
        let s = self.slack(x).sign();
        match self.rel {
            Rel::Ge => s != Ordering::Less,
            Rel::Gt => s == Ordering::Greater,
            Rel::Eq => s == Ordering::Equal,
        }
    }

    /// Whether the closed version holds.
    pub fn holds_closed(&self, x: &[S]) -> bool {
        let s = self.slack(x).sign();
        match self.rel {
            Rel::Ge | Rel::Gt => s != Ordering::Less,
            Rel::Eq => s == Ordering::Equal,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Tight(Vec<u64>);

impl Tight {
    fn new() -> Self {
        Tight(Vec::new())
    }
    fn insert(&mut self, i: usize) {
        let w = i / 64;
        if self.0.len() <= w {
            self.0.resize(w + 1, 0);
        }
        self.0[w] |= 1 << (i % 64);
    }
    fn contains(&self, i: usize) -> bool {
        self.0.get(i / 64).is_some_and(|w| w & (1 << (i % 64)) != 0)
    }
    fn and(&self, other: &Tight) -> Tight {
        Tight(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }
    fn subset_of(&self, other: &Tight) -> bool {
        self.0
            .iter()
            .enumerate()
            .all(|(i, w)| w & !other.0.get(i).copied().unwrap_or(0) == 0)
    }
}

/// A polytope in the simplex `{x ∈ R^d : x ≥ 0, Σx = 1}`.
#[derive(Debug, Clone)]
pub struct Polytope<S> {
    d: usize,
    /// User constraints (the simplex constraints are implicit).
    constraints: Vec<Constraint<S>>,
    vertices: Vec<Vec<S>>,
    tight: Vec<Tight>,
    /// Half-space count used for tight-set bookkeeping (equalities count twice).
    halves: usize,
}

impl<S: Scalar> Polytope<S> {
    /// The whole simplex of dimension `d - 1`.
    pub fn simplex(d: usize) -> Self {
        assert!(d >= 1);
        let vertices = (0..d).map(|k| crate::game::pure(d, k)).collect();
        let tight = (0..d)
            .map(|k| {
                let mut t = Tight::new();
                for j in (0..d).filter(|&j| j != k) {
                    t.insert(j);
                }
                t
            })
            .collect();
        Polytope {
            d,
            constraints: Vec::new(),
            vertices,
            tight,
            halves: d,
        }
    }

    pub fn from_constraints(d: usize, cs: impl IntoIterator<Item = Constraint<S>>) -> Self {
        let mut p = Self::simplex(d);
        for c in cs {
            p.add(c);
        }
        p
    }

    pub fn ambient(&self) -> usize {
        self.d
    }
    pub fn constraints(&self) -> &[Constraint<S>] {
        &self.constraints
    }
    /// Vertices of the closure.
    pub fn vertices(&self) -> &[Vec<S>] {
        &self.vertices
    }

    /// Add a constraint. Its closure refines the vertex description; strictness
    /// is remembered for feasibility and membership.
    pub fn add(&mut self, c: Constraint<S>) {
        assert_eq!(c.a.len(), self.d, "constraint dimension mismatch");
        match c.rel {
            Rel::Ge | Rel::Gt => self.cut(&c.a, &c.b),
            Rel::Eq => {
                self.cut(&c.a, &c.b);
                let na: Vec<S> = c.a.iter().map(|v| -v.clone()).collect();
                self.cut(&na, &-c.b.clone());
            }
        }
        self.constraints.push(c);
    }

    fn cut(&mut self, a: &[S], b: &S) {
        let id = self.halves;
        self.halves += 1;
        if self.vertices.is_empty() {
            return;
        }
        let slack: Vec<S> = self.vertices.iter().map(|v| dot(a, v) - b.clone()).collect();
        let sign: Vec<Ordering> = slack.iter().map(Scalar::sign).collect();
        let plus: Vec<usize> = (0..sign.len()).filter(|&i| sign[i] == Ordering::Greater).collect();
        let minus: Vec<usize> = (0..sign.len()).filter(|&i| sign[i] == Ordering::Less).collect();

        if minus.is_empty() {
            for (i, s) in sign.iter().enumerate() {
                if *s == Ordering::Equal {
                    self.tight[i].insert(id);
                }
            }
            return;
        }

        let mut new_v = Vec::new();
        let mut new_t = Vec::new();
        for &u in &plus {
            for &w in &minus {
                let common = self.tight[u].and(&self.tight[w]);
                let adjacent = (0..self.vertices.len())
                    .filter(|&o| o != u && o != w)
                    .all(|o| !common.subset_of(&self.tight[o]));
                if !adjacent {
                    continue;
                }
                let (su, sw) = (slack[u].clone(), slack[w].clone());
                let den = su.clone() - sw.clone();
                let x: Vec<S> = self.vertices[u]
                    .iter()
                    .zip(&self.vertices[w])
                    .map(|(xu, xw)| (su.clone() * xw.clone() - sw.clone() * xu.clone()) / den.clone())
                    .collect();
                let mut t = common;
                t.insert(id);
                new_v.push(x);
                new_t.push(t);
            }
        }
        let mut keep_v = Vec::new();
        let mut keep_t = Vec::new();
        for i in 0..self.vertices.len() {
            match sign[i] {
                Ordering::Greater => {
                    keep_v.push(self.vertices[i].clone());
                    keep_t.push(self.tight[i].clone());
                }
                Ordering::Equal => {
                    let mut t = self.tight[i].clone();
                    t.insert(id);
                    keep_v.push(self.vertices[i].clone());
                    keep_t.push(t);
                }
                Ordering::Less => {}
            }
        }
        keep_v.extend(new_v);
        keep_t.extend(new_t);
        self.vertices = keep_v;
        self.tight = keep_t;
    }

    /// Whether the closure is empty.
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Whether the set itself (with strict constraints) is nonempty.
    pub fn is_feasible(&self) -> bool {
        !self.is_empty()
            && self
                .constraints
                .iter()
                .filter(|c| c.rel == Rel::Gt)
                .all(|c| self.vertices.iter().any(|v| c.slack(v).sign() == Ordering::Greater))
    }

    /// Affine dimension of the closure, `None` when empty.
    pub fn dimension(&self) -> Option<usize> {
        let refs: Vec<&[S]> = self.vertices.iter().map(Vec::as_slice).collect();
        linalg::affine_dim(&refs)
    }

    /// Whether the closure has full dimension `d - 1`.
    pub fn is_full_dimensional(&self) -> bool {
        self.dimension() == Some(self.d - 1)
    }

    /// Average of the vertices; lies in the relative interior of the closure
    /// and satisfies every strict constraint when the set is feasible.
    pub fn interior_point(&self) -> Option<Vec<S>> {
        if self.is_empty() {
            return None;
        }
        let n = S::from_i64(self.vertices.len() as i64);
        Some(
            (0..self.d)
                .map(|c| {
                    self.vertices
                        .iter()
                        .fold(S::zero(), |acc, v| acc + v[c].clone())
                        / n.clone()
                })
                .collect(),
        )
    }

    /// Membership in the set (strict constraints strict).
    pub fn contains(&self, x: &[S]) -> bool {
        in_simplex(x) && self.constraints.iter().all(|c| c.holds(x))
    }

    /// Membership in the closure.
    pub fn contains_closed(&self, x: &[S]) -> bool {
        in_simplex(x) && self.constraints.iter().all(|c| c.holds_closed(x))
    }

    /// Intersection of closures.
    pub fn intersect_closed(&self, other: &Polytope<S>) -> Polytope<S> {
        let mut p = self.closed();
        for c in &other.constraints {
            p.add(closed(c));
        }
        p
    }

    /// Closure as a polytope with only non-strict constraints.
    pub fn closed(&self) -> Polytope<S> {
        let mut p = self.clone();
        for c in &mut p.constraints {
            *c = closed(c);
        }
        p
    }

    /// Measure as a fraction of the simplex volume; zero unless full-dimensional.
    ///
    /// The closure is split into simplices by coning every facet (recursively
    /// triangulated) from one vertex; each simplex contributes `|det|` in the
    /// coordinates that drop the last component.
    pub fn measure(&self) -> S {
        if !self.is_full_dimensional() {
            return S::zero();
        }
        let dim = self.d - 1;
        if dim == 0 {
            return S::one();
        }
        let all: Vec<usize> = (0..self.vertices.len()).collect();
        let mut total = S::zero();
        for simplex in self.triangulate(&all, dim) {
            let v0 = &self.vertices[simplex[0]];
            let rows: Vec<Vec<S>> = simplex[1..]
                .iter()
                .map(|&i| {
                    (0..dim)
                        .map(|c| self.vertices[i][c].clone() - v0[c].clone())
                        .collect()
                })
                .collect();
            total = total + linalg::det(&rows).abs_val();
        }
        total
    }

    fn triangulate(&self, verts: &[usize], dim: usize) -> Vec<Vec<usize>> {
        if dim == 0 {
            return vec![vec![verts[0]]];
        }
        let apex = verts[0];
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut out = Vec::new();
        for h in 0..self.halves {
            let face: Vec<usize> = verts
                .iter()
                .copied()
                .filter(|&v| self.tight[v].contains(h))
                .collect();
            if face.contains(&apex) || face.len() < dim || !seen.insert(face.clone()) {
                continue;
            }
            let refs: Vec<&[S]> = face.iter().map(|&v| self.vertices[v].as_slice()).collect();
            if linalg::affine_dim(&refs) != Some(dim - 1) {
                continue;
            }
            for mut s in self.triangulate(&face, dim - 1) {
                s.insert(0, apex);
                out.push(s);
            }
        }
        out
    }

    /// Whether the closure lies inside the closure of `other`.
    pub fn subset_of_closed(&self, other: &Polytope<S>) -> bool {
        self.vertices.iter().all(|v| other.contains_closed(v))
    }
}

fn closed<S: Scalar>(c: &Constraint<S>) -> Constraint<S> {
    Constraint {
        a: c.a.clone(),
        rel: if c.rel == Rel::Gt { Rel::Ge } else { c.rel },
        b: c.b.clone(),
    }
}

/// Whether `x` lies in the probability simplex (tie-tolerant in float mode).
pub fn in_simplex<S: Scalar>(x: &[S]) -> bool {
    x.iter().all(|v| v.sign() != Ordering::Less)
        && crate::scalar::sum(x).cmp_tie(&S::one()) == Ordering::Equal
}
