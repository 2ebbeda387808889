//! Finite groupoids given by explicit composition tables.
//!
//! Arrows compose right-to-left: `compose(a, b)` is defined when
//! `src(a) = tgt(b)` and represents "`b` then `a`". Identifiers are opaque
//! strings compared by value; all internal bookkeeping is index-based.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::report::Violation;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupoidError {
    NotComposable { first: usize, second: usize },
    EmptyObjectSet,
    UnknownId(String),
    MalformedTable(String),
}

impl fmt::Display for GroupoidError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupoidError::NotComposable { first, second } => {
                write!(f, "arrows {first} and {second} are not composable")
            }
            GroupoidError::EmptyObjectSet => write!(f, "a groupoid needs at least one object"),
            GroupoidError::UnknownId(id) => write!(f, "unknown identifier {id:?}"),
            GroupoidError::MalformedTable(msg) => write!(f, "malformed groupoid table: {msg}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupoid {
    objects: Vec<String>,
    arrows: Vec<String>,
    src: Vec<usize>,
    tgt: Vec<usize>,
    comp: BTreeMap<(usize, usize), usize>,
    unit: Vec<usize>,
    inv: Vec<usize>,
}

impl FiniteGroupoid {
    /// Build from raw tables. Only shape errors are rejected here; axiom
    /// violations are data, reported by [`FiniteGroupoid::validate`].
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        objects: Vec<String>,
        arrows: Vec<String>,
        src: Vec<usize>,
        tgt: Vec<usize>,
        comp: BTreeMap<(usize, usize), usize>,
        unit: Vec<usize>,
        inv: Vec<usize>,
    ) -> Result<Self, GroupoidError> {
        if objects.is_empty() {
            return Err(GroupoidError::EmptyObjectSet);
        }
        let n_obj = objects.len();
        let n_arr = arrows.len();
        if src.len() != n_arr || tgt.len() != n_arr || inv.len() != n_arr || unit.len() != n_obj {
            return Err(GroupoidError::MalformedTable("table lengths do not match".to_string()));
        }
        if src.iter().chain(&tgt).any(|&x| x >= n_obj) {
            return Err(GroupoidError::MalformedTable("object index out of range".to_string()));
        }
        if unit.iter().chain(&inv).any(|&a| a >= n_arr) {
            return Err(GroupoidError::MalformedTable("arrow index out of range".to_string()));
        }
        if comp.iter().any(|(&(a, b), &c)| a >= n_arr || b >= n_arr || c >= n_arr) {
            return Err(GroupoidError::MalformedTable("composition index out of range".to_string()));
        }
        Ok(FiniteGroupoid { objects, arrows, src, tgt, comp, unit, inv })
    }

    /// Pair groupoid on `n` objects: one arrow `(a,b)` from `b` to `a` for
    /// every ordered pair, with `(a,b)∘(b,c) = (a,c)`.
    pub fn pair(n: usize) -> Result<Self, GroupoidError> {
        if n == 0 {
            return Err(GroupoidError::EmptyObjectSet);
        }
        let objects: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let mut arrows = Vec::new();
        let mut src = Vec::new();
        let mut tgt = Vec::new();
        let idx = |a: usize, b: usize| a * n + b;
        for a in 0..n {
            for b in 0..n {
                arrows.push(format!("({},{})", a + 1, b + 1));
                tgt.push(a);
                src.push(b);
            }
        }
        let mut comp = BTreeMap::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    comp.insert((idx(a, b), idx(b, c)), idx(a, c));
                }
            }
        }
        let unit: Vec<usize> = (0..n).map(|x| idx(x, x)).collect();
        let inv: Vec<usize> = (0..n * n).map(|ab| idx(ab % n, ab / n)).collect();
        FiniteGroupoid::new(objects, arrows, src, tgt, comp, unit, inv)
    }

    /// Unit groupoid: arrows are the identity at each point.
    pub fn unit_groupoid(points: Vec<String>) -> Result<Self, GroupoidError> {
        let n = points.len();
        if n == 0 {
            return Err(GroupoidError::EmptyObjectSet);
        }
        let arrows = points.clone();
        let src: Vec<usize> = (0..n).collect();
        let tgt = src.clone();
        let comp: BTreeMap<(usize, usize), usize> = (0..n).map(|x| ((x, x), x)).collect();
        let unit: Vec<usize> = (0..n).collect();
        let inv: Vec<usize> = (0..n).collect();
        FiniteGroupoid::new(points, arrows, src, tgt, comp, unit, inv)
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn object_id(&self, x: usize) -> &str {
        &self.objects[x]
    }

    pub fn arrow_id(&self, a: usize) -> &str {
        &self.arrows[a]
    }

    pub fn object_index(&self, id: &str) -> Result<usize, GroupoidError> {
        self.objects.iter().position(|o| o == id).ok_or_else(|| GroupoidError::UnknownId(id.to_string()))
    }

    pub fn arrow_index(&self, id: &str) -> Result<usize, GroupoidError> {
        self.arrows.iter().position(|a| a == id).ok_or_else(|| GroupoidError::UnknownId(id.to_string()))
    }

    pub fn src(&self, a: usize) -> usize {
        self.src[a]
    }

    pub fn tgt(&self, a: usize) -> usize {
        self.tgt[a]
    }

    pub fn unit_arrow(&self, x: usize) -> usize {
        self.unit[x]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn compose(&self, a: usize, b: usize) -> Result<usize, GroupoidError> {
        self.comp.get(&(a, b)).copied().ok_or(GroupoidError::NotComposable { first: a, second: b })
    }

    pub fn is_composable(&self, a: usize, b: usize) -> bool {
        self.comp.contains_key(&(a, b))
    }

    pub fn is_unit_groupoid(&self) -> bool {
        self.arrows.len() == self.objects.len() && (0..self.objects.len()).all(|x| self.unit[x] == x)
            && (0..self.arrows.len()).all(|a| self.src[a] == self.tgt[a])
    }

    /// All pairs `(a, b)` with `src(a) = tgt(b)`.
    pub fn composable_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.arrow_count() {
            for b in 0..self.arrow_count() {
                if self.src[a] == self.tgt[b] {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// All triples `(a, b, c)` with `src(a) = tgt(b)` and `src(b) = tgt(c)`.
    pub fn composable_triples(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for &(a, b) in &self.composable_pairs() {
            for c in 0..self.arrow_count() {
                if self.src[b] == self.tgt[c] {
                    out.push((a, b, c));
                }
            }
        }
        out
    }

    /// Every violated axiom instance; empty iff this is a groupoid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let loc_a = |a: usize| format!("arrow {}", self.arrows[a]);

        for x in 0..self.object_count() {
            let u = self.unit[x];
            if self.src[u] != x || self.tgt[u] != x {
                out.push(Violation::new(
                    "unit_endpoints",
                    format!("object {}", self.objects[x]),
                    format!("unit arrow {} has src {} tgt {}", self.arrows[u], self.objects[self.src[u]], self.objects[self.tgt[u]]),
                ));
            }
        }

        for (&(a, b), &c) in &self.comp {
            if self.src[a] != self.tgt[b] {
                out.push(Violation::new(
                    "comp_domain",
                    format!("pair ({},{})", self.arrows[a], self.arrows[b]),
                    "composition defined on a non-composable pair".to_string(),
                ));
            }
            if self.src[c] != self.src[b] || self.tgt[c] != self.tgt[a] {
                out.push(Violation::new(
                    "comp_endpoints",
                    format!("pair ({},{})", self.arrows[a], self.arrows[b]),
                    format!("composite {} has wrong endpoints", self.arrows[c]),
                ));
            }
        }

        for (a, b) in self.composable_pairs() {
            if !self.comp.contains_key(&(a, b)) {
                out.push(Violation::new(
                    "comp_total",
                    format!("pair ({},{})", self.arrows[a], self.arrows[b]),
                    "no composite for a composable pair".to_string(),
                ));
            }
        }

        for (a, b, c) in self.composable_triples() {
            let left = self.comp.get(&(a, b)).and_then(|&ab| self.comp.get(&(ab, c)));
            let right = self.comp.get(&(b, c)).and_then(|&bc| self.comp.get(&(a, bc)));
            if let (Some(&l), Some(&r)) = (left, right) {
                if l != r {
                    out.push(Violation::new(
                        "assoc",
                        format!("triple ({},{},{})", self.arrows[a], self.arrows[b], self.arrows[c]),
                        format!("(ab)c = {} but a(bc) = {}", self.arrows[l], self.arrows[r]),
                    ));
                }
            }
        }

        for a in 0..self.arrow_count() {
            let us = self.unit[self.src[a]];
            let ut = self.unit[self.tgt[a]];
            if self.comp.get(&(a, us)) != Some(&a) {
                out.push(Violation::new("unit_right", loc_a(a), "a ∘ 1_src(a) ≠ a"));
            }
            if self.comp.get(&(ut, a)) != Some(&a) {
                out.push(Violation::new("unit_left", loc_a(a), "1_tgt(a) ∘ a ≠ a"));
            }
            let ai = self.inv[a];
            if self.src[ai] != self.tgt[a] || self.tgt[ai] != self.src[a] {
                out.push(Violation::new("inverse_endpoints", loc_a(a), "inverse has wrong endpoints"));
            }
            if self.comp.get(&(a, ai)) != Some(&ut) {
                out.push(Violation::new("inverse_right", loc_a(a), "a ∘ a⁻¹ ≠ 1_tgt(a)"));
            }
            if self.comp.get(&(ai, a)) != Some(&us) {
                out.push(Violation::new("inverse_left", loc_a(a), "a⁻¹ ∘ a ≠ 1_src(a)"));
            }
        }

        out
    }

    /// Same arrows with sources and targets swapped and composition reversed.
    pub fn opposite(&self) -> FiniteGroupoid {
        let comp = self.comp.iter().map(|(&(a, b), &c)| ((b, a), c)).collect();
        FiniteGroupoid {
            objects: self.objects.clone(),
            arrows: self.arrows.clone(),
            src: self.tgt.clone(),
            tgt: self.src.clone(),
            comp,
            unit: self.unit.clone(),
            inv: self.inv.clone(),
        }
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn arrows(&self) -> &[String] {
        &self.arrows
    }

    /// Raw composition table, for serialization.
    pub fn comp_table(&self) -> &BTreeMap<(usize, usize), usize> {
        &self.comp
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn unit_groupoid_on_one_point() {
        let g = FiniteGroupoid::unit_groupoid(vec!["p".to_string()]).unwrap();
        assert_eq!(g.arrow_count(), 1);
        assert!(g.validate().is_empty());
    }

    #[test]
    fn unit_groupoid_composition_only_on_equal_points() {
        let g = FiniteGroupoid::unit_groupoid(vec!["a".to_string(), "b".to_string()]).unwrap();
        assert_eq!(g.arrow_count(), 2);
        assert!(g.compose(0, 0).is_ok());
        assert!(matches!(g.compose(0, 1), Err(GroupoidError::NotComposable { .. })));
        assert!(g.validate().is_empty());
        assert!(g.is_unit_groupoid());
    }

    #[test]
    fn pair_groupoid_small_cases() {
        let g1 = FiniteGroupoid::pair(1).unwrap();
        assert_eq!(g1.arrow_count(), 1);
        assert!(g1.validate().is_empty());

        let g2 = FiniteGroupoid::pair(2).unwrap();
        assert_eq!(g2.arrow_count(), 4);
        let units: Vec<usize> = (0..2).map(|x| g2.unit_arrow(x)).collect();
        assert_eq!(units.len(), 2);
        assert!(g2.validate().is_empty());

        let g3 = FiniteGroupoid::pair(3).unwrap();
        assert_eq!(g3.arrow_count(), 9);
        assert!(g3.validate().is_empty());
    }

    #[test]
    fn pair_groupoid_composition_example() {
        let g = FiniteGroupoid::pair(3).unwrap();
        let a12 = g.arrow_index("(1,2)").unwrap();
        let a23 = g.arrow_index("(2,3)").unwrap();
        let a13 = g.arrow_index("(1,3)").unwrap();
        assert_eq!(g.compose(a12, a23).unwrap(), a13);
        // unit and inverse laws on a sample arrow
        assert_eq!(g.compose(a12, g.unit_arrow(g.src(a12))).unwrap(), a12);
        assert_eq!(g.compose(a12, g.inverse(a12)).unwrap(), g.unit_arrow(g.tgt(a12)));
    }

    #[test]
    fn corrupted_composition_is_reported() {
        let g = FiniteGroupoid::pair(2).unwrap();
        let mut comp = g.comp_table().clone();
        // Redirect (1,2)∘(2,1) from (1,1) to (2,2): breaks endpoints and more.
        let a = g.arrow_index("(1,2)").unwrap();
        let b = g.arrow_index("(2,1)").unwrap();
        let wrong = g.arrow_index("(2,2)").unwrap();
        comp.insert((a, b), wrong);
        let bad = FiniteGroupoid::new(
            g.objects().to_vec(),
            g.arrows().to_vec(),
            (0..4).map(|i| g.src(i)).collect(),
            (0..4).map(|i| g.tgt(i)).collect(),
            comp,
            (0..2).map(|x| g.unit_arrow(x)).collect(),
            (0..4).map(|i| g.inverse(i)).collect(),
        )
        .unwrap();
        let report = bad.validate();
        assert!(!report.is_empty());
        assert!(report.iter().any(|v| v.location.contains("(1,2)") && v.location.contains("(2,1)")));
    }

    #[test]
    fn double_inverse_is_identity() {
        let g = FiniteGroupoid::pair(3).unwrap();
        for a in 0..g.arrow_count() {
            assert_eq!(g.inverse(g.inverse(a)), a);
        }
    }

    #[test]
    fn opposite_is_a_groupoid() {
        let g = FiniteGroupoid::pair(3).unwrap().opposite();
        assert!(g.validate().is_empty());
    }
}
