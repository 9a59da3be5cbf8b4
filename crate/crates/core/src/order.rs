//! Finite partial orders stored as a reflexive-transitive closure.

use std::collections::BTreeMap;
use std::fmt;

use crate::{Error, Result};

/// A finite partially ordered set over string identifiers.
///
/// The order is kept as its full closure matrix; [`Poset::covers`] recovers
/// the transitive reduction on demand.
#[derive(Clone, PartialEq, Eq)]
pub struct Poset {
    elements: Vec<String>,
    index: BTreeMap<String, usize>,
    leq: Vec<Vec<bool>>,
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Poset").field("elements", &self.elements).field("covers", &self.covers()).finish()
    }
}

impl Poset {
    /// Builds the reflexive-transitive closure of `pairs` (each `(a, b)` read
    /// as `a <= b`) over `elements`.
    pub fn new<E, P, A, B>(elements: E, pairs: P) -> Result<Self>
    where
        E: IntoIterator,
        E::Item: Into<String>,
        P: IntoIterator<Item = (A, B)>,
        A: AsRef<str>,
        B: AsRef<str>,
    {
        let elements: Vec<String> = elements.into_iter().map(Into::into).collect();
        if elements.is_empty() {
            return Err(Error::Empty { kind: "poset element" });
        }
        let mut index = BTreeMap::new();
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.clone(), i).is_some() {
                return Err(Error::Duplicate { kind: "poset element", id: e.clone() });
            }
        }
        let n = elements.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (a, b) in pairs {
            let i = *index.get(a.as_ref()).ok_or_else(|| Error::unknown("poset element", a.as_ref()))?;
            let j = *index.get(b.as_ref()).ok_or_else(|| Error::unknown("poset element", b.as_ref()))?;
            leq[i][j] = true;
        }
        // Warshall closure.
        for k in 0..n {
            let row_k = leq[k].clone();
            for row in leq.iter_mut() {
                if row[k] {
                    for (cell, &via) in row.iter_mut().zip(&row_k) {
                        *cell |= via;
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if leq[i][j] && leq[j][i] {
                    return Err(Error::Antisymmetry { a: elements[i].clone(), b: elements[j].clone() });
                }
            }
        }
        Ok(Poset { elements, index, leq })
    }

    /// The chain `e0 <= e1 <= ...` in the given order.
    pub fn chain<E>(elements: E) -> Result<Self>
    where
        E: IntoIterator,
        E::Item: Into<String>,
    {
        let elements: Vec<String> = elements.into_iter().map(Into::into).collect();
        let pairs: Vec<(String, String)> = elements.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
        Poset::new(elements, pairs)
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: &str) -> bool {
        self.index.contains_key(x)
    }

    pub fn index_of(&self, x: &str) -> Option<usize> {
        self.index.get(x).copied()
    }

    /// `a <= b`. Unknown elements are never related.
    pub fn leq(&self, a: &str, b: &str) -> bool {
        match (self.index_of(a), self.index_of(b)) {
            (Some(i), Some(j)) => self.leq[i][j],
            _ => false,
        }
    }

    pub(crate) fn leq_idx(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    /// Every related pair `(a, b)` with `a <= b`, reflexive pairs included.
    pub fn pairs(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for (i, a) in self.elements.iter().enumerate() {
            for (j, b) in self.elements.iter().enumerate() {
                if self.leq[i][j] {
                    out.push((a.clone(), b.clone()));
                }
            }
        }
        out
    }

    fn is_cover(&self, i: usize, j: usize) -> bool {
        i != j && self.leq[i][j] && !(0..self.len()).any(|k| k != i && k != j && self.leq[i][k] && self.leq[k][j])
    }

    /// Transitive reduction: pairs `(a, b)` with `a < b` and nothing strictly between.
    pub fn covers(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in 0..self.len() {
                if self.is_cover(i, j) {
                    out.push((self.elements[i].clone(), self.elements[j].clone()));
                }
            }
        }
        out
    }

    /// Elements immediately below `x`.
    pub fn lower_covers(&self, x: &str) -> Vec<&str> {
        let Some(j) = self.index_of(x) else { return Vec::new() };
        (0..self.len()).filter(|&i| self.is_cover(i, j)).map(|i| self.elements[i].as_str()).collect()
    }

    /// Elements immediately above `x`.
    pub fn upper_covers(&self, x: &str) -> Vec<&str> {
        let Some(i) = self.index_of(x) else { return Vec::new() };
        (0..self.len()).filter(|&j| self.is_cover(i, j)).map(|j| self.elements[j].as_str()).collect()
    }

    /// The same elements with the order reversed.
    pub fn opposite(&self) -> Poset {
        let n = self.len();
        let leq = (0..n).map(|i| (0..n).map(|j| self.leq[j][i]).collect()).collect();
        Poset { elements: self.elements.clone(), index: self.index.clone(), leq }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_and_reduction() {
        let p = Poset::chain(["C0", "C1", "C2"]).unwrap();
        assert!(p.leq("C0", "C2"));
        assert!(!p.leq("C2", "C0"));
        assert_eq!(p.pairs().len(), 6);
        assert_eq!(p.covers(), vec![("C0".to_string(), "C1".to_string()), ("C1".to_string(), "C2".to_string())]);
        assert_eq!(p.lower_covers("C2"), vec!["C1"]);
        assert!(p.opposite().leq("C2", "C0"));
    }

    #[test]
    fn rejects_cycles_and_unknowns() {
        assert!(matches!(Poset::new(["A", "B"], [("A", "B"), ("B", "A")]), Err(Error::Antisymmetry { .. })));
        assert!(matches!(Poset::new(["A"], [("A", "Z")]), Err(Error::Unknown { .. })));
        assert!(matches!(Poset::new(["A", "A"], Vec::<(&str, &str)>::new()), Err(Error::Duplicate { .. })));
    }
}
