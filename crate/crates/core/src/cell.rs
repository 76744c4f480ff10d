//! Regular cell complexes described by their cells and signed boundaries.
//!
//! Both simplices and prism cells implement [`Cell`]; every algorithm that
//! only needs incidence data (homology, Hasse diagrams, matchings, homotopy
//! colimits of inclusion diagrams) is generic over it.

use std::collections::BTreeSet;
use std::fmt::Debug;
use std::hash::Hash;

use crate::error::{Error, Result};

/// A cell of a regular cell complex.
///
/// `boundary` lists the codimension-one faces with incidence signs. The
/// empty cell is never listed: the augmentation is handled by the homology
/// engine, so a vertex has an empty boundary here.
pub trait Cell: Clone + Ord + Hash + Debug {
    fn dim(&self) -> usize;
    fn boundary(&self) -> Vec<(Self, i64)>;
}

/// A finite, closed set of cells.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CellComplex<C: Cell> {
    cells: BTreeSet<C>,
}

impl<C: Cell> Default for CellComplex<C> {
    fn default() -> Self {
        Self { cells: BTreeSet::new() }
    }
}

impl<C: Cell> CellComplex<C> {
    /// Builds a complex from a set of cells, checking that it is closed
    /// under taking boundary faces.
    pub fn from_cells(cells: impl IntoIterator<Item = C>) -> Result<Self> {
        let complex = Self { cells: cells.into_iter().collect() };
        if let Some((cell, face)) = complex.first_closure_violation() {
            return Err(Error::input(format!(
                "cell {cell:?} has face {face:?} which is not in the complex"
            )));
        }
        Ok(complex)
    }

    /// Builds a complex from a set assumed closed.
    pub(crate) fn from_closed(cells: BTreeSet<C>) -> Self {
        debug_assert!(Self { cells: cells.clone() }.first_closure_violation().is_none());
        Self { cells }
    }

    /// Wraps a set of cells without any closure check; callers inspect
    /// [`CellComplex::first_closure_violation`] themselves.
    pub(crate) fn unchecked(cells: BTreeSet<C>) -> Self {
        Self { cells }
    }

    /// The downward closure of a set of cells.
    pub fn closure_of(generators: impl IntoIterator<Item = C>) -> Self {
        let mut cells = BTreeSet::new();
        let mut stack: Vec<C> = generators.into_iter().collect();
        while let Some(c) = stack.pop() {
            if cells.contains(&c) {
                continue;
            }
            stack.extend(c.boundary().into_iter().map(|(f, _)| f));
            cells.insert(c);
        }
        Self { cells }
    }

    pub fn first_closure_violation(&self) -> Option<(C, C)> {
        for c in &self.cells {
            for (f, _) in c.boundary() {
                if !self.cells.contains(&f) {
                    return Some((c.clone(), f));
                }
            }
        }
        None
    }

    pub fn cells(&self) -> &BTreeSet<C> {
        &self.cells
    }

    pub fn into_cells(self) -> BTreeSet<C> {
        self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, c: &C) -> bool {
        self.cells.contains(c)
    }

    /// Dimension, with the empty complex at −1.
    pub fn dim(&self) -> isize {
        self.cells.iter().map(|c| c.dim() as isize).max().unwrap_or(-1)
    }

    /// Number of cells per dimension, starting at 0.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; (self.dim() + 1) as usize];
        for c in &self.cells {
            f[c.dim()] += 1;
        }
        f
    }

    /// Σ (−1)^d f_d, the unreduced Euler characteristic.
    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(d, &n)| if d % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }

    pub fn is_subcomplex_of(&self, other: &Self) -> bool {
        self.cells.is_subset(&other.cells)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        Self { cells: self.cells.intersection(&other.cells).cloned().collect() }
    }

    pub fn union(&self, other: &Self) -> Self {
        Self { cells: self.cells.union(&other.cells).cloned().collect() }
    }

    /// The subcomplex of cells satisfying `keep`; `keep` must select a
    /// down-closed set.
    pub fn filter(&self, mut keep: impl FnMut(&C) -> bool) -> Self {
        Self::from_closed(self.cells.iter().filter(|c| keep(c)).cloned().collect())
    }

    /// Cells sorted by dimension, then by their own order.
    pub fn cells_by_dim(&self) -> Vec<Vec<C>> {
        let mut out = vec![Vec::new(); (self.dim() + 1) as usize];
        for c in &self.cells {
            out[c.dim()].push(c.clone());
        }
        out
    }
}
