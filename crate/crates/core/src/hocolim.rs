//! Diagrams of spaces over finite posets and their homotopy colimits.
//!
//! Only inclusion diagrams are handled: for p ≥ q the space over p is a
//! subcomplex of the space over q. A point t_0x_0 + … + t_mx_m of the
//! homotopy colimit then has x_0 = … = x_m, so the colimit is the regular
//! cell complex whose cells are pairs (chain q_0 < … < q_m, cell σ of
//! D_{q_m}), a simplex times a cell.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;

use crate::cell::{Cell, CellComplex};
use crate::error::{Error, Result};
use crate::homology::{betti, BettiVector, Field};
use crate::poset::FinitePoset;

/// A cell (c, σ) of a homotopy colimit. `chain` lists poset elements from
/// bottom to top and `cell` lives in the space over the top element.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrismCell<C> {
    pub chain: Vec<u32>,
    pub cell: C,
}

impl<C: Cell> Cell for PrismCell<C> {
    fn dim(&self) -> usize {
        self.chain.len() - 1 + self.cell.dim()
    }

    /// ∂(c, σ) = Σ_i (−1)^i (c ∖ q_i, σ) + (−1)^m Σ (c, ∂σ); chain faces are
    /// omitted for one-element chains.
    fn boundary(&self) -> Vec<(Self, i64)> {
        let m = self.chain.len() - 1;
        let mut out = Vec::new();
        if m > 0 {
            for i in 0..=m {
                let mut chain = self.chain.clone();
                chain.remove(i);
                out.push((PrismCell { chain, cell: self.cell.clone() }, if i % 2 == 0 { 1 } else { -1 }));
            }
        }
        let outer = if m.is_multiple_of(2) { 1 } else { -1 };
        for (face, sign) in self.cell.boundary() {
            out.push((PrismCell { chain: self.chain.clone(), cell: face }, outer * sign));
        }
        out
    }
}

pub type PrismCellComplex<C> = CellComplex<PrismCell<C>>;

/// A P-diagram whose maps are inclusions.
#[derive(Clone, Debug)]
pub struct SpaceDiagram<C: Cell> {
    poset: FinitePoset,
    spaces: Vec<CellComplex<C>>,
}

impl<C: Cell> SpaceDiagram<C> {
    /// Checks that D_p ⊆ D_q along every cover q ⋖ p.
    pub fn new(poset: FinitePoset, spaces: Vec<CellComplex<C>>) -> Result<Self> {
        if spaces.len() != poset.len() {
            return Err(Error::domain("one space per poset element is required"));
        }
        for &(lo, hi) in poset.covers() {
            if let Some(c) = spaces[hi].cells().iter().find(|c| !spaces[lo].contains(c)) {
                return Err(Error::domain(format!(
                    "D_{} is not included in D_{}: {c:?}",
                    poset.label(hi),
                    poset.label(lo)
                )));
            }
        }
        Ok(Self { poset, spaces })
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn space(&self, p: usize) -> &CellComplex<C> {
        &self.spaces[p]
    }

    /// D restricted to an induced subposet, with the index map to P.
    pub fn restrict(&self, keep: impl FnMut(usize) -> bool) -> (SpaceDiagram<C>, Vec<usize>) {
        let (sub, map) = self.poset.subposet(keep);
        let spaces = map.iter().map(|&p| self.spaces[p].clone()).collect();
        (SpaceDiagram { poset: sub, spaces }, map)
    }
}

/// The homotopy colimit as a prism cell complex. Elements whose space is
/// empty contribute no cells.
pub fn hocolim<C: Cell>(diagram: &SpaceDiagram<C>) -> Result<PrismCellComplex<C>> {
    let mut cells = BTreeSet::new();
    for top in 0..diagram.poset.len() {
        let space = &diagram.spaces[top];
        if space.is_empty() {
            continue;
        }
        for chain in diagram.poset.chains_ending_at(top) {
            let chain: Vec<u32> = chain.into_iter().map(|x| x as u32).collect();
            for c in space.cells() {
                cells.insert(PrismCell { chain: chain.clone(), cell: c.clone() });
            }
        }
    }
    let complex = CellComplex::from_closed(cells);
    crate::homology::ChainComplexMatrices::from_complex(&complex)?.check_square_zero()?;
    Ok(complex)
}

/// The cells of `h` whose chains lie in the subposet selected by `keep`;
/// this is the homotopy colimit of the restricted diagram.
pub fn sub_hocolim<C: Cell>(h: &PrismCellComplex<C>, keep: impl Fn(usize) -> bool) -> PrismCellComplex<C> {
    h.filter(|cell| cell.chain.iter().all(|&q| keep(q as usize)))
}

/// ⋂ sub_hocolim(h, Q_i) for up-sets Q_i, checked cell for cell against
/// sub_hocolim(h, ⋂ Q_i).
pub fn intersect_subcomplexes<C: Cell>(
    h: &PrismCellComplex<C>,
    poset: &FinitePoset,
    up_sets: &[BTreeSet<usize>],
) -> Result<PrismCellComplex<C>> {
    for q in up_sets {
        for &x in q {
            if poset.upper_covers(x).iter().any(|y| !q.contains(y)) {
                return Err(Error::domain(format!("{} breaks the up-set condition", poset.label(x))));
            }
        }
    }
    let mut parts = up_sets.iter().map(|q| sub_hocolim(h, |x| q.contains(&x)));
    let Some(first) = parts.next() else {
        return Ok(h.clone());
    };
    let result = parts.fold(first, |acc, part| acc.intersection(&part));
    let common: BTreeSet<usize> =
        (0..poset.len()).filter(|x| up_sets.iter().all(|q| q.contains(x))).collect();
    if result != sub_hocolim(h, |x| common.contains(&x)) {
        return Err(Error::invariant("intersection of sub-colimits differs from the sub-colimit of the intersection"));
    }
    Ok(result)
}

/// The intersection diagram of a cover: one element per distinct
/// intersection of a nonempty family of members, ordered so that smaller
/// spaces sit higher. Each element is labelled by the members containing
/// it.
pub fn intersection_diagram<C: Cell>(subcomplexes: &[(String, CellComplex<C>)]) -> Result<SpaceDiagram<C>> {
    let n = subcomplexes.len();
    if n > 20 {
        return Err(Error::input("intersection diagrams support at most 20 subcomplexes"));
    }
    let mut distinct: BTreeMap<BTreeSet<C>, BTreeSet<usize>> = BTreeMap::new();
    for subset in (0..n).powerset().filter(|s| !s.is_empty()) {
        let mut it = subset.iter();
        let mut acc = subcomplexes[*it.next().unwrap()].1.clone();
        for &i in it {
            acc = acc.intersection(&subcomplexes[i].1);
        }
        distinct.entry(acc.into_cells()).or_default().extend(subset);
    }
    // Order by size descending so larger spaces come first.
    let mut elements: Vec<(BTreeSet<C>, BTreeSet<usize>)> = distinct.into_iter().collect();
    elements.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.1.cmp(&b.1)));
    let labels = elements
        .iter()
        .map(|(_, members)| members.iter().map(|&i| subcomplexes[i].0.as_str()).join("∩"))
        .collect();
    let poset = FinitePoset::from_order(labels, |i, j| elements[j].0.is_subset(&elements[i].0))?;
    let spaces = elements.into_iter().map(|(cells, _)| CellComplex::from_closed(cells)).collect();
    SpaceDiagram::new(poset, spaces)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionReport {
    pub space_betti: BettiVector,
    pub hocolim_betti: BettiVector,
    pub diagram_size: usize,
}

impl ProjectionReport {
    pub fn passed(&self) -> bool {
        self.space_betti == self.hocolim_betti
    }
}

/// Compares the Betti numbers of `space` with those of the homotopy colimit
/// of the intersection diagram of a cover of it.
pub fn projection_check<C: Cell>(
    space: &CellComplex<C>,
    cover: &[(String, CellComplex<C>)],
    field: Field,
) -> Result<ProjectionReport> {
    let mut union = CellComplex::default();
    for (_, sub) in cover {
        if !sub.is_subcomplex_of(space) {
            return Err(Error::domain("cover member is not a subcomplex of the space"));
        }
        union = union.union(sub);
    }
    if union != *space {
        return Err(Error::domain("the subcomplexes do not cover the space"));
    }
    let diagram = intersection_diagram(cover)?;
    let h = hocolim(&diagram)?;
    Ok(ProjectionReport {
        space_betti: betti(space, field)?,
        hocolim_betti: betti(&h, field)?,
        diagram_size: diagram.poset().len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::{Simplex, SimplicialComplex};

    fn space(s: &str) -> SimplicialComplex {
        SimplicialComplex::standard(s.parse().unwrap()).unwrap()
    }

    fn arc(vertices: &[u32]) -> CellComplex<Simplex> {
        CellComplex::closure_of(vertices.windows(2).map(|w| Simplex::new(w.iter().copied())))
    }

    #[test]
    fn single_element_diagram_reproduces_the_space() {
        let x = space("cycle:5");
        let p = FinitePoset::from_covers(vec!["p".into()], vec![]).unwrap();
        let d = SpaceDiagram::new(p, vec![x.as_cell_complex().clone()]).unwrap();
        let h = hocolim(&d).unwrap();
        assert_eq!(h.len(), x.simplices().len());
        assert_eq!(betti(&h, Field::Rational).unwrap(), betti(x.as_cell_complex(), Field::Rational).unwrap());
    }

    #[test]
    fn mapping_cylinder_of_vertex_into_edge_is_contractible() {
        let edge = CellComplex::closure_of([Simplex::new([0, 1])]);
        let vertex = CellComplex::closure_of([Simplex::new([0])]);
        let p = FinitePoset::from_covers(vec!["a".into(), "b".into()], vec![(0, 1)]).unwrap();
        let h = hocolim(&SpaceDiagram::new(p, vec![edge, vertex]).unwrap()).unwrap();
        // 3 cells over a, 1 over b, 1 over a<b.
        assert_eq!(h.len(), 5);
        assert_eq!(betti(&h, Field::Rational).unwrap(), BettiVector::zero(Field::Rational));
    }

    #[test]
    fn non_inclusion_diagram_is_rejected() {
        let p = FinitePoset::from_covers(vec!["a".into(), "b".into()], vec![(0, 1)]).unwrap();
        let err = SpaceDiagram::new(p, vec![arc(&[0, 1]), arc(&[2, 3])]).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn sub_hocolim_identity_and_singleton() {
        let p = FinitePoset::from_covers(vec!["a".into(), "b".into()], vec![(0, 1)]).unwrap();
        let d = SpaceDiagram::new(p, vec![arc(&[0, 1, 2]), arc(&[0, 1])]).unwrap();
        let h = hocolim(&d).unwrap();
        assert_eq!(sub_hocolim(&h, |_| true), h);
        let only_b = sub_hocolim(&h, |x| x == 1);
        assert_eq!(only_b.len(), 3);
        let again = intersect_subcomplexes(&h, d.poset(), &[BTreeSet::from([1]), BTreeSet::from([1])]).unwrap();
        assert_eq!(again, only_b);
    }

    #[test]
    fn three_arcs_cover_a_hexagon() {
        let c6 = space("cycle:6");
        let cover = vec![
            ("A".to_string(), arc(&[0, 1, 2])),
            ("B".to_string(), arc(&[2, 3, 4])),
            ("C".to_string(), arc(&[4, 5, 0])),
        ];
        let d = intersection_diagram(&cover).unwrap();
        // three arcs, three single-vertex overlaps, and the empty triple
        // intersection on top.
        assert_eq!(d.poset().len(), 7);
        assert_eq!(d.poset().maximum().map(|m| d.space(m).is_empty()), Some(true));
        let report = projection_check(c6.as_cell_complex(), &cover, Field::Rational).unwrap();
        assert!(report.passed());
        assert_eq!(report.hocolim_betti, BettiVector::sphere(Field::Rational, 1));
    }

    #[test]
    fn two_arcs_cover_a_hexagon() {
        let c6 = space("cycle:6");
        let cover = vec![("A".to_string(), arc(&[0, 1, 2, 3])), ("B".to_string(), arc(&[3, 4, 5, 0]))];
        let report = projection_check(c6.as_cell_complex(), &cover, Field::Gf2).unwrap();
        assert!(report.passed());
        assert_eq!(report.space_betti.nonzero(), vec![(1, 1)]);
    }

    #[test]
    fn hemispheres_cover_the_octahedron() {
        // Vertices 1:0,1:1 | 2:0,2:1 | 3:0,3:1 → ids 0..6; split by the
        // third coordinate.
        let oct = space("points:2").power_join(3);
        let upper = oct.as_cell_complex().filter(|s| !s.contains(5));
        let lower = oct.as_cell_complex().filter(|s| !s.contains(4));
        let cover = vec![("N".to_string(), upper), ("S".to_string(), lower)];
        let report = projection_check(oct.as_cell_complex(), &cover, Field::Rational).unwrap();
        assert!(report.passed());
        assert_eq!(report.space_betti, BettiVector::sphere(Field::Rational, 2));
    }

    #[test]
    fn projection_requires_a_cover() {
        let c6 = space("cycle:6");
        let cover = vec![("A".to_string(), arc(&[0, 1, 2]))];
        assert!(projection_check(c6.as_cell_complex(), &cover, Field::Rational).is_err());
    }
}
