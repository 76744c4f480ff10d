//! Discrete Morse theory with matchings on Hasse diagrams.
//!
//! A matching is a set of Hasse arrows σ → τ (τ a codimension-one face of
//! σ) with no shared cells. It is acyclic when the Hasse digraph stays
//! acyclic after reversing the matched arrows. This module checks supplied
//! matchings, composes fiberwise matchings along poset maps, and builds the
//! explicit matching on a join X_1 ∗ … ∗ X_n whose matched cells plus one
//! critical vertex form a collapsible subcomplex containing every join with
//! one factor emptied.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::cell::{Cell, CellComplex};
use crate::error::{Error, Result};
use crate::hocolim::SpaceDiagram;
use crate::homology::BettiVector;
use crate::simplicial::{Simplex, SimplicialComplex};

#[derive(Clone, Debug)]
pub struct HasseDiagram<C: Cell> {
    cells: Vec<C>,
    index: HashMap<C, usize>,
    /// `down[σ]` lists the codimension-one faces of σ.
    down: Vec<Vec<usize>>,
}

impl<C: Cell> HasseDiagram<C> {
    pub fn new(complex: &CellComplex<C>) -> Self {
        let cells: Vec<C> = complex.cells_by_dim().into_iter().flatten().collect();
        let index: HashMap<C, usize> = cells.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        let down = cells
            .iter()
            .map(|c| {
                let mut faces: Vec<usize> = c.boundary().into_iter().filter_map(|(f, _)| index.get(&f).copied()).collect();
                faces.sort_unstable();
                faces.dedup();
                faces
            })
            .collect();
        Self { cells, index, down }
    }

    pub fn cells(&self) -> &[C] {
        &self.cells
    }

    pub fn index_of(&self, c: &C) -> Option<usize> {
        self.index.get(c).copied()
    }

    /// All arrows (σ, τ), σ → τ.
    pub fn arrows(&self) -> Vec<(C, C)> {
        self.down
            .iter()
            .enumerate()
            .flat_map(|(s, faces)| faces.iter().map(move |&t| (self.cells[s].clone(), self.cells[t].clone())))
            .collect()
    }

    pub fn num_arrows(&self) -> usize {
        self.down.iter().map(Vec::len).sum()
    }

    pub fn has_arrow(&self, up: usize, down: usize) -> bool {
        self.down[up].binary_search(&down).is_ok()
    }
}

/// Outcome of an acyclicity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatchingCheck<C> {
    /// Acyclic; carries a topological order of the modified digraph.
    Acyclic(Vec<C>),
    /// Two arrows share the given cell.
    NotAMatching(C),
    /// A directed cycle in the modified digraph.
    Cyclic(Vec<C>),
}

impl<C> MatchingCheck<C> {
    pub fn is_acyclic(&self) -> bool {
        matches!(self, MatchingCheck::Acyclic(_))
    }
}

/// Checks that `arrows` is a matching on `hasse` and that reversing it
/// leaves the Hasse digraph acyclic.
pub fn is_acyclic_matching<C: Cell>(hasse: &HasseDiagram<C>, arrows: &[(C, C)]) -> Result<MatchingCheck<C>> {
    let n = hasse.cells.len();
    let mut partner = vec![usize::MAX; n];
    for (up, down) in arrows {
        let (Some(u), Some(d)) = (hasse.index_of(up), hasse.index_of(down)) else {
            return Err(Error::domain(format!("arrow {up:?} → {down:?} references a cell outside the complex")));
        };
        if !hasse.has_arrow(u, d) {
            return Err(Error::domain(format!("{up:?} → {down:?} is not a Hasse arrow")));
        }
        for x in [u, d] {
            if partner[x] != usize::MAX {
                return Ok(MatchingCheck::NotAMatching(hasse.cells[x].clone()));
            }
        }
        partner[u] = d;
        partner[d] = u;
    }

    // Modified digraph: matched arrows point up, all others down.
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (s, faces) in hasse.down.iter().enumerate() {
        for &t in faces {
            if partner[s] == t {
                out[t].push(s);
            } else {
                out[s].push(t);
            }
        }
    }

    // Iterative DFS; colour 1 = on stack, 2 = finished.
    let mut colour = vec![0u8; n];
    let mut parent = vec![usize::MAX; n];
    let mut finished = Vec::with_capacity(n);
    for root in 0..n {
        if colour[root] != 0 {
            continue;
        }
        let mut stack = vec![(root, 0usize)];
        colour[root] = 1;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if *next < out[v].len() {
                let w = out[v][*next];
                *next += 1;
                match colour[w] {
                    0 => {
                        colour[w] = 1;
                        parent[w] = v;
                        stack.push((w, 0));
                    }
                    1 => {
                        let mut cycle = vec![w];
                        let mut x = v;
                        while x != w {
                            cycle.push(x);
                            x = parent[x];
                        }
                        cycle.reverse();
                        cycle.rotate_right(1);
                        return Ok(MatchingCheck::Cyclic(cycle.into_iter().map(|i| hasse.cells[i].clone()).collect()));
                    }
                    _ => {}
                }
            } else {
                colour[v] = 2;
                finished.push(v);
                stack.pop();
            }
        }
    }
    finished.reverse();
    Ok(MatchingCheck::Acyclic(finished.into_iter().map(|i| hasse.cells[i].clone()).collect()))
}

/// A verified acyclic matching with its critical cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcyclicMatching<C> {
    pub arrows: Vec<(C, C)>,
    pub critical: Vec<C>,
}

impl<C: Cell> AcyclicMatching<C> {
    /// Verifies `arrows` on `complex` and derives the critical cells.
    pub fn new(complex: &CellComplex<C>, mut arrows: Vec<(C, C)>) -> Result<Self> {
        let hasse = HasseDiagram::new(complex);
        match is_acyclic_matching(&hasse, &arrows)? {
            MatchingCheck::Acyclic(_) => {}
            MatchingCheck::NotAMatching(c) => return Err(Error::domain(format!("cell {c:?} is matched twice"))),
            MatchingCheck::Cyclic(cycle) => {
                return Err(Error::domain(format!("matching has a cycle through {} cells", cycle.len())))
            }
        }
        arrows.sort();
        let matched = matched_cells(&arrows);
        let critical = hasse.cells.iter().filter(|c| !matched.contains(*c)).cloned().collect();
        Ok(Self { arrows, critical })
    }

    pub fn matched_cells(&self) -> BTreeSet<C> {
        matched_cells(&self.arrows)
    }
}

fn matched_cells<C: Cell>(arrows: &[(C, C)]) -> BTreeSet<C> {
    arrows.iter().flat_map(|(a, b)| [a.clone(), b.clone()]).collect()
}

/// Unions acyclic matchings on the fibers of an order-preserving map from
/// the face poset of `complex` to a poset Q, and re-verifies acyclicity.
///
/// `fiber_of` is the map; `q_leq` is the order on Q; each fiber matching
/// must stay inside its fiber.
pub fn compose_matchings<C: Cell, Q: Ord + Clone + std::fmt::Debug>(
    complex: &CellComplex<C>,
    fiber_of: impl Fn(&C) -> Q,
    q_leq: impl Fn(&Q, &Q) -> bool,
    fiber_matchings: &BTreeMap<Q, Vec<(C, C)>>,
) -> Result<AcyclicMatching<C>> {
    let hasse = HasseDiagram::new(complex);
    let labels: Vec<Q> = hasse.cells.iter().map(&fiber_of).collect();
    for (s, faces) in hasse.down.iter().enumerate() {
        for &t in faces {
            if !q_leq(&labels[t], &labels[s]) {
                return Err(Error::domain(format!(
                    "fiber map is not order-preserving on {:?} → {:?}",
                    hasse.cells[s], hasse.cells[t]
                )));
            }
        }
    }
    let mut all = Vec::new();
    for (q, arrows) in fiber_matchings {
        for (up, down) in arrows {
            if fiber_of(up) != *q || fiber_of(down) != *q {
                return Err(Error::domain(format!("arrow {up:?} → {down:?} leaves fiber {q:?}")));
            }
        }
        // Each fiber matching must be acyclic on its own fiber.
        let fiber = CellComplex::closure_of(hasse.cells.iter().zip(&labels).filter(|(_, l)| *l == q).map(|(c, _)| c.clone()));
        let fiber_hasse = HasseDiagram::new(&fiber);
        let restricted: Vec<(C, C)> = arrows.clone();
        if !is_acyclic_matching(&fiber_hasse, &restricted)?.is_acyclic() {
            return Err(Error::domain(format!("matching on fiber {q:?} is not acyclic")));
        }
        all.extend(arrows.iter().cloned());
    }
    AcyclicMatching::new(complex, all)
        .map_err(|e| Error::invariant(format!("union of fiberwise acyclic matchings failed: {e}")))
}

/// Result of a collapse check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CollapseCheck<C> {
    Collapsible,
    NotAcyclic(Vec<C>),
    Uncovered(C),
    BadBasepoint,
}

impl<C> CollapseCheck<C> {
    pub fn passed(&self) -> bool {
        matches!(self, CollapseCheck::Collapsible)
    }
}

/// True when `arrows` is an acyclic matching on `complex` whose only
/// critical cell is the vertex `v`.
pub fn verify_collapse<C: Cell>(complex: &CellComplex<C>, arrows: &[(C, C)], v: &C) -> CollapseCheck<C> {
    if v.dim() != 0 || !complex.contains(v) {
        return CollapseCheck::BadBasepoint;
    }
    let hasse = HasseDiagram::new(complex);
    match is_acyclic_matching(&hasse, arrows) {
        Ok(MatchingCheck::Acyclic(_)) => {}
        Ok(MatchingCheck::Cyclic(c)) => return CollapseCheck::NotAcyclic(c),
        Ok(MatchingCheck::NotAMatching(c)) => return CollapseCheck::Uncovered(c),
        Err(_) => {
            let bad = arrows.iter().find(|(a, b)| !complex.contains(a) || !complex.contains(b)).unwrap();
            return CollapseCheck::Uncovered(if complex.contains(&bad.0) { bad.1.clone() } else { bad.0.clone() });
        }
    }
    let matched = matched_cells(arrows);
    if matched.contains(v) {
        return CollapseCheck::BadBasepoint;
    }
    match complex.cells().iter().find(|c| *c != v && !matched.contains(*c)) {
        Some(c) => CollapseCheck::Uncovered(c.clone()),
        None => CollapseCheck::Collapsible,
    }
}

/// Critical cells per dimension with the Euler and Morse-inequality checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriticalCensus {
    pub counts: BTreeMap<usize, usize>,
    pub euler_from_cells: i64,
    pub euler_of_complex: i64,
    pub morse_inequalities_hold: bool,
}

impl CriticalCensus {
    pub fn euler_matches(&self) -> bool {
        self.euler_from_cells == self.euler_of_complex
    }
}

/// Counts critical cells and compares against the complex's Euler
/// characteristic and reduced Betti numbers: β̃_d ≤ c_d − [d = 0].
pub fn critical_census<C: Cell>(
    complex: &CellComplex<C>,
    matching: &AcyclicMatching<C>,
    betti: &BettiVector,
) -> CriticalCensus {
    let mut counts = BTreeMap::new();
    for c in &matching.critical {
        *counts.entry(c.dim()).or_insert(0) += 1;
    }
    let euler_from_cells = counts.iter().map(|(&d, &n)| if d % 2 == 0 { n as i64 } else { -(n as i64) }).sum();
    let top = (complex.dim().max(betti.top_degree())).max(0) as usize;
    let morse_inequalities_hold = (0..=top).all(|d| {
        let c = counts.get(&d).copied().unwrap_or(0) as i64 - i64::from(d == 0 && !complex.is_empty());
        c >= 0 && betti.get(d as isize) as i64 <= c
    });
    CriticalCensus { counts, euler_from_cells, euler_of_complex: complex.euler_characteristic(), morse_inequalities_hold }
}

/// The matching on a join built coordinate by coordinate, its critical
/// vertex b and the collapsible subcomplex Z.
#[derive(Clone, Debug)]
pub struct Joinup {
    pub join: CellComplex<Simplex>,
    /// Acyclic matching on the whole join; unmatched cells are b and the
    /// cells with no coordinate in {∅, x_i}.
    pub matching: AcyclicMatching<Simplex>,
    pub critical_vertex: Simplex,
    pub z: CellComplex<Simplex>,
    /// Arrows of `matching` lying in Z.
    pub z_arrows: Vec<(Simplex, Simplex)>,
}

/// Builds the join matching on a complex that is a join of factors.
///
/// `factor_of` assigns each vertex id its factor in `0..n`; `basepoints[i]`
/// is the chosen vertex x_i of factor i. A cell σ = (σ_1, …, σ_n) has
/// g(σ)_i = 0 iff σ_i ∈ {∅, x_i}; on each fiber g^{-1}(s) with s ≠ (1,…,1)
/// cells are paired by toggling x_l in the first coordinate l with s_l = 0.
/// The pair that would involve the empty cell leaves b = (x_1, ∅, …, ∅)
/// unmatched.
pub fn joinup_on(
    join: &CellComplex<Simplex>,
    factor_of: &dyn Fn(u32) -> usize,
    basepoints: &[u32],
) -> Result<Joinup> {
    let n = basepoints.len();
    for (i, &x) in basepoints.iter().enumerate() {
        if factor_of(x) != i || !join.contains(&Simplex::new([x])) {
            return Err(Error::domain(format!("basepoint {x} is not a vertex of factor {i}")));
        }
    }
    let g = |s: &Simplex| -> Vec<bool> {
        let mut parts: Vec<Vec<u32>> = vec![Vec::new(); n];
        for &v in s.vertices() {
            parts[factor_of(v)].push(v);
        }
        parts.iter().zip(basepoints).map(|(p, &x)| !(p.is_empty() || p == &[x])).collect()
    };

    let mut fibers: BTreeMap<Vec<bool>, Vec<(Simplex, Simplex)>> = BTreeMap::new();
    for s in join.cells() {
        let label = g(s);
        let Some(l) = label.iter().position(|&b| !b) else {
            continue;
        };
        let x = basepoints[l];
        if s.contains(x) {
            let lower = Simplex::new(s.vertices().iter().copied().filter(|&v| v != x));
            if !lower.is_empty() {
                fibers.entry(label).or_default().push((s.clone(), lower));
            }
        } else {
            fibers.entry(label).or_default();
        }
    }
    let matching = compose_matchings(join, g, |a: &Vec<bool>, b: &Vec<bool>| a.iter().zip(b).all(|(x, y)| x <= y), &fibers)?;

    let b = Simplex::new([basepoints.first().copied().ok_or_else(|| Error::domain("join of zero factors"))?]);
    let z = join.filter(|s| g(s).iter().any(|&bit| !bit));
    let z_arrows: Vec<(Simplex, Simplex)> = matching.arrows.iter().filter(|(a, _)| z.contains(a)).cloned().collect();
    let mut z_cells = matched_cells(&z_arrows);
    z_cells.insert(b.clone());
    if z_cells != *z.cells() {
        return Err(Error::invariant("matched cells of Z plus b do not form Z"));
    }
    if !verify_collapse(&z, &z_arrows, &b).passed() {
        return Err(Error::invariant("Z is not collapsible under the join matching"));
    }
    for i in 0..n {
        let emptied = join.filter(|s| s.vertices().iter().all(|&v| factor_of(v) != i));
        if !emptied.is_subcomplex_of(&z) {
            return Err(Error::invariant(format!("join with factor {} emptied is not inside Z", i + 1)));
        }
    }
    Ok(Joinup { join: join.clone(), matching, critical_vertex: b, z, z_arrows })
}

/// The join matching on X_1 ∗ … ∗ X_n. Basepoints are vertex indices
/// within each factor, defaulting to 0.
pub fn joinup_matching(factors: &[SimplicialComplex], basepoints: Option<&[u32]>) -> Result<(SimplicialComplex, Joinup)> {
    if factors.is_empty() || factors.iter().any(|f| f.is_trivial()) {
        return Err(Error::domain("every factor must be nonempty"));
    }
    let mut join = factors[0].clone();
    for f in &factors[1..] {
        join = join.join(f);
    }
    let mut offsets = Vec::with_capacity(factors.len());
    let mut acc = 0u32;
    for f in factors {
        offsets.push(acc);
        acc += f.num_vertices() as u32;
    }
    let chosen: Vec<u32> = match basepoints {
        Some(b) if b.len() == factors.len() => b.to_vec(),
        Some(_) => return Err(Error::domain("one basepoint per factor is required")),
        None => vec![0; factors.len()],
    };
    for (i, (&x, f)) in chosen.iter().zip(factors).enumerate() {
        if x as usize >= f.num_vertices() {
            return Err(Error::domain(format!("basepoint {x} is not a vertex of factor {}", i + 1)));
        }
    }
    let global: Vec<u32> = chosen.iter().zip(&offsets).map(|(x, o)| x + o).collect();
    let offsets_ref = offsets.clone();
    let factor_of = move |v: u32| offsets_ref.iter().rposition(|&o| o <= v).unwrap();
    let result = joinup_on(join.as_cell_complex(), &factor_of, &global)?;
    Ok((join, result))
}

/// Per-element outcome of the wedge-hypothesis check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WedgeHypothesisEntry {
    pub element: String,
    pub passed: bool,
    pub witness: Option<String>,
}

/// Checks, for every element q below the maximum of the diagram's poset,
/// that the cells of M_q together with b_q form a collapsible subcomplex of
/// D_q, and that for every p covering q each cell of D_p other than b_q is
/// matched by M_q (so D_p ⊆ Z_q and the map D_p → D_q factors through a
/// contractible subcomplex). The covering direction follows the maps
/// D_p → D_q for p > q.
pub fn check_wedge_hypotheses(
    diagram: &SpaceDiagram<Simplex>,
    data: &BTreeMap<usize, (Vec<(Simplex, Simplex)>, Simplex)>,
) -> Vec<WedgeHypothesisEntry> {
    let poset = diagram.poset();
    let top = poset.maximum();
    let mut out = Vec::new();
    for q in 0..poset.len() {
        if Some(q) == top {
            continue;
        }
        let label = poset.label(q).to_string();
        let fail = |w: String| WedgeHypothesisEntry { element: label.clone(), passed: false, witness: Some(w) };
        let Some((arrows, b)) = data.get(&q) else {
            out.push(fail("no matching supplied".into()));
            continue;
        };
        let mut z_cells = matched_cells(arrows);
        z_cells.insert(b.clone());
        let dq = diagram.space(q);
        if let Some(c) = z_cells.iter().find(|c| !dq.contains(c)) {
            out.push(fail(format!("{c:?} is not a cell of D_q")));
            continue;
        }
        let z = match CellComplex::from_cells(z_cells.clone()) {
            Ok(z) => z,
            Err(e) => {
                out.push(fail(format!("cells of M_q ∪ b_q are not a subcomplex: {e}")));
                continue;
            }
        };
        let collapse = verify_collapse(&z, arrows, b);
        if !collapse.passed() {
            out.push(fail(format!("Z_q is not collapsed by M_q: {collapse:?}")));
            continue;
        }
        let matched = matched_cells(arrows);
        let missing = poset.upper_covers(q).iter().find_map(|&p| {
            diagram.space(p).cells().iter().find(|c| *c != b && !matched.contains(*c)).map(|c| (p, c.clone()))
        });
        match missing {
            Some((p, c)) => out.push(fail(format!("cell {c:?} of D_{} is not matched in M_q", poset.label(p)))),
            None => out.push(WedgeHypothesisEntry { element: label, passed: true, witness: None }),
        }
    }
    out
}
