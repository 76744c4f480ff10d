//! Arrangements of joins of a model space X realizing a matroid.
//!
//! For a geometric lattice M of rank r, an ℓ-map and X, the diagram over M
//! has D_p = the join of copies of X in the coordinates ℓ(p) of X^{*r}.
//! Inclusions are literal because ℓ reverses order. Y is the homotopy
//! colimit and A_a the sub-colimit over M_{≥a} for each atom a.
//!
//! Homotopy equivalence with X^{*e} is certified by the surrogate "equal
//! reduced Betti numbers over Q and GF(2), and equal dimension".

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::cell::CellComplex;
use crate::error::{Error, Result};
use crate::hocolim::{hocolim, projection_check, sub_hocolim, PrismCell, PrismCellComplex, ProjectionReport, SpaceDiagram};
use crate::homology::{betti, join_betti, wedge_betti, BettiJson, BettiVector, ChainComplexMatrices, Field};
use crate::matroid::{flat_label, EllMap, GeometricLattice, MatroidJson};
use crate::morse::{check_wedge_hypotheses, joinup_on, WedgeHypothesisEntry};
use crate::simplicial::{ComplexJson, Simplex, SimplicialComplex, StandardSpace};

pub const SURROGATE: &str = "equal reduced Betti numbers over Q and GF(2) and equal dimension";

/// Largest atom count for which all atom subsets are enumerated.
pub const MAX_ATOMS: usize = 12;

#[derive(Clone, Debug)]
pub struct Arrangement {
    matroid: GeometricLattice,
    space: SimplicialComplex,
    ell: EllMap,
    diagram: SpaceDiagram<Simplex>,
    y: PrismCellComplex<Simplex>,
    subcomplexes: Vec<PrismCellComplex<Simplex>>,
}

fn build_diagram(m: &GeometricLattice, ell: &EllMap, x: &SimplicialComplex) -> Result<SpaceDiagram<Simplex>> {
    ell.validate(m)?;
    if x.is_trivial() {
        return Err(Error::domain("the model space must be nonempty"));
    }
    let nv = x.num_vertices() as u32;
    let ambient = x.power_join(m.rank());
    let spaces = (0..m.len())
        .map(|p| {
            let coords = ell.get(p);
            ambient.as_cell_complex().filter(|s| s.vertices().iter().all(|&v| coords.contains(&((v / nv) as usize + 1))))
        })
        .collect();
    SpaceDiagram::new(m.poset().clone(), spaces)
}

/// Builds (Y, {A_a}) from M, ℓ and X.
pub fn build_arrangement(m: &GeometricLattice, ell: &EllMap, x: &SimplicialComplex) -> Result<Arrangement> {
    let diagram = build_diagram(m, ell, x)?;
    let y = hocolim(&diagram)?;
    Ok(Arrangement::assemble(m.clone(), x.clone(), ell.clone(), diagram, y))
}

impl Arrangement {
    fn assemble(
        matroid: GeometricLattice,
        space: SimplicialComplex,
        ell: EllMap,
        diagram: SpaceDiagram<Simplex>,
        y: PrismCellComplex<Simplex>,
    ) -> Self {
        let subcomplexes =
            matroid.atoms().iter().map(|&a| sub_hocolim(&y, |q| matroid.leq(a, q))).collect();
        Self { matroid, space, ell, diagram, y, subcomplexes }
    }

    /// An arrangement whose Y is given cell by cell, as loaded from a file.
    /// The cells are range-checked but not required to be closed;
    /// [`verify_conditions`] reports a closure failure.
    pub fn from_parts(
        matroid: GeometricLattice,
        space: SimplicialComplex,
        ell: EllMap,
        cells: BTreeSet<PrismCell<Simplex>>,
    ) -> Result<Self> {
        let diagram = build_diagram(&matroid, &ell, &space)?;
        let max_vertex = (space.num_vertices() * matroid.rank()) as u32;
        for c in &cells {
            let chain_ok = !c.chain.is_empty()
                && c.chain.iter().all(|&q| (q as usize) < matroid.len())
                && c.chain.windows(2).all(|w| matroid.poset().lt(w[0] as usize, w[1] as usize));
            if !chain_ok {
                return Err(Error::input(format!("cell chain {:?} is not a chain of the matroid", c.chain)));
            }
            if c.cell.is_empty() || c.cell.vertices().iter().any(|&v| v >= max_vertex) {
                return Err(Error::input(format!("cell simplex {:?} is out of range", c.cell.vertices())));
            }
        }
        let y = CellComplex::unchecked(cells);
        Ok(Self::assemble(matroid, space, ell, diagram, y))
    }

    pub fn matroid(&self) -> &GeometricLattice {
        &self.matroid
    }

    pub fn space(&self) -> &SimplicialComplex {
        &self.space
    }

    pub fn ell(&self) -> &EllMap {
        &self.ell
    }

    pub fn diagram(&self) -> &SpaceDiagram<Simplex> {
        &self.diagram
    }

    pub fn y(&self) -> &PrismCellComplex<Simplex> {
        &self.y
    }

    /// A_a for the atom at each position of `matroid().atoms()`.
    pub fn subcomplexes(&self) -> &[PrismCellComplex<Simplex>] {
        &self.subcomplexes
    }

    pub fn rank(&self) -> usize {
        self.matroid.rank()
    }

    /// 1-based join coordinate of an ambient vertex id.
    pub fn coordinate_of(&self, v: u32) -> usize {
        (v / self.space.num_vertices() as u32) as usize + 1
    }

    pub fn to_json(&self) -> ArrangementJson {
        ArrangementJson {
            matroid: self.matroid.to_json(),
            space: self.space.to_json(),
            ell: self.ell.clone(),
            cells: self
                .y
                .cells()
                .iter()
                .map(|c| CellJson { chain: c.chain.clone(), simplex: c.cell.vertices().to_vec(), dim: c.dim_usize() })
                .collect(),
        }
    }

    pub fn from_json(json: &ArrangementJson) -> Result<Self> {
        let matroid = GeometricLattice::from_json(&json.matroid)?;
        let space = SimplicialComplex::from_json(&json.space)?;
        let mut cells = BTreeSet::new();
        for c in &json.cells {
            let cell = PrismCell { chain: c.chain.clone(), cell: Simplex::new(c.simplex.iter().copied()) };
            if cell.cell.vertices().len() != c.simplex.len() || c.chain.is_empty() || cell.dim_usize() != c.dim {
                return Err(Error::input(format!("cell {:?}/{:?} has inconsistent data", c.chain, c.simplex)));
            }
            if !cells.insert(cell) {
                return Err(Error::input(format!("duplicate cell {:?}/{:?}", c.chain, c.simplex)));
            }
        }
        Self::from_parts(matroid, space, json.ell.clone(), cells)
    }
}

trait DimUsize {
    fn dim_usize(&self) -> usize;
}

impl DimUsize for PrismCell<Simplex> {
    fn dim_usize(&self) -> usize {
        self.chain.len() + self.cell.vertices().len() - 2
    }
}

/// `{"matroid":…, "space":…, "ell":…, "cells":[{"chain":[…],"simplex":[…],"dim":k}]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrangementJson {
    pub matroid: MatroidJson,
    pub space: ComplexJson,
    pub ell: EllMap,
    pub cells: Vec<CellJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellJson {
    pub chain: Vec<u32>,
    pub simplex: Vec<u32>,
    pub dim: usize,
}

/// Dimension and Betti numbers of X^{*e} for e = 0..=r, from matrix
/// homology of the explicit joins.
struct Targets {
    dims: Vec<isize>,
    betti: Vec<[BettiVector; 2]>,
}

impl Targets {
    fn new(x: &SimplicialComplex, r: usize) -> Result<Self> {
        let mut dims = Vec::new();
        let mut out = Vec::new();
        for e in 0..=r {
            let xe = x.power_join(e);
            dims.push(xe.dim());
            out.push(betti_pair(xe.as_cell_complex())?);
        }
        Ok(Self { dims, betti: out })
    }
}

fn betti_pair<C: crate::cell::Cell>(c: &CellComplex<C>) -> Result<[BettiVector; 2]> {
    let m = ChainComplexMatrices::from_complex(c)?;
    m.check_square_zero()?;
    Ok([m.betti(Field::Rational), m.betti(Field::Gf2)])
}

/// One "≃ X^{*e}" comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    pub subject: String,
    pub exponent: usize,
    pub cells: usize,
    pub dim: isize,
    pub expected_dim: isize,
    pub betti: Vec<BettiJson>,
    pub expected_betti: Vec<BettiJson>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub condition: String,
    pub passed: bool,
    pub comparisons: Vec<Comparison>,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SoundnessReport {
    pub cells: usize,
    pub closed: bool,
    pub boundary_squares_to_zero: bool,
    /// Q and GF(2) Betti numbers agree on every complex examined.
    pub fields_agree: bool,
    pub detail: Option<String>,
}

impl SoundnessReport {
    pub fn passed(&self) -> bool {
        self.closed && self.boundary_squares_to_zero && self.fields_agree
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecoveryReport {
    pub passed: bool,
    pub flats: usize,
    pub rank: Option<usize>,
    /// Pairs (recovered flat, flat of M) of an order isomorphism.
    pub isomorphism: Option<Vec<(String, String)>>,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnionReport {
    pub passed: bool,
    pub cells: usize,
    pub computed: Vec<BettiJson>,
    pub predicted: Vec<BettiJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeActionReport {
    pub passed: bool,
    pub generator: Vec<u32>,
    pub order: usize,
    pub subcomplexes_checked: usize,
    pub fixed_cells: Vec<String>,
    pub not_invariant: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrangementReport {
    pub surrogate: String,
    pub rank: usize,
    pub atoms: usize,
    pub soundness: SoundnessReport,
    pub conditions: Vec<ConditionReport>,
    pub recovery: Option<RecoveryReport>,
    pub union: Option<UnionReport>,
    pub free_action: Option<FreeActionReport>,
    pub passed: bool,
}

impl ArrangementReport {
    fn finish(mut self) -> Self {
        self.passed = self.soundness.passed()
            && !self.conditions.is_empty()
            && self.conditions.iter().all(|c| c.passed)
            && self.recovery.as_ref().is_some_and(|r| r.passed)
            && self.union.as_ref().is_some_and(|u| u.passed)
            && self.free_action.as_ref().is_none_or(|f| f.passed);
        self
    }
}

fn json_pair(b: &[BettiVector; 2]) -> Vec<BettiJson> {
    b.iter().map(BettiVector::to_json).collect()
}

struct Checker<'a> {
    targets: &'a Targets,
    fields_agree: bool,
}

impl Checker<'_> {
    fn compare(&mut self, subject: String, c: &PrismCellComplex<Simplex>, e: usize) -> Result<Comparison> {
        let b = betti_pair(c)?;
        if b[0].values() != b[1].values() {
            self.fields_agree = false;
        }
        let expected = &self.targets.betti[e];
        let dim = c.dim();
        let expected_dim = self.targets.dims[e];
        Ok(Comparison {
            subject,
            exponent: e,
            cells: c.len(),
            dim,
            expected_dim,
            passed: dim == expected_dim && b == *expected,
            betti: json_pair(&b),
            expected_betti: json_pair(expected),
        })
    }
}

fn condition(name: &str, comparisons: Vec<Comparison>, failures: Vec<String>) -> ConditionReport {
    let passed = failures.is_empty() && comparisons.iter().all(|c| c.passed);
    ConditionReport { condition: name.to_string(), passed, comparisons, failures }
}

/// ⋂_{a∈S} A_a for every subset S of atoms, indexed by bitmask; the empty
/// subset gives Y.
pub fn subset_intersections(arr: &Arrangement) -> Result<Vec<PrismCellComplex<Simplex>>> {
    let k = arr.subcomplexes.len();
    if k > MAX_ATOMS {
        return Err(Error::domain(format!("{k} atoms exceed the subset enumeration limit of {MAX_ATOMS}")));
    }
    let mut out: Vec<PrismCellComplex<Simplex>> = Vec::with_capacity(1 << k);
    out.push(arr.y.clone());
    for mask in 1usize..1 << k {
        let low = mask.trailing_zeros() as usize;
        let next = out[mask & (mask - 1)].intersection(&arr.subcomplexes[low]);
        out.push(next);
    }
    Ok(out)
}

fn mask_atoms(mask: usize, k: usize) -> BTreeSet<usize> {
    (0..k).filter(|i| mask >> i & 1 == 1).collect()
}

fn atom_set_label(m: &GeometricLattice, set: &BTreeSet<usize>) -> String {
    format!("{{{}}}", set.iter().map(|&i| m.atom_name(i)).join(","))
}

fn soundness(arr: &Arrangement) -> SoundnessReport {
    let mut report = SoundnessReport {
        cells: arr.y.len(),
        closed: true,
        boundary_squares_to_zero: true,
        fields_agree: true,
        detail: None,
    };
    if let Some((cell, face)) = arr.y.first_closure_violation() {
        report.closed = false;
        report.boundary_squares_to_zero = false;
        report.detail = Some(format!(
            "face (chain {:?}, simplex {:?}) of (chain {:?}, simplex {:?}) is missing",
            face.chain,
            face.cell.vertices(),
            cell.chain,
            cell.cell.vertices()
        ));
        return report;
    }
    if let Err(e) = ChainComplexMatrices::from_complex(&arr.y).and_then(|m| m.check_square_zero()) {
        report.boundary_squares_to_zero = false;
        report.detail = Some(e.to_string());
    }
    report
}

/// Checks the arrangement conditions (Y, each A_a, every intersection and
/// every pair (A, B) with A ⊉ B against the matching powers of X),
/// recovers the flats, compares the union with the predicted wedge and,
/// given a generator, checks the free action.
pub fn verify_conditions(arr: &Arrangement, generator: Option<&[u32]>) -> Result<ArrangementReport> {
    let m = &arr.matroid;
    let r = m.rank();
    let k = m.atoms().len();
    let mut report = ArrangementReport {
        surrogate: SURROGATE.to_string(),
        rank: r,
        atoms: k,
        soundness: soundness(arr),
        conditions: Vec::new(),
        recovery: None,
        union: None,
        free_action: None,
        passed: false,
    };
    if !report.soundness.closed || !report.soundness.boundary_squares_to_zero {
        return Ok(report.finish());
    }

    let targets = Targets::new(&arr.space, r)?;
    let mut checker = Checker { targets: &targets, fields_agree: true };

    let c1 = checker.compare("Y".into(), &arr.y, r)?;
    report.conditions.push(condition("1: Y ≃ X^{*d}", vec![c1], vec![]));

    let c2 = arr
        .subcomplexes
        .iter()
        .enumerate()
        .map(|(i, a)| checker.compare(format!("A_{}", m.atom_name(i)), a, r - 1))
        .collect::<Result<Vec<_>>>()?;
    report.conditions.push(condition("2: A ≃ X^{*(d-1)}", c2, vec![]));

    // Condition 3: intersections depend only on the join of the subset.
    let inter = subset_intersections(arr)?;
    let mut by_join: BTreeMap<usize, usize> = BTreeMap::new();
    let mut failures = Vec::new();
    for mask in 1usize..1 << k {
        let p = m.join_of_atoms(&mask_atoms(mask, k));
        match by_join.get(&p) {
            Some(&rep) if inter[rep] != inter[mask] => failures.push(format!(
                "subsets {} and {} have join {} but different intersections",
                atom_set_label(m, &mask_atoms(rep, k)),
                atom_set_label(m, &mask_atoms(mask, k)),
                flat_label(m.flat(p))
            )),
            Some(_) => {}
            None => {
                by_join.insert(p, mask);
                if inter[mask] != sub_hocolim(&arr.y, |q| m.leq(p, q)) {
                    failures.push(format!(
                        "intersection over {} differs from the sub-colimit over M_≥{}",
                        atom_set_label(m, &mask_atoms(mask, k)),
                        flat_label(m.flat(p))
                    ));
                }
            }
        }
    }
    let mut c3 = Vec::new();
    for (&p, &mask) in &by_join {
        let subject = format!("∩{} (join {})", atom_set_label(m, &mask_atoms(mask, k)), flat_label(m.flat(p)));
        c3.push(checker.compare(subject, &inter[mask], r - m.rank_of(p))?);
    }
    report.conditions.push(condition("3: ∩S ≃ X^{*(d-rank ∨S)}", c3, failures));

    // Condition 5: A ∩ B for every intersection B and atom complex A ⊉ B.
    let mut c5 = Vec::new();
    let mut failures = Vec::new();
    for (&p, &mask) in &by_join {
        let b = &inter[mask];
        let e = r - m.rank_of(p);
        for (i, a) in arr.subcomplexes.iter().enumerate() {
            let contains = b.is_subcomplex_of(a);
            let below = m.leq(m.atoms()[i], p);
            if contains != (below || b.is_empty()) {
                failures.push(format!(
                    "A_{} ⊇ B_{} is {contains} but the atom is {}below the join",
                    m.atom_name(i),
                    flat_label(m.flat(p)),
                    if below { "" } else { "not " }
                ));
            }
            if contains {
                continue;
            }
            if e == 0 {
                failures.push(format!("B_{} is empty but not contained in A_{}", flat_label(m.flat(p)), m.atom_name(i)));
                continue;
            }
            let subject = format!("A_{} ∩ B_{}", m.atom_name(i), flat_label(m.flat(p)));
            c5.push(checker.compare(subject, &a.intersection(b), e - 1)?);
        }
    }
    report.conditions.push(condition("5: A ∩ B ≃ X^{*(e-1)} for A ⊉ B", c5, failures));

    report.recovery = Some(recovery_report(arr, &inter));

    let union = union_complex(arr)?;
    let computed = betti_pair(&union)?;
    if computed[0].values() != computed[1].values() {
        checker.fields_agree = false;
    }
    let predicted = [predict_union_betti(m, &arr.space, Field::Rational)?, predict_union_betti(m, &arr.space, Field::Gf2)?];
    report.union = Some(UnionReport {
        passed: computed == predicted,
        cells: union.len(),
        computed: json_pair(&computed),
        predicted: json_pair(&predicted),
    });

    if let Some(g) = generator {
        report.free_action = Some(check_free_action(arr, g)?);
    }
    report.soundness.fields_agree = checker.fields_agree;
    Ok(report.finish())
}

/// The lattice recovered from the arrangement, with an isomorphism to M.
#[derive(Clone, Debug)]
pub struct RecoveredFlats {
    /// Flats as sets of atom positions.
    pub lattice: GeometricLattice,
    /// Image in M of each recovered flat, when an isomorphism exists.
    pub isomorphism: Option<Vec<usize>>,
}

/// Groups atom subsets by their intersection: the closure of S is the set
/// of atoms whose complex contains ⋂_{a∈S} A_a. The closures, ordered by
/// inclusion, must form a geometric lattice isomorphic to M.
pub fn recover_flats(arr: &Arrangement) -> Result<RecoveredFlats> {
    let inter = subset_intersections(arr)?;
    recover_from(arr, &inter)
}

fn recover_from(arr: &Arrangement, inter: &[PrismCellComplex<Simplex>]) -> Result<RecoveredFlats> {
    let k = arr.subcomplexes.len();
    let flats: BTreeSet<BTreeSet<u32>> = inter
        .iter()
        .map(|b| (0..k).filter(|&i| b.is_subcomplex_of(&arr.subcomplexes[i])).map(|i| i as u32).collect())
        .collect();
    let lattice = GeometricLattice::from_flats(0..k as u32, flats)?;
    let isomorphism = lattice.poset().find_isomorphism(arr.matroid.poset());
    Ok(RecoveredFlats { lattice, isomorphism })
}

fn recovery_report(arr: &Arrangement, inter: &[PrismCellComplex<Simplex>]) -> RecoveryReport {
    match recover_from(arr, inter) {
        Ok(rec) => {
            let m = &arr.matroid;
            let label = |f: &BTreeSet<u32>| format!("{{{}}}", f.iter().map(|&i| m.atom_name(i as usize)).join(","));
            let isomorphism = rec.isomorphism.as_ref().map(|iso| {
                iso.iter()
                    .enumerate()
                    .map(|(i, &j)| (label(rec.lattice.flat(i)), flat_label(m.flat(j))))
                    .collect()
            });
            RecoveryReport {
                passed: isomorphism.is_some(),
                flats: rec.lattice.len(),
                rank: Some(rec.lattice.rank()),
                detail: isomorphism.is_none().then(|| "no isomorphism to the input lattice".to_string()),
                isomorphism,
            }
        }
        Err(e) => RecoveryReport { passed: false, flats: 0, rank: None, isomorphism: None, detail: Some(e.to_string()) },
    }
}

/// Betti numbers of ⋁_{p ≠ 0̂} X^{*(r − rank p)} ∗ ⋁^{|μ(0̂,p)|} S^{rank p − 2},
/// from the Betti numbers of X alone.
pub fn predict_union_betti(m: &GeometricLattice, x: &SimplicialComplex, field: Field) -> Result<BettiVector> {
    let bx = betti(x.as_cell_complex(), field)?;
    let r = m.rank();
    let mut powers = vec![BettiVector::empty_space(field)];
    for _ in 0..r {
        let next = join_betti(powers.last().unwrap(), &bx)?;
        powers.push(next);
    }
    let mu = m.poset().mobius_from(m.bottom());
    let mut parts = Vec::new();
    for p in 0..m.len() {
        if p == m.bottom() {
            continue;
        }
        let rank = m.rank_of(p) as isize;
        let spheres = BettiVector::wedge_of_spheres(field, rank - 2, mu[&p].unsigned_abs());
        parts.push(join_betti(&powers[r - m.rank_of(p)], &spheres)?);
    }
    wedge_betti(&parts, field)
}

/// ⋃ A_a, the sub-colimit over M_{>0̂}, checked against the cellwise union.
pub fn union_complex(arr: &Arrangement) -> Result<PrismCellComplex<Simplex>> {
    let bottom = arr.matroid.bottom();
    let union = sub_hocolim(&arr.y, |q| q != bottom);
    let cellwise = arr.subcomplexes.iter().fold(CellComplex::default(), |acc, a| acc.union(a));
    if union != cellwise {
        return Err(Error::invariant("the union of the atom complexes differs from the sub-colimit over M_>0"));
    }
    Ok(union)
}

pub fn union_betti(arr: &Arrangement, field: Field) -> Result<BettiVector> {
    betti(&union_complex(arr)?, field)
}

/// Projection check for the cover of ⋃ A_a by the atom complexes.
pub fn cover_projection(arr: &Arrangement, field: Field) -> Result<ProjectionReport> {
    let union = union_complex(arr)?;
    let cover: Vec<(String, PrismCellComplex<Simplex>)> = arr
        .subcomplexes
        .iter()
        .enumerate()
        .map(|(i, a)| (format!("A_{}", arr.matroid.atom_name(i)), a.clone()))
        .collect();
    projection_check(&union, &cover, field)
}

fn permutation_order(perm: &[u32]) -> usize {
    let mut seen = vec![false; perm.len()];
    let mut order = 1usize;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x] as usize;
            len += 1;
        }
        order = num_integer::lcm(order, len);
    }
    order
}

fn compose(a: &[u32], b: &[u32]) -> Vec<u32> {
    b.iter().map(|&v| a[v as usize]).collect()
}

/// A generator of a free cyclic action on a standard space: the cyclic
/// shift on points, the half turn (or a single step for odd length) on a
/// cycle, the cyclic shift on a sphere when it acts freely.
pub fn standard_generator(space: StandardSpace) -> Option<Vec<u32>> {
    let shift = |n: usize, by: usize| (0..n).map(|v| ((v + by) % n) as u32).collect::<Vec<_>>();
    let g = match space {
        StandardSpace::Points(k) if k >= 2 => shift(k, 1),
        StandardSpace::Cycle(k) if k >= 3 => shift(k, if k % 2 == 0 { k / 2 } else { 1 }),
        StandardSpace::Sphere(d) => shift(d + 2, 1),
        _ => return None,
    };
    let x = SimplicialComplex::standard(space).ok()?;
    free_generator_check(&x, &g).ok().map(|_| g)
}

fn free_generator_check(x: &SimplicialComplex, gamma: &[u32]) -> Result<usize> {
    if !x.is_automorphism(gamma) {
        return Err(Error::domain("the generator is not a simplicial automorphism of X"));
    }
    let order = permutation_order(gamma);
    let mut power = gamma.to_vec();
    for j in 1..order {
        if let Some(s) = x.simplices().iter().find(|s| s.map(|v| power[v as usize]) == **s) {
            return Err(Error::domain(format!("γ^{j} fixes the simplex {}", x.simplex_label(s))));
        }
        power = compose(gamma, &power);
    }
    Ok(order)
}

/// Extends γ coordinatewise to X^{*r} and to the cells of Y (chains fixed)
/// and checks that every nontrivial power maps Y and each intersection of
/// atom complexes onto itself without fixing a cell.
pub fn check_free_action(arr: &Arrangement, gamma: &[u32]) -> Result<FreeActionReport> {
    let order = free_generator_check(&arr.space, gamma)?;
    let nv = arr.space.num_vertices() as u32;
    let k = arr.subcomplexes.len();
    let inter = subset_intersections(arr)?;
    let mut distinct: BTreeMap<usize, usize> = BTreeMap::new();
    for mask in 1usize..1 << k {
        distinct.entry(arr.matroid.join_of_atoms(&mask_atoms(mask, k))).or_insert(mask);
    }
    let mut fixed_cells = Vec::new();
    let mut not_invariant = Vec::new();
    let mut power = gamma.to_vec();
    for j in 1..order {
        let ext = |v: u32| (v / nv) * nv + power[(v % nv) as usize];
        let image = |c: &PrismCell<Simplex>| PrismCell { chain: c.chain.clone(), cell: c.cell.map(ext) };
        for c in arr.y.cells() {
            let g = image(c);
            if g == *c {
                fixed_cells.push(format!("γ^{j} fixes (chain {:?}, simplex {:?})", c.chain, c.cell.vertices()));
            }
            if !arr.y.contains(&g) {
                not_invariant.push(format!("γ^{j} maps a cell of Y outside Y"));
            }
        }
        for (&p, &mask) in &distinct {
            if inter[mask].cells().iter().any(|c| !inter[mask].contains(&image(c))) {
                not_invariant.push(format!("γ^{j} does not preserve the intersection over {}", flat_label(arr.matroid.flat(p))));
            }
        }
        power = compose(gamma, &power);
    }
    fixed_cells.truncate(20);
    not_invariant.dedup();
    not_invariant.truncate(20);
    Ok(FreeActionReport {
        passed: fixed_cells.is_empty() && not_invariant.is_empty(),
        generator: gamma.to_vec(),
        order,
        subcomplexes_checked: distinct.len() + 1,
        fixed_cells,
        not_invariant,
    })
}

/// Join matchings on the diagram restricted to M_{>0̂}: for each q ≠ 1̂,
/// the matching of D_q as the join over the coordinates ℓ(q), with the
/// first vertex of X in each coordinate as basepoint. Returns the data and
/// the restricted diagram.
#[allow(clippy::type_complexity)]
pub fn joinup_data(
    arr: &Arrangement,
) -> Result<(SpaceDiagram<Simplex>, BTreeMap<usize, (Vec<(Simplex, Simplex)>, Simplex)>)> {
    let m = &arr.matroid;
    let (sub, map) = arr.diagram.restrict(|p| p != m.bottom());
    let nv = arr.space.num_vertices() as u32;
    let mut data = BTreeMap::new();
    for (idx, &q) in map.iter().enumerate() {
        if q == m.top() {
            continue;
        }
        let coords: Vec<usize> = arr.ell.get(q).iter().copied().collect();
        let factor_of = |v: u32| coords.iter().position(|&c| c == (v / nv) as usize + 1).unwrap_or(usize::MAX);
        let basepoints: Vec<u32> = coords.iter().map(|&c| (c as u32 - 1) * nv).collect();
        let j = joinup_on(sub.space(idx), &factor_of, &basepoints)?;
        data.insert(idx, (j.z_arrows, j.critical_vertex));
    }
    Ok((sub, data))
}

/// The wedge-hypothesis check on the diagram over M_{>0̂} with join
/// matchings.
pub fn wedge_hypotheses(arr: &Arrangement) -> Result<Vec<WedgeHypothesisEntry>> {
    let (sub, data) = joinup_data(arr)?;
    Ok(check_wedge_hypotheses(&sub, &data))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::ell_default;

    fn space(s: &str) -> SimplicialComplex {
        SimplicialComplex::standard(s.parse().unwrap()).unwrap()
    }

    fn build(m: &GeometricLattice, x: &str) -> Arrangement {
        build_arrangement(m, &ell_default(m), &space(x)).unwrap()
    }

    #[test]
    fn b1_gives_s0_and_an_empty_atom_complex() {
        let m = GeometricLattice::boolean(1).unwrap();
        let arr = build(&m, "points:2");
        assert_eq!(arr.y().len(), 2);
        assert!(arr.subcomplexes()[0].is_empty());
        assert_eq!(betti(arr.y(), Field::Rational).unwrap(), BettiVector::sphere(Field::Rational, 0));
        let report = verify_conditions(&arr, None).unwrap();
        assert!(report.passed, "{report:#?}");
    }

    #[test]
    fn u23_on_s0() {
        let m = GeometricLattice::uniform(2, 3).unwrap();
        let arr = build(&m, "points:2");
        assert_eq!(betti(arr.y(), Field::Rational).unwrap(), BettiVector::sphere(Field::Rational, 1));
        for a in arr.subcomplexes() {
            assert_eq!(betti(a, Field::Rational).unwrap(), BettiVector::sphere(Field::Rational, 0));
        }
        let report = verify_conditions(&arr, standard_generator(StandardSpace::Points(2)).as_deref()).unwrap();
        assert!(report.passed, "{report:#?}");
        assert_eq!(union_betti(&arr, Field::Rational).unwrap().get(0), 5);
        let rec = recover_flats(&arr).unwrap();
        assert_eq!(rec.lattice.len(), 5);
        assert!(rec.isomorphism.is_some());
    }

    #[test]
    fn predicted_union_values() {
        let f = Field::Rational;
        let x = space("points:2");
        let fano = predict_union_betti(&GeometricLattice::fano(), &x, f).unwrap();
        assert_eq!(fano.nonzero(), vec![(1, 29)]);
        let u23 = predict_union_betti(&GeometricLattice::uniform(2, 3).unwrap(), &x, f).unwrap();
        assert_eq!(u23.nonzero(), vec![(0, 5)]);
        let b2 = predict_union_betti(&GeometricLattice::boolean(2).unwrap(), &x, f).unwrap();
        assert_eq!(b2.nonzero(), vec![(0, 3)]);
        let b1 = predict_union_betti(&GeometricLattice::boolean(1).unwrap(), &x, f).unwrap();
        assert!(b1.is_empty_space());
    }

    #[test]
    fn standard_generators() {
        assert_eq!(standard_generator(StandardSpace::Points(2)), Some(vec![1, 0]));
        assert_eq!(standard_generator(StandardSpace::Cycle(4)), Some(vec![2, 3, 0, 1]));
        assert_eq!(standard_generator(StandardSpace::Points(1)), None);
        assert!(standard_generator(StandardSpace::Sphere(1)).is_some());
        // The shift squared fixes the edge {0,2} of the tetrahedron boundary.
        assert_eq!(standard_generator(StandardSpace::Sphere(2)), None);
    }

    #[test]
    fn generator_fixing_a_simplex_is_rejected() {
        let m = GeometricLattice::uniform(2, 3).unwrap();
        let arr = build(&m, "cycle:4");
        assert!(check_free_action(&arr, &[0, 3, 2, 1]).is_err());
        assert!(check_free_action(&arr, &[1, 0, 2, 3]).is_err());
    }

    #[test]
    fn json_round_trip_and_corruption() {
        let m = GeometricLattice::uniform(2, 3).unwrap();
        let arr = build(&m, "points:2");
        let json = arr.to_json();
        let loaded = Arrangement::from_json(&json).unwrap();
        assert_eq!(loaded.y(), arr.y());
        let a = verify_conditions(&arr, None).unwrap();
        let b = verify_conditions(&loaded, None).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());

        // Removing a vertex breaks closure; removing a top cell breaks Betti.
        let mut broken = json.clone();
        let pos = broken.cells.iter().position(|c| c.dim == 0).unwrap();
        broken.cells.remove(pos);
        let report = verify_conditions(&Arrangement::from_json(&broken).unwrap(), None).unwrap();
        assert!(!report.passed && !report.soundness.closed);
        let mut broken = json;
        let pos = broken.cells.iter().position(|c| c.dim == 1).unwrap();
        broken.cells.remove(pos);
        let report = verify_conditions(&Arrangement::from_json(&broken).unwrap(), None).unwrap();
        assert!(!report.passed && report.soundness.closed);
    }

    #[test]
    fn wedge_hypotheses_on_u23() {
        let m = GeometricLattice::uniform(2, 3).unwrap();
        let arr = build(&m, "points:2");
        let entries = wedge_hypotheses(&arr).unwrap();
        assert_eq!(entries.len(), 3);
        assert!(entries.iter().all(|e| e.passed));
    }

    #[test]
    fn wrong_basepoint_fails_the_wedge_check() {
        let m = GeometricLattice::boolean(3).unwrap();
        let arr = build(&m, "points:2");
        let (sub, mut data) = joinup_data(&arr).unwrap();
        // Move the basepoint of the first atom away from the collapsed part.
        let (&idx, entry) = data.iter_mut().next().unwrap();
        entry.1 = Simplex::new([1]);
        let entries = check_wedge_hypotheses(&sub, &data);
        let bad = entries.iter().find(|e| e.element == sub.poset().label(idx)).unwrap();
        assert!(!bad.passed && bad.witness.is_some());
    }
}
