//! Matroids as geometric lattices of flats.
//!
//! A matroid is given by the family of its flats, each a subset of a ground
//! set, ordered by inclusion. Validation checks the lattice-theoretic
//! axioms and reports every violation with a witness pair.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::rank_mod_p;
use crate::poset::FinitePoset;

pub type Flat = BTreeSet<u32>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Axiom {
    /// Sets must be distinct subsets of the ground set.
    WellFormed,
    Bounded,
    Graded,
    Lattice,
    Atomic,
    Semimodular,
    MeetIsIntersection,
    JoinOfAtomsIsGround,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    pub witness: (String, String),
    pub detail: String,
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} at ({}, {}): {}", self.axiom, self.witness.0, self.witness.1, self.detail)
    }
}

pub fn flat_label(flat: &Flat) -> String {
    format!("{{{}}}", flat.iter().join(","))
}

/// A validated geometric lattice whose elements are flats.
///
/// Elements are ordered by rank and then lexicographically, so index 0 is
/// 0̂ and the last index is 1̂.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometricLattice {
    ground: Vec<u32>,
    flats: Vec<Flat>,
    poset: FinitePoset,
    rank: Vec<usize>,
    atoms: Vec<usize>,
    join: Vec<usize>,
    meet: Vec<usize>,
}

struct Tables {
    join: Vec<usize>,
    meet: Vec<usize>,
}

fn lattice_tables(poset: &FinitePoset, labels: &[String], out: &mut Vec<AxiomViolation>) -> Option<Tables> {
    let n = poset.len();
    let mut join = vec![usize::MAX; n * n];
    let mut meet = vec![usize::MAX; n * n];
    let mut ok = true;
    for p in 0..n {
        for q in p..n {
            let upper: Vec<usize> = (0..n).filter(|&z| poset.leq(p, z) && poset.leq(q, z)).collect();
            let least: Vec<usize> = upper.iter().copied().filter(|&z| upper.iter().all(|&w| poset.leq(z, w))).collect();
            let lower: Vec<usize> = (0..n).filter(|&z| poset.leq(z, p) && poset.leq(z, q)).collect();
            let greatest: Vec<usize> = lower.iter().copied().filter(|&z| lower.iter().all(|&w| poset.leq(w, z))).collect();
            match (least.as_slice(), greatest.as_slice()) {
                ([j], [m]) => {
                    join[p * n + q] = *j;
                    join[q * n + p] = *j;
                    meet[p * n + q] = *m;
                    meet[q * n + p] = *m;
                }
                _ => {
                    ok = false;
                    out.push(AxiomViolation {
                        axiom: Axiom::Lattice,
                        witness: (labels[p].clone(), labels[q].clone()),
                        detail: format!(
                            "{} least upper bounds, {} greatest lower bounds",
                            least.len(),
                            greatest.len()
                        ),
                    });
                }
            }
        }
    }
    ok.then_some(Tables { join, meet })
}

impl GeometricLattice {
    /// Validates a family of flats over `ground` against the geometric
    /// lattice axioms.
    pub fn from_flats(ground: impl IntoIterator<Item = u32>, flats: impl IntoIterator<Item = Flat>) -> Result<Self> {
        let ground: Vec<u32> = ground.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let mut flats: Vec<Flat> = flats.into_iter().collect();
        let mut violations = Vec::new();

        let ground_set: Flat = ground.iter().copied().collect();
        for f in &flats {
            if !f.is_subset(&ground_set) {
                violations.push(AxiomViolation {
                    axiom: Axiom::WellFormed,
                    witness: (flat_label(f), flat_label(&ground_set)),
                    detail: "flat is not a subset of the ground set".into(),
                });
            }
        }
        let before = flats.len();
        flats.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        flats.dedup();
        if flats.len() != before {
            violations.push(AxiomViolation {
                axiom: Axiom::WellFormed,
                witness: ("-".into(), "-".into()),
                detail: "duplicate flats".into(),
            });
        }
        if flats.is_empty() {
            violations.push(AxiomViolation {
                axiom: Axiom::Bounded,
                witness: ("-".into(), "-".into()),
                detail: "no flats given".into(),
            });
        }
        if !violations.is_empty() {
            return Err(Error::NotAMatroid(violations));
        }

        let labels: Vec<String> = flats.iter().map(flat_label).collect();
        let poset = FinitePoset::from_order(labels.clone(), |i, j| flats[i].is_subset(&flats[j]))?;
        let (Some(bottom), Some(top)) = (poset.minimum(), poset.maximum()) else {
            let mins = poset.minimal_elements();
            let maxs = poset.maximal_elements();
            let witness = if mins.len() > 1 { (mins[0], mins[1]) } else { (maxs[0], maxs[1]) };
            return Err(Error::NotAMatroid(vec![AxiomViolation {
                axiom: Axiom::Bounded,
                witness: (labels[witness.0].clone(), labels[witness.1].clone()),
                detail: "no unique minimum or maximum".into(),
            }]));
        };

        let rank = match poset.rank_function() {
            Some(r) => r,
            None => {
                // Report an element whose lower covers disagree on rank.
                let mut depth = vec![0usize; poset.len()];
                let mut witness = (labels[bottom].clone(), labels[top].clone());
                for &x in poset.linear_extension() {
                    let lows = poset.lower_covers(x);
                    if let Some((&a, &b)) = lows.iter().tuple_combinations().find(|(&a, &b)| depth[a] != depth[b]) {
                        witness = (labels[a].clone(), labels[b].clone());
                        break;
                    }
                    depth[x] = lows.iter().map(|&l| depth[l] + 1).max().unwrap_or(0);
                }
                violations.push(AxiomViolation {
                    axiom: Axiom::Graded,
                    witness,
                    detail: "maximal chains have different lengths".into(),
                });
                Vec::new()
            }
        };

        let tables = lattice_tables(&poset, &labels, &mut violations);
        let atoms: Vec<usize> = (0..poset.len()).filter(|&x| poset.lower_covers(x) == [bottom]).collect();

        if let (Some(t), false) = (&tables, rank.is_empty()) {
            let n = poset.len();
            for p in 0..n {
                let below: Vec<usize> = atoms.iter().copied().filter(|&a| poset.leq(a, p)).collect();
                let j = below.iter().fold(bottom, |acc, &a| t.join[acc * n + a]);
                if j != p {
                    violations.push(AxiomViolation {
                        axiom: Axiom::Atomic,
                        witness: (labels[p].clone(), labels[j].clone()),
                        detail: "element is not the join of the atoms below it".into(),
                    });
                }
            }
            for p in 0..n {
                for q in p + 1..n {
                    let (j, m) = (t.join[p * n + q], t.meet[p * n + q]);
                    if rank[p] + rank[q] < rank[j] + rank[m] {
                        violations.push(AxiomViolation {
                            axiom: Axiom::Semimodular,
                            witness: (labels[p].clone(), labels[q].clone()),
                            detail: format!(
                                "rank {} + {} < {} + {}",
                                rank[p], rank[q], rank[m], rank[j]
                            ),
                        });
                    }
                    let inter: Flat = flats[p].intersection(&flats[q]).copied().collect();
                    if flats[m] != inter {
                        violations.push(AxiomViolation {
                            axiom: Axiom::MeetIsIntersection,
                            witness: (labels[p].clone(), labels[q].clone()),
                            detail: format!("meet is {} but intersection is {}", labels[m], flat_label(&inter)),
                        });
                    }
                }
            }
            let all_atoms = atoms.iter().fold(bottom, |acc, &a| t.join[acc * n + a]);
            if flats[all_atoms] != ground_set {
                violations.push(AxiomViolation {
                    axiom: Axiom::JoinOfAtomsIsGround,
                    witness: (labels[all_atoms].clone(), flat_label(&ground_set)),
                    detail: "join of all atoms differs from the ground set".into(),
                });
            }
        }

        if !violations.is_empty() {
            return Err(Error::NotAMatroid(violations));
        }
        let t = tables.expect("lattice tables exist when no violation was found");
        Ok(Self { ground, flats, poset, rank, atoms, join: t.join, meet: t.meet })
    }

    pub fn uniform(r: usize, n: usize) -> Result<Self> {
        if r == 0 || r > n {
            return Err(Error::input(format!("uniform({r},{n}) needs 1 ≤ r ≤ n")));
        }
        let ground: Vec<u32> = (1..=n as u32).collect();
        let mut flats: Vec<Flat> =
            (0..r).flat_map(|k| ground.iter().copied().combinations(k).map(|c| c.into_iter().collect())).collect();
        flats.push(ground.iter().copied().collect());
        Self::from_flats(ground, flats)
    }

    pub fn boolean(n: usize) -> Result<Self> {
        let ground: Vec<u32> = (1..=n as u32).collect();
        let flats: Vec<Flat> = ground.iter().copied().powerset().map(|c| c.into_iter().collect()).collect();
        Self::from_flats(ground, flats)
    }

    /// The lines of PG(2,2) on points 1..7.
    pub const FANO_LINES: [[u32; 3]; 7] =
        [[1, 2, 3], [1, 4, 5], [1, 6, 7], [2, 4, 6], [2, 5, 7], [3, 4, 7], [3, 5, 6]];

    /// The Fano matroid: rank 3 on {1..7} with the seven lines of PG(2,2).
    pub fn fano() -> Self {
        let ground: Vec<u32> = (1..=7).collect();
        let flats = std::iter::once(Flat::new())
            .chain(ground.iter().map(|&x| Flat::from([x])))
            .chain(Self::FANO_LINES.iter().map(|l| l.iter().copied().collect()))
            .chain(std::iter::once(ground.iter().copied().collect()));
        Self::from_flats(ground.clone(), flats).expect("the Fano plane is a matroid")
    }

    /// The column matroid of a matrix over GF(p); `columns[j]` is column j+1.
    pub fn from_matrix_gfp(columns: &[Vec<u64>], p: u64) -> Result<Self> {
        if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p.is_multiple_of(d)) {
            return Err(Error::input(format!("{p} is not prime")));
        }
        let n = columns.len();
        if n > 16 {
            return Err(Error::input("at most 16 columns are supported"));
        }
        if let Some(len) = columns.first().map(Vec::len) {
            if columns.iter().any(|c| c.len() != len) {
                return Err(Error::input("columns have different lengths"));
            }
        }
        if let Some(j) = columns.iter().position(|c| c.iter().all(|x| x % p == 0)) {
            return Err(Error::input(format!("column {} is zero (a loop)", j + 1)));
        }
        let rank_of = |set: &[usize]| {
            let rows: Vec<Vec<u64>> = set.iter().map(|&j| columns[j].clone()).collect();
            rank_mod_p(&rows, p)
        };
        let mut flats: BTreeSet<Flat> = BTreeSet::new();
        for subset in (0..n).powerset() {
            let r = rank_of(&subset);
            let closure: Flat = (0..n)
                .filter(|j| {
                    subset.contains(j) || {
                        let mut s = subset.clone();
                        s.push(*j);
                        rank_of(&s) == r
                    }
                })
                .map(|j| j as u32 + 1)
                .collect();
            flats.insert(closure);
        }
        Self::from_flats(1..=n as u32, flats)
    }

    pub fn from_json(json: &MatroidJson) -> Result<Self> {
        match json {
            MatroidJson::Flats { ground, flats } => {
                Self::from_flats(ground.iter().copied(), flats.iter().map(|f| f.iter().copied().collect()))
            }
            MatroidJson::Builtin { builtin } => match builtin.as_str() {
                "fano" => Ok(Self::fano()),
                other => Err(Error::input(format!("unknown builtin matroid {other:?}"))),
            },
            MatroidJson::Uniform { uniform } => Self::uniform(uniform.r, uniform.n),
            MatroidJson::Boolean { boolean } => Self::boolean(boolean.n),
            MatroidJson::Gfp { gfp } => Self::from_matrix_gfp(&gfp.cols, gfp.p),
        }
    }

    pub fn to_json(&self) -> MatroidJson {
        MatroidJson::Flats {
            ground: self.ground.clone(),
            flats: self.flats.iter().map(|f| f.iter().copied().collect()).collect(),
        }
    }

    pub fn ground(&self) -> &[u32] {
        &self.ground
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    pub fn flat(&self, p: usize) -> &Flat {
        &self.flats[p]
    }

    pub fn flats(&self) -> &[Flat] {
        &self.flats
    }

    pub fn index_of(&self, flat: &Flat) -> Option<usize> {
        self.flats.iter().position(|f| f == flat)
    }

    pub fn rank_of(&self, p: usize) -> usize {
        self.rank[p]
    }

    pub fn rank(&self) -> usize {
        self.rank[self.top()]
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.flats.len() - 1
    }

    pub fn atoms(&self) -> &[usize] {
        &self.atoms
    }

    pub fn leq(&self, p: usize, q: usize) -> bool {
        self.poset.leq(p, q)
    }

    pub fn join(&self, p: usize, q: usize) -> usize {
        self.join[p * self.len() + q]
    }

    pub fn meet(&self, p: usize, q: usize) -> usize {
        self.meet[p * self.len() + q]
    }

    pub fn join_all(&self, elements: impl IntoIterator<Item = usize>) -> usize {
        elements.into_iter().fold(self.bottom(), |acc, x| self.join(acc, x))
    }

    pub fn mobius(&self, p: usize, q: usize) -> Result<i64> {
        self.poset.mobius(p, q)
    }

    /// f(p): positions in `atoms()` of the atoms below p.
    pub fn atoms_below(&self, p: usize) -> BTreeSet<usize> {
        self.atoms.iter().enumerate().filter(|(_, &a)| self.leq(a, p)).map(|(i, _)| i).collect()
    }

    /// g(A): the join of the atoms at the given positions.
    pub fn join_of_atoms(&self, atom_positions: &BTreeSet<usize>) -> usize {
        self.join_all(atom_positions.iter().map(|&i| self.atoms[i]))
    }

    /// The lattice of flats as atom sets, with the maps f and g verified to
    /// be inverse rank-preserving bijections.
    pub fn flats_lattice(&self) -> Result<FlatsLattice> {
        let k = self.atoms.len();
        let is_flat = |set: &BTreeSet<usize>| {
            let j = self.join_of_atoms(set);
            (0..k).filter(|i| !set.contains(i)).all(|i| !self.leq(self.atoms[i], j))
        };
        let mut sets: Vec<BTreeSet<usize>> = if k <= 16 {
            (0..k).powerset().map(|s| s.into_iter().collect::<BTreeSet<_>>()).filter(|s| is_flat(s)).collect()
        } else {
            (0..self.len()).map(|p| self.atoms_below(p)).collect()
        };
        sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let labels = sets.iter().map(|s| format!("{{{}}}", s.iter().map(|&i| self.atom_name(i)).join(","))).collect();
        let poset = FinitePoset::from_order(labels, |i, j| sets[i].is_subset(&sets[j]))?;

        let f: Vec<usize> = (0..self.len())
            .map(|p| {
                let image = self.atoms_below(p);
                sets.iter().position(|s| *s == image).ok_or_else(|| Error::invariant("f(p) is not a flat"))
            })
            .collect::<Result<_>>()?;
        let g: Vec<usize> = sets.iter().map(|s| self.join_of_atoms(s)).collect();
        let ranks = poset.rank_function().ok_or_else(|| Error::invariant("flats lattice not graded"))?;
        for p in 0..self.len() {
            if g[f[p]] != p || ranks[f[p]] != self.rank[p] {
                return Err(Error::invariant(format!("g(f({})) ≠ {}", self.poset.label(p), self.poset.label(p))));
            }
        }
        for (i, &gi) in g.iter().enumerate() {
            if f[gi] != i {
                return Err(Error::invariant("f(g(A)) ≠ A"));
            }
        }
        Ok(FlatsLattice { sets, poset, f, g })
    }

    /// A name for the atom at position i: its single ground element when
    /// the atom is a singleton.
    pub fn atom_name(&self, i: usize) -> String {
        let flat = &self.flats[self.atoms[i]];
        if flat.len() == 1 {
            flat.iter().next().unwrap().to_string()
        } else {
            flat_label(flat)
        }
    }

    /// Whether `flag` is a maximal chain 0̂ = p_1 ⋖ … ⋖ p_{r+1} = 1̂.
    pub fn is_maximal_flag(&self, flag: &[usize]) -> bool {
        flag.len() == self.rank() + 1
            && flag.first() == Some(&self.bottom())
            && flag.last() == Some(&self.top())
            && flag.windows(2).all(|w| self.poset.upper_covers(w[0]).contains(&w[1]))
    }
}

/// Flats as sets of atom positions, with f: M → F and g: F → M.
#[derive(Clone, Debug)]
pub struct FlatsLattice {
    pub sets: Vec<BTreeSet<usize>>,
    pub poset: FinitePoset,
    pub f: Vec<usize>,
    pub g: Vec<usize>,
}

/// A rank- and order-reversing map from M to the Boolean lattice on {1..r}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllMap {
    pub r: usize,
    pub assignment: Vec<BTreeSet<usize>>,
}

impl EllMap {
    /// Checks |ℓ(p)| = r − rank(p), ℓ(p) ⊆ {1..r}, and p ≤ q ⇒ ℓ(q) ⊆ ℓ(p).
    pub fn validate(&self, m: &GeometricLattice) -> Result<()> {
        if self.r != m.rank() || self.assignment.len() != m.len() {
            return Err(Error::domain("ℓ-map does not match the matroid"));
        }
        for p in 0..m.len() {
            let lp = &self.assignment[p];
            if lp.iter().any(|&i| i == 0 || i > self.r) {
                return Err(Error::domain(format!("ℓ({}) leaves {{1..{}}}", m.poset().label(p), self.r)));
            }
            if lp.len() + m.rank_of(p) != self.r {
                return Err(Error::domain(format!("ℓ({}) is not rank-reversing", m.poset().label(p))));
            }
            for &q in m.poset().upper_covers(p) {
                if !self.assignment[q].is_subset(lp) {
                    return Err(Error::domain(format!(
                        "ℓ is not order-reversing on {} ≤ {}",
                        m.poset().label(p),
                        m.poset().label(q)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn get(&self, p: usize) -> &BTreeSet<usize> {
        &self.assignment[p]
    }
}

/// ℓ(p) = {1, …, r − rank(p)}.
pub fn ell_default(m: &GeometricLattice) -> EllMap {
    let r = m.rank();
    EllMap { r, assignment: (0..m.len()).map(|p| (1..=r - m.rank_of(p)).collect()).collect() }
}

/// The ℓ-map of a maximal flag 0̂ = p_1 < … < p_{r+1} = 1̂.
///
/// ℓ(p) collects the indices i ≤ r at which p ∨ p_i < p ∨ p_{i+1}. On the
/// flag itself this is {i ≤ r | p_i ≥ p}; off the flag it is the rank-jump
/// set, which has r − rank(p) elements by semimodularity and shrinks as p
/// grows.
pub fn ell_flag(m: &GeometricLattice, flag: &[usize]) -> Result<EllMap> {
    if !m.is_maximal_flag(flag) {
        return Err(Error::domain("flag is not a maximal chain from 0̂ to 1̂"));
    }
    let r = m.rank();
    let assignment = (0..m.len())
        .map(|p| (1..=r).filter(|&i| m.join(p, flag[i - 1]) != m.join(p, flag[i])).collect())
        .collect();
    let ell = EllMap { r, assignment };
    ell.validate(m).map_err(|e| Error::invariant(format!("flag ℓ-map failed validation: {e}")))?;
    Ok(ell)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniformParams {
    pub r: usize,
    pub n: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BooleanParams {
    pub n: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GfpParams {
    pub p: u64,
    pub cols: Vec<Vec<u64>>,
}

/// Matroid input forms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatroidJson {
    Flats { ground: Vec<u32>, flats: Vec<Vec<u32>> },
    Builtin { builtin: String },
    Uniform { uniform: UniformParams },
    Boolean { boolean: BooleanParams },
    Gfp { gfp: GfpParams },
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[u32]) -> Flat {
        xs.iter().copied().collect()
    }

    #[test]
    fn boolean_three_is_valid() {
        let b3 = GeometricLattice::boolean(3).unwrap();
        assert_eq!(b3.rank(), 3);
        assert_eq!(b3.len(), 8);
        assert_eq!(b3.atoms().len(), 3);
    }

    #[test]
    fn pentagon_is_not_graded() {
        let flats = vec![set(&[]), set(&[1]), set(&[1, 2]), set(&[3]), set(&[1, 2, 3])];
        let err = GeometricLattice::from_flats([1, 2, 3], flats).unwrap_err();
        let Error::NotAMatroid(v) = err else { panic!() };
        assert!(v.iter().any(|x| x.axiom == Axiom::Graded));
    }

    #[test]
    fn non_lattice_reports_witness() {
        // Two incomparable upper bounds for {1} and {2}.
        let flats = vec![set(&[]), set(&[1]), set(&[2]), set(&[1, 2, 3]), set(&[1, 2, 4]), set(&[1, 2, 3, 4])];
        let Error::NotAMatroid(v) = GeometricLattice::from_flats([1, 2, 3, 4], flats).unwrap_err() else { panic!() };
        let lat = v.iter().find(|x| x.axiom == Axiom::Lattice).unwrap();
        assert_eq!(lat.witness, ("{1}".to_string(), "{2}".to_string()));
    }

    #[test]
    fn meet_must_be_intersection() {
        // Lattice of sets where the meet of {1,2} and {1,3}... is {} but
        // their intersection is {1}.
        let flats = vec![set(&[]), set(&[1, 2]), set(&[1, 3]), set(&[1, 2, 3])];
        let Error::NotAMatroid(v) = GeometricLattice::from_flats([1, 2, 3], flats).unwrap_err() else { panic!() };
        assert!(v.iter().any(|x| x.axiom == Axiom::MeetIsIntersection));
    }

    #[test]
    fn square_face_lattice_is_not_semimodular() {
        // Graded, atomic, meets are intersections; opposite vertices have
        // rank 1 + 1 < 0 + 3.
        let flats = vec![
            set(&[]),
            set(&[1]),
            set(&[2]),
            set(&[3]),
            set(&[4]),
            set(&[1, 2]),
            set(&[2, 3]),
            set(&[3, 4]),
            set(&[1, 4]),
            set(&[1, 2, 3, 4]),
        ];
        let Error::NotAMatroid(v) = GeometricLattice::from_flats([1, 2, 3, 4], flats).unwrap_err() else { panic!() };
        assert!(v.iter().all(|x| x.axiom == Axiom::Semimodular));
        assert!(v.iter().any(|x| x.witness == ("{1}".into(), "{3}".into())));
    }

    #[test]
    fn join_of_atoms_must_be_ground() {
        let flats = vec![set(&[]), set(&[1]), set(&[2]), set(&[1, 2])];
        let Error::NotAMatroid(v) = GeometricLattice::from_flats([1, 2, 3], flats).unwrap_err() else { panic!() };
        assert!(v.iter().any(|x| x.axiom == Axiom::JoinOfAtomsIsGround));
    }

    #[test]
    fn uniform_and_matrix_builtins() {
        let u23 = GeometricLattice::uniform(2, 3).unwrap();
        assert_eq!(u23.len(), 5);
        assert!(GeometricLattice::uniform(4, 3).is_err());
        let id = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        let m = GeometricLattice::from_matrix_gfp(&id, 2).unwrap();
        assert_eq!(m.flats(), GeometricLattice::boolean(3).unwrap().flats());
        assert!(GeometricLattice::from_matrix_gfp(&[vec![0, 0], vec![1, 0]], 2).is_err());
        assert!(GeometricLattice::from_matrix_gfp(&id, 4).is_err());
    }

    #[test]
    fn fano_from_its_gf2_representation() {
        // Columns: the seven nonzero vectors of GF(2)^3, ordered to match
        // the builtin's lines.
        let cols = vec![
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![1, 1, 0],
            vec![0, 0, 1],
            vec![1, 0, 1],
            vec![0, 1, 1],
            vec![1, 1, 1],
        ];
        let m = GeometricLattice::from_matrix_gfp(&cols, 2).unwrap();
        assert_eq!(m.len(), 16);
        assert!(m.poset().find_isomorphism(GeometricLattice::fano().poset()).is_some());
    }

    #[test]
    fn flats_lattice_small_cases() {
        let b2 = GeometricLattice::boolean(2).unwrap();
        let fl = b2.flats_lattice().unwrap();
        assert_eq!(fl.sets.len(), 4);
        let u23 = GeometricLattice::uniform(2, 3).unwrap().flats_lattice().unwrap();
        assert_eq!(u23.sets.iter().map(|s| s.len()).collect::<Vec<_>>(), vec![0, 1, 1, 1, 3]);
    }

    #[test]
    fn default_ell() {
        let fano = GeometricLattice::fano();
        let ell = ell_default(&fano);
        ell.validate(&fano).unwrap();
        assert_eq!(ell.get(fano.bottom()), &BTreeSet::from([1, 2, 3]));
        assert!(ell.get(fano.top()).is_empty());
        let line = fano.index_of(&set(&[1, 2, 3])).unwrap();
        assert_eq!(ell.get(line), &BTreeSet::from([1]));
    }

    #[test]
    fn flag_ell_on_b2() {
        let b2 = GeometricLattice::boolean(2).unwrap();
        let flag = [0, b2.index_of(&set(&[1])).unwrap(), b2.top()];
        let ell = ell_flag(&b2, &flag).unwrap();
        assert_eq!(ell.get(b2.index_of(&set(&[1])).unwrap()), &BTreeSet::from([2]));
        assert_eq!(ell.get(b2.index_of(&set(&[2])).unwrap()), &BTreeSet::from([1]));
        assert_eq!(ell.get(0), &BTreeSet::from([1, 2]));
        assert!(ell_flag(&b2, &[0, b2.top()]).is_err());
    }

    #[test]
    fn ell_validation_rejects_bad_maps() {
        let b2 = GeometricLattice::boolean(2).unwrap();
        let mut ell = ell_default(&b2);
        ell.assignment[1] = BTreeSet::from([2]);
        ell.assignment[2] = BTreeSet::from([1, 2]);
        assert!(ell.validate(&b2).is_err());
    }
}
