//! Finite abstract simplicial complexes, joins and the standard model spaces.
//!
//! Vertices are numbered `0..n` with a parallel list of labels; a simplex is
//! a sorted vertex list. The empty face is implicit in every complex, so the
//! complex without vertices is the trivial complex {∅}: the join identity,
//! X^{*0} and S^{−1}.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::cell::{Cell, CellComplex};
use crate::error::{Error, Result};
use crate::poset::{FinitePoset, Label};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Simplex(Vec<u32>);

impl Simplex {
    pub fn new(vertices: impl IntoIterator<Item = u32>) -> Self {
        let mut v: Vec<u32> = vertices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Simplex(v)
    }

    pub fn vertices(&self) -> &[u32] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: u32) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| other.contains(*v))
    }

    pub fn union(&self, other: &Simplex) -> Simplex {
        Simplex::new(self.0.iter().chain(other.0.iter()).copied())
    }

    /// Image under a vertex map.
    pub fn map(&self, f: impl Fn(u32) -> u32) -> Simplex {
        Simplex::new(self.0.iter().map(|&v| f(v)))
    }

    /// All nonempty faces, including the simplex itself.
    pub fn faces(&self) -> impl Iterator<Item = Simplex> + '_ {
        (1..=self.0.len()).flat_map(move |k| self.0.iter().copied().combinations(k).map(Simplex))
    }
}

impl Cell for Simplex {
    fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// Sorted-vertex sign convention: dropping the j-th vertex has sign (−1)^j.
    fn boundary(&self) -> Vec<(Self, i64)> {
        if self.0.len() <= 1 {
            return Vec::new();
        }
        (0..self.0.len())
            .map(|j| {
                let mut face = self.0.clone();
                face.remove(j);
                (Simplex(face), if j % 2 == 0 { 1 } else { -1 })
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    labels: Vec<String>,
    complex: CellComplex<Simplex>,
}

impl SimplicialComplex {
    /// The trivial complex {∅}.
    pub fn trivial() -> Self {
        Self { labels: Vec::new(), complex: CellComplex::default() }
    }

    /// Closes `simplices` under faces and adds every labelled vertex.
    pub(crate) fn from_parts(labels: Vec<String>, simplices: impl IntoIterator<Item = Simplex>) -> Self {
        let n = labels.len() as u32;
        let generators = simplices.into_iter().filter(|s| !s.is_empty()).chain((0..n).map(|v| Simplex(vec![v])));
        Self { labels, complex: CellComplex::closure_of(generators) }
    }

    /// Builds a complex from labelled vertices and facets given by vertex
    /// index. Every vertex is included even if no facet mentions it.
    pub fn from_facets(labels: Vec<String>, facets: Vec<Vec<u32>>) -> Result<Self> {
        if labels.iter().collect::<BTreeSet<_>>().len() != labels.len() {
            return Err(Error::input("duplicate vertex labels"));
        }
        let n = labels.len() as u32;
        for f in &facets {
            if let Some(v) = f.iter().find(|&&v| v >= n) {
                return Err(Error::input(format!("facet references unknown vertex {v}")));
            }
        }
        Ok(Self::from_parts(labels, facets.into_iter().map(Simplex::new)))
    }

    /// Builds the subcomplex of `self` with the given simplices, which must
    /// form a closed set; vertices keep their ids and labels.
    pub fn subcomplex(&self, simplices: BTreeSet<Simplex>) -> Result<CellComplex<Simplex>> {
        if let Some(s) = simplices.iter().find(|s| !self.complex.contains(s)) {
            return Err(Error::input(format!("{s:?} is not a simplex of the ambient complex")));
        }
        CellComplex::from_cells(simplices)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> isize {
        self.complex.dim()
    }

    /// Nonempty simplices.
    pub fn simplices(&self) -> &BTreeSet<Simplex> {
        self.complex.cells()
    }

    pub fn as_cell_complex(&self) -> &CellComplex<Simplex> {
        &self.complex
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        s.is_empty() || self.complex.contains(s)
    }

    /// f-vector including the empty face: entry k counts (k−1)-simplices.
    pub fn f_vector(&self) -> Vec<usize> {
        std::iter::once(1).chain(self.complex.f_vector()).collect()
    }

    /// Maximal simplices, sorted.
    pub fn facets(&self) -> Vec<Simplex> {
        let all = self.simplices();
        all.iter()
            .filter(|s| {
                (0..self.labels.len() as u32)
                    .filter(|v| !s.contains(*v))
                    .all(|v| !all.contains(&s.union(&Simplex(vec![v]))))
            })
            .cloned()
            .collect()
    }

    /// The join A ∗ B. Vertex labels become `1:a` and `2:b`, A's vertices
    /// first.
    pub fn join(&self, other: &SimplicialComplex) -> SimplicialComplex {
        let shift = self.labels.len() as u32;
        let labels = self
            .labels
            .iter()
            .map(|l| format!("1:{l}"))
            .chain(other.labels.iter().map(|l| format!("2:{l}")))
            .collect();
        let left: Vec<Simplex> = std::iter::once(Simplex(vec![])).chain(self.simplices().iter().cloned()).collect();
        let right: Vec<Simplex> = std::iter::once(Simplex(vec![]))
            .chain(other.simplices().iter().map(|t| t.map(|v| v + shift)))
            .collect();
        let cells = left
            .iter()
            .cartesian_product(right.iter())
            .map(|(s, t)| s.union(t))
            .filter(|s| !s.is_empty())
            .collect();
        SimplicialComplex { labels, complex: CellComplex::from_closed(cells) }
    }

    /// The n-fold join X^{*n}; coordinate i (1-based) holds vertex v of X
    /// as id `(i−1)·|V(X)| + v` with label `i:label`.
    pub fn power_join(&self, n: usize) -> SimplicialComplex {
        let nv = self.labels.len() as u32;
        let labels = (1..=n).flat_map(|i| self.labels.iter().map(move |l| format!("{i}:{l}"))).collect();
        let mut cells: BTreeSet<Simplex> = BTreeSet::new();
        let mut partial: Vec<Simplex> = vec![Simplex(vec![])];
        for i in 0..n as u32 {
            let factor: Vec<Simplex> = std::iter::once(Simplex(vec![]))
                .chain(self.simplices().iter().map(|s| s.map(|v| v + i * nv)))
                .collect();
            partial = partial.iter().cartesian_product(factor.iter()).map(|(a, b)| a.union(b)).collect();
        }
        cells.extend(partial.into_iter().filter(|s| !s.is_empty()));
        SimplicialComplex { labels, complex: CellComplex::from_closed(cells) }
    }

    /// The face poset F(A): nonempty simplices ordered by inclusion, with
    /// covers between simplices differing in one vertex.
    pub fn face_poset(&self) -> FinitePoset {
        let cells: Vec<Simplex> = self.complex.cells_by_dim().into_iter().flatten().collect();
        let index: std::collections::HashMap<&Simplex, usize> = cells.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let labels = cells.iter().map(|s| self.simplex_label(s)).collect();
        let mut covers: Vec<(usize, usize)> = cells
            .iter()
            .enumerate()
            .flat_map(|(i, s)| s.boundary().into_iter().map(|(f, _)| (index[&f], i)).collect::<Vec<_>>())
            .collect();
        covers.sort_unstable();
        FinitePoset::from_covers(labels, covers).expect("face covers form a poset")
    }

    pub fn simplex_label(&self, s: &Simplex) -> String {
        format!("{{{}}}", s.vertices().iter().map(|&v| self.labels[v as usize].as_str()).join(","))
    }

    /// Whether `perm` (a bijection on vertex ids) maps simplices to simplices.
    pub fn is_automorphism(&self, perm: &[u32]) -> bool {
        let n = self.labels.len();
        perm.len() == n
            && perm.iter().collect::<BTreeSet<_>>().len() == n
            && perm.iter().all(|&v| (v as usize) < n)
            && self.simplices().iter().all(|s| self.complex.contains(&s.map(|v| perm[v as usize])))
    }

    pub fn standard(space: StandardSpace) -> Result<Self> {
        let names = |k: usize| (0..k).map(|i| i.to_string()).collect::<Vec<_>>();
        match space {
            StandardSpace::Points(k) => {
                if k == 0 {
                    return Err(Error::input("points(k) needs k ≥ 1"));
                }
                Self::from_facets(names(k), (0..k as u32).map(|v| vec![v]).collect())
            }
            StandardSpace::Cycle(k) => {
                if k < 3 {
                    return Err(Error::input(format!("cycle({k}) needs k ≥ 3")));
                }
                let k32 = k as u32;
                Self::from_facets(names(k), (0..k32).map(|v| vec![v, (v + 1) % k32]).collect())
            }
            StandardSpace::Sphere(d) => {
                let n = d as u32 + 2;
                let facets = (0..n).map(|skip| (0..n).filter(|&v| v != skip).collect()).collect();
                Self::from_facets(names(d + 2), facets)
            }
        }
    }

    pub fn to_json(&self) -> ComplexJson {
        ComplexJson::Explicit {
            vertices: self.labels.iter().cloned().map(Label::Str).collect(),
            facets: self
                .facets()
                .iter()
                .map(|f| f.vertices().iter().map(|&v| Label::Str(self.labels[v as usize].clone())).collect())
                .collect(),
        }
    }

    pub fn from_json(json: &ComplexJson) -> Result<Self> {
        match json {
            ComplexJson::Standard { standard } => Self::standard(standard.parse()?),
            ComplexJson::Explicit { vertices, facets } => {
                let labels: Vec<String> = vertices.iter().map(Label::to_string).collect();
                let facets = facets
                    .iter()
                    .map(|f| {
                        f.iter()
                            .map(|l| {
                                let l = l.to_string();
                                labels
                                    .iter()
                                    .position(|x| *x == l)
                                    .map(|i| i as u32)
                                    .ok_or_else(|| Error::input(format!("facet uses undeclared vertex {l}")))
                            })
                            .collect::<Result<Vec<u32>>>()
                    })
                    .collect::<Result<_>>()?;
                Self::from_facets(labels, facets)
            }
        }
    }
}

/// The model spaces `points:k`, `cycle:k` and `sphere:d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StandardSpace {
    Points(usize),
    Cycle(usize),
    Sphere(usize),
}

impl FromStr for StandardSpace {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, arg) = s.split_once(':').ok_or_else(|| Error::input(format!("bad space spec {s:?}")))?;
        let n: usize = arg.trim().parse().map_err(|_| Error::input(format!("bad space parameter in {s:?}")))?;
        match kind.trim() {
            "points" => Ok(StandardSpace::Points(n)),
            "cycle" => Ok(StandardSpace::Cycle(n)),
            "sphere" => Ok(StandardSpace::Sphere(n)),
            other => Err(Error::input(format!("unknown space kind {other:?}"))),
        }
    }
}

impl fmt::Display for StandardSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StandardSpace::Points(k) => write!(f, "points:{k}"),
            StandardSpace::Cycle(k) => write!(f, "cycle:{k}"),
            StandardSpace::Sphere(d) => write!(f, "sphere:{d}"),
        }
    }
}

/// `{"vertices":[...], "facets":[[...],...]}` or `{"standard":"points:3"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum ComplexJson {
    Standard { standard: String },
    Explicit { vertices: Vec<Label>, facets: Vec<Vec<Label>> },
}
