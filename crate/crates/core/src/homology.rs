//! Exact reduced homology over Q and GF(2).
//!
//! Chain complexes are always augmented: a single generator sits in degree
//! −1 and every vertex maps to it. The empty complex therefore has
//! β̃_{−1} = 1, which is what makes it behave as the join identity and as
//! S^{−1} in wedge formulas.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cell::{Cell, CellComplex};
use crate::error::{Error, Result};
use crate::linalg::{multiply, rank_gf2, rank_rational, SparseColumn};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Field {
    #[serde(rename = "Q")]
    Rational,
    #[serde(rename = "GF2")]
    Gf2,
}

impl Field {
    pub const ALL: [Field; 2] = [Field::Rational, Field::Gf2];
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Field::Rational => "Q",
            Field::Gf2 => "GF2",
        })
    }
}

impl std::str::FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "Q" | "QQ" | "RATIONAL" => Ok(Field::Rational),
            "GF2" | "GF(2)" | "F2" | "Z2" => Ok(Field::Gf2),
            _ => Err(Error::input(format!("unknown coefficient field {s:?}"))),
        }
    }
}

/// Reduced Betti numbers indexed from degree −1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BettiVector {
    field: Field,
    // values[0] is degree −1; no trailing zeros beyond it.
    values: Vec<u64>,
}

impl BettiVector {
    pub fn new(field: Field, from_minus_one: Vec<u64>) -> Self {
        let mut v = Self { field, values: from_minus_one };
        v.trim();
        v
    }

    fn trim(&mut self) {
        if self.values.is_empty() {
            self.values.push(0);
        }
        while self.values.len() > 1 && *self.values.last().unwrap() == 0 {
            self.values.pop();
        }
    }

    /// All zero: a contractible space.
    pub fn zero(field: Field) -> Self {
        Self::new(field, vec![0])
    }

    /// The empty space S^{−1}.
    pub fn empty_space(field: Field) -> Self {
        Self::new(field, vec![1])
    }

    /// S^n for n ≥ −1.
    pub fn sphere(field: Field, n: isize) -> Self {
        Self::wedge_of_spheres(field, n, 1)
    }

    /// A wedge of `count` copies of S^n; for n = −1 and count ≥ 1 this is the
    /// empty space.
    pub fn wedge_of_spheres(field: Field, n: isize, count: u64) -> Self {
        assert!(n >= -1);
        let mut values = vec![0; (n + 2) as usize];
        values[(n + 1) as usize] = if n == -1 { count.min(1) } else { count };
        Self::new(field, values)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// β̃ in degree `d` (zero outside the stored range).
    pub fn get(&self, d: isize) -> u64 {
        if d < -1 {
            return 0;
        }
        self.values.get((d + 1) as usize).copied().unwrap_or(0)
    }

    /// Highest degree with a nonzero entry, or −2 if all vanish.
    pub fn top_degree(&self) -> isize {
        (0..self.values.len()).rev().find(|&i| self.values[i] != 0).map(|i| i as isize - 1).unwrap_or(-2)
    }

    /// Entries from degree −1 up to the last nonzero one.
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn is_empty_space(&self) -> bool {
        self.get(-1) == 1
    }

    /// Euler characteristic of the unreduced homology, Σ(−1)^d β_d.
    pub fn euler_characteristic(&self) -> i64 {
        let reduced: i64 = (-1..self.values.len() as isize - 1)
            .map(|d| if d.rem_euclid(2) == 0 { self.get(d) as i64 } else { -(self.get(d) as i64) })
            .sum();
        reduced + 1
    }

    /// Nonzero entries as `(degree, value)`.
    pub fn nonzero(&self) -> Vec<(isize, u64)> {
        (-1..self.values.len() as isize - 1).filter(|&d| self.get(d) != 0).map(|d| (d, self.get(d))).collect()
    }

    pub fn with_field(&self, field: Field) -> Self {
        Self { field, values: self.values.clone() }
    }

    pub fn to_json(&self) -> BettiJson {
        BettiJson {
            field: self.field,
            betti: (-1..self.values.len() as isize - 1).map(|d| (d.to_string(), self.get(d))).collect(),
        }
    }

    pub fn from_json(json: &BettiJson) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (k, v) in &json.betti {
            let d: isize = k.parse().map_err(|_| Error::input(format!("bad degree {k:?}")))?;
            if d < -1 {
                return Err(Error::input(format!("degree {d} below −1")));
            }
            map.insert(d, *v);
        }
        let top = map.keys().max().copied().unwrap_or(-1);
        Ok(Self::new(json.field, (-1..=top).map(|d| map.get(&d).copied().unwrap_or(0)).collect()))
    }
}

impl fmt::Display for BettiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.nonzero().iter().map(|(d, v)| format!("b{d}={v}")).collect();
        if parts.is_empty() {
            write!(f, "[{}] 0", self.field)
        } else {
            write!(f, "[{}] {}", self.field, parts.join(" "))
        }
    }
}

/// `{"field":"Q","betti":{"-1":0,"0":...}}`; degrees are emitted in
/// numeric order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BettiJson {
    pub field: Field,
    #[serde(with = "ordered_degrees")]
    pub betti: Vec<(String, u64)>,
}

mod ordered_degrees {
    use serde::de::{MapAccess, Visitor};
    use serde::ser::SerializeMap;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[(String, u64)], s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(v.len()))?;
        for (k, x) in v {
            map.serialize_entry(k, x)?;
        }
        map.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(String, u64)>, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Vec<(String, u64)>;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a map from degree to Betti number")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut m: A) -> Result<Self::Value, A::Error> {
                let mut out = Vec::new();
                while let Some((k, v)) = m.next_entry::<String, u64>()? {
                    out.push((k, v));
                }
                Ok(out)
            }
        }
        d.deserialize_map(V)
    }
}

/// Augmented boundary matrices of a cell complex.
///
/// `boundaries[k]` maps k-cells to (k−1)-cells; `boundaries[0]` is the
/// augmentation onto the single degree −1 generator.
#[derive(Clone, Debug)]
pub struct ChainComplexMatrices {
    pub counts: Vec<usize>,
    pub boundaries: Vec<Vec<SparseColumn>>,
}

impl ChainComplexMatrices {
    pub fn from_complex<C: Cell>(complex: &CellComplex<C>) -> Result<Self> {
        let by_dim = complex.cells_by_dim();
        let index: Vec<HashMap<&C, usize>> =
            by_dim.iter().map(|cells| cells.iter().enumerate().map(|(i, c)| (c, i)).collect()).collect();
        let mut boundaries = Vec::with_capacity(by_dim.len());
        for (k, cells) in by_dim.iter().enumerate() {
            let cols = cells
                .iter()
                .map(|c| {
                    if k == 0 {
                        return Ok(vec![(0usize, 1i64)]);
                    }
                    let mut col: Vec<(usize, i64)> = Vec::new();
                    for (face, sign) in c.boundary() {
                        let row = *index[k - 1].get(&face).ok_or_else(|| {
                            Error::input(format!("face {face:?} of {c:?} missing from the complex"))
                        })?;
                        col.push((row, sign));
                    }
                    col.sort_unstable();
                    col.dedup_by(|b, a| {
                        if a.0 == b.0 {
                            a.1 += b.1;
                            true
                        } else {
                            false
                        }
                    });
                    col.retain(|&(_, v)| v != 0);
                    Ok(col)
                })
                .collect::<Result<Vec<_>>>()?;
            boundaries.push(cols);
        }
        let counts = by_dim.iter().map(Vec::len).collect();
        Ok(Self { counts, boundaries })
    }

    /// Checks ∂_{k−1} ∘ ∂_k = 0 for every k ≥ 1.
    pub fn check_square_zero(&self) -> Result<()> {
        for k in 1..self.boundaries.len() {
            let product = multiply(&self.boundaries[k - 1], &self.boundaries[k]);
            if let Some(col) = product.iter().position(|c| !c.is_empty()) {
                return Err(Error::invariant(format!(
                    "boundary does not square to zero in degree {k} (cell #{col})"
                )));
            }
        }
        Ok(())
    }

    pub fn betti(&self, field: Field) -> BettiVector {
        let rank = |cols: &[SparseColumn]| match field {
            Field::Rational => rank_rational(cols),
            Field::Gf2 => rank_gf2(cols),
        };
        let ranks: Vec<usize> = self.boundaries.iter().map(|b| rank(b)).collect();
        let rank_at = |k: usize| ranks.get(k).copied().unwrap_or(0);
        // degree −1: one generator, hit by ∂_0.
        let mut values = vec![(1 - rank_at(0)) as u64];
        for (k, &n) in self.counts.iter().enumerate() {
            values.push((n - rank_at(k) - rank_at(k + 1)) as u64);
        }
        BettiVector::new(field, values)
    }
}

/// Reduced Betti numbers of a cell complex, after checking ∂∘∂ = 0.
pub fn betti<C: Cell>(complex: &CellComplex<C>, field: Field) -> Result<BettiVector> {
    let m = ChainComplexMatrices::from_complex(complex)?;
    m.check_square_zero()?;
    Ok(m.betti(field))
}

/// Betti numbers over Q and GF(2) from one set of matrices.
pub fn betti_both<C: Cell>(complex: &CellComplex<C>) -> Result<(BettiVector, BettiVector)> {
    let m = ChainComplexMatrices::from_complex(complex)?;
    m.check_square_zero()?;
    Ok((m.betti(Field::Rational), m.betti(Field::Gf2)))
}

/// β̃(A ∗ B)_i = Σ_{j+k=i−1} β̃_j(A) β̃_k(B), degrees from −1.
pub fn join_betti(a: &BettiVector, b: &BettiVector) -> Result<BettiVector> {
    if a.field != b.field {
        return Err(Error::domain(format!("cannot join Betti vectors over {} and {}", a.field, b.field)));
    }
    let mut values = vec![0u64; a.values.len() + b.values.len()];
    for (j, &x) in a.values.iter().enumerate() {
        for (k, &y) in b.values.iter().enumerate() {
            // stored index = degree + 1; degree(out) = dj + dk + 1.
            values[j + k] += x * y;
        }
    }
    Ok(BettiVector::new(a.field, values))
}

/// Betti numbers of a wedge: degreewise sum in degrees ≥ 0. Empty-space
/// parts contribute nothing, unless every part is empty, in which case the
/// wedge is itself empty.
pub fn wedge_betti(parts: &[BettiVector], field: Field) -> Result<BettiVector> {
    if let Some(p) = parts.iter().find(|p| p.field != field) {
        return Err(Error::domain(format!("wedge part over {} in a wedge over {field}", p.field)));
    }
    if !parts.is_empty() && parts.iter().all(|p| p.is_empty_space()) {
        return Ok(BettiVector::empty_space(field));
    }
    let len = parts.iter().map(|p| p.values.len()).max().unwrap_or(1);
    let mut values = vec![0u64; len];
    for p in parts {
        for (i, &v) in p.values.iter().enumerate().skip(1) {
            values[i] += v;
        }
    }
    Ok(BettiVector::new(field, values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::SimplicialComplex;

    fn space(s: &str) -> SimplicialComplex {
        SimplicialComplex::standard(s.parse().unwrap()).unwrap()
    }

    #[test]
    fn octahedron_is_a_two_sphere() {
        let oct = space("points:2").power_join(3);
        let b = betti(oct.as_cell_complex(), Field::Rational).unwrap();
        assert_eq!(b, BettiVector::sphere(Field::Rational, 2));
        assert_eq!(b.values(), &[0, 0, 0, 1]);
    }

    #[test]
    fn trivial_complex_has_minus_one_class() {
        let b = betti(SimplicialComplex::trivial().as_cell_complex(), Field::Gf2).unwrap();
        assert_eq!(b.get(-1), 1);
        assert_eq!(b, BettiVector::empty_space(Field::Gf2));
    }

    #[test]
    fn points_and_cycles() {
        let b = betti(space("points:3").as_cell_complex(), Field::Rational).unwrap();
        assert_eq!(b.nonzero(), vec![(0, 2)]);
        let b = betti(space("cycle:6").as_cell_complex(), Field::Gf2).unwrap();
        assert_eq!(b.nonzero(), vec![(1, 1)]);
    }

    #[test]
    fn join_betti_cases() {
        let s0 = BettiVector::sphere(Field::Rational, 0);
        assert_eq!(join_betti(&s0, &s0).unwrap(), BettiVector::sphere(Field::Rational, 1));
        let x = BettiVector::new(Field::Rational, vec![0, 3, 0, 5]);
        assert_eq!(join_betti(&x, &BettiVector::empty_space(Field::Rational)).unwrap(), x);
        let p3 = BettiVector::wedge_of_spheres(Field::Rational, 0, 2);
        assert_eq!(join_betti(&p3, &p3).unwrap().nonzero(), vec![(1, 4)]);
        assert!(join_betti(&s0, &s0.with_field(Field::Gf2)).is_err());
    }

    #[test]
    fn k33_matrix_homology_matches_join_formula() {
        let k33 = space("points:3").power_join(2);
        let b = betti(k33.as_cell_complex(), Field::Rational).unwrap();
        assert_eq!(b.nonzero(), vec![(1, 4)]);
    }

    #[test]
    fn wedge_betti_cases() {
        let f = Field::Rational;
        let s1 = BettiVector::sphere(f, 1);
        assert_eq!(wedge_betti(&[s1.clone(), s1], f).unwrap().nonzero(), vec![(1, 2)]);
        assert_eq!(wedge_betti(&[], f).unwrap(), BettiVector::zero(f));
        let s0 = BettiVector::sphere(f, 0);
        let e = BettiVector::empty_space(f);
        assert_eq!(wedge_betti(&[s0.clone(), e.clone()], f).unwrap(), s0);
        assert_eq!(wedge_betti(std::slice::from_ref(&e), f).unwrap(), e);
    }

    #[test]
    fn euler_characteristic_of_betti() {
        assert_eq!(BettiVector::sphere(Field::Rational, 2).euler_characteristic(), 2);
        assert_eq!(BettiVector::empty_space(Field::Rational).euler_characteristic(), 0);
        assert_eq!(BettiVector::zero(Field::Rational).euler_characteristic(), 1);
    }

    #[test]
    fn json_shape() {
        let b = BettiVector::sphere(Field::Rational, 1);
        let s = serde_json::to_string(&b.to_json()).unwrap();
        assert_eq!(s, r#"{"field":"Q","betti":{"-1":0,"0":0,"1":1}}"#);
        let back: BettiJson = serde_json::from_str(&s).unwrap();
        assert_eq!(BettiVector::from_json(&back).unwrap(), b);
    }
}
