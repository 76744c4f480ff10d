//! Finite posets stored by their cover relation.
//!
//! Elements are indexed `0..n` in construction order, which is also the
//! tie-break order for every enumeration. The full order relation and a
//! linear extension are computed once at construction.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simplicial::{Simplex, SimplicialComplex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePoset {
    labels: Vec<String>,
    covers: Vec<(usize, usize)>,
    upper: Vec<Vec<usize>>,
    lower: Vec<Vec<usize>>,
    leq: Vec<bool>,
    linear: Vec<usize>,
}

impl FinitePoset {
    /// Builds a poset from a cover list, rejecting cycles and covers that
    /// are implied by other covers.
    pub fn from_covers(labels: Vec<String>, covers: Vec<(usize, usize)>) -> Result<Self> {
        let n = labels.len();
        let mut upper = vec![Vec::new(); n];
        let mut lower = vec![Vec::new(); n];
        for &(lo, hi) in &covers {
            if lo >= n || hi >= n {
                return Err(Error::input(format!("cover ({lo},{hi}) references an unknown element")));
            }
            if lo == hi {
                return Err(Error::input(format!("cover ({lo},{lo}) is reflexive")));
            }
            if upper[lo].contains(&hi) {
                return Err(Error::input(format!("duplicate cover ({lo},{hi})")));
            }
            upper[lo].push(hi);
            lower[hi].push(lo);
        }
        for list in upper.iter_mut().chain(lower.iter_mut()) {
            list.sort_unstable();
        }

        // Kahn's algorithm, smallest index first for determinism.
        let mut indeg: Vec<usize> = lower.iter().map(|l| l.len()).collect();
        let mut ready: std::collections::BTreeSet<usize> =
            (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut linear = Vec::with_capacity(n);
        while let Some(x) = ready.pop_first() {
            linear.push(x);
            for &y in &upper[x] {
                indeg[y] -= 1;
                if indeg[y] == 0 {
                    ready.insert(y);
                }
            }
        }
        if linear.len() != n {
            return Err(Error::input("cover relation contains a directed cycle"));
        }

        let mut leq = vec![false; n * n];
        for &x in linear.iter().rev() {
            leq[x * n + x] = true;
            for &y in &upper[x] {
                for z in 0..n {
                    if leq[y * n + z] {
                        leq[x * n + z] = true;
                    }
                }
            }
        }

        let poset = Self { labels, covers, upper, lower, leq, linear };
        for &(lo, hi) in &poset.covers {
            if poset.upper[lo].iter().any(|&m| m != hi && poset.leq(m, hi)) {
                return Err(Error::input(format!(
                    "cover ({},{}) is implied by transitivity",
                    poset.labels[lo], poset.labels[hi]
                )));
            }
        }
        Ok(poset)
    }

    /// Builds a poset from an order relation `le`, which must be a partial
    /// order on `0..labels.len()`. Covers are recomputed.
    pub fn from_order(labels: Vec<String>, le: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let n = labels.len();
        let mut rel = vec![false; n * n];
        for x in 0..n {
            for y in 0..n {
                rel[x * n + y] = x == y || le(x, y);
            }
        }
        for x in 0..n {
            for y in 0..n {
                if x != y && rel[x * n + y] && rel[y * n + x] {
                    return Err(Error::input(format!(
                        "relation is not antisymmetric on {} and {}",
                        labels[x], labels[y]
                    )));
                }
            }
        }
        // Down-set size strictly increases along the order.
        let below: Vec<usize> = (0..n).map(|y| (0..n).filter(|&x| rel[x * n + y]).count()).collect();
        let mut by_height: Vec<usize> = (0..n).collect();
        by_height.sort_by_key(|&x| (below[x], x));
        let mut covers = Vec::new();
        for x in 0..n {
            let mut minimal: Vec<usize> = Vec::new();
            for &y in &by_height {
                if y == x || !rel[x * n + y] {
                    continue;
                }
                if !minimal.iter().any(|&m| rel[m * n + y]) {
                    minimal.push(y);
                }
            }
            covers.extend(minimal.into_iter().map(|y| (x, y)));
        }
        covers.sort_unstable();
        let poset = Self::from_covers(labels, covers)?;
        if poset.leq != rel {
            return Err(Error::input("relation is not transitive"));
        }
        Ok(poset)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn upper_covers(&self, x: usize) -> &[usize] {
        &self.upper[x]
    }

    pub fn lower_covers(&self, x: usize) -> &[usize] {
        &self.lower[x]
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x * self.len() + y]
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    /// A linear extension of the order.
    pub fn linear_extension(&self) -> &[usize] {
        &self.linear
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.lower[x].is_empty()).collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.upper[x].is_empty()).collect()
    }

    pub fn minimum(&self) -> Option<usize> {
        match self.minimal_elements().as_slice() {
            [m] => Some(*m),
            _ => None,
        }
    }

    pub fn maximum(&self) -> Option<usize> {
        match self.maximal_elements().as_slice() {
            [m] => Some(*m),
            _ => None,
        }
    }

    /// The induced subposet on the elements selected by `keep`, together
    /// with the map from new indices to old ones.
    pub fn subposet(&self, mut keep: impl FnMut(usize) -> bool) -> (FinitePoset, Vec<usize>) {
        let kept: Vec<usize> = (0..self.len()).filter(|&x| keep(x)).collect();
        let labels = kept.iter().map(|&x| self.labels[x].clone()).collect();
        let sub = Self::from_order(labels, |i, j| self.leq(kept[i], kept[j]))
            .expect("induced suborders are partial orders");
        (sub, kept)
    }

    /// `P_{≥q}`.
    pub fn up_set(&self, q: usize) -> (FinitePoset, Vec<usize>) {
        self.subposet(|x| self.leq(q, x))
    }

    /// The open interval `(a, b)`.
    pub fn open_interval(&self, a: usize, b: usize) -> (FinitePoset, Vec<usize>) {
        self.subposet(|x| self.lt(a, x) && self.lt(x, b))
    }

    /// Rank function if the poset is graded: every minimal element has rank
    /// 0 and rank increases by exactly one along covers.
    pub fn rank_function(&self) -> Option<Vec<usize>> {
        let mut rank: Vec<Option<usize>> = vec![None; self.len()];
        for &x in &self.linear {
            let r = match self.lower[x].first() {
                None => 0,
                Some(&l) => rank[l]? + 1,
            };
            if self.lower[x].iter().any(|&l| rank[l] != Some(r - 1)) {
                return None;
            }
            rank[x] = Some(r);
        }
        // All maximal chains must share length when a maximum exists; the
        // cover condition already forces that for bounded posets.
        rank.into_iter().collect()
    }

    /// μ(a, b) by the recursion μ(a,a)=1, Σ_{a≤q≤b} μ(a,q)=0.
    pub fn mobius(&self, a: usize, b: usize) -> Result<i64> {
        if !self.leq(a, b) {
            return Err(Error::domain(format!(
                "mobius({}, {}) requires {} ≤ {}",
                self.labels[a], self.labels[b], self.labels[a], self.labels[b]
            )));
        }
        let row = self.mobius_row_until(a, Some(b));
        Ok(row[&b])
    }

    /// μ(a, q) for every q ≥ a.
    pub fn mobius_from(&self, a: usize) -> BTreeMap<usize, i64> {
        self.mobius_row_until(a, None)
    }

    fn mobius_row_until(&self, a: usize, stop: Option<usize>) -> BTreeMap<usize, i64> {
        let mut memo: BTreeMap<usize, i64> = BTreeMap::new();
        for &q in &self.linear {
            if !self.leq(a, q) || stop.is_some_and(|b| !self.leq(q, b)) {
                continue;
            }
            let value = if q == a {
                1
            } else {
                -memo.iter().filter(|(&s, _)| self.lt(s, q)).map(|(_, v)| v).sum::<i64>()
            };
            memo.insert(q, value);
        }
        memo
    }

    /// All nonempty chains, each listed bottom to top, ordered by length and
    /// then lexicographically by element index.
    pub fn chains(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut stack: Vec<Vec<usize>> = self.linear.iter().rev().map(|&x| vec![x]).collect();
        while let Some(chain) = stack.pop() {
            let top = *chain.last().unwrap();
            for &y in self.linear.iter().rev() {
                if self.lt(top, y) {
                    let mut next = chain.clone();
                    next.push(y);
                    stack.push(next);
                }
            }
            out.push(chain);
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    /// Chains whose maximum is `top`, bottom to top.
    pub fn chains_ending_at(&self, top: usize) -> Vec<Vec<usize>> {
        let below: Vec<usize> = self.linear.iter().copied().filter(|&x| self.lt(x, top)).collect();
        let mut out = vec![vec![top]];
        let mut stack: Vec<Vec<usize>> = vec![vec![top]];
        while let Some(chain) = stack.pop() {
            let bottom = chain[0];
            for &x in &below {
                if self.lt(x, bottom) {
                    let mut next = Vec::with_capacity(chain.len() + 1);
                    next.push(x);
                    next.extend_from_slice(&chain);
                    out.push(next.clone());
                    stack.push(next);
                }
            }
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    /// The order complex Δ(P): one vertex per element, one simplex per chain.
    pub fn order_complex(&self) -> SimplicialComplex {
        let simplices = self.chains().into_iter().map(|c| Simplex::new(c.into_iter().map(|x| x as u32)));
        SimplicialComplex::from_parts(self.labels.clone(), simplices)
    }

    /// Length of the longest chain (number of covers along it), −1 if empty.
    pub fn height(&self) -> isize {
        let mut longest = vec![0isize; self.len()];
        for &x in &self.linear {
            longest[x] = self.lower[x].iter().map(|&l| longest[l] + 1).max().unwrap_or(0);
        }
        longest.into_iter().max().unwrap_or(-1)
    }

    pub fn to_json(&self) -> PosetJson {
        PosetJson {
            elements: self.labels.iter().cloned().map(Label::Str).collect(),
            covers: self
                .covers
                .iter()
                .map(|&(a, b)| [Label::Str(self.labels[a].clone()), Label::Str(self.labels[b].clone())])
                .collect(),
        }
    }

    pub fn from_json(json: &PosetJson) -> Result<Self> {
        let labels: Vec<String> = json.elements.iter().map(Label::to_string).collect();
        let mut index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::input(format!("duplicate poset element {l}")));
            }
        }
        let lookup = |l: &Label| {
            index.get(&l.to_string()).copied().ok_or_else(|| Error::input(format!("unknown element {l}")))
        };
        let covers = json.covers.iter().map(|[a, b]| Ok((lookup(a)?, lookup(b)?))).collect::<Result<_>>()?;
        Self::from_covers(labels, covers)
    }

    /// Searches for an order isomorphism `self → other`, returned as the
    /// image of each element. Candidates are pruned by rank and by the
    /// number of upper and lower covers.
    pub fn find_isomorphism(&self, other: &FinitePoset) -> Option<Vec<usize>> {
        if self.len() != other.len() || self.covers.len() != other.covers.len() {
            return None;
        }
        let signature = |p: &FinitePoset, x: usize, depth: &[isize]| {
            (depth[x], p.upper[x].len(), p.lower[x].len(), (0..p.len()).filter(|&y| p.leq(y, x)).count())
        };
        let depth_of = |p: &FinitePoset| {
            let mut d = vec![0isize; p.len()];
            for &x in &p.linear {
                d[x] = p.lower[x].iter().map(|&l| d[l] + 1).max().unwrap_or(0);
            }
            d
        };
        let (ds, dt) = (depth_of(self), depth_of(other));
        let sig_s: Vec<_> = (0..self.len()).map(|x| signature(self, x, &ds)).collect();
        let sig_t: Vec<_> = (0..other.len()).map(|x| signature(other, x, &dt)).collect();
        let mut sorted_s = sig_s.clone();
        let mut sorted_t = sig_t.clone();
        sorted_s.sort();
        sorted_t.sort();
        if sorted_s != sorted_t {
            return None;
        }

        let order = self.linear.clone();
        let mut image = vec![usize::MAX; self.len()];
        let mut used = vec![false; other.len()];

        fn extend(
            k: usize,
            order: &[usize],
            s: &FinitePoset,
            t: &FinitePoset,
            sig_s: &[(isize, usize, usize, usize)],
            sig_t: &[(isize, usize, usize, usize)],
            image: &mut Vec<usize>,
            used: &mut Vec<bool>,
        ) -> bool {
            if k == order.len() {
                return true;
            }
            let x = order[k];
            for y in 0..t.len() {
                if used[y] || sig_s[x] != sig_t[y] {
                    continue;
                }
                let consistent = order[..k].iter().all(|&z| {
                    let iz = image[z];
                    s.leq(z, x) == t.leq(iz, y) && s.leq(x, z) == t.leq(y, iz)
                });
                if !consistent {
                    continue;
                }
                image[x] = y;
                used[y] = true;
                if extend(k + 1, order, s, t, sig_s, sig_t, image, used) {
                    return true;
                }
                used[y] = false;
                image[x] = usize::MAX;
            }
            false
        }

        extend(0, &order, self, other, &sig_s, &sig_t, &mut image, &mut used).then_some(image)
    }
}

/// A poset element id as it appears in JSON: a string or an integer.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Int(i64),
    Str(String),
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Label::Int(i) => write!(f, "{i}"),
            Label::Str(s) => f.write_str(s),
        }
    }
}

/// `{"elements":[...], "covers":[[lo,hi],...]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetJson {
    pub elements: Vec<Label>,
    pub covers: Vec<[Label; 2]>,
}
