use std::collections::{BTreeMap, BTreeSet};

use msl_core::cell::{Cell, CellComplex};
use msl_core::homology::betti_both;
use msl_core::morse::{compose_matchings, critical_census, is_acyclic_matching, joinup_matching, HasseDiagram};
use msl_core::{betti, join_betti, BettiVector, Field, FinitePoset, GeometricLattice, Simplex, SimplicialComplex};
use proptest::prelude::*;

fn complex_strategy(max_vertices: u32) -> impl Strategy<Value = SimplicialComplex> {
    (1..=max_vertices).prop_flat_map(|n| {
        prop::collection::vec(1u32..(1 << n), 1..=4).prop_map(move |masks| {
            let facets = masks.iter().map(|m| (0..n).filter(|v| m >> v & 1 == 1).collect()).collect();
            SimplicialComplex::from_facets((0..n).map(|v| format!("v{v}")).collect(), facets).unwrap()
        })
    })
}

/// A random poset on n elements: i < j whenever the pair is chosen and
/// i < j as integers, closed transitively.
fn poset_strategy() -> impl Strategy<Value = FinitePoset> {
    (1usize..=7).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            let mut le = vec![false; n * n];
            for i in 0..n {
                le[i * n + i] = true;
                for j in i + 1..n {
                    le[i * n + j] = bits[i * n + j];
                }
            }
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        if le[i * n + k] && le[k * n + j] {
                            le[i * n + j] = true;
                        }
                    }
                }
            }
            FinitePoset::from_order((0..n).map(|i| i.to_string()).collect(), |i, j| le[i * n + j]).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn join_betti_matches_matrix_homology(a in complex_strategy(4), b in complex_strategy(4)) {
        let joined = a.join(&b);
        for field in Field::ALL {
            let expected = join_betti(&betti(a.as_cell_complex(), field).unwrap(), &betti(b.as_cell_complex(), field).unwrap()).unwrap();
            prop_assert_eq!(betti(joined.as_cell_complex(), field).unwrap(), expected);
        }
    }

    #[test]
    fn join_f_vector_is_a_convolution(a in complex_strategy(5), b in complex_strategy(5)) {
        let (fa, fb) = (a.f_vector(), b.f_vector());
        let mut expected = vec![0usize; fa.len() + fb.len() - 1];
        for (i, x) in fa.iter().enumerate() {
            for (j, y) in fb.iter().enumerate() {
                expected[i + j] += x * y;
            }
        }
        prop_assert_eq!(a.join(&b).f_vector(), expected);
    }

    #[test]
    fn face_poset_of_a_join_is_a_product(a in complex_strategy(3), b in complex_strategy(3)) {
        // Faces of A ∗ B correspond to pairs of faces (empty allowed) other
        // than (∅, ∅), ordered componentwise.
        let fa: Vec<Simplex> = std::iter::once(Simplex::new([])).chain(a.simplices().iter().cloned()).collect();
        let fb: Vec<Simplex> = std::iter::once(Simplex::new([])).chain(b.simplices().iter().cloned()).collect();
        let pairs: Vec<(usize, usize)> = (0..fa.len())
            .flat_map(|i| (0..fb.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| i + j > 0)
            .collect();
        let product = FinitePoset::from_order(
            pairs.iter().map(|p| format!("{p:?}")).collect(),
            |x, y| fa[pairs[x].0].is_face_of(&fa[pairs[y].0]) && fb[pairs[x].1].is_face_of(&fb[pairs[y].1]),
        ).unwrap();
        let joined = a.join(&b).face_poset();
        prop_assert!(joined.find_isomorphism(&product).is_some());
    }

    #[test]
    fn mobius_telescopes(p in poset_strategy()) {
        for a in 0..p.len() {
            for b in 0..p.len() {
                if !p.leq(a, b) {
                    prop_assert!(p.mobius(a, b).is_err());
                    continue;
                }
                let sum: i64 = (0..p.len()).filter(|&z| p.leq(a, z) && p.leq(z, b)).map(|z| p.mobius(a, z).unwrap()).sum();
                prop_assert_eq!(sum, i64::from(a == b));
            }
        }
    }

    #[test]
    fn order_complex_dimension_is_the_height(p in poset_strategy()) {
        prop_assert_eq!(p.order_complex().dim(), p.height());
    }

    #[test]
    fn mobius_is_the_reduced_euler_characteristic_of_open_intervals(p in poset_strategy()) {
        // Hall's theorem, checked against matrix homology.
        for a in 0..p.len() {
            for b in 0..p.len() {
                if !p.lt(a, b) {
                    continue;
                }
                let (interval, _) = p.open_interval(a, b);
                let bv = betti(interval.order_complex().as_cell_complex(), Field::Rational).unwrap();
                let reduced_euler: i64 = bv.values().iter().enumerate().map(|(i, &v)| if i % 2 == 0 { -(v as i64) } else { v as i64 }).sum();
                prop_assert_eq!(p.mobius(a, b).unwrap(), reduced_euler);
            }
        }
    }

    #[test]
    fn complexes_here_are_torsion_free(x in complex_strategy(5)) {
        let (q, f2) = betti_both(x.as_cell_complex()).unwrap();
        prop_assert_eq!(q.values(), f2.values());
    }

    #[test]
    fn fiberwise_acyclic_matchings_compose(x in complex_strategy(5), seed in any::<u64>()) {
        // Fibers of "largest vertex", an order-preserving map to a chain.
        let c = x.as_cell_complex();
        let top = |s: &Simplex| *s.vertices().last().unwrap();
        let mut state = seed;
        let mut fibers: BTreeMap<u32, Vec<(Simplex, Simplex)>> = BTreeMap::new();
        for v in 0..x.num_vertices() as u32 {
            let fiber = CellComplex::closure_of(c.cells().iter().filter(|s| top(s) == v).cloned());
            let hasse = HasseDiagram::new(&fiber);
            let mut used = BTreeSet::new();
            let mut chosen = Vec::new();
            for (up, down) in hasse.arrows() {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                if state >> 62 == 0 || top(&up) != v || top(&down) != v || used.contains(&up) || used.contains(&down) {
                    continue;
                }
                chosen.push((up.clone(), down.clone()));
                if is_acyclic_matching(&hasse, &chosen).unwrap().is_acyclic() {
                    used.insert(up);
                    used.insert(down);
                } else {
                    chosen.pop();
                }
            }
            fibers.insert(v, chosen);
        }
        let matching = compose_matchings(c, top, |a, b| a <= b, &fibers).unwrap();
        let b = betti(c, Field::Rational).unwrap();
        let census = critical_census(c, &matching, &b);
        prop_assert!(census.euler_matches());
        prop_assert!(census.morse_inequalities_hold);
    }

    #[test]
    fn joinup_on_random_factors(a in complex_strategy(3), b in complex_strategy(3), c in complex_strategy(2)) {
        let (join, j) = joinup_matching(&[a, b, c], None).unwrap();
        let bv = betti(join.as_cell_complex(), Field::Rational).unwrap();
        let census = critical_census(join.as_cell_complex(), &j.matching, &bv);
        prop_assert!(census.euler_matches());
        prop_assert!(census.morse_inequalities_hold);
        prop_assert!(j.z.cells().iter().all(|s| s == &j.critical_vertex || j.matching.matched_cells().contains(s)));
        prop_assert_eq!(j.critical_vertex.dim(), 0);
    }

    #[test]
    fn uniform_intervals_are_wedges_of_spheres(r in 1usize..=3, extra in 0usize..=2) {
        let m = GeometricLattice::uniform(r, r + extra).unwrap();
        for p in 0..m.len() {
            if p == m.bottom() {
                continue;
            }
            let (interval, _) = m.poset().open_interval(m.bottom(), p);
            let bv = betti(interval.order_complex().as_cell_complex(), Field::Rational).unwrap();
            let mu = m.mobius(m.bottom(), p).unwrap();
            prop_assert_eq!(bv, BettiVector::wedge_of_spheres(Field::Rational, m.rank_of(p) as isize - 2, mu.unsigned_abs()));
        }
    }

    #[test]
    fn betti_json_round_trip(values in prop::collection::vec(0u64..5, 1..6)) {
        let b = BettiVector::new(Field::Gf2, values);
        let text = serde_json::to_string(&b.to_json()).unwrap();
        let back = BettiVector::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(back, b);
    }
}
