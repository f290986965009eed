use minkowski_core::graphs::MetricGraph;
use minkowski_core::homology::{klein_bottle, orientable_surface, SimplicialComplex};
use minkowski_core::lattice::{NormBody, VolumeConfig};
use minkowski_core::multilinear::{BalancedInvariant, Gf2Tensor};
use minkowski_core::Error;

/// Kuhn triangulation of the 3-torus on the 3×3×3 grid: every unit cube is
/// cut into six tetrahedra along monotone lattice paths.
fn torus3() -> SimplicialComplex {
    let id = |x: usize, y: usize, z: usize| (x % 3) * 9 + (y % 3) * 3 + z % 3;
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut tets = Vec::new();
    for x in 0..3 {
        for y in 0..3 {
            for z in 0..3 {
                for p in perms {
                    let mut c = [x, y, z];
                    let mut tet = vec![id(c[0], c[1], c[2])];
                    for axis in p {
                        c[axis] += 1;
                        tet.push(id(c[0], c[1], c[2]));
                    }
                    tets.push(tet);
                }
            }
        }
    }
    SimplicialComplex::build(&tets).unwrap()
}

#[test]
fn three_torus_cup_form() {
    let t3 = torus3();
    assert_eq!(t3.vertex_count(), 27);
    assert_eq!(t3.simplices(3).len(), 162);
    assert!(t3.is_closed_pseudomanifold(3));
    assert_eq!(t3.betti1_z2(), 3);
    let form = t3.fundamental_form().unwrap();
    // a ∪ a = 0 on T³ and a₁ ∪ a₂ ∪ a₃ evaluates to det of the basis change,
    // so in any basis the form is 1 exactly on distinct index triples.
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let distinct = i != j && j != k && i != k;
                assert_eq!(form.tensor.entry(&[i, j, k]).unwrap(), distinct);
            }
        }
    }
    assert!(matches!(
        form.tensor.det2(),
        Err(Error::UnsupportedFormat { order: 3, dim: 3 })
    ));
}

#[test]
fn surfaces_survive_text_roundtrip() {
    for k in [orientable_surface(2).unwrap(), klein_bottle()] {
        let back = SimplicialComplex::from_text(&k.to_text()).unwrap();
        assert_eq!(back.betti1_z2(), k.betti1_z2());
        assert_eq!(back.minkowski_hypothesis(), Ok(true));
    }
}

#[test]
fn cayley_invariant_matches_dispatch_on_all_tensors() {
    let cayley = BalancedInvariant::cayley();
    for mask in 0u32..256 {
        let t = Gf2Tensor::from_fn(3, 2, |idx| mask >> (idx[0] * 4 + idx[1] * 2 + idx[2]) & 1 == 1);
        assert_eq!(cayley.evaluate(&t).unwrap(), t.det2().unwrap());
        let text = Gf2Tensor::from_text(&t.to_text()).unwrap();
        assert_eq!(text, t);
    }
}

#[test]
fn graph_roundtrip_preserves_certificate() {
    let g = MetricGraph::from_triples(
        4,
        &[(0, 1, 1.5), (1, 2, 2.0), (2, 0, 0.5), (2, 3, 1.0), (3, 0, 3.0)],
    )
    .unwrap();
    let back = MetricGraph::from_text(&g.to_text()).unwrap();
    assert_eq!(
        back.greedy_homology_basis().unwrap(),
        g.greedy_homology_basis().unwrap()
    );
}

#[test]
fn body_json_pipeline() {
    let body = NormBody::from_json(
        r#"{"dim": 2, "shape": "ellipsoid", "gram": [[2, 1], [1, 2]], "scale": 0.5773502691896258}"#,
    )
    .unwrap();
    let r = body.minkowski_second_check(&VolumeConfig::new(0)).unwrap();
    assert!(r.pass);
    assert!((r.minima.minima[0] * r.minima.minima[1] - 2.0 / 3f64.sqrt()).abs() < 1e-9);
}
