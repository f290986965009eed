//! Named inputs that can stand in for a file argument.

use minkowski_core::graphs::MetricGraph;
use minkowski_core::homology::{self, SimplicialComplex};
use minkowski_core::lattice::NormBody;
use minkowski_core::multilinear::Gf2Tensor;
use minkowski_core::symplectic::AlternatingForm;
use minkowski_core::Result;

fn numbered(name: &str, prefix: &str) -> Option<usize> {
    name.strip_prefix(prefix)?.parse().ok()
}

pub fn tensor(name: &str) -> Option<Result<Gf2Tensor>> {
    match name {
        "rp3-rp3" | "rp3#rp3" => Some(Ok(homology::rp3_connected_sum_form())),
        _ => None,
    }
}

pub fn complex(name: &str) -> Option<Result<SimplicialComplex>> {
    let c = match name {
        "sphere" | "tetrahedron" => Ok(homology::tetrahedron_boundary()),
        "torus" => Ok(homology::torus_7v()),
        "rp2" | "projective-plane" => Ok(homology::projective_plane_6v()),
        "klein" | "klein-bottle" => Ok(homology::klein_bottle()),
        _ => {
            if let Some(g) = numbered(name, "genus") {
                homology::orientable_surface(g)
            } else if let Some(k) = numbered(name, "nonorientable") {
                homology::nonorientable_surface(k)
            } else {
                return None;
            }
        }
    };
    Some(c)
}

pub fn graph(name: &str) -> Option<Result<MetricGraph>> {
    let g = match name {
        "theta" => MetricGraph::from_triples(2, &[(0, 1, 1.0), (0, 1, 1.0), (0, 1, 1.0)]),
        "k4" => MetricGraph::from_triples(
            4,
            &[
                (0, 1, 1.0),
                (0, 2, 1.0),
                (0, 3, 1.0),
                (1, 2, 1.0),
                (1, 3, 1.0),
                (2, 3, 1.0),
            ],
        ),
        _ => return None,
    };
    Some(g)
}

pub fn body(name: &str) -> Option<Result<NormBody>> {
    if name == "hexagonal" {
        return Some(Ok(NormBody::hexagonal()));
    }
    if let Some(n) = numbered(name, "cube") {
        return Some(NormBody::p_ball(f64::INFINITY, vec![1.0; n]));
    }
    if let Some(n) = numbered(name, "euclidean") {
        return Some(NormBody::p_ball(2.0, vec![1.0; n]));
    }
    None
}

pub fn form(name: &str) -> Option<Result<AlternatingForm>> {
    let n = numbered(name, "symplectic")?;
    if n % 2 == 1 {
        return Some(Err(minkowski_core::Error::OddDimension(n)));
    }
    Some(Ok(AlternatingForm::standard_gf2(n / 2)))
}
