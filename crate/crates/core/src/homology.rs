//! Simplicial Z₂-cohomology of closed triangulated manifolds and the cup-product
//! form `F_M(β₁, …, βₙ) = β₁ ∪ … ∪ βₙ [M]`.
//!
//! Cup products follow the Alexander–Whitney front-face/back-face rule with
//! respect to the global vertex order, and are evaluated on the Z₂ fundamental
//! cycle (the sum of all top-dimensional simplices).

use std::collections::{BTreeSet, HashMap};

use crate::gf2::{rank_of_vectors, BitMatrix};
use crate::multilinear::Gf2Tensor;
use crate::text::{content_lines, parse_err, parse_usize_fields};
use crate::{Error, Result};

/// A finite simplicial complex given by its maximal simplices, with the full
/// face lattice and the coboundary maps in degrees 0 and 1.
#[derive(Debug, Clone)]
pub struct SimplicialComplex {
    vertex_count: usize,
    maximal: Vec<Vec<usize>>,
    faces: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
    delta0: BitMatrix,
    delta1: BitMatrix,
}

/// A Z₂-valued 1-cochain: one bit per edge, edges in the complex's edge order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cochain1(pub Vec<bool>);

impl Cochain1 {
    pub fn values(&self) -> &[bool] {
        &self.0
    }

    pub fn add(&self, other: &Cochain1) -> Cochain1 {
        Cochain1(self.0.iter().zip(&other.0).map(|(a, b)| a ^ b).collect())
    }
}

/// The cup-product form of a closed manifold in a chosen cohomology basis.
#[derive(Debug, Clone)]
pub struct CupForm {
    pub tensor: Gf2Tensor,
    pub basis: Vec<Cochain1>,
    pub provenance: String,
}

impl SimplicialComplex {
    /// Builds the complex from its maximal simplices. Vertex labels are
    /// relabelled to `0..V` in increasing order.
    pub fn build(maximal_simplices: &[Vec<usize>]) -> Result<Self> {
        if maximal_simplices.is_empty() {
            return Err(Error::MalformedSimplex("no simplices given".into()));
        }
        let mut labels = BTreeSet::new();
        for (i, s) in maximal_simplices.iter().enumerate() {
            if s.is_empty() {
                return Err(Error::MalformedSimplex(format!("simplex {i} is empty")));
            }
            let distinct: BTreeSet<_> = s.iter().collect();
            if distinct.len() != s.len() {
                return Err(Error::MalformedSimplex(format!(
                    "simplex {i} has repeated vertices: {s:?}"
                )));
            }
            labels.extend(s.iter().copied());
        }
        let relabel: HashMap<usize, usize> =
            labels.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let maximal: Vec<Vec<usize>> = maximal_simplices
            .iter()
            .map(|s| {
                let mut t: Vec<usize> = s.iter().map(|v| relabel[v]).collect();
                t.sort_unstable();
                t
            })
            .collect();

        let top = maximal.iter().map(|s| s.len() - 1).max().unwrap_or(0);
        let mut sets: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); top.max(2) + 1];
        for s in &maximal {
            for mask in 1u32..(1 << s.len()) {
                let face: Vec<usize> = (0..s.len())
                    .filter(|&i| mask >> i & 1 == 1)
                    .map(|i| s[i])
                    .collect();
                sets[face.len() - 1].insert(face);
            }
        }
        let faces: Vec<Vec<Vec<usize>>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
        let index: Vec<HashMap<Vec<usize>, usize>> = faces
            .iter()
            .map(|fs| fs.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect())
            .collect();

        let coboundary = |k: usize| -> BitMatrix {
            // δ^k : C^k → C^{k+1}, rows indexed by (k+1)-simplices.
            let mut m = BitMatrix::zeros(faces[k + 1].len(), faces[k].len());
            for (r, s) in faces[k + 1].iter().enumerate() {
                for skip in 0..s.len() {
                    let mut f = s.clone();
                    f.remove(skip);
                    m.set(r, index[k][&f], true);
                }
            }
            m
        };
        let delta0 = coboundary(0);
        let delta1 = coboundary(1);
        Ok(Self {
            vertex_count: labels.len(),
            maximal,
            faces,
            index,
            delta0,
            delta1,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Largest simplex dimension present.
    pub fn dimension(&self) -> usize {
        self.maximal.iter().map(|s| s.len() - 1).max().unwrap_or(0)
    }

    /// All `k`-simplices as sorted vertex lists.
    pub fn simplices(&self, k: usize) -> &[Vec<usize>] {
        self.faces.get(k).map_or(&[], |f| f.as_slice())
    }

    pub fn maximal_simplices(&self) -> &[Vec<usize>] {
        &self.maximal
    }

    pub fn edge_count(&self) -> usize {
        self.faces[1].len()
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let key = if u < v { vec![u, v] } else { vec![v, u] };
        self.index[1].get(&key).copied()
    }

    pub fn coboundary0(&self) -> &BitMatrix {
        &self.delta0
    }

    pub fn coboundary1(&self) -> &BitMatrix {
        &self.delta1
    }

    /// Every `(n-1)`-simplex lies in exactly two `n`-simplices, every simplex is
    /// a face of an `n`-simplex, and the `n`-simplices are connected through
    /// shared `(n-1)`-faces.
    pub fn is_closed_pseudomanifold(&self, n: usize) -> bool {
        if n == 0 || self.dimension() != n {
            return false;
        }
        if self.maximal.iter().any(|s| s.len() != n + 1 && !self.is_face_of_top(s, n)) {
            return false;
        }
        let tops = &self.faces[n];
        let mut cofaces: Vec<Vec<usize>> = vec![Vec::new(); self.faces[n - 1].len()];
        for (t, s) in tops.iter().enumerate() {
            for skip in 0..s.len() {
                let mut f = s.clone();
                f.remove(skip);
                cofaces[self.index[n - 1][&f]].push(t);
            }
        }
        if cofaces.iter().any(|c| c.len() != 2) {
            return false;
        }
        let mut parent: Vec<usize> = (0..tops.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for c in &cofaces {
            let (a, b) = (find(&mut parent, c[0]), find(&mut parent, c[1]));
            parent[a] = b;
        }
        let root = find(&mut parent, 0);
        (0..tops.len()).all(|t| find(&mut parent, t) == root)
    }

    fn is_face_of_top(&self, s: &[usize], n: usize) -> bool {
        self.faces[n]
            .iter()
            .any(|t| s.iter().all(|v| t.binary_search(v).is_ok()))
    }

    /// `dim H¹(K; Z₂) = dim ker δ¹ − rank δ⁰`.
    pub fn betti1_z2(&self) -> usize {
        self.edge_count() - self.delta1.rank() - self.delta0.rank()
    }

    pub fn is_cocycle(&self, c: &Cochain1) -> bool {
        c.0.len() == self.edge_count()
            && self
                .delta1
                .mul_vec(&c.0)
                .map(|v| v.iter().all(|&b| !b))
                .unwrap_or(false)
    }

    /// The coboundary of a 0-cochain (one bit per vertex).
    pub fn coboundary_of(&self, vertex_values: &[bool]) -> Result<Cochain1> {
        Ok(Cochain1(self.delta0.mul_vec(vertex_values)?))
    }

    /// Cocycles whose classes form a basis of `H¹(K; Z₂)`.
    pub fn cohomology_basis_1(&self) -> Result<Vec<Cochain1>> {
        let b = self.betti1_z2();
        if b == 0 {
            return Err(Error::TrivialCohomology);
        }
        let e = self.edge_count();
        let mut stack: Vec<Vec<bool>> = self.delta0.transpose().to_rows();
        let mut rank = rank_of_vectors(&stack, e);
        let mut basis = Vec::with_capacity(b);
        for z in self.delta1.nullspace() {
            stack.push(z.clone());
            let r = rank_of_vectors(&stack, e);
            if r > rank {
                rank = r;
                basis.push(Cochain1(z));
                if basis.len() == b {
                    break;
                }
            } else {
                stack.pop();
            }
        }
        debug_assert_eq!(basis.len(), b);
        Ok(basis)
    }

    /// `α₁ ∪ … ∪ αₙ [K]`: the sum over top simplices `[v₀ < … < vₙ]` of
    /// `Π_i α_i([v_{i-1}, v_i])`.
    pub fn cup_eval(&self, cocycles: &[&Cochain1]) -> Result<bool> {
        let n = self.dimension();
        if !self.is_closed_pseudomanifold(n) {
            return Err(Error::NotClosed(n));
        }
        if cocycles.len() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                got: cocycles.len(),
            });
        }
        for (i, c) in cocycles.iter().enumerate() {
            if !self.is_cocycle(c) {
                return Err(Error::NotCocycle(i));
            }
        }
        Ok(self.cup_unchecked(&self.path_edges(), cocycles))
    }

    /// For each top simplex, the edge indices `[v_{i-1}, v_i]`, `i = 1..n`.
    fn path_edges(&self) -> Vec<Vec<usize>> {
        let n = self.dimension();
        self.faces[n]
            .iter()
            .map(|s| s.windows(2).map(|w| self.index[1][&vec![w[0], w[1]]]).collect())
            .collect()
    }

    fn cup_unchecked(&self, paths: &[Vec<usize>], cocycles: &[&Cochain1]) -> bool {
        paths
            .iter()
            .filter(|p| p.iter().zip(cocycles).all(|(&e, c)| c.0[e]))
            .count()
            % 2
            == 1
    }

    /// The cup-product form in the basis returned by [`Self::cohomology_basis_1`].
    ///
    /// Every ordered argument tuple is evaluated; since cochain-level cup
    /// products commute on a cycle, the result must be symmetric.
    pub fn fundamental_form(&self) -> Result<CupForm> {
        let n = self.dimension();
        if !self.is_closed_pseudomanifold(n) {
            return Err(Error::NotClosed(n));
        }
        let basis = self.cohomology_basis_1()?;
        let paths = self.path_edges();
        let tensor = Gf2Tensor::from_fn(n, basis.len(), |idx| {
            let args: Vec<&Cochain1> = idx.iter().map(|&i| &basis[i]).collect();
            self.cup_unchecked(&paths, &args)
        });
        assert!(
            tensor.is_symmetric(),
            "cup-product form is not symmetric on cohomology: {tensor:?}"
        );
        Ok(CupForm {
            tensor,
            basis,
            provenance: format!(
                "complex(dim={n}, vertices={}, top_simplices={})",
                self.vertex_count,
                self.faces[n].len()
            ),
        })
    }

    /// `Det₂ F_K`, the hypothesis of the length-product theorem.
    pub fn minkowski_hypothesis(&self) -> Result<bool> {
        self.fundamental_form()?.tensor.det2()
    }

    /// Parses `dim vertex_count` followed by one maximal simplex per line.
    pub fn from_text(input: &str) -> Result<Self> {
        let mut lines = content_lines(input);
        let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
        let h = parse_usize_fields(hl, header, 2)?;
        let (dim, vertex_count) = (h[0], h[1]);
        let mut simplices = Vec::new();
        for (ln, line) in lines {
            let s = parse_usize_fields(ln, line, dim + 1)?;
            if let Some(v) = s.iter().find(|&&v| v >= vertex_count) {
                return Err(parse_err(
                    ln,
                    format!("vertex {v} out of range (vertex_count = {vertex_count})"),
                ));
            }
            simplices.push(s);
        }
        if simplices.is_empty() {
            return Err(parse_err(hl, "no simplices"));
        }
        Self::build(&simplices)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.dimension(), self.vertex_count);
        for t in &self.maximal {
            let line: Vec<String> = t.iter().map(|v| v.to_string()).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }
}

/// Boundary of the tetrahedron: the 4-vertex 2-sphere.
pub fn tetrahedron_boundary() -> SimplicialComplex {
    SimplicialComplex::build(&[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]])
        .expect("valid triangulation")
}

/// The 7-vertex (Möbius–Császár) torus: triangles `{i, i+1, i+3}` and
/// `{i, i+2, i+3}` modulo 7.
pub fn torus_7v() -> SimplicialComplex {
    let tris: Vec<Vec<usize>> = (0..7)
        .flat_map(|i| [vec![i, (i + 1) % 7, (i + 3) % 7], vec![i, (i + 2) % 7, (i + 3) % 7]])
        .collect();
    SimplicialComplex::build(&tris).expect("valid triangulation")
}

/// The 6-vertex real projective plane (hemi-icosahedron).
pub fn projective_plane_6v() -> SimplicialComplex {
    let tris = [
        [0, 1, 2],
        [0, 2, 3],
        [0, 3, 4],
        [0, 4, 5],
        [0, 5, 1],
        [1, 2, 4],
        [2, 3, 5],
        [3, 4, 1],
        [4, 5, 2],
        [5, 1, 3],
    ];
    SimplicialComplex::build(&tris.map(|t| t.to_vec())).expect("valid triangulation")
}

/// Connected sum of two closed surfaces: one triangle is removed from each and
/// the boundary circles are identified vertex by vertex.
///
/// The second summand's other vertices receive fresh labels, so the only
/// identified simplices are the three boundary edges and their endpoints and
/// the quotient is again a simplicial surface.
pub fn connected_sum(a: &SimplicialComplex, b: &SimplicialComplex) -> Result<SimplicialComplex> {
    if !a.is_closed_pseudomanifold(2) || !b.is_closed_pseudomanifold(2) {
        return Err(Error::NotASurface);
    }
    let removed_a = a.faces[2].last().expect("surface has triangles").clone();
    let removed_b = b.faces[2][0].clone();
    let offset = a.vertex_count;
    let map = |v: usize| -> usize {
        match removed_b.iter().position(|&w| w == v) {
            Some(k) => removed_a[k],
            None => offset + v,
        }
    };
    let tris: Vec<Vec<usize>> = a.faces[2]
        .iter()
        .filter(|t| **t != removed_a)
        .cloned()
        .chain(
            b.faces[2]
                .iter()
                .filter(|t| **t != removed_b)
                .map(|t| t.iter().map(|&v| map(v)).collect()),
        )
        .collect();
    let sum = SimplicialComplex::build(&tris)?;
    if !sum.is_closed_pseudomanifold(2) {
        return Err(Error::NotASurface);
    }
    Ok(sum)
}

/// Connected sum of `g ≥ 1` copies of the 7-vertex torus.
pub fn orientable_surface(g: usize) -> Result<SimplicialComplex> {
    repeated_sum(g, torus_7v)
}

/// Connected sum of `k ≥ 1` copies of the 6-vertex projective plane.
pub fn nonorientable_surface(k: usize) -> Result<SimplicialComplex> {
    repeated_sum(k, projective_plane_6v)
}

pub fn klein_bottle() -> SimplicialComplex {
    nonorientable_surface(2).expect("sum of projective planes")
}

fn repeated_sum(count: usize, piece: fn() -> SimplicialComplex) -> Result<SimplicialComplex> {
    if count == 0 {
        return Err(Error::NotASurface);
    }
    let mut acc = piece();
    for _ in 1..count {
        acc = connected_sum(&acc, &piece())?;
    }
    Ok(acc)
}

/// The cup-product form of `ℝP³ # ℝP³` in the Poincaré-dual basis:
/// `F₁₁₁ = F₂₂₂ = 1`, all other coefficients zero.
pub fn rp3_connected_sum_form() -> Gf2Tensor {
    Gf2Tensor::with_ones(3, 2, &[&[0, 0, 0], &[1, 1, 1]]).expect("in range")
}
