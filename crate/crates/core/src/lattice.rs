//! Flat Finsler tori `(ℝⁿ/ℤⁿ, ‖·‖_K)` described by a symmetric convex body `K`.
//!
//! Successive minima are computed exactly by enumerating integer points in
//! growing norm balls. Ellipsoids with rational Gram matrices compare lattice
//! points by their exact integer quadratic form; every other body compares in
//! binary64.

use nalgebra::{DMatrix, DVector};
use num_integer::Integer;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use statrs::function::gamma::gamma;

use crate::{Error, Result};

/// Largest dimension accepted by [`NormBody::successive_minima`].
pub const MAX_MINIMA_DIM: usize = 6;
/// Largest dimension accepted by [`NormBody::count_geodesics`].
pub const MAX_COUNT_DIM: usize = 4;
/// Largest number of lattice points a single enumeration may visit.
pub const ENUMERATION_BUDGET: f64 = 1e8;
pub const DEFAULT_MC_SAMPLES: usize = 1_000_000;

/// Relative slack for float inclusion tests; ties resolve toward inclusion.
const INCLUSION_SLACK: f64 = 1e-12;

/// Lebesgue measure `b_n = π^{n/2} / Γ(n/2 + 1)` of the Euclidean unit ball.
pub fn unit_ball_volume(n: usize) -> f64 {
    std::f64::consts::PI.powf(n as f64 / 2.0) / gamma_fn(n as f64 / 2.0 + 1.0)
}

/// Γ(x), evaluated by its finite product at integers and half-integers.
fn gamma_fn(x: f64) -> f64 {
    let twice = 2.0 * x;
    if twice.fract() != 0.0 || x <= 0.0 || x > 60.0 {
        return gamma(x);
    }
    let (mut acc, mut y) = if x.fract() == 0.0 {
        (1.0, 1.0)
    } else {
        (std::f64::consts::PI.sqrt(), 0.5)
    };
    while y < x {
        acc *= y;
        y += 1.0;
    }
    acc
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// An ellipsoid Gram matrix of the form `scale · M` with `M` integral.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegerGram {
    pub entries: Vec<i64>,
    pub scale: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    /// `‖x‖ = (Σ |x_i / s_i|^p)^{1/p}`, `p ∈ [1, ∞]`.
    PBall { p: f64, scales: Vec<f64> },
    /// `‖x‖ = √(xᵀAx)` with `A` symmetric positive definite (row-major).
    Ellipsoid {
        gram: Vec<f64>,
        exact: Option<IntegerGram>,
    },
    /// `‖x‖ = max_i |⟨a_i, x⟩|`; the normals must span ℝⁿ.
    Slab { normals: Vec<Vec<f64>> },
}

/// A symmetric convex body, identified with the norm it induces.
#[derive(Debug, Clone, PartialEq)]
pub struct NormBody {
    dim: usize,
    shape: Shape,
    /// `max_{x∈K} |x_j|` for each coordinate.
    extents: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum VolumeMethod {
    Exact,
    MonteCarlo { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VolumeEstimate {
    pub value: f64,
    pub std_error: f64,
    pub method: VolumeMethod,
}

/// Monte Carlo settings used for bodies without a closed-form volume.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VolumeConfig {
    pub samples: usize,
    pub seed: u64,
}

impl VolumeConfig {
    pub fn new(seed: u64) -> Self {
        Self {
            samples: DEFAULT_MC_SAMPLES,
            seed,
        }
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimaResult {
    pub minima: Vec<f64>,
    pub vectors: Vec<Vec<i64>>,
    pub volume: VolumeEstimate,
    /// `∏ λ_k · vol(K) / 2ⁿ`.
    pub minkowski_ratio: f64,
    /// One standard error of the ratio (zero for exact volumes).
    pub ratio_std_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinkowskiReport {
    pub dim: usize,
    pub minima: MinimaResult,
    pub ratio: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EqMinkReport {
    /// `∏ ℓ(γ_k) = ∏ λ_k`.
    pub length_product: f64,
    pub bh_volume: f64,
    /// `2ⁿ / b_n · V`.
    pub bound: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EqStabReport {
    pub dim: usize,
    pub unit_ball_volume: f64,
    /// Growth coefficient of Riemannian balls in the abelian cover.
    pub omega_ab: f64,
    pub stable_ball_measure: f64,
    pub riemannian_volume: f64,
    /// `μ(B) · vol(M)`.
    pub rhs: f64,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropStabReport {
    pub stable_ball_measure: f64,
    pub lengths: Vec<f64>,
    /// `μ(B) · ∏ ℓ(γ_k)`.
    pub lhs: f64,
    /// `2ⁿ / n!`.
    pub rhs: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeodesicGrowthReport {
    pub dim: usize,
    pub riemannian_volume: f64,
    /// `μ(B)`, the leading coefficient of `N(t)`.
    pub stable_ball_measure: f64,
    /// `2ᵇ / (V^{b/n} · nᵇ · b!)` with `b = n`.
    pub lower_bound: f64,
    pub pass: bool,
}

impl NormBody {
    fn with_shape(dim: usize, shape: Shape) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidBody("dimension must be positive".into()));
        }
        let extents = compute_extents(dim, &shape)?;
        Ok(Self {
            dim,
            shape,
            extents,
        })
    }

    /// The `p`-ball `{x : Σ |x_i/s_i|^p ≤ 1}`; `p = f64::INFINITY` gives a box.
    pub fn p_ball(p: f64, scales: Vec<f64>) -> Result<Self> {
        if !(p >= 1.0) {
            return Err(Error::InvalidBody(format!("p = {p} must be at least 1")));
        }
        if scales.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
            return Err(Error::InvalidBody("scales must be positive".into()));
        }
        Self::with_shape(scales.len(), Shape::PBall { p, scales })
    }

    pub fn euclidean(n: usize) -> Self {
        Self::p_ball(2.0, vec![1.0; n]).expect("valid body")
    }

    /// The unit ∞-ball `[-1, 1]ⁿ`.
    pub fn cube(n: usize) -> Self {
        Self::p_ball(f64::INFINITY, vec![1.0; n]).expect("valid body")
    }

    /// Ellipsoid `{x : xᵀAx ≤ 1}` from a real Gram matrix.
    pub fn ellipsoid(gram: &[Vec<f64>]) -> Result<Self> {
        let n = gram.len();
        let flat = flatten_square(gram)?;
        Self::with_shape(
            n,
            Shape::Ellipsoid {
                gram: flat,
                exact: None,
            },
        )
    }

    /// Ellipsoid with Gram matrix `scale · Q` where `Q` is rational. Lattice
    /// points are ordered by the exact value of `xᵀQx`.
    pub fn rational_ellipsoid(entries: &[Vec<Ratio<i64>>], scale: f64) -> Result<Self> {
        let n = entries.len();
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidBody("scale must be positive".into()));
        }
        let denom = entries
            .iter()
            .flatten()
            .fold(1i64, |acc, r| acc.lcm(r.denom()));
        let mut ints = Vec::with_capacity(n * n);
        for row in entries {
            if row.len() != n {
                return Err(Error::InvalidBody("Gram matrix must be square".into()));
            }
            for r in row {
                ints.push(r.numer() * (denom / r.denom()));
            }
        }
        Self::integer_ellipsoid(ints, n, scale / denom as f64)
    }

    /// Ellipsoid with Gram matrix `scale · M`, `M` integral and row-major.
    pub fn integer_ellipsoid(entries: Vec<i64>, n: usize, scale: f64) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::InvalidBody("Gram matrix must be square".into()));
        }
        let gram = entries.iter().map(|&m| m as f64 * scale).collect();
        Self::with_shape(
            n,
            Shape::Ellipsoid {
                gram,
                exact: Some(IntegerGram { entries, scale }),
            },
        )
    }

    /// The unit-area hexagonal flat torus: Gram `c·[[1, ½], [½, 1]]` with
    /// `c = 2/√3`, so that `√det = 1`.
    pub fn hexagonal() -> Self {
        Self::integer_ellipsoid(vec![2, 1, 1, 2], 2, 1.0 / 3f64.sqrt()).expect("valid body")
    }

    /// Polytope `{x : |⟨a_i, x⟩| ≤ 1 ∀i}`.
    pub fn slab(normals: Vec<Vec<f64>>) -> Result<Self> {
        let n = normals.first().map_or(0, Vec::len);
        if normals.iter().any(|a| a.len() != n) {
            return Err(Error::InvalidBody("normals must share a dimension".into()));
        }
        Self::with_shape(n, Shape::Slab { normals })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn extents(&self) -> &[f64] {
        &self.extents
    }

    pub fn is_ellipsoid(&self) -> bool {
        matches!(self.shape, Shape::Ellipsoid { .. })
    }

    /// The dilate `sK`, whose norm is `‖·‖_K / s`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::InvalidBody("scale factor must be positive".into()));
        }
        let shape = match &self.shape {
            Shape::PBall { p, scales } => Shape::PBall {
                p: *p,
                scales: scales.iter().map(|x| x * s).collect(),
            },
            Shape::Ellipsoid { gram, exact } => Shape::Ellipsoid {
                gram: gram.iter().map(|g| g / (s * s)).collect(),
                exact: exact.as_ref().map(|e| IntegerGram {
                    entries: e.entries.clone(),
                    scale: e.scale / (s * s),
                }),
            },
            Shape::Slab { normals } => Shape::Slab {
                normals: normals
                    .iter()
                    .map(|a| a.iter().map(|x| x / s).collect())
                    .collect(),
            },
        };
        Self::with_shape(self.dim, shape)
    }

    /// The gauge `‖x‖_K`.
    pub fn norm(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(self.norm_unchecked(x))
    }

    fn norm_unchecked(&self, x: &[f64]) -> f64 {
        match &self.shape {
            Shape::PBall { p, scales } => {
                let scaled = x.iter().zip(scales).map(|(xi, s)| (xi / s).abs());
                if p.is_infinite() {
                    scaled.fold(0.0, f64::max)
                } else if *p == 1.0 {
                    scaled.sum()
                } else if *p == 2.0 {
                    scaled.map(|v| v * v).sum::<f64>().sqrt()
                } else {
                    scaled.map(|v| v.powf(*p)).sum::<f64>().powf(1.0 / p)
                }
            }
            Shape::Ellipsoid { gram, .. } => quadratic_form(gram, x).max(0.0).sqrt(),
            Shape::Slab { normals } => normals
                .iter()
                .map(|a| dot(a, x).abs())
                .fold(0.0, f64::max),
        }
    }

    fn lattice_norm(&self, x: &[i64]) -> f64 {
        match &self.shape {
            Shape::Ellipsoid {
                exact: Some(e), ..
            } => (e.scale * integer_quadratic_form(&e.entries, x) as f64).sqrt(),
            _ => {
                let xf: Vec<f64> = x.iter().map(|&v| v as f64).collect();
                self.norm_unchecked(&xf)
            }
        }
    }

    fn exact_key(&self, x: &[i64]) -> Option<i128> {
        match &self.shape {
            Shape::Ellipsoid {
                exact: Some(e), ..
            } => Some(integer_quadratic_form(&e.entries, x)),
            _ => None,
        }
    }

    /// Number of lattice points in the box containing the ball of radius `r`.
    fn box_bounds(&self, r: f64) -> (Vec<i64>, f64) {
        let bounds: Vec<i64> = self
            .extents
            .iter()
            .map(|e| (r * e * (1.0 + 1e-9)).floor() as i64)
            .collect();
        let count = bounds.iter().map(|&b| (2 * b + 1) as f64).product();
        (bounds, count)
    }

    /// Successive minima `λ₁ ≤ … ≤ λₙ` with integer vectors realising them.
    ///
    /// Candidates are sorted by norm (exactly, for rational ellipsoids), then
    /// by Euclidean length, then in decreasing lexicographic order of the
    /// sign-normalised coordinates, and selected greedily while independent.
    pub fn lattice_minima(&self) -> Result<(Vec<f64>, Vec<Vec<i64>>)> {
        let n = self.dim;
        if n > MAX_MINIMA_DIM {
            return Err(Error::DimensionTooLarge {
                dim: n,
                limit: MAX_MINIMA_DIM,
            });
        }
        let basis_norms: Vec<f64> = (0..n)
            .map(|k| {
                let mut e = vec![0i64; n];
                e[k] = 1;
                self.lattice_norm(&e)
            })
            .collect();
        let r_max = basis_norms.iter().copied().fold(0.0, f64::max);
        let mut r = basis_norms.iter().copied().fold(f64::INFINITY, f64::min);
        loop {
            let radius = r * (1.0 + 1e-9);
            let (bounds, count) = self.box_bounds(radius);
            if count > ENUMERATION_BUDGET {
                return Err(Error::BudgetExceeded {
                    points: count,
                    budget: ENUMERATION_BUDGET,
                });
            }
            let mut candidates: Vec<(f64, Option<i128>, i64, Vec<i64>)> = Vec::new();
            for_each_in_box(&bounds, |x| {
                let Some(&lead) = x.iter().find(|&&v| v != 0) else {
                    return;
                };
                if lead < 0 {
                    return;
                }
                let norm = self.lattice_norm(x);
                if norm <= radius {
                    let euclid = x.iter().map(|v| v * v).sum();
                    candidates.push((norm, self.exact_key(x), euclid, x.to_vec()));
                }
            });
            candidates.sort_by(|a, b| {
                let primary = match (a.1, b.1) {
                    (Some(qa), Some(qb)) => qa.cmp(&qb),
                    _ => a.0.total_cmp(&b.0),
                };
                primary.then(a.2.cmp(&b.2)).then(b.3.cmp(&a.3))
            });
            let mut chosen: Vec<Vec<i64>> = Vec::with_capacity(n);
            let mut minima = Vec::with_capacity(n);
            for (norm, _, _, x) in candidates {
                chosen.push(x);
                if integer_rank(&chosen) == chosen.len() {
                    minima.push(norm);
                    if chosen.len() == n {
                        return Ok((minima, chosen));
                    }
                } else {
                    chosen.pop();
                }
            }
            assert!(r < r_max, "the standard basis lies within the largest radius");
            r = (2.0 * r).min(r_max);
        }
    }

    /// Successive minima together with `vol(K)` and the Minkowski ratio.
    pub fn successive_minima(&self, cfg: &VolumeConfig) -> Result<MinimaResult> {
        let (minima, vectors) = self.lattice_minima()?;
        let volume = self.volume(cfg);
        let denom = 2f64.powi(self.dim as i32);
        let prod: f64 = minima.iter().product();
        Ok(MinimaResult {
            minkowski_ratio: prod * volume.value / denom,
            ratio_std_error: prod * volume.std_error / denom,
            minima,
            vectors,
            volume,
        })
    }

    /// Lebesgue volume of `K`: closed form for p-balls and ellipsoids, seeded
    /// Monte Carlo over the bounding box for slab polytopes.
    pub fn volume(&self, cfg: &VolumeConfig) -> VolumeEstimate {
        let n = self.dim as f64;
        let exact = |value| VolumeEstimate {
            value,
            std_error: 0.0,
            method: VolumeMethod::Exact,
        };
        match &self.shape {
            Shape::PBall { p, scales } => {
                let sides: f64 = scales.iter().map(|s| 2.0 * s).product();
                if p.is_infinite() {
                    exact(sides)
                } else {
                    exact(sides * gamma_fn(1.0 + 1.0 / p).powf(n) / gamma_fn(1.0 + n / p))
                }
            }
            Shape::Ellipsoid { .. } => exact(unit_ball_volume(self.dim) / self.gram_det().sqrt()),
            Shape::Slab { .. } => self.monte_carlo_volume(cfg),
        }
    }

    fn monte_carlo_volume(&self, cfg: &VolumeConfig) -> VolumeEstimate {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let box_volume: f64 = self.extents.iter().map(|e| 2.0 * e).product();
        let mut x = vec![0.0; self.dim];
        let mut hits = 0usize;
        for _ in 0..cfg.samples {
            for (xi, e) in x.iter_mut().zip(&self.extents) {
                *xi = rng.gen_range(-e..=*e);
            }
            if self.norm_unchecked(&x) <= 1.0 {
                hits += 1;
            }
        }
        let n = cfg.samples.max(1) as f64;
        let frac = hits as f64 / n;
        VolumeEstimate {
            value: box_volume * frac,
            std_error: box_volume * (frac * (1.0 - frac) / n).sqrt(),
            method: VolumeMethod::MonteCarlo {
                samples: cfg.samples,
                seed: cfg.seed,
            },
        }
    }

    /// Determinant of the Gram matrix of an ellipsoid, exact when integral.
    fn gram_det(&self) -> f64 {
        match &self.shape {
            Shape::Ellipsoid {
                exact: Some(e), ..
            } => integer_det(&e.entries, self.dim) as f64 * e.scale.powi(self.dim as i32),
            Shape::Ellipsoid { gram, .. } => {
                DMatrix::from_row_slice(self.dim, self.dim, gram).determinant()
            }
            _ => panic!("gram_det on a non-ellipsoid body"),
        }
    }

    /// `∏ λ_k · vol(K) ≤ 2ⁿ`, with tolerance `3·SE` for Monte Carlo volumes and
    /// a rounding allowance of `1e-12` for exact ones.
    pub fn minkowski_second_check(&self, cfg: &VolumeConfig) -> Result<MinkowskiReport> {
        let minima = self.successive_minima(cfg)?;
        let tolerance = match minima.volume.method {
            VolumeMethod::Exact => 1e-12,
            VolumeMethod::MonteCarlo { .. } => 3.0 * minima.ratio_std_error,
        };
        Ok(MinkowskiReport {
            dim: self.dim,
            ratio: minima.minkowski_ratio,
            pass: minima.minkowski_ratio <= 1.0 + tolerance,
            tolerance,
            minima,
        })
    }

    /// Busemann–Hausdorff volume `b_n / vol(K)` of `(ℝⁿ/ℤⁿ, ‖·‖_K)`.
    pub fn bh_volume_flat_torus(&self, cfg: &VolumeConfig) -> f64 {
        unit_ball_volume(self.dim) / self.volume(cfg).value
    }

    /// Length-product form of Minkowski's second theorem:
    /// `∏ ℓ(γ_k) ≤ 2ⁿ/b_n · V` with `V` the Busemann–Hausdorff volume.
    pub fn verify_eq_mink(&self, cfg: &VolumeConfig) -> Result<EqMinkReport> {
        let (minima, _) = self.lattice_minima()?;
        let volume = self.volume(cfg);
        let bh = unit_ball_volume(self.dim) / volume.value;
        let bound = 2f64.powi(self.dim as i32) / unit_ball_volume(self.dim) * bh;
        let length_product: f64 = minima.iter().product();
        let tolerance = match volume.method {
            VolumeMethod::Exact => 1e-12,
            VolumeMethod::MonteCarlo { .. } => 3.0 * volume.std_error / volume.value,
        };
        Ok(EqMinkReport {
            length_product,
            bh_volume: bh,
            bound,
            tolerance,
            pass: length_product <= bound * (1.0 + tolerance),
        })
    }

    /// Haar measure of the unit stable-norm ball of a flat Riemannian torus,
    /// i.e. the Lebesgue volume `b_n / √det A` of its unit ball.
    pub fn stable_ball_measure_flat(&self) -> Result<f64> {
        if !self.is_ellipsoid() {
            return Err(Error::NotRiemannianFlat);
        }
        Ok(unit_ball_volume(self.dim) / self.gram_det().sqrt())
    }

    /// Riemannian volume `√det A` of the flat torus, from the Cholesky factor.
    fn riemannian_volume(&self) -> Result<f64> {
        let Shape::Ellipsoid { gram, .. } = &self.shape else {
            return Err(Error::NotRiemannianFlat);
        };
        let chol = DMatrix::from_row_slice(self.dim, self.dim, gram)
            .cholesky()
            .ok_or_else(|| Error::InvalidBody("Gram matrix is not positive definite".into()))?;
        Ok(chol.l().diagonal().iter().product())
    }

    /// Compares the ball-growth coefficient `Ω_ab` of the universal abelian
    /// cover with `μ(B) · vol(M)`.
    ///
    /// `Ω_ab` is measured as `vol_g B(R) / Rⁿ` at several radii: the metric ball
    /// `{xᵀAx ≤ R²}` is the image of a Euclidean `R`-ball under `L^{-T}`
    /// (`A = LLᵀ`), weighted by the Riemannian density `√det A` taken from the
    /// (exact, when available) determinant.
    pub fn verify_eq_stab(&self) -> Result<EqStabReport> {
        let Shape::Ellipsoid { gram, .. } = &self.shape else {
            return Err(Error::NotRiemannianFlat);
        };
        let n = self.dim;
        let b_n = unit_ball_volume(n);
        let chol = DMatrix::from_row_slice(n, n, gram)
            .cholesky()
            .ok_or_else(|| Error::InvalidBody("Gram matrix is not positive definite".into()))?;
        let jacobian: f64 = chol.l().diagonal().iter().map(|d| 1.0 / d).product();
        let density = self.gram_det().sqrt();
        let mut omega_ab = 0.0;
        let mut spread: f64 = 0.0;
        for radius in [1.0f64, 10.0, 1000.0] {
            let lebesgue = b_n * radius.powi(n as i32) * jacobian;
            let coefficient = lebesgue * density / radius.powi(n as i32);
            if omega_ab != 0.0 {
                spread = spread.max((coefficient - omega_ab).abs());
            }
            omega_ab = coefficient;
        }
        let mu = self.stable_ball_measure_flat()?;
        let vol = self.riemannian_volume()?;
        let rhs = mu * vol;
        let max_deviation = [
            (omega_ab - rhs).abs(),
            (omega_ab - b_n).abs(),
            (rhs - b_n).abs(),
            spread,
        ]
        .into_iter()
        .fold(0.0, f64::max);
        let tolerance = 1e-12;
        Ok(EqStabReport {
            dim: n,
            unit_ball_volume: b_n,
            omega_ab,
            stable_ball_measure: mu,
            riemannian_volume: vol,
            rhs,
            max_deviation,
            tolerance,
            pass: max_deviation <= tolerance,
        })
    }

    /// `μ(B) · ∏ ‖v_k‖ ≥ 2ⁿ/n!` for lattice vectors spanning ℝⁿ.
    pub fn prop_stab_check(&self, vectors: &[Vec<i64>]) -> Result<PropStabReport> {
        let mu = self.stable_ball_measure_flat()?;
        if vectors.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: vectors.len(),
            });
        }
        if let Some(v) = vectors.iter().find(|v| v.len() != self.dim) {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        if integer_rank(vectors) != self.dim {
            return Err(Error::DependentVectors);
        }
        let lengths: Vec<f64> = vectors.iter().map(|v| self.lattice_norm(v)).collect();
        let lhs = mu * lengths.iter().product::<f64>();
        let rhs = 2f64.powi(self.dim as i32) / factorial(self.dim);
        Ok(PropStabReport {
            stable_ball_measure: mu,
            lengths,
            lhs,
            rhs,
            pass: lhs >= rhs,
        })
    }

    /// Leading-coefficient form of the geodesic-count lower bound in the flat
    /// case: `μ(B) ≥ 2ᵇ / (V^{b/n} · nᵇ · b!)` with `b = n`.
    pub fn geodesic_growth_check(&self) -> Result<GeodesicGrowthReport> {
        let mu = self.stable_ball_measure_flat()?;
        let n = self.dim;
        let v = self.riemannian_volume()?;
        let lower_bound =
            2f64.powi(n as i32) / (v * (n as f64).powi(n as i32) * factorial(n));
        Ok(GeodesicGrowthReport {
            dim: n,
            riemannian_volume: v,
            stable_ball_measure: mu,
            lower_bound,
            pass: mu >= lower_bound,
        })
    }

    /// Number of nonzero `h ∈ ℤⁿ` with `‖h‖ ≤ t`: the homologically distinct
    /// closed geodesics of length at most `t`.
    pub fn count_geodesics(&self, t: f64) -> Result<u64> {
        if self.dim > MAX_COUNT_DIM {
            return Err(Error::DimensionTooLarge {
                dim: self.dim,
                limit: MAX_COUNT_DIM,
            });
        }
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::InvalidBody(format!("length bound {t} must be nonnegative")));
        }
        let (bounds, count) = self.box_bounds(t);
        if count > ENUMERATION_BUDGET {
            return Err(Error::BudgetExceeded {
                points: count,
                budget: ENUMERATION_BUDGET,
            });
        }
        let limit = t * (1.0 + INCLUSION_SLACK);
        let mut total = 0u64;
        match &self.shape {
            Shape::Ellipsoid {
                exact: Some(e), ..
            } => {
                let q_limit = t * t / e.scale * (1.0 + INCLUSION_SLACK);
                for_each_in_box(&bounds, |x| {
                    let q = integer_quadratic_form(&e.entries, x);
                    if q != 0 && q as f64 <= q_limit {
                        total += 1;
                    }
                });
            }
            _ => for_each_in_box(&bounds, |x| {
                if x.iter().any(|&v| v != 0) && self.lattice_norm(x) <= limit {
                    total += 1;
                }
            }),
        }
        Ok(total)
    }

    /// JSON description, as accepted by [`NormBody::from_json`].
    pub fn to_json(&self) -> Value {
        match &self.shape {
            Shape::PBall { p, scales } => json!({
                "dim": self.dim,
                "shape": "p_ball",
                "p": if p.is_infinite() { json!("inf") } else { json!(p) },
                "scales": scales,
            }),
            Shape::Ellipsoid {
                exact: Some(e), ..
            } => {
                let rows: Vec<Vec<i64>> = e.entries.chunks(self.dim).map(<[i64]>::to_vec).collect();
                json!({"dim": self.dim, "shape": "ellipsoid", "gram": rows, "scale": e.scale})
            }
            Shape::Ellipsoid { gram, .. } => {
                let rows: Vec<Vec<f64>> = gram.chunks(self.dim).map(<[f64]>::to_vec).collect();
                json!({"dim": self.dim, "shape": "ellipsoid", "gram": rows})
            }
            Shape::Slab { normals } => {
                json!({"dim": self.dim, "shape": "slab", "normals": normals})
            }
        }
    }

    /// Parses a body description:
    ///
    /// ```text
    /// {"dim": 2, "shape": "p_ball", "p": 2 | "inf", "scales": [1, 1]}
    /// {"dim": 2, "shape": "ellipsoid", "gram": [[2, 1], [1, 2]], "scale": 0.577}
    /// {"dim": 2, "shape": "slab", "normals": [[1, 0], [0, 1]]}
    /// ```
    ///
    /// Ellipsoid entries given as integers or `"p/q"` strings are exact; any
    /// other number makes the Gram matrix real. `scale` defaults to 1.
    pub fn from_json(input: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(input).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
        Self::from_value(&v)
    }

    pub fn from_value(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::InvalidBody(m.to_string());
        let dim = v
            .get("dim")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad("missing integer field `dim`"))? as usize;
        let shape = v
            .get("shape")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("missing string field `shape`"))?;
        let body = match shape {
            "p_ball" => {
                let p = match v.get("p") {
                    Some(Value::String(s)) if s == "inf" || s == "infinity" => f64::INFINITY,
                    Some(p) => p.as_f64().ok_or_else(|| bad("`p` must be a number or \"inf\""))?,
                    None => 2.0,
                };
                let scales = match v.get("scales") {
                    Some(s) => f64_array(s).ok_or_else(|| bad("`scales` must be numbers"))?,
                    None => vec![1.0; dim],
                };
                Self::p_ball(p, scales)?
            }
            "ellipsoid" => {
                let rows = v
                    .get("gram")
                    .and_then(Value::as_array)
                    .ok_or_else(|| bad("missing `gram` matrix"))?;
                let scale = v.get("scale").map_or(Some(1.0), Value::as_f64);
                let scale = scale.ok_or_else(|| bad("`scale` must be a number"))?;
                let exact: Option<Vec<Vec<Ratio<i64>>>> = rows
                    .iter()
                    .map(|r| r.as_array()?.iter().map(rational_entry).collect())
                    .collect();
                match exact {
                    Some(q) => Self::rational_ellipsoid(&q, scale)?,
                    None => {
                        let real: Vec<Vec<f64>> = rows
                            .iter()
                            .map(|r| f64_array(r).map(|row| row.iter().map(|x| x * scale).collect()))
                            .collect::<Option<_>>()
                            .ok_or_else(|| bad("`gram` entries must be numbers or \"p/q\""))?;
                        Self::ellipsoid(&real)?
                    }
                }
            }
            "slab" => {
                let normals = v
                    .get("normals")
                    .and_then(Value::as_array)
                    .ok_or_else(|| bad("missing `normals`"))?
                    .iter()
                    .map(f64_array)
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| bad("`normals` must be arrays of numbers"))?;
                Self::slab(normals)?
            }
            other => return Err(bad(&format!("unknown shape {other:?}"))),
        };
        if body.dim != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: body.dim,
            });
        }
        Ok(body)
    }
}

fn f64_array(v: &Value) -> Option<Vec<f64>> {
    v.as_array()?.iter().map(Value::as_f64).collect()
}

fn rational_entry(v: &Value) -> Option<Ratio<i64>> {
    match v {
        Value::Number(n) => n.as_i64().map(Ratio::from_integer),
        Value::String(s) => {
            let s = s.trim();
            match s.split_once('/') {
                Some((p, q)) => {
                    let p: i64 = p.trim().parse().ok()?;
                    let q: i64 = q.trim().parse().ok()?;
                    (q != 0).then(|| Ratio::new(p, q))
                }
                None => s.parse().ok().map(Ratio::from_integer),
            }
        }
        _ => None,
    }
}

fn flatten_square(rows: &[Vec<f64>]) -> Result<Vec<f64>> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidBody("Gram matrix must be square".into()));
    }
    Ok(rows.iter().flatten().copied().collect())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn quadratic_form(gram: &[f64], x: &[f64]) -> f64 {
    let n = x.len();
    (0..n)
        .map(|i| x[i] * (0..n).map(|j| gram[i * n + j] * x[j]).sum::<f64>())
        .sum()
}

fn integer_quadratic_form(gram: &[i64], x: &[i64]) -> i128 {
    let n = x.len();
    (0..n)
        .map(|i| {
            x[i] as i128
                * (0..n)
                    .map(|j| gram[i * n + j] as i128 * x[j] as i128)
                    .sum::<i128>()
        })
        .sum()
}

/// Visits every integer point of `∏ [-b_j, b_j]`.
fn for_each_in_box(bounds: &[i64], mut f: impl FnMut(&[i64])) {
    let mut x: Vec<i64> = bounds.iter().map(|b| -b).collect();
    loop {
        f(&x);
        let mut k = x.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            if x[k] < bounds[k] {
                x[k] += 1;
                break;
            }
            x[k] = -bounds[k];
        }
    }
}

/// Rank over ℚ of integer vectors, by fraction-free elimination with each
/// row reduced by its content.
pub fn integer_rank(vectors: &[Vec<i64>]) -> usize {
    let mut rows: Vec<Vec<i128>> = vectors
        .iter()
        .map(|v| v.iter().map(|&x| x as i128).collect())
        .collect();
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot_row = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            let factor = row[c];
            if factor == 0 {
                continue;
            }
            let mut g = 0i128;
            for (x, &pv) in row.iter_mut().zip(&pivot_row) {
                *x = *x * pivot_row[c] - factor * pv;
                g = g.gcd(x);
            }
            if g > 1 {
                row.iter_mut().for_each(|x| *x /= g);
            }
        }
        rank += 1;
    }
    rank
}

/// Determinant of an integer matrix by Bareiss elimination.
fn integer_det(entries: &[i64], n: usize) -> i128 {
    let mut a: Vec<Vec<i128>> = entries
        .chunks(n)
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&r| a[r][k] != 0) else {
                return 0;
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// `max_{x∈K} |x_j|` for each coordinate; also validates that the norm is definite.
fn compute_extents(n: usize, shape: &Shape) -> Result<Vec<f64>> {
    match shape {
        Shape::PBall { scales, .. } => Ok(scales.clone()),
        Shape::Ellipsoid { gram, .. } => {
            if gram.len() != n * n {
                return Err(Error::InvalidBody("Gram matrix must be square".into()));
            }
            let m = DMatrix::from_row_slice(n, n, gram);
            if (0..n).any(|i| (0..i).any(|j| m[(i, j)] != m[(j, i)])) {
                return Err(Error::InvalidBody("Gram matrix must be symmetric".into()));
            }
            let chol = m.cholesky().ok_or_else(|| {
                Error::InvalidBody("Gram matrix is not positive definite".into())
            })?;
            let inv = chol.inverse();
            Ok((0..n).map(|j| inv[(j, j)].sqrt()).collect())
        }
        Shape::Slab { normals } => slab_extents(n, normals),
    }
}

/// Coordinate extents of `{x : |⟨a_i, x⟩| ≤ 1}` from its vertices: every vertex
/// solves `⟨a_i, x⟩ = ±1` for `n` independent normals.
fn slab_extents(n: usize, normals: &[Vec<f64>]) -> Result<Vec<f64>> {
    let m = normals.len();
    if n == 0 || m < n {
        return Err(Error::InvalidBody("slab normals must span the space".into()));
    }
    let a = DMatrix::from_fn(m, n, |i, j| normals[i][j]);
    if a.rank(1e-10) < n {
        return Err(Error::InvalidBody("slab normals must span the space".into()));
    }
    let mut extents = vec![0.0f64; n];
    let mut subset: Vec<usize> = (0..n).collect();
    loop {
        let sub = DMatrix::from_fn(n, n, |i, j| normals[subset[i]][j]);
        if let Some(lu) = Some(sub.lu()).filter(|lu| lu.determinant().abs() > 1e-12) {
            for signs in 0u32..(1 << n) {
                let rhs = DVector::from_fn(n, |i, _| if signs >> i & 1 == 1 { -1.0 } else { 1.0 });
                if let Some(x) = lu.solve(&rhs) {
                    let feasible = normals
                        .iter()
                        .all(|row| dot(row, x.as_slice()).abs() <= 1.0 + 1e-9);
                    if feasible {
                        for (e, xi) in extents.iter_mut().zip(x.iter()) {
                            *e = e.max(xi.abs());
                        }
                    }
                }
            }
        }
        // next n-subset of 0..m in lexicographic order
        let Some(i) = (0..n).rev().find(|&i| subset[i] < m - n + i) else {
            break;
        };
        subset[i] += 1;
        for k in i + 1..n {
            subset[k] = subset[k - 1] + 1;
        }
    }
    Ok(extents)
}

/// A random ellipsoid with Gram matrix `(BᵀB + I) / q`, `B` a small integer
/// matrix and `q ∈ 1..=4`, so that comparisons are exact.
pub fn random_rational_ellipsoid<R: Rng + ?Sized>(rng: &mut R, n: usize) -> NormBody {
    let b: Vec<i64> = (0..n * n).map(|_| rng.gen_range(-2..=2)).collect();
    let mut gram = vec![0i64; n * n];
    for i in 0..n {
        for j in 0..n {
            gram[i * n + j] = (0..n).map(|k| b[k * n + i] * b[k * n + j]).sum::<i64>()
                + i64::from(i == j);
        }
    }
    let q = rng.gen_range(1..=4);
    let rows: Vec<Vec<Ratio<i64>>> = gram
        .chunks(n)
        .map(|r| r.iter().map(|&x| Ratio::new(x, q)).collect())
        .collect();
    NormBody::rational_ellipsoid(&rows, 1.0).expect("BᵀB + I is positive definite")
}

/// A random slab polytope with `n..=n+3` normals whose entries are uniform in
/// `[-2, 2]`, redrawn until the body is comfortably bounded.
pub fn random_slab<R: Rng + ?Sized>(rng: &mut R, n: usize) -> NormBody {
    loop {
        let m = n + rng.gen_range(0..=3);
        let normals: Vec<Vec<f64>> = (0..m)
            .map(|_| (0..n).map(|_| rng.gen_range(-2.0..=2.0)).collect())
            .collect();
        if let Ok(body) = NormBody::slab(normals) {
            if body.extents.iter().all(|&e| e <= 4.0) {
                return body;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cfg() -> VolumeConfig {
        VolumeConfig::new(12345)
    }

    fn diag41() -> NormBody {
        NormBody::integer_ellipsoid(vec![4, 0, 0, 1], 2, 1.0).unwrap()
    }

    #[test]
    fn norm_examples() {
        assert_eq!(NormBody::euclidean(2).norm(&[3.0, 4.0]).unwrap(), 5.0);
        let slab_cube = NormBody::slab(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(slab_cube.norm(&[3.0, 4.0]).unwrap(), 4.0);
        assert_eq!(NormBody::cube(2).norm(&[3.0, -4.0]).unwrap(), 4.0);
        assert_eq!(diag41().norm(&[1.0, 0.0]).unwrap(), 2.0);
        assert_eq!(
            NormBody::euclidean(2).norm(&[1.0]),
            Err(Error::DimensionMismatch {
                expected: 2,
                got: 1
            })
        );
    }

    #[test]
    fn invalid_bodies() {
        assert!(NormBody::ellipsoid(&[vec![1.0, 2.0], vec![2.0, 1.0]]).is_err());
        assert!(NormBody::ellipsoid(&[vec![1.0, 0.5], vec![0.0, 1.0]]).is_err());
        assert!(NormBody::slab(vec![vec![1.0, 0.0], vec![2.0, 0.0]]).is_err());
        assert!(NormBody::p_ball(0.5, vec![1.0]).is_err());
    }

    #[test]
    fn cube_minima_are_standard_basis() {
        for n in 1..=4 {
            let r = NormBody::cube(n).successive_minima(&cfg()).unwrap();
            assert!(r.minima.iter().all(|&l| l == 1.0));
            for (k, v) in r.vectors.iter().enumerate() {
                let mut e = vec![0; n];
                e[k] = 1;
                assert_eq!(v, &e);
            }
            assert_eq!(r.minkowski_ratio, 1.0);
        }
    }

    #[test]
    fn euclidean_disc_minima() {
        let r = NormBody::euclidean(2).successive_minima(&cfg()).unwrap();
        assert_eq!(r.minima, vec![1.0, 1.0]);
        assert!((r.minkowski_ratio - PI / 4.0).abs() < 1e-15);
    }

    #[test]
    fn hexagonal_minima_product() {
        let hex = NormBody::hexagonal();
        let (minima, vectors) = hex.lattice_minima().unwrap();
        assert!((minima[0] * minima[1] - 2.0 / 3f64.sqrt()).abs() < 1e-12);
        assert_eq!(vectors, vec![vec![1, 0], vec![0, 1]]);
        // six shortest vectors: ±(1,0), ±(0,1), ±(1,-1)
        assert_eq!(hex.count_geodesics(minima[0]).unwrap(), 6);
        let report = hex.minkowski_second_check(&cfg()).unwrap();
        let expected = 2.0 / 3f64.sqrt() * PI / 4.0;
        assert!((report.ratio - expected).abs() < 1e-12);
        assert!(report.pass && report.ratio < 1.0);
    }

    #[test]
    fn volume_examples() {
        let v = NormBody::euclidean(2).volume(&cfg());
        assert_eq!(v.method, VolumeMethod::Exact);
        assert!((v.value - PI).abs() < 1e-14);
        assert_eq!(NormBody::cube(3).volume(&cfg()).value, 8.0);
        assert!((NormBody::euclidean(3).volume(&cfg()).value - 4.0 * PI / 3.0).abs() < 1e-14);
        let l1 = NormBody::p_ball(1.0, vec![1.0; 3]).unwrap();
        assert!((l1.volume(&cfg()).value - 8.0 / 6.0).abs() < 1e-14);
        let slab = NormBody::slab(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let mc = slab.volume(&cfg());
        assert_eq!(
            mc.method,
            VolumeMethod::MonteCarlo {
                samples: 1_000_000,
                seed: 12345
            }
        );
        // The bounding box is the body itself here.
        assert!((mc.value - 4.0).abs() <= 3.0 * mc.std_error + 1e-12);
    }

    #[test]
    fn monte_carlo_diamond_within_three_standard_errors() {
        let diamond = NormBody::slab(vec![vec![1.0, 1.0], vec![1.0, -1.0]]).unwrap();
        assert_eq!(diamond.extents(), &[1.0, 1.0]);
        let mc = diamond.volume(&cfg());
        assert!(mc.std_error > 0.0);
        assert!((mc.value - 2.0).abs() <= 3.0 * mc.std_error);
        let again = diamond.volume(&cfg());
        assert_eq!(mc, again);
    }

    #[test]
    fn minkowski_check_examples() {
        let c = NormBody::cube(2).minkowski_second_check(&cfg()).unwrap();
        assert_eq!(c.ratio, 1.0);
        assert!(c.pass);
        let e = NormBody::euclidean(2).minkowski_second_check(&cfg()).unwrap();
        assert!((e.ratio - PI / 4.0).abs() < 1e-15);
    }

    #[test]
    fn bh_volume_examples() {
        assert!((NormBody::euclidean(2).bh_volume_flat_torus(&cfg()) - 1.0).abs() < 1e-15);
        assert!((NormBody::cube(2).bh_volume_flat_torus(&cfg()) - PI / 4.0).abs() < 1e-15);
        assert!((diag41().bh_volume_flat_torus(&cfg()) - 2.0).abs() < 1e-14);
        assert!((NormBody::hexagonal().bh_volume_flat_torus(&cfg()) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eq_mink_examples() {
        let c = NormBody::cube(2).verify_eq_mink(&cfg()).unwrap();
        assert_eq!(c.length_product, 1.0);
        assert!((c.bound - 1.0).abs() < 1e-15 && c.pass);
        let e = NormBody::euclidean(2).verify_eq_mink(&cfg()).unwrap();
        assert!((e.bound - 4.0 / PI).abs() < 1e-15 && e.pass);
        let h = NormBody::hexagonal().verify_eq_mink(&cfg()).unwrap();
        assert!((h.length_product - 2.0 / 3f64.sqrt()).abs() < 1e-12);
        assert!((h.bound - 4.0 / PI).abs() < 1e-12 && h.pass);
    }

    #[test]
    fn stable_ball_examples() {
        assert!((NormBody::euclidean(2).is_ellipsoid()) == false);
        let id2 = NormBody::integer_ellipsoid(vec![1, 0, 0, 1], 2, 1.0).unwrap();
        assert!((id2.stable_ball_measure_flat().unwrap() - PI).abs() < 1e-15);
        assert!((diag41().stable_ball_measure_flat().unwrap() - PI / 2.0).abs() < 1e-15);
        assert_eq!(
            NormBody::cube(2).stable_ball_measure_flat(),
            Err(Error::NotRiemannianFlat)
        );
    }

    #[test]
    fn eq_stab_examples() {
        let id2 = NormBody::integer_ellipsoid(vec![1, 0, 0, 1], 2, 1.0).unwrap();
        let r = id2.verify_eq_stab().unwrap();
        assert!(r.pass && (r.omega_ab - PI).abs() < 1e-14 && (r.rhs - PI).abs() < 1e-14);
        let r = diag41().verify_eq_stab().unwrap();
        assert!(r.pass && (r.omega_ab - PI).abs() < 1e-14 && (r.rhs - PI).abs() < 1e-14);
        let id3 = NormBody::ellipsoid(&[
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ])
        .unwrap();
        let r = id3.verify_eq_stab().unwrap();
        assert!(r.pass && (r.rhs - 4.0 * PI / 3.0).abs() < 1e-14);
        assert_eq!(
            NormBody::cube(2).verify_eq_stab(),
            Err(Error::NotRiemannianFlat)
        );
    }

    #[test]
    fn prop_stab_examples() {
        let id2 = NormBody::integer_ellipsoid(vec![1, 0, 0, 1], 2, 1.0).unwrap();
        let r = id2.prop_stab_check(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert!((r.lhs - PI).abs() < 1e-15 && r.rhs == 2.0 && r.pass);
        let r = id2.prop_stab_check(&[vec![1, 0], vec![1, 1]]).unwrap();
        assert!((r.lhs - PI * 2f64.sqrt()).abs() < 1e-14 && r.pass);
        let hex = NormBody::hexagonal();
        let (_, v) = hex.lattice_minima().unwrap();
        assert!(hex.prop_stab_check(&v).unwrap().pass);
        assert_eq!(
            id2.prop_stab_check(&[vec![1, 1], vec![2, 2]]),
            Err(Error::DependentVectors)
        );
    }

    #[test]
    fn count_examples() {
        assert_eq!(NormBody::euclidean(2).count_geodesics(1.0).unwrap(), 4);
        assert_eq!(NormBody::cube(2).count_geodesics(3.0).unwrap(), 48);
        let n10 = NormBody::euclidean(2).count_geodesics(10.0).unwrap();
        assert!((n10 as f64 / 100.0 - PI).abs() < 0.15 * PI);
        assert!(matches!(
            NormBody::euclidean(2).count_geodesics(1e5),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(matches!(
            NormBody::euclidean(5).count_geodesics(1.0),
            Err(Error::DimensionTooLarge { .. })
        ));
    }

    /// Brute-force lattice count, written independently of the body's enumeration.
    fn gauss_circle(t: i64) -> u64 {
        let mut n = 0;
        for x in -t..=t {
            for y in -t..=t {
                if (x, y) != (0, 0) && x * x + y * y <= t * t {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn euclidean_count_matches_brute_force() {
        for t in [1, 2, 5, 10, 17] {
            assert_eq!(
                NormBody::euclidean(2).count_geodesics(t as f64).unwrap(),
                gauss_circle(t)
            );
            let id = NormBody::integer_ellipsoid(vec![1, 0, 0, 1], 2, 1.0).unwrap();
            assert_eq!(id.count_geodesics(t as f64).unwrap(), gauss_circle(t));
        }
    }

    #[test]
    fn counting_asymptotics() {
        // |N(t)/tⁿ − vol(K)| ≤ vol(K)·c/t, c pinned per family at t = 20 and 40.
        let families: [(NormBody, f64); 3] = [
            (NormBody::euclidean(2), 2.0),
            (NormBody::hexagonal(), 2.0),
            (diag41(), 2.0),
        ];
        for (body, c) in families {
            let vol = body.volume(&cfg()).value;
            for t in [20.0f64, 40.0] {
                let n = body.count_geodesics(t).unwrap() as f64;
                let dev = (n / t.powi(2) - vol).abs();
                assert!(dev <= vol * c / t, "deviation {dev} at t = {t}");
            }
        }
    }

    #[test]
    fn scaling_covariance_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let n = rng.gen_range(2..=3);
            let body = random_rational_ellipsoid(&mut rng, n);
            let base = body.successive_minima(&cfg()).unwrap();
            for s in [2.0, 0.5, 4.0] {
                let scaled = body.scaled(s).unwrap().successive_minima(&cfg()).unwrap();
                for (a, b) in scaled.minima.iter().zip(&base.minima) {
                    assert_eq!(*a, b / s);
                }
                assert_eq!(scaled.volume.value, base.volume.value * s.powi(n as i32));
                assert_eq!(scaled.minkowski_ratio, base.minkowski_ratio);
            }
        }
    }

    #[test]
    fn first_theorem_and_primitivity() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for i in 0..60 {
            let n = 2 + i % 3;
            let body = if i % 2 == 0 {
                random_rational_ellipsoid(&mut rng, n)
            } else {
                random_slab(&mut rng, n)
            };
            let r = body
                .successive_minima(&VolumeConfig::new(i as u64).with_samples(100_000))
                .unwrap();
            let first = r.minima[0].powi(n as i32) * r.volume.value;
            assert!(first <= 2f64.powi(n as i32) + 3.0 * r.volume.std_error * r.minima[0].powi(n as i32));
            assert!(r.minima.windows(2).all(|w| w[0] <= w[1]));
            for v in &r.vectors {
                let g = v.iter().fold(0i64, |g, &x| g.gcd(&x));
                assert_eq!(g, 1, "non-primitive minimum vector {v:?}");
                assert!((body.norm(&v.iter().map(|&x| x as f64).collect::<Vec<_>>()).unwrap()
                    - body.lattice_norm(v))
                .abs()
                    < 1e-9);
            }
        }
    }

    /// Exhaustive oracle: every achieving family is checked against all integer
    /// vectors in a generous box, independently of the radius schedule.
    #[test]
    fn minima_match_box_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..30 {
            let body = random_rational_ellipsoid(&mut rng, 2);
            let (minima, _) = body.lattice_minima().unwrap();
            let mut pts: Vec<(f64, [i64; 2])> = Vec::new();
            for x in -12i64..=12 {
                for y in -12i64..=12 {
                    if (x, y) != (0, 0) {
                        pts.push((body.norm(&[x as f64, y as f64]).unwrap(), [x, y]));
                    }
                }
            }
            pts.sort_by(|a, b| a.0.total_cmp(&b.0));
            let l1 = pts[0].0;
            let first = pts[0].1;
            let l2 = pts
                .iter()
                .find(|(_, p)| p[0] * first[1] - p[1] * first[0] != 0)
                .unwrap()
                .0;
            assert!((minima[0] - l1).abs() < 1e-12);
            assert!((minima[1] - l2).abs() < 1e-12);
        }
    }

    #[test]
    fn integer_rank_and_det() {
        assert_eq!(integer_rank(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(integer_rank(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]), 2);
        assert_eq!(integer_rank(&[vec![2, 0], vec![0, 3]]), 2);
        assert_eq!(integer_rank(&[]), 0);
        assert_eq!(integer_det(&[2, 1, 1, 2], 2), 3);
        assert_eq!(integer_det(&[0, 1, 1, 0], 2), -1);
        assert_eq!(integer_det(&[1, 2, 3, 4, 5, 6, 7, 8, 10], 3), -3);
    }

    #[test]
    fn json_roundtrip() {
        for body in [
            NormBody::cube(3),
            NormBody::euclidean(2),
            NormBody::hexagonal(),
            NormBody::slab(vec![vec![1.0, 2.0], vec![0.5, -1.0], vec![1.0, 1.0]]).unwrap(),
            NormBody::ellipsoid(&[vec![1.5, 0.25], vec![0.25, 2.0]]).unwrap(),
        ] {
            let text = body.to_json().to_string();
            assert_eq!(NormBody::from_json(&text).unwrap(), body, "{text}");
        }
        let r = NormBody::from_json(
            r#"{"dim": 2, "shape": "ellipsoid", "gram": [["1/2", 0], [0, "3/4"]]}"#,
        )
        .unwrap();
        assert!(matches!(
            r.shape(),
            Shape::Ellipsoid { exact: Some(IntegerGram { scale, .. }), .. } if *scale == 0.25
        ));
        assert!(NormBody::from_json(r#"{"dim": 3, "shape": "p_ball", "scales": [1, 1]}"#).is_err());
        assert!(matches!(NormBody::from_json("{"), Err(Error::Parse { .. })));
    }
}
