//! Geometry kernel: barycentric and Cartesian coordinates, simplex volumes,
//! and the construction of cevian feet.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};

/// Smallest barycentric weight accepted for an interior point.
pub const EPS_BOUNDARY: f64 = 1e-9;

/// Relative degeneracy guard: `|det| > DELTA_DEGENERACY * (max edge)^n`.
pub const DELTA_DEGENERACY: f64 = 1e-9;

/// A point strictly inside an `n`-simplex, given by `n + 1` positive weights
/// summing to one.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct BarycentricPoint {
    weights: Vec<f64>,
}

impl BarycentricPoint {
    /// Renormalizes `weights` to sum to one and rejects anything that is not
    /// at least [`EPS_BOUNDARY`] away from the boundary.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        Self::with_margin(weights, EPS_BOUNDARY)
    }

    pub fn with_margin(mut weights: Vec<f64>, margin: f64) -> Result<Self> {
        if weights.len() < 3 {
            return Err(Error::UnsupportedDimension(weights.len().saturating_sub(1)));
        }
        if let Some((index, &weight)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !w.is_finite() || **w <= 0.0)
        {
            return Err(Error::NotInterior { index, weight });
        }
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        if let Some((index, &weight)) = weights.iter().enumerate().find(|(_, w)| **w < margin) {
            return Err(Error::NotInterior { index, weight });
        }
        Ok(Self { weights })
    }

    /// The barycenter `(1/(n+1), ..., 1/(n+1))`.
    pub fn centroid(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::UnsupportedDimension(n));
        }
        Ok(Self {
            weights: vec![1.0 / (n + 1) as f64; n + 1],
        })
    }

    /// `(x, ..., x, 1 - n x)`: the symmetric slice on which the corner
    /// objective reduces to a function of one variable.
    pub fn symmetric_slice(n: usize, x: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::UnsupportedDimension(n));
        }
        let mut weights = vec![x; n];
        weights.push(1.0 - n as f64 * x);
        Self::new(weights)
    }

    /// Dimension `n` of the simplex the point lives in.
    pub fn dim(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn into_weights(self) -> Vec<f64> {
        self.weights
    }
}

/// A point on the facet opposite vertex `facet`: weight `facet` is exactly
/// zero and the others are positive and sum to one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FacetPoint {
    facet: usize,
    weights: Vec<f64>,
}

impl FacetPoint {
    pub fn facet(&self) -> usize {
        self.facet
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// `n + 1` affinely independent vertices in `R^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct CartesianSimplex {
    vertices: Vec<Vec<f64>>,
}

impl CartesianSimplex {
    pub fn new(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let n = vertices.len().saturating_sub(1);
        if n < 2 {
            return Err(Error::UnsupportedDimension(n));
        }
        if let Some(bad) = vertices.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        let det = edge_determinant(&vertices);
        let guard = DELTA_DEGENERACY * max_edge_length(&vertices).powi(n as i32);
        if !(det.abs() > guard) {
            return Err(Error::DegenerateSimplex { det, guard });
        }
        Ok(Self { vertices })
    }

    /// The standard simplex `0, e_1, ..., e_n`, listed with the origin last.
    pub fn unit(n: usize) -> Result<Self> {
        let mut vertices: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                let mut v = vec![0.0; n];
                v[i] = 1.0;
                v
            })
            .collect();
        vertices.push(vec![0.0; n]);
        Self::new(vertices)
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &[f64] {
        &self.vertices[i]
    }

    pub fn max_edge_length(&self) -> f64 {
        max_edge_length(&self.vertices)
    }

    /// `|det(A_i - A_{n+1})| / n!`.
    pub fn volume(&self) -> f64 {
        edge_determinant(&self.vertices).abs() / factorial(self.dim())
    }

    /// Image of the simplex under `x -> linear * x + offset`, where `linear`
    /// is given row-major.
    pub fn transformed(&self, linear: &[f64], offset: &[f64]) -> Result<Self> {
        let n = self.dim();
        if linear.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: linear.len(),
            });
        }
        if offset.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: offset.len(),
            });
        }
        let vertices = self
            .vertices
            .iter()
            .map(|v| {
                (0..n)
                    .map(|r| {
                        offset[r]
                            + linear[r * n..(r + 1) * n]
                                .iter()
                                .zip(v)
                                .map(|(a, x)| a * x)
                                .sum::<f64>()
                    })
                    .collect()
            })
            .collect();
        Self::new(vertices)
    }
}

/// Volume of the simplex spanned by `n + 1` points of `R^n`, with no
/// degeneracy guard (flat point sets give zero).
pub fn simplex_volume(points: &[Vec<f64>]) -> Result<f64> {
    let n = points.len().saturating_sub(1);
    if n < 1 {
        return Err(Error::UnsupportedDimension(n));
    }
    if let Some(bad) = points.iter().find(|v| v.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: bad.len(),
        });
    }
    Ok(edge_determinant(points).abs() / factorial(n))
}

pub fn volume(s: &CartesianSimplex) -> f64 {
    s.volume()
}

/// `Σ λ_i A_i`.
pub fn to_cartesian(b: &BarycentricPoint, s: &CartesianSimplex) -> Result<Vec<f64>> {
    combine(b.weights(), s)
}

/// Solves `[A_1 .. A_{n+1}; 1 .. 1] λ = (p, 1)`.
pub fn to_barycentric(p: &[f64], s: &CartesianSimplex) -> Result<BarycentricPoint> {
    let n = s.dim();
    if p.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: p.len(),
        });
    }
    let system = DMatrix::from_fn(n + 1, n + 1, |r, c| {
        if r < n {
            s.vertices[c][r]
        } else {
            1.0
        }
    });
    let rhs = DVector::from_iterator(n + 1, p.iter().copied().chain(std::iter::once(1.0)));
    let lambda = system.lu().solve(&rhs).ok_or(Error::DegenerateSimplex {
        det: 0.0,
        guard: DELTA_DEGENERACY,
    })?;
    if let Some((index, &weight)) = lambda
        .iter()
        .enumerate()
        .find(|(_, w)| !(**w > EPS_BOUNDARY))
    {
        return Err(Error::NotInterior { index, weight });
    }
    BarycentricPoint::new(lambda.iter().copied().collect())
}

/// Foot of the cevian from vertex `i` through `m` on the opposite facet:
/// weights of `m` with entry `i` zeroed, divided by `1 - λ_i`.
pub fn cevian_foot(i: usize, m: &BarycentricPoint) -> Result<FacetPoint> {
    let len = m.weights.len();
    if i >= len {
        return Err(Error::IndexOutOfRange { index: i, len });
    }
    let complement = 1.0 - m.weights[i];
    let weights = m
        .weights
        .iter()
        .enumerate()
        .map(|(j, &w)| if j == i { 0.0 } else { w / complement })
        .collect();
    Ok(FacetPoint { facet: i, weights })
}

/// A simplex, an interior point `M`, and the `n + 1` cevians through it.
#[derive(Debug, Clone)]
pub struct CevianConfiguration {
    simplex: CartesianSimplex,
    m_bary: BarycentricPoint,
    m_cart: Vec<f64>,
    feet_bary: Vec<FacetPoint>,
    feet_cart: Vec<Vec<f64>>,
    r: Vec<f64>,
    s: Vec<f64>,
}

impl CevianConfiguration {
    pub fn simplex(&self) -> &CartesianSimplex {
        &self.simplex
    }

    pub fn m_bary(&self) -> &BarycentricPoint {
        &self.m_bary
    }

    pub fn m_cart(&self) -> &[f64] {
        &self.m_cart
    }

    pub fn feet_bary(&self) -> &[FacetPoint] {
        &self.feet_bary
    }

    pub fn feet_cart(&self) -> &[Vec<f64>] {
        &self.feet_cart
    }

    /// Distances `|M A_i|`.
    pub fn r(&self) -> &[f64] {
        &self.r
    }

    /// Distances `|M N_i|`.
    pub fn s(&self) -> &[f64] {
        &self.s
    }

    pub fn dim(&self) -> usize {
        self.simplex.dim()
    }

    /// Determinant volume of the cevian simplex `N_1 ... N_{n+1}`.
    pub fn cevian_volume(&self) -> f64 {
        edge_determinant(&self.feet_cart).abs() / factorial(self.dim())
    }

    /// Determinant volume of the corner simplex with apex `M` and every
    /// foot except `N_k`.
    pub fn corner_volume(&self, k: usize) -> Result<f64> {
        let len = self.feet_cart.len();
        if k >= len {
            return Err(Error::IndexOutOfRange { index: k, len });
        }
        let mut points: Vec<Vec<f64>> = self
            .feet_cart
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != k)
            .map(|(_, p)| p.clone())
            .collect();
        points.push(self.m_cart.clone());
        simplex_volume(&points)
    }
}

pub fn build_configuration(
    s: &CartesianSimplex,
    m: &BarycentricPoint,
) -> Result<CevianConfiguration> {
    let n = s.dim();
    if m.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n + 1,
            found: m.weights.len(),
        });
    }
    let m_cart = to_cartesian(m, s)?;
    let feet_bary = (0..=n)
        .map(|i| cevian_foot(i, m))
        .collect::<Result<Vec<_>>>()?;
    let feet_cart = feet_bary
        .iter()
        .map(|f| combine(&f.weights, s))
        .collect::<Result<Vec<_>>>()?;
    let r = s.vertices.iter().map(|a| distance(a, &m_cart)).collect();
    let s_len = feet_cart.iter().map(|p| distance(p, &m_cart)).collect();
    Ok(CevianConfiguration {
        simplex: s.clone(),
        m_bary: m.clone(),
        m_cart,
        feet_bary,
        feet_cart,
        r,
        s: s_len,
    })
}

pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn combine(weights: &[f64], s: &CartesianSimplex) -> Result<Vec<f64>> {
    if weights.len() != s.vertices.len() {
        return Err(Error::DimensionMismatch {
            expected: s.vertices.len(),
            found: weights.len(),
        });
    }
    let n = s.dim();
    let mut out = vec![0.0; n];
    for (w, v) in weights.iter().zip(&s.vertices) {
        for (o, x) in out.iter_mut().zip(v) {
            *o += w * x;
        }
    }
    Ok(out)
}

/// `det(A_1 - A_{n+1}, ..., A_n - A_{n+1})` for `n + 1` points in `R^n`.
fn edge_determinant(points: &[Vec<f64>]) -> f64 {
    let n = points.len() - 1;
    let apex = &points[n];
    DMatrix::from_fn(n, n, |r, c| points[c][r] - apex[r]).determinant()
}

fn max_edge_length(points: &[Vec<f64>]) -> f64 {
    let mut best = 0.0_f64;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            best = best.max(distance(a, b));
        }
    }
    best
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn triangle() -> CartesianSimplex {
        CartesianSimplex::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap()
    }

    #[test]
    fn unit_volumes() {
        assert_relative_eq!(triangle().volume(), 0.5, max_relative = 1e-15);
        let tet = CartesianSimplex::new(vec![
            vec![0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ])
        .unwrap();
        assert_relative_eq!(tet.volume(), 1.0 / 6.0, max_relative = 1e-15);
    }

    #[test]
    fn rejects_collinear_and_bad_shapes() {
        let flat = CartesianSimplex::new(vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0]]);
        assert!(matches!(flat, Err(Error::DegenerateSimplex { .. })));
        let ragged = CartesianSimplex::new(vec![vec![0.0, 0.0], vec![1.0], vec![0.0, 1.0]]);
        assert!(matches!(ragged, Err(Error::DimensionMismatch { .. })));
        let segment = CartesianSimplex::new(vec![vec![0.0], vec![1.0]]);
        assert_eq!(segment, Err(Error::UnsupportedDimension(1)));
    }

    #[test]
    fn degeneracy_guard_is_scale_free() {
        let tiny = CartesianSimplex::new(vec![
            vec![0.0, 0.0],
            vec![1e-8, 0.0],
            vec![0.0, 1e-8],
        ]);
        assert!(tiny.is_ok());
    }

    #[test]
    fn centroid_maps_to_centroid() {
        let c = BarycentricPoint::centroid(2).unwrap();
        let p = to_cartesian(&c, &triangle()).unwrap();
        assert_relative_eq!(p[0], 1.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(p[1], 1.0 / 3.0, epsilon = 1e-15);
        let back = to_barycentric(&p, &triangle()).unwrap();
        for w in back.weights() {
            assert_relative_eq!(*w, 1.0 / 3.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn near_vertex_weight_lands_near_vertex() {
        let eps = 1e-6;
        let s = triangle();
        let b = BarycentricPoint::new(vec![eps, 1.0 - 2.0 * eps, eps]).unwrap();
        let p = to_cartesian(&b, &s).unwrap();
        assert!(distance(&p, s.vertex(1)) <= 2.0 * eps * s.max_edge_length());
    }

    #[test]
    fn facet_point_is_not_interior() {
        let err = to_barycentric(&[0.5, 0.0], &triangle()).unwrap_err();
        assert!(matches!(err, Error::NotInterior { .. }));
        let outside = to_barycentric(&[2.0, 2.0], &triangle()).unwrap_err();
        assert!(matches!(outside, Error::NotInterior { .. }));
        let wrong = to_barycentric(&[0.2, 0.2, 0.2], &triangle()).unwrap_err();
        assert!(matches!(wrong, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn barycentric_constructor_validates() {
        let b = BarycentricPoint::new(vec![2.0, 1.0, 1.0]).unwrap();
        assert_eq!(b.weights(), &[0.5, 0.25, 0.25]);
        assert!(matches!(
            BarycentricPoint::new(vec![0.5, 0.5, 0.0]),
            Err(Error::NotInterior { index: 2, .. })
        ));
        assert!(matches!(
            BarycentricPoint::new(vec![1.0, 1.0, -0.1]),
            Err(Error::NotInterior { .. })
        ));
        assert!(matches!(
            BarycentricPoint::new(vec![1.0, 1e-12, 1.0]),
            Err(Error::NotInterior { index: 1, .. })
        ));
        assert_eq!(
            BarycentricPoint::new(vec![0.5, 0.5]),
            Err(Error::UnsupportedDimension(1))
        );
    }

    #[test]
    fn feet_of_centroid_and_skewed_point() {
        let c = BarycentricPoint::centroid(2).unwrap();
        let foot = cevian_foot(0, &c).unwrap();
        assert_eq!(foot.weights()[0], 0.0);
        assert_relative_eq!(foot.weights()[1], 0.5, epsilon = 1e-15);
        assert_relative_eq!(foot.weights()[2], 0.5, epsilon = 1e-15);

        let m = BarycentricPoint::new(vec![0.5, 0.25, 0.25]).unwrap();
        let foot = cevian_foot(0, &m).unwrap();
        assert_eq!(foot.weights(), &[0.0, 0.5, 0.5]);
        assert_eq!(
            cevian_foot(3, &m),
            Err(Error::IndexOutOfRange { index: 3, len: 3 })
        );
    }

    #[test]
    fn centroid_configurations() {
        let s = triangle();
        let cfg = build_configuration(&s, &BarycentricPoint::centroid(2).unwrap()).unwrap();
        let midpoints = [[0.5, 0.5], [0.0, 0.5], [0.5, 0.0]];
        for (foot, mid) in cfg.feet_cart().iter().zip(midpoints) {
            assert_relative_eq!(foot[0], mid[0], epsilon = 1e-15);
            assert_relative_eq!(foot[1], mid[1], epsilon = 1e-15);
        }
        for (r, s) in cfg.r().iter().zip(cfg.s()) {
            assert_relative_eq!(r / s, 2.0, max_relative = 1e-12);
        }

        let tet = CartesianSimplex::unit(3).unwrap();
        let cfg = build_configuration(&tet, &BarycentricPoint::centroid(3).unwrap()).unwrap();
        for (r, s) in cfg.r().iter().zip(cfg.s()) {
            assert_relative_eq!(s / r, 1.0 / 3.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn configuration_rejects_mismatched_point() {
        let m = BarycentricPoint::centroid(3).unwrap();
        assert!(matches!(
            build_configuration(&triangle(), &m),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn affine_image_scales_volume_by_determinant() {
        let s = triangle();
        let t = s.transformed(&[2.0, 1.0, 0.0, 3.0], &[5.0, -1.0]).unwrap();
        assert_relative_eq!(t.volume(), 6.0 * s.volume(), max_relative = 1e-14);
        assert!(s.transformed(&[1.0, 2.0, 2.0, 4.0], &[0.0, 0.0]).is_err());
    }
}
