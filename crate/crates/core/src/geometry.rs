//! Frames, frame adjacency, and sphere colorings in which orthogonal
//! directions never share a color.
//!
//! A frame is an `n x d` matrix `M` whose Gram matrix `MM*` is diagonal with
//! trace 1. Two `n x d` frames `M`, `M'` are adjacent when some
//! `(n² − n) x d` frame `N`, with rows indexed by ordered pairs `(i, j)`,
//! `i ≠ j`, satisfies `M_i = Σ_{j≠i} N_(i,j)` and `M'_i = Σ_{j≠i} N_(j,i)`.

use std::f64::consts::{FRAC_PI_4, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{inner, norm, random_orthonormal, ComplexMatrix, C64, ZERO};

/// Residuals of the frame conditions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameReport {
    pub is_frame: bool,
    /// Largest modulus of an off-diagonal Gram entry.
    pub off_diagonal: f64,
    /// `|tr(MM*) − 1|`.
    pub trace_error: f64,
}

pub fn is_frame(m: &ComplexMatrix, tol: f64) -> FrameReport {
    let mut off_diagonal: f64 = 0.0;
    let mut trace = 0.0;
    for i in 0..m.rows() {
        trace += inner(m.row(i), m.row(i)).re;
        for j in i + 1..m.rows() {
            off_diagonal = off_diagonal.max(inner(m.row(j), m.row(i)).norm());
        }
    }
    let trace_error = (trace - 1.0).abs();
    FrameReport { is_frame: off_diagonal <= tol && trace_error <= tol, off_diagonal, trace_error }
}

/// Row of `N` holding the ordered pair `(i, j)`, `i ≠ j`, both 0-based.
pub fn pair_index(i: usize, j: usize, n: usize) -> usize {
    debug_assert!(i != j && i < n && j < n);
    i * (n - 1) + if j < i { j } else { j - 1 }
}

/// Whether `n_frame` witnesses adjacency of `m` and `m_prime`.
pub fn check_frame_adjacency(
    m: &ComplexMatrix,
    m_prime: &ComplexMatrix,
    n_frame: &ComplexMatrix,
    tol: f64,
) -> Result<bool> {
    let (n, d) = (m.rows(), m.cols());
    if m_prime.rows() != n || m_prime.cols() != d {
        return Err(Error::ShapeMismatch(format!("M is {n}x{d} but M' is {}x{}", m_prime.rows(), m_prime.cols())));
    }
    if n_frame.rows() != n * n - n || n_frame.cols() != d {
        return Err(Error::ShapeMismatch(format!(
            "N must be {}x{d}, got {}x{}",
            n * n - n,
            n_frame.rows(),
            n_frame.cols()
        )));
    }
    if !is_frame(n_frame, tol).is_frame {
        return Ok(false);
    }
    for i in 0..n {
        let mut out = vec![ZERO; d];
        let mut into = vec![ZERO; d];
        for j in (0..n).filter(|&j| j != i) {
            for (acc, x) in out.iter_mut().zip(n_frame.row(pair_index(i, j, n))) {
                *acc += x;
            }
            for (acc, x) in into.iter_mut().zip(n_frame.row(pair_index(j, i, n))) {
                *acc += x;
            }
        }
        let gap = |row: &[C64], sum: &[C64]| -> f64 {
            row.iter().zip(sum).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
        };
        if gap(m.row(i), &out) > tol || gap(m_prime.row(i), &into) > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// An adjacent pair of frames with its witness.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdjacentFrames {
    pub m: ComplexMatrix,
    pub m_prime: ComplexMatrix,
    pub witness: ComplexMatrix,
}

impl AdjacentFrames {
    pub fn realified(&self, tol: f64) -> Result<AdjacentFrames> {
        Ok(AdjacentFrames {
            m: realify_frame(&self.m, tol)?,
            m_prime: realify_frame(&self.m_prime, tol)?,
            witness: realify_frame(&self.witness, tol)?,
        })
    }
}

const SAMPLE_RETRIES: usize = 16;

/// Draws a random witness `N` and the frames it makes adjacent.
///
/// At most `d` rows of `N` can be nonzero and pairwise orthogonal; a random
/// subset of that many rows receives random orthonormal vectors with random
/// positive weights, normalized so the squared row norms sum to 1.
pub fn sample_adjacent_frames(n: usize, d: usize, seed: u64) -> Result<AdjacentFrames> {
    if n < 2 {
        return Err(Error::InvalidParameter("adjacent frames need n >= 2".into()));
    }
    if d == 0 {
        return Err(Error::InvalidParameter("frames need d >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = n * n - n;
    let live = pairs.min(d);
    for _ in 0..SAMPLE_RETRIES {
        let basis = random_orthonormal(d, live, &mut rng);
        if basis.len() < live {
            continue;
        }
        let mut rows: Vec<usize> = (0..pairs).collect();
        for i in 0..live {
            let j = rng.random_range(i..pairs);
            rows.swap(i, j);
        }
        let weights: Vec<f64> = (0..live).map(|_| rng.random_range(0.1..1.0)).collect();
        let total: f64 = weights.iter().sum();
        let mut witness = ComplexMatrix::zeros(pairs, d);
        for ((&row, v), w) in rows.iter().zip(&basis).zip(&weights) {
            let scale = (w / total).sqrt();
            for (c, x) in v.iter().enumerate() {
                witness[(row, c)] = x * scale;
            }
        }
        let mut m = ComplexMatrix::zeros(n, d);
        let mut m_prime = ComplexMatrix::zeros(n, d);
        for i in 0..n {
            for j in (0..n).filter(|&j| j != i) {
                for c in 0..d {
                    m[(i, c)] += witness[(pair_index(i, j, n), c)];
                    m_prime[(i, c)] += witness[(pair_index(j, i, n), c)];
                }
            }
        }
        let sample = AdjacentFrames { m, m_prime, witness };
        if check_frame_adjacency(&sample.m, &sample.m_prime, &sample.witness, 1e-9)? {
            return Ok(sample);
        }
    }
    Err(Error::ConstructionFailed(format!("no nondegenerate adjacent frames after {SAMPLE_RETRIES} draws")))
}

/// Maps each complex row `u` to the real row `(Re u, Im u)`, stored with
/// zero imaginary parts.
pub fn realify_frame(m: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    let report = is_frame(m, tol);
    if !report.is_frame {
        return Err(Error::Precondition(format!(
            "not a frame (off-diagonal {:.3e}, trace error {:.3e})",
            report.off_diagonal, report.trace_error
        )));
    }
    let d = m.cols();
    let mut out = ComplexMatrix::zeros(m.rows(), 2 * d);
    for i in 0..m.rows() {
        for (c, x) in m.row(i).iter().enumerate() {
            out[(i, c)] = C64::new(x.re, 0.0);
            out[(i, c + d)] = C64::new(x.im, 0.0);
        }
    }
    Ok(out)
}

/// How a coloring's covering property was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColoringMode {
    /// Every direction is within the cap radius of a center, proven by a mesh.
    Certified,
    /// Covering checked on random samples only.
    Statistical,
}

/// Default cap radius, strictly below `π/4`.
pub const DEFAULT_THETA: f64 = FRAC_PI_4 - 0.05;
/// Largest dimension built in certified mode.
pub const CERTIFIED_MAX_DIM: usize = 6;
/// Mesh gap aimed for when no resolution is given.
const TARGET_DELTA: f64 = 0.25;
const MAX_MESH_POINTS: u128 = 5_000_000;
const STATISTICAL_SAMPLES: usize = 200_000;
/// Slack for rounding in the certificate.
const ROUNDING_SLACK: f64 = 1e-9;

/// A finite coloring of the unit sphere in `R^dim`: the color of a
/// direction is the index of its nearest center. Every direction lies within
/// `theta < π/4` of its nearest center, so two directions of one color are
/// less than `π/2` apart and never orthogonal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphereColoring {
    pub dim: usize,
    pub theta: f64,
    pub mode: ColoringMode,
    /// Mesh intervals per cube-face axis (certified mode).
    pub resolution: usize,
    /// Angular mesh gap `arcsin(√(D−1)/resolution)` (certified mode).
    pub delta: f64,
    pub centers: Vec<Vec<f64>>,
}

fn normalize(v: &mut [f64]) -> f64 {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
    n
}

fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// Intervals per axis so that the mesh gap is at most `TARGET_DELTA`
/// (0.05 on the circle, where evenly spaced centers leave little room).
pub fn default_resolution(dim: usize) -> usize {
    let target = if dim == 2 { 0.05 } else { TARGET_DELTA };
    ((dim as f64 - 1.0).sqrt() / target.sin()).ceil() as usize
}

/// Grid points on the surface of `[-1, 1]^dim`, projected to the sphere,
/// flattened. Neighbouring points on a face are `2/resolution` apart.
fn cube_mesh(dim: usize, resolution: usize) -> Vec<f64> {
    let side = resolution + 1;
    let per_face = side.pow(dim as u32 - 1);
    let mut out = Vec::with_capacity(2 * dim * per_face * dim);
    let h = 2.0 / resolution as f64;
    let mut p = vec![0.0; dim];
    for axis in 0..dim {
        for sign in [-1.0, 1.0] {
            for mut code in 0..per_face {
                for c in (0..dim).filter(|&c| c != axis) {
                    p[c] = -1.0 + h * (code % side) as f64;
                    code /= side;
                }
                p[axis] = sign;
                let start = out.len();
                out.extend_from_slice(&p);
                normalize(&mut out[start..]);
            }
        }
    }
    out
}

/// Farthest-point greedy over `points` (flattened unit vectors) until every
/// point has a center with dot product at least `min_dot`. Covered points
/// can never be the farthest again, so they leave the scan.
fn farthest_point_centers(points: &[f64], dim: usize, first: usize, min_dot: f64) -> Vec<Vec<f64>> {
    let mut active: Vec<(usize, f64)> = (0..points.len() / dim).map(|i| (i, f64::NEG_INFINITY)).collect();
    let mut centers = Vec::new();
    let mut next = first;
    loop {
        let c = points[next * dim..(next + 1) * dim].to_vec();
        let (mut worst, mut worst_at) = (f64::INFINITY, 0);
        active.retain_mut(|(i, b)| {
            let dp = dot(&c, &points[*i * dim..(*i + 1) * dim]);
            if dp > *b {
                *b = dp;
            }
            if *b < worst {
                worst = *b;
                worst_at = *i;
            }
            *b < min_dot
        });
        centers.push(c);
        if active.is_empty() {
            return centers;
        }
        next = worst_at;
    }
}

impl SphereColoring {
    /// Builds a coloring of the unit sphere in `R^dim` with cap radius
    /// `theta`.
    ///
    /// For `dim <= CERTIFIED_MAX_DIM` centers are placed by farthest-point
    /// greedy over a cube-surface mesh whose points are within `delta` of
    /// every direction, until each mesh point is within `theta − delta` of a
    /// center; this proves every direction is within `theta`. On the circle
    /// the `⌈π/θ⌉` evenly spaced centers are used and certified the same way.
    /// Higher dimensions use random samples instead and are marked
    /// statistical.
    pub fn build(dim: usize, theta: f64, resolution: Option<usize>, seed: u64) -> Result<SphereColoring> {
        if dim < 2 {
            return Err(Error::InvalidParameter("sphere colorings need dim >= 2".into()));
        }
        if !(theta > 0.0 && theta < FRAC_PI_4) {
            return Err(Error::InvalidParameter(format!("cap radius {theta} must lie in (0, π/4)")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if dim > CERTIFIED_MAX_DIM {
            let mut points = Vec::with_capacity(STATISTICAL_SAMPLES * dim);
            for _ in 0..STATISTICAL_SAMPLES {
                let start = points.len();
                points.extend((0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)));
                normalize(&mut points[start..]);
            }
            let centers = farthest_point_centers(&points, dim, 0, theta.cos());
            return Ok(SphereColoring {
                dim,
                theta,
                mode: ColoringMode::Statistical,
                resolution: 0,
                delta: 0.0,
                centers,
            });
        }
        let resolution = resolution.unwrap_or_else(|| default_resolution(dim));
        if resolution == 0 {
            return Err(Error::InvalidParameter("mesh resolution must be positive".into()));
        }
        let gap = (dim as f64 - 1.0).sqrt() / resolution as f64;
        if gap >= 1.0 || gap.asin() >= theta {
            return Err(Error::InvalidParameter(format!(
                "mesh resolution {resolution} is too coarse for cap radius {theta}"
            )));
        }
        let delta = gap.asin();
        let size = 2 * dim as u128 * (resolution as u128 + 1).pow(dim as u32 - 1);
        if size > MAX_MESH_POINTS {
            return Err(Error::CapExceeded { what: "sphere mesh points", size, cap: MAX_MESH_POINTS });
        }
        let mesh = cube_mesh(dim, resolution);
        let min_dot = (theta - delta - ROUNDING_SLACK).cos();
        let centers = if dim == 2 {
            let count = (PI / theta).ceil() as usize;
            let offset = rng.random_range(0.0..2.0 * PI);
            (0..count)
                .map(|i| {
                    let a = offset + 2.0 * PI * i as f64 / count as f64;
                    vec![a.cos(), a.sin()]
                })
                .collect()
        } else {
            let first = rng.random_range(0..mesh.len() / dim);
            farthest_point_centers(&mesh, dim, first, min_dot)
        };
        let coloring = SphereColoring { dim, theta, mode: ColoringMode::Certified, resolution, delta, centers };
        // Independent check; neighbouring mesh points tend to share a center.
        let mut hint = 0;
        let uncovered = mesh
            .chunks(dim)
            .filter(|p| {
                if dot(&coloring.centers[hint], p) >= min_dot {
                    return false;
                }
                match coloring.centers.iter().position(|c| dot(c, p) >= min_dot) {
                    Some(i) => {
                        hint = i;
                        false
                    }
                    None => true,
                }
            })
            .count();
        if uncovered > 0 {
            return Err(Error::ConstructionFailed(format!(
                "{uncovered} mesh points lie farther than θ − δ from every center"
            )));
        }
        Ok(coloring)
    }

    pub fn color_count(&self) -> usize {
        self.centers.len()
    }

    pub fn is_certified(&self) -> bool {
        self.mode == ColoringMode::Certified
    }

    fn nearest(&self, unit: &[f64]) -> (usize, f64) {
        let mut best = (0, f64::NEG_INFINITY);
        for (i, c) in self.centers.iter().enumerate() {
            let dp = dot(c, unit);
            if dp > best.1 {
                best = (i, dp);
            }
        }
        best
    }

    /// Color of the direction of `v`.
    pub fn color(&self, v: &[f64]) -> Result<usize> {
        if v.len() != self.dim {
            return Err(Error::ShapeMismatch(format!("expected a vector of length {}", self.dim)));
        }
        let mut u = v.to_vec();
        if normalize(&mut u) == 0.0 {
            return Err(Error::InvalidParameter("the zero vector has no direction".into()));
        }
        Ok(self.nearest(&u).0)
    }

    /// Samples random orthogonal pairs and counts those sharing a color.
    pub fn audit_orthogonal_pairs(&self, samples: usize, seed: u64) -> usize {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut violations = 0;
        let mut done = 0;
        while done < samples {
            let mut u: Vec<f64> = (0..self.dim).map(|_| rng.sample(StandardNormal)).collect();
            let mut v: Vec<f64> = (0..self.dim).map(|_| rng.sample(StandardNormal)).collect();
            if normalize(&mut u) == 0.0 {
                continue;
            }
            let p = dot(&u, &v);
            v.iter_mut().zip(&u).for_each(|(x, y)| *x -= p * y);
            if normalize(&mut v) < 1e-6 {
                continue;
            }
            done += 1;
            if self.nearest(&u).0 == self.nearest(&v).0 {
                violations += 1;
            }
        }
        violations
    }
}

/// `build_sphere_coloring` with the default cap radius.
pub fn build_sphere_coloring(dim: usize, resolution: Option<usize>, seed: u64) -> Result<SphereColoring> {
    SphereColoring::build(dim, DEFAULT_THETA, resolution, seed)
}

/// Colors a real frame by its first row of norm above `1e3 * tol`: returns
/// that row's index and the color of its direction. Adjacent frames always
/// get different colors: the chosen rows of adjacent frames are orthogonal.
pub fn color_frame(c: &SphereColoring, m: &ComplexMatrix, tol: f64) -> Result<(usize, usize)> {
    if !c.is_certified() {
        return Err(Error::Precondition("frame coloring needs a certified sphere coloring".into()));
    }
    if m.cols() != c.dim {
        return Err(Error::ShapeMismatch(format!("frame has {} columns, coloring has dimension {}", m.cols(), c.dim)));
    }
    for i in 0..m.rows() {
        let row = m.row(i);
        if row.iter().any(|x| x.im.abs() > tol) {
            return Err(Error::Precondition("frame coloring needs a real frame".into()));
        }
        if norm(row) > 1e3 * tol {
            let real: Vec<f64> = row.iter().map(|x| x.re).collect();
            return Ok((i, c.color(&real)?));
        }
    }
    Err(Error::InvalidParameter("the frame has no nonzero row".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random_unitary;

    const TOL: f64 = 1e-9;

    fn real(rows: &[Vec<f64>]) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(rows).unwrap()
    }

    #[test]
    fn frame_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u = random_unitary(3, &mut rng).scale(C64::new(1.0 / 3f64.sqrt(), 0.0));
        assert!(is_frame(&u, TOL).is_frame);
        assert!(is_frame(&real(&[vec![0.6, 0.8]]), TOL).is_frame);
        let h = 0.5f64.sqrt();
        let twice = real(&[vec![h, 0.0], vec![h, 0.0]]);
        let r = is_frame(&twice, TOL);
        assert!(!r.is_frame && (r.off_diagonal - 0.5).abs() < 1e-12);
    }

    #[test]
    fn pair_indices_cover_rows() {
        for n in 2..6 {
            let mut seen: Vec<usize> =
                (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| pair_index(i, j, n))).collect();
            seen.sort_unstable();
            assert_eq!(seen, (0..n * n - n).collect::<Vec<_>>());
        }
    }

    #[test]
    fn two_vertex_adjacency() {
        let a = vec![0.6, 0.0];
        let b = vec![0.0, 0.8];
        let n_frame = real(&[a.clone(), b.clone()]);
        let m = real(&[a.clone(), b.clone()]);
        let m_prime = real(&[b, a]);
        assert!(check_frame_adjacency(&m, &m_prime, &n_frame, TOL).unwrap());
        let mut bumped = m.clone();
        bumped[(0, 0)] += C64::new(10.0 * TOL, 0.0);
        assert!(!check_frame_adjacency(&bumped, &m_prime, &n_frame, TOL).unwrap());
        assert!(check_frame_adjacency(&m, &m_prime, &real(&[vec![0.6, 0.0]]), TOL).is_err());
    }

    #[test]
    fn samples_are_adjacent() {
        for (n, d, seed) in [(2, 2, 7), (3, 4, 1), (4, 3, 9), (2, 1, 0)] {
            let s = sample_adjacent_frames(n, d, seed).unwrap();
            assert!(is_frame(&s.m, TOL).is_frame && is_frame(&s.m_prime, TOL).is_frame);
            assert!(check_frame_adjacency(&s.m, &s.m_prime, &s.witness, TOL).unwrap());
            let r = s.realified(TOL).unwrap();
            assert!(check_frame_adjacency(&r.m, &r.m_prime, &r.witness, 2.0 * TOL).unwrap());
        }
        assert!(sample_adjacent_frames(1, 2, 0).is_err());
    }

    #[test]
    fn realification_keeps_norms() {
        let s = sample_adjacent_frames(3, 2, 3).unwrap();
        let r = realify_frame(&s.m, TOL).unwrap();
        assert_eq!(r.cols(), 4);
        for i in 0..3 {
            assert!((norm(s.m.row(i)) - norm(r.row(i))).abs() < 1e-12);
        }
        let plain = real(&[vec![0.6, 0.0], vec![0.0, 0.8]]);
        let r = realify_frame(&plain, TOL).unwrap();
        assert_eq!(r.row(1), &[ZERO, C64::new(0.8, 0.0), ZERO, ZERO][..]);
        assert!(realify_frame(&real(&[vec![1.0, 1.0]]), TOL).is_err());
    }

    #[test]
    fn circle_uses_closed_form_count() {
        let c = build_sphere_coloring(2, None, 0).unwrap();
        assert_eq!(c.color_count(), (PI / DEFAULT_THETA).ceil() as usize);
        assert_eq!(c.color_count(), 5);
        assert_eq!(c.audit_orthogonal_pairs(10_000, 1), 0);
    }

    #[test]
    fn low_dimensional_colorings_split_orthogonal_pairs() {
        for dim in [3, 4] {
            let c = build_sphere_coloring(dim, None, 2).unwrap();
            assert!(c.is_certified());
            assert_eq!(c.audit_orthogonal_pairs(20_000, 3), 0, "dim {dim}");
            let e0: Vec<f64> = (0..dim).map(|i| if i == 0 { 1.0 } else { 0.0 }).collect();
            let neg: Vec<f64> = e0.iter().map(|x| -x).collect();
            // Antipodes are allowed to differ or agree; both have a color.
            assert!(c.color(&e0).is_ok() && c.color(&neg).is_ok());
        }
        assert!(SphereColoring::build(3, FRAC_PI_4, None, 0).is_err());
        assert!(SphereColoring::build(3, DEFAULT_THETA, Some(1), 0).is_err());
    }

    #[test]
    fn frame_colors() {
        let c = build_sphere_coloring(4, None, 0).unwrap();
        let m = real(&[vec![0.0; 4], vec![0.0, 1.0, 0.0, 0.0]]);
        assert_eq!(color_frame(&c, &m, TOL).unwrap().0, 1);
        assert!(color_frame(&c, &real(&[vec![0.0; 4]]), TOL).is_err());
        for seed in 0..20 {
            let s = sample_adjacent_frames(2, 2, seed).unwrap().realified(TOL).unwrap();
            assert_ne!(color_frame(&c, &s.m, TOL).unwrap(), color_frame(&c, &s.m_prime, TOL).unwrap(), "seed {seed}");
        }
    }
}
