//! From the surface to the punctured disk, and images of arcs under `f`.
//!
//! The region of `ℝ³` bounded by `X(ℝ)` that contains the origin is
//! star-shaped, so `p ↦ p/‖p‖` identifies `X(ℝ)` with the unit sphere. The
//! sphere minus `γ = (0,0,1)` goes to the plane by stereographic projection,
//! and a constant factor brings the punctures into the unit disk. Only the
//! left-to-right order of the punctures and the shapes of the arcs matter,
//! so a constant factor changes nothing; a radial compression such as
//! `w ↦ w/(1 + |w|)` would reorder the punctures and change the words.
//!
//! On the surface `γ` is the point `(0,0,1)` itself, and `f` swaps it with
//! `(0,0,-1)`, which lies over the centre of the disk.

use serde::Serialize;

use super::arcdata::ArcData;
use super::disk::{dist, extract_arc_data, segment_distance, Arc, MarkedDisk};
use super::MapClassError;
use crate::surface::{self, PseudoOrbit};

/// Points of the sphere closer than this to `γ` are rejected.
pub const POLE_TOL: f64 = 1e-9;

/// Punctures are scaled to lie within this radius.
const PUNCTURE_RADIUS: f64 = 0.5;

pub fn radial_project(p: [f64; 3]) -> [f64; 3] {
    let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    [p[0] / r, p[1] / r, p[2] / r]
}

/// Stereographic projection from `γ` to the plane.
pub fn stereo_project(s: [f64; 3]) -> Result<[f64; 2], MapClassError> {
    let d = (s[0] * s[0] + s[1] * s[1] + (s[2] - 1.0) * (s[2] - 1.0)).sqrt();
    if d < POLE_TOL {
        return Err(MapClassError::Pole { distance: d });
    }
    Ok([s[0] / (1.0 - s[2]), s[1] / (1.0 - s[2])])
}

/// Inverse of [`stereo_project`].
pub fn stereo_lift(w: [f64; 2]) -> [f64; 3] {
    let m = w[0] * w[0] + w[1] * w[1];
    [2.0 * w[0] / (m + 1.0), 2.0 * w[1] / (m + 1.0), (m - 1.0) / (m + 1.0)]
}

/// The point of `X(ℝ)` on the ray through the unit vector `s`.
pub fn surface_point(a: f64, s: [f64; 3]) -> [f64; 3] {
    let g = |t: f64| surface::q(&a, &[t * s[0], t * s[1], t * s[2]]);
    let (mut lo, mut hi) = (0.0, 1.0);
    while g(hi) < 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t = 0.5 * (lo + hi);
    [t * s[0], t * s[1], t * s[2]]
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrackConfig {
    /// Initial samples per straight arc.
    pub samples: usize,
    /// Longest allowed image segment.
    pub max_segment: f64,
    /// Bound on the number of vertices of one tracked arc.
    pub max_points: usize,
}

impl Default for TrackConfig {
    fn default() -> Self {
        TrackConfig { samples: 64, max_segment: 2e-3, max_points: 4_000_000 }
    }
}

/// The periodic orbit as a marked disk together with the induced map.
#[derive(Clone, Debug)]
pub struct ArcTracker {
    pub a: f64,
    /// Factor from the stereographic plane to disk coordinates.
    pub scale: f64,
    pub disk: MarkedDisk,
    /// Orbit index of each puncture.
    pub labels: Vec<usize>,
    /// Puncture index of the image of each puncture.
    pub image: Vec<usize>,
    pub config: TrackConfig,
}

impl ArcTracker {
    pub fn from_orbit(orbit: &PseudoOrbit, config: TrackConfig) -> Result<ArcTracker, MapClassError> {
        let a = orbit.parameter.mid_f64();
        let pts = (0..orbit.period())
            .map(|i| {
                let p = orbit.point(i).map_err(|e| MapClassError::Surface(e.to_string()))?;
                Ok([p[0].mid_f64(), p[1].mid_f64(), p[2].mid_f64()])
            })
            .collect::<Result<Vec<_>, MapClassError>>()?;
        let plane =
            pts.iter().map(|p| stereo_project(radial_project(*p))).collect::<Result<Vec<_>, _>>()?;
        let rmax = plane.iter().map(|w| w[0].hypot(w[1])).fold(0.0, f64::max);
        let scale = if rmax > 0.0 { PUNCTURE_RADIUS / rmax } else { 1.0 };
        let disk_pts: Vec<[f64; 2]> = plane.iter().map(|w| [w[0] * scale, w[1] * scale]).collect();
        let (disk, labels) = MarkedDisk::from_unsorted(&disk_pts)?;
        let n = labels.len();
        let mut slot = vec![0; n];
        for (k, &l) in labels.iter().enumerate() {
            slot[l] = k;
        }
        let image = labels.iter().map(|&l| slot[(l + 1) % n]).collect();
        let t = ArcTracker { a, scale, disk, labels, image, config };
        t.check_pole_preimage()?;
        Ok(t)
    }

    pub fn punctures(&self) -> usize {
        self.disk.len()
    }

    /// `ψ_γ`, from the surface to disk coordinates.
    pub fn to_disk(&self, p: [f64; 3]) -> Result<[f64; 2], MapClassError> {
        let w = stereo_project(radial_project(p))?;
        Ok([w[0] * self.scale, w[1] * self.scale])
    }

    /// `ψ_γ⁻¹` followed by the radial lift to `X(ℝ)`.
    pub fn to_surface(&self, w: [f64; 2]) -> [f64; 3] {
        surface_point(self.a, stereo_lift([w[0] / self.scale, w[1] / self.scale]))
    }

    /// `f′` on disk coordinates.
    pub fn map(&self, w: [f64; 2]) -> Result<[f64; 2], MapClassError> {
        let q = surface::f(&self.a, &self.to_surface(w))
            .map_err(|e| MapClassError::Surface(e.to_string()))?;
        self.to_disk(q)
    }

    /// `f⁻¹(γ)` lies over the centre of the disk; it must stay off the arcs
    /// `p_i` so that their images avoid `γ`.
    fn check_pole_preimage(&self) -> Result<(), MapClassError> {
        let g = [0.0, 0.0, 1.0];
        let pre = surface::f_inv(&self.a, &g).map_err(|e| MapClassError::Surface(e.to_string()))?;
        let c = self.to_disk(pre)?;
        for i in 0..self.punctures() - 1 {
            let d = segment_distance(c, self.disk.point(i), self.disk.point(i + 1));
            if d < 1e-6 {
                return Err(MapClassError::Pole { distance: d });
            }
        }
        Ok(())
    }

    pub fn straight(&self, i: usize) -> Arc {
        Arc::straight(&self.disk, i, self.config.samples)
    }

    /// Image of `arc` under `f′`, refined until every image segment is
    /// shorter than `max_segment`.
    pub fn track(&self, arc: &Arc) -> Result<Arc, MapClassError> {
        let h = self.config.max_segment;
        let mut out = vec![self.map(arc.points[0])?];
        for (s, w) in arc.points.windows(2).enumerate() {
            let mut stack = vec![(w[1], self.map(w[1])?)];
            let mut cur = (w[0], out[out.len() - 1]);
            while let Some(&(p, fp)) = stack.last() {
                if dist(cur.1, fp) <= h {
                    out.push(fp);
                    cur = (p, fp);
                    stack.pop();
                    if out.len() > self.config.max_points {
                        return Err(MapClassError::SubdivisionBudget {
                            points: self.config.max_points,
                            segment: s,
                        });
                    }
                } else {
                    let mid = [0.5 * (cur.0[0] + p[0]), 0.5 * (cur.0[1] + p[1])];
                    if dist(mid, cur.0) < 1e-15 {
                        return Err(MapClassError::SubdivisionBudget {
                            points: out.len(),
                            segment: s,
                        });
                    }
                    stack.push((mid, self.map(mid)?));
                }
            }
        }
        let (start, end) = (self.image[arc.start], self.image[arc.end]);
        let n = out.len();
        for (idx, k) in [(0, start), (n - 1, end)] {
            let z = self.disk.point(k);
            if dist(out[idx], z) > 1e-6 {
                return Err(MapClassError::Degeneracy(format!(
                    "image endpoint misses puncture {k} by {:e}",
                    dist(out[idx], z)
                )));
            }
            out[idx] = z;
        }
        Ok(Arc { start, end, points: out })
    }

    /// Tracked arcs `f′(p_0), …, f′(p_{n-2})`.
    pub fn tracked_arcs(&self) -> Result<Vec<Arc>, MapClassError> {
        (0..self.punctures() - 1).map(|i| self.track(&self.straight(i))).collect()
    }

    pub fn arc_data(&self, arcs: &[Arc]) -> Result<Vec<ArcData>, MapClassError> {
        arcs.iter().map(|a| extract_arc_data(a, &self.disk)).collect()
    }

    /// Sign of the Jacobian determinant of `f′` at `w`, from the image of a
    /// small right triangle.
    pub fn orientation(&self, w: [f64; 2], h: f64) -> Result<f64, MapClassError> {
        let a = self.map(w)?;
        let b = self.map([w[0] + h, w[1]])?;
        let c = self.map([w[0], w[1] + h])?;
        let area = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
        Ok(area.signum())
    }
}
