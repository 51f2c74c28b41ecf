//! Marked disks, polyline arcs and the extraction of arc-data from them.

use serde::Serialize;

use super::arcdata::{ArcData, Event, Side};
use super::MapClassError;

/// Minimum horizontal gap between punctures; closer pairs are pushed apart.
pub const MIN_GAP: f64 = 1e-6;

/// Punctures `z_0, …, z_{n-1}` in the open unit disk, indexed left to right.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MarkedDisk {
    points: Vec<[f64; 2]>,
}

impl MarkedDisk {
    pub fn new(points: Vec<[f64; 2]>) -> Result<MarkedDisk, MapClassError> {
        if points.len() < 2 {
            return Err(MapClassError::Degeneracy("a marked disk needs two punctures".into()));
        }
        for (k, p) in points.iter().enumerate() {
            if !(p[0].hypot(p[1]) < 1.0) {
                return Err(MapClassError::Degeneracy(format!("puncture {k} outside the disk")));
            }
        }
        if points.windows(2).any(|w| !(w[0][0] < w[1][0])) {
            return Err(MapClassError::Degeneracy("punctures not strictly left to right".into()));
        }
        Ok(MarkedDisk { points })
    }

    /// Sorts points by `x` and nudges near-ties apart by at most [`MIN_GAP`].
    /// Returns the disk and, for each puncture, the index of its source point.
    pub fn from_unsorted(points: &[[f64; 2]]) -> Result<(MarkedDisk, Vec<usize>), MapClassError> {
        let mut order: Vec<usize> = (0..points.len()).collect();
        order.sort_by(|&i, &j| points[i][0].total_cmp(&points[j][0]));
        let mut sorted: Vec<[f64; 2]> = order.iter().map(|&i| points[i]).collect();
        for k in 1..sorted.len() {
            if sorted[k][0] - sorted[k - 1][0] < MIN_GAP {
                sorted[k][0] = sorted[k - 1][0] + MIN_GAP;
            }
        }
        Ok((MarkedDisk::new(sorted)?, order))
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, k: usize) -> [f64; 2] {
        self.points[k]
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }
}

/// Polyline from puncture `start` to puncture `end`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Arc {
    pub start: usize,
    pub end: usize,
    pub points: Vec<[f64; 2]>,
}

impl Arc {
    /// The straight arc `p_i`, sampled with `segments` pieces.
    pub fn straight(disk: &MarkedDisk, i: usize, segments: usize) -> Arc {
        let (a, b) = (disk.point(i), disk.point(i + 1));
        let segments = segments.max(1);
        let points = (0..=segments)
            .map(|j| {
                let t = j as f64 / segments as f64;
                [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
            })
            .collect();
        Arc { start: i, end: i + 1, points }
    }

    pub fn max_segment(&self) -> f64 {
        self.points.windows(2).map(|w| dist(w[0], w[1])).fold(0.0, f64::max)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

pub fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Distance from `p` to the segment `[a, b]`.
pub fn segment_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2).clamp(0.0, 1.0)
    };
    dist(p, [a[0] + t * dx, a[1] + t * dy])
}

/// Crossings of `arc` with the vertical rays at the punctures, reduced.
///
/// A vertex lying exactly on a puncture's vertical line counts as lying to
/// its right, which perturbs the arc consistently into general position.
pub fn extract_arc_data(arc: &Arc, disk: &MarkedDisk) -> Result<ArcData, MapClassError> {
    let n = disk.len();
    if arc.points.len() < 2 {
        return Err(MapClassError::InvalidArc("polyline with fewer than two vertices".into()));
    }
    if arc.start >= n || arc.end >= n {
        return Err(MapClassError::InvalidArc(format!(
            "endpoints {}, {} on {n} punctures",
            arc.start, arc.end
        )));
    }
    let last = arc.points.len() - 2;
    let mut events = Vec::new();
    let mut hits: Vec<(f64, Event)> = Vec::new();
    for (s, w) in arc.points.windows(2).enumerate() {
        let (p, q) = (w[0], w[1]);
        hits.clear();
        for (k, z) in disk.points().iter().enumerate() {
            if (s == 0 && k == arc.start) || (s == last && k == arc.end) {
                continue;
            }
            if (p[0] >= z[0]) == (q[0] >= z[0]) {
                continue;
            }
            let t = (z[0] - p[0]) / (q[0] - p[0]);
            let y = p[1] + t * (q[1] - p[1]);
            let gap = y - z[1];
            if gap.abs() < 1e-12 {
                return Err(MapClassError::Degeneracy(format!(
                    "segment {s} passes through puncture {k}"
                )));
            }
            let side = if gap > 0.0 { Side::Over } else { Side::Under };
            hits.push((t, Event { puncture: k, side }));
        }
        hits.sort_by(|a, b| a.0.total_cmp(&b.0));
        events.extend(hits.iter().map(|h| h.1));
    }
    ArcData::new(n, arc.start, arc.end, events)
}

/// CSV rows `kind,index,vertex,x,y` for punctures and arcs.
pub fn plot_csv(disk: &MarkedDisk, arcs: &[Arc]) -> String {
    let mut out = String::from("kind,index,vertex,x,y\n");
    for (k, z) in disk.points().iter().enumerate() {
        out.push_str(&format!("puncture,{k},0,{:.12},{:.12}\n", z[0], z[1]));
    }
    for (i, a) in arcs.iter().enumerate() {
        for (j, p) in a.points.iter().enumerate() {
            out.push_str(&format!("arc,{i},{j},{:.12},{:.12}\n", p[0], p[1]));
        }
    }
    out
}
