//! The set E: a finite union of disjoint closed arcs on the unit circle,
//! together with its complementary gaps.
//!
//! Arc sets are required to be invariant under complex conjugation
//! (angle -> -angle) and must leave the point 1 uncovered; the gap whose
//! interior contains 1 is gap 0. Under this normalization the covering
//! map of the complement needs no rotation constant, and all downstream
//! conventions (reference points, divisor indexing) are deterministic.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// Absolute tolerance for angle comparisons, in radians.
pub const ANGLE_TOL: f64 = 1e-12;

/// A closed, non-degenerate arc traversed counterclockwise from
/// `start` to `end` (angles in radians, canonicalized to [0, 2pi)).
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Arc {
    pub start: f64,
    pub end: f64,
}

/// Canonicalize an angle into [0, 2pi).
pub fn wrap_angle(a: f64) -> f64 {
    let mut x = a.rem_euclid(TAU);
    if x >= TAU {
        x -= TAU;
    }
    x
}

impl Arc {
    pub fn new(start: f64, end: f64) -> Self {
        Arc {
            start: wrap_angle(start),
            end: wrap_angle(end),
        }
    }

    /// Counterclockwise length in (0, 2pi) for a valid arc.
    pub fn length(&self) -> f64 {
        let l = (self.end - self.start).rem_euclid(TAU);
        if l == 0.0 {
            TAU
        } else {
            l
        }
    }

    /// Offset of `angle` into the arc, counterclockwise from `start`.
    fn offset(&self, angle: f64) -> f64 {
        (angle - self.start).rem_euclid(TAU)
    }

    pub fn contains_closed(&self, angle: f64) -> bool {
        let o = self.offset(angle);
        o <= self.length() + ANGLE_TOL || o >= TAU - ANGLE_TOL
    }

    pub fn start_point(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.start)
    }

    pub fn end_point(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.end)
    }
}

/// An open gap (a_j, b_j) of the complement, traversed counterclockwise
/// from `start` (an arc end) to `end` (the next arc start).
#[derive(Clone, Copy, Debug)]
pub struct Gap {
    pub start: f64,
    pub end: f64,
}

impl Gap {
    pub fn length(&self) -> f64 {
        (self.end - self.start).rem_euclid(TAU)
    }

    pub fn contains_open(&self, angle: f64) -> bool {
        let o = (angle - self.start).rem_euclid(TAU);
        o > ANGLE_TOL && o < self.length() - ANGLE_TOL
    }

    pub fn contains_closed(&self, angle: f64) -> bool {
        let o = (angle - self.start).rem_euclid(TAU);
        o <= self.length() + ANGLE_TOL || o >= TAU - ANGLE_TOL
    }

    pub fn midpoint(&self) -> f64 {
        wrap_angle(self.start + 0.5 * self.length())
    }

    /// Angle at fraction `t` in [0, 1] across the gap.
    pub fn at_fraction(&self, t: f64) -> f64 {
        wrap_angle(self.start + t * self.length())
    }

    /// a_j, the gap endpoint reached first going counterclockwise.
    pub fn a_point(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.start)
    }

    /// b_j, the other gap endpoint.
    pub fn b_point(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.end)
    }
}

/// A validated arc set with its derived gap list.
///
/// Immutable after construction; share freely across threads.
#[derive(Clone, Debug)]
pub struct ArcSet {
    arcs: Vec<Arc>,
    gaps: Vec<Gap>,
}

impl ArcSet {
    /// Validate and build. The gap whose interior contains the point 1
    /// becomes gap 0; the remaining gaps follow counterclockwise.
    pub fn new(arcs: Vec<Arc>) -> Result<Self> {
        if arcs.is_empty() {
            return Err(Error::InvalidParameter("at least one arc required".into()));
        }
        for (i, a) in arcs.iter().enumerate() {
            let l = a.length();
            if l <= ANGLE_TOL || l >= TAU - ANGLE_TOL {
                return Err(Error::DegenerateArc {
                    index: i,
                    length: l,
                });
            }
        }
        let mut sorted = arcs;
        sorted.sort_by(|x, y| x.start.partial_cmp(&y.start).unwrap());

        // disjointness of closed arcs: positive gap between consecutive ones
        let n = sorted.len();
        for i in 0..n {
            let cur = &sorted[i];
            let next = &sorted[(i + 1) % n];
            let gap_len = (next.start - cur.end).rem_euclid(TAU);
            if gap_len <= ANGLE_TOL || gap_len >= TAU - ANGLE_TOL {
                return Err(Error::OverlappingArcs(i, (i + 1) % n));
            }
            // an arc fully containing the next one also shows up as overlap
            if cur.contains_closed(next.start) && n > 1 {
                return Err(Error::OverlappingArcs(i, (i + 1) % n));
            }
        }

        // conjugation symmetry: reflected arc (2pi - end, 2pi - start) present
        for a in &sorted {
            let rs = wrap_angle(-a.end);
            let re = wrap_angle(-a.start);
            let found = sorted
                .iter()
                .any(|b| angle_close(b.start, rs) && angle_close(b.end, re));
            if !found {
                return Err(Error::AsymmetricArcSet);
            }
        }

        for a in &sorted {
            if a.contains_closed(0.0) {
                return Err(Error::PointOneInsideE);
            }
        }

        let mut gaps: Vec<Gap> = (0..n)
            .map(|i| Gap {
                start: sorted[i].end,
                end: sorted[(i + 1) % n].start,
            })
            .collect();
        let zero_pos = gaps
            .iter()
            .position(|g| g.contains_open(0.0))
            .ok_or(Error::PointOneInsideE)?;
        gaps.rotate_left(zero_pos);

        Ok(ArcSet { arcs: sorted, gaps })
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    /// Gaps ordered with gap 0 (containing the point 1) first.
    pub fn gaps(&self) -> &[Gap] {
        &self.gaps
    }

    pub fn genus(&self) -> usize {
        self.arcs.len() - 1
    }

    /// All 2g+2 branch points (arc endpoints) as unit-circle points.
    pub fn branch_points(&self) -> Vec<Complex64> {
        let mut pts = Vec::with_capacity(2 * self.arcs.len());
        for a in &self.arcs {
            pts.push(a.start_point());
            pts.push(a.end_point());
        }
        pts
    }

    pub fn contains_angle(&self, angle: f64) -> bool {
        self.arcs.iter().any(|a| a.contains_closed(angle))
    }

    /// Index of the gap whose closed closure contains the angle, if any.
    pub fn gap_containing(&self, angle: f64) -> Option<usize> {
        self.gaps.iter().position(|g| g.contains_closed(angle))
    }

    pub fn to_json(&self) -> String {
        let file = ArcsFile {
            arcs: self.arcs.clone(),
        };
        serde_json::to_string_pretty(&file).expect("arcs serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ArcsFile = serde_json::from_str(text)?;
        ArcSet::new(file.arcs)
    }
}

fn angle_close(x: f64, y: f64) -> bool {
    let d = (x - y).rem_euclid(TAU);
    d <= ANGLE_TOL || d >= TAU - ANGLE_TOL
}

/// On-disk JSON schema: `{"arcs": [{"start": <radians>, "end": <radians>}]}`.
#[derive(Serialize, Deserialize)]
struct ArcsFile {
    arcs: Vec<Arc>,
}

/// The symmetric one-arc set from angle `2 theta` to `2 pi - 2 theta`.
pub fn one_arc_set(theta: f64) -> Result<ArcSet> {
    ArcSet::new(vec![Arc::new(2.0 * theta, TAU - 2.0 * theta)])
}
