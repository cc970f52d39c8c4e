//! The hyperelliptic double of the slit sphere: a branch-tracked square
//! root w(z) of the product over branch points, with its cut lying
//! exactly on the arcs, plus surface points and divisors.
//!
//! Each arc contributes one factor sqrt((z-u)(z-v)). The factor is
//! realized by a Moebius change of variable that sends the unit circle
//! to the real line and the arc to a bounded real segment; there the
//! principal-branch pair sqrt(s-su)*sqrt(s-sv) has its cut exactly on
//! that segment, so the pullback has its cut exactly on the arc. No
//! path tracking is needed and evaluation is stable arbitrarily close
//! to the cut. Two reference points per arc cover the Moebius pole.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::arcset::{wrap_angle, Arc, ArcSet};
use crate::error::{Error, Result};

/// Angular tolerance for identifying a divisor point with a branch point.
pub const BRANCH_TOL: f64 = 1e-9;

#[inline]
fn s_map(z: Complex64, c: Complex64) -> Complex64 {
    -Complex64::i() * (c + z) / (c - z)
}

/// cot((phi - gamma)/2): the image of exp(i phi) under the line map
/// anchored at exp(i gamma), computed to be exactly real.
#[inline]
fn cot_half(phi: f64, gamma: f64) -> f64 {
    1.0 / ((phi - gamma) * 0.5).tan()
}

#[derive(Clone, Debug)]
struct FactorRep {
    c: Complex64,
    su: f64,
    sv: f64,
    kappa: Complex64,
}

impl FactorRep {
    fn new(ang_u: f64, ang_v: f64, gamma: f64) -> Self {
        let u = Complex64::from_polar(1.0, ang_u);
        let v = Complex64::from_polar(1.0, ang_v);
        let c = Complex64::from_polar(1.0, gamma);
        let kappa = ((c - u) * (c - v) / (-4.0 * c * c)).sqrt();
        FactorRep {
            c,
            su: cot_half(ang_u, gamma),
            sv: cot_half(ang_v, gamma),
            kappa,
        }
    }

    fn eval(&self, z: Complex64) -> Complex64 {
        let s = s_map(z, self.c);
        let g = (s - self.su).sqrt() * (s - self.sv).sqrt();
        self.kappa * (self.c - z) * g
    }
}

/// sqrt((z - u)(z - v)) with its branch cut exactly on the arc u -> v.
#[derive(Clone, Debug)]
struct ArcCutFactor {
    reps: [FactorRep; 2],
    relsign: f64,
}

impl ArcCutFactor {
    fn new(arc: &Arc) -> Self {
        let len = arc.length();
        let comp = TAU - len;
        // reference points on the complementary arc, away from the endpoints
        let r0 = FactorRep::new(arc.start, arc.end, arc.end + 0.5 * comp);
        let r1 = FactorRep::new(arc.start, arc.end, arc.end + 0.25 * comp);
        let probe = Complex64::new(37.0, 11.0);
        let a = r0.eval(probe);
        let b = r1.eval(probe);
        let relsign = if (a - b).norm() <= (a + b).norm() {
            1.0
        } else {
            -1.0
        };
        ArcCutFactor {
            reps: [r0, r1],
            relsign,
        }
    }

    fn eval(&self, z: Complex64) -> Complex64 {
        let d0 = (z - self.reps[0].c).norm();
        let d1 = (z - self.reps[1].c).norm();
        if d0 >= d1 {
            self.reps[0].eval(z)
        } else {
            self.relsign * self.reps[1].eval(z)
        }
    }
}

/// A point on the double: a base point plus a sheet label. Sheet +1 is
/// the physical sheet (where w carries the sign fixed at real +infinity);
/// at branch points the two sheets are identified and the label is +1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurfacePoint {
    pub z: Complex64,
    pub sheet: i8,
}

/// One divisor entry: a point on the closed gap `gap_index`, with sheet sign.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct DivisorPoint {
    pub angle: f64,
    pub sheet: i8,
}

impl DivisorPoint {
    pub fn point(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.angle)
    }
}

/// A divisor: exactly one point per closed gap, ordered by gap index.
#[derive(Clone, Debug, PartialEq)]
pub struct Divisor {
    points: Vec<DivisorPoint>,
}

impl Divisor {
    /// Validate against an arc set: g+1 points, one per closed gap, with
    /// sheets canonicalized to +1 at branch points.
    pub fn new(points: Vec<DivisorPoint>, arcs: &ArcSet) -> Result<Self> {
        let gaps = arcs.gaps();
        if points.len() != gaps.len() {
            return Err(Error::WrongGapCount {
                got: points.len(),
                expected: gaps.len(),
            });
        }
        let mut per_gap: Vec<Option<DivisorPoint>> = vec![None; gaps.len()];
        for (i, p) in points.iter().enumerate() {
            if p.sheet != 1 && p.sheet != -1 {
                return Err(Error::InvalidParameter(format!(
                    "sheet must be +1 or -1, got {}",
                    p.sheet
                )));
            }
            let ang = wrap_angle(p.angle);
            let gi =
                gaps.iter()
                    .position(|g| g.contains_closed(ang))
                    .ok_or(Error::PointOffGap {
                        index: i,
                        angle: ang,
                    })?;
            if per_gap[gi].is_some() {
                return Err(Error::WrongGapCount {
                    got: points.len(),
                    expected: gaps.len(),
                });
            }
            let g = gaps[gi];
            let at_branch =
                angle_dist(ang, g.start) <= BRANCH_TOL || angle_dist(ang, g.end) <= BRANCH_TOL;
            per_gap[gi] = Some(DivisorPoint {
                angle: ang,
                sheet: if at_branch { 1 } else { p.sheet },
            });
        }
        Ok(Divisor {
            points: per_gap.into_iter().map(|p| p.unwrap()).collect(),
        })
    }

    pub fn points(&self) -> &[DivisorPoint] {
        &self.points
    }

    pub fn to_json(&self) -> String {
        let file = DivisorFile {
            divisor: self.points.clone(),
        };
        serde_json::to_string_pretty(&file).expect("divisor serialize")
    }

    pub fn from_json(text: &str, arcs: &ArcSet) -> Result<Self> {
        let file: DivisorFile = serde_json::from_str(text)?;
        Divisor::new(file.divisor, arcs)
    }
}

/// On-disk JSON schema: `{"divisor": [{"angle": <radians>, "sheet": 1|-1}]}`.
#[derive(Serialize, Deserialize)]
struct DivisorFile {
    divisor: Vec<DivisorPoint>,
}

fn angle_dist(x: f64, y: f64) -> f64 {
    let d = (x - y).rem_euclid(TAU);
    d.min(TAU - d)
}

/// The double of the slit sphere, carrying the branch of
/// w(z) = sqrt(prod_j (z - a_j)(z - b_j)) that is continuous off E and
/// positive on the real axis beyond all branch points.
#[derive(Clone, Debug)]
pub struct HyperellipticCurve {
    arcset: ArcSet,
    factors: Vec<ArcCutFactor>,
    sign: f64,
    branch_points: Vec<Complex64>,
}

impl HyperellipticCurve {
    pub fn new(arcs: &ArcSet) -> Self {
        let factors: Vec<ArcCutFactor> = arcs.arcs().iter().map(ArcCutFactor::new).collect();
        let far = Complex64::new(1.0e6, 0.0);
        let mut raw = Complex64::new(1.0, 0.0);
        for f in &factors {
            raw *= f.eval(far);
        }
        let sign = if raw.re >= 0.0 { 1.0 } else { -1.0 };
        HyperellipticCurve {
            arcset: arcs.clone(),
            factors,
            sign,
            branch_points: arcs.branch_points(),
        }
    }

    pub fn arcset(&self) -> &ArcSet {
        &self.arcset
    }

    pub fn genus(&self) -> usize {
        self.arcset.genus()
    }

    pub fn branch_points(&self) -> &[Complex64] {
        &self.branch_points
    }

    /// The physical branch of w at z (any z not in the interior of E;
    /// on E itself the value is the one-sided limit selected by the
    /// rounding of the cut test and should not be relied upon).
    pub fn w(&self, z: Complex64) -> Complex64 {
        let mut p = Complex64::new(self.sign, 0.0);
        for f in &self.factors {
            p *= f.eval(z);
        }
        p
    }

    /// w on a chosen sheet.
    pub fn w_sheet(&self, z: Complex64, sheet: i8) -> Complex64 {
        let v = self.w(z);
        if sheet >= 0 {
            v
        } else {
            -v
        }
    }

    /// The defining product prod (z - a_j)(z - b_j).
    pub fn branch_product(&self, z: Complex64) -> Complex64 {
        self.branch_points
            .iter()
            .fold(Complex64::new(1.0, 0.0), |acc, &b| acc * (z - b))
    }

    /// Validate a divisor against this curve's arc set.
    pub fn validate_divisor(&self, points: Vec<DivisorPoint>) -> Result<Divisor> {
        Divisor::new(points, &self.arcset)
    }

    /// True if z is within `tol` of some branch point.
    pub fn near_branch_point(&self, z: Complex64, tol: f64) -> bool {
        self.branch_points.iter().any(|&b| (z - b).norm() <= tol)
    }
}
