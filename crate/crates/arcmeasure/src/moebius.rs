//! Moebius maps and the function-level transforms built from them:
//! the Cayley transform between Schur and Caratheodory functions, the
//! one-parameter rotation family M_theta, and the three-point map onto
//! the half-plane model of gap 0.

use num_complex::Complex64;
use std::f64::consts::TAU;
use std::sync::Arc as Shared;

use crate::arcset::ArcSet;
use crate::error::{Error, Result};

/// Domain tag carried by an evaluable analytic function.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    UnitDisk,
    ExteriorDisk,
    /// The slit sphere, complement of the arc set.
    SlitPlane,
    /// Upper half-plane (the image of the disk under the gap-0 map).
    UpperHalfPlane,
}

/// An evaluable analytic function handle. Evaluation is deterministic
/// and re-entrant: closures capture immutable data only.
#[derive(Clone)]
pub struct AnalyticFn {
    domain: Domain,
    f: Shared<dyn Fn(Complex64) -> Result<Complex64> + Send + Sync>,
}

impl AnalyticFn {
    pub fn new<F>(domain: Domain, f: F) -> Self
    where
        F: Fn(Complex64) -> Result<Complex64> + Send + Sync + 'static,
    {
        AnalyticFn {
            domain,
            f: Shared::new(f),
        }
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        (self.f)(z)
    }
}

impl std::fmt::Debug for AnalyticFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "AnalyticFn({:?})", self.domain)
    }
}

/// z -> (a z + b) / (c z + d) with coefficients normalized so the
/// largest modulus is 1.
#[derive(Clone, Copy, Debug)]
pub struct MoebiusMap {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl MoebiusMap {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let scale = a.norm().max(b.norm()).max(c.norm()).max(d.norm());
        if scale == 0.0 {
            return Err(Error::SingularMoebius(0.0));
        }
        let (a, b, c, d) = (a / scale, b / scale, c / scale, d / scale);
        let det = (a * d - b * c).norm();
        if det <= 1e-14 {
            return Err(Error::SingularMoebius(det));
        }
        Ok(MoebiusMap { a, b, c, d })
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    pub fn eval_checked(&self, z: Complex64) -> Result<Complex64> {
        let den = self.c * z + self.d;
        if den.norm() <= 1e-14 * (self.a * z + self.b).norm().max(1.0) * 1e-2 {
            return Err(Error::PoleEncountered(z));
        }
        Ok((self.a * z + self.b) / den)
    }

    pub fn inverse(&self) -> MoebiusMap {
        MoebiusMap {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// The pole location -d/c (infinite when c = 0).
    pub fn pole(&self) -> Complex64 {
        -self.d / self.c
    }

    pub fn determinant(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }
}

/// M(z) = (1 + z tau s(z)) / (1 - z tau s(z)): Caratheodory function of
/// the rotated Schur function, normalized M(0) = 1.
pub fn cayley_schur_to_caratheodory(s: &AnalyticFn, tau: Complex64) -> Result<AnalyticFn> {
    if (tau.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "|tau| must be 1, got {}",
            tau.norm()
        )));
    }
    let s = s.clone();
    let domain = s.domain();
    Ok(AnalyticFn::new(domain, move |z| {
        let sv = s.eval(z)?;
        let t = z * tau * sv;
        let den = Complex64::new(1.0, 0.0) - t;
        if den.norm() < 1e-13 {
            return Err(Error::PoleEncountered(z));
        }
        Ok((Complex64::new(1.0, 0.0) + t) / den)
    }))
}

/// f(z) = (M(z) - 1) / (z (M(z) + 1)): the Schur function whose
/// parameter sequence the Schur algorithm extracts. Requires M(0) = 1;
/// the removable singularity at 0 is evaluated through a 16-point
/// discrete Cauchy integral on the circle |w| = 1e-2.
pub fn cayley_caratheodory_to_schur(m: &AnalyticFn) -> Result<AnalyticFn> {
    let m0 = m.eval(Complex64::new(0.0, 0.0))?;
    let dev = (m0 - Complex64::new(1.0, 0.0)).norm();
    if dev > 1e-10 {
        return Err(Error::NotNormalized(dev));
    }
    let m = m.clone();
    let domain = m.domain();
    Ok(AnalyticFn::new(domain, move |z| {
        if z.norm() < 1e-4 {
            // Cauchy mean of f on |w| = 1e-2, evaluated at z
            let radius = 1e-2;
            let n = 16usize;
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                let w = Complex64::from_polar(radius, TAU * k as f64 / n as f64);
                let mv = m.eval(w)?;
                let den = w * (mv + 1.0);
                if den.norm() < 1e-13 {
                    return Err(Error::PoleEncountered(w));
                }
                let fv = (mv - 1.0) / den;
                acc += fv * w / (w - z);
            }
            return Ok(acc / n as f64);
        }
        let mv = m.eval(z)?;
        let den = z * (mv + 1.0);
        if den.norm() < 1e-13 {
            return Err(Error::PoleEncountered(z));
        }
        Ok((mv - 1.0) / den)
    }))
}

/// The rotation family
/// M_theta = (cos(theta/2) M - i sin(theta/2)) / (-i sin(theta/2) M + cos(theta/2)).
/// M_0 = M, and the family composes additively in theta (mod 2pi).
pub fn theta_family(m: &AnalyticFn, theta: f64) -> Result<AnalyticFn> {
    if !(0.0..TAU + 1e-12).contains(&theta) {
        return Err(Error::InvalidParameter(format!(
            "theta must lie in [0, 2pi), got {theta}"
        )));
    }
    let ct = Complex64::new((theta / 2.0).cos(), 0.0);
    let st = Complex64::new(0.0, -(theta / 2.0).sin()); // -i sin(theta/2)
    let m = m.clone();
    let domain = m.domain();
    Ok(AnalyticFn::new(domain, move |z| {
        let mv = m.eval(z)?;
        let den = st * mv + ct;
        if den.norm() < 1e-13 {
            return Err(Error::PoleEncountered(z));
        }
        Ok((ct * mv + st) / den)
    }))
}

/// The unique Moebius map with lambda(a0) = 1, lambda(zref) = infinity,
/// lambda(b0) = -1, where (a0, b0) are the endpoints of gap 0 and zref
/// lies strictly inside gap 0. It maps the unit disk onto the upper
/// half-plane (checked via Im lambda(0) >= 0).
pub fn lambda_map(e: &ArcSet, zref: Complex64) -> Result<MoebiusMap> {
    let g0 = e.gaps()[0];
    if (zref.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::RefPointNotInGap(zref));
    }
    let ang = zref.arg();
    if !g0.contains_open(ang) {
        return Err(Error::RefPointNotInGap(zref));
    }
    let a0 = g0.a_point();
    let b0 = g0.b_point();
    // cross ratio C with C(b0) = 0, C(a0) = 1, C(zref) = inf; lambda = 2C - 1
    let k = (a0 - zref) / (a0 - b0);
    // C(z) = k (z - b0) / (z - zref)
    let map = MoebiusMap::new(
        2.0 * k - 1.0,
        -2.0 * k * b0 + zref,
        Complex64::new(1.0, 0.0),
        -zref,
    )?;
    let at_zero = map.eval(Complex64::new(0.0, 0.0));
    if at_zero.im < 0.0 {
        // three-point data already pins the map; a negative orientation
        // indicates gap data inconsistent with the disk side
        return Err(Error::ConsistencyCheck {
            what: "lambda_map orientation Im lambda(0) >= 0",
            residual: at_zero.im,
        });
    }
    Ok(map)
}
