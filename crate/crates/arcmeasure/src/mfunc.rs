//! Rational functions on the double with prescribed pole divisor:
//! construction from a divisor, least-squares recovery of the divisor
//! from samples, and selection of the rotation-family member with a
//! pole at a reference gap point.
//!
//! A function is stored as (p(z) + sheet * q * w(z)) / d(z) with d the
//! monic polynomial over the divisor base points, deg p <= g+1, and q
//! scalar. The divisor conditions cancel the pole on the opposite
//! sheet; the two normalizations (value 1 at the origin, value -1 over
//! infinity on the physical sheet) close the square linear system.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::arcset::wrap_angle;
use crate::curve::{Divisor, DivisorPoint, HyperellipticCurve, BRANCH_TOL};
use crate::error::{Error, Result};
use crate::linalg::{solve_least_squares, Matrix};
use crate::moebius::{theta_family, AnalyticFn, Domain};
use crate::poly;

/// Condition-estimate ceiling before a divisor is reported as singular.
const COND_LIMIT: f64 = 1e12;
/// Residual ceiling for the defining conditions after the solve.
const BUILD_RESIDUAL_TOL: f64 = 1e-10;
/// Positivity floor for Re M on the disk test grid.
const POSITIVITY_FLOOR: f64 = -1e-8;
/// One-sided boundary evaluation offset.
pub const BOUNDARY_DELTA: f64 = 1e-7;

/// A rational function on the double, evaluable on both sheets.
#[derive(Clone, Debug)]
pub struct SurfaceFunction {
    curve: HyperellipticCurve,
    divisor: Divisor,
    /// numerator polynomial p, ascending coefficients, deg <= g+1
    p: Vec<Complex64>,
    /// coefficient of w in the numerator
    q: Complex64,
    /// condition estimate of the construction or fit system
    cond_estimate: f64,
}

impl SurfaceFunction {
    pub fn curve(&self) -> &HyperellipticCurve {
        &self.curve
    }

    pub fn divisor(&self) -> &Divisor {
        &self.divisor
    }

    pub fn p(&self) -> &[Complex64] {
        &self.p
    }

    pub fn q(&self) -> Complex64 {
        self.q
    }

    pub fn cond_estimate(&self) -> f64 {
        self.cond_estimate
    }

    fn d_at(&self, z: Complex64) -> Complex64 {
        self.divisor
            .points()
            .iter()
            .fold(Complex64::new(1.0, 0.0), |acc, t| acc * (z - t.point()))
    }

    /// Value on the physical sheet.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.eval_sheet(z, 1)
    }

    pub fn eval_sheet(&self, z: Complex64, sheet: i8) -> Complex64 {
        let num = poly::eval(&self.p, z) + self.curve.w_sheet(z, sheet) * self.q;
        num / self.d_at(z)
    }

    /// The physical-sheet limit over infinity, p_{g+1} + q.
    pub fn value_at_infinity(&self) -> Complex64 {
        *self.p.last().expect("nonempty p") + self.q
    }

    /// Evaluable handle on the slit sphere (physical sheet).
    pub fn analytic_fn(&self) -> AnalyticFn {
        let f = self.clone();
        AnalyticFn::new(Domain::SlitPlane, move |z| {
            let d = f.d_at(z);
            if d.norm() < 1e-13 {
                return Err(Error::PoleEncountered(z));
            }
            Ok(f.eval(z))
        })
    }

    /// Residue at the divisor point with index `j` on the physical sheet.
    pub fn residue_at(&self, j: usize) -> Complex64 {
        let pts = self.divisor.points();
        let t = pts[j].point();
        let num = poly::eval(&self.p, t) + self.curve.w(t) * self.q;
        let mut den = Complex64::new(1.0, 0.0);
        for (k, other) in pts.iter().enumerate() {
            if k != j {
                den *= t - other.point();
            }
        }
        num / den
    }
}

/// Build the unique function with pole divisor D and the two
/// normalizations, by solving the (g+3) x (g+3) system.
pub fn build_m(curve: &HyperellipticCurve, divisor: &Divisor) -> Result<SurfaceFunction> {
    let g1 = divisor.points().len(); // g + 1
    let n = g1 + 2;
    let mut a = Matrix::zeros(n, n);
    let mut rhs = vec![Complex64::new(0.0, 0.0); n];

    for (j, pt) in divisor.points().iter().enumerate() {
        let t = pt.point();
        let mut pw = Complex64::new(1.0, 0.0);
        for k in 0..=g1 {
            a.set(j, k, pw);
            pw *= t;
        }
        let at_branch = curve.near_branch_point(t, BRANCH_TOL);
        // interior point: cancel the pole on the opposite sheet,
        // p(t) - eps q w(t) = 0; branch point: p(t) = 0
        let coeff = if at_branch {
            Complex64::new(0.0, 0.0)
        } else {
            -curve.w(t) * pt.sheet as f64
        };
        a.set(j, g1 + 1, coeff);
    }

    // value 1 at the origin: p(0) + q w(0) = d(0)
    let d0 = divisor
        .points()
        .iter()
        .fold(Complex64::new(1.0, 0.0), |acc, t| acc * (-t.point()));
    a.set(g1, 0, Complex64::new(1.0, 0.0));
    a.set(g1, g1 + 1, curve.w(Complex64::new(0.0, 0.0)));
    rhs[g1] = d0;

    // value -1 over infinity: p_{g+1} + q = -1
    a.set(g1 + 1, g1, Complex64::new(1.0, 0.0));
    a.set(g1 + 1, g1 + 1, Complex64::new(1.0, 0.0));
    rhs[g1 + 1] = Complex64::new(-1.0, 0.0);

    let sol = solve_least_squares(&a, &rhs, None);
    if !sol.cond_estimate.is_finite() || sol.cond_estimate > COND_LIMIT {
        return Err(Error::SingularSystem {
            cond: sol.cond_estimate,
            divisor: format!("{:?}", divisor.points()),
        });
    }
    let p = sol.x[..=g1].to_vec();
    let q = sol.x[g1 + 1];
    let m = SurfaceFunction {
        curve: curve.clone(),
        divisor: divisor.clone(),
        p,
        q,
        cond_estimate: sol.cond_estimate,
    };

    // re-verify the defining conditions directly
    let mut residual: f64 = 0.0;
    for pt in divisor.points() {
        let t = pt.point();
        let val = if curve.near_branch_point(t, BRANCH_TOL) {
            poly::eval(&m.p, t)
        } else {
            poly::eval(&m.p, t) - m.q * curve.w(t) * pt.sheet as f64
        };
        residual = residual.max(val.norm());
    }
    residual = residual.max((m.eval(Complex64::new(0.0, 0.0)) - 1.0).norm());
    residual = residual.max((m.value_at_infinity() + 1.0).norm());
    if residual > BUILD_RESIDUAL_TOL {
        return Err(Error::SingularSystem {
            cond: sol.cond_estimate,
            divisor: format!("residual {residual:.3e} for {:?}", divisor.points()),
        });
    }

    // positivity of Re M on a polar grid in the open disk; a violation
    // means inconsistent sheet labeling and must abort, never be
    // silently patched by flipping signs
    let mut min_re = f64::MAX;
    for ir in 0..20 {
        let rad = 0.05 + 0.9 * ir as f64 / 19.0;
        for ia in 0..20 {
            let z = Complex64::from_polar(rad, TAU * ia as f64 / 20.0);
            min_re = min_re.min(m.eval(z).re);
        }
    }
    if min_re < POSITIVITY_FLOOR {
        return Err(Error::PositivityViolation(min_re));
    }

    Ok(m)
}

/// Outcome of a divisor fit.
#[derive(Clone, Debug)]
pub struct FitOutcome {
    pub function: SurfaceFunction,
    pub divisor: Divisor,
    /// max relative sample residual
    pub residual: f64,
    pub iterations: usize,
}

/// Fit (p, q, d) to samples of a function on the physical sheet by
/// iteratively reweighted linear least squares: each pass solves the
/// linearized system p(z) + q w(z) - M d(z) = 0 weighted by the
/// previous denominator, then refreshes the roots of d. Initial roots
/// sit at the gap midpoints.
pub fn fit_m(curve: &HyperellipticCurve, samples: &[(Complex64, Complex64)]) -> Result<FitOutcome> {
    let g1 = curve.genus() + 1;
    let min_samples = 4 * (g1 + 1);
    if samples.len() < min_samples {
        return Err(Error::InvalidParameter(format!(
            "need at least {min_samples} samples, got {}",
            samples.len()
        )));
    }
    let ws: Vec<Complex64> = samples.iter().map(|&(z, _)| curve.w(z)).collect();
    let w0 = curve.w(Complex64::new(0.0, 0.0));

    let mut droots: Vec<Complex64> = curve
        .arcset()
        .gaps()
        .iter()
        .map(|g| Complex64::from_polar(1.0, g.midpoint()))
        .collect();

    let nunk = (g1 + 1) + 1 + g1; // p coeffs, q, lower d coeffs (monic)
    let nrows = samples.len() + 2;
    let mut iterations = 0;
    let mut pfit: Vec<Complex64> = Vec::new();
    let mut qfit = Complex64::new(0.0, 0.0);
    let mut cond = 0.0;

    for it in 0..50 {
        iterations = it + 1;
        let dprev = poly::from_roots(&droots);
        let mut a = Matrix::zeros(nrows, nunk);
        let mut rhs = vec![Complex64::new(0.0, 0.0); nrows];
        for (i, &(z, mv)) in samples.iter().enumerate() {
            let weight = 1.0 / poly::eval(&dprev, z).norm().max(1e-12);
            let mut pw = Complex64::new(weight, 0.0);
            for k in 0..=g1 {
                a.set(i, k, pw);
                pw *= z;
            }
            a.set(i, g1 + 1, ws[i] * weight);
            let mut zw = Complex64::new(weight, 0.0);
            for k in 0..g1 {
                a.set(i, g1 + 2 + k, -mv * zw);
                zw *= z;
            }
            rhs[i] = mv * zw; // mv * z^{g1} * weight
        }
        // normalization rows keep the fitted member in the class
        a.set(samples.len(), g1, Complex64::new(1.0, 0.0));
        a.set(samples.len(), g1 + 1, Complex64::new(1.0, 0.0));
        rhs[samples.len()] = Complex64::new(-1.0, 0.0);
        a.set(samples.len() + 1, 0, Complex64::new(1.0, 0.0));
        a.set(samples.len() + 1, g1 + 1, w0);
        a.set(samples.len() + 1, g1 + 2, -Complex64::new(1.0, 0.0));

        let sol = solve_least_squares(&a, &rhs, None);
        pfit = sol.x[..=g1].to_vec();
        qfit = sol.x[g1 + 1];
        cond = sol.cond_estimate;
        let mut dcoef = sol.x[g1 + 2..].to_vec();
        dcoef.push(Complex64::new(1.0, 0.0));
        let newroots = poly::roots(&dcoef, Some(&droots));
        // pair new roots with old ones to measure movement
        let mut moved: f64 = 0.0;
        for &nr in &newroots {
            let best = droots
                .iter()
                .map(|&o| (nr - o).norm())
                .fold(f64::MAX, f64::min);
            moved = moved.max(best);
        }
        droots = newroots;
        if moved < 1e-13 {
            break;
        }
    }

    // residual of the final rational function on the samples
    let dfin = poly::from_roots(&droots);
    let mut residual: f64 = 0.0;
    for (i, &(z, mv)) in samples.iter().enumerate() {
        let fit = (poly::eval(&pfit, z) + qfit * ws[i]) / poly::eval(&dfin, z);
        residual = residual.max((fit - mv).norm() / (1.0 + mv.norm()));
    }
    if !residual.is_finite() || residual > 1e-6 {
        return Err(Error::NoConvergence {
            residual,
            iterations,
        });
    }

    // read the divisor off the roots: project onto the circle, locate
    // the gap, and keep the sheet on which the pole survives
    let gaps = curve.arcset().gaps();
    let mut pts = Vec::with_capacity(droots.len());
    for &root in &droots {
        if (root.norm() - 1.0).abs() > 1e-6 {
            return Err(Error::NoConvergence {
                residual: (root.norm() - 1.0).abs(),
                iterations,
            });
        }
        let ang = wrap_angle(root.arg());
        if !gaps.iter().any(|g| g.contains_closed(ang)) {
            return Err(Error::NoConvergence {
                residual,
                iterations,
            });
        }
        let t = Complex64::from_polar(1.0, ang);
        let sheet = if curve.near_branch_point(t, BRANCH_TOL) {
            1
        } else {
            let pv = poly::eval(&pfit, t);
            let wv = curve.w(t) * qfit;
            if (pv + wv).norm() >= (pv - wv).norm() {
                1
            } else {
                -1
            }
        };
        pts.push(DivisorPoint { angle: ang, sheet });
    }
    let divisor = Divisor::new(pts, curve.arcset())?;
    let function = SurfaceFunction {
        curve: curve.clone(),
        divisor: divisor.clone(),
        p: pfit,
        q: qfit,
        cond_estimate: cond,
    };
    Ok(FitOutcome {
        function,
        divisor,
        residual,
        iterations,
    })
}

/// Pick the unique rotation angle theta for which the family member
/// M_theta acquires a pole at `zref` (a point strictly inside gap 0),
/// and return that member.
pub fn select_theta(m: &SurfaceFunction, zref: Complex64) -> Result<(f64, AnalyticFn)> {
    let g0 = m.curve().arcset().gaps()[0];
    let ang = wrap_angle(zref.arg());
    if (zref.norm() - 1.0).abs() > 1e-9 || !g0.contains_open(ang) {
        return Err(Error::RefPointNotInGap(zref));
    }
    for pt in m.divisor().points() {
        if (pt.point() - zref).norm() < 1e-9 {
            return Err(Error::RefIsPole);
        }
    }
    let v = m.eval(zref);
    if !v.is_finite() || v.norm() > 1e9 {
        return Err(Error::RefIsPole);
    }
    if v.re.abs() > 1e-6 {
        return Err(Error::NotImaginaryAtRef(v.re.abs()));
    }
    // cos(theta/2) = i sin(theta/2) v with v = i y: cot(theta/2) = -y
    let y = v.im;
    let theta = wrap_angle(2.0 * 1.0_f64.atan2(-y));
    let mt = theta_family(&m.analytic_fn(), theta)?;
    // the pole must actually be there
    for side in [1.0 - 1e-6, 1.0 + 1e-6] {
        let probe = mt.eval(zref * side)?;
        if probe.norm() <= 1e3 {
            return Err(Error::ConsistencyCheck {
                what: "selected member lacks the pole at the reference point",
                residual: probe.norm(),
            });
        }
    }
    Ok((theta, mt))
}
