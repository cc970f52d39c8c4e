//! The fully explicit one-arc model: covering map of the slit sphere by
//! the disk, Blaschke factors, reproducing kernels of the Hardy space,
//! and numerical verifiers for the two-term kernel recurrence, the
//! kernel identity in the half-plane variable, and the resolvent factorizations that follow from it.
//!
//! Everything here is closed-form; the verifiers exist to pin the
//! conventions (normalizations, branch choices, reference points) that
//! the general-genus modules rely on.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

use crate::arcset::{one_arc_set, ArcSet};
use crate::error::{Error, Result};
use crate::moebius::{lambda_map, AnalyticFn, Domain, MoebiusMap};
use crate::poly::quadratic_roots;

/// The one-arc geometry: interior point zeta0 = i r over the origin,
/// arc endpoints b0 = exp(2 i theta), a0 = conj(b0), with
/// sin(theta) = (1 - r^2) / (1 + r^2).
#[derive(Clone, Copy, Debug)]
pub struct OneArcSpace {
    pub r: f64,
    pub zeta0: Complex64,
    pub theta: f64,
    pub a0: Complex64,
    pub b0: Complex64,
}

impl OneArcSpace {
    pub fn new(r: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&r) || r == 0.0 {
            return Err(Error::InvalidParameter(format!(
                "r must lie in (0,1), got {r}"
            )));
        }
        let theta = ((1.0 - r * r) / (1.0 + r * r)).asin();
        let b0 = Complex64::from_polar(1.0, 2.0 * theta);
        Ok(OneArcSpace {
            r,
            zeta0: Complex64::new(0.0, r),
            theta,
            a0: b0.conj(),
            b0,
        })
    }

    /// The arc set E = {exp(i phi): 2 theta <= phi <= 2 pi - 2 theta}.
    pub fn arcset(&self) -> ArcSet {
        one_arc_set(self.theta).expect("one-arc set is always valid")
    }

    fn c0(&self) -> Complex64 {
        (1.0 - self.zeta0.conj() * self.zeta0.conj()) / (1.0 - self.zeta0 * self.zeta0)
    }

    /// The covering map
    /// z = -((zeta - zeta0)/(zeta - conj zeta0))
    ///      ((1 - zeta zeta0)/(1 - zeta conj zeta0)) C0.
    /// Returns the infinity marker at zeta = conj(zeta0).
    pub fn covering_map(&self, zeta: Complex64) -> Complex64 {
        let den = (zeta - self.zeta0.conj()) * (1.0 - zeta * self.zeta0.conj());
        let num = (zeta - self.zeta0) * (1.0 - zeta * self.zeta0);
        if den.norm() == 0.0 {
            return Complex64::new(f64::INFINITY, f64::INFINITY);
        }
        -self.c0() * num / den
    }

    /// d z / d zeta at zeta = 0 (needed for residues at the reference point).
    pub fn covering_derivative_at_zero(&self) -> Complex64 {
        let z0 = self.zeta0;
        -self.c0() * (z0 - z0.conj()) * (1.0 - z0.norm_sqr()) / (z0.conj() * z0.conj())
    }

    /// The preimage of z inside the closed unit disk. The two preimages
    /// are zeta and 1/zeta; the disk root is selected and checked.
    pub fn inverse_covering(&self, z: Complex64) -> Result<Complex64> {
        let z0 = self.zeta0;
        let c0 = self.c0();
        // -C0 N(zeta) - z D(zeta) = 0, a self-reciprocal quadratic
        let c2 = c0 * z0 + z * z0.conj();
        let c1 = -c0 * (1.0 + z0 * z0) - z * (1.0 + z0.conj() * z0.conj());
        let roots = quadratic_roots(c2, c1, c2);
        let mut best: Option<(f64, Complex64)> = None;
        for zeta in roots {
            if !zeta.re.is_finite() || !zeta.im.is_finite() || zeta.norm() > 1.0 + 1e-9 {
                continue;
            }
            let err = (self.covering_map(zeta) - z).norm() / (1.0 + z.norm());
            if best.is_none_or(|(e, _)| err < e) {
                best = Some((err, zeta));
            }
        }
        match best {
            Some((err, zeta)) if err <= 1e-6 => Ok(zeta),
            _ => Err(Error::ConsistencyCheck {
                what: "inverse covering root selection",
                residual: best.map_or(f64::INFINITY, |(e, _)| e),
            }),
        }
    }

    /// The kernel-ratio Schur function in the disk variable,
    /// s = (1 - zeta conj(zeta0)) / (1 - zeta zeta0).
    pub fn schur_zeta(&self, zeta: Complex64) -> Complex64 {
        (1.0 - zeta * self.zeta0.conj()) / (1.0 - zeta * self.zeta0)
    }

    /// The same function of z on the slit sphere, via the inverse covering.
    pub fn schur_fn(&self) -> AnalyticFn {
        let space = *self;
        AnalyticFn::new(Domain::SlitPlane, move |z| {
            let zeta = space.inverse_covering(z)?;
            Ok(space.schur_zeta(zeta))
        })
    }
}

/// Normalized Blaschke factor: u (zeta - center)/(1 - conj(center) zeta)
/// with the unimodular u chosen so the value at `normalization_point`
/// is real and positive.
pub fn blaschke(
    zeta: Complex64,
    center: Complex64,
    normalization_point: Complex64,
) -> Result<Complex64> {
    if (normalization_point - center).norm() < 1e-14 {
        return Err(Error::NormalizationVanishes);
    }
    let factor = |w: Complex64| (w - center) / (1.0 - center.conj() * w);
    let vn = factor(normalization_point);
    if vn.norm() < 1e-300 {
        return Err(Error::NormalizationVanishes);
    }
    let u = vn.conj() / vn.norm();
    Ok(u * factor(zeta))
}

/// Reproducing kernels of the Hardy space over the disk (trivial
/// character): k(zeta, eta) = 1/(1 - zeta conj(eta)) and its
/// normalization K = k / sqrt(k(eta, eta)).
#[derive(Clone, Copy, Debug, Default)]
pub struct KernelPair;

impl KernelPair {
    pub fn k(&self, zeta: Complex64, eta: Complex64) -> Complex64 {
        1.0 / (1.0 - zeta * eta.conj())
    }

    pub fn normalized(&self, zeta: Complex64, eta: Complex64) -> Complex64 {
        let kd = self.k(eta, eta);
        self.k(zeta, eta) / kd.re.sqrt()
    }
}

/// Residuals of the two-term kernel recurrence and its matrix form.
#[derive(Clone, Copy, Debug)]
pub struct KernelRecurrenceReport {
    pub a: Complex64,
    pub rho: f64,
    /// max residual of both scalar recurrence identities
    pub recurrence_residual: f64,
    /// max residual of the matrix (transfer) form
    pub matrix_residual: f64,
    /// | rho - B(conj zeta0, zeta0) K(conj zeta0,conj zeta0)/K(conj zeta0,conj zeta0) |
    pub rho_byproduct_residual: f64,
    /// | K(zeta0, zeta0) - K(conj zeta0, conj zeta0) |
    pub diagonal_symmetry_residual: f64,
}

impl KernelRecurrenceReport {
    pub fn max_residual(&self) -> f64 {
        self.recurrence_residual
            .max(self.matrix_residual)
            .max(self.rho_byproduct_residual)
            .max(self.diagonal_symmetry_residual)
    }
}

/// Evaluate the recurrence identities at `samples` random disk points.
pub fn verify_kernel_recurrence(
    space: &OneArcSpace,
    samples: usize,
    seed: u64,
) -> KernelRecurrenceReport {
    let kp = KernelPair;
    let z0 = space.zeta0;
    let zb = z0.conj();
    let a = kp.normalized(z0, zb) / kp.normalized(z0, z0);
    let rho = (1.0 - a.norm_sqr()).sqrt();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rec: f64 = 0.0;
    let mut mat: f64 = 0.0;
    for _ in 0..samples.max(1) {
        let zeta = Complex64::from_polar(rng.gen_range(0.0..0.97), rng.gen_range(0.0..TAU));
        let k1 = kp.normalized(zeta, z0);
        let k2 = kp.normalized(zeta, zb);
        let b1 = blaschke(zeta, z0, zb).expect("distinct centers");
        let b2 = blaschke(zeta, zb, z0).expect("distinct centers");
        // the character shift is trivial here, so the shifted kernels
        // coincide with the unshifted ones
        let r1 = (k2 - (a * k1 + rho * b1 * k2)).norm();
        let r2 = (k1 - (a.conj() * k2 + rho * b2 * k1)).norm();
        rec = rec.max(r1).max(r2);

        let z = space.covering_map(zeta);
        let m1 = (b1 * k1 - (z / rho) * (k1 - a.conj() * k2)).norm();
        let m2 = (-b1 * k2 - (a * k1 - k2) / rho).norm();
        mat = mat.max(m1).max(m2);
    }

    let byproduct = {
        let b = blaschke(zb, z0, zb).expect("distinct centers");
        let ratio = kp.normalized(zb, zb) / kp.normalized(zb, zb);
        (Complex64::new(rho, 0.0) - b * ratio).norm()
    };
    let diag = (kp.normalized(z0, z0) - kp.normalized(zb, zb)).norm();

    KernelRecurrenceReport {
        a,
        rho,
        recurrence_residual: rec,
        matrix_residual: mat,
        rho_byproduct_residual: byproduct,
        diagonal_symmetry_residual: diag,
    }
}

/// The half-plane model attached to gap 0: the three-point map lambda,
/// the residue data of its pole at the reference point, and the
/// resolvent-style function r built from them.
#[derive(Clone, Copy, Debug)]
pub struct HalfPlaneModel {
    pub space: OneArcSpace,
    pub lambda: MoebiusMap,
    /// residue coefficient: lambda(z(zeta)) = c_m1 / zeta + O(zeta)
    pub c_m1: Complex64,
    /// unimodular factor of B(zeta) = u zeta with (lambda B)(0) > 0
    pub u: Complex64,
    /// (lambda B)(0) = |c_m1|
    pub lambda_b_at_zero: f64,
    /// lambda0 = lambda(z(zeta0)) = lambda(0)
    pub lambda0: Complex64,
    /// r(lambda0) = c_m1 / zeta0
    pub r0: Complex64,
    /// B(0, zeta0) k(zeta0, 0) / (B(0, conj zeta0) k(0, zeta0))
    pub resolvent_constant: Complex64,
}

impl HalfPlaneModel {
    pub fn new(space: &OneArcSpace, zref: Complex64) -> Result<Self> {
        let e = space.arcset();
        let lambda = lambda_map(&e, zref)?;
        let dz0 = space.covering_derivative_at_zero();
        let c_m1 = (lambda.a * zref + lambda.b) / (lambda.c * dz0);
        if c_m1.norm() < 1e-300 {
            return Err(Error::ConsistencyCheck {
                what: "lambda residue at the reference point",
                residual: 0.0,
            });
        }
        let u = c_m1.conj() / c_m1.norm();
        let kp = KernelPair;
        let b0z = blaschke(Complex64::new(0.0, 0.0), space.zeta0, space.zeta0.conj())?;
        let b0zb = blaschke(Complex64::new(0.0, 0.0), space.zeta0.conj(), space.zeta0)?;
        let resolvent_constant = b0z * kp.k(space.zeta0, Complex64::new(0.0, 0.0))
            / (b0zb * kp.k(Complex64::new(0.0, 0.0), space.zeta0));
        Ok(HalfPlaneModel {
            space: *space,
            lambda,
            c_m1,
            u,
            lambda_b_at_zero: c_m1.norm(),
            lambda0: lambda.eval(Complex64::new(0.0, 0.0)),
            r0: c_m1 / space.zeta0,
            resolvent_constant,
        })
    }

    /// lambda as a function of the disk variable.
    pub fn lambda_zeta(&self, zeta: Complex64) -> Complex64 {
        self.lambda.eval(self.space.covering_map(zeta))
    }

    /// r in the disk variable: r = (lambda B)(0) / B(zeta) with all
    /// kernel factors trivial, i.e. r = c_m1 / zeta.
    pub fn r_zeta(&self, zeta: Complex64) -> Complex64 {
        self.c_m1 / zeta
    }

    /// r as a function of lambda on the upper half-plane.
    pub fn r_fn(&self) -> AnalyticFn {
        let model = *self;
        AnalyticFn::new(Domain::UpperHalfPlane, move |lam| {
            let z = model.lambda.inverse().eval(lam);
            let zeta = model.space.inverse_covering(z)?;
            if zeta.norm() < 1e-300 {
                return Err(Error::PoleEncountered(lam));
            }
            Ok(model.c_m1 / zeta)
        })
    }

    /// tau(alpha): the unimodular constant making the gap-normalized
    /// member of the rotation family explicit.
    pub fn tau_alpha(&self) -> Complex64 {
        1.0 / self.resolvent_constant
    }

    /// max residual of the kernel identity over random disk points, plus
    /// the reproducing-value check at zeta0.
    pub fn verify_kernel_identity(&self, samples: usize, seed: u64) -> (f64, f64) {
        let kp = KernelPair;
        let z0 = self.space.zeta0;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rhs = |zeta: Complex64| -> Complex64 {
            let lam = self.lambda_zeta(zeta);
            self.lambda_b_at_zero * (1.0 / (self.u * zeta) - (1.0 / (self.u * z0)).conj())
                / (lam - self.lambda0.conj())
        };
        let mut worst: f64 = 0.0;
        for _ in 0..samples.max(1) {
            let zeta = Complex64::from_polar(rng.gen_range(0.02..0.95), rng.gen_range(0.0..TAU));
            worst = worst.max((kp.k(zeta, z0) - rhs(zeta)).norm());
        }
        let reproducing = (kp.k(z0, z0) - rhs(z0)).norm();
        (worst, reproducing)
    }

    /// max residual of the half-plane factorization of z itself:
    /// z = [B(0,zeta0)/B(0,conj zeta0)] (lambda - lambda0)/(lambda - conj lambda0).
    pub fn verify_z_factorization(&self, samples: usize, seed: u64) -> f64 {
        let b0z = blaschke(
            Complex64::new(0.0, 0.0),
            self.space.zeta0,
            self.space.zeta0.conj(),
        )
        .expect("distinct centers");
        let b0zb = blaschke(
            Complex64::new(0.0, 0.0),
            self.space.zeta0.conj(),
            self.space.zeta0,
        )
        .expect("distinct centers");
        let cst = b0z / b0zb;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst: f64 = 0.0;
        for _ in 0..samples.max(1) {
            let zeta = Complex64::from_polar(rng.gen_range(0.02..0.95), rng.gen_range(0.0..TAU));
            let z = self.space.covering_map(zeta);
            let lam = self.lambda_zeta(zeta);
            let rhs = cst * (lam - self.lambda0) / (lam - self.lambda0.conj());
            worst = worst.max((z - rhs).norm());
        }
        worst
    }

    /// max residual of the resolvent form of z s(z).
    pub fn verify_schur_resolvent_form(&self, samples: usize, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst: f64 = 0.0;
        for _ in 0..samples.max(1) {
            let zeta = Complex64::from_polar(rng.gen_range(0.02..0.95), rng.gen_range(0.0..TAU));
            let z = self.space.covering_map(zeta);
            let s = self.space.schur_zeta(zeta);
            let r = self.r_zeta(zeta);
            let rhs = self.resolvent_constant * (r - self.r0) / (r - self.r0.conj());
            worst = worst.max((z * s - rhs).norm());
        }
        worst
    }

    /// max residual of the gap-normalized member of the rotation family
    /// against its resolvent expression (r - Re r0)/(i Im r0).
    pub fn verify_gap_normalized_member(&self, samples: usize, seed: u64) -> f64 {
        let tau = self.tau_alpha();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst: f64 = 0.0;
        for _ in 0..samples.max(1) {
            let zeta = Complex64::from_polar(rng.gen_range(0.02..0.95), rng.gen_range(0.0..TAU));
            let z = self.space.covering_map(zeta);
            let s = self.space.schur_zeta(zeta);
            let m = (1.0 + z * tau * s) / (1.0 - z * tau * s);
            let r = self.r_zeta(zeta);
            let rhs = (r - self.r0.re) / Complex64::new(0.0, self.r0.im);
            worst = worst.max((m - rhs).norm());
        }
        worst
    }

    /// Normalization r(lambda) = lambda + O(1): the variation of
    /// r(lambda) - lambda across |lambda| in `magnitudes` along the
    /// imaginary axis, relative to the largest magnitude.
    pub fn verify_r_normalization(&self, magnitudes: &[f64]) -> Result<f64> {
        let rf = self.r_fn();
        let mut values = Vec::with_capacity(magnitudes.len());
        let mut max_mag: f64 = 1.0;
        for &mag in magnitudes {
            let lam = Complex64::new(0.0, mag);
            values.push(rf.eval(lam)? - lam);
            max_mag = max_mag.max(mag);
        }
        let mut var: f64 = 0.0;
        for i in 0..values.len() {
            for j in i + 1..values.len() {
                var = var.max((values[i] - values[j]).norm());
            }
        }
        Ok(var / max_mag)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn space_half() -> OneArcSpace {
        OneArcSpace::new(0.5).unwrap()
    }

    #[test]
    fn space_invariants() {
        for r in [0.2, 0.5, 0.8] {
            let s = OneArcSpace::new(r).unwrap();
            assert!((s.theta.sin() - (1.0 - r * r) / (1.0 + r * r)).abs() < 1e-14);
            assert!(s.theta > 0.0 && s.theta < std::f64::consts::FRAC_PI_2);
            assert!((s.a0 - s.b0.conj()).norm() < 1e-15);
        }
    }

    #[test]
    fn covering_map_special_values() {
        let s = space_half();
        assert!(s.covering_map(s.zeta0).norm() < 1e-15);
        assert!((s.covering_map(c(0.0, 0.0)) - c(1.0, 0.0)).norm() < 1e-15);
        // b0 = z(1) = 0.28 + 0.96 i at r = 1/2
        assert!((s.covering_map(c(1.0, 0.0)) - c(0.28, 0.96)).norm() < 1e-14);
        assert!(!s.covering_map(s.zeta0.conj()).re.is_finite());
    }

    #[test]
    fn covering_boundary_lands_on_e() {
        let s = space_half();
        let e = s.arcset();
        for k in 0..100 {
            let t = 0.05 + (std::f64::consts::PI - 0.1) * k as f64 / 99.0;
            for zeta in [
                Complex64::from_polar(1.0, t),
                Complex64::from_polar(1.0, -t),
            ] {
                let z = s.covering_map(zeta);
                assert!((z.norm() - 1.0).abs() < 1e-10);
                assert!(e.contains_angle(z.arg().rem_euclid(TAU)), "z({zeta}) off E");
            }
        }
    }

    #[test]
    fn inverse_covering_roundtrip_and_reciprocal_pairing() {
        let s = space_half();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let zeta = Complex64::from_polar(rng.gen_range(0.01..0.97), rng.gen_range(0.0..TAU));
            let z = s.covering_map(zeta);
            let back = s.inverse_covering(z).unwrap();
            assert!((back - zeta).norm() < 1e-9, "roundtrip failed at {zeta}");
            // the second preimage is 1/zeta
            let z_recip = s.covering_map(1.0 / zeta);
            assert!((z_recip - z).norm() < 1e-10 * (1.0 + z.norm()));
        }
    }

    #[test]
    fn blaschke_basics() {
        let s = space_half();
        let z0 = s.zeta0;
        let zb = z0.conj();
        assert!(blaschke(z0, z0, zb).unwrap().norm() < 1e-15);
        assert!((blaschke(c(0.0, 0.0), z0, zb).unwrap().norm() - s.r).abs() < 1e-14);
        let v = blaschke(zb, z0, zb).unwrap();
        assert!(v.im.abs() < 1e-15 && v.re > 0.0);
        // unimodular on the boundary
        let b = blaschke(Complex64::from_polar(1.0, 0.87), z0, zb).unwrap();
        assert!((b.norm() - 1.0).abs() < 1e-13);
        assert!(matches!(
            blaschke(c(0.1, 0.1), z0, z0),
            Err(Error::NormalizationVanishes)
        ));
    }

    #[test]
    fn schur_function_value_at_origin() {
        // s(z=0) = (1 - r^2)/(1 + r^2) = sin theta = 0.6 at r = 1/2
        let s = space_half();
        let f = s.schur_fn();
        let v = f.eval(c(0.0, 0.0)).unwrap();
        assert!((v - c(0.6, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn theorem1_coefficients_and_residuals() {
        let s = space_half();
        let rep = verify_kernel_recurrence(&s, 500, 11);
        assert!((rep.a - c(0.6, 0.0)).norm() < 1e-13, "a = {}", rep.a);
        assert!((rep.rho - 0.8).abs() < 1e-13);
        assert!(
            rep.max_residual() < 1e-10,
            "residual {}",
            rep.max_residual()
        );
        for r in [0.2, 0.8] {
            let rep = verify_kernel_recurrence(&OneArcSpace::new(r).unwrap(), 200, 13);
            assert!(rep.max_residual() < 1e-10);
        }
    }

    #[test]
    fn half_plane_model_fixture_values() {
        // frozen r = 1/2 values: lambda(0) = 0.75 i, c_m1 = -1/2, r0 = i
        let s = space_half();
        let model = HalfPlaneModel::new(&s, c(1.0, 0.0)).unwrap();
        assert!((model.lambda0 - c(0.0, 0.75)).norm() < 1e-13);
        assert!(model.lambda0.im.abs() > 1e-6);
        assert!((model.c_m1 - c(-0.5, 0.0)).norm() < 1e-13);
        assert!((model.r0 - c(0.0, 1.0)).norm() < 1e-13);
        assert!(model.lambda_b_at_zero > 0.0);
        assert!((model.resolvent_constant - c(1.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn kernel_identity_residuals() {
        let s = space_half();
        let model = HalfPlaneModel::new(&s, c(1.0, 0.0)).unwrap();
        let (worst, reproducing) = model.verify_kernel_identity(200, 17);
        assert!(worst < 1e-9, "identity residual {worst}");
        assert!(reproducing < 1e-12);
        // both sides equal k(zeta0, zeta0) = 1/(1 - r^2) = 4/3 there
        let kp = KernelPair;
        assert!((kp.k(s.zeta0, s.zeta0) - c(4.0 / 3.0, 0.0)).norm() < 1e-14);
        assert!(model.verify_z_factorization(200, 19) < 1e-12);
    }

    #[test]
    fn resolvent_identities() {
        let s = space_half();
        let model = HalfPlaneModel::new(&s, c(1.0, 0.0)).unwrap();
        assert!(model.verify_schur_resolvent_form(100, 23) < 1e-9);
        assert!(model.verify_gap_normalized_member(100, 29) < 1e-9);
        // gap-normalized member has the closed form i/(2 zeta) at r = 1/2
        let tau = model.tau_alpha();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..50 {
            let zeta = Complex64::from_polar(rng.gen_range(0.05..0.9), rng.gen_range(0.0..TAU));
            let z = s.covering_map(zeta);
            let m = (1.0 + z * tau * s.schur_zeta(zeta)) / (1.0 - z * tau * s.schur_zeta(zeta));
            assert!((m - c(0.0, 0.5) / zeta).norm() < 1e-10);
        }
    }

    #[test]
    fn r_normalization_along_imaginary_axis() {
        let s = space_half();
        let model = HalfPlaneModel::new(&s, c(1.0, 0.0)).unwrap();
        let var = model.verify_r_normalization(&[1e2, 1e4, 1e6]).unwrap();
        assert!(var <= 1e-6, "relative variation {var}");
    }

    #[test]
    fn residuals_across_r_sweep() {
        for r in [0.2, 0.5, 0.8] {
            let s = OneArcSpace::new(r).unwrap();
            let model = HalfPlaneModel::new(&s, c(1.0, 0.0)).unwrap();
            let (worst, _) = model.verify_kernel_identity(200, 37);
            assert!(worst < 1e-9, "r={r}: identity {worst}");
            assert!(model.verify_schur_resolvent_form(100, 41) < 1e-9);
            assert!(model.verify_gap_normalized_member(100, 43) < 1e-9);
        }
    }

    #[test]
    fn schur_unimodular_on_gap_not_on_arc() {
        // |s| = 1 exactly where the measure is reflectionless: on gap 0
        // (real zeta), while mid-arc |s| = (1-r)/(1+r) < 1
        let s = space_half();
        for k in 1..20 {
            let zeta = c(-0.95 + 1.9 * k as f64 / 20.0, 0.0);
            assert!((s.schur_zeta(zeta).norm() - 1.0).abs() < 1e-12);
        }
        let mid = s.schur_zeta(c(0.0, 1.0)); // zeta = i maps to z = -1
        assert!((mid.norm() - 1.0 / 3.0).abs() < 1e-12);
    }
}
