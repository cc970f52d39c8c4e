//! Orthogonal polynomials on the unit circle with respect to a
//! quadrature measure: the monic recursion
//! Phi_{n+1}(z) = z Phi_n(z) - conj(alpha_n) Phi*_n(z),
//! with the reflection coefficient alpha_n obtained from the
//! orthogonality of Phi_{n+1} to the reversed polynomial Phi*_n, and a
//! cross check of the two parameter-extraction paths.
//!
//! Inner product convention, used everywhere:
//! <f, g> = sum w f(node) conj(g(node)).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::measure::QuadratureMeasure;
use crate::mfunc::SurfaceFunction;
use crate::schur::{schur_sequence, SchurParamSeq};

/// Degree cap at double precision.
pub const MAX_DEGREE: usize = 40;

/// The monic orthogonal polynomials of a discrete measure, with their
/// squared norms and reflection coefficients.
#[derive(Clone, Debug)]
pub struct MonicOpuc {
    /// coeffs[n] holds ascending coefficients of the monic Phi_n
    pub coeffs: Vec<Vec<Complex64>>,
    /// squared norms ||Phi_n||^2, length degree + 1
    pub norms_sq: Vec<f64>,
    pub verblunsky: SchurParamSeq,
}

impl MonicOpuc {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

fn reversed_conjugate(coeffs: &[Complex64]) -> Vec<Complex64> {
    coeffs.iter().rev().map(|c| c.conj()).collect()
}

fn shift_up(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(coeffs.len() + 1);
    out.push(Complex64::new(0.0, 0.0));
    out.extend_from_slice(coeffs);
    out
}

fn ip(mu: &QuadratureMeasure, f: &[Complex64], g: &[Complex64]) -> Complex64 {
    mu.inner_product(|z| crate::poly::eval(f, z), |z| crate::poly::eval(g, z))
}

/// Run the recursion up to degree `n`, validating the norm identity
/// ||Phi_{k+1}||^2 = (1 - |alpha_k|^2) ||Phi_k||^2 and the endpoint
/// identity alpha_k = -conj(Phi_{k+1}(0)) at every step.
pub fn verblunsky_from_measure(mu: &QuadratureMeasure, n: usize) -> Result<MonicOpuc> {
    if n == 0 || n > MAX_DEGREE {
        return Err(Error::InvalidParameter(format!(
            "degree must lie in [1, {MAX_DEGREE}], got {n}"
        )));
    }
    if mu.support_size() < 2 * n + 1 {
        return Err(Error::MeasureTooThin {
            nodes: mu.support_size(),
            degree: n,
        });
    }
    if (mu.total_mass - 1.0).abs() > 1e-6 {
        return Err(Error::InvalidParameter(format!(
            "measure mass {} is not normalized",
            mu.total_mass
        )));
    }

    let mut coeffs: Vec<Vec<Complex64>> = vec![vec![Complex64::new(1.0, 0.0)]];
    let mut norms_sq = vec![ip(mu, &coeffs[0], &coeffs[0]).re];
    let mut alphas = Vec::with_capacity(n);
    let mut terminated = false;

    for step in 0..n {
        let phi = &coeffs[step];
        let norm_sq = norms_sq[step];
        if norm_sq <= 1e-14 {
            return Err(Error::NormCollapse { step, norm_sq });
        }
        let phistar = reversed_conjugate(phi);
        let zphi = shift_up(phi);
        // orthogonality of Phi_{n+1} to Phi*_n fixes alpha_n
        // (||Phi*_n|| = ||Phi_n||)
        let alpha = (ip(mu, &zphi, &phistar) / norm_sq).conj();
        if alpha.norm() >= 1.0 {
            terminated = true;
            break;
        }
        let mut next = zphi;
        for (k, &c) in phistar.iter().enumerate() {
            next[k] -= alpha.conj() * c;
        }
        // endpoint consistency: alpha = -conj(Phi_{n+1}(0))
        let endpoint = (alpha + next[0].conj()).norm();
        if endpoint > 1e-8 {
            return Err(Error::ConsistencyCheck {
                what: "alpha_n = -conj(Phi_{n+1}(0))",
                residual: endpoint,
            });
        }
        let next_norm = ip(mu, &next, &next).re;
        if next_norm <= 1e-14 {
            return Err(Error::NormCollapse {
                step: step + 1,
                norm_sq: next_norm,
            });
        }
        let predicted = (1.0 - alpha.norm_sqr()) * norm_sq;
        if (next_norm - predicted).abs() > 1e-6 * norm_sq {
            return Err(Error::ConsistencyCheck {
                what: "norm identity ||Phi_{n+1}||^2 = (1-|a|^2)||Phi_n||^2",
                residual: (next_norm - predicted).abs() / norm_sq,
            });
        }
        alphas.push(alpha);
        norms_sq.push(next_norm);
        coeffs.push(next);
    }

    Ok(MonicOpuc {
        coeffs,
        norms_sq,
        verblunsky: SchurParamSeq {
            params: alphas,
            terminated,
        },
    })
}

/// Max deviation between the reflection coefficients of the measure and
/// the Schur parameters of the function it came from, over indices
/// 0..n. `radius` is the strip sampling radius.
pub fn cross_validate(
    m: &SurfaceFunction,
    mu: &QuadratureMeasure,
    n: usize,
    radius: f64,
) -> Result<f64> {
    let opuc = verblunsky_from_measure(mu, n)?;
    let schur = schur_sequence(&m.analytic_fn(), n, radius)?;
    let len = opuc.verblunsky.len().min(schur.seq.len());
    if len < n {
        return Err(Error::InvalidParameter(format!(
            "one path terminated early: opuc {}, schur {}",
            opuc.verblunsky.len(),
            schur.seq.len()
        )));
    }
    let mut dev: f64 = 0.0;
    for k in 0..n {
        dev = dev.max((opuc.verblunsky.params[k] - schur.seq.params[k]).norm());
    }
    Ok(dev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use std::f64::consts::TAU;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Uniform (Lebesgue) measure as a synthetic quadrature.
    fn lebesgue(n: usize) -> QuadratureMeasure {
        let nodes: Vec<Complex64> = (0..n)
            .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / n as f64))
            .collect();
        QuadratureMeasure {
            weights: vec![1.0 / n as f64; n],
            nodes,
            atoms: vec![],
            total_mass: 1.0,
        }
    }

    /// Single-parameter measure: density (1-|a|^2)/|1 - a t|^2 via
    /// trapezoid nodes; its reflection coefficients are (a, 0, 0, ...).
    fn bernstein_szego(a: Complex64, n: usize) -> QuadratureMeasure {
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        let mut total = 0.0;
        for k in 0..n {
            let t = Complex64::from_polar(1.0, TAU * k as f64 / n as f64);
            let w = (1.0 - a.norm_sqr()) / (1.0 - a * t).norm_sqr() / n as f64;
            nodes.push(t);
            weights.push(w);
            total += w;
        }
        QuadratureMeasure {
            nodes,
            weights,
            atoms: vec![],
            total_mass: total,
        }
    }

    #[test]
    fn lebesgue_gives_zero_coefficients() {
        let mu = lebesgue(128);
        let opuc = verblunsky_from_measure(&mu, 10).unwrap();
        for a in &opuc.verblunsky.params {
            assert!(a.norm() < 1e-13);
        }
        for (n, nsq) in opuc.norms_sq.iter().enumerate() {
            assert!((nsq - 1.0).abs() < 1e-12, "norm {n}");
        }
    }

    #[test]
    fn single_atom_collapses() {
        let mu = QuadratureMeasure {
            nodes: vec![],
            weights: vec![],
            atoms: vec![(c(1.0, 0.0), 1.0)],
            total_mass: 1.0,
        };
        // support of one point cannot resolve degree 1
        assert!(matches!(
            verblunsky_from_measure(&mu, 1),
            Err(Error::MeasureTooThin { .. })
        ));
        // with padding nodes of zero weight the norm collapses instead
        let mu = QuadratureMeasure {
            nodes: (0..8)
                .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / 8.0))
                .collect(),
            weights: vec![0.0; 8],
            atoms: vec![(c(1.0, 0.0), 1.0)],
            total_mass: 1.0,
        };
        let r = verblunsky_from_measure(&mu, 2);
        assert!(
            matches!(r, Err(Error::NormCollapse { .. }))
                || matches!(&r, Ok(op) if op.verblunsky.terminated),
            "got {r:?}"
        );
    }

    #[test]
    fn single_parameter_measure_recovers_parameter() {
        for a in [c(0.6, 0.0), c(0.3, -0.4)] {
            let mu = bernstein_szego(a, 512);
            let opuc = verblunsky_from_measure(&mu, 6).unwrap();
            assert!(
                (opuc.verblunsky.params[0] - a).norm() < 1e-10,
                "alpha_0 = {}",
                opuc.verblunsky.params[0]
            );
            for k in 1..6 {
                assert!(opuc.verblunsky.params[k].norm() < 1e-10);
            }
        }
    }

    #[test]
    fn orthogonality_matrix_off_diagonal_small() {
        let mu = bernstein_szego(c(0.5, 0.2), 512);
        let opuc = verblunsky_from_measure(&mu, 8).unwrap();
        for i in 0..=8usize {
            for j in 0..i {
                let v = ip(&mu, &opuc.coeffs[i], &opuc.coeffs[j]).norm();
                let scale = (opuc.norms_sq[i] * opuc.norms_sq[j]).sqrt();
                assert!(v <= 1e-8 * scale, "<{i},{j}> = {v}");
            }
        }
    }

    #[test]
    fn measure_too_thin_rejected() {
        let mu = lebesgue(9);
        assert!(matches!(
            verblunsky_from_measure(&mu, 5),
            Err(Error::MeasureTooThin { .. })
        ));
    }
}
