//! Small complex-polynomial toolkit: Horner evaluation, root finding,
//! and polynomial extrapolation. Coefficients are stored in ascending
//! order, `c[0] + c[1] z + ... + c[n] z^n`.

use num_complex::Complex64;

/// Evaluate by Horner's rule.
pub fn eval(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

/// Coefficient vector of the derivative.
pub fn derivative(coeffs: &[Complex64]) -> Vec<Complex64> {
    if coeffs.len() <= 1 {
        return vec![Complex64::new(0.0, 0.0)];
    }
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| c * k as f64)
        .collect()
}

/// Monic polynomial with the given roots.
pub fn from_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    for &r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
        for (k, &c) in coeffs.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= c * r;
        }
        coeffs = next;
    }
    coeffs
}

/// Both roots of `c2 z^2 + c1 z + c0`, computed with the cancellation-free
/// variant (the smaller root comes from the product of the roots).
pub fn quadratic_roots(c2: Complex64, c1: Complex64, c0: Complex64) -> [Complex64; 2] {
    let disc = (c1 * c1 - 4.0 * c2 * c0).sqrt();
    // pick the sign that avoids cancellation in -c1 -+ disc
    let s = if (c1 + disc).norm() >= (c1 - disc).norm() {
        c1 + disc
    } else {
        c1 - disc
    };
    let r1 = -s / (2.0 * c2);
    let r2 = if s.norm() > 0.0 {
        -2.0 * c0 / s
    } else {
        Complex64::new(0.0, 0.0)
    };
    [r1, r2]
}

/// All roots of a polynomial, Durand-Kerner iteration with optional
/// starting guesses, polished by a few Newton steps. Intended for the
/// low degrees (<= ~10) that arise from divisor denominators.
pub fn roots(coeffs: &[Complex64], init: Option<&[Complex64]>) -> Vec<Complex64> {
    let deg = coeffs.len() - 1;
    assert!(deg >= 1, "constant polynomial has no roots");
    let lead = coeffs[deg];
    let monic: Vec<Complex64> = coeffs.iter().map(|&c| c / lead).collect();
    if deg == 1 {
        return vec![-monic[0]];
    }
    if deg == 2 {
        return quadratic_roots(monic[2], monic[1], monic[0]).to_vec();
    }
    let mut zs: Vec<Complex64> = match init {
        Some(v) if v.len() == deg => v.to_vec(),
        _ => (0..deg)
            .map(|k| {
                Complex64::from_polar(
                    1.3,
                    2.0 * std::f64::consts::PI * (k as f64 + 0.25) / deg as f64,
                )
            })
            .collect(),
    };
    for _ in 0..200 {
        let mut moved: f64 = 0.0;
        for i in 0..deg {
            let num = eval(&monic, zs[i]);
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..deg {
                if j != i {
                    den *= zs[i] - zs[j];
                }
            }
            if den.norm() < 1e-300 {
                continue;
            }
            let step = num / den;
            zs[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-14 {
            break;
        }
    }
    let deriv = derivative(&monic);
    for z in zs.iter_mut() {
        for _ in 0..3 {
            let d = eval(&deriv, *z);
            if d.norm() > 1e-300 {
                *z -= eval(&monic, *z) / d;
            }
        }
    }
    zs
}

/// Polynomial extrapolation to 0 through the points `(xs[i], ys[i])`
/// (Neville's scheme). Used for Richardson limits along a radius.
pub fn extrapolate_to_zero(xs: &[f64], ys: &[Complex64]) -> Complex64 {
    let n = xs.len();
    assert_eq!(n, ys.len());
    let mut y = ys.to_vec();
    for k in 1..n {
        for i in 0..n - k {
            y[i] = (xs[i + k] * y[i] - xs[i] * y[i + 1]) / (xs[i + k] - xs[i]);
        }
    }
    y[0]
}

/// Pairwise sum, to keep long reductions deterministic and accurate.
pub fn pairwise_sum(v: &[Complex64]) -> Complex64 {
    match v.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => v[0],
        2 => v[0] + v[1],
        n => pairwise_sum(&v[..n / 2]) + pairwise_sum(&v[n / 2..]),
    }
}
