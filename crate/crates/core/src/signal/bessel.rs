//! Bessel functions of the few orders the sphere multiplier needs, and the
//! multiplier itself.

use crate::{Error, Result};

/// `J_ν(x)` for `ν ∈ {0, 1/2, 1, 3/2, 2}`, `x ≥ 0`.
///
/// Integer orders use libm (absolute error well below 1e−12); half-integer
/// orders use their elementary closed forms, with a power series near zero
/// where the closed form cancels.
pub fn bessel_j(order: f64, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::OutOfDomain(format!("bessel_j needs x ≥ 0, got {x}")));
    }
    let two_nu = order * 2.0;
    if two_nu != two_nu.round() {
        return Err(Error::UnsupportedOrder(order));
    }
    Ok(match two_nu as i64 {
        0 => libm::j0(x),
        2 => libm::j1(x),
        4 => libm::jn(2, x),
        1 => {
            if x == 0.0 {
                0.0
            } else {
                (2.0 / (std::f64::consts::PI * x)).sqrt() * x.sin()
            }
        }
        3 => {
            if x < 0.5 {
                series(1.5, x)
            } else {
                (2.0 / (std::f64::consts::PI * x)).sqrt() * (x.sin() / x - x.cos())
            }
        }
        _ => return Err(Error::UnsupportedOrder(order)),
    })
}

/// Power series `Σ_k (−1)^k (x/2)^{2k+ν} / (k! Γ(k+ν+1))`, for small `x`.
fn series(nu: f64, x: f64) -> f64 {
    let half = x / 2.0;
    let mut term = half.powf(nu) / gamma_half_integer(nu + 1.0);
    let mut sum = term;
    let q = -half * half;
    for k in 1..40 {
        term *= q / (k as f64 * (k as f64 + nu));
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// `Γ(a)` for positive integers and half-integers.
pub fn gamma_half_integer(a: f64) -> f64 {
    let two_a = (2.0 * a).round() as i64;
    debug_assert!(two_a >= 1 && (2.0 * a - two_a as f64).abs() < 1e-12);
    if two_a % 2 == 0 {
        (1..a as i64).map(|k| k as f64).product()
    } else {
        // Γ(1/2) = √π, Γ(a+1) = a Γ(a)
        let mut g = std::f64::consts::PI.sqrt();
        let mut s = 0.5;
        while s < a - 0.25 {
            g *= s;
            s += 1.0;
        }
        g
    }
}

/// Normalised sphere multiplier in dimension `dim`:
/// `m_dim(z) = Γ(ν+1) (z/2)^{−ν} J_ν(z)`, `ν = (dim−2)/2`, so `m_dim(0) = 1`.
///
/// Dimensions 2–6 are supported (6 is needed for derivatives in d = 4).
/// Evaluated through [`bessel_j`] except near zero, where the series is used.
pub fn sphere_profile(dim: usize, z: f64) -> f64 {
    let z = z.abs();
    if z < 1.0 {
        return profile_series(dim, z);
    }
    assert!((2..=6).contains(&dim), "sphere profile only for dimensions 2..=6, got {dim}");
    let nu = (dim as f64 - 2.0) / 2.0;
    let j = bessel_j(nu, z).expect("order supported for dim ≤ 6");
    gamma_half_integer(nu + 1.0) * (z / 2.0).powf(-nu) * j
}

/// `Σ_k (−z²/4)^k Γ(ν+1) / (k! Γ(k+ν+1))`.
fn profile_series(dim: usize, z: f64) -> f64 {
    let nu = (dim as f64 - 2.0) / 2.0;
    let q = -z * z / 4.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..30 {
        term *= q / (k as f64 * (k as f64 + nu));
        sum += term;
        if term.abs() < 1e-18 {
            break;
        }
    }
    sum
}

/// `m_d(z)` as a function of `ρ = |ξ|` and radius `t`: the Fourier transform
/// of normalised surface measure on the sphere of radius `t`.
pub fn sphere_multiplier(d: usize, rho: f64, t: f64) -> f64 {
    sphere_profile(d, t * rho)
}

/// `d/dz m_d(z) = −(z/d) m_{d+2}(z)`.
pub fn sphere_profile_derivative(d: usize, z: f64) -> f64 {
    -(z / d as f64) * sphere_profile(d + 2, z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert_eq!(bessel_j(0.0, 0.0).unwrap(), 1.0);
        assert!(bessel_j(0.5, std::f64::consts::PI).unwrap().abs() < 1e-10);
        assert!(bessel_j(0.0, 2.404825557695773).unwrap().abs() < 1e-9);
        assert!(matches!(bessel_j(2.5, 1.0), Err(Error::UnsupportedOrder(_))));
        assert!(bessel_j(1.0, -1.0).is_err());
    }

    #[test]
    fn series_and_closed_forms_agree() {
        for &x in &[0.3, 0.49, 0.51, 0.9] {
            let closed = (2.0 / (std::f64::consts::PI * x)).sqrt() * (x.sin() / x - x.cos());
            assert!((series(1.5, x) - closed).abs() < 1e-12);
            assert!((series(0.0, x) - libm::j0(x)).abs() < 1e-15);
            assert!((series(1.0, x) - libm::j1(x)).abs() < 1e-15);
            assert!((series(2.0, x) - libm::jn(2, x)).abs() < 1e-15);
        }
    }

    #[test]
    fn profile_is_continuous_at_switch() {
        for dim in 2..=6 {
            let below = profile_series(dim, 1.0);
            let above = sphere_profile(dim, 1.0 + 1e-12);
            assert!((below - above).abs() < 1e-11, "dim {dim}");
            assert_eq!(sphere_profile(dim, 0.0), 1.0);
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        for dim in 2..=4 {
            for &z in &[0.2, 1.7, 9.3, 40.0] {
                let h = 1e-5;
                let fd = (sphere_profile(dim, z + h) - sphere_profile(dim, z - h)) / (2.0 * h);
                assert!((fd - sphere_profile_derivative(dim, z)).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn gamma_values() {
        assert!((gamma_half_integer(0.5) - std::f64::consts::PI.sqrt()).abs() < 1e-15);
        assert!((gamma_half_integer(2.5) - 1.329_340_388_179_137).abs() < 1e-14);
        assert_eq!(gamma_half_integer(4.0), 6.0);
    }
}
