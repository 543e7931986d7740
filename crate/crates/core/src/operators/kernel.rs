//! Radial profile of the kernel `K_{j,t}` with `A_t L_j f = K_{j,t} * f`.

use crate::quadrature::GaussRule;
use crate::signal::bessel::{gamma_half_integer, sphere_profile};
use crate::signal::cutoff::beta_j;

/// Surface area `|S^{d−1}| = 2 π^{d/2} / Γ(d/2)`.
pub fn sphere_area(d: usize) -> f64 {
    2.0 * std::f64::consts::PI.powf(d as f64 / 2.0) / gamma_half_integer(d as f64 / 2.0)
}

/// `K_{j,t}(x)` at `|x| = r` for each requested radius:
///
/// `K(r) = (2π)^{−d} |S^{d−1}| ∫ m_d(tρ) β_j(ρ) m_d(ρ r) ρ^{d−1} dρ`,
///
/// the inverse Fourier transform of the radial symbol `m_d(t|ξ|) β_j(|ξ|)`
/// (the angular integral of `e^{iξ·x}` is `m_d(|ξ||x|)`). The integral over
/// the support `[2^{j−2}, 2^j]` is done with composite Gauss–Legendre,
/// with enough panels to resolve the oscillation at frequency `t + r`.
pub fn kernel_k(d: usize, j: u32, t: f64, radii: &[f64]) -> Vec<f64> {
    assert!(j >= 1, "kernel profile is defined for j ≥ 1");
    let (a, b) = (2f64.powi(j as i32 - 2), 2f64.powi(j as i32));
    let rule = GaussRule::new(16);
    let c = sphere_area(d) / (2.0 * std::f64::consts::PI).powi(d as i32);
    radii
        .iter()
        .map(|&r| {
            let panels = (((t + r) * (b - a) / std::f64::consts::PI).ceil() as usize + 8).max(16);
            c * rule.integrate_composite(a, b, panels, |rho| {
                sphere_profile(d, t * rho) * beta_j(j, rho) * sphere_profile(d, rho * r) * rho.powi(d as i32 - 1)
            })
        })
        .collect()
}

/// `|S^{d−1}| ∫_{lo}^{hi} |K(r)| r^{d−1} dr`, the `L¹` mass of the kernel in
/// the shell `lo ≤ |x| ≤ hi`, by composite Gauss–Legendre on `panels`
/// sub-intervals.
pub fn kernel_radial_mass(d: usize, j: u32, t: f64, lo: f64, hi: f64, panels: usize) -> f64 {
    let rule = GaussRule::new(8);
    let h = (hi - lo) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let a = lo + p as f64 * h;
        let (nodes, weights): (Vec<f64>, Vec<f64>) = rule.on(a, a + h).unzip();
        let k = kernel_k(d, j, t, &nodes);
        total += k.iter().zip(&nodes).zip(&weights).map(|((k, r), w)| w * k.abs() * r.powi(d as i32 - 1)).sum::<f64>();
    }
    total * sphere_area(d)
}
