//! Smooth cutoffs: `β_0`, the Littlewood–Paley annuli `β_j`, and the time
//! window `χ`.

use std::sync::OnceLock;

use crate::quadrature::GaussRule;

const STEP_INTERVALS: usize = 4096;

/// The standard C^∞ step on `[−1, 1]`: `ψ(u) = ∫_{−1}^u φ / ∫_{−1}^1 φ`
/// with `φ(v) = exp(−1/(1−v²))`. Tabulated once, evaluated by cubic
/// Hermite interpolation using the exact derivative.
struct SmoothStep {
    values: Vec<f64>,
    norm: f64,
}

fn bump(v: f64) -> f64 {
    if v.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - v * v)).exp()
    }
}

fn step_table() -> &'static SmoothStep {
    static TABLE: OnceLock<SmoothStep> = OnceLock::new();
    TABLE.get_or_init(|| {
        let rule = GaussRule::new(10);
        let h = 2.0 / STEP_INTERVALS as f64;
        let mut values = Vec::with_capacity(STEP_INTERVALS + 1);
        let mut acc = 0.0;
        values.push(0.0);
        for i in 0..STEP_INTERVALS {
            let a = -1.0 + i as f64 * h;
            acc += rule.integrate(a, a + h, bump);
            values.push(acc);
        }
        let norm = acc;
        for v in &mut values {
            *v /= norm;
        }
        SmoothStep { values, norm }
    })
}

/// Smooth monotone step: 0 for `u ≤ −1`, 1 for `u ≥ 1`.
pub fn smooth_step(u: f64) -> f64 {
    if u <= -1.0 {
        return 0.0;
    }
    if u >= 1.0 {
        return 1.0;
    }
    let t = step_table();
    let h = 2.0 / STEP_INTERVALS as f64;
    let pos = (u + 1.0) / h;
    let i = (pos.floor() as usize).min(STEP_INTERVALS - 1);
    let s = pos - i as f64;
    let (x0, x1) = (-1.0 + i as f64 * h, -1.0 + (i + 1) as f64 * h);
    let (y0, y1) = (t.values[i], t.values[i + 1]);
    let (m0, m1) = (bump(x0) / t.norm * h, bump(x1) / t.norm * h);
    let s2 = s * s;
    let s3 = s2 * s;
    let v = (2.0 * s3 - 3.0 * s2 + 1.0) * y0 + (s3 - 2.0 * s2 + s) * m0 + (-2.0 * s3 + 3.0 * s2) * y1 + (s3 - s2) * m1;
    v.clamp(0.0, 1.0)
}

/// `ψ'(u)`, exact.
pub fn smooth_step_derivative(u: f64) -> f64 {
    bump(u) / step_table().norm
}

/// Which cutoff a [`CutoffProfile`] evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CutoffKind {
    Beta0,
    BetaJ(u32),
    Chi,
}

/// A fixed smooth cutoff.
///
/// * `β_0(s) = 1` for `|s| ≤ 1/2`, `0` for `|s| ≥ 1`, decreasing between.
/// * `β_j(s) = β_0(2^{−j}s) − β_0(2^{1−j}s)` for `j ≥ 1`, supported in
///   `2^{j−2} ≤ |s| ≤ 2^j` and equal to 1 exactly at `|s| = 2^{j−1}`.
/// * `χ(t) = 1` on `[0.9, 2.1]`, supported in `[1/2, 4]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CutoffProfile {
    pub kind: CutoffKind,
}

impl CutoffProfile {
    pub const CHI_SUPPORT: (f64, f64) = (0.5, 4.0);
    pub const CHI_PLATEAU: (f64, f64) = (0.9, 2.1);

    pub fn beta(j: u32) -> Self {
        Self { kind: if j == 0 { CutoffKind::Beta0 } else { CutoffKind::BetaJ(j) } }
    }

    pub fn chi() -> Self {
        Self { kind: CutoffKind::Chi }
    }

    pub fn eval(&self, s: f64) -> f64 {
        match self.kind {
            CutoffKind::Beta0 => beta0(s),
            CutoffKind::BetaJ(j) => beta_j(j, s),
            CutoffKind::Chi => chi(s),
        }
    }

    pub fn derivative(&self, s: f64) -> f64 {
        match self.kind {
            CutoffKind::Beta0 => beta0_derivative(s),
            CutoffKind::BetaJ(j) => {
                let a = 2f64.powi(-(j as i32));
                a * beta0_derivative(a * s) - 2.0 * a * beta0_derivative(2.0 * a * s)
            }
            CutoffKind::Chi => chi_derivative(s),
        }
    }
}

pub fn beta0(s: f64) -> f64 {
    1.0 - smooth_step(4.0 * s.abs() - 3.0)
}

fn beta0_derivative(s: f64) -> f64 {
    -4.0 * s.signum() * smooth_step_derivative(4.0 * s.abs() - 3.0)
}

/// `β_j` for `j ≥ 0` (with `β_0` at `j = 0`).
pub fn beta_j(j: u32, s: f64) -> f64 {
    if j == 0 {
        return beta0(s);
    }
    let a = 2f64.powi(-(j as i32));
    beta0(a * s) - beta0(2.0 * a * s)
}

pub fn chi(t: f64) -> f64 {
    let (lo, hi) = CutoffProfile::CHI_SUPPORT;
    let (p0, p1) = CutoffProfile::CHI_PLATEAU;
    if t <= lo || t >= hi {
        0.0
    } else if t < p0 {
        smooth_step(2.0 * (t - lo) / (p0 - lo) - 1.0)
    } else if t <= p1 {
        1.0
    } else {
        1.0 - smooth_step(2.0 * (t - p1) / (hi - p1) - 1.0)
    }
}

pub fn chi_derivative(t: f64) -> f64 {
    let (lo, hi) = CutoffProfile::CHI_SUPPORT;
    let (p0, p1) = CutoffProfile::CHI_PLATEAU;
    if t <= lo || t >= hi || (p0..=p1).contains(&t) {
        0.0
    } else if t < p0 {
        2.0 / (p0 - lo) * smooth_step_derivative(2.0 * (t - lo) / (p0 - lo) - 1.0)
    } else {
        -2.0 / (hi - p1) * smooth_step_derivative(2.0 * (t - p1) / (hi - p1) - 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_endpoints_and_symmetry() {
        assert_eq!(smooth_step(-1.0), 0.0);
        assert_eq!(smooth_step(1.0), 1.0);
        assert!((smooth_step(0.0) - 0.5).abs() < 1e-13);
        for &u in &[-0.9, -0.3, 0.1, 0.77] {
            assert!((smooth_step(u) + smooth_step(-u) - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn step_is_monotone_and_derivative_consistent() {
        let mut prev = 0.0;
        for i in 0..=2000 {
            let u = -1.0 + i as f64 * 1e-3;
            let v = smooth_step(u);
            assert!(v >= prev - 1e-15);
            prev = v;
        }
        for &u in &[-0.7, 0.0, 0.4] {
            let h = 1e-6;
            let fd = (smooth_step(u + h) - smooth_step(u - h)) / (2.0 * h);
            assert!((fd - smooth_step_derivative(u)).abs() < 1e-6);
        }
    }

    #[test]
    fn beta_supports() {
        assert_eq!(beta0(0.3), 1.0);
        assert_eq!(beta0(1.2), 0.0);
        for j in 1..6 {
            let p = 2f64.powi(j as i32);
            assert_eq!(beta_j(j, p / 4.0 * 0.99), 0.0);
            assert_eq!(beta_j(j, p * 1.01), 0.0);
            assert!((beta_j(j, p / 2.0) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn partition_of_unity() {
        for i in 0..500 {
            let s = i as f64 * 0.063;
            let total: f64 = (0..=8).map(|j| beta_j(j, s)).sum();
            assert!((total - 1.0).abs() < 1e-14, "s = {s}");
        }
    }

    #[test]
    fn chi_shape() {
        assert_eq!(chi(0.5), 0.0);
        assert_eq!(chi(4.0), 0.0);
        assert_eq!(chi(1.0), 1.0);
        assert_eq!(chi(2.0), 1.0);
        for &t in &[0.7, 3.0] {
            let h = 1e-6;
            let fd = (chi(t + h) - chi(t - h)) / (2.0 * h);
            assert!((fd - chi_derivative(t)).abs() < 1e-6);
        }
    }
}
