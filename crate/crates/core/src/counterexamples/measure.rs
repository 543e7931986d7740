//! Exact normalized sphere measures of simple sets.
//!
//! All functions return `σ_{x,t}(E)`, the fraction of the sphere of radius
//! `t` about `x` lying in `E`, for balls, cylindrical plates and radial
//! densities. Balls are closed-form; plates and radial densities reduce to
//! one-dimensional integrals in the polar angle.

use std::f64::consts::PI;

use crate::quadrature::GaussRule;

/// `∫_0^π sin^{d−2}θ dθ`.
fn polar_mass(d: usize) -> f64 {
    match d {
        2 => PI,
        3 => 2.0,
        4 => PI / 2.0,
        _ => panic!("dimension {d} not supported"),
    }
}

/// Fraction of `S^{d−1}` within polar angle `θ` of a pole.
pub fn cap_of_angle(d: usize, theta: f64) -> f64 {
    let th = theta.clamp(0.0, PI);
    match d {
        2 => th / PI,
        3 => (1.0 - th.cos()) / 2.0,
        4 => (th - th.sin() * th.cos()) / PI,
        _ => panic!("dimension {d} not supported"),
    }
}

/// Fraction of the sphere of radius `t` whose centre is at distance `dist`
/// from the centre of a closed ball of radius `radius`, lying in the ball.
///
/// `d = 1` is the two-point sphere `{±t}`.
pub fn ball_fraction(d: usize, t: f64, dist: f64, radius: f64) -> f64 {
    if d == 1 {
        let inside = |y: f64| if y.abs() <= radius { 0.5 } else { 0.0 };
        return inside(dist - t) + inside(dist + t);
    }
    if t + dist <= radius {
        return 1.0;
    }
    if t >= dist + radius || dist >= t + radius {
        return 0.0;
    }
    // Now dist > 0 and t > 0. The sphere meets the ball in a cap about the
    // direction towards the ball centre.
    let c = ((t * t + dist * dist - radius * radius) / (2.0 * t * dist)).clamp(-1.0, 1.0);
    cap_of_angle(d, c.acos())
}

/// Fraction of the sphere `S(x, t)` in the plate
/// `{y : |y'| ≤ w, |y_d − c| ≤ δ}`, given `|x'|` and `x_d`.
///
/// Writing `y = x + t(sin θ ω, cos θ)`, the slab condition selects an
/// interval of `θ`; for fixed `θ` the points form a `(d−2)`-sphere of radius
/// `t sin θ` about `x'`, whose fraction in the disc `|y'| ≤ w` is again a
/// ball fraction. The `θ` integral is split at every kink of that fraction.
pub fn plate_fraction(d: usize, xp: f64, xd: f64, t: f64, c: f64, w: f64, delta: f64) -> f64 {
    let lo = (c - delta - xd) / t;
    let hi = (c + delta - xd) / t;
    if lo > 1.0 || hi < -1.0 {
        return 0.0;
    }
    let (a, b) = (hi.min(1.0).acos(), lo.max(-1.0).acos());
    let mut cuts = vec![a, b];
    for v in [w - xp, w + xp, xp - w] {
        if v > 0.0 && v < t {
            let th = (v / t).asin();
            cuts.extend([th, PI - th]);
        }
    }
    cuts.retain(|&th| th >= a && th <= b);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let rule = GaussRule::new(12);
    let mut total = 0.0;
    for win in cuts.windows(2) {
        if win[1] > win[0] {
            total += rule.integrate(win[0], win[1], |th| {
                th.sin().powi(d as i32 - 2) * ball_fraction(d - 1, t * th.sin(), xp, w)
            });
        }
    }
    total / polar_mass(d)
}

/// `A_t g(|·|)(x)` for a radial profile `g` supported in `|y| ≤ support`,
/// with `|x| = dist`. `breaks` lists radii where `g` is not smooth; the
/// polar integral is graded geometrically towards the direction of the
/// origin down to `floor` so that profiles singular at 0 are resolved.
pub fn radial_average(d: usize, dist: f64, t: f64, support: f64, breaks: &[f64], floor: f64, g: impl Fn(f64) -> f64) -> f64 {
    if dist - t >= support || t - dist >= support {
        return 0.0;
    }
    let rho = |th: f64| (dist * dist + t * t - 2.0 * dist * t * th.cos()).max(0.0).sqrt();
    let angle_of = |s: f64| {
        let c = (dist * dist + t * t - s * s) / (2.0 * dist * t);
        (-1.0..=1.0).contains(&c).then(|| c.acos())
    };
    let mut cuts = vec![0.0, PI];
    if dist > 0.0 && t > 0.0 {
        for &s in breaks.iter().chain(std::iter::once(&support)) {
            cuts.extend(angle_of(s));
        }
        let scale = floor / (dist.max(t));
        let mut th = PI / 2.0;
        while th > scale * 0.25 {
            cuts.push(th);
            th /= 2.0;
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let rule = GaussRule::new(10);
    let mut total = 0.0;
    for win in cuts.windows(2) {
        if win[1] > win[0] {
            total += rule.integrate(win[0], win[1], |th| {
                let r = rho(th);
                if r > support {
                    0.0
                } else {
                    th.sin().powi(d as i32 - 2) * g(r)
                }
            });
        }
    }
    total / polar_mass(d)
}

/// Volume of the unit ball in `R^d`.
pub fn unit_ball_volume(d: usize) -> f64 {
    match d {
        1 => 2.0,
        2 => PI,
        3 => 4.0 * PI / 3.0,
        4 => PI * PI / 2.0,
        _ => panic!("dimension {d} not supported"),
    }
}
