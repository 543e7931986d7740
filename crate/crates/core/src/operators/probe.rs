//! Empirical operator-norm probes for the frequency pieces `𝒜_j`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::dt_multiplier;
use crate::fit::log2_slope;
use crate::signal::bessel::sphere_profile;
use crate::signal::cutoff::{beta_j, chi, CutoffProfile};
use crate::signal::fft::{dft, idft};
use crate::signal::grid::{Domain, GridFunction, GridSpec, RadialIndex};
use crate::signal::norms::{check_exponent, norm, trapezoid_weights, MixedNormAccumulator};
use crate::signal::SpectralAverager;
use crate::{Error, Result};

/// Time samples on the support of `χ` fine enough for the piece `𝒜_j`:
/// spacing about `π / (1.25 · 2^j)` (the path is band-limited in `t` at
/// frequency `≤ 2^j`), never fewer than 32 points (enough to resolve the
/// ramps of `χ` to about 1e−3 relative).
pub fn probe_times(j: u32) -> Vec<f64> {
    let (lo, hi) = CutoffProfile::CHI_SUPPORT;
    let dt = std::f64::consts::PI / (1.25 * 2f64.powi(j as i32));
    let count = (((hi - lo) / dt).ceil() as usize + 1).max(32);
    super::uniform_times(lo, hi, count)
}

/// Families of `j`-localised trial inputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TrialKind {
    /// Random complex Gaussian spectrum on the annulus, weighted by `β_j`.
    RandomAnnulus(u64),
    /// Thin shell of radius 1 and width `2^{−j}`; its averages focus at the
    /// origin when `t = 1`.
    FocusingShell,
    /// Knapp wave packet: plate of size `2^{−j/2}` across and 1 along
    /// `e_d`, modulated at frequency `2^{j−1}` along `e_d`.
    KnappPlate,
    /// Bump of width `2^{−j}` at the origin.
    Bump,
    /// Unit-width packet modulated at `2^{j−1}` along `e_1`.
    Packet,
}

/// The default battery: four random spectra plus four structured inputs.
pub fn trial_inputs(seed: u64) -> Vec<TrialKind> {
    let mut v: Vec<TrialKind> = (0..4).map(|k| TrialKind::RandomAnnulus(seed.wrapping_add(k))).collect();
    v.extend([TrialKind::FocusingShell, TrialKind::KnappPlate, TrialKind::Bump, TrialKind::Packet]);
    v
}

/// Builds the trial input `L_j g` for the given kind.
pub fn trial_function(spec: GridSpec, j: u32, kind: TrialKind, index: &RadialIndex) -> Result<GridFunction> {
    let s = 2f64.powi(j as i32);
    let d = spec.d;
    let g = match kind {
        TrialKind::RandomAnnulus(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((j as u64) << 32));
            let values = (0..spec.len())
                .map(|k| {
                    let w = beta_j(j, index.radius(k));
                    let (a, b): (f64, f64) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    Complex64::new(a, b) * w
                })
                .collect();
            return idft(&GridFunction::new(spec, values, Domain::Frequency)?);
        }
        TrialKind::FocusingShell => GridFunction::from_real_fn(spec, |x| {
            let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            (-(s * (r - 1.0)).powi(2) / 2.0).exp()
        }),
        TrialKind::KnappPlate => GridFunction::from_fn(spec, |x| {
            let xd = x[d - 1];
            let across: f64 = x[..d - 1].iter().map(|v| v * v).sum();
            Complex64::from_polar((-(s / 2.0) * across / 2.0 - xd * xd / 2.0).exp(), s / 2.0 * xd)
        }),
        TrialKind::Bump => GridFunction::from_real_fn(spec, |x| (-s * s * x.iter().map(|v| v * v).sum::<f64>() / 2.0).exp()),
        TrialKind::Packet => GridFunction::from_fn(spec, |x| {
            Complex64::from_polar((-x.iter().map(|v| v * v).sum::<f64>() / 2.0).exp(), s / 2.0 * x[0])
        }),
    };
    let spectrum = dft(&g)?;
    let values = spectrum.values.iter().enumerate().map(|(k, &v)| v * beta_j(j, index.radius(k))).collect();
    idft(&GridFunction::new(spec, values, Domain::Frequency)?)
}

/// Which space-time quantity a probe measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProbeNorm {
    /// `‖𝒜_j f‖_{L^q_x(L^r_t)}`, computed slice by slice in space.
    Mixed,
    /// `‖𝒜_j f‖_{L²(L²)}` by Parseval (no inverse transforms).
    L2Parseval,
    /// `‖∂_t 𝒜_j f‖_{L²(L²)}` by Parseval.
    L2ParsevalDt,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeConfig {
    pub grid: GridSpec,
    pub js: Vec<u32>,
    #[serde(with = "crate::serde_exponent")]
    pub p: f64,
    #[serde(with = "crate::serde_exponent")]
    pub q: f64,
    #[serde(with = "crate::serde_exponent")]
    pub r: f64,
    pub norm: ProbeNorm,
    pub trials: Vec<TrialKind>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub js: Vec<u32>,
    /// Max over trials of the ratio, per `j`.
    pub ratios: Vec<f64>,
    /// `per_trial[j_index][trial_index]`.
    pub per_trial: Vec<Vec<f64>>,
    /// Least-squares slope of `log₂ ratio` against `j`.
    pub slope: f64,
}

/// `‖F‖_{L²(L²)}` for the multiplier field `F(t) = M(t, |ξ|) f̂`, using
/// Parseval in space and the trapezoid rule on `tgrid` in time.
pub fn l2_space_time_norm(
    spectrum: &GridFunction,
    index: &RadialIndex,
    tgrid: &[f64],
    m: impl Fn(f64, f64) -> f64,
) -> Result<f64> {
    spectrum.require(Domain::Frequency)?;
    // Energy per distinct radius, then ∫ |M(t,ρ)|² dt per radius.
    let mut energy = vec![0.0; index.radii.len()];
    for (v, &id) in spectrum.values.iter().zip(&index.ids) {
        energy[id as usize] += v.norm_sqr();
    }
    let w = trapezoid_weights(tgrid);
    let total: f64 = index
        .radii
        .iter()
        .zip(&energy)
        .filter(|(_, &e)| e > 0.0)
        .map(|(&rho, &e)| e * tgrid.iter().zip(&w).map(|(&t, &wt)| wt * m(t, rho).powi(2)).sum::<f64>())
        .sum();
    // Unitary DFT: Σ|f̂_k|² = Σ|f_i|², and ‖f‖₂² = h^d Σ|f_i|².
    Ok((total * spectrum.spec.cell_volume()).sqrt())
}

fn probe_one(avg: &SpectralAverager, j: u32, cfg: &ProbeConfig, tgrid: &[f64]) -> Result<f64> {
    let d = cfg.grid.d;
    match cfg.norm {
        ProbeNorm::L2Parseval => l2_space_time_norm(&avg.spectrum, &avg.index, tgrid, |t, rho| {
            beta_j(j, rho) * chi(t) * sphere_profile(d, t * rho)
        }),
        ProbeNorm::L2ParsevalDt => {
            l2_space_time_norm(&avg.spectrum, &avg.index, tgrid, |t, rho| beta_j(j, rho) * dt_multiplier(d, t, rho))
        }
        ProbeNorm::Mixed => {
            let w = trapezoid_weights(tgrid);
            let mut acc = MixedNormAccumulator::new(cfg.grid.len(), cfg.r)?;
            for (&t, &wt) in tgrid.iter().zip(&w) {
                let c = chi(t);
                if c == 0.0 {
                    continue;
                }
                let slice = avg.apply(|rho| beta_j(j, rho) * c * sphere_profile(d, t * rho))?;
                acc.add_slice(&slice.values, wt);
            }
            acc.finish(cfg.grid.cell_volume(), cfg.q)
        }
    }
}

/// For each `j`, the largest ratio `‖𝒜_j f‖ / ‖f‖_p` over the trial inputs,
/// and the fitted `log₂` slope in `j`.
pub fn operator_norm_probe(cfg: &ProbeConfig) -> Result<ProbeReport> {
    check_exponent(cfg.p, "p")?;
    check_exponent(cfg.q, "q")?;
    check_exponent(cfg.r, "r")?;
    if cfg.trials.is_empty() || cfg.js.len() < 2 {
        return Err(Error::ShapeMismatch("need at least one trial and two values of j".into()));
    }
    // Parseval norms are exact on the torus, so periodic wrap is harmless
    // and any box will do; spatial norms need the no-wrap half-width.
    let spec = match cfg.norm {
        ProbeNorm::Mixed => GridSpec::new(cfg.grid.d, cfg.grid.n, cfg.grid.l)?,
        ProbeNorm::L2Parseval | ProbeNorm::L2ParsevalDt => GridSpec::window(cfg.grid.d, cfg.grid.n, cfg.grid.l)?,
    };
    let index = std::sync::Arc::new(RadialIndex::new(spec));
    let mut ratios = Vec::with_capacity(cfg.js.len());
    let mut per_trial = Vec::with_capacity(cfg.js.len());
    for &j in &cfg.js {
        let tgrid = probe_times(j);
        let mut row = Vec::with_capacity(cfg.trials.len());
        for &kind in &cfg.trials {
            let f = trial_function(spec, j, kind, &index)?;
            let denom = norm(&f, cfg.p)?;
            if denom == 0.0 {
                return Err(Error::DegenerateInput(format!("trial {kind:?} vanishes at j = {j}")));
            }
            let avg = SpectralAverager::with_index(&f, index.clone())?;
            row.push(probe_one(&avg, j, cfg, &tgrid)? / denom);
        }
        ratios.push(row.iter().copied().fold(0.0, f64::max));
        per_trial.push(row);
    }
    let js: Vec<i32> = cfg.js.iter().map(|&j| j as i32).collect();
    let slope = log2_slope(&js, &ratios);
    Ok(ProbeReport { js: cfg.js.clone(), ratios, per_trial, slope })
}

/// Ratio for one explicit input (rejects the zero function).
pub fn probe_ratio(f: &GridFunction, j: u32, cfg: &ProbeConfig) -> Result<f64> {
    let denom = norm(f, cfg.p)?;
    if denom == 0.0 {
        return Err(Error::DegenerateInput("zero input; the ratio is undefined".into()));
    }
    let avg = SpectralAverager::new(f)?;
    Ok(probe_one(&avg, j, cfg, &probe_times(j))? / denom)
}
