use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use super::grid::{Domain, GridFunction, GridSpec, RadialIndex};
use crate::Result;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(n)
        } else {
            p.plan_fft_forward(n)
        }
    })
}

/// In-place unitary d-dimensional transform of row-major data.
pub fn fft_nd_in_place(spec: &GridSpec, data: &mut [Complex64], inverse: bool) {
    let n = spec.n;
    let fft = plan(n, inverse);
    let total = data.len();
    for axis in 0..spec.d {
        let stride = n.pow((spec.d - 1 - axis) as u32);
        if stride == 1 {
            data.par_chunks_mut(n * 64.min(total / n)).for_each(|chunk| {
                let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
                fft.process_with_scratch(chunk, &mut scratch);
            });
            continue;
        }
        let block = n * stride;
        // Gather every line of this axis into contiguous memory, transform,
        // scatter back. Lines inside one block are interleaved with `stride`.
        let mut buf = vec![Complex64::new(0.0, 0.0); block];
        for start in (0..total).step_by(block) {
            let src = &data[start..start + block];
            buf.par_chunks_mut(n).enumerate().for_each(|(c, line)| {
                for (k, slot) in line.iter_mut().enumerate() {
                    *slot = src[k * stride + c];
                }
            });
            buf.par_chunks_mut(n * 64.min(stride)).for_each(|chunk| {
                let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
                fft.process_with_scratch(chunk, &mut scratch);
            });
            let dst = &mut data[start..start + block];
            for (c, line) in buf.chunks(n).enumerate() {
                for (k, v) in line.iter().enumerate() {
                    dst[k * stride + c] = *v;
                }
            }
        }
    }
    let scale = (total as f64).sqrt().recip();
    data.par_iter_mut().for_each(|v| *v *= scale);
}

/// Unitary forward transform (space → frequency).
pub fn dft(f: &GridFunction) -> Result<GridFunction> {
    f.require(Domain::Space)?;
    let mut values = f.values.clone();
    fft_nd_in_place(&f.spec, &mut values, false);
    Ok(GridFunction { spec: f.spec, values, domain: Domain::Frequency })
}

/// Unitary inverse transform (frequency → space).
pub fn idft(f: &GridFunction) -> Result<GridFunction> {
    f.require(Domain::Frequency)?;
    let mut values = f.values.clone();
    fft_nd_in_place(&f.spec, &mut values, true);
    Ok(GridFunction { spec: f.spec, values, domain: Domain::Space })
}

/// Multiplies a spectrum by a radial table (one entry per distinct `|ξ|`)
/// and returns the result in space.
pub fn apply_radial_table(spectrum: &GridFunction, index: &RadialIndex, table: &[f64]) -> Result<GridFunction> {
    spectrum.require(Domain::Frequency)?;
    let mut values: Vec<Complex64> = spectrum
        .values
        .par_iter()
        .zip(index.ids.par_iter())
        .map(|(&v, &id)| v * table[id as usize])
        .collect();
    fft_nd_in_place(&spectrum.spec, &mut values, true);
    Ok(GridFunction { spec: spectrum.spec, values, domain: Domain::Space })
}

/// Applies the radial Fourier multiplier `m(|ξ|)` to a space-domain function.
pub fn apply_radial_multiplier(f: &GridFunction, m: impl Fn(f64) -> f64) -> Result<GridFunction> {
    let spectrum = dft(f)?;
    let index = RadialIndex::new(f.spec);
    let table = index.table(m);
    apply_radial_table(&spectrum, &index, &table)
}
