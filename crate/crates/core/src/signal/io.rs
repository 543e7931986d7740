//! Flat binary and CSV serialisation of grid data.
//!
//! Binary layout (little endian): magic `SPHG`, `u32 d`, `u32 n`, `f64 L`,
//! `u32 domain` (0 = space, 1 = frequency), then `n^d` complex samples as
//! pairs of `f64` (re, im) in row-major order.

use std::io::{Read, Write};

use num_complex::Complex64;

use super::grid::{Domain, GridFunction, GridSpec};
use crate::{Error, Result};

pub const GRID_MAGIC: &[u8; 4] = b"SPHG";

fn domain_tag(d: Domain) -> u32 {
    match d {
        Domain::Space => 0,
        Domain::Frequency => 1,
    }
}

pub(crate) fn write_u32(w: &mut impl Write, v: u32) -> Result<()> {
    Ok(w.write_all(&v.to_le_bytes())?)
}

pub(crate) fn write_f64(w: &mut impl Write, v: f64) -> Result<()> {
    Ok(w.write_all(&v.to_le_bytes())?)
}

pub(crate) fn read_u32(r: &mut impl Read) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

pub(crate) fn read_f64(r: &mut impl Read) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}

pub(crate) fn write_header(w: &mut impl Write, magic: &[u8; 4], spec: &GridSpec) -> Result<()> {
    w.write_all(magic)?;
    write_u32(w, spec.d as u32)?;
    write_u32(w, spec.n as u32)?;
    write_f64(w, spec.l)
}

pub(crate) fn read_header(r: &mut impl Read, magic: &[u8; 4]) -> Result<GridSpec> {
    let mut m = [0u8; 4];
    r.read_exact(&mut m)?;
    if &m != magic {
        return Err(Error::Parse(format!("bad magic {m:?}, expected {magic:?}")));
    }
    let d = read_u32(r)? as usize;
    let n = read_u32(r)? as usize;
    let l = read_f64(r)?;
    GridSpec::new(d, n, l)
}

pub(crate) fn write_samples(w: &mut impl Write, values: &[Complex64]) -> Result<()> {
    let mut buf = Vec::with_capacity(values.len() * 16);
    for v in values {
        buf.extend_from_slice(&v.re.to_le_bytes());
        buf.extend_from_slice(&v.im.to_le_bytes());
    }
    Ok(w.write_all(&buf)?)
}

pub(crate) fn read_samples(r: &mut impl Read, count: usize) -> Result<Vec<Complex64>> {
    let mut buf = vec![0u8; count * 16];
    r.read_exact(&mut buf)?;
    Ok(buf
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().expect("8 bytes"));
            let im = f64::from_le_bytes(c[8..].try_into().expect("8 bytes"));
            Complex64::new(re, im)
        })
        .collect())
}

pub fn write_grid(w: &mut impl Write, f: &GridFunction) -> Result<()> {
    write_header(w, GRID_MAGIC, &f.spec)?;
    write_u32(w, domain_tag(f.domain))?;
    write_samples(w, &f.values)
}

pub fn read_grid(r: &mut impl Read) -> Result<GridFunction> {
    let spec = read_header(r, GRID_MAGIC)?;
    let domain = match read_u32(r)? {
        0 => Domain::Space,
        1 => Domain::Frequency,
        t => return Err(Error::Parse(format!("unknown domain tag {t}"))),
    };
    let values = read_samples(r, spec.len())?;
    GridFunction::new(spec, values, domain)
}

/// CSV of a 2-D slice: rows `x1,x2,re,im`. For `d > 2` the remaining
/// coordinates are fixed at the grid indices in `fixed` (length `d − 2`).
pub fn write_slice_csv(w: &mut impl Write, f: &GridFunction, fixed: &[usize]) -> Result<()> {
    let s = f.spec;
    if fixed.len() + 2 != s.d || fixed.iter().any(|&i| i >= s.n) {
        return Err(Error::ShapeMismatch(format!("need {} in-range fixed indices", s.d - 2)));
    }
    writeln!(w, "x1,x2,re,im")?;
    let mut idx = vec![0; s.d];
    idx[2..].copy_from_slice(fixed);
    for i in 0..s.n {
        for j in 0..s.n {
            idx[0] = i;
            idx[1] = j;
            let v = f.at(&idx);
            writeln!(w, "{},{},{:e},{:e}", s.coord(i), s.coord(j), v.re, v.im)?;
        }
    }
    Ok(())
}
