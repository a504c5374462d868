use rayon::prelude::*;

use crate::error::{Error, Result};

/// Largest number of pairs for a dense table (`2^22` entries).
pub const MAX_DENSE_PAIRS: usize = 22;

/// In-place butterfly without normalization; applying it twice multiplies by
/// the table length.
pub fn wht_unnormalized(f: &mut [f64]) -> Result<()> {
    let len = f.len();
    if !len.is_power_of_two() {
        return Err(Error::pre("table length must be a power of two"));
    }
    if len > 1 << MAX_DENSE_PAIRS {
        return Err(Error::budget("dense Walsh-Hadamard table", len as f64, (1u64 << MAX_DENSE_PAIRS) as f64));
    }
    let mut h = 1;
    while h < len {
        let block = |chunk: &mut [f64]| {
            let (a, b) = chunk.split_at_mut(h);
            for (x, y) in a.iter_mut().zip(b.iter_mut()) {
                let (s, d) = (*x + *y, *x - *y);
                *x = s;
                *y = d;
            }
        };
        if len >= 1 << 14 {
            f.par_chunks_mut(2 * h).for_each(block);
        } else {
            f.chunks_mut(2 * h).for_each(block);
        }
        h *= 2;
    }
    Ok(())
}

/// `f̂(x) = 2^-N Σ_y (-1)^{x·y} f(y)`.
pub fn wht(f: &[f64]) -> Result<Vec<f64>> {
    let mut out = f.to_vec();
    wht_unnormalized(&mut out)?;
    let scale = 1.0 / out.len() as f64;
    out.iter_mut().for_each(|x| *x *= scale);
    Ok(out)
}

/// A dense Fourier table over graphs on `n` vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierTable {
    pub n: usize,
    pub values: Vec<f64>,
}
