//! Pluggable 1d FFT backends.
//!
//! The slab engine only ever needs batched complex transforms along
//! contiguous rows, so the backend interface is a single in-place
//! transform of fixed length. Two implementations are provided: a
//! self-contained radix-2 kernel (deterministic fallback, no external
//! planner) and a wrapper around `rustfft` (default, faster).

use std::sync::Arc;

use num_complex::Complex;
use rustfft::FftPlanner;

use crate::{Error, Real, Result};

/// Direction-aware, in-place, unscaled complex transform of a fixed length.
pub trait FftBackend<T: Real>: Send + Sync {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Scratch length a caller must provide to `forward`/`inverse`.
    fn scratch_len(&self) -> usize;

    /// In-place forward transform, unscaled.
    fn forward(&self, buf: &mut [Complex<T>], scratch: &mut [Complex<T>]);

    /// In-place inverse transform, unscaled (caller divides by n).
    fn inverse(&self, buf: &mut [Complex<T>], scratch: &mut [Complex<T>]);
}

/// Backend selection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum BackendKind {
    /// In-tree iterative radix-2 kernel.
    Radix2,
    /// `rustfft` planner (default).
    #[default]
    RustFft,
}

pub fn make_backend<T: Real>(kind: BackendKind, len: usize) -> Result<Arc<dyn FftBackend<T>>> {
    match kind {
        BackendKind::Radix2 => Ok(Arc::new(Radix2Fft::new(len)?)),
        BackendKind::RustFft => Ok(Arc::new(RustFftBackend::new(len)?)),
    }
}

/// Iterative decimation-in-time radix-2 FFT with precomputed twiddles
/// and bit-reversal table.
pub struct Radix2Fft<T> {
    len: usize,
    // twiddles[j] = exp(-2*pi*i*j/len) for j in 0..len/2
    twiddles: Vec<Complex<T>>,
    bitrev: Vec<u32>,
}

impl<T: Real> Radix2Fft<T> {
    pub fn new(len: usize) -> Result<Self> {
        if !len.is_power_of_two() {
            return Err(Error::InvalidConfig(format!(
                "radix-2 FFT length must be a power of two, got {len}"
            )));
        }
        let half = len / 2;
        let twiddles = (0..half)
            .map(|j| {
                let angle = -T::lit(2.0) * T::PI() * T::from_count(j) / T::from_count(len);
                Complex::new(angle.cos(), angle.sin())
            })
            .collect();
        let bits = len.trailing_zeros();
        let bitrev = (0..len as u32)
            .map(|i| if bits == 0 { 0 } else { i.reverse_bits() >> (32 - bits) })
            .collect();
        Ok(Self { len, twiddles, bitrev })
    }

    fn transform(&self, buf: &mut [Complex<T>], conjugate: bool) {
        let n = self.len;
        debug_assert_eq!(buf.len(), n);
        if n <= 1 {
            return;
        }
        for i in 0..n {
            let j = self.bitrev[i] as usize;
            if i < j {
                buf.swap(i, j);
            }
        }
        let mut size = 2;
        while size <= n {
            let half = size / 2;
            let stride = n / size;
            for start in (0..n).step_by(size) {
                for k in 0..half {
                    let mut w = self.twiddles[k * stride];
                    if conjugate {
                        w = w.conj();
                    }
                    let a = buf[start + k];
                    let b = buf[start + k + half] * w;
                    buf[start + k] = a + b;
                    buf[start + k + half] = a - b;
                }
            }
            size *= 2;
        }
    }
}

impl<T: Real> FftBackend<T> for Radix2Fft<T> {
    fn len(&self) -> usize {
        self.len
    }

    fn scratch_len(&self) -> usize {
        0
    }

    fn forward(&self, buf: &mut [Complex<T>], _scratch: &mut [Complex<T>]) {
        self.transform(buf, false);
    }

    fn inverse(&self, buf: &mut [Complex<T>], _scratch: &mut [Complex<T>]) {
        self.transform(buf, true);
    }
}

/// `rustfft` wrapper.
pub struct RustFftBackend<T: Real> {
    len: usize,
    fwd: Arc<dyn rustfft::Fft<T>>,
    inv: Arc<dyn rustfft::Fft<T>>,
}

impl<T: Real> RustFftBackend<T> {
    pub fn new(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::InvalidConfig("FFT length must be nonzero".into()));
        }
        let mut planner = FftPlanner::new();
        Ok(Self {
            len,
            fwd: planner.plan_fft_forward(len),
            inv: planner.plan_fft_inverse(len),
        })
    }
}

impl<T: Real> FftBackend<T> for RustFftBackend<T> {
    fn len(&self) -> usize {
        self.len
    }

    fn scratch_len(&self) -> usize {
        self.fwd
            .get_inplace_scratch_len()
            .max(self.inv.get_inplace_scratch_len())
    }

    fn forward(&self, buf: &mut [Complex<T>], scratch: &mut [Complex<T>]) {
        self.fwd.process_with_scratch(buf, scratch);
    }

    fn inverse(&self, buf: &mut [Complex<T>], scratch: &mut [Complex<T>]) {
        self.inv.process_with_scratch(buf, scratch);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn naive_dft(input: &[Complex<f64>]) -> Vec<Complex<f64>> {
        let n = input.len();
        (0..n)
            .map(|k| {
                (0..n)
                    .map(|j| {
                        let angle = -2.0 * std::f64::consts::PI * (k * j) as f64 / n as f64;
                        input[j] * Complex::new(angle.cos(), angle.sin())
                    })
                    .sum()
            })
            .collect()
    }

    fn random_signal(n: usize, seed: u64) -> Vec<Complex<f64>> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect()
    }

    #[test]
    fn radix2_matches_naive_dft() {
        for &n in &[1usize, 2, 8, 64, 256] {
            let fft = Radix2Fft::<f64>::new(n).unwrap();
            let input = random_signal(n, n as u64);
            let mut buf = input.clone();
            fft.forward(&mut buf, &mut []);
            let want = naive_dft(&input);
            for (got, want) in buf.iter().zip(&want) {
                assert_relative_eq!(got.re, want.re, epsilon = 1e-10 * n as f64);
                assert_relative_eq!(got.im, want.im, epsilon = 1e-10 * n as f64);
            }
        }
    }

    #[test]
    fn radix2_and_rustfft_agree() {
        let n = 512;
        let r2 = Radix2Fft::<f64>::new(n).unwrap();
        let rf = RustFftBackend::<f64>::new(n).unwrap();
        let input = random_signal(n, 7);
        let mut a = input.clone();
        let mut b = input.clone();
        r2.forward(&mut a, &mut []);
        let mut scratch = vec![Complex::new(0.0, 0.0); rf.scratch_len()];
        rf.forward(&mut b, &mut scratch);
        for (x, y) in a.iter().zip(&b) {
            assert_relative_eq!(x.re, y.re, epsilon = 1e-10);
            assert_relative_eq!(x.im, y.im, epsilon = 1e-10);
        }
    }

    #[test]
    fn round_trip_identity() {
        let n = 128;
        let fft = Radix2Fft::<f64>::new(n).unwrap();
        let input = random_signal(n, 3);
        let mut buf = input.clone();
        fft.forward(&mut buf, &mut []);
        fft.inverse(&mut buf, &mut []);
        for (got, want) in buf.iter().zip(&input) {
            let got = got / n as f64;
            assert_relative_eq!(got.re, want.re, epsilon = 1e-12);
            assert_relative_eq!(got.im, want.im, epsilon = 1e-12);
        }
    }

    #[test]
    fn rejects_non_power_of_two() {
        assert!(Radix2Fft::<f64>::new(12).is_err());
    }
}
