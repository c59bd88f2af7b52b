//! Conserved-quantity tracking, blowup detection and resolution
//! monitoring.
//!
//! The central observable is the relative energy defect
//! `ΔE(t) = |1 - E(t)/E(0)|`. The splitting conserves the discrete L2
//! norm to rounding but *not* the energy; near a singularity the energy
//! defect jumps by many orders of magnitude within a step or two, which
//! is what [`detect_blowup`] keys on.

use std::io::Write;

use num_complex::Complex;

use crate::dsii::{solve_phi, DsParams};
use crate::fourier::{Fft1d, Fft2d, Layout, SlabField, Space};
use crate::nls1d::Field1D;
use crate::{Error, Real, Result};

/// One diagnostic record along a run.
#[derive(Clone, Copy, Debug)]
pub struct Sample<T> {
    pub t: T,
    pub max_sq_amp: T,
    pub l2_norm: T,
    pub energy: T,
    /// `|1 - E(t)/E(0)|`, or `|E(t)|` when `E(0) = 0`.
    pub delta_e: T,
}

/// How a run ended.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RunStatus<T> {
    Completed,
    /// The field stopped being finite at the given time; the series
    /// holds everything sampled before that.
    OverflowHalt(T),
}

/// Diagnostic series collected while stepping.
#[derive(Clone, Debug)]
pub struct TimeSeries<T: Real> {
    samples: Vec<Sample<T>>,
    status: RunStatus<T>,
    e0: Option<T>,
}

impl<T: Real> Default for TimeSeries<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> TimeSeries<T> {
    pub fn new() -> Self {
        Self {
            samples: Vec::new(),
            status: RunStatus::Completed,
            e0: None,
        }
    }

    pub fn push(&mut self, t: T, max_sq_amp: T, l2_norm: T, energy: T) {
        let e0 = *self.e0.get_or_insert(energy);
        let delta_e = if e0 != T::zero() {
            (T::one() - energy / e0).abs()
        } else {
            energy.abs()
        };
        self.samples.push(Sample {
            t,
            max_sq_amp,
            l2_norm,
            energy,
            delta_e,
        });
    }

    pub fn set_status(&mut self, status: RunStatus<T>) {
        self.status = status;
    }

    pub fn status(&self) -> RunStatus<T> {
        self.status
    }

    pub fn samples(&self) -> &[Sample<T>] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// CSV with a fixed header; values are written in round-trip
    /// scientific notation so the file is a faithful record.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "t,max_sq_amp,l2_norm,energy,delta_e")?;
        for s in &self.samples {
            writeln!(
                w,
                "{:e},{:e},{:e},{:e},{:e}",
                s.t, s.max_sq_amp, s.l2_norm, s.energy, s.delta_e
            )?;
        }
        Ok(())
    }
}

/// Discrete L2 norm `sqrt(sum |u|^2 dA)`, reduced per slab in worker
/// order so the result does not depend on scheduling.
pub fn l2_norm<T: Real>(engine: &Fft2d<T>, u: &SlabField<T>) -> T {
    let rows = u.rows();
    let partials = engine.pool().map_slabs(u.data(), rows, |_, _, slab| {
        slab.iter().map(|z| z.norm_sqr()).fold(T::zero(), |a, b| a + b)
    });
    let total = partials.into_iter().fold(T::zero(), |a, b| a + b);
    (total * u.grid().cell_area()).sqrt()
}

pub fn l2_norm_1d<T: Real>(u: &Field1D<T>) -> T {
    let total = u
        .data()
        .iter()
        .map(|z| z.norm_sqr())
        .fold(T::zero(), |a, b| a + b);
    (total * u.grid().cell_area()).sqrt()
}

/// DS II energy functional
///
/// ```text
/// E = 1/2 ∫ |u_x|^2 - |u_y|^2 - rho (|u|^4 - 1/2 (Φ^2 + (∂x^-1 ∂y Φ)^2))
/// ```
///
/// All derivatives are spectral; the odd-derivative symbols zero the
/// Nyquist mode, and the antiderivative symbol `ky/kx` zeroes the
/// `kx = 0` column (where Φ̂ itself vanishes except at the gauged
/// origin).
pub fn ds_energy<T: Real>(engine: &Fft2d<T>, u: &SlabField<T>, params: DsParams) -> Result<T> {
    if u.space() != Space::Physical || u.layout() != Layout::XContiguous {
        return Err(Error::ContractViolation(
            "energy evaluation expects a Physical, XContiguous field".into(),
        ));
    }
    let grid = *u.grid();
    let uh = engine.forward(u.clone())?;

    let ikx = deriv_table(engine, Axis::X);
    let mut uxh = uh.clone();
    engine.apply_table(&mut uxh, &ikx)?;
    let ux = engine.inverse(uxh)?;

    let iky = deriv_table(engine, Axis::Y);
    let mut uyh = uh;
    engine.apply_table(&mut uyh, &iky)?;
    let uy = engine.inverse(uyh)?;

    let usq = SlabField::from_parts(
        grid,
        u.data()
            .iter()
            .map(|z| Complex::new(z.norm_sqr(), T::zero()))
            .collect(),
        Layout::XContiguous,
        Space::Physical,
    )?;
    let usq_hat = engine.forward(usq)?;
    let phi_hat = solve_phi(engine, &usq_hat)?;
    let mut g_hat = phi_hat.clone();
    engine.apply_multiplier(&mut g_hat, |kx, ky| {
        if kx == T::zero() {
            Complex::new(T::zero(), T::zero())
        } else {
            Complex::new(ky / kx, T::zero())
        }
    })?;
    let phi = engine.inverse(phi_hat)?;
    let g = engine.inverse(g_hat)?;

    let rho = params.rho.sign::<T>();
    let half = T::lit(0.5);
    let rows = u.rows();
    let cols = u.cols();
    let (ud, uxd, uyd, pd, gd) = (u.data(), ux.data(), uy.data(), phi.data(), g.data());
    let partials = engine.pool().map_slabs(ud, rows, |_, first_row, slab| {
        let off = first_row * cols;
        let mut acc = T::zero();
        for (i, z) in slab.iter().enumerate() {
            let j = off + i;
            let asq = z.norm_sqr();
            let quartic = asq * asq;
            let mean_field = pd[j].re * pd[j].re + gd[j].re * gd[j].re;
            acc += uxd[j].norm_sqr() - uyd[j].norm_sqr()
                - rho * (quartic - half * mean_field);
        }
        acc
    });
    let total = partials.into_iter().fold(T::zero(), |a, b| a + b);
    Ok(half * total * grid.cell_area())
}

/// Quintic NLS energy `E = ∫ 1/2 |u_x|^2 - |u|^6 / 6 dx`.
pub fn nls_energy<T: Real>(fft: &Fft1d<T>, u: &Field1D<T>) -> T {
    let grid = u.grid();
    let kd = grid.kx_deriv();
    let mut uxh = u.data().to_vec();
    fft.forward(&mut uxh);
    for (z, &k) in uxh.iter_mut().zip(&kd) {
        *z *= Complex::new(T::zero(), k);
    }
    fft.inverse(&mut uxh);
    let half = T::lit(0.5);
    let sixth = T::one() / T::lit(6.0);
    let mut acc = T::zero();
    for (z, ux) in u.data().iter().zip(&uxh) {
        let asq = z.norm_sqr();
        acc += half * ux.norm_sqr() - sixth * asq * asq * asq;
    }
    acc * grid.cell_area()
}

enum Axis {
    X,
    Y,
}

/// `i k` first-derivative symbol table (Transposed layout, Nyquist
/// zeroed).
fn deriv_table<T: Real>(engine: &Fft2d<T>, axis: Axis) -> Vec<Complex<T>> {
    let grid = engine.grid();
    let kx = grid.kx_deriv();
    let ky = grid.ky_deriv();
    let mut table = Vec::with_capacity(grid.len());
    for &kxv in &kx {
        for &kyv in &ky {
            let k = match axis {
                Axis::X => kxv,
                Axis::Y => kyv,
            };
            table.push(Complex::new(T::zero(), k));
        }
    }
    table
}

/// Thresholds for the energy-jump detector.
#[derive(Clone, Copy, Debug)]
pub struct DetectorConfig<T> {
    /// Absolute ΔE floor a jump must clear.
    pub jump_abs: T,
    /// Multiple of the baseline ΔE a jump must clear.
    pub jump_rel: T,
}

impl<T: Real> Default for DetectorConfig<T> {
    fn default() -> Self {
        Self {
            jump_abs: T::lit(1e-2),
            jump_rel: T::lit(1e3),
        }
    }
}

/// Outcome of [`detect_blowup`].
#[derive(Clone, Copy, Debug)]
pub struct BlowupReport<T> {
    pub blew_up: bool,
    /// Estimated singular time: midpoint between the last quiet sample
    /// and the first sample of the persistent jump.
    pub t_c: Option<T>,
    /// Post-jump ΔE plateau over pre-jump baseline (infinite when the
    /// run overflowed before a finite plateau was recorded).
    pub jump_ratio: T,
    pub baseline: T,
    pub threshold: T,
}

impl<T: Real> BlowupReport<T> {
    /// `key=value` lines, one per field.
    pub fn to_key_values(&self) -> String {
        let t_c = match self.t_c {
            Some(t) => format!("{t:e}"),
            None => "none".to_string(),
        };
        format!(
            "blew_up={}\nt_c={}\njump_ratio={:e}\nbaseline={:e}\nthreshold={:e}\n",
            self.blew_up, t_c, self.jump_ratio, self.baseline, self.threshold
        )
    }
}

fn median<T: Real>(values: &mut [T]) -> T {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) * T::lit(0.5)
    }
}

/// Energy-jump blowup detector.
///
/// The quiet baseline is the median ΔE over the first quarter of the
/// samples (floored at 1e-16). A blowup is declared at the earliest
/// sample from which ΔE stays at or above
/// `max(jump_abs, jump_rel * baseline)` for the rest of the run; the
/// singular time estimate is the midpoint between that sample and its
/// predecessor. A run that overflowed is always a blowup; if no finite
/// jump preceded the overflow, `t_c` is the halt time and the jump
/// ratio is reported as infinite.
pub fn detect_blowup<T: Real>(
    series: &TimeSeries<T>,
    cfg: DetectorConfig<T>,
) -> Result<BlowupReport<T>> {
    let s = series.samples();
    if s.len() < 8 {
        // an overflowed run is a blowup however short the record is
        if let RunStatus::OverflowHalt(t_halt) = series.status() {
            let baseline = T::lit(1e-16);
            return Ok(BlowupReport {
                blew_up: true,
                t_c: Some(t_halt),
                jump_ratio: T::infinity(),
                baseline,
                threshold: cfg.jump_abs.max(cfg.jump_rel * baseline),
            });
        }
        return Err(Error::ContractViolation(format!(
            "blowup detection needs at least 8 samples, got {}",
            s.len()
        )));
    }
    let n4 = s.len() / 4;
    let mut head: Vec<T> = s[..n4].iter().map(|x| x.delta_e).collect();
    let baseline = median(&mut head).max(T::lit(1e-16));
    let threshold = cfg.jump_abs.max(cfg.jump_rel * baseline);

    // longest suffix with delta_e >= threshold throughout
    let mut start = s.len();
    while start > 1 && s[start - 1].delta_e >= threshold {
        start -= 1;
    }
    let jumped = start < s.len();

    if jumped {
        let mut plateau: Vec<T> = s[start..].iter().map(|x| x.delta_e).collect();
        let plateau = median(&mut plateau);
        return Ok(BlowupReport {
            blew_up: true,
            t_c: Some((s[start - 1].t + s[start].t) * T::lit(0.5)),
            jump_ratio: plateau / baseline,
            baseline,
            threshold,
        });
    }
    if let RunStatus::OverflowHalt(t_halt) = series.status() {
        return Ok(BlowupReport {
            blew_up: true,
            t_c: Some(t_halt),
            jump_ratio: T::infinity(),
            baseline,
            threshold,
        });
    }
    let mut tail: Vec<T> = s[s.len() - n4..].iter().map(|x| x.delta_e).collect();
    let plateau = median(&mut tail);
    Ok(BlowupReport {
        blew_up: false,
        t_c: None,
        jump_ratio: plateau / baseline,
        baseline,
        threshold,
    })
}

/// Global-existence threshold constant
/// `pi^3/2 * ((sqrt(5) - 1)/2)^2 ≈ 5.9217`.
pub fn sung_threshold<T: Real>() -> T {
    let phi = (T::lit(5.0).sqrt() - T::one()) * T::lit(0.5);
    T::PI().powi(3) * T::lit(0.5) * phi * phi
}

/// `||û||_L1 * ||û||_Linf` of the initial datum, in the convention
/// `û(k) = ∫ u e^{-ik·x} dx dy`, `||û||_L1 = ∫ |û| dk/(2π)^2`.
/// Returns the product and whether it clears the smallness threshold
/// (product strictly below [`sung_threshold`] guarantees global
/// existence for defocusing-type data).
pub fn sung_product<T: Real>(engine: &Fft2d<T>, u: &SlabField<T>) -> Result<(T, bool)> {
    if u.space() != Space::Physical {
        return Err(Error::ContractViolation(
            "the smallness criterion applies to a physical initial datum".into(),
        ));
    }
    let grid = *u.grid();
    let uh = engine.forward(u.clone())?;
    let cell = grid.cell_area();
    let mut sum = T::zero();
    let mut peak = T::zero();
    for z in uh.data() {
        let a = z.norm();
        sum += a;
        peak = peak.max(a);
    }
    // |û_cont| = |û_disc| * dA; dk measure / (2π)^2 collapses to 1/(nx*ny)
    let l1 = sum / T::from_count(grid.len());
    let linf = peak * cell;
    let product = l1 * linf;
    Ok((product, product < sung_threshold()))
}

/// Resolution monitor: largest coefficient magnitude in the outer 10%
/// of the spectrum (either axis), relative to the spectral peak.
pub fn spectral_tail<T: Real>(engine: &Fft2d<T>, u: &SlabField<T>) -> Result<T> {
    let spectrum = match u.space() {
        Space::Spectral => u.clone(),
        Space::Physical => engine.forward(u.clone())?,
    };
    let grid = *u.grid();
    let kx = grid.kx();
    let ky = grid.ky();
    let kx_edge = T::lit(0.9) * T::from_count(grid.nx() / 2) / grid.lx();
    let ky_edge = T::lit(0.9) * T::from_count(grid.ny() / 2) / grid.ly();
    let mut peak = T::zero();
    let mut tail = T::zero();
    for ix in 0..grid.nx() {
        for iy in 0..grid.ny() {
            let a = spectrum.get(ix, iy).norm();
            peak = peak.max(a);
            if kx[ix].abs() >= kx_edge || (grid.ny() > 1 && ky[iy].abs() >= ky_edge) {
                tail = tail.max(a);
            }
        }
    }
    if peak == T::zero() {
        Ok(T::zero())
    } else {
        Ok(tail / peak)
    }
}

/// 1d counterpart of [`spectral_tail`].
pub fn spectral_tail_1d<T: Real>(fft: &Fft1d<T>, u: &Field1D<T>) -> T {
    let grid = u.grid();
    let mut uh = u.data().to_vec();
    fft.forward(&mut uh);
    let kx = grid.kx();
    let kx_edge = T::lit(0.9) * T::from_count(grid.nx() / 2) / grid.lx();
    let mut peak = T::zero();
    let mut tail = T::zero();
    for (z, &k) in uh.iter().zip(&kx) {
        let a = z.norm();
        peak = peak.max(a);
        if k.abs() >= kx_edge {
            tail = tail.max(a);
        }
    }
    if peak == T::zero() {
        T::zero()
    } else {
        tail / peak
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic_series(deltas: &[f64]) -> TimeSeries<f64> {
        // reconstruct energies that reproduce the requested delta_e
        let mut ts = TimeSeries::new();
        let e0 = 2.0;
        for (i, &d) in deltas.iter().enumerate() {
            let e = e0 * (1.0 - d);
            ts.push(i as f64 * 0.1, 1.0, 1.0, if i == 0 { e0 } else { e });
        }
        ts
    }

    #[test]
    fn quiet_series_reports_no_blowup() {
        let deltas: Vec<f64> = (0..32).map(|i| 1e-12 * (1.0 + (i % 3) as f64)).collect();
        let ts = synthetic_series(&deltas);
        let report = detect_blowup(&ts, DetectorConfig::default()).unwrap();
        assert!(!report.blew_up);
        assert!(report.t_c.is_none());
    }

    #[test]
    fn persistent_jump_is_detected_at_midpoint() {
        let mut deltas = vec![1e-12; 20];
        deltas.extend(vec![5.0; 12]);
        let ts = synthetic_series(&deltas);
        let report = detect_blowup(&ts, DetectorConfig::default()).unwrap();
        assert!(report.blew_up);
        // jump between samples 19 (t=1.9) and 20 (t=2.0)
        let t_c = report.t_c.unwrap();
        assert!((t_c - 1.95).abs() < 1e-12, "t_c = {t_c}");
        assert!(report.jump_ratio > 1e3);
    }

    #[test]
    fn transient_spike_is_ignored() {
        let mut deltas = vec![1e-12; 16];
        deltas[10] = 1.0; // isolated glitch, not persistent
        deltas.extend(vec![2e-12; 16]);
        let ts = synthetic_series(&deltas);
        let report = detect_blowup(&ts, DetectorConfig::default()).unwrap();
        assert!(!report.blew_up);
    }

    #[test]
    fn overflow_without_jump_still_reports_blowup() {
        let deltas = vec![1e-12; 16];
        let mut ts = synthetic_series(&deltas);
        ts.set_status(RunStatus::OverflowHalt(1.6));
        let report = detect_blowup(&ts, DetectorConfig::default()).unwrap();
        assert!(report.blew_up);
        assert_eq!(report.t_c, Some(1.6));
        assert!(report.jump_ratio.is_infinite());
    }

    #[test]
    fn short_series_is_rejected() {
        let ts = synthetic_series(&[0.0; 4]);
        assert!(detect_blowup(&ts, DetectorConfig::default()).is_err());
    }

    #[test]
    fn short_series_with_overflow_is_still_a_blowup() {
        let mut ts = synthetic_series(&[0.0; 2]);
        ts.set_status(RunStatus::OverflowHalt(0.2));
        let report = detect_blowup(&ts, DetectorConfig::default()).unwrap();
        assert!(report.blew_up);
        assert_eq!(report.t_c, Some(0.2));
    }

    #[test]
    fn threshold_constant() {
        // pi^3/2 * ((sqrt 5 - 1)/2)^2, frozen
        let thr = sung_threshold::<f64>();
        assert!((thr - 5.921671913645637).abs() < 1e-12, "thr = {thr}");
    }

    #[test]
    fn zero_energy_reference_uses_absolute_defect() {
        let mut ts = TimeSeries::new();
        ts.push(0.0, 1.0, 1.0, 0.0);
        ts.push(0.1, 1.0, 1.0, 3e-9);
        assert_eq!(ts.samples()[1].delta_e, 3e-9);
    }
}
