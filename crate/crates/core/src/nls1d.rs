//! 1+1 dimensional quintic nonlinear Schrödinger solver.
//!
//! `i u_t + u_xx + |u|^4 u = 0` on a periodic interval, split exactly
//! as the 2d solver: linear phase in Fourier space
//! (`û -> exp(-i kx^2 h) û`) and pointwise nonlinear rotation
//! (`u -> u exp(i |u|^4 h)`), composed with the shared Yoshida-4
//! coefficients. The quintic focusing nonlinearity is L2-critical in
//! one dimension, so sufficiently large data blow up in finite time.

use num_complex::Complex;

use crate::diagnostics::{self, RunStatus, TimeSeries};
use crate::fourier::{BackendKind, Fft1d};
use crate::grid::GridSpec;
use crate::splitting::{compose_step, yoshida4_coefficients, SplitCoefficients};
use crate::{Error, Real, Result};

/// Complex line field bound to a 1d grid (`ny = 1`).
#[derive(Clone, Debug)]
pub struct Field1D<T: Real> {
    grid: GridSpec<T>,
    data: Vec<Complex<T>>,
}

impl<T: Real> Field1D<T> {
    pub fn zeros(grid: GridSpec<T>) -> Result<Self> {
        Self::check(grid)?;
        Ok(Self {
            grid,
            data: vec![Complex::new(T::zero(), T::zero()); grid.nx()],
        })
    }

    pub fn from_fn(grid: GridSpec<T>, f: impl Fn(T) -> Complex<T>) -> Result<Self> {
        Self::check(grid)?;
        Ok(Self {
            grid,
            data: grid.x().into_iter().map(f).collect(),
        })
    }

    pub fn from_parts(grid: GridSpec<T>, data: Vec<Complex<T>>) -> Result<Self> {
        Self::check(grid)?;
        if data.len() != grid.nx() {
            return Err(Error::InvalidConfig(format!(
                "field data length {} does not match grid nx={}",
                data.len(),
                grid.nx()
            )));
        }
        Ok(Self { grid, data })
    }

    fn check(grid: GridSpec<T>) -> Result<()> {
        if !grid.is_1d() {
            return Err(Error::InvalidConfig(
                "Field1D requires a 1d grid (ny = 1)".into(),
            ));
        }
        Ok(())
    }

    pub fn grid(&self) -> &GridSpec<T> {
        &self.grid
    }

    pub fn data(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.data
    }

    pub fn max_sq_amp(&self) -> T {
        self.data
            .iter()
            .map(|z| z.norm_sqr())
            .fold(T::zero(), |a, b| a.max(b))
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

/// Split-step quintic NLS solver.
pub struct NlsSolver<T: Real> {
    grid: GridSpec<T>,
    fft: Fft1d<T>,
    coeffs: SplitCoefficients<T>,
}

impl<T: Real> NlsSolver<T> {
    pub fn new(grid: GridSpec<T>, backend: BackendKind) -> Result<Self> {
        if !grid.is_1d() {
            return Err(Error::InvalidConfig(
                "the 1d solver requires ny = 1".into(),
            ));
        }
        Ok(Self {
            grid,
            fft: Fft1d::new(grid.nx(), backend)?,
            coeffs: yoshida4_coefficients(),
        })
    }

    pub fn grid(&self) -> &GridSpec<T> {
        &self.grid
    }

    pub fn fft(&self) -> &Fft1d<T> {
        &self.fft
    }

    /// `û <- exp(-i kx^2 h) û` (full wavenumbers; the symbol is even so
    /// the Nyquist mode is kept).
    pub fn linear_flow(&self, mut u: Field1D<T>, h: T) -> Result<Field1D<T>> {
        self.check_field(&u)?;
        let kx = self.grid.kx();
        self.fft.forward(&mut u.data);
        for (z, &k) in u.data.iter_mut().zip(&kx) {
            let phase = -k * k * h;
            *z *= Complex::new(phase.cos(), phase.sin());
        }
        self.fft.inverse(&mut u.data);
        Ok(u)
    }

    /// `u <- u exp(i |u|^4 h)`; `|u|` is pointwise invariant.
    pub fn nonlinear_flow(&self, mut u: Field1D<T>, h: T) -> Result<Field1D<T>> {
        self.check_field(&u)?;
        for z in &mut u.data {
            let asq = z.norm_sqr();
            let theta = asq * asq * h;
            *z *= Complex::new(theta.cos(), theta.sin());
        }
        Ok(u)
    }

    fn check_field(&self, u: &Field1D<T>) -> Result<()> {
        if *u.grid() != self.grid {
            return Err(Error::ContractViolation(
                "field grid does not match solver grid".into(),
            ));
        }
        Ok(())
    }

    /// Evolve from `t0` to `t1` in `nt` uniform Yoshida-4 steps,
    /// sampling diagnostics every `cadence` steps. Non-finite fields
    /// halt the run with an overflow status instead of an error.
    pub fn evolve(
        &self,
        u0: Field1D<T>,
        t0: T,
        t1: T,
        nt: usize,
        cadence: usize,
    ) -> Result<(Field1D<T>, TimeSeries<T>)> {
        if nt == 0 {
            return Err(Error::InvalidConfig("nt must be >= 1".into()));
        }
        if cadence == 0 {
            return Err(Error::InvalidConfig("cadence must be >= 1".into()));
        }
        self.check_field(&u0)?;
        let dt = (t1 - t0) / T::from_count(nt);
        // two distinct linear stage widths per Yoshida step
        let kx = self.grid.kx();
        let tables: Vec<(T, Vec<Complex<T>>)> = {
            let mut hs: Vec<T> = Vec::new();
            for &c in &self.coeffs.c {
                let h = c * dt;
                if !hs.contains(&h) {
                    hs.push(h);
                }
            }
            hs.into_iter()
                .map(|h| {
                    let table = kx
                        .iter()
                        .map(|&k| {
                            let phase = -k * k * h;
                            Complex::new(phase.cos(), phase.sin())
                        })
                        .collect();
                    (h, table)
                })
                .collect()
        };
        let flow_a = |mut u: Field1D<T>, h: T| {
            let table = tables
                .iter()
                .find(|(th, _)| *th == h)
                .map(|(_, t)| t)
                .expect("stage width present in symbol cache");
            self.fft.forward(&mut u.data);
            for (z, m) in u.data.iter_mut().zip(table) {
                *z *= m;
            }
            self.fft.inverse(&mut u.data);
            u
        };
        let flow_b = |u: Field1D<T>, h: T| self.nonlinear_flow(u, h).expect("nonlinear stage");

        let mut series = TimeSeries::new();
        self.observe(&mut series, t0, &u0);
        let mut u = u0;
        for n in 0..nt {
            u = compose_step(u, dt, &flow_a, &flow_b, &self.coeffs);
            let t = t0 + T::from_count(n + 1) * dt;
            if (n + 1) % cadence == 0 || n + 1 == nt {
                if !u.all_finite() {
                    series.set_status(RunStatus::OverflowHalt(t));
                    return Ok((u, series));
                }
                self.observe(&mut series, t, &u);
            }
        }
        Ok((u, series))
    }

    fn observe(&self, series: &mut TimeSeries<T>, t: T, u: &Field1D<T>) {
        let l2 = diagnostics::l2_norm_1d(u);
        let energy = diagnostics::nls_energy(&self.fft, u);
        series.push(t, u.max_sq_amp(), l2, energy);
    }
}
