//! Closed-form exact solutions and the perturbation scenario catalog.
//!
//! Two exact DS II solutions with algebraic falloff serve as oracles:
//! the lump (a regular two-dimensional soliton moving with constant
//! velocity) and the Ozawa solution (L2 norm fixed at `2√π`, pointwise
//! L∞ blowup at `T = -a/b`). The focusing quintic NLS Gaussian datum
//! `1.8i exp(-x^2)` is the 1d blowup benchmark. Scenarios perturb a
//! base solution by exactly one modifier (rescale, added Gaussian, or
//! y-deformation).

use num_complex::Complex;

use crate::fourier::SlabField;
use crate::grid::GridSpec;
use crate::nls1d::Field1D;
use crate::{Error, Real, Result};

/// Lump parameters; `|c| > 0` keeps the denominator strictly positive,
/// so the solution is regular for all time.
#[derive(Clone, Copy, Debug)]
pub struct LumpParams<T> {
    pub c: Complex<T>,
    pub z0: Complex<T>,
    pub xi: T,
    pub eta: T,
}

impl<T: Real> Default for LumpParams<T> {
    /// The reference run: ξ=0, η=-1, z0=1, c=1.
    fn default() -> Self {
        Self {
            c: Complex::new(T::one(), T::zero()),
            z0: Complex::new(T::one(), T::zero()),
            xi: T::zero(),
            eta: -T::one(),
        }
    }
}

impl<T: Real> LumpParams<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.c.norm_sqr() > T::zero()) {
            return Err(Error::InvalidConfig("lump amplitude c must be nonzero".into()));
        }
        Ok(())
    }
}

/// Ozawa parameters; `a*b < 0` puts the blowup time `T = -a/b` in the
/// future.
#[derive(Clone, Copy, Debug)]
pub struct OzawaParams<T> {
    pub a: T,
    pub b: T,
}

impl<T: Real> Default for OzawaParams<T> {
    /// The reference run: a=1, b=-4, so T = 1/4.
    fn default() -> Self {
        Self {
            a: T::one(),
            b: -T::lit(4.0),
        }
    }
}

impl<T: Real> OzawaParams<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.a * self.b < T::zero()) {
            return Err(Error::InvalidConfig(format!(
                "Ozawa parameters need a*b < 0, got a={}, b={}",
                self.a, self.b
            )));
        }
        Ok(())
    }

    /// Blowup time `T = -a/b`.
    pub fn blowup_time(&self) -> T {
        -self.a / self.b
    }
}

/// Pointwise lump value
///
/// ```text
/// u = 2c exp(-2i(ξx - ηy + 2(ξ²-η²)t)) / (|x+4ξt + i(y+4ηt) + z0|² + |c|²)
/// ```
pub fn lump_value<T: Real>(p: &LumpParams<T>, x: T, y: T, t: T) -> Complex<T> {
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    let phase = -two * (p.xi * x - p.eta * y + two * (p.xi * p.xi - p.eta * p.eta) * t);
    let w = Complex::new(x + four * p.xi * t, y + four * p.eta * t) + p.z0;
    let den = w.norm_sqr() + p.c.norm_sqr();
    p.c.scale(two / den) * Complex::new(phase.cos(), phase.sin())
}

/// Sample the lump on a grid at time `t`.
pub fn lump_at<T: Real>(g: GridSpec<T>, p: LumpParams<T>, t: T) -> SlabField<T> {
    SlabField::from_fn(g, |x, y| lump_value(&p, x, y, t))
}

/// Pointwise Ozawa value (caller guarantees `t != T`):
///
/// ```text
/// u = exp(i b (x²-y²) / (4(a+bt))) v(X,Y) / (a+bt),
/// v = 2/(1+X²+Y²), X = x/(a+bt), Y = y/(a+bt)
/// ```
pub fn ozawa_value<T: Real>(p: &OzawaParams<T>, x: T, y: T, t: T) -> Complex<T> {
    let s = p.a + p.b * t;
    let xs = x / s;
    let ys = y / s;
    let v = T::lit(2.0) / (T::one() + xs * xs + ys * ys);
    let phase = p.b * (x * x - y * y) / (T::lit(4.0) * s);
    Complex::new(phase.cos(), phase.sin()).scale(v / s)
}

/// Sample the Ozawa solution on a grid at time `t`; `t = T` is the
/// singular time and is rejected.
pub fn ozawa_at<T: Real>(g: GridSpec<T>, p: OzawaParams<T>, t: T) -> Result<SlabField<T>> {
    p.validate()?;
    if p.a + p.b * t == T::zero() {
        return Err(Error::SingularTime(format!(
            "Ozawa solution is singular at t = {}",
            p.blowup_time()
        )));
    }
    Ok(SlabField::from_fn(g, |x, y| ozawa_value(&p, x, y, t)))
}

/// Base exact solution of a scenario.
#[derive(Clone, Copy, Debug)]
pub enum Base<T> {
    Lump(LumpParams<T>),
    Ozawa(OzawaParams<T>),
    /// 1d quintic NLS Gaussian datum `1.8i exp(-x²)`.
    QuinticGaussian,
}

/// Exactly one perturbation applied to the base datum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Modifier<T> {
    None,
    /// Multiply the base field by a real factor.
    Scale(T),
    /// Add `B exp(-(x²+y²))` (or `D`; `B exp(-x²)` in 1d).
    AddGaussian(T),
    /// Evaluate the base with `y` replaced by `κy` (ν for Ozawa,
    /// inside both the phase and the denominator).
    DeformY(T),
}

/// A named experiment: base solution, one modifier, and the start time
/// at which the initial datum is sampled.
#[derive(Clone, Copy, Debug)]
pub struct Scenario<T> {
    pub base: Base<T>,
    pub modifier: Modifier<T>,
    pub t_start: T,
}

/// Either a 2d or a 1d initial datum, depending on the base equation.
#[derive(Clone, Debug)]
pub enum InitialData<T: Real> {
    Plane(SlabField<T>),
    Line(Field1D<T>),
}

/// Quintic NLS Gaussian amplitude (1.8, applied with a factor `i`).
pub fn quintic_amplitude<T: Real>() -> T {
    T::lit(1.8)
}

/// Sample the scenario's initial datum on the grid.
pub fn build_initial<T: Real>(s: &Scenario<T>, g: GridSpec<T>) -> Result<InitialData<T>> {
    match s.base {
        Base::QuinticGaussian => {
            let amp = match s.modifier {
                Modifier::None => quintic_amplitude(),
                Modifier::Scale(f) => f * quintic_amplitude(),
                _ => {
                    return Err(Error::InvalidScenario(
                        "only rescaling applies to the quintic Gaussian datum".into(),
                    ))
                }
            };
            let u = Field1D::from_fn(g, |x| Complex::new(T::zero(), amp * (-x * x).exp()))?;
            Ok(InitialData::Line(u))
        }
        Base::Lump(p) => {
            p.validate()?;
            let t = s.t_start;
            let u = match s.modifier {
                Modifier::DeformY(k) => {
                    SlabField::from_fn(g, |x, y| lump_value(&p, x, k * y, t))
                }
                _ => modified_plane(g, s.modifier, |x, y| lump_value(&p, x, y, t))?,
            };
            Ok(InitialData::Plane(u))
        }
        Base::Ozawa(p) => {
            p.validate()?;
            let t = s.t_start;
            if p.a + p.b * t == T::zero() {
                return Err(Error::SingularTime(
                    "scenario starts at the Ozawa singular time".into(),
                ));
            }
            let u = match s.modifier {
                Modifier::DeformY(nu) => {
                    SlabField::from_fn(g, |x, y| ozawa_value(&p, x, nu * y, t))
                }
                _ => modified_plane(g, s.modifier, |x, y| ozawa_value(&p, x, y, t))?,
            };
            Ok(InitialData::Plane(u))
        }
    }
}

fn modified_plane<T: Real>(
    g: GridSpec<T>,
    modifier: Modifier<T>,
    base: impl Fn(T, T) -> Complex<T>,
) -> Result<SlabField<T>> {
    match modifier {
        Modifier::None => Ok(SlabField::from_fn(g, base)),
        Modifier::Scale(f) => Ok(SlabField::from_fn(g, |x, y| base(x, y).scale(f))),
        Modifier::AddGaussian(amp) => Ok(SlabField::from_fn(g, |x, y| {
            base(x, y) + Complex::new(amp * (-(x * x + y * y)).exp(), T::zero())
        })),
        Modifier::DeformY(_) => unreachable!("deformation handled per base"),
    }
}

/// A preset scenario together with its desk-scale run shape.
#[derive(Clone, Copy, Debug)]
pub struct Preset<T> {
    pub key: &'static str,
    pub scenario: Scenario<T>,
    pub nx: usize,
    pub ny: usize,
    pub lx: T,
    pub ly: T,
    pub nt: usize,
    pub t_end: T,
    pub cadence: usize,
}

fn lump_preset<T: Real>(key: &'static str, modifier: Modifier<T>) -> Preset<T> {
    Preset {
        key,
        scenario: Scenario {
            base: Base::Lump(LumpParams::default()),
            modifier,
            t_start: -T::lit(6.0),
        },
        nx: 1024,
        ny: 1024,
        lx: T::lit(50.0),
        ly: T::lit(50.0),
        nt: 1000,
        t_end: T::lit(6.0),
        cadence: 4,
    }
}

fn ozawa_preset<T: Real>(key: &'static str, modifier: Modifier<T>) -> Preset<T> {
    Preset {
        key,
        scenario: Scenario {
            base: Base::Ozawa(OzawaParams::default()),
            modifier,
            t_start: T::zero(),
        },
        nx: 1024,
        ny: 1024,
        lx: T::lit(20.0),
        ly: T::lit(20.0),
        nt: 2000,
        t_end: T::lit(0.3),
        cadence: 4,
    }
}

fn quintic_preset<T: Real>(key: &'static str, modifier: Modifier<T>) -> Preset<T> {
    Preset {
        key,
        scenario: Scenario {
            base: Base::QuinticGaussian,
            modifier,
            t_start: T::zero(),
        },
        nx: 4096,
        ny: 1,
        lx: T::lit(5.0),
        ly: T::one(),
        nt: 10_000,
        t_end: T::lit(0.2),
        cadence: 20,
    }
}

/// The full catalog of named presets (the perturbation parameter sets
/// A, B, κ, C, D, ν from the reference experiments).
pub fn presets<T: Real>() -> Vec<Preset<T>> {
    vec![
        lump_preset("lump", Modifier::None),
        lump_preset("lump-scale-0.9", Modifier::Scale(T::lit(0.9))),
        lump_preset("lump-scale-1.1", Modifier::Scale(T::lit(1.1))),
        lump_preset("lump-gauss-0.1", Modifier::AddGaussian(T::lit(0.1))),
        lump_preset("lump-gauss-0.5", Modifier::AddGaussian(T::lit(0.5))),
        lump_preset("lump-deform-0.9", Modifier::DeformY(T::lit(0.9))),
        lump_preset("lump-deform-1.1", Modifier::DeformY(T::lit(1.1))),
        ozawa_preset("ozawa", Modifier::None),
        ozawa_preset("ozawa-scale-0.9", Modifier::Scale(T::lit(0.9))),
        ozawa_preset("ozawa-scale-1.1", Modifier::Scale(T::lit(1.1))),
        ozawa_preset("ozawa-gauss-0.1", Modifier::AddGaussian(T::lit(0.1))),
        ozawa_preset("ozawa-gauss-0.5", Modifier::AddGaussian(T::lit(0.5))),
        ozawa_preset("ozawa-deform-0.9", Modifier::DeformY(T::lit(0.9))),
        ozawa_preset("ozawa-deform-1.1", Modifier::DeformY(T::lit(1.1))),
        quintic_preset("quintic", Modifier::None),
        quintic_preset("quintic-small", Modifier::Scale(T::lit(0.5))),
    ]
}

/// Look up a preset by key; the error message lists every known key.
pub fn preset<T: Real>(key: &str) -> Result<Preset<T>> {
    let catalog = presets::<T>();
    catalog
        .iter()
        .find(|p| p.key == key)
        .copied()
        .ok_or_else(|| {
            let keys: Vec<&str> = catalog.iter().map(|p| p.key).collect();
            Error::InvalidScenario(format!(
                "unknown scenario '{key}'; available: {}",
                keys.join(", ")
            ))
        })
}
