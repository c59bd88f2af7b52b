//! Periodic computational domain and its wavenumber lattice.

use crate::{Error, Real, Result};

/// Uniform periodic grid on `[-lx*pi, lx*pi) x [-ly*pi, ly*pi)`.
///
/// Point counts must be powers of two (radix-2 transforms); a 1d grid
/// is expressed as `ny = 1`. Grid point `n` maps to
/// `x_n = -lx*pi + 2*pi*n*lx/nx`, and wavenumber index `m` to
/// `k_m = m/lx` in standard FFT ordering with the (unpaired) Nyquist
/// mode at index `nx/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec<T> {
    nx: usize,
    ny: usize,
    lx: T,
    ly: T,
}

/// Validated constructor, see [`GridSpec`].
pub fn make_grid<T: Real>(nx: usize, ny: usize, lx: T, ly: T) -> Result<GridSpec<T>> {
    GridSpec::new(nx, ny, lx, ly)
}

impl<T: Real> GridSpec<T> {
    pub fn new(nx: usize, ny: usize, lx: T, ly: T) -> Result<Self> {
        if !nx.is_power_of_two() || !ny.is_power_of_two() {
            return Err(Error::InvalidConfig(format!(
                "grid counts must be powers of two, got nx={nx}, ny={ny}"
            )));
        }
        if !(lx > T::zero()) || !(ly > T::zero()) {
            return Err(Error::InvalidConfig(format!(
                "scale factors must be positive, got lx={lx}, ly={ly}"
            )));
        }
        Ok(Self { nx, ny, lx, ly })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn lx(&self) -> T {
        self.lx
    }

    pub fn ly(&self) -> T {
        self.ly
    }

    pub fn is_1d(&self) -> bool {
        self.ny == 1
    }

    /// Number of collocation points.
    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Coordinate spacing in x: `2*pi*lx/nx`.
    pub fn dx(&self) -> T {
        T::lit(2.0) * T::PI() * self.lx / T::from_count(self.nx)
    }

    pub fn dy(&self) -> T {
        T::lit(2.0) * T::PI() * self.ly / T::from_count(self.ny)
    }

    /// Quadrature weight of one cell (`dx` for 1d grids).
    pub fn cell_area(&self) -> T {
        if self.is_1d() {
            self.dx()
        } else {
            self.dx() * self.dy()
        }
    }

    pub fn x(&self) -> Vec<T> {
        Self::coords(self.nx, self.lx)
    }

    pub fn y(&self) -> Vec<T> {
        Self::coords(self.ny, self.ly)
    }

    /// Wavenumbers `k_m = m/lx` in FFT order; the Nyquist mode is kept
    /// (as the negative unpaired frequency).
    pub fn kx(&self) -> Vec<T> {
        Self::wavenumbers(self.nx, self.lx)
    }

    pub fn ky(&self) -> Vec<T> {
        Self::wavenumbers(self.ny, self.ly)
    }

    /// Wavenumbers with the Nyquist mode zeroed, for odd-order
    /// (first) derivative symbols.
    pub fn kx_deriv(&self) -> Vec<T> {
        let mut k = self.kx();
        if self.nx > 1 {
            k[self.nx / 2] = T::zero();
        }
        k
    }

    pub fn ky_deriv(&self) -> Vec<T> {
        let mut k = self.ky();
        if self.ny > 1 {
            k[self.ny / 2] = T::zero();
        }
        k
    }

    fn coords(n: usize, l: T) -> Vec<T> {
        let step = T::lit(2.0) * T::PI() * l / T::from_count(n);
        let origin = -l * T::PI();
        (0..n).map(|i| origin + step * T::from_count(i)).collect()
    }

    fn wavenumbers(n: usize, l: T) -> Vec<T> {
        (0..n)
            .map(|i| {
                let m = if i < n / 2 || n == 1 {
                    i as isize
                } else {
                    i as isize - n as isize
                };
                T::lit(m as f64) / l
            })
            .collect()
    }
}
