//! Slab-decomposed 2d Fourier transform engine.
//!
//! A field lives on a row-slab decomposition across `p` workers. The 2d
//! transform is three phases: batched 1d FFTs along the contiguous x
//! rows, one global all-to-all transpose, batched 1d FFTs along the now
//! contiguous y rows. The transpose is the only synchronization point
//! per transform direction. Normalization: forward unscaled, inverse
//! carries `1/(nx*ny)`.

pub mod fft;
pub mod pool;

use std::sync::Arc;

use num_complex::Complex;

pub use fft::{make_backend, BackendKind, FftBackend, Radix2Fft, RustFftBackend};
pub use pool::WorkerPool;

use crate::grid::GridSpec;
use crate::{Error, Real, Result};

/// Which axis is contiguous in memory.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Layout {
    /// Rows are full x-lines; worker `i` holds `ny/p` of them.
    XContiguous,
    /// Rows are full y-lines; worker `i` holds `nx/p` of them.
    Transposed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Space {
    Physical,
    Spectral,
}

/// Complex 2d field stored row-major in its current layout, tagged with
/// that layout and with the space its values live in.
#[derive(Clone, Debug)]
pub struct SlabField<T: Real> {
    grid: GridSpec<T>,
    layout: Layout,
    space: Space,
    data: Vec<Complex<T>>,
}

impl<T: Real> SlabField<T> {
    pub fn zeros(grid: GridSpec<T>) -> Self {
        Self {
            grid,
            layout: Layout::XContiguous,
            space: Space::Physical,
            data: vec![Complex::new(T::zero(), T::zero()); grid.len()],
        }
    }

    /// Sample a function of physical coordinates onto the grid
    /// (XContiguous / Physical).
    pub fn from_fn(grid: GridSpec<T>, f: impl Fn(T, T) -> Complex<T>) -> Self {
        let x = grid.x();
        let y = grid.y();
        let mut data = Vec::with_capacity(grid.len());
        for &yv in &y {
            for &xv in &x {
                data.push(f(xv, yv));
            }
        }
        Self {
            grid,
            layout: Layout::XContiguous,
            space: Space::Physical,
            data,
        }
    }

    /// Wrap raw data with explicit tags. Length must match the grid.
    pub fn from_parts(
        grid: GridSpec<T>,
        data: Vec<Complex<T>>,
        layout: Layout,
        space: Space,
    ) -> Result<Self> {
        if data.len() != grid.len() {
            return Err(Error::InvalidConfig(format!(
                "field data length {} does not match grid {}x{}",
                data.len(),
                grid.nx(),
                grid.ny()
            )));
        }
        Ok(Self { grid, layout, space, data })
    }

    pub fn grid(&self) -> &GridSpec<T> {
        &self.grid
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn space(&self) -> Space {
        self.space
    }

    /// Rows in the current layout.
    pub fn rows(&self) -> usize {
        match self.layout {
            Layout::XContiguous => self.grid.ny(),
            Layout::Transposed => self.grid.nx(),
        }
    }

    /// Row length in the current layout.
    pub fn cols(&self) -> usize {
        match self.layout {
            Layout::XContiguous => self.grid.nx(),
            Layout::Transposed => self.grid.ny(),
        }
    }

    pub fn data(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<Complex<T>> {
        self.data
    }

    /// Element at physical/mode index `(ix, iy)` regardless of layout.
    pub fn get(&self, ix: usize, iy: usize) -> Complex<T> {
        match self.layout {
            Layout::XContiguous => self.data[iy * self.grid.nx() + ix],
            Layout::Transposed => self.data[ix * self.grid.ny() + iy],
        }
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

/// 2d transform engine bound to one grid, worker count and 1d backend.
pub struct Fft2d<T: Real> {
    grid: GridSpec<T>,
    pool: WorkerPool,
    row_fft: Arc<dyn FftBackend<T>>,
    col_fft: Arc<dyn FftBackend<T>>,
}

impl<T: Real> Fft2d<T> {
    pub fn new(grid: GridSpec<T>, workers: usize, backend: BackendKind) -> Result<Self> {
        let pool = WorkerPool::new(workers)?;
        if grid.nx() % workers != 0 || grid.ny() % workers != 0 {
            return Err(Error::InvalidConfig(format!(
                "worker count {workers} must divide nx={} and ny={}",
                grid.nx(),
                grid.ny()
            )));
        }
        Ok(Self {
            grid,
            pool,
            row_fft: make_backend(backend, grid.nx())?,
            col_fft: make_backend(backend, grid.ny())?,
        })
    }

    pub fn grid(&self) -> &GridSpec<T> {
        &self.grid
    }

    pub fn pool(&self) -> &WorkerPool {
        &self.pool
    }

    fn check_grid(&self, f: &SlabField<T>) -> Result<()> {
        if f.grid != self.grid {
            return Err(Error::ContractViolation(
                "field grid does not match engine grid".into(),
            ));
        }
        Ok(())
    }

    /// Batched in-place 1d transforms along the contiguous rows of the
    /// current layout.
    fn row_pass(&self, f: &mut SlabField<T>, backend: &Arc<dyn FftBackend<T>>, inverse: bool) {
        let rows = f.rows();
        let cols = f.cols();
        debug_assert_eq!(backend.len(), cols);
        let backend = backend.as_ref();
        self.pool.for_each_slab(&mut f.data, rows, |_, _, slab| {
            let mut scratch = vec![Complex::new(T::zero(), T::zero()); backend.scratch_len()];
            for row in slab.chunks_mut(cols) {
                if inverse {
                    backend.inverse(row, &mut scratch);
                } else {
                    backend.forward(row, &mut scratch);
                }
            }
        });
    }

    /// Global matrix transpose via block exchange: worker `j` gathers
    /// block `(i, j)` from every source slab `i` and writes it locally
    /// transposed into its own destination slab. Each element moves
    /// exactly once; the join at the end of the region is the barrier.
    pub fn transpose(&self, f: SlabField<T>) -> SlabField<T> {
        let src_rows = f.rows();
        let src_cols = f.cols();
        let mut dst = vec![Complex::new(T::zero(), T::zero()); f.data.len()];
        const TILE: usize = 64;
        self.pool
            .exchange(&f.data, &mut dst, src_cols, |_, first_row, src, slab| {
                let slab_rows = slab.len() / src_rows;
                for r0 in (0..slab_rows).step_by(TILE) {
                    for c0 in (0..src_rows).step_by(TILE) {
                        for r in r0..(r0 + TILE).min(slab_rows) {
                            let gr = first_row + r;
                            for c in c0..(c0 + TILE).min(src_rows) {
                                slab[r * src_rows + c] = src[c * src_cols + gr];
                            }
                        }
                    }
                }
            });
        SlabField {
            grid: f.grid,
            layout: match f.layout {
                Layout::XContiguous => Layout::Transposed,
                Layout::Transposed => Layout::XContiguous,
            },
            space: f.space,
            data: dst,
        }
    }

    /// Forward 2d transform: x-row FFTs, all-to-all transpose, y-row
    /// FFTs. Output is Spectral/Transposed, unscaled.
    pub fn forward(&self, mut f: SlabField<T>) -> Result<SlabField<T>> {
        self.check_grid(&f)?;
        if f.space != Space::Physical || f.layout != Layout::XContiguous {
            return Err(Error::ContractViolation(
                "forward transform expects a Physical, XContiguous field".into(),
            ));
        }
        self.row_pass(&mut f, &self.row_fft, false);
        let mut f = self.transpose(f);
        self.row_pass(&mut f, &self.col_fft, false);
        f.space = Space::Spectral;
        Ok(f)
    }

    /// Inverse of [`Fft2d::forward`]; carries the `1/(nx*ny)` scale.
    pub fn inverse(&self, mut f: SlabField<T>) -> Result<SlabField<T>> {
        self.check_grid(&f)?;
        if f.space != Space::Spectral || f.layout != Layout::Transposed {
            return Err(Error::ContractViolation(
                "inverse transform expects a Spectral, Transposed field".into(),
            ));
        }
        self.row_pass(&mut f, &self.col_fft, true);
        let mut f = self.transpose(f);
        self.row_pass(&mut f, &self.row_fft, true);
        let scale = T::one() / T::from_count(self.grid.len());
        let rows = f.rows();
        self.pool.for_each_slab(&mut f.data, rows, |_, _, slab| {
            for z in slab {
                *z = z.scale(scale);
            }
        });
        f.space = Space::Physical;
        Ok(f)
    }

    /// Pointwise product with a spectral symbol `m(kx, ky)` in FFT
    /// ordering, respecting the field's current layout.
    pub fn apply_multiplier(
        &self,
        f: &mut SlabField<T>,
        m: impl Fn(T, T) -> Complex<T> + Sync,
    ) -> Result<()> {
        self.check_grid(f)?;
        if f.space != Space::Spectral {
            return Err(Error::ContractViolation(
                "multiplier application expects a Spectral field".into(),
            ));
        }
        let kx = self.grid.kx();
        let ky = self.grid.ky();
        let layout = f.layout;
        let (krow, kcol) = match layout {
            Layout::XContiguous => (&ky, &kx),
            Layout::Transposed => (&kx, &ky),
        };
        let rows = f.rows();
        let cols = f.cols();
        self.pool.for_each_slab(&mut f.data, rows, |_, first_row, slab| {
            for (r, row) in slab.chunks_mut(cols).enumerate() {
                let kr = krow[first_row + r];
                for (c, z) in row.iter_mut().enumerate() {
                    let factor = match layout {
                        Layout::XContiguous => m(kcol[c], kr),
                        Layout::Transposed => m(kr, kcol[c]),
                    };
                    *z *= factor;
                }
            }
        });
        Ok(())
    }

    /// Pointwise product with a precomputed per-element table in the
    /// field's current layout (hot path for cached propagator symbols).
    pub fn apply_table(&self, f: &mut SlabField<T>, table: &[Complex<T>]) -> Result<()> {
        self.check_grid(f)?;
        if table.len() != f.data.len() {
            return Err(Error::ContractViolation(
                "multiplier table length mismatch".into(),
            ));
        }
        let rows = f.rows();
        let cols = f.cols();
        self.pool.for_each_slab(&mut f.data, rows, |_, first_row, slab| {
            let offset = first_row * cols;
            let len = slab.len();
            for (z, m) in slab.iter_mut().zip(&table[offset..offset + len]) {
                *z *= m;
            }
        });
        Ok(())
    }

    /// Build a symbol table in the given layout, for [`Fft2d::apply_table`].
    pub fn symbol_table(
        &self,
        layout: Layout,
        m: impl Fn(T, T) -> Complex<T>,
    ) -> Vec<Complex<T>> {
        let kx = self.grid.kx();
        let ky = self.grid.ky();
        let mut table = Vec::with_capacity(self.grid.len());
        match layout {
            Layout::XContiguous => {
                for &kyv in &ky {
                    for &kxv in &kx {
                        table.push(m(kxv, kyv));
                    }
                }
            }
            Layout::Transposed => {
                for &kxv in &kx {
                    for &kyv in &ky {
                        table.push(m(kxv, kyv));
                    }
                }
            }
        }
        table
    }
}

/// Batched 1d transform helper for the 1+1d solver (single worker).
pub struct Fft1d<T: Real> {
    backend: Arc<dyn FftBackend<T>>,
}

impl<T: Real> Fft1d<T> {
    pub fn new(len: usize, backend: BackendKind) -> Result<Self> {
        Ok(Self {
            backend: make_backend(backend, len)?,
        })
    }

    pub fn len(&self) -> usize {
        self.backend.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// In-place forward transform, unscaled.
    pub fn forward(&self, buf: &mut [Complex<T>]) {
        let mut scratch = vec![Complex::new(T::zero(), T::zero()); self.backend.scratch_len()];
        self.backend.forward(buf, &mut scratch);
    }

    /// In-place inverse transform scaled by `1/n`.
    pub fn inverse(&self, buf: &mut [Complex<T>]) {
        let mut scratch = vec![Complex::new(T::zero(), T::zero()); self.backend.scratch_len()];
        self.backend.inverse(buf, &mut scratch);
        let scale = T::one() / T::from_count(buf.len());
        for z in buf {
            *z = z.scale(scale);
        }
    }
}
