//! Slab-engine correctness: brute-force DFT oracle, worker-count
//! independence, transpose involution, Parseval.

use ds2::fourier::{BackendKind, Fft2d, Layout, SlabField, Space};
use ds2::grid::make_grid;
use ds2::Complex;
use rand::{Rng, SeedableRng};

fn random_field(nx: usize, ny: usize, lx: f64, ly: f64, seed: u64) -> SlabField<f64> {
    let grid = make_grid(nx, ny, lx, ly).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let data = (0..grid.len())
        .map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    SlabField::from_parts(grid, data, Layout::XContiguous, Space::Physical).unwrap()
}

/// O(n^4) reference: X[kx,ky] = sum_{x,y} u[x,y] e^{-2pi i (kx x/nx + ky y/ny)}
fn brute_force_dft(u: &SlabField<f64>) -> Vec<Complex<f64>> {
    let nx = u.grid().nx();
    let ny = u.grid().ny();
    let mut out = vec![Complex::new(0.0, 0.0); nx * ny];
    for ky in 0..ny {
        for kx in 0..nx {
            let mut acc = Complex::new(0.0, 0.0);
            for iy in 0..ny {
                for ix in 0..nx {
                    let angle = -2.0
                        * std::f64::consts::PI
                        * ((kx * ix) as f64 / nx as f64 + (ky * iy) as f64 / ny as f64);
                    acc += u.get(ix, iy) * Complex::new(angle.cos(), angle.sin());
                }
            }
            out[ky * nx + kx] = acc;
        }
    }
    out
}

#[test]
fn forward_matches_brute_force_oracle_at_64sq() {
    let u = random_field(64, 64, 2.0, 3.0, 1);
    let engine = Fft2d::new(*u.grid(), 1, BackendKind::RustFft).unwrap();
    let uh = engine.forward(u.clone()).unwrap();
    let want = brute_force_dft(&u);
    let scale: f64 = want.iter().map(|z| z.norm()).fold(0.0, f64::max);
    for ky in 0..64 {
        for kx in 0..64 {
            let got = uh.get(kx, ky);
            let diff = (got - want[ky * 64 + kx]).norm();
            assert!(
                diff / scale <= 1e-12,
                "mode ({kx},{ky}): rel err {}",
                diff / scale
            );
        }
    }
}

#[test]
fn worker_counts_agree() {
    let u = random_field(64, 64, 1.0, 1.0, 2);
    let reference = {
        let engine = Fft2d::new(*u.grid(), 1, BackendKind::RustFft).unwrap();
        engine.forward(u.clone()).unwrap()
    };
    let scale: f64 = reference.data().iter().map(|z| z.norm()).fold(0.0, f64::max);
    for p in [2usize, 4, 8] {
        let engine = Fft2d::new(*u.grid(), p, BackendKind::RustFft).unwrap();
        let uh = engine.forward(u.clone()).unwrap();
        for (a, b) in uh.data().iter().zip(reference.data()) {
            assert!((a - b).norm() / scale <= 1e-12, "p={p} disagrees");
        }
    }
}

#[test]
fn worker_counts_agree_radix2_bitwise() {
    // the in-tree kernel runs the same instruction sequence per row
    // regardless of which thread owns it
    let u = random_field(32, 64, 1.0, 1.0, 3);
    let reference = {
        let engine = Fft2d::new(*u.grid(), 1, BackendKind::Radix2).unwrap();
        engine.forward(u.clone()).unwrap()
    };
    for p in [2usize, 4, 8] {
        let engine = Fft2d::new(*u.grid(), p, BackendKind::Radix2).unwrap();
        let uh = engine.forward(u.clone()).unwrap();
        assert_eq!(uh.data(), reference.data(), "p={p}");
    }
}

#[test]
fn transpose_involution_is_bitwise_exact() {
    for p in [1usize, 2, 4] {
        let u = random_field(64, 32, 1.0, 1.0, 4);
        let engine = Fft2d::new(*u.grid(), p, BackendKind::RustFft).unwrap();
        let back = engine.transpose(engine.transpose(u.clone()));
        assert_eq!(back.data(), u.data());
        assert_eq!(back.layout(), u.layout());
    }
}

#[test]
fn round_trip_is_identity_to_rounding() {
    let u = random_field(128, 64, 3.0, 7.0, 5);
    let engine = Fft2d::new(*u.grid(), 4, BackendKind::RustFft).unwrap();
    let back = engine.inverse(engine.forward(u.clone()).unwrap()).unwrap();
    for (a, b) in back.data().iter().zip(u.data()) {
        assert!((a - b).norm() <= 1e-13);
    }
}

#[test]
fn parseval_identity() {
    // sum |u|^2 = sum |û|^2 / (nx*ny) for the unscaled forward transform
    let u = random_field(64, 64, 1.0, 1.0, 6);
    let engine = Fft2d::new(*u.grid(), 2, BackendKind::RustFft).unwrap();
    let phys: f64 = u.data().iter().map(|z| z.norm_sqr()).sum();
    let uh = engine.forward(u.clone()).unwrap();
    let spec: f64 = uh.data().iter().map(|z| z.norm_sqr()).sum::<f64>() / (64.0 * 64.0);
    assert!((phys - spec).abs() / phys <= 1e-13);
}

#[test]
fn multiplier_routes_agree_across_layouts() {
    // applying m(kx,ky) via the closure path equals the cached-table path
    let u = random_field(32, 32, 2.0, 2.0, 7);
    let engine = Fft2d::new(*u.grid(), 2, BackendKind::RustFft).unwrap();
    let m = |kx: f64, ky: f64| Complex::new(0.0, -(kx * kx - ky * ky)).exp();

    let mut a = engine.forward(u.clone()).unwrap();
    engine.apply_multiplier(&mut a, m).unwrap();

    let mut b = engine.forward(u.clone()).unwrap();
    let table = engine.symbol_table(Layout::Transposed, m);
    engine.apply_table(&mut b, &table).unwrap();
    assert_eq!(a.data(), b.data());

    // and in the XContiguous layout after a transpose
    let mut c = engine.transpose(engine.forward(u).unwrap());
    engine.apply_multiplier(&mut c, m).unwrap();
    for kx in 0..32 {
        for ky in 0..32 {
            assert_eq!(a.get(kx, ky), c.get(kx, ky));
        }
    }
}

#[test]
fn spectrum_of_single_mode_is_a_delta() {
    let grid = make_grid(64usize, 64, 2.0, 2.0).unwrap();
    // u = e^{i(3x/lx - 5y/ly)} -> spike at mode (3, -5)
    let u = SlabField::from_fn(grid, |x, y| {
        Complex::new(0.0, 3.0 * x / 2.0 - 5.0 * y / 2.0).exp()
    });
    let engine = Fft2d::new(grid, 1, BackendKind::RustFft).unwrap();
    let uh = engine.forward(u).unwrap();
    let n = grid.len() as f64;
    for ix in 0..64 {
        for iy in 0..64 {
            let a = uh.get(ix, iy).norm() / n;
            if ix == 3 && iy == 64 - 5 {
                assert!((a - 1.0).abs() <= 1e-12, "peak magnitude {a}");
            } else {
                assert!(a <= 1e-12, "leakage at ({ix},{iy}): {a}");
            }
        }
    }
}

#[test]
fn rejects_mismatched_worker_count() {
    let grid = make_grid(64usize, 64, 1.0, 1.0).unwrap();
    assert!(Fft2d::<f64>::new(grid, 3, BackendKind::RustFft).is_err());
}

#[test]
fn rejects_wrong_layout_inputs() {
    let u = random_field(16, 16, 1.0, 1.0, 8);
    let engine = Fft2d::new(*u.grid(), 1, BackendKind::RustFft).unwrap();
    let uh = engine.forward(u.clone()).unwrap();
    assert!(engine.forward(uh.clone()).is_err());
    assert!(engine.inverse(u).is_err());
    let mut phys = engine.inverse(uh).unwrap();
    assert!(engine
        .apply_multiplier(&mut phys, |_, _| Complex::new(1.0, 0.0))
        .is_err());
}
