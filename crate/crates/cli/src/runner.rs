//! Scenario execution and artifact output.

use std::fs;
use std::io;
use std::path::PathBuf;

use ds2::diagnostics::{self, DetectorConfig, RunStatus, TimeSeries};
use ds2::dsii::{DsParams, DsSolver, EvolveOptions};
use ds2::fourier::{BackendKind, Fft2d, Layout, SlabField, Space};
use ds2::grid::make_grid;
use ds2::nls1d::{Field1D, NlsSolver};
use ds2::solutions::{self, Base, InitialData, Modifier};
use ds2::{Complex, GridSpec64, SlabField64};

use crate::config::{manifest, RunConfig};
use crate::snapshot;

/// How the run ended, for the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Completed,
    OverflowHalt,
}

#[derive(Debug)]
pub enum RunError {
    Solver(ds2::Error),
    Io(io::Error),
}

impl From<ds2::Error> for RunError {
    fn from(e: ds2::Error) -> Self {
        RunError::Solver(e)
    }
}

impl From<io::Error> for RunError {
    fn from(e: io::Error) -> Self {
        RunError::Io(e)
    }
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Solver(e) => write!(f, "{e}"),
            RunError::Io(e) => write!(f, "i/o failure: {e}"),
        }
    }
}

/// Step indices (multiples of the global dt) at which snapshots fall.
fn snapshot_steps(cfg: &RunConfig) -> Vec<usize> {
    let dt = (cfg.t_end - cfg.t_start) / cfg.nt as f64;
    let mut steps: Vec<usize> = cfg
        .snapshots
        .iter()
        .map(|&t| (((t - cfg.t_start) / dt).round() as usize).min(cfg.nt))
        .collect();
    steps.sort_unstable();
    steps.dedup();
    steps
}

fn merge_series(into: &mut TimeSeries<f64>, part: &TimeSeries<f64>, skip_first: bool) {
    for s in part.samples().iter().skip(usize::from(skip_first)) {
        into.push(s.t, s.max_sq_amp, s.l2_norm, s.energy);
    }
    if let RunStatus::OverflowHalt(t) = part.status() {
        into.set_status(RunStatus::OverflowHalt(t));
    }
}

struct SnapshotSink<'a> {
    dir: PathBuf,
    key: &'a str,
    count: usize,
}

impl SnapshotSink<'_> {
    fn next_stem(&mut self, t: f64) -> String {
        let stem = format!("snap-{:03}-t{:+.6}", self.count, t);
        self.count += 1;
        stem
    }

    /// Write the complex field plus derived |u|² and spectrum-modulus
    /// companions, and the sidecar.
    fn write(&mut self, u: &SlabField64, spectrum: &SlabField64, t: f64) -> io::Result<()> {
        let stem = self.next_stem(t);
        snapshot::write_field(&self.dir.join(format!("{stem}.dsfld")), u)?;
        let amp2 = derived(u, |z| Complex::new(z.norm_sqr(), 0.0));
        snapshot::write_field(&self.dir.join(format!("{stem}.amp2.dsfld")), &amp2)?;
        let spec_mod = derived(spectrum, |z| Complex::new(z.norm(), 0.0));
        snapshot::write_field(&self.dir.join(format!("{stem}.spec.dsfld")), &spec_mod)?;
        snapshot::write_sidecar(&self.dir.join(format!("{stem}.txt")), t, self.key)
    }
}

fn derived(u: &SlabField64, f: impl Fn(&Complex<f64>) -> Complex<f64>) -> SlabField64 {
    SlabField::from_parts(
        *u.grid(),
        u.data().iter().map(f).collect(),
        Layout::XContiguous,
        Space::Physical,
    )
    .expect("derived field matches its source grid")
}

pub fn run_scenario(cfg: &RunConfig) -> Result<Outcome, RunError> {
    fs::create_dir_all(&cfg.out_dir)?;
    fs::write(cfg.out_dir.join("manifest.toml"), manifest(cfg))?;

    let grid: GridSpec64 = make_grid(cfg.nx, cfg.ny, cfg.lx, cfg.ly)?;
    let initial = solutions::build_initial(&cfg.scenario, grid)?;

    let (series, report_extras) = match initial {
        InitialData::Plane(u0) => run_2d(cfg, grid, u0)?,
        InitialData::Line(u0) => run_1d(cfg, grid, u0)?,
    };

    let mut csv = Vec::new();
    series.write_csv(&mut csv)?;
    fs::write(cfg.out_dir.join("timeseries.csv"), csv)?;

    let detector = DetectorConfig {
        jump_abs: cfg.jump_abs,
        jump_rel: cfg.jump_rel,
    };
    let mut report = String::new();
    match diagnostics::detect_blowup(&series, detector) {
        Ok(r) => report.push_str(&r.to_key_values()),
        Err(e) => report.push_str(&format!("detector=unavailable ({e})\n")),
    }
    report.push_str(&report_extras);
    fs::write(cfg.out_dir.join("report.txt"), report)?;

    Ok(match series.status() {
        RunStatus::Completed => Outcome::Completed,
        RunStatus::OverflowHalt(_) => Outcome::OverflowHalt,
    })
}

fn run_2d(
    cfg: &RunConfig,
    grid: GridSpec64,
    u0: SlabField64,
) -> Result<(TimeSeries<f64>, String), RunError> {
    let engine = Fft2d::new(grid, cfg.workers, BackendKind::RustFft)?;
    let (sung, _) = diagnostics::sung_product(&engine, &u0)?;
    let solver = DsSolver::new(engine, DsParams::default());
    let opts = EvolveOptions {
        cadence: cfg.cadence,
    };
    let dt = (cfg.t_end - cfg.t_start) / cfg.nt as f64;
    let mut sink = SnapshotSink {
        dir: cfg.out_dir.clone(),
        key: &cfg.key,
        count: 0,
    };

    let mut series = TimeSeries::new();
    let mut u = u0;
    let mut step = 0usize;
    for target in snapshot_steps(cfg) {
        if target > step && !matches!(series.status(), RunStatus::OverflowHalt(_)) {
            let t0 = cfg.t_start + step as f64 * dt;
            let t1 = cfg.t_start + target as f64 * dt;
            let (v, part) = solver.evolve(u, t0, t1, target - step, opts)?;
            u = v;
            merge_series(&mut series, &part, step > 0);
            step = target;
        }
        let t = cfg.t_start + step as f64 * dt;
        let spectrum = solver
            .engine()
            .transpose(solver.engine().forward(u.clone())?);
        sink.write(&u, &spectrum, t)?;
    }
    if step < cfg.nt && !matches!(series.status(), RunStatus::OverflowHalt(_)) {
        let t0 = cfg.t_start + step as f64 * dt;
        let (v, part) = solver.evolve(u, t0, cfg.t_end, cfg.nt - step, opts)?;
        u = v;
        merge_series(&mut series, &part, step > 0);
    }

    let mut extras = format!("sung_product={sung:e}\n");
    if u.all_finite() {
        let tail = diagnostics::spectral_tail(solver.engine(), &u)?;
        extras.push_str(&format!("spectral_tail={tail:e}\n"));
        if let Some(err) = exact_solution_error(cfg, grid, &u) {
            extras.push_str(&format!("exact_l2_error={err:e}\n"));
        }
    }
    Ok((series, extras))
}

/// Relative L2 error against the exact solution at the final time, for
/// unperturbed exact-solution scenarios only.
fn exact_solution_error(cfg: &RunConfig, grid: GridSpec64, u: &SlabField64) -> Option<f64> {
    if cfg.scenario.modifier != Modifier::None {
        return None;
    }
    let exact = match cfg.scenario.base {
        Base::Lump(p) => solutions::lump_at(grid, p, cfg.t_end),
        Base::Ozawa(p) => solutions::ozawa_at(grid, p, cfg.t_end).ok()?,
        Base::QuinticGaussian => return None,
    };
    let mut diff = 0.0f64;
    let mut norm = 0.0f64;
    for (a, b) in u.data().iter().zip(exact.data()) {
        diff += (a - b).norm_sqr();
        norm += b.norm_sqr();
    }
    Some((diff / norm).sqrt())
}

fn run_1d(
    cfg: &RunConfig,
    grid: GridSpec64,
    u0: Field1D<f64>,
) -> Result<(TimeSeries<f64>, String), RunError> {
    let solver = NlsSolver::new(grid, BackendKind::RustFft)?;
    let dt = (cfg.t_end - cfg.t_start) / cfg.nt as f64;
    let mut sink = SnapshotSink {
        dir: cfg.out_dir.clone(),
        key: &cfg.key,
        count: 0,
    };

    let mut series = TimeSeries::new();
    let mut u = u0;
    let mut step = 0usize;
    for target in snapshot_steps(cfg) {
        if target > step && !matches!(series.status(), RunStatus::OverflowHalt(_)) {
            let t0 = cfg.t_start + step as f64 * dt;
            let t1 = cfg.t_start + target as f64 * dt;
            let (v, part) = solver.evolve(u, t0, t1, target - step, cfg.cadence)?;
            u = v;
            merge_series(&mut series, &part, step > 0);
            step = target;
        }
        let t = cfg.t_start + step as f64 * dt;
        let plane = line_as_plane(grid, &u);
        let mut spec_data = u.data().to_vec();
        solver.fft().forward(&mut spec_data);
        let spectrum =
            SlabField::from_parts(grid, spec_data, Layout::XContiguous, Space::Physical)
                .expect("1d spectrum matches its grid");
        sink.write(&plane, &spectrum, t)?;
    }
    if step < cfg.nt && !matches!(series.status(), RunStatus::OverflowHalt(_)) {
        let t0 = cfg.t_start + step as f64 * dt;
        let (v, part) = solver.evolve(u, t0, cfg.t_end, cfg.nt - step, cfg.cadence)?;
        u = v;
        merge_series(&mut series, &part, step > 0);
    }

    let mut extras = String::new();
    if u.all_finite() {
        let tail = diagnostics::spectral_tail_1d(solver.fft(), &u);
        extras.push_str(&format!("spectral_tail={tail:e}\n"));
    }
    Ok((series, extras))
}

fn line_as_plane(grid: GridSpec64, u: &Field1D<f64>) -> SlabField64 {
    SlabField::from_parts(
        grid,
        u.data().to_vec(),
        Layout::XContiguous,
        Space::Physical,
    )
    .expect("1d field matches its grid")
}
