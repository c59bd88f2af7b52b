//! Run configuration: preset defaults, optional TOML file, CLI flags.
//!
//! Precedence (lowest to highest): preset catalog defaults, config
//! file, command-line flags. The fully resolved configuration is
//! echoed to `manifest.toml` in the output directory so a run is
//! reproducible from its artifacts alone.

use std::path::PathBuf;

use ds2::solutions::{self, Base, LumpParams, Modifier, OzawaParams, Scenario};
use serde::Deserialize;

/// Optional overrides from a TOML config file. Every field may be
/// omitted; present fields overlay the preset and are themselves
/// overridden by flags.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub scenario: Option<String>,
    pub inline_scenario: Option<InlineScenario>,
    pub nx: Option<usize>,
    pub ny: Option<usize>,
    pub lx: Option<f64>,
    pub ly: Option<f64>,
    pub nt: Option<usize>,
    pub t_start: Option<f64>,
    pub t_end: Option<f64>,
    pub workers: Option<usize>,
    pub cadence: Option<usize>,
    pub out_dir: Option<PathBuf>,
    pub snapshots: Option<Vec<f64>>,
    pub jump_abs: Option<f64>,
    pub jump_rel: Option<f64>,
}

/// A scenario spelled out in the config file instead of named by key.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InlineScenario {
    /// "lump", "ozawa" or "quintic".
    pub base: String,
    /// "none", "scale", "gauss" or "deform".
    #[serde(default = "default_modifier")]
    pub modifier: String,
    pub factor: Option<f64>,
    pub t_start: Option<f64>,
    // lump parameters
    pub xi: Option<f64>,
    pub eta: Option<f64>,
    pub z0_re: Option<f64>,
    pub z0_im: Option<f64>,
    pub c_re: Option<f64>,
    pub c_im: Option<f64>,
    // Ozawa parameters
    pub a: Option<f64>,
    pub b: Option<f64>,
}

fn default_modifier() -> String {
    "none".to_string()
}

/// Fully resolved run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Scenario key (or "inline").
    pub key: String,
    pub scenario: Scenario<f64>,
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub ly: f64,
    pub nt: usize,
    pub t_start: f64,
    pub t_end: f64,
    pub workers: usize,
    pub cadence: usize,
    pub out_dir: PathBuf,
    pub snapshots: Vec<f64>,
    pub jump_abs: f64,
    pub jump_rel: f64,
}

/// CLI-level overrides (already parsed by clap).
#[derive(Debug, Clone, Default)]
pub struct FlagOverrides {
    pub scenario: Option<String>,
    pub nx: Option<usize>,
    pub ny: Option<usize>,
    pub lx: Option<f64>,
    pub ly: Option<f64>,
    pub nt: Option<usize>,
    pub t_start: Option<f64>,
    pub t_end: Option<f64>,
    pub workers: Option<usize>,
    pub cadence: Option<usize>,
    pub out_dir: Option<PathBuf>,
    pub snapshots: Vec<f64>,
    pub jump_abs: Option<f64>,
    pub jump_rel: Option<f64>,
}

#[derive(Debug)]
pub enum ConfigError {
    /// Invalid flag/field combination; maps to the usage exit code.
    Usage(String),
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConfigError::Usage(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for ConfigError {}

fn usage<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError::Usage(msg.into()))
}

fn parse_inline(inline: &InlineScenario) -> Result<Scenario<f64>, ConfigError> {
    let modifier = match inline.modifier.as_str() {
        "none" => Modifier::None,
        "scale" | "gauss" | "deform" => {
            let Some(f) = inline.factor else {
                return usage("inline scenario modifier requires a `factor` value");
            };
            match inline.modifier.as_str() {
                "scale" => Modifier::Scale(f),
                "gauss" => Modifier::AddGaussian(f),
                _ => Modifier::DeformY(f),
            }
        }
        other => return usage(format!("unknown modifier '{other}'")),
    };
    let (base, default_t0) = match inline.base.as_str() {
        "lump" => {
            let d = LumpParams::<f64>::default();
            let p = LumpParams {
                c: ds2::Complex::new(inline.c_re.unwrap_or(d.c.re), inline.c_im.unwrap_or(d.c.im)),
                z0: ds2::Complex::new(
                    inline.z0_re.unwrap_or(d.z0.re),
                    inline.z0_im.unwrap_or(d.z0.im),
                ),
                xi: inline.xi.unwrap_or(d.xi),
                eta: inline.eta.unwrap_or(d.eta),
            };
            (Base::Lump(p), -6.0)
        }
        "ozawa" => {
            let d = OzawaParams::<f64>::default();
            let p = OzawaParams {
                a: inline.a.unwrap_or(d.a),
                b: inline.b.unwrap_or(d.b),
            };
            (Base::Ozawa(p), 0.0)
        }
        "quintic" => (Base::QuinticGaussian, 0.0),
        other => return usage(format!("unknown scenario base '{other}'")),
    };
    Ok(Scenario {
        base,
        modifier,
        t_start: inline.t_start.unwrap_or(default_t0),
    })
}

/// Merge preset defaults, file config and flags into a validated
/// [`RunConfig`].
pub fn resolve(file: FileConfig, flags: FlagOverrides) -> Result<RunConfig, ConfigError> {
    let key = flags
        .scenario
        .clone()
        .or_else(|| file.scenario.clone());

    let (key, mut cfg) = if let Some(key) = key {
        let preset = solutions::preset::<f64>(&key)
            .map_err(|e| ConfigError::Usage(e.to_string()))?;
        let cfg = RunConfig {
            key: key.clone(),
            scenario: preset.scenario,
            nx: preset.nx,
            ny: preset.ny,
            lx: preset.lx,
            ly: preset.ly,
            nt: preset.nt,
            t_start: preset.scenario.t_start,
            t_end: preset.t_end,
            workers: 1,
            cadence: preset.cadence,
            out_dir: PathBuf::from("out"),
            snapshots: Vec::new(),
            jump_abs: 1e-2,
            jump_rel: 1e3,
        };
        (key, cfg)
    } else if let Some(inline) = &file.inline_scenario {
        let scenario = parse_inline(inline)?;
        let is_1d = matches!(scenario.base, Base::QuinticGaussian);
        let cfg = RunConfig {
            key: "inline".to_string(),
            scenario,
            nx: if is_1d { 4096 } else { 1024 },
            ny: if is_1d { 1 } else { 1024 },
            lx: if is_1d { 5.0 } else { 20.0 },
            ly: if is_1d { 1.0 } else { 20.0 },
            // inline scenarios carry no preset run shape; nt must be
            // given explicitly (validated below)
            nt: 0,
            t_start: scenario.t_start,
            t_end: scenario.t_start + 0.3,
            workers: 1,
            cadence: 4,
            out_dir: PathBuf::from("out"),
            snapshots: Vec::new(),
            jump_abs: 1e-2,
            jump_rel: 1e3,
        };
        ("inline".to_string(), cfg)
    } else {
        return usage(
            "no scenario given; pass --scenario KEY (see `ds2 scenarios`) \
             or define one in the config file",
        );
    };
    cfg.key = key;

    // file overlays
    if let Some(v) = file.nx {
        cfg.nx = v;
    }
    if let Some(v) = file.ny {
        cfg.ny = v;
    }
    if let Some(v) = file.lx {
        cfg.lx = v;
    }
    if let Some(v) = file.ly {
        cfg.ly = v;
    }
    if let Some(v) = file.nt {
        cfg.nt = v;
    }
    if let Some(v) = file.t_start {
        cfg.t_start = v;
        cfg.scenario.t_start = v;
    }
    if let Some(v) = file.t_end {
        cfg.t_end = v;
    }
    if let Some(v) = file.workers {
        cfg.workers = v;
    }
    if let Some(v) = file.cadence {
        cfg.cadence = v;
    }
    if let Some(v) = file.out_dir {
        cfg.out_dir = v;
    }
    if let Some(v) = file.snapshots {
        cfg.snapshots = v;
    }
    if let Some(v) = file.jump_abs {
        cfg.jump_abs = v;
    }
    if let Some(v) = file.jump_rel {
        cfg.jump_rel = v;
    }

    // flag overlays
    if let Some(v) = flags.nx {
        cfg.nx = v;
    }
    if let Some(v) = flags.ny {
        cfg.ny = v;
    }
    if let Some(v) = flags.lx {
        cfg.lx = v;
    }
    if let Some(v) = flags.ly {
        cfg.ly = v;
    }
    if let Some(v) = flags.nt {
        cfg.nt = v;
    }
    if let Some(v) = flags.t_start {
        cfg.t_start = v;
        cfg.scenario.t_start = v;
    }
    if let Some(v) = flags.t_end {
        cfg.t_end = v;
    }
    if let Some(v) = flags.workers {
        cfg.workers = v;
    }
    if let Some(v) = flags.cadence {
        cfg.cadence = v;
    }
    if let Some(v) = flags.out_dir {
        cfg.out_dir = v;
    }
    if !flags.snapshots.is_empty() {
        cfg.snapshots = flags.snapshots;
    }
    if let Some(v) = flags.jump_abs {
        cfg.jump_abs = v;
    }
    if let Some(v) = flags.jump_rel {
        cfg.jump_rel = v;
    }

    validate(&cfg)?;
    Ok(cfg)
}

fn validate(cfg: &RunConfig) -> Result<(), ConfigError> {
    if cfg.nt == 0 {
        return usage("missing --nt (must be >= 1)");
    }
    if cfg.cadence == 0 {
        return usage("--cadence must be >= 1");
    }
    if !(cfg.t_end > cfg.t_start) {
        return usage(format!(
            "t_end ({}) must be greater than t_start ({})",
            cfg.t_end, cfg.t_start
        ));
    }
    if cfg.workers == 0 {
        return usage("--workers must be >= 1");
    }
    let needs_ny_split = cfg.ny > 1; // the 1d solver is single-worker
    if cfg.nx % cfg.workers != 0 || (needs_ny_split && cfg.ny % cfg.workers != 0) {
        return usage(format!(
            "worker count {} must divide nx={} and ny={}",
            cfg.workers, cfg.nx, cfg.ny
        ));
    }
    for &t in &cfg.snapshots {
        if t < cfg.t_start || t > cfg.t_end {
            return usage(format!(
                "snapshot time {t} lies outside [{}, {}]",
                cfg.t_start, cfg.t_end
            ));
        }
    }
    Ok(())
}

/// Render the resolved configuration as a TOML manifest.
pub fn manifest(cfg: &RunConfig) -> String {
    let (base, params) = match cfg.scenario.base {
        Base::Lump(p) => (
            "lump",
            format!(
                "xi = {}\neta = {}\nz0 = [{}, {}]\nc = [{}, {}]",
                p.xi, p.eta, p.z0.re, p.z0.im, p.c.re, p.c.im
            ),
        ),
        Base::Ozawa(p) => ("ozawa", format!("a = {}\nb = {}", p.a, p.b)),
        Base::QuinticGaussian => ("quintic", "amplitude = 1.8".to_string()),
    };
    let modifier = match cfg.scenario.modifier {
        Modifier::None => "modifier = \"none\"".to_string(),
        Modifier::Scale(f) => format!("modifier = \"scale\"\nfactor = {f}"),
        Modifier::AddGaussian(f) => format!("modifier = \"gauss\"\nfactor = {f}"),
        Modifier::DeformY(f) => format!("modifier = \"deform\"\nfactor = {f}"),
    };
    let snapshots = cfg
        .snapshots
        .iter()
        .map(|t| t.to_string())
        .collect::<Vec<_>>()
        .join(", ");
    format!(
        "scenario = \"{key}\"\nnx = {nx}\nny = {ny}\nlx = {lx}\nly = {ly}\n\
         nt = {nt}\nt_start = {t0}\nt_end = {t1}\nworkers = {p}\ncadence = {cad}\n\
         snapshots = [{snapshots}]\njump_abs = {ja}\njump_rel = {jr}\n\n\
         [scenario_detail]\nbase = \"{base}\"\n{modifier}\n{params}\n",
        key = cfg.key,
        nx = cfg.nx,
        ny = cfg.ny,
        lx = cfg.lx,
        ly = cfg.ly,
        nt = cfg.nt,
        t0 = cfg.t_start,
        t1 = cfg.t_end,
        p = cfg.workers,
        cad = cfg.cadence,
        ja = cfg.jump_abs,
        jr = cfg.jump_rel,
    )
}
