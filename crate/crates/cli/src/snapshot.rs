//! Binary field snapshot format.
//!
//! Layout (all little-endian):
//!
//! ```text
//! offset  size  field
//! 0       6     magic "DSFLD\0"
//! 6       2     version (u16, currently 1)
//! 8       4     nx (u32)
//! 12      4     ny (u32)
//! 16      8     lx (f64)
//! 24      8     ly (f64)
//! 32      ...   nx*ny complex samples, row-major global order,
//!               each (f64 re, f64 im)
//! ```
//!
//! A plain-text sidecar (same path + ".txt") records the sample time
//! and scenario key.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;

use ds2::fourier::{Layout, SlabField, Space};
use ds2::grid::make_grid;
use ds2::{Complex, GridSpec64, SlabField64};

pub const MAGIC: &[u8; 6] = b"DSFLD\0";
pub const VERSION: u16 = 1;

pub fn write_field(path: &Path, u: &SlabField64) -> io::Result<()> {
    let grid = u.grid();
    if u.layout() != Layout::XContiguous {
        return Err(io::Error::new(
            io::ErrorKind::InvalidInput,
            "snapshots are written from the XContiguous layout",
        ));
    }
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&(grid.nx() as u32).to_le_bytes())?;
    w.write_all(&(grid.ny() as u32).to_le_bytes())?;
    w.write_all(&grid.lx().to_le_bytes())?;
    w.write_all(&grid.ly().to_le_bytes())?;
    for z in u.data() {
        w.write_all(&z.re.to_le_bytes())?;
        w.write_all(&z.im.to_le_bytes())?;
    }
    w.flush()
}

pub fn write_sidecar(path: &Path, t: f64, scenario_key: &str) -> io::Result<()> {
    let mut w = File::create(path)?;
    writeln!(w, "t={t:e}\nscenario={scenario_key}")
}

fn bad_data(msg: &str) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, msg.to_string())
}

pub fn read_field(path: &Path) -> io::Result<SlabField64> {
    let mut r = BufReader::new(File::open(path)?);
    let mut header = [0u8; 32];
    r.read_exact(&mut header)?;
    if &header[0..6] != MAGIC {
        return Err(bad_data("not a DSFLD file"));
    }
    let version = u16::from_le_bytes(header[6..8].try_into().unwrap());
    if version != VERSION {
        return Err(bad_data("unsupported DSFLD version"));
    }
    let nx = u32::from_le_bytes(header[8..12].try_into().unwrap()) as usize;
    let ny = u32::from_le_bytes(header[12..16].try_into().unwrap()) as usize;
    let lx = f64::from_le_bytes(header[16..24].try_into().unwrap());
    let ly = f64::from_le_bytes(header[24..32].try_into().unwrap());
    let grid: GridSpec64 =
        make_grid(nx, ny, lx, ly).map_err(|e| bad_data(&e.to_string()))?;
    let mut data = Vec::with_capacity(grid.len());
    let mut buf = [0u8; 16];
    for _ in 0..grid.len() {
        r.read_exact(&mut buf)?;
        data.push(Complex::new(
            f64::from_le_bytes(buf[0..8].try_into().unwrap()),
            f64::from_le_bytes(buf[8..16].try_into().unwrap()),
        ));
    }
    SlabField::from_parts(grid, data, Layout::XContiguous, Space::Physical)
        .map_err(|e| bad_data(&e.to_string()))
}
