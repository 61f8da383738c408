//! Little-endian binary snapshots: magic `MPF1`, version, `dim`, `N`, `n`
//! (all `u32`), weights, masses, then the densities and the velocity
//! components as `f64` in row-major node order.

use std::io::{Read, Write};
use std::path::Path;

use crate::dynamics::FlowState;
use crate::error::{Error, Result};
use crate::spectral::{Grid, ScalarField, VectorField};
use crate::state::{MultiDensity, MultiVelocity, QuadratureSet, WeightMode};

pub const MAGIC: &[u8; 4] = b"MPF1";
pub const VERSION: u32 = 1;

pub fn encode_snapshot(state: &FlowState) -> Vec<u8> {
    let g = state.grid();
    let n = state.phases();
    let mut out = Vec::with_capacity(16 + 8 * (2 * n + n * (1 + g.dim()) * g.len()));
    out.extend_from_slice(MAGIC);
    for v in [VERSION, g.dim() as u32, g.n() as u32, n as u32] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    let quad = state.rho.quad();
    let fields = state
        .rho
        .rho()
        .iter()
        .chain(state.u.fields().iter().flat_map(|u| u.components()));
    for v in quad
        .weights()
        .iter()
        .chain(quad.masses())
        .chain(fields.flat_map(|f| f.values()))
    {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn take(&mut self, k: usize) -> std::result::Result<&[u8], String> {
        let end = self.pos + k;
        if end > self.bytes.len() {
            return Err(format!("truncated at byte {} (need {k} more)", self.pos));
        }
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> std::result::Result<u32, String> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    fn f64s(&mut self, k: usize) -> std::result::Result<Vec<f64>, String> {
        let raw = self.take(8 * k)?;
        Ok(raw
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
            .collect())
    }
}

/// Labels are not stored; trapezoid weights get their nodes on `[0, 1]`,
/// anything else gets `0, 1, ..., n-1`.
fn infer_labels(weights: &[f64]) -> Vec<f64> {
    let n = weights.len();
    match WeightMode::Trapezoid.weights(n) {
        Ok(w) if w.iter().zip(weights).all(|(a, b)| a.to_bits() == b.to_bits()) => WeightMode::Trapezoid.labels(n),
        _ => WeightMode::Unit.labels(n),
    }
}

/// Decodes a snapshot. The time is not stored and reads as 0; the pressure
/// is recomputed.
pub fn decode_snapshot(bytes: &[u8]) -> std::result::Result<FlowState, String> {
    let mut r = Reader { bytes, pos: 0 };
    if r.take(4)? != MAGIC {
        return Err("bad magic (expected MPF1)".into());
    }
    let version = r.u32()?;
    if version != VERSION {
        return Err(format!("unsupported version {version} (expected {VERSION})"));
    }
    let (dim, n, phases) = (r.u32()? as usize, r.u32()? as usize, r.u32()? as usize);
    let grid = Grid::new(dim, n).map_err(|e| e.to_string())?;
    if phases == 0 {
        return Err("zero phases".into());
    }
    let weights = r.f64s(phases)?;
    let masses = r.f64s(phases)?;
    let mut field = || -> std::result::Result<ScalarField, String> {
        ScalarField::from_values(grid, r.f64s(grid.len())?).map_err(|e| e.to_string())
    };
    let rho = (0..phases)
        .map(|_| field())
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let u = (0..phases)
        .map(|_| {
            let comps = (0..dim).map(|_| field()).collect::<std::result::Result<Vec<_>, _>>()?;
            VectorField::from_components(comps).map_err(|e| e.to_string())
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    if r.pos != bytes.len() {
        return Err(format!("{} trailing bytes", bytes.len() - r.pos));
    }
    let labels = infer_labels(&weights);
    let quad = QuadratureSet::new(labels, weights, masses).map_err(|e| e.to_string())?;
    let rho = MultiDensity::new(quad.clone(), rho).map_err(|e| e.to_string())?;
    let u = MultiVelocity::new(quad, u).map_err(|e| e.to_string())?;
    FlowState::new(rho, u).map_err(|e| e.to_string())
}

pub fn write_snapshot(state: &FlowState, path: impl AsRef<Path>) -> Result<()> {
    let mut f = std::fs::File::create(path.as_ref())?;
    f.write_all(&encode_snapshot(state))?;
    Ok(())
}

pub fn read_snapshot(path: impl AsRef<Path>) -> Result<FlowState> {
    let path = path.as_ref();
    let mut bytes = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut bytes)?;
    decode_snapshot(&bytes).map_err(|reason| Error::Snapshot {
        path: path.to_path_buf(),
        reason,
    })
}
