//! `.bsq` snapshot files.
//!
//! Layout: one line of JSON (`{"N":..,"alpha":..,"beta":..,"nu":..,"kappa":..,
//! "t":..,"field_order":["omega","theta"]}`) terminated by `\n`, followed by
//! one block per entry of `field_order`, each `N*N` little-endian `f64`
//! physical values in row-major order (row index along x2).

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{Grid, SpectralField};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SnapshotHeader {
    #[serde(rename = "N")]
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    pub nu: f64,
    pub kappa: f64,
    pub t: f64,
    pub field_order: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct Snapshot {
    pub header: SnapshotHeader,
    pub fields: Vec<SpectralField>,
}

impl Snapshot {
    pub fn field(&self, name: &str) -> Option<&SpectralField> {
        self.header
            .field_order
            .iter()
            .position(|f| f == name)
            .map(|i| &self.fields[i])
    }

    pub fn grid(&self) -> Result<Arc<Grid>> {
        Grid::new(self.header.n)
    }

    pub fn encode(&self) -> Result<Vec<u8>> {
        if self.fields.len() != self.header.field_order.len() {
            return Err(Error::Snapshot(format!(
                "{} fields for {} names",
                self.fields.len(),
                self.header.field_order.len()
            )));
        }
        let mut out = serde_json::to_vec(&self.header)?;
        out.push(b'\n');
        for f in &self.fields {
            if f.n() != self.header.n {
                return Err(Error::GridMismatch(self.header.n, f.n()));
            }
            for v in f.to_physical() {
                out.extend_from_slice(&v.to_le_bytes());
            }
        }
        Ok(out)
    }

    pub fn decode(mut reader: impl BufRead) -> Result<Snapshot> {
        let mut line = String::new();
        reader.read_line(&mut line)?;
        if !line.ends_with('\n') {
            return Err(Error::Snapshot("missing header line".into()));
        }
        let header: SnapshotHeader = serde_json::from_str(line.trim_end())?;
        let grid = Grid::new(header.n)?;
        let mut fields = Vec::with_capacity(header.field_order.len());
        let mut buf = vec![0u8; header.n * header.n * 8];
        for name in &header.field_order {
            reader
                .read_exact(&mut buf)
                .map_err(|e| Error::Snapshot(format!("field `{name}` truncated: {e}")))?;
            let values: Vec<f64> = buf
                .chunks_exact(8)
                .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
                .collect();
            fields.push(SpectralField::from_physical(&grid, &values)?);
        }
        let mut rest = Vec::new();
        reader.read_to_end(&mut rest)?;
        if !rest.is_empty() {
            return Err(Error::Snapshot(format!("{} trailing bytes", rest.len())));
        }
        Ok(Snapshot { header, fields })
    }

    /// Writes through a temporary sibling and renames it into place.
    pub fn write(&self, path: &Path) -> Result<()> {
        let bytes = self.encode()?;
        let tmp = path.with_extension("bsq.tmp");
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(&bytes)?;
            f.sync_all()?;
        }
        fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Snapshot> {
        let f = fs::File::open(path)?;
        Snapshot::decode(BufReader::new(f))
    }
}
