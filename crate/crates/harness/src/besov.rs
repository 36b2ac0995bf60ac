//! Besov norms of snapshot fields.

use std::path::Path;

use bsq_core::diagnostics::combined_quantity;
use bsq_core::harmonic::{besov_breakdown, combine_terms, BesovIndex, DyadicBank};
use bsq_core::snapshot::Snapshot;
use bsq_core::solver::FlowState;
use bsq_core::spectral::SpectralField;
use serde::Serialize;

use crate::error::{HarnessError, Result};

#[derive(Clone, Debug, Serialize)]
pub struct BesovReport {
    pub field: String,
    pub s: f64,
    pub p: f64,
    pub r: f64,
    pub norm: f64,
    /// `(j, 2^{js} ||Delta_j f||_{L^p})`
    pub blocks: Vec<(i32, f64)>,
}

impl BesovReport {
    pub fn render(&self) -> String {
        let mut out = format!(
            "||{}||_B^{}_{{{},{}}} = {:.16e}\n",
            self.field, self.s, self.p, self.r, self.norm
        );
        for (j, v) in &self.blocks {
            out.push_str(&format!("{j:>3} {v:.16e}\n"));
        }
        out
    }
}

fn pick(snap: &Snapshot, field: &str) -> Result<SpectralField> {
    let get = |name: &str| {
        snap.field(name)
            .cloned()
            .ok_or_else(|| HarnessError::Invalid(format!("field `{name}` not present in snapshot")))
    };
    match field {
        "omega" | "theta" => get(field),
        "G" => {
            let state = FlowState::new(get("omega")?, get("theta")?, snap.header.t)?;
            Ok(combined_quantity(&state, snap.header.beta)?)
        }
        other => Err(HarnessError::Invalid(format!(
            "field `{other}`: expected omega, theta or G"
        ))),
    }
}

pub fn besov_of_snapshot(path: &Path, field: &str, s: f64, p: f64, r: f64) -> Result<BesovReport> {
    let idx = BesovIndex::new(s, p, r)?;
    let snap = Snapshot::read(path).map_err(|e| HarnessError::Invalid(format!("{}: {e}", path.display())))?;
    let f = pick(&snap, field)?;
    let bank = DyadicBank::new(f.grid())?;
    let blocks = besov_breakdown(&f, idx, &bank)?;
    Ok(BesovReport {
        field: field.into(),
        s,
        p,
        r,
        norm: combine_terms(&blocks, r),
        blocks,
    })
}
