use serde::{Deserialize, Serialize};

use super::split::CommunitySubinstance;
use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::pubo::{parity_sign, MaskPoly};
use crate::solvers::CoreSolver;

/// Default cap on `|B_c|`: the table has `2^|B_c|` entries.
pub const DEFAULT_MAX_BOUNDARY: usize = 24;

/// Below this many (boundary x core) assignments a community is quenched on
/// the calling thread.
const PARALLEL_MIN_WORK: u64 = 1 << 14;

#[derive(Clone, Copy, Debug)]
pub struct QuenchConfig {
    pub max_boundary: usize,
    pub exec: Exec,
}

impl Default for QuenchConfig {
    fn default() -> Self {
        Self {
            max_boundary: DEFAULT_MAX_BOUNDARY,
            exec: Exec::Parallel,
        }
    }
}

/// Minimized intra-community energy for every boundary assignment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuenchTable {
    pub community: usize,
    pub num_boundary: usize,
    /// Indexed by local boundary mask.
    pub energies: Vec<f64>,
    /// Lowest core mask attaining each minimum.
    pub argmin_cores: Vec<u64>,
}

/// Intra polynomial separated into boundary-only terms and terms that touch
/// the core, ready to be conditioned on a boundary mask.
pub(crate) struct Conditioner {
    num_core: usize,
    fixed: Vec<(u64, f64)>,
    coupled: Vec<(u64, u64, f64)>,
}

impl Conditioner {
    pub(crate) fn new(sub: &CommunitySubinstance) -> Result<Self> {
        let local = sub.local_mask_poly()?;
        let nb = sub.num_boundary();
        let low = (1u64 << nb) - 1;
        let mut fixed = Vec::new();
        let mut coupled = Vec::new();
        for (&m, &c) in local.masks.iter().zip(&local.coeffs) {
            let core = m >> nb;
            if core == 0 {
                fixed.push((m, c));
            } else {
                coupled.push((m & low, core, c));
            }
        }
        Ok(Self {
            num_core: sub.num_core(),
            fixed,
            coupled,
        })
    }

    /// Minimum over cores with the boundary pinned to `mask`.
    pub(crate) fn solve(&self, mask: u64, solver: &dyn CoreSolver) -> Result<(f64, u64)> {
        let base: f64 = self
            .fixed
            .iter()
            .map(|&(m, c)| c * parity_sign(m & mask))
            .sum();
        if self.num_core == 0 {
            return Ok((base, 0));
        }
        let (masks, coeffs) = self
            .coupled
            .iter()
            .map(|&(b, core, c)| (core, c * parity_sign(b & mask)))
            .unzip();
        let core_poly = MaskPoly {
            num_vars: self.num_core,
            masks,
            coeffs,
        };
        let (e, core) = solver.minimize(&core_poly)?;
        Ok((base + e, core))
    }
}

/// Tabulate `min_core E_intra(boundary, core)` for all `2^|B_c|` boundary masks.
pub fn quench(
    sub: &CommunitySubinstance,
    solver: &dyn CoreSolver,
    cfg: &QuenchConfig,
) -> Result<QuenchTable> {
    let nb = sub.num_boundary();
    if nb > cfg.max_boundary {
        return Err(Error::Resource {
            what: format!("boundary size of community {}", sub.community),
            actual: nb,
            cap: cfg.max_boundary,
        });
    }
    let cond = Conditioner::new(sub)?;
    let d = 1usize << nb;
    let work = (d as u64).saturating_mul(1u64 << sub.num_core().min(40));
    let exec = if work >= PARALLEL_MIN_WORK { cfg.exec } else { Exec::Sequential };
    let rows = exec::map_range(exec, d, |m| cond.solve(m as u64, solver));
    let mut energies = Vec::with_capacity(d);
    let mut argmin_cores = Vec::with_capacity(d);
    for row in rows {
        let (e, core) = row?;
        energies.push(e);
        argmin_cores.push(core);
    }
    Ok(QuenchTable {
        community: sub.community,
        num_boundary: nb,
        energies,
        argmin_cores,
    })
}
