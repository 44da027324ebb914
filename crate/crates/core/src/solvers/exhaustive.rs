use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::pubo::{MaskPoly, PuboPolynomial, SpinAssignment};

/// Largest instance the exhaustive oracle will enumerate.
pub const MAX_EXHAUSTIVE_VARS: usize = 30;

/// log2 of the number of masks handled by one work item.
const CHUNK_BITS: usize = 12;

/// Exact minimizer over packed assignments, used for community cores and
/// whole subinstances.
pub trait CoreSolver: Sync {
    /// Minimum energy and the lowest mask attaining it.
    fn minimize(&self, poly: &MaskPoly) -> Result<(f64, u64)>;
}

#[derive(Clone, Copy, Debug)]
pub struct ExhaustiveSolver {
    pub max_vars: usize,
    pub exec: Exec,
}

impl Default for ExhaustiveSolver {
    fn default() -> Self {
        Self {
            max_vars: MAX_EXHAUSTIVE_VARS,
            exec: Exec::Sequential,
        }
    }
}

impl ExhaustiveSolver {
    pub fn with_exec(exec: Exec) -> Self {
        Self {
            exec,
            ..Self::default()
        }
    }
}

impl CoreSolver for ExhaustiveSolver {
    fn minimize(&self, poly: &MaskPoly) -> Result<(f64, u64)> {
        if poly.num_vars > self.max_vars {
            return Err(Error::Resource {
                what: "variables for exhaustive enumeration".into(),
                actual: poly.num_vars,
                cap: self.max_vars,
            });
        }
        Ok(minimize_masks(poly, self.exec))
    }
}

fn scan(poly: &MaskPoly, start: u64, end: u64) -> (f64, u64) {
    let mut best = (f64::INFINITY, start);
    for m in start..end {
        let e = poly.eval(m);
        if e < best.0 {
            best = (e, m);
        }
    }
    best
}

/// Enumerate all `2^n` masks. Ties resolve to the lowest mask regardless of
/// the execution policy.
pub fn minimize_masks(poly: &MaskPoly, exec: Exec) -> (f64, u64) {
    let n = poly.num_vars;
    if n <= CHUNK_BITS || !exec.is_parallel() {
        return scan(poly, 0, 1u64 << n);
    }
    let chunk = 1u64 << CHUNK_BITS;
    let chunks = 1usize << (n - CHUNK_BITS);
    exec::map_range(exec, chunks, |i| {
        let start = i as u64 * chunk;
        scan(poly, start, start + chunk)
    })
    .into_iter()
    .fold((f64::INFINITY, 0), |best, cand| if cand.0 < best.0 { cand } else { best })
}

/// Exact global minimum of `poly` and its lowest-mask witness.
pub fn brute_force_min(poly: &PuboPolynomial, exec: Exec) -> Result<(f64, SpinAssignment)> {
    let solver = ExhaustiveSolver::with_exec(exec);
    let (e, m) = solver.minimize(&poly.to_mask_poly()?)?;
    Ok((e, SpinAssignment::from_mask(m, poly.num_vars())))
}
