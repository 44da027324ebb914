//! Boundary-only reduction of a QUBO.
//!
//! Two modes are supported:
//!
//! - **Exact**: each community is quenched for every boundary assignment and
//!   the table is turned into a polynomial by a Walsh–Hadamard transform.
//!   The reduced minimum equals the original minimum.
//! - **Core-fixed**: each community is solved once on all its spins, the core
//!   is frozen to that solution and substituted into the intra terms. The
//!   reduced instance stays quadratic and its minimum upper-bounds the
//!   original one.

mod quench;
mod split;
mod wht;

use serde::{Deserialize, Serialize};

pub use quench::{quench, QuenchConfig, QuenchTable, DEFAULT_MAX_BOUNDARY};
pub use split::{split_energy, CommunitySubinstance, EnergySplit};
pub use wht::{fwht, polynomial_from_table, walsh_coefficients, COEFF_PRUNE_EPS};

use crate::community::CommunityAssignment;
use crate::error::{Error, Result};
use crate::pubo::{parity_sign, PolyFile, PuboPolynomial, SpinAssignment};
use crate::solvers::{CoreSolver, ExhaustiveSolver};
use quench::Conditioner;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReductionMode {
    Exact,
    CoreFixed,
}

impl std::fmt::Display for ReductionMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ReductionMode::Exact => "exact",
            ReductionMode::CoreFixed => "core-fixed",
        })
    }
}

impl std::str::FromStr for ReductionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(ReductionMode::Exact),
            "core-fixed" => Ok(ReductionMode::CoreFixed),
            other => Err(Error::Parameter(format!("unknown reduction mode {other:?}"))),
        }
    }
}

/// Polynomial over the global boundary plus what is needed to lift reduced
/// solutions back to all spins.
#[derive(Clone, Debug)]
pub struct ReducedInstance {
    pub poly: PuboPolynomial,
    pub mode: ReductionMode,
    pub split: EnergySplit,
    /// Exact mode only, one per community.
    pub quench_tables: Vec<QuenchTable>,
    /// Core-fixed mode only, one core mask per community.
    pub fixed_cores: Vec<u64>,
}

impl ReducedInstance {
    pub fn num_vars(&self) -> usize {
        self.poly.num_vars()
    }

    pub fn num_original_vars(&self) -> usize {
        self.split.num_vars
    }

    /// Reduced index to global index.
    pub fn boundary(&self) -> &[usize] {
        &self.split.boundary
    }

    pub fn reduced_index(&self, global: usize) -> Option<usize> {
        self.split.boundary.binary_search(&global).ok()
    }

    /// `sum_c table_c[b|B_c] + across(b)`, straight from the quench tables.
    pub fn table_energy(&self, b: &SpinAssignment) -> Result<f64> {
        if self.mode != ReductionMode::Exact {
            return Err(Error::Parameter("table energy needs an exact reduction".into()));
        }
        let spins = self.scatter(b)?;
        let mut e = self.split.across.evaluate(&SpinAssignment::new(spins.clone())?)?;
        for (sub, table) in self.split.subinstances.iter().zip(&self.quench_tables) {
            e += table.energies[sub.boundary_mask(&spins) as usize];
        }
        Ok(e)
    }

    /// Global spins with boundary entries from `b` and core entries +1.
    fn scatter(&self, b: &SpinAssignment) -> Result<Vec<i8>> {
        if b.len() != self.num_vars() {
            return Err(Error::Dimension {
                expected: self.num_vars(),
                actual: b.len(),
            });
        }
        let mut spins = vec![1i8; self.num_original_vars()];
        for (r, &g) in self.split.boundary.iter().enumerate() {
            spins[g] = b.get(r);
        }
        Ok(spins)
    }

    pub fn to_file(&self) -> ReducedFile {
        ReducedFile {
            poly: self.poly.clone().into(),
            var_map: self.split.boundary.clone(),
            num_original_vars: self.num_original_vars(),
            mode: self.mode,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_file())?)
    }
}

/// Polynomial JSON extended with the reduced-to-global variable map.
#[derive(Debug, Serialize, Deserialize)]
pub struct ReducedFile {
    #[serde(flatten)]
    pub poly: PolyFile,
    /// `var_map[r]` is the original index of reduced variable `r`.
    pub var_map: Vec<usize>,
    pub num_original_vars: usize,
    pub mode: ReductionMode,
}

impl ReducedFile {
    pub fn polynomial(self) -> Result<PuboPolynomial> {
        self.poly.try_into()
    }
}

/// Step (2), exact mode: one quench table per community.
pub fn quench_all(
    split: &EnergySplit,
    solver: &dyn CoreSolver,
    cfg: &QuenchConfig,
) -> Result<Vec<QuenchTable>> {
    split
        .subinstances
        .iter()
        .map(|sub| quench(sub, solver, cfg))
        .collect()
}

/// Polynomial of one quench table, over the community's local boundary spins.
pub fn table_to_polynomial(t: &QuenchTable) -> Result<PuboPolynomial> {
    polynomial_from_table(&t.energies, COEFF_PRUNE_EPS)
}

fn reduced_map(split: &EnergySplit, sub: &CommunitySubinstance) -> Vec<usize> {
    sub.boundary_vars
        .iter()
        .map(|v| split.boundary.binary_search(v).expect("community boundary is in B"))
        .collect()
}

fn across_reduced(split: &EnergySplit) -> Result<PuboPolynomial> {
    let mut map = vec![usize::MAX; split.num_vars];
    for (r, &g) in split.boundary.iter().enumerate() {
        map[g] = r;
    }
    let nb = split.boundary.len();
    let mut out = PuboPolynomial::new(nb);
    for (vars, c) in split.across.terms() {
        let mapped: Vec<usize> = vars.iter().map(|&v| map[v]).collect();
        if mapped.contains(&usize::MAX) {
            return Err(Error::Instance("across term touches a core spin".into()));
        }
        out.add_term(&mapped, c)?;
    }
    Ok(out)
}

/// Step (3), exact mode: sum the table polynomials and the across part.
pub fn assemble_exact(split: EnergySplit, tables: Vec<QuenchTable>) -> Result<ReducedInstance> {
    if tables.len() != split.subinstances.len() {
        return Err(Error::Dimension {
            expected: split.subinstances.len(),
            actual: tables.len(),
        });
    }
    let mut poly = across_reduced(&split)?;
    for (sub, table) in split.subinstances.iter().zip(&tables) {
        let local = table_to_polynomial(table)?;
        poly.add_assign(&local.remap(poly.num_vars(), &reduced_map(&split, sub))?)?;
    }
    Ok(ReducedInstance {
        poly,
        mode: ReductionMode::Exact,
        split,
        quench_tables: tables,
        fixed_cores: Vec::new(),
    })
}

/// Step (2), core-fixed mode: the core part of each community's unconstrained
/// optimum (lowest full mask among degenerate minima).
pub fn fix_cores(split: &EnergySplit, solver: &dyn CoreSolver) -> Result<Vec<u64>> {
    split
        .subinstances
        .iter()
        .map(|sub| {
            let (_, mask) = solver.minimize(&sub.local_mask_poly()?)?;
            Ok(mask >> sub.num_boundary())
        })
        .collect()
}

/// Step (3), core-fixed mode: substitute the frozen cores into the intra terms.
pub fn assemble_core_fixed(split: EnergySplit, fixed_cores: Vec<u64>) -> Result<ReducedInstance> {
    if fixed_cores.len() != split.subinstances.len() {
        return Err(Error::Dimension {
            expected: split.subinstances.len(),
            actual: fixed_cores.len(),
        });
    }
    let mut poly = across_reduced(&split)?;
    for (sub, &core) in split.subinstances.iter().zip(&fixed_cores) {
        let nb = sub.num_boundary();
        let mut local = PuboPolynomial::new(nb);
        for (vars, c) in sub.intra_poly.terms() {
            let core_bits = vars
                .iter()
                .filter(|&&i| i >= nb)
                .fold(0u64, |m, &i| m | (1 << (i - nb)));
            let kept: Vec<usize> = vars.iter().copied().filter(|&i| i < nb).collect();
            local.add_term_sorted(kept, c * parity_sign(core_bits & core));
        }
        poly.add_assign(&local.remap(poly.num_vars(), &reduced_map(&split, sub))?)?;
    }
    Ok(ReducedInstance {
        poly,
        mode: ReductionMode::CoreFixed,
        split,
        quench_tables: Vec::new(),
        fixed_cores,
    })
}

pub fn reduce_exact(
    poly: &PuboPolynomial,
    ca: &CommunityAssignment,
    solver: &dyn CoreSolver,
    cfg: &QuenchConfig,
) -> Result<ReducedInstance> {
    let split = split_energy(poly, ca)?;
    let tables = quench_all(&split, solver, cfg)?;
    assemble_exact(split, tables)
}

pub fn reduce_core_fixed(
    poly: &PuboPolynomial,
    ca: &CommunityAssignment,
    solver: &dyn CoreSolver,
) -> Result<ReducedInstance> {
    let split = split_energy(poly, ca)?;
    let cores = fix_cores(&split, solver)?;
    assemble_core_fixed(split, cores)
}

/// Extend a reduced assignment to all original spins.
///
/// Exact mode reads each core from the quench table. Core-fixed mode
/// re-minimizes every core with its boundary pinned to `b` instead of reusing
/// the frozen cores.
pub fn lift_solution(ri: &ReducedInstance, b: &SpinAssignment) -> Result<SpinAssignment> {
    let mut spins = ri.scatter(b)?;
    let solver = ExhaustiveSolver::default();
    for (c, sub) in ri.split.subinstances.iter().enumerate() {
        let mask = sub.boundary_mask(&spins);
        let core = match ri.mode {
            ReductionMode::Exact => ri.quench_tables[c].argmin_cores[mask as usize],
            ReductionMode::CoreFixed => Conditioner::new(sub)?.solve(mask, &solver)?.1,
        };
        sub.write_core(core, &mut spins);
    }
    SpinAssignment::new(spins)
}
