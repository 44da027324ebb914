//! Noise-free statevector QAOA for arbitrary PUBO cost functions.
//!
//! Basis index `m` is the packed spin assignment (bit `i` set when spin `i`
//! is -1), so the cost Hamiltonian is the diagonal `E(m)`. Each layer applies
//! `exp(-i gamma E)` and then `exp(-i beta X)` on every qubit, starting from
//! the uniform superposition.

mod compare;
mod optimize;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use compare::{compare_reductions, CaseResult, QaoaComparison};
pub use optimize::{optimize, MultistartConfig, NelderMead, OptimizeResult, TraceEntry};

use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::pubo::PuboPolynomial;

/// Default cap on simulated qubits (`2^24` amplitudes).
pub const DEFAULT_MAX_QUBITS: usize = 24;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct QaoaParams {
    pub gammas: Vec<f64>,
    pub betas: Vec<f64>,
}

impl QaoaParams {
    pub fn new(gammas: Vec<f64>, betas: Vec<f64>) -> Result<Self> {
        if gammas.len() != betas.len() {
            return Err(Error::Dimension {
                expected: gammas.len(),
                actual: betas.len(),
            });
        }
        Ok(Self { gammas, betas })
    }

    pub fn zeros(depth: usize) -> Self {
        Self {
            gammas: vec![0.0; depth],
            betas: vec![0.0; depth],
        }
    }

    pub fn depth(&self) -> usize {
        self.gammas.len()
    }

    /// `[gamma_1, beta_1, gamma_2, beta_2, ...]`.
    pub fn to_flat(&self) -> Vec<f64> {
        self.gammas
            .iter()
            .zip(&self.betas)
            .flat_map(|(&g, &b)| [g, b])
            .collect()
    }

    pub fn from_flat(x: &[f64]) -> Self {
        Self {
            gammas: x.iter().step_by(2).copied().collect(),
            betas: x.iter().skip(1).step_by(2).copied().collect(),
        }
    }

    /// Extend to `depth` layers with zero angles (identity layers).
    pub fn padded(&self, depth: usize) -> Self {
        let mut p = self.clone();
        p.gammas.resize(depth.max(p.depth()), 0.0);
        p.betas.resize(depth.max(p.depth()), 0.0);
        p
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QaoaState {
    pub num_qubits: usize,
    pub amplitudes: Vec<Complex64>,
}

impl QaoaState {
    pub fn uniform(num_qubits: usize) -> Self {
        let d = 1usize << num_qubits;
        let a = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
        Self {
            num_qubits,
            amplitudes: vec![a; d],
        }
    }

    pub fn basis(num_qubits: usize, index: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Self {
            num_qubits,
            amplitudes,
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(Complex64::norm_sqr).collect()
    }
}

/// `E(m)` for every basis state, computed term by term.
pub fn diagonal_energies(poly: &PuboPolynomial) -> Result<Vec<f64>> {
    diagonal_energies_with(poly, DEFAULT_MAX_QUBITS, Exec::Parallel)
}

pub fn diagonal_energies_with(
    poly: &PuboPolynomial,
    max_qubits: usize,
    exec: Exec,
) -> Result<Vec<f64>> {
    let n = poly.num_vars();
    if n > max_qubits {
        return Err(Error::Resource {
            what: "qubits for statevector simulation".into(),
            actual: n,
            cap: max_qubits,
        });
    }
    let mp = poly.to_mask_poly()?;
    let mut out = vec![0.0; 1 << n];
    exec::fill_indexed(exec, &mut out, |m| mp.eval(m as u64));
    Ok(out)
}

fn qubits_of(len: usize) -> Result<usize> {
    if !len.is_power_of_two() {
        return Err(Error::Dimension {
            expected: len.next_power_of_two(),
            actual: len,
        });
    }
    Ok(len.trailing_zeros() as usize)
}

/// Reusable simulator for one cost function.
///
/// Distinct energy levels are phased once per layer instead of once per
/// amplitude when the spectrum is small (always the case for MaxCut).
#[derive(Clone, Debug)]
pub struct Simulator {
    num_qubits: usize,
    energies: Vec<f64>,
    levels: Option<(Vec<f64>, Vec<u32>)>,
    state: Vec<Complex64>,
    phases: Vec<Complex64>,
}

impl Simulator {
    pub fn new(energies: Vec<f64>) -> Result<Self> {
        let num_qubits = qubits_of(energies.len())?;
        let levels = Self::levels(&energies);
        Ok(Self {
            num_qubits,
            state: vec![Complex64::new(0.0, 0.0); energies.len()],
            phases: Vec::new(),
            levels,
            energies,
        })
    }

    fn levels(energies: &[f64]) -> Option<(Vec<f64>, Vec<u32>)> {
        let mut index = std::collections::HashMap::new();
        let mut values = Vec::new();
        let mut of = Vec::with_capacity(energies.len());
        for &e in energies {
            let next = values.len();
            let id = *index.entry(e.to_bits()).or_insert_with(|| {
                values.push(e);
                next
            });
            if values.len() > energies.len() / 4 + 1 {
                return None;
            }
            of.push(id as u32);
        }
        Some((values, of))
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    fn prepare(&mut self, params: &QaoaParams) {
        let d = self.energies.len();
        let a = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
        self.state.iter_mut().for_each(|x| *x = a);
        for (&gamma, &beta) in params.gammas.iter().zip(&params.betas) {
            self.apply_phase(gamma);
            apply_mixer(&mut self.state, self.num_qubits, beta);
        }
    }

    fn apply_phase(&mut self, gamma: f64) {
        match &self.levels {
            Some((values, of)) => {
                self.phases.clear();
                self.phases
                    .extend(values.iter().map(|&e| Complex64::from_polar(1.0, -gamma * e)));
                for (amp, &id) in self.state.iter_mut().zip(of) {
                    *amp *= self.phases[id as usize];
                }
            }
            None => {
                for (amp, &e) in self.state.iter_mut().zip(&self.energies) {
                    *amp *= Complex64::from_polar(1.0, -gamma * e);
                }
            }
        }
    }

    pub fn run(&mut self, params: &QaoaParams) -> QaoaState {
        self.prepare(params);
        QaoaState {
            num_qubits: self.num_qubits,
            amplitudes: self.state.clone(),
        }
    }

    /// `<psi(params)| H |psi(params)>`.
    pub fn expectation(&mut self, params: &QaoaParams) -> f64 {
        self.prepare(params);
        self.state
            .iter()
            .zip(&self.energies)
            .map(|(a, &e)| a.norm_sqr() * e)
            .sum()
    }
}

/// `exp(-i beta X)` on every qubit: per pair `(a, b)`,
/// `a' = cos(beta) a - i sin(beta) b`, `b' = -i sin(beta) a + cos(beta) b`.
pub fn apply_mixer(state: &mut [Complex64], num_qubits: usize, beta: f64) {
    let (s, c) = beta.sin_cos();
    let minus_i_s = Complex64::new(0.0, -s);
    for q in 0..num_qubits {
        let h = 1usize << q;
        for block in state.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x * c + y * minus_i_s;
                *b = x * minus_i_s + y * c;
            }
        }
    }
}

/// Prepare `|psi(gammas, betas)>` for the diagonal cost `energies`.
pub fn run_circuit(energies: &[f64], params: &QaoaParams) -> Result<QaoaState> {
    if params.gammas.len() != params.betas.len() {
        return Err(Error::Dimension {
            expected: params.gammas.len(),
            actual: params.betas.len(),
        });
    }
    Ok(Simulator::new(energies.to_vec())?.run(params))
}

/// `sum_m |amp_m|^2 E(m)`.
pub fn expectation(state: &QaoaState, energies: &[f64]) -> Result<f64> {
    if state.amplitudes.len() != energies.len() {
        return Err(Error::Dimension {
            expected: state.amplitudes.len(),
            actual: energies.len(),
        });
    }
    Ok(state
        .amplitudes
        .iter()
        .zip(energies)
        .map(|(a, &e)| a.norm_sqr() * e)
        .sum())
}

/// `expect / e_min`; 1 means the state sits on the ground space.
pub fn approximation_ratio(expect: f64, e_min: f64) -> Result<f64> {
    if e_min == 0.0 {
        return Err(Error::UndefinedRatio);
    }
    Ok(expect / e_min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::pubo::SpinAssignment;
    use std::f64::consts::PI;

    fn edge_energies() -> Vec<f64> {
        diagonal_energies(&Graph::new(2, [(0, 1)]).unwrap().maxcut_to_qubo()).unwrap()
    }

    #[test]
    fn constant_and_edge_diagonals() {
        assert_eq!(diagonal_energies(&PuboPolynomial::constant(3, 2.0)).unwrap(), vec![2.0; 8]);
        assert_eq!(edge_energies(), vec![0.0, -1.0, -1.0, 0.0]);
    }

    #[test]
    fn diagonal_matches_evaluate() {
        let p = crate::generators::random_regular(12, 3, 3).unwrap().maxcut_to_qubo();
        let d = diagonal_energies(&p).unwrap();
        for (m, &e) in d.iter().enumerate() {
            assert_eq!(e, p.evaluate(&SpinAssignment::from_mask(m as u64, 12)).unwrap());
        }
        let min = d.iter().copied().fold(f64::INFINITY, f64::min);
        let (oracle, _) = crate::solvers::brute_force_min(&p, Exec::Sequential).unwrap();
        assert_eq!(min, oracle);
    }

    #[test]
    fn qubit_cap_is_enforced() {
        let p = PuboPolynomial::new(5);
        assert!(matches!(
            diagonal_energies_with(&p, 4, Exec::Sequential),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn depth_zero_is_uniform() {
        let st = run_circuit(&[1.0, 2.0, 3.0, 4.0], &QaoaParams::zeros(0)).unwrap();
        for a in &st.amplitudes {
            assert!((a - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn zero_mixer_keeps_uniform_probabilities() {
        let e = edge_energies();
        let params = QaoaParams::new(vec![0.7, 1.9], vec![0.0, 0.0]).unwrap();
        let st = run_circuit(&e, &params).unwrap();
        for p in st.probabilities() {
            assert!((p - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn one_qubit_closed_form() {
        for beta in [0.0, 0.3, 1.1, 2.5] {
            let params = QaoaParams::new(vec![0.4], vec![beta]).unwrap();
            let st = run_circuit(&[0.0, 0.0], &params).unwrap();
            let want = Complex64::new(beta.cos(), -beta.sin()) / 2f64.sqrt();
            for a in &st.amplitudes {
                assert!((a - want).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn norm_is_preserved_layer_by_layer() {
        let p = crate::generators::random_regular(10, 3, 1).unwrap().maxcut_to_qubo();
        let e = diagonal_energies(&p).unwrap();
        let mut st = QaoaState::uniform(10);
        for (g, b) in [(0.3, 0.2), (1.7, -0.9), (4.0, 2.2), (-2.5, 0.05)] {
            for (amp, &en) in st.amplitudes.iter_mut().zip(&e) {
                *amp *= Complex64::from_polar(1.0, -g * en);
            }
            apply_mixer(&mut st.amplitudes, 10, b);
            assert!((st.norm_sqr() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn uniform_expectation_is_minus_half_edges() {
        let g = crate::generators::random_regular(12, 3, 8).unwrap();
        let e = diagonal_energies(&g.maxcut_to_qubo()).unwrap();
        let x = expectation(&QaoaState::uniform(12), &e).unwrap();
        assert!((x + g.num_edges() as f64 / 2.0).abs() < 1e-12);
    }

    #[test]
    fn basis_state_expectation_and_bounds() {
        let e = edge_energies();
        assert_eq!(expectation(&QaoaState::basis(2, 1), &e).unwrap(), -1.0);
        let st = run_circuit(&e, &QaoaParams::new(vec![0.9], vec![0.4]).unwrap()).unwrap();
        let x = expectation(&st, &e).unwrap();
        assert!((-1.0..=0.0).contains(&x));
    }

    #[test]
    fn full_flip_mixer_preserves_symmetric_expectation() {
        let p = crate::generators::random_regular(8, 3, 2).unwrap().maxcut_to_qubo();
        let e = diagonal_energies(&p).unwrap();
        let mut st = run_circuit(&e, &QaoaParams::new(vec![0.8], vec![0.3]).unwrap()).unwrap();
        let before = expectation(&st, &e).unwrap();
        apply_mixer(&mut st.amplitudes, 8, PI / 2.0);
        let after = expectation(&st, &e).unwrap();
        assert!((before - after).abs() < 1e-12);
        // On a basis state the same layer flips every bit.
        let mut b = QaoaState::basis(3, 0b010);
        apply_mixer(&mut b.amplitudes, 3, PI / 2.0);
        assert!((b.amplitudes[0b101].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ratio_edge_cases() {
        assert_eq!(approximation_ratio(-3.0, -3.0).unwrap(), 1.0);
        assert_eq!(approximation_ratio(0.0, -3.0).unwrap(), 0.0);
        assert!(matches!(approximation_ratio(-1.0, 0.0), Err(Error::UndefinedRatio)));
    }

    #[test]
    fn simulator_matches_run_circuit() {
        let p = crate::generators::random_regular(8, 3, 5).unwrap().maxcut_to_qubo();
        let mut with_levels = p.clone();
        with_levels.add_term(&[0], 0.1234).unwrap();
        for poly in [p, with_levels] {
            let e = diagonal_energies(&poly).unwrap();
            let params = QaoaParams::new(vec![0.4, 1.2], vec![0.7, -0.2]).unwrap();
            let st = run_circuit(&e, &params).unwrap();
            let mut sim = Simulator::new(e.clone()).unwrap();
            let x = sim.expectation(&params);
            assert!((x - expectation(&st, &e).unwrap()).abs() < 1e-12);
        }
    }
}
