//! PUBO minimization as weighted MaxSAT.
//!
//! Spin `s_i` maps to DIMACS variable `i + 1`, true when `s_i = +1`. A
//! `k`-body term becomes `2^(k-1)` clauses of `k` literals, each clause
//! falsified by exactly one spin pattern of the term. For every assignment,
//!
//! ```text
//! satisfied_weight / scale + offset == -energy
//! ```
//!
//! so maximizing the satisfied weight minimizes the energy.

mod external;

use std::io::{BufRead, Write};

pub use external::{run_external_solver, ExternalSolution, SolverConfig};

use crate::error::{Error, Result};
use crate::pubo::PuboPolynomial;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    pub weight: u64,
    /// Signed 1-based DIMACS literals.
    pub lits: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WcnfInstance {
    pub num_vars: usize,
    pub clauses: Vec<Clause>,
    pub offset: f64,
    pub scale: u64,
}

/// Which spin patterns of a term keep their clause: those whose product has
/// this sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KeepParity {
    Negative,
    Positive,
}

/// Clauses for one product term, in assignment-mask order (bit `j` set when
/// the term's `j`-th spin is -1).
///
/// The clause for a pattern is its negation: `not x_j` where the pattern has
/// `s_j = +1`, `x_j` where it has `s_j = -1`. With [`KeepParity::Negative`]
/// and unit weight 2 the satisfied weight plus `-(2^k - 1)` equals the term
/// value itself.
pub fn term_clauses(vars: &[usize], keep: KeepParity, weight: u64) -> Vec<Clause> {
    let k = vars.len();
    let mut out = Vec::with_capacity(1 << k.saturating_sub(1));
    for pattern in 0u64..(1 << k) {
        let negative = pattern.count_ones() % 2 == 1;
        let wanted = match keep {
            KeepParity::Negative => negative,
            KeepParity::Positive => !negative,
        };
        if !wanted {
            continue;
        }
        let lits = vars
            .iter()
            .enumerate()
            .map(|(j, &v)| {
                let lit = v as i64 + 1;
                if (pattern >> j) & 1 == 0 {
                    -lit
                } else {
                    lit
                }
            })
            .collect();
        out.push(Clause { weight, lits });
    }
    out
}

/// Smallest `q` with `p/q` equal to `x` up to a few ulps, by continued fractions.
fn denominator(x: f64, max_den: u64) -> Option<u64> {
    let tol = 8.0 * f64::EPSILON * x.abs().max(1.0);
    let (mut h0, mut h1) = (0f64, 1f64);
    let (mut k0, mut k1) = (1f64, 0f64);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        let (h2, k2) = (a * h1 + h0, a * k1 + k0);
        if k2 > max_den as f64 {
            return None;
        }
        if (x - h2 / k2).abs() <= tol {
            return Some(k2 as u64);
        }
        let frac = r - a;
        if frac == 0.0 {
            return None;
        }
        r = 1.0 / frac;
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
    }
    None
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

const MAX_SCALE: u64 = 1 << 40;
const MAX_DENOMINATOR: u64 = 1 << 24;

/// Least common denominator of the non-constant coefficients.
pub fn weight_scale(poly: &PuboPolynomial) -> Result<u64> {
    let mut scale = 1u64;
    for (vars, c) in poly.terms() {
        if vars.is_empty() {
            continue;
        }
        let q = denominator(c.abs(), MAX_DENOMINATOR).ok_or_else(|| {
            Error::Parameter(format!("coefficient {c} is not a rational with small denominator"))
        })?;
        scale = scale / gcd(scale, q) * q;
        if scale > MAX_SCALE {
            return Err(Error::Parameter(format!(
                "common denominator exceeds {MAX_SCALE}"
            )));
        }
    }
    Ok(scale)
}

/// Convert a PUBO to weighted MaxSAT (maximize satisfied weight).
pub fn pubo_to_wcnf(poly: &PuboPolynomial) -> Result<WcnfInstance> {
    let scale = weight_scale(poly)?;
    let mut clauses = Vec::new();
    let mut offset = 0.0;
    for (vars, c) in poly.terms() {
        if vars.is_empty() {
            offset -= c;
            continue;
        }
        let k = vars.len();
        if k >= 63 {
            return Err(Error::UnsupportedDegree { degree: k, max: 62 });
        }
        // The clauses encode -c * prod(s): kept patterns have product sign
        // opposite to c.
        let keep = if c > 0.0 {
            KeepParity::Positive
        } else {
            KeepParity::Negative
        };
        let w = 2.0 * c.abs() * scale as f64;
        let weight = w.round();
        if (w - weight).abs() > 1e-6 * w.max(1.0) || weight < 1.0 {
            return Err(Error::Parameter(format!(
                "coefficient {c} does not scale to an integer weight"
            )));
        }
        clauses.extend(term_clauses(vars, keep, weight as u64));
        offset -= c.abs() * ((1u64 << k) - 1) as f64;
    }
    Ok(WcnfInstance {
        num_vars: poly.num_vars(),
        clauses,
        offset,
        scale,
    })
}

impl WcnfInstance {
    pub fn total_weight(&self) -> u64 {
        self.clauses.iter().map(|c| c.weight).sum()
    }

    /// `top` of the header: larger than any sum of soft weights.
    pub fn top(&self) -> u64 {
        1 + self.total_weight()
    }

    /// `x[i]` is the truth value of DIMACS variable `i + 1`.
    pub fn satisfied_weight(&self, x: &[bool]) -> u64 {
        self.clauses
            .iter()
            .filter(|cl| {
                cl.lits.iter().any(|&l| {
                    let v = x[(l.unsigned_abs() - 1) as usize];
                    if l > 0 {
                        v
                    } else {
                        !v
                    }
                })
            })
            .map(|cl| cl.weight)
            .sum()
    }

    /// Energy implied by a satisfied weight.
    pub fn energy_from_satisfied(&self, satisfied: u64) -> f64 {
        -(satisfied as f64 / self.scale as f64 + self.offset)
    }

    pub fn write<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "c offset {}", self.offset)?;
        writeln!(out, "c scale {}", self.scale)?;
        writeln!(
            out,
            "p wcnf {} {} {}",
            self.num_vars,
            self.clauses.len(),
            self.top()
        )?;
        for cl in &self.clauses {
            write!(out, "{}", cl.weight)?;
            for l in &cl.lits {
                write!(out, " {l}")?;
            }
            writeln!(out, " 0")?;
        }
        Ok(())
    }

    pub fn to_wcnf_string(&self) -> String {
        let mut buf = Vec::new();
        self.write(&mut buf).expect("writing to a Vec");
        String::from_utf8(buf).expect("ascii output")
    }

    pub fn write_to_path(&self, path: &std::path::Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| Error::io(path.to_path_buf(), e))?;
        let mut out = std::io::BufWriter::new(file);
        self.write(&mut out)
            .and_then(|_| out.flush())
            .map_err(|e| Error::io(path.to_path_buf(), e))
    }

    pub fn parse<R: BufRead>(input: R) -> Result<Self> {
        let mut offset = 0.0;
        let mut scale = 1u64;
        let mut header: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        for (idx, line) in input.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let bad = |msg: String| Error::Parse { line: lineno, msg };
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            if let Some(rest) = t.strip_prefix('c') {
                let mut it = rest.split_whitespace();
                match (it.next(), it.next()) {
                    (Some("offset"), Some(v)) => {
                        offset = v.parse().map_err(|e| bad(format!("offset: {e}")))?
                    }
                    (Some("scale"), Some(v)) => {
                        scale = v.parse().map_err(|e| bad(format!("scale: {e}")))?
                    }
                    _ => {}
                }
                continue;
            }
            if let Some(rest) = t.strip_prefix("p ") {
                let f: Vec<&str> = rest.split_whitespace().collect();
                if f.len() < 3 || f[0] != "wcnf" {
                    return Err(bad("expected `p wcnf <vars> <clauses> [top]`".into()));
                }
                let nv = f[1].parse().map_err(|e| bad(format!("{e}")))?;
                let nc = f[2].parse().map_err(|e| bad(format!("{e}")))?;
                header = Some((nv, nc));
                continue;
            }
            let (nv, _) = header.ok_or_else(|| bad("clause before header".into()))?;
            let nums: Vec<i64> = t
                .split_whitespace()
                .map(|s| s.parse::<i64>().map_err(|e| bad(format!("{s:?}: {e}"))))
                .collect::<Result<_>>()?;
            if nums.len() < 2 || *nums.last().unwrap() != 0 {
                return Err(bad("clause must be `<weight> <lits...> 0`".into()));
            }
            if nums[0] <= 0 {
                return Err(bad("weights must be positive".into()));
            }
            let lits = nums[1..nums.len() - 1].to_vec();
            if let Some(l) = lits.iter().find(|l| **l == 0 || l.unsigned_abs() as usize > nv) {
                return Err(bad(format!("literal {l} out of range")));
            }
            clauses.push(Clause {
                weight: nums[0] as u64,
                lits,
            });
        }
        let (num_vars, nc) = header.ok_or(Error::Parse {
            line: 0,
            msg: "missing `p wcnf` header".into(),
        })?;
        if nc != clauses.len() {
            return Err(Error::Parse {
                line: 0,
                msg: format!("header announces {nc} clauses, found {}", clauses.len()),
            });
        }
        Ok(Self {
            num_vars,
            clauses,
            offset,
            scale,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pubo::SpinAssignment;

    fn lits(c: &[Clause]) -> Vec<Vec<i64>> {
        c.iter().map(|c| c.lits.clone()).collect()
    }

    #[test]
    fn two_body_clauses() {
        // s1 s2 -> (x1 or not x2), (not x1 or x2)
        let cl = term_clauses(&[0, 1], KeepParity::Negative, 2);
        assert_eq!(lits(&cl), vec![vec![1, -2], vec![-1, 2]]);
        assert!(cl.iter().all(|c| c.weight == 2));
    }

    #[test]
    fn three_body_clauses() {
        let cl = term_clauses(&[0, 1, 2], KeepParity::Negative, 2);
        let mut got = lits(&cl);
        got.sort();
        let mut want = vec![
            vec![1, 2, 3],
            vec![-1, -2, 3],
            vec![-1, 2, -3],
            vec![1, -2, -3],
        ];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn raw_term_encoding_reproduces_the_term() {
        // Unit coefficient, weight 2, offset -(2^k - 1): SAT value equals the product.
        for k in 1..=5usize {
            let vars: Vec<usize> = (0..k).collect();
            let w = WcnfInstance {
                num_vars: k,
                clauses: term_clauses(&vars, KeepParity::Negative, 2),
                offset: -(((1u64 << k) - 1) as f64),
                scale: 1,
            };
            assert_eq!(w.clauses.len(), 1 << (k - 1));
            for m in 0..(1u64 << k) {
                let x: Vec<bool> = (0..k).map(|i| (m >> i) & 1 == 0).collect();
                let product = if m.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                assert_eq!(w.satisfied_weight(&x) as f64 + w.offset, product);
            }
        }
    }

    #[test]
    fn positive_two_body_term_rewards_disagreement() {
        let p = PuboPolynomial::from_terms(2, [(vec![0, 1], 1.0)]).unwrap();
        let w = pubo_to_wcnf(&p).unwrap();
        assert_eq!(lits(&w.clauses), vec![vec![-1, -2], vec![1, 2]]);
        assert_eq!(w.offset, -3.0);
    }

    #[test]
    fn maxcut_needs_scale_two() {
        let g = crate::graph::Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        let w = pubo_to_wcnf(&g.maxcut_to_qubo()).unwrap();
        assert_eq!(w.scale, 2);
        assert!(w.clauses.iter().all(|c| c.weight == 2));
    }

    #[test]
    fn constant_only_is_clause_free() {
        let w = pubo_to_wcnf(&PuboPolynomial::constant(3, 4.0)).unwrap();
        assert!(w.clauses.is_empty());
        assert_eq!(w.offset, -4.0);
        let text = w.to_wcnf_string();
        assert!(text.lines().any(|l| l == "p wcnf 3 0 1"));
        assert!(text.lines().all(|l| l.starts_with('c') || l.starts_with('p')));
    }

    #[test]
    fn single_edge_file() {
        let p = crate::graph::Graph::new(2, [(0, 1)]).unwrap().maxcut_to_qubo();
        let w = pubo_to_wcnf(&p).unwrap();
        let text = w.to_wcnf_string();
        assert_eq!(
            text,
            "c offset -1\nc scale 2\np wcnf 2 2 5\n2 -1 -2 0\n2 1 2 0\n"
        );
        assert_eq!(WcnfInstance::parse(text.as_bytes()).unwrap(), w);
    }

    #[test]
    fn fractional_coefficients_round_trip() {
        let p = PuboPolynomial::from_terms(
            3,
            [
                (vec![], 0.3),
                (vec![0], 1.0 / 3.0),
                (vec![0, 2], -0.75),
                (vec![0, 1, 2], 0.125),
            ],
        )
        .unwrap();
        let w = pubo_to_wcnf(&p).unwrap();
        assert_eq!(w.scale, 24);
        for m in 0..8u64 {
            let s = SpinAssignment::from_mask(m, 3);
            let x: Vec<bool> = s.values().iter().map(|&v| v == 1).collect();
            let e = w.energy_from_satisfied(w.satisfied_weight(&x));
            assert!((e - p.evaluate(&s).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn irrational_coefficient_rejected() {
        let p = PuboPolynomial::from_terms(2, [(vec![0, 1], std::f64::consts::PI)]).unwrap();
        assert!(pubo_to_wcnf(&p).is_err());
    }

    #[test]
    fn parser_rejects_bad_input() {
        assert!(WcnfInstance::parse("p wcnf 2 1 3\n2 1 3 0\n".as_bytes()).is_err());
        assert!(WcnfInstance::parse("p wcnf 2 2 3\n2 1 0\n".as_bytes()).is_err());
        assert!(WcnfInstance::parse("2 1 0\n".as_bytes()).is_err());
    }
}
