//! Spin assignments and sparse polynomial energies over spins in {+1, -1}.
//!
//! Bitmask convention, used everywhere in the crate: bit `i` of a mask is 0
//! when spin `i` is +1 and 1 when it is -1. The all-plus assignment is mask 0.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest variable count for which assignments can be packed into a `u64` mask.
pub const MAX_MASK_VARS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct SpinAssignment(Vec<i8>);

impl SpinAssignment {
    pub fn new(values: Vec<i8>) -> Result<Self> {
        if let Some(pos) = values.iter().position(|&s| s != 1 && s != -1) {
            return Err(Error::Parameter(format!(
                "spin {pos} has value {}, expected +1 or -1",
                values[pos]
            )));
        }
        Ok(Self(values))
    }

    pub fn all_up(len: usize) -> Self {
        Self(vec![1; len])
    }

    /// Decode `mask` into `len` spins (bit set means spin -1).
    pub fn from_mask(mask: u64, len: usize) -> Self {
        assert!(len <= MAX_MASK_VARS);
        Self((0..len).map(|i| spin_of_bit(mask, i)).collect())
    }

    pub fn to_mask(&self) -> u64 {
        assert!(self.0.len() <= MAX_MASK_VARS);
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == -1)
            .fold(0, |m, (i, _)| m | (1 << i))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[i8] {
        &self.0
    }

    pub fn get(&self, i: usize) -> i8 {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, spin: i8) {
        assert!(spin == 1 || spin == -1);
        self.0[i] = spin;
    }

    /// Global spin flip.
    pub fn flipped(&self) -> Self {
        Self(self.0.iter().map(|s| -s).collect())
    }
}

impl TryFrom<Vec<i8>> for SpinAssignment {
    type Error = Error;

    fn try_from(values: Vec<i8>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<SpinAssignment> for Vec<i8> {
    fn from(s: SpinAssignment) -> Self {
        s.0
    }
}

#[inline]
pub(crate) fn spin_of_bit(mask: u64, bit: usize) -> i8 {
    if (mask >> bit) & 1 == 0 {
        1
    } else {
        -1
    }
}

/// `(-1)^popcount(x)` as a float.
#[inline]
pub(crate) fn parity_sign(x: u64) -> f64 {
    if x.count_ones() & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Sparse multilinear polynomial in spin variables.
///
/// Terms are keyed by strictly increasing index lists; the empty list is the
/// constant. Exact zeros are never stored.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolyFile", into = "PolyFile")]
pub struct PuboPolynomial {
    num_vars: usize,
    terms: BTreeMap<Vec<usize>, f64>,
}

impl PuboPolynomial {
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, value: f64) -> Self {
        let mut p = Self::new(num_vars);
        p.add_term_sorted(Vec::new(), value);
        p
    }

    /// Build from arbitrary `(vars, coeff)` pairs. Index lists may be unsorted
    /// and may repeat an index (`s_i * s_i = 1`); repeated term keys merge.
    pub fn from_terms<I, V>(num_vars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (V, f64)>,
        V: AsRef<[usize]>,
    {
        let mut p = Self::new(num_vars);
        for (vars, coeff) in terms {
            p.add_term(vars.as_ref(), coeff)?;
        }
        Ok(p)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn constant_term(&self) -> f64 {
        self.terms.get(&[][..]).copied().unwrap_or(0.0)
    }

    pub fn coefficient(&self, vars: &[usize]) -> f64 {
        self.terms.get(vars).copied().unwrap_or(0.0)
    }

    /// Terms in canonical (lexicographic) order.
    pub fn terms(&self) -> impl Iterator<Item = (&[usize], f64)> + '_ {
        self.terms.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    /// Add `coeff * prod(s_v for v in vars)`.
    pub fn add_term(&mut self, vars: &[usize], coeff: f64) -> Result<()> {
        if !coeff.is_finite() {
            return Err(Error::Parameter(format!("non-finite coefficient {coeff}")));
        }
        if let Some(&bad) = vars.iter().find(|&&v| v >= self.num_vars) {
            return Err(Error::Parameter(format!(
                "variable {bad} out of range for {} variables",
                self.num_vars
            )));
        }
        let mut key = vars.to_vec();
        key.sort_unstable();
        // s_i^2 = 1: drop indices appearing an even number of times.
        let mut canon = Vec::with_capacity(key.len());
        for v in key {
            if canon.last() == Some(&v) {
                canon.pop();
            } else {
                canon.push(v);
            }
        }
        self.add_term_sorted(canon, coeff);
        Ok(())
    }

    pub(crate) fn add_term_sorted(&mut self, key: Vec<usize>, coeff: f64) {
        debug_assert!(key.windows(2).all(|w| w[0] < w[1]));
        if coeff == 0.0 {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = *e.get() + coeff;
                if sum == 0.0 {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Adds every term of `other` (which must have the same variable count).
    pub fn add_assign(&mut self, other: &PuboPolynomial) -> Result<()> {
        if other.num_vars != self.num_vars {
            return Err(Error::Dimension {
                expected: self.num_vars,
                actual: other.num_vars,
            });
        }
        for (k, &v) in &other.terms {
            self.add_term_sorted(k.clone(), v);
        }
        Ok(())
    }

    /// Drop every coefficient with `|c| < eps`.
    pub fn prune(&mut self, eps: f64) {
        self.terms.retain(|_, c| c.abs() >= eps);
    }

    /// Relabel variable `i` as `map[i]` in a polynomial over `num_vars` variables.
    pub fn remap(&self, num_vars: usize, map: &[usize]) -> Result<Self> {
        if map.len() != self.num_vars {
            return Err(Error::Dimension {
                expected: self.num_vars,
                actual: map.len(),
            });
        }
        let mut out = Self::new(num_vars);
        for (k, &v) in &self.terms {
            let vars: Vec<usize> = k.iter().map(|&i| map[i]).collect();
            out.add_term(&vars, v)?;
        }
        Ok(out)
    }

    pub fn evaluate(&self, s: &SpinAssignment) -> Result<f64> {
        if s.len() != self.num_vars {
            return Err(Error::Dimension {
                expected: self.num_vars,
                actual: s.len(),
            });
        }
        let spins = s.values();
        Ok(self
            .terms
            .iter()
            .map(|(k, &c)| {
                let sign: i8 = k.iter().map(|&i| spins[i]).product();
                c * f64::from(sign)
            })
            .sum())
    }

    /// Count of terms per degree.
    pub fn degree_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for k in self.terms.keys() {
            *h.entry(k.len()).or_insert(0) += 1;
        }
        h
    }

    /// Graph on the variables with one edge per quadratic term.
    pub fn interaction_graph(&self) -> crate::graph::Graph {
        let edges = self
            .terms
            .keys()
            .filter(|k| k.len() == 2)
            .map(|k| (k[0], k[1]));
        crate::graph::Graph::new(self.num_vars, edges)
            .expect("quadratic terms are sorted, distinct and in range")
    }

    pub fn to_mask_poly(&self) -> Result<MaskPoly> {
        MaskPoly::new(self)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// On-disk form: `{num_vars, terms: [{vars, coeff}]}` in canonical order.
#[derive(Debug, Serialize, Deserialize)]
pub struct PolyFile {
    pub num_vars: usize,
    pub terms: Vec<TermEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TermEntry {
    pub vars: Vec<usize>,
    pub coeff: f64,
}

impl From<PuboPolynomial> for PolyFile {
    fn from(p: PuboPolynomial) -> Self {
        PolyFile {
            num_vars: p.num_vars,
            terms: p
                .terms
                .into_iter()
                .map(|(vars, coeff)| TermEntry { vars, coeff })
                .collect(),
        }
    }
}

impl TryFrom<PolyFile> for PuboPolynomial {
    type Error = Error;

    fn try_from(f: PolyFile) -> Result<Self> {
        PuboPolynomial::from_terms(f.num_vars, f.terms.into_iter().map(|t| (t.vars, t.coeff)))
    }
}

/// A polynomial flattened to `(term mask, coefficient)` pairs for fast
/// evaluation on packed assignments. Term order matches the canonical order,
/// so [`MaskPoly::eval`] returns bit-identical values to
/// [`PuboPolynomial::evaluate`].
#[derive(Clone, Debug)]
pub struct MaskPoly {
    pub num_vars: usize,
    pub masks: Vec<u64>,
    pub coeffs: Vec<f64>,
}

impl MaskPoly {
    pub fn new(p: &PuboPolynomial) -> Result<Self> {
        if p.num_vars > MAX_MASK_VARS {
            return Err(Error::Resource {
                what: "variable count for packed evaluation".into(),
                actual: p.num_vars,
                cap: MAX_MASK_VARS,
            });
        }
        let (masks, coeffs) = p
            .terms
            .iter()
            .map(|(k, &c)| (k.iter().fold(0u64, |m, &i| m | (1 << i)), c))
            .unzip();
        Ok(Self {
            num_vars: p.num_vars,
            masks,
            coeffs,
        })
    }

    #[inline]
    pub fn eval(&self, assignment: u64) -> f64 {
        self.masks
            .iter()
            .zip(&self.coeffs)
            .map(|(&m, &c)| c * parity_sign(m & assignment))
            .sum()
    }
}
