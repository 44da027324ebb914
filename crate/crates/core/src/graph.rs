//! Undirected simple graphs, the MaxCut energy, and the edge-list format.
//!
//! Edge-list format: first line `n m`, then `m` lines `u v` (or `u v w` for
//! weighted graphs), vertices 0-based. Lines starting with `#` or `c ` are
//! comments.

use std::collections::BTreeSet;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::pubo::PuboPolynomial;

#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    num_vertices: usize,
    /// Sorted, each pair stored as `(min, max)`.
    edges: Vec<(usize, usize)>,
    /// Parallel to `edges`; `None` means every weight is 1.
    weights: Option<Vec<f64>>,
}

impl Graph {
    pub fn new<I>(num_vertices: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let weighted = edges.into_iter().map(|(u, v)| (u, v, 1.0));
        let mut g = Self::build(num_vertices, weighted)?;
        g.weights = None;
        Ok(g)
    }

    pub fn with_weights<I>(num_vertices: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        Self::build(num_vertices, edges)
    }

    fn build<I>(num_vertices: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut list: Vec<((usize, usize), f64)> = Vec::new();
        for (u, v, w) in edges {
            if u >= num_vertices || v >= num_vertices {
                return Err(Error::Instance(format!(
                    "edge ({u}, {v}) out of range for {num_vertices} vertices"
                )));
            }
            if u == v {
                return Err(Error::Instance(format!("self-loop at vertex {u}")));
            }
            if !w.is_finite() {
                return Err(Error::Instance(format!("edge ({u}, {v}) has weight {w}")));
            }
            list.push(((u.min(v), u.max(v)), w));
        }
        list.sort_by_key(|e| e.0);
        if let Some(w) = list.windows(2).find(|w| w[0].0 == w[1].0) {
            let (u, v) = w[0].0;
            return Err(Error::Instance(format!("duplicate edge ({u}, {v})")));
        }
        let (edges, weights) = list.into_iter().unzip();
        Ok(Self {
            num_vertices,
            edges,
            weights: Some(weights),
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_weighted(&self) -> bool {
        self.weights.is_some()
    }

    pub fn weight(&self, edge_index: usize) -> f64 {
        self.weights.as_ref().map_or(1.0, |w| w[edge_index])
    }

    pub fn weighted_edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.edges
            .iter()
            .enumerate()
            .map(|(i, &(u, v))| (u, v, self.weight(i)))
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.num_vertices];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.num_vertices];
        for &(u, v) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        d
    }

    /// `Some(k)` if every vertex has degree `k`.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.degrees();
        let first = *d.first()?;
        d.iter().all(|&x| x == first).then_some(first)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    /// Number of edges whose endpoints carry opposite spins.
    pub fn cut_size(&self, spins: &[i8]) -> f64 {
        self.weighted_edges()
            .filter(|&(u, v, _)| spins[u] != spins[v])
            .map(|(_, _, w)| w)
            .sum()
    }

    /// MaxCut as QUBO: `sum_edges w/2 * s_u s_v - sum w / 2`, minus the cut weight.
    pub fn maxcut_to_qubo(&self) -> PuboPolynomial {
        let mut p = PuboPolynomial::new(self.num_vertices);
        let total: f64 = self.weighted_edges().map(|(_, _, w)| w).sum();
        p.add_term_sorted(Vec::new(), -total / 2.0);
        for (u, v, w) in self.weighted_edges() {
            p.add_term_sorted(vec![u, v], w / 2.0);
        }
        p
    }

    pub fn write_edge_list<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{} {}", self.num_vertices, self.edges.len())?;
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            match &self.weights {
                Some(w) => writeln!(out, "{u} {v} {}", w[i])?,
                None => writeln!(out, "{u} {v}")?,
            }
        }
        Ok(())
    }

    pub fn to_edge_list(&self) -> String {
        let mut buf = Vec::new();
        self.write_edge_list(&mut buf).expect("writing to a Vec");
        String::from_utf8(buf).expect("ascii output")
    }

    pub fn read_edge_list<R: BufRead>(input: R) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        let mut any_weight = false;
        for (idx, line) in input.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') || t == "c" || t.starts_with("c ") {
                continue;
            }
            let fields: Vec<&str> = t.split_whitespace().collect();
            let parse_usize = |s: &str| {
                s.parse::<usize>().map_err(|e| Error::Parse {
                    line: lineno,
                    msg: format!("bad integer {s:?}: {e}"),
                })
            };
            match header {
                None => {
                    if fields.len() != 2 {
                        return Err(Error::Parse {
                            line: lineno,
                            msg: "expected header `n m`".into(),
                        });
                    }
                    header = Some((parse_usize(fields[0])?, parse_usize(fields[1])?));
                }
                Some(_) => {
                    if !(2..=3).contains(&fields.len()) {
                        return Err(Error::Parse {
                            line: lineno,
                            msg: "expected `u v [w]`".into(),
                        });
                    }
                    let w = match fields.get(2) {
                        Some(s) => {
                            any_weight = true;
                            s.parse::<f64>().map_err(|e| Error::Parse {
                                line: lineno,
                                msg: format!("bad weight {s:?}: {e}"),
                            })?
                        }
                        None => 1.0,
                    };
                    edges.push((parse_usize(fields[0])?, parse_usize(fields[1])?, w));
                }
            }
        }
        let (n, m) = header.ok_or(Error::Parse {
            line: 0,
            msg: "missing header".into(),
        })?;
        if edges.len() != m {
            return Err(Error::Parse {
                line: 0,
                msg: format!("header announces {m} edges, found {}", edges.len()),
            });
        }
        if any_weight {
            Self::with_weights(n, edges)
        } else {
            Self::new(n, edges.into_iter().map(|(u, v, _)| (u, v)))
        }
    }

    pub fn from_edge_list_str(text: &str) -> Result<Self> {
        Self::read_edge_list(text.as_bytes())
    }

    pub fn vertex_set(&self) -> BTreeSet<usize> {
        (0..self.num_vertices).collect()
    }
}
