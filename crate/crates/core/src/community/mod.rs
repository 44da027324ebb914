//! Community structure of the interaction graph.
//!
//! A vertex is a *boundary* vertex of its community when at least one of its
//! neighbours lives in another community; the remaining vertices form the
//! community's *core*. The number of boundary vertices is the number of
//! variables left after reduction.

mod louvain;
mod refine;

use std::io::{BufRead, Write};

pub use louvain::{detect_multilevel, modularity};
pub use refine::refine_boundary;

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommunityAssignment {
    membership: Vec<usize>,
    num_communities: usize,
    is_boundary: Vec<bool>,
}

impl CommunityAssignment {
    /// Build from an arbitrary labelling; ids are compacted to `0..k` in order
    /// of first appearance.
    pub fn from_membership(g: &Graph, membership: &[usize]) -> Result<Self> {
        if membership.len() != g.num_vertices() {
            return Err(Error::Dimension {
                expected: g.num_vertices(),
                actual: membership.len(),
            });
        }
        let (membership, num_communities) = compact(membership);
        let mut is_boundary = vec![false; membership.len()];
        for &(u, v) in g.edges() {
            if membership[u] != membership[v] {
                is_boundary[u] = true;
                is_boundary[v] = true;
            }
        }
        Ok(Self {
            membership,
            num_communities,
            is_boundary,
        })
    }

    pub fn singletons(g: &Graph) -> Self {
        let m: Vec<usize> = (0..g.num_vertices()).collect();
        Self::from_membership(g, &m).expect("length matches")
    }

    pub fn single(g: &Graph) -> Self {
        Self::from_membership(g, &vec![0; g.num_vertices()]).expect("length matches")
    }

    pub fn membership(&self) -> &[usize] {
        &self.membership
    }

    pub fn num_vertices(&self) -> usize {
        self.membership.len()
    }

    pub fn num_communities(&self) -> usize {
        self.num_communities
    }

    pub fn community_of(&self, v: usize) -> usize {
        self.membership[v]
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        self.is_boundary[v]
    }

    pub fn members(&self, c: usize) -> Vec<usize> {
        self.vertices_where(|v| self.membership[v] == c)
    }

    /// `B_c`, ascending.
    pub fn boundary_of(&self, c: usize) -> Vec<usize> {
        self.vertices_where(|v| self.membership[v] == c && self.is_boundary[v])
    }

    /// `T_c`, ascending.
    pub fn core_of(&self, c: usize) -> Vec<usize> {
        self.vertices_where(|v| self.membership[v] == c && !self.is_boundary[v])
    }

    /// `B`, the union of all community boundaries, ascending.
    pub fn global_boundary(&self) -> Vec<usize> {
        self.vertices_where(|v| self.is_boundary[v])
    }

    pub fn boundary_size(&self) -> usize {
        self.is_boundary.iter().filter(|&&b| b).count()
    }

    pub fn community_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.num_communities];
        for &c in &self.membership {
            sizes[c] += 1;
        }
        sizes
    }

    /// `max(|B|, max_c |B_c| + |T_c|)`.
    pub fn score(&self) -> usize {
        let largest = self.community_sizes().into_iter().max().unwrap_or(0);
        self.boundary_size().max(largest)
    }

    fn vertices_where(&self, pred: impl Fn(usize) -> bool) -> Vec<usize> {
        (0..self.membership.len()).filter(|&v| pred(v)).collect()
    }

    /// One `vertex community` line per vertex.
    pub fn write_membership<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for (v, c) in self.membership.iter().enumerate() {
            writeln!(out, "{v} {c}")?;
        }
        Ok(())
    }

    pub fn read_membership<R: BufRead>(g: &Graph, input: R) -> Result<Self> {
        let mut membership = vec![None; g.num_vertices()];
        for (idx, line) in input.lines().enumerate() {
            let line = line?;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let bad = |msg: String| Error::Parse { line: idx + 1, msg };
            let fields: Vec<&str> = t.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(bad("expected `vertex community`".into()));
            }
            let v: usize = fields[0].parse().map_err(|e| bad(format!("{e}")))?;
            let c: usize = fields[1].parse().map_err(|e| bad(format!("{e}")))?;
            let slot = membership
                .get_mut(v)
                .ok_or_else(|| bad(format!("vertex {v} out of range")))?;
            *slot = Some(c);
        }
        let membership: Vec<usize> = membership
            .into_iter()
            .enumerate()
            .map(|(v, c)| {
                c.ok_or(Error::Parse {
                    line: 0,
                    msg: format!("vertex {v} has no community"),
                })
            })
            .collect::<Result<_>>()?;
        Self::from_membership(g, &membership)
    }
}

/// `score_g` as a free function over a graph and an assignment.
pub fn score_g(g: &Graph, ca: &CommunityAssignment) -> usize {
    debug_assert_eq!(g.num_vertices(), ca.num_vertices());
    ca.score()
}

/// Renumber labels to `0..k` by first appearance.
pub(crate) fn compact(labels: &[usize]) -> (Vec<usize>, usize) {
    let mut map = std::collections::HashMap::new();
    let out = labels
        .iter()
        .map(|&l| {
            let next = map.len();
            *map.entry(l).or_insert(next)
        })
        .collect();
    (out, map.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::random_regular;

    #[test]
    fn single_community_has_no_boundary() {
        let g = random_regular(12, 3, 1).unwrap();
        let ca = CommunityAssignment::single(&g);
        assert_eq!(ca.boundary_size(), 0);
        assert_eq!(score_g(&g, &ca), 12);
        assert_eq!(ca.core_of(0).len(), 12);
    }

    #[test]
    fn singletons_are_all_boundary() {
        let g = random_regular(12, 3, 1).unwrap();
        let ca = CommunityAssignment::singletons(&g);
        assert_eq!(ca.boundary_size(), 12);
        assert_eq!(score_g(&g, &ca), 12);
    }

    #[test]
    fn ids_are_compacted() {
        let g = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        let ca = CommunityAssignment::from_membership(&g, &[7, 7, 3, 3]).unwrap();
        assert_eq!(ca.membership(), &[0, 0, 1, 1]);
        assert_eq!(ca.num_communities(), 2);
        assert_eq!(ca.boundary_size(), 0);
    }

    #[test]
    fn boundary_and_core_partition_vertices() {
        let g = Graph::new(5, [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let ca = CommunityAssignment::from_membership(&g, &[0, 0, 0, 1, 1]).unwrap();
        assert_eq!(ca.boundary_of(0), vec![2]);
        assert_eq!(ca.core_of(0), vec![0, 1]);
        assert_eq!(ca.boundary_of(1), vec![3]);
        assert_eq!(ca.core_of(1), vec![4]);
        assert_eq!(ca.global_boundary(), vec![2, 3]);
        assert_eq!(ca.score(), 3);
    }

    #[test]
    fn membership_file_round_trip() {
        let g = random_regular(10, 3, 4).unwrap();
        let ca = CommunityAssignment::from_membership(&g, &[0, 0, 1, 1, 2, 2, 0, 1, 2, 0]).unwrap();
        let mut buf = Vec::new();
        ca.write_membership(&mut buf).unwrap();
        let back = CommunityAssignment::read_membership(&g, buf.as_slice()).unwrap();
        assert_eq!(back, ca);
    }

    #[test]
    fn membership_file_must_cover_all_vertices() {
        let g = Graph::new(3, [(0, 1)]).unwrap();
        assert!(CommunityAssignment::read_membership(&g, "0 0\n1 0\n".as_bytes()).is_err());
    }
}
