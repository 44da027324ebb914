use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::CommunityAssignment;
use crate::graph::Graph;

/// Incrementally maintained boundary bookkeeping for single-vertex moves.
struct BoundaryState<'g> {
    adj: &'g [Vec<usize>],
    membership: Vec<usize>,
    sizes: Vec<usize>,
    /// Neighbours in a different community.
    cross: Vec<usize>,
    boundary: usize,
}

impl<'g> BoundaryState<'g> {
    fn new(adj: &'g [Vec<usize>], ca: &CommunityAssignment) -> Self {
        let membership = ca.membership().to_vec();
        let cross: Vec<usize> = adj
            .iter()
            .enumerate()
            .map(|(v, nb)| nb.iter().filter(|&&u| membership[u] != membership[v]).count())
            .collect();
        let boundary = cross.iter().filter(|&&c| c > 0).count();
        Self {
            adj,
            membership,
            sizes: ca.community_sizes(),
            cross,
            boundary,
        }
    }

    fn score(&self) -> usize {
        let largest = self.sizes.iter().copied().max().unwrap_or(0);
        self.boundary.max(largest)
    }

    fn relabel(&mut self, v: usize, to: usize) {
        let from = self.membership[v];
        if from == to {
            return;
        }
        let was_boundary = |x: usize| x > 0;
        let mut cross_v = 0;
        for &u in &self.adj[v] {
            let cu = self.membership[u];
            let before = was_boundary(self.cross[u]);
            if cu == from {
                self.cross[u] += 1;
            }
            if cu == to {
                self.cross[u] -= 1;
            }
            if cu != to {
                cross_v += 1;
            }
            match (before, was_boundary(self.cross[u])) {
                (false, true) => self.boundary += 1,
                (true, false) => self.boundary -= 1,
                _ => {}
            }
        }
        match (was_boundary(self.cross[v]), was_boundary(cross_v)) {
            (false, true) => self.boundary += 1,
            (true, false) => self.boundary -= 1,
            _ => {}
        }
        self.cross[v] = cross_v;
        self.membership[v] = to;
        self.sizes[from] -= 1;
        self.sizes[to] += 1;
    }

    #[cfg(test)]
    fn boundary_flags(&self) -> Vec<bool> {
        self.cross.iter().map(|&c| c > 0).collect()
    }
}

/// Greedy local search on the boundary score `max(|B|, max_c |c|)`.
///
/// Vertices are scanned in an order reshuffled from `seed` at every pass. For
/// each vertex the non-empty communities are tried in ascending id order and
/// the first relabel that strictly lowers the score is kept. The search stops
/// after a full pass without an accepted move. Communities emptied on the way
/// are dropped and the ids compacted.
pub fn refine_boundary(g: &Graph, ca: &CommunityAssignment, seed: u64) -> CommunityAssignment {
    let adj = g.adjacency();
    let mut state = BoundaryState::new(&adj, ca);
    run(&mut state, seed, |_| {});
    CommunityAssignment::from_membership(g, &state.membership).expect("length matches")
}

fn run(state: &mut BoundaryState<'_>, seed: u64, mut on_accept: impl FnMut(&BoundaryState<'_>)) {
    let n = state.membership.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    let mut score = state.score();
    loop {
        order.shuffle(&mut rng);
        let mut improved = false;
        for &v in &order {
            let home = state.membership[v];
            for target in 0..state.sizes.len() {
                if target == home || state.sizes[target] == 0 {
                    continue;
                }
                state.relabel(v, target);
                let candidate = state.score();
                if candidate < score {
                    score = candidate;
                    improved = true;
                    on_accept(state);
                    break;
                }
                state.relabel(v, home);
            }
        }
        if !improved {
            break;
        }
    }
}
