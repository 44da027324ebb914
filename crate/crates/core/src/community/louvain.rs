use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::CommunityAssignment;
use crate::graph::Graph;

/// Strict-improvement threshold for a single move, in units of edge weight.
const GAIN_EPS: f64 = 1e-10;

/// Weighted graph at one level of the multilevel hierarchy. Self-loop weight
/// holds the edges collapsed inside a super-vertex.
struct Level {
    adj: Vec<Vec<(usize, f64)>>,
    self_loop: Vec<f64>,
    strength: Vec<f64>,
}

impl Level {
    fn from_graph(g: &Graph) -> Self {
        let n = g.num_vertices();
        let mut adj = vec![Vec::new(); n];
        let mut strength = vec![0.0; n];
        for (u, v, w) in g.weighted_edges() {
            adj[u].push((v, w));
            adj[v].push((u, w));
            strength[u] += w;
            strength[v] += w;
        }
        Self {
            adj,
            self_loop: vec![0.0; n],
            strength,
        }
    }

    fn len(&self) -> usize {
        self.adj.len()
    }

    fn total_strength(&self) -> f64 {
        self.strength.iter().sum()
    }

    /// Collapse every community into one vertex.
    fn aggregate(&self, comm: &[usize], k: usize) -> Self {
        let mut self_loop = vec![0.0; k];
        let mut strength = vec![0.0; k];
        let mut maps: Vec<std::collections::BTreeMap<usize, f64>> = vec![Default::default(); k];
        for u in 0..self.len() {
            let cu = comm[u];
            self_loop[cu] += self.self_loop[u];
            strength[cu] += self.strength[u];
            for &(v, w) in &self.adj[u] {
                let cv = comm[v];
                if cu == cv {
                    // Each internal edge is seen from both ends.
                    self_loop[cu] += w / 2.0;
                } else {
                    *maps[cu].entry(cv).or_insert(0.0) += w;
                }
            }
        }
        let adj = maps.into_iter().map(|m| m.into_iter().collect()).collect();
        Self {
            adj,
            self_loop,
            strength,
        }
    }

    /// Local-moving phase. Returns the community labels and whether any
    /// vertex changed community.
    fn local_moves(&self, rng: &mut ChaCha8Rng) -> (Vec<usize>, bool) {
        let n = self.len();
        let m2 = self.total_strength();
        let mut comm: Vec<usize> = (0..n).collect();
        let mut tot = self.strength.clone();
        let mut links = vec![0.0; n];
        let mut touched: Vec<usize> = Vec::new();
        let mut order: Vec<usize> = (0..n).collect();
        let mut any_move = false;

        loop {
            order.shuffle(rng);
            let mut moved = false;
            for &i in &order {
                let ki = self.strength[i];
                let old = comm[i];
                for &(j, w) in &self.adj[i] {
                    let c = comm[j];
                    if links[c] == 0.0 && !touched.contains(&c) {
                        touched.push(c);
                    }
                    links[c] += w;
                }
                tot[old] -= ki;
                let gain = |c: usize, links: &[f64], tot: &[f64]| links[c] - tot[c] * ki / m2;
                let mut best = old;
                let mut best_gain = gain(old, &links, &tot);
                for &c in &touched {
                    let g = gain(c, &links, &tot);
                    if g > best_gain + GAIN_EPS {
                        best = c;
                        best_gain = g;
                    }
                }
                tot[best] += ki;
                comm[i] = best;
                if best != old {
                    moved = true;
                }
                for &c in &touched {
                    links[c] = 0.0;
                }
                touched.clear();
            }
            if !moved {
                break;
            }
            any_move = true;
        }
        (comm, any_move)
    }
}

/// Multilevel (Louvain) modularity maximization at resolution 1.
///
/// Vertices start in singleton communities. Single-vertex moves are applied
/// while some move strictly increases modularity, in a scan order reshuffled
/// from `seed` at every pass; then communities are contracted and the process
/// repeats on the contracted graph until neither step helps.
pub fn detect_multilevel(g: &Graph, seed: u64) -> CommunityAssignment {
    let mut membership: Vec<usize> = (0..g.num_vertices()).collect();
    let mut level = Level::from_graph(g);
    if level.total_strength() <= 0.0 {
        return CommunityAssignment::singletons(g);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let (comm, moved) = level.local_moves(&mut rng);
        if !moved {
            break;
        }
        let (comm, k) = super::compact(&comm);
        for c in membership.iter_mut() {
            *c = comm[*c];
        }
        if k == level.len() {
            break;
        }
        level = level.aggregate(&comm, k);
    }
    CommunityAssignment::from_membership(g, &membership).expect("length matches")
}

/// Newman modularity `sum_c [ L_c / m - (d_c / 2m)^2 ]`; zero for edgeless graphs.
pub fn modularity(g: &Graph, membership: &[usize]) -> f64 {
    let m: f64 = g.weighted_edges().map(|(_, _, w)| w).sum();
    if m == 0.0 {
        return 0.0;
    }
    let k = membership.iter().copied().max().map_or(0, |c| c + 1);
    let mut internal = vec![0.0; k];
    let mut degree = vec![0.0; k];
    for (u, v, w) in g.weighted_edges() {
        degree[membership[u]] += w;
        degree[membership[v]] += w;
        if membership[u] == membership[v] {
            internal[membership[u]] += w;
        }
    }
    internal
        .iter()
        .zip(&degree)
        .map(|(l, d)| l / m - (d / (2.0 * m)).powi(2))
        .sum()
}
