//! Instances shared by the experiments and the acceptance suite.

use partopt_core::graph::{self, RingCliqueParams};
use partopt_core::partition::crown_partition;
use partopt_core::{CommMatrix, Graph, Partition, Result};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Star on three nodes; node 0 needs both variables, node 1 only the
/// first, node 2 only the second.
pub fn example_2_2() -> (Graph, Partition) {
    let g = Graph::new(3, &[(0, 1), (0, 2)]).expect("valid edges");
    let p = Partition::new(3, 2, vec![vec![0, 1], vec![0], vec![1]]).expect("valid deps");
    (g, p)
}

/// Ring of cliques with the crown partition and its communication matrix.
pub fn ring_clique_instance(n: usize, k: usize) -> Result<(Graph, Partition, CommMatrix)> {
    let params = RingCliqueParams::new(n, k)?;
    let g = graph::ring_of_cliques(params)?;
    let part = crown_partition(params)?;
    let w = CommMatrix::from_partition(&g, &part)?;
    Ok((g, part, w))
}

/// Random connected graph on at most `max_m` nodes with a random partition
/// of at most `max_n` variables whose subnets are all connected.
pub fn random_instance(seed: u64, max_m: usize, max_n: usize) -> (Graph, Partition) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = rng.random_range(2..=max_m.max(2));
    let n = rng.random_range(1..=max_n.max(1));
    let p = rng.random_range(0.1..0.6);

    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(&mut rng);
    let mut edges = Vec::new();
    for t in 1..m {
        let parent = order[rng.random_range(0..t)];
        edges.push((parent.min(order[t]), parent.max(order[t])));
    }
    for i in 0..m {
        for j in i + 1..m {
            if !edges.contains(&(i, j)) && rng.random_bool(p) {
                edges.push((i, j));
            }
        }
    }
    let g = Graph::new(m, &edges).expect("generated edges are valid");

    // variable 0 is used everywhere so no node is left without variables
    let mut deps = vec![vec![0]; m];
    for l in 1..n {
        let target = rng.random_range(1..=m);
        let mut members = vec![rng.random_range(0..m)];
        while members.len() < target {
            let frontier: Vec<usize> = members
                .iter()
                .flat_map(|&i| g.neighbors(i).iter().copied())
                .filter(|j| !members.contains(j))
                .collect();
            if frontier.is_empty() {
                break;
            }
            members.push(frontier[rng.random_range(0..frontier.len())]);
        }
        for i in members {
            deps[i].push(l);
        }
    }
    (g, Partition::new(m, n, deps).expect("generated deps are valid"))
}
