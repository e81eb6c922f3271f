#![allow(dead_code)]

use partopt_core::{Graph, Partition};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Connected graph: a random spanning tree plus each remaining pair with
/// probability `p`.
pub fn random_connected(rng: &mut ChaCha8Rng, m: usize, p: f64) -> Graph {
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(rng);
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
    Graph::new(m, &edges).unwrap()
}

/// Any graph, possibly disconnected.
pub fn random_graph(rng: &mut ChaCha8Rng, m: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            if rng.random_bool(p) {
                edges.push((i, j));
            }
        }
    }
    Graph::new(m, &edges).unwrap()
}

/// Partition whose subnets are connected: variable 0 is used everywhere,
/// every other variable grows a random connected member set.
pub fn random_partition(rng: &mut ChaCha8Rng, g: &Graph, n: usize) -> Partition {
    let m = g.num_vertices();
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
    Partition::new(m, n, deps).unwrap()
}

pub fn random_instance(seed: u64, max_m: usize, max_n: usize) -> (Graph, Partition) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = rng.random_range(2..=max_m);
    let n = rng.random_range(1..=max_n);
    let p = rng.random_range(0.1..0.6);
    let g = random_connected(&mut rng, m, p);
    let part = random_partition(&mut rng, &g, n);
    (g, part)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
