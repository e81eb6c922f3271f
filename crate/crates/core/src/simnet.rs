//! Message-level replay of `W` applications.
//!
//! In every synchronous round each node sends each stored coordinate to its
//! neighbours in that variable's subnet, then combines what it received.
//! Senders are processed in ascending id order, so every inbox lists
//! contributions by ascending sender, which is the order the matrix path
//! sums in. The two paths therefore agree bit for bit.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::comm::CommMatrix;
use crate::solver::{self, Exchange, QuadraticProblem, SolverConfig, SolverOutcome};
use crate::{Error, Result};

/// One scalar travelling along a subnet edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Message {
    pub from: usize,
    pub to: usize,
    pub variable: usize,
    pub component: usize,
    pub value: f64,
}

/// Coordinates held by one node and the messages it received this round.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeState {
    pub id: usize,
    /// Variable of each stored entry.
    pub variables: Vec<usize>,
    pub values: Vec<f64>,
    /// Per stored entry: `(sender, value)` in arrival order.
    pub inbox: Vec<Vec<(usize, f64)>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundLog {
    pub round: usize,
    /// `(sender, receiver, variable)` per message, in send order.
    pub messages: Vec<(usize, usize, usize)>,
    pub scalars: u64,
}

/// Synchronous network whose topology is given by the subnets of `W`.
#[derive(Debug, Clone)]
pub struct SimNetwork<'a> {
    w: &'a CommMatrix,
    nodes: Vec<NodeState>,
    round: usize,
}

impl<'a> SimNetwork<'a> {
    pub fn new(w: &'a CommMatrix) -> Self {
        let nodes = (0..w.num_nodes())
            .map(|id| {
                let variables: Vec<usize> = w.node_entry_vars(id).collect();
                let len = variables.len();
                NodeState { id, variables, values: vec![0.0; len], inbox: vec![Vec::new(); len] }
            })
            .collect();
        Self { w, nodes, round: 0 }
    }

    pub fn nodes(&self) -> &[NodeState] {
        &self.nodes
    }

    /// Distributes a compact stacked vector over the nodes.
    pub fn load(&mut self, x: &[f64]) -> Result<()> {
        if x.len() != self.w.compact_len() {
            return Err(Error::DimensionMismatch { expected: self.w.compact_len(), found: x.len() });
        }
        for node in &mut self.nodes {
            node.values.copy_from_slice(&x[self.w.node_range(node.id)]);
        }
        Ok(())
    }

    /// Gathers node values into a compact stacked vector.
    pub fn gather(&self) -> Vec<f64> {
        self.nodes.iter().flat_map(|n| n.values.iter().copied()).collect()
    }

    /// Puts a message into the receiver's inbox after checking that it
    /// travels along an edge of its variable's subnet.
    pub fn deliver(&mut self, msg: Message) -> Result<()> {
        let block = self.w.blocks().get(msg.variable).ok_or_else(|| {
            Error::ProtocolViolation(format!("message for unknown variable {}", msg.variable))
        })?;
        if msg.from >= self.nodes.len() || block.neighbors(msg.from).binary_search(&msg.to).is_err() {
            return Err(Error::ProtocolViolation(format!(
                "({}, {}) is not an edge of the subnet of variable {}",
                msg.from, msg.to, msg.variable
            )));
        }
        let Some(entry) = block.compact_index(msg.to, msg.component) else {
            return Err(Error::ProtocolViolation(format!(
                "node {} does not store component {} of variable {}",
                msg.to, msg.component, msg.variable
            )));
        };
        let local = entry - self.w.node_range(msg.to).start;
        self.nodes[msg.to].inbox[local].push((msg.from, msg.value));
        Ok(())
    }

    /// One synchronous round replacing every value `x_i` by `(W x)_i`.
    pub fn step(&mut self) -> Result<RoundLog> {
        let mut outgoing = Vec::new();
        for node in &self.nodes {
            let range = self.w.node_range(node.id);
            for (local, &l) in node.variables.iter().enumerate() {
                let block = &self.w.blocks()[l];
                let component = (range.start + local) - block.compact_index(node.id, 0).expect("stored variable");
                for &to in block.neighbors(node.id) {
                    outgoing.push(Message { from: node.id, to, variable: l, component, value: node.values[local] });
                }
            }
        }
        let mut messages = Vec::with_capacity(outgoing.len());
        for msg in outgoing {
            self.deliver(msg)?;
            messages.push((msg.from, msg.to, msg.variable));
        }
        for node in &mut self.nodes {
            for (local, &l) in node.variables.iter().enumerate() {
                let block = &self.w.blocks()[l];
                let inbox = core::mem::take(&mut node.inbox[local]);
                let mut acc = inbox.len() as f64 * node.values[local];
                for (_, v) in inbox {
                    acc -= v;
                }
                node.values[local] = block.scale() * acc;
            }
        }
        let log = RoundLog { round: self.round, scalars: messages.len() as u64, messages };
        self.round += 1;
        Ok(log)
    }
}

/// Applies `W` to `x` by message passing.
pub fn simulate_w_apply(w: &CommMatrix, x: &[f64]) -> Result<(Vec<f64>, RoundLog)> {
    let mut net = SimNetwork::new(w);
    net.load(x)?;
    let log = net.step()?;
    Ok((net.gather(), log))
}

/// [`Exchange`] running every application as a simulated round and checking
/// it against the matrix path.
pub struct SimExchange<'a> {
    net: SimNetwork<'a>,
    reference: Vec<f64>,
    keep_logs: bool,
    logs: Vec<RoundLog>,
    scalars: u64,
}

impl<'a> SimExchange<'a> {
    /// With `keep_logs`, every round's message list is retained.
    pub fn new(w: &'a CommMatrix, keep_logs: bool) -> Self {
        Self { net: SimNetwork::new(w), reference: vec![0.0; w.compact_len()], keep_logs, logs: Vec::new(), scalars: 0 }
    }

    pub fn logs(&self) -> &[RoundLog] {
        &self.logs
    }

    pub fn rounds(&self) -> usize {
        self.net.round
    }

    /// Scalars summed over all round logs.
    pub fn total_scalars(&self) -> u64 {
        self.scalars
    }
}

impl Exchange for SimExchange<'_> {
    /// # Panics
    ///
    /// If the simulated result differs from the matrix product in any bit.
    fn apply(&mut self, x: &[f64], out: &mut [f64]) -> Result<u64> {
        self.net.load(x)?;
        let log = self.net.step()?;
        for (o, v) in out.iter_mut().zip(self.net.nodes.iter().flat_map(|n| n.values.iter())) {
            *o = *v;
        }
        self.net.w.apply_compact(x, &mut self.reference)?;
        assert!(
            out.iter().zip(&self.reference).all(|(a, b)| a.to_bits() == b.to_bits()),
            "simulated W application diverged from the matrix path in round {}",
            log.round
        );
        let scalars = log.scalars;
        self.scalars += scalars;
        if self.keep_logs {
            self.logs.push(log);
        }
        Ok(scalars)
    }
}

/// Outcome of a simulated run with its communication record.
#[derive(Debug, Clone)]
pub struct DistributedRun {
    pub outcome: SolverOutcome,
    pub logs: Vec<RoundLog>,
    pub total_scalars: u64,
}

/// Runs the configured solver with every `W` application simulated.
pub fn run_distributed_solver(
    p: &QuadraticProblem,
    w: &CommMatrix,
    config: &SolverConfig,
    keep_logs: bool,
) -> Result<DistributedRun> {
    let mut ex = SimExchange::new(w, keep_logs);
    let outcome = solver::solve_with(p, w, &mut ex, config)?;
    Ok(DistributedRun { outcome, total_scalars: ex.total_scalars(), logs: ex.logs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::partition::Partition;

    fn example() -> CommMatrix {
        let g = Graph::new(3, &[(0, 1), (0, 2)]).unwrap();
        let p = Partition::new(3, 2, vec![vec![0, 1], vec![0], vec![1]]).unwrap();
        CommMatrix::from_partition(&g, &p).unwrap()
    }

    #[test]
    fn rejects_messages_off_the_subnet() {
        let w = example();
        let mut net = SimNetwork::new(&w);
        let bad_edge = Message { from: 1, to: 2, variable: 0, component: 0, value: 1.0 };
        assert!(matches!(net.deliver(bad_edge), Err(Error::ProtocolViolation(_))));
        let not_stored = Message { from: 0, to: 1, variable: 1, component: 0, value: 1.0 };
        assert!(matches!(net.deliver(not_stored), Err(Error::ProtocolViolation(_))));
        let ok = Message { from: 0, to: 1, variable: 0, component: 0, value: 1.0 };
        assert!(net.deliver(ok).is_ok());
    }

    #[test]
    fn consensus_state_still_costs_messages() {
        let w = example();
        let (out, log) = simulate_w_apply(&w, &[5.0, -1.0, 5.0, -1.0]).unwrap();
        assert_eq!(out, vec![0.0; 4]);
        assert_eq!(log.scalars, 4);
        assert_eq!(log.messages, vec![(0, 1, 0), (0, 2, 1), (1, 0, 0), (2, 0, 1)]);
    }
}
