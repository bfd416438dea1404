//! Small successive-shortest-path min-cost flow on a residual graph.

use std::collections::VecDeque;

const EPS: f64 = 1e-9;

#[derive(Debug, Clone)]
struct Edge {
    to: usize,
    cap: f64,
    cost: f64,
    flow: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct FlowGraph {
    adj: Vec<Vec<usize>>,
    edges: Vec<Edge>,
}

impl FlowGraph {
    pub fn new(nodes: usize) -> Self {
        Self {
            adj: vec![Vec::new(); nodes],
            edges: Vec::new(),
        }
    }

    /// Adds `from -> to` and its reverse; returns the forward edge id.
    pub fn add_edge(&mut self, from: usize, to: usize, cap: f64, cost: f64) -> usize {
        let id = self.edges.len();
        self.edges.push(Edge {
            to,
            cap,
            cost,
            flow: 0.0,
        });
        self.edges.push(Edge {
            to: from,
            cap: 0.0,
            cost: -cost,
            flow: 0.0,
        });
        self.adj[from].push(id);
        self.adj[to].push(id + 1);
        id
    }

    pub fn flow(&self, edge: usize) -> f64 {
        self.edges[edge].flow
    }

    pub fn set_cap(&mut self, edge: usize, cap: f64) {
        self.edges[edge].cap = cap;
    }

    pub fn cap(&self, edge: usize) -> f64 {
        self.edges[edge].cap
    }

    fn residual(&self, e: usize) -> f64 {
        self.edges[e].cap - self.edges[e].flow
    }

    /// Pushes up to `amount` from `s` to `t` along cheapest residual paths
    /// that do not pass through `t`. Flow already delivered to `t` keeps its
    /// last edge, so the flow stays min-cost for the current edge loads into
    /// `t`. Returns the amount actually sent.
    pub fn augment(&mut self, s: usize, t: usize, amount: f64) -> f64 {
        let n = self.adj.len();
        let mut sent = 0.0;
        while amount - sent > EPS {
            // Bellman-Ford with a queue; residual costs may be negative.
            let mut dist = vec![f64::INFINITY; n];
            let mut prev: Vec<Option<usize>> = vec![None; n];
            let mut queued = vec![false; n];
            let mut queue = VecDeque::new();
            dist[s] = 0.0;
            queue.push_back(s);
            queued[s] = true;
            while let Some(u) = queue.pop_front() {
                queued[u] = false;
                // Leaving the sink would move flow between fixed targets.
                if u == t {
                    continue;
                }
                for &e in &self.adj[u] {
                    if self.residual(e) <= EPS {
                        continue;
                    }
                    let v = self.edges[e].to;
                    let nd = dist[u] + self.edges[e].cost;
                    if nd < dist[v] - 1e-12 {
                        dist[v] = nd;
                        prev[v] = Some(e);
                        if !queued[v] {
                            queued[v] = true;
                            queue.push_back(v);
                        }
                    }
                }
            }
            if dist[t].is_infinite() {
                break;
            }
            let mut push = amount - sent;
            let mut v = t;
            while let Some(e) = prev[v] {
                push = push.min(self.residual(e));
                v = self.edges[e ^ 1].to;
            }
            let mut v = t;
            while let Some(e) = prev[v] {
                self.edges[e].flow += push;
                self.edges[e ^ 1].flow -= push;
                v = self.edges[e ^ 1].to;
            }
            sent += push;
        }
        sent
    }
}
