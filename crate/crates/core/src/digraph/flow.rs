//! Dinic max-flow on small integer networks.

use std::collections::VecDeque;

#[derive(Clone, Debug)]
struct Arc {
    to: usize,
    rev: usize,
    cap: i64,
}

#[derive(Clone, Debug)]
pub(crate) struct FlowNetwork {
    adj: Vec<Vec<Arc>>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

/// Handle to an arc added with [`FlowNetwork::add_arc`].
#[derive(Clone, Copy, Debug)]
pub(crate) struct ArcRef {
    from: usize,
    idx: usize,
    cap: i64,
}

impl FlowNetwork {
    pub fn new(n: usize) -> Self {
        FlowNetwork {
            adj: vec![Vec::new(); n],
            level: vec![0; n],
            iter: vec![0; n],
        }
    }

    pub fn add_arc(&mut self, from: usize, to: usize, cap: i64) -> ArcRef {
        let idx = self.adj[from].len();
        let rev = self.adj[to].len() + usize::from(from == to);
        self.adj[from].push(Arc { to, rev, cap });
        self.adj[to].push(Arc { to: from, rev: idx, cap: 0 });
        ArcRef { from, idx, cap }
    }

    pub fn flow_on(&self, a: ArcRef) -> i64 {
        a.cap - self.adj[a.from][a.idx].cap
    }

    fn bfs(&mut self, s: usize) {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            for a in &self.adj[v] {
                if a.cap > 0 && self.level[a.to] < 0 {
                    self.level[a.to] = self.level[v] + 1;
                    q.push_back(a.to);
                }
            }
        }
    }

    fn dfs(&mut self, v: usize, t: usize, f: i64) -> i64 {
        if v == t {
            return f;
        }
        while self.iter[v] < self.adj[v].len() {
            let i = self.iter[v];
            let (to, cap) = (self.adj[v][i].to, self.adj[v][i].cap);
            if cap > 0 && self.level[v] < self.level[to] {
                let d = self.dfs(to, t, f.min(cap));
                if d > 0 {
                    self.adj[v][i].cap -= d;
                    let rev = self.adj[v][i].rev;
                    self.adj[to][rev].cap += d;
                    return d;
                }
            }
            self.iter[v] += 1;
        }
        0
    }

    /// Pushes flow from `s` to `t` until `limit` is reached or no augmenting
    /// path remains; returns the amount pushed.
    pub fn max_flow(&mut self, s: usize, t: usize, limit: i64) -> i64 {
        let mut total = 0;
        while total < limit {
            self.bfs(s);
            if self.level[t] < 0 {
                break;
            }
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let f = self.dfs(s, t, limit - total);
                if f == 0 {
                    break;
                }
                total += f;
                if total >= limit {
                    break;
                }
            }
        }
        total
    }

    /// Nodes reachable from `s` in the residual network.
    pub fn residual_reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for a in &self.adj[v] {
                if a.cap > 0 && !seen[a.to] {
                    seen[a.to] = true;
                    stack.push(a.to);
                }
            }
        }
        seen
    }
}

/// Feasible circulation with lower and upper bounds on arcs.
pub(crate) struct Circulation {
    n: usize,
    arcs: Vec<(usize, usize, i64, i64)>,
}

impl Circulation {
    pub fn new(n: usize) -> Self {
        Circulation { n, arcs: Vec::new() }
    }

    pub fn add(&mut self, from: usize, to: usize, lower: i64, upper: i64) -> usize {
        self.arcs.push((from, to, lower, upper));
        self.arcs.len() - 1
    }

    /// Returns per-arc flows of some feasible circulation, if one exists.
    pub fn solve(&self) -> Option<Vec<i64>> {
        if self.arcs.iter().any(|&(_, _, l, u)| l > u) {
            return None;
        }
        let mut net = FlowNetwork::new(self.n + 2);
        let (s, t) = (self.n, self.n + 1);
        let mut excess = vec![0i64; self.n];
        let mut refs = Vec::with_capacity(self.arcs.len());
        for &(a, b, l, u) in &self.arcs {
            refs.push(net.add_arc(a, b, u - l));
            excess[b] += l;
            excess[a] -= l;
        }
        let mut need = 0;
        for (v, &ex) in excess.iter().enumerate() {
            if ex > 0 {
                net.add_arc(s, v, ex);
                need += ex;
            } else if ex < 0 {
                net.add_arc(v, t, -ex);
            }
        }
        if net.max_flow(s, t, need) < need {
            return None;
        }
        Some(
            self.arcs
                .iter()
                .zip(&refs)
                .map(|(&(_, _, l, _), &r)| l + net.flow_on(r))
                .collect(),
        )
    }
}
