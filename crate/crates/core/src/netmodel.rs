//! Single-source acyclic multigraph networks, edge order, cuts and builders.
//!
//! Edge ids are dense and, for acyclic inputs, assigned in the canonical total
//! order: edges are layered by the longest-path depth of their tail, and ties
//! are broken by `(tail, head, multiplicity)`. All word coordinates refer to
//! edges through this order.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;

/// Edge count above which cut enumeration refuses to run.
pub const MAX_CUT_EDGES: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VertexKind {
    Source,
    Intermediate,
    Terminal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Vertex {
    pub id: VertexId,
    pub kind: VertexKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    pub tail: VertexId,
    pub head: VertexId,
    /// Distinguishes parallel edges between the same pair of vertices.
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    name: String,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    source: VertexId,
    terminals: Vec<VertexId>,
    in_edges: Vec<Vec<EdgeId>>,
    out_edges: Vec<Vec<EdgeId>>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct EdgeCut {
    pub edges: Vec<EdgeId>,
    pub terminal: VertexId,
}

/// A structural condition a network fails to satisfy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Cycle,
    NoTerminal,
    SourceIsTerminal,
    TerminalUnreachable(VertexId),
    Disconnected {
        vertex: VertexId,
        reachable_from_source: bool,
        reaches_terminal: bool,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Cycle => write!(f, "the graph contains a directed cycle"),
            Violation::NoTerminal => write!(f, "no terminal given"),
            Violation::SourceIsTerminal => write!(f, "the source is also a terminal"),
            Violation::TerminalUnreachable(t) => {
                write!(f, "terminal {t} is not reachable from the source")
            }
            Violation::Disconnected {
                vertex,
                reachable_from_source,
                reaches_terminal,
            } => {
                let mut parts = Vec::new();
                if !reachable_from_source {
                    parts.push("not reachable from the source");
                }
                if !reaches_terminal {
                    parts.push("reaches no terminal");
                }
                write!(f, "intermediate vertex {vertex} is {}", parts.join(" and "))
            }
        }
    }
}

impl Network {
    /// Builds a network on vertices `0..vertex_count` from `(tail, head)` pairs.
    ///
    /// Parallel edges get multiplicity indices in input order. If the graph is
    /// acyclic the edges are renumbered into canonical order; otherwise they
    /// keep input order so that `validate_network` can report the cycle.
    pub fn from_edges(
        name: impl Into<String>,
        vertex_count: usize,
        edges: &[(VertexId, VertexId)],
        source: VertexId,
        terminals: &[VertexId],
    ) -> Result<Self> {
        let bad = |v: VertexId| v >= vertex_count;
        if bad(source) || terminals.iter().any(|&t| bad(t)) {
            return Err(Error::InvalidNetwork("vertex id out of range".into()));
        }
        if let Some(&(t, h)) = edges.iter().find(|(t, h)| bad(*t) || bad(*h)) {
            return Err(Error::InvalidNetwork(format!(
                "edge ({t}, {h}) references a missing vertex"
            )));
        }
        let mut terminals = terminals.to_vec();
        terminals.sort_unstable();
        terminals.dedup();

        let vertices = (0..vertex_count)
            .map(|id| Vertex {
                id,
                kind: if id == source {
                    VertexKind::Source
                } else if terminals.contains(&id) {
                    VertexKind::Terminal
                } else {
                    VertexKind::Intermediate
                },
            })
            .collect();

        let mut seen: BTreeMap<(VertexId, VertexId), usize> = BTreeMap::new();
        let raw: Vec<Edge> = edges
            .iter()
            .enumerate()
            .map(|(id, &(tail, head))| {
                let m = seen.entry((tail, head)).or_insert(0);
                let multiplicity = *m;
                *m += 1;
                Edge {
                    id,
                    tail,
                    head,
                    multiplicity,
                }
            })
            .collect();

        let mut net = Network {
            name: name.into(),
            vertices,
            edges: raw,
            source,
            terminals,
            in_edges: Vec::new(),
            out_edges: Vec::new(),
        };
        if let Ok(order) = edge_order(&net) {
            net.edges = order
                .iter()
                .enumerate()
                .map(|(id, &old)| Edge {
                    id,
                    ..net.edges[old]
                })
                .collect();
        }
        net.rebuild_adjacency();
        Ok(net)
    }

    fn rebuild_adjacency(&mut self) {
        let n = self.vertices.len();
        self.in_edges = vec![Vec::new(); n];
        self.out_edges = vec![Vec::new(); n];
        for e in &self.edges {
            self.out_edges[e.tail].push(e.id);
            self.in_edges[e.head].push(e.id);
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn terminals(&self) -> &[VertexId] {
        &self.terminals
    }

    /// Incoming edges of `v`, ascending by id.
    pub fn in_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.in_edges[v]
    }

    /// Outgoing edges of `v`, ascending by id.
    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out_edges[v]
    }

    /// `deg⁺(v)`: number of incoming edges.
    pub fn indegree(&self, v: VertexId) -> usize {
        self.in_edges[v].len()
    }

    /// `deg⁻(v)`: number of outgoing edges.
    pub fn outdegree(&self, v: VertexId) -> usize {
        self.out_edges[v].len()
    }

    pub fn intermediates(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices
            .iter()
            .filter(|v| v.kind == VertexKind::Intermediate)
            .map(|v| v.id)
    }

    pub fn is_simple(&self) -> bool {
        self.terminals.len() == 1
    }

    /// `Some((x, y))` when every source-terminal path has length two, with
    /// `x[k]` source edges into and `y[k]` terminal edges out of the `k`-th
    /// intermediate vertex.
    pub fn two_level_shape(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        if !self.is_simple() {
            return None;
        }
        let t = self.terminals[0];
        let (mut x, mut y) = (Vec::new(), Vec::new());
        for v in self.intermediates() {
            let ins_ok = self.in_edges[v]
                .iter()
                .all(|&e| self.edges[e].tail == self.source);
            let outs_ok = self.out_edges[v].iter().all(|&e| self.edges[e].head == t);
            if !ins_ok || !outs_ok {
                return None;
            }
            x.push(self.indegree(v));
            y.push(self.outdegree(v));
        }
        let direct = self
            .edges
            .iter()
            .any(|e| e.tail == self.source && e.head == t);
        if direct || x.is_empty() {
            return None;
        }
        Some((x, y))
    }

    fn reach_forward(&self, from: VertexId, removed: impl Fn(EdgeId) -> bool) -> Vec<bool> {
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(v) = stack.pop() {
            for &e in &self.out_edges[v] {
                if removed(e) {
                    continue;
                }
                let h = self.edges[e].head;
                if !seen[h] {
                    seen[h] = true;
                    stack.push(h);
                }
            }
        }
        seen
    }

    fn reach_backward(&self, to: &[VertexId]) -> Vec<bool> {
        let mut seen = vec![false; self.vertices.len()];
        let mut stack: Vec<_> = to.to_vec();
        for &t in to {
            seen[t] = true;
        }
        while let Some(v) = stack.pop() {
            for &e in &self.in_edges[v] {
                let t = self.edges[e].tail;
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        seen
    }

    /// True iff there is a directed path starting with edge `e` and ending
    /// with edge `f` (`e ⪯ f`).
    pub fn edge_precedes(&self, e: EdgeId, f: EdgeId) -> bool {
        e == f || self.reach_forward(self.edges[e].head, |_| false)[self.edges[f].tail]
    }

    /// Degree-sequence and parallel-edge-count certificate. Equal certificates
    /// are necessary for isomorphism, and sufficient for two-level networks.
    pub fn shape_certificate(&self) -> ShapeCertificate {
        let sig = |v: VertexId| (self.vertices[v].kind, self.indegree(v), self.outdegree(v));
        let mut vertices: Vec<_> = (0..self.vertices.len()).map(sig).collect();
        vertices.sort_unstable();
        let mut bundles: BTreeMap<(VertexId, VertexId), usize> = BTreeMap::new();
        for e in &self.edges {
            *bundles.entry((e.tail, e.head)).or_default() += 1;
        }
        let mut parallel: Vec<_> = bundles
            .into_iter()
            .map(|((t, h), n)| (sig(t), sig(h), n))
            .collect();
        parallel.sort_unstable();
        ShapeCertificate { vertices, parallel }
    }
}

type VertexSignature = (VertexKind, usize, usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapeCertificate {
    vertices: Vec<VertexSignature>,
    parallel: Vec<(VertexSignature, VertexSignature, usize)>,
}

pub fn is_isomorphic(a: &Network, b: &Network) -> bool {
    a.shape_certificate() == b.shape_certificate()
}

/// One entry per violated structural condition; empty means valid.
pub fn validate_network(n: &Network) -> Vec<Violation> {
    let mut out = Vec::new();
    if vertex_layers(n).is_none() {
        out.push(Violation::Cycle);
    }
    if n.terminals.is_empty() {
        out.push(Violation::NoTerminal);
    }
    if n.terminals.contains(&n.source) {
        out.push(Violation::SourceIsTerminal);
    }
    let from_source = n.reach_forward(n.source, |_| false);
    for &t in &n.terminals {
        if t != n.source && !from_source[t] {
            out.push(Violation::TerminalUnreachable(t));
        }
    }
    let to_terminal = n.reach_backward(&n.terminals);
    for v in n.intermediates() {
        if !from_source[v] || !to_terminal[v] {
            out.push(Violation::Disconnected {
                vertex: v,
                reachable_from_source: from_source[v],
                reaches_terminal: to_terminal[v],
            });
        }
    }
    out
}

/// Longest-path depth of every vertex, or `None` if the graph has a cycle.
fn vertex_layers(n: &Network) -> Option<Vec<usize>> {
    let count = n.vertices.len();
    let mut indeg = vec![0usize; count];
    let mut outs = vec![Vec::new(); count];
    for e in &n.edges {
        indeg[e.head] += 1;
        outs[e.tail].push(e.head);
    }
    let mut layer = vec![0usize; count];
    let mut ready: Vec<_> = (0..count).filter(|&v| indeg[v] == 0).collect();
    let mut done = 0;
    while let Some(v) = ready.pop() {
        done += 1;
        for &h in &outs[v] {
            layer[h] = layer[h].max(layer[v] + 1);
            indeg[h] -= 1;
            if indeg[h] == 0 {
                ready.push(h);
            }
        }
    }
    (done == count).then_some(layer)
}

/// Canonical linear extension of the edge precedence order, as a list of the
/// network's current edge ids.
pub fn edge_order(n: &Network) -> Result<Vec<EdgeId>> {
    let layer = vertex_layers(n).ok_or(Error::Cycle)?;
    let mut ids: Vec<EdgeId> = (0..n.edges.len()).collect();
    ids.sort_by_key(|&i| {
        let e = &n.edges[i];
        (layer[e.tail], e.tail, e.head, e.multiplicity)
    });
    Ok(ids)
}

/// True iff every path from the source to an edge of `to` contains an edge of
/// `from`.
pub fn precedes(n: &Network, from: &[EdgeId], to: &[EdgeId]) -> Result<bool> {
    if from.is_empty() || to.is_empty() {
        return Err(Error::InvalidArgument(
            "precedence needs non-empty edge sets".into(),
        ));
    }
    let m = n.edges.len();
    if let Some(&e) = from.iter().chain(to).find(|&&e| e >= m) {
        return Err(Error::InvalidArgument(format!("edge {e} does not exist")));
    }
    let blocked = |e: EdgeId| from.contains(&e);
    let reach = n.reach_forward(n.source, blocked);
    Ok(to
        .iter()
        .all(|&e| from.contains(&e) || !reach[n.edges[e].tail]))
}

/// All inclusion-minimal edge cuts separating the source from `terminal`,
/// ordered by size and then lexicographically.
pub fn enumerate_min_cuts(n: &Network, terminal: VertexId) -> Result<Vec<EdgeCut>> {
    let m = n.edges.len();
    if m > MAX_CUT_EDGES {
        return Err(Error::TooLarge(format!(
            "cut enumeration is limited to {MAX_CUT_EDGES} edges, network has {m}"
        )));
    }
    if !n.terminals.contains(&terminal) {
        return Err(Error::InvalidArgument(format!(
            "{terminal} is not a terminal"
        )));
    }
    // Only edges on some source-terminal path can belong to a minimal cut.
    let fwd = n.reach_forward(n.source, |_| false);
    let bwd = n.reach_backward(&[terminal]);
    let relevant: Vec<EdgeId> = n
        .edges
        .iter()
        .filter(|e| fwd[e.tail] && bwd[e.head])
        .map(|e| e.id)
        .collect();
    let k = relevant.len();
    if k == 0 {
        return Ok(Vec::new());
    }

    let is_cut = |mask: u32| -> bool {
        let removed = |e: EdgeId| {
            relevant
                .iter()
                .position(|&r| r == e)
                .is_some_and(|i| mask >> i & 1 == 1)
        };
        !n.reach_forward(n.source, removed)[terminal]
    };

    let mut found: Vec<u32> = Vec::new();
    for size in 1..=k {
        // Gosper's hack over k-bit masks with `size` bits set.
        let mut mask: u32 = (1u32 << size) - 1;
        let limit: u64 = 1u64 << k;
        while (mask as u64) < limit {
            if !found.iter().any(|&f| f & !mask == 0) && is_cut(mask) {
                found.push(mask);
            }
            let c = mask & mask.wrapping_neg();
            let r = mask + c;
            if r == 0 {
                break;
            }
            mask = (((r ^ mask) >> 2) / c) | r;
        }
    }

    let mut cuts: Vec<EdgeCut> = found
        .into_iter()
        .map(|mask| EdgeCut {
            edges: (0..k)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| relevant[i])
                .collect(),
            terminal,
        })
        .collect();
    cuts.sort_by(|a, b| (a.edges.len(), &a.edges).cmp(&(b.edges.len(), &b.edges)));
    Ok(cuts)
}

/// True iff removing `edges` disconnects `terminal` from the source.
pub fn is_cut(n: &Network, edges: &[EdgeId], terminal: VertexId) -> bool {
    !n.reach_forward(n.source, |e| edges.contains(&e))[terminal]
}

/// Simple two-level network `([x_1..x_j], [y_1..y_j])`: vertex 0 is the
/// source, vertices `1..=j` are intermediate and `j + 1` is the terminal.
pub fn build_two_level(x: &[usize], y: &[usize]) -> Result<Network> {
    if x.is_empty() || x.len() != y.len() {
        return Err(Error::InvalidArgument(
            "two-level spec needs two non-empty lists of equal length".into(),
        ));
    }
    if x.iter().chain(y).any(|&c| c == 0) {
        return Err(Error::InvalidArgument(
            "two-level edge counts must be positive".into(),
        ));
    }
    let j = x.len();
    let t = j + 1;
    let mut edges = Vec::new();
    for (k, &c) in x.iter().enumerate() {
        edges.extend(std::iter::repeat_n((0, k + 1), c));
    }
    for (k, &c) in y.iter().enumerate() {
        edges.extend(std::iter::repeat_n((k + 1, t), c));
    }
    let fmt_list = |v: &[usize]| {
        v.iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    Network::from_edges(
        format!("two_level([{}],[{}])", fmt_list(x), fmt_list(y)),
        j + 2,
        &edges,
        0,
        &[t],
    )
}

fn renamed(mut n: Network, name: String) -> Network {
    n.name = name;
    n
}

/// The Diamond network: `e1: S→V1`, `e2, e3: S→V2`, `e4: V1→T`, `e5: V2→T`.
pub fn build_diamond() -> Network {
    renamed(
        build_two_level(&[1, 2], &[1, 1]).expect("static spec"),
        "diamond".into(),
    )
}

/// The Mirrored Diamond: `e1, e2: S→V1`, `e3, e4: S→V2`, `e5: V1→T`, `e6: V2→T`.
pub fn build_mirrored_diamond() -> Network {
    renamed(
        build_two_level(&[2, 2], &[1, 1]).expect("static spec"),
        "mirrored".into(),
    )
}

/// `([t, t+1], [t, t])`.
pub fn build_family_c(t: usize) -> Result<Network> {
    if t == 0 {
        return Err(Error::InvalidArgument(
            "family parameter must be at least 1".into(),
        ));
    }
    Ok(renamed(
        build_two_level(&[t, t + 1], &[t, t])?,
        format!("family_c({t})"),
    ))
}

/// `([2t, 2t], [1, 1])`.
pub fn build_family_d(t: usize) -> Result<Network> {
    if t == 0 {
        return Err(Error::InvalidArgument(
            "family parameter must be at least 1".into(),
        ));
    }
    Ok(renamed(
        build_two_level(&[2 * t, 2 * t], &[1, 1])?,
        format!("family_d({t})"),
    ))
}

/// A single edge `S → T`.
pub fn build_single_edge() -> Network {
    Network::from_edges("single_edge", 2, &[(0, 1)], 0, &[1]).expect("static spec")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn endpoints(n: &Network) -> Vec<(VertexId, VertexId)> {
        n.edges().iter().map(|e| (e.tail, e.head)).collect()
    }

    #[test]
    fn diamond_edges_follow_figure() {
        let d = build_diamond();
        assert_eq!(endpoints(&d), vec![(0, 1), (0, 2), (0, 2), (1, 3), (2, 3)]);
        assert_eq!(edge_order(&d).unwrap(), vec![0, 1, 2, 3, 4]);
        assert!(validate_network(&d).is_empty());
    }

    #[test]
    fn mirrored_terminal_edges_are_last() {
        let s = build_mirrored_diamond();
        assert_eq!(
            endpoints(&s),
            vec![(0, 1), (0, 1), (0, 2), (0, 2), (1, 3), (2, 3)]
        );
        assert_eq!(edge_order(&s).unwrap(), (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn single_edge_order() {
        assert_eq!(edge_order(&build_single_edge()).unwrap(), vec![0]);
    }

    #[test]
    fn input_order_is_canonicalised() {
        let n = Network::from_edges("x", 4, &[(2, 3), (0, 2), (1, 3), (0, 1), (0, 2)], 0, &[3])
            .unwrap();
        assert_eq!(endpoints(&n), endpoints(&build_diamond()));
    }

    #[test]
    fn two_cycle_reported_once() {
        let n = Network::from_edges("cyc", 4, &[(0, 1), (1, 2), (2, 1), (2, 3)], 0, &[3]).unwrap();
        assert_eq!(validate_network(&n), vec![Violation::Cycle]);
        assert_eq!(edge_order(&n), Err(Error::Cycle));
    }

    #[test]
    fn isolated_vertex_reported_once() {
        let d = build_diamond();
        let edges = endpoints(&d);
        let n = Network::from_edges("iso", 5, &edges, 0, &[3]).unwrap();
        let v = validate_network(&n);
        assert_eq!(v.len(), 1);
        assert!(matches!(v[0], Violation::Disconnected { vertex: 4, .. }));
    }

    #[test]
    fn source_as_terminal_is_reported() {
        let n = Network::from_edges("st", 2, &[(0, 1)], 0, &[0, 1]).unwrap();
        assert!(validate_network(&n).contains(&Violation::SourceIsTerminal));
    }

    #[test]
    fn precedence_examples() {
        let d = build_diamond();
        assert!(precedes(&d, &[0, 1, 2], &[4]).unwrap());
        assert!(!precedes(&d, &[0], &[4]).unwrap());
        assert!(precedes(&d, &[1, 2], &[1, 2]).unwrap());
        assert!(precedes(&d, &[0, 1, 2], &[1, 2]).unwrap());
        assert!(precedes(&d, &[1, 2], &[4]).unwrap());
        assert!(precedes(&d, &[], &[4]).is_err());
    }

    #[test]
    fn diamond_min_cuts() {
        let d = build_diamond();
        let cuts: Vec<_> = enumerate_min_cuts(&d, 3)
            .unwrap()
            .into_iter()
            .map(|c| c.edges)
            .collect();
        assert_eq!(
            cuts,
            vec![vec![0, 4], vec![3, 4], vec![0, 1, 2], vec![1, 2, 3]]
        );
    }

    #[test]
    fn single_edge_min_cut() {
        let n = build_single_edge();
        let cuts = enumerate_min_cuts(&n, 1).unwrap();
        assert_eq!(cuts.len(), 1);
        assert_eq!(cuts[0].edges, vec![0]);
    }

    #[test]
    fn family_d2_min_cuts() {
        let n = build_family_d(2).unwrap();
        let cuts: Vec<_> = enumerate_min_cuts(&n, 3)
            .unwrap()
            .into_iter()
            .map(|c| c.edges)
            .collect();
        assert_eq!(
            cuts,
            vec![
                vec![8, 9],
                vec![0, 1, 2, 3, 9],
                vec![4, 5, 6, 7, 8],
                vec![0, 1, 2, 3, 4, 5, 6, 7],
            ]
        );
    }

    #[test]
    fn cut_guard() {
        let n = build_two_level(&[13], &[12]).unwrap();
        assert!(matches!(enumerate_min_cuts(&n, 2), Err(Error::TooLarge(_))));
    }

    #[test]
    fn families_recover_diamonds() {
        assert!(is_isomorphic(&build_family_c(1).unwrap(), &build_diamond()));
        assert!(is_isomorphic(
            &build_family_d(1).unwrap(),
            &build_mirrored_diamond()
        ));
        assert!(!is_isomorphic(&build_diamond(), &build_mirrored_diamond()));
    }

    #[test]
    fn two_level_counts() {
        let n = build_two_level(&[2, 3], &[2, 2]).unwrap();
        assert_eq!(n.edges().len(), 9);
        assert_eq!(n.intermediates().count(), 2);
        assert_eq!(n.two_level_shape(), Some((vec![2, 3], vec![2, 2])));
        assert!(build_two_level(&[], &[]).is_err());
        assert!(build_two_level(&[1, 0], &[1, 1]).is_err());
        assert!(build_two_level(&[1], &[1, 1]).is_err());
        assert!(build_family_c(0).is_err());
    }

    #[test]
    fn degrees_follow_incoming_convention() {
        let d = build_diamond();
        assert_eq!(d.indegree(2), 2);
        assert_eq!(d.outdegree(2), 1);
        assert_eq!(d.outdegree(d.source()), 3);
        assert_eq!(d.in_edges(3), &[3, 4]);
    }
}
