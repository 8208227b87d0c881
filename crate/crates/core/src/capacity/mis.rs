//! Exact maximum independent set by branch and bound.
//!
//! Each connected component of the conflict graph is solved as a maximum
//! clique problem on its complement, using greedy colouring as the upper
//! bound. Isolated vertices are always taken.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Largest component the bitset solver accepts.
pub const MAX_COMPONENT: usize = 1 << 14;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MisOutcome {
    /// Vertex indices of the independent set, ascending.
    pub set: Vec<usize>,
    /// False when the deadline cut the search short.
    pub exact: bool,
}

#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn full(n: usize) -> Self {
        let mut b = Self::new(n);
        for i in 0..n {
            b.set(i);
        }
        b
    }

    #[inline]
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, &w)| k * 64 + w.trailing_zeros() as usize)
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn and_not_assign(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a &= !b;
        }
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

struct CliqueSearch<'a> {
    compat: &'a [Bits],
    best: Vec<usize>,
    deadline: Option<Instant>,
    nodes: u64,
    timed_out: bool,
}

impl CliqueSearch<'_> {
    fn color_sort(&self, p: &Bits) -> (Vec<usize>, Vec<usize>) {
        let mut order = Vec::with_capacity(p.count());
        let mut colors = Vec::with_capacity(order.capacity());
        let mut uncolored = p.clone();
        let mut k = 0;
        while !uncolored.is_empty() {
            k += 1;
            let mut q = uncolored.clone();
            while let Some(v) = q.first() {
                uncolored.clear(v);
                q.clear(v);
                q.and_not_assign(&self.compat[v]);
                order.push(v);
                colors.push(k);
            }
        }
        (order, colors)
    }

    fn expand(&mut self, r: &mut Vec<usize>, mut p: Bits) {
        self.nodes += 1;
        if self.nodes.is_multiple_of(1024) {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.timed_out = true;
                }
            }
        }
        if self.timed_out {
            return;
        }
        let (order, colors) = self.color_sort(&p);
        for idx in (0..order.len()).rev() {
            if r.len() + colors[idx] <= self.best.len() || self.timed_out {
                return;
            }
            let v = order[idx];
            r.push(v);
            let np = p.and(&self.compat[v]);
            if np.is_empty() {
                if r.len() > self.best.len() {
                    self.best = r.clone();
                }
            } else {
                self.expand(r, np);
            }
            r.pop();
            p.clear(v);
        }
    }
}

/// Greedy independent set, lowest-degree first. Used as the starting
/// incumbent.
fn greedy(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (adj[v].len(), v));
    let mut blocked = vec![false; n];
    let mut out = Vec::new();
    for v in order {
        if !blocked[v] {
            out.push(v);
            for &u in &adj[v] {
                blocked[u] = true;
            }
        }
    }
    out
}

fn solve_component(
    adj: &[Vec<usize>],
    deadline: Option<Instant>,
    rng: Option<&mut ChaCha8Rng>,
) -> (Vec<usize>, bool) {
    let n = adj.len();
    // Relabel so that low-conflict vertices come first; colouring then
    // builds large classes early.
    let mut perm: Vec<usize> = (0..n).collect();
    match rng {
        Some(rng) => perm.shuffle(rng),
        None => perm.sort_by_key(|&v| (adj[v].len(), v)),
    }
    let mut pos = vec![0; n];
    for (i, &v) in perm.iter().enumerate() {
        pos[v] = i;
    }
    let compat: Vec<Bits> = perm
        .iter()
        .map(|&v| {
            let mut b = Bits::full(n);
            b.clear(pos[v]);
            for &u in &adj[v] {
                b.clear(pos[u]);
            }
            b
        })
        .collect();
    let initial: Vec<usize> = greedy(adj).into_iter().map(|v| pos[v]).collect();
    let mut search = CliqueSearch {
        compat: &compat,
        best: initial,
        deadline,
        nodes: 0,
        timed_out: false,
    };
    search.expand(&mut Vec::new(), Bits::full(n));
    let mut set: Vec<usize> = search.best.iter().map(|&i| perm[i]).collect();
    set.sort_unstable();
    (set, !search.timed_out)
}

/// Maximum independent set of the graph on `0..adj.len()` with symmetric
/// adjacency lists `adj`. A non-zero `seed` shuffles the branching order;
/// the optimum size does not depend on it.
pub fn max_independent_set(
    adj: &[Vec<usize>],
    deadline: Option<Instant>,
    seed: u64,
) -> crate::Result<MisOutcome> {
    let n = adj.len();
    let mut comp = vec![usize::MAX; n];
    let mut components: Vec<Vec<usize>> = Vec::new();
    let mut set = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        if adj[s].is_empty() {
            comp[s] = 0;
            set.push(s);
            continue;
        }
        let id = components.len();
        let mut members = vec![s];
        comp[s] = id;
        let mut i = 0;
        while i < members.len() {
            let v = members[i];
            for &u in &adj[v] {
                if comp[u] == usize::MAX {
                    comp[u] = id;
                    members.push(u);
                }
            }
            i += 1;
        }
        members.sort_unstable();
        components.push(members);
    }

    let mut rng = (seed != 0).then(|| ChaCha8Rng::seed_from_u64(seed));
    let mut exact = true;
    for members in &components {
        if members.len() > MAX_COMPONENT {
            return Err(crate::Error::TooLarge(format!(
                "conflict component of {} vertices exceeds {MAX_COMPONENT}",
                members.len()
            )));
        }
        let local: Vec<Vec<usize>> = members
            .iter()
            .map(|&v| {
                adj[v]
                    .iter()
                    .map(|u| members.binary_search(u).expect("same component"))
                    .collect()
            })
            .collect();
        let (found, ok) = solve_component(&local, deadline, rng.as_mut());
        exact &= ok;
        set.extend(found.into_iter().map(|i| members[i]));
    }
    set.sort_unstable();
    Ok(MisOutcome { set, exact })
}
