use super::{ClosedTrail, Edge, SimpleGraph};

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

pub fn is_forest(g: &SimpleGraph) -> bool {
    let mut ds = DisjointSets::new(g.vertex_count());
    g.edges().all(|(a, b)| ds.union(a, b))
}

fn adjacency(g: &SimpleGraph) -> Vec<Vec<(usize, usize)>> {
    let mut adj = vec![Vec::new(); g.vertex_count()];
    for (i, (a, b)) in g.edges().enumerate() {
        adj[a].push((b, i));
        adj[b].push((a, i));
    }
    adj
}

/// Edge sets of the biconnected components (Hopcroft–Tarjan).
fn blocks(g: &SimpleGraph) -> Vec<Vec<Edge>> {
    let edges: Vec<Edge> = g.edges().collect();
    let adj = adjacency(g);
    let n = g.vertex_count();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut time = 0;
    let mut stack: Vec<usize> = Vec::new();
    let mut out = Vec::new();

    // explicit stack of (vertex, parent edge, next adjacency position)
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        let mut frames: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        while let Some(&mut (u, pe, ref mut pos)) = frames.last_mut() {
            if *pos < adj[u].len() {
                let (w, ei) = adj[u][*pos];
                *pos += 1;
                if ei == pe {
                    continue;
                }
                if disc[w] == usize::MAX {
                    stack.push(ei);
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    frames.push((w, ei, 0));
                } else if disc[w] < disc[u] {
                    stack.push(ei);
                    low[u] = low[u].min(disc[w]);
                }
            } else {
                frames.pop();
                if let Some(&(p, _, _)) = frames.last() {
                    low[p] = low[p].min(low[u]);
                    if low[u] >= disc[p] {
                        let mut comp = Vec::new();
                        while let Some(ei) = stack.pop() {
                            comp.push(edges[ei]);
                            if ei == pe {
                                break;
                            }
                        }
                        out.push(comp);
                    }
                }
            }
        }
    }
    out
}

/// Decides whether `g` has an even closed trail.
///
/// A 2-connected block that is not a cycle contains a theta subgraph and
/// hence an even cycle; an even-length cycle block is itself one; two odd
/// cycle blocks meeting at a vertex form an even figure-eight. Otherwise
/// every cycle is an isolated odd block and every connected even-degree
/// subgraph is a single odd cycle.
pub fn even_closed_trail_exists(g: &SimpleGraph) -> bool {
    let mut odd_cycle_vertices: Vec<usize> = Vec::new();
    for block in blocks(g) {
        if block.len() < 3 {
            continue;
        }
        let mut vs: Vec<usize> = block.iter().flat_map(|&(a, b)| [a, b]).collect();
        vs.sort_unstable();
        vs.dedup();
        if block.len() > vs.len() || block.len() % 2 == 0 {
            return true;
        }
        odd_cycle_vertices.extend(vs);
    }
    let before = odd_cycle_vertices.len();
    odd_cycle_vertices.sort_unstable();
    odd_cycle_vertices.dedup();
    odd_cycle_vertices.len() != before
}

struct SubsetSearch<'a> {
    edges: &'a [Edge],
    /// `closers[i]`: vertices whose last incident edge has index `i`.
    closers: Vec<Vec<usize>>,
    degree: Vec<usize>,
    odd: usize,
    chosen: Vec<usize>,
}

impl SubsetSearch<'_> {
    fn toggle(&mut self, i: usize, add: bool) {
        let (a, b) = self.edges[i];
        for w in [a, b] {
            if add {
                self.degree[w] += 1;
            } else {
                self.degree[w] -= 1;
            }
            if self.degree[w] % 2 == 1 {
                self.odd += 1;
            } else {
                self.odd -= 1;
            }
        }
        if add {
            self.chosen.push(i);
        } else {
            self.chosen.pop();
        }
    }

    fn connected(&self) -> bool {
        let mut ds = DisjointSets::new(self.degree.len());
        for &i in &self.chosen {
            let (a, b) = self.edges[i];
            ds.union(a, b);
        }
        let root = ds.find(self.edges[self.chosen[0]].0);
        self.chosen.iter().all(|&i| ds.find(self.edges[i].0) == root)
    }

    /// Lexicographically first `remaining`-subset of `start..` completing
    /// the chosen edges to a connected even-degree edge set.
    fn run(&mut self, start: usize, remaining: usize) -> bool {
        if remaining == 0 {
            return self.odd == 0 && self.connected();
        }
        if self.odd > 2 * remaining {
            return false;
        }
        let last = self.edges.len() - remaining;
        for i in start..=last {
            if i > start && self.closers[i - 1].iter().any(|&w| self.degree[w] % 2 == 1) {
                return false;
            }
            self.toggle(i, true);
            if self.run(i + 1, remaining - 1) {
                return true;
            }
            self.toggle(i, false);
        }
        false
    }
}

/// Least edge set by `(size, sorted edge list)` among connected subgraphs
/// in which every vertex has even degree, with size at least `min_len`
/// (and even if `even_only`).
pub(super) fn least_eulerian_subgraph(g: &SimpleGraph, min_len: usize, even_only: bool) -> Option<Vec<Edge>> {
    let edges: Vec<Edge> = g.edges().collect();
    let mut last_index = vec![None; g.vertex_count()];
    for (i, &(a, b)) in edges.iter().enumerate() {
        last_index[a] = Some(i);
        last_index[b] = Some(i);
    }
    let mut closers = vec![Vec::new(); edges.len()];
    for (w, li) in last_index.iter().enumerate() {
        if let Some(i) = li {
            closers[*i].push(w);
        }
    }
    let mut s = SubsetSearch { edges: &edges, closers, degree: vec![0; g.vertex_count()], odd: 0, chosen: Vec::new() };
    let mut len = min_len;
    if even_only && len % 2 == 1 {
        len += 1;
    }
    while len <= edges.len() {
        if s.run(0, len) {
            return Some(s.chosen.iter().map(|&i| edges[i]).collect());
        }
        len += if even_only { 2 } else { 1 };
    }
    None
}

/// Fleury's algorithm with smallest-edge preference, starting at the
/// smaller endpoint of the smallest edge and taking that edge first.
pub(super) fn canonical_euler_order(edge_set: &[Edge]) -> ClosedTrail {
    let mut unused: std::collections::BTreeSet<Edge> = edge_set.iter().copied().collect();
    let first = *unused.iter().next().expect("non-empty edge set");
    let start = first.0;
    let mut walk = vec![start];
    unused.remove(&first);
    let mut cur = first.1;
    while !unused.is_empty() {
        let options: Vec<Edge> = unused.iter().copied().filter(|&(a, b)| a == cur || b == cur).collect();
        assert!(!options.is_empty(), "edge set is not Eulerian");
        let pick = if options.len() == 1 {
            options[0]
        } else {
            *options
                .iter()
                .min_by_key(|&&(a, b)| {
                    let other = if a == cur { b } else { a };
                    (is_bridge(&unused, (a, b), cur, other), other)
                })
                .unwrap()
        };
        unused.remove(&pick);
        walk.push(cur);
        cur = if pick.0 == cur { pick.1 } else { pick.0 };
    }
    assert_eq!(cur, start, "edge set is not Eulerian");
    ClosedTrail::from_walk(walk).expect("Euler circuit is a closed trail")
}

fn is_bridge(edges: &std::collections::BTreeSet<Edge>, e: Edge, from: usize, to: usize) -> bool {
    let mut seen = std::collections::BTreeSet::from([to]);
    let mut todo = vec![to];
    while let Some(x) = todo.pop() {
        if x == from {
            return false;
        }
        for &(a, b) in edges {
            if (a, b) == e {
                continue;
            }
            let y = if a == x {
                b
            } else if b == x {
                a
            } else {
                continue;
            };
            if seen.insert(y) {
                todo.push(y);
            }
        }
    }
    true
}
