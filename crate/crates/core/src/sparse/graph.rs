use std::collections::BTreeSet;

use crate::network::Qcn;

/// Undirected graph on `0..n` without self-loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintGraph {
    adj: Vec<BTreeSet<usize>>,
}

impl ConstraintGraph {
    pub fn new(n: usize) -> Self {
        ConstraintGraph { adj: vec![BTreeSet::new(); n] }
    }

    /// Edges `{i, j}` with a non-universal constraint.
    pub fn of_network(q: &Qcn) -> Self {
        Self::from_edges(q.n(), q.constraint_edges())
    }

    /// Self-loops and out-of-range endpoints are ignored.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Self::new(n);
        for (i, j) in edges {
            g.add_edge(i, j);
        }
        g
    }

    pub fn add_edge(&mut self, i: usize, j: usize) -> bool {
        let n = self.adj.len();
        if i == j || i >= n || j >= n {
            return false;
        }
        self.adj[j].insert(i);
        self.adj[i].insert(j)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj.get(i).is_some_and(|a| a.contains(&j))
    }

    pub fn neighbours(&self, v: usize) -> &BTreeSet<usize> {
        &self.adj[v]
    }

    /// Edges as `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, a) in self.adj.iter().enumerate() {
            out.extend(a.range(i + 1..).map(|&j| (i, j)));
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).sum::<usize>() / 2
    }
}

/// A chordal supergraph of a constraint graph.
#[derive(Debug, Clone)]
pub struct ChordalStructure {
    pub graph: ConstraintGraph,
    /// Perfect elimination order.
    pub peo: Vec<usize>,
    /// Every triangle `[i, j, k]`, `i < j < k`.
    pub triangles: Vec<[usize; 3]>,
    /// Edges added on top of the input graph.
    pub fill_edges: usize,
}

impl ChordalStructure {
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.graph.edges()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Heuristic {
    #[default]
    MinFill,
    MinDegree,
}

impl std::str::FromStr for Heuristic {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> crate::error::Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "min-fill" | "minfill" => Ok(Heuristic::MinFill),
            "min-degree" | "mindegree" => Ok(Heuristic::MinDegree),
            _ => Err(crate::error::Error::InvalidArgument(format!("unknown heuristic `{s}`"))),
        }
    }
}

fn missing_pairs(adj: &[BTreeSet<usize>], v: usize) -> usize {
    let nb: Vec<usize> = adj[v].iter().copied().collect();
    let mut missing = 0;
    for (a, &x) in nb.iter().enumerate() {
        for &y in &nb[a + 1..] {
            if !adj[x].contains(&y) {
                missing += 1;
            }
        }
    }
    missing
}

/// Chordal completion by simulated elimination. Ties go to the smallest
/// vertex.
pub fn triangulate(g: &ConstraintGraph, heuristic: Heuristic) -> ChordalStructure {
    let n = g.n();
    let mut work: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbours(v).clone()).collect();
    let mut out = g.clone();
    let mut alive: BTreeSet<usize> = (0..n).collect();
    let mut peo = Vec::with_capacity(n);
    let mut fill_edges = 0;
    while !alive.is_empty() {
        let v = *alive
            .iter()
            .min_by_key(|&&v| match heuristic {
                Heuristic::MinFill => (missing_pairs(&work, v), work[v].len()),
                Heuristic::MinDegree => (work[v].len(), 0),
            })
            .expect("nonempty");
        let nb: Vec<usize> = work[v].iter().copied().collect();
        for (a, &x) in nb.iter().enumerate() {
            for &y in &nb[a + 1..] {
                if work[x].insert(y) {
                    work[y].insert(x);
                    out.add_edge(x, y);
                    fill_edges += 1;
                }
            }
        }
        for &x in &nb {
            work[x].remove(&v);
        }
        work[v].clear();
        alive.remove(&v);
        peo.push(v);
    }
    let triangles = triangles_of(&out);
    ChordalStructure { graph: out, peo, triangles, fill_edges }
}

fn triangles_of(g: &ConstraintGraph) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for (i, j) in g.edges() {
        for &k in g.neighbours(i).range(j + 1..) {
            if g.has_edge(j, k) {
                out.push([i, j, k]);
            }
        }
    }
    out
}

/// True iff `peo` is a permutation of the vertices and each vertex's later
/// neighbours are pairwise adjacent.
pub fn verify_chordal(g: &ConstraintGraph, peo: &[usize]) -> bool {
    let n = g.n();
    let mut pos = vec![usize::MAX; n];
    if peo.len() != n {
        return false;
    }
    for (t, &v) in peo.iter().enumerate() {
        if v >= n || pos[v] != usize::MAX {
            return false;
        }
        pos[v] = t;
    }
    peo.iter().all(|&v| {
        let later: Vec<usize> = g.neighbours(v).iter().copied().filter(|&u| pos[u] > pos[v]).collect();
        later
            .iter()
            .enumerate()
            .all(|(a, &x)| later[a + 1..].iter().all(|&y| g.has_edge(x, y)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn four_cycle_gets_one_chord() {
        let c4 = ConstraintGraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]);
        let orders = permutations(4);
        assert_eq!(orders.len(), 24);
        assert!(orders.iter().all(|p| !verify_chordal(&c4, p)));
        for h in [Heuristic::MinFill, Heuristic::MinDegree] {
            let cs = triangulate(&c4, h);
            assert_eq!(cs.fill_edges, 1);
            assert!(cs.graph.has_edge(0, 2) || cs.graph.has_edge(1, 3));
            assert!(verify_chordal(&cs.graph, &cs.peo));
            assert_eq!(cs.triangles.len(), 2);
        }
    }

    #[test]
    fn chordal_inputs_are_untouched() {
        let tree = ConstraintGraph::from_edges(5, [(0, 1), (0, 2), (2, 3), (2, 4)]);
        let cs = triangulate(&tree, Heuristic::MinFill);
        assert_eq!(cs.fill_edges, 0);
        assert!(verify_chordal(&tree, &[1, 3, 4, 0, 2]));
        let k5 = ConstraintGraph::from_edges(5, (0..5).flat_map(|i| (i + 1..5).map(move |j| (i, j))));
        let cs = triangulate(&k5, Heuristic::MinDegree);
        assert_eq!(cs.fill_edges, 0);
        assert_eq!(cs.triangles.len(), 10);
        assert!(permutations(5).iter().all(|p| verify_chordal(&k5, p)));
    }

    #[test]
    fn bad_orders_are_rejected() {
        let g = ConstraintGraph::from_edges(3, [(0, 1)]);
        assert!(!verify_chordal(&g, &[0, 1]));
        assert!(!verify_chordal(&g, &[0, 0, 1]));
    }
}
