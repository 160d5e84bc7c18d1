//! Exhaustive families of connected bipartite multigraphs, up to
//! isomorphism, for sweep-style cross-checks of the cokernel law.

use crate::patch_graph::{Branch, PatchGraph};

/// All connected bipartite multigraphs with exactly `p` point vertices,
/// `u` piece vertices and at most `max_edges` edges, up to isomorphisms
/// preserving the bipartition, each returned as a PatchGraph with
/// synthetic names P1..Pp / X1..Xu.
pub fn connected_bipartite_multigraphs(p: usize, u: usize, max_edges: usize) -> Vec<PatchGraph> {
    let mut canon_seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    let pairs: Vec<(usize, usize)> = (0..p).flat_map(|i| (0..u).map(move |j| (i, j))).collect();
    let min_edges = (p + u).saturating_sub(1);
    let mut edges: Vec<(usize, usize)> = Vec::new();
    enumerate_multisets(&pairs, 0, max_edges, &mut edges, &mut |edge_set| {
        if edge_set.len() < min_edges {
            return;
        }
        if !spans_and_connects(p, u, edge_set) {
            return;
        }
        let canon = canonical_form(p, u, edge_set);
        if canon_seen.insert(canon) {
            out.push(graph_from_edges(p, u, edge_set));
        }
    });
    out
}

fn enumerate_multisets(
    pairs: &[(usize, usize)],
    from: usize,
    budget: usize,
    acc: &mut Vec<(usize, usize)>,
    visit: &mut impl FnMut(&[(usize, usize)]),
) {
    if !acc.is_empty() {
        visit(acc);
    }
    if budget == 0 || from >= pairs.len() {
        return;
    }
    for idx in from..pairs.len() {
        acc.push(pairs[idx]);
        enumerate_multisets(pairs, idx, budget - 1, acc, visit);
        acc.pop();
    }
}

fn spans_and_connects(p: usize, u: usize, edges: &[(usize, usize)]) -> bool {
    let n = p + u;
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let root = find(parent, parent[x]);
            parent[x] = root;
        }
        parent[x]
    }
    let mut touched = vec![false; n];
    for &(i, j) in edges {
        touched[i] = true;
        touched[p + j] = true;
        let (a, b) = (find(&mut parent, i), find(&mut parent, p + j));
        parent[a] = b;
    }
    if touched.iter().any(|&t| !t) {
        return false;
    }
    let root = find(&mut parent, 0);
    (0..n).all(|v| find(&mut parent, v) == root)
}

/// Least sorted edge multiset over all relabelings of the two parts.
fn canonical_form(p: usize, u: usize, edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut best: Option<Vec<(usize, usize)>> = None;
    let p_perms = permutations(p);
    let u_perms = permutations(u);
    for pp in &p_perms {
        for up in &u_perms {
            let mut relabeled: Vec<(usize, usize)> =
                edges.iter().map(|&(i, j)| (pp[i], up[j])).collect();
            relabeled.sort_unstable();
            if best.as_ref().map(|b| relabeled < *b).unwrap_or(true) {
                best = Some(relabeled);
            }
        }
    }
    best.unwrap()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    heap_permute(&mut items, n, &mut out);
    out
}

fn heap_permute(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == 1 {
        out.push(items.clone());
        return;
    }
    for i in 0..k {
        heap_permute(items, k - 1, out);
        if k.is_multiple_of(2) {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
}

fn graph_from_edges(p: usize, u: usize, edges: &[(usize, usize)]) -> PatchGraph {
    let mut label_count = std::collections::HashMap::new();
    let branches = edges
        .iter()
        .map(|&(i, j)| {
            let base = format!("P{}:X{}", i + 1, j + 1);
            let count = label_count.entry(base.clone()).or_insert(0usize);
            let label = if *count == 0 {
                base.clone()
            } else {
                format!("{base}#{count}")
            };
            *count += 1;
            Branch {
                point: i,
                piece: j,
                label,
            }
        })
        .collect();
    PatchGraph {
        p_vertices: (1..=p).map(|i| format!("P{i}")).collect(),
        u_vertices: (1..=u).map(|j| format!("X{j}")).collect(),
        branches,
    }
}

/// The family driving the cokernel-law sweep: every connected bipartite
/// multigraph on at most 7 vertices with at most `max_edges` edges, up to
/// isomorphism. Larger vertex counts with 8 edges are forced down to
/// Betti number <= 1 by connectivity, shapes the family already covers.
pub fn cokernel_law_family(max_edges: usize) -> Vec<PatchGraph> {
    let mut graphs = Vec::new();
    for p in 1..=6 {
        for u in 1..=6 {
            if p + u <= 7 {
                graphs.extend(connected_bipartite_multigraphs(p, u, max_edges));
            }
        }
    }
    graphs
}

/// One cross-check of the cokernel law on a graph: the Smith-form
/// cokernel order against the enumeration oracle and n^betti.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawCheckRecord {
    pub graph_index: usize,
    pub n: u64,
    pub betti: usize,
    pub snf_order: u64,
    pub enum_order: u64,
    pub edge_group_order: u64,
}

impl LawCheckRecord {
    /// snf cokernel = edge group / enumerated image = n^betti.
    pub fn law_holds(&self) -> bool {
        self.edge_group_order.is_multiple_of(self.enum_order)
            && self.snf_order == self.edge_group_order / self.enum_order
            && self.snf_order == self.n.pow(self.betti as u32)
    }
}

fn law_check_one(graphs: &[PatchGraph], job: &(usize, u64)) -> LawCheckRecord {
    let (graph_index, n) = *job;
    let graph = graphs[graph_index].clone();
    let betti = crate::patch_graph::betti_number(&graph);
    let problem = crate::obstruction::ObstructionProblem::with_defaults(graph, n)
        .expect("default moduli are valid");
    LawCheckRecord {
        graph_index,
        n,
        betti,
        snf_order: problem.cokernel_order(),
        enum_order: problem.image_size_by_enumeration(),
        edge_group_order: problem.edge_group_order(),
    }
}

/// Runs the cokernel-law cross-check over every (graph, n) pair, in
/// parallel when the `parallel` feature is enabled.
pub fn cokernel_law_records(graphs: &[PatchGraph], ns: &[u64]) -> Vec<LawCheckRecord> {
    let jobs: Vec<(usize, u64)> = (0..graphs.len())
        .flat_map(|g| ns.iter().map(move |&n| (g, n)))
        .collect();
    crate::par::par_map(&jobs, |job| law_check_one(graphs, job))
}

/// Sequential twin of [`cokernel_law_records`].
pub fn cokernel_law_records_seq(graphs: &[PatchGraph], ns: &[u64]) -> Vec<LawCheckRecord> {
    let jobs: Vec<(usize, u64)> = (0..graphs.len())
        .flat_map(|g| ns.iter().map(move |&n| (g, n)))
        .collect();
    crate::par::par_map_seq(&jobs, |job| law_check_one(graphs, job))
}
