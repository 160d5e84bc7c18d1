//! The bipartite patching graph of a model description: closed points on
//! one side, component pieces on the other, one branch per incidence.
//! Includes tree detection and the leaf-peeling factorization of edge
//! values over an abstract group.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// A model of the reduced special fibre: named components, named closed
/// points with their incident components (repeats allowed for nodal
/// self-intersections), and optional per-branch modulus overrides.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelDescription {
    pub components: Vec<String>,
    pub points: Vec<PointSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_moduli: Option<BTreeMap<String, u64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointSpec {
    pub name: String,
    pub on: Vec<String>,
}

/// A branch (P, U): indices into the two vertex lists plus a stable label
/// "P:U" ("P:U#k" for repeated incidences).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    pub point: usize,
    pub piece: usize,
    pub label: String,
}

/// Bipartite incidence graph with parts points / component pieces.
#[derive(Debug, Clone)]
pub struct PatchGraph {
    pub p_vertices: Vec<String>,
    pub u_vertices: Vec<String>,
    pub branches: Vec<Branch>,
}

impl ModelDescription {
    pub fn parse(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| Error::ParseError(format!("model JSON: {e}")))
    }
}

/// One U-vertex per component, one branch per (point, incident component)
/// incidence.
pub fn build_graph(model: &ModelDescription) -> Result<PatchGraph> {
    if model.components.is_empty() {
        return Err(Error::EmptyModel("no components"));
    }
    if model.points.is_empty() {
        return Err(Error::EmptyModel("no points"));
    }
    let comp_index: BTreeMap<&str, usize> = model
        .components
        .iter()
        .enumerate()
        .map(|(i, c)| (c.as_str(), i))
        .collect();
    let mut branches = Vec::new();
    let mut seen_labels: BTreeMap<String, usize> = BTreeMap::new();
    for (pi, point) in model.points.iter().enumerate() {
        if point.on.is_empty() {
            return Err(Error::EmptyModel("point with no incidences"));
        }
        for comp in &point.on {
            let ui = *comp_index
                .get(comp.as_str())
                .ok_or_else(|| Error::UnknownComponent(comp.clone()))?;
            let base = format!("{}:{}", point.name, comp);
            let count = seen_labels.entry(base.clone()).or_insert(0);
            let label = if *count == 0 {
                base.clone()
            } else {
                format!("{base}#{count}")
            };
            *count += 1;
            branches.push(Branch {
                point: pi,
                piece: ui,
                label,
            });
        }
    }
    Ok(PatchGraph {
        p_vertices: model.points.iter().map(|p| p.name.clone()).collect(),
        u_vertices: model.components.clone(),
        branches,
    })
}

impl PatchGraph {
    pub fn vertex_count(&self) -> usize {
        self.p_vertices.len() + self.u_vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.branches.len()
    }

    /// Global vertex index of a branch's point endpoint.
    pub fn point_vertex(&self, b: &Branch) -> usize {
        b.point
    }

    /// Global vertex index of a branch's piece endpoint.
    pub fn piece_vertex(&self, b: &Branch) -> usize {
        self.p_vertices.len() + b.piece
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        if v < self.p_vertices.len() {
            &self.p_vertices[v]
        } else {
            &self.u_vertices[v - self.p_vertices.len()]
        }
    }

    pub fn branch_by_label(&self, label: &str) -> Option<usize> {
        self.branches.iter().position(|b| b.label == label)
    }

    pub fn connected_components(&self) -> usize {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut components = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            components += 1;
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(v) = stack.pop() {
                for b in &self.branches {
                    let (a, c) = (self.point_vertex(b), self.piece_vertex(b));
                    let next = if a == v {
                        c
                    } else if c == v {
                        a
                    } else {
                        continue;
                    };
                    if !seen[next] {
                        seen[next] = true;
                        stack.push(next);
                    }
                }
            }
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components() <= 1
    }
}

/// Connected with |E| = |V| - 1.
pub fn is_tree(g: &PatchGraph) -> bool {
    g.is_connected() && g.edge_count() + 1 == g.vertex_count()
}

/// |E| - |V| + number of connected components.
pub fn betti_number(g: &PatchGraph) -> usize {
    g.edge_count() + g.connected_components() - g.vertex_count()
}

/// The abstract group the edge values live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupSpec {
    /// Z/m, written additively.
    Cyclic(u64),
    /// The symmetric group S_k.
    Symmetric(u8),
}

/// An element of a [`GroupSpec`] group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupElt {
    Cyclic(u64),
    /// One-line notation: perm[i] is the image of i.
    Perm(Vec<u8>),
}

impl GroupSpec {
    pub fn identity(&self) -> GroupElt {
        match self {
            GroupSpec::Cyclic(_) => GroupElt::Cyclic(0),
            GroupSpec::Symmetric(k) => GroupElt::Perm((0..*k).collect()),
        }
    }

    pub fn op(&self, a: &GroupElt, b: &GroupElt) -> GroupElt {
        match (self, a, b) {
            (GroupSpec::Cyclic(m), GroupElt::Cyclic(x), GroupElt::Cyclic(y)) => {
                GroupElt::Cyclic((x + y) % m)
            }
            (GroupSpec::Symmetric(_), GroupElt::Perm(p), GroupElt::Perm(q)) => {
                // (p q)(i) = p(q(i))
                GroupElt::Perm(q.iter().map(|&i| p[i as usize]).collect())
            }
            _ => panic!("group element does not match the group"),
        }
    }

    pub fn inverse(&self, a: &GroupElt) -> GroupElt {
        match (self, a) {
            (GroupSpec::Cyclic(m), GroupElt::Cyclic(x)) => GroupElt::Cyclic((m - x % m) % m),
            (GroupSpec::Symmetric(k), GroupElt::Perm(p)) => {
                let mut inv = vec![0u8; *k as usize];
                for (i, &pi) in p.iter().enumerate() {
                    inv[pi as usize] = i as u8;
                }
                GroupElt::Perm(inv)
            }
            _ => panic!("group element does not match the group"),
        }
    }

    pub fn validate(&self, a: &GroupElt) -> Result<()> {
        match (self, a) {
            (GroupSpec::Cyclic(m), GroupElt::Cyclic(x)) => {
                if *m == 0 {
                    return Err(Error::ParseError("cyclic modulus must be positive".into()));
                }
                if x >= m {
                    return Err(Error::ParseError(format!("{x} out of range mod {m}")));
                }
                Ok(())
            }
            (GroupSpec::Symmetric(k), GroupElt::Perm(p)) => {
                if p.len() != *k as usize {
                    return Err(Error::ParseError(format!(
                        "permutation length {} != {k}",
                        p.len()
                    )));
                }
                let set: BTreeSet<u8> = p.iter().copied().collect();
                if set.len() != p.len() || p.iter().any(|&i| i as usize >= p.len()) {
                    return Err(Error::ParseError(format!("not a permutation: {p:?}")));
                }
                Ok(())
            }
            _ => Err(Error::ParseError(
                "group element does not match the group".into(),
            )),
        }
    }
}

/// Leaf-peeling factorization on a tree: produces vertex values with
/// g_b = g_P * g_U for every branch b = (P, U), in that order. Leaves are
/// processed in lexicographic name order; vertices left unconstrained get
/// the identity.
pub fn tree_factorize(
    g: &PatchGraph,
    edge_values: &BTreeMap<String, GroupElt>,
    group: &GroupSpec,
) -> Result<BTreeMap<String, GroupElt>> {
    if !is_tree(g) {
        return Err(Error::NotATree(format!(
            "{} vertices, {} edges, {} components",
            g.vertex_count(),
            g.edge_count(),
            g.connected_components()
        )));
    }
    for b in &g.branches {
        let v = edge_values
            .get(&b.label)
            .ok_or_else(|| Error::MissingEdgeValue(b.label.clone()))?;
        group.validate(v)?;
    }

    let n = g.vertex_count();
    let mut alive_edges: Vec<bool> = vec![true; g.branches.len()];
    let mut alive_vertex: Vec<bool> = vec![true; n];
    let mut degree = vec![0usize; n];
    for b in &g.branches {
        degree[g.point_vertex(b)] += 1;
        degree[g.piece_vertex(b)] += 1;
    }

    // peel leaves in deterministic name order, then assign in reverse
    let mut peel_order: Vec<(usize, usize)> = Vec::new(); // (vertex, edge)
    loop {
        let mut leaves: Vec<usize> = (0..n)
            .filter(|&v| alive_vertex[v] && degree[v] == 1)
            .collect();
        if leaves.is_empty() {
            break;
        }
        leaves.sort_by(|&a, &b| g.vertex_name(a).cmp(g.vertex_name(b)));
        let v = leaves[0];
        let e = (0..g.branches.len())
            .find(|&e| {
                alive_edges[e]
                    && (g.point_vertex(&g.branches[e]) == v || g.piece_vertex(&g.branches[e]) == v)
            })
            .expect("leaf has an incident edge");
        let b = &g.branches[e];
        let other = if g.point_vertex(b) == v {
            g.piece_vertex(b)
        } else {
            g.point_vertex(b)
        };
        alive_edges[e] = false;
        alive_vertex[v] = false;
        degree[v] = 0;
        degree[other] -= 1;
        peel_order.push((v, e));
    }

    let mut assignment: Vec<GroupElt> = vec![group.identity(); n];
    for &(v, e) in peel_order.iter().rev() {
        let b = &g.branches[e];
        let gb = &edge_values[&b.label];
        let (p, u) = (g.point_vertex(b), g.piece_vertex(b));
        if v == p {
            // g_P = g_b * g_U^{-1}
            assignment[p] = group.op(gb, &group.inverse(&assignment[u]));
        } else {
            // g_U = g_P^{-1} * g_b
            assignment[u] = group.op(&group.inverse(&assignment[p]), gb);
        }
    }

    // recomposition invariant
    for b in &g.branches {
        let got = group.op(
            &assignment[g.point_vertex(b)],
            &assignment[g.piece_vertex(b)],
        );
        debug_assert_eq!(&got, &edge_values[&b.label], "branch {}", b.label);
    }

    Ok((0..n)
        .map(|v| (g.vertex_name(v).to_string(), assignment[v].clone()))
        .collect())
}

/// The triangle configuration: three components meeting pairwise in one
/// point each; the associated graph is a six-cycle.
pub fn triangle_model() -> ModelDescription {
    ModelDescription {
        components: vec!["X1".into(), "X2".into(), "X3".into()],
        points: vec![
            PointSpec {
                name: "P1".into(),
                on: vec!["X2".into(), "X3".into()],
            },
            PointSpec {
                name: "P2".into(),
                on: vec!["X1".into(), "X3".into()],
            },
            PointSpec {
                name: "P3".into(),
                on: vec!["X1".into(), "X2".into()],
            },
        ],
        edge_moduli: None,
    }
}
