//! The combinatorial obstruction computation: image and cokernel of the
//! patching product map on rho-power classes.
//!
//! Vertices carry the groups generated by the class of rho at the patches
//! F_P, F_U; branches carry the class groups at F_{P,U}. With the default
//! moduli the product map sends a vertex assignment (g_v) to the edge
//! vector (g_P + g_U). Cokernel invariants come from the Smith normal form
//! of the product-map matrix stacked with the edge-modulus relations, and
//! infeasibility answers carry a verified annihilating character.

use crate::error::{Error, Result};
use crate::patch_graph::{is_tree, tree_factorize, GroupElt, GroupSpec, PatchGraph};
use crate::snf::{smith_normal_form, solve, IntMat, LinearSolve};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone)]
pub struct ObstructionProblem {
    graph: PatchGraph,
    n: u64,
    /// Per-branch divisor d_e of n.
    edge_moduli: Vec<u64>,
    /// Per-vertex divisor o_v of n (points first, then pieces).
    vertex_orders: Vec<u64>,
}

/// Outcome of an image-membership or cokernel computation.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ShaReport {
    pub n: u64,
    /// Invariant factors > 1 of the cokernel; empty means the product map
    /// is onto and the obstruction vanishes.
    pub invariant_factors: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<BTreeMap<String, u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub feasible: Option<bool>,
    /// Vertex exponents recomposing to the target.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<BTreeMap<String, u64>>,
    /// Edge character annihilating the image but not the target, mod n.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<BTreeMap<String, i64>>,
    /// Set when moduli deviate from the paper-backed defaults.
    pub beyond_paper: bool,
}

impl ObstructionProblem {
    /// Every vertex order and edge modulus equal to n.
    pub fn with_defaults(graph: PatchGraph, n: u64) -> Result<Self> {
        let e = graph.edge_count();
        let v = graph.vertex_count();
        Self::new(graph, n, vec![n; e], vec![n; v])
    }

    pub fn new(
        graph: PatchGraph,
        n: u64,
        edge_moduli: Vec<u64>,
        vertex_orders: Vec<u64>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::IncompatibleModulus("n must be positive".into()));
        }
        if edge_moduli.len() != graph.edge_count() {
            return Err(Error::DimensionMismatch {
                expected: graph.edge_count(),
                got: edge_moduli.len(),
            });
        }
        if vertex_orders.len() != graph.vertex_count() {
            return Err(Error::DimensionMismatch {
                expected: graph.vertex_count(),
                got: vertex_orders.len(),
            });
        }
        for &d in edge_moduli.iter().chain(&vertex_orders) {
            if d == 0 || !n.is_multiple_of(d) {
                return Err(Error::IncompatibleModulus(format!(
                    "modulus {d} does not divide n = {n}"
                )));
            }
        }
        Ok(ObstructionProblem {
            graph,
            n,
            edge_moduli,
            vertex_orders,
        })
    }

    /// Overrides edge moduli by branch label.
    pub fn with_edge_moduli(mut self, moduli: &BTreeMap<String, u64>) -> Result<Self> {
        for (label, &d) in moduli {
            let idx = self
                .graph
                .branch_by_label(label)
                .ok_or_else(|| Error::MissingEdgeValue(label.clone()))?;
            if d == 0 || !self.n.is_multiple_of(d) {
                return Err(Error::IncompatibleModulus(format!(
                    "modulus {d} does not divide n = {}",
                    self.n
                )));
            }
            self.edge_moduli[idx] = d;
        }
        Ok(self)
    }

    pub fn graph(&self) -> &PatchGraph {
        &self.graph
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn edge_moduli(&self) -> &[u64] {
        &self.edge_moduli
    }

    /// True when some modulus deviates from the paper-backed default n.
    pub fn beyond_paper(&self) -> bool {
        self.edge_moduli.iter().any(|&d| d != self.n)
            || self.vertex_orders.iter().any(|&o| o != self.n)
    }

    fn has_default_moduli(&self) -> bool {
        !self.beyond_paper()
    }

    /// The product-map matrix: one row per branch with entries n/o_P and
    /// n/o_U in the endpoint columns.
    pub fn phi_matrix(&self) -> IntMat {
        let mut m = IntMat::zero(self.graph.edge_count(), self.graph.vertex_count());
        for (row, b) in self.graph.branches.iter().enumerate() {
            let p = self.graph.point_vertex(b);
            let u = self.graph.piece_vertex(b);
            m[(row, p)] += (self.n / self.vertex_orders[p]) as i64;
            m[(row, u)] += (self.n / self.vertex_orders[u]) as i64;
        }
        m
    }

    /// phi stacked with the diagonal edge-modulus relations.
    fn stacked_matrix(&self) -> IntMat {
        let e = self.graph.edge_count();
        let v = self.graph.vertex_count();
        let phi = self.phi_matrix();
        let mut m = IntMat::zero(e, v + e);
        for i in 0..e {
            for j in 0..v {
                m[(i, j)] = phi[(i, j)];
            }
            m[(i, v + i)] = self.edge_moduli[i] as i64;
        }
        m
    }

    /// Invariant factors (> 1) of the cokernel of the product map.
    pub fn cokernel_invariants(&self) -> Vec<u64> {
        let snf = smith_normal_form(&self.stacked_matrix());
        snf.nontrivial_factors()
            .into_iter()
            .map(|d| d as u64)
            .collect()
    }

    /// Decides whether a target edge vector lies in the image of the
    /// product map; on success the witness recomposes to the target, on
    /// failure the certificate annihilates the image but not the target.
    pub fn in_image(&self, target: &[u64]) -> Result<ShaReport> {
        let e = self.graph.edge_count();
        if target.len() != e {
            return Err(Error::DimensionMismatch {
                expected: e,
                got: target.len(),
            });
        }
        let target: Vec<u64> = target
            .iter()
            .zip(&self.edge_moduli)
            .map(|(&t, &d)| t % d)
            .collect();
        let mut report = ShaReport {
            n: self.n,
            invariant_factors: self.cokernel_invariants(),
            target: Some(self.label_edges(&target)),
            feasible: None,
            witness: None,
            certificate: None,
            beyond_paper: self.beyond_paper(),
        };

        // On a tree with default moduli the witness comes straight from
        // the leaf-peeling factorization.
        if is_tree(&self.graph) && self.has_default_moduli() {
            let group = GroupSpec::Cyclic(self.n);
            let values: BTreeMap<String, GroupElt> = self
                .graph
                .branches
                .iter()
                .zip(&target)
                .map(|(b, &t)| (b.label.clone(), GroupElt::Cyclic(t)))
                .collect();
            let assignment = tree_factorize(&self.graph, &values, &group)?;
            let witness: Vec<u64> = (0..self.graph.vertex_count())
                .map(|v| match assignment[self.graph.vertex_name(v)] {
                    GroupElt::Cyclic(x) => x,
                    _ => unreachable!(),
                })
                .collect();
            self.check_witness(&witness, &target);
            report.feasible = Some(true);
            report.witness = Some(self.label_vertices(&witness));
            return Ok(report);
        }

        let t_signed: Vec<i64> = target.iter().map(|&t| t as i64).collect();
        match solve(&self.stacked_matrix(), &t_signed)? {
            LinearSolve::Solution(z) => {
                let witness: Vec<u64> = z[..self.graph.vertex_count()]
                    .iter()
                    .map(|&x| x.rem_euclid(self.n as i64) as u64)
                    .collect();
                self.check_witness(&witness, &target);
                report.feasible = Some(true);
                report.witness = Some(self.label_vertices(&witness));
            }
            LinearSolve::Obstruction { row, modulus } => {
                let scale = self.n as i64 / modulus;
                let cert: Vec<i64> = row
                    .iter()
                    .map(|&c| (c * scale).rem_euclid(self.n as i64))
                    .collect();
                self.check_certificate(&cert, &target);
                report.feasible = Some(false);
                report.certificate = Some(
                    self.graph
                        .branches
                        .iter()
                        .zip(&cert)
                        .map(|(b, &c)| (b.label.clone(), c))
                        .collect(),
                );
            }
        }
        Ok(report)
    }

    fn label_edges(&self, values: &[u64]) -> BTreeMap<String, u64> {
        self.graph
            .branches
            .iter()
            .zip(values)
            .map(|(b, &v)| (b.label.clone(), v))
            .collect()
    }

    fn label_vertices(&self, values: &[u64]) -> BTreeMap<String, u64> {
        (0..self.graph.vertex_count())
            .map(|v| (self.graph.vertex_name(v).to_string(), values[v]))
            .collect()
    }

    fn check_witness(&self, witness: &[u64], target: &[u64]) {
        for (row, b) in self.graph.branches.iter().enumerate() {
            let p = self.graph.point_vertex(b);
            let u = self.graph.piece_vertex(b);
            let got = (self.n / self.vertex_orders[p]) * witness[p]
                + (self.n / self.vertex_orders[u]) * witness[u];
            let d = self.edge_moduli[row];
            assert_eq!(got % d, target[row] % d, "witness fails on {}", b.label);
        }
    }

    fn check_certificate(&self, cert: &[i64], target: &[u64]) {
        let n = self.n as i64;
        let phi = self.phi_matrix();
        for j in 0..self.graph.vertex_count() {
            let s: i64 = (0..cert.len()).map(|i| cert[i] * phi[(i, j)]).sum();
            assert_eq!(s.rem_euclid(n), 0, "certificate does not annihilate phi");
        }
        for (i, &d) in self.edge_moduli.iter().enumerate() {
            assert_eq!(
                (cert[i] * d as i64).rem_euclid(n),
                0,
                "certificate does not annihilate the edge relations"
            );
        }
        let pairing: i64 = cert.iter().zip(target).map(|(&c, &t)| c * t as i64).sum();
        assert_ne!(pairing.rem_euclid(n), 0, "certificate pairs to zero");
    }

    /// Size of the image of the product map, by enumerating all n^V vertex
    /// assignments. This is the independent oracle for the Smith-form
    /// cokernel: edge vectors are packed mixed-radix into a bitset and the
    /// assignment odometer updates incident edges incrementally.
    pub fn image_size_by_enumeration(&self) -> u64 {
        let v = self.graph.vertex_count();
        let e = self.graph.edge_count();
        if v == 0 || e == 0 {
            return 1;
        }
        let total: u64 = self.edge_moduli.iter().product();
        assert!(total <= 1 << 26, "edge group too large for enumeration");
        let mut radix = vec![1u64; e];
        for i in 1..e {
            radix[i] = radix[i - 1] * self.edge_moduli[i - 1];
        }
        // per vertex: (edge index, weight n/o_v); a +1 bump of the vertex
        // moves every incident edge value by +weight mod d_e, including
        // across the wrap n-1 -> 0 since d_e | n
        let mut incident: Vec<Vec<(usize, u64)>> = vec![Vec::new(); v];
        for (i, b) in self.graph.branches.iter().enumerate() {
            let p = self.graph.point_vertex(b);
            let u = self.graph.piece_vertex(b);
            incident[p].push((i, self.n / self.vertex_orders[p]));
            incident[u].push((i, self.n / self.vertex_orders[u]));
        }
        let mut seen = vec![false; total as usize];
        let mut assignment = vec![0u64; v];
        let mut edge_vals = vec![0u64; e];
        let mut index = 0u64;
        seen[0] = true;
        let mut count = 1u64;
        'outer: loop {
            let mut pos = 0;
            loop {
                if pos == v {
                    break 'outer;
                }
                assignment[pos] += 1;
                let wrapped = assignment[pos] == self.n;
                if wrapped {
                    assignment[pos] = 0;
                }
                for &(ei, w) in &incident[pos] {
                    let d = self.edge_moduli[ei];
                    let old = edge_vals[ei];
                    let new = (old + w) % d;
                    edge_vals[ei] = new;
                    index = index + new * radix[ei] - old * radix[ei];
                }
                if !wrapped {
                    break;
                }
                pos += 1;
            }
            if !seen[index as usize] {
                seen[index as usize] = true;
                count += 1;
            }
        }
        count
    }

    /// Order of the cokernel implied by the invariant factors.
    pub fn cokernel_order(&self) -> u64 {
        self.cokernel_invariants().iter().product()
    }

    /// Order of the full edge group, prod of the edge moduli.
    pub fn edge_group_order(&self) -> u64 {
        self.edge_moduli.iter().product()
    }
}
