//! The graphs `𝔾_{g,n}` whose weighted sum reproduces topological recursion.
//!
//! A graph is built by the same case split as the recursion. The vertex at
//! the first leaf either
//!
//! * (I) carries another leaf `ℓ_m` and a tree edge to a graph of `𝔾_{g,n−1}`,
//! * (I′) has both remaining edges going into one graph of `𝔾_{g−1,n+1}`: the
//!   tree edge to its first leaf and a back edge from its second leaf,
//! * (II) has tree edges to two graphs splitting the remaining leaves.
//!
//! The spanning tree consists of the edges created as tree edges. Swapping the
//! two branches in case II gives the same graph, so only one order is kept.
//! The automorphism weight is `2^{#I′}` times the number of tree-preserving
//! automorphisms, which come from identical leafless case II branches.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::airy::{AiryStructure, IndexSet};
use crate::coeff::{Rational, Scalar};
use crate::tr::{cells_at, euler_degree, is_stable};
use crate::Error;

/// Derivation of a graph; ports are the leaves other than the first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Term {
    /// The single vertex of `𝔾_{0,3}`.
    Tripod,
    /// The one-loop vertex of `𝔾_{1,1}`.
    Loop,
    /// Case I with port `m` (0-based) at the root vertex.
    Absorb { m: usize, child: Arc<Term> },
    /// Case I′.
    Handle { child: Arc<Term> },
    /// Case II; `left_ports` lists the ports carried by the left branch.
    Split { g_left: usize, left_ports: Vec<usize>, left: Arc<Term>, right: Arc<Term> },
}

impl Term {
    fn handles(&self) -> u32 {
        match self {
            Term::Tripod | Term::Loop => 0,
            Term::Absorb { child, .. } => child.handles(),
            Term::Handle { child } => 1 + child.handles(),
            Term::Split { left, right, .. } => left.handles() + right.handles(),
        }
    }

    /// Tree-preserving automorphisms: swaps of identical leafless branches.
    fn symmetry(&self) -> u64 {
        match self {
            Term::Tripod | Term::Loop => 1,
            Term::Absorb { child, .. } | Term::Handle { child } => child.symmetry(),
            Term::Split { left_ports, left, right, .. } => {
                let swap = if left_ports.is_empty() && left == right && self.port_count() == 0 { 2 } else { 1 };
                swap * left.symmetry() * right.symmetry()
            }
        }
    }

    fn port_count(&self) -> usize {
        match self {
            Term::Tripod => 2,
            Term::Loop => 0,
            Term::Absorb { child, .. } => child.port_count() + 1,
            Term::Handle { child } => child.port_count() - 1,
            Term::Split { left, right, .. } => left.port_count() + right.port_count(),
        }
    }
}

#[derive(Default)]
struct Enumerator {
    memo: BTreeMap<(usize, usize), Arc<Vec<Arc<Term>>>>,
}

impl Enumerator {
    fn terms(&mut self, g: usize, n: usize) -> Arc<Vec<Arc<Term>>> {
        if !is_stable(g, n) {
            return Arc::new(Vec::new());
        }
        if let Some(t) = self.memo.get(&(g, n)) {
            return t.clone();
        }
        let mut out: BTreeSet<Arc<Term>> = BTreeSet::new();
        if (g, n) == (0, 3) {
            out.insert(Arc::new(Term::Tripod));
        } else if (g, n) == (1, 1) {
            out.insert(Arc::new(Term::Loop));
        } else {
            let ports = n - 1;
            for m in 0..ports {
                for child in self.terms(g, n - 1).iter() {
                    out.insert(Arc::new(Term::Absorb { m, child: child.clone() }));
                }
            }
            if g >= 1 {
                for child in self.terms(g - 1, n + 1).iter() {
                    out.insert(Arc::new(Term::Handle { child: child.clone() }));
                }
            }
            for mask in 0u64..(1 << ports) {
                let left_ports: Vec<usize> = (0..ports).filter(|p| mask >> p & 1 == 1).collect();
                let right_ports: Vec<usize> = (0..ports).filter(|p| mask >> p & 1 == 0).collect();
                for g_left in 0..=g {
                    let g_right = g - g_left;
                    if !is_stable(g_left, left_ports.len() + 1) || !is_stable(g_right, right_ports.len() + 1) {
                        continue;
                    }
                    let lefts = self.terms(g_left, left_ports.len() + 1);
                    let rights = self.terms(g_right, right_ports.len() + 1);
                    for l in lefts.iter() {
                        for r in rights.iter() {
                            // Keep the order with the smaller left branch.
                            if (g_left, &left_ports, l) > (g_right, &right_ports, r) {
                                continue;
                            }
                            out.insert(Arc::new(Term::Split {
                                g_left,
                                left_ports: left_ports.clone(),
                                left: l.clone(),
                                right: r.clone(),
                            }));
                        }
                    }
                }
            }
        }
        let v = Arc::new(out.into_iter().collect::<Vec<_>>());
        self.memo.insert((g, n), v.clone());
        v
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeKind {
    /// External leaf with its label (0 is the first leaf).
    Leaf(usize),
    /// Spanning-tree edge from parent `u` to child `v`.
    Tree,
    /// Non-tree edge from descendant `u` to ancestor `v`.
    Back,
    /// Self-loop of a one-loop vertex.
    Loop,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub kind: EdgeKind,
}

/// A trivalent graph with ordered leaves and a spanning tree.
#[derive(Clone, Debug)]
pub struct TRGraph {
    pub g: usize,
    pub n: usize,
    pub vertices: usize,
    pub edges: Vec<Edge>,
    pub aut_order: u64,
    term: Arc<Term>,
}

#[derive(Clone, Copy)]
enum Target {
    Leaf(usize),
    Vertex(usize),
}

fn build(term: &Term, parent: Option<usize>, ports: &[Target], edges: &mut Vec<Edge>, next: &mut usize) {
    let v = *next;
    *next += 1;
    match parent {
        None => edges.push(Edge { u: v, v, kind: EdgeKind::Leaf(0) }),
        Some(p) => edges.push(Edge { u: p, v, kind: EdgeKind::Tree }),
    }
    let attach = |t: Target, edges: &mut Vec<Edge>| match t {
        Target::Leaf(l) => edges.push(Edge { u: v, v, kind: EdgeKind::Leaf(l) }),
        Target::Vertex(a) => edges.push(Edge { u: v, v: a, kind: EdgeKind::Back }),
    };
    match term {
        Term::Tripod => {
            attach(ports[0], edges);
            attach(ports[1], edges);
        }
        Term::Loop => edges.push(Edge { u: v, v, kind: EdgeKind::Loop }),
        Term::Absorb { m, child } => {
            attach(ports[*m], edges);
            let rest: Vec<Target> = ports.iter().enumerate().filter(|(p, _)| p != m).map(|(_, t)| *t).collect();
            build(child, Some(v), &rest, edges, next);
        }
        Term::Handle { child } => {
            let mut sub = vec![Target::Vertex(v)];
            sub.extend_from_slice(ports);
            build(child, Some(v), &sub, edges, next);
        }
        Term::Split { left_ports, left, right, .. } => {
            let l: Vec<Target> = left_ports.iter().map(|&p| ports[p]).collect();
            let r: Vec<Target> =
                (0..ports.len()).filter(|p| !left_ports.contains(p)).map(|p| ports[p]).collect();
            build(left, Some(v), &l, edges, next);
            build(right, Some(v), &r, edges, next);
        }
    }
}

impl TRGraph {
    fn from_term(g: usize, n: usize, term: Arc<Term>) -> Self {
        let mut edges = Vec::new();
        let mut next = 0;
        let ports: Vec<Target> = (1..n).map(Target::Leaf).collect();
        build(&term, None, &ports, &mut edges, &mut next);
        let aut_order = (1u64 << term.handles()) * term.symmetry();
        TRGraph { g, n, vertices: next, edges, aut_order, term }
    }

    pub fn weight(&self) -> Rational {
        Rational::new(1.into(), self.aut_order.into())
    }

    pub fn handle_count(&self) -> u32 {
        self.term.handles()
    }

    /// First Betti number of the graph without its leaves.
    pub fn betti(&self) -> usize {
        let internal = self.edges.iter().filter(|e| !matches!(e.kind, EdgeKind::Leaf(_))).count();
        internal + 1 - self.vertices
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices];
        for e in &self.edges {
            match e.kind {
                EdgeKind::Leaf(_) => deg[e.u] += 1,
                _ => {
                    deg[e.u] += 1;
                    deg[e.v] += 1;
                }
            }
        }
        deg
    }

    fn parents(&self) -> Vec<Option<usize>> {
        let mut parent = vec![None; self.vertices];
        for e in &self.edges {
            if e.kind == EdgeKind::Tree {
                parent[e.v] = Some(e.u);
            }
        }
        parent
    }

    fn is_ancestor(parent: &[Option<usize>], anc: usize, mut v: usize) -> bool {
        while let Some(p) = parent[v] {
            if p == anc {
                return true;
            }
            v = p;
        }
        false
    }

    /// Checks trivalence, genus, leaf labels, tree shape and the ancestor
    /// property of non-tree edges.
    pub fn check_invariants(&self) -> Result<(), String> {
        if self.degrees().iter().any(|&d| d != 3) {
            return Err("vertex of degree other than 3".into());
        }
        if self.betti() != self.g {
            return Err(format!("Betti number {} differs from genus {}", self.betti(), self.g));
        }
        let mut labels: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|e| if let EdgeKind::Leaf(l) = e.kind { Some(l) } else { None })
            .collect();
        labels.sort_unstable();
        if labels != (0..self.n).collect::<Vec<_>>() {
            return Err("leaf labels are not 0..n".into());
        }
        let tree = self.edges.iter().filter(|e| e.kind == EdgeKind::Tree).count();
        if tree + 1 != self.vertices {
            return Err("tree edges do not span".into());
        }
        let parent = self.parents();
        if parent[0].is_some() || (1..self.vertices).any(|v| parent[v].is_none()) {
            return Err("tree is not rooted at the first leaf".into());
        }
        for e in &self.edges {
            if e.kind == EdgeKind::Back && !Self::is_ancestor(&parent, e.v, e.u) {
                return Err(format!("non-tree edge {}-{} does not join ancestor and descendant", e.u, e.v));
            }
        }
        if !self.aut_order.is_power_of_two() {
            return Err("aut_order is not a power of 2".into());
        }
        Ok(())
    }

    /// Tree-preserving automorphisms fixing the leaves, found by trying every
    /// vertex permutation.
    pub fn brute_force_tree_automorphisms(&self) -> u64 {
        let canon = |perm: &[usize]| -> Vec<Edge> {
            let mut es: Vec<Edge> = self
                .edges
                .iter()
                .map(|e| Edge { u: perm[e.u], v: perm[e.v], kind: e.kind })
                .collect();
            es.sort_unstable();
            es
        };
        let target = canon(&(0..self.vertices).collect::<Vec<_>>());
        let mut perm: Vec<usize> = (0..self.vertices).collect();
        let mut count = 0;
        permute(&mut perm, 0, &mut |p| {
            if canon(p) == target {
                count += 1;
            }
        });
        count
    }

    /// Graphviz text; tree edges are bold, leaves are drawn as points.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph G {\n");
        for v in 0..self.vertices {
            let _ = writeln!(out, "  v{v};");
        }
        for e in &self.edges {
            let _ = match e.kind {
                EdgeKind::Leaf(l) => writeln!(out, "  l{l} [shape=point]; v{} -- l{l} [label=\"{}\"];", e.u, l + 1),
                EdgeKind::Tree => writeln!(out, "  v{} -- v{} [style=bold];", e.u, e.v),
                EdgeKind::Back => writeln!(out, "  v{} -- v{} [style=dashed];", e.u, e.v),
                EdgeKind::Loop => writeln!(out, "  v{} -- v{};", e.u, e.v),
            };
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> Value {
        let edges: Vec<Value> = self
            .edges
            .iter()
            .map(|e| match e.kind {
                EdgeKind::Leaf(l) => json!({ "kind": "leaf", "vertex": e.u, "leaf": l }),
                EdgeKind::Tree => json!({ "kind": "tree", "from": e.u, "to": e.v }),
                EdgeKind::Back => json!({ "kind": "back", "from": e.u, "to": e.v }),
                EdgeKind::Loop => json!({ "kind": "loop", "vertex": e.u }),
            })
            .collect();
        json!({ "g": self.g, "n": self.n, "vertices": self.vertices, "aut_order": self.aut_order, "edges": edges })
    }
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

/// All graphs of `𝔾_{g,n}`, each once; empty when `2g−2+n ≤ 0`.
pub fn enumerate(g: usize, n: usize) -> Vec<TRGraph> {
    let mut e = Enumerator::default();
    e.terms(g, n).iter().map(|t| TRGraph::from_term(g, n, t.clone())).collect()
}

/// `|𝔾_{g,n}| = Σ_Γ 1/aut(Γ)`.
pub fn count(g: usize, n: usize) -> Rational {
    enumerate(g, n).iter().map(TRGraph::weight).sum()
}

/// Counts for all cells up to a given Euler degree.
pub fn counts_up_to(chi_max: usize) -> Vec<((usize, usize), Rational)> {
    (1..=chi_max).flat_map(cells_at).map(|(g, n)| ((g, n), count(g, n))).collect()
}

fn eval<S: Scalar>(s: &AiryStructure<S>, term: &Term, root: usize, ports: &[usize]) -> S {
    let dim = s.dim();
    let get = |x: Option<&S>| x.cloned().unwrap_or_else(S::zero);
    match term {
        Term::Tripod => get(s.a(root, ports[0], ports[1])),
        Term::Loop => get(s.d(root)),
        Term::Absorb { m, child } => {
            let rest: Vec<usize> = ports.iter().enumerate().filter(|(p, _)| p != m).map(|(_, c)| *c).collect();
            let mut total = S::zero();
            for a in 0..dim {
                if let Some(b) = s.b(root, ports[*m], a) {
                    total.add_mul(b, &eval(s, child, a, &rest));
                }
            }
            total
        }
        Term::Handle { child } => {
            let mut total = S::zero();
            let mut sub = vec![0; ports.len() + 1];
            sub[1..].copy_from_slice(ports);
            for (&(i, a, b), c) in s.c_entries() {
                if i == root {
                    sub[0] = b;
                    total.add_mul(c, &eval(s, child, a, &sub));
                }
            }
            total
        }
        Term::Split { left_ports, left, right, .. } => {
            let l: Vec<usize> = left_ports.iter().map(|&p| ports[p]).collect();
            let r: Vec<usize> = (0..ports.len()).filter(|p| !left_ports.contains(p)).map(|p| ports[p]).collect();
            let lv: Vec<S> = (0..dim).map(|a| eval(s, left, a, &l)).collect();
            let rv: Vec<S> = (0..dim).map(|b| eval(s, right, b, &r)).collect();
            let mut total = S::zero();
            for (&(i, a, b), c) in s.c_entries() {
                if i == root {
                    total.add_mul(&(c.clone() * lv[a].clone()), &rv[b]);
                }
            }
            total
        }
    }
}

/// `Σ_Γ Σ_colorings w(Γ, γ)/aut(Γ)` with the leaf colors fixed.
pub fn weighted_sum<S: Scalar>(s: &AiryStructure<S>, g: usize, n: usize, leaf_colors: &[usize]) -> Result<S, Error> {
    if leaf_colors.len() != n {
        return Err(Error::invalid("one color per leaf is required"));
    }
    if leaf_colors.iter().any(|&c| c >= s.dim()) {
        return Err(Error::invalid("leaf color outside the index set"));
    }
    if !is_stable(g, n) {
        return Ok(S::zero());
    }
    if let IndexSet::Graded { max_grade, .. } = s.index_set() {
        let sp = s
            .sparsity()
            .ok_or_else(|| Error::UnboundedSum("graded structure without a sparsity rule".into()))?;
        let chi = euler_degree(g, n);
        for (g2, n2) in (1..chi).flat_map(cells_at) {
            let bound = sp.degree_bound(g2, n2).ok_or_else(|| Error::UnboundedSum("unbounded grades".into()))?;
            if bound > max_grade as i64 {
                return Err(Error::Truncation(format!("internal edges of F_({g2},{n2}) exceed the truncation")));
            }
        }
    }
    let mut total = S::zero();
    for graph in enumerate(g, n) {
        let w = eval(s, &graph.term, leaf_colors[0], &leaf_colors[1..]);
        total.add_ref(&w.scale(&graph.weight()));
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{int, rat};
    use crate::tr;

    type Q = Rational;

    #[test]
    fn small_counts() {
        assert_eq!(count(0, 3), int(1));
        assert_eq!(count(0, 4), int(3));
        assert_eq!(count(1, 1), int(1));
        assert_eq!(count(1, 2), rat(3, 2));
        assert_eq!(count(2, 1), rat(5, 4));
        assert_eq!(count(1, 3), rat(11, 2));
        assert!(enumerate(0, 2).is_empty());
        assert!(enumerate(0, 1).is_empty());
    }

    #[test]
    fn base_graphs() {
        let g03 = enumerate(0, 3);
        assert_eq!(g03.len(), 1);
        assert_eq!(g03[0].aut_order, 1);
        let g11 = enumerate(1, 1);
        assert_eq!(g11.len(), 1);
        assert_eq!(g11[0].aut_order, 1);
        assert!(g11[0].edges.iter().any(|e| e.kind == EdgeKind::Loop));
    }

    #[test]
    fn counts_match_unit_recursion() {
        let t = tr::compute(&AiryStructure::<Q>::unit(), 5).unwrap();
        for ((g, n), c) in counts_up_to(5) {
            assert_eq!(c, t.value(g, &vec![0; n]), "({g},{n})");
        }
    }

    #[test]
    fn invariants_and_automorphisms() {
        for chi in 1..=4 {
            for (g, n) in cells_at(chi) {
                for graph in enumerate(g, n) {
                    graph.check_invariants().unwrap();
                    if chi <= 3 {
                        assert_eq!(
                            graph.aut_order,
                            (1 << graph.handle_count()) * graph.brute_force_tree_automorphisms(),
                            "{}",
                            graph.to_dot()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn identical_branches_have_symmetry() {
        let graphs = enumerate(2, 1);
        let split = graphs.iter().find(|g| matches!(*g.term, Term::Split { .. })).unwrap();
        assert_eq!(split.aut_order, 2);
        assert_eq!(split.brute_force_tree_automorphisms(), 2);
    }

    #[test]
    fn weighted_sum_base_cases() {
        let mut s = AiryStructure::<Q>::zero(IndexSet::Finite { dim: 2 });
        s.set_a_symmetric(0, 1, 1, rat(2, 3));
        s.set_d(1, rat(-1, 5));
        assert_eq!(weighted_sum(&s, 0, 3, &[1, 0, 1]).unwrap(), rat(2, 3));
        assert_eq!(weighted_sum(&s, 1, 1, &[1]).unwrap(), rat(-1, 5));
        assert!(weighted_sum(&s, 0, 3, &[0, 0]).is_err());
    }

    #[test]
    fn exports() {
        let g = &enumerate(1, 2)[0];
        assert!(g.to_dot().starts_with("graph G {"));
        assert_eq!(g.to_json()["n"], json!(2));
    }
}
