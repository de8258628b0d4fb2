//! Twist assignment for a three-term complex `A --f--> B --g--> C`.
//!
//! Each nonzero entry imposes a difference constraint between the twists of
//! its row and column. The constraints form a graph; a BFS assigns potentials
//! per connected component and any edge closing an inconsistent cycle is
//! returned as a witness.

use std::collections::VecDeque;
use std::fmt;

use super::matrix::PolyMatrix;
use super::poly::Homogeneity;
use crate::cohomology::LineBundleSum;
use crate::error::{Error, Result};
use crate::lattice::MultiDeg;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    /// Column of `f`, i.e. a summand of `A`.
    Source(usize),
    /// Row of `f` / column of `g`.
    Middle(usize),
    /// Row of `g`.
    Target(usize),
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Source(i) => write!(f, "A[{i}]"),
            Node::Middle(i) => write!(f, "B[{i}]"),
            Node::Target(i) => write!(f, "C[{i}]"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapEntry {
    F { row: usize, col: usize },
    G { row: usize, col: usize },
}

impl fmt::Display for MapEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapEntry::F { row, col } => write!(f, "f[{row},{col}]"),
            MapEntry::G { row, col } => write!(f, "g[{row},{col}]"),
        }
    }
}

/// One traversal of a constraint edge: `twist(to) - twist(from) = delta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessStep {
    pub from: Node,
    pub to: Node,
    pub via: MapEntry,
    pub delta: MultiDeg,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InconsistentCycle {
    /// Closed walk; `steps[i].to == steps[i+1].from` and the last step returns to the first node.
    pub steps: Vec<WitnessStep>,
    /// Sum of the deltas around the cycle; nonzero.
    pub discrepancy: MultiDeg,
}

impl fmt::Display for InconsistentCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            write!(f, "{} -{}{}-> ", s.from, s.via, s.delta)?;
        }
        if let Some(first) = self.steps.first() {
            write!(f, "{}", first.from)?;
        }
        write!(f, " (sum {})", self.discrepancy)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradingSolution {
    pub source: Vec<MultiDeg>,
    pub middle: Vec<MultiDeg>,
    pub target: Vec<MultiDeg>,
    pub components: usize,
}

impl GradingSolution {
    pub fn source_sum(&self) -> LineBundleSum {
        LineBundleSum::from_expanded(&self.source)
    }

    pub fn middle_sum(&self) -> LineBundleSum {
        LineBundleSum::from_expanded(&self.middle)
    }

    pub fn target_sum(&self) -> LineBundleSum {
        LineBundleSum::from_expanded(&self.target)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GradingOutcome {
    Feasible(GradingSolution),
    Infeasible(InconsistentCycle),
}

impl GradingOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, GradingOutcome::Feasible(_))
    }
}

struct Edge {
    a: Node,
    b: Node,
    /// twist(b) - twist(a)
    delta: MultiDeg,
    via: MapEntry,
}

/// Solves for twists making `f` and `g` homogeneous. Each component is
/// pinned by giving its first `A` node (or, lacking one, its first node) the
/// twist `anchor`, which defaults to `(-1, ..., -1)`.
pub fn grading_inference(
    f: &PolyMatrix,
    g: &PolyMatrix,
    anchor: Option<&MultiDeg>,
) -> Result<GradingOutcome> {
    if g.cols() != f.rows() {
        return Err(Error::ShapeMismatch(format!(
            "f is {}x{} and g is {}x{}: not composable",
            f.rows(),
            f.cols(),
            g.rows(),
            g.cols()
        )));
    }
    let space = f.space();
    let anchor = anchor.cloned().unwrap_or_else(|| space.diagonal(-1));
    space.check_deg(&anchor)?;

    let mut edges = Vec::new();
    for (r, c, p) in f.entries() {
        if let Some(delta) = entry_degree(p, "f", r, c)? {
            edges.push(Edge {
                a: Node::Source(c),
                b: Node::Middle(r),
                delta,
                via: MapEntry::F { row: r, col: c },
            });
        }
    }
    for (r, c, p) in g.entries() {
        if let Some(delta) = entry_degree(p, "g", r, c)? {
            edges.push(Edge {
                a: Node::Middle(c),
                b: Node::Target(r),
                delta,
                via: MapEntry::G { row: r, col: c },
            });
        }
    }

    let (na, nb, nc) = (f.cols(), f.rows(), g.rows());
    let index = |n: Node| match n {
        Node::Source(i) => i,
        Node::Middle(i) => na + i,
        Node::Target(i) => na + nb + i,
    };
    let total = na + nb + nc;
    let mut node_of = Vec::with_capacity(total);
    node_of.extend((0..na).map(Node::Source));
    node_of.extend((0..nb).map(Node::Middle));
    node_of.extend((0..nc).map(Node::Target));

    // adjacency: (neighbor index, edge index, forward?)
    let mut adj: Vec<Vec<(usize, usize, bool)>> = vec![Vec::new(); total];
    for (ei, e) in edges.iter().enumerate() {
        adj[index(e.a)].push((index(e.b), ei, true));
        adj[index(e.b)].push((index(e.a), ei, false));
    }

    let mut twist: Vec<Option<MultiDeg>> = vec![None; total];
    // parent[v] = (parent node, edge index, forward?)
    let mut parent: Vec<Option<(usize, usize, bool)>> = vec![None; total];
    let mut components = 0;

    for root in 0..total {
        if twist[root].is_some() {
            continue;
        }
        components += 1;
        twist[root] = Some(anchor.clone());
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let tu = twist[u].clone().expect("queued nodes are assigned");
            for &(v, ei, forward) in &adj[u] {
                let step = if forward { edges[ei].delta.clone() } else { -&edges[ei].delta };
                let want = &tu + &step;
                match &twist[v] {
                    None => {
                        twist[v] = Some(want);
                        parent[v] = Some((u, ei, forward));
                        queue.push_back(v);
                    }
                    Some(tv) if *tv == want => {}
                    Some(_) => {
                        let cycle = build_cycle(u, v, ei, forward, &parent, &edges, &node_of);
                        return Ok(GradingOutcome::Infeasible(cycle));
                    }
                }
            }
        }
    }

    let twist: Vec<MultiDeg> = twist.into_iter().map(|t| t.expect("all assigned")).collect();
    Ok(GradingOutcome::Feasible(GradingSolution {
        source: twist[..na].to_vec(),
        middle: twist[na..na + nb].to_vec(),
        target: twist[na + nb..].to_vec(),
        components,
    }))
}

fn entry_degree(
    p: &super::poly::MultiPoly,
    map: &str,
    r: usize,
    c: usize,
) -> Result<Option<MultiDeg>> {
    match p.homogeneity() {
        Homogeneity::Zero => Ok(None),
        Homogeneity::Homogeneous(d) => Ok(Some(d)),
        Homogeneity::Inhomogeneous(_) => Err(Error::Inhomogeneous(format!(
            "{map}[{r},{c}] = {p} is not multihomogeneous"
        ))),
    }
}

fn path_to_root(mut v: usize, parent: &[Option<(usize, usize, bool)>]) -> Vec<usize> {
    let mut path = vec![v];
    while let Some((p, _, _)) = parent[v] {
        path.push(p);
        v = p;
    }
    path
}

fn tree_step(
    child: usize,
    parent: &[Option<(usize, usize, bool)>],
    edges: &[Edge],
    node_of: &[Node],
    downward: bool,
) -> WitnessStep {
    let (p, ei, forward) = parent[child].expect("non-root");
    // parent -> child has delta `d`; child -> parent has `-d`
    let d = if forward { edges[ei].delta.clone() } else { -&edges[ei].delta };
    if downward {
        WitnessStep { from: node_of[p], to: node_of[child], via: edges[ei].via, delta: d }
    } else {
        WitnessStep { from: node_of[child], to: node_of[p], via: edges[ei].via, delta: -&d }
    }
}

fn build_cycle(
    u: usize,
    v: usize,
    ei: usize,
    forward: bool,
    parent: &[Option<(usize, usize, bool)>],
    edges: &[Edge],
    node_of: &[Node],
) -> InconsistentCycle {
    let pu = path_to_root(u, parent);
    let pv = path_to_root(v, parent);
    let lca = *pu.iter().find(|x| pv.contains(x)).expect("same component");
    let down_u: Vec<usize> = pu.iter().take_while(|&&x| x != lca).copied().collect();
    let up_v: Vec<usize> = pv.iter().take_while(|&&x| x != lca).copied().collect();

    let mut steps = Vec::new();
    for &x in down_u.iter().rev() {
        steps.push(tree_step(x, parent, edges, node_of, true));
    }
    let closing = if forward { edges[ei].delta.clone() } else { -&edges[ei].delta };
    steps.push(WitnessStep { from: node_of[u], to: node_of[v], via: edges[ei].via, delta: closing });
    for &x in &up_v {
        steps.push(tree_step(x, parent, edges, node_of, false));
    }
    let m = steps[0].delta.len();
    let discrepancy = steps.iter().fold(MultiDeg::zero(m), |acc, s| &acc + &s.delta);
    InconsistentCycle { steps, discrepancy }
}
