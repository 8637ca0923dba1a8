//! Directed graphs, shortcut sets, and their text formats.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::scalar::Weight;

/// A directed graph on vertices `0..n` with non-negative edge weights.
///
/// Self-loops and parallel edges are rejected by [`DiGraph::from_edges`] and
/// silently dropped (with a warning entry) by the parser.
#[derive(Clone, Debug, PartialEq)]
pub struct DiGraph<W> {
    n: usize,
    weighted: bool,
    out: Vec<Vec<(usize, W)>>,
    inc: Vec<Vec<(usize, W)>>,
    m: usize,
}

impl<W: Weight> DiGraph<W> {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            weighted: false,
            out: vec![Vec::new(); n],
            inc: vec![Vec::new(); n],
            m: 0,
        }
    }

    /// Builds an unweighted graph; every edge gets weight one.
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Self::from_edges(n, false, pairs.into_iter().map(|(u, v)| (u, v, W::one())))
    }

    pub fn from_edges(
        n: usize,
        weighted: bool,
        edges: impl IntoIterator<Item = (usize, usize, W)>,
    ) -> Result<Self> {
        let mut g = Self::new(n);
        g.weighted = weighted;
        for (u, v, w) in edges {
            g.add_edge(u, v, w)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize, w: W) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::VertexOutOfRange {
                vertex: u.max(v),
                n: self.n,
            });
        }
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if self.has_edge(u, v) {
            return Err(Error::DuplicateEdge(u, v));
        }
        if self.weighted && w <= W::zero() {
            return Err(Error::NonPositiveWeight(u, v));
        }
        let w = if self.weighted { w } else { W::one() };
        self.out[u].push((v, w.clone()));
        self.inc[v].push((u, w));
        self.m += 1;
        Ok(())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn is_weighted(&self) -> bool {
        self.weighted
    }

    #[inline]
    pub fn out_edges(&self, u: usize) -> &[(usize, W)] {
        &self.out[u]
    }

    #[inline]
    pub fn in_edges(&self, v: usize) -> &[(usize, W)] {
        &self.inc[v]
    }

    pub fn successors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.out[u].iter().map(|&(v, _)| v)
    }

    pub fn predecessors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.inc[v].iter().map(|&(u, _)| u)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.out[u].iter().any(|&(x, _)| x == v)
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<&W> {
        self.out[u].iter().find(|(x, _)| *x == v).map(|(_, w)| w)
    }

    /// All edges in insertion order per source vertex.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, &W)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, es)| es.iter().map(move |(v, w)| (u, *v, w)))
    }

    pub fn max_weight(&self) -> W {
        self.edges()
            .map(|(_, _, w)| w.clone())
            .fold(W::one(), |a, b| if b > a { b } else { a })
    }

    /// Same vertices and edges, with weights forgotten.
    pub fn unweighted(&self) -> DiGraph<W> {
        let mut g = DiGraph::new(self.n);
        for (u, v, _) in self.edges() {
            g.out[u].push((v, W::one()));
            g.inc[v].push((u, W::one()));
            g.m += 1;
        }
        g
    }

    /// Reversed graph.
    pub fn reversed(&self) -> DiGraph<W> {
        DiGraph {
            n: self.n,
            weighted: self.weighted,
            out: self.inc.clone(),
            inc: self.out.clone(),
            m: self.m,
        }
    }

    /// Topological order, or `None` if the graph has a cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let mut indeg: Vec<usize> = (0..self.n).map(|v| self.inc[v].len()).collect();
        let mut stack: Vec<usize> = (0..self.n).rev().filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(self.n);
        while let Some(u) = stack.pop() {
            order.push(u);
            for &(v, _) in self.out[u].iter().rev() {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    stack.push(v);
                }
            }
        }
        (order.len() == self.n).then_some(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    pub(crate) fn require_acyclic(&self) -> Result<Vec<usize>> {
        self.topological_order().ok_or(Error::Cyclic)
    }

    /// Serializes in the `n m [weighted]` edge-list format.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = write!(s, "{} {}", self.n, self.m);
        if self.weighted {
            s.push_str(" weighted");
        }
        s.push('\n');
        for (u, v, w) in self.edges() {
            if self.weighted {
                let _ = writeln!(s, "{u} {v} {w}");
            } else {
                let _ = writeln!(s, "{u} {v}");
            }
        }
        s
    }

    /// Parses the `n m [weighted]` edge-list format. Self-loops and repeated
    /// pairs are dropped; each drop is reported in the returned warnings.
    pub fn parse(text: &str) -> Result<(Self, Vec<String>)> {
        let (n, weighted, rows) = parse_edge_list::<W>(text)?;
        let mut g = DiGraph::new(n);
        g.weighted = weighted;
        let mut warnings = Vec::new();
        for (u, v, w) in rows {
            if u == v {
                warnings.push(format!("dropped self-loop at {u}"));
                continue;
            }
            if u < n && v < n && g.has_edge(u, v) {
                warnings.push(format!("dropped parallel edge {u} -> {v}"));
                continue;
            }
            g.add_edge(u, v, w.unwrap_or_else(W::one))?;
        }
        Ok((g, warnings))
    }
}

type Rows<W> = Vec<(usize, usize, Option<W>)>;

fn parse_edge_list<W: Weight>(text: &str) -> Result<(usize, bool, Rows<W>)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
    let mut hs = header.split_whitespace();
    let n = parse_usize(hs.next(), hline, "vertex count")?;
    let m = parse_usize(hs.next(), hline, "edge count")?;
    let weighted = match hs.next() {
        None => false,
        Some("weighted") => true,
        Some(other) => return Err(Error::parse(hline, format!("unexpected header token `{other}`"))),
    };
    let mut rows = Vec::with_capacity(m);
    for (ln, line) in lines {
        let mut it = line.split_whitespace();
        let u = parse_usize(it.next(), ln, "source")?;
        let v = parse_usize(it.next(), ln, "target")?;
        if u >= n || v >= n {
            return Err(Error::parse(ln, format!("vertex out of range (n = {n})")));
        }
        let w = match it.next() {
            Some(tok) => Some(
                tok.parse::<W>()
                    .map_err(|_| Error::parse(ln, format!("bad weight `{tok}`")))?,
            ),
            None if weighted => return Err(Error::parse(ln, "missing weight")),
            None => None,
        };
        if let Some(w) = &w {
            if *w < W::zero() {
                return Err(Error::parse(ln, "negative weight"));
            }
        }
        rows.push((u, v, w));
    }
    if rows.len() != m {
        return Err(Error::parse(
            hline,
            format!("header announces {m} edges, found {}", rows.len()),
        ));
    }
    Ok((n, weighted, rows))
}

fn parse_usize(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| Error::parse(line, format!("bad {what}")))
}

/// One added edge. Hopset edges carry the source-graph distance as weight.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ShortcutEdge<W> {
    pub from: usize,
    pub to: usize,
    pub weight: Option<W>,
}

/// An ordered list of transitive-closure edges added to a graph.
#[derive(Clone, Debug, PartialEq)]
pub struct ShortcutSet<W> {
    n: usize,
    edges: Vec<ShortcutEdge<W>>,
    seen: HashSet<(usize, usize)>,
}

impl<W: Weight> ShortcutSet<W> {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            edges: Vec::new(),
            seen: HashSet::new(),
        }
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut h = Self::new(n);
        for (u, v) in pairs {
            h.insert(u, v, None);
        }
        h
    }

    /// Adds `(u, v)` unless it is a self-loop or already present.
    /// Returns whether the edge was new.
    pub fn insert(&mut self, u: usize, v: usize, weight: Option<W>) -> bool {
        assert!(u < self.n && v < self.n, "shortcut endpoint out of range");
        if u == v || !self.seen.insert((u, v)) {
            return false;
        }
        self.edges.push(ShortcutEdge { from: u, to: v, weight });
        true
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        self.seen.contains(&(u, v))
    }

    pub fn extend_from(&mut self, other: &ShortcutSet<W>) {
        for e in &other.edges {
            self.insert(e.from, e.to, e.weight.clone());
        }
    }

    /// Drops edges that already exist in `g`.
    pub fn without_graph_edges(&self, g: &DiGraph<W>) -> Self {
        let mut h = Self::new(self.n);
        for e in &self.edges {
            if !g.has_edge(e.from, e.to) {
                h.insert(e.from, e.to, e.weight.clone());
            }
        }
        h
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[ShortcutEdge<W>] {
        &self.edges
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().map(|e| (e.from, e.to))
    }

    pub fn is_weighted(&self) -> bool {
        !self.edges.is_empty() && self.edges.iter().all(|e| e.weight.is_some())
    }

    /// Serializes with header `n k [weighted]`.
    pub fn to_text(&self) -> String {
        let weighted = self.is_weighted();
        let mut s = String::new();
        let _ = write!(s, "{} {}", self.n, self.edges.len());
        if weighted {
            s.push_str(" weighted");
        }
        s.push('\n');
        for e in &self.edges {
            match (&e.weight, weighted) {
                (Some(w), true) => {
                    let _ = writeln!(s, "{} {} {}", e.from, e.to, w);
                }
                _ => {
                    let _ = writeln!(s, "{} {}", e.from, e.to);
                }
            }
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (n, _weighted, rows) = parse_edge_list::<W>(text)?;
        let mut h = Self::new(n);
        for (u, v, w) in rows {
            h.insert(u, v, w);
        }
        Ok(h)
    }
}
