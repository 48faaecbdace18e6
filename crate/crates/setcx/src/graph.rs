//! Context-dependent information content of undirected graphs.
//!
//! Each node's information is the binary entropy of its connection
//! frequency, `K_i = H₂(degree_i/(n−1))`. Each node pair's distance is one
//! minus the mutual information between their connection patterns to the
//! remaining `n−2` nodes, so two nodes are "close" when knowing one's
//! neighborhoods pins down the other's — whether by correlation or
//! anti-correlation. The graph set complexity combines the two exactly as
//! the string-set version does: node information weighted by the
//! `d(1−d)` kernel of pair distances.
//!
//! Both the graph and its conjugate (edge-complement) score identically:
//! entropies and mutual informations are invariant under the global 0↔1
//! relabeling of adjacency.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::seed::{derive_seed, seeded_rng};

/// An undirected simple graph (symmetric binary adjacency, empty
/// diagonal).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<u8>>,
}

/// Which normalization [`graph_psi`] uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PsiMode {
    /// `[Σ_i K_i] · [2/(n(n−1))] · Σ_{i<j} d(1−d)`: total node information
    /// times the plain pair average of the kernel (default).
    #[default]
    Product,
    /// `[1/(n−1)] · Σ_{i<j} max(K_i, K_j) · d(1−d)`: the same weighting the
    /// string-set complexity uses. For degree-regular graphs
    /// `Product = 2 × PairMax` exactly.
    PairMax,
}

impl PsiMode {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "product" => Ok(PsiMode::Product),
            "pairmax" => Ok(PsiMode::PairMax),
            other => Err(Error::config(format!(
                "unknown graph psi mode {other:?} (expected product or pairmax)"
            ))),
        }
    }

    pub fn id(self) -> &'static str {
        match self {
            PsiMode::Product => "product",
            PsiMode::PairMax => "pairmax",
        }
    }
}

fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        0.0
    } else {
        -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
    }
}

impl Graph {
    /// The edgeless graph on `n` nodes.
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("graph needs at least 1 node"));
        }
        Ok(Graph { n, adj: vec![vec![0; n]; n] })
    }

    /// The complete graph on `n` nodes.
    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    g.adj[i][j] = 1;
                }
            }
        }
        Ok(g)
    }

    /// An Erdős–Rényi draw: each of the `n(n−1)/2` possible edges present
    /// independently with probability `p`, sampled in `(i, j)` order with
    /// `i < j`.
    pub fn random(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::domain(format!(
                "edge probability {p} outside [0, 1]"
            )));
        }
        let mut g = Self::empty(n)?;
        for i in 0..n {
            for j in (i + 1)..n {
                if rng.gen_bool(p) {
                    g.adj[i][j] = 1;
                    g.adj[j][i] = 1;
                }
            }
        }
        Ok(g)
    }

    /// Builds a graph from a full adjacency matrix, rejecting non-binary
    /// entries, self-loops, and asymmetry.
    pub fn from_dense(rows: Vec<Vec<u8>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::domain("graph needs at least 1 node"));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::domain(format!(
                    "adjacency row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, &a) in row.iter().enumerate() {
                if a > 1 {
                    return Err(Error::domain(format!(
                        "adjacency entry ({i}, {j}) is {a}, must be 0 or 1"
                    )));
                }
                if i == j && a != 0 {
                    return Err(Error::domain(format!(
                        "self-loop at node {i}: diagonal entries must be 0"
                    )));
                }
                if j < i && rows[j][i] != a {
                    return Err(Error::domain(format!(
                        "adjacency is asymmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(Graph { n, adj: rows })
    }

    /// Builds a graph from an undirected edge list over nodes `0..n`,
    /// rejecting self-loops, out-of-range endpoints, and duplicate edges
    /// (in either orientation).
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for &(a, b) in edges {
            if a == b {
                return Err(Error::domain(format!("self-loop at node {a}")));
            }
            if a >= n || b >= n {
                return Err(Error::domain(format!(
                    "edge ({a}, {b}) out of range for n = {n}"
                )));
            }
            if g.adj[a][b] == 1 {
                return Err(Error::domain(format!("duplicate edge ({a}, {b})")));
            }
            g.adj[a][b] = 1;
            g.adj[b][a] = 1;
        }
        Ok(g)
    }

    /// Two disjoint 5-cliques — the canonical low-complexity example (its
    /// complexity is ≈ 0.19 in product mode).
    pub fn two_five_cliques() -> Graph {
        let mut edges = Vec::new();
        for base in [0, 5] {
            for i in 0..5 {
                for j in (i + 1)..5 {
                    edges.push((base + i, base + j));
                }
            }
        }
        Graph::from_edges(10, &edges).expect("fixed clique edges are valid")
    }

    /// Node count.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Whether nodes `i` and `j` are adjacent.
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i][j] == 1
    }

    /// Degree of node `i`.
    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].iter().map(|&a| a as usize).sum()
    }

    /// Number of edges.
    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|i| self.degree(i)).sum::<usize>() / 2
    }

    /// The edges as `(i, j)` with `i < j`, ascending.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.adj[i][j] == 1 {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Toggles the edge between distinct nodes `i` and `j`.
    pub fn toggle_edge(&mut self, i: usize, j: usize) -> Result<()> {
        if i == j {
            return Err(Error::domain(format!(
                "cannot toggle a self-loop at node {i}"
            )));
        }
        if i >= self.n || j >= self.n {
            return Err(Error::domain(format!(
                "edge ({i}, {j}) out of range for n = {}",
                self.n
            )));
        }
        self.adj[i][j] ^= 1;
        self.adj[j][i] ^= 1;
        Ok(())
    }

    /// The edge-complement: adjacency flipped off the diagonal.
    pub fn conjugate(&self) -> Graph {
        let mut adj = vec![vec![0u8; self.n]; self.n];
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    adj[i][j] = 1 - self.adj[i][j];
                }
            }
        }
        Graph { n: self.n, adj }
    }

    /// Relabels nodes: node `i` of the result is node `perm[i]` of `self`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(Error::domain(format!(
                "permutation has {} entries for {} nodes",
                perm.len(),
                self.n
            )));
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || seen[p] {
                return Err(Error::domain("not a permutation of the node set"));
            }
            seen[p] = true;
        }
        let mut adj = vec![vec![0u8; self.n]; self.n];
        for i in 0..self.n {
            for j in 0..self.n {
                adj[i][j] = self.adj[perm[i]][perm[j]];
            }
        }
        Ok(Graph { n: self.n, adj })
    }

    /// Information content of node `i`: the binary entropy of its
    /// connection frequency `degree/(n−1)`, in bits (so within `[0, 1]`).
    pub fn node_complexity(&self, i: usize) -> Result<f64> {
        if self.n < 2 {
            return Err(Error::domain(
                "node complexity needs n >= 2 (no possible connections otherwise)",
            ));
        }
        if i >= self.n {
            return Err(Error::domain(format!(
                "node {i} out of range for n = {}",
                self.n
            )));
        }
        Ok(binary_entropy(self.degree(i) as f64 / (self.n as f64 - 1.0)))
    }

    /// Distance between distinct nodes `i` and `j`: one minus the mutual
    /// information (in bits) between the joint connection patterns
    /// `(A_ik, A_jk)` over the `n−2` third nodes `k ∉ {i, j}`, with
    /// marginals taken over the same range. Clamped against floating
    /// error; binary MI cannot exceed 1 bit.
    pub fn node_distance(&self, i: usize, j: usize) -> Result<f64> {
        if self.n < 3 {
            return Err(Error::domain(
                "node distance needs n >= 3 (no third nodes otherwise)",
            ));
        }
        if i >= self.n || j >= self.n {
            return Err(Error::domain(format!(
                "pair ({i}, {j}) out of range for n = {}",
                self.n
            )));
        }
        if i == j {
            return Err(Error::domain(
                "node distance is defined for distinct nodes",
            ));
        }
        let mut counts = [[0.0f64; 2]; 2];
        for k in 0..self.n {
            if k != i && k != j {
                counts[self.adj[i][k] as usize][self.adj[j][k] as usize] += 1.0;
            }
        }
        let total = (self.n - 2) as f64;
        let mut mi = 0.0;
        for a in 0..2 {
            for b in 0..2 {
                let p_ab = counts[a][b] / total;
                if p_ab > 0.0 {
                    let p_a = (counts[a][0] + counts[a][1]) / total;
                    let p_b = (counts[0][b] + counts[1][b]) / total;
                    mi += p_ab * (p_ab / (p_a * p_b)).log2();
                }
            }
        }
        debug_assert!(
            (-1e-9..=1.0 + 1e-9).contains(&mi),
            "binary MI out of range: {mi}"
        );
        Ok((1.0 - mi).clamp(0.0, 1.0))
    }

    /// The graph in dense file format: `n` lines of `n` space-separated
    /// 0/1 entries.
    pub fn to_dense_string(&self) -> String {
        let mut out = String::new();
        for row in &self.adj {
            let line: Vec<String> = row.iter().map(|a| a.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dense_string())
    }
}

/// Set complexity of a graph under the chosen normalization. Needs
/// `n ≥ 3` so pair distances exist.
pub fn graph_psi(g: &Graph, mode: PsiMode) -> Result<f64> {
    if g.n < 3 {
        return Err(Error::domain("graph psi needs n >= 3"));
    }
    let n = g.n;
    let complexities: Vec<f64> = (0..n)
        .map(|i| g.node_complexity(i))
        .collect::<Result<_>>()?;
    match mode {
        PsiMode::Product => {
            let k_sum: f64 = complexities.iter().sum();
            let mut kernel_sum = 0.0;
            for i in 0..n {
                for j in (i + 1)..n {
                    let d = g.node_distance(i, j)?;
                    kernel_sum += d * (1.0 - d);
                }
            }
            Ok(k_sum * 2.0 / (n as f64 * (n as f64 - 1.0)) * kernel_sum)
        }
        PsiMode::PairMax => {
            let mut sum = 0.0;
            for i in 0..n {
                for j in (i + 1)..n {
                    let d = g.node_distance(i, j)?;
                    sum += complexities[i].max(complexities[j]) * d * (1.0 - d);
                }
            }
            Ok(sum / (n as f64 - 1.0))
        }
    }
}

/// Outcome of [`maximize_psi`].
#[derive(Debug, Clone)]
pub struct SearchResult {
    pub graph: Graph,
    pub psi: f64,
    /// Index of the restart that produced the winner.
    pub restart: usize,
}

/// Steepest-ascent search for a high-complexity graph on `n ≥ 4` nodes.
///
/// Each restart starts from an edge-probability-1/2 random graph (seeded
/// from `(seed, restart index)`), then repeatedly applies the single edge
/// toggle that most increases psi, stopping when no toggle improves it or
/// after `iterations` accepted moves. Ties keep the incumbent graph.
/// Restarts run in parallel; the best result wins, with ties resolved
/// toward the lowest restart index, so the outcome is independent of
/// thread scheduling.
pub fn maximize_psi(
    n: usize,
    iterations: usize,
    restarts: usize,
    seed: u64,
    mode: PsiMode,
) -> Result<SearchResult> {
    if n < 4 {
        return Err(Error::domain("graph search needs n >= 4"));
    }
    if restarts == 0 {
        return Err(Error::domain("graph search needs at least 1 restart"));
    }
    let runs: Vec<(f64, Graph)> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = seeded_rng(derive_seed(seed, "graph-restart", r as u64, 0));
            let mut g = Graph::random(n, 0.5, &mut rng)?;
            let mut current = graph_psi(&g, mode)?;
            for _ in 0..iterations {
                let mut best: Option<(usize, usize, f64)> = None;
                for i in 0..n {
                    for j in (i + 1)..n {
                        g.toggle_edge(i, j)?;
                        let v = graph_psi(&g, mode)?;
                        g.toggle_edge(i, j)?;
                        if v > current && best.map_or(true, |(_, _, bv)| v > bv) {
                            best = Some((i, j, v));
                        }
                    }
                }
                match best {
                    Some((i, j, v)) => {
                        g.toggle_edge(i, j)?;
                        current = v;
                    }
                    None => break,
                }
            }
            Ok((current, g))
        })
        .collect::<Result<_>>()?;
    let (restart, (psi, graph)) = runs
        .into_iter()
        .enumerate()
        .max_by(|(ia, (a, _)), (ib, (b, _))| {
            // Strictly better wins; on exact ties the earlier restart wins.
            a.total_cmp(b).then(ib.cmp(ia))
        })
        .expect("at least one restart");
    Ok(SearchResult { graph, psi, restart })
}

/// CSV header for graph scores.
pub fn graph_csv_header() -> &'static str {
    "n,edges,psi,mode"
}

/// One CSV row matching [`graph_csv_header`].
pub fn graph_csv_row(g: &Graph, psi: f64, mode: PsiMode) -> String {
    format!("{},{},{},{}", g.n(), g.edge_count(), psi, mode.id())
}

/// Parses a graph from text. Two formats are accepted:
///
/// - dense: `n` lines of `n` space-separated 0/1 entries;
/// - edge list: one `i j` pair per line, 0-based, undirected.
///
/// Lines starting with `#` are comments; a `#n=COUNT` header forces
/// edge-list interpretation with the given node count (needed when the
/// highest-numbered nodes are isolated). Without the header, a square
/// all-binary block is read as dense and anything else as an edge list
/// (with `n` = highest index + 1).
pub fn parse_graph<R: BufRead>(reader: R) -> Result<Graph> {
    let mut declared_n: Option<usize> = None;
    let mut data: Vec<(usize, Vec<String>)> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('#') {
            if let Some(value) = rest.trim().strip_prefix("n=") {
                let n: usize = value.trim().parse().map_err(|_| {
                    Error::parse(lineno, format!("invalid node count {value:?}"))
                })?;
                declared_n = Some(n);
            }
            continue;
        }
        let tokens: Vec<String> =
            trimmed.split_whitespace().map(str::to_string).collect();
        data.push((lineno, tokens));
    }
    if data.is_empty() {
        if let Some(n) = declared_n {
            return Graph::empty(n);
        }
        return Err(Error::parse(0, "no graph data found"));
    }

    let rows = data.len();
    let square_binary = declared_n.is_none()
        && data
            .iter()
            .all(|(_, t)| t.len() == rows && t.iter().all(|s| s == "0" || s == "1"));

    if square_binary {
        let mut matrix = Vec::with_capacity(rows);
        for (lineno, tokens) in &data {
            let row: Vec<u8> = tokens.iter().map(|t| if t == "1" { 1 } else { 0 }).collect();
            matrix.push((*lineno, row));
        }
        // Re-run the structural checks with line numbers attached.
        for (i, (lineno, row)) in matrix.iter().enumerate() {
            if row[i] != 0 {
                return Err(Error::parse(
                    *lineno,
                    format!("self-loop at node {i}: diagonal entries must be 0"),
                ));
            }
            for (j, &a) in row.iter().enumerate() {
                if j < i && matrix[j].1[i] != a {
                    return Err(Error::parse(
                        *lineno,
                        format!("adjacency is asymmetric at ({i}, {j})"),
                    ));
                }
            }
        }
        return Graph::from_dense(matrix.into_iter().map(|(_, r)| r).collect());
    }

    // Edge list.
    let mut edges: Vec<(usize, usize, usize)> = Vec::with_capacity(data.len());
    for (lineno, tokens) in &data {
        if tokens.len() != 2 {
            return Err(Error::parse(
                *lineno,
                format!(
                    "expected an `i j` edge line, found {} fields",
                    tokens.len()
                ),
            ));
        }
        let parse_node = |s: &str| -> Result<usize> {
            s.parse()
                .map_err(|_| Error::parse(*lineno, format!("invalid node index {s:?}")))
        };
        let a = parse_node(&tokens[0])?;
        let b = parse_node(&tokens[1])?;
        if a == b {
            return Err(Error::parse(*lineno, format!("self-loop at node {a}")));
        }
        edges.push((*lineno, a, b));
    }
    let max_node = edges.iter().map(|&(_, a, b)| a.max(b)).max().unwrap_or(0);
    let n = match declared_n {
        Some(n) => {
            if max_node >= n {
                let (lineno, a, b) =
                    *edges.iter().find(|&&(_, a, b)| a.max(b) >= n).unwrap();
                return Err(Error::parse(
                    lineno,
                    format!("edge ({a}, {b}) out of range for declared n = {n}"),
                ));
            }
            n
        }
        None => max_node + 1,
    };
    let mut g = Graph::empty(n)?;
    for (lineno, a, b) in edges {
        if g.adj[a][b] == 1 {
            return Err(Error::parse(lineno, format!("duplicate edge ({a}, {b})")));
        }
        g.adj[a][b] = 1;
        g.adj[b][a] = 1;
    }
    Ok(g)
}

/// Reads a graph file (see [`parse_graph`] for the accepted formats).
pub fn read_graph(path: &Path) -> Result<Graph> {
    parse_graph(BufReader::new(File::open(path)?))
}

/// Writes the dense representation (readable back via [`read_graph`]).
pub fn write_graph(path: &Path, g: &Graph) -> Result<()> {
    let mut f = File::create(path)?;
    write!(f, "{}", g.to_dense_string())?;
    Ok(())
}
