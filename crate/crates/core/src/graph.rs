//! Undirected simple graphs, the classical clique machinery, and the
//! vertex-combination encoding shared with the circuit synthesizer.
//!
//! The classical enumerator here is the ground truth the quantum pipeline is
//! verified against: brute-force combination filtering, no branch-and-bound.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

/// Errors from graph parsing, serialization, and combination handling.
#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop on vertex {0}: only simple graphs are supported")]
    SelfLoop(usize),
    #[error("a graph needs at least one vertex")]
    EmptyGraph,
    #[error("combination size k must be at least 1")]
    ZeroCombinationSize,
    #[error("combination {0:?} is not strictly ascending")]
    UnorderedCombination(Vec<usize>),
}

/// Input/output encodings for graphs on disk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    /// First line `n;`, then comma-separated `u-v` pairs (0-based).
    EdgeList,
    /// `n` lines of `n` space-separated 0/1 entries.
    AdjacencyMatrix,
    /// DIMACS: `c` comments, `p edge n m` header, `e u v` lines (1-based).
    Dimacs,
}

impl GraphFormat {
    /// Infer a format from a file extension, case-insensitive.
    pub fn from_extension(ext: &str) -> Option<Self> {
        match ext.to_ascii_lowercase().as_str() {
            "el" | "edges" | "edgelist" => Some(Self::EdgeList),
            "adj" | "mat" | "am" => Some(Self::AdjacencyMatrix),
            "dimacs" | "col" | "clq" => Some(Self::Dimacs),
            _ => None,
        }
    }
}

/// Simple undirected graph on vertices `0..n`, immutable after construction.
///
/// The adjacency matrix is symmetric with a zero diagonal; parsers mirror any
/// directed entry and reject self-loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<bool>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::EmptyGraph);
        }
        Ok(Self { n, adj: vec![false; n * n] })
    }

    /// Graph on `n` vertices with the given undirected edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Self::new(n)?;
        for &(u, v) in edges {
            g.insert_edge(u, v)?;
        }
        Ok(g)
    }

    fn insert_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        let n = self.n;
        for w in [u, v] {
            if w >= n {
                return Err(GraphError::VertexOutOfRange { vertex: w, n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        self.adj[u * n + v] = true;
        self.adj[v * n + u] = true;
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// True when `u` and `v` are adjacent. Panics on out-of-range vertices.
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        assert!(u < self.n && v < self.n, "vertex out of range");
        self.adj[u * self.n + v]
    }

    /// Edges as `(u, v)` with `u < v`, ascending.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.adj[u * self.n + v] {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    /// Short hex digest of the canonical form, used in circuit metadata.
    pub fn hash_hex(&self) -> String {
        let mut canon = format!("{};", self.n);
        for (u, v) in self.edges() {
            let _ = write!(canon, "{u}-{v},");
        }
        let digest = Sha256::digest(canon.as_bytes());
        let mut hex = String::with_capacity(16);
        for byte in &digest[..8] {
            let _ = write!(hex, "{byte:02x}");
        }
        hex
    }
}

/// Strictly ascending vertex tuple.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexCombination(Vec<usize>);

impl VertexCombination {
    pub fn new(vertices: Vec<usize>) -> Result<Self, GraphError> {
        if vertices.is_empty() {
            return Err(GraphError::ZeroCombinationSize);
        }
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(GraphError::UnorderedCombination(vertices));
        }
        Ok(Self(vertices))
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A verified clique: the combination plus its size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueWitness {
    pub combination: VertexCombination,
}

impl CliqueWitness {
    pub fn size(&self) -> usize {
        self.combination.len()
    }
}

/// All k-element vertex combinations of `0..n` in lexicographic order.
///
/// `k > n` yields the empty list; `k == 0` is rejected.
pub fn combinations(n: usize, k: usize) -> Result<Vec<VertexCombination>, GraphError> {
    if k == 0 {
        return Err(GraphError::ZeroCombinationSize);
    }
    if k > n {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(VertexCombination(cur.clone()));
        // Advance the rightmost slot that still has room, then reset the tail.
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if cur[i] < n - (k - i) {
                break;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// True when every vertex pair in `c` is adjacent. Singletons are cliques.
pub fn is_clique(g: &Graph, c: &VertexCombination) -> bool {
    let vs = c.vertices();
    for (i, &u) in vs.iter().enumerate() {
        for &v in &vs[i + 1..] {
            if !g.has_edge(u, v) {
                return false;
            }
        }
    }
    true
}

/// All k-cliques of `g` in lexicographic order. Empty for `k == 0` or `k > n`.
pub fn enumerate_cliques(g: &Graph, k: usize) -> Vec<CliqueWitness> {
    let Ok(combos) = combinations(g.n(), k) else {
        return Vec::new();
    };
    combos
        .into_iter()
        .filter(|c| is_clique(g, c))
        .map(|combination| CliqueWitness { combination })
        .collect()
}

/// Largest clique, ties broken lexicographically by vertex tuple.
///
/// Brute force over descending k; a single vertex always qualifies.
pub fn max_clique_classical(g: &Graph) -> CliqueWitness {
    for k in (1..=g.n()).rev() {
        if let Some(w) = enumerate_cliques(g, k).into_iter().next() {
            return w;
        }
    }
    unreachable!("k = 1 always yields a witness");
}

/// Bits needed to index one vertex: ceil(log2 n), and 1 when n == 1.
pub fn bits_per_vertex(n: usize) -> usize {
    if n <= 2 {
        1
    } else {
        (n - 1).ilog2() as usize + 1
    }
}

/// Concatenated big-endian `bits`-wide encodings of the vertices, in slot
/// order. Character `i` of the result is input qubit `i` of the circuit.
pub fn encode_combination(c: &VertexCombination, bits: usize) -> String {
    let mut s = String::with_capacity(c.len() * bits);
    for &v in c.vertices() {
        debug_assert!(bits as u32 >= usize::BITS - v.leading_zeros(), "vertex does not fit");
        for b in (0..bits).rev() {
            s.push(if (v >> b) & 1 == 1 { '1' } else { '0' });
        }
    }
    s
}

/// Inverse of [`encode_combination`] over a measured input bitstring.
///
/// Returns `None` unless the string splits into `k` valid vertex indices that
/// are strictly ascending and below `n`.
pub fn decode_input_state(state: &str, k: usize, bits: usize, n: usize) -> Option<VertexCombination> {
    if state.len() != k * bits || k == 0 {
        return None;
    }
    let mut vertices = Vec::with_capacity(k);
    for chunk in 0..k {
        let mut v = 0usize;
        for ch in state[chunk * bits..(chunk + 1) * bits].chars() {
            v = (v << 1)
                | match ch {
                    '0' => 0,
                    '1' => 1,
                    _ => return None,
                };
        }
        if v >= n {
            return None;
        }
        vertices.push(v);
    }
    if vertices.windows(2).any(|w| w[0] >= w[1]) {
        return None;
    }
    Some(VertexCombination(vertices))
}

/// Parse a graph from text in the given format.
pub fn parse_graph(source: &str, format: GraphFormat) -> Result<Graph, GraphError> {
    match format {
        GraphFormat::EdgeList => parse_edge_list(source),
        GraphFormat::AdjacencyMatrix => parse_adjacency_matrix(source),
        GraphFormat::Dimacs => parse_dimacs(source),
    }
}

/// Serialize a graph so that `parse_graph` round-trips it.
pub fn serialize_graph(g: &Graph, format: GraphFormat) -> String {
    match format {
        GraphFormat::EdgeList => {
            let pairs: Vec<String> = g.edges().iter().map(|(u, v)| format!("{u}-{v}")).collect();
            if pairs.is_empty() {
                format!("{};\n", g.n())
            } else {
                format!("{}; {}\n", g.n(), pairs.join(","))
            }
        }
        GraphFormat::AdjacencyMatrix => {
            let mut out = String::new();
            for u in 0..g.n() {
                let row: Vec<&str> =
                    (0..g.n()).map(|v| if u != v && g.has_edge(u, v) { "1" } else { "0" }).collect();
                out.push_str(&row.join(" "));
                out.push('\n');
            }
            out
        }
        GraphFormat::Dimacs => {
            let edges = g.edges();
            let mut out = format!("p edge {} {}\n", g.n(), edges.len());
            for (u, v) in edges {
                let _ = writeln!(out, "e {} {}", u + 1, v + 1);
            }
            out
        }
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> GraphError {
    GraphError::Parse { line, message: message.into() }
}

fn parse_edge_list(source: &str) -> Result<Graph, GraphError> {
    let semi = source
        .find(';')
        .ok_or_else(|| parse_err(1, "expected a vertex count terminated by ';'"))?;
    let head = source[..semi].trim();
    let n: usize = head
        .parse()
        .map_err(|_| parse_err(1, format!("invalid vertex count {head:?}")))?;
    let mut g = Graph::new(n)?;
    // Edge pairs may follow the count on the same line or on later lines;
    // line numbers are tracked relative to the whole source.
    let header_lines = source[..=semi].matches('\n').count();
    for (off, line) in source[semi + 1..].lines().enumerate() {
        let lineno = header_lines + off + 1;
        for pair in line.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (u, v) = pair
                .split_once('-')
                .ok_or_else(|| parse_err(lineno, format!("expected 'u-v', got {pair:?}")))?;
            let u: usize = u
                .trim()
                .parse()
                .map_err(|_| parse_err(lineno, format!("invalid vertex {u:?}")))?;
            let v: usize = v
                .trim()
                .parse()
                .map_err(|_| parse_err(lineno, format!("invalid vertex {v:?}")))?;
            g.insert_edge(u, v)?;
        }
    }
    Ok(g)
}

fn parse_adjacency_matrix(source: &str) -> Result<Graph, GraphError> {
    let rows: Vec<(usize, &str)> = source
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    let n = rows.len();
    let mut g = Graph::new(n)?;
    for (row, (lineno, line)) in rows.iter().enumerate() {
        let entries: Vec<&str> = line.split_whitespace().collect();
        if entries.len() != n {
            return Err(parse_err(
                *lineno,
                format!("expected {n} entries, got {}", entries.len()),
            ));
        }
        for (col, e) in entries.iter().enumerate() {
            let bit = match *e {
                "0" => false,
                "1" => true,
                other => return Err(parse_err(*lineno, format!("expected 0 or 1, got {other:?}"))),
            };
            if bit {
                if row == col {
                    return Err(GraphError::SelfLoop(row));
                }
                // Mirroring makes asymmetric (directed) entries undirected.
                g.insert_edge(row, col)?;
            }
        }
    }
    Ok(g)
}

fn parse_dimacs(source: &str) -> Result<Graph, GraphError> {
    let mut g: Option<Graph> = None;
    for (i, raw) in source.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields[0] {
            "p" => {
                if fields.len() != 4 || fields[1] != "edge" {
                    return Err(parse_err(lineno, "expected 'p edge <n> <m>'"));
                }
                let n: usize = fields[2]
                    .parse()
                    .map_err(|_| parse_err(lineno, format!("invalid vertex count {:?}", fields[2])))?;
                g = Some(Graph::new(n)?);
            }
            "e" => {
                let g = g
                    .as_mut()
                    .ok_or_else(|| parse_err(lineno, "'e' line before 'p edge' header"))?;
                if fields.len() != 3 {
                    return Err(parse_err(lineno, "expected 'e <u> <v>'"));
                }
                let mut uv = [0usize; 2];
                for (slot, f) in uv.iter_mut().zip(&fields[1..]) {
                    let v: usize = f
                        .parse()
                        .map_err(|_| parse_err(lineno, format!("invalid vertex {f:?}")))?;
                    if v == 0 {
                        return Err(parse_err(lineno, "DIMACS vertices are 1-based"));
                    }
                    *slot = v - 1;
                }
                g.insert_edge(uv[0], uv[1])?;
            }
            other => return Err(parse_err(lineno, format!("unknown record {other:?}"))),
        }
    }
    g.ok_or_else(|| parse_err(1, "missing 'p edge' header"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig11() -> Graph {
        parse_graph("4; 0-1,0-2,0-3,1-3,2-3", GraphFormat::EdgeList).unwrap()
    }

    fn combo(v: &[usize]) -> VertexCombination {
        VertexCombination::new(v.to_vec()).unwrap()
    }

    #[test]
    fn combinations_4_choose_3_are_lexicographic() {
        let got = combinations(4, 3).unwrap();
        let want = [
            combo(&[0, 1, 2]),
            combo(&[0, 1, 3]),
            combo(&[0, 2, 3]),
            combo(&[1, 2, 3]),
        ];
        assert_eq!(got, want);
    }

    #[test]
    fn combinations_edge_cases() {
        assert!(combinations(3, 4).unwrap().is_empty());
        assert!(matches!(combinations(3, 0), Err(GraphError::ZeroCombinationSize)));
        assert_eq!(combinations(5, 5).unwrap(), vec![combo(&[0, 1, 2, 3, 4])]);
        assert_eq!(combinations(6, 2).unwrap().len(), 15);
    }

    #[test]
    fn bits_per_vertex_is_ceil_log2() {
        for (n, b) in [(1, 1), (2, 1), (3, 2), (4, 2), (5, 3), (8, 3), (9, 4), (16, 4)] {
            assert_eq!(bits_per_vertex(n), b, "n={n}");
        }
    }

    #[test]
    fn encodings_match_known_kets() {
        assert_eq!(encode_combination(&combo(&[0, 1, 3]), 2), "000111");
        assert_eq!(encode_combination(&combo(&[0, 2, 3]), 2), "001011");
        assert_eq!(encode_combination(&combo(&[0, 1, 2]), 2), "000110");
        assert_eq!(encode_combination(&combo(&[0, 1, 2, 3]), 2), "00011011");
        assert_eq!(encode_combination(&combo(&[0, 1]), 2), "0001");
        assert_eq!(encode_combination(&combo(&[0]), 1), "0");
    }

    #[test]
    fn decode_inverts_encode_and_rejects_junk() {
        let c = combo(&[0, 2, 3]);
        assert_eq!(decode_input_state(&encode_combination(&c, 2), 3, 2, 4), Some(c));
        // Duplicate vertices, descending order, out-of-range, bad length.
        assert_eq!(decode_input_state("000000", 3, 2, 4), None);
        assert_eq!(decode_input_state("010100", 3, 2, 4), None);
        assert_eq!(decode_input_state("11", 1, 2, 3), None);
        assert_eq!(decode_input_state("0101", 3, 2, 4), None);
    }

    #[test]
    fn fig11_cliques() {
        let g = fig11();
        assert_eq!(g.edge_count(), 5);
        assert!(!g.has_edge(1, 2));
        let threes: Vec<_> = enumerate_cliques(&g, 3)
            .into_iter()
            .map(|w| w.combination)
            .collect();
        assert_eq!(threes, vec![combo(&[0, 1, 3]), combo(&[0, 2, 3])]);
        assert!(enumerate_cliques(&g, 4).is_empty());
        assert_eq!(enumerate_cliques(&g, 2).len(), 5);
        assert_eq!(enumerate_cliques(&g, 1).len(), 4);
    }

    #[test]
    fn k4_has_single_4_clique() {
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let fours = enumerate_cliques(&g, 4);
        assert_eq!(fours.len(), 1);
        assert_eq!(fours[0].combination, combo(&[0, 1, 2, 3]));
    }

    #[test]
    fn max_clique_picks_largest_then_lexicographic() {
        // Six vertices, complete on {2,3,4,5}, triangle-free elsewhere.
        let g = Graph::from_edges(
            6,
            &[(0, 1), (1, 2), (0, 4), (2, 3), (2, 4), (2, 5), (3, 4), (3, 5), (4, 5)],
        )
        .unwrap();
        let w = max_clique_classical(&g);
        assert_eq!(w.size(), 4);
        assert_eq!(w.combination, combo(&[2, 3, 4, 5]));

        let edgeless = Graph::new(3).unwrap();
        let w = max_clique_classical(&edgeless);
        assert_eq!(w.size(), 1);
        assert_eq!(w.combination, combo(&[0]));
    }

    #[test]
    fn singletons_are_cliques() {
        let g = Graph::new(2).unwrap();
        assert!(is_clique(&g, &combo(&[1])));
        assert!(!is_clique(&g, &combo(&[0, 1])));
    }

    #[test]
    fn edge_list_round_trip_and_edge_cases() {
        let g = fig11();
        let text = serialize_graph(&g, GraphFormat::EdgeList);
        assert_eq!(parse_graph(&text, GraphFormat::EdgeList).unwrap(), g);

        let lone = parse_graph("1;", GraphFormat::EdgeList).unwrap();
        assert_eq!(lone.n(), 1);
        assert_eq!(lone.edge_count(), 0);

        let multiline = parse_graph("4;\n0-1, 0-2\n1-3\n", GraphFormat::EdgeList).unwrap();
        assert_eq!(multiline.edge_count(), 3);
    }

    #[test]
    fn edge_list_errors_carry_line_numbers() {
        match parse_graph("4;\n0-1\n0_2\n", GraphFormat::EdgeList) {
            Err(GraphError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(matches!(
            parse_graph("4; 0-9", GraphFormat::EdgeList),
            Err(GraphError::VertexOutOfRange { vertex: 9, n: 4 })
        ));
        assert!(matches!(
            parse_graph("4; 2-2", GraphFormat::EdgeList),
            Err(GraphError::SelfLoop(2))
        ));
        assert!(matches!(
            parse_graph("0;", GraphFormat::EdgeList),
            Err(GraphError::EmptyGraph)
        ));
    }

    #[test]
    fn adjacency_matrix_parses_and_mirrors() {
        let k4 = "0 1 1 1\n1 0 1 1\n1 1 0 1\n1 1 1 0\n";
        let g = parse_graph(k4, GraphFormat::AdjacencyMatrix).unwrap();
        assert_eq!(g.edge_count(), 6);
        assert_eq!(serialize_graph(&g, GraphFormat::AdjacencyMatrix), k4);

        // A directed entry is mirrored into an undirected edge.
        let lop = parse_graph("0 1 0\n0 0 0\n0 0 0\n", GraphFormat::AdjacencyMatrix).unwrap();
        assert!(lop.has_edge(1, 0));

        assert!(matches!(
            parse_graph("0 1\n1 1\n", GraphFormat::AdjacencyMatrix),
            Err(GraphError::SelfLoop(1))
        ));
        match parse_graph("0 1\n1\n", GraphFormat::AdjacencyMatrix) {
            Err(GraphError::Parse { line: 2, .. }) => {}
            other => panic!("expected parse error on line 2, got {other:?}"),
        }
    }

    #[test]
    fn dimacs_parses_comments_and_one_based_edges() {
        let text = "c sample\np edge 4 5\ne 1 2\ne 1 3\ne 1 4\ne 2 4\ne 3 4\n";
        let g = parse_graph(text, GraphFormat::Dimacs).unwrap();
        assert_eq!(g, fig11());
        let round = serialize_graph(&g, GraphFormat::Dimacs);
        assert_eq!(parse_graph(&round, GraphFormat::Dimacs).unwrap(), g);

        assert!(matches!(
            parse_graph("e 1 2\n", GraphFormat::Dimacs),
            Err(GraphError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_graph("p edge 2 1\ne 0 1\n", GraphFormat::Dimacs),
            Err(GraphError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn format_from_extension() {
        assert_eq!(GraphFormat::from_extension("el"), Some(GraphFormat::EdgeList));
        assert_eq!(GraphFormat::from_extension("MAT"), Some(GraphFormat::AdjacencyMatrix));
        assert_eq!(GraphFormat::from_extension("col"), Some(GraphFormat::Dimacs));
        assert_eq!(GraphFormat::from_extension("txt"), None);
    }

    #[test]
    fn hash_distinguishes_graphs() {
        let a = fig11();
        let b = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 3)]).unwrap();
        assert_eq!(a.hash_hex(), fig11().hash_hex());
        assert_ne!(a.hash_hex(), b.hash_hex());
        assert_eq!(a.hash_hex().len(), 16);
    }

    #[test]
    fn combination_constructor_validates() {
        assert!(VertexCombination::new(vec![0, 1, 2]).is_ok());
        assert!(matches!(
            VertexCombination::new(vec![1, 1]),
            Err(GraphError::UnorderedCombination(_))
        ));
        assert!(matches!(
            VertexCombination::new(vec![2, 1]),
            Err(GraphError::UnorderedCombination(_))
        ));
        assert!(matches!(
            VertexCombination::new(vec![]),
            Err(GraphError::ZeroCombinationSize)
        ));
    }
}
