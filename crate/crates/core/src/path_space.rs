//! Finite paths in the Bratteli diagram of a directed graph on `D` vertices.
//!
//! For the full graph (all-ones vertex matrix) there is exactly one edge per
//! ordered vertex pair, so a path is identified with the string of vertices
//! it visits. A path with `m` vertices has length `m - 1`; the empty path,
//! whose cylinder is the whole boundary, has length `-1`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// The literal used for the empty path in text and JSON.
pub const EMPTY_PATH: &str = "()";

/// A directed graph given by its vertex matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphSpec {
    d: usize,
    vertex_matrix: Vec<Vec<u32>>,
}

impl GraphSpec {
    /// The full graph on `d` vertices (every entry of the vertex matrix is 1).
    pub fn full(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidGraph(format!(
                "need at least 2 vertices, got {d}"
            )));
        }
        if d > 36 {
            return Err(Error::InvalidGraph(format!(
                "vertex labels are single base-36 digits; D = {d} is too large"
            )));
        }
        Ok(GraphSpec {
            d,
            vertex_matrix: vec![vec![1; d]; d],
        })
    }

    pub fn from_matrix(vertex_matrix: Vec<Vec<u32>>) -> Result<Self> {
        let d = vertex_matrix.len();
        if !(2..=36).contains(&d) {
            return Err(Error::InvalidGraph(format!(
                "vertex matrix must have between 2 and 36 rows, got {d}"
            )));
        }
        if let Some(row) = vertex_matrix.iter().position(|row| row.len() != d) {
            return Err(Error::InvalidGraph(format!(
                "row {row} does not have {d} entries"
            )));
        }
        Ok(GraphSpec { d, vertex_matrix })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn vertex_matrix(&self) -> &[Vec<u32>] {
        &self.vertex_matrix
    }

    pub fn is_full(&self) -> bool {
        self.vertex_matrix.iter().flatten().all(|&a| a == 1)
    }

    fn has_edge(&self, from: usize, to: usize) -> bool {
        self.vertex_matrix[from][to] > 0
    }
}

/// Result of the row-sum sufficient condition for a Cantor boundary.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CantorReport {
    pub is_cantor: bool,
    pub row_sums: Vec<u64>,
    pub offending_rows: Vec<usize>,
}

/// Every row sum at least 2 guarantees the infinite path space is a Cantor set.
pub fn cantor_check(g: &GraphSpec) -> CantorReport {
    let row_sums: Vec<u64> = g
        .vertex_matrix
        .iter()
        .map(|row| row.iter().map(|&a| u64::from(a)).sum())
        .collect();
    let offending_rows: Vec<usize> = row_sums
        .iter()
        .enumerate()
        .filter(|(_, &s)| s < 2)
        .map(|(i, _)| i)
        .collect();
    CantorReport {
        is_cantor: offending_rows.is_empty(),
        row_sums,
        offending_rows,
    }
}

/// A finite path, stored as its vertex string. The empty vector is the empty path.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    vertices: Vec<usize>,
}

impl Path {
    pub fn empty() -> Self {
        Path {
            vertices: Vec::new(),
        }
    }

    pub fn new(vertices: Vec<usize>) -> Self {
        Path { vertices }
    }

    pub fn vertex(v: usize) -> Self {
        Path { vertices: vec![v] }
    }

    /// Checks every label is below `d`.
    pub fn checked(vertices: Vec<usize>, d: usize) -> Result<Self> {
        if let Some(&vertex) = vertices.iter().find(|&&v| v >= d) {
            return Err(Error::VertexOutOfRange { vertex, d });
        }
        Ok(Path { vertices })
    }

    /// The length-`n` path whose position in lexicographic order is `index`.
    pub fn from_index(d: usize, n: isize, mut index: usize) -> Self {
        let m = (n + 1) as usize;
        let mut vertices = vec![0; m];
        for slot in vertices.iter_mut().rev() {
            *slot = index % d;
            index /= d;
        }
        Path { vertices }
    }

    /// Position among the paths of the same length, in lexicographic order.
    pub fn index(&self, d: usize) -> usize {
        self.vertices.iter().fold(0, |acc, &v| acc * d + v)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Number of edges: vertices minus one, so the empty path has length -1.
    pub fn len(&self) -> isize {
        self.vertices.len() as isize - 1
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// The range vertex `r(γ)`.
    pub fn first(&self) -> Option<usize> {
        self.vertices.first().copied()
    }

    /// The source vertex `s(γ)`.
    pub fn last(&self) -> Option<usize> {
        self.vertices.last().copied()
    }

    /// The initial segment `γ[0,k]` of length `k` (`k = -1` gives the empty path).
    pub fn prefix(&self, k: isize) -> Path {
        let m = (k + 1).clamp(0, self.vertices.len() as isize) as usize;
        Path {
            vertices: self.vertices[..m].to_vec(),
        }
    }

    pub fn is_prefix_of(&self, other: &Path) -> bool {
        other.vertices.starts_with(&self.vertices)
    }

    /// `γv`: the path extended by one vertex.
    pub fn child(&self, v: usize) -> Path {
        let mut vertices = self.vertices.clone();
        vertices.push(v);
        Path { vertices }
    }

    /// `vγ`: the path with one vertex prepended.
    pub fn prepend(&self, v: usize) -> Path {
        let mut vertices = Vec::with_capacity(self.vertices.len() + 1);
        vertices.push(v);
        vertices.extend_from_slice(&self.vertices);
        Path { vertices }
    }

    /// The path with its first vertex removed (the shift).
    pub fn tail(&self) -> Path {
        Path {
            vertices: self.vertices.iter().skip(1).copied().collect(),
        }
    }

    pub fn count(&self, v: usize) -> usize {
        self.vertices.iter().filter(|&&u| u == v).count()
    }
}

/// Path composition; always valid in the full graph.
pub fn concat(p: &Path, q: &Path) -> Path {
    let mut vertices = p.vertices.clone();
    vertices.extend_from_slice(&q.vertices);
    Path { vertices }
}

/// `x ∧ y`: the longest common initial segment (empty if the first vertices differ).
pub fn longest_common_prefix(x: &Path, y: &Path) -> Path {
    let m = x
        .vertices
        .iter()
        .zip(&y.vertices)
        .take_while(|(a, b)| a == b)
        .count();
    Path {
        vertices: x.vertices[..m].to_vec(),
    }
}

/// All paths of length `n >= -1`, in lexicographic order of their vertex strings.
pub fn enumerate_paths(g: &GraphSpec, n: isize) -> Vec<Path> {
    if n < -1 {
        return Vec::new();
    }
    let mut paths = vec![Path::empty()];
    for _ in 0..=n {
        paths = paths
            .iter()
            .flat_map(|p| {
                (0..g.d)
                    .filter(move |&v| p.last().is_none_or(|u| g.has_edge(u, v)))
                    .map(move |v| p.child(v))
            })
            .collect();
    }
    paths
}

/// All paths of the full graph on `d` vertices with length in `-1..=max_len`, shortest first.
pub fn paths_up_to(d: usize, max_len: isize) -> Vec<Path> {
    (-1..=max_len)
        .flat_map(|n| {
            let count = d.pow((n + 1) as u32);
            (0..count).map(move |i| Path::from_index(d, n, i))
        })
        .collect()
}

fn digit(v: usize) -> char {
    std::char::from_digit(v as u32, 36).expect("vertex labels are below 36")
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.vertices.is_empty() {
            return f.write_str(EMPTY_PATH);
        }
        self.vertices
            .iter()
            .try_for_each(|&v| write!(f, "{}", digit(v)))
    }
}

impl FromStr for Path {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == EMPTY_PATH || s == "∘" {
            return Ok(Path::empty());
        }
        if s.is_empty() {
            return Err(Error::InvalidPath(s.to_string()));
        }
        s.chars()
            .map(|c| {
                c.to_digit(36)
                    .map(|v| v as usize)
                    .ok_or_else(|| Error::InvalidPath(s.to_string()))
            })
            .collect::<Result<Vec<_>>>()
            .map(Path::new)
    }
}

impl Serialize for Path {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Path {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Path {
        s.parse().unwrap()
    }

    #[test]
    fn enumeration_counts_and_order() {
        let g2 = GraphSpec::full(2).unwrap();
        assert_eq!(enumerate_paths(&g2, -1), vec![Path::empty()]);
        let level1: Vec<String> = enumerate_paths(&g2, 1)
            .iter()
            .map(|p| p.to_string())
            .collect();
        assert_eq!(level1, ["00", "01", "10", "11"]);

        // Brute force: every string over {0,1,2} of length 3, sorted.
        let g3 = GraphSpec::full(3).unwrap();
        let mut brute = Vec::new();
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    brute.push(Path::new(vec![a, b, c]));
                }
            }
        }
        brute.sort();
        assert_eq!(enumerate_paths(&g3, 2), brute);
        assert_eq!(brute.len(), 27);
    }

    #[test]
    fn enumeration_respects_missing_edges() {
        let g = GraphSpec::from_matrix(vec![vec![1, 0], vec![1, 1]]).unwrap();
        let level1: Vec<String> = enumerate_paths(&g, 1)
            .iter()
            .map(|p| p.to_string())
            .collect();
        assert_eq!(level1, ["00", "10", "11"]);
    }

    #[test]
    fn common_prefix_examples() {
        assert_eq!(longest_common_prefix(&p("010"), &p("011")), p("01"));
        assert_eq!(longest_common_prefix(&p("0"), &p("1")), Path::empty());
        assert_eq!(longest_common_prefix(&p("0120"), &p("0121")), p("012"));
        assert_eq!(longest_common_prefix(&p("01"), &p("01")), p("01"));
    }

    #[test]
    fn concat_examples() {
        assert_eq!(concat(&Path::empty(), &p("01")), p("01"));
        let q = concat(&p("0"), &p("1"));
        assert_eq!(q, p("01"));
        assert_eq!(q.len(), 1);
        let q = concat(&p("01"), &p("20"));
        assert_eq!(q, p("0120"));
        assert_eq!(q.len(), 3);
    }

    #[test]
    fn cantor_examples() {
        assert!(cantor_check(&GraphSpec::full(2).unwrap()).is_cantor);
        assert!(cantor_check(&GraphSpec::full(5).unwrap()).is_cantor);
        let r = cantor_check(&GraphSpec::from_matrix(vec![vec![1, 0], vec![1, 1]]).unwrap());
        assert!(!r.is_cantor);
        assert_eq!(r.offending_rows, vec![0]);
        assert_eq!(r.row_sums, vec![1, 2]);
    }

    #[test]
    fn graph_validation() {
        assert!(GraphSpec::full(1).is_err());
        assert!(GraphSpec::from_matrix(vec![vec![1, 1], vec![1]]).is_err());
        assert!(GraphSpec::full(3).unwrap().is_full());
    }

    #[test]
    fn text_round_trip_and_lengths() {
        assert_eq!(Path::empty().to_string(), "()");
        assert_eq!(p("()"), Path::empty());
        assert_eq!(Path::empty().len(), -1);
        assert_eq!(p("2").len(), 0);
        assert!("0x!".parse::<Path>().is_err());
        assert_eq!(serde_json::to_string(&p("012")).unwrap(), "\"012\"");
        assert!(Path::checked(vec![0, 3], 3).is_err());
    }

    #[test]
    fn prefix_and_index() {
        let g = p("0121");
        assert_eq!(g.prefix(-1), Path::empty());
        assert_eq!(g.prefix(1), p("01"));
        assert_eq!(g.index(3), 16);
        assert_eq!(Path::from_index(3, 3, 16), g);
    }

    fn path_strategy(d: usize, max_vertices: usize) -> impl Strategy<Value = Path> {
        prop::collection::vec(0..d, 0..=max_vertices).prop_map(Path::new)
    }

    proptest! {
        #[test]
        fn counts_are_powers_of_d(d in 2usize..5, n in -1isize..4) {
            let g = GraphSpec::full(d).unwrap();
            prop_assert_eq!(enumerate_paths(&g, n).len(), d.pow((n + 1) as u32));
        }

        #[test]
        fn concat_is_associative_with_identity(a in path_strategy(3, 4), b in path_strategy(3, 4), c in path_strategy(3, 4)) {
            prop_assert_eq!(concat(&concat(&a, &b), &c), concat(&a, &concat(&b, &c)));
            prop_assert_eq!(concat(&Path::empty(), &a), a.clone());
            prop_assert_eq!(concat(&a, &Path::empty()), a.clone());
            prop_assert_eq!(concat(&a, &b).len(), a.len() + b.len() + 1);
        }

        #[test]
        fn common_prefix_is_maximal(x in path_strategy(3, 6), y in path_strategy(3, 6)) {
            let m = longest_common_prefix(&x, &y);
            prop_assert!(m.is_prefix_of(&x) && m.is_prefix_of(&y));
            for v in 0..3 {
                let longer = m.child(v);
                prop_assert!(!(longer.is_prefix_of(&x) && longer.is_prefix_of(&y)));
            }
        }

        #[test]
        fn index_round_trip(d in 2usize..5, vs in prop::collection::vec(0usize..2, 1..6)) {
            let path = Path::new(vs);
            prop_assert_eq!(Path::from_index(d, path.len(), path.index(d)), path);
        }
    }
}
