//! Vine specifications: structure, edge labels and their JSON form.
//!
//! A specification lists one pair copula per edge. Edges are labelled by
//! their conditioned pair and conditioning set using 1-based variable
//! indices, written `"13|2"`; once an index exceeds 9 the comma form
//! `"1,12|2,3"` is used instead. The first conditioned index is always the
//! smaller one and is the first argument of the pair copula.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::copula::{Family, PairCopula};
use crate::error::{Error, Result};
use crate::measure::ExponentMeasure;

/// Vine layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Structure {
    /// Three variables with edges `12`, `23`, `13|2`.
    Trivariate,
    /// Path vine `1 − 2 − … − d`.
    Dvine,
    /// Star vine rooted at 1 in the first tree, at 2 in the second, and so on.
    Cvine,
}

/// Edge label `{a, b | given}` with `a < b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeLabel {
    pub a: usize,
    pub b: usize,
    pub given: Vec<usize>,
}

impl EdgeLabel {
    pub fn new(a: usize, b: usize, given: impl IntoIterator<Item = usize>) -> Self {
        let mut given: Vec<usize> = given.into_iter().collect();
        given.sort_unstable();
        EdgeLabel { a, b, given }
    }
}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wide = self.b > 9 || self.given.iter().any(|&g| g > 9);
        let sep = if wide { "," } else { "" };
        write!(f, "{}{}{}", self.a, sep, self.b)?;
        if !self.given.is_empty() {
            let parts: Vec<String> = self.given.iter().map(|g| g.to_string()).collect();
            write!(f, "|{}", parts.join(sep))?;
        }
        Ok(())
    }
}

fn parse_indices(s: &str) -> std::result::Result<Vec<usize>, String> {
    let s = s.trim();
    if s.contains(',') {
        s.split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|e| format!("bad index {t:?}: {e}")))
            .collect()
    } else {
        s.chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as usize)
                    .ok_or_else(|| format!("bad index character {c:?}"))
            })
            .collect()
    }
}

impl FromStr for EdgeLabel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let (pair, given) = match s.split_once('|') {
            Some((p, g)) => (p, parse_indices(g)?),
            None => (s, Vec::new()),
        };
        let pair = parse_indices(pair)?;
        if pair.len() != 2 {
            return Err(format!("label {s:?} must name exactly two conditioned variables"));
        }
        if pair[0] >= pair[1] {
            return Err(format!("label {s:?} must list the conditioned pair in ascending order"));
        }
        if pair.iter().chain(&given).any(|&i| i == 0) {
            return Err(format!("label {s:?} uses index 0; indices are 1-based"));
        }
        let mut sorted = given.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != given.len() || sorted.contains(&pair[0]) || sorted.contains(&pair[1]) {
            return Err(format!("label {s:?} repeats a variable"));
        }
        Ok(EdgeLabel {
            a: pair[0],
            b: pair[1],
            given: sorted,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeJson {
    label: String,
    family: Family,
    measure: ExponentMeasure,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecJson {
    dimension: usize,
    structure: Structure,
    edges: Vec<EdgeJson>,
}

/// A validated vine specification with edges stored in canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct VineSpec {
    dim: usize,
    structure: Structure,
    edges: Vec<(EdgeLabel, PairCopula)>,
}

/// Edge labels required by a structure of dimension `d`, tree by tree.
pub fn expected_labels(structure: Structure, d: usize) -> Vec<EdgeLabel> {
    let mut out = Vec::with_capacity(d * d.saturating_sub(1) / 2);
    match structure {
        Structure::Trivariate => {
            out.push(EdgeLabel::new(1, 2, []));
            out.push(EdgeLabel::new(2, 3, []));
            out.push(EdgeLabel::new(1, 3, [2]));
        }
        Structure::Dvine => {
            for k in 1..d {
                for i in 1..=d - k {
                    out.push(EdgeLabel::new(i, i + k, i + 1..i + k));
                }
            }
        }
        Structure::Cvine => {
            for k in 1..d {
                for j in k + 1..=d {
                    out.push(EdgeLabel::new(k, j, 1..k));
                }
            }
        }
    }
    out
}

fn json_pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut s = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => s.push_str(&format!("/{index}")),
            Segment::Map { key } => s.push_str(&format!("/{}", key.replace('~', "~0").replace('/', "~1"))),
            Segment::Enum { variant } => s.push_str(&format!("/{variant}")),
            Segment::Unknown => s.push_str("/?"),
        }
    }
    if s.is_empty() {
        s.push('/');
    }
    s
}

impl VineSpec {
    /// Build and validate a specification from labelled edges in any order.
    pub fn new(
        dim: usize,
        structure: Structure,
        edges: impl IntoIterator<Item = (EdgeLabel, PairCopula)>,
    ) -> Result<Self> {
        let edges: Vec<(EdgeLabel, PairCopula)> = edges.into_iter().collect();
        Self::validate_parts(dim, structure, &edges, |i| format!("/edges/{i}"))
    }

    fn validate_parts(
        dim: usize,
        structure: Structure,
        edges: &[(EdgeLabel, PairCopula)],
        ptr: impl Fn(usize) -> String,
    ) -> Result<Self> {
        match structure {
            Structure::Trivariate if dim != 3 => {
                return Err(Error::spec("/dimension", "trivariate structure requires dimension 3"));
            }
            _ if dim < 2 => return Err(Error::spec("/dimension", "dimension must be at least 2")),
            _ if dim > 64 => return Err(Error::spec("/dimension", "dimension must be at most 64")),
            _ => {}
        }
        let expected = expected_labels(structure, dim);
        let mut slots: Vec<Option<PairCopula>> = vec![None; expected.len()];
        for (i, (label, pc)) in edges.iter().enumerate() {
            let Some(pos) = expected.iter().position(|e| e == label) else {
                return Err(Error::spec(
                    format!("{}/label", ptr(i)),
                    format!("edge {label} does not belong to a {structure:?} vine of dimension {dim}"),
                ));
            };
            if slots[pos].is_some() {
                return Err(Error::spec(format!("{}/label", ptr(i)), format!("edge {label} listed twice")));
            }
            pc.measure
                .validate()
                .map_err(|e| Error::spec(format!("{}/measure", ptr(i)), e.to_string()))?;
            slots[pos] = Some(*pc);
        }
        if let Some(pos) = slots.iter().position(Option::is_none) {
            return Err(Error::spec("/edges", format!("missing edge {}", expected[pos])));
        }
        Ok(VineSpec {
            dim,
            structure,
            edges: expected.into_iter().zip(slots.into_iter().flatten()).collect(),
        })
    }

    /// Trivariate vine from its three pair copulas.
    pub fn trivariate(c12: PairCopula, c23: PairCopula, c13_2: PairCopula) -> Result<Self> {
        Self::new(
            3,
            Structure::Trivariate,
            [
                (EdgeLabel::new(1, 2, []), c12),
                (EdgeLabel::new(2, 3, []), c23),
                (EdgeLabel::new(1, 3, [2]), c13_2),
            ],
        )
    }

    /// D-vine or C-vine whose edge copulas are produced by `f`.
    pub fn from_fn(dim: usize, structure: Structure, f: impl Fn(&EdgeLabel) -> PairCopula) -> Result<Self> {
        let labels = expected_labels(structure, dim);
        Self::new(dim, structure, labels.into_iter().map(|l| {
            let pc = f(&l);
            (l, pc)
        }))
    }

    /// Every edge carries the same pair copula.
    pub fn uniform(dim: usize, structure: Structure, pc: PairCopula) -> Result<Self> {
        Self::from_fn(dim, structure, |_| pc)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn structure(&self) -> Structure {
        self.structure
    }

    /// Edges in canonical order, tree by tree.
    pub fn edges(&self) -> &[(EdgeLabel, PairCopula)] {
        &self.edges
    }

    /// Pair copula on edge `{a, b | given}`.
    pub fn edge(&self, a: usize, b: usize, given: &[usize]) -> Option<&PairCopula> {
        let mut g = given.to_vec();
        g.sort_unstable();
        self.edges
            .iter()
            .find(|(l, _)| l.a == a && l.b == b && l.given == g)
            .map(|(_, pc)| pc)
    }

    /// `(c12, c23, c13|2)` when the vine has the trivariate edge set.
    pub fn trivariate_edges(&self) -> Option<(PairCopula, PairCopula, PairCopula)> {
        if self.dim != 3 || self.structure == Structure::Cvine {
            return None;
        }
        Some((*self.edge(1, 2, &[])?, *self.edge(2, 3, &[])?, *self.edge(1, 3, &[2])?))
    }

    /// Parse JSON, reporting malformed input with a JSON pointer.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(s);
        let raw: SpecJson = serde_path_to_error::deserialize(de).map_err(|e| {
            let pointer = json_pointer(e.path());
            Error::spec(pointer, e.into_inner().to_string())
        })?;
        let mut edges = Vec::with_capacity(raw.edges.len());
        for (i, e) in raw.edges.iter().enumerate() {
            let label: EdgeLabel = e
                .label
                .parse()
                .map_err(|m| Error::spec(format!("/edges/{i}/label"), m))?;
            edges.push((
                label,
                PairCopula {
                    family: e.family,
                    measure: e.measure,
                },
            ));
        }
        Self::validate_parts(raw.dimension, raw.structure, &edges, |i| format!("/edges/{i}"))
    }

    fn to_json_value(&self) -> SpecJson {
        SpecJson {
            dimension: self.dim,
            structure: self.structure,
            edges: self
                .edges
                .iter()
                .map(|(l, pc)| EdgeJson {
                    label: l.to_string(),
                    family: pc.family,
                    measure: pc.measure,
                })
                .collect(),
        }
    }

    /// Canonical compact JSON.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("spec serialisation cannot fail")
    }

    /// Pretty-printed JSON.
    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("spec serialisation cannot fail")
    }

    /// Hex SHA-256 of the canonical JSON.
    pub fn hash_hex(&self) -> String {
        let digest = Sha256::digest(self.to_json_string().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}
