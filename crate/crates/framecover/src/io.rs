//! Reading and writing the toolkit's objects.
//!
//! Matrix-shaped objects (codes, families, Hadamard matrices) use a plain
//! text format: a header line with the dimensions, then one line per row.
//! Blank lines and lines starting with `#` are ignored. Graphs and covers
//! use JSON documents. All parse errors carry 1-based line numbers.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cff::CoverFreeFamily;
use crate::codes::BinaryCode;
use crate::combinatorics::{GraphFamily, LabeledGraph, Side, SubsetMask, Vertex};
use crate::covers::{Biclique, BicliqueCover, CoverBiclique, GroundPairBiclique};
use crate::error::{Error, Result};
use crate::hadamard::HadamardMatrix;

/// Non-blank, non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Parse a header of exactly `n` unsigned integers.
fn parse_header(line: usize, text: &str, n: usize) -> Result<Vec<u64>> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    if fields.len() != n {
        return Err(parse_err(
            line,
            format!("expected {n} header field(s), got {}", fields.len()),
        ));
    }
    fields
        .iter()
        .map(|f| {
            f.parse::<u64>()
                .map_err(|_| parse_err(line, format!("not an unsigned integer: {f}")))
        })
        .collect()
}

/// Parse one 0/1 row of expected width into a bitmask with bit j-1 for
/// character j.
fn parse_bit_row(line: usize, text: &str, width: usize) -> Result<u128> {
    if text.len() != width {
        return Err(parse_err(
            line,
            format!("expected {width} characters, got {}", text.len()),
        ));
    }
    let mut bits = 0u128;
    for (j, c) in text.chars().enumerate() {
        match c {
            '1' => bits |= 1 << j,
            '0' => {}
            other => return Err(parse_err(line, format!("expected 0 or 1, got {other:?}"))),
        }
    }
    Ok(bits)
}

fn format_bit_row(bits: u128, width: usize) -> String {
    (0..width)
        .map(|j| if bits >> j & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Text format for codes: header `t v`, then t rows of v characters,
/// row i belonging to user i and character j to position j.
pub fn parse_code(text: &str) -> Result<BinaryCode> {
    let lines = content_lines(text);
    let (first_line, header) = lines
        .first()
        .ok_or_else(|| parse_err(1, "empty input, expected a `t v` header"))?;
    let dims = parse_header(*first_line, header, 2)?;
    let (t, v) = (dims[0], dims[1]);
    if lines.len() as u64 != t + 1 {
        return Err(parse_err(
            lines.last().map_or(1, |(l, _)| *l),
            format!(
                "expected {t} rows after the header, got {}",
                lines.len() - 1
            ),
        ));
    }
    let mut rows = Vec::with_capacity(t as usize);
    for (line, text) in &lines[1..] {
        rows.push(parse_bit_row(*line, text, v as usize)?);
    }
    if v > u16::MAX as u64 {
        return Err(parse_err(*first_line, "length header out of range"));
    }
    BinaryCode::new(rows, v as u16)
}

pub fn format_code(code: &BinaryCode) -> String {
    let mut out = format!("{} {}\n", code.size(), code.length());
    for user in 1..=code.size() {
        out.push_str(&format_bit_row(code.row(user), code.length() as usize));
        out.push('\n');
    }
    out
}

/// Text format for cover-free families: header `t n`, then t block rows
/// of n characters; column j holds the blocks containing point j.
pub fn parse_cff(text: &str) -> Result<CoverFreeFamily> {
    let lines = content_lines(text);
    let (first_line, header) = lines
        .first()
        .ok_or_else(|| parse_err(1, "empty input, expected a `t n` header"))?;
    let dims = parse_header(*first_line, header, 2)?;
    let (t, n) = (dims[0], dims[1]);
    if t == 0 || t > 63 {
        return Err(parse_err(*first_line, "row count must be between 1 and 63"));
    }
    if lines.len() as u64 != t + 1 {
        return Err(parse_err(
            lines.last().map_or(1, |(l, _)| *l),
            format!(
                "expected {t} rows after the header, got {}",
                lines.len() - 1
            ),
        ));
    }
    let mut rows = Vec::with_capacity(t as usize);
    for (line, text) in &lines[1..] {
        rows.push(parse_bit_row(*line, text, n as usize)?);
    }
    let mut columns = Vec::with_capacity(n as usize);
    for j in 0..n {
        let elems: Vec<u8> = (0..t)
            .filter(|&i| rows[i as usize] >> j & 1 == 1)
            .map(|i| (i + 1) as u8)
            .collect();
        columns.push(SubsetMask::from_elems(&elems, t as u8)?);
    }
    CoverFreeFamily::new(columns)
}

pub fn format_cff(f: &CoverFreeFamily) -> String {
    let t = f.t();
    let mut out = format!("{} {}\n", t, f.n());
    for i in 1..=t {
        let row: String = f
            .columns()
            .iter()
            .map(|c| if c.contains(i) { '1' } else { '0' })
            .collect();
        out.push_str(&row);
        out.push('\n');
    }
    out
}

/// Text format for Hadamard matrices: header `order`, then order rows of
/// `+` and `-` characters.
pub fn parse_hadamard(text: &str) -> Result<HadamardMatrix> {
    let lines = content_lines(text);
    let (first_line, header) = lines
        .first()
        .ok_or_else(|| parse_err(1, "empty input, expected an order header"))?;
    let order = parse_header(*first_line, header, 1)?[0];
    if order == 0 || order > 128 {
        return Err(parse_err(*first_line, "order must be between 1 and 128"));
    }
    if lines.len() as u64 != order + 1 {
        return Err(parse_err(
            lines.last().map_or(1, |(l, _)| *l),
            format!(
                "expected {order} rows after the header, got {}",
                lines.len() - 1
            ),
        ));
    }
    let mut rows = Vec::with_capacity(order as usize);
    for (line, text) in &lines[1..] {
        if text.len() != order as usize {
            return Err(parse_err(
                *line,
                format!("expected {order} characters, got {}", text.len()),
            ));
        }
        let mut bits = 0u128;
        for (j, c) in text.chars().enumerate() {
            match c {
                '+' => bits |= 1 << j,
                '-' => {}
                other => return Err(parse_err(*line, format!("expected + or -, got {other:?}"))),
            }
        }
        rows.push(bits);
    }
    HadamardMatrix::from_rows(rows, order as u16)
}

pub fn format_hadamard(h: &HadamardMatrix) -> String {
    let order = h.order() as usize;
    let mut out = format!("{}\n", h.order());
    for &row in h.rows() {
        let line: String = (0..order)
            .map(|j| if row >> j & 1 == 1 { '+' } else { '-' })
            .collect();
        out.push_str(&line);
        out.push('\n');
    }
    out
}

#[derive(Serialize, Deserialize)]
struct GraphDoc {
    family: String,
    vertex_count: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    vertices: Vec<String>,
    #[serde(default)]
    edges: Vec<(u32, u32)>,
}

pub fn graph_to_json(g: &LabeledGraph) -> String {
    let doc = GraphDoc {
        family: g.family().descriptor(),
        vertex_count: g.vertex_count() as u32,
        vertices: (0..g.vertex_count() as u32).map(|v| g.label(v)).collect(),
        edges: g.edges().to_vec(),
    };
    serde_json::to_string_pretty(&doc).expect("graph document serializes")
}

/// Rebuild a graph from its JSON document. Known families are
/// regenerated from the descriptor and cross-checked against the stored
/// vertex count and edge list; custom graphs are built from the count
/// and edges directly.
pub fn graph_from_json(text: &str) -> Result<LabeledGraph> {
    let doc: GraphDoc = serde_json::from_str(text)?;
    let family = GraphFamily::parse_descriptor(&doc.family)?;
    if family == GraphFamily::Custom {
        if doc.vertex_count > 63 {
            return Err(Error::parameter(
                "custom graphs support at most 63 vertices",
            ));
        }
        let vertices: Vec<Vertex> = (1..=doc.vertex_count as u8)
            .map(|i| {
                Ok(Vertex {
                    mask: SubsetMask::from_elems(&[i], doc.vertex_count as u8)?,
                    side: Side::None,
                })
            })
            .collect::<Result<_>>()?;
        return LabeledGraph::custom(vertices, doc.edges);
    }
    let g = LabeledGraph::from_family(family)?;
    if g.vertex_count() as u32 != doc.vertex_count {
        return Err(Error::GraphMismatch(format!(
            "document says {} vertices but {} has {}",
            doc.vertex_count,
            family,
            g.vertex_count()
        )));
    }
    if !doc.edges.is_empty() {
        let mut given = doc.edges.clone();
        given.sort_unstable();
        if given != g.edges() {
            return Err(Error::GraphMismatch(format!(
                "document edge list does not match the edges of {family}"
            )));
        }
    }
    Ok(g)
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum BicliqueDoc {
    Ground { a: Vec<u8>, b: Vec<u8>, r: u8 },
    Explicit { x: Vec<u32>, y: Vec<u32> },
}

#[derive(Serialize, Deserialize)]
struct CoverDoc {
    graph: String,
    d: u32,
    bicliques: Vec<BicliqueDoc>,
}

pub fn cover_to_json(cover: &BicliqueCover) -> String {
    let bicliques = cover
        .bicliques
        .iter()
        .map(|b| match b {
            CoverBiclique::Ground(gp) => BicliqueDoc::Ground {
                a: gp.a.elems(),
                b: gp.b.elems(),
                r: gp.r,
            },
            CoverBiclique::Explicit(e) => BicliqueDoc::Explicit {
                x: e.x().to_vec(),
                y: e.y().to_vec(),
            },
        })
        .collect();
    let doc = CoverDoc {
        graph: cover.family.descriptor(),
        d: cover.d,
        bicliques,
    };
    serde_json::to_string_pretty(&doc).expect("cover document serializes")
}

pub fn cover_from_json(text: &str) -> Result<BicliqueCover> {
    let doc: CoverDoc = serde_json::from_str(text)?;
    let family = GraphFamily::parse_descriptor(&doc.graph)?;
    let ground = match family {
        GraphFamily::Kneser { t, .. } => Some(t),
        GraphFamily::Complete { n } => Some(n),
        _ => None,
    };
    let mut bicliques = Vec::with_capacity(doc.bicliques.len());
    for (i, b) in doc.bicliques.into_iter().enumerate() {
        match b {
            BicliqueDoc::Ground { a, b, r } => {
                let ground = ground.ok_or_else(|| {
                    Error::parameter(format!(
                        "biclique {i}: ground pairs need a kneser or complete target"
                    ))
                })?;
                let a = SubsetMask::from_elems(&a, ground)?;
                let b = SubsetMask::from_elems(&b, ground)?;
                bicliques.push(CoverBiclique::Ground(GroundPairBiclique::new(a, b, r)?));
            }
            BicliqueDoc::Explicit { x, y } => {
                bicliques.push(CoverBiclique::Explicit(Biclique::new(x, y)));
            }
        }
    }
    Ok(BicliqueCover {
        family,
        d: doc.d,
        bicliques,
    })
}

pub fn read_code(path: impl AsRef<Path>) -> Result<BinaryCode> {
    parse_code(&fs::read_to_string(path)?)
}

pub fn write_code(path: impl AsRef<Path>, code: &BinaryCode) -> Result<()> {
    Ok(fs::write(path, format_code(code))?)
}

pub fn read_cff(path: impl AsRef<Path>) -> Result<CoverFreeFamily> {
    parse_cff(&fs::read_to_string(path)?)
}

pub fn write_cff(path: impl AsRef<Path>, f: &CoverFreeFamily) -> Result<()> {
    Ok(fs::write(path, format_cff(f))?)
}

pub fn read_hadamard(path: impl AsRef<Path>) -> Result<HadamardMatrix> {
    parse_hadamard(&fs::read_to_string(path)?)
}

pub fn write_hadamard(path: impl AsRef<Path>, h: &HadamardMatrix) -> Result<()> {
    Ok(fs::write(path, format_hadamard(h))?)
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<LabeledGraph> {
    graph_from_json(&fs::read_to_string(path)?)
}

pub fn write_graph(path: impl AsRef<Path>, g: &LabeledGraph) -> Result<()> {
    Ok(fs::write(path, graph_to_json(g))?)
}

pub fn read_cover(path: impl AsRef<Path>) -> Result<BicliqueCover> {
    parse_cover_json(&fs::read_to_string(path)?)
}

/// Alias kept close to the other parse functions.
pub fn parse_cover_json(text: &str) -> Result<BicliqueCover> {
    cover_from_json(text)
}

pub fn write_cover(path: impl AsRef<Path>, cover: &BicliqueCover) -> Result<()> {
    Ok(fs::write(path, cover_to_json(cover))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covers::verify_cover;

    #[test]
    fn code_round_trip() {
        let text = "# a comment\n3 4\n\n1010\n0110\n0001\n";
        let code = parse_code(text).unwrap();
        assert_eq!(code.size(), 3);
        assert_eq!(code.length(), 4);
        // Row 1 is 1010: positions 1 and 3 are set.
        assert_eq!(code.row(1), 0b0101);
        let out = format_code(&code);
        assert_eq!(parse_code(&out).unwrap(), code);
        assert!(out.contains("1010"));
    }

    #[test]
    fn code_parse_errors_carry_line_numbers() {
        match parse_code("3 4\n1010\n01x0\n0001\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_code("") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_code("2 3\n111\n") {
            Err(Error::Parse { .. }) => {}
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_code("2 3\n111\n11\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn cff_round_trip() {
        let text = "3 2\n10\n11\n01\n";
        let f = parse_cff(text).unwrap();
        assert_eq!(f.t(), 3);
        assert_eq!(f.n(), 2);
        assert_eq!(f.column(1).elems(), vec![1, 2]);
        assert_eq!(f.column(2).elems(), vec![2, 3]);
        assert_eq!(parse_cff(&format_cff(&f)).unwrap(), f);
    }

    #[test]
    fn hadamard_round_trip() {
        let h = HadamardMatrix::sylvester(4).unwrap();
        let text = format_hadamard(&h);
        assert!(text.starts_with("4\n++++\n"));
        let back = parse_hadamard(&text).unwrap();
        assert_eq!(back, h);

        match parse_hadamard("2\n++\n+x\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn graph_json_round_trip_known_family() {
        let g = LabeledGraph::kneser(5, 2).unwrap();
        let text = graph_to_json(&g);
        let back = graph_from_json(&text).unwrap();
        assert_eq!(back.family(), g.family());
        assert_eq!(back.edges(), g.edges());
        assert!(text.contains("kneser:5,2"));
    }

    #[test]
    fn graph_json_detects_tampered_edges() {
        let g = LabeledGraph::kneser(5, 2).unwrap();
        let mut doc: serde_json::Value = serde_json::from_str(&graph_to_json(&g)).unwrap();
        // Vertices 0 and 1 share an element, so this edge is wrong.
        doc["edges"][0] = serde_json::json!([0, 1]);
        match graph_from_json(&doc.to_string()) {
            Err(Error::GraphMismatch(_)) => {}
            other => panic!("expected mismatch, got {other:?}"),
        }
    }

    #[test]
    fn graph_json_custom_round_trip() {
        let vertices: Vec<Vertex> = (1..=4)
            .map(|i| Vertex {
                mask: SubsetMask::from_elems(&[i], 4).unwrap(),
                side: Side::None,
            })
            .collect();
        let g = LabeledGraph::custom(vertices, vec![(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let text = graph_to_json(&g);
        let back = graph_from_json(&text).unwrap();
        assert_eq!(back.family(), GraphFamily::Custom);
        assert_eq!(back.edges(), g.edges());
    }

    #[test]
    fn cover_json_round_trip() {
        let a = SubsetMask::from_elems(&[1, 2, 3], 5).unwrap();
        let cover = BicliqueCover {
            family: GraphFamily::Kneser { t: 5, r: 2 },
            d: 1,
            bicliques: vec![
                CoverBiclique::Ground(GroundPairBiclique::new(a, a.complement(), 2).unwrap()),
                CoverBiclique::Explicit(Biclique::new(vec![0], vec![9])),
            ],
        };
        let text = cover_to_json(&cover);
        let back = cover_from_json(&text).unwrap();
        assert_eq!(back.family, cover.family);
        assert_eq!(back.d, 1);
        assert_eq!(back.bicliques, cover.bicliques);

        let g = LabeledGraph::kneser(5, 2).unwrap();
        verify_cover(&g, &back).unwrap();
    }

    #[test]
    fn cover_json_rejects_ground_pairs_on_bipartite_targets() {
        let text = r#"{
            "graph": "inter:4,2,1",
            "d": 1,
            "bicliques": [{"a": [1, 2], "b": [3, 4], "r": 2}]
        }"#;
        assert!(cover_from_json(text).is_err());
    }

    #[test]
    fn file_helpers_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("code.txt");
        let code = parse_code("2 3\n101\n010\n").unwrap();
        write_code(&path, &code).unwrap();
        assert_eq!(read_code(&path).unwrap(), code);

        let missing = read_code(dir.path().join("absent.txt"));
        assert!(matches!(missing, Err(Error::Io(_))));
    }
}
