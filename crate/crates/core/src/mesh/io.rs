use std::fmt::Write;

use super::{BoundaryEdge, BoundaryTag, Mesh, MeshError};
use crate::Point;

/// Serializes a mesh to the `xfemmesh 1` text format.
pub fn export_mesh(mesh: &Mesh) -> String {
    let mut out = String::new();
    out.push_str("xfemmesh 1\n");
    let _ = writeln!(out, "nodes {}", mesh.num_nodes());
    for p in mesh.nodes() {
        let _ = writeln!(out, "{} {}", p[0], p[1]);
    }
    let _ = writeln!(out, "triangles {}", mesh.num_triangles());
    for t in mesh.triangles() {
        let _ = writeln!(out, "{} {} {}", t[0], t[1], t[2]);
    }
    let _ = writeln!(out, "boundary {}", mesh.boundary_edges().len());
    for e in mesh.boundary_edges() {
        let _ = writeln!(out, "{} {} {}", e.nodes[0], e.nodes[1], e.tag);
    }
    out
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    /// Next non-blank line, as (1-based line number, tokens).
    fn next_tokens(&mut self) -> Option<(usize, Vec<&'a str>)> {
        for (i, line) in self.inner.by_ref() {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if !toks.is_empty() {
                return Some((i + 1, toks));
            }
        }
        None
    }

    fn expect(&mut self, what: &str) -> Result<(usize, Vec<&'a str>), MeshError> {
        self.next_tokens().ok_or_else(|| MeshError::Parse {
            line: 0,
            message: format!("unexpected end of document, expected {what}"),
        })
    }

    fn section(&mut self, keyword: &str) -> Result<usize, MeshError> {
        let (line, toks) = self.expect(keyword)?;
        if toks.len() != 2 || toks[0] != keyword {
            return Err(MeshError::Parse {
                line,
                message: format!("expected `{keyword} <count>`"),
            });
        }
        toks[1].parse().map_err(|_| MeshError::Parse {
            line,
            message: format!("invalid {keyword} count `{}`", toks[1]),
        })
    }
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize) -> Result<T, MeshError> {
    tok.parse().map_err(|_| MeshError::Parse {
        line,
        message: format!("invalid number `{tok}`"),
    })
}

/// Parses and validates a mesh in the `xfemmesh 1` text format.
pub fn import_mesh(text: &str) -> Result<Mesh, MeshError> {
    let mut lines = Lines { inner: text.lines().enumerate() };
    let (line, header) = lines.expect("header")?;
    if header != ["xfemmesh", "1"] {
        return Err(MeshError::Parse {
            line,
            message: "expected header `xfemmesh 1`".into(),
        });
    }

    let n = lines.section("nodes")?;
    let mut nodes: Vec<Point> = Vec::with_capacity(n);
    for _ in 0..n {
        let (line, t) = lines.expect("node coordinates")?;
        if t.len() != 2 {
            return Err(MeshError::Parse { line, message: "expected `x y`".into() });
        }
        nodes.push([parse_num(t[0], line)?, parse_num(t[1], line)?]);
    }

    let nt = lines.section("triangles")?;
    let mut triangles = Vec::with_capacity(nt);
    for _ in 0..nt {
        let (line, t) = lines.expect("triangle")?;
        if t.len() != 3 {
            return Err(MeshError::Parse { line, message: "expected `i j k`".into() });
        }
        triangles.push([
            parse_num(t[0], line)?,
            parse_num(t[1], line)?,
            parse_num(t[2], line)?,
        ]);
    }

    let nb = lines.section("boundary")?;
    let mut boundary = Vec::with_capacity(nb);
    for _ in 0..nb {
        let (line, t) = lines.expect("boundary edge")?;
        if t.len() != 3 {
            return Err(MeshError::Parse { line, message: "expected `i j tag`".into() });
        }
        let tag = BoundaryTag::parse(t[2]).ok_or_else(|| MeshError::Parse {
            line,
            message: format!("unknown boundary tag `{}`", t[2]),
        })?;
        boundary.push(BoundaryEdge {
            nodes: [parse_num(t[0], line)?, parse_num(t[1], line)?],
            tag,
        });
    }
    if let Some((line, _)) = lines.next_tokens() {
        return Err(MeshError::Parse { line, message: "trailing content".into() });
    }
    Mesh::new(nodes, triangles, boundary)
}
