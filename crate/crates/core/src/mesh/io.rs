//! ASCII mesh format.
//!
//! ```text
//! bfmesh 1
//! vertices K
//! x y            (K lines)
//! triangles M
//! i j k          (M lines, 0-based, counterclockwise)
//! boundary B
//! i j TAG        (B lines, TAG in {inlet, wall, outlet})
//! ```
//!
//! Tokens are whitespace separated and `#` starts a comment.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use super::{BoundaryTag, Mesh};
use crate::error::{Error, Result};

pub fn load_mesh(path: impl AsRef<Path>) -> Result<Mesh> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_mesh(&text)
}

pub fn write_mesh(mesh: &Mesh, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, format_mesh(mesh)).map_err(|e| Error::io(path, e))
}

pub fn format_mesh(mesh: &Mesh) -> String {
    let mut out = String::from("bfmesh 1\n");
    let _ = writeln!(out, "vertices {}", mesh.n_vertices());
    for v in mesh.vertices() {
        let _ = writeln!(out, "{:e} {:e}", v[0], v[1]);
    }
    let _ = writeln!(out, "triangles {}", mesh.n_triangles());
    for t in mesh.triangles() {
        let _ = writeln!(out, "{} {} {}", t[0], t[1], t[2]);
    }
    let _ = writeln!(out, "boundary {}", mesh.boundary_edges().len());
    for &(e, tag) in mesh.boundary_edges() {
        let [a, b] = mesh.edges()[e];
        let _ = writeln!(out, "{a} {b} {tag}");
    }
    out
}

struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

struct Lines<'a> {
    lines: Vec<Vec<Token<'a>>>,
    pos: usize,
    last_line: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let mut lines = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let content = raw.split('#').next().unwrap_or("");
            let mut tokens = Vec::new();
            let mut offset = 0;
            for piece in content.split_whitespace() {
                let at = content[offset..].find(piece).unwrap() + offset;
                tokens.push(Token {
                    text: piece,
                    line: i + 1,
                    column: at + 1,
                });
                offset = at + piece.len();
            }
            if !tokens.is_empty() {
                lines.push(tokens);
            }
        }
        let last_line = text.lines().count();
        Lines {
            lines,
            pos: 0,
            last_line,
        }
    }

    fn next_line(&mut self, expecting: &str) -> Result<&[Token<'a>]> {
        match self.lines.get(self.pos) {
            Some(l) => {
                self.pos += 1;
                Ok(l)
            }
            None => Err(Error::Parse {
                line: self.last_line + 1,
                column: 1,
                message: format!("unexpected end of file, expected {expecting}"),
            }),
        }
    }
}

fn parse_err(tok: &Token<'_>, message: impl Into<String>) -> Error {
    Error::Parse {
        line: tok.line,
        column: tok.column,
        message: message.into(),
    }
}

fn expect_len(line: &[Token<'_>], n: usize, what: &str) -> Result<()> {
    if line.len() != n {
        let tok = line.get(n).unwrap_or(&line[line.len() - 1]);
        return Err(parse_err(
            tok,
            format!("expected {n} fields for {what}, found {}", line.len()),
        ));
    }
    Ok(())
}

fn field<T: FromStr>(tok: &Token<'_>, what: &str) -> Result<T> {
    tok.text
        .parse()
        .map_err(|_| parse_err(tok, format!("cannot parse {what} from '{}'", tok.text)))
}

fn section(lines: &mut Lines<'_>, keyword: &str) -> Result<usize> {
    let line = lines.next_line(keyword)?;
    if line[0].text != keyword {
        return Err(parse_err(
            &line[0],
            format!("expected section '{keyword}', found '{}'", line[0].text),
        ));
    }
    expect_len(line, 2, keyword)?;
    field(&line[1], "count")
}

pub fn parse_mesh(text: &str) -> Result<Mesh> {
    let mut lines = Lines::new(text);
    let header = lines.next_line("header 'bfmesh 1'")?;
    if header[0].text != "bfmesh" {
        return Err(parse_err(&header[0], "missing 'bfmesh' header"));
    }
    expect_len(header, 2, "header")?;
    if header[1].text != "1" {
        return Err(parse_err(
            &header[1],
            format!("unsupported format version '{}'", header[1].text),
        ));
    }

    let nv = section(&mut lines, "vertices")?;
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let l = lines.next_line("vertex coordinates")?;
        expect_len(l, 2, "a vertex")?;
        let x: f64 = field(&l[0], "x coordinate")?;
        let y: f64 = field(&l[1], "y coordinate")?;
        if !x.is_finite() || !y.is_finite() {
            return Err(parse_err(&l[0], "vertex coordinates must be finite"));
        }
        vertices.push([x, y]);
    }

    let nt = section(&mut lines, "triangles")?;
    let mut triangles = Vec::with_capacity(nt);
    for _ in 0..nt {
        let l = lines.next_line("triangle indices")?;
        expect_len(l, 3, "a triangle")?;
        let mut tri = [0usize; 3];
        for k in 0..3 {
            tri[k] = field(&l[k], "vertex index")?;
            if tri[k] >= nv {
                return Err(parse_err(
                    &l[k],
                    format!("vertex index {} out of range (have {nv})", tri[k]),
                ));
            }
        }
        triangles.push(tri);
    }

    let nb = section(&mut lines, "boundary")?;
    let mut boundary = Vec::with_capacity(nb);
    for _ in 0..nb {
        let l = lines.next_line("boundary edge")?;
        expect_len(l, 3, "a boundary edge")?;
        let a: usize = field(&l[0], "vertex index")?;
        let b: usize = field(&l[1], "vertex index")?;
        let tag = BoundaryTag::parse(l[2].text).ok_or_else(|| {
            parse_err(&l[2], format!("unknown boundary tag '{}'", l[2].text))
        })?;
        boundary.push(([a, b], tag));
    }
    if let Some(extra) = lines.lines.get(lines.pos) {
        return Err(parse_err(&extra[0], "trailing content after boundary section"));
    }

    Mesh::new(vertices, triangles, &boundary)
}
