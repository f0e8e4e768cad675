//! Line-oriented text form:
//!
//! ```text
//! surface torus genus 1
//! v 4
//! e 0 0 1
//! f 0 0 0:1 4:1 1:-1 5:-1
//! ```

use super::{CellComplex, Edge, Face, Step, SurfaceTag};
use crate::error::{Error, Result};
use std::fmt::Write;

impl CellComplex {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "surface {} genus {}", self.surface, self.surface.genus()).unwrap();
        writeln!(s, "v {}", self.n_vertices).unwrap();
        for (i, e) in self.edges.iter().enumerate() {
            writeln!(s, "e {i} {} {}", e.src, e.dst).unwrap();
        }
        for (i, f) in self.faces.iter().enumerate() {
            write!(s, "f {i} {}", f.start).unwrap();
            for st in &f.walk {
                write!(s, " {}:{}", st.edge, st.sign).unwrap();
            }
            s.push('\n');
        }
        s
    }

    /// Parses the text form and validates the result.
    pub fn from_text(text: &str) -> Result<CellComplex> {
        let mut surface = None;
        let mut nv = None;
        let mut edges = Vec::new();
        let mut faces = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let ln = ln + 1;
            let perr = |msg: String| Error::Parse { line: ln, msg };
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let tok: Vec<&str> = line.split_whitespace().collect();
            let num = |i: usize| -> Result<usize> {
                tok.get(i)
                    .ok_or_else(|| perr("missing field".into()))?
                    .parse::<usize>()
                    .map_err(|e| perr(format!("`{}`: {e}", tok[i])))
            };
            match tok[0] {
                "surface" => {
                    if tok.len() != 4 || tok[2] != "genus" {
                        return Err(perr("expected `surface <tag> genus <g>`".into()));
                    }
                    let tag: SurfaceTag = tok[1].parse().map_err(|e: Error| perr(e.to_string()))?;
                    if tag.genus() as usize != num(3)? {
                        return Err(perr("surface tag and genus disagree".into()));
                    }
                    surface = Some(tag);
                }
                "v" => nv = Some(num(1)?),
                "e" => {
                    if num(1)? != edges.len() || tok.len() != 4 {
                        return Err(perr("edges must be listed in order as `e <id> <src> <dst>`".into()));
                    }
                    edges.push(Edge { src: num(2)?, dst: num(3)? });
                }
                "f" => {
                    if num(1)? != faces.len() || tok.len() < 4 {
                        return Err(perr("faces must be listed in order as `f <id> <start> <edge:sign>...`".into()));
                    }
                    let mut walk = Vec::new();
                    for t in &tok[3..] {
                        let (e, sg) = t.split_once(':').ok_or_else(|| perr(format!("bad step `{t}`")))?;
                        let e = e.parse().map_err(|_| perr(format!("bad step `{t}`")))?;
                        let sign = match sg {
                            "1" | "+1" => 1,
                            "-1" => -1,
                            _ => return Err(perr(format!("bad sign in `{t}`"))),
                        };
                        walk.push(Step::new(e, sign));
                    }
                    faces.push(Face { start: num(2)?, walk });
                }
                other => return Err(perr(format!("unknown record `{other}`"))),
            }
        }
        let c = CellComplex {
            surface: surface.ok_or_else(|| Error::Parse { line: 0, msg: "missing surface line".into() })?,
            n_vertices: nv.ok_or_else(|| Error::Parse { line: 0, msg: "missing vertex count".into() })?,
            edges,
            faces,
        };
        c.ensure_valid()?;
        Ok(c)
    }
}
