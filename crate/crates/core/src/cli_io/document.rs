//! The plain-text session format.
//!
//! ```text
//! ring 32003 x,y,z grevlex
//! matrix f1 1 3
//! x, y, z;
//! complex res = f1 f2
//! ideal a = x, y
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Complexes list
//! their maps from `f_1` outward. Generator degrees are not stored: on
//! load, each complex is graded from `F_0` upward when its entries allow
//! it and left ungraded otherwise.

use std::fmt;

use crate::error::{Error, Result};
use crate::groebner::{IdealData, ResolutionData};
use crate::matrix::{FreeModuleSpec, PolyMatrix};
use crate::poly::{MonomialOrder, Polynomial, Ring};

#[derive(Clone, Debug)]
pub struct SessionDocument {
    ring: Ring,
    matrices: Vec<(String, PolyMatrix)>,
    complexes: Vec<(String, Vec<String>)>,
    ideals: Vec<(String, IdealData)>,
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !name.starts_with(|c: char| c.is_ascii_digit())
}

/// Grades a chain of composable maps from the bottom up, or strips all
/// grading if that is impossible.
pub fn grade_chain(maps: &[PolyMatrix]) -> Vec<PolyMatrix> {
    let mut out: Vec<PolyMatrix> = Vec::with_capacity(maps.len());
    for m in maps {
        let target = out
            .last()
            .and_then(|p| p.source().degrees().map(|d| d.to_vec()));
        let graded = match (&target, out.is_empty()) {
            (Some(t), _) => m.infer_grading(Some(t)),
            (None, true) => m.infer_grading(None),
            (None, false) => Err(Error::Grading("chain below is ungraded".into())),
        };
        match graded {
            Ok(g) => out.push(g),
            Err(_) => return maps.iter().map(PolyMatrix::ungraded).collect(),
        }
    }
    out
}

impl SessionDocument {
    pub fn new(ring: &Ring) -> Self {
        Self {
            ring: ring.clone(),
            matrices: Vec::new(),
            complexes: Vec::new(),
            ideals: Vec::new(),
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    fn check_new_name(&self, name: &str) -> Result<()> {
        if !valid_name(name) {
            return Err(Error::Validation(format!("invalid name {name:?}")));
        }
        let taken = self.matrices.iter().any(|(n, _)| n == name)
            || self.complexes.iter().any(|(n, _)| n == name)
            || self.ideals.iter().any(|(n, _)| n == name);
        if taken {
            return Err(Error::Validation(format!("name {name:?} is defined twice")));
        }
        Ok(())
    }

    pub fn add_matrix(&mut self, name: &str, m: PolyMatrix) -> Result<()> {
        self.check_new_name(name)?;
        self.ring.check_same(m.ring())?;
        let m = m.infer_grading(None).unwrap_or_else(|_| m.ungraded());
        self.matrices.push((name.to_string(), m));
        Ok(())
    }

    /// Adds a complex, validating composability and `f_k ∘ f_{k+1} = 0`.
    pub fn add_complex(&mut self, name: &str, maps: Vec<String>) -> Result<()> {
        self.check_new_name(name)?;
        self.build_complex(name, &maps)?;
        self.complexes.push((name.to_string(), maps));
        Ok(())
    }

    /// Adds `f_1, f_2, ...` under the given prefix plus a complex listing
    /// them.
    pub fn add_resolution(&mut self, name: &str, prefix: &str, res: &ResolutionData) -> Result<()> {
        let mut names = Vec::new();
        for (k, d) in res.differentials().iter().enumerate() {
            let n = format!("{prefix}{}", k + 1);
            self.add_matrix(&n, d.clone())?;
            names.push(n);
        }
        self.add_complex(name, names)
    }

    pub fn add_ideal(&mut self, name: &str, ideal: IdealData) -> Result<()> {
        self.check_new_name(name)?;
        self.ring.check_same(ideal.ring())?;
        self.ideals.push((name.to_string(), ideal));
        Ok(())
    }

    pub fn matrix(&self, name: &str) -> Result<&PolyMatrix> {
        self.matrices
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, m)| m)
            .ok_or_else(|| Error::Validation(format!("no matrix named {name:?}")))
    }

    pub fn ideal(&self, name: &str) -> Result<&IdealData> {
        self.ideals
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, i)| i)
            .ok_or_else(|| Error::Validation(format!("no ideal named {name:?}")))
    }

    pub fn matrix_names(&self) -> impl Iterator<Item = &str> {
        self.matrices.iter().map(|(n, _)| n.as_str())
    }

    pub fn complex_names(&self) -> impl Iterator<Item = &str> {
        self.complexes.iter().map(|(n, _)| n.as_str())
    }

    pub fn complex(&self, name: &str) -> Result<ResolutionData> {
        let maps = self
            .complexes
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, m)| m)
            .ok_or_else(|| Error::Validation(format!("no complex named {name:?}")))?;
        self.build_complex(name, maps)
    }

    fn build_complex(&self, name: &str, maps: &[String]) -> Result<ResolutionData> {
        if maps.is_empty() {
            return Err(Error::Validation(format!("complex {name:?} lists no maps")));
        }
        let raw = maps
            .iter()
            .map(|m| self.matrix(m).cloned())
            .collect::<Result<Vec<_>>>()?;
        for (k, pair) in raw.windows(2).enumerate() {
            if pair[0].cols() != pair[1].rows() {
                return Err(Error::Validation(format!(
                    "complex {name:?}: {} is {}x{} but {} is {}x{}, not composable",
                    maps[k],
                    pair[0].rows(),
                    pair[0].cols(),
                    maps[k + 1],
                    pair[1].rows(),
                    pair[1].cols()
                )));
            }
        }
        ResolutionData::new(&self.ring, grade_chain(&raw)).map_err(|e| match e {
            Error::Validation(msg) => Error::Validation(format!("complex {name:?}: {msg}")),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Parser::new(text).document()
    }

    /// The canonical text form.
    pub fn emit(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for SessionDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ring {}", self.ring)?;
        for (name, m) in &self.matrices {
            writeln!(f, "matrix {name} {} {}", m.rows(), m.cols())?;
            for i in 0..m.rows() {
                let row: Vec<String> = m.row(i).iter().map(|e| e.to_string()).collect();
                writeln!(f, "{};", row.join(", "))?;
            }
        }
        for (name, maps) in &self.complexes {
            writeln!(f, "complex {name} = {}", maps.join(" "))?;
        }
        for (name, ideal) in &self.ideals {
            let gens: Vec<String> = ideal.generators().iter().map(|g| g.to_string()).collect();
            if gens.is_empty() {
                writeln!(f, "ideal {name} =")?;
            } else {
                writeln!(f, "ideal {name} = {}", gens.join(", "))?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Splits on ASCII whitespace, keeping 1-based columns.
fn words(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        let lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim_end()))
            .filter(|(_, l)| {
                let t = l.trim_start();
                !t.is_empty() && !t.starts_with('#')
            })
            .collect();
        Self { lines, pos: 0 }
    }

    fn next_line(&mut self) -> Option<(usize, &'a str)> {
        let l = self.lines.get(self.pos).copied();
        self.pos += 1;
        l
    }

    fn document(mut self) -> Result<SessionDocument> {
        let (ln, header) = self
            .next_line()
            .ok_or_else(|| parse_error(1, 1, "empty document, expected a ring line"))?;
        let ring = Self::ring_line(ln, header)?;
        let mut doc = SessionDocument::new(&ring);
        while let Some((ln, line)) = self.next_line() {
            let w = words(line);
            let (col, keyword) = w[0];
            match keyword {
                "matrix" => {
                    let (name, m) = self.matrix_block(&ring, ln, &w)?;
                    doc.add_matrix(name, m)
                        .map_err(|e| parse_error(ln, col, e.to_string()))?;
                }
                "complex" => {
                    let (name, rest) = Self::assignment(ln, line, &w)?;
                    let maps: Vec<String> = words(rest)
                        .into_iter()
                        .map(|(_, s)| s.to_string())
                        .collect();
                    doc.add_complex(name, maps)?;
                }
                "ideal" => {
                    let (name, rest) = Self::assignment(ln, line, &w)?;
                    let offset = line.len() - rest.len();
                    let gens = Self::polynomials(&ring, ln, rest, offset, true)?;
                    doc.add_ideal(name, IdealData::new(&ring, gens))
                        .map_err(|e| parse_error(ln, col, e.to_string()))?;
                }
                "ring" => return Err(parse_error(ln, col, "only one ring line is allowed")),
                other => {
                    return Err(parse_error(
                        ln,
                        col,
                        format!("unknown block keyword {other:?}"),
                    ))
                }
            }
        }
        Ok(doc)
    }

    fn ring_line(ln: usize, line: &str) -> Result<Ring> {
        let w = words(line);
        if w.first().map(|x| x.1) != Some("ring") {
            return Err(parse_error(
                ln,
                w.first().map_or(1, |x| x.0),
                "expected `ring <p> <vars> <order>`",
            ));
        }
        if w.len() != 4 {
            return Err(parse_error(
                ln,
                1,
                "ring line needs exactly: ring <p> <vars> <order>",
            ));
        }
        let p: u32 = w[1]
            .1
            .parse()
            .map_err(|_| parse_error(ln, w[1].0, format!("bad characteristic {:?}", w[1].1)))?;
        let vars: Vec<&str> = w[2].1.split(',').collect();
        let order = MonomialOrder::from_name(w[3].1).ok_or_else(|| {
            parse_error(ln, w[3].0, format!("unknown monomial order {:?}", w[3].1))
        })?;
        Ring::new(p, vars, order).map_err(|e| parse_error(ln, w[1].0, e.to_string()))
    }

    /// `keyword name = rest`, returning `name` and `rest`.
    fn assignment(ln: usize, line: &'a str, w: &[(usize, &'a str)]) -> Result<(&'a str, &'a str)> {
        if w.len() < 3 || w[2].1 != "=" {
            let col = w.get(2).map_or(line.len() + 1, |x| x.0);
            return Err(parse_error(
                ln,
                col,
                format!("expected `{} <name> = ...`", w[0].1),
            ));
        }
        let rest_start = w[2].0; // 1-based column of '='
        Ok((w[1].1, &line[rest_start..]))
    }

    fn polynomials(
        ring: &Ring,
        ln: usize,
        text: &str,
        offset: usize,
        allow_empty: bool,
    ) -> Result<Vec<Polynomial>> {
        if text.trim().is_empty() {
            return if allow_empty {
                Ok(Vec::new())
            } else {
                Err(parse_error(ln, offset + 1, "expected polynomials"))
            };
        }
        let mut out = Vec::new();
        let mut start = 0;
        for piece in text.split(',') {
            let lead = piece.len() - piece.trim_start().len();
            let col = offset + start + lead + 1;
            let src = piece.trim();
            if src.is_empty() {
                return Err(parse_error(ln, col, "empty entry"));
            }
            let p = Polynomial::parse(ring, src)
                .map_err(|e| parse_error(ln, col + e.offset, e.message))?;
            out.push(p);
            start += piece.len() + 1;
        }
        Ok(out)
    }

    fn matrix_block(
        &mut self,
        ring: &Ring,
        ln: usize,
        w: &[(usize, &'a str)],
    ) -> Result<(&'a str, PolyMatrix)> {
        if w.len() != 4 {
            return Err(parse_error(ln, 1, "expected `matrix <name> <rows> <cols>`"));
        }
        let dim = |k: usize| -> Result<usize> {
            w[k].1
                .parse()
                .map_err(|_| parse_error(ln, w[k].0, format!("bad dimension {:?}", w[k].1)))
        };
        let (rows, cols) = (dim(2)?, dim(3)?);
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            let (rl, line) = self.next_line().ok_or_else(|| {
                parse_error(
                    ln,
                    1,
                    format!("matrix {} ends after {i} of {rows} rows", w[1].1),
                )
            })?;
            let body = line.trim_end();
            let Some(body) = body.strip_suffix(';') else {
                return Err(parse_error(rl, body.len() + 1, "row must end with `;`"));
            };
            let row = Self::polynomials(ring, rl, body, 0, cols == 0)?;
            if row.len() != cols {
                return Err(parse_error(
                    rl,
                    1,
                    format!(
                        "row has {} entries, matrix {} declares {cols}",
                        row.len(),
                        w[1].1
                    ),
                ));
            }
            entries.extend(row);
        }
        let m = PolyMatrix::new(
            ring,
            FreeModuleSpec::new(rows),
            FreeModuleSpec::new(cols),
            entries,
        )?;
        Ok((w[1].1, m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOLDEN: &str = "ring 32003 x,y,z grevlex\nmatrix f1 1 3\nx, y, z;\n";

    #[test]
    fn golden_parse() {
        let doc = SessionDocument::parse(GOLDEN).unwrap();
        let m = doc.matrix("f1").unwrap();
        assert_eq!((m.rows(), m.cols()), (1, 3));
        assert_eq!(m.row(0), doc.ring().vars().as_slice());
        assert_eq!(doc.emit(), GOLDEN);
    }

    #[test]
    fn full_round_trip() {
        let text =
            "# comment\nring 101 x,y lex\n\nmatrix a 1 2\n  x ,  y ;\nmatrix b 2 1\n-y;\n x;\n\
                    matrix e 2 0\n;\n;\ncomplex k = a b\nideal i = x^2 , 3*x*y+ 1\nideal z =\n";
        let doc = SessionDocument::parse(text).unwrap();
        let canonical = doc.emit();
        assert_eq!(
            canonical,
            "ring 101 x,y lex\nmatrix a 1 2\nx, y;\nmatrix b 2 1\n-y;\nx;\nmatrix e 2 0\n;\n;\n\
             complex k = a b\nideal i = x^2, 3*x*y+1\nideal z =\n"
        );
        assert_eq!(
            SessionDocument::parse(&canonical).unwrap().emit(),
            canonical
        );
        let k = doc.complex("k").unwrap();
        assert_eq!(k.ranks(), vec![1, 2, 1]);
        assert!(k.is_graded());
    }

    #[test]
    fn validation_errors() {
        let bad_compose =
            "ring 101 x,y grevlex\nmatrix a 1 2\nx, y;\nmatrix b 1 1\nx;\ncomplex k = a b\n";
        assert!(matches!(
            SessionDocument::parse(bad_compose),
            Err(Error::Validation(_))
        ));
        let not_complex =
            "ring 101 x,y grevlex\nmatrix a 1 2\nx, y;\nmatrix b 2 1\ny;\nx;\ncomplex k = a b\n";
        assert!(matches!(
            SessionDocument::parse(not_complex),
            Err(Error::Validation(_))
        ));
        let missing = "ring 101 x,y grevlex\ncomplex k = a\n";
        assert!(matches!(
            SessionDocument::parse(missing),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let cases: [(&str, usize, usize); 6] = [
            ("ring 100 x,y grevlex\n", 1, 6),
            ("ring 101 x,y weird\n", 1, 14),
            ("ring 101 x,y grevlex\nmatrix a 1 2\nx, q;\n", 3, 4),
            ("ring 101 x,y grevlex\nmatrix a 1 2\nx, y\n", 3, 5),
            ("ring 101 x,y grevlex\nmatrix a 1 2\nx;\n", 3, 1),
            ("ring 101 x,y grevlex\nvector v\n", 2, 1),
        ];
        for (text, line, column) in cases {
            match SessionDocument::parse(text) {
                Err(Error::Parse {
                    line: l, column: c, ..
                }) => {
                    assert_eq!((l, c), (line, column), "{text:?}")
                }
                other => panic!("{text:?} gave {other:?}"),
            }
        }
    }

    #[test]
    fn ungradable_complex_loads_ungraded() {
        let text = "ring 101 x,y grevlex\nmatrix a 1 2\nx+1, y;\ncomplex k = a\n";
        let doc = SessionDocument::parse(text).unwrap();
        assert!(!doc.complex("k").unwrap().is_graded());
    }
}
