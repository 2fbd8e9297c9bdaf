//! The matrix file grammar and its canonical printer.
//!
//! ```text
//! # comment
//! space M(5,3)
//! source O(-2)^2 O(-1)
//! target O^3
//! matrix
//! [ x*y , x^2 , 0 ]
//! [ x*z , 0 , x ]
//! [ 0 , -x*z , y ]
//! ```
//!
//! Expressions use variables `x y z`, integer or rational literals `a` or
//! `a/b`, the operators `+ - * ^`, and no implicit multiplication.

use crate::error::{Error, Result};
use crate::forms::Form;
use crate::graded::{GradedMorphism, TwistSum};
use crate::scalar::{Field, Scalar};

#[derive(Debug, Clone)]
pub struct MatrixDocument {
    pub space: Option<i64>,
    pub source: Vec<i64>,
    pub target: Vec<i64>,
    /// Row-major entries in canonical (descending-twist) order.
    pub entries: Vec<Form>,
}

impl MatrixDocument {
    pub fn to_morphism(&self) -> Result<GradedMorphism> {
        GradedMorphism::new(self.source.clone(), self.target.clone(), self.entries.clone())?
            .validated()
    }

    pub fn from_morphism(space: Option<i64>, phi: &GradedMorphism) -> MatrixDocument {
        let mut entries = Vec::with_capacity(phi.rows() * phi.cols());
        for i in 0..phi.rows() {
            for j in 0..phi.cols() {
                entries.push(phi.entry(i, j).clone());
            }
        }
        MatrixDocument {
            space,
            source: phi.source().twists().to_vec(),
            target: phi.target().twists().to_vec(),
            entries,
        }
    }
}

/// Canonical text of a document: descending twists, graded-lex terms, one
/// matrix row per line.
pub fn print(doc: &MatrixDocument) -> String {
    let mut out = String::new();
    if let Some(chi) = doc.space {
        out.push_str(&format!("space M(5,{chi})\n"));
    }
    out.push_str(&format!("source {}\n", TwistSum::new(doc.source.clone())));
    out.push_str(&format!("target {}\n", TwistSum::new(doc.target.clone())));
    out.push_str("matrix\n");
    let cols = doc.source.len();
    for row in doc.entries.chunks(cols) {
        let cells: Vec<String> = row.iter().map(|f| f.to_string()).collect();
        out.push_str(&format!("[ {} ]\n", cells.join(" , ")));
    }
    out
}

/// Parse a document over the given coefficient field.
pub fn parse(text: &str, field: Field) -> Result<MatrixDocument> {
    let mut space = None;
    let mut source: Option<Vec<i64>> = None;
    let mut target: Option<Vec<i64>> = None;
    let mut in_matrix = false;
    let mut rows: Vec<Vec<Form>> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(idx) => &raw[..idx],
            None => raw,
        };
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let lno = lineno + 1;
        if let Some(rest) = trimmed.strip_prefix("space") {
            if space.is_some() || source.is_some() {
                return perr(lno, 1, "space line must come first and appear once");
            }
            space = Some(parse_space(rest.trim(), lno)?);
        } else if let Some(rest) = trimmed.strip_prefix("source") {
            if source.is_some() {
                return perr(lno, 1, "duplicate source line");
            }
            source = Some(parse_twist_list(rest.trim(), lno)?);
        } else if let Some(rest) = trimmed.strip_prefix("target") {
            if target.is_some() {
                return perr(lno, 1, "duplicate target line");
            }
            if source.is_none() {
                return perr(lno, 1, "target line before source line");
            }
            target = Some(parse_twist_list(rest.trim(), lno)?);
        } else if trimmed == "matrix" {
            if target.is_none() {
                return perr(lno, 1, "matrix line before source/target");
            }
            if in_matrix {
                return perr(lno, 1, "duplicate matrix line");
            }
            in_matrix = true;
        } else if trimmed.starts_with('[') {
            if !in_matrix {
                return perr(lno, 1, "matrix row before the matrix line");
            }
            rows.push(parse_row(trimmed, lno, field)?);
        } else {
            return perr(lno, 1, &format!("unrecognized line: {trimmed}"));
        }
    }
    let source = source.ok_or_else(|| Error::Parse {
        line: text.lines().count() + 1,
        col: 1,
        msg: "missing source line".into(),
    })?;
    let target = target.ok_or_else(|| Error::Parse {
        line: text.lines().count() + 1,
        col: 1,
        msg: "missing target line".into(),
    })?;
    if rows.len() != target.len() {
        return perr(
            text.lines().count() + 1,
            1,
            &format!("expected {} matrix rows, found {}", target.len(), rows.len()),
        );
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != source.len() {
            return perr(
                1,
                1,
                &format!("row {} has {} entries, expected {}", i + 1, row.len(), source.len()),
            );
        }
    }
    // Degree check per cell, with the cell named in the error.
    for (i, row) in rows.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            let want = target[i] - source[j];
            if e.is_zero() {
                continue;
            }
            if want < 0 || e.degree() != want as usize {
                return perr(
                    1,
                    1,
                    &format!(
                        "entry ({}, {}) has degree {}, expected {}",
                        i + 1,
                        j + 1,
                        e.degree(),
                        want
                    ),
                );
            }
        }
    }
    let entries: Vec<Form> = rows.into_iter().flatten().collect();
    // Canonicalize through the morphism constructor.
    let phi = GradedMorphism::new(source, target, entries)?;
    Ok(MatrixDocument::from_morphism(space, &phi))
}

fn perr<T>(line: usize, col: usize, msg: &str) -> Result<T> {
    Err(Error::Parse { line, col, msg: msg.into() })
}

fn parse_space(text: &str, lno: usize) -> Result<i64> {
    let inner = text
        .strip_prefix("M(5,")
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| Error::Parse {
            line: lno,
            col: 1,
            msg: format!("expected M(5,<int>), found {text}"),
        })?;
    inner.trim().parse::<i64>().map_err(|_| Error::Parse {
        line: lno,
        col: 1,
        msg: format!("bad Euler characteristic {inner}"),
    })
}

fn parse_twist_list(text: &str, lno: usize) -> Result<Vec<i64>> {
    let mut out = Vec::new();
    for item in text.split_whitespace() {
        let (head, count) = match item.split_once('^') {
            Some((h, c)) => {
                let n: usize = c.parse().map_err(|_| Error::Parse {
                    line: lno,
                    col: 1,
                    msg: format!("bad multiplicity in {item}"),
                })?;
                (h, n)
            }
            None => (item, 1),
        };
        let twist = if head == "O" {
            0
        } else {
            head.strip_prefix("O(")
                .and_then(|t| t.strip_suffix(')'))
                .and_then(|t| t.parse::<i64>().ok())
                .ok_or_else(|| Error::Parse {
                    line: lno,
                    col: 1,
                    msg: format!("bad twist item {item}"),
                })?
        };
        if count == 0 {
            return perr(lno, 1, &format!("zero multiplicity in {item}"));
        }
        out.extend(std::iter::repeat(twist).take(count));
    }
    if out.is_empty() {
        return perr(lno, 1, "empty twist list");
    }
    Ok(out)
}

fn parse_row(text: &str, lno: usize, field: Field) -> Result<Vec<Form>> {
    let inner = text
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| Error::Parse { line: lno, col: 1, msg: "matrix row must be [ ... ]".into() })?;
    inner
        .split(',')
        .map(|cell| parse_form(cell.trim(), field).map_err(|e| match e {
            Error::Parse { col, msg, .. } => Error::Parse { line: lno, col, msg },
            other => other,
        }))
        .collect()
}

// ---------------------------------------------------------------------------
// expression parser
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Var(usize),
    Num(i64, i64),
    Plus,
    Minus,
    Star,
    Caret,
    End,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    len: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer { chars: text.char_indices().peekable(), len: text.len() }
    }

    fn next_tok(&mut self) -> Result<(usize, Tok)> {
        while let Some(&(_, c)) = self.chars.peek() {
            if c.is_whitespace() {
                self.chars.next();
            } else {
                break;
            }
        }
        let Some(&(pos, c)) = self.chars.peek() else {
            return Ok((self.len, Tok::End));
        };
        let col = pos + 1;
        match c {
            'x' => {
                self.chars.next();
                Ok((col, Tok::Var(0)))
            }
            'y' => {
                self.chars.next();
                Ok((col, Tok::Var(1)))
            }
            'z' => {
                self.chars.next();
                Ok((col, Tok::Var(2)))
            }
            '+' => {
                self.chars.next();
                Ok((col, Tok::Plus))
            }
            '-' => {
                self.chars.next();
                Ok((col, Tok::Minus))
            }
            '*' => {
                self.chars.next();
                Ok((col, Tok::Star))
            }
            '^' => {
                self.chars.next();
                Ok((col, Tok::Caret))
            }
            d if d.is_ascii_digit() => {
                let mut num = 0i64;
                while let Some(&(_, c2)) = self.chars.peek() {
                    if let Some(v) = c2.to_digit(10) {
                        num = num
                            .checked_mul(10)
                            .and_then(|n| n.checked_add(v as i64))
                            .ok_or(Error::Parse {
                                line: 0,
                                col,
                                msg: "integer literal overflows".into(),
                            })?;
                        self.chars.next();
                    } else {
                        break;
                    }
                }
                // optional /b
                if let Some(&(_, '/')) = self.chars.peek() {
                    self.chars.next();
                    let mut den = 0i64;
                    let mut any = false;
                    while let Some(&(_, c2)) = self.chars.peek() {
                        if let Some(v) = c2.to_digit(10) {
                            den = den * 10 + v as i64;
                            any = true;
                            self.chars.next();
                        } else {
                            break;
                        }
                    }
                    if !any || den == 0 {
                        return Err(Error::Parse {
                            line: 0,
                            col,
                            msg: "bad rational literal".into(),
                        });
                    }
                    return Ok((col, Tok::Num(num, den)));
                }
                Ok((col, Tok::Num(num, 1)))
            }
            other => Err(Error::Parse {
                line: 0,
                col,
                msg: format!("unexpected character {other:?}"),
            }),
        }
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    field: Field,
}

impl Parser {
    fn peek(&self) -> &(usize, Tok) {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> (usize, Tok) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Form> {
        let mut negate = false;
        if self.peek().1 == Tok::Minus {
            self.bump();
            negate = true;
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek().1 {
                Tok::Plus => {
                    self.bump();
                    let t = self.term()?;
                    acc = self.check_add(acc, t)?;
                }
                Tok::Minus => {
                    self.bump();
                    let t = self.term()?;
                    acc = self.check_add(acc, t.neg())?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn check_add(&self, a: Form, b: Form) -> Result<Form> {
        a.add(&b).map_err(|e| Error::Parse {
            line: 0,
            col: self.peek().0,
            msg: format!("inhomogeneous expression: {e}"),
        })
    }

    fn term(&mut self) -> Result<Form> {
        let mut acc = self.factor()?;
        while self.peek().1 == Tok::Star {
            self.bump();
            let f = self.factor()?;
            acc = acc.mul(&f).expect("same field");
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Form> {
        let (col, tok) = self.bump();
        let base = match tok {
            Tok::Var(v) => Form::var(self.field, v),
            Tok::Num(n, d) => {
                let c = Scalar::from_ratio(self.field, n, d).map_err(|e| Error::Parse {
                    line: 0,
                    col,
                    msg: e.to_string(),
                })?;
                Form::constant(self.field, c).expect("same field")
            }
            Tok::End => {
                return Err(Error::Parse { line: 0, col, msg: "unexpected end of input".into() })
            }
            other => {
                return Err(Error::Parse {
                    line: 0,
                    col,
                    msg: format!("expected a variable or literal, found {other:?}"),
                })
            }
        };
        if self.peek().1 == Tok::Caret {
            self.bump();
            let (ecol, etok) = self.bump();
            match etok {
                Tok::Num(n, 1) if n >= 0 => Ok(base.pow(n as usize)),
                _ => Err(Error::Parse {
                    line: 0,
                    col: ecol,
                    msg: "exponent must be a natural number".into(),
                }),
            }
        } else {
            Ok(base)
        }
    }
}

/// Parse one form expression over the given field.
pub fn parse_form(text: &str, field: Field) -> Result<Form> {
    let mut lexer = Lexer::new(text);
    let mut toks = Vec::new();
    loop {
        let t = lexer.next_tok()?;
        let end = t.1 == Tok::End;
        toks.push(t);
        if end {
            break;
        }
    }
    let mut parser = Parser { toks, pos: 0, field };
    let form = parser.expr()?;
    let (col, tok) = parser.peek().clone();
    if tok != Tok::End {
        return Err(Error::Parse { line: 0, col, msg: format!("trailing input {tok:?}") });
    }
    Ok(form)
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = "space M(5,3)\nsource O(-2)^2 O(-1)\ntarget O^3\nmatrix\n[ x*y , x^2 , 0 ]\n[ x*z , 0 , x ]\n[ 0 , -x*z , y ]\n";

    #[test]
    fn grammar_example_roundtrip() {
        let doc = parse(EXAMPLE, Field::Q).unwrap();
        assert_eq!(doc.space, Some(3));
        let phi = doc.to_morphism().unwrap();
        assert!(phi.determinant().unwrap().is_zero());
        let printed = print(&doc);
        let reparsed = parse(&printed, Field::Q).unwrap();
        assert_eq!(print(&reparsed), printed);
        assert_eq!(reparsed.to_morphism().unwrap(), phi);
    }

    #[test]
    fn expression_forms() {
        let f = parse_form("x^2 - 3/2*y*z", Field::Q).unwrap();
        assert_eq!(f.to_string(), "x^2 - 3/2*y*z");
        assert_eq!(parse_form(&f.to_string(), Field::Q).unwrap(), f);
        assert!(parse_form("x^2 +", Field::Q).is_err());
        assert!(parse_form("x y", Field::Q).is_err());
        assert!(parse_form("2x", Field::Q).is_err());
        assert_eq!(parse_form("0", Field::Q).unwrap().is_zero(), true);
    }

    #[test]
    fn degree_errors_name_the_cell() {
        let bad = "source O(-1)\ntarget O\nmatrix\n[ x^2 ]\n";
        match parse(bad, Field::Q) {
            Err(Error::Parse { msg, .. }) => assert!(msg.contains("entry (1, 1)"), "{msg}"),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn prime_field_documents() {
        let doc = parse("source O(-1)\ntarget O\nmatrix\n[ 1/3*x ]\n", Field::Fp(5)).unwrap();
        // 1/3 = 2 mod 5.
        assert_eq!(doc.entries[0].to_string(), "2*x");
        assert!(parse("source O(-1)\ntarget O\nmatrix\n[ 1/5*x ]\n", Field::Fp(5)).is_err());
    }

    #[test]
    fn inhomogeneous_entries_rejected() {
        match parse_form("x + x*y", Field::Q) {
            Err(Error::Parse { msg, .. }) => assert!(msg.contains("inhomogeneous")),
            other => panic!("expected parse error, got {other:?}"),
        }
    }
}
