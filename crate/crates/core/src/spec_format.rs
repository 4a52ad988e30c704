//! Line-oriented input format for algebras, dilations and functionals.
//!
//! ```text
//! # Heisenberg
//! dim 3
//! basis X1 X2 X3
//! [X3, X2] = X1
//! dilation 4 2 2
//! lambda rational 1 0 0
//! ```
//!
//! Keys: `dim`, `basis`, bracket lines `[A, B] = q*C + ...`, `dilation`,
//! `lambda generic | rational v.. | mixed v|?.. | qstruct s..` (the last
//! followed by one `row <linear expression in the symbols>` per basis
//! element), and `lattice`. `#` starts a comment.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::algebra::{AlgebraError, LieAlgebra, StructureConstants};
use crate::{parse_rational, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Syntax,
    Semantic,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub kind: ErrorKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// Coefficient and optional located symbol.
type LinearTerm = (Q, Option<(String, usize)>);

#[derive(Clone, Debug, PartialEq)]
pub struct BracketRelation {
    pub left: usize,
    pub right: usize,
    pub terms: Vec<(Q, usize)>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LambdaDecl {
    Generic,
    Rational(Vec<Q>),
    /// `None` entries are independent generic symbols.
    Mixed(Vec<Option<Q>>),
    /// Row `k` holds `(c_0, c_1, .., c_r)` with `λ_k = c_0 + Σ c_i θ_i`.
    QStructured {
        symbols: Vec<String>,
        rows: Vec<Vec<Q>>,
    },
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct SpecDocument {
    pub dim: usize,
    pub basis: Vec<String>,
    pub brackets: Vec<BracketRelation>,
    pub dilation: Option<Vec<Q>>,
    pub lambda: Option<LambdaDecl>,
    pub lattice: bool,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(String),
    Sym(char),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    col: usize,
}

fn lex(line: &str, lineno: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Int(chars[start..i].iter().collect()),
                col,
            });
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                col,
            });
        } else if "[],=+-*/?".contains(c) {
            out.push(Token { tok: Tok::Sym(c), col });
            i += 1;
        } else {
            return Err(ParseError {
                kind: ErrorKind::Syntax,
                line: lineno,
                column: col,
                message: format!("unexpected character '{c}'"),
            });
        }
    }
    Ok(out)
}

struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
    line: usize,
    end_col: usize,
}

impl<'a> Cursor<'a> {
    fn new(toks: &'a [Token], line: usize, end_col: usize) -> Self {
        Cursor {
            toks,
            pos: 0,
            line,
            end_col,
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.col).unwrap_or(self.end_col)
    }

    fn next(&mut self) -> Option<&Tok> {
        let t = self.toks.get(self.pos).map(|t| &t.tok);
        self.pos += 1;
        t
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn err(&self, kind: ErrorKind, col: usize, msg: impl Into<String>) -> ParseError {
        ParseError {
            kind,
            line: self.line,
            column: col,
            message: msg.into(),
        }
    }

    fn syntax(&self, msg: impl Into<String>) -> ParseError {
        self.err(ErrorKind::Syntax, self.col(), msg)
    }

    fn expect_sym(&mut self, c: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(Tok::Sym(s)) if *s == c => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.syntax(format!("expected '{c}'"))),
        }
    }

    fn expect_ident(&mut self) -> Result<(String, usize), ParseError> {
        let col = self.col();
        match self.next() {
            Some(Tok::Ident(s)) => Ok((s.clone(), col)),
            _ => {
                self.pos -= 1;
                Err(self.syntax("expected a name"))
            }
        }
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.syntax("unexpected trailing input"))
        }
    }

    /// `[-] int [/ int]`
    fn rational(&mut self) -> Result<Q, ParseError> {
        let mut neg = false;
        if let Some(Tok::Sym('-')) = self.peek() {
            neg = true;
            self.pos += 1;
        }
        let q = self.unsigned_rational()?;
        Ok(if neg { -q } else { q })
    }

    fn unsigned_rational(&mut self) -> Result<Q, ParseError> {
        let num = match self.peek() {
            Some(Tok::Int(s)) => s.clone(),
            _ => return Err(self.syntax("expected a rational number")),
        };
        self.pos += 1;
        let mut text = num;
        if let Some(Tok::Sym('/')) = self.peek() {
            self.pos += 1;
            match self.peek() {
                Some(Tok::Int(s)) => {
                    text = format!("{text}/{s}");
                    self.pos += 1;
                }
                _ => return Err(self.syntax("expected a denominator")),
            }
        }
        parse_rational(&text).ok_or_else(|| self.syntax("zero denominator"))
    }

    /// Sum of `±[q[*]]name` and `±q` terms. Constant terms use `None`.
    fn linear_expr(&mut self) -> Result<Vec<LinearTerm>, ParseError> {
        let mut terms = Vec::new();
        let mut first = true;
        loop {
            let mut sign = Q::one();
            match self.peek() {
                Some(Tok::Sym('+')) if !first => {
                    self.pos += 1;
                }
                Some(Tok::Sym('-')) => {
                    self.pos += 1;
                    sign = -sign;
                }
                None if first => return Err(self.syntax("expected an expression")),
                _ if !first => return Err(self.syntax("expected '+' or '-'")),
                _ => {}
            }
            first = false;
            match self.peek() {
                Some(Tok::Int(_)) => {
                    let c = self.unsigned_rational()? * &sign;
                    if let Some(Tok::Sym('*')) = self.peek() {
                        self.pos += 1;
                        let name = self.expect_ident()?;
                        terms.push((c, Some(name)));
                    } else if let Some(Tok::Ident(_)) = self.peek() {
                        let name = self.expect_ident()?;
                        terms.push((c, Some(name)));
                    } else {
                        terms.push((c, None));
                    }
                }
                Some(Tok::Ident(_)) => {
                    let name = self.expect_ident()?;
                    terms.push((sign, Some(name)));
                }
                _ => return Err(self.syntax("expected a coefficient or a name")),
            }
            if self.at_end() {
                return Ok(terms);
            }
        }
    }
}

struct PendingQStruct {
    symbols: Vec<String>,
    rows: Vec<Vec<Q>>,
    line: usize,
}

pub fn parse_spec(text: &str) -> Result<SpecDocument, ParseError> {
    let mut doc = SpecDocument::default();
    let mut dim_seen: Option<usize> = None;
    let mut names: HashMap<String, usize> = HashMap::new();
    let mut basis_line = 0;
    let mut seen_pairs: HashMap<(usize, usize), usize> = HashMap::new();
    let mut pending: Option<PendingQStruct> = None;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        last_line = lineno;
        let line = raw.split('#').next().unwrap_or("");
        let toks = lex(line, lineno)?;
        if toks.is_empty() {
            continue;
        }
        let end_col = line.chars().count() + 1;
        let mut cur = Cursor::new(&toks, lineno, end_col);
        let sem = |col: usize, msg: String| ParseError {
            kind: ErrorKind::Semantic,
            line: lineno,
            column: col,
            message: msg,
        };

        if let Some(p) = pending.as_mut() {
            if p.rows.len() < doc.dim {
                match cur.peek() {
                    Some(Tok::Ident(k)) if k == "row" => {
                        cur.pos += 1;
                        let terms = cur.linear_expr()?;
                        let mut row = vec![Q::zero(); p.symbols.len() + 1];
                        for (c, name) in terms {
                            match name {
                                None => row[0] += c,
                                Some((n, col)) => {
                                    let Some(pos) = p.symbols.iter().position(|s| *s == n) else {
                                        return Err(sem(col, format!("undeclared symbol {n}")));
                                    };
                                    row[pos + 1] += c;
                                }
                            }
                        }
                        p.rows.push(row);
                        continue;
                    }
                    _ => return Err(cur.syntax(format!("expected 'row' ({} of {} given)", p.rows.len(), doc.dim))),
                }
            }
        }
        if let Some(p) = pending.take() {
            doc.lambda = Some(LambdaDecl::QStructured {
                symbols: p.symbols,
                rows: p.rows,
            });
        }

        match cur.peek().cloned() {
            Some(Tok::Sym('[')) => {
                let Some(n) = dim_seen else {
                    return Err(sem(1, "bracket before 'dim'".into()));
                };
                if doc.basis.len() != n {
                    return Err(sem(1, "bracket before 'basis'".into()));
                }
                cur.expect_sym('[')?;
                let (a, acol) = cur.expect_ident()?;
                cur.expect_sym(',')?;
                let (b, bcol) = cur.expect_ident()?;
                cur.expect_sym(']')?;
                cur.expect_sym('=')?;
                let rhs = if let (Some(Tok::Int(z)), 1) = (cur.peek(), toks.len() - cur.pos) {
                    if z.chars().all(|c| c == '0') {
                        cur.pos += 1;
                        Vec::new()
                    } else {
                        cur.linear_expr()?
                    }
                } else {
                    cur.linear_expr()?
                };
                let lookup = |name: &str, col: usize| {
                    names
                        .get(name)
                        .copied()
                        .ok_or_else(|| sem(col, format!("undeclared {name}")))
                };
                let left = lookup(&a, acol)?;
                let right = lookup(&b, bcol)?;
                if left == right {
                    return Err(sem(acol, format!("[{a}, {a}] is identically zero")));
                }
                let key = (left.min(right), left.max(right));
                if let Some(prev) = seen_pairs.insert(key, lineno) {
                    return Err(sem(1, format!("bracket [{a}, {b}] already given on line {prev}")));
                }
                let mut terms = Vec::new();
                for (c, name) in rhs {
                    let Some((n, col)) = name else {
                        return Err(sem(cur.col(), "constant term in a bracket".into()));
                    };
                    terms.push((c, lookup(&n, col)?));
                }
                doc.brackets.push(BracketRelation { left, right, terms });
            }
            Some(Tok::Ident(key)) => {
                cur.pos += 1;
                match key.as_str() {
                    "dim" => {
                        if dim_seen.is_some() {
                            return Err(sem(1, "duplicate 'dim'".into()));
                        }
                        let col = cur.col();
                        let n = match cur.next() {
                            Some(Tok::Int(s)) => s.parse::<usize>().ok(),
                            _ => None,
                        }
                        .ok_or_else(|| cur.err(ErrorKind::Syntax, col, "expected a dimension"))?;
                        cur.expect_end()?;
                        if n == 0 {
                            return Err(sem(col, "dimension must be positive".into()));
                        }
                        dim_seen = Some(n);
                        doc.dim = n;
                    }
                    "basis" => {
                        let Some(n) = dim_seen else {
                            return Err(sem(1, "'basis' before 'dim'".into()));
                        };
                        if !doc.basis.is_empty() {
                            return Err(sem(1, "duplicate 'basis'".into()));
                        }
                        while !cur.at_end() {
                            let (name, col) = cur.expect_ident()?;
                            if names.insert(name.clone(), doc.basis.len()).is_some() {
                                return Err(sem(col, format!("basis name {name} repeated")));
                            }
                            doc.basis.push(name);
                        }
                        if doc.basis.len() != n {
                            return Err(sem(
                                1,
                                format!("dimension mismatch: dim {n} but {} basis names", doc.basis.len()),
                            ));
                        }
                        basis_line = lineno;
                    }
                    "dilation" => {
                        if doc.dilation.is_some() {
                            return Err(sem(1, "duplicate 'dilation'".into()));
                        }
                        let mut vals = Vec::new();
                        while !cur.at_end() {
                            let col = cur.col();
                            let v = cur.rational()?;
                            if v.is_zero() {
                                return Err(sem(col, "zero eigenvalue".into()));
                            }
                            vals.push(v);
                        }
                        match dim_seen {
                            Some(n) if n == vals.len() => {}
                            Some(n) => {
                                return Err(sem(
                                    1,
                                    format!("dimension mismatch: {} eigenvalues for dim {n}", vals.len()),
                                ))
                            }
                            None => return Err(sem(1, "'dilation' before 'dim'".into())),
                        }
                        doc.dilation = Some(vals);
                    }
                    "lambda" => {
                        if doc.lambda.is_some() {
                            return Err(sem(1, "duplicate 'lambda'".into()));
                        }
                        let Some(n) = dim_seen else {
                            return Err(sem(1, "'lambda' before 'dim'".into()));
                        };
                        let (mode, mcol) = cur.expect_ident()?;
                        match mode.as_str() {
                            "generic" => {
                                cur.expect_end()?;
                                doc.lambda = Some(LambdaDecl::Generic);
                            }
                            "rational" => {
                                let mut vals = Vec::new();
                                while !cur.at_end() {
                                    vals.push(cur.rational()?);
                                }
                                if vals.len() != n {
                                    return Err(sem(
                                        mcol,
                                        format!("dimension mismatch: {} values for dim {n}", vals.len()),
                                    ));
                                }
                                doc.lambda = Some(LambdaDecl::Rational(vals));
                            }
                            "mixed" => {
                                let mut vals = Vec::new();
                                while !cur.at_end() {
                                    if let Some(Tok::Sym('?')) = cur.peek() {
                                        cur.pos += 1;
                                        vals.push(None);
                                    } else {
                                        vals.push(Some(cur.rational()?));
                                    }
                                }
                                if vals.len() != n {
                                    return Err(sem(
                                        mcol,
                                        format!("dimension mismatch: {} values for dim {n}", vals.len()),
                                    ));
                                }
                                doc.lambda = Some(LambdaDecl::Mixed(vals));
                            }
                            "qstruct" => {
                                let mut symbols: Vec<String> = Vec::new();
                                while !cur.at_end() {
                                    let (s, col) = cur.expect_ident()?;
                                    if symbols.contains(&s) || s == "row" {
                                        return Err(sem(col, format!("bad symbol name {s}")));
                                    }
                                    symbols.push(s);
                                }
                                pending = Some(PendingQStruct {
                                    symbols,
                                    rows: Vec::new(),
                                    line: lineno,
                                });
                            }
                            other => {
                                return Err(cur.err(ErrorKind::Syntax, mcol, format!("unknown lambda mode '{other}'")))
                            }
                        }
                    }
                    "lattice" => {
                        if let Some(Tok::Ident(w)) = cur.peek() {
                            if w == "check" {
                                cur.pos += 1;
                            }
                        }
                        cur.expect_end()?;
                        doc.lattice = true;
                    }
                    "row" => return Err(sem(1, "'row' outside a qstruct declaration".into())),
                    other => {
                        return Err(cur.err(ErrorKind::Syntax, 1, format!("unknown key '{other}'")));
                    }
                }
            }
            _ => return Err(cur.syntax("expected a key or a bracket")),
        }
    }

    if let Some(p) = pending.take() {
        if p.rows.len() < doc.dim {
            return Err(ParseError {
                kind: ErrorKind::Syntax,
                line: p.line,
                column: 1,
                message: format!("qstruct declares {} of {} rows", p.rows.len(), doc.dim),
            });
        }
        doc.lambda = Some(LambdaDecl::QStructured {
            symbols: p.symbols,
            rows: p.rows,
        });
    }
    if dim_seen.is_none() {
        return Err(ParseError {
            kind: ErrorKind::Semantic,
            line: last_line.max(1),
            column: 1,
            message: "missing 'dim'".into(),
        });
    }
    if doc.basis.is_empty() {
        return Err(ParseError {
            kind: ErrorKind::Semantic,
            line: last_line.max(1),
            column: 1,
            message: "missing 'basis'".into(),
        });
    }
    let _ = basis_line;
    Ok(doc)
}

impl SpecDocument {
    pub fn structure_constants(&self) -> Result<StructureConstants, AlgebraError> {
        let mut sc = StructureConstants::new(self.dim);
        for b in &self.brackets {
            for (c, k) in &b.terms {
                sc.add(b.left, b.right, *k, c.clone())?;
            }
        }
        Ok(sc)
    }

    pub fn algebra(&self) -> Result<LieAlgebra, AlgebraError> {
        LieAlgebra::with_names(self.structure_constants()?, self.basis.clone())
    }

    /// Canonical text: parsing it yields an equal document.
    pub fn to_canonical_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("dim {}\n", self.dim));
        out.push_str(&format!("basis {}\n", self.basis.join(" ")));
        for b in &self.brackets {
            let rhs = if b.terms.is_empty() {
                "0".to_string()
            } else {
                format_linear(b.terms.iter().map(|(c, k)| (c.clone(), Some(self.basis[*k].as_str()))))
            };
            out.push_str(&format!(
                "[{}, {}] = {}\n",
                self.basis[b.left], self.basis[b.right], rhs
            ));
        }
        if let Some(a) = &self.dilation {
            let vals: Vec<String> = a.iter().map(|x| x.to_string()).collect();
            out.push_str(&format!("dilation {}\n", vals.join(" ")));
        }
        match &self.lambda {
            None => {}
            Some(LambdaDecl::Generic) => out.push_str("lambda generic\n"),
            Some(LambdaDecl::Rational(v)) => {
                let vals: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                out.push_str(&format!("lambda rational {}\n", vals.join(" ")));
            }
            Some(LambdaDecl::Mixed(v)) => {
                let vals: Vec<String> = v
                    .iter()
                    .map(|x| x.as_ref().map_or("?".to_string(), |x| x.to_string()))
                    .collect();
                out.push_str(&format!("lambda mixed {}\n", vals.join(" ")));
            }
            Some(LambdaDecl::QStructured { symbols, rows }) => {
                out.push_str(&format!("lambda qstruct {}\n", symbols.join(" ")));
                for row in rows {
                    let terms = row
                        .iter()
                        .enumerate()
                        .map(|(i, c)| (c.clone(), if i == 0 { None } else { Some(symbols[i - 1].as_str()) }));
                    let text = format_linear(terms);
                    out.push_str(&format!("row {}\n", if text.is_empty() { "0".into() } else { text }));
                }
            }
        }
        if self.lattice {
            out.push_str("lattice check\n");
        }
        out
    }
}

fn format_linear<'a>(terms: impl Iterator<Item = (Q, Option<&'a str>)>) -> String {
    let mut out = String::new();
    for (c, name) in terms {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let abs = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        match name {
            Some(n) if abs.is_one() => out.push_str(n),
            Some(n) => out.push_str(&format!("{abs}*{n}")),
            None => out.push_str(&abs.to_string()),
        }
    }
    out
}

impl fmt::Display for SpecDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_text())
    }
}
