//! The model-file format shared by every presentation kind.
//!
//! ```text
//! # dual numbers
//! algebra N2 {
//!   dim 2;
//!   variety bihom-associative;
//!   map alpha = [[1, 0], [0, 1]];
//!   map beta = [[1, 0], [0, 1]];
//!   prod mul { (1,1) -> e1; (1,2) -> e2; (2,1) -> e2; }
//! }
//! bimodule M { base N2; dim 2; act l { e2 -> [[0, 0], [1, 0]]; } act r { } }
//! operator R { base N2; kind rota-baxter; weight 1; map op = [[0, 0], [0, 0]]; }
//! matched P { a N2; b N2; act l_A { } act r_A { } act l_B { } act r_B { } }
//! ```
//!
//! Matrices are written as lists of rows; column `j` holds the image of
//! `e_j`. Omitted twisting and module maps are the identity; omitted product
//! entries and action matrices are zero. Names may be bare identifiers or
//! double-quoted strings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::exact::{Matrix, Scalar, Tensor3, MAX_DIM};
use crate::structures::{
    AlgebraPresentation, BimodulePresentation, MatchedPairPresentation, OperatorKind, OperatorPresentation,
    PresentationError, Variety,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ModelError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

/// An operator as written in a file; the base algebra may be supplied later.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorDecl {
    pub name: String,
    pub base: Option<String>,
    pub kind: Option<OperatorKind>,
    pub op: Matrix,
}

impl OperatorDecl {
    /// Binds to `base`; a missing kind defaults to an endomorphism.
    pub fn bind(&self, base: &AlgebraPresentation) -> Result<OperatorPresentation, PresentationError> {
        OperatorPresentation::new(
            &self.name,
            base.clone(),
            self.op.clone(),
            self.kind.clone().unwrap_or(OperatorKind::Endomorphism),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    Algebra(AlgebraPresentation),
    Bimodule(BimodulePresentation),
    Operator(OperatorDecl),
    Matched(MatchedPairPresentation),
}

impl Item {
    pub fn name(&self) -> &str {
        match self {
            Item::Algebra(a) => &a.name,
            Item::Bimodule(m) => &m.name,
            Item::Operator(o) => &o.name,
            Item::Matched(p) => &p.name,
        }
    }

    pub fn keyword(&self) -> &'static str {
        match self {
            Item::Algebra(_) => "algebra",
            Item::Bimodule(_) => "bimodule",
            Item::Operator(_) => "operator",
            Item::Matched(_) => "matched",
        }
    }
}

/// The parsed contents of one or more model files, in declaration order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ModelFile {
    pub items: Vec<Item>,
}

impl ModelFile {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn parse(text: &str) -> Result<Self, ModelError> {
        let mut m = ModelFile::new();
        m.parse_into(text)?;
        Ok(m)
    }

    /// Parses `text` adding its items; names may refer to earlier items.
    pub fn parse_into(&mut self, text: &str) -> Result<(), ModelError> {
        let toks = lex(text)?;
        let mut p = Parser { toks, pos: 0, file: self };
        p.file_items()
    }

    pub fn get(&self, name: &str) -> Option<&Item> {
        self.items.iter().rev().find(|i| i.name() == name)
    }

    pub fn algebra(&self, name: &str) -> Option<&AlgebraPresentation> {
        self.items.iter().rev().find_map(|i| match i {
            Item::Algebra(a) if a.name == name => Some(a),
            _ => None,
        })
    }

    /// Last item of the given keyword, or the named one.
    pub fn pick(&self, keyword: &str, name: Option<&str>) -> Option<&Item> {
        self.items
            .iter()
            .rev()
            .find(|i| i.keyword() == keyword && name.is_none_or(|n| i.name() == n))
    }

    /// Adds an item together with any algebras it depends on that are not
    /// yet present.
    pub fn push(&mut self, item: Item) {
        let deps: Vec<AlgebraPresentation> = match &item {
            Item::Bimodule(m) => vec![m.base.clone()],
            Item::Matched(p) => vec![p.a.clone(), p.b.clone()],
            _ => vec![],
        };
        for d in deps {
            if self.algebra(&d.name) != Some(&d) {
                self.push(Item::Algebra(d));
            }
        }
        self.items.push(item);
    }

    pub fn last_algebra(&self) -> Option<&AlgebraPresentation> {
        match self.pick("algebra", None) {
            Some(Item::Algebra(a)) => Some(a),
            _ => None,
        }
    }

    pub fn single(item: Item) -> Self {
        let mut m = ModelFile::new();
        m.push(item);
        m
    }
}

/// Parses a standalone `n`x`n` matrix literal such as `[[1, 0], [0, 1/2]]`.
pub fn parse_matrix(text: &str, n: usize) -> Result<Matrix, ModelError> {
    let toks = lex(text)?;
    let mut scratch = ModelFile::new();
    let mut p = Parser {
        toks,
        pos: 0,
        file: &mut scratch,
    };
    let m = p.square_matrix("matrix", n)?;
    if *p.peek() != Tok::Eof {
        return Err(p.err("trailing input after matrix"));
    }
    Ok(m)
}

// ---------------------------------------------------------------- lexer

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Str(String),
    Int(String),
    Arrow,
    Punct(char),
    Eof,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ModelError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |line, col, message: String| ModelError { line, col, message };
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let mut adv = |i: &mut usize, n: usize| {
            for _ in 0..n {
                if chars[*i] == '\n' {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
                *i += 1;
            }
        };
        if c.is_whitespace() {
            adv(&mut i, 1);
        } else if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                adv(&mut i, 1);
            }
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || matches!(chars[i], '_' | '-' | '.' | '\'')) {
                // a trailing '-' followed by '>' belongs to an arrow
                if chars[i] == '-' && chars.get(i + 1) == Some(&'>') {
                    break;
                }
                adv(&mut i, 1);
            }
            out.push(Spanned {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                line: l0,
                col: c0,
            });
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                adv(&mut i, 1);
            }
            out.push(Spanned {
                tok: Tok::Int(chars[start..i].iter().collect()),
                line: l0,
                col: c0,
            });
        } else if c == '"' {
            adv(&mut i, 1);
            let start = i;
            while i < chars.len() && chars[i] != '"' && chars[i] != '\n' {
                adv(&mut i, 1);
            }
            if i >= chars.len() || chars[i] != '"' {
                return Err(err(l0, c0, "unterminated string".into()));
            }
            let s: String = chars[start..i].iter().collect();
            adv(&mut i, 1);
            out.push(Spanned {
                tok: Tok::Str(s),
                line: l0,
                col: c0,
            });
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            adv(&mut i, 2);
            out.push(Spanned {
                tok: Tok::Arrow,
                line: l0,
                col: c0,
            });
        } else if "{}[](),;=+-/".contains(c) {
            adv(&mut i, 1);
            out.push(Spanned {
                tok: Tok::Punct(c),
                line: l0,
                col: c0,
            });
        } else {
            return Err(err(l0, c0, format!("unexpected character `{c}`")));
        }
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

// --------------------------------------------------------------- parser

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    file: &'a mut ModelFile,
}

type PResult<T> = Result<T, ModelError>;

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn err_at(&self, pos: usize, message: impl Into<String>) -> ModelError {
        let t = &self.toks[pos.min(self.toks.len() - 1)];
        ModelError {
            line: t.line,
            col: t.col,
            message: message.into(),
        }
    }

    fn err(&self, message: impl Into<String>) -> ModelError {
        self.err_at(self.pos, message)
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if t != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn describe(t: &Tok) -> String {
        match t {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Str(s) => format!("\"{s}\""),
            Tok::Int(s) => format!("`{s}`"),
            Tok::Arrow => "`->`".into(),
            Tok::Punct(c) => format!("`{c}`"),
            Tok::Eof => "end of input".into(),
        }
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        if *self.peek() == Tok::Punct(c) {
            self.next();
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`, found {}", Self::describe(self.peek()))))
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Punct(c) {
            self.next();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.next() {
            Tok::Ident(s) => Ok(s),
            t => {
                self.pos -= 1;
                Err(self.err(format!("expected a name, found {}", Self::describe(&t))))
            }
        }
    }

    fn name(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Str(s) => {
                self.next();
                Ok(s)
            }
            _ => self.ident(),
        }
    }

    fn usize_lit(&mut self) -> PResult<usize> {
        match self.next() {
            Tok::Int(s) => s.parse().map_err(|_| self.err_at(self.pos - 1, "integer out of range")),
            t => {
                self.pos -= 1;
                Err(self.err(format!("expected an integer, found {}", Self::describe(&t))))
            }
        }
    }

    fn dim(&mut self) -> PResult<usize> {
        let at = self.pos;
        let d = self.usize_lit()?;
        if d > MAX_DIM {
            return Err(self.err_at(at, format!("dimension {d} exceeds the cap of {MAX_DIM}")));
        }
        Ok(d)
    }

    fn scalar(&mut self) -> PResult<Scalar> {
        let neg = self.eat('-');
        let at = self.pos;
        let num = self.usize_lit_str()?;
        let mut text = if neg { format!("-{num}") } else { num };
        if self.eat('/') {
            let den = self.usize_lit_str()?;
            text = format!("{text}/{den}");
        }
        text.parse().map_err(|_| self.err_at(at, format!("invalid rational `{text}`")))
    }

    fn usize_lit_str(&mut self) -> PResult<String> {
        match self.next() {
            Tok::Int(s) => Ok(s),
            t => {
                self.pos -= 1;
                Err(self.err(format!("expected a number, found {}", Self::describe(&t))))
            }
        }
    }

    fn matrix(&mut self) -> PResult<(usize, Vec<Vec<Scalar>>)> {
        let at = self.pos;
        self.expect('[')?;
        let mut rows = Vec::new();
        if !self.eat(']') {
            loop {
                self.expect('[')?;
                let mut row = Vec::new();
                if !self.eat(']') {
                    loop {
                        row.push(self.scalar()?);
                        if self.eat(']') {
                            break;
                        }
                        self.expect(',')?;
                    }
                }
                rows.push(row);
                if self.eat(']') {
                    break;
                }
                self.expect(',')?;
            }
        }
        Ok((at, rows))
    }

    fn square_matrix(&mut self, what: &str, n: usize) -> PResult<Matrix> {
        let (at, rows) = self.matrix()?;
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            let found = rows.iter().map(|r| r.len().to_string()).collect::<Vec<_>>().join(",");
            return Err(self.err_at(
                at,
                format!("{what} must be {n}x{n}; found {} rows with lengths [{found}]", rows.len()),
            ));
        }
        Ok(Matrix::from_rows(rows).expect("checked shape"))
    }

    fn basis(&mut self, n: usize) -> PResult<usize> {
        let at = self.pos;
        let s = self.ident()?;
        let idx = s
            .strip_prefix('e')
            .map(|r| r.strip_prefix('_').unwrap_or(r))
            .and_then(|r| r.parse::<usize>().ok())
            .ok_or_else(|| self.err_at(at, format!("expected a basis element like e1, found `{s}`")))?;
        if idx == 0 || idx > n {
            return Err(self.err_at(at, format!("basis element e{idx} out of range 1..{n}")));
        }
        Ok(idx - 1)
    }

    fn require_dim(&self, dim: Option<usize>, at: usize) -> PResult<usize> {
        dim.ok_or_else(|| self.err_at(at, "`dim` must come before maps, products and actions"))
    }

    fn file_items(&mut self) -> PResult<()> {
        loop {
            let at = self.pos;
            match self.next() {
                Tok::Eof => return Ok(()),
                Tok::Ident(kw) => {
                    let item = match kw.as_str() {
                        "algebra" => Item::Algebra(self.algebra_block()?),
                        "bimodule" => Item::Bimodule(self.bimodule_block()?),
                        "operator" => Item::Operator(self.operator_block()?),
                        "matched" => Item::Matched(self.matched_block()?),
                        _ => {
                            return Err(self.err_at(
                                at,
                                format!("expected `algebra`, `bimodule`, `operator` or `matched`, found `{kw}`"),
                            ))
                        }
                    };
                    self.file.items.push(item);
                }
                t => return Err(self.err_at(at, format!("expected a block keyword, found {}", Self::describe(&t)))),
            }
        }
    }

    fn end_field(&mut self) -> PResult<()> {
        self.expect(';')
    }

    fn lookup_algebra(&self, at: usize, name: &str) -> PResult<AlgebraPresentation> {
        self.file
            .algebra(name)
            .cloned()
            .ok_or_else(|| self.err_at(at, format!("unknown algebra `{name}`")))
    }

    fn algebra_block(&mut self) -> PResult<AlgebraPresentation> {
        let name = self.name()?;
        let start = self.pos;
        self.expect('{')?;
        let (mut dim, mut variety) = (None, None);
        let (mut alpha, mut beta) = (None, None);
        let mut prods: BTreeMap<String, (usize, Tensor3)> = BTreeMap::new();
        while !self.eat('}') {
            let at = self.pos;
            match self.ident()?.as_str() {
                "dim" => {
                    dim = Some(self.dim()?);
                    self.end_field()?;
                }
                "variety" => {
                    let vat = self.pos;
                    let tag = self.ident()?;
                    variety = Some(tag.parse::<Variety>().map_err(|e| self.err_at(vat, e.to_string()))?);
                    self.end_field()?;
                }
                "map" => {
                    let n = self.require_dim(dim, at)?;
                    let mat = self.ident()?;
                    self.expect('=')?;
                    let m = self.square_matrix(&format!("map {mat}"), n)?;
                    match mat.as_str() {
                        "alpha" => alpha = Some(m),
                        "beta" => beta = Some(m),
                        _ => return Err(self.err_at(at, format!("unknown map `{mat}`; expected alpha or beta"))),
                    }
                    self.end_field()?;
                }
                "prod" => {
                    let n = self.require_dim(dim, at)?;
                    let p = self.ident()?;
                    let t = self.prod_body(n)?;
                    prods.insert(p, (at, t));
                    self.eat(';');
                }
                f => return Err(self.err_at(at, format!("unknown algebra field `{f}`"))),
            }
        }
        let dim = self.require_dim(dim, start)?;
        let variety = variety.ok_or_else(|| self.err_at(start, format!("algebra `{name}` has no variety")))?;
        let mut products = Vec::new();
        for p in variety.products() {
            products.push((p.to_string(), prods.remove(*p).map(|x| x.1).unwrap_or_else(|| Tensor3::square(dim))));
        }
        if let Some((p, (at, _))) = prods.into_iter().next() {
            return Err(self.err_at(at, format!("variety {variety} has no product `{p}`")));
        }
        AlgebraPresentation::new(
            &name,
            variety,
            alpha.unwrap_or_else(|| Matrix::identity(dim)),
            beta.unwrap_or_else(|| Matrix::identity(dim)),
            products,
        )
        .map_err(|e| self.err_at(start, e.to_string()))
    }

    fn prod_body(&mut self, n: usize) -> PResult<Tensor3> {
        self.expect('{')?;
        let mut t = Tensor3::square(n);
        while !self.eat('}') {
            self.expect('(')?;
            let i = self.index(n)?;
            self.expect(',')?;
            let j = self.index(n)?;
            self.expect(')')?;
            if self.next() != Tok::Arrow {
                self.pos -= 1;
                return Err(self.err("expected `->`"));
            }
            let mut v = vec![Scalar::zero(); n];
            let mut first = true;
            loop {
                let neg = if self.eat('-') {
                    true
                } else if !first && self.eat('+') {
                    false
                } else if first {
                    false
                } else {
                    break;
                };
                first = false;
                let c = match self.peek() {
                    Tok::Int(_) => {
                        let c = self.scalar()?;
                        if let Tok::Ident(_) = self.peek() {
                            Some(c)
                        } else if c.is_zero() {
                            // bare `0`
                            None
                        } else {
                            return Err(self.err("expected a basis element after the coefficient"));
                        }
                    }
                    _ => Some(Scalar::one()),
                };
                if let Some(c) = c {
                    let k = self.basis(n)?;
                    let c = if neg { -c } else { c };
                    v[k] = &v[k] + &c;
                }
            }
            t.set_image(i, j, &v);
            self.end_field()?;
        }
        Ok(t)
    }

    fn index(&mut self, n: usize) -> PResult<usize> {
        let at = self.pos;
        let i = self.usize_lit()?;
        if i == 0 || i > n {
            return Err(self.err_at(at, format!("index {i} out of range 1..{n}")));
        }
        Ok(i - 1)
    }

    fn act_body(&mut self, base_dim: usize, dim: usize, what: &str) -> PResult<Vec<Matrix>> {
        self.expect('{')?;
        let mut fam = vec![Matrix::zeros(dim, dim); base_dim];
        while !self.eat('}') {
            let i = self.basis(base_dim)?;
            if self.next() != Tok::Arrow {
                self.pos -= 1;
                return Err(self.err("expected `->`"));
            }
            fam[i] = self.square_matrix(&format!("{what}(e{})", i + 1), dim)?;
            self.end_field()?;
        }
        Ok(fam)
    }

    fn bimodule_block(&mut self) -> PResult<BimodulePresentation> {
        let name = self.name()?;
        let start = self.pos;
        self.expect('{')?;
        let (mut base, mut dim) = (None, None);
        let (mut beta1, mut beta2) = (None, None);
        let mut acts: BTreeMap<String, (usize, Vec<Matrix>)> = BTreeMap::new();
        while !self.eat('}') {
            let at = self.pos;
            match self.ident()?.as_str() {
                "base" => {
                    let bat = self.pos;
                    let b = self.name()?;
                    base = Some(self.lookup_algebra(bat, &b)?);
                    self.end_field()?;
                }
                "dim" => {
                    dim = Some(self.dim()?);
                    self.end_field()?;
                }
                "map" => {
                    let n = self.require_dim(dim, at)?;
                    let mat = self.ident()?;
                    self.expect('=')?;
                    let m = self.square_matrix(&format!("map {mat}"), n)?;
                    match mat.as_str() {
                        "beta1" => beta1 = Some(m),
                        "beta2" => beta2 = Some(m),
                        _ => return Err(self.err_at(at, format!("unknown map `{mat}`; expected beta1 or beta2"))),
                    }
                    self.end_field()?;
                }
                "act" => {
                    let n = self.require_dim(dim, at)?;
                    let b: &AlgebraPresentation =
                        base.as_ref().ok_or_else(|| self.err_at(at, "`base` must come before actions"))?;
                    let bd = b.dim;
                    let a = self.ident()?;
                    let fam = self.act_body(bd, n, &a)?;
                    acts.insert(a, (at, fam));
                    self.eat(';');
                }
                f => return Err(self.err_at(at, format!("unknown bimodule field `{f}`"))),
            }
        }
        let base = base.ok_or_else(|| self.err_at(start, format!("bimodule `{name}` has no base")))?;
        let dim = self.require_dim(dim, start)?;
        let actions = take_actions(self, &base.variety.action_names(), &mut acts, base.dim, dim)?;
        BimodulePresentation::new(
            &name,
            base,
            beta1.unwrap_or_else(|| Matrix::identity(dim)),
            beta2.unwrap_or_else(|| Matrix::identity(dim)),
            actions,
        )
        .map_err(|e| self.err_at(start, e.to_string()))
    }

    fn operator_block(&mut self) -> PResult<OperatorDecl> {
        let name = self.name()?;
        let start = self.pos;
        self.expect('{')?;
        let (mut base, mut dim, mut kind, mut weight, mut op) = (None, None, None, None, None);
        while !self.eat('}') {
            let at = self.pos;
            match self.ident()?.as_str() {
                "base" => {
                    let bat = self.pos;
                    let b = self.name()?;
                    let a = self.lookup_algebra(bat, &b)?;
                    dim = Some(a.dim);
                    base = Some(b);
                    self.end_field()?;
                }
                "dim" => {
                    dim = Some(self.dim()?);
                    self.end_field()?;
                }
                "kind" => {
                    let kat = self.pos;
                    let k = self.ident()?;
                    if !matches!(k.as_str(), "rota-baxter" | "centroid" | "averaging" | "endomorphism") {
                        return Err(self.err_at(kat, format!("unknown operator kind `{k}`")));
                    }
                    kind = Some((kat, k));
                    self.end_field()?;
                }
                "weight" => {
                    weight = Some(self.scalar()?);
                    self.end_field()?;
                }
                "map" => {
                    let n = self.require_dim(dim, at)?;
                    let mat = self.ident()?;
                    if mat != "op" {
                        return Err(self.err_at(at, format!("unknown map `{mat}`; expected op")));
                    }
                    self.expect('=')?;
                    op = Some(self.square_matrix("map op", n)?);
                    self.end_field()?;
                }
                f => return Err(self.err_at(at, format!("unknown operator field `{f}`"))),
            }
        }
        let op = op.ok_or_else(|| self.err_at(start, format!("operator `{name}` has no `map op`")))?;
        let kind = match kind {
            None => None,
            Some((kat, k)) => Some(match k.as_str() {
                "rota-baxter" => OperatorKind::RotaBaxter {
                    weight: weight.ok_or_else(|| self.err_at(kat, "a rota-baxter operator needs a `weight`"))?,
                },
                "centroid" => OperatorKind::Centroid,
                "averaging" => OperatorKind::Averaging,
                _ => OperatorKind::Endomorphism,
            }),
        };
        Ok(OperatorDecl { name, base, kind, op })
    }

    fn matched_block(&mut self) -> PResult<MatchedPairPresentation> {
        let name = self.name()?;
        let start = self.pos;
        self.expect('{')?;
        let (mut a, mut b) = (None, None);
        let mut acts: BTreeMap<String, (usize, Vec<Matrix>)> = BTreeMap::new();
        while !self.eat('}') {
            let at = self.pos;
            match self.ident()?.as_str() {
                f @ ("a" | "b") => {
                    let bat = self.pos;
                    let n = self.name()?;
                    let alg = self.lookup_algebra(bat, &n)?;
                    if f == "a" {
                        a = Some(alg)
                    } else {
                        b = Some(alg)
                    }
                    self.end_field()?;
                }
                "act" => {
                    let (Some(aa), Some(bb)) = (&a, &b) else {
                        return Err(self.err_at(at, "`a` and `b` must come before actions"));
                    };
                    let (ad, bd) = (aa.dim, bb.dim);
                    let nat = self.pos;
                    let n = self.ident()?;
                    let fam = if n.ends_with("_A") {
                        self.act_body(ad, bd, &n)?
                    } else if n.ends_with("_B") {
                        self.act_body(bd, ad, &n)?
                    } else {
                        return Err(self.err_at(nat, format!("action `{n}` must end in _A or _B")));
                    };
                    acts.insert(n, (at, fam));
                    self.eat(';');
                }
                f => return Err(self.err_at(at, format!("unknown matched field `{f}`"))),
            }
        }
        let a = a.ok_or_else(|| self.err_at(start, format!("matched pair `{name}` has no `a`")))?;
        let b = b.ok_or_else(|| self.err_at(start, format!("matched pair `{name}` has no `b`")))?;
        if a.variety != b.variety {
            return Err(self.err_at(start, format!("varieties differ: {} and {}", a.variety, b.variety)));
        }
        let names = a.variety.action_names();
        let suffixed = |s: &str| names.iter().map(|n| format!("{n}{s}")).collect::<Vec<_>>();
        let on_b = take_actions(self, &suffixed("_A"), &mut acts, a.dim, b.dim)?;
        let on_a = take_actions(self, &suffixed("_B"), &mut acts, b.dim, a.dim)?;
        let strip = |v: Vec<(String, Vec<Matrix>)>| {
            v.into_iter().map(|(n, f)| (n[..n.len() - 2].to_string(), f)).collect()
        };
        if let Some((n, (at, _))) = acts.into_iter().next() {
            return Err(self.err_at(at, format!("unknown action `{n}`")));
        }
        MatchedPairPresentation::new(&name, a, b, strip(on_b), strip(on_a)).map_err(|e| self.err_at(start, e.to_string()))
    }
}

fn take_actions(
    p: &Parser<'_>,
    names: &[String],
    acts: &mut BTreeMap<String, (usize, Vec<Matrix>)>,
    base_dim: usize,
    dim: usize,
) -> PResult<Vec<(String, Vec<Matrix>)>> {
    let out = names
        .iter()
        .map(|n| {
            let fam = acts.remove(n).map(|x| x.1).unwrap_or_else(|| vec![Matrix::zeros(dim, dim); base_dim]);
            (n.clone(), fam)
        })
        .collect();
    // leftovers are reported by the caller for matched blocks; bimodules check here
    if names.iter().all(|n| !n.ends_with("_A") && !n.ends_with("_B")) {
        if let Some((n, (at, _))) = acts.iter().next() {
            return Err(p.err_at(*at, format!("unknown action `{n}`")));
        }
    }
    Ok(out)
}

// -------------------------------------------------------------- printer

fn quote(name: &str) -> String {
    let bare = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && name.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.' | '\''))
        && !name.ends_with('-');
    if bare {
        name.to_string()
    } else {
        format!("\"{name}\"")
    }
}

fn print_matrix(m: &Matrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| {
            let r: Vec<String> = m.row(i).iter().map(|s| s.to_string()).collect();
            format!("[{}]", r.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

fn print_vector(v: &[Scalar]) -> String {
    let mut s = String::new();
    for (k, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if !mag.is_one() {
            let _ = write!(s, "{mag} ");
        }
        let _ = write!(s, "e{}", k + 1);
    }
    s
}

fn print_family(out: &mut String, name: &str, fam: &[Matrix]) {
    let _ = write!(out, "  act {name} {{");
    let mut any = false;
    for (i, m) in fam.iter().enumerate() {
        if !m.is_zero() {
            let _ = write!(out, "\n    e{} -> {};", i + 1, print_matrix(m));
            any = true;
        }
    }
    out.push_str(if any { "\n  }\n" } else { " }\n" });
}

pub fn print_algebra(out: &mut String, a: &AlgebraPresentation) {
    let _ = writeln!(out, "algebra {} {{", quote(&a.name));
    let _ = writeln!(out, "  dim {};", a.dim);
    let _ = writeln!(out, "  variety {};", a.variety);
    let _ = writeln!(out, "  map alpha = {};", print_matrix(&a.alpha));
    let _ = writeln!(out, "  map beta = {};", print_matrix(&a.beta));
    for (p, t) in &a.products {
        let _ = write!(out, "  prod {p} {{");
        let mut any = false;
        for i in 0..a.dim {
            for j in 0..a.dim {
                let v = t.image(i, j);
                if v.iter().any(|c| !c.is_zero()) {
                    let _ = write!(out, "\n    ({},{}) -> {};", i + 1, j + 1, print_vector(&v));
                    any = true;
                }
            }
        }
        out.push_str(if any { "\n  }\n" } else { " }\n" });
    }
    out.push_str("}\n");
}

fn print_item(out: &mut String, item: &Item) {
    match item {
        Item::Algebra(a) => print_algebra(out, a),
        Item::Bimodule(m) => {
            let _ = writeln!(out, "bimodule {} {{", quote(&m.name));
            let _ = writeln!(out, "  base {};", quote(&m.base.name));
            let _ = writeln!(out, "  dim {};", m.dim);
            let _ = writeln!(out, "  map beta1 = {};", print_matrix(&m.beta1));
            let _ = writeln!(out, "  map beta2 = {};", print_matrix(&m.beta2));
            for (n, fam) in &m.actions {
                print_family(out, n, fam);
            }
            out.push_str("}\n");
        }
        Item::Operator(o) => {
            let _ = writeln!(out, "operator {} {{", quote(&o.name));
            match &o.base {
                Some(b) => {
                    let _ = writeln!(out, "  base {};", quote(b));
                }
                None => {
                    let _ = writeln!(out, "  dim {};", o.op.rows());
                }
            }
            if let Some(k) = &o.kind {
                let _ = writeln!(out, "  kind {};", k.keyword());
                if let OperatorKind::RotaBaxter { weight } = k {
                    let _ = writeln!(out, "  weight {weight};");
                }
            }
            let _ = writeln!(out, "  map op = {};", print_matrix(&o.op));
            out.push_str("}\n");
        }
        Item::Matched(p) => {
            let _ = writeln!(out, "matched {} {{", quote(&p.name));
            let _ = writeln!(out, "  a {};", quote(&p.a.name));
            let _ = writeln!(out, "  b {};", quote(&p.b.name));
            for (n, fam) in &p.on_b {
                print_family(out, &format!("{n}_A"), fam);
            }
            for (n, fam) in &p.on_a {
                print_family(out, &format!("{n}_B"), fam);
            }
            out.push_str("}\n");
        }
    }
}

/// Canonical text of a model file; parsing it gives back an equal value.
pub fn print_model(m: &ModelFile) -> String {
    let mut out = String::new();
    for (i, item) in m.items.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        print_item(&mut out, item);
    }
    out
}
