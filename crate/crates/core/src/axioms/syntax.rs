//! Text form of identity sets.
//!
//! ```text
//! set "bihom-associative"
//! sort A algebra
//! map alpha : A -> A
//! prod mul : A * A -> A
//! act l : A on V left
//! param lambda
//! alias star = dl + dr
//! identity aca over A(x, y, z): mul(alpha(x), mul(y, z)) = mul(mul(x, y), beta(z))
//! ```
//!
//! Each side of an identity is a sum of terms `[coeff *] expr`. Arguments may
//! themselves be sums and are expanded distributively, `alpha.beta(x)` means
//! `alpha(beta(x))` and `alpha^2(x)` means `alpha(alpha(x))`. An alias names a
//! linear combination of symbols of the same kind. Everything after `#` on a
//! line is ignored. The printer emits the expanded form with `= 0`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::exact::Scalar;
use crate::ir::{Coeff, Expr, Identity, IdentitySet, IrError, Side, Signature, SortRole, Term, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Word(String),
    Int(String),
    Str(String),
    Sym(char),
    Arrow,
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |line, col, message: String| ParseError { line, col, message };
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() {
                let d = chars[i];
                let dotted = d == '.'
                    && chars
                        .get(i + 1)
                        .is_some_and(|n| n.is_ascii_alphanumeric() || *n == '_');
                if d.is_ascii_alphanumeric() || d == '_' || dotted {
                    i += 1;
                } else {
                    break;
                }
            }
            Tok::Word(chars[start..i].iter().collect())
        } else if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            Tok::Int(chars[start..i].iter().collect())
        } else if c == '"' {
            i += 1;
            while i < chars.len() && chars[i] != '"' && chars[i] != '\n' {
                i += 1;
            }
            if i >= chars.len() || chars[i] != '"' {
                return Err(err(tl, tc, "unterminated string".into()));
            }
            i += 1;
            Tok::Str(chars[start + 1..i - 1].iter().collect())
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            i += 2;
            Tok::Arrow
        } else if "()[],:*+-=^/{};".contains(c) {
            i += 1;
            Tok::Sym(c)
        } else {
            return Err(err(tl, tc, format!("unexpected character `{c}`")));
        };
        col += i - start;
        out.push(Token {
            tok,
            line: tl,
            col: tc,
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

const KEYWORDS: &[&str] = &["set", "sort", "map", "prod", "act", "param", "alias", "identity"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SymKind {
    Map,
    Prod,
    Act,
}

/// A linear combination of expressions, used while expanding sums.
type Lin = Vec<(Coeff, Expr)>;

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    sig: Signature,
    params: Vec<String>,
    aliases: BTreeMap<String, (SymKind, Vec<(Scalar, String)>)>,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, t: &Token, message: impl Into<String>) -> ParseError {
        ParseError {
            line: t.line,
            col: t.col,
            message: message.into(),
        }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        self.error_at(self.peek(), message)
    }

    fn describe(t: &Tok) -> String {
        match t {
            Tok::Word(w) => format!("`{w}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Str(s) => format!("\"{s}\""),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::Arrow => "`->`".into(),
            Tok::Eof => "end of input".into(),
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek().tok == Tok::Sym(c) {
            self.next();
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`, found {}", Self::describe(&self.peek().tok))))
        }
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek().tok == Tok::Sym(c) {
            self.next();
            true
        } else {
            false
        }
    }

    fn word(&mut self, what: &str) -> Result<String, ParseError> {
        match &self.peek().tok {
            Tok::Word(w) => {
                let w = w.clone();
                self.next();
                Ok(w)
            }
            t => Err(self.error(format!("expected {what}, found {}", Self::describe(t)))),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        match &self.peek().tok {
            Tok::Word(w) if w == kw => {
                self.next();
                Ok(())
            }
            t => Err(self.error(format!("expected `{kw}`, found {}", Self::describe(t)))),
        }
    }

    fn new_symbol_name(&mut self) -> Result<String, ParseError> {
        let t = self.peek().clone();
        let name = self.word("a symbol name")?;
        if name.contains('.') {
            return Err(self.error_at(&t, format!("symbol name `{name}` may not contain `.`")));
        }
        if KEYWORDS.contains(&name.as_str()) {
            return Err(self.error_at(&t, format!("`{name}` is a reserved word")));
        }
        if self.sig.has_symbol(&name) || self.params.contains(&name) || self.aliases.contains_key(&name) {
            return Err(self.error_at(&t, format!("`{name}` is already declared")));
        }
        Ok(name)
    }

    fn sort_ref(&mut self) -> Result<String, ParseError> {
        let t = self.peek().clone();
        let s = self.word("a sort name")?;
        if self.sig.sort(&s).is_none() {
            return Err(self.error_at(&t, format!("unknown sort `{s}`")));
        }
        Ok(s)
    }

    fn parse_file(mut self) -> Result<IdentitySet, ParseError> {
        let mut name = None;
        let mut identities: Vec<Identity> = Vec::new();
        loop {
            let t = self.peek().clone();
            let kw = match &t.tok {
                Tok::Eof => break,
                Tok::Word(w) => w.clone(),
                other => {
                    return Err(self.error_at(&t, format!("expected a declaration, found {}", Self::describe(other))))
                }
            };
            self.next();
            match kw.as_str() {
                "set" => {
                    if name.is_some() {
                        return Err(self.error_at(&t, "set name given twice"));
                    }
                    match self.next().tok {
                        Tok::Str(s) => name = Some(s),
                        Tok::Word(w) => name = Some(w),
                        other => {
                            return Err(self.error_at(&t, format!("expected a set name, found {}", Self::describe(&other))))
                        }
                    }
                }
                "sort" => {
                    let n = self.new_symbol_name()?;
                    let rt = self.peek().clone();
                    let role = self.word("a sort role")?;
                    let role = SortRole::from_keyword(&role)
                        .ok_or_else(|| self.error_at(&rt, format!("unknown sort role `{role}`")))?;
                    self.sig.add_sort(&n, role);
                }
                "map" => {
                    let n = self.new_symbol_name()?;
                    self.expect_sym(':')?;
                    let from = self.sort_ref()?;
                    self.expect_arrow()?;
                    let to = self.sort_ref()?;
                    self.sig.add_map(&n, &from, &to);
                }
                "prod" => {
                    let n = self.new_symbol_name()?;
                    self.expect_sym(':')?;
                    let l = self.sort_ref()?;
                    self.expect_sym('*')?;
                    let r = self.sort_ref()?;
                    self.expect_arrow()?;
                    let o = self.sort_ref()?;
                    self.sig.add_prod(&n, &l, &r, &o);
                }
                "act" => {
                    let n = self.new_symbol_name()?;
                    self.expect_sym(':')?;
                    let a = self.sort_ref()?;
                    self.keyword("on")?;
                    let m = self.sort_ref()?;
                    let st = self.peek().clone();
                    let side = match self.word("`left` or `right`")?.as_str() {
                        "left" => Side::Left,
                        "right" => Side::Right,
                        s => return Err(self.error_at(&st, format!("expected `left` or `right`, found `{s}`"))),
                    };
                    self.sig.add_act(&n, &a, &m, side);
                }
                "param" => {
                    let n = self.new_symbol_name()?;
                    self.params.push(n);
                }
                "alias" => self.parse_alias()?,
                "identity" => {
                    let id = self.parse_identity()?;
                    if identities.iter().any(|j| j.name == id.name) {
                        return Err(self.error_at(&t, format!("identity `{}` declared twice", id.name)));
                    }
                    identities.push(id);
                }
                other => return Err(self.error_at(&t, format!("unknown declaration `{other}`"))),
            }
        }
        let set = IdentitySet {
            name: name.unwrap_or_default(),
            signature: self.sig,
            params: self.params,
            identities,
        };
        if set.identities.is_empty() {
            let t = self.toks.last().expect("eof token");
            return Err(ParseError {
                line: t.line,
                col: t.col,
                message: "identity set contains no identities".into(),
            });
        }
        Ok(set)
    }

    fn expect_arrow(&mut self) -> Result<(), ParseError> {
        if self.peek().tok == Tok::Arrow {
            self.next();
            Ok(())
        } else {
            Err(self.error(format!("expected `->`, found {}", Self::describe(&self.peek().tok))))
        }
    }

    fn kind_of(&self, name: &str) -> Option<SymKind> {
        if self.sig.map(name).is_some() {
            Some(SymKind::Map)
        } else if self.sig.prod(name).is_some() {
            Some(SymKind::Prod)
        } else if self.sig.act(name).is_some() {
            Some(SymKind::Act)
        } else {
            self.aliases.get(name).map(|(k, _)| *k)
        }
    }

    fn parse_alias(&mut self) -> Result<(), ParseError> {
        let n = self.new_symbol_name()?;
        self.expect_sym('=')?;
        let mut parts: Vec<(Scalar, String)> = Vec::new();
        let mut kind = None;
        let mut sign = Scalar::one();
        if self.eat_sym('-') {
            sign = -sign;
        }
        loop {
            let mut c = sign.clone();
            if matches!(self.peek().tok, Tok::Int(_)) {
                c = &c * &self.rational()?;
                self.expect_sym('*')?;
            }
            let t = self.peek().clone();
            let s = self.word("a symbol")?;
            let k = self
                .kind_of(&s)
                .ok_or_else(|| self.error_at(&t, format!("unknown symbol `{s}`")))?;
            if kind.is_some_and(|kk| kk != k) {
                return Err(self.error_at(&t, "alias mixes symbols of different kinds"));
            }
            kind = Some(k);
            match self.aliases.get(&s) {
                Some((_, inner)) => {
                    for (ic, is) in inner.clone() {
                        parts.push((&c * &ic, is));
                    }
                }
                None => parts.push((c, s)),
            }
            if self.eat_sym('+') {
                sign = Scalar::one();
            } else if self.eat_sym('-') {
                sign = -Scalar::one();
            } else {
                break;
            }
        }
        self.aliases.insert(n, (kind.expect("at least one symbol"), parts));
        Ok(())
    }

    fn rational(&mut self) -> Result<Scalar, ParseError> {
        let t = self.next();
        let Tok::Int(n) = &t.tok else {
            return Err(self.error_at(&t, "expected a number"));
        };
        let mut text = n.clone();
        if self.peek().tok == Tok::Sym('/') {
            self.next();
            let d = self.next();
            match &d.tok {
                Tok::Int(d) => {
                    text.push('/');
                    text.push_str(d);
                }
                _ => return Err(self.error_at(&d, "expected a denominator")),
            }
        }
        text.parse::<Scalar>()
            .map_err(|e| self.error_at(&t, e.to_string()))
    }

    fn parse_identity(&mut self) -> Result<Identity, ParseError> {
        let name = self.word("an identity name")?;
        self.keyword("over")?;
        let mut vars: Vec<(String, Var)> = Vec::new();
        let mut counts: BTreeMap<String, usize> = BTreeMap::new();
        loop {
            let sort = self.sort_ref()?;
            self.expect_sym('(')?;
            loop {
                let t = self.peek().clone();
                let v = self.new_symbol_name()?;
                if vars.iter().any(|(n, _)| *n == v) {
                    return Err(self.error_at(&t, format!("variable `{v}` declared twice")));
                }
                let c = counts.entry(sort.clone()).or_default();
                vars.push((
                    v,
                    Var {
                        sort: sort.clone(),
                        index: *c,
                    },
                ));
                *c += 1;
                if !self.eat_sym(',') {
                    break;
                }
            }
            self.expect_sym(')')?;
            if !self.eat_sym(',') {
                break;
            }
        }
        self.expect_sym(':')?;
        let body_tok = self.peek().clone();
        let lhs = self.parse_sum(&vars)?;
        self.expect_sym('=')?;
        let rhs = if matches!(&self.peek().tok, Tok::Int(n) if n == "0")
            && !matches!(self.peek_at(1), Tok::Sym('*') | Tok::Sym('/'))
        {
            self.next();
            Vec::new()
        } else {
            self.parse_sum(&vars)?
        };
        let mut terms: Vec<Term> = lhs
            .into_iter()
            .map(|(coeff, expr)| Term { coeff, expr })
            .collect();
        for (c, e) in rhs {
            terms.push(Term {
                coeff: Coeff {
                    value: -c.value,
                    param: c.param,
                },
                expr: e,
            });
        }
        let id = Identity { name, vars, terms };
        id.wellform(&self.sig, &self.params)
            .map_err(|e| self.error_at(&body_tok, describe_ir(&e)))?;
        Ok(id)
    }

    fn parse_sum(&mut self, vars: &[(String, Var)]) -> Result<Lin, ParseError> {
        let mut out = Lin::new();
        let mut negate = self.eat_sym('-');
        loop {
            let mut part = self.parse_term(vars)?;
            if negate {
                for (c, _) in &mut part {
                    c.value = -c.value.clone();
                }
            }
            out.extend(part);
            if self.eat_sym('+') {
                negate = false;
            } else if self.eat_sym('-') {
                negate = true;
            } else {
                return Ok(out);
            }
        }
    }

    fn parse_term(&mut self, vars: &[(String, Var)]) -> Result<Lin, ParseError> {
        let mut coeff = Coeff::one();
        loop {
            let t = self.peek().clone();
            let is_coeff = match &t.tok {
                Tok::Int(_) => true,
                Tok::Word(w) => self.params.contains(w),
                _ => false,
            };
            if !is_coeff {
                break;
            }
            match &t.tok {
                Tok::Int(_) => coeff.value = &coeff.value * &self.rational()?,
                Tok::Word(w) => {
                    if coeff.param.is_some() {
                        return Err(self.error_at(&t, "a term may carry at most one parameter"));
                    }
                    coeff.param = Some(w.clone());
                    self.next();
                }
                _ => unreachable!(),
            }
            self.expect_sym('*')?;
        }
        let atom = self.parse_atom(vars)?;
        scale_lin(&coeff, atom).map_err(|m| self.error(m))
    }

    fn parse_atom(&mut self, vars: &[(String, Var)]) -> Result<Lin, ParseError> {
        let t = self.peek().clone();
        if self.eat_sym('(') {
            let inner = self.parse_sum(vars)?;
            self.expect_sym(')')?;
            return Ok(inner);
        }
        let w = self.word("an expression")?;
        if self.peek().tok != Tok::Sym('(') && self.peek().tok != Tok::Sym('^') {
            return match vars.iter().find(|(n, _)| *n == w) {
                Some((_, v)) => Ok(vec![(Coeff::one(), Expr::Var(v.clone()))]),
                None if self.kind_of(&w).is_some() => {
                    Err(self.error_at(&t, format!("symbol `{w}` must be applied to arguments")))
                }
                None => Err(self.error_at(&t, format!("unknown variable `{w}`"))),
            };
        }
        let mut power = 1u32;
        if self.eat_sym('^') {
            let pt = self.next();
            match &pt.tok {
                Tok::Int(n) => {
                    power = n
                        .parse()
                        .map_err(|_| self.error_at(&pt, "exponent too large"))?;
                }
                _ => return Err(self.error_at(&pt, "expected an exponent")),
            }
        }
        self.expect_sym('(')?;
        let mut args = vec![self.parse_sum(vars)?];
        while self.eat_sym(',') {
            args.push(self.parse_sum(vars)?);
        }
        self.expect_sym(')')?;

        let segments: Vec<&str> = w.split('.').collect();
        if segments.len() > 1 || power != 1 {
            if args.len() != 1 {
                return Err(self.error_at(&t, "a map word takes exactly one argument"));
            }
            let mut word = Vec::new();
            for _ in 0..power {
                word.extend(segments.iter().copied());
            }
            let mut acc = args.pop().expect("one argument");
            for seg in word.iter().rev() {
                if self.kind_of(seg) != Some(SymKind::Map) {
                    return Err(self.error_at(&t, format!("`{seg}` is not a map")));
                }
                acc = self.apply_symbol(seg, vec![acc]);
            }
            return Ok(acc);
        }
        let kind = self
            .kind_of(&w)
            .ok_or_else(|| self.error_at(&t, format!("unknown symbol `{w}`")))?;
        let arity = if kind == SymKind::Map { 1 } else { 2 };
        if args.len() != arity {
            return Err(self.error_at(
                &t,
                format!("`{w}` takes {arity} argument(s), found {}", args.len()),
            ));
        }
        Ok(self.apply_symbol(&w, args))
    }

    /// Applies a symbol or alias to already-expanded arguments, distributing over sums.
    fn apply_symbol(&self, name: &str, args: Vec<Lin>) -> Lin {
        let parts: Vec<(Scalar, String)> = match self.aliases.get(name) {
            Some((_, p)) => p.clone(),
            None => vec![(Scalar::one(), name.to_string())],
        };
        let kind = self.kind_of(name).expect("symbol kind known");
        let mut out = Lin::new();
        for (c, sym) in &parts {
            match args.as_slice() {
                [a] => {
                    for (ca, ea) in a {
                        out.push((scale_coeff(c, ca), Expr::map(sym, ea.clone())));
                    }
                }
                [a, b] => {
                    for (ca, ea) in a {
                        for (cb, eb) in b {
                            let coeff = mul_coeff(&scale_coeff(c, ca), cb)
                                .expect("parameter products rejected earlier");
                            let e = match kind {
                                SymKind::Prod => Expr::prod(sym, ea.clone(), eb.clone()),
                                _ => Expr::act(sym, ea.clone(), eb.clone()),
                            };
                            out.push((coeff, e));
                        }
                    }
                }
                _ => unreachable!("arity checked"),
            }
        }
        out
    }
}

fn scale_coeff(c: &Scalar, k: &Coeff) -> Coeff {
    Coeff {
        value: c * &k.value,
        param: k.param.clone(),
    }
}

fn mul_coeff(a: &Coeff, b: &Coeff) -> Option<Coeff> {
    let param = match (&a.param, &b.param) {
        (Some(_), Some(_)) => return None,
        (Some(p), None) | (None, Some(p)) => Some(p.clone()),
        (None, None) => None,
    };
    Some(Coeff {
        value: &a.value * &b.value,
        param,
    })
}

fn scale_lin(c: &Coeff, lin: Lin) -> Result<Lin, String> {
    lin.into_iter()
        .map(|(k, e)| {
            mul_coeff(c, &k)
                .map(|k| (k, e))
                .ok_or_else(|| "a term may carry at most one parameter".to_string())
        })
        .collect()
}

fn describe_ir(e: &IrError) -> String {
    match e {
        IrError::InIdentity { source, .. } => source.to_string(),
        other => other.to_string(),
    }
}

/// Parses an identity set; every identity is checked for well-formedness.
pub fn parse_identity_set(src: &str) -> Result<IdentitySet, ParseError> {
    let toks = lex(src)?;
    let parser = Parser {
        toks,
        pos: 0,
        sig: Signature::default(),
        params: Vec::new(),
        aliases: BTreeMap::new(),
    };
    parser.parse_file()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrintError {
    #[error(transparent)]
    Invalid(#[from] IrError),
}

/// Prints the canonical text form. Rejects sets that are not well formed.
pub fn print_identity_set(set: &IdentitySet) -> Result<String, PrintError> {
    set.wellform()?;
    let mut s = String::new();
    let _ = writeln!(s, "set \"{}\"", set.name);
    for d in &set.signature.sorts {
        let _ = writeln!(s, "sort {} {}", d.name, d.role.keyword());
    }
    for m in &set.signature.maps {
        let _ = writeln!(s, "map {} : {} -> {}", m.name, m.from, m.to);
    }
    for p in &set.signature.prods {
        let _ = writeln!(s, "prod {} : {} * {} -> {}", p.name, p.left, p.right, p.out);
    }
    for a in &set.signature.acts {
        let side = match a.side {
            Side::Left => "left",
            Side::Right => "right",
        };
        let _ = writeln!(s, "act {} : {} on {} {}", a.name, a.algebra, a.module, side);
    }
    for p in &set.params {
        let _ = writeln!(s, "param {p}");
    }
    for id in &set.identities {
        s.push_str(&print_identity(id));
        s.push('\n');
    }
    Ok(s)
}

/// One identity in canonical `... = 0` form.
pub fn print_identity(id: &Identity) -> String {
    let mut s = format!("identity {} over ", id.name);
    let mut groups: Vec<(String, Vec<String>)> = Vec::new();
    for (n, v) in &id.vars {
        match groups.last_mut() {
            Some((sort, names)) if *sort == v.sort => names.push(n.clone()),
            _ => groups.push((v.sort.clone(), vec![n.clone()])),
        }
    }
    let groups: Vec<String> = groups
        .iter()
        .map(|(sort, names)| format!("{sort}({})", names.join(", ")))
        .collect();
    s.push_str(&groups.join(", "));
    s.push_str(": ");
    for (i, t) in id.terms.iter().enumerate() {
        let neg = t.coeff.value.is_negative();
        let mag = t.coeff.value.abs();
        if i == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if !mag.is_one() {
            let _ = write!(s, "{mag} * ");
        }
        if let Some(p) = &t.coeff.param {
            let _ = write!(s, "{p} * ");
        }
        print_expr(&t.expr, id, &mut s);
    }
    s.push_str(" = 0");
    s
}

pub fn print_expr(e: &Expr, id: &Identity, s: &mut String) {
    match e {
        Expr::Var(v) => match id.var_name(v) {
            Some(n) => s.push_str(n),
            None => {
                let _ = write!(s, "{}{}", v.sort, v.index);
            }
        },
        Expr::Map(n, a) => {
            let _ = write!(s, "{n}(");
            print_expr(a, id, s);
            s.push(')');
        }
        Expr::Prod(n, a, b) | Expr::Act(n, a, b) => {
            let _ = write!(s, "{n}(");
            print_expr(a, id, s);
            s.push_str(", ");
            print_expr(b, id, s);
            s.push(')');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "set \"t\"\nsort A algebra\nmap alpha : A -> A\nmap beta : A -> A\nprod mul : A * A -> A\n";

    fn parse(body: &str) -> Result<IdentitySet, ParseError> {
        parse_identity_set(&format!("{HEADER}{body}"))
    }

    #[test]
    fn parses_associativity() {
        let set = parse("identity aca over A(x, y, z): mul(alpha(x), mul(y, z)) = mul(mul(x, y), beta(z))").unwrap();
        let id = &set.identities[0];
        assert_eq!(id.terms.len(), 2);
        assert_eq!(id.terms[1].coeff.value, Scalar::from(-1));
    }

    #[test]
    fn map_words_expand() {
        let set = parse("identity c over A(x): alpha.beta(x) - beta^2(x) = 0").unwrap();
        let id = &set.identities[0];
        assert_eq!(
            id.terms[0].expr,
            Expr::map("alpha", Expr::map("beta", Expr::var("A", 0)))
        );
        assert_eq!(
            id.terms[1].expr,
            Expr::map("beta", Expr::map("beta", Expr::var("A", 0)))
        );
    }

    #[test]
    fn argument_sums_and_aliases_expand() {
        let src = format!("{HEADER}prod dl : A * A -> A\nalias star = mul + dl\nidentity s over A(x, y, z): mul(x, star(y, z)) = mul(x, mul(y, z) + 2 * dl(y, z))");
        let set = parse_identity_set(&src).unwrap();
        assert_eq!(set.identities[0].terms.len(), 4);
        let printed = print_identity_set(&set).unwrap();
        assert!(printed.contains("- 2 * mul(x, dl(y, z))"), "{printed}");
    }

    #[test]
    fn params_in_coefficients() {
        let src = format!("{HEADER}param lambda\nidentity p over A(x, y): mul(x, y) - 1/2 * lambda * mul(y, x) = 0");
        let set = parse_identity_set(&src).unwrap();
        let t = &set.identities[0].terms[1];
        assert_eq!(t.coeff.param.as_deref(), Some("lambda"));
        assert_eq!(t.coeff.value, Scalar::ratio(-1, 2));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("identity bad over A(x, y): mul(x, y) = mul(x, x)").unwrap_err();
        assert_eq!(e.line, 6);
        let e = parse("identity bad over A(x): gamma(x) = 0").unwrap_err();
        assert_eq!((e.line, e.col), (6, 25));
        assert!(e.message.contains("gamma"));
        let e = parse("identity bad over A(x): mul(x) = 0").unwrap_err();
        assert!(e.message.contains("takes 2"));
        let e = parse_identity_set("sort A algebra\nprod m : A * B -> A").unwrap_err();
        assert_eq!(e.line, 2);
    }

    #[test]
    fn empty_set_rejected() {
        assert!(parse("").is_err());
    }

    #[test]
    fn round_trip_is_fixed_point() {
        let set = parse("identity aca over A(x, y, z): mul(alpha(x), mul(y, z)) = mul(mul(x, y), beta(z))\nidentity c over A(x): -2 * alpha(x) + beta(x) = 0").unwrap();
        let printed = print_identity_set(&set).unwrap();
        let again = parse_identity_set(&printed).unwrap();
        assert_eq!(again, set);
        assert_eq!(print_identity_set(&again).unwrap(), printed);
    }
}
