//! Typed multilinear identities over a many-sorted signature.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::exact::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SortRole {
    Algebra,
    Module,
    DualModule,
}

impl SortRole {
    pub fn keyword(self) -> &'static str {
        match self {
            SortRole::Algebra => "algebra",
            SortRole::Module => "module",
            SortRole::DualModule => "dual-module",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        match s {
            "algebra" => Some(SortRole::Algebra),
            "module" => Some(SortRole::Module),
            "dual-module" | "dual_module" => Some(SortRole::DualModule),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SortDecl {
    pub name: String,
    pub role: SortRole,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MapSymbol {
    pub name: String,
    pub from: String,
    pub to: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProdSymbol {
    pub name: String,
    pub left: String,
    pub right: String,
    pub out: String,
}

/// `act(a, v)`: an algebra element acting on a module element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ActSymbol {
    pub name: String,
    pub algebra: String,
    pub module: String,
    pub side: Side,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Signature {
    pub sorts: Vec<SortDecl>,
    pub maps: Vec<MapSymbol>,
    pub prods: Vec<ProdSymbol>,
    pub acts: Vec<ActSymbol>,
}

impl Signature {
    pub fn sort(&self, name: &str) -> Option<&SortDecl> {
        self.sorts.iter().find(|s| s.name == name)
    }

    pub fn map(&self, name: &str) -> Option<&MapSymbol> {
        self.maps.iter().find(|s| s.name == name)
    }

    pub fn prod(&self, name: &str) -> Option<&ProdSymbol> {
        self.prods.iter().find(|s| s.name == name)
    }

    pub fn act(&self, name: &str) -> Option<&ActSymbol> {
        self.acts.iter().find(|s| s.name == name)
    }

    pub fn has_symbol(&self, name: &str) -> bool {
        self.sort(name).is_some()
            || self.map(name).is_some()
            || self.prod(name).is_some()
            || self.act(name).is_some()
    }

    pub fn add_sort(&mut self, name: &str, role: SortRole) {
        self.sorts.push(SortDecl {
            name: name.into(),
            role,
        });
    }

    pub fn add_map(&mut self, name: &str, from: &str, to: &str) {
        self.maps.push(MapSymbol {
            name: name.into(),
            from: from.into(),
            to: to.into(),
        });
    }

    pub fn add_prod(&mut self, name: &str, left: &str, right: &str, out: &str) {
        self.prods.push(ProdSymbol {
            name: name.into(),
            left: left.into(),
            right: right.into(),
            out: out.into(),
        });
    }

    pub fn add_act(&mut self, name: &str, algebra: &str, module: &str, side: Side) {
        self.acts.push(ActSymbol {
            name: name.into(),
            algebra: algebra.into(),
            module: module.into(),
            side,
        });
    }

    /// Checks that every symbol refers to declared sorts and names are unique.
    pub fn validate(&self) -> Result<(), IrError> {
        let mut seen = std::collections::BTreeSet::new();
        let names = self
            .sorts
            .iter()
            .map(|s| &s.name)
            .chain(self.maps.iter().map(|s| &s.name))
            .chain(self.prods.iter().map(|s| &s.name))
            .chain(self.acts.iter().map(|s| &s.name));
        for n in names {
            if !seen.insert(n.clone()) {
                return Err(IrError::DuplicateSymbol(n.clone()));
            }
        }
        let known = |s: &str| -> Result<(), IrError> {
            if self.sort(s).is_some() {
                Ok(())
            } else {
                Err(IrError::UnknownSort(s.to_string()))
            }
        };
        for m in &self.maps {
            known(&m.from)?;
            known(&m.to)?;
        }
        for p in &self.prods {
            known(&p.left)?;
            known(&p.right)?;
            known(&p.out)?;
        }
        for a in &self.acts {
            known(&a.algebra)?;
            known(&a.module)?;
        }
        Ok(())
    }
}

/// A variable is identified by its sort and its position among that sort's variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub sort: String,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Var(Var),
    Map(String, Box<Expr>),
    Prod(String, Box<Expr>, Box<Expr>),
    Act(String, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn var(sort: &str, index: usize) -> Expr {
        Expr::Var(Var {
            sort: sort.into(),
            index,
        })
    }

    pub fn map(name: &str, arg: Expr) -> Expr {
        Expr::Map(name.into(), Box::new(arg))
    }

    pub fn prod(name: &str, a: Expr, b: Expr) -> Expr {
        Expr::Prod(name.into(), Box::new(a), Box::new(b))
    }

    pub fn act(name: &str, a: Expr, v: Expr) -> Expr {
        Expr::Act(name.into(), Box::new(a), Box::new(v))
    }

    pub fn collect_vars(&self, out: &mut BTreeMap<Var, usize>) {
        match self {
            Expr::Var(v) => *out.entry(v.clone()).or_default() += 1,
            Expr::Map(_, a) => a.collect_vars(out),
            Expr::Prod(_, a, b) | Expr::Act(_, a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn free_vars(&self) -> BTreeMap<Var, usize> {
        let mut m = BTreeMap::new();
        self.collect_vars(&mut m);
        m
    }

    /// Output sort of the expression, or the first typing error.
    pub fn sort_of(&self, sig: &Signature) -> Result<String, IrError> {
        match self {
            Expr::Var(v) => {
                if sig.sort(&v.sort).is_none() {
                    return Err(IrError::UnknownSort(v.sort.clone()));
                }
                Ok(v.sort.clone())
            }
            Expr::Map(name, a) => {
                let m = sig
                    .map(name)
                    .ok_or_else(|| IrError::UnknownSymbol(name.clone()))?;
                expect_sort(name, 0, &m.from, &a.sort_of(sig)?)?;
                Ok(m.to.clone())
            }
            Expr::Prod(name, a, b) => {
                let p = sig
                    .prod(name)
                    .ok_or_else(|| IrError::UnknownSymbol(name.clone()))?;
                expect_sort(name, 0, &p.left, &a.sort_of(sig)?)?;
                expect_sort(name, 1, &p.right, &b.sort_of(sig)?)?;
                Ok(p.out.clone())
            }
            Expr::Act(name, a, v) => {
                let s = sig
                    .act(name)
                    .ok_or_else(|| IrError::UnknownSymbol(name.clone()))?;
                expect_sort(name, 0, &s.algebra, &a.sort_of(sig)?)?;
                expect_sort(name, 1, &s.module, &v.sort_of(sig)?)?;
                Ok(s.module.clone())
            }
        }
    }

    /// Applies `f` to every symbol name in the expression.
    pub fn rename_symbols(&self, f: &impl Fn(&str) -> String) -> Expr {
        match self {
            Expr::Var(v) => Expr::Var(v.clone()),
            Expr::Map(n, a) => Expr::Map(f(n), Box::new(a.rename_symbols(f))),
            Expr::Prod(n, a, b) => Expr::Prod(
                f(n),
                Box::new(a.rename_symbols(f)),
                Box::new(b.rename_symbols(f)),
            ),
            Expr::Act(n, a, b) => Expr::Act(
                f(n),
                Box::new(a.rename_symbols(f)),
                Box::new(b.rename_symbols(f)),
            ),
        }
    }

    pub fn mentions(&self, symbol: &str) -> bool {
        match self {
            Expr::Var(_) => false,
            Expr::Map(n, a) => n == symbol || a.mentions(symbol),
            Expr::Prod(n, a, b) | Expr::Act(n, a, b) => {
                n == symbol || a.mentions(symbol) || b.mentions(symbol)
            }
        }
    }
}

fn expect_sort(symbol: &str, arg: usize, expected: &str, found: &str) -> Result<(), IrError> {
    if expected == found {
        Ok(())
    } else {
        Err(IrError::SortMismatch {
            symbol: symbol.to_string(),
            arg,
            expected: expected.to_string(),
            found: found.to_string(),
        })
    }
}

/// Rational coefficient, optionally multiplied by a named scalar parameter.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coeff {
    pub value: Scalar,
    pub param: Option<String>,
}

impl Coeff {
    pub fn scalar(value: Scalar) -> Self {
        Coeff { value, param: None }
    }

    pub fn one() -> Self {
        Self::scalar(Scalar::one())
    }

    pub fn resolve(&self, params: &BTreeMap<String, Scalar>) -> Result<Scalar, IrError> {
        match &self.param {
            None => Ok(self.value.clone()),
            Some(p) => params
                .get(p)
                .map(|v| v * &self.value)
                .ok_or_else(|| IrError::UnboundParam(p.clone())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub coeff: Coeff,
    pub expr: Expr,
}

/// A named identity `Σ coeff · expr = 0` in the declared variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Identity {
    pub name: String,
    /// Declared variables in quantifier order, with their display names.
    pub vars: Vec<(String, Var)>,
    pub terms: Vec<Term>,
}

impl Identity {
    pub fn var_name(&self, v: &Var) -> Option<&str> {
        self.vars
            .iter()
            .find(|(_, w)| w == v)
            .map(|(n, _)| n.as_str())
    }

    /// Checks typing, common output sort and multilinearity in the declared variables.
    pub fn wellform(&self, sig: &Signature, params: &[String]) -> Result<String, IrError> {
        let err = |e: IrError| IrError::InIdentity {
            identity: self.name.clone(),
            source: Box::new(e),
        };
        if self.terms.is_empty() {
            return Err(err(IrError::EmptyIdentity));
        }
        let mut declared = BTreeMap::new();
        for (_, v) in &self.vars {
            if sig.sort(&v.sort).is_none() {
                return Err(err(IrError::UnknownSort(v.sort.clone())));
            }
            if declared.insert(v.clone(), 1usize).is_some() {
                return Err(err(IrError::DuplicateVariable(v.clone())));
            }
        }
        let mut out_sort: Option<String> = None;
        for (t, term) in self.terms.iter().enumerate() {
            if let Some(p) = &term.coeff.param {
                if !params.contains(p) {
                    return Err(err(IrError::UnboundParam(p.clone())));
                }
            }
            let s = term.expr.sort_of(sig).map_err(err)?;
            match &out_sort {
                None => out_sort = Some(s),
                Some(o) if *o != s => {
                    return Err(err(IrError::MixedOutputSorts {
                        term: t,
                        expected: o.clone(),
                        found: s,
                    }))
                }
                _ => {}
            }
            if term.expr.free_vars() != declared {
                return Err(err(IrError::NotMultilinear { term: t }));
            }
        }
        Ok(out_sort.expect("at least one term"))
    }

    pub fn mentions(&self, symbol: &str) -> bool {
        self.terms.iter().any(|t| t.expr.mentions(symbol))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IdentitySet {
    pub name: String,
    pub signature: Signature,
    pub params: Vec<String>,
    pub identities: Vec<Identity>,
}

impl IdentitySet {
    pub fn wellform(&self) -> Result<(), IrError> {
        self.signature.validate()?;
        if self.identities.is_empty() {
            return Err(IrError::EmptySet(self.name.clone()));
        }
        let mut names = std::collections::BTreeSet::new();
        for id in &self.identities {
            if !names.insert(id.name.clone()) {
                return Err(IrError::DuplicateIdentity(id.name.clone()));
            }
            id.wellform(&self.signature, &self.params)?;
        }
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Identity> {
        self.identities.iter().find(|i| i.name == name)
    }

    /// Replicates every identity that mentions product `template` once per
    /// name in `products`, substituting `template` (and `template_X` for any
    /// suffix `_X`) by the product name. Identities without the template are
    /// kept as they are.
    pub fn specialize_products(&self, template: &str, products: &[&str]) -> IdentitySet {
        if products.len() == 1 && products[0] == template {
            return self.clone();
        }
        let prefix = format!("{template}_");
        let is_template =
            |n: &str| n == template || (n.starts_with(&prefix) && self.signature.prod(n).is_some());
        let rename = |q: &str, n: &str| -> String {
            if n == template {
                q.to_string()
            } else if is_template(n) {
                format!("{q}_{}", &n[prefix.len()..])
            } else {
                n.to_string()
            }
        };
        let mut sig = self.signature.clone();
        sig.prods.clear();
        for p in &self.signature.prods {
            if is_template(&p.name) {
                for q in products {
                    let mut np = p.clone();
                    np.name = rename(q, &p.name);
                    sig.prods.push(np);
                }
            } else {
                sig.prods.push(p.clone());
            }
        }
        let mut identities = Vec::new();
        for id in &self.identities {
            let uses = self
                .signature
                .prods
                .iter()
                .any(|p| is_template(&p.name) && id.mentions(&p.name));
            if !uses {
                identities.push(id.clone());
                continue;
            }
            for q in products {
                let f = |n: &str| rename(q, n);
                identities.push(Identity {
                    name: format!("{}[{}]", id.name, q),
                    vars: id.vars.clone(),
                    terms: id
                        .terms
                        .iter()
                        .map(|t| Term {
                            coeff: t.coeff.clone(),
                            expr: t.expr.rename_symbols(&f),
                        })
                        .collect(),
                });
            }
        }
        IdentitySet {
            name: self.name.clone(),
            signature: sig,
            params: self.params.clone(),
            identities,
        }
    }

    /// Renames symbols throughout the signature and identities.
    pub fn rename_symbols(&self, f: &impl Fn(&str) -> String) -> IdentitySet {
        let mut sig = self.signature.clone();
        for m in &mut sig.maps {
            m.name = f(&m.name);
        }
        for p in &mut sig.prods {
            p.name = f(&p.name);
        }
        for a in &mut sig.acts {
            a.name = f(&a.name);
        }
        IdentitySet {
            name: self.name.clone(),
            signature: sig,
            params: self.params.clone(),
            identities: self
                .identities
                .iter()
                .map(|id| Identity {
                    name: id.name.clone(),
                    vars: id.vars.clone(),
                    terms: id
                        .terms
                        .iter()
                        .map(|t| Term {
                            coeff: t.coeff.clone(),
                            expr: t.expr.rename_symbols(f),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IrError {
    #[error("unknown sort `{0}`")]
    UnknownSort(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{0}` declared twice")]
    DuplicateSymbol(String),
    #[error("identity `{0}` declared twice")]
    DuplicateIdentity(String),
    #[error("variable {0:?} declared twice")]
    DuplicateVariable(Var),
    #[error("argument {arg} of `{symbol}` expects sort {expected}, found {found}")]
    SortMismatch {
        symbol: String,
        arg: usize,
        expected: String,
        found: String,
    },
    #[error("term {term} has output sort {found}, earlier terms have {expected}")]
    MixedOutputSorts {
        term: usize,
        expected: String,
        found: String,
    },
    #[error("term {term} does not use each declared variable exactly once")]
    NotMultilinear { term: usize },
    #[error("identity has no terms")]
    EmptyIdentity,
    #[error("identity set `{0}` is empty")]
    EmptySet(String),
    #[error("parameter `{0}` is not bound")]
    UnboundParam(String),
    #[error("in identity `{identity}`: {source}")]
    InIdentity {
        identity: String,
        #[source]
        source: Box<IrError>,
    },
}
