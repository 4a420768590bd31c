//! Concrete presentations: algebras, bimodules, matched pairs and operators,
//! plus the shared fixture library.
//!
//! Presentations only carry data. Whether the axioms hold is always decided by
//! an explicit evaluator run through the `check` methods.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::axioms::{builtin_identity_set, Variant};
use crate::eval::{check_identities, CheckOptions, CheckReport, EvalError, ModelBinding};
use crate::exact::{Matrix, Scalar, Tensor3, MAX_DIM};
use crate::ir::IdentitySet;

/// The six varieties with shipped axiom systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variety {
    Associative,
    LeftSymmetric,
    LsDialgebra,
    AssocDialgebra,
    Dendriform,
    Tridendriform,
}

impl Variety {
    pub const ALL: [Variety; 6] = [
        Variety::Associative,
        Variety::LeftSymmetric,
        Variety::LsDialgebra,
        Variety::AssocDialgebra,
        Variety::Dendriform,
        Variety::Tridendriform,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Variety::Associative => "bihom-associative",
            Variety::LeftSymmetric => "bihom-left-symmetric",
            Variety::LsDialgebra => "ls-dialgebra",
            Variety::AssocDialgebra => "assoc-dialgebra",
            Variety::Dendriform => "bihom-dendriform",
            Variety::Tridendriform => "bihom-tridendriform",
        }
    }

    /// Product symbol names, in presentation order.
    pub fn products(self) -> &'static [&'static str] {
        match self {
            Variety::Associative | Variety::LeftSymmetric => &["mul"],
            Variety::LsDialgebra | Variety::AssocDialgebra | Variety::Dendriform => &["dl", "dr"],
            Variety::Tridendriform => &["dl", "dr", "dot"],
        }
    }

    /// Action names of a bimodule: `l`, `r` for single-product varieties,
    /// otherwise `l_p`, `r_p` for each product `p`.
    pub fn action_names(self) -> Vec<String> {
        let ps = self.products();
        if ps.len() == 1 {
            return vec!["l".into(), "r".into()];
        }
        ps.iter().flat_map(|p| [format!("l_{p}"), format!("r_{p}")]).collect()
    }

    pub fn bimodule_tag(self) -> String {
        format!("bimodule-of-{}", self.tag())
    }

    pub fn matched_tag(self) -> String {
        format!("matched-pair-of-{}", self.tag())
    }

    /// Tag of the precondition set for dual bimodules, where one ships.
    pub fn dual_tag(self) -> Option<String> {
        matches!(self, Variety::LsDialgebra | Variety::Tridendriform)
            .then(|| format!("dual-bimodule-of-{}", self.tag()))
    }
}

impl fmt::Display for Variety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Variety {
    type Err = PresentationError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Variety::ALL
            .into_iter()
            .find(|v| v.tag() == s)
            .ok_or_else(|| PresentationError::UnknownVariety(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("unknown variety `{0}`")]
    UnknownVariety(String),
    #[error("{what}: expected products {expected:?}, found {found:?}")]
    Products {
        what: String,
        expected: Vec<String>,
        found: Vec<String>,
    },
    #[error("{what} has the wrong shape: expected {expected}, found {found}")]
    Shape {
        what: String,
        expected: String,
        found: String,
    },
    #[error("dimension {0} exceeds the cap of {MAX_DIM}")]
    DimensionCap(usize),
    #[error("varieties differ: {0} and {1}")]
    VarietyMismatch(Variety, Variety),
}

fn shape_err(what: impl Into<String>, expected: impl fmt::Display, found: impl fmt::Display) -> PresentationError {
    PresentationError::Shape {
        what: what.into(),
        expected: expected.to_string(),
        found: found.to_string(),
    }
}

fn check_square(what: &str, m: &Matrix, n: usize) -> Result<(), PresentationError> {
    if m.rows() != n || m.cols() != n {
        return Err(shape_err(what, format!("{n}x{n}"), format!("{}x{}", m.rows(), m.cols())));
    }
    Ok(())
}

fn check_family(what: &str, fam: &[Matrix], len: usize, n: usize) -> Result<(), PresentationError> {
    if fam.len() != len {
        return Err(shape_err(what, format!("{len} matrices"), format!("{} matrices", fam.len())));
    }
    fam.iter().try_for_each(|m| check_square(what, m, n))
}

fn check_names(what: &str, expected: &[String], found: Vec<String>) -> Result<(), PresentationError> {
    if expected != found.as_slice() {
        return Err(PresentationError::Products {
            what: what.to_string(),
            expected: expected.to_vec(),
            found,
        });
    }
    Ok(())
}

/// Runs a built-in set; returns the reports with the transcription that ran.
pub fn check_builtin(
    tag: &str,
    variant: Variant,
    binding: &ModelBinding,
    opts: &CheckOptions,
) -> Result<(Vec<CheckReport>, Variant), EvalError> {
    let (set, used) = builtin_identity_set(tag, variant)?;
    Ok((check_identities(set, binding, opts)?, used))
}

/// A finite-dimensional algebra with its twisting maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraPresentation {
    pub name: String,
    pub variety: Variety,
    pub dim: usize,
    pub alpha: Matrix,
    pub beta: Matrix,
    pub products: Vec<(String, Tensor3)>,
}

impl AlgebraPresentation {
    pub fn new(
        name: &str,
        variety: Variety,
        alpha: Matrix,
        beta: Matrix,
        products: Vec<(String, Tensor3)>,
    ) -> Result<Self, PresentationError> {
        let dim = alpha.rows();
        let a = AlgebraPresentation {
            name: name.to_string(),
            variety,
            dim,
            alpha,
            beta,
            products,
        };
        a.validate()?;
        Ok(a)
    }

    pub fn validate(&self) -> Result<(), PresentationError> {
        let n = self.dim;
        if n > MAX_DIM {
            return Err(PresentationError::DimensionCap(n));
        }
        check_square("alpha", &self.alpha, n)?;
        check_square("beta", &self.beta, n)?;
        let expected: Vec<String> = self.variety.products().iter().map(|s| s.to_string()).collect();
        check_names(&self.name, &expected, self.products.iter().map(|p| p.0.clone()).collect())?;
        for (p, t) in &self.products {
            if (t.out_dim(), t.left_dim(), t.right_dim()) != (n, n, n) {
                return Err(shape_err(
                    format!("product {p}"),
                    format!("{n}x{n}x{n}"),
                    format!("{}x{}x{}", t.out_dim(), t.left_dim(), t.right_dim()),
                ));
            }
        }
        Ok(())
    }

    /// Panics when `name` is not a product of this algebra.
    pub fn product(&self, name: &str) -> &Tensor3 {
        &self.products.iter().find(|p| p.0 == name).unwrap_or_else(|| panic!("no product `{name}`")).1
    }

    pub fn product_names(&self) -> Vec<&str> {
        self.products.iter().map(|p| p.0.as_str()).collect()
    }

    /// Binding for the variety set: sort `A`, maps `alpha`, `beta`.
    pub fn binding(&self) -> ModelBinding {
        let mut b = ModelBinding::new()
            .with_dim("A", self.dim)
            .with_map("alpha", self.alpha.clone())
            .with_map("beta", self.beta.clone());
        for (p, t) in &self.products {
            b = b.with_prod(p, t.clone());
        }
        b
    }

    pub fn check(&self, variant: Variant, opts: &CheckOptions) -> Result<(Vec<CheckReport>, Variant), EvalError> {
        check_builtin(self.variety.tag(), variant, &self.binding(), opts)
    }

    /// Same tables presented under another variety with the same product names.
    pub fn as_variety(&self, variety: Variety) -> Result<Self, PresentationError> {
        let mut a = self.clone();
        a.variety = variety;
        a.validate()?;
        Ok(a)
    }

    pub fn renamed(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }
}

/// Left multiplication operators `L_{e_i}` of a product table.
pub fn left_multiplications(t: &Tensor3) -> Vec<Matrix> {
    let n = t.left_dim();
    (0..n)
        .map(|i| {
            let cols: Vec<_> = (0..t.right_dim()).map(|j| t.image(i, j)).collect();
            Matrix::from_columns(t.out_dim(), &cols).expect("table columns")
        })
        .collect()
}

/// Right multiplication operators `R_{e_i}: v ↦ v·e_i`.
pub fn right_multiplications(t: &Tensor3) -> Vec<Matrix> {
    (0..t.right_dim())
        .map(|i| {
            let cols: Vec<_> = (0..t.left_dim()).map(|j| t.image(j, i)).collect();
            Matrix::from_columns(t.out_dim(), &cols).expect("table columns")
        })
        .collect()
}

/// A bimodule `V` over `base`, with module maps `beta1`, `beta2` and one
/// matrix family per action symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BimodulePresentation {
    pub name: String,
    pub base: AlgebraPresentation,
    pub dim: usize,
    pub beta1: Matrix,
    pub beta2: Matrix,
    pub actions: Vec<(String, Vec<Matrix>)>,
}

impl BimodulePresentation {
    pub fn new(
        name: &str,
        base: AlgebraPresentation,
        beta1: Matrix,
        beta2: Matrix,
        actions: Vec<(String, Vec<Matrix>)>,
    ) -> Result<Self, PresentationError> {
        let m = BimodulePresentation {
            name: name.to_string(),
            dim: beta1.rows(),
            base,
            beta1,
            beta2,
            actions,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<(), PresentationError> {
        self.base.validate()?;
        if self.dim > MAX_DIM {
            return Err(PresentationError::DimensionCap(self.dim));
        }
        check_square("beta1", &self.beta1, self.dim)?;
        check_square("beta2", &self.beta2, self.dim)?;
        check_names(
            &self.name,
            &self.base.variety.action_names(),
            self.actions.iter().map(|a| a.0.clone()).collect(),
        )?;
        for (n, fam) in &self.actions {
            check_family(&format!("action {n}"), fam, self.base.dim, self.dim)?;
        }
        Ok(())
    }

    /// The regular bimodule: `V = A`, actions by left and right multiplication.
    pub fn regular(base: &AlgebraPresentation) -> Self {
        let mut actions = Vec::new();
        for (p, t) in &base.products {
            let (l, r) = if base.products.len() == 1 {
                ("l".to_string(), "r".to_string())
            } else {
                (format!("l_{p}"), format!("r_{p}"))
            };
            actions.push((l, left_multiplications(t)));
            actions.push((r, right_multiplications(t)));
        }
        BimodulePresentation {
            name: format!("regular({})", base.name),
            base: base.clone(),
            dim: base.dim,
            beta1: base.alpha.clone(),
            beta2: base.beta.clone(),
            actions,
        }
    }

    /// Zero actions on a `dim`-dimensional space with identity module maps.
    pub fn zero(base: &AlgebraPresentation, dim: usize) -> Self {
        let actions = base
            .variety
            .action_names()
            .into_iter()
            .map(|n| (n, vec![Matrix::zeros(dim, dim); base.dim]))
            .collect();
        BimodulePresentation {
            name: format!("zero({}, {dim})", base.name),
            base: base.clone(),
            dim,
            beta1: Matrix::identity(dim),
            beta2: Matrix::identity(dim),
            actions,
        }
    }

    /// Panics when `name` is not an action of this bimodule.
    pub fn action(&self, name: &str) -> &[Matrix] {
        &self.actions.iter().find(|a| a.0 == name).unwrap_or_else(|| panic!("no action `{name}`")).1
    }

    /// Binding for bimodule and dual-precondition sets: sorts `A`, `V`.
    pub fn binding(&self) -> ModelBinding {
        let mut b = ModelBinding::new()
            .with_dim("A", self.base.dim)
            .with_dim("V", self.dim)
            .with_map("alpha1", self.base.alpha.clone())
            .with_map("alpha2", self.base.beta.clone())
            .with_map("beta1", self.beta1.clone())
            .with_map("beta2", self.beta2.clone());
        for (p, t) in &self.base.products {
            b = b.with_prod(p, t.clone());
        }
        for (n, fam) in &self.actions {
            b = b.with_act(n, fam.clone());
        }
        b
    }

    pub fn check(&self, variant: Variant, opts: &CheckOptions) -> Result<(Vec<CheckReport>, Variant), EvalError> {
        check_builtin(&self.base.variety.bimodule_tag(), variant, &self.binding(), opts)
    }
}

/// Two algebras of one variety acting on each other. `on_b` holds the
/// actions of `a` on `b` and `on_a` those of `b` on `a`, named as for a
/// bimodule (`l`, `r` or `l_p`, `r_p`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchedPairPresentation {
    pub name: String,
    pub a: AlgebraPresentation,
    pub b: AlgebraPresentation,
    pub on_b: Vec<(String, Vec<Matrix>)>,
    pub on_a: Vec<(String, Vec<Matrix>)>,
}

impl MatchedPairPresentation {
    pub fn new(
        name: &str,
        a: AlgebraPresentation,
        b: AlgebraPresentation,
        on_b: Vec<(String, Vec<Matrix>)>,
        on_a: Vec<(String, Vec<Matrix>)>,
    ) -> Result<Self, PresentationError> {
        let p = MatchedPairPresentation {
            name: name.to_string(),
            a,
            b,
            on_b,
            on_a,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), PresentationError> {
        if self.a.variety != self.b.variety {
            return Err(PresentationError::VarietyMismatch(self.a.variety, self.b.variety));
        }
        self.on_b_bimodule().validate()?;
        self.on_a_bimodule().validate()
    }

    pub fn variety(&self) -> Variety {
        self.a.variety
    }

    /// `B` as a bimodule over `A`, with `B`'s twisting maps as module maps.
    pub fn on_b_bimodule(&self) -> BimodulePresentation {
        BimodulePresentation {
            name: format!("{}:A-on-B", self.name),
            base: self.a.clone(),
            dim: self.b.dim,
            beta1: self.b.alpha.clone(),
            beta2: self.b.beta.clone(),
            actions: self.on_b.clone(),
        }
    }

    /// `A` as a bimodule over `B`.
    pub fn on_a_bimodule(&self) -> BimodulePresentation {
        BimodulePresentation {
            name: format!("{}:B-on-A", self.name),
            base: self.b.clone(),
            dim: self.a.dim,
            beta1: self.a.alpha.clone(),
            beta2: self.a.beta.clone(),
            actions: self.on_a.clone(),
        }
    }

    /// Binding for the matched-pair sets: products and actions get the
    /// suffix `_A` or `_B` naming the algebra they come from.
    pub fn binding(&self) -> ModelBinding {
        let mut b = ModelBinding::new()
            .with_dim("A", self.a.dim)
            .with_dim("B", self.b.dim)
            .with_map("alpha1", self.a.alpha.clone())
            .with_map("alpha2", self.a.beta.clone())
            .with_map("beta1", self.b.alpha.clone())
            .with_map("beta2", self.b.beta.clone());
        for (p, t) in &self.a.products {
            b = b.with_prod(&format!("{p}_A"), t.clone());
        }
        for (p, t) in &self.b.products {
            b = b.with_prod(&format!("{p}_B"), t.clone());
        }
        for (n, fam) in &self.on_b {
            b = b.with_act(&format!("{n}_A"), fam.clone());
        }
        for (n, fam) in &self.on_a {
            b = b.with_act(&format!("{n}_B"), fam.clone());
        }
        b
    }

    /// Cross equations only; see `modules::check_matched_pair` for the
    /// layered check including constituents and bimodules.
    pub fn check(&self, variant: Variant, opts: &CheckOptions) -> Result<(Vec<CheckReport>, Variant), EvalError> {
        check_builtin(&self.variety().matched_tag(), variant, &self.binding(), opts)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OperatorKind {
    RotaBaxter { weight: Scalar },
    Centroid,
    Averaging,
    Endomorphism,
}

impl OperatorKind {
    pub fn tag(&self) -> &'static str {
        match self {
            OperatorKind::RotaBaxter { .. } => "rota-baxter",
            OperatorKind::Centroid => "centroid",
            OperatorKind::Averaging => "averaging",
            OperatorKind::Endomorphism => "morphism",
        }
    }

    pub fn keyword(&self) -> &'static str {
        match self {
            OperatorKind::RotaBaxter { .. } => "rota-baxter",
            OperatorKind::Centroid => "centroid",
            OperatorKind::Averaging => "averaging",
            OperatorKind::Endomorphism => "endomorphism",
        }
    }
}

/// A linear operator on an algebra together with the condition it should meet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorPresentation {
    pub name: String,
    pub base: AlgebraPresentation,
    pub op: Matrix,
    pub kind: OperatorKind,
}

impl OperatorPresentation {
    pub fn new(name: &str, base: AlgebraPresentation, op: Matrix, kind: OperatorKind) -> Result<Self, PresentationError> {
        check_square("operator", &op, base.dim)?;
        Ok(OperatorPresentation {
            name: name.to_string(),
            base,
            op,
            kind,
        })
    }

    /// The operator's identity set, replicated once per product of the base.
    pub fn identity_set(&self, variant: Variant) -> Result<(IdentitySet, Variant), EvalError> {
        let (set, used) =
            builtin_identity_set(self.kind.tag(), variant)?;
        Ok((set.specialize_products("mul", self.base.variety.products()), used))
    }

    pub fn binding(&self) -> ModelBinding {
        match &self.kind {
            OperatorKind::Endomorphism => morphism_binding(&self.op, &self.base, &self.base),
            kind => {
                let map = if matches!(kind, OperatorKind::RotaBaxter { .. }) { "R" } else { "gamma" };
                let mut b = self.base.binding().with_map(map, self.op.clone());
                if let OperatorKind::RotaBaxter { weight } = kind {
                    b = b.with_param("lambda", weight.clone());
                }
                b
            }
        }
    }

    pub fn check(&self, variant: Variant, opts: &CheckOptions) -> Result<(Vec<CheckReport>, Variant), EvalError> {
        let (set, used) = self.identity_set(variant)?;
        Ok((check_identities(&set, &self.binding(), opts)?, used))
    }
}

/// Binding for the morphism set with `f: a -> b`.
pub fn morphism_binding(f: &Matrix, a: &AlgebraPresentation, b: &AlgebraPresentation) -> ModelBinding {
    let mut m = ModelBinding::new()
        .with_dim("A", a.dim)
        .with_dim("B", b.dim)
        .with_map("alpha_A", a.alpha.clone())
        .with_map("beta_A", a.beta.clone())
        .with_map("alpha_B", b.alpha.clone())
        .with_map("beta_B", b.beta.clone())
        .with_map("f", f.clone());
    for (p, t) in &a.products {
        m = m.with_prod(&format!("{p}_A"), t.clone());
    }
    for (p, t) in &b.products {
        m = m.with_prod(&format!("{p}_B"), t.clone());
    }
    m
}

/// Builds a product table from `(i, j, image)` entries with 1-based indices.
pub fn table(dim: usize, entries: &[(usize, usize, &[Scalar])]) -> Tensor3 {
    let mut t = Tensor3::square(dim);
    for (i, j, v) in entries {
        t.set_image(i - 1, j - 1, v);
    }
    t
}

/// The normative fixture library.
pub mod fixtures {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn assoc(name: &str, alpha: Matrix, beta: Matrix, mul: Tensor3) -> AlgebraPresentation {
        AlgebraPresentation::new(name, Variety::Associative, alpha, beta, vec![("mul".into(), mul)])
            .expect("fixture shapes")
    }

    /// `Z_d`: zero product, identity maps.
    pub fn zero(d: usize) -> AlgebraPresentation {
        assoc(&format!("Z{d}"), Matrix::identity(d), Matrix::identity(d), Tensor3::square(d))
    }

    /// `Z_d` in any variety.
    pub fn zero_in(variety: Variety, d: usize) -> AlgebraPresentation {
        let products = variety.products().iter().map(|p| (p.to_string(), Tensor3::square(d))).collect();
        AlgebraPresentation::new(&format!("Z{d}"), variety, Matrix::identity(d), Matrix::identity(d), products)
            .expect("fixture shapes")
    }

    /// `K1`: the ground field, `e1·e1 = e1`.
    pub fn k1() -> AlgebraPresentation {
        assoc("K1", Matrix::identity(1), Matrix::identity(1), table(1, &[(1, 1, &[s(1)])]))
    }

    /// `N2`: dual numbers, `e1` the unit and `e2·e2 = 0`, identity maps.
    pub fn n2() -> AlgebraPresentation {
        assoc("N2", Matrix::identity(2), Matrix::identity(2), n2_table(&s(1)))
    }

    fn n2_table(c: &Scalar) -> Tensor3 {
        let (z, one) = (Scalar::zero(), Scalar::one());
        table(
            2,
            &[
                (1, 1, &[one.clone(), z.clone()]),
                (1, 2, &[z.clone(), c.clone()]),
                (2, 1, &[z.clone(), c.clone()]),
            ],
        )
    }

    /// `σ_c`: `e1 ↦ e1`, `e2 ↦ c e2`, an automorphism of `N2` for `c ≠ 0`.
    pub fn sigma(c: &Scalar) -> Matrix {
        Matrix::diagonal(&[Scalar::one(), c.clone()])
    }

    /// `N2/σ_c`: the Yau twist of `N2` by `σ_c` with exponent 1, so
    /// `μ(x, y) = σ_c(x)σ_c(y)` and `α = β = σ_c`.
    pub fn n2_sigma(c: &Scalar) -> AlgebraPresentation {
        let sig = sigma(c);
        assoc(&format!("N2s{c}"), sig.clone(), sig, n2_table(c))
    }

    /// `E(a)`: the two-dimensional example, tables exactly as printed.
    pub fn e(a: &Scalar) -> AlgebraPresentation {
        let one = Scalar::one();
        let two = s(2);
        let alpha = Matrix::from_rows(vec![vec![two.clone(), -&(&two * a)], vec![Scalar::zero(), &one - a]])
            .expect("2x2");
        let beta = Matrix::from_rows(vec![vec![two.clone(), -a], vec![Scalar::zero(), &one - a]]).expect("2x2");
        let mul = table(
            2,
            &[
                (1, 1, &[two.clone(), Scalar::zero()]),
                (1, 2, &[-a, &one - a]),
                (2, 1, &[-&(&two * a), a - &one]),
                (2, 2, &[&two * &(a * a), a.clone()]),
            ],
        );
        assoc(&format!("E({a})"), alpha, beta, mul)
    }

    /// `RB1(λ)`: `R = −λ·id` on `K1`, a Rota-Baxter operator of weight `λ`.
    pub fn rb1(lambda: &Scalar) -> OperatorPresentation {
        OperatorPresentation::new(
            &format!("RB1({lambda})"),
            k1(),
            Matrix::scalar(1, -lambda),
            OperatorKind::RotaBaxter { weight: lambda.clone() },
        )
        .expect("1x1")
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::eval::{all_pass, failing};

    fn opts() -> CheckOptions {
        CheckOptions::default()
    }

    #[test]
    fn fixtures_are_associative() {
        for a in [zero(1), zero(3), k1(), n2(), n2_sigma(&Scalar::from_int(2))] {
            let (reps, _) = a.check(Variant::AsPrinted, &opts()).unwrap();
            assert!(all_pass(&reps), "{}: {:?}", a.name, failing(&reps));
        }
    }

    #[test]
    fn e1_table_matches_printed_values() {
        let e = e(&Scalar::one());
        assert_eq!(e.alpha.column(1), vec![Scalar::from_int(-2), Scalar::zero()]);
        let v = e.product("mul").image(1, 1);
        assert_eq!(v, vec![Scalar::from_int(2), Scalar::one()]);
    }

    #[test]
    fn regular_bimodule_uses_left_and_right_multiplication() {
        let m = BimodulePresentation::regular(&n2());
        // l(e2) e1 = e2·e1 = e2 and r(e2) e1 = e1·e2 = e2
        let e1 = vec![Scalar::one(), Scalar::zero()];
        let e2 = vec![Scalar::zero(), Scalar::one()];
        assert_eq!(m.action("l")[1].apply(&e1).unwrap(), e2);
        assert_eq!(m.action("r")[1].apply(&e1).unwrap(), e2);
        assert_eq!(m.action("l")[1].apply(&e2).unwrap(), vec![Scalar::zero(); 2]);
    }

    #[test]
    fn product_names_are_validated() {
        let err = AlgebraPresentation::new(
            "x",
            Variety::Dendriform,
            Matrix::identity(1),
            Matrix::identity(1),
            vec![("mul".into(), Tensor3::square(1))],
        )
        .unwrap_err();
        assert!(matches!(err, PresentationError::Products { .. }));
    }

    #[test]
    fn variety_tags_round_trip() {
        for v in Variety::ALL {
            assert_eq!(v.tag().parse::<Variety>().unwrap(), v);
        }
        assert_eq!(Variety::Tridendriform.action_names().len(), 6);
    }
}
