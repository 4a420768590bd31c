//! Construction theorems as functions on presentations.
//!
//! Every construction checks the hypotheses it needs exactly and returns a
//! new presentation. None of them certifies its output; callers re-run the
//! evaluator on the result.

use thiserror::Error;

use crate::axioms::{builtin_identity_set, AxiomError, Variant};
use crate::eval::{check_identities, CheckOptions, CheckReport, EvalError, Failure, Mode, Status};
use crate::exact::{basis_vector, Matrix, Scalar, ShapeError, Subspace, Tensor3};
use crate::structures::{
    check_builtin, morphism_binding, AlgebraPresentation, OperatorKind, OperatorPresentation, PresentationError,
    Variety,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("varieties differ: {0} and {1}")]
    VarietyMismatch(Variety, Variety),
    #[error("{construction} needs {expected}, found {found}")]
    WrongVariety {
        construction: &'static str,
        expected: &'static str,
        found: Variety,
    },
    #[error("hypothesis `{hypothesis}` of {anchor} fails: {witness}")]
    Precondition {
        anchor: String,
        hypothesis: String,
        witness: String,
    },
    #[error("exponent 2^{0} is out of range")]
    Overflow(u32),
    #[error(transparent)]
    Axiom(#[from] AxiomError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Shape(#[from] ShapeError),
}

/// Human-readable witness of a failure: `x=e2, y=e1: residual [2, 0]`.
pub fn describe_failure(f: &Failure) -> String {
    let tuple: Vec<String> = f.tuple.iter().map(|(n, i)| format!("{n}=e{}", i + 1)).collect();
    let res: Vec<String> = f.residual.iter().map(|s| s.to_string()).collect();
    format!("{}: residual [{}]", tuple.join(", "), res.join(", "))
}

/// Turns the first failing report into a precondition error.
pub fn require_pass(anchor: &str, reports: &[CheckReport]) -> Result<(), ConstructionError> {
    match reports.iter().find(|r| !r.passed()) {
        None => Ok(()),
        Some(r) => Err(ConstructionError::Precondition {
            anchor: anchor.to_string(),
            hypothesis: r.identity.clone(),
            witness: r.failures.first().map(describe_failure).unwrap_or_default(),
        }),
    }
}

/// Requires every listed pair of maps to commute.
pub fn require_commuting(anchor: &str, maps: &[(&str, &Matrix)]) -> Result<(), ConstructionError> {
    for (i, (n1, m1)) in maps.iter().enumerate() {
        for (n2, m2) in &maps[i + 1..] {
            if let Some(j) = m1.commutation_witness(m2)? {
                return Err(ConstructionError::Precondition {
                    anchor: anchor.to_string(),
                    hypothesis: format!("{n1} and {n2} commute"),
                    witness: format!("differ on e{}", j + 1),
                });
            }
        }
    }
    Ok(())
}

fn same_variety(a: &AlgebraPresentation, b: &AlgebraPresentation) -> Result<(), ConstructionError> {
    if a.variety != b.variety {
        return Err(ConstructionError::VarietyMismatch(a.variety, b.variety));
    }
    Ok(())
}

fn map_products(
    a: &AlgebraPresentation,
    f: impl Fn(&Tensor3) -> Result<Tensor3, ShapeError>,
) -> Result<Vec<(String, Tensor3)>, ShapeError> {
    a.products.iter().map(|(n, t)| Ok((n.clone(), f(t)?))).collect()
}

fn opts() -> CheckOptions {
    CheckOptions::default()
}

/// Block-diagonal sum: no mixed products, maps act blockwise.
pub fn direct_sum(a: &AlgebraPresentation, b: &AlgebraPresentation) -> Result<AlgebraPresentation, ConstructionError> {
    same_variety(a, b)?;
    let products = a
        .products
        .iter()
        .zip(&b.products)
        .map(|((n, s), (_, t))| (n.clone(), s.block_sum(t)))
        .collect();
    Ok(AlgebraPresentation::new(
        &format!("{}+{}", a.name, b.name),
        a.variety,
        a.alpha.block_diag(&b.alpha),
        a.beta.block_diag(&b.beta),
        products,
    )?)
}

/// Componentwise products on `A ⊗ B`; basis `e_i ⊗ f_k` has index `i·dim B + k`.
pub fn tensor_product(a: &AlgebraPresentation, b: &AlgebraPresentation) -> Result<AlgebraPresentation, ConstructionError> {
    same_variety(a, b)?;
    let products = a
        .products
        .iter()
        .zip(&b.products)
        .map(|((n, s), (_, t))| (n.clone(), s.kron(t)))
        .collect();
    Ok(AlgebraPresentation::new(
        &format!("{}*{}", a.name, b.name),
        a.variety,
        a.alpha.kron(&b.alpha),
        a.beta.kron(&b.beta),
        products,
    )?)
}

/// Checks that `f` is an endomorphism of `a` (multiplicative for every
/// product and commuting with both twisting maps).
pub fn check_endomorphism(a: &AlgebraPresentation, f: &Matrix) -> Result<Vec<CheckReport>, ConstructionError> {
    check_morphism(f, a, a)
}

/// Yau twist by endomorphisms `alpha_p`, `beta_p` with exponent `p`:
/// products `μ ∘ (α'^p ⊗ β'^p)`, maps `α'^p α` and `β'^p β`.
pub fn yau_twist(
    a: &AlgebraPresentation,
    alpha_p: &Matrix,
    beta_p: &Matrix,
    p: u64,
) -> Result<AlgebraPresentation, ConstructionError> {
    const ANCHOR: &str = "the Yau twisting theorem";
    require_commuting(
        ANCHOR,
        &[("alpha", &a.alpha), ("beta", &a.beta), ("alpha'", alpha_p), ("beta'", beta_p)],
    )?;
    for (name, f) in [("alpha'", alpha_p), ("beta'", beta_p)] {
        let reps = check_endomorphism(a, f)?;
        if let Some(r) = reps.iter().find(|r| !r.passed()) {
            return Err(ConstructionError::Precondition {
                anchor: ANCHOR.into(),
                hypothesis: format!("{name} is an endomorphism ({})", r.identity),
                witness: r.failures.first().map(describe_failure).unwrap_or_default(),
            });
        }
    }
    let (ap, bp) = (alpha_p.pow(p)?, beta_p.pow(p)?);
    Ok(AlgebraPresentation::new(
        &format!("twist({}, {p})", a.name),
        a.variety,
        ap.compose(&a.alpha)?,
        bp.compose(&a.beta)?,
        map_products(a, |t| t.precompose(&ap, &bp))?,
    )?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivedType {
    One,
    Two,
}

/// Derived algebra of type 1 (`μ∘(α^k⊗β^k)`, maps `α^{k+1}`, `β^{k+1}`) or
/// type 2 (`μ∘(α^{2^k−1}⊗β^{2^k−1})`, maps `α^{2^k}`, `β^{2^k}`).
pub fn derived_algebra(a: &AlgebraPresentation, k: u32, ty: DerivedType) -> Result<AlgebraPresentation, ConstructionError> {
    let e: u64 = match ty {
        DerivedType::One => k as u64,
        DerivedType::Two => 1u64.checked_shl(k).filter(|_| k < 64).ok_or(ConstructionError::Overflow(k))? - 1,
    };
    let (ae, be) = (a.alpha.pow(e)?, a.beta.pow(e)?);
    // named by the exponent so that coinciding derived algebras print identically
    Ok(AlgebraPresentation::new(
        &format!("derived({}, {e})", a.name),
        a.variety,
        ae.compose(&a.alpha)?,
        be.compose(&a.beta)?,
        map_products(a, |t| t.precompose(&ae, &be))?,
    )?)
}

/// Runs the operator's identity set (condition plus commutation with α, β).
pub fn check_operator(op: &OperatorPresentation) -> Result<Vec<CheckReport>, ConstructionError> {
    Ok(op.check(Variant::AsPrinted, &opts())?.0)
}

/// Centroid twist: products `μ(γ₂γ₁x, y)`, maps `γ₁α`, `γ₂β`, with the
/// Rota-Baxter operator carried over unchanged.
pub fn centroid_twist(
    r: &OperatorPresentation,
    gamma1: &Matrix,
    gamma2: &Matrix,
) -> Result<(AlgebraPresentation, OperatorPresentation), ConstructionError> {
    const ANCHOR: &str = "the centroid twisting theorem";
    let a = &r.base;
    if !matches!(r.kind, OperatorKind::RotaBaxter { .. }) {
        return Err(ConstructionError::Precondition {
            anchor: ANCHOR.into(),
            hypothesis: "R is a Rota-Baxter operator".into(),
            witness: format!("operator kind is {}", r.kind.keyword()),
        });
    }
    require_pass(ANCHOR, &check_operator(r)?)?;
    for (name, g) in [("gamma1", gamma1), ("gamma2", gamma2)] {
        let op = OperatorPresentation::new(name, a.clone(), g.clone(), OperatorKind::Centroid)?;
        require_pass(&format!("{ANCHOR} ({name} in the centroid)"), &check_operator(&op)?)?;
    }
    require_commuting(ANCHOR, &[("gamma1", gamma1), ("gamma2", gamma2), ("R", &r.op)])?;
    let g = gamma2.compose(gamma1)?;
    let id = Matrix::identity(a.dim);
    let twisted = AlgebraPresentation::new(
        &format!("ctwist({})", a.name),
        a.variety,
        gamma1.compose(&a.alpha)?,
        gamma2.compose(&a.beta)?,
        map_products(a, |t| t.precompose(&g, &id))?,
    )?;
    let r2 = OperatorPresentation::new(&r.name, twisted.clone(), r.op.clone(), r.kind.clone())?;
    Ok((twisted, r2))
}

/// Tridendriform splitting by a Rota-Baxter operator of weight λ on a
/// BiHom-associative algebra: `x⊣y = x·R(y)`, `x⊢y = R(x)·y`, `x·'y = λ x·y`.
pub fn rb_tridendriform(r: &OperatorPresentation) -> Result<AlgebraPresentation, ConstructionError> {
    let a = &r.base;
    if a.variety != Variety::Associative {
        return Err(ConstructionError::WrongVariety {
            construction: "rb-split",
            expected: "bihom-associative",
            found: a.variety,
        });
    }
    let OperatorKind::RotaBaxter { weight } = &r.kind else {
        return Err(ConstructionError::Precondition {
            anchor: "the Rota-Baxter splitting theorem".into(),
            hypothesis: "R is a Rota-Baxter operator".into(),
            witness: format!("operator kind is {}", r.kind.keyword()),
        });
    };
    require_pass("the Rota-Baxter splitting theorem", &check_operator(r)?)?;
    let mu = a.product("mul");
    let id = Matrix::identity(a.dim);
    Ok(AlgebraPresentation::new(
        &format!("rbsplit({}, {})", a.name, r.name),
        Variety::Tridendriform,
        a.alpha.clone(),
        a.beta.clone(),
        vec![
            ("dl".into(), mu.precompose(&id, &r.op)?),
            ("dr".into(), mu.precompose(&r.op, &id)?),
            ("dot".into(), mu.scale(weight)),
        ],
    )?)
}

/// Dialgebra from averaging twisting maps: `x⊢y = α(x)·β(y)`, `x⊣y = β(x)·α(y)`.
pub fn averaging_dialgebra(a: &AlgebraPresentation) -> Result<AlgebraPresentation, ConstructionError> {
    if a.variety != Variety::Associative {
        return Err(ConstructionError::WrongVariety {
            construction: "avg-dialgebra",
            expected: "bihom-associative",
            found: a.variety,
        });
    }
    for (name, m) in [("alpha", &a.alpha), ("beta", &a.beta)] {
        let op = OperatorPresentation::new(name, a.clone(), m.clone(), OperatorKind::Averaging)?;
        require_pass(&format!("the averaging dialgebra theorem ({name} is averaging)"), &check_operator(&op)?)?;
    }
    let mu = a.product("mul");
    Ok(AlgebraPresentation::new(
        &format!("avg({})", a.name),
        Variety::AssocDialgebra,
        a.alpha.clone(),
        a.beta.clone(),
        vec![
            ("dl".into(), mu.precompose(&a.beta, &a.alpha)?),
            ("dr".into(), mu.precompose(&a.alpha, &a.beta)?),
        ],
    )?)
}

/// Dendriform algebra `(⊣, ⊢ + ·)` of a tridendriform algebra.
pub fn tridend_to_dend(t: &AlgebraPresentation) -> Result<AlgebraPresentation, ConstructionError> {
    if t.variety != Variety::Tridendriform {
        return Err(ConstructionError::WrongVariety {
            construction: "to-dend",
            expected: "bihom-tridendriform",
            found: t.variety,
        });
    }
    Ok(AlgebraPresentation::new(
        &format!("dend({})", t.name),
        Variety::Dendriform,
        t.alpha.clone(),
        t.beta.clone(),
        vec![
            ("dl".into(), t.product("dl").clone()),
            ("dr".into(), t.product("dr").add(t.product("dot"))?),
        ],
    )?)
}

/// BiHom-associative algebra with the sum of all products of a dendriform
/// or tridendriform algebra.
pub fn sum_to_associative(x: &AlgebraPresentation) -> Result<AlgebraPresentation, ConstructionError> {
    if !matches!(x.variety, Variety::Dendriform | Variety::Tridendriform) {
        return Err(ConstructionError::WrongVariety {
            construction: "to-assoc",
            expected: "bihom-dendriform or bihom-tridendriform",
            found: x.variety,
        });
    }
    let mut sum = Tensor3::square(x.dim);
    for (_, t) in &x.products {
        sum = sum.add(t)?;
    }
    Ok(AlgebraPresentation::new(
        &format!("assoc({})", x.name),
        Variety::Associative,
        x.alpha.clone(),
        x.beta.clone(),
        vec![("mul".into(), sum)],
    )?)
}

/// Reports bundled by [`dialgebra_views`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DialgebraViews {
    pub ls_dialgebra: Vec<CheckReport>,
    pub assoc_dialgebra: Vec<CheckReport>,
    pub dl_associative: Vec<CheckReport>,
    pub dr_associative: Vec<CheckReport>,
    /// Present when both products coincide.
    pub single_product: Option<Vec<CheckReport>>,
}

fn single(a: &AlgebraPresentation, t: &Tensor3, name: &str) -> AlgebraPresentation {
    AlgebraPresentation {
        name: format!("{}[{name}]", a.name),
        variety: Variety::Associative,
        dim: a.dim,
        alpha: a.alpha.clone(),
        beta: a.beta.clone(),
        products: vec![("mul".into(), t.clone())],
    }
}

/// Checks a two-product algebra against both dialgebra sets and each product
/// against BiHom-associativity.
pub fn dialgebra_views(d: &AlgebraPresentation, variant: Variant) -> Result<DialgebraViews, ConstructionError> {
    if !matches!(d.variety, Variety::LsDialgebra | Variety::AssocDialgebra) {
        return Err(ConstructionError::WrongVariety {
            construction: "dialgebra views",
            expected: "a dialgebra",
            found: d.variety,
        });
    }
    let o = opts();
    let run = |v: Variety| -> Result<Vec<CheckReport>, ConstructionError> {
        Ok(d.as_variety(v)?.check(variant, &o)?.0)
    };
    let (dl, dr) = (d.product("dl"), d.product("dr"));
    Ok(DialgebraViews {
        ls_dialgebra: run(Variety::LsDialgebra)?,
        assoc_dialgebra: run(Variety::AssocDialgebra)?,
        dl_associative: single(d, dl, "dl").check(variant, &o)?.0,
        dr_associative: single(d, dr, "dr").check(variant, &o)?.0,
        single_product: if dl == dr {
            Some(single(d, dl, "dl").check(variant, &o)?.0)
        } else {
            None
        },
    })
}

/// Swaps the twisting maps of an involutive dialgebra.
pub fn involution_swap(d: &AlgebraPresentation) -> Result<AlgebraPresentation, ConstructionError> {
    const ANCHOR: &str = "the involution isomorphism";
    let id = Matrix::identity(d.dim);
    for (name, m) in [
        ("alpha^2 = id", d.alpha.compose(&d.alpha)?),
        ("beta^2 = id", d.beta.compose(&d.beta)?),
        ("alpha.beta = id", d.alpha.compose(&d.beta)?),
        ("beta.alpha = id", d.beta.compose(&d.alpha)?),
    ] {
        if let Some(j) = (0..d.dim).find(|&j| m.column(j) != id.column(j)) {
            return Err(ConstructionError::Precondition {
                anchor: ANCHOR.into(),
                hypothesis: name.into(),
                witness: format!("fails on e{}", j + 1),
            });
        }
    }
    let mut out = d.clone();
    std::mem::swap(&mut out.alpha, &mut out.beta);
    out.name = format!("swap({})", d.name);
    Ok(out)
}

/// Morphism conditions for `f: a -> b`, one report per condition and product.
pub fn check_morphism(
    f: &Matrix,
    a: &AlgebraPresentation,
    b: &AlgebraPresentation,
) -> Result<Vec<CheckReport>, ConstructionError> {
    same_variety(a, b)?;
    if f.rows() != b.dim || f.cols() != a.dim {
        return Err(ShapeError::Mismatch {
            op: "morphism",
            expected: format!("{}x{}", b.dim, a.dim),
            found: format!("{}x{}", f.rows(), f.cols()),
        }
        .into());
    }
    let (set, _) = builtin_identity_set("morphism", Variant::AsPrinted)?;
    let set = set.specialize_products("mul", a.variety.products());
    Ok(check_identities(&set, &morphism_binding(f, a, b), &opts())?)
}

fn closure_report(name: String, tuples: u64, failures: Vec<Failure>) -> CheckReport {
    CheckReport {
        identity: name,
        status: if failures.is_empty() { Status::Pass } else { Status::Fail },
        tuples_checked: tuples,
        failures,
        mode: Mode::Exhaustive,
    }
}

fn cap(mut v: Vec<Failure>) -> Vec<Failure> {
    v.truncate(crate::eval::DEFAULT_FAILURE_CAP);
    v
}

/// Closure of the graph `{x + f(x)}` inside `A ⊕ B` under every product and
/// both twisting maps, by exact membership.
pub fn graph_check(
    f: &Matrix,
    a: &AlgebraPresentation,
    b: &AlgebraPresentation,
) -> Result<Vec<CheckReport>, ConstructionError> {
    same_variety(a, b)?;
    let sum = direct_sum(a, b)?;
    let gens: Vec<Vec<Scalar>> = (0..a.dim)
        .map(|j| {
            let mut v = basis_vector(a.dim, j);
            v.extend(f.apply(&basis_vector(a.dim, j))?);
            Ok(v)
        })
        .collect::<Result<_, ShapeError>>()?;
    let graph = Subspace::span(sum.dim, &gens);
    let mut reports = Vec::new();
    for (p, t) in &sum.products {
        let mut fails = Vec::new();
        for (i, gi) in gens.iter().enumerate() {
            for (j, gj) in gens.iter().enumerate() {
                let rest = graph.reduce(&t.apply(gi, gj)?);
                if rest.iter().any(|c| !c.is_zero()) {
                    fails.push(Failure {
                        tuple: vec![("x".into(), i), ("y".into(), j)],
                        residual: rest,
                    });
                }
            }
        }
        reports.push(closure_report(format!("graph-closure[{p}]"), (a.dim * a.dim) as u64, cap(fails)));
    }
    for (name, m) in [("alpha", &sum.alpha), ("beta", &sum.beta)] {
        let mut fails = Vec::new();
        for (i, g) in gens.iter().enumerate() {
            let rest = graph.reduce(&m.apply(g)?);
            if rest.iter().any(|c| !c.is_zero()) {
                fails.push(Failure {
                    tuple: vec![("x".into(), i)],
                    residual: rest,
                });
            }
        }
        reports.push(closure_report(format!("graph-closure[{name}]"), a.dim as u64, cap(fails)));
    }
    Ok(reports)
}

/// Result of [`ideal_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealReport {
    pub reports: Vec<CheckReport>,
    pub rank: usize,
    /// Input vectors dropped as linearly dependent on earlier ones.
    pub dropped: usize,
}

/// Two-sided BiHom-ideal test: `α(H), β(H) ⊆ H` and `μ(A, H), μ(H, A) ⊆ H`
/// for every product. Failure tuples name an `A` basis element `x` and the
/// index `h` of a generator among the independent inputs.
pub fn ideal_check(a: &AlgebraPresentation, basis: &[Vec<Scalar>]) -> Result<IdealReport, ConstructionError> {
    let mut h = Subspace::new(a.dim);
    let mut gens = Vec::new();
    for v in basis {
        if v.len() != a.dim {
            return Err(ShapeError::Mismatch {
                op: "ideal generator",
                expected: a.dim.to_string(),
                found: v.len().to_string(),
            }
            .into());
        }
        if h.insert(v) {
            gens.push(v.clone());
        }
    }
    let outside = |v: &[Scalar]| {
        let r = h.reduce(v);
        r.iter().any(|c| !c.is_zero()).then_some(r)
    };
    let mut reports = Vec::new();
    for (name, m) in [("alpha", &a.alpha), ("beta", &a.beta)] {
        let mut fails = Vec::new();
        for (j, g) in gens.iter().enumerate() {
            if let Some(r) = outside(&m.apply(g)?) {
                fails.push(Failure {
                    tuple: vec![("h".into(), j)],
                    residual: r,
                });
            }
        }
        reports.push(closure_report(format!("ideal[{name}]"), gens.len() as u64, cap(fails)));
    }
    for (p, t) in &a.products {
        for left in [true, false] {
            let mut fails = Vec::new();
            for i in 0..a.dim {
                let x = basis_vector(a.dim, i);
                for (j, g) in gens.iter().enumerate() {
                    let v = if left { t.apply(&x, g)? } else { t.apply(g, &x)? };
                    if let Some(r) = outside(&v) {
                        fails.push(Failure {
                            tuple: vec![("x".into(), i), ("h".into(), j)],
                            residual: r,
                        });
                    }
                }
            }
            let side = if left { "A*H" } else { "H*A" };
            reports.push(closure_report(
                format!("ideal[{p}:{side}]"),
                (a.dim * gens.len()) as u64,
                cap(fails),
            ));
        }
    }
    Ok(IdealReport {
        reports,
        rank: gens.len(),
        dropped: basis.len() - gens.len(),
    })
}

/// Variety check of `a` through its built-in set, for callers that only want
/// the verdict list.
pub fn verify(a: &AlgebraPresentation, variant: Variant) -> Result<Vec<CheckReport>, ConstructionError> {
    Ok(check_builtin(a.variety.tag(), variant, &a.binding(), &opts())?.0)
}
