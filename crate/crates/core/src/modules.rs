//! Bimodules, semidirect sums, dual and twisted bimodules, matched pairs.

use crate::axioms::{builtin_identity_set, Variant};
use crate::constructions::{check_endomorphism, describe_failure, require_commuting, require_pass, ConstructionError};
use crate::eval::{check_identities, CheckOptions, CheckReport};
use crate::exact::{Matrix, Tensor3};
use crate::structures::{
    check_builtin, AlgebraPresentation, BimodulePresentation, MatchedPairPresentation, Variety,
};

fn opts() -> CheckOptions {
    CheckOptions::default()
}

/// Reports of the variety's bimodule set on `m`, with the transcription used.
pub fn check_bimodule(m: &BimodulePresentation, variant: Variant) -> Result<(Vec<CheckReport>, Variant), ConstructionError> {
    Ok(m.check(variant, &opts())?)
}

/// Index ranges of the two summands in a block algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Blocks {
    pub first: std::ops::Range<usize>,
    pub second: std::ops::Range<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemidirectResult {
    pub algebra: AlgebraPresentation,
    pub blocks: Blocks,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchedSumResult {
    pub algebra: AlgebraPresentation,
    pub blocks: Blocks,
}

fn action_names(variety: Variety, product: &str) -> (String, String) {
    if variety.products().len() == 1 {
        ("l".into(), "r".into())
    } else {
        (format!("l_{product}"), format!("r_{product}"))
    }
}

fn family<'a>(actions: &'a [(String, Vec<Matrix>)], name: &str) -> &'a [Matrix] {
    &actions.iter().find(|a| a.0 == name).unwrap_or_else(|| panic!("no action `{name}`")).1
}

/// Product table on `A ⊕ B` given both tables and the cross actions:
/// `(x + a)(y + b) = xy + l_B(a)y + r_B(b)x + ab + l_A(x)b + r_A(y)a`.
fn block_product(
    ta: &Tensor3,
    tb: &Tensor3,
    on_b: (&[Matrix], &[Matrix]),
    on_a: (&[Matrix], &[Matrix]),
) -> Tensor3 {
    let (n, d) = (ta.out_dim(), tb.out_dim());
    let mut t = ta.block_sum(tb);
    let (l_a, r_a) = on_b;
    let (l_b, r_b) = on_a;
    // x ∈ A, b ∈ B: x·b = l_A(x)b + r_B(b)x
    for i in 0..n {
        for j in 0..d {
            for k in 0..d {
                t.set(n + k, i, n + j, l_a[i].get(k, j).clone());
            }
            for k in 0..n {
                t.set(k, i, n + j, r_b[j].get(k, i).clone());
            }
        }
    }
    // a ∈ B, y ∈ A: a·y = l_B(a)y + r_A(y)a
    for j in 0..d {
        for i in 0..n {
            for k in 0..n {
                t.set(k, n + j, i, l_b[j].get(k, i).clone());
            }
            for k in 0..d {
                t.set(n + k, n + j, i, r_a[i].get(k, j).clone());
            }
        }
    }
    t
}

/// Semidirect (split null) extension `A ⊕ V` of a bimodule.
pub fn semidirect(m: &BimodulePresentation, variant: Variant) -> Result<SemidirectResult, ConstructionError> {
    let (reps, used) = check_bimodule(m, variant)?;
    require_pass(&format!("the semidirect sum ({} transcription)", used), &reps)?;
    Ok(semidirect_unchecked(m))
}

/// Semidirect table without the bimodule precheck.
pub fn semidirect_unchecked(m: &BimodulePresentation) -> SemidirectResult {
    let base = &m.base;
    let zero_v = vec![Matrix::zeros(base.dim, base.dim); m.dim];
    let products = base
        .products
        .iter()
        .map(|(p, t)| {
            let (l, r) = action_names(base.variety, p);
            let tv = Tensor3::square(m.dim);
            (p.clone(), block_product(t, &tv, (m.action(&l), m.action(&r)), (&zero_v, &zero_v)))
        })
        .collect();
    let algebra = AlgebraPresentation {
        name: format!("{}|x{}", base.name, m.name),
        variety: base.variety,
        dim: base.dim + m.dim,
        alpha: base.alpha.block_diag(&m.beta1),
        beta: base.beta.block_diag(&m.beta2),
        products,
    };
    SemidirectResult {
        algebra,
        blocks: Blocks {
            first: 0..base.dim,
            second: base.dim..base.dim + m.dim,
        },
    }
}

/// Dual bimodule on `V*`: every action matrix and both module maps transposed.
/// The variety's precondition set must pass on `m` first.
pub fn dual_bimodule(m: &BimodulePresentation, variant: Variant) -> Result<BimodulePresentation, ConstructionError> {
    let tag = m.base.variety.dual_tag().ok_or(ConstructionError::WrongVariety {
        construction: "dual-bimodule",
        expected: "ls-dialgebra or bihom-tridendriform",
        found: m.base.variety,
    })?;
    let (reps, used) = check_builtin(&tag, variant, &m.binding(), &opts())?;
    require_pass(&format!("the dual bimodule proposition ({used} transcription)"), &reps)?;
    Ok(transpose_bimodule(m))
}

/// The transposed presentation, with no precondition check.
pub fn transpose_bimodule(m: &BimodulePresentation) -> BimodulePresentation {
    BimodulePresentation {
        name: format!("dual({})", m.name),
        base: m.base.clone(),
        dim: m.dim,
        beta1: m.beta1.transpose(),
        beta2: m.beta2.transpose(),
        actions: m
            .actions
            .iter()
            .map(|(n, fam)| (n.clone(), fam.iter().map(Matrix::transpose).collect()))
            .collect(),
    }
}

/// Family `x ↦ M(f x)` as matrices per basis element.
fn precompose_family(fam: &[Matrix], f: &Matrix) -> Vec<Matrix> {
    let n = fam.len();
    (0..n)
        .map(|j| {
            let d = fam[0].rows();
            let mut acc = Matrix::zeros(d, d);
            for (i, m) in fam.iter().enumerate() {
                let c = f.get(i, j);
                if !c.is_zero() {
                    acc = acc.add(&m.scale(c)).expect("same shape");
                }
            }
            acc
        })
        .collect()
}

/// Twisted pair: base products `p(α'₁x, α'₂y)` with maps `α₁α'₁`, `α₂α'₂`,
/// actions `l̃(x) = l(α'₁x)β'₂`, `r̃(x) = r(α'₂x)β'₁` and module maps
/// `β₁β'₁`, `β₂β'₂`.
pub fn twist_bimodule(
    m: &BimodulePresentation,
    alpha1_p: &Matrix,
    alpha2_p: &Matrix,
    beta1_p: &Matrix,
    beta2_p: &Matrix,
) -> Result<(AlgebraPresentation, BimodulePresentation), ConstructionError> {
    const ANCHOR: &str = "the twisted bimodule theorem";
    let a = &m.base;
    require_commuting(
        ANCHOR,
        &[("alpha1", &a.alpha), ("alpha1'", alpha1_p), ("alpha2", &a.beta), ("alpha2'", alpha2_p)],
    )?;
    require_commuting(
        ANCHOR,
        &[("beta1", &m.beta1), ("beta1'", beta1_p), ("beta2", &m.beta2), ("beta2'", beta2_p)],
    )?;
    for (name, f) in [("alpha1'", alpha1_p), ("alpha2'", alpha2_p)] {
        if let Some(r) = check_endomorphism(a, f)?.iter().find(|r| !r.passed()) {
            return Err(ConstructionError::Precondition {
                anchor: ANCHOR.into(),
                hypothesis: format!("{name} is an endomorphism ({})", r.identity),
                witness: r.failures.first().map(describe_failure).unwrap_or_default(),
            });
        }
    }
    // β'_i ∘ ρ(x) = ρ(α'_i x) ∘ β'_i for every action ρ
    for (n, fam) in &m.actions {
        for (i, (ap, bp)) in [(alpha1_p, beta1_p), (alpha2_p, beta2_p)].into_iter().enumerate() {
            let moved = precompose_family(fam, ap);
            for (j, (mj, mm)) in fam.iter().zip(&moved).enumerate() {
                if bp.compose(mj)? != mm.compose(bp)? {
                    return Err(ConstructionError::Precondition {
                        anchor: ANCHOR.into(),
                        hypothesis: format!("beta{}' o {n} = ({n} o alpha{}') beta{}'", i + 1, i + 1, i + 1),
                        witness: format!("fails at x=e{}", j + 1),
                    });
                }
            }
        }
    }
    let base = AlgebraPresentation::new(
        &format!("twist({})", a.name),
        a.variety,
        a.alpha.compose(alpha1_p)?,
        a.beta.compose(alpha2_p)?,
        a.products
            .iter()
            .map(|(p, t)| Ok((p.clone(), t.precompose(alpha1_p, alpha2_p)?)))
            .collect::<Result<_, ConstructionError>>()?,
    )?;
    let actions = m
        .actions
        .iter()
        .map(|(n, fam)| {
            let (ap, bp) = if n.starts_with('l') { (alpha1_p, beta2_p) } else { (alpha2_p, beta1_p) };
            let fam = precompose_family(fam, ap).iter().map(|x| x.compose(bp)).collect::<Result<_, _>>()?;
            Ok((n.clone(), fam))
        })
        .collect::<Result<_, ConstructionError>>()?;
    let module = BimodulePresentation::new(
        &format!("twist({})", m.name),
        base.clone(),
        m.beta1.compose(beta1_p)?,
        m.beta2.compose(beta2_p)?,
        actions,
    )?;
    Ok((base, module))
}

/// Layered matched-pair report: constituents, both bimodules, then the cross
/// equations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchedPairReport {
    pub variant: Variant,
    pub a: Vec<CheckReport>,
    pub b: Vec<CheckReport>,
    pub on_b: Vec<CheckReport>,
    pub on_a: Vec<CheckReport>,
    pub cross: Vec<CheckReport>,
}

impl MatchedPairReport {
    pub fn layers(&self) -> [(&'static str, &[CheckReport]); 5] {
        [
            ("A", &self.a),
            ("B", &self.b),
            ("A-on-B bimodule", &self.on_b),
            ("B-on-A bimodule", &self.on_a),
            ("cross equations", &self.cross),
        ]
    }

    pub fn passed(&self) -> bool {
        self.layers().iter().all(|(_, r)| r.iter().all(CheckReport::passed))
    }
}

pub fn check_matched_pair(p: &MatchedPairPresentation, variant: Variant) -> Result<MatchedPairReport, ConstructionError> {
    let o = opts();
    let (cross, used) = p.check(variant, &o)?;
    Ok(MatchedPairReport {
        variant: used,
        a: p.a.check(variant, &o)?.0,
        b: p.b.check(variant, &o)?.0,
        on_b: p.on_b_bimodule().check(variant, &o)?.0,
        on_a: p.on_a_bimodule().check(variant, &o)?.0,
        cross,
    })
}

/// Algebra on `A ⊕ B` from a matched pair, without any precheck.
pub fn matched_sum_unchecked(p: &MatchedPairPresentation) -> MatchedSumResult {
    let v = p.variety();
    let products = p
        .a
        .products
        .iter()
        .zip(&p.b.products)
        .map(|((name, ta), (_, tb))| {
            let (l, r) = action_names(v, name);
            (
                name.clone(),
                block_product(ta, tb, (family(&p.on_b, &l), family(&p.on_b, &r)), (family(&p.on_a, &l), family(&p.on_a, &r))),
            )
        })
        .collect();
    MatchedSumResult {
        algebra: AlgebraPresentation {
            name: format!("{}#{}", p.a.name, p.b.name),
            variety: v,
            dim: p.a.dim + p.b.dim,
            alpha: p.a.alpha.block_diag(&p.b.alpha),
            beta: p.a.beta.block_diag(&p.b.beta),
            products,
        },
        blocks: Blocks {
            first: 0..p.a.dim,
            second: p.a.dim..p.a.dim + p.b.dim,
        },
    }
}

/// Algebra on `A ⊕ B`; the layered matched-pair check must pass first.
pub fn matched_sum(p: &MatchedPairPresentation, variant: Variant) -> Result<MatchedSumResult, ConstructionError> {
    let rep = check_matched_pair(p, variant)?;
    for (layer, reps) in rep.layers() {
        require_pass(&format!("the matched pair theorem ({layer}, {} transcription)", rep.variant), reps)?;
    }
    Ok(matched_sum_unchecked(p))
}

fn sum_families(actions: &[(String, Vec<Matrix>)], prefix: &str, dim: usize, len: usize) -> Vec<Matrix> {
    let mut acc = vec![Matrix::zeros(dim, dim); len];
    for (n, fam) in actions {
        if n.starts_with(prefix) {
            for (a, m) in acc.iter_mut().zip(fam) {
                *a = a.add(m).expect("same shape");
            }
        }
    }
    acc
}

/// Summed actions `l = l_dl + l_dr (+ l_dot)`, `r` likewise.
pub fn sum_actions(actions: &[(String, Vec<Matrix>)], dim: usize, len: usize) -> Vec<(String, Vec<Matrix>)> {
    vec![
        ("l".into(), sum_families(actions, "l_", dim, len)),
        ("r".into(), sum_families(actions, "r_", dim, len)),
    ]
}

/// Bimodule of the summed product from a dendriform or tridendriform bimodule.
pub fn sum_bimodule(m: &BimodulePresentation) -> Result<BimodulePresentation, ConstructionError> {
    let base = crate::constructions::sum_to_associative(&m.base)?;
    Ok(BimodulePresentation::new(
        &format!("sum({})", m.name),
        base,
        m.beta1.clone(),
        m.beta2.clone(),
        sum_actions(&m.actions, m.dim, m.base.dim),
    )?)
}

/// Associated BiHom-associative matched pair of a tridendriform one.
pub fn matched_to_associative(p: &MatchedPairPresentation, variant: Variant) -> Result<MatchedPairPresentation, ConstructionError> {
    if p.variety() != Variety::Tridendriform {
        return Err(ConstructionError::WrongVariety {
            construction: "matched-to-associative",
            expected: "bihom-tridendriform",
            found: p.variety(),
        });
    }
    let rep = check_matched_pair(p, variant)?;
    for (layer, reps) in rep.layers() {
        require_pass(&format!("the associated matched pair corollary ({layer})"), reps)?;
    }
    Ok(MatchedPairPresentation::new(
        &format!("assoc({})", p.name),
        crate::constructions::sum_to_associative(&p.a)?,
        crate::constructions::sum_to_associative(&p.b)?,
        sum_actions(&p.on_b, p.b.dim, p.a.dim),
        sum_actions(&p.on_a, p.a.dim, p.b.dim),
    )?)
}

/// Runs a built-in set by tag against the bimodule binding of `m`.
pub fn check_bimodule_set(m: &BimodulePresentation, tag: &str, variant: Variant) -> Result<(Vec<CheckReport>, Variant), ConstructionError> {
    let (set, used) = builtin_identity_set(tag, variant)?;
    Ok((check_identities(set, &m.binding(), &opts())?, used))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{averaging_dialgebra, direct_sum, rb_tridendriform, verify};
    use crate::eval::{all_pass, failing};
    use crate::exact::Scalar;
    use crate::structures::fixtures::*;

    fn ok(r: &[CheckReport]) -> bool {
        if !all_pass(r) {
            eprintln!("failing: {:?}", failing(r));
        }
        all_pass(r)
    }

    #[test]
    fn regular_bimodules_and_semidirect() {
        for a in [k1(), n2(), n2_sigma(&Scalar::from_int(3))] {
            let m = BimodulePresentation::regular(&a);
            assert!(ok(&check_bimodule(&m, Variant::AsPrinted).unwrap().0), "{}", a.name);
            let s = semidirect(&m, Variant::AsPrinted).unwrap();
            assert!(ok(&verify(&s.algebra, Variant::AsPrinted).unwrap()));
        }
    }

    #[test]
    fn zero_bimodule_semidirect_is_direct_sum() {
        let a = n2();
        let s = semidirect(&BimodulePresentation::zero(&a, 2), Variant::AsPrinted).unwrap();
        let d = direct_sum(&a, &zero(2)).unwrap();
        assert_eq!(s.algebra.products, d.products);
        assert_eq!(s.algebra.alpha, d.alpha);
    }

    #[test]
    fn tridendriform_regular_bimodule() {
        let t = rb_tridendriform(&rb1(&Scalar::from_int(2))).unwrap();
        let m = BimodulePresentation::regular(&t);
        assert!(ok(&check_bimodule(&m, Variant::Corrected).unwrap().0));
        let s = semidirect(&m, Variant::Corrected).unwrap();
        assert!(ok(&verify(&s.algebra, Variant::Corrected).unwrap()));
        let summed = sum_bimodule(&m).unwrap();
        assert_eq!(summed.actions, BimodulePresentation::regular(&summed.base).actions);
    }

    #[test]
    fn dialgebra_regular_bimodule() {
        let d = averaging_dialgebra(&n2()).unwrap();
        let m = BimodulePresentation::regular(&d);
        assert!(ok(&check_bimodule(&m, Variant::Corrected).unwrap().0));
    }

    #[test]
    fn zero_b_matched_pair_equals_semidirect() {
        let a = n2();
        let m = BimodulePresentation::regular(&a);
        let b = zero(2);
        let p = MatchedPairPresentation::new(
            "p",
            a.clone(),
            b.clone(),
            m.actions.clone(),
            BimodulePresentation::zero(&b, 2).actions,
        );
        // the regular module of N2 has identity maps, as does Z2
        let p = p.unwrap();
        let rep = check_matched_pair(&p, Variant::AsPrinted).unwrap();
        assert!(rep.passed(), "{:?}", rep.layers().map(|(n, r)| (n, failing(r).join(","))));
        let sum = matched_sum(&p, Variant::AsPrinted).unwrap();
        let semi = semidirect(&m, Variant::AsPrinted).unwrap();
        assert_eq!(sum.algebra.products, semi.algebra.products);
    }

    #[test]
    fn dual_is_an_involution() {
        let t = rb_tridendriform(&rb1(&Scalar::from_int(2))).unwrap();
        let m = BimodulePresentation::regular(&t);
        let back = transpose_bimodule(&transpose_bimodule(&m));
        assert_eq!(back.actions, m.actions);
        assert_eq!(back.beta1, m.beta1);
    }

    #[test]
    fn identity_twist_is_trivial() {
        let m = BimodulePresentation::regular(&n2());
        let id = Matrix::identity(2);
        let (a, t) = twist_bimodule(&m, &id, &id, &id, &id).unwrap();
        assert_eq!(a.products, m.base.products);
        assert_eq!(t.actions, m.actions);
    }
}
