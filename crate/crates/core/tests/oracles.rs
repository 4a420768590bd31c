//! Span oracles: a bimodule, matched-pair or dual-precondition set must agree
//! with the variety axioms of the algebra it is supposed to describe, both on
//! valid structures and on seeded single-entry mutations of them.

use bihom_core::axioms::{builtin_identity_set, Variant};
use bihom_core::constructions::{averaging_dialgebra, rb_tridendriform, tridend_to_dend};
use bihom_core::eval::{all_pass, check_identities, failing, CheckOptions, Mcg64, ModelBinding};
use bihom_core::exact::{Matrix, Scalar, Tensor3};
use bihom_core::modules::{matched_sum_unchecked, semidirect_unchecked, transpose_bimodule};
use bihom_core::structures::fixtures::{k1, n2, n2_sigma};
use bihom_core::structures::{
    AlgebraPresentation, BimodulePresentation, MatchedPairPresentation, OperatorKind, OperatorPresentation, Variety,
};

const MUTATIONS: usize = 16;

fn s(n: i64) -> Scalar {
    Scalar::from_int(n)
}

fn passes(tag: &str, b: &ModelBinding) -> (bool, Vec<String>) {
    let (set, _) = builtin_identity_set(tag, Variant::Corrected).unwrap();
    let reps = check_identities(set, b, &CheckOptions::default()).unwrap();
    (all_pass(&reps), failing(&reps).into_iter().map(String::from).collect())
}

fn rb_split(base: AlgebraPresentation, lambda: i64) -> AlgebraPresentation {
    let r = OperatorPresentation::new(
        "R",
        base.clone(),
        Matrix::scalar(base.dim, s(-lambda)),
        OperatorKind::RotaBaxter { weight: s(lambda) },
    )
    .unwrap();
    rb_tridendriform(&r).unwrap()
}

/// One passing algebra per variety, each at least two-dimensional.
fn bases() -> Vec<AlgebraPresentation> {
    let tri = rb_split(n2(), 1);
    let avg = averaging_dialgebra(&n2()).unwrap();
    vec![
        n2_sigma(&s(2)),
        n2().as_variety(Variety::LeftSymmetric).unwrap(),
        avg.as_variety(Variety::LsDialgebra).unwrap(),
        avg,
        tridend_to_dend(&tri).unwrap(),
        tri,
    ]
}

fn bump(m: &mut Matrix, rng: &mut Mcg64) {
    let (i, j) = (rng.below(m.rows()), rng.below(m.cols()));
    let v = m.get(i, j) + &s(1 + rng.below(2) as i64);
    m.set(i, j, v);
}

fn mutate_bimodule(m: &BimodulePresentation, rng: &mut Mcg64) -> BimodulePresentation {
    let mut m = m.clone();
    match rng.below(4) {
        0 => bump(&mut m.beta1, rng),
        1 => bump(&mut m.beta2, rng),
        _ => {
            let f = rng.below(m.actions.len());
            let e = rng.below(m.actions[f].1.len());
            bump(&mut m.actions[f].1[e], rng);
        }
    }
    m
}

fn bimodule_agrees(m: &BimodulePresentation) -> bool {
    let v = m.base.variety;
    let (set_ok, set_fail) = passes(&v.bimodule_tag(), &m.binding());
    let sd = semidirect_unchecked(m).algebra;
    let (sum_ok, sum_fail) = passes(v.tag(), &sd.binding());
    assert_eq!(
        set_ok, sum_ok,
        "{} over {}: bimodule set fails {set_fail:?}, semidirect sum fails {sum_fail:?}\n{m:?}",
        m.name, m.base.name
    );
    set_ok
}

#[test]
fn bimodule_sets_match_semidirect_sums() {
    let mut rng = Mcg64::new(11);
    for base in bases() {
        assert!(passes(base.variety.tag(), &base.binding()).0, "{} fails", base.name);
        let reg = BimodulePresentation::regular(&base);
        assert!(passes(&base.variety.bimodule_tag(), &reg.binding()).0, "regular bimodule of {}", base.name);
        assert!(bimodule_agrees(&reg));
        let broken = (0..MUTATIONS).filter(|_| !bimodule_agrees(&mutate_bimodule(&reg, &mut rng))).count();
        assert!(broken > 0, "no mutation of the regular bimodule of {} breaks it", base.name);
    }
}

/// `B` is the zero algebra with the regular module maps, acted on regularly.
fn zero_b_pair(a: &AlgebraPresentation) -> MatchedPairPresentation {
    let reg = BimodulePresentation::regular(a);
    let products = a.variety.products().iter().map(|p| (p.to_string(), Tensor3::square(a.dim))).collect();
    let b = AlgebraPresentation::new("Z", a.variety, reg.beta1.clone(), reg.beta2.clone(), products).unwrap();
    let on_a = reg.actions.iter().map(|(n, _)| (n.clone(), vec![Matrix::zeros(a.dim, a.dim); a.dim])).collect();
    MatchedPairPresentation::new("P", a.clone(), b, reg.actions.clone(), on_a).unwrap()
}

fn matched_agrees(p: &MatchedPairPresentation) -> bool {
    let v = p.variety();
    let mut ok = true;
    let mut why = Vec::new();
    for (tag, b) in [
        (v.bimodule_tag(), p.on_b_bimodule().binding()),
        (v.bimodule_tag(), p.on_a_bimodule().binding()),
        (v.matched_tag(), p.binding()),
    ] {
        let (o, f) = passes(&tag, &b);
        ok &= o;
        why.extend(f);
    }
    let sum = matched_sum_unchecked(p).algebra;
    let (sum_ok, sum_fail) = passes(v.tag(), &sum.binding());
    assert_eq!(ok, sum_ok, "{v}: pair sets fail {why:?}, matched sum fails {sum_fail:?}\n{p:?}");
    ok
}

#[test]
fn matched_pair_sets_match_matched_sums() {
    let mut rng = Mcg64::new(23);
    for base in bases().into_iter().chain([k1()]) {
        let p = zero_b_pair(&base);
        assert!(matched_agrees(&p));
        let mut broken = 0;
        for _ in 0..MUTATIONS {
            let mut q = p.clone();
            let side = if rng.below(2) == 0 { &mut q.on_b } else { &mut q.on_a };
            let f = rng.below(side.len());
            let e = rng.below(side[f].1.len());
            bump(&mut side[f].1[e], &mut rng);
            broken += usize::from(!matched_agrees(&q));
        }
        assert!(broken > 0, "no mutation breaks the pair over {}", base.name);
    }
}

fn dual_agrees(m: &BimodulePresentation) -> bool {
    let v = m.base.variety;
    let (pre_ok, pre_fail) = passes(&v.dual_tag().unwrap(), &m.binding());
    let t = transpose_bimodule(m);
    let (dual_ok, dual_fail) = passes(&v.bimodule_tag(), &t.binding());
    assert_eq!(pre_ok, dual_ok, "{v}: precondition fails {pre_fail:?}, transposed bimodule fails {dual_fail:?}\n{m:?}");
    pre_ok
}

#[test]
fn dual_preconditions_match_transposed_bimodules() {
    let mut rng = Mcg64::new(37);
    for base in bases().into_iter().filter(|b| b.variety.dual_tag().is_some()) {
        let reg = BimodulePresentation::regular(&base);
        dual_agrees(&reg);
        dual_agrees(&transpose_bimodule(&reg));
        let outcomes: Vec<bool> = (0..MUTATIONS).map(|_| dual_agrees(&mutate_bimodule(&reg, &mut rng))).collect();
        assert!(outcomes.contains(&false), "no mutation breaks the dual precondition over {}", base.name);
    }
}

#[test]
fn zero_bimodule_has_a_dual() {
    let tri = rb_split(k1(), 2);
    let z = BimodulePresentation::zero(&tri, 2);
    dual_agrees(&z);
    assert!(passes("dual-bimodule-of-bihom-tridendriform", &z.binding()).0);
}
