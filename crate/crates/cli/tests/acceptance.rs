//! Acceptance criteria 1 to 10, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the lines always reach the terminal.
//! Exact arithmetic means every residual comparison has zero tolerance; the
//! only pinned tolerances are the wall-clock budgets below.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use bihom_core::axioms::{builtin_identity_set, builtin_tags, has_corrected, parse_identity_set, print_identity_set, Variant};
use bihom_core::constructions::{
    averaging_dialgebra, centroid_twist, check_operator, derived_algebra, dialgebra_views, direct_sum, rb_tridendriform,
    sum_to_associative, tensor_product, tridend_to_dend, yau_twist, DerivedType,
};
use bihom_core::eval::{all_pass, check_identities, check_random_rational, failing, CheckOptions, Mcg64, ModelBinding};
use bihom_core::exact::{Matrix, Scalar, Tensor3};
use bihom_core::ir::IdentitySet;
use bihom_core::model::ModelFile;
use bihom_core::modules::{
    check_matched_pair, matched_sum_unchecked, matched_to_associative, semidirect, semidirect_unchecked,
};
use bihom_core::structures::fixtures::{e, k1, n2, n2_sigma, rb1, sigma, zero, zero_in};
use bihom_core::structures::{
    AlgebraPresentation, BimodulePresentation, MatchedPairPresentation,
    OperatorKind, OperatorPresentation, Variety,
};

const BUDGET_1: Duration = Duration::from_secs(1);
const BUDGET_2: Duration = Duration::from_secs(1);
const BUDGET_3: Duration = Duration::from_secs(10);
const BUDGET_4: Duration = Duration::from_secs(1);
const BUDGET_5: Duration = Duration::from_secs(1);
const BUDGET_6: Duration = Duration::from_secs(5);
const BUDGET_7: Duration = Duration::from_secs(10);
const RANDOM_SAMPLES: usize = 20;
const MUTATIONS: usize = 24;

/// Criteria known to fail as stated; see the decisions ledger.
const KNOWN_UNATTAINABLE: &[usize] = &[5];

fn s(n: i64) -> Scalar {
    Scalar::from_int(n)
}

/// Exhaustive checker that follows every pass with the random rational
/// sweep of criterion 10.
#[derive(Default)]
struct Harness {
    random_runs: usize,
    random_bad: Vec<String>,
    notes: Vec<String>,
}

impl Harness {
    fn set(&mut self, label: &str, set: &IdentitySet, b: &ModelBinding) -> bool {
        let reps = check_identities(set, b, &CheckOptions::default()).expect("binding matches set");
        if !all_pass(&reps) {
            self.notes.push(format!("{label}: {} fails {:?}", set.name, failing(&reps)));
            return false;
        }
        self.random_runs += 1;
        let seed = 0x5eed_0000 + self.random_runs as u64;
        let bad = check_random_rational(set, b, RANDOM_SAMPLES, seed).expect("binding matches set");
        if !bad.is_empty() {
            self.random_bad.push(format!("{label}: {bad:?}"));
        }
        true
    }

    fn tag(&mut self, label: &str, tag: &str, v: Variant, b: &ModelBinding) -> bool {
        let (set, _) = builtin_identity_set(tag, v).expect("built-in tag");
        self.set(label, set, b)
    }

    fn algebra(&mut self, a: &AlgebraPresentation) -> bool {
        self.tag(&a.name, a.variety.tag(), Variant::AsPrinted, &a.binding())
    }

    fn operator(&mut self, op: &OperatorPresentation) -> bool {
        let (set, _) = op.identity_set(Variant::AsPrinted).expect("operator set");
        self.set(&op.name, &set, &op.binding())
    }

    fn matched(&mut self, p: &MatchedPairPresentation, v: Variant) -> bool {
        let var = p.variety();
        let mut ok = self.tag(&p.a.name, var.tag(), v, &p.a.binding());
        ok &= self.tag(&p.b.name, var.tag(), v, &p.b.binding());
        ok &= self.tag(&format!("{} A-on-B", p.name), &var.bimodule_tag(), v, &p.on_b_bimodule().binding());
        ok &= self.tag(&format!("{} B-on-A", p.name), &var.bimodule_tag(), v, &p.on_a_bimodule().binding());
        ok &= self.tag(&p.name, &var.matched_tag(), v, &p.binding());
        ok
    }
}

fn same_tables(x: &AlgebraPresentation, y: &AlgebraPresentation) -> bool {
    x.variety == y.variety && x.alpha == y.alpha && x.beta == y.beta && x.products == y.products
}

fn timed(budget: Duration, f: impl FnOnce() -> Result<String, String>) -> (Result<String, String>, Duration) {
    let t = Instant::now();
    let r = f();
    let el = t.elapsed();
    let r = match r {
        Ok(m) if el > budget => Err(format!("{m}; took {el:.2?} over the {budget:?} budget")),
        other => other,
    };
    (r, el)
}

// ----------------------------------------------------------- criteria

/// (tag, total as printed, structural identities or None when not separated)
const LEDGER: &[(&str, usize, Option<usize>)] = &[
    ("bihom-associative", 4, None),
    ("bihom-left-symmetric", 4, None),
    ("ls-dialgebra", 9, Some(4)),
    ("assoc-dialgebra", 10, Some(5)),
    ("bihom-dendriform", 8, Some(3)),
    ("bihom-tridendriform", 14, Some(7)),
    ("rota-baxter", 3, Some(1)),
    ("centroid", 4, Some(2)),
    ("averaging", 4, Some(2)),
    ("morphism", 3, None),
    ("bimodule-of-bihom-associative", 7, None),
    ("bimodule-of-bihom-left-symmetric", 6, None),
    ("bimodule-of-ls-dialgebra", 18, None),
    ("bimodule-of-assoc-dialgebra", 23, None),
    ("bimodule-of-bihom-dendriform", 17, None),
    ("bimodule-of-bihom-tridendriform", 31, None),
    ("matched-pair-of-bihom-associative", 6, None),
    ("matched-pair-of-bihom-left-symmetric", 4, None),
    ("matched-pair-of-ls-dialgebra", 24, None),
    ("matched-pair-of-assoc-dialgebra", 30, None),
    ("matched-pair-of-bihom-dendriform", 18, None),
    ("matched-pair-of-bihom-tridendriform", 42, None),
];

/// Map axioms are named `<stem>0...`; operator commutation laws `<stem>_alpha`, `<stem>_beta`.
fn structural(name: &str) -> bool {
    let rest = name.trim_start_matches(|c: char| c.is_ascii_alphabetic());
    !rest.starts_with('0') && !name.ends_with("_alpha") && !name.ends_with("_beta")
}

fn criterion_1() -> Result<String, String> {
    let mut loaded = 0;
    for tag in builtin_tags() {
        let variants: &[Variant] =
            if has_corrected(tag) { &[Variant::AsPrinted, Variant::Corrected] } else { &[Variant::AsPrinted] };
        for &v in variants {
            let (set, used) = builtin_identity_set(tag, v).map_err(|e| e.to_string())?;
            if used != v {
                return Err(format!("{tag}: asked for {v}, got {used}"));
            }
            set.wellform().map_err(|e| format!("{tag} ({v}): {e}"))?;
            let text = print_identity_set(set).map_err(|e| format!("{tag}: {e}"))?;
            let back = parse_identity_set(&text).map_err(|e| format!("{tag} reprint: {e}"))?;
            if &back != set {
                return Err(format!("{tag} ({v}) does not round-trip"));
            }
            loaded += 1;
        }
    }
    for &(tag, total, structure) in LEDGER {
        let (set, _) = builtin_identity_set(tag, Variant::AsPrinted).map_err(|e| e.to_string())?;
        if set.identities.len() != total {
            return Err(format!("{tag}: {} identities, ledger says {total}", set.identities.len()));
        }
        if let Some(n) = structure {
            let got = set.identities.iter().filter(|i| structural(&i.name)).count();
            if got != n {
                return Err(format!("{tag}: {got} structural identities, ledger says {n}"));
            }
        }
    }
    Ok(format!("{loaded} set variants load and round-trip; {} ledger counts match", LEDGER.len()))
}

fn criterion_2(h: &mut Harness) -> Result<String, String> {
    let mut fixtures: Vec<_> = (1..=4).map(zero).collect();
    fixtures.extend([k1(), n2()]);
    for a in &fixtures {
        if !h.algebra(a) {
            return Err(format!("{} fails", a.name));
        }
    }
    let s2 = sigma(&s(2));
    let tw = yau_twist(&n2(), &s2, &s2, 1).map_err(|e| e.to_string())?;
    if !same_tables(&tw, &n2_sigma(&s(2))) || !h.algebra(&tw) {
        return Err("twisted N2 differs from N2s2 or fails".into());
    }
    Ok(format!("{} fixtures and the sigma_2 twist of N2 pass", fixtures.len()))
}

fn criterion_3(h: &mut Harness) -> Result<String, String> {
    let fx = [k1(), n2(), n2_sigma(&s(2)), zero(2)];
    let mut outputs: Vec<AlgebraPresentation> = Vec::new();
    let err = |e: bihom_core::constructions::ConstructionError| e.to_string();
    for a in &fx {
        for b in &fx {
            if a.dim + b.dim <= 6 {
                outputs.push(direct_sum(a, b).map_err(err)?);
            }
            if a.dim * b.dim <= 6 {
                outputs.push(tensor_product(a, b).map_err(err)?);
            }
        }
    }
    let s3 = sigma(&s(3));
    for a in &fx {
        let id = Matrix::identity(a.dim);
        for p in 1..=2 {
            outputs.push(yau_twist(a, &id, &id, p).map_err(err)?);
            outputs.push(yau_twist(a, &a.alpha, &a.beta, p).map_err(err)?);
        }
        for k in 0..=3 {
            outputs.push(derived_algebra(a, k, DerivedType::One).map_err(err)?);
            outputs.push(derived_algebra(a, k, DerivedType::Two).map_err(err)?);
        }
    }
    outputs.push(yau_twist(&n2(), &s3, &s3, 2).map_err(err)?);
    // centroid twists by commuting idempotent centroid elements with R = -lambda id
    let kk = direct_sum(&k1(), &k1()).map_err(err)?;
    let p1 = Matrix::diagonal(&[s(1), s(0)]);
    let cases: Vec<(AlgebraPresentation, Matrix)> = vec![
        (k1(), Matrix::identity(1)),
        (n2(), Matrix::identity(2)),
        (kk.clone(), p1.clone()),
        (zero(2), p1),
    ];
    let mut twisted_ops = 0;
    for (a, g) in cases {
        for lambda in [s(1), s(2)] {
            let r = OperatorPresentation::new("R", a.clone(), Matrix::scalar(a.dim, -&lambda), OperatorKind::RotaBaxter {
                weight: lambda.clone(),
            })
            .map_err(|e| e.to_string())?;
            let (t, r2) = centroid_twist(&r, &g, &g).map_err(err)?;
            if !h.operator(&r2) {
                return Err(format!("carried operator on {} fails", t.name));
            }
            twisted_ops += 1;
            outputs.push(t);
        }
    }
    for o in &outputs {
        if o.dim > 6 {
            return Err(format!("{} exceeds dimension 6", o.name));
        }
        if !h.algebra(o) {
            return Err(format!("{} fails its variety set", o.name));
        }
    }
    Ok(format!("{} construction outputs and {twisted_ops} carried operators pass", outputs.len()))
}

fn criterion_4(h: &mut Harness) -> Result<String, String> {
    let err = |e: bihom_core::constructions::ConstructionError| e.to_string();
    for lambda in [s(1), s(2), Scalar::ratio(5, 3)] {
        let r = rb1(&lambda);
        if !h.operator(&r) {
            return Err(format!("R = -{lambda} id fails rota-baxter"));
        }
        let t = rb_tridendriform(&r).map_err(err)?;
        if !h.algebra(&t) {
            return Err(format!("tridendriform split at {lambda} fails"));
        }
        let assoc = sum_to_associative(&t).map_err(err)?;
        let dend = tridend_to_dend(&t).map_err(err)?;
        if !h.algebra(&assoc) || !h.algebra(&dend) {
            return Err(format!("summed or dendriform algebra at {lambda} fails"));
        }
    }
    Ok("lambda in {1, 2, 5/3}: rb, t1-t7, associativity and dendriform all exact".into())
}

fn criterion_5(h: &mut Harness) -> Result<String, String> {
    let proj = Matrix::diagonal(&[s(1), s(0)]);
    let base = AlgebraPresentation::new("N2P", Variety::Associative, Matrix::identity(2), proj.clone(), n2().products)
        .map_err(|e| e.to_string())?;
    for (name, g) in [("alpha", Matrix::identity(2)), ("beta", proj)] {
        let op = OperatorPresentation::new(name, base.clone(), g, OperatorKind::Averaging).map_err(|e| e.to_string())?;
        if !all_pass(&check_operator(&op).map_err(|e| e.to_string())?) {
            return Err(format!("{name} is not averaging"));
        }
    }
    let d = averaging_dialgebra(&base).map_err(|e| e.to_string())?;
    let views = dialgebra_views(&d, Variant::AsPrinted).map_err(|e| e.to_string())?;
    // supplement: the same chain with alpha = beta = id does go through
    let good = averaging_dialgebra(&n2()).map_err(|e| e.to_string())?;
    let good_ok = h.algebra(&good)
        && all_pass(&dialgebra_views(&good, Variant::AsPrinted).map_err(|e| e.to_string())?.ls_dialgebra);
    h.notes.push(format!("criterion 5 supplement: averaging_dialgebra(N2) with identity maps passes: {good_ok}"));
    if !all_pass(&views.assoc_dialgebra) || !all_pass(&views.ls_dialgebra) {
        return Err(format!(
            "avo1 holds but the output fails assoc-dialgebra {:?} and ls-dialgebra {:?}; N2 with beta = P is not BiHom-associative",
            failing(&views.assoc_dialgebra),
            failing(&views.ls_dialgebra)
        ));
    }
    h.algebra(&d);
    Ok("dia1-dia5 and als1-als4 pass".into())
}

fn criterion_6(h: &mut Harness) -> Result<String, String> {
    let err = |e: bihom_core::constructions::ConstructionError| e.to_string();
    let avg = averaging_dialgebra(&n2()).map_err(err)?;
    let mut notes = Vec::new();
    for base in [k1(), n2(), avg] {
        let m = BimodulePresentation::regular(&base);
        let tag = base.variety.bimodule_tag();
        let v = if h.tag(&m.name, &tag, Variant::AsPrinted, &m.binding()) {
            Variant::AsPrinted
        } else if h.tag(&m.name, &tag, Variant::Corrected, &m.binding()) {
            notes.push(format!("{} needs the corrected transcription", base.name));
            Variant::Corrected
        } else {
            return Err(format!("regular bimodule of {} fails", base.name));
        };
        let sd = semidirect(&m, v).map_err(err)?;
        if !h.algebra(&sd.algebra) {
            return Err(format!("semidirect sum over {} fails", base.name));
        }
    }
    for base in [k1(), n2(), n2_sigma(&s(2))] {
        for d in 1..=2 {
            let sd = semidirect_unchecked(&BimodulePresentation::zero(&base, d)).algebra;
            let ds = direct_sum(&base, &zero_in(base.variety, d)).map_err(err)?;
            if !same_tables(&sd, &ds) {
                return Err(format!("zero semidirect over {} differs from the direct sum with Z{d}", base.name));
            }
        }
    }
    Ok(format!("regular bimodules and semidirect sums pass, zero extensions equal direct sums{}", notes.iter().map(|n| format!("; {n}")).collect::<String>()))
}

/// `B` is the zero algebra sharing the module maps; `A` acts on it regularly.
fn zero_b_pair(a: &AlgebraPresentation) -> MatchedPairPresentation {
    let reg = BimodulePresentation::regular(a);
    let products = a.variety.products().iter().map(|p| (p.to_string(), Tensor3::square(a.dim))).collect();
    let b = AlgebraPresentation::new(&format!("Z({})", a.name), a.variety, reg.beta1.clone(), reg.beta2.clone(), products)
        .expect("shapes");
    let on_a = reg.actions.iter().map(|(n, _)| (n.clone(), vec![Matrix::zeros(a.dim, a.dim); a.dim])).collect();
    MatchedPairPresentation::new(&format!("P({})", a.name), a.clone(), b, reg.actions.clone(), on_a).expect("shapes")
}

fn m2() -> AlgebraPresentation {
    let t = "algebra M2 { dim 4; variety bihom-associative; prod mul { (1,1) -> e1; (1,2) -> e2; (2,3) -> e1; (2,4) -> e2; (3,1) -> e3; (3,2) -> e4; (4,3) -> e3; (4,4) -> e4; } }";
    ModelFile::parse(t).expect("M2").last_algebra().expect("M2").clone()
}

fn criterion_7(h: &mut Harness) -> Result<String, String> {
    let pairs = [
        (zero_b_pair(&k1()), Variant::AsPrinted),
        (zero_b_pair(&n2()), Variant::AsPrinted),
        (zero_b_pair(&n2_sigma(&s(2))), Variant::AsPrinted),
        (zero_b_pair(&m2()), Variant::AsPrinted),
        (zero_b_pair(&rb_tridendriform(&rb1(&s(2))).expect("split")), Variant::Corrected),
    ];
    for (p, v) in &pairs {
        if !h.matched(p, *v) {
            return Err(format!("{} fails ({v})", p.name));
        }
        let ms = matched_sum_unchecked(p).algebra;
        let sd = semidirect_unchecked(&p.on_b_bimodule()).algebra;
        if !same_tables(&ms, &sd) {
            return Err(format!("matched sum of {} differs from the semidirect sum", p.name));
        }
    }
    let base = &pairs[3].0;
    let mut rng = Mcg64::new(7);
    let mut flipped = 0;
    for _ in 0..MUTATIONS {
        let mut p = base.clone();
        let (label, side) = if rng.below(2) == 0 { ("_A", &mut p.on_b) } else { ("_B", &mut p.on_a) };
        let fam = rng.below(side.len());
        let el = rng.below(side[fam].1.len());
        let name = format!("{}{label}", side[fam].0);
        let m = &mut side[fam].1[el];
        let (i, j) = (rng.below(m.rows()), rng.below(m.cols()));
        let delta = s(1 + rng.below(3) as i64);
        m.set(i, j, m.get(i, j) + &delta);
        let rep = check_matched_pair(&p, Variant::AsPrinted).map_err(|e| e.to_string())?;
        if rep.passed() {
            return Err(format!("mutation of {name}(e{}) at ({},{}) by {delta} survives", el + 1, i + 1, j + 1));
        }
        flipped += 1;
    }
    Ok(format!("{} zero-B pairs pass and sum to their semidirect sums; {flipped}/{MUTATIONS} seeded mutations flip a check", pairs.len()))
}

fn criterion_8(h: &mut Harness) -> Result<String, String> {
    let mut done = 0;
    for lambda in [s(2), Scalar::ratio(5, 3)] {
        let base = rb_tridendriform(&rb1(&lambda)).map_err(|e| e.to_string())?;
        let p = zero_b_pair(&base);
        let assoc = matched_to_associative(&p, Variant::Corrected).map_err(|e| e.to_string())?;
        if !h.matched(&assoc, Variant::AsPrinted) {
            return Err(format!("{} fails mp3-mp8", assoc.name));
        }
        let one = sum_to_associative(&matched_sum_unchecked(&p).algebra).map_err(|e| e.to_string())?;
        let two = matched_sum_unchecked(&assoc).algebra;
        if !same_tables(&one, &two) {
            return Err("summing before and after the matched sum disagree".into());
        }
        done += 1;
    }
    Ok(format!("{done} tridendriform pairs: mp3-mp8 pass and both paths give identical tables"))
}

fn criterion_9() -> Result<String, String> {
    let corpus = concat!(env!("CARGO_MANIFEST_DIR"), "/../../corpus/models");
    let mut summary = Vec::new();
    for (file, a) in [("E1.alg", s(1)), ("Em1.alg", s(-1)), ("E2.alg", s(2))] {
        let path = format!("{corpus}/{file}");
        let out = Command::new(env!("CARGO_BIN_EXE_bihom"))
            .args(["check", &path, "--variety", "bihom-associative", "--json"])
            .output()
            .map_err(|e| e.to_string())?;
        if out.status.code() != Some(1) {
            return Err(format!("{file}: exit {:?}, expected 1", out.status.code()));
        }
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
        let checks = v["sections"][0]["checks"].as_array().ok_or("no checks")?;
        let reported: BTreeSet<String> = checks
            .iter()
            .filter(|c| c["status"] == "fail")
            .map(|c| c["identity"].as_str().unwrap_or_default().to_string())
            .collect();
        let fixture = e(&a);
        let parsed = ModelFile::parse(&std::fs::read_to_string(&path).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        if parsed.last_algebra() != Some(&fixture) {
            return Err(format!("{file} does not parse to E({a})"));
        }
        let (reps, _) = fixture.check(Variant::AsPrinted, &CheckOptions::default()).map_err(|e| e.to_string())?;
        let expected: BTreeSet<String> = failing(&reps).into_iter().map(String::from).collect();
        if reported != expected {
            return Err(format!("{file}: report names {reported:?}, library finds {expected:?}"));
        }
        if a == s(1) {
            let comm = checks.iter().find(|c| c["identity"] == "aca0").ok_or("no aca0 record")?;
            let f = &comm["failures"][0];
            if f["tuple"] != serde_json::json!(["e2"]) || f["residual"] != serde_json::json!(["2", "0"]) {
                return Err(format!("aca0 witness at a=1 is {f}"));
            }
        }
        summary.push(format!("a={a}: {}", expected.into_iter().collect::<Vec<_>>().join(",")));
    }
    Ok(format!("exit 1 each; aca0 at a=1 fails on e2 with residual 2e1; failing sets {}", summary.join("; ")))
}

fn main() {
    let mut h = Harness::default();
    let mut results: Vec<(usize, Result<String, String>, Duration)> = Vec::new();
    let mut run = |n: usize, budget: Duration, f: &mut dyn FnMut() -> Result<String, String>| {
        let (r, el) = timed(budget, f);
        results.push((n, r, el));
    };
    run(1, BUDGET_1, &mut criterion_1);
    run(2, BUDGET_2, &mut || criterion_2(&mut h));
    run(3, BUDGET_3, &mut || criterion_3(&mut h));
    run(4, BUDGET_4, &mut || criterion_4(&mut h));
    run(5, BUDGET_5, &mut || criterion_5(&mut h));
    run(6, BUDGET_6, &mut || criterion_6(&mut h));
    run(7, BUDGET_7, &mut || criterion_7(&mut h));
    run(8, Duration::MAX, &mut || criterion_8(&mut h));
    run(9, Duration::MAX, &mut criterion_9);
    let c10 = if h.random_bad.is_empty() {
        Ok(format!("{} exhaustive passes each followed by {RANDOM_SAMPLES} random rational assignments, all zero", h.random_runs))
    } else {
        Err(format!("nonzero residuals: {:?}", h.random_bad))
    };
    results.push((10, c10, Duration::ZERO));

    let mut unexpected = Vec::new();
    for (n, r, el) in &results {
        let known = KNOWN_UNATTAINABLE.contains(n);
        // criterion 10 rides along inside the others, so it has no time of its own
        let el = if *n == 10 { "timed within 1-9".to_string() } else { format!("{el:.2?}") };
        match r {
            Ok(m) => println!("criterion {n:>2}: PASS  ({el}) {m}"),
            Err(m) if known => println!("criterion {n:>2}: FAIL  ({el}) known, recorded in the decisions ledger: {m}"),
            Err(m) => println!("criterion {n:>2}: FAIL  ({el}) {m}"),
        }
        if r.is_ok() == known {
            unexpected.push(*n);
        }
    }
    for n in &h.notes {
        println!("  note: {n}");
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
