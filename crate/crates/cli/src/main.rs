//! `bihom`: check model files against identity sets and build new models.
//!
//! Exit codes: 0 when every check passes, 1 when some check fails, 2 for
//! usage, parse and precondition errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use bihom_core::axioms::{builtin_identity_set, parse_identity_set, Variant};
use bihom_core::constructions::{self as cons, ConstructionError, DerivedType};
use bihom_core::eval::{check_identities, spot_check, CheckOptions, CheckReport, ModelBinding};
use bihom_core::exact::{Matrix, Scalar};
use bihom_core::ir::IdentitySet;
use bihom_core::model::{parse_matrix, print_model, Item, ModelFile, OperatorDecl};
use bihom_core::modules;
use bihom_core::report::{input_digest, ReportDocument, Section};
use bihom_core::structures::{
    AlgebraPresentation, BimodulePresentation, MatchedPairPresentation, OperatorKind, OperatorPresentation, Variety,
};

#[derive(Parser)]
#[command(name = "bihom", version, about = "Exact checks and constructions for finite-dimensional BiHom-algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a presentation against a built-in or user identity set.
    Check(CheckArgs),
    /// Build a new presentation and write it as a model file.
    #[command(subcommand)]
    Construct(Construct),
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("set").required(true).args(["variety", "identities"]))]
struct CheckArgs {
    /// Model files; later files may refer to algebras declared earlier.
    #[arg(required = true)]
    models: Vec<PathBuf>,
    /// Built-in identity set tag.
    #[arg(long)]
    variety: Option<String>,
    /// User identity file.
    #[arg(long)]
    identities: Option<PathBuf>,
    /// Name of the presentation to check (default: the last suitable one).
    #[arg(long)]
    item: Option<String>,
    /// Weight for rota-baxter checks when the operator block has none.
    #[arg(long, allow_hyphen_values = true)]
    weight: Option<String>,
    /// Check N random basis tuples instead of all of them.
    #[arg(long, value_name = "N")]
    random: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
struct Common {
    /// Use the corrected transcription where one ships.
    #[arg(long)]
    corrected: bool,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
    /// Maximum failures recorded per identity.
    #[arg(long, default_value_t = bihom_core::eval::DEFAULT_FAILURE_CAP)]
    failure_cap: usize,
}

#[derive(Args)]
struct Out {
    /// Output path (default: standard output).
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Re-check the result against its identity sets.
    #[arg(long)]
    verify: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct One {
    #[arg(long, required = true)]
    model: Vec<PathBuf>,
    #[arg(long)]
    item: Option<String>,
}

#[derive(Args)]
struct WithOp {
    #[command(flatten)]
    input: One,
    /// Operator file; its `map op` is bound to the model's algebra.
    #[arg(long)]
    op: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    weight: Option<String>,
}

#[derive(Subcommand)]
enum Construct {
    /// Direct sum of two algebras.
    Dsum {
        #[command(flatten)]
        input: One,
        #[arg(long)]
        with: PathBuf,
        #[command(flatten)]
        out: Out,
    },
    /// Tensor product of two algebras.
    Tensor {
        #[command(flatten)]
        input: One,
        #[arg(long)]
        with: PathBuf,
        #[command(flatten)]
        out: Out,
    },
    /// Yau twist by commuting endomorphisms.
    Twist {
        #[command(flatten)]
        input: One,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
        #[arg(long, default_value_t = 1)]
        power: u64,
        #[command(flatten)]
        out: Out,
    },
    /// Derived algebra of type 1 or 2.
    Derived {
        #[command(flatten)]
        input: One,
        #[arg(short)]
        k: u32,
        #[arg(long = "type", value_parser = ["1", "2"])]
        ty: String,
        #[command(flatten)]
        out: Out,
    },
    /// Centroid twist of an algebra carrying a Rota-Baxter operator.
    CentroidTwist {
        #[command(flatten)]
        input: WithOp,
        #[arg(long)]
        gamma1: String,
        #[arg(long)]
        gamma2: String,
        #[command(flatten)]
        out: Out,
    },
    /// Tridendriform algebra from a Rota-Baxter operator.
    RbSplit {
        #[command(flatten)]
        input: WithOp,
        #[command(flatten)]
        out: Out,
    },
    /// Dialgebra from averaging twisting maps.
    AvgDialgebra {
        #[command(flatten)]
        input: One,
        #[command(flatten)]
        out: Out,
    },
    /// Dendriform algebra from a tridendriform one.
    ToDend {
        #[command(flatten)]
        input: One,
        #[command(flatten)]
        out: Out,
    },
    /// Associative algebra from the summed products.
    ToAssoc {
        #[command(flatten)]
        input: One,
        #[command(flatten)]
        out: Out,
    },
    /// Semidirect sum of an algebra and a bimodule.
    Semidirect {
        #[command(flatten)]
        input: One,
        #[command(flatten)]
        out: Out,
    },
    /// Sum algebra of a matched pair.
    MatchedSum {
        #[command(flatten)]
        input: One,
        #[command(flatten)]
        out: Out,
    },
    /// Dual bimodule.
    DualBimodule {
        #[command(flatten)]
        input: One,
        #[command(flatten)]
        out: Out,
    },
    /// Twisted algebra and bimodule.
    TwistBimodule {
        #[command(flatten)]
        input: One,
        #[arg(long)]
        alpha1: String,
        #[arg(long)]
        alpha2: String,
        #[arg(long)]
        beta1: String,
        #[arg(long)]
        beta2: String,
        #[command(flatten)]
        out: Out,
    },
}

/// Anything that ends the run with exit code 2.
struct Fatal(String);

impl<E: std::fmt::Display> From<E> for Fatal {
    fn from(e: E) -> Self {
        Fatal(e.to_string())
    }
}

type Res<T> = Result<T, Fatal>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match cli.command {
        Command::Check(a) => cmd_check(a),
        Command::Construct(c) => cmd_construct(c),
    };
    match r {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Fatal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

// ------------------------------------------------------------- loading

struct Loaded {
    model: ModelFile,
    bytes: Vec<Vec<u8>>,
}

fn read(path: &Path) -> Res<Vec<u8>> {
    fs::read(path).map_err(|e| Fatal(format!("{}: {e}", path.display())))
}

fn load(paths: &[PathBuf]) -> Res<Loaded> {
    let mut model = ModelFile::new();
    let mut bytes = Vec::new();
    for p in paths {
        let b = read(p)?;
        let text = String::from_utf8(b.clone()).map_err(|_| Fatal(format!("{}: not UTF-8", p.display())))?;
        model.parse_into(&text).map_err(|e| Fatal(format!("{}:{e}", p.display())))?;
        bytes.push(b);
    }
    Ok(Loaded { model, bytes })
}

fn variant(c: &Common) -> Variant {
    if c.corrected {
        Variant::Corrected
    } else {
        Variant::AsPrinted
    }
}

fn opts(c: &Common) -> CheckOptions {
    CheckOptions {
        failure_cap: c.failure_cap,
        ..CheckOptions::default()
    }
}

fn scalar(s: &str) -> Res<Scalar> {
    s.parse::<Scalar>().map_err(|e| Fatal(format!("invalid weight `{s}`: {e}")))
}

fn matrix(flag: &str, text: &str, n: usize) -> Res<Matrix> {
    parse_matrix(text, n).map_err(|e| Fatal(format!("--{flag}: {}", e.message)))
}

fn pick<'a>(m: &'a ModelFile, keyword: &str, name: Option<&str>) -> Res<&'a Item> {
    m.pick(keyword, name).ok_or_else(|| match name {
        Some(n) => Fatal(format!("no {keyword} named `{n}`")),
        None => Fatal(format!("no {keyword} block in the input")),
    })
}

fn algebra_of(m: &ModelFile, name: Option<&str>) -> Res<AlgebraPresentation> {
    match pick(m, "algebra", name)? {
        Item::Algebra(a) => Ok(a.clone()),
        _ => unreachable!(),
    }
}

fn bimodule_of(m: &ModelFile, name: Option<&str>) -> Res<BimodulePresentation> {
    match pick(m, "bimodule", name)? {
        Item::Bimodule(b) => Ok(b.clone()),
        _ => unreachable!(),
    }
}

fn matched_of(m: &ModelFile, name: Option<&str>) -> Res<MatchedPairPresentation> {
    match pick(m, "matched", name)? {
        Item::Matched(p) => Ok(p.clone()),
        _ => unreachable!(),
    }
}

/// Binds an operator block to its declared base, or to the last algebra.
fn operator_of(
    m: &ModelFile,
    name: Option<&str>,
    kind: Option<OperatorKind>,
    weight: Option<&str>,
) -> Res<OperatorPresentation> {
    let decl: OperatorDecl = match pick(m, "operator", name)? {
        Item::Operator(o) => o.clone(),
        _ => unreachable!(),
    };
    let base = match &decl.base {
        Some(b) => m.algebra(b).cloned().ok_or_else(|| Fatal(format!("unknown algebra `{b}`")))?,
        None => algebra_of(m, None)?,
    };
    bind_operator(&decl, &base, kind, weight)
}

fn bind_operator(
    decl: &OperatorDecl,
    base: &AlgebraPresentation,
    kind: Option<OperatorKind>,
    weight: Option<&str>,
) -> Res<OperatorPresentation> {
    let mut kind = kind.or_else(|| decl.kind.clone()).unwrap_or(OperatorKind::Endomorphism);
    if let OperatorKind::RotaBaxter { weight: w } = &mut kind {
        match (weight, &decl.kind) {
            (Some(s), _) => *w = scalar(s)?,
            (None, Some(OperatorKind::RotaBaxter { weight })) => *w = weight.clone(),
            (None, _) => return Err(Fatal("a rota-baxter check needs --weight or a `weight` field".into())),
        }
    }
    Ok(OperatorPresentation::new(&decl.name, base.clone(), decl.op.clone(), kind)?)
}

// --------------------------------------------------------------- check

/// One identity set against one binding.
struct Job {
    title: String,
    target: String,
    set_name: String,
    transcription: &'static str,
    set: IdentitySet,
    binding: ModelBinding,
}

fn builtin_job(title: &str, target: &str, tag: &str, v: Variant, binding: ModelBinding) -> Res<Job> {
    let (set, used) = builtin_identity_set(tag, v)?;
    Ok(Job {
        title: title.into(),
        target: target.into(),
        set_name: tag.into(),
        transcription: used.label(),
        set: set.clone(),
        binding,
    })
}

fn run_jobs(jobs: Vec<Job>, random: Option<(u64, u64)>, o: &CheckOptions) -> Res<Vec<Section>> {
    let mut out = Vec::new();
    for j in jobs {
        let reps: Vec<CheckReport> = match random {
            None => check_identities(&j.set, &j.binding, o)?,
            Some((n, seed)) => spot_check(&j.set, &j.binding, n, seed, o)?,
        };
        out.push(Section::new(&j.title, &j.target, &j.set_name, j.transcription, &reps));
    }
    Ok(out)
}

fn matched_jobs(p: &MatchedPairPresentation, v: Variant) -> Res<Vec<Job>> {
    let var = p.variety();
    let (on_b, on_a) = (p.on_b_bimodule(), p.on_a_bimodule());
    Ok(vec![
        builtin_job("A", &p.a.name, var.tag(), v, p.a.binding())?,
        builtin_job("B", &p.b.name, var.tag(), v, p.b.binding())?,
        builtin_job("A-on-B bimodule", &p.name, &var.bimodule_tag(), v, on_b.binding())?,
        builtin_job("B-on-A bimodule", &p.name, &var.bimodule_tag(), v, on_a.binding())?,
        builtin_job("cross equations", &p.name, &var.matched_tag(), v, p.binding())?,
    ])
}

fn bimodule_variety(tag: &str) -> Option<(bool, Variety)> {
    if let Some(rest) = tag.strip_prefix("bimodule-of-") {
        return rest.parse().ok().map(|v| (false, v));
    }
    tag.strip_prefix("dual-bimodule-of-").and_then(|r| r.parse().ok()).map(|v| (true, v))
}

fn check_jobs(a: &CheckArgs, m: &ModelFile, v: Variant) -> Res<Vec<Job>> {
    let item = a.item.as_deref();
    if let Some(path) = &a.identities {
        let text = String::from_utf8(read(path)?).map_err(|_| Fatal(format!("{}: not UTF-8", path.display())))?;
        let set = parse_identity_set(&text).map_err(|e| Fatal(format!("{}:{e}", path.display())))?;
        let target = match item {
            Some(n) => m.get(n).ok_or_else(|| Fatal(format!("no presentation named `{n}`")))?,
            None => m.items.last().ok_or_else(|| Fatal("the input declares nothing".into()))?,
        };
        let (name, binding) = match target {
            Item::Algebra(x) => (x.name.clone(), x.binding()),
            Item::Bimodule(x) => (x.name.clone(), x.binding()),
            Item::Matched(x) => (x.name.clone(), x.binding()),
            Item::Operator(_) => {
                let op = operator_of(m, Some(target.name()), None, a.weight.as_deref())?;
                (op.name.clone(), op.binding())
            }
        };
        return Ok(vec![Job {
            title: "check".into(),
            target: name,
            set_name: set.name.clone(),
            transcription: "user",
            set,
            binding,
        }]);
    }
    let tag = a.variety.as_deref().expect("clap enforces one of the two");
    if let Ok(var) = tag.parse::<Variety>() {
        let alg = algebra_of(m, item)?;
        let alg = alg.as_variety(var)?;
        return Ok(vec![builtin_job("check", &alg.name, tag, v, alg.binding())?]);
    }
    if let Some((_, var)) = bimodule_variety(tag) {
        let b = bimodule_of(m, item)?;
        if b.base.variety != var {
            return Err(Fatal(format!("{tag} needs a bimodule over a {var} algebra, found {}", b.base.variety)));
        }
        return Ok(vec![builtin_job("check", &b.name, tag, v, b.binding())?]);
    }
    if let Some(rest) = tag.strip_prefix("matched-pair-of-") {
        let p = matched_of(m, item)?;
        if rest != p.variety().tag() {
            return Err(Fatal(format!("{tag} does not match the pair's variety {}", p.variety())));
        }
        return matched_jobs(&p, v);
    }
    let kind = match tag {
        "rota-baxter" => OperatorKind::RotaBaxter { weight: Scalar::zero() },
        "centroid" => OperatorKind::Centroid,
        "averaging" => OperatorKind::Averaging,
        "morphism" => OperatorKind::Endomorphism,
        _ => return Err(Fatal(format!("unknown identity set `{tag}`"))),
    };
    let op = operator_of(m, item, Some(kind), a.weight.as_deref())?;
    let (set, used) = op.identity_set(v)?;
    Ok(vec![Job {
        title: "check".into(),
        target: op.name.clone(),
        set_name: tag.into(),
        transcription: used.label(),
        set,
        binding: op.binding(),
    }])
}

fn emit(doc: &ReportDocument, json: bool, to_stderr: bool) -> Res<()> {
    let text = if json { doc.to_json() + "\n" } else { doc.to_text() };
    if to_stderr {
        std::io::stderr().write_all(text.as_bytes())?;
    } else {
        std::io::stdout().write_all(text.as_bytes())?;
    }
    Ok(())
}

fn cmd_check(a: CheckArgs) -> Res<bool> {
    let loaded = load(&a.models)?;
    let v = variant(&a.common);
    let jobs = check_jobs(&a, &loaded.model, v)?;
    let mut inputs = loaded.bytes.clone();
    if let Some(p) = &a.identities {
        inputs.push(read(p)?);
    }
    let sections = run_jobs(jobs, a.random.map(|n| (n, a.seed)), &opts(&a.common))?;
    let doc = ReportDocument::new("check", input_digest(inputs.iter().map(Vec::as_slice)), sections);
    emit(&doc, a.common.json, false)?;
    Ok(doc.passed())
}

// ----------------------------------------------------------- construct

fn verify_jobs(out: &ModelFile, v: Variant) -> Res<Vec<Job>> {
    let mut jobs = Vec::new();
    for item in &out.items {
        match item {
            Item::Algebra(a) => jobs.push(builtin_job("verify", &a.name, a.variety.tag(), v, a.binding())?),
            Item::Bimodule(b) => {
                jobs.push(builtin_job("verify", &b.name, &b.base.variety.bimodule_tag(), v, b.binding())?)
            }
            Item::Operator(o) => {
                let base = match &o.base {
                    Some(n) => out.algebra(n).cloned().ok_or_else(|| Fatal(format!("unknown algebra `{n}`")))?,
                    None => continue,
                };
                let op = bind_operator(o, &base, None, None)?;
                let (set, used) = op.identity_set(v)?;
                jobs.push(Job {
                    title: "verify".into(),
                    target: op.name.clone(),
                    set_name: op.kind.tag().into(),
                    transcription: used.label(),
                    set,
                    binding: op.binding(),
                });
            }
            Item::Matched(p) => jobs.extend(matched_jobs(p, v)?),
        }
    }
    Ok(jobs)
}

fn finish(out: &Out, result: ModelFile, inputs: Vec<Vec<u8>>, command: &str) -> Res<bool> {
    let text = print_model(&result);
    match &out.output {
        Some(p) => fs::write(p, &text).map_err(|e| Fatal(format!("{}: {e}", p.display())))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    if !out.verify {
        return Ok(true);
    }
    let v = variant(&out.common);
    let sections = run_jobs(verify_jobs(&result, v)?, None, &opts(&out.common))?;
    let doc = ReportDocument::new(command, input_digest(inputs.iter().map(Vec::as_slice)), sections);
    emit(&doc, out.common.json, out.output.is_none())?;
    Ok(doc.passed())
}

fn construction(e: ConstructionError) -> Fatal {
    Fatal(e.to_string())
}

fn alg(a: AlgebraPresentation) -> ModelFile {
    ModelFile::single(Item::Algebra(a))
}

fn cmd_construct(c: Construct) -> Res<bool> {
    match c {
        Construct::Dsum { input, with, out } => {
            let (a, mut bytes) = one_algebra(&input)?;
            let other = load(std::slice::from_ref(&with))?;
            bytes.extend(other.bytes.clone());
            let b = algebra_of(&other.model, None)?;
            let r = cons::direct_sum(&a, &b).map_err(construction)?;
            finish(&out, alg(r), bytes, "construct dsum")
        }
        Construct::Tensor { input, with, out } => {
            let (a, mut bytes) = one_algebra(&input)?;
            let other = load(std::slice::from_ref(&with))?;
            bytes.extend(other.bytes.clone());
            let b = algebra_of(&other.model, None)?;
            let r = cons::tensor_product(&a, &b).map_err(construction)?;
            finish(&out, alg(r), bytes, "construct tensor")
        }
        Construct::Twist { input, alpha, beta, power, out } => {
            let (a, bytes) = one_algebra(&input)?;
            let (al, be) = (matrix("alpha", &alpha, a.dim)?, matrix("beta", &beta, a.dim)?);
            let r = cons::yau_twist(&a, &al, &be, power).map_err(construction)?;
            finish(&out, alg(r), bytes, "construct twist")
        }
        Construct::Derived { input, k, ty, out } => {
            let (a, bytes) = one_algebra(&input)?;
            let ty = if ty == "1" { DerivedType::One } else { DerivedType::Two };
            let r = cons::derived_algebra(&a, k, ty).map_err(construction)?;
            finish(&out, alg(r), bytes, "construct derived")
        }
        Construct::CentroidTwist { input, gamma1, gamma2, out } => {
            let (r, bytes) = with_rota_baxter(&input)?;
            let n = r.base.dim;
            let (g1, g2) = (matrix("gamma1", &gamma1, n)?, matrix("gamma2", &gamma2, n)?);
            let (a, op) = cons::centroid_twist(&r, &g1, &g2).map_err(construction)?;
            let mut m = alg(a.clone());
            m.push(Item::Operator(OperatorDecl {
                name: op.name.clone(),
                base: Some(a.name.clone()),
                kind: Some(op.kind.clone()),
                op: op.op.clone(),
            }));
            finish(&out, m, bytes, "construct centroid-twist")
        }
        Construct::RbSplit { input, out } => {
            let (r, bytes) = with_rota_baxter(&input)?;
            let t = cons::rb_tridendriform(&r).map_err(construction)?;
            finish(&out, alg(t), bytes, "construct rb-split")
        }
        Construct::AvgDialgebra { input, out } => {
            let (a, bytes) = one_algebra(&input)?;
            let r = cons::averaging_dialgebra(&a).map_err(construction)?;
            finish(&out, alg(r), bytes, "construct avg-dialgebra")
        }
        Construct::ToDend { input, out } => {
            let (a, bytes) = one_algebra(&input)?;
            let r = cons::tridend_to_dend(&a).map_err(construction)?;
            finish(&out, alg(r), bytes, "construct to-dend")
        }
        Construct::ToAssoc { input, out } => {
            let (a, bytes) = one_algebra(&input)?;
            let r = cons::sum_to_associative(&a).map_err(construction)?;
            finish(&out, alg(r), bytes, "construct to-assoc")
        }
        Construct::Semidirect { input, out } => {
            let l = load(&input.model)?;
            let m = bimodule_of(&l.model, input.item.as_deref())?;
            let r = modules::semidirect(&m, variant(&out.common)).map_err(construction)?;
            finish(&out, alg(r.algebra), l.bytes, "construct semidirect")
        }
        Construct::MatchedSum { input, out } => {
            let l = load(&input.model)?;
            let p = matched_of(&l.model, input.item.as_deref())?;
            let r = modules::matched_sum(&p, variant(&out.common)).map_err(construction)?;
            finish(&out, alg(r.algebra), l.bytes, "construct matched-sum")
        }
        Construct::DualBimodule { input, out } => {
            let l = load(&input.model)?;
            let m = bimodule_of(&l.model, input.item.as_deref())?;
            let d = modules::dual_bimodule(&m, variant(&out.common)).map_err(construction)?;
            finish(&out, ModelFile::single(Item::Bimodule(d)), l.bytes, "construct dual-bimodule")
        }
        Construct::TwistBimodule { input, alpha1, alpha2, beta1, beta2, out } => {
            let l = load(&input.model)?;
            let m = bimodule_of(&l.model, input.item.as_deref())?;
            let (n, d) = (m.base.dim, m.dim);
            let a1 = matrix("alpha1", &alpha1, n)?;
            let a2 = matrix("alpha2", &alpha2, n)?;
            let b1 = matrix("beta1", &beta1, d)?;
            let b2 = matrix("beta2", &beta2, d)?;
            let (_, t) = modules::twist_bimodule(&m, &a1, &a2, &b1, &b2).map_err(construction)?;
            finish(&out, ModelFile::single(Item::Bimodule(t)), l.bytes, "construct twist-bimodule")
        }
    }
}

fn one_algebra(input: &One) -> Res<(AlgebraPresentation, Vec<Vec<u8>>)> {
    let l = load(&input.model)?;
    Ok((algebra_of(&l.model, input.item.as_deref())?, l.bytes))
}

/// The operator file's `map op` as a Rota-Baxter operator on the model's algebra.
fn with_rota_baxter(w: &WithOp) -> Res<(OperatorPresentation, Vec<Vec<u8>>)> {
    let (a, mut bytes) = one_algebra(&w.input)?;
    let ops = load(std::slice::from_ref(&w.op))?;
    bytes.extend(ops.bytes.clone());
    let decl = match pick(&ops.model, "operator", None)? {
        Item::Operator(o) => o.clone(),
        _ => unreachable!(),
    };
    let r = bind_operator(&decl, &a, Some(OperatorKind::RotaBaxter { weight: Scalar::zero() }), w.weight.as_deref())?;
    Ok((r, bytes))
}
