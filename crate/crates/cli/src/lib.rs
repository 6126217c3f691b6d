//! Command dispatch and report emission for the `quiverhh` binary.
//!
//! Budgets resolve in this order, later wins: built-in defaults, `budget`
//! lines in the input file, `QUIVERHH_BUDGET_<KEY>` environment variables,
//! command-line flags.

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use quiverhh::dsl::{parse_input, InputDocument, NamedIdeal, BUDGET_KEYS};
use quiverhh::exactla::Scalar;
use quiverhh::gamma::{build_gamma, sources, verify_theorem1, GammaBudget, GammaQuiver};
use quiverhh::hh1::HH1Space;
use quiverhh::palg::Automorphism;
use quiverhh::pi1::{abelian_invariants, hom_space, homotopy_pairs, presentation_of, Tri};
use quiverhh::theta::{
    centralizer, image_theta_with_tree, is_diagonalizable_set, is_maximal_diagonalizable, subspace_classes, theta,
    Maximality, Presentation, Setting,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_UNKNOWN: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "quiverhh",
    version,
    about = "Fundamental groups, HH^1 and diagonalizable subalgebras of bound quiver algebras",
    after_help = "Products in relations are written right to left: f*e*a runs a, then e, then f.\n\
Budget overrides may also come from QUIVERHH_BUDGET_MAX_WORD_LEN, QUIVERHH_BUDGET_MAX_NODES,\n\
QUIVERHH_BUDGET_MAX_IDEALS, QUIVERHH_BUDGET_MAX_ENUMERATION, QUIVERHH_BUDGET_MAX_CANDIDATES\n\
and QUIVERHH_BUDGET_RATIONAL_GRID. Flags win over the environment, which wins over the file.\n\
Exit codes: 0 ok, 1 a check failed, 2 input error, 3 undecided items within budget."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(clap::Args, Debug, Clone)]
pub struct CommonArgs {
    /// Input file in the quiver DSL.
    pub file: String,
    /// Name of the ideal to use; defaults to the only ideal in the file.
    #[arg(long)]
    pub ideal: Option<String>,
    /// Emit canonical JSON instead of text.
    #[arg(long)]
    pub json: bool,
    /// Longest word the homotopy search may build.
    #[arg(long)]
    pub max_word_len: Option<u64>,
    /// Node limit for one homotopy search.
    #[arg(long)]
    pub max_nodes: Option<u64>,
    /// Ideals explored while building gamma.
    #[arg(long)]
    pub max_ideals: Option<u64>,
    /// Automorphisms or subspaces enumerated in exhaustive checks.
    #[arg(long)]
    pub max_enumeration: Option<u64>,
    /// Candidates tried when testing maximality.
    #[arg(long)]
    pub max_candidates: Option<u64>,
    /// Coefficient bound for the maximality grid over QQ.
    #[arg(long)]
    pub rational_grid: Option<u64>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Parse the file and check every ideal.
    Validate(CommonArgs),
    /// Presentation and abelianization of the fundamental group.
    Pi1(CommonArgs),
    /// Additive characters Hom(π₁, k⁺) as arrow weights.
    Homk(CommonArgs),
    /// First Hochschild cohomology.
    Hh1(CommonArgs),
    /// Image of θ for the natural presentation.
    Theta(CommonArgs),
    /// Quiver of homotopy relations reachable from the ideal.
    Gamma(CommonArgs),
    /// Maximality of Im θ among diagonalizable subalgebras.
    Maxdiag(CommonArgs),
    /// Full verification harness for the classification theorem.
    Verify(CommonArgs),
}

impl Command {
    pub fn args(&self) -> &CommonArgs {
        match self {
            Command::Validate(a)
            | Command::Pi1(a)
            | Command::Homk(a)
            | Command::Hh1(a)
            | Command::Theta(a)
            | Command::Gamma(a)
            | Command::Maxdiag(a)
            | Command::Verify(a) => a,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate(_) => "validate",
            Command::Pi1(_) => "pi1",
            Command::Homk(_) => "homk",
            Command::Hh1(_) => "hh1",
            Command::Theta(_) => "theta",
            Command::Gamma(_) => "gamma",
            Command::Maxdiag(_) => "maxdiag",
            Command::Verify(_) => "verify",
        }
    }
}

/// A finished command: exit code and the bytes for stdout.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Structured result before rendering.
#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub field: String,
    pub payload: Map<String, Value>,
    pub failures: Vec<String>,
    pub unknowns: Vec<String>,
    pub text: Vec<String>,
}

impl Report {
    fn new(command: &str, doc: &InputDocument) -> Report {
        Report {
            command: command.to_string(),
            field: doc.field().to_string(),
            payload: Map::new(),
            failures: Vec::new(),
            unknowns: Vec::new(),
            text: Vec::new(),
        }
    }

    fn put(&mut self, key: &str, v: Value) {
        self.payload.insert(key.to_string(), v);
    }

    fn line(&mut self, s: impl Into<String>) {
        self.text.push(s.into());
    }

    pub fn code(&self) -> i32 {
        if !self.failures.is_empty() {
            EXIT_CHECK_FAILED
        } else if !self.unknowns.is_empty() {
            EXIT_UNKNOWN
        } else {
            EXIT_OK
        }
    }

    pub fn to_json(&self) -> Value {
        let mut m = self.payload.clone();
        m.insert("command".into(), json!(self.command));
        m.insert("field".into(), json!(self.field));
        m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        m.insert(
            "status".into(),
            json!({
                "ok": self.failures.is_empty() && self.unknowns.is_empty(),
                "failures": self.failures,
                "unknowns": self.unknowns,
            }),
        );
        Value::Object(m)
    }

    pub fn emit(&self, json_mode: bool) -> String {
        if json_mode {
            let mut s = serde_json::to_string(&self.to_json()).expect("serializable");
            s.push('\n');
            s
        } else {
            let mut out = format!("{} over {}\n", self.command, self.field);
            for l in &self.text {
                out.push_str(l);
                out.push('\n');
            }
            for f in &self.failures {
                out.push_str(&format!("FAILED {f}\n"));
            }
            for u in &self.unknowns {
                out.push_str(&format!("UNKNOWN {u}\n"));
            }
            out
        }
    }
}

/// Rationals as "p/q" strings, GF(p) values as integers.
pub fn scalar_json(s: &Scalar) -> Value {
    match s {
        Scalar::Rational(r) => json!(r.to_string()),
        Scalar::Modular { value, .. } => json!(value),
    }
}

fn tri_json(t: Tri) -> Value {
    json!(t.as_str())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budgets {
    pub values: [u64; 6],
}

impl Budgets {
    pub fn resolve(doc: &InputDocument, args: &CommonArgs, env: &dyn Fn(&str) -> Option<String>) -> Result<Budgets, String> {
        let d = GammaBudget::default();
        let mut values = [
            d.homotopy.max_word_len as u64,
            d.homotopy.max_nodes as u64,
            d.max_ideals as u64,
            d.max_enumeration as u64,
            d.maximality.max_candidates as u64,
            d.maximality.rational_grid as u64,
        ];
        let flags = [
            args.max_word_len,
            args.max_nodes,
            args.max_ideals,
            args.max_enumeration,
            args.max_candidates,
            args.rational_grid,
        ];
        for (i, key) in BUDGET_KEYS.iter().enumerate() {
            if let Some(v) = doc.budgets.get(*key) {
                values[i] = *v;
            }
            let var = format!("QUIVERHH_BUDGET_{}", key.to_uppercase());
            if let Some(raw) = env(&var) {
                values[i] = raw.trim().parse().map_err(|_| format!("{var} is not a nonnegative integer: `{raw}`"))?;
            }
            if let Some(v) = flags[i] {
                values[i] = v;
            }
        }
        Ok(Budgets { values })
    }

    pub fn gamma(&self) -> GammaBudget {
        let v = |i: usize| usize::try_from(self.values[i]).unwrap_or(usize::MAX);
        let mut b = GammaBudget::default();
        b.homotopy.max_word_len = v(0);
        b.homotopy.max_nodes = v(1);
        b.max_ideals = v(2);
        b.max_enumeration = v(3);
        b.maximality.max_candidates = v(4);
        b.maximality.rational_grid = i64::try_from(self.values[5]).unwrap_or(i64::MAX);
        b
    }
}

fn pick_ideal<'a>(doc: &'a InputDocument, name: Option<&str>) -> Result<&'a NamedIdeal, String> {
    match name {
        Some(n) => doc.ideal(n).ok_or_else(|| format!("no ideal named `{n}`")),
        None if doc.ideals.len() == 1 => Ok(&doc.ideals[0]),
        None if doc.ideals.is_empty() => Err("the file declares no ideal".into()),
        None => Err("several ideals declared; pass --ideal".into()),
    }
}

fn describe_json(h: &HH1Space, v: &[Scalar]) -> Value {
    let m: Map<String, Value> = h
        .describe(v)
        .into_iter()
        .filter(|(_, img)| img != "0")
        .map(|(a, img)| (a, json!(img)))
        .collect();
    Value::Object(m)
}

fn describe_text(h: &HH1Space, v: &[Scalar]) -> String {
    let parts: Vec<String> = h
        .describe(v)
        .into_iter()
        .filter(|(_, img)| img != "0")
        .map(|(a, img)| format!("{a} -> {img}"))
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(", ")
    }
}

fn weights_json(doc: &InputDocument, t: &[Scalar]) -> Value {
    let q = doc.quiver();
    let m: Map<String, Value> = t
        .iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(a, x)| (q.arrow(a).name.clone(), scalar_json(x)))
        .collect();
    Value::Object(m)
}

fn automorphism_json(a: &Automorphism) -> Value {
    let m: Map<String, Value> = a
        .describe()
        .into_iter()
        .map(|(k, v)| (k, json!(v)))
        .collect();
    Value::Object(m)
}

fn run_validate(doc: &InputDocument, r: &mut Report) {
    let q = doc.quiver();
    r.put("vertices", json!(q.vertex_count()));
    r.put("arrows", json!(q.arrow_count()));
    let mut ideals = Vec::new();
    for i in &doc.ideals {
        let dim = i.ideal.normal_paths().len();
        let gb = i.ideal.format_gb();
        r.line(format!("ideal {}: dim A = {}, reduced basis [{}]", i.name, dim, gb.join(", ")));
        if let Err(e) = i.ideal.check_reduced_basis() {
            r.failures.push(format!("ideal {}: {e}", i.name));
        }
        ideals.push(json!({
            "name": i.name,
            "dim_algebra": dim,
            "reduced_basis": gb,
            "monomial": i.ideal.is_monomial(),
        }));
    }
    r.line(format!("{} vertices, {} arrows", q.vertex_count(), q.arrow_count()));
    r.put("ideals", Value::Array(ideals));
    r.put("echo", json!(doc.to_dsl()));
}

fn run_pi1(doc: &InputDocument, ni: &NamedIdeal, r: &mut Report) {
    let q = doc.quiver();
    let tree = doc.spanning_tree();
    let p = presentation_of(&ni.ideal, &tree);
    let inv = abelian_invariants(&p);
    let gens: Vec<String> = p.generators.iter().map(|&a| q.arrow(a).name.clone()).collect();
    let rels: Vec<String> = p.relators.iter().map(|w| p.format_word(q, w)).collect();
    let alg = ni.ideal.algebra();
    let pairs: Vec<Value> = homotopy_pairs(&ni.ideal)
        .into_iter()
        .map(|(u, v)| json!([alg.path_name(u), alg.path_name(v)]))
        .collect();
    r.line(format!("generators: {}", gens.join(", ")));
    r.line(format!("relators: {}", if rels.is_empty() { "none".into() } else { rels.join(", ") }));
    r.line(format!("abelianization: {inv}"));
    r.put("generators", json!(gens));
    r.put("relators", json!(rels));
    r.put("pairs", Value::Array(pairs));
    r.put(
        "abelian_invariants",
        json!({
            "free_rank": inv.free_rank,
            "torsion": inv.torsion.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
            "display": inv.to_string(),
        }),
    );
}

fn run_homk(doc: &InputDocument, ni: &NamedIdeal, r: &mut Report) {
    let h = hom_space(&ni.ideal, &doc.spanning_tree());
    let basis: Vec<Value> = h.basis.iter().map(|t| weights_json(doc, t)).collect();
    r.line(format!("dim Hom(pi1, k+) = {}", h.dim()));
    for t in &h.basis {
        let parts: Vec<String> = t
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(a, x)| format!("{}={x}", doc.quiver().arrow(a).name))
            .collect();
        r.line(format!("  {}", parts.join(" ")));
    }
    r.put("dim", json!(h.dim()));
    r.put("basis", Value::Array(basis));
}

fn setting(ni: &NamedIdeal) -> Result<Setting, String> {
    Setting::new(&ni.ideal).map_err(|e| e.to_string())
}

fn run_hh1(ni: &NamedIdeal, r: &mut Report) -> Result<(), String> {
    let s = setting(ni)?;
    let h = &s.hh1;
    let basis = h.basis();
    r.line(format!("dim Der0 = {}, dim Int0 = {}, dim HH1 = {}", h.der0().dim(), h.int0().dim(), h.dim()));
    for (i, b) in basis.iter().enumerate() {
        r.line(format!("  h{i}: {}", describe_text(h, &b.vector)));
    }
    let mut brackets = Vec::new();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let c = h.bracket(&basis[i], &basis[j]);
            if !c.is_zero() {
                let coords = h.classes().coordinates(&c.vector).expect("bracket lies in HH1");
                brackets.push(json!({"left": i, "right": j, "value": coords.iter().map(scalar_json).collect::<Vec<_>>()}));
                r.line(format!("  [h{i}, h{j}] = {}", describe_text(h, &c.vector)));
            }
        }
    }
    r.put("dim", json!(h.dim()));
    r.put("dim_der0", json!(h.der0().dim()));
    r.put("dim_int0", json!(h.int0().dim()));
    r.put("dim_algebra", json!(s.algebra().dim()));
    r.put("abelian", json!(brackets.is_empty()));
    r.put("basis", Value::Array(basis.iter().map(|b| describe_json(h, &b.vector)).collect()));
    r.put("brackets", Value::Array(brackets));
    Ok(())
}

fn run_theta(doc: &InputDocument, ni: &NamedIdeal, r: &mut Report) -> Result<(), String> {
    let s = setting(ni)?;
    let nu = Presentation::natural(&s);
    let tree = doc.spanning_tree();
    let hom = hom_space(&ni.ideal, &tree);
    let mut images = Vec::new();
    for t in &hom.basis {
        let c = theta(&s, &nu, t).map_err(|e| e.to_string())?;
        r.line(format!("  theta({}) = {}", weights_json(doc, t), describe_text(&s.hh1, &c.vector)));
        images.push(json!({"character": weights_json(doc, t), "class": describe_json(&s.hh1, &c.vector)}));
    }
    let im = image_theta_with_tree(&s, &nu, &tree).map_err(|e| e.to_string())?;
    let injective = im.dim() == hom.dim();
    let diag = is_diagonalizable_set(&s, &subspace_classes(&im));
    if !injective {
        r.failures.push("theta is not injective".into());
    }
    if !diag {
        r.failures.push("image of theta is not diagonalizable".into());
    }
    r.line(format!("dim Hom = {}, dim Im theta = {}, dim HH1 = {}", hom.dim(), im.dim(), s.hh1.dim()));
    r.put("dim_hom", json!(hom.dim()));
    r.put("dim_image", json!(im.dim()));
    r.put("dim_hh1", json!(s.hh1.dim()));
    r.put("injective", json!(injective));
    r.put("diagonalizable", json!(diag));
    r.put("images", Value::Array(images));
    Ok(())
}

fn gamma_json(doc: &InputDocument, g: &GammaQuiver) -> Value {
    let alg = &doc.algebra;
    let q = doc.quiver();
    let vertices: Vec<Value> = (0..g.vertex_count())
        .map(|v| {
            let rep = g.representative(v);
            json!({
                "index": v,
                "representative": rep.format_gb(),
                "pairs": g.vertices[v].pairs.iter().map(|&(u, w)| json!([alg.path_name(u), alg.path_name(w)])).collect::<Vec<_>>(),
            })
        })
        .collect();
    let arrows: Vec<Value> = g
        .arrows
        .iter()
        .map(|a| {
            let t = &g.transitions[a.transition];
            json!({
                "from": a.from,
                "to": a.to,
                "arrow": q.arrow(t.arrow).name,
                "path": alg.path_name(t.path),
                "tau": scalar_json(&t.tau),
                "label": t.label.as_str(),
            })
        })
        .collect();
    let quarantined: Vec<Value> = g
        .quarantined
        .iter()
        .map(|x| json!({"from_ideal": x.from, "arrow": q.arrow(x.arrow).name, "path": alg.path_name(x.path), "tau": scalar_json(&x.tau), "reason": x.reason}))
        .collect();
    let src = sources(g);
    json!({
        "vertices": vertices,
        "vertex_count": g.vertex_count(),
        "arrow_count": g.arrows.len(),
        "arrows": arrows,
        "ideals_explored": g.ideals.len(),
        "complete": g.is_complete(),
        "exhausted": g.exhausted,
        "exhaustive_taus": g.exhaustive_taus,
        "acyclic": g.is_acyclic(),
        "quarantined": quarantined,
        "sources": src.sources,
        "unique_source": src.unique,
        "hypotheses": {
            "h1": src.h1,
            "h2": src.h2,
            "double_bypass": src.double_bypass,
            "characteristic_zero": src.characteristic_zero,
            "monomial_presentation": src.monomial_presentation,
            "multiple_arrows": src.multiple_arrows,
        },
    })
}

fn run_gamma(doc: &InputDocument, ni: &NamedIdeal, b: &Budgets, r: &mut Report) -> Result<(), String> {
    let g = build_gamma(&ni.ideal, b.gamma()).map_err(|e| e.to_string())?;
    let src = sources(&g);
    r.line(format!("{} vertices, {} arrows, sources {:?}", g.vertex_count(), g.arrows.len(), src.sources));
    for a in &g.arrows {
        let t = &g.transitions[a.transition];
        r.line(format!(
            "  v{} -> v{} via transvection {} by {} with tau = {}",
            a.from,
            a.to,
            doc.quiver().arrow(t.arrow).name,
            doc.algebra.path_name(t.path),
            t.tau
        ));
    }
    r.line(format!("unique source: {}; H1 {}; H2 {}", src.unique, src.h1, src.h2));
    if g.exhausted {
        r.unknowns.push("ideal budget exhausted; graph is partial".into());
    }
    for x in &g.quarantined {
        r.unknowns.push(format!("edge from ideal {} quarantined: {}", x.from, x.reason));
    }
    if !g.is_acyclic() {
        r.failures.push("gamma has an oriented cycle".into());
    }
    if let Value::Object(m) = gamma_json(doc, &g) {
        r.payload.extend(m);
    }
    Ok(())
}

fn run_maxdiag(ni: &NamedIdeal, b: &Budgets, r: &mut Report) -> Result<(), String> {
    let s = setting(ni)?;
    let im = quiverhh::theta::image_theta(&s, &Presentation::natural(&s)).map_err(|e| e.to_string())?;
    let c = centralizer(&s, &subspace_classes(&im));
    let m = is_maximal_diagonalizable(&s, &im, b.gamma().maximality).map_err(|e| e.to_string())?;
    r.put("dim_image", json!(im.dim()));
    r.put("dim_centralizer", json!(c.dim()));
    r.put("dim_hh1", json!(s.hh1.dim()));
    r.line(format!("dim Im theta = {}, dim centralizer = {}, dim HH1 = {}", im.dim(), c.dim(), s.hh1.dim()));
    match m {
        Maximality::Yes => {
            r.put("maximal", json!("yes"));
            r.line("maximal: yes");
        }
        Maximality::No { witness } => {
            r.put("maximal", json!("no"));
            r.put("witness", describe_json(&s.hh1, &witness.vector));
            r.line(format!("maximal: no, extends by {}", describe_text(&s.hh1, &witness.vector)));
        }
        Maximality::Unknown { checked } => {
            r.put("maximal", json!("unknown"));
            r.put("candidates_checked", json!(checked));
            r.line(format!("maximal: unknown after {checked} candidates"));
            r.unknowns.push("maximality undecided within budget".into());
        }
    }
    Ok(())
}

fn run_verify(doc: &InputDocument, ni: &NamedIdeal, b: &Budgets, r: &mut Report) -> Result<(), String> {
    let rep = verify_theorem1(&ni.ideal, b.gamma()).map_err(|e| e.to_string())?;
    let s = setting(ni)?;
    let mut checks = Vec::new();
    for c in &rep.checks {
        r.line(format!("  {:<40} {}{}", c.name, c.status.as_str(), if c.detail.is_empty() { String::new() } else { format!("  ({})", c.detail) }));
        match c.status {
            Tri::No => r.failures.push(c.name.clone()),
            Tri::Unknown => r.unknowns.push(c.name.clone()),
            Tri::Yes => {}
        }
        checks.push(json!({"name": c.name, "status": tri_json(c.status), "detail": c.detail}));
    }
    let family = |f: &Option<Vec<quiverhh::exactla::Subspace>>| -> Value {
        match f {
            None => Value::Null,
            Some(v) => Value::Array(
                v.iter()
                    .map(|sub| Value::Array(subspace_classes(sub).iter().map(|c| describe_json(&s.hh1, &c.vector)).collect()))
                    .collect(),
            ),
        }
    };
    let conj: Vec<Value> = rep
        .conjugations
        .iter()
        .map(|c| {
            json!({
                "from": subspace_classes(&c.from).iter().map(|x| describe_json(&s.hh1, &x.vector)).collect::<Vec<_>>(),
                "to": subspace_classes(&c.to).iter().map(|x| describe_json(&s.hh1, &x.vector)).collect::<Vec<_>>(),
                "automorphism": automorphism_json(&c.automorphism),
            })
        })
        .collect();
    r.line(format!(
        "{} checks, {} failed, {} unknown",
        rep.checks.len(),
        rep.failures(),
        rep.unknowns()
    ));
    r.put("checks", Value::Array(checks));
    r.put("gamma", gamma_json(doc, &rep.gamma));
    r.put("maximal_family", family(&rep.maximal_family));
    r.put("theta_family", family(&rep.theta_family));
    r.put("conjugations", Value::Array(conj));
    r.put("passed", json!(rep.passed()));
    Ok(())
}

/// Runs one command against file contents; the binary supplies the real
/// environment, tests may pass a closure.
pub fn run_on_text(cmd: &Command, text: &str, env: &dyn Fn(&str) -> Option<String>) -> Outcome {
    let args = cmd.args();
    let input_error = |msg: String| Outcome {
        code: EXIT_INPUT,
        stdout: String::new(),
        stderr: format!("error: {msg}\n"),
    };
    let doc = match parse_input(text) {
        Ok(d) => d,
        Err(e) => return input_error(format!("{}: {e}", args.file)),
    };
    let budgets = match Budgets::resolve(&doc, args, env) {
        Ok(b) => b,
        Err(e) => return input_error(e),
    };
    let mut r = Report::new(cmd.name(), &doc);
    let needs_ideal = !matches!(cmd, Command::Validate(_));
    let ni = if needs_ideal {
        match pick_ideal(&doc, args.ideal.as_deref()) {
            Ok(i) => {
                r.put("ideal", json!(i.name));
                Some(i)
            }
            Err(e) => return input_error(e),
        }
    } else {
        None
    };
    let result = match cmd {
        Command::Validate(_) => {
            run_validate(&doc, &mut r);
            Ok(())
        }
        Command::Pi1(_) => {
            run_pi1(&doc, ni.unwrap(), &mut r);
            Ok(())
        }
        Command::Homk(_) => {
            run_homk(&doc, ni.unwrap(), &mut r);
            Ok(())
        }
        Command::Hh1(_) => run_hh1(ni.unwrap(), &mut r),
        Command::Theta(_) => run_theta(&doc, ni.unwrap(), &mut r),
        Command::Gamma(_) => run_gamma(&doc, ni.unwrap(), &budgets, &mut r),
        Command::Maxdiag(_) => run_maxdiag(ni.unwrap(), &budgets, &mut r),
        Command::Verify(_) => run_verify(&doc, ni.unwrap(), &budgets, &mut r),
    };
    if let Err(e) = result {
        return input_error(e);
    }
    Outcome {
        code: r.code(),
        stdout: r.emit(args.json),
        stderr: String::new(),
    }
}

/// Parses argv, reads the file and runs the command.
pub fn run<I, T>(argv: I, env: &dyn Fn(&str) -> Option<String>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: rendered, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: rendered }
            };
        }
    };
    let file = &cli.command.args().file;
    match std::fs::read_to_string(file) {
        Ok(text) => run_on_text(&cli.command, &text, env),
        Err(e) => Outcome {
            code: EXIT_INPUT,
            stdout: String::new(),
            stderr: format!("error: cannot read {file}: {e}\n"),
        },
    }
}

/// Environment lookup used by the binary.
pub fn process_env(key: &str) -> Option<String> {
    std::env::var(key).ok()
}

