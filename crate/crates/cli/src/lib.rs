//! Command line front end for `mvtensor`: every verb loads its inputs, runs one
//! construction or audit, and produces a [`Report`].

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use mvtensor::bridge::{gamma, lambda, tensor_fu_ring, UnitGroup};
use mvtensor::json::{
    algebra_from_json, algebra_to_json, element_to_json, group_from_json, group_to_json, hom_from_json, parse_element,
    rational_to_json, tensor_to_json, tower_element_from_json, tower_element_to_json,
};
use mvtensor::terms::{free_pmv_evidence, grid_equal, parse_term, term_function_on_grid};
use mvtensor::tower::{check_eps_gamma_identities, lift_hom, product_audit, riesz_audit};
use mvtensor::{
    amalgamate_mv, amalgamate_pmv, associativity_witness, boolean, build_tower, chain, check_axioms, check_bimorphism,
    commutativity_witness, has_infinitesimal, interval_algebra, iso_check, spectral_decomposition, tensor,
    FiniteAlgebra, Hom, PointFunction, Rational01, Signature,
};
use serde::Serialize;
use serde_json::{json, Value};

const TERM_SYNTAX: &str = "Terms are prefix expressions: 0 | 1 | xI | (var I) | (neg t) | (oplus t t) | (odot t t) \
| (prod t t) | (scal P/Q t). Variables are numbered from 1.";

const SPEC_SYNTAX: &str = "An algebra SPEC is chain:N, boolean, group:N1,N2,... (the unit interval of that group) \
or the path of an algebra JSON file.";

#[derive(Debug, Parser)]
#[command(name = "mvt", version, about = "Finite MV-algebras, tensor products and tensor PMV towers")]
#[command(after_help = SPEC_SYNTAX)]
pub struct Cli {
    /// Largest carrier any closure may produce.
    #[arg(long, global = true, default_value_t = mvtensor::DEFAULT_CAP)]
    pub cap: usize,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build or inspect a single algebra.
    #[command(subcommand)]
    Alg(AlgCommand),
    /// The interval algebra [0, ELEM] of an algebra.
    Interval { file: PathBuf, elem: String },
    /// `tensor A B`, or `tensor assoc A B C` for the associativity check.
    Tensor {
        #[arg(num_args = 2..=4, required = true)]
        specs: Vec<String>,
    },
    /// Build the tower over an algebra and optionally audit it.
    Tower(TowerArgs),
    /// Products in the tower.
    #[command(subcommand)]
    Tpmv(TpmvCommand),
    /// Lift a hom into a product algebra to the tower.
    Lift {
        file: PathBuf,
        homfile: PathBuf,
        #[arg(long, default_value_t = 3)]
        levels: usize,
    },
    /// Amalgamate two embeddings of Z.
    Amalgamate {
        zfile: PathBuf,
        afile: PathBuf,
        bfile: PathBuf,
        /// Keep products and scalars shared by A and B.
        #[arg(long)]
        pmv: bool,
    },
    /// The unit interval of a group given as N1,N2,... or a JSON file.
    Gamma { group: String },
    /// The group whose unit interval is the algebra.
    Lambda { file: PathBuf },
    /// Transport the tower over the unit interval back to groups.
    FuRing {
        group: String,
        #[arg(long)]
        levels: usize,
    },
    /// Evaluate, tabulate or compare terms.
    #[command(subcommand, after_help = TERM_SYNTAX)]
    Term(TermCommand),
    /// Compare free-object constructions on the grid Ł_D^K.
    FreeEvidence {
        k: usize,
        d: u64,
        #[arg(long, default_value_t = 2)]
        level: usize,
        /// Drop products from the tower side; the comparison must then fail.
        #[arg(long)]
        planted_defect: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum AlgCommand {
    /// The chain Ł_N.
    Chain { n: u64 },
    /// Close the generators of a file under its signature.
    Generate { file: PathBuf },
    /// Check the axioms of the file's signature.
    Check { file: PathBuf },
    /// Decompose into chains.
    Spectrum { file: PathBuf },
}

#[derive(Debug, Args)]
pub struct TowerArgs {
    pub spec: String,
    #[arg(long)]
    pub levels: usize,
    #[arg(long)]
    pub check_lemma21: bool,
    #[arg(long)]
    pub check_pmv: bool,
}

#[derive(Debug, Subcommand)]
pub enum TpmvCommand {
    /// Multiply tower elements given as JSON `{"level": n, "value": {...}}`.
    Mul { file: PathBuf, x: String, y: String },
}

#[derive(Debug, Subcommand)]
pub enum TermCommand {
    /// Evaluate at comma-separated rationals.
    Eval { expr: String, assign: String },
    /// Tabulate on the grid Ł_D^K.
    Grid { expr: String, k: usize, d: u64 },
    /// Compare two terms on the grid Ł_D^K.
    Equal { left: String, right: String, k: usize, d: u64 },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error(transparent)]
    Core(#[from] mvtensor::Error),
}

pub type CliResult<T> = Result<T, CliError>;

/// Outcome of one command. `payload` is deterministic; `timing_ms` is not.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    pub outcome: &'static str,
    pub passed: bool,
    pub payload: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub timing_ms: u128,
}

impl Report {
    pub fn success(&self) -> bool {
        self.outcome == "ok" && self.passed
    }

    pub fn exit_code(&self) -> i32 {
        match (self.outcome, self.passed) {
            ("ok", true) => 0,
            ("ok", false) => 1,
            _ => 2,
        }
    }

    pub fn payload_bytes(&self) -> Vec<u8> {
        serde_json::to_vec(&self.payload).expect("values serialize")
    }

    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            return serde_json::to_string_pretty(self).expect("reports serialize");
        }
        let status = match (self.outcome, self.passed) {
            ("ok", true) => "ok",
            ("ok", false) => "FAILED",
            _ => "error",
        };
        let mut out = format!("{}: {status}\n", self.command.join(" "));
        if let Some(e) = &self.error {
            out.push_str(&format!("error: {e}\n"));
        }
        if !self.payload.is_null() {
            out.push_str(&serde_json::to_string_pretty(&self.payload).expect("values serialize"));
            out.push('\n');
        }
        out
    }
}

pub fn read_json(path: &Path) -> CliResult<Value> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json { path: path.into(), source })
}

pub fn load_algebra(path: &Path, cap: usize) -> CliResult<FiniteAlgebra> {
    Ok(algebra_from_json(&read_json(path)?, cap)?)
}

pub fn save_json(path: &Path, v: &Value) -> CliResult<()> {
    let text = serde_json::to_string_pretty(v).expect("values serialize");
    fs::write(path, text + "\n").map_err(|source| CliError::Io { path: path.into(), source })
}

fn parse_factors(s: &str) -> CliResult<UnitGroup> {
    let factors = s
        .split(',')
        .map(|f| f.trim().parse::<u64>().map_err(|_| CliError::Usage(format!("bad factor `{f}` in `{s}`"))))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(UnitGroup::new(factors)?)
}

pub fn parse_group(spec: &str) -> CliResult<UnitGroup> {
    let path = Path::new(spec);
    if spec.ends_with(".json") || path.is_file() {
        return Ok(group_from_json(&read_json(path)?)?);
    }
    parse_factors(spec)
}

pub fn parse_spec(spec: &str, cap: usize) -> CliResult<FiniteAlgebra> {
    if let Some(n) = spec.strip_prefix("chain:") {
        let n: u64 = n.parse().map_err(|_| CliError::Usage(format!("bad chain order in `{spec}`")))?;
        if n == 0 {
            return Err(CliError::Usage("chains start at chain:1".into()));
        }
        return Ok(chain(n));
    }
    if spec == "boolean" {
        return Ok(boolean());
    }
    if let Some(g) = spec.strip_prefix("group:") {
        return Ok(gamma(&parse_factors(g)?));
    }
    load_algebra(Path::new(spec), cap)
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("values serialize")
}

/// A hom as its table of target indices.
fn table_json(h: &Hom) -> Value {
    json!(h.table())
}

/// Runs one parsed command line. `argv` is echoed into the report.
pub fn run(cli: &Cli, argv: Vec<String>) -> Report {
    let start = Instant::now();
    let result = dispatch(cli);
    let timing_ms = start.elapsed().as_millis();
    match result {
        Ok((payload, passed)) => Report { command: argv, outcome: "ok", passed, payload, error: None, timing_ms },
        Err(e) => Report {
            command: argv,
            outcome: "error",
            passed: false,
            payload: Value::Null,
            error: Some(e.to_string()),
            timing_ms,
        },
    }
}

/// Parses `argv` (including the program name) and runs it.
pub fn run_args<I, S>(argv: I) -> Result<Report, clap::Error>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let cli = Cli::try_parse_from(&argv)?;
    Ok(run(&cli, argv.into_iter().skip(1).collect()))
}

fn dispatch(cli: &Cli) -> CliResult<(Value, bool)> {
    let cap = cli.cap;
    match &cli.command {
        Command::Alg(a) => alg(a, cap),
        Command::Interval { file, elem } => {
            let alg = load_algebra(file, cap)?;
            let top = parse_element(elem, alg.points())?;
            let iv = interval_algebra(&alg, &top)?;
            let report = check_axioms(&iv, Signature::Mv);
            let passed = report.all_passed();
            Ok((json!({ "algebra": algebra_to_json(&iv), "size": iv.len(), "axioms": to_value(&report) }), passed))
        }
        Command::Tensor { specs } => tensor_cmd(specs, cap),
        Command::Tower(args) => tower_cmd(args, cap),
        Command::Tpmv(TpmvCommand::Mul { file, x, y }) => {
            let base = Arc::new(load_algebra(file, cap)?);
            let level_of = |s: &str| -> CliResult<usize> {
                let v: Value =
                    serde_json::from_str(s).map_err(|e| CliError::Usage(format!("bad tower element: {e}")))?;
                v.get("level")
                    .and_then(Value::as_u64)
                    .map(|l| l as usize)
                    .ok_or_else(|| CliError::Usage("tower element needs a level".into()))
            };
            let levels = level_of(x)? + level_of(y)?;
            let tw = build_tower(&base, levels, cap)?;
            let xe = tower_element_from_json(&tw, &serde_json::from_str(x).expect("checked above"))?;
            let ye = tower_element_from_json(&tw, &serde_json::from_str(y).expect("checked above"))?;
            let p = tw.product(&xe, &ye)?;
            let c = tw.canonical(&p);
            Ok((
                json!({
                    "product": tower_element_to_json(&tw, &p),
                    "canonical": tower_element_to_json(&tw, &c),
                }),
                true,
            ))
        }
        Command::Lift { file, homfile, levels } => {
            let base = Arc::new(load_algebra(file, cap)?);
            let f = hom_from_json(&base, &read_json(homfile)?, cap)?;
            let tw = build_tower(&base, *levels, cap)?;
            let lift = lift_hom(&tw, f.target(), &f)?;
            let audit = lift.audit(&tw, &f);
            let passed = audit.all_passed();
            let tables: Vec<Value> = lift.levels.iter().map(table_json).collect();
            Ok((json!({ "level_sizes": tw.sizes(), "tables": tables, "audit": to_value(&audit) }), passed))
        }
        Command::Amalgamate { zfile, afile, bfile, pmv } => {
            let z = Arc::new(load_algebra(zfile, cap)?);
            let za = leg(&z, afile, cap)?;
            let zb = leg(&z, bfile, cap)?;
            let am = if *pmv { amalgamate_pmv(&za, &zb, cap)? } else { amalgamate_mv(&za, &zb, cap)? };
            let orders = spectral_decomposition(&am.algebra)?.orders();
            let commutes = (0..z.len()).all(|i| am.f_a.apply(za.apply(i)) == am.f_b.apply(zb.apply(i)));
            let injective = am.f_a.is_injective() && am.f_b.is_injective();
            Ok((
                json!({
                    "algebra": algebra_to_json(&am.algebra),
                    "size": am.algebra.len(),
                    "orders": orders,
                    "f_a": table_json(&am.f_a),
                    "f_b": table_json(&am.f_b),
                    "square_commutes": commutes,
                    "legs_injective": injective,
                }),
                commutes && injective,
            ))
        }
        Command::Gamma { group } => {
            let g = parse_group(group)?;
            Ok((json!({ "group": group_to_json(&g), "algebra": algebra_to_json(&gamma(&g)) }), true))
        }
        Command::Lambda { file } => {
            let alg = load_algebra(file, cap)?;
            let l = lambda(&alg)?;
            let round_trip = l.iso.is_bijective();
            Ok((
                json!({ "group": group_to_json(&l.group), "iso": table_json(&l.iso), "round_trip": round_trip }),
                round_trip,
            ))
        }
        Command::FuRing { group, levels } => {
            let g = parse_group(group)?;
            let fu = tensor_fu_ring(&g, *levels, cap)?;
            let embeddings: Vec<Value> = fu
                .embeddings
                .iter()
                .map(|m| {
                    let images: Vec<Value> = m
                        .images
                        .iter()
                        .map(|img| Value::Array(img.iter().map(|q| json!([q.numer(), q.denom()])).collect()))
                        .collect();
                    json!({ "source": group_to_json(&m.source), "target": group_to_json(&m.target), "images": images, "injective": m.is_injective() })
                })
                .collect();
            let gamma_iso: Vec<bool> = fu
                .levels
                .iter()
                .zip(fu.tower.levels())
                .map(|(l, t)| iso_check(&Arc::new(gamma(&l.group)), t).is_some())
                .collect();
            let passed = gamma_iso.iter().all(|b| *b) && fu.embeddings.iter().all(|m| m.is_injective());
            Ok((
                json!({
                    "base": group_to_json(&fu.base),
                    "levels": fu.levels.iter().map(|l| group_to_json(&l.group)).collect::<Vec<_>>(),
                    "gamma_matches_tower": gamma_iso,
                    "embeddings": embeddings,
                }),
                passed,
            ))
        }
        Command::Term(t) => term_cmd(t),
        Command::FreeEvidence { k, d, level, planted_defect } => {
            let e = free_pmv_evidence(*k, *d, *level, cap, *planted_defect)?;
            Ok((to_value(&e), e.holds))
        }
    }
}

fn leg(z: &Arc<FiniteAlgebra>, path: &Path, cap: usize) -> CliResult<Hom> {
    let v = read_json(path)?;
    if v.get("target").is_some() {
        return Ok(hom_from_json(z, &v, cap)?);
    }
    let a = Arc::new(algebra_from_json(&v, cap)?);
    if a.points().len() != z.points().len() {
        return Err(CliError::Usage(format!(
            "{}: give a hom file when Z and the target differ in points",
            path.display()
        )));
    }
    let pts = a.points().clone();
    Ok(Hom::from_values(z.clone(), a, |f| PointFunction::new(pts.clone(), f.values().to_vec()).expect("same length"))?)
}

fn alg(cmd: &AlgCommand, cap: usize) -> CliResult<(Value, bool)> {
    match cmd {
        AlgCommand::Chain { n } => {
            if *n == 0 {
                return Err(CliError::Usage("chains start at Ł_1".into()));
            }
            Ok((algebra_to_json(&chain(*n)), true))
        }
        AlgCommand::Generate { file } => {
            let a = load_algebra(file, cap)?;
            Ok((json!({ "size": a.len(), "algebra": algebra_to_json(&a) }), true))
        }
        AlgCommand::Check { file } => {
            let a = load_algebra(file, cap)?;
            let report = check_axioms(&a, a.signature());
            let passed = report.all_passed();
            Ok((to_value(&report), passed))
        }
        AlgCommand::Spectrum { file } => {
            let a = load_algebra(file, cap)?;
            let s = spectral_decomposition(&a)?;
            let inf = has_infinitesimal(&a);
            Ok((
                json!({ "orders": s.orders(), "components": to_value(&s.components), "infinitesimal": inf.map(|i| a.describe(i)) }),
                inf.is_none(),
            ))
        }
    }
}

fn tensor_cmd(specs: &[String], cap: usize) -> CliResult<(Value, bool)> {
    if specs[0] == "assoc" {
        if specs.len() != 4 {
            return Err(CliError::Usage("tensor assoc needs three algebras".into()));
        }
        let a = Arc::new(parse_spec(&specs[1], cap)?);
        let b = Arc::new(parse_spec(&specs[2], cap)?);
        let c = Arc::new(parse_spec(&specs[3], cap)?);
        let w = associativity_witness(&a, &b, &c, cap)?;
        let swap = commutativity_witness(&a, &b, cap)?;
        let triple = w.triple_equal();
        let passed = triple && w.regroup.is_bijective() && swap.is_bijective();
        return Ok((
            json!({
                "size": w.left.len(),
                "orders": spectral_decomposition(&w.left)?.orders(),
                "brackets_equal": true,
                "triple_products_equal": triple,
                "swap_bijective": swap.is_bijective(),
            }),
            passed,
        ));
    }
    if specs.len() != 2 {
        return Err(CliError::Usage("tensor takes two algebras, or `assoc` and three".into()));
    }
    let a = Arc::new(parse_spec(&specs[0], cap)?);
    let b = Arc::new(parse_spec(&specs[1], cap)?);
    let t = tensor(&a, &b, cap)?;
    let bimorphism = check_bimorphism(&t.beta).holds;
    let orders = spectral_decomposition(&t.algebra)?.orders();
    let mut payload = json!({
        "algebra": tensor_to_json(&t),
        "size": t.algebra.len(),
        "orders": orders,
        "beta_is_bimorphism": bimorphism,
    });
    let mut passed = bimorphism;
    if let [n] = orders[..] {
        if t.algebra.points().len() == 1 {
            let iso = iso_check(&t.algebra, &Arc::new(chain(n)));
            passed &= iso.is_some();
            payload["iso_to_chain"] = json!({ "order": n, "table": iso.map(|h| h.table().to_vec()) });
        }
    }
    Ok((payload, passed))
}

fn tower_cmd(args: &TowerArgs, cap: usize) -> CliResult<(Value, bool)> {
    let base = Arc::new(parse_spec(&args.spec, cap)?);
    let tw = build_tower(&base, args.levels, cap)?;
    let infinitesimals: Vec<Option<String>> =
        tw.infinitesimals().iter().zip(tw.levels()).map(|(i, l)| i.map(|i| l.describe(i))).collect();
    let mut passed = infinitesimals.iter().all(Option::is_none);
    let mut payload = json!({ "sizes": tw.sizes(), "infinitesimals": infinitesimals, "eps_injective": true });
    if args.check_lemma21 {
        let r = check_eps_gamma_identities(&tw, cap)?;
        passed &= r.all_passed();
        payload["lemma21"] = to_value(&r);
    }
    if args.check_pmv {
        let r = product_audit(&tw)?;
        passed &= r.all_passed();
        payload["product"] = to_value(&r);
        if base.signature().has_scalars() {
            let r = riesz_audit(&tw)?;
            passed &= r.all_passed();
            payload["riesz"] = to_value(&r);
        }
    }
    Ok((payload, passed))
}

fn term_cmd(cmd: &TermCommand) -> CliResult<(Value, bool)> {
    match cmd {
        TermCommand::Eval { expr, assign } => {
            let values = assign.split(',').map(str::parse).collect::<Result<Vec<Rational01>, _>>()?;
            let t = parse_term(expr, Signature::Fmv, values.len())?;
            let v = t.eval(&values);
            Ok((
                json!({ "term": t.to_string(), "signature": t.signature().as_str(), "value": rational_to_json(v) }),
                true,
            ))
        }
        TermCommand::Grid { expr, k, d } => {
            let t = parse_term(expr, Signature::Fmv, *k)?;
            let f = term_function_on_grid(&t, *k, *d)?;
            Ok((
                json!({ "term": t.to_string(), "points": f.domain().len(), "values": element_to_json(f.domain(), f.values()) }),
                true,
            ))
        }
        TermCommand::Equal { left, right, k, d } => {
            let a = parse_term(left, Signature::Fmv, *k)?;
            let b = parse_term(right, Signature::Fmv, *k)?;
            let v = grid_equal(&a, &b, *k, *d)?;
            Ok((to_value(&v), v.equal))
        }
    }
}
