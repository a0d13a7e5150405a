use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use logdiff::complexes::{
    augmented_spencer_check, graded_spencer, koszul_complex, spencer_complex, symbol_of_spencer, FreeComplex,
};
use logdiff::corpus;
use logdiff::groebner::{
    buchberger_with_deadline, ideal_dimension, log_derivations_with, perversity_certificate, Freeness,
    LogBasisError, LogBasisOptions, MonomialOrder, Verdict,
};
use logdiff::logder::{is_logarithmic, saito_frame, FrameDocError, LogCheck, SaitoFailure};
use logdiff::logforms::{
    cartan_sides, de_rham_square, dual_basis, dual_wedge, subsets, FormError, LogConnection, LogForm,
};
use logdiff::logops::{
    meromorphic_shift, meromorphic_shift_right, symbol_chain, NotLogarithmic, PbwDocument, ShiftError, SymbolError,
};
use logdiff::manifest::{self, Manifest};
use logdiff::{
    parse_operator, parse_polynomial, Derivation, FrameDocument, Polynomial, RationalFunction, Rewriter,
    SaitoFrame, VarTable,
};

#[derive(Parser)]
#[command(name = "logdiff", version, about = "Exact logarithmic differential operators along free divisors")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Give up on Groebner computations after this many milliseconds.
    #[arg(long, global = true)]
    deadline_ms: Option<u64>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = corpus::DEFAULT_SEED)]
    seed: u64,
    /// Number of derivation candidates searched for a free basis.
    #[arg(long, global = true, default_value_t = 12)]
    bound: usize,
    /// Monomial order for Groebner bases: degrevlex, lex or block.
    #[arg(long, global = true, default_value = "degrevlex")]
    order: MonomialOrder,
}

/// Where the divisor and its frame come from.
#[derive(Args, Clone)]
struct Divisor {
    /// Comma-separated coordinate names, e.g. x,y,z.
    #[arg(long)]
    vars: Option<String>,
    /// Defining polynomial of the divisor.
    #[arg(short = 'f', long = "divisor")]
    f: Option<String>,
    /// Basis vector field, e.g. "x*d_x"; repeat once per element.
    #[arg(long = "basis")]
    basis: Vec<String>,
    /// Bundled example name (see `logdiff examples`).
    #[arg(long, conflicts_with_all = ["vars", "f", "frame"])]
    example: Option<String>,
    /// Frame JSON as written by `saito --json` or `basis --json`.
    #[arg(long, conflicts_with_all = ["vars", "f", "example"])]
    frame: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// List the bundled example divisors.
    Examples,
    /// Is the vector field P logarithmic along f?
    CheckLog {
        #[command(flatten)]
        divisor: Divisor,
        #[arg(short = 'P')]
        p: String,
    },
    /// Check a proposed basis with Saito's criterion.
    Saito {
        #[command(flatten)]
        divisor: Divisor,
    },
    /// Compute a free basis of the logarithmic derivations.
    Basis {
        #[command(flatten)]
        divisor: Divisor,
    },
    /// Write P in the PBW basis of the frame, or explain why it is not logarithmic.
    NormalForm {
        #[command(flatten)]
        divisor: Divisor,
        #[arg(short = 'P')]
        p: String,
    },
    /// Symbol chain of the principal symbol of P, or of a given symbol.
    SymbolChain {
        #[command(flatten)]
        divisor: Divisor,
        #[arg(short = 'P', conflicts_with = "symbol")]
        p: Option<String>,
        /// Homogeneous symbol in the x and xi variables.
        #[arg(long)]
        symbol: Option<String>,
    },
    /// Move f^-p past P: f^p Q = P f^k (or Q f^p = f^k P with --right).
    Shift {
        #[command(flatten)]
        divisor: Divisor,
        #[arg(short = 'P')]
        p: String,
        #[arg(long, default_value_t = 1)]
        power: u32,
        #[arg(long)]
        right: bool,
    },
    /// Logarithmic 1-forms dual to the frame.
    DualBasis {
        #[command(flatten)]
        divisor: Divisor,
    },
    /// Check nabla^2 = 0 and the Cartan formula on random logarithmic forms.
    DerhamCheck {
        #[command(flatten)]
        divisor: Divisor,
        /// Twist nabla = d + lambda df/f.
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Matrices of the logarithmic Spencer complex.
    Spencer {
        #[command(flatten)]
        divisor: Divisor,
    },
    /// Koszul complex of the frame's symbols.
    GradedSpencer {
        #[command(flatten)]
        divisor: Divisor,
    },
    /// Koszul complex of arbitrary elements.
    Koszul {
        #[arg(long)]
        vars: String,
        #[arg(short = 'e', long = "element", required = true)]
        elements: Vec<String>,
    },
    /// Verify that the Spencer and graded Spencer maps compose to zero.
    ComplexCheck {
        #[command(flatten)]
        divisor: Divisor,
    },
    /// Is the sequence (given, or the frame's symbols) regular?
    Regular {
        #[command(flatten)]
        divisor: Divisor,
        #[arg(short = 'e', long = "element")]
        elements: Vec<String>,
    },
    /// Freeness plus regularity of the symbols: the perversity certificate.
    Perversity {
        #[command(flatten)]
        divisor: Divisor,
    },
}

/// Printed result; `code` is 0 for yes and 1 for a mathematical no.
struct Output {
    code: u8,
    text: String,
    json: Value,
}

impl Output {
    fn yes(text: String, json: Value) -> Self {
        Output { code: 0, text, json }
    }
    fn no(text: String, json: Value) -> Self {
        Output { code: 1, text, json }
    }
}

enum Failure {
    Usage(String),
    Timeout(String),
}

type Outcome = Result<Output, Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

struct Ctx {
    global: Global,
}

impl Ctx {
    fn deadline(&self) -> Option<Instant> {
        self.global.deadline_ms.map(|ms| Instant::now() + Duration::from_millis(ms))
    }
}

fn show(p: &Polynomial, v: &VarTable) -> String {
    p.display(v).to_string()
}

impl Divisor {
    fn manifest(&self) -> Result<Option<Manifest>, Failure> {
        self.example.as_deref().map(manifest::by_name).transpose().map_err(usage)
    }

    fn vars_and_f(&self) -> Result<(VarTable, Polynomial), Failure> {
        if let Some(m) = self.manifest()? {
            let v = m.var_table().map_err(usage)?;
            let f = m.divisor(&v).map_err(usage)?;
            return Ok((v, f));
        }
        if self.frame.is_some() {
            let (v, fr) = self.load_frame_file()?;
            return Ok((v, fr.divisor().clone()));
        }
        let vars = self.vars.as_deref().ok_or_else(|| usage("--vars is required"))?;
        let v = VarTable::parse_list(vars).map_err(usage)?;
        let src = self.f.as_deref().ok_or_else(|| usage("-f is required"))?;
        let f = parse_polynomial(src, &v).map_err(usage)?;
        if f.is_zero() || !f.is_xi_free() {
            return Err(usage("the divisor must be a nonzero function of the coordinates"));
        }
        Ok((v, f))
    }

    fn vector_fields(&self, v: &VarTable, srcs: &[String]) -> Result<Vec<Derivation>, Failure> {
        srcs.iter()
            .map(|s| {
                let op = parse_operator(s, v).map_err(usage)?;
                Derivation::from_diffop(&op).ok_or_else(|| usage(format!("'{s}' is not a vector field")))
            })
            .collect()
    }

    fn load_frame_file(&self) -> Result<(VarTable, SaitoFrame), Failure> {
        let path = self.frame.as_ref().unwrap();
        let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        let value: Value = serde_json::from_str(&text).map_err(usage)?;
        // accept a bare frame document or any output that embeds one
        let doc_value = value.get("frame").cloned().unwrap_or(value);
        let doc: FrameDocument = serde_json::from_value(doc_value).map_err(usage)?;
        let frame = doc.to_frame().map_err(|e| usage(frame_doc_error(&e, &doc.vars)))?;
        Ok((doc.vars, frame))
    }

    /// A verified frame: from a file, from the given basis, from a bundled
    /// example, or found by the syzygy search.
    fn frame(&self, ctx: &Ctx) -> Result<(VarTable, SaitoFrame), Failure> {
        if self.frame.is_some() {
            return self.load_frame_file();
        }
        let manifest = self.manifest()?;
        let (v, f) = self.vars_and_f()?;
        let srcs = if !self.basis.is_empty() {
            Some(self.basis.clone())
        } else {
            manifest.and_then(|m| m.basis)
        };
        if let Some(srcs) = srcs {
            let basis = self.vector_fields(&v, &srcs)?;
            let frame = saito_frame(&f, &basis).map_err(|e| usage(saito_error(&e, &v)))?;
            return Ok((v, frame));
        }
        let opts = LogBasisOptions {
            bound: ctx.global.bound,
            deadline: ctx.deadline(),
        };
        match log_derivations_with(&f, &opts) {
            Ok(b) => Ok((v, b.frame)),
            Err(LogBasisError::Timeout(_)) => Err(Failure::Timeout("basis search exceeded the deadline".into())),
            Err(e) => Err(usage(format!("{e}; pass --basis explicitly"))),
        }
    }
}

fn saito_error(e: &SaitoFailure, v: &VarTable) -> String {
    match e {
        SaitoFailure::NotLogarithmic { index, remainder } => format!(
            "basis element {} is not logarithmic: delta(f) mod f = {}",
            index + 1,
            show(remainder, v)
        ),
        SaitoFailure::NotUnitMultiple { det, witness } => format!(
            "determinant {} is not a unit times f (remainder {})",
            show(det, v),
            show(witness, v)
        ),
        SaitoFailure::NotInSpan { i, j, remainder } => format!(
            "[delta_{}, delta_{}] leaves the span (remainder {})",
            i + 1,
            j + 1,
            show(remainder, v)
        ),
        other => other.to_string(),
    }
}

fn frame_doc_error(e: &FrameDocError, v: &VarTable) -> String {
    match e {
        FrameDocError::Saito(s) => saito_error(s, v),
        other => other.to_string(),
    }
}

fn not_log_text(e: &NotLogarithmic, v: &VarTable) -> (String, Value) {
    let stage = serde_json::to_value(e.stage).unwrap();
    (
        format!(
            "not logarithmic: {} stage fails at step {}, witness {}",
            stage.as_str().unwrap_or_default(),
            e.step,
            show(&e.witness, v)
        ),
        json!({"logarithmic": false, "stage": stage, "step": e.step, "witness": show(&e.witness, v)}),
    )
}

fn frame_text(fr: &SaitoFrame, v: &VarTable) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "divisor: {}", show(fr.divisor(), v));
    for (i, d) in fr.basis().iter().enumerate() {
        let _ = writeln!(s, "delta_{} = {}", i + 1, d.display(v));
    }
    let _ = writeln!(s, "det = {} (unit {})", show(fr.det(), v), fr.unit());
    if let Some(u) = fr.local_only_unit() {
        let _ = writeln!(s, "warning: det / f = {} is a unit only near the origin", show(u, v));
    }
    for i in 0..fr.n() {
        for j in (i + 1)..fr.n() {
            let terms: Vec<String> = (0..fr.n())
                .filter(|&k| !fr.structure_constant(i, j, k).is_zero())
                .map(|k| format!("({})*delta_{}", show(fr.structure_constant(i, j, k), v), k + 1))
                .collect();
            let rhs = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
            let _ = writeln!(s, "[delta_{}, delta_{}] = {rhs}", i + 1, j + 1);
        }
    }
    s
}

fn frame_json(fr: &SaitoFrame, v: &VarTable) -> Value {
    serde_json::to_value(FrameDocument::from_frame(fr, v)).unwrap()
}

fn examples() -> Outcome {
    let all = manifest::bundled();
    let mut text = String::new();
    for m in &all {
        let _ = writeln!(text, "{:<20} {:<28} {}", m.name, m.divisor, m.description);
    }
    Ok(Output::yes(text, serde_json::to_value(&all).unwrap()))
}

fn check_log(divisor: &Divisor, p: &str) -> Outcome {
    let (v, f) = divisor.vars_and_f()?;
    let delta = divisor.vector_fields(&v, &[p.to_string()])?.remove(0);
    Ok(match is_logarithmic(&delta, &f) {
        LogCheck::Yes { quotient } => Output::yes(
            format!("logarithmic: delta(f) = ({}) * f\n", show(&quotient, &v)),
            json!({"logarithmic": true, "quotient": show(&quotient, &v)}),
        ),
        LogCheck::No { remainder } => Output::no(
            format!("not logarithmic: delta(f) mod f = {}\n", show(&remainder, &v)),
            json!({"logarithmic": false, "remainder": show(&remainder, &v)}),
        ),
    })
}

fn saito(ctx: &Ctx, divisor: &Divisor) -> Outcome {
    if divisor.basis.is_empty() && divisor.example.is_none() && divisor.frame.is_none() {
        return Err(usage("saito needs --basis (once per element), --example or --frame"));
    }
    if !divisor.basis.is_empty() {
        let (v, f) = divisor.vars_and_f()?;
        let basis = divisor.vector_fields(&v, &divisor.basis)?;
        return Ok(match saito_frame(&f, &basis) {
            Ok(fr) => Output::yes(frame_text(&fr, &v), frame_json(&fr, &v)),
            Err(e) => Output::no(
                format!("not a free basis: {}\n", saito_error(&e, &v)),
                json!({"free_basis": false, "reason": saito_error(&e, &v)}),
            ),
        });
    }
    let (v, fr) = divisor.frame(ctx)?;
    Ok(Output::yes(frame_text(&fr, &v), frame_json(&fr, &v)))
}

fn basis(ctx: &Ctx, divisor: &Divisor) -> Outcome {
    let (v, f) = divisor.vars_and_f()?;
    let opts = LogBasisOptions {
        bound: ctx.global.bound,
        deadline: ctx.deadline(),
    };
    match log_derivations_with(&f, &opts) {
        Ok(b) => {
            let mut text = frame_text(&b.frame, &v);
            if let Some(g) = &b.non_reduced_factor {
                let _ = writeln!(text, "warning: f is not reduced (repeated factor {})", show(g, &v));
            }
            Ok(Output::yes(text, frame_json(&b.frame, &v)))
        }
        Err(LogBasisError::Timeout(_)) => Err(Failure::Timeout("deadline exceeded".into())),
        Err(LogBasisError::NotFree(d)) => {
            let best = d.best_det.as_ref().map(|p| show(p, &v));
            let mut text = format!(
                "no free basis: {} candidates, {} subsets tried, lowest determinant {}\n",
                d.candidates,
                d.subsets_tried,
                best.as_deref().unwrap_or("none")
            );
            if let Some(g) = &d.non_reduced_factor {
                let _ = writeln!(text, "f is not reduced (repeated factor {})", show(g, &v));
            }
            let doc = json!({
                "free": false,
                "candidates": d.candidates,
                "subsets_tried": d.subsets_tried,
                "search_complete": d.search_complete,
                "best_det": best,
                "non_reduced_factor": d.non_reduced_factor.as_ref().map(|p| show(p, &v)),
            });
            if d.search_complete {
                Ok(Output::no(text, doc))
            } else {
                Err(Failure::Timeout(format!(
                    "{text}search bound {} exhausted; raise --bound",
                    ctx.global.bound
                )))
            }
        }
        Err(e @ LogBasisError::ZeroDivisor) => Err(usage(e)),
    }
}

fn normal_form(ctx: &Ctx, divisor: &Divisor, p: &str) -> Outcome {
    let (v, fr) = divisor.frame(ctx)?;
    let op = parse_operator(p, &v).map_err(usage)?;
    let mut rw = Rewriter::new(&fr);
    Ok(match rw.normal_form(&op) {
        Ok(w) => {
            let mut text = String::new();
            for (mono, c) in w.table(&v) {
                let _ = writeln!(text, "{mono}: {c}");
            }
            if w.is_zero() {
                text.push_str("0\n");
            }
            Output::yes(text, serde_json::to_value(PbwDocument::new(&fr, &v, &w)).unwrap())
        }
        Err(e) => {
            let (t, j) = not_log_text(&e, &v);
            Output::no(t + "\n", j)
        }
    })
}

fn symbol_chain_cmd(divisor: &Divisor, p: Option<&str>, symbol: Option<&str>) -> Outcome {
    let (v, f) = divisor.vars_and_f()?;
    let r0 = match (p, symbol) {
        (Some(p), _) => parse_operator(p, &v)
            .map_err(usage)?
            .principal_symbol()
            .map_err(usage)?,
        (None, Some(s)) => parse_polynomial(s, &v).map_err(usage)?,
        (None, None) => return Err(usage("give -P or --symbol")),
    };
    Ok(match symbol_chain(&r0, &f) {
        Ok(chain) => {
            let terms: Vec<String> = chain.chain().iter().map(|r| show(r, &v)).collect();
            let text = terms
                .iter()
                .enumerate()
                .map(|(k, t)| format!("R_{k} = {t}\n"))
                .collect();
            Output::yes(text, json!({"chain": terms}))
        }
        Err(SymbolError::ChainFailure { k, remainder }) => Output::no(
            format!("no chain: {{R_{k}, f}} mod f = {}\n", show(&remainder, &v)),
            json!({"chain": null, "step": k, "witness": show(&remainder, &v)}),
        ),
        Err(e) => return Err(usage(e)),
    })
}

fn shift(ctx: &Ctx, divisor: &Divisor, p: &str, power: u32, right: bool) -> Outcome {
    let (v, fr) = divisor.frame(ctx)?;
    let op = parse_operator(p, &v).map_err(usage)?;
    let mut rw = Rewriter::new(&fr);
    let res = if right {
        meromorphic_shift_right(&op, power, &mut rw)
    } else {
        meromorphic_shift(&op, power, &mut rw)
    };
    match res {
        Ok(s) => {
            let q = rw.expand(&s.q);
            let identity = if right {
                format!("Q * f^{power} = f^{} * P", s.k)
            } else {
                format!("f^{power} * Q = P * f^{}", s.k)
            };
            let mut text = format!("k = {}\nQ = {}\n", s.k, q.display(&v));
            for (mono, c) in s.q.table(&v) {
                let _ = writeln!(text, "  {mono}: {c}");
            }
            let _ = writeln!(text, "{identity}");
            Ok(Output::yes(
                text,
                json!({
                    "k": s.k,
                    "p": power,
                    "identity": identity,
                    "q": q.display(&v).to_string(),
                    "pbw": PbwDocument::new(&fr, &v, &s.q),
                }),
            ))
        }
        Err(ShiftError::NotLogarithmic(e)) => {
            let (t, j) = not_log_text(&e, &v);
            Ok(Output::no(t + "\n", j))
        }
        Err(e @ ShiftError::NotFound { .. }) => Err(Failure::Timeout(e.to_string())),
    }
}

fn form_json(w: &LogForm, v: &VarTable) -> Value {
    json!({"degree": w.degree(), "coefficients": w.document(v)})
}

fn dual_basis_cmd(ctx: &Ctx, divisor: &Divisor) -> Outcome {
    let (v, fr) = divisor.frame(ctx)?;
    match dual_basis(&fr) {
        Ok(forms) => {
            let mut text = String::new();
            for (i, w) in forms.iter().enumerate() {
                let parts: Vec<String> = w
                    .terms()
                    .map(|(j, c)| format!("({}) d{}", c.display(&v), v.name(j[0])))
                    .collect();
                let _ = writeln!(text, "w_{} = {}", i + 1, parts.join(" + "));
            }
            Ok(Output::yes(
                text,
                json!({"forms": forms.iter().map(|w| form_json(w, &v)).collect::<Vec<_>>()}),
            ))
        }
        Err(e) => Ok(Output::no(format!("{e}\n"), json!({"error": e.to_string()}))),
    }
}

fn derham_check(ctx: &Ctx, divisor: &Divisor, lambda: &str, samples: usize) -> Outcome {
    let (v, fr) = divisor.frame(ctx)?;
    let n = fr.n();
    let lambda = parse_polynomial(lambda, &v)
        .ok()
        .and_then(|p| p.constant_value())
        .ok_or_else(|| usage("--lambda must be a rational number"))?;
    let conn = if lambda == logdiff::Coeff::from_integer(0.into()) {
        LogConnection::trivial(&fr, 1)
    } else {
        LogConnection::twist(&fr, &lambda)
    };
    let fail = |msg: String| Output::no(format!("{msg}\n"), json!({"ok": false, "failure": msg}));
    if let Err(e) = conn.check_integrable(&fr) {
        return Ok(fail(e.to_string()));
    }
    let dual = match dual_basis(&fr) {
        Ok(d) => d,
        Err(e @ FormError::LocalOnlyUnit) => return Ok(fail(e.to_string())),
        Err(e) => return Err(usage(e)),
    };
    let mut squares = 0;
    for p in 0..=n {
        for j in subsets(n, p) {
            let section = if p == 0 {
                LogForm::function(RationalFunction::polynomial(Polynomial::one(n), fr.divisor()))
            } else {
                dual_wedge(&dual, &j)
            };
            let sq = de_rham_square(&fr, &conn, &[section]).map_err(usage)?;
            if !sq[0].is_zero() {
                return Ok(fail(format!("nabla^2 is nonzero on the wedge of dual forms {j:?}")));
            }
            squares += 1;
        }
    }
    let mut rng = corpus::rng(ctx.global.seed);
    let mut identities = 0;
    for i in 0..samples {
        let p = i % n.max(1);
        let w = corpus::random_log_form(&mut rng, &fr, &dual, p, 2);
        let sq = de_rham_square(&fr, &conn, std::slice::from_ref(&w)).map_err(usage)?;
        if !sq[0].is_zero() {
            return Ok(fail(format!("nabla^2 is nonzero on a random {p}-form")));
        }
        squares += 1;
        for k in subsets(n, p + 1) {
            let (l, r) = cartan_sides(&fr, &w, &k);
            if l != r {
                return Ok(fail(format!(
                    "Cartan formula fails on deltas {k:?}: {} vs {}",
                    l.display(&v),
                    r.display(&v)
                )));
            }
            identities += 1;
        }
    }
    Ok(Output::yes(
        format!(
            "ok: connection integrable, nabla^2 = 0 on {squares} sections, {identities} Cartan identities hold (seed {})\n",
            ctx.global.seed
        ),
        json!({"ok": true, "lambda": lambda.to_string(), "squares_checked": squares, "cartan_checked": identities, "seed": ctx.global.seed}),
    ))
}

fn complex_text<E: logdiff::complexes::Entry>(c: &FreeComplex<E>, v: &VarTable) -> String {
    let doc = c.document(v);
    let mut s = format!("ranks (degree -{} .. 0): {:?}\n", c.length(), doc.ranks);
    for d in &doc.differentials {
        let _ = writeln!(s, "degree {} -> {}:", d.from_degree, d.from_degree + 1);
        for (r, row) in d.rows.iter().zip(&d.entries) {
            let cells: Vec<String> = d
                .cols
                .iter()
                .zip(row)
                .filter(|(_, e)| e.as_str() != "0")
                .map(|(c, e)| format!("[{c}] {e}"))
                .collect();
            let _ = writeln!(s, "  [{r}] -> {}", if cells.is_empty() { "0".into() } else { cells.join(", ") });
        }
    }
    s
}

fn complex_out<E: logdiff::complexes::Entry>(c: &FreeComplex<E>, v: &VarTable) -> Output {
    Output::yes(complex_text(c, v), serde_json::to_value(c.document(v)).unwrap())
}

fn complex_check(ctx: &Ctx, divisor: &Divisor) -> Outcome {
    let (v, fr) = divisor.frame(ctx)?;
    let s = spencer_complex(&fr);
    let g = graded_spencer(&fr);
    let key = |j: &[usize]| logdiff::logforms::subset_key(j);
    if let Err(e) = s.check_zero_composition() {
        let msg = format!(
            "Spencer composite from degree -{} is nonzero at [{}] -> [{}]: {}",
            e.degree,
            key(&e.row),
            key(&e.col),
            e.entry.display(&v)
        );
        return Ok(Output::no(format!("{msg}\n"), json!({"ok": false, "failure": msg})));
    }
    if let Err((i, w)) = augmented_spencer_check(&s) {
        let msg = format!("augmentation fails: delta_{}(1) = {}", i + 1, show(&w, &v));
        return Ok(Output::no(format!("{msg}\n"), json!({"ok": false, "failure": msg})));
    }
    if let Err(e) = g.check_zero_composition() {
        let msg = format!(
            "graded composite from degree -{} is nonzero at [{}] -> [{}]: {}",
            e.degree,
            key(&e.row),
            key(&e.col),
            show(&e.entry, &v)
        );
        return Ok(Output::no(format!("{msg}\n"), json!({"ok": false, "failure": msg})));
    }
    if symbol_of_spencer(&s) != g {
        let msg = "symbols of the Spencer maps differ from the graded maps".to_string();
        return Ok(Output::no(format!("{msg}\n"), json!({"ok": false, "failure": msg})));
    }
    Ok(Output::yes(
        "ok: Spencer and graded Spencer maps compose to zero, augmentation vanishes, symbols agree\n".into(),
        json!({"ok": true}),
    ))
}

fn regular(ctx: &Ctx, divisor: &Divisor, elements: &[String]) -> Outcome {
    let (v, seq) = if elements.is_empty() {
        let (v, fr) = divisor.frame(ctx)?;
        (v, fr.symbols())
    } else {
        let vars = divisor.vars.as_deref().ok_or_else(|| usage("--vars is required"))?;
        let v = VarTable::parse_list(vars).map_err(usage)?;
        let seq = elements
            .iter()
            .map(|s| parse_polynomial(s, &v))
            .collect::<Result<Vec<_>, _>>()
            .map_err(usage)?;
        (v, seq)
    };
    let n = v.n();
    let gb = buchberger_with_deadline(&seq, &ctx.global.order, ctx.deadline())
        .map_err(|_| Failure::Timeout("deadline exceeded".into()))?;
    let dim = ideal_dimension(&gb).ok();
    let regular = dim == Some(2 * n - seq.len());
    let shown: Vec<String> = seq.iter().map(|p| show(p, &v)).collect();
    let text = format!(
        "sequence: {}\nquotient dimension: {} (ambient {})\nregular: {regular}\n",
        shown.join(", "),
        dim.map(|d| d.to_string()).unwrap_or_else(|| "empty (unit ideal)".into()),
        2 * n
    );
    let doc = json!({"sequence": shown, "quotient_dimension": dim, "ambient_dimension": 2 * n, "regular": regular});
    Ok(if regular { Output::yes(text, doc) } else { Output::no(text, doc) })
}

fn perversity(ctx: &Ctx, divisor: &Divisor) -> Outcome {
    let (v, f) = divisor.vars_and_f()?;
    let r = perversity_certificate(&f, ctx.global.bound, ctx.deadline())
        .map_err(|_| Failure::Timeout("deadline exceeded".into()))?;
    let doc = r.document(&v);
    let mut text = String::new();
    match &r.freeness {
        Freeness::Free(fr) => {
            text.push_str(&frame_text(fr, &v));
            text.push_str("free: yes\n");
        }
        Freeness::NotFree(d) => {
            let _ = writeln!(text, "divisor: {}", show(&f, &v));
            let _ = writeln!(text, "free: not established ({} candidates, {} subsets)", d.candidates, d.subsets_tried);
        }
    }
    if let Some(d) = r.quotient_dimension {
        let _ = writeln!(text, "symbol quotient dimension: {d} (regular iff {})", v.n());
    }
    let verdict = serde_json::to_value(r.verdict).unwrap();
    let _ = writeln!(text, "verdict: {}", verdict.as_str().unwrap());
    for note in &r.notes {
        let _ = writeln!(text, "note: {note}");
    }
    let json = serde_json::to_value(&doc).unwrap();
    if let Freeness::NotFree(d) = &r.freeness {
        if !d.search_complete {
            return Err(Failure::Timeout(format!("{text}search bound exhausted; raise --bound")));
        }
    }
    Ok(match r.verdict {
        Verdict::PerverseCertified => Output::yes(text, json),
        Verdict::Inconclusive => Output::no(text, json),
    })
}

fn run(cli: Cli) -> Outcome {
    let ctx = Ctx { global: cli.global };
    match &cli.command {
        Command::Examples => examples(),
        Command::CheckLog { divisor, p } => check_log(divisor, p),
        Command::Saito { divisor } => saito(&ctx, divisor),
        Command::Basis { divisor } => basis(&ctx, divisor),
        Command::NormalForm { divisor, p } => normal_form(&ctx, divisor, p),
        Command::SymbolChain { divisor, p, symbol } => symbol_chain_cmd(divisor, p.as_deref(), symbol.as_deref()),
        Command::Shift { divisor, p, power, right } => shift(&ctx, divisor, p, *power, *right),
        Command::DualBasis { divisor } => dual_basis_cmd(&ctx, divisor),
        Command::DerhamCheck { divisor, lambda, samples } => derham_check(&ctx, divisor, lambda, *samples),
        Command::Spencer { divisor } => {
            let (v, fr) = divisor.frame(&ctx)?;
            Ok(complex_out(&spencer_complex(&fr), &v))
        }
        Command::GradedSpencer { divisor } => {
            let (v, fr) = divisor.frame(&ctx)?;
            Ok(complex_out(&graded_spencer(&fr), &v))
        }
        Command::Koszul { vars, elements } => {
            let v = VarTable::parse_list(vars).map_err(usage)?;
            let seq = elements
                .iter()
                .map(|s| parse_polynomial(s, &v))
                .collect::<Result<Vec<_>, _>>()
                .map_err(usage)?;
            let k = koszul_complex(&seq);
            let mut out = complex_out(&k, &v);
            if let Err(e) = k.check_zero_composition() {
                out.code = 1;
                let _ = writeln!(out.text, "not a complex at degree -{}: {}", e.degree, show(&e.entry, &v));
            }
            Ok(out)
        }
        Command::ComplexCheck { divisor } => complex_check(&ctx, divisor),
        Command::Regular { divisor, elements } => regular(&ctx, divisor, elements),
        Command::Perversity { divisor } => perversity(&ctx, divisor),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let json = cli.global.json;
    match run(cli) {
        Ok(out) => {
            if json {
                println!("{}", serde_json::to_string_pretty(&out.json).unwrap());
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Timeout(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(3)
        }
    }
}
