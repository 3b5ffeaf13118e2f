//! Subcommands. Each one turns its inputs into a [`Report`]; verification
//! failures are failed checks, malformed inputs are errors.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use ecalc_core::cohomology::{cohomology, compare_e_vs_poisson, elliptic_bivector, Cochain, ComplexKind, GradedCohomReport, GradedComplex};
use ecalc_core::ctower::{residue, residue_via_contraction, CModel, Invariant};
use ecalc_core::eforms::EForm;
use ecalc_core::eframe::{check_involutive, generic_rank, EFrame, FrameKind};
use ecalc_core::multivec::{is_poisson, Basis, MultiVec};
use ecalc_core::numerics::{
    default_check_points, defining_function_independence, is_primitive, liouville_volume, moser_convergence, moser_vector_field,
    taylor_split_volume, verify_moser, LiouvilleOptions,
};
use ecalc_core::poly::rat_to_f64;
use ecalc_core::{int, parse_poly, Error, Vars};
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::gallery;
use crate::io::{
    load_form, load_frame, load_frame_doc, read_json, stratum_key, AssignmentDoc, CliError, CliResult, FormDoc, FrameDoc,
    MultiVecDoc, PointsDoc, TowerDoc,
};
use crate::report::Report;
use crate::s4::{gallery_s4, s4_verify};

/// Tolerance for the defining-function independence check.
pub const INDEPENDENCE_TOL: f64 = 1e-4;
/// Minimum observed RK4 order on the Moser pullback residual.
pub const MIN_ORDER: f64 = 3.5;
pub const CONVERGENCE_STEPS: [usize; 4] = [4, 8, 16, 32];

#[derive(Parser, Debug)]
#[command(name = "ecalc", version, about = "Calculus of E-structures: frames, E-forms, residues, cohomology and Moser flows")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the JSON report to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Print the JSON report instead of the text summary.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Inputs {
    /// Frame: gallery name or JSON file.
    #[arg(long)]
    pub frame: Option<String>,
    /// Form: gallery name or JSON file (repeatable).
    #[arg(long)]
    pub form: Vec<String>,
    /// Named gallery entry supplying all inputs.
    #[arg(long)]
    pub gallery: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct NumericFlags {
    #[arg(long, default_value_t = 1.0 / 4096.0)]
    pub eps_min: f64,
    #[arg(long, default_value_t = 0.125)]
    pub eps_max: f64,
    #[arg(long, default_value_t = 10)]
    pub quad_order: usize,
    /// RK4 steps on [0, 1].
    #[arg(long, default_value_t = 1000)]
    pub steps: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// JSON file of check points.
    #[arg(long)]
    pub points: Option<PathBuf>,
}

impl NumericFlags {
    fn liouville(&self) -> CliResult<LiouvilleOptions> {
        if !(self.eps_min > 0.0 && self.eps_min <= self.eps_max && self.eps_max < 1.0) || self.quad_order == 0 {
            return Err(CliError::Input("need 0 < eps-min ≤ eps-max < 1 and a positive quadrature order".into()));
        }
        Ok(LiouvilleOptions { eps_min: self.eps_min, eps_max: self.eps_max, quad_order: self.quad_order, tol: self.tol })
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Involutivity and structure constants of a set of generators.
    Involutive {
        #[command(flatten)]
        inputs: Inputs,
        /// Degree bound for the division step.
        #[arg(long)]
        bound: Option<u32>,
    },
    /// E-exterior derivative of a form.
    D {
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Wedge product of two forms.
    Wedge {
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Residues of a c-form; without --index, the whole tower.
    Residue {
        #[command(flatten)]
        inputs: Inputs,
        /// 1-based coordinate of the hyperplane.
        #[arg(long)]
        index: Option<usize>,
    },
    /// Full residue tower of a c-form.
    Tower {
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Compatibility of forms assigned to the ordered strata of one level.
    Compatible {
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Principal-value Liouville volume on [−1, 1]^n.
    Liouville {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        num: NumericFlags,
        /// Alternative defining function for the independence check.
        #[arg(long)]
        h: Option<String>,
        /// 1-based axis that --h replaces.
        #[arg(long, default_value_t = 1)]
        axis: usize,
    },
    /// Graded E-cohomology of a frame.
    Cohomology {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, default_value_t = 12)]
        max_degree: i64,
    },
    /// Poisson cohomology; defaults to Π_E = (x²+y²)∂x∧∂y.
    PoissonCohomology {
        #[command(flatten)]
        inputs: Inputs,
        /// Bivector document (ambient basis).
        #[arg(long)]
        bivector: Option<String>,
        #[arg(long, default_value_t = 12)]
        max_degree: i64,
    },
    /// E-cohomology of the elliptic frame against Poisson cohomology of Π_E.
    Compare {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, default_value_t = 12)]
        max_degree: i64,
    },
    /// Moser path ω_t = (1−t)ω0 + tω1 with a given primitive μ.
    Moser {
        #[command(flatten)]
        inputs: Inputs,
        /// Primitive μ of ω1 − ω0.
        #[arg(long)]
        mu: Option<String>,
        #[command(flatten)]
        num: NumericFlags,
    },
    /// Verify the c-symplectic structure on S⁴.
    S4,
    /// List gallery entries, or show one.
    Gallery {
        #[arg(long)]
        name: Option<String>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Involutive { .. } => "involutive",
            Command::D { .. } => "d",
            Command::Wedge { .. } => "wedge",
            Command::Residue { .. } => "residue",
            Command::Tower { .. } => "tower",
            Command::Compatible { .. } => "compatible",
            Command::Liouville { .. } => "liouville",
            Command::Cohomology { .. } => "cohomology",
            Command::PoissonCohomology { .. } => "poisson-cohomology",
            Command::Compare { .. } => "compare",
            Command::Moser { .. } => "moser",
            Command::S4 => "s4",
            Command::Gallery { .. } => "gallery",
        }
    }
}

/// The command line plus the contents of every file it names.
fn input_fingerprint(cmd: &Command) -> Vec<String> {
    let mut out = vec![format!("{cmd:?}")];
    let mut names: Vec<String> = Vec::new();
    let mut add_inputs = |i: &Inputs| {
        names.extend(i.frame.iter().cloned());
        names.extend(i.form.iter().cloned());
    };
    match cmd {
        Command::Involutive { inputs, .. }
        | Command::D { inputs }
        | Command::Wedge { inputs }
        | Command::Residue { inputs, .. }
        | Command::Tower { inputs }
        | Command::Compatible { inputs }
        | Command::Cohomology { inputs, .. }
        | Command::Compare { inputs, .. } => add_inputs(inputs),
        Command::Liouville { inputs, num, .. } => {
            add_inputs(inputs);
            names.extend(num.points.iter().map(|p| p.display().to_string()));
        }
        Command::PoissonCohomology { inputs, bivector, .. } => {
            add_inputs(inputs);
            names.extend(bivector.iter().cloned());
        }
        Command::Moser { inputs, mu, num } => {
            add_inputs(inputs);
            names.extend(mu.iter().cloned());
            names.extend(num.points.iter().map(|p| p.display().to_string()));
        }
        Command::S4 | Command::Gallery { .. } => {}
    }
    for n in names {
        if let Ok(text) = std::fs::read_to_string(&n) {
            out.push(text);
        }
    }
    out
}

pub fn run(cmd: &Command) -> CliResult<Report> {
    let mut r = Report::new(cmd.name(), &input_fingerprint(cmd));
    match cmd {
        Command::Involutive { inputs, bound } => involutive(&mut r, inputs, *bound)?,
        Command::D { inputs } => d(&mut r, inputs)?,
        Command::Wedge { inputs } => wedge(&mut r, inputs)?,
        Command::Residue { inputs, index } => match index {
            Some(i) => single_residue(&mut r, inputs, *i)?,
            None => tower(&mut r, inputs)?,
        },
        Command::Tower { inputs } => tower(&mut r, inputs)?,
        Command::Compatible { inputs } => compatible(&mut r, inputs)?,
        Command::Liouville { inputs, num, h, axis } => liouville(&mut r, inputs, num, h.as_deref(), *axis)?,
        Command::Cohomology { inputs, max_degree } => e_cohomology(&mut r, inputs, *max_degree)?,
        Command::PoissonCohomology { inputs, bivector, max_degree } => {
            poisson_cohomology(&mut r, inputs, bivector.as_deref(), *max_degree)?
        }
        Command::Compare { inputs, max_degree } => compare(&mut r, inputs, *max_degree)?,
        Command::Moser { inputs, mu, num } => moser(&mut r, inputs, mu.as_deref(), num)?,
        Command::S4 => s4(&mut r)?,
        Command::Gallery { name } => list_gallery(&mut r, name.as_deref())?,
    }
    Ok(r)
}

fn missing<T>(what: &str) -> CliResult<T> {
    Err(CliError::Input(format!("missing {what}")))
}

fn forms(inputs: &Inputs, count: usize) -> CliResult<Vec<EForm>> {
    let names: Vec<&str> = match (&inputs.gallery, inputs.form.is_empty()) {
        (Some(g), true) => vec![g.as_str()],
        (None, false) => inputs.form.iter().map(String::as_str).collect(),
        (Some(_), false) => return Err(CliError::Input("give either --gallery or --form".into())),
        (None, true) => return missing("--form"),
    };
    if names.len() != count {
        return Err(CliError::Input(format!("expected {count} form(s), got {}", names.len())));
    }
    names.into_iter().map(load_form).collect()
}

fn frame_of(inputs: &Inputs, default: Option<&str>) -> CliResult<Arc<EFrame>> {
    match (inputs.frame.as_deref().or(inputs.gallery.as_deref()), default) {
        (Some(f), _) | (None, Some(f)) => load_frame(f),
        (None, None) => missing("--frame"),
    }
}

fn form_json(w: &EForm) -> Value {
    serde_json::to_value(FormDoc::from_form(w, false)).expect("form documents serialize")
}

fn involutive(r: &mut Report, inputs: &Inputs, bound: Option<u32>) -> CliResult<()> {
    let spec = inputs.frame.as_deref().or(inputs.gallery.as_deref()).map_or_else(|| missing("--frame"), Ok)?;
    let doc: FrameDoc = load_frame_doc(spec)?;
    let (vars, gens) = doc.generator_polys()?;
    let rank = generic_rank(&gens);
    r.check("generically independent", rank == gens.len(), format!("generic rank {rank} of {}", gens.len()));
    let mut data = json!({ "vars": vars.names(), "generic_rank": rank });
    match check_involutive(&gens, bound) {
        Ok(c) => {
            let table: Vec<Value> = c
                .nonzero()
                .into_iter()
                .map(|(i, j, k, p)| json!({ "i": i + 1, "j": j + 1, "k": k + 1, "c": p.to_string() }))
                .collect();
            r.note(format!("{} nonzero structure constants", table.len()));
            r.check("involutive", true, "");
            data["structure_constants"] = Value::Array(table);
        }
        Err(Error::NotInvolutive { i, j, bound }) => {
            r.check("involutive", false, format!("[V{}, V{}] not in the span (degree bound {bound})", i + 1, j + 1));
        }
        Err(e) => return Err(e.into()),
    }
    r.data = data;
    Ok(())
}

fn d(r: &mut Report, inputs: &Inputs) -> CliResult<()> {
    let w = forms(inputs, 1)?.remove(0);
    let dw = w.ederiv();
    r.note(format!("d({w}) = {dw}"));
    r.check("d² = 0", dw.ederiv().is_zero(), "");
    r.data = json!({ "form": form_json(&w), "d": form_json(&dw), "closed": dw.is_zero() });
    Ok(())
}

fn wedge(r: &mut Report, inputs: &Inputs) -> CliResult<()> {
    let f = forms(inputs, 2)?;
    let ab = f[0].wedge(&f[1])?;
    let ba = f[1].wedge(&f[0])?;
    let graded = if f[0].degree() * f[1].degree() % 2 == 0 { ab.sub(&ba)? } else { ab.add(&ba)? };
    r.note(format!("({}) ∧ ({}) = {ab}", f[0], f[1]));
    r.check("graded commutativity", graded.is_zero(), "");
    r.data = json!({ "product": form_json(&ab) });
    Ok(())
}

fn c_model_of(w: &EForm) -> CliResult<CModel> {
    match w.frame().kind() {
        FrameKind::C(h) => Ok(CModel::with_vars(w.vars().clone(), h)?),
        _ => Err(CliError::Input("residues need a form on a c-frame".into())),
    }
}

fn single_residue(r: &mut Report, inputs: &Inputs, index: usize) -> CliResult<()> {
    let w = forms(inputs, 1)?.remove(0);
    if index == 0 || index > w.vars().len() {
        return Err(CliError::Input(format!("index {index} outside 1..={}", w.vars().len())));
    }
    let res = residue(&w, index - 1)?;
    let via = residue_via_contraction(&w, index - 1)?;
    r.note(format!("res_{index}({w}) = {res}"));
    r.check("contraction route agrees", res == via, "");
    r.data = json!({ "index": index, "residue": form_json(&res) });
    Ok(())
}

/// Mismatches against the residue figure for dx/x∧dy/y∧dz/z.
pub fn figure_mismatches(tower: &TowerDoc) -> Vec<String> {
    let expect: &[(usize, &str, usize, &[usize], &str)] = &[
        (1, "1", 2, &[1, 2], "1"),
        (1, "2", 2, &[1, 2], "-1"),
        (1, "3", 2, &[1, 2], "1"),
        (2, "1,2", 1, &[1], "-1"),
        (2, "2,1", 1, &[1], "1"),
        (2, "1,3", 1, &[1], "1"),
        (2, "3,1", 1, &[1], "-1"),
        (2, "2,3", 1, &[1], "-1"),
        (2, "3,2", 1, &[1], "1"),
        (3, "1,2,3", 0, &[], "-1"),
        (3, "2,3,1", 0, &[], "-1"),
        (3, "3,1,2", 0, &[], "-1"),
        (3, "1,3,2", 0, &[], "1"),
        (3, "3,2,1", 0, &[], "1"),
        (3, "2,1,3", 0, &[], "1"),
    ];
    let mut out = Vec::new();
    for (level, key, degree, idx, coeff) in expect {
        let got = tower.levels.get(*level).and_then(|l| l.get(*key));
        let ok = got.is_some_and(|f| {
            f.degree == *degree && f.terms.len() == 1 && f.terms[0].indices == *idx && f.terms[0].coeff == *coeff
        });
        if !ok {
            out.push(format!("level {level}, stratum ({key}): expected {coeff}·θ{idx:?}, found {got:?}"));
        }
    }
    out
}

fn tower(r: &mut Report, inputs: &Inputs) -> CliResult<()> {
    let w = forms(inputs, 1)?.remove(0);
    let m = c_model_of(&w)?;
    let t = m.residue_tower(&w)?;
    for (k, level) in t.levels.iter().enumerate() {
        for (s, f) in level {
            r.note(format!("Z{k} ({}): {f}", stratum_key(s)));
        }
        if k > 0 {
            let c = m.is_compatible(k, level)?;
            r.check(&format!("level {k} compatible"), c.compatible, "");
        }
    }
    let doc = TowerDoc::from_tower(&t);
    if inputs.gallery.as_deref() == Some("xyz3") {
        let bad = figure_mismatches(&doc);
        r.check("matches the residue figure", bad.is_empty(), bad.join("; "));
    }
    r.data = serde_json::to_value(doc)?;
    Ok(())
}

fn compatible(r: &mut Report, inputs: &Inputs) -> CliResult<()> {
    let (model, level, a) = match (&inputs.gallery, inputs.form.as_slice()) {
        (Some(g), []) => gallery::assignment(g).ok_or_else(|| CliError::Input(format!("no gallery assignment `{g}`")))??,
        (None, [path]) => read_json::<AssignmentDoc>(Path::new(path))?.build()?,
        _ => return missing("--gallery or one --form assignment document"),
    };
    let c = model.is_compatible(level, &a)?;
    let mut data = json!({ "assignment": AssignmentDoc::from_assignment(&model, level, &a), "compatible": c.compatible });
    let detail = match &c.witness {
        Some((k, s, t, a, b)) => {
            data["witness"] = json!({ "level": k, "strata": [stratum_key(s), stratum_key(t)], "values": [a.to_string(), b.to_string()] });
            format!("level {k}: ({}) gives {a} but ({}) gives {b}", stratum_key(s), stratum_key(t))
        }
        None => String::new(),
    };
    r.check("compatible", c.compatible, detail);
    r.data = data;
    Ok(())
}

fn quadrature_json(q: &ecalc_core::numerics::QuadratureReport) -> Value {
    json!({ "value": q.value, "error_estimate": q.error_estimate, "schedule": q.schedule, "partials": q.partials })
}

fn liouville(r: &mut Report, inputs: &Inputs, num: &NumericFlags, h: Option<&str>, axis: usize) -> CliResult<()> {
    let opts = num.liouville()?;
    if inputs.gallery.as_deref() == Some("example45") {
        return example45(r, &opts);
    }
    let w = forms(inputs, 1)?.remove(0);
    let q = match liouville_volume(&w, &opts) {
        Ok(q) => q,
        Err(Error::NoConvergence { estimate, tol }) => {
            r.check("extrapolation converged", false, format!("error estimate {estimate:.3e} > {tol:.1e}"));
            return Ok(());
        }
        Err(e) => return Err(e.into()),
    };
    r.note(format!("volume ≈ {:.12}", q.value));
    r.residual("error_estimate", q.error_estimate);
    r.check("extrapolation converged", q.error_estimate <= opts.tol, "");
    let mut data = json!({ "volume": quadrature_json(&q) });
    if let Ok(exact) = taylor_split_volume(&w) {
        let e = rat_to_f64(&exact);
        r.residual("exact_difference", (q.value - e).abs());
        r.check("agrees with the exact split", (q.value - e).abs() <= opts.tol, format!("exact {exact}"));
        data["exact"] = json!(exact.to_string());
    }
    if let Some(h) = h {
        if axis == 0 || axis > w.vars().len() {
            return Err(CliError::Input(format!("axis {axis} outside 1..={}", w.vars().len())));
        }
        let hp = parse_poly(h, w.vars())?;
        let ind = defining_function_independence(&w, axis - 1, &hp, &opts)?;
        r.residual("independence_difference", ind.difference);
        r.check(
            "independent of the defining function",
            ind.difference < INDEPENDENCE_TOL,
            format!("|{:.9} − {:.9}|", ind.standard.value, ind.alternative.value),
        );
        data["independence"] = json!({ "h": h, "axis": axis, "alternative": quadrature_json(&ind.alternative), "difference": ind.difference });
    }
    r.data = data;
    Ok(())
}

fn invariant_json(v: &Invariant) -> Value {
    match v {
        Invariant::Volume(q) => json!({ "volume": q.value, "error_estimate": q.error_estimate }),
        Invariant::Exact(c) => json!({ "exact": c.to_string() }),
    }
}

fn example45(r: &mut Report, opts: &LiouvilleOptions) -> CliResult<()> {
    let mut vectors: Vec<(BigRational, Vec<f64>)> = Vec::new();
    let mut family = Vec::new();
    for k in gallery::example45_parameters() {
        let (m, w) = gallery::example45(&k)?;
        let inv = m.decomposition_invariants(&w, opts)?;
        let vol_ok = |lvl: usize| inv.levels[lvl].iter().all(|(_, v)| v.value_f64().abs() < opts.tol);
        r.check(&format!("k = {k}: smooth part vanishes"), vol_ok(0), "");
        r.check(&format!("k = {k}: level-1 volumes vanish"), vol_ok(1), "");
        let exact: Vec<(String, String)> = inv.levels[2]
            .iter()
            .map(|(s, v)| {
                let c = match v {
                    Invariant::Exact(c) => c.to_string(),
                    Invariant::Volume(q) => format!("{}", q.value),
                };
                (stratum_key(s), c)
            })
            .collect();
        let want = vec![("1,2".to_string(), (-&k).to_string()), ("2,1".to_string(), k.to_string())];
        r.check(&format!("k = {k}: point residues ±k"), exact == want, format!("{exact:?}"));
        let levels: Vec<Value> = inv
            .levels
            .iter()
            .map(|l| Value::Object(l.iter().map(|(s, v)| (stratum_key(s), invariant_json(v))).collect()))
            .collect();
        family.push(json!({ "k": k.to_string(), "levels": levels }));
        vectors.push((k, inv.as_vector()));
    }
    let mut distinct = true;
    for a in 0..vectors.len() {
        for b in a + 1..vectors.len() {
            let gap = vectors[a].1.iter().zip(&vectors[b].1).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            distinct &= gap > 0.5;
        }
    }
    r.check("distinct k give distinct invariants", distinct, "");
    r.data = json!({ "family": family });
    Ok(())
}

fn block_table(r: &mut Report, rep: &GradedCohomReport) {
    r.note(format!("{} complex, degrees ≤ {}{}", rep.complex, rep.max_degree, if rep.truncated { " (truncated)" } else { "" }));
    r.note("   k    d  dim  representatives".to_string());
    for b in rep.blocks.iter().filter(|b| b.dim > 0) {
        let reps: Vec<String> = b.representatives.iter().map(|c| c.to_string()).collect();
        r.note(format!("{:>4} {:>4} {:>4}  {}", b.k, b.d, b.dim, reps.join(", ")));
    }
    r.note(format!("totals {:?}", rep.totals));
    if let Some(w) = &rep.warning {
        r.note(format!("warning: {w}"));
    }
}

pub fn cohomology_json(rep: &GradedCohomReport) -> Value {
    let blocks: Vec<Value> = rep
        .blocks
        .iter()
        .filter(|b| b.dim > 0)
        .map(|b| {
            json!({
                "k": b.k,
                "d": b.d,
                "dim": b.dim,
                "rank_in": b.rank_in,
                "representatives": b.representatives.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "complex": rep.complex,
        "max_degree": rep.max_degree,
        "shift": rep.shift,
        "truncated": rep.truncated,
        "totals": rep.totals,
        "stable_from": rep.stable_from,
        "warning": rep.warning,
        "blocks": blocks,
    })
}

fn e_cohomology(r: &mut Report, inputs: &Inputs, n: i64) -> CliResult<()> {
    let frame = frame_of(inputs, None)?;
    let rep = cohomology(&frame, ComplexKind::EForms, n)?;
    block_table(r, &rep);
    r.check("representatives closed and not exact", rep.all_verified(), "");
    r.data = cohomology_json(&rep);
    Ok(())
}

fn field(vars: &Vars, a: &str, b: &str) -> CliResult<MultiVec> {
    Ok(MultiVec::from_poly_field(&[parse_poly(a, vars)?, parse_poly(b, vars)?]))
}

fn poisson_cohomology(r: &mut Report, inputs: &Inputs, bivector: Option<&str>, n: i64) -> CliResult<()> {
    let (frame, pi, default) = match bivector {
        Some(path) => {
            let pi = read_json::<MultiVecDoc>(Path::new(path))?.build()?.to_ambient();
            let frame = Arc::new(EFrame::build_standard_with(FrameKind::Full, pi.vars().clone())?);
            (frame, pi, false)
        }
        None => {
            let frame = frame_of(inputs, Some("elliptic"))?;
            let pi = elliptic_bivector(frame.vars())?;
            (frame, pi, true)
        }
    };
    let pc = is_poisson(&pi)?;
    if !r.check("[Π, Π] = 0", pc.poisson, format!("{:?}", pc.witness)) {
        return Ok(());
    }
    let rep = cohomology(&frame, ComplexKind::Lichnerowicz(pi.clone()), n)?;
    block_table(r, &rep);
    r.check("representatives closed and not exact", rep.all_verified(), "");
    if default {
        let v = frame.vars();
        let unexpected: Vec<String> = rep
            .blocks
            .iter()
            .filter(|b| b.dim > 0 && !matches!((b.k, b.d), (0, 0) | (1, 1) | (2, 0) | (2, 2)))
            .map(|b| format!("(k={}, d={}) dim {}", b.k, b.d, b.dim))
            .collect();
        r.check("no classes outside the expected degrees", unexpected.is_empty(), unexpected.join(", "));
        r.check("totals (1, 2, 2)", rep.totals == [1, 2, 2], format!("{:?}", rep.totals));
        let cx = GradedComplex::new(&frame, ComplexKind::Lichnerowicz(pi.clone()))?;
        let multi = |m: MultiVec| Cochain::Multi(m);
        let h1 = cx.class_rank(&[multi(field(v, "-y", "x")?), multi(field(v, "x", "y")?)], 1, 1)?;
        r.check(
            "H¹ spanned by rotation and dilation",
            h1 == 2 && rep.totals.get(1) == Some(&2),
            format!("rotation and dilation span {h1} of {} classes", rep.totals.get(1).copied().unwrap_or(0)),
        );
        let dxdy = MultiVec::from_terms(Basis::Ambient, v, 2, vec![(vec![0, 1], ecalc_core::SingFunc::one(v))])?;
        let a = cx.class_rank(&[multi(dxdy)], 2, 0)?;
        let b = cx.class_rank(&[multi(pi.clone())], 2, 2)?;
        r.check(
            "H² spanned by ∂x∧∂y and Π_E",
            a == 1 && b == 1 && rep.totals.get(2) == Some(&2),
            format!("∂x∧∂y spans {a} of {}, Π_E spans {b} of {}", rep.dim(2, 0), rep.dim(2, 2)),
        );
    }
    r.data = cohomology_json(&rep);
    r.data["bivector"] = json!(pi.to_string());
    Ok(())
}

fn compare(r: &mut Report, inputs: &Inputs, n: i64) -> CliResult<()> {
    let frame = frame_of(inputs, Some("elliptic"))?;
    let c = compare_e_vs_poisson(&frame, n)?;
    for line in c.to_string().lines() {
        r.note(line.to_string());
    }
    let e2 = c.e_totals.get(2).copied().unwrap_or(0);
    let p2 = c.poisson_totals.get(2).copied().unwrap_or(0);
    r.check("dim E-H² = 1 ≠ 2 = dim H²_Π", e2 == 1 && p2 == 2, format!("{e2} vs {p2}"));
    r.check("not isomorphic", !c.differing.is_empty(), format!("differ at k = {:?}", c.differing));
    r.data = json!({
        "max_degree": n,
        "e_totals": c.e_totals,
        "poisson_totals": c.poisson_totals,
        "differing": c.differing,
        "e": cohomology_json(&c.e_report),
        "poisson": cohomology_json(&c.poisson_report),
    });
    Ok(())
}

fn ambient_field(frame: &Arc<EFrame>, coeffs: &[ecalc_core::SingFunc]) -> String {
    MultiVec::from_field(&frame.anchor(coeffs), frame.vars()).to_string()
}

fn moser(r: &mut Report, inputs: &Inputs, mu: Option<&str>, num: &NumericFlags) -> CliResult<()> {
    let (w0, w1, mu) = match (&inputs.gallery, inputs.form.as_slice(), mu) {
        (Some(g), [], None) => {
            let p = gallery::moser(g).ok_or_else(|| CliError::Input(format!("no gallery Moser problem `{g}`")))??;
            (p.w0, p.w1, p.mu)
        }
        (None, [a, b], Some(m)) => (load_form(a)?, load_form(b)?, load_form(m)?),
        _ => return missing("--gallery, or two --form and one --mu"),
    };
    let points = match &num.points {
        Some(p) => read_json::<PointsDoc>(p)?.into_points(),
        None => default_check_points(w0.vars().len()),
    };
    if points.iter().any(|p| p.len() != w0.vars().len()) {
        return Err(CliError::Input("check point of the wrong dimension".into()));
    }
    let frame = w0.frame().clone();
    let primitive = is_primitive(&w0, &w1, &mu)?;
    r.check("dμ = ω1 − ω0", primitive, "");
    let mut fields = serde_json::Map::new();
    if primitive {
        for (label, t) in [("0", int(0)), ("1/2", BigRational::new(1.into(), 2.into())), ("1", int(1))] {
            match moser_vector_field(&w0, &w1, &mu, &t) {
                Ok(x) => {
                    r.note(format!("X_{label} = {}", ambient_field(&frame, &x)));
                    fields.insert(label.into(), json!(ambient_field(&frame, &x)));
                }
                Err(e @ Error::NonUnitDeterminant(_)) => r.note(format!("X_{label}: no closed form ({e}); integrated numerically")),
                Err(e) => return Err(e.into()),
            }
        }
    }
    let rep = verify_moser(&w0, &w1, &mu, &points, num.steps)?;
    r.residual("pullback", rep.max_residual);
    r.check("ρ₁*ω1 = ω0 at the check points", rep.max_residual < num.tol, format!("max residual {:.3e}", rep.max_residual));
    let conv = moser_convergence(&w0, &w1, &mu, &points, &CONVERGENCE_STEPS)?;
    if primitive {
        let (ok, detail) = match conv.observed_order {
            _ if conv.at_roundoff => (true, "RK4 is exact on this flow: residual at roundoff for every step count".to_string()),
            Some(o) => (o >= MIN_ORDER, format!("observed order {o:.3}")),
            None => (false, "too few residuals above roundoff to estimate an order".to_string()),
        };
        r.check("RK4 convergence order ≥ 3.5", ok, detail);
    }
    let endpoints: Vec<Value> =
        points.iter().zip(&rep.flows).map(|(p, f)| json!({ "start": p, "end": f.end_point(), "residual": f.max_residual })).collect();
    r.data = json!({
        "fields": fields,
        "steps": num.steps,
        "max_residual": rep.max_residual,
        "flows": endpoints,
        "convergence": {
            "steps": conv.steps,
            "residuals": conv.residuals,
            "orders": conv.orders,
            "observed_order": conv.observed_order,
            "at_roundoff": conv.at_roundoff,
        },
    });
    Ok(())
}

fn s4(r: &mut Report) -> CliResult<()> {
    let atlas = gallery_s4()?;
    let rep = s4_verify(&atlas)?;
    for c in &rep.charts {
        r.check(&format!("{}: [v_i, v_j] = 0", c.chart), c.commuting, "");
        r.check(&format!("{}: Σ v_i = 0", c.chart), c.sum_zero, "");
        r.check(&format!("{}: [Π, Π] = 0", c.chart), c.poisson, "");
        r.check(&format!("{}: Π∧Π = 2 Σ hatted products", c.chart), c.wedge_identity, "");
        r.check(
            &format!("{}: dual form nondegenerate", c.chart),
            c.nondegenerate,
            format!("min |det| {:.3e} on {} points", c.min_abs_det, c.grid_points),
        );
        if let Some(d) = &c.expansion_diffs {
            if d.is_empty() {
                r.note(format!("{}: Π agrees term by term with the displayed expansion", c.chart));
            } else {
                r.note(format!("{}: {} term(s) differ from the displayed expansion: {}", c.chart, d.len(), d.join("; ")));
            }
        }
    }
    r.check(
        "transition maps compose",
        rep.transition_checks > 0 && rep.transition_max_err < crate::s4::TRANSITION_TOL,
        format!("{} triples, max error {:.1e}", rep.transition_checks, rep.transition_max_err),
    );
    r.check(
        "v_j agree across charts",
        rep.field_max_err < crate::s4::FIELD_TOL,
        format!("{} comparisons, max error {:.1e}", rep.field_checks, rep.field_max_err),
    );
    r.residual("transition", rep.transition_max_err);
    r.residual("field_transport", rep.field_max_err);
    r.data = serde_json::to_value(&rep)?;
    Ok(())
}

fn list_gallery(r: &mut Report, name: Option<&str>) -> CliResult<()> {
    let Some(name) = name else {
        for (n, cat, desc) in gallery::catalogue() {
            r.note(format!("{n:<18} {cat:<11} {desc}"));
        }
        let entries: Vec<Value> =
            gallery::catalogue().into_iter().map(|(n, c, d)| json!({ "name": n, "category": c, "description": d })).collect();
        r.data = json!({ "entries": entries });
        return Ok(());
    };
    let data = if let Some(f) = gallery::frame(name) {
        serde_json::to_value(FrameDoc::from_frame(&f?))?
    } else if let Some(d) = gallery::generator_doc(name) {
        serde_json::to_value(d)?
    } else if let Some(w) = gallery::form(name) {
        serde_json::to_value(FormDoc::from_form(&w?, true))?
    } else if let Some(p) = gallery::moser(name) {
        let p = p?;
        json!({ "w0": FormDoc::from_form(&p.w0, true), "w1": FormDoc::from_form(&p.w1, true), "mu": FormDoc::from_form(&p.mu, true) })
    } else if let Some(a) = gallery::assignment(name) {
        let (m, k, a) = a?;
        serde_json::to_value(AssignmentDoc::from_assignment(&m, k, &a))?
    } else if name == "example45" {
        let ks: Vec<String> = gallery::example45_parameters().iter().map(|k| k.to_string()).collect();
        json!({ "model": { "dim": 2, "hyperplanes": [1, 2] }, "form": "k·θ1∧θ2", "k": ks })
    } else if name == "s4" {
        let atlas = gallery_s4()?;
        let charts: Vec<Value> = atlas.charts.iter().map(|c| json!({ "chart": c.name(), "pi": c.pi.to_ambient().to_string() })).collect();
        json!({ "charts": charts })
    } else {
        return Err(CliError::Input(format!("no gallery entry `{name}`")));
    };
    r.note(serde_json::to_string_pretty(&data)?);
    r.data = data;
    Ok(())
}
