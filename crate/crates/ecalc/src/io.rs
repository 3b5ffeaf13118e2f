//! JSON documents for frames, forms, multivectors, c-models, assignments
//! and check points. Indices in documents are 1-based.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use ecalc_core::ctower::{Assignment, CModel, ResidueTower};
use ecalc_core::eforms::EForm;
use ecalc_core::eframe::{check_involutive, EFrame, FrameKind};
use ecalc_core::multivec::{Basis, MultiVec};
use ecalc_core::{parse_poly, Poly, SingFunc, Vars};
use serde::{Deserialize, Serialize};

use crate::gallery;

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Core(ecalc_core::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ecalc_core::Error> for CliError {
    fn from(e: ecalc_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(format!("malformed JSON: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn input<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Input(msg.into()))
}

fn one_based(idx: &[usize], bound: usize, what: &str) -> CliResult<Vec<usize>> {
    idx.iter()
        .map(|&i| if i == 0 || i > bound { input(format!("{what} index {i} outside 1..={bound}")) } else { Ok(i - 1) })
        .collect()
}

fn to_one_based(idx: impl IntoIterator<Item = usize>) -> Vec<usize> {
    idx.into_iter().map(|i| i + 1).collect()
}

fn polys(texts: &[String], vars: &Vars) -> CliResult<Vec<Poly>> {
    texts.iter().map(|t| Ok(parse_poly(t, vars)?)).collect()
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct FrameDoc {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vars: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(default = "custom_label")]
    pub kind: String,
    /// b and b^k frames.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis: Option<usize>,
    /// The k of a b^k frame.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hyperplanes: Option<Vec<usize>>,
    /// Leaf directions of a foliation frame.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leaves: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<Vec<String>>,
    #[serde(default)]
    pub singular_factors: Vec<String>,
    #[serde(default)]
    pub z_locus: Vec<String>,
}

fn custom_label() -> String {
    "custom".into()
}

impl FrameDoc {
    pub fn from_frame(f: &EFrame) -> Self {
        let (mut axis, mut order, mut hyperplanes, mut leaves) = (None, None, None, None);
        match f.kind() {
            FrameKind::B { axis: a } => axis = Some(a + 1),
            FrameKind::Bk { axis: a, k } => {
                axis = Some(a + 1);
                order = Some(*k);
            }
            FrameKind::C(h) => hyperplanes = Some(to_one_based(h.iter().copied())),
            FrameKind::Foliation(c) => leaves = Some(to_one_based(c.iter().copied())),
            _ => {}
        }
        FrameDoc {
            dim: f.dim(),
            vars: Some(f.vars().names().to_vec()),
            rank: Some(f.rank()),
            kind: f.kind().label().into(),
            axis,
            order,
            hyperplanes,
            leaves,
            generators: f.generators().iter().map(|g| g.iter().map(|p| p.to_string()).collect()).collect(),
            singular_factors: f.singular_factors().iter().map(|p| p.to_string()).collect(),
            z_locus: f.z_locus().iter().map(|p| p.to_string()).collect(),
        }
    }

    pub fn vars(&self) -> CliResult<Vars> {
        match &self.vars {
            Some(v) if v.len() != self.dim => input(format!("{} variable names for dimension {}", v.len(), self.dim)),
            Some(v) => Ok(Vars::new(v)),
            None => Ok(Vars::standard(self.dim)),
        }
    }

    /// Generators as polynomials, without any involutivity check.
    pub fn generator_polys(&self) -> CliResult<(Vars, Vec<Vec<Poly>>)> {
        let vars = self.vars()?;
        let mut gens = Vec::new();
        for g in &self.generators {
            if g.len() != self.dim {
                return input(format!("generator with {} components in dimension {}", g.len(), self.dim));
            }
            gens.push(polys(g, &vars)?);
        }
        Ok((vars, gens))
    }

    fn kind(&self) -> CliResult<Option<FrameKind>> {
        let n = self.dim;
        let axis = || -> CliResult<usize> {
            let a = self.axis.ok_or_else(|| CliError::Input("b frames need \"axis\"".into()))?;
            Ok(one_based(&[a], n, "axis")?[0])
        };
        Ok(Some(match self.kind.as_str() {
            "full" => FrameKind::Full,
            "b" => FrameKind::B { axis: axis()? },
            "bk" => FrameKind::Bk { axis: axis()?, k: self.order.unwrap_or(1) },
            "c" => FrameKind::C(one_based(self.hyperplanes.as_deref().unwrap_or(&[]), n, "hyperplane")?),
            "elliptic" => FrameKind::Elliptic,
            "foliation" => FrameKind::Foliation(one_based(self.leaves.as_deref().unwrap_or(&[]), n, "leaf")?),
            "custom" => return Ok(None),
            other => return input(format!("unknown frame kind `{other}`")),
        }))
    }

    pub fn build(&self) -> CliResult<EFrame> {
        let vars = self.vars()?;
        let frame = match self.kind()? {
            Some(kind) => {
                let f = EFrame::build_standard_with(kind, vars.clone())?;
                if !self.generators.is_empty() && self.generator_polys()?.1 != f.generators() {
                    return input(format!("generators do not match the `{}` frame", self.kind));
                }
                f
            }
            None => {
                let (_, gens) = self.generator_polys()?;
                EFrame::custom(vars.clone(), gens, polys(&self.singular_factors, &vars)?, polys(&self.z_locus, &vars)?, None)?
            }
        };
        if let Some(r) = self.rank {
            if r != frame.rank() {
                return input(format!("declared rank {r} but the frame has rank {}", frame.rank()));
            }
        }
        Ok(frame)
    }
}

/// Frame given by gallery name, file path or inline document.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(untagged)]
pub enum FrameRef {
    Name(String),
    Inline(FrameDoc),
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

/// Gallery name first, then a JSON file.
pub fn load_frame_doc(spec: &str) -> CliResult<FrameDoc> {
    if let Some(f) = gallery::frame(spec) {
        return Ok(FrameDoc::from_frame(&f?));
    }
    if let Some(d) = gallery::generator_doc(spec) {
        return Ok(d);
    }
    let path = Path::new(spec);
    if path.exists() {
        return read_json(path);
    }
    input(format!("`{spec}` is neither a gallery frame nor a readable file"))
}

pub fn load_frame(spec: &str) -> CliResult<Arc<EFrame>> {
    if let Some(f) = gallery::frame(spec) {
        return Ok(Arc::new(f?));
    }
    Ok(Arc::new(load_frame_doc(spec)?.build()?))
}

impl FrameRef {
    pub fn resolve(&self) -> CliResult<Arc<EFrame>> {
        match self {
            FrameRef::Name(s) => load_frame(s),
            FrameRef::Inline(d) => Ok(Arc::new(d.build()?)),
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct TermDoc {
    pub indices: Vec<usize>,
    pub coeff: String,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct FormDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<FrameRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vars: Option<Vec<String>>,
    pub degree: usize,
    pub terms: Vec<TermDoc>,
}

fn term_docs<'a>(terms: impl Iterator<Item = (&'a ecalc_core::blade::Blade, &'a SingFunc)>) -> Vec<TermDoc> {
    terms.map(|(b, c)| TermDoc { indices: to_one_based(b.indices()), coeff: c.to_string() }).collect()
}

fn parse_terms(terms: &[TermDoc], vars: &Vars, top: usize) -> CliResult<Vec<(Vec<usize>, SingFunc)>> {
    terms
        .iter()
        .map(|t| Ok((one_based(&t.indices, top, "basis")?, SingFunc::from_poly(parse_poly(&t.coeff, vars)?))))
        .collect()
}

impl FormDoc {
    /// With the frame inlined when `with_frame` is set, else just the
    /// coordinate names.
    pub fn from_form(w: &EForm, with_frame: bool) -> Self {
        FormDoc {
            frame: with_frame.then(|| FrameRef::Inline(FrameDoc::from_frame(w.frame()))),
            vars: (!with_frame).then(|| w.vars().names().to_vec()),
            degree: w.degree(),
            terms: term_docs(w.terms()),
        }
    }

    pub fn build_on(&self, frame: &Arc<EFrame>) -> CliResult<EForm> {
        Ok(EForm::from_terms(frame, self.degree, parse_terms(&self.terms, frame.vars(), frame.rank())?)?)
    }

    pub fn build(&self) -> CliResult<EForm> {
        let frame = self.frame.as_ref().ok_or_else(|| CliError::Input("form document has no frame".into()))?.resolve()?;
        self.build_on(&frame)
    }
}

/// Gallery form name first, then a JSON file.
pub fn load_form(spec: &str) -> CliResult<EForm> {
    if let Some(w) = gallery::form(spec) {
        return Ok(w?);
    }
    let path = Path::new(spec);
    if path.exists() {
        let doc: FormDoc = read_json(path)?;
        return doc.build();
    }
    input(format!("`{spec}` is neither a gallery form nor a readable file"))
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct MultiVecDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<FrameRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vars: Option<Vec<String>>,
    pub basis: String,
    pub degree: usize,
    pub terms: Vec<TermDoc>,
}

impl MultiVecDoc {
    pub fn from_multivec(m: &MultiVec) -> Self {
        let (frame, basis) = match m.basis() {
            Basis::Frame(f) => (Some(FrameRef::Inline(FrameDoc::from_frame(f))), "frame"),
            Basis::Ambient => (None, "ambient"),
        };
        MultiVecDoc { frame, vars: Some(m.vars().names().to_vec()), basis: basis.into(), degree: m.degree(), terms: term_docs(m.terms()) }
    }

    pub fn build(&self) -> CliResult<MultiVec> {
        let frame = self.frame.as_ref().map(FrameRef::resolve).transpose()?;
        let vars = match (&frame, &self.vars) {
            (Some(f), _) => f.vars().clone(),
            (None, Some(v)) => Vars::new(v),
            (None, None) => return input("multivector document needs a frame or vars"),
        };
        let (basis, top) = match (self.basis.as_str(), frame) {
            ("frame", Some(f)) => {
                let r = f.rank();
                (Basis::Frame(f), r)
            }
            ("frame", None) => return input("frame basis needs a frame"),
            ("ambient", _) => (Basis::Ambient, vars.len()),
            (b, _) => return input(format!("unknown basis `{b}`")),
        };
        Ok(MultiVec::from_terms(basis, &vars, self.degree, parse_terms(&self.terms, &vars, top)?)?)
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct CModelDoc {
    pub dim: usize,
    pub hyperplanes: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vars: Option<Vec<String>>,
}

impl CModelDoc {
    pub fn build(&self) -> CliResult<CModel> {
        let vars = match &self.vars {
            Some(v) => Vars::new(v),
            None => Vars::standard(self.dim),
        };
        if vars.len() != self.dim {
            return input("vars and dim disagree");
        }
        Ok(CModel::with_vars(vars, &one_based(&self.hyperplanes, self.dim, "hyperplane")?)?)
    }

    pub fn from_model(m: &CModel) -> Self {
        CModelDoc { dim: m.dim(), hyperplanes: to_one_based(m.hyperplanes().iter().copied()), vars: Some(m.vars().names().to_vec()) }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct StratumFormDoc {
    pub stratum: Vec<usize>,
    pub degree: usize,
    pub terms: Vec<TermDoc>,
}

/// Forms on the ordered strata of one level of a c-model.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct AssignmentDoc {
    pub model: CModelDoc,
    pub level: usize,
    pub assignment: Vec<StratumFormDoc>,
}

impl AssignmentDoc {
    pub fn build(&self) -> CliResult<(CModel, usize, Assignment)> {
        let model = self.model.build()?;
        let mut out = Assignment::new();
        for s in &self.assignment {
            let stratum = one_based(&s.stratum, model.dim(), "hyperplane")?;
            let frame = model.stratum_frame(&stratum)?;
            let doc = FormDoc { frame: None, vars: None, degree: s.degree, terms: s.terms.clone() };
            out.insert(stratum, doc.build_on(&frame)?);
        }
        Ok((model, self.level, out))
    }

    pub fn from_assignment(model: &CModel, level: usize, a: &Assignment) -> Self {
        AssignmentDoc {
            model: CModelDoc::from_model(model),
            level,
            assignment: a
                .iter()
                .map(|(s, w)| StratumFormDoc { stratum: to_one_based(s.iter().copied()), degree: w.degree(), terms: term_docs(w.terms()) })
                .collect(),
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(untagged)]
pub enum PointsDoc {
    Bare(Vec<Vec<f64>>),
    Wrapped { points: Vec<Vec<f64>> },
}

impl PointsDoc {
    pub fn into_points(self) -> Vec<Vec<f64>> {
        match self {
            PointsDoc::Bare(p) | PointsDoc::Wrapped { points: p } => p,
        }
    }
}

/// Ordered stratum as a key: "" for the whole space, else "1,3,2".
pub fn stratum_key(s: &[usize]) -> String {
    s.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",")
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct TowerDoc {
    pub levels: Vec<BTreeMap<String, FormDoc>>,
}

impl TowerDoc {
    pub fn from_tower(t: &ResidueTower) -> Self {
        TowerDoc {
            levels: t.levels.iter().map(|l| l.iter().map(|(s, w)| (stratum_key(s), FormDoc::from_form(w, false))).collect()).collect(),
        }
    }
}

/// Structure constants of explicit generators, as JSON-ready triples.
pub fn structure_table(gens: &[Vec<Poly>]) -> CliResult<Vec<(usize, usize, usize, String)>> {
    let c = check_involutive(gens, None)?;
    Ok(c.nonzero().into_iter().map(|(i, j, k, p)| (i + 1, j + 1, k + 1, p.to_string())).collect())
}
