//! Polynomial cohomology of the E-de Rham complex and of the Lichnerowicz
//! complex, computed block by block over homogeneous degree.
//!
//! E-forms f·θ_I are graded by |α| + Σ_{a∈I} w_a with w_a = 1 − deg V_a, so
//! d preserves the grading whenever every generator is homogeneous and each
//! structure constant c^k_ij is homogeneous of degree w_k − w_i − w_j. For
//! the catalogue frames with linear generators all weights vanish and this
//! is the plain coefficient degree. Multivectors are graded by coefficient
//! degree and [Π, ·] shifts it by deg Π − 1.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use crate::blade::Blade;
use crate::eforms::EForm;
use crate::eframe::{EFrame, FrameKind};
use crate::error::{Error, Result};
use crate::linalg::{complement_indices, span_rank, QMatrix};
use crate::multivec::{is_poisson, schouten, Basis, MultiVec};
use crate::poly::{monomials_of_degree, Monomial, Poly, Vars};
use crate::singfunc::SingFunc;

#[derive(Clone, Debug)]
pub enum ComplexKind {
    EForms,
    /// d_Π = [Π, ·] on ambient multivectors.
    Lichnerowicz(MultiVec),
}

impl ComplexKind {
    pub fn label(&self) -> &'static str {
        match self {
            ComplexKind::EForms => "e-forms",
            ComplexKind::Lichnerowicz(_) => "lichnerowicz",
        }
    }
}

/// A cochain of either complex.
#[derive(Clone, Debug, PartialEq)]
pub enum Cochain {
    Form(EForm),
    Multi(MultiVec),
}

impl Cochain {
    pub fn is_zero(&self) -> bool {
        match self {
            Cochain::Form(f) => f.is_zero(),
            Cochain::Multi(m) => m.is_zero(),
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            Cochain::Form(f) => f.degree(),
            Cochain::Multi(m) => m.degree(),
        }
    }

    fn terms(&self) -> Vec<(Blade, SingFunc)> {
        match self {
            Cochain::Form(f) => f.terms().map(|(b, c)| (*b, c.clone())).collect(),
            Cochain::Multi(m) => m.terms().map(|(b, c)| (*b, c.clone())).collect(),
        }
    }
}

fn blade_label(b: Blade, vars: &Vars, form: bool) -> String {
    let parts: Vec<String> = b
        .indices()
        .map(|i| if form { alloc::format!("θ{}", i + 1) } else { alloc::format!("∂{}", vars.names()[i]) })
        .collect();
    parts.join("∧")
}

impl fmt::Display for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (vars, form) = match self {
            Cochain::Form(w) => (w.vars().clone(), true),
            Cochain::Multi(m) => (m.vars().clone(), false),
        };
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (b, c)) in terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            if b.is_empty() {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})·{}", blade_label(*b, &vars, form))?;
            }
        }
        Ok(())
    }
}

type Cell = (Blade, Monomial);

/// The cochain spaces and differential of one complex, graded or not.
#[derive(Clone, Debug)]
pub struct GradedComplex {
    frame: Arc<EFrame>,
    kind: ComplexKind,
    vars: Vars,
    top: usize,
    weights: Vec<i64>,
    shift: i64,
}

fn check_eform_grading(frame: &EFrame) -> Result<Vec<i64>> {
    let w = frame
        .generator_weights()
        .ok_or_else(|| Error::NotGraded("generators are not homogeneous".into()))?;
    for (i, j, k, c) in frame.structure().nonzero() {
        let want = w[k] - w[i] - w[j];
        if c.homogeneous_degree().map(i64::from) != Some(want) {
            return Err(Error::NotGraded(alloc::format!("structure constant c^{k}_{i}{j} = {c} is not of degree {want}")));
        }
    }
    Ok(w)
}

fn bivector_degree(p: &MultiVec) -> Result<i64> {
    let mut deg = None;
    for (_, c) in p.terms() {
        let poly = c.as_poly().ok_or_else(|| Error::NotGraded("bivector has singular coefficients".into()))?;
        let d = poly.homogeneous_degree().ok_or_else(|| Error::NotGraded(alloc::format!("coefficient {poly} is not homogeneous")))?;
        match deg {
            None => deg = Some(d),
            Some(e) if e == d => {}
            Some(_) => return Err(Error::NotGraded("bivector coefficients have different degrees".into())),
        }
    }
    Ok(deg.map_or(0, i64::from))
}

/// The degree shift of the differential, or `NotGraded`.
pub fn grading_shift(frame: &EFrame, kind: &ComplexKind) -> Result<i64> {
    match kind {
        ComplexKind::EForms => check_eform_grading(frame).map(|_| 0),
        ComplexKind::Lichnerowicz(p) => Ok(bivector_degree(&p.to_ambient())? - 1),
    }
}

impl GradedComplex {
    /// Graded structure; fails with `NotGraded` when none exists.
    pub fn new(frame: &Arc<EFrame>, kind: ComplexKind) -> Result<Self> {
        let mut c = Self::ungraded(frame, kind)?;
        c.shift = grading_shift(frame, &c.kind)?;
        if let ComplexKind::EForms = c.kind {
            c.weights = check_eform_grading(frame)?;
        }
        Ok(c)
    }

    /// Coefficient-degree layout with no grading claim (truncated mode).
    fn ungraded(frame: &Arc<EFrame>, kind: ComplexKind) -> Result<Self> {
        let vars = frame.vars().clone();
        let (top, kind) = match kind {
            ComplexKind::EForms => (frame.rank(), ComplexKind::EForms),
            ComplexKind::Lichnerowicz(p) => {
                if p.degree() != 2 || p.vars() != &vars {
                    return Err(Error::InvalidArgument("Π must be a bivector on the frame's coordinates".into()));
                }
                let p = p.to_ambient();
                if p.terms().any(|(_, c)| c.as_poly().is_none()) {
                    return Err(Error::ExtendedForm);
                }
                if !is_poisson(&p)?.poisson {
                    return Err(Error::NotPoisson);
                }
                (vars.len(), ComplexKind::Lichnerowicz(p))
            }
        };
        Ok(GradedComplex { frame: frame.clone(), kind, weights: vec![0; top], vars, top, shift: 0 })
    }

    pub fn frame(&self) -> &Arc<EFrame> {
        &self.frame
    }

    pub fn kind(&self) -> &ComplexKind {
        &self.kind
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    /// Highest cochain level.
    pub fn top_level(&self) -> usize {
        self.top
    }

    fn blade_weight(&self, b: Blade) -> i64 {
        b.indices().map(|a| self.weights[a]).sum()
    }

    fn cell_weight(&self, (b, m): &Cell) -> i64 {
        self.blade_weight(*b) + m.iter().map(|&e| e as i64).sum::<i64>()
    }

    /// Lowest degree carrying level-k cochains.
    pub fn min_degree(&self, k: usize) -> i64 {
        Blade::all_of_size(self.top, k).into_iter().map(|b| self.blade_weight(b)).min().unwrap_or(0)
    }

    /// Basis of level-k cochains of degree d, in a fixed order.
    pub fn basis(&self, k: usize, d: i64) -> Vec<Cell> {
        let mut out = Vec::new();
        for b in Blade::all_of_size(self.top, k) {
            let m = d - self.blade_weight(b);
            if m >= 0 {
                for mono in monomials_of_degree(self.vars.len(), m as u32) {
                    out.push((b, mono));
                }
            }
        }
        out
    }

    fn basis_up_to(&self, k: usize, n: i64) -> Vec<Cell> {
        (self.min_degree(k)..=n).flat_map(|d| self.basis(k, d)).collect()
    }

    pub fn cochain(&self, k: usize, cells: &[Cell], coeffs: &[BigRational]) -> Result<Cochain> {
        let mut by_blade: BTreeMap<Blade, Poly> = BTreeMap::new();
        for ((b, m), c) in cells.iter().zip(coeffs) {
            if !c.is_zero() {
                let slot = by_blade.entry(*b).or_insert_with(|| Poly::zero(&self.vars));
                *slot = &*slot + &Poly::monomial(&self.vars, m.clone(), c.clone());
            }
        }
        let terms: Vec<(Vec<usize>, SingFunc)> = by_blade.into_iter().map(|(b, p)| (b.to_vec(), SingFunc::from_poly(p))).collect();
        Ok(match &self.kind {
            ComplexKind::EForms => Cochain::Form(EForm::from_terms(&self.frame, k, terms)?),
            ComplexKind::Lichnerowicz(_) => Cochain::Multi(MultiVec::from_terms(Basis::Ambient, &self.vars, k, terms)?),
        })
    }

    pub fn differential(&self, c: &Cochain) -> Result<Cochain> {
        match (&self.kind, c) {
            (ComplexKind::EForms, Cochain::Form(w)) => Ok(Cochain::Form(w.ederiv())),
            (ComplexKind::Lichnerowicz(p), Cochain::Multi(a)) => Ok(Cochain::Multi(schouten(p, a))),
            _ => Err(Error::BasisMismatch),
        }
    }

    /// Expansion of a cochain in cells.
    fn expand(&self, c: &Cochain) -> Result<Vec<(Cell, BigRational)>> {
        let mut out = Vec::new();
        for (b, f) in c.terms() {
            let p = f.as_poly().ok_or(Error::ExtendedForm)?;
            for (m, q) in p.terms() {
                out.push(((b, m.clone()), q.clone()));
            }
        }
        Ok(out)
    }

    /// Coordinates of a cochain in `basis(k, d)`; terms of any other degree
    /// are an error.
    pub fn coordinates(&self, c: &Cochain, k: usize, d: i64) -> Result<Vec<BigRational>> {
        let cells = self.basis(k, d);
        let index: BTreeMap<&Cell, usize> = cells.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let mut v = vec![BigRational::zero(); cells.len()];
        for (cell, q) in self.expand(c)? {
            match index.get(&cell) {
                Some(&i) => v[i] = q,
                None => {
                    return Err(Error::NotGraded(alloc::format!("term of degree {} outside block d = {d}", self.cell_weight(&cell))));
                }
            }
        }
        Ok(v)
    }

    /// The weighted-degree parts of a cochain.
    pub fn split_by_degree(&self, c: &Cochain) -> Result<BTreeMap<i64, Vec<(Cell, BigRational)>>> {
        let mut out: BTreeMap<i64, Vec<(Cell, BigRational)>> = BTreeMap::new();
        for (cell, q) in self.expand(c)? {
            out.entry(self.cell_weight(&cell)).or_default().push((cell, q));
        }
        Ok(out)
    }

    /// Matrix of d from degree d at level k to degree d + shift at level k + 1.
    pub fn block(&self, k: usize, d: i64) -> Result<QMatrix> {
        let src = self.basis(k, d);
        let rows = if k < self.top { self.basis(k + 1, d + self.shift).len() } else { 0 };
        let mut cols = Vec::with_capacity(src.len());
        for cell in &src {
            let c = self.cochain(k, core::slice::from_ref(cell), &[BigRational::from_integer(1.into())])?;
            let dc = self.differential(&c)?;
            cols.push(if k < self.top { self.coordinates(&dc, k + 1, d + self.shift)? } else { Vec::new() });
        }
        Ok(if src.is_empty() { QMatrix::zeros(rows, 0) } else { QMatrix::from_columns(rows, &cols) })
    }

    /// Dimension of the span of the given degree-d cochains in H^{k,d}.
    pub fn class_rank(&self, cs: &[Cochain], k: usize, d: i64) -> Result<usize> {
        let len = self.basis(k, d).len();
        let mut vs = if k == 0 { Vec::new() } else { columns(&self.block(k - 1, d - self.shift)?) };
        let base = span_rank(&vs, len);
        for c in cs {
            if !self.differential(c)?.is_zero() {
                return Err(Error::NotClosed);
            }
            vs.push(self.coordinates(c, k, d)?);
        }
        Ok(span_rank(&vs, len) - base)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockReport {
    pub k: usize,
    /// Degree of the block; in truncated mode, the cut-off N.
    pub d: i64,
    pub dim_cochains: usize,
    pub rank_out: usize,
    pub rank_in: usize,
    pub dim: usize,
    pub representatives: Vec<Cochain>,
    /// Every representative was confirmed closed and not exact.
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GradedCohomReport {
    pub complex: String,
    pub shift: Option<i64>,
    pub max_degree: i64,
    pub truncated: bool,
    pub blocks: Vec<BlockReport>,
    /// Σ_d dim H^{k,d}, covering only degrees ≤ N.
    pub totals: Vec<usize>,
    /// Smallest d₀ with H^{k,d} = 0 for all d₀ ≤ d ≤ N.
    pub stable_from: Vec<i64>,
    pub warning: Option<String>,
}

impl GradedCohomReport {
    pub fn dim(&self, k: usize, d: i64) -> usize {
        self.blocks.iter().find(|b| b.k == k && b.d == d).map_or(0, |b| b.dim)
    }

    /// (degree, representative) pairs at level k.
    pub fn representatives(&self, k: usize) -> Vec<(i64, &Cochain)> {
        self.blocks.iter().filter(|b| b.k == k).flat_map(|b| b.representatives.iter().map(move |r| (b.d, r))).collect()
    }

    pub fn all_verified(&self) -> bool {
        self.blocks.iter().all(|b| b.verified)
    }
}

fn columns(m: &QMatrix) -> Vec<Vec<BigRational>> {
    (0..m.cols()).map(|j| m.column(j)).collect()
}

fn representatives(
    cx: &GradedComplex,
    k: usize,
    cells: &[Cell],
    kernel: &[Vec<BigRational>],
    image: &[Vec<BigRational>],
    d_out: &dyn Fn(&[BigRational]) -> bool,
) -> Result<(Vec<Cochain>, bool)> {
    let len = cells.len();
    let picks = complement_indices(image, kernel, len);
    let base = span_rank(image, len);
    let mut verified = true;
    let mut reps = Vec::new();
    for i in picks {
        let v = &kernel[i];
        let mut with = image.to_vec();
        with.push(v.clone());
        verified &= d_out(v) && span_rank(&with, len) == base + 1;
        reps.push(cx.cochain(k, cells, v)?);
    }
    Ok((reps, verified))
}

fn totals_and_tail(blocks: &[BlockReport], top: usize, n: i64, mins: &[i64]) -> (Vec<usize>, Vec<i64>) {
    let mut totals = vec![0; top + 1];
    let mut stable = mins.to_vec();
    for b in blocks {
        totals[b.k] += b.dim;
        if b.dim > 0 {
            stable[b.k] = stable[b.k].max(b.d + 1);
        }
    }
    for s in stable.iter_mut() {
        *s = (*s).min(n + 1);
    }
    (totals, stable)
}

/// Exact per-degree cohomology for degrees ≤ `max_degree`.
pub fn cohom_dims(frame: &Arc<EFrame>, kind: ComplexKind, max_degree: i64) -> Result<GradedCohomReport> {
    if max_degree < 0 {
        return Err(Error::InvalidArgument("maximum degree must be nonnegative".into()));
    }
    let cx = GradedComplex::new(frame, kind)?;
    let s = cx.shift;
    let mut blocks = Vec::new();
    let mut mins = Vec::new();
    for k in 0..=cx.top {
        mins.push(cx.min_degree(k));
        for d in cx.min_degree(k)..=max_degree {
            let cells = cx.basis(k, d);
            if cells.is_empty() {
                continue;
            }
            let out = cx.block(k, d)?;
            let rank_out = out.rank();
            let inc = if k > 0 { Some(cx.block(k - 1, d - s)?) } else { None };
            let image = inc.as_ref().map(columns).unwrap_or_default();
            let rank_in = span_rank(&image, cells.len());
            let dim = cells.len() - rank_out - rank_in;
            let kernel = out.kernel();
            let (reps, verified) = representatives(&cx, k, &cells, &kernel, &image, &|v| out.mul_vec(v).iter().all(|x| x.is_zero()))?;
            let verified = verified && reps.len() == dim;
            blocks.push(BlockReport { k, d, dim_cochains: cells.len(), rank_out, rank_in, dim, representatives: reps, verified });
        }
    }
    let (totals, stable_from) = totals_and_tail(&blocks, cx.top, max_degree, &mins);
    Ok(GradedCohomReport {
        complex: cx.kind.label().into(),
        shift: Some(s),
        max_degree,
        truncated: false,
        blocks,
        totals,
        stable_from,
        warning: None,
    })
}

/// Matrix of d on all level-k cells of coefficient degree ≤ n, with rows
/// split into targets of degree ≤ n and the overflow above.
fn truncated_block(cx: &GradedComplex, k: usize, n: i64) -> Result<(QMatrix, QMatrix, Vec<Cell>)> {
    let src = cx.basis_up_to(k, n);
    let low = if k < cx.top { cx.basis_up_to(k + 1, n) } else { Vec::new() };
    let low_index: BTreeMap<&Cell, usize> = low.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut high_index: BTreeMap<Cell, usize> = BTreeMap::new();
    let mut entries = Vec::new();
    for (j, cell) in src.iter().enumerate() {
        let c = cx.cochain(k, core::slice::from_ref(cell), &[BigRational::from_integer(1.into())])?;
        for (t, q) in cx.expand(&cx.differential(&c)?)? {
            match low_index.get(&t) {
                Some(&i) => entries.push((true, i, j, q)),
                None => {
                    let next = high_index.len();
                    let i = *high_index.entry(t).or_insert(next);
                    entries.push((false, i, j, q));
                }
            }
        }
    }
    let mut dl = QMatrix::zeros(low.len(), src.len());
    let mut dh = QMatrix::zeros(high_index.len(), src.len());
    for (is_low, i, j, q) in entries {
        if is_low { dl.set(i, j, q) } else { dh.set(i, j, q) }
    }
    Ok((dl, dh, src))
}

fn stack(a: &QMatrix, b: &QMatrix) -> QMatrix {
    let rows: Vec<Vec<BigRational>> = (0..a.rows()).map(|i| a.row(i).to_vec()).chain((0..b.rows()).map(|i| b.row(i).to_vec())).collect();
    if rows.is_empty() {
        return QMatrix::zeros(0, a.cols());
    }
    QMatrix::from_rows(rows)
}

/// Cohomology of the complex truncated to coefficient degree ≤ `max_degree`:
/// closed cochains of degree ≤ N modulo differentials of degree-≤N
/// cochains that land in degree ≤ N. Classes near the top band may be
/// artefacts of the cut.
pub fn cohom_truncated(frame: &Arc<EFrame>, kind: ComplexKind, max_degree: i64) -> Result<GradedCohomReport> {
    if max_degree < 0 {
        return Err(Error::InvalidArgument("maximum degree must be nonnegative".into()));
    }
    let cx = GradedComplex::ungraded(frame, kind)?;
    let mut blocks = Vec::new();
    let mut prev: Option<(QMatrix, QMatrix)> = None;
    for k in 0..=cx.top {
        let (dl, dh, cells) = truncated_block(&cx, k, max_degree)?;
        let full = stack(&dl, &dh);
        let rank_out = full.rank();
        let image: Vec<Vec<BigRational>> = match &prev {
            None => Vec::new(),
            Some((pl, ph)) => {
                let keep = if ph.rows() == 0 { (0..ph.cols()).map(|j| unit(ph.cols(), j)).collect() } else { ph.kernel() };
                keep.iter().map(|v| pl.mul_vec(v)).collect()
            }
        };
        let rank_in = span_rank(&image, cells.len());
        let dim = cells.len() - rank_out - rank_in;
        let kernel = full.kernel();
        let (reps, verified) = representatives(&cx, k, &cells, &kernel, &image, &|v| full.mul_vec(v).iter().all(|x| x.is_zero()))?;
        let verified = verified && reps.len() == dim;
        blocks.push(BlockReport { k, d: max_degree, dim_cochains: cells.len(), rank_out, rank_in, dim, representatives: reps, verified });
        prev = Some((dl, dh));
    }
    let mins: Vec<i64> = (0..=cx.top).map(|k| cx.min_degree(k)).collect();
    let (totals, _) = totals_and_tail(&blocks, cx.top, max_degree, &mins);
    Ok(GradedCohomReport {
        complex: cx.kind.label().into(),
        shift: None,
        max_degree,
        truncated: true,
        blocks,
        totals,
        stable_from: Vec::new(),
        warning: Some(alloc::format!(
            "no grading is compatible with the differential; cochains truncated at coefficient degree {max_degree}, classes near the top band are unreliable"
        )),
    })
}

fn unit(n: usize, j: usize) -> Vec<BigRational> {
    (0..n).map(|i| BigRational::from_integer(i64::from(i == j).into())).collect()
}

/// Graded mode when available, truncated otherwise.
pub fn cohomology(frame: &Arc<EFrame>, kind: ComplexKind, max_degree: i64) -> Result<GradedCohomReport> {
    match cohom_dims(frame, kind.clone(), max_degree) {
        Err(Error::NotGraded(_)) => cohom_truncated(frame, kind, max_degree),
        r => r,
    }
}

/// Checks M_{k+1, d+s} · M_{k, d} = 0 on every block up to `max_degree`.
pub fn check_d_squared(cx: &GradedComplex, max_degree: i64) -> Result<bool> {
    for k in 0..cx.top.saturating_sub(1) {
        for d in cx.min_degree(k)..=max_degree {
            let a = cx.block(k, d)?;
            let b = cx.block(k + 1, d + cx.shift)?;
            if a.cols() > 0 && b.cols() > 0 && !b.mul(&a).is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Π_E = (x² + y²) ∂x∧∂y on the elliptic frame's coordinates.
pub fn elliptic_bivector(vars: &Vars) -> Result<MultiVec> {
    let r2 = &(&Poly::var(vars, 0) * &Poly::var(vars, 0)) + &(&Poly::var(vars, 1) * &Poly::var(vars, 1));
    MultiVec::from_terms(Basis::Ambient, vars, 2, vec![(vec![0, 1], SingFunc::from_poly(r2))])
}

#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub max_degree: i64,
    pub e_totals: Vec<usize>,
    pub poisson_totals: Vec<usize>,
    /// Levels where the two totals differ.
    pub differing: Vec<usize>,
    pub e_report: GradedCohomReport,
    pub poisson_report: GradedCohomReport,
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "degrees ≤ {}", self.max_degree)?;
        for k in 0..self.e_totals.len().max(self.poisson_totals.len()) {
            let e = self.e_totals.get(k).copied().unwrap_or(0);
            let p = self.poisson_totals.get(k).copied().unwrap_or(0);
            let rel = if e == p { "=" } else { "≠" };
            writeln!(f, "k = {k}: dim E-H = {e} {rel} {p} = dim Poisson H")?;
        }
        if self.differing.is_empty() {
            write!(f, "the two cohomologies agree in every level")
        } else {
            write!(f, "not isomorphic: totals differ at k = {:?}", self.differing)
        }
    }
}

/// E-cohomology of the elliptic frame against Poisson cohomology of Π_E.
pub fn compare_e_vs_poisson(frame: &Arc<EFrame>, max_degree: i64) -> Result<Comparison> {
    if *frame.kind() != FrameKind::Elliptic {
        return Err(Error::InvalidArgument("the comparison is defined for the elliptic frame".into()));
    }
    let e_report = cohom_dims(frame, ComplexKind::EForms, max_degree)?;
    let pi = elliptic_bivector(frame.vars())?;
    let poisson_report = cohom_dims(frame, ComplexKind::Lichnerowicz(pi), max_degree)?;
    let e_totals = e_report.totals.clone();
    let poisson_totals = poisson_report.totals.clone();
    let differing = (0..e_totals.len().max(poisson_totals.len()))
        .filter(|&k| e_totals.get(k) != poisson_totals.get(k))
        .collect();
    Ok(Comparison { max_degree, e_totals, poisson_totals, differing, e_report, poisson_report })
}

/// A μ with dμ = ω, solved degree by degree; needs a graded frame.
pub fn find_primitive(omega: &EForm) -> Result<EForm> {
    omega.require_genuine()?;
    let k = omega.degree();
    if k == 0 {
        return Err(Error::InvalidArgument("functions have no primitive".into()));
    }
    if !omega.ederiv().is_zero() {
        return Err(Error::NotClosed);
    }
    let cx = GradedComplex::new(omega.frame(), ComplexKind::EForms)?;
    let mut mu = EForm::zero(omega.frame(), k - 1);
    for (d, terms) in cx.split_by_degree(&Cochain::Form(omega.clone()))? {
        let cells = cx.basis(k, d);
        let mut v = vec![BigRational::zero(); cells.len()];
        for (cell, q) in terms {
            let i = cells.iter().position(|c| *c == cell).expect("cell lies in its own block");
            v[i] = q;
        }
        let x = cx.block(k - 1, d - cx.shift)?.solve(&v).ok_or(Error::NotExact)?;
        if let Cochain::Form(p) = cx.cochain(k - 1, &cx.basis(k - 1, d - cx.shift), &x)? {
            mu = mu.add(&p)?;
        }
    }
    Ok(mu)
}
