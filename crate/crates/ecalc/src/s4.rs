//! The c-symplectic S⁴: ten projective charts, the commuting fields
//! v_1…v_5 and Π = (v₁+v₂)∧(v₂+v₃) + (v₃+v₄)∧(v₄+v₅).

use std::sync::Arc;

use ecalc_core::eforms::bivector_to_form;
use ecalc_core::eframe::{EFrame, FrameKind};
use ecalc_core::multivec::{is_poisson, Basis, MultiVec};
use ecalc_core::numerics::dense::det;
use ecalc_core::numerics::AmbientForm;
use ecalc_core::{int, parse_poly, Result, SingFunc, Vars};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Chart U_i^± with coordinates x_j (j ≠ i) on the plane y_i = ±1.
#[derive(Clone, Debug)]
pub struct Chart {
    /// 0-based index of the omitted coordinate.
    pub index: usize,
    pub sign: f64,
    pub frame: Arc<EFrame>,
    /// v_1…v_5 in the frame basis x_j∂_j.
    pub fields: Vec<MultiVec>,
    pub pi: MultiVec,
}

#[derive(Clone, Debug)]
pub struct Atlas {
    pub name: String,
    pub charts: Vec<Chart>,
}

impl Chart {
    pub fn name(&self) -> String {
        format!("U{}{}", self.index + 1, if self.sign > 0.0 { "+" } else { "-" })
    }

    fn local(&self, j: usize) -> Option<usize> {
        match j.cmp(&self.index) {
            std::cmp::Ordering::Less => Some(j),
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Greater => Some(j - 1),
        }
    }

    /// Point of the plane y_i = ±1 in ℝ⁵.
    fn lift(&self, x: &[f64]) -> [f64; 5] {
        let mut y = [0.0; 5];
        for j in 0..5 {
            y[j] = self.local(j).map_or(self.sign, |l| x[l]);
        }
        y
    }

    fn project(&self, y: &[f64; 5]) -> Option<Vec<f64>> {
        let yi = y[self.index];
        if yi * self.sign <= 0.0 {
            return None;
        }
        Some((0..5).filter(|&j| j != self.index).map(|j| self.sign * y[j] / yi).collect())
    }

    /// Coordinate change into `other`, where defined.
    pub fn transition(&self, other: &Chart, x: &[f64]) -> Option<Vec<f64>> {
        other.project(&self.lift(x))
    }

    /// Ambient components of v_j at x.
    fn field_at(&self, j: usize, x: &[f64]) -> Vec<f64> {
        match self.local(j) {
            Some(l) => (0..4).map(|m| if m == l { x[m] } else { 0.0 }).collect(),
            None => x.iter().map(|v| -v).collect(),
        }
    }

    /// Pushforward of v_j(x) by the transition into `other`.
    fn push_field(&self, other: &Chart, j: usize, x: &[f64]) -> Vec<f64> {
        let y = self.lift(x);
        let v = self.field_at(j, x);
        let mut dy = [0.0; 5];
        for l in 0..5 {
            if let Some(m) = self.local(l) {
                dy[l] = v[m];
            }
        }
        let (k, t) = (other.index, other.sign);
        (0..5).filter(|&m| m != k).map(|m| t * (dy[m] / y[k] - y[m] * dy[k] / (y[k] * y[k]))).collect()
    }
}

fn vector(frame: &Arc<EFrame>, coeffs: &[i64]) -> Result<MultiVec> {
    let v = frame.vars();
    let terms = coeffs.iter().enumerate().filter(|(_, c)| **c != 0).map(|(m, c)| (vec![m], SingFunc::constant(v, int(*c)))).collect();
    MultiVec::from_terms(Basis::Frame(frame.clone()), v, 1, terms)
}

fn chart(index: usize, sign: f64) -> Result<Chart> {
    let names: Vec<String> = (1..=5).filter(|&j| j != index + 1).map(|j| format!("x{j}")).collect();
    let frame = Arc::new(EFrame::build_standard_with(FrameKind::C(vec![0, 1, 2, 3]), Vars::new(&names))?);
    let mut fields = Vec::new();
    for j in 0..5 {
        let c: Vec<i64> = match j.cmp(&index) {
            std::cmp::Ordering::Equal => vec![-1; 4],
            std::cmp::Ordering::Less => (0..4).map(|m| i64::from(m == j)).collect(),
            std::cmp::Ordering::Greater => (0..4).map(|m| i64::from(m + 1 == j)).collect(),
        };
        fields.push(vector(&frame, &c)?);
    }
    let sum = |a: usize, b: usize| fields[a].add(&fields[b]);
    let pi = sum(0, 1)?.wedge(&sum(1, 2)?)?.add(&sum(2, 3)?.wedge(&sum(3, 4)?)?)?;
    Ok(Chart { index, sign, frame, fields, pi })
}

pub fn gallery_s4() -> Result<Atlas> {
    let mut charts = Vec::new();
    for i in 0..5 {
        for s in [1.0, -1.0] {
            charts.push(chart(i, s)?);
        }
    }
    Ok(Atlas { name: "s4".into(), charts })
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct ChartReport {
    pub chart: String,
    pub commuting: bool,
    pub sum_zero: bool,
    pub poisson: bool,
    pub wedge_identity: bool,
    pub grid_points: usize,
    pub min_abs_det: f64,
    pub nondegenerate: bool,
    /// Term-level differences from the displayed U₁± expansion.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expansion_diffs: Option<Vec<String>>,
    pub bivector: String,
}

impl ChartReport {
    pub fn passed(&self) -> bool {
        self.commuting && self.sum_zero && self.poisson && self.wedge_identity && self.nondegenerate
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct S4Report {
    pub charts: Vec<ChartReport>,
    pub transition_checks: usize,
    pub transition_max_err: f64,
    pub field_checks: usize,
    pub field_max_err: f64,
}

pub const TRANSITION_TOL: f64 = 1e-10;
pub const FIELD_TOL: f64 = 1e-10;
pub const DET_TOL: f64 = 1e-9;

impl S4Report {
    pub fn passed(&self) -> bool {
        self.charts.iter().all(ChartReport::passed)
            && self.transition_checks > 0
            && self.transition_max_err < TRANSITION_TOL
            && self.field_max_err < FIELD_TOL
    }
}

const DISPLAYED_U1: [(usize, usize, &str); 6] =
    [(0, 1, "x2*x3"), (0, 2, "x2*x4"), (1, 2, "2*x3*x4"), (0, 3, "x2*x5"), (1, 3, "2*x3*x5"), (2, 3, "x4*x5")];

fn expansion_diffs(c: &Chart, amb: &MultiVec) -> Result<Vec<String>> {
    let vars = c.frame.vars();
    let mut expected = MultiVec::zero(Basis::Ambient, vars, 2);
    for (a, b, p) in DISPLAYED_U1 {
        let t = MultiVec::from_terms(Basis::Ambient, vars, 2, vec![(vec![a, b], SingFunc::from_poly(parse_poly(p, vars)?))])?;
        expected = expected.add(&t)?;
    }
    let diff = amb.sub(&expected)?;
    Ok(diff
        .terms()
        .map(|(b, _)| {
            let n: Vec<&str> = b.indices().map(|i| vars.names()[i].as_str()).collect();
            format!("∂{}∧∂{}: computed {}, displayed {}", n[0], n[1], amb.coeff(*b), expected.coeff(*b))
        })
        .collect())
}

fn hatted_sum(amb: &[MultiVec]) -> Result<MultiVec> {
    let mut total = MultiVec::zero(Basis::Ambient, amb[0].vars(), 4);
    for skip in 0..5 {
        let mut p = MultiVec::function(amb[0].vars(), SingFunc::one(amb[0].vars()));
        for (j, v) in amb.iter().enumerate() {
            if j != skip {
                p = p.wedge(v)?;
            }
        }
        total = total.add(&p)?;
    }
    Ok(total)
}

/// 9⁴ points −0.85 + 0.2k: never on a coordinate hyperplane.
pub fn nondegeneracy_grid() -> Vec<Vec<f64>> {
    let vals: Vec<f64> = (0..9).map(|k| -0.85 + 0.2 * k as f64).collect();
    let mut out = Vec::with_capacity(9usize.pow(4));
    for a in &vals {
        for b in &vals {
            for c in &vals {
                for d in &vals {
                    out.push(vec![*a, *b, *c, *d]);
                }
            }
        }
    }
    out
}

fn verify_chart(c: &Chart) -> Result<ChartReport> {
    let amb: Vec<MultiVec> = c.fields.iter().map(MultiVec::to_ambient).collect();
    let mut commuting = true;
    for a in 0..5 {
        for b in a + 1..5 {
            let va = c.frame.anchor(&coeff_vector(&c.fields[a], &c.frame));
            let vb = c.frame.anchor(&coeff_vector(&c.fields[b], &c.frame));
            commuting &= va.bracket(&vb).is_zero();
        }
    }
    let mut sum = MultiVec::zero(Basis::Ambient, c.frame.vars(), 1);
    for v in &amb {
        sum = sum.add(v)?;
    }
    let pi_amb = c.pi.to_ambient();
    let poisson = is_poisson(&pi_amb)?.poisson;
    let lhs = pi_amb.wedge(&pi_amb)?;
    let rhs = hatted_sum(&amb)?;
    let wedge_identity = lhs.sub(&rhs.add(&rhs)?)?.is_zero();

    let omega = AmbientForm::from_eform(&bivector_to_form(&c.pi)?)?;
    let grid = nondegeneracy_grid();
    let mut min_abs_det = f64::INFINITY;
    for p in &grid {
        let w = omega.eval(p)?;
        let mut m = vec![vec![0.0; 4]; 4];
        for (b, v) in w {
            let ix = b.to_vec();
            m[ix[0]][ix[1]] = v;
            m[ix[1]][ix[0]] = -v;
        }
        min_abs_det = min_abs_det.min(det(&m).abs());
    }
    let expansion_diffs = if c.index == 0 { Some(expansion_diffs(c, &pi_amb)?) } else { None };
    Ok(ChartReport {
        chart: c.name(),
        commuting,
        sum_zero: sum.is_zero(),
        poisson,
        wedge_identity,
        grid_points: grid.len(),
        min_abs_det,
        nondegenerate: min_abs_det > DET_TOL,
        expansion_diffs,
        bivector: format!("{pi_amb}"),
    })
}

fn coeff_vector(v: &MultiVec, frame: &EFrame) -> Vec<SingFunc> {
    (0..frame.rank()).map(|m| v.coeff_of(&[m])).collect()
}

/// Sample points of a chart with every coordinate nonzero.
fn samples() -> Vec<Vec<f64>> {
    let vals = [-1.7, -0.6, -0.25, 0.3, 0.8, 2.1];
    (0..12).map(|n| (0..4).map(|m| vals[(n + 2 * m + n * m) % 6]).collect()).collect()
}

fn rel_err(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs() / (1.0 + y.abs())).fold(0.0, f64::max)
}

pub fn s4_verify(atlas: &Atlas) -> Result<S4Report> {
    let charts = atlas.charts.par_iter().map(verify_chart).collect::<Result<Vec<_>>>()?;
    let (mut transition_checks, mut transition_max_err) = (0, 0.0f64);
    let (mut field_checks, mut field_max_err) = (0, 0.0f64);
    let pts = samples();
    for a in &atlas.charts {
        for b in &atlas.charts {
            for x in &pts {
                let Some(xb) = a.transition(b, x) else { continue };
                for j in 0..5 {
                    field_max_err = field_max_err.max(rel_err(&a.push_field(b, j, x), &b.field_at(j, &xb)));
                    field_checks += 1;
                }
                for c in &atlas.charts {
                    let (Some(xc), Some(direct)) = (b.transition(c, &xb), a.transition(c, x)) else { continue };
                    transition_max_err = transition_max_err.max(rel_err(&xc, &direct));
                    transition_checks += 1;
                }
            }
        }
    }
    Ok(S4Report { charts, transition_checks, transition_max_err, field_checks, field_max_err })
}
