//! Named frames, forms and problems shipped with the tool.

use std::sync::Arc;

use ecalc_core::ctower::{Assignment, CModel};
use ecalc_core::eforms::EForm;
use ecalc_core::eframe::{EFrame, FrameKind};
use ecalc_core::{int, parse_poly, Result, SingFunc};

use crate::io::FrameDoc;

pub const FRAME_NAMES: &[&str] = &["elliptic", "b", "b1", "bk2", "c2", "c3", "full2", "full3", "foliation3"];

pub const FORM_NAMES: &[&str] = &["xyz3", "liouville", "liouville-odd", "b-area", "elliptic-area", "dlog-x"];

pub const MOSER_NAMES: &[&str] = &["b-worked", "b-wrong-mu", "b-cubic"];

pub const ASSIGNMENT_NAMES: &[&str] = &["figure-eight", "figure-eight-bad"];

/// (name, category, description), in listing order.
pub fn catalogue() -> Vec<(&'static str, &'static str, &'static str)> {
    vec![
        ("elliptic", "frame", "x∂x+y∂y, −y∂x+x∂y on ℝ², singular at the origin"),
        ("b", "frame", "x∂x, ∂y on ℝ² (Z = {x = 0})"),
        ("b1", "frame", "x∂x on ℝ (Z = {0})"),
        ("bk2", "frame", "x²∂x, ∂y on ℝ²"),
        ("c2", "frame", "x∂x, y∂y on ℝ²"),
        ("c3", "frame", "x∂x, y∂y, z∂z on ℝ³"),
        ("full2", "frame", "∂x, ∂y on ℝ²"),
        ("full3", "frame", "∂x, ∂y, ∂z on ℝ³"),
        ("foliation3", "frame", "∂x, ∂y on ℝ³"),
        ("heisenberg", "generators", "∂x, ∂y + x∂z: not involutive"),
        ("xyz3", "form", "dx/x∧dy/y∧dz/z on the c-model (ℝ³, {x,y,z})"),
        ("liouville", "form", "xy(1+x²y²)·dx/x∧dy/y, volume 40/9 on [−1,1]²"),
        ("liouville-odd", "form", "x·dx/x∧dy/y, volume 0"),
        ("b-area", "form", "dx/x∧dy"),
        ("elliptic-area", "form", "θ¹∧θ² of the elliptic frame"),
        ("dlog-x", "form", "dx/x on the b-line"),
        ("example45", "family", "k·dx/x∧dy/y for k ∈ {1, 2, 7/2}"),
        ("b-worked", "moser", "ω0 = dx/x∧dy, ω1 = 2ω0, μ = −y·dx/x"),
        ("b-wrong-mu", "moser", "as b-worked with μ doubled (not a primitive)"),
        ("b-cubic", "moser", "ω0 = dx/x∧dy, ω1 = (1+y²)ω0, μ = −y³/3·dx/x: a nonlinear flow"),
        ("figure-eight", "assignment", "f = 1 + x, g = −1 + y² at the double point: compatible"),
        ("figure-eight-bad", "assignment", "f = 1 + x, g = 1: incompatible"),
        ("s4", "atlas", "ten charts of S⁴ with v_1…v_5 and Π"),
    ]
}

pub fn frame(name: &str) -> Option<Result<EFrame>> {
    let (kind, dim) = match name {
        "elliptic" => (FrameKind::Elliptic, 2),
        "b" => (FrameKind::B { axis: 0 }, 2),
        "b1" => (FrameKind::B { axis: 0 }, 1),
        "bk2" => (FrameKind::Bk { axis: 0, k: 2 }, 2),
        "c2" => (FrameKind::C(vec![0, 1]), 2),
        "c3" => (FrameKind::C(vec![0, 1, 2]), 3),
        "full2" => (FrameKind::Full, 2),
        "full3" => (FrameKind::Full, 3),
        "foliation3" => (FrameKind::Foliation(vec![0, 1]), 3),
        _ => return None,
    };
    Some(EFrame::build_standard(kind, dim))
}

/// Generator lists that are not frames; only `involutive` accepts them.
pub fn generator_doc(name: &str) -> Option<FrameDoc> {
    match name {
        "heisenberg" => Some(FrameDoc {
            dim: 3,
            vars: None,
            rank: None,
            kind: "custom".into(),
            axis: None,
            order: None,
            hyperplanes: None,
            leaves: None,
            generators: vec![vec!["1".into(), "0".into(), "0".into()], vec!["0".into(), "1".into(), "x".into()]],
            singular_factors: vec![],
            z_locus: vec![],
        }),
        _ => None,
    }
}

fn named(name: &str) -> Arc<EFrame> {
    Arc::new(frame(name).expect("gallery frame").expect("gallery frames build"))
}

fn form_on(frame: &Arc<EFrame>, degree: usize, terms: &[(&[usize], &str)]) -> Result<EForm> {
    let mut out = Vec::new();
    for (idx, c) in terms {
        out.push((idx.to_vec(), SingFunc::from_poly(parse_poly(c, frame.vars())?)));
    }
    EForm::from_terms(frame, degree, out)
}

pub fn form(name: &str) -> Option<Result<EForm>> {
    Some(match name {
        "xyz3" => form_on(&named("c3"), 3, &[(&[0, 1, 2], "1")]),
        "liouville" => form_on(&named("c2"), 2, &[(&[0, 1], "x*y + x^3*y^3")]),
        "liouville-odd" => form_on(&named("c2"), 2, &[(&[0, 1], "x")]),
        "b-area" => form_on(&named("b"), 2, &[(&[0, 1], "1")]),
        "elliptic-area" => form_on(&named("elliptic"), 2, &[(&[0, 1], "1")]),
        "dlog-x" => form_on(&named("b1"), 1, &[(&[0], "1")]),
        _ => return None,
    })
}

/// k·dx/x∧dy/y on the c-model (ℝ², {x, y}).
pub fn example45(k: &num_rational::BigRational) -> Result<(CModel, EForm)> {
    let m = CModel::new(2, &[0, 1])?;
    let w = EForm::from_terms(m.frame(), 2, vec![(vec![0, 1], SingFunc::constant(m.vars(), k.clone()))])?;
    Ok((m, w))
}

pub fn example45_parameters() -> Vec<num_rational::BigRational> {
    vec![int(1), int(2), num_rational::BigRational::new(7.into(), 2.into())]
}

pub struct MoserProblem {
    pub w0: EForm,
    pub w1: EForm,
    pub mu: EForm,
}

pub fn moser(name: &str) -> Option<Result<MoserProblem>> {
    let (w1, mu) = match name {
        "b-worked" => ("2", "-y"),
        "b-wrong-mu" => ("2", "-2*y"),
        "b-cubic" => ("1 + y^2", "-1/3*y^3"),
        _ => return None,
    };
    let b = named("b");
    Some((|| {
        Ok(MoserProblem {
            w0: form_on(&b, 2, &[(&[0, 1], "1")])?,
            w1: form_on(&b, 2, &[(&[0, 1], w1)])?,
            mu: form_on(&b, 1, &[(&[0], mu)])?,
        })
    })())
}

/// Level-1 data at the double point of (ℝ², {x, y}).
pub fn assignment(name: &str) -> Option<Result<(CModel, usize, Assignment)>> {
    let g = match name {
        "figure-eight" => "-1 + y^2",
        "figure-eight-bad" => "1",
        _ => return None,
    };
    Some((|| {
        let m = CModel::new(2, &[0, 1])?;
        let mut a = Assignment::new();
        // on {x = 0} the coordinate is y; on {y = 0} it is x
        a.insert(vec![0], form_on(&m.stratum_frame(&[0])?, 1, &[(&[0], g)])?);
        a.insert(vec![1], form_on(&m.stratum_frame(&[1])?, 1, &[(&[0], "1 + x")])?);
        Ok((m, 1, a))
    })())
}
