//! Seeded runner and generators shared by the property suites (also pulled
//! into the acceptance target).
#![allow(dead_code)]

use std::sync::Arc;

use ecalc_core::eforms::EForm;
use ecalc_core::eframe::{EFrame, FrameKind};
use ecalc_core::{Poly, SingFunc, Vars};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed, TestCaseError, TestRunner};

pub mod props;

pub const CASES: u32 = 256;

pub fn config(seed: u64, cases: u32) -> Config {
    Config { cases, rng_seed: RngSeed::Fixed(seed), failure_persistence: None, ..Config::default() }
}

/// Runs `test` on `CASES` values of `strat` from a fixed seed; the error is
/// the shrunk counterexample.
pub fn run<S>(seed: u64, strat: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String>
where
    S: Strategy,
    S::Value: std::fmt::Debug,
{
    run_n(seed, CASES, strat, test)
}

pub fn run_n<S>(seed: u64, cases: u32, strat: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String>
where
    S: Strategy,
    S::Value: std::fmt::Debug,
{
    let mut runner = TestRunner::new(config(seed, cases));
    runner.run(&strat, test).map_err(|e| e.to_string())
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rational() -> impl Strategy<Value = BigRational> {
    (-6i64..=6, 1i64..=3).prop_map(|(n, d)| q(n, d))
}

pub fn nonzero_rational() -> impl Strategy<Value = BigRational> {
    (prop_oneof![-6i64..=-1, 1i64..=6], 1i64..=3).prop_map(|(n, d)| q(n, d))
}

/// Polynomials with at most `terms` terms and every exponent ≤ `max_exp`.
pub fn poly(vars: Vars, max_exp: u32, terms: usize) -> impl Strategy<Value = Poly> {
    let n = vars.len();
    proptest::collection::vec((proptest::collection::vec(0..=max_exp, n), rational()), 0..=terms)
        .prop_map(move |ts| Poly::from_terms(&vars, ts))
}

pub fn sing(vars: Vars, max_exp: u32, terms: usize) -> impl Strategy<Value = SingFunc> {
    poly(vars, max_exp, terms).prop_map(SingFunc::from_poly)
}

/// Every catalogue frame, plus a non-commuting involutive one.
pub fn shipped_frames() -> Vec<Arc<EFrame>> {
    let mut out: Vec<Arc<EFrame>> = [
        (FrameKind::Elliptic, 2),
        (FrameKind::B { axis: 0 }, 1),
        (FrameKind::B { axis: 0 }, 2),
        (FrameKind::Bk { axis: 0, k: 2 }, 2),
        (FrameKind::C(vec![0, 1]), 2),
        (FrameKind::C(vec![0, 1, 2]), 3),
        (FrameKind::Full, 2),
        (FrameKind::Full, 3),
        (FrameKind::Foliation(vec![0, 1]), 3),
    ]
    .into_iter()
    .map(|(k, n)| Arc::new(EFrame::build_standard(k, n).unwrap()))
    .collect();
    out.push(scaling_frame());
    out
}

/// ∂x, ∂y, x∂x + y∂y + z∂z on ℝ³: [e1, e3] = e1, [e2, e3] = e2.
pub fn scaling_frame() -> Arc<EFrame> {
    let v = Vars::standard(3);
    let (o, z) = (Poly::one(&v), Poly::zero(&v));
    let x = |i| Poly::var(&v, i);
    let gens = vec![vec![o.clone(), z.clone(), z.clone()], vec![z.clone(), o, z], vec![x(0), x(1), x(2)]];
    Arc::new(EFrame::custom(v.clone(), gens, vec![x(2)], vec![x(2)], None).unwrap())
}

pub fn c_frame(n: usize) -> Arc<EFrame> {
    Arc::new(EFrame::build_standard(FrameKind::C((0..n).collect()), n).unwrap())
}

/// A random degree-`p` form with polynomial coefficients on `frame`.
pub fn form(frame: Arc<EFrame>, p: usize) -> impl Strategy<Value = EForm> {
    let blades = ecalc_core::blade::Blade::all_of_size(frame.rank(), p);
    let vars = frame.vars().clone();
    proptest::collection::vec(sing(vars, 2, 3), blades.len()).prop_map(move |cs| {
        let terms = blades.iter().zip(cs).map(|(b, c)| (b.to_vec(), c)).collect();
        EForm::from_terms(&frame, p, terms).unwrap()
    })
}

/// A random section in frame coefficients.
pub fn section(frame: &Arc<EFrame>) -> impl Strategy<Value = Vec<SingFunc>> {
    proptest::collection::vec(sing(frame.vars().clone(), 2, 2), frame.rank())
}

/// (frame index, form of degree ≤ rank) over all shipped frames.
pub fn any_form() -> impl Strategy<Value = EForm> {
    let frames = shipped_frames();
    (0..frames.len())
        .prop_flat_map(move |i| {
            let f = frames[i].clone();
            (0..=f.rank()).prop_flat_map(move |p| form(f.clone(), p))
        })
}

/// X(f) for a section X given in frame coefficients.
pub fn apply_section(frame: &EFrame, x: &[SingFunc], f: &SingFunc) -> SingFunc {
    let mut acc = SingFunc::zero(frame.vars());
    for (a, xa) in x.iter().enumerate() {
        if !xa.is_zero() {
            acc = &acc + &(xa * &frame.apply_generator_sing(a, f));
        }
    }
    acc
}

/// [X, Y] in frame coefficients from the structure constants.
pub fn section_bracket(frame: &EFrame, x: &[SingFunc], y: &[SingFunc]) -> Vec<SingFunc> {
    let r = frame.rank();
    let mut out: Vec<SingFunc> = (0..r).map(|k| &apply_section(frame, x, &y[k]) - &apply_section(frame, y, &x[k])).collect();
    for a in 0..r {
        for b in 0..r {
            let xy = &x[a] * &y[b];
            if xy.is_zero() {
                continue;
            }
            for (k, slot) in out.iter_mut().enumerate() {
                let c = frame.structure().get(a, b, k);
                if !c.is_zero() {
                    *slot = &*slot + &(&xy * &SingFunc::from_poly(c.clone()));
                }
            }
        }
    }
    out
}

pub fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(msg.into()))
    }
}
