//! Qω = ∫₀¹ φ_t*(ι_{v_t} ω) dt evaluated numerically at a point, plus the
//! pointwise form algebra it needs.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use super::dense::minor;
use super::fastpoly::FastSing;
use super::flow::{integrate_flow, FlowOptions, TimeDependentField};
use crate::blade::Blade;
use crate::eforms::{DxForm, EForm};
use crate::error::{Error, Result};

/// Coefficients of an ambient form at one point, keyed by dx-blade.
pub type NumForm = BTreeMap<Blade, f64>;

/// An ambient form compiled for repeated evaluation.
#[derive(Clone, Debug)]
pub struct AmbientForm {
    degree: usize,
    terms: Vec<(Blade, FastSing)>,
}

impl AmbientForm {
    pub fn new(w: &DxForm) -> Self {
        AmbientForm { degree: w.degree(), terms: w.terms().map(|(b, c)| (*b, FastSing::new(c))).collect() }
    }

    pub fn from_eform(w: &EForm) -> Result<Self> {
        Ok(Self::new(&w.to_dx()?))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn eval(&self, x: &[f64]) -> Result<NumForm> {
        self.terms.iter().map(|(b, f)| Ok((*b, f.eval(x)?))).collect()
    }
}

/// ι_v of a pointwise form.
pub fn contract(v: &[f64], w: &NumForm) -> NumForm {
    let mut out = NumForm::new();
    for (b, c) in w {
        for (pos, i) in b.indices().enumerate() {
            let s = if pos % 2 == 0 { 1.0 } else { -1.0 };
            *out.entry(b.without(i)).or_insert(0.0) += s * v[i] * c;
        }
    }
    out
}

/// Pullback by a linear map with matrix `j` (rows: target, columns: source).
pub fn pullback(w: &NumForm, degree: usize, j: &[Vec<f64>]) -> NumForm {
    let n = j.first().map_or(0, |r| r.len());
    let mut out = NumForm::new();
    for src in Blade::all_of_size(n, degree) {
        let cols = src.to_vec();
        let s: f64 = w.iter().map(|(b, c)| c * minor(j, &b.to_vec(), &cols)).sum();
        if s != 0.0 {
            out.insert(src, s);
        }
    }
    out
}

/// Central-difference exterior derivative of a form-valued function.
pub fn numeric_d<F: Fn(&[f64]) -> Result<NumForm>>(f: F, p: &[f64], h: f64) -> Result<NumForm> {
    let mut out = NumForm::new();
    for i in 0..p.len() {
        let mut a = p.to_vec();
        let mut b = p.to_vec();
        a[i] += h;
        b[i] -= h;
        let (fa, fb) = (f(&a)?, f(&b)?);
        let keys: BTreeSet<Blade> = fa.keys().chain(fb.keys()).copied().collect();
        for k in keys {
            if k.contains(i) {
                continue;
            }
            let d = (fa.get(&k).copied().unwrap_or(0.0) - fb.get(&k).copied().unwrap_or(0.0)) / (2.0 * h);
            // dx_i ∧ dx_K carries the sign of moving i into place
            let s = if k.indices().filter(|&m| m < i).count() % 2 == 0 { 1.0 } else { -1.0 };
            *out.entry(k.with(i)).or_insert(0.0) += s * d;
        }
    }
    Ok(out)
}

/// Qω at `p` by Simpson's rule on the RK4 grid (`steps` must be even).
pub fn homotopy_q<F: TimeDependentField + ?Sized>(omega: &AmbientForm, field: &F, p: &[f64], steps: usize) -> Result<NumForm> {
    if steps == 0 || steps % 2 == 1 {
        return Err(Error::InvalidArgument("Simpson's rule needs an even step count".into()));
    }
    if omega.degree() == 0 {
        return Ok(NumForm::new());
    }
    let flow = integrate_flow(field, p, &FlowOptions { steps, ..Default::default() })?;
    let h = 1.0 / steps as f64;
    let mut out = NumForm::new();
    for (k, ((t, q), j)) in flow.times.iter().zip(&flow.points).zip(&flow.jacobians).enumerate() {
        let wk = if k == 0 || k == steps { 1.0 } else if k % 2 == 1 { 4.0 } else { 2.0 };
        let v = field.eval(*t, q)?;
        let inner = contract(&v, &omega.eval(q)?);
        for (b, c) in pullback(&inner, omega.degree() - 1, j) {
            *out.entry(b).or_insert(0.0) += wk * h / 3.0 * c;
        }
    }
    Ok(out)
}
