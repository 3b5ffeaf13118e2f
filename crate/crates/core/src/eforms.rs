//! E-forms in the coframe basis θ^1..θ^r of a frame.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use crate::blade::{permutation_sign, Blade};
use crate::eframe::EFrame;
use crate::error::{Error, Result};
use crate::multivec::{Basis, MultiVec};
use crate::poly::{Poly, Vars};
use crate::ring;
use crate::singfunc::SingFunc;

#[derive(Clone)]
pub struct EForm {
    frame: Arc<EFrame>,
    degree: usize,
    coeffs: BTreeMap<Blade, SingFunc>,
    overflow: bool,
}

pub(crate) fn same_frame(a: &Arc<EFrame>, b: &Arc<EFrame>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl PartialEq for EForm {
    fn eq(&self, other: &Self) -> bool {
        same_frame(&self.frame, &other.frame) && self.degree == other.degree && self.coeffs == other.coeffs
    }
}

impl EForm {
    pub fn zero(frame: &Arc<EFrame>, degree: usize) -> Self {
        EForm { frame: frame.clone(), degree, coeffs: BTreeMap::new(), overflow: false }
    }

    pub fn function(frame: &Arc<EFrame>, f: SingFunc) -> Self {
        let mut w = Self::zero(frame, 0);
        w.insert(Blade::EMPTY, f);
        w
    }

    pub fn poly_function(frame: &Arc<EFrame>, f: Poly) -> Self {
        Self::function(frame, SingFunc::from_poly(f))
    }

    /// Basis 1-form θ^k (0-based).
    pub fn theta(frame: &Arc<EFrame>, k: usize) -> Self {
        let mut w = Self::zero(frame, 1);
        w.insert(Blade::single(k), SingFunc::one(frame.vars()));
        w
    }

    /// Form from `(indices, coefficient)` pairs; indices are 0-based, in any
    /// order (reordering contributes its sign, repeats give zero).
    pub fn from_terms(frame: &Arc<EFrame>, degree: usize, terms: Vec<(Vec<usize>, SingFunc)>) -> Result<Self> {
        let mut w = Self::zero(frame, degree);
        for (idx, c) in terms {
            if idx.len() != degree {
                return Err(Error::DegreeMismatch { expected: degree, found: idx.len() });
            }
            if idx.iter().any(|&i| i >= frame.rank()) {
                return Err(Error::InvalidArgument(alloc::format!("index out of range in {idx:?}")));
            }
            if c.vars() != frame.vars() {
                return Err(Error::VariableMismatch);
            }
            let Some(b) = Blade::from_indices(&idx) else { continue };
            let c = if permutation_sign(&idx) < 0 { -&c } else { c };
            w.insert(b, c);
        }
        Ok(w)
    }

    fn insert(&mut self, b: Blade, c: SingFunc) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.remove(&b) {
            None => {
                self.coeffs.insert(b, c);
            }
            Some(old) => {
                let s = &old + &c;
                if !s.is_zero() {
                    self.coeffs.insert(b, s);
                }
            }
        }
    }

    pub fn frame(&self) -> &Arc<EFrame> {
        &self.frame
    }

    pub fn vars(&self) -> &Vars {
        self.frame.vars()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Blade, &SingFunc)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, b: Blade) -> SingFunc {
        self.coeffs.get(&b).cloned().unwrap_or_else(|| SingFunc::zero(self.vars()))
    }

    /// Coefficient of `θ^{i_1} ∧ … ∧ θ^{i_p}` for indices in any order.
    pub fn coeff_of(&self, idx: &[usize]) -> SingFunc {
        match Blade::from_indices(idx) {
            Some(b) if idx.len() == self.degree => {
                let c = self.coeff(b);
                if permutation_sign(idx) < 0 {
                    -&c
                } else {
                    c
                }
            }
            _ => SingFunc::zero(self.vars()),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Set when produced by a wedge whose degree exceeded the rank.
    pub fn overflowed(&self) -> bool {
        self.overflow
    }

    /// All coefficients polynomial (a section of Λ^p(E*)).
    pub fn is_genuine(&self) -> bool {
        self.coeffs.values().all(|c| c.as_poly().is_some())
    }

    pub fn require_genuine(&self) -> Result<()> {
        if self.is_genuine() {
            Ok(())
        } else {
            Err(Error::ExtendedForm)
        }
    }

    fn check_frame(&self, other: &EForm) -> Result<()> {
        if same_frame(&self.frame, &other.frame) {
            Ok(())
        } else {
            Err(Error::FrameMismatch)
        }
    }

    pub fn add(&self, other: &EForm) -> Result<EForm> {
        self.check_frame(other)?;
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, found: other.degree });
        }
        let mut out = self.clone();
        for (b, c) in &other.coeffs {
            out.insert(*b, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &EForm) -> Result<EForm> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> EForm {
        self.map_coeffs(|c| -c)
    }

    pub fn scale(&self, f: &SingFunc) -> EForm {
        self.map_coeffs(|c| c * f)
    }

    pub fn scale_rat(&self, q: &BigRational) -> EForm {
        self.map_coeffs(|c| c.scale(q))
    }

    fn map_coeffs(&self, f: impl Fn(&SingFunc) -> SingFunc) -> EForm {
        let mut out = EForm::zero(&self.frame, self.degree);
        out.overflow = self.overflow;
        for (b, c) in &self.coeffs {
            out.insert(*b, f(c));
        }
        out
    }

    pub fn wedge(&self, other: &EForm) -> Result<EForm> {
        self.check_frame(other)?;
        let degree = self.degree + other.degree;
        let mut out = EForm::zero(&self.frame, degree);
        if degree > self.frame.rank() {
            out.overflow = true;
            return Ok(out);
        }
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                if let Some(s) = Blade::wedge_sign(*a, *b) {
                    let c = ca * cb;
                    out.insert(a.with_all(*b), if s < 0 { -&c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// dθ^k = −Σ_{i<j} c^k_ij θ^i ∧ θ^j.
    pub fn d_theta(frame: &Arc<EFrame>, k: usize) -> EForm {
        let mut out = EForm::zero(frame, 2);
        for (i, j, kk, c) in frame.structure().nonzero() {
            if kk == k {
                out.insert(Blade::from_indices(&[i, j]).unwrap(), SingFunc::from_poly(-c));
            }
        }
        out
    }

    /// Exterior derivative from the frame formula
    /// d(f θ_I) = Σ_i V_i(f) θ^i ∧ θ_I + f dθ_I.
    pub fn ederiv(&self) -> EForm {
        let frame = &self.frame;
        let r = frame.rank();
        let mut out = EForm::zero(frame, self.degree + 1);
        if self.degree + 1 > r {
            return out;
        }
        let commuting = frame.is_commuting();
        for (blade, f) in &self.coeffs {
            for i in 0..r {
                if blade.contains(i) {
                    continue;
                }
                let vf = frame.apply_generator_sing(i, f);
                if vf.is_zero() {
                    continue;
                }
                let s = Blade::wedge_sign(Blade::single(i), *blade).unwrap();
                out.insert(blade.with(i), if s < 0 { -&vf } else { vf });
            }
            if commuting {
                continue;
            }
            // d(θ_{i1} ∧ … ∧ θ_{ip}) = Σ_s (−1)^s θ_{i1} ∧ … ∧ dθ_{is} ∧ …
            let idx = blade.to_vec();
            for (s, &k) in idx.iter().enumerate() {
                let dk = EForm::d_theta(frame, k);
                if dk.is_zero() {
                    continue;
                }
                let mut term = EForm::function(frame, f.clone());
                for (t, &m) in idx.iter().enumerate() {
                    let piece = if t == s { dk.clone() } else { EForm::theta(frame, m) };
                    term = term.wedge(&piece).unwrap();
                }
                if s % 2 == 1 {
                    term = term.neg();
                }
                for (b, c) in term.coeffs {
                    out.insert(b, c);
                }
            }
        }
        out
    }

    /// ι_X ω for `x` given in frame coefficients.
    pub fn interior(&self, x: &[SingFunc]) -> EForm {
        if self.degree == 0 {
            return EForm::zero(&self.frame, 0);
        }
        let mut out = EForm::zero(&self.frame, self.degree - 1);
        for (blade, f) in &self.coeffs {
            for i in blade.indices() {
                if x[i].is_zero() {
                    continue;
                }
                let c = f * &x[i];
                out.insert(blade.without(i), if blade.position(i) % 2 == 1 { -&c } else { c });
            }
        }
        out
    }

    /// ι by the basis section e_i.
    pub fn interior_basis(&self, i: usize) -> EForm {
        let mut x = vec![SingFunc::zero(self.vars()); self.frame.rank()];
        x[i] = SingFunc::one(self.vars());
        self.interior(&x)
    }

    /// L_X ω = d ι_X ω + ι_X dω.
    pub fn lie_derivative(&self, x: &[SingFunc]) -> EForm {
        let a = self.interior(x).ederiv();
        let b = self.ederiv().interior(x);
        if self.degree == 0 {
            return b;
        }
        a.add(&b).unwrap()
    }

    /// ω(X_1, …, X_p) for sections given in frame coefficients.
    pub fn eval_on(&self, xs: &[Vec<SingFunc>]) -> Result<SingFunc> {
        if xs.len() != self.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, found: xs.len() });
        }
        let mut acc = SingFunc::zero(self.vars());
        if self.degree == 0 {
            return Ok(self.coeff(Blade::EMPTY));
        }
        for (blade, f) in &self.coeffs {
            let idx = blade.to_vec();
            let m: Vec<Vec<SingFunc>> = idx.iter().map(|&i| xs.iter().map(|x| x[i].clone()).collect()).collect();
            let d = ring::det(&m).unwrap();
            acc = &acc + &(f * &d);
        }
        Ok(acc)
    }

    /// Antisymmetric matrix `W[i][j] = ω(e_i, e_j)` of a 2-form.
    pub fn matrix(&self) -> Result<Vec<Vec<SingFunc>>> {
        if self.degree != 2 {
            return Err(Error::DegreeMismatch { expected: 2, found: self.degree });
        }
        let r = self.frame.rank();
        let mut w = vec![vec![SingFunc::zero(self.vars()); r]; r];
        for (b, c) in &self.coeffs {
            let v = b.to_vec();
            w[v[0]][v[1]] = c.clone();
            w[v[1]][v[0]] = -c;
        }
        Ok(w)
    }

    pub fn eval_f64(&self, point: &[f64]) -> Result<BTreeMap<Blade, f64>> {
        self.coeffs.iter().map(|(b, c)| Ok((*b, c.eval_f64(point)?))).collect()
    }

    /// Ambient expression Σ_J c_J dx_J using θ_I = Σ_J det(A[I, J]) dx_J.
    pub fn to_dx(&self) -> Result<DxForm> {
        let cf = self.frame.coframe_in_dx()?;
        let n = self.frame.dim();
        let mut out = DxForm::zero(self.vars(), self.degree);
        for (blade, f) in &self.coeffs {
            let rows = blade.to_vec();
            for j in Blade::all_of_size(n, self.degree) {
                let cols = j.to_vec();
                let m: Vec<Vec<SingFunc>> =
                    rows.iter().map(|&k| cols.iter().map(|&i| cf.a[k][i].clone()).collect()).collect();
                let d = if m.is_empty() { SingFunc::one(self.vars()) } else { ring::det(&m).unwrap() };
                if !d.is_zero() {
                    out.insert(j, f * &d);
                }
            }
        }
        Ok(out)
    }

    /// Inverse of [`EForm::to_dx`] via dx_i = Σ_k G[k][i] θ^k.
    pub fn from_dx(frame: &Arc<EFrame>, w: &DxForm) -> Result<EForm> {
        let r = frame.rank();
        let n = frame.dim();
        if r != n {
            return Err(Error::RankDeficient { rank: r, dim: n });
        }
        let g = frame.generators();
        let mut out = EForm::zero(frame, w.degree);
        for (blade, f) in &w.coeffs {
            let cols = blade.to_vec();
            for k in Blade::all_of_size(r, w.degree) {
                let rows = k.to_vec();
                let m: Vec<Vec<SingFunc>> = rows
                    .iter()
                    .map(|&kk| cols.iter().map(|&i| SingFunc::from_poly(g[kk][i].clone())).collect())
                    .collect();
                let d = if m.is_empty() { SingFunc::one(frame.vars()) } else { ring::det(&m).unwrap() };
                if !d.is_zero() {
                    out.insert(k, f * &d);
                }
            }
        }
        Ok(out)
    }

    /// Determinant of [ω(e_i, e_j)].
    pub fn gram_det(&self) -> Result<SingFunc> {
        let w = self.matrix()?;
        Ok(ring::det(&w).unwrap_or_else(|| SingFunc::one(self.vars())))
    }

    pub fn nondeg_check(&self, opts: &NondegOptions) -> Result<Verdict> {
        let r = self.frame.rank();
        if self.degree != 2 {
            return Err(Error::DegreeMismatch { expected: 2, found: self.degree });
        }
        if r % 2 == 1 {
            return Ok(Verdict::Degenerate { witness: Vec::new(), structural: true });
        }
        let det = self.gram_det()?;
        if let Some(c) = det.as_constant() {
            if c.is_zero() {
                let witness = vec![0.0; self.frame.dim()];
                return Ok(Verdict::Degenerate { witness, structural: false });
            }
            return Ok(Verdict::SymbolicUnit { det: c });
        }
        let n = self.frame.dim();
        let k = opts.points_per_axis.max(2);
        let total = k.pow(n as u32);
        let mut min_abs = f64::INFINITY;
        let mut samples = 0;
        let mut point = vec![0.0; n];
        for idx in 0..total {
            let mut rest = idx;
            for slot in point.iter_mut() {
                let t = rest % k;
                rest /= k;
                *slot = -opts.half_width + 2.0 * opts.half_width * (t as f64) / ((k - 1) as f64);
            }
            let v = match det.eval_f64(&point) {
                Ok(v) => v,
                Err(Error::SingularPoint) => continue,
                Err(e) => return Err(e),
            };
            samples += 1;
            if v.abs() < opts.tol {
                return Ok(Verdict::Degenerate { witness: point, structural: false });
            }
            min_abs = min_abs.min(v.abs());
        }
        Ok(Verdict::NumericNonvanishing { samples, min_abs })
    }
}

/// Sampling grid for the numeric nondegeneracy fallback.
#[derive(Clone, Debug)]
pub struct NondegOptions {
    pub points_per_axis: usize,
    pub tol: f64,
    pub half_width: f64,
}

impl Default for NondegOptions {
    fn default() -> Self {
        NondegOptions { points_per_axis: 17, tol: 1e-9, half_width: 1.0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    SymbolicUnit { det: BigRational },
    NumericNonvanishing { samples: usize, min_abs: f64 },
    /// `structural` is set for odd rank, where no witness is needed.
    Degenerate { witness: Vec<f64>, structural: bool },
}

impl Verdict {
    pub fn is_nondegenerate(&self) -> bool {
        !matches!(self, Verdict::Degenerate { .. })
    }
}

/// Inverse of an antisymmetric matrix with constant nonzero determinant.
fn unit_inverse(w: &[Vec<SingFunc>], vars: &Vars) -> Result<Vec<Vec<SingFunc>>> {
    let r = w.len();
    let det = ring::det(w).unwrap_or_else(|| SingFunc::one(vars));
    let d = match det.as_constant() {
        Some(c) if c.is_zero() => return Err(Error::Degenerate("zero determinant".into())),
        Some(c) => c,
        None => return Err(Error::NonUnitDeterminant(alloc::format!("{det}"))),
    };
    let one = SingFunc::one(vars);
    let inv_d = d.recip();
    Ok((0..r).map(|i| (0..r).map(|j| ring::cofactor(w, j, i, &one).scale(&inv_d)).collect()).collect())
}

/// Π = −W⁻¹ read as a frame-basis bivector, so θ^1∧θ^2 ↦ e_1∧e_2.
pub fn invert_to_bivector(w: &EForm) -> Result<MultiVec> {
    let m = w.matrix()?;
    let inv = unit_inverse(&m, w.vars())?;
    let r = m.len();
    let mut terms = Vec::new();
    for i in 0..r {
        for j in i + 1..r {
            terms.push((vec![i, j], -&inv[i][j]));
        }
    }
    MultiVec::from_terms(Basis::Frame(w.frame.clone()), w.vars(), 2, terms)
}

/// Inverse direction: W = −Π⁻¹ for a frame-basis bivector.
pub fn bivector_to_form(p: &MultiVec) -> Result<EForm> {
    let Basis::Frame(frame) = p.basis() else {
        return Err(Error::BasisMismatch);
    };
    if p.degree() != 2 {
        return Err(Error::DegreeMismatch { expected: 2, found: p.degree() });
    }
    let r = frame.rank();
    let mut m = vec![vec![SingFunc::zero(p.vars()); r]; r];
    for (b, c) in p.terms() {
        let v = b.to_vec();
        m[v[0]][v[1]] = c.clone();
        m[v[1]][v[0]] = -c;
    }
    let inv = unit_inverse(&m, p.vars())?;
    let mut terms = Vec::new();
    for i in 0..r {
        for j in i + 1..r {
            terms.push((vec![i, j], -&inv[i][j]));
        }
    }
    EForm::from_terms(frame, 2, terms)
}

/// An ambient form Σ c_J dx_J with fractional coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct DxForm {
    vars: Vars,
    degree: usize,
    coeffs: BTreeMap<Blade, SingFunc>,
}

impl DxForm {
    pub fn zero(vars: &Vars, degree: usize) -> Self {
        DxForm { vars: vars.clone(), degree, coeffs: BTreeMap::new() }
    }

    pub fn from_terms(vars: &Vars, degree: usize, terms: Vec<(Vec<usize>, SingFunc)>) -> Self {
        let mut w = Self::zero(vars, degree);
        for (idx, c) in terms {
            if let Some(b) = Blade::from_indices(&idx) {
                w.insert(b, if permutation_sign(&idx) < 0 { -&c } else { c });
            }
        }
        w
    }

    fn insert(&mut self, b: Blade, c: SingFunc) {
        if c.is_zero() {
            return;
        }
        let s = match self.coeffs.remove(&b) {
            Some(old) => &old + &c,
            None => c,
        };
        if !s.is_zero() {
            self.coeffs.insert(b, s);
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Blade, &SingFunc)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, b: Blade) -> SingFunc {
        self.coeffs.get(&b).cloned().unwrap_or_else(|| SingFunc::zero(&self.vars))
    }

    pub fn eval_f64(&self, point: &[f64]) -> Result<BTreeMap<Blade, f64>> {
        self.coeffs.iter().map(|(b, c)| Ok((*b, c.eval_f64(point)?))).collect()
    }
}

impl fmt::Display for EForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (k, (b, c)) in self.coeffs.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})")?;
            for i in b.indices() {
                write!(f, "*th{}", i + 1)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for EForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EForm[{}]({self})", self.degree)
    }
}

/// Frame-formula-free oracle for 1-forms: dω(V_i, V_j) =
/// V_i(ω(V_j)) − V_j(ω(V_i)) − ω([V_i, V_j]).
pub fn intrinsic_d1(w: &EForm, i: usize, j: usize) -> SingFunc {
    let frame = w.frame();
    let wi = w.coeff(Blade::single(i));
    let wj = w.coeff(Blade::single(j));
    let mut out = &frame.apply_generator_sing(i, &wj) - &frame.apply_generator_sing(j, &wi);
    for k in 0..frame.rank() {
        let c = frame.structure().get(i, j, k);
        if !c.is_zero() {
            out = &out - &(&SingFunc::from_poly(c.clone()) * &w.coeff(Blade::single(k)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eframe::FrameKind;
    use crate::parse::parse_poly;
    use crate::poly::{int, rat};

    fn frame(kind: FrameKind, n: usize) -> Arc<EFrame> {
        Arc::new(EFrame::build_standard(kind, n).unwrap())
    }

    fn sf(s: &str, v: &Vars) -> SingFunc {
        SingFunc::from_poly(parse_poly(s, v).unwrap())
    }

    #[test]
    fn wedge_signs() {
        let f = frame(FrameKind::Full, 2);
        let v = f.vars().clone();
        let t1 = EForm::theta(&f, 0);
        let t2 = EForm::theta(&f, 1);
        assert!(t1.wedge(&t1).unwrap().is_zero());
        assert_eq!(t1.wedge(&t2).unwrap(), t2.wedge(&t1).unwrap().neg());
        let k = t1.scale(&sf("3", &v)).wedge(&t2).unwrap();
        assert_eq!(k.coeff_of(&[0, 1]), sf("3", &v));
        let over = t1.wedge(&t2).unwrap().wedge(&t1).unwrap();
        assert!(over.is_zero() && over.overflowed() && over.degree() == 3);
    }

    #[test]
    fn derivatives() {
        let e = frame(FrameKind::Elliptic, 2);
        let v = e.vars().clone();
        assert!(EForm::function(&e, sf("5", &v)).ederiv().is_zero());
        let d = EForm::function(&e, sf("x^2+y^2", &v)).ederiv();
        assert_eq!(d, EForm::theta(&e, 0).scale(&sf("2*x^2+2*y^2", &v)));

        let b = frame(FrameKind::B { axis: 0 }, 2);
        let w = EForm::theta(&b, 0).scale(&sf("y", &v));
        assert_eq!(w.ederiv().coeff_of(&[0, 1]), sf("-1", &v));
    }

    #[test]
    fn contractions() {
        let f = frame(FrameKind::Full, 2);
        let v = f.vars().clone();
        let w = EForm::theta(&f, 0).wedge(&EForm::theta(&f, 1)).unwrap();
        assert_eq!(w.interior_basis(0), EForm::theta(&f, 1));
        assert_eq!(w.interior_basis(1), EForm::theta(&f, 0).neg());
        assert!(EForm::function(&f, sf("x", &v)).interior_basis(0).is_zero());
        assert!(EForm::theta(&f, 0).lie_derivative(&[sf("1", &v), sf("0", &v)]).is_zero());
    }

    #[test]
    fn nondegeneracy() {
        let b = frame(FrameKind::B { axis: 0 }, 2);
        let v = b.vars().clone();
        let w = EForm::theta(&b, 0).wedge(&EForm::theta(&b, 1)).unwrap();
        assert_eq!(w.nondeg_check(&NondegOptions::default()).unwrap(), Verdict::SymbolicUnit { det: int(1) });
        let c = frame(FrameKind::C(vec![0, 1]), 2);
        let k = EForm::theta(&c, 0).wedge(&EForm::theta(&c, 1)).unwrap().scale_rat(&rat(7, 2));
        assert!(matches!(k.nondeg_check(&NondegOptions::default()).unwrap(), Verdict::SymbolicUnit { .. }));
        let xw = w.scale(&sf("x", &v));
        match xw.nondeg_check(&NondegOptions::default()).unwrap() {
            Verdict::Degenerate { witness, structural: false } => assert_eq!(witness[0], 0.0),
            other => panic!("{other:?}"),
        }
        let odd = frame(FrameKind::Full, 3);
        let w3 = EForm::theta(&odd, 0).wedge(&EForm::theta(&odd, 1)).unwrap();
        assert!(matches!(w3.nondeg_check(&NondegOptions::default()).unwrap(), Verdict::Degenerate { structural: true, .. }));
    }

    #[test]
    fn duality() {
        let e = frame(FrameKind::Elliptic, 2);
        let v = e.vars().clone();
        let w = EForm::theta(&e, 0).wedge(&EForm::theta(&e, 1)).unwrap();
        let p = invert_to_bivector(&w).unwrap();
        assert_eq!(p.coeff_of(&[0, 1]), sf("1", &v));
        assert_eq!(p.to_ambient().coeff_of(&[0, 1]), sf("x^2+y^2", &v));
        assert_eq!(bivector_to_form(&p).unwrap(), w);
        let k = w.scale_rat(&int(3));
        assert_eq!(invert_to_bivector(&k).unwrap().coeff_of(&[0, 1]), SingFunc::constant(&v, rat(1, 3)));
        let xw = w.scale(&sf("x", &v));
        assert!(matches!(invert_to_bivector(&xw), Err(Error::NonUnitDeterminant(_))));
    }

    #[test]
    fn ambient_round_trip() {
        let e = frame(FrameKind::Elliptic, 2);
        let v = e.vars().clone();
        let w = EForm::theta(&e, 0).scale(&sf("x*y", &v));
        let dx = w.to_dx().unwrap();
        assert_eq!(EForm::from_dx(&e, &dx).unwrap(), w);
        let area = EForm::theta(&e, 0).wedge(&EForm::theta(&e, 1)).unwrap().to_dx().unwrap();
        let r2 = parse_poly("x^2+y^2", &v).unwrap();
        assert_eq!(area.coeff(Blade::from_indices(&[0, 1]).unwrap()), SingFunc::inverse_factor(&r2, 1).unwrap());
    }

    #[test]
    fn intrinsic_formula_with_structure_constants() {
        // (∂x, x∂x + ∂y) on ℝ²: [V1, V2] = V1
        let v = Vars::standard(2);
        let g = vec![vec![parse_poly("1", &v).unwrap(), parse_poly("0", &v).unwrap()], vec![
            parse_poly("x", &v).unwrap(),
            parse_poly("1", &v).unwrap(),
        ]];
        let f = Arc::new(EFrame::custom(v.clone(), g, vec![], vec![], None).unwrap());
        assert!(!f.is_commuting());
        let w = EForm::from_terms(&f, 1, vec![(vec![0], sf("x*y", &v)), (vec![1], sf("y^2+x", &v))]).unwrap();
        let dw = w.ederiv();
        assert_eq!(dw.coeff_of(&[0, 1]), intrinsic_d1(&w, 0, 1));
        assert!(dw.ederiv().is_zero());
        assert!(EForm::theta(&f, 0).ederiv().ederiv().is_zero());
    }
}
