//! The c-manifold box model: coordinate hyperplanes {x_i = 0} for i in H,
//! the tower of ordered multiple-point strata, residues and compatibility.
//!
//! Strata are ordered tuples of hyperplane indices (original coordinate
//! numbering). The tuple records the order in which residues were taken;
//! S_k acts by reordering, with the sign of the permutation.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_rational::BigRational;

use crate::blade::{permutation_sign, Blade};
use crate::eforms::EForm;
use crate::eframe::{EFrame, FrameKind};
use crate::error::{Error, Result};
use crate::numerics::liouville::{liouville_volume, LiouvilleOptions, QuadratureReport};
use crate::poly::{Poly, Vars};
use crate::singfunc::SingFunc;

fn singular_coords(frame: &EFrame) -> Option<Vec<usize>> {
    match frame.kind() {
        FrameKind::C(h) => Some(h.clone()),
        FrameKind::B { axis } => Some(vec![*axis]),
        FrameKind::Full => Some(Vec::new()),
        _ => None,
    }
}

/// c-frame on the hyperplane {x_i = 0} of a c-frame (coordinate `i` dropped).
pub fn restrict_c_frame(frame: &EFrame, i: usize) -> Result<Arc<EFrame>> {
    let h = singular_coords(frame).ok_or(Error::NotSingularHere { index: i })?;
    if !h.contains(&i) {
        return Err(Error::NotSingularHere { index: i });
    }
    let rest: Vec<usize> = h.iter().filter(|&&j| j != i).map(|&j| if j > i { j - 1 } else { j }).collect();
    Ok(Arc::new(EFrame::build_standard_with(FrameKind::C(rest), frame.vars().without(i))?))
}

fn check_residue_input(omega: &EForm, i: usize) -> Result<Arc<EFrame>> {
    omega.require_genuine()?;
    restrict_c_frame(omega.frame(), i)
}

fn shift_blade(b: Blade, i: usize) -> Blade {
    b.map(|j| if j > i { j - 1 } else { j })
}

/// Residue along {x_i = 0} (local coordinate index): write
/// ω = α ∧ θ^i + β with α, β free of θ^i and restrict α to x_i = 0.
pub fn residue(omega: &EForm, i: usize) -> Result<EForm> {
    let target = check_residue_input(omega, i)?;
    let p = omega.degree();
    if p == 0 {
        return Ok(EForm::zero(&target, 0));
    }
    let mut terms = Vec::new();
    for (blade, f) in omega.terms() {
        if !blade.contains(i) {
            continue;
        }
        let m = blade.position(i);
        let f = f.as_poly().unwrap().restrict_to_zero(i);
        let f = if (p - 1 - m) % 2 == 1 { -&f } else { f };
        terms.push((shift_blade(blade.without(i), i).to_vec(), SingFunc::from_poly(f)));
    }
    EForm::from_terms(&target, p - 1, terms)
}

/// The same residue through the contraction (−1)^{p−1} ι_{e_i} ω, i.e.
/// ι by x_i ∂/∂x_i, followed by restriction.
pub fn residue_via_contraction(omega: &EForm, i: usize) -> Result<EForm> {
    let target = check_residue_input(omega, i)?;
    let p = omega.degree();
    if p == 0 {
        return Ok(EForm::zero(&target, 0));
    }
    let mut c = omega.interior_basis(i);
    if (p - 1) % 2 == 1 {
        c = c.neg();
    }
    let terms = c
        .terms()
        .map(|(b, f)| (shift_blade(*b, i).to_vec(), SingFunc::from_poly(f.as_poly().unwrap().restrict_to_zero(i))))
        .collect();
    EForm::from_terms(&target, p - 1, terms)
}

/// A form has no singular part when every residue vanishes.
pub fn is_smooth(omega: &EForm) -> Result<bool> {
    let h = singular_coords(omega.frame()).ok_or(Error::InvalidArgument("not a c-frame".into()))?;
    for i in h {
        if !residue(omega, i)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug)]
pub struct CModel {
    vars: Vars,
    hyperplanes: Vec<usize>,
    frame: Arc<EFrame>,
}

/// Level `k` of a tower: ordered stratum → form on that stratum.
pub type Assignment = BTreeMap<Vec<usize>, EForm>;

#[derive(Clone, Debug)]
pub struct ResidueTower {
    pub levels: Vec<Assignment>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompatReport {
    pub compatible: bool,
    /// Level, the two ordered strata compared, and their values.
    pub witness: Option<(usize, Vec<usize>, Vec<usize>, EForm, EForm)>,
}

#[derive(Clone, Debug)]
pub enum Invariant {
    Volume(QuadratureReport),
    Exact(BigRational),
}

impl Invariant {
    pub fn value_f64(&self) -> f64 {
        match self {
            Invariant::Volume(q) => q.value,
            Invariant::Exact(c) => crate::poly::rat_to_f64(c),
        }
    }
}

#[derive(Clone, Debug)]
pub struct DecompositionInvariants {
    /// `levels[k]` lists (ordered stratum, invariant) pairs.
    pub levels: Vec<Vec<(Vec<usize>, Invariant)>>,
}

impl DecompositionInvariants {
    /// Flattened numeric vector, used to tell classes apart.
    pub fn as_vector(&self) -> Vec<f64> {
        self.levels.iter().flatten().map(|(_, v)| v.value_f64()).collect()
    }
}

impl CModel {
    pub fn new(dim: usize, hyperplanes: &[usize]) -> Result<Self> {
        Self::with_vars(Vars::standard(dim), hyperplanes)
    }

    pub fn with_vars(vars: Vars, hyperplanes: &[usize]) -> Result<Self> {
        let mut h = hyperplanes.to_vec();
        h.sort_unstable();
        h.dedup();
        let frame = Arc::new(EFrame::build_standard_with(FrameKind::C(h.clone()), vars.clone())?);
        Ok(CModel { vars, hyperplanes: h, frame })
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn hyperplanes(&self) -> &[usize] {
        &self.hyperplanes
    }

    pub fn frame(&self) -> &Arc<EFrame> {
        &self.frame
    }

    /// Frame on the stratum cut out by the coordinates in `removed`.
    pub fn stratum_frame(&self, removed: &[usize]) -> Result<Arc<EFrame>> {
        let mut f = self.frame.clone();
        let mut sorted = removed.to_vec();
        sorted.sort_unstable();
        // dropping the largest index first keeps the others' positions
        for &h in sorted.iter().rev() {
            f = restrict_c_frame(&f, h)?;
        }
        Ok(f)
    }

    /// All ordered k-tuples of distinct hyperplanes.
    pub fn ordered_strata(&self, k: usize) -> Vec<Vec<usize>> {
        fn rec(h: &[usize], k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for &i in h {
                if !cur.contains(&i) {
                    cur.push(i);
                    rec(h, k, cur, out);
                    cur.pop();
                }
            }
        }
        let mut out = Vec::new();
        rec(&self.hyperplanes, k, &mut Vec::new(), &mut out);
        out
    }

    /// Index of original coordinate `h` once the coordinates in `removed`
    /// have been dropped.
    fn local_index(removed: &[usize], h: usize) -> usize {
        h - removed.iter().filter(|&&r| r < h).count()
    }

    /// Residue of a form living on stratum `removed` along hyperplane `h`.
    pub fn residue_on(&self, omega: &EForm, removed: &[usize], h: usize) -> Result<EForm> {
        if removed.contains(&h) || !self.hyperplanes.contains(&h) {
            return Err(Error::NotSingularHere { index: h });
        }
        residue(omega, Self::local_index(removed, h))
    }

    pub fn residue_tower(&self, omega: &EForm) -> Result<ResidueTower> {
        omega.require_genuine()?;
        let mut levels: Vec<Assignment> = vec![BTreeMap::from([(Vec::new(), omega.clone())])];
        for k in 1..=self.hyperplanes.len().min(omega.degree()) {
            let prev = &levels[k - 1];
            let mut next = BTreeMap::new();
            for t in self.ordered_strata(k) {
                let (last, head) = t.split_last().unwrap();
                let w = self.residue_on(&prev[head], head, *last)?;
                next.insert(t, w);
            }
            levels.push(next);
        }
        Ok(ResidueTower { levels })
    }

    /// Sign-equivariance at level `k`, then recursively on the residues
    /// until every form is smooth.
    pub fn is_compatible(&self, k: usize, assignment: &Assignment) -> Result<CompatReport> {
        let strata = self.ordered_strata(k);
        for t in &strata {
            if !assignment.contains_key(t) {
                return Err(Error::MissingStratum(t.clone()));
            }
        }
        for t in &strata {
            let mut s = t.clone();
            s.sort_unstable();
            let w = &assignment[t];
            let base = &assignment[&s];
            let expected = if permutation_sign(t) < 0 { base.neg() } else { base.clone() };
            if *w != expected {
                return Ok(CompatReport { compatible: false, witness: Some((k, s, t.clone(), base.clone(), w.clone())) });
            }
        }
        let mut next = BTreeMap::new();
        let mut all_smooth = true;
        for t in self.ordered_strata(k + 1) {
            let (last, head) = t.split_last().unwrap();
            let r = self.residue_on(&assignment[head], head, *last)?;
            if !r.is_zero() {
                all_smooth = false;
            }
            next.insert(t, r);
        }
        if all_smooth {
            return Ok(CompatReport { compatible: true, witness: None });
        }
        self.is_compatible(k + 1, &next)
    }

    /// (sm(ω), sm(res ω), sm(res² ω), …) on the box [−1, 1]^n: Liouville
    /// volumes where the stratum has positive dimension, exact values on
    /// points.
    pub fn decomposition_invariants(&self, omega: &EForm, opts: &LiouvilleOptions) -> Result<DecompositionInvariants> {
        let n = self.dim();
        if omega.degree() != n {
            return Err(Error::DegreeMismatch { expected: n, found: omega.degree() });
        }
        omega.require_genuine()?;
        // top-degree forms are closed for degree reasons; check anyway
        if !omega.ederiv().is_zero() {
            return Err(Error::NotClosed);
        }
        let tower = self.residue_tower(omega)?;
        let mut levels = Vec::new();
        for (k, level) in tower.levels.iter().enumerate() {
            let mut out = Vec::new();
            for (t, w) in level {
                let inv = if n == k {
                    let c = w.coeff(Blade::EMPTY);
                    let v = c.as_poly().map(Poly::constant_term).unwrap_or_else(|| num_traits::Zero::zero());
                    Invariant::Exact(v)
                } else {
                    Invariant::Volume(liouville_volume(w, opts)?)
                };
                out.push((t.clone(), inv));
            }
            levels.push(out);
        }
        Ok(DecompositionInvariants { levels })
    }

    /// A closed c-form whose residue along `h` is the given closed form `beta`
    /// on the hyperplane {x_h = 0}: β extended constantly in x_h, wedged with
    /// θ^h and signed so that res picks β back up. On the box model the odd
    /// cutoff can be taken to be ρ(x) = x, which keeps everything polynomial.
    pub fn extend_residue(&self, beta: &EForm, h: usize) -> Result<EForm> {
        if !self.hyperplanes.contains(&h) {
            return Err(Error::NotSingularHere { index: h });
        }
        beta.require_genuine()?;
        let mut terms = Vec::new();
        for (blade, f) in beta.terms() {
            let f = f.as_poly().unwrap().reindex(&self.vars)?;
            let lifted: Vec<usize> = blade.indices().map(|j| if j >= h { j + 1 } else { j }).collect();
            // (β̃ ∧ θ^h) has θ^h last; residue sign for that position is +1
            let mut idx = lifted;
            idx.push(h);
            terms.push((idx, SingFunc::from_poly(f)));
        }
        EForm::from_terms(&self.frame, beta.degree() + 1, terms)
    }
}
