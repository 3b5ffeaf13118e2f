//! Multivector fields, the Schouten bracket and Poisson checks.
//!
//! Sign convention: a q-vector Σ P_I ∂_I is treated as the superfunction
//! Σ P_I ξ_I with odd ξ_i, and
//!
//! ```text
//! [P, Q] = Σ_i (P ∂⃖/∂ξ_i)(∂Q/∂x_i) − (∂P/∂x_i)(∂⃗/∂ξ_i Q)
//! ```
//!
//! This is the Lie bracket on vector fields, gives [P, P] = 2·Jacobiator on
//! bivectors, and d_P = [P, ·] squares to zero when P is Poisson.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::blade::{permutation_sign, Blade};
use crate::eframe::{EFrame, VectorField};
use crate::eforms::same_frame;
use crate::error::{Error, Result};
use crate::poly::{Poly, Vars};
use crate::ring;
use crate::singfunc::SingFunc;

#[derive(Clone, Debug)]
pub enum Basis {
    /// Coefficients of e_{i1} ∧ … in a frame.
    Frame(Arc<EFrame>),
    /// Coefficients of ∂_{i1} ∧ … in coordinates.
    Ambient,
}

impl PartialEq for Basis {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Basis::Frame(a), Basis::Frame(b)) => same_frame(a, b),
            (Basis::Ambient, Basis::Ambient) => true,
            _ => false,
        }
    }
}

#[derive(Clone, PartialEq)]
pub struct MultiVec {
    basis: Basis,
    vars: Vars,
    degree: usize,
    coeffs: BTreeMap<Blade, SingFunc>,
}

impl MultiVec {
    pub fn zero(basis: Basis, vars: &Vars, degree: usize) -> Self {
        MultiVec { basis, vars: vars.clone(), degree, coeffs: BTreeMap::new() }
    }

    /// Ambient degree-0 multivector (a function).
    pub fn function(vars: &Vars, f: SingFunc) -> Self {
        let mut m = Self::zero(Basis::Ambient, vars, 0);
        m.insert(Blade::EMPTY, f);
        m
    }

    pub fn from_field(v: &VectorField, vars: &Vars) -> Self {
        let mut m = Self::zero(Basis::Ambient, vars, 1);
        for (i, c) in v.coeffs().iter().enumerate() {
            m.insert(Blade::single(i), c.clone());
        }
        m
    }

    pub fn from_poly_field(coeffs: &[Poly]) -> Self {
        let vars = coeffs[0].vars().clone();
        let mut m = Self::zero(Basis::Ambient, &vars, 1);
        for (i, c) in coeffs.iter().enumerate() {
            m.insert(Blade::single(i), SingFunc::from_poly(c.clone()));
        }
        m
    }

    /// From `(indices, coefficient)` with indices 0-based in any order.
    pub fn from_terms(basis: Basis, vars: &Vars, degree: usize, terms: Vec<(Vec<usize>, SingFunc)>) -> Result<Self> {
        let slots = match &basis {
            Basis::Frame(f) => f.rank(),
            Basis::Ambient => vars.len(),
        };
        let mut m = Self::zero(basis, vars, degree);
        for (idx, c) in terms {
            if idx.len() != degree {
                return Err(Error::DegreeMismatch { expected: degree, found: idx.len() });
            }
            if idx.iter().any(|&i| i >= slots) {
                return Err(Error::InvalidArgument(alloc::format!("index out of range in {idx:?}")));
            }
            if c.vars() != vars {
                return Err(Error::VariableMismatch);
            }
            let Some(b) = Blade::from_indices(&idx) else { continue };
            m.insert(b, if permutation_sign(&idx) < 0 { -&c } else { c });
        }
        Ok(m)
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

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
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
            _ => SingFunc::zero(&self.vars),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &MultiVec) -> Result<MultiVec> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch);
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, found: other.degree });
        }
        let mut out = self.clone();
        for (b, c) in &other.coeffs {
            out.insert(*b, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MultiVec) -> Result<MultiVec> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MultiVec {
        self.map(|c| -c)
    }

    pub fn scale(&self, f: &SingFunc) -> MultiVec {
        self.map(|c| c * f)
    }

    fn map(&self, f: impl Fn(&SingFunc) -> SingFunc) -> MultiVec {
        let mut out = MultiVec::zero(self.basis.clone(), &self.vars, self.degree);
        for (b, c) in &self.coeffs {
            out.insert(*b, f(c));
        }
        out
    }

    /// Frame-basis coefficients pushed to coordinates through the anchor:
    /// e_{a1} ∧ … ∧ e_{aq} ↦ V_{a1} ∧ … ∧ V_{aq}.
    pub fn to_ambient(&self) -> MultiVec {
        let Basis::Frame(frame) = &self.basis else {
            return self.clone();
        };
        let n = frame.dim();
        let g = frame.generators();
        let mut out = MultiVec::zero(Basis::Ambient, &self.vars, self.degree);
        for (blade, c) in &self.coeffs {
            let rows = blade.to_vec();
            if rows.is_empty() {
                out.insert(*blade, c.clone());
                continue;
            }
            for j in Blade::all_of_size(n, self.degree) {
                let cols = j.to_vec();
                let m: Vec<Vec<Poly>> = rows.iter().map(|&a| cols.iter().map(|&i| g[a][i].clone()).collect()).collect();
                let d = ring::det(&m).unwrap();
                if !d.is_zero() {
                    out.insert(j, c * &SingFunc::from_poly(d));
                }
            }
        }
        out
    }

    pub fn wedge(&self, other: &MultiVec) -> Result<MultiVec> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch);
        }
        let mut out = MultiVec::zero(self.basis.clone(), &self.vars, self.degree + other.degree);
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

    fn partial_x(&self, i: usize) -> MultiVec {
        self.map(|c| c.partial(i))
    }

    /// Right derivative by ξ_i: move ξ_i to the right end, then drop it.
    fn right_dxi(&self, i: usize) -> MultiVec {
        let mut out = MultiVec::zero(self.basis.clone(), &self.vars, self.degree.saturating_sub(1));
        for (b, c) in &self.coeffs {
            if b.contains(i) {
                let after = self.degree - 1 - b.position(i);
                out.insert(b.without(i), if after % 2 == 1 { -c } else { c.clone() });
            }
        }
        out
    }

    /// Left derivative by ξ_i: move ξ_i to the left end, then drop it.
    fn left_dxi(&self, i: usize) -> MultiVec {
        let mut out = MultiVec::zero(self.basis.clone(), &self.vars, self.degree.saturating_sub(1));
        for (b, c) in &self.coeffs {
            if b.contains(i) {
                out.insert(b.without(i), if b.position(i) % 2 == 1 { -c } else { c.clone() });
            }
        }
        out
    }

    pub fn eval_f64(&self, point: &[f64]) -> Result<BTreeMap<Blade, f64>> {
        self.coeffs.iter().map(|(b, c)| Ok((*b, c.eval_f64(point)?))).collect()
    }
}

/// Schouten–Nijenhuis bracket in ambient coordinates (frame-basis inputs
/// are anchor-expanded first).
pub fn schouten(p: &MultiVec, q: &MultiVec) -> MultiVec {
    let p = p.to_ambient();
    let q = q.to_ambient();
    let n = p.vars.len();
    let deg = (p.degree + q.degree).saturating_sub(1);
    let mut out = MultiVec::zero(Basis::Ambient, &p.vars, deg);
    if p.degree + q.degree == 0 {
        return out;
    }
    for i in 0..n {
        let a = p.right_dxi(i);
        if !a.is_zero() {
            let b = q.partial_x(i);
            if !b.is_zero() {
                for (k, c) in a.wedge(&b).unwrap().coeffs {
                    out.insert(k, c);
                }
            }
        }
        let c = p.partial_x(i);
        if !c.is_zero() {
            let d = q.left_dxi(i);
            if !d.is_zero() {
                for (k, v) in c.wedge(&d).unwrap().coeffs {
                    out.insert(k, -&v);
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct PoissonCheck {
    pub poisson: bool,
    /// A nonzero coefficient of [P, P] when the check fails.
    pub witness: Option<(Vec<usize>, SingFunc)>,
}

pub fn is_poisson(p: &MultiVec) -> Result<PoissonCheck> {
    if p.degree != 2 {
        return Err(Error::DegreeMismatch { expected: 2, found: p.degree });
    }
    let pp = schouten(p, p);
    let witness = pp.coeffs.iter().next().map(|(b, c)| (b.to_vec(), c.clone()));
    Ok(PoissonCheck { poisson: witness.is_none(), witness })
}

/// d_P(A) = [P, A], refusing non-Poisson P.
pub fn lichnerowicz_d(p: &MultiVec, a: &MultiVec) -> Result<MultiVec> {
    if !is_poisson(p)?.poisson {
        return Err(Error::NotPoisson);
    }
    Ok(schouten(p, a))
}

/// {f, g} = Σ π^{ab} ∂_a f ∂_b g for an ambient bivector.
pub fn poisson_bracket(p: &MultiVec, f: &SingFunc, g: &SingFunc) -> SingFunc {
    let p = p.to_ambient();
    let mut acc = SingFunc::zero(&p.vars);
    for (b, c) in &p.coeffs {
        let v = b.to_vec();
        let (a, bb) = (v[0], v[1]);
        let t = &(&f.partial(a) * &g.partial(bb)) - &(&f.partial(bb) * &g.partial(a));
        acc = &acc + &(c * &t);
    }
    acc
}

/// Jacobiator {x_i,{x_j,x_k}} + cyclic for every i < j < k.
pub fn jacobiator(p: &MultiVec) -> Vec<([usize; 3], SingFunc)> {
    let n = p.vars.len();
    let x: Vec<SingFunc> = (0..n).map(|i| SingFunc::from_poly(Poly::var(&p.vars, i))).collect();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let mut acc = SingFunc::zero(&p.vars);
                for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                    let inner = poisson_bracket(p, &x[b], &x[c]);
                    acc = &acc + &poisson_bracket(p, &x[a], &inner);
                }
                out.push(([i, j, k], acc));
            }
        }
    }
    out
}

impl fmt::Display for MultiVec {
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
                match &self.basis {
                    Basis::Frame(_) => write!(f, "*e{}", i + 1)?,
                    Basis::Ambient => write!(f, "*d{}", self.vars.names()[i])?,
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiVec[{}]({self})", self.degree)
    }
}

/// Ambient coordinate field ∂_i.
pub fn coordinate_field(vars: &Vars, i: usize) -> MultiVec {
    let mut c = vec![Poly::zero(vars); vars.len()];
    c[i] = Poly::one(vars);
    MultiVec::from_poly_field(&c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eframe::FrameKind;
    use crate::parse::parse_poly;

    fn sf(s: &str, v: &Vars) -> SingFunc {
        SingFunc::from_poly(parse_poly(s, v).unwrap())
    }

    fn pi_e(v: &Vars) -> MultiVec {
        MultiVec::from_terms(Basis::Ambient, v, 2, vec![(vec![0, 1], sf("x^2+y^2", v))]).unwrap()
    }

    #[test]
    fn lie_brackets() {
        let v = Vars::standard(2);
        let dx = coordinate_field(&v, 0);
        let dy = coordinate_field(&v, 1);
        assert!(schouten(&dx, &dy).is_zero());
        let xdx = MultiVec::from_terms(Basis::Ambient, &v, 1, vec![(vec![0], sf("x", &v))]).unwrap();
        assert_eq!(schouten(&xdx, &dx), dx.neg());
    }

    #[test]
    fn elliptic_bivector() {
        let v = Vars::standard(2);
        let p = pi_e(&v);
        assert!(schouten(&p, &p).is_zero());
        assert!(is_poisson(&p).unwrap().poisson);
        let dx = lichnerowicz_d(&p, &MultiVec::function(&v, sf("x", &v))).unwrap();
        assert_eq!(dx.coeff_of(&[1]), sf("-x^2-y^2", &v));
        assert!(dx.coeff_of(&[0]).is_zero());
        let rot = MultiVec::from_terms(Basis::Ambient, &v, 1, vec![(vec![0], sf("-y", &v)), (vec![1], sf("x", &v))]).unwrap();
        assert!(lichnerowicz_d(&p, &rot).unwrap().is_zero());
        assert!(lichnerowicz_d(&p, &MultiVec::function(&v, sf("3", &v))).unwrap().is_zero());
    }

    #[test]
    fn anchor_of_frame_bivector() {
        let f = Arc::new(EFrame::build_standard(FrameKind::Elliptic, 2).unwrap());
        let v = f.vars().clone();
        let e12 = MultiVec::from_terms(Basis::Frame(f), &v, 2, vec![(vec![0, 1], sf("1", &v))]).unwrap();
        assert_eq!(e12.to_ambient(), pi_e(&v));
    }

    #[test]
    fn jacobiator_matches_bracket() {
        let v = Vars::standard(3);
        let p = MultiVec::from_terms(
            Basis::Ambient,
            &v,
            2,
            vec![(vec![0, 1], sf("y", &v)), (vec![1, 2], sf("x", &v)), (vec![2, 0], sf("1", &v))],
        )
        .unwrap();
        let pp = schouten(&p, &p);
        let j = jacobiator(&p);
        assert_eq!(j.len(), 1);
        assert_eq!(pp.coeff_of(&[0, 1, 2]), j[0].1.scale(&crate::poly::int(2)));
        assert_eq!(is_poisson(&p).unwrap().poisson, j[0].1.is_zero());
    }

    #[test]
    fn wedges() {
        let v = Vars::standard(2);
        let dx = coordinate_field(&v, 0);
        assert!(dx.wedge(&dx).unwrap().is_zero());
    }
}
