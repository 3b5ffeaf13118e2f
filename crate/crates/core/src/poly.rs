//! Sparse multivariate polynomials over the rationals.
//!
//! Terms are kept in a `BTreeMap` keyed by exponent vectors, so the map
//! order is lexicographic with the first variable most significant. Zero
//! coefficients are never stored; equal polynomials have identical maps.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Monomial = Vec<u32>;

/// Ordered list of coordinate names shared by a family of polynomials.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vars(Arc<[String]>);

impl Vars {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Self {
        Vars(names.iter().map(|s| s.as_ref().to_string()).collect())
    }

    /// `x`, `y`, `z` up to three coordinates, `x1..xn` beyond.
    pub fn standard(n: usize) -> Self {
        match n {
            0 => Vars::new::<&str>(&[]),
            1 => Vars::new(&["x"]),
            2 => Vars::new(&["x", "y"]),
            3 => Vars::new(&["x", "y", "z"]),
            _ => {
                let names: Vec<String> = (1..=n).map(|i| alloc::format!("x{i}")).collect();
                Vars::new(&names)
            }
        }
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|v| v == name)
    }

    /// The list with coordinate `idx` removed.
    pub fn without(&self, idx: usize) -> Vars {
        let names: Vec<&str> = self
            .0
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != idx)
            .map(|(_, s)| s.as_str())
            .collect();
        Vars::new(&names)
    }

    /// The list with `name` appended.
    pub fn with(&self, name: &str) -> Vars {
        let mut names: Vec<&str> = self.0.iter().map(|s| s.as_str()).collect();
        names.push(name);
        Vars::new(&names)
    }
}

impl fmt::Debug for Vars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Poly {
    vars: Vars,
    terms: BTreeMap<Monomial, BigRational>,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Poly {
    pub fn zero(vars: &Vars) -> Self {
        Poly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, BigRational::one())
    }

    pub fn constant(vars: &Vars, c: BigRational) -> Self {
        Self::monomial(vars, vec![0; vars.len()], c)
    }

    pub fn monomial(vars: &Vars, exps: Monomial, c: BigRational) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent vector length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Poly { vars: vars.clone(), terms }
    }

    /// The coordinate function `x_idx`.
    pub fn var(vars: &Vars, idx: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[idx] = 1;
        Self::monomial(vars, e, BigRational::one())
    }

    pub fn var_named(vars: &Vars, name: &str) -> Result<Self> {
        let idx = vars.index_of(name).ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        Ok(Self::var(vars, idx))
    }

    pub fn from_terms<I>(vars: &Vars, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, BigRational)>,
    {
        let mut p = Poly::zero(vars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: BigRational) {
        debug_assert_eq!(m.len(), self.vars.len());
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &[u32]) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.iter().all(|&e| e == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn constant_term(&self) -> BigRational {
        self.coefficient(&vec![0; self.nvars()])
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    pub fn degree_in(&self, idx: usize) -> u32 {
        self.terms.keys().map(|m| m[idx]).max().unwrap_or(0)
    }

    /// The common degree of all terms, or `None` when mixed or zero.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| m.iter().sum::<u32>());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn depends_on(&self, idx: usize) -> bool {
        self.terms.keys().any(|m| m[idx] > 0)
    }

    fn check_vars(&self, other: &Poly) {
        assert!(self.vars == other.vars, "polynomial variable lists differ: {:?} vs {:?}", self.vars, other.vars);
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.vars);
        }
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, e: &[u32], c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.vars);
        }
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.iter().zip(e).map(|(a, b)| a + b).collect(), k * c))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::one(&self.vars);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative in coordinate `idx`.
    pub fn partial(&self, idx: usize) -> Poly {
        let mut out = Poly::zero(&self.vars);
        for (m, c) in &self.terms {
            if m[idx] == 0 {
                continue;
            }
            let mut e = m.clone();
            e[idx] -= 1;
            out.add_term(e, c * BigRational::from_integer(BigInt::from(m[idx])));
        }
        out
    }

    pub fn partial_named(&self, name: &str) -> Result<Poly> {
        let idx = self.vars.index_of(name).ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        Ok(self.partial(idx))
    }

    pub fn eval_exact(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.nvars(), "point dimension");
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        assert_eq!(point.len(), self.nvars(), "point dimension");
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut t = rat_to_f64(c);
                for (&x, &e) in point.iter().zip(m) {
                    if e > 0 {
                        t *= libm::pow(x, e as f64);
                    }
                }
                t
            })
            .sum()
    }

    /// Substitutes `x_idx = value`; the variable list is unchanged.
    pub fn substitute(&self, idx: usize, value: &BigRational) -> Poly {
        let mut out = Poly::zero(&self.vars);
        for (m, c) in &self.terms {
            let mut e = m.clone();
            let k = e[idx];
            e[idx] = 0;
            let f = if k == 0 { BigRational::one() } else { num_traits::pow(value.clone(), k as usize) };
            out.add_term(e, c * f);
        }
        out
    }

    /// Re-expresses the polynomial over `target`, matching coordinates by
    /// name. Fails when a coordinate that actually occurs is missing.
    pub fn reindex(&self, target: &Vars) -> Result<Poly> {
        if *target == self.vars {
            return Ok(self.clone());
        }
        let map: Vec<Option<usize>> = self.vars.names().iter().map(|n| target.index_of(n)).collect();
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; target.len()];
            for (i, &k) in m.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => e[j] = k,
                    None => return Err(Error::UnknownVariable(self.vars.names()[i].clone())),
                }
            }
            out.add_term(e, c.clone());
        }
        Ok(out)
    }

    /// Sets `x_idx = 0` and removes the coordinate from the variable list.
    pub fn restrict_to_zero(&self, idx: usize) -> Poly {
        let vars = self.vars.without(idx);
        let mut out = Poly::zero(&vars);
        for (m, c) in &self.terms {
            if m[idx] == 0 {
                let mut e = m.clone();
                e.remove(idx);
                out.add_term(e, c.clone());
            }
        }
        out
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        self.check_vars(d);
        let (dm, dc) = d.leading()?;
        let (dm, dc) = (dm.clone(), dc.clone());
        let mut rem = self.clone();
        let mut quot = Poly::zero(&self.vars);
        while let Some((rm, rc)) = rem.leading() {
            if rm.iter().zip(&dm).any(|(a, b)| a < b) {
                return None;
            }
            let e: Monomial = rm.iter().zip(&dm).map(|(a, b)| a - b).collect();
            let c = rc / &dc;
            rem = &rem - &d.mul_monomial(&e, &c);
            quot.add_term(e, c);
        }
        Some(quot)
    }

    /// Homogeneous component of total degree `deg`.
    pub fn homogeneous_part(&self, deg: u32) -> Poly {
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.iter().sum::<u32>() == deg)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Divides by the leading coefficient; returns the monic polynomial and
    /// the coefficient removed.
    pub fn make_monic(&self) -> (Poly, BigRational) {
        match self.leading() {
            None => (self.clone(), BigRational::one()),
            Some((_, c)) => {
                let c = c.clone();
                (self.scale(&c.recip()), c)
            }
        }
    }
}

pub fn rat_to_f64(c: &BigRational) -> f64 {
    c.to_f64().unwrap_or_else(|| {
        let n = c.numer().to_f64().unwrap_or(f64::NAN);
        let d = c.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// All exponent vectors of total degree `deg` in `n` variables, in
/// increasing lexicographic order.
pub fn monomials_of_degree(n: usize, deg: u32) -> Vec<Monomial> {
    fn rec(n: usize, deg: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == n {
            prefix.push(deg);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in 0..=deg {
            prefix.push(k);
            rec(n, deg - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if deg == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(n, deg, &mut Vec::with_capacity(n), &mut out);
    out
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.check_vars(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.check_vars(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.check_vars(rhs);
        let mut out = Poly::zero(&self.vars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let e = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, vars: &Vars, m: &[u32]) -> fmt::Result {
    let mut first = true;
    for (name, &e) in vars.names().iter().zip(m) {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        if e == 1 {
            write!(f, "{name}")?;
        } else {
            write!(f, "{name}^{e}")?;
        }
    }
    Ok(())
}

/// Prints in the grammar accepted by [`crate::parse::parse_poly`], highest
/// terms first, e.g. `x^2 + 1/3*x*y - 2`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let is_const = m.iter().all(|&e| e == 0);
            if is_const {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                write_monomial(f, &self.vars, m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> Vars {
        Vars::new(&["x", "y"])
    }

    #[test]
    fn partials_of_circle() {
        let v = xy();
        let x = Poly::var(&v, 0);
        let y = Poly::var(&v, 1);
        let r2 = &(&x * &x) + &(&y * &y);
        assert_eq!(r2.partial(0), x.scale(&int(2)));
        assert_eq!(r2.partial(1), y.scale(&int(2)));
        assert!(Poly::constant(&v, int(5)).partial(0).is_zero());
    }

    #[test]
    fn exact_division() {
        let v = xy();
        let x = Poly::var(&v, 0);
        let y = Poly::var(&v, 1);
        let r2 = &(&x * &x) + &(&y * &y);
        let p = &r2 * &(&x - &y);
        assert_eq!(p.div_exact(&r2), Some(&x - &y));
        assert_eq!(x.div_exact(&r2), None);
        assert_eq!((&x + &Poly::one(&v)).div_exact(&x), None);
    }

    #[test]
    fn restrict_and_reindex() {
        let v = xy();
        let x = Poly::var(&v, 0);
        let y = Poly::var(&v, 1);
        let p = &(&x * &y) + &y;
        let r = p.restrict_to_zero(0);
        assert_eq!(r.vars().names(), &["y".to_string()]);
        assert_eq!(r, Poly::var(&Vars::new(&["y"]), 0));
        assert!(p.reindex(&Vars::new(&["y"])).is_err());
        assert_eq!(y.reindex(&Vars::new(&["y", "x"])).unwrap(), Poly::var(&Vars::new(&["y", "x"]), 0));
    }

    #[test]
    fn display_forms() {
        let v = xy();
        let x = Poly::var(&v, 0);
        let y = Poly::var(&v, 1);
        let p = &(&x * &y).scale(&rat(1, 3)) - &Poly::constant(&v, int(2));
        assert_eq!(alloc::format!("{p}"), "1/3*x*y - 2");
        assert_eq!(alloc::format!("{}", -&x), "-x");
        assert_eq!(alloc::format!("{}", Poly::zero(&v)), "0");
    }

    #[test]
    fn monomial_enumeration() {
        assert_eq!(monomials_of_degree(2, 2), vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        assert_eq!(monomials_of_degree(3, 1).len(), 3);
        assert_eq!(monomials_of_degree(0, 0), vec![Vec::<u32>::new()]);
    }
}
