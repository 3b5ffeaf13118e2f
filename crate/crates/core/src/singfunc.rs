//! Fractions whose denominators are products of declared singular factors.
//!
//! A `SingFunc` is `num / Π f_k^{p_k}` with each `f_k` monic and the list
//! sorted. After every operation each factor is divided out of the
//! numerator as often as it goes, so equal functions compare equal.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{Poly, Vars};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SingFunc {
    num: Poly,
    den: Vec<(Poly, u32)>,
}

impl SingFunc {
    pub fn zero(vars: &Vars) -> Self {
        SingFunc { num: Poly::zero(vars), den: Vec::new() }
    }

    pub fn one(vars: &Vars) -> Self {
        Self::from_poly(Poly::one(vars))
    }

    pub fn constant(vars: &Vars, c: BigRational) -> Self {
        Self::from_poly(Poly::constant(vars, c))
    }

    pub fn from_poly(p: Poly) -> Self {
        SingFunc { num: p, den: Vec::new() }
    }

    /// Builds `num / Π factor^power` and reduces it.
    pub fn new(num: Poly, den: impl IntoIterator<Item = (Poly, u32)>) -> Result<Self> {
        let mut num = num;
        let mut merged: Vec<(Poly, u32)> = Vec::new();
        for (f, p) in den {
            if p == 0 {
                continue;
            }
            if f.vars() != num.vars() {
                return Err(Error::VariableMismatch);
            }
            if let Some(c) = f.as_constant() {
                if c.is_zero() {
                    return Err(Error::Domain("zero denominator factor".into()));
                }
                num = num.scale(&num_traits::pow(c.recip(), p as usize));
                continue;
            }
            let (m, c) = f.make_monic();
            num = num.scale(&num_traits::pow(c.recip(), p as usize));
            match merged.iter_mut().find(|(g, _)| *g == m) {
                Some(slot) => slot.1 += p,
                None => merged.push((m, p)),
            }
        }
        merged.sort();
        let mut s = SingFunc { num, den: merged };
        s.reduce();
        Ok(s)
    }

    /// `1 / factor^power`.
    pub fn inverse_factor(factor: &Poly, power: u32) -> Result<Self> {
        Self::new(Poly::one(factor.vars()), [(factor.clone(), power)])
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        for (f, p) in self.den.iter_mut() {
            while *p > 0 {
                match self.num.div_exact(f) {
                    Some(q) => {
                        self.num = q;
                        *p -= 1;
                    }
                    None => break,
                }
            }
        }
        self.den.retain(|(_, p)| *p > 0);
    }

    pub fn vars(&self) -> &Vars {
        self.num.vars()
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &[(Poly, u32)] {
        &self.den
    }

    pub fn denominator_poly(&self) -> Poly {
        let mut d = Poly::one(self.vars());
        for (f, p) in &self.den {
            d = &d * &f.pow(*p);
        }
        d
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        self.den.is_empty().then_some(&self.num)
    }

    pub fn into_poly(self) -> Option<Poly> {
        self.den.is_empty().then_some(self.num)
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        self.as_poly().and_then(|p| p.as_constant())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return SingFunc::zero(self.vars());
        }
        SingFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    /// Least common denominator of two factor lists.
    fn lcm(a: &[(Poly, u32)], b: &[(Poly, u32)]) -> Vec<(Poly, u32)> {
        let mut out: Vec<(Poly, u32)> = a.to_vec();
        for (f, p) in b {
            match out.iter_mut().find(|(g, _)| g == f) {
                Some(slot) => slot.1 = slot.1.max(*p),
                None => out.push((f.clone(), *p)),
            }
        }
        out.sort();
        out
    }

    /// Numerator rescaled to the denominator `target` (a multiple of ours).
    fn lift(&self, target: &[(Poly, u32)]) -> Poly {
        let mut n = self.num.clone();
        for (f, p) in target {
            let have = self.den.iter().find(|(g, _)| g == f).map_or(0, |(_, q)| *q);
            if *p > have {
                n = &n * &f.pow(p - have);
            }
        }
        n
    }

    fn combine(&self, rhs: &SingFunc, sub: bool) -> SingFunc {
        assert!(self.vars() == rhs.vars(), "variable lists differ");
        if self.den == rhs.den {
            let num = if sub { &self.num - &rhs.num } else { &self.num + &rhs.num };
            let mut s = SingFunc { num, den: self.den.clone() };
            s.reduce();
            return s;
        }
        let den = Self::lcm(&self.den, &rhs.den);
        let a = self.lift(&den);
        let b = rhs.lift(&den);
        let mut s = SingFunc { num: if sub { &a - &b } else { &a + &b }, den };
        s.reduce();
        s
    }

    pub fn partial(&self, idx: usize) -> SingFunc {
        // d(N/D) = N'/D - N Σ p_k f_k' / (f_k D)
        let mut out = SingFunc { num: self.num.partial(idx), den: self.den.clone() };
        out.reduce();
        for (k, (f, p)) in self.den.iter().enumerate() {
            let df = f.partial(idx);
            if df.is_zero() {
                continue;
            }
            let mut den = self.den.clone();
            den[k].1 += 1;
            let num = (&self.num * &df).scale(&-BigRational::from_integer((*p).into()));
            let mut term = SingFunc { num, den };
            term.reduce();
            out = &out + &term;
        }
        out
    }

    pub fn eval_exact(&self, point: &[BigRational]) -> Result<BigRational> {
        let mut d = BigRational::one();
        for (f, p) in &self.den {
            let v = f.eval_exact(point);
            if v.is_zero() {
                return Err(Error::SingularPoint);
            }
            d *= num_traits::pow(v, *p as usize);
        }
        Ok(self.num.eval_exact(point) / d)
    }

    pub fn eval_f64(&self, point: &[f64]) -> Result<f64> {
        let mut d = 1.0;
        for (f, p) in &self.den {
            let v = f.eval_f64(point);
            if v == 0.0 {
                return Err(Error::SingularPoint);
            }
            d *= libm::pow(v, *p as f64);
        }
        Ok(self.num.eval_f64(point) / d)
    }

    /// Substitutes `x_idx = value`, keeping the variable list.
    pub fn substitute(&self, idx: usize, value: &BigRational) -> Result<SingFunc> {
        let num = self.num.substitute(idx, value);
        let den: Vec<(Poly, u32)> = self.den.iter().map(|(f, p)| (f.substitute(idx, value), *p)).collect();
        if den.iter().any(|(f, _)| f.is_zero()) {
            return Err(Error::SingularPoint);
        }
        SingFunc::new(num, den)
    }

    pub fn reindex(&self, target: &Vars) -> Result<SingFunc> {
        let num = self.num.reindex(target)?;
        let den = self
            .den
            .iter()
            .map(|(f, p)| Ok((f.reindex(target)?, *p)))
            .collect::<Result<Vec<_>>>()?;
        SingFunc::new(num, den)
    }

    /// Checks every denominator factor against a declared list (compared
    /// after normalisation to monic form).
    pub fn check_factors(&self, declared: &[Poly]) -> Result<()> {
        for (f, _) in &self.den {
            if !declared.iter().any(|d| d.make_monic().0 == *f) {
                return Err(Error::UndeclaredFactor(f.to_string()));
            }
        }
        Ok(())
    }
}

impl From<Poly> for SingFunc {
    fn from(p: Poly) -> Self {
        SingFunc::from_poly(p)
    }
}

impl<'a> Add<&'a SingFunc> for &'a SingFunc {
    type Output = SingFunc;
    fn add(self, rhs: &SingFunc) -> SingFunc {
        self.combine(rhs, false)
    }
}

impl<'a> Sub<&'a SingFunc> for &'a SingFunc {
    type Output = SingFunc;
    fn sub(self, rhs: &SingFunc) -> SingFunc {
        self.combine(rhs, true)
    }
}

impl<'a> Mul<&'a SingFunc> for &'a SingFunc {
    type Output = SingFunc;
    fn mul(self, rhs: &SingFunc) -> SingFunc {
        assert!(self.vars() == rhs.vars(), "variable lists differ");
        let mut den = self.den.clone();
        for (f, p) in &rhs.den {
            match den.iter_mut().find(|(g, _)| g == f) {
                Some(slot) => slot.1 += p,
                None => den.push((f.clone(), *p)),
            }
        }
        den.sort();
        let mut s = SingFunc { num: &self.num * &rhs.num, den };
        s.reduce();
        s
    }
}

impl Neg for &SingFunc {
    type Output = SingFunc;
    fn neg(self) -> SingFunc {
        SingFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl fmt::Display for SingFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({})/(", self.num)?;
        for (k, (g, p)) in self.den.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if *p == 1 {
                write!(f, "({g})")?;
            } else {
                write!(f, "({g})^{p}")?;
            }
        }
        f.write_str(")")
    }
}

impl fmt::Debug for SingFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SingFunc({self})")
    }
}
