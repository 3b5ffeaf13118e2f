//! Polynomials compiled to flat f64 term lists for hot loops.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::poly::{rat_to_f64, Poly};
use crate::singfunc::SingFunc;

#[derive(Clone, Debug)]
pub struct FastPoly {
    nvars: usize,
    max_exp: u32,
    terms: Vec<(f64, Vec<(usize, u32)>)>,
}

impl FastPoly {
    pub fn new(p: &Poly) -> Self {
        let mut max_exp = 0;
        let terms = p
            .terms()
            .map(|(m, c)| {
                let e: Vec<(usize, u32)> = m.iter().enumerate().filter(|(_, &k)| k > 0).map(|(i, &k)| (i, k)).collect();
                max_exp = e.iter().fold(max_exp, |acc, &(_, k)| acc.max(k));
                (rat_to_f64(c), e)
            })
            .collect();
        FastPoly { nvars: p.nvars(), max_exp, terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert!(x.len() >= self.nvars);
        if self.max_exp <= 2 {
            let mut acc = 0.0;
            for (c, e) in &self.terms {
                let mut t = *c;
                for &(i, k) in e {
                    t *= if k == 1 { x[i] } else { x[i] * x[i] };
                }
                acc += t;
            }
            return acc;
        }
        let mut acc = 0.0;
        for (c, e) in &self.terms {
            let mut t = *c;
            for &(i, k) in e {
                let mut p = 1.0;
                for _ in 0..k {
                    p *= x[i];
                }
                t *= p;
            }
            acc += t;
        }
        acc
    }
}

/// A compiled `SingFunc`: numerator over a product of factor powers.
#[derive(Clone, Debug)]
pub struct FastSing {
    num: FastPoly,
    den: Vec<(FastPoly, u32)>,
}

impl FastSing {
    pub fn new(f: &SingFunc) -> Self {
        FastSing { num: FastPoly::new(f.numerator()), den: f.denominator().iter().map(|(p, e)| (FastPoly::new(p), *e)).collect() }
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        let mut d = 1.0;
        for (p, e) in &self.den {
            let v = p.eval(x);
            for _ in 0..*e {
                d *= v;
            }
        }
        if d == 0.0 {
            return Err(Error::SingularPoint);
        }
        Ok(self.num.eval(x) / d)
    }
}
