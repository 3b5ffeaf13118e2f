//! Minimal ring interface so determinants work over `Poly` and `SingFunc`.

use alloc::vec::Vec;

use crate::poly::{Poly, Vars};
use crate::singfunc::SingFunc;

pub trait Ring: Clone {
    fn zero_like(&self) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn is_zero(&self) -> bool;
}

impl Ring for Poly {
    fn zero_like(&self) -> Self {
        Poly::zero(self.vars())
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
}

impl Ring for SingFunc {
    fn zero_like(&self) -> Self {
        SingFunc::zero(self.vars())
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn is_zero(&self) -> bool {
        SingFunc::is_zero(self)
    }
}

/// Determinant by cofactor expansion over column subsets (fine for the
/// small matrices that occur here).
pub fn det<R: Ring>(m: &[Vec<R>]) -> Option<R> {
    let proto = m.first()?.first()?.clone();
    fn rec<R: Ring>(m: &[Vec<R>], row: usize, cols: u32, proto: &R) -> R {
        let n = m.len();
        // the last row is handled inline below, so `row < n` here
        let mut acc = proto.zero_like();
        let mut sign_pos = true;
        for c in 0..n {
            if cols & (1 << c) != 0 {
                continue;
            }
            let a = &m[row][c];
            if !a.is_zero() {
                let term = if row + 1 == n { a.clone() } else { a.mul(&rec(m, row + 1, cols | (1 << c), proto)) };
                acc = if sign_pos { acc.add(&term) } else { acc.sub(&term) };
            }
            sign_pos = !sign_pos;
        }
        acc
    }
    Some(rec(m, 0, 0, &proto))
}

/// Cofactor `(-1)^{i+j} · minor(i, j)`; for 1x1 matrices this is `one`.
pub fn cofactor<R: Ring>(m: &[Vec<R>], i: usize, j: usize, one: &R) -> R {
    let minor: Vec<Vec<R>> = m
        .iter()
        .enumerate()
        .filter(|&(r, _)| r != i)
        .map(|(_, row)| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, v)| v.clone()).collect())
        .collect();
    let d = if minor.is_empty() { one.clone() } else { det(&minor).unwrap() };
    if (i + j) % 2 == 0 {
        d
    } else {
        d.zero_like().sub(&d)
    }
}

pub fn poly_identity(vars: &Vars, n: usize) -> Vec<Vec<Poly>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Poly::one(vars) } else { Poly::zero(vars) }).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    #[test]
    fn determinants() {
        let v = Vars::new(&["x", "y"]);
        let p = |s: &str| parse_poly(s, &v).unwrap();
        let g = alloc::vec![alloc::vec![p("x"), p("y")], alloc::vec![p("-y"), p("x")]];
        assert_eq!(det(&g).unwrap(), p("x^2+y^2"));
        let single = alloc::vec![alloc::vec![p("3*x")]];
        assert_eq!(det(&single).unwrap(), p("3*x"));
        let m3 = alloc::vec![
            alloc::vec![p("1"), p("2"), p("3")],
            alloc::vec![p("0"), p("1"), p("4")],
            alloc::vec![p("5"), p("6"), p("0")],
        ];
        assert_eq!(det(&m3).unwrap(), p("1"));
        assert_eq!(cofactor(&g, 0, 1, &p("1")), p("y"));
    }
}
