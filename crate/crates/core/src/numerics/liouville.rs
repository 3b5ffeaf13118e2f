//! Principal-value volumes of singular top-degree forms on [−1, 1]^n.
//!
//! The ambient density is N(x) / Π_{i∈S} x_i. The removed neighbourhood
//! U_ε = ∪_{i∈S} {|x_i| < ε} has a product complement, so each singular
//! axis is integrated over ±[ε, 1] with geometric panels (node pairs ±t are
//! summed together), and the limit ε → 0 is taken by Richardson
//! extrapolation over a halving schedule.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::fastpoly::FastPoly;
use super::quadrature::{composite, geometric_breaks, richardson_diagonal};
use crate::blade::Blade;
use crate::eforms::EForm;
use crate::eframe::FrameKind;
use crate::error::{Error, Result};
use crate::poly::Poly;

#[derive(Clone, Debug)]
pub struct LiouvilleOptions {
    pub eps_min: f64,
    pub eps_max: f64,
    /// Gauss–Legendre points per panel.
    pub quad_order: usize,
    /// Largest accepted extrapolation error estimate.
    pub tol: f64,
}

impl Default for LiouvilleOptions {
    fn default() -> Self {
        LiouvilleOptions { eps_min: 1.0 / 4096.0, eps_max: 0.125, quad_order: 10, tol: 1e-6 }
    }
}

impl LiouvilleOptions {
    pub fn schedule(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut e = self.eps_max;
        while e >= self.eps_min * (1.0 - 1e-12) {
            out.push(e);
            e /= 2.0;
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureReport {
    pub value: f64,
    pub schedule: Vec<f64>,
    pub partials: Vec<f64>,
    /// Diagonal of the Richardson table.
    pub diagonal: Vec<f64>,
    pub error_estimate: f64,
}

/// The density N / Π_{i∈S} x_i of a top-degree form, plus the removal set
/// (declared hyperplanes of the frame together with the axes of N's poles).
struct Density {
    numerator: Poly,
    poles: Vec<usize>,
    removed: Vec<usize>,
}

fn density(omega: &EForm) -> Result<Density> {
    let n = omega.frame().dim();
    if omega.degree() != n || omega.frame().rank() != n {
        return Err(Error::DegreeMismatch { expected: n, found: omega.degree() });
    }
    let dx = omega.to_dx()?;
    let full = Blade::from_indices(&(0..n).collect::<Vec<_>>()).unwrap();
    let f = dx.coeff(full);
    let vars = omega.vars();
    let mut poles = Vec::new();
    for (fac, p) in f.denominator() {
        let axis = (0..n).find(|&i| *fac == Poly::var(vars, i));
        match (axis, *p) {
            (Some(i), 1) => poles.push(i),
            _ => {
                return Err(Error::Domain(alloc::format!("singular factor ({fac})^{p} is not a simple coordinate hyperplane")));
            }
        }
    }
    let mut removed = match omega.frame().kind() {
        FrameKind::C(h) => h.clone(),
        FrameKind::B { axis } => vec![*axis],
        _ => Vec::new(),
    };
    for &i in &poles {
        if !removed.contains(&i) {
            removed.push(i);
        }
    }
    removed.sort_unstable();
    Ok(Density { numerator: f.numerator().clone(), poles, removed })
}

/// Cut-off rule for one axis: `None` integrates all of [−1, 1]; otherwise
/// the half-width of the removed slab at the current outer point.
type Cutoff<'a> = &'a dyn Fn(&[f64], f64) -> Option<f64>;

struct Integrator<'a> {
    num: FastPoly,
    poles: Vec<usize>,
    order: Vec<usize>,
    cutoffs: Vec<Cutoff<'a>>,
    quad_order: usize,
    full: Vec<(f64, f64)>,
}

impl Integrator<'_> {
    fn integrand(&self, x: &[f64]) -> f64 {
        let mut d = 1.0;
        for &i in &self.poles {
            d *= x[i];
        }
        self.num.eval(x) / d
    }

    fn rec(&self, level: usize, eps: f64, x: &mut [f64]) -> f64 {
        if level == self.order.len() {
            return self.integrand(x);
        }
        let axis = self.order[level];
        match (self.cutoffs[level])(x, eps) {
            None => {
                let mut s = 0.0;
                for &(t, w) in &self.full {
                    x[axis] = t;
                    s += w * self.rec(level + 1, eps, x);
                }
                s
            }
            Some(delta) if delta >= 1.0 => 0.0,
            Some(delta) => {
                let nodes = composite(&geometric_breaks(delta), self.quad_order);
                let mut s = 0.0;
                for (t, w) in nodes {
                    x[axis] = t;
                    let a = self.rec(level + 1, eps, x);
                    x[axis] = -t;
                    let b = self.rec(level + 1, eps, x);
                    s += w * (a + b);
                }
                s
            }
        }
    }
}

fn extrapolate(schedule: Vec<f64>, partials: Vec<f64>, tol: f64) -> Result<QuadratureReport> {
    let diagonal = richardson_diagonal(&partials);
    let m = diagonal.len();
    let value = diagonal[m - 1];
    let error_estimate = if m >= 2 { (diagonal[m - 1] - diagonal[m - 2]).abs() } else { f64::INFINITY };
    if !(error_estimate <= tol) {
        return Err(Error::NoConvergence { estimate: error_estimate, tol });
    }
    Ok(QuadratureReport { value, schedule, partials, diagonal, error_estimate })
}

fn run(omega: &EForm, opts: &LiouvilleOptions, alt: Option<(usize, &FastPoly)>) -> Result<QuadratureReport> {
    let d = density(omega)?;
    let n = omega.frame().dim();
    if n == 0 {
        return Err(Error::InvalidArgument("zero-dimensional box".into()));
    }
    let standard = |_: &[f64], e: f64| Some(e);
    let whole = |_: &[f64], _: f64| None;
    let alt_cut = alt.map(|(axis, u)| {
        move |x: &[f64], e: f64| {
            let mut y = x.to_vec();
            y[axis] = 0.0;
            Some(e / u.eval(&y))
        }
    });
    let mut order: Vec<usize> = (0..n).filter(|&i| Some(i) != alt.map(|a| a.0)).collect();
    if let Some((a, _)) = alt {
        order.push(a);
    }
    let cutoffs: Vec<Cutoff> = order
        .iter()
        .map(|&i| -> Cutoff {
            if Some(i) == alt.map(|a| a.0) && d.removed.contains(&i) {
                alt_cut.as_ref().unwrap()
            } else if d.removed.contains(&i) {
                &standard
            } else {
                &whole
            }
        })
        .collect();
    let integ = Integrator {
        num: FastPoly::new(&d.numerator),
        poles: d.poles.clone(),
        order,
        cutoffs,
        quad_order: opts.quad_order,
        full: composite(&[-1.0, 0.0, 1.0], opts.quad_order),
    };
    let schedule = opts.schedule();
    if schedule.len() < 2 {
        return Err(Error::InvalidArgument("epsilon schedule needs at least two values".into()));
    }
    let mut x = vec![0.0; n];
    let partials: Vec<f64> = schedule.iter().map(|&e| integ.rec(0, e, &mut x)).collect();
    extrapolate(schedule, partials, opts.tol)
}

/// lim_{ε→0} ∫_{[−1,1]^n ∖ U_ε} ω for a top-degree form.
pub fn liouville_volume(omega: &EForm, opts: &LiouvilleOptions) -> Result<QuadratureReport> {
    run(omega, opts, None)
}

/// Exact principal value via f = f|_{x_i=0} + x_i·g: the first term has
/// zero principal value, so recurse on g, then integrate the remaining
/// polynomial over the box.
pub fn taylor_split_volume(omega: &EForm) -> Result<BigRational> {
    let d = density(omega)?;
    let mut num = d.numerator;
    for &i in &d.poles {
        let at0 = num.substitute(i, &BigRational::zero());
        num = (&num - &at0).div_exact(&Poly::var(num.vars(), i)).expect("x_i divides f - f|x_i=0");
    }
    let mut total = BigRational::zero();
    for (m, c) in num.terms() {
        let mut t = c.clone();
        for &e in m {
            if e % 2 == 1 {
                t = BigRational::zero();
                break;
            }
            t *= BigRational::new(BigInt::from(2), BigInt::from(e + 1));
        }
        total += t;
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq)]
pub struct IndependenceReport {
    pub standard: QuadratureReport,
    pub alternative: QuadratureReport,
    pub difference: f64,
}

/// Recomputes the volume with {|h| < ε} in place of {|x_axis| < ε}, for
/// h = x_axis · u with u > 0 independent of x_axis.
pub fn defining_function_independence(
    omega: &EForm,
    axis: usize,
    h: &Poly,
    opts: &LiouvilleOptions,
) -> Result<IndependenceReport> {
    let vars = omega.vars();
    let n = vars.len();
    let invalid = |m: &str| Error::InvalidArgument(alloc::format!("`{h}` is not a valid defining function: {m}"));
    if axis >= n || h.vars() != vars {
        return Err(invalid("wrong variables"));
    }
    let u = h.div_exact(&Poly::var(vars, axis)).ok_or_else(|| invalid("not divisible by the coordinate"))?;
    if u.depends_on(axis) {
        return Err(invalid("cofactor depends on the normal coordinate"));
    }
    let fu = FastPoly::new(&u);
    let k = 17usize;
    let mut x = vec![0.0; n];
    for idx in 0..k.pow(n as u32) {
        let mut rest = idx;
        for slot in x.iter_mut() {
            *slot = -1.0 + 2.0 * (rest % k) as f64 / (k - 1) as f64;
            rest /= k;
        }
        if fu.eval(&x) <= 0.0 {
            return Err(invalid(&alloc::format!("cofactor not positive at {x:?}")));
        }
    }
    let standard = liouville_volume(omega, opts)?;
    let alternative = run(omega, opts, Some((axis, &fu)))?;
    let difference = (standard.value - alternative.value).abs();
    Ok(IndependenceReport { standard, alternative, difference })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ctower::CModel;
    use crate::parse::parse_poly;
    use crate::poly::rat;
    use crate::singfunc::SingFunc;

    fn c2(coeff: &str) -> EForm {
        let m = CModel::new(2, &[0, 1]).unwrap();
        let f = SingFunc::from_poly(parse_poly(coeff, m.vars()).unwrap());
        EForm::from_terms(m.frame(), 2, vec![(vec![0, 1], f)]).unwrap()
    }

    #[test]
    fn worked_volumes() {
        let o = LiouvilleOptions::default();
        let area = liouville_volume(&c2("x*y"), &o).unwrap();
        assert!((area.value - 4.0).abs() < 1e-9);
        let odd = liouville_volume(&c2("x"), &o).unwrap();
        assert!(odd.value.abs() < 1e-8);
        let w = c2("x*y + x^3*y^3");
        let v = liouville_volume(&w, &o).unwrap();
        assert!((v.value - 40.0 / 9.0).abs() < 1e-6, "{v:?}");
        assert_eq!(taylor_split_volume(&w).unwrap(), rat(40, 9));
        assert_eq!(taylor_split_volume(&c2("x")).unwrap(), rat(0, 1));
    }

    #[test]
    fn alternative_defining_function() {
        let o = LiouvilleOptions::default();
        let w = c2("x*y + x^3*y^3");
        let h = parse_poly("x + 3/10*x*y^2", w.vars()).unwrap();
        let r = defining_function_independence(&w, 0, &h, &o).unwrap();
        assert!(r.difference < 1e-4, "{r:?}");
        let bad = parse_poly("x*y", w.vars()).unwrap();
        assert!(defining_function_independence(&w, 0, &bad, &o).is_err());
    }
}
