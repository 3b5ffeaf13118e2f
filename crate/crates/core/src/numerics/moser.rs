//! The Moser path: X_t with ι_{X_t}ω_t = −μ on ω_t = (1−t)ω0 + tω1, its
//! exact frame solve, a numeric field for flows, and pullback checks.
//!
//! With W_ij = ω_t(e_i, e_j) the contraction is (ι_X ω)_j = Σ_i X_i W_ij,
//! so the defining equation reads W·X = μ.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::One;

use super::dense::{mat_mul, solve};
use super::fastpoly::{FastPoly, FastSing};
use super::flow::{integrate_flow, FlowOptions, FlowResult, TimeDependentField};
use crate::eforms::{same_frame, DxForm, EForm, NondegOptions};
use crate::eframe::EFrame;
use crate::error::{Error, Result};
use crate::ring;
use crate::singfunc::SingFunc;

fn check_shapes(w0: &EForm, w1: &EForm, mu: &EForm) -> Result<()> {
    if !same_frame(w0.frame(), w1.frame()) || !same_frame(w0.frame(), mu.frame()) {
        return Err(Error::FrameMismatch);
    }
    for (f, d) in [(w0, 2), (w1, 2), (mu, 1)] {
        if f.degree() != d {
            return Err(Error::DegreeMismatch { expected: d, found: f.degree() });
        }
    }
    Ok(())
}

/// Whether dμ = ω1 − ω0 holds exactly.
pub fn is_primitive(w0: &EForm, w1: &EForm, mu: &EForm) -> Result<bool> {
    check_shapes(w0, w1, mu)?;
    Ok(mu.ederiv().sub(&w1.sub(w0)?)?.is_zero())
}

/// Exact frame coefficients of X_t.
pub fn moser_vector_field(w0: &EForm, w1: &EForm, mu: &EForm, t: &BigRational) -> Result<Vec<SingFunc>> {
    if !is_primitive(w0, w1, mu)? {
        return Err(Error::NotAPrimitive);
    }
    let wt = w0.scale_rat(&(BigRational::one() - t)).add(&w1.scale_rat(t))?;
    if !wt.nondeg_check(&NondegOptions::default())?.is_nondegenerate() {
        return Err(Error::Degenerate(alloc::format!("ω_t is degenerate at t = {t}")));
    }
    let frame = w0.frame();
    let vars = w0.vars();
    let m = wt.matrix()?;
    let r = m.len();
    let det = ring::det(&m).unwrap_or_else(|| SingFunc::one(vars));
    let (unit, factors) = frame
        .factor_over_singular_set(det.numerator())
        .map_err(|_| Error::NonUnitDeterminant(alloc::format!("{det}")))?;
    let inv_det = SingFunc::new(det.denominator_poly().scale(&unit.recip()), factors)?;
    let one = SingFunc::one(vars);
    let b: Vec<SingFunc> = (0..r).map(|i| mu.coeff_of(&[i])).collect();
    let mut x = Vec::with_capacity(r);
    for i in 0..r {
        let mut s = SingFunc::zero(vars);
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                s = &s + &(&ring::cofactor(&m, j, i, &one) * bj);
            }
        }
        x.push(&s * &inv_det);
    }
    Ok(x)
}

/// Numeric X_t, solved pointwise in the frame and anchored.
#[derive(Clone, Debug)]
pub struct MoserField {
    frame: Arc<EFrame>,
    w0: Vec<Vec<FastSing>>,
    w1: Vec<Vec<FastSing>>,
    dw0: Vec<Vec<Vec<FastSing>>>,
    dw1: Vec<Vec<Vec<FastSing>>>,
    mu: Vec<FastSing>,
    dmu: Vec<Vec<FastSing>>,
    gens: Vec<Vec<FastPoly>>,
    dgens: Vec<Vec<Vec<FastPoly>>>,
}

fn compile_matrix(m: &[Vec<SingFunc>]) -> Vec<Vec<FastSing>> {
    m.iter().map(|r| r.iter().map(FastSing::new).collect()).collect()
}

fn eval_matrix(m: &[Vec<FastSing>], x: &[f64]) -> Result<Vec<Vec<f64>>> {
    m.iter().map(|r| r.iter().map(|f| f.eval(x)).collect()).collect()
}

impl MoserField {
    pub fn new(w0: &EForm, w1: &EForm, mu: &EForm) -> Result<Self> {
        check_shapes(w0, w1, mu)?;
        let frame = w0.frame().clone();
        let n = frame.dim();
        let r = frame.rank();
        let m0 = w0.matrix()?;
        let m1 = w1.matrix()?;
        let partials = |m: &[Vec<SingFunc>]| -> Vec<Vec<Vec<FastSing>>> {
            (0..n).map(|k| m.iter().map(|row| row.iter().map(|f| FastSing::new(&f.partial(k))).collect()).collect()).collect()
        };
        let muc: Vec<SingFunc> = (0..r).map(|i| mu.coeff_of(&[i])).collect();
        let gens: Vec<Vec<FastPoly>> = frame.generators().iter().map(|g| g.iter().map(FastPoly::new).collect()).collect();
        let dgens = frame
            .generators()
            .iter()
            .map(|g| g.iter().map(|p| (0..n).map(|k| FastPoly::new(&p.partial(k))).collect()).collect())
            .collect();
        Ok(MoserField {
            w0: compile_matrix(&m0),
            w1: compile_matrix(&m1),
            dw0: partials(&m0),
            dw1: partials(&m1),
            mu: muc.iter().map(FastSing::new).collect(),
            dmu: (0..n).map(|k| muc.iter().map(|f| FastSing::new(&f.partial(k))).collect()).collect(),
            gens,
            dgens,
            frame,
        })
    }

    pub fn frame(&self) -> &Arc<EFrame> {
        &self.frame
    }

    fn w_at(&self, a: &[Vec<FastSing>], b: &[Vec<FastSing>], t: f64, x: &[f64]) -> Result<Vec<Vec<f64>>> {
        let m0 = eval_matrix(a, x)?;
        let m1 = eval_matrix(b, x)?;
        Ok(m0.iter().zip(&m1).map(|(r0, r1)| r0.iter().zip(r1).map(|(p, q)| (1.0 - t) * p + t * q).collect()).collect())
    }

    /// Frame coefficients of X_t at x.
    pub fn frame_coeffs(&self, t: f64, x: &[f64]) -> Result<Vec<f64>> {
        let w = self.w_at(&self.w0, &self.w1, t, x)?;
        let mu: Vec<f64> = self.mu.iter().map(|f| f.eval(x)).collect::<Result<_>>()?;
        solve(&w, &mu).ok_or_else(|| Error::Degenerate("ω_t is singular here".into()))
    }
}

impl TimeDependentField for MoserField {
    fn dim(&self) -> usize {
        self.frame.dim()
    }

    fn eval(&self, t: f64, x: &[f64]) -> Result<Vec<f64>> {
        let c = self.frame_coeffs(t, x)?;
        let n = self.dim();
        let mut y = vec![0.0; n];
        for (a, ca) in c.iter().enumerate() {
            for (j, yj) in y.iter_mut().enumerate() {
                *yj += ca * self.gens[a][j].eval(x);
            }
        }
        Ok(y)
    }

    fn jacobian(&self, t: f64, x: &[f64]) -> Result<Vec<Vec<f64>>> {
        let n = self.dim();
        let w = self.w_at(&self.w0, &self.w1, t, x)?;
        let c = self.frame_coeffs(t, x)?;
        let mut out = vec![vec![0.0; n]; n];
        for k in 0..n {
            let dw = self.w_at(&self.dw0[k], &self.dw1[k], t, x)?;
            let rhs: Vec<f64> = self.dmu[k]
                .iter()
                .enumerate()
                .map(|(i, f)| Ok(f.eval(x)? - dw[i].iter().zip(&c).map(|(a, b)| a * b).sum::<f64>()))
                .collect::<Result<_>>()?;
            let dc = solve(&w, &rhs).ok_or_else(|| Error::Degenerate("ω_t is singular here".into()))?;
            for (a, ca) in c.iter().enumerate() {
                for (j, row) in out.iter_mut().enumerate() {
                    row[k] += dc[a] * self.gens[a][j].eval(x) + ca * self.dgens[a][j][k].eval(x);
                }
            }
        }
        Ok(out)
    }
}

/// Ambient 2-form as an antisymmetric matrix of compiled coefficients.
struct AmbientTwoForm(Vec<Vec<Option<(f64, FastSing)>>>);

impl AmbientTwoForm {
    fn new(w: &DxForm, n: usize) -> Self {
        let mut m: Vec<Vec<Option<(f64, FastSing)>>> = (0..n).map(|_| (0..n).map(|_| None).collect()).collect();
        for (b, c) in w.terms() {
            let v = b.to_vec();
            let f = FastSing::new(c);
            m[v[0]][v[1]] = Some((1.0, f.clone()));
            m[v[1]][v[0]] = Some((-1.0, f));
        }
        AmbientTwoForm(m)
    }

    fn eval(&self, x: &[f64]) -> Result<Vec<Vec<f64>>> {
        self.0
            .iter()
            .map(|r| r.iter().map(|e| e.as_ref().map_or(Ok(0.0), |(s, f)| Ok(s * f.eval(x)?))).collect())
            .collect()
    }
}

/// 5 values per axis, all off the coordinate hyperplanes.
pub fn default_check_points(dim: usize) -> Vec<Vec<f64>> {
    const VALUES: [f64; 5] = [-0.75, -0.35, 0.25, 0.55, 0.85];
    let total = 5usize.pow(dim as u32);
    (0..total)
        .map(|mut idx| {
            (0..dim)
                .map(|_| {
                    let v = VALUES[idx % 5];
                    idx /= 5;
                    v
                })
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct MoserReport {
    pub max_residual: f64,
    pub residuals: Vec<f64>,
    /// dμ = ω1 − ω0 held exactly. The check still runs when it fails, which
    /// is how a wrong primitive shows up as a large residual.
    pub primitive_ok: bool,
    pub flows: Vec<FlowResult>,
}

/// Max-entry residual of ρ₁*ω1 − ω0 at one point.
pub fn pullback_residual(field: &MoserField, a0: &DxForm, a1: &DxForm, p: &[f64], steps: usize) -> Result<(f64, FlowResult)> {
    let n = field.dim();
    for z in field.frame().z_locus() {
        if z.eval_f64(p).abs() < 1e-12 {
            return Err(Error::OnSingularLocus(p.to_vec()));
        }
    }
    let mut flow = integrate_flow(field, p, &FlowOptions { steps, ..Default::default() })?;
    let q = flow.end_point().to_vec();
    let j = flow.end_jacobian().to_vec();
    let m1 = AmbientTwoForm::new(a1, n).eval(&q).map_err(|_| Error::OnSingularLocus(q.clone()))?;
    let m0 = AmbientTwoForm::new(a0, n).eval(p).map_err(|_| Error::OnSingularLocus(p.to_vec()))?;
    let jt: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|k| j[k][i]).collect()).collect();
    let pulled = mat_mul(&jt, &mat_mul(&m1, &j));
    let r = pulled.iter().flatten().zip(m0.iter().flatten()).fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs()));
    flow.max_residual = Some(r);
    Ok((r, flow))
}

pub fn verify_moser(w0: &EForm, w1: &EForm, mu: &EForm, points: &[Vec<f64>], steps: usize) -> Result<MoserReport> {
    let primitive_ok = is_primitive(w0, w1, mu)?;
    let field = MoserField::new(w0, w1, mu)?;
    let a0 = w0.to_dx()?;
    let a1 = w1.to_dx()?;
    let mut residuals = Vec::with_capacity(points.len());
    let mut flows = Vec::with_capacity(points.len());
    for p in points {
        let (r, f) = pullback_residual(&field, &a0, &a1, p, steps)?;
        residuals.push(r);
        flows.push(f);
    }
    let max_residual = residuals.iter().cloned().fold(0.0, f64::max);
    Ok(MoserReport { max_residual, residuals, primitive_ok, flows })
}

/// Residuals below this are treated as roundoff and carry no order information.
pub const ROUNDOFF_FLOOR: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub steps: Vec<usize>,
    pub residuals: Vec<f64>,
    /// Observed orders between successive step counts whose residuals are
    /// both above the roundoff floor.
    pub orders: Vec<f64>,
    /// Smallest of `orders`; `None` when no pair is above the floor.
    pub observed_order: Option<f64>,
    /// Every residual is at roundoff: the integrator is exact on this flow.
    pub at_roundoff: bool,
}

pub fn moser_convergence(w0: &EForm, w1: &EForm, mu: &EForm, points: &[Vec<f64>], steps: &[usize]) -> Result<ConvergenceReport> {
    let mut residuals = Vec::new();
    for &s in steps {
        residuals.push(verify_moser(w0, w1, mu, points, s)?.max_residual);
    }
    let orders: Vec<f64> = residuals
        .windows(2)
        .zip(steps.windows(2))
        .filter(|(r, _)| r[0] > ROUNDOFF_FLOOR && r[1] > ROUNDOFF_FLOOR)
        .map(|(r, s)| libm::log(r[0] / r[1]) / libm::log(s[1] as f64 / s[0] as f64))
        .collect();
    let observed_order = orders.iter().cloned().reduce(f64::min);
    let at_roundoff = residuals.iter().all(|r| *r <= ROUNDOFF_FLOOR);
    Ok(ConvergenceReport { steps: steps.to_vec(), residuals, orders, observed_order, at_roundoff })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eframe::FrameKind;
    use crate::parse::parse_poly;
    use crate::poly::{int, rat};

    fn setup() -> (EForm, EForm, EForm) {
        let fr = Arc::new(EFrame::build_standard(FrameKind::B { axis: 0 }, 2).unwrap());
        let v = fr.vars().clone();
        let one = SingFunc::one(&v);
        let w0 = EForm::from_terms(&fr, 2, vec![(vec![0, 1], one.clone())]).unwrap();
        let w1 = w0.scale_rat(&int(2));
        let mu = EForm::from_terms(&fr, 1, vec![(vec![0], SingFunc::from_poly(parse_poly("-y", &v).unwrap()))]).unwrap();
        (w0, w1, mu)
    }

    #[test]
    fn worked_field_is_exact() {
        let (w0, w1, mu) = setup();
        let v = w0.vars().clone();
        for t in [rat(0, 1), rat(1, 2), rat(1, 1)] {
            let x = moser_vector_field(&w0, &w1, &mu, &t).unwrap();
            assert!(x[0].is_zero());
            let expect = parse_poly("-y", &v).unwrap().scale(&(BigRational::one() + &t).recip());
            assert_eq!(x[1], SingFunc::from_poly(expect));
        }
        let zero = EForm::zero(w0.frame(), 1);
        let x = moser_vector_field(&w0, &w0, &zero, &rat(1, 3)).unwrap();
        assert!(x.iter().all(|c| c.is_zero()));
        assert!(matches!(moser_vector_field(&w0, &w1, &zero, &rat(0, 1)), Err(Error::NotAPrimitive)));
    }

    #[test]
    fn worked_pullback_and_wrong_primitive() {
        let (w0, w1, mu) = setup();
        let pts = default_check_points(2);
        let good = verify_moser(&w0, &w1, &mu, &pts, 1000).unwrap();
        assert!(good.primitive_ok && good.max_residual < 1e-6, "{}", good.max_residual);
        let bad = verify_moser(&w0, &w1, &mu.scale_rat(&int(2)), &pts, 1000).unwrap();
        assert!(!bad.primitive_ok && bad.residuals.iter().all(|r| *r > 0.1));
        let same = verify_moser(&w0, &w0, &EForm::zero(w0.frame(), 1), &pts, 50).unwrap();
        assert!(same.max_residual < 1e-12);
    }

    #[test]
    fn rk4_is_exact_on_the_worked_flow() {
        // y0/(1+t) is reproduced by RK4 to roundoff at any step count
        let (w0, w1, mu) = setup();
        let r = moser_convergence(&w0, &w1, &mu, &default_check_points(2), &[4, 8, 16, 32]).unwrap();
        assert!(r.at_roundoff && r.observed_order.is_none(), "{r:?}");
    }

    #[test]
    fn fourth_order_on_a_nonlinear_flow() {
        let (w0, _, _) = setup();
        let fr = w0.frame().clone();
        let v = fr.vars().clone();
        let w1 = EForm::from_terms(&fr, 2, vec![(vec![0, 1], SingFunc::from_poly(parse_poly("1 + y^2", &v).unwrap()))]).unwrap();
        let mu = EForm::from_terms(&fr, 1, vec![(vec![0], SingFunc::from_poly(parse_poly("-1/3*y^3", &v).unwrap()))]).unwrap();
        assert!(is_primitive(&w0, &w1, &mu).unwrap());
        let r = moser_convergence(&w0, &w1, &mu, &default_check_points(2), &[4, 8, 16, 32]).unwrap();
        assert!(!r.at_roundoff && r.orders.len() == 3, "{r:?}");
        assert!(r.observed_order.unwrap() >= 3.5, "{r:?}");
    }

    #[test]
    fn numeric_jacobian_matches_differences() {
        let (w0, w1, mu) = setup();
        let f = MoserField::new(&w0, &w1, &mu).unwrap();
        let (t, x) = (0.3, [0.4, -0.6]);
        let j = f.jacobian(t, &x).unwrap();
        let h = 1e-6;
        for k in 0..2 {
            let mut a = x;
            let mut b = x;
            a[k] += h;
            b[k] -= h;
            let (fa, fb) = (f.eval(t, &a).unwrap(), f.eval(t, &b).unwrap());
            for i in 0..2 {
                assert!(((fa[i] - fb[i]) / (2.0 * h) - j[i][k]).abs() < 1e-8);
            }
        }
    }
}
