//! Fixed-step RK4 flows with the variational equation carried alongside.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::dense::{identity, mat_mul};
use super::fastpoly::FastSing;
use crate::eframe::EFrame;
use crate::error::{Error, Result};
use crate::singfunc::SingFunc;

/// An ambient vector field X(t, x) on a chart box.
pub trait TimeDependentField {
    fn dim(&self) -> usize;
    fn eval(&self, t: f64, x: &[f64]) -> Result<Vec<f64>>;
    /// ∂X^i/∂x_j.
    fn jacobian(&self, t: f64, x: &[f64]) -> Result<Vec<Vec<f64>>>;
}

/// φ(t) · Y(x) for a smooth ambient field Y.
#[derive(Clone, Debug)]
pub struct AmbientField {
    comps: Vec<FastSing>,
    jac: Vec<Vec<FastSing>>,
    time_factor: fn(f64) -> f64,
}

fn unit_time(_: f64) -> f64 {
    1.0
}

impl AmbientField {
    /// Anchors frame coefficients to the ambient field; every component must
    /// come out polynomial.
    pub fn from_frame(frame: &Arc<EFrame>, coeffs: &[SingFunc]) -> Result<Self> {
        if coeffs.len() != frame.rank() {
            return Err(Error::InvalidArgument("coefficient count differs from the frame rank".into()));
        }
        let v = frame.anchor(coeffs);
        let n = frame.dim();
        let mut comps = Vec::with_capacity(n);
        let mut jac = Vec::with_capacity(n);
        for c in v.coeffs() {
            if c.as_poly().is_none() {
                return Err(Error::Domain(alloc::format!("anchored component {c} is not smooth")));
            }
            comps.push(FastSing::new(c));
            jac.push((0..n).map(|j| FastSing::new(&c.partial(j))).collect());
        }
        Ok(AmbientField { comps, jac, time_factor: unit_time })
    }

    pub fn with_time_factor(mut self, f: fn(f64) -> f64) -> Self {
        self.time_factor = f;
        self
    }
}

impl TimeDependentField for AmbientField {
    fn dim(&self) -> usize {
        self.comps.len()
    }

    fn eval(&self, t: f64, x: &[f64]) -> Result<Vec<f64>> {
        let s = (self.time_factor)(t);
        self.comps.iter().map(|c| Ok(s * c.eval(x)?)).collect()
    }

    fn jacobian(&self, t: f64, x: &[f64]) -> Result<Vec<Vec<f64>>> {
        let s = (self.time_factor)(t);
        self.jac.iter().map(|r| r.iter().map(|c| Ok(s * c.eval(x)?)).collect()).collect()
    }
}

#[derive(Clone, Debug)]
pub struct FlowOptions {
    pub steps: usize,
    pub t_end: f64,
    /// Chart box [−w, w]^n; leaving it aborts the integration.
    pub half_width: f64,
}

impl Default for FlowOptions {
    fn default() -> Self {
        FlowOptions { steps: 1000, t_end: 1.0, half_width: 1.0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlowResult {
    pub times: Vec<f64>,
    pub points: Vec<Vec<f64>>,
    /// Dφ_t at each sample.
    pub jacobians: Vec<Vec<Vec<f64>>>,
    /// Filled in by pullback checks.
    pub max_residual: Option<f64>,
}

impl FlowResult {
    pub fn end_point(&self) -> &[f64] {
        self.points.last().unwrap()
    }

    pub fn end_jacobian(&self) -> &[Vec<f64>] {
        self.jacobians.last().unwrap()
    }
}

fn rhs<F: TimeDependentField + ?Sized>(f: &F, t: f64, x: &[f64], j: &[Vec<f64>]) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let reject = |e: Error| match e {
        Error::SingularPoint | Error::Degenerate(_) => Error::StepRejected { t },
        e => e,
    };
    let v = f.eval(t, x).map_err(reject)?;
    let dv = f.jacobian(t, x).map_err(reject)?;
    Ok((v, mat_mul(&dv, j)))
}

fn axpy(x: &[f64], h: f64, k: &[f64]) -> Vec<f64> {
    x.iter().zip(k).map(|(a, b)| a + h * b).collect()
}

fn maxpy(x: &[Vec<f64>], h: f64, k: &[Vec<f64>]) -> Vec<Vec<f64>> {
    x.iter().zip(k).map(|(a, b)| axpy(a, h, b)).collect()
}

pub fn integrate_flow<F: TimeDependentField + ?Sized>(field: &F, p0: &[f64], opts: &FlowOptions) -> Result<FlowResult> {
    let n = field.dim();
    if p0.len() != n || opts.steps == 0 {
        return Err(Error::InvalidArgument("bad starting point or step count".into()));
    }
    let inside = |x: &[f64]| x.iter().all(|v| v.is_finite() && v.abs() <= opts.half_width * (1.0 + 1e-12));
    if !inside(p0) {
        return Err(Error::LeftChart { t: 0.0 });
    }
    let h = opts.t_end / opts.steps as f64;
    let mut x = p0.to_vec();
    let mut j = identity(n);
    let mut out = FlowResult { times: vec![0.0], points: vec![x.clone()], jacobians: vec![j.clone()], max_residual: None };
    for s in 0..opts.steps {
        let t = s as f64 * h;
        let (k1, l1) = rhs(field, t, &x, &j)?;
        let (k2, l2) = rhs(field, t + h / 2.0, &axpy(&x, h / 2.0, &k1), &maxpy(&j, h / 2.0, &l1))?;
        let (k3, l3) = rhs(field, t + h / 2.0, &axpy(&x, h / 2.0, &k2), &maxpy(&j, h / 2.0, &l2))?;
        let (k4, l4) = rhs(field, t + h, &axpy(&x, h, &k3), &maxpy(&j, h, &l3))?;
        for i in 0..n {
            x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            for c in 0..n {
                j[i][c] += h / 6.0 * (l1[i][c] + 2.0 * l2[i][c] + 2.0 * l3[i][c] + l4[i][c]);
            }
        }
        let t1 = (s + 1) as f64 * h;
        if !inside(&x) {
            return Err(Error::LeftChart { t: t1 });
        }
        if j.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::StepRejected { t: t1 });
        }
        out.times.push(t1);
        out.points.push(x.clone());
        out.jacobians.push(j.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eframe::FrameKind;
    use crate::parse::parse_poly;
    use crate::poly::Poly;

    fn shrink(t: f64) -> f64 {
        1.0 / (1.0 + t)
    }

    fn b_frame() -> Arc<EFrame> {
        Arc::new(EFrame::build_standard(FrameKind::B { axis: 0 }, 2).unwrap())
    }

    #[test]
    fn worked_flow_halves_y() {
        let fr = b_frame();
        let v = fr.vars().clone();
        let c = [SingFunc::zero(&v), SingFunc::from_poly(parse_poly("-y", &v).unwrap())];
        let f = AmbientField::from_frame(&fr, &c).unwrap().with_time_factor(shrink);
        let r = integrate_flow(&f, &[0.4, 0.8], &FlowOptions::default()).unwrap();
        let p = r.end_point();
        assert!((p[0] - 0.4).abs() < 1e-12 && (p[1] - 0.4).abs() < 1e-6);
        let j = r.end_jacobian();
        assert!((j[0][0] - 1.0).abs() < 1e-9 && (j[1][1] - 0.5).abs() < 1e-6 && j[0][1].abs() < 1e-12);
    }

    #[test]
    fn zero_field_and_hypersurface() {
        let fr = b_frame();
        let v = fr.vars().clone();
        let z = AmbientField::from_frame(&fr, &[SingFunc::zero(&v), SingFunc::zero(&v)]).unwrap();
        let r = integrate_flow(&z, &[0.3, -0.2], &FlowOptions { steps: 10, ..Default::default() }).unwrap();
        assert_eq!(r.end_point(), &[0.3, -0.2]);
        let c = [SingFunc::from_poly(parse_poly("1 - y", &v).unwrap()), SingFunc::from_poly(parse_poly("1/2*x", &v).unwrap())];
        let f = AmbientField::from_frame(&fr, &c).unwrap();
        let r = integrate_flow(&f, &[0.0, 0.1], &FlowOptions { steps: 200, ..Default::default() }).unwrap();
        assert!(r.points.iter().all(|p| p[0].abs() < 1e-10));
    }

    #[test]
    fn leaves_chart() {
        let fr = Arc::new(EFrame::build_standard(FrameKind::Full, 1).unwrap());
        let one = SingFunc::from_poly(Poly::one(fr.vars()));
        let f = AmbientField::from_frame(&fr, &[one]).unwrap();
        assert!(matches!(integrate_flow(&f, &[0.5], &FlowOptions::default()), Err(Error::LeftChart { .. })));
    }
}
