//! E-structures: generator vector fields, involutivity and structure
//! constants, the dual coframe, and the standard catalogue of frames.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::poly::{monomials_of_degree, Monomial, Poly, Vars};
use crate::ring;
use crate::singfunc::SingFunc;

/// Ambient vector field `Σ c_i ∂/∂x_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorField {
    coeffs: Vec<SingFunc>,
}

impl VectorField {
    pub fn new(coeffs: Vec<SingFunc>) -> Self {
        VectorField { coeffs }
    }

    pub fn from_polys(coeffs: Vec<Poly>) -> Self {
        VectorField { coeffs: coeffs.into_iter().map(SingFunc::from_poly).collect() }
    }

    pub fn zero(vars: &Vars) -> Self {
        VectorField { coeffs: vec![SingFunc::zero(vars); vars.len()] }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[SingFunc] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &SingFunc {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(SingFunc::is_zero)
    }

    /// Lie bracket `[self, other]`.
    pub fn bracket(&self, other: &VectorField) -> VectorField {
        let coeffs = (0..self.dim())
            .map(|m| &apply_vf(self, &other.coeffs[m]) - &apply_vf(other, &self.coeffs[m]))
            .collect();
        VectorField { coeffs }
    }

    pub fn scale(&self, f: &SingFunc) -> VectorField {
        VectorField { coeffs: self.coeffs.iter().map(|c| c * f).collect() }
    }

    pub fn add(&self, other: &VectorField) -> VectorField {
        VectorField { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn eval_f64(&self, point: &[f64]) -> Result<Vec<f64>> {
        self.coeffs.iter().map(|c| c.eval_f64(point)).collect()
    }
}

/// `V(f) = Σ V^i ∂f/∂x_i`.
pub fn apply_vf(v: &VectorField, f: &SingFunc) -> SingFunc {
    let mut acc = SingFunc::zero(f.vars());
    for (i, c) in v.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let d = f.partial(i);
        if !d.is_zero() {
            acc = &acc + &(c * &d);
        }
    }
    acc
}

fn apply_poly_field(v: &[Poly], f: &Poly) -> Poly {
    let mut acc = Poly::zero(f.vars());
    for (i, c) in v.iter().enumerate() {
        if !c.is_zero() {
            let d = f.partial(i);
            if !d.is_zero() {
                acc = &acc + &(c * &d);
            }
        }
    }
    acc
}

fn poly_bracket(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    (0..a.len()).map(|m| &apply_poly_field(a, &b[m]) - &apply_poly_field(b, &a[m])).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FrameKind {
    Full,
    B { axis: usize },
    Bk { axis: usize, k: u32 },
    C(Vec<usize>),
    Elliptic,
    Foliation(Vec<usize>),
    Custom,
}

impl FrameKind {
    pub fn label(&self) -> &'static str {
        match self {
            FrameKind::Full => "full",
            FrameKind::B { .. } => "b",
            FrameKind::Bk { .. } => "bk",
            FrameKind::C(_) => "c",
            FrameKind::Elliptic => "elliptic",
            FrameKind::Foliation(_) => "foliation",
            FrameKind::Custom => "custom",
        }
    }
}

/// Full antisymmetric table `c[i][j][k]` with `[V_i, V_j] = Σ_k c^k_ij V_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureConstants {
    table: Vec<Vec<Vec<Poly>>>,
}

impl StructureConstants {
    pub fn zero(vars: &Vars, r: usize) -> Self {
        StructureConstants { table: vec![vec![vec![Poly::zero(vars); r]; r]; r] }
    }

    pub fn rank(&self) -> usize {
        self.table.len()
    }

    /// `c^k_{ij}`.
    pub fn get(&self, i: usize, j: usize, k: usize) -> &Poly {
        &self.table[i][j][k]
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().flatten().flatten().all(Poly::is_zero)
    }

    /// Nonzero entries `(i, j, k, c)` with `i < j`.
    pub fn nonzero(&self) -> Vec<(usize, usize, usize, &Poly)> {
        let r = self.rank();
        let mut out = Vec::new();
        for i in 0..r {
            for j in i + 1..r {
                for k in 0..r {
                    let c = &self.table[i][j][k];
                    if !c.is_zero() {
                        out.push((i, j, k, c));
                    }
                }
            }
        }
        out
    }
}

/// Coefficients of the bracket in the generators, or `None` when no
/// polynomial solution of degree `<= bound` exists.
fn solve_in_span(gens: &[Vec<Poly>], target: &[Poly], bound: u32) -> Option<Vec<Poly>> {
    let vars = target[0].vars().clone();
    let n = vars.len();
    let r = gens.len();
    let mons: Vec<Monomial> = (0..=bound).flat_map(|d| monomials_of_degree(n, d)).collect();
    let mut rows: BTreeMap<(usize, Monomial), usize> = BTreeMap::new();
    let mut entries: Vec<(usize, usize, BigRational)> = Vec::new();
    let row_of = |key: (usize, Monomial), rows: &mut BTreeMap<(usize, Monomial), usize>| {
        let next = rows.len();
        *rows.entry(key).or_insert(next)
    };
    for k in 0..r {
        for (ci, nu) in mons.iter().enumerate() {
            let col = k * mons.len() + ci;
            for m in 0..n {
                for (mu, c) in gens[k][m].terms() {
                    let e: Monomial = mu.iter().zip(nu).map(|(a, b)| a + b).collect();
                    let row = row_of((m, e), &mut rows);
                    entries.push((row, col, c.clone()));
                }
            }
        }
    }
    let mut rhs_entries = Vec::new();
    for (m, t) in target.iter().enumerate() {
        for (mu, c) in t.terms() {
            let row = row_of((m, mu.clone()), &mut rows);
            rhs_entries.push((row, c.clone()));
        }
    }
    let mut a = QMatrix::zeros(rows.len(), r * mons.len());
    for (row, col, c) in entries {
        let v = a.get(row, col) + &c;
        a.set(row, col, v);
    }
    let mut b = vec![BigRational::zero(); rows.len()];
    for (row, c) in rhs_entries {
        b[row] += c;
    }
    let x = a.solve(&b)?;
    Some(
        (0..r)
            .map(|k| {
                Poly::from_terms(&vars, mons.iter().enumerate().map(|(ci, nu)| (nu.clone(), x[k * mons.len() + ci].clone())))
            })
            .collect(),
    )
}

fn max_degree(gens: &[Vec<Poly>]) -> u32 {
    gens.iter().flatten().filter_map(Poly::degree).max().unwrap_or(0)
}

/// Solves `[V_i, V_j] = Σ c^k_ij V_k` for polynomial `c` of degree at most
/// `bound` (default: degree of the bracket plus the largest generator
/// degree). Rank is not checked here; see [`generic_rank`].
pub fn check_involutive(gens: &[Vec<Poly>], bound: Option<u32>) -> Result<StructureConstants> {
    let r = gens.len();
    let Some(vars) = gens.first().and_then(|g| g.first()).map(|p| p.vars().clone()) else {
        return Ok(StructureConstants { table: Vec::new() });
    };
    let gdeg = max_degree(gens);
    let mut sc = StructureConstants::zero(&vars, r);
    for i in 0..r {
        for j in i + 1..r {
            let br = poly_bracket(&gens[i], &gens[j]);
            if br.iter().all(Poly::is_zero) {
                continue;
            }
            let d = bound.unwrap_or_else(|| br.iter().filter_map(Poly::degree).max().unwrap_or(0) + gdeg);
            let c = solve_in_span(gens, &br, d).ok_or(Error::NotInvolutive { i, j, bound: d })?;
            for (k, ck) in c.into_iter().enumerate() {
                sc.table[j][i][k] = -&ck;
                sc.table[i][j][k] = ck;
            }
        }
    }
    Ok(sc)
}

/// Rank of the generator matrix over the fraction field, estimated as the
/// maximum rank at a few fixed rational points (exact when the points are
/// generic, which these are for the polynomial sizes in use).
pub fn generic_rank(gens: &[Vec<Poly>]) -> usize {
    let Some(n) = gens.first().map(Vec::len) else { return 0 };
    let mut best = 0;
    for t in 0..4i64 {
        let point: Vec<BigRational> =
            (0..n as i64).map(|i| BigRational::new((7 + 13 * t + 5 * i * i + 3 * i).into(), (11 + 2 * i + t).into())).collect();
        let rows: Vec<Vec<BigRational>> = gens.iter().map(|g| g.iter().map(|p| p.eval_exact(&point)).collect()).collect();
        best = best.max(QMatrix::from_rows(rows).rank());
        if best == gens.len() {
            break;
        }
    }
    best
}

/// θ^k = Σ_i `a[k][i]` dx_i and dx_i = Σ_k `g[k][i]` θ^k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coframe {
    pub a: Vec<Vec<SingFunc>>,
    pub g: Vec<Vec<Poly>>,
}

impl Coframe {
    /// `A · Gᵀ == I`, checked exactly.
    pub fn check_identity(&self) -> bool {
        let n = self.a.len();
        (0..n).all(|k| {
            (0..n).all(|l| {
                let mut acc = SingFunc::zero(self.g[0][0].vars());
                for i in 0..n {
                    acc = &acc + &(&self.a[k][i] * &SingFunc::from_poly(self.g[l][i].clone()));
                }
                match acc.as_constant() {
                    Some(c) => c == if k == l { BigRational::one() } else { BigRational::zero() },
                    None => false,
                }
            })
        })
    }

    /// Numeric coframe matrix at a point.
    pub fn eval_f64(&self, point: &[f64]) -> Result<Vec<Vec<f64>>> {
        self.a.iter().map(|row| row.iter().map(|f| f.eval_f64(point)).collect()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EFrame {
    vars: Vars,
    kind: FrameKind,
    generators: Vec<Vec<Poly>>,
    singular_factors: Vec<Poly>,
    structure: StructureConstants,
    z_locus: Vec<Poly>,
}

impl EFrame {
    /// Builds one of the catalogue frames on `ℝ^dim` with standard names.
    pub fn build_standard(kind: FrameKind, dim: usize) -> Result<EFrame> {
        Self::build_standard_with(kind, Vars::standard(dim))
    }

    pub fn build_standard_with(kind: FrameKind, vars: Vars) -> Result<EFrame> {
        let n = vars.len();
        let bad = |m: &str| Err(Error::InvalidArgument(m.to_string()));
        let d = |i: usize| -> Vec<Poly> {
            let mut v = vec![Poly::zero(&vars); n];
            v[i] = Poly::one(&vars);
            v
        };
        let xd = |i: usize, k: u32| -> Vec<Poly> {
            let mut v = vec![Poly::zero(&vars); n];
            v[i] = Poly::var(&vars, i).pow(k);
            v
        };
        let x = |i: usize| Poly::var(&vars, i);
        let (gens, sing, z): (Vec<Vec<Poly>>, Vec<Poly>, Vec<Poly>) = match &kind {
            FrameKind::Full => ((0..n).map(d).collect(), vec![], vec![]),
            FrameKind::B { axis } | FrameKind::Bk { axis, .. } => {
                let k = if let FrameKind::Bk { k, .. } = kind { k } else { 1 };
                if *axis >= n || k == 0 {
                    return bad("axis out of range or k = 0");
                }
                let g = (0..n).map(|i| if i == *axis { xd(i, k) } else { d(i) }).collect();
                (g, vec![x(*axis)], vec![x(*axis)])
            }
            FrameKind::C(h) => {
                let mut h = h.clone();
                h.sort_unstable();
                h.dedup();
                if h.iter().any(|&i| i >= n) {
                    return bad("hyperplane index out of range");
                }
                let g = (0..n).map(|i| if h.contains(&i) { xd(i, 1) } else { d(i) }).collect();
                let f: Vec<Poly> = h.iter().map(|&i| x(i)).collect();
                (g, f.clone(), f)
            }
            FrameKind::Elliptic => {
                if n < 2 {
                    return bad("elliptic frame needs dim >= 2");
                }
                let mut v1 = vec![Poly::zero(&vars); n];
                v1[0] = x(0);
                v1[1] = x(1);
                let mut v2 = vec![Poly::zero(&vars); n];
                v2[0] = -x(1);
                v2[1] = x(0);
                let mut g = vec![v1, v2];
                g.extend((2..n).map(d));
                let r2 = &(&x(0) * &x(0)) + &(&x(1) * &x(1));
                (g, vec![r2.clone()], vec![r2])
            }
            FrameKind::Foliation(c) => {
                let mut c = c.clone();
                c.sort_unstable();
                c.dedup();
                if c.iter().any(|&i| i >= n) {
                    return bad("foliation coordinate out of range");
                }
                (c.into_iter().map(d).collect(), vec![], vec![])
            }
            FrameKind::Custom => return bad("custom frames are built with EFrame::custom"),
        };
        let mut f = Self::assemble(vars, kind, gens, sing, z, None)?;
        if !f.structure.is_zero() {
            // catalogue frames commute; anything else is a construction bug
            return Err(Error::InvalidArgument("catalogue frame with nonzero brackets".into()));
        }
        f.structure = StructureConstants::zero(&f.vars, f.rank());
        Ok(f)
    }

    /// Frame from explicit polynomial generators.
    pub fn custom(
        vars: Vars,
        generators: Vec<Vec<Poly>>,
        singular_factors: Vec<Poly>,
        z_locus: Vec<Poly>,
        bound: Option<u32>,
    ) -> Result<EFrame> {
        Self::assemble(vars, FrameKind::Custom, generators, singular_factors, z_locus, bound)
    }

    /// Same as [`EFrame::custom`] but keeps a catalogue label (used when a
    /// frame document names its kind).
    pub fn with_kind(
        vars: Vars,
        kind: FrameKind,
        generators: Vec<Vec<Poly>>,
        singular_factors: Vec<Poly>,
        z_locus: Vec<Poly>,
    ) -> Result<EFrame> {
        Self::assemble(vars, kind, generators, singular_factors, z_locus, None)
    }

    fn assemble(
        vars: Vars,
        kind: FrameKind,
        generators: Vec<Vec<Poly>>,
        singular_factors: Vec<Poly>,
        z_locus: Vec<Poly>,
        bound: Option<u32>,
    ) -> Result<EFrame> {
        let n = vars.len();
        if generators.len() > n || generators.iter().any(|g| g.len() != n) {
            return Err(Error::InvalidArgument("generator shape does not match the chart dimension".into()));
        }
        for p in generators.iter().flatten().chain(&singular_factors).chain(&z_locus) {
            if p.vars() != &vars {
                return Err(Error::VariableMismatch);
            }
        }
        let found = generic_rank(&generators);
        if found < generators.len() {
            return Err(Error::DegenerateGenerators { expected: generators.len(), found });
        }
        let structure = check_involutive(&generators, bound)?;
        let singular_factors = singular_factors.into_iter().map(|f| f.make_monic().0).collect();
        let f = EFrame { vars, kind, generators, singular_factors, structure, z_locus };
        f.check_tangency()?;
        Ok(f)
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn kind(&self) -> &FrameKind {
        &self.kind
    }

    pub fn generators(&self) -> &[Vec<Poly>] {
        &self.generators
    }

    pub fn generator(&self, a: usize) -> VectorField {
        VectorField::from_polys(self.generators[a].clone())
    }

    pub fn singular_factors(&self) -> &[Poly] {
        &self.singular_factors
    }

    pub fn z_locus(&self) -> &[Poly] {
        &self.z_locus
    }

    pub fn structure(&self) -> &StructureConstants {
        &self.structure
    }

    pub fn is_commuting(&self) -> bool {
        self.structure.is_zero()
    }

    /// `V_a(f)` for a polynomial `f`.
    pub fn apply_generator(&self, a: usize, f: &Poly) -> Poly {
        apply_poly_field(&self.generators[a], f)
    }

    pub fn apply_generator_sing(&self, a: usize, f: &SingFunc) -> SingFunc {
        let mut acc = SingFunc::zero(&self.vars);
        for (i, c) in self.generators[a].iter().enumerate() {
            if !c.is_zero() {
                acc = &acc + &(&SingFunc::from_poly(c.clone()) * &f.partial(i));
            }
        }
        acc
    }

    /// Bracket of two generators as ambient polynomial fields.
    pub fn generator_bracket(&self, a: usize, b: usize) -> Vec<Poly> {
        poly_bracket(&self.generators[a], &self.generators[b])
    }

    /// Every generator preserves the ideal of every Z component.
    pub fn check_tangency(&self) -> Result<()> {
        for h in &self.z_locus {
            for (a, g) in self.generators.iter().enumerate() {
                let vh = apply_poly_field(g, h);
                if !vh.is_zero() && vh.div_exact(h).is_none() {
                    return Err(Error::TangencyViolation { component: h.to_string(), generator: a });
                }
            }
        }
        Ok(())
    }

    /// Anchor: frame coefficients `Σ X^a V_a` to an ambient field.
    pub fn anchor(&self, x: &[SingFunc]) -> VectorField {
        let n = self.dim();
        let mut out = vec![SingFunc::zero(&self.vars); n];
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for m in 0..n {
                let g = &self.generators[a][m];
                if !g.is_zero() {
                    out[m] = &out[m] + &(xa * &SingFunc::from_poly(g.clone()));
                }
            }
        }
        VectorField::new(out)
    }

    /// Generator matrix at a numeric point, rows = generators.
    pub fn generators_f64(&self, point: &[f64]) -> Vec<Vec<f64>> {
        self.generators.iter().map(|g| g.iter().map(|p| p.eval_f64(point)).collect()).collect()
    }

    /// Jacobi consistency of the structure constants:
    /// Σ_cyclic (Σ_l c^l_ij c^m_lk − V_k(c^m_ij)) = 0 for all i, j, k, m.
    pub fn jacobi_holds(&self) -> bool {
        let r = self.rank();
        if self.structure.is_zero() {
            return true;
        }
        let c = |i: usize, j: usize, k: usize| self.structure.get(i, j, k);
        for i in 0..r {
            for j in i + 1..r {
                for k in j + 1..r {
                    for m in 0..r {
                        let mut acc = Poly::zero(&self.vars);
                        for (a, b, cc) in [(i, j, k), (j, k, i), (k, i, j)] {
                            for l in 0..r {
                                acc = &acc + &(c(a, b, l) * c(l, cc, m));
                            }
                            acc = &acc - &self.apply_generator(cc, c(a, b, m));
                        }
                        if !acc.is_zero() {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Dual coframe `A = G^{-T}` with denominators in the declared set.
    pub fn coframe_in_dx(&self) -> Result<Coframe> {
        let (n, r) = (self.dim(), self.rank());
        if r != n {
            return Err(Error::RankDeficient { rank: r, dim: n });
        }
        let g = &self.generators;
        let det = ring::det(g).unwrap_or_else(|| Poly::one(&self.vars));
        let (unit, factors) = self.factor_over_singular_set(&det)?;
        let one = Poly::one(&self.vars);
        let mut a = vec![vec![SingFunc::zero(&self.vars); n]; n];
        for (k, row) in a.iter_mut().enumerate() {
            for (i, slot) in row.iter_mut().enumerate() {
                let cof = ring::cofactor(g, k, i, &one);
                *slot = SingFunc::new(cof.scale(&unit.recip()), factors.clone())?;
            }
        }
        Ok(Coframe { a, g: g.clone() })
    }

    /// Writes `p = unit · Π f^e` over the declared factors.
    pub fn factor_over_singular_set(&self, p: &Poly) -> Result<(BigRational, Vec<(Poly, u32)>)> {
        if p.is_zero() {
            return Err(Error::DeterminantOutsideSingularSet("0".into()));
        }
        let mut rest = p.clone();
        let mut out = Vec::new();
        for f in &self.singular_factors {
            let mut e = 0;
            while let Some(q) = rest.div_exact(f) {
                if f.degree() == Some(0) {
                    break;
                }
                rest = q;
                e += 1;
            }
            if e > 0 {
                out.push((f.clone(), e));
            }
        }
        match rest.as_constant() {
            Some(c) if !c.is_zero() => Ok((c, out)),
            _ => Err(Error::DeterminantOutsideSingularSet(p.to_string())),
        }
    }

    /// Per-generator weights `1 - deg V_a` when every generator has
    /// homogeneous coefficients of a single degree.
    pub fn generator_weights(&self) -> Option<Vec<i64>> {
        self.generators
            .iter()
            .map(|g| {
                let mut deg = None;
                for p in g.iter().filter(|p| !p.is_zero()) {
                    let d = p.homogeneous_degree()?;
                    match deg {
                        None => deg = Some(d),
                        Some(e) if e != d => return None,
                        _ => {}
                    }
                }
                Some(1 - deg.unwrap_or(1) as i64)
            })
            .collect()
    }

    pub fn describe(&self) -> String {
        let mut s = alloc::format!("{} frame on {:?}, rank {}:", self.kind.label(), self.vars, self.rank());
        for g in &self.generators {
            s.push_str("\n  ");
            let mut first = true;
            for (i, p) in g.iter().enumerate() {
                if p.is_zero() {
                    continue;
                }
                if !first {
                    s.push_str(" + ");
                }
                first = false;
                s.push_str(&alloc::format!("({p})*d/d{}", self.vars.names()[i]));
            }
            if first {
                s.push('0');
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::poly::int;

    fn p(s: &str, v: &Vars) -> Poly {
        parse_poly(s, v).unwrap()
    }

    #[test]
    fn catalogue_frames_commute() {
        let kinds = [
            (FrameKind::Full, 3),
            (FrameKind::B { axis: 0 }, 2),
            (FrameKind::Bk { axis: 1, k: 3 }, 2),
            (FrameKind::C(vec![0, 1, 2]), 3),
            (FrameKind::Elliptic, 2),
            (FrameKind::Elliptic, 3),
            (FrameKind::Foliation(vec![1]), 3),
        ];
        for (k, n) in kinds {
            let f = EFrame::build_standard(k.clone(), n).unwrap();
            for a in 0..f.rank() {
                for b in 0..f.rank() {
                    assert!(f.generator_bracket(a, b).iter().all(Poly::is_zero), "{k:?}");
                }
            }
            assert!(f.jacobi_holds());
        }
    }

    #[test]
    fn custom_commuting_pair() {
        let v = Vars::standard(2);
        let g = vec![vec![p("x", &v), p("y", &v)], vec![p("y", &v), p("0", &v)]];
        let f = EFrame::custom(v.clone(), g, vec![p("y", &v)], vec![], None).unwrap();
        assert!(f.structure().is_zero());
    }

    #[test]
    fn bracket_in_span() {
        let v = Vars::standard(1);
        let g = vec![vec![p("1", &v)], vec![p("x", &v)]];
        let sc = check_involutive(&g, None).unwrap();
        // [∂x, x∂x] = ∂x
        assert_eq!(sc.get(0, 1, 0), &p("1", &v));
        assert!(sc.get(0, 1, 1).is_zero());
        assert_eq!(sc.get(1, 0, 0), &p("-1", &v));
        assert_eq!(generic_rank(&g), 1);
    }

    #[test]
    fn non_involutive_reported() {
        // ∂x and x∂y on ℝ³ bracket to ∂y, which is not in their span
        let v = Vars::standard(3);
        let g = vec![vec![p("1", &v), p("0", &v), p("0", &v)], vec![p("0", &v), p("x", &v), p("0", &v)]];
        assert!(matches!(check_involutive(&g, None), Err(Error::NotInvolutive { i: 0, j: 1, .. })));
    }

    #[test]
    fn degenerate_generators() {
        let v = Vars::standard(2);
        let g = vec![vec![p("x", &v), p("0", &v)], vec![p("x^2", &v), p("0", &v)]];
        assert!(matches!(EFrame::custom(v, g, vec![], vec![], None), Err(Error::DegenerateGenerators { .. })));
    }

    #[test]
    fn vector_field_application() {
        let f = EFrame::build_standard(FrameKind::Elliptic, 2).unwrap();
        let v = f.vars().clone();
        let r2 = p("x^2+y^2", &v);
        assert_eq!(f.apply_generator(0, &r2), p("2*x^2+2*y^2", &v));
        assert!(f.apply_generator(1, &r2).is_zero());
        assert!(apply_vf(&f.generator(0), &SingFunc::constant(&v, int(5))).is_zero());
    }

    #[test]
    fn coframes() {
        let b = EFrame::build_standard(FrameKind::B { axis: 0 }, 2).unwrap();
        let v = b.vars().clone();
        let cf = b.coframe_in_dx().unwrap();
        assert_eq!(cf.a[0][0], SingFunc::inverse_factor(&p("x", &v), 1).unwrap());
        assert!(cf.a[0][1].is_zero());
        assert_eq!(cf.a[1][1], SingFunc::one(&v));
        assert!(cf.check_identity());

        let e = EFrame::build_standard(FrameKind::Elliptic, 2).unwrap();
        let cf = e.coframe_in_dx().unwrap();
        let r2 = p("x^2+y^2", &v);
        let q = |s: &str| SingFunc::new(p(s, &v), [(r2.clone(), 1)]).unwrap();
        assert_eq!(cf.a[0], vec![q("x"), q("y")]);
        assert_eq!(cf.a[1], vec![q("-y"), q("x")]);
        assert!(cf.check_identity());

        let full = EFrame::build_standard(FrameKind::Full, 2).unwrap();
        let cf = full.coframe_in_dx().unwrap();
        assert_eq!(cf.a[0], vec![SingFunc::one(&v), SingFunc::zero(&v)]);
        assert!(cf.check_identity());

        let fol = EFrame::build_standard(FrameKind::Foliation(vec![0]), 2).unwrap();
        assert!(matches!(fol.coframe_in_dx(), Err(Error::RankDeficient { rank: 1, dim: 2 })));
    }

    #[test]
    fn undeclared_determinant() {
        let v = Vars::standard(2);
        let g = vec![vec![p("x+1", &v), p("0", &v)], vec![p("0", &v), p("1", &v)]];
        let f = EFrame::custom(v, g, vec![], vec![], None).unwrap();
        assert!(matches!(f.coframe_in_dx(), Err(Error::DeterminantOutsideSingularSet(_))));
    }

    #[test]
    fn tangency_violation() {
        let v = Vars::standard(2);
        let g = vec![vec![p("1", &v), p("0", &v)], vec![p("0", &v), p("1", &v)]];
        let r = EFrame::custom(v.clone(), g, vec![], vec![p("x", &v)], None);
        assert!(matches!(r, Err(Error::TangencyViolation { generator: 0, .. })));
    }

    #[test]
    fn weights() {
        let e = EFrame::build_standard(FrameKind::Elliptic, 2).unwrap();
        assert_eq!(e.generator_weights(), Some(vec![0, 0]));
        let b = EFrame::build_standard(FrameKind::B { axis: 0 }, 2).unwrap();
        assert_eq!(b.generator_weights(), Some(vec![0, 1]));
        let bk = EFrame::build_standard(FrameKind::Bk { axis: 0, k: 2 }, 1).unwrap();
        assert_eq!(bk.generator_weights(), Some(vec![-1]));
    }
}
