//! Stabilization and representative checks on every shipped graded complex.

mod support;

use ecalc_core::cohomology::{cohom_dims, elliptic_bivector, ComplexKind, GradedCohomReport, GradedComplex};
use support::shipped_frames;

const N: i64 = 8;

/// Degree cut-off; three-variable blocks grow fast.
fn cutoff(dim: usize) -> i64 {
    if dim >= 3 { 5 } else { N }
}

fn check_representatives(cx: &GradedComplex, rep: &GradedCohomReport) {
    assert!(rep.all_verified(), "{}", rep.complex);
    for b in &rep.blocks {
        for r in &b.representatives {
            assert!(cx.differential(r).unwrap().is_zero(), "{r} is not closed");
        }
        assert_eq!(cx.class_rank(&b.representatives, b.k, b.d).unwrap(), b.dim, "H^{{{},{}}}", b.k, b.d);
    }
}

#[test]
fn e_cohomology_vanishes_in_positive_degree() {
    let mut seen = 0;
    // a foliation's leaf-constant functions (here ℝ[z]) sit in every degree
    for f in shipped_frames().into_iter().filter(|f| f.rank() == f.dim()) {
        let Ok(cx) = GradedComplex::new(&f, ComplexKind::EForms) else { continue };
        seen += 1;
        let rep = cohom_dims(&f, ComplexKind::EForms, cutoff(f.dim())).unwrap();
        for b in rep.blocks.iter().filter(|b| b.d >= 1) {
            assert_eq!(b.dim, 0, "{}: H^{{{},{}}} ≠ 0", f.describe(), b.k, b.d);
        }
        for (k, &s) in rep.stable_from.iter().enumerate() {
            assert!(s <= cx.min_degree(k).max(1), "{}: stable from {s} at level {k}", f.describe());
        }
        check_representatives(&cx, &rep);
    }
    assert!(seen >= 6);
}

#[test]
fn poisson_cohomology_of_pi_e_vanishes_from_degree_three() {
    let f = shipped_frames().into_iter().next().unwrap();
    let pi = elliptic_bivector(f.vars()).unwrap();
    let cx = GradedComplex::new(&f, ComplexKind::Lichnerowicz(pi.clone())).unwrap();
    let rep = cohom_dims(&f, ComplexKind::Lichnerowicz(pi), 12).unwrap();
    for b in rep.blocks.iter().filter(|b| b.d >= 3) {
        assert_eq!(b.dim, 0, "H^{{{},{}}} ≠ 0", b.k, b.d);
    }
    assert_eq!(rep.totals, vec![1, 2, 2]);
    check_representatives(&cx, &rep);
}

#[test]
fn rank_nullity_in_reports() {
    for f in shipped_frames() {
        let Ok(cx) = GradedComplex::new(&f, ComplexKind::EForms) else { continue };
        let rep = cohom_dims(&f, ComplexKind::EForms, cutoff(f.dim())).unwrap();
        for b in &rep.blocks {
            let m = cx.block(b.k, b.d).unwrap();
            assert_eq!(b.dim_cochains, m.rank() + m.kernel().len());
            assert_eq!(b.rank_out, m.rank());
            assert_eq!(b.dim, b.dim_cochains - b.rank_out - b.rank_in);
        }
    }
}
