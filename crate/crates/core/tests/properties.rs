//! Randomized invariants across the symbolic and numeric layers.

mod support;

use support::props;

macro_rules! property {
    ($($name:ident),* $(,)?) => {
        $(
            #[test]
            fn $name() {
                if let Err(e) = props::$name() {
                    panic!("{}: {e}", stringify!($name));
                }
            }
        )*
    };
}

property!(
    ring_axioms,
    parse_print,
    leibniz,
    structure_constants,
    coframe_inverse,
    d_squared,
    intrinsic_vs_frame_d,
    cartan_identity,
    interior_product,
    bivector_round_trip,
    schouten_graded,
    poisson_vs_jacobiator,
    lichnerowicz_squared,
    hamiltonian_consistency,
    residue_commutes_with_d,
    towers_are_compatible,
    z2_orderings_differ_by_sign,
    residue_routes_agree,
    compatibility_sign_law,
    block_d_squared,
    rank_nullity,
    liouville_vs_taylor,
    flow_jacobian,
    z_preservation,
);
