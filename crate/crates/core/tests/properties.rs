//! Property suites over random inputs, 128 cases each.

mod common;

use common::suites;

const CASES: u32 = 128;

macro_rules! suite_tests {
    ($($name:ident),* $(,)?) => {
        $(
            #[test]
            fn $name() {
                if let Err(e) = suites::$name(CASES) {
                    panic!("{e}");
                }
            }
        )*
    };
}

suite_tests!(
    ring_axioms,
    wedge_is_graded_commutative,
    d_squares_to_zero,
    dw_wedge_squares_to_zero,
    supertrace_is_graded_cyclic,
    factorization_curvature_identity,
    hom_differential_squares_to_zero,
    local_chern_is_dw_closed,
    local_chern_is_additive,
    shift_negates_local_chern,
    tensor_of_koszul_pairs_is_wedge_of_factors,
    total_d_squares_to_zero,
    cech_chern_is_additive,
    cech_components_are_frame_independent,
);
