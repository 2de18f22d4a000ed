use std::sync::Arc;

use proptest::prelude::*;
use unitary_sandwich::cli::parse_ring_spec;
use unitary_sandwich::formring::{Elem, FiniteRing, FormRing};
use unitary_sandwich::localize::Localization;
use unitary_sandwich::unitary::{Matrix, Method, UnitaryContext};

fn z4(n: usize) -> Arc<UnitaryContext> {
    let r = Arc::new(FiniteRing::zmod(4).unwrap());
    let fr = FormRing::new(r, 1, [0, 2].into_iter().collect()).unwrap();
    Arc::new(UnitaryContext::new(Arc::new(fr), n).unwrap())
}

fn z6() -> Arc<UnitaryContext> {
    let r = Arc::new(FiniteRing::zmod(6).unwrap());
    let fr = FormRing::new(r, 1, [0, 3].into_iter().collect()).unwrap();
    Arc::new(UnitaryContext::new(Arc::new(fr), 3).unwrap())
}

fn word(c: &UnitaryContext, gens: &[Matrix], picks: &[usize]) -> Matrix {
    if gens.is_empty() {
        return c.identity();
    }
    picks.iter().fold(c.identity(), |acc, &k| c.mul(&acc, &gens[k % gens.len()]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn elementary_words_are_unitary(picks in prop::collection::vec(0usize..1000, 1..24)) {
        let c = z4(3);
        let gens: Vec<Matrix> = c.elementary_roots().into_iter().map(|(_, m)| m).collect();
        let m = word(&c, &gens, &picks);
        for k in Method::ALL {
            prop_assert_eq!(c.is_unitary(&m, k), Ok(true));
        }
        prop_assert!(c.is_identity(&c.mul(&m, &c.block_inverse(&m))));
        prop_assert_eq!(c.block_inverse(&m), c.entry_law_inverse(&m));
    }

    #[test]
    fn congruence_subgroups_are_normalized_by_elementary_matrices(
        level in 0usize..16,
        inner in prop::collection::vec(0usize..1000, 1..8),
        outer in prop::collection::vec(0usize..1000, 0..8),
    ) {
        let c = z4(3);
        let ideals = c.form_ring().form_ideals();
        let fi = ideals[level % ideals.len()];
        let roots: Vec<Matrix> = c.level_roots(fi.ideal, fi.gamma).into_iter().map(|(_, m)| m).collect();
        let gens: Vec<Matrix> = c.elementary_roots().into_iter().map(|(_, m)| m).collect();
        let x = word(&c, &roots, &inner);
        let g = word(&c, &gens, &outer);
        prop_assert!(c.in_principal_congruence(&x, &fi).unwrap());
        prop_assert!(c.in_principal_congruence(&c.conjugate(&g, &x), &fi).unwrap());
        // [g, x] ∈ U((I, Γ)) for any g since x is
        prop_assert!(c.in_principal_congruence(&c.commutator(&g, &x), &fi).unwrap());
    }

    #[test]
    fn commutator_inverse_swaps_arguments(
        a in prop::collection::vec(0usize..1000, 1..8),
        b in prop::collection::vec(0usize..1000, 1..8),
    ) {
        let c = z4(2);
        let gens: Vec<Matrix> = c.elementary_roots().into_iter().map(|(_, m)| m).collect();
        let (g, h) = (word(&c, &gens, &a), word(&c, &gens, &b));
        prop_assert!(c.is_identity(&c.mul(&c.commutator(&g, &h), &c.commutator(&h, &g))));
    }

    #[test]
    fn localization_map_is_a_homomorphism(
        which in 0usize..2,
        picks in prop::collection::vec(0usize..1000, 1..12),
        more in prop::collection::vec(0usize..1000, 1..12),
    ) {
        let c = z6();
        let maxima = [[0u8, 3].into_iter().collect(), [0u8, 2, 4].into_iter().collect()];
        let loc = Localization::at(c.clone(), c.ring().all(), maxima[which]).unwrap();
        let gens: Vec<Matrix> = c.elementary_roots().into_iter().map(|(_, m)| m).collect();
        let (g, h) = (word(&c, &gens, &picks), word(&c, &gens, &more));
        let t = loc.target();
        prop_assert_eq!(loc.map_matrix(&c.mul(&g, &h)), t.mul(&loc.map_matrix(&g), &loc.map_matrix(&h)));
        prop_assert_eq!(t.is_unitary(&loc.map_matrix(&g), Method::Entries), Ok(true));
    }

    #[test]
    fn ring_specs_for_cyclic_rings(m in 2usize..=12, lambda in 0u64..12) {
        let text = format!("ring zmod {m}\nlambda {lambda}\nLambda min\n");
        let l = lambda as usize;
        let valid = l < m && (l * l) % m == 1 % m;
        match parse_ring_spec(&text) {
            Ok(spec) => {
                prop_assert!(valid);
                prop_assert_eq!(spec.form_ring.lambda() as u64, lambda);
                prop_assert!(spec.form_ring.validate().is_empty());
            }
            Err(_) => prop_assert!(!valid),
        }
    }

    #[test]
    fn ring_spec_elements_out_of_range_are_rejected(m in 2usize..=8, x in 0u8..16) {
        let text = format!("ring zmod {m}\nlambda 1\nLambda {{0, {x}}}\n");
        if x as usize >= m {
            prop_assert!(parse_ring_spec(&text).is_err());
        }
    }
}

#[test]
fn elem_type_is_byte_sized() {
    assert_eq!(std::mem::size_of::<Elem>(), 1);
}
