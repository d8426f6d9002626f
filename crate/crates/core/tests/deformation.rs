use num_rational::BigRational;
use proptest::prelude::*;
use twverma::sl2_lab::{
    check_equivariance, coker_check_over_a, compare_with_sum_formula, four_term_rank_check, jantzen_layers_sl2,
    oracle_rows_agree, phi, psi, LocalRingElem, Poly,
};

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec(-6i64..=6, 0..5).prop_map(|cs| Poly::new(cs.into_iter().map(q).collect()))
}

fn ring_elem() -> impl Strategy<Value = LocalRingElem> {
    // denominators are products of (X + c) with c != 0
    (poly(), prop::collection::vec(prop_oneof![-4i64..=-1, 1i64..=4], 0..3)).prop_map(|(num, roots)| {
        let den = roots.into_iter().fold(Poly::one(), |acc, c| &acc * &Poly::shifted_x(q(c)));
        LocalRingElem::new(num, den).unwrap()
    })
}

proptest! {
    #[test]
    fn valuation_is_multiplicative(a in ring_elem(), b in ring_elem()) {
        let product = &a * &b;
        match (a.valuation(), b.valuation()) {
            (Some(x), Some(y)) => prop_assert_eq!(product.valuation(), Some(x + y)),
            _ => prop_assert!(product.is_zero()),
        }
    }

    #[test]
    fn valuation_is_ultrametric(a in ring_elem(), b in ring_elem()) {
        let sum = &a + &b;
        if let (Some(x), Some(y), Some(z)) = (a.valuation(), b.valuation(), sum.valuation()) {
            prop_assert!(z >= x.min(y));
        }
    }

    #[test]
    fn specialization_is_a_ring_map(a in ring_elem(), b in ring_elem()) {
        prop_assert_eq!((&a * &b).specialize(), a.specialize() * b.specialize());
        prop_assert_eq!((&a + &b).specialize(), a.specialize() + b.specialize());
    }
}

#[test]
fn rank_one_oracle() {
    for lam in -5..=5 {
        let rows = compare_with_sum_formula(&q(lam), 12).unwrap();
        assert_eq!(rows.len(), 13);
        assert!(oracle_rows_agree(&rows), "lambda = {lam}: {rows:?}");
    }
}

#[test]
fn layers_match_binomial_valuations() {
    for lam in 0..=5i64 {
        let expected: Vec<usize> = (0..=12).map(|i| usize::from(i > lam)).collect();
        assert_eq!(jantzen_layers_sl2(&q(lam), 12), expected);
    }
    for lam in -5..0 {
        assert_eq!(jantzen_layers_sl2(&q(lam), 12), vec![0; 13]);
    }
}

#[test]
fn exactness_for_small_naturals() {
    for lam in 0..=3 {
        assert!(four_term_rank_check(&q(lam), 12).unwrap(), "{lam}");
        assert!(coker_check_over_a(&q(lam), 12).unwrap(), "{lam}");
    }
}

fn rational_grid() -> Vec<BigRational> {
    let mut out: Vec<BigRational> =
        (-12i64..12).flat_map(|n| (1i64..5).map(move |d| BigRational::new(n.into(), d.into()))).collect();
    out.sort();
    out.dedup();
    out
}

#[test]
fn composite_valuations_add() {
    for lam in rational_grid() {
        let (p, s) = (phi(&lam, 10), psi(&lam, 10));
        let natural = lam.is_integer() && lam >= q(0);
        for (i, c) in s.compose(&p).iter().enumerate() {
            let expected = p.entries[i].valuation().unwrap() + s.entries[i].valuation().unwrap();
            assert_eq!(c.valuation(), Some(expected));
            if !natural {
                assert_eq!(expected, 0);
            }
        }
    }
}

#[test]
fn maps_are_equivariant_for_rational_weights() {
    for lam in rational_grid() {
        assert!(check_equivariance(&phi(&lam, 8)), "{lam}");
        assert!(check_equivariance(&psi(&lam, 8)), "{lam}");
    }
}
