use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use ssloci::closed_forms::sp_modn_order;
use ssloci::exact_arith::rational_to_integer;
use ssloci::invariants::{
    check_identities, component_count, l_p, lambda_star_count, mass_superspecial, superspecial_count,
    ModuliParams,
};

const PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

fn params() -> impl Strategy<Value = ModuliParams> {
    (1u32..=8, prop::sample::select(PRIMES.to_vec()), 3u64..=16)
        .prop_filter("N prime to p", |(_, p, n)| n % p != 0)
        .prop_map(|(g, p, n)| ModuliParams::new(g, p, n).unwrap())
}

proptest! {
    #[test]
    fn counts_are_positive_integers(mp in params()) {
        prop_assert!(superspecial_count(&mp).unwrap() > BigInt::zero());
        prop_assert!(component_count(&mp).unwrap() > BigInt::zero());
        if mp.g % 2 == 0 {
            prop_assert!(lambda_star_count(&mp).unwrap() > BigInt::zero());
        }
    }

    #[test]
    fn identities_hold(mp in params()) {
        let ledger = check_identities(&mp).unwrap();
        prop_assert!(ledger.iter().all(|c| c.holds));
    }

    #[test]
    fn component_branch(mp in params()) {
        let c = component_count(&mp).unwrap();
        if mp.g % 2 == 1 {
            prop_assert_eq!(c, superspecial_count(&mp).unwrap());
        } else {
            prop_assert_eq!(c, lambda_star_count(&mp).unwrap());
        }
    }

    /// Components and superspecial points differ only in the local factor.
    #[test]
    fn local_factor_ratio(mp in params()) {
        let ratio = BigRational::new(component_count(&mp).unwrap(), superspecial_count(&mp).unwrap());
        let factor: BigInt = (1..=mp.g)
            .map(|k| num_traits::pow(BigInt::from(mp.p), k as usize) + if k % 2 == 0 { 1 } else { -1 })
            .product();
        prop_assert_eq!(ratio, BigRational::new(l_p(mp.g, mp.p), factor));
    }

    #[test]
    fn mass_times_group_is_integral(g in 1u32..=10, p in prop::sample::select(PRIMES.to_vec()), n in 3u64..=30) {
        let m = mass_superspecial(g, p).unwrap();
        prop_assert!(m.is_positive());
        if n % p != 0 {
            let total = m * BigRational::from_integer(sp_modn_order(g, n).unwrap());
            prop_assert!(rational_to_integer(&total).is_ok());
        }
    }
}
