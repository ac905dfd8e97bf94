//! Brute force against closed forms beyond the acceptance grid.

use ssloci::closed_forms::{lagrangian_count, lu_count, CountQuery};
use ssloci::exact_arith::int;
use ssloci::finite_field::make_field_with;
use ssloci::formspaces::{Matrix, Pairing};
use ssloci::limits::Limits;
use ssloci::oracles::Oracles;
use ssloci::verify::{run_verify, Status, VerifyConfig};

#[test]
fn every_query_family_agrees() {
    let o = Oracles::new(Limits::default());
    let queries = [
        CountQuery::Gl { n: 3, q: 2 },
        CountQuery::Sp { n: 1, q: 7 },
        CountQuery::Sp { n: 1, q: 8 },
        CountQuery::U { n: 1, q: 4 },
        CountQuery::Lagrangian { n: 3, q: 2 },
        CountQuery::Lu { n: 2, q: 4 },
        CountQuery::Im { m: 4, q: 2 },
        CountQuery::Grassmannian { n: 5, r: 2, q: 3 },
        CountQuery::SpModN { g: 1, modulus: 15 },
        CountQuery::ProjLine { q: 9 },
    ];
    for q in queries {
        assert_eq!(o.run(&q).unwrap().count, q.evaluate().unwrap(), "{q}");
    }
}

/// Isotropic counts do not depend on which Gram matrix represents the form.
#[test]
fn gram_matrix_choice_is_irrelevant() {
    let lim = Limits::default();
    let o = Oracles::new(lim);
    let f3 = make_field_with(3, 1, &lim).unwrap();
    let j = Matrix::symplectic_j(&f3, 2);
    let by_gram = o.count_isotropic_subspaces(&Pairing::symplectic_gram(j).unwrap(), 2).unwrap();
    assert_eq!(by_gram.count, lagrangian_count(2, 3).unwrap());

    let f9 = make_field_with(3, 2, &lim).unwrap();
    let h = o.count_isotropic_subspaces(&Pairing::hermitian_j(&f9, 2).unwrap(), 2).unwrap();
    assert_eq!(h.count, lu_count(2, 3).unwrap());
    assert_eq!(h.count, int(112));
}

#[test]
fn default_verify_grid_passes() {
    let r = run_verify(&VerifyConfig::default(), &Limits::default());
    assert!(r.all_pass(), "{}", r.to_table());
    assert!(r.count(Status::Pass) >= 100);
}
