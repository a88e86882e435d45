use mpinc::arith::rat_mod_p;
use mpinc::linalg::{penrose_check_mod_p, pseudoinverse_oracle, reduce_mod_p};
use mpinc::set_incidence::{build_set_incidence, set_admissibility, set_mpinv};
use mpinc::subspace::{char_p_admissible_subspace, subspace_admissibility, subspace_mpinv};
use mpinc::verify::{verify_set_mod_p, verify_subspace_mod_p};
use mpinc::Error;

/// `p > max(n - r, c)` with `p` not dividing `q` is not enough in the q-case:
/// for n=3, q=2, r=1, c=2 the prime 3 divides `[2,1]_2 = 3`.
#[test]
fn simple_prime_bound_fails_for_subspaces() {
    let (n, q, r, c, p) = (3, 2, 1, 2, 3);
    assert!(p > (n - r).max(c) as u64 && q % p != 0);
    assert!(!char_p_admissible_subspace(n, q, r, c, p).unwrap());
    let adm = subspace_admissibility(n, q, r, c, p).unwrap();
    assert_eq!(adm.offending().next().unwrap().label, "[2,1]_2");
    // The closed form then has a denominator divisible by 3 and no reduction exists.
    let values = subspace_mpinv(n, q, r, c).unwrap().values;
    assert!(values.iter().any(|v| rat_mod_p(v, p).is_err()));
    assert!(matches!(verify_subspace_mod_p(n, q, r, c, p), Err(Error::Inadmissible { .. })));
}

#[test]
fn the_characteristic_of_the_ground_field_is_never_admissible() {
    let adm = subspace_admissibility(3, 3, 1, 2, 3).unwrap();
    assert!(adm.offending().any(|f| f.label == "q"));
}

#[test]
fn reduction_commutes_with_the_oracle() {
    // When p is admissible the reduced closed form is the pseudoinverse over GF(p).
    for (n, r, c, p) in [(4, 1, 2, 5), (6, 2, 3, 7), (5, 1, 3, 7), (6, 3, 3, 11)] {
        assert!(set_admissibility(n, r, c, p).unwrap().is_admissible());
        let a = build_set_incidence(n, r, c).unwrap();
        let star = set_mpinv(n, r, c).unwrap().expand_mod_p(p).unwrap();
        assert_eq!(star, reduce_mod_p(&pseudoinverse_oracle(&a.to_rational()), p).unwrap());
        assert!(penrose_check_mod_p(&a.to_mod_p(), &star, p).unwrap().all());
        assert!(verify_set_mod_p(n, r, c, p).unwrap().passed());
    }
}

#[test]
fn inadmissible_set_reports_the_factor() {
    match verify_set_mod_p(6, 2, 3, 3) {
        Err(Error::Inadmissible { p: 3, factor }) => assert!(factor.starts_with("C(")),
        other => panic!("expected an inadmissibility error, got {other:?}"),
    }
}
