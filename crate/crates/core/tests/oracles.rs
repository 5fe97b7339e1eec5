mod common;

use num_rational::BigRational;
use rigiditylab::flex::{infinitesimal_flex_dim, SINGULAR_VALUE_TOL};
use rigiditylab::models;

#[test]
fn exact_rank_small_cases() {
    let q = |v: i64| BigRational::from_integer(v.into());
    let m = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)], vec![q(0), q(1), q(1)]];
    assert_eq!(common::exact_rank(m), 2);
    assert_eq!(common::exact_rank(vec![vec![q(0); 4]; 3]), 0);
}

#[test]
fn numerical_flex_dims_match_exact_rank() {
    for name in models::BUILTIN_MODELS {
        let m = models::builtin(name).unwrap();
        let numeric = infinitesimal_flex_dim(&m.polyhedron, SINGULAR_VALUE_TOL).unwrap();
        assert_eq!(numeric, common::exact_flex_dim(&m), "{name}");
    }
}
