use std::sync::Arc;

use contactkit::algebra::{reduced_poly, truncated_poly};
use contactkit::bracket::{
    contact_k_form, is_contact, is_lie, schouten_conditions, wedge, CheckBudget, LinearOp, WedgeForm,
};
use contactkit::exactlin::{kernel, rank, rref, solve, verify_certificate, Field, Matrix, Solution, Subspace};
use contactkit::spaces::{der, kminus};
use proptest::prelude::*;

fn fields() -> impl Strategy<Value = Field> {
    prop_oneof![
        Just(Field::Rationals),
        Just(Field::prime(3).unwrap()),
        Just(Field::prime(5).unwrap()),
        Just(Field::prime(101).unwrap()),
    ]
}

fn matrix_over(f: Field, rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-3i64..=3, rows * cols).prop_map(move |vals| {
        let rows: Vec<&[i64]> = vals.chunks(cols).collect();
        Matrix::from_i64(f, &rows)
    })
}

fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Matrix> {
    (fields(), 1..=max_rows, 1..=max_cols).prop_flat_map(|(f, r, c)| matrix_over(f, r, c))
}

/// Two row sets in the same ambient space over the same field.
fn matrix_pair() -> impl Strategy<Value = (Matrix, Matrix)> {
    (fields(), 1..=4usize, 1..=4usize, 1..=5usize)
        .prop_flat_map(|(f, r1, r2, c)| (matrix_over(f, r1, c), matrix_over(f, r2, c)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rref_is_idempotent(m in matrix(6, 7)) {
        let r = rref(&m);
        prop_assert_eq!(rref(&r), r.clone());
        prop_assert_eq!(rank(&r), rank(&m));
    }

    #[test]
    fn rank_nullity(m in matrix(6, 7)) {
        let k = kernel(&m);
        prop_assert_eq!(rank(&m) + k.dim(), m.cols());
        for v in k.basis_dense() {
            prop_assert!(m.mul_vec(&v).unwrap().iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn solve_is_correct(m in matrix(5, 5), seed in prop::collection::vec(-2i64..=2, 5)) {
        let f = m.field();
        let b: Vec<_> = (0..m.rows()).map(|i| f.from_i64(seed[i])).collect();
        match solve(&m, &b).unwrap() {
            Solution::Solved(x) => prop_assert_eq!(m.mul_vec(&x).unwrap(), b),
            Solution::Infeasible { certificate } => {
                prop_assert!(verify_certificate(&m, &b, &certificate).unwrap());
            }
        }
    }

    #[test]
    fn subspace_lattice((a, b) in matrix_pair()) {
        let f = a.field();
        let rows = |m: &Matrix| (0..m.rows()).map(|i| m.row(i).to_vec()).collect::<Vec<_>>();
        let u = Subspace::from_vectors(f, a.cols(), &rows(&a)).unwrap();
        let w = Subspace::from_vectors(f, b.cols(), &rows(&b)).unwrap();
        let sum = u.sum(&w).unwrap();
        let meet = u.intersect(&w).unwrap();
        prop_assert_eq!(sum.dim() + meet.dim(), u.dim() + w.dim());
        prop_assert!(meet.is_subspace_of(&u).unwrap() && meet.is_subspace_of(&w).unwrap());
        prop_assert!(u.is_subspace_of(&sum).unwrap());
        prop_assert!(u.equals(&u.sum(&meet).unwrap()).unwrap());
    }

    #[test]
    fn schouten_matches_jacobi(picks in prop::collection::vec((0usize..81, 1i64..3), 1..6), dpick in prop::option::of((0usize..81, 1i64..3))) {
        let o3 = Arc::new(reduced_poly(3, 3).unwrap());
        let f = o3.field();
        let basis = der(&o3).unwrap().basis();
        let op = |i: usize, c: i64| basis[i % basis.len()].scale(&f.from_i64(c));
        let pairs = picks.chunks(2).map(|ch| {
            let (i, c) = ch[0];
            let (j, d) = *ch.get(1).unwrap_or(&ch[0]);
            (op(i, c), op(j + 1, d))
        }).collect();
        let d = dpick.map_or_else(|| LinearOp::zero(&o3), |(i, c)| op(i, c));
        let form = WedgeForm::new(pairs, d).unwrap();
        let budget = CheckBudget::default();
        prop_assert_eq!(
            is_lie(&form.bracket(), &budget).holds(),
            schouten_conditions(&form, &budget).unwrap().holds()
        );
    }
}

#[test]
fn reports_are_deterministic() {
    let o3 = Arc::new(reduced_poly(3, 3).unwrap());
    let k = contact_k_form(&o3).unwrap().bracket();
    let budget = CheckBudget {
        exhaustive_max_dim: 8,
        samples: 2000,
        ..CheckBudget::default()
    };
    let first = serde_json::to_string(&is_contact(&k, &budget)).unwrap();
    let second = serde_json::to_string(&is_contact(&k, &budget)).unwrap();
    assert_eq!(first, second);

    let x = o3.variable(0).unwrap();
    let dx = LinearOp::partial(&o3, 0).unwrap();
    let broken = k.add(&wedge(&dx, &LinearOp::partial(&o3, 1).unwrap().left_mul(&x)).unwrap());
    let report = is_lie(&broken, &budget);
    assert!(report.fails());
    assert_eq!(serde_json::to_string(&report).unwrap(), serde_json::to_string(&is_lie(&broken, &budget)).unwrap());
}

#[test]
fn kminus_of_x2_is_one_dimensional() {
    for f in [Field::Rationals, Field::prime(5).unwrap()] {
        let a = Arc::new(truncated_poly(f, &[2]).unwrap());
        assert_eq!(kminus(&a).unwrap().dim(), 1);
    }
}
