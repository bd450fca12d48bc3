//! Property tests for the numeric and IO layers: algebraic identities that
//! must hold for arbitrary inputs, not just the seeded suites.

use num_complex::Complex64 as C64;
use proptest::prelude::*;

use hermitia_core::domains::Family;
use hermitia_core::io::{family_from_parts, family_to_parts, parse_matrix, round_sig12};
use hermitia_core::numeric::{herm_eigen, CMatrix};

/// Square complex matrix with entries in the unit box, side 1..=5.
fn small_matrix() -> impl Strategy<Value = CMatrix> {
    (1usize..=5).prop_flat_map(|n| {
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n).prop_map(move |entries| {
            CMatrix::from_fn(n, n, |i, j| {
                let (re, im) = entries[i * n + j];
                C64::new(re, im)
            })
        })
    })
}

/// Pair of square matrices of the same size.
fn matrix_pair() -> impl Strategy<Value = (CMatrix, CMatrix)> {
    (1usize..=5).prop_flat_map(|n| {
        let entry = (-1.0f64..1.0, -1.0f64..1.0);
        (
            proptest::collection::vec(entry.clone(), n * n),
            proptest::collection::vec(entry, n * n),
        )
            .prop_map(move |(a, b)| {
                let build = |v: &[(f64, f64)]| {
                    CMatrix::from_fn(n, n, |i, j| {
                        let (re, im) = v[i * n + j];
                        C64::new(re, im)
                    })
                };
                (build(&a), build(&b))
            })
    })
}

proptest! {
    #[test]
    fn round_sig12_is_idempotent_and_order_preserving(
        x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO,
    ) {
        let once = round_sig12(x);
        prop_assert_eq!(once.to_bits(), round_sig12(once).to_bits());
        // rounding never moves a value across zero
        prop_assert!(once == 0.0 || once.signum() == x.signum());
        // relative error of a 12 significant digit rounding
        if x != 0.0 {
            prop_assert!(((once - x) / x).abs() < 1e-11);
        }
    }

    #[test]
    fn parse_matrix_never_panics(s in "\\PC{0,400}") {
        let _ = parse_matrix(&s);
    }

    #[test]
    fn parse_matrix_rejects_or_bounds_its_output(
        rows in 0usize..700,
        cols in 0usize..700,
        len in 0usize..32,
    ) {
        // a syntactically valid header with an arbitrary data block either
        // parses to exactly the declared shape or is rejected
        let data: Vec<String> = (0..len).map(|k| format!("[{k}.0,0.0]")).collect();
        let s = format!(
            "{{\"rows\":{rows},\"cols\":{cols},\"data\":[{}]}}",
            data.join(",")
        );
        match parse_matrix(&s) {
            Ok(m) => {
                prop_assert_eq!(m.rows, rows);
                prop_assert_eq!(m.cols, cols);
                prop_assert_eq!(rows * cols, len);
            }
            Err(e) => prop_assert!(e.is_validation()),
        }
    }

    #[test]
    fn adjoint_reverses_products((a, b) in matrix_pair()) {
        let lhs = a.mul(&b).adjoint();
        let rhs = b.adjoint().mul(&a.adjoint());
        prop_assert!(lhs.sub(&rhs).max_abs() < 1e-13);
    }

    #[test]
    fn trace_is_cyclic((a, b) in matrix_pair()) {
        let d = a.mul(&b).trace() - b.mul(&a).trace();
        prop_assert!(d.norm() < 1e-12);
    }

    #[test]
    fn herm_eigen_reconstructs_hermitian_input(g in small_matrix()) {
        let h = g.add(&g.adjoint()).scale(C64::new(0.5, 0.0));
        let (lambda, v) = herm_eigen(&h).expect("hermitian eigensolve");
        let n = h.rows;
        let diag = CMatrix::from_fn(n, n, |i, j| {
            if i == j { C64::new(lambda[i], 0.0) } else { C64::new(0.0, 0.0) }
        });
        let recon = v.mul(&diag).mul(&v.adjoint());
        prop_assert!(recon.sub(&h).max_abs() < 1e-10 * (1.0 + h.max_abs()));
        // ascending eigenvalue order is part of the contract
        for w in lambda.windows(2) {
            prop_assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn family_parts_round_trip(p in 1usize..=8, q in 1usize..=8, pick in 0usize..4) {
        let family = match pick {
            0 => Family::Su { p: p.min(q), q: p.max(q) },
            1 => Family::Sp { n: p },
            2 => Family::SoStar { n: p.max(2) },
            _ => Family::So2 { n: p.max(2) },
        };
        let (tag, params) = family_to_parts(family);
        let back = family_from_parts(&tag, &params).expect("emitted family must parse");
        prop_assert_eq!(back, family);
    }
}
