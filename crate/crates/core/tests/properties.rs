use gentrib::analytic::v_from_u;
use gentrib::matrix::{term_by_matrix, term_by_matrix_mod, Mat3};
use gentrib::quaternion::seq_quaternion;
use gentrib::{BigInt, Quaternion, SequenceParams};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = SequenceParams> {
    (-20i64..=20, -20i64..=20, -20i64..=20, -6i64..=6, -6i64..=6, -6i64..=6)
        .prop_map(|(v0, v1, v2, r, s, t)| SequenceParams::new(v0, v1, v2, r, s, t))
}

fn quaternion() -> impl Strategy<Value = Quaternion<BigInt>> {
    prop::array::uniform4(-1000i64..=1000).prop_map(|[w, x, y, z]| Quaternion::new(w.into(), x.into(), y.into(), z.into()))
}

fn matrix() -> impl Strategy<Value = Mat3> {
    prop::array::uniform3(prop::array::uniform3(-50i64..=50)).prop_map(Mat3::from_rows)
}

proptest! {
    #[test]
    fn recurrence_closes(p in params(), n in 0u64..80) {
        let v = p.terms_range(n, n + 3).unwrap();
        prop_assert_eq!(&v[3], &(&p.r * &v[2] + &p.s * &v[1] + &p.t * &v[0]));
    }

    #[test]
    fn linear_in_seeds(a in params(), b in params(), n in 0u64..60) {
        let b = SequenceParams { r: a.r.clone(), s: a.s.clone(), t: a.t.clone(), ..b };
        let sum = SequenceParams {
            v0: &a.v0 + &b.v0,
            v1: &a.v1 + &b.v1,
            v2: &a.v2 + &b.v2,
            ..a.clone()
        };
        prop_assert_eq!(sum.term(n), a.term(n) + b.term(n));
    }

    #[test]
    fn matrix_path_matches_iteration(p in params(), n in 0u64..200) {
        prop_assert_eq!(term_by_matrix(&p, n), p.term(n));
    }

    #[test]
    fn decomposition_through_u(p in params(), n in 2u64..120) {
        prop_assert_eq!(v_from_u(&p, n).unwrap(), p.term(n));
    }

    #[test]
    fn modular_paths_agree(p in params(), n in 0u64..3000, m in 1u64..u64::MAX) {
        let fast = term_by_matrix_mod(&p, n, m).unwrap();
        prop_assert_eq!(fast, p.term_mod(n, m).unwrap());
        prop_assert!(fast < m);
    }

    #[test]
    fn hamilton_norm_multiplicative(a in quaternion(), b in quaternion()) {
        let prod = a.clone() * b.clone();
        prop_assert_eq!(prod.norm_squared(), a.norm_squared() * b.norm_squared());
    }

    #[test]
    fn hamilton_associative(a in quaternion(), b in quaternion(), c in quaternion()) {
        prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a * (b * c));
    }

    #[test]
    fn sequence_quaternions_satisfy_recurrence(p in params(), n in 0u64..40) {
        let q: Vec<_> = (n..n + 4).map(|k| seq_quaternion(&p, k)).collect();
        let rhs = q[2].scale(&p.r) + q[1].scale(&p.s) + q[0].scale(&p.t);
        prop_assert_eq!(&q[3], &rhs);
    }

    #[test]
    fn det_multiplicative(a in matrix(), b in matrix()) {
        prop_assert_eq!(a.mul(&b).det(), a.det() * b.det());
    }

    #[test]
    fn companion_power_det(r in -6i64..=6, s in -6i64..=6, t in -6i64..=6, n in 0u64..40) {
        // det M = t, so det M^n = t^n.
        let m = Mat3::companion_of(&r.into(), &s.into(), &t.into());
        prop_assert_eq!(m.pow(n).det(), BigInt::from(t).pow(n as u32));
    }
}
