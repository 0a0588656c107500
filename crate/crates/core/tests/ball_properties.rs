use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use perrin_repdigits::realfield::{log_certified, plastic_root, Ball, Dyadic, Precision};

const P: Precision = Precision::digits(40);

/// A ball `m/2^20 ± r/2^30` and three exact points inside it.
fn ball_and_points() -> impl Strategy<Value = (Ball, Vec<BigRational>)> {
    (-(1i64 << 40)..(1i64 << 40), 0i64..(1 << 12), proptest::collection::vec(-1.0f64..=1.0, 3)).prop_map(|(m, r, ts)| {
        let mid = Dyadic::new(BigInt::from(m), -20);
        let rad = Dyadic::new(BigInt::from(r), -30);
        let ball = Ball::new(mid.clone(), rad.clone(), P);
        let pts = ts
            .into_iter()
            .map(|t| {
                let t = BigRational::new(BigInt::from((t * 1e6) as i64), BigInt::from(1_000_000));
                mid.to_rational() + t * rad.to_rational()
            })
            .collect();
        (ball, pts)
    })
}

proptest! {
    #[test]
    fn arithmetic_contains_pointwise_images((a, xs) in ball_and_points(), (b, ys) in ball_and_points()) {
        for (x, y) in xs.iter().zip(&ys) {
            prop_assert!((&a + &b).contains_rational(&(x + y)));
            prop_assert!((&a - &b).contains_rational(&(x - y)));
            prop_assert!((&a * &b).contains_rational(&(x * y)));
            if let Ok(q) = a.div(&b) {
                prop_assert!(q.contains_rational(&(x / y)));
            }
            let sq = &a * &a;
            prop_assert!(a.powi(2).unwrap().overlaps(&sq));
            prop_assert!(a.powi(3).unwrap().contains_rational(&(x * x * x)));
        }
    }

    #[test]
    fn log_contains_f64_log_of_points((a, xs) in ball_and_points()) {
        let a = a.abs();
        prop_assume!(a.is_positive() && a.lower().to_f64() > 1e-3);
        let l = a.ln().unwrap();
        for x in &xs {
            let xf = x.numer().to_string().parse::<f64>().unwrap() / x.denom().to_string().parse::<f64>().unwrap();
            let lf = xf.abs().ln();
            let slack = 1e-9 * (1.0 + lf.abs());
            prop_assert!(l.lower().to_f64() - slack <= lf && lf <= l.upper().to_f64() + slack);
        }
    }

    #[test]
    fn sqrt_squares_back(n in 1u64..1_000_000) {
        let r = Ball::from_int(n, P).sqrt().unwrap();
        prop_assert!((&r * &r).contains(&Dyadic::from_int(n)));
    }
}

#[test]
fn refinement_never_widens() {
    let mut prev_root = plastic_root(Precision::digits(20));
    let mut prev_log = log_certified(&prev_root, Precision::digits(20)).unwrap();
    for d in [40, 80, 160, 320] {
        let root = plastic_root(Precision::digits(d));
        let log = log_certified(&root, Precision::digits(d)).unwrap();
        assert!(root.rad() <= prev_root.rad() && root.overlaps(&prev_root));
        assert!(log.rad() <= prev_log.rad() && log.overlaps(&prev_log));
        prev_root = root;
        prev_log = log;
    }
}

#[test]
fn log_of_cube_equals_log_of_successor() {
    let p = Precision::digits(120);
    let a = plastic_root(p);
    let lhs = a.powi(3).unwrap().ln().unwrap();
    let rhs = (&a + &Ball::one(p)).ln().unwrap();
    assert!(lhs.overlaps(&rhs));
    assert!(lhs.overlaps(&a.ln().unwrap().mul_int(3)));
}

#[test]
fn root_bracket_and_radius() {
    for d in [2, 10, 60] {
        let a = plastic_root(Precision::digits(d));
        let lo = BigRational::new(132.into(), 100.into());
        let hi = BigRational::new(133.into(), 100.into());
        assert!(a.gt_rational(&lo) && a.lt_rational(&hi));
        let tol = BigRational::new(1.into(), BigInt::from(10u32).pow(d));
        assert!(a.rad().cmp_rational(&tol).is_le());
    }
}
