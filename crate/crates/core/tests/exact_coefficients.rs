use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use stbsim::specialfn::{gasper_coefficient, gasper_coefficients};

fn q(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// The terminating 4F3 sum in exact arithmetic.
fn exact(n: usize, delta: &BigRational, beta: &BigRational, gamma: &BigRational) -> BigRational {
    let two = q(2, 1);
    let eta = (beta + gamma - delta - q(3, 2)) / &two;
    let mut term = BigRational::one();
    let mut sum = BigRational::one();
    let nq = q(n as i64, 1);
    for k in 0..n {
        let kq = q(k as i64, 1);
        let num = (&kq - &nq) * (&nq + &two * &eta + &kq) * (&eta + q(1, 1) + &kq) * (delta + &kq);
        let den = (&eta + q(1, 2) + &kq) * (beta + &kq) * (gamma + &kq) * (&kq + q(1, 1));
        term = term * num / den;
        sum += &term;
    }
    sum
}

fn to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    r.to_f64().expect("finite")
}

#[test]
fn three_term_recurrence_matches_exact_sums() {
    let cases = [(q(5, 2), q(4, 1), q(9, 2)), (q(3, 2), q(7, 2), q(4, 1)), (q(7, 2), q(13, 2), q(15, 2))];
    for (d, b, g) in &cases {
        let fast = gasper_coefficients(60, to_f64(d), to_f64(b), to_f64(g));
        for n in 0..=60 {
            let want = to_f64(&exact(n, d, b, g));
            let got = fast[n];
            let err = (got - want).abs() / want.abs().max(1e-300);
            assert!(err < 1e-12, "n={n} ({d}, {b}, {g}): {got} vs {want}");
        }
    }
}

#[test]
fn direct_sum_error_tracks_cancellation() {
    let (d, b, g) = (q(5, 2), q(4, 1), q(9, 2));
    let eta = (to_f64(&b) + to_f64(&g) - to_f64(&d) - 1.5) / 2.0;
    for n in 0..=8 {
        let want = to_f64(&exact(n, &d, &b, &g));
        let c = gasper_coefficient(n, to_f64(&d), to_f64(&b), to_f64(&g), eta);
        let bound = 64.0 * f64::EPSILON * c.max_partial;
        assert!((c.value - want).abs() <= bound, "n={n}: {} vs {want}", c.value);
    }
}
