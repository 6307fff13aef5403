use stbsim::engine::{simulate, Locations};
use stbsim::models::{CorrelationModel, GHParams, MaternParams};
use stbsim::validate::{empirical_semivariogram, CholeskyFactor};

#[test]
fn white_noise_semivariogram_is_flat() {
    let locs = Locations::uniform(800, 2, 0.0, 1.0, 3).unwrap();
    let mut rng = 0x9e3779b97f4a7c15u64;
    let values: Vec<f64> = (0..locs.len())
        .map(|_| {
            // sum of uniforms, scaled to unit variance
            (0..12)
                .map(|_| {
                    rng ^= rng << 13;
                    rng ^= rng >> 7;
                    rng ^= rng << 17;
                    (rng >> 11) as f64 / (1u64 << 53) as f64
                })
                .sum::<f64>()
                - 6.0
        })
        .collect();
    let g = empirical_semivariogram(&locs, &values, 10, 0.5).unwrap();
    for v in g.values.iter().flatten() {
        assert!((v - 1.0).abs() < 0.15, "{v}");
    }
}

#[test]
fn two_point_cholesky_correlation() {
    let p = MaternParams::new(0.5, 1.0).unwrap();
    let model = CorrelationModel::matern(p, 1.0).unwrap();
    let d = std::f64::consts::LN_2;
    let locs = Locations::from_rows(&[[0.0, 0.0], [d, 0.0]]).unwrap();
    let chol = CholeskyFactor::new(&model, &locs).unwrap();
    let n = 20_000;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for s in 0..n {
        let z = chol.sample(s);
        sxy += z[0] * z[1];
        sxx += z[0] * z[0];
        syy += z[1] * z[1];
    }
    let r = sxy / (sxx * syy).sqrt();
    assert!((r - 0.5).abs() < 0.03, "{r}");
}

#[test]
fn translation_moves_the_field() {
    let gw = GHParams::wendland(0.0, 3.0, 0.4, 2).unwrap();
    let model = CorrelationModel::gauss_hyper(gw, 1.0).unwrap();
    let locs = Locations::uniform(50, 2, 0.0, 1.0, 9).unwrap();
    let moved = locs.translated(&[0.25, -0.5]).unwrap();
    let a = simulate(&model, 2, &locs, 200, 4).unwrap();
    let b = simulate(&model, 2, &moved, 200, 4).unwrap();
    assert_eq!(a.values.len(), b.values.len());
    assert!(a.values.iter().zip(&b.values).any(|(x, y)| (x - y).abs() > 1e-6));
}
