use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use netsignal::corpus::MarketSeries;
use netsignal::econometrics::battery::{run_battery, AnalysisConfig};
use netsignal::econometrics::{build_panel, WindowFeatures};

fn noise_features(weeks: usize, rng: &mut ChaCha8Rng) -> Vec<WindowFeatures<f64>> {
    let mut n = || -> f64 { StandardNormal.sample(&mut *rng) };
    (0..weeks)
        .map(|week| WindowFeatures {
            week,
            activity: 0,
            activity_words: 0,
            group_degree: Some(n()),
            group_betweenness: Some(n()),
            focal_degree: n(),
            focal_betweenness: n(),
            sentiment: Some(n()),
            emotionality: Some(n()),
            complexity: Some(n()),
            focal_absent: false,
        })
        .collect()
}

fn with_counts(mut f: Vec<WindowFeatures<f64>>, rng: &mut ChaCha8Rng) -> Vec<WindowFeatures<f64>> {
    for w in &mut f {
        w.activity = rng.random_range(10..100);
        w.activity_words = rng.random_range(1000..10_000);
    }
    f
}

fn series(name: &str, v: &[f64]) -> MarketSeries {
    MarketSeries {
        name: name.into(),
        values: v.iter().copied().enumerate().collect(),
    }
}

#[test]
fn control_only_model_recovers_planted_fit() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let weeks = 400;
    let control: Vec<f64> = (0..weeks).map(|_| StandardNormal.sample(&mut rng)).collect();
    let price: Vec<f64> = control
        .iter()
        .map(|c| 1.0 + 2.0 * c + { let e: f64 = StandardNormal.sample(&mut rng); e })
        .collect();
    let feats = with_counts(noise_features(weeks, &mut rng), &mut rng);
    let panel = build_panel(&feats, &series("price", &price), &series("control", &control)).unwrap();
    let report = run_battery(&panel, &AnalysisConfig::default()).unwrap();
    let adj = report.model("Model 1").unwrap().adj_r_squared.unwrap();
    // population R² = 4 / (4 + 1)
    assert!((adj - 0.8).abs() < 0.05, "adjusted R2 {adj}");
}

#[test]
fn leading_predictor_shows_at_lag_two() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let weeks = 120;
    let lead: Vec<f64> = (0..weeks).map(|_| rng.random_range(0.0..1.0)).collect();
    let price: Vec<f64> = (0..weeks)
        .map(|t| if t >= 2 { lead[t - 2] } else { 0.5 } + rng.random_range(-0.005..0.005))
        .collect();
    let mut feats = with_counts(noise_features(weeks, &mut rng), &mut rng);
    for (f, v) in feats.iter_mut().zip(&lead) {
        f.sentiment = Some(*v);
    }
    let control: Vec<f64> = (0..weeks).map(|_| StandardNormal.sample(&mut rng)).collect();
    let panel = build_panel(&feats, &series("price", &price), &series("control", &control)).unwrap();
    let report = run_battery(&panel, &AnalysisConfig::default()).unwrap();
    let r2 = report.correlation("sentiment", 2).unwrap().r.unwrap();
    assert!(r2 > 0.999, "lag-2 r {r2}");
    let r0 = report.correlation("sentiment", 0).unwrap().r.unwrap();
    assert!(r0.abs() < 0.3, "lag-0 r {r0}");
    let p = report.granger_cell("sentiment").unwrap().p.unwrap();
    assert!(p < 1e-10, "Granger p {p}");
}

#[test]
fn noise_predictors_stay_near_nominal_rate() {
    let (mut cells, mut hits, mut tests, mut rejections) = (0, 0, 0, 0);
    for seed in 0..30 {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + seed);
        let weeks = 94;
        let feats = with_counts(noise_features(weeks, &mut rng), &mut rng);
        let price: Vec<f64> = (0..weeks).map(|_| StandardNormal.sample(&mut rng)).collect();
        let control: Vec<f64> = (0..weeks).map(|_| StandardNormal.sample(&mut rng)).collect();
        let panel = build_panel(&feats, &series("price", &price), &series("control", &control)).unwrap();
        let report = run_battery(&panel, &AnalysisConfig::default()).unwrap();
        for c in &report.correlations {
            cells += 1;
            hits += usize::from(c.p.unwrap() < 0.05);
        }
        for g in &report.granger {
            tests += 1;
            rejections += usize::from(g.p.unwrap() < 0.05);
        }
    }
    let corr_rate = hits as f64 / cells as f64;
    let granger_rate = rejections as f64 / tests as f64;
    assert!(corr_rate < 0.09, "correlation false-positive rate {corr_rate}");
    assert!(granger_rate < 0.1, "Granger false-positive rate {granger_rate}");
}
