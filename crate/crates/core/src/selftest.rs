//! Fast built-in checks of the numerical core against independent oracles.

use serde::Serialize;

use crate::centrality::{betweenness_centrality, centralization, degree_centrality};
use crate::econometrics::{durbin_watson, ols_matrix};
use crate::graphs::{build_word_network, GraphBuilder, DEFAULT_WINDOW_SIZE};
use crate::oracle;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, passed: bool, detail: String) -> Check {
    Check { name, passed, detail }
}

fn betweenness_vs_brute_force() -> Check {
    let mut worst = 0.0f64;
    for seed in 0..50 {
        let g = oracle::random_digraph(2 + (seed as usize % 7), 0.35, seed);
        let fast = betweenness_centrality::<f64>(&g);
        for (a, b) in fast.raw.iter().zip(oracle::brute_force_betweenness(&g)) {
            worst = worst.max((a - oracle::ratio_to_f64(&b)).abs());
        }
    }
    check("betweenness_brute_force", worst <= 1e-12, format!("max abs error {worst:e}"))
}

fn star_centralization() -> Check {
    let mut b = GraphBuilder::new();
    for i in 1..10 {
        b.add_arc("hub", &format!("leaf{i}"), 1);
        b.add_arc(&format!("leaf{i}"), "hub", 1);
    }
    let g = b.build();
    let d = centralization(&degree_centrality::<f64>(&g)).map(|c| c.value);
    let bt = centralization(&betweenness_centrality::<f64>(&g)).map(|c| c.value);
    let ok = [&d, &bt].iter().all(|c| matches!(c, Ok(v) if (v - 1.0).abs() <= 1e-12));
    check("bidirectional_star_centralization", ok, format!("degree {d:?}, betweenness {bt:?}"))
}

fn closed_form_activity_words() -> Check {
    let mut failures = Vec::new();
    for l in [7usize, 8, 20, 100] {
        let stream: Vec<String> = (0..l).map(|i| format!("t{i}")).collect();
        let streams = vec![stream];
        let got = build_word_network(&streams, DEFAULT_WINDOW_SIZE).map(|g| g.total_weight());
        let want = (7 * l - 28) as u64;
        let pairs = oracle::cooccurrence_pairs(&streams, DEFAULT_WINDOW_SIZE).0;
        if got.as_ref().ok() != Some(&want) || pairs != want {
            failures.push(format!("L={l}: got {got:?}, oracle {pairs}, formula {want}"));
        }
    }
    check("activity_words_closed_form", failures.is_empty(), failures.join("; "))
}

fn ols_vs_normal_equations() -> Check {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let n = 50;
    let cols: Vec<Vec<f64>> = (0..3).map(|_| (0..n).map(|_| rng.random_range(-2.0..2.0)).collect()).collect();
    let y: Vec<f64> = (0..n)
        .map(|i| 1.0 + 0.5 * cols[0][i] - cols[1][i] + 2.0 * cols[2][i] + rng.random_range(-0.1..0.1))
        .collect();
    let rows: Vec<Vec<f64>> = (0..n).map(|i| vec![1.0, cols[0][i], cols[1][i], cols[2][i]]).collect();
    let names: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
    let fit = ols_matrix(&y, &cols, &names, true);
    let oracle = oracle::normal_equations(&rows, &y);
    let err = match (&fit, &oracle) {
        (Ok(f), Some(o)) => f
            .coefficients
            .iter()
            .zip(o)
            .map(|(a, b)| (a - b).abs() / b.abs().max(1.0))
            .fold(0.0, f64::max),
        _ => f64::INFINITY,
    };
    check("ols_normal_equations", err <= 1e-8, format!("max relative error {err:e}"))
}

fn durbin_watson_hand_case() -> Check {
    // alternating residuals: sum of squared differences 4·3, sum of squares 4
    let got = durbin_watson(&[1.0f64, -1.0, 1.0, -1.0]);
    let ok = matches!(got, Ok(v) if (v - 3.0).abs() <= 1e-12);
    check("durbin_watson_alternating", ok, format!("{got:?}"))
}

/// Run every check; the caller decides how to report.
pub fn run() -> Vec<Check> {
    vec![
        betweenness_vs_brute_force(),
        star_centralization(),
        closed_form_activity_words(),
        ols_vs_normal_equations(),
        durbin_watson_hand_case(),
    ]
}

#[cfg(test)]
mod tests {
    #[test]
    fn all_checks_pass() {
        for c in super::run() {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
