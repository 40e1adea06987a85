//! Synthetic forum corpora with a planted price relationship, used for the
//! bundled demo and the end-to-end tests.
//!
//! The weekly price is built as `2 + 0.4·control_z(t) + 0.3·aw_z(t−1) + ε`,
//! where `aw_z` is the standardized weekly co-occurrence count (computed by
//! independent pair enumeration, not by the graph builder) and `control_z`
//! a standardized random walk.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use chrono::{DateTime, Duration, Utc};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::corpus::{Message, MarketSeries, SECONDS_PER_WEEK};
use crate::error::{Error, Result};
use crate::graphs::DEFAULT_WINDOW_SIZE;
use crate::oracle::cooccurrence_pairs;

pub const FOCAL_WORD: &str = "acme";
pub const PRICE_NOISE_SD: f64 = 0.05;

const LEXICON: [(&str, f64); 6] = [
    ("bene", 1.0),
    ("ottimo", 1.0),
    ("crescita", 0.5),
    ("problema", -0.6),
    ("male", -1.0),
    ("ritardo", -0.4),
];

#[derive(Debug, Clone)]
pub struct PlantedCorpus {
    pub start: DateTime<Utc>,
    pub weeks: usize,
    pub messages: Vec<Message>,
    pub price: MarketSeries,
    pub control: MarketSeries,
    pub lexicon: Vec<(String, f64)>,
    /// Weekly co-occurrence events by pair enumeration over the bodies.
    pub activity_words: Vec<u64>,
}

fn standardize(v: &[f64]) -> Vec<f64> {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let sd = (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n).sqrt();
    v.iter().map(|x| if sd > 0.0 { (x - mean) / sd } else { 0.0 }).collect()
}

/// Corpus over `weeks` weeks with the planted price; fully determined by
/// `seed`. Bodies contain only tokens that pass the default Italian filter
/// unchanged.
pub fn planted_corpus(weeks: usize, seed: u64) -> PlantedCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start: DateTime<Utc> = "2014-09-01T00:00:00Z".parse().expect("valid instant");
    let vocab: Vec<String> = (0..400).map(|i| format!("w{i:03}")).collect();
    let authors: Vec<String> = (0..40).map(|i| format!("u{i:02}")).collect();

    let mut messages: Vec<Message> = Vec::new();
    let mut activity_words = Vec::with_capacity(weeks);
    for week in 0..weeks {
        let count = rng.random_range(8..60);
        let mut offsets: Vec<i64> = (0..count).map(|_| rng.random_range(0..SECONDS_PER_WEEK)).collect();
        offsets.sort_unstable();
        let first = messages.len();
        let mut streams = Vec::with_capacity(count);
        for (k, off) in offsets.into_iter().enumerate() {
            let len = rng.random_range(3..25);
            let mut words: Vec<String> = (0..len)
                .map(|_| {
                    let u: f64 = rng.random();
                    vocab[((u * u) * vocab.len() as f64) as usize].clone()
                })
                .collect();
            if rng.random_bool(0.35) {
                let at = rng.random_range(0..=words.len());
                words.insert(at, FOCAL_WORD.to_owned());
            }
            if rng.random_bool(0.5) {
                let at = rng.random_range(0..=words.len());
                words.insert(at, LEXICON[rng.random_range(0..LEXICON.len())].0.to_owned());
            }
            let parent_id = (k > 0 && rng.random_bool(0.6))
                .then(|| messages[first + rng.random_range(0..k)].id.clone());
            messages.push(Message {
                id: format!("m{week:03}-{k:03}"),
                author_id: authors[rng.random_range(0..authors.len())].clone(),
                parent_id,
                timestamp: start + Duration::seconds(week as i64 * SECONDS_PER_WEEK + off),
                body: words.join(" "),
            });
            streams.push(words);
        }
        activity_words.push(cooccurrence_pairs(&streams, DEFAULT_WINDOW_SIZE).0);
    }

    let step = Normal::new(0.0, 300.0).expect("valid sd");
    let mut level = 20_000.0;
    let control_raw: Vec<f64> = (0..weeks)
        .map(|_| {
            level += step.sample(&mut rng);
            level
        })
        .collect();
    let cz = standardize(&control_raw);
    let az = standardize(&activity_words.iter().map(|&a| a as f64).collect::<Vec<_>>());
    let noise = Normal::new(0.0, PRICE_NOISE_SD).expect("valid sd");
    let price: BTreeMap<usize, f64> = (0..weeks)
        .map(|t| {
            let lagged = if t > 0 { az[t - 1] } else { 0.0 };
            (t, 2.0 + 0.4 * cz[t] + 0.3 * lagged + noise.sample(&mut rng))
        })
        .collect();

    PlantedCorpus {
        start,
        weeks,
        messages,
        price: MarketSeries {
            name: "price".into(),
            values: price,
        },
        control: MarketSeries {
            name: "control".into(),
            values: control_raw.into_iter().enumerate().collect(),
        },
        lexicon: LEXICON.iter().map(|&(w, p)| (w.to_owned(), p)).collect(),
        activity_words,
    }
}

fn write(path: &Path, contents: String) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Write the corpus, market series, lexicon and a ready-to-run
/// `config.toml` into `dir`. Returns the config path.
pub fn write_demo(dir: &Path, corpus: &PlantedCorpus) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut jsonl = String::new();
    for m in &corpus.messages {
        jsonl.push_str(&serde_json::to_string(m).map_err(|e| Error::Invalid(e.to_string()))?);
        jsonl.push('\n');
    }
    write(&dir.join("messages.jsonl"), jsonl)?;

    let mut price = String::from("week,value\n");
    for (w, v) in &corpus.price.values {
        price.push_str(&format!("{w},{v}\n"));
    }
    write(&dir.join("price.csv"), price)?;

    // control keyed by the Friday of each week, exercising date alignment
    let mut control = String::from("date,value\n");
    for (w, v) in &corpus.control.values {
        let day = corpus.start + Duration::days(7 * *w as i64 + 4);
        control.push_str(&format!("{},{v}\n", day.format("%Y-%m-%d")));
    }
    write(&dir.join("control.csv"), control)?;

    let mut lex = String::from("word,polarity\n");
    for (w, p) in &corpus.lexicon {
        lex.push_str(&format!("{w},{p}\n"));
    }
    write(&dir.join("lexicon.csv"), lex)?;

    let config = format!(
        r#"output_dir = "out"

[inputs]
messages = "messages.jsonl"
price = "price.csv"
control = "control.csv"
lexicon = "lexicon.csv"

[horizon]
start = "{start}"
weeks = {weeks}

[text]
language = "it"

[network]
focal_word = "{focal}"
window_size = 7
betweenness_mode = "exact"
seed = 1
"#,
        start = corpus.start.to_rfc3339(),
        weeks = corpus.weeks,
        focal = FOCAL_WORD,
    );
    let path = dir.join("config.toml");
    write(&path, config)?;
    Ok(path)
}
