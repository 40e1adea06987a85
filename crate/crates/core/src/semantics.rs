//! Message sentiment and weekly sentiment, emotionality and complexity.

use std::collections::HashMap;
use std::fs::File;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::Message;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::textproc::{tokenize, Vocabulary};

/// Sentiment in `[0, 1]`; 0.5 is neutral.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct SentimentScore<T>(T);

impl<T: Scalar> SentimentScore<T> {
    pub fn new(value: T) -> Result<Self> {
        if value >= T::zero() && value <= T::one() {
            Ok(SentimentScore(value))
        } else {
            Err(Error::Invalid(format!("sentiment {value} outside [0, 1]")))
        }
    }

    pub fn neutral() -> Self {
        SentimentScore(T::of(0.5))
    }

    pub fn value(self) -> T {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SentimentBackend {
    Lexicon,
    Precomputed,
}

pub trait SentimentScorer<T: Scalar>: Send + Sync {
    fn score(&self, msg: &Message) -> Result<SentimentScore<T>>;
}

/// Mean polarity `p ∈ [−1, 1]` of lexicon hits, mapped to `(p + 1) / 2`.
/// Bodies are tokenized with the default tokenizer and not stopword
/// filtered, so negators in the lexicon still match.
#[derive(Debug, Clone, Default)]
pub struct LexiconScorer<T> {
    polarity: HashMap<String, T>,
}

impl<T: Scalar> LexiconScorer<T> {
    pub fn new(entries: impl IntoIterator<Item = (String, T)>) -> Result<Self> {
        let mut polarity = HashMap::new();
        for (word, p) in entries {
            if !(p >= -T::one() && p <= T::one()) {
                return Err(Error::Invalid(format!(
                    "polarity {p} of `{word}` outside [-1, 1]"
                )));
            }
            polarity.insert(word.to_lowercase(), p);
        }
        Ok(LexiconScorer { polarity })
    }

    /// CSV `word,polarity`.
    pub fn from_csv(path: &Path) -> Result<Self> {
        let rows: Vec<(String, f64)> = read_pairs(path)?;
        Self::new(rows.into_iter().map(|(w, p)| (w, T::of(p))))
    }

    pub fn len(&self) -> usize {
        self.polarity.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polarity.is_empty()
    }
}

impl<T: Scalar> SentimentScorer<T> for LexiconScorer<T> {
    fn score(&self, msg: &Message) -> Result<SentimentScore<T>> {
        let hits: Vec<T> = tokenize(&msg.body)
            .iter()
            .filter_map(|t| self.polarity.get(t).copied())
            .collect();
        if hits.is_empty() {
            return Ok(SentimentScore::neutral());
        }
        let mean = hits.iter().copied().sum::<T>() / T::of_usize(hits.len());
        SentimentScore::new((mean + T::one()) / T::of(2.0))
    }
}

/// Externally computed per-message scores.
#[derive(Debug, Clone, Default)]
pub struct PrecomputedScorer<T> {
    scores: HashMap<String, SentimentScore<T>>,
}

impl<T: Scalar> PrecomputedScorer<T> {
    pub fn new(entries: impl IntoIterator<Item = (String, T)>) -> Result<Self> {
        let scores = entries
            .into_iter()
            .map(|(id, v)| SentimentScore::new(v).map(|s| (id, s)))
            .collect::<Result<_>>()?;
        Ok(PrecomputedScorer { scores })
    }

    /// CSV `message_id,score`.
    pub fn from_csv(path: &Path) -> Result<Self> {
        let rows: Vec<(String, f64)> = read_pairs(path)?;
        Self::new(rows.into_iter().map(|(id, s)| (id, T::of(s))))
    }
}

impl<T: Scalar> SentimentScorer<T> for PrecomputedScorer<T> {
    fn score(&self, msg: &Message) -> Result<SentimentScore<T>> {
        self.scores
            .get(&msg.id)
            .copied()
            .ok_or_else(|| Error::MissingScore(msg.id.clone()))
    }
}

fn read_pairs(path: &Path) -> Result<Vec<(String, f64)>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rdr = csv::Reader::from_reader(file);
    let mut out = Vec::new();
    for rec in rdr.deserialize::<(String, f64)>() {
        let (key, value) = rec.map_err(|e| Error::Row {
            path: path.to_path_buf(),
            line: e.position().map(|p| p.line()).unwrap_or(0),
            reason: e.to_string(),
        })?;
        out.push((key.trim().to_owned(), value));
    }
    Ok(out)
}

pub fn score_message<T: Scalar>(
    msg: &Message,
    scorer: &dyn SentimentScorer<T>,
) -> Result<SentimentScore<T>> {
    scorer.score(msg)
}

/// Mean message sentiment; `None` for an empty window.
pub fn window_sentiment<T: Scalar>(scores: &[T]) -> Option<T> {
    if scores.is_empty() {
        return None;
    }
    Some(scores.iter().copied().sum::<T>() / T::of_usize(scores.len()))
}

/// Population standard deviation of message sentiment; `None` for an empty
/// window.
pub fn emotionality<T: Scalar>(scores: &[T]) -> Option<T> {
    let mean = window_sentiment(scores)?;
    if scores.iter().all(|&s| s == scores[0]) {
        return Some(T::zero());
    }
    let var = scores.iter().map(|&s| (s - mean) * (s - mean)).sum::<T>() / T::of_usize(scores.len());
    Some(var.sqrt())
}

/// Mean surprisal `log2(total / count(w))` of the window's tokens against
/// the reference vocabulary. Unknown tokens count as seen once.
pub fn complexity<T: Scalar>(streams: &[Vec<String>], vocab: &Vocabulary) -> Option<T> {
    let total = T::from_u64(vocab.total.max(1)).expect("count representable");
    let mut sum = T::zero();
    let mut tokens = 0usize;
    for t in streams.iter().flatten() {
        let count = T::from_u64(vocab.count(t).max(1)).expect("count representable");
        sum = sum + (total / count).log2();
        tokens += 1;
    }
    (tokens > 0).then(|| sum / T::of_usize(tokens))
}

/// Weekly semantic measures; `None` marks an empty window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindowSemantics<T> {
    pub sentiment: Option<T>,
    pub emotionality: Option<T>,
    pub complexity: Option<T>,
}

pub fn window_semantics<T: Scalar>(
    messages: &[Message],
    streams: &[Vec<String>],
    scorer: &dyn SentimentScorer<T>,
    vocab: &Vocabulary,
) -> Result<WindowSemantics<T>> {
    let scores = messages
        .iter()
        .map(|m| scorer.score(m).map(SentimentScore::value))
        .collect::<Result<Vec<T>>>()?;
    Ok(WindowSemantics {
        sentiment: window_sentiment(&scores),
        emotionality: emotionality(&scores),
        complexity: complexity(streams, vocab),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textproc::build_vocabulary;
    use proptest::prelude::*;

    fn msg(id: &str, body: &str) -> Message {
        Message {
            id: id.into(),
            author_id: "a".into(),
            parent_id: None,
            timestamp: "2015-01-05T10:00:00Z".parse().unwrap(),
            body: body.into(),
        }
    }

    fn lexicon() -> LexiconScorer<f64> {
        LexiconScorer::new([
            ("ottimo".to_string(), 1.0),
            ("bene".to_string(), 1.0),
            ("pessimo".to_string(), -1.0),
            ("discreto".to_string(), 0.2),
        ])
        .unwrap()
    }

    fn toks(words: &[&str]) -> Vec<String> {
        words.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn neutral_without_hits() {
        let s = score_message(&msg("1", "riunione alle dieci"), &lexicon()).unwrap();
        assert_eq!(s.value(), 0.5);
    }

    #[test]
    fn all_positive_is_one() {
        assert_eq!(lexicon().score(&msg("1", "Ottimo, bene!")).unwrap().value(), 1.0);
    }

    #[test]
    fn opposite_polarities_cancel() {
        assert_eq!(lexicon().score(&msg("1", "ottimo ma pessimo")).unwrap().value(), 0.5);
    }

    #[test]
    fn lexicon_rejects_out_of_range() {
        assert!(LexiconScorer::<f64>::new([("x".to_string(), 1.5)]).is_err());
    }

    #[test]
    fn precomputed_missing_id_named() {
        let p = PrecomputedScorer::<f64>::new([("1".to_string(), 0.7)]).unwrap();
        assert_eq!(p.score(&msg("1", "")).unwrap().value(), 0.7);
        match p.score(&msg("2", "")) {
            Err(Error::MissingScore(id)) => assert_eq!(id, "2"),
            other => panic!("{other:?}"),
        }
        assert!(PrecomputedScorer::<f64>::new([("1".to_string(), -0.1)]).is_err());
    }

    #[test]
    fn sentiment_means() {
        assert_eq!(window_sentiment(&[0.5]), Some(0.5));
        assert_eq!(window_sentiment(&[0.0, 1.0]), Some(0.5));
        let m: f64 = window_sentiment(&[0.2, 0.4, 0.9]).unwrap();
        assert!((m - 0.5).abs() < 1e-15);
        assert_eq!(window_sentiment::<f64>(&[]), None);
    }

    #[test]
    fn emotionality_cases() {
        assert_eq!(emotionality(&[0.7, 0.7, 0.7]), Some(0.0));
        assert_eq!(emotionality(&[0.1; 3]), Some(0.0));
        assert_eq!(emotionality(&[0.0, 1.0]), Some(0.5));
        assert_eq!(emotionality(&[0.5]), Some(0.0));
        assert_eq!(emotionality::<f64>(&[]), None);
    }

    #[test]
    fn complexity_single_word_corpus() {
        let streams = vec![toks(&["forum", "forum", "forum"])];
        let vocab = build_vocabulary(streams.iter().map(Vec::as_slice));
        assert_eq!(complexity::<f64>(&streams, &vocab), Some(0.0));
    }

    #[test]
    fn complexity_uniform_vocabulary() {
        for k in [2usize, 3, 5, 16, 37] {
            let words: Vec<String> = (0..k).map(|i| format!("w{i}")).collect();
            let streams = vec![words.clone(), words];
            let vocab = build_vocabulary(streams.iter().map(Vec::as_slice));
            let c: f64 = complexity(&streams, &vocab).unwrap();
            assert!((c - (k as f64).log2()).abs() < 1e-12, "k={k}: {c}");
        }
    }

    #[test]
    fn rarer_token_raises_complexity() {
        let corpus = [toks(&["a", "a", "a", "a", "b", "b", "c"])];
        let vocab = build_vocabulary(corpus.iter().map(Vec::as_slice));
        let common: f64 = complexity(&[toks(&["a", "b"])], &vocab).unwrap();
        let rarer: f64 = complexity(&[toks(&["c", "b"])], &vocab).unwrap();
        let unseen: f64 = complexity(&[toks(&["zzz", "b"])], &vocab).unwrap();
        assert!(rarer > common);
        assert_eq!(unseen, rarer);
        assert_eq!(complexity::<f64>(&[], &vocab), None);
    }

    #[test]
    fn empty_window_semantics_are_missing() {
        let vocab = Vocabulary::default();
        let ws = window_semantics::<f64>(&[], &[], &lexicon(), &vocab).unwrap();
        assert_eq!(ws.sentiment, None);
        assert_eq!(ws.emotionality, None);
        assert_eq!(ws.complexity, None);
    }

    #[test]
    fn f32_scoring() {
        let lex = LexiconScorer::<f32>::new([("bene".to_string(), 1.0f32)]).unwrap();
        assert_eq!(lex.score(&msg("1", "bene")).unwrap().value(), 1.0f32);
        assert_eq!(emotionality(&[0.0f32, 1.0]), Some(0.5));
    }

    proptest! {
        #[test]
        fn permutation_invariant(mut scores in prop::collection::vec(0.0f64..=1.0, 1..40)) {
            let (m, e) = (window_sentiment(&scores).unwrap(), emotionality(&scores).unwrap());
            scores.reverse();
            prop_assert!((m - window_sentiment(&scores).unwrap()).abs() < 1e-12);
            prop_assert!((e - emotionality(&scores).unwrap()).abs() < 1e-12);
        }

        #[test]
        fn population_identity(scores in prop::collection::vec(0.0f64..=1.0, 1..40)) {
            let m = window_sentiment(&scores).unwrap();
            let e = emotionality(&scores).unwrap();
            let mean_sq = scores.iter().map(|s| s * s).sum::<f64>() / scores.len() as f64;
            let lhs = e * e + m * m;
            prop_assert!((lhs - mean_sq).abs() <= 1e-12 * mean_sq.max(1e-300) + 1e-15);
        }

        #[test]
        fn complexity_monotone_in_frequency(
            window in prop::collection::vec(prop::sample::select(vec!["a", "b", "c"]), 1..12),
            target in prop::sample::select(vec!["a", "b", "c"]),
            shift in 1u64..50,
        ) {
            // mass moves from a filler word outside the window, total fixed
            let mut vocab = Vocabulary::default();
            vocab.add_stream(&toks(&["a", "b", "b", "c", "c", "c"]));
            vocab.counts.insert("filler".into(), 100);
            vocab.total += 100;
            let window = vec![window.into_iter().map(str::to_owned).collect::<Vec<_>>()];
            let before: f64 = complexity(&window, &vocab).unwrap();
            *vocab.counts.get_mut(target).unwrap() += shift;
            *vocab.counts.get_mut("filler").unwrap() -= shift;
            let after: f64 = complexity(&window, &vocab).unwrap();
            prop_assert!(after <= before + 1e-12);
        }
    }
}
