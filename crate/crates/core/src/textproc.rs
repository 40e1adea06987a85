//! Tokenization, stopword/dictionary filtering, optional stemming and
//! corpus word frequencies.
//!
//! Segmentation rule: a token is a maximal run of alphanumeric characters,
//! where a single hyphen between two alphanumeric characters is kept inside
//! the token (`e-mail`). Everything else, apostrophes included, separates
//! tokens. Tokens are lowercased; tokens made only of digits are dropped
//! unless `keep_digits` is set.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::Path;
use std::str::FromStr;

use rust_stemmers::{Algorithm, Stemmer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenizerConfig {
    #[serde(default)]
    pub keep_digits: bool,
}

pub fn tokenize(body: &str) -> Vec<String> {
    tokenize_with(body, TokenizerConfig::default())
}

pub fn tokenize_with(body: &str, cfg: TokenizerConfig) -> Vec<String> {
    let chars: Vec<char> = body.chars().collect();
    let mut tokens = Vec::new();
    let mut current = String::new();
    for (i, &c) in chars.iter().enumerate() {
        if c.is_alphanumeric() {
            current.extend(c.to_lowercase());
        } else if c == '-'
            && !current.is_empty()
            && chars.get(i + 1).is_some_and(|n| n.is_alphanumeric())
        {
            current.push('-');
        } else if !current.is_empty() {
            push_token(&mut tokens, std::mem::take(&mut current), cfg);
        }
    }
    if !current.is_empty() {
        push_token(&mut tokens, current, cfg);
    }
    tokens
}

fn push_token(tokens: &mut Vec<String>, tok: String, cfg: TokenizerConfig) {
    if cfg.keep_digits || !tok.chars().all(|c| c.is_numeric() || c == '-') {
        tokens.push(tok);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    Italian,
    English,
}

impl FromStr for Language {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "it" | "ita" | "italian" => Ok(Language::Italian),
            "en" | "eng" | "english" => Ok(Language::English),
            other => Err(Error::UnsupportedLanguage(other.to_owned())),
        }
    }
}

impl Language {
    pub fn tag(self) -> &'static str {
        match self {
            Language::Italian => "it",
            Language::English => "en",
        }
    }

    fn stemmer(self) -> Stemmer {
        Stemmer::create(match self {
            Language::Italian => Algorithm::Italian,
            Language::English => Algorithm::English,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StopwordList {
    pub language: String,
    pub words: HashSet<String>,
}

impl StopwordList {
    pub fn builtin(language: Language) -> Self {
        let raw = match language {
            Language::Italian => include_str!("../data/stopwords_it.txt"),
            Language::English => include_str!("../data/stopwords_en.txt"),
        };
        StopwordList {
            language: language.tag().to_owned(),
            words: parse_word_list(raw),
        }
    }

    pub fn from_file(path: &Path, language: &str) -> Result<Self> {
        let words = load_word_set(path)?;
        if words.is_empty() {
            return Err(Error::Config(format!(
                "stopword file {} is empty",
                path.display()
            )));
        }
        Ok(StopwordList {
            language: language.to_owned(),
            words,
        })
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }
}

fn parse_word_list(raw: &str) -> HashSet<String> {
    raw.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_lowercase)
        .collect()
}

/// One word per line, UTF-8. Used for stopword and dictionary files.
pub fn load_word_set(path: &Path) -> Result<HashSet<String>> {
    let raw = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(parse_word_list(&raw))
}

/// Drop stopwords and, when a dictionary is given, out-of-dictionary
/// tokens. Survivors keep their relative order and close up the gaps.
pub fn filter_tokens(
    tokens: &[String],
    stop: &StopwordList,
    dictionary: Option<&HashSet<String>>,
) -> Vec<String> {
    tokens
        .iter()
        .filter(|t| !stop.contains(t))
        .filter(|t| dictionary.is_none_or(|d| d.contains(t.as_str())))
        .cloned()
        .collect()
}

pub fn stem_tokens(tokens: &[String], language: &str) -> Result<Vec<String>> {
    let stemmer = Language::from_str(language)?.stemmer();
    Ok(tokens.iter().map(|t| stemmer.stem(t).into_owned()).collect())
}

/// Tokenize → filter → (optional) stem, with fixed configuration.
pub struct TextPipeline {
    pub tokenizer: TokenizerConfig,
    pub stopwords: StopwordList,
    pub dictionary: Option<HashSet<String>>,
    stemmer: Option<Stemmer>,
}

impl std::fmt::Debug for TextPipeline {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TextPipeline")
            .field("tokenizer", &self.tokenizer)
            .field("stopwords", &self.stopwords.language)
            .field("dictionary", &self.dictionary.as_ref().map(HashSet::len))
            .field("stem", &self.stemmer.is_some())
            .finish()
    }
}

impl TextPipeline {
    pub fn new(stopwords: StopwordList) -> Self {
        TextPipeline {
            tokenizer: TokenizerConfig::default(),
            stopwords,
            dictionary: None,
            stemmer: None,
        }
    }

    pub fn with_dictionary(mut self, dictionary: HashSet<String>) -> Self {
        self.dictionary = Some(dictionary);
        self
    }

    pub fn with_tokenizer(mut self, cfg: TokenizerConfig) -> Self {
        self.tokenizer = cfg;
        self
    }

    pub fn with_stemming(mut self, language: &str) -> Result<Self> {
        self.stemmer = Some(Language::from_str(language)?.stemmer());
        Ok(self)
    }

    pub fn process(&self, body: &str) -> Vec<String> {
        let tokens = tokenize_with(body, self.tokenizer);
        let filtered = filter_tokens(&tokens, &self.stopwords, self.dictionary.as_ref());
        match &self.stemmer {
            Some(s) => filtered.into_iter().map(|t| s.stem(&t).into_owned()).collect(),
            None => filtered,
        }
    }
}

/// Corpus-level word counts after filtering.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vocabulary {
    pub counts: HashMap<String, u64>,
    pub total: u64,
}

impl Vocabulary {
    pub fn count(&self, word: &str) -> u64 {
        self.counts.get(word).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn add_stream(&mut self, stream: &[String]) {
        for t in stream {
            *self.counts.entry(t.clone()).or_insert(0) += 1;
        }
        self.total += stream.len() as u64;
    }

    /// Commutative merge; vocabularies built on disjoint scopes combine
    /// into the vocabulary of the union.
    pub fn merge(mut self, other: Vocabulary) -> Vocabulary {
        for (w, c) in other.counts {
            *self.counts.entry(w).or_insert(0) += c;
        }
        self.total += other.total;
        self
    }
}

pub fn build_vocabulary<'a, I>(streams: I) -> Vocabulary
where
    I: IntoIterator<Item = &'a [String]>,
{
    let mut vocab = Vocabulary::default();
    for s in streams {
        vocab.add_stream(s);
    }
    vocab
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn toks(words: &[&str]) -> Vec<String> {
        words.iter().map(|s| s.to_string()).collect()
    }

    fn stop(words: &[&str]) -> StopwordList {
        StopwordList {
            language: "it".into(),
            words: words.iter().map(|s| s.to_string()).collect(),
        }
    }

    #[test]
    fn hello_dolly() {
        assert_eq!(tokenize("Hello Dolly"), toks(&["hello", "dolly"]));
    }

    #[test]
    fn empty_body() {
        assert!(tokenize("").is_empty());
    }

    #[test]
    fn hyphen_preserved_punctuation_dropped() {
        assert_eq!(tokenize("E-mail, e-mail!"), toks(&["e-mail", "e-mail"]));
        assert_eq!(tokenize("- dash -word- x--y"), toks(&["dash", "word", "x", "y"]));
    }

    #[test]
    fn digits_and_apostrophes() {
        assert_eq!(
            tokenize("L'azienda ha 50000 dipendenti nel 2015, covid19"),
            toks(&["l", "azienda", "ha", "dipendenti", "nel", "covid19"])
        );
        let keep = TokenizerConfig { keep_digits: true };
        assert_eq!(tokenize_with("anno 2015", keep), toks(&["anno", "2015"]));
    }

    #[test]
    fn unicode_lowercasing() {
        assert_eq!(tokenize("PERCHÉ Così"), toks(&["perché", "così"]));
    }

    #[test]
    fn single_stopword_removed() {
        assert_eq!(
            filter_tokens(&toks(&["il", "gatto", "nero"]), &stop(&["il"]), None),
            toks(&["gatto", "nero"])
        );
    }

    #[test]
    fn all_stopwords() {
        assert!(filter_tokens(&toks(&["il", "la"]), &stop(&["il", "la"]), None).is_empty());
    }

    #[test]
    fn dictionary_filter_compacts_stream() {
        let dict: HashSet<String> = ["gatto", "nero"].iter().map(|s| s.to_string()).collect();
        let out = filter_tokens(&toks(&["gatto", "nerro", "nero"]), &stop(&[]), Some(&dict));
        assert_eq!(out, toks(&["gatto", "nero"]));
        let g = crate::graphs::build_word_network(&[out], 1).unwrap();
        assert_eq!(g.weight("gatto", "nero"), Some(1));
    }

    #[test]
    fn builtin_stopwords_non_empty() {
        for lang in [Language::Italian, Language::English] {
            let s = StopwordList::builtin(lang);
            assert!(!s.words.is_empty());
        }
        assert!(StopwordList::builtin(Language::Italian).contains("della"));
        assert!(StopwordList::builtin(Language::English).contains("the"));
    }

    #[test]
    fn stemming_collapses_inflections() {
        let fixtures: &[(&str, &[&str])] = &[
            ("en", &["running", "runs", "run"]),
            ("en", &["connection", "connected", "connecting"]),
            ("it", &["azienda", "aziende"]),
            ("it", &["lavoro", "lavori"]),
        ];
        for (lang, words) in fixtures {
            let stems = stem_tokens(&toks(words), lang).unwrap();
            assert!(stems.windows(2).all(|w| w[0] == w[1]), "{lang}: {stems:?}");
        }
    }

    #[test]
    fn stemming_edges() {
        assert!(stem_tokens(&[], "en").unwrap().is_empty());
        assert!(matches!(
            stem_tokens(&toks(&["x"]), "klingon"),
            Err(Error::UnsupportedLanguage(_))
        ));
        let p = TextPipeline::new(stop(&[]));
        assert_eq!(p.process("running runs"), toks(&["running", "runs"]));
    }

    #[test]
    fn vocabulary_counts() {
        let streams = [toks(&["a", "b"]), toks(&["a"])];
        let v = build_vocabulary(streams.iter().map(Vec::as_slice));
        assert_eq!(v.count("a"), 2);
        assert_eq!(v.count("b"), 1);
        assert_eq!(v.total, 3);
        let empty = build_vocabulary(std::iter::empty());
        assert!(empty.is_empty());
        assert_eq!(empty.total, 0);
    }

    fn word() -> impl Strategy<Value = String> {
        prop::sample::select(vec!["il", "gatto", "nero", "la", "casa", "di", "rosso"])
            .prop_map(str::to_owned)
    }

    proptest! {
        #[test]
        fn filter_output_is_subsequence(tokens in prop::collection::vec(word(), 0..30)) {
            let out = filter_tokens(&tokens, &stop(&["il", "la", "di"]), None);
            let mut it = tokens.iter();
            for t in &out {
                prop_assert!(it.any(|x| x == t));
            }
        }

        #[test]
        fn vocabulary_matches_recount(streams in prop::collection::vec(prop::collection::vec(word(), 0..10), 0..10)) {
            let v = build_vocabulary(streams.iter().map(Vec::as_slice));
            let flat: Vec<&String> = streams.iter().flatten().collect();
            prop_assert_eq!(v.total as usize, flat.len());
            for (w, c) in &v.counts {
                prop_assert_eq!(*c as usize, flat.iter().filter(|x| **x == w).count());
            }
            let halves = streams.split_at(streams.len() / 2);
            let merged = build_vocabulary(halves.0.iter().map(Vec::as_slice))
                .merge(build_vocabulary(halves.1.iter().map(Vec::as_slice)));
            prop_assert_eq!(merged, v);
        }

        #[test]
        fn tokenize_is_deterministic(body in "\\PC{0,60}") {
            let a = tokenize(&body);
            prop_assert_eq!(&a, &tokenize(&body));
            prop_assert!(a.iter().all(|t| !t.is_empty() && !t.chars().any(char::is_whitespace)));
        }
    }
}
