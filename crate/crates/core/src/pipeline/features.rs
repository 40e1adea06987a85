//! Per-week feature extraction and the features CSV.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::config::{BetweennessMode, PipelineConfig};
use crate::centrality::{approx_betweenness, betweenness_centrality, centralization, degree_centrality};
use crate::corpus::{load_messages, partition_weeks, write_rejections, Message, Rejection, WindowedCorpus};
use crate::econometrics::WindowFeatures;
use crate::error::{Error, Result};
use crate::graphs::{activity, activity_words, build_interaction_network, build_word_network, GraphSummary, ParentIndex};
use crate::semantics::{window_semantics, LexiconScorer, PrecomputedScorer, SentimentBackend, SentimentScorer};
use crate::textproc::{build_vocabulary, load_word_set, Language, StopwordList, TextPipeline, TokenizerConfig};

pub const FEATURES_FILE: &str = "features.csv";
pub const REJECTIONS_FILE: &str = "rejections.csv";
pub const GRAPHS_DIR: &str = "graphs";

pub const FEATURE_COLUMNS: [&str; 12] = [
    "week",
    "start",
    "activity",
    "activity_words",
    "group_degree",
    "group_betweenness",
    "focal_degree",
    "focal_betweenness",
    "sentiment",
    "emotionality",
    "complexity",
    "focal_absent",
];

/// Knobs that shape one week's extraction.
#[derive(Debug, Clone)]
pub struct ExtractOptions {
    pub focal_word: String,
    pub window_size: usize,
    pub betweenness_mode: BetweennessMode,
    pub samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct WeekGraphs {
    pub interaction: crate::graphs::InteractionNetwork,
    pub words: crate::graphs::DirectedWeightedGraph,
}

#[derive(Debug)]
pub struct FeatureRun {
    pub features: Vec<WindowFeatures<f64>>,
    pub summaries: Vec<(GraphSummary, GraphSummary)>,
    pub rejections: Vec<Rejection>,
    pub dropped: usize,
    pub written: Vec<PathBuf>,
}

pub fn text_pipeline(cfg: &PipelineConfig) -> Result<TextPipeline> {
    let stop = match &cfg.inputs.stopwords {
        Some(p) => StopwordList::from_file(p, &cfg.text.language)?,
        None => StopwordList::builtin(cfg.text.language.parse::<Language>()?),
    };
    let mut p = TextPipeline::new(stop).with_tokenizer(TokenizerConfig {
        keep_digits: cfg.text.keep_digits,
    });
    if let Some(d) = &cfg.inputs.dictionary {
        p = p.with_dictionary(load_word_set(d)?);
    }
    if cfg.text.stem {
        p = p.with_stemming(&cfg.text.language)?;
    }
    Ok(p)
}

/// The focal word after the corpus token filter; must survive as exactly
/// one token.
pub fn focal_token(pipeline: &TextPipeline, word: &str) -> Result<String> {
    let toks = pipeline.process(word);
    match toks.as_slice() {
        [one] => Ok(one.clone()),
        _ => Err(Error::Config(format!(
            "focal word `{word}` becomes {toks:?} after token filtering; it must map to one token"
        ))),
    }
}

pub fn scorer(cfg: &PipelineConfig) -> Result<Box<dyn SentimentScorer<f64>>> {
    Ok(match cfg.sentiment.backend {
        SentimentBackend::Lexicon => {
            let path = cfg.inputs.lexicon.as_ref().ok_or_else(|| Error::Config("missing lexicon".into()))?;
            Box::new(LexiconScorer::<f64>::from_csv(path)?)
        }
        SentimentBackend::Precomputed => {
            let path = cfg
                .inputs
                .precomputed_sentiment
                .as_ref()
                .ok_or_else(|| Error::Config("missing precomputed sentiment".into()))?;
            Box::new(PrecomputedScorer::<f64>::from_csv(path)?)
        }
    })
}

/// Compute one week's features from its messages and token streams.
pub fn extract_week(
    week: usize,
    messages: &[Message],
    streams: &[Vec<String>],
    parents: &ParentIndex,
    scorer: &dyn SentimentScorer<f64>,
    vocab: &crate::textproc::Vocabulary,
    opts: &ExtractOptions,
) -> Result<(WindowFeatures<f64>, WeekGraphs)> {
    let interaction = build_interaction_network(messages, parents);
    let words = build_word_network(streams, opts.window_size)?;

    let ig = &interaction.graph;
    let group = |c: Result<_>| c.ok().map(|s: crate::centrality::CentralizationScore<f64>| s.value);
    let group_degree = group(centralization(&degree_centrality::<f64>(ig)));
    let group_betweenness = group(centralization(&betweenness_centrality::<f64>(ig)));

    let focal_present = words.contains(&opts.focal_word);
    let (focal_degree, focal_betweenness) = if focal_present {
        let deg = degree_centrality::<f64>(&words)
            .normalized_of(&opts.focal_word)
            .unwrap_or(0.0);
        let btw = match opts.betweenness_mode {
            BetweennessMode::Exact => betweenness_centrality::<f64>(&words),
            BetweennessMode::Sampled => {
                let k = opts.samples.min(words.node_count());
                approx_betweenness::<f64>(&words, k, opts.seed.wrapping_add(week as u64))?
            }
        };
        (deg, btw.normalized_of(&opts.focal_word).unwrap_or(0.0))
    } else {
        (0.0, 0.0)
    };

    let sem = window_semantics(messages, streams, scorer, vocab)?;
    let features = WindowFeatures {
        week,
        activity: activity(messages),
        activity_words: activity_words(&words),
        group_degree,
        group_betweenness,
        focal_degree,
        focal_betweenness,
        sentiment: sem.sentiment,
        emotionality: sem.emotionality,
        complexity: sem.complexity,
        focal_absent: !focal_present,
    };
    Ok((features, WeekGraphs { interaction, words }))
}

/// Extract features for every week of an already partitioned corpus.
/// Complexity is measured against the vocabulary of the whole horizon.
pub fn extract_all(
    corpus: &WindowedCorpus,
    parents: &ParentIndex,
    pipeline: &TextPipeline,
    scorer: &dyn SentimentScorer<f64>,
    opts: &ExtractOptions,
) -> Result<Vec<(WindowFeatures<f64>, WeekGraphs)>> {
    let streams: Vec<Vec<Vec<String>>> = corpus
        .messages_by_window
        .par_iter()
        .map(|msgs| msgs.iter().map(|m| pipeline.process(&m.body)).collect())
        .collect();
    let vocab = build_vocabulary(streams.iter().flatten().map(Vec::as_slice));
    corpus
        .messages_by_window
        .par_iter()
        .zip(streams.par_iter())
        .enumerate()
        .map(|(week, (msgs, s))| {
            extract_week(week, msgs, s, parents, scorer, &vocab, opts).map_err(|e| Error::InWindow {
                window: week,
                source: Box::new(e),
            })
        })
        .collect()
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_features_csv(path: &Path, corpus: &WindowedCorpus, features: &[WindowFeatures<f64>]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    let res = (|| -> std::result::Result<(), csv::Error> {
        wtr.write_record(FEATURE_COLUMNS)?;
        for f in features {
            wtr.write_record([
                f.week.to_string(),
                corpus.grid.window(f.week).start.to_rfc3339(),
                f.activity.to_string(),
                f.activity_words.to_string(),
                opt(f.group_degree),
                opt(f.group_betweenness),
                f.focal_degree.to_string(),
                f.focal_betweenness.to_string(),
                opt(f.sentiment),
                opt(f.emotionality),
                opt(f.complexity),
                u8::from(f.focal_absent).to_string(),
            ])?;
        }
        Ok(())
    })();
    res.map_err(|e| Error::Invalid(e.to_string()))?;
    let bytes = wtr.into_inner().map_err(|e| Error::Invalid(e.to_string()))?;
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// Read a features CSV back; every column in [`FEATURE_COLUMNS`] except
/// `start` is required.
pub fn read_features_csv(path: &Path) -> Result<Vec<WindowFeatures<f64>>> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rdr = csv::Reader::from_reader(file);
    let headers = rdr
        .headers()
        .map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?
        .clone();
    let mut idx = std::collections::HashMap::new();
    for col in FEATURE_COLUMNS.iter().filter(|c| **c != "start") {
        let i = headers
            .iter()
            .position(|h| h == *col)
            .ok_or_else(|| Error::MissingColumn((*col).to_owned()))?;
        idx.insert(*col, i);
    }
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let cell = |c: &str| rec.get(idx[c]).unwrap_or("").trim();
        let row_err = |c: &str, e: String| Error::Row {
            path: path.to_path_buf(),
            line,
            reason: format!("column `{c}`: {e}"),
        };
        let int = |c: &str| -> Result<u64> { cell(c).parse().map_err(|e: std::num::ParseIntError| row_err(c, e.to_string())) };
        let real = |c: &str| -> Result<Option<f64>> {
            match cell(c) {
                "" => Ok(None),
                s => s
                    .parse()
                    .map(Some)
                    .map_err(|e: std::num::ParseFloatError| row_err(c, e.to_string())),
            }
        };
        let required = |c: &str| -> Result<f64> { real(c)?.ok_or_else(|| row_err(c, "empty".into())) };
        out.push(WindowFeatures {
            week: int("week")? as usize,
            activity: int("activity")?,
            activity_words: int("activity_words")?,
            group_degree: real("group_degree")?,
            group_betweenness: real("group_betweenness")?,
            focal_degree: required("focal_degree")?,
            focal_betweenness: required("focal_betweenness")?,
            sentiment: real("sentiment")?,
            emotionality: real("emotionality")?,
            complexity: real("complexity")?,
            focal_absent: int("focal_absent")? != 0,
        });
    }
    Ok(out)
}

fn write_graphs(dir: &Path, week: usize, g: &WeekGraphs) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    let mut edge_list = |name: String, graph: &crate::graphs::DirectedWeightedGraph| -> Result<()> {
        let path = dir.join(name);
        let mut buf = Vec::new();
        graph.write_edge_list(&mut buf)?;
        fs::write(&path, buf).map_err(|e| Error::io(&path, e))?;
        out.push(path);
        Ok(())
    };
    edge_list(format!("week_{week:03}_interaction.csv"), &g.interaction.graph)?;
    edge_list(format!("week_{week:03}_words.csv"), &g.words)?;
    let summary = serde_json::json!({
        "week": week,
        "interaction": g.interaction.graph.summary(),
        "interaction_dangling_parents": g.interaction.dangling_parents,
        "words": g.words.summary(),
    });
    let path = dir.join(format!("week_{week:03}_summary.json"));
    let text = serde_json::to_string_pretty(&summary).map_err(|e| Error::Invalid(e.to_string()))?;
    fs::write(&path, text + "\n").map_err(|e| Error::io(&path, e))?;
    out.push(path);
    Ok(out)
}

fn with_workers<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> Result<R> {
    if workers == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start {workers} workers: {e}")))?;
    Ok(pool.install(f))
}

/// Load inputs, extract weekly features, and write `features.csv`, the
/// rejection report and (optionally) per-week graph exports.
pub fn run_features(cfg: &PipelineConfig) -> Result<FeatureRun> {
    let pipeline = text_pipeline(cfg)?;
    let focal = focal_token(&pipeline, &cfg.network.focal_word)?;
    let scorer = scorer(cfg)?;
    let loaded = load_messages(&cfg.inputs.messages, cfg.message_format())?;
    let corpus = partition_weeks(&loaded.messages, cfg.horizon.start, cfg.horizon.weeks)?;
    let parents = ParentIndex::from_messages(&loaded.messages);
    let opts = ExtractOptions {
        focal_word: focal,
        window_size: cfg.network.window_size,
        betweenness_mode: cfg.network.betweenness_mode,
        samples: cfg.network.samples,
        seed: cfg.network.seed,
    };
    let weeks = with_workers(cfg.network.workers, || {
        extract_all(&corpus, &parents, &pipeline, scorer.as_ref(), &opts)
    })??;

    let out = &cfg.output_dir;
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let mut written = Vec::new();
    let rej_path = out.join(REJECTIONS_FILE);
    let f = fs::File::create(&rej_path).map_err(|e| Error::io(&rej_path, e))?;
    write_rejections(f, &loaded.rejections)?;
    written.push(rej_path);

    let features: Vec<WindowFeatures<f64>> = weeks.iter().map(|(f, _)| f.clone()).collect();
    let feat_path = out.join(FEATURES_FILE);
    write_features_csv(&feat_path, &corpus, &features)?;
    written.push(feat_path);

    if cfg.network.export_graphs {
        let gdir = out.join(GRAPHS_DIR);
        fs::create_dir_all(&gdir).map_err(|e| Error::io(&gdir, e))?;
        for (f, g) in &weeks {
            written.extend(write_graphs(&gdir, f.week, g)?);
        }
    }
    let summaries = weeks
        .iter()
        .map(|(_, g)| (g.interaction.graph.summary(), g.words.summary()))
        .collect();
    Ok(FeatureRun {
        features,
        summaries,
        rejections: loaded.rejections,
        dropped: corpus.dropped,
        written,
    })
}
