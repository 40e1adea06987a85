use std::fs;
use std::path::Path;

use netsignal::pipeline::config::PipelineConfig;
use netsignal::pipeline::features::{read_features_csv, run_features, FEATURES_FILE, GRAPHS_DIR};
use netsignal::pipeline::manifest::{changed_inputs, MANIFEST_FILE};
use netsignal::pipeline::{dry_run, ingest_check, run_all};
use netsignal::synth::{planted_corpus, write_demo};

fn demo(dir: &Path, weeks: usize) -> (netsignal::synth::PlantedCorpus, PipelineConfig) {
    let corpus = planted_corpus(weeks, 11);
    let path = write_demo(dir, &corpus).unwrap();
    (corpus, PipelineConfig::load(&path).unwrap())
}

#[test]
fn three_week_features() {
    let dir = tempfile::tempdir().unwrap();
    let (corpus, cfg) = demo(dir.path(), 3);
    let run = run_features(&cfg).unwrap();
    assert_eq!(run.features.len(), 3);
    let rows = read_features_csv(&cfg.output_dir.join(FEATURES_FILE)).unwrap();
    assert_eq!(rows.len(), 3);
    for (w, f) in rows.iter().enumerate() {
        assert_eq!(f.week, w);
        assert_eq!(f.activity_words, corpus.activity_words[w]);
        assert_eq!(f.activity_words, run.summaries[w].1.total_weight);
        assert!(f.sentiment.is_some() && f.emotionality.is_some() && f.complexity.is_some());
    }
}

#[test]
fn exported_word_graph_matches_activity_words() {
    let dir = tempfile::tempdir().unwrap();
    let (_, cfg) = demo(dir.path(), 4);
    let run = run_features(&cfg).unwrap();
    for f in &run.features {
        let path = cfg.output_dir.join(GRAPHS_DIR).join(format!("week_{:03}_words.csv", f.week));
        let text = fs::read_to_string(&path).unwrap();
        let total: u64 = text
            .lines()
            .skip(1)
            .map(|l| l.rsplit(',').next().unwrap().parse::<u64>().unwrap())
            .sum();
        assert_eq!(total, f.activity_words);
    }
}

#[test]
fn absent_focal_word_is_flagged() {
    let dir = tempfile::tempdir().unwrap();
    let (_, mut cfg) = demo(dir.path(), 3);
    cfg.network.focal_word = "assente".into();
    let run = run_features(&cfg).unwrap();
    for f in &run.features {
        assert!(f.focal_absent);
        assert_eq!(f.focal_degree, 0.0);
        assert_eq!(f.focal_betweenness, 0.0);
    }
}

#[test]
fn rerun_is_byte_identical_and_manifest_tracks_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let (_, cfg) = demo(dir.path(), 30);
    let first = run_all(&cfg).unwrap();
    let bytes = fs::read(cfg.output_dir.join(MANIFEST_FILE)).unwrap();
    let second = run_all(&cfg).unwrap();
    assert_eq!(first.manifest, second.manifest);
    assert_eq!(bytes, fs::read(cfg.output_dir.join(MANIFEST_FILE)).unwrap());
    assert!(changed_inputs(&cfg, &second.manifest).unwrap().is_empty());

    let mut price = fs::read_to_string(&cfg.inputs.price).unwrap();
    price.push('\n');
    fs::write(&cfg.inputs.price, price).unwrap();
    let changed = changed_inputs(&cfg, &second.manifest).unwrap();
    assert_eq!(changed.len(), 1, "{changed:?}");
}

#[test]
fn dry_run_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let (_, cfg) = demo(dir.path(), 3);
    dry_run(&cfg).unwrap();
    assert!(!cfg.output_dir.exists());
    let (summary, rejections) = ingest_check(&cfg).unwrap();
    assert!(rejections.is_empty());
    assert_eq!(summary.in_horizon, summary.messages);
    assert!(!cfg.output_dir.exists());
}
