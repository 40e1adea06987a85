//! Message and market-series ingestion, and the weekly window grid.

use std::collections::{BTreeMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;

use chrono::{DateTime, Duration, NaiveDate, SubsecRound, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SECONDS_PER_WEEK: i64 = 7 * 24 * 3600;

/// One forum post or comment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Message {
    pub id: String,
    pub author_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent_id: Option<String>,
    pub timestamp: DateTime<Utc>,
    #[serde(default)]
    pub body: String,
}

impl Message {
    pub fn is_comment(&self) -> bool {
        self.parent_id.is_some()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MessageFormat {
    Jsonl,
    Csv,
}

impl FromStr for MessageFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "jsonl" | "json" | "ndjson" => Ok(MessageFormat::Jsonl),
            "csv" => Ok(MessageFormat::Csv),
            other => Err(Error::Config(format!("unknown message format `{other}`"))),
        }
    }
}

impl MessageFormat {
    /// Guess from the file extension; anything not `.csv` is read as JSON lines.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => MessageFormat::Csv,
            _ => MessageFormat::Jsonl,
        }
    }
}

/// A row that failed to parse. `line` is 1-based and counts the CSV header.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rejection {
    pub line: u64,
    pub reason: String,
}

#[derive(Debug, Clone, Default)]
pub struct LoadedMessages {
    pub messages: Vec<Message>,
    pub rejections: Vec<Rejection>,
}

#[derive(Debug, Default, Deserialize)]
struct RawMessage {
    id: Option<String>,
    author_id: Option<String>,
    parent_id: Option<String>,
    timestamp: Option<String>,
    body: Option<String>,
}

impl RawMessage {
    fn into_message(self) -> std::result::Result<Message, String> {
        let id = required(self.id, "id")?;
        let author_id = required(self.author_id, "author_id")?;
        let raw_ts = required(self.timestamp, "timestamp")?;
        let timestamp = parse_timestamp(&raw_ts)?;
        let parent_id = self.parent_id.filter(|p| !p.trim().is_empty());
        Ok(Message {
            id,
            author_id,
            parent_id,
            timestamp,
            body: self.body.unwrap_or_default(),
        })
    }
}

fn required(v: Option<String>, key: &str) -> std::result::Result<String, String> {
    match v {
        Some(s) if !s.trim().is_empty() => Ok(s),
        _ => Err(format!("missing required field `{key}`")),
    }
}

/// RFC 3339 instant truncated to whole seconds.
pub fn parse_timestamp(s: &str) -> std::result::Result<DateTime<Utc>, String> {
    DateTime::parse_from_rfc3339(s.trim())
        .map(|t| t.with_timezone(&Utc).trunc_subsecs(0))
        .map_err(|e| format!("unparseable timestamp `{s}`: {e}"))
}

/// Read messages in file order. Row-level problems go to the rejection
/// report; only an unreadable file or a CSV header lacking a required
/// column fails the whole load.
pub fn load_messages(path: &Path, format: MessageFormat) -> Result<LoadedMessages> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = LoadedMessages::default();
    let mut seen = HashSet::new();
    let mut accept = |line: u64, raw: RawMessage, out: &mut LoadedMessages| match raw.into_message() {
        Ok(m) if !seen.insert(m.id.clone()) => out.rejections.push(Rejection {
            line,
            reason: format!("duplicate message id `{}`", m.id),
        }),
        Ok(m) => out.messages.push(m),
        Err(reason) => out.rejections.push(Rejection { line, reason }),
    };

    match format {
        MessageFormat::Jsonl => {
            for (i, line) in BufReader::new(file).lines().enumerate() {
                let lineno = i as u64 + 1;
                let line = line.map_err(|e| Error::io(path, e))?;
                if line.trim().is_empty() {
                    continue;
                }
                match serde_json::from_str::<RawMessage>(&line) {
                    Ok(raw) => accept(lineno, raw, &mut out),
                    Err(e) => out.rejections.push(Rejection {
                        line: lineno,
                        reason: format!("malformed JSON: {e}"),
                    }),
                }
            }
        }
        MessageFormat::Csv => {
            let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(file);
            let headers = rdr
                .headers()
                .map_err(|e| csv_error(path, e))?
                .clone();
            for key in ["id", "author_id", "timestamp"] {
                if !headers.iter().any(|h| h.trim() == key) {
                    return Err(Error::Row {
                        path: path.to_path_buf(),
                        line: 1,
                        reason: format!("missing required column `{key}`"),
                    });
                }
            }
            for record in rdr.records() {
                let record = match record {
                    Ok(r) => r,
                    Err(e) => {
                        let line = e.position().map(|p| p.line()).unwrap_or(0);
                        out.rejections.push(Rejection {
                            line,
                            reason: e.to_string(),
                        });
                        continue;
                    }
                };
                let line = record.position().map(|p| p.line()).unwrap_or(0);
                let get = |key: &str| {
                    headers
                        .iter()
                        .position(|h| h.trim() == key)
                        .and_then(|i| record.get(i))
                        .map(str::to_owned)
                };
                let raw = RawMessage {
                    id: get("id"),
                    author_id: get("author_id"),
                    parent_id: get("parent_id"),
                    timestamp: get("timestamp"),
                    body: get("body"),
                };
                accept(line, raw, &mut out);
            }
        }
    }
    Ok(out)
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    Error::Row {
        path: path.to_path_buf(),
        line,
        reason: e.to_string(),
    }
}

/// Write a rejection report as CSV with header `line,reason`.
pub fn write_rejections<W: Write>(w: W, rejections: &[Rejection]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["line", "reason"])
        .and_then(|_| {
            for r in rejections {
                wtr.serialize((r.line, &r.reason))?;
            }
            wtr.flush().map_err(csv::Error::from)
        })
        .map_err(|e| Error::Invalid(e.to_string()))
}

/// Fixed 7-day blocks anchored at `start`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeekGrid {
    pub start: DateTime<Utc>,
    pub weeks: usize,
}

impl WeekGrid {
    pub fn new(start: DateTime<Utc>, weeks: usize) -> Result<Self> {
        if weeks == 0 {
            return Err(Error::Invalid("horizon must span at least one week".into()));
        }
        Ok(WeekGrid { start, weeks })
    }

    pub fn end(&self) -> DateTime<Utc> {
        self.start + Duration::seconds(SECONDS_PER_WEEK * self.weeks as i64)
    }

    /// Window index containing `t`, or `None` outside `[start, end)`.
    pub fn index_of(&self, t: DateTime<Utc>) -> Option<usize> {
        let offset = (t - self.start).num_seconds();
        if offset < 0 {
            return None;
        }
        let idx = (offset / SECONDS_PER_WEEK) as usize;
        (idx < self.weeks).then_some(idx)
    }

    pub fn window(&self, index: usize) -> TimeWindow {
        let start = self.start + Duration::seconds(SECONDS_PER_WEEK * index as i64);
        TimeWindow {
            index,
            start,
            end: start + Duration::seconds(SECONDS_PER_WEEK),
        }
    }

    pub fn windows(&self) -> Vec<TimeWindow> {
        (0..self.weeks).map(|i| self.window(i)).collect()
    }
}

/// Half-open interval `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TimeWindow {
    pub index: usize,
    pub start: DateTime<Utc>,
    pub end: DateTime<Utc>,
}

impl TimeWindow {
    pub fn contains(&self, t: DateTime<Utc>) -> bool {
        self.start <= t && t < self.end
    }
}

#[derive(Debug, Clone)]
pub struct WindowedCorpus {
    pub grid: WeekGrid,
    pub windows: Vec<TimeWindow>,
    /// Messages per window, sorted by (timestamp, id).
    pub messages_by_window: Vec<Vec<Message>>,
    pub dropped: usize,
}

impl WindowedCorpus {
    pub fn message_count(&self) -> usize {
        self.messages_by_window.iter().map(Vec::len).sum()
    }

    pub fn all_messages(&self) -> impl Iterator<Item = &Message> {
        self.messages_by_window.iter().flatten()
    }
}

/// Assign each message to its week; out-of-range messages are counted in
/// `dropped`. Result does not depend on input order.
pub fn partition_weeks(
    messages: &[Message],
    horizon_start: DateTime<Utc>,
    horizon_weeks: usize,
) -> Result<WindowedCorpus> {
    let grid = WeekGrid::new(horizon_start, horizon_weeks)?;
    let mut by_window: Vec<Vec<Message>> = vec![Vec::new(); horizon_weeks];
    let mut dropped = 0;
    for m in messages {
        match grid.index_of(m.timestamp) {
            Some(i) => by_window[i].push(m.clone()),
            None => dropped += 1,
        }
    }
    for w in &mut by_window {
        w.sort_by(|a, b| a.timestamp.cmp(&b.timestamp).then_with(|| a.id.cmp(&b.id)));
    }
    if dropped > 0 {
        log::info!("{dropped} messages fall outside the {horizon_weeks}-week horizon");
    }
    Ok(WindowedCorpus {
        grid,
        windows: grid.windows(),
        messages_by_window: by_window,
        dropped,
    })
}

/// End-of-week closing values keyed by week index.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarketSeries {
    pub name: String,
    pub values: BTreeMap<usize, f64>,
}

impl MarketSeries {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Dense view over `weeks` slots; gaps become `None`.
    pub fn dense(&self, weeks: usize) -> Vec<Option<f64>> {
        (0..weeks).map(|w| self.values.get(&w).copied()).collect()
    }
}

/// Load a two-column `(week,value)` or `(date,value)` CSV. Dates are mapped
/// onto `grid`, which is required for the date form.
pub fn load_market_series(path: &Path, name: &str, grid: Option<&WeekGrid>) -> Result<MarketSeries> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rdr = csv::Reader::from_reader(file);
    let headers = rdr.headers().map_err(|e| csv_error(path, e))?.clone();
    let key_col = headers.iter().position(|h| {
        let h = h.trim();
        h == "week" || h == "date"
    });
    let value_col = headers.iter().position(|h| h.trim() == "value");
    let (Some(key_col), Some(value_col)) = (key_col, value_col) else {
        return Err(Error::Row {
            path: path.to_path_buf(),
            line: 1,
            reason: "expected header (week,value) or (date,value)".into(),
        });
    };
    let by_date = headers.get(key_col).map(str::trim) == Some("date");
    if by_date && grid.is_none() {
        return Err(Error::Config(
            "date-keyed market series needs a horizon start".into(),
        ));
    }

    let mut values = BTreeMap::new();
    for record in rdr.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let row_err = |reason: String| Error::Row {
            path: path.to_path_buf(),
            line,
            reason,
        };
        let key = record.get(key_col).unwrap_or("").trim();
        let week: i64 = if by_date {
            let grid = grid.expect("checked above");
            let date = NaiveDate::parse_from_str(key, "%Y-%m-%d")
                .map_err(|e| row_err(format!("bad date `{key}`: {e}")))?;
            let t = date.and_hms_opt(0, 0, 0).expect("midnight").and_utc();
            let offset = (t - grid.start).num_seconds();
            if offset < 0 {
                return Err(row_err(format!("date {key} precedes the horizon start")));
            }
            offset / SECONDS_PER_WEEK
        } else {
            key.parse()
                .map_err(|e| row_err(format!("bad week index `{key}`: {e}")))?
        };
        if week < 0 {
            return Err(row_err(format!("negative week index {week}")));
        }
        let raw = record.get(value_col).unwrap_or("").trim();
        let value: f64 = raw
            .parse()
            .map_err(|e| row_err(format!("bad value `{raw}`: {e}")))?;
        if !value.is_finite() {
            return Err(Error::NonFinite { week });
        }
        if values.insert(week as usize, value).is_some() {
            return Err(Error::DuplicateWeek { week });
        }
    }
    Ok(MarketSeries {
        name: name.to_owned(),
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ts(s: &str) -> DateTime<Utc> {
        parse_timestamp(s).unwrap()
    }

    fn msg(id: &str, t: &str) -> Message {
        Message {
            id: id.into(),
            author_id: "a".into(),
            parent_id: None,
            timestamp: ts(t),
            body: String::new(),
        }
    }

    fn write_tmp(contents: &str, ext: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::Builder::new().suffix(ext).tempfile().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn single_valid_jsonl_row() {
        let f = write_tmp(
            r#"{"id":"1","author_id":"a","timestamp":"2015-01-05T10:00:00Z","body":"Hello Dolly"}"#,
            ".jsonl",
        );
        let loaded = load_messages(f.path(), MessageFormat::Jsonl).unwrap();
        assert_eq!(loaded.messages.len(), 1);
        assert!(loaded.rejections.is_empty());
        assert_eq!(loaded.messages[0].parent_id, None);
    }

    #[test]
    fn empty_file_gives_no_messages() {
        let f = write_tmp("", ".jsonl");
        let loaded = load_messages(f.path(), MessageFormat::Jsonl).unwrap();
        assert!(loaded.messages.is_empty());
        assert!(loaded.rejections.is_empty());
    }

    #[test]
    fn csv_row_missing_timestamp_is_rejected_with_line() {
        let f = write_tmp(
            "id,author_id,parent_id,timestamp,body\n\
             1,a,,2015-01-05T10:00:00Z,hello\n\
             2,b,1,,reply\n\
             3,c,1,2015-01-06T10:00:00+01:00,other\n",
            ".csv",
        );
        let loaded = load_messages(f.path(), MessageFormat::Csv).unwrap();
        assert_eq!(loaded.messages.len(), 2);
        assert_eq!(loaded.rejections.len(), 1);
        assert_eq!(loaded.rejections[0].line, 3);
        assert!(loaded.rejections[0].reason.contains("timestamp"));
        assert_eq!(loaded.messages[1].timestamp, ts("2015-01-06T09:00:00Z"));
    }

    #[test]
    fn bad_timestamp_and_duplicate_id_rejected() {
        let f = write_tmp(
            "{\"id\":\"1\",\"author_id\":\"a\",\"timestamp\":\"yesterday\"}\n\
             {\"id\":\"2\",\"author_id\":\"a\",\"timestamp\":\"2015-01-05T10:00:00Z\"}\n\
             {\"id\":\"2\",\"author_id\":\"b\",\"timestamp\":\"2015-01-05T10:00:00Z\"}\n\
             not json\n",
            ".jsonl",
        );
        let loaded = load_messages(f.path(), MessageFormat::Jsonl).unwrap();
        assert_eq!(loaded.messages.len(), 1);
        let lines: Vec<u64> = loaded.rejections.iter().map(|r| r.line).collect();
        assert_eq!(lines, vec![1, 3, 4]);
    }

    #[test]
    fn csv_without_required_column_fails() {
        let f = write_tmp("id,body\n1,x\n", ".csv");
        assert!(load_messages(f.path(), MessageFormat::Csv).is_err());
    }

    #[test]
    fn unreadable_file_fails() {
        assert!(matches!(
            load_messages(Path::new("/nonexistent/x.jsonl"), MessageFormat::Jsonl),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn rejection_report_format() {
        let mut buf = Vec::new();
        write_rejections(
            &mut buf,
            &[Rejection {
                line: 3,
                reason: "missing required field `timestamp`".into(),
            }],
        )
        .unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "line,reason\n3,missing required field `timestamp`\n"
        );
    }

    #[test]
    fn ninety_four_empty_windows() {
        let w = partition_weeks(&[], ts("2014-09-01T00:00:00Z"), 94).unwrap();
        assert_eq!(w.windows.len(), 94);
        assert!(w.messages_by_window.iter().all(Vec::is_empty));
        assert_eq!(w.dropped, 0);
    }

    #[test]
    fn window_boundaries_are_half_open() {
        let start = "2014-09-01T00:00:00Z";
        let msgs = vec![
            msg("at-start", start),
            msg("week-later", "2014-09-08T00:00:00Z"),
            msg("just-before", "2014-09-07T23:59:59Z"),
            msg("before", "2014-08-31T23:59:59Z"),
        ];
        let w = partition_weeks(&msgs, ts(start), 2).unwrap();
        let ids = |i: usize| -> Vec<&str> {
            w.messages_by_window[i].iter().map(|m| m.id.as_str()).collect()
        };
        assert_eq!(ids(0), vec!["at-start", "just-before"]);
        assert_eq!(ids(1), vec!["week-later"]);
        assert_eq!(w.dropped, 1);
    }

    #[test]
    fn zero_weeks_rejected() {
        assert!(partition_weeks(&[], ts("2014-09-01T00:00:00Z"), 0).is_err());
    }

    #[test]
    fn market_series_by_week() {
        let mut s = String::from("week,value\n");
        for w in 0..94 {
            s.push_str(&format!("{w},{}\n", 1.0 + w as f64 / 100.0));
        }
        let f = write_tmp(&s, ".csv");
        let series = load_market_series(f.path(), "price", None).unwrap();
        assert_eq!(series.len(), 94);
    }

    #[test]
    fn market_series_duplicate_week_named() {
        let f = write_tmp("week,value\n0,1.0\n1,2.0\n1,3.0\n", ".csv");
        match load_market_series(f.path(), "price", None) {
            Err(Error::DuplicateWeek { week }) => assert_eq!(week, 1),
            other => panic!("expected duplicate week, got {other:?}"),
        }
    }

    #[test]
    fn market_series_non_finite_rejected() {
        let f = write_tmp("week,value\n0,NaN\n", ".csv");
        assert!(matches!(
            load_market_series(f.path(), "price", None),
            Err(Error::NonFinite { week: 0 })
        ));
    }

    #[test]
    fn market_dates_align_with_partition() {
        let start = ts("2014-09-01T00:00:00Z");
        let grid = WeekGrid::new(start, 4).unwrap();
        let dates = ["2014-09-05", "2014-09-12", "2014-09-19", "2014-09-26"];
        let mut s = String::from("date,value\n");
        let mut msgs = Vec::new();
        for (i, d) in dates.iter().enumerate() {
            s.push_str(&format!("{d},{i}.5\n"));
            msgs.push(msg(&i.to_string(), &format!("{d}T00:00:00Z")));
        }
        let f = write_tmp(&s, ".csv");
        let series = load_market_series(f.path(), "price", Some(&grid)).unwrap();
        let windowed = partition_weeks(&msgs, start, 4).unwrap();
        for (week, msgs) in windowed.messages_by_window.iter().enumerate() {
            let idx: usize = msgs[0].id.parse().unwrap();
            assert_eq!(series.values.get(&week), Some(&(idx as f64 + 0.5)));
        }
    }
}
