//! CSV artifacts and their readers.
//!
//! Bandwidth is written in Mbps with one decimal, times in seconds with
//! three, mean loads with three. Victim lists are `;`-separated.

use std::fmt::Display;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use crate::model::Model;
use crate::sim::{EventRecord, Sample, SummaryRow};
use crate::units::Bandwidth;
use crate::{Error, Result};

const EVENTS_HEADER: [&str; 7] = ["time_s", "event", "lsp_id", "class", "bandwidth", "outcome", "victims"];
const SUMMARY_HEADER: [&str; 8] = [
    "scope",
    "requested",
    "granted",
    "blocked",
    "preempted",
    "granted_traffic",
    "peak_load",
    "mean_load",
];
const COMPARE_HEADER: [&str; 16] = [
    "model",
    "scope",
    "requested",
    "granted",
    "blocked",
    "preempted",
    "granted_traffic",
    "peak_load",
    "mean_load",
    "delta_granted",
    "delta_blocked",
    "delta_preempted",
    "delta_granted_traffic",
    "delta_peak_load",
    "delta_mean_load",
    "baseline",
];

/// One line of `compare.csv`: a model's summary row and its difference to
/// the baseline (first) model for the same scope.
#[derive(Clone, Debug, PartialEq)]
pub struct CompareRow {
    pub model: Model,
    pub baseline: Model,
    pub row: SummaryRow,
    pub delta_granted: i64,
    pub delta_blocked: i64,
    pub delta_preempted: i64,
    pub delta_granted_traffic: Bandwidth,
    pub delta_peak_load: Bandwidth,
    pub delta_mean_load: f64,
}

/// Rounds to thousandths; the CSV precision of mean loads.
pub(crate) fn milli(x: f64) -> i64 {
    (x * 1000.0).round() as i64
}

fn fmt_milli(x: f64) -> String {
    let m = milli(x);
    let sign = if m < 0 { "-" } else { "" };
    format!("{sign}{}.{:03}", m.unsigned_abs() / 1000, m.unsigned_abs() % 1000)
}

fn create(path: &Path) -> Result<csv::Writer<File>> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::WriterBuilder::new().from_writer(file))
}

fn finish<W: Write>(mut w: csv::Writer<W>, path: &Path) -> Result<()> {
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_timeseries(path: &Path, class_count: usize, samples: &[Sample]) -> Result<()> {
    let mut w = create(path)?;
    let mut header = vec!["time_s".to_string(), "total_load".to_string()];
    header.extend((0..class_count).map(|c| format!("load_tc{c}")));
    w.write_record(&header)?;
    for s in samples {
        let mut rec = vec![s.time.to_string(), s.total_load.to_string()];
        rec.extend(s.load.iter().map(ToString::to_string));
        w.write_record(&rec)?;
    }
    finish(w, path)
}

pub fn write_events(path: &Path, events: &[EventRecord]) -> Result<()> {
    let mut w = create(path)?;
    w.write_record(EVENTS_HEADER)?;
    for e in events {
        let victims: Vec<String> = e.victims.iter().map(ToString::to_string).collect();
        w.write_record([
            e.time.to_string(),
            e.kind.to_string(),
            e.lsp_id.to_string(),
            e.class.to_string(),
            e.bandwidth.to_string(),
            e.outcome.to_string(),
            victims.join(";"),
        ])?;
    }
    finish(w, path)
}

fn summary_fields(r: &SummaryRow) -> [String; 8] {
    [
        r.scope.to_string(),
        r.requested.to_string(),
        r.granted.to_string(),
        r.blocked.to_string(),
        r.preempted.to_string(),
        r.granted_traffic.to_string(),
        r.peak_load.to_string(),
        fmt_milli(r.mean_load),
    ]
}

pub fn write_summary(path: &Path, rows: &[SummaryRow]) -> Result<()> {
    let mut w = create(path)?;
    w.write_record(SUMMARY_HEADER)?;
    for r in rows {
        w.write_record(summary_fields(r))?;
    }
    finish(w, path)
}

pub fn write_compare(path: &Path, rows: &[CompareRow]) -> Result<()> {
    let mut w = create(path)?;
    w.write_record(COMPARE_HEADER)?;
    for c in rows {
        let mut rec = vec![c.model.to_string()];
        rec.extend(summary_fields(&c.row));
        rec.extend([
            c.delta_granted.to_string(),
            c.delta_blocked.to_string(),
            c.delta_preempted.to_string(),
            c.delta_granted_traffic.to_string(),
            c.delta_peak_load.to_string(),
            fmt_milli(c.delta_mean_load),
            c.baseline.to_string(),
        ]);
        w.write_record(&rec)?;
    }
    finish(w, path)
}

/// Reads a CSV file, checks its header and hands every data row to `row`.
fn read_rows<T>(
    path: &Path,
    check_header: impl FnOnce(&csv::StringRecord) -> std::result::Result<(), String>,
    mut row: impl FnMut(&csv::StringRecord) -> std::result::Result<T, String>,
) -> Result<Vec<T>> {
    let mut text = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|e| Error::io(path, e))?;
    let err = |line: u64, message: String| Error::Report {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut reader = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    check_header(reader.headers()?).map_err(|m| err(1, m))?;
    let mut out = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec?;
        out.push(row(&rec).map_err(|m| err(i as u64 + 2, m))?);
    }
    Ok(out)
}

fn expect_header<'a>(
    expected: &'a [&'a str],
) -> impl FnOnce(&csv::StringRecord) -> std::result::Result<(), String> + 'a {
    move |h| {
        if h.iter().eq(expected.iter().copied()) {
            Ok(())
        } else {
            Err(format!(
                "expected header {:?}, found {:?}",
                expected.join(","),
                h.iter().collect::<Vec<_>>().join(",")
            ))
        }
    }
}

fn field<T: FromStr>(rec: &csv::StringRecord, idx: usize, name: &str) -> std::result::Result<T, String>
where
    T::Err: Display,
{
    let raw = rec.get(idx).ok_or_else(|| format!("missing column {name}"))?;
    raw.parse().map_err(|e| format!("{name}: {e}"))
}

fn expect_len(rec: &csv::StringRecord, n: usize) -> std::result::Result<(), String> {
    if rec.len() == n {
        Ok(())
    } else {
        Err(format!("expected {n} fields, found {}", rec.len()))
    }
}

pub fn read_timeseries(path: &Path) -> Result<Vec<Sample>> {
    let width = std::cell::Cell::new(0);
    read_rows(
        path,
        |h| {
            let classes = h.len().saturating_sub(2);
            let mut expected = vec!["time_s".to_string(), "total_load".to_string()];
            expected.extend((0..classes).map(|c| format!("load_tc{c}")));
            if classes == 0 || !h.iter().eq(expected.iter().map(String::as_str)) {
                return Err(format!("expected header {:?}", expected.join(",")));
            }
            width.set(h.len());
            Ok(())
        },
        |rec| {
            let width = width.get();
            expect_len(rec, width)?;
            Ok(Sample {
                time: field(rec, 0, "time_s")?,
                total_load: field(rec, 1, "total_load")?,
                load: (2..width)
                    .map(|i| field(rec, i, "load"))
                    .collect::<std::result::Result<_, _>>()?,
            })
        },
    )
}

pub fn read_events(path: &Path) -> Result<Vec<EventRecord>> {
    read_rows(path, expect_header(&EVENTS_HEADER), |rec| {
        expect_len(rec, EVENTS_HEADER.len())?;
        let victims = match &rec[6] {
            "" => Vec::new(),
            list => list
                .split(';')
                .map(|v| v.parse().map_err(|e| format!("victims: {e}")))
                .collect::<std::result::Result<_, _>>()?,
        };
        Ok(EventRecord {
            time: field(rec, 0, "time_s")?,
            kind: field(rec, 1, "event")?,
            lsp_id: field(rec, 2, "lsp_id")?,
            class: field(rec, 3, "class")?,
            bandwidth: field(rec, 4, "bandwidth")?,
            outcome: field(rec, 5, "outcome")?,
            victims,
        })
    })
}

fn parse_summary_fields(rec: &csv::StringRecord, offset: usize) -> std::result::Result<SummaryRow, String> {
    Ok(SummaryRow {
        scope: field(rec, offset, "scope")?,
        requested: field(rec, offset + 1, "requested")?,
        granted: field(rec, offset + 2, "granted")?,
        blocked: field(rec, offset + 3, "blocked")?,
        preempted: field(rec, offset + 4, "preempted")?,
        granted_traffic: field(rec, offset + 5, "granted_traffic")?,
        peak_load: field(rec, offset + 6, "peak_load")?,
        mean_load: field(rec, offset + 7, "mean_load")?,
    })
}

pub fn read_summary(path: &Path) -> Result<Vec<SummaryRow>> {
    read_rows(path, expect_header(&SUMMARY_HEADER), |rec| {
        expect_len(rec, SUMMARY_HEADER.len())?;
        parse_summary_fields(rec, 0)
    })
}

pub fn read_compare(path: &Path) -> Result<Vec<CompareRow>> {
    read_rows(path, expect_header(&COMPARE_HEADER), |rec| {
        expect_len(rec, COMPARE_HEADER.len())?;
        Ok(CompareRow {
            model: field(rec, 0, "model")?,
            row: parse_summary_fields(rec, 1)?,
            delta_granted: field(rec, 9, "delta_granted")?,
            delta_blocked: field(rec, 10, "delta_blocked")?,
            delta_preempted: field(rec, 11, "delta_preempted")?,
            delta_granted_traffic: field(rec, 12, "delta_granted_traffic")?,
            delta_peak_load: field(rec, 13, "delta_peak_load")?,
            delta_mean_load: field(rec, 14, "delta_mean_load")?,
            baseline: field(rec, 15, "baseline")?,
        })
    })
}
