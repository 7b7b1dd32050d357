//! Trace file format.
//!
//! ```text
//! # bamsim-trace v1 seed=<u64>
//! id,arrival_s,class,bandwidth_mbps,holding_s
//! ```
//!
//! The header is the first line; every following line is one request, with
//! no column header. Bandwidth has one fractional digit, times three. The
//! decimal separator is always `.`.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::WorkloadTrace;
use crate::model::LspRequest;
use crate::{Error, Result};

pub const TRACE_HEADER_PREFIX: &str = "# bamsim-trace v1 seed=";

pub(crate) fn format_row(r: &LspRequest) -> String {
    format!("{},{},{},{},{}", r.id, r.arrival, r.class, r.bandwidth, r.holding)
}

pub fn write_trace<W: Write>(trace: &WorkloadTrace, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{TRACE_HEADER_PREFIX}{}", trace.seed())?;
    for r in trace.requests() {
        writeln!(out, "{}", format_row(r))?;
    }
    out.flush()
}

pub fn write_trace_file(trace: &WorkloadTrace, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_trace(trace, BufWriter::new(file)).map_err(|e| Error::io(path, e))
}

pub fn read_trace<R: BufRead>(input: R) -> Result<WorkloadTrace> {
    let mut lines = input.lines().enumerate();
    let parse_err = |line: usize, message: String| Error::TraceParse { line, message };

    let seed = match lines.next() {
        None => return Err(parse_err(1, "empty file, expected trace header".into())),
        Some((_, line)) => {
            let line = line.map_err(|e| parse_err(1, e.to_string()))?;
            let seed = line
                .strip_prefix(TRACE_HEADER_PREFIX)
                .ok_or_else(|| parse_err(1, format!("expected header `{TRACE_HEADER_PREFIX}<seed>`")))?;
            seed.trim()
                .parse::<u64>()
                .map_err(|e| parse_err(1, format!("bad seed {seed:?}: {e}")))?
        }
    };

    let mut requests: Vec<LspRequest> = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line.map_err(|e| parse_err(lineno, e.to_string()))?;
        if line.is_empty() {
            return Err(parse_err(lineno, "empty line".into()));
        }
        let fields: Vec<&str> = line.split(',').collect();
        let [id, arrival, class, bandwidth, holding] = fields[..] else {
            return Err(parse_err(lineno, format!("expected 5 fields, found {}", fields.len())));
        };
        let field = |name: &str, e: &dyn std::fmt::Display| parse_err(lineno, format!("{name}: {e}"));
        let req = LspRequest {
            id: id.parse().map_err(|e| field("id", &e))?,
            arrival: arrival.parse().map_err(|e| field("arrival_s", &e))?,
            class: class.parse().map_err(|e| field("class", &e))?,
            bandwidth: bandwidth.parse().map_err(|e| field("bandwidth_mbps", &e))?,
            holding: holding.parse().map_err(|e| field("holding_s", &e))?,
        };
        if req.id != requests.len() as u64 {
            return Err(parse_err(
                lineno,
                format!("expected id {}, found {}", requests.len(), req.id),
            ));
        }
        if let Some(prev) = requests.last() {
            if req.arrival < prev.arrival {
                return Err(parse_err(lineno, "arrival time decreases".into()));
            }
        }
        if !req.bandwidth.is_positive() {
            return Err(parse_err(lineno, "bandwidth must be positive".into()));
        }
        if req.holding <= crate::units::SimTime::ZERO {
            return Err(parse_err(lineno, "holding time must be positive".into()));
        }
        requests.push(req);
    }
    if requests.is_empty() {
        return Err(parse_err(2, "trace has no requests".into()));
    }
    Ok(WorkloadTrace::new(seed, requests))
}

pub fn read_trace_file(path: &Path) -> Result<WorkloadTrace> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_trace(BufReader::new(file))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{Bandwidth, SimTime};

    #[test]
    fn header_only_is_an_error() {
        let err = read_trace("# bamsim-trace v1 seed=4\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::TraceParse { line: 2, .. }), "{err}");
        assert!(read_trace("".as_bytes()).is_err());
    }

    #[test]
    fn two_rows() {
        let text = "# bamsim-trace v1 seed=9\n0,0.500,2,12.5,150.250\n1,1.000,0,5.0,3.000\n";
        let trace = read_trace(text.as_bytes()).unwrap();
        assert_eq!(trace.seed(), 9);
        assert_eq!(
            trace.requests()[0],
            LspRequest::new(
                0,
                2,
                Bandwidth::from_tenths(125),
                SimTime::from_millis(500),
                SimTime::from_millis(150_250)
            )
        );
        let mut out = Vec::new();
        write_trace(&trace, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), text);
    }

    #[test]
    fn malformed_rows_report_line_numbers() {
        let cases = [
            ("# bamsim-trace v1 seed=1\n0,0.000,0,5.0\n", 2),
            (
                "# bamsim-trace v1 seed=1\n0,0.000,0,5.0,1.000\n1,0.000,0,5.00,1.000\n",
                3,
            ),
            (
                "# bamsim-trace v1 seed=1\n0,1.000,0,5.0,1.000\n1,0.500,0,5.0,1.000\n",
                3,
            ),
            (
                "# bamsim-trace v1 seed=1\n0,0.000,0,5.0,1.000\n2,0.500,0,5.0,1.000\n",
                3,
            ),
            ("# bamsim-trace v1 seed=1\n0,0.000,0,0.0,1.000\n", 2),
            ("# bamsim-trace v1 seed=1\n0,0,000,0,5,0,1,000\n", 2),
            ("# bamsim-trace v2 seed=1\n0,0.000,0,5.0,1.000\n", 1),
            ("# bamsim-trace v1 seed=x\n0,0.000,0,5.0,1.000\n", 1),
        ];
        for (text, line) in cases {
            match read_trace(text.as_bytes()) {
                Err(Error::TraceParse { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }
}
