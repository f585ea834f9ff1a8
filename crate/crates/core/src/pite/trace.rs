use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{PiteError, Result};

pub const CSV_HEADER: &str = "step,beta,energy,fidelity,p_cum,rlb,alb,restarts";

/// Observables after a Trotter step. `fidelity` and `alb` are NaN when no
/// spectrum is available.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub step: usize,
    pub beta: f64,
    pub energy: f64,
    pub fidelity: f64,
    pub p_cum: f64,
    pub rlb: f64,
    pub alb: f64,
    pub restarts: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Completed,
    /// Sample mode ran out of restarts; the records are the last attempt's.
    BudgetExhausted,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    pub records: Vec<TraceRecord>,
    pub status: RunStatus,
    pub restarts: usize,
    /// Ancilla measurements in the reported attempt.
    pub measurements: usize,
    /// Every ancilla |0> probability of the reported attempt, in order.
    /// Empty for trajectory runs.
    #[serde(skip)]
    pub prob0_log: Vec<f64>,
    /// Final work-register amplitudes of a completed pure-state run.
    #[serde(skip)]
    pub final_state: Option<Vec<Complex64>>,
}

impl RunTrace {
    pub fn last(&self) -> &TraceRecord {
        self.records.last().expect("a trace always holds the initial record")
    }

    pub fn completed(&self) -> bool {
        self.status == RunStatus::Completed
    }

    /// First row with `p_cum < rlb`, if any.
    pub fn rlb_violation(&self) -> Option<&TraceRecord> {
        self.records.iter().find(|r| r.p_cum < r.rlb)
    }
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// One CSV line without the trailing newline.
pub fn csv_row(r: &TraceRecord) -> String {
    format!(
        "{},{},{},{},{},{},{},{}",
        r.step,
        num(r.beta),
        num(r.energy),
        num(r.fidelity),
        num(r.p_cum),
        num(r.rlb),
        num(r.alb),
        r.restarts
    )
}

/// Writes the trace as CSV, refusing rows where `p_cum < rlb`.
pub fn write_csv<W: Write>(records: &[TraceRecord], mut out: W) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        if r.p_cum < r.rlb {
            return Err(PiteError::InvalidArgument(format!(
                "trace row {} has p_cum {:e} below the rigorous bound {:e}",
                r.step, r.p_cum, r.rlb
            )));
        }
        writeln!(out, "{}", csv_row(r))?;
    }
    Ok(())
}

/// Parses a trace written by [`write_csv`].
pub fn read_csv(text: &str) -> Result<Vec<TraceRecord>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == CSV_HEADER => {}
        _ => {
            return Err(PiteError::Parse {
                line: 1,
                msg: "missing trace header".into(),
            })
        }
    }
    let mut out = Vec::new();
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let bad = |msg: String| PiteError::Parse { line: idx + 1, msg };
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 8 {
            return Err(bad(format!("expected 8 fields, found {}", f.len())));
        }
        let int = |s: &str| s.parse::<usize>().map_err(|_| bad(format!("invalid integer \"{s}\"")));
        let float = |s: &str| s.parse::<f64>().map_err(|_| bad(format!("invalid number \"{s}\"")));
        out.push(TraceRecord {
            step: int(f[0])?,
            beta: float(f[1])?,
            energy: float(f[2])?,
            fidelity: float(f[3])?,
            p_cum: float(f[4])?,
            rlb: float(f[5])?,
            alb: float(f[6])?,
            restarts: int(f[7])?,
        });
    }
    Ok(out)
}

/// JSON mirror of a trace with caller-supplied metadata.
#[derive(Serialize)]
pub struct TraceDocument<'a, M: Serialize> {
    pub metadata: &'a M,
    pub status: RunStatus,
    pub restarts: usize,
    pub measurements: usize,
    pub records: &'a [TraceRecord],
}

pub fn write_json<W: Write, M: Serialize>(trace: &RunTrace, metadata: &M, mut out: W) -> Result<()> {
    let doc = TraceDocument {
        metadata,
        status: trace.status,
        restarts: trace.restarts,
        measurements: trace.measurements,
        records: &trace.records,
    };
    serde_json::to_writer_pretty(&mut out, &doc)?;
    writeln!(out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(step: usize, p: f64, rlb: f64) -> TraceRecord {
        TraceRecord {
            step,
            beta: 0.1 * step as f64,
            energy: -1.0 / 3.0,
            fidelity: f64::NAN,
            p_cum: p,
            rlb,
            alb: 0.9,
            restarts: 2,
        }
    }

    #[test]
    fn csv_round_trips_exactly() {
        let rows = vec![rec(0, 1.0, 1.0), rec(1, 0.7, 0.3)];
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with(CSV_HEADER));
        let back = read_csv(&text).unwrap();
        assert_eq!(back[1].energy.to_bits(), rows[1].energy.to_bits());
        assert!(back[0].fidelity.is_nan());
        assert_eq!(back[1].restarts, 2);
    }

    #[test]
    fn csv_rejects_rows_below_rlb() {
        let mut buf = Vec::new();
        assert!(write_csv(&[rec(3, 0.1, 0.2)], &mut buf).is_err());
    }
}
