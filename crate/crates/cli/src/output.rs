//! CSV and JSON serialization of profiles and sweeps, with atomic file output.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use swirlflow::{RadialProfile, SweepRow};

pub const PROFILE_HEADER: [&str; 11] = ["r", "rho", "u1", "u2", "p", "c2", "m1sq", "m2sq", "msq", "A", "region"];
pub const SWEEP_HEADER: [&str; 6] = ["r_b", "p_exit", "a_plus", "x", "downstream_msq", "regime"];

/// 17 significant digits, which round-trips every `f64`.
pub fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone, Serialize)]
pub struct ProfileRow {
    pub r: f64,
    pub rho: f64,
    pub u1: f64,
    pub u2: f64,
    pub p: f64,
    pub c2: f64,
    pub m1sq: f64,
    pub m2sq: f64,
    pub msq: f64,
    #[serde(rename = "A")]
    pub a: f64,
    pub region: &'static str,
}

pub fn profile_rows(profiles: &[RadialProfile]) -> Vec<ProfileRow> {
    profiles
        .iter()
        .flat_map(|p| {
            p.states.iter().map(move |s| ProfileRow {
                r: s.r,
                rho: s.rho,
                u1: s.u1,
                u2: s.u2,
                p: s.p,
                c2: s.c2,
                m1sq: s.m1sq,
                m2sq: s.m2sq,
                msq: s.msq,
                a: p.entropy,
                region: p.region.label(),
            })
        })
        .collect()
}

pub fn profile_csv(rows: &[ProfileRow]) -> Result<Vec<u8>, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(PROFILE_HEADER)?;
    for row in rows {
        let nums = [row.r, row.rho, row.u1, row.u2, row.p, row.c2, row.m1sq, row.m2sq, row.msq, row.a];
        let mut record: Vec<String> = nums.iter().map(|&v| fmt_num(v)).collect();
        record.push(row.region.to_string());
        w.write_record(&record)?;
    }
    into_bytes(w)
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRecord {
    pub r_b: f64,
    pub p_exit: f64,
    pub a_plus: f64,
    pub x: f64,
    pub downstream_msq: f64,
    pub regime: &'static str,
}

pub fn sweep_records(rows: &[SweepRow]) -> Vec<SweepRecord> {
    rows.iter()
        .map(|r| SweepRecord {
            r_b: r.r_b,
            p_exit: r.p_exit,
            a_plus: r.a_plus,
            x: r.x,
            downstream_msq: r.downstream_msq,
            regime: r.pattern.label(),
        })
        .collect()
}

pub fn sweep_csv(rows: &[SweepRecord]) -> Result<Vec<u8>, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SWEEP_HEADER)?;
    for row in rows {
        let nums = [row.r_b, row.p_exit, row.a_plus, row.x, row.downstream_msq];
        let mut record: Vec<String> = nums.iter().map(|&v| fmt_num(v)).collect();
        record.push(row.regime.to_string());
        w.write_record(&record)?;
    }
    into_bytes(w)
}

fn into_bytes(w: csv::Writer<Vec<u8>>) -> Result<Vec<u8>, csv::Error> {
    w.into_inner().map_err(|e| csv::Error::from(e.into_error()))
}

pub fn json_bytes<T: Serialize>(value: &T) -> serde_json::Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(value)?;
    out.push(b'\n');
    Ok(out)
}

/// Writes `bytes` next to `path` and renames into place, so readers never see
/// a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
