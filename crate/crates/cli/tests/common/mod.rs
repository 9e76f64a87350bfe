#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub const GAMMA: f64 = 2.0;

pub fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

pub fn swirlflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_swirlflow"))
        .args(args)
        .env("NO_COLOR", "1")
        .output()
        .expect("binary runs")
}

pub fn run_with_config(sub: &str, config: &str, extra: &[&str]) -> Output {
    let path = data(config);
    let mut args = vec![sub, "--config", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    swirlflow(&args)
}

/// Largest relative spread of mass flux, angular momentum, Bernoulli constant
/// and the equation of state over each region of a profile CSV.
pub fn conservation_spread(csv_bytes: &[u8], gamma: f64) -> f64 {
    let mut reader = csv::Reader::from_reader(csv_bytes);
    let header: Vec<String> = reader.headers().unwrap().iter().map(str::to_string).collect();
    assert_eq!(header, ["r", "rho", "u1", "u2", "p", "c2", "m1sq", "m2sq", "msq", "A", "region"]);
    let mut worst = 0.0f64;
    let mut reference: Option<(String, [f64; 3])> = None;
    for rec in reader.records() {
        let rec = rec.unwrap();
        let v: Vec<f64> = (0..10).map(|i| rec[i].parse().unwrap()).collect();
        let (r, rho, u1, u2, p, c2, a) = (v[0], v[1], v[2], v[3], v[4], v[5], v[9]);
        let region = rec[10].to_string();
        let q = [r * rho * u1, r * u2, 0.5 * (u1 * u1 + u2 * u2) + c2 / (gamma - 1.0)];
        let rel = |x: f64, y: f64| (x - y).abs() / y.abs().max(1.0);
        worst = worst.max(rel(p, a * rho.powf(gamma))).max(rel(c2, gamma * p / rho));
        match &reference {
            Some((reg, q0)) if *reg == region => {
                for k in 0..3 {
                    worst = worst.max(rel(q[k], q0[k]));
                }
            }
            _ => reference = Some((region, q)),
        }
    }
    worst
}
