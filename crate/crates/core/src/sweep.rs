//! Coupling sweeps of the Rabi work report, emitted as CSV.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rabi::{work_report_with, RabiParams, SolveOptions, WorkReport, DEFAULT_FOCK_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Output {
    E0,
    /// `W`, `W_A` and `W_B`.
    W,
    Eta,
    EtaA,
    EtaB,
    HI,
    Entanglement,
}

impl Output {
    pub const ALL: [Output; 7] =
        [Output::E0, Output::W, Output::Eta, Output::EtaA, Output::EtaB, Output::HI, Output::Entanglement];

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "E0" => Output::E0,
            "W" => Output::W,
            "eta" => Output::Eta,
            "eta_A" => Output::EtaA,
            "eta_B" => Output::EtaB,
            "hI" => Output::HI,
            "entanglement" => Output::Entanglement,
            other => return Err(Error::InvalidParams(format!("unknown output `{other}`"))),
        })
    }

    fn columns(self) -> &'static [&'static str] {
        match self {
            Output::E0 => &["E0"],
            Output::W => &["W", "W_A", "W_B"],
            Output::Eta => &["eta"],
            Output::EtaA => &["eta_A"],
            Output::EtaB => &["eta_B"],
            Output::HI => &["hI"],
            Output::Entanglement => &["entanglement_bits"],
        }
    }

    fn values(self, r: &WorkReport) -> Vec<Option<f64>> {
        match self {
            Output::E0 => vec![Some(r.e0)],
            Output::W => vec![Some(r.work), Some(r.work_a), Some(r.work_b)],
            Output::Eta => vec![r.eta],
            Output::EtaA => vec![r.eta_a],
            Output::EtaB => vec![r.eta_b],
            Output::HI => vec![Some(r.h_i)],
            Output::Entanglement => vec![Some(r.entanglement_bits)],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub g_min: f64,
    pub g_max: f64,
    pub g_steps: usize,
    pub detunings: Vec<f64>,
    /// Kept sorted and free of duplicates.
    pub outputs: Vec<Output>,
    pub fock_cap: usize,
    pub oracle_check: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            g_min: 0.01,
            g_max: 2.0,
            g_steps: 100,
            detunings: vec![-0.5, 0.0, 0.5],
            outputs: Output::ALL.to_vec(),
            fock_cap: DEFAULT_FOCK_CAP,
            oracle_check: false,
        }
    }
}

pub fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| Error::InvalidParams(format!("bad number `{t}` in `{s}`"))))
        .collect()
}

pub fn parse_outputs(s: &str) -> Result<Vec<Output>> {
    let mut v = s.split(',').map(Output::parse).collect::<Result<Vec<_>>>()?;
    v.sort();
    v.dedup();
    Ok(v)
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        if !(self.g_min >= 0.0) || !self.g_max.is_finite() || !(self.g_max >= self.g_min) {
            return bad(format!("need 0 <= g_min <= g_max, got {} and {}", self.g_min, self.g_max));
        }
        if self.g_steps < 2 {
            return bad(format!("g_steps must be at least 2, got {}", self.g_steps));
        }
        if self.detunings.is_empty() || self.detunings.iter().any(|d| !(*d > -1.0) || !d.is_finite()) {
            return bad(format!("detunings must be finite and exceed -1, got {:?}", self.detunings));
        }
        if self.outputs.is_empty() {
            return bad("no outputs selected".into());
        }
        Ok(())
    }

    /// Apply `key = value` lines; `#` starts a comment.
    pub fn apply_file(&mut self, text: &str) -> Result<()> {
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| Error::Parse { line, msg: format!("expected key = value, found `{content}`") })?;
            let value = value.trim();
            let wrap = |e: Error| Error::Parse { line, msg: e.to_string() };
            let num = |v: &str| v.parse::<f64>().map_err(|_| Error::Parse { line, msg: format!("bad number `{v}`") });
            let int = |v: &str| v.parse::<usize>().map_err(|_| Error::Parse { line, msg: format!("bad integer `{v}`") });
            match key.trim() {
                "g_min" => self.g_min = num(value)?,
                "g_max" => self.g_max = num(value)?,
                "g_steps" => self.g_steps = int(value)?,
                "detunings" => self.detunings = parse_list(value).map_err(wrap)?,
                "outputs" => self.outputs = parse_outputs(value).map_err(wrap)?,
                "fock_cap" => self.fock_cap = int(value)?,
                "oracle_check" => {
                    self.oracle_check = value
                        .parse::<bool>()
                        .map_err(|_| Error::Parse { line, msg: format!("bad boolean `{value}`") })?
                }
                other => return Err(Error::Parse { line, msg: format!("unknown key `{other}`") }),
            }
        }
        Ok(())
    }

    /// Evenly spaced couplings from `g_min` to `g_max` inclusive.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.g_steps;
        let step = (self.g_max - self.g_min) / (n - 1) as f64;
        (0..n).map(|k| if k + 1 == n { self.g_max } else { self.g_min + k as f64 * step }).collect()
    }

    pub fn header(&self) -> Vec<&'static str> {
        let mut h = vec!["g_over_omega", "delta"];
        for o in &self.outputs {
            h.extend_from_slice(o.columns());
        }
        h.push("status");
        h
    }
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub g: f64,
    pub detuning: f64,
    /// The error code on failure.
    pub report: std::result::Result<WorkReport, &'static str>,
}

/// Rows in ascending `g` within ascending detuning. Points are solved in
/// parallel; the order of the result does not depend on scheduling.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let mut detunings = cfg.detunings.clone();
    detunings.sort_by(f64::total_cmp);
    let grid = cfg.grid();
    let points: Vec<(f64, f64)> = detunings.iter().flat_map(|&d| grid.iter().map(move |&g| (d, g))).collect();
    let opts = SolveOptions { fock_cap: cfg.fock_cap, oracle_check: cfg.oracle_check, precision_bits: None };
    Ok(points
        .par_iter()
        .map(|&(detuning, g)| {
            let report = RabiParams::from_detuning(detuning, g)
                .and_then(|p| work_report_with(p, &opts))
                .map_err(|e| e.code());
            SweepRow { g, detuning, report }
        })
        .collect())
}

/// Twelve significant digits; negative zero prints as zero.
pub fn format_float(x: f64) -> String {
    format!("{:.11e}", x + 0.0)
}

pub fn write_csv<W: Write>(cfg: &SweepConfig, rows: &[SweepRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{}", cfg.header().join(","))?;
    for row in rows {
        let mut fields = vec![format_float(row.g), format_float(row.detuning)];
        match &row.report {
            Ok(r) => {
                for o in &cfg.outputs {
                    fields.extend(o.values(r).into_iter().map(|v| v.map_or_else(|| "NA".to_string(), format_float)));
                }
                fields.push("ok".into());
            }
            Err(code) => {
                let n: usize = cfg.outputs.iter().map(|o| o.columns().len()).sum();
                fields.extend(std::iter::repeat_n("NA".to_string(), n));
                fields.push((*code).to_string());
            }
        }
        writeln!(out, "{}", fields.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints_exact() {
        let cfg = SweepConfig { g_min: 0.0, g_max: 2.0, g_steps: 3, ..Default::default() };
        assert_eq!(cfg.grid(), vec![0.0, 1.0, 2.0]);
        let g = SweepConfig::default().grid();
        assert_eq!(g.len(), 100);
        assert_eq!(g[0], 0.01);
        assert_eq!(g[99], 2.0);
    }

    #[test]
    fn header_follows_outputs() {
        let cfg = SweepConfig { outputs: parse_outputs("hI,W,hI").unwrap(), ..Default::default() };
        assert_eq!(cfg.header(), vec!["g_over_omega", "delta", "W", "W_A", "W_B", "hI", "status"]);
        assert_eq!(
            SweepConfig::default().header().join(","),
            "g_over_omega,delta,E0,W,W_A,W_B,eta,eta_A,eta_B,hI,entanglement_bits,status"
        );
    }

    #[test]
    fn config_file_overrides_and_errors() {
        let mut cfg = SweepConfig::default();
        cfg.apply_file("# sweep\ng_max = 6\n\ndetunings = 0, 1 # two\noracle_check = true\n").unwrap();
        assert_eq!(cfg.g_max, 6.0);
        assert_eq!(cfg.detunings, vec![0.0, 1.0]);
        assert!(cfg.oracle_check);
        assert!(matches!(cfg.apply_file("g_min = 0\ncolour = red\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(cfg.apply_file("g_steps = two\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn validation() {
        let bad = [
            SweepConfig { g_min: -0.1, ..Default::default() },
            SweepConfig { g_steps: 1, ..Default::default() },
            SweepConfig { detunings: vec![-1.0], ..Default::default() },
            SweepConfig { g_min: 2.0, g_max: 1.0, ..Default::default() },
        ];
        for cfg in bad {
            assert!(cfg.validate().is_err());
        }
        assert!(SweepConfig::default().validate().is_ok());
    }

    #[test]
    fn float_format_has_twelve_digits() {
        assert_eq!(format_float(0.5), "5.00000000000e-1");
        assert_eq!(format_float(-0.0), "0.00000000000e0");
        assert_eq!(format_float(-36.4947301789770), "-3.64947301790e1");
    }

    #[test]
    fn rows_ordered_and_zero_coupling_row() {
        let cfg = SweepConfig {
            g_min: 0.0,
            g_max: 0.2,
            g_steps: 3,
            detunings: vec![0.5, -0.5],
            outputs: vec![Output::W, Output::Eta],
            ..Default::default()
        };
        let rows = run_sweep(&cfg).unwrap();
        let keys: Vec<(f64, f64)> = rows.iter().map(|r| (r.detuning, r.g)).collect();
        assert_eq!(keys, vec![(-0.5, 0.0), (-0.5, 0.1), (-0.5, 0.2), (0.5, 0.0), (0.5, 0.1), (0.5, 0.2)]);
        let mut buf = Vec::new();
        write_csv(&cfg, &rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let first = text.lines().nth(1).unwrap();
        assert!(first.ends_with(",NA,ok"), "{first}");
    }
}
