//! Tabular sweeps behind the capacity, rate, ρ* and cost curves.
//!
//! CSV output always has a header row, uses `,` as delimiter and prints
//! floats with 12 significant digits.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::capacity::{binary_entropy, cap_fixed_length, empirical_cap, linear_threshold};
use crate::codec::rate_table;
use crate::cost::{cost_star, rho_star, CostParams};
use crate::error::{Error, Result};

/// Largest number of ρ values a grid may expand to.
pub const MAX_GRID_POINTS: usize = 1_000_000;

pub const DEFAULT_CYCLES: [u64; 5] = [25, 50, 100, 200, 400];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Curve {
    CapVsRho,
    RateVsRho,
    RhoStar,
    CostVsRho,
    EmpiricalConvergence,
}

impl Curve {
    pub const ALL: [Curve; 5] =
        [Curve::CapVsRho, Curve::RateVsRho, Curve::RhoStar, Curve::CostVsRho, Curve::EmpiricalConvergence];

    pub fn as_str(self) -> &'static str {
        match self {
            Curve::CapVsRho => "cap-vs-rho",
            Curve::RateVsRho => "rate-vs-rho",
            Curve::RhoStar => "rho-star",
            Curve::CostVsRho => "cost-vs-rho",
            Curve::EmpiricalConvergence => "empirical-convergence",
        }
    }

    pub fn columns(self) -> &'static [&'static str] {
        match self {
            Curve::CapVsRho => &["q", "rho", "cap", "entropy"],
            Curve::RateVsRho => &["q", "rho", "scheme", "rate", "cap"],
            Curve::RhoStar => &["q", "threshold", "rho_star"],
            Curve::CostVsRho => &["q", "rho", "cost"],
            Curve::EmpiricalConvergence => &["q", "rho", "cycles", "empirical", "cap"],
        }
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Curve {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Curve::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::domain(format!("unknown curve {s:?}")))
    }
}

/// Inclusive ρ grid `start, start + step, ..` up to `stop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RhoGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl RhoGrid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        let grid = RhoGrid { start, stop, step };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        let RhoGrid { start, stop, step } = *self;
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::domain(format!("grid step must be positive, got {step}")));
        }
        if !(0.0..=1.0).contains(&start) || !(0.0..=1.0).contains(&stop) || start > stop {
            return Err(Error::domain(format!("grid [{start}, {stop}] must satisfy 0 <= start <= stop <= 1")));
        }
        if (stop - start) / step >= MAX_GRID_POINTS as f64 {
            return Err(Error::domain(format!("grid exceeds {MAX_GRID_POINTS} points")));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n)
            .map(|i| {
                // snap to 12 decimals so 0.1·3 prints and compares as 0.3
                let v = self.start + self.step * i as f64;
                ((v * 1e12).round() / 1e12).clamp(0.0, 1.0)
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::domain(format!("unknown format {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRequest {
    pub curve: Curve,
    pub qs: Vec<u32>,
    pub grid: RhoGrid,
    #[serde(default)]
    pub format: OutputFormat,
    /// Cost parameters for `cost-vs-rho`.
    #[serde(default = "default_cost")]
    pub cost: CostParams,
    /// Cycle counts for `empirical-convergence`.
    #[serde(default = "default_cycles")]
    pub cycles: Vec<u64>,
}

fn default_cost() -> CostParams {
    CostParams { alpha: 1.0, beta: 1.0, bits: 1000, cycles: 100 }
}

fn default_cycles() -> Vec<u64> {
    DEFAULT_CYCLES.to_vec()
}

impl SweepRequest {
    pub fn new(curve: Curve, qs: Vec<u32>, grid: RhoGrid) -> Self {
        SweepRequest { curve, qs, grid, format: OutputFormat::Csv, cost: default_cost(), cycles: default_cycles() }
    }

    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        if self.qs.is_empty() {
            return Err(Error::domain("at least one q is required"));
        }
        if let Some(q) = self.qs.iter().find(|&&q| q < 2) {
            return Err(Error::domain(format!("q = {q} is below 2")));
        }
        if self.curve == Curve::EmpiricalConvergence && (self.cycles.is_empty() || self.cycles.contains(&0)) {
            return Err(Error::domain("cycle counts must be positive"));
        }
        CostParams::new(self.cost.alpha, self.cost.beta, self.cost.bits, self.cost.cycles)?;
        Ok(())
    }

    pub fn run(&self) -> Result<Table> {
        self.validate()?;
        let mut qs = self.qs.clone();
        qs.sort_unstable();
        qs.dedup();
        let mut cycles = self.cycles.clone();
        cycles.sort_unstable();
        cycles.dedup();
        let grid = self.grid.points();
        let mut rows = Vec::new();
        for &q in &qs {
            match self.curve {
                Curve::CapVsRho => {
                    for &rho in &grid {
                        rows.push(vec![
                            Cell::Int(q as u64),
                            Cell::Float(rho),
                            Cell::Float(cap_fixed_length(q, rho)?),
                            Cell::Float(binary_entropy(rho)?),
                        ]);
                    }
                }
                Curve::RateVsRho => {
                    for row in rate_table(q, &grid)? {
                        rows.push(vec![
                            Cell::Int(q as u64),
                            Cell::Float(row.rho),
                            Cell::Text(row.scheme.to_string()),
                            Cell::Float(row.rate),
                            Cell::Float(row.cap),
                        ]);
                    }
                }
                Curve::RhoStar => {
                    rows.push(vec![Cell::Int(q as u64), Cell::Float(linear_threshold(q)), Cell::Float(rho_star(q)?)]);
                }
                Curve::CostVsRho => {
                    // cost is undefined where cap = 0
                    for &rho in grid.iter().filter(|&&r| r > 0.0 && r < 1.0) {
                        rows.push(vec![Cell::Int(q as u64), Cell::Float(rho), Cell::Float(cost_star(&self.cost, q, rho)?)]);
                    }
                }
                Curve::EmpiricalConvergence => {
                    for &rho in &grid {
                        let cap = cap_fixed_length(q, rho)?;
                        for &c in &cycles {
                            rows.push(vec![
                                Cell::Int(q as u64),
                                Cell::Float(rho),
                                Cell::Int(c),
                                Cell::Float(empirical_cap(q, c, rho)?),
                                Cell::Float(cap),
                            ]);
                        }
                    }
                }
            }
        }
        Ok(Table { columns: self.curve.columns().iter().map(|s| s.to_string()).collect(), rows })
    }

    pub fn render(&self) -> Result<String> {
        let table = self.run()?;
        Ok(match self.format {
            OutputFormat::Csv => table.to_csv(),
            OutputFormat::Json => table.to_json(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Int(u64),
    Float(f64),
    Text(String),
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Cell::Int(v) => Some(v as f64),
            Cell::Float(v) => Some(v),
            Cell::Text(_) => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Cell::Text(s) => Some(s),
            _ => None,
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Float(v) => f.write_str(&format_g12(*v)),
            Cell::Text(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

fn column_is_int(name: &str) -> bool {
    matches!(name, "q" | "cycles")
}

fn column_is_text(name: &str) -> bool {
    name == "scheme"
}

impl Table {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::to_string)).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 output")
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let bad = |e: csv::Error| Error::domain(format!("invalid CSV: {e}"));
        let columns: Vec<String> = r.headers().map_err(bad)?.iter().map(str::to_string).collect();
        let mut rows = Vec::new();
        for record in r.records() {
            let record = record.map_err(bad)?;
            let row = record
                .iter()
                .zip(&columns)
                .map(|(field, name)| {
                    let num = |e: String| Error::domain(format!("column {name}: {e}"));
                    if column_is_text(name) {
                        Ok(Cell::Text(field.to_string()))
                    } else if column_is_int(name) {
                        field.parse().map(Cell::Int).map_err(|e| num(e.to_string()))
                    } else {
                        field.parse().map(Cell::Float).map_err(|e| num(e.to_string()))
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Ok(Table { columns, rows })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }
}

/// `printf("%.12g")`.
pub fn format_g12(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..DIGITS).contains(&exp) {
        let m = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        trim_fraction(&format!("{:.*}", (DIGITS - 1 - exp) as usize, x)).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
