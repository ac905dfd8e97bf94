//! The oracle-vs-formula grid behind `ssloci verify`.
//!
//! Each cell pairs a closed form with an independent brute-force count. Cells
//! whose search space exceeds the budget are reported as skipped, never
//! silently dropped. The report is ordered by cell and carries no timings, so
//! repeated runs are byte-identical whatever the thread count.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::closed_forms::{lu_count, proj_line_count, CountQuery};
use crate::error::{Error, Result};
use crate::exact_arith::{is_prime, prime_power, Integer};
use crate::limits::Limits;
use crate::oracles::{OracleResult, Oracles};

/// Search budget per cell for the default grid.
pub const DEFAULT_CELL_BUDGET: u64 = 1 << 22;

/// Rough brute-force throughput used for the `--extended` time estimate.
const CELLS_PER_SECOND: f64 = 2.0e7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VerifyConfig {
    pub max_n: u32,
    pub max_q: u64,
    pub extended: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            max_n: 2,
            max_q: 5,
            extended: false,
        }
    }
}

impl VerifyConfig {
    /// `--extended` raises `q` to at least 9 and the per-cell budget to the global limit.
    fn effective_max_q(&self) -> u64 {
        if self.extended {
            self.max_q.max(9)
        } else {
            self.max_q
        }
    }

    fn budget(&self, limits: &Limits) -> u64 {
        if self.extended {
            limits.max_search
        } else {
            DEFAULT_CELL_BUDGET.min(limits.max_search)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Cell {
    Count(CountQuery),
    /// Twisted-isotropic `n`-planes in `F_{p²}^{2n}` against `|LU(n,2n)(F_p)|`.
    Twisted { n: u32, p: u64 },
    /// Zeros of `a^{p+1} + b^{p+1}` on `P^1(F_{p²})` against `p + 1`.
    Fermat { p: u64 },
}

impl Cell {
    pub fn family(&self) -> &'static str {
        match self {
            Cell::Count(q) => q.family().name(),
            Cell::Twisted { .. } => "twisted",
            Cell::Fermat { .. } => "fermat",
        }
    }

    pub fn label(&self) -> String {
        match *self {
            Cell::Count(q) => q.describe(),
            Cell::Twisted { n, p } => format!("|X({n},{})(F_{})| = |LU({n},{})(F_{p})|", 2 * n, p * p, 2 * n),
            Cell::Fermat { p } => format!("#{{a^{0} + b^{0} = 0}} in P^1(F_{1})", p + 1, p * p),
        }
    }

    pub fn formula(&self) -> Result<Integer> {
        match *self {
            Cell::Count(q) => q.evaluate(),
            Cell::Twisted { n, p } => lu_count(n, p),
            Cell::Fermat { p } => proj_line_count(p),
        }
    }

    pub fn oracle(&self, oracles: &Oracles) -> Result<OracleResult> {
        match *self {
            Cell::Count(q) => oracles.run(&q),
            Cell::Twisted { n, p } => oracles.count_twisted_isotropic(n, p),
            Cell::Fermat { p } => oracles.count_fermat_projective(p),
        }
    }

    /// Nominal search space, read off the oracle's own size guard.
    pub fn search_space(&self, limits: &Limits) -> Option<Integer> {
        match self.oracle(&Oracles::new(limits.with_max_search(0))) {
            Err(Error::FieldTooLarge { size, .. }) => Some(size),
            _ => None,
        }
    }
}

/// The cells of the grid, in report order.
pub fn grid(config: &VerifyConfig) -> Vec<Cell> {
    let max_n = config.max_n.max(1);
    let qs: Vec<u64> = (2..=config.effective_max_q()).filter(|&q| prime_power(q).is_some()).collect();
    let ps: Vec<u64> = qs.iter().copied().filter(|&q| is_prime(q)).collect();
    let mut cells = Vec::new();
    for &q in &qs {
        for n in 1..=max_n {
            cells.push(Cell::Count(CountQuery::Gl { n, q }));
            cells.push(Cell::Count(CountQuery::Sp { n, q }));
            cells.push(Cell::Count(CountQuery::U { n, q }));
            cells.push(Cell::Count(CountQuery::Lagrangian { n, q }));
            cells.push(Cell::Count(CountQuery::Lu { n, q }));
        }
        for m in 1..=max_n + 1 {
            cells.push(Cell::Count(CountQuery::Im { m, q }));
        }
        for n in 1..=max_n + 2 {
            for r in 0..=n {
                cells.push(Cell::Count(CountQuery::Grassmannian { n, r, q }));
            }
        }
        cells.push(Cell::Count(CountQuery::ProjLine { q }));
    }
    for modulus in 2..=12 {
        cells.push(Cell::Count(CountQuery::SpModN { g: 1, modulus }));
    }
    cells.push(Cell::Count(CountQuery::SpModN { g: 2, modulus: 2 }));
    if config.extended {
        cells.push(Cell::Count(CountQuery::SpModN { g: 2, modulus: 3 }));
    }
    for &p in &ps {
        for n in 1..=max_n {
            cells.push(Cell::Twisted { n, p });
        }
        cells.push(Cell::Fermat { p });
    }
    cells.sort();
    cells.dedup();
    cells
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellReport {
    pub family: String,
    pub cell: String,
    pub formula: String,
    pub oracle: Option<String>,
    pub search_space: Option<String>,
    pub status: Status,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    pub budget: u64,
    /// Seconds, for `--extended` only; derived from search sizes, not measured.
    pub estimated_seconds: Option<u64>,
    pub cells: Vec<CellReport>,
}

impl VerifyReport {
    pub fn count(&self, status: Status) -> usize {
        self.cells.iter().filter(|c| c.status == status).count()
    }

    pub fn all_pass(&self) -> bool {
        self.count(Status::Fail) == 0
    }

    pub fn summary(&self) -> String {
        format!(
            "{} cells: {} pass, {} fail, {} skipped",
            self.cells.len(),
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Skipped)
        )
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        if let Some(s) = self.estimated_seconds {
            let _ = writeln!(out, "extended grid: estimated {s} s of brute force");
        }
        let rows: Vec<[String; 5]> = self
            .cells
            .iter()
            .map(|c| {
                let status = match c.status {
                    Status::Pass => "pass".to_string(),
                    Status::Fail => "FAIL".to_string(),
                    Status::Skipped => format!("skip ({})", c.note.as_deref().unwrap_or("")),
                };
                [
                    c.family.clone(),
                    c.cell.clone(),
                    c.formula.clone(),
                    c.oracle.clone().unwrap_or_else(|| "-".into()),
                    status,
                ]
            })
            .collect();
        let header = ["family", "cell", "formula", "oracle", "status"].map(String::from);
        let mut widths = [0usize; 4];
        for row in std::iter::once(&header).chain(&rows) {
            for (w, s) in widths.iter_mut().zip(row) {
                *w = (*w).max(s.chars().count());
            }
        }
        for row in std::iter::once(&header).chain(&rows) {
            let mut line = String::new();
            for (i, s) in row.iter().enumerate() {
                if i < 4 {
                    let pad = widths[i] - s.chars().count();
                    line.push_str(s);
                    line.push_str(&" ".repeat(pad + 2));
                } else {
                    line.push_str(s);
                }
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out.push_str(&self.summary());
        out.push('\n');
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn run_cell(cell: &Cell, oracles: &Oracles) -> CellReport {
    let mut report = CellReport {
        family: cell.family().into(),
        cell: cell.label(),
        formula: String::new(),
        oracle: None,
        search_space: None,
        status: Status::Fail,
        note: None,
    };
    let formula = match cell.formula() {
        Ok(v) => v,
        Err(e) => {
            report.note = Some(format!("formula: {e}"));
            return report;
        }
    };
    report.formula = formula.to_string();
    match cell.oracle(oracles) {
        Ok(r) => {
            report.search_space = Some(r.search_space.to_string());
            report.status = if r.count == formula { Status::Pass } else { Status::Fail };
            report.oracle = Some(r.count.to_string());
        }
        Err(Error::FieldTooLarge { size, limit, .. }) => {
            report.search_space = Some(size.to_string());
            report.status = Status::Skipped;
            report.note = Some(format!("search {size} > {limit}"));
        }
        Err(e) => report.note = Some(format!("oracle: {e}")),
    }
    report
}

/// Runs every cell of the grid; cells run in parallel, the report is in grid order.
pub fn run_verify(config: &VerifyConfig, limits: &Limits) -> VerifyReport {
    let budget = config.budget(limits);
    let cell_limits = limits.with_max_search(budget);
    let cells = grid(config);
    let estimated_seconds = config.extended.then(|| {
        let total: f64 = cells
            .iter()
            .filter_map(|c| c.search_space(&cell_limits))
            .filter(|s| *s <= Integer::from(budget))
            .map(|s| s.to_string().parse::<f64>().unwrap_or(0.0))
            .sum();
        (total / CELLS_PER_SECOND).ceil() as u64
    });
    let oracles = Oracles::new(cell_limits);
    let reports = cells.par_iter().map(|c| run_cell(c, &oracles)).collect();
    VerifyReport {
        config: *config,
        budget,
        estimated_seconds,
        cells: reports,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_grid_passes() {
        let config = VerifyConfig {
            max_n: 1,
            max_q: 3,
            extended: false,
        };
        let r = run_verify(&config, &Limits::default());
        assert!(r.all_pass(), "{}", r.to_table());
        assert!(r.count(Status::Pass) > 20);
        assert!(r.estimated_seconds.is_none());
    }

    #[test]
    fn grid_is_sorted_and_skips_are_reported() {
        let config = VerifyConfig::default();
        let cells = grid(&config);
        let mut sorted = cells.clone();
        sorted.sort();
        assert_eq!(cells, sorted);
        let tiny = Limits::default().with_max_search(50);
        let cfg = VerifyConfig {
            max_n: 1,
            max_q: 2,
            extended: false,
        };
        let r = run_verify(&cfg, &tiny);
        assert!(r.count(Status::Skipped) > 0);
        assert!(r.all_pass());
        assert_eq!(r.budget, 50);
    }

    #[test]
    fn search_space_probe() {
        let lim = Limits::default();
        let c = Cell::Count(CountQuery::Sp { n: 2, q: 3 });
        assert_eq!(c.search_space(&lim), Some(Integer::from(3u64.pow(16))));
        assert_eq!(Cell::Fermat { p: 5 }.search_space(&lim), Some(Integer::from(26)));
    }
}
