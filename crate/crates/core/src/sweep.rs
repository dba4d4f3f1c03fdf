//! Family sweeps: certify every `(family, n)` pair in a range and tabulate the
//! outcome as CSV.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::cdv::{verify_theorem, VerifyOptions};
use crate::error::{Error, Result};
use crate::numkernel::TolerancePolicy;
use crate::penny::{generate_realization, Family};

/// Smallest order covered by the corank bound.
pub const SWEEP_MIN_N: usize = 5;

/// One line of a sweep table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub family: Family,
    pub n: usize,
    pub kind: Option<String>,
    pub rank_d: Option<usize>,
    pub corank: Option<usize>,
    pub expected_corank: usize,
    pub m1: bool,
    pub m2: bool,
    pub m3: bool,
    pub gap_ratio: Option<f64>,
    pub elapsed_ms: f64,
    /// Empty on success rows.
    pub reason: Option<String>,
}

impl SweepRow {
    pub fn passed(&self) -> bool {
        self.reason.is_none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    pub rows: usize,
    pub passed: usize,
    pub failed: usize,
}

impl SweepSummary {
    pub fn of(rows: &[SweepRow]) -> Self {
        let passed = rows.iter().filter(|r| r.passed()).count();
        SweepSummary {
            rows: rows.len(),
            passed,
            failed: rows.len() - passed,
        }
    }
}

impl std::fmt::Display for SweepSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} rows: {} passed, {} failed",
            self.rows, self.passed, self.failed
        )
    }
}

/// The `(family, n)` pairs a sweep visits, in output order.
///
/// Orders a family cannot realize are skipped.
pub fn sweep_plan(families: &[Family], n_min: usize, n_max: usize) -> Result<Vec<(Family, usize)>> {
    if n_min < SWEEP_MIN_N {
        return Err(Error::Hypothesis(format!(
            "sweeps need n_min >= {SWEEP_MIN_N}, got {n_min}"
        )));
    }
    if n_max < n_min {
        return Err(Error::Parameter(format!("empty range {n_min}..{n_max}")));
    }
    if families.is_empty() {
        return Err(Error::Parameter("no families given".into()));
    }
    Ok(families
        .iter()
        .flat_map(|&f| {
            (n_min..=n_max)
                .filter(move |&n| f.accepts(n))
                .map(move |n| (f, n))
        })
        .collect())
}

/// Certifies one instance; never fails, errors become the row's reason.
pub fn sweep_row(
    family: Family,
    n: usize,
    policy: &TolerancePolicy,
    opts: VerifyOptions,
) -> SweepRow {
    let start = Instant::now();
    let expected_corank = family.expected_corank(n);
    let mut row = SweepRow {
        family,
        n,
        kind: None,
        rank_d: None,
        corank: None,
        expected_corank,
        m1: false,
        m2: false,
        m3: false,
        gap_ratio: None,
        elapsed_ms: 0.0,
        reason: None,
    };
    let outcome = generate_realization(family, n).and_then(|r| verify_theorem(&r, policy, opts));
    match outcome {
        Ok(report) => {
            let cert = &report.certificate;
            row.kind = Some(report.classification.kind.label().to_string());
            row.rank_d = Some(report.rank_d_exact.unwrap_or(report.classification.rank_d));
            row.corank = Some(cert.corank);
            row.m1 = cert.m1_ok;
            row.m2 = cert.m2_ok;
            row.m3 = cert.m3_ok;
            row.gap_ratio = Some(cert.eigen.gap_ratio);
            if !report.passed {
                row.reason = Some(report.failures.join("; "));
            } else if cert.corank != expected_corank {
                row.reason = Some(format!(
                    "corank {} differs from the family value {expected_corank}",
                    cert.corank
                ));
            }
        }
        Err(e) => row.reason = Some(format!("{}: {e}", e.kind())),
    }
    row.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    row
}

/// Certifies every planned instance in parallel; rows come back in plan order.
pub fn run_sweep(
    families: &[Family],
    n_min: usize,
    n_max: usize,
    policy: &TolerancePolicy,
    opts: VerifyOptions,
) -> Result<Vec<SweepRow>> {
    policy.validate()?;
    let plan = sweep_plan(families, n_min, n_max)?;
    Ok(plan
        .into_par_iter()
        .map(|(f, n)| sweep_row(f, n, policy, opts))
        .collect())
}

/// Renders rows as CSV. Timings are opt-in so repeated runs match byte for byte.
pub fn sweep_csv(rows: &[SweepRow], timings: bool) -> String {
    let mut out = String::from("family,n,kind,rank_d,corank,expected_corank,m1,m2,m3,gap_ratio");
    if timings {
        out.push_str(",elapsed_ms");
    }
    out.push_str(",reason\n");
    let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in rows {
        let gap = r.gap_ratio.map(format_gap).unwrap_or_default();
        let _ = write!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.family.name(),
            r.n,
            r.kind.as_deref().unwrap_or(""),
            opt(r.rank_d),
            opt(r.corank),
            r.expected_corank,
            r.m1,
            r.m2,
            r.m3,
            gap
        );
        if timings {
            let _ = write!(out, ",{:.3}", r.elapsed_ms);
        }
        let _ = writeln!(out, ",{}", csv_field(r.reason.as_deref().unwrap_or("")));
    }
    out
}

fn format_gap(g: f64) -> String {
    if g.is_infinite() {
        "inf".into()
    } else {
        format!("{g:.6e}")
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plan_refuses_small_orders() {
        let err = sweep_plan(&[Family::PathArc], 3, 10).unwrap_err();
        assert!(matches!(err, Error::Hypothesis(_)));
    }

    #[test]
    fn plan_skips_unrealizable_orders() {
        let plan = sweep_plan(&[Family::Flower], 5, 10).unwrap();
        assert_eq!(plan.iter().map(|p| p.1).collect::<Vec<_>>(), vec![5, 6, 7]);
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"x\""), "\"say \"\"x\"\"\"");
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(format_gap(f64::INFINITY), "inf");
    }

    #[test]
    fn path_and_cycle_rows() {
        let p = TolerancePolicy::default();
        let rows = run_sweep(
            &[Family::PathArc, Family::CyclePolygon],
            5,
            10,
            &p,
            VerifyOptions::default(),
        )
        .unwrap();
        assert_eq!(rows.len(), 12);
        for r in &rows {
            assert!(r.passed(), "{r:?}");
            assert_eq!(r.corank, Some(r.n - 3));
        }
        let csv = sweep_csv(&rows, false);
        assert_eq!(csv.lines().count(), 13);
        assert!(csv.lines().nth(1).unwrap().starts_with("path,5,spherical,"));
    }

    #[test]
    fn strip_rows() {
        let rows = run_sweep(
            &[Family::LatticeStrip],
            5,
            10,
            &TolerancePolicy::default(),
            VerifyOptions::default(),
        )
        .unwrap();
        assert_eq!(rows.len(), 6);
        assert!(rows.iter().all(|r| r.passed() && r.corank == Some(r.n - 4)));
    }
}
