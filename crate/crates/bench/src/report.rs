use std::collections::BTreeMap;
use std::fmt::Write;

use crate::{BenchError, Method, Status, TimingRecord};

pub const CSV_HEADER: &str = "n,m,method,median_ms,reps,censored";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// Least-squares fit of `ln(median_ms)` against `ln(m)` over the records that
/// have a median.
pub fn fit_scaling(records: &[TimingRecord]) -> Result<ScalingFit, BenchError> {
    let points: Vec<(f64, f64)> = records
        .iter()
        .filter_map(|r| Some(((r.m as f64).ln(), r.median_ms.filter(|&t| t > 0.0)?.ln())))
        .collect();
    let k = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / k;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    if points.len() < 3 || sxx == 0.0 {
        return Err(BenchError::InsufficientData(points.len()));
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let r2 = if syy == 0.0 {
        1.0
    } else {
        sxy * sxy / (sxx * syy)
    };
    Ok(ScalingFit {
        slope,
        intercept,
        r2,
    })
}

pub fn emit_csv(records: &[TimingRecord]) -> String {
    let mut out = format!("{CSV_HEADER}\n");
    for r in records {
        let median = r.median_ms.map(|t| format!("{t:.6}")).unwrap_or_default();
        let censored = r.status != Status::Ok;
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.n, r.m, r.method, median, r.reps, censored
        )
        .unwrap();
    }
    out
}

fn cell(r: Option<&TimingRecord>) -> String {
    match r {
        None => "-".into(),
        Some(r) => match (r.status, r.median_ms) {
            (Status::Ok, Some(t)) => format!("{t:.3}"),
            (Status::Unavailable, _) => "unavailable".into(),
            _ => "N/A".into(),
        },
    }
}

/// Fixed-width table with one row per `(n, m)`, sorted by `n`, and a
/// `solver_loop / ours` speedup column where both medians exist.
pub fn emit_table(records: &[TimingRecord]) -> String {
    let mut rows: BTreeMap<(usize, usize), BTreeMap<Method, &TimingRecord>> = BTreeMap::new();
    for r in records {
        rows.entry((r.n, r.m)).or_default().insert(r.method, r);
    }
    let mut out = String::new();
    writeln!(
        out,
        "{:>6} {:>6} {:>12} {:>12} {:>12} {:>9}",
        "n", "m", "naive_ms", "solver_ms", "ours_ms", "speedup"
    )
    .unwrap();
    for ((n, m), by_method) in &rows {
        let get = |method| by_method.get(&method).copied();
        let speedup = match (
            get(Method::SolverLoop).and_then(|r| r.median_ms),
            get(Method::Ours).and_then(|r| r.median_ms),
        ) {
            (Some(s), Some(o)) if o > 0.0 => format!("{:.1}x", s / o),
            _ => "-".into(),
        };
        writeln!(
            out,
            "{:>6} {:>6} {:>12} {:>12} {:>12} {:>9}",
            n,
            m,
            cell(get(Method::Naive)),
            cell(get(Method::SolverLoop)),
            cell(get(Method::Ours)),
            speedup
        )
        .unwrap();
    }
    if !records.is_empty() {
        out.push_str(
            "\nMedian wall-clock ms per labeled pair (one SAT + one UNSAT). Baselines count every \
             rejected formula until one of each label is found. The solver baseline excludes \
             proof generation. N/A: timed out or above the enumeration cap.\n",
        );
        let errors: usize = records.iter().map(|r| r.errors).sum();
        if errors > 0 {
            writeln!(
                out,
                "Solver calls with an exit status other than 10/20: {errors}"
            )
            .unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(n: usize, m: usize, method: Method, ms: Option<f64>) -> TimingRecord {
        TimingRecord {
            n,
            m,
            method,
            median_ms: ms,
            reps: 3,
            status: if ms.is_some() {
                Status::Ok
            } else {
                Status::Censored
            },
            errors: 0,
        }
    }

    #[test]
    fn linear_data_has_unit_slope() {
        let rs: Vec<_> = [100, 200, 500, 1000]
            .iter()
            .map(|&m| rec(m, m, Method::Ours, Some(0.01 * m as f64)))
            .collect();
        let fit = fit_scaling(&rs).unwrap();
        assert!((fit.slope - 1.0).abs() < 1e-9);
        assert!((fit.intercept - 0.01f64.ln()).abs() < 1e-9);
        assert!((fit.r2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_times_have_zero_slope() {
        let rs: Vec<_> = [10, 20, 40]
            .iter()
            .map(|&m| rec(m, m, Method::Ours, Some(2.0)))
            .collect();
        assert!(fit_scaling(&rs).unwrap().slope.abs() < 1e-12);
    }

    #[test]
    fn fit_needs_three_points() {
        let rs = vec![
            rec(1, 10, Method::Ours, Some(1.0)),
            rec(2, 20, Method::Ours, Some(2.0)),
            rec(3, 30, Method::Ours, None),
        ];
        assert!(matches!(
            fit_scaling(&rs),
            Err(BenchError::InsufficientData(2))
        ));
    }

    #[test]
    fn table_layout() {
        assert_eq!(emit_table(&[]).lines().count(), 1);
        let t = emit_table(&[
            rec(100, 426, Method::Ours, Some(2.0)),
            rec(50, 213, Method::Naive, None),
            rec(100, 426, Method::SolverLoop, Some(9.0)),
        ]);
        let lines: Vec<&str> = t.lines().collect();
        assert!(lines[1].trim_start().starts_with("50"));
        assert!(lines[1].contains("N/A"));
        assert!(lines[2].ends_with("4.5x"));
        assert!(t.contains("excludes proof generation"));
    }

    #[test]
    fn csv_rows() {
        let csv = emit_csv(&[
            rec(15, 64, Method::Naive, Some(1.5)),
            rec(50, 213, Method::Naive, None),
        ]);
        assert_eq!(
            csv,
            "n,m,method,median_ms,reps,censored\n15,64,naive,1.500000,3,false\n50,213,naive,,3,true\n"
        );
        assert_eq!(emit_csv(&[]), "n,m,method,median_ms,reps,censored\n");
    }
}
