//! Reference inputs and CSV emitters for the tables and figures.

use std::io::Write;

use crate::bounds::{bounds_report, BoundsReport, Prefix};
use crate::degree::TailSpec;
use crate::error::Result;
use crate::family::{FamilyPoint, LowDegreeFamily};
use crate::search::MaxGapResult;

/// Rounds half away from zero to 4 decimals.
pub fn round4(x: f64) -> f64 {
    (x * 1e4).round() / 1e4
}

pub fn fmt4(x: f64) -> String {
    format!("{:.4}", round4(x))
}

fn fmt_opt4(x: Option<f64>) -> String {
    x.map(fmt4).unwrap_or_default()
}

/// `P(Po(rate) = d | Po(rate) > 0)` for `d = 1..=len`.
pub fn conditioned_poisson_prefix(rate: f64, len: usize) -> Prefix {
    let norm = 1.0 - (-rate).exp();
    let mut term = (-rate).exp();
    let probs = (1..=len)
        .map(|d| {
            term *= rate / d as f64;
            term / norm
        })
        .collect();
    Prefix::new(probs).expect("conditioned Poisson prefix is a sub-probability")
}

/// The six `(prefix, mu)` inputs of the reference bounds table. The first
/// two prefixes are zero-truncated Poisson(2) and Poisson(1.5) probabilities.
pub fn table1_inputs() -> Vec<(Prefix, f64)> {
    let pre = |p: &[f64]| Prefix::new(p.to_vec()).expect("static prefix");
    vec![
        (conditioned_poisson_prefix(2.0, 3), 3.0),
        (conditioned_poisson_prefix(1.5, 2), 3.0),
        (pre(&[0.7, 0.0, 0.0]), 2.0),
        (pre(&[0.7, 0.0, 0.0]), 3.0),
        (pre(&[0.5, 0.25, 0.125]), 2.0),
        (pre(&[0.5, 0.25, 0.125]), 3.0),
    ]
}

pub fn table1() -> Vec<BoundsReport> {
    table1_inputs()
        .iter()
        .map(|(p, mu)| bounds_report(p, *mu))
        .collect()
}

fn prefix_cell(p: &Prefix) -> String {
    let parts: Vec<String> = p.probs().iter().map(|&x| fmt_prob(x)).collect();
    format!("({})", parts.join(", "))
}

/// Up to 4 decimals, trailing zeros dropped.
fn fmt_prob(x: f64) -> String {
    let s = fmt4(x);
    let s = s.trim_end_matches('0');
    s.strip_suffix('.').unwrap_or(s).to_string()
}

/// `prefix,mu,L,p_gt_L,lower_prop1,lower_thm_a,upper_thm_b` at 4 decimals.
pub fn write_bounds_csv<W: Write>(out: W, reports: &[BoundsReport]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "prefix",
        "mu",
        "L",
        "p_gt_L",
        "lower_prop1",
        "lower_thm_a",
        "upper_thm_b",
    ])?;
    for r in reports {
        w.write_record([
            prefix_cell(&r.prefix),
            format!("{}", r.mu),
            r.prefix.len().to_string(),
            fmt4(r.p_gt_l),
            fmt_opt4(r.lower_prop1),
            fmt_opt4(r.lower_thm_a),
            fmt_opt4(r.upper_thm_b),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// `L,max_gap,prefix,mu,lower_thm_a,upper_thm_b`, one row per length.
pub fn write_table2_csv<W: Write>(out: W, result: &MaxGapResult) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["L", "max_gap", "prefix", "mu", "lower_thm_a", "upper_thm_b"])?;
    for r in &result.per_length {
        w.write_record([
            r.len.to_string(),
            fmt_opt4(r.best_gap),
            r.best_prefix.as_ref().map(prefix_cell).unwrap_or_default(),
            r.best_mu.map(|m| format!("{m}")).unwrap_or_default(),
            fmt_opt4(r.best_lower),
            fmt_opt4(r.best_upper),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// `mu,max_gap,L,prefix`: the per-`mu` maximum over all lengths.
pub fn write_figure3_csv<W: Write>(out: W, result: &MaxGapResult) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["mu", "max_gap", "L", "prefix"])?;
    for c in &result.combined {
        w.write_record([
            format!("{}", c.mu),
            c.max_gap.map(|g| format!("{g}")).unwrap_or_default(),
            c.len.map(|l| l.to_string()).unwrap_or_default(),
            c.prefix.as_ref().map(prefix_cell).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// One or more named sweeps as `[series,]control,xi,nu`. The series column
/// is written only when there is more than one series.
pub fn write_family_csv<W: Write>(out: W, series: &[(String, Vec<FamilyPoint>)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let named = series.len() > 1;
    if named {
        w.write_record(["series", "control", "xi", "nu"])?;
    } else {
        w.write_record(["control", "xi", "nu"])?;
    }
    for (name, points) in series {
        for p in points {
            let vals = [
                format!("{}", p.control),
                format!("{}", p.xi),
                format!("{}", p.nu),
            ];
            if named {
                w.write_record(std::iter::once(name.clone()).chain(vals))?;
            } else {
                w.write_record(vals)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    OneA,
    OneB,
    TwoA,
    TwoB,
}

impl std::str::FromStr for Figure {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "1a" => Ok(Figure::OneA),
            "1b" => Ok(Figure::OneB),
            "2a" => Ok(Figure::TwoA),
            "2b" => Ok(Figure::TwoB),
            other => Err(format!(
                "unknown figure {other:?} (expected 1a, 1b, 2a or 2b)"
            )),
        }
    }
}

/// Control step for figure sweeps.
pub const FIGURE_STEP: f64 = 0.01;

/// The named families behind a figure.
pub fn figure_families(fig: Figure) -> Result<Vec<LowDegreeFamily>> {
    let low = [1, 2, 3];
    Ok(match fig {
        Figure::OneA => vec![LowDegreeFamily::three_point(low, 2.1)?],
        Figure::OneB => vec![LowDegreeFamily::three_point([1, 2, 10], 2.1)?],
        Figure::TwoA => vec![
            LowDegreeFamily::fixed_tail(&TailSpec::poisson(2.0, 4), low, 2.2)?,
            LowDegreeFamily::fixed_tail(&TailSpec::power_law(2.0, 3.0, 4), low, 2.2)?,
        ],
        Figure::TwoB => vec![
            LowDegreeFamily::fixed_tail(&TailSpec::poisson(7.0, 11), low, 3.5)?,
            LowDegreeFamily::fixed_tail(&TailSpec::power_law(5.0, 2.5, 11), low, 3.5)?,
        ],
    })
}

/// Sweeps every family of a figure at [`FIGURE_STEP`].
pub fn figure_data(fig: Figure) -> Result<Vec<(String, Vec<FamilyPoint>)>> {
    figure_families(fig)?
        .into_iter()
        .map(|f| Ok((f.label().to_string(), f.sweep(FIGURE_STEP)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_half_away_from_zero() {
        assert_eq!(round4(0.12345), 0.1235);
        assert_eq!(fmt4(0.91396), "0.9140");
        assert_eq!(fmt4(1.0), "1.0000");
        assert_eq!(fmt_prob(0.7), "0.7");
        assert_eq!(fmt_prob(0.0), "0");
        assert_eq!(fmt_prob(0.125), "0.125");
    }

    #[test]
    fn conditioned_poisson_values() {
        let p = conditioned_poisson_prefix(2.0, 3);
        let norm = 1.0 - (-2.0f64).exp();
        assert!((p.probs()[0] - 2.0 * (-2.0f64).exp() / norm).abs() < 1e-15);
        assert!((p.probs()[0] - 0.313035).abs() < 1e-6);
        assert!((p.probs()[2] - 0.208690).abs() < 1e-6);
        assert!((p.p_gt_l() - 0.165240).abs() < 1e-5);
    }

    #[test]
    fn empty_sweep_is_header_only() {
        let mut buf = Vec::new();
        write_family_csv(&mut buf, &[("x".into(), Vec::new())]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "control,xi,nu\n");
    }

    #[test]
    fn bounds_csv_layout() {
        let mut buf = Vec::new();
        write_bounds_csv(&mut buf, &table1()[2..3]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "prefix,mu,L,p_gt_L,lower_prop1,lower_thm_a,upper_thm_b\n\
             \"(0.7, 0, 0)\",2,3,0.3000,0.7023,0.7247,0.7318\n"
        );
    }

    #[test]
    fn figure_names() {
        assert_eq!("2b".parse::<Figure>(), Ok(Figure::TwoB));
        assert!("3".parse::<Figure>().is_err());
    }
}
