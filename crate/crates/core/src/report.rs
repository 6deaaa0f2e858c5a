//! Stable serialization of certificates and tables.
//!
//! Certificate format (`aklt-gap-certificate v1`): a line-oriented
//! structured text with fixed key order. Scalar fields come first as
//! `key = value`, followed by a `[per_edge]` section with one line per
//! degree pair, and a `[provenance]` section with one line per record.
//! Rationals render as `p/q` in lowest terms (or a bare integer); intervals
//! render as `[lo, hi]` decimal strings, outward-rounded to the stated
//! number of significant digits. Nothing in the format is
//! locale-dependent, and map sections iterate in key order, so output is
//! reproducible byte-for-byte given identical inputs.
//!
//! Table formats are plain CSV with a header row; cells never contain
//! commas, so no quoting is needed. Rational columns round-trip exactly;
//! interval columns round-trip as their decimal strings.

use crate::certify::{
    compare_flavors, delta_new, FlavorComparison, GapCertificate, Injectivity, Mode,
};
use crate::interval::Interval;
use crate::numbers::{format_q, parse_q, Q};
use crate::transfer::{self, TransferQuantities};
use crate::{Error, Result};

/// Significant digits for interval endpoints in reports.
pub const INTERVAL_DIGITS: usize = 24;

fn interval_cells(iv: &Interval) -> (String, String) {
    iv.to_decimal_strings(INTERVAL_DIGITS)
}

fn interval_field(iv: &Interval) -> String {
    let (lo, hi) = interval_cells(iv);
    format!("[{lo}, {hi}]")
}

/// Renders a certificate in the v1 structured-text format.
pub fn certificate_to_text(cert: &GapCertificate) -> String {
    let mut out = String::new();
    out.push_str("aklt-gap-certificate v1\n");
    out.push_str(&format!("verdict = {}\n", cert.verdict));
    out.push_str(&format!("gapped = {}\n", cert.gapped));
    out.push_str(&format!("delta_max = {}\n", cert.delta_max));
    out.push_str(&format!("n = {}\n", cert.n));
    out.push_str(&format!("mode = {}\n", cert.mode));
    out.push_str(&format!(
        "variable_decoration = {}\n",
        cert.variable_decoration
    ));
    out.push_str(&format!("injectivity_ok = {}\n", cert.injectivity_ok));
    out.push_str(&format!(
        "epsilon_upper = {}\n",
        interval_field(&cert.epsilon_upper)
    ));
    out.push_str(&format!("threshold = {}\n", format_q(&cert.threshold)));
    out.push_str(&format!("precision_bits = {}\n", cert.precision_bits));
    out.push_str(&format!("interval_digits = {INTERVAL_DIGITS}\n"));
    match cert.gamma_lower {
        Some(g) => out.push_str(&format!("gamma_lower = {g}\n")),
        None => out.push_str("gamma_lower = none\n"),
    }
    out.push_str("[per_edge]\n");
    for ((dl, dr), edge) in &cert.per_edge {
        let inj = match edge.injectivity {
            Injectivity::Certified => "injective",
            Injectivity::Failed => "injectivity-failed",
            Injectivity::Undecided => "injectivity-undecided",
        };
        out.push_str(&format!(
            "{dl},{dr} = {} {}\n",
            interval_field(&edge.delta),
            inj
        ));
    }
    out.push_str("[provenance]\n");
    for p in &cert.provenance {
        out.push_str(&format!("{} = {} ; {}\n", p.quantity, p.value, p.source));
    }
    out
}

/// One row of the per-`(d,n)` table.
#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub d: u32,
    pub n: u32,
    pub q_l: Q,
    pub el_inf_sq: Q,
    pub b: (String, String),
    pub delta: (String, String),
    pub verdict: String,
}

/// Builds one table row; for degrees up to 4 the closed-form table values
/// are recomputed and equality-checked against the engine.
pub fn table_row(d: u32, n: u32, mode: Mode, prec: u32) -> Result<TableRow> {
    let t = TransferQuantities::compute(d, n, prec)?;
    if let Some((ql_expect, el_expect)) = transfer::small_degree_closed_forms(d, n) {
        if t.ql_exact != ql_expect || t.el_inf_sq != el_expect {
            return Err(Error::Numerical(format!(
                "small-degree closed forms disagree at d={d} n={n}"
            )));
        }
    }
    let b = crate::certify::b_new(d, n, mode, prec)?;
    let b_cells = if b.b.is_infinite() {
        ("inf".into(), "inf".into())
    } else {
        interval_cells(&b.b)
    };
    let (delta_cells, verdict) = if d >= 3 {
        let out = delta_new(d, d, n, mode, prec)?;
        let cells = if out.delta.is_infinite() {
            ("inf".into(), "inf".into())
        } else {
            interval_cells(&out.delta)
        };
        let verdict = match out.injectivity {
            Injectivity::Certified => {
                if out.delta.lt_q(&crate::numbers::q_ratio(1, i64::from(d))) {
                    "gapped".to_string()
                } else {
                    "not-certified".to_string()
                }
            }
            _ => "undefined".to_string(),
        };
        (cells, verdict)
    } else {
        (("n/a".into(), "n/a".into()), "n/a".to_string())
    };
    Ok(TableRow {
        d,
        n,
        q_l: t.ql_exact,
        el_inf_sq: t.el_inf_sq,
        b: b_cells,
        delta: delta_cells,
        verdict,
    })
}

pub const TABLE_HEADER: &str = "d,n,q_L,EL_inf_sq,b_lo,b_hi,delta_lo,delta_hi,verdict";

pub fn write_table(rows: &[TableRow]) -> String {
    let mut out = String::from(TABLE_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.d,
            r.n,
            format_q(&r.q_l),
            format_q(&r.el_inf_sq),
            r.b.0,
            r.b.1,
            r.delta.0,
            r.delta.1,
            r.verdict
        ));
    }
    out
}

pub fn parse_table(text: &str) -> Result<Vec<TableRow>> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Domain("empty table".into()))?;
    if header != TABLE_HEADER {
        return Err(Error::Domain(format!("unexpected header '{header}'")));
    }
    let mut rows = Vec::new();
    for (idx, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 9 {
            return Err(Error::Domain(format!(
                "row {} has {} cells, expected 9",
                idx + 2,
                cells.len()
            )));
        }
        let bad = |what: &str| Error::Domain(format!("row {}: bad {what}", idx + 2));
        rows.push(TableRow {
            d: cells[0].parse().map_err(|_| bad("degree"))?,
            n: cells[1].parse().map_err(|_| bad("decoration"))?,
            q_l: parse_q(cells[2]).ok_or_else(|| bad("q_L"))?,
            el_inf_sq: parse_q(cells[3]).ok_or_else(|| bad("EL_inf_sq"))?,
            b: (cells[4].into(), cells[5].into()),
            delta: (cells[6].into(), cells[7].into()),
            verdict: cells[8].into(),
        });
    }
    Ok(rows)
}

pub const COMPARE_HEADER: &str =
    "d,n,defined,b_inf_lo,b_inf_hi,b_op,b_lr_inf_lo,b_lr_inf_hi,b_lr_op,delta_inf_lo,delta_inf_hi,delta_op_lo,delta_op_hi,strict";

/// One row of the two-flavor comparison table.
pub fn compare_row(d: u32, n: u32, prec: u32) -> Result<String> {
    let cmp: FlavorComparison = compare_flavors(d, n, prec)?;
    let defined = cmp.strictly_tighter.is_some();
    if !defined {
        return Ok(format!(
            "{d},{n},false,undefined,undefined,undefined,undefined,undefined,undefined,undefined,undefined,undefined,undefined,n/a"
        ));
    }
    let (bi_lo, bi_hi) = interval_cells(&cmp.new_pair.b_l);
    let b_op = {
        let (b_l, _, _, _) = crate::certify::b_old_exact(d, n)?;
        format_q(&b_l)
    };
    let (blr_lo, blr_hi) = interval_cells(&cmp.new_pair.b_lr);
    let b_lr_op = {
        let (_, _, b_lr, _) = crate::certify::b_old_exact(d, n)?;
        format_q(&b_lr)
    };
    let (di_lo, di_hi) = interval_cells(&cmp.delta_new.delta);
    let (do_lo, do_hi) = interval_cells(&cmp.delta_old.delta);
    Ok(format!(
        "{d},{n},true,{bi_lo},{bi_hi},{b_op},{blr_lo},{blr_hi},{b_lr_op},{di_lo},{di_hi},{do_lo},{do_hi},{}",
        cmp.strictly_tighter == Some(true)
    ))
}

/// Report lines for the verification suite (one per check).
pub fn verify_report(results: &[crate::verify::CheckResult]) -> String {
    let mut out = String::new();
    for r in results {
        match &r.status {
            crate::verify::CheckStatus::Pass => {
                out.push_str(&format!("PASS  {:<12} {}\n", r.name, r.detail))
            }
            crate::verify::CheckStatus::Fail => {
                out.push_str(&format!("FAIL  {:<12} {}\n", r.name, r.detail))
            }
            crate::verify::CheckStatus::Skipped(reason) => {
                out.push_str(&format!("SKIP  {:<12} {}\n", r.name, reason))
            }
        }
    }
    out
}

/// Report for the minimal-eigenvalue scan; exact rationals only.
pub fn conjecture_report(d_range: (u32, u32), n_range: (u32, u32)) -> Result<String> {
    let mut out = String::from("d,n,exact_min,predicted,argmin_sector,equal\n");
    for d in d_range.0..=d_range.1 {
        for n in n_range.0..=n_range.1 {
            let c = transfer::conjecture_check(d, n)?;
            out.push_str(&format!(
                "{d},{n},{},{},{},{}\n",
                format_q(&c.exact_min),
                format_q(&c.predicted),
                c.argmin,
                c.holds
            ));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify;

    #[test]
    fn certificate_text_is_stable_and_versioned() {
        let cert = certify::certify(3, 3, Mode::Exact, false, 128).unwrap();
        let a = certificate_to_text(&cert);
        let b = certificate_to_text(&cert);
        assert_eq!(a, b);
        assert!(a.starts_with("aklt-gap-certificate v1\n"));
        assert!(a.contains("verdict = gapped"));
        assert!(a.contains("threshold = 1/3"));
        assert!(a.contains("[per_edge]"));
        assert!(a.contains("[provenance]"));
    }

    #[test]
    fn table_roundtrip_exact() {
        let rows: Vec<TableRow> = (1..=4u32)
            .flat_map(|d| (1..=3u32).map(move |n| (d, n)))
            .map(|(d, n)| table_row(d, n, Mode::Exact, 128).unwrap())
            .collect();
        let text = write_table(&rows);
        let parsed = parse_table(&text).unwrap();
        assert_eq!(rows, parsed);
        // rationals re-render identically
        for (a, b) in rows.iter().zip(&parsed) {
            assert_eq!(format_q(&a.q_l), format_q(&b.q_l));
        }
    }

    #[test]
    fn table_rejects_malformed() {
        assert!(parse_table("").is_err());
        assert!(parse_table("bad,header\n").is_err());
        let text = format!("{TABLE_HEADER}\n1,2,3\n");
        assert!(parse_table(&text).is_err());
    }

    #[test]
    fn table_row_counts_and_verdicts() {
        let r = table_row(3, 3, Mode::Exact, 128).unwrap();
        assert_eq!(r.verdict, "gapped");
        let r = table_row(3, 2, Mode::Exact, 128).unwrap();
        assert_eq!(r.verdict, "not-certified");
        let r = table_row(3, 1, Mode::Exact, 128).unwrap();
        assert_eq!(r.verdict, "undefined");
        let r = table_row(2, 1, Mode::Exact, 128).unwrap();
        assert_eq!(r.verdict, "n/a");
        let r = table_row(6, 0, Mode::Exact, 128).unwrap();
        assert_eq!(r.verdict, "undefined");
    }

    #[test]
    fn compare_rows_mark_undefined() {
        let defined = compare_row(3, 3, 192).unwrap();
        assert!(defined.contains(",true,"));
        assert!(defined.ends_with("true"));
        let undefined = compare_row(6, 2, 192).unwrap();
        assert!(undefined.contains(",false,"));
    }

    #[test]
    fn conjecture_report_is_exact() {
        let rep = conjecture_report((2, 6), (1, 2)).unwrap();
        assert!(rep.contains("8/9"));
        // no decimal points anywhere: exact rationals only
        for line in rep.lines().skip(1) {
            assert!(!line.contains('.'), "{line}");
        }
    }
}
