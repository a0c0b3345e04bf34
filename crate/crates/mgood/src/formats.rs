//! Text, CSV and b-file renderings of nice-k tables and extension rows.

use std::fmt::Write as _;
use std::io::{self, Write};

use mgood_core::nice::ExtensionRow;
use mgood_core::NiceCertificate;

fn flat(rows: &[(u64, Vec<NiceCertificate>)]) -> impl Iterator<Item = &NiceCertificate> {
    rows.iter().flat_map(|(_, c)| c.iter())
}

/// `n + n' = s` for two-term windows, `n + ... + n' = s` otherwise.
pub fn window_sum(c: &NiceCertificate) -> String {
    if c.n - c.n_prime == 1 {
        format!("{} + {} = {}", c.n, c.n_prime, c.interval_sum)
    } else {
        format!("{} + ... + {} = {}", c.n, c.n_prime, c.interval_sum)
    }
}

/// Columns `k, n, n_prime, sum_decimal, sum_ternary`.
pub fn nice_csv<W: Write>(rows: &[(u64, Vec<NiceCertificate>)], w: W) -> io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["k", "n", "n_prime", "sum_decimal", "sum_ternary"])?;
    for c in flat(rows) {
        out.write_record([
            c.k.to_string(),
            c.n.to_string(),
            c.n_prime.to_string(),
            c.interval_sum.to_string(),
            c.ternary.clone(),
        ])?;
    }
    out.flush()
}

/// Aligned three-column table: `k`, the window sum, its ternary digits.
pub fn nice_text(rows: &[(u64, Vec<NiceCertificate>)]) -> String {
    let sums: Vec<String> = flat(rows).map(window_sum).collect();
    let kw = flat(rows).map(|c| c.k.to_string().len()).max().unwrap_or(1).max(1);
    let sw = sums.iter().map(String::len).max().unwrap_or(0).max(3);
    let tw = flat(rows).map(|c| c.ternary.len()).max().unwrap_or(0).max(6);
    let mut s = String::new();
    let _ = writeln!(s, "{:>kw$}  {:<sw$}  {:>tw$}", "k", "sum", "base 3");
    for (c, sum) in flat(rows).zip(&sums) {
        let _ = writeln!(s, "{:>kw$}  {:<sw$}  {:>tw$}", c.k, sum, c.ternary);
    }
    s
}

/// OEIS b-file: `index value` per line, indices from 1, one line per k.
pub fn nice_bfile(rows: &[(u64, Vec<NiceCertificate>)]) -> String {
    let mut s = String::new();
    for (i, (k, _)) in rows.iter().enumerate() {
        let _ = writeln!(s, "{} {}", i + 1, k);
    }
    s
}

pub fn extension_csv<W: Write>(rows: &[ExtensionRow], w: W) -> io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["a", "b", "k", "n", "n_prime", "window", "sum", "ternary", "min_t"])?;
    for r in rows {
        out.write_record([
            r.a.to_string(),
            r.b.to_string(),
            r.k.to_string(),
            r.n.to_string(),
            r.n_prime.to_string(),
            r.window.to_string(),
            r.sum.to_string(),
            r.ternary.clone(),
            r.min_t.to_string(),
        ])?;
    }
    out.flush()
}

/// One block per `a`, rows `b  k  sum  ternary  t >= min_t`.
pub fn extension_text(rows: &[ExtensionRow]) -> String {
    let mut s = String::new();
    let mut current = None;
    for r in rows {
        if current != Some(r.a) {
            if current.is_some() {
                s.push('\n');
            }
            let _ = writeln!(s, "a = {}, window = {}", r.a, r.window);
            current = Some(r.a);
        }
        let sum = if r.window == 2 {
            format!("{} + {} = {}", r.n, r.n_prime, r.sum)
        } else {
            format!("{} + ... + {} = {}", r.n, r.n_prime, r.sum)
        };
        let _ = writeln!(s, "{:>2}  {:>4}  {:<24}  {:>12}  t >= {}", r.b, r.k, sum, r.ternary, r.min_t);
    }
    s
}
