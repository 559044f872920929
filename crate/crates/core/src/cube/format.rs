//! Text formats for truth tables and Chow vectors.
//!
//! Truth tables: a header line `n=<int>` followed by either `2^n` characters
//! `+`/`-` in point-code order (whitespace ignored) or, for the hex variant, a
//! body starting with `0x`. Chow vectors: a header `<n>,<d>` followed by one
//! `members;coefficient` row per basis subset. Lines starting with `#` are
//! comments in both formats.

use std::fmt::Write as _;

use super::{basis_index, basis_len, ChowVector, Subset, SubsetIndexer, TruthTable};
use crate::error::{Error, Result};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Formats a float with 17 significant digits; negative zero prints as zero.
pub fn fmt_coeff(c: f64) -> String {
    format!("{:.16e}", c + 0.0)
}

/// Number of hex digits in the packed variant: one per four points, at least one.
pub fn hex_digits(n: usize) -> usize {
    ((1usize << n) / 4).max(1)
}

pub fn parse_truth_table(text: &str) -> Result<TruthTable> {
    let mut lines = content_lines(text);
    let (hline, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing `n=<int>` header"))?;
    let n: usize = header
        .strip_prefix("n=")
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| Error::parse(hline, format!("expected `n=<int>`, got `{header}`")))?;
    if n > super::MAX_TABLE_VARS {
        return Err(Error::Capacity(format!(
            "dimension {n} exceeds {}",
            super::MAX_TABLE_VARS
        )));
    }
    let body: Vec<(usize, char)> = lines
        .flat_map(|(ln, l)| l.chars().filter(|c| !c.is_whitespace()).map(move |c| (ln, c)))
        .collect();
    let first_line = body.first().map_or(hline + 1, |(ln, _)| *ln);
    let s: String = body.iter().map(|(_, c)| *c).collect();
    if let Some(hex) = s.strip_prefix("0x") {
        return parse_hex_body(n, hex, first_line);
    }
    let len = 1usize << n;
    if body.len() != len {
        return Err(Error::parse(
            first_line,
            format!("expected {len} `+`/`-` characters, found {}", body.len()),
        ));
    }
    let mut t = TruthTable::constant(n, 1)?;
    for (code, (ln, ch)) in body.into_iter().enumerate() {
        match ch {
            '+' => {}
            '-' => t.set(code, -1),
            other => {
                return Err(Error::parse(ln, format!("unexpected character `{other}`")));
            }
        }
    }
    Ok(t)
}

fn parse_hex_body(n: usize, hex: &str, line: usize) -> Result<TruthTable> {
    let digits = hex_digits(n);
    if hex.len() != digits {
        return Err(Error::parse(
            line,
            format!("expected {digits} hex digits, found {}", hex.len()),
        ));
    }
    let len = 1usize << n;
    let mut words = vec![0u64; len.div_ceil(64)];
    // Most significant digit first; digit k from the right holds points 4k..4k+3.
    for (pos, ch) in hex.chars().rev().enumerate() {
        let v = ch
            .to_digit(16)
            .ok_or_else(|| Error::parse(line, format!("`{ch}` is not a hex digit")))? as u64;
        let base = pos * 4;
        if len < 4 && v >> len != 0 {
            return Err(Error::parse(line, "hex value exceeds 2^n bits"));
        }
        words[base / 64] |= v << (base % 64);
    }
    TruthTable::from_words(n, words)
}

pub fn write_truth_table(t: &TruthTable) -> String {
    let mut out = format!("n={}\n", t.n());
    let chars: Vec<char> = t.values().map(|v| if v > 0 { '+' } else { '-' }).collect();
    for chunk in chars.chunks(64) {
        out.extend(chunk);
        out.push('\n');
    }
    out
}

pub fn write_truth_table_hex(t: &TruthTable) -> String {
    let digits = hex_digits(t.n());
    let mut hex = String::with_capacity(digits);
    for k in (0..digits).rev() {
        let base = 4 * k;
        let nibble = (t.words()[base / 64] >> (base % 64)) & 0xF;
        write!(hex, "{nibble:x}").unwrap();
    }
    format!("n={}\n0x{hex}\n", t.n())
}

fn fmt_members(s: Subset) -> String {
    s.members().iter().map(|m| m.to_string()).collect::<Vec<_>>().join(",")
}

pub fn write_chow_csv(chow: &ChowVector) -> Result<String> {
    let indexer = SubsetIndexer::new(chow.n(), chow.d())?;
    let mut out = format!("{},{}\n", chow.n(), chow.d());
    for (s, c) in indexer.subsets().iter().zip(chow.coeffs()) {
        writeln!(out, "{};{}", fmt_members(*s), fmt_coeff(*c)).unwrap();
    }
    Ok(out)
}

pub fn parse_chow_csv(text: &str) -> Result<ChowVector> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing `n,d` header"))?;
    let (n, d) = header
        .split_once(',')
        .and_then(|(a, b)| Some((a.trim().parse::<usize>().ok()?, b.trim().parse::<usize>().ok()?)))
        .ok_or_else(|| Error::parse(hline, format!("expected `<n>,<d>`, got `{header}`")))?;
    if d > n || n > super::MAX_VARS {
        return Err(Error::parse(hline, format!("invalid shape n = {n}, d = {d}")));
    }
    let total = basis_len(n, d);
    if total > super::MAX_BASIS as u64 {
        return Err(Error::Capacity(format!("basis of {total} subsets")));
    }
    let mut coeffs = vec![f64::NAN; total as usize];
    let mut seen = 0usize;
    for (ln, line) in lines {
        let (members, value) = line
            .split_once(';')
            .ok_or_else(|| Error::parse(ln, "expected `members;coefficient`"))?;
        let members: Vec<usize> = if members.trim().is_empty() {
            Vec::new()
        } else {
            members
                .split(',')
                .map(|m| m.trim().parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::parse(ln, format!("bad subset member: {e}")))?
        };
        let s = Subset::from_members(&members).map_err(|e| Error::parse(ln, e.to_string()))?;
        let idx = basis_index(n, d, s).map_err(|e| Error::parse(ln, e.to_string()))?;
        let c: f64 = value
            .trim()
            .parse()
            .map_err(|e| Error::parse(ln, format!("bad coefficient: {e}")))?;
        if !coeffs[idx].is_nan() {
            return Err(Error::parse(ln, format!("subset {s} listed twice")));
        }
        coeffs[idx] = c;
        seen += 1;
    }
    if seen as u64 != total {
        return Err(Error::parse(
            hline,
            format!("expected {total} coefficient rows, found {seen}"),
        ));
    }
    ChowVector::new(n, d, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::chow_vector;
    use proptest::prelude::*;

    #[test]
    fn parses_plus_minus_with_whitespace() {
        let t = parse_truth_table("n=3\n+--- +-\n-  -\n").unwrap();
        assert_eq!(t.values().collect::<Vec<_>>(), vec![1, -1, -1, -1, 1, -1, -1, -1]);
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(matches!(
            parse_truth_table("n=2\n+++"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_truth_table("m=2\n++++"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(parse_truth_table("n=1\n+x"), Err(Error::Parse { .. })));
        assert!(matches!(parse_truth_table("n=1\n0x4"), Err(Error::Parse { .. })));
    }

    #[test]
    fn hex_variant_matches_text() {
        // Maj3 is -1 on codes 3,5,6,7: bits 0b1110_1000 = 0xe8.
        let maj = parse_truth_table("n=3\n+++-+---\n").unwrap();
        assert_eq!(write_truth_table_hex(&maj), "n=3\n0xe8\n");
        assert_eq!(parse_truth_table("n=3\n0xE8").unwrap(), maj);
    }

    #[test]
    fn chow_csv_layout() {
        let maj = parse_truth_table("n=3\n+++-+---\n").unwrap();
        let csv = write_chow_csv(&chow_vector(&maj, 1).unwrap()).unwrap();
        assert_eq!(
            csv,
            "3,1\n;0.0000000000000000e0\n1;5.0000000000000000e-1\n2;5.0000000000000000e-1\n3;5.0000000000000000e-1\n"
        );
    }

    #[test]
    fn chow_csv_errors_name_the_line() {
        let err = parse_chow_csv("2,1\n;0\n1;0.5\n2;abc\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }));
        let err = parse_chow_csv("2,1\n;0\n1;0.5\n1;0.5\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }));
        assert!(parse_chow_csv("2,1\n;0\n1;0.5\n").is_err());
        assert!(parse_chow_csv("2,1\n;0\n1;0.5\n1,2;0\n").is_err());
    }

    proptest! {
        #[test]
        fn table_formats_round_trip(n in 0usize..9, seed in any::<u64>()) {
            let t = TruthTable::from_minus_fn(n, |c| crate::seed::mix64(seed ^ c) & 1 == 1).unwrap();
            prop_assert_eq!(&parse_truth_table(&write_truth_table(&t)).unwrap(), &t);
            prop_assert_eq!(&parse_truth_table(&write_truth_table_hex(&t)).unwrap(), &t);
        }

        #[test]
        fn chow_csv_round_trips_exactly(n in 1usize..8, seed in any::<u64>()) {
            let t = TruthTable::from_minus_fn(n, |c| crate::seed::mix64(seed ^ c) & 1 == 1).unwrap();
            let chow = chow_vector(&t, n.min(3)).unwrap();
            let back = parse_chow_csv(&write_chow_csv(&chow).unwrap()).unwrap();
            prop_assert_eq!(back, chow);
        }
    }
}
