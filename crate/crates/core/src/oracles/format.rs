//! Sample-set files: a CSV of `x_bits_hex,y` rows plus a JSON sidecar
//! `{n, m, eps_corrupt, adversary_id, seed}`.
//!
//! `x_bits_hex` is the point code in lowercase hex (bit `i` set iff
//! `x_{i+1} = -1`); `y` is `1` or `-1`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{CorruptedSampleSet, LabeledExample};
use crate::cube::full_mask;
use crate::error::{Error, Result};

pub const SAMPLE_CSV_HEADER: &str = "x_bits_hex,y";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleSidecar {
    pub n: usize,
    pub m: usize,
    pub eps_corrupt: f64,
    pub adversary_id: String,
    pub seed: u64,
}

pub fn write_samples_csv(examples: &[LabeledExample]) -> String {
    let mut out = String::with_capacity(examples.len() * 8 + 16);
    out.push_str(SAMPLE_CSV_HEADER);
    out.push('\n');
    for ex in examples {
        writeln!(out, "{:x},{}", ex.x, ex.y).unwrap();
    }
    out
}

pub fn parse_samples_csv(text: &str, n: usize) -> Result<Vec<LabeledExample>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let ln = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || (ln == 1 && line == SAMPLE_CSV_HEADER) {
            continue;
        }
        let (xs, ys) = line
            .split_once(',')
            .ok_or_else(|| Error::parse(ln, "expected `x_bits_hex,y`"))?;
        let x = u64::from_str_radix(xs.trim(), 16).map_err(|e| Error::parse(ln, format!("x_bits_hex: {e}")))?;
        if x & !full_mask(n) != 0 {
            return Err(Error::parse(ln, format!("point {xs} has bits beyond n = {n}")));
        }
        let y = match ys.trim() {
            "1" | "+1" => 1,
            "-1" => -1,
            other => return Err(Error::parse(ln, format!("y: `{other}` is not ±1"))),
        };
        out.push(LabeledExample { x, y });
    }
    Ok(out)
}

pub fn sidecar_for(set: &CorruptedSampleSet) -> SampleSidecar {
    SampleSidecar {
        n: set.n(),
        m: set.len(),
        eps_corrupt: set.eps_corrupt(),
        adversary_id: set.adversary_id().to_string(),
        seed: set.seed(),
    }
}

pub fn write_sidecar(set: &CorruptedSampleSet) -> String {
    serde_json::to_string_pretty(&sidecar_for(set)).expect("sidecar serializes")
}

/// Reads a sample set back from its CSV and sidecar texts.
pub fn read_sample_set(csv: &str, sidecar: &str) -> Result<CorruptedSampleSet> {
    let meta: SampleSidecar = serde_json::from_str(sidecar).map_err(|e| Error::parse(e.line(), e.to_string()))?;
    let examples = parse_samples_csv(csv, meta.n)?;
    if examples.len() != meta.m {
        return Err(Error::Shape(format!(
            "sidecar declares m = {}, CSV has {} rows",
            meta.m,
            examples.len()
        )));
    }
    CorruptedSampleSet::from_parts(meta.n, examples, meta.eps_corrupt, meta.adversary_id, meta.seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{draw_examples, nasty_corrupt, Adversary, AdversaryView};
    use crate::seed::rng_from_seed;

    #[test]
    fn round_trip_through_files() {
        let f = crate::cube::TruthTable::majority(5).unwrap();
        let clean = draw_examples(&f, 300, &mut rng_from_seed(1));
        let view = AdversaryView {
            target: &f,
            poly: None,
            d: 1,
        };
        let set = nasty_corrupt(&clean, 0.1, &Adversary::UniformReplace, &view, 2).unwrap();
        let back = read_sample_set(&write_samples_csv(set.examples()), &write_sidecar(&set)).unwrap();
        assert_eq!(back.examples(), set.examples());
        assert_eq!(sidecar_for(&back), sidecar_for(&set));
    }

    #[test]
    fn malformed_rows_name_their_line() {
        assert!(matches!(
            parse_samples_csv("x_bits_hex,y\n1f,1\nzz,1\n", 5),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            parse_samples_csv("1f,0\n", 5),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_samples_csv("3f,1\n", 5),
            Err(Error::Parse { line: 1, .. })
        ));
    }
}
