//! Bundled fixture files. `chowd gen-fixtures --dir crates/cli/fixtures` rewrites them.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};

use chowd::cube::format::{write_chow_csv, write_truth_table, write_truth_table_hex};
use chowd::cube::{chow_vector, TruthTable};
use chowd::lab::ptf_corpus;
use chowd::poly::format::write_poly_json;

pub const CORPUS_N: usize = 10;
pub const CORPUS_D: usize = 2;
pub const CORPUS_SIZE: usize = 50;
pub const CORPUS_SEED: u64 = 2024;
pub const DICTATOR_N: usize = 6;

pub fn corpus_stem(k: usize) -> String {
    format!("corpus/ptf_{k:03}")
}

fn commented(comment: &str, body: String) -> String {
    format!("# {comment}\n{body}")
}

/// Every fixture as `(relative path, contents)`.
pub fn render() -> Result<Vec<(String, String)>> {
    let mut files = Vec::new();
    let maj = TruthTable::majority(3)?;
    files.push((
        "maj3.tt".into(),
        commented("majority of x1, x2, x3", write_truth_table(&maj)),
    ));
    files.push((
        "maj3.hex.tt".into(),
        commented("majority of x1, x2, x3", write_truth_table_hex(&maj)),
    ));
    files.push(("maj3.chow.csv".into(), write_chow_csv(&chow_vector(&maj, 1)?)?));
    for i in 1..=3 {
        let f = TruthTable::dictator(DICTATOR_N, i)?;
        let stem = format!("dictator_n{DICTATOR_N}_x{i}");
        files.push((
            format!("{stem}.tt"),
            commented(&format!("f(x) = x{i}"), write_truth_table(&f)),
        ));
        files.push((format!("{stem}.chow.csv"), write_chow_csv(&chow_vector(&f, 1)?)?));
    }
    let corpus = ptf_corpus(CORPUS_N, CORPUS_D, CORPUS_SIZE, CORPUS_SEED)?;
    for (k, p) in corpus.iter().enumerate() {
        let stem = corpus_stem(k);
        let f = p.materialize_sign()?;
        let note = format!(
            "sign of corpus polynomial {k} (n={CORPUS_N}, d={CORPUS_D}, seed {CORPUS_SEED}, standard normal coefficients)"
        );
        files.push((format!("{stem}.json"), write_poly_json(p) + "\n"));
        files.push((format!("{stem}.tt"), commented(&note, write_truth_table_hex(&f))));
        files.push((format!("{stem}.chow.csv"), write_chow_csv(&chow_vector(&f, CORPUS_D)?)?));
    }
    Ok(files)
}

/// Writes every fixture under `dir`, returning the relative paths.
pub fn write_all(dir: &Path) -> Result<Vec<String>> {
    let files = render()?;
    for (rel, contents) in &files {
        let path = dir.join(rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
        }
        fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(files.into_iter().map(|(rel, _)| rel).collect())
}
