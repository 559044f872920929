//! Polynomial JSON: `{"n":int,"d":int,"terms":[{"vars":[1-based, sorted],"coef":float}, ...]}`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::MultilinearPoly;
use crate::cube::Subset;
use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
struct TermJson {
    vars: Vec<usize>,
    coef: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct PolyJson {
    n: usize,
    d: usize,
    terms: Vec<TermJson>,
}

fn json_error(e: serde_json::Error) -> Error {
    Error::parse(e.line(), e.to_string())
}

pub fn parse_poly_json(text: &str) -> Result<MultilinearPoly> {
    let raw: PolyJson = serde_json::from_str(text).map_err(json_error)?;
    let mut p = MultilinearPoly::zero(raw.n, raw.d)?;
    let mut seen = BTreeSet::new();
    for (k, term) in raw.terms.iter().enumerate() {
        let field = |msg: String| Error::Parse {
            line: 0,
            message: format!("terms[{k}]: {msg}"),
        };
        if !term.vars.windows(2).all(|w| w[0] < w[1]) {
            return Err(field(format!("vars {:?} are not strictly increasing", term.vars)));
        }
        if term.coef == 0.0 {
            return Err(field("zero coefficient".into()));
        }
        let s = Subset::from_members(&term.vars).map_err(|e| field(e.to_string()))?;
        if !seen.insert(s) {
            return Err(field(format!("subset {s} appears twice")));
        }
        p.set_term(s, term.coef).map_err(|e| field(e.to_string()))?;
    }
    Ok(p)
}

fn to_json(p: &MultilinearPoly) -> PolyJson {
    PolyJson {
        n: p.n(),
        d: p.d(),
        terms: p
            .terms()
            .map(|(s, c)| TermJson {
                vars: s.members(),
                coef: c,
            })
            .collect(),
    }
}

impl Serialize for MultilinearPoly {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        to_json(self).serialize(serializer)
    }
}

pub fn write_poly_json(p: &MultilinearPoly) -> String {
    serde_json::to_string(&to_json(p)).expect("polynomial JSON serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text =
            r#"{"n":4,"d":2,"terms":[{"vars":[],"coef":0.25},{"vars":[1,3],"coef":-1.5},{"vars":[2],"coef":2}]}"#;
        let p = parse_poly_json(text).unwrap();
        assert_eq!(p.coeff(Subset::from_members(&[1, 3]).unwrap()), -1.5);
        assert_eq!(parse_poly_json(&write_poly_json(&p)).unwrap(), p);
    }

    #[test]
    fn rejects_invalid_terms() {
        let zero = r#"{"n":2,"d":1,"terms":[{"vars":[1],"coef":0}]}"#;
        assert!(parse_poly_json(zero)
            .unwrap_err()
            .to_string()
            .contains("zero coefficient"));
        let dup = r#"{"n":2,"d":1,"terms":[{"vars":[1],"coef":1},{"vars":[1],"coef":2}]}"#;
        assert!(parse_poly_json(dup).unwrap_err().to_string().contains("twice"));
        let unsorted = r#"{"n":3,"d":2,"terms":[{"vars":[2,1],"coef":1}]}"#;
        assert!(parse_poly_json(unsorted).is_err());
        let too_big = r#"{"n":3,"d":1,"terms":[{"vars":[1,2],"coef":1}]}"#;
        assert!(parse_poly_json(too_big).is_err());
        let outside = r#"{"n":3,"d":1,"terms":[{"vars":[4],"coef":1}]}"#;
        assert!(parse_poly_json(outside).is_err());
        assert!(matches!(
            parse_poly_json("{\"n\":3,\n\"d\":}"),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
