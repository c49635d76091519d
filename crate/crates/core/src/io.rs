//! Coefficient files.
//!
//! ```json
//! {"n": 1, "radius": 2, "entries": [[0, 2.5066282746, 0.0], [1, 0.5, -0.5]]}
//! ```
//!
//! Each entry is `[k_1, …, k_n, re, im]`. Omitted indices are zero and
//! repeating an index is an error.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Number;

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::lattice::Lattice;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoeffFile {
    n: usize,
    radius: usize,
    entries: Vec<Vec<Number>>,
}

pub fn field_from_json(text: &str) -> Result<SpectralField> {
    let file: CoeffFile = serde_json::from_str(text)
        .map_err(|e| Error::Format(format!("malformed coefficient file: {e}")))?;
    let lattice = Lattice::new(file.n, file.radius)?;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); lattice.len()];
    let mut seen = vec![false; lattice.len()];
    for (row, entry) in file.entries.iter().enumerate() {
        if entry.len() != file.n + 2 {
            return Err(Error::Format(format!(
                "entry {row} has {} values, expected {}",
                entry.len(),
                file.n + 2
            )));
        }
        let k = entry[..file.n]
            .iter()
            .map(|x| {
                x.as_i64().ok_or_else(|| {
                    Error::Format(format!("entry {row}: index {x} is not an integer"))
                })
            })
            .collect::<Result<Vec<i64>>>()?;
        let part = |x: &Number| {
            x.as_f64()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::NonFinite(format!("entry {row}: {x}")))
        };
        let value = Complex64::new(part(&entry[file.n])?, part(&entry[file.n + 1])?);
        let pos = lattice.require(&k)?;
        if seen[pos] {
            return Err(Error::DuplicateIndex(k));
        }
        seen[pos] = true;
        coeffs[pos] = value;
    }
    SpectralField::from_coeffs(&lattice, coeffs)
}

/// Serialises the nonzero coefficients in lattice order.
pub fn field_to_json(u: &SpectralField) -> String {
    let lattice = u.lattice();
    let num = |x: f64| Number::from_f64(x).expect("finite coefficient");
    let entries = u
        .iter()
        .filter(|(_, c)| c.re != 0.0 || c.im != 0.0)
        .map(|(k, c)| {
            let mut row: Vec<Number> = k.iter().map(|&i| Number::from(i)).collect();
            row.push(num(c.re));
            row.push(num(c.im));
            row
        })
        .collect();
    let file = CoeffFile {
        n: lattice.dim(),
        radius: lattice.radius(),
        entries,
    };
    serde_json::to_string(&file).expect("serialisable")
}

pub fn parse_coeff_file(path: impl AsRef<Path>) -> Result<SpectralField> {
    let path = path.as_ref();
    let text =
        fs::read_to_string(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    field_from_json(&text)
}

pub fn write_coeff_file(path: impl AsRef<Path>, u: &SpectralField) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, field_to_json(u) + "\n")
        .map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{gen_distribution, DistributionKind};
    use proptest::prelude::*;

    #[test]
    fn constant_field_from_file() {
        let u =
            field_from_json(r#"{"n": 1, "radius": 2, "entries": [[0, 2.5066282746, 0]]}"#).unwrap();
        let e = SpectralField::constant(u.lattice());
        assert_eq!(u.lattice().radius(), 2);
        assert!((u.coeff(&[0]) - e.coeff(&[0])).norm() < 1e-10);
        assert_eq!(u.coeff(&[1]), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn duplicate_index_is_named() {
        let err =
            field_from_json(r#"{"n": 2, "radius": 1, "entries": [[1, 0, 1, 0], [1, 0, 2, 0]]}"#)
                .unwrap_err();
        assert_eq!(err, Error::DuplicateIndex(vec![1, 0]));
        assert!(err.to_string().contains("[1, 0]"));
    }

    #[test]
    fn rejects_malformed_inputs() {
        for text in [
            "{not json",
            r#"{"n": 1, "radius": 1, "entries": [[2, 1, 0]]}"#,
            r#"{"n": 1, "radius": 1, "entries": [[0, 1]]}"#,
            r#"{"n": 1, "radius": 1, "entries": [[0.5, 1, 0]]}"#,
            r#"{"n": 0, "radius": 1, "entries": []}"#,
            r#"{"n": 1, "radius": 1, "entries": [[0, 1e999, 0]]}"#,
            r#"{"n": 1, "radius": 1, "entries": [], "extra": 1}"#,
        ] {
            assert!(field_from_json(text).is_err(), "{text}");
        }
    }

    #[test]
    fn file_round_trip() {
        let dir = std::env::temp_dir().join(format!("torus-bessel-io-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("u.json");
        let l = Lattice::new(2, 3).unwrap();
        let u =
            gen_distribution(&l, DistributionKind::PowerDecay { alpha: 1.0 }, 4, false).unwrap();
        write_coeff_file(&path, &u).unwrap();
        assert_eq!(parse_coeff_file(&path).unwrap(), u);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    proptest! {
        #[test]
        fn json_round_trip(
            n in 1usize..3, r in 0usize..4,
            vals in proptest::collection::vec((-1e3f64..1e3, -1e3f64..1e3, any::<bool>()), 49)
        ) {
            let l = Lattice::new(n, r).unwrap();
            let u = SpectralField::from_fn(&l, {
                let mut it = vals.iter().cycle();
                move |_| {
                    let &(a, b, keep) = it.next().unwrap();
                    if keep { Complex64::new(a, b) } else { Complex64::new(0.0, 0.0) }
                }
            }).unwrap();
            prop_assert_eq!(field_from_json(&field_to_json(&u)).unwrap(), u);
        }
    }
}
