//! A trained model and its plain-text file format.

use std::fs;
use std::path::Path;

use ndarray::{Array1, Array2, ArrayView2};

use crate::bench::MinMaxScaler;
use crate::error::{Error, Result};
use crate::fuzzy::{hidden_matrix, Antecedent, ConsequentWeights};
use crate::scalar::Real;

const MAGIC: &str = "tsfuzzy-model";
const VERSION: u32 = 1;

/// Antecedent, consequent weights and the input scaler they were trained
/// behind. `predict` takes raw (unscaled) feature rows.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyModel<T> {
    antecedent: Antecedent<T>,
    weights: ConsequentWeights<T>,
    scaler: Option<MinMaxScaler<T>>,
}

impl<T: Real> FuzzyModel<T> {
    pub fn new(antecedent: Antecedent<T>, weights: ConsequentWeights<T>, scaler: Option<MinMaxScaler<T>>) -> Result<Self> {
        if weights.rule_count() != antecedent.rule_count() || weights.dim() != antecedent.dim() {
            return Err(Error::DimensionMismatch("weights do not match the antecedent".into()));
        }
        if let Some(s) = &scaler {
            if s.dim() != antecedent.dim() {
                return Err(Error::DimensionMismatch("scaler does not match the antecedent".into()));
            }
        }
        Ok(Self {
            antecedent,
            weights,
            scaler,
        })
    }

    pub fn antecedent(&self) -> &Antecedent<T> {
        &self.antecedent
    }

    pub fn weights(&self) -> &ConsequentWeights<T> {
        &self.weights
    }

    pub fn scaler(&self) -> Option<&MinMaxScaler<T>> {
        self.scaler.as_ref()
    }

    pub fn predict(&self, x: ArrayView2<'_, T>) -> Result<Array1<T>> {
        let h = match &self.scaler {
            Some(s) => hidden_matrix(s.transform(x)?.view(), &self.antecedent)?,
            None => hidden_matrix(x, &self.antecedent)?,
        };
        Ok(h.dot(self.weights.as_array()))
    }

    /// Serializes to line-oriented text. Every number is written in its
    /// shortest round-trip form, so `from_text(to_text())` is exact.
    pub fn to_text(&self, comments: &[String]) -> String {
        let mut out = String::new();
        for c in comments {
            out.push_str(&format!("# {c}\n"));
        }
        let (k, d) = (self.antecedent.rule_count(), self.antecedent.dim());
        out.push_str(&format!("{MAGIC} {VERSION}\n"));
        out.push_str(&format!("scalar {}\n", std::any::type_name::<T>()));
        out.push_str(&format!("rules {k}\ndim {d}\n"));
        let row = |name: &str, values: &mut dyn Iterator<Item = &T>| {
            let cells: Vec<String> = values.map(|v| v.to_string()).collect();
            format!("{name} {}\n", cells.join(" "))
        };
        for r in self.antecedent.centers().outer_iter() {
            out.push_str(&row("center", &mut r.iter()));
        }
        for r in self.antecedent.sigmas().outer_iter() {
            out.push_str(&row("sigma", &mut r.iter()));
        }
        for r in 0..k {
            out.push_str(&row("weight", &mut self.weights.rule(r).iter()));
        }
        if let Some(s) = &self.scaler {
            out.push_str(&row("scale_min", &mut s.min().iter()));
            out.push_str(&row("scale_max", &mut s.max().iter()));
        }
        out.push_str("end\n");
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let bad = |m: String| Error::ModelFormat(m);
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let mut next = |what: &str| lines.next().ok_or_else(|| bad(format!("missing {what}")));

        let header = next("header")?;
        if header != format!("{MAGIC} {VERSION}") {
            return Err(bad(format!("unsupported header {header:?}")));
        }
        let scalar = keyed(next("scalar")?, "scalar")?;
        if scalar.len() != 1 || scalar[0] != std::any::type_name::<T>() {
            return Err(bad(format!("model stores {scalar:?}, expected {}", std::any::type_name::<T>())));
        }
        let k = count(next("rules")?, "rules")?;
        let d = count(next("dim")?, "dim")?;

        let mut block = |name: &str, rows: usize, width: usize| -> Result<Array2<T>> {
            let mut m = Array2::zeros((rows, width));
            for r in 0..rows {
                let cells = keyed(next(name)?, name)?;
                if cells.len() != width {
                    return Err(bad(format!("{name} row {r} has {} values, expected {width}", cells.len())));
                }
                for (j, c) in cells.iter().enumerate() {
                    m[[r, j]] = c.parse().map_err(|_| bad(format!("{name} row {r}: bad number {c:?}")))?;
                }
            }
            Ok(m)
        };
        let centers = block("center", k, d)?;
        let sigmas = block("sigma", k, d)?;
        let weights = block("weight", k, d + 1)?;
        let antecedent = Antecedent::new(centers, sigmas)?;
        let weights = ConsequentWeights::new(Array1::from_iter(weights), k, d)?;

        let tail = next("end")?;
        let scaler = if tail == "end" {
            None
        } else {
            let parse_row = |line: &str, name: &str| -> Result<Array1<T>> {
                let cells = keyed(line, name)?;
                if cells.len() != d {
                    return Err(bad(format!("{name} has {} values, expected {d}", cells.len())));
                }
                cells
                    .iter()
                    .map(|c| c.parse().map_err(|_| bad(format!("{name}: bad number {c:?}"))))
                    .collect()
            };
            let min = parse_row(tail, "scale_min")?;
            let max = parse_row(next("scale_max")?, "scale_max")?;
            if next("end")? != "end" {
                return Err(bad("expected end".into()));
            }
            Some(MinMaxScaler::from_bounds(min, max)?)
        };
        Self::new(antecedent, weights, scaler)
    }

    pub fn save(&self, path: &Path, comments: &[String]) -> Result<()> {
        fs::write(path, self.to_text(comments)).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_text(&text)
    }
}

fn keyed<'a>(line: &'a str, key: &str) -> Result<Vec<&'a str>> {
    let mut parts = line.split_whitespace();
    match parts.next() {
        Some(k) if k == key => Ok(parts.collect()),
        _ => Err(Error::ModelFormat(format!("expected `{key}` line, got {line:?}"))),
    }
}

fn count(line: &str, key: &str) -> Result<usize> {
    match keyed(line, key)?.as_slice() {
        [v] => v
            .parse()
            .map_err(|_| Error::ModelFormat(format!("{key}: bad count {v:?}"))),
        _ => Err(Error::ModelFormat(format!("{key}: expected one value"))),
    }
}
