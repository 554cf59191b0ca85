//! Interchange formats: symbol files, matrix exports, singular-value CSV,
//! and verdict reports.
//!
//! All JSON payloads are emitted with serde's shortest round-trip float
//! representation and deterministic field order, so repeated runs produce
//! byte-identical files; structural symbols re-import through their builders
//! to bit-exact coefficients.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hardy::{Exactness, OperatorMatrix};
use crate::symbol::{Descriptor1, Descriptor2, FreqIndex, Symbol1, Symbol2};
use crate::theorem::Verdict;

/// One explicit coefficient. Bitorus terms use `m1`/`m2`; one-variable
/// terms use `m`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<i32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m1: Option<i32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m2: Option<i32>,
    pub re: f64,
    pub im: f64,
}

/// Symbol file payload. `tent` and `arc` describe one-variable structural
/// symbols; when loaded as a bitorus symbol they are read as the first
/// variable tensored with the constant 1.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum SymbolFile {
    Explicit {
        terms: Vec<TermFile>,
    },
    Tent {
        a: f64,
        w: f64,
        #[serde(skip_serializing_if = "Option::is_none")]
        bandwidth: Option<u32>,
    },
    Arc {
        a: f64,
        b: f64,
        #[serde(skip_serializing_if = "Option::is_none")]
        bandwidth: Option<u32>,
    },
    Tensor {
        f1: Box<SymbolFile>,
        f2: Box<SymbolFile>,
    },
}

impl SymbolFile {
    pub fn to_symbol1(&self) -> Result<Symbol1> {
        match self {
            SymbolFile::Explicit { terms } => {
                let mut list = Vec::with_capacity(terms.len());
                for t in terms {
                    let m = t
                        .m
                        .ok_or_else(|| Error::Parse("one-variable term needs field 'm'".into()))?;
                    list.push((m, Complex64::new(t.re, t.im)));
                }
                Ok(Symbol1::trig_poly(&list))
            }
            SymbolFile::Tent { a, w, bandwidth } => {
                Symbol1::tent_with_bandwidth(*a, *w, bandwidth.unwrap_or(crate::DEFAULT_BANDWIDTH))
            }
            SymbolFile::Arc { a, b, bandwidth } => Symbol1::arc_indicator_with_bandwidth(
                *a,
                *b,
                bandwidth.unwrap_or(crate::DEFAULT_BANDWIDTH),
            ),
            SymbolFile::Tensor { .. } => {
                Err(Error::Parse("tensor is not a one-variable symbol".into()))
            }
        }
    }

    pub fn to_symbol2(&self) -> Result<Symbol2> {
        match self {
            SymbolFile::Explicit { terms } => {
                let mut list = Vec::with_capacity(terms.len());
                for t in terms {
                    match (t.m1, t.m2) {
                        (Some(m1), Some(m2)) => list.push(((m1, m2), Complex64::new(t.re, t.im))),
                        _ => {
                            return Err(Error::Parse(
                                "bitorus term needs fields 'm1' and 'm2'".into(),
                            ))
                        }
                    }
                }
                Ok(Symbol2::trig_poly(&list))
            }
            SymbolFile::Tent { .. } | SymbolFile::Arc { .. } => {
                let f1 = self.to_symbol1()?;
                Ok(Symbol2::tensor(
                    &f1,
                    &Symbol1::constant(Complex64::new(1.0, 0.0)),
                ))
            }
            SymbolFile::Tensor { f1, f2 } => {
                Ok(Symbol2::tensor(&f1.to_symbol1()?, &f2.to_symbol1()?))
            }
        }
    }

    /// Structural descriptors are exported structurally (lossless through
    /// the builders); everything else as an explicit list.
    pub fn from_symbol1(s: &Symbol1) -> SymbolFile {
        match s.descriptor() {
            Some(Descriptor1::Tent { a, w }) => SymbolFile::Tent {
                a: *a,
                w: *w,
                bandwidth: Some(s.max_freq().unsigned_abs()),
            },
            Some(Descriptor1::ArcIndicator { a, b }) if !s.is_exact() => SymbolFile::Arc {
                a: *a,
                b: *b,
                bandwidth: Some(s.max_freq().unsigned_abs()),
            },
            _ => SymbolFile::Explicit {
                terms: s
                    .coeffs()
                    .iter()
                    .map(|(&m, c)| TermFile {
                        m: Some(m),
                        m1: None,
                        m2: None,
                        re: c.re,
                        im: c.im,
                    })
                    .collect(),
            },
        }
    }

    pub fn from_symbol2(s: &Symbol2) -> SymbolFile {
        match s.descriptor() {
            Some(Descriptor2::Tensor(f1, f2)) => SymbolFile::Tensor {
                f1: Box::new(Self::from_symbol1(f1)),
                f2: Box::new(Self::from_symbol1(f2)),
            },
            _ => SymbolFile::Explicit {
                terms: s
                    .coeffs()
                    .iter()
                    .map(|(&m, c)| TermFile {
                        m: None,
                        m1: Some(m.m1),
                        m2: Some(m.m2),
                        re: c.re,
                        im: c.im,
                    })
                    .collect(),
            },
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FreqIndexFile {
    pub m1: i32,
    pub m2: i32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExactnessFile {
    Tag(String),
    Bounded { bounded: f64 },
}

/// Dense matrix export: bases, row-major `[re, im]` entries, exactness.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixFile {
    pub rows: Vec<FreqIndexFile>,
    pub cols: Vec<FreqIndexFile>,
    pub entries: Vec<[f64; 2]>,
    pub exactness: ExactnessFile,
}

impl MatrixFile {
    pub fn from_matrix(m: &OperatorMatrix) -> MatrixFile {
        let mut entries = Vec::with_capacity(m.nrows() * m.ncols());
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                let v = m.entries[(r, c)];
                entries.push([v.re, v.im]);
            }
        }
        MatrixFile {
            rows: m
                .row_basis
                .iter()
                .map(|f| FreqIndexFile { m1: f.m1, m2: f.m2 })
                .collect(),
            cols: m
                .col_basis
                .iter()
                .map(|f| FreqIndexFile { m1: f.m1, m2: f.m2 })
                .collect(),
            entries,
            exactness: match m.exactness {
                Exactness::Exact => ExactnessFile::Tag("exact".into()),
                Exactness::Bounded(b) => ExactnessFile::Bounded { bounded: b },
            },
        }
    }

    pub fn to_matrix(&self) -> Result<OperatorMatrix> {
        let nrows = self.rows.len();
        let ncols = self.cols.len();
        if self.entries.len() != nrows * ncols {
            return Err(Error::Parse(format!(
                "matrix entries length {} does not match {} x {}",
                self.entries.len(),
                nrows,
                ncols
            )));
        }
        let entries = nalgebra::DMatrix::from_fn(nrows, ncols, |r, c| {
            let v = self.entries[r * ncols + c];
            Complex64::new(v[0], v[1])
        });
        let exactness = match &self.exactness {
            ExactnessFile::Tag(t) if t == "exact" => Exactness::Exact,
            ExactnessFile::Tag(t) => return Err(Error::Parse(format!("unknown exactness '{t}'"))),
            ExactnessFile::Bounded { bounded } => Exactness::Bounded(*bounded),
        };
        Ok(OperatorMatrix {
            entries,
            row_basis: self
                .rows
                .iter()
                .map(|f| FreqIndex::new(f.m1, f.m2))
                .collect(),
            col_basis: self
                .cols
                .iter()
                .map(|f| FreqIndex::new(f.m1, f.m2))
                .collect(),
            exactness,
        })
    }
}

/// Singular values as `index,sigma` CSV.
pub fn singular_values_to_csv(sigma: &[f64]) -> String {
    let mut s = String::from("index,sigma\n");
    for (i, v) in sigma.iter().enumerate() {
        s.push_str(&format!("{i},{v}\n"));
    }
    s
}

pub fn singular_values_from_csv(s: &str) -> Result<Vec<f64>> {
    let mut lines = s.lines();
    match lines.next() {
        Some("index,sigma") => {}
        other => return Err(Error::Parse(format!("unexpected CSV header: {other:?}"))),
    }
    let mut out = Vec::new();
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let (_, v) = line
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("bad row: {line}")))?;
        out.push(
            v.parse::<f64>()
                .map_err(|e| Error::Parse(format!("bad sigma: {e}")))?,
        );
    }
    Ok(out)
}

/// Verdict export with an optional metadata block (seed, configuration
/// echo). Matches the documented schema
/// `{"conclusion":…, "certified":…, "evidence":[{"name","value","err","op"}]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerdictFile {
    pub conclusion: String,
    pub certified: bool,
    pub evidence: Vec<EvidenceFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub meta: Option<serde_json::Value>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvidenceFile {
    pub name: String,
    pub value: f64,
    pub err: f64,
    pub op: String,
}

impl VerdictFile {
    pub fn from_verdict(v: &Verdict, meta: Option<serde_json::Value>) -> VerdictFile {
        VerdictFile {
            conclusion: format!("{:?}", v.conclusion),
            certified: v.certified,
            evidence: v
                .evidence
                .iter()
                .map(|e| EvidenceFile {
                    name: e.name.clone(),
                    value: e.value,
                    err: e.err,
                    op: e.op.clone(),
                })
                .collect(),
            meta,
        }
    }
}

/// Serializes to pretty JSON with a trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Writes atomically: a temporary file in the same directory, then rename.
pub fn write_atomic(path: &Path, payload: &str) -> Result<()> {
    let tmp = path.with_extension(format!(
        "{}.tmp",
        path.extension().and_then(|e| e.to_str()).unwrap_or("out")
    ));
    std::fs::write(&tmp, payload)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

pub fn load_symbol_file(path: &Path) -> Result<SymbolFile> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardy::{toeplitz_matrix, TruncationBox};

    #[test]
    fn symbol2_json_round_trip_is_bit_exact() {
        let f = Symbol2::trig_poly(&[
            ((1, -2), Complex64::new(0.1 + 0.2, 1.7e-13)),
            ((-3, 0), Complex64::new(-2.5, 0.125)),
        ]);
        let file = SymbolFile::from_symbol2(&f);
        let json = to_json_string(&file).unwrap();
        let parsed: SymbolFile = serde_json::from_str(&json).unwrap();
        let g = parsed.to_symbol2().unwrap();
        assert_eq!(f.coeffs(), g.coeffs());
        // Serialization is deterministic.
        assert_eq!(json, to_json_string(&SymbolFile::from_symbol2(&g)).unwrap());
    }

    #[test]
    fn structural_symbols_round_trip_through_builders() {
        let tent = Symbol1::tent_with_bandwidth(0.3, 0.9, 64).unwrap();
        let file = SymbolFile::from_symbol1(&tent);
        let json = to_json_string(&file).unwrap();
        let parsed: SymbolFile = serde_json::from_str(&json).unwrap();
        let back = parsed.to_symbol1().unwrap();
        assert_eq!(tent.coeffs(), back.coeffs());
        assert_eq!(tent.l2_tail(), back.l2_tail());

        let arc = Symbol1::arc_indicator_with_bandwidth(1.0, 2.0, 32).unwrap();
        let back2 = serde_json::from_str::<SymbolFile>(
            &to_json_string(&SymbolFile::from_symbol1(&arc)).unwrap(),
        )
        .unwrap()
        .to_symbol1()
        .unwrap();
        assert_eq!(arc.coeffs(), back2.coeffs());
    }

    #[test]
    fn tensor_file_round_trip() {
        let t1 = Symbol1::tent_with_bandwidth(0.0, 0.7, 16).unwrap();
        let t2 = Symbol1::tent_with_bandwidth(3.0, 0.5, 16).unwrap();
        let s = Symbol2::tensor(&t1, &t2);
        let file = SymbolFile::from_symbol2(&s);
        let back = serde_json::from_str::<SymbolFile>(&to_json_string(&file).unwrap())
            .unwrap()
            .to_symbol2()
            .unwrap();
        assert_eq!(s.coeffs(), back.coeffs());
    }

    #[test]
    fn matrix_json_round_trip() {
        let f = Symbol2::trig_poly(&[
            ((1, 0), Complex64::new(1.0 / 3.0, 0.0)),
            ((0, -1), Complex64::new(0.0, -0.7)),
        ]);
        let m = toeplitz_matrix(&f, TruncationBox::new(2, 3));
        let file = MatrixFile::from_matrix(&m);
        let json = to_json_string(&file).unwrap();
        let back = serde_json::from_str::<MatrixFile>(&json)
            .unwrap()
            .to_matrix()
            .unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn sigma_csv_round_trip() {
        let sig = vec![2.0, 1.0 / 3.0, 1e-17, 0.0];
        let csv = singular_values_to_csv(&sig);
        assert!(csv.starts_with("index,sigma\n"));
        assert_eq!(singular_values_from_csv(&csv).unwrap(), sig);
    }

    #[test]
    fn one_variable_symbol_uses_m_field() {
        let json = r#"{"type":"explicit","terms":[{"m":-2,"re":1.0,"im":0.5}]}"#;
        let parsed: SymbolFile = serde_json::from_str(json).unwrap();
        let s = parsed.to_symbol1().unwrap();
        assert_eq!(s.coeff(-2), Complex64::new(1.0, 0.5));
        // The same payload is not a valid bitorus explicit symbol.
        assert!(parsed.to_symbol2().is_err());
    }
}
