//! JSON schemas for matrices, bimatrices and system files, and CSV output
//! of simulation traces.
//!
//! A complex matrix is `{"rows": r, "cols": c, "data": [[re, im], ...]}` in
//! row-major order; a bimatrix is `{"first": …, "second": …}`. A system
//! file carries `"domain"`, the dimensions `"n"`, `"m"`, `"p"` and any of the
//! blocks `"A1"` … `"D2"`; omitted blocks are zero. A file may instead hold
//! a real system under `"real_system"` together with `"convert": true`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analysis::SimTrace;
use crate::bimatrix::Bimatrix;
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector, RMatrix};
use crate::spectrum::SpectrumSet;
use crate::system::{from_real_system, CxSystem, RealSystem, TimeDomain};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let data = (0..m.nrows())
            .flat_map(|i| (0..m.ncols()).map(move |j| (i, j)))
            .map(|(i, j)| [m[(i, j)].re, m[(i, j)].im])
            .collect();
        MatrixJson { rows: m.nrows(), cols: m.ncols(), data }
    }

    pub fn to_matrix(&self, context: &'static str) -> Result<CMatrix> {
        if self.data.len() != self.rows * self.cols {
            return Err(Error::dims(context, self.rows * self.cols, format!("{} entries", self.data.len())));
        }
        if self.data.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite(context));
        }
        Ok(CMatrix::from_row_iterator(self.rows, self.cols, self.data.iter().map(|[re, im]| Complex64::new(*re, *im))))
    }
}

/// Real matrix: `{"rows": r, "cols": c, "data": [x, ...]}`, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealMatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl RealMatrixJson {
    pub fn from_matrix(m: &RMatrix) -> Self {
        let data = (0..m.nrows()).flat_map(|i| (0..m.ncols()).map(move |j| m[(i, j)])).collect();
        RealMatrixJson { rows: m.nrows(), cols: m.ncols(), data }
    }

    pub fn to_matrix(&self, context: &'static str) -> Result<RMatrix> {
        if self.data.len() != self.rows * self.cols {
            return Err(Error::dims(context, self.rows * self.cols, format!("{} entries", self.data.len())));
        }
        if self.data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite(context));
        }
        Ok(RMatrix::from_row_slice(self.rows, self.cols, &self.data))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BimatrixJson {
    pub first: MatrixJson,
    pub second: MatrixJson,
}

impl BimatrixJson {
    pub fn from_bimatrix(b: &Bimatrix) -> Self {
        BimatrixJson { first: MatrixJson::from_matrix(b.first()), second: MatrixJson::from_matrix(b.second()) }
    }

    pub fn to_bimatrix(&self) -> Result<Bimatrix> {
        Bimatrix::new(self.first.to_matrix("bimatrix first")?, self.second.to_matrix("bimatrix second")?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealSystemJson {
    #[serde(rename = "A")]
    pub a: RealMatrixJson,
    #[serde(rename = "B")]
    pub b: RealMatrixJson,
    #[serde(rename = "C")]
    pub c: RealMatrixJson,
    #[serde(rename = "D", default, skip_serializing_if = "Option::is_none")]
    pub d: Option<RealMatrixJson>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SystemFile {
    pub domain: Option<TimeDomain>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    #[serde(rename = "A1", default, skip_serializing_if = "Option::is_none")]
    pub a1: Option<MatrixJson>,
    #[serde(rename = "A2", default, skip_serializing_if = "Option::is_none")]
    pub a2: Option<MatrixJson>,
    #[serde(rename = "B1", default, skip_serializing_if = "Option::is_none")]
    pub b1: Option<MatrixJson>,
    #[serde(rename = "B2", default, skip_serializing_if = "Option::is_none")]
    pub b2: Option<MatrixJson>,
    #[serde(rename = "C1", default, skip_serializing_if = "Option::is_none")]
    pub c1: Option<MatrixJson>,
    #[serde(rename = "C2", default, skip_serializing_if = "Option::is_none")]
    pub c2: Option<MatrixJson>,
    #[serde(rename = "D1", default, skip_serializing_if = "Option::is_none")]
    pub d1: Option<MatrixJson>,
    #[serde(rename = "D2", default, skip_serializing_if = "Option::is_none")]
    pub d2: Option<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub real_system: Option<RealSystemJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convert: Option<bool>,
}

fn block(
    json: &Option<MatrixJson>,
    name: &'static str,
    rows: Option<usize>,
    cols: Option<usize>,
) -> Result<Option<CMatrix>> {
    let Some(j) = json else { return Ok(None) };
    let m = j.to_matrix(name)?;
    if rows.is_some_and(|r| r != m.nrows()) || cols.is_some_and(|c| c != m.ncols()) {
        let show = |d: Option<usize>| d.map_or("?".to_string(), |v| v.to_string());
        return Err(Error::dims(name, format!("{}x{}", show(rows), show(cols)), format!("{}x{}", m.nrows(), m.ncols())));
    }
    Ok(Some(m))
}

fn first_some<const N: usize>(dims: [Option<usize>; N]) -> Option<usize> {
    dims.into_iter().flatten().next()
}

impl SystemFile {
    pub fn from_system(sys: &CxSystem) -> Self {
        let nz = |m: &CMatrix| (!m.iter().all(|z| z.re == 0.0 && z.im == 0.0)).then(|| MatrixJson::from_matrix(m));
        SystemFile {
            domain: Some(sys.domain()),
            n: Some(sys.n()),
            m: Some(sys.m()),
            p: Some(sys.p()),
            a1: nz(sys.a().first()),
            a2: nz(sys.a().second()),
            b1: nz(sys.b().first()),
            b2: nz(sys.b().second()),
            c1: nz(sys.c().first()),
            c2: nz(sys.c().second()),
            d1: nz(sys.d().first()),
            d2: nz(sys.d().second()),
            real_system: None,
            convert: None,
        }
    }

    pub fn from_real(real: &RealSystem) -> Self {
        SystemFile {
            domain: Some(real.domain),
            real_system: Some(RealSystemJson {
                a: RealMatrixJson::from_matrix(&real.a),
                b: RealMatrixJson::from_matrix(&real.b),
                c: RealMatrixJson::from_matrix(&real.c),
                d: Some(RealMatrixJson::from_matrix(&real.d)),
            }),
            convert: Some(true),
            ..SystemFile::default()
        }
    }

    fn domain(&self) -> Result<TimeDomain> {
        self.domain.ok_or_else(|| Error::InvalidInput("system file lacks \"domain\"".into()))
    }

    /// The real system stored under `"real_system"`, if any.
    pub fn real_system(&self) -> Result<Option<RealSystem>> {
        let Some(rs) = &self.real_system else { return Ok(None) };
        let a = rs.a.to_matrix("real_system.A")?;
        let b = rs.b.to_matrix("real_system.B")?;
        let c = rs.c.to_matrix("real_system.C")?;
        let d = match &rs.d {
            Some(d) => d.to_matrix("real_system.D")?,
            None => RMatrix::zeros(c.nrows(), b.ncols()),
        };
        Ok(Some(RealSystem::new(a, b, c, d, self.domain()?)?))
    }

    pub fn to_system(&self) -> Result<CxSystem> {
        if self.convert == Some(true) {
            let real = self
                .real_system()?
                .ok_or_else(|| Error::InvalidInput("\"convert\" is set but \"real_system\" is missing".into()))?;
            return from_real_system(real.a, real.b, real.c, real.d, real.domain);
        }
        let domain = self.domain()?;
        let dim = |m: &Option<MatrixJson>, rows: bool| m.as_ref().map(|j| if rows { j.rows } else { j.cols });
        let n = self
            .n
            .or(first_some([dim(&self.a1, true), dim(&self.a2, true), dim(&self.b1, true), dim(&self.b2, true)]))
            .or(first_some([dim(&self.c1, false), dim(&self.c2, false)]))
            .ok_or_else(|| Error::InvalidInput("cannot determine state dimension \"n\"".into()))?;
        let m = self
            .m
            .or(first_some([dim(&self.b1, false), dim(&self.b2, false), dim(&self.d1, false), dim(&self.d2, false)]))
            .unwrap_or(0);
        let p = self
            .p
            .or(first_some([dim(&self.c1, true), dim(&self.c2, true), dim(&self.d1, true), dim(&self.d2, true)]))
            .unwrap_or(0);

        let get = |json: &Option<MatrixJson>, name: &'static str, r: usize, c: usize| -> Result<CMatrix> {
            Ok(block(json, name, Some(r), Some(c))?.unwrap_or_else(|| CMatrix::zeros(r, c)))
        };
        CxSystem::new(
            Bimatrix::new(get(&self.a1, "A1", n, n)?, get(&self.a2, "A2", n, n)?)?,
            Bimatrix::new(get(&self.b1, "B1", n, m)?, get(&self.b2, "B2", n, m)?)?,
            Bimatrix::new(get(&self.c1, "C1", p, n)?, get(&self.c2, "C2", p, n)?)?,
            Bimatrix::new(get(&self.d1, "D1", p, m)?, get(&self.d2, "D2", p, m)?)?,
            domain,
        )
    }
}

pub fn system_from_str(text: &str) -> Result<CxSystem> {
    serde_json::from_str::<SystemFile>(text)?.to_system()
}

pub fn system_to_string(sys: &CxSystem) -> Result<String> {
    Ok(serde_json::to_string_pretty(&SystemFile::from_system(sys))?)
}

pub fn read_system(path: impl AsRef<Path>) -> Result<CxSystem> {
    system_from_str(&fs::read_to_string(path)?)
}

pub fn write_system(path: impl AsRef<Path>, sys: &CxSystem) -> Result<()> {
    fs::write(path, system_to_string(sys)? + "\n")?;
    Ok(())
}

pub fn read_bimatrix(path: impl AsRef<Path>) -> Result<Bimatrix> {
    serde_json::from_str::<BimatrixJson>(&fs::read_to_string(path)?)?.to_bimatrix()
}

pub fn write_bimatrix(path: impl AsRef<Path>, b: &Bimatrix) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(&BimatrixJson::from_bimatrix(b))? + "\n")?;
    Ok(())
}

/// Parses a JSON list of `[re, im]` pairs.
pub fn complex_list_from_str(text: &str) -> Result<Vec<Complex64>> {
    let pairs: Vec<[f64; 2]> = serde_json::from_str(text)?;
    if pairs.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("complex list"));
    }
    Ok(pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
}

pub fn complex_list_to_json(values: &[Complex64]) -> Vec<[f64; 2]> {
    values.iter().map(|z| [z.re, z.im]).collect()
}

pub fn vector_from_str(text: &str) -> Result<CVector> {
    Ok(CVector::from_vec(complex_list_from_str(text)?))
}

/// Spectrum list with conjugates completed where only one of a pair is given.
pub fn spectrum_from_str(text: &str) -> Result<SpectrumSet> {
    SpectrumSet::completing_conjugates(complex_list_from_str(text)?)
}

/// CSV with header `t,x1_re,x1_im,…,u1_re,u1_im,…,y1_re,y1_im,…`.
pub fn trace_to_csv(trace: &SimTrace) -> String {
    let n = trace.states.first().map_or(0, |v| v.len());
    let m = trace.inputs.first().map_or(0, |v| v.len());
    let p = trace.outputs.first().map_or(0, |v| v.len());
    let mut out = String::from("t");
    for (name, count) in [("x", n), ("u", m), ("y", p)] {
        for i in 1..=count {
            write!(out, ",{name}{i}_re,{name}{i}_im").expect("writing to a String");
        }
    }
    out.push('\n');
    for k in 0..trace.times.len() {
        write!(out, "{}", trace.times[k]).expect("writing to a String");
        for v in [&trace.states[k], &trace.inputs[k], &trace.outputs[k]] {
            for z in v.iter() {
                write!(out, ",{},{}", z.re, z.im).expect("writing to a String");
            }
        }
        out.push('\n');
    }
    out
}

pub fn write_csv(path: impl AsRef<Path>, trace: &SimTrace) -> Result<()> {
    fs::write(path, trace_to_csv(trace))?;
    Ok(())
}
