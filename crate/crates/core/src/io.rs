//! JSON file formats shared by the library and the command line.
//!
//! A matrix is `{"rows": n, "cols": n, "data": [[re, im], ...]}` in row-major
//! order. States add `"dims": [dA, dB]`; channels add `"d_in"`, `"d_out"` and
//! `"normalization": "trace-one"`.

use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::operator::{CMatrix, HermitianOperator, C64};
use crate::quantum::{BipartiteState, ChannelRep, Normalization};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl MatrixFile {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let mut data = Vec::with_capacity(m.len());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let z = m[(i, j)];
                data.push([z.re, z.im]);
            }
        }
        Self {
            rows: m.nrows(),
            cols: m.ncols(),
            data,
        }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        if self.data.len() != self.rows * self.cols {
            return Err(Error::Format(format!(
                "matrix declares {}x{} but carries {} entries",
                self.rows,
                self.cols,
                self.data.len()
            )));
        }
        Ok(CMatrix::from_fn(self.rows, self.cols, |i, j| {
            let [re, im] = self.data[i * self.cols + j];
            C64::new(re, im)
        }))
    }
}

impl Serialize for HermitianOperator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixFile::from_matrix(self.matrix()).serialize(s)
    }
}

impl<'de> Deserialize<'de> for HermitianOperator {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let file = MatrixFile::deserialize(d)?;
        let m = file.to_matrix().map_err(serde::de::Error::custom)?;
        HermitianOperator::new(m).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StateFile {
    #[serde(flatten)]
    pub matrix: MatrixFile,
    pub dims: [usize; 2],
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChannelFile {
    #[serde(flatten)]
    pub matrix: MatrixFile,
    pub d_in: usize,
    pub d_out: usize,
    pub normalization: Normalization,
}

impl StateFile {
    pub fn from_state(state: &BipartiteState) -> Self {
        Self {
            matrix: MatrixFile::from_matrix(state.operator().matrix()),
            dims: [state.dims().0, state.dims().1],
        }
    }

    pub fn into_state(self) -> Result<BipartiteState> {
        let op = HermitianOperator::new(self.matrix.to_matrix()?)?;
        BipartiteState::new(op, (self.dims[0], self.dims[1]))
    }
}

impl ChannelFile {
    pub fn from_channel(ch: &ChannelRep) -> Self {
        Self {
            matrix: MatrixFile::from_matrix(ch.choi().matrix()),
            d_in: ch.d_in(),
            d_out: ch.d_out(),
            normalization: Normalization::TraceOne,
        }
    }

    pub fn into_channel(self) -> Result<ChannelRep> {
        let op = HermitianOperator::new(self.matrix.to_matrix()?)?;
        ChannelRep::from_choi(op, self.d_in, self.d_out)
    }
}

/// Parses JSON text, reporting the line and column of syntax errors.
pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| {
        Error::Format(format!("line {} column {}: {e}", e.line(), e.column()))
    })
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Format(format!("cannot read {}: {e}", path.display())))
}

pub fn read_state(path: &Path) -> Result<BipartiteState> {
    parse_json::<StateFile>(&read(path)?)?.into_state()
}

pub fn read_channel(path: &Path) -> Result<ChannelRep> {
    parse_json::<ChannelFile>(&read(path)?)?.into_channel()
}

pub fn read_matrix(path: &Path) -> Result<HermitianOperator> {
    let file: MatrixFile = parse_json(&read(path)?)?;
    HermitianOperator::new(file.to_matrix()?)
}

pub fn state_to_json(state: &BipartiteState) -> String {
    serde_json::to_string_pretty(&StateFile::from_state(state)).expect("state serializes")
}

pub fn channel_to_json(ch: &ChannelRep) -> String {
    serde_json::to_string_pretty(&ChannelFile::from_channel(ch)).expect("channel serializes")
}
