//! JSON dump of a fitted projector matrix, so a projector fitted in one CLI
//! invocation can be reapplied bit-for-bit in another.

use std::io::{Read, Write};

use conceptor_embedding::linalg::Matrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProjectorError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("invalid projector JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("projector matrix is {got} rows, header says dim {dim}")]
    RowCount { dim: usize, got: usize },
    #[error("projector row {row} has {got} entries, expected {dim}")]
    RowWidth { dim: usize, row: usize, got: usize },
    #[error(transparent)]
    Core(#[from] conceptor_embedding::Error),
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ProjectorDump {
    pub dim: usize,
    pub aperture_inv_sq: f64,
    /// Row-major matrix rows.
    pub matrix: Vec<Vec<f64>>,
}

impl ProjectorDump {
    pub fn from_matrix(matrix: &Matrix, aperture_inv_sq: f64) -> Self {
        let dim = matrix.rows();
        let rows = (0..dim)
            .map(|i| (0..matrix.cols()).map(|j| matrix.get(i, j)).collect())
            .collect();
        Self {
            dim,
            aperture_inv_sq,
            matrix: rows,
        }
    }

    pub fn into_matrix(self) -> Result<Matrix, ProjectorError> {
        if self.matrix.len() != self.dim {
            return Err(ProjectorError::RowCount {
                dim: self.dim,
                got: self.matrix.len(),
            });
        }
        let mut data = Vec::with_capacity(self.dim * self.dim);
        for (row, entries) in self.matrix.iter().enumerate() {
            if entries.len() != self.dim {
                return Err(ProjectorError::RowWidth {
                    dim: self.dim,
                    row,
                    got: entries.len(),
                });
            }
            data.extend_from_slice(entries);
        }
        Ok(Matrix::from_vec(self.dim, self.dim, data)?)
    }
}

pub fn write_projector<W: Write>(
    mut writer: W,
    matrix: &Matrix,
    aperture_inv_sq: f64,
) -> Result<(), ProjectorError> {
    let dump = ProjectorDump::from_matrix(matrix, aperture_inv_sq);
    serde_json::to_writer_pretty(&mut writer, &dump)?;
    writer.write_all(b"\n")?;
    Ok(())
}

pub fn read_projector<R: Read>(reader: R) -> Result<ProjectorDump, ProjectorError> {
    Ok(serde_json::from_reader(reader)?)
}
