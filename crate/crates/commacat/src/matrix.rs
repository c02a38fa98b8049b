//! Matrices as arrays of rows of residues.

use commacat_core::FpMatrix;

pub type Rows = Vec<Vec<u32>>;

pub fn to_rows(m: &FpMatrix) -> Rows {
    m.to_rows()
}

/// Reads a matrix whose shape is known from context. A matrix with no rows
/// is written `[]` whatever its column count, so an empty array is accepted
/// for any `0 × n` shape.
pub fn from_rows(p: u32, rows: &[Vec<u32>], expected: (usize, usize)) -> Result<FpMatrix, String> {
    let (r, c) = expected;
    if rows.len() != r {
        return Err(format!("expected {r} rows, found {}", rows.len()));
    }
    let mut data = Vec::with_capacity(r * c);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != c {
            return Err(format!("row {i} has {} entries, expected {c}", row.len()));
        }
        for (j, &v) in row.iter().enumerate() {
            if v >= p {
                return Err(format!("entry ({i}, {j}) = {v} is not a residue mod {p}"));
            }
            data.push(v);
        }
    }
    FpMatrix::new(p, r, c, data).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes_are_checked() {
        assert!(from_rows(2, &[vec![1, 0]], (1, 2)).is_ok());
        assert!(from_rows(2, &[], (0, 3)).unwrap().cols() == 3);
        assert!(from_rows(2, &[vec![1]], (1, 2)).unwrap_err().contains("row 0"));
        assert!(from_rows(2, &[vec![2, 0]], (1, 2)).unwrap_err().contains("residue"));
        assert!(from_rows(2, &[vec![0], vec![1]], (1, 1)).unwrap_err().contains("rows"));
    }
}
