use super::GaussInt;

/// Dense row-major matrix over `Z[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<GaussInt>,
}

impl ExactMatrix {
    /// Panics if `data.len() != rows * cols`.
    pub fn new(rows: usize, cols: usize, data: Vec<GaussInt>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length mismatch");
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![GaussInt::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = GaussInt::one();
        }
        m
    }

    /// Builds a matrix from small integer `(re, im)` pairs.
    pub fn from_pairs(rows: usize, cols: usize, pairs: &[(i64, i64)]) -> Self {
        Self::new(
            rows,
            cols,
            pairs.iter().map(|&(a, b)| GaussInt::new(a, b)).collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &GaussInt {
        &self.data[r * self.cols + c]
    }

    pub fn data(&self) -> &[GaussInt] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).clone());
            }
        }
        Self::new(self.cols, self.rows, data)
    }
}

/// Rank over the Gaussian rationals by fraction-free (Bareiss) elimination.
///
/// Every intermediate entry is a minor of the input, so the division by the
/// previous pivot is exact in `Z[i]`. Pivot is the first nonzero entry of the
/// current column at or below the current row.
pub fn rank_exact(m: &ExactMatrix) -> usize {
    // eliminate along the shorter dimension
    let work = if m.rows > m.cols { m.transpose() } else { m.clone() };
    let (rows, cols) = (work.rows, work.cols);
    let mut a: Vec<Vec<GaussInt>> = work.data.chunks(cols.max(1)).map(|r| r.to_vec()).collect();
    if rows == 0 || cols == 0 {
        return 0;
    }
    let mut prev = GaussInt::one();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(p) = (row..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let (top, rest) = a.split_at_mut(row + 1);
        let pivot_row = &top[row];
        let pivot = &pivot_row[col];
        let unit = prev == GaussInt::one();
        for r in rest.iter_mut() {
            let lead = std::mem::take(&mut r[col]);
            for j in col + 1..cols {
                let num = &(pivot * &r[j]) - &(&lead * &pivot_row[j]);
                r[j] = if unit { num } else { num.div_exact(&prev) };
            }
        }
        prev = pivot.clone();
        row += 1;
    }
    row
}
