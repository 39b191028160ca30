use super::Matrix;

/// Kahan-compensated accumulator for real sums in a fixed order.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Entrywise Kahan accumulator for matrix sums.
#[derive(Debug, Clone)]
pub struct CompensatedMatrixSum {
    rows: usize,
    cols: usize,
    re: Vec<CompensatedSum>,
    im: Vec<CompensatedSum>,
}

impl CompensatedMatrixSum {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            re: vec![CompensatedSum::new(); rows * cols],
            im: vec![CompensatedSum::new(); rows * cols],
        }
    }

    pub fn add_scaled(&mut self, m: &Matrix, weight: f64) {
        debug_assert_eq!((m.rows(), m.cols()), (self.rows, self.cols));
        for i in 0..self.rows {
            for j in 0..self.cols {
                let z = m.get(i, j);
                self.re[i * self.cols + j].add(z.re * weight);
                self.im[i * self.cols + j].add(z.im * weight);
            }
        }
    }

    pub fn value(&self) -> Matrix {
        Matrix::from_raw(nalgebra::DMatrix::from_fn(self.rows, self.cols, |i, j| {
            num_complex::Complex64::new(self.re[i * self.cols + j].value(), self.im[i * self.cols + j].value())
        }))
    }
}
