//! Floating-point helpers: compensated summation and dense LU.

/// Neumaier-compensated sum.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

pub fn max_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// LU factorization with partial pivoting.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: Vec<Vec<f64>>,
    perm: Vec<usize>,
    sign: f64,
}

impl Lu {
    /// `None` when a pivot is exactly zero or not finite.
    pub fn new(a: &[Vec<f64>]) -> Option<Lu> {
        let n = a.len();
        let mut lu = a.to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for k in 0..n {
            let p = (k..n).max_by(|&i, &j| lu[i][k].abs().total_cmp(&lu[j][k].abs()))?;
            if lu[p][k] == 0.0 || !lu[p][k].is_finite() {
                return None;
            }
            if p != k {
                lu.swap(p, k);
                perm.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                let f = lu[i][k] / lu[k][k];
                lu[i][k] = f;
                for j in k + 1..n {
                    lu[i][j] -= f * lu[k][j];
                }
            }
        }
        Some(Lu { lu, perm, sign })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.lu.len();
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                x[i] -= self.lu[i][j] * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                x[i] -= self.lu[i][j] * x[j];
            }
            x[i] /= self.lu[i][i];
        }
        x
    }

    pub fn det(&self) -> f64 {
        self.sign * (0..self.lu.len()).map(|i| self.lu[i][i]).product::<f64>()
    }

    pub fn inverse(&self) -> Vec<Vec<f64>> {
        let n = self.lu.len();
        let mut inv = vec![vec![0.0; n]; n];
        for c in 0..n {
            let mut e = vec![0.0; n];
            e[c] = 1.0;
            let col = self.solve(&e);
            for r in 0..n {
                inv[r][c] = col[r];
            }
        }
        inv
    }
}

/// Determinant after scaling every row to unit max-norm.
pub fn row_scaled_det(a: &[Vec<f64>]) -> f64 {
    let scaled: Vec<Vec<f64>> = a
        .iter()
        .map(|r| {
            let m = max_norm(r);
            if m > 0.0 {
                r.iter().map(|v| v / m).collect()
            } else {
                r.clone()
            }
        })
        .collect();
    Lu::new(&scaled).map_or(0.0, |lu| lu.det())
}
