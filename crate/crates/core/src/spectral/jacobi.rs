//! Cyclic Jacobi eigensolver for small dense symmetric matrices.

const TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

pub struct Eigen {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// `vectors[i]` is the unit eigenvector for `values[i]`.
    pub vectors: Vec<Vec<f64>>,
    pub off_diagonal: f64,
    pub sweeps: usize,
}

fn off_norm(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i][j] * a[i][j];
            }
        }
    }
    s.sqrt()
}

pub fn symmetric_eigen(m: &[Vec<f64>]) -> Eigen {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut v: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS && off_norm(&a) > TOL {
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let (vp, vq) = (row[p], row[q]);
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j][j].total_cmp(&a[i][i]));
    Eigen {
        values: order.iter().map(|&i| a[i][i]).collect(),
        vectors: order.iter().map(|&i| v.iter().map(|row| row[i]).collect()).collect(),
        off_diagonal: off_norm(&a),
        sweeps,
    }
}

impl Eigen {
    /// `max_i ‖M v_i − λ_i v_i‖`.
    pub fn residual(&self, m: &[Vec<f64>]) -> f64 {
        let mut worst: f64 = 0.0;
        for (lam, vec) in self.values.iter().zip(&self.vectors) {
            let mut s = 0.0;
            for (row, x) in m.iter().zip(vec) {
                let mv: f64 = row.iter().zip(vec).map(|(a, b)| a * b).sum();
                s += (mv - lam * x).powi(2);
            }
            worst = worst.max(s.sqrt());
        }
        worst
    }
}
