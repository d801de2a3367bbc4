//! Dense helpers for the block eigensolver. Blocks are column-major `n x b`.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Column-major dense block.
#[derive(Debug, Clone)]
pub(crate) struct Block {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Block {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Block {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn random(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Self {
        let data = (0..rows * cols).map(|_| rng.random::<f64>() - 0.5).collect();
        Block { rows, cols, data }
    }

    pub fn col(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn col_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.rows + i]
    }

    /// `self * small` where `small` is `cols x k` (column-major).
    pub fn times(&self, small: &[f64], k: usize) -> Block {
        let mut out = Block::zeros(self.rows, k);
        for c in 0..k {
            for j in 0..self.cols {
                let s = small[c * self.cols + j];
                if s == 0.0 {
                    continue;
                }
                let src = j * self.rows;
                let dst = c * self.rows;
                for i in 0..self.rows {
                    out.data[dst + i] += s * self.data[src + i];
                }
            }
        }
        out
    }

    /// `selfᵀ * other`, a `cols x other.cols` column-major matrix.
    pub fn gram(&self, other: &Block) -> Vec<f64> {
        let mut out = vec![0.0; self.cols * other.cols];
        for b in 0..other.cols {
            for a in 0..self.cols {
                out[b * self.cols + a] = dot(self.col(a), other.col(b));
            }
        }
        out
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Orthonormalizes columns in place with two passes of modified Gram-Schmidt.
/// Columns that collapse are replaced by fresh random directions.
pub(crate) fn orthonormalize(q: &mut Block, rng: &mut ChaCha8Rng) {
    let n = q.rows;
    for j in 0..q.cols {
        let mut attempts = 0;
        loop {
            let before = norm(q.col(j));
            for _ in 0..2 {
                for i in 0..j {
                    let (head, tail) = q.data.split_at_mut(j * n);
                    let qi = &head[i * n..(i + 1) * n];
                    let qj = &mut tail[..n];
                    let r = dot(qi, qj);
                    qj.iter_mut().zip(qi).for_each(|(x, y)| *x -= r * y);
                }
            }
            let after = norm(q.col(j));
            if after > 1e-10 * before.max(f64::MIN_POSITIVE) && after > 1e-300 {
                q.col_mut(j).iter_mut().for_each(|x| *x /= after);
                break;
            }
            attempts += 1;
            assert!(attempts < 50, "cannot extend orthonormal basis");
            q.col_mut(j).iter_mut().for_each(|x| *x = rng.random::<f64>() - 0.5);
        }
    }
}

/// Eigen-decomposition of a symmetric `n x n` column-major matrix by cyclic
/// Jacobi rotations. Returns eigenvalues in descending order and the matching
/// eigenvectors as columns (column-major).
pub(crate) fn symmetric_eigen(a: &[f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut a = a.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let idx = |i: usize, j: usize| j * n + i;
    let total: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    for _sweep in 0..100 {
        let mut off = 0.0;
        for j in 0..n {
            for i in 0..j {
                off += a[idx(i, j)] * a[idx(i, j)];
            }
        }
        if off.sqrt() <= 1e-15 * total.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[idx(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = a[idx(p, p)];
                let aqq = a[idx(q, q)];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[idx(k, p)];
                    let akq = a[idx(k, q)];
                    a[idx(k, p)] = c * akp - s * akq;
                    a[idx(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[idx(p, k)];
                    let aqk = a[idx(q, k)];
                    a[idx(p, k)] = c * apk - s * aqk;
                    a[idx(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[idx(k, p)];
                    let vkq = v[idx(k, q)];
                    v[idx(k, p)] = c * vkp - s * vkq;
                    v[idx(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[idx(y, y)].total_cmp(&a[idx(x, x)]).then(x.cmp(&y)));
    let values = order.iter().map(|&k| a[idx(k, k)]).collect();
    let mut vectors = vec![0.0; n * n];
    for (dst, &src) in order.iter().enumerate() {
        vectors[dst * n..(dst + 1) * n].copy_from_slice(&v[src * n..(src + 1) * n]);
    }
    (values, vectors)
}
