//! Small dense linear algebra used across the crate: LU solves, rank,
//! Gram-Schmidt. Everything here is O(n^3) on matrices with n <= ~8.

pub(crate) fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub(crate) fn norm(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

pub(crate) fn sub(x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

pub(crate) fn scale(x: &[f64], s: f64) -> Vec<f64> {
    x.iter().map(|a| a * s).collect()
}

pub(crate) fn add_scaled(x: &[f64], y: &[f64], s: f64) -> Vec<f64> {
    x.iter().zip(y).map(|(a, b)| a + s * b).collect()
}

/// M^T v for a square row-major matrix.
pub(crate) fn matvec_t(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    let n = v.len();
    (0..n).map(|k| (0..n).map(|i| m[i][k] * v[i]).sum()).collect()
}

/// Solve Ax = b by LU with partial pivoting. None when a pivot falls below
/// the conditioning tolerance relative to the largest entry.
pub(crate) fn solve(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = a.iter().cloned().collect();
    let mut rhs = b.to_vec();
    let scale = m
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |s, &x| s.max(x.abs()));
    let tol = 1e-12 * (1.0 + scale);
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        if m[piv][col].abs() <= tol {
            return None;
        }
        m.swap(col, piv);
        rhs.swap(col, piv);
        for row in col + 1..n {
            let f = m[row][col] / m[col][col];
            if f != 0.0 {
                for k in col..n {
                    m[row][k] -= f * m[col][k];
                }
                rhs[row] -= f * rhs[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| m[row][k] * x[k]).sum();
        x[row] = (rhs[row] - s) / m[row][row];
    }
    Some(x)
}

/// Determinant by LU, partial pivoting.
pub(crate) fn det(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut d = 1.0;
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        if m[piv][col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            m.swap(col, piv);
            d = -d;
        }
        d *= m[col][col];
        for row in col + 1..n {
            let f = m[row][col] / m[col][col];
            for k in col..n {
                m[row][k] -= f * m[col][k];
            }
        }
    }
    d
}

/// Rank of a row list with relative tolerance 1e-9, via elimination with
/// full column pivoting on the row echelon scan.
pub(crate) fn rank(rows: &[Vec<f64>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let mut m: Vec<Vec<f64>> = rows.to_vec();
    let ncols = m[0].len();
    let scale = m
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |s, &x| s.max(x.abs()));
    let tol = 1e-9 * (1.0 + scale);
    let mut r = 0;
    for col in 0..ncols {
        if r == m.len() {
            break;
        }
        let piv = (r..m.len())
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        if m[piv][col].abs() <= tol {
            continue;
        }
        m.swap(r, piv);
        for row in r + 1..m.len() {
            let f = m[row][col] / m[r][col];
            if f != 0.0 {
                for k in col..ncols {
                    m[row][k] -= f * m[r][k];
                }
            }
        }
        r += 1;
    }
    r
}

/// Orthonormal basis of span(rows) by modified Gram-Schmidt, dropping
/// directions below the same relative tolerance as [`rank`].
pub(crate) fn orthonormal_basis(rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let scale = rows
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |s, &x| s.max(x.abs()));
    let tol = 1e-9 * (1.0 + scale);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for row in rows {
        let mut v = row.clone();
        for q in &basis {
            let c = dot(&v, q);
            v = add_scaled(&v, q, -c);
        }
        // second pass for numerical orthogonality
        for q in &basis {
            let c = dot(&v, q);
            v = add_scaled(&v, q, -c);
        }
        let nv = norm(&v);
        if nv > tol {
            basis.push(scale_unit(&v, nv));
        }
    }
    basis
}

fn scale_unit(v: &[f64], nv: f64) -> Vec<f64> {
    v.iter().map(|x| x / nv).collect()
}
