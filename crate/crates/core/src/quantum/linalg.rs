use crate::error::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn from_rows(rows: &[&[Complex64]]) -> CMat {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    CMat::from_fn(n, m, |i, j| rows[i][j])
}

pub fn sigma_x() -> CMat {
    from_rows(&[&[ZERO, ONE], &[ONE, ZERO]])
}

pub fn sigma_y() -> CMat {
    from_rows(&[&[ZERO, -I], &[I, ZERO]])
}

pub fn sigma_z() -> CMat {
    from_rows(&[&[ONE, ZERO], &[ZERO, -ONE]])
}

/// Kronecker product `a ⊗ b`.
pub fn tensor(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn tensor_all(ms: &[&CMat]) -> CMat {
    ms.iter().skip(1).fold(ms[0].clone(), |acc, m| acc.kronecker(*m))
}

pub fn dagger(m: &CMat) -> CMat {
    m.adjoint()
}

/// `|ψ⟩⟨ψ|`.
pub fn projector(ket: &[Complex64]) -> CMat {
    let n = ket.len();
    CMat::from_fn(n, n, |i, j| ket[i] * ket[j].conj())
}

pub fn trace(m: &CMat) -> Complex64 {
    m.diagonal().iter().sum()
}

/// Traces out every subsystem not listed in `keep`. `dims` are the local
/// dimensions in tensor order; kept subsystems stay in their original order.
pub fn partial_trace(m: &CMat, dims: &[usize], keep: &[usize]) -> Result<CMat> {
    let total: usize = dims.iter().product();
    if m.nrows() != total || m.ncols() != total {
        return Err(Error::Dimension(format!("matrix is {}x{}, dims {:?} give {}", m.nrows(), m.ncols(), dims, total)));
    }
    if let Some(&k) = keep.iter().find(|&&k| k >= dims.len()) {
        return Err(Error::Dimension(format!("subsystem {k} out of range for {} subsystems", dims.len())));
    }
    let mut keep: Vec<usize> = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep.contains(k)).collect();
    let kd: usize = keep.iter().map(|&k| dims[k]).product();
    let td: usize = traced.iter().map(|&k| dims[k]).product();

    // Full multi-index from (kept index, traced index).
    let split = |ki: usize, ti: usize| -> usize {
        let mut digits = vec![0; dims.len()];
        let mut r = ki;
        for &k in keep.iter().rev() {
            digits[k] = r % dims[k];
            r /= dims[k];
        }
        let mut r = ti;
        for &k in traced.iter().rev() {
            digits[k] = r % dims[k];
            r /= dims[k];
        }
        digits.iter().zip(dims).fold(0, |acc, (d, n)| acc * n + d)
    };

    let mut out = CMat::zeros(kd, kd);
    for i in 0..kd {
        for j in 0..kd {
            out[(i, j)] = (0..td).map(|t| m[(split(i, t), split(j, t))]).sum();
        }
    }
    Ok(out)
}

/// Reorders tensor factors: subsystem `i` moves to position `perm[i]`.
pub fn permute_subsystems(m: &CMat, dims: &[usize], perm: &[usize]) -> Result<CMat> {
    let total: usize = dims.iter().product();
    if m.nrows() != total || m.ncols() != total || perm.len() != dims.len() {
        return Err(Error::Dimension(format!("matrix is {}x{}, dims {:?}, perm {:?}", m.nrows(), m.ncols(), dims, perm)));
    }
    let mut seen = vec![false; dims.len()];
    for &p in perm {
        if p >= dims.len() || std::mem::replace(&mut seen[p], true) {
            return Err(Error::Dimension(format!("{perm:?} is not a permutation")));
        }
    }
    let mut new_dims = vec![0; dims.len()];
    for (i, &p) in perm.iter().enumerate() {
        new_dims[p] = dims[i];
    }
    let map: Vec<usize> = (0..total)
        .map(|idx| {
            let mut digits = vec![0; dims.len()];
            let mut r = idx;
            for k in (0..dims.len()).rev() {
                digits[k] = r % dims[k];
                r /= dims[k];
            }
            let mut nd = vec![0; dims.len()];
            for (i, &p) in perm.iter().enumerate() {
                nd[p] = digits[i];
            }
            nd.iter().zip(&new_dims).fold(0, |acc, (d, n)| acc * n + d)
        })
        .collect();
    let mut out = CMat::zeros(total, total);
    for i in 0..total {
        for j in 0..total {
            out[(map[i], map[j])] = m[(i, j)];
        }
    }
    Ok(out)
}

/// Eigenvalues of the Hermitian part of `m`, ascending.
pub fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    let h = (m + m.adjoint()).map(|z| z * 0.5);
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn is_hermitian(m: &CMat, tol: f64) -> bool {
    m.is_square() && max_abs_diff(m, &m.adjoint()) <= tol
}

pub fn is_psd(m: &CMat, tol: f64) -> bool {
    is_hermitian(m, tol) && hermitian_eigenvalues(m).first().is_none_or(|&e| e >= -tol)
}
