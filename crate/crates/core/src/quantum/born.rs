use super::linalg::{tensor, tensor_all, CMat};
use super::measurement::DichotomicMeasurement;
use super::state::DensityMatrix;
use crate::boxes::{BipartiteBox, SingleBox, TripartiteBox};
use crate::error::{Error, Result};

/// The two measurements of one party, indexed by setting.
pub type MeasurementPair = [DichotomicMeasurement; 2];

/// `Tr(ρ K)` without forming the product.
fn trace_prod(rho: &CMat, k: &CMat) -> f64 {
    let n = rho.nrows();
    let mut s = num_complex::Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            s += rho[(i, j)] * k[(j, i)];
        }
    }
    s.re
}

fn local_dim(pair: &MeasurementPair) -> Result<usize> {
    let d = pair[0].dim();
    if pair[1].dim() != d {
        return Err(Error::Dimension(format!("settings of one party act on dims {} and {}", d, pair[1].dim())));
    }
    Ok(d)
}

fn check_total(rho: &DensityMatrix, dims: &[usize]) -> Result<()> {
    let total: usize = dims.iter().product();
    if total != rho.dim() {
        return Err(Error::Dimension(format!("state has dim {}, measurements act on {:?}", rho.dim(), dims)));
    }
    Ok(())
}

/// `P(abc|xyz) = Tr(ρ E^a_x ⊗ E^b_y ⊗ E^c_z)`.
pub fn born_tripartite(rho: &DensityMatrix, meas: &[MeasurementPair; 3]) -> Result<TripartiteBox> {
    let dims = [local_dim(&meas[0])?, local_dim(&meas[1])?, local_dim(&meas[2])?];
    check_total(rho, &dims)?;
    let m = rho.matrix();
    let mut p = vec![0.0; 64];
    for (i, slot) in p.iter_mut().enumerate() {
        let [x, y, z, a, b, c] = crate::boxes::tri_coords(i);
        let k = tensor_all(&[meas[0][x].effect(a), meas[1][y].effect(b), meas[2][z].effect(c)]);
        *slot = trace_prod(m, &k);
    }
    TripartiteBox::from_entries(p)
}

/// `P(bc|yz) = Tr(ρ E^b_y ⊗ E^c_z)`.
pub fn born_bipartite(rho: &DensityMatrix, meas: &[MeasurementPair; 2]) -> Result<BipartiteBox> {
    let dims = [local_dim(&meas[0])?, local_dim(&meas[1])?];
    check_total(rho, &dims)?;
    let m = rho.matrix();
    Ok(BipartiteBox::from_fn(|y, z, b, c| trace_prod(m, &tensor(meas[0][y].effect(b), meas[1][z].effect(c)))))
}

/// `P(a|x) = Tr(ρ E^a_x)`.
pub fn born_single(rho: &DensityMatrix, meas: &MeasurementPair) -> Result<SingleBox> {
    check_total(rho, &[local_dim(meas)?])?;
    let m = rho.matrix();
    Ok(SingleBox::from_fn(|x, a| trace_prod(m, meas[x].effect(a))))
}
