//! Rank-one extraction from relaxed covariances.

use nalgebra::SymmetricEigen;

use crate::{CMatrix, CVector, Complex64};

pub(crate) fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * Complex64::from(0.5)
}

/// Dominant eigenvector scaled to `sqrt(Tr X)`, and `λ₂/λ₁`.
pub(crate) fn rank_one(m: &CMatrix) -> (CVector, f64) {
    let eig = SymmetricEigen::new(hermitian_part(m));
    let trace: f64 = eig.eigenvalues.iter().map(|v| v.max(0.0)).sum();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let l1 = eig.eigenvalues[order[0]];
    if l1 <= 0.0 {
        return (CVector::zeros(m.nrows()), 0.0);
    }
    let l2 = order.get(1).map_or(0.0, |&i| eig.eigenvalues[i].max(0.0));
    let v = eig.eigenvectors.column(order[0]).into_owned();
    (v * Complex64::from(trace.sqrt()), l2 / l1)
}
