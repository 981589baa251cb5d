//! Patches as codes: logical basis, readout and ground-space dimension.

use std::sync::Arc;

use nalgebra::DVector;

use crate::group_core::FiniteGroup;
use crate::lattice::{vacuum_one, EdgeKey, Lattice, LatticeState, PatchShape};
use crate::{Error, Result, C64};

/// One or more disjoint patches sharing a group.
#[derive(Debug, Clone)]
pub struct PatchCode {
    pub group: Arc<FiniteGroup>,
    pub shapes: Vec<PatchShape>,
    pub lattice: Arc<Lattice>,
    singles: Vec<Arc<Lattice>>,
    vacua: Vec<LatticeState>,
}

impl PatchCode {
    pub fn new(group: Arc<FiniteGroup>, shapes: &[PatchShape]) -> Result<Self> {
        if shapes.is_empty() {
            return Err(Error::Config("a code needs at least one patch".into()));
        }
        let lattice = Arc::new(Lattice::patches(group.clone(), shapes)?);
        let singles: Vec<Arc<Lattice>> =
            shapes.iter().map(|s| Lattice::patches(group.clone(), &[*s]).map(Arc::new)).collect::<Result<_>>()?;
        let vacua = singles.iter().map(|l| vacuum_one(l.clone())).collect::<Result<_>>()?;
        Ok(PatchCode { group, shapes: shapes.to_vec(), lattice, singles, vacua })
    }

    pub fn n_patches(&self) -> usize {
        self.shapes.len()
    }

    /// |G|^patches.
    pub fn logical_dim(&self) -> usize {
        self.group.order().pow(self.shapes.len() as u32)
    }

    /// Mixed-radix decoding of a logical index, first patch most significant.
    pub fn labels_of(&self, mut idx: usize) -> Vec<usize> {
        let n = self.group.order();
        let mut out = vec![0; self.shapes.len()];
        for slot in out.iter_mut().rev() {
            *slot = idx % n;
            idx /= n;
        }
        out
    }

    /// |h⟩_L on one patch: the top boundary ribbon F^{h,e} on the vacuum,
    /// which left-multiplies every top dangling edge by h.
    fn single(&self, i: usize, h: usize) -> Result<LatticeState> {
        let lat = &self.singles[i];
        let s = self.shapes[i];
        let top: Vec<usize> = (0..=s.w)
            .map(|c| lat.index_of(EdgeKey::v(s.origin.r, s.origin.c + c)).expect("top edge"))
            .collect();
        let g = self.group.clone();
        Ok(self.vacua[i].map_monomial(|k| {
            let mut c = k.to_vec();
            for &t in &top {
                c[t] = g.mul(h, c[t] as usize) as u8;
            }
            Some((c, C64::new(1.0, 0.0)))
        }))
    }

    /// |h₁⟩_L ⊗ … ⊗ |hₙ⟩_L.
    pub fn logical(&self, labels: &[usize]) -> Result<LatticeState> {
        if labels.len() != self.shapes.len() || labels.iter().any(|&h| h >= self.group.order()) {
            return Err(Error::Config("logical labels do not match the code".into()));
        }
        let mut state = self.single(0, labels[0])?;
        for (i, &h) in labels.iter().enumerate().skip(1) {
            let joint = Arc::new(Lattice::patches(self.group.clone(), &self.shapes[..=i])?);
            state = state.tensor(&self.single(i, h)?, joint)?;
        }
        Ok(LatticeState::from_amps(self.lattice.clone(), state.amps().clone()))
    }

    pub fn logical_index(&self, idx: usize) -> Result<LatticeState> {
        self.logical(&self.labels_of(idx))
    }

    /// Product of the edges along a patch's left column, top to bottom.
    pub fn column_product(&self, patch: usize, cfg: &[u8]) -> usize {
        let s = self.shapes[patch];
        (0..s.h).fold(0, |acc, r| {
            let i = self.lattice.index_of(EdgeKey::v(s.origin.r + r, s.origin.c)).expect("column edge");
            self.group.mul(acc, cfg[i] as usize)
        })
    }

    /// Coordinates ⟨L|ψ⟩ in the logical basis, plus the norm of the part of
    /// ψ outside the code space.
    pub fn readout(&self, state: &LatticeState) -> Result<(DVector<C64>, f64)> {
        let n = self.logical_dim();
        let mut v = DVector::zeros(n);
        let mut proj = LatticeState::zero(self.lattice.clone());
        for i in 0..n {
            let l = self.logical_index(i)?;
            let c = l.inner(state);
            v[i] = c;
            proj = proj.axpy(c, &l);
        }
        Ok((v, proj.distance(state)))
    }
}

/// dim of the ground space: Tr Π over all configurations, Π the product of
/// every vertex and face projector.
pub fn vacuum_dimension(lattice: &Arc<Lattice>, budget: usize) -> Result<f64> {
    if lattice.config_space() > budget as f64 {
        return Err(Error::Budget(format!("{} configurations (budget {budget})", lattice.config_space())));
    }
    let mut tr = 0.0;
    for cfg in crate::lattice::all_configs(lattice) {
        let img = LatticeState::basis(lattice.clone(), cfg.clone())?.project_all();
        tr += img.amp(&cfg).re;
    }
    Ok(tr)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn logical_basis_is_orthonormal_z3() {
        let g = Arc::new(FiniteGroup::cyclic(3).unwrap());
        let code = PatchCode::new(g, &[PatchShape::new(2, 2)]).unwrap();
        for a in 0..3 {
            let la = code.logical(&[a]).unwrap();
            assert!((la.norm() - 1.0).abs() < 1e-12);
            assert!(la.project_all().distance(&la) < 1e-12);
            for (cfg, _) in la.sorted() {
                assert_eq!(code.column_product(0, cfg), a);
            }
            for b in 0..3 {
                let ip = la.inner(&code.logical(&[b]).unwrap()).norm();
                assert!((ip - (a == b) as u8 as f64).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn ground_space_dimension_minimal_patches() {
        for n in [2usize, 3] {
            let g = Arc::new(FiniteGroup::cyclic(n).unwrap());
            let lat = Arc::new(Lattice::patches(g, &[PatchShape::new(1, 2)]).unwrap());
            let d = vacuum_dimension(&lat, 1 << 20).unwrap();
            assert!((d - n as f64).abs() < 1e-9, "{n}: {d}");
        }
        let g = Arc::new(crate::group_core::catalog::s3());
        let lat = Arc::new(Lattice::patches(g, &[PatchShape::new(1, 2)]).unwrap());
        assert!((vacuum_dimension(&lat, 1 << 20).unwrap() - 6.0).abs() < 1e-9);
    }
}
