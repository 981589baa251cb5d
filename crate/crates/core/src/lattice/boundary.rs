//! Smooth boundaries: the Ξ(R,K) action at boundary sites, boundary ribbon
//! equivariance and condensation of bulk quasiparticles.

use std::sync::Arc;

use serde::Serialize;

use super::geometry::{fc, vx, Lattice, Side, Site};
use super::ribbon::{verify_ribbon, QuasiBasis, Ribbon};
use super::site::{vacuum_one, verify_dg_rep, verify_terms};
use super::state::LatticeState;
use crate::doubles::{DgLabel, DoubleAlgebra, Multiplicities, XiAlgebra, XiLabel};
use crate::group_core::Transversal;
use crate::report::Report;
use crate::{Error, Result};

/// Ξ(R,K) acting at every given boundary site is a representation: the unit
/// acts as the identity and a▷∘b▷ = (ab)▷ for all basis pairs.
pub fn verify_xi_rep(probe: &LatticeState, xi: &XiAlgebra, sites: &[Site]) -> Result<Report> {
    let mut rep = Report::new("Ξ(R,K) boundary representation");
    let dim = xi.smash.dim() as u32;
    let (mut unit, mut mul) = (0f64, 0f64);
    for &s in sites {
        unit = unit.max(probe.xi_action(xi, s, &xi.unit())?.distance(probe));
        let acted: Vec<LatticeState> =
            (0..dim).map(|b| probe.xi_action(xi, s, &basis(xi, b))).collect::<Result<_>>()?;
        for a in 0..dim {
            let ea = basis(xi, a);
            for b in 0..dim {
                let eb = basis(xi, b);
                let lhs = acted[b as usize].xi_action(xi, s, &ea)?;
                let rhs = probe.xi_action(xi, s, &xi.mul(&ea, &eb))?;
                mul = mul.max(lhs.distance(&rhs));
            }
        }
    }
    rep.check("1▷ = id at boundary sites", unit);
    rep.check("a▷∘b▷ = (ab)▷ on Ξ basis", mul);
    Ok(rep)
}

/// (s·(y▷r))K = h⁻¹rK for all h ∈ G, r ∈ R, with h⁻¹ = sy.
pub fn factorization_consistency(td: &Transversal) -> Option<String> {
    let g = &td.group;
    for h in g.elements() {
        let (s, y) = td.factor(g.inv(h));
        for r in 0..td.nr() {
            let lhs = td.dot[s][td.act[y][r]];
            let rhs = td.rep_of(g.mul(g.inv(h), td.r_elem(r)));
            if lhs != rhs {
                return Some(format!("h={}, r={}", g.label(h), td.r_label(r)));
            }
        }
    }
    None
}

/// x▷^b F^{h,g} = F^{xhx⁻¹,xg} x▷^b and δ_r▷^b F^{h,g} = F^{h,g} δ_{s·(y▷r)}▷^b
/// at the ribbon's boundary start site.
pub fn verify_boundary_ribbon(probe: &LatticeState, xi: &XiAlgebra, rib: &Ribbon) -> Result<Report> {
    let td = &xi.td;
    let g = td.group.clone();
    let lat = probe.lattice().clone();
    let b = rib.bind(&lat)?;
    let s0 = rib.start;
    let mut rep = Report::new("boundary ribbon equivariance");
    rep.record("(s·(y▷r))K = h⁻¹rK", factorization_consistency(td), 0.0);
    let (mut ex, mut er) = (0f64, 0f64);
    for h in g.elements() {
        let (s, y) = td.factor(g.inv(h));
        for x in g.elements() {
            let img = b.apply(probe, h, x);
            for k in 0..td.nk() {
                let kk = td.k_elem(k);
                let l = img.xi_action(xi, s0, &xi.smash.group_elem(k))?;
                let r = b.apply(&probe.xi_action(xi, s0, &xi.smash.group_elem(k))?, g.conj(kk, h), g.mul(kk, x));
                ex = ex.max(l.distance(&r));
            }
            for r in 0..td.nr() {
                let l = img.xi_action(xi, s0, &xi.smash.delta(r))?;
                let moved = td.dot[s][td.act[y][r]];
                let rr = b.apply(&probe.xi_action(xi, s0, &xi.smash.delta(moved))?, h, x);
                er = er.max(l.distance(&rr));
            }
        }
    }
    rep.check("x▷^b F^{h,g} = F^{xhx⁻¹,xg} x▷^b", ex);
    rep.check("δ_r▷^b F^{h,g} = F^{h,g} δ_{s·(y▷r)}▷^b", er);
    Ok(rep)
}

/// Smooth-boundary strip of `w`×1 faces with the boundary on the left, and a
/// ribbon from the top boundary site straight into the bulk.
pub fn boundary_strip(td: &Transversal, w: i32) -> Result<(Arc<Lattice>, Ribbon)> {
    let k = Arc::new(td.subgroup.clone());
    let lat = Arc::new(Lattice::grid(td.group.clone(), w, 1, Side::Smooth(k))?);
    let s0 = Site::new(vx(0, 0), fc(0, -1))?;
    let path: Vec<_> = (0..w).map(|c| vx(0, c)).collect();
    let rib = Ribbon::along(&lat, s0, &path, fc(0, w - 1))?;
    Ok((lat, rib))
}

#[derive(Debug, Clone, Serialize)]
pub struct CondensationTable {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    /// ‖P_i▷^b W^a|vac⟩‖ per boundary label i (row) and bulk label a (column).
    pub norms: Vec<Vec<f64>>,
    /// Multiplicities n^i_a from the algebraic routes.
    pub expected: Vec<Vec<usize>>,
    /// max ‖Σ_{i: n≠0} P_i▷^b W|vac⟩ − W|vac⟩‖ over columns.
    pub stabilizer_residual: f64,
}

impl CondensationTable {
    /// First (row, col) where the zero pattern disagrees with the multiplicities.
    pub fn mismatch(&self, tol: f64) -> Option<(usize, usize)> {
        for (i, row) in self.norms.iter().enumerate() {
            for (j, &n) in row.iter().enumerate() {
                if (n > tol) != (self.expected[i][j] > 0) {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

/// Every lattice identity on a smooth-boundary strip of width `w ≥ 3`,
/// checked on a seeded random probe: term relations, the D(G) and Ξ(R,K)
/// site representations, bulk ribbon concatenation and boundary ribbon
/// equivariance.
pub fn lattice_suite(td: &Arc<Transversal>, w: i32, seed: u64) -> Result<Report> {
    if w < 3 {
        return Err(Error::Config(format!("lattice suite needs width ≥ 3, got {w}")));
    }
    let (lat, brib) = boundary_strip(td, w)?;
    let probe = LatticeState::random(lat.clone(), 6, seed);
    let dg = DoubleAlgebra::new(td.group.clone());
    let xi = XiAlgebra::new(td.clone());
    let bulk = [Site::new(vx(0, 1), fc(0, 0))?, Site::new(vx(1, w - 1), fc(0, w - 1))?];
    let edge = [Site::new(vx(0, 0), fc(0, -1))?, Site::new(vx(1, 0), fc(0, -1))?];
    let mut rep = Report::new(format!("lattice {} strip {w}x1, seed {seed}", td.group.name().unwrap_or("G")));
    rep.extend(verify_terms(&probe, &bulk));
    rep.extend(verify_dg_rep(&probe, &dg, &bulk)?);
    let a = Ribbon::along(&lat, bulk[0], &[vx(0, 1), vx(0, 2)], fc(0, 1))?;
    let b = Ribbon::along(&lat, a.end, &[vx(0, 2), vx(0, 3)], fc(0, 2))?;
    rep.extend(verify_ribbon(&probe, &a.concat(&b)?, Some((&a, &b)))?);
    rep.extend(verify_xi_rep(&probe, &xi, &edge)?);
    rep.extend(verify_boundary_ribbon(&probe, &xi, &brib)?);
    Ok(rep)
}

/// W^{C,π}|vac⟩ for a ribbon starting at the boundary.
pub fn trace_state(vac: &LatticeState, rib: &Ribbon, qb: &QuasiBasis, a: DgLabel) -> Result<LatticeState> {
    rib.apply_combo(vac, &qb.trace(a))
}

/// Apply every boundary projector to every trace-ribbon state.
pub fn condensation_table(m: &Multiplicities, w: i32) -> Result<CondensationTable> {
    let td = &m.td;
    let (lat, rib) = boundary_strip(td, w)?;
    let vac = vacuum_one(lat)?;
    let qb = QuasiBasis::new(td.group.clone())?;
    let rows: Vec<XiLabel> = m.boundary.labels();
    let cols: Vec<DgLabel> = m.bulk.labels();
    let projs: Vec<_> = rows.iter().map(|&i| m.xi.projector(&m.boundary, i)).collect();
    let mut norms = vec![vec![0f64; cols.len()]; rows.len()];
    let mut expected = vec![vec![0usize; cols.len()]; rows.len()];
    let mut stab = 0f64;
    for (j, &a) in cols.iter().enumerate() {
        let psi = trace_state(&vac, &rib, &qb, a)?;
        let mut kept = LatticeState::zero(psi.lattice().clone());
        for (i, &l) in rows.iter().enumerate() {
            let img = psi.xi_action(&m.xi, rib.start, &projs[i])?;
            norms[i][j] = img.norm() / psi.norm();
            expected[i][j] = m.multiplicity(l, a)?;
            if expected[i][j] > 0 {
                kept = kept.add(&img);
            }
        }
        stab = stab.max(kept.distance(&psi) / psi.norm());
    }
    Ok(CondensationTable {
        row_labels: rows.iter().map(|&i| m.boundary.name(td, i)).collect(),
        col_labels: cols.iter().map(|&a| m.bulk.name(a)).collect(),
        norms,
        expected,
        stabilizer_residual: stab,
    })
}

fn basis(xi: &XiAlgebra, b: u32) -> crate::doubles::Elem {
    let (r, x) = xi.smash.split(b);
    xi.smash.basis(r, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::site::verify_terms;
    use crate::quasihopf::catalog::s3_transversal;
    use crate::C64;
    use rand::{Rng, SeedableRng};

    fn probe(lat: Arc<Lattice>, n: usize, seed: u64) -> LatticeState {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let ord = lat.group.order() as u8;
        let mut s = LatticeState::zero(lat.clone());
        for _ in 0..n {
            let cfg: Vec<u8> = (0..lat.n_edges()).map(|_| rng.random_range(0..ord)).collect();
            s = s.axpy(C64::new(rng.random(), rng.random()), &LatticeState::basis(lat.clone(), cfg).unwrap());
        }
        s
    }

    #[test]
    fn smooth_boundary_s3_all_transversals() {
        for which in ["standard", "t2", "t3", "t4"] {
            let td = Arc::new(s3_transversal(which).unwrap());
            let xi = XiAlgebra::new(td.clone());
            let (lat, rib) = boundary_strip(&td, 2).unwrap();
            let p = probe(lat.clone(), 5, 3);
            let sites = [Site::new(vx(0, 0), fc(0, -1)).unwrap(), Site::new(vx(1, 0), fc(0, -1)).unwrap()];
            for rep in [
                verify_terms(&p, &[Site::new(vx(0, 1), fc(0, 0)).unwrap()]),
                verify_xi_rep(&p, &xi, &sites).unwrap(),
                verify_boundary_ribbon(&p, &xi, &rib).unwrap(),
            ] {
                assert!(rep.all_pass(), "{which}: {rep:#?}");
            }
        }
    }

    #[test]
    fn s3_condensation_matches_multiplicities() {
        let m = Multiplicities::new(Arc::new(s3_transversal("standard").unwrap())).unwrap();
        let t = condensation_table(&m, 2).unwrap();
        assert_eq!(t.mismatch(1e-9), None, "{t:#?}");
        assert!(t.stabilizer_residual < 1e-9, "{t:#?}");
    }
}
