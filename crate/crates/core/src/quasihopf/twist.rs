//! Cochain twists between the structures of two transversals of the same
//! cosets. With c_r = r⁻¹r̄ ∈ K, χ = Σ_r δ_r ⊗ c_r relates the two, and the
//! identification δ_r x ↦ δ_{r̄} x is an algebra isomorphism.

use std::sync::Arc;

use super::{bump, Antipode, QuasiHopf};
use crate::doubles::{Elem, LegMap};
use crate::group_core::Transversal;
use crate::report::Report;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct CochainTwist {
    pub src: QuasiHopf,
    pub dst: QuasiHopf,
    /// `bar[r]`: dst R-position in the same coset as src R-position r.
    pub bar: Vec<usize>,
    /// `c[r]`: K-position of r⁻¹r̄.
    pub c: Vec<usize>,
    pub chi: Elem,
    pub chi_inv: Elem,
    /// δ_r x ↦ δ_{r̄} x, src basis to dst basis.
    pub iso: LegMap,
}

impl CochainTwist {
    pub fn new(src: Arc<Transversal>, dst: Arc<Transversal>) -> Result<Self> {
        let same = src.group.labels() == dst.group.labels()
            && src.subgroup.members() == dst.subgroup.members()
            && src.group.elements().all(|a| src.group.elements().all(|b| src.group.mul(a, b) == dst.group.mul(a, b)));
        if !same {
            return Err(Error::Precondition("twist needs the same group and subgroup".into()));
        }
        let g = &src.group;
        let nr = src.nr();
        let bar: Vec<usize> = (0..nr).map(|r| dst.rep_of(src.r_elem(r))).collect();
        let c: Vec<usize> = (0..nr)
            .map(|r| src.subgroup.position(g.mul(g.inv(src.r_elem(r)), dst.r_elem(bar[r]))).expect("r⁻¹r̄ ∈ K"))
            .collect();
        let src_qh = QuasiHopf::standard(src.clone());
        let dst_qh = QuasiHopf::standard(dst);
        let sm = &src_qh.xi.smash;
        let mut chi = sm.zero(2);
        let mut chi_inv = sm.zero(2);
        for r in 0..nr {
            chi = &chi + &sm.delta(r).tensor(&sm.group_elem(c[r]));
            chi_inv = &chi_inv + &sm.delta(r).tensor(&sm.group_elem(src.k_inv(c[r])));
        }
        let dsm = &dst_qh.xi.smash;
        let mut iso = LegMap::permutation(sm.dim(), |b| {
            let (r, x) = sm.split(b);
            dsm.index(bar[r], x)
        });
        iso.tag = Some(dsm.tag());
        Ok(CochainTwist { src: src_qh, dst: dst_qh, bar, c, chi, chi_inv, iso })
    }

    pub fn from_names(src: &str, dst: &str) -> Result<Self> {
        use super::catalog::by_name;
        Self::new(Arc::new(by_name(src)?), Arc::new(by_name(dst)?))
    }

    /// Carry a src element to dst along δ_r x ↦ δ_{r̄} x.
    pub fn to_dst(&self, a: &Elem) -> Elem {
        a.map_all(&self.iso)
    }

    /// χ⁻¹(Δa)χ in src.
    pub fn twisted_coproduct(&self, a: &Elem) -> Elem {
        let q = &self.src;
        q.xi.smash.mul_all(&[&self.chi_inv, &q.coproduct(a), &self.chi])
    }

    /// χ₂₃⁻¹((id⊗Δ)χ⁻¹)φ((Δ⊗id)χ)χ₁₂ in src.
    pub fn twisted_phi(&self) -> Elem {
        let q = &self.src;
        let sm = &q.xi.smash;
        let one = sm.unit(1);
        sm.mul_all(&[
            &one.tensor(&self.chi_inv),
            &self.chi_inv.map_leg(1, &q.delta),
            &q.phi,
            &self.chi.map_leg(0, &q.delta),
            &self.chi.tensor(&one),
        ])
    }

    /// ᾱ = S(χ¹)αχ², β̄ = χ⁻¹βS(χ⁻²) and S̄ = S, all carried to dst.
    pub fn twisted_antipode(&self) -> Result<Antipode> {
        let q = &self.src;
        let ap = q.antipode.as_ref().ok_or_else(|| Error::Precondition("source antipode needs regular R".into()))?;
        let s = |b: u32| q.basis_elem(b).map_leg(0, &ap.s);
        let alpha = q.contract(&self.chi, |leg, b| if leg == 0 { q.mul(&s(b), &ap.alpha) } else { q.basis_elem(b) });
        let beta = q.contract(&self.chi_inv, |leg, b| if leg == 0 { q.mul(&q.basis_elem(b), &ap.beta) } else { s(b) });
        let dim = q.dim();
        let mut inv = vec![0u32; dim];
        for b in 0..dim {
            let (k, _) = self.iso.images[b][0];
            inv[k[0] as usize] = b as u32;
        }
        let s_bar = LegMap::from_fn(dim, 1, |bb| {
            let (k, _) = &ap.s.images[inv[bb as usize] as usize][0];
            self.iso.images[k[0] as usize].clone()
        });
        Ok(Antipode { s: s_bar, alpha: self.to_dst(&alpha), beta: self.to_dst(&beta) })
    }

    /// The twisting relations between the two transversals, checked on indices.
    pub fn verify_taucond(&self) -> Report {
        let mut rep = Report::new("twist relations");
        let (s, d) = (self.src.td(), self.dst.td());
        let (nr, nk) = (s.nr(), s.nk());
        let (bar, c) = (&self.bar, &self.c);
        let (mut w_dot, mut w_tau, mut w_act, mut w_back) = (None, None, None, None);
        for p in 0..nr {
            for t in 0..nr {
                let ct = s.act[c[p]][t];
                let q = s.dot[p][ct];
                if d.dot[bar[p]][bar[t]] != bar[q] && w_dot.is_none() {
                    w_dot = Some(format!("s={} t={}", s.r_label(p), s.r_label(t)));
                }
                // τ̄(s̄,t̄) = c⁻¹_{s·(c_s▷t)} τ(s, c_s▷t) (c_s◁t) c_t
                let want = s.k_mul(s.k_mul(s.k_mul(s.k_inv(c[q]), s.tau[p][ct]), s.back[c[p]][t]), c[t]);
                if d.tau[bar[p]][bar[t]] != want && w_tau.is_none() {
                    w_tau = Some(format!("s={} t={}", s.r_label(p), s.r_label(t)));
                }
            }
        }
        for x in 0..nk {
            for r in 0..nr {
                let xr = s.act[x][r];
                if d.act[x][bar[r]] != bar[xr] && w_act.is_none() {
                    w_act = Some(format!("x={} r={}", s.k_label(x), s.r_label(r)));
                }
                let want = s.k_mul(s.k_mul(s.k_inv(c[xr]), s.back[x][r]), c[r]);
                if d.back[x][bar[r]] != want && w_back.is_none() {
                    w_back = Some(format!("x={} r={}", s.k_label(x), s.r_label(r)));
                }
            }
        }
        rep.record("s̄·̄t̄ = overline(s·(c_s▷t))", w_dot, 0.0);
        rep.record("τ̄(s̄,t̄) = c⁻¹_{s·(c_s▷t)}τ(s,c_s▷t)(c_s◁t)c_t", w_tau, 0.0);
        rep.record("x▷̄r̄ = overline(x▷r)", w_act, 0.0);
        rep.record("x◁̄r̄ = c⁻¹_{x▷r}(x◁r)c_r", w_back, 0.0);
        rep
    }

    pub fn verify(&self) -> Report {
        let q = &self.src;
        let sm = &q.xi.smash;
        let mut rep = Report::new(format!("twist {} → {}", q.label(), self.dst.label()));
        rep.check("χχ⁻¹ = χ⁻¹χ = 1", {
            let a = q.mul(&self.chi, &self.chi_inv).distance(&sm.unit(2));
            a.max(q.mul(&self.chi_inv, &self.chi).distance(&sm.unit(2)))
        });
        let e1 = self.chi.map_leg(0, &q.eps).distance(&sm.unit(1));
        let e2 = self.chi.map_leg(1, &q.eps).distance(&sm.unit(1));
        rep.check("(ε⊗id)χ = (id⊗ε)χ = 1", e1.max(e2));

        let dim = q.dim() as u32;
        let basis: Vec<Elem> = (0..dim).map(|b| q.basis_elem(b)).collect();
        let mut worst = (0f64, None);
        for a in 0..dim as usize {
            for b in 0..dim as usize {
                let lhs = self.to_dst(&q.mul(&basis[a], &basis[b]));
                let rhs = self.dst.mul(&self.to_dst(&basis[a]), &self.to_dst(&basis[b]));
                bump(&mut worst, lhs.distance(&rhs), || format!("{}·{}", sm.basis_label(a as u32), sm.basis_label(b as u32)));
            }
        }
        rep.record("δ_r x ↦ δ_r̄ x is multiplicative", worst.1, worst.0);

        let mut worst = (0f64, None);
        for (b, e) in basis.iter().enumerate() {
            let lhs = self.to_dst(&self.twisted_coproduct(e));
            let rhs = self.dst.coproduct(&self.to_dst(e));
            bump(&mut worst, lhs.distance(&rhs), || sm.basis_label(b as u32));
        }
        rep.record("Δ̄ = χ⁻¹Δχ", worst.1, worst.0);
        let mut worst = (0f64, None);
        for (b, e) in basis.iter().enumerate() {
            let e1 = (q.counit(e) - self.dst.counit(&self.to_dst(e))).norm();
            bump(&mut worst, e1, || sm.basis_label(b as u32));
        }
        rep.record("ε̄ = ε", worst.1, worst.0);
        rep.check("φ̄ = χ₂₃⁻¹((id⊗Δ)χ⁻¹)φ((Δ⊗id)χ)χ₁₂", self.to_dst(&self.twisted_phi()).distance(&self.dst.phi));
        rep.extend(self.verify_taucond());
        match self.twisted_antipode() {
            Ok(ap) => {
                let mut sub = self.dst.verify_antipode_with(&ap);
                sub.suite = format!("twisted antipode {}", self.dst.label());
                rep.extend(sub);
            }
            Err(e) => rep.fail("twisted antipode", e.to_string(), f64::NAN),
        }
        rep
    }
}

/// Whether a one-leg element is idempotent.
pub fn idempotent_residual(q: &QuasiHopf, a: &Elem) -> f64 {
    q.mul(a, a).distance(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn twist(dst: &str) -> CochainTwist {
        CochainTwist::from_names("s3/standard", dst).unwrap()
    }

    fn assert_pass(rep: &Report) {
        assert!(rep.all_pass(), "{:?}", rep.failures().collect::<Vec<_>>());
    }

    #[test]
    fn s3_twists_pass() {
        for dst in ["s3/t2", "s3/t3", "s3/t4"] {
            assert_pass(&twist(dst).verify());
        }
    }

    #[test]
    fn identity_twist_is_trivial() {
        let t = CochainTwist::from_names("s3/t2", "s3/t2").unwrap();
        let sm = &t.src.xi.smash;
        assert!(t.chi.approx_eq(&sm.unit(2)));
        assert_pass(&t.verify());
        let ap = t.twisted_antipode().unwrap();
        let src = t.src.antipode.as_ref().unwrap();
        assert!(ap.alpha.approx_eq(&src.alpha) && ap.beta.approx_eq(&src.beta));
    }

    #[test]
    fn mismatched_subgroups_are_rejected() {
        assert!(CochainTwist::from_names("s3/standard", "sn/cyclic/4").is_err());
    }

    #[test]
    fn t2_cochain() {
        let t = twist("s3/t2");
        let sm = &t.src.xi.smash;
        let u = sm.group_elem(t.src.td().find_k("u").unwrap());
        let d0 = sm.delta(0);
        let want = &d0.tensor(&sm.unit(1)) + &(&sm.unit(1) - &d0).tensor(&u);
        assert!(t.chi.approx_eq(&want));
        assert!(t.src.mul(&t.chi, &t.chi).approx_eq(&sm.unit(2)));
        let ap = t.twisted_antipode().unwrap();
        let dsm = &t.dst.xi.smash;
        let du = dsm.group_elem(t.dst.td().find_k("u").unwrap());
        let want = &t.dst.mul(&dsm.delta(0), &(&dsm.unit(1) - &du)) + &du;
        assert!(ap.alpha.approx_eq(&want));
        assert!(ap.beta.approx_eq(&want));
    }

    #[test]
    fn t3_values() {
        let t = twist("s3/t3");
        let td = t.src.td();
        let g = &td.group;
        let c_uv = t.c[td.find_r("uv").unwrap()];
        let c_vu = t.c[td.find_r("vu").unwrap()];
        assert_eq!(g.label(td.k_elem(c_uv)), "e");
        assert_eq!(g.label(td.k_elem(c_vu)), "u");
        let sm = &t.src.xi.smash;
        let u = sm.group_elem(td.find_k("u").unwrap());
        let um1 = &u - &sm.unit(1);
        let chi = &sm.unit(2) + &sm.delta(2).tensor(&um1);
        assert!(t.chi.approx_eq(&chi));
        assert!(t.chi_inv.approx_eq(&chi));

        let q = &t.dst;
        let dsm = &q.xi.smash;
        let dt = q.td();
        assert_eq!(dt.r_label(1), "uv");
        assert_eq!(dt.r_label(2), "v");
        let du = dsm.group_elem(dt.find_k("u").unwrap());
        let dum1 = &du - &dsm.unit(1);
        let d = |i: usize| dsm.delta(i);
        let ap = t.twisted_antipode().unwrap();
        let alpha = &dsm.unit(1) + &q.mul(&d(1), &dum1);
        let beta = &dsm.unit(1) + &q.mul(&d(2), &dum1);
        assert!(ap.alpha.approx_eq(&alpha));
        assert!(ap.beta.approx_eq(&beta));
        assert!(idempotent_residual(q, &ap.alpha) < 1e-12);
        assert!(idempotent_residual(q, &ap.beta) < 1e-12);

        let mid = &(&d(1).tensor(&d(2)) + &d(2).tensor(&d(1))) + &d(1).tensor(&d(1));
        let phi = &dsm.unit(3) + &mid.tensor(&dum1);
        assert!(q.phi.approx_eq(&phi));
        assert!(t.to_dst(&t.twisted_phi()).approx_eq(&phi));
        let want = &(&d(0).tensor(&d(0)) + &d(2).tensor(&d(2))) + &d(1).tensor(&d(2));
        assert!(q.coproduct(&d(0)).approx_eq(&want));
        let want = &du.tensor(&dsm.unit(1)) + &q.mul(&d(0), &du).tensor(&dum1);
        assert!(q.coproduct(&du).approx_eq(&want));
    }
}
