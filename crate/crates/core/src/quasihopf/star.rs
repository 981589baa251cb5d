//! The bar-category star structure (θ, γ, 𝒢) on Ξ(R,K) for regular R.
//!
//! θ(δ_s) = δ_{s^R}, θ(x) = Σ_s (x◁s)δ_{s^R}, extended antilinearly and
//! multiplicatively. γ and 𝒢 are tabulated from τ directly.

use super::{bump, QuasiHopf};
use crate::doubles::{Elem, LegMap};
use crate::report::Report;
use crate::{Error, Result, C64};

#[derive(Debug, Clone)]
pub struct StarStructure {
    /// θ on basis elements; apply with [`StarStructure::theta`].
    pub theta_map: LegMap,
    pub gamma: Elem,
    pub gamma_inv: Elem,
    pub g: Elem,
    pub g_inv: Elem,
}

impl StarStructure {
    pub fn new(qh: &QuasiHopf) -> Result<Self> {
        let td = qh.td().clone();
        if !td.regular {
            return Err(Error::Precondition("star structure needs (·)^R bijective".into()));
        }
        let sm = &qh.xi.smash;
        let nr = td.nr();
        let rinv = &td.rinv;
        // θ(δ_r x) = δ_{r^R} (x◁(x⁻¹▷r))
        let theta_map = LegMap::permutation(sm.dim(), |b| {
            let (r, x) = sm.split(b);
            let s = td.act[td.k_inv(x)][r];
            sm.index(rinv[r], td.back[x][s])
        });
        let one = C64::new(1.0, 0.0);
        let mut gamma = sm.zero(1);
        let mut gamma_inv = sm.zero(1);
        for s in 0..nr {
            let t = td.tau[s][rinv[s]];
            gamma.push(&[sm.index(rinv[rinv[s]], td.k_inv(t))], one);
            gamma_inv.push(&[sm.index(s, t)], one);
        }
        let mut g = sm.zero(2);
        let mut g_inv = sm.zero(2);
        for s in 0..nr {
            for t in 0..nr {
                let tst = td.tau[s][t];
                let tr = rinv[t];
                let b = td.back[tst][tr];
                let ttr = td.tau[t][tr];
                let second = td.k_mul(ttr, td.k_inv(b));
                g.push(&[sm.index(tr, td.k_inv(tst)), sm.index(rinv[s], second)], one);
                let l = qh.mul(&sm.group_elem(tst), &sm.delta(tr));
                let r = qh.mul(&sm.group_elem(td.k_mul(b, td.k_inv(ttr))), &sm.delta(rinv[s]));
                g_inv = &g_inv + &l.tensor(&r);
            }
        }
        Ok(StarStructure { theta_map, gamma, gamma_inv, g, g_inv })
    }

    /// θ on every leg (antilinear).
    pub fn theta(&self, a: &Elem) -> Elem {
        a.conj().map_all(&self.theta_map)
    }

    pub fn verify(&self, qh: &QuasiHopf) -> Report {
        let mut rep = Report::new(format!("star {}", qh.label()));
        let sm = &qh.xi.smash;
        let dim = qh.dim() as u32;
        let basis: Vec<Elem> = (0..dim).map(|b| qh.basis_elem(b)).collect();
        let th: Vec<Elem> = basis.iter().map(|e| self.theta(e)).collect();

        let mut worst = (0f64, None);
        for a in 0..dim as usize {
            for b in 0..dim as usize {
                let lhs = self.theta(&qh.mul(&basis[a], &basis[b]));
                let e = lhs.distance(&qh.mul(&th[a], &th[b]));
                bump(&mut worst, e, || format!("{}·{}", sm.basis_label(a as u32), sm.basis_label(b as u32)));
            }
        }
        rep.record("θ(ab) = θ(a)θ(b)", worst.1, worst.0);
        let i = C64::new(0.0, 1.0);
        rep.check("θ(i·1) = -i·1", self.theta(&sm.scalar(i).tensor(&sm.unit(1))).distance(&sm.unit(1).scale(-i)));

        if let Some(ap) = &qh.antipode {
            let mut worst = (0f64, None);
            for (b, t) in th.iter().enumerate() {
                let via = qh.xi.star(&basis[b].map_leg(0, &ap.s));
                bump(&mut worst, t.distance(&via), || sm.basis_label(b as u32));
            }
            rep.record("θ = *∘S", worst.1, worst.0);
        }
        rep.check("γγ⁻¹ = γ⁻¹γ = 1", {
            let a = qh.mul(&self.gamma, &self.gamma_inv).distance(&sm.unit(1));
            a.max(qh.mul(&self.gamma_inv, &self.gamma).distance(&sm.unit(1)))
        });
        let mut worst = (0f64, None);
        for (b, t) in th.iter().enumerate() {
            let lhs = self.theta(t);
            let rhs = sm.mul_all(&[&self.gamma, &basis[b], &self.gamma_inv]);
            bump(&mut worst, lhs.distance(&rhs), || sm.basis_label(b as u32));
        }
        rep.record("θ² = γ(·)γ⁻¹", worst.1, worst.0);
        rep.check("θ(γ) = γ", self.theta(&self.gamma).distance(&self.gamma));

        rep.check("𝒢𝒢⁻¹ = 𝒢⁻¹𝒢 = 1", {
            let a = qh.mul(&self.g, &self.g_inv).distance(&sm.unit(2));
            a.max(qh.mul(&self.g_inv, &self.g).distance(&sm.unit(2)))
        });
        let mut worst = (0f64, None);
        for (b, t) in th.iter().enumerate() {
            let lhs = qh.coproduct(t);
            let dop = qh.coproduct(&basis[b]).permute(&[1, 0]);
            let rhs = sm.mul_all(&[&self.g_inv, &self.theta(&dop), &self.g]);
            bump(&mut worst, lhs.distance(&rhs), || sm.basis_label(b as u32));
        }
        rep.record("Δθ = 𝒢⁻¹(θ⊗θ)(Δ^op)𝒢", worst.1, worst.0);
        let e1 = self.g.map_leg(0, &qh.eps).distance(&sm.unit(1));
        let e2 = self.g.map_leg(1, &qh.eps).distance(&sm.unit(1));
        rep.check("(ε⊗id)𝒢 = (id⊗ε)𝒢 = 1", e1.max(e2));

        let one1 = sm.unit(1);
        let lhs = sm.mul_all(&[
            &self.theta(&qh.phi.permute(&[2, 1, 0])),
            &one1.tensor(&self.g),
            &self.g.map_leg(1, &qh.delta),
            &qh.phi,
        ]);
        let rhs = qh.mul(&self.g.tensor(&one1), &self.g.map_leg(0, &qh.delta));
        rep.check_soft("(θ⊗θ⊗θ)(φ₃₂₁)(1⊗𝒢)((id⊗Δ)𝒢)φ = (𝒢⊗1)((Δ⊗id)𝒢)", lhs.distance(&rhs));

        let lhs = qh.mul(&self.gamma.tensor(&self.gamma), &qh.coproduct(&self.gamma_inv));
        let rhs = qh.mul(&self.theta(&self.g.permute(&[1, 0])), &self.g);
        rep.check_soft("(γ⊗γ)Δγ⁻¹ = ((θ⊗θ)𝒢₂₁)𝒢", lhs.distance(&rhs));
        rep
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quasihopf::catalog::{cross3, octonion_transversal, s3_transversal, sn_transpositions};
    use std::sync::Arc;

    fn check(qh: &QuasiHopf) -> StarStructure {
        let st = StarStructure::new(qh).unwrap();
        let rep = st.verify(qh);
        assert!(rep.checks.iter().all(|c| c.residual < 1e-9), "{}: {:?}", qh.label(), rep.checks);
        st
    }

    #[test]
    fn s3_regular_transversals() {
        for which in ["standard", "t2"] {
            let qh = QuasiHopf::standard(Arc::new(s3_transversal(which).unwrap()));
            check(&qh);
        }
    }

    #[test]
    fn standard_s3_is_ordinary_hopf_star() {
        let qh = QuasiHopf::standard(Arc::new(s3_transversal("standard").unwrap()));
        let st = check(&qh);
        assert!(st.gamma.approx_eq(&qh.xi.smash.unit(1)));
        assert!(st.g.approx_eq(&qh.xi.smash.unit(2)));
    }

    #[test]
    fn theta_is_star_after_antipode() {
        let qh = QuasiHopf::standard(Arc::new(s3_transversal("t2").unwrap()));
        let st = StarStructure::new(&qh).unwrap();
        for b in 0..qh.dim() as u32 {
            let e = qh.basis_elem(b);
            let via = qh.xi.star(&qh.antipode_of(&e).unwrap());
            assert!(st.theta(&e).approx_eq(&via), "basis {b}");
        }
    }

    #[test]
    fn t2_g_matches_closed_form() {
        let qh = QuasiHopf::standard(Arc::new(s3_transversal("t2").unwrap()));
        let st = check(&qh);
        let sm = &qh.xi.smash;
        let td = qh.td();
        let d = |l: &str| sm.delta(td.find_r(l).unwrap());
        let u = sm.group_elem(td.find_k("u").unwrap());
        let vw = &d("v").tensor(&d("w")) + &d("w").tensor(&d("v"));
        let want = &sm.unit(2) + &qh.mul(&vw, &(&u.tensor(&u) - &sm.unit(2)));
        assert!(st.g.approx_eq(&want));
    }

    #[test]
    fn transposition_family_closed_forms() {
        let n = 4;
        let qh = QuasiHopf::standard(Arc::new(sn_transpositions(n).unwrap()));
        let st = check(&qh);
        let sm = &qh.xi.smash;
        let td = qh.td();
        assert!(st.gamma.approx_eq(&sm.unit(1)));
        let d0 = sm.delta(0);
        let mut want = &sm.unit(1).tensor(&d0) + &d0.tensor(&(&sm.unit(1) - &d0));
        for i in 1..n {
            want = &want + &sm.delta(i).tensor(&sm.delta(i));
            for j in 1..n {
                if i != j {
                    let ij = sm.group_elem(td.find_k(&format!("({} {})", i.min(j), i.max(j))).unwrap());
                    want = &want + &qh.mul(&sm.delta(i), &ij).tensor(&qh.mul(&sm.delta(j), &ij));
                }
            }
        }
        assert!(st.g.approx_eq(&want));
    }

    #[test]
    fn octonion_closed_forms() {
        let qh = QuasiHopf::standard(Arc::new(octonion_transversal()));
        let st = StarStructure::new(&qh).unwrap();
        let sm = &qh.xi.smash;
        assert!(st.gamma.approx_eq(&sm.unit(1)));
        let mut want = sm.zero(2);
        for p in 0..16 {
            for q in 0..16 {
                let k = cross3(p % 8, q % 8);
                want = &want + &sm.basis(p, k).tensor(&sm.basis(q, k));
            }
        }
        assert!(st.g.approx_eq(&want));
    }
}
