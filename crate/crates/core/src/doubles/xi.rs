//! The boundary algebra Ξ(R,K) = C(R)⋊CK and its inclusion into D(G).

use std::sync::Arc;

use super::dg::DoubleAlgebra;
use super::elem::{key1, Elem, LegMap, Smash};
use crate::group_core::{CharacterTable, OrbitData, Transversal};
use crate::report::Report;
use crate::{Result, C64};

/// Boundary irrep label (K-orbit in R, irrep of the stabilizer K^{r0}).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub struct XiLabel {
    pub orbit: usize,
    pub irrep: usize,
}

#[derive(Debug, Clone)]
pub struct BoundaryLabels {
    pub orbits: OrbitData,
    pub tables: Vec<CharacterTable>,
}

impl BoundaryLabels {
    pub fn new(td: &Transversal) -> Result<Self> {
        Self::from_orbits(OrbitData::new(td))
    }

    pub fn from_orbits(orbits: OrbitData) -> Result<Self> {
        let tables = orbits.stabilizers.iter().map(|s| CharacterTable::new(&s.as_group())).collect::<Result<_>>()?;
        Ok(BoundaryLabels { orbits, tables })
    }

    pub fn labels(&self) -> Vec<XiLabel> {
        (0..self.tables.len())
            .flat_map(|orbit| (0..self.tables[orbit].len()).map(move |irrep| XiLabel { orbit, irrep }))
            .collect()
    }

    /// χ_ρ(m) for m ∈ K^{r0} given as a G-element.
    pub fn chi(&self, l: XiLabel, m: usize) -> C64 {
        let pos = self.orbits.stabilizers[l.orbit].position(m).expect("element of the stabilizer");
        self.tables[l.orbit].chi(l.irrep, pos)
    }

    pub fn irrep_dim(&self, l: XiLabel) -> usize {
        self.tables[l.orbit].dims[l.irrep]
    }

    /// dim V_i = |O| dim ρ.
    pub fn dim(&self, l: XiLabel) -> usize {
        self.orbits.orbits[l.orbit].len() * self.irrep_dim(l)
    }

    pub fn name(&self, td: &Transversal, l: XiLabel) -> String {
        format!("{}/{}", td.r_label(self.orbits.base[l.orbit]), l.irrep)
    }
}

#[derive(Debug, Clone)]
pub struct XiAlgebra {
    pub td: Arc<Transversal>,
    pub smash: Smash,
}

impl XiAlgebra {
    pub fn new(td: Arc<Transversal>) -> Self {
        let (nr, nk) = (td.nr(), td.nk());
        let t1 = td.clone();
        let t2 = td.clone();
        let pl = (0..nr).map(|r| td.r_label(r).to_string()).collect();
        let hl = (0..nk).map(|x| td.k_label(x).to_string()).collect();
        let smash = Smash::new("XI", nr, nk, move |x, r| t1.act[x][r], move |x, y| t2.k_mul(x, y), pl, hl);
        XiAlgebra { td, smash }
    }

    pub fn unit(&self) -> Elem {
        self.smash.unit(1)
    }

    /// δ_r⊗x by R- and K-positions.
    pub fn basis(&self, r: usize, x: usize) -> Elem {
        self.smash.basis(r, x)
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        self.smash.mul(a, b)
    }

    pub fn try_mul(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        self.smash.try_mul(a, b)
    }

    /// (δ_r x)* = x⁻¹δ_r = δ_{x⁻¹▷r} x⁻¹, legwise.
    pub fn star(&self, a: &Elem) -> Elem {
        self.smash.star(a)
    }

    /// Λ = δ_e ⊗ (1/|K|) Σ_x x.
    pub fn integral(&self) -> Elem {
        let nk = self.td.nk();
        let mut out = self.smash.zero(1);
        for x in 0..nk {
            out.push(&[self.smash.index(0, x)], C64::new(1.0 / nk as f64, 0.0));
        }
        out
    }

    pub fn counit(&self, a: &Elem) -> C64 {
        assert_eq!(a.legs(), 1);
        a.terms().filter(|(k, _)| self.smash.split(k[0]).0 == 0).map(|(_, c)| *c).sum()
    }

    /// ξΛ = ε(ξ)Λ = Λξ on every basis ξ, and ε(Λ) = 1.
    pub fn verify_integral(&self) -> Report {
        let mut rep = Report::new("Ξ integral");
        let lam = self.integral();
        let mut worst = 0f64;
        for b in 0..self.smash.dim() as u32 {
            let (r, x) = self.smash.split(b);
            let xi = self.basis(r, x);
            let want = lam.scale(self.counit(&xi));
            worst = worst.max(self.mul(&xi, &lam).distance(&want));
            worst = worst.max(self.mul(&lam, &xi).distance(&want));
        }
        rep.check("ξΛ = Λξ = ε(ξ)Λ", worst);
        rep.check("ε(Λ) = 1", (self.counit(&lam) - C64::new(1.0, 0.0)).norm());
        rep
    }

    /// P_{(O,ρ)} = dimρ/|K^{r0}| Σ_{r∈O} Σ_{n∈K^{r0}} χ_ρ(n⁻¹) δ_r⊗κ_r n κ_r⁻¹.
    pub fn projector(&self, labels: &BoundaryLabels, l: XiLabel) -> Elem {
        let g = &self.td.group;
        let od = &labels.orbits;
        let stab = &od.stabilizers[l.orbit];
        let scale = labels.irrep_dim(l) as f64 / stab.order() as f64;
        let mut out = self.smash.zero(1);
        for &r in &od.orbits[l.orbit] {
            let kap = self.td.k_elem(od.kappa[r]);
            for &n in stab.members() {
                let x = self.td.subgroup.position(g.conj(kap, n)).expect("κ n κ⁻¹ ∈ K");
                out.push(&[self.smash.index(r, x)], labels.chi(l, g.inv(n)) * scale);
            }
        }
        out
    }

    pub fn verify_projectors(&self, labels: &BoundaryLabels) -> Report {
        let mut rep = Report::new("Ξ projectors");
        let ls = labels.labels();
        let ps: Vec<Elem> = ls.iter().map(|&l| self.projector(labels, l)).collect();
        let gens: Vec<Elem> = (0..self.td.nr())
            .map(|r| self.basis(r, 0))
            .chain((0..self.td.nk()).map(|x| self.smash.group_elem(x)))
            .collect();
        let (mut idem, mut adj, mut cent, mut orth) = (0f64, 0f64, 0f64, 0f64);
        for (i, p) in ps.iter().enumerate() {
            idem = idem.max(self.mul(p, p).distance(p));
            adj = adj.max(self.star(p).distance(p));
            for x in &gens {
                cent = cent.max(self.mul(p, x).distance(&self.mul(x, p)));
            }
            for q in &ps[i + 1..] {
                orth = orth.max(self.mul(p, q).distance(&self.smash.zero(1)));
            }
        }
        let sum = ps.iter().fold(self.smash.zero(1), |acc, p| &acc + p);
        rep.check("P² = P", idem);
        rep.check("P* = P", adj);
        rep.check("P central", cent);
        rep.check("P_a P_b = 0 for a ≠ b", orth);
        rep.check("Σ P = 1", sum.distance(&self.unit()));
        rep
    }

    /// i(δ_r x) = Σ_{y∈K} δ_{ry} ⊗ x as a map of one leg into D(G).
    pub fn inclusion_map(&self, dg: &DoubleAlgebra) -> LegMap {
        let td = &self.td;
        let g = &td.group;
        let mut m = LegMap::from_fn(self.smash.dim(), 1, |b| {
            let (r, x) = self.smash.split(b);
            (0..td.nk())
                .map(|y| {
                    let ry = g.mul(td.r_elem(r), td.k_elem(y));
                    (key1(dg.smash.index(ry, td.k_elem(x))), C64::new(1.0, 0.0))
                })
                .collect()
        });
        m.tag = Some(dg.smash.tag());
        m
    }

    pub fn include(&self, dg: &DoubleAlgebra, a: &Elem) -> Elem {
        let m = self.inclusion_map(dg);
        (0..a.legs()).fold(a.clone(), |acc, l| acc.map_leg(l, &m))
    }

    /// i is unital and multiplicative on all basis pairs.
    pub fn verify_inclusion(&self, dg: &DoubleAlgebra) -> Report {
        let mut rep = Report::new("Ξ ↪ D(G)");
        rep.check("i(1) = 1", self.include(dg, &self.unit()).distance(&dg.unit()));
        let dim = self.smash.dim() as u32;
        let imgs: Vec<Elem> = (0..dim).map(|b| self.include(dg, &self.smash.basis(self.smash.split(b).0, self.smash.split(b).1))).collect();
        let mut worst = 0f64;
        for a in 0..dim {
            for b in 0..dim {
                let (ra, xa) = self.smash.split(a);
                let (rb, xb) = self.smash.split(b);
                let prod = self.mul(&self.basis(ra, xa), &self.basis(rb, xb));
                let lhs = self.include(dg, &prod);
                let rhs = dg.mul(&imgs[a as usize], &imgs[b as usize]);
                worst = worst.max(lhs.distance(&rhs));
            }
        }
        rep.check("i(ab) = i(a)i(b)", worst);
        rep
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_core::catalog::s3;
    use crate::group_core::Subgroup;

    fn s3_xi(reps: &[&str]) -> XiAlgebra {
        let g = Arc::new(s3());
        let k = Subgroup::new(g.clone(), &[0, g.find("u").unwrap()]).unwrap();
        let reps: Vec<usize> = reps.iter().map(|l| g.find(l).unwrap()).collect();
        XiAlgebra::new(Arc::new(Transversal::new(g, k, &reps).unwrap()))
    }

    #[test]
    fn cross_relation_and_star() {
        let xi = s3_xi(&["e", "uv", "vu"]);
        let u = xi.td.find_k("u").unwrap();
        let (uv, vu) = (xi.td.find_r("uv").unwrap(), xi.td.find_r("vu").unwrap());
        // u δ_uv = δ_vu u
        let lhs = xi.mul(&xi.smash.group_elem(u), &xi.basis(uv, 0));
        assert!(lhs.approx_eq(&xi.basis(vu, u)));
        let a = &xi.basis(uv, u) + &xi.basis(0, 0).scale(C64::new(0.0, 2.0));
        assert!(xi.star(&xi.star(&a)).approx_eq(&a));
    }

    #[test]
    fn integral_and_projectors() {
        for reps in [["e", "uv", "vu"], ["e", "w", "v"], ["e", "uv", "v"]] {
            let xi = s3_xi(&reps);
            assert!(xi.verify_integral().all_pass());
            let labels = BoundaryLabels::new(&xi.td).unwrap();
            assert_eq!(labels.labels().len(), 3);
            assert!(xi.verify_projectors(&labels).all_pass());
            // Trivial label projector is the integral.
            assert!(xi.projector(&labels, XiLabel { orbit: 0, irrep: 0 }).approx_eq(&xi.integral()));
        }
    }

    #[test]
    fn projectors_match_closed_form() {
        let xi = s3_xi(&["e", "uv", "vu"]);
        let labels = BoundaryLabels::new(&xi.td).unwrap();
        let u = xi.td.find_k("u").unwrap();
        let half = C64::new(0.5, 0.0);
        let want = &xi.basis(0, 0).scale(half) - &xi.basis(0, u).scale(half);
        assert!(xi.projector(&labels, XiLabel { orbit: 0, irrep: 1 }).approx_eq(&want));
        let want = &xi.basis(1, 0) + &xi.basis(2, 0);
        assert!(xi.projector(&labels, XiLabel { orbit: 1, irrep: 0 }).approx_eq(&want));
    }

    #[test]
    fn inclusion_is_an_algebra_map() {
        let xi = s3_xi(&["e", "w", "v"]);
        let dg = DoubleAlgebra::new(xi.td.group.clone());
        assert!(xi.verify_inclusion(&dg).all_pass());
        let std = s3_xi(&["e", "uv", "vu"]);
        let g = &std.td.group;
        let img = std.include(&dg, &std.basis(std.td.find_r("uv").unwrap(), 0).clone());
        let img = &img - &dg.basis(g.find("uv").unwrap(), 0);
        // The remaining summand of i(δ_uv ⊗ e) sits on the same coset as uv.
        let w = g.find("w").unwrap();
        assert!(img.approx_eq(&dg.basis(w, 0)));
    }
}
