//! The Drinfeld double D(G) = C(G)⋊CG.

use std::sync::Arc;

use super::elem::{key1, key2, Elem, Key, LegMap, Smash};
use crate::group_core::{CharacterTable, ConjugacyData, FiniteGroup};
use crate::report::Report;
use crate::{Result, C64};

/// Bulk irrep label (conjugacy class, irrep of the centralizer G^{c0}).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub struct DgLabel {
    pub class: usize,
    pub irrep: usize,
}

/// Conjugacy data plus a character table for every centralizer.
#[derive(Debug, Clone)]
pub struct BulkLabels {
    pub conj: ConjugacyData,
    pub tables: Vec<CharacterTable>,
}

impl BulkLabels {
    pub fn new(group: Arc<FiniteGroup>) -> Result<Self> {
        let conj = ConjugacyData::new(group);
        let tables = conj.centralizers.iter().map(|c| CharacterTable::new(&c.as_group())).collect::<Result<_>>()?;
        Ok(BulkLabels { conj, tables })
    }

    pub fn labels(&self) -> Vec<DgLabel> {
        (0..self.tables.len())
            .flat_map(|class| (0..self.tables[class].len()).map(move |irrep| DgLabel { class, irrep }))
            .collect()
    }

    /// χ_π(n) for n ∈ G^{c0} given as a G-element.
    pub fn chi(&self, l: DgLabel, n: usize) -> C64 {
        let pos = self.conj.centralizers[l.class].position(n).expect("element of the centralizer");
        self.tables[l.class].chi(l.irrep, pos)
    }

    pub fn irrep_dim(&self, l: DgLabel) -> usize {
        self.tables[l.class].dims[l.irrep]
    }

    /// dim W_a = |C| dim π.
    pub fn dim(&self, l: DgLabel) -> usize {
        self.conj.classes[l.class].len() * self.irrep_dim(l)
    }

    /// Short label "c0/irrep", e.g. "uv/1".
    pub fn name(&self, l: DgLabel) -> String {
        format!("{}/{}", self.conj.group.label(self.conj.rep(l.class)), l.irrep)
    }
}

#[derive(Debug, Clone)]
pub struct DoubleAlgebra {
    pub group: Arc<FiniteGroup>,
    pub smash: Smash,
}

impl DoubleAlgebra {
    pub fn new(group: Arc<FiniteGroup>) -> Self {
        let n = group.order();
        let g = group.clone();
        let g2 = group.clone();
        let labels = group.labels().to_vec();
        let smash = Smash::new("DG", n, n, move |h, p| g.conj(h, p), move |a, b| g2.mul(a, b), labels.clone(), labels);
        DoubleAlgebra { group, smash }
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn unit(&self) -> Elem {
        self.smash.unit(1)
    }

    /// δ_g⊗h.
    pub fn basis(&self, g: usize, h: usize) -> Elem {
        self.smash.basis(g, h)
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        self.smash.mul(a, b)
    }

    pub fn try_mul(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        self.smash.try_mul(a, b)
    }

    /// (δ_g h)* = δ_{h⁻¹gh} h⁻¹, applied legwise.
    pub fn star(&self, a: &Elem) -> Elem {
        self.smash.star(a)
    }

    /// S(δ_g h) = δ_{h⁻¹g⁻¹h} h⁻¹ on one leg.
    pub fn antipode_map(&self) -> LegMap {
        let g = &self.group;
        LegMap::permutation(self.smash.dim(), |b| {
            let (p, h) = self.smash.split(b);
            let hi = g.inv(h);
            self.smash.index(g.conj(hi, g.inv(p)), hi)
        })
    }

    pub fn antipode(&self, a: &Elem) -> Elem {
        assert_eq!(a.legs(), 1);
        a.map_leg(0, &self.antipode_map())
    }

    /// Δ(δ_g h) = Σ_{ab=g} δ_a h ⊗ δ_b h.
    pub fn coproduct_map(&self) -> LegMap {
        let g = &self.group;
        LegMap::from_fn(self.smash.dim(), 2, |b| {
            let (p, h) = self.smash.split(b);
            g.elements()
                .map(|a| {
                    let bb = g.mul(g.inv(a), p);
                    (key2(self.smash.index(a, h), self.smash.index(bb, h)), C64::new(1.0, 0.0))
                })
                .collect()
        })
    }

    pub fn coproduct(&self, a: &Elem) -> Elem {
        assert_eq!(a.legs(), 1);
        a.map_leg(0, &self.coproduct_map())
    }

    pub fn counit_map(&self) -> LegMap {
        LegMap::from_fn(self.smash.dim(), 0, |b| {
            let (p, _) = self.smash.split(b);
            if p == 0 {
                vec![([0; 4], C64::new(1.0, 0.0))]
            } else {
                vec![]
            }
        })
    }

    /// ℛ = Σ_h (δ_h⊗e) ⊗ (Σ_g δ_g⊗h).
    pub fn rmatrix(&self) -> Elem {
        let mut r = self.smash.zero(2);
        for h in self.group.elements() {
            for g in self.group.elements() {
                r.push(&[self.smash.index(h, 0), self.smash.index(g, h)], C64::new(1.0, 0.0));
            }
        }
        r
    }

    /// ℛ⁻¹ = Σ_h δ_h ⊗ h⁻¹.
    pub fn rmatrix_inverse(&self) -> Elem {
        let mut r = self.smash.zero(2);
        for h in self.group.elements() {
            let hi = self.group.inv(h);
            for g in self.group.elements() {
                r.push(&[self.smash.index(h, 0), self.smash.index(g, hi)], C64::new(1.0, 0.0));
            }
        }
        r
    }

    /// (Δ^op x)ℛ = ℛ(Δx) on every basis element, plus ℛℛ⁻¹ = 1.
    pub fn verify_quasitriangular(&self) -> Report {
        let mut rep = Report::new("D(G) quasitriangular");
        let r = self.rmatrix();
        let ri = self.rmatrix_inverse();
        let res = self.mul(&r, &ri).distance(&self.smash.unit(2));
        rep.check("ℛℛ⁻¹ = 1⊗1", res);
        let mut worst = 0f64;
        let mut w = None;
        for b in 0..self.smash.dim() as u32 {
            let (p, h) = self.smash.split(b);
            let d = self.coproduct(&self.basis(p, h));
            let lhs = self.mul(&d.permute(&[1, 0]), &r);
            let rhs = self.mul(&r, &d);
            let e = lhs.distance(&rhs);
            if e > worst {
                worst = e;
                w = Some(self.smash.basis_label(b));
            }
        }
        rep.record("(Δ^op x)ℛ = ℛ(Δx)", if worst > crate::TOL { w } else { None }, worst);
        rep
    }

    /// ∫ δ_g⊗h = δ_{h,e}, normalised so ∫1 = |G|.
    pub fn frobenius_form(&self, a: &Elem) -> C64 {
        assert_eq!(a.legs(), 1);
        a.terms().filter(|(k, _)| self.smash.split(k[0]).1 == 0).map(|(_, c)| *c).sum()
    }

    /// P_{(C,π)} = dimπ/|G^{c0}| Σ_{c∈C} Σ_{n∈G^{c0}} χ_π(n⁻¹) δ_c⊗q_c n q_c⁻¹.
    pub fn projector(&self, labels: &BulkLabels, l: DgLabel) -> Elem {
        let g = &self.group;
        let cent = &labels.conj.centralizers[l.class];
        let scale = labels.irrep_dim(l) as f64 / cent.order() as f64;
        let mut out = self.smash.zero(1);
        for &c in &labels.conj.classes[l.class] {
            let q = labels.conj.q[c];
            for &n in cent.members() {
                let coeff = labels.chi(l, g.inv(n)) * scale;
                out.push(&[self.smash.index(c, g.conj(q, n))], coeff);
            }
        }
        out
    }

    /// Idempotence, self-adjointness, centrality, orthogonality and completeness.
    pub fn verify_projectors(&self, labels: &BulkLabels) -> Report {
        let mut rep = Report::new("D(G) projectors");
        let ls = labels.labels();
        let ps: Vec<Elem> = ls.iter().map(|&l| self.projector(labels, l)).collect();
        let gens: Vec<Elem> = self
            .group
            .elements()
            .flat_map(|h| [self.basis(h, 0), self.smash.group_elem(h)])
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

    /// Coefficient of δ_g⊗h in a one-leg element.
    pub fn coeff(&self, a: &Elem, g: usize, h: usize) -> C64 {
        a.get(&[self.smash.index(g, h)])
    }

    pub fn key(&self, g: usize, h: usize) -> Key {
        key1(self.smash.index(g, h))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_core::catalog::s3;

    fn s3_dg() -> (DoubleAlgebra, impl Fn(&str) -> usize) {
        let g = Arc::new(s3());
        let g2 = g.clone();
        (DoubleAlgebra::new(g), move |l: &str| g2.find(l).unwrap())
    }

    #[test]
    fn product_uses_conjugation() {
        let (d, f) = s3_dg();
        let lhs = d.mul(&d.basis(f("u"), f("v")), &d.basis(f("w"), 0));
        assert!(lhs.approx_eq(&d.basis(f("u"), f("v"))));
        let idem = d.mul(&d.basis(f("u"), 0), &d.basis(f("u"), 0));
        assert!(idem.approx_eq(&d.basis(f("u"), 0)));
    }

    #[test]
    fn star_and_antipode_on_basis() {
        let (d, f) = s3_dg();
        assert!(d.star(&d.basis(f("u"), f("v"))).approx_eq(&d.basis(f("w"), f("v"))));
        assert!(d.antipode(&d.basis(0, 0)).approx_eq(&d.basis(0, 0)));
        for b in 0..36u32 {
            let (p, h) = d.smash.split(b);
            let x = d.basis(p, h);
            assert!(d.antipode(&d.antipode(&x)).approx_eq(&x));
        }
    }

    #[test]
    fn rmatrix_is_quasitriangular() {
        let (d, _) = s3_dg();
        assert!(d.verify_quasitriangular().all_pass());
        let z2 = DoubleAlgebra::new(Arc::new(FiniteGroup::cyclic(2).unwrap()));
        assert!(z2.verify_quasitriangular().all_pass());
    }

    #[test]
    fn s3_projectors() {
        let (d, _) = s3_dg();
        let labels = BulkLabels::new(d.group.clone()).unwrap();
        assert_eq!(labels.labels().len(), 8);
        assert!(d.verify_projectors(&labels).all_pass());
    }

    #[test]
    fn frobenius_normalisation() {
        let (d, f) = s3_dg();
        assert!((d.frobenius_form(&d.unit()) - C64::new(6.0, 0.0)).norm() < 1e-12);
        assert_eq!(d.frobenius_form(&d.basis(f("u"), f("v"))), C64::new(0.0, 0.0));
    }
}
