//! Ξ(R,K) as a quasi-Hopf algebra: coproduct, associator φ, antipode data,
//! and exhaustive checks of the axioms on basis elements.
//!
//! Everything is tabulated on the basis δ_r⊗x of Ξ, so the same verifiers
//! run on the standard structure and on cochain twists of it.

pub mod catalog;
pub mod star;
pub mod twist;

use std::collections::HashMap;
use std::sync::Arc;

use crate::doubles::elem::key2;
use crate::doubles::{Elem, LegMap, XiAlgebra};
use crate::group_core::Transversal;
use crate::report::Report;
use crate::{Error, Result, C64};

pub use star::StarStructure;
pub use twist::CochainTwist;

/// S, α, β with S tabulated on the basis.
#[derive(Debug, Clone)]
pub struct Antipode {
    pub s: LegMap,
    pub alpha: Elem,
    pub beta: Elem,
}

#[derive(Debug, Clone)]
pub struct QuasiHopf {
    pub xi: XiAlgebra,
    /// Δ on basis elements (two output legs).
    pub delta: LegMap,
    /// ε on basis elements (no output legs).
    pub eps: LegMap,
    pub phi: Elem,
    pub phi_inv: Elem,
    pub antipode: Option<Antipode>,
}

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

impl QuasiHopf {
    /// The structure induced by the transversal: Δ(δ_r x) = Σ_{s·t=r} δ_s x ⊗ δ_t (x◁(x⁻¹▷s)),
    /// φ = Σ δ_r⊗δ_s⊗τ(r,s)⁻¹, and the standard antipode when R is regular.
    pub fn standard(td: Arc<Transversal>) -> Self {
        let xi = XiAlgebra::new(td.clone());
        let sm = &xi.smash;
        let (nr, nk) = (td.nr(), td.nk());
        let delta = LegMap::from_fn(sm.dim(), 2, |b| {
            let (r, x) = sm.split(b);
            let xi_ = td.k_inv(x);
            (0..nr)
                .map(|s| {
                    let t = td.left_divide(s, r);
                    let y = td.back[x][td.act[xi_][s]];
                    (key2(sm.index(s, x), sm.index(t, y)), one())
                })
                .collect()
        });
        let eps = LegMap::from_fn(sm.dim(), 0, |b| if sm.split(b).0 == 0 { vec![([0; 4], one())] } else { vec![] });
        let mut phi = sm.zero(3);
        let mut phi_inv = sm.zero(3);
        for r in 0..nr {
            for s in 0..nr {
                let t = td.tau[r][s];
                let ti = td.k_inv(t);
                for u in 0..nr {
                    phi.push(&[sm.index(r, 0), sm.index(s, 0), sm.index(u, ti)], one());
                    phi_inv.push(&[sm.index(r, 0), sm.index(s, 0), sm.index(u, t)], one());
                }
            }
        }
        let antipode = td.regular.then(|| {
            let s = LegMap::permutation(sm.dim(), |b| {
                let (r, x) = sm.split(b);
                let xi_ = td.k_inv(x);
                sm.index(td.rinv[td.act[xi_][r]], td.back[xi_][r])
            });
            let beta = sm.from_fn(|r, x| if x == td.tau[r][td.rinv[r]] { one() } else { C64::default() });
            Antipode { s, alpha: sm.unit(1), beta }
        });
        debug_assert_eq!(nk, sm.nh());
        QuasiHopf { xi, delta, eps, phi, phi_inv, antipode }
    }

    /// Catalog entry by name (see [`catalog::names`]).
    pub fn by_name(name: &str) -> Result<Self> {
        Ok(Self::standard(Arc::new(catalog::by_name(name)?)))
    }

    pub fn td(&self) -> &Arc<Transversal> {
        &self.xi.td
    }

    pub fn dim(&self) -> usize {
        self.xi.smash.dim()
    }

    /// Basis element with index b as a one-leg element.
    pub fn basis_elem(&self, b: u32) -> Elem {
        let (r, x) = self.xi.smash.split(b);
        self.xi.basis(r, x)
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        self.xi.mul(a, b)
    }

    pub fn coproduct(&self, a: &Elem) -> Elem {
        assert_eq!(a.legs(), 1);
        a.map_leg(0, &self.delta)
    }

    pub fn counit(&self, a: &Elem) -> C64 {
        assert_eq!(a.legs(), 1);
        a.map_leg(0, &self.eps).scalar()
    }

    pub fn antipode_of(&self, a: &Elem) -> Result<Elem> {
        let ap = self.antipode.as_ref().ok_or_else(|| Error::Precondition("no regular antipode".into()))?;
        Ok(a.map_leg(0, &ap.s))
    }

    /// Σ c · f(0,k0) f(1,k1) ⋯ over the terms of a multi-leg element, with
    /// f(leg, basis index) a one-leg element. Results of f are cached.
    pub fn contract(&self, e: &Elem, f: impl Fn(usize, u32) -> Elem) -> Elem {
        let mut cache: HashMap<(usize, u32), Elem> = HashMap::new();
        let mut out = self.xi.smash.zero(1);
        for (k, c) in e.terms() {
            let mut acc = self.xi.smash.scalar(*c);
            for leg in 0..e.legs() {
                let piece = cache.entry((leg, k[leg])).or_insert_with(|| f(leg, k[leg]));
                acc = if acc.legs() == 0 { piece.scale(acc.scalar()) } else { self.mul(&acc, piece) };
            }
            out = &out + &acc;
        }
        out
    }

    /// Multiplicativity and counit of Δ, quasi-coassociativity, the 3-cocycle
    /// identity and normalisation of φ, and φφ⁻¹ = 1.
    pub fn verify_bialgebra(&self) -> Report {
        let mut rep = Report::new(format!("quasi-bialgebra {}", self.label()));
        let sm = &self.xi.smash;
        let dim = self.dim() as u32;
        let basis: Vec<Elem> = (0..dim).map(|b| self.basis_elem(b)).collect();
        let deltas: Vec<Elem> = basis.iter().map(|e| self.coproduct(e)).collect();

        rep.check("Δ1 = 1⊗1", self.coproduct(&sm.unit(1)).distance(&sm.unit(2)));
        let mut worst = (0f64, None);
        for a in 0..dim as usize {
            for b in 0..dim as usize {
                let ab = self.mul(&basis[a], &basis[b]);
                let e = self.coproduct(&ab).distance(&self.mul(&deltas[a], &deltas[b]));
                bump(&mut worst, e, || format!("{}·{}", sm.basis_label(a as u32), sm.basis_label(b as u32)));
            }
        }
        rep.record("Δ(ab) = Δ(a)Δ(b)", worst.1, worst.0);

        let mut worst = (0f64, None);
        for (b, d) in deltas.iter().enumerate() {
            let e1 = d.map_leg(1, &self.eps).distance(&basis[b]);
            let e2 = d.map_leg(0, &self.eps).distance(&basis[b]);
            bump(&mut worst, e1.max(e2), || sm.basis_label(b as u32));
        }
        rep.record("(id⊗ε)Δ = (ε⊗id)Δ = id", worst.1, worst.0);

        let e = self.mul(&self.phi, &self.phi_inv).distance(&sm.unit(3));
        let e2 = self.mul(&self.phi_inv, &self.phi).distance(&sm.unit(3));
        rep.check("φφ⁻¹ = φ⁻¹φ = 1", e.max(e2));

        let mut worst = (0f64, None);
        for (b, d) in deltas.iter().enumerate() {
            let lhs = d.map_leg(1, &self.delta);
            let rhs = sm.mul_all(&[&self.phi, &d.map_leg(0, &self.delta), &self.phi_inv]);
            bump(&mut worst, lhs.distance(&rhs), || sm.basis_label(b as u32));
        }
        rep.record("(id⊗Δ)Δ = φ((Δ⊗id)Δ)φ⁻¹", worst.1, worst.0);

        let one1 = sm.unit(1);
        let lhs = sm.mul_all(&[&one1.tensor(&self.phi), &self.phi.map_leg(1, &self.delta), &self.phi.tensor(&one1)]);
        let rhs = self.mul(&self.phi.map_leg(2, &self.delta), &self.phi.map_leg(0, &self.delta));
        rep.check("3-cocycle", lhs.distance(&rhs));
        rep.check("(id⊗ε⊗id)φ = 1⊗1", self.phi.map_leg(1, &self.eps).distance(&sm.unit(2)));
        rep
    }

    /// Antimultiplicativity of S and the four antipode axioms for given (S, α, β).
    pub fn verify_antipode_with(&self, ap: &Antipode) -> Report {
        let mut rep = Report::new(format!("antipode {}", self.label()));
        let sm = &self.xi.smash;
        let dim = self.dim() as u32;
        let basis: Vec<Elem> = (0..dim).map(|b| self.basis_elem(b)).collect();
        let s_of = |b: u32| basis[b as usize].map_leg(0, &ap.s);
        let images: Vec<Elem> = (0..dim).map(s_of).collect();

        let mut worst = (0f64, None);
        for a in 0..dim as usize {
            for b in 0..dim as usize {
                let lhs = self.mul(&basis[a], &basis[b]).map_leg(0, &ap.s);
                let rhs = self.mul(&images[b], &images[a]);
                bump(&mut worst, lhs.distance(&rhs), || format!("{}·{}", sm.basis_label(a as u32), sm.basis_label(b as u32)));
            }
        }
        rep.record("S(ab) = S(b)S(a)", worst.1, worst.0);
        rep.check("S(1) = 1", sm.unit(1).map_leg(0, &ap.s).distance(&sm.unit(1)));

        let (mut w_a, mut w_b) = ((0f64, None), (0f64, None));
        for (b, e) in basis.iter().enumerate() {
            let d = self.coproduct(e);
            let eps = self.counit(e);
            let lhs = self.contract(&d, |leg, k| if leg == 0 { self.mul(&images[k as usize], &ap.alpha) } else { basis[k as usize].clone() });
            bump(&mut w_a, lhs.distance(&ap.alpha.scale(eps)), || sm.basis_label(b as u32));
            let lhs = self.contract(&d, |leg, k| if leg == 0 { self.mul(&basis[k as usize], &ap.beta) } else { images[k as usize].clone() });
            bump(&mut w_b, lhs.distance(&ap.beta.scale(eps)), || sm.basis_label(b as u32));
        }
        rep.record("(Sξ₁)αξ₂ = ε(ξ)α", w_a.1, w_a.0);
        rep.record("ξ₁βSξ₂ = ε(ξ)β", w_b.1, w_b.0);

        let lhs = self.contract(&self.phi, |leg, k| match leg {
            0 => self.mul(&basis[k as usize], &ap.beta),
            1 => self.mul(&images[k as usize], &ap.alpha),
            _ => basis[k as usize].clone(),
        });
        rep.check("φ¹β(Sφ²)αφ³ = 1", lhs.distance(&sm.unit(1)));
        let lhs = self.contract(&self.phi_inv, |leg, k| match leg {
            0 => self.mul(&images[k as usize], &ap.alpha),
            1 => self.mul(&basis[k as usize], &ap.beta),
            _ => images[k as usize].clone(),
        });
        rep.check("(Sφ⁻¹)αφ⁻²βSφ⁻³ = 1", lhs.distance(&sm.unit(1)));
        rep
    }

    /// Antipode axioms for the built-in antipode; an empty report when R is not regular.
    pub fn verify_antipode(&self) -> Report {
        match &self.antipode {
            Some(ap) => self.verify_antipode_with(ap),
            None => Report::new(format!("antipode {} (not regular, skipped)", self.label())),
        }
    }

    /// Short name built from the group and the representatives.
    pub fn label(&self) -> String {
        let td = self.td();
        let reps: Vec<&str> = (0..td.nr()).map(|r| td.r_label(r)).collect();
        let name = td.group.name().unwrap_or("G");
        if reps.len() <= 8 {
            format!("{name} R={{{}}}", reps.join(","))
        } else {
            format!("{name} |R|={}", reps.len())
        }
    }
}

/// Keep the largest residual and a lazily built witness for it.
pub(crate) fn bump(worst: &mut (f64, Option<String>), e: f64, witness: impl FnOnce() -> String) {
    if e > worst.0 || e.is_nan() {
        worst.0 = e;
        if e > crate::TOL || e.is_nan() {
            worst.1 = Some(witness());
        }
    }
}

/// The full axiom suite for one transversal: quasi-bialgebra, antipode (regular R)
/// and the star structure (regular R).
pub fn axiom_suite(td: Arc<Transversal>) -> Report {
    let qh = QuasiHopf::standard(td);
    let mut rep = Report::new(format!("axioms {}", qh.label()));
    rep.extend(qh.verify_bialgebra());
    rep.extend(qh.verify_antipode());
    if let Ok(st) = StarStructure::new(&qh) {
        rep.extend(st.verify(&qh));
    }
    rep
}
