//! Site actions of D(G) and Ξ(R,K), the projectors A and B, vacua and energy.

use std::sync::Arc;

use super::geometry::{Lattice, Restriction, Site, Vertex};
use super::state::{Config, LatticeState};
use crate::doubles::{DoubleAlgebra, Elem, XiAlgebra};
use crate::group_core::FiniteGroup;
use crate::report::Report;
use crate::{Error, Result, C64};

/// Holonomy of a configuration along a precomputed path.
pub fn path_product(g: &FiniteGroup, path: &[(usize, bool)], cfg: &[u8]) -> usize {
    path.iter().fold(0, |acc, &(i, fwd)| {
        let x = cfg[i] as usize;
        g.mul(acc, if fwd { x } else { g.inv(x) })
    })
}

/// h acting at a vertex: x ↦ hx on outgoing edges, x ↦ xh⁻¹ on incoming ones.
pub fn vertex_move(g: &FiniteGroup, inc: &[(usize, bool)], h: usize, cfg: &mut [u8]) {
    let hi = g.inv(h);
    for &(i, out) in inc {
        let x = cfg[i] as usize;
        cfg[i] = if out { g.mul(h, x) } else { g.mul(x, hi) } as u8;
    }
}

impl LatticeState {
    fn group(&self) -> &FiniteGroup {
        &self.lattice().group
    }

    /// h▷_v.
    pub fn vertex_action(&self, v: Vertex, h: usize) -> Self {
        let inc = self.lattice().incident(v);
        let g = self.lattice().group.clone();
        self.map_monomial(|k| {
            let mut c = k.to_vec();
            vertex_move(&g, &inc, h, &mut c);
            Some((c, C64::new(1.0, 0.0)))
        })
    }

    /// Σ_h coeff(h) h▷_v.
    pub fn vertex_combo(&self, v: Vertex, coeffs: &[(usize, C64)]) -> Self {
        let inc = self.lattice().incident(v);
        let g = self.lattice().group.clone();
        self.map_basis(|k, out| {
            for &(h, a) in coeffs {
                let mut c = k.to_vec();
                vertex_move(&g, &inc, h, &mut c);
                out.push((c, a));
            }
        })
    }

    /// Holonomy at a site for one configuration.
    pub fn holonomy(lattice: &Lattice, s: Site, cfg: &[u8]) -> usize {
        path_product(&lattice.group, &lattice.holonomy_path(s), cfg)
    }

    /// Multiply each configuration by f(holonomy at s).
    pub fn face_weight(&self, s: Site, f: impl Fn(usize) -> C64) -> Self {
        let path = self.lattice().holonomy_path(s);
        let g = self.lattice().group.clone();
        self.map_monomial(|k| {
            let w = f(path_product(&g, &path, k));
            (w != C64::default()).then(|| (k.to_vec(), w))
        })
    }

    /// δ_f▷_s.
    pub fn face_action(&self, s: Site, f: usize) -> Self {
        self.face_weight(s, |x| if x == f { C64::new(1.0, 0.0) } else { C64::default() })
    }

    /// Action of a one-leg D(G) element at a site: δ_g h acts as δ_g▷∘h▷.
    pub fn dg_action(&self, dg: &DoubleAlgebra, s: Site, a: &Elem) -> Result<Self> {
        if a.legs() != 1 || a.tag() != dg.smash.tag() {
            return Err(Error::TagMismatch(a.tag().to_string(), dg.smash.tag().to_string()));
        }
        let lat = self.lattice();
        let inc = lat.incident(s.v);
        let path = lat.holonomy_path(s);
        let g = lat.group.clone();
        let terms: Vec<(usize, usize, C64)> = a
            .terms()
            .map(|(k, c)| {
                let (p, h) = dg.smash.split(k[0]);
                (p, h, *c)
            })
            .collect();
        Ok(self.map_basis(|k, out| {
            for &(p, h, c) in &terms {
                let mut cfg = k.to_vec();
                vertex_move(&g, &inc, h, &mut cfg);
                if path_product(&g, &path, &cfg) == p {
                    out.push((cfg, c));
                }
            }
        }))
    }

    /// Action of a one-leg Ξ(R,K) element at a boundary site: δ_r x acts as
    /// δ_r▷ ∘ x▷ with δ_r▷ = Σ_{a∈rK} δ_a▷.
    pub fn xi_action(&self, xi: &XiAlgebra, s: Site, a: &Elem) -> Result<Self> {
        if a.legs() != 1 || a.tag() != xi.smash.tag() {
            return Err(Error::TagMismatch(a.tag().to_string(), xi.smash.tag().to_string()));
        }
        let td = xi.td.clone();
        let lat = self.lattice();
        if !Arc::ptr_eq(&td.group, &lat.group) && td.group.order() != lat.group.order() {
            return Err(Error::Lattice("transversal and lattice use different groups".into()));
        }
        let inc = lat.incident(s.v);
        let path = lat.holonomy_path(s);
        let g = lat.group.clone();
        let terms: Vec<(usize, usize, C64)> = a
            .terms()
            .map(|(k, c)| {
                let (r, x) = xi.smash.split(k[0]);
                (r, td.k_elem(x), *c)
            })
            .collect();
        Ok(self.map_basis(|k, out| {
            for &(r, x, c) in &terms {
                let mut cfg = k.to_vec();
                vertex_move(&g, &inc, x, &mut cfg);
                if td.rep_of(path_product(&g, &path, &cfg)) == r {
                    out.push((cfg, c));
                }
            }
        }))
    }

    /// A(v) = (1/|K|) Σ_{k∈K} k▷_v.
    pub fn vertex_projector(&self, v: Vertex, k: &Restriction) -> Self {
        let ks = k.members(self.group());
        let w = C64::new(1.0 / ks.len() as f64, 0.0);
        let coeffs: Vec<(usize, C64)> = ks.into_iter().map(|x| (x, w)).collect();
        self.vertex_combo(v, &coeffs)
    }

    /// B = Σ_{a∈K} δ_a▷_s.
    pub fn face_projector(&self, s: Site, k: &Restriction) -> Self {
        let k = k.clone();
        self.face_weight(s, move |x| if k.contains(x) { C64::new(1.0, 0.0) } else { C64::default() })
    }

    /// Apply every vertex term of the lattice.
    pub fn project_vertices(&self) -> Self {
        let lat = self.lattice().clone();
        lat.vertex_terms.iter().fold(self.clone(), |s, t| s.vertex_projector(t.v, &t.k))
    }

    /// Apply every face term of the lattice.
    pub fn project_faces(&self) -> Self {
        let lat = self.lattice().clone();
        lat.face_terms.iter().fold(self.clone(), |s, t| s.face_projector(t.site, &t.k))
    }

    /// Apply every term.
    pub fn project_all(&self) -> Self {
        self.project_vertices().project_faces()
    }

    /// ⟨P⟩ for each term (vertex terms first), on the normalised state.
    pub fn term_expectations(&self) -> Result<Vec<f64>> {
        let psi = self.normalized()?;
        let lat = self.lattice().clone();
        let mut out = Vec::new();
        for t in &lat.vertex_terms {
            out.push(psi.inner(&psi.vertex_projector(t.v, &t.k)).re);
        }
        for t in &lat.face_terms {
            out.push(psi.inner(&psi.face_projector(t.site, &t.k)).re);
        }
        Ok(out)
    }

    /// Σ (1 − ⟨P⟩) over all terms.
    pub fn energy(&self) -> Result<f64> {
        Ok(self.term_expectations()?.iter().map(|p| 1.0 - p).sum())
    }

    /// Labels of terms with ⟨P⟩ < 1 − tol.
    pub fn excitations(&self, tol: f64) -> Result<Vec<String>> {
        let lat = self.lattice().clone();
        let ex = self.term_expectations()?;
        let names = lat
            .vertex_terms
            .iter()
            .map(|t| format!("A({},{})", t.v.r, t.v.c))
            .chain(lat.face_terms.iter().map(|t| format!("B({},{})", t.site.p.r, t.site.p.c)));
        Ok(names.zip(ex).filter(|(_, p)| *p < 1.0 - tol).map(|(n, _)| n).collect())
    }
}

/// |vac₁⟩ = Π A (⊗_E e), normalised.
pub fn vacuum_one(lattice: Arc<Lattice>) -> Result<LatticeState> {
    let s = LatticeState::identity_config(lattice).project_vertices().project_faces();
    s.normalized().map_err(|_| Error::Lattice("vacuum projection vanished".into()))
}

/// |vac₂⟩ = Π B (⊗_E Σ_g g), normalised. Needs the full configuration space.
pub fn vacuum_two(lattice: Arc<Lattice>, budget: usize) -> Result<LatticeState> {
    let s = LatticeState::uniform(lattice, budget)?.project_faces().project_vertices();
    s.normalized().map_err(|_| Error::Lattice("vacuum projection vanished".into()))
}

/// Every configuration of a lattice (for exhaustive checks).
pub fn all_configs(lattice: &Lattice) -> Vec<Config> {
    let n = lattice.group.order();
    let e = lattice.n_edges();
    let total = n.pow(e as u32);
    (0..total)
        .map(|mut i| {
            let mut c = vec![0u8; e];
            for slot in c.iter_mut().rev() {
                *slot = (i % n) as u8;
                i /= n;
            }
            c
        })
        .collect()
}

/// D(G) acting at each site is a representation: 1▷ = id and
/// a▷∘b▷ = (ab)▷ on all basis pairs.
pub fn verify_dg_rep(probe: &LatticeState, dg: &DoubleAlgebra, sites: &[Site]) -> Result<Report> {
    let mut rep = Report::new("D(G) site representation");
    let n = dg.order();
    let basis: Vec<Elem> = (0..n).flat_map(|p| (0..n).map(move |h| (p, h))).map(|(p, h)| dg.basis(p, h)).collect();
    let (mut unit, mut mul) = (0f64, 0f64);
    for &s in sites {
        unit = unit.max(probe.dg_action(dg, s, &dg.unit())?.distance(probe));
        let acted: Vec<LatticeState> = basis.iter().map(|b| probe.dg_action(dg, s, b)).collect::<Result<_>>()?;
        for a in &basis {
            for (b, img) in basis.iter().zip(&acted) {
                let lhs = img.dg_action(dg, s, a)?;
                let rhs = probe.dg_action(dg, s, &dg.mul(a, b))?;
                mul = mul.max(lhs.distance(&rhs));
            }
        }
    }
    rep.check("1▷ = id at bulk sites", unit);
    rep.check("a▷∘b▷ = (ab)▷ on D(G) basis", mul);
    Ok(rep)
}

/// Idempotence and pairwise commutation of every term, plus the D(G)
/// relation h▷δ_g▷ = δ_{hgh⁻¹}▷h▷ at the given sites, all on `probe`.
pub fn verify_terms(probe: &LatticeState, sites: &[Site]) -> Report {
    let lat = probe.lattice().clone();
    let g = lat.group.clone();
    let mut rep = Report::new("lattice terms");
    let apply = |i: usize, s: &LatticeState| -> LatticeState {
        if i < lat.vertex_terms.len() {
            let t = &lat.vertex_terms[i];
            s.vertex_projector(t.v, &t.k)
        } else {
            let t = &lat.face_terms[i - lat.vertex_terms.len()];
            s.face_projector(t.site, &t.k)
        }
    };
    let n = lat.vertex_terms.len() + lat.face_terms.len();
    let imgs: Vec<LatticeState> = (0..n).map(|i| apply(i, probe)).collect();
    let mut idem = 0f64;
    for (i, img) in imgs.iter().enumerate() {
        idem = idem.max(apply(i, img).distance(img));
    }
    rep.check("A² = A, B² = B", idem);
    let mut comm = (0f64, None);
    for i in 0..n {
        for j in i + 1..n {
            let e = apply(i, &imgs[j]).distance(&apply(j, &imgs[i]));
            if e > comm.0 {
                comm = (e, Some(format!("terms {i},{j}")));
            }
        }
    }
    rep.record("terms commute", comm.1.filter(|_| comm.0 > crate::TOL), comm.0);
    let mut rel = 0f64;
    for &s in sites {
        for h in g.elements() {
            for a in g.elements() {
                let lhs = probe.face_action(s, a).vertex_action(s.v, h);
                let rhs = probe.vertex_action(s.v, h).face_action(s, g.conj(h, a));
                rel = rel.max(lhs.distance(&rhs));
            }
        }
    }
    rep.check("h▷∘δ_g▷ = δ_{hgh⁻¹}▷∘h▷", rel);
    rep
}
