//! Ribbon operators F^{h,g}, the quasiparticle basis and trace ribbons.
//!
//! A ribbon is a list of triangles. Dual triangles cross an edge at a vertex
//! and translate it by the transported flux; direct triangles run along an
//! edge and accumulate the path product g. F^{h,g} keeps a configuration iff
//! the accumulated product equals g.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use super::geometry::{face_slot, slot_edge, EdgeKey, Face, Lattice, Site, Vertex};
use super::state::LatticeState;
use crate::doubles::{BulkLabels, DgLabel};
use crate::group_core::{matrix_irreps, FiniteGroup, Irrep};
use crate::report::Report;
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Triangle {
    /// Crosses `edge` at a vertex; `outgoing` is relative to that vertex.
    Dual { edge: EdgeKey, outgoing: bool },
    /// Runs along `edge` (None: a missing edge, read as e).
    Direct { edge: Option<EdgeKey>, forward: bool },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ribbon {
    pub start: Site,
    pub end: Site,
    pub triangles: Vec<Triangle>,
}

#[derive(Debug, Clone, Copy)]
pub(crate) enum Op {
    Dual(usize, bool),
    Direct(Option<usize>, bool),
}

/// Compiled ribbon bound to one lattice.
#[derive(Debug, Clone)]
pub struct BoundRibbon {
    group: Arc<FiniteGroup>,
    pub(crate) ops: Vec<Op>,
}

/// Unit step between neighbouring vertices: (direct edge, forward, tail face slot, head face slot).
fn step(a: Vertex, b: Vertex) -> Result<(EdgeKey, bool, usize, usize)> {
    match (b.r - a.r, b.c - a.c) {
        (0, 1) => Ok((EdgeKey::h(a.r, a.c), true, 7, 5)),
        (0, -1) => Ok((EdgeKey::h(b.r, b.c), false, 3, 1)),
        (1, 0) => Ok((EdgeKey::v(a.r, a.c), true, 5, 3)),
        (-1, 0) => Ok((EdgeKey::v(b.r, b.c), false, 1, 7)),
        _ => Err(Error::Lattice(format!("{a:?} → {b:?} is not a unit step"))),
    }
}

/// Dual triangles swept anticlockwise at v from face slot `from` to `to`.
fn sweep(lat: &Lattice, v: Vertex, from: usize, to: usize, out: &mut Vec<Triangle>) {
    let n = (to + 8 - from) % 8;
    for k in 1..n {
        let s = (from + k) % 8;
        if s.is_multiple_of(2) {
            let (edge, outgoing) = slot_edge(v, s);
            if lat.has(edge) {
                out.push(Triangle::Dual { edge, outgoing });
            }
        }
    }
}

impl Ribbon {
    /// Ribbon from `start` along a vertex path (starting at start.v) to the
    /// site (last vertex, `end`), keeping the ribbon's faces on the right.
    pub fn along(lat: &Lattice, start: Site, path: &[Vertex], end: Face) -> Result<Self> {
        let first = *path.first().ok_or_else(|| Error::Lattice("empty ribbon path".into()))?;
        if first != start.v {
            return Err(Error::Lattice("path must start at the start vertex".into()));
        }
        let last = *path.last().unwrap();
        let end = Site::new(last, end)?;
        let mut cur = face_slot(start.v, start.p).ok_or_else(|| Error::Lattice("bad start site".into()))?;
        let mut tris = Vec::new();
        for w in path.windows(2) {
            let (edge, forward, tail, head) = step(w[0], w[1])?;
            sweep(lat, w[0], cur, tail, &mut tris);
            tris.push(Triangle::Direct { edge: lat.has(edge).then_some(edge), forward });
            cur = head;
        }
        sweep(lat, last, cur, face_slot(last, end.p).unwrap(), &mut tris);
        Ok(Ribbon { start, end, triangles: tris })
    }

    /// Explicit triangle list.
    pub fn from_triangles(start: Site, end: Site, triangles: Vec<Triangle>) -> Self {
        Ribbon { start, end, triangles }
    }

    /// self then `next`; requires self.end == next.start.
    pub fn concat(&self, next: &Ribbon) -> Result<Self> {
        if self.end != next.start {
            return Err(Error::Lattice("ribbons do not meet".into()));
        }
        let mut triangles = self.triangles.clone();
        triangles.extend_from_slice(&next.triangles);
        Ok(Ribbon { start: self.start, end: next.end, triangles })
    }

    pub fn bind(&self, lat: &Lattice) -> Result<BoundRibbon> {
        let idx = |e: EdgeKey| lat.index_of(e).ok_or_else(|| Error::Lattice(format!("ribbon edge {e} not in lattice")));
        let ops = self
            .triangles
            .iter()
            .map(|t| {
                Ok(match *t {
                    Triangle::Dual { edge, outgoing } => Op::Dual(idx(edge)?, outgoing),
                    Triangle::Direct { edge, forward } => Op::Direct(edge.map(idx).transpose()?, forward),
                })
            })
            .collect::<Result<_>>()?;
        Ok(BoundRibbon { group: lat.group.clone(), ops })
    }

    pub fn edges(&self) -> Vec<EdgeKey> {
        self.triangles
            .iter()
            .filter_map(|t| match *t {
                Triangle::Dual { edge, .. } => Some(edge),
                Triangle::Direct { edge, .. } => edge,
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serialisable")
    }

    /// F^{h,g} on a state.
    pub fn apply(&self, s: &LatticeState, h: usize, g: usize) -> Result<LatticeState> {
        Ok(self.bind(s.lattice())?.apply(s, h, g))
    }

    /// Σ c F^{h,g} on a state.
    pub fn apply_combo(&self, s: &LatticeState, coeffs: &[(usize, usize, C64)]) -> Result<LatticeState> {
        Ok(self.bind(s.lattice())?.apply_combo(s, coeffs))
    }
}

impl BoundRibbon {
    /// Transport h along the ribbon; returns the path product.
    fn run(&self, h: usize, cfg: &mut [u8]) -> usize {
        let g = &*self.group;
        let (mut cur, mut acc) = (h, 0usize);
        for op in &self.ops {
            match *op {
                Op::Dual(i, out) => {
                    let x = cfg[i] as usize;
                    cfg[i] = if out { g.mul(cur, x) } else { g.mul(x, g.inv(cur)) } as u8;
                }
                Op::Direct(i, fwd) => {
                    let y = match i {
                        Some(i) if fwd => cfg[i] as usize,
                        Some(i) => g.inv(cfg[i] as usize),
                        None => 0,
                    };
                    acc = g.mul(acc, y);
                    cur = g.product([g.inv(y), cur, y]);
                }
            }
        }
        acc
    }

    pub fn apply(&self, s: &LatticeState, h: usize, g: usize) -> LatticeState {
        s.map_monomial(|k| {
            let mut c = k.to_vec();
            (self.run(h, &mut c) == g).then(|| (c, C64::new(1.0, 0.0)))
        })
    }

    pub fn apply_combo(&self, s: &LatticeState, coeffs: &[(usize, usize, C64)]) -> LatticeState {
        let mut by_h: BTreeMap<usize, Vec<(usize, C64)>> = BTreeMap::new();
        for &(h, g, c) in coeffs {
            by_h.entry(h).or_default().push((g, c));
        }
        s.map_basis(|k, out| {
            for (&h, gs) in &by_h {
                let mut c = k.to_vec();
                let acc = self.run(h, &mut c);
                for &(g, a) in gs {
                    if g == acc {
                        out.push((c.clone(), a));
                    }
                }
            }
        })
    }
}

/// Matrix irreps of every centralizer, for the quasiparticle basis.
#[derive(Debug, Clone)]
pub struct QuasiBasis {
    pub bulk: BulkLabels,
    pub irreps: Vec<Vec<Irrep>>,
}

impl QuasiBasis {
    pub fn new(group: Arc<FiniteGroup>) -> Result<Self> {
        let bulk = BulkLabels::new(group)?;
        let irreps = bulk
            .conj
            .centralizers
            .iter()
            .zip(&bulk.tables)
            .map(|(c, t)| matrix_irreps(&c.as_group(), t))
            .collect::<Result<_>>()?;
        Ok(QuasiBasis { bulk, irreps })
    }

    fn group(&self) -> &FiniteGroup {
        &self.bulk.conj.group
    }

    /// π(n)_{ij} for n ∈ G^{c0}.
    fn pi(&self, l: DgLabel, n: usize, i: usize, j: usize) -> C64 {
        let pos = self.bulk.conj.centralizers[l.class].position(n).expect("centralizer element");
        self.irreps[l.class][l.irrep].entry(pos, i, j)
    }

    /// Coefficients of F'^{C,π;(c,i),(d,j)} = Σ_n π(n⁻¹)_{ji} F^{c, q_c n q_d⁻¹}.
    pub fn coeffs(&self, l: DgLabel, (c, i): (usize, usize), (d, j): (usize, usize)) -> Vec<(usize, usize, C64)> {
        let g = self.group();
        let q = &self.bulk.conj.q;
        self.bulk.conj.centralizers[l.class]
            .members()
            .iter()
            .map(|&n| (c, g.product([q[c], n, g.inv(q[d])]), self.pi(l, g.inv(n), j, i)))
            .filter(|t| t.2.norm() > crate::PRUNE)
            .collect()
    }

    /// W^{C,π} = Σ_c Σ_n χ_π(n⁻¹) F^{c, q_c n q_c⁻¹}.
    pub fn trace(&self, l: DgLabel) -> Vec<(usize, usize, C64)> {
        let g = self.group();
        let q = &self.bulk.conj.q;
        let mut out = Vec::new();
        for &c in &self.bulk.conj.classes[l.class] {
            for &n in self.bulk.conj.centralizers[l.class].members() {
                out.push((c, g.product([q[c], n, g.inv(q[c])]), self.bulk.chi(l, g.inv(n))));
            }
        }
        out
    }

    /// F^{h,g} expanded back in the quasiparticle basis:
    /// Σ (dim π/|G^{c0}|) π(q⁻¹_{h} g q_c)_{ij} F'^{C,π;(h,i),(c,j)} with c = g⁻¹hg.
    pub fn inverse(&self, h: usize, gg: usize) -> Vec<(DgLabel, (usize, usize), (usize, usize), C64)> {
        let g = self.group();
        let q = &self.bulk.conj.q;
        let c = g.conj(g.inv(gg), h);
        let class = self.bulk.conj.class_of[h];
        let n = g.product([g.inv(q[h]), gg, q[c]]);
        let cent = self.bulk.conj.centralizers[class].order() as f64;
        let mut out = Vec::new();
        for irrep in 0..self.irreps[class].len() {
            let l = DgLabel { class, irrep };
            let d = self.irreps[class][irrep].dim;
            for i in 0..d {
                for j in 0..d {
                    let w = self.pi(l, n, i, j) * (d as f64 / cent);
                    out.push((l, (h, i), (c, j), w));
                }
            }
        }
        out
    }

    /// max |F^{h,g} − Σ inverse(h,g)| over all (h,g), as coefficient vectors.
    pub fn round_trip_residual(&self) -> f64 {
        let g = self.group();
        let mut worst = 0f64;
        for h in g.elements() {
            for x in g.elements() {
                let mut acc: BTreeMap<(usize, usize), C64> = BTreeMap::new();
                for (l, u, v, w) in self.inverse(h, x) {
                    for (a, b, c) in self.coeffs(l, u, v) {
                        *acc.entry((a, b)).or_default() += w * c;
                    }
                }
                *acc.entry((h, x)).or_default() -= C64::new(1.0, 0.0);
                worst = acc.values().fold(worst, |m, c| m.max(c.norm()));
            }
        }
        worst
    }
}

/// Concatenation, algebra and equivariance checks for one ribbon on `probe`.
/// `split` optionally splits the ribbon as (first, second).
pub fn verify_ribbon(probe: &LatticeState, rib: &Ribbon, split: Option<(&Ribbon, &Ribbon)>) -> Result<Report> {
    let lat = probe.lattice().clone();
    let g = lat.group.clone();
    let b = rib.bind(&lat)?;
    let mut rep = Report::new("ribbon");
    let els: Vec<usize> = g.elements().collect();
    let imgs: Vec<Vec<LatticeState>> = els.iter().map(|&h| els.iter().map(|&x| b.apply(probe, h, x)).collect()).collect();

    if let Some((r1, r2)) = split {
        let (b1, b2) = (r1.bind(&lat)?, r2.bind(&lat)?);
        let mut worst = 0f64;
        for &h in &els {
            let firsts: Vec<LatticeState> = els.iter().map(|&f| b1.apply(probe, h, f)).collect();
            for &x in &els {
                let mut sum = LatticeState::zero(lat.clone());
                for &f in &els {
                    let fi = g.inv(f);
                    sum = sum.add(&b2.apply(&firsts[f], g.product([fi, h, f]), g.mul(fi, x)));
                }
                worst = worst.max(sum.distance(&imgs[h][x]));
            }
        }
        rep.check("F_{ξ'∘ξ}^{h,g} = Σ_f F_{ξ'}^{f⁻¹hf,f⁻¹g} F_ξ^{h,f}", worst);
    }

    let mut prod = 0f64;
    let mut adj = 0f64;
    for &h in &els {
        for &x in &els {
            for &h2 in &els {
                for &x2 in &els {
                    let lhs = b.apply(&imgs[h2][x2], h, x);
                    let rhs = if x == x2 { imgs[g.mul(h, h2)][x].clone() } else { LatticeState::zero(lat.clone()) };
                    prod = prod.max(lhs.distance(&rhs));
                }
            }
            // ⟨φ|F^{h,g}ψ⟩ = ⟨F^{h⁻¹,g}φ|ψ⟩ with φ = F^{h',g'}ψ as a probe family.
            let phi = &imgs[(h + 1) % els.len()][x];
            let a = phi.inner(&imgs[h][x]);
            let c = b.apply(phi, g.inv(h), x).inner(probe);
            adj = adj.max((a - c).norm());
        }
    }
    rep.check("F^{h,g} F^{h',g'} = δ_{g,g'} F^{hh',g}", prod);
    rep.check("(F^{h,g})† = F^{h⁻¹,g}", adj);

    let (s0, s1) = (rib.start, rib.end);
    let mut e = [0f64; 4];
    for &f in &els {
        let fp = probe.vertex_action(s0.v, f);
        let fq = probe.vertex_action(s1.v, f);
        for &h in &els {
            for &x in &els {
                let l = imgs[h][x].vertex_action(s0.v, f);
                let r = b.apply(&fp, g.conj(f, h), g.mul(f, x));
                e[0] = e[0].max(l.distance(&r));
                let l = imgs[h][x].face_action(s0, f);
                let r = b.apply(&probe.face_action(s0, g.mul(g.inv(h), f)), h, x);
                e[1] = e[1].max(l.distance(&r));
                let l = imgs[h][x].vertex_action(s1.v, f);
                let r = b.apply(&fq, h, g.mul(x, g.inv(f)));
                e[2] = e[2].max(l.distance(&r));
                let l = imgs[h][x].face_action(s1, f);
                let r = b.apply(&probe.face_action(s1, g.product([f, g.inv(x), h, x])), h, x);
                e[3] = e[3].max(l.distance(&r));
            }
        }
    }
    rep.check("f▷_{s0} F^{h,g} = F^{fhf⁻¹,fg} f▷_{s0}", e[0]);
    rep.check("δ_f▷_{s0} F^{h,g} = F^{h,g} δ_{h⁻¹f}▷_{s0}", e[1]);
    rep.check("f▷_{s1} F^{h,g} = F^{h,gf⁻¹} f▷_{s1}", e[2]);
    rep.check("δ_f▷_{s1} F^{h,g} = F^{h,g} δ_{fg⁻¹hg}▷_{s1}", e[3]);

    // Away from the endpoints the ribbon commutes with every term.
    let mut comm = 0f64;
    for t in &lat.vertex_terms {
        if t.v == s0.v || t.v == s1.v {
            continue;
        }
        for &h in &els {
            for &x in &els {
                let l = imgs[h][x].vertex_projector(t.v, &t.k);
                let r = b.apply(&probe.vertex_projector(t.v, &t.k), h, x);
                comm = comm.max(l.distance(&r));
            }
        }
    }
    for t in &lat.face_terms {
        if t.site.p == s0.p || t.site.p == s1.p {
            continue;
        }
        for &h in &els {
            for &x in &els {
                let l = imgs[h][x].face_projector(t.site, &t.k);
                let r = b.apply(&probe.face_projector(t.site, &t.k), h, x);
                comm = comm.max(l.distance(&r));
            }
        }
    }
    rep.check("[F^{h,g}, A(v)] = [F^{h,g}, B(p)] = 0 away from endpoints", comm);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_core::catalog::s3;
    use crate::lattice::geometry::{fc, vx, Side};
    use rand::{Rng, SeedableRng};

    fn probe(lat: Arc<Lattice>, n: usize, seed: u64) -> LatticeState {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let ord = lat.group.order() as u8;
        let mut s = LatticeState::zero(lat.clone());
        for _ in 0..n {
            let cfg: Vec<u8> = (0..lat.n_edges()).map(|_| rng.random_range(0..ord)).collect();
            let b = LatticeState::basis(lat.clone(), cfg).unwrap();
            s = s.axpy(C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5), &b);
        }
        s
    }

    #[test]
    fn bulk_ribbon_relations_s3() {
        let g = Arc::new(s3());
        let lat = Arc::new(Lattice::grid(g, 3, 3, Side::Open).unwrap());
        let s0 = Site::new(vx(1, 1), fc(0, 0)).unwrap();
        let a = Ribbon::along(&lat, s0, &[vx(1, 1), vx(1, 2)], fc(1, 1)).unwrap();
        let b = Ribbon::along(&lat, a.end, &[vx(1, 2), vx(2, 2)], fc(2, 2)).unwrap();
        let ab = a.concat(&b).unwrap();
        let rep = verify_ribbon(&probe(lat, 4, 7), &ab, Some((&a, &b))).unwrap();
        assert!(rep.all_pass(), "{rep:#?}");
    }

    #[test]
    fn fourier_round_trip_s3() {
        let q = QuasiBasis::new(Arc::new(s3())).unwrap();
        assert!(q.round_trip_residual() < 1e-9);
    }

    #[test]
    fn turning_ribbons_s3() {
        let g = Arc::new(s3());
        let lat = Arc::new(Lattice::grid(g, 4, 4, Side::Open).unwrap());
        let cases = [
            (vx(3, 3), fc(3, 3), vec![vx(3, 3), vx(3, 2), vx(2, 2), vx(2, 1)], fc(1, 0)),
            (vx(1, 3), fc(0, 3), vec![vx(1, 3), vx(2, 3), vx(2, 2), vx(3, 2), vx(3, 1)], fc(3, 0)),
            (vx(2, 1), fc(2, 0), vec![vx(2, 1), vx(1, 1), vx(1, 2), vx(1, 3)], fc(1, 3)),
            (vx(3, 1), fc(2, 1), vec![vx(3, 1), vx(2, 1), vx(1, 1), vx(1, 2)], fc(0, 2)),
        ];
        for (i, (v, p, path, end)) in cases.into_iter().enumerate() {
            let r = Ribbon::along(&lat, Site::new(v, p).unwrap(), &path, end).unwrap();
            let rep = verify_ribbon(&probe(lat.clone(), 3, i as u64), &r, None).unwrap();
            assert!(rep.all_pass(), "case {i}: {rep:#?}");
        }
    }
}
