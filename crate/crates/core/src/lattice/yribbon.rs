//! Ribbon operators Y^{r⊗δ_k} labelled by the dual of Ξ(R,K).
//!
//! Per triangle: a direct triangle reading y keeps the state iff y ∈ K and
//! then transports the label to (y⁻¹▷r, y⁻¹k); a dual triangle translates
//! its edge by the current r. The label k must be used up (e) at the end.

use std::sync::Arc;

use serde::Serialize;

use super::geometry::{fc, vx, EdgeKey, Lattice, Side, Site, Vertex};
use super::ribbon::{BoundRibbon, Op, Ribbon, Triangle};
use super::site::{path_product, vertex_move};
use super::state::{Config, LatticeState};
use crate::group_core::Transversal;
use crate::report::Report;
use crate::{Result, C64};

#[derive(Debug, Clone)]
pub struct YRibbon {
    pub ribbon: Ribbon,
    pub td: Arc<Transversal>,
    bound: BoundRibbon,
}

impl YRibbon {
    pub fn new(lat: &Lattice, td: Arc<Transversal>, ribbon: Ribbon) -> Result<Self> {
        let bound = ribbon.bind(lat)?;
        Ok(YRibbon { ribbon, td, bound })
    }

    /// Run the ribbon with label r (R-position); None if a direct edge leaves K.
    /// Returns the path product as a K-position.
    fn run(&self, r: usize, cfg: &mut [u8]) -> Option<usize> {
        let td = &*self.td;
        let g = &*td.group;
        let (mut cur, mut acc) = (r, 0usize);
        for op in &self.bound.ops {
            match *op {
                Op::Dual(i, out) => {
                    let c = td.r_elem(cur);
                    let x = cfg[i] as usize;
                    cfg[i] = if out { g.mul(c, x) } else { g.mul(x, g.inv(c)) } as u8;
                }
                Op::Direct(i, fwd) => {
                    let y = match i {
                        Some(i) if fwd => cfg[i] as usize,
                        Some(i) => g.inv(cfg[i] as usize),
                        None => 0,
                    };
                    let yk = td.subgroup.position(y)?;
                    acc = g.mul(acc, y);
                    cur = td.act[td.k_inv(yk)][cur];
                }
            }
        }
        td.subgroup.position(acc)
    }

    /// Y^{r⊗δ_k} on one configuration.
    pub fn apply_config(&self, r: usize, k: usize, cfg: &[u8]) -> Option<Config> {
        let mut c = cfg.to_vec();
        (self.run(r, &mut c) == Some(k)).then_some(c)
    }

    /// Y^{r⊗δ_k} on a state (r an R-position, k a K-position).
    pub fn apply(&self, s: &LatticeState, r: usize, k: usize) -> LatticeState {
        s.map_monomial(|cfg| self.apply_config(r, k, cfg).map(|c| (c, C64::new(1.0, 0.0))))
    }
}

/// Y_{ξ'∘ξ}^{r⊗δ_k} = Σ_x Y_{ξ'}^{(x⁻¹▷r)⊗δ_{x⁻¹k}} Y_ξ^{r⊗δ_x}, evaluated on
/// `probe` for every label; returns the worst residual.
pub fn concat_residual(probe: &LatticeState, td: &Arc<Transversal>, first: &Ribbon, second: &Ribbon) -> Result<f64> {
    let lat = probe.lattice().clone();
    let joint = YRibbon::new(&lat, td.clone(), first.concat(second)?)?;
    let a = YRibbon::new(&lat, td.clone(), first.clone())?;
    let b = YRibbon::new(&lat, td.clone(), second.clone())?;
    let mut worst = 0f64;
    for r in 0..td.nr() {
        for k in 0..td.nk() {
            let mut sum = LatticeState::zero(lat.clone());
            for x in 0..td.nk() {
                let xi = td.k_inv(x);
                sum = sum.add(&b.apply(&a.apply(probe, r, x), td.act[xi][r], td.k_mul(xi, k)));
            }
            worst = worst.max(sum.distance(&joint.apply(probe, r, k)));
        }
    }
    Ok(worst)
}

/// Both bracketings of a three-piece ribbon, built from the two-piece
/// concatenation rule, against each other and against the direct action.
pub fn order_independence(probe: &LatticeState, td: &Arc<Transversal>, parts: [&Ribbon; 3]) -> Result<f64> {
    let lat = probe.lattice().clone();
    let y: Vec<YRibbon> = parts.iter().map(|p| YRibbon::new(&lat, td.clone(), (*p).clone())).collect::<Result<_>>()?;
    let whole = YRibbon::new(&lat, td.clone(), parts[0].concat(parts[1])?.concat(parts[2])?)?;
    let conc = |a: &dyn Fn(&LatticeState, usize, usize) -> LatticeState,
                b: &dyn Fn(&LatticeState, usize, usize) -> LatticeState,
                s: &LatticeState,
                r: usize,
                k: usize| {
        let mut sum = LatticeState::zero(lat.clone());
        for x in 0..td.nk() {
            let xi = td.k_inv(x);
            sum = sum.add(&b(&a(s, r, x), td.act[xi][r], td.k_mul(xi, k)));
        }
        sum
    };
    let y0 = |s: &LatticeState, r, k| y[0].apply(s, r, k);
    let y1 = |s: &LatticeState, r, k| y[1].apply(s, r, k);
    let y2 = |s: &LatticeState, r, k| y[2].apply(s, r, k);
    let left = |s: &LatticeState, r, k| conc(&y0, &y1, s, r, k);
    let right = |s: &LatticeState, r, k| conc(&y1, &y2, s, r, k);
    let mut worst = 0f64;
    for r in 0..td.nr() {
        for k in 0..td.nk() {
            let a = conc(&left, &y2, probe, r, k);
            let b = conc(&y0, &right, probe, r, k);
            let w = whole.apply(probe, r, k);
            worst = worst.max(a.distance(&b)).max(a.distance(&w));
        }
    }
    Ok(worst)
}

/// Single-triangle relations: a direct triangle τ on `direct` (traversed
/// forward, tail v0, head v1) and a dual triangle crossing `dual` at `v`.
pub fn triangle_relations(probe: &LatticeState, td: &Arc<Transversal>, direct: EdgeKey, dual: (Vertex, EdgeKey)) -> Result<Report> {
    let lat = probe.lattice().clone();
    let g = td.group.clone();
    let mut rep = Report::new("Y triangle relations");
    let (v0, v1) = (direct.tail(), direct.head());
    let site = Site::new(v0, fc(v0.r, v0.c))?;
    let tau = Ribbon::from_triangles(site, site, vec![Triangle::Direct { edge: Some(direct), forward: true }]);
    let tau = YRibbon::new(&lat, td.clone(), tau)?;
    let (mut e0, mut e1, mut ef) = (0f64, 0f64, 0f64);
    let sites: Vec<Site> = [(v0, fc(v0.r, v0.c)), (v0, fc(v0.r - 1, v0.c)), (v1, fc(v1.r, v1.c - 1)), (v1, fc(v1.r - 1, v1.c - 1))]
        .into_iter()
        .map(|(v, p)| Site { v, p })
        .collect();
    for r in 0..td.nr() {
        for k in 0..td.nk() {
            let img = tau.apply(probe, r, k);
            for kp in 0..td.nk() {
                let ke = td.k_elem(kp);
                let l = img.vertex_action(v0, ke);
                let rr = tau.apply(&probe.vertex_action(v0, ke), r, td.k_mul(kp, k));
                e0 = e0.max(l.distance(&rr));
                let l = img.vertex_action(v1, ke);
                let rr = tau.apply(&probe.vertex_action(v1, ke), r, td.k_mul(k, td.k_inv(kp)));
                e1 = e1.max(l.distance(&rr));
            }
            for &s in &sites {
                for rp in 0..td.nr() {
                    let delta = |st: &LatticeState| {
                        let path = lat.holonomy_path(s);
                        st.map_monomial(|c| (td.rep_of(path_product(&g, &path, c)) == rp).then(|| (c.to_vec(), C64::new(1.0, 0.0))))
                    };
                    ef = ef.max(delta(&img).distance(&tau.apply(&delta(probe), r, k)));
                }
            }
        }
    }
    rep.check("k'▷_{v0} Y_τ^{r⊗δ_k} = Y_τ^{r⊗δ_{k'k}} k'▷_{v0}", e0);
    rep.check("k'▷_{v1} Y_τ^{r⊗δ_k} = Y_τ^{r⊗δ_{kk'⁻¹}} k'▷_{v1}", e1);
    rep.check("[δ_{r'}▷_{s_i}, Y_τ^{r⊗δ_k}] = 0", ef);

    let (v, e) = dual;
    let inc = lat.incident(v);
    let out = inc.iter().find(|&&(i, _)| lat.edge(i) == e).map(|&(_, o)| o).unwrap_or(true);
    let site = Site::new(v, fc(v.r, v.c))?;
    let star = YRibbon::new(&lat, td.clone(), Ribbon::from_triangles(site, site, vec![Triangle::Dual { edge: e, outgoing: out }]))?;
    let mut worst = 0f64;
    let mut witness = None;
    for r in 0..td.nr() {
        let sum_k = |s: &LatticeState, r: usize| {
            (0..td.nk()).fold(LatticeState::zero(lat.clone()), |acc, k| acc.add(&star.apply(s, r, k)))
        };
        for kp in 0..td.nk() {
            let ke = td.k_elem(kp);
            let l = sum_k(probe, r).vertex_action(v, ke);
            let rr = sum_k(&probe.vertex_action(v, ke), td.act[kp][r]);
            let d = l.distance(&rr);
            if d > crate::TOL && witness.is_none() {
                witness = Some(format!("k'={}, r={}", td.k_label(kp), td.r_label(r)));
            }
            worst = worst.max(d);
        }
    }
    let trivial_back = (0..td.nk()).all(|x| (0..td.nr()).all(|r| td.back[x][r] == x));
    // The dual relation is expected exactly when k'◁r = k' for all k', r.
    if trivial_back {
        rep.check("k'▷_v Σ_k Y_{τ*}^{r⊗δ_k} = Y_{τ*}^{(k'▷r)} k'▷_v", worst);
    } else {
        rep.record_soft("k'▷_v Σ_k Y_{τ*}^{r⊗δ_k} = Y_{τ*}^{(k'▷r)} k'▷_v", witness, worst);
    }
    Ok(rep)
}

/// Reconstruction of the worked example: dual x¹, direct g², dual x²,
/// direct g⁴, dual x³, direct g⁶, direct (g⁷)⁻¹, dual x⁴.
#[derive(Debug, Clone, Serialize)]
pub struct YExample {
    /// (g², g⁴, g⁶, g⁷, r, k) combinations evaluated.
    pub evaluated: usize,
    /// Cases the example marks zero that evaluate to zero (must equal `example_zero`).
    pub zero_confirmed: usize,
    pub example_zero: usize,
    /// Nonzero outputs whose dual edges match y^i = ((a_i⁻¹▷r) x^i)⁻¹ exactly.
    pub y_exact: usize,
    /// Nonzero outputs agreeing with the example's group-product form after
    /// identifying a_i⁻¹ r with a_i⁻¹▷r (same left K-coset).
    pub y_coset: usize,
    /// Nonzero outputs whose dual edges equal the example's group-product form exactly.
    pub y_literal: usize,
    pub nonzero: usize,
    /// Cases with g⁶(g⁷)⁻¹ ∈ K (and the rest of the example's condition)
    /// that vanish because g⁶ ∉ K on its own.
    pub stricter: usize,
}

pub fn example_lattice(td: &Transversal) -> Result<(Arc<Lattice>, Ribbon)> {
    let lat = Arc::new(Lattice::grid(td.group.clone(), 4, 2, Side::Open)?);
    let tris = vec![
        Triangle::Dual { edge: EdgeKey::v(1, 0), outgoing: true },
        Triangle::Direct { edge: Some(EdgeKey::h(1, 0)), forward: true },
        Triangle::Dual { edge: EdgeKey::v(1, 1), outgoing: true },
        Triangle::Direct { edge: Some(EdgeKey::h(1, 1)), forward: true },
        Triangle::Dual { edge: EdgeKey::v(1, 2), outgoing: true },
        Triangle::Direct { edge: Some(EdgeKey::h(1, 2)), forward: true },
        Triangle::Direct { edge: Some(EdgeKey::v(0, 3)), forward: false },
        Triangle::Dual { edge: EdgeKey::h(0, 3), outgoing: true },
    ];
    let rib = Ribbon::from_triangles(Site { v: vx(1, 0), p: fc(1, -1) }, Site { v: vx(0, 3), p: fc(-1, 3) }, tris);
    Ok((lat, rib))
}

pub fn example_yrib(td: &Arc<Transversal>) -> Result<YExample> {
    let g = td.group.clone();
    let (lat, rib) = example_lattice(td)?;
    let y = YRibbon::new(&lat, td.clone(), rib)?;
    let idx = |e: EdgeKey| lat.index_of(e).unwrap();
    let dual = [EdgeKey::v(1, 0), EdgeKey::v(1, 1), EdgeKey::v(1, 2), EdgeKey::h(0, 3)].map(idx);
    let direct = [EdgeKey::h(1, 0), EdgeKey::h(1, 1), EdgeKey::h(1, 2), EdgeKey::v(0, 3)].map(idx);
    let n = g.order();
    let xs: Vec<usize> = (0..4).map(|i| (i + 1) % n).collect();
    let ink = |a: usize| td.subgroup.contains(a);
    let mut out = YExample { evaluated: 0, zero_confirmed: 0, example_zero: 0, y_exact: 0, y_coset: 0, y_literal: 0, nonzero: 0, stricter: 0 };
    for code in 0..n.pow(4) {
        let gs = [code % n, (code / n) % n, (code / n / n) % n, code / n / n / n];
        let (g2, g4, g6, g7) = (gs[0], gs[1], gs[2], gs[3]);
        let mut cfg = vec![0u8; lat.n_edges()];
        for i in 0..4 {
            cfg[dual[i]] = xs[i] as u8;
        }
        cfg[direct[0]] = g2 as u8;
        cfg[direct[1]] = g4 as u8;
        cfg[direct[2]] = g6 as u8;
        cfg[direct[3]] = g7 as u8;
        let g67 = g.mul(g6, g.inv(g7));
        let total = g.product([g2, g4, g67]);
        let prefixes = [0, g2, g.mul(g2, g4), total];
        for r in 0..td.nr() {
            for k in 0..td.nk() {
                out.evaluated += 1;
                let example_nonzero = ink(g2) && ink(g4) && ink(g67) && total == td.k_elem(k);
                let res = y.apply_config(r, k, &cfg);
                if !example_nonzero {
                    out.example_zero += 1;
                    out.zero_confirmed += res.is_none() as usize;
                    continue;
                }
                let Some(res) = res else {
                    out.stricter += 1;
                    continue;
                };
                out.nonzero += 1;
                let (mut exact, mut coset, mut literal) = (true, true, true);
                for i in 0..4 {
                    let a = prefixes[i];
                    let moved = td.r_elem(td.act[td.subgroup.position(g.inv(a)).unwrap()][r]);
                    let expect = g.mul(moved, xs[i]);
                    let displayed = g.product([g.inv(a), td.r_elem(r), xs[i]]);
                    let got = res[dual[i]] as usize;
                    exact &= got == expect;
                    coset &= td.rep_of(g.mul(got, g.inv(xs[i]))) == td.rep_of(g.mul(displayed, g.inv(xs[i])));
                    literal &= got == displayed;
                }
                out.y_exact += exact as usize;
                out.y_coset += coset as usize;
                out.y_literal += literal as usize;
            }
        }
    }
    Ok(out)
}

/// Which intermediate-site action is tested.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Lambda {
    /// Λ_{CK} = (1/|K|) Σ_{x∈K} x▷_v
    VertexK,
    /// Λ_{C(R)} = δ_e▷ = Σ_{a∈K} δ_a of the holonomy
    FaceR,
}

#[derive(Debug, Clone, Serialize)]
pub struct YWitness {
    pub lambda: Lambda,
    pub r: String,
    pub k: String,
    pub config: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct YSearch {
    pub lambda: Lambda,
    pub checked: usize,
    pub witness: Option<YWitness>,
}

/// Ribbon (1,0) → (1,1) → (1,2) on a 2×2 grid with intermediate site
/// ((1,1), face (1,0)).
pub fn search_lattice(td: &Transversal) -> Result<(Arc<Lattice>, Ribbon, Site)> {
    let lat = Arc::new(Lattice::grid(td.group.clone(), 2, 2, Side::Open)?);
    let s0 = Site::new(vx(1, 0), fc(1, -1))?;
    let rib = Ribbon::along(&lat, s0, &[vx(1, 0), vx(1, 1), vx(1, 2)], fc(1, 2))?;
    Ok((lat, rib, Site::new(vx(1, 1), fc(1, 0))?))
}

/// Search basis configurations, in lexicographic order over the edges near
/// the ribbon and s2 (others fixed to e), for a violation of
/// Λ▷_{s2} Y^{r⊗δ_k} = Y^{r⊗δ_k} Λ▷_{s2}. Stops at the first witness or after `budget` configurations.
pub fn y_counterexample(td: &Arc<Transversal>, lambda: Lambda, budget: usize) -> Result<YSearch> {
    let (lat, rib, s2) = search_lattice(td)?;
    let g = td.group.clone();
    let y = YRibbon::new(&lat, td.clone(), rib.clone())?;
    let inc = lat.incident(s2.v);
    let hol = lat.holonomy_path(s2);
    let mut vary: Vec<usize> = rib.edges().iter().filter_map(|&e| lat.index_of(e)).collect();
    vary.extend(inc.iter().map(|&(i, _)| i));
    vary.extend(hol.iter().map(|&(i, _)| i));
    vary.sort_unstable();
    vary.dedup();
    let n = g.order();
    let ks: Vec<usize> = td.subgroup.members().to_vec();
    let lam = |c: &[u8]| -> Vec<Config> {
        match lambda {
            Lambda::VertexK => ks
                .iter()
                .map(|&x| {
                    let mut c = c.to_vec();
                    vertex_move(&g, &inc, x, &mut c);
                    c
                })
                .collect(),
            Lambda::FaceR => {
                if td.subgroup.contains(path_product(&g, &hol, c)) {
                    vec![c.to_vec()]
                } else {
                    vec![]
                }
            }
        }
    };
    let total = (n as f64).powi(vary.len() as i32).min(budget as f64) as usize;
    let mut checked = 0;
    for code in 0..total {
        let mut cfg = vec![0u8; lat.n_edges()];
        let mut c = code;
        for &i in vary.iter().rev() {
            cfg[i] = (c % n) as u8;
            c /= n;
        }
        checked += 1;
        for r in 0..td.nr() {
            for k in 0..td.nk() {
                let mut lhs: Vec<Config> = y.apply_config(r, k, &cfg).map(|c| lam(&c)).unwrap_or_default();
                let mut rhs: Vec<Config> = lam(&cfg).iter().filter_map(|c| y.apply_config(r, k, c)).collect();
                lhs.sort();
                rhs.sort();
                if lhs != rhs {
                    let w = YWitness {
                        lambda,
                        r: td.r_label(r).to_string(),
                        k: td.k_label(k).to_string(),
                        config: cfg.iter().map(|&x| g.label(x as usize).to_string()).collect(),
                    };
                    return Ok(YSearch { lambda, checked, witness: Some(w) });
                }
            }
        }
    }
    Ok(YSearch { lambda, checked, witness: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quasihopf::catalog::s3_transversal;
    use rand::{Rng, SeedableRng};

    fn probe(lat: Arc<Lattice>, n: usize, seed: u64, td: &Transversal) -> LatticeState {
        // Bias towards K-valued edges so direct triangles do not vanish.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let ord = lat.group.order();
        let ks = td.subgroup.members();
        let mut s = LatticeState::zero(lat.clone());
        for _ in 0..n {
            let cfg: Vec<u8> = (0..lat.n_edges())
                .map(|_| if rng.random_bool(0.5) { ks[rng.random_range(0..ks.len())] } else { rng.random_range(0..ord) } as u8)
                .collect();
            s = s.axpy(C64::new(rng.random(), rng.random()), &LatticeState::basis(lat.clone(), cfg).unwrap());
        }
        s
    }

    #[test]
    fn y_concatenation_and_triangles() {
        for which in ["standard", "t2"] {
            let td = Arc::new(s3_transversal(which).unwrap());
            let lat = Arc::new(Lattice::grid(td.group.clone(), 3, 3, Side::Open).unwrap());
            let s0 = Site::new(vx(1, 0), fc(1, -1)).unwrap();
            let a = Ribbon::along(&lat, s0, &[vx(1, 0), vx(1, 1)], fc(1, 0)).unwrap();
            let b = Ribbon::along(&lat, a.end, &[vx(1, 1), vx(2, 1)], fc(1, 0)).unwrap();
            let c = Ribbon::along(&lat, b.end, &[vx(2, 1), vx(2, 2)], fc(2, 2)).unwrap();
            let p = probe(lat.clone(), 40, 11, &td);
            assert!(concat_residual(&p, &td, &a, &b).unwrap() < 1e-9);
            assert!(order_independence(&p, &td, [&a, &b, &c]).unwrap() < 1e-9);
            let rep = triangle_relations(&p, &td, EdgeKey::h(1, 1), (vx(1, 1), EdgeKey::v(1, 1))).unwrap();
            assert!(rep.checks.iter().all(|c| c.status != crate::report::Status::Fail), "{rep:#?}");
        }
    }

    #[test]
    fn worked_example_standard() {
        let td = Arc::new(s3_transversal("standard").unwrap());
        let ex = example_yrib(&td).unwrap();
        assert_eq!(ex.zero_confirmed, ex.example_zero);
        assert_eq!(ex.y_exact, ex.nonzero);
        assert_eq!(ex.y_coset, ex.nonzero);
        assert_eq!((ex.evaluated, ex.nonzero, ex.y_literal, ex.stricter), (7776, 48, 6, 96));
    }

    #[test]
    fn counterexample_search() {
        let td = Arc::new(s3_transversal("standard").unwrap());
        let v = y_counterexample(&td, Lambda::VertexK, 1_000_000).unwrap();
        assert_eq!((v.checked, v.witness.is_none()), (279936, true));
        let f = y_counterexample(&td, Lambda::FaceR, 1_000_000).unwrap();
        let w = f.witness.expect("face witness");
        assert_eq!((w.r.as_str(), w.k.as_str()), ("uv", "e"));
    }
}
