//! Transversals R of G/K and the matched-pair data they induce.
//!
//! Every element factorises uniquely as `g = r x` with r ∈ R, x ∈ K. From
//! `x r = (x▷r)(x◁r)` and `r s = (r·s) τ(r,s)` we read off the action ▷, the
//! quasi-action ◁, the cocycle τ and the loop product ·. Tables are indexed
//! by positions: R-positions follow the caller's rep list (e first) and
//! K-positions follow the sorted member list of K.

use std::sync::Arc;

use super::{FiniteGroup, Subgroup};
use crate::report::Report;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct Transversal {
    pub group: Arc<FiniteGroup>,
    pub subgroup: Subgroup,
    /// Element index of each representative; `reps[0] = e`.
    pub reps: Vec<usize>,
    /// `act[x][r]`: R-position of x▷r.
    pub act: Vec<Vec<usize>>,
    /// `back[x][r]`: K-position of x◁r.
    pub back: Vec<Vec<usize>>,
    /// `tau[r][s]`: K-position of τ(r,s).
    pub tau: Vec<Vec<usize>>,
    /// `dot[r][s]`: R-position of r·s.
    pub dot: Vec<Vec<usize>>,
    /// `rinv[r]`: R-position of r^R.
    pub rinv: Vec<usize>,
    pub regular: bool,
    /// Element index -> (R-position, K-position).
    factor: Vec<(usize, usize)>,
    /// Coset index -> R-position.
    rep_of_coset: Vec<usize>,
}

impl Transversal {
    pub fn new(group: Arc<FiniteGroup>, subgroup: Subgroup, reps: &[usize]) -> Result<Self> {
        let g = group.clone();
        if reps.first() != Some(&0) {
            return Err(Error::NotTransversal("first representative must be e".into()));
        }
        let ncos = subgroup.cosets().len();
        if reps.len() != ncos {
            return Err(Error::NotTransversal(format!("{} reps for {} cosets", reps.len(), ncos)));
        }
        let mut rep_of_coset = vec![usize::MAX; ncos];
        for (i, &r) in reps.iter().enumerate() {
            if r >= g.order() {
                return Err(Error::NotTransversal("rep out of range".into()));
            }
            let c = subgroup.coset_of(r);
            if rep_of_coset[c] != usize::MAX {
                return Err(Error::NotTransversal(format!("two reps in coset of {}", g.label(r))));
            }
            rep_of_coset[c] = i;
        }
        let factor: Vec<(usize, usize)> = g
            .elements()
            .map(|a| {
                let r = rep_of_coset[subgroup.coset_of(a)];
                let x = g.mul(g.inv(reps[r]), a);
                (r, subgroup.position(x).expect("r⁻¹g lies in K"))
            })
            .collect();
        let nk = subgroup.order();
        let nr = reps.len();
        let mut act = vec![vec![0; nr]; nk];
        let mut back = vec![vec![0; nr]; nk];
        for x in 0..nk {
            for r in 0..nr {
                let (a, b) = factor[g.mul(subgroup.element(x), reps[r])];
                act[x][r] = a;
                back[x][r] = b;
            }
        }
        let mut tau = vec![vec![0; nr]; nr];
        let mut dot = vec![vec![0; nr]; nr];
        for r in 0..nr {
            for s in 0..nr {
                let (a, b) = factor[g.mul(reps[r], reps[s])];
                dot[r][s] = a;
                tau[r][s] = b;
            }
        }
        let rinv: Vec<usize> = (0..nr)
            .map(|r| (0..nr).find(|&s| dot[r][s] == 0).expect("left division gives a right inverse"))
            .collect();
        let mut hit = vec![false; nr];
        rinv.iter().for_each(|&s| hit[s] = true);
        let regular = hit.iter().all(|&h| h);
        Ok(Transversal { group, subgroup, reps: reps.to_vec(), act, back, tau, dot, rinv, regular, factor, rep_of_coset })
    }

    /// Transversal taking the smallest element index in each coset.
    pub fn smallest(group: Arc<FiniteGroup>, subgroup: Subgroup) -> Result<Self> {
        let mut reps: Vec<usize> = subgroup.cosets().iter().map(|c| c[0]).collect();
        reps.sort_unstable();
        Self::new(group, subgroup, &reps)
    }

    pub fn nr(&self) -> usize {
        self.reps.len()
    }

    pub fn nk(&self) -> usize {
        self.subgroup.order()
    }

    /// Element index of the K-member at a position.
    pub fn k_elem(&self, x: usize) -> usize {
        self.subgroup.element(x)
    }

    pub fn r_elem(&self, r: usize) -> usize {
        self.reps[r]
    }

    /// Factor an element as (R-position, K-position).
    pub fn factor(&self, g: usize) -> (usize, usize) {
        self.factor[g]
    }

    /// R-position of the representative of the coset gK.
    pub fn rep_of(&self, g: usize) -> usize {
        self.rep_of_coset[self.subgroup.coset_of(g)]
    }

    pub fn k_mul(&self, x: usize, y: usize) -> usize {
        self.subgroup.position(self.group.mul(self.k_elem(x), self.k_elem(y))).unwrap()
    }

    pub fn k_inv(&self, x: usize) -> usize {
        self.subgroup.position(self.group.inv(self.k_elem(x))).unwrap()
    }

    pub fn r_label(&self, r: usize) -> &str {
        self.group.label(self.reps[r])
    }

    pub fn k_label(&self, x: usize) -> &str {
        self.group.label(self.k_elem(x))
    }

    pub fn find_r(&self, label: &str) -> Option<usize> {
        let g = self.group.find(label)?;
        self.reps.iter().position(|&r| r == g)
    }

    pub fn find_k(&self, label: &str) -> Option<usize> {
        self.subgroup.position(self.group.find(label)?)
    }

    /// s\t: the unique r with s·r = t, via s^R·(τ(s,s^R)⁻¹▷t).
    pub fn left_divide(&self, s: usize, t: usize) -> usize {
        let sr = self.rinv[s];
        let ti = self.k_inv(self.tau[s][sr]);
        let r = self.dot[sr][self.act[ti][t]];
        assert_eq!(self.dot[s][r], t, "left division postcondition");
        r
    }

    /// Exhaustive check of the matched-pair identities and the inverse identities.
    pub fn verify_matched_pair(&self) -> Report {
        let mut rep = Report::new("matched-pair");
        let (nk, nr) = (self.nk(), self.nr());
        let g = &self.group;
        let kl = |x: usize| self.k_label(x).to_string();
        let rl = |r: usize| self.r_label(r).to_string();

        let mut w = None;
        'f: for x in 0..nk {
            for r in 0..nr {
                let lhs = g.mul(self.k_elem(x), self.reps[r]);
                let rhs = g.mul(self.reps[self.act[x][r]], self.k_elem(self.back[x][r]));
                if lhs != rhs {
                    w = Some(format!("x={} r={}", kl(x), rl(r)));
                    break 'f;
                }
            }
        }
        rep.record("xr = (x▷r)(x◁r)", w, 0.0);

        let mut w = None;
        'f: for r in 0..nr {
            for s in 0..nr {
                let lhs = g.mul(self.reps[r], self.reps[s]);
                let rhs = g.mul(self.reps[self.dot[r][s]], self.k_elem(self.tau[r][s]));
                if lhs != rhs {
                    w = Some(format!("r={} s={}", rl(r), rl(s)));
                    break 'f;
                }
            }
        }
        rep.record("rs = (r·s)τ(r,s)", w, 0.0);

        let mut w = None;
        'f: for x in 0..nk {
            for y in 0..nk {
                for r in 0..nr {
                    if self.act[self.k_mul(x, y)][r] != self.act[x][self.act[y][r]] {
                        w = Some(format!("x={} y={} r={}", kl(x), kl(y), rl(r)));
                        break 'f;
                    }
                    let lhs = self.back[self.k_mul(x, y)][r];
                    let rhs = self.k_mul(self.back[x][self.act[y][r]], self.back[y][r]);
                    if lhs != rhs {
                        w = Some(format!("◁ x={} y={} r={}", kl(x), kl(y), rl(r)));
                        break 'f;
                    }
                }
            }
        }
        rep.record("(xy)▷r = x▷(y▷r) and (xy)◁r = (x◁(y▷r))(y◁r)", w, 0.0);

        let mut w_act = None;
        let mut w_back = None;
        for x in 0..nk {
            for r in 0..nr {
                for s in 0..nr {
                    let xr = self.act[x][r];
                    let xlr = self.back[x][r];
                    let lhs = self.act[x][self.dot[r][s]];
                    let rhs = self.dot[xr][self.act[xlr][s]];
                    if lhs != rhs && w_act.is_none() {
                        w_act = Some(format!("x={} r={} s={}", kl(x), rl(r), rl(s)));
                    }
                    // (x◁r)◁s = τ(x▷r,(x◁r)▷s)⁻¹ (x◁(r·s)) τ(r,s)
                    let lhs = self.back[xlr][s];
                    let t1 = self.k_inv(self.tau[xr][self.act[xlr][s]]);
                    let rhs = self.k_mul(self.k_mul(t1, self.back[x][self.dot[r][s]]), self.tau[r][s]);
                    if lhs != rhs && w_back.is_none() {
                        w_back = Some(format!("x={} r={} s={}", kl(x), rl(r), rl(s)));
                    }
                }
            }
        }
        rep.record("x▷(r·s) = (x▷r)·((x◁r)▷s)", w_act, 0.0);
        rep.record("(x◁r)◁s = τ(x▷r,(x◁r)▷s)⁻¹(x◁(r·s))τ(r,s)", w_back, 0.0);

        let mut w_coc = None;
        let mut w_assoc = None;
        for r in 0..nr {
            for s in 0..nr {
                let trs = self.tau[r][s];
                for t in 0..nr {
                    let lhs = self.k_mul(self.tau[r][self.dot[s][t]], self.tau[s][t]);
                    let rhs = self.k_mul(self.tau[self.dot[r][s]][self.act[trs][t]], self.back[trs][t]);
                    if lhs != rhs && w_coc.is_none() {
                        w_coc = Some(format!("r={} s={} t={}", rl(r), rl(s), rl(t)));
                    }
                    let lhs = self.dot[r][self.dot[s][t]];
                    let rhs = self.dot[self.dot[r][s]][self.act[trs][t]];
                    if lhs != rhs && w_assoc.is_none() {
                        w_assoc = Some(format!("r={} s={} t={}", rl(r), rl(s), rl(t)));
                    }
                }
            }
        }
        rep.record("τ(r,s·t)τ(s,t) = τ(r·s,τ(r,s)▷t)(τ(r,s)◁t)", w_coc, 0.0);
        rep.record("r·(s·t) = (r·s)·(τ(r,s)▷t)", w_assoc, 0.0);

        let mut w = None;
        for r in 0..nr {
            let unit_ok = self.dot[0][r] == r
                && self.dot[r][0] == r
                && self.tau[0][r] == 0
                && self.tau[r][0] == 0;
            if !unit_ok && w.is_none() {
                w = Some(format!("r={}", rl(r)));
            }
        }
        for x in 0..nk {
            if (self.act[x][0] != 0 || self.back[x][0] != x) && w.is_none() {
                w = Some(format!("x={}", kl(x)));
            }
        }
        for r in 0..nr {
            if (self.act[0][r] != r || self.back[0][r] != 0) && w.is_none() {
                w = Some(format!("e acting on r={}", rl(r)));
            }
        }
        rep.record("unit laws", w, 0.0);

        let (mut w1, mut w2, mut w3, mut w4) = (None, None, None, None);
        for r in 0..nr {
            let rr = self.rinv[r];
            let rrr = self.rinv[rr];
            let t_inv = self.k_inv(self.tau[r][rr]);
            if self.back[t_inv][r] != self.k_inv(self.tau[rr][rrr]) && w3.is_none() {
                w3 = Some(format!("r={}", rl(r)));
            }
            if self.act[t_inv][r] != rrr && w4.is_none() {
                w4 = Some(format!("r={}", rl(r)));
            }
            for x in 0..nk {
                let xr = self.act[x][r];
                if self.k_inv(self.back[x][r]) != self.back[self.k_inv(x)][xr] && w1.is_none() {
                    w1 = Some(format!("x={} r={}", kl(x), rl(r)));
                }
                if self.rinv[xr] != self.act[self.back[x][r]][rr] && w2.is_none() {
                    w2 = Some(format!("x={} r={}", kl(x), rl(r)));
                }
            }
        }
        rep.record("(x◁r)⁻¹ = x⁻¹◁(x▷r)", w1, 0.0);
        rep.record("(x▷r)^R = (x◁r)▷r^R", w2, 0.0);
        rep.record("τ(r,r^R)⁻¹◁r = τ(r^R,r^RR)⁻¹", w3, 0.0);
        rep.record("τ(r,r^R)⁻¹▷r = r^RR", w4, 0.0);

        let image: std::collections::BTreeSet<usize> = self.rinv.iter().copied().collect();
        let w = if self.regular == (image.len() == nr) { None } else { Some("regular flag".into()) };
        rep.record("regular ⟺ ( )^R bijective", w, 0.0);
        rep
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_core::catalog::s3;

    fn s3_td(reps: &[&str]) -> Transversal {
        let g = Arc::new(s3());
        let k = Subgroup::new(g.clone(), &[0, g.find("u").unwrap()]).unwrap();
        let reps: Vec<usize> = reps.iter().map(|l| g.find(l).unwrap()).collect();
        Transversal::new(g, k, &reps).unwrap()
    }

    #[test]
    fn standard_s3_transversal() {
        let td = s3_td(&["e", "uv", "vu"]);
        assert!(td.tau.iter().flatten().all(|&t| t == 0));
        assert!(td.back.iter().enumerate().all(|(x, row)| row.iter().all(|&b| b == x)));
        let u = td.find_k("u").unwrap();
        assert_eq!(td.act[u][td.find_r("uv").unwrap()], td.find_r("vu").unwrap());
        assert!(td.verify_matched_pair().all_pass());
    }

    #[test]
    fn second_s3_transversal() {
        let td = s3_td(&["e", "w", "v"]);
        let (v, w, u) = (td.find_r("v").unwrap(), td.find_r("w").unwrap(), td.find_k("u").unwrap());
        assert_eq!(td.tau[v][w], u);
        assert_eq!(td.tau[w][v], u);
        assert_eq!(td.act[u][v], w);
        assert_eq!(td.dot[v][v], 0);
        assert_eq!(td.dot[w][w], 0);
        assert!(td.regular);
        assert_eq!(td.left_divide(v, w), w);
    }

    #[test]
    fn third_s3_transversal_not_regular() {
        let td = s3_td(&["e", "uv", "v"]);
        let (v, uv) = (td.find_r("v").unwrap(), td.find_r("uv").unwrap());
        assert_eq!(td.rinv[v], v);
        assert_eq!(td.rinv[uv], v);
        assert!(!td.regular);
        assert!(td.verify_matched_pair().all_pass());
    }

    #[test]
    fn rejects_non_transversal() {
        let g = Arc::new(s3());
        let k = Subgroup::new(g.clone(), &[0, g.find("u").unwrap()]).unwrap();
        let bad = [0, g.find("w").unwrap(), g.find("uv").unwrap()];
        assert!(Transversal::new(g.clone(), k.clone(), &bad).is_err());
        assert!(Transversal::new(g, k, &[3, 4, 5]).is_err());
    }

    #[test]
    fn corrupted_cocycle_is_caught() {
        let mut td = s3_td(&["e", "w", "v"]);
        let (v, w) = (td.find_r("v").unwrap(), td.find_r("w").unwrap());
        td.tau[v][w] = 0;
        let rep = td.verify_matched_pair();
        assert!(!rep.all_pass());
        assert!(rep.failures().any(|c| c.witness.is_some()));
    }
}
