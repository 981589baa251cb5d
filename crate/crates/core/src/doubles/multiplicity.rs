//! Multiplicities n^i_a of boundary irreps V_i in the restriction of bulk irreps W_a.
//!
//! Two routes are always evaluated and cross-checked: the Frobenius form
//! (|G|/(dim V_i dim W_a)) ∫ i(P_i) P_a, and a character sum over the groups
//! K^{r,c} = {x∈K : x▷r = r, xcx⁻¹ = c}.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use super::dg::{BulkLabels, DgLabel, DoubleAlgebra};
use super::elem::Elem;
use super::xi::{BoundaryLabels, XiAlgebra, XiLabel};
use crate::group_core::{CharacterTable, Subgroup, Transversal};
use crate::{Error, Result, C64};

const ROUND_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecialCase {
    /// O = {e}, C = {e}: n = ⟨ρ, π|_K⟩.
    Chargeon,
    /// ρ and π trivial.
    Fluxion,
    /// (O,ρ) = ({e},1).
    TrivialVi,
    /// (C,π) = ({e},1).
    TrivialWa,
}

impl std::str::FromStr for SpecialCase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chargeon" => Ok(Self::Chargeon),
            "fluxion" => Ok(Self::Fluxion),
            "trivial-vi" | "trivial-Vi" => Ok(Self::TrivialVi),
            "trivial-wa" | "trivial-Wa" => Ok(Self::TrivialWa),
            _ => Err(Error::Config(format!("unknown special case {s}"))),
        }
    }
}

/// Everything needed to evaluate multiplicities for one transversal.
pub struct Multiplicities {
    pub td: Arc<Transversal>,
    pub dg: DoubleAlgebra,
    pub xi: XiAlgebra,
    pub bulk: BulkLabels,
    pub boundary: BoundaryLabels,
    dg_proj: Vec<Elem>,
    xi_proj_img: Vec<Elem>,
    krc_tables: Mutex<HashMap<Vec<usize>, Arc<(Subgroup, CharacterTable)>>>,
}

impl Multiplicities {
    pub fn new(td: Arc<Transversal>) -> Result<Self> {
        let dg = DoubleAlgebra::new(td.group.clone());
        let xi = XiAlgebra::new(td.clone());
        let bulk = BulkLabels::new(td.group.clone())?;
        let boundary = BoundaryLabels::new(&td)?;
        let dg_proj = bulk.labels().iter().map(|&l| dg.projector(&bulk, l)).collect();
        let xi_proj_img = boundary.labels().iter().map(|&l| xi.include(&dg, &xi.projector(&boundary, l))).collect();
        Ok(Multiplicities { td, dg, xi, bulk, boundary, dg_proj, xi_proj_img, krc_tables: Mutex::new(HashMap::new()) })
    }

    fn dg_index(&self, a: DgLabel) -> usize {
        self.bulk.labels().iter().position(|&l| l == a).expect("bulk label in range")
    }

    fn xi_index(&self, i: XiLabel) -> usize {
        self.boundary.labels().iter().position(|&l| l == i).expect("boundary label in range")
    }

    /// (|G|/(dim V_i dim W_a)) ∫ i(P_i) P_a.
    pub fn frobenius_route(&self, i: XiLabel, a: DgLabel) -> C64 {
        let prod = self.dg.mul(&self.xi_proj_img[self.xi_index(i)], &self.dg_proj[self.dg_index(a)]);
        let norm = self.td.group.order() as f64 / (self.boundary.dim(i) * self.bulk.dim(a)) as f64;
        self.dg.frobenius_form(&prod) * norm
    }

    /// Whether i(P_i)P_a vanishes identically.
    pub fn product_vanishes(&self, i: XiLabel, a: DgLabel) -> bool {
        let prod = self.dg.mul(&self.xi_proj_img[self.xi_index(i)], &self.dg_proj[self.dg_index(a)]);
        let vanishes = prod.terms().all(|(_, c)| c.norm() < crate::TOL);
        vanishes
    }

    fn krc(&self, members: Vec<usize>) -> Result<Arc<(Subgroup, CharacterTable)>> {
        let mut cache = self.krc_tables.lock().expect("cache lock");
        if let Some(t) = cache.get(&members) {
            return Ok(t.clone());
        }
        let sub = Subgroup::new(self.td.group.clone(), &members)?;
        let table = CharacterTable::new(&sub.as_group())?;
        let entry = Arc::new((sub, table));
        cache.insert(members, entry.clone());
        Ok(entry)
    }

    /// Character-sum route over pairs r∈O, c∈C with r⁻¹c∈K.
    pub fn character_route(&self, i: XiLabel, a: DgLabel) -> Result<C64> {
        let td = &self.td;
        let g = &td.group;
        let od = &self.boundary.orbits;
        let cd = &self.bulk.conj;
        let orbit = &od.orbits[i.orbit];
        let class = &cd.classes[a.class];
        let mut total = C64::new(0.0, 0.0);
        for &r in orbit {
            let re = td.r_elem(r);
            let kap = td.k_elem(od.kappa[r]);
            for &c in class {
                if !td.subgroup.contains(g.mul(g.inv(re), c)) {
                    continue;
                }
                let q = cd.q[c];
                let members: Vec<usize> = (0..td.nk())
                    .filter(|&x| td.act[x][r] == r)
                    .map(|x| td.k_elem(x))
                    .filter(|&x| g.mul(x, c) == g.mul(c, x))
                    .collect();
                let entry = self.krc(members)?;
                let (sub, table) = (&entry.0, &entry.1);
                // ρ̃(m) = ρ(κ_r⁻¹ m κ_r), π̃(m) = π(q_c⁻¹ m q_c).
                let rho = |m: usize| self.boundary.chi(i, g.conj(g.inv(kap), m));
                let pi = |m: usize| self.bulk.chi(a, g.conj(g.inv(q), m));
                let mut s = C64::new(0.0, 0.0);
                for t in 0..table.len() {
                    let nr = table.inner(t, |pos| rho(sub.element(pos)));
                    let np = table.inner(t, |pos| pi(sub.element(pos)));
                    s += nr * np;
                }
                total += s * sub.order() as f64;
            }
        }
        let denom = orbit.len() * class.len() * od.stabilizers[i.orbit].order() * cd.centralizers[a.class].order();
        Ok(total * (g.order() as f64 / denom as f64))
    }

    /// The integer multiplicity, after checking both routes agree.
    pub fn multiplicity(&self, i: XiLabel, a: DgLabel) -> Result<usize> {
        let f = self.frobenius_route(i, a);
        let c = self.character_route(i, a)?;
        if (f - c).norm() > ROUND_TOL {
            return Err(Error::Numeric(format!(
                "multiplicity routes disagree for {} in {}: {f} vs {c}",
                self.boundary.name(&self.td, i),
                self.bulk.name(a)
            )));
        }
        to_count(f)
    }

    /// Closed forms valid on subsets of labels.
    pub fn special(&self, case: SpecialCase, i: XiLabel, a: DgLabel) -> Result<usize> {
        let td = &self.td;
        let g = &td.group;
        let od = &self.boundary.orbits;
        let cd = &self.bulk.conj;
        let e_orbit = od.orbit_of[0];
        let trivial_vi = i.orbit == e_orbit && i.irrep == 0;
        let trivial_wa = a.class == cd.class_of[0] && a.irrep == 0;
        let not_applicable = || Err(Error::Precondition(format!("{case:?} does not apply to these labels")));
        let val = match case {
            SpecialCase::Chargeon => {
                if i.orbit != e_orbit || a.class != cd.class_of[0] {
                    return not_applicable();
                }
                let k = &td.subgroup;
                let ktab = &self.boundary.tables[e_orbit];
                // K^{e} = K, so ρ is an irrep of K itself.
                ktab.inner(i.irrep, |pos| self.bulk.chi(a, k.element(pos)))
            }
            SpecialCase::Fluxion => {
                if i.irrep != 0 || a.irrep != 0 {
                    return not_applicable();
                }
                let orbit = &od.orbits[i.orbit];
                let class = &cd.classes[a.class];
                let mut s = 0usize;
                for &r in orbit {
                    let re = td.r_elem(r);
                    for &c in class {
                        if td.subgroup.contains(g.mul(g.inv(re), c)) {
                            s += (0..td.nk())
                                .filter(|&x| td.act[x][r] == r && g.mul(td.k_elem(x), c) == g.mul(c, td.k_elem(x)))
                                .count();
                        }
                    }
                }
                let denom = orbit.len() * class.len() * od.stabilizers[i.orbit].order() * cd.centralizers[a.class].order();
                C64::new((g.order() * s) as f64 / denom as f64, 0.0)
            }
            SpecialCase::TrivialVi => {
                if !trivial_vi {
                    return not_applicable();
                }
                let class = &cd.classes[a.class];
                let mut s = C64::new(0.0, 0.0);
                for &c in class.iter().filter(|&&c| td.subgroup.contains(c)) {
                    let q = cd.q[c];
                    let kc: Vec<usize> = td.subgroup.members().iter().copied().filter(|&x| g.mul(x, c) == g.mul(c, x)).collect();
                    // |K^c| n_{1,π̃} = Σ_{m∈K^c} χ_π(q⁻¹ m q).
                    s += kc.iter().map(|&m| self.bulk.chi(a, g.conj(g.inv(q), m))).sum::<C64>();
                }
                let denom = class.len() * td.nk() * cd.centralizers[a.class].order();
                s * (g.order() as f64 / denom as f64)
            }
            SpecialCase::TrivialWa => {
                if !trivial_wa {
                    return not_applicable();
                }
                C64::new(if trivial_vi { 1.0 } else { 0.0 }, 0.0)
            }
        };
        to_count(val)
    }

    /// i*(W_a) as a list of (V_i, n^i_a), checking Σ n dim V_i = dim W_a.
    pub fn restriction_decomposition(&self, a: DgLabel) -> Result<Vec<(XiLabel, usize)>> {
        let mut out = Vec::new();
        let mut dim = 0;
        for i in self.boundary.labels() {
            let n = self.multiplicity(i, a)?;
            if n > 0 {
                dim += n * self.boundary.dim(i);
                out.push((i, n));
            }
        }
        if dim != self.bulk.dim(a) {
            return Err(Error::Numeric(format!(
                "restriction of {} has dimension {dim}, expected {}",
                self.bulk.name(a),
                self.bulk.dim(a)
            )));
        }
        Ok(out)
    }

    pub fn table(&self) -> Result<MultiplicityTable> {
        let rows: Vec<XiLabel> = self.boundary.labels();
        let cols: Vec<DgLabel> = self.bulk.labels();
        let mut entries = vec![vec![0usize; cols.len()]; rows.len()];
        for (ri, &i) in rows.iter().enumerate() {
            for (ci, &a) in cols.iter().enumerate() {
                entries[ri][ci] = self.multiplicity(i, a)?;
            }
        }
        for &a in &cols {
            self.restriction_decomposition(a)?;
        }
        Ok(MultiplicityTable {
            group: self.td.group.name().unwrap_or("G").to_string(),
            transversal: self.td.reps.iter().map(|&r| self.td.group.label(r).to_string()).collect(),
            row_labels: rows.iter().map(|&i| self.boundary.name(&self.td, i)).collect(),
            col_labels: cols.iter().map(|&a| self.bulk.name(a)).collect(),
            rows,
            cols,
            entries,
        })
    }
}

fn to_count(v: C64) -> Result<usize> {
    let r = v.re.round();
    if (v - C64::new(r, 0.0)).norm() > ROUND_TOL || r < 0.0 {
        return Err(Error::Numeric(format!("multiplicity {v} is not a nonnegative integer")));
    }
    Ok(r as usize)
}

#[derive(Debug, Clone, Serialize)]
pub struct MultiplicityTable {
    pub group: String,
    pub transversal: Vec<String>,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub rows: Vec<XiLabel>,
    pub cols: Vec<DgLabel>,
    pub entries: Vec<Vec<usize>>,
}

impl MultiplicityTable {
    pub fn to_csv(&self) -> String {
        let mut s = format!("xi\\dg,{}\n", self.col_labels.join(","));
        for (label, row) in self.row_labels.iter().zip(&self.entries) {
            let vals: Vec<String> = row.iter().map(|n| n.to_string()).collect();
            s.push_str(&format!("{label},{}\n", vals.join(",")));
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_core::catalog::s3;

    fn s3_mult(reps: &[&str]) -> Multiplicities {
        let g = Arc::new(s3());
        let k = Subgroup::new(g.clone(), &[0, g.find("u").unwrap()]).unwrap();
        let reps: Vec<usize> = reps.iter().map(|l| g.find(l).unwrap()).collect();
        Multiplicities::new(Arc::new(Transversal::new(g, k, &reps).unwrap())).unwrap()
    }

    #[test]
    fn s3_table_csv() {
        let m = s3_mult(&["e", "uv", "vu"]);
        let t = m.table().unwrap();
        assert_eq!(t.entries, vec![
            vec![1, 0, 1, 1, 0, 0, 0, 0],
            vec![0, 1, 1, 0, 1, 0, 0, 0],
            vec![0, 0, 0, 1, 1, 1, 1, 1],
        ]);
        assert!(t.to_csv().starts_with("xi\\dg,e/0,e/1,e/2,u/0,u/1,uv/0,uv/1,uv/2\n"));
    }

    #[test]
    fn special_cases_agree() {
        let m = s3_mult(&["e", "w", "v"]);
        for i in m.boundary.labels() {
            for a in m.bulk.labels() {
                let n = m.multiplicity(i, a).unwrap();
                for case in [SpecialCase::Chargeon, SpecialCase::Fluxion, SpecialCase::TrivialVi, SpecialCase::TrivialWa] {
                    if let Ok(s) = m.special(case, i, a) {
                        assert_eq!(s, n, "{case:?}");
                    }
                }
            }
        }
    }
}
