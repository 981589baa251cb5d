//! Explicit unitary matrix irreps.
//!
//! One-dimensional irreps come straight from the character table. S3 uses the
//! pinned basis π(u)=σ3, π(v)=(√3σ1−σ3)/2. Everything else is cut out of the
//! regular representation: project onto the isotypic component, then split it
//! with a random Hermitian element of the commuting right action.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use super::{CharacterTable, FiniteGroup};
use crate::{Error, Result, C64};

pub type Mat = DMatrix<C64>;

#[derive(Debug, Clone)]
pub struct Irrep {
    pub dim: usize,
    /// One matrix per group element.
    pub mats: Vec<Mat>,
}

impl Irrep {
    pub fn character(&self, g: usize) -> C64 {
        self.mats[g].trace()
    }

    pub fn entry(&self, g: usize, i: usize, j: usize) -> C64 {
        self.mats[g][(i, j)]
    }

    /// Max residual of the homomorphism and unitarity conditions.
    pub fn residual(&self, g: &FiniteGroup) -> f64 {
        let mut worst = 0f64;
        let id = Mat::identity(self.dim, self.dim);
        for a in g.elements() {
            worst = worst.max((&self.mats[a] * self.mats[a].adjoint() - &id).norm());
            for b in g.elements() {
                let d = &self.mats[a] * &self.mats[b] - &self.mats[g.mul(a, b)];
                worst = worst.max(d.norm());
            }
        }
        worst
    }
}

/// Matrix irreps in character-table order.
pub fn matrix_irreps(g: &FiniteGroup, table: &CharacterTable) -> Result<Vec<Irrep>> {
    let mut out = Vec::with_capacity(table.len());
    for i in 0..table.len() {
        let d = table.dims[i];
        let irrep = if d == 1 {
            Irrep {
                dim: 1,
                mats: g.elements().map(|a| Mat::from_element(1, 1, table.chi(i, a))).collect(),
            }
        } else if g.name() == Some("s3") && d == 2 {
            s3_two_dim(g)
        } else {
            numeric_irrep(g, table, i)?
        };
        check(g, table, i, &irrep)?;
        out.push(irrep);
    }
    Ok(out)
}

/// Load irreps from `{"irreps": [{"dim": d, "matrices": {label: [[re,im],...]}}]}`,
/// matrices given row-major. Each is validated and matched to a character row.
pub fn irreps_from_json(g: &FiniteGroup, table: &CharacterTable, text: &str) -> Result<Vec<Irrep>> {
    #[derive(Deserialize)]
    struct File {
        irreps: Vec<Entry>,
    }
    #[derive(Deserialize)]
    struct Entry {
        dim: usize,
        matrices: std::collections::BTreeMap<String, Vec<[f64; 2]>>,
    }
    let f: File = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    let mut slots: Vec<Option<Irrep>> = vec![None; table.len()];
    for e in f.irreps {
        let mut mats = vec![Mat::zeros(e.dim, e.dim); g.order()];
        let mut seen = vec![false; g.order()];
        for (label, vals) in &e.matrices {
            let a = g.find(label).ok_or_else(|| Error::Config(format!("unknown element {label}")))?;
            if vals.len() != e.dim * e.dim {
                return Err(Error::Config(format!("matrix for {label} has wrong size")));
            }
            mats[a] = Mat::from_fn(e.dim, e.dim, |r, c| {
                let [re, im] = vals[r * e.dim + c];
                C64::new(re, im)
            });
            seen[a] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Config("irrep file misses elements".into()));
        }
        let irrep = Irrep { dim: e.dim, mats };
        if irrep.residual(g) > crate::TOL {
            return Err(Error::Config("supplied matrices fail the homomorphism check".into()));
        }
        let i = (0..table.len())
            .find(|&i| g.elements().all(|a| (irrep.character(a) - table.chi(i, a)).norm() < 1e-8))
            .ok_or_else(|| Error::Config("supplied matrices are not irreducible".into()))?;
        slots[i] = Some(irrep);
    }
    slots
        .into_iter()
        .enumerate()
        .map(|(i, s)| s.ok_or_else(|| Error::Config(format!("irrep {i} missing from file"))))
        .collect()
}

fn check(g: &FiniteGroup, table: &CharacterTable, i: usize, irrep: &Irrep) -> Result<()> {
    let r = irrep.residual(g);
    if r > crate::TOL {
        return Err(Error::Numeric(format!("irrep {i} homomorphism residual {r:e}")));
    }
    for a in g.elements() {
        if (irrep.character(a) - table.chi(i, a)).norm() > 1e-8 {
            return Err(Error::Numeric(format!("irrep {i} character mismatch")));
        }
    }
    Ok(())
}

fn s3_two_dim(g: &FiniteGroup) -> Irrep {
    let s3 = 3f64.sqrt();
    let c = |x: f64| C64::new(x, 0.0);
    let u = Mat::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)]);
    let v = Mat::from_row_slice(2, 2, &[c(-0.5), c(s3 / 2.0), c(s3 / 2.0), c(0.5)]);
    let find = |l: &str| g.find(l).expect("s3 label");
    let mut mats = vec![Mat::identity(2, 2); 6];
    mats[find("u")] = u.clone();
    mats[find("v")] = v.clone();
    mats[find("w")] = &u * &v * &u;
    mats[find("uv")] = &u * &v;
    mats[find("vu")] = &v * &u;
    Irrep { dim: 2, mats }
}

fn numeric_irrep(g: &FiniteGroup, table: &CharacterTable, i: usize) -> Result<Irrep> {
    let n = g.order();
    let d = table.dims[i];
    // Left regular: L_a e_b = e_{ab}; right regular: R_a e_b = e_{b a⁻¹}.
    let left = |a: usize| Mat::from_fn(n, n, |r, c| if g.mul(a, c) == r { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) });
    let right = |a: usize| {
        let ai = g.inv(a);
        Mat::from_fn(n, n, |r, c| if g.mul(c, ai) == r { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
    };
    let mut proj = Mat::zeros(n, n);
    for a in g.elements() {
        proj += left(a) * table.chi(i, a).conj();
    }
    proj *= C64::new(d as f64 / n as f64, 0.0);
    let pe = proj.clone().symmetric_eigen();
    let cols: Vec<usize> = (0..n).filter(|&k| (pe.eigenvalues[k] - 1.0).abs() < 1e-6).collect();
    if cols.len() != d * d {
        return Err(Error::Numeric(format!("isotypic component has dimension {}", cols.len())));
    }
    let q = Mat::from_fn(n, d * d, |r, c| pe.eigenvectors[(r, cols[c])]);
    for attempt in 0..10u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(0x1_2e9 + attempt);
        let mut h = Mat::zeros(n, n);
        for a in g.elements() {
            let ai = g.inv(a);
            if ai < a {
                continue;
            }
            let c = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let ra = right(a);
            if ai == a {
                h += ra * C64::new(c.re, 0.0);
            } else {
                h += &ra * c + ra.adjoint() * c.conj();
            }
        }
        let hq = q.adjoint() * h * &q;
        let e = hq.symmetric_eigen();
        let mut order: Vec<usize> = (0..d * d).collect();
        order.sort_by(|&x, &y| e.eigenvalues[x].partial_cmp(&e.eigenvalues[y]).unwrap());
        let lam0 = e.eigenvalues[order[0]];
        let cluster: Vec<usize> = order.iter().copied().filter(|&k| (e.eigenvalues[k] - lam0).abs() < 1e-7).collect();
        if cluster.len() != d {
            continue;
        }
        let b = &q * Mat::from_fn(d * d, d, |r, c| e.eigenvectors[(r, cluster[c])]);
        let mats: Vec<Mat> = g.elements().map(|a| b.adjoint() * left(a) * &b).collect();
        return Ok(Irrep { dim: d, mats });
    }
    Err(Error::Numeric("could not split isotypic component".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_core::catalog::s3;

    #[test]
    fn z2_and_z4_irreps() {
        let g = FiniteGroup::cyclic(4).unwrap();
        let t = CharacterTable::new(&g).unwrap();
        let irr = matrix_irreps(&g, &t).unwrap();
        assert_eq!(irr.len(), 4);
        // Each irrep sends the generator to a fourth root of unity.
        for r in &irr {
            assert!((r.mats[1][(0, 0)].powu(4) - C64::new(1.0, 0.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn s3_pinned_basis() {
        let g = s3();
        let t = CharacterTable::new(&g).unwrap();
        let irr = matrix_irreps(&g, &t).unwrap();
        let u = &irr[2].mats[g.find("u").unwrap()];
        assert!((u[(0, 0)] - C64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((u[(1, 1)] + C64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn numeric_irreps_for_s4_and_q8() {
        for g in [FiniteGroup::symmetric(4).unwrap(), crate::group_core::catalog::quaternion()] {
            let t = CharacterTable::new(&g).unwrap();
            let irr = matrix_irreps(&g, &t).unwrap();
            assert!(irr.iter().all(|r| r.residual(&g) < 1e-9));
        }
    }

    #[test]
    fn json_irreps_validated() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let t = CharacterTable::new(&g).unwrap();
        let ok = r#"{"irreps": [{"dim":1,"matrices":{"0":[[1,0]],"1":[[1,0]]}},
                                {"dim":1,"matrices":{"0":[[1,0]],"1":[[-1,0]]}}]}"#;
        assert_eq!(irreps_from_json(&g, &t, ok).unwrap().len(), 2);
        let bad = r#"{"irreps": [{"dim":1,"matrices":{"0":[[1,0]],"1":[[2,0]]}}]}"#;
        assert!(irreps_from_json(&g, &t, bad).is_err());
    }
}
