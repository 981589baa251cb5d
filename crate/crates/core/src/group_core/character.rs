//! Numerical character tables.
//!
//! The class-sum structure constants give commuting normal matrices; a seeded
//! random Hermitian combination of them is diagonalised and its eigenvectors
//! are the (rescaled, conjugated) irreducible characters.

use std::cmp::Ordering;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::FiniteGroup;
use crate::{Error, Result, C64};

const SEED: u64 = 0x5eed_c4a2;
const ATTEMPTS: u64 = 10;

#[derive(Debug, Clone)]
pub struct CharacterTable {
    pub order: usize,
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    /// One character per irrep, evaluated on classes.
    pub rows: Vec<Vec<C64>>,
    pub dims: Vec<usize>,
}

impl CharacterTable {
    pub fn new(g: &FiniteGroup) -> Result<Self> {
        let n = g.order();
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for a in 0..n {
            if class_of[a] != usize::MAX {
                continue;
            }
            let mut cl: Vec<usize> = g.elements().map(|h| g.conj(h, a)).collect();
            cl.sort_unstable();
            cl.dedup();
            for &c in &cl {
                class_of[c] = classes.len();
            }
            classes.push(cl);
        }
        let m = classes.len();
        // a[i][j][k]: coefficient of C_k in C_i C_j.
        let mut a = vec![vec![vec![0f64; m]; m]; m];
        for i in 0..m {
            for j in 0..m {
                for &x in &classes[i] {
                    for &y in &classes[j] {
                        a[i][j][class_of[g.mul(x, y)]] += 1.0;
                    }
                }
                for k in 0..m {
                    a[i][j][k] /= classes[k].len() as f64;
                }
            }
        }
        let size: Vec<f64> = classes.iter().map(|c| c.len() as f64).collect();
        let normal: Vec<DMatrix<C64>> = (0..m)
            .map(|i| {
                DMatrix::from_fn(m, m, |k, j| C64::new(a[i][j][k] * (size[k] / size[j]).sqrt(), 0.0))
            })
            .collect();

        for attempt in 0..ATTEMPTS {
            let mut rng = ChaCha8Rng::seed_from_u64(SEED + attempt);
            let mut h = DMatrix::<C64>::zeros(m, m);
            for ni in &normal {
                let (l, mu): (f64, f64) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                let adj = ni.adjoint();
                h += (ni + &adj) * C64::new(l, 0.0) + (ni - &adj) * C64::new(0.0, mu);
            }
            let eig = h.symmetric_eigen();
            let mut rows = Vec::with_capacity(m);
            let mut ok = true;
            for col in 0..m {
                let u = eig.eigenvectors.column(col).into_owned();
                for ni in &normal {
                    let w = ni * &u;
                    let lam = u.dotc(&w);
                    if (w - &u * lam).norm() > 1e-8 {
                        ok = false;
                    }
                }
                let mut chi: Vec<C64> = (0..m).map(|k| u[k].conj() / size[k].sqrt()).collect();
                if chi[0].norm() < 1e-8 {
                    ok = false;
                    break;
                }
                let phase = chi[0].conj() / chi[0].norm();
                chi.iter_mut().for_each(|c| *c *= phase);
                let norm2: f64 = (0..m).map(|k| size[k] * chi[k].norm_sqr()).sum();
                let scale = (n as f64 / norm2).sqrt();
                chi.iter_mut().for_each(|c| *c *= scale);
                rows.push(chi);
            }
            if !ok {
                continue;
            }
            let dims: Vec<usize> = rows.iter().map(|r| r[0].re.round() as usize).collect();
            for (r, &d) in rows.iter_mut().zip(&dims) {
                if (r[0].re - d as f64).abs() > 1e-6 {
                    return Err(Error::Numeric("non-integral character degree".into()));
                }
                for c in r.iter_mut() {
                    *c = clean(*c);
                }
            }
            let mut idx: Vec<usize> = (0..m).collect();
            idx.sort_by(|&x, &y| dims[x].cmp(&dims[y]).then_with(|| lex_desc(&rows[x], &rows[y])));
            let table = CharacterTable {
                order: n,
                classes: classes.clone(),
                class_of: class_of.clone(),
                rows: idx.iter().map(|&i| rows[i].clone()).collect(),
                dims: idx.iter().map(|&i| dims[i]).collect(),
            };
            table.check_orthogonality()?;
            return Ok(table);
        }
        Err(Error::Numeric(format!("degenerate class-sum combination after {ATTEMPTS} attempts")))
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// χ_i(g) for an element g.
    pub fn chi(&self, irrep: usize, g: usize) -> C64 {
        self.rows[irrep][self.class_of[g]]
    }

    /// Index of the trivial irrep (always 0 after sorting).
    pub fn trivial(&self) -> usize {
        0
    }

    /// Max residual of both orthogonality relations.
    pub fn orthogonality_residual(&self) -> f64 {
        let m = self.rows.len();
        let size: Vec<f64> = self.classes.iter().map(|c| c.len() as f64).collect();
        let mut worst = 0f64;
        for i in 0..m {
            for j in 0..m {
                let s: C64 = (0..m).map(|k| self.rows[i][k] * self.rows[j][k].conj() * size[k]).sum();
                let want = if i == j { self.order as f64 } else { 0.0 };
                worst = worst.max((s - want).norm());
                let s: C64 = (0..m).map(|t| self.rows[t][i] * self.rows[t][j].conj()).sum();
                let want = if i == j { self.order as f64 / size[i] } else { 0.0 };
                worst = worst.max((s - want).norm());
            }
        }
        let d2: usize = self.dims.iter().map(|d| d * d).sum();
        if d2 != self.order {
            worst = worst.max(1.0);
        }
        worst
    }

    fn check_orthogonality(&self) -> Result<()> {
        let r = self.orthogonality_residual();
        if r > crate::TOL {
            return Err(Error::Numeric(format!("orthogonality residual {r:e}")));
        }
        Ok(())
    }

    /// Multiplicity ⟨χ_i, ψ⟩ of irrep i in a class function ψ given per element.
    pub fn inner(&self, irrep: usize, psi: impl Fn(usize) -> C64) -> C64 {
        let s: C64 = self.classes.iter().enumerate().map(|(k, cl)| {
            cl.iter().map(|&g| psi(g)).sum::<C64>() * self.rows[irrep][k].conj()
        }).sum();
        s / self.order as f64
    }
}

/// Snap values within 1e-12 of a round number or of zero.
fn clean(c: C64) -> C64 {
    let snap = |x: f64| if (x - x.round()).abs() < 1e-12 { x.round() } else { x };
    C64::new(snap(c.re), snap(c.im))
}

fn lex_desc(a: &[C64], b: &[C64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        for (p, q) in [(x.re, y.re), (x.im, y.im)] {
            if (p - q).abs() > 1e-9 {
                return q.partial_cmp(&p).unwrap();
            }
        }
    }
    Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_core::catalog::s3;

    fn close(a: C64, b: C64) -> bool {
        (a - b).norm() < 1e-9
    }

    #[test]
    fn z2_rows() {
        let t = CharacterTable::new(&FiniteGroup::cyclic(2).unwrap()).unwrap();
        assert!(close(t.rows[0][1], C64::new(1.0, 0.0)));
        assert!(close(t.rows[1][1], C64::new(-1.0, 0.0)));
    }

    #[test]
    fn s3_dims_and_w2() {
        let t = CharacterTable::new(&s3()).unwrap();
        assert_eq!(t.dims, vec![1, 1, 2]);
        let want = [2.0, 0.0, -1.0];
        for k in 0..3 {
            assert!(close(t.rows[2][k], C64::new(want[k], 0.0)));
        }
        assert!(close(t.rows[1][1], C64::new(-1.0, 0.0)));
    }

    #[test]
    fn z3_omega_order() {
        let t = CharacterTable::new(&FiniteGroup::cyclic(3).unwrap()).unwrap();
        let w = C64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        assert!(close(t.chi(1, 1), w));
        assert!(close(t.chi(2, 1), w * w));
    }

    #[test]
    fn larger_groups_are_orthogonal() {
        for g in [FiniteGroup::symmetric(4).unwrap(), FiniteGroup::symmetric(5).unwrap(), crate::group_core::catalog::quaternion()] {
            let t = CharacterTable::new(&g).unwrap();
            assert!(t.orthogonality_residual() < 1e-9);
        }
    }
}
