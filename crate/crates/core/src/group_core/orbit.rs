use super::{Subgroup, Transversal};

/// Orbits of K acting on R by ▷, with basepoints r0, lifts κ_r and stabilizers K^{r0}.
#[derive(Debug, Clone)]
pub struct OrbitData {
    /// Orbits as lists of R-positions, sorted by basepoint element index.
    pub orbits: Vec<Vec<usize>>,
    pub orbit_of: Vec<usize>,
    /// Basepoint R-position per orbit.
    pub base: Vec<usize>,
    /// `kappa[r]`: K-position with κ_r ▷ r0 = r.
    pub kappa: Vec<usize>,
    /// Stabilizer of the basepoint, as a subgroup of G.
    pub stabilizers: Vec<Subgroup>,
}

impl OrbitData {
    /// Basepoint = smallest element index in the orbit, κ_r = smallest K-position.
    pub fn new(td: &Transversal) -> Self {
        Self::with_choices(td, |orbit| *orbit.iter().min_by_key(|&&r| td.reps[r]).unwrap())
    }

    /// Orbit data with a caller-chosen basepoint per orbit.
    pub fn with_choices(td: &Transversal, choose: impl Fn(&[usize]) -> usize) -> Self {
        let nr = td.nr();
        let mut orbit_of = vec![usize::MAX; nr];
        let mut orbits = Vec::new();
        for r in 0..nr {
            if orbit_of[r] != usize::MAX {
                continue;
            }
            let mut o: Vec<usize> = (0..td.nk()).map(|x| td.act[x][r]).collect();
            o.sort_unstable();
            o.dedup();
            for &s in &o {
                orbit_of[s] = orbits.len();
            }
            orbits.push(o);
        }
        let mut base: Vec<usize> = orbits.iter().map(|o| choose(o)).collect();
        // Order orbits by basepoint element index.
        let mut order: Vec<usize> = (0..orbits.len()).collect();
        order.sort_by_key(|&i| td.reps[base[i]]);
        orbits = order.iter().map(|&i| orbits[i].clone()).collect();
        base = order.iter().map(|&i| base[i]).collect();
        for (i, o) in orbits.iter().enumerate() {
            for &s in o {
                orbit_of[s] = i;
            }
        }
        let mut kappa = vec![0; nr];
        for (i, o) in orbits.iter().enumerate() {
            for &r in o {
                kappa[r] = (0..td.nk()).find(|&x| td.act[x][base[i]] == r).unwrap();
            }
        }
        let stabilizers = base
            .iter()
            .map(|&r0| {
                let m: Vec<usize> =
                    (0..td.nk()).filter(|&x| td.act[x][r0] == r0).map(|x| td.k_elem(x)).collect();
                Subgroup::new(td.group.clone(), &m).expect("stabilizer")
            })
            .collect();
        let od = OrbitData { orbits, orbit_of, base, kappa, stabilizers };
        od.assert_cocycle(td);
        od
    }

    /// ζ_r(x) = κ⁻¹_{x▷r} x κ_r as a G-element in K^{r0}.
    pub fn zeta(&self, td: &Transversal, r: usize, x: usize) -> usize {
        let g = &td.group;
        let xr = td.act[x][r];
        g.product([g.inv(td.k_elem(self.kappa[xr])), td.k_elem(x), td.k_elem(self.kappa[r])])
    }

    fn assert_cocycle(&self, td: &Transversal) {
        let g = &td.group;
        for r in 0..td.nr() {
            let st = &self.stabilizers[self.orbit_of[r]];
            for x in 0..td.nk() {
                let z = self.zeta(td, r, x);
                assert!(st.contains(z), "ζ_r(x) must fix the basepoint");
                for y in 0..td.nk() {
                    let lhs = self.zeta(td, r, td.k_mul(x, y));
                    let rhs = g.mul(self.zeta(td, td.act[y][r], x), self.zeta(td, r, y));
                    assert_eq!(lhs, rhs, "ζ cocycle property");
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::group_core::catalog::s3;

    #[test]
    fn s3_standard_orbits() {
        let g = Arc::new(s3());
        let k = Subgroup::new(g.clone(), &[0, 1]).unwrap();
        let reps = [0, g.find("uv").unwrap(), g.find("vu").unwrap()];
        let td = Transversal::new(g.clone(), k, &reps).unwrap();
        let od = OrbitData::new(&td);
        assert_eq!(od.orbits, vec![vec![0], vec![1, 2]]);
        assert_eq!(od.stabilizers[0].order(), 2);
        assert_eq!(od.stabilizers[1].order(), 1);
        assert_eq!(td.k_label(od.kappa[2]), "u");
    }

    #[test]
    fn trivial_k_gives_singletons() {
        let g = Arc::new(s3());
        let td = Transversal::smallest(g.clone(), Subgroup::trivial(g)).unwrap();
        let od = OrbitData::new(&td);
        assert_eq!(od.orbits.len(), 6);
    }
}
