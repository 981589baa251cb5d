use std::sync::Arc;

use super::{FiniteGroup, Subgroup};

/// Conjugacy classes with representatives c0, lifts q_c and centralizers G^{c0}.
#[derive(Debug, Clone)]
pub struct ConjugacyData {
    pub group: Arc<FiniteGroup>,
    /// Classes in order of their smallest element; each class sorted.
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    /// `q[c]` with `c = q_c c0 q_c⁻¹` and `q_{c0} = e`.
    pub q: Vec<usize>,
    pub centralizers: Vec<Subgroup>,
}

impl ConjugacyData {
    /// q_c is the smallest element index conjugating c0 to c.
    pub fn new(group: Arc<FiniteGroup>) -> Self {
        Self::with_lift(group, |g, c0, c| g.elements().find(|&h| g.conj(h, c0) == c).unwrap())
    }

    /// Same classes with a caller-supplied choice of q_c (for choice-independence tests).
    pub fn with_lift(group: Arc<FiniteGroup>, lift: impl Fn(&FiniteGroup, usize, usize) -> usize) -> Self {
        let g = &group;
        let n = g.order();
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
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
        let mut q = vec![0; n];
        for cl in &classes {
            let c0 = cl[0];
            for &c in cl {
                q[c] = if c == c0 { 0 } else { lift(g, c0, c) };
                assert_eq!(g.conj(q[c], c0), c, "lift must conjugate c0 to c");
            }
        }
        let centralizers = classes
            .iter()
            .map(|cl| {
                let c0 = cl[0];
                let m: Vec<usize> = g.elements().filter(|&h| g.mul(h, c0) == g.mul(c0, h)).collect();
                Subgroup::new(group.clone(), &m).expect("centralizer")
            })
            .collect();
        ConjugacyData { group, classes, class_of, q, centralizers }
    }

    pub fn rep(&self, class: usize) -> usize {
        self.classes[class][0]
    }

    /// ζ_c(h) = q⁻¹_{hch⁻¹} h q_c ∈ G^{c0}.
    pub fn zeta(&self, h: usize, c: usize) -> usize {
        let g = &self.group;
        let hc = g.conj(h, c);
        g.product([g.inv(self.q[hc]), h, self.q[c]])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_core::catalog::s3;

    #[test]
    fn s3_classes() {
        let g = Arc::new(s3());
        let cd = ConjugacyData::new(g.clone());
        let names: Vec<Vec<&str>> =
            cd.classes.iter().map(|c| c.iter().map(|&x| g.label(x)).collect()).collect();
        assert_eq!(names, vec![vec!["e"], vec!["u", "v", "w"], vec!["uv", "vu"]]);
        assert_eq!(g.label(cd.q[g.find("v").unwrap()]), "w");
        assert_eq!(g.label(cd.q[g.find("w").unwrap()]), "v");
    }

    #[test]
    fn zeta_lands_in_centralizer() {
        for g in [s3(), FiniteGroup::symmetric(4).unwrap()] {
            let g = Arc::new(g);
            let cd = ConjugacyData::new(g.clone());
            for c in g.elements() {
                let k = cd.class_of[c];
                for h in g.elements() {
                    assert!(cd.centralizers[k].contains(cd.zeta(h, c)));
                }
            }
        }
    }

    #[test]
    fn s4_class_sizes() {
        let cd = ConjugacyData::new(Arc::new(FiniteGroup::symmetric(4).unwrap()));
        let mut sizes: Vec<usize> = cd.classes.iter().map(|c| c.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 3, 6, 6, 8]);
    }

    #[test]
    fn z2_singletons() {
        let cd = ConjugacyData::new(Arc::new(FiniteGroup::cyclic(2).unwrap()));
        assert_eq!(cd.classes, vec![vec![0], vec![1]]);
    }
}
