use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::Deserialize;

use crate::{Error, Result};

/// Hard cap on group order.
pub const MAX_ORDER: usize = 10_000;

/// A finite group as a Cayley table over indices `0..order`, identity at 0.
#[derive(Clone, PartialEq)]
pub struct FiniteGroup {
    order: usize,
    cayley: Vec<u32>,
    inverse: Vec<u32>,
    labels: Vec<String>,
    perms: Option<Vec<Vec<u8>>>,
    name: Option<String>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup(order={}, name={:?})", self.order, self.name)
    }
}

impl FiniteGroup {
    /// Build from a full Cayley table. Checks identity at 0, latin square,
    /// inverses and (for order ≤ 256) associativity.
    pub fn from_cayley(table: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self> {
        let n = table.len();
        if n == 0 || n > MAX_ORDER {
            return Err(Error::InvalidGroup(format!("order {n} out of range")));
        }
        let mut cayley = Vec::with_capacity(n * n);
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!("row {i} has length {}", row.len())));
            }
            for &x in row {
                if x >= n {
                    return Err(Error::InvalidGroup(format!("entry {x} out of range")));
                }
                cayley.push(x as u32);
            }
        }
        let labels = match labels {
            Some(l) if l.len() == n => l,
            Some(l) => {
                return Err(Error::InvalidGroup(format!("{} labels for order {n}", l.len())))
            }
            None => (0..n).map(|i| if i == 0 { "e".to_string() } else { format!("g{i}") }).collect(),
        };
        Self::finish(n, cayley, labels, None, None)
    }

    fn finish(
        n: usize,
        cayley: Vec<u32>,
        labels: Vec<String>,
        perms: Option<Vec<Vec<u8>>>,
        name: Option<String>,
    ) -> Result<Self> {
        for g in 0..n {
            if cayley[g] as usize != g || cayley[g * n] as usize != g {
                return Err(Error::InvalidGroup(format!("index 0 is not an identity at {g}")));
            }
        }
        let mut seen = vec![false; n];
        for a in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for b in 0..n {
                let c = cayley[a * n + b] as usize;
                if seen[c] {
                    return Err(Error::InvalidGroup(format!("row {a} repeats {c}")));
                }
                seen[c] = true;
            }
        }
        let mut inverse = vec![0u32; n];
        for a in 0..n {
            let b = (0..n)
                .find(|&b| cayley[a * n + b] == 0)
                .ok_or_else(|| Error::InvalidGroup(format!("{a} has no inverse")))?;
            if cayley[b * n + a] != 0 {
                return Err(Error::InvalidGroup(format!("{a} has no two-sided inverse")));
            }
            inverse[a] = b as u32;
        }
        if n <= 256 {
            for a in 0..n {
                for b in 0..n {
                    let ab = cayley[a * n + b] as usize;
                    for c in 0..n {
                        let bc = cayley[b * n + c] as usize;
                        if cayley[ab * n + c] != cayley[a * n + bc] {
                            return Err(Error::InvalidGroup(format!("not associative at ({a},{b},{c})")));
                        }
                    }
                }
            }
        }
        Ok(FiniteGroup { order: n, cayley, inverse, labels, perms, name })
    }

    /// Closure of permutation generators. Permutations are image lists of
    /// `1..=n` (1-based), composed as `(p*q)(i) = p(q(i))`.
    pub fn from_permutations(generators: &[Vec<usize>]) -> Result<Self> {
        let degree = generators.iter().map(|g| g.len()).max().unwrap_or(1).max(1);
        let gens = generators
            .iter()
            .map(|g| to_zero_based(g, degree))
            .collect::<Result<Vec<_>>>()?;
        let id: Vec<u8> = (0..degree as u8).collect();
        let mut elems = vec![id.clone()];
        let mut index: HashMap<Vec<u8>, usize> = HashMap::from([(id, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in &gens {
                let p = compose(&elems[i], g);
                if !index.contains_key(&p) {
                    if elems.len() >= MAX_ORDER {
                        return Err(Error::InvalidGroup(format!("order exceeds {MAX_ORDER}")));
                    }
                    index.insert(p.clone(), elems.len());
                    queue.push_back(elems.len());
                    elems.push(p);
                }
            }
        }
        Self::from_permutation_elements(elems, None)
    }

    /// Build from an explicit, closed list of 0-based permutations (identity first).
    /// The order of the list fixes the element indices.
    pub fn from_permutation_elements(elems: Vec<Vec<u8>>, labels: Option<Vec<String>>) -> Result<Self> {
        let n = elems.len();
        if n == 0 || n > MAX_ORDER {
            return Err(Error::InvalidGroup(format!("order {n} out of range")));
        }
        let index: HashMap<&[u8], usize> = elems.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
        if index.len() != n {
            return Err(Error::InvalidGroup("repeated permutation".into()));
        }
        let mut cayley = Vec::with_capacity(n * n);
        for a in &elems {
            for b in &elems {
                let c = compose(a, b);
                let k = index
                    .get(c.as_slice())
                    .ok_or_else(|| Error::InvalidGroup("permutation list not closed".into()))?;
                cayley.push(*k as u32);
            }
        }
        let labels = labels.unwrap_or_else(|| elems.iter().map(|p| cycle_label(p)).collect());
        Self::finish(n, cayley, labels, Some(elems), None)
    }

    /// Parse a JSON group file: `{"cayley": [[..]]}` or
    /// `{"permutation_generators": [[..]]}`, optionally with `"labels"`.
    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct GroupFile {
            cayley: Option<Vec<Vec<usize>>>,
            permutation_generators: Option<Vec<Vec<usize>>>,
            labels: Option<Vec<String>>,
            name: Option<String>,
        }
        let f: GroupFile = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let g = match (f.cayley, f.permutation_generators) {
            (Some(t), None) => Self::from_cayley(t, f.labels)?,
            (None, Some(gens)) => {
                let g = Self::from_permutations(&gens)?;
                match f.labels {
                    Some(l) if l.len() == g.order() => g.with_labels(l)?,
                    Some(_) => return Err(Error::Config("label count mismatch".into())),
                    None => g,
                }
            }
            _ => return Err(Error::Config("need exactly one of cayley / permutation_generators".into())),
        };
        Ok(match f.name {
            Some(n) => g.with_name(n),
            None => g,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.order {
            return Err(Error::InvalidGroup("label count mismatch".into()));
        }
        self.labels = labels;
        Ok(self)
    }

    /// Cyclic group Z_n with labels "0".."n-1".
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_ORDER {
            return Err(Error::InvalidGroup(format!("Z_{n} out of range")));
        }
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let labels = (0..n).map(|a| a.to_string()).collect();
        Ok(Self::from_cayley(table, Some(labels))?.with_name(format!("z{n}")))
    }

    /// Symmetric group S_n by closure of the adjacent transpositions.
    pub fn symmetric(n: usize) -> Result<Self> {
        if !(1..=7).contains(&n) {
            return Err(Error::InvalidGroup(format!("S_{n} out of range")));
        }
        let gens: Vec<Vec<usize>> = (1..n)
            .map(|i| {
                let mut p: Vec<usize> = (1..=n).collect();
                p.swap(i - 1, i);
                p
            })
            .collect();
        let gens = if gens.is_empty() { vec![vec![1]] } else { gens };
        Ok(Self::from_permutations(&gens)?.with_name(format!("s{n}")))
    }

    /// Direct product with elements ordered `(a, b) -> a * |H| + b`.
    pub fn direct_product(&self, other: &FiniteGroup) -> Result<Self> {
        let (n, m) = (self.order, other.order);
        let table = (0..n * m)
            .map(|x| {
                (0..n * m)
                    .map(|y| self.mul(x / m, y / m) * m + other.mul(x % m, y % m))
                    .collect()
            })
            .collect();
        let labels = (0..n * m)
            .map(|x| format!("({},{})", self.labels[x / m], other.labels[x % m]))
            .collect();
        let name = match (&self.name, &other.name) {
            (Some(a), Some(b)) => Some(format!("{a}x{b}")),
            _ => None,
        };
        let mut g = Self::from_cayley(table, Some(labels))?;
        g.name = name;
        Ok(g)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.cayley[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    /// `g c g⁻¹`.
    #[inline]
    pub fn conj(&self, g: usize, c: usize) -> usize {
        self.mul(self.mul(g, c), self.inv(g))
    }

    /// Product of a sequence of elements, left to right.
    pub fn product(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(0, |acc, x| self.mul(acc, x))
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn permutation(&self, a: usize) -> Option<&[u8]> {
        self.perms.as_ref().map(|p| p[a].as_slice())
    }

    /// Look up an element by label, or by cycle notation for permutation groups.
    pub fn find(&self, label: &str) -> Option<usize> {
        let label = label.trim();
        if let Some(i) = self.labels.iter().position(|l| l == label) {
            return Some(i);
        }
        let perms = self.perms.as_ref()?;
        let degree = perms[0].len();
        let p = parse_cycles(label, degree)?;
        perms.iter().position(|q| *q == p)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.order)
            .filter(|&a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
            .collect()
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Subgroup generated by the given elements, as a sorted member list.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.order];
        inside[0] = true;
        let mut members = vec![0usize];
        let mut i = 0;
        while i < members.len() {
            let a = members[i];
            for &g in gens {
                let b = self.mul(a, g);
                if !inside[b] {
                    inside[b] = true;
                    members.push(b);
                }
            }
            i += 1;
        }
        members.sort_unstable();
        members
    }
}

fn to_zero_based(p: &[usize], degree: usize) -> Result<Vec<u8>> {
    if degree > 255 {
        return Err(Error::InvalidGroup("permutation degree above 255".into()));
    }
    let mut out: Vec<u8> = (0..degree as u8).collect();
    let mut seen = vec![false; degree];
    for (i, &img) in p.iter().enumerate() {
        if img == 0 || img > p.len() || seen[img - 1] {
            return Err(Error::InvalidGroup(format!("not a permutation: {p:?}")));
        }
        seen[img - 1] = true;
        out[i] = (img - 1) as u8;
    }
    Ok(out)
}

/// `(p*q)(i) = p(q(i))`; shorter permutations fix the remaining points.
pub fn compose(p: &[u8], q: &[u8]) -> Vec<u8> {
    let n = p.len().max(q.len());
    (0..n)
        .map(|i| {
            let qi = q.get(i).copied().unwrap_or(i as u8);
            p.get(qi as usize).copied().unwrap_or(qi)
        })
        .collect()
}

/// Compact cycle notation with 1-based points, `e` for the identity.
pub fn cycle_label(p: &[u8]) -> String {
    let n = p.len();
    let mut seen = vec![false; n];
    let mut out = String::new();
    let sep = n >= 10;
    for start in 0..n {
        if seen[start] || p[start] as usize == start {
            continue;
        }
        out.push('(');
        let mut i = start;
        let mut first = true;
        while !seen[i] {
            seen[i] = true;
            if sep && !first {
                out.push(' ');
            }
            out.push_str(&(i + 1).to_string());
            first = false;
            i = p[i] as usize;
        }
        out.push(')');
    }
    if out.is_empty() {
        "e".into()
    } else {
        out
    }
}

/// Parse cycle notation such as `(12)(34)` or `(1 10)` into a 0-based permutation.
pub fn parse_cycles(s: &str, degree: usize) -> Option<Vec<u8>> {
    let s = s.trim();
    let mut p: Vec<u8> = (0..degree as u8).collect();
    if s == "e" || s == "()" {
        return Some(p);
    }
    let mut rest = s;
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    while !rest.is_empty() {
        rest = rest.strip_prefix('(')?;
        let end = rest.find(')')?;
        let body = &rest[..end];
        let pts: Vec<usize> = if body.contains(' ') || body.contains(',') {
            body.split([' ', ',']).filter(|t| !t.is_empty()).map(|t| t.parse().ok()).collect::<Option<_>>()?
        } else {
            body.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect::<Option<_>>()?
        };
        cycles.push(pts);
        rest = rest[end + 1..].trim_start();
    }
    // Cycles compose right to left, matching the product convention.
    for cyc in cycles.iter().rev() {
        if cyc.iter().any(|&x| x == 0 || x > degree) {
            return None;
        }
        let mut step: Vec<u8> = (0..degree as u8).collect();
        for k in 0..cyc.len() {
            step[cyc[k] - 1] = (cyc[(k + 1) % cyc.len()] - 1) as u8;
        }
        p = compose(&step, &p);
    }
    Some(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z2_from_single_transposition() {
        let g = FiniteGroup::from_permutations(&[vec![2, 1]]).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.label(1), "(12)");
    }

    #[test]
    fn s3_from_two_transpositions() {
        let g = FiniteGroup::from_permutations(&[vec![2, 1, 3], vec![1, 3, 2]]).unwrap();
        assert_eq!(g.order(), 6);
        let mut labels: Vec<_> = g.labels().to_vec();
        labels.sort();
        assert_eq!(labels, ["(12)", "(123)", "(13)", "(132)", "(23)", "e"]);
    }

    #[test]
    fn z4_from_four_cycle() {
        let g = FiniteGroup::from_permutations(&[vec![2, 3, 4, 1]]).unwrap();
        assert_eq!(g.order(), 4);
        assert!(g.is_abelian());
        assert_eq!(g.element_order(1), 4);
    }

    #[test]
    fn rejects_non_permutation() {
        assert!(FiniteGroup::from_permutations(&[vec![1, 1, 3]]).is_err());
    }

    #[test]
    fn rejects_bad_cayley() {
        let bad = vec![vec![0, 1], vec![1, 1]];
        assert!(FiniteGroup::from_cayley(bad, None).is_err());
    }

    #[test]
    fn cycle_parsing_round_trips() {
        let g = FiniteGroup::symmetric(4).unwrap();
        for a in g.elements() {
            assert_eq!(g.find(g.label(a)), Some(a));
        }
        // (12)(23) = (123) under p(q(i)).
        let p = parse_cycles("(12)(23)", 3).unwrap();
        assert_eq!(cycle_label(&p), "(123)");
    }

    #[test]
    fn json_group_file() {
        let g = FiniteGroup::from_json(r#"{"permutation_generators": [[2,3,1]], "name": "z3p"}"#).unwrap();
        assert_eq!(g.order(), 3);
        assert_eq!(g.name(), Some("z3p"));
        let h = FiniteGroup::from_json(r#"{"cayley": [[0,1],[1,0]], "labels": ["e","x"]}"#).unwrap();
        assert_eq!(h.find("x"), Some(1));
    }

    #[test]
    fn direct_product_order_and_center() {
        let g = FiniteGroup::symmetric(3).unwrap().direct_product(&FiniteGroup::cyclic(2).unwrap()).unwrap();
        assert_eq!(g.order(), 12);
        assert_eq!(g.center().len(), 2);
    }
}
