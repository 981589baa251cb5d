//! Sparse elements of smash products C(X)⋊CH and their tensor powers.
//!
//! Both D(G) (X = G with conjugation) and Ξ(R,K) (X = R with ▷) have a basis
//! δ_p⊗h whose products are again basis elements or zero:
//! (δ_p⊗h)(δ_q⊗k) = δ_{p, h▷q} δ_p⊗hk. A single [`Smash`] type carries the
//! tables; an [`Elem`] is a coefficient map over tuples of basis indices.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use crate::{Error, Result, C64, PRUNE};

pub const MAX_LEGS: usize = 4;
pub type Key = [u32; MAX_LEGS];

/// Fingerprint of an algebra; binary operations require equal tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Tag {
    pub kind: &'static str,
    pub hash: u64,
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{:08x}", self.kind, self.hash as u32)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Elem {
    tag: Tag,
    legs: usize,
    terms: BTreeMap<Key, C64>,
}

impl Elem {
    pub fn zero(tag: Tag, legs: usize) -> Self {
        assert!(legs <= MAX_LEGS, "at most {MAX_LEGS} tensor legs");
        Elem { tag, legs, terms: BTreeMap::new() }
    }

    pub fn tag(&self) -> Tag {
        self.tag
    }

    pub fn legs(&self) -> usize {
        self.legs
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Key, &C64)> {
        self.terms.iter()
    }

    pub fn get(&self, key: &[u32]) -> C64 {
        let mut k = [0u32; MAX_LEGS];
        k[..key.len()].copy_from_slice(key);
        self.terms.get(&k).copied().unwrap_or_default()
    }

    /// Accumulate a coefficient, dropping it if it cancels below the prune threshold.
    pub fn add_term(&mut self, key: Key, c: C64) {
        let e = self.terms.entry(key).or_default();
        *e += c;
        if e.norm() < PRUNE {
            self.terms.remove(&key);
        }
    }

    pub fn push(&mut self, key: &[u32], c: C64) {
        debug_assert_eq!(key.len(), self.legs);
        let mut k = [0u32; MAX_LEGS];
        k[..key.len()].copy_from_slice(key);
        self.add_term(k, c);
    }

    fn check(&self, other: &Elem) -> Result<()> {
        if self.tag != other.tag || self.legs != other.legs {
            return Err(Error::TagMismatch(
                format!("{}^{}", self.tag, self.legs),
                format!("{}^{}", other.tag, other.legs),
            ));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Elem) -> Result<Elem> {
        self.check(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, *c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: C64) -> Elem {
        let mut out = Elem::zero(self.tag, self.legs);
        for (k, v) in &self.terms {
            out.add_term(*k, v * c);
        }
        out
    }

    pub fn conj(&self) -> Elem {
        Elem { tag: self.tag, legs: self.legs, terms: self.terms.iter().map(|(k, v)| (*k, v.conj())).collect() }
    }

    /// Largest coefficient difference; `f64::INFINITY` on mismatched shapes.
    pub fn distance(&self, other: &Elem) -> f64 {
        if self.check(other).is_err() {
            return f64::INFINITY;
        }
        let mut worst = 0f64;
        for (k, v) in &self.terms {
            worst = worst.max((v - other.terms.get(k).copied().unwrap_or_default()).norm());
        }
        for (k, v) in &other.terms {
            if !self.terms.contains_key(k) {
                worst = worst.max(v.norm());
            }
        }
        worst
    }

    pub fn approx_eq(&self, other: &Elem) -> bool {
        self.distance(other) < crate::TOL
    }

    /// a ⊗ b.
    pub fn tensor(&self, other: &Elem) -> Elem {
        assert_eq!(self.tag, other.tag, "tensor of different algebras");
        let legs = self.legs + other.legs;
        let mut out = Elem::zero(self.tag, legs);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let mut k = *ka;
                k[self.legs..legs].copy_from_slice(&kb[..other.legs]);
                out.add_term(k, ca * cb);
            }
        }
        out
    }

    /// Reorder legs: output leg i is input leg `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Elem {
        assert_eq!(perm.len(), self.legs);
        let mut out = Elem::zero(self.tag, self.legs);
        for (k, c) in &self.terms {
            let mut nk = [0u32; MAX_LEGS];
            for (i, &p) in perm.iter().enumerate() {
                nk[i] = k[p];
            }
            out.add_term(nk, *c);
        }
        out
    }

    /// Apply a linear map to one leg. `map[b]` expands basis element b into
    /// terms with `out_legs` legs each (0 for a functional such as ε).
    pub fn map_leg(&self, leg: usize, map: &LegMap) -> Elem {
        assert!(leg < self.legs);
        let legs = self.legs - 1 + map.out_legs;
        let mut out = Elem::zero(map.tag.unwrap_or(self.tag), legs);
        for (k, c) in &self.terms {
            for (piece, d) in &map.images[k[leg] as usize] {
                let mut nk = [0u32; MAX_LEGS];
                nk[..leg].copy_from_slice(&k[..leg]);
                nk[leg..leg + map.out_legs].copy_from_slice(&piece[..map.out_legs]);
                nk[leg + map.out_legs..legs].copy_from_slice(&k[leg + 1..self.legs]);
                out.add_term(nk, c * d);
            }
        }
        out
    }

    /// Apply the same one-leg linear map on every leg.
    pub fn map_all(&self, map: &LegMap) -> Elem {
        assert_eq!(map.out_legs, 1);
        (0..self.legs).fold(self.clone(), |acc, l| acc.map_leg(l, map))
    }

    /// Scalar value of a 0-leg element.
    pub fn scalar(&self) -> C64 {
        assert_eq!(self.legs, 0);
        self.terms.get(&[0; MAX_LEGS]).copied().unwrap_or_default()
    }

    /// Change the tag without touching coefficients (for identified algebras).
    pub fn retag(mut self, tag: Tag) -> Elem {
        self.tag = tag;
        self
    }
}

impl Add for &Elem {
    type Output = Elem;
    fn add(self, rhs: &Elem) -> Elem {
        self.try_add(rhs).expect("adding elements of different algebras")
    }
}

impl Sub for &Elem {
    type Output = Elem;
    fn sub(self, rhs: &Elem) -> Elem {
        self.try_add(&rhs.scale(C64::new(-1.0, 0.0))).expect("subtracting elements of different algebras")
    }
}

impl Neg for &Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl Mul<C64> for &Elem {
    type Output = Elem;
    fn mul(self, rhs: C64) -> Elem {
        self.scale(rhs)
    }
}

impl Mul<f64> for &Elem {
    type Output = Elem;
    fn mul(self, rhs: f64) -> Elem {
        self.scale(C64::new(rhs, 0.0))
    }
}

/// A linear map on one tensor leg, tabulated on basis elements.
#[derive(Debug, Clone)]
pub struct LegMap {
    pub out_legs: usize,
    pub images: Vec<Vec<(Key, C64)>>,
    /// Target algebra when it differs from the source (e.g. the inclusion Ξ→D(G)).
    pub tag: Option<Tag>,
}

impl LegMap {
    pub fn from_fn(dim: usize, out_legs: usize, f: impl Fn(u32) -> Vec<(Key, C64)>) -> Self {
        LegMap { out_legs, images: (0..dim as u32).map(f).collect(), tag: None }
    }

    /// A map sending basis elements to basis elements.
    pub fn permutation(dim: usize, f: impl Fn(u32) -> u32) -> Self {
        Self::from_fn(dim, 1, |b| vec![(key1(f(b)), C64::new(1.0, 0.0))])
    }
}

pub fn key1(a: u32) -> Key {
    [a, 0, 0, 0]
}

pub fn key2(a: u32, b: u32) -> Key {
    [a, b, 0, 0]
}

/// C(X)⋊CH with X and H given by index tables.
#[derive(Debug, Clone)]
pub struct Smash {
    tag: Tag,
    np: usize,
    nh: usize,
    /// `act[h*np + p]` = h▷p.
    act: Vec<u32>,
    hmul: Vec<u32>,
    hinv: Vec<u32>,
    p_labels: Vec<String>,
    h_labels: Vec<String>,
}

impl Smash {
    /// `act(h, p)` must be a left action and `hmul` a group law with identity 0.
    pub fn new(
        kind: &'static str,
        np: usize,
        nh: usize,
        act: impl Fn(usize, usize) -> usize,
        hmul: impl Fn(usize, usize) -> usize,
        p_labels: Vec<String>,
        h_labels: Vec<String>,
    ) -> Self {
        let act: Vec<u32> = (0..nh).flat_map(|h| (0..np).map(move |p| (h, p))).map(|(h, p)| act(h, p) as u32).collect();
        let hm: Vec<u32> = (0..nh).flat_map(|a| (0..nh).map(move |b| (a, b))).map(|(a, b)| hmul(a, b) as u32).collect();
        let hinv: Vec<u32> = (0..nh).map(|a| (0..nh).find(|&b| hm[a * nh + b] == 0).unwrap() as u32).collect();
        let mut hasher = DefaultHasher::new();
        (kind, np, nh, &act, &hm).hash(&mut hasher);
        let tag = Tag { kind, hash: hasher.finish() };
        Smash { tag, np, nh, act, hmul: hm, hinv, p_labels, h_labels }
    }

    pub fn tag(&self) -> Tag {
        self.tag
    }

    pub fn dim(&self) -> usize {
        self.np * self.nh
    }

    pub fn np(&self) -> usize {
        self.np
    }

    pub fn nh(&self) -> usize {
        self.nh
    }

    #[inline]
    pub fn index(&self, p: usize, h: usize) -> u32 {
        (p * self.nh + h) as u32
    }

    #[inline]
    pub fn split(&self, b: u32) -> (usize, usize) {
        let b = b as usize;
        (b / self.nh, b % self.nh)
    }

    #[inline]
    pub fn act(&self, h: usize, p: usize) -> usize {
        self.act[h * self.np + p] as usize
    }

    #[inline]
    pub fn hmul(&self, a: usize, b: usize) -> usize {
        self.hmul[a * self.nh + b] as usize
    }

    #[inline]
    pub fn hinv(&self, a: usize) -> usize {
        self.hinv[a] as usize
    }

    pub fn basis_label(&self, b: u32) -> String {
        let (p, h) = self.split(b);
        format!("δ_{}⊗{}", self.p_labels[p], self.h_labels[h])
    }

    pub fn zero(&self, legs: usize) -> Elem {
        Elem::zero(self.tag, legs)
    }

    /// δ_p⊗h as a one-leg element.
    pub fn basis(&self, p: usize, h: usize) -> Elem {
        let mut e = self.zero(1);
        e.push(&[self.index(p, h)], C64::new(1.0, 0.0));
        e
    }

    /// Σ_p δ_p⊗h.
    pub fn group_elem(&self, h: usize) -> Elem {
        let mut e = self.zero(1);
        for p in 0..self.np {
            e.push(&[self.index(p, h)], C64::new(1.0, 0.0));
        }
        e
    }

    /// δ_p⊗e.
    pub fn delta(&self, p: usize) -> Elem {
        self.basis(p, 0)
    }

    pub fn unit(&self, legs: usize) -> Elem {
        let one = self.group_elem(0);
        let mut out = Elem::zero(self.tag, 0);
        out.add_term([0; MAX_LEGS], C64::new(1.0, 0.0));
        (0..legs).fold(out, |acc, _| acc.tensor(&one))
    }

    pub fn scalar(&self, c: C64) -> Elem {
        let mut out = Elem::zero(self.tag, 0);
        out.add_term([0; MAX_LEGS], c);
        out
    }

    /// Element from a coefficient function on one-leg basis indices.
    pub fn from_fn(&self, f: impl Fn(usize, usize) -> C64) -> Elem {
        let mut e = self.zero(1);
        for p in 0..self.np {
            for h in 0..self.nh {
                e.push(&[self.index(p, h)], f(p, h));
            }
        }
        e
    }

    pub fn try_mul(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        a.check(b)?;
        if a.tag != self.tag {
            return Err(Error::TagMismatch(a.tag.to_string(), self.tag.to_string()));
        }
        let legs = a.legs;
        // Index b by its C(X) components.
        let mut index: HashMap<Key, Vec<(Key, C64)>> = HashMap::new();
        for (kb, cb) in &b.terms {
            let mut pk = [0u32; MAX_LEGS];
            let mut hk = [0u32; MAX_LEGS];
            for i in 0..legs {
                let (p, h) = self.split(kb[i]);
                pk[i] = p as u32;
                hk[i] = h as u32;
            }
            index.entry(pk).or_default().push((hk, *cb));
        }
        let mut out = Elem::zero(self.tag, legs);
        for (ka, ca) in &a.terms {
            let mut need = [0u32; MAX_LEGS];
            let mut ph = [(0usize, 0usize); MAX_LEGS];
            for i in 0..legs {
                let (p, h) = self.split(ka[i]);
                ph[i] = (p, h);
                need[i] = self.act(self.hinv(h), p) as u32;
            }
            if let Some(list) = index.get(&need) {
                for (hk, cb) in list {
                    let mut k = [0u32; MAX_LEGS];
                    for i in 0..legs {
                        let (p, h) = ph[i];
                        k[i] = self.index(p, self.hmul(h, hk[i] as usize));
                    }
                    out.add_term(k, ca * cb);
                }
            }
        }
        Ok(out)
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        self.try_mul(a, b).expect("multiplying elements of different algebras")
    }

    /// Product of several elements, left to right.
    pub fn mul_all(&self, xs: &[&Elem]) -> Elem {
        let mut it = xs.iter();
        let first = (*it.next().expect("nonempty product")).clone();
        it.fold(first, |acc, x| self.mul(&acc, x))
    }

    /// The cross-product star (δ_p⊗h)* = δ_{h⁻¹▷p}⊗h⁻¹, antilinear, on every leg.
    pub fn star(&self, a: &Elem) -> Elem {
        a.conj().map_all(&self.star_map())
    }

    pub fn star_map(&self) -> LegMap {
        LegMap::permutation(self.dim(), |b| {
            let (p, h) = self.split(b);
            let hi = self.hinv(h);
            self.index(self.act(hi, p), hi)
        })
    }

    /// Max residual of a ↦ b over a list of basis pairs, used by verifiers.
    pub fn describe(&self, e: &Elem) -> String {
        let mut parts = Vec::new();
        for (k, c) in e.terms() {
            let legs: Vec<String> = (0..e.legs()).map(|i| self.basis_label(k[i])).collect();
            parts.push(format!("({:.3}{:+.3}i){}", c.re, c.im, legs.join("⊗")));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}
