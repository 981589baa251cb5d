//! Sparse state vectors over edge configurations.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::BuildHasherDefault;
use std::sync::Arc;

use serde::Serialize;

use super::geometry::Lattice;
use crate::{Error, Result, C64, PRUNE};

/// One group-element index per edge, in the lattice's edge order.
pub type Config = Vec<u8>;

/// Deterministic hasher so iteration order (and hence float summation order)
/// is reproducible across runs.
pub type AmpMap = HashMap<Config, C64, BuildHasherDefault<DefaultHasher>>;

/// Immutable sparse state; operators return new states.
#[derive(Debug, Clone)]
pub struct LatticeState {
    lattice: Arc<Lattice>,
    amps: AmpMap,
}

#[derive(Serialize)]
struct AmpRecord<'a> {
    config: Vec<&'a str>,
    re: f64,
    im: f64,
}

impl LatticeState {
    pub fn zero(lattice: Arc<Lattice>) -> Self {
        LatticeState { lattice, amps: AmpMap::default() }
    }

    /// The product state with edge values given per edge.
    pub fn basis(lattice: Arc<Lattice>, config: Config) -> Result<Self> {
        if config.len() != lattice.n_edges() {
            return Err(Error::Lattice(format!("config has {} entries for {} edges", config.len(), lattice.n_edges())));
        }
        let n = lattice.group.order();
        if config.iter().any(|&x| x as usize >= n) {
            return Err(Error::Lattice("config entry out of range".into()));
        }
        let mut amps = AmpMap::default();
        amps.insert(config, C64::new(1.0, 0.0));
        Ok(LatticeState { lattice, amps })
    }

    /// A seeded superposition of `terms` random basis configurations, for
    /// checking operator identities away from the vacuum.
    pub fn random(lattice: Arc<Lattice>, terms: usize, seed: u64) -> Self {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let ord = lattice.group.order() as u8;
        let mut amps = AmpMap::default();
        for _ in 0..terms {
            let cfg: Config = (0..lattice.n_edges()).map(|_| rng.random_range(0..ord)).collect();
            *amps.entry(cfg).or_default() += C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
        }
        LatticeState { lattice, amps }
    }

    /// ⊗_E e.
    pub fn identity_config(lattice: Arc<Lattice>) -> Self {
        let n = lattice.n_edges();
        Self::basis(lattice, vec![0; n]).expect("identity config")
    }

    /// ⊗_E Σ_g g (unnormalised). Errors if the support exceeds `budget`.
    pub fn uniform(lattice: Arc<Lattice>, budget: usize) -> Result<Self> {
        let size = lattice.config_space();
        if size > budget as f64 {
            return Err(Error::Budget(format!("uniform state needs {size} configurations (budget {budget})")));
        }
        let n = lattice.group.order();
        let e = lattice.n_edges();
        let mut amps = AmpMap::default();
        let mut cfg = vec![0u8; e];
        loop {
            amps.insert(cfg.clone(), C64::new(1.0, 0.0));
            let mut i = 0;
            loop {
                if i == e {
                    return Ok(LatticeState { lattice, amps });
                }
                cfg[i] += 1;
                if (cfg[i] as usize) < n {
                    break;
                }
                cfg[i] = 0;
                i += 1;
            }
        }
    }

    pub fn from_amps(lattice: Arc<Lattice>, amps: AmpMap) -> Self {
        let mut s = LatticeState { lattice, amps };
        s.prune();
        s
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn amps(&self) -> &AmpMap {
        &self.amps
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn amp(&self, cfg: &[u8]) -> C64 {
        self.amps.get(cfg).copied().unwrap_or_default()
    }

    /// Configurations in sorted order (for reproducible output).
    pub fn sorted(&self) -> Vec<(&Config, &C64)> {
        let mut v: Vec<_> = self.amps.iter().collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }

    fn prune(&mut self) {
        self.amps.retain(|_, c| c.norm() >= PRUNE);
    }

    pub fn norm_sqr(&self) -> f64 {
        self.sorted().iter().fold(0.0, |acc, (_, c)| acc + c.norm_sqr())
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n < PRUNE {
            return Err(Error::Numeric("cannot normalise the zero vector".into()));
        }
        Ok(self.scale(C64::new(1.0 / n, 0.0)))
    }

    pub fn scale(&self, c: C64) -> Self {
        let amps = self.amps.iter().map(|(k, v)| (k.clone(), v * c)).collect();
        Self::from_amps(self.lattice.clone(), amps)
    }

    /// ⟨self|other⟩, antilinear in self.
    pub fn inner(&self, other: &Self) -> C64 {
        let (small, big, flip) = if self.len() <= other.len() { (self, other, false) } else { (other, self, true) };
        let mut terms: Vec<(&Config, C64)> = small
            .amps
            .iter()
            .filter_map(|(k, a)| big.amps.get(k).map(|b| (k, if flip { b.conj() * a } else { a.conj() * b })))
            .collect();
        terms.sort_by(|a, b| a.0.cmp(b.0));
        terms.into_iter().map(|(_, c)| c).sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        self.axpy(C64::new(1.0, 0.0), other)
    }

    /// self + c·other.
    pub fn axpy(&self, c: C64, other: &Self) -> Self {
        let mut amps = self.amps.clone();
        for (k, v) in other.sorted() {
            *amps.entry(k.clone()).or_default() += c * v;
        }
        Self::from_amps(self.lattice.clone(), amps)
    }

    /// ‖self − other‖.
    pub fn distance(&self, other: &Self) -> f64 {
        self.axpy(C64::new(-1.0, 0.0), other).norm()
    }

    /// Residual of `self = c·other` for the best scalar c; returns (c, residual).
    pub fn proportional(&self, other: &Self) -> (C64, f64) {
        let d = other.norm_sqr();
        if d < PRUNE * PRUNE {
            return (C64::default(), self.norm());
        }
        let c = other.inner(self) / d;
        (c, self.distance(&other.scale(c)))
    }

    /// Apply a linear map defined on basis configurations.
    pub fn map_basis(&self, f: impl Fn(&[u8], &mut Vec<(Config, C64)>)) -> Self {
        let mut out = AmpMap::default();
        let mut buf = Vec::new();
        for (k, a) in self.sorted() {
            buf.clear();
            f(k, &mut buf);
            for (k2, c) in buf.drain(..) {
                *out.entry(k2).or_default() += a * c;
            }
        }
        Self::from_amps(self.lattice.clone(), out)
    }

    /// Apply a map that sends each configuration to at most one configuration.
    pub fn map_monomial(&self, f: impl Fn(&[u8]) -> Option<(Config, C64)>) -> Self {
        self.map_basis(|k, out| out.extend(f(k)))
    }

    /// Multiply each configuration's amplitude by f(config).
    pub fn weight_by(&self, f: impl Fn(&[u8]) -> C64) -> Self {
        self.map_monomial(|c| {
            let w = f(c);
            (w != C64::default()).then(|| (c.to_vec(), w))
        })
    }

    /// Re-express on another lattice via a configuration transfer.
    pub fn transfer(&self, lattice: Arc<Lattice>, f: impl Fn(&[u8], &mut Vec<(Config, C64)>)) -> Self {
        let mut s = self.map_basis(f);
        s.lattice = lattice;
        s
    }

    /// Tensor product with a state on the lattice `joint`, whose edges are
    /// `self`'s edges followed by `other`'s.
    pub fn tensor(&self, other: &Self, joint: Arc<Lattice>) -> Result<Self> {
        if joint.n_edges() != self.lattice.n_edges() + other.lattice.n_edges() {
            return Err(Error::Lattice("joint lattice has the wrong number of edges".into()));
        }
        let mut amps = AmpMap::default();
        for (a, x) in self.sorted() {
            for (b, y) in other.sorted() {
                let mut k = a.clone();
                k.extend_from_slice(b);
                amps.insert(k, x * y);
            }
        }
        Ok(Self::from_amps(joint, amps))
    }

    /// Dense vector in lexicographic config order (edge 0 most significant).
    pub fn to_dense(&self, budget: usize) -> Result<Vec<C64>> {
        let n = self.lattice.group.order();
        let size = self.lattice.config_space();
        if size > budget as f64 {
            return Err(Error::Budget(format!("dense vector of {size} entries (budget {budget})")));
        }
        let mut v = vec![C64::default(); size as usize];
        for (k, a) in &self.amps {
            let idx = k.iter().fold(0usize, |acc, &x| acc * n + x as usize);
            v[idx] = *a;
        }
        Ok(v)
    }

    /// Maximum |amplitude| difference, useful for bit-exact replay checks.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst = 0f64;
        for (k, a) in &self.amps {
            worst = worst.max((a - other.amp(k)).norm());
        }
        for (k, b) in &other.amps {
            if !self.amps.contains_key(k) {
                worst = worst.max(b.norm());
            }
        }
        worst
    }

    /// JSON snapshot: sorted `{config: [labels...], re, im}` records.
    pub fn to_json(&self) -> String {
        let g = &self.lattice.group;
        let recs: Vec<AmpRecord> = self
            .sorted()
            .into_iter()
            .map(|(k, c)| AmpRecord { config: k.iter().map(|&x| g.label(x as usize)).collect(), re: c.re, im: c.im })
            .collect();
        serde_json::to_string(&recs).expect("serialisable")
    }
}
