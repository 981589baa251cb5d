//! Split, merge and antipode on patches, deterministic and measured.
//!
//! Every operation runs as a fixed sequence of single-site or single-edge
//! measurements on a working lattice. The deterministic map is the run in
//! which every outcome is trivial; measured runs sample outcomes and apply
//! corrections.

use std::sync::Arc;

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::code::PatchCode;
use crate::group_core::{matrix_irreps, CharacterTable, ConjugacyData, FiniteGroup, Irrep};
use crate::lattice::geometry::{fc, vx};
use crate::lattice::site::path_product;
use crate::lattice::{EdgeKey, Lattice, LatticeState, PatchShape, Site, Vertex};
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurgeryOp {
    SmoothSplit,
    RoughSplit,
    SmoothMerge,
    RoughMerge,
    Antipode,
}

impl SurgeryOp {
    pub const ALL: [SurgeryOp; 5] =
        [SurgeryOp::SmoothSplit, SurgeryOp::RoughSplit, SurgeryOp::RoughMerge, SurgeryOp::SmoothMerge, SurgeryOp::Antipode];

    pub fn name(self) -> &'static str {
        match self {
            SurgeryOp::SmoothSplit => "smooth_split",
            SurgeryOp::RoughSplit => "rough_split",
            SurgeryOp::SmoothMerge => "smooth_merge",
            SurgeryOp::RoughMerge => "rough_merge",
            SurgeryOp::Antipode => "antipode",
        }
    }

    /// Name of the Hopf-algebra map the operation realises on logical states.
    pub fn hopf_map(self) -> &'static str {
        match self {
            SurgeryOp::SmoothSplit => "Δ of CG",
            SurgeryOp::RoughSplit => "Δ of C(G)",
            SurgeryOp::SmoothMerge => "multiplication of C(G)",
            SurgeryOp::RoughMerge => "multiplication of CG",
            SurgeryOp::Antipode => "antipode S",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|o| o.name() == s.replace('-', "_"))
    }
}

/// One measurement in an operation's schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Probe {
    /// Edge in the group basis.
    Edge(EdgeKey),
    /// Edge in the matrix-element basis √(d/|G|) Σ_g π(g)_{ij}|g⟩; the edge is
    /// consumed (left at e).
    Fourier(EdgeKey),
    /// Vertex charge: projectors (d/|G|) Σ_g χ̄_π(g) g▷.
    Charge(Vertex),
    /// Face flux: conjugacy class of the holonomy at the site.
    Flux(Site),
}

/// How an outcome was handled.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Correction {
    None,
    /// Vertex gauge transformations restoring the split halves.
    Gauge,
    /// Configuration-dependent phase.
    Phase,
    /// Excitation moved to the next measured site.
    Move,
    /// Excitation removed through a boundary, leaving a logical byproduct.
    Byproduct,
    /// No local correction implemented: the state is replaced by the
    /// trivial-outcome branch of the pre-measurement state.
    Swap,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StepRecord {
    pub probe: String,
    pub outcome: usize,
    pub label: String,
    pub probability: f64,
    pub correction: Correction,
}

/// Logical byproduct left by the last measurement of a merge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Byproduct {
    /// Phase χ(b) on the second input, χ one-dimensional.
    Charge { irrep: usize },
    /// Central flux z: the map becomes |a,b⟩ ↦ δ_{b,za}|a⟩.
    Flux { element: usize },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub op: SurgeryOp,
    pub seed: Option<u64>,
    pub steps: Vec<StepRecord>,
    pub byproduct: Option<Byproduct>,
}

impl MeasurementRecord {
    /// Steps resolved by a state-level replacement instead of a local correction.
    pub fn flagged(&self) -> usize {
        self.steps.iter().filter(|s| s.correction == Correction::Swap).count()
    }

    /// Product of the conditional outcome probabilities.
    pub fn probability(&self) -> f64 {
        self.steps.iter().map(|s| s.probability).product()
    }
}

/// Pre-measurement state and outcome distribution of one step.
pub type TraceEntry = (LatticeState, Vec<f64>);

#[derive(Debug, Clone)]
struct RepData {
    irreps: Vec<Irrep>,
    /// Irreps in outcome order, trivial first.
    order: Vec<usize>,
    conj: ConjugacyData,
}

/// A split, merge or antipode between two codes.
#[derive(Debug, Clone)]
pub struct Surgery {
    pub op: SurgeryOp,
    pub source: PatchCode,
    pub target: PatchCode,
    /// Lattice the measurements act on.
    work: Arc<Lattice>,
    schedule: Vec<Probe>,
    reps: RepData,
}

impl Surgery {
    fn build(op: SurgeryOp, source: PatchCode, target: PatchCode, work: Arc<Lattice>, schedule: Vec<Probe>) -> Result<Self> {
        let g = source.group.clone();
        let table = CharacterTable::new(&g)?;
        let irreps = matrix_irreps(&g, &table)?;
        let t = table.trivial();
        let order = std::iter::once(t).chain((0..irreps.len()).filter(|&i| i != t)).collect();
        let conj = ConjugacyData::new(g);
        Ok(Surgery { op, source, target, work, schedule, reps: RepData { irreps, order, conj } })
    }

    /// Cut the horizontal edges of row `row` (1 ≤ row < h) of a patch.
    pub fn rough_split(group: Arc<FiniteGroup>, shape: PatchShape, row: i32) -> Result<Self> {
        if row < 1 || row >= shape.h {
            return Err(Error::Precondition(format!("rough split row {row} outside 1..{}", shape.h)));
        }
        let o = shape.origin;
        let top = PatchShape { h: row, ..shape };
        let bottom = PatchShape { h: shape.h - row, origin: vx(o.r + row, o.c), ..shape };
        let source = PatchCode::new(group.clone(), &[shape])?;
        let target = PatchCode::new(group, &[top, bottom])?;
        let schedule = (0..shape.w).map(|c| Probe::Edge(EdgeKey::h(o.r + row, o.c + c))).collect();
        let work = source.lattice.clone();
        Self::build(SurgeryOp::RoughSplit, source, target, work, schedule)
    }

    /// Cut the horizontal edges between columns `col` and `col + 1`.
    pub fn smooth_split(group: Arc<FiniteGroup>, shape: PatchShape, col: i32) -> Result<Self> {
        if col < 0 || col >= shape.w {
            return Err(Error::Precondition(format!("smooth split column {col} outside 0..{}", shape.w)));
        }
        let o = shape.origin;
        let left = PatchShape { w: col, ..shape };
        let right = PatchShape { w: shape.w - col - 1, origin: vx(o.r, o.c + col + 1), ..shape };
        let source = PatchCode::new(group.clone(), &[shape])?;
        let target = PatchCode::new(group, &[left, right])?;
        let schedule = (1..shape.h).map(|r| Probe::Fourier(EdgeKey::h(o.r + r, o.c + col))).collect();
        let work = source.lattice.clone();
        Self::build(SurgeryOp::SmoothSplit, source, target, work, schedule)
    }

    /// Join `top` to `bottom` (directly below, same width) along a row.
    pub fn rough_merge(group: Arc<FiniteGroup>, top: PatchShape, bottom: PatchShape) -> Result<Self> {
        let (o, b) = (top.origin, bottom.origin);
        if top.w != bottom.w || b.c != o.c || b.r != o.r + top.h {
            return Err(Error::Precondition("rough merge needs equal widths, bottom patch directly below".into()));
        }
        let merged = PatchShape { h: top.h + bottom.h, ..top };
        let source = PatchCode::new(group.clone(), &[top, bottom])?;
        let target = PatchCode::new(group, &[merged])?;
        let schedule = (0..=top.w).map(|c| Probe::Charge(vx(b.r, o.c + c))).collect();
        let work = target.lattice.clone();
        Self::build(SurgeryOp::RoughMerge, source, target, work, schedule)
    }

    /// Join `left` to `right` (one column gap, same height) along a column.
    pub fn smooth_merge(group: Arc<FiniteGroup>, left: PatchShape, right: PatchShape) -> Result<Self> {
        let (o, b) = (left.origin, right.origin);
        if left.h != right.h || b.r != o.r || b.c != o.c + left.w + 1 {
            return Err(Error::Precondition("smooth merge needs equal heights, right patch one column over".into()));
        }
        let merged = PatchShape { w: left.w + right.w + 1, ..left };
        let source = PatchCode::new(group.clone(), &[left, right])?;
        let target = PatchCode::new(group, &[merged])?;
        let work = target.lattice.clone();
        let schedule = (0..left.h)
            .map(|r| {
                let p = fc(o.r + r, o.c + left.w);
                let t = work.face_terms.iter().find(|t| t.site.p == p).expect("seam face term");
                Probe::Flux(t.site)
            })
            .collect();
        Self::build(SurgeryOp::SmoothMerge, source, target, work, schedule)
    }

    /// Rotate a patch by 180°, inverting every edge.
    pub fn antipode(group: Arc<FiniteGroup>, shape: PatchShape) -> Result<Self> {
        let source = PatchCode::new(group.clone(), &[shape])?;
        let target = PatchCode::new(group, &[shape])?;
        let work = source.lattice.clone();
        Self::build(SurgeryOp::Antipode, source, target, work, Vec::new())
    }

    /// Smallest geometry for each operation (patches of 1×2 faces or their halves).
    pub fn minimal(group: Arc<FiniteGroup>, op: SurgeryOp) -> Result<Self> {
        let full = PatchShape::new(1, 2);
        match op {
            SurgeryOp::SmoothSplit => Self::smooth_split(group, full, 0),
            SurgeryOp::RoughSplit => Self::rough_split(group, full, 1),
            SurgeryOp::SmoothMerge => Self::smooth_merge(group, PatchShape::new(0, 2), PatchShape::new(0, 2).at(0, 1)),
            SurgeryOp::RoughMerge => Self::rough_merge(group, PatchShape::new(1, 1), PatchShape::new(1, 1).at(1, 0)),
            SurgeryOp::Antipode => Self::antipode(group, full),
        }
    }

    /// The operation on patches of `w`×`h` faces: splits cut through the
    /// middle, merges join two such patches.
    pub fn sized(group: Arc<FiniteGroup>, op: SurgeryOp, w: i32, h: i32) -> Result<Self> {
        if w < 1 || h < 1 {
            return Err(Error::Config(format!("patch size {w}x{h} must be at least 1x1")));
        }
        let shape = PatchShape::new(w, h);
        match op {
            SurgeryOp::SmoothSplit => Self::smooth_split(group, shape, (w - 1) / 2),
            SurgeryOp::RoughSplit => Self::rough_split(group, shape, h / 2),
            SurgeryOp::SmoothMerge => Self::smooth_merge(group, shape, shape.at(0, w + 1)),
            SurgeryOp::RoughMerge => Self::rough_merge(group, shape, shape.at(h, 0)),
            SurgeryOp::Antipode => Self::antipode(group, shape),
        }
    }

    /// Upper estimate of the amplitudes stored by [`Surgery::sized`] on a
    /// generic logical input, computed without building any state.
    pub fn estimate_sized(order: usize, op: SurgeryOp, w: i32, h: i32) -> f64 {
        let shape = PatchShape::new(w, h);
        let (inputs, merged) = match op {
            SurgeryOp::SmoothSplit | SurgeryOp::RoughSplit | SurgeryOp::Antipode => (1, shape),
            SurgeryOp::SmoothMerge => (2, PatchShape::new(2 * w + 1, h)),
            SurgeryOp::RoughMerge => (2, PatchShape::new(w, 2 * h)),
        };
        let n = order as f64;
        let gauge = |s: PatchShape| n.powi(s.interior_vertices().len() as i32);
        let labels = n.powi(2);
        (gauge(shape) * gauge(shape).powi(inputs - 1) * labels).max(gauge(merged) * labels)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.source.group
    }

    pub fn schedule(&self) -> &[Probe] {
        &self.schedule
    }

    fn n_outcomes(&self, p: &Probe) -> usize {
        match p {
            Probe::Edge(_) => self.group().order(),
            Probe::Fourier(_) => self.reps.irreps.iter().map(|r| r.dim * r.dim).sum(),
            Probe::Charge(_) => self.reps.irreps.len(),
            Probe::Flux(_) => self.reps.conj.classes.len(),
        }
    }

    /// (irrep, i, j) of a Fourier outcome index.
    fn fourier_outcome(&self, mut k: usize) -> (usize, usize, usize) {
        for &p in &self.reps.order {
            let d = self.reps.irreps[p].dim;
            if k < d * d {
                return (p, k / d, k % d);
            }
            k -= d * d;
        }
        unreachable!("fourier outcome out of range")
    }

    fn outcome_label(&self, p: &Probe, k: usize) -> String {
        let g = self.group();
        match p {
            Probe::Edge(_) => g.label(k).to_string(),
            Probe::Fourier(_) => {
                let (pi, i, j) = self.fourier_outcome(k);
                format!("π{pi}[{i},{j}]")
            }
            Probe::Charge(_) => format!("π{}", self.reps.order[k]),
            Probe::Flux(_) => {
                let cl: Vec<&str> = self.reps.conj.classes[k].iter().map(|&x| g.label(x)).collect();
                format!("{{{}}}", cl.join(","))
            }
        }
    }

    fn probe_label(p: &Probe) -> String {
        match p {
            Probe::Edge(e) => format!("edge {e}"),
            Probe::Fourier(e) => format!("fourier {e}"),
            Probe::Charge(v) => format!("charge ({},{})", v.r, v.c),
            Probe::Flux(s) => format!("flux ({},{})", s.p.r, s.p.c),
        }
    }

    fn edge_index(&self, e: EdgeKey) -> usize {
        self.work.index_of(e).expect("schedule edge on the working lattice")
    }

    /// Unnormalised post-measurement state for outcome k.
    fn branch(&self, p: &Probe, k: usize, s: &LatticeState) -> LatticeState {
        let g = self.group().clone();
        match *p {
            Probe::Edge(e) => {
                let i = self.edge_index(e);
                s.map_monomial(|c| (c[i] as usize == k).then(|| (c.to_vec(), C64::new(1.0, 0.0))))
            }
            Probe::Fourier(e) => {
                let i = self.edge_index(e);
                let (pi, a, b) = self.fourier_outcome(k);
                let rep = &self.reps.irreps[pi];
                let norm = (rep.dim as f64 / g.order() as f64).sqrt();
                s.map_monomial(|c| {
                    let w = (rep.entry(c[i] as usize, a, b) * norm).conj();
                    let mut out = c.to_vec();
                    out[i] = 0;
                    (w.norm() > 0.0).then_some((out, w))
                })
            }
            Probe::Charge(v) => {
                let rep = &self.reps.irreps[self.reps.order[k]];
                let f = rep.dim as f64 / g.order() as f64;
                let coeffs: Vec<(usize, C64)> = g.elements().map(|h| (h, rep.character(h).conj() * f)).collect();
                s.vertex_combo(v, &coeffs)
            }
            Probe::Flux(site) => {
                let cl = &self.reps.conj.class_of;
                s.face_weight(site, |x| if cl[x] == k { C64::new(1.0, 0.0) } else { C64::default() })
            }
        }
    }

    /// Embed a source-code state into the working lattice.
    fn embed(&self, s: &LatticeState) -> LatticeState {
        if Arc::ptr_eq(&self.work, &self.source.lattice) {
            return s.clone();
        }
        let src = self.source.lattice.clone();
        let n = self.group().order();
        let map: Vec<Option<usize>> = self.work.edges().iter().map(|&e| src.index_of(e)).collect();
        let free: Vec<usize> = map.iter().enumerate().filter(|(_, m)| m.is_none()).map(|(i, _)| i).collect();
        let plus = self.op == SurgeryOp::SmoothMerge;
        let w = if plus { C64::new((n as f64).powf(-(free.len() as f64) / 2.0), 0.0) } else { C64::new(1.0, 0.0) };
        let total = if plus { n.pow(free.len() as u32) } else { 1 };
        s.transfer(self.work.clone(), |c, out| {
            let base: Vec<u8> = map.iter().map(|m| m.map_or(0, |i| c[i])).collect();
            for mut code in 0..total {
                let mut cfg = base.clone();
                for &f in &free {
                    cfg[f] = (code % n) as u8;
                    code /= n;
                }
                out.push((cfg, w));
            }
        })
    }

    /// Restrict the working lattice to the target code (consumed edges are at e).
    fn extract(&self, s: &LatticeState) -> LatticeState {
        if Arc::ptr_eq(&self.work, &self.target.lattice) {
            return s.clone();
        }
        let map: Vec<usize> =
            self.target.lattice.edges().iter().map(|&e| self.work.index_of(e).expect("target edge in work")).collect();
        s.transfer(self.target.lattice.clone(), |c, out| {
            out.push((map.iter().map(|&i| c[i]).collect(), C64::new(1.0, 0.0)));
        })
    }

    fn rotate(&self, s: &LatticeState) -> LatticeState {
        let shape = self.source.shapes[0];
        let (o, w, h) = (shape.origin, shape.w, shape.h);
        let lat = &self.source.lattice;
        let g = self.group().clone();
        let map: Vec<usize> = lat
            .edges()
            .iter()
            .map(|e| {
                let (r, c) = (e.tail().r - o.r, e.tail().c - o.c);
                let img = if e.head().r > e.tail().r {
                    EdgeKey::v(o.r + h - 1 - r, o.c + w - c)
                } else {
                    EdgeKey::h(o.r + h - r, o.c + w - 1 - c)
                };
                lat.index_of(img).expect("rotated edge")
            })
            .collect();
        s.map_monomial(|c| {
            let mut out = vec![0u8; c.len()];
            for (i, &j) in map.iter().enumerate() {
                out[j] = g.inv(c[i] as usize) as u8;
            }
            Some((out, C64::new(1.0, 0.0)))
        })
    }

    fn shape_in(&self) -> PatchShape {
        self.source.shapes[0]
    }

    /// Apply the correction for outcome k of step i; returns how it was handled.
    fn correct(&self, i: usize, k: usize, pre: &LatticeState, post: LatticeState, byproduct: &mut Option<Byproduct>) -> (LatticeState, Correction) {
        if k == 0 {
            return (post, Correction::None);
        }
        let g = self.group().clone();
        let last = i + 1 == self.schedule.len();
        match (self.op, self.schedule[i]) {
            // Edge outcomes are fixed after the whole row is read.
            (SurgeryOp::RoughSplit, _) => (post, Correction::Gauge),
            (SurgeryOp::SmoothSplit, _) => {
                let (pi, _, _) = self.fourier_outcome(k);
                if self.reps.irreps[pi].dim == 1 {
                    (post, Correction::Phase)
                } else {
                    (self.branch(&self.schedule[i], 0, pre), Correction::Swap)
                }
            }
            (SurgeryOp::RoughMerge, Probe::Charge(v)) => {
                let rep = &self.reps.irreps[self.reps.order[k]];
                if rep.dim != 1 {
                    return (self.branch(&self.schedule[i], 0, pre), Correction::Swap);
                }
                let path: Vec<(usize, bool)> = if last {
                    let s = self.target.shapes[0];
                    (v.r..s.origin.r + s.h).map(|r| (self.edge_index(EdgeKey::v(r, v.c)), true)).collect()
                } else {
                    vec![(self.edge_index(EdgeKey::h(v.r, v.c)), true)]
                };
                let fixed = post.weight_by(|c| rep.character(path_product(&g, &path, c)));
                if last {
                    *byproduct = Some(Byproduct::Charge { irrep: self.reps.order[k] });
                    (fixed, Correction::Byproduct)
                } else {
                    (fixed, Correction::Move)
                }
            }
            (SurgeryOp::SmoothMerge, Probe::Flux(site)) => {
                let cl = &self.reps.conj.classes[k];
                if cl.len() != 1 {
                    return (self.branch(&self.schedule[i], 0, pre), Correction::Swap);
                }
                let z = cl[0];
                if last {
                    let s = self.target.shapes[0];
                    let edges: Vec<usize> = (site.p.c + 1..=s.origin.c + s.w).map(|c| self.edge_index(EdgeKey::v(site.p.r, c))).collect();
                    let zi = g.inv(z);
                    let fixed = post.map_monomial(|c| {
                        let mut out = c.to_vec();
                        for &e in &edges {
                            out[e] = g.mul(zi, out[e] as usize) as u8;
                        }
                        Some((out, C64::new(1.0, 0.0)))
                    });
                    *byproduct = Some(Byproduct::Flux { element: z });
                    (fixed, Correction::Byproduct)
                } else {
                    let e = self.edge_index(EdgeKey::h(site.p.r + 1, site.p.c));
                    let fixed = post.map_monomial(|c| {
                        let mut out = c.to_vec();
                        out[e] = g.mul(out[e] as usize, z) as u8;
                        Some((out, C64::new(1.0, 0.0)))
                    });
                    (fixed, Correction::Move)
                }
            }
            _ => unreachable!("probe does not belong to this operation"),
        }
    }

    /// Corrections applied once the whole schedule has been read.
    fn finish(&self, s: LatticeState, outcomes: &[usize]) -> LatticeState {
        let g = self.group().clone();
        match self.op {
            SurgeryOp::RoughSplit => {
                // Gauge x_c = g_0⋯g_{c-1} at the cut vertices sets the row to e.
                let mut out = s;
                let mut prefix = 0;
                for (c, (&k, p)) in outcomes.iter().zip(&self.schedule).enumerate() {
                    let Probe::Edge(e) = *p else { unreachable!() };
                    if c > 0 && prefix != 0 {
                        out = out.vertex_action(e.tail(), prefix);
                    }
                    prefix = g.mul(prefix, k);
                }
                if prefix != 0 {
                    let Probe::Edge(e) = *self.schedule.last().expect("nonempty row") else { unreachable!() };
                    out = out.vertex_action(e.head(), prefix);
                }
                out
            }
            SurgeryOp::SmoothSplit => {
                // Rebuild each consumed edge from the two columns it joined.
                let shape = self.shape_in();
                let mut phases: Vec<(usize, Vec<usize>, Vec<usize>)> = Vec::new();
                for (&k, p) in outcomes.iter().zip(&self.schedule) {
                    let (pi, _, _) = self.fourier_outcome(k);
                    if k == 0 || self.reps.irreps[pi].dim != 1 {
                        continue;
                    }
                    let Probe::Fourier(e) = *p else { unreachable!() };
                    let col = |c: i32| (shape.origin.r..e.tail().r).map(|r| self.edge_index(EdgeKey::v(r, c))).collect();
                    phases.push((pi, col(e.tail().c), col(e.head().c)));
                }
                if phases.is_empty() {
                    return s;
                }
                let prod = |c: &[u8], idx: &[usize]| idx.iter().fold(0, |a, &i| g.mul(a, c[i] as usize));
                s.weight_by(|c| {
                    phases.iter().map(|(pi, l, r)| {
                        let edge = g.mul(g.inv(prod(c, l)), prod(c, r));
                        self.reps.irreps[*pi].character(edge)
                    }).product()
                })
            }
            _ => s,
        }
    }

    /// Run the schedule, choosing outcome indices with `choose(step, probabilities)`.
    pub fn run(
        &self,
        input: &LatticeState,
        mut choose: impl FnMut(usize, &[f64]) -> usize,
        mut trace: Option<&mut Vec<TraceEntry>>,
    ) -> Result<(LatticeState, MeasurementRecord)> {
        if input.lattice().edges() != self.source.lattice.edges() {
            return Err(Error::Precondition("input state is not on the source code".into()));
        }
        let mut record = MeasurementRecord { op: self.op, seed: None, steps: Vec::new(), byproduct: None };
        if self.op == SurgeryOp::Antipode {
            return Ok((self.rotate(input), record));
        }
        let mut s = self.embed(input);
        let mut outcomes = Vec::new();
        for (i, p) in self.schedule.iter().enumerate() {
            let total = s.norm_sqr();
            let branches: Vec<LatticeState> = (0..self.n_outcomes(p)).map(|k| self.branch(p, k, &s)).collect();
            let probs: Vec<f64> =
                branches.iter().map(|b| if total > 0.0 { b.norm_sqr() / total } else { 0.0 }).collect();
            if let Some(t) = trace.as_deref_mut() {
                t.push((s.clone(), probs.clone()));
            }
            let k = choose(i, &probs);
            if k >= probs.len() {
                return Err(Error::Config(format!("outcome {k} out of range at step {i}")));
            }
            let post = branches.into_iter().nth(k).expect("branch");
            let (next, corr) = self.correct(i, k, &s, post, &mut record.byproduct);
            record.steps.push(StepRecord {
                probe: Self::probe_label(p),
                outcome: k,
                label: self.outcome_label(p, k),
                probability: probs[k],
                correction: corr,
            });
            outcomes.push(k);
            s = next;
        }
        let s = self.finish(s, &outcomes);
        Ok((self.extract(&s), record))
    }

    /// The deterministic map: every outcome trivial.
    pub fn apply(&self, input: &LatticeState) -> Result<LatticeState> {
        Ok(self.run(input, |_, _| 0, None)?.0)
    }

    /// Sample outcomes by the Born rule.
    pub fn sample(&self, input: &LatticeState, rng: &mut impl Rng, trace: Option<&mut Vec<TraceEntry>>) -> Result<(LatticeState, MeasurementRecord)> {
        self.run(
            input,
            |_, probs| {
                let x: f64 = rng.random::<f64>() * probs.iter().sum::<f64>();
                let mut acc = 0.0;
                for (k, &p) in probs.iter().enumerate() {
                    acc += p;
                    if x < acc && p > 0.0 {
                        return k;
                    }
                }
                probs.iter().rposition(|&p| p > 0.0).unwrap_or(0)
            },
            trace,
        )
    }

    /// Re-run with the outcomes of an earlier record.
    pub fn replay(&self, input: &LatticeState, record: &MeasurementRecord) -> Result<LatticeState> {
        if record.steps.len() != self.schedule.len() || record.op != self.op {
            return Err(Error::Config("record does not match this operation".into()));
        }
        Ok(self.run(input, |i, _| record.steps[i].outcome, None)?.0)
    }

    /// Logical matrix of a map from source to target code (rows: target
    /// basis) and the worst out-of-code leakage relative to the output norm.
    pub fn logical_map(&self, f: impl Fn(&LatticeState) -> Result<LatticeState>) -> Result<(DMatrix<C64>, f64)> {
        let (n_in, n_out) = (self.source.logical_dim(), self.target.logical_dim());
        let mut m = DMatrix::zeros(n_out, n_in);
        let mut leak = 0f64;
        for j in 0..n_in {
            let out = f(&self.source.logical_index(j)?)?;
            let (v, l) = self.target.readout(&out)?;
            if out.norm() > crate::PRUNE {
                leak = leak.max(l / out.norm());
            }
            m.set_column(j, &v);
        }
        Ok((m, leak))
    }

    /// The Hopf-algebra map in the logical bases, with an optional byproduct.
    pub fn reference(&self, byproduct: Option<Byproduct>) -> DMatrix<C64> {
        let g = self.group();
        let n = g.order();
        let one = C64::new(1.0, 0.0);
        let (n_in, n_out) = (self.source.logical_dim(), self.target.logical_dim());
        let mut m = DMatrix::zeros(n_out, n_in);
        match self.op {
            SurgeryOp::SmoothSplit => (0..n).for_each(|h| m[(h * n + h, h)] = one),
            SurgeryOp::RoughSplit => {
                for a in 0..n {
                    for b in 0..n {
                        m[(a * n + b, g.mul(a, b))] = one;
                    }
                }
            }
            SurgeryOp::RoughMerge => {
                for a in 0..n {
                    for b in 0..n {
                        let phase = match byproduct {
                            Some(Byproduct::Charge { irrep }) => self.reps.irreps[irrep].character(b),
                            _ => one,
                        };
                        m[(g.mul(a, b), a * n + b)] = phase;
                    }
                }
            }
            SurgeryOp::SmoothMerge => {
                let z = match byproduct {
                    Some(Byproduct::Flux { element }) => element,
                    _ => 0,
                };
                (0..n).for_each(|a| m[(a, a * n + g.mul(z, a))] = one);
            }
            SurgeryOp::Antipode => (0..n).for_each(|h| m[(g.inv(h), h)] = one),
        }
        m
    }
}

/// min_c ‖m − c·r‖ / ‖m‖, with the minimising c.
pub fn proportional_residual(m: &DMatrix<C64>, r: &DMatrix<C64>) -> (C64, f64) {
    let rr: f64 = r.iter().map(|x| x.norm_sqr()).sum();
    let mn = m.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if rr == 0.0 || mn < crate::PRUNE {
        return (C64::default(), f64::INFINITY);
    }
    let c: C64 = r.iter().zip(m.iter()).map(|(a, b)| a.conj() * b).sum::<C64>() / rr;
    let res = m.iter().zip(r.iter()).fold(0.0, |acc, (a, b)| acc + (a - c * b).norm_sqr()).sqrt();
    (c, res / mn)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_core::catalog::s3;
    use rand::SeedableRng;

    fn groups() -> Vec<Arc<FiniteGroup>> {
        vec![Arc::new(FiniteGroup::cyclic(2).unwrap()), Arc::new(FiniteGroup::cyclic(3).unwrap())]
    }

    #[test]
    fn deterministic_maps_small_groups() {
        for g in groups() {
            for op in SurgeryOp::ALL {
                let s = Surgery::minimal(g.clone(), op).unwrap();
                let (m, leak) = s.logical_map(|x| s.apply(x)).unwrap();
                let (_, res) = proportional_residual(&m, &s.reference(None));
                assert!(leak < 1e-9 && res < 1e-9, "{} {}: leak {leak} res {res}\n{m}", g.order(), op.name());
            }
        }
    }

    #[test]
    fn measured_maps_small_groups() {
        for g in groups() {
            for op in SurgeryOp::ALL {
                let s = Surgery::minimal(g.clone(), op).unwrap();
                for seed in 0..20 {
                    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                    let n = s.source.logical_dim();
                    let input = (0..n).fold(LatticeState::zero(s.source.lattice.clone()), |acc, j| {
                        acc.axpy(C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5), &s.source.logical_index(j).unwrap())
                    });
                    let (_, rec) = s.sample(&input, &mut rng, None).unwrap();
                    assert_eq!(rec.flagged(), 0);
                    let (m, leak) = s.logical_map(|x| s.replay(x, &rec)).unwrap();
                    let (_, res) = proportional_residual(&m, &s.reference(rec.byproduct));
                    assert!(leak < 1e-9 && res < 1e-9, "{} {} seed {seed}: {rec:?} leak {leak} res {res}\n{m}", g.order(), op.name());
                }
            }
        }
    }

    #[test]
    fn s3_minimal_maps() {
        let g = Arc::new(s3());
        for op in SurgeryOp::ALL {
            let s = Surgery::minimal(g.clone(), op).unwrap();
            let (m, leak) = s.logical_map(|x| s.apply(x)).unwrap();
            let (_, res) = proportional_residual(&m, &s.reference(None));
            assert!(leak < 1e-9 && res < 1e-9, "{}: leak {leak} res {res}", op.name());
        }
    }

    #[test]
    fn s3_measured_maps() {
        let g = Arc::new(s3());
        for op in SurgeryOp::ALL {
            let s = Surgery::minimal(g.clone(), op).unwrap();
            for seed in 0..10 {
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                let n = s.source.logical_dim();
                let input = (0..n).fold(LatticeState::zero(s.source.lattice.clone()), |acc, j| {
                    acc.axpy(C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5), &s.source.logical_index(j).unwrap())
                });
                let (_, rec) = s.sample(&input, &mut rng, None).unwrap();
                let (m, leak) = s.logical_map(|x| s.replay(x, &rec)).unwrap();
                let (_, res) = proportional_residual(&m, &s.reference(rec.byproduct));
                assert!(leak < 1e-9 && res < 1e-9, "{} seed {seed}: {rec:?} leak {leak} res {res}", op.name());
            }
        }
    }
}
