//! Resolve group, subgroup and transversal selectors.

use std::path::Path;
use std::sync::Arc;

use qdouble::group_core::{catalog as groups, FiniteGroup, Subgroup, Transversal};
use qdouble::quasihopf::catalog;
use qdouble::{Error, Result};

/// Catalog name (`s3`, `z4`, `s4`, `d4`, `q8`, `octonion`) or a JSON group file.
pub fn group(sel: &str) -> Result<Arc<FiniteGroup>> {
    if let Some(g) = groups::by_name(sel) {
        return Ok(Arc::new(g));
    }
    if Path::new(sel).is_file() {
        let text = std::fs::read_to_string(sel).map_err(|e| Error::Config(format!("{sel}: {e}")))?;
        return FiniteGroup::from_json(&text).map(Arc::new);
    }
    Err(Error::Config(format!("unknown group {sel:?}")))
}

/// `trivial`, `whole`, or comma-separated generator labels.
pub fn subgroup(g: &Arc<FiniteGroup>, sel: &str) -> Result<Subgroup> {
    match sel {
        "trivial" | "e" => Ok(Subgroup::trivial(g.clone())),
        "whole" | "G" => Ok(Subgroup::whole(g.clone())),
        _ => {
            let gens = labels(g, sel)?;
            Subgroup::generated(g.clone(), &gens)
        }
    }
}

pub fn labels(g: &FiniteGroup, list: &str) -> Result<Vec<usize>> {
    list.split(',')
        .map(|l| g.find(l.trim()).ok_or_else(|| Error::Config(format!("no element labelled {l:?}"))))
        .collect()
}

#[derive(Debug, Clone, Default)]
pub struct TransversalSel {
    pub transversal: Option<String>,
    pub group: Option<String>,
    pub subgroup: Option<String>,
}

impl TransversalSel {
    /// A catalog name; or `--group`/`--subgroup` with `--transversal` as a
    /// comma-separated representative list (smallest representatives if absent).
    pub fn resolve(&self) -> Result<Arc<Transversal>> {
        match (&self.transversal, &self.group) {
            (Some(name), None) => catalog::by_name(name).map(Arc::new),
            (t, Some(gsel)) => {
                let g = group(gsel)?;
                let k = subgroup(&g, self.subgroup.as_deref().unwrap_or("trivial"))?;
                match t {
                    Some(reps) => Transversal::new(g.clone(), k, &labels(&g, reps)?).map(Arc::new),
                    None => Transversal::smallest(g, k).map(Arc::new),
                }
            }
            (None, None) => Err(Error::Config("give --transversal NAME or --group G [--subgroup K]".into())),
        }
    }

    /// Text identifying the selection in reports.
    pub fn describe(&self) -> String {
        match (&self.transversal, &self.group) {
            (Some(t), None) => t.clone(),
            (t, Some(g)) => format!(
                "{g} K={} R={}",
                self.subgroup.as_deref().unwrap_or("trivial"),
                t.as_deref().unwrap_or("smallest")
            ),
            (None, None) => String::new(),
        }
    }
}

/// `WxH`, or a bare width with height 1.
pub fn size(sel: &str) -> Result<(i32, i32)> {
    let bad = || Error::Config(format!("size {sel:?} is not WxH"));
    let mut it = sel.split(['x', 'X']);
    let w = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    let h = match it.next() {
        Some(h) => h.parse().map_err(|_| bad())?,
        None => 1,
    };
    if it.next().is_some() {
        return Err(bad());
    }
    Ok((w, h))
}
