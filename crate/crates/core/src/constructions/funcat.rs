use std::collections::HashMap;
use std::sync::Arc;

use crate::category::EaCategory;
use crate::error::{Error, Result};
use crate::family::{check_family, Family};
use crate::setoid::{extensional_maps, ExtFun, Labels, Setoid};

/// `C(I,F)` with the decoding of its arrows.
#[derive(Clone, Debug)]
pub struct CCategory {
    pub category: Arc<EaCategory>,
    family: Family,
    triples: Vec<(usize, usize, Vec<usize>)>,
    lookup: HashMap<(usize, usize, Vec<usize>), usize>,
}

impl CCategory {
    pub fn family(&self) -> &Family {
        &self.family
    }

    /// `(i, j, h)` for arrow `e`.
    pub fn triple(&self, e: usize) -> (usize, usize, &[usize]) {
        let (i, j, h) = &self.triples[e];
        (*i, *j, h)
    }

    pub fn fiber_map(&self, e: usize) -> ExtFun {
        let (i, j, h) = self.triple(e);
        ExtFun::new(self.family.fiber(i).clone(), self.family.fiber(j).clone(), h.to_vec())
            .expect("stored maps are total")
    }

    /// The arrow `(i, j, h)`, if `h` is an extensional map `F(i) → F(j)`.
    pub fn find(&self, i: usize, j: usize, h: &[usize]) -> Option<usize> {
        self.lookup.get(&(i, j, h.to_vec())).copied()
    }
}

pub(crate) fn require_family(f: &Family) -> Result<()> {
    let report = check_family(f);
    if report.is_ok() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("invalid family: {}", report.summary())))
    }
}

/// Arrows are all `(i, j, h)` with `h : F(i) → F(j)` extensional, equal when
/// `h' ∘ F(p) = F(q) ∘ h`. Classes are keyed by moving `h` to the index
/// representatives, `F(j → rj) ∘ h ∘ F(ri → i)`.
pub fn build_c(f: &Family) -> Result<CCategory> {
    require_family(f)?;
    let idx = f.index();
    let mut triples = Vec::new();
    let mut names = Vec::new();
    let mut keys = Vec::new();
    for i in idx.elements() {
        for j in idx.elements() {
            let (ri, rj) = (idx.rep(i), idx.rep(j));
            let (into_i, out_of_j) = (f.tau(ri, i), f.tau(j, rj));
            let target = f.fiber(rj);
            for h in extensional_maps(f.fiber(i), f.fiber(j)) {
                let moved: Vec<usize> =
                    f.fiber(ri).elements().map(|x| target.class_no(out_of_j.apply(h[into_i.apply(x)]))).collect();
                let fun = ExtFun::new(f.fiber(i).clone(), f.fiber(j).clone(), h.clone())?;
                names.push(format!("({},{},{})", idx.name(i), idx.name(j), fun.describe()));
                keys.push((ri, rj, moved));
                triples.push((i, j, h));
            }
        }
    }
    let arrows = Arc::new(Setoid::from_keys(Labels::Named(names), &keys));
    let lookup: HashMap<(usize, usize, Vec<usize>), usize> =
        triples.iter().enumerate().map(|(e, t)| (t.clone(), e)).collect();

    let mut by_dom: HashMap<usize, Vec<usize>> = HashMap::new();
    for (e, t) in triples.iter().enumerate() {
        by_dom.entry(idx.rep(t.0)).or_default().push(e);
    }
    let mut pairs = Vec::new();
    for (e1, t) in triples.iter().enumerate() {
        for &e2 in by_dom.get(&idx.rep(t.1)).into_iter().flatten() {
            pairs.push((e1, e2));
        }
    }
    let pair_keys: Vec<(usize, usize)> = pairs.iter().map(|&(x, y)| (arrows.rep(x), arrows.rep(y))).collect();
    let composable = Arc::new(Setoid::from_keys(Labels::Indexed { prefix: "u".into(), len: pairs.len() }, &pair_keys));

    let find = |i: usize, j: usize, h: Vec<usize>| {
        lookup.get(&(i, j, h)).copied().ok_or_else(|| Error::Precondition("composite is not extensional".into()))
    };
    let ids = idx.elements().map(|i| find(i, i, f.fiber(i).elements().collect())).collect::<Result<Vec<_>>>()?;
    let cmp_map = pairs
        .iter()
        .map(|&(e1, e2)| {
            let ((i, j, h), (j2, k, g)) = (&triples[e1], &triples[e2]);
            let bridge = f.tau(*j, *j2);
            find(*i, *k, h.iter().map(|&x| g[bridge.apply(x)]).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    let id = ExtFun::new(idx.clone(), arrows.clone(), ids)?;
    let dom = ExtFun::new(arrows.clone(), idx.clone(), triples.iter().map(|t| t.0).collect())?;
    let cod = ExtFun::new(arrows.clone(), idx.clone(), triples.iter().map(|t| t.1).collect())?;
    let fst = ExtFun::new(composable.clone(), arrows.clone(), pairs.iter().map(|p| p.0).collect())?;
    let snd = ExtFun::new(composable.clone(), arrows.clone(), pairs.iter().map(|p| p.1).collect())?;
    let cmp = ExtFun::new(composable.clone(), arrows.clone(), cmp_map)?;
    let category = EaCategory::new(idx.clone(), arrows, composable, id, dom, cod, cmp, fst, snd)?;
    Ok(CCategory { category: Arc::new(category), family: f.clone(), triples, lookup })
}
