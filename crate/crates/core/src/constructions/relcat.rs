use std::collections::HashMap;
use std::sync::Arc;

use crate::category::EaCategory;
use crate::error::{Error, Result};
use crate::family::{sigma, Family, Sum};
use crate::relation::{functionality_witness, rel_compose, saturate, saturation_gaps, Relation};
use crate::report::Report;
use crate::setoid::{ExtFun, Labels, Setoid};

use super::funcat::require_family;

/// `S(I,F)` with the decoding of its arrows.
#[derive(Clone, Debug)]
pub struct SCategory {
    pub category: Arc<EaCategory>,
    sum: Sum,
    triples: Vec<(usize, usize, Relation)>,
    lookup: HashMap<(usize, usize, Vec<bool>), usize>,
}

impl SCategory {
    pub fn sum(&self) -> &Sum {
        &self.sum
    }

    pub fn triple(&self, e: usize) -> (usize, usize, &Relation) {
        let (i, j, r) = &self.triples[e];
        (*i, *j, r)
    }

    /// The arrow `(i, j, R)`, if `R` is one of the enumerated relations.
    pub fn find(&self, i: usize, j: usize, r: &Relation) -> Option<usize> {
        self.lookup.get(&(i, j, r.bits().to_vec())).copied()
    }
}

/// Sum classes meeting `F̌(i)`, by representative.
fn member_classes(sum: &Sum, i: usize) -> Vec<usize> {
    let s = sum.setoid();
    let mut reps: Vec<usize> = sum.fiber_range(i).map(|u| s.rep(u)).collect();
    reps.sort_unstable();
    reps.dedup();
    reps
}

/// Checks a raw pair set as the relation part of an arrow `(i, j, R)`:
/// saturation, functionality, `dom(R) ≐ F̌(i)` and `ran(R) ⊂̇ F̌(j)`.
pub fn check_s_arrow(f: &Family, sum: &Sum, i: usize, j: usize, raw: &[(usize, usize)]) -> Result<Report> {
    let idx = f.index();
    let base = sum.setoid().clone();
    let mut report = Report::new();
    let gaps = saturation_gaps(&base, raw)?;
    report.check("saturation");
    if let Some(&(u, v)) = gaps.first() {
        report.fail("saturation", format!("({},{}) is forced by equality but missing", base.name(u), base.name(v)));
    }
    let r = saturate(base.clone(), raw)?;
    report.check("functionality");
    if let Some((u, v, w)) = functionality_witness(&r) {
        report.fail("functionality", format!("{} is related to {} and {}", base.name(u), base.name(v), base.name(w)));
    }
    let (dom, ran) = (r.dom_members(), r.ran_members());
    let (fi, fj) = (sum.members(i), sum.members(j));
    report.check("dom condition").check("ran condition");
    for u in base.elements() {
        if dom[u] != fi[u] {
            let side = if dom[u] { "outside" } else { "missing from the domain but in" };
            report.fail("dom condition", format!("{} is {} F̌({})", base.name(u), side, idx.name(i)));
        }
        if ran[u] && !fj[u] {
            report.fail("ran condition", format!("{} is in the range but not in F̌({})", base.name(u), idx.name(j)));
        }
    }
    Ok(report)
}

/// Arrows are all `(i, j, R)` with `R` a saturated functional relation on
/// the sum, `dom(R) ≐ F̌(i)` and `ran(R) ⊂̇ F̌(j)`; equal when `i = i'`,
/// `j = j'` and `R ≐ R'`. Such an `R` is a choice of image class for each sum
/// class in `F̌(i)`, which is how they are enumerated.
pub fn build_s(f: &Family) -> Result<SCategory> {
    require_family(f)?;
    let sum = sigma(f)?;
    let base = sum.setoid().clone();
    let idx = f.index();
    let members: Vec<Vec<usize>> = idx.elements().map(|i| member_classes(&sum, i)).collect();
    let mut triples = Vec::new();
    let mut names = Vec::new();
    let mut keys = Vec::new();
    for i in idx.elements() {
        for j in idx.elements() {
            let (src, dst) = (&members[i], &members[j]);
            if src.is_empty() {
                let r = Relation::empty(base.clone());
                names.push(format!("({},{},{{}})", idx.name(i), idx.name(j)));
                keys.push((idx.rep(i), idx.rep(j), r.bits().to_vec()));
                triples.push((i, j, r));
                continue;
            }
            if dst.is_empty() {
                continue;
            }
            let mut choice = vec![0; src.len()];
            loop {
                let raw: Vec<(usize, usize)> = src.iter().zip(&choice).map(|(&u, &c)| (u, dst[c])).collect();
                let r = saturate(base.clone(), &raw)?;
                let shown: Vec<String> =
                    raw.iter().map(|&(u, v)| format!("[{}]↦[{}]", base.name(u), base.name(v))).collect();
                names.push(format!("({},{},{{{}}})", idx.name(i), idx.name(j), shown.join(", ")));
                keys.push((idx.rep(i), idx.rep(j), r.bits().to_vec()));
                triples.push((i, j, r));
                // Next choice, odometer style.
                let mut k = 0;
                while k < choice.len() {
                    choice[k] += 1;
                    if choice[k] < dst.len() {
                        break;
                    }
                    choice[k] = 0;
                    k += 1;
                }
                if k == choice.len() {
                    break;
                }
            }
        }
    }
    let arrows = Arc::new(Setoid::from_keys(Labels::Named(names), &keys));
    let lookup: HashMap<(usize, usize, Vec<bool>), usize> =
        triples.iter().enumerate().map(|(e, (i, j, r))| ((*i, *j, r.bits().to_vec()), e)).collect();

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

    let find = |i: usize, j: usize, r: &Relation| {
        lookup
            .get(&(i, j, r.bits().to_vec()))
            .copied()
            .ok_or_else(|| Error::Precondition(format!("relation {} is not an arrow", r.describe())))
    };
    let ids = idx
        .elements()
        .map(|i| find(i, i, &crate::relation::identity_relation(&sum, i)))
        .collect::<Result<Vec<_>>>()?;
    let cmp_map = pairs
        .iter()
        .map(|&(e1, e2)| {
            let ((i, _, r), (_, k, q)) = (&triples[e1], &triples[e2]);
            find(*i, *k, &rel_compose(q, r)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let id = ExtFun::new(idx.clone(), arrows.clone(), ids)?;
    let dom = ExtFun::new(arrows.clone(), idx.clone(), triples.iter().map(|t| t.0).collect())?;
    let cod = ExtFun::new(arrows.clone(), idx.clone(), triples.iter().map(|t| t.1).collect())?;
    let fst = ExtFun::new(composable.clone(), arrows.clone(), pairs.iter().map(|p| p.0).collect())?;
    let snd = ExtFun::new(composable.clone(), arrows.clone(), pairs.iter().map(|p| p.1).collect())?;
    let cmp = ExtFun::new(composable.clone(), arrows.clone(), cmp_map)?;
    let category = EaCategory::new(idx.clone(), arrows, composable, id, dom, cod, cmp, fst, snd)?;
    Ok(SCategory { category: Arc::new(category), sum, triples, lookup })
}
