//! Translations between the essentially algebraic and hom-family
//! presentations, with isomorphism certificates for the round trips.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::family::Family;
use crate::report::Report;
use crate::setoid::{same_setoid, ExtFun, Labels, Setoid};

use super::ea::{check_ea, ComposableIndex, EaCategory};
use super::ecat::CompTable;
use super::hf::{check_hf, HfCategory};

/// Result of [`ea_to_hf`]: the HF-category and where each arrow landed.
#[derive(Clone, Debug)]
pub struct EaToHf {
    pub category: HfCategory,
    classes: usize,
    position: Vec<usize>,
    members: Vec<Vec<usize>>,
}

impl EaToHf {
    /// Position of arrow `e` inside `Hom(dom e, cod e)`.
    pub fn position(&self, e: usize) -> usize {
        self.position[e]
    }

    /// Arrows making up the carrier of `Hom(a, b)`.
    pub fn members(&self, a: usize, b: usize) -> &[usize] {
        let ob = self.category.ob();
        &self.members[ob.class_no(a) * self.classes + ob.class_no(b)]
    }
}

/// `Hom(a, b)` is the setoid of arrows `f` with `dom f = a` and `cod f = b`,
/// with the arrow equality. Arrows whose endpoints are merely equal to `a`,
/// `b` are included, so equal object pairs share one carrier and every
/// transport is the identity re-tagging.
pub fn ea_to_hf(c: &EaCategory) -> Result<EaToHf> {
    let report = check_ea(c);
    if !report.is_ok() {
        return Err(Error::Precondition(format!("not an essentially algebraic category: {}", report.summary())));
    }
    let ob = c.objects.clone();
    let (n, k) = (ob.len(), ob.class_count());
    let mut members = vec![Vec::new(); k * k];
    let mut position = vec![0; c.arrows.len()];
    for e in c.arrows.elements() {
        let slot = &mut members[ob.class_no(c.dom.apply(e)) * k + ob.class_no(c.cod.apply(e))];
        position[e] = slot.len();
        slot.push(e);
    }
    let carriers: Vec<Arc<Setoid>> = members.iter().map(|m| Arc::new(c.arrows.restrict(m))).collect();
    let slot = |a: usize, b: usize| ob.class_no(a) * k + ob.class_no(b);
    let fibers: Vec<Arc<Setoid>> = (0..n * n).map(|p| carriers[slot(p / n, p % n)].clone()).collect();
    let index = Arc::new(Setoid::product(&ob, &ob));
    let mut transports = BTreeMap::new();
    for p in 0..n * n {
        for q in (0..n * n).filter(|&q| index.equiv(p, q)) {
            transports.insert((p, q), ExtFun::identity(fibers[p].clone()));
        }
    }
    let hom = Family::new(index, fibers, transports)?;
    let ids = ob.elements().map(|a| position[c.id.apply(a)]).collect();

    let composable = ComposableIndex::new(c);
    let mut cache: HashMap<(usize, usize, usize), Arc<CompTable>> = HashMap::new();
    let mut comp = Vec::with_capacity(n * n * n);
    for a in 0..n {
        for b in 0..n {
            for cc in 0..n {
                let key = (ob.class_no(a), ob.class_no(b), ob.class_no(cc));
                if let Some(t) = cache.get(&key) {
                    comp.push(t.clone());
                    continue;
                }
                let (rows, cols) = (&members[slot(b, cc)], &members[slot(a, b)]);
                let mut data = Vec::with_capacity(rows.len() * cols.len());
                for &g in rows {
                    for &f in cols {
                        let u = *composable.find(c, f, g).first().ok_or_else(|| {
                            Error::Precondition(format!("no composable pair for {} after {}", c.arrows.name(g), c.arrows.name(f)))
                        })?;
                        let h = c.cmp.apply(u);
                        if ob.class_no(c.dom.apply(h)) != key.0 || ob.class_no(c.cod.apply(h)) != key.2 {
                            return Err(Error::Precondition(format!("composite {} has the wrong endpoints", c.arrows.name(h))));
                        }
                        data.push(position[h]);
                    }
                }
                let t = Arc::new(CompTable::new(rows.len(), cols.len(), data)?);
                cache.insert(key, t.clone());
                comp.push(t);
            }
        }
    }
    let category = HfCategory::new(ob, hom, ids, comp)?;
    Ok(EaToHf { category, classes: k, position, members })
}

/// Result of [`hf_to_ea`]: the EA-category and the arrow numbering.
#[derive(Clone, Debug)]
pub struct HfToEa {
    pub category: EaCategory,
    n: usize,
    offsets: Vec<usize>,
}

impl HfToEa {
    /// The arrow `(a, b, f)`.
    pub fn arrow(&self, a: usize, b: usize, f: usize) -> usize {
        self.offsets[a * self.n + b] + f
    }
}

/// Arrows are triples `(a, b, f)` with `f ∈ Hom(a, b)`, equal when the
/// transport of `f` is equal to `f'`; composable pairs are pairs of arrows
/// with `cod = dom`, equal componentwise; composition inserts the transport
/// of the identity along the middle equality.
pub fn hf_to_ea(c: &HfCategory) -> Result<HfToEa> {
    let report = check_hf(c);
    if !report.is_ok() {
        return Err(Error::Precondition(format!("not an HF-category: {}", report.summary())));
    }
    let ob = c.ob().clone();
    let n = ob.len();
    let mut offsets = Vec::with_capacity(n * n);
    let mut triples = Vec::new();
    let mut names = Vec::new();
    let mut keys = Vec::new();
    for a in 0..n {
        for b in 0..n {
            offsets.push(triples.len());
            let (ra, rb) = (ob.rep(a), ob.rep(b));
            let to_rep = c.transport(a, b, ra, rb);
            let hom = c.hom(a, b);
            for f in hom.elements() {
                triples.push((a, b, f));
                names.push(format!("({},{},{})", ob.name(a), ob.name(b), hom.name(f)));
                keys.push((ra, rb, c.hom(ra, rb).rep(to_rep.apply(f))));
            }
        }
    }
    let arrows = Arc::new(Setoid::from_keys(Labels::Named(names), &keys));
    let mut by_dom: HashMap<usize, Vec<usize>> = HashMap::new();
    for (e, &(a, _, _)) in triples.iter().enumerate() {
        by_dom.entry(ob.rep(a)).or_default().push(e);
    }
    let mut pairs = Vec::new();
    for (e1, &(_, b, _)) in triples.iter().enumerate() {
        for &e2 in by_dom.get(&ob.rep(b)).into_iter().flatten() {
            pairs.push((e1, e2));
        }
    }
    let pair_keys: Vec<(usize, usize)> = pairs.iter().map(|&(x, y)| (arrows.rep(x), arrows.rep(y))).collect();
    let composable = Arc::new(Setoid::from_keys(Labels::Indexed { prefix: "u".into(), len: pairs.len() }, &pair_keys));

    let arrow = |a: usize, b: usize, f: usize| offsets[a * n + b] + f;
    let id = ExtFun::new(ob.clone(), arrows.clone(), (0..n).map(|a| arrow(a, a, c.id(a))).collect())?;
    let dom = ExtFun::new(arrows.clone(), ob.clone(), triples.iter().map(|t| t.0).collect())?;
    let cod = ExtFun::new(arrows.clone(), ob.clone(), triples.iter().map(|t| t.1).collect())?;
    let fst = ExtFun::new(composable.clone(), arrows.clone(), pairs.iter().map(|p| p.0).collect())?;
    let snd = ExtFun::new(composable.clone(), arrows.clone(), pairs.iter().map(|p| p.1).collect())?;
    let cmp_map = pairs
        .iter()
        .map(|&(e1, e2)| {
            let ((a, b, f), (cc, d, g)) = (triples[e1], triples[e2]);
            let bridge = c.transport(b, b, b, cc).apply(c.id(b));
            let gb = c.compose(b, cc, d, g, bridge);
            arrow(a, d, c.compose(a, b, d, gb, f))
        })
        .collect();
    let cmp = ExtFun::new(composable.clone(), arrows.clone(), cmp_map)?;
    let category = EaCategory::new(ob, arrows, composable, id, dom, cod, cmp, fst, snd)?;
    Ok(HfToEa { category, n, offsets })
}

/// Arrow bijection witnessing an isomorphism of EA-categories that is the
/// identity on a shared object setoid.
#[derive(Clone, Debug)]
pub struct EaIso {
    pub forward: ExtFun,
    pub backward: ExtFun,
}

/// Checks an isomorphism certificate.
pub fn verify_ea_iso(a: &EaCategory, b: &EaCategory, iso: &EaIso) -> Report {
    let mut report = Report::new();
    report.expect("object setoid identical", *a.objects == *b.objects, || "object setoids differ".into());
    let typed = same_setoid(iso.forward.src(), &a.arrows)
        && same_setoid(iso.forward.dst(), &b.arrows)
        && same_setoid(iso.backward.src(), &b.arrows)
        && same_setoid(iso.backward.dst(), &a.arrows);
    report.expect("certificate typing", typed, || "arrow maps have the wrong type".into());
    if !typed || !report.is_ok() {
        return report;
    }
    let (phi, psi) = (&iso.forward, &iso.backward);
    report.expect("arrow maps extensional", phi.is_extensional() && psi.is_extensional(), || "arrow map is not extensional".into());
    report.check("arrow bijection");
    for e in a.arrows.elements() {
        if !a.arrows.equiv(psi.apply(phi.apply(e)), e) {
            report.fail("arrow bijection", format!("backward(forward({})) ≠ itself", a.arrows.name(e)));
        }
    }
    for e in b.arrows.elements() {
        if !b.arrows.equiv(phi.apply(psi.apply(e)), e) {
            report.fail("arrow bijection", format!("forward(backward({})) ≠ itself", b.arrows.name(e)));
        }
    }
    report.check("preserves dom/cod").check("preserves id").check("preserves cmp").check("reflects composable pairs");
    for e in a.arrows.elements() {
        let fe = phi.apply(e);
        let ok = a.objects.equiv(b.dom.apply(fe), a.dom.apply(e)) && a.objects.equiv(b.cod.apply(fe), a.cod.apply(e));
        report.expect("preserves dom/cod", ok, || format!("endpoints of {} change", a.arrows.name(e)));
    }
    for x in a.objects.elements() {
        report.expect("preserves id", b.arrows.equiv(phi.apply(a.id.apply(x)), b.id.apply(x)), || {
            format!("identity at {}", a.objects.name(x))
        });
    }
    let b_index = ComposableIndex::new(b);
    for &u in a.composable.class_reps() {
        let (f, g) = (phi.apply(a.fst.apply(u)), phi.apply(a.snd.apply(u)));
        match b_index.find(b, f, g).first() {
            None => report.fail("preserves cmp", format!("image of {} is not composable", a.pair_name(u))),
            Some(&v) => {
                let (l, r) = (b.cmp.apply(v), phi.apply(a.cmp.apply(u)));
                report.expect("preserves cmp", b.arrows.equiv(l, r), || {
                    format!("{}: {} vs {}", a.pair_name(u), b.arrows.name(l), b.arrows.name(r))
                });
            }
        }
    }
    let a_index = ComposableIndex::new(a);
    for &v in b.composable.class_reps() {
        let (f, g) = (psi.apply(b.fst.apply(v)), psi.apply(b.snd.apply(v)));
        report.expect("reflects composable pairs", !a_index.find(a, f, g).is_empty(), || b.pair_name(v));
    }
    report
}

/// Searches class by class for an arrow bijection that is the identity on
/// objects and preserves identities and composition. Gives up after
/// `node_limit` search nodes.
pub fn search_ea_iso(a: &EaCategory, b: &EaCategory, node_limit: usize) -> Option<EaIso> {
    if *a.objects != *b.objects || a.arrows.class_count() != b.arrows.class_count() {
        return None;
    }
    let (ca, cb) = (&a.arrows, &b.arrows);
    let k = ca.class_count();
    let comp_table = |c: &EaCategory| -> HashMap<(usize, usize), usize> {
        c.composable
            .class_reps()
            .iter()
            .map(|&u| {
                let key = (c.arrows.class_no(c.fst.apply(u)), c.arrows.class_no(c.snd.apply(u)));
                (key, c.arrows.class_no(c.cmp.apply(u)))
            })
            .collect()
    };
    let (comp_a, comp_b) = (comp_table(a), comp_table(b));
    if comp_a.len() != comp_b.len() {
        return None;
    }
    let endpoints = |c: &EaCategory, cls: usize| {
        let e = c.arrows.class_reps()[cls];
        (c.objects.rep(c.dom.apply(e)), c.objects.rep(c.cod.apply(e)))
    };
    let candidates: Vec<Vec<usize>> =
        (0..k).map(|x| (0..k).filter(|&y| endpoints(a, x) == endpoints(b, y)).collect()).collect();
    let mut constraints: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); k];
    for (&(f, g), &h) in &comp_a {
        for x in [f, g, h] {
            constraints[x].push((f, g, h));
        }
    }
    let mut assign: Vec<Option<usize>> = vec![None; k];
    let mut used = vec![false; k];
    for x in a.objects.elements() {
        let (from, to) = (ca.class_no(a.id.apply(x)), cb.class_no(b.id.apply(x)));
        match assign[from] {
            Some(t) if t != to => return None,
            Some(_) => {}
            None => {
                if used[to] {
                    return None;
                }
                assign[from] = Some(to);
                used[to] = true;
            }
        }
    }
    let consistent = |assign: &[Option<usize>], x: usize| {
        constraints[x].iter().all(|&(f, g, h)| match (assign[f], assign[g], assign[h]) {
            (Some(f2), Some(g2), Some(h2)) => comp_b.get(&(f2, g2)) == Some(&h2),
            _ => true,
        })
    };
    if !(0..k).filter(|&x| assign[x].is_some()).all(|x| consistent(&assign, x)) {
        return None;
    }
    let order: Vec<usize> = (0..k).filter(|&x| assign[x].is_none()).collect();
    let mut nodes = 0usize;
    #[allow(clippy::too_many_arguments)]
    fn go(
        depth: usize,
        order: &[usize],
        candidates: &[Vec<usize>],
        assign: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
        nodes: &mut usize,
        limit: usize,
        consistent: &dyn Fn(&[Option<usize>], usize) -> bool,
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let x = order[depth];
        for &y in &candidates[x] {
            if used[y] {
                continue;
            }
            *nodes += 1;
            if *nodes > limit {
                return false;
            }
            assign[x] = Some(y);
            used[y] = true;
            if consistent(assign, x) && go(depth + 1, order, candidates, assign, used, nodes, limit, consistent) {
                return true;
            }
            assign[x] = None;
            used[y] = false;
        }
        false
    }
    if !go(0, &order, &candidates, &mut assign, &mut used, &mut nodes, node_limit, &consistent) {
        return None;
    }
    let assign: Vec<usize> = assign.into_iter().map(|x| x.expect("complete assignment")).collect();
    let mut inverse = vec![0; k];
    for (x, &y) in assign.iter().enumerate() {
        inverse[y] = x;
    }
    let forward = ca.elements().map(|e| cb.class_reps()[assign[ca.class_no(e)]]).collect();
    let backward = cb.elements().map(|e| ca.class_reps()[inverse[cb.class_no(e)]]).collect();
    Some(EaIso {
        forward: ExtFun::new(ca.clone(), cb.clone(), forward).ok()?,
        backward: ExtFun::new(cb.clone(), ca.clone(), backward).ok()?,
    })
}

/// EA → HF → EA with the canonical certificate `e ↦ (dom e, cod e, e)`.
pub fn ea_roundtrip(c: &EaCategory) -> Result<(EaCategory, EaIso)> {
    let hf = ea_to_hf(c)?;
    let back = hf_to_ea(&hf.category)?;
    let forward = c
        .arrows
        .elements()
        .map(|e| back.arrow(c.dom.apply(e), c.cod.apply(e), hf.position(e)))
        .collect();
    let mut triples = Vec::new();
    let n = c.objects.len();
    for a in 0..n {
        for b in 0..n {
            triples.extend(hf.members(a, b).iter().copied());
        }
    }
    let forward = ExtFun::new(c.arrows.clone(), back.category.arrows.clone(), forward)?;
    let backward = ExtFun::new(back.category.arrows.clone(), c.arrows.clone(), triples)?;
    Ok((back.category, EaIso { forward, backward }))
}

/// HF → EA → HF with hom maps `f ↦ (a, b, f)`.
pub fn hf_roundtrip(c: &HfCategory) -> Result<(HfCategory, Vec<ExtFun>)> {
    let ea = hf_to_ea(c)?;
    let back = ea_to_hf(&ea.category)?;
    let n = c.object_count();
    let mut homs = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let map = c.hom(a, b).elements().map(|f| back.position(ea.arrow(a, b, f))).collect();
            homs.push(ExtFun::new(c.hom(a, b).clone(), back.category.hom(a, b).clone(), map)?);
        }
    }
    Ok((back.category, homs))
}

/// Both round trips starting from `c`, with their certificates checked,
/// and the transported-identity laws in `ea_to_hf(c)`.
pub fn roundtrip_checks(c: &EaCategory) -> Result<Report> {
    let mut report = Report::new();
    let (back, iso) = ea_roundtrip(c)?;
    report.merge(Some("EA→HF→EA"), verify_ea_iso(c, &back, &iso));
    let hf = ea_to_hf(c)?;
    report.merge(Some("hom identities"), check_hom_identities(&hf.category));
    let (back, homs) = hf_roundtrip(&hf.category)?;
    report.merge(Some("HF→EA→HF"), check_hf_iso(&hf.category, &back, &homs));
    Ok(report)
}

/// Checks hom bijections (identity on objects) commuting with identities,
/// composition and transports.
pub fn check_hf_iso(s: &HfCategory, t: &HfCategory, homs: &[ExtFun]) -> Report {
    let mut report = Report::new();
    let n = s.object_count();
    report.expect("object setoid identical", **s.ob() == **t.ob(), || "object setoids differ".into());
    if !report.is_ok() || homs.len() != n * n {
        report.fail("certificate typing", "hom map count does not match".to_string());
        return report;
    }
    let hom = |a: usize, b: usize| &homs[a * n + b];
    report.check("certificate typing").check("hom bijection");
    for a in 0..n {
        for b in 0..n {
            let h = hom(a, b);
            if !same_setoid(h.src(), s.hom(a, b)) || !same_setoid(h.dst(), t.hom(a, b)) {
                report.fail("certificate typing", format!("hom map at ({},{})", s.ob().name(a), s.ob().name(b)));
                return report;
            }
            let bij = h.is_extensional() && h.is_injective() && s.hom(a, b).class_count() == t.hom(a, b).class_count();
            report.expect("hom bijection", bij, || format!("at ({},{})", s.ob().name(a), s.ob().name(b)));
        }
    }
    report.check("preserves identities").check("preserves composition").check("commutes with transports");
    for a in 0..n {
        report.expect("preserves identities", t.hom(a, a).equiv(hom(a, a).apply(s.id(a)), t.id(a)), || {
            format!("at {}", s.ob().name(a))
        });
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for &f in s.hom(a, b).class_reps() {
                    for &g in s.hom(b, c).class_reps() {
                        let left = hom(a, c).apply(s.compose(a, b, c, g, f));
                        let right = t.compose(a, b, c, hom(b, c).apply(g), hom(a, b).apply(f));
                        report.expect("preserves composition", t.hom(a, c).equiv(left, right), || {
                            format!("{} ∘ {}", s.arrow_name(b, c, g), s.arrow_name(a, b, f))
                        });
                    }
                }
            }
        }
    }
    let related = s.related();
    for &(a, a2) in &related {
        for &(b, b2) in &related {
            for &f in s.hom(a, b).class_reps() {
                let left = hom(a2, b2).apply(s.transport(a, b, a2, b2).apply(f));
                let right = t.transport(a, b, a2, b2).apply(hom(a, b).apply(f));
                report.expect("commutes with transports", t.hom(a2, b2).equiv(left, right), || {
                    format!("{} moved to ({},{})", s.arrow_name(a, b, f), s.ob().name(a2), s.ob().name(b2))
                });
            }
        }
    }
    report
}

/// For `p : a = a1`, `q : a = a2` and `e = Hom(p, q)(id_a) ∈ Hom(a1, a2)`:
/// post-composing with `e` is transport of the codomain along `a1 = a2`, and
/// pre-composing with `e` is transport of the domain along `a2 = a1`.
pub fn check_hom_identities(c: &HfCategory) -> Report {
    let mut report = Report::new();
    report.check("post-composition with transported identity").check("pre-composition with transported identity");
    let n = c.object_count();
    let ob = c.ob();
    let mut seen = HashSet::new();
    for a in 0..n {
        for a1 in (0..n).filter(|&x| ob.equiv(a, x)) {
            for a2 in (0..n).filter(|&x| ob.equiv(a, x)) {
                if !seen.insert((a, a1, a2)) {
                    continue;
                }
                let e = c.transport(a, a, a1, a2).apply(c.id(a));
                for x in 0..n {
                    let target = c.hom(x, a2);
                    let to = c.transport(x, a1, x, a2);
                    for g in c.hom(x, a1).elements() {
                        let (l, r) = (c.compose(x, a1, a2, e, g), to.apply(g));
                        report.expect("post-composition with transported identity", target.equiv(l, r), || {
                            format!("e = Hom(p,q)(id_{}), g = {}", ob.name(a), c.arrow_name(x, a1, g))
                        });
                    }
                }
                for y in 0..n {
                    let target = c.hom(a1, y);
                    let to = c.transport(a2, y, a1, y);
                    for f in c.hom(a2, y).elements() {
                        let (l, r) = (c.compose(a1, a2, y, f, e), to.apply(f));
                        report.expect("pre-composition with transported identity", target.equiv(l, r), || {
                            format!("e = Hom(p,q)(id_{}), f = {}", ob.name(a), c.arrow_name(a2, y, f))
                        });
                    }
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::ea::tests::chain;
    use crate::category::hf::discrete_category;
    use crate::setoid::Closure;

    #[test]
    fn one_arrow_category_translates_to_single_hom() {
        let c = chain(1, None);
        let hf = ea_to_hf(&c).unwrap();
        assert_eq!(hf.category.hom(0, 0).len(), 1);
        assert!(check_hf(&hf.category).is_ok());
    }

    #[test]
    fn chain_round_trips() {
        let c = chain(3, None);
        let (back, iso) = ea_roundtrip(&c).unwrap();
        let r = verify_ea_iso(&c, &back, &iso);
        assert!(r.is_ok(), "{r}");
        let searched = search_ea_iso(&c, &back, 10_000).expect("search finds the isomorphism");
        assert!(verify_ea_iso(&c, &back, &searched).is_ok());
        let hf = ea_to_hf(&c).unwrap().category;
        assert!(check_hom_identities(&hf).is_ok());
    }

    #[test]
    fn discrete_round_trips() {
        let names = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        let a = Arc::new(Setoid::from_pairs(names, &[(0, 2)], Closure::Generate).unwrap());
        let d = discrete_category(a);
        let ea = hf_to_ea(&d).unwrap();
        assert!(check_ea(&ea.category).is_ok());
        // Only identity arrows, one class per object class.
        assert_eq!(ea.category.arrow_classes(), 2);
        let (back, homs) = hf_roundtrip(&d).unwrap();
        let r = check_hf_iso(&d, &back, &homs);
        assert!(r.is_ok(), "{r}");
    }

    #[test]
    fn broken_certificate_is_reported() {
        let c = chain(2, None);
        let (back, mut iso) = ea_roundtrip(&c).unwrap();
        let mut map = iso.forward.map().to_vec();
        map.swap(0, 1);
        iso.forward = ExtFun::new(iso.forward.src().clone(), iso.forward.dst().clone(), map).unwrap();
        assert!(!verify_ea_iso(&c, &back, &iso).is_ok());
    }

    #[test]
    fn non_isomorphic_categories_are_not_found() {
        let a = chain(2, None);
        // Same objects, but only identities.
        let d = discrete_category(a.objects.clone());
        let b = hf_to_ea(&d).unwrap().category;
        assert!(search_ea_iso(&a, &b, 10_000).is_none());
    }
}
