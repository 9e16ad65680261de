use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::report::Report;
use crate::setoid::{check_extensional, same_setoid, ExtFun, Setoid};

/// A category in the essentially algebraic presentation: objects, arrows and
/// composable pairs, with `id`, `dom`, `cod`, `cmp`, `fst` and `snd`.
///
/// `fst(u)` is the arrow applied first: `cmp(u) = snd(u) ∘ fst(u)`.
#[derive(Clone, Debug)]
pub struct EaCategory {
    pub objects: Arc<Setoid>,
    pub arrows: Arc<Setoid>,
    pub composable: Arc<Setoid>,
    pub id: ExtFun,
    pub dom: ExtFun,
    pub cod: ExtFun,
    pub cmp: ExtFun,
    pub fst: ExtFun,
    pub snd: ExtFun,
}

impl EaCategory {
    /// Checks that every operation has its stated source and target.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        objects: Arc<Setoid>,
        arrows: Arc<Setoid>,
        composable: Arc<Setoid>,
        id: ExtFun,
        dom: ExtFun,
        cod: ExtFun,
        cmp: ExtFun,
        fst: ExtFun,
        snd: ExtFun,
    ) -> Result<Self> {
        let typed = |f: &ExtFun, s: &Arc<Setoid>, t: &Arc<Setoid>| same_setoid(f.src(), s) && same_setoid(f.dst(), t);
        let checks = [
            ("id", typed(&id, &objects, &arrows)),
            ("dom", typed(&dom, &arrows, &objects)),
            ("cod", typed(&cod, &arrows, &objects)),
            ("cmp", typed(&cmp, &composable, &arrows)),
            ("fst", typed(&fst, &composable, &arrows)),
            ("snd", typed(&snd, &composable, &arrows)),
        ];
        if let Some((name, _)) = checks.iter().find(|(_, ok)| !ok) {
            return Err(Error::DomainMismatch(format!("operation {name} has the wrong source or target")));
        }
        Ok(EaCategory { objects, arrows, composable, id, dom, cod, cmp, fst, snd })
    }

    pub(crate) fn pair_name(&self, u: usize) -> String {
        format!("⟨{} ; {}⟩", self.arrows.name(self.fst.apply(u)), self.arrows.name(self.snd.apply(u)))
    }

    /// Number of arrow classes.
    pub fn arrow_classes(&self) -> usize {
        self.arrows.class_count()
    }

    pub fn object_classes(&self) -> usize {
        self.objects.class_count()
    }
}

/// Composable pairs keyed by the classes of `(fst, snd)`.
#[derive(Clone, Debug)]
pub struct ComposableIndex {
    by_pair: HashMap<(usize, usize), Vec<usize>>,
}

impl ComposableIndex {
    /// Indexes class representatives of the composable-pairs setoid.
    pub fn new(c: &EaCategory) -> Self {
        let mut by_pair: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for &u in c.composable.class_reps() {
            let key = (c.arrows.rep(c.fst.apply(u)), c.arrows.rep(c.snd.apply(u)));
            by_pair.entry(key).or_default().push(u);
        }
        ComposableIndex { by_pair }
    }

    /// Composable pairs `u` with `fst(u) = first` and `snd(u) = second`.
    pub fn find(&self, c: &EaCategory, first: usize, second: usize) -> &[usize] {
        self.by_pair
            .get(&(c.arrows.rep(first), c.arrows.rep(second)))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }
}

/// Axioms A1–A9 plus extensionality of the six operations.
///
/// With the operations extensional, A3, A4, A7–A9 are checked on class
/// representatives; A5 is checked over all composable elements.
pub fn check_ea(c: &EaCategory) -> Report {
    let mut report = Report::new();
    report.check("extensionality");
    for (name, f) in [("id", &c.id), ("dom", &c.dom), ("cod", &c.cod), ("cmp", &c.cmp), ("fst", &c.fst), ("snd", &c.snd)] {
        if let Some(w) = check_extensional(f).laws()[0].witnesses.first() {
            report.fail("extensionality", format!("{name}: {w}"));
        }
    }
    let (c0, c1, c2) = (&c.objects, &c.arrows, &c.composable);
    for l in ["A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "A9"] {
        report.check(l);
    }
    for x in c0.elements() {
        let i = c.id.apply(x);
        report.expect("A1", c0.equiv(c.dom.apply(i), x), || format!("dom(id({0})) ≠ {0}", c0.name(x)));
        report.expect("A2", c0.equiv(c.cod.apply(i), x), || format!("cod(id({0})) ≠ {0}", c0.name(x)));
    }
    let reps = c2.class_reps();
    for &u in reps {
        let (f, s, m) = (c.fst.apply(u), c.snd.apply(u), c.cmp.apply(u));
        report.expect("A3", c0.equiv(c.dom.apply(m), c.dom.apply(f)), || {
            format!("dom(cmp {}) = {} but dom(fst) = {}", c.pair_name(u), c0.name(c.dom.apply(m)), c0.name(c.dom.apply(f)))
        });
        report.expect("A4", c0.equiv(c.cod.apply(m), c.cod.apply(s)), || {
            format!("cod(cmp {}) = {} but cod(snd) = {}", c.pair_name(u), c0.name(c.cod.apply(m)), c0.name(c.cod.apply(s)))
        });
    }
    // A5 over every element: pairs with equal components are equal.
    let mut first_with: HashMap<(usize, usize), usize> = HashMap::new();
    for u in c2.elements() {
        let key = (c1.rep(c.fst.apply(u)), c1.rep(c.snd.apply(u)));
        let v = *first_with.entry(key).or_insert(u);
        if !c2.equiv(u, v) {
            report.fail("A5", format!("{} and {} share components but differ", c.pair_name(u), c.pair_name(v)));
        }
    }
    let index = ComposableIndex::new(c);
    let arrow_reps = c1.class_reps();
    let mut by_cod: HashMap<usize, Vec<usize>> = HashMap::new();
    for &g in arrow_reps {
        by_cod.entry(c0.rep(c.cod.apply(g))).or_default().push(g);
    }
    for &f in arrow_reps {
        for &g in by_cod.get(&c0.rep(c.dom.apply(f))).into_iter().flatten() {
            if index.find(c, g, f).is_empty() {
                report.fail("A6", format!("no composable pair with fst = {} and snd = {}", c1.name(g), c1.name(f)));
            }
        }
    }
    let identities: HashSet<usize> = c0.elements().map(|x| c1.rep(c.id.apply(x))).collect();
    for &u in reps {
        let (f, s, m) = (c.fst.apply(u), c.snd.apply(u), c.cmp.apply(u));
        if identities.contains(&c1.rep(f)) {
            report.expect("A7", c1.equiv(m, s), || format!("fst {} is an identity but cmp = {} ≠ snd", c.pair_name(u), c1.name(m)));
        }
        if identities.contains(&c1.rep(s)) {
            report.expect("A8", c1.equiv(m, f), || format!("snd {} is an identity but cmp = {} ≠ fst", c.pair_name(u), c1.name(m)));
        }
    }
    // A9: v = (h, g), u = (g, f), w = (h, f∘g), z = (g∘h, f).
    let mut by_fst: HashMap<usize, Vec<usize>> = HashMap::new();
    for &u in reps {
        by_fst.entry(c1.rep(c.fst.apply(u))).or_default().push(u);
    }
    for &v in reps {
        let (h, g) = (c.fst.apply(v), c.snd.apply(v));
        let gh = c.cmp.apply(v);
        for &u in by_fst.get(&c1.rep(g)).into_iter().flatten() {
            let f = c.snd.apply(u);
            let fg = c.cmp.apply(u);
            for &w in index.find(c, h, fg) {
                for &z in index.find(c, gh, f) {
                    let (left, right) = (c.cmp.apply(w), c.cmp.apply(z));
                    if !c1.equiv(left, right) {
                        report.fail(
                            "A9",
                            format!(
                                "v = {}, u = {}: cmp(w) = {} but cmp(z) = {}",
                                c.pair_name(v),
                                c.pair_name(u),
                                c1.name(left),
                                c1.name(right)
                            ),
                        );
                    }
                }
            }
        }
    }
    report
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::setoid::Labels;

    /// The chain 0 → 1 → 2 → 3 as a thin category. Arrows are `(i, j)` with
    /// `i <= j`; composable pairs are all `((i,j),(j,k))`.
    pub(crate) fn chain(n: usize, perturb: Option<((usize, usize, usize), usize)>) -> EaCategory {
        let objects = Arc::new(Setoid::discrete((0..n).map(|i| i.to_string())));
        let mut arrows_list = Vec::new();
        for i in 0..n {
            for j in i..n {
                arrows_list.push((i, j));
            }
        }
        let pos = |i: usize, j: usize| arrows_list.iter().position(|&p| p == (i, j)).unwrap();
        let arrows = Arc::new(Setoid::discrete(arrows_list.iter().map(|(i, j)| format!("{i}→{j}"))));
        let mut pairs = Vec::new();
        for &(i, j) in &arrows_list {
            for k in j..n {
                pairs.push((i, j, k));
            }
        }
        let composable = Arc::new(Setoid::from_keys(Labels::Indexed { prefix: "u".into(), len: pairs.len() }, &pairs));
        let cmp_map: Vec<usize> = pairs
            .iter()
            .map(|&(i, j, k)| match perturb {
                Some((t, to)) if t == (i, j, k) => to,
                _ => pos(i, k),
            })
            .collect();
        let id = ExtFun::new(objects.clone(), arrows.clone(), (0..n).map(|i| pos(i, i)).collect()).unwrap();
        let dom = ExtFun::new(arrows.clone(), objects.clone(), arrows_list.iter().map(|p| p.0).collect()).unwrap();
        let cod = ExtFun::new(arrows.clone(), objects.clone(), arrows_list.iter().map(|p| p.1).collect()).unwrap();
        let fst = ExtFun::new(composable.clone(), arrows.clone(), pairs.iter().map(|&(i, j, _)| pos(i, j)).collect()).unwrap();
        let snd = ExtFun::new(composable.clone(), arrows.clone(), pairs.iter().map(|&(_, j, k)| pos(j, k)).collect()).unwrap();
        let cmp = ExtFun::new(composable.clone(), arrows.clone(), cmp_map).unwrap();
        EaCategory::new(objects, arrows, composable, id, dom, cod, cmp, fst, snd).unwrap()
    }

    #[test]
    fn chain_is_a_category() {
        let r = check_ea(&chain(4, None));
        assert!(r.is_ok(), "{r}");
    }

    #[test]
    fn one_object_one_arrow_passes() {
        let r = check_ea(&chain(1, None));
        assert!(r.is_ok(), "{r}");
    }

    #[test]
    fn perturbed_triple_composite_breaks_associativity() {
        // cmp(0→1, 1→3) is redirected to 0→2.
        let c = chain(4, Some(((0, 1, 3), 2)));
        assert_eq!(c.arrows.name(2), "0→2");
        let r = check_ea(&c);
        assert!(r.failed("A9"), "{r}");
        assert!(!r.failed("A5"));
    }

    #[test]
    fn wrong_typing_is_rejected() {
        let c = chain(2, None);
        let err = EaCategory::new(
            c.objects.clone(),
            c.arrows.clone(),
            c.composable.clone(),
            c.dom.clone(),
            c.dom.clone(),
            c.cod.clone(),
            c.cmp.clone(),
            c.fst.clone(),
            c.snd.clone(),
        );
        assert!(matches!(err, Err(Error::DomainMismatch(_))));
    }
}
