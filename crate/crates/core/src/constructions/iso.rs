use crate::category::{check_ea, check_ea_functor, induced_f2, EaFunctor};
use crate::error::{Error, Result};
use crate::family::{Family, Sum};
use crate::relation::{graph_of, identity_relation, rel_compose, Relation};
use crate::report::Report;
use crate::setoid::ExtFun;

use super::funcat::{build_c, CCategory};
use super::relcat::{build_s, SCategory};

/// `M(i, j, f) = (i, j, G_f)`, identity on objects.
pub fn functor_m(c: &CCategory, s: &SCategory) -> Result<EaFunctor> {
    let (src, dst) = (&c.category, &s.category);
    let map = src
        .arrows
        .elements()
        .map(|e| {
            let (i, j, _) = c.triple(e);
            let g = graph_of(s.sum(), i, j, &c.fiber_map(e))?;
            s.find(i, j, &g).ok_or_else(|| Error::InvalidArrow(format!("graph of {} is not an arrow", src.arrows.name(e))))
        })
        .collect::<Result<Vec<_>>>()?;
    let f1 = ExtFun::new(src.arrows.clone(), dst.arrows.clone(), map)?;
    let f0 = ExtFun::identity(src.objects.clone()).with_setoids(src.objects.clone(), dst.objects.clone())?;
    let f2 = induced_f2(src, dst, &f1)?;
    EaFunctor::new(src.clone(), dst.clone(), f0, f1, f2)
}

/// The map `f : F(i) → F(j)` with `G_f ≐ R`: `f(x)` is the first `y` with
/// `(⟨i,x⟩, ⟨j,y⟩) ∈ R`, unique up to equality when `R` is functional.
pub fn unique_choice(f: &Family, sum: &Sum, i: usize, j: usize, r: &Relation) -> Result<ExtFun> {
    let (fi, fj) = (f.fiber(i), f.fiber(j));
    let mut map = Vec::with_capacity(fi.len());
    for x in fi.elements() {
        let u = sum.elem(i, x);
        let mut hits = fj.elements().filter(|&y| r.contains(u, sum.elem(j, y)));
        let y = hits.next().ok_or_else(|| {
            Error::InvalidArrow(format!("{} has no image in F({})", sum.setoid().name(u), f.index().name(j)))
        })?;
        if let Some(y2) = hits.find(|&y2| !fj.equiv(y, y2)) {
            return Err(Error::InvalidArrow(format!(
                "{} has two images {} and {}",
                sum.setoid().name(u),
                fj.name(y),
                fj.name(y2)
            )));
        }
        map.push(y);
    }
    let g = ExtFun::new(fi.clone(), fj.clone(), map)?;
    if !g.is_extensional() {
        return Err(Error::InvalidArrow("chosen map is not extensional".into()));
    }
    if graph_of(sum, i, j, &g)? != *r {
        return Err(Error::InvalidArrow(format!("relation {} is not the graph of a map", r.describe())));
    }
    Ok(g)
}

/// `N(i, j, R) = (i, j, f)` with `f` from [`unique_choice`].
pub fn functor_n(c: &CCategory, s: &SCategory) -> Result<EaFunctor> {
    let (src, dst) = (&s.category, &c.category);
    let map = src
        .arrows
        .elements()
        .map(|e| {
            let (i, j, r) = s.triple(e);
            let g = unique_choice(c.family(), s.sum(), i, j, r)?;
            c.find(i, j, g.map()).ok_or_else(|| Error::InvalidArrow(format!("no arrow for {}", src.arrows.name(e))))
        })
        .collect::<Result<Vec<_>>>()?;
    let f1 = ExtFun::new(src.arrows.clone(), dst.arrows.clone(), map)?;
    let f0 = ExtFun::identity(src.objects.clone()).with_setoids(src.objects.clone(), dst.objects.clone())?;
    let f2 = induced_f2(src, dst, &f1)?;
    EaFunctor::new(src.clone(), dst.clone(), f0, f1, f2)
}

/// Everything built while checking `S(I,F) ≅ C(I,F)`.
#[derive(Clone, Debug)]
pub struct IsoCheck {
    pub c: CCategory,
    pub s: SCategory,
    pub m: EaFunctor,
    pub n: EaFunctor,
    pub report: Report,
}

/// Builds both categories and both functors and checks that `N ∘ M` and
/// `M ∘ N` are identities up to arrow equality, on every arrow.
pub fn check_iso(f: &Family) -> Result<IsoCheck> {
    let c = build_c(f)?;
    let s = build_s(f)?;
    let m = functor_m(&c, &s)?;
    let n = functor_n(&c, &s)?;
    let mut report = Report::new();
    report.merge(Some("C"), check_ea(&c.category));
    report.merge(Some("S"), check_ea(&s.category));
    report.merge(Some("M"), check_ea_functor(&m));
    report.merge(Some("N"), check_ea_functor(&n));
    let (ca, sa) = (&c.category.arrows, &s.category.arrows);
    report.check("N∘M = Id").check("M∘N = Id");
    for e in ca.elements() {
        let back = n.f1.apply(m.f1.apply(e));
        report.expect("N∘M = Id", ca.equiv(back, e), || format!("{} ↦ {}", ca.name(e), ca.name(back)));
    }
    for e in sa.elements() {
        let back = m.f1.apply(n.f1.apply(e));
        report.expect("M∘N = Id", sa.equiv(back, e), || format!("{} ↦ {}", sa.name(e), sa.name(back)));
    }
    Ok(IsoCheck { c, s, m, n, report })
}

/// Graphs turn transported composites into relational composites,
/// `G_g ∘ G_f ≐ G_{g ∘ F(p) ∘ f}`, and identity maps into identity relations.
/// Composable pairs are checked on class representatives.
pub fn check_graph_laws(c: &CCategory, sum: &Sum) -> Result<Report> {
    let a = &c.category;
    let mut report = Report::new();
    report.check("graph of composite").check("graph of identity");
    for &u in a.composable.class_reps() {
        let (e1, e2, e3) = (a.fst.apply(u), a.snd.apply(u), a.cmp.apply(u));
        let (i, j, _) = c.triple(e1);
        let (_, k, _) = c.triple(e2);
        let gf = graph_of(sum, i, j, &c.fiber_map(e1))?;
        let gg = graph_of(sum, c.triple(e2).0, k, &c.fiber_map(e2))?;
        let composite = graph_of(sum, i, k, &c.fiber_map(e3))?;
        report.expect("graph of composite", rel_compose(&gg, &gf)? == composite, || {
            format!("{} then {}", a.arrows.name(e1), a.arrows.name(e2))
        });
    }
    for i in a.objects.elements() {
        let fib = c.family().fiber(i).clone();
        let g = graph_of(sum, i, i, &ExtFun::identity(fib))?;
        report.expect("graph of identity", g == identity_relation(sum, i), || {
            format!("at {}", a.objects.name(i))
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::tests::{fam1, fam1_with};
    use crate::family::{sigma, Family};
    use crate::setoid::Setoid;
    use std::sync::Arc;

    #[test]
    fn fam1_is_isomorphic() {
        let iso = check_iso(&fam1()).unwrap();
        assert!(iso.report.is_ok(), "{}", iso.report);
        assert_eq!(iso.c.category.arrow_classes(), 8);
        assert_eq!(iso.s.category.arrow_classes(), 8);
    }

    #[test]
    fn swapped_transport_family_is_isomorphic() {
        let iso = check_iso(&fam1_with(vec![1, 0], vec![1, 0])).unwrap();
        assert!(iso.report.is_ok(), "{}", iso.report);
    }

    #[test]
    fn singleton_family() {
        let f = Family::constant(Arc::new(Setoid::discrete(["*"])), Arc::new(Setoid::discrete(["x"])));
        let iso = check_iso(&f).unwrap();
        assert!(iso.report.is_ok(), "{}", iso.report);
    }

    #[test]
    fn identity_goes_to_identity_relation_and_back() {
        let iso = check_iso(&fam1()).unwrap();
        for i in 0..3 {
            let e = iso.c.category.id.apply(i);
            let (_, _, r) = iso.s.triple(iso.m.f1.apply(e));
            assert_eq!(*r, identity_relation(iso.s.sum(), i));
            let back = iso.n.f1.apply(iso.s.category.id.apply(i));
            assert_eq!(iso.c.triple(back).2, iso.c.triple(e).2);
        }
    }

    #[test]
    fn equal_arrows_have_equal_graphs() {
        let iso = check_iso(&fam1()).unwrap();
        let (id0, id1) = (iso.c.category.id.apply(0), iso.c.category.id.apply(1));
        let (r0, r1) = (iso.s.triple(iso.m.f1.apply(id0)).2, iso.s.triple(iso.m.f1.apply(id1)).2);
        assert_eq!(r0, r1);
    }

    #[test]
    fn unique_choice_on_constant_graph() {
        let fam = fam1();
        let sum = sigma(&fam).unwrap();
        let k = ExtFun::new(fam.fiber(0).clone(), fam.fiber(2).clone(), vec![0, 0]).unwrap();
        let g = graph_of(&sum, 0, 2, &k).unwrap();
        assert_eq!(unique_choice(&fam, &sum, 0, 2, &g).unwrap().map(), &[0, 0]);
        let two = crate::relation::saturate(sum.setoid().clone(), &[(0, 0), (0, 1), (1, 1)]).unwrap();
        assert!(matches!(unique_choice(&fam, &sum, 0, 0, &two), Err(Error::InvalidArrow(_))));
    }

    #[test]
    fn graph_laws_on_fam1() {
        let fam = fam1();
        let c = build_c(&fam).unwrap();
        let sum = sigma(&fam).unwrap();
        let r = check_graph_laws(&c, &sum).unwrap();
        assert!(r.is_ok(), "{r}");
    }
}
