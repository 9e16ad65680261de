use std::sync::Arc;

use crate::error::{Error, Result};
use crate::report::Report;
use crate::setoid::{same_setoid, ExtFun};

use super::ea::{ComposableIndex, EaCategory};
use super::ecat::ECategory;
use super::hf::HfCategory;

/// A functor between essentially algebraic categories.
#[derive(Clone, Debug)]
pub struct EaFunctor {
    pub source: Arc<EaCategory>,
    pub target: Arc<EaCategory>,
    pub f0: ExtFun,
    pub f1: ExtFun,
    pub f2: ExtFun,
}

impl EaFunctor {
    pub fn new(source: Arc<EaCategory>, target: Arc<EaCategory>, f0: ExtFun, f1: ExtFun, f2: ExtFun) -> Result<Self> {
        let ok = same_setoid(f0.src(), &source.objects)
            && same_setoid(f0.dst(), &target.objects)
            && same_setoid(f1.src(), &source.arrows)
            && same_setoid(f1.dst(), &target.arrows)
            && same_setoid(f2.src(), &source.composable)
            && same_setoid(f2.dst(), &target.composable);
        if !ok {
            return Err(Error::DomainMismatch("functor components have the wrong type".into()));
        }
        Ok(EaFunctor { source, target, f0, f1, f2 })
    }

    pub fn identity(c: Arc<EaCategory>) -> Self {
        let f0 = ExtFun::identity(c.objects.clone());
        let f1 = ExtFun::identity(c.arrows.clone());
        let f2 = ExtFun::identity(c.composable.clone());
        EaFunctor { source: c.clone(), target: c, f0, f1, f2 }
    }
}

/// Extensionality of `F0`, `F1`, `F2` and the six preservation equations.
pub fn check_ea_functor(func: &EaFunctor) -> Report {
    let (s, t) = (&*func.source, &*func.target);
    let mut report = Report::new();
    for (name, f) in [("F0", &func.f0), ("F1", &func.f1), ("F2", &func.f2)] {
        report.expect("functor extensionality", f.is_extensional(), || format!("{name} is not extensional"));
    }
    for law in ["id", "dom", "cod", "fst", "snd", "cmp"] {
        report.check(&format!("preserves {law}"));
    }
    for x in s.objects.elements() {
        let (l, r) = (func.f1.apply(s.id.apply(x)), t.id.apply(func.f0.apply(x)));
        report.expect("preserves id", t.arrows.equiv(l, r), || format!("F1(id({})) = {} but id(F0) = {}", s.objects.name(x), t.arrows.name(l), t.arrows.name(r)));
    }
    for e in s.arrows.elements() {
        let fe = func.f1.apply(e);
        for (law, sop, top) in [("preserves dom", &s.dom, &t.dom), ("preserves cod", &s.cod, &t.cod)] {
            let (l, r) = (func.f0.apply(sop.apply(e)), top.apply(fe));
            report.expect(law, t.objects.equiv(l, r), || format!("at {}: {} vs {}", s.arrows.name(e), t.objects.name(l), t.objects.name(r)));
        }
    }
    for u in s.composable.elements() {
        let fu = func.f2.apply(u);
        for (law, sop, top) in [("preserves fst", &s.fst, &t.fst), ("preserves snd", &s.snd, &t.snd), ("preserves cmp", &s.cmp, &t.cmp)] {
            let (l, r) = (func.f1.apply(sop.apply(u)), top.apply(fu));
            report.expect(law, t.arrows.equiv(l, r), || format!("at {}: {} vs {}", s.pair_name(u), t.arrows.name(l), t.arrows.name(r)));
        }
    }
    report
}

/// Builds `F2` from `F1` by sending a composable pair to the target pair
/// with the image components.
pub(crate) fn induced_f2(source: &EaCategory, target: &EaCategory, f1: &ExtFun) -> Result<ExtFun> {
    let index = ComposableIndex::new(target);
    let map = source
        .composable
        .elements()
        .map(|u| {
            let (a, b) = (f1.apply(source.fst.apply(u)), f1.apply(source.snd.apply(u)));
            index.find(target, a, b).first().copied().ok_or_else(|| {
                Error::InvalidArrow(format!("image of {} is not composable in the target", source.pair_name(u)))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    ExtFun::new(source.composable.clone(), target.composable.clone(), map)
}

/// A functor between E-categories: an object map with no extensionality
/// demanded, and a hom map per ordered pair of objects.
#[derive(Clone, Debug)]
pub struct EFunctor {
    pub source: Arc<ECategory>,
    pub target: Arc<ECategory>,
    pub obj: Vec<usize>,
    /// Indexed `a * n + b`: `Hom(a,b) → Hom(F a, F b)`.
    pub homs: Vec<ExtFun>,
}

impl EFunctor {
    pub fn new(source: Arc<ECategory>, target: Arc<ECategory>, obj: Vec<usize>, homs: Vec<ExtFun>) -> Result<Self> {
        let n = source.object_count();
        if obj.len() != n || homs.len() != n * n || obj.iter().any(|&x| x >= target.object_count()) {
            return Err(Error::Malformed("functor components do not match the categories".into()));
        }
        for a in 0..n {
            for b in 0..n {
                let h = &homs[a * n + b];
                if !same_setoid(h.src(), source.hom(a, b)) || !same_setoid(h.dst(), target.hom(obj[a], obj[b])) {
                    return Err(Error::DomainMismatch(format!(
                        "hom map at ({},{}) has the wrong type",
                        source.object_name(a),
                        source.object_name(b)
                    )));
                }
            }
        }
        Ok(EFunctor { source, target, obj, homs })
    }

    #[inline]
    pub fn hom(&self, a: usize, b: usize) -> &ExtFun {
        &self.homs[a * self.source.object_count() + b]
    }
}

fn check_e_functor_parts<'a>(
    report: &mut Report,
    s: &ECategory,
    t: &ECategory,
    obj: &dyn Fn(usize) -> usize,
    hom: &dyn Fn(usize, usize) -> &'a ExtFun,
) {
    let n = s.object_count();
    report.check("hom extensionality").check("preserves identities").check("preserves composition");
    for a in 0..n {
        for b in 0..n {
            if !hom(a, b).is_extensional() {
                report.fail("hom extensionality", format!("F({},{})", s.object_name(a), s.object_name(b)));
            }
        }
    }
    for a in 0..n {
        let fa = obj(a);
        let img = hom(a, a).apply(s.id(a));
        let h = t.hom(fa, fa);
        if !h.equiv(img, t.id(fa)) {
            report.fail("preserves identities", format!("F(id_{}) = {} ≠ id", s.object_name(a), h.name(img)));
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let (fa, fb, fc) = (obj(a), obj(b), obj(c));
                let target = t.hom(fa, fc);
                for &f in s.hom(a, b).class_reps() {
                    let ff = hom(a, b).apply(f);
                    for &g in s.hom(b, c).class_reps() {
                        let left = hom(a, c).apply(s.compose(a, b, c, g, f));
                        let right = t.compose(fa, fb, fc, hom(b, c).apply(g), ff);
                        if !target.equiv(left, right) {
                            report.fail(
                                "preserves composition",
                                format!(
                                    "F({} ∘ {}) = {} but F g ∘ F f = {}",
                                    s.arrow_name(b, c, g),
                                    s.arrow_name(a, b, f),
                                    target.name(left),
                                    target.name(right)
                                ),
                            );
                        }
                    }
                }
            }
        }
    }
}

/// Identity and composition preservation; no coherence is demanded.
pub fn check_e_functor(func: &EFunctor) -> Report {
    let mut report = Report::new();
    check_e_functor_parts(&mut report, &func.source, &func.target, &|a| func.obj[a], &|a, b| func.hom(a, b));
    report
}

/// A functor between HF-categories: an extensional object map plus hom maps
/// subject to the transport coherence condition.
#[derive(Clone, Debug)]
pub struct HfFunctor {
    pub source: Arc<HfCategory>,
    pub target: Arc<HfCategory>,
    pub obj: ExtFun,
    pub homs: Vec<ExtFun>,
}

impl HfFunctor {
    pub fn new(source: Arc<HfCategory>, target: Arc<HfCategory>, obj: ExtFun, homs: Vec<ExtFun>) -> Result<Self> {
        if !same_setoid(obj.src(), source.ob()) || !same_setoid(obj.dst(), target.ob()) {
            return Err(Error::DomainMismatch("object map has the wrong type".into()));
        }
        // Reuse the E-functor shape checks.
        let map: Vec<usize> = obj.map().to_vec();
        let e = EFunctor::new(
            Arc::new(source.as_e_category().clone()),
            Arc::new(target.as_e_category().clone()),
            map,
            homs,
        )?;
        Ok(HfFunctor { source, target, obj, homs: e.homs })
    }

    #[inline]
    pub fn hom(&self, a: usize, b: usize) -> &ExtFun {
        &self.homs[a * self.source.object_count() + b]
    }

    pub fn identity(c: Arc<HfCategory>) -> Self {
        let n = c.object_count();
        let homs = (0..n * n).map(|k| ExtFun::identity(c.hom(k / n, k % n).clone())).collect();
        let obj = ExtFun::identity(c.ob().clone());
        HfFunctor { source: c.clone(), target: c, obj, homs }
    }
}

/// E-functor laws, extensionality of the object map, and transport coherence:
/// `Hom(F p, F q)(F f) = F(Hom(p, q)(f))`.
pub fn check_hf_functor(func: &HfFunctor) -> Report {
    let (s, t) = (&*func.source, &*func.target);
    let mut report = Report::new();
    report.expect("object extensionality", func.obj.is_extensional(), || format!("F0 = {}", func.obj.describe()));
    check_e_functor_parts(&mut report, s.as_e_category(), t.as_e_category(), &|a| func.obj.apply(a), &|a, b| func.hom(a, b));
    report.check("functor coherence");
    if !func.obj.is_extensional() {
        return report;
    }
    let related = s.related();
    for &(a, a2) in &related {
        for &(b, b2) in &related {
            let (fa, fa2, fb, fb2) = (func.obj.apply(a), func.obj.apply(a2), func.obj.apply(b), func.obj.apply(b2));
            let target = t.hom(fa2, fb2);
            for &f in s.hom(a, b).class_reps() {
                let left = t.transport(fa, fb, fa2, fb2).apply(func.hom(a, b).apply(f));
                let right = func.hom(a2, b2).apply(s.transport(a, b, a2, b2).apply(f));
                if !target.equiv(left, right) {
                    report.fail(
                        "functor coherence",
                        format!(
                            "f = {} moved to ({},{}): Hom(Fp,Fq)(F f) = {} but F(Hom(p,q) f) = {}",
                            s.arrow_name(a, b, f),
                            s.ob().name(a2),
                            s.ob().name(b2),
                            target.name(left),
                            target.name(right)
                        ),
                    );
                }
            }
        }
    }
    report
}
