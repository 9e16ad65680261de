use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::category::{
    check_hf, check_hf_functor, check_hf_iso, discrete_category, ea_to_hf, CompTable, ECategory, EFunctor, HfCategory,
    HfFunctor,
};
use crate::error::{Error, Result};
use crate::family::Family;
use crate::report::Report;
use crate::setoid::{extensional_maps, same_setoid, ExtFun, Labels, Setoid};

use super::funcat::{build_c, require_family};

/// The E-category of finite setoids, restricted to the given objects.
/// `Hom(a, b)` is the setoid of extensional maps with pointwise equality.
#[derive(Clone, Debug)]
pub struct SetoidsCategory {
    pub category: Arc<ECategory>,
    maps: Vec<Vec<Vec<usize>>>,
    lookup: Vec<HashMap<Vec<usize>, usize>>,
}

impl SetoidsCategory {
    /// The map stored at position `k` of `Hom(a, b)`.
    pub fn map(&self, a: usize, b: usize, k: usize) -> &[usize] {
        &self.maps[a * self.category.object_count() + b][k]
    }

    /// Position of an extensional map in `Hom(a, b)`.
    pub fn position(&self, a: usize, b: usize, map: &[usize]) -> Option<usize> {
        self.lookup[a * self.category.object_count() + b].get(map).copied()
    }
}

pub fn setoids_category(objects: Vec<(String, Arc<Setoid>)>) -> Result<SetoidsCategory> {
    let n = objects.len();
    let mut homs = Vec::with_capacity(n * n);
    let mut maps = Vec::with_capacity(n * n);
    let mut lookup = Vec::with_capacity(n * n);
    for (_, sa) in &objects {
        for (_, sb) in &objects {
            let all = extensional_maps(sa, sb);
            let names = all
                .iter()
                .map(|m| ExtFun::new(sa.clone(), sb.clone(), m.clone()).map(|f| f.describe()))
                .collect::<Result<Vec<_>>>()?;
            let keys: Vec<Vec<usize>> = all.iter().map(|m| m.iter().map(|&y| sb.class_no(y)).collect()).collect();
            homs.push(Arc::new(Setoid::from_keys(Labels::Named(names), &keys)));
            lookup.push(all.iter().enumerate().map(|(k, m)| (m.clone(), k)).collect::<HashMap<_, _>>());
            maps.push(all);
        }
    }
    let at = |a: usize, b: usize, m: &[usize]| lookup[a * n + b][m];
    let ids = objects.iter().enumerate().map(|(a, (_, s))| at(a, a, &s.elements().collect::<Vec<_>>())).collect();
    let mut comp = Vec::with_capacity(n * n * n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let (gs, fs) = (&maps[b * n + c], &maps[a * n + b]);
                comp.push(Arc::new(CompTable::from_fn(gs.len(), fs.len(), |g, f| {
                    let composite: Vec<usize> = fs[f].iter().map(|&x| gs[g][x]).collect();
                    at(a, c, &composite)
                })));
            }
        }
    }
    let names = objects.into_iter().map(|(name, _)| name).collect();
    let category = Arc::new(ECategory::new(names, homs, ids, comp)?);
    Ok(SetoidsCategory { category, maps, lookup })
}

/// A family seen as an E-functor from the discrete category on its index.
#[derive(Clone, Debug)]
pub struct FamilyFunctor {
    pub source: Arc<HfCategory>,
    pub target: SetoidsCategory,
    pub functor: EFunctor,
}

/// The unique arrow `x → y` goes to the transport `F(x) → F(y)`.
pub fn family_as_efunctor(f: &Family) -> Result<FamilyFunctor> {
    require_family(f)?;
    let idx = f.index();
    let n = idx.len();
    let source = Arc::new(discrete_category(idx.clone()));
    let target = setoids_category(idx.elements().map(|i| (idx.name(i), f.fiber(i).clone())).collect())?;
    let mut homs = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let map = match f.transport(a, b) {
                Some(t) => vec![target.position(a, b, t.map()).expect("transports are extensional")],
                None => Vec::new(),
            };
            homs.push(ExtFun::new(source.hom(a, b).clone(), target.category.hom(a, b).clone(), map)?);
        }
    }
    let functor = EFunctor::new(
        Arc::new(source.as_e_category().clone()),
        target.category.clone(),
        (0..n).collect(),
        homs,
    )?;
    Ok(FamilyFunctor { source, target, functor })
}

/// The full image and the functor into it.
#[derive(Clone, Debug)]
pub struct FullImage {
    pub category: Arc<HfCategory>,
    pub functor: HfFunctor,
}

/// `S(a, b) = D(F a, F b)`, with transport along `(a, b) = (a', b')` given by
/// `f ↦ F(e₂) ∘ f ∘ F(e₁)`, where `e₁ ∈ C(a', a)` and `e₂ ∈ C(b, b')` are
/// transported identities. `G` is the identity on objects and `F` on homs.
pub fn full_image(c: &Arc<HfCategory>, f: &EFunctor) -> Result<FullImage> {
    let report = check_hf(c);
    if !report.is_ok() {
        return Err(Error::Precondition(format!("source is not an HF-category: {}", report.summary())));
    }
    let n = c.object_count();
    let shaped = f.source.object_count() == n
        && (0..n).all(|a| (0..n).all(|b| same_setoid(f.source.hom(a, b), c.hom(a, b))));
    if !shaped {
        return Err(Error::DomainMismatch("functor source is not the given category".into()));
    }
    let d = &f.target;
    let fo = &f.obj;
    let ob = c.ob().clone();
    let fibers: Vec<Arc<Setoid>> = (0..n * n).map(|k| d.hom(fo[k / n], fo[k % n]).clone()).collect();
    let index = Arc::new(Setoid::product(&ob, &ob));
    let related = c.related();
    let mut transports = BTreeMap::new();
    for &(a, a2) in &related {
        let e1 = f.hom(a2, a).apply(c.transport(a, a, a2, a).apply(c.id(a)));
        for &(b, b2) in &related {
            let e2 = f.hom(b, b2).apply(c.transport(b, b, b, b2).apply(c.id(b)));
            let (fa, fa2, fb, fb2) = (fo[a], fo[a2], fo[b], fo[b2]);
            let map = d
                .hom(fa, fb)
                .elements()
                .map(|g| {
                    let inner = d.compose(fa2, fa, fb, g, e1);
                    d.compose(fa2, fb, fb2, e2, inner)
                })
                .collect();
            transports.insert((a * n + b, a2 * n + b2), ExtFun::new(fibers[a * n + b].clone(), fibers[a2 * n + b2].clone(), map)?);
        }
    }
    let hom = Family::new(index, fibers, transports)?;
    let ids = (0..n).map(|a| d.id(fo[a])).collect();
    let mut comp = Vec::with_capacity(n * n * n);
    for a in 0..n {
        for b in 0..n {
            for cc in 0..n {
                comp.push(d.table(fo[a], fo[b], fo[cc]).clone());
            }
        }
    }
    let category = Arc::new(HfCategory::new(ob.clone(), hom, ids, comp)?);
    let obj = ExtFun::identity(ob);
    let functor = HfFunctor::new(c.clone(), category.clone(), obj, f.homs.clone())?;
    Ok(FullImage { category, functor })
}

/// `S` is an HF-category, `G` an HF-functor, surjective on objects.
pub fn check_full_image(image: &FullImage) -> Report {
    let mut report = Report::new();
    report.merge(Some("S"), check_hf(&image.category));
    report.merge(Some("G"), check_hf_functor(&image.functor));
    let ob = image.category.ob();
    let mut hit = vec![false; ob.class_count()];
    for a in image.functor.obj.map() {
        hit[ob.class_no(*a)] = true;
    }
    report.check("surjective on objects");
    if let Some(k) = hit.iter().position(|h| !h) {
        report.fail("surjective on objects", format!("{} is not hit", ob.name(ob.class_reps()[k])));
    }
    report
}

/// The full image of a family is the HF-form of `C(I,F)`: `h ∈ S(a, b)` goes
/// to the arrow `(a, b, h)`.
pub fn check_example_iso(f: &Family) -> Result<Report> {
    let fam = family_as_efunctor(f)?;
    let image = full_image(&fam.source, &fam.functor)?;
    let c = build_c(f)?;
    let hf = ea_to_hf(&c.category)?;
    let n = f.index().len();
    let s = &image.category;
    let mut homs = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let map = s
                .hom(a, b)
                .elements()
                .map(|k| {
                    let e = c.find(a, b, fam.target.map(a, b, k)).expect("every extensional map is an arrow");
                    hf.position(e)
                })
                .collect();
            homs.push(ExtFun::new(s.hom(a, b).clone(), hf.category.hom(a, b).clone(), map)?);
        }
    }
    let mut report = check_full_image(&image);
    report.merge(Some("iso"), check_hf_iso(s, &hf.category, &homs));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{check_e, check_e_functor};
    use crate::family::tests::fam1;

    #[test]
    fn setoids_category_is_an_e_category() {
        let fam = fam1();
        let t = family_as_efunctor(&fam).unwrap();
        let r = check_e(&t.target.category);
        assert!(r.is_ok(), "{r}");
        let r = check_e_functor(&t.functor);
        assert!(r.is_ok(), "{r}");
    }

    #[test]
    fn arrow_goes_to_transport() {
        let fam = fam1();
        let t = family_as_efunctor(&fam).unwrap();
        let k = t.functor.hom(0, 1).apply(0);
        assert_eq!(t.target.map(0, 1, k), fam.tau(0, 1).map());
        assert!(t.functor.hom(0, 2).src().is_empty());
    }

    #[test]
    fn full_image_of_fam1_has_expected_homs() {
        let fam = fam1();
        let t = family_as_efunctor(&fam).unwrap();
        let image = full_image(&t.source, &t.functor).unwrap();
        let r = check_full_image(&image);
        assert!(r.is_ok(), "{r}");
        let s = &image.category;
        assert_eq!(s.hom(0, 1).len(), 4);
        assert_eq!(s.hom(0, 2).len(), 1);
        assert_eq!(s.hom(2, 0).len(), 2);
        assert_eq!(s.hom(2, 2).len(), 1);
    }

    #[test]
    fn transport_to_the_same_pair_is_identity() {
        let fam = fam1();
        let t = family_as_efunctor(&fam).unwrap();
        let s = full_image(&t.source, &t.functor).unwrap().category;
        for a in 0..3 {
            for b in 0..3 {
                let tr = s.transport(a, b, a, b);
                assert!(s.hom(a, b).elements().all(|f| tr.apply(f) == f));
            }
        }
    }

    #[test]
    fn fam1_full_image_is_the_function_category() {
        let r = check_example_iso(&fam1()).unwrap();
        assert!(r.is_ok(), "{r}");
    }

    #[test]
    fn one_object_image_has_identity_transports() {
        let point = Arc::new(Setoid::discrete(["*"]));
        let fam = Family::constant(point, Arc::new(Setoid::discrete(["x", "y"])));
        let t = family_as_efunctor(&fam).unwrap();
        let s = full_image(&t.source, &t.functor).unwrap().category;
        assert_eq!(s.hom(0, 0).len(), 4);
        let tr = s.transport(0, 0, 0, 0);
        assert!(s.hom(0, 0).elements().all(|f| tr.apply(f) == f));
    }
}
