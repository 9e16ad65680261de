use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::family::{check_family, Family};
use crate::report::Report;
use crate::setoid::{ExtFun, Setoid};

use super::ecat::{check_e, CompTable, ECategory};

/// A hom-family presented category: an object setoid, a proof-irrelevant
/// family of hom setoids over `Ob × Ob`, identities and composition.
///
/// The hom family's index is the product setoid, so the pair `(a, b)` is
/// index element `a * n + b` and `Hom(p, q)` is the family transport
/// `(a, b) → (a', b')`.
#[derive(Clone, Debug)]
pub struct HfCategory {
    ob: Arc<Setoid>,
    hom: Family,
    core: ECategory,
}

impl HfCategory {
    pub fn new(ob: Arc<Setoid>, hom: Family, ids: Vec<usize>, comp: Vec<Arc<CompTable>>) -> Result<Self> {
        let n = ob.len();
        let idx = hom.index();
        if idx.len() != n * n {
            return Err(Error::Malformed("hom family is not indexed by Ob × Ob".into()));
        }
        for p in 0..n * n {
            for q in 0..n * n {
                let expected = ob.equiv(p / n, q / n) && ob.equiv(p % n, q % n);
                if idx.equiv(p, q) != expected {
                    return Err(Error::Malformed("hom family index equality is not the product equality".into()));
                }
            }
        }
        let names = ob.elements().map(|a| ob.name(a)).collect();
        let core = ECategory::new(names, hom.fibers().to_vec(), ids, comp)?;
        Ok(HfCategory { ob, hom, core })
    }

    pub fn ob(&self) -> &Arc<Setoid> {
        &self.ob
    }

    pub fn hom_family(&self) -> &Family {
        &self.hom
    }

    pub fn object_count(&self) -> usize {
        self.ob.len()
    }

    #[inline]
    pub fn hom(&self, a: usize, b: usize) -> &Arc<Setoid> {
        self.core.hom(a, b)
    }

    #[inline]
    pub fn id(&self, a: usize) -> usize {
        self.core.id(a)
    }

    #[inline]
    pub fn compose(&self, a: usize, b: usize, c: usize, g: usize, f: usize) -> usize {
        self.core.compose(a, b, c, g, f)
    }

    /// `Hom(p, q) : Hom(a, b) → Hom(a2, b2)` for `a = a2`, `b = b2`.
    #[inline]
    pub fn transport(&self, a: usize, b: usize, a2: usize, b2: usize) -> &ExtFun {
        let n = self.ob.len();
        self.hom.tau(a * n + b, a2 * n + b2)
    }

    /// Forgets the equality on objects.
    pub fn as_e_category(&self) -> &ECategory {
        &self.core
    }

    pub(crate) fn arrow_name(&self, a: usize, b: usize, f: usize) -> String {
        self.core.arrow_name(a, b, f)
    }

    /// Related triples of objects `(a, a2)` with `a = a2`.
    pub(crate) fn related(&self) -> Vec<(usize, usize)> {
        let n = self.ob.len();
        (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|&(a, b)| self.ob.equiv(a, b)).collect()
    }
}

/// Hom family laws, (H1)–(H3), and the coherence conditions for identities
/// and composition.
pub fn check_hf(c: &HfCategory) -> Report {
    let mut report = Report::new();
    report.merge(Some("hom family"), check_family(&c.hom));
    report.merge(None, check_e(&c.core));
    report.check("identity coherence").check("composition coherence");
    let related = c.related();
    for &(a, a2) in &related {
        let moved = c.transport(a, a, a2, a2).apply(c.id(a));
        let h = c.hom(a2, a2);
        if !h.equiv(moved, c.id(a2)) {
            report.fail(
                "identity coherence",
                format!(
                    "Hom(p,p)(id_{}) = {} but id_{} = {}",
                    c.ob.name(a),
                    h.name(moved),
                    c.ob.name(a2),
                    h.name(c.id(a2))
                ),
            );
        }
    }
    for &(a, a2) in &related {
        for &(b, b2) in &related {
            for &(cc, c2) in &related {
                let (hab, hbc) = (c.hom(a, b), c.hom(b, cc));
                let target = c.hom(a2, c2);
                let (tab, tbc, tac) = (c.transport(a, b, a2, b2), c.transport(b, cc, b2, c2), c.transport(a, cc, a2, c2));
                for &f in hab.class_reps() {
                    let tf = tab.apply(f);
                    for &g in hbc.class_reps() {
                        let left = tac.apply(c.compose(a, b, cc, g, f));
                        let right = c.compose(a2, b2, c2, tbc.apply(g), tf);
                        if !target.equiv(left, right) {
                            report.fail(
                                "composition coherence",
                                format!(
                                    "g = {}, f = {} moved to ({},{},{}): Hom(p,r)(g∘f) = {} but Hom(q,r)(g)∘Hom(p,q)(f) = {}",
                                    c.arrow_name(b, cc, g),
                                    c.arrow_name(a, b, f),
                                    c.ob.name(a2),
                                    c.ob.name(b2),
                                    c.ob.name(c2),
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
    report
}

/// The two transported-identity calculations used for the full image:
/// `C(r(b'),q')(id) ∘ C(r(b),q)(id) = C(r(b),q'∘q)(id)` and
/// `C(p,r(a))(id) ∘ C(p',r(a'))(id) = C(p'∘p,r(a))(id)`.
pub fn check_identity_transport_lemmas(c: &HfCategory) -> Report {
    let mut report = Report::new();
    report.check("codomain transport lemma").check("domain transport lemma");
    let n = c.object_count();
    for x in 0..n {
        for y in (0..n).filter(|&y| c.ob.equiv(x, y)) {
            for z in (0..n).filter(|&z| c.ob.equiv(y, z)) {
                // x = y = z as b, b', b''.
                let first = c.transport(x, x, x, y).apply(c.id(x));
                let second = c.transport(y, y, y, z).apply(c.id(y));
                let left = c.compose(x, y, z, second, first);
                let right = c.transport(x, x, x, z).apply(c.id(x));
                if !c.hom(x, z).equiv(left, right) {
                    report.fail(
                        "codomain transport lemma",
                        format!("{}={}={}: {} vs {}", c.ob.name(x), c.ob.name(y), c.ob.name(z), c.hom(x, z).name(left), c.hom(x, z).name(right)),
                    );
                }
                // x = y = z as a, a', a''.
                let p = c.transport(x, x, y, x).apply(c.id(x));
                let p2 = c.transport(y, y, z, y).apply(c.id(y));
                let left = c.compose(z, y, x, p, p2);
                let right = c.transport(x, x, z, x).apply(c.id(x));
                if !c.hom(z, x).equiv(left, right) {
                    report.fail(
                        "domain transport lemma",
                        format!("{}={}={}: {} vs {}", c.ob.name(x), c.ob.name(y), c.ob.name(z), c.hom(z, x).name(left), c.hom(z, x).name(right)),
                    );
                }
            }
        }
    }
    report
}

/// The discrete category on a setoid: `Hom(x, y)` has one arrow exactly
/// when `x = y`.
pub fn discrete_category(a: Arc<Setoid>) -> HfCategory {
    let n = a.len();
    let star = Arc::new(Setoid::discrete(["*"]));
    let none = Arc::new(Setoid::empty());
    let fibers: Vec<Arc<Setoid>> = (0..n * n)
        .map(|k| if a.equiv(k / n, k % n) { star.clone() } else { none.clone() })
        .collect();
    let index = Arc::new(Setoid::product(&a, &a));
    let mut transports = BTreeMap::new();
    for p in 0..n * n {
        for q in (0..n * n).filter(|&q| index.equiv(p, q)) {
            // Related pairs are inhabited together.
            transports.insert((p, q), ExtFun::identity(fibers[p].clone()));
        }
    }
    let hom = Family::new(index, fibers.clone(), transports).expect("discrete hom family is complete");
    let mut comp = Vec::with_capacity(n * n * n);
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let rows = fibers[y * n + z].len();
                let cols = fibers[x * n + y].len();
                comp.push(Arc::new(CompTable::from_fn(rows, cols, |_, _| 0)));
            }
        }
    }
    HfCategory::new(a, hom, vec![0; n], comp).expect("discrete category is well formed")
}
