use std::collections::HashSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::report::Report;
use crate::setoid::Setoid;

/// Composition `Hom(b,c) × Hom(a,b) → Hom(a,c)` as a dense table,
/// `data[g * cols + f]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompTable {
    rows: usize,
    cols: usize,
    data: Vec<usize>,
}

impl CompTable {
    pub fn new(rows: usize, cols: usize, data: Vec<usize>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Malformed(format!("composition table has {} entries, expected {}", data.len(), rows * cols)));
        }
        Ok(CompTable { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> usize) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for g in 0..rows {
            for h in 0..cols {
                data.push(f(g, h));
            }
        }
        CompTable { rows, cols, data }
    }

    #[inline]
    pub fn get(&self, g: usize, f: usize) -> usize {
        self.data[g * self.cols + f]
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }
}

/// A category whose objects carry no equality: a bare list of objects, a
/// hom setoid per ordered pair, identities and composition tables.
#[derive(Clone, Debug)]
pub struct ECategory {
    objects: Vec<String>,
    hom: Vec<Arc<Setoid>>,
    ids: Vec<usize>,
    comp: Vec<Arc<CompTable>>,
}

impl ECategory {
    /// `hom` is indexed `a * n + b`, `comp` is indexed `(a * n + b) * n + c`.
    pub fn new(objects: Vec<String>, hom: Vec<Arc<Setoid>>, ids: Vec<usize>, comp: Vec<Arc<CompTable>>) -> Result<Self> {
        let n = objects.len();
        if hom.len() != n * n || ids.len() != n || comp.len() != n * n * n {
            return Err(Error::Malformed("category components do not match the object count".into()));
        }
        for a in 0..n {
            if ids[a] >= hom[a * n + a].len() {
                return Err(Error::Malformed(format!("identity of {} is not in Hom({0},{0})", objects[a])));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let t = &comp[(a * n + b) * n + c];
                    let (hbc, hab, hac) = (&hom[b * n + c], &hom[a * n + b], &hom[a * n + c]);
                    if t.rows != hbc.len() || t.cols != hab.len() {
                        return Err(Error::Malformed(format!(
                            "composition table for ({},{},{}) has the wrong shape",
                            objects[a], objects[b], objects[c]
                        )));
                    }
                    if t.data.iter().any(|&h| h >= hac.len()) {
                        return Err(Error::Malformed(format!(
                            "composition table for ({},{},{}) leaves Hom({0},{2})",
                            objects[a], objects[b], objects[c]
                        )));
                    }
                }
            }
        }
        Ok(ECategory { objects, hom, ids, comp })
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn object_name(&self, a: usize) -> &str {
        &self.objects[a]
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    #[inline]
    pub fn hom(&self, a: usize, b: usize) -> &Arc<Setoid> {
        &self.hom[a * self.objects.len() + b]
    }

    pub fn homs(&self) -> &[Arc<Setoid>] {
        &self.hom
    }

    #[inline]
    pub fn id(&self, a: usize) -> usize {
        self.ids[a]
    }

    pub fn table(&self, a: usize, b: usize, c: usize) -> &Arc<CompTable> {
        let n = self.objects.len();
        &self.comp[(a * n + b) * n + c]
    }

    pub fn tables(&self) -> &[Arc<CompTable>] {
        &self.comp
    }

    /// `g ∘ f` for `f ∈ Hom(a,b)`, `g ∈ Hom(b,c)`.
    #[inline]
    pub fn compose(&self, a: usize, b: usize, c: usize, g: usize, f: usize) -> usize {
        self.table(a, b, c).get(g, f)
    }

    pub(crate) fn arrow_name(&self, a: usize, b: usize, f: usize) -> String {
        format!("{}:{}→{}", self.hom(a, b).name(f), self.objects[a], self.objects[b])
    }
}

/// Composition extensional in both arguments, plus (H1)–(H3).
///
/// Once composition is extensional, the identity and associativity laws only
/// need checking on class representatives.
pub fn check_e(c: &ECategory) -> Report {
    let n = c.object_count();
    let mut report = Report::new();
    report.check("comp extensionality").check("H1").check("H2").check("H3");
    let mut seen = HashSet::new();
    for a in 0..n {
        for b in 0..n {
            for cc in 0..n {
                let t = c.table(a, b, cc);
                let (hbc, hab, hac) = (c.hom(b, cc), c.hom(a, b), c.hom(a, cc));
                let key = (Arc::as_ptr(t), Arc::as_ptr(hbc), Arc::as_ptr(hab), Arc::as_ptr(hac));
                if !seen.insert(key) {
                    continue;
                }
                for g in hbc.elements() {
                    for f in hab.elements() {
                        let h = t.get(g, f);
                        let canon = t.get(hbc.rep(g), hab.rep(f));
                        if !hac.equiv(h, canon) {
                            report.fail(
                                "comp extensionality",
                                format!(
                                    "{} ∘ {} = {} but representatives compose to {}",
                                    c.arrow_name(b, cc, g),
                                    c.arrow_name(a, b, f),
                                    hac.name(h),
                                    hac.name(canon)
                                ),
                            );
                        }
                    }
                }
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            let hab = c.hom(a, b);
            for &f in hab.class_reps() {
                let left = c.compose(a, b, b, c.id(b), f);
                if !hab.equiv(left, f) {
                    report.fail("H1", format!("id_{} ∘ {} = {}", c.objects[b], c.arrow_name(a, b, f), hab.name(left)));
                }
                let right = c.compose(a, a, b, f, c.id(a));
                if !hab.equiv(right, f) {
                    report.fail("H2", format!("{} ∘ id_{} = {}", c.arrow_name(a, b, f), c.objects[a], hab.name(right)));
                }
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            for cc in 0..n {
                for d in 0..n {
                    let had = c.hom(a, d);
                    for &h in c.hom(a, b).class_reps() {
                        for &g in c.hom(b, cc).class_reps() {
                            let gh = c.compose(a, b, cc, g, h);
                            for &f in c.hom(cc, d).class_reps() {
                                let fg = c.compose(b, cc, d, f, g);
                                let left = c.compose(a, cc, d, f, gh);
                                let right = c.compose(a, b, d, fg, h);
                                if !had.equiv(left, right) {
                                    report.fail(
                                        "H3",
                                        format!(
                                            "{} ∘ ({} ∘ {}) = {} but ({} ∘ {}) ∘ {} = {}",
                                            c.arrow_name(cc, d, f),
                                            c.arrow_name(b, cc, g),
                                            c.arrow_name(a, b, h),
                                            had.name(left),
                                            c.arrow_name(cc, d, f),
                                            c.arrow_name(b, cc, g),
                                            c.arrow_name(a, b, h),
                                            had.name(right)
                                        ),
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    report
}
