//! JSON input documents and their conversion to and from the kernel types.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::category::{CompTable, EaCategory, HfCategory, HfFunctor};
use crate::error::{Error, Result};
use crate::family::{sigma, Family, Sum};
use crate::setoid::{Closure, ExtFun, RawSetoid, Setoid};

/// Map tables are written `{"source": "target"}`.
pub type Table = BTreeMap<String, String>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Document {
    Setoid(SetoidDoc),
    Family(FamilyDoc),
    EaCategory(EaDoc),
    HfCategory(HfDoc),
    SArrow(SArrowDoc),
    Cocone(CoconeDoc),
    HfFunctor(HfFunctorDoc),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Setoid(_) => "setoid",
            Document::Family(_) => "family",
            Document::EaCategory(_) => "ea-category",
            Document::HfCategory(_) => "hf-category",
            Document::SArrow(_) => "s-arrow",
            Document::Cocone(_) => "cocone",
            Document::HfFunctor(_) => "hf-functor",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Malformed(format!("line {} column {}: {e}", e.line(), e.column())))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }
}

/// Options that change how documents are read.
#[derive(Clone, Copy, Debug, Default)]
pub struct LoadOptions {
    /// Treat every equality list as already closed.
    pub strict_closure: bool,
    /// Fill in transports that are omitted.
    pub autocomplete: bool,
}

fn within<T>(place: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Malformed(m) => Error::Malformed(format!("{place}: {m}")),
        Error::DomainMismatch(m) => Error::DomainMismatch(format!("{place}: {m}")),
        other => other,
    })
}

fn lookup(s: &Setoid, name: &str, place: &str) -> Result<usize> {
    s.position(name).ok_or_else(|| Error::Malformed(format!("{place}: unknown element {name:?}")))
}

fn table(src: &Arc<Setoid>, dst: &Arc<Setoid>, t: &Table, place: &str) -> Result<ExtFun> {
    let pairs: Vec<(String, String)> = t.iter().map(|(a, b)| (a.clone(), b.clone())).collect();
    within(place, ExtFun::from_table(src.clone(), dst.clone(), &pairs))
}

fn to_table(f: &ExtFun) -> Table {
    f.src().elements().map(|x| (f.src().name(x), f.dst().name(f.apply(x)))).collect()
}

fn split_arrow<'a>(key: &'a str, parts: usize, place: &str) -> Result<Vec<&'a str>> {
    let v: Vec<&str> = key.split("->").map(str::trim).collect();
    if v.len() == parts {
        Ok(v)
    } else {
        Err(Error::Malformed(format!("{place}: key {key:?} should have {parts} parts separated by \"->\"")))
    }
}

/// `{"elements": [...], "eq": [[x, y], ...], "closed": bool}`. Reflexive
/// pairs are implied. With `closed` the listed pairs must already be
/// symmetric and transitive; otherwise they generate the equality.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetoidDoc {
    pub elements: Vec<String>,
    #[serde(default)]
    pub eq: Vec<(String, String)>,
    #[serde(default)]
    pub closed: bool,
}

impl SetoidDoc {
    pub fn to_raw(&self, place: &str) -> Result<RawSetoid> {
        let mut pos = BTreeMap::new();
        for (k, e) in self.elements.iter().enumerate() {
            if pos.insert(e.as_str(), k).is_some() {
                return Err(Error::Malformed(format!("{place}: duplicate element identifier {e:?}")));
            }
        }
        let find = |x: &str| {
            pos.get(x).copied().ok_or_else(|| Error::Malformed(format!("{place}: unknown element {x:?} in eq")))
        };
        let mut eq: Vec<(usize, usize)> = (0..self.elements.len()).map(|x| (x, x)).collect();
        for (x, y) in &self.eq {
            eq.push((find(x)?, find(y)?));
        }
        eq.sort_unstable();
        eq.dedup();
        Ok(RawSetoid { elements: self.elements.clone(), eq })
    }

    pub fn closure(&self, opts: LoadOptions) -> Closure {
        if self.closed || opts.strict_closure {
            Closure::Strict
        } else {
            Closure::Generate
        }
    }

    pub fn load(&self, place: &str, opts: LoadOptions) -> Result<Arc<Setoid>> {
        let raw = self.to_raw(place)?;
        within(place, raw.into_setoid(self.closure(opts))).map(Arc::new)
    }

    /// Each non-representative element paired with its representative.
    pub fn from_setoid(s: &Setoid) -> Self {
        let eq = s.elements().filter(|&x| s.rep(x) != x).map(|x| (s.name(s.rep(x)), s.name(x))).collect();
        SetoidDoc { elements: s.elements().map(|x| s.name(x)).collect(), eq, closed: false }
    }
}

/// `{"index": setoid, "fibers": {i: setoid}, "transports": {"i->j": table},
/// "autocomplete": bool}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyDoc {
    pub index: SetoidDoc,
    pub fibers: BTreeMap<String, SetoidDoc>,
    #[serde(default)]
    pub transports: BTreeMap<String, Table>,
    #[serde(default)]
    pub autocomplete: bool,
}

impl FamilyDoc {
    pub fn load(&self, opts: LoadOptions) -> Result<Family> {
        let index = self.index.load("index", opts)?;
        for key in self.fibers.keys() {
            lookup(&index, key, "fibers")?;
        }
        let fibers = index
            .elements()
            .map(|i| {
                let name = index.name(i);
                let doc = self
                    .fibers
                    .get(&name)
                    .ok_or_else(|| Error::Malformed(format!("fibers: no fiber for index element {name:?}")))?;
                doc.load(&format!("fiber {name}"), opts)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut transports = BTreeMap::new();
        for (key, t) in &self.transports {
            let place = format!("transport {key}");
            let ends = split_arrow(key, 2, &place)?;
            let (i, j) = (lookup(&index, ends[0], &place)?, lookup(&index, ends[1], &place)?);
            transports.insert((i, j), table(&fibers[i], &fibers[j], t, &place)?);
        }
        if self.autocomplete || opts.autocomplete {
            Family::autocomplete(index, fibers, transports)
        } else {
            Family::new(index, fibers, transports)
        }
    }

    pub fn from_family(f: &Family) -> Self {
        let idx = f.index();
        FamilyDoc {
            index: SetoidDoc::from_setoid(idx),
            fibers: idx.elements().map(|i| (idx.name(i), SetoidDoc::from_setoid(f.fiber(i)))).collect(),
            transports: f
                .transports()
                .map(|((i, j), t)| (format!("{}->{}", idx.name(i), idx.name(j)), to_table(t)))
                .collect(),
            autocomplete: false,
        }
    }
}

/// Objects, arrows and composable pairs as setoids; the six operations as
/// tables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EaDoc {
    pub objects: SetoidDoc,
    pub arrows: SetoidDoc,
    pub composable: SetoidDoc,
    pub id: Table,
    pub dom: Table,
    pub cod: Table,
    pub cmp: Table,
    pub fst: Table,
    pub snd: Table,
}

impl EaDoc {
    pub fn load(&self, opts: LoadOptions) -> Result<EaCategory> {
        let c0 = self.objects.load("objects", opts)?;
        let c1 = self.arrows.load("arrows", opts)?;
        let c2 = self.composable.load("composable", opts)?;
        EaCategory::new(
            c0.clone(),
            c1.clone(),
            c2.clone(),
            table(&c0, &c1, &self.id, "id")?,
            table(&c1, &c0, &self.dom, "dom")?,
            table(&c1, &c0, &self.cod, "cod")?,
            table(&c2, &c1, &self.cmp, "cmp")?,
            table(&c2, &c1, &self.fst, "fst")?,
            table(&c2, &c1, &self.snd, "snd")?,
        )
    }

    pub fn from_category(c: &EaCategory) -> Self {
        EaDoc {
            objects: SetoidDoc::from_setoid(&c.objects),
            arrows: SetoidDoc::from_setoid(&c.arrows),
            composable: SetoidDoc::from_setoid(&c.composable),
            id: to_table(&c.id),
            dom: to_table(&c.dom),
            cod: to_table(&c.cod),
            cmp: to_table(&c.cmp),
            fst: to_table(&c.fst),
            snd: to_table(&c.snd),
        }
    }
}

/// Hom setoids keyed `"a->b"` (absent means empty), transports keyed
/// `"a->b->a2->b2"`, identities, and composition triples `[g, f, g∘f]`
/// keyed `"a->b->c"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HfDoc {
    pub objects: SetoidDoc,
    #[serde(default)]
    pub homs: BTreeMap<String, SetoidDoc>,
    #[serde(default)]
    pub transports: BTreeMap<String, Table>,
    pub ids: Table,
    #[serde(default)]
    pub comp: BTreeMap<String, Vec<(String, String, String)>>,
    #[serde(default)]
    pub autocomplete: bool,
}

impl HfDoc {
    pub fn load(&self, opts: LoadOptions) -> Result<HfCategory> {
        let ob = self.objects.load("objects", opts)?;
        let n = ob.len();
        let mut fibers: Vec<Arc<Setoid>> = vec![Arc::new(Setoid::empty()); n * n];
        for (key, doc) in &self.homs {
            let place = format!("hom {key}");
            let ends = split_arrow(key, 2, &place)?;
            let (a, b) = (lookup(&ob, ends[0], &place)?, lookup(&ob, ends[1], &place)?);
            fibers[a * n + b] = doc.load(&place, opts)?;
        }
        let index = Arc::new(Setoid::product(&ob, &ob));
        let mut transports = BTreeMap::new();
        for (key, t) in &self.transports {
            let place = format!("transport {key}");
            let v = split_arrow(key, 4, &place)?;
            let ids = v.iter().map(|x| lookup(&ob, x, &place)).collect::<Result<Vec<_>>>()?;
            let (p, q) = (ids[0] * n + ids[1], ids[2] * n + ids[3]);
            transports.insert((p, q), table(&fibers[p], &fibers[q], t, &place)?);
        }
        let hom = if self.autocomplete || opts.autocomplete {
            Family::autocomplete(index, fibers.clone(), transports)?
        } else {
            Family::new(index, fibers.clone(), transports)?
        };
        let mut ids = Vec::with_capacity(n);
        for a in 0..n {
            let name = ob.name(a);
            let f = self.ids.get(&name).ok_or_else(|| Error::Malformed(format!("ids: no identity for {name:?}")))?;
            ids.push(lookup(&fibers[a * n + a], f, &format!("identity at {name}"))?);
        }
        let mut given: BTreeMap<(usize, usize, usize), &Vec<(String, String, String)>> = BTreeMap::new();
        for (key, triples) in &self.comp {
            let place = format!("comp {key}");
            let v = split_arrow(key, 3, &place)?;
            let ids = v.iter().map(|x| lookup(&ob, x, &place)).collect::<Result<Vec<_>>>()?;
            given.insert((ids[0], ids[1], ids[2]), triples);
        }
        let mut comp = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let (hab, hbc, hac) = (&fibers[a * n + b], &fibers[b * n + c], &fibers[a * n + c]);
                    let place = format!("comp {}->{}->{}", ob.name(a), ob.name(b), ob.name(c));
                    let mut data = vec![None; hbc.len() * hab.len()];
                    for (g, f, h) in given.get(&(a, b, c)).copied().into_iter().flatten() {
                        let (g, f, h) = (lookup(hbc, g, &place)?, lookup(hab, f, &place)?, lookup(hac, h, &place)?);
                        data[g * hab.len() + f] = Some(h);
                    }
                    let data = data
                        .into_iter()
                        .enumerate()
                        .map(|(k, h)| {
                            h.ok_or_else(|| {
                                Error::Malformed(format!(
                                    "{place}: no composite for {} ∘ {}",
                                    hbc.name(k / hab.len()),
                                    hab.name(k % hab.len())
                                ))
                            })
                        })
                        .collect::<Result<Vec<_>>>()?;
                    comp.push(Arc::new(CompTable::new(hbc.len(), hab.len(), data)?));
                }
            }
        }
        HfCategory::new(ob, hom, ids, comp)
    }

    pub fn from_category(c: &HfCategory) -> Self {
        let ob = c.ob();
        let n = ob.len();
        let name = |a: usize| ob.name(a);
        let mut homs = BTreeMap::new();
        let mut comp = BTreeMap::new();
        for a in 0..n {
            for b in 0..n {
                if !c.hom(a, b).is_empty() {
                    homs.insert(format!("{}->{}", name(a), name(b)), SetoidDoc::from_setoid(c.hom(a, b)));
                }
                for cc in 0..n {
                    let (hab, hbc, hac) = (c.hom(a, b), c.hom(b, cc), c.hom(a, cc));
                    let mut triples = Vec::new();
                    for g in hbc.elements() {
                        for f in hab.elements() {
                            triples.push((hbc.name(g), hab.name(f), hac.name(c.compose(a, b, cc, g, f))));
                        }
                    }
                    if !triples.is_empty() {
                        comp.insert(format!("{}->{}->{}", name(a), name(b), name(cc)), triples);
                    }
                }
            }
        }
        let transports = c
            .hom_family()
            .transports()
            .map(|((p, q), t)| (format!("{}->{}->{}->{}", name(p / n), name(p % n), name(q / n), name(q % n)), to_table(t)))
            .collect();
        let ids = (0..n).map(|a| (name(a), c.hom(a, a).name(c.id(a)))).collect();
        HfDoc { objects: SetoidDoc::from_setoid(ob), homs, transports, ids, comp, autocomplete: false }
    }
}

/// A candidate arrow `(from, to, R)` of the relation category, with `R`
/// given as pairs of sum elements `[[i, x], [j, y]]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SArrowDoc {
    pub family: FamilyDoc,
    pub from: String,
    pub to: String,
    pub pairs: Vec<((String, String), (String, String))>,
}

/// Loaded form of an [`SArrowDoc`].
pub struct SArrowInput {
    pub family: Family,
    pub sum: Sum,
    pub from: usize,
    pub to: usize,
    pub pairs: Vec<(usize, usize)>,
}

impl SArrowDoc {
    pub fn load(&self, opts: LoadOptions) -> Result<SArrowInput> {
        let family = self.family.load(opts)?;
        let sum = sigma(&family)?;
        let idx = family.index();
        let elem = |(i, x): &(String, String)| -> Result<usize> {
            let i = lookup(idx, i, "pairs")?;
            let x = lookup(family.fiber(i), x, "pairs")?;
            Ok(sum.elem(i, x))
        };
        let pairs = self.pairs.iter().map(|(u, v)| Ok((elem(u)?, elem(v)?))).collect::<Result<Vec<_>>>()?;
        let (from, to) = (lookup(idx, &self.from, "from")?, lookup(idx, &self.to, "to")?);
        Ok(SArrowInput { family, sum, from, to, pairs })
    }
}

/// A vertex setoid and one leg per index element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoconeDoc {
    pub family: FamilyDoc,
    pub target: SetoidDoc,
    pub legs: BTreeMap<String, Table>,
}

impl CoconeDoc {
    pub fn load(&self, opts: LoadOptions) -> Result<(Family, Arc<Setoid>, Vec<ExtFun>)> {
        let family = self.family.load(opts)?;
        let target = self.target.load("target", opts)?;
        let idx = family.index();
        for key in self.legs.keys() {
            lookup(idx, key, "legs")?;
        }
        let legs = idx
            .elements()
            .map(|i| {
                let name = idx.name(i);
                let t = self.legs.get(&name).ok_or_else(|| Error::Malformed(format!("legs: no leg for {name:?}")))?;
                table(family.fiber(i), &target, t, &format!("leg {name}"))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((family, target, legs))
    }
}

/// Source and target HF-categories, an object table and hom tables keyed
/// `"a->b"` (absent means empty).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HfFunctorDoc {
    pub source: HfDoc,
    pub target: HfDoc,
    pub objects: Table,
    #[serde(default)]
    pub homs: BTreeMap<String, Table>,
}

impl HfFunctorDoc {
    pub fn load(&self, opts: LoadOptions) -> Result<HfFunctor> {
        let source = Arc::new(within("source", self.source.load(opts))?);
        let target = Arc::new(within("target", self.target.load(opts))?);
        let obj = table(source.ob(), target.ob(), &self.objects, "objects")?;
        let n = source.object_count();
        let ob = source.ob();
        let mut homs = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let key = format!("{}->{}", ob.name(a), ob.name(b));
                let empty = Table::new();
                let t = self.homs.get(&key).unwrap_or(&empty);
                let (fa, fb) = (obj.apply(a), obj.apply(b));
                homs.push(table(source.hom(a, b), target.hom(fa, fb), t, &format!("hom {key}"))?);
            }
        }
        HfFunctor::new(source, target, obj, homs)
    }
}
