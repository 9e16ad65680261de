//! Finite setoids, extensional functions and the subsetoid preorder.
//!
//! Elements are addressed by position (`usize`) inside their setoid. The
//! equivalence is kept as a class table: every element points at the least
//! element of its class, so `x = y` is a single comparison.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use petgraph::unionfind::UnionFind;

use crate::error::{Error, Result};
use crate::report::Report;

/// Display names for the elements of a setoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Labels {
    Named(Vec<String>),
    /// `prefix0, prefix1, ...`; used for large derived carriers.
    Indexed { prefix: String, len: usize },
}

impl Labels {
    fn len(&self) -> usize {
        match self {
            Labels::Named(v) => v.len(),
            Labels::Indexed { len, .. } => *len,
        }
    }
}

/// How an equivalence given as pairs is turned into a setoid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Closure {
    /// The pairs must already form an equivalence relation.
    Strict,
    /// The pairs generate the equivalence (reflexive-symmetric-transitive closure).
    Generate,
}

#[derive(Clone, PartialEq, Eq)]
pub struct Setoid {
    labels: Labels,
    rep: Vec<usize>,
    class_no: Vec<usize>,
    class_reps: Vec<usize>,
}

impl fmt::Debug for Setoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let classes: Vec<Vec<String>> = self
            .classes()
            .into_iter()
            .map(|c| c.into_iter().map(|x| self.name(x)).collect())
            .collect();
        f.debug_struct("Setoid").field("classes", &classes).finish()
    }
}

impl Setoid {
    fn from_rep(labels: Labels, rep: Vec<usize>) -> Self {
        debug_assert_eq!(labels.len(), rep.len());
        let mut class_no = vec![0; rep.len()];
        let mut class_reps = Vec::new();
        for x in 0..rep.len() {
            if rep[x] == x {
                class_no[x] = class_reps.len();
                class_reps.push(x);
            } else {
                class_no[x] = class_no[rep[x]];
            }
        }
        Setoid { labels, rep, class_no, class_reps }
    }

    /// Each element equal only to itself.
    pub fn discrete<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let rep = (0..names.len()).collect();
        Self::from_rep(Labels::Named(names), rep)
    }

    pub fn empty() -> Self {
        Self::discrete(Vec::<String>::new())
    }

    /// Groups elements with equal keys; the least element of each group is
    /// its representative.
    pub fn from_keys<K: Hash + Eq>(labels: Labels, keys: &[K]) -> Self {
        assert_eq!(labels.len(), keys.len(), "one key per element");
        let mut first: HashMap<&K, usize> = HashMap::with_capacity(keys.len());
        let rep = keys.iter().enumerate().map(|(x, k)| *first.entry(k).or_insert(x)).collect();
        Self::from_rep(labels, rep)
    }

    /// Builds a setoid from named elements and equality pairs.
    pub fn from_pairs(names: Vec<String>, pairs: &[(usize, usize)], closure: Closure) -> Result<Self> {
        let raw = RawSetoid { elements: names, eq: pairs.to_vec() };
        raw.into_setoid(closure)
    }

    /// Product setoid; element `(a, b)` sits at `a * right.len() + b`.
    pub fn product(left: &Setoid, right: &Setoid) -> Self {
        let n = right.len();
        let mut names = Vec::with_capacity(left.len() * n);
        let mut keys = Vec::with_capacity(left.len() * n);
        for a in 0..left.len() {
            for b in 0..n {
                names.push(format!("({},{})", left.name(a), right.name(b)));
                keys.push((left.rep(a), right.rep(b)));
            }
        }
        Self::from_keys(Labels::Named(names), &keys)
    }

    /// The sub-setoid on the listed elements (in the given order), with the
    /// inherited equality.
    pub fn restrict(&self, elems: &[usize]) -> Self {
        let names = elems.iter().map(|&x| self.name(x)).collect();
        let keys: Vec<usize> = elems.iter().map(|&x| self.rep(x)).collect();
        Self::from_keys(Labels::Named(names), &keys)
    }

    pub fn len(&self) -> usize {
        self.rep.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rep.is_empty()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    pub fn name(&self, x: usize) -> String {
        match &self.labels {
            Labels::Named(v) => v[x].clone(),
            Labels::Indexed { prefix, .. } => format!("{prefix}{x}"),
        }
    }

    pub fn labels(&self) -> &Labels {
        &self.labels
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        match &self.labels {
            Labels::Named(v) => v.iter().position(|n| n == name),
            Labels::Indexed { prefix, len } => {
                name.strip_prefix(prefix.as_str())?.parse().ok().filter(|x| x < len)
            }
        }
    }

    #[inline]
    pub fn equiv(&self, x: usize, y: usize) -> bool {
        self.rep[x] == self.rep[y]
    }

    /// Least element of the class of `x`.
    #[inline]
    pub fn rep(&self, x: usize) -> usize {
        self.rep[x]
    }

    /// Dense class number of `x`, in order of class representatives.
    #[inline]
    pub fn class_no(&self, x: usize) -> usize {
        self.class_no[x]
    }

    pub fn class_count(&self) -> usize {
        self.class_reps.len()
    }

    pub fn class_reps(&self) -> &[usize] {
        &self.class_reps
    }

    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.class_count()];
        for x in self.elements() {
            out[self.class_no[x]].push(x);
        }
        out
    }

    pub fn class_of(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        let r = self.rep[x];
        self.elements().filter(move |&y| self.rep[y] == r)
    }

    /// Every pair of the equivalence relation.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for class in self.classes() {
            for &x in &class {
                for &y in &class {
                    out.push((x, y));
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// Same setoid, by pointer or by structure.
pub fn same_setoid(a: &Arc<Setoid>, b: &Arc<Setoid>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// A setoid as given: named elements plus a binary relation that may not yet
/// be an equivalence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawSetoid {
    pub elements: Vec<String>,
    pub eq: Vec<(usize, usize)>,
}

impl RawSetoid {
    fn check_names(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for e in &self.elements {
            if !seen.insert(e.as_str()) {
                return Err(Error::Malformed(format!("duplicate element identifier {e:?}")));
            }
        }
        for &(x, y) in &self.eq {
            if x >= self.elements.len() || y >= self.elements.len() {
                return Err(Error::Malformed(format!("equality pair ({x},{y}) out of range")));
            }
        }
        Ok(())
    }

    pub fn into_setoid(self, closure: Closure) -> Result<Setoid> {
        if closure == Closure::Strict {
            let report = check_setoid(&self)?;
            if !report.is_ok() {
                return Err(Error::Law(report));
            }
        } else {
            self.check_names()?;
        }
        let n = self.elements.len();
        let mut uf = UnionFind::<usize>::new(n);
        for &(x, y) in &self.eq {
            uf.union(x, y);
        }
        let roots: Vec<usize> = (0..n).map(|x| uf.find(x)).collect();
        Ok(Setoid::from_keys(Labels::Named(self.elements), &roots))
    }
}

/// Lists every missing reflexive, symmetric and (one-step) transitive pair.
pub fn check_setoid(raw: &RawSetoid) -> Result<Report> {
    raw.check_names()?;
    let name = |x: usize| raw.elements[x].as_str();
    let set: HashSet<(usize, usize)> = raw.eq.iter().copied().collect();
    let mut report = Report::new();
    report.check("reflexivity").check("symmetry").check("transitivity");
    for x in 0..raw.elements.len() {
        if !set.contains(&(x, x)) {
            report.fail("reflexivity", format!("missing ({0},{0})", name(x)));
        }
    }
    let mut sorted: Vec<(usize, usize)> = set.iter().copied().collect();
    sorted.sort_unstable();
    for &(x, y) in &sorted {
        if !set.contains(&(y, x)) {
            report.fail("symmetry", format!("({},{}) present but ({},{}) missing", name(x), name(y), name(y), name(x)));
        }
    }
    let mut succ: HashMap<usize, Vec<usize>> = HashMap::new();
    for &(x, y) in &sorted {
        succ.entry(x).or_default().push(y);
    }
    let mut missing = HashSet::new();
    for &(x, y) in &sorted {
        for &z in succ.get(&y).into_iter().flatten() {
            if !set.contains(&(x, z)) && missing.insert((x, z)) {
                report.fail(
                    "transitivity",
                    format!("({},{}) and ({},{}) present but ({},{}) missing", name(x), name(y), name(y), name(z), name(x), name(z)),
                );
            }
        }
    }
    Ok(report)
}

/// A total map between finite setoids. Extensionality is a checked property,
/// not a construction invariant, so broken maps can be represented and
/// reported.
#[derive(Clone, PartialEq, Eq)]
pub struct ExtFun {
    src: Arc<Setoid>,
    dst: Arc<Setoid>,
    map: Vec<usize>,
}

impl fmt::Debug for ExtFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

impl ExtFun {
    pub fn new(src: Arc<Setoid>, dst: Arc<Setoid>, map: Vec<usize>) -> Result<Self> {
        if map.len() != src.len() {
            return Err(Error::Malformed(format!(
                "map is not total: {} images for {} source elements",
                map.len(),
                src.len()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&y| y >= dst.len()) {
            return Err(Error::Malformed(format!("image {bad} outside target of size {}", dst.len())));
        }
        Ok(ExtFun { src, dst, map })
    }

    /// Builds from a partial name table; every source element needs an image.
    pub fn from_table(src: Arc<Setoid>, dst: Arc<Setoid>, table: &[(String, String)]) -> Result<Self> {
        let mut map = vec![None; src.len()];
        for (from, to) in table {
            let x = src
                .position(from)
                .ok_or_else(|| Error::Malformed(format!("unknown source element {from:?}")))?;
            let y = dst
                .position(to)
                .ok_or_else(|| Error::Malformed(format!("unknown target element {to:?}")))?;
            if map[x].is_some_and(|old| old != y) {
                return Err(Error::Malformed(format!("element {from:?} mapped twice")));
            }
            map[x] = Some(y);
        }
        let map = map
            .into_iter()
            .enumerate()
            .map(|(x, y)| y.ok_or_else(|| Error::Malformed(format!("map is not total: no image for {:?}", src.name(x)))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(src, dst, map)
    }

    pub fn identity(s: Arc<Setoid>) -> Self {
        let map = s.elements().collect();
        ExtFun { src: s.clone(), dst: s, map }
    }

    pub fn constant(src: Arc<Setoid>, dst: Arc<Setoid>, y: usize) -> Result<Self> {
        let map = vec![y; src.len()];
        Self::new(src, dst, map)
    }

    pub fn src(&self) -> &Arc<Setoid> {
        &self.src
    }

    pub fn dst(&self) -> &Arc<Setoid> {
        &self.dst
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &ExtFun) -> Result<ExtFun> {
        if !same_setoid(&first.dst, &self.src) {
            return Err(Error::DomainMismatch("composite: target of first map is not source of second".into()));
        }
        let map = first.map.iter().map(|&y| self.map[y]).collect();
        Ok(ExtFun { src: first.src.clone(), dst: self.dst.clone(), map })
    }

    /// Same table, relabelled onto structurally identical setoids.
    pub fn with_setoids(&self, src: Arc<Setoid>, dst: Arc<Setoid>) -> Result<ExtFun> {
        Self::new(src, dst, self.map.clone())
    }

    pub fn is_extensional(&self) -> bool {
        self.src.elements().all(|x| self.dst.equiv(self.map[x], self.map[self.src.rep(x)]))
    }

    /// Whether `map(u) = map(u')` implies `u = u'`.
    pub fn is_injective(&self) -> bool {
        let mut seen: HashMap<usize, usize> = HashMap::new();
        self.src.elements().all(|x| {
            let img = self.dst.rep(self.map[x]);
            let r = *seen.entry(img).or_insert(self.src.rep(x));
            r == self.src.rep(x)
        })
    }

    /// Renders as `{a↦a', b↦b'}`.
    pub fn describe(&self) -> String {
        let parts: Vec<String> = self
            .src
            .elements()
            .map(|x| format!("{}↦{}", self.src.name(x), self.dst.name(self.map[x])))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

/// Reports every source element whose image differs from the image of its
/// class representative.
pub fn check_extensional(f: &ExtFun) -> Report {
    let mut report = Report::new();
    report.check("extensionality");
    for y in f.src.elements() {
        let x = f.src.rep(y);
        if x != y && !f.dst.equiv(f.map[x], f.map[y]) {
            report.fail(
                "extensionality",
                format!(
                    "{} = {} but {} ≠ {}",
                    f.src.name(x),
                    f.src.name(y),
                    f.dst.name(f.map[x]),
                    f.dst.name(f.map[y])
                ),
            );
        }
    }
    report
}

/// Pointwise equality up to the target's equivalence.
pub fn ext_eq(f: &ExtFun, g: &ExtFun) -> Result<bool> {
    if !same_setoid(&f.src, &g.src) || !same_setoid(&f.dst, &g.dst) {
        return Err(Error::DomainMismatch("ext_eq on maps with different source or target".into()));
    }
    Ok(f.src.elements().all(|x| f.dst.equiv(f.map[x], g.map[x])))
}

/// All extensional maps `src → dst`, each as an image table, in
/// lexicographic order of tables.
pub fn extensional_maps(src: &Setoid, dst: &Setoid) -> Vec<Vec<usize>> {
    // Choose an image for each class representative, then every element of
    // the target class for the remaining members.
    let mut out = Vec::new();
    let mut table = vec![0usize; src.len()];
    fn go(src: &Setoid, dst: &Setoid, x: usize, table: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if x == src.len() {
            out.push(table.clone());
            return;
        }
        let r = src.rep(x);
        for y in dst.elements() {
            if r != x && !dst.equiv(y, table[r]) {
                continue;
            }
            table[x] = y;
            go(src, dst, x + 1, table, out);
        }
    }
    if src.is_empty() {
        return vec![Vec::new()];
    }
    go(src, dst, 0, &mut table, &mut out);
    out
}

/// An injection `(U, m)` into an ambient setoid: an element of P(A).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subsetoid {
    ambient: Arc<Setoid>,
    inj: ExtFun,
}

impl Subsetoid {
    pub fn new(ambient: Arc<Setoid>, inj: ExtFun) -> Result<Self> {
        if !same_setoid(&ambient, &inj.dst) {
            return Err(Error::DomainMismatch("injection does not land in the ambient setoid".into()));
        }
        if !inj.is_extensional() {
            return Err(Error::Extensionality(format!("subsetoid injection {}", inj.describe())));
        }
        if !inj.is_injective() {
            return Err(Error::Precondition(format!("map {} is not injective up to equality", inj.describe())));
        }
        Ok(Subsetoid { ambient, inj })
    }

    pub fn ambient(&self) -> &Arc<Setoid> {
        &self.ambient
    }

    pub fn part(&self) -> &Arc<Setoid> {
        &self.inj.src
    }

    pub fn inj(&self) -> &ExtFun {
        &self.inj
    }

    /// Membership indicator over the ambient carrier.
    pub fn members(&self) -> Vec<bool> {
        let mut hit = vec![false; self.ambient.len()];
        let classes: HashSet<usize> = self.inj.map.iter().map(|&y| self.ambient.rep(y)).collect();
        for x in self.ambient.elements() {
            hit[x] = classes.contains(&self.ambient.rep(x));
        }
        hit
    }
}

/// `x ∈̇ (U, m)`: some part element maps to something equal to `x`.
pub fn dot_in(x: usize, u: &Subsetoid) -> Result<bool> {
    if x >= u.ambient.len() {
        return Err(Error::Malformed(format!("element {x} is not in the ambient setoid")));
    }
    Ok(u.part().elements().any(|p| u.ambient.equiv(x, u.inj.apply(p))))
}

/// `(U, m) ⊂̇ (V, n)`: returns the factorisation `k` with `n ∘ k = m`, taking
/// the first matching element of `V` for each element of `U`.
pub fn subsetoid_leq(u: &Subsetoid, v: &Subsetoid) -> Result<Option<ExtFun>> {
    if !same_setoid(&u.ambient, &v.ambient) {
        return Err(Error::DomainMismatch("subsetoids of different ambient setoids".into()));
    }
    let mut k = Vec::with_capacity(u.part().len());
    for p in u.part().elements() {
        let target = u.inj.apply(p);
        match v.part().elements().find(|&q| v.ambient.equiv(v.inj.apply(q), target)) {
            Some(q) => k.push(q),
            None => return Ok(None),
        }
    }
    ExtFun::new(u.part().clone(), v.part().clone(), k).map(Some)
}

/// `(U, m) ≐ (V, n)`: inclusion both ways.
pub fn subsetoid_eq(u: &Subsetoid, v: &Subsetoid) -> Result<bool> {
    Ok(subsetoid_leq(u, v)?.is_some() && subsetoid_leq(v, u)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    /// Index setoid of the FAM1 fixture: {i0, i1} and {i2}.
    fn fam1_index() -> Arc<Setoid> {
        Arc::new(Setoid::from_pairs(names(&["i0", "i1", "i2"]), &[(0, 1)], Closure::Generate).unwrap())
    }

    /// SUB1: A = {x, y, z} with x = y; U = {u} ↦ x; V = {v0 ↦ x, v1 ↦ z}.
    fn sub1() -> (Arc<Setoid>, Subsetoid, Subsetoid) {
        let a = Arc::new(Setoid::from_pairs(names(&["x", "y", "z"]), &[(0, 1)], Closure::Generate).unwrap());
        let u = Arc::new(Setoid::discrete(["u"]));
        let v = Arc::new(Setoid::discrete(["v0", "v1"]));
        let m = Subsetoid::new(a.clone(), ExtFun::new(u, a.clone(), vec![0]).unwrap()).unwrap();
        let n = Subsetoid::new(a.clone(), ExtFun::new(v, a.clone(), vec![0, 2]).unwrap()).unwrap();
        (a, m, n)
    }

    #[test]
    fn fam1_index_is_valid_with_two_classes() {
        let i = fam1_index();
        let raw = RawSetoid { elements: names(&["i0", "i1", "i2"]), eq: i.pairs() };
        assert!(check_setoid(&raw).unwrap().is_ok());
        assert_eq!(i.class_count(), 2);
        assert_eq!(i.pairs(), vec![(0, 0), (0, 1), (1, 0), (1, 1), (2, 2)]);
    }

    #[test]
    fn discrete_relation_is_valid() {
        let raw = RawSetoid { elements: names(&["x", "y"]), eq: vec![(0, 0), (1, 1)] };
        assert!(check_setoid(&raw).unwrap().is_ok());
    }

    #[test]
    fn missing_symmetric_pair_is_reported() {
        let raw = RawSetoid { elements: names(&["x", "y"]), eq: vec![(0, 0), (1, 1), (0, 1)] };
        let r = check_setoid(&raw).unwrap();
        assert!(r.failed("symmetry"));
        assert!(!r.failed("reflexivity"));
        assert_eq!(r.law("symmetry").unwrap().witnesses, vec!["(x,y) present but (y,x) missing"]);
        assert!(matches!(raw.into_setoid(Closure::Strict), Err(Error::Law(_))));
    }

    #[test]
    fn missing_transitive_pair_is_reported() {
        let raw = RawSetoid {
            elements: names(&["x", "y", "z"]),
            eq: vec![(0, 0), (1, 1), (2, 2), (0, 1), (1, 0), (1, 2), (2, 1)],
        };
        let r = check_setoid(&raw).unwrap();
        assert!(r.failed("transitivity"));
        assert_eq!(r.law("transitivity").unwrap().violations, 2);
    }

    #[test]
    fn duplicate_identifiers_are_malformed() {
        let raw = RawSetoid { elements: names(&["x", "x"]), eq: vec![] };
        assert!(matches!(check_setoid(&raw), Err(Error::Malformed(_))));
    }

    #[test]
    fn generated_closure_is_an_equivalence() {
        let s = Setoid::from_pairs(names(&["a", "b", "c", "d"]), &[(0, 1), (2, 1)], Closure::Generate).unwrap();
        assert!(s.equiv(0, 2) && s.equiv(2, 0));
        assert!(!s.equiv(0, 3));
        assert_eq!(s.class_reps(), &[0, 3]);
    }

    #[test]
    fn identity_and_constant_maps_are_extensional() {
        let i = fam1_index();
        assert!(check_extensional(&ExtFun::identity(i.clone())).is_ok());
        let c = Arc::new(Setoid::discrete(["c"]));
        assert!(check_extensional(&ExtFun::constant(i, c, 0).unwrap()).is_ok());
    }

    #[test]
    fn splitting_an_equal_pair_violates_extensionality() {
        let i = fam1_index();
        let two = Arc::new(Setoid::discrete(["0", "1"]));
        let f = ExtFun::new(i, two, vec![0, 1, 0]).unwrap();
        let r = check_extensional(&f);
        assert!(r.failed("extensionality"));
        assert_eq!(r.law("extensionality").unwrap().witnesses, vec!["i0 = i1 but 0 ≠ 1"]);
    }

    #[test]
    fn non_total_table_is_malformed() {
        let i = fam1_index();
        let two = Arc::new(Setoid::discrete(["0", "1"]));
        let table = vec![("i0".to_string(), "0".to_string())];
        assert!(matches!(ExtFun::from_table(i.clone(), two.clone(), &table), Err(Error::Malformed(_))));
        assert!(matches!(ExtFun::new(i, two, vec![0]), Err(Error::Malformed(_))));
    }

    #[test]
    fn ext_eq_compares_pointwise() {
        let f0 = Arc::new(Setoid::discrete(["a", "b"]));
        let f1 = Arc::new(Setoid::discrete(["a'", "b'"]));
        let tau = ExtFun::new(f0.clone(), f1.clone(), vec![0, 1]).unwrap();
        let same = ExtFun::new(f0.clone(), f1.clone(), vec![0, 1]).unwrap();
        let swapped = ExtFun::new(f0.clone(), f1.clone(), vec![1, 0]).unwrap();
        assert!(ext_eq(&tau, &tau).unwrap());
        assert!(ext_eq(&tau, &same).unwrap());
        assert!(!ext_eq(&tau, &swapped).unwrap());
        let other = ExtFun::identity(f0);
        assert!(matches!(ext_eq(&tau, &other), Err(Error::DomainMismatch(_))));
    }

    #[test]
    fn membership_in_sub1() {
        let (_, m, n) = sub1();
        assert!(dot_in(1, &m).unwrap());
        assert!(!dot_in(2, &m).unwrap());
        assert!(dot_in(m.inj().apply(0), &m).unwrap());
        assert!(dot_in(2, &n).unwrap());
        assert!(matches!(dot_in(7, &m), Err(Error::Malformed(_))));
    }

    #[test]
    fn inclusion_in_sub1() {
        let (_, m, n) = sub1();
        let k = subsetoid_leq(&m, &n).unwrap().unwrap();
        assert_eq!(k.map(), &[0]);
        let id = subsetoid_leq(&n, &n).unwrap().unwrap();
        assert!(ext_eq(&id, &ExtFun::identity(n.part().clone())).unwrap());
        assert!(subsetoid_leq(&n, &m).unwrap().is_none());
        assert!(subsetoid_eq(&m, &m).unwrap());
        assert!(!subsetoid_eq(&m, &n).unwrap());
    }

    #[test]
    fn inclusion_across_ambients_is_a_mismatch() {
        let (_, m, _) = sub1();
        let b = Arc::new(Setoid::discrete(["p"]));
        let other = Subsetoid::new(b.clone(), ExtFun::identity(b)).unwrap();
        assert!(matches!(subsetoid_leq(&m, &other), Err(Error::DomainMismatch(_))));
    }

    #[test]
    fn non_injective_part_is_rejected() {
        let (a, _, _) = sub1();
        let two = Arc::new(Setoid::discrete(["p", "q"]));
        let f = ExtFun::new(two, a.clone(), vec![0, 1]).unwrap();
        assert!(matches!(Subsetoid::new(a, f), Err(Error::Precondition(_))));
    }

    #[test]
    fn extensional_maps_counts() {
        let two = Setoid::discrete(["a", "b"]);
        let one = Setoid::discrete(["c"]);
        assert_eq!(extensional_maps(&two, &two).len(), 4);
        assert_eq!(extensional_maps(&two, &one).len(), 1);
        assert_eq!(extensional_maps(&one, &two).len(), 2);
        assert_eq!(extensional_maps(&Setoid::empty(), &two), vec![Vec::<usize>::new()]);
        assert!(extensional_maps(&one, &Setoid::empty()).is_empty());
        // {x = y}, {z} → discrete {0, 1}: x and y must agree.
        let i = Setoid::from_pairs(names(&["x", "y", "z"]), &[(0, 1)], Closure::Generate).unwrap();
        assert_eq!(extensional_maps(&i, &two).len(), 4);
    }
}
