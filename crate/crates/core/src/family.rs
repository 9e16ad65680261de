//! Proof-irrelevant families of setoids and the setoid sum.
//!
//! A proof `p : i = j` is represented by the fact that `i` and `j` are
//! related, so a family stores exactly one transport per related ordered
//! pair. Condition (F2) is therefore structural; (F1) and (F3) are checked.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::report::Report;
use crate::setoid::{
    same_setoid, subsetoid_eq, Closure, ExtFun, RawSetoid, Setoid, Subsetoid,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Family {
    index: Arc<Setoid>,
    fibers: Vec<Arc<Setoid>>,
    /// Dense `i * n + j`; `Some` exactly on related pairs.
    transports: Vec<Option<ExtFun>>,
}

impl Family {
    /// Validates shape and completeness. Laws are left to [`check_family`].
    pub fn new(
        index: Arc<Setoid>,
        fibers: Vec<Arc<Setoid>>,
        transports: BTreeMap<(usize, usize), ExtFun>,
    ) -> Result<Self> {
        let n = index.len();
        if fibers.len() != n {
            return Err(Error::Malformed(format!("{} fibers for {} index elements", fibers.len(), n)));
        }
        let mut dense = vec![None; n * n];
        for ((i, j), t) in transports {
            if i >= n || j >= n {
                return Err(Error::Malformed(format!("transport ({i},{j}) outside the index")));
            }
            if !index.equiv(i, j) {
                return Err(Error::Malformed(format!(
                    "transport given for unrelated pair {} -> {}",
                    index.name(i),
                    index.name(j)
                )));
            }
            if !same_setoid(t.src(), &fibers[i]) || !same_setoid(t.dst(), &fibers[j]) {
                return Err(Error::DomainMismatch(format!(
                    "transport {} -> {} does not map F({}) to F({})",
                    index.name(i),
                    index.name(j),
                    index.name(i),
                    index.name(j)
                )));
            }
            dense[i * n + j] = Some(t);
        }
        for i in 0..n {
            for j in 0..n {
                if index.equiv(i, j) && dense[i * n + j].is_none() {
                    return Err(Error::MissingTransport { from: index.name(i), to: index.name(j) });
                }
            }
        }
        Ok(Family { index, fibers, transports: dense })
    }

    /// Fills identity transports on the diagonal, then inverts and composes
    /// given transports until every related pair is covered. An inverse picks,
    /// for each `x`, the first `y` whose transport is equal to `x`.
    pub fn autocomplete(
        index: Arc<Setoid>,
        fibers: Vec<Arc<Setoid>>,
        mut transports: BTreeMap<(usize, usize), ExtFun>,
    ) -> Result<Self> {
        let n = index.len();
        if fibers.len() != n {
            return Err(Error::Malformed(format!("{} fibers for {} index elements", fibers.len(), n)));
        }
        for i in 0..n {
            transports.entry((i, i)).or_insert_with(|| ExtFun::identity(fibers[i].clone()));
        }
        loop {
            let mut added = Vec::new();
            for i in 0..n {
                for k in 0..n {
                    if !index.equiv(i, k) || transports.contains_key(&(i, k)) {
                        continue;
                    }
                    let via = (0..n).find(|&j| transports.contains_key(&(i, j)) && transports.contains_key(&(j, k)));
                    if let Some(j) = via {
                        added.push(((i, k), transports[&(j, k)].after(&transports[&(i, j)])?));
                    } else if let Some(back) = transports.get(&(k, i)) {
                        let (fi, fk) = (&fibers[i], &fibers[k]);
                        let inverse: Option<Vec<usize>> = fi
                            .elements()
                            .map(|x| fk.elements().find(|&y| fi.equiv(back.apply(y), x)))
                            .collect();
                        if let Some(map) = inverse {
                            added.push(((i, k), ExtFun::new(fi.clone(), fk.clone(), map)?));
                        }
                    }
                }
            }
            if added.is_empty() {
                break;
            }
            for (key, t) in added {
                transports.entry(key).or_insert(t);
            }
        }
        Self::new(index, fibers, transports)
    }

    /// Every fiber is the same setoid and every transport the identity.
    pub fn constant(index: Arc<Setoid>, fiber: Arc<Setoid>) -> Self {
        let n = index.len();
        let mut transports = vec![None; n * n];
        for i in 0..n {
            for j in 0..n {
                if index.equiv(i, j) {
                    transports[i * n + j] = Some(ExtFun::identity(fiber.clone()));
                }
            }
        }
        Family { index, fibers: vec![fiber; n], transports }
    }

    pub fn index(&self) -> &Arc<Setoid> {
        &self.index
    }

    pub fn fibers(&self) -> &[Arc<Setoid>] {
        &self.fibers
    }

    pub fn fiber(&self, i: usize) -> &Arc<Setoid> {
        &self.fibers[i]
    }

    pub fn transport(&self, i: usize, j: usize) -> Option<&ExtFun> {
        self.transports[i * self.index.len() + j].as_ref()
    }

    /// Transport along a pair known to be related.
    #[inline]
    pub fn tau(&self, i: usize, j: usize) -> &ExtFun {
        self.transport(i, j)
            .unwrap_or_else(|| panic!("no transport between unrelated {} and {}", self.index.name(i), self.index.name(j)))
    }

    /// All stored transports keyed by index pair.
    pub fn transports(&self) -> impl Iterator<Item = ((usize, usize), &ExtFun)> {
        let n = self.index.len();
        self.transports
            .iter()
            .enumerate()
            .filter_map(move |(k, t)| t.as_ref().map(|t| ((k / n, k % n), t)))
    }

    /// Ordered pairs of related index elements.
    pub fn related_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.index.len();
        (0..n).flat_map(move |i| (0..n).filter(move |&j| self.index.equiv(i, j)).map(move |j| (i, j)))
    }
}

/// Checks (F1), (F3) and extensionality of every transport; (F2) holds by
/// representation.
pub fn check_family(f: &Family) -> Report {
    let idx = &f.index;
    let mut report = Report::new();
    report.check("F1").structural("F2").check("F3").check("transport extensionality");
    for ((i, j), t) in f.transports() {
        if !t.is_extensional() {
            report.fail("transport extensionality", format!("τ({},{}) = {}", idx.name(i), idx.name(j), t.describe()));
        }
    }
    for i in idx.elements() {
        let t = f.tau(i, i);
        let fib = f.fiber(i);
        for x in fib.elements() {
            if !fib.equiv(t.apply(x), x) {
                report.fail(
                    "F1",
                    format!("τ({0},{0})({1}) = {2} ≠ {1}", idx.name(i), fib.name(x), fib.name(t.apply(x))),
                );
            }
        }
    }
    let pairs: Vec<(usize, usize)> = f.related_pairs().collect();
    for &(i, j) in &pairs {
        for k in idx.elements().filter(|&k| idx.equiv(j, k)) {
            let (tij, tjk, tik) = (f.tau(i, j), f.tau(j, k), f.tau(i, k));
            let fk = f.fiber(k);
            for x in f.fiber(i).elements() {
                let via = tjk.apply(tij.apply(x));
                let direct = tik.apply(x);
                if !fk.equiv(via, direct) {
                    report.fail(
                        "F3",
                        format!(
                            "{}→{}→{} at {}: τ({},{})∘τ({},{}) gives {} but τ({},{}) gives {}",
                            idx.name(i),
                            idx.name(j),
                            idx.name(k),
                            f.fiber(i).name(x),
                            idx.name(j),
                            idx.name(k),
                            idx.name(i),
                            idx.name(j),
                            fk.name(via),
                            idx.name(i),
                            idx.name(k),
                            fk.name(direct)
                        ),
                    );
                }
            }
        }
    }
    report
}

fn require_valid(f: &Family) -> Result<()> {
    let report = check_family(f);
    if report.is_ok() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("invalid family: {}", report.summary())))
    }
}

/// The setoid sum Σ(I, F) with its injections.
///
/// Carrier elements are pairs `(i, x)` ordered by index position, then fiber
/// position; `(i, x)` sits at `offset(i) + x`.
#[derive(Clone, Debug)]
pub struct Sum {
    setoid: Arc<Setoid>,
    offsets: Vec<usize>,
    owner: Vec<usize>,
    injections: Vec<ExtFun>,
}

impl Sum {
    pub fn setoid(&self) -> &Arc<Setoid> {
        &self.setoid
    }

    #[inline]
    pub fn elem(&self, i: usize, x: usize) -> usize {
        self.offsets[i] + x
    }

    /// Inverse of [`Sum::elem`].
    pub fn split(&self, u: usize) -> (usize, usize) {
        let i = self.owner[u];
        (i, u - self.offsets[i])
    }

    pub fn injection(&self, i: usize) -> &ExtFun {
        &self.injections[i]
    }

    pub fn injections(&self) -> &[ExtFun] {
        &self.injections
    }

    /// Carrier positions of `ι_i`'s image (not saturated).
    pub fn fiber_range(&self, i: usize) -> std::ops::Range<usize> {
        let end = self.offsets.get(i + 1).copied().unwrap_or(self.setoid.len());
        self.offsets[i]..end
    }

    /// Membership indicator of `F̌(i)`: elements equal to some `(i, x)`.
    pub fn members(&self, i: usize) -> Vec<bool> {
        let mut hit = vec![false; self.setoid.len()];
        for u in self.fiber_range(i) {
            for v in self.setoid.class_of(u) {
                hit[v] = true;
            }
        }
        hit
    }
}

/// The raw relation `(x,y) ~ (x',y')` iff `x = x'` and `τ(x,x')(y) = y'`,
/// exactly as defined (no closure applied).
pub fn sum_relation(f: &Family) -> RawSetoid {
    let idx = &f.index;
    let mut offsets = Vec::with_capacity(idx.len());
    let mut elements = Vec::new();
    for i in idx.elements() {
        offsets.push(elements.len());
        let fib = f.fiber(i);
        elements.extend(fib.elements().map(|x| format!("({},{})", idx.name(i), fib.name(x))));
    }
    let mut eq = Vec::new();
    for (i, j) in f.related_pairs() {
        let t = f.tau(i, j);
        let fj = f.fiber(j);
        for x in f.fiber(i).elements() {
            for y in fj.elements() {
                if fj.equiv(t.apply(x), y) {
                    eq.push((offsets[i] + x, offsets[j] + y));
                }
            }
        }
    }
    eq.sort_unstable();
    RawSetoid { elements, eq }
}

/// Σ(I, F). The relation is used as defined and must already be an
/// equivalence; a valid family guarantees this.
pub fn sigma(f: &Family) -> Result<Sum> {
    require_valid(f)?;
    let raw = sum_relation(f);
    let setoid = Arc::new(raw.into_setoid(Closure::Strict).map_err(|e| match e {
        Error::Law(r) => Error::Precondition(format!("sum relation is not an equivalence: {}", r.summary())),
        other => other,
    })?);
    let mut offsets = Vec::new();
    let mut owner = Vec::new();
    let mut injections = Vec::new();
    for i in f.index.elements() {
        offsets.push(owner.len());
        let start = owner.len();
        let n = f.fiber(i).len();
        owner.extend(std::iter::repeat_n(i, n));
        let map = (start..start + n).collect();
        injections.push(ExtFun::new(f.fiber(i).clone(), setoid.clone(), map)?);
    }
    Ok(Sum { setoid, offsets, owner, injections })
}

/// Checks `ι_{x'} ∘ F(p) = ι_x` for every related pair.
pub fn check_injection_property(f: &Family, sum: &Sum) -> Report {
    let idx = &f.index;
    let s = sum.setoid();
    let mut report = Report::new();
    report.check("injection property");
    for (i, j) in f.related_pairs() {
        let t = f.tau(i, j);
        for x in f.fiber(i).elements() {
            let lhs = sum.injection(j).apply(t.apply(x));
            let rhs = sum.injection(i).apply(x);
            if !s.equiv(lhs, rhs) {
                report.fail(
                    "injection property",
                    format!("ι_{}(τ({},{})({})) = {} ≁ {}", idx.name(j), idx.name(i), idx.name(j), f.fiber(i).name(x), s.name(lhs), s.name(rhs)),
                );
            }
        }
    }
    report
}

/// Checks that `legs` is a cocone under the family with vertex `target`.
pub fn check_cocone(f: &Family, target: &Arc<Setoid>, legs: &[ExtFun]) -> Result<Report> {
    let idx = &f.index;
    if legs.len() != idx.len() {
        return Err(Error::Malformed(format!("{} cocone legs for {} index elements", legs.len(), idx.len())));
    }
    for (i, leg) in legs.iter().enumerate() {
        if !same_setoid(leg.src(), f.fiber(i)) || !same_setoid(leg.dst(), target) {
            return Err(Error::DomainMismatch(format!("cocone leg at {} has the wrong type", idx.name(i))));
        }
    }
    let mut report = Report::new();
    report.check("leg extensionality").check("cocone compatibility");
    for (i, leg) in legs.iter().enumerate() {
        if !leg.is_extensional() {
            report.fail("leg extensionality", format!("j_{} = {}", idx.name(i), leg.describe()));
        }
    }
    for (i, j) in f.related_pairs() {
        let t = f.tau(i, j);
        for x in f.fiber(i).elements() {
            let via = legs[j].apply(t.apply(x));
            let direct = legs[i].apply(x);
            if !target.equiv(via, direct) {
                report.fail(
                    "cocone compatibility",
                    format!(
                        "at ({},{}): j_{}(τ({},{})({})) = {} but j_{}({}) = {}",
                        idx.name(i),
                        f.fiber(i).name(x),
                        idx.name(j),
                        idx.name(i),
                        idx.name(j),
                        f.fiber(i).name(x),
                        target.name(via),
                        idx.name(i),
                        f.fiber(i).name(x),
                        target.name(direct)
                    ),
                );
            }
        }
    }
    Ok(report)
}

/// The mediating map `k : Σ(I,F) → C` with `k ∘ ι_i = j_i`.
pub fn universal_map(f: &Family, sum: &Sum, target: Arc<Setoid>, legs: &[ExtFun]) -> Result<ExtFun> {
    let report = check_cocone(f, &target, legs)?;
    if let Some(bad) = report.failures().next() {
        return Err(Error::Compatibility(bad.witnesses.first().cloned().unwrap_or_else(|| bad.law.clone())));
    }
    let map = sum
        .setoid()
        .elements()
        .map(|u| {
            let (i, x) = sum.split(u);
            legs[i].apply(x)
        })
        .collect();
    ExtFun::new(sum.setoid().clone(), target, map)
}

/// An extensional map `I → P(A)`.
#[derive(Clone, Debug)]
pub struct SubsetoidFamily {
    index: Arc<Setoid>,
    ambient: Arc<Setoid>,
    assign: Vec<Subsetoid>,
}

impl SubsetoidFamily {
    pub fn new(index: Arc<Setoid>, ambient: Arc<Setoid>, assign: Vec<Subsetoid>) -> Result<Self> {
        if assign.len() != index.len() {
            return Err(Error::Malformed(format!("{} subsetoids for {} index elements", assign.len(), index.len())));
        }
        if let Some(bad) = assign.iter().position(|s| !same_setoid(s.ambient(), &ambient)) {
            return Err(Error::DomainMismatch(format!("subsetoid at {} has another ambient", index.name(bad))));
        }
        for i in index.elements() {
            for j in index.elements().filter(|&j| j > i && index.equiv(i, j)) {
                if !subsetoid_eq(&assign[i], &assign[j])? {
                    return Err(Error::Extensionality(format!(
                        "{} = {} but their subsetoids differ",
                        index.name(i),
                        index.name(j)
                    )));
                }
            }
        }
        Ok(SubsetoidFamily { index, ambient, assign })
    }

    pub fn index(&self) -> &Arc<Setoid> {
        &self.index
    }

    pub fn ambient(&self) -> &Arc<Setoid> {
        &self.ambient
    }

    pub fn assign(&self, i: usize) -> &Subsetoid {
        &self.assign[i]
    }
}

/// Extends a family of subsetoids to a proof-irrelevant family: the transport
/// `i → j` is the unique `f` with `m_j ∘ f = m_i`.
pub fn hat_family(g: &SubsetoidFamily) -> Result<Family> {
    let idx = &g.index;
    let fibers: Vec<Arc<Setoid>> = g.assign.iter().map(|s| s.part().clone()).collect();
    let mut transports = BTreeMap::new();
    for i in idx.elements() {
        for j in idx.elements().filter(|&j| idx.equiv(i, j)) {
            let (mi, mj) = (g.assign[i].inj(), g.assign[j].inj());
            let mut map = Vec::with_capacity(fibers[i].len());
            for u in fibers[i].elements() {
                let target = mi.apply(u);
                let v = fibers[j].elements().find(|&v| g.ambient.equiv(mj.apply(v), target)).ok_or_else(|| {
                    Error::Extensionality(format!(
                        "{} = {} but {} is not a member at {}",
                        idx.name(i),
                        idx.name(j),
                        g.ambient.name(target),
                        idx.name(j)
                    ))
                })?;
                map.push(v);
            }
            transports.insert((i, j), ExtFun::new(fibers[i].clone(), fibers[j].clone(), map)?);
        }
    }
    Family::new(idx.clone(), fibers, transports)
}

/// `F̌ : I → P(Σ(I,F))`, `F̌(i) = (F(i), ι_i)`.
pub fn check_down_family(f: &Family, sum: &Sum) -> Result<SubsetoidFamily> {
    let assign = f
        .index
        .elements()
        .map(|i| Subsetoid::new(sum.setoid().clone(), sum.injection(i).clone()))
        .collect::<Result<Vec<_>>>()?;
    SubsetoidFamily::new(f.index.clone(), sum.setoid().clone(), assign)
}
