//! Saturated binary relations on a setoid: the arrow material of the
//! relational category.
//!
//! Relations are stored saturated as a dense `n × n` bit table, so equality
//! of relations is table equality.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::family::Sum;
use crate::setoid::{same_setoid, ExtFun, Setoid, Subsetoid};

#[derive(Clone, PartialEq, Eq)]
pub struct Relation {
    base: Arc<Setoid>,
    bits: Vec<bool>,
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

impl Relation {
    pub fn empty(base: Arc<Setoid>) -> Self {
        let n = base.len();
        Relation { base, bits: vec![false; n * n] }
    }

    pub fn base(&self) -> &Arc<Setoid> {
        &self.base
    }

    /// The dense membership table, row-major by first component.
    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    #[inline]
    pub fn contains(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.base.len() + v]
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let n = self.base.len();
        self.bits.iter().enumerate().filter(|(_, b)| **b).map(|(k, _)| (k / n, k % n)).collect()
    }

    pub fn len(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|b| *b)
    }

    /// Adds the whole block `[u] × [v]`.
    fn insert_block(&mut self, u: usize, v: usize) {
        let n = self.base.len();
        let vs: Vec<usize> = self.base.class_of(v).collect();
        for u2 in self.base.class_of(u).collect::<Vec<_>>() {
            for &v2 in &vs {
                self.bits[u2 * n + v2] = true;
            }
        }
    }

    /// Members of the domain (first components), as an indicator.
    pub fn dom_members(&self) -> Vec<bool> {
        let n = self.base.len();
        (0..n).map(|u| (0..n).any(|v| self.contains(u, v))).collect()
    }

    pub fn ran_members(&self) -> Vec<bool> {
        let n = self.base.len();
        (0..n).map(|v| (0..n).any(|u| self.contains(u, v))).collect()
    }

    pub fn describe(&self) -> String {
        let parts: Vec<String> = self
            .pairs()
            .into_iter()
            .map(|(u, v)| format!("({},{})", self.base.name(u), self.base.name(v)))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

fn check_pairs(base: &Setoid, raw: &[(usize, usize)]) -> Result<()> {
    match raw.iter().find(|(u, v)| *u >= base.len() || *v >= base.len()) {
        Some((u, v)) => Err(Error::Malformed(format!("pair ({u},{v}) mentions an unknown element"))),
        None => Ok(()),
    }
}

/// Smallest saturated relation containing `raw`.
pub fn saturate(base: Arc<Setoid>, raw: &[(usize, usize)]) -> Result<Relation> {
    check_pairs(&base, raw)?;
    let mut r = Relation::empty(base);
    for &(u, v) in raw {
        r.insert_block(u, v);
    }
    Ok(r)
}

/// Pairs that saturation would add to `raw`.
pub fn saturation_gaps(base: &Arc<Setoid>, raw: &[(usize, usize)]) -> Result<Vec<(usize, usize)>> {
    let closed = saturate(base.clone(), raw)?;
    let given: std::collections::HashSet<(usize, usize)> = raw.iter().copied().collect();
    Ok(closed.pairs().into_iter().filter(|p| !given.contains(p)).collect())
}

fn members_subsetoid(base: &Arc<Setoid>, members: &[bool]) -> Subsetoid {
    let reps: Vec<usize> = base.class_reps().iter().copied().filter(|&r| members[r]).collect();
    let part = Arc::new(Setoid::discrete(reps.iter().map(|&r| base.name(r))));
    let inj = ExtFun::new(part, base.clone(), reps).expect("representatives lie in the base");
    Subsetoid::new(base.clone(), inj).expect("distinct class representatives form an injection")
}

/// Domain as a subsetoid: one representative per class.
pub fn rel_dom(r: &Relation) -> Subsetoid {
    members_subsetoid(&r.base, &r.dom_members())
}

pub fn rel_ran(r: &Relation) -> Subsetoid {
    members_subsetoid(&r.base, &r.ran_members())
}

/// Every element of the domain is related only to mutually equal elements.
pub fn is_functional(r: &Relation) -> bool {
    functionality_witness(r).is_none()
}

/// A triple `(u, v, v')` with `u R v`, `u R v'` and `v ≠ v'`, if any.
pub fn functionality_witness(r: &Relation) -> Option<(usize, usize, usize)> {
    let n = r.base.len();
    for u in 0..n {
        let mut first = None;
        for v in 0..n {
            if r.contains(u, v) {
                match first {
                    None => first = Some(v),
                    Some(v0) if !r.base.equiv(v0, v) => return Some((u, v0, v)),
                    _ => {}
                }
            }
        }
    }
    None
}

/// `q ∘ r`: `u (q∘r) w` iff `u r v` and `v q w` for some `v`.
pub fn rel_compose(q: &Relation, r: &Relation) -> Result<Relation> {
    if !same_setoid(&q.base, &r.base) {
        return Err(Error::DomainMismatch("composing relations on different setoids".into()));
    }
    let n = r.base.len();
    let mut out = Relation::empty(r.base.clone());
    for u in 0..n {
        for v in (0..n).filter(|&v| r.contains(u, v)) {
            for w in 0..n {
                if q.contains(v, w) {
                    out.bits[u * n + w] = true;
                }
            }
        }
    }
    Ok(out)
}

/// The graph of `f : F(i) → F(j)` inside the sum: `u G v` iff for some `x`,
/// `u = ⟨i,x⟩` and `v = ⟨j,f(x)⟩`.
pub fn graph_of(sum: &Sum, i: usize, j: usize, f: &ExtFun) -> Result<Relation> {
    let (fi, fj) = (sum.injection(i).src(), sum.injection(j).src());
    if !same_setoid(f.src(), fi) || !same_setoid(f.dst(), fj) {
        return Err(Error::DomainMismatch(format!("graph_of: map does not go from fiber {i} to fiber {j}")));
    }
    let mut r = Relation::empty(sum.setoid().clone());
    for x in fi.elements() {
        r.insert_block(sum.elem(i, x), sum.elem(j, f.apply(x)));
    }
    Ok(r)
}

/// `I_{F̌(i)}`: `u = v` with `u` equal to some `⟨i,x⟩`.
pub fn identity_relation(sum: &Sum, i: usize) -> Relation {
    let s = sum.setoid();
    let members = sum.members(i);
    let n = s.len();
    let mut r = Relation::empty(s.clone());
    for u in (0..n).filter(|&u| members[u]) {
        for v in s.class_of(u) {
            r.bits[u * n + v] = true;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::sigma;
    use crate::family::tests::fam1;
    use crate::setoid::subsetoid_eq;

    fn fam1_sum() -> (crate::family::Family, Sum) {
        let f = fam1();
        let s = sigma(&f).unwrap();
        (f, s)
    }

    #[test]
    fn saturate_empty_and_closing() {
        let (_, sum) = fam1_sum();
        let base = sum.setoid().clone();
        assert!(saturate(base.clone(), &[]).unwrap().is_empty());
        let r = saturate(base.clone(), &[(sum.elem(0, 0), sum.elem(2, 0))]).unwrap();
        assert!(r.contains(sum.elem(1, 0), sum.elem(2, 0)));
        assert_eq!(r.len(), 2);
        let again = saturate(base.clone(), &r.pairs()).unwrap();
        assert_eq!(again, r);
        assert!(matches!(saturate(base, &[(0, 99)]), Err(Error::Malformed(_))));
    }

    #[test]
    fn dom_and_ran_of_constant_graph() {
        let (f, sum) = fam1_sum();
        let c = ExtFun::constant(f.fiber(0).clone(), f.fiber(2).clone(), 0).unwrap();
        let g = graph_of(&sum, 0, 2, &c).unwrap();
        let down0 = Subsetoid::new(sum.setoid().clone(), sum.injection(0).clone()).unwrap();
        let down2 = Subsetoid::new(sum.setoid().clone(), sum.injection(2).clone()).unwrap();
        assert!(subsetoid_eq(&rel_dom(&g), &down0).unwrap());
        assert!(subsetoid_eq(&rel_ran(&g), &down2).unwrap());
        assert!(rel_dom(&Relation::empty(sum.setoid().clone())).part().is_empty());
    }

    #[test]
    fn constant_graph_pairs() {
        let (f, sum) = fam1_sum();
        let c = ExtFun::constant(f.fiber(0).clone(), f.fiber(2).clone(), 0).unwrap();
        let g = graph_of(&sum, 0, 2, &c).unwrap();
        let s = sum.setoid();
        let named: Vec<(String, String)> = g.pairs().into_iter().map(|(u, v)| (s.name(u), s.name(v))).collect();
        let expected: Vec<(String, String)> = ["(i0,a)", "(i0,b)", "(i1,a')", "(i1,b')"]
            .iter()
            .map(|u| (u.to_string(), "(i2,c)".to_string()))
            .collect();
        assert_eq!(named, expected);
        assert!(is_functional(&g));
    }

    #[test]
    fn functionality() {
        let (_, sum) = fam1_sum();
        let base = sum.setoid().clone();
        assert!(is_functional(&Relation::empty(base.clone())));
        let a = sum.elem(0, 0);
        let r = saturate(base, &[(a, a), (a, sum.elem(2, 0))]).unwrap();
        assert!(!is_functional(&r));
        assert!(functionality_witness(&r).is_some());
    }

    #[test]
    fn identity_relations_of_fam1() {
        let (f, sum) = fam1_sum();
        let c = sum.elem(2, 0);
        assert_eq!(identity_relation(&sum, 2).pairs(), vec![(c, c)]);
        let i0 = identity_relation(&sum, 0);
        assert_eq!(i0.len(), 8);
        assert_eq!(rel_compose(&i0, &i0).unwrap(), i0);
        let id = ExtFun::identity(f.fiber(0).clone());
        assert_eq!(graph_of(&sum, 0, 0, &id).unwrap(), i0);
    }

    #[test]
    fn composition_laws_on_fam1() {
        let (f, sum) = fam1_sum();
        let swap = ExtFun::new(f.fiber(0).clone(), f.fiber(1).clone(), vec![1, 0]).unwrap();
        let g1 = graph_of(&sum, 0, 1, &swap).unwrap();
        assert_eq!(rel_compose(&identity_relation(&sum, 1), &g1).unwrap(), g1);
        let empty = Relation::empty(sum.setoid().clone());
        assert!(rel_compose(&empty, &g1).unwrap().is_empty());
        // G_g ∘ G_f = G_{g ∘ τ(i1,i1) ∘ f} for f: F(i0) → F(i1), g: F(i1) → F(i2).
        let g = ExtFun::constant(f.fiber(1).clone(), f.fiber(2).clone(), 0).unwrap();
        let gg = graph_of(&sum, 1, 2, &g).unwrap();
        let composite = g.after(f.tau(1, 1)).unwrap().after(&swap).unwrap();
        assert_eq!(rel_compose(&gg, &g1).unwrap(), graph_of(&sum, 0, 2, &composite).unwrap());
    }

    #[test]
    fn graph_rejects_wrong_fibers() {
        let (f, sum) = fam1_sum();
        let id = ExtFun::identity(f.fiber(0).clone());
        assert!(matches!(graph_of(&sum, 0, 2, &id), Err(Error::DomainMismatch(_))));
    }

    #[test]
    fn graph_on_empty_fiber_is_empty() {
        let index = Arc::new(Setoid::discrete(["p", "q"]));
        let fibers = vec![Arc::new(Setoid::empty()), Arc::new(Setoid::discrete(["x"]))];
        let f = crate::family::Family::autocomplete(index, fibers, Default::default()).unwrap();
        let sum = sigma(&f).unwrap();
        let e = ExtFun::new(f.fiber(0).clone(), f.fiber(1).clone(), vec![]).unwrap();
        assert!(graph_of(&sum, 0, 1, &e).unwrap().is_empty());
    }
}
