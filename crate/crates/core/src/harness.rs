//! Seeded generators for setoids and valid families, an independent
//! relation-equality oracle, and the property suite run over generated
//! families.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::category::roundtrip_checks;
use crate::constructions::{check_example_iso, check_graph_laws, check_iso};
use crate::error::Result;
use crate::family::{check_family, check_injection_property, sigma, sum_relation, Family};
use crate::relation::Relation;
use crate::report::{Entry, Report};
use crate::setoid::{check_setoid, ExtFun, Labels, Setoid};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn element_name(k: usize) -> String {
    if k < 26 {
        ((b'a' + k as u8) as char).to_string()
    } else {
        format!("e{k}")
    }
}

/// Random partition of `n` labelled elements.
fn random_partition(rng: &mut ChaCha8Rng, names: Vec<String>) -> Setoid {
    let n = names.len();
    let keys: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
    Setoid::from_keys(Labels::Named(names), &keys)
}

/// A setoid with at most `max_elems` elements, partitioned at random.
pub fn gen_setoid(max_elems: usize, seed: u64) -> Setoid {
    let mut rng = rng(seed);
    let n = rng.gen_range(0..=max_elems);
    random_partition(&mut rng, (0..n).map(element_name).collect())
}

/// A valid family with at most `max_index` index elements and fibers of at
/// most `max_fiber` elements.
///
/// Each index class gets a class count `c`; each member a fiber with `c`
/// classes. A random spanning tree of class bijections ties every member to
/// the first, and `τ(i,j)(x)` is a random element of the class matching the
/// class of `x` through the tree.
pub fn gen_family(max_index: usize, max_fiber: usize, seed: u64) -> Family {
    let mut rng = rng(seed);
    let n = if max_index == 0 { 0 } else { rng.gen_range(1..=max_index) };
    let index = Arc::new(random_partition(&mut rng, (0..n).map(|i| format!("i{i}")).collect()));
    let mut fibers: Vec<Option<Arc<Setoid>>> = vec![None; n];
    // Fiber class of each element, and its position in the tree root's classes.
    let mut class_of: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut to_root: Vec<Vec<usize>> = vec![Vec::new(); n];
    for members in index.classes() {
        let c = rng.gen_range(0..=max_fiber);
        for &i in &members {
            let size = if c == 0 { 0 } else { rng.gen_range(c..=max_fiber) };
            let mut labels: Vec<usize> = (0..c).collect();
            labels.extend((c..size).map(|_| rng.gen_range(0..c)));
            labels.shuffle(&mut rng);
            // Renumber classes by first occurrence so class k has representative label k.
            let mut seen = Vec::new();
            for &l in &labels {
                if !seen.contains(&l) {
                    seen.push(l);
                }
            }
            let renumbered: Vec<usize> = labels.iter().map(|l| seen.iter().position(|s| s == l).unwrap()).collect();
            fibers[i] = Some(Arc::new(Setoid::from_keys(
                Labels::Named((0..size).map(element_name).collect()),
                &renumbered,
            )));
            class_of[i] = renumbered;
        }
        let mut order = members.clone();
        order.shuffle(&mut rng);
        to_root[order[0]] = (0..c).collect();
        for k in 1..order.len() {
            let parent = order[rng.gen_range(0..k)];
            let mut edge: Vec<usize> = (0..c).collect();
            edge.shuffle(&mut rng);
            to_root[order[k]] = edge.iter().map(|&x| to_root[parent][x]).collect();
        }
    }
    let fibers: Vec<Arc<Setoid>> = fibers.into_iter().map(|f| f.expect("every index element has a fiber")).collect();
    let mut transports = BTreeMap::new();
    for i in 0..n {
        for j in (0..n).filter(|&j| index.equiv(i, j)) {
            let map = if i == j {
                fibers[i].elements().collect()
            } else {
                fibers[i]
                    .elements()
                    .map(|x| {
                        let target = to_root[i][class_of[i][x]];
                        let choices: Vec<usize> =
                            fibers[j].elements().filter(|&y| to_root[j][class_of[j][y]] == target).collect();
                        *choices.choose(&mut rng).expect("matching class is inhabited")
                    })
                    .collect()
            };
            let t = ExtFun::new(fibers[i].clone(), fibers[j].clone(), map).expect("maps stay in range");
            transports.insert((i, j), t);
        }
    }
    Family::new(index, fibers, transports).expect("generated family is complete")
}

/// Relation equality through membership: `u ∈̇ R` when some pair of `R` is
/// componentwise equal to it. Does not rely on `R` being stored saturated.
pub fn oracle_rel_eq(r1: &Relation, r2: &Relation) -> bool {
    let base = r1.base();
    let member = |r: &Relation, u: usize, v: usize| r.pairs().iter().any(|&(a, b)| base.equiv(a, u) && base.equiv(b, v));
    let (p1, p2) = (r1.pairs(), r2.pairs());
    p1.iter().all(|&(u, v)| member(r2, u, v)) && p2.iter().all(|&(u, v)| member(r1, u, v))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub samples: usize,
    pub max_index: usize,
    pub max_fiber: usize,
    /// Also run both round trips and the hom identities on each family.
    pub roundtrips: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyOutcome {
    pub seed: u64,
    pub index_size: usize,
    pub sum_size: usize,
    pub arrow_classes: usize,
    pub laws: Vec<Entry>,
    #[serde(skip)]
    pub report: Report,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub families: usize,
    pub failing_families: usize,
    pub outcomes: Vec<FamilyOutcome>,
}

impl SuiteReport {
    pub fn is_ok(&self) -> bool {
        self.failing_families == 0
    }

    /// Total violations of laws whose name contains `needle`.
    pub fn violations(&self, needle: &str) -> usize {
        self.outcomes
            .iter()
            .flat_map(|o| o.report.laws())
            .filter(|l| l.law.contains(needle))
            .map(|l| l.violations)
            .sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("suite reports serialize")
    }
}

/// Every property checked on one generated family.
pub fn check_generated_family(f: &Family, roundtrips: bool) -> Result<(Report, usize, usize)> {
    let mut report = Report::new();
    report.merge(Some("family"), check_family(f));
    report.merge(Some("sum"), check_setoid(&sum_relation(f))?);
    let sum = sigma(f)?;
    report.merge(Some("injection"), check_injection_property(f, &sum));
    let iso = check_iso(f)?;
    report.merge(Some("iso"), iso.report.clone());
    report.merge(Some("graphs"), check_graph_laws(&iso.c, &sum)?);
    report.merge(Some("image"), check_example_iso(f)?);
    if roundtrips {
        report.merge(Some("C round trips"), roundtrip_checks(&iso.c.category)?);
        report.merge(Some("S round trips"), roundtrip_checks(&iso.s.category)?);
    }
    Ok((report, sum.setoid().len(), iso.c.category.arrow_classes()))
}

/// Runs [`check_generated_family`] on `samples` families with seeds
/// `seed, seed + 1, ...`, in parallel, reported in seed order.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    let outcomes = (0..config.samples as u64)
        .into_par_iter()
        .map(|k| {
            let seed = config.seed.wrapping_add(k);
            let f = gen_family(config.max_index, config.max_fiber, seed);
            let (report, sum_size, arrow_classes) = check_generated_family(&f, config.roundtrips)?;
            Ok(FamilyOutcome {
                seed,
                index_size: f.index().len(),
                sum_size,
                arrow_classes,
                laws: report.entries(),
                report,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let failing_families = outcomes.iter().filter(|o| !o.report.is_ok()).count();
    Ok(SuiteReport { config: config.clone(), families: outcomes.len(), failing_families, outcomes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::tests::fam1;
    use crate::relation::saturate;

    #[test]
    fn empty_bound_gives_empty_setoid() {
        assert!(gen_setoid(0, 7).is_empty());
    }

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(gen_setoid(6, 42), gen_setoid(6, 42));
        assert_eq!(gen_family(4, 3, 42), gen_family(4, 3, 42));
    }

    #[test]
    fn generated_setoids_pass_the_checker() {
        for seed in 0..1000 {
            let s = gen_setoid(4, seed);
            let raw = crate::setoid::RawSetoid {
                elements: s.elements().map(|x| s.name(x)).collect(),
                eq: s.pairs(),
            };
            assert!(check_setoid(&raw).unwrap().is_ok(), "seed {seed}");
        }
    }

    #[test]
    fn unit_bounds_give_singleton_family() {
        for seed in 0..20 {
            let f = gen_family(1, 1, seed);
            assert_eq!(f.index().len(), 1);
            assert!(f.fiber(0).len() <= 1);
        }
    }

    #[test]
    fn generated_families_are_valid() {
        for seed in 0..200 {
            let f = gen_family(4, 3, seed);
            let r = check_family(&f);
            assert!(r.is_ok(), "seed {seed}: {r}");
            let sum = sigma(&f).unwrap();
            assert!(check_injection_property(&f, &sum).is_ok());
        }
    }

    #[test]
    fn oracle_agrees_with_table_equality_on_fam1() {
        let sum = sigma(&fam1()).unwrap();
        let base = sum.setoid().clone();
        let n = base.len();
        let cells: Vec<(usize, usize)> = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).collect();
        let mut rng = rng(3);
        let samples: Vec<Relation> = (0..60)
            .map(|_| {
                let raw: Vec<(usize, usize)> = cells.iter().copied().filter(|_| rng.gen_bool(0.15)).collect();
                saturate(base.clone(), &raw).unwrap()
            })
            .collect();
        for r1 in &samples {
            assert!(oracle_rel_eq(r1, r1));
            for r2 in &samples {
                assert_eq!(oracle_rel_eq(r1, r2), r1 == r2);
            }
        }
    }

    #[test]
    fn oracle_accepts_equal_generators() {
        let sum = sigma(&fam1()).unwrap();
        let base = sum.setoid().clone();
        let c = sum.elem(2, 0);
        let sat = saturate(base.clone(), &[(sum.elem(0, 0), c)]).unwrap();
        // (i1, a') is equal to (i0, a) in the sum.
        let other = saturate(base, &[(sum.elem(1, 0), c)]).unwrap();
        assert!(oracle_rel_eq(&sat, &other));
        assert!(oracle_rel_eq(&sat, &saturate(sat.base().clone(), &sat.pairs()).unwrap()));
    }

    #[test]
    fn small_suite_passes() {
        let cfg = SuiteConfig { seed: 5, samples: 8, max_index: 3, max_fiber: 2, roundtrips: true };
        let r = run_suite(&cfg).unwrap();
        assert!(r.is_ok(), "{}", r.to_json());
    }
}
