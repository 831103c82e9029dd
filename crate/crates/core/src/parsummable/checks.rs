//! Sampled verification of the M-category and parsummable axioms, and the
//! γ-construction on a label window.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::globfun::AxiomReport;

use super::{Injection, Label, MCategory, Parsummable};

pub type CheckReport = AxiomReport;

fn random_injection(rng: &mut ChaCha8Rng, len: usize, range: Label) -> Injection {
    let mut pool: Vec<Label> = (0..range).collect();
    pool.shuffle(rng);
    pool.truncate(len);
    Injection::from_vec(pool).expect("distinct labels")
}

/// Another injection agreeing with `u` on `keep` and random elsewhere.
fn agreeing(
    rng: &mut ChaCha8Rng,
    u: &Injection,
    keep: &[Label],
    len: usize,
    range: Label,
) -> Injection {
    let fixed: BTreeSet<Label> = keep.iter().map(|&l| u.apply(l)).collect();
    let mut pool: Vec<Label> = (0..range).filter(|l| !fixed.contains(l)).collect();
    pool.shuffle(rng);
    let mut pool = pool.into_iter();
    let map = (0..len as Label)
        .map(|l| {
            if keep.contains(&l) {
                u.apply(l)
            } else {
                pool.next().expect("enough labels")
            }
        })
        .collect();
    Injection::from_vec(map).expect("distinct labels")
}

fn sample<T: Clone>(rng: &mut ChaCha8Rng, items: &[T], n: usize) -> Vec<T> {
    if items.len() <= n {
        return items.to_vec();
    }
    items.choose_multiple(rng, n).cloned().collect()
}

fn is_subset(a: &[Label], b: &[Label]) -> bool {
    let b: BTreeSet<&Label> = b.iter().collect();
    a.iter().all(|l| b.contains(l))
}

/// Checks the finite-support properties (S1–S3), the sum axioms (S4–S6),
/// functoriality of the action and equivariance of the sum on `samples`
/// random objects of the window `labels` (objects of size at most `bound`).
pub fn verify_mcat_axioms<C: Parsummable + ?Sized>(
    cat: &C,
    labels: &[Label],
    bound: usize,
    samples: usize,
    seed: u64,
) -> CheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CheckReport::default();
    let objects = cat.objects_on(labels, bound);
    let top = labels.iter().map(|&l| l + 1).max().unwrap_or(0);
    let len = top as usize + 2;
    let range = 3 * top + 6;
    let name = cat.name();
    let zero = cat.zero();
    report.push(
        "S6",
        format!("{name}: support of zero"),
        cat.support(&zero).is_empty(),
    );
    report.push(
        "identity",
        format!("{name}: zero is fixed"),
        cat.act_obj(&Injection::identity(), &zero) == zero,
    );

    for x in sample(&mut rng, &objects, samples) {
        let ctx = format!("{name}: {}", cat.describe(&x));
        let supp = cat.support(&x);
        let u = random_injection(&mut rng, len, range);
        let v = agreeing(&mut rng, &u, &supp, len, range);
        let ux = cat.act_obj(&u, &x);
        report.push("S1", ctx.clone(), ux == cat.act_obj(&v, &x));
        report.push("S2", ctx.clone(), cat.support(&ux) == u.apply_set(&supp));
        report.push(
            "S3",
            ctx.clone(),
            cat.comparison(&v, &u, &x) == cat.identity(&ux),
        );
        let id = Injection::identity();
        report.push(
            "identity",
            ctx.clone(),
            cat.act_obj(&id, &x) == x && cat.transport(&id, &x) == cat.identity(&x),
        );
        let w = random_injection(&mut rng, 3 * top as usize + 6, 9 * top + 20);
        let wu = w.after(&u);
        let composite = cat.compose(&cat.transport(&w, &ux), &cat.transport(&u, &x));
        report.push(
            "action",
            ctx.clone(),
            cat.act_obj(&wu, &x) == cat.act_obj(&w, &ux) && composite == cat.transport(&wu, &x),
        );

        // morphisms out of x
        let targets = sample(&mut rng, &objects, 3);
        for y in targets {
            let mut both = supp.clone();
            both.extend(cat.support(&y));
            for f in sample(&mut rng, &cat.hom_set(&x, &y), 2) {
                let v2 = agreeing(&mut rng, &u, &both, len, range);
                report.push(
                    "S3",
                    format!("{ctx} -> {}", cat.describe(&y)),
                    cat.act_mor(&u, &f) == cat.act_mor(&v2, &f),
                );
            }
        }

        // sums with disjoint translates
        let shift = Injection::shift(top);
        let shift2 = Injection::shift(2 * top);
        let y = sample(&mut rng, &objects, 1)
            .pop()
            .unwrap_or_else(|| zero.clone());
        let z = sample(&mut rng, &objects, 1)
            .pop()
            .unwrap_or_else(|| zero.clone());
        let (y, z) = (cat.act_obj(&shift, &y), cat.act_obj(&shift2, &z));
        let sums = (|| -> Result<bool> {
            let xy = cat.sum(&x, &y)?;
            let yx = cat.sum(&y, &x)?;
            let left = cat.sum(&xy, &z)?;
            let right = cat.sum(&x, &cat.sum(&y, &z)?)?;
            let unit = cat.sum(&x, &zero)? == x && cat.sum(&zero, &x)? == x;
            let ids = cat.sum_mor(&cat.identity(&x), &cat.identity(&y))? == cat.identity(&xy);
            Ok(xy == yx && left == right && unit && ids)
        })();
        report.push("S4", ctx.clone(), sums.unwrap_or(false));
        let overlap = supp.is_empty() || matches!(cat.sum(&x, &x), Err(Error::NotDisjoint));
        report.push("S4", format!("{ctx}: overlapping sum refused"), overlap);
        match cat.sum(&x, &y) {
            Ok(xy) => {
                let mut union = supp.clone();
                union.extend(cat.support(&y));
                report.push("S5", ctx.clone(), is_subset(&cat.support(&xy), &union));
                let u_len = 3 * top as usize + 2;
                let big = random_injection(&mut rng, u_len, 3 * top + 8);
                let equivariant = cat
                    .sum(&cat.act_obj(&big, &x), &cat.act_obj(&big, &y))
                    .map(|s| s == cat.act_obj(&big, &xy))
                    .unwrap_or(false);
                report.push("sum-equivariance", ctx, equivariant);
            }
            Err(_) => report.push("S5", ctx, false),
        }
    }
    report
}

/// A based map `m₊ → n₊`: `map[i]` is the image of `i`, `None` for the base
/// point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasedMap {
    pub m: usize,
    pub n: usize,
    pub map: Vec<Option<usize>>,
}

impl BasedMap {
    pub fn new(n: usize, map: Vec<Option<usize>>) -> Result<BasedMap> {
        if map.iter().flatten().any(|&j| j >= n) {
            return Err(Error::Invalid("based map leaves its target".into()));
        }
        Ok(BasedMap {
            m: map.len(),
            n,
            map,
        })
    }

    /// The fold map `m₊ → 1₊`.
    pub fn fold(m: usize) -> BasedMap {
        BasedMap {
            m,
            n: 1,
            map: vec![Some(0); m],
        }
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &BasedMap) -> BasedMap {
        BasedMap {
            m: first.m,
            n: self.n,
            map: first
                .map
                .iter()
                .map(|i| i.and_then(|i| self.map[i]))
                .collect(),
        }
    }

    /// Every based map `m₊ → n₊`.
    pub fn all(m: usize, n: usize) -> Vec<BasedMap> {
        let mut out = vec![Vec::new()];
        for _ in 0..m {
            out = out
                .into_iter()
                .flat_map(|v: Vec<Option<usize>>| {
                    std::iter::once(None).chain((0..n).map(Some)).map(move |j| {
                        let mut w = v.clone();
                        w.push(j);
                        w
                    })
                })
                .collect();
        }
        out.into_iter().map(|map| BasedMap { m, n, map }).collect()
    }
}

/// Objects of `γ(C)(n₊)` on the window: `n`-tuples of pairwise disjointly
/// supported objects.
pub fn gamma_value<C: MCategory + ?Sized>(
    cat: &C,
    n: usize,
    labels: &[Label],
    bound: usize,
) -> Vec<Vec<C::Obj>> {
    let objects: Vec<(C::Obj, BTreeSet<Label>)> = cat
        .objects_on(labels, bound)
        .into_iter()
        .map(|x| {
            let s = cat.support(&x).into_iter().collect();
            (x, s)
        })
        .collect();
    let mut out: Vec<(Vec<C::Obj>, BTreeSet<Label>)> = vec![(Vec::new(), BTreeSet::new())];
    for _ in 0..n {
        let mut next = Vec::new();
        for (tuple, used) in &out {
            for (x, s) in &objects {
                if used.is_disjoint(s) {
                    let mut t = tuple.clone();
                    t.push(x.clone());
                    next.push((t, used.union(s).copied().collect()));
                }
            }
        }
        out = next;
    }
    out.into_iter().map(|(t, _)| t).collect()
}

/// `γ(C)(λ)` on objects: the `j`-th entry is the sum of the `x_i` with
/// `λ(i) = j`.
pub fn gamma_map<C: Parsummable + ?Sized>(
    cat: &C,
    lambda: &BasedMap,
    xs: &[C::Obj],
) -> Result<Vec<C::Obj>> {
    if xs.len() != lambda.m {
        return Err(Error::Invalid(format!(
            "γ(λ) for λ: {}₊ → {}₊ applied to a {}-tuple",
            lambda.m,
            lambda.n,
            xs.len()
        )));
    }
    let mut out = vec![cat.zero(); lambda.n];
    for (x, j) in xs.iter().zip(&lambda.map) {
        if let Some(j) = *j {
            out[j] = cat.sum(&out[j], x)?;
        }
    }
    Ok(out)
}

/// `γ(C)(λ)` on morphism tuples.
pub fn gamma_map_mor<C: Parsummable + ?Sized>(
    cat: &C,
    lambda: &BasedMap,
    fs: &[C::Mor],
) -> Result<Vec<C::Mor>> {
    let mut out: Vec<C::Mor> = vec![cat.identity(&cat.zero()); lambda.n];
    for (f, j) in fs.iter().zip(&lambda.map) {
        if let Some(j) = *j {
            out[j] = cat.sum_mor(&out[j], f)?;
        }
    }
    Ok(out)
}

/// Checks `γ(κ) ∘ γ(λ) = γ(κ ∘ λ)` on every tuple of the window for all
/// based maps `m₊ → n₊ → p₊`.
pub fn gamma_functoriality<C: Parsummable + ?Sized>(
    cat: &C,
    labels: &[Label],
    bound: usize,
    (m, n, p): (usize, usize, usize),
) -> Result<CheckReport> {
    let mut report = CheckReport::default();
    let tuples = gamma_value(cat, m, labels, bound);
    for lambda in BasedMap::all(m, n) {
        for kappa in BasedMap::all(n, p) {
            let both = kappa.after(&lambda);
            let mut ok = true;
            for t in &tuples {
                let two = gamma_map(cat, &kappa, &gamma_map(cat, &lambda, t)?)?;
                ok &= two == gamma_map(cat, &both, t)?;
            }
            report.push(
                "gamma",
                format!("{:?} after {:?}", kappa.map, lambda.map),
                ok,
            );
        }
    }
    Ok(report)
}

/// Random `(u, v, x)` checks of `v_∘^{u_* x} ∘ u_∘^x = (vu)_∘^x`.
pub fn composition_law<C: MCategory + ?Sized>(
    cat: &C,
    labels: &[Label],
    bound: usize,
    trials: usize,
    seed: u64,
) -> CheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CheckReport::default();
    let objects = cat.objects_on(labels, bound);
    if objects.is_empty() {
        return report;
    }
    let top = labels.iter().map(|&l| l + 1).max().unwrap_or(0);
    for t in 0..trials {
        let x = &objects[rng.gen_range(0..objects.len())];
        let u = random_injection(&mut rng, top as usize + 1, 2 * top + 4);
        let v = random_injection(&mut rng, 2 * top as usize + 4, 4 * top + 8);
        let lhs = cat.compose(
            &cat.transport(&v, &cat.act_obj(&u, x)),
            &cat.transport(&u, x),
        );
        report.push(
            "composition-law",
            format!("trial {t}: {}", cat.describe(x)),
            lhs == cat.transport(&v.after(&u), x),
        );
    }
    report
}
