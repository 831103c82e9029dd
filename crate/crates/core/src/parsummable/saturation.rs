//! Window probe of saturation: does every G-object of bounded size come
//! from a G-fixed object?

use std::collections::{HashMap, VecDeque};

use crate::error::Result;
use crate::groups::GroupRef;

use super::{Parsummable, Pi0Monoid};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaturationReport {
    pub group: String,
    pub bound: usize,
    /// Isomorphism classes of G-objects of size at most `bound`.
    pub g_object_classes: usize,
    /// Isomorphism classes of fixed objects of size at most `bound`.
    pub fixed_classes: usize,
    /// Whether distinct fixed classes stay distinct as G-objects.
    pub faithful: bool,
    pub saturated: bool,
    /// A G-object class missed by every fixed object.
    pub witness: Option<String>,
}

/// A G-object: an object with a homomorphism `G → Aut(x)`.
struct GObject<O, M> {
    obj: O,
    rho: Vec<M>,
}

/// All homomorphisms `G → Aut(x)`, as the image of each element.
fn actions<C: Parsummable + ?Sized>(cat: &C, group: &GroupRef, x: &C::Obj) -> Vec<Vec<C::Mor>> {
    let autos: Vec<C::Mor> = cat
        .hom_set(x, x)
        .into_iter()
        .filter(|f| cat.inverse(f).is_some())
        .collect();
    let gens = group.generators();
    let mut out = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    if autos.is_empty() {
        return out;
    }
    loop {
        if let Some(rho) = extend(
            cat,
            group,
            x,
            &gens,
            &choice.iter().map(|&i| &autos[i]).collect::<Vec<_>>(),
        ) {
            out.push(rho);
        }
        // odometer over generator images
        let mut i = 0;
        loop {
            if i == choice.len() {
                return out;
            }
            choice[i] += 1;
            if choice[i] < autos.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
        if gens.is_empty() {
            return out;
        }
    }
}

/// Extends generator images to a homomorphism, if consistent.
fn extend<C: Parsummable + ?Sized>(
    cat: &C,
    group: &GroupRef,
    x: &C::Obj,
    gens: &[usize],
    images: &[&C::Mor],
) -> Option<Vec<C::Mor>> {
    let mut rho: Vec<Option<C::Mor>> = vec![None; group.order()];
    rho[0] = Some(cat.identity(x));
    let mut queue = VecDeque::from([0usize]);
    while let Some(g) = queue.pop_front() {
        let rg = rho[g].clone().expect("visited");
        for (&s, &rs) in gens.iter().zip(images) {
            let h = group.mul(g, s);
            let value = cat.compose(&rg, rs);
            match &rho[h] {
                Some(v) if *v != value => return None,
                Some(_) => {}
                None => {
                    rho[h] = Some(value);
                    queue.push_back(h);
                }
            }
        }
    }
    rho.into_iter().collect()
}

/// Whether an isomorphism `f: a → b` intertwines the two actions.
fn equivariantly_isomorphic<C: Parsummable + ?Sized>(
    cat: &C,
    gens: &[usize],
    a: &GObject<C::Obj, C::Mor>,
    b: &GObject<C::Obj, C::Mor>,
) -> bool {
    cat.hom_set(&a.obj, &b.obj).iter().any(|f| {
        cat.inverse(f).is_some()
            && gens
                .iter()
                .all(|&g| cat.compose(f, &a.rho[g]) == cat.compose(&b.rho[g], f))
    })
}

/// Enumerates G-objects over `object_representatives(bound)` up to
/// equivariant isomorphism and checks that each is hit by `λ_♭` of some fixed
/// object in the window of multiplicity `m`.
pub fn saturation_probe<C: Parsummable>(
    cat: &C,
    group: &GroupRef,
    bound: usize,
    multiplicity: usize,
) -> Result<SaturationReport> {
    let gens = group.generators();
    let reps = cat.object_representatives(bound);
    let mut classes: Vec<GObject<C::Obj, C::Mor>> = Vec::new();
    let mut by_obj: HashMap<usize, Vec<usize>> = HashMap::new();
    for (ri, x) in reps.iter().enumerate() {
        for rho in actions(cat, group, x) {
            let cand = GObject {
                obj: x.clone(),
                rho,
            };
            let bucket = by_obj.entry(ri).or_default();
            if !bucket
                .iter()
                .any(|&c| equivariantly_isomorphic(cat, &gens, &classes[c], &cand))
            {
                bucket.push(classes.len());
                classes.push(cand);
            }
        }
    }

    let pi0 = Pi0Monoid::compute(cat, group, multiplicity, bound)?;
    let u = pi0.universal();
    let mut hit = vec![false; classes.len()];
    let mut faithful = true;
    for c in pi0.classes() {
        // λ_♭ c, moved onto its representative object
        let rho: Vec<C::Mor> = (0..group.order())
            .map(|g| u.transport(cat, g, &c.rep))
            .collect();
        let mut image = None;
        for (ri, x) in reps.iter().enumerate() {
            let Some(f) = cat
                .hom_set(&c.rep, x)
                .into_iter()
                .find(|f| cat.inverse(f).is_some())
            else {
                continue;
            };
            let finv = cat.inverse(&f).expect("invertible");
            let moved = GObject {
                obj: x.clone(),
                rho: rho
                    .iter()
                    .map(|r| cat.compose(&f, &cat.compose(r, &finv)))
                    .collect(),
            };
            image = by_obj
                .get(&ri)
                .into_iter()
                .flatten()
                .copied()
                .find(|&k| equivariantly_isomorphic(cat, &gens, &classes[k], &moved));
            break;
        }
        match image {
            Some(k) if hit[k] => faithful = false,
            Some(k) => hit[k] = true,
            None => faithful = false,
        }
    }
    let witness = hit.iter().position(|h| !h).map(|k| {
        let g = &classes[k];
        let trivial = gens.iter().all(|&s| g.rho[s] == cat.identity(&g.obj));
        format!(
            "{} with {} action {:?}",
            cat.describe(&g.obj),
            if trivial { "trivial" } else { "nontrivial" },
            gens.iter().map(|&s| &g.rho[s]).collect::<Vec<_>>()
        )
    });
    Ok(SaturationReport {
        group: group.name().to_string(),
        bound,
        g_object_classes: classes.len(),
        fixed_classes: pi0.classes().len(),
        faithful,
        saturated: witness.is_none(),
        witness,
    })
}
