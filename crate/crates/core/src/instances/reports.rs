//! Composite checks comparing instances with each other and with the
//! algebraic global functors.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::globfun::{compare_functors, GlobalFunctor, GroupWindow};
use crate::groups::{Group, GroupRef};
use crate::parsummable::{
    swan_k, Injection, Label, MCategory, Parsummable, Pi0Monoid, SwanOptions,
};

use super::finsets::{Bijection, FinSets};
use super::free::FreeParsummable;
use super::gfinsets::{GFinSets, GObj, GSetFilter};
use super::phi::{PermutativePhi, SymmetricGroups};
use super::position;

#[derive(Clone, Debug, Serialize)]
pub struct PhiSigmaReport {
    pub labels: usize,
    pub objects: usize,
    pub hom_pairs: usize,
    pub fully_faithful: bool,
    pub essentially_surjective: bool,
    pub equivariant: bool,
    pub additive: bool,
    /// Atoms of `π₀(F^{C2} F)` and the atom of `π₀(F^{C2} Φ(Σ))` each maps to.
    pub atoms: Vec<(String, String)>,
    pub pi0_agree: bool,
}

impl PhiSigmaReport {
    pub fn passed(&self) -> bool {
        self.fully_faithful
            && self.essentially_surjective
            && self.equivariant
            && self.additive
            && self.pi0_agree
    }
}

/// Random injections defined on `0..n`, landing in `0..2n`.
fn sample_injections(n: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<Injection> {
    let pool: Vec<Label> = (0..2 * n as Label).collect();
    (0..count)
        .map(|_| {
            let image: Vec<Label> = pool.choose_multiple(rng, n).copied().collect();
            Injection::from_vec(image).expect("distinct images")
        })
        .collect()
}

/// Checks that `ε : F → Φ(Σ)` is an equivalence of parsummable categories on
/// the labels `0..n`, and that both sides have the same `π₀` at `C2`.
pub fn phi_of_sigma_equivalence(n: usize, seed: u64) -> Result<PhiSigmaReport> {
    if n > 6 {
        return Err(Error::Invalid("at most 6 labels".into()));
    }
    let phi = PermutativePhi::new(SymmetricGroups);
    let labels: Vec<Label> = (0..n as Label).collect();
    let sets = FinSets.objects_on(&labels, n);
    let eps = |x: &[Label]| phi.indicator(x, &1);

    let mut fully_faithful = true;
    let mut hom_pairs = 0;
    for x in &sets {
        for y in &sets {
            let homs = FinSets.hom_set(x, y);
            let images: BTreeSet<Vec<usize>> =
                homs.iter().map(|f| phi.epsilon_mor(f).mor.0).collect();
            let target = phi.hom_set(&eps(x), &eps(y));
            fully_faithful &= images.len() == homs.len() && target.len() == homs.len();
            fully_faithful &= homs.iter().all(|f| {
                phi.source(&phi.epsilon_mor(f)) == eps(x)
                    && phi.target(&phi.epsilon_mor(f)) == eps(y)
            });
            hom_pairs += 1;
        }
    }
    // composition is preserved
    for x in sets.iter().filter(|x| x.len() <= 3) {
        let homs = FinSets.hom_set(x, x);
        for f in &homs {
            for g in &homs {
                fully_faithful &= phi.epsilon_mor(&g.compose(f))
                    == phi.compose(&phi.epsilon_mor(g), &phi.epsilon_mor(f));
            }
        }
    }

    let essentially_surjective = phi.objects_on(&labels, n).iter().all(|a| {
        let x: Vec<Label> = (0..phi.size(a) as Label).collect();
        phi.hom_set(a, &eps(&x))
            .iter()
            .any(|f| phi.inverse(f).is_some())
    });

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut equivariant = true;
    for u in sample_injections(n, 20, &mut rng) {
        for x in &sets {
            equivariant &= eps(&u.apply_set(x)) == phi.act_obj(&u, &eps(x));
            equivariant &=
                phi.epsilon_mor(&Bijection::transport(&u, x)) == phi.transport(&u, &eps(x));
        }
    }

    let mut additive = eps(&[]) == phi.zero();
    for x in &sets {
        for y in &sets {
            let Ok(xy) = FinSets.sum(x, y) else {
                continue;
            };
            additive &= phi.sum(&eps(x), &eps(y))? == eps(&xy);
            if x.len() <= 3 && y.len() <= 3 {
                let fs = FinSets.hom_set(x, x);
                let gs = FinSets.hom_set(y, y);
                for f in fs.iter().take(6) {
                    for g in gs.iter().take(6) {
                        let lhs = phi.epsilon_mor(&f.sum(g)?);
                        let rhs = phi.sum_mor(&phi.epsilon_mor(f), &phi.epsilon_mor(g))?;
                        additive &= lhs == rhs;
                    }
                }
            }
        }
    }

    let c2 = Group::named("C2")?;
    let left = Pi0Monoid::compute(&FinSets, &c2, 2, 2)?;
    let right = Pi0Monoid::compute(&phi, &c2, 2, 2)?;
    let mut atoms = Vec::new();
    let mut hit = BTreeSet::new();
    let mut pi0_agree =
        left.rank() == right.rank() && left.classes().len() == right.classes().len();
    for a in 0..left.rank() {
        let v = right.classify(&eps(left.atom_rep(a)))?;
        match unit_index(&v) {
            Some(b) => {
                pi0_agree &= hit.insert(b);
                atoms.push((
                    left.atom_labels()[a].clone(),
                    right.atom_labels()[b].clone(),
                ));
            }
            None => pi0_agree = false,
        }
    }

    Ok(PhiSigmaReport {
        labels: n,
        objects: sets.len(),
        hom_pairs,
        fully_faithful,
        essentially_surjective,
        equivariant,
        additive,
        atoms,
        pi0_agree,
    })
}

fn unit_index(v: &[usize]) -> Option<usize> {
    (v.iter().sum::<usize>() == 1).then(|| v.iter().position(|&c| c == 1).expect("one entry"))
}

#[derive(Clone, Debug, Serialize)]
pub struct FreeGenReport {
    pub gamma: String,
    pub labels: usize,
    pub objects: usize,
    pub objects_bijective: bool,
    pub hom_pairs: usize,
    pub homs_bijective: bool,
    /// `(n, |Aut| in (ΓF)_free, |Aut| in P(B_gl Γ), n!·|Γ|^n)` for the free
    /// object with `n` orbits.
    pub automorphisms: Vec<(usize, usize, usize, usize)>,
    pub swan_ranks: Vec<usize>,
    pub free_ranks: Vec<usize>,
    pub isomorphic: bool,
    /// Atom of `K((ΓF)_free)` and the matched basis element of `A_Γ`, per
    /// window group.
    pub witness: Vec<Vec<(String, String)>>,
    pub obstruction: Option<String>,
}

impl FreeGenReport {
    pub fn passed(&self) -> bool {
        self.objects_bijective
            && self.homs_bijective
            && self
                .automorphisms
                .iter()
                .all(|&(_, a, b, c)| a == c && b == c)
            && self.isomorphic
    }
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Checks that `ι♯ : P(B_gl Γ) → (ΓF)_free` is bijective on objects and hom
/// sets over the labels `0..n`, and that `K((ΓF)_free) ≅ A_Γ` on the window.
pub fn free_generator_iso(
    gamma: &GroupRef,
    window: &Arc<GroupWindow>,
    n: usize,
) -> Result<FreeGenReport> {
    let p = FreeParsummable::transitive(gamma)?;
    let target = GFinSets::new(gamma, GSetFilter::Free)?;
    let labels: Vec<Label> = (0..n as Label).collect();

    let sources = p.objects_on(&labels, n);
    let mut images = Vec::with_capacity(sources.len());
    let mut objects_bijective = true;
    for x in &sources {
        let y = p.iota_obj(x)?;
        objects_bijective &= p.orbits_of(&y)? == *x;
        images.push(y);
    }
    let distinct: BTreeSet<&GObj> = images.iter().collect();
    let all: BTreeSet<GObj> = target.objects_on(&labels, n).into_iter().collect();
    objects_bijective &= distinct.len() == images.len()
        && distinct.len() == all.len()
        && distinct.iter().all(|y| all.contains(*y));

    let mut homs_bijective = true;
    let mut hom_pairs = 0;
    for (i, x) in sources.iter().enumerate() {
        for (j, y) in sources.iter().enumerate() {
            if p.size(x) != p.size(y) || x.len() != y.len() {
                continue;
            }
            let homs = p.hom_set(x, y);
            let mapped = homs
                .iter()
                .map(|f| p.iota_mor(f).map(|g| g.map))
                .collect::<Result<BTreeSet<_>>>()?;
            let direct = target.hom_set(&images[i], &images[j]);
            homs_bijective &= mapped.len() == homs.len() && direct.len() == homs.len();
            homs_bijective &= direct.iter().all(|g| mapped.contains(&g.map));
            hom_pairs += 1;
        }
    }

    let k = gamma.order();
    let mut automorphisms = Vec::new();
    for orbits in 1..=n / k.max(1) {
        let Some(x) = target
            .object_representatives(orbits * k)
            .into_iter()
            .find(|x| x.len() == orbits * k)
        else {
            continue;
        };
        let count = target.hom_set(&x, &x).len();
        let from_p = p.hom_set(&p.orbits_of(&x)?, &p.orbits_of(&x)?).len();
        let expected = factorial(orbits) * k.pow(orbits as u32);
        automorphisms.push((orbits, count, from_p, expected));
    }

    let swan = swan_k(&target, window, &SwanOptions::default())?;
    let free = GlobalFunctor::free(gamma, window)?;
    let iso = compare_functors(&swan.functor, &free, None);
    let witness = match &iso.matching {
        Some(m) => m
            .iter()
            .enumerate()
            .map(|(g, row)| {
                row.iter()
                    .enumerate()
                    .map(|(i, &j)| (swan.functor.atoms(g)[i].clone(), free.atoms(g)[j].clone()))
                    .collect()
            })
            .collect(),
        None => Vec::new(),
    };
    Ok(FreeGenReport {
        gamma: gamma.name().to_string(),
        labels: n,
        objects: sources.len(),
        objects_bijective,
        hom_pairs,
        homs_bijective,
        automorphisms,
        swan_ranks: swan.functor.ranks(),
        free_ranks: free.ranks(),
        isomorphic: iso.isomorphic && swan.axioms.all_passed(),
        witness,
        obstruction: iso.obstruction,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SplittingReport {
    pub gamma: String,
    pub ranks: Vec<usize>,
    /// Per subgroup class `(H)` of Γ: the Weyl group and the ranks of
    /// `A_{W_Γ H}` on the window.
    pub summands: Vec<(String, String, Vec<usize>)>,
    /// Subgroup classes of `K × Γ` versus the summed free ranks.
    pub rank_identity: bool,
    pub isomorphic: bool,
    pub obstruction: Option<String>,
}

impl SplittingReport {
    pub fn passed(&self) -> bool {
        self.rank_identity && self.isomorphic
    }
}

/// `X^H` for a fixed `Γ`-set `x` whose points all have Γ-isotropy conjugate
/// to `H`, as a free `W_Γ H`-set.
fn fixed_points(
    gamma: &GroupRef,
    h: &crate::groups::Subgroup,
    x: &GObj,
) -> Result<(GroupRef, GObj)> {
    let (w, quotient) = gamma.weyl_group(h);
    let normalizer = gamma.normalizer(h);
    let keep: Vec<usize> = (0..x.len())
        .filter(|&i| h.elements().iter().all(|&e| x.act(e, i) == i))
        .collect();
    let labels: Vec<Label> = keep.iter().map(|&i| x.labels[i]).collect();
    let m = labels.len();
    let mut act = vec![0; w.order() * m];
    for cls in 0..w.order() {
        let lift = normalizer.elements()[quotient
            .image
            .iter()
            .position(|&c| c == cls)
            .expect("surjective")];
        for (pos, &i) in keep.iter().enumerate() {
            let l = x.labels[x.act(lift, i)];
            act[cls * m + pos] = position(&labels, l)
                .ok_or_else(|| Error::Invalid("normalizer moves fixed points".into()))?;
        }
    }
    Ok((w, GObj { labels, act }))
}

/// Checks `K(ΓF) ≅ ⊕_{(H)} A_{W_Γ H}` on the window, with the atom matching
/// induced by `X ↦ X^H` followed by the free generator isomorphism for each
/// Weyl group.
pub fn splitting_check(gamma: &GroupRef, window: &Arc<GroupWindow>) -> Result<SplittingReport> {
    let all = GFinSets::new(gamma, GSetFilter::All)?;
    let swan = swan_k(&all, window, &SwanOptions::default())?;
    let classes = gamma.subgroup_classes();

    let mut cats = Vec::new();
    let mut parts = Vec::new();
    let mut report_parts = Vec::new();
    for h in classes.reps() {
        let (w, _) = gamma.weyl_group(h);
        cats.push(GFinSets::new(&w, GSetFilter::Free)?);
        let free = GlobalFunctor::free(&w, window)?;
        report_parts.push((gamma.subgroup_label(h), w.name().to_string(), free.ranks()));
        parts.push(free);
    }
    // free generator isomorphism per Weyl group
    let mut obstruction = None;
    let mut weyl_swans = Vec::new();
    let mut to_free = Vec::new();
    for (cat, free) in cats.iter().zip(&parts) {
        let k = swan_k(cat, window, &SwanOptions::default())?;
        let iso = compare_functors(&k.functor, free, None);
        if iso.matching.is_none() {
            obstruction = obstruction.or(iso.obstruction);
        }
        to_free.push(iso.matching.unwrap_or_default());
        weyl_swans.push(k);
    }
    let target = GlobalFunctor::direct_sum_all(window, &parts)?;

    let mut matching = Vec::with_capacity(window.len());
    for (g, pi0) in swan.pi0.iter().enumerate() {
        let mut row = Vec::with_capacity(pi0.rank());
        for a in 0..pi0.rank() {
            let x = pi0.atom_rep(a);
            // Γ-isotropy of the first point, moved onto its class representative
            let stab = gamma.subgroup(
                &(0..gamma.order())
                    .filter(|&e| x.act(e, 0) == 0)
                    .collect::<Vec<_>>(),
            )?;
            let c = classes.class_of_subgroup(&stab);
            let h = classes.rep(c);
            let (_, fixed) = fixed_points(gamma, h, x)?;
            let weyl = &weyl_swans[c].pi0[g];
            let v = weyl.classify(&fixed)?;
            let Some(j) = unit_index(&v) else {
                obstruction = obstruction.or(Some(format!("X^H of atom {a} is not an atom")));
                row.push(usize::MAX);
                continue;
            };
            let offset: usize = parts[..c].iter().map(|p| p.ranks()[g]).sum();
            match to_free[c].get(g) {
                Some(m) => row.push(offset + m[j]),
                None => row.push(usize::MAX),
            }
        }
        matching.push(row);
    }

    let mut rank_identity = true;
    for (g, k) in window.groups().iter().enumerate() {
        let product = Group::direct_product(k, gamma)?;
        let summed: usize = parts.iter().map(|p| p.ranks()[g]).sum();
        rank_identity &=
            product.subgroup_classes().len() == summed && summed == swan.functor.ranks()[g];
    }

    let valid = matching.iter().flatten().all(|&j| j != usize::MAX);
    let iso = if valid {
        compare_functors(&swan.functor, &target, Some(&matching))
    } else {
        compare_functors(&swan.functor, &target, None)
    };
    Ok(SplittingReport {
        gamma: gamma.name().to_string(),
        ranks: swan.functor.ranks(),
        summands: report_parts,
        rank_identity,
        isomorphic: valid && iso.isomorphic && swan.axioms.all_passed(),
        obstruction: obstruction.or(iso.obstruction),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_sigma_on_four_labels() {
        let r = phi_of_sigma_equivalence(4, 1).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.atoms.len(), 2);
    }

    #[test]
    fn free_generator_c2() {
        let w = GroupWindow::parse("e,C2").unwrap();
        let r = free_generator_iso(&Group::named("C2").unwrap(), &w, 4).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.swan_ranks, vec![1, 3]);
    }

    #[test]
    fn splitting_c2_trivial_window() {
        let w = GroupWindow::parse("e").unwrap();
        let r = splitting_check(&Group::named("C2").unwrap(), &w).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.ranks, vec![2]);
    }
}
