//! Restriction, transfer and general biset operations on fixed objects, and
//! Swan K-theory over a group window.

use std::sync::Arc;

use ndarray::Array2;

use crate::bisets::Biset;
use crate::error::{Error, Result};
use crate::globfun::{
    compare_functors, verify_axioms_with, AxiomOptions, AxiomReport, GlobalFunctor,
    GlobalFunctorLike, GroupWindow, PreGlobalFunctor,
};
use crate::groups::GroupHom;
use crate::gsets::GSet;

use super::{embed_kset, EmbedChoice, Injection, Label, Parsummable, Pi0Monoid, UniversalSet};

/// Which orbit representatives and equivariant injections to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Choice {
    Canonical,
    Alternative,
}

impl From<Choice> for EmbedChoice {
    fn from(c: Choice) -> EmbedChoice {
        match c {
            Choice::Canonical => EmbedChoice::Canonical,
            Choice::Alternative => EmbedChoice::Alternative,
        }
    }
}

/// Applies a right-free `K`-`G`-biset `S` to a `G`-fixed object `x`:
/// `Σ_{sG ∈ S/G} ψ^s_* x` for a `K`-equivariant injection
/// `ψ: S ×_G R → U_K`, where `R` is the union of the blocks meeting `supp x`.
pub fn operation<C: Parsummable + ?Sized>(
    cat: &C,
    u_g: &UniversalSet,
    u_k: &UniversalSet,
    s: &Biset,
    x: &C::Obj,
    choice: Choice,
) -> Result<C::Obj> {
    let (k, g) = (u_k.group(), u_g.group());
    if s.left_group() != k || s.right_group() != g {
        return Err(Error::GroupMismatch(format!(
            "{}-{} biset applied over {} -> {}",
            s.left_group(),
            s.right_group(),
            g,
            k
        )));
    }
    if !s.is_right_free() {
        return Err(Error::NotRightFree(format!("{}-{} biset", k, g)));
    }
    // orbit representatives of S/G and, per point, (orbit, g) with p = s_i g
    let mut where_is = vec![(usize::MAX, 0usize); s.size()];
    let mut reps = Vec::new();
    let points: Vec<usize> = match choice {
        Choice::Canonical => (0..s.size()).collect(),
        Choice::Alternative => (0..s.size()).rev().collect(),
    };
    for p in points {
        if where_is[p].0 != usize::MAX {
            continue;
        }
        let i = reps.len();
        reps.push(p);
        for h in 0..g.order() {
            where_is[s.act_right(p, h)] = (i, h);
        }
    }
    let b = u_g.block_size();
    let region: Vec<Label> = u_g
        .blocks_of(&cat.support(x))
        .into_iter()
        .flat_map(|blk| (blk * b) as Label..((blk + 1) * b) as Label)
        .collect();
    let nr = region.len();
    let pos = |l: Label| {
        let blk = u_g.block_of(l);
        let first = region.partition_point(|&r| (r as usize) < blk * b);
        first + (l as usize - blk * b)
    };
    // the K-set S ×_G R with points (i, r)
    let n = reps.len() * nr;
    let mut act = Vec::with_capacity(k.order() * n);
    for kk in 0..k.order() {
        for &si in &reps {
            let (j, h) = where_is[s.act_left(kk, si)];
            for &l in &region {
                act.push(j * nr + pos(u_g.act(h, l)));
            }
        }
    }
    let p = GSet::from_raw(k.clone(), n, act);
    let (labels, _) = embed_kset(u_k, &p, 0, choice.into());
    let mut out = cat.zero();
    for i in 0..reps.len() {
        let pairs: Vec<(Label, Label)> = region
            .iter()
            .enumerate()
            .map(|(r, &l)| (l, labels[i * nr + r]))
            .collect();
        let psi = Injection::from_partial(&pairs)?;
        out = cat.sum(&out, &cat.act_obj(&psi, x))?;
    }
    if !u_k.is_fixed(cat, &out) {
        return Err(Error::Invalid(format!(
            "operation of a {}-{} biset produced a non-fixed object",
            k, g
        )));
    }
    Ok(out)
}

/// The biset operation on classes: `v ∈ π₀(F^G C)` to `π₀(F^K C)`.
pub fn transfer_biset<C: Parsummable>(
    from: &Pi0Monoid<'_, C>,
    to: &Pi0Monoid<'_, C>,
    s: &Biset,
    v: &[usize],
    choice: Choice,
) -> Result<Vec<usize>> {
    let x = from.realize(v)?;
    let y = operation(
        from.category(),
        from.universal(),
        to.universal(),
        s,
        &x,
        choice,
    )?;
    to.classify(&y)
}

/// Restriction along `α: K → G` on classes.
pub fn restriction_pi0<C: Parsummable>(
    from: &Pi0Monoid<'_, C>,
    to: &Pi0Monoid<'_, C>,
    alpha: &GroupHom,
    v: &[usize],
    choice: Choice,
) -> Result<Vec<usize>> {
    transfer_biset(from, to, &Biset::restriction(alpha), v, choice)
}

/// `G ↦ π₀(F^G C)` evaluated directly on objects, for arbitrary right-free
/// bisets between window groups.
pub struct Pi0Functor<'a, C: Parsummable> {
    pub window: Arc<GroupWindow>,
    pub pi0: Vec<Pi0Monoid<'a, C>>,
    pub choice: Choice,
}

impl<'a, C: Parsummable> GlobalFunctorLike for Pi0Functor<'a, C> {
    fn window(&self) -> &Arc<GroupWindow> {
        &self.window
    }

    fn rank(&self, g: usize) -> usize {
        self.pi0[g].rank()
    }

    fn apply_biset(&self, src: usize, tgt: usize, biset: &Biset, x: &[i64]) -> Result<Vec<i64>> {
        let pos: Vec<usize> = x.iter().map(|&v| v.max(0) as usize).collect();
        let neg: Vec<usize> = x.iter().map(|&v| (-v).max(0) as usize).collect();
        let (a, b) = (&self.pi0[src], &self.pi0[tgt]);
        let p = transfer_biset(a, b, biset, &pos, self.choice)?;
        let n = transfer_biset(a, b, biset, &neg, self.choice)?;
        Ok(p.iter()
            .zip(&n)
            .map(|(&p, &n)| p as i64 - n as i64)
            .collect())
    }
}

#[derive(Clone, Debug, Default)]
pub struct SwanOptions {
    /// Size bound for every group; instance default when `None`.
    pub bound: Option<usize>,
    /// Window multiplicity; instance default when `None`.
    pub multiplicity: Option<usize>,
    /// Blocks added on top of the multiplicity.
    pub extra: usize,
    /// Recompute every term with the alternative choices.
    pub check_choices: bool,
    /// Term pairs per composition triple in the axiom check; all when `None`.
    pub composition_limit: Option<usize>,
}

/// Swan K-theory on a window with its certificates.
pub struct SwanK<'a, C: Parsummable> {
    pub functor: GlobalFunctor,
    pub pi0: Vec<Pi0Monoid<'a, C>>,
    pub axioms: AxiomReport,
    pub choices_checked: usize,
    pub choices_agreed: usize,
}

impl<'a, C: Parsummable> SwanK<'a, C> {
    pub fn multiplicities(&self) -> Vec<usize> {
        self.pi0.iter().map(Pi0Monoid::multiplicity).collect()
    }

    /// The uncompleted functor evaluated directly on objects.
    pub fn into_pi0_functor(self, choice: Choice) -> Pi0Functor<'a, C> {
        Pi0Functor {
            window: self.functor.window().clone(),
            pi0: self.pi0,
            choice,
        }
    }
}

/// Computes `π₀(F^G C)` for every window group, tabulates every term
/// operation on atoms, group-completes and verifies the global functor
/// axioms.
pub fn swan_k<'a, C: Parsummable>(
    cat: &'a C,
    window: &Arc<GroupWindow>,
    opts: &SwanOptions,
) -> Result<SwanK<'a, C>> {
    let mut pi0 = Vec::with_capacity(window.len());
    for g in window.groups() {
        let bound = opts.bound.unwrap_or_else(|| cat.default_bound(g));
        let m = opts
            .multiplicity
            .unwrap_or_else(|| cat.default_multiplicity(g, bound))
            + opts.extra;
        pi0.push(Pi0Monoid::compute(cat, g, m, bound)?);
    }
    let atoms: Vec<Vec<String>> = pi0.iter().map(|p| p.atom_labels().to_vec()).collect();
    let (mut checked, mut agreed) = (0, 0);
    let table = GlobalFunctor::tabulate(
        format!("K({})", cat.name()),
        window,
        atoms,
        |src, tgt, term| {
            let (from, to) = (&pi0[src], &pi0[tgt]);
            let s = Biset::from_term(window.group(tgt), window.group(src), term)?;
            let mut m = Array2::zeros((to.rank(), from.rank()));
            for a in 0..from.rank() {
                let x = from.atom_rep(a);
                let y = operation(
                    cat,
                    from.universal(),
                    to.universal(),
                    &s,
                    x,
                    Choice::Canonical,
                )?;
                let v = to.classify(&y)?;
                if opts.check_choices {
                    let y2 = operation(
                        cat,
                        from.universal(),
                        to.universal(),
                        &s,
                        x,
                        Choice::Alternative,
                    )?;
                    checked += 1;
                    agreed += usize::from(to.classify(&y2)? == v);
                }
                for (row, c) in v.into_iter().enumerate() {
                    m[[row, a]] = c as i64;
                }
            }
            Ok(m)
        },
    )?;
    let functor = PreGlobalFunctor {
        table,
        obstruction: None,
    }
    .group_complete()?;
    let axioms = verify_axioms_with(
        &functor,
        &AxiomOptions {
            composition_limit: opts.composition_limit,
        },
    )?;
    Ok(SwanK {
        functor,
        pi0,
        axioms,
        choices_checked: checked,
        choices_agreed: agreed,
    })
}

/// Outcome of comparing a window computation at multiplicity `m` and `m+1`.
#[derive(Clone, Debug)]
pub struct StabilizationReport {
    pub multiplicities: Vec<(usize, usize)>,
    pub atoms_equal: bool,
    pub matrices_equal: bool,
    pub obstruction: Option<String>,
}

impl StabilizationReport {
    pub fn stable(&self) -> bool {
        self.atoms_equal && self.matrices_equal
    }
}

/// Recomputes with one more block per group; atoms are matched by
/// classifying the smaller window's representatives in the larger one.
pub fn stabilization_check<C: Parsummable>(
    cat: &C,
    window: &Arc<GroupWindow>,
    opts: &SwanOptions,
) -> Result<StabilizationReport> {
    let small = swan_k(cat, window, opts)?;
    let bigger = SwanOptions {
        extra: opts.extra + 1,
        check_choices: false,
        ..opts.clone()
    };
    let large = swan_k(cat, window, &bigger)?;
    let multiplicities = small
        .multiplicities()
        .into_iter()
        .zip(large.multiplicities())
        .collect();
    let mut matching = Vec::with_capacity(window.len());
    let mut obstruction = None;
    for (a, b) in small.pi0.iter().zip(&large.pi0) {
        let mut sigma = Vec::with_capacity(a.rank());
        if a.rank() != b.rank() {
            obstruction = Some(format!(
                "{}: {} atoms vs {}",
                a.group().name(),
                a.rank(),
                b.rank()
            ));
            break;
        }
        for i in 0..a.rank() {
            let v = b.classify(a.atom_rep(i))?;
            match v.iter().position(|&c| c == 1) {
                Some(j) if v.iter().sum::<usize>() == 1 => sigma.push(j),
                _ => {
                    obstruction = Some(format!(
                        "{}: atom {} becomes {:?}",
                        a.group().name(),
                        a.atom_labels()[i],
                        v
                    ));
                    break;
                }
            }
        }
        if obstruction.is_some() {
            break;
        }
        matching.push(sigma);
    }
    if obstruction.is_some() {
        return Ok(StabilizationReport {
            multiplicities,
            atoms_equal: false,
            matrices_equal: false,
            obstruction,
        });
    }
    let iso = compare_functors(&small.functor, &large.functor, Some(&matching));
    Ok(StabilizationReport {
        multiplicities,
        atoms_equal: true,
        matrices_equal: iso.isomorphic,
        obstruction: iso.obstruction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Group;
    use crate::instances::FinSets;

    #[test]
    fn finsets_give_the_burnside_functor() {
        let w = GroupWindow::parse("e,C2,C3,S3").unwrap();
        let opts = SwanOptions {
            check_choices: true,
            ..SwanOptions::default()
        };
        let k = swan_k(&FinSets, &w, &opts).unwrap();
        assert_eq!(k.functor.ranks(), vec![1, 2, 2, 4]);
        assert!(k.axioms.all_passed(), "{:?}", k.axioms.failures());
        assert_eq!(k.choices_agreed, k.choices_checked);
        let b = GlobalFunctor::burnside_b(&Group::trivial(), &w).unwrap();
        let iso = compare_functors(&k.functor, &b, None);
        assert!(iso.isomorphic, "{:?}", iso.obstruction);
    }

    #[test]
    fn restriction_of_free_orbit() {
        let c2 = Group::named("C2").unwrap();
        let e = Group::trivial();
        let from = Pi0Monoid::compute(&FinSets, &c2, 2, 2).unwrap();
        let to = Pi0Monoid::compute(&FinSets, &e, 2, 2).unwrap();
        let free = (0..2).find(|&i| from.atom_size(i) == 2).unwrap();
        let mut v = vec![0; 2];
        v[free] = 1;
        let alpha = GroupHom::trivial(&e, &c2);
        for choice in [Choice::Canonical, Choice::Alternative] {
            assert_eq!(
                restriction_pi0(&from, &to, &alpha, &v, choice).unwrap(),
                vec![2]
            );
        }
        let tr = Biset::transfer(&GroupHom::trivial(&e, &c2));
        let back = transfer_biset(&to, &from, &tr, &[1], Choice::Canonical).unwrap();
        assert_eq!(back, v);
    }
}
