//! Finite label sets carrying an action of a structure group Γ, with
//! Γ-equivariant bijections. Injections relabel and ignore Γ.

use std::collections::VecDeque;
use std::sync::{Arc, Mutex};

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::groups::{Group, GroupHom, GroupRef, Subgroup};
use crate::gsets::GSet;
use crate::parsummable::{
    embed_kset, marks_signature, EmbedChoice, Injection, Label, MCategory, Parsummable,
    UniversalSet,
};

use super::finsets::{multiplicity_vectors, permutations};
use super::{all_subsets, describe_labels, merge_disjoint, position};

/// A label set with a Γ-action on its positions: `act[γ * n + i]` is the
/// position of `γ` applied to the `i`-th label.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GObj {
    pub labels: Vec<Label>,
    pub act: Vec<usize>,
}

impl GObj {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    #[inline]
    pub fn act(&self, gamma: usize, i: usize) -> usize {
        self.act[gamma * self.labels.len() + i]
    }

    /// Relabels along `perm` (position `i` goes to `perm[i]`).
    fn permuted(&self, labels: Vec<Label>, perm: &[usize], order: usize) -> GObj {
        let n = labels.len();
        let mut act = vec![0; order * n];
        for g in 0..order {
            for i in 0..n {
                act[g * n + perm[i]] = perm[self.act(g, i)];
            }
        }
        GObj { labels, act }
    }

    /// The Γ-set on positions.
    pub fn gset(&self, gamma: &GroupRef) -> GSet {
        GSet::from_raw(gamma.clone(), self.len(), self.act.clone())
    }
}

/// A Γ-equivariant bijection; `map[i]` is the target position of source
/// position `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GMor {
    pub src: GObj,
    pub tgt: GObj,
    pub map: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GSetFilter {
    All,
    /// Only free Γ-actions.
    Free,
}

/// The parsummable category `ΓF` of finite Γ-sets, or its free part.
#[derive(Debug)]
pub struct GFinSets {
    gamma: GroupRef,
    filter: GSetFilter,
    products: Mutex<Vec<(GroupRef, GroupRef)>>,
}

impl GFinSets {
    pub fn new(gamma: &GroupRef, filter: GSetFilter) -> Result<GFinSets> {
        let cap = Caps::global().gamma;
        if gamma.order() > cap {
            return Err(Error::OrderCapExceeded {
                order: gamma.order(),
                cap,
            });
        }
        Ok(GFinSets {
            gamma: gamma.clone(),
            filter,
            products: Mutex::new(Vec::new()),
        })
    }

    pub fn gamma(&self) -> &GroupRef {
        &self.gamma
    }

    pub fn filter(&self) -> GSetFilter {
        self.filter
    }

    /// `G × Γ`, cached so that its subgroup data is computed once.
    pub fn product_with(&self, g: &GroupRef) -> Result<GroupRef> {
        let mut cache = self.products.lock().expect("cache lock");
        if let Some((_, p)) = cache.iter().find(|(h, _)| Arc::ptr_eq(h, g) || **h == **g) {
            return Ok(p.clone());
        }
        let p = Group::direct_product(g, &self.gamma)?;
        cache.push((g.clone(), p.clone()));
        Ok(p)
    }

    fn admits(&self, x: &GObj) -> bool {
        match self.filter {
            GSetFilter::All => true,
            GSetFilter::Free => {
                (0..x.len()).all(|i| (1..self.gamma.order()).all(|g| x.act(g, i) != i))
            }
        }
    }

    /// Every Γ-action on `n` points.
    pub fn actions(&self, n: usize) -> Vec<Vec<usize>> {
        let gens = self.gamma.generators();
        let perms = permutations(n);
        let mut out = Vec::new();
        let mut choice = vec![0usize; gens.len()];
        loop {
            if let Some(act) = extend_action(
                &self.gamma,
                n,
                &gens,
                &choice.iter().map(|&c| &perms[c]).collect::<Vec<_>>(),
            ) {
                out.push(act);
            }
            let mut i = 0;
            loop {
                if i == choice.len() {
                    return out;
                }
                choice[i] += 1;
                if choice[i] < perms.len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }

    /// The `(G × Γ)`-set on the positions of a fixed object.
    pub fn product_gset(&self, u: &UniversalSet, x: &GObj) -> Result<GSet> {
        let g = u.group();
        let p = self.product_with(g)?;
        let ng = self.gamma.order();
        let n = x.len();
        let mut act = Vec::with_capacity(p.order() * n);
        for e in 0..p.order() {
            let (a, b) = (e / ng, e % ng);
            for i in 0..n {
                let j = x.act(b, i);
                let l = u.act(a, x.labels[j]);
                act.push(
                    position(&x.labels, l)
                        .ok_or_else(|| Error::Invalid("object is not fixed".into()))?,
                );
            }
        }
        Ok(GSet::from_raw(p, n, act))
    }

    fn relabel(&self, u: &Injection, x: &GObj) -> (GObj, Vec<usize>) {
        let labels = u.apply_set(&x.labels);
        let perm: Vec<usize> = x
            .labels
            .iter()
            .map(|&l| position(&labels, u.apply(l)).expect("image label"))
            .collect();
        (x.permuted(labels, &perm, self.gamma.order()), perm)
    }

    /// Equivariant bijections `x → y` by orbit-wise backtracking.
    pub fn equivariant_bijections(&self, x: &GObj, y: &GObj) -> Vec<GMor> {
        let n = x.len();
        if n != y.len() {
            return Vec::new();
        }
        let order = self.gamma.order();
        let mut out = Vec::new();
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn go(
            x: &GObj,
            y: &GObj,
            order: usize,
            map: &mut Vec<usize>,
            used: &mut Vec<bool>,
            out: &mut Vec<Vec<usize>>,
        ) {
            let Some(i) = map.iter().position(|&m| m == usize::MAX) else {
                out.push(map.clone());
                return;
            };
            for j in 0..y.len() {
                if used[j] {
                    continue;
                }
                let mut assigned = Vec::new();
                let mut ok = true;
                for g in 0..order {
                    let (a, b) = (x.act(g, i), y.act(g, j));
                    if map[a] == usize::MAX {
                        if used[b] {
                            ok = false;
                            break;
                        }
                        map[a] = b;
                        used[b] = true;
                        assigned.push(a);
                    } else if map[a] != b {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    go(x, y, order, map, used, out);
                }
                for a in assigned {
                    used[map[a]] = false;
                    map[a] = usize::MAX;
                }
            }
        }
        let mut maps = Vec::new();
        go(x, y, order, &mut map, &mut used, &mut maps);
        for m in maps {
            out.push(GMor {
                src: x.clone(),
                tgt: y.clone(),
                map: m,
            });
        }
        out
    }

    /// A fixed object realizing a `(G × Γ)`-set, embedded orbit by orbit into
    /// fresh blocks, or `None` if it needs more than `m` copies of some orbit.
    pub fn embed(&self, u: &UniversalSet, x: &GSet, m: usize) -> Result<Option<GObj>> {
        let g = u.group();
        let p = x.group();
        let ng = self.gamma.order();
        let incl = GroupHom::new(
            g.clone(),
            p.clone(),
            (0..g.order()).map(|a| a * ng).collect(),
        )?;
        let under = x.restrict_along(&incl)?;
        let (labels, used) = embed_kset(u, &under, 0, EmbedChoice::Canonical);
        if used.iter().any(|&k| k > m) {
            return Ok(None);
        }
        let mut sorted = labels.clone();
        sorted.sort_unstable();
        let perm: Vec<usize> = labels
            .iter()
            .map(|&l| position(&sorted, l).expect("own label"))
            .collect();
        let raw = GObj {
            labels: labels.clone(),
            act: (0..ng)
                .flat_map(|b| (0..x.size()).map(move |i| (b, i)))
                .map(|(b, i)| x.act(b, i))
                .collect(),
        };
        Ok(Some(raw.permuted(sorted, &perm, ng)))
    }
}

/// Extends generator permutations to an action of Γ on `n` points.
fn extend_action(
    gamma: &Group,
    n: usize,
    gens: &[usize],
    images: &[&Vec<usize>],
) -> Option<Vec<usize>> {
    let mut rho: Vec<Option<Vec<usize>>> = vec![None; gamma.order()];
    rho[0] = Some((0..n).collect());
    let mut queue = VecDeque::from([0usize]);
    while let Some(g) = queue.pop_front() {
        let rg = rho[g].clone().expect("visited");
        for (&s, &rs) in gens.iter().zip(images) {
            let h = gamma.mul(g, s);
            let value: Vec<usize> = (0..n).map(|i| rg[rs[i]]).collect();
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
    Some(
        rho.into_iter()
            .flat_map(|r| r.expect("generated"))
            .collect(),
    )
}

impl MCategory for GFinSets {
    type Obj = GObj;
    type Mor = GMor;

    fn name(&self) -> String {
        match self.filter {
            GSetFilter::All => format!("{}F", self.gamma.name()),
            GSetFilter::Free => format!("{}F_free", self.gamma.name()),
        }
    }

    fn objects_on(&self, labels: &[Label], bound: usize) -> Vec<GObj> {
        let mut by_size: Vec<Option<Vec<Vec<usize>>>> = vec![None; bound.min(labels.len()) + 1];
        let mut out = Vec::new();
        for s in all_subsets(labels, bound) {
            let acts = by_size[s.len()].get_or_insert_with(|| self.actions(s.len()));
            for act in acts.iter() {
                let x = GObj {
                    labels: s.clone(),
                    act: act.clone(),
                };
                if self.admits(&x) {
                    out.push(x);
                }
            }
        }
        out
    }

    fn size(&self, x: &GObj) -> usize {
        x.len()
    }

    fn support(&self, x: &GObj) -> Vec<Label> {
        x.labels.clone()
    }

    fn source(&self, f: &GMor) -> GObj {
        f.src.clone()
    }

    fn target(&self, f: &GMor) -> GObj {
        f.tgt.clone()
    }

    fn identity(&self, x: &GObj) -> GMor {
        GMor {
            src: x.clone(),
            tgt: x.clone(),
            map: (0..x.len()).collect(),
        }
    }

    fn compose(&self, g: &GMor, f: &GMor) -> GMor {
        GMor {
            src: f.src.clone(),
            tgt: g.tgt.clone(),
            map: f.map.iter().map(|&i| g.map[i]).collect(),
        }
    }

    fn inverse(&self, f: &GMor) -> Option<GMor> {
        let mut map = vec![0; f.map.len()];
        for (i, &j) in f.map.iter().enumerate() {
            map[j] = i;
        }
        Some(GMor {
            src: f.tgt.clone(),
            tgt: f.src.clone(),
            map,
        })
    }

    fn hom_set(&self, x: &GObj, y: &GObj) -> Vec<GMor> {
        self.equivariant_bijections(x, y)
    }

    fn act_obj(&self, u: &Injection, x: &GObj) -> GObj {
        self.relabel(u, x).0
    }

    fn transport(&self, u: &Injection, x: &GObj) -> GMor {
        let (tgt, map) = self.relabel(u, x);
        GMor {
            src: x.clone(),
            tgt,
            map,
        }
    }

    fn describe(&self, x: &GObj) -> String {
        let orbits: Vec<String> = x
            .gset(&self.gamma)
            .orbits_and_stabilizers()
            .into_iter()
            .map(|(o, _)| describe_labels(&o.iter().map(|&i| x.labels[i]).collect::<Vec<_>>()))
            .collect();
        format!("[{}]", orbits.join(" "))
    }
}

impl Parsummable for GFinSets {
    fn zero(&self) -> GObj {
        GObj {
            labels: Vec::new(),
            act: Vec::new(),
        }
    }

    fn sum(&self, x: &GObj, y: &GObj) -> Result<GObj> {
        let labels = merge_disjoint(&x.labels, &y.labels)?;
        let n = labels.len();
        let order = self.gamma.order();
        let px: Vec<usize> = x
            .labels
            .iter()
            .map(|&l| position(&labels, l).expect("merged"))
            .collect();
        let py: Vec<usize> = y
            .labels
            .iter()
            .map(|&l| position(&labels, l).expect("merged"))
            .collect();
        let mut act = vec![0; order * n];
        for g in 0..order {
            for (i, &p) in px.iter().enumerate() {
                act[g * n + p] = px[x.act(g, i)];
            }
            for (i, &p) in py.iter().enumerate() {
                act[g * n + p] = py[y.act(g, i)];
            }
        }
        Ok(GObj { labels, act })
    }

    fn sum_mor(&self, f: &GMor, g: &GMor) -> Result<GMor> {
        let src = self.sum(&f.src, &g.src)?;
        let tgt = self.sum(&f.tgt, &g.tgt)?;
        let map = src
            .labels
            .iter()
            .map(|&l| {
                let image = match position(&f.src.labels, l) {
                    Some(i) => f.tgt.labels[f.map[i]],
                    None => {
                        let i = position(&g.src.labels, l).expect("label of a summand");
                        g.tgt.labels[g.map[i]]
                    }
                };
                position(&tgt.labels, image).expect("image label")
            })
            .collect();
        Ok(GMor { src, tgt, map })
    }

    /// Multisets of transitive `(G × Γ)`-sets, embedded into fresh blocks.
    fn fixed_candidates(&self, u: &UniversalSet, m: usize, bound: usize) -> Result<Vec<GObj>> {
        let p = self.product_with(u.group())?;
        let ng = self.gamma.order();
        let classes = p.subgroup_classes();
        let allowed: Vec<&Subgroup> = classes
            .reps()
            .filter(|d| {
                self.filter == GSetFilter::All || d.elements().iter().all(|&e| e == 0 || e >= ng)
            })
            .collect();
        let sizes: Vec<usize> = allowed.iter().map(|d| p.order() / d.order()).collect();
        let mut out = Vec::new();
        for mult in multiplicity_vectors(&sizes, usize::MAX, bound) {
            let mut x = GSet::empty(&p);
            for (d, &n) in allowed.iter().zip(&mult) {
                for _ in 0..n {
                    x = x.disjoint_union(&GSet::cosets(&p, d))?;
                }
            }
            if let Some(obj) = self.embed(u, &x, m)? {
                out.push(obj);
            }
        }
        Ok(out)
    }

    fn fixed_isomorphic(&self, u: &UniversalSet, x: &GObj, y: &GObj) -> Result<bool> {
        if x.len() != y.len() {
            return Ok(false);
        }
        Ok(self.product_gset(u, x)?.decompose() == self.product_gset(u, y)?.decompose())
    }

    fn fixed_signature(&self, u: &UniversalSet, x: &GObj) -> Vec<i64> {
        self.product_gset(u, x)
            .map(|s| marks_signature(&s))
            .unwrap_or_default()
    }

    fn default_bound(&self, group: &GroupRef) -> usize {
        group.order() * self.gamma.order()
    }

    fn object_representatives(&self, bound: usize) -> Vec<GObj> {
        let mut reps: Vec<GObj> = Vec::new();
        for n in 0..=bound {
            let labels: Vec<Label> = (0..n as Label).collect();
            let mut seen = Vec::new();
            for act in self.actions(n) {
                let x = GObj {
                    labels: labels.clone(),
                    act,
                };
                if !self.admits(&x) {
                    continue;
                }
                let class = x.gset(&self.gamma).decompose();
                if !seen.contains(&class) {
                    seen.push(class);
                    reps.push(x);
                }
            }
        }
        reps
    }

    fn atom_label(&self, u: &UniversalSet, x: &GObj) -> String {
        match self.product_gset(u, x) {
            Ok(s) => {
                let p = s.group().clone();
                s.orbits_and_stabilizers()
                    .iter()
                    .map(|(_, d)| format!("({})/{}", p.name(), p.subgroup_label(d)))
                    .collect::<Vec<_>>()
                    .join("+")
            }
            Err(_) => self.describe(x),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parsummable::{verify_mcat_axioms, Pi0Monoid};

    fn c2() -> GroupRef {
        Group::named("C2").unwrap()
    }

    #[test]
    fn actions_on_two_points() {
        let cat = GFinSets::new(&c2(), GSetFilter::All).unwrap();
        assert_eq!(cat.actions(2).len(), 2);
        assert_eq!(cat.actions(3).len(), 4);
    }

    #[test]
    fn axioms_hold() {
        let cat = GFinSets::new(&c2(), GSetFilter::All).unwrap();
        let labels: Vec<Label> = (0..4).collect();
        let r = verify_mcat_axioms(&cat, &labels, 4, 40, 3);
        assert!(r.all_passed(), "{:?}", r.failures());
    }

    #[test]
    fn automorphisms_of_free_orbits() {
        let c3 = Group::named("C3").unwrap();
        let cat = GFinSets::new(&c3, GSetFilter::Free).unwrap();
        let x = cat
            .object_representatives(6)
            .into_iter()
            .find(|x| x.len() == 6)
            .unwrap();
        // Σ_2 ≀ C_3 has order 2·9
        assert_eq!(cat.hom_set(&x, &x).len(), 18);
    }

    #[test]
    fn trivial_group_fixed_classes() {
        let cat = GFinSets::new(&c2(), GSetFilter::All).unwrap();
        let p = Pi0Monoid::compute(&cat, &Group::trivial(), 2, 2).unwrap();
        assert_eq!(p.rank(), 2);
    }

    #[test]
    fn swan_k_matches_burnside_and_free() {
        use crate::globfun::{compare_functors, GlobalFunctor, GroupWindow};
        use crate::parsummable::{swan_k, SwanOptions};
        let w = GroupWindow::parse("e,C2").unwrap();
        let opts = SwanOptions {
            check_choices: true,
            ..SwanOptions::default()
        };
        let all = GFinSets::new(&c2(), GSetFilter::All).unwrap();
        let k = swan_k(&all, &w, &opts).unwrap();
        assert!(k.axioms.all_passed());
        assert_eq!(k.choices_agreed, k.choices_checked);
        let b = GlobalFunctor::burnside_b(&c2(), &w).unwrap();
        assert!(compare_functors(&k.functor, &b, None).isomorphic);
        let free = GFinSets::new(&c2(), GSetFilter::Free).unwrap();
        let k = swan_k(&free, &w, &opts).unwrap();
        assert_eq!(k.functor.ranks(), vec![1, 3]);
        let a = GlobalFunctor::free(&c2(), &w).unwrap();
        assert!(compare_functors(&k.functor, &a, None).isomorphic);
    }
}
