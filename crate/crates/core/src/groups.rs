//! Finite groups as Cayley tables, with subgroup and conjugacy machinery.
//!
//! Element `0` is always the identity. Every constructor checks the order cap
//! so that downstream enumeration never has to.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::caps::Caps;
use crate::error::{Error, Result};

/// Shared handle to an immutable group.
pub type GroupRef = Arc<Group>;

pub struct Group {
    name: String,
    order: usize,
    mult: Vec<usize>,
    inv: Vec<usize>,
    classes: OnceLock<Arc<SubgroupClasses>>,
}

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        self.mult == other.mult
    }
}

impl Eq for Group {}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Group({}, order {})", self.name, self.order)
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// A subgroup, stored as its strictly sorted element list. The parent group
/// is implicit and supplied by the caller.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subgroup(Vec<usize>);

impl Subgroup {
    pub fn elements(&self) -> &[usize] {
        &self.0
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.0.binary_search(&g).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.0.iter().all(|&g| other.contains(g))
    }

    pub fn trivial() -> Subgroup {
        Subgroup(vec![0])
    }
}

/// Conjugacy classes of subgroups of one group.
#[derive(Debug)]
pub struct SubgroupClasses {
    /// All subgroups, sorted by (order, element list).
    pub all: Vec<Subgroup>,
    index: HashMap<Subgroup, usize>,
    /// Class id of each entry of `all`.
    pub class_of: Vec<usize>,
    /// Index into `all` of each class representative.
    pub reps: Vec<usize>,
    /// Indices into `all` of the members of each class.
    pub members: Vec<Vec<usize>>,
}

impl SubgroupClasses {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn rep(&self, class: usize) -> &Subgroup {
        &self.all[self.reps[class]]
    }

    pub fn reps(&self) -> impl Iterator<Item = &Subgroup> {
        self.reps.iter().map(move |&i| &self.all[i])
    }

    pub fn index_of(&self, h: &Subgroup) -> Option<usize> {
        self.index.get(h).copied()
    }

    pub fn class_of_subgroup(&self, h: &Subgroup) -> usize {
        self.class_of[self.index[h]]
    }
}

impl Group {
    /// Builds a group from a full Cayley table, checking the group axioms.
    pub fn from_table(name: impl Into<String>, table: Vec<Vec<usize>>) -> Result<GroupRef> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if table.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidGroup("table is not square".into()));
        }
        let mult: Vec<usize> = table.into_iter().flatten().collect();
        Group::from_flat(name.into(), n, mult)
    }

    fn from_flat(name: String, n: usize, mult: Vec<usize>) -> Result<GroupRef> {
        Group::from_flat_capped(name, n, mult, Caps::global().order)
    }

    fn from_flat_capped(name: String, n: usize, mult: Vec<usize>, cap: usize) -> Result<GroupRef> {
        if n > cap {
            return Err(Error::OrderCapExceeded { order: n, cap });
        }
        if mult.iter().any(|&x| x >= n) {
            return Err(Error::InvalidGroup("entry out of range".into()));
        }
        let m = |a: usize, b: usize| mult[a * n + b];
        for a in 0..n {
            if m(0, a) != a || m(a, 0) != a {
                return Err(Error::InvalidGroup("element 0 is not the identity".into()));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = m(a, b);
                for c in 0..n {
                    if m(ab, c) != m(a, m(b, c)) {
                        return Err(Error::InvalidGroup(format!(
                            "associativity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let mut inv = vec![usize::MAX; n];
        for (a, slot) in inv.iter_mut().enumerate() {
            match (0..n).find(|&b| m(a, b) == 0) {
                Some(b) if m(b, a) == 0 => *slot = b,
                _ => return Err(Error::InvalidGroup(format!("element {a} has no inverse"))),
            }
        }
        Ok(Arc::new(Group {
            name,
            order: n,
            mult,
            inv,
            classes: OnceLock::new(),
        }))
    }

    /// Parses the text table format: a line `order n` followed by `n` rows.
    pub fn parse_table(name: impl Into<String>, text: &str) -> Result<GroupRef> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing `order n` header".into()))?;
        let n: usize = header
            .strip_prefix("order")
            .map(str::trim)
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad header `{header}`")))?;
        let mut table = Vec::with_capacity(n);
        for (i, line) in lines.enumerate() {
            let row = line
                .split_whitespace()
                .map(|t| t.parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::Parse(format!("row {i} is not numeric")))?;
            table.push(row);
        }
        if table.len() != n {
            return Err(Error::Parse(format!(
                "expected {n} rows, found {}",
                table.len()
            )));
        }
        Group::from_table(name, table)
    }

    pub fn trivial() -> GroupRef {
        Group::cyclic(1).expect("trivial group")
    }

    pub fn cyclic(n: usize) -> Result<GroupRef> {
        if n == 0 {
            return Err(Error::InvalidGroup("C0 is not finite".into()));
        }
        let mult = (0..n * n).map(|k| (k / n + k % n) % n).collect();
        let name = if n == 1 {
            "e".to_string()
        } else {
            format!("C{n}")
        };
        Group::from_flat(name, n, mult)
    }

    /// Closure of a set of permutations, elements sorted lexicographically so
    /// that the identity comes first. Product is composition `(ab)(i) = a(b(i))`.
    pub fn from_permutations(name: impl Into<String>, gens: &[Vec<usize>]) -> Result<GroupRef> {
        let degree = gens.first().map_or(0, Vec::len);
        let id: Vec<usize> = (0..degree).collect();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        seen.insert(id.clone());
        let mut queue = VecDeque::from([id]);
        let cap = Caps::global().order;
        while let Some(p) = queue.pop_front() {
            for g in gens {
                let q: Vec<usize> = g.iter().map(|&i| p[i]).collect();
                if seen.insert(q.clone()) {
                    if seen.len() > cap {
                        return Err(Error::OrderCapExceeded {
                            order: seen.len(),
                            cap,
                        });
                    }
                    queue.push_back(q);
                }
            }
        }
        let elems: Vec<Vec<usize>> = seen.into_iter().collect();
        let index: HashMap<&Vec<usize>, usize> =
            elems.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let n = elems.len();
        let mut mult = vec![0; n * n];
        for (a, pa) in elems.iter().enumerate() {
            for (b, pb) in elems.iter().enumerate() {
                let c: Vec<usize> = pb.iter().map(|&i| pa[i]).collect();
                mult[a * n + b] = index[&c];
            }
        }
        Group::from_flat(name.into(), n, mult)
    }

    pub fn symmetric(n: usize) -> Result<GroupRef> {
        if n <= 1 {
            return Ok(Group::trivial());
        }
        let swap: Vec<usize> = (0..n)
            .map(|i| [1, 0].get(i).copied().unwrap_or(i))
            .collect();
        let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        Group::from_permutations(format!("S{n}"), &[swap, cycle])
    }

    pub fn alternating4() -> Result<GroupRef> {
        Group::from_permutations("A4", &[vec![1, 2, 0, 3], vec![1, 0, 3, 2]])
    }

    /// Dihedral group of order `2n`.
    pub fn dihedral(n: usize) -> Result<GroupRef> {
        if n < 3 {
            return Err(Error::InvalidGroup(format!("D{n} needs n >= 3")));
        }
        let rot: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let refl: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
        Group::from_permutations(format!("D{n}"), &[rot, refl])
    }

    pub fn quaternion() -> Result<GroupRef> {
        // Units ±1, ±i, ±j, ±k encoded as sign*4 + unit.
        const UNIT: [[(usize, usize); 4]; 4] = [
            [(0, 0), (0, 1), (0, 2), (0, 3)],
            [(0, 1), (1, 0), (0, 3), (1, 2)],
            [(0, 2), (1, 3), (1, 0), (0, 1)],
            [(0, 3), (0, 2), (1, 1), (1, 0)],
        ];
        let mul = |a: usize, b: usize| {
            let (s, u) = UNIT[a % 4][b % 4];
            ((a / 4 + b / 4 + s) % 2) * 4 + u
        };
        let left = |a: usize| (0..8).map(|b| mul(a, b)).collect::<Vec<_>>();
        Group::from_permutations("Q8", &[left(1), left(2)])
    }

    /// Direct product with elements `(a, b)` indexed as `a * |B| + b`.
    pub fn direct_product(a: &Group, b: &Group) -> Result<GroupRef> {
        let (na, nb) = (a.order, b.order);
        let n = na * nb;
        let caps = Caps::global();
        if na.max(nb) > caps.order {
            return Err(Error::OrderCapExceeded {
                order: na.max(nb),
                cap: caps.order,
            });
        }
        let cap = caps.product_order();
        if n > cap {
            return Err(Error::OrderCapExceeded { order: n, cap });
        }
        let mut mult = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                mult[x * n + y] = a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb);
            }
        }
        Group::from_flat_capped(format!("{}x{}", a.name, b.name), n, mult, cap)
    }

    /// Looks up a group by bestiary name: `e`, `C1`, `Cn`, `V4`, `S3`, `S4`,
    /// `Dn` (order 2n), `Q8`, `A4`, and products such as `C2xC2` or `S3xC2`.
    pub fn named(name: &str) -> Result<GroupRef> {
        let name = name.trim();
        if name.contains(['x', '×']) {
            let mut parts = name.split(['x', '×']);
            let first = parts.next().unwrap_or_default();
            let mut acc = Group::named(first)?;
            for part in parts {
                acc = Group::direct_product(&acc, &*Group::named(part)?)?;
            }
            return Ok(Group::renamed(&acc, name));
        }
        let bad = || Error::UnknownGroup(name.to_string());
        let num = |s: &str| s.parse::<usize>().map_err(|_| bad());
        match name {
            "e" | "1" | "C1" | "trivial" => Ok(Group::renamed(&Group::trivial(), name)),
            "V4" => Ok(Group::renamed(&*Group::named("C2xC2")?, "V4")),
            "Q8" => Group::quaternion(),
            "A4" => Group::alternating4(),
            _ => {
                if let Some(n) = name.strip_prefix('C') {
                    Group::cyclic(num(n)?)
                } else if let Some(n) = name.strip_prefix('S') {
                    let n = num(n)?;
                    if n < 2 {
                        return Err(bad());
                    }
                    Group::symmetric(n)
                } else if let Some(n) = name.strip_prefix('D') {
                    Group::dihedral(num(n)?)
                } else {
                    Err(bad())
                }
            }
        }
    }

    fn renamed(g: &Group, name: &str) -> GroupRef {
        Arc::new(Group {
            name: name.to_string(),
            order: g.order,
            mult: g.mult.clone(),
            inv: g.inv.clone(),
            classes: OnceLock::new(),
        })
    }

    pub fn with_name(&self, name: &str) -> GroupRef {
        Group::renamed(self, name)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// `g h g⁻¹`.
    #[inline]
    pub fn conj(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.inv[g])
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.mult
            .chunks(self.order)
            .map(<[usize]>::to_vec)
            .collect()
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup((0..self.order).collect())
    }

    /// Subgroup generated by `gens`.
    pub fn generated(&self, gens: &[usize]) -> Subgroup {
        let mut member = vec![false; self.order];
        member[0] = true;
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !member[y] {
                    member[y] = true;
                    stack.push(y);
                }
            }
        }
        Subgroup((0..self.order).filter(|&i| member[i]).collect())
    }

    /// Checks closure and returns the subgroup with sorted elements.
    pub fn subgroup(&self, elements: &[usize]) -> Result<Subgroup> {
        let set: BTreeSet<usize> = elements.iter().copied().collect();
        if !set.contains(&0) || set.iter().any(|&x| x >= self.order) {
            return Err(Error::InvalidGroup(
                "not a subset containing the identity".into(),
            ));
        }
        for &a in &set {
            if !set.contains(&self.inv[a]) || set.iter().any(|&b| !set.contains(&self.mul(a, b))) {
                return Err(Error::InvalidGroup("subset is not closed".into()));
            }
        }
        Ok(Subgroup(set.into_iter().collect()))
    }

    /// `g H g⁻¹`.
    pub fn conjugate(&self, g: usize, h: &Subgroup) -> Subgroup {
        let mut v: Vec<usize> = h.0.iter().map(|&x| self.conj(g, x)).collect();
        v.sort_unstable();
        Subgroup(v)
    }

    pub fn intersect(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        Subgroup(a.0.iter().copied().filter(|&x| b.contains(x)).collect())
    }

    /// A small generating set, greedily picking elements of large order.
    pub fn generators_of(&self, h: &Subgroup) -> Vec<usize> {
        let mut by_order: Vec<usize> = h.0.clone();
        by_order.sort_by_key(|&x| (std::cmp::Reverse(self.element_order(x)), x));
        let mut gens = Vec::new();
        let mut current = Subgroup::trivial();
        for x in by_order {
            if current.order() == h.order() {
                break;
            }
            if !current.contains(x) {
                gens.push(x);
                current = self.generated(&gens);
            }
        }
        gens
    }

    pub fn generators(&self) -> Vec<usize> {
        self.generators_of(&self.whole())
    }

    /// Subgroup lattice and conjugacy classes, computed once.
    pub fn subgroup_classes(&self) -> Arc<SubgroupClasses> {
        self.classes
            .get_or_init(|| Arc::new(self.compute_classes()))
            .clone()
    }

    pub fn all_subgroups(&self) -> Vec<Subgroup> {
        self.subgroup_classes().all.clone()
    }

    fn compute_classes(&self) -> SubgroupClasses {
        let mut cyclic: BTreeSet<Subgroup> = BTreeSet::new();
        for g in 0..self.order {
            cyclic.insert(self.generated(&[g]));
        }
        let cyclic_gens: Vec<usize> = {
            let mut seen = BTreeSet::new();
            (0..self.order)
                .filter(|&g| seen.insert(self.generated(&[g])))
                .collect()
        };
        let mut found: BTreeSet<Subgroup> = cyclic.clone();
        let mut frontier: Vec<Subgroup> = cyclic.into_iter().collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for h in &frontier {
                for &g in &cyclic_gens {
                    if h.contains(g) {
                        continue;
                    }
                    let mut gens = self.generators_of(h);
                    gens.push(g);
                    let joined = self.generated(&gens);
                    if found.insert(joined.clone()) {
                        next.push(joined);
                    }
                }
            }
            frontier = next;
        }
        let mut all: Vec<Subgroup> = found.into_iter().collect();
        all.sort_by(|a, b| (a.order(), &a.0).cmp(&(b.order(), &b.0)));
        let index: HashMap<Subgroup, usize> = all
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, h)| (h, i))
            .collect();
        let mut class_of = vec![usize::MAX; all.len()];
        let mut reps = Vec::new();
        let mut members = Vec::new();
        for i in 0..all.len() {
            if class_of[i] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(i);
            let mut orbit = BTreeSet::new();
            for g in 0..self.order {
                let j = index[&self.conjugate(g, &all[i])];
                class_of[j] = c;
                orbit.insert(j);
            }
            members.push(orbit.into_iter().collect());
        }
        SubgroupClasses {
            all,
            index,
            class_of,
            reps,
            members,
        }
    }

    /// Least `g` with `g H g⁻¹` equal to the representative of its class.
    pub fn to_representative(&self, h: &Subgroup) -> (usize, usize) {
        let classes = self.subgroup_classes();
        let c = classes.class_of_subgroup(h);
        let rep = classes.rep(c);
        let g = (0..self.order)
            .find(|&g| self.conjugate(g, h) == *rep)
            .expect("class representative is conjugate");
        (c, g)
    }

    /// All `g` with `g A g⁻¹ ⊆ B`.
    pub fn transporter(&self, a: &Subgroup, b: &Subgroup) -> Vec<usize> {
        (0..self.order)
            .filter(|&g| a.0.iter().all(|&x| b.contains(self.conj(g, x))))
            .collect()
    }

    pub fn normalizer(&self, h: &Subgroup) -> Subgroup {
        Subgroup(self.transporter(h, h))
    }

    /// `H` as an abstract group, with its inclusion into `self`.
    pub fn subgroup_group(self: &Arc<Self>, h: &Subgroup) -> (GroupRef, GroupHom) {
        let pos: HashMap<usize, usize> = h.0.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let n = h.order();
        let mut mult = vec![0; n * n];
        for (i, &a) in h.0.iter().enumerate() {
            for (j, &b) in h.0.iter().enumerate() {
                mult[i * n + j] = pos[&self.mul(a, b)];
            }
        }
        let name = self.subgroup_label(h);
        let sub =
            Group::from_flat_capped(name, n, mult, usize::MAX).expect("subgroup of a valid group");
        let incl = GroupHom {
            source: sub.clone(),
            target: self.clone(),
            image: h.0.clone(),
        };
        (sub, incl)
    }

    /// `W_G H = N_G H / H` with the quotient map from `N_G H` (as an abstract
    /// group, see [`Group::subgroup_group`]).
    pub fn weyl_group(self: &Arc<Self>, h: &Subgroup) -> (GroupRef, GroupHom) {
        let n = self.normalizer(h);
        let (ngroup, incl) = self.subgroup_group(&n);
        // cosets xH inside N, labelled by their least element, ordered by it
        let mut coset_of = HashMap::new();
        let mut labels: Vec<usize> = Vec::new();
        for &x in n.elements() {
            if coset_of.contains_key(&x) {
                continue;
            }
            let idx = labels.len();
            labels.push(x);
            for &y in h.elements() {
                coset_of.insert(self.mul(x, y), idx);
            }
        }
        let q = labels.len();
        let mut mult = vec![0; q * q];
        for (i, &a) in labels.iter().enumerate() {
            for (j, &b) in labels.iter().enumerate() {
                mult[i * q + j] = coset_of[&self.mul(a, b)];
            }
        }
        let name = if q == 1 {
            "e".to_string()
        } else {
            format!("W({})", self.subgroup_label(h))
        };
        let w =
            Group::from_flat_capped(name, q, mult, usize::MAX).expect("quotient of a valid group");
        let image = incl.image.iter().map(|x| coset_of[x]).collect();
        let quotient = GroupHom {
            source: ngroup,
            target: w.clone(),
            image,
        };
        (w, quotient)
    }

    /// One representative (the least element) per double coset `K g H`.
    pub fn double_cosets(&self, k: &Subgroup, h: &Subgroup) -> Vec<usize> {
        let mut covered = vec![false; self.order];
        let mut reps = Vec::new();
        for g in 0..self.order {
            if covered[g] {
                continue;
            }
            reps.push(g);
            for &a in k.elements() {
                let ag = self.mul(a, g);
                for &b in h.elements() {
                    covered[self.mul(ag, b)] = true;
                }
            }
        }
        reps
    }

    /// Descriptive name of a subgroup's isomorphism type (best effort).
    pub fn subgroup_label(&self, h: &Subgroup) -> String {
        let n = h.order();
        if n == 1 {
            return "e".into();
        }
        if n == self.order {
            return self.name.clone();
        }
        let orders: Vec<usize> = h.0.iter().map(|&x| self.element_order(x)).collect();
        let exponent = orders.iter().copied().fold(1, lcm);
        if exponent == n {
            return format!("C{n}");
        }
        let abelian =
            h.0.iter()
                .all(|&a| h.0.iter().all(|&b| self.mul(a, b) == self.mul(b, a)));
        let involutions = orders.iter().filter(|&&o| o == 2).count();
        match (n, abelian) {
            (4, _) => "V4".into(),
            (6, false) => "S3".into(),
            (8, true) if exponent == 2 => "C2xC2xC2".into(),
            (8, true) => "C4xC2".into(),
            (8, false) if involutions == 1 => "Q8".into(),
            (8, false) => "D4".into(),
            (12, false) if exponent == 6 => "A4".into(),
            (12, false) if involutions == 7 => "D6".into(),
            _ => format!("G{n}"),
        }
    }

    /// Distinct labels for the subgroup classes: the type label, suffixed with
    /// `a`, `b`, ... when several classes share it.
    pub fn class_labels(&self) -> Vec<String> {
        let classes = self.subgroup_classes();
        let base: Vec<String> = classes.reps().map(|h| self.subgroup_label(h)).collect();
        let mut seen: HashMap<&str, usize> = HashMap::new();
        let mut out = Vec::with_capacity(base.len());
        for b in &base {
            let total = base.iter().filter(|x| *x == b).count();
            if total == 1 {
                out.push(b.clone());
            } else {
                let k = seen.entry(b).or_default();
                out.push(format!("{b}{}", (b'a' + *k as u8) as char));
                *k += 1;
            }
        }
        out
    }

    /// Resolves a class label (see [`Group::class_labels`]) or a bracketed
    /// element list such as `[0,3]` to a subgroup.
    pub fn find_subgroup(&self, label: &str) -> Result<Subgroup> {
        let label = label.trim();
        if let Some(inner) = label.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            let elems = inner
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| s.trim().parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::Parse(format!("bad subgroup `{label}`")))?;
            return self.subgroup(&elems);
        }
        let labels = self.class_labels();
        let classes = self.subgroup_classes();
        labels
            .iter()
            .position(|l| l == label)
            .map(|c| classes.rep(c).clone())
            .ok_or_else(|| Error::UnknownGroup(format!("{label} in {}", self.name)))
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// A homomorphism given by the image of every source element.
#[derive(Clone, Debug)]
pub struct GroupHom {
    pub source: GroupRef,
    pub target: GroupRef,
    pub image: Vec<usize>,
}

impl PartialEq for GroupHom {
    fn eq(&self, other: &Self) -> bool {
        self.image == other.image && self.source == other.source && self.target == other.target
    }
}

impl Eq for GroupHom {}

impl GroupHom {
    pub fn new(source: GroupRef, target: GroupRef, image: Vec<usize>) -> Result<GroupHom> {
        if image.len() != source.order() || image.iter().any(|&x| x >= target.order()) {
            return Err(Error::InvalidGroup(
                "image array has the wrong shape".into(),
            ));
        }
        for a in 0..source.order() {
            for b in 0..source.order() {
                if image[source.mul(a, b)] != target.mul(image[a], image[b]) {
                    return Err(Error::InvalidGroup("map is not multiplicative".into()));
                }
            }
        }
        Ok(GroupHom {
            source,
            target,
            image,
        })
    }

    pub fn identity(g: &GroupRef) -> GroupHom {
        GroupHom {
            source: g.clone(),
            target: g.clone(),
            image: (0..g.order()).collect(),
        }
    }

    pub fn trivial(source: &GroupRef, target: &GroupRef) -> GroupHom {
        GroupHom {
            source: source.clone(),
            target: target.clone(),
            image: vec![0; source.order()],
        }
    }

    /// `x ↦ g x g⁻¹` on `g`'s own group.
    pub fn inner(g: &GroupRef, c: usize) -> GroupHom {
        GroupHom {
            source: g.clone(),
            target: g.clone(),
            image: (0..g.order()).map(|x| g.conj(c, x)).collect(),
        }
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &GroupHom) -> GroupHom {
        GroupHom {
            source: first.source.clone(),
            target: self.target.clone(),
            image: first.image.iter().map(|&x| self.image[x]).collect(),
        }
    }

    /// `x ↦ g α(x) g⁻¹`.
    pub fn conjugated(&self, g: usize) -> GroupHom {
        GroupHom {
            source: self.source.clone(),
            target: self.target.clone(),
            image: self.image.iter().map(|&x| self.target.conj(g, x)).collect(),
        }
    }

    pub fn is_injective(&self) -> bool {
        self.image.iter().collect::<BTreeSet<_>>().len() == self.image.len()
    }

    pub fn image_subgroup(&self) -> Subgroup {
        let set: BTreeSet<usize> = self.image.iter().copied().collect();
        Subgroup(set.into_iter().collect())
    }

    pub fn kernel(&self) -> Subgroup {
        Subgroup(
            (0..self.source.order())
                .filter(|&x| self.image[x] == 0)
                .collect(),
        )
    }

    /// Image of a source subgroup.
    pub fn map_subgroup(&self, h: &Subgroup) -> Subgroup {
        let set: BTreeSet<usize> = h.elements().iter().map(|&x| self.image[x]).collect();
        Subgroup(set.into_iter().collect())
    }

    /// Preimage of a target subgroup.
    pub fn preimage(&self, h: &Subgroup) -> Subgroup {
        Subgroup(
            (0..self.source.order())
                .filter(|&x| h.contains(self.image[x]))
                .collect(),
        )
    }
}

/// All homomorphisms `K → G`, sorted by image array.
pub fn homs(k: &GroupRef, g: &GroupRef) -> Vec<GroupHom> {
    let gens = k.generators();
    let gen_orders: Vec<usize> = gens.iter().map(|&x| k.element_order(x)).collect();
    let candidates: Vec<Vec<usize>> = gen_orders
        .iter()
        .map(|&o| {
            (0..g.order())
                .filter(|&y| o % g.element_order(y) == 0)
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    'outer: loop {
        let imgs: Vec<usize> = choice
            .iter()
            .zip(&candidates)
            .map(|(&c, cands)| cands[c])
            .collect();
        if let Some(image) = extend_on_generators(k, g, &gens, &imgs) {
            out.push(GroupHom {
                source: k.clone(),
                target: g.clone(),
                image,
            });
        }
        for i in (0..choice.len()).rev() {
            choice[i] += 1;
            if choice[i] < candidates[i].len() {
                continue 'outer;
            }
            choice[i] = 0;
        }
        break;
    }
    out.sort_by(|a, b| a.image.cmp(&b.image));
    out
}

/// Extends generator images by breadth-first search over words and checks
/// the result is a homomorphism.
fn extend_on_generators(
    k: &Group,
    g: &Group,
    gens: &[usize],
    imgs: &[usize],
) -> Option<Vec<usize>> {
    let mut image = vec![usize::MAX; k.order()];
    image[0] = 0;
    let mut queue = VecDeque::from([0]);
    while let Some(x) = queue.pop_front() {
        for (&s, &t) in gens.iter().zip(imgs) {
            let y = k.mul(x, s);
            let fy = g.mul(image[x], t);
            if image[y] == usize::MAX {
                image[y] = fy;
                queue.push_back(y);
            } else if image[y] != fy {
                return None;
            }
        }
    }
    for a in 0..k.order() {
        for b in 0..k.order() {
            if image[k.mul(a, b)] != g.mul(image[a], image[b]) {
                return None;
            }
        }
    }
    Some(image)
}

/// Homomorphisms `K → G` up to post-conjugation in `G`, each represented by
/// its lexicographically least conjugate image array.
pub fn homs_up_to_conjugacy(k: &GroupRef, g: &GroupRef) -> Vec<GroupHom> {
    let mut seen = BTreeSet::new();
    for h in homs(k, g) {
        let canon = (0..g.order())
            .map(|c| h.conjugated(c).image)
            .min()
            .expect("nonempty group");
        seen.insert(canon);
    }
    seen.into_iter()
        .map(|image| GroupHom {
            source: k.clone(),
            target: g.clone(),
            image,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(name: &str) -> GroupRef {
        Group::named(name).unwrap()
    }

    /// Power-set scan, only viable for tiny groups.
    fn brute_subgroups(grp: &Group) -> usize {
        let n = grp.order();
        (0u64..1 << n)
            .filter(|mask| {
                let has = |x: usize| mask >> x & 1 == 1;
                has(0) && (0..n).all(|a| !has(a) || (0..n).all(|b| !has(b) || has(grp.mul(a, b))))
            })
            .count()
    }

    #[test]
    fn bestiary_orders() {
        for (name, n) in [
            ("e", 1),
            ("C1", 1),
            ("C5", 5),
            ("V4", 4),
            ("S3", 6),
            ("S4", 24),
            ("D4", 8),
            ("D6", 12),
            ("Q8", 8),
            ("A4", 12),
            ("C2xC3", 6),
        ] {
            assert_eq!(g(name).order(), n, "{name}");
        }
        assert!(!g("S3").is_abelian());
        assert!(g("C2xC3").is_abelian());
        assert!(matches!(Group::named("Z7"), Err(Error::UnknownGroup(_))));
    }

    #[test]
    fn subgroup_counts_match_power_set_scan() {
        for name in ["e", "C2", "S3", "V4", "D4", "Q8", "C4", "C2xC3"] {
            let grp = g(name);
            assert_eq!(grp.all_subgroups().len(), brute_subgroups(&grp), "{name}");
        }
        assert_eq!(g("S3").all_subgroups().len(), 6);
        assert_eq!(g("V4").all_subgroups().len(), 5);
        assert_eq!(g("D4").all_subgroups().len(), 10);
        assert_eq!(g("S4").all_subgroups().len(), 30);
        assert_eq!(g("A4").all_subgroups().len(), 10);
    }

    #[test]
    fn class_counts() {
        assert_eq!(g("e").subgroup_classes().len(), 1);
        assert_eq!(g("S3").subgroup_classes().len(), 4);
        assert_eq!(g("D4").subgroup_classes().len(), 8);
        assert_eq!(g("S4").subgroup_classes().len(), 11);
        assert_eq!(g("Q8").subgroup_classes().len(), 6);
    }

    #[test]
    fn class_sizes_are_normalizer_indices() {
        for name in ["S3", "D4", "A4", "S4", "Q8"] {
            let grp = g(name);
            let classes = grp.subgroup_classes();
            let total: usize = classes
                .reps()
                .map(|h| grp.order() / grp.normalizer(h).order())
                .sum();
            assert_eq!(total, classes.all.len(), "{name}");
            for (c, members) in classes.members.iter().enumerate() {
                let rep = classes.rep(c);
                assert!(members.iter().all(|&i| classes.all[i] >= *rep));
                assert_eq!(grp.order() % rep.order(), 0);
            }
        }
    }

    #[test]
    fn weyl_groups() {
        let s3 = g("S3");
        let (w, _) = s3.weyl_group(&s3.whole());
        assert_eq!(w.order(), 1);
        let (w, _) = s3.weyl_group(&Subgroup::trivial());
        assert_eq!(w.order(), 6);
        let c2 = s3.find_subgroup("C2").unwrap();
        let (w, q) = s3.weyl_group(&c2);
        assert_eq!(w.order(), 1);
        assert_eq!(q.kernel().order(), 2);

        let d4 = g("D4");
        for h in d4.all_subgroups() {
            let (w, q) = d4.weyl_group(&h);
            assert_eq!(w.order(), d4.normalizer(&h).order() / h.order());
            assert_eq!(q.kernel().order(), h.order());
            assert_eq!(q.image_subgroup().order(), w.order());
            GroupHom::new(q.source.clone(), q.target.clone(), q.image.clone()).unwrap();
        }
    }

    #[test]
    fn double_coset_counts() {
        let s3 = g("S3");
        let c2 = s3.find_subgroup("C2").unwrap();
        assert_eq!(s3.double_cosets(&c2, &c2).len(), 2);
        assert_eq!(s3.double_cosets(&s3.whole(), &c2), vec![0]);
        let c6 = g("C6");
        let c2 = c6.find_subgroup("C2").unwrap();
        let c3 = c6.find_subgroup("C3").unwrap();
        assert_eq!(c6.double_cosets(&c2, &c3).len(), 1);
    }

    #[test]
    fn double_cosets_partition_the_group() {
        let d4 = g("D4");
        let subs = d4.all_subgroups();
        for k in &subs {
            for h in &subs {
                let total: usize = d4
                    .double_cosets(k, h)
                    .into_iter()
                    .map(|x| {
                        let mut set = BTreeSet::new();
                        for &a in k.elements() {
                            for &b in h.elements() {
                                set.insert(d4.mul(d4.mul(a, x), b));
                            }
                        }
                        set.len()
                    })
                    .sum();
                assert_eq!(total, d4.order());
            }
        }
    }

    #[test]
    fn hom_counts() {
        let (c2, c3, s3) = (g("C2"), g("C3"), g("S3"));
        assert_eq!(homs_up_to_conjugacy(&c2, &c2).len(), 2);
        assert_eq!(homs_up_to_conjugacy(&c3, &c2).len(), 1);
        assert_eq!(homs_up_to_conjugacy(&c2, &s3).len(), 2);
        // 1 + 3 involutions
        assert_eq!(homs(&c2, &s3).len(), 4);
        // |Hom(S3, S3)| = 1 + 3 + 6
        assert_eq!(homs(&s3, &s3).len(), 10);
        for h in homs(&g("V4"), &g("D4")) {
            GroupHom::new(h.source.clone(), h.target.clone(), h.image.clone()).unwrap();
        }
    }

    #[test]
    fn table_roundtrip_and_validation() {
        let s3 = g("S3");
        let text = format!(
            "order 6\n{}",
            s3.table()
                .iter()
                .map(|r| r
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(" "))
                .collect::<Vec<_>>()
                .join("\n")
        );
        let back = Group::parse_table("S3", &text).unwrap();
        assert_eq!(*back, *s3);
        let bad = Group::from_table("bad", vec![vec![0, 1], vec![1, 1]]);
        assert!(matches!(bad, Err(Error::InvalidGroup(_))));
    }

    #[test]
    fn labels_are_distinct() {
        let d4 = g("D4");
        let labels = d4.class_labels();
        assert_eq!(labels.len(), 8);
        let set: BTreeSet<_> = labels.iter().collect();
        assert_eq!(set.len(), 8);
        assert!(labels.contains(&"C2a".to_string()));
        assert_eq!(d4.find_subgroup("C4").unwrap().order(), 4);
    }
}
