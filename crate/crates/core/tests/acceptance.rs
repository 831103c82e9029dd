//! End-to-end acceptance run. Prints one line per criterion and exits with a
//! failure status if any criterion fails.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use globalk::bisets::{canonical_terms, graph_subgroup_class_count, Biset, BisetClass};
use globalk::globfun::{compare_functors, verify_axioms, AxiomReport, GlobalFunctor, GroupWindow};
use globalk::gsets::{induce, table_of_marks, GSet};
use globalk::instances::{
    free_generator_iso, module_iso_test, phi_of_sigma_equivalence, splitting_check, DiscreteMonoid,
    DiscreteNaturals, FinSets, FreeParsummable, GFinSets, GSetFilter, Module, MonoidKind,
    OneObjectGroup, PermutativePhi, ProjModules, SymmetricGroups,
};
use globalk::parsummable::{
    saturation_probe, stabilization_check, swan_k, verify_mcat_axioms, Label, MCategory,
    Parsummable, SwanK, SwanOptions,
};
use globalk::{Group, GroupRef, Result};
use ndarray::Array2;

const BESTIARY: [&str; 14] = [
    "e", "C2", "C3", "C4", "V4", "C5", "S3", "C6", "C7", "C8", "C2xC4", "C2xC2xC2", "D4", "Q8",
];

/// Term pairs per composition triple checked on the larger closure windows.
const COMPOSITION_LIMIT: usize = 2000;

/// Choice agreement accumulated over every Swan K computation in the run.
#[derive(Default)]
struct Choices {
    checked: usize,
    agreed: usize,
    runs: usize,
}

impl Choices {
    fn record<C: Parsummable>(&mut self, k: &SwanK<'_, C>) {
        self.checked += k.choices_checked;
        self.agreed += k.choices_agreed;
        self.runs += 1;
    }
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn g(name: &str) -> GroupRef {
    Group::named(name).expect("bestiary group")
}

fn window(list: &str) -> Arc<GroupWindow> {
    GroupWindow::parse(list).expect("window")
}

fn checked() -> SwanOptions {
    SwanOptions {
        check_choices: true,
        ..SwanOptions::default()
    }
}

fn labels(n: Label) -> Vec<Label> {
    (0..n).collect()
}

/// Global functor axioms with every family exercised and nothing skipped.
/// Inner automorphisms are only exercised when some window group is
/// nontrivial.
fn functor_gate(r: &AxiomReport, w: &GroupWindow) -> bool {
    let nontrivial = w.groups().iter().any(|g| g.order() > 1);
    r.all_passed()
        && r.misses.is_empty()
        && ["additivity", "transitivity", "double-coset"]
            .iter()
            .all(|a| r.count(a) > 0)
        && (!nontrivial || r.count("inner") > 0)
}

fn mcat_gate<C: Parsummable + ?Sized>(
    cat: &C,
    n: Label,
    bound: usize,
    failures: &mut Vec<String>,
) -> usize {
    let r = verify_mcat_axioms(cat, &labels(n), bound, 40, 17);
    let families = ["S1", "S2", "S3", "S4", "S5", "S6"];
    let covered = families.iter().all(|a| r.count(a) > 0);
    if !r.all_passed() || !covered {
        failures.push(format!("{} on {n} labels", cat.name()));
    }
    r.checks.len()
}

fn criterion_1(choices: &mut Choices) -> Result<Outcome> {
    let mut failures = Vec::new();
    let mut checks = 0;
    checks += mcat_gate(&FinSets, 5, 5, &mut failures);
    checks += mcat_gate(
        &GFinSets::new(&g("C2"), GSetFilter::All)?,
        4,
        4,
        &mut failures,
    );
    checks += mcat_gate(
        &GFinSets::new(&g("C3"), GSetFilter::Free)?,
        6,
        6,
        &mut failures,
    );
    checks += mcat_gate(
        &GFinSets::new(&g("S3"), GSetFilter::All)?,
        3,
        3,
        &mut failures,
    );
    checks += mcat_gate(&DiscreteMonoid::naturals(), 3, 3, &mut failures);
    checks += mcat_gate(
        &DiscreteMonoid::new(MonoidKind::Naturals(2))?,
        3,
        3,
        &mut failures,
    );
    checks += mcat_gate(
        &DiscreteMonoid::new(MonoidKind::Cyclic(3))?,
        3,
        3,
        &mut failures,
    );
    checks += mcat_gate(
        &DiscreteMonoid::new(MonoidKind::Truncated(2))?,
        3,
        3,
        &mut failures,
    );
    checks += mcat_gate(&OneObjectGroup::new(&g("C2"))?, 2, 1, &mut failures);
    checks += mcat_gate(&OneObjectGroup::new(&g("C3"))?, 2, 1, &mut failures);
    checks += mcat_gate(&FreeParsummable::transitive(&g("C2"))?, 4, 4, &mut failures);
    checks += mcat_gate(&FreeParsummable::transitive(&g("C3"))?, 3, 3, &mut failures);
    checks += mcat_gate(&PermutativePhi::new(SymmetricGroups), 4, 3, &mut failures);
    checks += mcat_gate(&PermutativePhi::new(DiscreteNaturals), 4, 3, &mut failures);
    checks += mcat_gate(&ProjModules::new(2)?, 4, 2, &mut failures);
    checks += mcat_gate(&ProjModules::new(3)?, 3, 2, &mut failures);

    // every bestiary group of order at most 8, on the window of its subgroups
    let mut functor_checks = 0;
    let mut sampled = 0;
    for name in BESTIARY {
        let w = GroupWindow::subgroup_closure(&g(name))?;
        let opts = SwanOptions {
            check_choices: true,
            composition_limit: Some(COMPOSITION_LIMIT),
            ..SwanOptions::default()
        };
        let k = swan_k(&FinSets, &w, &opts)?;
        choices.record(&k);
        functor_checks += k.axioms.checks.len();
        sampled += k.axioms.sampled.len();
        if !functor_gate(&k.axioms, &w) {
            failures.push(format!("K(F) over the subgroups of {name}"));
        }
    }
    let w = window("e,C2,C3,S3");
    for f in [
        GlobalFunctor::free(&g("C2"), &w)?,
        GlobalFunctor::free(&g("S3"), &w)?,
        GlobalFunctor::burnside_b(&g("C2"), &w)?,
    ] {
        let r = verify_axioms(&f)?;
        functor_checks += r.checks.len();
        if !functor_gate(&r, &w) {
            failures.push(f.name.clone());
        }
    }
    Ok(outcome(
        failures.is_empty(),
        format!(
            "{checks} instance checks, {functor_checks} functor checks over {} groups ({sampled} composition triples sampled){}",
            BESTIARY.len(),
            if failures.is_empty() {
                String::new()
            } else {
                format!("; failed: {}", failures.join(", "))
            }
        ),
    ))
}

/// Coefficients of a G-set in the basis of transitive G-sets, read off its
/// marks by back substitution through the table of marks.
fn by_marks(group: &GroupRef, x: &GSet) -> Vec<i64> {
    let classes = group.subgroup_classes();
    let reps: Vec<_> = classes.reps().cloned().collect();
    let tom = table_of_marks(group);
    let marks: Vec<i64> = reps.iter().map(|h| x.marks(h) as i64).collect();
    let mut order: Vec<usize> = (0..reps.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(reps[i].order()));
    let mut coeff = vec![0i64; reps.len()];
    for &h in &order {
        let known: i64 = (0..reps.len())
            .filter(|&k| k != h)
            .map(|k| coeff[k] * tom[[k, h]])
            .sum();
        coeff[h] = (marks[h] - known) / tom[[h, h]];
    }
    coeff
}

fn criterion_2(choices: &mut Choices) -> Result<Outcome> {
    let w = window("e,C2,C3,S3");
    let k = swan_k(&FinSets, &w, &checked())?;
    choices.record(&k);
    let ranks = k.functor.ranks();

    // the orbit type of each atom representative
    let mut matching = Vec::new();
    for p in &k.pi0 {
        let mut row = Vec::new();
        for i in 0..p.rank() {
            let x = p
                .universal()
                .gset_on(&FinSets.support(p.atom_rep(i)))?
                .decompose();
            let class = x
                .mult
                .iter()
                .position(|&c| c == 1)
                .expect("transitive atom");
            row.push(class);
        }
        matching.push(row);
    }

    let atoms = w
        .groups()
        .iter()
        .map(|grp| {
            (0..grp.subgroup_classes().len())
                .map(|c| format!("class {c}"))
                .collect()
        })
        .collect();
    let oracle = GlobalFunctor::tabulate("marks", &w, atoms, |src, tgt, term| {
        let (kg, jg) = (w.group(src), w.group(tgt));
        let (l, alpha) = term.parts(jg, kg);
        let reps: Vec<_> = kg.subgroup_classes().reps().cloned().collect();
        let n = jg.subgroup_classes().len();
        let mut m = Array2::zeros((n, reps.len()));
        for (col, h) in reps.iter().enumerate() {
            let x = GSet::cosets(kg, h).restrict_along(&alpha)?;
            let y = induce(jg, &l, &x)?;
            for (row, c) in by_marks(jg, &y).into_iter().enumerate() {
                m[[row, col]] = c;
            }
        }
        Ok(m)
    })?;
    let iso = compare_functors(&k.functor, &oracle, Some(&matching));
    let burnside = compare_functors(
        &k.functor,
        &GlobalFunctor::burnside_b(&Group::trivial(), &w)?,
        None,
    );
    let passed = ranks == [1, 2, 2, 4]
        && iso.isomorphic
        && burnside.isomorphic
        && functor_gate(&k.axioms, &w);
    Ok(outcome(
        passed,
        format!(
            "ranks {ranks:?}, matrices equal marks oracle: {}, iso to B_e: {}",
            iso.isomorphic, burnside.isomorphic
        ),
    ))
}

fn criterion_3() -> Result<Outcome> {
    let w = window("e,C2");
    let c2 = g("C2");
    let a = GlobalFunctor::free(&c2, &w)?;
    let ranks = a.ranks();
    let mut graph = Vec::new();
    let mut classified = Vec::new();
    for k in w.groups() {
        graph.push(graph_subgroup_class_count(k, &c2)?);
        // distinct classes among the transitive right-free bisets
        let terms = canonical_terms(k, &c2);
        let mut seen: Vec<BisetClass> = Vec::new();
        for t in &terms {
            let class = Biset::from_term(k, &c2, t)?.classify()?;
            if !seen.contains(&class) {
                seen.push(class);
            }
        }
        classified.push(seen.len());
    }
    let passed = ranks == [1, 3]
        && graph == ranks
        && classified == ranks
        && functor_gate(&verify_axioms(&a)?, &w);
    Ok(outcome(
        passed,
        format!("ranks {ranks:?}, graph subgroups {graph:?}, biset classes {classified:?}"),
    ))
}

fn criterion_4(choices: &mut Choices) -> Result<Outcome> {
    let w = window("e,C2");
    let mut parts = Vec::new();
    let mut passed = true;
    for (name, n) in [("C2", 4), ("C3", 6), ("S3", 6)] {
        let gamma = g(name);
        let r = free_generator_iso(&gamma, &w, n)?;
        let cat = GFinSets::new(&gamma, GSetFilter::Free)?;
        let k = swan_k(&cat, &w, &checked())?;
        choices.record(&k);
        passed &= r.passed() && functor_gate(&k.axioms, &w);
        let witness: Vec<String> = r
            .witness
            .iter()
            .flatten()
            .map(|(a, b)| format!("{a}~{b}"))
            .collect();
        parts.push(format!("{name} {:?} [{}]", r.swan_ranks, witness.join(" ")));
    }
    Ok(outcome(passed, parts.join("; ")))
}

fn criterion_5(choices: &mut Choices) -> Result<Outcome> {
    let w = window("e,C2");
    let mut parts = Vec::new();
    let mut passed = true;
    for name in ["C2", "C3", "S3", "C4"] {
        let gamma = g(name);
        let r = splitting_check(&gamma, &w)?;
        let cat = GFinSets::new(&gamma, GSetFilter::All)?;
        let k = swan_k(&cat, &w, &checked())?;
        choices.record(&k);
        passed &= r.passed() && functor_gate(&k.axioms, &w);
        let summands: Vec<String> = r
            .summands
            .iter()
            .map(|(_, wg, _)| format!("A_{wg}"))
            .collect();
        parts.push(format!("{name} {:?} = {}", r.ranks, summands.join("+")));
    }
    Ok(outcome(passed, parts.join("; ")))
}

fn module(q: u8, group: &str, generators: Vec<Vec<Vec<u8>>>) -> Module {
    Module {
        field: q,
        group: group.into(),
        generators,
        dim: None,
    }
}

/// The one-dimensional module over the trivial group.
fn line(q: u8) -> Module {
    Module {
        dim: Some(1),
        ..module(q, "e", vec![])
    }
}

/// Atoms of a projective-module Swan K computation at each window group,
/// named by the first reference module they are isomorphic to.
fn name_atoms(
    k: &SwanK<'_, ProjModules>,
    cat: &ProjModules,
    refs: &[(&str, Module)],
) -> Result<Vec<Vec<String>>> {
    let mut out = Vec::new();
    for p in &k.pi0 {
        let mut row = Vec::new();
        for i in 0..p.rank() {
            let m = cat.to_module(p.universal(), p.atom_rep(i));
            let mut name = "?".to_string();
            for (label, r) in refs {
                if r.group == m.group && r.dim() == m.dim() && module_iso_test(&m, r)? {
                    name = label.to_string();
                    break;
                }
            }
            row.push(name);
        }
        out.push(row);
    }
    Ok(out)
}

fn vector_of(names: &[String], wanted: &[(&str, i64)]) -> Vec<i64> {
    names
        .iter()
        .map(|n| wanted.iter().filter(|(w, _)| w == n).map(|(_, c)| c).sum())
        .collect()
}

fn criterion_6(choices: &mut Choices) -> Result<Outcome> {
    let w = window("e,C2");
    let (e, c2) = (0, 1);
    let column = |m: &Array2<i64>, i: usize| m.column(i).to_vec();

    let f3 = ProjModules::new(3)?;
    let k3 = swan_k(&f3, &w, &checked())?;
    choices.record(&k3);
    let names3 = name_atoms(
        &k3,
        &f3,
        &[
            ("F3", line(3)),
            ("triv", module(3, "C2", vec![vec![vec![1]]])),
            ("sign", module(3, "C2", vec![vec![vec![2]]])),
        ],
    )?;
    // tr along e < C2 and res along e < C2
    let tr_term = (0..w.terms(e, c2).len())
        .find(|&t| w.terms(e, c2)[t].parts(w.group(c2), w.group(e)).0.order() == 1)
        .expect("transfer term");
    let tr3 = k3.functor.matrix(e, c2, tr_term);
    let res3 = k3.functor.matrix(c2, e, 0);
    let ok3 = k3.functor.ranks() == [1, 2]
        && w.terms(c2, e).len() == 1
        && names3[e] == ["F3"]
        && column(tr3, 0) == vector_of(&names3[c2], &[("triv", 1), ("sign", 1)])
        && (0..2).all(|i| column(res3, i) == vector_of(&names3[e], &[("F3", 1)]))
        && functor_gate(&k3.axioms, &w);

    let f2 = ProjModules::new(2)?;
    let k2 = swan_k(&f2, &w, &checked())?;
    choices.record(&k2);
    let names2 = name_atoms(
        &k2,
        &f2,
        &[
            ("F2", line(2)),
            ("triv", module(2, "C2", vec![vec![vec![1]]])),
            (
                "regular",
                module(2, "C2", vec![vec![vec![0, 1], vec![1, 0]]]),
            ),
        ],
    )?;
    let res2 = k2.functor.matrix(c2, e, 0);
    let regular = names2[c2].iter().position(|n| n == "regular");
    let ok2 = k2.functor.ranks() == [1, 2]
        && names2[e] == ["F2"]
        && names2[c2].contains(&"triv".to_string())
        && regular.is_some_and(|r| column(res2, r) == vector_of(&names2[e], &[("F2", 2)]))
        && functor_gate(&k2.axioms, &w);

    Ok(outcome(
        ok3 && ok2,
        format!(
            "F3 atoms {:?} tr[F3] = {:?}; F2 atoms {:?} res columns {:?}",
            names3[c2],
            column(tr3, 0),
            names2[c2],
            (0..2).map(|i| column(res2, i)).collect::<Vec<_>>()
        ),
    ))
}

fn criterion_7() -> Result<Outcome> {
    let mut parts = Vec::new();
    let mut passed = true;
    for name in ["C2", "C3"] {
        let grp = g(name);
        let n = grp.order();
        let fin = saturation_probe(&FinSets, &grp, n, n)?;
        let pm = saturation_probe(&ProjModules::new(2)?, &grp, n, n)?;
        passed &= fin.saturated && pm.saturated;
        parts.push(format!(
            "{name}: F {}/{} F2-mod {}/{}",
            fin.fixed_classes, fin.g_object_classes, pm.fixed_classes, pm.g_object_classes
        ));
    }
    let b = saturation_probe(&OneObjectGroup::new(&g("C2"))?, &g("C2"), 0, 1)?;
    passed &= !b.saturated && b.witness.is_some();
    parts.push(format!("BC2 witness: {}", b.witness.unwrap_or_default()));
    Ok(outcome(passed, parts.join("; ")))
}

fn criterion_8() -> Result<Outcome> {
    let r = phi_of_sigma_equivalence(5, 2024)?;
    let atoms: Vec<String> = r.atoms.iter().map(|(a, b)| format!("{a}->{b}")).collect();
    Ok(outcome(
        r.passed(),
        format!(
            "{} objects, {} hom pairs on {} labels; pi0 at C2: {}",
            r.objects,
            r.hom_pairs,
            r.labels,
            atoms.join(", ")
        ),
    ))
}

fn criterion_9() -> Result<Outcome> {
    let mut stable = 0;
    let mut failures = Vec::new();
    let mut check = |label: String, r: globalk::parsummable::StabilizationReport| {
        if r.stable() {
            stable += 1;
        } else {
            failures.push(format!("{label}: {}", r.obstruction.unwrap_or_default()));
        }
    };
    let plain = SwanOptions::default();
    let small = window("e,C2");
    check(
        "F on e,C2,C3,S3".into(),
        stabilization_check(&FinSets, &window("e,C2,C3,S3"), &plain)?,
    );
    let limited = SwanOptions {
        composition_limit: Some(COMPOSITION_LIMIT),
        ..SwanOptions::default()
    };
    for name in BESTIARY {
        let w = GroupWindow::subgroup_closure(&g(name))?;
        check(
            format!("F over the subgroups of {name}"),
            stabilization_check(&FinSets, &w, &limited)?,
        );
    }
    for q in [2, 3] {
        check(
            format!("F{q}-modules"),
            stabilization_check(&ProjModules::new(q)?, &small, &plain)?,
        );
    }
    for name in ["C2", "C3", "S3"] {
        let cat = GFinSets::new(&g(name), GSetFilter::Free)?;
        check(
            format!("free {name}-sets"),
            stabilization_check(&cat, &small, &plain)?,
        );
    }
    for name in ["C2", "C3", "S3", "C4"] {
        let cat = GFinSets::new(&g(name), GSetFilter::All)?;
        check(
            format!("{name}-sets"),
            stabilization_check(&cat, &small, &plain)?,
        );
    }
    Ok(outcome(
        failures.is_empty(),
        format!(
            "{stable} computations stable at m and m+1{}",
            if failures.is_empty() {
                String::new()
            } else {
                format!("; unstable: {}", failures.join(", "))
            }
        ),
    ))
}

fn criterion_10(choices: &Choices) -> Outcome {
    outcome(
        choices.checked > 0 && choices.agreed == choices.checked,
        format!(
            "{}/{} term evaluations agree across {} computations",
            choices.agreed, choices.checked, choices.runs
        ),
    )
}

fn report(n: usize, title: &str, start: Instant, result: Result<Outcome>) -> bool {
    let secs = start.elapsed().as_secs_f64();
    let (passed, detail) = match result {
        Ok(o) => (o.passed, o.detail),
        Err(e) => (false, format!("error: {e}")),
    };
    println!(
        "criterion {n:>2} {}: {title}: {detail} ({secs:.1}s)",
        if passed { "PASS" } else { "FAIL" }
    );
    passed
}

fn main() -> ExitCode {
    let mut choices = Choices::default();
    let mut all = true;
    let t = Instant::now();
    all &= report(1, "axiom gate", t, criterion_1(&mut choices));
    let t = Instant::now();
    all &= report(2, "Burnside consistency", t, criterion_2(&mut choices));
    let t = Instant::now();
    all &= report(3, "free functor ranks", t, criterion_3());
    let t = Instant::now();
    all &= report(
        4,
        "free generator isomorphism",
        t,
        criterion_4(&mut choices),
    );
    let t = Instant::now();
    all &= report(5, "splitting", t, criterion_5(&mut choices));
    let t = Instant::now();
    all &= report(6, "projective modules", t, criterion_6(&mut choices));
    let t = Instant::now();
    all &= report(7, "saturation", t, criterion_7());
    let t = Instant::now();
    all &= report(8, "Phi(Sigma) equivalence", t, criterion_8());
    let t = Instant::now();
    all &= report(9, "stabilization", t, criterion_9());
    let t = Instant::now();
    all &= report(10, "choice independence", t, Ok(criterion_10(&choices)));
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
