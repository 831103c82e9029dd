//! The symmetric monoidal structure `φ_*(x, y) = φ¹_* x + φ²_* y` derived
//! from a splitting of the labels into two disjoint copies.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::globfun::AxiomReport;

use super::{Injection, Label, Parsummable};

pub type MonoidalReport = AxiomReport;

/// Two injections with disjoint images on `0..range`.
#[derive(Clone, Debug)]
pub struct SplitPair {
    pub first: Injection,
    pub second: Injection,
}

impl SplitPair {
    pub fn new(first: Injection, second: Injection, range: Label) -> Result<SplitPair> {
        let a: BTreeSet<Label> = (0..range).map(|l| first.apply(l)).collect();
        if (0..range).any(|l| a.contains(&second.apply(l))) {
            return Err(Error::ImagesOverlap);
        }
        Ok(SplitPair { first, second })
    }

    /// `n ↦ k n + a` and `n ↦ k n + b`, exact on `0..range`.
    pub fn affine(k: Label, a: Label, b: Label, range: Label) -> Result<SplitPair> {
        let f = Injection::from_vec((0..range).map(|n| k * n + a).collect())?;
        let g = Injection::from_vec((0..range).map(|n| k * n + b).collect())?;
        SplitPair::new(f, g, range)
    }

    /// `n ↦ 2n` and `n ↦ 2n + 1`.
    pub fn even_odd(range: Label) -> SplitPair {
        SplitPair::affine(2, 0, 1, range).expect("even and odd labels are disjoint")
    }
}

struct Derived<'c, C: Parsummable + ?Sized> {
    cat: &'c C,
    phi: SplitPair,
}

impl<'c, C: Parsummable + ?Sized> Derived<'c, C> {
    fn obj(&self, x: &C::Obj, y: &C::Obj) -> Result<C::Obj> {
        self.cat.sum(
            &self.cat.act_obj(&self.phi.first, x),
            &self.cat.act_obj(&self.phi.second, y),
        )
    }

    fn mor(&self, f: &C::Mor, g: &C::Mor) -> Result<C::Mor> {
        self.cat.sum_mor(
            &self.cat.act_mor(&self.phi.first, f),
            &self.cat.act_mor(&self.phi.second, g),
        )
    }

    fn id(&self, x: &C::Obj) -> C::Mor {
        self.cat.identity(x)
    }

    fn compose(&self, fs: &[&C::Mor]) -> C::Mor {
        let mut it = fs.iter().rev();
        let mut acc = (*it.next().expect("nonempty")).clone();
        for f in it {
            acc = self.cat.compose(f, &acc);
        }
        acc
    }

    fn assoc(&self, x: &C::Obj, y: &C::Obj, z: &C::Obj) -> Result<C::Mor> {
        let (p1, p2) = (&self.phi.first, &self.phi.second);
        let c = self.cat;
        let a = c.comparison(p1, &p1.after(p1), x);
        let b = c.comparison(&p2.after(p1), &p1.after(p2), y);
        let d = c.comparison(&p2.after(p2), p2, z);
        c.sum_mor(&c.sum_mor(&a, &b)?, &d)
    }

    fn symmetry(&self, x: &C::Obj, y: &C::Obj) -> Result<C::Mor> {
        let (p1, p2) = (&self.phi.first, &self.phi.second);
        let c = self.cat;
        c.sum_mor(&c.comparison(p2, p1, x), &c.comparison(p1, p2, y))
    }

    /// `φ_*(0, x) → x`.
    fn left_unit(&self, x: &C::Obj) -> C::Mor {
        self.cat
            .comparison(&Injection::identity(), &self.phi.second, x)
    }

    /// `φ_*(x, 0) → x`.
    fn right_unit(&self, x: &C::Obj) -> C::Mor {
        self.cat
            .comparison(&Injection::identity(), &self.phi.first, x)
    }

    /// `x + y → φ_*(x, y)` for disjointly supported `x`, `y`.
    fn sharp(&self, x: &C::Obj, y: &C::Obj) -> Result<C::Mor> {
        self.cat.sum_mor(
            &self.cat.transport(&self.phi.first, x),
            &self.cat.transport(&self.phi.second, y),
        )
    }
}

fn disjoint(a: &[Label], b: &[Label]) -> bool {
    let s: BTreeSet<&Label> = a.iter().collect();
    b.iter().all(|l| !s.contains(l))
}

/// Verifies pentagon, hexagon, symmetry involution, unit and triangle laws
/// for `φ_*` on all tuples of `objects`; that `[ψ, φ]` is a natural monoidal
/// isomorphism from `φ_*` to `ψ_*`; and that `φ♯` is compatible with the
/// intrinsic sum on disjointly supported tuples.
pub fn derived_monoidal<C: Parsummable + ?Sized>(
    cat: &C,
    objects: &[C::Obj],
    phi: SplitPair,
    psi: SplitPair,
) -> Result<MonoidalReport> {
    let mut report = MonoidalReport::default();
    let d = Derived {
        cat,
        phi: phi.clone(),
    };
    let e = Derived {
        cat,
        phi: psi.clone(),
    };
    let zero = cat.zero();
    let name = |x: &C::Obj| cat.describe(x);

    for x in objects {
        let ok = cat.target(&d.right_unit(x)) == *x
            && cat.target(&d.left_unit(x)) == *x
            && cat.source(&d.right_unit(x)) == d.obj(x, &zero)?
            && cat.source(&d.left_unit(x)) == d.obj(&zero, x)?;
        report.push("unit", name(x), ok);
    }

    for x in objects {
        for y in objects {
            let t = d.symmetry(x, y)?;
            let back = d.symmetry(y, x)?;
            let xy = d.obj(x, y)?;
            report.push(
                "symmetry",
                format!("{} , {}", name(x), name(y)),
                cat.source(&t) == xy
                    && cat.target(&t) == d.obj(y, x)?
                    && cat.compose(&back, &t) == d.id(&xy),
            );
            // triangle: (id ⊗ λ) ∘ a_{x,0,y} = ρ ⊗ id
            let lhs = cat.compose(&d.mor(&d.id(x), &d.left_unit(y))?, &d.assoc(x, &zero, y)?);
            let rhs = d.mor(&d.right_unit(x), &d.id(y))?;
            report.push("triangle", format!("{} , {}", name(x), name(y)), lhs == rhs);

            // comparison [ψ, φ] : φ_*(x, y) → ψ_*(x, y)
            let mu = comparison(cat, &phi, &psi, x, y)?;
            report.push(
                "comparison",
                format!("{} , {}", name(x), name(y)),
                cat.source(&mu) == xy
                    && cat.target(&mu) == e.obj(x, y)?
                    && cat.inverse(&mu).is_some(),
            );
            let sym = cat.compose(&comparison(cat, &phi, &psi, y, x)?, &t)
                == cat.compose(&e.symmetry(x, y)?, &mu);
            report.push(
                "comparison-symmetry",
                format!("{} , {}", name(x), name(y)),
                sym,
            );

            // naturality in automorphisms
            for f in cat.hom_set(x, x).into_iter().take(2) {
                for g in cat.hom_set(y, y).into_iter().take(2) {
                    let fg = d.mor(&f, &g)?;
                    let gf = d.mor(&g, &f)?;
                    report.push(
                        "naturality",
                        format!("τ at {} , {}", name(x), name(y)),
                        cat.compose(&t, &fg) == cat.compose(&gf, &t),
                    );
                    report.push(
                        "naturality",
                        format!("[ψ,φ] at {} , {}", name(x), name(y)),
                        cat.compose(&mu, &fg) == cat.compose(&e.mor(&f, &g)?, &mu),
                    );
                }
            }
        }
    }

    for x in objects {
        for y in objects {
            for z in objects {
                let ctx = format!("{} , {} , {}", name(x), name(y), name(z));
                // hexagon
                let yz = d.obj(y, z)?;
                let lhs =
                    d.compose(&[&d.assoc(y, z, x)?, &d.symmetry(x, &yz)?, &d.assoc(x, y, z)?]);
                let rhs = d.compose(&[
                    &d.mor(&d.id(y), &d.symmetry(x, z)?)?,
                    &d.assoc(y, x, z)?,
                    &d.mor(&d.symmetry(x, y)?, &d.id(z))?,
                ]);
                report.push("hexagon", ctx.clone(), lhs == rhs);

                // [ψ, φ] respects associators
                let mu_xy = comparison(cat, &phi, &psi, x, y)?;
                let mu_yz = comparison(cat, &phi, &psi, y, z)?;
                let lhs = d.compose(&[
                    &comparison(cat, &phi, &psi, x, &e.obj(y, z)?)?,
                    &d.mor(&d.id(x), &mu_yz)?,
                    &d.assoc(x, y, z)?,
                ]);
                let rhs = d.compose(&[
                    &e.assoc(x, y, z)?,
                    &comparison(cat, &phi, &psi, &e.obj(x, y)?, z)?,
                    &d.mor(&mu_xy, &d.id(z))?,
                ]);
                report.push("comparison-monoidal", ctx.clone(), lhs == rhs);

                // φ♯ against the intrinsic sum
                let (sx, sy, sz) = (cat.support(x), cat.support(y), cat.support(z));
                if disjoint(&sx, &sy) && disjoint(&sx, &sz) && disjoint(&sy, &sz) {
                    let x_y = cat.sum(x, y)?;
                    let y_z = cat.sum(y, z)?;
                    let lhs = d.compose(&[
                        &d.assoc(x, y, z)?,
                        &d.mor(&d.sharp(x, y)?, &d.id(z))?,
                        &d.sharp(&x_y, z)?,
                    ]);
                    let rhs = d.compose(&[&d.mor(&d.id(x), &d.sharp(y, z)?)?, &d.sharp(x, &y_z)?]);
                    report.push("sharp-associative", ctx.clone(), lhs == rhs);
                }
            }
        }
    }

    for x in objects {
        for y in objects {
            let (sx, sy) = (cat.support(x), cat.support(y));
            if !disjoint(&sx, &sy) {
                continue;
            }
            let ctx = format!("{} , {}", name(x), name(y));
            let s = d.sharp(x, y)?;
            let ok = cat.inverse(&s).is_some()
                && cat.compose(&d.symmetry(x, y)?, &s) == d.sharp(y, x)?
                && cat.compose(&d.right_unit(x), &d.sharp(x, &zero)?) == d.id(x);
            report.push("sharp", ctx, ok);
        }
    }

    // pentagon on every quadruple
    for w in objects {
        for x in objects {
            for y in objects {
                for z in objects {
                    let wx = d.obj(w, x)?;
                    let yz = d.obj(y, z)?;
                    let xy = d.obj(x, y)?;
                    let lhs = cat.compose(&d.assoc(w, x, &yz)?, &d.assoc(&wx, y, z)?);
                    let rhs = d.compose(&[
                        &d.mor(&d.id(w), &d.assoc(x, y, z)?)?,
                        &d.assoc(w, &xy, z)?,
                        &d.mor(&d.assoc(w, x, y)?, &d.id(z))?,
                    ]);
                    report.push(
                        "pentagon",
                        format!("{} , {} , {} , {}", name(w), name(x), name(y), name(z)),
                        lhs == rhs,
                    );
                }
            }
        }
    }
    Ok(report)
}

/// `[ψ, φ]_{x,y} = [ψ¹, φ¹]^x + [ψ², φ²]^y : φ_*(x, y) → ψ_*(x, y)`.
fn comparison<C: Parsummable + ?Sized>(
    cat: &C,
    phi: &SplitPair,
    psi: &SplitPair,
    x: &C::Obj,
    y: &C::Obj,
) -> Result<C::Mor> {
    cat.sum_mor(
        &cat.comparison(&psi.first, &phi.first, x),
        &cat.comparison(&psi.second, &phi.second, y),
    )
}
