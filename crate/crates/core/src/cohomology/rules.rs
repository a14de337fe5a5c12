//! The individual closed forms and reductions, in dispatch order.

use crate::abgroup::{FgAbGroup, GroupHom};
use crate::families::{Atom, CatalogExpr, SubsetSpec};
use crate::grading::Grading;
use crate::mackey::MackeyFunctor;

use super::{Engine, Outcome, Status, TraceEntry};

/// A rule either declines or produces an outcome.
pub(crate) type Rule = fn(&Engine, u64, &Grading, bool) -> Option<Outcome>;

/// Rule ids with the statement each one implements, in dispatch order.
pub(crate) const RULES: &[(&str, &str, Rule)] = &[
    ("zero-grading", "degree zero with constant coefficients", zero_grading),
    ("trivial-group", "non-equivariant cohomology of a point", trivial_group),
    ("phi-reduction", "same-sign fixed dimensions reduce to a quotient group", same_sign),
    ("cp-formula", "closed formula for C_p", cp_formula),
    ("cp2-table", "closed table for C_{p^2}", cp2_table),
    ("zero-range", "vanishing when fixed dimensions are at most one", zero_range),
    ("large-fixed", "large C_p-fixed dimension table", large_fixed),
    ("dim-zero-free", "torsion-free answer in dimension zero", dim_zero_free),
    ("even-positive", "even gradings positive away from C_p", even_positive),
    ("nonsplit-c3", "non-split answer for C_{p^3} at |α^{C_p}| = 4", nonsplit_c3),
    ("anderson-flip", "Anderson duality H^α ≅ Ext_L(H^{3-λ0-α})", anderson_flip),
];

fn entry(rule: impl Into<String>, basis: &str, subquery: Option<String>) -> TraceEntry {
    TraceEntry {
        rule: rule.into(),
        basis: basis.into(),
        subquery,
    }
}

fn ss(n: usize, members: impl IntoIterator<Item = usize>) -> SubsetSpec {
    SubsetSpec::new(n, members).expect("indices within 1..n")
}

/// Outcome built directly from a catalog expression.
fn named(p: u64, n: usize, atoms: Vec<Atom>, rule: String, basis: &str) -> Outcome {
    let expr = CatalogExpr::new(p, n, atoms);
    let functor = expr.build().expect("catalog sums are valid");
    Outcome {
        functor,
        expr: Some(expr),
        trace: vec![entry(rule, basis, None)],
    }
}

fn z(n: usize) -> Atom {
    Atom::Z(SubsetSpec::empty(n))
}

fn zstar(n: usize) -> Atom {
    Atom::Z(SubsetSpec::full(n))
}

/// `B_{T,∅}`.
fn b(n: usize, t: impl IntoIterator<Item = usize>) -> Atom {
    Atom::B(ss(n, t), SubsetSpec::empty(n))
}

fn zero_grading(_: &Engine, p: u64, a: &Grading, _: bool) -> Option<Outcome> {
    let n = a.n();
    a.is_zero()
        .then(|| named(p, n, vec![z(n)], "zero-grading".into(), RULES[0].1))
}

fn trivial_group(_: &Engine, p: u64, a: &Grading, _: bool) -> Option<Outcome> {
    if a.n() != 0 {
        return None;
    }
    let atoms = if a.c() == 0 { vec![z(0)] } else { vec![] };
    Some(named(p, 0, atoms, format!("trivial-group(c={})", a.c()), RULES[1].1))
}

/// Inflates a recursive result along `C_{p^n} -> C_{p^{n-m}}`.
fn inflate(engine: &Engine, p: u64, a: &Grading, m: usize) -> Option<(Outcome, String)> {
    let sub = a.fixed_grading(m);
    let query = format!("C_{p}^{}: {sub}", a.n() - m);
    let r = engine.compute_inner(p, &sub, true);
    let Status::Known(f) = &r.status else {
        return None;
    };
    let functor = f.phi_pullback(m).expect("inflation of a valid functor");
    let expr = r.expr.as_ref().map(|e| shift_expr(e, m));
    Some((
        Outcome {
            functor,
            expr,
            trace: r.trace.clone(),
        },
        query,
    ))
}

/// Name of the inflation of a named functor: indices move up by `m`.
fn shift_expr(e: &CatalogExpr, m: usize) -> CatalogExpr {
    let atoms = e.atoms().iter().map(|a| match a {
        Atom::Z(s) => Atom::Z(s.shifted(m)),
        Atom::B(t, s) => Atom::B(t.shifted(m), s.shifted(m)),
        other => other.clone(),
    });
    CatalogExpr::new(e.p, e.n + m, atoms)
}

fn same_sign(engine: &Engine, p: u64, a: &Grading, _: bool) -> Option<Outcome> {
    let n = a.n();
    let d = a.fixed_dims();
    let sign = |x: i64| x.signum();
    let m = (1..=n)
        .rev()
        .find(|&m| d[..=m].iter().all(|&x| sign(x) == sign(d[0])))?;
    let (mut out, query) = inflate(engine, p, a, m)?;
    out.trace.insert(
        0,
        entry(format!("phi-reduction({m})"), RULES[2].1, Some(query)),
    );
    Some(out)
}

fn cp_formula(_: &Engine, p: u64, a: &Grading, _: bool) -> Option<Outcome> {
    if a.n() != 1 {
        return None;
    }
    let (d0, d1) = (a.fixed_dim(0), a.fixed_dim(1));
    let even = a.is_even();
    let (atoms, case) = if d0 == 0 && d1 <= 0 {
        (vec![z(1)], "|α|=0,|α^G|<=0")
    } else if d0 == 0 {
        (vec![zstar(1)], "|α|=0,|α^G|>0")
    } else if d0 > 0 && d1 <= 0 && even {
        (vec![b(1, [1])], "|α|>0,|α^G|<=0,even")
    } else if d0 < 0 && d1 >= 3 && !even {
        (vec![b(1, [1])], "|α|<0,|α^G|>=3,odd")
    } else {
        (vec![], "otherwise")
    };
    Some(named(p, 1, atoms, format!("cp-formula:{case}"), RULES[3].1))
}

/// The `C_{p^2}` table, guarded on `(|α|, |α^{C_p}|, |α^{C_{p^2}}|)`.
pub(crate) fn cp2_atoms(d: i64, f: i64, g: i64) -> (Vec<Atom>, &'static str) {
    let n = 2;
    let b2 = || b(n, [2]);
    let bb = || b(n, [1, 2]);
    let even = d.rem_euclid(2) == 0;
    if d == 0 {
        return match (f, g) {
            (f, g) if f <= 0 && g <= 0 => (vec![z(n)], "zero,fp1<=0,fp2<=0"),
            (f, g) if f > 0 && g > 0 => (vec![zstar(n)], "zero,fp1>0,fp2>0"),
            (f, _) if f >= 4 => (vec![b2(), zstar(n)], "zero,fp1>=4,fp2<=0"),
            (2, _) => (vec![Atom::Z(ss(n, [1]))], "zero,fp1=2,fp2<=0"),
            (0, _) => (vec![Atom::Z(ss(n, [2]))], "zero,fp1=0,fp2>0"),
            _ => (vec![z(n)], "zero,fp1<0,fp2>0"),
        };
    }
    match (d > 0, even) {
        (true, true) => match (f, g) {
            (f, g) if f > 0 && g > 0 => (vec![], "evenpos,fp1>0,fp2>0"),
            (f, _) if f > 0 => (vec![b2()], "evenpos,fp1>0,fp2<=0"),
            (0, g) if g <= 0 => (vec![bb()], "evenpos,fp1=0,fp2<=0"),
            (0, _) => (
                vec![Atom::B(ss(n, [1, 2]), ss(n, [2]))],
                "evenpos,fp1=0,fp2>0",
            ),
            (_, g) if g > 0 => (vec![bb()], "evenpos,fp1<0,fp2>0"),
            _ => (vec![bb()], "evenpos,fp1<0,fp2<=0"),
        },
        (false, false) => match (f, g) {
            (f, g) if f <= 1 && g <= 1 => (vec![], "oddneg,fp1<=1,fp2<=1"),
            (f, _) if f <= 1 => (vec![b2()], "oddneg,fp1<=1,fp2>1"),
            (3, g) if g > 1 => (vec![bb()], "oddneg,fp1=3,fp2>1"),
            (3, _) => (vec![b(n, [1])], "oddneg,fp1=3,fp2<=1"),
            _ => (vec![bb()], "oddneg,fp1>=5"),
        },
        (false, true) => {
            if f >= 4 && g <= 0 {
                (vec![b2()], "evenneg,fp1>=4,fp2<=0")
            } else {
                (vec![], "evenneg,otherwise")
            }
        }
        (true, false) => {
            if f <= -1 && g > 1 {
                (vec![b2()], "oddpos,fp1<=-1,fp2>1")
            } else {
                (vec![], "oddpos,otherwise")
            }
        }
    }
}

fn cp2_table(_: &Engine, p: u64, a: &Grading, _: bool) -> Option<Outcome> {
    if a.n() != 2 {
        return None;
    }
    let (atoms, row) = cp2_atoms(a.fixed_dim(0), a.fixed_dim(1), a.fixed_dim(2));
    Some(named(p, 2, atoms, format!("cp2-table:{row}"), RULES[4].1))
}

fn zero_range(_: &Engine, p: u64, a: &Grading, _: bool) -> Option<Outcome> {
    let n = a.n();
    let d = a.fixed_dims();
    // |α| = 0 is excluded: the underlying level is then Z
    if d[0] != 0 && d.iter().all(|&x| x <= 1) {
        return Some(named(p, n, vec![], "zero-range:all<=1".into(), RULES[5].1));
    }
    // odd α: below 1 at C_{p^m} forces at most 1 at every larger subgroup
    let odd_ok = !a.is_even()
        && (0..=n).all(|m| d[m] >= 1 || d[m..].iter().all(|&x| x <= 1));
    odd_ok.then(|| named(p, n, vec![], "zero-range:odd".into(), RULES[5].1))
}

fn large_fixed(engine: &Engine, p: u64, a: &Grading, _: bool) -> Option<Outcome> {
    let n = a.n();
    if n < 2 {
        return None;
    }
    let ni = n as i64;
    let (d, f) = (a.fixed_dim(0), a.fixed_dim(1));
    let all = || (1..=n).collect::<Vec<_>>();
    let (extra, row): (Vec<Atom>, &str) = if d.rem_euclid(2) == 0 {
        if f <= -2 * ni + 2 {
            match d.signum() {
                1 => (vec![b(n, all())], "even,|α|>0,low"),
                0 => (vec![z(n)], "even,|α|=0,low"),
                _ => (vec![], "even,|α|<0,low"),
            }
        } else if f >= 2 * ni {
            if d == 0 {
                (vec![zstar(n)], "even,|α|=0,high")
            } else {
                (vec![], "even,|α|!=0,high")
            }
        } else {
            return None;
        }
    } else if f <= -2 * ni + 3 {
        (vec![], if d < 0 { "odd,|α|<0,low" } else { "odd,|α|>0,low" })
    } else if f >= 2 * ni + 1 {
        if d > 0 {
            (vec![], "odd,|α|>0,high")
        } else {
            (vec![b(n, all())], "odd,|α|<0,high")
        }
    } else {
        return None;
    };
    let (phi, query) = inflate(engine, p, a, 1)?;
    let mut functor = phi.functor;
    let mut atoms: Vec<Atom> = phi.expr.as_ref().map(|e| e.atoms().to_vec()).unwrap_or_default();
    for x in &extra {
        let part = x.build(p, n).expect("catalog atom");
        functor = part.direct_sum(&functor).expect("same group");
        atoms.push(x.clone());
    }
    let expr = phi.expr.map(|_| CatalogExpr::new(p, n, atoms));
    let mut trace = vec![entry(format!("large-fixed:{row}"), RULES[6].1, Some(query))];
    trace.extend(phi.trace);
    Some(Outcome {
        functor,
        expr,
        trace,
    })
}

fn dim_zero_free(_: &Engine, p: u64, a: &Grading, _: bool) -> Option<Outcome> {
    let n = a.n();
    if n < 2 || a.fixed_dim(0) != 0 || (2..=n).any(|k| a.fixed_dim(k) <= 0) {
        return None;
    }
    let (f, ni) = (a.fixed_dim(1), n as i64);
    let (atom, row) = if f >= 2 {
        (zstar(n), "fp1>=2".to_string())
    } else if f <= 2 - 2 * ni {
        (z(n), "fp1<=2-2n".to_string())
    } else {
        let j = (1 - f / 2) as usize;
        (Atom::Z(SubsetSpec::interval(n, j + 1, n)), format!("j={j}"))
    };
    Some(named(p, n, vec![atom], format!("dim-zero-free:{row}"), RULES[7].1))
}

fn even_positive(_: &Engine, p: u64, a: &Grading, _: bool) -> Option<Outcome> {
    let n = a.n();
    if n < 2 || !a.is_even() || (0..=n).any(|m| m != 1 && a.fixed_dim(m) <= 0) {
        return None;
    }
    let (f, ni) = (a.fixed_dim(1), n as i64);
    let full = SubsetSpec::full(n);
    let (atoms, row) = if f >= 2 {
        (vec![], "fp1>=2".to_string())
    } else if f <= 2 - 2 * ni {
        (vec![Atom::B(full, SubsetSpec::empty(n))], "fp1<=2-2n".to_string())
    } else {
        let j = (1 - f / 2) as usize;
        (
            vec![Atom::B(full, SubsetSpec::interval(n, j + 1, n))],
            format!("j={j}"),
        )
    };
    Some(named(p, n, atoms, format!("even-positive:{row}"), RULES[8].1))
}

fn nonsplit_c3(_: &Engine, p: u64, a: &Grading, _: bool) -> Option<Outcome> {
    let d = a.fixed_dims();
    if a.n() != 3 || d[0] != 0 || d[1] != 4 || d[2] > 0 || d[3] > 0 {
        return None;
    }
    Some(Outcome {
        functor: nonsplit_diagram(p),
        expr: None,
        trace: vec![entry("nonsplit-c3", RULES[9].1, None)],
    })
}

/// The non-split `C_{p^3}` answer: `Z`, `Z`, `Z ⊕ Z/p`, `Z ⊕ Z/p` bottom to
/// top.
pub fn nonsplit_diagram(p: u64) -> MackeyFunctor {
    let pp = p as i64;
    let z = FgAbGroup::free(1);
    let zt = FgAbGroup::new(1, vec![p.into()]).expect("Z + Z/p");
    let hom = |s: &FgAbGroup, t: &FgAbGroup, rows: &[&[i64]]| {
        GroupHom::from_i64(s.clone(), t.clone(), rows).expect("well defined")
    };
    let res = vec![
        hom(&z, &z, &[&[pp]]),
        hom(&zt, &z, &[&[pp, 0]]),
        hom(&zt, &zt, &[&[1, 0], &[1, 0]]),
    ];
    let tr = vec![
        hom(&z, &z, &[&[1]]),
        hom(&z, &zt, &[&[1], &[0]]),
        hom(&zt, &zt, &[&[pp, 0], &[-1, 1]]),
    ];
    MackeyFunctor::new(p, vec![z.clone(), z, zt.clone(), zt], res, tr)
        .expect("the non-split diagram satisfies the axioms")
}

fn anderson_flip(engine: &Engine, p: u64, a: &Grading, flip: bool) -> Option<Outcome> {
    if !flip || a.fixed_dim(0) == 0 {
        return None;
    }
    let dual = a.anderson_dual();
    let r = engine.compute_inner(p, &dual, false);
    let Status::Known(f) = &r.status else {
        return None;
    };
    let functor = f.ext_dual().expect("Ext_L of a valid functor");
    let expr = r.expr.as_ref().map(|e| {
        let n = e.n;
        let atoms = e.atoms().iter().filter_map(|x| match x {
            // Ext_L(B_{T,S}) = B_{S^c,T^c}; free atoms contribute nothing
            Atom::B(t, s) => Some(Atom::B(s.complement(), t.complement())),
            _ => None,
        });
        CatalogExpr::new(e.p, n, atoms.collect::<Vec<_>>())
    });
    let expr = expr.filter(|_| {
        r.expr
            .as_ref()
            .is_some_and(|e| e.atoms().iter().all(|x| !matches!(x, Atom::T)))
    });
    let mut trace = vec![entry(
        "anderson-flip",
        RULES[10].1,
        Some(format!("C_{p}^{}: {dual}", a.n())),
    )];
    trace.extend(r.trace.iter().cloned());
    Some(Outcome {
        functor,
        expr,
        trace,
    })
}
