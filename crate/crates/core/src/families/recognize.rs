//! Naming a Mackey functor as a direct sum of `Z_S` and `B_{T,S}` atoms.

use std::collections::{BTreeSet, HashMap, HashSet};

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::abgroup::{FgAbGroup, Int};
use crate::mackey::{invariants, iso_test, IsoConfig, IsoVerdict, MackeyFunctor, MackeyHom};

use super::{Atom, CatalogExpr, SubsetSpec};

/// A candidate sum that was ruled out, with the reason.
#[derive(Clone, Debug)]
pub struct Rejection {
    pub expr: CatalogExpr,
    pub reason: String,
    /// True when a distinguishing invariant (or exhausted finite search)
    /// proves non-isomorphism; false when the search merely gave up.
    pub proven: bool,
}

#[derive(Clone, Debug)]
pub struct Recognition {
    pub found: Option<(CatalogExpr, MackeyHom)>,
    /// Every levelwise-compatible candidate tried before `found`.
    pub rejected: Vec<Rejection>,
}

/// The catalog name of `m`, if it is isomorphic to a sum of `Z_S` and
/// `B_{T,S}` atoms.
pub fn recognize(m: &MackeyFunctor) -> Option<CatalogExpr> {
    recognize_detailed(m).found.map(|(e, _)| e)
}

/// As [`recognize`], also reporting each rejected candidate.
pub fn recognize_detailed(m: &MackeyFunctor) -> Recognition {
    let (p, n) = (m.p(), m.n());
    let mut out = Recognition {
        found: None,
        rejected: Vec::new(),
    };
    if m.is_zero() {
        out.found = Some((CatalogExpr::zero(p, n), MackeyHom::zero(m, m)));
        return out;
    }
    let Some(shape) = Shape::of(m) else {
        return out;
    };
    let target_inv: Vec<FgAbGroup> = invariants(m).into_iter().map(|i| i.group).collect();
    let names: Vec<String> = invariants(m).into_iter().map(|i| i.name).collect();
    let mut atom_inv: HashMap<Atom, Vec<FgAbGroup>> = HashMap::new();
    let mut seen = HashSet::new();

    let z_choices = multisets(&SubsetSpec::all(n), shape.rank);
    let b_choices = b_sums(n, &shape.exponents);
    for zs in &z_choices {
        for bs in &b_choices {
            let atoms = zs.iter().cloned().map(Atom::Z).chain(bs.iter().cloned());
            let expr = CatalogExpr::new(p, n, atoms);
            if !seen.insert(expr.clone()) {
                continue;
            }
            let mut total: Option<Vec<FgAbGroup>> = None;
            for a in expr.atoms() {
                let inv = atom_inv.entry(a.clone()).or_insert_with(|| {
                    let f = a.build(p, n).expect("catalog atoms are valid");
                    invariants(&f).into_iter().map(|i| i.group).collect()
                });
                total = Some(match total {
                    None => inv.clone(),
                    Some(t) => t
                        .iter()
                        .zip(inv.iter())
                        .map(|(x, y)| FgAbGroup::direct_sum(x, y).0)
                        .collect(),
                });
            }
            let total = total.unwrap_or_default();
            if let Some(i) = (0..total.len()).find(|&i| total[i] != target_inv[i]) {
                out.rejected.push(Rejection {
                    reason: format!("{}: {} vs {}", names[i], target_inv[i], total[i]),
                    expr,
                    proven: true,
                });
                continue;
            }
            let built = expr.build().expect("catalog sums are valid");
            match iso_test(m, &built, &IsoConfig::default()) {
                Ok(IsoVerdict::Iso { forward, .. }) => {
                    out.found = Some((expr, forward));
                    return out;
                }
                Ok(IsoVerdict::NotIso { reason }) => out.rejected.push(Rejection {
                    expr,
                    reason,
                    proven: true,
                }),
                Ok(IsoVerdict::Unknown { reason }) => out.rejected.push(Rejection {
                    expr,
                    reason,
                    proven: false,
                }),
                Err(e) => out.rejected.push(Rejection {
                    expr,
                    reason: e.to_string(),
                    proven: false,
                }),
            }
        }
    }
    out
}

/// Levelwise rank and `p`-power torsion exponents.
struct Shape {
    rank: usize,
    exponents: Vec<Vec<u32>>,
}

impl Shape {
    fn of(m: &MackeyFunctor) -> Option<Self> {
        let rank = m.level(0).rank();
        let p = m.p_int();
        let mut exponents = Vec::new();
        for g in m.levels() {
            if g.rank() != rank {
                return None;
            }
            let mut ex = Vec::new();
            for d in g.torsion() {
                ex.push(p_exponent(d, &p)?);
            }
            ex.sort_unstable_by(|a, b| b.cmp(a));
            exponents.push(ex);
        }
        if !exponents[0].is_empty() {
            return None;
        }
        Some(Self { rank, exponents })
    }
}

fn p_exponent(d: &Int, p: &Int) -> Option<u32> {
    let mut d = d.clone();
    let mut e = 0;
    while !d.is_one() {
        let (q, r) = d.div_rem(p);
        if !r.is_zero() {
            return None;
        }
        d = q;
        e += 1;
    }
    Some(e)
}

/// Multisets of size `k` drawn from `items`.
fn multisets<T: Clone>(items: &[T], k: usize) -> Vec<Vec<T>> {
    fn go<T: Clone>(items: &[T], k: usize, start: usize, cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i].clone());
            go(items, k, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, k, 0, &mut Vec::new(), &mut out);
    out
}

/// All sums of `B` atoms whose levelwise torsion matches `exponents`.
fn b_sums(n: usize, exponents: &[Vec<u32>]) -> Vec<Vec<Atom>> {
    let mut out = Vec::new();
    for chains in chain_decompositions(exponents) {
        // each chain fixes T∖S; S ranges over indices past its first step
        let options: Vec<Vec<Atom>> = chains
            .iter()
            .map(|c| {
                let d: BTreeSet<usize> = (1..=n).filter(|&k| c[k] > c[k - 1]).collect();
                let first = *d.iter().next().expect("chains are nonzero at the top");
                let free: Vec<usize> = (first + 1..=n).filter(|k| !d.contains(k)).collect();
                let dset = SubsetSpec::new(n, d.iter().copied()).unwrap();
                (0u32..1 << free.len())
                    .map(|mask| {
                        let s = SubsetSpec::new(
                            n,
                            free.iter()
                                .enumerate()
                                .filter(|(i, _)| mask >> i & 1 == 1)
                                .map(|(_, &k)| k),
                        )
                        .unwrap();
                        Atom::B(dset.union(&s), s)
                    })
                    .collect()
            })
            .collect();
        let mut acc: Vec<Vec<Atom>> = vec![Vec::new()];
        for opts in &options {
            acc = acc
                .into_iter()
                .flat_map(|prefix| {
                    opts.iter().map(move |a| {
                        let mut v = prefix.clone();
                        v.push(a.clone());
                        v
                    })
                })
                .collect();
        }
        out.extend(acc);
    }
    out
}

/// Ways to split the levelwise exponent multisets into chains
/// `0 = e_0 <= e_1 <= ... <= e_n` with unit steps, one chain per torsion
/// summand at the top.
fn chain_decompositions(exponents: &[Vec<u32>]) -> Vec<Vec<Vec<u32>>> {
    let n = exponents.len() - 1;
    let b = exponents[n].len();
    // chains built top-down; state holds each chain's exponents from the top
    let mut states: BTreeSet<Vec<Vec<u32>>> = BTreeSet::new();
    states.insert(exponents[n].iter().map(|&e| vec![e]).collect());
    for k in (0..n).rev() {
        let want = &exponents[k];
        let mut next = BTreeSet::new();
        for st in &states {
            for mask in 0u32..1 << b {
                let mut ok = true;
                let mut cand = st.clone();
                for (i, ch) in cand.iter_mut().enumerate() {
                    let e = *ch.last().unwrap();
                    let step = mask >> i & 1;
                    if step == 1 && e == 0 {
                        ok = false;
                        break;
                    }
                    ch.push(e - step);
                }
                if !ok {
                    continue;
                }
                let mut got: Vec<u32> = cand.iter().map(|c| *c.last().unwrap()).filter(|&e| e > 0).collect();
                got.sort_unstable_by(|a, b| b.cmp(a));
                if &got == want {
                    cand.sort();
                    next.insert(cand);
                }
            }
        }
        states = next;
    }
    states
        .into_iter()
        .map(|st| {
            st.into_iter()
                .map(|mut c| {
                    c.reverse();
                    c
                })
                .collect()
        })
        .collect()
}
