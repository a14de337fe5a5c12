//! Isomorphism testing: cheap invariants first, then a bounded search over
//! `Hom(M, N)`.

use num_traits::{One, Signed, ToPrimitive};

use crate::abgroup::{FgAbGroup, GroupHom, Int, IntMatrix};

use super::hom::solve_combination;
use super::{mackey_hom_group, MackeyError, MackeyFunctor, MackeyHom};

/// A named isomorphism invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invariant {
    pub name: String,
    pub group: FgAbGroup,
}

/// Levels, plus kernels and cokernels of every composite restriction and
/// transfer between two levels.
pub fn invariants(m: &MackeyFunctor) -> Vec<Invariant> {
    let mut out = Vec::new();
    for k in 0..=m.n() {
        out.push(Invariant {
            name: format!("level {k}"),
            group: m.level(k).clone(),
        });
    }
    for j in 1..=m.n() {
        for i in 0..j {
            let r = m.res_composite(j, i);
            let t = m.tr_composite(i, j);
            for (name, h) in [(format!("res {j}->{i}"), &r), (format!("tr {i}->{j}"), &t)] {
                out.push(Invariant {
                    name: format!("ker {name}"),
                    group: h.kernel().group,
                });
                out.push(Invariant {
                    name: format!("coker {name}"),
                    group: h.cokernel().group,
                });
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct IsoConfig {
    /// Largest absolute coefficient tried on free generators of `Hom(M, N)`;
    /// `None` means `p^n`.
    pub coeff_bound: Option<Int>,
    /// Give up (with `Unknown`) after this many candidates.
    pub max_candidates: usize,
}

impl Default for IsoConfig {
    fn default() -> Self {
        Self {
            coeff_bound: None,
            max_candidates: 200_000,
        }
    }
}

#[derive(Clone, Debug)]
pub enum IsoVerdict {
    Iso {
        forward: MackeyHom,
        backward: MackeyHom,
    },
    NotIso {
        reason: String,
    },
    Unknown {
        reason: String,
    },
}

impl IsoVerdict {
    pub fn is_iso(&self) -> bool {
        matches!(self, Self::Iso { .. })
    }

    pub fn is_not_iso(&self) -> bool {
        matches!(self, Self::NotIso { .. })
    }
}

/// Decides whether `m` and `n` are isomorphic. A mismatch in [`invariants`]
/// proves they are not; otherwise morphisms are searched by increasing
/// coefficient size and the first levelwise bijection is returned with its
/// inverse.
pub fn iso_test(
    m: &MackeyFunctor,
    n: &MackeyFunctor,
    config: &IsoConfig,
) -> Result<IsoVerdict, MackeyError> {
    m.same_group(n)?;
    if m == n {
        return Ok(IsoVerdict::Iso {
            forward: MackeyHom::identity(m),
            backward: MackeyHom::identity(m),
        });
    }
    let (im, inn) = (invariants(m), invariants(n));
    for (a, b) in im.iter().zip(&inn) {
        if a.group != b.group {
            return Ok(IsoVerdict::NotIso {
                reason: format!("{}: {} vs {}", a.name, a.group, b.group),
            });
        }
    }

    let h = mackey_hom_group(m, n)?;
    let bound = config
        .coeff_bound
        .clone()
        .unwrap_or_else(|| m.p_int().pow(m.n() as u32));
    let bound = bound.to_i64().unwrap_or(i64::MAX).max(0);
    let free = h.group.rank();
    let torsion: Vec<i64> = h
        .group
        .torsion()
        .iter()
        .map(|d| d.to_i64().unwrap_or(i64::MAX))
        .collect();
    let gen_mats: Vec<Vec<&IntMatrix>> = h
        .generators
        .iter()
        .map(|g| g.components().iter().map(GroupHom::matrix).collect())
        .collect();

    let mut tried = 0usize;
    for r in 0..=bound {
        let mut fc = vec![-r; free];
        loop {
            if fc.iter().map(|x| x.abs()).max().unwrap_or(0) == r {
                let mut tc = vec![0i64; torsion.len()];
                loop {
                    tried += 1;
                    if tried > config.max_candidates {
                        return Ok(IsoVerdict::Unknown {
                            reason: format!(
                                "no isomorphism among the first {} candidate morphisms",
                                config.max_candidates
                            ),
                        });
                    }
                    let coeffs: Vec<i64> = fc.iter().chain(&tc).copied().collect();
                    if let Some(f) = candidate(m, n, &gen_mats, &coeffs) {
                        return finish(m, n, f);
                    }
                    if !odometer(&mut tc, &vec![0; torsion.len()], &torsion.iter().map(|d| d - 1).collect::<Vec<_>>()) {
                        break;
                    }
                }
            }
            if r == 0 || !odometer(&mut fc, &vec![-r; free], &vec![r; free]) {
                break;
            }
        }
        if free == 0 {
            return Ok(IsoVerdict::NotIso {
                reason: "no morphism in the finite group Hom(M, N) is invertible".into(),
            });
        }
    }
    Ok(IsoVerdict::Unknown {
        reason: format!("no isomorphism with coefficients bounded by {bound}"),
    })
}

/// Advances `v` through the box `lo..=hi`; false once it wraps around.
fn odometer(v: &mut [i64], lo: &[i64], hi: &[i64]) -> bool {
    for i in (0..v.len()).rev() {
        if v[i] < hi[i] {
            v[i] += 1;
            return true;
        }
        v[i] = lo[i];
    }
    false
}

fn candidate(
    m: &MackeyFunctor,
    n: &MackeyFunctor,
    gens: &[Vec<&IntMatrix>],
    coeffs: &[i64],
) -> Option<Vec<GroupHom>> {
    let mut comps = Vec::with_capacity(m.n() + 1);
    for k in (0..=m.n()).rev() {
        let (a, b) = (m.level(k), n.level(k));
        let mut mat = IntMatrix::zeros(b.ngens(), a.ngens());
        for (g, &c) in gens.iter().zip(coeffs) {
            if c != 0 {
                mat = mat.add(&g[k].scale(&Int::from(c)));
            }
        }
        // free block must be unimodular
        let r = a.rank();
        let idx: Vec<usize> = (0..r).collect();
        let fb = mat.select_rows(&idx).select_cols(&idx);
        if !fb.determinant().abs().is_one() {
            return None;
        }
        let h = GroupHom::new(a.clone(), b.clone(), mat).ok()?;
        // equal invariant factors: surjective iff bijective
        if !h.is_surjective() {
            return None;
        }
        comps.push(h);
    }
    comps.reverse();
    Some(comps)
}

fn finish(
    m: &MackeyFunctor,
    n: &MackeyFunctor,
    comps: Vec<GroupHom>,
) -> Result<IsoVerdict, MackeyError> {
    let forward = MackeyHom::new(m.clone(), n.clone(), comps)?;
    let back = mackey_hom_group(n, m)?;
    let pulled: Vec<MackeyHom> = back.generators.iter().map(|g| g.compose(&forward)).collect();
    let id = MackeyHom::identity(m);
    let coeffs = solve_combination(&pulled, &id).ok_or_else(|| {
        MackeyError::Shape("levelwise bijection without a natural inverse".into())
    })?;
    let backward = back.combine(&coeffs);
    if forward.compose(&backward) != MackeyHom::identity(n) {
        return Err(MackeyError::Shape("inverse check failed".into()));
    }
    Ok(IsoVerdict::Iso { forward, backward })
}
