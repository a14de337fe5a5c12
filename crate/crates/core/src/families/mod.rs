//! Named Mackey functors: the twisted constants `Z_S`, the torsion family
//! `B_{T,S}`, the non-split `T(n)`, and the maps between them.

mod recognize;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::abgroup::{int, FgAbGroup, GroupHom, Int, IntMatrix};
use crate::mackey::{pow, MackeyError, MackeyFunctor, MackeyHom, ShortExactSeq};

pub use recognize::{recognize, recognize_detailed, Recognition, Rejection};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FamilyError {
    #[error("subset violation: {0}")]
    SubsetViolation(String),
    #[error(transparent)]
    Mackey(#[from] MackeyError),
}

/// A subset of `{1, ..., n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetSpec {
    n: usize,
    members: BTreeSet<usize>,
}

impl SubsetSpec {
    pub fn new(n: usize, members: impl IntoIterator<Item = usize>) -> Result<Self, FamilyError> {
        let members: BTreeSet<usize> = members.into_iter().collect();
        if let Some(&bad) = members.iter().find(|&&i| i == 0 || i > n) {
            return Err(FamilyError::SubsetViolation(format!(
                "{bad} is not in {{1..{n}}}"
            )));
        }
        Ok(Self { n, members })
    }

    pub fn empty(n: usize) -> Self {
        Self {
            n,
            members: BTreeSet::new(),
        }
    }

    /// `{1, ..., n}`.
    pub fn full(n: usize) -> Self {
        Self::interval(n, 1, n)
    }

    /// `{lo, ..., hi}` clipped to `{1..n}`; empty when `lo > hi`.
    pub fn interval(n: usize, lo: usize, hi: usize) -> Self {
        Self {
            n,
            members: (lo.max(1)..=hi.min(n)).collect(),
        }
    }

    /// Every subset of `{1..n}`, in binary order.
    pub fn all(n: usize) -> Vec<Self> {
        (0u32..1 << n)
            .map(|mask| Self {
                n,
                members: (1..=n).filter(|i| mask >> (i - 1) & 1 == 1).collect(),
            })
            .collect()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &BTreeSet<usize> {
        &self.members
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.contains(&i)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn complement(&self) -> Self {
        Self {
            n: self.n,
            members: (1..=self.n).filter(|i| !self.contains(*i)).collect(),
        }
    }

    pub fn minus(&self, other: &Self) -> Self {
        Self {
            n: self.n,
            members: self.members.difference(&other.members).copied().collect(),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        Self {
            n: self.n,
            members: self.members.union(&other.members).copied().collect(),
        }
    }

    /// `#(self ∩ {1..k})`.
    pub fn count_up_to(&self, k: usize) -> usize {
        self.members.range(..=k).count()
    }

    /// Shift by `m` into `{1..n+m}`: the indexing used after inflation.
    pub fn shifted(&self, m: usize) -> Self {
        Self {
            n: self.n + m,
            members: self.members.iter().map(|i| i + m).collect(),
        }
    }

    /// Keep the members `<= m`, as a subset of `{1..m}`.
    pub fn truncated(&self, m: usize) -> Self {
        Self {
            n: m,
            members: self.members.range(..=m).copied().collect(),
        }
    }
}

impl fmt::Display for SubsetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.members.iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

fn check_subset(t: &SubsetSpec, s: &SubsetSpec, n: usize) -> Result<(), FamilyError> {
    if t.n != n || s.n != n {
        return Err(FamilyError::SubsetViolation(format!(
            "subsets must live in {{1..{n}}}"
        )));
    }
    if !s.is_subset(t) {
        return Err(FamilyError::SubsetViolation(format!("{s} ⊄ {t}")));
    }
    Ok(())
}

/// `Z_S`: `Z` at every level, restriction `p^{χ_S(i)}`, transfer
/// `p^{1 - χ_S(i)}`.
pub fn z_s(p: u64, s: &SubsetSpec) -> MackeyFunctor {
    let n = s.n;
    let pp = Int::from(p);
    let one = int(1);
    let orders = vec![int(0); n + 1];
    let res: Vec<Int> = (1..=n)
        .map(|i| if s.contains(i) { pp.clone() } else { one.clone() })
        .collect();
    let tr: Vec<Int> = (1..=n)
        .map(|i| if s.contains(i) { one.clone() } else { pp.clone() })
        .collect();
    MackeyFunctor::cyclic(p, &orders, &res, &tr).expect("Z_S satisfies the axioms")
}

/// `B_{T,S}` for `S ⊆ T`: level `k` is `Z/p^{#((T∖S) ∩ {1..k})}`,
/// restriction `p` on `S` and `1` off it, transfer the other way round.
pub fn b_ts(p: u64, t: &SubsetSpec, s: &SubsetSpec) -> Result<MackeyFunctor, FamilyError> {
    let n = t.n;
    check_subset(t, s, n)?;
    let d = t.minus(s);
    let pp = Int::from(p);
    let orders: Vec<Int> = (0..=n)
        .map(|k| match d.count_up_to(k) {
            0 => int(1),
            e => pow(p, e as u32),
        })
        .collect();
    let res: Vec<Int> = (1..=n)
        .map(|k| if s.contains(k) { pp.clone() } else { int(1) })
        .collect();
    let tr: Vec<Int> = (1..=n)
        .map(|k| if s.contains(k) { int(1) } else { pp.clone() })
        .collect();
    Ok(MackeyFunctor::cyclic(p, &orders, &res, &tr)?)
}

/// `T(n)`: `Z` at the bottom, `Z ⊕ Z/p` above, glued so that it does not
/// split.
pub fn t_n(p: u64, n: usize) -> Result<MackeyFunctor, FamilyError> {
    if n < 2 {
        return Err(FamilyError::Mackey(MackeyError::Shape(format!(
            "T(n) needs n >= 2, got {n}"
        ))));
    }
    let pp = p as i64;
    let z = FgAbGroup::free(1);
    let zt = FgAbGroup::new(1, vec![Int::from(p)]).expect("Z + Z/p");
    let mut levels = vec![z.clone()];
    levels.extend(std::iter::repeat_n(zt.clone(), n));
    let mut res = vec![GroupHom::from_i64(zt.clone(), z.clone(), &[&[pp, 0]]).map_err(MackeyError::from)?];
    let mut tr = vec![GroupHom::from_i64(z, zt.clone(), &[&[1], &[-1]]).map_err(MackeyError::from)?];
    for _ in 2..=n {
        res.push(GroupHom::from_i64(zt.clone(), zt.clone(), &[&[1, 0], &[0, 0]]).map_err(MackeyError::from)?);
        tr.push(GroupHom::from_i64(zt.clone(), zt.clone(), &[&[pp, 0], &[0, 1]]).map_err(MackeyError::from)?);
    }
    Ok(MackeyFunctor::new(p, levels, res, tr)?)
}

/// `0 -> B_{n̄,1̄^c} -> T(n) -> Z_{1̄} -> 0`.
pub fn t_n_sequence(p: u64, n: usize) -> Result<ShortExactSeq, FamilyError> {
    let t = t_n(p, n)?;
    let b = b_ts(p, &SubsetSpec::full(n), &SubsetSpec::interval(n, 2, n))?;
    let z1 = z_s(p, &SubsetSpec::interval(n, 1, 1));
    let mut inc = vec![IntMatrix::zeros(1, 0)];
    let mut proj = vec![IntMatrix::identity(1)];
    for _ in 1..=n {
        inc.push(IntMatrix::from_rows_i64(&[&[0], &[1]], 1));
        proj.push(IntMatrix::from_rows_i64(&[&[1, 0]], 2));
    }
    let i = MackeyHom::from_matrices(b, t.clone(), inc)?;
    let q = MackeyHom::from_matrices(t, z1, proj)?;
    Ok(ShortExactSeq::new(i, q)?)
}

/// The map `Z_T -> Z_S` that is the identity at the bottom and
/// multiplication by `p^{#((T∖S) ∩ {1..k})}` at level `k`.
pub fn f_ts(p: u64, t: &SubsetSpec, s: &SubsetSpec) -> Result<MackeyHom, FamilyError> {
    let n = t.n;
    check_subset(t, s, n)?;
    let d = t.minus(s);
    let mats = (0..=n)
        .map(|k| IntMatrix::scalar(1, &pow(p, d.count_up_to(k) as u32)))
        .collect();
    Ok(MackeyHom::from_matrices(z_s(p, t), z_s(p, s), mats)?)
}

/// One summand of a catalog expression.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Z(SubsetSpec),
    /// `B_{T,S}`, stored as `(T, S)`.
    B(SubsetSpec, SubsetSpec),
    T,
    Zero,
}

impl Atom {
    /// Canonical form of a `B` atom: members of `S` at or below the first
    /// index of `T∖S` do not affect the diagram and are dropped from both
    /// sets; `B_{S,S}` is zero.
    pub fn normalized(self) -> Atom {
        match self {
            Atom::B(t, s) => {
                let d = t.minus(&s);
                let Some(&first) = d.members.iter().next() else {
                    return Atom::Zero;
                };
                let s2 = SubsetSpec {
                    n: s.n,
                    members: s.members.range(first + 1..).copied().collect(),
                };
                Atom::B(d.union(&s2), s2)
            }
            other => other,
        }
    }

    pub fn build(&self, p: u64, n: usize) -> Result<MackeyFunctor, FamilyError> {
        match self {
            Atom::Z(s) => Ok(z_s(p, s)),
            Atom::B(t, s) => b_ts(p, t, s),
            Atom::T => t_n(p, n),
            Atom::Zero => Ok(MackeyFunctor::zero(p, n)),
        }
    }

    fn render(&self, n: usize) -> String {
        match self {
            Atom::Z(s) if s.is_empty() => "Z".into(),
            Atom::Z(s) if s.len() == n => "Z*".into(),
            Atom::Z(s) => format!("Z[{s}]"),
            Atom::B(t, s) => format!("B[{t}|{s}]"),
            Atom::T => format!("T({n})"),
            Atom::Zero => "0".into(),
        }
    }
}

/// A formal direct sum of catalog atoms over `C_{p^n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CatalogExpr {
    pub p: u64,
    pub n: usize,
    atoms: Vec<Atom>,
}

impl CatalogExpr {
    /// Normalizes each atom, drops zeros, and sorts.
    pub fn new(p: u64, n: usize, atoms: impl IntoIterator<Item = Atom>) -> Self {
        let mut atoms: Vec<Atom> = atoms
            .into_iter()
            .map(Atom::normalized)
            .filter(|a| *a != Atom::Zero)
            .collect();
        atoms.sort();
        Self { p, n, atoms }
    }

    pub fn zero(p: u64, n: usize) -> Self {
        Self::new(p, n, [])
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn build(&self) -> Result<MackeyFunctor, FamilyError> {
        let parts = self
            .atoms
            .iter()
            .map(|a| a.build(self.p, self.n))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(MackeyFunctor::direct_sum_all(self.p, self.n, &parts)?)
    }
}

impl fmt::Display for CatalogExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.atoms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.atoms.iter().map(|a| a.render(self.n)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests;
