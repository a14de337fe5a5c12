//! Cohomological Mackey functors for `C_{p^n}` with trivial Weyl action.
//!
//! Level `k` holds the value at the orbit `C_{p^n}/C_{p^k}`; level 0 is the
//! free orbit and level `n` the fixed one. `res(k)` goes from level `k` down
//! to `k - 1` and `tr(k)` back up, for `k = 1..=n`.

use std::fmt;

use crate::abgroup::{int, FgAbGroup, GroupHom, Int, IntMatrix};

use super::MackeyError;

/// One failed axiom, located at a level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub level: usize,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "level {}: {}", self.level, self.message)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MackeyFunctor {
    p: u64,
    n: usize,
    levels: Vec<FgAbGroup>,
    res: Vec<GroupHom>,
    tr: Vec<GroupHom>,
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

impl MackeyFunctor {
    /// Assembles a diagram, checking only shapes. Use [`validate`](Self::validate)
    /// to check the axioms, or [`new`](Self::new) to do both.
    pub fn from_parts(
        p: u64,
        levels: Vec<FgAbGroup>,
        res: Vec<GroupHom>,
        tr: Vec<GroupHom>,
    ) -> Result<Self, MackeyError> {
        if !is_prime(p) {
            return Err(MackeyError::Shape(format!("{p} is not prime")));
        }
        if levels.is_empty() {
            return Err(MackeyError::Shape("a diagram needs at least one level".into()));
        }
        let n = levels.len() - 1;
        if res.len() != n || tr.len() != n {
            return Err(MackeyError::Shape(format!(
                "{} levels need {n} restrictions and transfers, got {} and {}",
                n + 1,
                res.len(),
                tr.len()
            )));
        }
        for k in 1..=n {
            let r = &res[k - 1];
            let t = &tr[k - 1];
            if r.source() != &levels[k] || r.target() != &levels[k - 1] {
                return Err(MackeyError::Shape(format!(
                    "res({k}) must map level {k} to level {}",
                    k - 1
                )));
            }
            if t.source() != &levels[k - 1] || t.target() != &levels[k] {
                return Err(MackeyError::Shape(format!(
                    "tr({k}) must map level {} to level {k}",
                    k - 1
                )));
            }
        }
        Ok(Self {
            p,
            n,
            levels,
            res,
            tr,
        })
    }

    /// Assembles and validates.
    pub fn new(
        p: u64,
        levels: Vec<FgAbGroup>,
        res: Vec<GroupHom>,
        tr: Vec<GroupHom>,
    ) -> Result<Self, MackeyError> {
        let m = Self::from_parts(p, levels, res, tr)?;
        let violations = m.validate();
        if violations.is_empty() {
            Ok(m)
        } else {
            Err(MackeyError::Invalid(violations))
        }
    }

    /// Builds a diagram whose levels have at most one generator each from the
    /// level orders (`0` for `Z`, `1` for the trivial group) and the scalar
    /// multipliers of each restriction and transfer, listed bottom to top.
    pub fn cyclic(p: u64, orders: &[Int], res: &[Int], tr: &[Int]) -> Result<Self, MackeyError> {
        let levels: Vec<FgAbGroup> = orders.iter().map(FgAbGroup::cyclic).collect();
        let n = levels.len().saturating_sub(1);
        let mut r = Vec::with_capacity(n);
        let mut t = Vec::with_capacity(n);
        for k in 1..=n {
            r.push(GroupHom::cyclic_map(&levels[k], &levels[k - 1], &res[k - 1])?);
            t.push(GroupHom::cyclic_map(&levels[k - 1], &levels[k], &tr[k - 1])?);
        }
        Self::new(p, levels, r, t)
    }

    pub fn zero(p: u64, n: usize) -> Self {
        let levels = vec![FgAbGroup::trivial(); n + 1];
        let z = GroupHom::zero(&FgAbGroup::trivial(), &FgAbGroup::trivial());
        Self {
            p,
            n,
            levels,
            res: vec![z.clone(); n],
            tr: vec![z; n],
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p_int(&self) -> Int {
        Int::from(self.p)
    }

    pub fn level(&self, k: usize) -> &FgAbGroup {
        &self.levels[k]
    }

    pub fn levels(&self) -> &[FgAbGroup] {
        &self.levels
    }

    /// Restriction from level `k` to level `k - 1`, `1 <= k <= n`.
    pub fn res(&self, k: usize) -> &GroupHom {
        &self.res[k - 1]
    }

    /// Transfer from level `k - 1` to level `k`, `1 <= k <= n`.
    pub fn tr(&self, k: usize) -> &GroupHom {
        &self.tr[k - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.levels.iter().all(FgAbGroup::is_trivial)
    }

    pub fn is_levelwise_finite(&self) -> bool {
        self.levels.iter().all(FgAbGroup::is_finite)
    }

    /// Composite restriction from level `j` down to level `i <= j`.
    pub fn res_composite(&self, j: usize, i: usize) -> GroupHom {
        let mut h = GroupHom::identity(&self.levels[j]);
        for k in (i + 1..=j).rev() {
            h = self.res(k).compose(&h);
        }
        h
    }

    /// Composite transfer from level `i` up to level `j >= i`.
    pub fn tr_composite(&self, i: usize, j: usize) -> GroupHom {
        let mut h = GroupHom::identity(&self.levels[i]);
        for k in i + 1..=j {
            h = self.tr(k).compose(&h);
        }
        h
    }

    /// Lists every violated axiom; empty iff the diagram is a valid
    /// cohomological Mackey functor with trivial Weyl action.
    pub fn validate(&self) -> Vec<Violation> {
        let p = self.p_int();
        let mut out = Vec::new();
        for k in 1..=self.n {
            let up = self.tr(k).compose(self.res(k));
            if up != GroupHom::scalar(&self.levels[k], &p) {
                out.push(Violation {
                    level: k,
                    message: format!("tr∘res ≠ {p}: got {}", up.matrix()),
                });
            }
            let down = self.res(k).compose(self.tr(k));
            if down != GroupHom::scalar(&self.levels[k - 1], &p) {
                out.push(Violation {
                    level: k - 1,
                    message: format!("res∘tr ≠ {p}: got {}", down.matrix()),
                });
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self, MackeyError> {
        Ok(self.direct_sum_with_maps(other)?.sum)
    }

    /// Levelwise direct sum together with the canonical inclusions and
    /// projections.
    pub fn direct_sum_with_maps(&self, other: &Self) -> Result<DirectSum, MackeyError> {
        self.same_group(other)?;
        let mut levels = Vec::new();
        let mut into = Vec::new();
        let mut back = Vec::new();
        for k in 0..=self.n {
            let (g, i, b) = FgAbGroup::direct_sum(&self.levels[k], &other.levels[k]);
            levels.push(g);
            into.push(i);
            back.push(b);
        }
        let conj = |k_src: usize, k_dst: usize, a: &GroupHom, b: &GroupHom| -> GroupHom {
            let block = IntMatrix::block_diagonal(a.matrix(), b.matrix());
            let m = &(&into[k_dst] * &block) * &back[k_src];
            GroupHom::new(levels[k_src].clone(), levels[k_dst].clone(), m)
                .expect("block-diagonal arrow is well defined")
        };
        let mut res = Vec::new();
        let mut tr = Vec::new();
        for k in 1..=self.n {
            res.push(conj(k, k - 1, self.res(k), other.res(k)));
            tr.push(conj(k - 1, k, self.tr(k), other.tr(k)));
        }
        let sum = Self::new(self.p, levels.clone(), res, tr)?;
        let mut inc = [Vec::new(), Vec::new()];
        let mut proj = [Vec::new(), Vec::new()];
        for k in 0..=self.n {
            let (ga, gb) = (self.levels[k].ngens(), other.levels[k].ngens());
            let total = ga + gb;
            let first: Vec<usize> = (0..ga).collect();
            let second: Vec<usize> = (ga..total).collect();
            let id = IntMatrix::identity(total);
            let parts = [
                (&self.levels[k], &first),
                (&other.levels[k], &second),
            ];
            for (s, (g, idx)) in parts.iter().enumerate() {
                let emb = &into[k] * &id.select_cols(idx);
                inc[s].push(GroupHom::new((*g).clone(), levels[k].clone(), emb)?);
                let pr = &id.select_rows(idx) * &back[k];
                proj[s].push(GroupHom::new(levels[k].clone(), (*g).clone(), pr)?);
            }
        }
        let [inc_a, inc_b] = inc;
        let [proj_a, proj_b] = proj;
        Ok(DirectSum {
            inc: [
                super::MackeyHom::new(self.clone(), sum.clone(), inc_a)?,
                super::MackeyHom::new(other.clone(), sum.clone(), inc_b)?,
            ],
            proj: [
                super::MackeyHom::new(sum.clone(), self.clone(), proj_a)?,
                super::MackeyHom::new(sum.clone(), other.clone(), proj_b)?,
            ],
            sum,
        })
    }

    pub fn direct_sum_all(p: u64, n: usize, parts: &[Self]) -> Result<Self, MackeyError> {
        let mut acc = Self::zero(p, n);
        for m in parts {
            acc = if acc.is_zero() {
                m.clone()
            } else {
                acc.direct_sum(m)?
            };
        }
        Ok(acc)
    }

    pub(crate) fn same_group(&self, other: &Self) -> Result<(), MackeyError> {
        if self.p != other.p || self.n != other.n {
            return Err(MackeyError::GroupMismatch {
                left: (self.p, self.n),
                right: (other.p, other.n),
            });
        }
        Ok(())
    }

    /// `Hom_L(M, Z)`: levelwise `Hom(-, Z)` with restriction and transfer
    /// exchanged.
    pub fn hom_dual(&self) -> Result<Self, MackeyError> {
        let levels = self.levels.iter().map(FgAbGroup::hom_z_dual).collect();
        let res = self.tr.iter().map(GroupHom::hom_z_dual).collect();
        let tr = self.res.iter().map(GroupHom::hom_z_dual).collect();
        Self::new(self.p, levels, res, tr)
    }

    /// `Ext_L(M, Z)`: levelwise `Ext(-, Z)` with restriction and transfer
    /// exchanged.
    pub fn ext_dual(&self) -> Result<Self, MackeyError> {
        let levels = self.levels.iter().map(FgAbGroup::ext_z_dual).collect();
        let res = self.tr.iter().map(GroupHom::ext_z_dual).collect();
        let tr = self.res.iter().map(GroupHom::ext_z_dual).collect();
        Self::new(self.p, levels, res, tr)
    }

    /// Inflation along `C_{p^n} -> C_{p^n}/C_{p^m}`: `self` lives over the
    /// quotient, of exponent `n - m`.
    pub fn phi_pullback(&self, m: usize) -> Result<Self, MackeyError> {
        let n = self.n + m;
        let p = self.p_int();
        let bottom = &self.levels[0];
        let mut levels = vec![bottom.clone(); m];
        levels.extend(self.levels.iter().cloned());
        let mut res = Vec::with_capacity(n);
        let mut tr = Vec::with_capacity(n);
        for k in 1..=n {
            if k <= m {
                res.push(GroupHom::identity(bottom));
                tr.push(GroupHom::scalar(bottom, &p));
            } else {
                res.push(self.res(k - m).clone());
                tr.push(self.tr(k - m).clone());
            }
        }
        Self::new(self.p, levels, res, tr)
    }

    /// Extends `self` (over `C_{p^k}`, `k = self.n()`) to `C_{p^n}` by
    /// repeating the top level, with restriction the identity and transfer
    /// multiplication by `p` above level `k`.
    pub fn theta(&self, n: usize) -> Result<Self, MackeyError> {
        self.extend_top(n, false)
    }

    /// As [`theta`](Self::theta) with the roles of restriction and transfer
    /// swapped above level `k`.
    pub fn theta_star(&self, n: usize) -> Result<Self, MackeyError> {
        self.extend_top(n, true)
    }

    fn extend_top(&self, n: usize, star: bool) -> Result<Self, MackeyError> {
        if n < self.n {
            return Err(MackeyError::Shape(format!(
                "cannot extend exponent {} to {n}",
                self.n
            )));
        }
        let p = self.p_int();
        let top = &self.levels[self.n];
        let mut levels = self.levels.clone();
        let mut res = self.res.clone();
        let mut tr = self.tr.clone();
        for _ in self.n..n {
            levels.push(top.clone());
            let (r, t) = if star {
                (GroupHom::scalar(top, &p), GroupHom::identity(top))
            } else {
                (GroupHom::identity(top), GroupHom::scalar(top, &p))
            };
            res.push(r);
            tr.push(t);
        }
        Self::new(self.p, levels, res, tr)
    }

    /// Restriction to the subgroup `C_{p^m}`: keeps levels `0..=m`.
    pub fn restrict(&self, m: usize) -> Result<Self, MackeyError> {
        if m > self.n {
            return Err(MackeyError::Shape(format!(
                "cannot restrict exponent {} to {m}",
                self.n
            )));
        }
        Self::new(
            self.p,
            self.levels[..=m].to_vec(),
            self.res[..m].to_vec(),
            self.tr[..m].to_vec(),
        )
    }
}

/// Output of [`MackeyFunctor::direct_sum_with_maps`].
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub sum: MackeyFunctor,
    pub inc: [super::MackeyHom; 2],
    pub proj: [super::MackeyHom; 2],
}

impl fmt::Debug for MackeyFunctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MackeyFunctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "C_{}^{} Mackey functor", self.p, self.n)?;
        for k in (0..=self.n).rev() {
            writeln!(f, "  level {k}: {}", self.levels[k])?;
            if k > 0 {
                writeln!(
                    f,
                    "    res {} | tr {}",
                    self.res(k).matrix(),
                    self.tr(k).matrix()
                )?;
            }
        }
        Ok(())
    }
}

/// `p^e` as an [`Int`].
pub fn pow(p: u64, e: u32) -> Int {
    int(p as i64).pow(e)
}
