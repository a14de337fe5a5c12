//! Finitely generated abelian groups in invariant-factor form and the
//! homomorphisms between them.
//!
//! A group `Z^r + Z/d_1 + ... + Z/d_t` has `r + t` canonical generators: the
//! free ones first, then the torsion ones in the listed order. Elements are
//! coordinate vectors in that basis with torsion coordinates reduced into
//! `[0, d_j)`.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::{int, Int, IntMatrix};
use super::snf::{kernel_basis, snf, solve};
use super::AbGroupError;

/// Default bound on the order of groups handed to [`FgAbGroup::enumerate_elements`].
pub const ENUMERATION_BOUND: u64 = 4096;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FgAbGroup {
    rank: usize,
    torsion: Vec<Int>,
}

impl FgAbGroup {
    /// Builds a group from data already in invariant-factor form.
    pub fn new(rank: usize, torsion: Vec<Int>) -> Result<Self, AbGroupError> {
        for (j, d) in torsion.iter().enumerate() {
            if *d < int(2) {
                return Err(AbGroupError::NotNormalized(format!(
                    "invariant factor {d} at position {j} is below 2"
                )));
            }
            if j + 1 < torsion.len() && !torsion[j + 1].is_multiple_of(d) {
                return Err(AbGroupError::NotNormalized(format!(
                    "{d} does not divide {}",
                    torsion[j + 1]
                )));
            }
        }
        Ok(Self { rank, torsion })
    }

    /// Normalizing constructor: `Z^rank` plus cyclic summands of the given
    /// orders in any order (orders 0 and 1 are allowed and mean `Z` and `0`).
    pub fn from_orders(rank: usize, orders: &[Int]) -> Self {
        let ngen = rank + orders.len();
        let mut rel = IntMatrix::zeros(ngen, orders.len());
        for (j, d) in orders.iter().enumerate() {
            rel[(rank + j, j)] = d.clone();
        }
        from_presentation(ngen, &rel).group
    }

    pub fn trivial() -> Self {
        Self {
            rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        Self {
            rank,
            torsion: Vec::new(),
        }
    }

    /// `Z/d`; `d = 0` gives `Z` and `d = 1` the trivial group.
    pub fn cyclic(d: &Int) -> Self {
        if d.is_zero() {
            Self::free(1)
        } else if d.abs().is_one() {
            Self::trivial()
        } else {
            Self {
                rank: 0,
                torsion: vec![d.abs()],
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[Int] {
        &self.torsion
    }

    pub fn ngens(&self) -> usize {
        self.rank + self.torsion.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.ngens() == 0
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<Int> {
        self.is_finite().then(|| self.torsion_order())
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> Int {
        self.torsion.iter().fold(Int::one(), |acc, d| acc * d)
    }

    pub fn torsion_subgroup(&self) -> Self {
        Self {
            rank: 0,
            torsion: self.torsion.clone(),
        }
    }

    /// Order of generator `j`, `None` for a free generator.
    pub fn gen_order(&self, j: usize) -> Option<&Int> {
        (j >= self.rank).then(|| &self.torsion[j - self.rank])
    }

    /// Brings torsion coordinates into `[0, d)`.
    pub fn reduce(&self, x: &mut [Int]) {
        for (j, d) in self.torsion.iter().enumerate() {
            let v = x[self.rank + j].mod_floor(d);
            x[self.rank + j] = v;
        }
    }

    /// Relation matrix of the canonical presentation: one column `d_j e_j`
    /// per torsion generator.
    pub fn relation_matrix(&self) -> IntMatrix {
        let mut rel = IntMatrix::zeros(self.ngens(), self.torsion.len());
        for (j, d) in self.torsion.iter().enumerate() {
            rel[(self.rank + j, j)] = d.clone();
        }
        rel
    }

    /// Direct sum with explicit coordinate changes. Returns the sum `C`, the
    /// matrix taking naive coordinates of `A + B` (A's generators then B's)
    /// to `C`'s generators, and the matrix going back.
    pub fn direct_sum(a: &Self, b: &Self) -> (Self, IntMatrix, IntMatrix) {
        // free generators first, torsion sorted by order; stable so that equal
        // orders keep their relative position
        let ga = a.ngens();
        let naive_order = |k: usize| -> Option<&Int> {
            if k < ga {
                a.gen_order(k)
            } else {
                b.gen_order(k - ga)
            }
        };
        let mut free_idx: Vec<usize> = Vec::new();
        let mut tors_idx: Vec<usize> = Vec::new();
        for k in 0..ga + b.ngens() {
            match naive_order(k) {
                None => free_idx.push(k),
                Some(_) => tors_idx.push(k),
            }
        }
        tors_idx.sort_by(|&x, &y| naive_order(x).cmp(&naive_order(y)));
        let chain_ok = tors_idx.windows(2).all(|w| {
            naive_order(w[1])
                .unwrap()
                .is_multiple_of(naive_order(w[0]).unwrap())
        });
        if chain_ok {
            let perm: Vec<usize> = free_idx.iter().chain(&tors_idx).copied().collect();
            let total = perm.len();
            let mut into = IntMatrix::zeros(total, total);
            for (new, &old) in perm.iter().enumerate() {
                into[(new, old)] = Int::one();
            }
            let back = into.transpose();
            let torsion = tors_idx
                .iter()
                .map(|&k| naive_order(k).unwrap().clone())
                .collect();
            let group = Self {
                rank: free_idx.len(),
                torsion,
            };
            return (group, into, back);
        }
        let rel = IntMatrix::block_diagonal(&a.relation_matrix(), &b.relation_matrix());
        let q = from_presentation(ga + b.ngens(), &rel);
        (q.group, q.projection, q.lift)
    }

    /// Lists every element of a finite group as a reduced coordinate tuple.
    pub fn enumerate_elements(&self, bound: u64) -> Result<Vec<Vec<Int>>, AbGroupError> {
        let order = self.order().ok_or(AbGroupError::Infinite)?;
        if order > Int::from(bound) {
            return Err(AbGroupError::OrderTooLarge { order, bound });
        }
        let radices: Vec<u64> = self.torsion.iter().map(|d| d.to_u64().unwrap()).collect();
        let total = order.to_u64().unwrap();
        let mut out = Vec::with_capacity(total as usize);
        for mut idx in 0..total {
            let mut v = Vec::with_capacity(radices.len());
            for r in &radices {
                v.push(Int::from(idx % r));
                idx /= r;
            }
            out.push(v);
        }
        Ok(out)
    }

    /// `Hom(A, Z) = Z^rank(A)`.
    pub fn hom_z_dual(&self) -> Self {
        Self::free(self.rank)
    }

    /// `Ext(A, Z)`, isomorphic to the torsion subgroup of `A`.
    pub fn ext_z_dual(&self) -> Self {
        self.torsion_subgroup()
    }
}

impl fmt::Debug for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        write!(f, "{}", parts.join(" + "))
    }
}

/// Result of presenting a quotient of a free module.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: FgAbGroup,
    /// `group.ngens() x ngen`: coordinates in `group` of the image of each
    /// free generator.
    pub projection: IntMatrix,
    /// `ngen x group.ngens()`: a preimage in the free module of each
    /// generator of `group`.
    pub lift: IntMatrix,
}

impl Quotient {
    /// The projection as a homomorphism out of `Z^ngen`.
    pub fn projection_hom(&self) -> GroupHom {
        GroupHom::new(
            FgAbGroup::free(self.projection.cols()),
            self.group.clone(),
            self.projection.clone(),
        )
        .expect("projection from a free module is always well defined")
    }
}

/// `Z^ngen / im(relations)` in invariant-factor form.
pub fn from_presentation(ngen: usize, relations: &IntMatrix) -> Quotient {
    assert_eq!(relations.rows(), ngen, "relation matrix must have ngen rows");
    let s = snf(relations);
    let diag = s.diagonal();
    let mut free_idx = Vec::new();
    let mut tors_idx = Vec::new();
    let mut torsion = Vec::new();
    for i in 0..ngen {
        match diag.get(i) {
            Some(d) if d.is_one() => {}
            Some(d) if !d.is_zero() => {
                tors_idx.push(i);
                torsion.push(d.clone());
            }
            _ => free_idx.push(i),
        }
    }
    let keep: Vec<usize> = free_idx.iter().chain(&tors_idx).copied().collect();
    let group = FgAbGroup {
        rank: free_idx.len(),
        torsion,
    };
    let mut projection = s.u.select_rows(&keep);
    for (j, d) in group.torsion.iter().enumerate() {
        let row = group.rank + j;
        for c in 0..projection.cols() {
            let v = projection[(row, c)].mod_floor(d);
            projection[(row, c)] = v;
        }
    }
    let lift = s.u_inv.select_cols(&keep);
    Quotient {
        group,
        projection,
        lift,
    }
}

/// Columns generating `{x : x lies in the first `keep` coordinates of ker M}`.
fn kernel_projection(m: &IntMatrix, keep: usize) -> IntMatrix {
    kernel_basis(m).top_rows(keep)
}

/// A homomorphism between finitely generated abelian groups. Columns are
/// indexed by source generators, rows by target generators.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupHom {
    source: FgAbGroup,
    target: FgAbGroup,
    matrix: IntMatrix,
}

/// A subgroup given by an injective hom into the ambient group.
#[derive(Clone, Debug)]
pub struct Subgroup {
    pub group: FgAbGroup,
    pub inclusion: GroupHom,
}

/// A quotient given by a surjective hom from the ambient group.
#[derive(Clone, Debug)]
pub struct QuotientGroup {
    pub group: FgAbGroup,
    pub projection: GroupHom,
    /// Preimage in the ambient group of each generator of `group`.
    pub lift: IntMatrix,
}

impl GroupHom {
    /// Reduces the entries and checks well-definedness.
    pub fn new(
        source: FgAbGroup,
        target: FgAbGroup,
        mut matrix: IntMatrix,
    ) -> Result<Self, AbGroupError> {
        if matrix.rows() != target.ngens() || matrix.cols() != source.ngens() {
            return Err(AbGroupError::DimensionMismatch(format!(
                "matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.ngens(),
                source.ngens()
            )));
        }
        reduce_rows(&target, &mut matrix);
        for j in 0..source.ngens() {
            let Some(d) = source.gen_order(j) else {
                continue;
            };
            for i in 0..target.ngens() {
                let x = &matrix[(i, j)];
                let ok = match target.gen_order(i) {
                    None => x.is_zero(),
                    Some(e) => (d * x).is_multiple_of(e),
                };
                if !ok {
                    return Err(AbGroupError::IllDefined {
                        row: i,
                        col: j,
                        detail: format!(
                            "generator of order {d} sent to {x} in a summand {}",
                            target
                                .gen_order(i)
                                .map_or("Z".to_string(), |e| format!("Z/{e}"))
                        ),
                    });
                }
            }
        }
        Ok(Self {
            source,
            target,
            matrix,
        })
    }

    pub fn from_i64(
        source: FgAbGroup,
        target: FgAbGroup,
        rows: &[&[i64]],
    ) -> Result<Self, AbGroupError> {
        let cols = source.ngens();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(AbGroupError::DimensionMismatch(format!(
                "rows must have {cols} entries"
            )));
        }
        let m = IntMatrix::from_rows_i64(rows, cols);
        Self::new(source, target, m)
    }

    pub fn identity(g: &FgAbGroup) -> Self {
        Self {
            source: g.clone(),
            target: g.clone(),
            matrix: IntMatrix::identity(g.ngens()),
        }
    }

    pub fn zero(source: &FgAbGroup, target: &FgAbGroup) -> Self {
        Self {
            source: source.clone(),
            target: target.clone(),
            matrix: IntMatrix::zeros(target.ngens(), source.ngens()),
        }
    }

    /// Multiplication by `k` on `g`.
    pub fn scalar(g: &FgAbGroup, k: &Int) -> Self {
        let mut m = IntMatrix::scalar(g.ngens(), k);
        reduce_rows(g, &mut m);
        Self {
            source: g.clone(),
            target: g.clone(),
            matrix: m,
        }
    }

    /// Multiplication by `k` between two groups with one generator each (or
    /// where either side is trivial), the usual shape of catalog arrows.
    pub fn cyclic_map(source: &FgAbGroup, target: &FgAbGroup, k: &Int) -> Result<Self, AbGroupError> {
        let mut m = IntMatrix::zeros(target.ngens(), source.ngens());
        if source.ngens() == 1 && target.ngens() == 1 {
            m[(0, 0)] = k.clone();
        } else if source.ngens() > 1 || target.ngens() > 1 {
            return Err(AbGroupError::DimensionMismatch(
                "cyclic_map needs groups with at most one generator".into(),
            ));
        }
        Self::new(source.clone(), target.clone(), m)
    }

    pub fn source(&self) -> &FgAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FgAbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GroupHom) -> GroupHom {
        assert_eq!(
            other.target, self.source,
            "composition of homs with mismatched groups"
        );
        let mut m = &self.matrix * &other.matrix;
        reduce_rows(&self.target, &mut m);
        GroupHom {
            source: other.source.clone(),
            target: self.target.clone(),
            matrix: m,
        }
    }

    pub fn add(&self, other: &GroupHom) -> GroupHom {
        assert_eq!(self.source, other.source);
        assert_eq!(self.target, other.target);
        let mut m = self.matrix.add(&other.matrix);
        reduce_rows(&self.target, &mut m);
        GroupHom {
            source: self.source.clone(),
            target: self.target.clone(),
            matrix: m,
        }
    }

    pub fn scale(&self, k: &Int) -> GroupHom {
        let mut m = self.matrix.scale(k);
        reduce_rows(&self.target, &mut m);
        GroupHom {
            source: self.source.clone(),
            target: self.target.clone(),
            matrix: m,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn eval(&self, x: &[Int]) -> Vec<Int> {
        let mut y = self.matrix.mul_vec(x);
        self.target.reduce(&mut y);
        y
    }

    /// Relations of the target next to the image columns: `[F | R_target]`.
    fn augmented(&self) -> IntMatrix {
        self.matrix.hstack(&self.target.relation_matrix())
    }

    /// Finds `x` with `self(x) = y`, if one exists.
    pub fn lift(&self, y: &[Int]) -> Option<Vec<Int>> {
        let x = solve(&self.augmented(), y)?;
        let mut x = x[..self.source.ngens()].to_vec();
        self.source.reduce(&mut x);
        Some(x)
    }

    pub fn kernel(&self) -> Subgroup {
        let ga = self.source.ngens();
        // x with F x in the relation lattice of the target
        let lattice = kernel_projection(&self.augmented(), ga);
        let w = lattice.cols();
        // relations among those generators modulo the source relations
        let rels = kernel_projection(&lattice.hstack(&self.source.relation_matrix()), w);
        let q = from_presentation(w, &rels);
        let mut emb = &lattice * &q.lift;
        reduce_rows(&self.source, &mut emb);
        let inclusion = GroupHom::new(q.group.clone(), self.source.clone(), emb)
            .expect("kernel inclusion is well defined");
        Subgroup {
            group: q.group,
            inclusion,
        }
    }

    pub fn cokernel(&self) -> QuotientGroup {
        let gb = self.target.ngens();
        let rel = self.target.relation_matrix().hstack(&self.matrix);
        let q = from_presentation(gb, &rel);
        let projection = GroupHom::new(self.target.clone(), q.group.clone(), q.projection)
            .expect("cokernel projection is well defined");
        QuotientGroup {
            group: q.group,
            projection,
            lift: q.lift,
        }
    }

    /// The image as an abstract group.
    pub fn image(&self) -> FgAbGroup {
        let rel = self.source.relation_matrix().hstack(&kernel_projection(
            &self.augmented(),
            self.source.ngens(),
        ));
        from_presentation(self.source.ngens(), &rel).group
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().group.is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().group.is_trivial()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// Transpose of the free block: `Hom(B, Z) -> Hom(A, Z)`.
    pub fn hom_z_dual(&self) -> GroupHom {
        let (ra, rb) = (self.source.rank, self.target.rank);
        let mut m = IntMatrix::zeros(ra, rb);
        for i in 0..ra {
            for j in 0..rb {
                m[(i, j)] = self.matrix[(j, i)].clone();
            }
        }
        GroupHom {
            source: self.target.hom_z_dual(),
            target: self.source.hom_z_dual(),
            matrix: m,
        }
    }

    /// `Ext(B, Z) -> Ext(A, Z)`. A component `Z/d -> Z/e`, multiplication by
    /// `m`, dualizes to `Z/e -> Z/d`, multiplication by `m d / e`.
    pub fn ext_z_dual(&self) -> GroupHom {
        let (ra, rb) = (self.source.rank, self.target.rank);
        let ta = &self.source.torsion;
        let tb = &self.target.torsion;
        let mut m = IntMatrix::zeros(ta.len(), tb.len());
        for (ja, d) in ta.iter().enumerate() {
            for (ib, e) in tb.iter().enumerate() {
                let x = &self.matrix[(rb + ib, ra + ja)];
                let md = x * d;
                debug_assert!(md.is_multiple_of(e));
                m[(ja, ib)] = (md / e).mod_floor(d);
            }
        }
        GroupHom {
            source: self.target.ext_z_dual(),
            target: self.source.ext_z_dual(),
            matrix: m,
        }
    }
}

pub(crate) fn reduce_rows(target: &FgAbGroup, m: &mut IntMatrix) {
    for (j, e) in target.torsion.iter().enumerate() {
        let row = target.rank + j;
        for c in 0..m.cols() {
            let v = m[(row, c)].mod_floor(e);
            m[(row, c)] = v;
        }
    }
}

impl fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} : {} -> {}", self.matrix, self.source, self.target)
    }
}
