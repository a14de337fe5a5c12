//! Morphisms of Mackey functors, the group they form, kernels, cokernels and
//! splitting of short exact sequences.

use num_traits::Zero;

use crate::abgroup::{from_presentation, kernel_basis, solve, FgAbGroup, GroupHom, Int, IntMatrix};

use super::{MackeyError, MackeyFunctor};

/// A levelwise family of homs commuting with restriction and transfer.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MackeyHom {
    source: MackeyFunctor,
    target: MackeyFunctor,
    components: Vec<GroupHom>,
}

impl MackeyHom {
    pub fn new(
        source: MackeyFunctor,
        target: MackeyFunctor,
        components: Vec<GroupHom>,
    ) -> Result<Self, MackeyError> {
        source.same_group(&target)?;
        let n = source.n();
        if components.len() != n + 1 {
            return Err(MackeyError::Shape(format!(
                "expected {} components, got {}",
                n + 1,
                components.len()
            )));
        }
        for (k, c) in components.iter().enumerate() {
            if c.source() != source.level(k) || c.target() != target.level(k) {
                return Err(MackeyError::Shape(format!("component {k} has the wrong groups")));
            }
        }
        for k in 1..=n {
            let a = target.res(k).compose(&components[k]);
            let b = components[k - 1].compose(source.res(k));
            if a != b {
                return Err(MackeyError::NotNatural(format!(
                    "does not commute with res({k})"
                )));
            }
            let a = target.tr(k).compose(&components[k - 1]);
            let b = components[k].compose(source.tr(k));
            if a != b {
                return Err(MackeyError::NotNatural(format!(
                    "does not commute with tr({k})"
                )));
            }
        }
        Ok(Self {
            source,
            target,
            components,
        })
    }

    /// Builds the components from raw matrices, reducing and checking each.
    pub fn from_matrices(
        source: MackeyFunctor,
        target: MackeyFunctor,
        matrices: Vec<IntMatrix>,
    ) -> Result<Self, MackeyError> {
        if matrices.len() != source.n() + 1 {
            return Err(MackeyError::Shape(format!(
                "expected {} components, got {}",
                source.n() + 1,
                matrices.len()
            )));
        }
        let comps = matrices
            .into_iter()
            .enumerate()
            .map(|(k, m)| GroupHom::new(source.level(k).clone(), target.level(k).clone(), m))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(source, target, comps)
    }

    pub fn identity(m: &MackeyFunctor) -> Self {
        Self {
            source: m.clone(),
            target: m.clone(),
            components: m.levels().iter().map(GroupHom::identity).collect(),
        }
    }

    pub fn zero(source: &MackeyFunctor, target: &MackeyFunctor) -> Self {
        Self {
            source: source.clone(),
            target: target.clone(),
            components: source
                .levels()
                .iter()
                .zip(target.levels())
                .map(|(a, b)| GroupHom::zero(a, b))
                .collect(),
        }
    }

    pub fn source(&self) -> &MackeyFunctor {
        &self.source
    }

    pub fn target(&self) -> &MackeyFunctor {
        &self.target
    }

    pub fn component(&self, k: usize) -> &GroupHom {
        &self.components[k]
    }

    pub fn components(&self) -> &[GroupHom] {
        &self.components
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MackeyHom) -> MackeyHom {
        assert_eq!(other.target, self.source, "composition of mismatched morphisms");
        MackeyHom {
            source: other.source.clone(),
            target: self.target.clone(),
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.compose(b))
                .collect(),
        }
    }

    pub fn add(&self, other: &MackeyHom) -> MackeyHom {
        MackeyHom {
            source: self.source.clone(),
            target: self.target.clone(),
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn scale(&self, k: &Int) -> MackeyHom {
        MackeyHom {
            source: self.source.clone(),
            target: self.target.clone(),
            components: self.components.iter().map(|c| c.scale(k)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(GroupHom::is_zero)
    }

    pub fn is_isomorphism(&self) -> bool {
        self.components.iter().all(GroupHom::is_isomorphism)
    }

    /// All matrix entries, level by level, row-major.
    pub fn flatten(&self) -> Vec<Int> {
        self.components
            .iter()
            .flat_map(|c| c.matrix().row_vecs().into_iter().flatten())
            .collect()
    }
}

/// Index bookkeeping for the flattened entries of a hom `M -> N`.
struct Layout {
    offsets: Vec<usize>,
    rows: Vec<usize>,
    cols: Vec<usize>,
    total: usize,
}

impl Layout {
    fn new(m: &MackeyFunctor, n: &MackeyFunctor) -> Self {
        let mut offsets = Vec::new();
        let mut rows = Vec::new();
        let mut cols = Vec::new();
        let mut total = 0;
        for k in 0..=m.n() {
            offsets.push(total);
            rows.push(n.level(k).ngens());
            cols.push(m.level(k).ngens());
            total += rows[k] * cols[k];
        }
        Self {
            offsets,
            rows,
            cols,
            total,
        }
    }

    fn at(&self, k: usize, i: usize, j: usize) -> usize {
        self.offsets[k] + i * self.cols[k] + j
    }

    fn unflatten(&self, v: &[Int]) -> Vec<IntMatrix> {
        (0..self.offsets.len())
            .map(|k| {
                let rows = (0..self.rows[k])
                    .map(|i| (0..self.cols[k]).map(|j| v[self.at(k, i, j)].clone()).collect())
                    .collect();
                IntMatrix::from_rows(rows, self.cols[k])
            })
            .collect()
    }
}

/// Columns `e * unit` for every entry in a torsion row of the target: the
/// vectors that represent the zero hom.
fn null_columns(layout: &Layout, target: &MackeyFunctor) -> IntMatrix {
    let mut cols = Vec::new();
    for k in 0..layout.offsets.len() {
        let g = target.level(k);
        for i in g.rank()..g.ngens() {
            let e = g.gen_order(i).expect("torsion row");
            for j in 0..layout.cols[k] {
                let mut c = vec![Int::zero(); layout.total];
                c[layout.at(k, i, j)] = e.clone();
                cols.push(c);
            }
        }
    }
    IntMatrix::from_columns(&cols, layout.total)
}

/// One linear constraint on the flattened entries, holding modulo `modulus`
/// when present.
struct Constraint {
    coeffs: Vec<Int>,
    modulus: Option<Int>,
}

fn constraints(m: &MackeyFunctor, n: &MackeyFunctor, layout: &Layout) -> Vec<Constraint> {
    let mut out = Vec::new();
    let blank = || vec![Int::zero(); layout.total];
    // well-definedness on torsion generators of the source
    for k in 0..=m.n() {
        for j in 0..layout.cols[k] {
            let Some(d) = m.level(k).gen_order(j) else {
                continue;
            };
            for i in 0..layout.rows[k] {
                let mut c = blank();
                c[layout.at(k, i, j)] = d.clone();
                out.push(Constraint {
                    coeffs: c,
                    modulus: n.level(k).gen_order(i).cloned(),
                });
            }
        }
    }
    for k in 1..=m.n() {
        // res_N(k) φ_k = φ_{k-1} res_M(k)
        let rn = n.res(k).matrix();
        let rm = m.res(k).matrix();
        for i in 0..layout.rows[k - 1] {
            for j in 0..layout.cols[k] {
                let mut c = blank();
                for l in 0..layout.rows[k] {
                    c[layout.at(k, l, j)] += &rn[(i, l)];
                }
                for l in 0..layout.cols[k - 1] {
                    c[layout.at(k - 1, i, l)] -= &rm[(l, j)];
                }
                out.push(Constraint {
                    coeffs: c,
                    modulus: n.level(k - 1).gen_order(i).cloned(),
                });
            }
        }
        // tr_N(k) φ_{k-1} = φ_k tr_M(k)
        let tn = n.tr(k).matrix();
        let tm = m.tr(k).matrix();
        for i in 0..layout.rows[k] {
            for j in 0..layout.cols[k - 1] {
                let mut c = blank();
                for l in 0..layout.rows[k - 1] {
                    c[layout.at(k - 1, l, j)] += &tn[(i, l)];
                }
                for l in 0..layout.cols[k] {
                    c[layout.at(k, i, l)] -= &tm[(l, j)];
                }
                out.push(Constraint {
                    coeffs: c,
                    modulus: n.level(k).gen_order(i).cloned(),
                });
            }
        }
    }
    out
}

/// `Hom(M, N)` as an abelian group with explicit generators.
#[derive(Clone, Debug)]
pub struct HomGroup {
    pub group: FgAbGroup,
    /// One morphism per generator of `group`, in order.
    pub generators: Vec<MackeyHom>,
    source: MackeyFunctor,
    target: MackeyFunctor,
}

impl HomGroup {
    pub fn source(&self) -> &MackeyFunctor {
        &self.source
    }

    pub fn target(&self) -> &MackeyFunctor {
        &self.target
    }

    /// `Σ c_j g_j`.
    pub fn combine(&self, coeffs: &[Int]) -> MackeyHom {
        assert_eq!(coeffs.len(), self.generators.len());
        let mut acc = MackeyHom::zero(&self.source, &self.target);
        for (c, g) in coeffs.iter().zip(&self.generators) {
            if !c.is_zero() {
                acc = acc.add(&g.scale(c));
            }
        }
        acc
    }

    /// Coordinates of `h` in terms of the generators.
    pub fn coordinates(&self, h: &MackeyHom) -> Option<Vec<Int>> {
        let mut c = solve_combination(&self.generators, h)?;
        self.group.reduce(&mut c);
        Some(c)
    }
}

/// Computes `Hom(M, N)` by solving the commuting-square equations over `Z`.
pub fn mackey_hom_group(
    m: &MackeyFunctor,
    n: &MackeyFunctor,
) -> Result<HomGroup, MackeyError> {
    m.same_group(n)?;
    let layout = Layout::new(m, n);
    let cons = constraints(m, n, &layout);
    let slack: Vec<usize> = cons
        .iter()
        .enumerate()
        .filter(|(_, c)| c.modulus.is_some())
        .map(|(r, _)| r)
        .collect();
    let mut a = IntMatrix::zeros(cons.len(), layout.total + slack.len());
    for (r, c) in cons.iter().enumerate() {
        for (j, v) in c.coeffs.iter().enumerate() {
            a[(r, j)] = v.clone();
        }
    }
    for (s, &r) in slack.iter().enumerate() {
        a[(r, layout.total + s)] = cons[r].modulus.clone().unwrap();
    }
    let lattice = if cons.is_empty() {
        IntMatrix::identity(layout.total)
    } else {
        kernel_basis(&a).top_rows(layout.total)
    };
    let w = lattice.cols();
    let null = null_columns(&layout, n);
    let rels = kernel_basis(&lattice.hstack(&null)).top_rows(w);
    let q = from_presentation(w, &rels);
    let vectors = &lattice * &q.lift;
    let generators = (0..vectors.cols())
        .map(|j| {
            let mats = layout.unflatten(&vectors.column(j));
            MackeyHom::from_matrices(m.clone(), n.clone(), mats)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(HomGroup {
        group: q.group,
        generators,
        source: m.clone(),
        target: n.clone(),
    })
}

/// Integers `c` with `Σ c_j homs[j] = target`, if any. All homs share
/// source and target with `target`.
pub(crate) fn solve_combination(homs: &[MackeyHom], target: &MackeyHom) -> Option<Vec<Int>> {
    let layout = Layout::new(&target.source, &target.target);
    let cols: Vec<Vec<Int>> = homs.iter().map(MackeyHom::flatten).collect();
    let a = IntMatrix::from_columns(&cols, layout.total).hstack(&null_columns(&layout, &target.target));
    let x = solve(&a, &target.flatten())?;
    Some(x[..homs.len()].to_vec())
}

/// Levelwise kernel with induced restrictions and transfers, plus its
/// inclusion.
pub fn kernel_mackey(f: &MackeyHom) -> Result<(MackeyFunctor, MackeyHom), MackeyError> {
    let m = &f.source;
    let subs: Vec<_> = f.components.iter().map(GroupHom::kernel).collect();
    let induced = |from: usize, to: usize, arrow: &GroupHom| -> Result<GroupHom, MackeyError> {
        let (s, t) = (&subs[from], &subs[to]);
        let mut cols = Vec::new();
        for g in 0..s.group.ngens() {
            let mut e = vec![Int::zero(); s.group.ngens()];
            e[g] = 1.into();
            let y = arrow.eval(&s.inclusion.eval(&e));
            let x = t.inclusion.lift(&y).ok_or_else(|| {
                MackeyError::InducedMapFailure(format!(
                    "level {from} kernel is not carried into level {to} kernel"
                ))
            })?;
            cols.push(x);
        }
        let mat = IntMatrix::from_columns(&cols, t.group.ngens());
        GroupHom::new(s.group.clone(), t.group.clone(), mat)
            .map_err(|e| MackeyError::InducedMapFailure(e.to_string()))
    };
    let mut res = Vec::new();
    let mut tr = Vec::new();
    for k in 1..=m.n() {
        res.push(induced(k, k - 1, m.res(k))?);
        tr.push(induced(k - 1, k, m.tr(k))?);
    }
    let levels = subs.iter().map(|s| s.group.clone()).collect();
    let k = MackeyFunctor::new(m.p(), levels, res, tr)
        .map_err(|e| MackeyError::InducedMapFailure(e.to_string()))?;
    let inc = MackeyHom::new(
        k.clone(),
        m.clone(),
        subs.into_iter().map(|s| s.inclusion).collect(),
    )?;
    Ok((k, inc))
}

/// Levelwise cokernel with induced restrictions and transfers, plus its
/// projection.
pub fn cokernel_mackey(f: &MackeyHom) -> Result<(MackeyFunctor, MackeyHom), MackeyError> {
    let (src, n) = (&f.source, &f.target);
    let quots: Vec<_> = f.components.iter().map(GroupHom::cokernel).collect();
    let induced = |from: usize, to: usize, arrow: &GroupHom| -> Result<GroupHom, MackeyError> {
        let (s, t) = (&quots[from], &quots[to]);
        // the image must land in the image
        for g in 0..src.level(from).ngens() {
            let mut e = vec![Int::zero(); src.level(from).ngens()];
            e[g] = 1.into();
            let y = t.projection.eval(&arrow.eval(&f.components[from].eval(&e)));
            if y.iter().any(|v| !v.is_zero()) {
                return Err(MackeyError::InducedMapFailure(format!(
                    "image at level {from} is not carried into the image at level {to}"
                )));
            }
        }
        let mut mat = &(t.projection.matrix() * arrow.matrix()) * &s.lift;
        crate::abgroup::reduce_rows(&t.group, &mut mat);
        GroupHom::new(s.group.clone(), t.group.clone(), mat)
            .map_err(|e| MackeyError::InducedMapFailure(e.to_string()))
    };
    let mut res = Vec::new();
    let mut tr = Vec::new();
    for k in 1..=n.n() {
        res.push(induced(k, k - 1, n.res(k))?);
        tr.push(induced(k - 1, k, n.tr(k))?);
    }
    let levels = quots.iter().map(|q| q.group.clone()).collect();
    let c = MackeyFunctor::new(n.p(), levels, res, tr)
        .map_err(|e| MackeyError::InducedMapFailure(e.to_string()))?;
    let proj = MackeyHom::new(
        n.clone(),
        c.clone(),
        quots.into_iter().map(|q| q.projection).collect(),
    )?;
    Ok((c, proj))
}

/// `0 -> A -i-> B -q-> C -> 0`, exact at every level.
#[derive(Clone, Debug)]
pub struct ShortExactSeq {
    i: MackeyHom,
    q: MackeyHom,
}

impl ShortExactSeq {
    pub fn new(i: MackeyHom, q: MackeyHom) -> Result<Self, MackeyError> {
        if i.target != q.source {
            return Err(MackeyError::NotExact("middle terms differ".into()));
        }
        for k in 0..=i.source.n() {
            let (ik, qk) = (&i.components[k], &q.components[k]);
            if !ik.is_injective() {
                return Err(MackeyError::NotExact(format!("i not injective at level {k}")));
            }
            if !qk.is_surjective() {
                return Err(MackeyError::NotExact(format!("q not surjective at level {k}")));
            }
            if !qk.compose(ik).is_zero() {
                return Err(MackeyError::NotExact(format!("q∘i ≠ 0 at level {k}")));
            }
            let ker = qk.kernel();
            for g in 0..ker.group.ngens() {
                let mut e = vec![Int::zero(); ker.group.ngens()];
                e[g] = 1.into();
                if ik.lift(&ker.inclusion.eval(&e)).is_none() {
                    return Err(MackeyError::NotExact(format!(
                        "ker q ⊄ im i at level {k}"
                    )));
                }
            }
        }
        Ok(Self { i, q })
    }

    pub fn inclusion(&self) -> &MackeyHom {
        &self.i
    }

    pub fn quotient(&self) -> &MackeyHom {
        &self.q
    }
}

#[derive(Clone, Debug)]
pub enum SplitVerdict {
    /// A section `s` with `q ∘ s = id`.
    Split { section: MackeyHom },
    NotSplit,
}

impl SplitVerdict {
    pub fn is_split(&self) -> bool {
        matches!(self, Self::Split { .. })
    }
}

/// Decides splitting by solving `q ∘ s = id_C` over `Hom(C, B)`.
pub fn is_split(seq: &ShortExactSeq) -> Result<SplitVerdict, MackeyError> {
    let b = seq.q.source();
    let c = seq.q.target();
    let h = mackey_hom_group(c, b)?;
    let pushed: Vec<MackeyHom> = h.generators.iter().map(|g| seq.q.compose(g)).collect();
    let id = MackeyHom::identity(c);
    match solve_combination(&pushed, &id) {
        Some(coeffs) => {
            let section = h.combine(&coeffs);
            debug_assert_eq!(seq.q.compose(&section), id);
            Ok(SplitVerdict::Split { section })
        }
        None => Ok(SplitVerdict::NotSplit),
    }
}
