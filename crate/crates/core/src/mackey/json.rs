//! JSON form of a diagram:
//! `{"p", "n", "levels": [{"rank", "torsion"}], "res": [matrix], "tr": [matrix]}`
//! with levels bottom to top and matrices as lists of rows. Integers that do
//! not fit in an `i64` are written as decimal strings.

use serde::{Deserialize, Serialize};

use crate::abgroup::{FgAbGroup, GroupHom, Int, IntMatrix};

use super::{MackeyError, MackeyFunctor};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum Num {
    Small(i64),
    Big(String),
}

impl From<&Int> for Num {
    fn from(x: &Int) -> Self {
        i64::try_from(x).map_or_else(|_| Num::Big(x.to_string()), Num::Small)
    }
}

impl TryFrom<&Num> for Int {
    type Error = MackeyError;
    fn try_from(x: &Num) -> Result<Self, MackeyError> {
        match x {
            Num::Small(v) => Ok(Int::from(*v)),
            Num::Big(s) => s
                .parse()
                .map_err(|_| MackeyError::Shape(format!("not an integer: {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Level {
    rank: usize,
    torsion: Vec<Num>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct Wire {
    p: u64,
    n: usize,
    levels: Vec<Level>,
    res: Vec<Vec<Vec<Num>>>,
    tr: Vec<Vec<Vec<Num>>>,
}

fn matrix_out(h: &GroupHom) -> Vec<Vec<Num>> {
    h.matrix().row_vecs().iter().map(|r| r.iter().map(Num::from).collect()).collect()
}

fn matrix_in(
    rows: &[Vec<Num>],
    source: &FgAbGroup,
    target: &FgAbGroup,
) -> Result<GroupHom, MackeyError> {
    let cols = source.ngens();
    if rows.len() != target.ngens() || rows.iter().any(|r| r.len() != cols) {
        return Err(MackeyError::Shape(format!(
            "matrix must be {} x {cols}",
            target.ngens()
        )));
    }
    let rows = rows
        .iter()
        .map(|r| r.iter().map(Int::try_from).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GroupHom::new(
        source.clone(),
        target.clone(),
        IntMatrix::from_rows(rows, cols),
    )?)
}

impl From<&MackeyFunctor> for Wire {
    fn from(m: &MackeyFunctor) -> Self {
        Wire {
            p: m.p(),
            n: m.n(),
            levels: m
                .levels()
                .iter()
                .map(|g| Level {
                    rank: g.rank(),
                    torsion: g.torsion().iter().map(Num::from).collect(),
                })
                .collect(),
            res: (1..=m.n()).map(|k| matrix_out(m.res(k))).collect(),
            tr: (1..=m.n()).map(|k| matrix_out(m.tr(k))).collect(),
        }
    }
}

impl TryFrom<&Wire> for MackeyFunctor {
    type Error = MackeyError;
    fn try_from(w: &Wire) -> Result<Self, MackeyError> {
        if w.levels.len() != w.n + 1 {
            return Err(MackeyError::Shape(format!(
                "n = {} needs {} levels, got {}",
                w.n,
                w.n + 1,
                w.levels.len()
            )));
        }
        if w.res.len() != w.n || w.tr.len() != w.n {
            return Err(MackeyError::Shape(format!("n = {} needs {} maps each way", w.n, w.n)));
        }
        let levels = w
            .levels
            .iter()
            .map(|l| {
                let torsion = l.torsion.iter().map(Int::try_from).collect::<Result<Vec<_>, _>>()?;
                Ok(FgAbGroup::new(l.rank, torsion)?)
            })
            .collect::<Result<Vec<_>, MackeyError>>()?;
        let mut res = Vec::with_capacity(w.n);
        let mut tr = Vec::with_capacity(w.n);
        for k in 1..=w.n {
            res.push(matrix_in(&w.res[k - 1], &levels[k], &levels[k - 1])?);
            tr.push(matrix_in(&w.tr[k - 1], &levels[k - 1], &levels[k])?);
        }
        MackeyFunctor::new(w.p, levels, res, tr)
    }
}

impl MackeyFunctor {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(Wire::from(self)).expect("diagram serializes")
    }

    /// Parses and validates; malformed or invalid diagrams are errors.
    pub fn from_json(v: &serde_json::Value) -> Result<Self, MackeyError> {
        let w: Wire = serde_json::from_value(v.clone())
            .map_err(|e| MackeyError::Shape(format!("bad JSON diagram: {e}")))?;
        MackeyFunctor::try_from(&w)
    }
}

impl Serialize for MackeyFunctor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        Wire::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for MackeyFunctor {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = Wire::deserialize(d)?;
        MackeyFunctor::try_from(&w).map_err(serde::de::Error::custom)
    }
}
