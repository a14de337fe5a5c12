//! The top-level group of `H^α` on the positive cone, read off from the ring
//! presentation
//! `Z[a_i, u_i] / (p^{n-i} a_i, u_i a_j - p^{j-i} u_j a_i)` one grading at a
//! time. Used as an independent check on the rule engine.

use std::fmt;

use thiserror::Error;

use crate::abgroup::{from_presentation, int, FgAbGroup, IntMatrix};
use crate::cohomology::{CohomError, Engine};
use crate::grading::Grading;
use crate::mackey::pow;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ConeError {
    #[error("{0} is outside the positive cone")]
    OutsideCone(Grading),
    #[error("cone gives {cone} but the engine gives {engine} at {grading}")]
    Mismatch {
        grading: Grading,
        cone: FgAbGroup,
        engine: FgAbGroup,
    },
    #[error(transparent)]
    Engine(#[from] CohomError),
}

/// `Π a_i^{e_i} u_i^{f_i}`, of grading `Σ (e_i + f_i) λ_i - 2 Σ f_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub e: Vec<u32>,
    pub f: Vec<u32>,
}

impl Monomial {
    pub fn grading(&self) -> Grading {
        let a = self
            .e
            .iter()
            .zip(&self.f)
            .map(|(&e, &f)| i64::from(e + f))
            .collect();
        let c = -2 * self.f.iter().map(|&f| i64::from(f)).sum::<i64>();
        Grading::new(c, a)
    }

    /// `u_i a_j ↦ u_j a_i` for `i < j`, when both factors are present.
    fn rewrite(&self, i: usize, j: usize) -> Option<Monomial> {
        if self.f[i] == 0 || self.e[j] == 0 {
            return None;
        }
        let mut m = self.clone();
        m.f[i] -= 1;
        m.e[j] -= 1;
        m.f[j] += 1;
        m.e[i] += 1;
        Some(m)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (name, exps) in [("a", &self.e), ("u", &self.f)] {
            for (i, &k) in exps.iter().enumerate() {
                match k {
                    0 => {}
                    1 => parts.push(format!("{name}{i}")),
                    k => parts.push(format!("{name}{i}^{k}")),
                }
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// Display label for the class `[p^k * u_i^{-j}]`, used only in diagram
/// annotations.
pub fn inverse_class_label(k: u32, i: usize, j: u32) -> String {
    let coeff = match k {
        0 => String::new(),
        1 => "p*".into(),
        k => format!("p^{k}*"),
    };
    format!("[{coeff}u{i}^-{j}]")
}

/// Display label for the ratio class `a_i / a_j`.
pub fn ratio_label(i: usize, j: usize) -> String {
    format!("a{i}/a{j}")
}

pub fn in_positive_cone(alpha: &Grading) -> bool {
    alpha.a().iter().all(|&x| x >= 0) && alpha.c() <= 0 && alpha.c() % 2 == 0
}

/// Every monomial of grading `alpha`, in lexicographic order. Empty when the
/// constraints have no solution.
pub fn monomials_in_grading(alpha: &Grading) -> Result<Vec<Monomial>, ConeError> {
    if !in_positive_cone(alpha) {
        return Err(ConeError::OutsideCone(alpha.clone()));
    }
    let a: Vec<u32> = alpha.a().iter().map(|&x| x as u32).collect();
    let total = (-alpha.c() / 2) as u32;
    let mut out = Vec::new();
    let mut f = vec![0u32; a.len()];
    fill(&a, 0, total, &mut f, &mut out);
    out.sort();
    Ok(out)
}

fn fill(a: &[u32], i: usize, left: u32, f: &mut Vec<u32>, out: &mut Vec<Monomial>) {
    if i == a.len() {
        if left == 0 {
            let e = a.iter().zip(f.iter()).map(|(x, y)| x - y).collect();
            out.push(Monomial { e, f: f.clone() });
        }
        return;
    }
    for k in 0..=a[i].min(left) {
        f[i] = k;
        fill(a, i + 1, left - k, f, out);
    }
    f[i] = 0;
}

/// The degree-`alpha` part of the presentation, as an abelian group.
pub fn group_in_grading(p: u64, alpha: &Grading) -> Result<FgAbGroup, ConeError> {
    let n = alpha.n();
    let mons = monomials_in_grading(alpha)?;
    let index = |m: &Monomial| mons.binary_search(m).expect("rewrites stay in the grading");
    let mut relations: Vec<Vec<_>> = Vec::new();
    for (r, m) in mons.iter().enumerate() {
        for i in 0..n {
            if m.e[i] > 0 {
                let mut col = vec![int(0); mons.len()];
                col[r] = pow(p, (n - i) as u32);
                relations.push(col);
            }
            for j in i + 1..n {
                if let Some(m2) = m.rewrite(i, j) {
                    let mut col = vec![int(0); mons.len()];
                    col[r] += 1;
                    col[index(&m2)] -= pow(p, (j - i) as u32);
                    relations.push(col);
                }
            }
        }
    }
    let rel = IntMatrix::from_columns(&relations, mons.len());
    Ok(from_presentation(mons.len(), &rel).group)
}

/// The outcome of comparing the cone with the engine at one grading.
#[derive(Clone, Debug)]
pub struct ConeReport {
    pub grading: Grading,
    pub monomials: Vec<Monomial>,
    pub cone: FgAbGroup,
    pub engine: FgAbGroup,
}

/// Checks `group_in_grading` against the top level of the engine's answer.
pub fn compare_with_engine(
    engine: &Engine,
    p: u64,
    alpha: &Grading,
) -> Result<ConeReport, ConeError> {
    let monomials = monomials_in_grading(alpha)?;
    let cone = group_in_grading(p, alpha)?;
    let r = engine.compute(p, alpha)?;
    let top = r
        .functor()
        .ok_or_else(|| CohomError::UnknownDependency(format!("C_{p}^{}: {alpha}", alpha.n())))?
        .level(alpha.n())
        .clone();
    if top != cone {
        return Err(ConeError::Mismatch {
            grading: alpha.clone(),
            cone,
            engine: top,
        });
    }
    Ok(ConeReport {
        grading: alpha.clone(),
        monomials,
        cone,
        engine: top,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(c: i64, a: &[i64]) -> Grading {
        Grading::new(c, a.to_vec())
    }

    #[test]
    fn monomial_lists() {
        let names = |a: &Grading| -> Vec<String> {
            monomials_in_grading(a).unwrap().iter().map(|m| m.to_string()).collect()
        };
        assert_eq!(names(&g(0, &[0, 2])), ["a1^2"]);
        assert_eq!(names(&g(-2, &[1, 1])), ["a1*u0", "a0*u1"]);
        assert_eq!(names(&g(-2, &[2, 0])), ["a0*u0"]);
        assert_eq!(names(&g(0, &[0, 0])), ["1"]);
        assert!(names(&g(-4, &[1, 0])).is_empty());
        assert!(monomials_in_grading(&g(1, &[0, 0])).is_err());
        assert!(monomials_in_grading(&g(0, &[-1, 0])).is_err());
    }

    #[test]
    fn monomial_grading_roundtrip() {
        for m in monomials_in_grading(&g(-4, &[2, 3])).unwrap() {
            assert_eq!(m.grading(), g(-4, &[2, 3]));
        }
    }

    #[test]
    fn worked_groups() {
        for p in [2u64, 3, 5] {
            let pi = int(p as i64);
            assert_eq!(group_in_grading(p, &g(0, &[0, 2])).unwrap(), FgAbGroup::cyclic(&pi));
            let p2 = FgAbGroup::cyclic(&(&pi * &pi));
            assert_eq!(group_in_grading(p, &g(0, &[1, 0])).unwrap(), p2);
            assert_eq!(group_in_grading(p, &g(-2, &[1, 1])).unwrap(), p2);
            assert_eq!(group_in_grading(p, &g(0, &[0, 0])).unwrap(), FgAbGroup::free(1));
        }
    }

    #[test]
    fn labels() {
        assert_eq!(inverse_class_label(1, 0, 2), "[p*u0^-2]");
        assert_eq!(inverse_class_label(0, 1, 1), "[u1^-1]");
        assert_eq!(ratio_label(1, 0), "a1/a0");
    }
}
