//! Gradings `α = c + Σ a_i λ_i` in `RO(C_{p^n})`, where `λ_i` is the
//! rotation by `2π p^i / p^n`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GradingError {
    #[error("parse error at column {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("index error: {0}")]
    Index(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Grading {
    n: usize,
    c: i64,
    a: Vec<i64>,
}

impl Grading {
    pub fn new(c: i64, a: Vec<i64>) -> Self {
        Self { n: a.len(), c, a }
    }

    pub fn zero(n: usize) -> Self {
        Self::new(0, vec![0; n])
    }

    /// `c` copies of the trivial representation.
    pub fn trivial(n: usize, c: i64) -> Self {
        Self::new(c, vec![0; n])
    }

    /// `λ_i` over `C_{p^n}`.
    pub fn lambda(n: usize, i: usize) -> Self {
        let mut a = vec![0; n];
        a[i] = 1;
        Self::new(0, a)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    pub fn a(&self) -> &[i64] {
        &self.a
    }

    pub fn is_zero(&self) -> bool {
        self.c == 0 && self.a.iter().all(|&x| x == 0)
    }

    /// `|α^{C_{p^m}}| = c + 2 Σ_{i >= m} a_i`, for `0 <= m <= n`.
    pub fn fixed_dim(&self, m: usize) -> i64 {
        self.c + 2 * self.a[m..].iter().sum::<i64>()
    }

    /// `|α|`.
    pub fn dim(&self) -> i64 {
        self.fixed_dim(0)
    }

    pub fn fixed_dims(&self) -> Vec<i64> {
        (0..=self.n).map(|m| self.fixed_dim(m)).collect()
    }

    /// Parity of every fixed-point dimension.
    pub fn is_even(&self) -> bool {
        self.c % 2 == 0
    }

    pub fn plus(&self, other: &Grading) -> Grading {
        assert_eq!(self.n, other.n);
        Grading::new(
            self.c + other.c,
            self.a.iter().zip(&other.a).map(|(x, y)| x + y).collect(),
        )
    }

    pub fn minus(&self, other: &Grading) -> Grading {
        self.plus(&other.negated())
    }

    pub fn negated(&self) -> Grading {
        Grading::new(-self.c, self.a.iter().map(|x| -x).collect())
    }

    pub fn plus_const(&self, k: i64) -> Grading {
        Grading::new(self.c + k, self.a.clone())
    }

    pub fn plus_lambda(&self, i: usize, k: i64) -> Grading {
        let mut a = self.a.clone();
        a[i] += k;
        Grading::new(self.c, a)
    }

    /// `3 - λ_0 - α`.
    pub fn anderson_dual(&self) -> Grading {
        self.reflect(3)
    }

    /// `2 - λ_0 - α`, the grading of the free part in the duality sequence.
    pub fn anderson_hom_dual(&self) -> Grading {
        self.reflect(2)
    }

    fn reflect(&self, k: i64) -> Grading {
        let mut a: Vec<i64> = self.a.iter().map(|x| -x).collect();
        if let Some(a0) = a.first_mut() {
            *a0 -= 1;
        }
        Grading::new(k - self.c, a)
    }

    /// `α^{C_p}` as a grading of `C_{p^n}/C_p ≅ C_{p^{n-1}}`.
    pub fn quotient_grading(&self) -> Grading {
        self.fixed_grading(1)
    }

    /// `α^{C_{p^m}}` as a grading of `C_{p^{n-m}}`.
    pub fn fixed_grading(&self, m: usize) -> Grading {
        assert!(m <= self.n);
        Grading::new(self.c, self.a[m..].to_vec())
    }

    /// Restriction of `α` to the subgroup `C_{p^m}`: each `λ_i` with `i >= m`
    /// becomes two trivial summands.
    pub fn restrict_grading(&self, m: usize) -> Grading {
        assert!(m <= self.n);
        Grading::new(self.fixed_dim(m), self.a[..m].to_vec())
    }

    /// Parses `expr := term (('+'|'-') term)*`, `term := INT | [INT '*'] 'L'
    /// (INT | '(' INT ')')`. `L i` is `λ_i`; `L(m)` is `λ(m)` for
    /// `1 <= m < p^n`, normalized to `λ_k` where `m = r p^k`,
    /// `p ∤ r`.
    pub fn parse(text: &str, p: u64, n: usize) -> Result<Grading, GradingError> {
        Ok(Self::parse_with_notes(text, p, n)?.0)
    }

    /// As [`parse`](Self::parse), also returning a note for each `λ(m)`
    /// rewritten to `λ_k`.
    pub fn parse_with_notes(
        text: &str,
        p: u64,
        n: usize,
    ) -> Result<(Grading, Vec<String>), GradingError> {
        let mut lx = Lexer::new(text);
        let mut g = Grading::zero(n);
        let mut notes = Vec::new();
        let mut sign = match lx.peek() {
            Some('-') => {
                lx.bump();
                -1
            }
            Some('+') => {
                lx.bump();
                1
            }
            _ => 1,
        };
        loop {
            let (coef, lam) = lx.term()?;
            match lam {
                None => g.c += sign * coef,
                Some(Lambda::Index(i)) => {
                    if i >= n as u64 {
                        return Err(GradingError::Index(format!("λ_{i} needs i < n = {n}")));
                    }
                    g.a[i as usize] += sign * coef;
                }
                Some(Lambda::Rotation(m)) => {
                    let k = normalize_rotation(m, p, n)?;
                    if m != (p as u128).pow(k as u32) as u64 {
                        notes.push(format!("λ({m}) ≃ λ_{k}"));
                    }
                    g.a[k] += sign * coef;
                }
            }
            match lx.peek() {
                None => break,
                Some('+') => sign = 1,
                Some('-') => sign = -1,
                Some(ch) => return Err(lx.error(format!("expected '+' or '-', found '{ch}'"))),
            }
            lx.bump();
        }
        Ok((g, notes))
    }
}

/// `k` with `m = r p^k`, `p ∤ r`, after checking `1 <= m < p^n`.
fn normalize_rotation(m: u64, p: u64, n: usize) -> Result<usize, GradingError> {
    let order = (p as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if m == 0 || m as u128 >= order {
        return Err(GradingError::Index(format!(
            "λ({m}) needs 1 <= m < {order} for C_{p}^{n}"
        )));
    }
    let (mut m, mut k) = (m, 0);
    while m % p == 0 {
        m /= p;
        k += 1;
    }
    Ok(k)
}

enum Lambda {
    Index(u64),
    Rotation(u64),
}

struct Lexer {
    chars: Vec<char>,
    pos: usize,
}

impl Lexer {
    fn new(src: &str) -> Self {
        Self {
            chars: src.chars().collect(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) {
        self.pos += 1;
    }

    fn error(&self, msg: String) -> GradingError {
        GradingError::Parse {
            pos: self.pos + 1,
            msg,
        }
    }

    fn int(&mut self) -> Result<u64, GradingError> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer".into()));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| GradingError::Parse {
            pos: start + 1,
            msg: format!("integer {s} is too large"),
        })
    }

    fn lambda(&mut self) -> Result<Lambda, GradingError> {
        // 'L' already consumed
        if self.peek() == Some('(') {
            self.bump();
            let m = self.int()?;
            if self.peek() != Some(')') {
                return Err(self.error("expected ')'".into()));
            }
            self.bump();
            Ok(Lambda::Rotation(m))
        } else {
            Ok(Lambda::Index(self.int()?))
        }
    }

    fn term(&mut self) -> Result<(i64, Option<Lambda>), GradingError> {
        let to_i64 = |v: u64, pos: usize| {
            i64::try_from(v).map_err(|_| GradingError::Parse {
                pos,
                msg: format!("{v} is too large"),
            })
        };
        match self.peek() {
            Some('L') => {
                self.bump();
                Ok((1, Some(self.lambda()?)))
            }
            Some(c) if c.is_ascii_digit() => {
                let pos = self.pos + 1;
                let v = to_i64(self.int()?, pos)?;
                if self.peek() == Some('*') {
                    self.bump();
                    if self.peek() != Some('L') {
                        return Err(self.error("expected 'L' after '*'".into()));
                    }
                    self.bump();
                    Ok((v, Some(self.lambda()?)))
                } else {
                    Ok((v, None))
                }
            }
            Some(c) => Err(self.error(format!("unexpected '{c}'"))),
            None => Err(self.error("unexpected end of input".into())),
        }
    }
}

impl fmt::Display for Grading {
    /// `c + a0*L0 + a1*L1 + ...`, omitting zero terms.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(i64, String)> = Vec::new();
        if self.c != 0 {
            terms.push((self.c, String::new()));
        }
        for (i, &a) in self.a.iter().enumerate() {
            if a != 0 {
                terms.push((a, format!("L{i}")));
            }
        }
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (v, name)) in terms.iter().enumerate() {
            let mag = v.unsigned_abs();
            if idx == 0 {
                if *v < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if *v < 0 { '-' } else { '+' })?;
            }
            match (name.is_empty(), mag) {
                (true, _) => write!(f, "{mag}")?,
                (false, 1) => write!(f, "{name}")?,
                (false, _) => write!(f, "{mag}*{name}")?,
            }
        }
        Ok(())
    }
}
