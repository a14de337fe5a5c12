//! Grading ranges of the form `a0=-2..2,a1=0..3,c=-6..6`.

use std::ops::RangeInclusive;

use mackey_cpn::grading::Grading;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradingRange {
    pub c: RangeInclusive<i64>,
    pub a: Vec<RangeInclusive<i64>>,
}

impl GradingRange {
    /// Coordinates not mentioned are fixed at 0. Bounds are inclusive; a
    /// single number `k` means `k..k`.
    pub fn parse(text: &str, n: usize) -> Result<Self, String> {
        let mut c = None;
        let mut a: Vec<Option<RangeInclusive<i64>>> = vec![None; n];
        for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, val) = part
                .split_once('=')
                .ok_or_else(|| format!("expected key=lo..hi, got {part:?}"))?;
            let r = parse_bounds(val.trim())?;
            let slot = match key.trim() {
                "c" => &mut c,
                k => {
                    let i: usize = k
                        .strip_prefix('a')
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| format!("unknown range key {k:?}"))?;
                    a.get_mut(i)
                        .ok_or_else(|| format!("{k} is out of range for n = {n}"))?
                }
            };
            if slot.replace(r).is_some() {
                return Err(format!("{} given twice", key.trim()));
            }
        }
        Ok(GradingRange {
            c: c.unwrap_or(0..=0),
            a: a.into_iter().map(|r| r.unwrap_or(0..=0)).collect(),
        })
    }

    /// All gradings in the box, `c` outermost, then `a0`, `a1`, ... in
    /// ascending order.
    pub fn gradings(&self) -> Vec<Grading> {
        let mut out = Vec::new();
        let axes: Vec<&RangeInclusive<i64>> = std::iter::once(&self.c).chain(&self.a).collect();
        if axes.iter().any(|r| r.is_empty()) {
            return out;
        }
        let mut cur: Vec<i64> = axes.iter().map(|r| *r.start()).collect();
        loop {
            out.push(Grading::new(cur[0], cur[1..].to_vec()));
            let mut i = axes.len();
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if cur[i] < *axes[i].end() {
                    cur[i] += 1;
                    break;
                }
                cur[i] = *axes[i].start();
            }
        }
    }
}

fn parse_bounds(s: &str) -> Result<RangeInclusive<i64>, String> {
    let num = |t: &str| {
        t.trim()
            .parse::<i64>()
            .map_err(|_| format!("bad bound {t:?}"))
    };
    match s.split_once("..") {
        Some((lo, hi)) => Ok(num(lo)?..=num(hi)?),
        None => {
            let k = num(s)?;
            Ok(k..=k)
        }
    }
}
