//! Consistency checks that run the engine against its own consequences:
//! Anderson duality and the long exact sequences of `S(λ_m)_+`.

use num_integer::Integer;

use crate::abgroup::{FgAbGroup, Int};
use crate::grading::Grading;
use crate::mackey::{iso_test, IsoConfig, IsoVerdict, MackeyFunctor};

use super::{CohomError, Engine};

/// One checked assertion.
#[derive(Clone, Debug)]
pub struct CheckLine {
    pub rule: String,
    pub assertion: String,
    pub ok: bool,
}

fn line(rule: &str, assertion: String, ok: bool) -> CheckLine {
    CheckLine {
        rule: rule.into(),
        assertion,
        ok,
    }
}

#[derive(Clone, Debug)]
pub struct AndersonReport {
    pub grading: Grading,
    pub lines: Vec<CheckLine>,
}

impl AndersonReport {
    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.ok)
    }
}

#[derive(Clone, Debug)]
pub struct LesReport {
    pub grading: Grading,
    pub m: usize,
    pub lines: Vec<CheckLine>,
}

impl LesReport {
    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.ok)
    }
}

/// The two pieces of `H^α(S(λ_m)_+)` and the orders and ranks they force on
/// the middle term.
#[derive(Clone, Debug)]
pub struct SphereCohomData {
    pub m: usize,
    /// `Θ*_m(H^{α-1}_{C_{p^m}})`.
    pub left: MackeyFunctor,
    /// `Θ_m(H^α_{C_{p^m}})`.
    pub right: MackeyFunctor,
    /// Levelwise order of the middle term; `None` where it is infinite.
    pub orders: Vec<Option<Int>>,
    pub ranks: Vec<usize>,
}

impl SphereCohomData {
    pub fn is_zero(&self) -> bool {
        self.left.is_zero() && self.right.is_zero()
    }
}

impl Engine {
    fn known(&self, p: u64, a: &Grading, flip: bool) -> Result<MackeyFunctor, CohomError> {
        let r = self.compute_with(p, a, flip)?;
        r.functor()
            .cloned()
            .ok_or_else(|| CohomError::UnknownDependency(format!("C_{p}^{}: {a}", a.n())))
    }

    pub fn sphere_lambda_cohom(
        &self,
        p: u64,
        alpha: &Grading,
        m: usize,
    ) -> Result<SphereCohomData, CohomError> {
        let n = alpha.n();
        let sub = alpha.restrict_grading(m);
        let left = self
            .known(p, &sub.plus_const(-1), true)?
            .theta_star(n)
            .expect("extension of a valid functor");
        let right = self
            .known(p, &sub, true)?
            .theta(n)
            .expect("extension of a valid functor");
        let orders = (0..=n)
            .map(|k| Some(left.level(k).order()? * right.level(k).order()?))
            .collect();
        let ranks = (0..=n)
            .map(|k| left.level(k).rank() + right.level(k).rank())
            .collect();
        Ok(SphereCohomData {
            m,
            left,
            right,
            orders,
            ranks,
        })
    }

    /// For `|α| != 0`: `H^α ≅ Ext_L(H^{3-λ0-α})`. For `|α| = 0`, levelwise
    /// `H^α ≅ Ext(H^{3-λ0-α}) ⊕ Z^{rank H^{2-λ0-α}}`. Both sides are computed
    /// without the duality rule.
    pub fn check_anderson(&self, p: u64, alpha: &Grading) -> Result<AndersonReport, CohomError> {
        let lhs = self.known(p, alpha, false)?;
        let dual = alpha.anderson_dual();
        let rhs = self.known(p, &dual, false)?;
        let mut lines = Vec::new();
        if alpha.dim() != 0 {
            let ext = rhs.ext_dual().expect("Ext_L of a valid functor");
            let v = iso_test(&lhs, &ext, &IsoConfig::default()).expect("same group");
            let (ok, why) = match v {
                IsoVerdict::Iso { .. } => (true, "isomorphic".to_string()),
                IsoVerdict::NotIso { reason } => (false, reason),
                IsoVerdict::Unknown { reason } => (false, format!("inconclusive: {reason}")),
            };
            lines.push(line(
                "anderson-duality",
                format!("H^({alpha}) ≅ Ext_L(H^({dual})): {why}"),
                ok,
            ));
        } else {
            let hom_g = alpha.anderson_hom_dual();
            let free = self.known(p, &hom_g, false)?;
            for k in 0..=alpha.n() {
                let want = FgAbGroup::direct_sum(
                    &rhs.level(k).ext_z_dual(),
                    &FgAbGroup::free(free.level(k).rank()),
                )
                .0;
                let got = lhs.level(k);
                lines.push(line(
                    "anderson-duality-dim0",
                    format!("level {k}: {got} vs Ext({}) + Z^{}", rhs.level(k), free.level(k).rank()),
                    *got == want,
                ));
            }
        }
        Ok(AndersonReport {
            grading: alpha.clone(),
            lines,
        })
    }

    /// Bookkeeping forced by exactness of
    /// `H^α → H^{α+λ_m} → H^{α+λ_m}(S(λ_m)_+) → H^{α+1} → H^{α+1+λ_m}`.
    pub fn check_les_orders(
        &self,
        p: u64,
        alpha: &Grading,
        m: usize,
    ) -> Result<LesReport, CohomError> {
        let beta = alpha.plus_lambda(m, 1);
        let a = self.known(p, alpha, true)?;
        let b = self.known(p, &beta, true)?;
        let a1 = self.known(p, &alpha.plus_const(1), true)?;
        let x = self.sphere_lambda_cohom(p, &beta, m)?;
        let x_prev = self.sphere_lambda_cohom(p, &beta.plus_const(-1), m)?;
        let mut lines = Vec::new();
        if x.is_zero() && x_prev.is_zero() {
            let v = iso_test(&a, &b, &IsoConfig::default()).expect("same group");
            let ok = v.is_iso();
            let why = match v {
                IsoVerdict::Iso { .. } => "isomorphic".to_string(),
                IsoVerdict::NotIso { reason } => reason,
                IsoVerdict::Unknown { reason } => format!("inconclusive: {reason}"),
            };
            lines.push(line(
                "a-lambda-periodicity",
                format!("H^({alpha}) ≅ H^({beta}) (sphere terms vanish): {why}"),
                ok,
            ));
        }
        let n = alpha.n();
        for k in 0..=n {
            // X_prev → A → B → X → A1
            let (ga, gb, ga1) = (a.level(k), b.level(k), a1.level(k));
            let (rx, rxp) = (x.ranks[k], x_prev.ranks[k]);
            lines.push(line(
                "les-rank",
                format!("level {k}: rank H^({beta}) <= rank H^({alpha}) + rank X"),
                gb.rank() <= ga.rank() + rx,
            ));
            lines.push(line(
                "les-rank",
                format!("level {k}: rank H^({alpha}) <= rank X' + rank H^({beta})"),
                ga.rank() <= rxp + gb.rank(),
            ));
            lines.push(line(
                "les-rank",
                format!("level {k}: rank X <= rank H^({beta}) + rank H^({})", alpha.plus_const(1)),
                rx <= gb.rank() + ga1.rank(),
            ));
            let divides = |small: Option<Int>, x: Option<Int>, y: Option<Int>| match (small, x, y) {
                (Some(s), Some(x), Some(y)) => Some((x * y).is_multiple_of(&s)),
                _ => None,
            };
            let checks = [
                (
                    format!("level {k}: |H^({beta})| divides |H^({alpha})|·|X|"),
                    divides(gb.order(), ga.order(), x.orders[k].clone()),
                ),
                (
                    format!("level {k}: |H^({alpha})| divides |X'|·|H^({beta})|"),
                    divides(ga.order(), x_prev.orders[k].clone(), gb.order()),
                ),
                (
                    format!("level {k}: |X| divides |H^({beta})|·|H^({})|", alpha.plus_const(1)),
                    divides(x.orders[k].clone(), gb.order(), ga1.order()),
                ),
            ];
            for (text, ok) in checks {
                if let Some(ok) = ok {
                    lines.push(line("les-order", text, ok));
                }
            }
        }
        Ok(LesReport {
            grading: alpha.clone(),
            m,
            lines,
        })
    }
}
