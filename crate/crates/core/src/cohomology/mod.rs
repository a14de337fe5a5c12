//! `H^α_{C_{p^n}}(S^0; Z)` as a Mackey functor, computed by a fixed list of
//! closed forms and reductions, with a derivation trace.

mod checks;
mod rules;

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::families::CatalogExpr;
use crate::grading::Grading;
use crate::mackey::{is_prime, MackeyFunctor};

pub use checks::{
    AndersonReport, CheckLine, LesReport, SphereCohomData,
};
pub use rules::nonsplit_diagram;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CohomError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("unknown dependency: {0}")]
    UnknownDependency(String),
}

/// One rule application.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub rule: String,
    pub basis: String,
    pub subquery: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Known(MackeyFunctor),
    Unknown(String),
}

#[derive(Clone, Debug)]
pub struct CohomResult {
    pub p: u64,
    pub grading: Grading,
    pub status: Status,
    /// Catalog name carried along by the rules, when every step had one.
    pub expr: Option<CatalogExpr>,
    pub trace: Vec<TraceEntry>,
}

impl CohomResult {
    pub fn functor(&self) -> Option<&MackeyFunctor> {
        match &self.status {
            Status::Known(m) => Some(m),
            Status::Unknown(_) => None,
        }
    }

    pub fn is_known(&self) -> bool {
        matches!(self.status, Status::Known(_))
    }

    pub fn trace_json(&self) -> serde_json::Value {
        serde_json::to_value(&self.trace).expect("trace entries serialize")
    }
}

/// What a single rule produces.
#[derive(Clone, Debug)]
pub(crate) struct Outcome {
    functor: MackeyFunctor,
    expr: Option<CatalogExpr>,
    trace: Vec<TraceEntry>,
}

type Key = (u64, Grading, bool);

/// The rule engine with its memo table. Cheap to share across threads.
#[derive(Default)]
pub struct Engine {
    cache: RwLock<HashMap<Key, Arc<CohomResult>>>,
}

impl Engine {
    pub fn new() -> Self {
        Self::default()
    }

    /// `H^α` over `C_{p^n}`, `n = alpha.n()`.
    pub fn compute(&self, p: u64, alpha: &Grading) -> Result<Arc<CohomResult>, CohomError> {
        self.compute_with(p, alpha, true)
    }

    /// As [`compute`](Self::compute); `allow_flip = false` disables the
    /// duality rule at the top level (recursive calls keep it).
    pub fn compute_with(
        &self,
        p: u64,
        alpha: &Grading,
        allow_flip: bool,
    ) -> Result<Arc<CohomResult>, CohomError> {
        if !is_prime(p) {
            return Err(CohomError::NotPrime(p));
        }
        let mut r = (*self.compute_inner(p, alpha, allow_flip)).clone();
        if p == 2 {
            r.trace.insert(
                0,
                TraceEntry {
                    rule: "p2-caveat".into(),
                    basis: "formulas are stated for odd primes; RO(C_{2^n}) also has a sign representation not modelled here".into(),
                    subquery: None,
                },
            );
        }
        Ok(Arc::new(r))
    }

    pub(crate) fn compute_inner(&self, p: u64, alpha: &Grading, flip: bool) -> Arc<CohomResult> {
        let key = (p, alpha.clone(), flip);
        if let Some(hit) = self.cache.read().expect("cache lock").get(&key) {
            return hit.clone();
        }
        let result = Arc::new(self.dispatch(p, alpha, flip));
        // write-once: keep whichever equal value landed first
        self.cache
            .write()
            .expect("cache lock")
            .entry(key)
            .or_insert(result)
            .clone()
    }

    fn dispatch(&self, p: u64, alpha: &Grading, flip: bool) -> CohomResult {
        for (_, _, rule) in rules::RULES {
            if let Some(o) = rule(self, p, alpha, flip) {
                debug_assert!(o.functor.is_valid());
                return CohomResult {
                    p,
                    grading: alpha.clone(),
                    status: Status::Known(o.functor),
                    expr: o.expr,
                    trace: o.trace,
                };
            }
        }
        CohomResult {
            p,
            grading: alpha.clone(),
            status: Status::Unknown("no rule applies to this grading".into()),
            expr: None,
            trace: vec![TraceEntry {
                rule: "unknown".into(),
                basis: "outside every stated hypothesis".into(),
                subquery: None,
            }],
        }
    }

    /// Every rule that fires at `alpha`, each evaluated on its own, for
    /// cross-checking overlapping rules.
    pub fn applicable_rules(&self, p: u64, alpha: &Grading) -> Vec<(String, MackeyFunctor)> {
        rules::RULES
            .iter()
            .filter_map(|(id, _, rule)| {
                rule(self, p, alpha, true).map(|o| (id.to_string(), o.functor))
            })
            .collect()
    }

    pub fn cache_len(&self) -> usize {
        self.cache.read().expect("cache lock").len()
    }
}

/// Rule ids used by the engine, in dispatch order.
pub fn rule_ids() -> Vec<&'static str> {
    rules::RULES.iter().map(|(id, _, _)| *id).collect()
}

/// Short hash identifying the rule table, for tagging stored results.
pub fn engine_version() -> String {
    let mut h = Sha256::new();
    h.update(env!("CARGO_PKG_VERSION"));
    for (id, desc, _) in rules::RULES {
        h.update(id);
        h.update([0]);
        h.update(desc);
        h.update([0]);
    }
    h.update(include_str!("rules.rs"));
    let digest = h.finalize();
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}
