//! `mackey check`: run a family of consistency checks over gradings.

use clap::ValueEnum;
use mackey_cpn::cohomology::{nonsplit_diagram, CohomError, Engine};
use mackey_cpn::cone::{compare_with_engine, in_positive_cone, ConeError};
use mackey_cpn::families::{b_ts, t_n, z_s, SubsetSpec};
use mackey_cpn::grading::Grading;
use mackey_cpn::mackey::MackeyFunctor;

use crate::range::GradingRange;
use crate::{parse_grading, prime, CheckArgs, Usage};

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Kind {
    /// Anderson duality between H^α and H^(3 - L0 - α).
    Anderson,
    /// Exactness bookkeeping for the cofibre sequences of S(λ_m)_+.
    Les,
    /// Positive-cone ring presentation against the engine's top level.
    Cone,
    /// Axioms of the catalog functors, or of engine outputs when gradings
    /// are given.
    Axioms,
}

struct Line {
    rule: String,
    text: String,
    ok: bool,
}

#[derive(Default)]
struct Tally {
    lines: Vec<Line>,
    unknown: Vec<String>,
    skipped: Vec<String>,
}

/// Applies `f` to every item on a few threads, keeping the input order.
pub fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(8);
    let chunk = items.len().div_ceil(threads).max(1);
    std::thread::scope(|s| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| s.spawn(|| part.iter().map(&f).collect::<Vec<_>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}

pub fn run(a: CheckArgs) -> Result<u8, Usage> {
    let p = prime(a.group.p)?;
    let n = a.group.n;
    let gradings: Option<Vec<Grading>> = match (&a.grading, &a.range) {
        (Some(g), _) => Some(vec![parse_grading(g, p, n)?]),
        (None, Some(r)) => Some(GradingRange::parse(r, n).map_err(Usage)?.gradings()),
        (None, None) => None,
    };
    let engine = Engine::new();
    let tally = match (a.kind, gradings) {
        (Kind::Axioms, None) => catalog_axioms(p, n),
        (_, None) => return Err(Usage("give --grading or --range".into())),
        (kind, Some(gs)) => {
            let parts = par_map(&gs, |g| one(&engine, kind, p, g));
            let mut t = Tally::default();
            for part in parts {
                t.lines.extend(part.lines);
                t.unknown.extend(part.unknown);
                t.skipped.extend(part.skipped);
            }
            t.unknown.dedup();
            t
        }
    };
    Ok(report(&tally, a.failures_only))
}

fn one(engine: &Engine, kind: Kind, p: u64, g: &Grading) -> Tally {
    let mut t = Tally::default();
    let unknown = |t: &mut Tally, e: CohomError| t.unknown.push(format!("{g}: {e}"));
    match kind {
        Kind::Anderson => match engine.check_anderson(p, g) {
            Ok(rep) => t.lines.extend(rep.lines.into_iter().map(|l| Line {
                rule: l.rule,
                text: l.assertion,
                ok: l.ok,
            })),
            Err(e) => unknown(&mut t, e),
        },
        Kind::Les => {
            for m in 0..g.n() {
                match engine.check_les_orders(p, g, m) {
                    Ok(rep) => t.lines.extend(rep.lines.into_iter().map(|l| Line {
                        rule: format!("{} (m = {m})", l.rule),
                        text: l.assertion,
                        ok: l.ok,
                    })),
                    Err(e) => unknown(&mut t, e),
                }
            }
        }
        Kind::Cone if !in_positive_cone(g) => t.skipped.push(format!("{g}: outside the positive cone")),
        Kind::Cone => match compare_with_engine(engine, p, g) {
            Ok(rep) => t.lines.push(Line {
                rule: "positive-cone".into(),
                text: format!(
                    "{g}: {} monomials give {}, engine top level {}",
                    rep.monomials.len(),
                    rep.cone,
                    rep.engine
                ),
                ok: true,
            }),
            Err(ConeError::Engine(e)) => unknown(&mut t, e),
            Err(e) => t.lines.push(Line {
                rule: "positive-cone".into(),
                text: e.to_string(),
                ok: false,
            }),
        },
        Kind::Axioms => match engine.compute(p, g) {
            Ok(r) => match r.functor() {
                Some(m) => t.lines.push(axiom_line(&format!("H^({g})"), m)),
                None => t.unknown.push(format!("{g}: no rule applies")),
            },
            Err(e) => unknown(&mut t, e),
        },
    }
    t
}

fn axiom_line(what: &str, m: &MackeyFunctor) -> Line {
    let v = m.validate();
    Line {
        rule: "axioms".into(),
        text: if v.is_empty() {
            format!("{what} satisfies tr∘res = p and res∘tr = p")
        } else {
            let msgs: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            format!("{what}: {}", msgs.join("; "))
        },
        ok: v.is_empty(),
    }
}

/// Every `Z_S`, every `B_{T,S}`, `T(n)` and, for `n = 3`, the non-split
/// diagram.
fn catalog_axioms(p: u64, n: usize) -> Tally {
    let mut t = Tally::default();
    let subsets = SubsetSpec::all(n);
    for s in &subsets {
        t.lines.push(axiom_line(&format!("Z[{s}]"), &z_s(p, s)));
    }
    for tt in &subsets {
        for s in subsets.iter().filter(|s| s.is_subset(tt)) {
            match b_ts(p, tt, s) {
                Ok(b) => t.lines.push(axiom_line(&format!("B[{tt}|{s}]"), &b)),
                Err(e) => t.lines.push(Line {
                    rule: "axioms".into(),
                    text: format!("B[{tt}|{s}]: {e}"),
                    ok: false,
                }),
            }
        }
    }
    if n >= 2 {
        match t_n(p, n) {
            Ok(m) => t.lines.push(axiom_line(&format!("T({n})"), &m)),
            Err(e) => t.lines.push(Line {
                rule: "axioms".into(),
                text: format!("T({n}): {e}"),
                ok: false,
            }),
        }
    }
    if n == 3 {
        t.lines.push(axiom_line("non-split diagram", &nonsplit_diagram(p)));
    }
    t
}

fn report(t: &Tally, failures_only: bool) -> u8 {
    let failed = t.lines.iter().filter(|l| !l.ok).count();
    for l in &t.lines {
        if !l.ok || !failures_only {
            println!("{} [{}] {}", if l.ok { "PASS" } else { "FAIL" }, l.rule, l.text);
        }
    }
    for s in &t.skipped {
        if !failures_only {
            println!("SKIP {s}");
        }
    }
    for u in &t.unknown {
        println!("UNKNOWN {u}");
    }
    println!(
        "{} assertions, {failed} failed, {} skipped, {} unknown",
        t.lines.len(),
        t.skipped.len(),
        t.unknown.len()
    );
    if failed > 0 {
        1
    } else if !t.unknown.is_empty() {
        3
    } else {
        0
    }
}
