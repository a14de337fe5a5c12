use mackey_cpn::cohomology::Engine;
use mackey_cpn::cone::{compare_with_engine, ConeError};
use mackey_cpn::grading::Grading;

fn grid(n: usize, top: i64) -> Vec<Grading> {
    let mut out = vec![];
    let mut a = vec![0i64; n];
    loop {
        for f in 0..=top {
            out.push(Grading::new(-2 * f, a.clone()));
        }
        let mut i = 0;
        while i < n && a[i] == top {
            a[i] = 0;
            i += 1;
        }
        if i == n {
            return out;
        }
        a[i] += 1;
    }
}

#[test]
fn cone_matches_engine_top_level() {
    let e = Engine::new();
    for p in [2u64, 3] {
        for n in 1..=3 {
            let mut bad = vec![];
            let mut unknown = 0;
            for g in grid(n, 3) {
                match compare_with_engine(&e, p, &g) {
                    Ok(_) => {}
                    Err(ConeError::Mismatch { grading, cone, engine }) => {
                        bad.push(format!("{grading}: cone {cone}, engine {engine}"))
                    }
                    Err(ConeError::Engine(_)) if n == 3 => unknown += 1,
                    Err(err) => bad.push(format!("{g}: {err}")),
                }
            }
            println!("p={p} n={n} unknown={unknown}");
            assert!(bad.is_empty(), "p={p} n={n}: {bad:#?}");
        }
    }
}
