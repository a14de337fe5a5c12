use super::*;
use crate::mackey::{cokernel_mackey, is_split, iso_test, kernel_mackey, IsoConfig};

fn set(n: usize, m: &[usize]) -> SubsetSpec {
    SubsetSpec::new(n, m.iter().copied()).unwrap()
}

/// Pairs `S ⊆ T` of subsets of `{1..n}`.
fn pairs(n: usize) -> Vec<(SubsetSpec, SubsetSpec)> {
    let all = SubsetSpec::all(n);
    let mut out = Vec::new();
    for t in &all {
        for s in &all {
            if s.is_subset(t) {
                out.push((t.clone(), s.clone()));
            }
        }
    }
    out
}

#[test]
fn z_s_shapes() {
    let z = z_s(3, &SubsetSpec::empty(2));
    assert_eq!(z.res(1).matrix()[(0, 0)], int(1));
    assert_eq!(z.tr(2).matrix()[(0, 0)], int(3));
    let z1 = z_s(3, &set(2, &[1]));
    assert_eq!(z1.res(1).matrix()[(0, 0)], int(3));
    assert_eq!(z1.res(2).matrix()[(0, 0)], int(1));
    assert_eq!(z1.tr(1).matrix()[(0, 0)], int(1));
    assert_eq!(z1.tr(2).matrix()[(0, 0)], int(3));
    for n in 0..=4 {
        for s in SubsetSpec::all(n) {
            assert!(z_s(2, &s).is_valid());
        }
    }
}

#[test]
fn b_ts_shapes_and_errors() {
    let b = b_ts(2, &SubsetSpec::full(3), &SubsetSpec::empty(3)).unwrap();
    let orders: Vec<_> = b.levels().iter().map(|g| g.order().unwrap()).collect();
    assert_eq!(orders, vec![int(1), int(2), int(4), int(8)]);
    assert!(matches!(
        b_ts(2, &set(2, &[1]), &set(2, &[2])),
        Err(FamilyError::SubsetViolation(_))
    ));
    assert!(SubsetSpec::new(2, [3]).is_err());
    // B_{n̄, k̄^c} has Z/p^{min(r, k)} at level r
    let n = 4;
    for k in 1..=n {
        let b = b_ts(3, &SubsetSpec::full(n), &SubsetSpec::interval(n, k + 1, n)).unwrap();
        for r in 0..=n {
            let e = r.min(k) as u32;
            assert_eq!(b.level(r).order().unwrap(), pow(3, e));
        }
    }
}

#[test]
fn b_prefix_identity_is_equality() {
    for n in 1..=4 {
        for (t, s) in pairs(n) {
            let b = b_ts(2, &t, &s).unwrap();
            let norm = Atom::B(t.clone(), s.clone()).normalized();
            assert_eq!(norm.build(2, n).unwrap(), b, "B[{t}|{s}]");
            // holds while {1..k} misses T∖S
            let first = t.minus(&s).members().iter().next().copied().unwrap_or(n + 1);
            for k in 1..first.min(n + 1) {
                let pre = SubsetSpec::interval(n, 1, k);
                assert_eq!(b_ts(2, &t.union(&pre), &s.union(&pre)).unwrap(), b);
            }
        }
    }
}

#[test]
fn t_n_is_a_nonsplit_extension() {
    for p in [2, 3] {
        for n in 2..=3 {
            let seq = t_n_sequence(p, n).unwrap();
            assert!(!is_split(&seq).unwrap().is_split(), "p={p} n={n}");
        }
    }
    assert!(t_n(2, 1).is_err());
}

#[test]
fn f_ts_cokernels_are_b() {
    for n in 1..=3 {
        for (t, s) in pairs(n) {
            let f = f_ts(3, &t, &s).unwrap();
            let (c, _) = cokernel_mackey(&f).unwrap();
            let b = b_ts(3, &t, &s).unwrap();
            assert!(iso_test(&c, &b, &IsoConfig::default()).unwrap().is_iso(), "{t} {s}");
        }
    }
    let f = f_ts(2, &SubsetSpec::full(3), &SubsetSpec::empty(3)).unwrap();
    let mult: Vec<_> = f.components().iter().map(|c| c.matrix()[(0, 0)].clone()).collect();
    assert_eq!(mult, vec![int(1), int(2), int(4), int(8)]);
}

#[test]
fn b_kernel_cokernel_family() {
    // the map B_{n̄,k̄^c} -> B_{1̄,∅} that is the identity at level 1
    let (p, n) = (2u64, 3);
    for k in 1..=n {
        let src = b_ts(p, &SubsetSpec::full(n), &SubsetSpec::interval(n, k + 1, n)).unwrap();
        let tgt = b_ts(p, &set(n, &[1]), &SubsetSpec::empty(n)).unwrap();
        let h = crate::mackey::mackey_hom_group(&src, &tgt).unwrap();
        let f = h
            .generators
            .iter()
            .find(|g| g.component(1).is_isomorphism())
            .cloned()
            .expect("level-1 iso exists");
        let (ker, _) = kernel_mackey(&f).unwrap();
        let (cok, _) = cokernel_mackey(&f).unwrap();
        let want_k = b_ts(p, &SubsetSpec::interval(n, 2, n), &SubsetSpec::interval(n, k + 2, n)).unwrap();
        let want_c = b_ts(p, &set(n, &[k + 1].iter().copied().filter(|&x| x <= n).collect::<Vec<_>>()), &SubsetSpec::empty(n)).unwrap();
        assert!(iso_test(&ker, &want_k, &IsoConfig::default()).unwrap().is_iso());
        assert!(iso_test(&cok, &want_c, &IsoConfig::default()).unwrap().is_iso());
    }
}

#[test]
fn rendering() {
    let n = 2;
    let e = CatalogExpr::new(3, n, [Atom::B(set(2, &[1, 2]), set(2, &[1])), Atom::Z(SubsetSpec::full(2))]);
    assert_eq!(e.to_string(), "Z* + B[{2}|{}]");
    assert_eq!(CatalogExpr::new(3, n, [Atom::Z(SubsetSpec::empty(2))]).to_string(), "Z");
    assert_eq!(CatalogExpr::zero(3, n).to_string(), "0");
    assert_eq!(CatalogExpr::new(3, 3, [Atom::T]).to_string(), "T(3)");
    assert_eq!(CatalogExpr::new(3, n, [Atom::B(set(2, &[1]), set(2, &[1]))]).to_string(), "0");
}

#[test]
fn recognize_round_trips_sums() {
    let n = 2;
    let e = CatalogExpr::new(
        3,
        n,
        [
            Atom::Z(set(n, &[1])),
            Atom::B(set(n, &[2]), SubsetSpec::empty(n)),
            Atom::B(SubsetSpec::full(n), SubsetSpec::empty(n)),
        ],
    );
    let m = e.build().unwrap();
    assert_eq!(recognize(&m), Some(e));
    assert_eq!(recognize(&MackeyFunctor::zero(2, 3)), Some(CatalogExpr::zero(2, 3)));
}

#[test]
fn recognize_rejects_t3() {
    let t = t_n(2, 3).unwrap();
    let r = recognize_detailed(&t);
    assert!(r.found.is_none());
    assert!(!r.rejected.is_empty());
    assert!(r.rejected.iter().all(|x| x.proven), "{:?}", r.rejected);
}
