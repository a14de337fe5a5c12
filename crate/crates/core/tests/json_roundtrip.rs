use mackey_cpn::cohomology::Engine;
use mackey_cpn::families::{b_ts, t_n, z_s, SubsetSpec};
use mackey_cpn::grading::Grading;
use mackey_cpn::mackey::MackeyFunctor;
use proptest::prelude::*;
use serde_json::json;

fn subset(n: usize, mask: u32) -> SubsetSpec {
    SubsetSpec::new(n, (1..=n).filter(|k| mask >> (k - 1) & 1 == 1)).unwrap()
}

#[test]
fn schema_shape() {
    let b = b_ts(3, &subset(2, 0b11), &SubsetSpec::empty(2)).unwrap();
    let v = b.to_json();
    assert_eq!(
        v,
        json!({
            "p": 3, "n": 2,
            "levels": [{"rank": 0, "torsion": []}, {"rank": 0, "torsion": [3]}, {"rank": 0, "torsion": [9]}],
            "res": [[], [[1]]],
            "tr": [[[]], [[3]]],
        })
    );
    assert_eq!(MackeyFunctor::from_json(&v).unwrap(), b);
}

#[test]
fn rejects_axiom_failures() {
    let v = json!({
        "p": 3, "n": 1,
        "levels": [{"rank": 1, "torsion": []}, {"rank": 1, "torsion": []}],
        "res": [[[1]]],
        "tr": [[[1]]],
    });
    assert!(MackeyFunctor::from_json(&v).is_err());
    let v = json!({"p": 3, "n": 1, "levels": [{"rank": 1, "torsion": []}], "res": [], "tr": []});
    assert!(MackeyFunctor::from_json(&v).is_err());
    let v = json!({"p": 4, "n": 0, "levels": [{"rank": 1, "torsion": []}], "res": [], "tr": []});
    assert!(MackeyFunctor::from_json(&v).is_err());
}

#[test]
fn large_entries_use_strings() {
    let z = b_ts(3, &SubsetSpec::full(40), &SubsetSpec::empty(40)).unwrap();
    let v = z.to_json();
    assert!(v["levels"][40]["torsion"][0].is_string());
    assert!(v["levels"][39]["torsion"][0].is_number());
    assert_eq!(MackeyFunctor::from_json(&v).unwrap(), z);
}

#[test]
fn t_n_roundtrips() {
    for p in [2, 3] {
        for n in 2..=4 {
            let t = t_n(p, n).unwrap();
            let s = serde_json::to_string(&t).unwrap();
            let back: MackeyFunctor = serde_json::from_str(&s).unwrap();
            assert_eq!(back, t);
        }
    }
}

proptest! {
    #[test]
    fn catalog_roundtrips(p in prop::sample::select(vec![2u64, 3, 5]), n in 1usize..=4, t in 0u32..16, s in 0u32..16, z in 0u32..16) {
        let (t, s, z) = (subset(n, t), subset(n, s), subset(n, z));
        let zf = z_s(p, &z);
        prop_assert_eq!(MackeyFunctor::from_json(&zf.to_json()).unwrap(), zf);
        let tt = t.union(&s);
        let b = b_ts(p, &tt, &s).unwrap();
        prop_assert_eq!(MackeyFunctor::from_json(&b.to_json()).unwrap(), b);
    }

    #[test]
    fn engine_outputs_roundtrip(c in -8i64..=8, a in prop::collection::vec(-3i64..=3, 1..=3), p in prop::sample::select(vec![2u64, 3])) {
        let g = Grading::new(c, a);
        let text = serde_json::to_string(&g).unwrap();
        prop_assert_eq!(serde_json::from_str::<Grading>(&text).unwrap(), g.clone());
        if let Some(f) = Engine::new().compute(p, &g).unwrap().functor() {
            prop_assert_eq!(&MackeyFunctor::from_json(&f.to_json()).unwrap(), f);
        }
    }
}
