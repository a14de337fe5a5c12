use super::*;
use crate::abgroup::{int, FgAbGroup, Int};

fn ints(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| int(x)).collect()
}

/// Constant `Z` with restriction the identity.
fn const_z(p: u64, n: usize) -> MackeyFunctor {
    let pp = p as i64;
    MackeyFunctor::cyclic(p, &ints(&vec![0; n + 1]), &ints(&vec![1; n]), &ints(&vec![pp; n])).unwrap()
}

/// Dual constant `Z`: transfer the identity.
fn dual_z(p: u64, n: usize) -> MackeyFunctor {
    let pp = p as i64;
    MackeyFunctor::cyclic(p, &ints(&vec![0; n + 1]), &ints(&vec![pp; n]), &ints(&vec![1; n])).unwrap()
}

#[test]
fn axioms_are_checked() {
    assert!(const_z(3, 2).is_valid());
    let bad = MackeyFunctor::cyclic(3, &ints(&[0, 0]), &ints(&[1]), &ints(&[2]));
    assert!(matches!(bad, Err(MackeyError::Invalid(_))));
    let levels = vec![FgAbGroup::free(1); 2];
    let id = crate::abgroup::GroupHom::identity(&levels[0]);
    let raw = MackeyFunctor::from_parts(3, levels, vec![id.clone()], vec![id]).unwrap();
    let v = raw.validate();
    assert_eq!(v.len(), 2);
    assert_eq!(v[0].level, 1);
    assert!(MackeyFunctor::from_parts(4, vec![FgAbGroup::trivial()], vec![], vec![]).is_err());
}

#[test]
fn hom_groups_of_small_functors() {
    let z = const_z(3, 1);
    let h = mackey_hom_group(&z, &z).unwrap();
    assert_eq!(h.group, FgAbGroup::free(1));
    // Z -> Z*: the top component must be divisible by p, generated by (p, 1)
    let zs = dual_z(3, 1);
    let h = mackey_hom_group(&z, &zs).unwrap();
    assert_eq!(h.group, FgAbGroup::free(1));
    let g = &h.generators[0];
    assert_eq!(g.component(0).matrix()[(0, 0)], g.component(1).matrix()[(0, 0)].clone() * int(3));
    // a torsion functor: Z/3 at the top only
    let b = MackeyFunctor::cyclic(3, &ints(&[1, 3]), &ints(&[0]), &ints(&[0])).unwrap();
    let h = mackey_hom_group(&b, &b).unwrap();
    assert_eq!(h.group, FgAbGroup::cyclic(&int(3)));
    assert_eq!(mackey_hom_group(&z, &b).unwrap().group, FgAbGroup::cyclic(&int(3)));
    assert!(mackey_hom_group(&zs, &b).unwrap().group.is_trivial());
}

#[test]
fn kernels_and_cokernels() {
    let z = const_z(2, 2);
    let (k, inc) = kernel_mackey(&MackeyHom::zero(&z, &z)).unwrap();
    assert_eq!(k, z);
    assert!(inc.is_isomorphism());
    let (c, _) = cokernel_mackey(&MackeyHom::identity(&z)).unwrap();
    assert!(c.is_zero());
    // multiplication by p on Z has cokernel Z/p at every level
    let (c, proj) = cokernel_mackey(&MackeyHom::identity(&z).scale(&int(2))).unwrap();
    assert!(c.levels().iter().all(|g| *g == FgAbGroup::cyclic(&int(2))));
    assert!(c.is_valid());
    let seq = ShortExactSeq::new(MackeyHom::identity(&z).scale(&int(2)), proj);
    assert!(seq.is_ok());
}

#[test]
fn direct_sums_split_and_iso() {
    let a = const_z(3, 2);
    let b = dual_z(3, 2);
    let ab = a.direct_sum_with_maps(&b).unwrap();
    let ba = b.direct_sum(&a).unwrap();
    let seq = ShortExactSeq::new(ab.inc[0].clone(), ab.proj[1].clone()).unwrap();
    assert!(is_split(&seq).unwrap().is_split());
    assert!(iso_test(&ab.sum, &ba, &IsoConfig::default()).unwrap().is_iso());
    assert!(iso_test(&a, &b, &IsoConfig::default()).unwrap().is_not_iso());
}

#[test]
fn duals_are_involutive() {
    let b = MackeyFunctor::cyclic(3, &ints(&[1, 3, 9]), &ints(&[0, 1]), &ints(&[0, 3])).unwrap();
    assert_eq!(b.ext_dual().unwrap().ext_dual().unwrap(), b);
    let z = const_z(5, 3);
    assert_eq!(z.hom_dual().unwrap(), dual_z(5, 3));
}

#[test]
fn level_building() {
    let z1 = const_z(2, 1);
    let up = z1.phi_pullback(2).unwrap();
    assert_eq!(up, const_z(2, 3));
    assert_eq!(z1.theta(3).unwrap(), const_z(2, 3));
    assert_eq!(const_z(2, 3).restrict(1).unwrap(), z1);
    assert_eq!(dual_z(2, 1).theta_star(2).unwrap(), dual_z(2, 2));
}
