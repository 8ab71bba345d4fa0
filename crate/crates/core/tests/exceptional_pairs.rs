//! The (1,2) pair on long rings: real roots that continue the sinh-type
//! bound family. Reference numbers from an independent dense construction
//! (plane waves plus 30-digit root, direct partial trace).

use magnon_core::bethe::{resolve_two_magnon, StateClass};
use magnon_core::entangle::concurrence_profile;
use magnon_core::exactcore::verify_eigenstate;

#[test]
fn odd_ring_keeps_longest_range_concurrence() {
    let s = resolve_two_magnon(23, 1, 2).unwrap();
    assert_eq!(s.class, StateClass::Scattering);
    let phi = s.roots.as_ref().unwrap().phis[0].re;
    assert!((phi - 2.335_049_392_177_218).abs() < 1e-10, "{phi}");
    let psi = s.state().unwrap();
    assert!(verify_eigenstate(&psi).unwrap().residual < 1e-10);
    let p = concurrence_profile(&psi).unwrap();
    assert_eq!(p.get(1), 0.0);
    assert!((p.get(8) - 0.008_774_593_260_729).abs() < 1e-10);
    assert!((p.get(10) - 0.004_716_013_425_439).abs() < 1e-10);
    assert!((p.get(11) - 0.001_635_803_303_391).abs() < 1e-10);
}

#[test]
fn forty_sites() {
    let s = resolve_two_magnon(40, 1, 2).unwrap();
    assert!((s.roots.as_ref().unwrap().phis[0].re - 0.853_460_689_231_407).abs() < 1e-10);
    let p = concurrence_profile(&s.state().unwrap()).unwrap();
    assert_eq!(p.get(1), 0.0);
    assert_eq!(p.get(20), 0.0);
    assert!((p.get(8) - 0.000_762_853_779_288).abs() < 1e-10);
    assert!((p.get(19) - 0.000_604_209_018_272).abs() < 1e-10);
    assert_eq!(p.nonzero_count(), 12);
}
