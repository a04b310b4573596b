mod common;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spincert_core::index::serre_partner;
use spincert_core::linalg::IntMatrix;
use spincert_core::verdict::{
    scenario, spin_poly_status, DiffeoHypothesis, Outcome, ScenarioName, Status, StatusOptions, VerdictError,
};
use spincert_core::walls::{close_polarization, DegreeInequality, SearchBudget};
use spincert_core::{int, preset, BundleTopology, Polarization, Preset};

#[test]
fn close_polarization_postconditions() {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    for (p, h0) in [(Preset::F1Partner, vec![3, -1]), (Preset::QuadricBlowupPartner, vec![1, 1, 0]), (Preset::F1, vec![3, -1])] {
        let s = preset(p);
        let g = gram(&s);
        let h = Polarization::best(&s, s.class(h0.clone()).unwrap()).unwrap();
        let mut found = 0;
        for _ in 0..25 {
            let c1: Vec<i64> = (0..g.len()).map(|_| rng.gen_range(-3..=3)).collect();
            let c2 = rng.gen_range(0..=9);
            let c1c = s.class(c1.clone()).unwrap();
            let degree = vec![DegreeInequality::new(s.pic().zero(), c1c.clone())];
            let Ok(close) = close_polarization(&s, &h, &c1c, &int(c2), &degree, SearchBudget::default()) else {
                continue;
            };
            found += 1;
            let he = small(close.class());
            assert!(close.polarization.is_ample());
            assert!(dot(&g, &c1, &h0) <= 0 || dot(&g, &c1, &he) > 0);
            let e = BundleTopology::new(c1c, c2);
            let partner = serre_partner(&s, &e).unwrap();
            for t in [&e, &partner] {
                let tc = small(&t.c1);
                let tc2: i64 = (&t.c2).try_into().unwrap();
                let gg = g.clone();
                let hh = he.clone();
                assert!(brute_walls(&g, &tc, tc2, 25, move |x| dot(&gg, x, &hh) == 0).is_empty());
                assert!(brute_walls(&g, &tc, tc2, 25, separating(&g, &h0, &he)).is_empty());
            }
        }
        assert!(found > 10, "{p:?}: {found}");
    }
}

#[test]
fn hypotheses_reject_non_isometries() {
    let cp2 = preset(Preset::CP2);
    let fake = preset(Preset::FakePlanePartner);
    let twice: IntMatrix = vec![vec![int(2)]];
    assert_eq!(DiffeoHypothesis::new(cp2.clone(), fake.clone(), twice).unwrap_err(), VerdictError::NonIsometry);
    let neg: IntMatrix = vec![vec![int(-1)]];
    let hyp = DiffeoHypothesis::new(cp2, fake, neg).unwrap();
    // f*(3h) = −3l = K, so the increment vanishes.
    assert_eq!(small(&hyp.canonical_increment), vec![0]);
}

#[test]
fn scenarios_at_parity_valid_c2() {
    for name in [ScenarioName::FakePlane, ScenarioName::FakeF1, ScenarioName::FakeQuadric] {
        for c2 in [7, 9, 11] {
            let r = scenario(name).unwrap().run(c2, SearchBudget::default()).unwrap();
            assert_eq!(r.outcome, Outcome::Contradiction, "{name:?} {c2}");
        }
        for c2 in [8, 10] {
            let r = scenario(name).unwrap().run(c2, SearchBudget::default()).unwrap();
            assert_eq!(r.outcome, Outcome::Inconclusive, "{name:?} {c2}");
        }
    }
}

#[test]
fn zero_and_nonzero_are_exclusive() {
    let mut rng = ChaCha8Rng::seed_from_u64(52);
    for p in Preset::ALL {
        let s = preset(p);
        let n = s.pic().rank();
        let k = s.canonical().clone();
        let h = if s.canonical().square() > int(0) && Polarization::ample(&s, k.clone()).is_ok() {
            k
        } else if Polarization::ample(&s, -&k).is_ok() {
            -&k
        } else {
            continue;
        };
        let h = Polarization::ample(&s, h).unwrap();
        let c = spincert_core::lattice::make_spin_c(-s.canonical()).unwrap();
        for _ in 0..40 {
            let c1: Vec<i64> = (0..n).map(|_| rng.gen_range(-4..=4)).collect();
            let e = BundleTopology::new(s.class(c1).unwrap(), rng.gen_range(0..=12));
            let v = spin_poly_status(&s, &h, &c, &e, &StatusOptions::default()).unwrap();
            let window = v.reasons.iter().any(|r| r.rule == "vanishing-window" && r.passed);
            match v.status {
                Status::CertifiedZero => assert!(window),
                Status::CertifiedNonzero => assert!(!window && v.vanishing.c1_h > int(0)),
                Status::Unknown => {}
            }
        }
    }
}
