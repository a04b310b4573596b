mod common;

use common::*;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spincert_core::index::{chi_c, chi_c_l0_on, expected_dimension, vdim};
use spincert_core::lattice::{make_spin_c, spin_c_translate};
use spincert_core::surface::{h0, riemann_roch_chi};
use spincert_core::{int, preset, BundleTopology, Preset};

fn random_vec(rng: &mut ChaCha8Rng, n: usize, r: i64) -> Vec<i64> {
    (0..n).map(|_| rng.gen_range(-r..=r)).collect()
}

#[test]
fn canonical_classes_are_characteristic_and_mod8() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for p in Preset::ALL {
        let s = preset(p);
        let g = gram(&s);
        let sig = s.pic().signature();
        let k = small(s.canonical());
        assert!(characteristic(&g, &k), "{p:?}");
        assert_eq!((dot(&g, &k, &k) - sig).rem_euclid(8), 0);
        let c = make_spin_c(-s.canonical()).unwrap();
        for _ in 0..100 {
            let sigma = random_vec(&mut rng, g.len(), 10);
            let t = spin_c_translate(&c, &s.class(sigma.clone()).unwrap()).unwrap();
            let tc = small(t.class());
            assert_eq!(tc, add(&scale(-1, &k), &scale(2, &sigma)));
            assert!(characteristic(&g, &tc));
            let q = dot(&g, &tc, &tc) - sig;
            assert_eq!(q.rem_euclid(8), 0);
            assert_eq!(t.mod8_quotient().to_i64().unwrap(), q / 8);
        }
    }
}

#[test]
fn anticanonical_index_matches_riemann_roch() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for p in Preset::ALL {
        let s = preset(p);
        let g = gram(&s);
        let k = small(s.canonical());
        let chi_o = s.chi_o().to_i64().unwrap();
        let c = make_spin_c(-s.canonical()).unwrap();
        let chi_l0 = chi_c_l0_on(&s, &c).unwrap();
        assert_eq!(chi_l0.to_i64().unwrap(), chi_o);
        for _ in 0..1000 {
            let c1 = random_vec(&mut rng, g.len(), 10);
            let c2 = rng.gen_range(-50..=50);
            let e = BundleTopology::new(s.class(c1.clone()).unwrap(), c2);
            let got = chi_c(&e, &c, &chi_l0).unwrap();
            assert_eq!(got.to_i64().unwrap(), rr_rank_two(&g, &k, chi_o, &c1, c2));
            let line = riemann_roch_chi(&s, &s.class(c1.clone()).unwrap()).unwrap();
            assert_eq!(line.to_i64().unwrap(), rr_line(&g, &k, chi_o, &c1));
        }
    }
}

#[test]
fn reduced_dimension_matches_expansion() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for p in Preset::ALL {
        let s = preset(p);
        let g = gram(&s);
        let k = small(s.canonical());
        let chi_o = s.chi_o().to_i64().unwrap();
        let c = make_spin_c(-s.canonical()).unwrap();
        let chi_l0 = c.mod8_quotient();
        for _ in 0..1000 {
            let c1 = random_vec(&mut rng, g.len(), 10);
            let c2 = rng.gen_range(-50..=50);
            let e = BundleTopology::new(s.class(c1.clone()).unwrap(), c2);
            let r = vdim(&e, s.pic(), &c, &chi_l0).unwrap();
            let want = d1_expansion(&g, &k, chi_o, &c1, c2);
            assert_eq!(r.d1.to_i64().unwrap(), want);
            assert_eq!(expected_dimension(&s, &e).unwrap().to_i64().unwrap(), want);
            // d = 4c₂ − c₁² − 3(b₂⁺ + 1)/2 with b₂⁺ = 1.
            assert_eq!(r.d.to_i64().unwrap(), 4 * c2 - dot(&g, &c1, &c1) - 3);
        }
    }
}

#[test]
fn projective_plane_line_type() {
    let s = preset(Preset::CP2);
    let c = make_spin_c(-s.canonical()).unwrap();
    for c2 in -20..=20 {
        let e = BundleTopology::new(s.class([1]).unwrap(), c2);
        assert_eq!(vdim(&e, s.pic(), &c, &c.mod8_quotient()).unwrap().d1, int(3 * c2 - 1));
    }
}

#[test]
fn plane_sections_count_monomials() {
    let s = preset(Preset::CP2);
    for d in -5i64..=12 {
        let want = if d < 0 { 0 } else { (d + 1) * (d + 2) / 2 };
        assert_eq!(h0(&s, &s.class([d]).unwrap()).unwrap(), int(want));
    }
}
