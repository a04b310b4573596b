mod common;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spincert_core::surface::{blow_up, quadric};
use spincert_core::walls::{enumerate_separating_walls, wall_on_ray};
use spincert_core::{int, preset, Polarization, Preset, SurfaceModel};

const RADIUS: i64 = 40;

fn walls_as_vecs(ws: &[spincert_core::walls::Wall]) -> Vec<Vec<i64>> {
    let mut v: Vec<Vec<i64>> = ws.iter().map(|w| small(w.class())).collect();
    v.sort();
    v
}

fn random_ample(s: &SurfaceModel, rng: &mut ChaCha8Rng) -> Vec<i64> {
    loop {
        let v: Vec<i64> = (0..s.pic().rank()).map(|_| rng.gen_range(-4..=4)).collect();
        if Polarization::ample(s, s.class(v.clone()).unwrap()).is_ok() {
            return v;
        }
    }
}

fn check_surface(s: &SurfaceModel, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = gram(s);
    let n = g.len();
    for _ in 0..20 {
        let h1 = random_ample(s, &mut rng);
        let h2 = random_ample(s, &mut rng);
        let c1: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
        for c2 in -4..=4 {
            let got = enumerate_separating_walls(
                s.pic(),
                &s.class(c1.clone()).unwrap(),
                &int(c2),
                &s.class(h1.clone()).unwrap(),
                &s.class(h2.clone()).unwrap(),
            )
            .unwrap();
            let want = brute_walls(&g, &c1, c2, RADIUS, separating(&g, &h1, &h2));
            // Nothing near the edge of the search box.
            assert!(want.iter().all(|e| e.iter().all(|x| x.abs() < RADIUS - 10)), "{want:?}");
            assert_eq!(walls_as_vecs(&got.separating_walls), want, "c1 {c1:?} c2 {c2} H1 {h1:?} H2 {h2:?}");
            assert_eq!(got.same_chamber, want.is_empty());

            let on = wall_on_ray(s.pic(), &s.class(c1.clone()).unwrap(), &int(c2), &s.class(h1.clone()).unwrap()).unwrap();
            let hh = h1.clone();
            let gg = g.clone();
            let want_on = brute_walls(&g, &c1, c2, RADIUS, move |e| dot(&gg, e, &hh) == 0);
            assert_eq!(walls_as_vecs(&on), want_on);
        }
    }
}

#[test]
fn hirzebruch_surface_matches_box_search() {
    check_surface(&preset(Preset::F1), 31);
}

#[test]
fn blown_up_quadric_matches_box_search() {
    check_surface(&blow_up(&quadric()), 32);
}

/// For c₁ = l, c₂ = 1 on F1 the only walls are ±l ± 2E, and the radius-20
/// box holds nothing else.
#[test]
fn hirzebruch_line_type_has_four_walls() {
    let s = preset(Preset::F1);
    let g = gram(&s);
    let all = brute_walls(&g, &[1, 0], 1, 20, |_| true);
    assert_eq!(all, vec![vec![1, -2], vec![1, 2]]);
    for e in &all {
        assert_eq!(dot(&g, e, e), -3);
    }
    let sep = enumerate_separating_walls(
        s.pic(),
        &s.class([1, 0]).unwrap(),
        &int(1),
        &s.class([3, 2]).unwrap(),
        &s.class([3, -2]).unwrap(),
    )
    .unwrap();
    assert_eq!(walls_as_vecs(&sep.separating_walls), all);
}
