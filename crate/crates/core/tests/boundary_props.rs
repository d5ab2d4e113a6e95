mod common;

use common::{cylinders_meet, f2, loop_labels, random_path, sphere_profile, system, w};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relcurr_core::boundary::{covers, cylinder_contains, cylinders_intersect, decompose_compact_open, PositionedPath, SubgroupSystem};
use relcurr_core::word::{CyclicWord, Word};

fn desk_systems() -> Vec<SubgroupSystem> {
    vec![system(&[&["a"]]), system(&[&["ab"], &["aB"]]), system(&[&["a"], &["b"]])]
}

#[test]
fn c_is_nonempty_inversion_closed_and_of_fixed_length() {
    for sys in desk_systems() {
        assert!(!sys.c_words().is_empty());
        for c in sys.c_words() {
            assert_eq!(c.len(), sys.cylinder_length());
            assert!(sys.c_words().contains(&c.inverse()));
        }
    }
}

#[test]
fn unreadable_words_contain_a_c_word() {
    for sys in desk_systems() {
        let m = sys.cylinder_length();
        for len in m..=m + 3 {
            for x in f2().reduced_words(len) {
                if !sys.readable_in_cores(&x) {
                    assert!(sys.in_cyl_c(&x), "{x}");
                } else {
                    assert!(!sys.in_cyl_c(&x), "{x}");
                }
            }
        }
    }
}

#[test]
fn subgroup_elements_avoid_c() {
    for sys in desk_systems() {
        for x in loop_labels(&sys, sys.l() + 8) {
            assert!(!sys.in_cyl_c(&x), "{x}");
        }
    }
}

#[test]
fn nonperipheral_elements_have_powers_meeting_c() {
    for sys in desk_systems() {
        for len in 1..=4 {
            for g in f2().cyclically_reduced_words(len) {
                let peripheral = sys.is_peripheral(&g);
                let meets = (1..=sys.cylinder_length() + 1).any(|k| sys.in_cyl_c(&g.pow(k)));
                assert_eq!(meets, !peripheral, "{g}");
            }
        }
    }
}

#[test]
fn strata_are_the_readable_words() {
    for sys in desk_systems() {
        for k in 0..=sys.cylinder_length() + 3 {
            let expected: Vec<Word> = f2()
                .reduced_words(k)
                .into_iter()
                .filter(|x| k < sys.cylinder_length() || sys.readable_in_cores(x))
                .collect();
            let stratum = sys.stratum(k);
            assert_eq!(stratum, expected, "k = {k}");
            if k >= 1 {
                assert!(!stratum.is_empty());
                assert_eq!(stratum.len() % 2, 0);
                assert_eq!(sys.stratum_half(k).len() * 2, stratum.len());
            }
        }
    }
}

#[test]
fn peripheral_classes_are_conjugates_of_subgroup_elements() {
    let sys = system(&[&["ab"], &["aB"]]);
    for x in f2().reduced_words_up_to(3) {
        for g in ["ab", "aB", "abab", "BA"] {
            let c = x.mul(&w(g)).mul(&x.inverse());
            assert!(sys.is_peripheral(&c));
        }
    }
    assert!(!sys.is_peripheral(&w("a")));
    assert!(!sys.is_peripheral(&w("abaB")));
    assert!(CyclicWord::new(&w("abaB")).is_some());
}

#[test]
fn intersection_test_matches_degree_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let sys = system(&[&["a"]]);
    for _ in 0..2000 {
        let p = random_path(&mut rng, &sys);
        let q = random_path(&mut rng, &sys);
        assert_eq!(cylinders_intersect(&p, &q), cylinders_meet(&p, &q), "{p} {q}");
    }
}

#[test]
fn containment_matches_sphere_profile() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let sys = system(&[&["a"]]);
    for _ in 0..300 {
        let p = random_path(&mut rng, &sys);
        let q = random_path(&mut rng, &sys);
        let radius = [&p, &q].iter().map(|x| x.start().len().max(x.end().len())).max().unwrap() + 1;
        if radius > 5 {
            continue;
        }
        let pp = sphere_profile(std::slice::from_ref(&p), radius);
        let qp = sphere_profile(std::slice::from_ref(&q), radius);
        let contained = pp.iter().zip(&qp).all(|(a, b)| *a <= *b);
        assert_eq!(cylinder_contains(&q, &p), contained, "{p} in {q}");
    }
}

#[test]
fn covers_matches_sphere_profile() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let sys = system(&[&["a"]]);
    for _ in 0..200 {
        let family: Vec<PositionedPath> = (0..rng.gen_range(1..=3)).map(|_| random_path(&mut rng, &sys)).collect();
        let p = random_path(&mut rng, &sys);
        let radius = family.iter().chain([&p]).map(|x| x.start().len().max(x.end().len())).max().unwrap() + 1;
        if radius > 5 {
            continue;
        }
        let fam = sphere_profile(&family, radius);
        let single = sphere_profile(std::slice::from_ref(&p), radius);
        let expected = single.iter().zip(&fam).all(|(s, f)| *s == 0 || *f > 0);
        assert_eq!(covers(f2(), &family, &p), expected, "{p}");
    }
}

#[test]
fn decomposition_matches_sphere_profile_on_small_families() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let sys = system(&[&["a"]]);
    for _ in 0..40 {
        let count = rng.gen_range(1..=3);
        let mut family = Vec::new();
        while family.len() < count {
            let p = random_path(&mut rng, &sys);
            let label = p.label.prefix(sys.cylinder_length());
            if sys.in_cyl_c(&label) {
                family.push(PositionedPath::new(p.origin.prefix(p.origin.len().min(1)), label).unwrap());
            }
        }
        let out = decompose_compact_open(&sys, &family).unwrap();
        let radius = family.iter().chain(&out).map(|x| x.start().len().max(x.end().len())).max().unwrap() + 1;
        if radius > 5 {
            continue;
        }
        let before = sphere_profile(&family, radius);
        let after = sphere_profile(&out, radius);
        for (b, a) in before.iter().zip(&after) {
            assert!(*a <= 1);
            assert_eq!(*b > 0, *a > 0);
        }
    }
}

#[test]
fn decomposition_output_is_disjoint_and_union_equal() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for sys in desk_systems() {
        for _ in 0..20 {
            let family: Vec<PositionedPath> = (0..rng.gen_range(1..=5)).map(|_| random_path(&mut rng, &sys)).collect();
            let out = decompose_compact_open(&sys, &family).unwrap();
            for (i, p) in out.iter().enumerate() {
                assert!(sys.in_cyl_c(&p.label));
                for q in &out[i + 1..] {
                    assert!(!cylinders_meet(p, q), "{p} {q}");
                }
            }
            for p in &family {
                assert!(covers(f2(), &out, p));
            }
            for p in &out {
                assert!(covers(f2(), &family, p));
            }
        }
    }
}
