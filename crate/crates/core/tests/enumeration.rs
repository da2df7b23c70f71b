use mincomp::enumerate::{count_classes, epsilon_to_norm};
use mincomp::{enumerate, for_each_sample, Bound, EnumSpec, LatticeShape, NormCutoff, OrbitSample, Rational};
use num_integer::Integer;

fn keys(samples: &[OrbitSample]) -> Vec<(i64, i64)> {
    samples.iter().map(|s| (s.vec.c, s.vec.d)).collect()
}

fn lattices() -> Vec<LatticeShape> {
    vec![
        LatticeShape::square(),
        LatticeShape::from_rationals(Rational::new(1, 2), Rational::new(5, 4)).unwrap(),
        LatticeShape::new(0.123, 0.456).unwrap(),
    ]
}

#[test]
fn worker_count_does_not_change_output() {
    for lattice in lattices() {
        let spec = EnumSpec::by_norm(lattice, 120.0).with_chunk(7);
        let reference = enumerate(&spec, 1).unwrap();
        for workers in [2, 4, 8] {
            let other = enumerate(&spec, workers).unwrap();
            assert_eq!(reference.samples.len(), other.samples.len());
            for (a, b) in reference.samples.iter().zip(&other.samples) {
                assert_eq!(a.vec, b.vec);
                assert_eq!(a.comp, b.comp);
                assert_eq!(a.norm_sq.to_bits(), b.norm_sq.to_bits());
                assert_eq!(a.sk.to_bits(), b.sk.to_bits());
                assert_eq!(a.rho.to_bits(), b.rho.to_bits());
                assert_eq!(a.im.to_bits(), b.im.to_bits());
            }
        }
    }
}

#[test]
fn chunk_width_does_not_change_output() {
    let lattice = LatticeShape::square();
    let a = enumerate(&EnumSpec::by_norm(lattice.clone(), 80.0), 3).unwrap();
    let b = enumerate(&EnumSpec::by_norm(lattice, 80.0).with_chunk(1), 3).unwrap();
    assert_eq!(a, b);
}

#[test]
fn sorted_canonical_without_duplicates() {
    for lattice in lattices() {
        let r = enumerate(&EnumSpec::by_norm(lattice, 60.0), 2).unwrap();
        for pair in r.samples.windows(2) {
            let key = |s: &OrbitSample| (s.norm_sq, s.vec.c, s.vec.d);
            assert!(key(&pair[0]) < key(&pair[1]));
        }
        for s in &r.samples {
            assert!(s.vec.c > 0 || (s.vec.c, s.vec.d) == (0, 1));
            assert_eq!(s.vec.c.gcd(&s.vec.d), 1);
        }
    }
}

#[test]
fn monotone_in_radius() {
    let lattice = LatticeShape::square();
    let mut previous: Vec<(i64, i64)> = Vec::new();
    for t in [3.0, 9.0, 27.0, 81.0] {
        let r = enumerate(&EnumSpec::by_norm(lattice.clone(), t), 2).unwrap();
        let mut now = keys(&r.samples);
        now.sort();
        assert!(previous.iter().all(|k| now.binary_search(k).is_ok()));
        previous = now;
    }
}

#[test]
fn epsilon_and_strict_norm_agree() {
    for lattice in lattices() {
        for eps in [0.5, 1e-2, 3e-3, 1e-4] {
            let by_eps = enumerate(&EnumSpec::by_epsilon(lattice.clone(), eps), 2).unwrap();
            let cutoff = NormCutoff { norm_sq: lattice.area() / eps, strict: true };
            let spec = EnumSpec { bound: Bound::Cutoff(cutoff), ..EnumSpec::by_norm(lattice.clone(), 1.0) };
            let by_norm = enumerate(&spec, 2).unwrap();
            assert_eq!(by_eps.samples, by_norm.samples);
            // Im(γz) > ε for every member
            assert!(by_eps.samples.iter().all(|s| s.im > eps));
            let t = epsilon_to_norm(lattice.area(), eps);
            assert!((t * t - lattice.area() / eps).abs() <= 1e-12 * t * t);
        }
    }
}

#[test]
fn epsilon_boundary_is_strict_at_i() {
    // (0, 1) and (1, 0) have Im(γz) = 1 exactly
    let l = LatticeShape::square();
    assert_eq!(enumerate(&EnumSpec::by_epsilon(l.clone(), 1.0), 1).unwrap().count, 0);
    assert_eq!(enumerate(&EnumSpec::by_norm(l, 1.0), 1).unwrap().count, 2);
}

#[test]
fn streaming_matches_materialized() {
    let spec = EnumSpec::by_norm(LatticeShape::square(), 150.0).with_chunk(16);
    let mut streamed = Vec::new();
    let n = for_each_sample(&spec, 4, |s| streamed.push(*s)).unwrap();
    let r = enumerate(&spec, 1).unwrap();
    assert_eq!(n, r.count);
    assert_eq!(streamed, r.samples);
}

#[test]
fn counting_matches_enumeration() {
    for lattice in lattices() {
        let spec = EnumSpec::by_norm(lattice, 90.0).with_chunk(5);
        assert_eq!(count_classes(&spec, 3).unwrap() as usize, enumerate(&spec, 1).unwrap().count);
    }
}

#[test]
fn multi_band_run_is_sorted_and_complete() {
    // above the band target, so several annuli are merged in sequence
    let spec = EnumSpec::by_norm(LatticeShape::square(), 1600.0);
    let mut last = (f64::NEG_INFINITY, i64::MIN, i64::MIN);
    let mut n = 0usize;
    for_each_sample(&spec, 8, |s| {
        let key = (s.norm_sq, s.vec.c, s.vec.d);
        assert!(key > last);
        last = key;
        n += 1;
    })
    .unwrap();
    assert_eq!(n as u64, count_classes(&spec, 8).unwrap());
    assert!(n > 2_200_000);
}
