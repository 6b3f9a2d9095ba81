use fringe::gw::{
    cycle_lemma_rotation, degrees_to_tree, enumerate_family, yn_ratio, GwError, GwSampler, OffspringDistribution,
};
use fringe::increasing::{
    count_increasing_trees, enumerate_increasing, expected_fringe_count, increasing_labellings_count,
    mean_additive_functional, sample_increasing_tree, IncError,
};
use fringe::rng::stream;
use fringe::{Exact, Family, IncFamily, Real, Real32, Scalar, SmallRatio, WeightSequence};
use num_traits::{One, Zero};
use proptest::prelude::*;

const SIMPLE: [&str; 6] = ["plane", "binary", "dary:3", "motzkin", "labelled", "custom:1,0,1"];
const INCREASING: [&str; 5] = ["recursive", "bst", "inc-dary:3", "gport:1", "gport:1/2"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn simple_samples_are_well_formed(fi in 0usize..SIMPLE.len(), n in 1usize..2000, seed in any::<u64>()) {
        let w: WeightSequence = SIMPLE[fi].parse().unwrap();
        let n = if w.period() == 2 && n % 2 == 0 { n - 1 } else { n };
        let s = GwSampler::new(&w).unwrap();
        let t = s.sample(n, &mut stream(seed, n as u64, 0)).unwrap();
        prop_assert_eq!(t.len(), n);
        for v in 0..n as u32 {
            prop_assert!(!w.phi_exact(t.degree(v) as usize).is_zero());
        }
        prop_assert_eq!(t.arity_bound(), w.slot_arity());
        let again = s.sample(n, &mut stream(seed, n as u64, 0)).unwrap();
        prop_assert_eq!(again, t);
    }

    #[test]
    fn increasing_samples_are_well_formed(fi in 0usize..INCREASING.len(), n in 1usize..2000, seed in any::<u64>()) {
        let f: IncFamily = INCREASING[fi].parse().unwrap();
        let t = sample_increasing_tree(n, f, &mut stream(seed, n as u64, 1)).unwrap();
        prop_assert_eq!(t.len(), n);
        let labels = t.labels();
        for v in 1..n as u32 {
            let p = t.shape.parent(v).unwrap();
            prop_assert!(labels[p as usize] < labels[v as usize]);
        }
        if let Some(d) = f.slot_arity() {
            prop_assert!((0..n as u32).all(|v| t.shape.degree(v) <= d));
        }
    }

    #[test]
    fn cycle_lemma_has_one_rotation(raw in proptest::collection::vec(0u32..4, 1..60)) {
        // force the sum to len - 1 by trimming/padding with leaves
        let mut seq = raw;
        let mut total: i64 = seq.iter().map(|&d| d as i64).sum();
        while total > seq.len() as i64 - 1 {
            seq.push(0);
            total = seq.iter().map(|&d| d as i64).sum();
        }
        while total < seq.len() as i64 - 1 {
            let i = seq.iter().position(|&d| d == 0).unwrap();
            seq[i] = 1;
            total += 1;
        }
        let r = cycle_lemma_rotation(&seq).unwrap();
        let mut rotated = seq[r..].to_vec();
        rotated.extend_from_slice(&seq[..r]);
        prop_assert_eq!(degrees_to_tree(&seq).unwrap().preorder_degrees(), rotated);
    }
}

#[test]
fn impossible_sizes_are_errors() {
    let full = GwSampler::new(&"custom:1,0,1".parse().unwrap()).unwrap();
    assert!(matches!(full.check_size(10), Err(GwError::ImpossibleSize { .. })));
    assert!(full.check_size(11).is_ok());
    let ternary = GwSampler::new(&"custom:1,0,0,1".parse().unwrap()).unwrap();
    assert!(ternary.check_size(5).is_err());
    assert!(ternary.check_size(7).is_ok());
    assert!(matches!(sample_increasing_tree(0, IncFamily::Recursive, &mut stream(0, 0, 0)), Err(IncError::EmptySize)));
    assert!("custom:0,1".parse::<WeightSequence>().is_err());
    assert!("custom:1,0,0".parse::<WeightSequence>().is_err());
    assert!("gport:0".parse::<IncFamily>().is_err());
    assert!("bogus".parse::<Family>().is_err());
}

#[test]
fn offspring_laws_are_critical() {
    for name in SIMPLE {
        let o = OffspringDistribution::new(&name.parse().unwrap()).unwrap();
        let total: f64 = o.probs().iter().sum();
        assert!((total - 1.0).abs() < 1e-12, "{name}");
        assert!((o.mean() - 1.0).abs() < 1e-10, "{name}");
        assert!((o.sigma2() - o.variance_from_probs()).abs() < 1e-9, "{name}");
    }
}

#[test]
fn yn_asymptotics_for_several_families() {
    for name in ["plane", "binary", "motzkin", "dary:3"] {
        let r = yn_ratio(1000, &name.parse().unwrap()).unwrap();
        assert!((0.99..=1.01).contains(&r), "{name}: {r}");
    }
    // period 2: only odd sizes exist
    let r = yn_ratio(1001, &"custom:1,0,1".parse().unwrap()).unwrap();
    assert!((0.99..=1.01).contains(&r), "{r}");
}

#[test]
fn enumeration_totals() {
    for n in 1..=7 {
        for f in [IncFamily::Recursive, IncFamily::bst(), IncFamily::port(), IncFamily::Dary(3)] {
            let all = enumerate_increasing::<Exact>(n, f).unwrap();
            let total = all.iter().fold(Exact::zero(), |a, (_, p)| a + p);
            assert!(total.is_one(), "{f} n={n}");
            // every labelled tree is listed once for unit-weight families
            if matches!(f, IncFamily::Recursive | IncFamily::Dary(_)) {
                assert_eq!(Exact::from_integer(all.len().into()), count_increasing_trees(n, f), "{f} n={n}");
            }
        }
        let shapes = enumerate_family::<Exact>(n, &WeightSequence::Plane).unwrap();
        let labellings: num_bigint::BigUint = shapes.iter().map(|(t, _)| increasing_labellings_count(t)).sum();
        // plane recursive trees of size n are counted by (2n-3)!!
        let double_fact: u64 = (1..n as u64).map(|i| 2 * i - 1).product();
        assert_eq!(labellings, double_fact.into(), "n={n}");
    }
}

fn fringe_means<T: Scalar>(n: usize, f: IncFamily) -> Vec<T> {
    (1..n).map(|k| expected_fringe_count::<T>(n, k, f).unwrap()).collect()
}

#[test]
fn formulas_agree_across_scalars() {
    let gport = IncFamily::gport(SmallRatio::new(3, 2)).unwrap();
    for f in [IncFamily::Recursive, IncFamily::bst(), gport] {
        let exact: Vec<Exact> = fringe_means(30, f);
        let double: Vec<Real> = fringe_means(30, f);
        let single: Vec<Real32> = fringe_means(30, f);
        for k in 0..exact.len() {
            let e = exact[k].approx_f64();
            assert!((double[k] - e).abs() <= 1e-12 * e.max(1.0));
            assert!((single[k] as f64 - e).abs() <= 1e-4 * e.max(1.0));
        }
        let tolls: Vec<Exact> = (1..=30).map(|_| Exact::one()).collect();
        // the all-ones toll counts vertices
        assert_eq!(mean_additive_functional(30, f, &tolls).unwrap(), Exact::from_integer(30.into()));
    }
    // recursive trees: E Z_{n,k} = n/(k(k+1))
    for (k, m) in fringe_means::<Exact>(20, IncFamily::Recursive).into_iter().enumerate() {
        let k = k as i64 + 1;
        assert_eq!(m, Exact::new(20.into(), (k * (k + 1)).into()));
    }
}
