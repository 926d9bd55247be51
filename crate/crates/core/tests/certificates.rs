use asai_core::gstar::{gstar_factor, star_group};
use asai_core::heckealg::Group;
use asai_core::heckemod::{certify_ideal, random_integral_vector, CertPart, Level, RandomSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const DRAWS: usize = 20;

fn draws(group: Group, level: Level, vanishing: bool, balanced: bool, seed: u64) -> Vec<asai_core::heckemod::TestVector> {
    let spec = RandomSpec { vanishing_at_zero: vanishing, balanced, ..RandomSpec::new(3, group, level) };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..DRAWS).map(|_| random_integral_vector(&spec, &mut rng).unwrap()).collect()
}

fn certify_all(group: Group, level: Level, part: CertPart, vanishing: bool) {
    for (i, v) in draws(group, level, vanishing, false, 100 + part as u64).iter().enumerate() {
        let c = certify_ideal(v, part).unwrap_or_else(|e| panic!("{group:?} {part:?} draw {i}: {e}"));
        assert!(c.verified, "{group:?} {part:?} draw {i}");
        if let Some(ideal) = &c.ideal {
            assert_eq!(ideal.reexpand(), c.factor);
        }
    }
}

#[test]
fn part_one_inert() {
    certify_all(Group::InertF, Level::K, CertPart::One, false);
}

#[test]
fn part_one_split() {
    certify_all(Group::SplitPair, Level::K, CertPart::One, false);
}

#[test]
fn part_two_inert() {
    certify_all(Group::InertF, Level::Kp, CertPart::Two, true);
}

#[test]
fn part_three_inert() {
    certify_all(Group::InertF, Level::Kp, CertPart::Three, false);
}

#[test]
fn part_three_split() {
    certify_all(Group::SplitPair, Level::Kp, CertPart::Three, false);
}

#[test]
fn gstar_random_vectors() {
    for group in [Group::InertF, Group::SplitPair] {
        for (i, v) in draws(group, Level::Kp, false, true, 7).iter().enumerate() {
            let star = v.with_group(star_group(group).unwrap());
            let f = gstar_factor(&star).unwrap_or_else(|e| panic!("{group:?} draw {i}: {e}"));
            assert!(f.verified(), "{group:?} draw {i}");
            assert_eq!(f.certificate.reexpand(), f.p_star);
        }
    }
}
