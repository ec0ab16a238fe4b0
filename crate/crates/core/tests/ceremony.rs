mod common;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use qapsnark::algebra::vanishing_poly;
use qapsnark::ceremony::{
    contribute, contribute_with_secrets, finalize, verify_contribution, CeremonyTranscript, Check,
    CrsPowers, Subject,
};
use qapsnark::kop::{poly_crs_from_trapdoor, poly_prove, poly_verify, PolyTrapdoor};

use common::{backend, field};

fn run(d: usize, secrets: &[(u64, u64)]) -> CeremonyTranscript {
    let mut tr = CeremonyTranscript::new(backend(), d).unwrap();
    for &(s, a) in secrets {
        let c = contribute_with_secrets(&tr, field().elem(s), field().elem(a)).unwrap();
        tr.contributions.push(c);
    }
    tr
}

#[test]
fn composition_matches_direct_setup() {
    let f = field();
    let mut rng = StdRng::seed_from_u64(51);
    for k in 1..=5 {
        for d in [1, 3, 8] {
            let secrets: Vec<(u64, u64)> = (0..k)
                .map(|_| {
                    (
                        f.random_nonzero(&mut rng).value(),
                        f.random_nonzero(&mut rng).value(),
                    )
                })
                .collect();
            let tr = run(d, &secrets);
            tr.verify().unwrap();
            let (s, alpha) = secrets.iter().fold((f.one(), f.one()), |(s, a), &(x, y)| {
                (s * f.elem(x), a * f.elem(y))
            });
            let t = vanishing_poly(f, d);
            let direct =
                poly_crs_from_trapdoor(backend(), &t, d, &PolyTrapdoor { s, alpha }).unwrap();
            assert_eq!(finalize(&t, &tr).unwrap(), direct, "k = {}, d = {}", k, d);
        }
    }
}

#[test]
fn finalized_string_supports_polynomial_proofs() {
    let f = field();
    let mut rng = StdRng::seed_from_u64(52);
    let mut tr = CeremonyTranscript::new(backend(), 4).unwrap();
    for _ in 0..3 {
        tr.contribute(&mut rng).unwrap();
    }
    let t = vanishing_poly(f, 2);
    let crs = finalize(&t, &tr).unwrap();
    let p = &t * &qapsnark::algebra::Polynomial::from_i64s(f, &[5, 0, 1]);
    let proof = poly_prove(&crs, &p, &t, &mut rng).unwrap();
    assert!(poly_verify(&crs, &proof));
}

#[test]
fn contribution_order_is_checked() {
    let mut tr = run(4, &[(3, 5), (7, 11), (13, 17)]);
    tr.verify().unwrap();
    tr.contributions.swap(1, 2);
    let err = tr.verify().unwrap_err();
    assert_eq!(err.contribution, 1);
    assert!(err
        .failures
        .iter()
        .any(|f| f.check == Check::Layering || f.check == Check::Structure));
}

#[test]
fn mutated_elements_are_located() {
    let f = field();
    let mut rng = StdRng::seed_from_u64(53);
    let tr = run(6, &[(3, 5), (7, 11), (13, 17)]);
    for _ in 0..200 {
        let mut bad = tr.clone();
        let k = rng.gen_range(0..3);
        let own = rng.gen_bool(0.5);
        let i = rng.gen_range(1..=6);
        let c = &mut bad.contributions[k];
        let set = if own { &mut c.own } else { &mut c.accumulated };
        set.powers[i] = set.powers[i] * backend().encrypt(f.random_nonzero(&mut rng));
        let err = bad.verify().unwrap_err();
        assert_eq!(err.contribution, k);
        let subject = if own {
            Subject::Own
        } else {
            Subject::Accumulated
        };
        assert!(err.failures.iter().any(|x| x.subject == subject), "{}", err);
    }
}

#[test]
fn identity_secrets_are_flagged_weak() {
    let tr = run(3, &[(1, 1)]);
    let prev = CrsPowers::generator(backend(), 3);
    let report = verify_contribution(&prev, &tr.contributions[0]);
    assert!(report.passed() && report.weak);
    let tr = run(3, &[(2, 9)]);
    assert!(!verify_contribution(&prev, &tr.contributions[0]).weak);
}

#[test]
fn json_round_trip_and_unverified_extension() {
    let mut rng = StdRng::seed_from_u64(54);
    let mut tr = CeremonyTranscript::new(backend(), 5).unwrap();
    for _ in 0..2 {
        tr.contribute(&mut rng).unwrap();
    }
    let s = tr.to_json();
    let back = CeremonyTranscript::from_json(&s).unwrap();
    assert_eq!(back, tr);
    assert_eq!(back.to_json(), s);

    tr.contributions[1].accumulated.alpha = backend().generator();
    assert!(contribute(&tr, &mut rng).is_err());
}
