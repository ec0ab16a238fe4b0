//! Acceptance criteria, one line each. Runs without the libtest harness so
//! the PASS/FAIL lines always show.

mod common;

use std::collections::HashSet;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use qapsnark::algebra::{interpolate, vanishing_poly, FieldElement, Polynomial};
use qapsnark::ceremony::{contribute_with_secrets, finalize, CeremonyTranscript};
use qapsnark::circuit::Circuit;
use qapsnark::kop::{interactive_round, poly_crs_from_trapdoor, PolyTrapdoor};
use qapsnark::pinocchio::attacks::{
    attack_beta_malleate, attack_inconsistent_variable, attack_swap_operands, OperandSwap,
};
use qapsnark::pinocchio::{prove, prove_with_deltas, setup, setup_variant, verify, Proof, Variant};
use qapsnark::qap::{build_qap, cofactor};

use common::*;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(
        elapsed < limit,
        format!("took {:?}, limit {:?}", elapsed, limit),
    )
}

fn poly(coeffs: &[(i64, i64)]) -> Polynomial {
    let f = field();
    Polynomial::new(
        f,
        coeffs
            .iter()
            .map(|&(n, d)| f.rational(n, d).unwrap())
            .collect(),
    )
}

fn worked_example() -> Outcome {
    let start = Instant::now();
    let f = field();
    let (c, q) = compile(CALC);
    let w = c
        .witness(&inputs(&[("w", 1), ("a", 3), ("b", 2)]))
        .map_err(|e| e.to_string())?;
    ensure(c.value_of(&w, "m") == Some(f.elem(6)), "m != 6")?;
    ensure(c.value_of(&w, "v") == Some(f.elem(6)), "v != 6")?;
    let (l, r, o) = q.assemble(&w).map_err(|e| e.to_string())?;
    let at = |p: &Polynomial| -> Vec<u64> { (1..=3).map(|x| p.eval(f.elem(x)).value()).collect() };
    ensure(at(&l) == [3, 1, 1], format!("L values {:?}", at(&l)))?;
    ensure(at(&r) == [2, 1, 1], format!("R values {:?}", at(&r)))?;
    ensure(at(&o) == [6, 1, 1], format!("O values {:?}", at(&o)))?;
    let h = cofactor(&l, &r, &o, &q.t).map_err(|e| e.to_string())?;
    ensure(h == poly(&[(-2, 1), (1, 2)]), format!("h = {}", h))?;
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("h = 1/2 x - 2 in {:?}", start.elapsed()))
}

fn kop_fixtures() -> Outcome {
    let f = field();
    let p = Polynomial::from_i64s(f, &[0, 2, -3, 1]);
    let p2 = Polynomial::from_i64s(f, &[0, 2, -3, 2]);
    let t = Polynomial::from_i64s(f, &[2, -3, 1]);
    let (q, rem) = p.divrem(&t).map_err(|e| e.to_string())?;
    ensure(
        q == Polynomial::from_i64s(f, &[0, 1]) && rem.is_zero(),
        "p / t",
    )?;
    let (q, rem) = p2.divrem(&t).map_err(|e| e.to_string())?;
    ensure(
        q == Polynomial::from_i64s(f, &[3, 2]),
        format!("quotient {}", q),
    )?;
    ensure(
        rem == Polynomial::from_i64s(f, &[-6, 7]),
        format!("remainder {}", rem),
    )?;
    let round = interactive_round(&p, &t, f.elem(23)).ok_or("no round")?;
    ensure(
        (round.p.value(), round.t.value(), round.h.value()) == (10626, 462, 23),
        format!("{:?}", round),
    )?;
    ensure(round.p == round.t * round.h, "10626 != 462 * 23")?;
    Ok("x, 2x+3 rem 7x-6, 10626 = 462 * 23".into())
}

fn interpolation_fixtures() -> Outcome {
    let start = Instant::now();
    let f = field();
    let pts = |ys: [i64; 3]| -> Vec<(FieldElement, FieldElement)> {
        (1..=3)
            .zip(ys)
            .map(|(x, y)| (f.elem(x), f.from_i64(y)))
            .collect()
    };
    let l = interpolate(f, &pts([2, 2, 6])).map_err(|e| e.to_string())?;
    ensure(
        l == Polynomial::from_i64s(f, &[6, -6, 2]),
        format!("l = {}", l),
    )?;
    let r = interpolate(f, &pts([1, 3, 2])).map_err(|e| e.to_string())?;
    ensure(
        r == poly(&[(-8, 2), (13, 2), (-3, 2)]),
        format!("r = {}", r),
    )?;
    let o = interpolate(f, &pts([2, 6, 12])).map_err(|e| e.to_string())?;
    let h = cofactor(&l, &r, &o, &vanishing_poly(f, 3)).map_err(|e| e.to_string())?;
    ensure(
        h == Polynomial::from_i64s(f, &[4, -3]),
        format!("h = {}", h),
    )?;
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!(
        "2x^2 - 6x + 6, h = -3x + 4 in {:?}",
        start.elapsed()
    ))
}

fn completeness() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xC0FFEE);
    let mut failures = 0;
    for case in 0..100 {
        let (g, c, q, w) = random_instance(&mut rng, 8, 6, provable);
        let (pk, vk) = setup(backend(), &q, c.r1cs().m, &mut rng).map_err(|e| e.to_string())?;
        for zk in [false, true] {
            let proof =
                prove(&pk, &q, &w, &mut rng, zk).map_err(|e| format!("{}\n{}", e, g.src))?;
            if !verify(&vk, &proof, &c.public_values(&w)).unwrap() {
                failures += 1;
                eprintln!("case {} (zk {}) rejected:\n{}", case, zk, g.src);
            }
        }
    }
    ensure(failures == 0, format!("{} of 200 rejected", failures))?;
    within(start.elapsed(), Duration::from_secs(30))?;
    Ok(format!("200/200 accepted in {:?}", start.elapsed()))
}

fn attack_gates() -> Outcome {
    let f = field();
    for seed in 0..20u64 {
        let mut rng = StdRng::seed_from_u64(seed);

        // operand swap on calc, every variable prover-owned
        let (c, q) = compile(CALC);
        let k = f.random_nonzero(&mut rng);
        let mut values = vec![f.zero(); q.n + 1];
        values[0] = f.one();
        for (name, v) in [("w", f.one()), ("b", f.one()), ("a", k), ("m", k), ("v", k)] {
            values[c.r1cs().index_of(name).unwrap()] = v;
        }
        for (variant, expect) in [
            (Variant::NaiveAlpha, true),
            (Variant::OperandAlpha, false),
            (Variant::Final, false),
        ] {
            let (pk, vk) =
                setup_variant(variant, backend(), &q, 0, &mut rng).map_err(|e| e.to_string())?;
            let (proof, public) =
                attack_swap_operands(&pk, &vk, &q, &values, OperandSwap::LeftOutput)
                    .map_err(|e| e.to_string())?;
            ensure(
                verify(&vk, &proof, &public).unwrap() == expect,
                format!("swap vs {:?} (seed {})", variant, seed),
            )?;
        }

        // inconsistent variable under a shared beta
        let (c, q) = compile(SQUARES);
        let idx = |n: &str| c.r1cs().index_of(n).unwrap();
        let a = f.random_nonzero(&mut rng);
        let b = a * a;
        let v_r = f.random(&mut rng);
        let v_l = b + b - v_r;
        let mut values = vec![f.zero(); q.n + 1];
        values[0] = f.one();
        values[idx("a")] = a;
        values[idx("b")] = b;
        values[idx("c")] = v_l * v_r;
        for (variant, expect) in [
            (Variant::SharedBeta, true),
            (Variant::UnmaskedBeta, false),
            (Variant::Final, false),
        ] {
            let (pk, vk) =
                setup_variant(variant, backend(), &q, 1, &mut rng).map_err(|e| e.to_string())?;
            let (proof, public) =
                attack_inconsistent_variable(&pk, &vk, &q, &values, idx("b"), v_r)
                    .map_err(|e| e.to_string())?;
            ensure(
                verify(&vk, &proof, &public).unwrap() == expect,
                format!("inconsistent variable vs {:?} (seed {})", variant, seed),
            )?;
        }

        // beta malleation: a = 2 on the left, a = 5 on the right
        let mut values = vec![f.zero(); q.n + 1];
        values[0] = f.one();
        values[idx("a")] = f.elem(2);
        values[idx("b")] = f.elem(10);
        values[idx("c")] = f.elem(130);
        for (variant, expect) in [(Variant::UnmaskedBeta, true), (Variant::Final, false)] {
            let (pk, vk) =
                setup_variant(variant, backend(), &q, 1, &mut rng).map_err(|e| e.to_string())?;
            let (proof, public) = attack_beta_malleate(&pk, &vk, &q, &values, f.elem(3))
                .map_err(|e| e.to_string())?;
            ensure(
                verify(&vk, &proof, &public).unwrap() == expect,
                format!("malleation vs {:?} (seed {})", variant, seed),
            )?;
        }
    }

    let (c, q) = compile(CALC);
    let w = c.witness(&inputs(&[("w", 1), ("a", 3), ("b", 2)])).unwrap();
    let public = c.public_values(&w);
    let mut rejected = 0;
    for seed in 0..20u64 {
        let mut rng = StdRng::seed_from_u64(100 + seed);
        let (pk, vk) = setup(backend(), &q, c.r1cs().m, &mut rng).unwrap();
        let proof = prove(&pk, &q, &w, &mut rng, true).unwrap();
        for k in 0..8 {
            let mut e = proof.elements();
            let original = e[k];
            while e[k] == original {
                e[k] = backend().encrypt(f.random(&mut rng));
            }
            if !verify(&vk, &Proof::from_elements(e), &public).unwrap() {
                rejected += 1;
            }
        }
    }
    ensure(
        rejected == 160,
        format!("mutations rejected {}/160", rejected),
    )?;
    Ok("3 attacks x 20 seeds gated, mutations rejected 160/160".into())
}

fn public_binding() -> Outcome {
    let f = field();
    let (c, q) = compile(CALC);
    let mut rng = StdRng::seed_from_u64(42);
    let (pk, vk) = setup(backend(), &q, c.r1cs().m, &mut rng).unwrap();
    let (mut accepted, mut rejected) = (0, 0);
    for w in 0..2 {
        for a in 0..8 {
            for b in 0..8 {
                let wit = c.witness(&inputs(&[("w", w), ("a", a), ("b", b)])).unwrap();
                let proof = prove(&pk, &q, &wit, &mut rng, true).unwrap();
                let expected = if w == 1 { a * b } else { a + b };
                let v = f.from_i64(expected);
                if verify(&vk, &proof, &[f.from_i64(w), v]).unwrap() {
                    accepted += 1;
                }
                if !verify(&vk, &proof, &[f.from_i64(w), v + f.one()]).unwrap() {
                    rejected += 1;
                }
            }
        }
    }
    ensure(
        accepted == 128 && rejected == 128,
        format!("accepted {}, rejected {}", accepted, rejected),
    )?;
    Ok("128 accepted, 128 rejected".into())
}

fn ceremony_composition() -> Outcome {
    let start = Instant::now();
    let f = field();
    let d = 16;
    let mut rng = StdRng::seed_from_u64(77);
    let mut tr = CeremonyTranscript::new(backend(), d).map_err(|e| e.to_string())?;
    let (mut s, mut alpha) = (f.one(), f.one());
    for _ in 0..3 {
        let (sp, ap) = (f.random_nonzero(&mut rng), f.random_nonzero(&mut rng));
        let c = contribute_with_secrets(&tr, sp, ap).map_err(|e| e.to_string())?;
        tr.contributions.push(c);
        s *= sp;
        alpha *= ap;
    }
    let t = vanishing_poly(f, d);
    let crs = finalize(&t, &tr).map_err(|e| e.to_string())?;
    let direct = poly_crs_from_trapdoor(backend(), &t, d, &PolyTrapdoor { s, alpha })
        .map_err(|e| e.to_string())?;
    ensure(crs == direct, "finalized CRS differs from direct setup")?;

    let mut tripped = 0;
    for _ in 0..200 {
        let mut bad = tr.clone();
        let k = rng.gen_range(0..3);
        let c = &mut bad.contributions[k];
        let set = if rng.gen_bool(0.5) {
            &mut c.accumulated
        } else {
            &mut c.own
        };
        let slot = match rng.gen_range(0..3) {
            0 => &mut set.powers[rng.gen_range(0..=d)],
            1 => &mut set.alpha_powers[rng.gen_range(0..=d)],
            _ => &mut set.alpha,
        };
        let original = *slot;
        while *slot == original {
            *slot = backend().encrypt(f.random(&mut rng));
        }
        if let Err(fail) = bad.verify() {
            if !fail.failures.is_empty() {
                tripped += 1;
            }
        }
    }
    ensure(
        tripped == 200,
        format!("{}/200 mutations detected", tripped),
    )?;
    within(start.elapsed(), Duration::from_secs(10))?;
    Ok(format!(
        "composite CRS matches, 200/200 mutations detected in {:?}",
        start.elapsed()
    ))
}

fn zero_knowledge() -> Outcome {
    let f = field();
    let (c, q) = compile(CALC);
    let mut rng = StdRng::seed_from_u64(9);
    let (pk, vk) = setup(backend(), &q, c.r1cs().m, &mut rng).unwrap();
    let w = c.witness(&inputs(&[("w", 1), ("a", 3), ("b", 2)])).unwrap();
    let public = c.public_values(&w);
    let mut seen = HashSet::new();
    for _ in 0..1000 {
        let proof = prove(&pk, &q, &w, &mut rng, true).unwrap();
        ensure(verify(&vk, &proof, &public).unwrap(), "zk proof rejected")?;
        seen.insert(proof.to_bytes().unwrap());
    }
    ensure(
        seen.len() == 1000,
        format!("{} distinct of 1000", seen.len()),
    )?;
    let plain = prove(&pk, &q, &w, &mut rng, false).unwrap();
    let zeroed = prove_with_deltas(&pk, &q, &w, [f.zero(); 3]).unwrap();
    ensure(
        plain.to_bytes().unwrap() == zeroed.to_bytes().unwrap(),
        "zero deltas differ from plain",
    )?;
    Ok("1000 distinct verifying proofs, zero deltas byte-identical".into())
}

fn chain_source(len: usize) -> String {
    let mut body = vec!["    s0 = x * x + x;".to_string()];
    for k in 1..len - 1 {
        body.push(format!("    s{} = s{} * s{} + x;", k, k - 1, k - 1));
    }
    body.push(format!("    y = s{} * s{} + x;", len - 2, len - 2));
    format!("def chain(pub x) -> y {{\n{}\n}}\n", body.join("\n"))
}

fn scale_smoke() -> Outcome {
    let src = chain_source(1000);
    let start = Instant::now();
    let c = Circuit::from_source(&src, field()).map_err(|e| e.to_string())?;
    ensure(c.r1cs().d() == 1000, format!("d = {}", c.r1cs().d()))?;
    let q = build_qap(c.r1cs()).map_err(|e| e.to_string())?;
    let mut rng = StdRng::seed_from_u64(1000);
    let (pk, vk) = setup(backend(), &q, c.r1cs().m, &mut rng).map_err(|e| e.to_string())?;
    let w = c.witness(&inputs(&[("x", 3)])).map_err(|e| e.to_string())?;
    let proof = prove(&pk, &q, &w, &mut rng, true).map_err(|e| e.to_string())?;
    ensure(
        verify(&vk, &proof, &c.public_values(&w)).unwrap(),
        "rejected",
    )?;
    within(start.elapsed(), Duration::from_secs(10))?;
    Ok(format!(
        "1000 constraints end to end in {:?}",
        start.elapsed()
    ))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("worked example reproduction", worked_example),
        ("knowledge-of-polynomial fixtures", kop_fixtures),
        ("interpolation fixtures", interpolation_fixtures),
        ("protocol completeness", completeness),
        ("soundness and attack gates", attack_gates),
        ("public-input binding", public_binding),
        ("ceremony composition", ceremony_composition),
        ("zero-knowledge property", zero_knowledge),
        ("scale smoke test", scale_smoke),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {} {}: PASS ({})", i + 1, name, detail),
            Err(why) => {
                failed += 1;
                println!("criterion {} {}: FAIL ({})", i + 1, name, why);
            }
        }
    }
    println!(
        "acceptance: {} passed, {} failed",
        criteria.len() - failed,
        failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
