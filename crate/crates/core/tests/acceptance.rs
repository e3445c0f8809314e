//! One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

mod common;

use std::sync::Arc;
use std::thread;
use std::time::Instant;

use ibekit::curve::Curve;
use ibekit::identity::Identity;
use ibekit::ledger::{measure, Op};
use ibekit::novel::{fs, hibe, ibe};
use ibekit::pairing::{pairing, pairing_ratio, tate, Gt};
use ibekit::schemes::{random_message, scheme_for, SchemeId};
use ibekit::scorecard::advantage::{advantage_order, bf_full_form, strictly_ordered, AdvantageInputs};
use ibekit::scorecard::boyen::{boyen_table, Family};
use ibekit::scorecard::cost::{parse_decimal, CostTerm, ModelParams, UnitCosts};
use ibekit::scorecard::rank::{rank_aggregate, RankFile};
use ibekit::scorecard::tables::{final_classes, render, TableId};
use ibekit::scorecard::DataSet;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

use common::oracle::*;
use common::*;

const TRIALS: usize = 100;

type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

fn criterion_1() -> Check {
    let bench = Curve::bench();
    // Independent jobs, one thread each.
    let mut jobs: Vec<(String, Box<dyn FnOnce() -> Check + Send>)> = Vec::new();
    for id in SchemeId::ALL {
        let c = Arc::clone(&bench);
        jobs.push((
            format!("{id} bench"),
            Box::new(move || benchmark_roundtrips(id, &c, TRIALS, 100)),
        ));
        jobs.push((format!("{id} tiny"), Box::new(move || benchmark_tiny_exhaustive(id))));
    }
    let c = Arc::clone(&bench);
    jobs.push((
        "our-ibe bench".into(),
        Box::new(move || our_ibe_roundtrips(&c, TRIALS, 101)),
    ));
    jobs.push(("our-ibe tiny".into(), Box::new(our_ibe_tiny_exhaustive)));
    for v in 1..=4 {
        // Split by trials so no single thread carries all of v = 1..4.
        let c = Arc::clone(&bench);
        jobs.push((
            format!("our-hibe bench part {v}"),
            Box::new(move || hibe_roundtrips(&c, 4, TRIALS / 4, 200 + v)),
        ));
    }
    jobs.push(("our-hibe tiny".into(), Box::new(|| hibe_tiny_exhaustive(4))));
    for part in 0..4 {
        let c = Arc::clone(&bench);
        jobs.push((
            format!("fs-hibe bench part {part}"),
            Box::new(move || fs_roundtrips(&c, 3, TRIALS / 4, 300 + part)),
        ));
    }
    jobs.push(("fs-hibe tiny".into(), Box::new(fs_tiny_exhaustive)));

    let results: Vec<(String, Check)> = thread::scope(|s| {
        let handles: Vec<_> = jobs.into_iter().map(|(name, job)| (name, s.spawn(job))).collect();
        handles
            .into_iter()
            .map(|(name, h)| (name, h.join().unwrap_or_else(|_| Err("panicked".into()))))
            .collect()
    });
    let failed: Vec<String> = results
        .into_iter()
        .filter_map(|(name, r)| r.err().map(|e| format!("{name}: {e}")))
        .collect();
    ensure(failed.is_empty(), || failed.join("; "))
}

fn criterion_2() -> Check {
    let curve = Curve::tiny();
    let points = all_points();
    let z = zeta(&curve);
    let subgroup = g1();
    for &p in &subgroup {
        for &q in &subgroup {
            let want = oracle(p, distort(z, q), &points);
            let lp = lib_point(&curve, p);
            let lq = lib_point(&curve, q);
            let sym = lib_gt(&pairing(&lp, &lq).map_err(|e| e.to_string())?);
            let raw = lib_gt(&tate(&lp, &curve.distort(&lq).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?);
            ensure(sym == want && raw == want, || {
                format!("e({p:?}, {q:?}): oracle {want:?}, got {sym:?} / {raw:?}")
            })?;
        }
    }
    let g = curve.generator();
    let e = pairing(&g, &g).map_err(|e| e.to_string())?;
    ensure(!e.is_one(), || "e(g, g) is degenerate".into())?;
    for a in 0u32..3 {
        for b in 0u32..3 {
            let lhs = pairing(&g.mul(&a.into()), &g.mul(&b.into())).map_err(|e| e.to_string())?;
            ensure(lhs == e.pow(&BigUint::from(a * b)), || {
                format!("bilinearity fails at a={a} b={b}")
            })?;
        }
    }
    Ok(())
}

fn criterion_3() -> Check {
    let data = DataSet::embedded();
    for (file, want) in [
        ("table1.csv", [11, 16, 14, 20, 10, 13]),
        ("table5.csv", [10, 6, 15, 12, 13, 20]),
    ] {
        let (sums, _) =
            rank_aggregate(&RankFile::parse(data.text(file).unwrap()).unwrap().matrix).map_err(|e| e.to_string())?;
        ensure(sums == want, || format!("{file} sums {sums:?}"))?;
    }
    let (_, _, _, sums, classes) = final_classes(&data).map_err(|e| e.to_string())?;
    ensure(sums == [4, 6, 9, 9, 5, 9], || format!("final sums {sums:?}"))?;
    ensure(classes.iter().filter(|&&c| c == 4).count() == 3, || {
        format!("final classes {classes:?}")
    })?;
    let props = render(TableId::Properties, &data, None).map_err(|e| e.to_string())?;
    let row = props.rows.iter().find(|r| r[0] == "sum").ok_or("no sum row")?;
    ensure(row[1..] == ["12", "3", "9", "7", "12", "14"], || {
        format!("property sums {row:?}")
    })?;
    for (family, want) in [
        (Family::Ss, ["432", "332", "330"]),
        (Family::Mnt, ["421.2", "321.2", "321"]),
    ] {
        let t = boyen_table(&data, family).map_err(|e| e.to_string())?;
        for (s, w) in t.schemes.iter().zip(want) {
            let got = t.cell(s, "sum").ok_or("missing cell")?;
            ensure(*got == parse_decimal(w).unwrap(), || format!("{family} {s}: {got}"))?;
        }
    }
    for id in TableId::ALL.into_iter().filter(|t| !t.needs_measurements()) {
        let r = render(id, &data, None).map_err(|e| e.to_string())?;
        ensure(r.pass != Some(false), || format!("{id}: {:?}", r.notes))?;
    }
    Ok(())
}

fn criterion_4() -> Check {
    let curve = Curve::bench();
    let mut rng = rng(4);
    let who = Identity::new("alice@example.com").unwrap();

    let (params, msk) = ibe::setup(&curve, &mut rng).map_err(|e| e.to_string())?;
    let key = ibe::extract(&params, &msk, &who, &mut rng).map_err(|e| e.to_string())?;
    let ct = ibe::encrypt(&params, &who, &Gt::random(&curve, &mut rng), &mut rng).map_err(|e| e.to_string())?;
    let (_, l) = measure(|| ibe::decrypt(&params, &key, &ct));
    let n = (
        l.all.get(Op::Pairing),
        l.all.get(Op::RatioPairing),
        l.all.get(Op::MillerLoop),
    );
    ensure(n == (1, 0, 1), || {
        format!("our-ibe decrypt: pairing, ratio, miller = {n:?}")
    })?;

    let s = scheme_for(SchemeId::Bb1);
    let (params, msk) = s.setup(&curve, MSG_LEN, &mut rng).map_err(|e| e.to_string())?;
    let key = s.extract(&params, &msk, &who, &mut rng).map_err(|e| e.to_string())?;
    let m = random_message(&params, &mut rng).unwrap();
    let ct = s.encrypt(&params, &who, &m, &mut rng).map_err(|e| e.to_string())?;
    let (_, l) = measure(|| s.decrypt(&params, &key, &ct));
    let n = (
        l.all.get(Op::RatioPairing),
        l.all.get(Op::Pairing),
        l.all.get(Op::MillerLoop),
        l.all.get(Op::FinalExp),
    );
    ensure(n == (1, 0, 2, 1), || {
        format!("BB1 decrypt: ratio, pairing, miller, final exp = {n:?}")
    })?;

    let s = scheme_for(SchemeId::Sk);
    let (params, msk) = s.setup(&curve, MSG_LEN, &mut rng).map_err(|e| e.to_string())?;
    let (_, l) = measure(|| s.extract(&params, &msk, &who, &mut rng));
    let n = (l.top.get(Op::ZInv), l.top.get(Op::ScalarMul));
    ensure(n == (1, 1), || format!("SK extract: inversions, scalar muls = {n:?}"))?;

    for v in 1..=4 {
        let (params, _) = hibe::setup(&curve, v, &mut rng).map_err(|e| e.to_string())?;
        for depth in 1..=v {
            let ids = hibe::hash_identity(
                &curve,
                &Identity::tuple((0..depth).map(|i| vec![b'a' + i as u8]).collect()).unwrap(),
            );
            let ct =
                hibe::encrypt(&params, &ids, &Gt::random(&curve, &mut rng), &mut rng).map_err(|e| e.to_string())?;
            ensure(ct.arity() == 3, || {
                format!("hibe v={v} depth {depth}: arity {}", ct.arity())
            })?;
        }
    }
    Ok(())
}

fn criterion_5() -> Check {
    let want = [
        SchemeId::Waters,
        SchemeId::Bf,
        SchemeId::Sk,
        SchemeId::Gentry,
        SchemeId::Bb1,
        SchemeId::Bb2,
    ];
    let mut rng = rng(5);
    for i in 0..100 {
        let x = AdvantageInputs::sample(&mut rng);
        ensure(x.satisfies_constraint(), || {
            format!("sample {i} outside the constraint")
        })?;
        let order = advantage_order(&x).map_err(|e| e.to_string())?;
        let ids: Vec<SchemeId> = order.iter().map(|(s, _)| *s).collect();
        ensure(strictly_ordered(&order) && ids == want, || {
            format!("sample {i}: {order:?}")
        })?;
    }
    Ok(())
}

fn criterion_6() -> Check {
    let unit = UnitCosts::model(&ModelParams::unit(160, 2)).map_err(|e| e.to_string())?;
    let fourteen = BigRational::from_integer(BigInt::from(14));
    ensure(unit.price(CostTerm::EcAdd) == Some(&fourteen), || {
        "ECADD is not 14 units".into()
    })?;

    let curve = Curve::bench();
    let mut rng = rng(6);
    let g = curve.generator();
    let mut adds = 0u64;
    for _ in 0..1000 {
        let mut bytes = [0u8; 20];
        rng.fill_bytes(&mut bytes);
        bytes[0] |= 0x80;
        let k = BigUint::from_bytes_be(&bytes);
        let (_, l) = measure(|| g.mul(&k));
        adds += l.all.get(Op::EcAdd);
    }
    let density = adds as f64 / 1000.0;
    let target = 159.0 / 3.0;
    ensure((density - target).abs() <= 0.05 * target, || {
        format!("NAF adds per scalar {density:.2}, target {target:.2}")
    })?;

    let (a, b) = (curve.random_scalar(&mut rng), curve.random_scalar(&mut rng));
    let (p1, q2) = (g.mul(&a), g.mul(&b));
    let (_, ratio) = measure(|| pairing_ratio(&p1, &g, &g, &q2));
    let (_, two) = measure(|| (pairing(&p1, &g), pairing(&g, &q2)));
    let (r, t) = (ratio.all.get(Op::MulK), two.all.get(Op::MulK));
    ensure(r < t, || format!("ratio MulK {r} vs two pairings {t}"))
}

fn criterion_7() -> Check {
    let curve = Curve::bench();
    fs_matrix(&curve, 3, 7)?;
    // Erased nodes are absent from the serialized bundle too.
    let mut rng = rng(7);
    let (params, root) = fs::setup(&curve, 1, 3, &mut rng).map_err(|e| e.to_string())?;
    let mut bundle = root.derive(&params, b"alice", &mut rng).map_err(|e| e.to_string())?;
    for now in 0..params.periods() {
        let env = bundle.to_envelope(&curve);
        let mut stored: Vec<String> = env
            .elements
            .names()
            .into_iter()
            .filter_map(|n| n.strip_prefix("node.").and_then(|n| n.strip_suffix(".D")))
            .map(String::from)
            .collect();
        stored.sort();
        let mut want = fs::required_words(now, 3);
        want.sort();
        ensure(stored == want, || format!("period {now}: envelope holds {stored:?}"))?;
        if now + 1 < params.periods() {
            bundle = bundle.update(&params, &mut rng).map_err(|e| e.to_string())?;
        }
    }
    Ok(())
}

fn criterion_8() -> Check {
    let unit = UnitCosts::model(&ModelParams::unit(80, 2)).map_err(|e| e.to_string())?;
    let twelve = BigRational::from_integer(BigInt::from(12));
    ensure(unit.price(CostTerm::EcDbl) == Some(&twelve), || {
        format!(
            "ECDBL priced {:?}, formula gives 12 (stated total 13)",
            unit.price(CostTerm::EcDbl)
        )
    })?;
    let mut rng = rng(8);
    for i in 0..100 {
        let x = AdvantageInputs::sample(&mut rng);
        let with = bf_full_form(&x, true);
        let without = bf_full_form(&x, false);
        ensure(with < 0.0 && without > 0.0, || {
            format!("sample {i}: BF full form {with} / {without}")
        })?;
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("correctness suite", criterion_1),
        ("pairing oracle equivalence", criterion_2),
        ("table reproduction", criterion_3),
        ("op-count assertions", criterion_4),
        ("advantage ordering", criterion_5),
        ("cost-formula unit tests", criterion_6),
        ("forward-security matrix", criterion_7),
        ("erratum pins", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(()) => println!("criterion {}: PASS {name} ({secs:.1}s)", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({secs:.1}s): {e}", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
