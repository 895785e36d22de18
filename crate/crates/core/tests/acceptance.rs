//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always printed; exits non-zero on any failure.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use mhopf::catalog::*;
use mhopf::cli::format::load_value;
use mhopf::double::{build_double, DoubleHandle, Lift};
use mhopf::mha::{Cover, MhaHandle, Nesting, Side, SuiteConfig};
use mhopf::pairing::{PairingHandle, StarMode};
use mhopf::report::{Report, Status};
use mhopf::{sample, Label, Scalar, Tensor};
use rand::Rng;
use serde_json::Value;

type Outcome = Result<String, String>;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn passed(r: &Report) -> Result<(), String> {
    match r.failures().next() {
        None => Ok(()),
        Some(c) => Err(format!("{}: {} ({})", r.title, c.name, c.witness.clone().unwrap_or_default())),
    }
}

fn within(t: Instant, limit: u64) -> Result<Duration, String> {
    let e = t.elapsed();
    if e > Duration::from_secs(limit) {
        Err(format!("took {e:.1?}, limit {limit} s"))
    } else {
        Ok(e)
    }
}

fn groups() -> Vec<Group> {
    vec![Group::cyclic(2), Group::cyclic(3), Group::klein(), Group::symmetric3(), Group::dihedral4()]
}

fn oracle_equivalence() -> Outcome {
    let t = Instant::now();
    let mut products = 0;
    for g in groups() {
        let d = DoubleHandle::new(&finite_group_pair(&g).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let oracle = ClassicalDouble::new(&g);
        for (k, want) in oracle.multiplication_table() {
            let got = d.d_mul(&Tensor::basis(k[0].clone()), &Tensor::basis(k[1].clone())).map_err(|e| e.to_string())?;
            if got != want {
                return Err(format!("{}: {} · {} = {got}, oracle {want}", g.name, k[0], k[1]));
            }
            products += 1;
        }
        for b in oracle.basis() {
            let x = Tensor::basis(ClassicalDouble::label(b.0, b.1));
            let got = d.handle().delta_n_covered(&x, &[], 1).map_err(|e| e.to_string())?;
            if got != oracle.coproduct(b) {
                return Err(format!("{}: Δ{x} = {got}, oracle {}", g.name, oracle.coproduct(b)));
            }
        }
    }
    let e = within(t, 60)?;
    Ok(format!("{products} products and all coproducts over 5 groups in {e:.1?}"))
}

fn catalog_handles() -> mhopf::Result<(Vec<MhaHandle>, Vec<PairingHandle>)> {
    let mut hs = Vec::new();
    let mut ps = Vec::new();
    for g in [Group::trivial(), Group::cyclic(2), Group::cyclic(3), Group::klein(), Group::symmetric3()] {
        hs.push(function_algebra(&g)?);
        hs.push(group_algebra(&g)?);
        ps.push(finite_group_pair(&g)?);
    }
    hs.push(int_function_algebra()?);
    hs.push(int_group_algebra()?);
    hs.push(hopf_as_mha(&sweedler_hopf_data())?);
    ps.push(lazy_int_group_pair()?);
    ps.push(sweedler_pair(Scalar::i())?);
    Ok((hs, ps))
}

fn axiom_suites() -> Outcome {
    let cfg = SuiteConfig::default();
    let (hs, ps) = catalog_handles().map_err(|e| e.to_string())?;
    let mut checks = 0;
    for h in &hs {
        let r = h.verify(&cfg);
        passed(&r)?;
        checks += r.checks.len();
    }
    for p in &ps {
        for r in [p.verify_prepairing(&cfg), p.verify_pairing(&cfg), p.verify_properties(&cfg)] {
            passed(&r)?;
            checks += r.checks.len();
        }
    }
    Ok(format!("{} algebras, {} pairings, {checks} checks", hs.len(), ps.len()))
}

const SIX: [&str; 6] = [
    "R(A⊗B) = A⊗B",
    "b▷a onto A",
    "b◁a onto B",
    "R̃(B⊗A) = B⊗A",
    "a▷b onto B",
    "a◁b onto A",
];

fn six_conditions() -> Outcome {
    let cfg = SuiteConfig::default();
    let statuses = |p: &PairingHandle| -> Vec<Status> {
        p.verify_pairing(&cfg)
            .checks
            .iter()
            .filter(|c| SIX.contains(&c.name.as_str()))
            .map(|c| c.status)
            .collect()
    };
    let mut good = 0;
    for g in [Group::cyclic(2), Group::cyclic(3), Group::symmetric3()] {
        let s = statuses(&finite_group_pair(&g).map_err(|e| e.to_string())?);
        if s.len() != 6 || s.iter().any(|x| *x != Status::Pass) {
            return Err(format!("{}: {s:?}", g.name));
        }
        good += 1;
    }
    let s = statuses(&sweedler_pair(Scalar::i()).map_err(|e| e.to_string())?);
    if s.len() != 6 || s.iter().any(|x| *x != Status::Pass) {
        return Err(format!("H4 pairing: {s:?}"));
    }
    let g = Group::symmetric3();
    let zero = PairingHandle::new(
        "zero",
        &function_algebra(&g).map_err(|e| e.to_string())?,
        &group_algebra(&g).map_err(|e| e.to_string())?,
        |_, _| Scalar::from_int(0),
        StarMode::Off,
    )
    .map_err(|e| e.to_string())?;
    let s = statuses(&zero);
    if s.len() != 6 || s.iter().any(|x| *x != Status::Fail) {
        return Err(format!("zero form: {s:?}"));
    }
    Ok(format!("all six pass on {} pairings, all six fail on the zero form", good + 1))
}

fn double_as_mha() -> Outcome {
    let t = Instant::now();
    let cfg = SuiteConfig::default();
    let s3 = build_double(&finite_group_pair(&Group::symmetric3()).map_err(|e| e.to_string())?, &cfg);
    let s3 = s3.map_err(|e| e.to_string())?;
    let z2 = build_double(&finite_group_pair(&Group::cyclic(2)).map_err(|e| e.to_string())?, &cfg);
    let z2 = z2.map_err(|e| e.to_string())?;
    let r = s3.handle().verify(&cfg);
    passed(&r)?;
    let rz = z2.handle().verify(&cfg);
    passed(&rz)?;
    let coassoc = |r: &Report| {
        r.checks
            .iter()
            .find(|c| c.name.starts_with("mixed coassociativity"))
            .map(|c| c.window.clone())
            .unwrap_or_default()
    };
    let e = within(t, 120)?;
    Ok(format!("D(S3) {} checks, coassociativity on {}; D(Z2) on {}; {e:.1?}", r.checks.len(), coassoc(&r), coassoc(&rz)))
}

fn integral_fixed_point() -> Outcome {
    let mut pairs = 0;
    for g in [
        Group::trivial(),
        Group::cyclic(2),
        Group::cyclic(3),
        Group::cyclic(4),
        Group::klein(),
        Group::cyclic(5),
        Group::cyclic(6),
        Group::symmetric3(),
    ] {
        let d = DoubleHandle::new(&finite_group_pair(&g).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let phi = d.handle().left_integral().ok_or("no integral on D")?;
        let w = d.window(0);
        let c = d.handle().check_integral(&phi, &w);
        if c.status != Status::Pass {
            return Err(format!("D({}): {}", g.name, c.witness.unwrap_or_default()));
        }
        pairs += w.len() * w.len();
    }
    Ok(format!("φ_A⊗ψ_B left invariant on all {pairs} basis pairs, |G| ≤ 6"))
}

fn star_structure() -> Outcome {
    let star_checks = |d: &DoubleHandle, pairs: &[(Label, Label)]| -> Result<(), String> {
        for (x, y) in pairs {
            let (x, y) = (Tensor::basis(x.clone()), Tensor::basis(y.clone()));
            let e = |e: mhopf::Error| e.to_string();
            if d.d_star(&d.d_star(&x).map_err(e)?).map_err(e)? != x {
                return Err(format!("ι² ≠ id at {x}"));
            }
            let lhs = d.d_star(&d.d_mul(&x, &y).map_err(e)?).map_err(e)?;
            let rhs = d.d_mul(&d.d_star(&y).map_err(e)?, &d.d_star(&x).map_err(e)?).map_err(e)?;
            if lhs != rhs {
                return Err(format!("(xy)* ≠ y*x* at x = {x}, y = {y}"));
            }
        }
        Ok(())
    };
    let z2 = DoubleHandle::new(&finite_group_pair(&Group::cyclic(2)).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let w = z2.window(0);
    let all: Vec<_> = w.iter().flat_map(|x| w.iter().map(move |y| (x.clone(), y.clone()))).collect();
    star_checks(&z2, &all)?;
    let s3 = DoubleHandle::new(&finite_group_pair(&Group::symmetric3()).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let w = s3.window(0);
    let mut rng = sample::rng(6);
    let random: Vec<_> = (0..100).map(|_| (sample::label(&mut rng, &w), sample::label(&mut rng, &w))).collect();
    star_checks(&s3, &random)?;
    // i_A, i_B star-preserving on every basis element of A and B
    for d in [&z2, &s3] {
        let probe = d.window(0);
        for (h, into_a) in [(d.a(), true), (d.b(), false)] {
            for l in h.window(0) {
                let m = mhopf::algebra::Multiplier::embed(h.algebra(), &Tensor::basis(l.clone()));
                let ms = m.star().map_err(|e| e.to_string())?;
                let (lhs, rhs) = if into_a {
                    (d.lift_multiplier(Lift::InA(&ms)), d.lift_multiplier(Lift::InA(&m)))
                } else {
                    (d.lift_multiplier(Lift::InB(&ms)), d.lift_multiplier(Lift::InB(&m)))
                };
                let lhs = lhs.map_err(|e| e.to_string())?;
                let rhs = rhs.map_err(|e| e.to_string())?.star().map_err(|e| e.to_string())?;
                if !lhs.equals_on(&rhs, &probe).map_err(|e| e.to_string())? {
                    return Err(format!("{} lift not star-preserving at {l}", if into_a { "i_A" } else { "i_B" }));
                }
            }
        }
    }
    Ok(format!("D(Z2) all {} pairs, D(S3) 100 random pairs, i_A and i_B star-preserving", all.len()))
}

fn lazy_integers() -> Outcome {
    let t = Instant::now();
    let cfg = SuiteConfig {
        window: 8,
        samples: 100,
        ..SuiteConfig::default()
    };
    let p = lazy_int_group_pair().map_err(|e| e.to_string())?;
    let witness = no_unit_witness(p.a(), 8).map_err(|e| e.to_string())?.ok_or("A looks unital on the window")?;
    for r in [p.a().verify(&cfg), p.b().verify(&cfg), p.verify_prepairing(&cfg), p.verify_pairing(&cfg)] {
        passed(&r)?;
    }
    let d = DoubleHandle::new(&p).map_err(|e| e.to_string())?;
    let r = d.verify(&cfg);
    passed(&r)?;
    let find = |prefix: &str| {
        r.checks
            .iter()
            .find(|c| c.name.starts_with(prefix) && c.status == Status::Pass)
            .map(|c| format!("{} [{}]", c.name, c.window))
    };
    let inv = find("T⁻¹∘T = id").ok_or("T-inverse check missing")?;
    let twist = find("T(b″⊗b▷a◁b′) =").ok_or("two-sided twist identity missing")?;
    let e = within(t, 30)?;
    Ok(format!("no unit ({witness}); {inv}; {twist}; {e:.1?}"))
}

fn opposite_isomorphism() -> Outcome {
    let z2 = DoubleHandle::new(&finite_group_pair(&Group::cyclic(2)).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let r = z2.opposite_double_iso(&SuiteConfig::default());
    passed(&r)?;
    let s3 = DoubleHandle::new(&finite_group_pair(&Group::symmetric3()).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let cfg = SuiteConfig {
        samples: 50,
        triple_limit: 50,
        seed: 8,
        ..SuiteConfig::default()
    };
    let rs = s3.opposite_double_iso(&cfg);
    passed(&rs)?;
    let w = |r: &Report| r.checks.first().map(|c| c.window.clone()).unwrap_or_default();
    Ok(format!("Z2: {}; S3: {}", w(&r), w(&rs)))
}

fn sweedler_nestings() -> Outcome {
    let h = function_algebra(&Group::symmetric3()).map_err(|e| e.to_string())?;
    let labels = h.window(0);
    let mut rng = sample::rng(9);
    for case in 0..50 {
        let n = 1 + case % 3;
        let a = sample::vector(&mut rng, &labels, 3);
        // cover every leg but one, from a random side
        let free = rng.gen_range(0..=n);
        let covers: Vec<Cover> = (0..=n)
            .filter(|&leg| leg != free)
            .map(|leg| {
                let side = if rng.gen_bool(0.5) { Side::Left } else { Side::Right };
                Cover::new(leg, side, sample::vector(&mut rng, &labels, 2))
            })
            .collect();
        let left = h.delta_n_covered_with(&a, &covers, n, Nesting::Leftmost).map_err(|e| e.to_string())?;
        let right = h.delta_n_covered_with(&a, &covers, n, Nesting::Rightmost).map_err(|e| e.to_string())?;
        if left != right {
            return Err(format!("case {case}: n = {n}, a = {a}: {left} vs {right}"));
        }
    }
    Ok("50 random covered cases, n ≤ 3, both nestings equal on C(S3)".into())
}

fn mutation_sensitivity() -> Outcome {
    let text = std::fs::read_to_string(data("z2_pair.json")).map_err(|e| e.to_string())?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut mutants = 0;
    for side in ["A", "B"] {
        let basis: Vec<Value> = doc[side]["basis"].as_array().cloned().unwrap_or_default();
        for x in &basis {
            for y in &basis {
                for u in &basis {
                    for v in &basis {
                        let mut m = doc.clone();
                        let rows = m[side]["t1"].as_array_mut().ok_or("t1 missing")?;
                        let at = |r: &Value| r[0] == *x && r[1] == *y && r[2] == *u && r[3] == *v;
                        match rows.iter().position(at) {
                            Some(i) => {
                                rows.remove(i);
                            }
                            None => rows.push(serde_json::json!([x, y, u, v, "1"])),
                        }
                        mutants += 1;
                        let caught = match load_value(&m) {
                            Err(mhopf::Error::VerificationFailed { witness, .. }) => Some(witness),
                            Err(e) => return Err(format!("mutant {side} T1[{x},{y}→{u},{v}] is a parse error: {e}")),
                            Ok(_) => {
                                let path = dir.path().join(format!("m{mutants}.json"));
                                std::fs::write(&path, m.to_string()).map_err(|e| e.to_string())?;
                                let (mut out, mut err) = (Vec::new(), Vec::new());
                                let code = mhopf::cli::run(["mhopf", "verify", path.to_str().unwrap()], &mut out, &mut err);
                                let out = String::from_utf8_lossy(&out).into_owned();
                                (code == 1)
                                    .then(|| out.lines().find(|l| l.trim_start().starts_with("witness:")).map(str::to_string))
                                    .flatten()
                            }
                        };
                        if caught.is_none() {
                            return Err(format!("mutant {side} T1[{x},{y}→{u},{v}] passed every suite"));
                        }
                    }
                }
            }
        }
    }
    Ok(format!("all {mutants} single-entry T1 mutants fail with a witness"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("double matches the classical oracle", oracle_equivalence),
        ("catalog axiom suites", axiom_suites),
        ("six pairing conditions agree", six_conditions),
        ("double passes the mha suite", double_as_mha),
        ("double integral fixed point", integral_fixed_point),
        ("double star structure", star_structure),
        ("lazy integer pairing", lazy_integers),
        ("opposite double isomorphism", opposite_isomorphism),
        ("Sweedler nestings agree", sweedler_nestings),
        ("mutation sensitivity", mutation_sensitivity),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = f();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({:.1?})", i + 1, t.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({:.1?})", i + 1, t.elapsed());
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
