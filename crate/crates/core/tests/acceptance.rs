//! Acceptance gate: thirteen criteria, one PASS/FAIL line each. Expected
//! values are either published constants transcribed here or recomputed by
//! the oracles in `common`, never by the code under test.
//!
//! Runs without the libtest harness so every line is printed; the process
//! exits nonzero when any criterion fails.

mod common;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use factoromata::algebra::{minimal_polynomial, solve_exact, IntPolynomial, RatMatrix};
use factoromata::automata::{
    determinize, is_language_equal, make_add, make_less_equal, minimize, project, DEFAULT_STATE_CAP,
};
use factoromata::golden;
use factoromata::linrep::{
    reduce, sbar_representation, triple_representation, LinearRepresentation,
};
use factoromata::oracle::{
    density_profile, lemma_gamma_additivity, lemma_quadrant_constants, scan_gaps, scan_members,
    SetId,
};
use factoromata::query::{
    gap_length_set, gaps_dfa, interp::evaluate, parse, seed_registry, sgaps_dfa, Compiler,
    PredicateRegistry, GAPS_QUERY,
};
use factoromata::seed::{factauto, ThetaTriple};

type Rat = BigRational;

/// h(x), constant term first.
const H: [i64; 21] = [
    0, 0, 0, 0, -256, 896, -1280, 960, -384, 0, 160, -128, 0, 64, -40, 0, 24, -30, 20, -7, 1,
];

const SBAR_GAPS: [u64; 34] = [
    1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20, 21, 22, 23, 25, 26, 28,
    30, 31, 33, 34, 35, 37, 38, 42,
];

const LIMIT: u64 = 1 << 20;

type Criterion = fn(&Context) -> Result<String, String>;

struct Context {
    members: Vec<bool>,
    prefix: Vec<u64>,
    rep: LinearRepresentation,
}

fn big(s: &str) -> BigInt {
    s.parse().unwrap()
}

fn pow2(e: i64) -> Rat {
    if e >= 0 {
        Rat::from_integer(BigInt::one() << e)
    } else {
        Rat::new(BigInt::one(), BigInt::one() << (-e))
    }
}

fn r(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

// closed forms transcribed independently of the library tables

fn sbar_pow2(k: i64) -> Rat {
    let base = pow2(k - 3);
    match k % 24 {
        0 | 2 | 22 => base - pow2((k - 4) / 2),
        1 | 3 => base - pow2((k - 3) / 2),
        11 => base - pow2((k - 5) / 2),
        14 | 16 | 18 => base + pow2((k - 4) / 2),
        17 => base + pow2((k - 3) / 2),
        23 => base - r(3) * pow2((k - 5) / 2),
        _ => base,
    }
}

fn sbar_three_pow2(k: i64) -> Rat {
    let base = r(3) * pow2(k - 3) + r(1);
    match k % 24 {
        7 | 9 | 13 | 18 | 19 => base,
        1 | 3 | 5 => base - pow2((k - 3) / 2),
        0 | 4 | 10 => base - pow2((k - 2) / 2),
        2 | 6 | 8 | 12 => base - pow2((k - 4) / 2),
        11 | 23 => base - pow2((k - 5) / 2),
        14 => base + pow2((k - 4) / 2),
        15 => base + pow2((k - 1) / 2),
        16 => base + r(3) * pow2((k - 4) / 2),
        17 => base + pow2((k - 3) / 2),
        20 | 22 => base - r(3) * pow2((k - 4) / 2),
        21 => base - pow2((k - 1) / 2),
        _ => unreachable!(),
    }
}

fn criterion_1(cx: &Context) -> Result<String, String> {
    let fa = factauto();
    let bad: Vec<u64> = (1..=LIMIT)
        .filter(|&n| fa.accepts_u64(&[n]).unwrap() != cx.members[n as usize])
        .take(5)
        .collect();
    if !bad.is_empty() {
        return Err(format!("automaton disagrees with oracle at {bad:?}"));
    }
    let theta_bad: Vec<u64> = (1..=LIMIT)
        .filter(|&n| cx.members[n as usize] != (common::theta_code(n) == 0b001))
        .take(5)
        .collect();
    if !theta_bad.is_empty() {
        return Err(format!(
            "window criterion disagrees with factorial at {theta_bad:?}"
        ));
    }
    for n in 1..=25u64 {
        let accepted = fa.accepts_u64(&[n]).unwrap();
        if accepted == common::is_sum_of_three_squares(&common::factorial(n)) {
            return Err(format!("n = {n}: automaton vs exact factorial"));
        }
    }
    Ok("agree on 1..=2^20 and exact n! for n <= 25".to_string())
}

fn criterion_2(cx: &Context) -> Result<String, String> {
    let table = common::factorial_table(100_000);
    for (n, &(nu, odd)) in table.iter().enumerate() {
        let (a3, a5) = common::alphas(n as u64);
        let predicted = (1..=a3).fold(1u64, |acc, _| acc * 3 % 8);
        let predicted = if a5 % 2 == 1 {
            (8 - predicted) % 8
        } else {
            predicted
        };
        if odd as u64 != predicted || nu != common::legendre(n as u64) {
            return Err(format!("n = {n}: odd part {odd}, predicted {predicted}"));
        }
    }
    let _ = cx;
    Ok("odd part of n! mod 8 = 3^a3 (-1)^a5 for n <= 10^5".into())
}

fn criterion_3(_: &Context) -> Result<String, String> {
    let fa = factauto();
    let reg = seed_registry();
    let gaps = gaps_dfa(&reg).map_err(|e| e.to_string())?;
    let sgaps = sgaps_dfa(&reg).map_err(|e| e.to_string())?;
    let info = format!(
        "info: gaps {} / sgaps {} trimmed (published 319 / 203), {} / {} with sink",
        gaps.trimmed_state_count(),
        sgaps.trimmed_state_count(),
        gaps.state_count(),
        sgaps.state_count()
    );
    let (complete, trimmed) = (fa.state_count(), fa.trimmed_state_count());
    if complete == 33 || trimmed == 33 {
        Ok(format!("factauto has 33 states; {info}"))
    } else {
        Err(format!(
            "factauto has {complete} states with sink, {trimmed} trimmed; expected 33; {info}"
        ))
    }
}

fn criterion_4(cx: &Context) -> Result<String, String> {
    let reg = seed_registry();
    let want_sbar: BTreeSet<u64> = SBAR_GAPS.into_iter().collect();
    let want_s: BTreeSet<u64> = [1, 2, 3, 4].into_iter().collect();
    let sbar = gap_length_set(&gaps_dfa(&reg).unwrap(), 64).unwrap();
    let s = gap_length_set(&sgaps_dfa(&reg).unwrap(), 64).unwrap();
    if sbar != want_sbar || s != want_s {
        return Err(format!("automaton gap sets {sbar:?} / {s:?}"));
    }
    let firsts_sbar = common::gap_firsts(&cx.members[..=LIMIT as usize], true);
    let firsts_s = common::gap_firsts(&cx.members[..=LIMIT as usize], false);
    if firsts_sbar.keys().copied().collect::<BTreeSet<_>>() != want_sbar {
        return Err(format!(
            "scan witnesses S-bar lengths {:?}",
            firsts_sbar.keys()
        ));
    }
    if firsts_s.keys().copied().collect::<BTreeSet<_>>() != want_s {
        return Err(format!("scan witnesses S lengths {:?}", firsts_s.keys()));
    }
    if firsts_sbar[&42] != 23268 || firsts_sbar[&33] != 153828 {
        return Err(format!(
            "first 42 at {}, first 33 at {}",
            firsts_sbar[&42], firsts_sbar[&33]
        ));
    }
    // library scan and golden file against the oracle
    let scan = scan_gaps(LIMIT);
    if scan.first_sbar != firsts_sbar || scan.first_s != firsts_s {
        return Err("library gap scan differs from oracle".into());
    }
    if golden::first_occurrence_map(SetId::SBar) != firsts_sbar {
        return Err("golden first occurrences differ from oracle".into());
    }
    Ok("34 + 4 lengths; 42 first at 23268, 33 first at 153828".into())
}

fn criterion_5(cx: &Context) -> Result<String, String> {
    let published = [
        (3, "0", "3"),
        (27, "16773120", "50327553"),
        (51, "281474959933440", "844424913354753"),
    ];
    let mut slowest = Duration::ZERO;
    for (k, a, b) in published {
        let t = Instant::now();
        let got_a = cx.rep.value_pow2(k);
        let got_b = cx.rep.value_3pow2(k);
        slowest = slowest.max(t.elapsed());
        if got_a != big(a) || got_b != big(b) {
            return Err(format!("k = {k}: got {got_a} and {got_b}"));
        }
    }
    // digit-by-digit evaluation and the scan agree with squaring where both reach
    for k in 3..=20u64 {
        let n = 1u64 << k;
        if cx.rep.value_pow2(k) != BigInt::from(cx.prefix[n as usize])
            || cx.rep.eval_u64(3 * n / 2) != BigInt::from(cx.prefix[3 * n as usize / 2])
        {
            return Err(format!("k = {k}: matrix power vs oracle count"));
        }
    }
    if slowest > Duration::from_secs(1) {
        return Err(format!("slowest evaluation took {slowest:?}"));
    }
    Ok(format!("six values exact; slowest {slowest:?}"))
}

fn criterion_6(cx: &Context) -> Result<String, String> {
    let u = cx.rep.pow2_sequence(120, &[1]);
    let v = cx.rep.pow2_sequence(120, &[1, 1]);
    let mut hits = [0u32; 24];
    for k in 2..=120i64 {
        if Rat::from_integer(u[k as usize].clone()) != sbar_pow2(k) {
            return Err(format!(
                "S(2^{k}) = {}, formula {}",
                u[k as usize],
                sbar_pow2(k)
            ));
        }
        hits[(k % 24) as usize] += 1;
    }
    for k in 5..=120i64 {
        if Rat::from_integer(v[k as usize].clone()) != sbar_three_pow2(k) {
            return Err(format!(
                "S(3*2^{k}) = {}, formula {}",
                v[k as usize],
                sbar_three_pow2(k)
            ));
        }
    }
    let least = hits.iter().min().unwrap();
    if *least < 4 {
        return Err(format!("a residue class is covered only {least} times"));
    }
    Ok(format!(
        "both tables exact for k <= 120; each residue covered >= {least} times"
    ))
}

fn criterion_7(cx: &Context) -> Result<String, String> {
    let a = RatMatrix::from_rows(
        [3i64, 27, 51]
            .iter()
            .map(|&e| vec![pow2(e), r(1), pow2((e - 3) / 2)])
            .collect(),
    )
    .unwrap();
    let systems = [
        (
            "2^k",
            [
                cx.rep.value_pow2(3),
                cx.rep.value_pow2(27),
                cx.rep.value_pow2(51),
            ],
            [r(1) / r(8), r(0), r(-1)],
        ),
        (
            "3*2^k",
            [
                cx.rep.value_3pow2(3),
                cx.rep.value_3pow2(27),
                cx.rep.value_3pow2(51),
            ],
            [r(3) / r(8), r(0), r(-1)],
        ),
    ];
    let mut lines = Vec::new();
    let mut ok = true;
    for (name, rhs, want) in systems {
        let b: Vec<Rat> = rhs.iter().map(|x| Rat::from_integer(x.clone())).collect();
        let x = solve_exact(&a, &b).map_err(|e| e.to_string())?;
        // the solution must satisfy the system independently of the solver
        for (i, bi) in b.iter().enumerate() {
            let lhs: Rat = (0..3).map(|j| &a[(i, j)] * &x[j]).sum();
            if &lhs != bi {
                return Err(format!("{name}: solver output does not satisfy row {i}"));
            }
        }
        let shown = format!("({}, {}, {})", x[0], x[1], x[2]);
        if x != want {
            ok = false;
            lines.push(format!(
                "{name} -> {shown}, expected ({}, {}, {})",
                want[0], want[1], want[2]
            ));
        } else {
            lines.push(format!("{name} -> {shown}"));
        }
    }
    if ok {
        Ok(lines.join("; "))
    } else {
        Err(lines.join("; "))
    }
}

fn recurrence_holds(u: &[BigInt]) -> Option<usize> {
    (0..u.len() - 20).find(|&k| {
        let s: BigInt = H
            .iter()
            .enumerate()
            .map(|(i, &c)| BigInt::from(c) * &u[k + i])
            .sum();
        !s.is_zero()
    })
}

fn criterion_8(cx: &Context) -> Result<String, String> {
    let u = cx.rep.pow2_sequence(200, &[1]);
    if let Some(k) = recurrence_holds(&u) {
        return Err(format!("S-bar sequence breaks at k = {k}"));
    }
    let reg = seed_registry();
    for t in ThetaTriple::all() {
        let rep = triple_representation(&reg, t).map_err(|e| e.to_string())?;
        let u = rep.pow2_sequence(200, &[1]);
        if let Some(k) = recurrence_holds(&u) {
            return Err(format!("triple {t} breaks at k = {k}"));
        }
        // counts against the oracle where reachable
        let code = t.index();
        for k in 0..=16u64 {
            let n = 1u64 << k;
            let direct = (1..=n).filter(|&j| common::theta_code(j) == code).count();
            if u[k as usize] != BigInt::from(direct) {
                return Err(format!("triple {t} count at 2^{k}"));
            }
        }
    }
    Ok("S-bar and all eight triples satisfy h for k <= 200".into())
}

fn envelope(d: usize) -> IntPolynomial {
    let mut c = vec![0i64; d + 27];
    // (x - 1)(x - 2) = x^2 - 3x + 2, times x^24 - 4096, shifted by d
    for (i, v) in [2i64, -3, 1].into_iter().enumerate() {
        c[d + i + 24] += v;
        c[d + i] += -4096 * v;
    }
    IntPolynomial::from_i64s(&c)
}

fn divides_exactly(p: &IntPolynomial, q: &IntPolynomial) -> Result<bool, String> {
    let (quot, rem) = q.div_rem(p).map_err(|e| e.to_string())?;
    if !rem.iter().all(Zero::is_zero) {
        return Ok(false);
    }
    // certify by multiplying back
    let mut product = vec![Rat::zero(); quot.len() + p.coeffs().len() - 1];
    for (i, a) in quot.iter().enumerate() {
        for (j, b) in p.coeffs().iter().enumerate() {
            product[i + j] += a * Rat::from_integer(b.clone());
        }
    }
    while product.last().is_some_and(Zero::is_zero) {
        product.pop();
    }
    let want: Vec<Rat> = q
        .coeffs()
        .iter()
        .map(|c| Rat::from_integer(c.clone()))
        .collect();
    Ok(product == want)
}

fn criterion_9(cx: &Context) -> Result<String, String> {
    let h = IntPolynomial::from_i64s(&H);
    if h != golden::reference_h() {
        return Err("golden h differs from transcription".into());
    }
    if !divides_exactly(&h, &envelope(4))? {
        return Err("h does not divide x^4(x-1)(x-2)(x^24-4096)".into());
    }
    let red = reduce(&cx.rep);
    let mp = minimal_polynomial(&red.m0_matrix()).map_err(|e| e.to_string())?;
    // annihilates the matrix
    if !mp
        .eval_matrix(&red.m0_matrix())
        .map_err(|e| e.to_string())?
        .is_zero()
    {
        return Err("minimal polynomial does not annihilate M0".into());
    }
    let d = (0..=red.dim()).find(|&d| divides_exactly(&mp, &envelope(d)).unwrap_or(false));
    match d {
        Some(d) => Ok(format!(
            "h certified; reduced dim {} minpoly degree {} divides x^{d}(...)",
            red.dim(),
            mp.degree().unwrap()
        )),
        None => Err(format!("reduced minpoly {mp} divides no envelope")),
    }
}

fn criterion_10(cx: &Context) -> Result<String, String> {
    let u = cx.rep.pow2_sequence(24 * 6 + 23, &[1]);
    let dev = |e: usize| BigInt::from(8) * &u[e] - (BigInt::one() << e);
    let mut failures = Vec::new();
    let mut checked = 0;
    for k in 0..=6usize {
        for s in 0..24usize {
            if 24 * k + s < 2 {
                continue;
            }
            checked += 1;
            if dev(24 * k + s) != (BigInt::one() << (12 * k)) * dev(s) {
                failures.push((k, s));
            }
        }
    }
    if failures.is_empty() {
        Ok(format!("{checked} pairs"))
    } else {
        Err(format!(
            "{} of {checked} pairs fail: {failures:?}",
            failures.len()
        ))
    }
}

fn sup(prefix: &[u64], lo: u64, hi: u64) -> (f64, u64) {
    (lo..=hi)
        .map(|n| {
            let dev = (8 * prefix[n as usize] as i64 - n as i64).unsigned_abs() as f64;
            (dev / (8.0 * (n as f64).sqrt()), n)
        })
        .fold((-1.0, 0), |best, x| if x.0 > best.0 { x } else { best })
}

fn criterion_11(cx: &Context) -> Result<String, String> {
    let t = Instant::now();
    let (narrow, at_narrow) = sup(&cx.prefix, 1 << 10, 1 << 15);
    let (wide, at_wide) = sup(&cx.prefix, 1 << 10, LIMIT);
    let scan = scan_members(LIMIT);
    let lib = density_profile(&scan, 1 << 10, LIMIT);
    if lib.argmax != at_wide || (lib.sup - wide).abs() > 1e-12 {
        return Err(format!(
            "library profile {} at {} vs oracle {wide} at {at_wide}",
            lib.sup, lib.argmax
        ));
    }
    for (limit, value, at) in [(1u64 << 15, narrow, at_narrow), (LIMIT, wide, at_wide)] {
        let g = golden::density_for(1 << 10, limit).ok_or("missing golden density")?;
        if value > g.sup() * (1.0 + 1e-12) || at != g.argmax {
            return Err(format!(
                "regression at limit {limit}: {value} at {at}, golden {} at {}",
                g.sup(),
                g.argmax
            ));
        }
    }
    let ratio = wide / narrow;
    let line = format!("D[2^10,2^15] = {narrow:.6} at {at_narrow}, D[2^10,2^20] = {wide:.6} at {at_wide}, ratio {ratio:.4} ({:?})", t.elapsed());
    if ratio <= 1.5 {
        Ok(line)
    } else {
        Err(format!("{line} > 1.5"))
    }
}

fn criterion_12(_: &Context) -> Result<String, String> {
    let mut cases = 0u64;
    for k in 1..=10u32 {
        for t in 1..=63u64 {
            for i in 0..(1u64 << k) {
                cases += 1;
                let lhs = common::legendre((t << k) + i) % 2;
                let rhs = (common::legendre(i) + common::legendre(t << k)) % 2;
                if lhs != rhs {
                    return Err(format!("gamma additivity fails at k={k} t={t} i={i}"));
                }
            }
        }
    }
    let beta = |n: u64| {
        let (a3, a5) = common::alphas(n);
        let p = if a3 % 2 == 1 { 3 } else { 1 };
        if a5 % 2 == 1 {
            8 - p
        } else {
            p
        }
    };
    for s in 2..=12u32 {
        for t in (1..=31u64).step_by(2) {
            let q = 1u64 << (s - 2);
            for j in 0..4 {
                let ratios: BTreeSet<u64> = (j * q..(j + 1) * q)
                    .map(|i| beta((t << s) + i) * beta(i) % 8)
                    .collect();
                cases += q;
                if ratios.len() != 1 || ratios.iter().any(|r| r % 2 == 0) {
                    return Err(format!(
                        "quadrant constant fails at s={s} t={t} j={}: {ratios:?}",
                        j + 1
                    ));
                }
            }
        }
    }
    // the library sweeps agree
    if !lemma_gamma_additivity(10, 63).holds() {
        return Err("library gamma sweep reports violations".into());
    }
    for s in 2..=12 {
        if !lemma_quadrant_constants(s, 31).0.holds() {
            return Err(format!(
                "library quadrant sweep reports violations at s={s}"
            ));
        }
    }
    Ok(format!("{cases} cases, zero violations"))
}

fn criterion_13(cx: &Context) -> Result<String, String> {
    let projected =
        minimize(&determinize(&project(&make_add(), "y").unwrap(), DEFAULT_STATE_CAP).unwrap());
    if !is_language_equal(&projected, &make_less_equal()).unwrap() {
        return Err("E y (x + y = z) differs from x <= z".into());
    }
    let empty = PredicateRegistry::new();
    let mut c = Compiler::new(&empty);
    let pairs = [
        ("E y (x = y + y)", "~(A y (x != y + y))"),
        (
            "A y ((y < x) => (y + 1 <= x))",
            "~(E y ((y < x) & ~(y + 1 <= x)))",
        ),
        (
            "E y E w (x = y + w + 3) & (w < y)",
            "~(A y A w ~((x = y + w + 3) & (w < y)))",
        ),
    ];
    for (a, b) in pairs {
        let da = c.compile(&parse(a).unwrap()).unwrap();
        let db = c.compile(&parse(b).unwrap()).unwrap();
        if !is_language_equal(&da, &db).unwrap() {
            return Err(format!("duality fails: {a} vs {b}"));
        }
    }
    let reg = seed_registry();
    let gaps = gaps_dfa(&reg).unwrap();
    let f = parse(GAPS_QUERY).unwrap();
    let members = &cx.members;
    let preds = |name: &str, args: &[u64]| (name == "factauto").then(|| members[args[0] as usize]);
    let mut env = HashMap::new();
    let mut disagreements = BTreeMap::new();
    for n in 0..1024u64 {
        for r in 0..1024u64 {
            env.insert("n".to_string(), n);
            env.insert("r".to_string(), r);
            let brute = evaluate(&f, &mut env, &preds, 1024).unwrap();
            if brute != gaps.accepts_u64(&[n, r]).unwrap() {
                disagreements.insert(n, r);
            }
        }
    }
    if !disagreements.is_empty() {
        return Err(format!(
            "compiler vs interpreter at {:?}",
            disagreements.iter().take(5).collect::<Vec<_>>()
        ));
    }
    Ok("projection, duality, and 2^20 gaps assignments agree".into())
}

fn main() {
    let t = Instant::now();
    let members = common::non_sum_table(LIMIT * 2);
    let prefix = common::prefix_counts(&members);
    let reg = seed_registry();
    let cx = Context {
        members,
        prefix,
        rep: sbar_representation(&reg).expect("counting representation"),
    };
    let criteria: [(&str, Criterion); 13] = [
        ("membership", criterion_1),
        ("odd part of n! mod 8", criterion_2),
        ("factauto state count", criterion_3),
        ("gap-length sets", criterion_4),
        ("published values", criterion_5),
        ("closed forms", criterion_6),
        ("constants", criterion_7),
        ("h recurrence", criterion_8),
        ("spectral certificate", criterion_9),
        ("scaling identity", criterion_10),
        ("density", criterion_11),
        ("lemma sweeps", criterion_12),
        ("engine properties", criterion_13),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = check(&cx);
        let elapsed = started.elapsed();
        match outcome {
            Ok(msg) => println!("PASS criterion {:>2} {name}: {msg} [{elapsed:.2?}]", i + 1),
            Err(msg) => {
                println!("FAIL criterion {:>2} {name}: {msg} [{elapsed:.2?}]", i + 1);
                failed.push(i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of 13 passed in {:.2?}",
        13 - failed.len(),
        t.elapsed()
    );
    if !failed.is_empty() {
        println!("failing criteria: {failed:?}");
        std::process::exit(1);
    }
}
