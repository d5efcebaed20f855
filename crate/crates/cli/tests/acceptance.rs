//! One PASS/FAIL line per acceptance criterion. Run with
//! `cargo test -p milnor_cli --test acceptance -- --nocapture --test-threads=1`
//! to see the lines in order.

use std::collections::{BTreeSet, HashMap};
use std::process::Command;
use std::time::{Duration, Instant};

use milnor_cli::commands::verify_heisenberg;
use milnor_cli::report::TableReport;
use milnor_symbols::arith::{is_prime_u64, reduce_i64};
use milnor_symbols::eisenstein::cubic_residue_symbol;
use milnor_symbols::form_solver::{enumerate_cubic, enumerate_redei, solve_cubic, NormCheck};
use milnor_symbols::kummer_cover::QOmega;
use milnor_symbols::magnus::{expand, normal_form_deg2, zassenhaus_degree, FreeWord, MultiIndex};
use milnor_symbols::residue_symbols::legendre;
use milnor_symbols::triple_symbols::redei_symbol;
use milnor_symbols::{CubicData, EisensteinInt, EisensteinPrime, RedeiData, ZassenhausDegree};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TABLE_BUDGET: Duration = Duration::from_secs(5);
const SOLVE_BUDGET: Duration = Duration::from_secs(1);
const REDEI_BUDGET: Duration = Duration::from_secs(30);
const MAGNUS_BUDGET: Duration = Duration::from_secs(60);
const HEISENBERG_BUDGET: Duration = Duration::from_secs(60);

fn verdict(name: &str, ok: bool, detail: String) {
    println!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "{name}: {detail}");
}

fn prime(n: i64) -> EisensteinPrime {
    EisensteinPrime::primary(&EisensteinInt::from_int(n)).unwrap()
}

#[test]
fn paper_table() {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_milnor")).args(["--format", "json", "paper-table"]).output().unwrap();
    let elapsed = start.elapsed();
    let report: TableReport = serde_json::from_slice(&out.stdout).unwrap();

    let expected = [("-71", 1u8, 2u8), ("-89", 2, 1), ("-107", 1, 2), ("-179", 2, 1), ("-197", 2, 1)];
    let got: Vec<(String, u8, u8)> =
        report.rows.iter().map(|r| (r.pi3.clone(), r.mu3_sigma_123, r.mu3_123)).collect();
    let want: Vec<(String, u8, u8)> = expected.iter().map(|&(p, s, m)| (p.to_string(), s, m)).collect();
    let ok = out.status.success()
        && (report.pi1.as_str(), report.pi2.as_str()) == ("-17", "-53")
        && got == want
        && elapsed < TABLE_BUDGET;
    verdict("paper_table", ok, format!("rows {got:?}, {elapsed:?}"));
}

#[test]
fn solution_check() {
    // the identity itself, in plain integers
    let identity = 8i64.pow(3) + (-17) * 3i64.pow(3) == (-53) * (-1i64).pow(3);
    let (pi1, pi2) = (prime(-17), prime(-53));
    let planted = CubicData {
        pi1: pi1.clone(),
        pi2: pi2.clone(),
        x: EisensteinInt::from_int(8),
        y: EisensteinInt::from_int(3),
        z: EisensteinInt::from_int(-1),
        norm_check: NormCheck::ContentApproximation,
    };
    let admits = planted.verify().is_ok();
    let listed = enumerate_cubic(&pi1, &pi2, 10, 8).unwrap().iter().any(|s| {
        let neg = |v: &EisensteinInt| -v.clone();
        (s.x == planted.x && s.y == planted.y && s.z == planted.z)
            || (s.x == neg(&planted.x) && s.y == neg(&planted.y) && s.z == neg(&planted.z))
    });

    let start = Instant::now();
    let found = solve_cubic(&pi1, &pi2, 10);
    let elapsed = start.elapsed();
    let valid = found.as_ref().map(|s| s.verify().is_ok()).unwrap_or(false);
    let ok = identity && admits && listed && valid && elapsed < SOLVE_BUDGET;
    let shown = found.map(|s| format!("({}, {}, {})", s.x, s.y, s.z)).unwrap_or_else(|e| e.to_string());
    verdict("solution_check", ok, format!("(8,3,-1) admitted, solver found {shown} in {elapsed:?}"));
}

#[test]
fn pairwise_symbols() {
    // all seven are inert primes of Z[w]; admissibility forces every pairing
    let set = [-17i64, -53, -71, -89, -107, -179, -197];
    let mut bad = Vec::new();
    let mut checked = 0;
    for &a in &set {
        for &b in &set {
            if a == b {
                continue;
            }
            let v = cubic_residue_symbol(&EisensteinInt::from_int(a), &prime(b)).unwrap();
            checked += 1;
            if v.exponent() != 0 {
                bad.push((a, b, v.exponent()));
            }
        }
    }
    verdict("pairwise_symbols", bad.is_empty(), format!("{checked} ordered pairs, nonzero: {bad:?}"));
}

fn is_square_oracle(a: u64, p: u64) -> bool {
    (1..p).any(|x| x * x % p == a % p)
}

fn admissible_for(s: &RedeiData, p3: u64) -> bool {
    [s.x, s.y, s.z].iter().all(|&v| reduce_i64(v, p3) != 0)
}

fn abs_key(s: &RedeiData) -> (u64, u64, u64) {
    (s.x.unsigned_abs(), s.y.unsigned_abs(), s.z.unsigned_abs())
}

/// Solutions with pairwise distinct absolute values, up to `k` of them.
fn distinct_solutions(p1: u64, p2: u64, k: usize) -> Vec<RedeiData> {
    let mut seen = BTreeSet::new();
    enumerate_redei(p1, p2, 400, 16 * k)
        .unwrap()
        .into_iter()
        .filter(|s| seen.insert(abs_key(s)))
        .take(k)
        .collect()
}

#[test]
fn redei_well_definedness() {
    let start = Instant::now();
    let small: Vec<u64> = (5..200).filter(|&p| p % 4 == 1 && is_prime_u64(p)).collect();
    let pairs: Vec<(u64, u64)> = small
        .iter()
        .flat_map(|&a| small.iter().map(move |&b| (a, b)))
        .filter(|&(a, b)| a < b && legendre(a as i64, b).unwrap().is_one())
        .take(6)
        .collect();
    let large: Vec<u64> = (500..100_000).filter(|&p| p % 4 == 1 && is_prime_u64(p)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x7265_6465);

    let mut problems = Vec::new();
    let mut triples = 0;
    let mut evaluations = 0;
    let mut values = [0usize; 2];
    let mut check = |p1: u64, p2: u64, p3: u64, sols: &[RedeiData], problems: &mut Vec<String>| {
        let usable: Vec<&RedeiData> = sols.iter().filter(|s| admissible_for(s, p3)).collect();
        if usable.len() < 3 {
            return false;
        }
        let mut seen = BTreeSet::new();
        for s in &usable {
            let r = redei_symbol(p1, p2, p3, Some(s), 400).unwrap();
            evaluations += 1;
            if r.witnesses.len() != 2 || r.witnesses[0].exponent != r.witnesses[1].exponent {
                problems.push(format!("witnesses disagree at {p1},{p2},{p3} for {s:?}"));
            }
            seen.insert(r.value.exponent());
        }
        if seen.len() != 1 {
            problems.push(format!("solutions disagree at {p1},{p2},{p3}: {seen:?}"));
        }
        values[*seen.iter().next().unwrap() as usize] += 1;
        true
    };

    for &(p1, p2) in &pairs {
        let sols = distinct_solutions(p1, p2, 4);
        let mut taken = 0;
        for _ in 0..20_000 {
            if taken == 4 {
                break;
            }
            let p3 = *large.choose(&mut rng).unwrap();
            if legendre(p1 as i64, p3).unwrap().is_one()
                && legendre(p2 as i64, p3).unwrap().is_one()
                && check(p1, p2, p3, &sols, &mut problems)
            {
                taken += 1;
                triples += 1;
            }
        }
    }

    // every admissible third prime below 500 against the squares oracle
    let mut oracle_cases = 0;
    for &(p1, p2) in &pairs[..3] {
        let sol = distinct_solutions(p1, p2, 1).remove(0);
        for p3 in (5..500).filter(|&p| p % 4 == 1 && is_prime_u64(p) && p != p1 && p != p2) {
            let Ok(r) = redei_symbol(p1, p2, p3, Some(&sol), 400) else { continue };
            oracle_cases += 1;
            for w in &r.witnesses {
                let alpha = reduce_i64(sol.x + w.root.u as i64 * sol.y, p3);
                let want = u8::from(!is_square_oracle(alpha, p3));
                if w.exponent != want || r.value.exponent() != want {
                    problems.push(format!("oracle disagrees at {p1},{p2},{p3}"));
                }
            }
        }
    }

    let elapsed = start.elapsed();
    let ok = problems.is_empty() && triples >= 20 && oracle_cases > 0 && elapsed < REDEI_BUDGET;
    verdict(
        "redei_well_definedness",
        ok,
        format!(
            "{triples} triples with p3 < 1e5 ({evaluations} evaluations, +1/-1 = {}/{}), \
             {oracle_cases} oracle cases below 500, {elapsed:?}, problems {problems:?}",
            values[0], values[1]
        ),
    );
}

#[test]
fn legendre_oracle() {
    let odd: Vec<u64> = (3..200).filter(|&p| is_prime_u64(p)).collect();
    let mut mismatches = Vec::new();
    let mut cases = 0;
    for &p in &odd {
        for a in 0..p {
            cases += 1;
            match legendre(a as i64, p) {
                Err(_) if a == 0 => {}
                Ok(v) if a != 0 && (v.exponent() == 0) == is_square_oracle(a, p) => {}
                other => mismatches.push(format!("({a}/{p}) -> {other:?}")),
            }
        }
    }
    let mut pairs = 0;
    for &p in odd.iter().filter(|&&p| p < 100) {
        for &q in odd.iter().filter(|&&q| q < 100 && q != p) {
            pairs += 1;
            let lhs = legendre(p as i64, q).unwrap().exponent() ^ legendre(q as i64, p).unwrap().exponent();
            let rhs = u8::from((p % 4 == 3) && (q % 4 == 3));
            if lhs != rhs {
                mismatches.push(format!("reciprocity fails for {p}, {q}"));
            }
        }
    }
    verdict(
        "legendre_oracle",
        mismatches.is_empty(),
        format!("{cases} residues, {pairs} reciprocity pairs, mismatches {mismatches:?}"),
    );
}

/// Dense per-degree arrays; `X_{i1}..X_{in}` sits at base-`r` position
/// `(i1-1)..(in-1)`.
struct Dense {
    l: u32,
    r: usize,
    d: usize,
    deg: Vec<Vec<u32>>,
}

impl Dense {
    fn one(l: u32, r: usize, d: usize) -> Self {
        let mut deg: Vec<Vec<u32>> = (0..=d).map(|n| vec![0; r.pow(n as u32)]).collect();
        deg[0][0] = 1;
        Dense { l, r, d, deg }
    }

    fn mul(&self, o: &Dense) -> Dense {
        let mut out = Dense::one(self.l, self.r, self.d);
        out.deg[0][0] = 0;
        for i in 0..=self.d {
            for j in 0..=self.d - i {
                let width = self.r.pow(j as u32);
                for (a, &x) in self.deg[i].iter().enumerate().filter(|(_, &x)| x != 0) {
                    for (b, &y) in o.deg[j].iter().enumerate() {
                        let slot = &mut out.deg[i + j][a * width + b];
                        *slot = (*slot + x * y) % self.l;
                    }
                }
            }
        }
        out
    }

    fn of_word(w: &FreeWord, l: u32, r: usize, d: usize) -> Dense {
        let mut s = Dense::one(l, r, d);
        for &(i, e) in w.letters() {
            // 1 + X_i, or its inverse 1 - X_i + X_i^2 - ...
            let mut g = Dense::one(l, r, d);
            let top = if e < 0 { d } else { 1 };
            for k in 1..=top {
                let idx = (0..k).fold(0, |acc, _| acc * r + (i - 1));
                g.deg[k][idx] = if e < 0 && k % 2 == 1 { l - 1 } else { 1 };
            }
            for _ in 0..e.unsigned_abs() {
                s = s.mul(&g);
            }
        }
        s
    }
}

fn random_word(rng: &mut ChaCha8Rng, r: usize, max_len: usize, max_exp: i64) -> FreeWord {
    let len = rng.gen_range(0..=max_len);
    let letters: Vec<(usize, i64)> =
        (0..len).map(|_| (rng.gen_range(1..=r), rng.gen_range(-max_exp..=max_exp))).collect();
    FreeWord::new(r, letters).unwrap()
}

/// An element with a proven lower bound on its filtration degree.
fn member(rng: &mut ChaCha8Rng, l: u32, r: usize, depth: u32) -> (FreeWord, usize) {
    if depth == 0 || rng.gen_bool(0.3) {
        let g = FreeWord::generator(r, rng.gen_range(1..=r)).unwrap();
        return (if rng.gen_bool(0.5) { g.inverse() } else { g }, 1);
    }
    let (u, i) = member(rng, l, r, depth - 1);
    match rng.gen_range(0..3) {
        0 => {
            let (v, j) = member(rng, l, r, depth - 1);
            (FreeWord::commutator(&u, &v), i + j)
        }
        1 => (u.pow(l as i64), l as usize * i),
        _ => {
            let (v, j) = member(rng, l, r, depth - 1);
            (u.mul(&v), i.min(j))
        }
    }
}

fn bounded_member(rng: &mut ChaCha8Rng, l: u32, r: usize, cap: usize) -> (FreeWord, usize) {
    loop {
        let m = member(rng, l, r, 3);
        if m.1 <= cap && m.0.letters().len() <= 64 {
            return m;
        }
    }
}

#[test]
fn magnus_suite() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x6d61_676e);
    let mut problems = Vec::new();

    for _ in 0..1000 {
        let l = *[2u32, 3].choose(&mut rng).unwrap();
        let r = rng.gen_range(1..=4);
        let d = rng.gen_range(1..=4);
        let u = random_word(&mut rng, r, 8, 4);
        let v = random_word(&mut rng, r, 8, 4);
        let eu = expand(&u, l, r, d).unwrap();
        let ev = expand(&v, l, r, d).unwrap();
        if expand(&u.mul(&v), l, r, d).unwrap() != eu.mul(&ev).unwrap() {
            problems.push(format!("homomorphism: {u} * {v}, l = {l}, d = {d}"));
        }
        let ei = expand(&u.inverse(), l, r, d).unwrap();
        if !eu.mul(&ei).unwrap().is_one() || !ei.mul(&eu).unwrap().is_one() {
            problems.push(format!("inverse: {u}, l = {l}, d = {d}"));
        }
    }

    for _ in 0..1000 {
        let l = *[2u32, 3].choose(&mut rng).unwrap();
        let r = rng.gen_range(1..=4);
        let d = rng.gen_range(1..=4);
        let w = random_word(&mut rng, r, 8, 3);
        let sparse = expand(&w, l, r, d).unwrap();
        let dense = Dense::of_word(&w, l, r, d);
        for n in 0..=d {
            for (pos, idx) in MultiIndex::all_of_length(r, n).iter().enumerate() {
                if sparse.coefficient(idx) as u32 != dense.deg[n][pos] {
                    problems.push(format!("dense oracle: {w} at {idx}, l = {l}"));
                }
            }
        }
    }

    for l in [2u32, 3] {
        for i in 1..=4 {
            let x = FreeWord::generator(4, i).unwrap();
            if zassenhaus_degree(&x.pow(l as i64), l, 6).unwrap() != ZassenhausDegree::Exact(l as usize) {
                problems.push(format!("degree x{i}^{l}"));
            }
            for j in (1..=4).filter(|&j| j != i) {
                let c = FreeWord::commutator(&x, &FreeWord::generator(4, j).unwrap());
                if zassenhaus_degree(&c, l, 6).unwrap() != ZassenhausDegree::Exact(2) {
                    problems.push(format!("degree [x{i},x{j}], l = {l}"));
                }
            }
        }
    }

    let d = 6;
    for case in 0..100 {
        let l = if case % 2 == 0 { 2 } else { 3 };
        let (u, i) = bounded_member(&mut rng, l, 3, 4);
        let (v, j) = bounded_member(&mut rng, l, 3, 4);
        let deg = |w: &FreeWord| zassenhaus_degree(w, l, d).unwrap();
        if !deg(&u).at_least(i)
            || !deg(&FreeWord::commutator(&u, &v)).at_least((i + j).min(d + 1))
            || !deg(&u.pow(l as i64)).at_least((l as usize * i).min(d + 1))
        {
            problems.push(format!("filtration: u = {u} ({i}), v = {v} ({j}), l = {l}"));
        }
    }

    let elapsed = start.elapsed();
    let ok = problems.is_empty() && elapsed < MAGNUS_BUDGET;
    verdict("magnus_suite", ok, format!("{elapsed:?}, problems {:?}", &problems[..problems.len().min(5)]));
}

#[test]
fn heisenberg_covering() {
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut ok = true;
    for (l, constants) in [(2u32, &["1", "2", "-7", "1/2"][..]), (3, &["1", "2", "-7", "1/2", "2+w"][..])] {
        for (k, c) in constants.iter().enumerate() {
            let c: QOmega = c.parse().unwrap();
            let report = verify_heisenberg(l, c, 100, 0x6865_6973 + k as u64).unwrap();
            ok &= report.passed && report.kernel_trials == 100;
            lines.push(format!("l={l} c={}: {}", report.c, if report.passed { "ok" } else { "failed" }));
        }
    }
    let elapsed = start.elapsed();
    ok &= elapsed < HEISENBERG_BUDGET;
    verdict("heisenberg_covering", ok, format!("{} in {elapsed:?}", lines.join(", ")));
}

/// A random element of F(3): commutators of weight 3, `l`-th powers of
/// commutators, `l^2`-th powers, all possibly conjugated.
fn f3_noise(rng: &mut ChaCha8Rng, l: u32) -> FreeWord {
    let g = |rng: &mut ChaCha8Rng| FreeWord::generator(3, rng.gen_range(1..=3)).unwrap();
    let core = match rng.gen_range(0..4) {
        0 => {
            let (a, b, c) = (g(rng), g(rng), g(rng));
            FreeWord::commutator(&FreeWord::commutator(&a, &b), &c)
        }
        1 => {
            let (a, b) = (g(rng), g(rng));
            FreeWord::commutator(&a.pow(l as i64), &b)
        }
        2 => g(rng).pow((l * l) as i64),
        _ => {
            let (a, b) = (g(rng), g(rng));
            FreeWord::commutator(&a, &b).pow(l as i64)
        }
    };
    let conj = random_word(rng, 3, 3, 2);
    conj.mul(&core).mul(&conj.inverse())
}

#[test]
fn normal_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6e66_3233);
    let mut problems = Vec::new();
    let pairs = [(1usize, 2usize), (1, 3), (2, 3)];
    for trial in 0..1000 {
        let l: u32 = if trial % 2 == 0 { 2 } else { 3 };
        let li = l as i64;
        let mut factors: Vec<FreeWord> = Vec::new();
        let mut want: HashMap<(usize, usize), u8> = HashMap::new();

        if l == 2 {
            for i in 1..=3 {
                let e = rng.gen_range(-3i64..=3);
                factors.push(FreeWord::generator(3, i).unwrap().pow(2 * e));
                want.insert((i, i), e.rem_euclid(2) as u8);
            }
        }
        for &(i, j) in &pairs {
            let e = rng.gen_range(-4i64..=4);
            let (xi, xj) = (FreeWord::generator(3, i).unwrap(), FreeWord::generator(3, j).unwrap());
            // [x_j, x_i] is [x_i, x_j]^-1 modulo F(3)
            let c = if rng.gen_bool(0.5) {
                FreeWord::commutator(&xi, &xj).pow(e)
            } else {
                FreeWord::commutator(&xj, &xi).pow(-e)
            };
            factors.push(c);
            want.insert((i, j), e.rem_euclid(li) as u8);
        }
        for _ in 0..rng.gen_range(1..=3) {
            factors.push(f3_noise(&mut rng, l));
        }
        factors.shuffle(&mut rng);
        let w = factors.iter().fold(FreeWord::identity(3), |acc, f| acc.mul(f));

        let nf = normal_form_deg2(&w, l, 3).unwrap();
        for i in 1..=3 {
            for j in i..=3 {
                let expected = want.get(&(i, j)).copied().unwrap_or(0);
                if nf.exponent(i, j).unwrap() != expected {
                    problems.push(format!("l = {l}, {w}: e{i}{j} = {} not {expected}", nf.exponent(i, j).unwrap()));
                }
            }
        }
    }
    verdict(
        "normal_forms",
        problems.is_empty(),
        format!("1000 planted products, problems {:?}", &problems[..problems.len().min(5)]),
    );
}
