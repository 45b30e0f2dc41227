//! Acceptance run: every check is an exact integer comparison.
//! Prints one line per criterion and exits non-zero if any fails.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use sjc::analysis::{
    c2_orbits, c3_orbits, c8_orbits, distance_witnesses_nd, min_distance, sit_verify, Strategy,
    Verdict,
};
use sjc::codes::{enumerate_code, BuildOptions, Code, CodeParams, Family};
use sjc::forms::{bilinear, phi0, q_size, Eps, FormIndex, SympSpace};
use sjc::gf2::{enumerate_subspaces, BitVector, Subspace};
use sjc::group::{closure_order, gl_order, sp_order};
use sjc::analysis::{expected_stabiliser_order, stabiliser_gens};

type Check = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn pow2(e: i64) -> i64 {
    1i64 << e
}

fn sgn(e: Eps) -> i64 {
    match e {
        Eps::Plus => 1,
        Eps::Minus => -1,
    }
}

fn binom(n: u64, k: u64) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn gauss4(n: u32, k: u32) -> u128 {
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= 4u128.pow(n - i) - 1;
        den *= 4u128.pow(i + 1) - 1;
    }
    num / den
}

/// Singular vectors of phi_c, by brute force.
fn singular_count(n: usize, c: u16) -> usize {
    (0u16..(1 << (2 * n)))
        .filter(|&x| !(phi0(BitVector(x)) ^ bilinear(BitVector(x), BitVector(c))))
        .count()
}

fn closed_k(p: &CodeParams) -> i64 {
    let (n, d, e) = (p.n as i64, p.d as i64, sgn(p.eps));
    match p.family {
        Family::Nd => {
            let ep = sgn(p.epsprime.unwrap());
            pow2(n - 2) * (pow2(d) + ep) * (pow2(n - d) + e * ep)
        }
        Family::Ti if p.delta == Some(0) => pow2(n - 1) * (pow2(n - d) + e),
        Family::Ti => pow2(2 * n - d - 1) * (pow2(d) - 1),
    }
}

fn closed_size(p: &CodeParams) -> u128 {
    let (n, d) = (p.n as u32, p.d as u32);
    match p.family {
        Family::Nd => {
            let s = 4u128.pow(d * (n - d)) * gauss4(n, d);
            if 2 * d == n && p.eps == Eps::Plus {
                s / 2
            } else {
                s
            }
        }
        Family::Ti => {
            let num: u128 = (1..=d).map(|i| (1u128 << (2 * (n - d + i))) - 1).product();
            let den: u128 = (1..=d).map(|i| (1u128 << i) - 1).product();
            num / den
        }
    }
}

fn closed_ti_distance(p: &CodeParams) -> i64 {
    let (n, d) = (p.n as i64, p.d as i64);
    match p.eps {
        Eps::Plus if d < n => pow2(2 * n - d - 2),
        Eps::Plus => pow2(n - 1),
        Eps::Minus => pow2(n - 2) * (pow2(n - d) - 1),
    }
}

fn closed_nd_distance(p: &CodeParams) -> i64 {
    let (n, d) = (p.n as i64, p.d as i64);
    if p.eps == Eps::Plus && (n - 2 * d).abs() == 1 {
        pow2(2 * n - 4) - pow2(n - 3)
    } else {
        pow2(2 * n - 4)
    }
}

fn defining_subspaces(family: Family, n: usize, d: usize) -> Vec<Subspace> {
    let sp = SympSpace::new(n).unwrap();
    match family {
        Family::Nd => enumerate_subspaces(2 * n, 2 * d)
            .unwrap()
            .filter(|u| sp.is_nondegenerate(u))
            .collect(),
        Family::Ti => enumerate_subspaces(2 * n, d)
            .unwrap()
            .filter(|u| sp.is_totally_isotropic(u))
            .collect(),
    }
}

/// Codeword positions by the definition, independent of the library's fast paths.
fn oracle_positions(p: &CodeParams, index: &FormIndex, u: &Subspace) -> Vec<usize> {
    let elems = u.elements();
    let dim = u.dim() as i64;
    index
        .forms()
        .enumerate()
        .filter(|(_, phi)| {
            let sing = elems.iter().filter(|&&x| !phi.eval(x)).count() as i64;
            match p.family {
                Family::Nd => {
                    let half = dim / 2;
                    sing == pow2(dim - 1) + sgn(p.epsprime.unwrap()) * pow2(half - 1)
                }
                Family::Ti => sing == pow2(dim - p.delta.unwrap() as i64),
            }
        })
        .map(|(i, _)| i)
        .collect()
}

struct Ctx {
    codes: BTreeMap<String, (CodeParams, Code)>,
}

impl Ctx {
    fn new(nmax: usize) -> Self {
        let codes = CodeParams::all_valid(nmax)
            .into_iter()
            .map(|p| {
                let c = enumerate_code(&p, BuildOptions::default()).expect("build");
                (p.to_string(), (p, c))
            })
            .collect();
        Ctx { codes }
    }

    fn iter(&self, nmax: usize) -> impl Iterator<Item = &(CodeParams, Code)> {
        self.codes.values().filter(move |(p, _)| p.n <= nmax)
    }

    fn get(&self, p: &CodeParams) -> &Code {
        &self.codes[&p.to_string()].1
    }
}

fn criterion_1() -> Check {
    for n in 2..=5usize {
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for c in 0u16..(1 << (2 * n)) {
            *counts.entry(singular_count(n, c)).or_default() += 1;
        }
        let n_i = n as i64;
        for eps in Eps::both() {
            let sing = (pow2(2 * n_i - 1) + sgn(eps) * pow2(n_i - 1)) as usize;
            let expected = (pow2(n_i - 1) * (pow2(n_i) + sgn(eps))) as usize;
            let got = counts.get(&sing).copied().unwrap_or(0);
            ensure(got == expected, || format!("n={n} {eps}: {got} forms with {sing} singular vectors, want {expected}"))?;
            ensure(q_size(n, eps) == expected, || format!("q_size({n},{eps})"))?;
            let index = FormIndex::new(n, eps).map_err(|e| e.to_string())?;
            ensure(index.len() == expected, || format!("FormIndex({n},{eps}) has {}", index.len()))?;
            if n <= 4 {
                for phi in index.forms() {
                    let s = singular_count(n, phi.c.0);
                    ensure(s == sing, || format!("form {:?} has {s} singular vectors", phi))?;
                }
            }
        }
        ensure(counts.len() == 2, || format!("n={n}: more than two singular counts"))?;
    }
    Ok(())
}

fn criterion_2(ctx: &Ctx) -> Check {
    for (p, code) in ctx.iter(4) {
        let k = closed_k(p) as u64;
        for w in &code.words {
            ensure(w.popcount() == k, || format!("{p}: codeword of size {} want {k}", w.popcount()))?;
        }
        for w in [code.words.first(), code.words.last()].into_iter().flatten() {
            let want = oracle_positions(p, &code.index, &w.u);
            ensure(w.positions() == want, || format!("{p}: codeword bits differ from the definition"))?;
        }
    }
    Ok(())
}

fn criterion_3(ctx: &Ctx) -> Check {
    for (p, code) in ctx.iter(4) {
        if p.n == 4 && p.d > 2 {
            continue;
        }
        let want = closed_size(p);
        ensure(code.len() as u128 == want, || format!("{p}: {} codewords want {want}", code.len()))?;
        if p.n <= 3 {
            let subspaces = defining_subspaces(p.family, p.n, p.d).len() as u128;
            let halved = p.family == Family::Nd && 2 * p.d == p.n && p.eps == Eps::Plus;
            let direct = if halved { subspaces / 2 } else { subspaces };
            ensure(direct == want, || format!("{p}: {subspaces} defining subspaces"))?;
        }
    }
    Ok(())
}

fn check_distances(ctx: &Ctx, family: Family, closed: fn(&CodeParams) -> i64) -> Check {
    for (p, code) in ctx.iter(4).filter(|(p, _)| p.family == family) {
        let want = closed(p) as u64;
        let r = min_distance(code, Strategy::FixedFirst).map_err(|e| e.to_string())?;
        ensure(r.min_distance == want, || format!("{p}: min distance {} want {want}", r.min_distance))?;
        ensure(r.agrees, || format!("{p}: report disagrees"))?;
        if code.len() <= 500 {
            let x = min_distance(code, Strategy::Exhaustive).map_err(|e| e.to_string())?;
            ensure(x.min_distance == want, || format!("{p}: exhaustive gives {}", x.min_distance))?;
        }
    }
    Ok(())
}

fn criterion_6(ctx: &Ctx) -> Check {
    for (p, code) in ctx.iter(4).filter(|(p, _)| p.family == Family::Nd) {
        let ws = distance_witnesses_nd(p.n, p.d, p.eps, p.epsprime.unwrap()).map_err(|e| e.to_string())?;
        let mind = closed_nd_distance(p) as u64;
        for w in &ws {
            ensure(w.matches, || format!("{p}: witness {} distance {} want {}", w.kind, w.distance, w.expected))?;
            ensure(w.distance >= mind, || format!("{p}: witness {} below the minimum", w.kind))?;
        }
        let a_needed = p.n >= 3;
        ensure(ws.iter().any(|w| w.kind == "a") == a_needed, || format!("{p}: witness (a) presence"))?;
        let _ = code;
    }
    Ok(())
}

fn criterion_7(ctx: &Ctx) -> Check {
    for (p, code) in ctx.iter(3) {
        let r = sit_verify(code, false).map_err(|e| e.to_string())?;
        let k = closed_k(p) as usize;
        let q = q_size(p.n, p.eps);
        ensure(r.status == Verdict::Pass, || format!("{p}: status {:?}", r.status))?;
        ensure(r.two_orbit_check, || format!("{p}: two-orbit check failed"))?;
        ensure(
            r.pair_transitive && r.pair_orbit_size == k * (q - k),
            || format!("{p}: pair orbit {} want {}", r.pair_orbit_size, k * (q - k)),
        )?;
    }
    Ok(())
}

fn criterion_8() -> Check {
    for n in 2..=3usize {
        for family in [Family::Nd, Family::Ti] {
            let dmax = if family == Family::Nd { n - 1 } else { n };
            for d in 1..=dmax {
                let p = match family {
                    Family::Nd => CodeParams::nd(n, d, Eps::Minus, Eps::Plus),
                    Family::Ti => CodeParams::ti(n, d, Eps::Minus, 0),
                };
                let formula = match family {
                    Family::Nd => sp_order(d) * sp_order(n - d),
                    Family::Ti => (1u128 << (d * (d + 1) / 2 + 2 * d * (n - d))) * gl_order(d) * sp_order(n - d),
                };
                let subspaces = defining_subspaces(family, n, d);
                // orbit-stabiliser, the group being transitive on these subspaces
                let via_count = sp_order(n) / subspaces.len() as u128;
                ensure(formula == via_count, || format!("{family} n={n} d={d}: {formula} vs |Sp|/#U = {via_count}"))?;
                ensure(expected_stabiliser_order(&p) == formula, || format!("{family} n={n} d={d}: library order"))?;
                for u in &subspaces {
                    let gens = stabiliser_gens(&p, u).map_err(|e| e.to_string())?;
                    ensure(gens.gens.iter().all(|g| u.image(&g.to_bitmatrix()) == *u), || format!("{family} n={n} d={d}: generator moves U"))?;
                    let order = closure_order(&gens.gens, Some(formula as usize + 1)).map(|o| o as u128);
                    ensure(order == Some(formula), || format!("{family} n={n} d={d} U={:?}: closure {:?} want {formula}", u.row_words(), order))?;
                }
            }
        }
    }
    Ok(())
}

fn criterion_9() -> Check {
    for n in 2..=4usize {
        for eps in Eps::both() {
            for t in (2..=n).filter(|t| n % t == 0) {
                let r = c2_orbits(n, t, eps).map_err(|e| e.to_string())?;
                let total: usize = r.parts.iter().map(|x| x.size).sum();
                ensure(total == q_size(n, eps), || format!("c2 n={n} t={t} {eps}: parts cover {total}"))?;
                for part in &r.parts {
                    let j = part.minus_count;
                    let (qm, qp) = (q_size(n / t, Eps::Minus) as u64, q_size(n / t, Eps::Plus) as u64);
                    let allowed = if j % 2 == 0 { eps == Eps::Plus } else { eps == Eps::Minus };
                    let want = if allowed {
                        binom(t as u64, j as u64) as u64 * qm.pow(j as u32) * qp.pow((t - j) as u32)
                    } else {
                        0
                    };
                    ensure(part.size as u64 == want, || format!("c2 n={n} t={t} {eps} j={j}: {} want {want}", part.size))?;
                }
                ensure(r.nonempty_pattern && r.orbits_match, || format!("c2 n={n} t={t} {eps}: orbit structure"))?;
            }
            let r = c8_orbits(n, eps).map_err(|e| e.to_string())?;
            let (ni, e) = (n as i64, sgn(eps));
            let w0 = (pow2(2 * ni - 2) - 1) as usize;
            let w1 = (pow2(ni - 1) * (pow2(ni - 1) + e)) as usize;
            ensure(r.singleton == 1 && r.omega0 == w0 && r.omega1 == w1, || {
                format!("c8 n={n} {eps}: ({}, {}, {}) want (1, {w0}, {w1})", r.singleton, r.omega0, r.omega1)
            })?;
            ensure(r.orbits_match, || format!("c8 n={n} {eps}: orbits"))?;
        }
    }
    for (m, b) in [(1usize, 2u8), (2, 2), (1, 3)] {
        for eps in Eps::both() {
            let r = c3_orbits(m, b, eps).map_err(|e| format!("c3 m={m} b={b} {eps}: {e}"))?;
            let (n, bi, e) = (r.n as i64, b as i64, sgn(eps));
            for part in &r.parts {
                let want = if part.lambda == 0 {
                    (pow2(n - bi) + e) * (pow2(n) - e)
                } else {
                    part.class.len() as i64 * pow2(n - bi) * (pow2(n) - e)
                };
                ensure(part.size as i64 == want, || format!("c3 m={m} b={b} {eps} [{}]: {} want {want}", part.lambda, part.size))?;
            }
            let total: usize = r.parts.iter().map(|x| x.size).sum();
            ensure(total + 1 == q_size(r.n, eps), || format!("c3 m={m} b={b} {eps}: parts cover {total}"))?;
        }
    }
    Ok(())
}

fn criterion_10(ctx: &Ctx) -> Check {
    let sets = |p: &CodeParams| ctx.get(p).bit_set();
    let complement = |c: &Code| -> BTreeSet<Vec<usize>> {
        let len = c.index.len();
        c.words
            .iter()
            .map(|w| (0..len).filter(|&i| !w.contains(i)).collect())
            .collect()
    };
    let positions = |c: &Code| -> BTreeSet<Vec<usize>> { c.words.iter().map(|w| w.positions()).collect() };
    for (p, code) in ctx.iter(3) {
        let cp = p.complement();
        ensure(cp.validate().is_ok(), || format!("{p}: complement parameters invalid"))?;
        ensure(complement(code) == positions(ctx.get(&cp)), || format!("{p}: complement is not {cp}"))?;
        let selfc = sets(p) == sets(&cp);
        let want = p.family == Family::Nd && 2 * p.d == p.n && p.eps == Eps::Minus;
        ensure(selfc == want, || format!("{p}: self-complementary = {selfc}"))?;
        if p.family == Family::Nd {
            let ep = p.epsprime.unwrap();
            let q = CodeParams::nd(p.n, p.n - p.d, p.eps, p.eps.times(ep));
            ensure(sets(p) == sets(&q), || format!("{p}: differs from {q}"))?;
        }
        let q = q_size(p.n, p.eps) as u64;
        let complete = binom(q, code.k()) == code.len() as u128;
        let want_complete = p.n == 2 && p.d == 1 && p.eps == Eps::Minus;
        ensure(complete == want_complete, || format!("{p}: complete = {complete}"))?;
    }
    let all_subsets = |k: usize| -> BTreeSet<Vec<usize>> {
        (0u32..64).filter(|m| m.count_ones() as usize == k).map(|m| (0..6).filter(|i| m >> i & 1 == 1).collect()).collect()
    };
    for ep in Eps::both() {
        let c = ctx.get(&CodeParams::nd(2, 1, Eps::Minus, ep));
        ensure(positions(c) == all_subsets(3) && c.len() == 20, || format!("nd(2,1,-,{ep}) is not all 3-subsets"))?;
    }
    for (delta, k) in [(0u8, 2usize), (1, 4)] {
        let c = ctx.get(&CodeParams::ti(2, 1, Eps::Minus, delta));
        ensure(positions(c) == all_subsets(k) && c.len() == 15, || format!("ti(2,1,-,{delta}) is not all {k}-subsets"))?;
    }
    Ok(())
}

fn main() {
    let start = Instant::now();
    let ctx = Ctx::new(4);
    println!("built {} codes (n <= 4) in {:.2?}", ctx.codes.len(), start.elapsed());
    let runs: Vec<(usize, Box<dyn Fn() -> Check + '_>)> = vec![
        (1, Box::new(criterion_1)),
        (2, Box::new(|| criterion_2(&ctx))),
        (3, Box::new(|| criterion_3(&ctx))),
        (4, Box::new(|| check_distances(&ctx, Family::Ti, closed_ti_distance))),
        (5, Box::new(|| check_distances(&ctx, Family::Nd, closed_nd_distance))),
        (6, Box::new(|| criterion_6(&ctx))),
        (7, Box::new(|| criterion_7(&ctx))),
        (8, Box::new(criterion_8)),
        (9, Box::new(criterion_9)),
        (10, Box::new(|| criterion_10(&ctx))),
    ];
    let mut failed = 0;
    for (i, run) in runs {
        let t = Instant::now();
        let result = run();
        let elapsed = t.elapsed();
        match result {
            Ok(()) => println!("criterion {i}: PASS ({elapsed:.2?})"),
            Err(msg) => {
                failed += 1;
                println!("criterion {i}: FAIL ({elapsed:.2?}): {msg}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
