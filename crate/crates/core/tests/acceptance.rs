//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.
//! Set PRIMPAIR_LONG=1 to include the optional (4,5) search.

use std::time::{Duration, Instant};

use num_traits::Zero;
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::{Config, TestRunner};

use primpair::criteria::{self, TableRow, TABLE1};
use primpair::intnum;
use primpair::verify::{self, SearchOptions, Status, TripleScope};
use primpair::FieldCtx;

struct Outcome {
    ok: bool,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { ok: true, notes: Vec::new() }
    }

    fn check(&mut self, cond: bool, note: impl Into<String>) {
        if !cond {
            self.ok = false;
            self.notes.push(note.into());
        }
    }

    fn within(&mut self, elapsed: Duration, limit: Duration, what: &str) {
        self.check(
            elapsed <= limit,
            format!("{what} took {:.2?}, limit {:.0?}", elapsed, limit),
        );
    }
}

fn close(shown: f64, actual: f64, tol: f64) -> bool {
    (shown - actual).abs() <= tol
}

/// Rows whose printed prime list is misprinted.
const PRIME_TYPOS: [(u64, u32); 3] = [(2, 16), (64, 6), (256, 5)];

fn table_criterion(rows: &[TableRow], out: &mut Outcome) {
    for row in rows {
        let (q, m) = (row.printed.q, row.printed.m);
        if !row.primes_match() && !PRIME_TYPOS.contains(&(q, m)) {
            out.check(false, format!("({q},{m}) prime set differs"));
        }
        let plan = &row.plan;
        out.check(
            close(row.printed.delta, plan.delta_f64(), 5e-4),
            format!("({q},{m}) delta printed {} computed {:.6}", row.printed.delta, plan.delta_f64()),
        );
        let lambda = plan.lambda.unwrap_or(f64::NAN);
        out.check(
            close(row.printed.lambda, lambda, 5e-3),
            format!("({q},{m}) lambda printed {} computed {:.6}", row.printed.lambda, lambda),
        );
        out.check(plan.passes, format!("({q},{m}) sieve does not pass"));
    }
}

fn criterion_1() -> Outcome {
    let mut out = Outcome::new();
    let start = Instant::now();
    let rows = criteria::table1().expect("table 1");
    out.check(rows.len() == 30, "table 1 row count");
    table_criterion(&rows, &mut out);
    out.within(start.elapsed(), Duration::from_secs(10), "table 1");
    out
}

fn criterion_2() -> Outcome {
    let mut out = Outcome::new();
    let start = Instant::now();
    let rows = criteria::table2().expect("table 2");
    out.check(rows.len() == 16, "table 2 row count");
    table_criterion(&rows, &mut out);
    let flagged = |q, m, what: &str| {
        rows.iter()
            .find(|r| (r.printed.q, r.printed.m) == (q, m))
            .is_some_and(|r| r.errata.iter().any(|e| e.contains(what)))
    };
    out.check(flagged(2, 16, "primes"), "(2,16) prime-list typo not flagged");
    out.check(flagged(2, 14, "delta"), "(2,14) delta typo not flagged");
    out.within(start.elapsed(), Duration::from_secs(10), "table 2");
    out
}

/// Odd pairs left open by the character-sum and sieve arguments; the union of
/// both exception lists.
const ODD_EXCEPTIONS: [(u64, u32); 28] = [
    (3, 5), (3, 6), (3, 7), (3, 8), (3, 12), (5, 5), (5, 6), (5, 8), (7, 5), (7, 6),
    (7, 7), (9, 5), (9, 6), (11, 5), (11, 6), (13, 5), (13, 6), (17, 6), (19, 5), (19, 6),
    (23, 6), (25, 5), (25, 6), (29, 6), (31, 5), (31, 6), (37, 5), (37, 7),
];

fn criterion_3() -> Outcome {
    let mut out = Outcome::new();
    let start = Instant::now();
    let r = criteria::base_condition(2, 13).unwrap();
    out.check(r.passes, "(2,13) should pass the base condition");
    let r = criteria::base_condition(2, 6).unwrap();
    out.check(!r.passes, "(2,6) should fail the base condition");

    let limit = 1u128 << 40;
    let mut tested = 0;
    for q in (3u64..=(1 << 20)).filter(|&q| q % 2 == 1) {
        if intnum::prime_power(q).is_none() {
            continue;
        }
        let mut m = 5;
        while (q as u128).pow(m) <= limit {
            let skip = ODD_EXCEPTIONS.contains(&(q, m))
                || TABLE1.iter().any(|row| (row.q, row.m) == (q, m));
            let r = criteria::base_condition(q, m).unwrap();
            if !skip && r.omega <= 3 {
                tested += 1;
                out.check(r.passes, format!("({q},{m}) with omega {} fails", r.omega));
            }
            m += 1;
        }
    }
    out.check(tested > 0, "no omega <= 3 pairs found");
    out.notes.push(format!("{tested} omega<=3 pairs checked"));
    out.within(start.elapsed(), Duration::from_secs(30), "base-condition checks");
    out
}

fn search(q: u64, m: u32, modulus: Option<Vec<u64>>, opts: &SearchOptions) -> (verify::PairReport, Duration) {
    let (p, s) = intnum::prime_power(q).unwrap();
    let ctx = FieldCtx::new(p, s, m, modulus).unwrap();
    let start = Instant::now();
    let report = verify::search_pair(&ctx, opts).unwrap();
    (report, start.elapsed())
}

fn criterion_4() -> Outcome {
    let mut out = Outcome::new();
    let opts = SearchOptions::default();
    for m in [5, 7] {
        let (r, t) = search(2, m, None, &opts);
        out.check(r.status == Status::Member, format!("(2,{m}) not member"));
        out.within(t, Duration::from_secs(10), &format!("(2,{m})"));
    }

    let (r, t) = search(2, 6, None, &opts);
    out.check(r.status == Status::Exceptional, "(2,6) not exceptional");
    out.check(!r.counterexamples.is_empty(), "(2,6) has no counterexample list");
    out.notes.push(format!(
        "(2,6): {} counterexamples, admissible counterexample exists: {}",
        r.counterexamples.len(),
        r.admissible_counterexample_exists
    ));
    out.within(t, Duration::from_secs(60), "(2,6)");

    // the conjectured (3,3) family over x^3 + 2x + 1 with alpha = x
    let modulus = vec![1, 2, 0, 1];
    let (r, t) = search(3, 3, Some(modulus.clone()), &opts);
    out.check(r.status == Status::Exceptional, "(3,3) not exceptional");
    let ctx = FieldCtx::new(3, 1, 3, Some(modulus)).unwrap();
    let a = ctx.elem(&[0, 1, 0]).unwrap();
    let b = ctx.elem(&[1, 1, 0]).unwrap();
    let c = ctx.elem(&[2, 0, 2]).unwrap();
    let single = SearchOptions { triples: TripleScope::Single(a, b, c), ..SearchOptions::default() };
    let w = verify::search_pair(&ctx, &single).unwrap();
    out.check(w.status == Status::Exceptional, "(3,3) witness family has a witness for every beta");
    let betas: Vec<String> = w.counterexamples.iter().map(|c| c.beta.to_string()).collect();
    out.notes.push(format!("(3,3) witness family fails for beta in {betas:?}"));
    out.within(t, Duration::from_secs(5), "(3,3)");

    let four = SearchOptions { workers: 4, ..SearchOptions::default() };
    let (r, t) = search(3, 5, None, &four);
    out.check(r.status == Status::Member, "(3,5) not member");
    out.within(t, Duration::from_secs(300), "(3,5)");

    if std::env::var("PRIMPAIR_LONG").is_ok_and(|v| v == "1") {
        let (r, t) = search(4, 5, None, &opts);
        out.check(r.status == Status::Member, "(4,5) not member");
        out.notes.push(format!("(4,5) member in {t:.1?}"));
    } else {
        out.notes.push("optional (4,5) skipped (PRIMPAIR_LONG=1 to run)".into());
    }
    out
}

fn criterion_5() -> Outcome {
    let mut out = Outcome::new();
    let start = Instant::now();
    for (p, s, m) in [(2, 1, 6), (3, 1, 4), (5, 1, 2)] {
        let ctx = FieldCtx::new(p, s, m, None).unwrap();
        let r = verify::property_suite(&ctx).unwrap();
        let q = ctx.q();
        out.check(r.sigma_mismatches == 0 && r.sigma_max_dev < 1e-6, format!("F_{q}^{m} sigma_r"));
        out.check(r.gamma_mismatches == 0 && r.gamma_max_dev < 1e-6, format!("F_{q}^{m} gamma_beta"));
        out.check(r.fibers_exact, format!("F_{q}^{m} trace fibers {:?}", r.fiber_counts));
        out.check(
            r.mult_orthogonality_max < 1e-6 && r.add_orthogonality_max < 1e-6,
            format!("F_{q}^{m} orthogonality"),
        );
        out.check(r.weil_checks > 0 && r.weil_violations == 0, format!("F_{q}^{m} Weil bound"));
        out.check(r.s_checks > 0 && r.s_violations == 0, format!("F_{q}^{m} |S| bound"));
    }
    out.within(start.elapsed(), Duration::from_secs(120), "property suite");
    out
}

fn criterion_6() -> Outcome {
    let mut out = Outcome::new();
    let start = Instant::now();
    let ctx = FieldCtx::new(2, 1, 6, None).unwrap();
    let g = ctx.generator().clone();
    let one = ctx.one();
    let pow = |k: u128| ctx.pow(&g, k);
    // beta = 1 and f without roots in F_64: with r1 = r2 = 1 the bound is
    // (q^m - 1)/q, which a root of trace beta (or beta = 0, losing α = 0)
    // already pushes the exact count below
    let configs: Vec<_> = (0..63u128)
        .map(|t| (pow(t), pow(7 * t + 1), pow(11 * t + 3), one.clone()))
        .filter(|(a, b, c, _)| {
            !b.is_zero() && ctx.elements().all(|x| !ctx.eval_quadratic(a, b, c, &x).is_zero())
        })
        .take(3)
        .collect();
    out.check(configs.len() == 3, "fewer than three rootless configurations");
    let divisors = ctx.group_order_factors().divisors();
    for (a, b, c, beta) in &configs {
        let roots = ctx.elements().filter(|x| ctx.eval_quadratic(a, b, c, x).is_zero()).count();
        out.check(roots == 0, format!("configuration ({a};{b};{c}) has roots"));
        for &r1 in &divisors {
            for &r2 in &divisors {
                let rep = verify::count_m(&ctx, r1, r2, (a, b, c), beta).unwrap();
                out.check(
                    rep.consistent(),
                    format!("({a};{b};{c}) r1={r1} r2={r2}: count {} < bound {:.3}", rep.count, rep.lower_bound),
                );
            }
        }
    }
    out.within(start.elapsed(), Duration::from_secs(30), "count consistency");
    out
}

fn criterion_7() -> Outcome {
    let mut out = Outcome::new();
    let start = Instant::now();
    let prime_powers: Vec<u64> = (2u64..=1 << 12).filter(|&q| intnum::prime_power(q).is_some()).collect();
    let pairs: Vec<(u64, u32)> = prime_powers
        .iter()
        .flat_map(|&q| (1..=40u32).map(move |m| (q, m)))
        .filter(|&(q, m)| (q as u128).checked_pow(m).is_some_and(|v| v <= 1 << 40))
        .collect();
    let mut runner = TestRunner::new_with_rng(
        Config { cases: 200, ..Config::default() },
        proptest::test_runner::TestRng::deterministic_rng(proptest::test_runner::RngAlgorithm::ChaCha),
    );
    let strategy = (0..pairs.len(), 0usize..64);
    let mut checked = 0;
    for _ in 0..200 {
        let (i, k) = strategy.new_tree(&mut runner).unwrap().current();
        let (q, m) = pairs[i];
        let omega = intnum::factorize((q as u128).pow(m) - 1).unwrap().omega() as usize;
        let plan = criteria::sieve_plan(q, m, k % (omega + 1)).unwrap();
        let diff = plan.delta_from_theta() - plan.delta.clone();
        out.check(diff.is_zero(), format!("({q},{m}) core {}: identity off by {diff}", plan.core_count()));
        checked += 1;
    }
    out.notes.push(format!("{checked} plans"));
    out.within(start.elapsed(), Duration::from_secs(30), "sieve identity");
    out
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("1 table 1 reproduction", criterion_1),
        ("2 table 2 reproduction", criterion_2),
        ("3 base-condition spot checks", criterion_3),
        ("4 exhaustive verdicts", criterion_4),
        ("5 character-sum property suite", criterion_5),
        ("6 count consistency", criterion_6),
        ("7 sieve identity", criterion_7),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let out = run();
        let verdict = if out.ok { "PASS" } else { "FAIL" };
        println!("criterion {name}: {verdict} ({:.2?})", start.elapsed());
        for note in &out.notes {
            println!("    {note}");
        }
        if !out.ok {
            failed += 1;
        }
    }
    println!("acceptance: {} of 7 criteria pass", 7 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
