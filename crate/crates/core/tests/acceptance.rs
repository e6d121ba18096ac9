//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Exits non-zero if a criterion fails that is not listed in
//! `KNOWN_FAILURES`; a listed criterion that starts passing also fails the
//! run, so the list cannot go stale.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::ToPrimitive;
use twisted_cubic::check::Check;
use twisted_cubic::classify::{expected_plane_sizes, expected_point_sizes, Geometry, PointClass};
use twisted_cubic::covering::mu_formula;
use twisted_cubic::gf::field_of_order;
use twisted_cubic::incidence::{cube_product_geometry, expected_grid, null_polarity_check, IncidenceError};
use twisted_cubic::verify::{verify_field, VerifyOptions, VerifyReport, SUITE_GRID};

/// Criteria that fail on the mathematics itself, with the reason.
const KNOWN_FAILURES: &[(&str, &str)] =
    &[("7b", "μ switches to (q²−3q)/6 at q = 9, which lifts γ above its q = 8 value")];

struct Outcome {
    id: &'static str,
    title: &'static str,
    problems: Vec<String>,
    elapsed: Duration,
}

fn problems_of(report: &VerifyReport, sections: &[&str]) -> Vec<String> {
    report
        .checks()
        .filter(|(s, c)| sections.contains(s) && !c.pass)
        .map(|(s, c)| format!("q={} {s}: {} ({})", report.q, c.name, c.witness.clone().unwrap_or_default()))
        .collect()
}

fn check_named<'a>(report: &'a VerifyReport, section: &str, prefix: &str) -> Option<&'a Check> {
    report.checks().find(|(s, c)| *s == section && c.name.starts_with(prefix)).map(|(_, c)| c)
}

fn require(report: &VerifyReport, section: &str, prefix: &str, problems: &mut Vec<String>) {
    match check_named(report, section, prefix) {
        Some(c) if c.pass && c.skipped.is_none() => {}
        Some(c) => problems.push(format!("q={} {}: {:?} {:?}", report.q, c.name, c.witness, c.skipped)),
        None => problems.push(format!("q={} no check named {prefix:?} in {section}", report.q)),
    }
}

fn expect<T: PartialEq + std::fmt::Debug>(what: String, found: T, expected: T, problems: &mut Vec<String>) {
    if found != expected {
        problems.push(format!("{what}: found {found:?}, expected {expected:?}"));
    }
}

fn main() {
    let started = Instant::now();
    let mut reports: BTreeMap<u64, (VerifyReport, Duration)> = BTreeMap::new();
    for q in SUITE_GRID {
        let t = Instant::now();
        let opts = VerifyOptions { minimality: q <= 7, matrix_transpose: q <= 8 };
        let r = verify_field(field_of_order(q).expect("prime power"), opts);
        reports.insert(q, (r, t.elapsed()));
    }
    let rep = |q: u64| &reports[&q].0;
    let mut outcomes = Vec::new();
    let mut run = |id, title, f: &mut dyn FnMut(&mut Vec<String>)| {
        let t = Instant::now();
        let mut problems = Vec::new();
        f(&mut problems);
        outcomes.push(Outcome { id, title, problems, elapsed: t.elapsed() });
    };

    run("1", "orbit sizes for q in {5,7,8,9,11,13}, under 5 s each", &mut |p| {
        for q in [5u64, 7, 8, 9, 11, 13] {
            let t = Instant::now();
            let geom = Geometry::for_order(q).expect("geometry");
            let part = geom.partition().expect("partition");
            let el = t.elapsed();
            let qs = q as usize;
            expect(format!("q={q} planes"), part.plane_sizes(), expected_plane_sizes(qs), p);
            expect(format!("q={q} points"), part.point_sizes(), expected_point_sizes(qs, geom.xi()), p);
            if el > Duration::from_secs(5) {
                p.push(format!("q={q} took {el:?}"));
            }
        }
        let g7 = Geometry::for_order(7).unwrap().partition().unwrap();
        expect("q=7 point sizes".into(), g7.point_sizes(), [8, 56, 56, 168, 112], p);
    });

    run("2", "all 25 (k_ij, r_ij) match the tables, q in {2,3,4,5,7,8,9,11,13}", &mut |p| {
        for q in SUITE_GRID {
            let r = rep(q);
            let inc = r.incidence.as_ref().expect("incidence report");
            let want = expected_grid(q as usize, r.xi).expect("integral table");
            for i in 1..=5 {
                for j in 1..=5 {
                    expect(format!("q={q} I{i}{j}"), (inc.k(i, j), inc.r(i, j)), want[i - 1][j - 1], p);
                }
            }
        }
        let i7 = rep(7).incidence.as_ref().unwrap();
        expect("q=7 (N3,M3)".into(), (i7.k(3, 3), i7.r(3, 3)), (10, 10), p);
        let i9 = rep(9).incidence.as_ref().unwrap();
        expect("q=9 (N1,M2)".into(), (i9.k(1, 2), i9.r(1, 2)), (10, 10), p);
    });

    run("3", "counting identities for q in {5,7,8,9}", &mut |p| {
        for q in [5u64, 7, 8, 9] {
            let r = rep(q);
            p.extend(problems_of(r, &["counting identities"]));
            for name in [
                "real chord",
                "n_d^Σ",
                "weighted sum",
                "n2+3n3 = C(q+1,2)",
                "n2+3n3 = (q²+3q)/2",
                "n1+2n2+3n3",
                "planes through an imaginary chord",
            ] {
                require(r, "counting identities", name, p);
            }
        }
    });

    run("4", "exact per-class values, cube-product and square-value counts", &mut |p| {
        for q in [5u64, 7, 8, 11, 13] {
            let inc = rep(q).incidence.as_ref().unwrap();
            let q = q as u32;
            expect(format!("q={q} n_2,C"), inc.n(PointClass::OnCubic, 2), 2 * q, p);
            expect(format!("q={q} n_2,T"), inc.n(PointClass::T, 2), 2 * q - 1, p);
            let n3 = inc.n(PointClass::ThreeOsc, 3);
            let want = if q == 7 || q == 13 { (q * q + q + 4) / 6 } else { (q * q - q + 4) / 6 };
            expect(format!("q={q} n_3,3Γ"), n3, want, p);
        }
        let i9 = rep(9).incidence.as_ref().unwrap();
        let to: Vec<u32> = (0..4).map(|d| i9.n(PointClass::TO, d)).collect();
        expect("q=9 TO n_d".into(), to, vec![27, 37, 18, 9], p);
        let f7 = field_of_order(7).unwrap();
        expect("q=7 (m_c, m_nc)".into(), f7.triple_product_class_counts().unwrap(), (8, 12), p);
        let g7 = Geometry::for_order(7).unwrap();
        let p7 = g7.partition().unwrap();
        expect("q=7 cube-product by planes".into(), cube_product_geometry(&g7, &p7), (8, 12), p);
        for q in [5u64, 11] {
            expect(
                format!("q={q} #V"),
                field_of_order(q).unwrap().count_square_values_of_f().unwrap(),
                (q as usize - 1) / 2,
                p,
            );
        }
        for q in [5u64, 7, 8, 9, 11, 13] {
            p.extend(problems_of(rep(q), &["exact values"]));
        }
    });

    run("5", "k·#N = r·#M, row/column sums, designs, null polarity", &mut |p| {
        for q in SUITE_GRID {
            let r = rep(q);
            require(r, "tables", "k_ij·#N_i", p);
            require(r, "tables", "Σ_j k_ij", p);
            require(r, "tables", "Σ_i r_ij", p);
        }
        for q in [5u64, 7, 9] {
            let r = rep(q);
            require(r, "designs", "I21: 2-", p);
            require(r, "designs", "I21 decomposition", p);
            require(r, "designs", "I31: 3-", p);
        }
        for q in [5u64, 7, 8, 11, 13] {
            require(rep(q), "polarity", "M_i 𝔄 = N_i", p);
        }
        let g9 = Geometry::for_order(9).unwrap();
        let p9 = g9.partition().unwrap();
        expect("q=9 polarity".into(), null_polarity_check(&g9, &p9).err(), Some(IncidenceError::DegeneratePolarity), p);
    });

    run("6", "code suite for q in {5,7,8,9,11,13}, q=13 under 60 s", &mut |p| {
        let mus = [(5u64, 2u64), (7, 5), (8, 7), (9, 9), (11, 15), (13, 22)];
        for (q, mu) in mus {
            let r = rep(q);
            let code = r.code.as_ref().expect("code report");
            expect(format!("q={q} [n,k,d]"), (code.n, code.k, code.d), (q as usize + 1, q as usize - 3, 5), p);
            expect(format!("q={q} R"), code.radius, 3, p);
            expect(format!("q={q} μ_min"), code.mu_min, mu, p);
            expect(format!("q={q} μ formula"), mu_formula(q), mu, p);
            require(r, "code", "every deep hole has multiplicity at least μ", p);
            require(r, "code", "weight-2 cosets have one weight-2 word", p);
            require(r, "code", "leader weights 0, 1, 2", p);
        }
        let el = reports[&13].1;
        if el > Duration::from_secs(60) {
            p.push(format!("q=13 full run took {el:?}"));
        }
    });

    run("7a", "γ_direct = γ_formula exactly; q=5 → 13/9, q=7 → 13/10", &mut |p| {
        for q in [5u64, 7, 8, 9, 11, 13] {
            let code = rep(q).code.as_ref().unwrap();
            expect(format!("q={q} γ"), &code.gamma_direct, &code.gamma_formula, p);
            if let Some(a5) = code.a5_enumerated {
                expect(format!("q={q} A5"), a5, code.a5_formula, p);
            }
        }
        let g = |q| rep(q).code.as_ref().unwrap().gamma_direct.clone();
        expect("q=5 γ".into(), g(5), BigRational::new(13.into(), 9.into()), p);
        expect("q=7 γ".into(), g(7), BigRational::new(13.into(), 10.into()), p);
    });

    run("7b", "γ strictly decreasing on the grid and γ − 1 < 4/q", &mut |p| {
        let grid = [5u64, 7, 8, 9, 11, 13];
        let gammas: Vec<BigRational> =
            grid.iter().map(|&q| rep(q).code.as_ref().unwrap().gamma_direct.clone()).collect();
        for w in 0..grid.len() - 1 {
            if gammas[w + 1] >= gammas[w] {
                p.push(format!(
                    "γ(q={}) = {:.4} is not below γ(q={}) = {:.4}",
                    grid[w + 1],
                    gammas[w + 1].to_f64().unwrap(),
                    grid[w],
                    gammas[w].to_f64().unwrap()
                ));
            }
        }
        for (q, g) in grid.iter().zip(&gammas) {
            let bound = BigRational::new(4.into(), (*q as i64).into());
            if g - BigRational::from_integer(1.into()) >= bound {
                p.push(format!("q={q}: γ − 1 = {:.4} is not below 4/q", (g.to_f64().unwrap() - 1.0)));
            }
        }
    });

    run("8", "saturation M1–M3 for q in {5,7,9}, minimality for q in {5,7}", &mut |p| {
        for q in [5u64, 7, 9] {
            let r = rep(q);
            for name in ["M1", "M2", "M3: ", "M3 minimum"] {
                require(r, "code", name, p);
            }
        }
        for q in [5u64, 7] {
            require(rep(q), "code", "minimal", p);
        }
    });

    run("9", "label consistency, scalar invariance, deep-hole geometry", &mut |p| {
        for q in SUITE_GRID {
            require(rep(q), "geometry", "chord type and osculating count", p);
        }
        for q in [5u64, 7, 8, 9, 11, 13] {
            require(rep(q), "code", "m(λs) = m(s)", p);
        }
        for q in [5u64, 7, 9] {
            let r = rep(q);
            require(r, "code", "m(s) = n3", p);
            require(r, "code", "minimum multiplicity exactly on", p);
            require(r, "code", "D = (q−1)", p);
        }
    });

    let mut unexpected = Vec::new();
    for o in &outcomes {
        let known = KNOWN_FAILURES.iter().find(|(id, _)| *id == o.id);
        let status = if o.problems.is_empty() { "PASS" } else { "FAIL" };
        println!("{status} criterion {:<3} {} [{:.2?}]", o.id, o.title, o.elapsed);
        for pr in o.problems.iter().take(8) {
            println!("       {pr}");
        }
        match (o.problems.is_empty(), known) {
            (false, Some((_, why))) => println!("       known: {why}"),
            (false, None) => unexpected.push(format!("criterion {} failed", o.id)),
            (true, Some(_)) => unexpected.push(format!("criterion {} is listed as failing but passed", o.id)),
            (true, None) => {}
        }
    }
    for (q, (_, el)) in &reports {
        println!("       q={q}: full verification {el:.2?}");
    }
    println!("acceptance finished in {:.2?}", started.elapsed());
    if !unexpected.is_empty() {
        eprintln!("{}", unexpected.join("\n"));
        std::process::exit(1);
    }
}
