//! One pass/fail line per acceptance criterion. Values are exact (tolerance 0); each
//! criterion also has a wall-clock bound.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use strata_cli::checks::{self, CheckResult};

struct Criterion {
    id: u32,
    name: &'static str,
    bound: Duration,
    run: fn() -> CheckResult,
}

const CRITERIA: &[Criterion] = &[
    Criterion { id: 1, name: "a_g = 2^(g-1) g for g <= 12", bound: Duration::from_secs(1), run: || checks::headline_constant(12) },
    Criterion { id: 2, name: "a(g,0,g-1) = odd spin count for g <= 12", bound: Duration::from_secs(1), run: || checks::odd_spin_anchor(12) },
    Criterion { id: 3, name: "u_(g,n) closed form for g <= 12", bound: Duration::from_secs(1), run: || checks::u_closed_form(12) },
    Criterion { id: 4, name: "symbolic and recursive coefficients agree (g <= 4, z+2n <= 8)", bound: Duration::from_secs(300), run: || checks::two_routes(4, 8) },
    Criterion { id: 5, name: "alpha(g,(z)) is the product of (xi + j psi_1), z <= 6", bound: Duration::from_secs(1), run: || checks::product_formula(3, 6) },
    Criterion { id: 6, name: "increment orders agree (g <= 3, n <= 3, |Z| <= 6)", bound: Duration::from_secs(120), run: || checks::order_independence(3, 3, 6) },
    Criterion { id: 7, name: "boundary coefficients are level-graph multiplicities (g <= 3, n <= 3, |Z| <= 4)", bound: Duration::from_secs(60), run: || checks::coefficient_provenance(3, 3, 4) },
    Criterion { id: 8, name: "stable graphs match the oracle for 3g-3+n <= 3", bound: Duration::from_secs(120), run: || checks::graphs(3) },
];

fn main() -> ExitCode {
    let mut failed = 0;
    for c in CRITERIA {
        let start = Instant::now();
        let result = (c.run)();
        let elapsed = start.elapsed();
        let (verdict, detail) = match (&result, elapsed <= c.bound) {
            (Ok(d), true) => ("pass", d.clone()),
            (Ok(d), false) => ("FAIL", format!("{d}; too slow, bound {:?}", c.bound)),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!("criterion {} {verdict} {:.3}s {}: {detail}", c.id, elapsed.as_secs_f64(), c.name);
    }
    println!(
        "info: the class-level identities for the Hodge bundle and lambda classes are not checked here; \
         they need lambda classes on all of the moduli space, and criteria 1-7 check their numerical consequences"
    );
    println!("{} of {} criteria passed", CRITERIA.len() - failed, CRITERIA.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
