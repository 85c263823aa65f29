use estc_core::dispersion::{solve_pair, SolverParams};
use estc_core::observables::sigma10;

fn main() {
    let params = SolverParams::default();
    println!("m    q1            sigma10(b1)-ref      sigma10(b2)-ref      outer1      outer2      r1        r2");
    let reference = 0.99960023984_f64;
    for m in -10..=15 {
        let q1 = 2.0_f64.powi(m) * params.omega;
        let pair = solve_pair(q1, &params).unwrap();
        let s1 = sigma10(&pair.b1, 8).value;
        let s2 = sigma10(&pair.b2, 8).value;
        println!(
            "{m:>3} {q1:.6e} {:+.6e} {:+.6e} {:.1e} {:.1e} {:.1e} {:.1e}",
            s1 - reference,
            s2 - reference,
            pair.b1.outer_weight,
            pair.b2.outer_weight,
            pair.b1.residual,
            pair.b2.residual
        );
    }

    // higher truncation at the worst point
    for g in [12, 14, 16, 18] {
        let p = SolverParams::new(params.omega, params.am, g).unwrap();
        let pair = solve_pair(2.0_f64.powi(15) * params.omega, &p).unwrap();
        let s1 = sigma10(&pair.b1, 8).value;
        println!("g={g} sigma10-ref = {:+.6e} residual {:.2e}", s1 - reference, pair.b1.residual);
    }
}
