//! Residual scaling across near-perfect strategy families.
//!
//! Two families, both approaching an exact perfect strategy as theta -> 0:
//!
//! * the copy game with Bob's measurement rotated by theta: the leak grows
//!   as sin^2(theta)/2 and the state-identity residuals as |sin(theta)|, so
//!   their log-log slope against the leak is exactly 1/2. With a single Bob
//!   question all Bob operators live in one PVM and commute outright, so the
//!   commutator expectation stays at roundoff level no matter what theta is.
//!
//! * the match game (copy on equal questions) with two non-commuting Bob
//!   measurements and a complex state displacement of size theta: here the
//!   leak is ~theta^2 while the commutator expectation is ~theta, so the
//!   commutator series itself shows the square-root slope.
//!
//! Run: `cargo run --example epsilon_scaling`

use nonlocal_lab::corpus;
use nonlocal_lab::witness::state_convergence_scan;
use nonlocal_lab::DEFAULT_TOL;

fn main() {
    let thetas = [0.2, 0.1, 0.05, 0.025];

    println!("== copy game, Bob rotated by theta ==");
    let g = corpus::copy_game();
    let family = corpus::copy_theta_family(&thetas);
    let scan = state_convergence_scan(&family, &g, 2, DEFAULT_TOL).unwrap();
    println!("theta      eps_input      r3            r5            commutator");
    for (theta, m) in thetas.iter().zip(scan.members.iter()) {
        println!(
            "{theta:<10} {:<14.6e} {:<13.6e} {:<13.6e} {:<13.6e}",
            m.eps_input, m.r3, m.r5, m.commutator_defect
        );
        let expected_eps = (theta.sin().powi(2)) / 2.0;
        assert!((m.eps_input - expected_eps).abs() < 1e-12);
    }
    println!(
        "slopes vs eps: r3 = {:?}, r5 = {:?}",
        scan.slopes.r3, scan.slopes.r5
    );
    println!(
        "commutator slope: {:?} (series is roundoff noise)",
        scan.slopes.commutator
    );
    let r5_slope = scan.slopes.r5.unwrap();
    assert!((r5_slope - 0.5).abs() < 1e-3, "r5 slope {r5_slope}");
    for m in &scan.members {
        assert!(m.commutator_defect < 1e-12);
    }

    println!();
    println!("== match game, state displaced by i*theta ==");
    let g = corpus::match_game();
    let family = corpus::match_theta_family(&thetas);
    let scan = state_convergence_scan(&family, &g, 2, DEFAULT_TOL).unwrap();
    println!("theta      eps_input      r5            commutator    cauchy");
    for (i, (theta, m)) in thetas.iter().zip(scan.members.iter()).enumerate() {
        let cauchy = if i > 0 {
            format!("{:.3e}", scan.cauchy_defects[i - 1])
        } else {
            "-".into()
        };
        println!(
            "{theta:<10} {:<14.6e} {:<13.6e} {:<13.6e} {cauchy}",
            m.eps_input, m.r5, m.commutator_defect
        );
    }
    println!(
        "slopes vs eps: r5 = {:?}, commutator = {:?}",
        scan.slopes.r5, scan.slopes.commutator
    );
    let slope = scan.slopes.commutator.unwrap();
    assert!(
        (slope - 0.5).abs() < 0.2,
        "commutator slope {slope} outside 0.5 +/- 0.2"
    );
    println!();
    println!("square-root scaling of the commutator defect confirmed: slope {slope:.4}");
}
