//! Induced projections and the residuals of the perfect-strategy identities.
//!
//! For an exact perfect strategy of an imitation game every residual in the
//! report collapses to roundoff; perturbed strategies show how the residuals
//! grow with the square root of the zero-support leak.
//!
//! Run: `cargo run --example witness_residuals`

use nonlocal_lab::corpus;
use nonlocal_lab::game::Side;
use nonlocal_lab::witness::{induce_projections, trace_check, witness_report};
use nonlocal_lab::DEFAULT_TOL;

fn main() {
    // exact case: everything at machine precision
    let game = corpus::copy_game();
    let strategy = corpus::copy_max_entangled_strategy();
    let report = witness_report(&strategy, &game, DEFAULT_TOL).unwrap();
    println!("copy game, exact perfect strategy:");
    println!("  leak        = {:.3e}", report.eps_input);
    println!(
        "  r1..r5      = {:.3e} {:.3e} {:.3e} {:.3e} {:.3e}",
        report.r1, report.r2, report.r3, report.r4, report.r5
    );
    println!("  commutator  = {:.3e}", report.commutator_defect);
    assert!(report.r1.max(report.r5) <= 1e-12);

    for side in [Side::Alice, Side::Bob] {
        let t = trace_check(&strategy, side, 3, DEFAULT_TOL).unwrap();
        println!(
            "  {:?} word-trace defect (length <= 3, {} pairs) = {:.3e}",
            side, t.pairs_checked, t.max_defect
        );
        assert!(t.max_defect <= 1e-12);
    }

    // the induced projections of the perturbed strategy lose their grip on
    // the state at rate sqrt(leak)
    println!("\ncopy game, Bob rotated by theta:");
    println!("theta   leak        r5          r5/sqrt(leak)");
    for theta in [0.3, 0.15, 0.075] {
        let s = corpus::copy_theta_strategy(theta);
        let w = witness_report(&s, &game, DEFAULT_TOL).unwrap();
        let ratio = w.measured_constants.r5.unwrap();
        println!(
            "{theta:<7} {:<11.4e} {:<11.4e} {ratio:.4}",
            w.eps_input, w.r5
        );
        assert!((ratio - 2.0_f64.sqrt()).abs() < 1e-6); // r5 = sqrt(2*leak) here
    }

    // a random planted instance: perfect by construction, so the residual
    // chain collapses even though nothing is diagonal any more
    let planted = corpus::planted_perfect(7);
    let w = witness_report(&planted.strategy, &planted.game, DEFAULT_TOL).unwrap();
    println!(
        "\nplanted instance (|X|={}, |Y|={}, answers {}, local dim {}):",
        planted.game.x_count(),
        planted.game.y_count(),
        planted.game.a_count(),
        planted.strategy.dim_a()
    );
    println!(
        "  leak = {:.3e}, worst residual = {:.3e}, commutator = {:.3e}",
        w.eps_input,
        w.r1.max(w.r2).max(w.r3).max(w.r4).max(w.r5),
        w.commutator_defect
    );
    assert!(w.eps_input <= 1e-12);
    assert!(w.r5 <= 1e-10);

    // the meets behind r3/r4: for the chsh optimal strategy the two
    // per-question induced projections only share the zero subspace
    let chsh = corpus::chsh_game();
    let optimal = corpus::chsh_optimal_strategy();
    let induced = induce_projections(&optimal, &chsh, DEFAULT_TOL).unwrap();
    let norm = induced.pi(0, 0).matrix().fro_norm();
    println!("\nchsh optimal strategy: ||meet over x|| = {norm:.3e} (transverse ranges)");
    assert!(norm <= 1e-10);
}
