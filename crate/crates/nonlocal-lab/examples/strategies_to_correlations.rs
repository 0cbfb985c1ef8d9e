//! From strategies to correlations: tensor, commuting, and deterministic
//! models, and the membership predicates their outputs satisfy.
//!
//! Run: `cargo run --example strategies_to_correlations`

use nonlocal_lab::corpus;
use nonlocal_lab::strategy::{
    correlation_from_commuting, correlation_from_deterministic, correlation_from_tensor,
    embed_tensor, random_tensor_strategy, DeterministicStrategy,
};

fn main() {
    let copy = corpus::copy_game();

    // maximally entangled copy strategy: p(a,b) = delta_ab / 2
    let s = corpus::copy_max_entangled_strategy();
    let c = correlation_from_tensor(&s, &copy).unwrap();
    println!("copy game, maximally entangled strategy:");
    for a in 0..2 {
        for b in 0..2 {
            print!("  p({a},{b}|0,0) = {:.3}", c.get(0, 0, a, b));
        }
    }
    println!();
    assert!(c.perfect_report(&copy, 1e-10).unwrap().pass);
    assert!(c.nonsignalling_report(1e-10).pass);
    println!("  perfect and non-signalling: ok");

    // deterministic baseline
    let d = DeterministicStrategy::new(vec![1], vec![1]);
    let cd = correlation_from_deterministic(&d, &copy).unwrap();
    assert_eq!(cd.get(0, 0, 1, 1), 1.0);
    assert_eq!(cd.epsilon_violation(&copy).unwrap(), 0.0);
    println!("deterministic (f,g) = (1,1): perfect with exact 0/1 entries");

    // embedding a tensor strategy into the one-space commuting model
    // reproduces its correlation entry for entry
    let chsh = corpus::chsh_game();
    let s = random_tensor_strategy(&chsh, 2, 2, 42).unwrap();
    let c1 = correlation_from_tensor(&s, &chsh).unwrap();
    let c2 = correlation_from_commuting(&embed_tensor(&s).unwrap(), &chsh).unwrap();
    let gap = c1.distance(&c2).unwrap();
    println!("random chsh strategy vs its commuting embedding: distance {gap:.2e}");
    assert!(gap <= 1e-10);

    // the chsh optimum
    let s = corpus::chsh_optimal_strategy();
    let c = correlation_from_tensor(&s, &chsh).unwrap();
    let win = c.winning_probability(&chsh).unwrap();
    let leak = c.epsilon_violation(&chsh).unwrap();
    println!("chsh optimal-angle strategy: winning probability {win:.6}, leak {leak:.6}");
    let expected = (std::f64::consts::FRAC_PI_8).cos().powi(2);
    assert!((win - expected).abs() <= 1e-6);
    // each losing tuple carries sin^2(pi/8)/2
    let per_tuple = (std::f64::consts::FRAC_PI_8).sin().powi(2) / 2.0;
    assert!((leak - per_tuple).abs() <= 1e-6);
    println!("  matches cos^2(pi/8) = {expected:.6} with per-tuple leak {per_tuple:.6}");
}
