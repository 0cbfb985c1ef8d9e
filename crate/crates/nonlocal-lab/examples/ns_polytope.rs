//! Perfect non-signalling feasibility over the corpus games, plus the
//! classical baseline search.
//!
//! Run: `cargo run --example ns_polytope`

use nonlocal_lab::corpus;
use nonlocal_lab::membership::{classical_perfect, ns_feasible, CLASSICAL_SEARCH_CAP};

fn main() {
    let games = [
        ("copy", corpus::copy_game()),
        ("all", corpus::all_game()),
        ("none", corpus::none_game()),
        ("chsh", corpus::chsh_game()),
        ("parity", corpus::parity_game()),
        ("match", corpus::match_game()),
    ];

    println!("game     ns-feasible  classical-perfect  visited");
    for (name, g) in &games {
        let ns = ns_feasible(g).unwrap();
        let classical = classical_perfect(g, CLASSICAL_SEARCH_CAP).unwrap();
        println!(
            "{name:<8} {:<12} {:<18} {}",
            ns.feasible,
            classical
                .strategy
                .as_ref()
                .map(|s| format!("f={:?} g={:?}", s.f, s.g))
                .unwrap_or_else(|| "none".into()),
            classical.visited
        );

        // classical perfect implies a perfect non-signalling point
        if classical.strategy.is_some() {
            assert!(ns.feasible);
        }
        // every witness must satisfy both predicates
        if let Some(w) = &ns.witness {
            assert!(w.nonsignalling_report(1e-8).pass);
            assert!(w.perfect_report(g, 1e-8).unwrap().pass);
        }
    }

    // chsh: no classical perfect strategy (16 visited), yet the polytope
    // contains a perfect box
    let chsh = corpus::chsh_game();
    let ns = ns_feasible(&chsh).unwrap();
    let w = ns.witness.unwrap();
    println!("\nchsh witness slice (x=0, y=0):");
    for a in 0..2 {
        for b in 0..2 {
            print!("  p({a},{b}) = {:.3}", w.get(0, 0, a, b));
        }
    }
    println!();
    assert!(!classical_perfect(&chsh, CLASSICAL_SEARCH_CAP)
        .unwrap()
        .strategy
        .is_some());

    // the all-zero game is the minimal infeasible case: normalization
    // contradicts the pinned zero
    assert!(!ns_feasible(&corpus::none_game()).unwrap().feasible);
    println!("\nall-zero game: infeasible, as normalization contradicts the pinned zero");
}
