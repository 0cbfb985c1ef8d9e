//! The canonical games: validity, imitation classification, zero supports,
//! and the JSON wire format.
//!
//! Run: `cargo run --example games_and_corpus`

use nonlocal_lab::corpus;
use nonlocal_lab::game::Game;

fn main() {
    let games: Vec<(&str, Game)> = vec![
        ("copy", corpus::copy_game()),
        ("all", corpus::all_game()),
        ("none", corpus::none_game()),
        ("chsh", corpus::chsh_game()),
        ("parity", corpus::parity_game()),
        ("match", corpus::match_game()),
    ];

    println!("game     shape        imitation  zero-support");
    for (name, g) in &games {
        g.validate().unwrap();
        let report = g.imitation_report();
        println!(
            "{name:<8} {:<12} {:<10} {}",
            format!(
                "{}x{}x{}x{}",
                g.x_count(),
                g.y_count(),
                g.a_count(),
                g.b_count()
            ),
            report.is_imitation,
            g.zero_support().len(),
        );
    }

    // violation witnesses name the unseparable answer pairs
    let all = corpus::all_game().imitation_report();
    println!("\nall-ones game violations:");
    println!("  alice: {:?}", all.a_violations);
    println!("  bob:   {:?}", all.b_violations);
    assert!(!all.is_imitation);

    // the wire format round-trips bit-exactly
    let chsh = corpus::chsh_game();
    let text = serde_json::to_string_pretty(&chsh).unwrap();
    let back: Game = serde_json::from_str(&text).unwrap();
    assert_eq!(chsh, back);
    assert_eq!(serde_json::to_string_pretty(&back).unwrap(), text);
    println!("\nchsh.json round-trips bit-exactly:\n{text}");

    // role transposition swaps the violation lists
    let transposed = corpus::all_game().transposed().imitation_report();
    assert_eq!(all.a_violations, transposed.b_violations);
    println!("\ntransposition swaps the violation lists: ok");
}
