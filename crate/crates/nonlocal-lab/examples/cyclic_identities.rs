//! The cyclic-subspace identities of exact perfect strategies.
//!
//! On the subspace generated from the state by Alice's projectors, the meet
//! family behaves like a PVM (pairwise orthogonal, resolving the identity),
//! the meets reproduce Bob's action on the state, and Alice words equal
//! reversed words of the mirror projections.
//!
//! Run: `cargo run --example cyclic_identities`

use nonlocal_lab::corpus;
use nonlocal_lab::witness::{enumerate_words, restricted_identities, word_reversal_check};
use nonlocal_lab::DEFAULT_TOL;

fn main() {
    println!("copy game, maximally entangled strategy:");
    let game = corpus::copy_game();
    let strategy = corpus::copy_max_entangled_strategy();
    let ids = restricted_identities(&strategy, &game, DEFAULT_TOL).unwrap();
    println!(
        "  cyclic subspace: dim {} of ambient {}",
        ids.cyclic_dim, ids.ambient_dim
    );
    println!(
        "  state identities:   pi {:.2e}, xi {:.2e}",
        ids.pi_state_defect, ids.xi_state_defect
    );
    println!(
        "  partition on K:     orthogonality {:.2e}, resolution {:.2e}",
        ids.orthogonality_defect_on_k, ids.resolution_defect_on_k
    );
    println!(
        "  full-space figures: orthogonality {:.2e}, resolution {:.2e} (reported only)",
        ids.orthogonality_defect_full, ids.resolution_defect_full
    );
    assert!(ids.pass);
    assert_eq!(ids.cyclic_dim, 2); // span{|00>, |11>}

    // the product-state strategy collapses everything to one dimension
    let product = corpus::copy_product_strategy(1);
    let ids = restricted_identities(&product, &game, DEFAULT_TOL).unwrap();
    println!(
        "\ncopy game, product-state strategy: cyclic dim {}",
        ids.cyclic_dim
    );
    assert_eq!(ids.cyclic_dim, 1);
    assert!(ids.pass);

    // word reversal: Alice words act like reversed mirror words on Bob's side
    let words = enumerate_words(game.x_count(), game.a_count(), 3);
    let reversal = word_reversal_check(&strategy, &game, &words, 4, DEFAULT_TOL).unwrap();
    println!(
        "\nword reversal over {} Alice words of length <= 3: max discrepancy {:.2e}",
        words.len(),
        reversal.max_discrepancy
    );
    assert!(reversal.pass);

    // richer planted instances exercise non-diagonal meets
    for seed in [3, 4] {
        let p = corpus::planted_perfect(seed);
        let ids = restricted_identities(&p.strategy, &p.game, DEFAULT_TOL).unwrap();
        let words = enumerate_words(p.game.x_count(), p.game.a_count(), 3);
        let rev = word_reversal_check(&p.strategy, &p.game, &words, 4, DEFAULT_TOL).unwrap();
        println!(
            "planted seed {seed}: cyclic dim {}/{}, identity defects <= {:.2e}, \
             reversal over {} words <= {:.2e}",
            ids.cyclic_dim,
            ids.ambient_dim,
            ids.pi_state_defect
                .max(ids.xi_state_defect)
                .max(ids.orthogonality_defect_on_k)
                .max(ids.resolution_defect_on_k),
            words.len(),
            rev.max_discrepancy
        );
        assert!(ids.pass && rev.pass);
    }

    // the gate: near-perfect is not perfect
    let perturbed = corpus::copy_theta_strategy(0.1);
    let err = restricted_identities(&perturbed, &game, DEFAULT_TOL).unwrap_err();
    println!("\nperturbed strategy is rejected: {err}");
}
