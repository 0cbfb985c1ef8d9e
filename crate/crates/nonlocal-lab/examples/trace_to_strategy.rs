//! From a density and generator images to a correlation, its GNS
//! representation, and an explicit two-factor strategy.
//!
//! Run: `cargo run --example trace_to_strategy`

use nonlocal_lab::construct::{
    amenability_functional, correlation_from_trace, enumerate_gen_words, gns, tensor_realization,
    trace_property_check, HomSpec, TraceSpec,
};
use nonlocal_lab::corpus;
use nonlocal_lab::linalg::{haar_unitary, CMatrix};
use nonlocal_lab::strategy::{conjugated_partition_pvm, correlation_from_tensor};
use nonlocal_lab::DEFAULT_TOL;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    // normalized trace on 2x2 matrices with computational generator images
    let trace = TraceSpec::normalized_trace(2);
    let comp = conjugated_partition_pvm(&CMatrix::identity(2), 2, DEFAULT_TOL).unwrap();
    let hom = HomSpec::new(2, vec![comp.clone()], vec![comp], DEFAULT_TOL).unwrap();
    let game = corpus::copy_game();

    // the functional is tracial on every word pair
    let tp = trace_property_check(&trace, &hom, 4, 1e-12).unwrap();
    println!(
        "normalized trace: word-trace defect {:.2e} over {} pairs",
        tp.max_defect, tp.pairs_checked
    );
    assert!(tp.pass);

    // its correlation is the perfect copy correlation
    let c = correlation_from_trace(&trace, &hom, &game).unwrap();
    println!(
        "trace correlation: p(0,0) = {}, p(0,1) = {}",
        c.get(0, 0, 0, 0),
        c.get(0, 0, 0, 1)
    );
    assert!(c.perfect_report(&game, 1e-12).unwrap().pass);

    // GNS by purification: 4-dimensional space, maximally entangled cyclic
    // vector, left-multiplication images
    let g = gns(&trace, &hom, 1e-12).unwrap();
    println!(
        "gns: dim {}, rank {}, fidelity defect {:.2e}",
        g.hilbert_dim, g.rank, g.fidelity_defect
    );
    assert_eq!(g.hilbert_dim, 4);
    assert!(g.fidelity_defect <= 1e-12);

    // explicit strategy reproducing the correlation
    let s = tensor_realization(&trace, &hom, &game).unwrap();
    let realized = correlation_from_tensor(&s, &game).unwrap();
    let distance = realized.distance(&c).unwrap();
    println!("tensor realization round trip: distance {distance:.2e}");
    assert!(distance <= 1e-12);

    // a singular density: the GNS space quotients down
    let vector_state = TraceSpec::new(CMatrix::from_diag(&[1.0, 0.0]), DEFAULT_TOL).unwrap();
    let comp = conjugated_partition_pvm(&CMatrix::identity(2), 2, DEFAULT_TOL).unwrap();
    let hom2 = HomSpec::new(2, vec![comp.clone()], vec![comp], DEFAULT_TOL).unwrap();
    let g = gns(&vector_state, &hom2, 1e-10).unwrap();
    println!(
        "vector state |0><0|: gns dim {} after the quotient (rank {})",
        g.hilbert_dim, g.rank
    );
    assert_eq!(g.hilbert_dim, 2);

    // a seeded block-diagonal instance, like the ones in the acceptance run
    let (t, h, shape_game) = corpus::planted_trace_instance(11);
    let (defect, _) = h.cross_commutation_defect();
    println!(
        "\nplanted instance: dim {}, cross-commutation defect {:.2e}",
        h.dim(),
        defect
    );
    let s = tensor_realization(&t, &h, &shape_game).unwrap();
    let realized = correlation_from_tensor(&s, &shape_game).unwrap();
    let direct = correlation_from_trace(&t, &h, &shape_game).unwrap();
    println!(
        "  realization distance {:.2e}, non-signalling discrepancy {:.2e}",
        realized.distance(&direct).unwrap(),
        realized.nonsignalling_report(1e-9).max_discrepancy
    );
    assert!(realized.distance(&direct).unwrap() <= 1e-9);

    // boundedness margins of the product functional on random-ish words
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let u = haar_unitary(4, &mut rng);
    let hom4 = HomSpec::new(
        4,
        vec![conjugated_partition_pvm(&u, 2, DEFAULT_TOL).unwrap()],
        vec![conjugated_partition_pvm(&CMatrix::identity(4), 2, DEFAULT_TOL).unwrap()],
        DEFAULT_TOL,
    )
    .unwrap();
    let trace4 = TraceSpec::normalized_trace(4);
    let words = enumerate_gen_words(&hom4, 2);
    let am = amenability_functional(&trace4, &hom4, &words[..12], 1e-10).unwrap();
    println!(
        "\nproduct functional on {} word pairs: min margin {:.3e} (pass: {})",
        am.pairs_checked, am.min_margin, am.pass
    );
    assert!(am.pass);
}
