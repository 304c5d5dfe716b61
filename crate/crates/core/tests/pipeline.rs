use std::sync::Arc;

use sbraid_core::braid_presentations::{eta_expand, split_singular, BraidWord};
use sbraid_core::desing::{decode, nu, FormalSum};
use sbraid_core::k_group::KGroup;
use sbraid_core::trace_monoid::{hat_graphs, phi_iso, TraceWord};

/// Singular word → split → φ → ν → decode lands back on the φ-image.
fn round_trip(text: &str, n: usize) {
    let w = BraidWord::parse(text, n, 1).unwrap().delta_substitute();
    let split = split_singular(&w).unwrap();
    split.certify(&w).unwrap();
    let k = KGroup::with_default_table(n, 1).unwrap();
    let (hat, omega) = hat_graphs(&k, &split.trace).unwrap();
    let hat_word = TraceWord::new(Arc::new(hat), split.trace.clone()).unwrap();
    let image = phi_iso(&k, &hat_word, &Arc::new(omega)).unwrap();
    let p = nu(&k, image.letters()).unwrap();
    let decoded = decode(&k, &p).unwrap();
    let image_on_decoded = TraceWord::new(decoded.graph().clone(), image.letters().to_vec()).unwrap();
    assert!(image_on_decoded.trace_equal(&decoded).unwrap(), "{text}: {image} vs {decoded}");
}

#[test]
fn split_phi_nu_decode() {
    round_trip("a1 d1", 3);
    round_trip("d2 a1 d1 a2", 3);
    round_trip("d1 a1 d1 s2", 3);
    round_trip("d1 d3 a1^-1 d1", 4);
}

#[test]
fn tau_words_go_through_delta_form() {
    round_trip("d2 t1 t1", 3);
    round_trip("a1 t1", 3);
}

#[test]
fn conjugators_outside_the_fragment_are_rejected() {
    let w = BraidWord::parse("t2 a1 t1", 3, 1).unwrap().delta_substitute();
    let split = split_singular(&w).unwrap();
    let k = KGroup::with_default_table(3, 1).unwrap();
    assert_eq!(hat_graphs(&k, &split.trace).unwrap_err().code(), "trace_monoid::unrepresentable");
}

#[test]
fn json_sum_survives_the_wire() {
    let k = KGroup::with_default_table(3, 1).unwrap();
    let letters = vec![k.parse_element("b[x1;2]@3").unwrap(), k.parse_element("b[1;3]@3").unwrap()];
    let p = nu(&k, &letters).unwrap();
    let back = FormalSum::from_json(&p.to_json().to_string(), &k).unwrap();
    assert_eq!(back, p);
    assert_eq!(decode(&k, &back).unwrap().letters(), &letters[..]);
}

#[test]
fn eta_of_a_product_has_one_term_per_resolution() {
    let w = BraidWord::parse("t1 d2 t1", 3, 1).unwrap();
    assert_eq!(eta_expand(&w).terms.len(), 8);
}
