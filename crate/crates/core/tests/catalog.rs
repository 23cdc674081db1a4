use illposed_core::operators::{
    block_product, compose, diagonal, diagonal_on, embedding, harmonic_weights, identity,
    injective_counterexample, mazur, Decay,
};
use illposed_core::{catalog, classify, DirectionSet, EnumerationParams, TruncatedOperator, Verdict};

fn constructed() -> Vec<(&'static str, TruncatedOperator)> {
    let set = DirectionSet::prefix(EnumerationParams::default(), 60).unwrap();
    let b = mazur(set.as_slice(), 60, set.max_support_len(60)).unwrap();
    let rows = b.n_rows();
    let e = embedding(2.0, 4.0, rows).unwrap();
    let c = diagonal_on(2.0, &harmonic_weights(rows), Decay::Vanishing).unwrap();
    let i = identity(2.0, rows).unwrap();
    let d1 = block_product(&c, &i).unwrap();
    let d2 = block_product(&i, &c).unwrap();
    vec![
        ("B", b.clone()),
        ("E_2^p", e.clone()),
        ("diag", diagonal(&harmonic_weights(20), Decay::Vanishing).unwrap()),
        ("E∘B", compose(&e, &b).unwrap()),
        ("C∘B", compose(&c, &b).unwrap()),
        ("(B,I)", block_product(&b, &i).unwrap()),
        ("D1", d1.clone()),
        ("D2", d2.clone()),
        ("D2∘D1", compose(&d2, &d1).unwrap()),
        ("injective_counterexample", injective_counterexample(20).unwrap()),
    ]
}

#[test]
fn catalog_matches_constructed_operators() {
    let entries = catalog();
    let built = constructed();
    assert_eq!(entries.len(), built.len());
    for (entry, (name, op)) in entries.iter().zip(&built) {
        assert_eq!(entry.name, *name);
        assert_eq!(&entry.attributes, op.attributes(), "{name}");
    }
}

#[test]
fn composition_triple_crosses_the_dividing_line() {
    let built = constructed();
    let verdict = |name: &str| {
        let (_, op) = built.iter().find(|(n, _)| *n == name).unwrap();
        classify(op.attributes()).verdict
    };
    assert_eq!(
        [verdict("D1"), verdict("D2"), verdict("D2∘D1")],
        [Verdict::IllPosedTypeI, Verdict::IllPosedTypeI, Verdict::IllPosedTypeII]
    );
}

#[test]
fn catalog_round_trips_through_json() {
    let entries = catalog();
    let text = serde_json::to_string(&entries).unwrap();
    let back: Vec<illposed_core::CatalogEntry> = serde_json::from_str(&text).unwrap();
    assert_eq!(back, entries);
}
