use transport_moments::basegen::{catalogue, Catalogue};
use transport_moments::summation::{assemble_with, table_for, SignatureTable};
use transport_moments::{Quantity, Symmetry};

#[test]
fn orientable_subset_reproduces_unitary() {
    for g2 in [2, 4] {
        let orth = catalogue(g2, Symmetry::Orthogonal, None).unwrap();
        let orientable: Catalogue = orth
            .into_iter()
            .map(|(m, l)| (m, l.into_iter().filter(|b| b.orientable).collect::<Vec<_>>()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        let mut from_orth = SignatureTable::with_symmetry(g2, Symmetry::Unitary);
        from_orth.add_catalogue(&orientable).unwrap();
        let unitary = table_for(g2, Symmetry::Unitary, &catalogue(g2, Symmetry::Unitary, None).unwrap()).unwrap().unwrap();
        for q in [Quantity::Transmission, Quantity::Reflection] {
            let a = assemble_with(g2, Symmetry::Unitary, q, 8, Some(&from_orth)).unwrap();
            let b = assemble_with(g2, Symmetry::Unitary, q, 8, Some(&unitary)).unwrap();
            assert_eq!(a.series, b.series, "{q} 2g={g2}");
        }
    }
}

#[test]
fn table_reuse_across_truncations() {
    let cat = catalogue(3, Symmetry::Orthogonal, None).unwrap();
    let t = table_for(3, Symmetry::Orthogonal, &cat).unwrap().unwrap();
    let long = assemble_with(3, Symmetry::Orthogonal, Quantity::Reflection, 10, Some(&t)).unwrap();
    let short = assemble_with(3, Symmetry::Orthogonal, Quantity::Reflection, 5, Some(&t)).unwrap();
    assert_eq!(long.series.truncate(5), short.series);
}

#[test]
fn wrong_table_is_rejected() {
    let cat = catalogue(2, Symmetry::Orthogonal, None).unwrap();
    let t = table_for(2, Symmetry::Orthogonal, &cat).unwrap().unwrap();
    assert!(assemble_with(3, Symmetry::Orthogonal, Quantity::Transmission, 4, Some(&t)).is_err());
    assert!(assemble_with(2, Symmetry::Unitary, Quantity::Transmission, 4, Some(&t)).is_err());
}
