use proptest::prelude::*;

use transport_moments::algebra::{Poly, Rational, Series, Var};
use transport_moments::contrib::EndLabel;
use transport_moments::diagrams::{untie, TargetPerm, UntieMode};
use transport_moments::perm::{compose, Carrier, Label, Perm};
use transport_moments::rmt_oracle::{cue_moment, weingarten};
use transport_moments::summation::signature::swap;
use transport_moments::Quantity;

const K: usize = 6;

fn barred_perm() -> impl Strategy<Value = Perm> {
    (1u32..=5).prop_flat_map(|n| {
        Just((0..2 * n).collect::<Vec<u32>>())
            .prop_shuffle()
            .prop_map(move |img| Perm::from_images(n, Carrier::Barred, img).unwrap())
    })
}

fn reduced_perm(n: u32) -> impl Strategy<Value = Perm> {
    Just((0..n).collect::<Vec<u32>>())
        .prop_shuffle()
        .prop_map(move |img| Perm::from_images(n, Carrier::Reduced, img).unwrap())
}

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec(-4i64..=4, 0..3).prop_map(|c| Poly::from_ints(&c))
}

fn series() -> impl Strategy<Value = Series> {
    prop::collection::vec(poly(), 0..=K + 1).prop_map(|c| Series::from_coeffs(Var::S, K, c))
}

/// Constant term one.
fn unit_series() -> impl Strategy<Value = Series> {
    series().prop_map(|mut s| {
        s.set_coeff(0, Poly::one());
        s
    })
}

proptest! {
    #[test]
    fn perm_inverse(p in barred_perm()) {
        let id = Perm::identity(p.points(), p.carrier());
        prop_assert_eq!(compose(&p, &p.inverse()).unwrap(), id.clone());
        prop_assert_eq!(compose(&p.inverse(), &p).unwrap(), id);
    }

    #[test]
    fn reversal_is_involution(p in barred_perm()) {
        prop_assert_eq!(p.reversal().unwrap().reversal().unwrap(), p);
    }

    #[test]
    fn reversal_by_conjugation(p in barred_perm()) {
        let t = Perm::bar_map(p.points());
        let conj = compose(&t, &compose(&p, &t).unwrap()).unwrap();
        prop_assert_eq!(conj, p.reversal().unwrap().inverse());
    }

    #[test]
    fn cycle_lengths_cover_carrier(p in barred_perm()) {
        prop_assert_eq!(p.cycle_type().iter().sum::<usize>(), p.len());
    }

    #[test]
    fn ring_axioms(a in series(), b in series(), c in series()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&(&(&a + &b) - &b) - &a).is_zero());
    }

    #[test]
    fn sqrt_and_inverse(a in unit_series()) {
        let r = a.sqrt().unwrap();
        prop_assert_eq!(&r * &r, a.clone());
        prop_assert_eq!(&a * &a.inverse().unwrap(), Series::one(Var::S, K));
    }

    #[test]
    fn leibniz(a in series(), b in series()) {
        let lhs = (&a * &b).s_d_ds().unwrap();
        let rhs = &(&a.s_d_ds().unwrap() * &b) + &(&a * &b.s_d_ds().unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn signature_swap_is_involution(lanes in prop::collection::vec(0u32..32, 23)) {
        let key = lanes.iter().enumerate().fold(0u128, |k, (i, &v)| k | (v as u128) << (5 * i));
        prop_assert_eq!(swap(swap(key)), key);
    }

    #[test]
    fn untie_keeps_palindromes_and_erases_to_unitary(
        (tau, key) in (3u32..=6).prop_flat_map(|n| (reduced_perm(n), Just((1..=n).collect::<Vec<u32>>()).prop_shuffle()))
            .prop_flat_map(|(t, idx)| { let n = idx.len(); (Just(t), Just(idx), 2..=n) })
            .prop_map(|(t, idx, k)| (t, idx[..k].iter().map(|&i| Label::plain(i)).collect::<Vec<_>>()))
    ) {
        let red = TargetPerm::reduced(tau).unwrap();
        let full = red.lift().unwrap();
        let orth = untie(&full, &key, UntieMode::Orthogonal).unwrap();
        prop_assert!(orth.perm.is_palindromic());
        prop_assert_eq!(orth.erase().unwrap(), untie(&red, &key, UntieMode::UnitaryI).unwrap());
        let barred: Vec<Label> = key.iter().map(|l| l.flip()).collect();
        let orth = untie(&full, &barred, UntieMode::Orthogonal).unwrap();
        prop_assert_eq!(orth.erase().unwrap(), untie(&red, &barred, UntieMode::UnitaryO).unwrap());
    }

    #[test]
    fn gram_relation(n in 1usize..=3, extra in 1i64..20) {
        let w = weingarten(n, n as i64 + extra).unwrap();
        prop_assert_eq!(w.gram_residual(), Rational::from_integer(0.into()));
    }

    #[test]
    fn transmission_moments_symmetric(n in 1usize..=3, n1 in 1i64..6, n2 in 1i64..6) {
        prop_assume!(n1 + n2 > n as i64);
        prop_assert_eq!(cue_moment(n, n1, n2, Quantity::Transmission).unwrap(), cue_moment(n, n2, n1, Quantity::Transmission).unwrap());
    }
}

#[test]
fn label_involutions() {
    for l in [EndLabel::I, EndLabel::O, EndLabel::IO, EndLabel::OI] {
        assert_eq!(l.tilde().tilde(), l);
        assert_eq!(l.hat().hat(), l);
        assert_eq!(l.tilde().hat(), l.hat().tilde());
    }
}
