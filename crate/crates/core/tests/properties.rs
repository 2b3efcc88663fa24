use num_bigint::BigUint;
use proptest::prelude::*;

use synthcycle::capacity::{cap_fixed_length, cap_flexible, empirical_cap};
use synthcycle::codec::{decode_batch, BitString, Codec, EncodedBatch, Scheme};
use synthcycle::counting::{brute_force_count, subsequence_count, SubsequenceRanker};
use synthcycle::sequence::{min_cycles_under, synthesis_cycles};
use synthcycle::{Alphabet, Oligo, SupersequenceSpec};

fn codec_strategy() -> impl Strategy<Value = Codec> {
    prop_oneof![
        (2u32..=5, 1u64..=6).prop_map(|(q, d)| Codec::lookup(q, 2 * d, 0.5).unwrap()),
        (2u32..=6, 2usize..=20).prop_map(|(q, l)| Codec::base(q, l).unwrap()),
        (3u32..=6, 0.5f64..0.9, 8usize..=40).prop_filter_map("empty part", |(q, r, l)| Codec::multisize(q, r, l).ok()),
        prop::sample::select(vec![4u32, 5, 6, 8, 16, 32]).prop_map(|q| Codec::balanced(q).unwrap()),
        (2u32..=16).prop_map(|q| Codec::window(q).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn batches_roundtrip_through_json(codec in codec_strategy(), bits in prop::collection::vec(any::<bool>(), 0..300)) {
        let payload = BitString::from_bits(bits);
        let batch = codec.encode(&payload).unwrap();
        prop_assert!(batch.fits_cycle_budget());
        let parsed = EncodedBatch::from_json(&batch.to_json()).unwrap();
        prop_assert_eq!(decode_batch(&parsed).unwrap(), payload);
    }

    #[test]
    fn oligo_cost_matches_program_embedding(q in 2u32..7, symbols in prop::collection::vec(1u32..7, 0..30)) {
        let a = Alphabet::new(q).unwrap();
        let symbols: Vec<u32> = symbols.into_iter().map(|s| (s - 1) % q + 1).collect();
        let o = Oligo::new(a, symbols.clone()).unwrap();
        let c = synthesis_cycles(&o);
        let spec = SupersequenceSpec::alternating(a, c);
        prop_assert_eq!(min_cycles_under(&spec, &symbols), Some(c));
        if c > 0 {
            let short = SupersequenceSpec::alternating(a, c - 1);
            prop_assert_eq!(min_cycles_under(&short, &symbols), None);
        }
    }

    #[test]
    fn rank_unrank_inverse(q in 2u32..6, cycles in 1u64..40, frac in 0.0f64..=1.0, pick in any::<u64>()) {
        let length = (cycles as f64 * frac).floor() as usize;
        let r = SubsequenceRanker::new(Alphabet::new(q).unwrap(), cycles, length).unwrap();
        let idx = BigUint::from(pick) % r.count();
        let o = r.unrank(&idx).unwrap();
        prop_assert_eq!(o.len(), length);
        prop_assert!(synthesis_cycles(&o) <= cycles);
        prop_assert_eq!(r.rank(o.symbols()).unwrap(), idx);
    }

    #[test]
    fn empirical_below_bound(q in 2u32..6, cycles in 10u64..120, rho in 0.05f64..0.95) {
        // log2 M_q(C, ρC) / C never exceeds the closed form by more than O(log C / C)
        let e = empirical_cap(q, cycles, rho).unwrap();
        let c = cap_fixed_length(q, rho).unwrap();
        prop_assert!(e <= c + 2.0 * (cycles as f64).log2() / cycles as f64);
        prop_assert!(c <= cap_flexible(q).unwrap() + 1e-12);
    }
}

#[test]
fn counting_matches_brute_force_small() {
    for q in 1..=4u32 {
        for c in 0..=12u64 {
            for l in 0..=c {
                assert_eq!(subsequence_count(q, c, l).unwrap(), brute_force_count(q, c, l).unwrap());
            }
        }
    }
}

#[test]
fn scheme_of_each_codec() {
    let codecs = [
        (Codec::lookup(4, 2, 0.5).unwrap(), Scheme::Lookup),
        (Codec::base(4, 8).unwrap(), Scheme::Base),
        (Codec::multisize(5, 0.45, 24).unwrap(), Scheme::Multisize),
        (Codec::balanced(8).unwrap(), Scheme::Balanced),
        (Codec::window(4).unwrap(), Scheme::Window),
    ];
    for (codec, scheme) in codecs {
        assert_eq!(codec.scheme(), scheme);
        assert_eq!(codec.profile().scheme, scheme);
    }
}

#[test]
fn multisize_finite_length_rates() {
    let r_star = synthcycle::codec::multisize_rate(5, 0.45).unwrap();
    for (l, tol) in [(24usize, 0.15), (48, 0.08), (96, 0.04)] {
        let p = Codec::multisize(5, 0.45, l).unwrap().profile();
        assert!(p.rate <= cap_fixed_length(5, 0.45).unwrap());
        assert!((r_star - p.rate) / r_star <= tol, "L={l}: rate {} vs {r_star}", p.rate);
    }
}
