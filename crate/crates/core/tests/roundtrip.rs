use conlab_core::formula::{godel_decode, godel_encode, parse, print};
use conlab_core::gen;
use conlab_core::modal::parse_modal;
use proptest::prelude::*;

proptest! {
    #[test]
    fn print_then_parse_is_identity(seed in any::<u64>(), size in 0u32..8) {
        let f = gen::random_sentence(&mut gen::rng(seed), size);
        prop_assert_eq!(parse(&print(&f)).unwrap(), f);
    }

    #[test]
    fn godel_numbering_round_trips(seed in any::<u64>(), size in 0u32..6) {
        let f = gen::random_sentence(&mut gen::rng(seed), size);
        prop_assert_eq!(godel_decode(&godel_encode(&f)).unwrap(), f);
    }

    #[test]
    fn distinct_sentences_get_distinct_codes(a in any::<u64>(), b in any::<u64>()) {
        let f = gen::random_sentence(&mut gen::rng(a), 4);
        let g = gen::random_sentence(&mut gen::rng(b), 4);
        prop_assert_eq!(f == g, godel_encode(&f) == godel_encode(&g));
    }

    #[test]
    fn modal_display_reparses(seed in any::<u64>(), size in 0usize..10) {
        let f = gen::random_modal(&mut gen::rng(seed), size, 3);
        prop_assert_eq!(parse_modal(&f.to_string()).unwrap(), f);
    }
}
