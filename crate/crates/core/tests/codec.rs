mod common;

use dream_olsr::messages::{decode_packet, encode_packet};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #[test]
    fn packets_round_trip(seed in any::<u64>()) {
        let p = common::random_packet(&mut ChaCha8Rng::seed_from_u64(seed));
        let bytes = encode_packet(&p).unwrap();
        prop_assert_eq!(bytes.len(), p.header.packet_length as usize);
        let back = decode_packet(&bytes).unwrap();
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(encode_packet(&back).unwrap(), bytes);
    }

    #[test]
    fn truncations_are_rejected_without_panicking(seed in any::<u64>(), cut in any::<prop::sample::Index>()) {
        let p = common::random_packet(&mut ChaCha8Rng::seed_from_u64(seed));
        let bytes = encode_packet(&p).unwrap();
        let cut = cut.index(bytes.len());
        let r = decode_packet(&bytes[..cut]);
        prop_assert!(r.is_err());
        prop_assert!(r.unwrap_err().offset <= cut);
    }

    #[test]
    fn arbitrary_bytes_never_panic(bytes in proptest::collection::vec(any::<u8>(), 0..200)) {
        let _ = decode_packet(&bytes);
    }
}
