//! Measured growth bounds for the word algorithms. These are regression
//! pins, not theorems: factor_t stays within 6 letters per caret (worst
//! observed ratio 35/6) and transport words grow at most linearly in depth.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tb_core::lamination::{arcs_to_level, gap_depth, GapId};
use tb_core::thompson_t::{eval_t_word, factor_t, TGen, TLetter};
use tb_core::words::transport_gap_to_center;

const LETTERS_PER_CARET: usize = 6;

#[test]
fn factor_t_is_linear_in_carets() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..500 {
        let len = rng.gen_range(0..=16);
        let word: Vec<TLetter> = (0..len)
            .map(|_| TLetter {
                gen: [TGen::B, TGen::G, TGen::D][rng.gen_range(0..3)],
                inverse: rng.gen(),
            })
            .collect();
        let t = eval_t_word(&word);
        let factored = factor_t(&t);
        assert_eq!(eval_t_word(&factored), t);
        assert!(
            factored.len() <= LETTERS_PER_CARET * t.caret_count() + 1,
            "{} letters for {} carets",
            factored.len(),
            t.caret_count()
        );
    }
}

#[test]
fn transport_is_linear_in_depth() {
    for arc in arcs_to_level(8) {
        let gap = GapId::Behind(arc);
        let w = transport_gap_to_center(&gap);
        assert!(w.len() <= 2 * gap_depth(&gap) + 16, "{}: {} letters", gap, w.len());
        assert!(w.alpha_exponent().unsigned_abs() as usize >= 1);
    }
}
