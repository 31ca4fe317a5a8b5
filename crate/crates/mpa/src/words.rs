//! Enumeration of input words over an alphabet, in a canonical order:
//! shorter words first, then lexicographically in alphabet order. The order
//! is what makes oracle counterexamples deterministic.

use crate::stream::{Character, Stream};

/// Number of words of exactly `len` characters over an alphabet of
/// `alphabet_len` characters. Panics when the count overflows `u64`; bounded
/// checks at such depths would never terminate anyway.
pub fn word_count(alphabet_len: usize, len: usize) -> u64 {
    (alphabet_len as u64)
        .checked_pow(len as u32)
        .expect("word count overflows u64; lower the depth")
}

/// The `index`-th word of length `len`, counting in canonical order.
pub fn word_at(alphabet: &[Character], len: usize, index: u64) -> Stream {
    let base = alphabet.len() as u64;
    let mut items = Vec::with_capacity(len);
    for position in (0..len).rev() {
        let digit = (index / base.pow(position as u32)) % base;
        items.push(alphabet[digit as usize].clone());
    }
    Stream::new(items)
}

/// All words with length from 0 through `max_len`, in canonical order.
pub fn words_up_to(
    alphabet: &[Character],
    max_len: usize,
) -> impl Iterator<Item = Stream> + '_ {
    (0..=max_len).flat_map(move |len| {
        let count = if alphabet.is_empty() && len > 0 {
            0
        } else {
            word_count(alphabet.len(), len)
        };
        (0..count).map(move |index| word_at(alphabet, len, index))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alphabet(tokens: &str) -> Vec<Character> {
        tokens
            .split_whitespace()
            .map(|t| Character::new(t).unwrap())
            .collect()
    }

    #[test]
    fn enumerates_in_canonical_order() {
        let ab = alphabet("a b");
        let words: Vec<String> = words_up_to(&ab, 2).map(|w| w.to_string()).collect();
        assert_eq!(words, ["", "a", "b", "a a", "a b", "b a", "b b"]);
    }

    #[test]
    fn counts_match_enumeration() {
        let abc = alphabet("a b c");
        for len in 0..=4 {
            let full: Vec<_> = (0..word_count(3, len))
                .map(|i| word_at(&abc, len, i))
                .collect();
            assert_eq!(full.len() as u64, word_count(3, len));
            assert!(full.iter().all(|w| w.len() == len));
        }
        assert_eq!(words_up_to(&abc, 4).count() as u64, 1 + 3 + 9 + 27 + 81);
    }

    #[test]
    fn empty_alphabet_has_only_the_empty_word() {
        let none: Vec<Character> = Vec::new();
        let words: Vec<_> = words_up_to(&none, 3).collect();
        assert_eq!(words, [Stream::empty()]);
    }
}
