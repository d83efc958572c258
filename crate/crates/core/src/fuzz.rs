//! Deterministic mutations of task files for robustness runs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ALPHABET: &[u8] = b"xyzTt0123456789+-*^/()[],:=;# \nabcQGF_";

const SNIPPETS: &[&str] = &[
    "^64",
    "^999",
    "99999999999999999999",
    "*x^7",
    "[]",
    "[[",
    "]]",
    "()",
    "(0)",
    "T",
    "-",
    "ungraded",
    "rees",
    "twists [-30]",
    "sources [100]",
    "filtration [5]",
    "check lemma1 Mt Mt",
    "check jump J",
    "check baer Kt",
    "module Z = free []",
    "rmodule Z = quotient (T^3, X*T)",
    "probes ungraded (x - 1)",
    "1/0",
    "0/1",
];

/// One random edit: byte deletion, insertion or replacement, a snippet
/// splice, or a line duplication, deletion or swap.
pub fn mutate(text: &str, rng: &mut impl Rng) -> String {
    let mut bytes = text.as_bytes().to_vec();
    let len = bytes.len();
    match rng.gen_range(0..7) {
        0 if len > 0 => {
            let k = rng.gen_range(0..len);
            let end = (k + 1 + rng.gen_range(0..4)).min(len);
            bytes.drain(k..end);
        }
        1 => {
            let k = rng.gen_range(0..=len);
            bytes.insert(k, ALPHABET[rng.gen_range(0..ALPHABET.len())]);
        }
        2 if len > 0 => {
            let k = rng.gen_range(0..len);
            bytes[k] = ALPHABET[rng.gen_range(0..ALPHABET.len())];
        }
        3 => {
            let k = rng.gen_range(0..=len);
            let s = SNIPPETS[rng.gen_range(0..SNIPPETS.len())];
            bytes.splice(k..k, s.bytes());
        }
        _ => {
            let mut lines: Vec<&str> = text.lines().collect();
            if lines.is_empty() {
                return text.to_string();
            }
            let i = rng.gen_range(0..lines.len());
            let j = rng.gen_range(0..lines.len());
            match rng.gen_range(0..3) {
                0 => lines.insert(j, lines[i]),
                1 => {
                    lines.remove(i);
                }
                _ => lines.swap(i, j),
            }
            return lines.join("\n");
        }
    }
    // Byte edits may split a multi-byte character; the parser sees the lossy
    // rendering, which is itself a reasonable fuzz input.
    String::from_utf8_lossy(&bytes).into_owned()
}

/// `count` files, each a base file with one to four stacked mutations.
pub fn fuzzed_corpus(seed: u64, count: usize, bases: &[(&str, &str)]) -> Vec<(String, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| {
            let (name, base) = bases.choose(&mut rng).copied().unwrap_or(("empty", ""));
            let mut text = base.to_string();
            for _ in 0..rng.gen_range(1..=4) {
                text = mutate(&text, &mut rng);
            }
            (format!("fuzz{seed}-{k}-{name}"), text)
        })
        .collect()
}
