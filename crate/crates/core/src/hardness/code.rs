//! Greedy construction of well-separated binary codes.

use crate::error::{Error, Result};

/// Longest code length the greedy scan will attempt (the scan visits all
/// 2^length words and keeps a bitset of that size).
pub const MAX_CODE_LENGTH: usize = 24;

/// The default pairwise distance target, `ceil(length / 8)`; the greedy
/// construction at this distance always yields at least `2^(length/8)` words.
pub fn default_code_distance(length: usize) -> usize {
    length.div_ceil(8)
}

/// A set of binary words of fixed length with verified minimum pairwise
/// Hamming distance. Words are stored as bitmasks; bit `j` is coordinate `j`.
#[derive(Debug, Clone)]
pub struct BinaryCode {
    pub length: usize,
    pub words: Vec<u32>,
    /// Exact minimum pairwise Hamming distance, verified exhaustively.
    pub min_distance: usize,
}

impl BinaryCode {
    pub fn card(&self) -> usize {
        self.words.len()
    }

    /// Word `i` as a 0/1 vector.
    pub fn word_bits(&self, i: usize) -> Vec<u8> {
        (0..self.length)
            .map(|j| ((self.words[i] >> j) & 1) as u8)
            .collect()
    }

    /// Word `i` as a string of '0'/'1' characters, coordinate 0 first.
    pub fn word_string(&self, i: usize) -> String {
        (0..self.length)
            .map(|j| {
                if (self.words[i] >> j) & 1 == 1 {
                    '1'
                } else {
                    '0'
                }
            })
            .collect()
    }

    pub fn hamming(&self, i: usize, k: usize) -> usize {
        (self.words[i] ^ self.words[k]).count_ones() as usize
    }

    /// Largest pairwise Hamming distance (full pairwise scan).
    pub fn max_distance(&self) -> usize {
        let mut best = 0u32;
        for (i, &a) in self.words.iter().enumerate() {
            for &b in &self.words[i + 1..] {
                best = best.max((a ^ b).count_ones());
            }
        }
        best as usize
    }
}

/// Greedy lexicographic code construction: scan all words of `{0,1}^length`
/// in counting order and keep a word exactly when its Hamming distance to
/// every kept word is at least `target_distance`.
///
/// The pairwise distance of the result is verified exhaustively (every kept
/// word is probed against the full radius-(d-1) ball around it), and the
/// exact minimum distance achieved is recorded. For the default distance the
/// construction is checked to contain at least `2^(length/8)` words.
///
/// Lengths below 8 are refused: small dictionaries use a two-point truth set
/// instead of a code.
pub fn vg_code(length: usize, target_distance: usize) -> Result<BinaryCode> {
    if length < 8 {
        return Err(Error::Domain(format!(
            "code construction needs length >= 8 (got {length}); \
             use the two-point truth set for smaller dictionaries"
        )));
    }
    if length > MAX_CODE_LENGTH {
        return Err(Error::BudgetExceeded {
            count: 1u128 << length,
            budget: 1u128 << MAX_CODE_LENGTH,
        });
    }
    if target_distance == 0 || target_distance > length {
        return Err(Error::InvalidInput(format!(
            "target distance must lie in 1..={length}, got {target_distance}"
        )));
    }

    let total = 1usize << length;
    let mut blocked = vec![false; total];
    let mut words: Vec<u32> = Vec::new();
    let radius = target_distance - 1;
    let mut flips: Vec<u32> = Vec::new();
    collect_flip_masks(length, radius, &mut flips);

    for v in 0..total as u32 {
        if blocked[v as usize] {
            continue;
        }
        words.push(v);
        // Block everything strictly closer than the target distance.
        for &f in &flips {
            blocked[(v ^ f) as usize] = true;
        }
    }

    // Exhaustive pairwise verification: any violating pair (a, b) with
    // distance < target has b = a ^ f for some flip mask f, so probing every
    // kept word against its ball covers all pairs.
    let kept: Vec<bool> = {
        let mut k = vec![false; total];
        for &w in &words {
            k[w as usize] = true;
        }
        k
    };
    for &w in &words {
        for &f in &flips {
            if f != 0 && kept[(w ^ f) as usize] {
                return Err(Error::InvalidInput(format!(
                    "construction violated its own distance bound at word {w:#x}"
                )));
            }
        }
    }

    // Exact minimum distance: probe outward shells starting at the target.
    let mut min_distance = 0;
    'outer: for dist in target_distance..=length {
        let mut shell: Vec<u32> = Vec::new();
        collect_exact_flip_masks(length, dist, &mut shell);
        for &w in &words {
            for &f in &shell {
                if kept[(w ^ f) as usize] {
                    min_distance = dist;
                    break 'outer;
                }
            }
        }
    }
    if min_distance == 0 {
        // A single word has no pairwise distance; cannot happen for
        // length >= 8 since 0 and the all-ones word are always kept.
        return Err(Error::InvalidInput("degenerate single-word code".into()));
    }

    if target_distance == default_code_distance(length) {
        let guarantee = 2f64.powf(length as f64 / 8.0);
        if (words.len() as f64) < guarantee {
            return Err(Error::InvalidInput(format!(
                "greedy code of length {length} has {} words, below the 2^(M/8) = {guarantee} guarantee",
                words.len()
            )));
        }
    }

    Ok(BinaryCode {
        length,
        words,
        min_distance,
    })
}

/// All XOR masks with 0..=radius bits set (the Hamming ball around zero).
fn collect_flip_masks(length: usize, radius: usize, out: &mut Vec<u32>) {
    out.push(0);
    for r in 1..=radius {
        collect_exact_flip_masks(length, r, out);
    }
}

/// All XOR masks with exactly `weight` bits set.
fn collect_exact_flip_masks(length: usize, weight: usize, out: &mut Vec<u32>) {
    fn rec(length: usize, weight: usize, start: usize, acc: u32, out: &mut Vec<u32>) {
        if weight == 0 {
            out.push(acc);
            return;
        }
        for b in start..=(length - weight) {
            rec(length, weight - 1, b + 1, acc | (1 << b), out);
        }
    }
    rec(length, weight, 0, 0, out);
}
