//! Lattice words, uniform multiset shuffles and the cycle lemma.
//!
//! A word over `{+1, -1, 0}` with total sum `h > 0` has exactly `h` cyclic
//! rotations whose nonempty prefixes all have positive sum. Such a rotation
//! starts with an up step; dropping it leaves a path with nonnegative
//! prefix heights ending at `h - 1`.

use std::fmt;

use crate::rng::UniformSource;
use crate::{contract, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    Up,
    Down,
    Flat,
}

impl Step {
    pub fn delta(self) -> i64 {
        match self {
            Step::Up => 1,
            Step::Down => -1,
            Step::Flat => 0,
        }
    }
}

/// Letter counts of a lattice word.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct StepCounts {
    pub up: u64,
    pub down: u64,
    pub flat: u64,
}

impl StepCounts {
    pub fn new(up: u64, down: u64, flat: u64) -> Self {
        StepCounts { up, down, flat }
    }

    pub fn len(&self) -> u64 {
        self.up + self.down + self.flat
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn height(&self) -> i64 {
        self.up as i64 - self.down as i64
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeWord {
    steps: Vec<Step>,
    counts: StepCounts,
}

impl LatticeWord {
    pub fn new(steps: Vec<Step>) -> Self {
        let mut counts = StepCounts::default();
        for s in &steps {
            match s {
                Step::Up => counts.up += 1,
                Step::Down => counts.down += 1,
                Step::Flat => counts.flat += 1,
            }
        }
        LatticeWord { steps, counts }
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn counts(&self) -> StepCounts {
        self.counts
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Final height, `#up - #down`.
    pub fn height(&self) -> i64 {
        self.counts.height()
    }

    /// Renders with `U` and `D` for the slopes and `flat` for flat steps.
    pub fn render(&self, flat: char) -> String {
        self.steps
            .iter()
            .map(|s| match s {
                Step::Up => 'U',
                Step::Down => 'D',
                Step::Flat => flat,
            })
            .collect()
    }

    /// Inverse of [`render`](LatticeWord::render).
    pub fn parse(text: &str, flat: char) -> Option<Self> {
        text.chars()
            .map(|c| match c {
                'U' => Some(Step::Up),
                'D' => Some(Step::Down),
                c if c == flat => Some(Step::Flat),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(LatticeWord::new)
    }

    fn rotated(&self, start: usize) -> Vec<Step> {
        let mut out = Vec::with_capacity(self.steps.len());
        out.extend_from_slice(&self.steps[start..]);
        out.extend_from_slice(&self.steps[..start]);
        out
    }
}

impl fmt::Display for LatticeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render('F'))
    }
}

/// Uniform arrangement of a multiset given by per-letter counts.
///
/// Each position takes letter `j` with probability proportional to how many
/// copies of it remain, using one `random(remaining)` call per position.
pub fn shuffle_indices(counts: &[u64], src: &mut UniformSource) -> Vec<u8> {
    let mut left = counts.to_vec();
    let mut total: u64 = left.iter().sum();
    let mut out = Vec::with_capacity(total as usize);
    while total > 0 {
        let mut r = src.random(total);
        let mut letter = 0;
        while r >= left[letter] {
            r -= left[letter];
            letter += 1;
        }
        left[letter] -= 1;
        total -= 1;
        out.push(letter as u8);
    }
    out
}

/// Uniform word with the given numbers of up, down and flat steps.
pub fn shuffle_multiset(counts: StepCounts, src: &mut UniformSource) -> LatticeWord {
    const LETTERS: [Step; 3] = [Step::Up, Step::Down, Step::Flat];
    let order = shuffle_indices(&[counts.up, counts.down, counts.flat], src);
    LatticeWord::new(order.into_iter().map(|j| LETTERS[j as usize]).collect())
}

/// Start indices of the rotations whose nonempty prefixes all have
/// strictly positive sum, in increasing order.
///
/// With prefix sums `S_0 = 0, ..., S_L = h` extended by `S_{L+j} = h + S_j`,
/// start `p` is good iff `S_p < S_j` for every `p < j <= p + L`. This is
/// checked with a suffix minimum over `(p, L]` and a prefix minimum over
/// `[1, p]`, in linear time.
pub fn good_rotations(word: &LatticeWord) -> Result<Vec<usize>> {
    let h = word.height();
    if h <= 0 {
        return contract(format!("cycle lemma needs a positive sum, got {h}"));
    }
    let len = word.len();
    let mut prefix = Vec::with_capacity(len + 1);
    prefix.push(0i64);
    for s in word.steps() {
        prefix.push(prefix.last().unwrap() + s.delta());
    }
    // suffix_min[p] = min S_j for p < j <= L
    let mut suffix_min = vec![i64::MAX; len + 1];
    for p in (0..len).rev() {
        suffix_min[p] = suffix_min[p + 1].min(prefix[p + 1]);
    }
    let mut good = Vec::with_capacity(h as usize);
    let mut wrap_min = i64::MAX; // min S_j + h for 1 <= j <= p
    for p in 0..len {
        if prefix[p] < suffix_min[p] && prefix[p] < wrap_min {
            good.push(p);
        }
        wrap_min = wrap_min.min(prefix[p + 1] + h);
    }
    Ok(good)
}

/// Picks one of the `h` good rotations uniformly, rotates to it and drops
/// the leading up step.
///
/// The result has length `len - 1`, nonnegative prefix heights and final
/// height `h - 1`. When `h = 1` the rotation is forced and no randomness is
/// used.
pub fn cycle_to_factor(word: &LatticeWord, src: &mut UniformSource) -> Result<LatticeWord> {
    let good = good_rotations(word)?;
    if good.len() as i64 != word.height() {
        return Err(Error::Invariant(format!(
            "found {} good rotations for a word of height {}",
            good.len(),
            word.height()
        )));
    }
    let pick = if good.len() == 1 { 0 } else { src.random(good.len() as u64) as usize };
    let mut steps = word.rotated(good[pick]);
    if steps.first() != Some(&Step::Up) {
        return Err(Error::Invariant("good rotation does not start with an up step".into()));
    }
    steps.remove(0);
    Ok(LatticeWord::new(steps))
}

/// TRUE iff every prefix height is nonnegative and the word ends at
/// `expected_height`.
pub fn validate_factor(word: &LatticeWord, expected_height: i64) -> bool {
    let mut height = 0i64;
    for s in word.steps() {
        height += s.delta();
        if height < 0 {
            return false;
        }
    }
    height == expected_height
}
