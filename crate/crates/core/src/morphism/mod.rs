//! Morphisms on words: application, iteration, fixed points and the
//! synchronization property.

mod check;
mod registry;

pub use check::{
    complement_factor_bound, image_power_check, is_squarefree, morphic_antisquare_inventory, squarefree_ternary_words,
    verify_morphism, ImageCheck, MorphismCheckReport, SquarefreeWords, StabilizationRule,
};
pub use registry::{registry, AntisquareCap, Registry, RegistryEntry, TableRow, TABLE_ROWS};

use crate::error::{domain, Result};
use crate::word::Word;

/// A letter-to-word map `{0, …, d-1} → Σ*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    images: Vec<Word>,
    target_alphabet: u8,
}

impl Morphism {
    pub fn new(images: Vec<Word>) -> Result<Morphism> {
        if !(2..=3).contains(&images.len()) {
            return Err(domain("morphisms are defined on alphabets of size 2 or 3"));
        }
        if images.iter().any(Word::is_empty) {
            return Err(domain("morphism images must be nonempty"));
        }
        let target_alphabet = images.iter().map(Word::alphabet).max().unwrap_or(2);
        Ok(Morphism { images, target_alphabet })
    }

    /// Builds a morphism from digit strings; the target alphabet is ternary
    /// only if some image uses the letter `2`.
    pub fn from_strs(images: &[&str]) -> Result<Morphism> {
        let target = if images.iter().any(|s| s.contains('2')) { 3 } else { 2 };
        let images = images.iter().map(|s| Word::parse(s, target)).collect::<Result<_>>()?;
        Morphism::new(images)
    }

    pub fn domain_alphabet(&self) -> u8 {
        self.images.len() as u8
    }

    pub fn target_alphabet(&self) -> u8 {
        self.target_alphabet
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image(&self, letter: u8) -> &Word {
        &self.images[letter as usize]
    }

    /// Common image length, if all images have the same length.
    pub fn uniform_length(&self) -> Option<usize> {
        let q = self.images[0].len();
        self.images.iter().all(|w| w.len() == q).then_some(q)
    }

    /// `images[a]` starts with `a` and is longer than one letter.
    pub fn is_prolongable(&self, a: u8) -> bool {
        self.images.get(a as usize).is_some_and(|w| w.len() >= 2 && w.letters()[0] == a)
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        if let Some(&bad) = w.letters().iter().find(|&&a| a >= self.domain_alphabet()) {
            return Err(domain(format!("letter {bad} outside the morphism's domain")));
        }
        Ok(Word::from_raw(self.apply_letters(w.letters()), self.target_alphabet))
    }

    pub(crate) fn apply_letters(&self, letters: &[u8]) -> Vec<u8> {
        let mut out = Vec::with_capacity(letters.len() * self.images[0].len());
        for &a in letters {
            out.extend_from_slice(self.images[a as usize].letters());
        }
        out
    }

    /// `m^k(w)`.
    pub fn iterate(&self, w: &Word, k: usize) -> Result<Word> {
        let mut cur = w.clone();
        for _ in 0..k {
            cur = self.apply(&cur)?;
        }
        Ok(cur)
    }

    /// The length-`len` prefix of the fixed point starting with `seed`.
    pub fn fixed_point_prefix(&self, seed: u8, len: usize) -> Result<Word> {
        if !self.is_prolongable(seed) {
            return Err(domain(format!("morphism is not prolongable on {seed}")));
        }
        if self.target_alphabet > self.domain_alphabet() {
            return Err(domain("fixed points need an endomorphism"));
        }
        let mut cur = vec![seed];
        while cur.len() < len {
            let mut next = self.apply_letters(&cur);
            next.truncate(len);
            cur = next;
        }
        cur.truncate(len);
        Ok(Word::from_raw(cur, self.target_alphabet))
    }

    /// Uniform morphism of length `q` whose images occur inside any
    /// two-image concatenation only at offsets `0` and `q`.
    pub fn is_synchronizing(&self) -> Result<bool> {
        let q = self.uniform_length().ok_or_else(|| domain("synchronization is defined for uniform morphisms"))?;
        for b in &self.images {
            for c in &self.images {
                let bc: Vec<u8> = b.letters().iter().chain(c.letters()).copied().collect();
                for a in &self.images {
                    let hit = bc.windows(q).enumerate().any(|(pos, win)| pos != 0 && pos != q && win == a.letters());
                    if hit {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}
