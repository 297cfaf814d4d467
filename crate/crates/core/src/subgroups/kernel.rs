//! Sampling elements of the kernel of a map from a finite-index subgroup onto Z.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::presentation::{inverse_word, Word};
use super::rs::SubgroupPresentation;
use super::snf::Epimorphism;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct KernelSample {
    pub radius: u32,
    /// Fixed subgroup element with φ-value 1, in the parent generators.
    pub t_word: Word,
    /// Kernel elements in the parent generators, deduplicated, in generation order.
    pub words: Vec<Word>,
}

/// `(g, x, y)` with `g = gcd(a, b) = a·x + b·y`, `g ≥ 0`.
fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        return if a < 0 { (-a, -1, 0) } else { (a, 1, 0) };
    }
    let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
    (g, y, x - a.div_euclid(b) * y)
}

fn power(w: &[i32], k: i64) -> Word {
    let base = if k < 0 { inverse_word(w) } else { w.to_vec() };
    base.iter().copied().cycle().take(base.len() * k.unsigned_abs() as usize).collect()
}

/// Element of φ-value 1 built from the Schreier generators: a single
/// generator of image ±1 when there is one, else an extended-gcd product.
fn unit_element(sub: &SubgroupPresentation, phi: &Epimorphism) -> Result<Word> {
    let normalize = |w: &[i32]| sub.presentation_normalize(w);
    if let Some(k) = phi.images.iter().position(|&x| x == 1) {
        return Ok(sub.schreier_words[k].clone());
    }
    if let Some(k) = phi.images.iter().position(|&x| x == -1) {
        return Ok(normalize(&inverse_word(&sub.schreier_words[k])));
    }
    let mut g = 0i64;
    let mut word = Vec::new();
    for (k, &img) in phi.images.iter().enumerate() {
        if img == 0 {
            continue;
        }
        let (ng, x, y) = ext_gcd(g, img);
        let mut next = power(&word, x);
        next.extend(power(&sub.schreier_words[k], y));
        word = normalize(&next);
        g = ng;
    }
    if g != 1 {
        return Err(Error::InvalidDiagram("map to Z is not surjective".into()));
    }
    Ok(word)
}

/// Kernel elements of `φ`, which is given on the Schreier generators of `sub`.
///
/// Radius 0 yields the Schreier generators with φ-value 0. Radius `r ≥ 1`
/// adds every generator corrected to φ-value 0 (`y·t^(-φ(y))`) and the
/// conjugates `tᵃ·k·t⁻ᵃ` of all these for `1 ≤ |a| ≤ r`. Every output word is
/// checked to fix coset 0 and to have φ-value 0.
pub fn kernel_sample(sub: &SubgroupPresentation, phi: &Epimorphism, radius: u32) -> Result<KernelSample> {
    if phi.images.len() != sub.rank() {
        return Err(Error::DimensionMismatch { expected: sub.rank(), got: phi.images.len() });
    }
    let normalize = |w: &[i32]| sub.presentation_normalize(w);
    let mut seen = BTreeSet::new();
    let mut words = Vec::new();
    let mut push = |w: Word, words: &mut Vec<Word>| {
        if !w.is_empty() && seen.insert(w.clone()) {
            words.push(w);
        }
    };
    for (w, &img) in sub.schreier_words.iter().zip(&phi.images) {
        if img == 0 {
            push(normalize(w), &mut words);
        }
    }
    let t_word = if phi.images.iter().all(|&x| x == 0) { Vec::new() } else { unit_element(sub, phi)? };
    if radius >= 1 && !t_word.is_empty() {
        for (w, &img) in sub.schreier_words.iter().zip(&phi.images) {
            if img != 0 {
                let mut c = w.clone();
                c.extend(power(&t_word, -img));
                push(normalize(&c), &mut words);
            }
        }
        let base = words.clone();
        for a in 1..=radius as i64 {
            for s in [a, -a] {
                for k in &base {
                    let mut c = power(&t_word, s);
                    c.extend(k);
                    c.extend(power(&t_word, -s));
                    push(normalize(&c), &mut words);
                }
            }
        }
    }
    for w in &words {
        let in_subgroup = sub.table.apply(0, w) == 0;
        let value = phi.apply(&sub.rewrite(w)?);
        if !in_subgroup || value != 0 {
            return Err(Error::InvalidDiagram(format!("sampled word {w:?} is not in the kernel")));
        }
    }
    Ok(KernelSample { radius, t_word, words })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subgroups::{maps_to_z, reidemeister_schreier, todd_coxeter, Presentation};

    /// Universal Coxeter group on three generators; its even subgroup is free of rank 2.
    fn universal() -> (Presentation, SubgroupPresentation) {
        let p = Presentation::new(3, vec![vec![1, 1], vec![2, 2], vec![3, 3]]).unwrap();
        let t = todd_coxeter(&p, &[vec![1, 2], vec![1, 3]], 100).unwrap();
        assert_eq!(t.index, 2);
        let sub = reidemeister_schreier(&p, &t).unwrap();
        (p, sub)
    }

    #[test]
    fn ext_gcd_identity() {
        for (a, b) in [(0, 5), (4, 6), (-3, 7), (12, -18), (0, -1)] {
            let (g, x, y) = ext_gcd(a, b);
            assert_eq!(a * x + b * y, g);
            assert_eq!(g, num_integer::Integer::gcd(&a, &b));
        }
    }

    #[test]
    fn radius_zero_is_phi_zero_generators() {
        let (_, sub) = universal();
        let maps = maps_to_z(&sub.presentation).unwrap();
        assert_eq!(maps.len(), 2);
        for phi in &maps {
            let s = kernel_sample(&sub, phi, 0).unwrap();
            let expected: Vec<Word> = sub
                .schreier_words
                .iter()
                .zip(&phi.images)
                .filter(|(_, &i)| i == 0)
                .map(|(w, _)| w.clone())
                .collect();
            assert_eq!(s.words, expected);
        }
    }

    #[test]
    fn sampled_words_are_in_the_kernel() {
        let (p, sub) = universal();
        for phi in maps_to_z(&sub.presentation).unwrap() {
            for radius in 1..=3 {
                let s = kernel_sample(&sub, &phi, radius).unwrap();
                assert_eq!(phi.apply(&sub.rewrite(&s.t_word).unwrap()), 1);
                assert!(s.words.len() > 1);
                for w in &s.words {
                    assert_eq!(sub.table.apply(0, w), 0);
                    assert_eq!(phi.apply(&sub.rewrite(w).unwrap()), 0);
                    assert_eq!(&p.normalize_word(w), w);
                }
            }
        }
        // Non-unit images use the extended-gcd construction.
        let phi = Epimorphism { images: vec![2, 3] };
        let s = kernel_sample(&sub, &phi, 1).unwrap();
        assert_eq!(phi.apply(&sub.rewrite(&s.t_word).unwrap()), 1);
    }

    #[test]
    fn wrong_arity_rejected() {
        let (_, sub) = universal();
        assert!(kernel_sample(&sub, &Epimorphism { images: vec![1] }, 0).is_err());
    }
}
