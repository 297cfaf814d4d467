//! Zariski density certificates for subgroups of GL5(Z).
//!
//! The criterion is a conjunction of finitely checkable facts:
//! the generated matrix algebra is everything (absolute irreducibility),
//! no nonzero invariant bilinear form exists, some element has a
//! characteristic polynomial with Galois group S5, and a second element with
//! squarefree characteristic polynomial does not commute with it.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{char_poly, factor_pattern_mod_p, galois_s5_certificate, is_transposition_pattern, IntPolynomial, S5Outcome};
use crate::coxeter::{int_matrix_from_strings, int_matrix_to_strings};
use crate::error::{Error, Result};
use crate::linalg::{EchelonBasis, IntMatrix};
use crate::numfield::Rational;
use crate::vinberg::{commute, evaluate_word, invariant_forms_integer, GroupElement, IntElement};

pub const DEFAULT_WORD_LENGTH: usize = 8;
pub const DEFAULT_PRIME_BOUND: u64 = 1000;
/// Cap on words examined per search, so that large generating sets stay bounded.
pub const DEFAULT_MAX_WORDS: usize = 200_000;

fn flatten(m: &IntMatrix) -> Vec<Rational> {
    m.as_slice().iter().map(|x| Rational::from_integer(x.clone())).collect()
}

/// Dimension over Q of the matrix algebra generated by `gens` (with identity).
pub fn burnside_span_dim(gens: &[IntMatrix]) -> Result<usize> {
    let n = match gens.first() {
        Some(g) => g.rows(),
        None => return Ok(1),
    };
    if let Some(g) = gens.iter().find(|g| g.rows() != n || g.cols() != n) {
        return Err(Error::DimensionMismatch { expected: n, got: g.rows() });
    }
    let mut basis = EchelonBasis::<Rational>::new(n * n);
    let mut elements = Vec::new();
    for m in std::iter::once(IntMatrix::identity(n)).chain(gens.iter().cloned()) {
        if basis.insert(flatten(&m)) {
            elements.push(m);
        }
    }
    let mut idx = 0;
    while idx < elements.len() && basis.len() < n * n {
        for g in gens {
            let prod = &elements[idx] * g;
            if basis.insert(flatten(&prod)) {
                elements.push(prod);
            }
        }
        idx += 1;
    }
    Ok(basis.len())
}

/// Search budgets for [`certify_zariski_dense`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct DensityBudget {
    pub word_length: usize,
    pub prime_bound: u64,
    /// Words examined by the witness search and, separately, the companion search.
    pub max_words: usize,
}

impl Default for DensityBudget {
    fn default() -> Self {
        DensityBudget { word_length: DEFAULT_WORD_LENGTH, prime_bound: DEFAULT_PRIME_BOUND, max_words: DEFAULT_MAX_WORDS }
    }
}

/// Self-contained density certificate; all matrices are inlined as decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct DensityCertificate {
    pub dimension: usize,
    pub generators: Vec<Vec<Vec<String>>>,
    pub span_dimension: usize,
    pub invariant_form_dimension: usize,
    /// 0-based generator indices.
    pub witness_word: Vec<usize>,
    pub witness_matrix: Vec<Vec<String>>,
    pub witness_poly: IntPolynomial,
    pub prime_irreducible: u64,
    pub prime_transposition: u64,
    /// Squarefree pattern mod `prime_transposition`: {2,1,1,1} or {3,2}.
    pub transposition_pattern: Vec<usize>,
    pub companion_word: Vec<usize>,
    pub companion_matrix: Vec<Vec<String>>,
    pub companion_poly: IntPolynomial,
}

/// Result of re-running every component check on a certificate's own data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct CertificateCheck {
    pub span_full: bool,
    pub no_invariant_form: bool,
    pub witness_matrix_matches_word: bool,
    pub witness_poly_matches: bool,
    pub irreducible_mod_prime: bool,
    pub transposition_mod_prime: bool,
    pub companion_matrix_matches_word: bool,
    pub companion_poly_matches: bool,
    pub companion_squarefree: bool,
    pub non_commuting: bool,
    pub valid: bool,
}

impl DensityCertificate {
    pub fn generator_elements(&self) -> Result<Vec<IntElement>> {
        self.generators
            .iter()
            .enumerate()
            .map(|(k, m)| Ok(GroupElement { matrix: int_matrix_from_strings(m)?, word: vec![k] }))
            .collect()
    }

    /// Recomputes every claim from the inlined data.
    pub fn revalidate(&self) -> Result<CertificateCheck> {
        let gens = self.generator_elements()?;
        let mats: Vec<IntMatrix> = gens.iter().map(|g| g.matrix.clone()).collect();
        let n = self.dimension;
        let span_full = self.span_dimension == n * n && burnside_span_dim(&mats)? == n * n;
        let no_invariant_form = self.invariant_form_dimension == 0 && invariant_forms_integer(&gens)?.is_empty();
        let witness = int_matrix_from_strings(&self.witness_matrix)?;
        let companion = int_matrix_from_strings(&self.companion_matrix)?;
        let witness_matrix_matches_word = evaluate_word(&gens, &self.witness_word)?.matrix == witness;
        let companion_matrix_matches_word = evaluate_word(&gens, &self.companion_word)?.matrix == companion;
        let witness_poly_matches = char_poly(&witness)? == self.witness_poly && self.witness_poly.degree() == Some(n);
        let companion_poly_matches = char_poly(&companion)? == self.companion_poly;
        let irreducible_mod_prime = factor_pattern_mod_p(&self.witness_poly, self.prime_irreducible)
            .map(|p| p.is(&[5]))
            .unwrap_or(false);
        let transposition_mod_prime = factor_pattern_mod_p(&self.witness_poly, self.prime_transposition)
            .map(|p| is_transposition_pattern(&p) && p.degrees == self.transposition_pattern)
            .unwrap_or(false);
        let companion_squarefree = self.companion_poly.is_squarefree_over_q();
        let non_commuting = !commute(&witness, &companion);
        let valid = span_full
            && no_invariant_form
            && witness_matrix_matches_word
            && witness_poly_matches
            && irreducible_mod_prime
            && transposition_mod_prime
            && companion_matrix_matches_word
            && companion_poly_matches
            && companion_squarefree
            && non_commuting;
        Ok(CertificateCheck {
            span_full,
            no_invariant_form,
            witness_matrix_matches_word,
            witness_poly_matches,
            irreducible_mod_prime,
            transposition_mod_prime,
            companion_matrix_matches_word,
            companion_poly_matches,
            companion_squarefree,
            non_commuting,
            valid,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct DensityShortfall {
    pub span_dimension: usize,
    pub invariant_form_dimension: usize,
    /// Which condition failed or was not found within the budget.
    pub reason: String,
    pub words_examined: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum DensityOutcome {
    Certified(DensityCertificate),
    Inconclusive(DensityShortfall),
}

impl DensityOutcome {
    pub fn certificate(&self) -> Option<&DensityCertificate> {
        match self {
            DensityOutcome::Certified(c) => Some(c),
            DensityOutcome::Inconclusive(_) => None,
        }
    }
}

/// Nonempty words of length at most `max_len` in shortlex order, with their
/// matrices. Words with two equal adjacent letters are skipped when that
/// generator is an involution, since they reduce to shorter words.
pub struct ShortlexWords<'a> {
    gens: &'a [IntElement],
    involution: Vec<bool>,
    max_len: usize,
    len: usize,
    // Current word and the prefix products; stack[k] = product of word[..k].
    word: Vec<usize>,
    stack: Vec<IntMatrix>,
    started: bool,
}

impl<'a> ShortlexWords<'a> {
    pub fn new(gens: &'a [IntElement], max_len: usize) -> Self {
        let involution = gens.iter().map(|g| (&g.matrix * &g.matrix).is_identity()).collect();
        let n = gens.first().map_or(0, |g| g.dim());
        ShortlexWords {
            gens,
            involution,
            max_len,
            len: 0,
            word: Vec::new(),
            stack: vec![IntMatrix::identity(n)],
            started: false,
        }
    }

    fn allowed(&self, pos: usize, letter: usize) -> bool {
        pos == 0 || !(self.word[pos - 1] == letter && self.involution[letter])
    }

    /// Fills positions `from..len` with the smallest allowed letters.
    fn fill_from(&mut self, from: usize) -> bool {
        for pos in from..self.len {
            let Some(letter) = (0..self.gens.len()).find(|&l| self.allowed(pos, l)) else {
                return false;
            };
            self.word.truncate(pos);
            self.word.push(letter);
            self.stack.truncate(pos + 1);
            let next = &self.stack[pos] * &self.gens[letter].matrix;
            self.stack.push(next);
        }
        true
    }

    /// Advances to the next word of the current length, if any.
    fn advance(&mut self) -> bool {
        let mut pos = self.len;
        while pos > 0 {
            pos -= 1;
            let start = self.word[pos] + 1;
            if let Some(letter) = (start..self.gens.len()).find(|&l| self.allowed(pos, l)) {
                self.word.truncate(pos);
                self.word.push(letter);
                self.stack.truncate(pos + 1);
                let next = &self.stack[pos] * &self.gens[letter].matrix;
                self.stack.push(next);
                if self.fill_from(pos + 1) {
                    return true;
                }
            }
        }
        false
    }
}

impl Iterator for ShortlexWords<'_> {
    type Item = IntElement;

    fn next(&mut self) -> Option<IntElement> {
        if self.gens.is_empty() {
            return None;
        }
        let found = self.started && self.advance();
        self.started = true;
        if !found {
            loop {
                self.len += 1;
                if self.len > self.max_len {
                    return None;
                }
                self.word.clear();
                self.stack.truncate(1);
                if self.fill_from(0) {
                    break;
                }
            }
        }
        Some(GroupElement { matrix: self.stack[self.len].clone(), word: self.word.clone() })
    }
}

/// Searches for a density certificate within the budgets.
pub fn certify_zariski_dense(gens: &[IntElement], budget: DensityBudget) -> Result<DensityOutcome> {
    let n = gens.first().map(|g| g.dim()).ok_or_else(|| Error::Unsupported("empty generator list".into()))?;
    let mats: Vec<IntMatrix> = gens.iter().map(|g| g.matrix.clone()).collect();
    for m in &mats {
        let d = m.det();
        if d != BigInt::from(1) && d != BigInt::from(-1) {
            return Err(Error::Malformed { value: d.to_string(), msg: "generator determinant must be ±1".into() });
        }
    }
    let span_dimension = burnside_span_dim(&mats)?;
    let invariant_form_dimension = invariant_forms_integer(gens)?.len();
    let shortfall = |reason: String, words_examined| {
        Ok(DensityOutcome::Inconclusive(DensityShortfall { span_dimension, invariant_form_dimension, reason, words_examined }))
    };
    if n != 5 {
        return shortfall(format!("dimension {n}: the S5 criterion applies to dimension 5 only"), 0);
    }
    if span_dimension != n * n {
        return shortfall(format!("generated algebra has dimension {span_dimension} < {}", n * n), 0);
    }
    if invariant_form_dimension != 0 {
        return shortfall(format!("{invariant_form_dimension}-dimensional space of invariant bilinear forms"), 0);
    }
    let mut examined = 0;
    let mut witness = None;
    for w in ShortlexWords::new(gens, budget.word_length).take(budget.max_words) {
        examined += 1;
        let poly = char_poly(&w.matrix)?;
        match galois_s5_certificate(&poly, budget.prime_bound) {
            Ok(S5Outcome::Certified { prime_irreducible, prime_transposition, transposition_pattern }) => {
                witness = Some((w, poly, prime_irreducible, prime_transposition, transposition_pattern));
                break;
            }
            Ok(S5Outcome::Inconclusive { .. }) | Err(Error::Reducible(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    let Some((w, w_poly, p_irr, p_tr, tr_pattern)) = witness else {
        let reason = if examined == budget.max_words {
            format!("no S5 witness among the first {examined} words (word budget exhausted)")
        } else {
            format!("no S5 witness among words of length <= {}", budget.word_length)
        };
        return shortfall(reason, examined);
    };
    let companion = ShortlexWords::new(gens, budget.word_length).take(budget.max_words).find_map(|c| {
        if commute(&c.matrix, &w.matrix) {
            return None;
        }
        let poly = char_poly(&c.matrix).ok()?;
        poly.is_squarefree_over_q().then_some((c, poly))
    });
    let Some((c, c_poly)) = companion else {
        return shortfall("no non-commuting companion with squarefree characteristic polynomial".into(), examined);
    };
    Ok(DensityOutcome::Certified(DensityCertificate {
        dimension: n,
        generators: mats.iter().map(int_matrix_to_strings).collect(),
        span_dimension,
        invariant_form_dimension,
        witness_word: w.word,
        witness_matrix: int_matrix_to_strings(&w.matrix),
        witness_poly: w_poly,
        prime_irreducible: p_irr,
        prime_transposition: p_tr,
        transposition_pattern: tr_pattern,
        companion_word: c.word,
        companion_matrix: int_matrix_to_strings(&c.matrix),
        companion_poly: c_poly,
    }))
}

/// Products `g_i g_j` for `i < j`: generators of the index-2 subgroup of
/// even-length words when every generator is an involution.
pub fn even_subgroup_generators(gens: &[IntElement]) -> Vec<IntElement> {
    let mut out = Vec::new();
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            out.push(gens[i].mul(&gens[j]));
        }
    }
    out
}
