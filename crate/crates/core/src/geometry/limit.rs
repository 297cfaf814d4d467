//! Limit-set sampling: attracting eigendirections of random long words.
//!
//! Words are multiplied exactly; only the final integer matrix is converted
//! to floating point for power iteration.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ProjectivePoint;
use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::vinberg::{evaluate_word, IntElement};

pub const DEFAULT_SAMPLE_COUNT: usize = 200;
pub const DEFAULT_SAMPLE_WORD_LENGTH: usize = 40;
pub const MAX_SAMPLE_COUNT: usize = 100_000;
pub const MAX_SAMPLE_WORD_LENGTH: usize = 1_000;
pub const POWER_TOLERANCE: f64 = 1e-12;
pub const POWER_ITERATION_CAP: usize = 10_000;
/// Proximal when `|λ1| / |λ2| > 1 + PROXIMALITY_GAP`.
pub const PROXIMALITY_GAP: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct LimitPoint {
    pub point: ProjectivePoint,
    pub word: Vec<usize>,
    pub proximal: bool,
    /// Estimate of `|λ1| / |λ2|`.
    pub gap_ratio: f64,
    pub converged: bool,
    pub iterations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct LimitSetSample {
    pub seed: u64,
    pub word_length: usize,
    pub sampler: WordSampler,
    pub points: Vec<LimitPoint>,
    pub proximal_count: usize,
}

/// Integer matrix scaled into floats with entries of magnitude at most 1.
fn scaled_floats(m: &IntMatrix) -> Vec<Vec<f64>> {
    let max_bits = m.as_slice().iter().map(|x| x.bits()).max().unwrap_or(0);
    let shift = max_bits.saturating_sub(60);
    let scale = 2f64.powi((max_bits - shift) as i32);
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(|x| {
                    let s: BigInt = if x.is_negative() { -((-x) >> shift) } else { x >> shift };
                    s.to_f64().unwrap_or(0.0) / scale
                })
                .collect()
        })
        .collect()
}

fn apply(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Power iteration; returns the unit direction, the growth estimate, whether
/// the direction converged (up to sign) and the iteration count.
fn power_iteration(m: &[Vec<f64>]) -> (Vec<f64>, f64, bool, usize) {
    let n = m.len();
    let mut v: Vec<f64> = (0..n).map(|k| 1.0 / (k as f64 + 1.0)).collect();
    let nv = norm(&v);
    v.iter_mut().for_each(|x| *x /= nv);
    let mut growth = 0.0;
    for it in 1..=POWER_ITERATION_CAP {
        let mut y = apply(m, &v);
        growth = norm(&y);
        if growth == 0.0 {
            return (v, 0.0, false, it);
        }
        y.iter_mut().for_each(|x| *x /= growth);
        let same: f64 = y.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let flip: f64 = y.iter().zip(&v).map(|(a, b)| (a + b).abs()).fold(0.0, f64::max);
        v = y;
        if same.min(flip) < POWER_TOLERANCE {
            return (v, growth, true, it);
        }
    }
    (v, growth, false, POWER_ITERATION_CAP)
}

/// Second exterior power: the matrix of 2×2 minors, of size C(n, 2).
fn exterior_square(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = m.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    pairs
        .iter()
        .map(|&(i, j)| pairs.iter().map(|&(k, l)| m[i][k] * m[j][l] - m[i][l] * m[j][k]).collect())
        .collect()
}

/// Attracting direction and proximality of a single exact matrix.
///
/// `|λ1|` comes from power iteration on `m`, `|λ1 λ2|` from power iteration
/// on its exterior square; `|λ1| / |λ2| = |λ1|² / |λ1 λ2|`.
pub fn attracting_direction(m: &IntMatrix) -> (Vec<f64>, bool, f64, bool, usize) {
    let f = scaled_floats(m);
    let (v, l1, converged, iterations) = power_iteration(&f);
    let (_, l12, _, _) = power_iteration(&exterior_square(&f));
    let ratio = if l12 > 0.0 { l1 * l1 / l12 } else { f64::INFINITY };
    let proximal = converged && ratio > 1.0 + PROXIMALITY_GAP;
    (v, proximal, ratio, converged, iterations)
}

/// Orients a unit vector: positive pairing with `chart` when given, else
/// first nonzero coordinate positive.
fn orient(mut v: Vec<f64>, chart: Option<&[f64]>) -> Vec<f64> {
    let s = match chart {
        Some(w) => w.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>(),
        None => v.iter().copied().find(|x| *x != 0.0).unwrap_or(1.0),
    };
    if s < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    v
}

/// How random words are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum WordSampler {
    /// Uniform among letters that lengthen the word in the Coxeter group,
    /// decided by positivity of `w(α_s)` in the root basis.
    CoxeterReduced,
    /// Uniform among letters other than the inverse of the previous one.
    NonBacktracking,
}

/// `true` when generator `i` is a simple reflection in root coordinates:
/// it differs from the identity only in row `i` and negates `e_i`.
fn simple_reflections(gens: &[IntElement]) -> bool {
    let n = gens.len();
    gens.iter().enumerate().all(|(i, g)| {
        let m = &g.matrix;
        m.rows() == n
            && m.cols() == n
            && m[(i, i)] == BigInt::from(-1)
            && (0..n).all(|r| r == i || (0..n).all(|c| m[(r, c)] == BigInt::from(u8::from(r == c))))
    })
}

fn random_word(rng: &mut ChaCha8Rng, gens: &[IntElement], sampler: WordSampler, involution: &[bool], len: usize) -> Vec<usize> {
    let k = gens.len();
    let mut w: Vec<usize> = Vec::with_capacity(len);
    match sampler {
        WordSampler::CoxeterReduced => {
            // ℓ(ws) > ℓ(w) iff column s of ρ(w) is a nonnegative root.
            let mut m = IntMatrix::identity(k);
            while w.len() < len {
                let allowed: Vec<usize> = (0..k).filter(|&s| (0..k).all(|r| !m[(r, s)].is_negative())).collect();
                let Some(&s) = allowed.get(rng.gen_range(0..allowed.len().max(1))) else { break };
                m = &m * &gens[s].matrix;
                w.push(s);
            }
        }
        WordSampler::NonBacktracking => {
            while w.len() < len {
                let g = rng.gen_range(0..k);
                if k > 1 && w.last().is_some_and(|&p| p == g && involution[g]) {
                    continue;
                }
                w.push(g);
            }
        }
    }
    w
}

fn sample_one(
    gens: &[IntElement],
    sampler: WordSampler,
    involution: &[bool],
    (seed, index): (u64, usize),
    len: usize,
    chart: Option<&[f64]>,
) -> Result<LimitPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let word = random_word(&mut rng, gens, sampler, involution, len);
    let m = evaluate_word(gens, &word)?.matrix;
    let (v, proximal, gap_ratio, converged, iterations) = attracting_direction(&m);
    Ok(LimitPoint { point: ProjectivePoint::Float(orient(v, chart)), word, proximal, gap_ratio, converged, iterations })
}

/// Samples `count` random words of length `word_length`; sample `k` draws
/// from stream `k` of a ChaCha8 generator seeded with `seed`, so the output
/// does not depend on how the work is split across threads. Reflection
/// generators in root coordinates get Coxeter-reduced words; other
/// generating sets get non-backtracking words.
pub fn limit_set_sample(
    gens: &[IntElement],
    count: usize,
    word_length: usize,
    seed: u64,
    chart: Option<&[f64]>,
) -> Result<LimitSetSample> {
    if gens.is_empty() {
        return Err(Error::Unsupported("empty generator list".into()));
    }
    if count > MAX_SAMPLE_COUNT {
        return Err(Error::ResourceLimit { what: "limit-set samples".into(), limit: MAX_SAMPLE_COUNT });
    }
    if word_length > MAX_SAMPLE_WORD_LENGTH {
        return Err(Error::ResourceLimit { what: "sample word length".into(), limit: MAX_SAMPLE_WORD_LENGTH });
    }
    let involution: Vec<bool> = gens.iter().map(|g| (&g.matrix * &g.matrix).is_identity()).collect();
    let sampler = if simple_reflections(gens) { WordSampler::CoxeterReduced } else { WordSampler::NonBacktracking };
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(count.max(1));
    let chunk = count.div_ceil(threads.max(1)).max(1);
    let results: Vec<Result<LimitPoint>> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..count)
            .step_by(chunk)
            .map(|start| {
                let involution = &involution;
                s.spawn(move || {
                    (start..(start + chunk).min(count))
                        .map(|k| sample_one(gens, sampler, involution, (seed, k), word_length, chart))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("sampling thread panicked")).collect()
    });
    let points = results.into_iter().collect::<Result<Vec<_>>>()?;
    let proximal_count = points.iter().filter(|p| p.proximal).count();
    Ok(LimitSetSample { seed, word_length, sampler, points, proximal_count })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::CartanMatrix;
    use crate::vinberg::{integer_reflection_generators, reflection_generators_from_matrix, GroupElement};

    fn gens() -> Vec<IntElement> {
        integer_reflection_generators(&CartanMatrix::pentagon_integral()).unwrap()
    }

    #[test]
    fn identity_and_reflection_are_not_proximal() {
        let (_, proximal, ratio, _, _) = attracting_direction(&IntMatrix::identity(5));
        assert!(!proximal);
        assert!((ratio - 1.0).abs() < 1e-9);
        let g = gens();
        let (_, proximal, _, _, _) = attracting_direction(&g[0].matrix);
        assert!(!proximal);
    }

    #[test]
    fn diagonal_matrix_direction() {
        let m = IntMatrix::from_i64(&[&[3, 0, 0, 0, 0], &[0, 1, 0, 0, 0], &[0, 0, 1, 0, 0], &[0, 0, 0, 1, 0], &[0, 0, 0, 0, 1]]);
        let (v, proximal, ratio, converged, _) = attracting_direction(&m);
        assert!(proximal && converged);
        assert!((ratio - 3.0).abs() < 1e-9);
        assert!((v[0].abs() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn paper_sample_is_mostly_proximal_and_reproducible() {
        let g = gens();
        let a = limit_set_sample(&g, 200, 40, 7, None).unwrap();
        assert_eq!(a.points.len(), 200);
        assert!(a.proximal_count >= 180, "only {} proximal", a.proximal_count);
        let b = limit_set_sample(&g, 200, 40, 7, None).unwrap();
        assert_eq!(a, b);
        let c = limit_set_sample(&g, 200, 40, 8, None).unwrap();
        assert_ne!(a.points[0].word, c.points[0].word);
        assert_eq!(a.sampler, WordSampler::CoxeterReduced);
        for p in &a.points {
            assert_eq!(p.word.len(), 40);
            assert!(p.word.windows(2).all(|w| w[0] != w[1]));
        }
    }

    #[test]
    fn reduced_words_stop_at_the_longest_element() {
        // A2 and B2 are finite with longest elements of length 3 and 4.
        for (label, longest) in [(-1, 3), (-2, 4)] {
            let a = IntMatrix::from_i64(&[&[2, label], &[-1, 2]]);
            let g = reflection_generators_from_matrix(&a).unwrap();
            let s = limit_set_sample(&g, 10, 12, 1, None).unwrap();
            assert_eq!(s.sampler, WordSampler::CoxeterReduced);
            for p in &s.points {
                assert_eq!(p.word.len(), longest);
                assert!(!p.proximal);
            }
        }
    }

    #[test]
    fn non_reflection_generators_use_non_backtracking_words() {
        let h = IntMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        let g = vec![GroupElement { matrix: h, word: vec![0] }];
        let s = limit_set_sample(&g, 3, 10, 0, None).unwrap();
        assert_eq!(s.sampler, WordSampler::NonBacktracking);
        assert_eq!(s.proximal_count, 3);
        let v = s.points[0].point.to_f64();
        // Attracting eigenvector of [[2,1],[1,1]] is (φ, 1) normalized.
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((v[0] / v[1] - phi).abs() < 1e-9);
        assert!(limit_set_sample(&[], 1, 1, 0, None).is_err());
        assert!(limit_set_sample(&g, MAX_SAMPLE_COUNT + 1, 1, 0, None).is_err());
    }
}
