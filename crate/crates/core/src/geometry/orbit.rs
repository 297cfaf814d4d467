//! Exact orbits of a cone vector and half-space properness witnesses.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{strings, ProjectivePoint};
use crate::coxeter::{cartan_type_witness, CartanMatrix, CartanType};
use crate::error::{Error, Result};
use crate::lp::{maximize, Constraint, LpOutcome, Relation};
use crate::numfield::Rational;
use crate::vinberg::IntElement;

pub const DEFAULT_ORBIT_DEPTH: usize = 6;
pub const MAX_ORBIT_DEPTH: usize = 10;
pub const DEFAULT_MAX_POINTS: usize = 2_000_000;

/// Positive integer vector `u` with `Au < 0`, together with `Au`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct NegativeTypeSeed {
    #[serde(with = "strings")]
    #[schemars(with = "Vec<String>")]
    pub u: Vec<BigInt>,
    #[serde(with = "strings")]
    #[schemars(with = "Vec<String>")]
    pub au: Vec<BigInt>,
}

impl NegativeTypeSeed {
    pub fn verify(&self, a: &CartanMatrix) -> bool {
        let Some(m) = a.to_integer() else { return false };
        m.cols() == self.u.len()
            && self.u.iter().all(|x| x.is_positive())
            && m.mul_vec(&self.u) == self.au
            && self.au.iter().all(|x| x.is_negative())
    }
}

/// Rescales the exact negative-type witness of `a` to a primitive integer vector.
pub fn negative_type_seed(a: &CartanMatrix) -> Result<NegativeTypeSeed> {
    let w = cartan_type_witness(a)?;
    if w.cartan_type != CartanType::Negative {
        return Err(Error::WrongType { expected: "negative".into(), found: format!("{:?}", w.cartan_type).to_lowercase() });
    }
    let m = a.to_integer().ok_or_else(|| Error::Unsupported("negative-type seed needs an integer Cartan matrix".into()))?;
    let q: Vec<Rational> = w
        .u
        .iter()
        .map(|x| x.to_rational().ok_or_else(|| Error::Unsupported("witness is not rational".into())))
        .collect::<Result<_>>()?;
    let lcm = q.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<BigInt> = q.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let u = primitive(&ints);
    let au = m.mul_vec(&u);
    let seed = NegativeTypeSeed { u, au };
    debug_assert!(seed.verify(a));
    Ok(seed)
}

fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Orbit point: the projective class plus the orientation of the
/// representative reached from the seed (`representative = orientation · point`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct OrbitPoint {
    pub point: ProjectivePoint,
    pub orientation: i8,
    /// A shortest word (0-based generators) mapping the seed to this point.
    pub word: Vec<usize>,
}

impl OrbitPoint {
    pub fn representative(&self) -> Vec<BigInt> {
        match &self.point {
            ProjectivePoint::Exact(v) => v.iter().map(|x| x * BigInt::from(self.orientation)).collect(),
            ProjectivePoint::Float(_) => unreachable!("orbit points are exact"),
        }
    }

    pub fn depth(&self) -> usize {
        self.word.len()
    }
}

/// The same projective point reached with opposite orientations: no open
/// half-space contains both representatives.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct SignConflict {
    pub word: Vec<usize>,
    pub existing_word: Vec<usize>,
    pub depth: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct OrbitCloud {
    #[serde(with = "strings")]
    #[schemars(with = "Vec<String>")]
    pub seed: Vec<BigInt>,
    pub depth: usize,
    pub points: Vec<OrbitPoint>,
    /// Number of new points first reached at each depth `0..=depth`.
    pub level_sizes: Vec<usize>,
    pub sign_conflict: Option<SignConflict>,
}

/// Primitive, sign-normalized key and the sign that was removed.
fn normalize(v: &[BigInt]) -> (Vec<BigInt>, i8) {
    let p = primitive(v);
    match p.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => (p.iter().map(|x| -x).collect(), -1),
        _ => (p, 1),
    }
}

/// Breadth-first orbit of `seed` under words of length at most `depth`,
/// deduplicated projectively.
pub fn orbit(gens: &[IntElement], seed: &[BigInt], depth: usize, max_points: usize) -> Result<OrbitCloud> {
    if depth > MAX_ORBIT_DEPTH {
        return Err(Error::ResourceLimit { what: "orbit depth".into(), limit: MAX_ORBIT_DEPTH });
    }
    if seed.iter().all(Zero::is_zero) {
        return Err(Error::Malformed { value: format!("{seed:?}"), msg: "seed must be nonzero".into() });
    }
    if let Some(g) = gens.iter().find(|g| g.dim() != seed.len()) {
        return Err(Error::DimensionMismatch { expected: seed.len(), got: g.dim() });
    }
    let (key, orientation) = normalize(seed);
    let mut index: HashMap<Vec<BigInt>, usize> = HashMap::from([(key.clone(), 0)]);
    let mut points = vec![OrbitPoint { point: ProjectivePoint::Exact(key), orientation, word: Vec::new() }];
    let mut level_sizes = vec![1];
    let mut sign_conflict = None;
    let mut frontier = vec![0usize];
    for d in 1..=depth {
        let mut next = Vec::new();
        for &k in &frontier {
            let rep = points[k].representative();
            for (g, gen) in gens.iter().enumerate() {
                let image = gen.matrix.mul_vec(&rep);
                let (key, orientation) = normalize(&image);
                let mut word = points[k].word.clone();
                word.push(g);
                match index.get(&key) {
                    Some(&existing) => {
                        if points[existing].orientation != orientation && sign_conflict.is_none() {
                            sign_conflict =
                                Some(SignConflict { word, existing_word: points[existing].word.clone(), depth: d });
                        }
                    }
                    None => {
                        if points.len() >= max_points {
                            return Err(Error::ResourceLimit { what: "orbit points".into(), limit: max_points });
                        }
                        index.insert(key.clone(), points.len());
                        next.push(points.len());
                        points.push(OrbitPoint { point: ProjectivePoint::Exact(key), orientation, word });
                    }
                }
            }
        }
        level_sizes.push(next.len());
        frontier = next;
    }
    Ok(OrbitCloud { seed: seed.to_vec(), depth, points, level_sizes, sign_conflict })
}

impl OrbitCloud {
    /// Exact closure check: every generator maps every point of depth below
    /// the cloud depth to a stored point, with the stored orientation unless
    /// a sign conflict was recorded.
    pub fn verify_closure(&self, gens: &[IntElement]) -> bool {
        let keys: HashMap<&[BigInt], i8> = self
            .points
            .iter()
            .filter_map(|p| match &p.point {
                ProjectivePoint::Exact(v) => Some((v.as_slice(), p.orientation)),
                ProjectivePoint::Float(_) => None,
            })
            .collect();
        self.points.iter().filter(|p| p.depth() < self.depth).all(|p| {
            let rep = p.representative();
            gens.iter().all(|g| {
                let (key, orientation) = normalize(&g.matrix.mul_vec(&rep));
                keys.get(key.as_slice()).is_some_and(|&o| o == orientation || self.sign_conflict.is_some())
            })
        })
    }
}

/// Linear functional positive on the whole cloud.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct ProperWitness {
    #[serde(with = "strings")]
    #[schemars(with = "Vec<String>")]
    pub functional: Vec<Rational>,
    /// Minimum of `⟨w, x⟩` over the oriented representatives, at least 1.
    #[serde(with = "super::string")]
    #[schemars(with = "String")]
    pub margin: Rational,
    pub points_checked: usize,
    pub lp_rounds: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum PropernessOutcome {
    Found(ProperWitness),
    /// Depth-limited: not a disproof of proper convexity.
    NoneFound { violating_depth: usize, reason: String },
}

fn pairing(w: &[Rational], x: &[BigInt]) -> Rational {
    w.iter().zip(x).fold(Rational::zero(), |acc, (a, b)| acc + a * Rational::from_integer(b.clone()))
}

impl ProperWitness {
    /// Re-checks `⟨w, x⟩ ≥ 1` exactly on every stored representative and the recorded margin.
    pub fn verify(&self, cloud: &OrbitCloud) -> bool {
        let pairings: Vec<Rational> = cloud.points.iter().map(|p| pairing(&self.functional, &p.representative())).collect();
        let min = pairings.iter().min().cloned();
        cloud.sign_conflict.is_none()
            && pairings.iter().all(|v| *v >= Rational::one())
            && min.is_some_and(|m| m == self.margin)
    }
}

/// Constraints added per cutting-plane round.
const CUTS_PER_ROUND: usize = 64;

/// Finds `w` with `⟨w, x⟩ ≥ 1` on every oriented orbit representative by
/// exact LP (minimizing `Σ|w_i|`), adding violated points as cuts.
pub fn properness_witness(cloud: &OrbitCloud) -> Result<PropernessOutcome> {
    if let Some(c) = &cloud.sign_conflict {
        return Ok(PropernessOutcome::NoneFound {
            violating_depth: c.depth,
            reason: format!("word {:?} reverses the orientation of the point reached by {:?}", c.word, c.existing_word),
        });
    }
    let n = cloud.seed.len();
    let reps: Vec<Vec<BigInt>> = cloud.points.iter().map(OrbitPoint::representative).collect();
    let mut active: Vec<usize> = (0..reps.len()).filter(|&k| cloud.points[k].depth() <= 1).collect();
    let objective = vec![-Rational::one(); 2 * n];
    let mut rounds = 0;
    loop {
        rounds += 1;
        let constraints: Vec<Constraint<Rational>> = active
            .iter()
            .map(|&k| {
                let x: Vec<Rational> = reps[k].iter().map(|v| Rational::from_integer(v.clone())).collect();
                let coeffs = x.iter().cloned().chain(x.iter().map(|v| -v.clone())).collect();
                Constraint::new(coeffs, Relation::Ge, Rational::one())
            })
            .collect();
        let w = match maximize(&objective, &constraints) {
            LpOutcome::Optimal { x, .. } => (0..n).map(|i| &x[i] - &x[n + i]).collect::<Vec<Rational>>(),
            LpOutcome::Infeasible => {
                let depth = active.iter().map(|&k| cloud.points[k].depth()).max().unwrap_or(0);
                return Ok(PropernessOutcome::NoneFound {
                    violating_depth: depth,
                    reason: format!("no functional is positive on the {} selected orbit points", active.len()),
                });
            }
            LpOutcome::Unbounded => return Err(Error::Unsupported("properness LP unbounded".into())),
        };
        let mut violated: Vec<(Rational, usize)> = reps
            .iter()
            .enumerate()
            .map(|(k, x)| (pairing(&w, x), k))
            .filter(|(v, _)| *v < Rational::one())
            .collect();
        if violated.is_empty() {
            let margin = reps.iter().map(|x| pairing(&w, x)).min().expect("nonempty cloud");
            return Ok(PropernessOutcome::Found(ProperWitness {
                functional: w,
                margin,
                points_checked: reps.len(),
                lp_rounds: rounds,
            }));
        }
        violated.sort();
        active.extend(violated.iter().take(CUTS_PER_ROUND).map(|&(_, k)| k));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::IntMatrix;
    use crate::vinberg::{integer_reflection_generators, GroupElement};

    fn paper() -> (CartanMatrix, Vec<IntElement>) {
        let a = CartanMatrix::pentagon_integral();
        let gens = integer_reflection_generators(&a).unwrap();
        (a, gens)
    }

    #[test]
    fn seed_examples() {
        let (a, _) = paper();
        let s = negative_type_seed(&a).unwrap();
        assert!(s.verify(&a));
        assert!(s.u.iter().all(|x| x.is_positive()) && s.au.iter().all(|x| x.is_negative()));
        let t = negative_type_seed(&a.transpose()).unwrap();
        assert!(t.verify(&a.transpose()));
        let pos = CartanMatrix::from_integer(&IntMatrix::from_i64(&[&[2, -1], &[-1, 2]])).unwrap();
        assert!(matches!(negative_type_seed(&pos), Err(Error::WrongType { .. })));
    }

    #[test]
    fn small_depths() {
        let (a, gens) = paper();
        let seed = negative_type_seed(&a.transpose()).unwrap().u;
        let c0 = orbit(&gens, &seed, 0, 100).unwrap();
        assert_eq!(c0.points.len(), 1);
        let c1 = orbit(&gens, &seed, 1, 100).unwrap();
        assert_eq!(c1.points.len(), 6);
        assert!(c1.verify_closure(&gens));
        match properness_witness(&c0).unwrap() {
            PropernessOutcome::Found(w) => assert!(w.verify(&c0)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(orbit(&gens, &seed, 11, 100), Err(Error::ResourceLimit { .. })));
        assert!(matches!(orbit(&gens, &seed, 4, 10), Err(Error::ResourceLimit { .. })));
    }

    #[test]
    fn paper_depth_four_is_proper() {
        let (a, gens) = paper();
        let seed = negative_type_seed(&a.transpose()).unwrap().u;
        let cloud = orbit(&gens, &seed, 4, DEFAULT_MAX_POINTS).unwrap();
        assert!(cloud.sign_conflict.is_none());
        assert!(cloud.verify_closure(&gens));
        let PropernessOutcome::Found(w) = properness_witness(&cloud).unwrap() else { panic!("no witness") };
        assert!(w.verify(&cloud));
        assert!(w.margin >= Rational::one());
        // Tampering with the functional breaks revalidation.
        let mut bad = w.clone();
        bad.functional[0] = -bad.functional[0].clone() - Rational::one();
        assert!(!bad.verify(&cloud));
    }

    #[test]
    fn commuting_hyperbolics_have_no_witness() {
        // H = [[2,1],[1,1]] and -H on the first two coordinates: (-H)·H⁻¹ = -I reverses the seed.
        let block = |s: i64| {
            let mut m = IntMatrix::identity(5);
            m[(0, 0)] = BigInt::from(2 * s);
            m[(0, 1)] = BigInt::from(s);
            m[(1, 0)] = BigInt::from(s);
            m[(1, 1)] = BigInt::from(s);
            m
        };
        let h = block(1);
        let h_inv = IntMatrix::from_i64(&[&[1, -1, 0, 0, 0], &[-1, 2, 0, 0, 0], &[0, 0, 1, 0, 0], &[0, 0, 0, 1, 0], &[0, 0, 0, 0, 1]]);
        assert!((&h * &h_inv).is_identity());
        let gens: Vec<IntElement> = [h, h_inv, block(-1)]
            .into_iter()
            .enumerate()
            .map(|(k, m)| GroupElement { matrix: m, word: vec![k] })
            .collect();
        let seed: Vec<BigInt> = [1, 0, 0, 0, 0].iter().map(|&x| BigInt::from(x)).collect();
        let cloud = orbit(&gens, &seed, 8, DEFAULT_MAX_POINTS).unwrap();
        match properness_witness(&cloud).unwrap() {
            PropernessOutcome::NoneFound { violating_depth, .. } => assert!(violating_depth <= 8),
            other => panic!("unexpected {other:?}"),
        }
    }
}
