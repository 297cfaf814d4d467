//! Projective geometry of the reflection group action: orbits of a
//! negative-type seed, properness witnesses, limit-set samples and rendering.

mod limit;
mod orbit;
mod render;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

pub use limit::{
    attracting_direction, limit_set_sample, LimitPoint, LimitSetSample, WordSampler, DEFAULT_SAMPLE_COUNT, DEFAULT_SAMPLE_WORD_LENGTH,
    MAX_SAMPLE_COUNT, MAX_SAMPLE_WORD_LENGTH, POWER_ITERATION_CAP, POWER_TOLERANCE, PROXIMALITY_GAP,
};
pub use orbit::{
    negative_type_seed, orbit, properness_witness, NegativeTypeSeed, OrbitCloud, OrbitPoint, PropernessOutcome, ProperWitness,
    SignConflict, DEFAULT_MAX_POINTS, DEFAULT_ORBIT_DEPTH, MAX_ORBIT_DEPTH,
};
pub use render::{render_csv, render_svg, Chart, PlotPoint, RenderReport, SVG_SIZE};

/// A point of projective space given by a representative vector: exact
/// integer coordinates (orbit points) or unit-normalized floats (limit points).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(tag = "tag", content = "vector", rename_all = "lowercase")]
pub enum ProjectivePoint {
    Exact(
        #[serde(with = "strings")]
        #[schemars(with = "Vec<String>")]
        Vec<BigInt>,
    ),
    Float(Vec<f64>),
}

impl ProjectivePoint {
    pub fn dim(&self) -> usize {
        match self {
            ProjectivePoint::Exact(v) => v.len(),
            ProjectivePoint::Float(v) => v.len(),
        }
    }

    /// Coordinates as floats (exact coordinates are converted, not scaled).
    pub fn to_f64(&self) -> Vec<f64> {
        use num_traits::ToPrimitive;
        match self {
            ProjectivePoint::Exact(v) => v.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect(),
            ProjectivePoint::Float(v) => v.clone(),
        }
    }
}

/// Serializes a vector of exact numbers as decimal strings.
pub(crate) mod strings {
    use std::fmt::Display;
    use std::str::FromStr;

    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<T: Display, S: Serializer>(v: &[T], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<Vec<T>, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        Vec::<String>::deserialize(d)?.iter().map(|x| x.parse().map_err(D::Error::custom)).collect()
    }
}

/// Serializes one exact number as a decimal string.
pub(crate) mod string {
    use std::fmt::Display;
    use std::str::FromStr;

    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<T, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projective_point_json_shape() {
        let p = ProjectivePoint::Exact(vec![BigInt::from(-3), BigInt::from(12345678901234567890u64)]);
        let j = serde_json::to_value(&p).unwrap();
        assert_eq!(j, serde_json::json!({"tag": "exact", "vector": ["-3", "12345678901234567890"]}));
        assert_eq!(serde_json::from_value::<ProjectivePoint>(j).unwrap(), p);
        let f = ProjectivePoint::Float(vec![0.5, -0.25]);
        let j = serde_json::to_value(&f).unwrap();
        assert_eq!(j, serde_json::json!({"tag": "float", "vector": [0.5, -0.25]}));
        assert_eq!(serde_json::from_value::<ProjectivePoint>(j).unwrap(), f);
        assert!(serde_json::from_value::<ProjectivePoint>(serde_json::json!({"tag": "exact", "vector": ["x"]})).is_err());
    }
}
