use serde::{Deserialize, Serialize};

/// Automorphism of Q(√2, √3, √5), given by the signs it puts on √2, √3, √5.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, schemars::JsonSchema)]
pub struct GaloisMap {
    pub signs: [i8; 3],
}

impl GaloisMap {
    pub const IDENTITY: GaloisMap = GaloisMap { signs: [1, 1, 1] };

    pub fn new(sqrt2: i8, sqrt3: i8, sqrt5: i8) -> Self {
        let norm = |s: i8| if s < 0 { -1 } else { 1 };
        GaloisMap { signs: [norm(sqrt2), norm(sqrt3), norm(sqrt5)] }
    }

    /// All eight automorphisms, identity first.
    pub fn all() -> impl Iterator<Item = GaloisMap> {
        (0..8u8).map(|bits| {
            let s = |b: u8| if bits & (1 << b) != 0 { -1 } else { 1 };
            GaloisMap { signs: [s(0), s(1), s(2)] }
        })
    }

    pub fn is_identity(&self) -> bool {
        self.signs == [1, 1, 1]
    }

    /// Sign applied to the radical whose prime-support bitmask is `mask`.
    pub(crate) fn sign_of_mask(&self, mask: usize) -> i8 {
        (0..3)
            .filter(|b| mask & (1 << b) != 0)
            .map(|b| self.signs[b])
            .product()
    }
}

impl Default for GaloisMap {
    fn default() -> Self {
        GaloisMap::IDENTITY
    }
}
