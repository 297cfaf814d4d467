//! Zariski density certification: Burnside span, characteristic polynomials,
//! factor patterns modulo primes, and S5 Galois certificates.

mod density;
mod galois;
mod modp;
mod poly;

pub use density::{
    burnside_span_dim, certify_zariski_dense, even_subgroup_generators, CertificateCheck, DensityBudget,
    DensityCertificate, DensityOutcome, DensityShortfall, ShortlexWords, DEFAULT_MAX_WORDS, DEFAULT_PRIME_BOUND, DEFAULT_WORD_LENGTH,
};
pub use galois::{
    galois_s5_certificate, irreducibility_over_q, is_transposition_pattern, Irreducibility, S5Outcome,
    TRANSPOSITION_PATTERNS,
};
pub use modp::{factor_pattern_mod_p, is_prime, primes_up_to, FactorPattern};
pub use poly::{char_poly, IntPolynomial};
