use serde::{Deserialize, Serialize};

use super::{cartan_from_diagram, signature, CoxeterDiagram, SignatureReport};
use crate::error::Result;
use crate::linalg::Matrix;
use crate::numfield::{mask_of, AlgNum, GaloisMap, DEGREE};

/// Galois conjugate of a Cartan matrix and its inertia.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct ConjugateReport {
    pub galois: GaloisMap,
    pub signature: SignatureReport,
    pub positive_definite: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct ArithmeticityReport {
    /// Field generated by the matrix entries, e.g. `Q(√2)`.
    pub field: String,
    /// Radicands of a generating set of square roots for the entry field.
    pub field_radicands: Vec<u32>,
    pub field_degree: usize,
    /// One conjugate for every nontrivial automorphism of the entry field.
    pub conjugates: Vec<ConjugateReport>,
    pub all_conjugates_positive_definite: bool,
}

/// Basis of the GF(2) span of the prime-support masks occurring in `m`,
/// chosen greedily by increasing radicand so the generators are canonical.
fn entry_field_basis(m: &Matrix<AlgNum>) -> Vec<usize> {
    let mut span = 1u8; // bit k set when mask k lies in the span
    for x in m.as_slice() {
        let support = x.support();
        for pos in (1..DEGREE).filter(|p| support & (1 << p) != 0) {
            span = close_span(span, mask_of(pos));
        }
    }
    let mut basis = Vec::new();
    let mut chosen = 1u8;
    for pos in 1..DEGREE {
        let mask = mask_of(pos);
        if span & (1 << mask) != 0 && chosen & (1 << mask) == 0 {
            basis.push(mask);
            chosen = close_span(chosen, mask);
        }
    }
    basis
}

fn close_span(span: u8, mask: usize) -> u8 {
    (0..8).filter(|k| span & (1 << k) != 0).fold(span, |acc, k| acc | (1 << (k ^ mask)))
}

fn radicand_of_mask(mask: usize) -> u32 {
    [2u32, 3, 5].iter().enumerate().filter(|(b, _)| mask & (1 << b) != 0).map(|(_, p)| p).product()
}

/// Galois-conjugate positivity check for the Cartan matrix of `d`.
pub fn arithmeticity_report(d: &CoxeterDiagram) -> Result<ArithmeticityReport> {
    arithmeticity_report_for_matrix(cartan_from_diagram(d)?.entries())
}

/// Conjugates the matrix by one representative of each nontrivial
/// automorphism of its entry field and reports each signature.
pub fn arithmeticity_report_for_matrix(m: &Matrix<AlgNum>) -> Result<ArithmeticityReport> {
    let basis = entry_field_basis(m);
    let field_radicands: Vec<u32> = basis.iter().map(|&b| radicand_of_mask(b)).collect();
    let field = if field_radicands.is_empty() {
        "Q".to_string()
    } else {
        let gens: Vec<String> = field_radicands.iter().map(|r| format!("√{r}")).collect();
        format!("Q({})", gens.join(", "))
    };
    let mut seen = Vec::new();
    let mut conjugates = Vec::new();
    for g in GaloisMap::all() {
        let restriction: Vec<i8> = basis.iter().map(|&b| g.sign_of_mask(b)).collect();
        if restriction.iter().all(|&s| s > 0) || seen.contains(&restriction) {
            continue;
        }
        seen.push(restriction);
        let conj = m.map(|x| x.apply_galois(&g));
        let sig = signature(&conj)?;
        conjugates.push(ConjugateReport { galois: g, positive_definite: sig.is_positive_definite(), signature: sig });
    }
    Ok(ArithmeticityReport {
        field,
        field_degree: 1 << basis.len(),
        field_radicands,
        all_conjugates_positive_definite: conjugates.iter().all(|c| c.positive_definite),
        conjugates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pentagon_is_arithmetic() {
        let r = arithmeticity_report(&CoxeterDiagram::lanner_pentagon()).unwrap();
        assert_eq!(r.field, "Q(√2)");
        assert_eq!(r.field_degree, 2);
        assert_eq!(r.conjugates.len(), 1);
        assert_eq!(r.conjugates[0].signature, SignatureReport::new(5, 0, 0));
        assert!(r.all_conjugates_positive_definite);
    }

    #[test]
    fn rational_diagram_has_no_conjugates() {
        let r = arithmeticity_report(&CoxeterDiagram::path(&[3, 3, 2, 3]).unwrap()).unwrap();
        assert_eq!(r.field, "Q");
        assert!(r.conjugates.is_empty());
        assert!(r.all_conjugates_positive_definite);
    }

    #[test]
    fn triangle_444() {
        let d = CoxeterDiagram::from_edges(3, &[(0, 1, 4), (1, 2, 4), (0, 2, 4)]).unwrap();
        let a = cartan_from_diagram(&d).unwrap();
        // Eigenvalues 2 - 2√2 and 2 + √2 (twice).
        assert_eq!(signature(a.entries()).unwrap(), SignatureReport::new(2, 0, 1));
        let r = arithmeticity_report(&d).unwrap();
        // Conjugate eigenvalues 2 + 2√2 and 2 - √2 (twice), all positive.
        assert_eq!(r.conjugates.len(), 1);
        assert_eq!(r.conjugates[0].signature, SignatureReport::new(3, 0, 0));
    }

    #[test]
    fn mixed_fields() {
        // Labels 4, 5 and 6 give entries in Q(√2), Q(√5) and Q(√3).
        let d = CoxeterDiagram::path(&[4, 5, 6]).unwrap();
        let r = arithmeticity_report(&d).unwrap();
        assert_eq!(r.field_radicands, vec![2, 3, 5]);
        assert_eq!(r.field_degree, 8);
        assert_eq!(r.conjugates.len(), 7);
    }
}
