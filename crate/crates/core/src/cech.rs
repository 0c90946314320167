//! Multidegree slices of the Čech complex of `R/I` and of its restriction
//! to localizations `x_Λ` with `F ⊆ Λ`.
//!
//! In a fixed multidegree every nonzero summand `(R/I)_{x_Λ}` is spanned by
//! the single Laurent monomial `x^a`, so a slice is a complex of 0/1
//! dimensional pieces with signed incidence differentials.

use crate::error::{input, Result};
use crate::linalg::{check_chain_map, ExactMatrix, FiniteComplex, PrimeField};
use crate::monomial::{Face, MonomialIdeal, Multidegree};

/// The degree-`a` slice of `Č•_F ⊗ R/I`.
#[derive(Debug, Clone)]
pub struct DegreeComplex {
    degree: Multidegree,
    face: Face,
    terms: Vec<Vec<Face>>,
    complex: FiniteComplex,
}

impl DegreeComplex {
    pub fn n(&self) -> usize {
        self.degree.n()
    }

    pub fn degree(&self) -> &Multidegree {
        &self.degree
    }

    pub fn face(&self) -> Face {
        self.face
    }

    /// Nonzero summands `Λ` at cohomological index `i`, in mask order.
    pub fn summands(&self, i: usize) -> &[Face] {
        &self.terms[i]
    }

    pub fn complex(&self) -> &FiniteComplex {
        &self.complex
    }

    pub fn cohomology_dims(&self) -> Vec<usize> {
        self.complex.cohomology_dims()
    }
}

fn check_args(ideal: &MonomialIdeal, a: &Multidegree, face: Face) -> Result<()> {
    ideal.require_proper()?;
    ideal.check_vars(a.n())?;
    if !face.is_subset_of(Face::full(ideal.n())) {
        return input(format!("face {:?} is not a subset of [{}]", face.one_based(), ideal.n()));
    }
    Ok(())
}

fn assemble(
    field: PrimeField,
    degree: Multidegree,
    face: Face,
    terms: Vec<Vec<Face>>,
) -> Result<DegreeComplex> {
    let n = degree.n();
    let diffs = (0..n)
        .map(|i| {
            let (src, dst) = (&terms[i], &terms[i + 1]);
            let mut d = ExactMatrix::zeros(field, dst.len(), src.len());
            for (col, lam) in src.iter().enumerate() {
                for j in (0..n).filter(|&j| !lam.contains(j)) {
                    if let Ok(row) = dst.binary_search(&lam.with(j)) {
                        d.set(row, col, field.sign(lam.count_below(j)));
                    }
                }
            }
            d
        })
        .collect();
    let dims = terms.iter().map(Vec::len).collect();
    let complex = FiniteComplex::new(field, dims, diffs)?;
    Ok(DegreeComplex {
        degree,
        face,
        terms,
        complex,
    })
}

/// Slice of the restricted complex `Č•_F ⊗ R/I` in degree `a`; `F = ∅`
/// gives the whole Čech complex.
pub fn build_degree_complex(
    ideal: &MonomialIdeal,
    a: &Multidegree,
    face: Face,
    field: PrimeField,
) -> Result<DegreeComplex> {
    check_args(ideal, a, face)?;
    let n = ideal.n();
    let terms = (0..=n)
        .map(|i| {
            if i < face.len() {
                return Vec::new();
            }
            Face::subsets_of_size(n, i)
                .filter(|lam| face.is_subset_of(*lam) && ideal.localized_nonzero(*lam, a))
                .collect()
        })
        .collect();
    assemble(field, a.clone(), face, terms)
}

/// Slice of the unrestricted Čech complex, with summand survival decided
/// from the definition of localization rather than the generator rule.
/// Used to cross-check [`build_degree_complex`].
pub fn build_full_degree_complex(
    ideal: &MonomialIdeal,
    a: &Multidegree,
    field: PrimeField,
) -> Result<DegreeComplex> {
    check_args(ideal, a, Face::EMPTY)?;
    let n = ideal.n();
    let terms = (0..=n)
        .map(|i| {
            Face::subsets_of_size(n, i)
                .filter(|lam| ideal.localized_nonzero_by_saturation(*lam, a))
                .collect()
        })
        .collect();
    assemble(field, a.clone(), Face::EMPTY, terms)
}

/// The slice used in production: restricted to `F = supp(a-)`.
pub fn natural_slice(ideal: &MonomialIdeal, a: &Multidegree, field: PrimeField) -> Result<DegreeComplex> {
    build_degree_complex(ideal, a, a.minus_support(), field)
}

/// `dim_k H^i_m(R/I)_a`.
pub fn local_cohomology_dim(
    ideal: &MonomialIdeal,
    i: usize,
    a: &Multidegree,
    field: PrimeField,
) -> Result<usize> {
    if i > ideal.n() {
        return input(format!("cohomological index {i} exceeds n = {}", ideal.n()));
    }
    Ok(natural_slice(ideal, a, field)?.complex().cohomology_dim(i))
}

/// Multiplication by `x_j` from the slice at `a` to the slice at `a + e_j`.
#[derive(Debug, Clone)]
pub struct ChainMultiplication {
    pub source: DegreeComplex,
    pub target: DegreeComplex,
    pub components: Vec<ExactMatrix>,
}

/// 0/1 matrices of `x_j : slice(a) -> slice(a + e_j)` between two slices
/// that share their summand labels.
pub fn multiplication_components(
    source: &DegreeComplex,
    target: &DegreeComplex,
    field: PrimeField,
) -> Vec<ExactMatrix> {
    (0..source.terms.len())
        .map(|t| {
            let (src, dst) = (&source.terms[t], &target.terms[t]);
            let mut m = ExactMatrix::zeros(field, dst.len(), src.len());
            for (col, lam) in src.iter().enumerate() {
                if let Ok(row) = dst.binary_search(lam) {
                    m.set(row, col, 1);
                }
            }
            m
        })
        .collect()
}

/// Both slices are built with the same restriction face `F`. The result
/// computes local cohomology on both ends only when `F ⊆ supp((a+e_j)-)`.
pub fn chain_multiplication_map(
    ideal: &MonomialIdeal,
    a: &Multidegree,
    j: usize,
    face: Face,
    field: PrimeField,
) -> Result<ChainMultiplication> {
    if j >= ideal.n() {
        return input(format!("variable index {} out of range", j + 1));
    }
    let source = build_degree_complex(ideal, a, face, field)?;
    let target = build_degree_complex(ideal, &a.step(j), face, field)?;
    let components = multiplication_components(&source, &target, field);
    check_chain_map(source.complex(), target.complex(), &components)?;
    Ok(ChainMultiplication {
        source,
        target,
        components,
    })
}
