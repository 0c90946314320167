//! Stanley decompositions of Ext modules and verification that their
//! ordering is a Stanley filtration.
//!
//! Every box degree `b` of an Ext module satisfies `b <= (1,..,1)`, so
//! `b+` is square-free and each basis vector `m` of `M_b` spans the Stanley
//! space `k[x_F] m` with `F = supp(b+)`. Ordering the pairs by
//! non-increasing total degree turns the decomposition into a filtration
//! `M^(1) ⊆ M^(2) ⊆ ...` with `M^(j)/M^(j-1) = k[x_{F_j}](-deg m_j)`.

use std::cmp::Reverse;
use std::collections::BTreeMap;

use serde::Serialize;

use crate::ext::BoxModule;
use crate::linalg::SpanBasis;
use crate::monomial::{Face, Multidegree};

/// A generator `m` (basis vector `basis_index` of `M_degree`) together with
/// the variables acting freely on it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct StanleyPair {
    pub face: Face,
    pub degree: Multidegree,
    pub basis_index: usize,
}

impl StanleyPair {
    /// Whether `c ∈ deg m + N^F`.
    pub fn covers(&self, c: &Multidegree) -> bool {
        (0..c.n()).all(|k| {
            if self.face.contains(k) {
                c.0[k] >= self.degree.0[k]
            } else {
                c.0[k] == self.degree.0[k]
            }
        })
    }

    fn basis_vector(&self, dim: usize) -> Vec<u64> {
        let mut v = vec![0; dim];
        v[self.basis_index] = 1;
        v
    }
}

/// One Stanley space type with multiplicity, as written to reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StanleySpace {
    pub face: Face,
    pub degree: Multidegree,
    pub count: usize,
}

/// An ordered list of Stanley pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StanleyDecomposition {
    n: usize,
    pairs: Vec<StanleyPair>,
}

impl StanleyDecomposition {
    /// Take the pairs in the given order, without reordering or checks.
    pub fn from_pairs(n: usize, pairs: Vec<StanleyPair>) -> Self {
        StanleyDecomposition { n, pairs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> &[StanleyPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Number of basis elements `u m` (`u ∈ k[F]` a monomial) in degree `c`.
    pub fn count_at(&self, c: &Multidegree) -> usize {
        self.pairs.iter().filter(|p| p.covers(c)).count()
    }

    /// Pairs grouped by `(face, degree)` in filtration order of first
    /// appearance.
    pub fn summary(&self) -> Vec<StanleySpace> {
        let mut order: Vec<(Face, Multidegree)> = Vec::new();
        let mut counts: BTreeMap<(Face, Multidegree), usize> = BTreeMap::new();
        for p in &self.pairs {
            let key = (p.face, p.degree.clone());
            let slot = counts.entry(key.clone()).or_insert(0);
            if *slot == 0 {
                order.push(key);
            }
            *slot += 1;
        }
        order
            .into_iter()
            .map(|(face, degree)| {
                let count = counts[&(face, degree.clone())];
                StanleySpace {
                    face,
                    degree,
                    count,
                }
            })
            .collect()
    }

    /// First degree of `region` where the pair count differs from the
    /// module's dimension.
    pub fn counting_mismatch(
        &self,
        module: &BoxModule,
        region: impl IntoIterator<Item = Multidegree>,
    ) -> Option<Multidegree> {
        region
            .into_iter()
            .find(|c| self.count_at(c) != module.evaluate_at_degree(c))
    }
}

/// One pair per basis vector of every box degree, ordered by non-increasing
/// total degree with ties broken by `(face, degree, basis index)`.
pub fn build_stanley_decomposition(module: &BoxModule) -> StanleyDecomposition {
    let mut pairs: Vec<StanleyPair> = module
        .hilbert()
        .into_iter()
        .flat_map(|(degree, dim)| {
            let face = degree.plus_support();
            (0..dim).map(move |basis_index| StanleyPair {
                face,
                degree: degree.clone(),
                basis_index,
            })
        })
        .collect();
    pairs.sort_by_key(|p| (Reverse(p.degree.total_degree()), p.face, p.degree.clone(), p.basis_index));
    StanleyDecomposition {
        n: module.n(),
        pairs,
    }
}

/// `max totdeg(deg m)`; `None` for the zero module.
pub fn filtration_reg_bound(s: &StanleyDecomposition) -> Option<i64> {
    s.pairs.iter().map(|p| p.degree.total_degree()).max()
}

/// `max |F|`; `None` for the zero module.
pub fn krull_dimension(s: &StanleyDecomposition) -> Option<usize> {
    s.pairs.iter().map(|p| p.face.len()).max()
}

/// Which filtration condition failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FiltrationCondition {
    /// `x_l m_j ∈ M^(j-1)` for every `x_l` outside `G_j`.
    ColonContainsOutsideVariables,
    /// `u m_j ∉ M^(j-1)` for monomials `u ∈ k[G_j]`.
    FreeOnFace,
    /// The elements `u m_i`, `i <= j`, form a basis of `M^(j)`.
    Basis,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiltrationViolation {
    pub condition: FiltrationCondition,
    /// 1-based position in the filtration order.
    pub position: usize,
    /// 1-based variable index, for the colon condition.
    pub variable: Option<usize>,
    pub degree: Multidegree,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiltrationReport {
    pub passed: bool,
    pub violation: Option<FiltrationViolation>,
}

/// Check conditions (A) and (B) of a Stanley filtration on the box grown by
/// two steps upward, which covers every degree where they can first fail.
///
/// For each degree `c` the pairs are swept in order while the span of
/// `x^{c - deg m_i} m_i` (`i < j`), which is `M^(j-1)_c`, is grown.
pub fn verify_filtration(s: &StanleyDecomposition, module: &BoxModule) -> FiltrationReport {
    let region = module.degree_box().expanded(0, 2);
    let mut first: Option<FiltrationViolation> = None;
    let mut record = |v: FiltrationViolation| {
        let key = |x: &FiltrationViolation| (x.position, x.condition, x.degree.clone());
        if first.as_ref().is_none_or(|f| key(&v) < key(f)) {
            first = Some(v);
        }
    };

    for c in region.points() {
        let dim_c = module.evaluate_at_degree(&c);
        let mut span = SpanBasis::new(module.field(), dim_c);
        let mut count = 0;
        for (j, pair) in s.pairs.iter().enumerate() {
            let position = j + 1;
            if pair.degree.le(&c) {
                let source_dim = module.dim(&pair.degree).unwrap_or(0);
                let v = module.act(&pair.degree, &c, &pair.basis_vector(source_dim));
                let shift = c.sub(&pair.degree);
                let moved = shift.support();
                let outside = match moved.iter().collect::<Vec<_>>()[..] {
                    [l] if shift.total_degree() == 1 && !pair.face.contains(l) => Some(l),
                    _ => None,
                };
                if let Some(l) = outside {
                    if !span.contains(&v) {
                        record(FiltrationViolation {
                            condition: FiltrationCondition::ColonContainsOutsideVariables,
                            position,
                            variable: Some(l + 1),
                            degree: c.clone(),
                        });
                    }
                }
                let face_step = moved.is_empty()
                    || (moved == pair.face && shift.0.iter().all(|&x| x <= 1));
                if face_step && span.contains(&v) {
                    record(FiltrationViolation {
                        condition: FiltrationCondition::FreeOnFace,
                        position,
                        variable: None,
                        degree: c.clone(),
                    });
                }
                span.insert(&v);
            }
            if pair.covers(&c) {
                count += 1;
            }
            if span.rank() != count {
                record(FiltrationViolation {
                    condition: FiltrationCondition::Basis,
                    position,
                    variable: None,
                    degree: c.clone(),
                });
            }
        }
        if span.rank() != dim_c {
            record(FiltrationViolation {
                condition: FiltrationCondition::Basis,
                position: s.pairs.len(),
                variable: None,
                degree: c.clone(),
            });
        }
    }

    FiltrationReport {
        passed: first.is_none(),
        violation: first,
    }
}
