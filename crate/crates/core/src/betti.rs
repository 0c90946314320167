//! Multigraded Betti numbers via Koszul homology, Castelnuovo–Mumford
//! regularity, and the per-module inequality checks.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Result;
use crate::ext::{build_ext_module, BoxModule};
use crate::linalg::{ExactMatrix, FiniteComplex, PrimeField};
use crate::monomial::{Face, MonomialIdeal, Multidegree};
use crate::stanley::{
    build_stanley_decomposition, filtration_reg_bound, krull_dimension, verify_filtration,
    FiltrationReport, StanleyDecomposition, StanleySpace,
};

/// `β_{i,a} = dim_k Tor_i(M, k)_a`, nonzero entries only.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BettiTable {
    entries: BTreeMap<(usize, Multidegree), usize>,
}

impl BettiTable {
    pub fn get(&self, i: usize, a: &Multidegree) -> usize {
        self.entries.get(&(i, a.clone())).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Multidegree, usize)> {
        self.entries.iter().map(|((i, a), &b)| (*i, a, b))
    }

    /// Sparse `[i, degree, multiplicity]` triples.
    pub fn triples(&self) -> Vec<(usize, Multidegree, usize)> {
        self.iter().map(|(i, a, b)| (i, a.clone(), b)).collect()
    }

    fn insert(&mut self, i: usize, a: Multidegree, b: usize) {
        if b > 0 {
            self.entries.insert((i, a), b);
        }
    }
}

/// Degree-`a` strand of `M ⊗ K(x_1..x_n)`, reindexed cohomologically:
/// term `c` is `K_{n-c} = ⊕_{|S| = n-c} M_{a - e_S}`.
pub fn koszul_slice(module: &BoxModule, a: &Multidegree) -> Result<FiniteComplex> {
    let n = module.n();
    let field = module.field();
    // blocks[s] = [(S, offset, dim)] for |S| = s
    let blocks: Vec<Vec<(Face, usize, usize)>> = (0..=n)
        .map(|s| {
            let mut offset = 0;
            Face::subsets_of_size(n, s)
                .map(|set| {
                    let dim = module.evaluate_at_degree(&a.minus_face(set));
                    let entry = (set, offset, dim);
                    offset += dim;
                    entry
                })
                .collect()
        })
        .collect();
    let total = |s: usize| blocks[s].iter().map(|b| b.2).sum::<usize>();
    let dims: Vec<usize> = (0..=n).map(|c| total(n - c)).collect();

    let diffs = (0..n)
        .map(|c| {
            let s = n - c;
            let mut d = ExactMatrix::zeros(field, total(s - 1), total(s));
            for &(set, col_off, dim) in &blocks[s] {
                if dim == 0 {
                    continue;
                }
                let source_degree = a.minus_face(set);
                for j in set.iter() {
                    let smaller = set.without(j);
                    let &(_, row_off, _) = blocks[s - 1]
                        .iter()
                        .find(|b| b.0 == smaller)
                        .expect("every subset is listed");
                    let m = module.mult_at(&source_degree, j);
                    let sign = field.sign(set.count_below(j));
                    for r in 0..m.rows() {
                        for k in 0..m.cols() {
                            let x = m.get(r, k);
                            if x != 0 {
                                d.set(row_off + r, col_off + k, field.mul(sign, x));
                            }
                        }
                    }
                }
            }
            d
        })
        .collect();
    FiniteComplex::new(field, dims, diffs)
}

/// Betti numbers of an Ext module. Candidate degrees are the box grown by
/// one step upward: from `a_j >= 2` on, `x_j` acts bijectively on every
/// term of the strand, which is then exact.
pub fn koszul_betti(module: &BoxModule) -> Result<BettiTable> {
    let n = module.n();
    let mut table = BettiTable::default();
    if module.is_zero() {
        return Ok(table);
    }
    for a in module.degree_box().expanded(0, 1).points() {
        let h = koszul_slice(module, &a)?.cohomology_dims();
        for (c, &dim) in h.iter().enumerate() {
            table.insert(n - c, a.clone(), dim);
        }
    }
    Ok(table)
}

/// `max { |a| - i : β_{i,a} != 0 }`; `None` for the zero module.
pub fn regularity(table: &BettiTable) -> Option<i64> {
    table.iter().map(|(i, a, _)| a.total_degree() - i as i64).max()
}

/// Number of minimal generators in degree `a`:
/// `dim M_a - rank [x_1 M_{a-e_1} | ... | x_n M_{a-e_n}]`.
pub fn minimal_generators_at(module: &BoxModule, a: &Multidegree) -> usize {
    let dim = module.evaluate_at_degree(a);
    let field = module.field();
    let mut columns: Vec<Vec<u64>> = Vec::new();
    for j in 0..module.n() {
        let m = module.mult_at(&a.step_down(j), j);
        columns.extend((0..m.cols()).map(|k| m.column(k)));
    }
    dim - ExactMatrix::from_columns(field, dim, &columns).rank()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HilbertEntry {
    pub degree: Multidegree,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PassFlags {
    /// `reg <= dim`.
    pub theorem: bool,
    /// `reg <= filtration bound <= dim <= n - i`.
    pub chain: bool,
    /// `dim <= n - i`.
    pub corollary: bool,
    /// Finite length implies `reg <= 0`.
    pub finite_length: bool,
    /// Conditions (A) and (B) hold for the filtration order.
    pub filtration: bool,
}

impl PassFlags {
    pub fn all(&self) -> bool {
        self.theorem && self.chain && self.corollary && self.finite_length && self.filtration
    }
}

/// Everything computed for one `Ext^i(R/I, ω_R)`.
#[derive(Debug, Clone, Serialize)]
pub struct TheoremReport {
    pub i: usize,
    pub box_lower: Multidegree,
    pub box_upper: Multidegree,
    pub zero_module: bool,
    pub hilbert: Vec<HilbertEntry>,
    pub stanley: Vec<StanleySpace>,
    pub filtration_order: Vec<(Face, Multidegree, usize)>,
    pub filtration: FiltrationReport,
    pub reg_filtration_bound: Option<i64>,
    pub betti: Vec<(usize, Multidegree, usize)>,
    pub reg_exact: Option<i64>,
    pub dim: Option<usize>,
    pub finite_length: bool,
    pub pass: PassFlags,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.pass.all()
    }

    /// Human-readable description of the first failed check.
    pub fn failure(&self) -> Option<String> {
        let show = |x: Option<i64>| x.map_or("empty".to_string(), |v| v.to_string());
        let dim = self.dim.map(|d| d as i64);
        if !self.pass.filtration {
            let v = self.filtration.violation.as_ref();
            return Some(format!(
                "filtration condition {:?} fails at position {} degree {}",
                v.map(|v| v.condition),
                v.map_or(0, |v| v.position),
                v.map_or_else(String::new, |v| v.degree.to_string())
            ));
        }
        if !self.pass.theorem {
            return Some(format!("reg {} > dim {}", show(self.reg_exact), show(dim)));
        }
        if !self.pass.chain || !self.pass.corollary {
            return Some(format!(
                "chain reg {} <= bound {} <= dim {} <= n-i fails",
                show(self.reg_exact),
                show(self.reg_filtration_bound),
                show(dim)
            ));
        }
        if !self.pass.finite_length {
            return Some(format!("finite length module with reg {}", show(self.reg_exact)));
        }
        None
    }
}

/// All artifacts of the pipeline for one index.
#[derive(Debug, Clone)]
pub struct ModuleAnalysis {
    pub module: BoxModule,
    pub decomposition: StanleyDecomposition,
    pub betti: BettiTable,
    pub report: TheoremReport,
}

fn le(a: Option<i64>, b: Option<i64>) -> bool {
    match (a, b) {
        (Some(x), Some(y)) => x <= y,
        _ => true,
    }
}

/// Run the whole pipeline for `Ext^i(R/I, ω_R)` and compare
/// `reg <= filtration bound <= dim <= n - i`.
pub fn analyze_module(ideal: &MonomialIdeal, i: usize, field: PrimeField) -> Result<ModuleAnalysis> {
    let n = ideal.n() as i64;
    let module = build_ext_module(ideal, i, field)?;
    let decomposition = build_stanley_decomposition(&module);
    let filtration = verify_filtration(&decomposition, &module);
    let betti = koszul_betti(&module)?;

    let reg_exact = regularity(&betti);
    let bound = filtration_reg_bound(&decomposition);
    let dim = krull_dimension(&decomposition);
    let dim_i = dim.map(|d| d as i64);
    let codim = Some(n - i as i64);
    let finite_length = module.is_finite_length();

    let pass = PassFlags {
        theorem: le(reg_exact, dim_i),
        chain: le(reg_exact, bound) && le(bound, dim_i) && le(dim_i, codim),
        corollary: le(dim_i, codim) && le(reg_exact, codim),
        finite_length: !finite_length || le(reg_exact, Some(0)),
        filtration: filtration.passed,
    };

    let report = TheoremReport {
        i,
        box_lower: module.degree_box().lower().clone(),
        box_upper: module.degree_box().upper().clone(),
        zero_module: module.is_zero(),
        hilbert: module
            .hilbert()
            .into_iter()
            .map(|(degree, dim)| HilbertEntry { degree, dim })
            .collect(),
        stanley: decomposition.summary(),
        filtration_order: decomposition
            .pairs()
            .iter()
            .map(|p| (p.face, p.degree.clone(), p.basis_index))
            .collect(),
        filtration,
        reg_filtration_bound: bound,
        betti: betti.triples(),
        reg_exact,
        dim,
        finite_length,
        pass,
    };
    Ok(ModuleAnalysis {
        module,
        decomposition,
        betti,
        report,
    })
}

/// Theorem-level report for one index.
pub fn verify_theorem(ideal: &MonomialIdeal, i: usize, field: PrimeField) -> Result<TheoremReport> {
    Ok(analyze_module(ideal, i, field)?.report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> PrimeField {
        PrimeField::new(2).unwrap()
    }

    fn ideal(n: usize, gens: &[&[u32]]) -> MonomialIdeal {
        MonomialIdeal::new(n, gens.iter().map(|g| g.to_vec()).collect()).unwrap()
    }

    fn md(v: &[i64]) -> Multidegree {
        Multidegree(v.to_vec())
    }

    fn table(entries: &[(usize, &[i64], usize)]) -> BettiTable {
        let mut t = BettiTable::default();
        for &(i, a, b) in entries {
            t.insert(i, md(a), b);
        }
        t
    }

    #[test]
    fn koszul_resolution_of_residue_field() {
        let m = build_ext_module(&MonomialIdeal::maximal(2), 2, f2()).unwrap();
        let b = koszul_betti(&m).unwrap();
        assert_eq!(
            b,
            table(&[(0, &[0, 0], 1), (1, &[1, 0], 1), (1, &[0, 1], 1), (2, &[1, 1], 1)])
        );
        assert_eq!(regularity(&b), Some(0));
    }

    #[test]
    fn ext_of_quotient_by_square() {
        let m = build_ext_module(&ideal(1, &[&[2]]), 1, f2()).unwrap();
        let b = koszul_betti(&m).unwrap();
        assert_eq!(b, table(&[(0, &[-1], 1), (1, &[1], 1)]));
        assert_eq!(regularity(&b), Some(0));
        assert_eq!(minimal_generators_at(&m, &md(&[-1])), 1);
        assert_eq!(minimal_generators_at(&m, &md(&[0])), 0);
    }

    #[test]
    fn ext_of_hyperplane() {
        let m = build_ext_module(&ideal(2, &[&[1, 0]]), 1, f2()).unwrap();
        let b = koszul_betti(&m).unwrap();
        assert_eq!(b, table(&[(0, &[0, 1], 1), (1, &[1, 1], 1)]));
        assert_eq!(regularity(&b), Some(1));
    }

    #[test]
    fn theorem_examples() {
        let r = verify_theorem(&ideal(1, &[&[2]]), 1, f2()).unwrap();
        assert_eq!((r.reg_exact, r.dim), (Some(0), Some(0)));
        assert!(r.passed());

        let r = verify_theorem(&ideal(2, &[&[1, 0]]), 1, f2()).unwrap();
        assert_eq!((r.reg_exact, r.dim), (Some(1), Some(1)));
        assert!(r.passed());

        let r = verify_theorem(&MonomialIdeal::maximal(2), 2, f2()).unwrap();
        assert_eq!((r.reg_exact, r.dim), (Some(0), Some(0)));
        assert!(r.finite_length);
        assert!(r.passed());

        let r = verify_theorem(&ideal(2, &[&[1, 0]]), 0, f2()).unwrap();
        assert!(r.zero_module);
        assert_eq!((r.reg_exact, r.dim, r.reg_filtration_bound), (None, None, None));
        assert!(r.passed());
    }

    #[test]
    fn strands_beyond_the_candidate_range_are_exact() {
        let i = ideal(3, &[&[2, 1, 0], &[0, 2, 1], &[1, 0, 2]]);
        for idx in 0..=3 {
            let m = build_ext_module(&i, idx, f2()).unwrap();
            let inner = m.degree_box().expanded(0, 1);
            for a in m.degree_box().expanded(1, 2).points() {
                if inner.contains(&a) {
                    continue;
                }
                let h = koszul_slice(&m, &a).unwrap().cohomology_dims();
                assert!(h.iter().all(|&x| x == 0), "Ext^{idx} strand {a} not exact");
            }
        }
    }

    #[test]
    fn koszul_strands_have_the_right_euler_characteristic() {
        let i = ideal(2, &[&[2, 1], &[0, 3]]);
        let m = build_ext_module(&i, 1, f2()).unwrap();
        for a in m.degree_box().expanded(0, 1).points() {
            let slice = koszul_slice(&m, &a).unwrap();
            let h = slice.cohomology_dims();
            let chi_terms: i64 = (0u32..4)
                .map(|mask| {
                    let s = Face(mask);
                    let d = m.evaluate_at_degree(&a.minus_face(s)) as i64;
                    if s.len().is_multiple_of(2) { d } else { -d }
                })
                .sum();
            // cohomological index c corresponds to homological n - c; n = 2
            let chi_h: i64 = h
                .iter()
                .enumerate()
                .map(|(c, &x)| if (2 - c) % 2 == 0 { x as i64 } else { -(x as i64) })
                .sum();
            assert_eq!(chi_terms, chi_h);
        }
    }
}
