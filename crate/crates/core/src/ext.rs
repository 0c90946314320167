//! `Ext^i_R(R/I, ω_R)` as a finitely determined multigraded module.
//!
//! Graded local duality identifies `Ext^i(R/I, ω_R)_a` with the dual of
//! `H^{n-i}_m(R/I)_{-a}`, and multiplication by `x_j` on Ext with the
//! transpose of `x_j : H_{-a-e_j} -> H_{-a}`. The module is stored on a box
//! `lower <= a <= (1,..,1)`; outside the box it is recovered through the
//! multiplication maps, which are bijective from any degree with `a_j >= 1`.

use crate::cech::{multiplication_components, natural_slice, DegreeComplex};
use crate::error::{input, invariant, Result};
use crate::linalg::{
    check_chain_map, induced_map_with_bases, CohomologyBasis, ExactMatrix, PrimeField,
};
use crate::monomial::{MonomialIdeal, Multidegree};

/// Integer box `lower <= a <= upper`, enumerated lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeBox {
    lower: Multidegree,
    upper: Multidegree,
}

impl DegreeBox {
    pub fn new(lower: Multidegree, upper: Multidegree) -> Result<Self> {
        if lower.n() != upper.n() || !lower.le(&upper) {
            return input(format!("empty degree box {lower}..{upper}"));
        }
        Ok(DegreeBox { lower, upper })
    }

    pub fn lower(&self) -> &Multidegree {
        &self.lower
    }

    pub fn upper(&self) -> &Multidegree {
        &self.upper
    }

    pub fn n(&self) -> usize {
        self.lower.n()
    }

    fn extent(&self, j: usize) -> usize {
        (self.upper.0[j] - self.lower.0[j] + 1) as usize
    }

    pub fn len(&self) -> usize {
        (0..self.n()).map(|j| self.extent(j)).product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, a: &Multidegree) -> bool {
        self.lower.le(a) && a.le(&self.upper)
    }

    pub fn index_of(&self, a: &Multidegree) -> Option<usize> {
        if !self.contains(a) {
            return None;
        }
        Some((0..self.n()).fold(0, |acc, j| {
            acc * self.extent(j) + (a.0[j] - self.lower.0[j]) as usize
        }))
    }

    pub fn point(&self, mut idx: usize) -> Multidegree {
        let n = self.n();
        let mut v = vec![0; n];
        for j in (0..n).rev() {
            let e = self.extent(j);
            v[j] = self.lower.0[j] + (idx % e) as i64;
            idx /= e;
        }
        Multidegree(v)
    }

    pub fn points(&self) -> impl Iterator<Item = Multidegree> + '_ {
        (0..self.len()).map(|k| self.point(k))
    }

    /// The box grown by `below` under the lower corner and `above` over the
    /// upper corner in every coordinate.
    pub fn expanded(&self, below: i64, above: i64) -> DegreeBox {
        DegreeBox {
            lower: Multidegree(self.lower.0.iter().map(|x| x - below).collect()),
            upper: Multidegree(self.upper.0.iter().map(|x| x + above).collect()),
        }
    }
}

/// Initial box for `Ext^i(R/I, ω_R)`: `1 - max(ρ_j, 1) <= a_j <= 1`.
pub fn determined_box(ideal: &MonomialIdeal) -> Result<DegreeBox> {
    let rho = ideal.rho()?;
    let lower = Multidegree(rho.iter().map(|&r| 1 - i64::from(r.max(1))).collect());
    DegreeBox::new(lower, Multidegree(vec![1; ideal.n()]))
}

/// `Ext^i(R/I, ω_R)` on its determining box.
#[derive(Debug, Clone)]
pub struct BoxModule {
    index: usize,
    field: PrimeField,
    degree_box: DegreeBox,
    dims: Vec<usize>,
    // mult[point * n + j] is x_j : M_a -> M_{a+e_j}, present iff a_j <= 0
    mult: Vec<Option<ExactMatrix>>,
}

struct Slice {
    complex: DegreeComplex,
    basis: CohomologyBasis,
}

fn slice_at(ideal: &MonomialIdeal, b: &Multidegree, h: usize, field: PrimeField) -> Result<Slice> {
    let complex = natural_slice(ideal, b, field)?;
    let basis = complex.complex().cohomology_basis(h);
    Ok(Slice { complex, basis })
}

/// Ext multiplication `x_j : Ext_a -> Ext_{a+e_j}` from the local cohomology
/// slices at `-a-e_j` (source) and `-a` (target).
fn dual_multiplication(source: &Slice, target: &Slice, h: usize, field: PrimeField) -> Result<ExactMatrix> {
    let components = multiplication_components(&source.complex, &target.complex, field);
    check_chain_map(source.complex.complex(), target.complex.complex(), &components)?;
    let on_cohomology = induced_map_with_bases(&source.basis, &target.basis, &components[h], field)?;
    Ok(on_cohomology.transpose())
}

fn check_index(ideal: &MonomialIdeal, i: usize) -> Result<()> {
    ideal.require_proper()?;
    if i > ideal.n() {
        return input(format!("Ext index {i} exceeds n = {}", ideal.n()));
    }
    Ok(())
}

/// `dim_k Ext^i(R/I, ω_R)_a` computed directly from a Čech slice.
pub fn ext_dim_direct(ideal: &MonomialIdeal, i: usize, a: &Multidegree, field: PrimeField) -> Result<usize> {
    check_index(ideal, i)?;
    let h = ideal.n() - i;
    Ok(natural_slice(ideal, &a.neg(), field)?.complex().cohomology_dim(h))
}

/// Matrix of `x_j : Ext^i_a -> Ext^i_{a+e_j}` in the bases dual to the
/// slice cohomology bases at `-a` and `-a-e_j`; valid at any degree.
pub fn ext_multiplication_direct(
    ideal: &MonomialIdeal,
    i: usize,
    a: &Multidegree,
    j: usize,
    field: PrimeField,
) -> Result<ExactMatrix> {
    check_index(ideal, i)?;
    let h = ideal.n() - i;
    let source = slice_at(ideal, &a.step(j).neg(), h, field)?;
    let target = slice_at(ideal, &a.neg(), h, field)?;
    dual_multiplication(&source, &target, h, field)
}

/// Build `Ext^i(R/I, ω_R)` over the prime field.
///
/// The lower corner of the box is pushed down until the module vanishes on
/// the layer just below it. Every multiplication map that must be bijective
/// (`a_j >= 1`) is checked on the top layer, and all commuting squares inside
/// the box are checked.
pub fn build_ext_module(ideal: &MonomialIdeal, i: usize, field: PrimeField) -> Result<BoxModule> {
    check_index(ideal, i)?;
    let n = ideal.n();
    let h = n - i;
    let mut degree_box = determined_box(ideal)?;

    let max_rho = ideal.rho()?.into_iter().max().unwrap_or(0) as i64;
    let floor = -4 * (max_rho + 2);
    'validate: loop {
        for j in 0..n {
            let low = degree_box.lower.0[j];
            let layer: Vec<Multidegree> = degree_box.points().filter(|a| a.0[j] == low).collect();
            for a in layer {
                let below = a.step_down(j);
                if ext_dim_direct(ideal, i, &below, field)? != 0 {
                    if low - 1 < floor {
                        return invariant(format!(
                            "Ext^{i} does not vanish below degree {below}; box search gave up"
                        ));
                    }
                    degree_box.lower.0[j] -= 1;
                    continue 'validate;
                }
            }
        }
        break;
    }

    let slices: Vec<Slice> = degree_box
        .points()
        .map(|a| slice_at(ideal, &a.neg(), h, field))
        .collect::<Result<_>>()?;
    let dims: Vec<usize> = slices.iter().map(|s| s.basis.dim()).collect();

    let mut mult = vec![None; degree_box.len() * n];
    for (idx, a) in degree_box.points().enumerate() {
        for j in 0..n {
            if a.0[j] <= 0 {
                let up = degree_box
                    .index_of(&a.step(j))
                    .expect("a + e_j stays inside the box");
                mult[idx * n + j] = Some(dual_multiplication(&slices[up], &slices[idx], h, field)?);
            } else {
                // a_j = 1: x_j must be bijective onto degree a + e_j
                let source = slice_at(ideal, &a.step(j).neg(), h, field)?;
                let m = dual_multiplication(&source, &slices[idx], h, field)?;
                if !m.is_invertible() {
                    return invariant(format!(
                        "x{} : Ext^{i}_{a} -> Ext^{i}_{} is not bijective ({}x{}, rank {})",
                        j + 1,
                        a.step(j),
                        m.rows(),
                        m.cols(),
                        m.rank()
                    ));
                }
            }
        }
    }

    let module = BoxModule {
        index: i,
        field,
        degree_box,
        dims,
        mult,
    };
    module.check_commutativity()?;
    Ok(module)
}

impl BoxModule {
    pub fn n(&self) -> usize {
        self.degree_box.n()
    }

    /// The cohomological index `i` of `Ext^i`.
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn degree_box(&self) -> &DegreeBox {
        &self.degree_box
    }

    /// Dimension at a box degree.
    pub fn dim(&self, a: &Multidegree) -> Option<usize> {
        self.degree_box.index_of(a).map(|k| self.dims[k])
    }

    /// Stored multiplication `x_j : M_a -> M_{a+e_j}` for box degrees with
    /// `a_j <= 0`.
    pub fn mult(&self, a: &Multidegree, j: usize) -> Option<&ExactMatrix> {
        let k = self.degree_box.index_of(a)?;
        self.mult[k * self.n() + j].as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    /// Nonzero box degrees with their dimensions.
    pub fn hilbert(&self) -> Vec<(Multidegree, usize)> {
        self.degree_box
            .points()
            .zip(&self.dims)
            .filter(|(_, &d)| d > 0)
            .map(|(a, &d)| (a, d))
            .collect()
    }

    /// Finite length iff nothing lives in a degree with a positive entry.
    pub fn is_finite_length(&self) -> bool {
        self.hilbert()
            .iter()
            .all(|(a, _)| a.plus_support().is_empty())
    }

    /// Box degree whose space is identified with `M_b`, or `None` when `b`
    /// lies below the validated support.
    pub fn representative(&self, b: &Multidegree) -> Option<Multidegree> {
        let clamped = Multidegree(b.0.iter().map(|&x| x.min(1)).collect());
        self.degree_box.contains(&clamped).then_some(clamped)
    }

    pub fn evaluate_at_degree(&self, b: &Multidegree) -> usize {
        self.representative(b)
            .and_then(|r| self.dim(&r))
            .unwrap_or(0)
    }

    /// Multiplication steps `(degree, variable)` leading from the box
    /// representative of `b` up to `b`; each one is bijective.
    pub fn iso_chain(&self, b: &Multidegree) -> Vec<(Multidegree, usize)> {
        let Some(mut cur) = self.representative(b) else {
            return Vec::new();
        };
        let mut steps = Vec::new();
        for j in 0..self.n() {
            while cur.0[j] < b.0[j] {
                steps.push((cur.clone(), j));
                cur = cur.step(j);
            }
        }
        steps
    }

    /// `x_j : M_c -> M_{c+e_j}` at any degree, in the bases transported from
    /// the box along the bijective multiplication maps.
    pub fn mult_at(&self, c: &Multidegree, j: usize) -> ExactMatrix {
        let target = self.evaluate_at_degree(&c.step(j));
        let Some(rep) = self.representative(c) else {
            return ExactMatrix::zeros(self.field, target, 0);
        };
        if c.0[j] >= 1 {
            return ExactMatrix::identity(self.field, target);
        }
        self.mult(&rep, j)
            .expect("stored for representatives with a_j <= 0")
            .clone()
    }

    /// Apply multiplication by `x^{to - from}` to `v ∈ M_from`.
    pub fn act(&self, from: &Multidegree, to: &Multidegree, v: &[u64]) -> Vec<u64> {
        debug_assert!(from.le(to));
        let mut cur = from.clone();
        let mut vec = v.to_vec();
        for j in 0..self.n() {
            // steps at or above 1 are identities in transported bases
            while cur.0[j] < to.0[j].min(1) {
                vec = self.mult_at(&cur, j).mul_vec(&vec);
                cur = cur.step(j);
            }
            cur.0[j] = to.0[j].max(cur.0[j]);
        }
        vec
    }

    /// `x_j x_k = x_k x_j` on every square inside the box.
    pub fn check_commutativity(&self) -> Result<()> {
        let n = self.n();
        for a in self.degree_box.points() {
            for j in 0..n {
                for k in (j + 1)..n {
                    let (Some(aj), Some(ak)) = (self.mult(&a, j), self.mult(&a, k)) else {
                        continue;
                    };
                    let (Some(ak_j), Some(aj_k)) =
                        (self.mult(&a.step(k), j), self.mult(&a.step(j), k))
                    else {
                        continue;
                    };
                    if ak_j.mul(ak) != aj_k.mul(aj) {
                        return invariant(format!(
                            "x{} x{} != x{} x{} on Ext^{}_{a}",
                            j + 1,
                            k + 1,
                            k + 1,
                            j + 1,
                            self.index
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}
