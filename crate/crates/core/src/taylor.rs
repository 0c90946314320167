//! Independent route to the Hilbert function of `Ext^i(R/I, ω_R)` through
//! the Taylor resolution of `R/I`.
//!
//! `T_t = ⊕_{|S| = t} R(-lcm S)`. Applying `Hom(-, ω_R)` with
//! `Hom(R(-b), ω_R) = R(b - e_[n])` gives a cochain complex whose degree-`a`
//! piece has one basis vector for each `S` with `a + lcm S - e_[n] >= 0`.

use crate::error::{input, invariant, Result};
use crate::linalg::{ExactMatrix, FiniteComplex, PrimeField};
use crate::monomial::{MonomialIdeal, Multidegree};

/// Generator count beyond which the oracle refuses to run.
pub const MAX_TAYLOR_GENERATORS: usize = 12;

/// Taylor complex of a monomial ideal, truncated at a homological index.
#[derive(Debug, Clone)]
pub struct TaylorComplex {
    n: usize,
    // terms[t] = (subset mask over generators, lcm) for |S| = t, in mask order
    terms: Vec<Vec<(u32, Vec<u32>)>>,
}

fn sign_of(subset: u32, g: usize) -> usize {
    (subset & ((1u32 << g) - 1)).count_ones() as usize
}

impl TaylorComplex {
    /// Terms `T_0 .. T_top` (capped at the number of generators).
    pub fn new(ideal: &MonomialIdeal, top: usize) -> Result<Self> {
        ideal.require_proper()?;
        let gens = ideal.generators();
        if gens.len() > MAX_TAYLOR_GENERATORS {
            return input(format!(
                "Taylor oracle limited to {MAX_TAYLOR_GENERATORS} generators, ideal has {}",
                gens.len()
            ));
        }
        let n = ideal.n();
        let g = gens.len();
        let top = top.min(g);
        let mut terms = vec![Vec::new(); top + 1];
        for mask in 0u32..(1u32 << g) {
            let t = mask.count_ones() as usize;
            if t > top {
                continue;
            }
            let lcm = (0..n)
                .map(|k| {
                    (0..g)
                        .filter(|&s| mask >> s & 1 == 1)
                        .map(|s| gens[s][k])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            terms[t].push((mask, lcm));
        }
        Ok(TaylorComplex { n, terms })
    }

    pub fn top(&self) -> usize {
        self.terms.len() - 1
    }

    /// `d∘d = 0` on the free complex: every coefficient of `d_{t-1} d_t` is a
    /// sum of two monomials `lcm S / lcm T` with opposite signs.
    pub fn check_d_squared(&self) -> Result<()> {
        for t in 2..self.terms.len() {
            for (s, _) in &self.terms[t] {
                let members: Vec<usize> = (0..32).filter(|&g| s >> g & 1 == 1).collect();
                for (x, &g) in members.iter().enumerate() {
                    for &h in &members[x + 1..] {
                        // S -> S\g -> S\{g,h} and S -> S\h -> S\{g,h}
                        let via_g = sign_of(*s, g) + sign_of(s & !(1 << g), h);
                        let via_h = sign_of(*s, h) + sign_of(s & !(1 << h), g);
                        if (via_g + via_h) % 2 != 1 {
                            return invariant(format!("Taylor d^2 != 0 at subset {s:#b}"));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Degree-`a` slice of `Hom(T, ω_R)`, as a cochain complex indexed by `t`.
    pub fn dual_slice(&self, a: &Multidegree, field: PrimeField) -> Result<FiniteComplex> {
        let present: Vec<Vec<u32>> = self
            .terms
            .iter()
            .map(|term| {
                term.iter()
                    .filter(|(_, lcm)| (0..self.n).all(|k| a.0[k] + i64::from(lcm[k]) > 0))
                    .map(|(mask, _)| *mask)
                    .collect()
            })
            .collect();
        let diffs = (0..self.top())
            .map(|t| {
                let (src, dst) = (&present[t], &present[t + 1]);
                let mut d = ExactMatrix::zeros(field, dst.len(), src.len());
                for (col, &s) in src.iter().enumerate() {
                    for (row, &big) in dst.iter().enumerate() {
                        if big & s == s {
                            let g = (big & !s).trailing_zeros() as usize;
                            d.set(row, col, field.sign(sign_of(big, g)));
                        }
                    }
                }
                d
            })
            .collect();
        FiniteComplex::new(field, present.iter().map(Vec::len).collect(), diffs)
    }

    /// `dim_k Ext^i(R/I, ω_R)_a`; needs `top() >= i + 1` unless the complex
    /// ends earlier.
    pub fn ext_dim(&self, i: usize, a: &Multidegree, field: PrimeField) -> Result<usize> {
        if i > self.top() {
            return Ok(0);
        }
        Ok(self.dual_slice(a, field)?.cohomology_dim(i))
    }
}

/// `dim_k Ext^i(R/I, ω_R)_a` from the dualized Taylor complex.
pub fn ext_hilbert_via_taylor(
    ideal: &MonomialIdeal,
    i: usize,
    a: &Multidegree,
    field: PrimeField,
) -> Result<usize> {
    if i > ideal.n() {
        return input(format!("Ext index {i} exceeds n = {}", ideal.n()));
    }
    ideal.check_vars(a.n())?;
    TaylorComplex::new(ideal, i + 1)?.ext_dim(i, a, field)
}
