//! Ideal families for verification sweeps.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{input, Result};
use crate::monomial::{minimalize, MonomialIdeal};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum CorpusMode {
    /// Every antichain of monomials in the exponent box.
    Exhaustive,
    /// Seeded samples of `1..=max_gens` random monomials each.
    Random { samples: usize, max_gens: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusSpec {
    pub n: usize,
    pub max_exp: u32,
    pub mode: CorpusMode,
    pub seed: u64,
    pub squarefree: bool,
}

impl CorpusSpec {
    pub fn exhaustive(n: usize, max_exp: u32) -> Self {
        CorpusSpec {
            n,
            max_exp,
            mode: CorpusMode::Exhaustive,
            seed: 0,
            squarefree: false,
        }
    }

    pub fn squarefree(n: usize) -> Self {
        CorpusSpec {
            n,
            max_exp: 1,
            mode: CorpusMode::Exhaustive,
            seed: 0,
            squarefree: true,
        }
    }

    pub fn random(n: usize, max_exp: u32, samples: usize, max_gens: usize, seed: u64) -> Self {
        CorpusSpec {
            n,
            max_exp,
            mode: CorpusMode::Random { samples, max_gens },
            seed,
            squarefree: false,
        }
    }

    /// Largest exponent actually drawn.
    pub fn exponent_bound(&self) -> u32 {
        if self.squarefree {
            1
        } else {
            self.max_exp
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return input("corpus needs at least one variable");
        }
        if self.exponent_bound() == 0 {
            return input("maximum exponent must be at least 1");
        }
        match self.mode {
            CorpusMode::Exhaustive => {
                let small = self.n <= 3 && self.max_exp <= 2;
                let squarefree = self.squarefree && self.n <= 4;
                if !(small || squarefree) {
                    return input(
                        "exhaustive mode needs n <= 3 with max exponent <= 2, or squarefree with n <= 4",
                    );
                }
            }
            CorpusMode::Random { samples, max_gens } => {
                if samples == 0 || max_gens == 0 {
                    return input("random mode needs positive sample and generator counts");
                }
                if self.n > 10 {
                    return input("random mode supports at most 10 variables");
                }
            }
        }
        Ok(())
    }
}

fn comparable(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y) || a.iter().zip(b).all(|(x, y)| x >= y)
}

fn exponent_box(n: usize, bound: u32) -> Vec<Vec<u32>> {
    let mut points = vec![Vec::new()];
    for _ in 0..n {
        points = points
            .into_iter()
            .flat_map(|p| {
                (0..=bound).map(move |e| {
                    let mut q = p.clone();
                    q.push(e);
                    q
                })
            })
            .collect();
    }
    points.retain(|p| p.iter().any(|&e| e > 0));
    points
}

fn antichains(elements: &[Vec<u32>], n: usize) -> Vec<MonomialIdeal> {
    fn dfs(
        elements: &[Vec<u32>],
        start: usize,
        chosen: &mut Vec<Vec<u32>>,
        n: usize,
        out: &mut Vec<MonomialIdeal>,
    ) {
        out.push(minimalize(n, chosen).expect("antichain of valid vectors"));
        for k in start..elements.len() {
            if chosen.iter().all(|c| !comparable(c, &elements[k])) {
                chosen.push(elements[k].clone());
                dfs(elements, k + 1, chosen, n, out);
                chosen.pop();
            }
        }
    }
    let mut out = Vec::new();
    dfs(elements, 0, &mut Vec::new(), n, &mut out);
    out
}

/// All ideals described by `spec`, in a deterministic order. The unit ideal
/// is never produced; exhaustive mode includes the zero ideal.
pub fn enumerate_ideals(spec: &CorpusSpec) -> Result<Vec<MonomialIdeal>> {
    spec.validate()?;
    let n = spec.n;
    let bound = spec.exponent_bound();
    match spec.mode {
        CorpusMode::Exhaustive => Ok(antichains(&exponent_box(n, bound), n)),
        CorpusMode::Random { samples, max_gens } => {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            let mut seen = HashSet::new();
            let mut out = Vec::with_capacity(samples);
            let mut attempts = 0;
            while out.len() < samples && attempts < samples * 100 {
                attempts += 1;
                let k = rng.random_range(1..=max_gens);
                let mut gens = Vec::with_capacity(k);
                while gens.len() < k {
                    let g: Vec<u32> = (0..n).map(|_| rng.random_range(0..=bound)).collect();
                    if g.iter().any(|&e| e > 0) {
                        gens.push(g);
                    }
                }
                let ideal = minimalize(n, &gens)?;
                if seen.insert(ideal.clone()) {
                    out.push(ideal);
                }
            }
            Ok(out)
        }
    }
}

/// An ideal from the built-in example list.
#[derive(Debug, Clone)]
pub struct NamedIdeal {
    pub name: &'static str,
    pub ideal: MonomialIdeal,
}

/// Facets of the 6-vertex triangulation of the real projective plane
/// (1-based vertices).
pub const RP2_FACETS: [[usize; 3]; 10] = [
    [1, 2, 3],
    [1, 3, 4],
    [1, 4, 5],
    [1, 5, 6],
    [1, 2, 6],
    [2, 3, 5],
    [2, 4, 5],
    [2, 4, 6],
    [3, 4, 6],
    [3, 5, 6],
];

/// Stanley–Reisner ideal of the 6-vertex real projective plane. Every edge
/// is a face, so the minimal non-faces are the ten triangles that are not
/// facets.
pub fn projective_plane_ideal() -> MonomialIdeal {
    let facets: Vec<[usize; 3]> = RP2_FACETS.to_vec();
    let mut gens = Vec::new();
    for a in 1..=6 {
        for b in (a + 1)..=6 {
            for c in (b + 1)..=6 {
                if !facets.contains(&[a, b, c]) {
                    let mut g = vec![0u32; 6];
                    for v in [a, b, c] {
                        g[v - 1] = 1;
                    }
                    gens.push(g);
                }
            }
        }
    }
    minimalize(6, &gens).expect("valid generators")
}

pub fn named_examples() -> Vec<NamedIdeal> {
    let ideal = |n: usize, gens: &[&[u32]]| {
        minimalize(n, &gens.iter().map(|g| g.to_vec()).collect::<Vec<_>>()).expect("valid generators")
    };
    vec![
        NamedIdeal { name: "maximal-2", ideal: MonomialIdeal::maximal(2) },
        NamedIdeal { name: "maximal-3", ideal: MonomialIdeal::maximal(3) },
        NamedIdeal { name: "square-1", ideal: ideal(1, &[&[2]]) },
        NamedIdeal { name: "hyperplane-2", ideal: ideal(2, &[&[1, 0]]) },
        NamedIdeal { name: "principal-x1x2", ideal: ideal(2, &[&[1, 1]]) },
        NamedIdeal { name: "principal-x1^2x2x3^3", ideal: ideal(3, &[&[2, 1, 3]]) },
        NamedIdeal { name: "mixed-2", ideal: ideal(2, &[&[2, 1], &[0, 3]]) },
        NamedIdeal { name: "two-lines-3", ideal: ideal(3, &[&[1, 1, 0], &[0, 1, 1]]) },
        NamedIdeal {
            name: "fat-points-3",
            ideal: ideal(3, &[&[2, 0, 0], &[0, 2, 0], &[1, 1, 1], &[0, 0, 3]]),
        },
        NamedIdeal { name: "projective-plane-6", ideal: projective_plane_ideal() },
    ]
}
