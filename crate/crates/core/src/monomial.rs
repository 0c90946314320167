//! Exponent vectors, multidegrees, faces and monomial ideals.
//!
//! Variables are indexed from 0 internally. Everything that leaves the
//! process (reports, ideal files) uses 1-based indices `x1..xn`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};

/// Largest supported number of variables; faces are stored as `u32` masks.
pub const MAX_VARS: usize = 24;

/// A point of `Z^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Multidegree(pub Vec<i64>);

impl Multidegree {
    pub fn zero(n: usize) -> Self {
        Multidegree(vec![0; n])
    }

    pub fn new(entries: Vec<i64>) -> Self {
        Multidegree(entries)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    /// The positive part `a+`.
    pub fn plus(&self) -> Vec<u32> {
        self.0.iter().map(|&x| x.max(0) as u32).collect()
    }

    /// The negative part `a-`, so that `a = a+ - a-`.
    pub fn minus(&self) -> Vec<u32> {
        self.0.iter().map(|&x| (-x).max(0) as u32).collect()
    }

    pub fn support(&self) -> Face {
        Face::from_predicate(self.n(), |j| self.0[j] != 0)
    }

    pub fn plus_support(&self) -> Face {
        Face::from_predicate(self.n(), |j| self.0[j] > 0)
    }

    pub fn minus_support(&self) -> Face {
        Face::from_predicate(self.n(), |j| self.0[j] < 0)
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().sum()
    }

    /// `a + e_j`.
    pub fn step(&self, j: usize) -> Self {
        let mut v = self.0.clone();
        v[j] += 1;
        Multidegree(v)
    }

    /// `a - e_j`.
    pub fn step_down(&self, j: usize) -> Self {
        let mut v = self.0.clone();
        v[j] -= 1;
        Multidegree(v)
    }

    pub fn neg(&self) -> Self {
        Multidegree(self.0.iter().map(|x| -x).collect())
    }

    pub fn add(&self, other: &Multidegree) -> Self {
        debug_assert_eq!(self.n(), other.n());
        Multidegree(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Multidegree) -> Self {
        debug_assert_eq!(self.n(), other.n());
        Multidegree(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// `a - e_S`.
    pub fn minus_face(&self, face: Face) -> Self {
        let mut v = self.0.clone();
        for j in face.iter() {
            v[j] -= 1;
        }
        Multidegree(v)
    }

    pub fn from_exponents(u: &[u32]) -> Self {
        Multidegree(u.iter().map(|&x| x as i64).collect())
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &Multidegree) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Nonnegative entries as an exponent vector, if every entry is `>= 0`.
    pub fn as_exponents(&self) -> Option<Vec<u32>> {
        self.0
            .iter()
            .map(|&x| if x >= 0 { Some(x as u32) } else { None })
            .collect()
    }
}

impl fmt::Display for Multidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// A subset of the variable set `[n]`, stored as a bit mask.
///
/// Numeric order of masks is colexicographic order on subsets, which fixes
/// the summand ordering of every complex in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Face(pub u32);

impl Face {
    pub const EMPTY: Face = Face(0);

    pub fn full(n: usize) -> Self {
        Face(((1u64 << n) - 1) as u32)
    }

    pub fn singleton(j: usize) -> Self {
        Face(1 << j)
    }

    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Self {
        Face(indices.into_iter().fold(0, |m, j| m | (1 << j)))
    }

    pub fn from_predicate(n: usize, pred: impl Fn(usize) -> bool) -> Self {
        Face::from_indices((0..n).filter(|&j| pred(j)))
    }

    pub fn contains(self, j: usize) -> bool {
        self.0 >> j & 1 == 1
    }

    pub fn with(self, j: usize) -> Self {
        Face(self.0 | (1 << j))
    }

    pub fn without(self, j: usize) -> Self {
        Face(self.0 & !(1 << j))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset_of(self, other: Face) -> bool {
        self.0 & !other.0 == 0
    }

    /// Number of elements of `self` strictly below `j`.
    pub fn count_below(self, j: usize) -> usize {
        (self.0 & ((1u32 << j) - 1)).count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&j| self.contains(j))
    }

    pub fn one_based(self) -> Vec<usize> {
        self.iter().map(|j| j + 1).collect()
    }

    /// All subsets of `[n]` of size `k`, in increasing mask order.
    pub fn subsets_of_size(n: usize, k: usize) -> impl Iterator<Item = Face> {
        (0u32..(1u32 << n))
            .filter(move |m| m.count_ones() as usize == k)
            .map(Face)
    }

    /// All subsets of `[n]` containing `self`, in increasing mask order.
    pub fn supersets(self, n: usize) -> impl Iterator<Item = Face> {
        (0u32..(1u32 << n))
            .filter(move |m| m & self.0 == self.0)
            .map(Face)
    }
}

/// Faces serialize as sorted 1-based index arrays.
impl Serialize for Face {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_based().serialize(serializer)
    }
}

/// A monomial ideal of `k[x_1..x_n]`, stored by its minimal generators.
///
/// No generators is the zero ideal; the single generator `0` is the unit
/// ideal, which is representable but rejected by the homological pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MonomialIdeal {
    n: usize,
    gens: Vec<Vec<u32>>,
}

fn divides(g: &[u32], u: &[u32]) -> bool {
    g.iter().zip(u).all(|(a, b)| a <= b)
}

/// Reduce a generating set to its minimal antichain, sorted lexicographically.
pub fn minimalize(n: usize, raw: &[Vec<u32>]) -> Result<MonomialIdeal> {
    if n == 0 || n > MAX_VARS {
        return input(format!("variable count must be in 1..={MAX_VARS}, got {n}"));
    }
    if let Some(bad) = raw.iter().find(|g| g.len() != n) {
        return input(format!(
            "exponent vector of length {} in a ring with {n} variables",
            bad.len()
        ));
    }
    let mut sorted: Vec<Vec<u32>> = raw.to_vec();
    sorted.sort();
    sorted.dedup();
    let gens: Vec<Vec<u32>> = sorted
        .iter()
        .filter(|g| !sorted.iter().any(|h| h != *g && divides(h, g)))
        .cloned()
        .collect();
    Ok(MonomialIdeal { n, gens })
}

impl MonomialIdeal {
    pub fn new(n: usize, raw: Vec<Vec<u32>>) -> Result<Self> {
        minimalize(n, &raw)
    }

    pub fn zero(n: usize) -> Self {
        MonomialIdeal { n, gens: Vec::new() }
    }

    /// The ideal generated by all variables.
    pub fn maximal(n: usize) -> Self {
        let gens = (0..n)
            .map(|j| (0..n).map(|k| u32::from(k == j)).collect())
            .rev()
            .collect::<Vec<_>>();
        minimalize(n, &gens).expect("valid generators")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Vec<u32>] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.gens.iter().any(|g| g.iter().all(|&e| e == 0))
    }

    pub fn is_squarefree(&self) -> bool {
        self.gens.iter().all(|g| g.iter().all(|&e| e <= 1))
    }

    pub fn require_proper(&self) -> Result<()> {
        if self.is_unit() {
            input("unit ideal not supported")
        } else {
            Ok(())
        }
    }

    /// Membership of `x^u`.
    pub fn contains(&self, u: &[u32]) -> bool {
        debug_assert_eq!(u.len(), self.n);
        self.gens.iter().any(|g| divides(g, u))
    }

    /// Whether `(R/I)_{x_Λ}` is nonzero in multidegree `a`.
    pub fn localized_nonzero(&self, lambda: Face, a: &Multidegree) -> bool {
        debug_assert_eq!(a.n(), self.n);
        if !a.minus_support().is_subset_of(lambda) {
            return false;
        }
        self.gens.iter().all(|g| {
            (0..self.n).any(|i| !lambda.contains(i) && i64::from(g[i]) > a.0[i])
        })
    }

    /// Same predicate as [`Self::localized_nonzero`], decided from the
    /// definition of localization instead: `x^a` survives in `(R/I)_{x_Λ}`
    /// iff `x^{a + N e_Λ}` is a monomial outside `I` for every large `N`.
    pub fn localized_nonzero_by_saturation(&self, lambda: Face, a: &Multidegree) -> bool {
        if (0..self.n).any(|i| !lambda.contains(i) && a.0[i] < 0) {
            return false;
        }
        let shift = a.0.iter().map(|&x| (-x).max(0)).max().unwrap_or(0)
            + self
                .gens
                .iter()
                .flat_map(|g| g.iter().copied())
                .max()
                .map_or(0, i64::from);
        let u: Vec<u32> = (0..self.n)
            .map(|i| {
                let x = if lambda.contains(i) { a.0[i] + shift } else { a.0[i] };
                x as u32
            })
            .collect();
        !self.contains(&u)
    }

    /// Componentwise maximum exponent of the generators.
    pub fn rho(&self) -> Result<Vec<u32>> {
        self.require_proper()?;
        Ok((0..self.n)
            .map(|j| self.gens.iter().map(|g| g[j]).max().unwrap_or(0))
            .collect())
    }

    /// Variables that occur in some generator.
    pub fn variables_used(&self) -> Face {
        Face::from_predicate(self.n, |j| self.gens.iter().any(|g| g[j] > 0))
    }

    pub fn check_vars(&self, n: usize) -> Result<()> {
        if n != self.n {
            return input(format!("expected {n} variables, ideal has {}", self.n));
        }
        Ok(())
    }

    /// Ideal text format with exponent-vector lines.
    pub fn to_text(&self) -> String {
        let mut out = format!("n = {}\n", self.n);
        for g in &self.gens {
            let parts: Vec<String> = g.iter().map(u32::to_string).collect();
            out.push_str(&format!("[{}]\n", parts.join(",")));
        }
        out
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gens.is_empty() {
            return write!(f, "(0)");
        }
        let parts: Vec<String> = self.gens.iter().map(|g| monomial_symbol(g)).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// `x1^2*x3` style rendering; the constant monomial renders as `1`.
pub fn monomial_symbol(u: &[u32]) -> String {
    let factors: Vec<String> = u
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(j, &e)| {
            if e == 1 {
                format!("x{}", j + 1)
            } else {
                format!("x{}^{}", j + 1, e)
            }
        })
        .collect();
    if factors.is_empty() {
        "1".to_string()
    } else {
        factors.join("*")
    }
}

fn parse_err<T>(line: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        message: message.into(),
    })
}

fn parse_vector(body: &str, n: usize, line: usize) -> Result<Vec<u32>> {
    let inner = body
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| Error::Parse {
            line,
            message: format!("malformed exponent vector `{body}`"),
        })?;
    let entries = inner
        .split(',')
        .map(|t| {
            t.trim().parse::<u32>().map_err(|_| Error::Parse {
                line,
                message: format!("bad exponent `{}`", t.trim()),
            })
        })
        .collect::<Result<Vec<u32>>>()?;
    if entries.len() != n {
        return parse_err(
            line,
            format!("vector has {} entries but n = {n}", entries.len()),
        );
    }
    Ok(entries)
}

fn parse_symbolic(body: &str, n: usize, line: usize) -> Result<Vec<u32>> {
    let mut u = vec![0u32; n];
    if body == "1" {
        return Ok(u);
    }
    for factor in body.split('*') {
        let factor = factor.trim();
        let (var, exp) = match factor.split_once('^') {
            Some((v, e)) => {
                let e = e.trim().parse::<u32>().map_err(|_| Error::Parse {
                    line,
                    message: format!("bad exponent in `{factor}`"),
                })?;
                (v.trim(), e)
            }
            None => (factor, 1),
        };
        let idx = var
            .strip_prefix('x')
            .and_then(|s| s.parse::<usize>().ok())
            .ok_or_else(|| Error::Parse {
                line,
                message: format!("expected a variable like `x3`, found `{var}`"),
            })?;
        if idx == 0 || idx > n {
            return parse_err(line, format!("variable x{idx} outside x1..x{n}"));
        }
        u[idx - 1] += exp;
    }
    Ok(u)
}

/// Parse the ideal text format.
///
/// ```text
/// # comment
/// n = 3
/// [2,0,1]
/// x1*x2^3
/// ```
pub fn parse_ideal(text: &str) -> Result<MonomialIdeal> {
    let mut n: Option<usize> = None;
    let mut raw = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let lineno = k + 1;
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some((lhs, rhs)) = body.split_once('=') {
            if lhs.trim() != "n" {
                return parse_err(lineno, format!("unknown header `{}`", lhs.trim()));
            }
            if n.is_some() {
                return parse_err(lineno, "variable count declared twice");
            }
            let value = rhs.trim().parse::<usize>().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("bad variable count `{}`", rhs.trim()),
            })?;
            if value == 0 || value > MAX_VARS {
                return parse_err(lineno, format!("variable count must be in 1..={MAX_VARS}"));
            }
            n = Some(value);
            continue;
        }
        let Some(nv) = n else {
            return parse_err(lineno, "monomial before the `n = ...` header");
        };
        let u = if body.starts_with('[') {
            parse_vector(body, nv, lineno)?
        } else {
            parse_symbolic(body, nv, lineno)?
        };
        raw.push(u);
    }
    let Some(n) = n else {
        return parse_err(text.lines().count().max(1), "missing `n = ...` header");
    };
    minimalize(n, &raw)
}

/// Lexicographic order on faces by their sorted index lists.
pub fn face_lex_cmp(a: Face, b: Face) -> Ordering {
    a.iter().cmp(b.iter())
}
