//! Operators as real-coefficient sums of products of `sigma^z`, `sigma^+`,
//! `sigma^-` and `sigma^x` on distinct sites.
//!
//! Products are expanded in the single-site basis `{1, z, +, -}`; in that
//! basis every operator used here has real coefficients.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::LatticeSpec;

/// Coefficients below this magnitude are dropped by [`OperatorSpec::simplified`].
pub const COEFF_EPS: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PauliOp {
    #[serde(rename = "z")]
    Z,
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
    #[serde(rename = "x")]
    X,
}

impl PauliOp {
    fn dagger(self) -> Self {
        match self {
            PauliOp::Plus => PauliOp::Minus,
            PauliOp::Minus => PauliOp::Plus,
            op => op,
        }
    }
}

/// Single-site product `a * b` as a list of `(coefficient, op)`, `None` being
/// the identity. Inputs never contain `X`.
fn site_product(a: PauliOp, b: PauliOp) -> &'static [(f64, Option<PauliOp>)] {
    use PauliOp::*;
    match (a, b) {
        (Z, Z) => &[(1.0, None)],
        (Z, Plus) => &[(1.0, Some(Plus))],
        (Plus, Z) => &[(-1.0, Some(Plus))],
        (Z, Minus) => &[(-1.0, Some(Minus))],
        (Minus, Z) => &[(1.0, Some(Minus))],
        (Plus, Minus) => &[(0.5, None), (0.5, Some(Z))],
        (Minus, Plus) => &[(0.5, None), (-0.5, Some(Z))],
        (Plus, Plus) | (Minus, Minus) => &[],
        (X, _) | (_, X) => unreachable!("X is expanded before multiplication"),
    }
}

/// `coefficient * prod_(site, op)`, factors sorted by site.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PauliTerm {
    pub coefficient: f64,
    pub factors: Vec<(usize, PauliOp)>,
}

impl PauliTerm {
    pub fn new(coefficient: f64, mut factors: Vec<(usize, PauliOp)>) -> Result<Self> {
        if !coefficient.is_finite() || coefficient == 0.0 {
            return Err(Error::InvalidTerm(format!("coefficient {coefficient} must be finite and nonzero")));
        }
        factors.sort_by_key(|&(s, _)| s);
        if factors.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidTerm(format!("repeated site in {factors:?}")));
        }
        Ok(PauliTerm { coefficient, factors })
    }

    pub(crate) fn raw(coefficient: f64, factors: Vec<(usize, PauliOp)>) -> Self {
        PauliTerm { coefficient, factors }
    }

    pub fn dagger(&self) -> Self {
        PauliTerm {
            coefficient: self.coefficient,
            factors: self.factors.iter().map(|&(s, op)| (s, op.dagger())).collect(),
        }
    }

    pub fn max_site(&self) -> Option<usize> {
        self.factors.last().map(|&(s, _)| s)
    }

    /// Number of factors that flip a spin.
    pub fn flip_count(&self) -> usize {
        self.factors.iter().filter(|(_, op)| *op != PauliOp::Z).count()
    }

    /// Acts on a basis word: returns `(amplitude, new word)` or `None` when
    /// the term annihilates it. The coefficient is included.
    #[inline]
    pub fn apply(&self, bits: u64) -> Option<(f64, u64)> {
        let mut amp = self.coefficient;
        let mut out = bits;
        for &(site, op) in &self.factors {
            let m = 1u64 << site;
            let up = bits & m != 0;
            match op {
                PauliOp::Z => {
                    if !up {
                        amp = -amp;
                    }
                }
                PauliOp::Plus => {
                    if up {
                        return None;
                    }
                    out |= m;
                }
                PauliOp::Minus => {
                    if !up {
                        return None;
                    }
                    out &= !m;
                }
                PauliOp::X => out ^= m,
            }
        }
        Some((amp, out))
    }

    /// Rewrites `X` factors as `+` plus `-`.
    fn expand_x(&self) -> Vec<PauliTerm> {
        let mut acc = vec![PauliTerm::raw(self.coefficient, Vec::with_capacity(self.factors.len()))];
        for &(s, op) in &self.factors {
            if op == PauliOp::X {
                acc = acc
                    .into_iter()
                    .flat_map(|t| {
                        [PauliOp::Plus, PauliOp::Minus].map(|o| {
                            let mut f = t.factors.clone();
                            f.push((s, o));
                            PauliTerm::raw(t.coefficient, f)
                        })
                    })
                    .collect();
            } else {
                for t in &mut acc {
                    t.factors.push((s, op));
                }
            }
        }
        acc
    }

    /// Product `self * other`, expanded in `{1, z, +, -}`.
    pub fn product(&self, other: &PauliTerm) -> Vec<PauliTerm> {
        let mut out = Vec::new();
        for a in self.expand_x() {
            for b in other.expand_x() {
                multiply_expanded(&a, &b, &mut out);
            }
        }
        out
    }
}

fn multiply_expanded(a: &PauliTerm, b: &PauliTerm, out: &mut Vec<PauliTerm>) {
    let mut partial = vec![PauliTerm::raw(a.coefficient * b.coefficient, Vec::new())];
    let (mut i, mut j) = (0, 0);
    while i < a.factors.len() || j < b.factors.len() {
        let sa = a.factors.get(i).map(|f| f.0);
        let sb = b.factors.get(j).map(|f| f.0);
        let choices: Vec<(f64, Option<(usize, PauliOp)>)> = match (sa, sb) {
            (Some(x), Some(y)) if x == y => {
                let r = site_product(a.factors[i].1, b.factors[j].1);
                i += 1;
                j += 1;
                r.iter().map(|&(c, op)| (c, op.map(|o| (x, o)))).collect()
            }
            (Some(x), Some(y)) if x < y => {
                i += 1;
                vec![(1.0, Some(a.factors[i - 1]))]
            }
            (Some(_), None) => {
                i += 1;
                vec![(1.0, Some(a.factors[i - 1]))]
            }
            _ => {
                j += 1;
                vec![(1.0, Some(b.factors[j - 1]))]
            }
        };
        if choices.is_empty() {
            return;
        }
        partial = partial
            .into_iter()
            .flat_map(|t| {
                choices.iter().map(move |&(c, f)| {
                    let mut factors = t.factors.clone();
                    factors.extend(f);
                    PauliTerm::raw(t.coefficient * c, factors)
                })
            })
            .collect();
    }
    out.extend(partial);
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    Hermitian,
    AntiHermitian,
}

/// A named operator on a lattice: `(1 / normalization) * sum(terms)`.
///
/// Observables keep their intensive `1/L` (or `1/V`) factor in
/// `normalization` rather than in the coefficients; it is applied when the
/// operator is materialized.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorSpec {
    pub name: String,
    pub lattice: LatticeSpec,
    pub kind: OperatorKind,
    pub normalization: f64,
    pub terms: Vec<PauliTerm>,
}

impl OperatorSpec {
    pub fn new(name: impl Into<String>, lattice: LatticeSpec, terms: Vec<PauliTerm>) -> Self {
        OperatorSpec {
            name: name.into(),
            lattice,
            kind: OperatorKind::Hermitian,
            normalization: 1.0,
            terms,
        }
    }

    pub fn with_normalization(mut self, divisor: f64) -> Self {
        self.normalization = divisor;
        self
    }

    pub fn with_kind(mut self, kind: OperatorKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Checks every factor against the lattice size.
    pub fn check_sites(&self) -> Result<()> {
        let n = self.lattice.num_sites();
        for t in &self.terms {
            if let Some(s) = t.max_site() {
                if s >= n {
                    return Err(Error::SiteOutOfRange { site: s, sites: n });
                }
            }
        }
        Ok(())
    }

    /// Terms with the normalization folded into the coefficients.
    fn folded_terms(&self) -> impl Iterator<Item = PauliTerm> + '_ {
        let inv = 1.0 / self.normalization;
        self.terms.iter().map(move |t| PauliTerm::raw(t.coefficient * inv, t.factors.clone()))
    }

    /// Canonical form: `X` expanded, like terms merged, near-zero terms dropped,
    /// normalization folded in, terms sorted.
    pub fn simplified(&self) -> OperatorSpec {
        let mut acc: BTreeMap<Vec<(usize, PauliOp)>, f64> = BTreeMap::new();
        for t in self.folded_terms() {
            for e in t.expand_x() {
                *acc.entry(e.factors).or_insert(0.0) += e.coefficient;
            }
        }
        let terms = acc
            .into_iter()
            .filter(|(_, c)| c.abs() > COEFF_EPS)
            .map(|(f, c)| PauliTerm::raw(c, f))
            .collect();
        OperatorSpec { terms, normalization: 1.0, ..self.clone() }
    }

    pub fn dagger(&self) -> OperatorSpec {
        OperatorSpec {
            terms: self.terms.iter().map(PauliTerm::dagger).collect(),
            ..self.clone()
        }
    }

    pub fn scaled(&self, factor: f64) -> OperatorSpec {
        OperatorSpec {
            terms: self.folded_terms().map(|t| PauliTerm::raw(t.coefficient * factor, t.factors)).collect(),
            normalization: 1.0,
            ..self.clone()
        }
    }

    /// `self + other`, simplified.
    pub fn plus(&self, other: &OperatorSpec) -> OperatorSpec {
        let mut terms: Vec<PauliTerm> = self.folded_terms().collect();
        terms.extend(other.folded_terms());
        OperatorSpec {
            name: format!("{}+{}", self.name, other.name),
            terms,
            normalization: 1.0,
            ..self.clone()
        }
        .simplified()
    }

    /// `self - other`, simplified.
    pub fn minus(&self, other: &OperatorSpec) -> OperatorSpec {
        let mut s = self.plus(&other.scaled(-1.0));
        s.name = format!("{}-{}", self.name, other.name);
        s
    }

    pub fn is_hermitian(&self) -> bool {
        self.minus(&self.dagger()).is_empty()
    }

    pub fn is_anti_hermitian(&self) -> bool {
        self.plus(&self.dagger()).is_empty()
    }

    /// Every term flips an even number of spins, so `prod sigma^z` is conserved.
    pub fn conserves_parity(&self) -> bool {
        self.terms.iter().all(|t| t.flip_count() % 2 == 0)
    }

    /// Every term of the simplified form has equally many `+` and `-` factors.
    pub fn conserves_magnetization(&self) -> bool {
        self.simplified().terms.iter().all(|t| {
            let plus = t.factors.iter().filter(|f| f.1 == PauliOp::Plus).count();
            let minus = t.factors.iter().filter(|f| f.1 == PauliOp::Minus).count();
            plus == minus
        })
    }

    /// The operator with every site `i` relabelled `perm[i]`.
    pub fn relabelled(&self, perm: &[usize]) -> OperatorSpec {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut f: Vec<_> = t.factors.iter().map(|&(s, op)| (perm[s], op)).collect();
                f.sort_by_key(|&(s, _)| s);
                PauliTerm::raw(t.coefficient, f)
            })
            .collect();
        OperatorSpec { terms, ..self.clone() }
    }

    pub fn is_invariant_under(&self, perm: &[usize]) -> bool {
        self.relabelled(perm).minus(self).is_empty()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// `[a, b] = ab - ba`, simplified.
pub fn commutator(a: &OperatorSpec, b: &OperatorSpec) -> OperatorSpec {
    let mut terms = Vec::new();
    let fa: Vec<PauliTerm> = a.folded_terms().collect();
    let fb: Vec<PauliTerm> = b.folded_terms().collect();
    for x in &fa {
        for y in &fb {
            terms.extend(x.product(y));
            terms.extend(y.product(x).into_iter().map(|t| PauliTerm::raw(-t.coefficient, t.factors)));
        }
    }
    let kind = match (a.kind, b.kind) {
        (OperatorKind::Hermitian, OperatorKind::Hermitian)
        | (OperatorKind::AntiHermitian, OperatorKind::AntiHermitian) => OperatorKind::AntiHermitian,
        _ => OperatorKind::Hermitian,
    };
    OperatorSpec {
        name: format!("[{},{}]", a.name, b.name),
        lattice: a.lattice,
        kind,
        normalization: 1.0,
        terms,
    }
    .simplified()
}
