//! Canonical pseudo-Boolean polynomials.
//!
//! A [`Polynomial`] stores every monomial as a strictly increasing list of
//! variable indices. Because the variables are binary, `x_i * x_i = x_i`, so
//! repeated indices collapse when a term is inserted. Terms with identical
//! support are summed and exact zeros are dropped. Constants live in a
//! separate `offset` since no tensor entry can hold them.
//!
//! The text form (`.hobo`) looks like
//!
//! ```text
//! # optional header, allows padding variables
//! vars 3
//! -10 x0
//! +7 x1
//! 1 x0 x1
//! -1 x0 x1 x2
//! 2.5          # constant, goes to the offset
//! ```
//!
//! A line may also hold several terms (`1 x0 + 1 x1`): every coefficient
//! starts a new term.

use std::cmp::Ordering;
use std::collections::{btree_map, BTreeMap};
use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{HoboError, Result};

/// Sorted, duplicate-free variable indices of one monomial.
///
/// Ordered by degree first and lexicographically within a degree, so that
/// iteration over a polynomial lists linear terms before quadratic ones.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<usize>);

impl Monomial {
    /// Sorts and deduplicates `vars` (idempotence of binary variables).
    pub fn new(vars: impl IntoIterator<Item = usize>) -> Self {
        let mut vars: Vec<usize> = vars.into_iter().collect();
        vars.sort_unstable();
        vars.dedup();
        Monomial(vars)
    }

    pub fn vars(&self) -> &[usize] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, var: usize) -> bool {
        self.0.binary_search(&var).is_ok()
    }

    /// Product of the selected bits; short-circuits on the first zero.
    #[inline]
    pub fn is_active(&self, bits: &[u8]) -> bool {
        self.0.iter().all(|&i| bits[i] != 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A single `coef * x_{v0} * x_{v1} * ...` term.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub vars: Vec<usize>,
    pub coef: f64,
}

/// A binary vector `x` in `{0,1}^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct Assignment(Vec<u8>);

impl Assignment {
    pub fn zeros(n: usize) -> Self {
        Assignment(vec![0; n])
    }

    pub fn ones(n: usize) -> Self {
        Assignment(vec![1; n])
    }

    pub fn from_bits(bits: Vec<u8>) -> Result<Self> {
        if let Some(pos) = bits.iter().position(|&b| b > 1) {
            return Err(HoboError::InvalidArgument(format!(
                "assignment entry {pos} is {}, expected 0 or 1",
                bits[pos]
            )));
        }
        Ok(Assignment(bits))
    }

    /// Parses a bitstring where character `i` is `x_i`.
    pub fn from_bitstring(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(HoboError::InvalidArgument(format!(
                    "bitstring may only contain '0' and '1', found {other:?}"
                ))),
            })
            .collect::<Result<Vec<u8>>>()
            .map(Assignment)
    }

    /// Assignment at position `index` of the lexicographic order, where
    /// `x_0` is the most significant bit.
    pub fn from_lex_index(n: usize, index: u64) -> Self {
        Assignment((0..n).map(|i| ((index >> (n - 1 - i)) & 1) as u8).collect())
    }

    pub fn lex_index(&self) -> u64 {
        self.0.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u8 {
        self.0[i]
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i] ^= 1;
    }

    pub fn flipped(&self, i: usize) -> Self {
        let mut out = self.clone();
        out.flip(i);
        out
    }

    pub fn to_bitstring(&self) -> String {
        self.0.iter().map(|&b| if b == 1 { '1' } else { '0' }).collect()
    }
}

impl TryFrom<Vec<u8>> for Assignment {
    type Error = HoboError;

    fn try_from(bits: Vec<u8>) -> Result<Self> {
        Assignment::from_bits(bits)
    }
}

impl From<Assignment> for Vec<u8> {
    fn from(a: Assignment) -> Self {
        a.0
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bitstring())
    }
}

/// Canonical pseudo-Boolean polynomial over `num_vars` binary variables.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Polynomial {
    num_vars: usize,
    terms: BTreeMap<Monomial, f64>,
    offset: f64,
}

impl Polynomial {
    /// Empty polynomial over `num_vars` variables.
    pub fn new(num_vars: usize) -> Self {
        Polynomial {
            num_vars,
            terms: BTreeMap::new(),
            offset: 0.0,
        }
    }

    /// Canonicalizes a raw term list.
    ///
    /// With `num_vars = None` the variable count is one past the largest
    /// index used. Empty variable lists are folded into the offset.
    pub fn from_terms<I, V>(num_vars: Option<usize>, terms: I, offset: f64) -> Result<Self>
    where
        I: IntoIterator<Item = (V, f64)>,
        V: IntoIterator<Item = usize>,
    {
        let mut acc: BTreeMap<Monomial, f64> = BTreeMap::new();
        let mut offset = offset;
        let mut max_index = None;
        for (vars, coef) in terms {
            let mono = Monomial::new(vars);
            if let Some(&last) = mono.vars().last() {
                if let Some(n) = num_vars {
                    if last >= n {
                        return Err(HoboError::IndexOutOfRange {
                            index: last,
                            num_vars: n,
                        });
                    }
                }
                max_index = max_index.max(Some(last));
                *acc.entry(mono).or_insert(0.0) += coef;
            } else {
                offset += coef;
            }
        }
        acc.retain(|_, c| *c != 0.0);
        let used = max_index.map_or(0, |m| m + 1);
        Ok(Polynomial {
            num_vars: num_vars.unwrap_or(used),
            terms: acc,
            offset,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in graded-lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, f64)> + '_ {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn to_terms(&self) -> Vec<Term> {
        self.terms()
            .map(|(m, coef)| Term {
                vars: m.vars().to_vec(),
                coef,
            })
            .collect()
    }

    /// Coefficient of the monomial over `vars` (after canonicalization).
    pub fn coefficient(&self, vars: impl IntoIterator<Item = usize>) -> f64 {
        let mono = Monomial::new(vars);
        if mono.degree() == 0 {
            return self.offset;
        }
        self.terms.get(&mono).copied().unwrap_or(0.0)
    }

    /// Length of the longest term, 0 for a constant.
    pub fn degree(&self) -> usize {
        // graded order: the last key has maximal length
        self.terms.keys().next_back().map_or(0, Monomial::degree)
    }

    pub fn max_abs_coef(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// The same polynomial with the offset removed.
    pub fn without_offset(&self) -> Self {
        Polynomial {
            offset: 0.0,
            ..self.clone()
        }
    }

    /// Widens the variable domain; narrowing below the used indices fails.
    pub fn with_num_vars(mut self, num_vars: usize) -> Result<Self> {
        if let Some(index) = self.max_index() {
            if index >= num_vars {
                return Err(HoboError::IndexOutOfRange { index, num_vars });
            }
        }
        self.num_vars = num_vars;
        Ok(self)
    }

    fn max_index(&self) -> Option<usize> {
        self.terms
            .keys()
            .filter_map(|m| m.vars().last().copied())
            .max()
    }

    /// `offset + sum coef * prod x_i`.
    pub fn evaluate(&self, x: &Assignment) -> Result<f64> {
        self.check_len(x.len())?;
        Ok(self.evaluate_bits(x.bits()))
    }

    /// Unchecked variant of [`Polynomial::evaluate`] for hot loops.
    pub fn evaluate_bits(&self, bits: &[u8]) -> f64 {
        debug_assert_eq!(bits.len(), self.num_vars);
        self.terms
            .iter()
            .filter(|(m, _)| m.is_active(bits))
            .fold(self.offset, |acc, (_, &c)| acc + c)
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len != self.num_vars {
            return Err(HoboError::LengthMismatch {
                expected: self.num_vars,
                actual: len,
            });
        }
        Ok(())
    }

    /// Multiplies every coefficient and the offset by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.offset *= factor;
        for c in out.terms.values_mut() {
            *c *= factor;
        }
        out.terms.retain(|_, c| *c != 0.0);
        out
    }

    /// Parses the `.hobo` text format.
    pub fn parse_text(source: &str) -> Result<Self> {
        parse::parse(source)
    }

    /// Renders the `.hobo` text format; `parse_text` inverts it exactly.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn from_json(source: &str) -> Result<Self> {
        let raw: PolynomialJson = serde_json::from_str(source)?;
        raw.try_into()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&PolynomialJson::from(self)).expect("polynomial serializes")
    }

    /// Parses either form, sniffing JSON by a leading `{`.
    pub fn parse_any(source: &str) -> Result<Self> {
        if source.trim_start().starts_with('{') {
            Self::from_json(source)
        } else {
            Self::parse_text(source)
        }
    }
}

impl FromStr for Polynomial {
    type Err = HoboError;

    fn from_str(s: &str) -> Result<Self> {
        Polynomial::parse_text(s)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vars {}", self.num_vars)?;
        for (mono, coef) in self.terms() {
            write!(f, "{coef}")?;
            for v in mono.vars() {
                write!(f, " x{v}")?;
            }
            writeln!(f)?;
        }
        if self.offset != 0.0 {
            writeln!(f, "{}", self.offset)?;
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            match terms.entry(m.clone()) {
                btree_map::Entry::Vacant(e) => {
                    e.insert(*c);
                }
                btree_map::Entry::Occupied(mut e) => {
                    *e.get_mut() += c;
                    if *e.get() == 0.0 {
                        e.remove();
                    }
                }
            }
        }
        Polynomial {
            num_vars: self.num_vars.max(rhs.num_vars),
            terms,
            offset: self.offset + rhs.offset,
        }
    }
}

impl Mul<f64> for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: f64) -> Polynomial {
        self.scaled(rhs)
    }
}

/// Serialized polynomial: `{"num_vars", "offset", "terms": [{"vars", "coef"}]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolynomialJson {
    pub num_vars: usize,
    #[serde(default)]
    pub offset: f64,
    pub terms: Vec<Term>,
}

impl From<&Polynomial> for PolynomialJson {
    fn from(p: &Polynomial) -> Self {
        PolynomialJson {
            num_vars: p.num_vars,
            offset: p.offset,
            terms: p.to_terms(),
        }
    }
}

impl TryFrom<PolynomialJson> for Polynomial {
    type Error = HoboError;

    fn try_from(raw: PolynomialJson) -> Result<Self> {
        Polynomial::from_terms(
            Some(raw.num_vars),
            raw.terms.into_iter().map(|t| (t.vars, t.coef)),
            raw.offset,
        )
    }
}

/// Parameters for [`random_instance`].
#[derive(Debug, Clone, PartialEq)]
pub struct RandomInstance {
    pub n: usize,
    pub max_degree: usize,
    pub terms: usize,
    pub coef_min: f64,
    pub coef_max: f64,
    /// Draw integers in `[ceil(coef_min), floor(coef_max)]` instead of reals.
    pub integer: bool,
    pub seed: u64,
}

impl RandomInstance {
    pub fn new(n: usize, max_degree: usize, terms: usize, seed: u64) -> Self {
        RandomInstance {
            n,
            max_degree,
            terms,
            coef_min: -10.0,
            coef_max: 10.0,
            integer: false,
            seed,
        }
    }

    pub fn integer(mut self, integer: bool) -> Self {
        self.integer = integer;
        self
    }

    pub fn coef_range(mut self, min: f64, max: f64) -> Self {
        self.coef_min = min;
        self.coef_max = max;
        self
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Seeded generator of random canonical instances with distinct monomials.
///
/// Each term picks its degree uniformly among the degrees that still have
/// unused monomials, then a uniform subset of that size. Coefficients are
/// uniform over the range and redrawn when zero.
pub fn random_instance(cfg: &RandomInstance) -> Result<Polynomial> {
    let RandomInstance {
        n,
        max_degree,
        terms,
        ..
    } = *cfg;
    if n == 0 || max_degree == 0 || max_degree > n || terms == 0 {
        return Err(HoboError::InvalidArgument(format!(
            "need n >= 1, 1 <= max_degree <= n and terms >= 1 (n={n}, max_degree={max_degree}, terms={terms})"
        )));
    }
    let (lo, hi) = if cfg.integer {
        (cfg.coef_min.ceil(), cfg.coef_max.floor())
    } else {
        (cfg.coef_min, cfg.coef_max)
    };
    let only_zero = lo == 0.0 && hi == 0.0;
    if !(lo.is_finite() && hi.is_finite()) || lo > hi || only_zero || (!cfg.integer && lo == hi) {
        return Err(HoboError::InvalidArgument(format!(
            "coefficient range [{}, {}] cannot yield non-zero values",
            cfg.coef_min, cfg.coef_max
        )));
    }

    let mut capacity: Vec<u128> = (1..=max_degree).map(|d| binomial(n, d)).collect();
    let available = capacity.iter().fold(0u128, |a, &c| a.saturating_add(c));
    if (terms as u128) > available {
        return Err(HoboError::InfeasibleTermCount {
            requested: terms,
            available,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut chosen: BTreeMap<Monomial, f64> = BTreeMap::new();
    while chosen.len() < terms {
        let open: Vec<usize> = (0..max_degree).filter(|&d| capacity[d] > 0).collect();
        let d = open[rng.random_range(0..open.len())];
        let mono = Monomial::new(rand::seq::index::sample(&mut rng, n, d + 1));
        if chosen.contains_key(&mono) {
            continue;
        }
        let coef = loop {
            let c = if cfg.integer {
                rng.random_range(lo as i64..=hi as i64) as f64
            } else {
                rng.random_range(lo..hi)
            };
            if c != 0.0 {
                break c;
            }
        };
        capacity[d] -= 1;
        chosen.insert(mono, coef);
    }
    Ok(Polynomial {
        num_vars: n,
        terms: chosen,
        offset: 0.0,
    })
}

mod parse {
    use super::*;

    enum Token<'a> {
        Sign(f64),
        Number(f64),
        Var(&'a str),
    }

    fn err(line: usize, column: usize, message: impl Into<String>) -> HoboError {
        HoboError::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    /// Whitespace-separated tokens of one line with 1-based columns.
    fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
        let mut rest = line;
        let mut consumed = 0;
        std::iter::from_fn(move || {
            let start = rest.find(|c: char| !c.is_whitespace())?;
            let tail = &rest[start..];
            let end = tail.find(char::is_whitespace).unwrap_or(tail.len());
            let tok = &tail[..end];
            let column = line[..consumed + start].chars().count() + 1;
            consumed += start + end;
            rest = &tail[end..];
            Some((column, tok))
        })
    }

    fn classify(tok: &str, line: usize, column: usize) -> Result<Token<'_>> {
        match tok {
            "+" => return Ok(Token::Sign(1.0)),
            "-" => return Ok(Token::Sign(-1.0)),
            _ => {}
        }
        if let Some(index) = tok.strip_prefix('x') {
            return Ok(Token::Var(index));
        }
        match tok.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(Token::Number(v)),
            Ok(_) => Err(err(line, column, format!("non-finite coefficient {tok:?}"))),
            Err(_) => Err(err(line, column, format!("unexpected token {tok:?}"))),
        }
    }

    fn var_index(digits: &str, line: usize, column: usize) -> Result<usize> {
        if digits.starts_with('-') {
            return Err(err(line, column, format!("negative variable index x{digits}")));
        }
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err(
                line,
                column,
                format!("variable index must be a non-negative integer, got x{digits}"),
            ));
        }
        digits
            .parse()
            .map_err(|_| err(line, column, format!("variable index x{digits} too large")))
    }

    pub(super) fn parse(source: &str) -> Result<Polynomial> {
        let mut declared: Option<usize> = None;
        let mut raw: Vec<(Vec<usize>, f64)> = Vec::new();
        let mut offset = 0.0;

        for (lineno, full) in source.lines().enumerate() {
            let lineno = lineno + 1;
            let line = full.split('#').next().unwrap_or("");
            let mut toks = tokens(line).peekable();
            let Some(&(col0, first)) = toks.peek() else {
                continue;
            };

            if first == "vars" {
                toks.next();
                if declared.is_some() {
                    return Err(err(lineno, col0, "duplicate `vars` header"));
                }
                if !raw.is_empty() || offset != 0.0 {
                    return Err(err(lineno, col0, "`vars` header must precede all terms"));
                }
                let Some((col, n)) = toks.next() else {
                    return Err(err(lineno, col0, "`vars` header needs a count"));
                };
                let n = n
                    .parse::<usize>()
                    .map_err(|_| err(lineno, col, format!("invalid variable count {n:?}")))?;
                if let Some((col, extra)) = toks.next() {
                    return Err(err(lineno, col, format!("unexpected token {extra:?} after header")));
                }
                declared = Some(n);
                continue;
            }

            let mut current: Option<(Vec<usize>, f64)> = None;
            let mut pending_sign: Option<(usize, f64)> = None;
            for (col, tok) in toks {
                match classify(tok, lineno, col)? {
                    Token::Sign(s) => {
                        if pending_sign.is_some() {
                            return Err(err(lineno, col, "expected a coefficient after sign"));
                        }
                        if let Some(term) = current.take() {
                            raw.push(term);
                        }
                        pending_sign = Some((col, s));
                    }
                    Token::Number(v) => {
                        if let Some(term) = current.take() {
                            raw.push(term);
                        }
                        let sign = pending_sign.take().map_or(1.0, |(_, s)| s);
                        current = Some((Vec::new(), sign * v));
                    }
                    Token::Var(digits) => {
                        if pending_sign.is_some() {
                            return Err(err(lineno, col, "expected a coefficient after sign"));
                        }
                        let Some((vars, _)) = current.as_mut() else {
                            return Err(err(lineno, col, "term must start with a coefficient"));
                        };
                        let index = var_index(digits, lineno, col)?;
                        if let Some(n) = declared {
                            if index >= n {
                                return Err(err(
                                    lineno,
                                    col,
                                    format!("variable x{index} exceeds declared count {n}"),
                                ));
                            }
                        }
                        vars.push(index);
                    }
                }
            }
            if let Some((col, _)) = pending_sign {
                return Err(err(lineno, col, "dangling sign at end of line"));
            }
            if let Some(term) = current {
                if term.0.is_empty() {
                    offset += term.1;
                } else {
                    raw.push(term);
                }
            }
        }

        Polynomial::from_terms(declared, raw, offset)
    }
}
