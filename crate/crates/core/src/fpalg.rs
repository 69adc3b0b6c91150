//! Graded-commutative algebras over `F_p` presented by generators with
//! diagonal nilpotency relations `g^h = 0`.
//!
//! Exterior generators are the case `h = 2`. Every ring used by the Lie group
//! catalog is of this shape, so one multiplication kernel serves all of them.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("generator `{0}` must have positive degree")]
    ZeroDegree(String),
    #[error("generator `{0}` must have nilpotency at least 2")]
    BadNilpotency(String),
    #[error("odd-degree generator `{0}` must be exterior (nilpotency 2) at an odd prime")]
    OddNotExterior(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("exponent {exponent} of `{name}` reaches its nilpotency {nilpotency}")]
    Truncated { name: String, exponent: u32, nilpotency: u32 },
    #[error("cannot parse `{0}`")]
    Syntax(String),
    #[error("element is not homogeneous")]
    Inhomogeneous,
}

pub fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d: &u32| d * d <= p).all(|d| p % d != 0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
    pub nilpotency: u32,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: u32, nilpotency: u32) -> Self {
        Generator {
            name: name.into(),
            degree,
            nilpotency,
        }
    }

    pub fn exterior(name: impl Into<String>, degree: u32) -> Self {
        Self::new(name, degree, 2)
    }
}

/// Exponent vector indexed by generator position.
///
/// Ordering is descending lexicographic, so `u1^3` sorts before `u3` and
/// iteration over an [`Element`] follows the canonical print order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u16>);

impl Monomial {
    pub fn unit(ngens: usize) -> Self {
        Monomial(vec![0; ngens])
    }

    pub fn generator(ngens: usize, index: usize) -> Self {
        let mut m = Self::unit(ngens);
        m.0[index] = 1;
        m
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.cmp(&self.0)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A finite `F_p`-linear combination of monomials. Zero coefficients are
/// never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Element {
    terms: BTreeMap<Monomial, u32>,
}

impl Element {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_monomial(m: Monomial) -> Self {
        Self::from_term(m, 1)
    }

    pub fn from_term(m: Monomial, coeff: u32) -> Self {
        let mut e = Self::zero();
        if coeff != 0 {
            e.terms.insert(m, coeff);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u32)> + '_ {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> u32 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Monomial, coeff: u32, p: u32) {
        let coeff = coeff % p;
        if coeff == 0 {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let c = (*o.get() + coeff) % p;
                if c == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = c;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Element, scale: u32, p: u32) {
        let scale = scale % p;
        if scale == 0 {
            return;
        }
        for (m, c) in other.terms() {
            self.add_term(m.clone(), c * scale % p, p);
        }
    }

    pub fn add_assign(&mut self, other: &Element, p: u32) {
        self.add_scaled(other, 1, p);
    }

    pub fn sum(&self, other: &Element, p: u32) -> Element {
        let mut out = self.clone();
        out.add_assign(other, p);
        out
    }

    pub fn difference(&self, other: &Element, p: u32) -> Element {
        let mut out = self.clone();
        out.add_scaled(other, p - 1, p);
        out
    }

    pub fn scaled(&self, scale: u32, p: u32) -> Element {
        let mut out = Element::zero();
        out.add_scaled(self, scale, p);
        out
    }

    pub fn negated(&self, p: u32) -> Element {
        self.scaled(p - 1, p)
    }
}

/// Monomial basis of one graded piece together with a reverse index.
#[derive(Debug, Clone)]
pub struct DegreeBasis {
    pub degree: u32,
    pub monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl DegreeBasis {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Coordinates of a homogeneous element of this degree.
    pub fn coordinates(&self, e: &Element) -> Vec<u32> {
        let mut v = vec![0; self.len()];
        for (m, c) in e.terms() {
            let i = self
                .index_of(m)
                .expect("element term outside the graded piece");
            v[i] = c;
        }
        v
    }

    pub fn element(&self, coords: &[u32]) -> Element {
        let mut e = Element::zero();
        for (m, &c) in self.monomials.iter().zip(coords) {
            if c != 0 {
                e.terms.insert(m.clone(), c);
            }
        }
        e
    }
}

/// `F_p[g_1, ..., g_r] / (g_i^{h_i})`, graded-commutative.
#[derive(Debug, Clone)]
pub struct Presentation {
    prime: u32,
    generators: Vec<Generator>,
    top_degree: u32,
    basis_cache: Vec<OnceLock<Arc<DegreeBasis>>>,
}

impl Serialize for Presentation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            prime: u32,
            generators: &'a [Generator],
            top_degree: u32,
        }
        Repr {
            prime: self.prime,
            generators: &self.generators,
            top_degree: self.top_degree,
        }
        .serialize(s)
    }
}

impl PartialEq for Presentation {
    fn eq(&self, other: &Self) -> bool {
        self.prime == other.prime && self.generators == other.generators
    }
}

impl Presentation {
    pub fn new(prime: u32, generators: Vec<Generator>) -> Result<Self, AlgebraError> {
        if !is_prime(prime) {
            return Err(AlgebraError::NotPrime(prime));
        }
        for (i, g) in generators.iter().enumerate() {
            if generators[..i].iter().any(|h| h.name == g.name) {
                return Err(AlgebraError::DuplicateGenerator(g.name.clone()));
            }
            if g.degree == 0 {
                return Err(AlgebraError::ZeroDegree(g.name.clone()));
            }
            if g.nilpotency < 2 {
                return Err(AlgebraError::BadNilpotency(g.name.clone()));
            }
            if prime != 2 && g.degree % 2 == 1 && g.nilpotency != 2 {
                return Err(AlgebraError::OddNotExterior(g.name.clone()));
            }
        }
        let top_degree = generators
            .iter()
            .map(|g| (g.nilpotency - 1) * g.degree)
            .sum();
        let basis_cache = (0..=top_degree).map(|_| OnceLock::new()).collect();
        Ok(Presentation {
            prime,
            generators,
            top_degree,
            basis_cache,
        })
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn ngens(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn top_degree(&self) -> u32 {
        self.top_degree
    }

    /// Total `F_p`-dimension, the product of the nilpotency bounds.
    pub fn total_dimension(&self) -> u128 {
        self.generators
            .iter()
            .map(|g| g.nilpotency as u128)
            .product()
    }

    pub fn unit(&self) -> Element {
        Element::from_monomial(Monomial::unit(self.ngens()))
    }

    pub fn generator(&self, index: usize) -> Element {
        Element::from_monomial(Monomial::generator(self.ngens(), index))
    }

    /// The element `g^e`, zero once `e` reaches the nilpotency bound.
    pub fn generator_power(&self, index: usize, e: u32) -> Element {
        if e >= self.generators[index].nilpotency {
            return Element::zero();
        }
        let mut m = Monomial::unit(self.ngens());
        m.0[index] = e as u16;
        Element::from_monomial(m)
    }

    pub fn monomial_degree(&self, m: &Monomial) -> u32 {
        m.0.iter()
            .zip(&self.generators)
            .map(|(&e, g)| e as u32 * g.degree)
            .sum()
    }

    /// Degree of a nonzero homogeneous element; `Ok(None)` for zero.
    pub fn degree_of(&self, e: &Element) -> Result<Option<u32>, AlgebraError> {
        let mut deg = None;
        for (m, _) in e.terms() {
            let d = self.monomial_degree(m);
            match deg {
                None => deg = Some(d),
                Some(x) if x != d => return Err(AlgebraError::Inhomogeneous),
                _ => {}
            }
        }
        Ok(deg)
    }

    /// Monomials of the given degree, descending lexicographic by exponent.
    pub fn basis(&self, degree: u32) -> Arc<DegreeBasis> {
        if degree > self.top_degree {
            return Arc::new(DegreeBasis {
                degree,
                monomials: Vec::new(),
                index: HashMap::new(),
            });
        }
        self.basis_cache[degree as usize]
            .get_or_init(|| {
                let monomials = self.enumerate(degree);
                let index = monomials
                    .iter()
                    .enumerate()
                    .map(|(i, m)| (m.clone(), i))
                    .collect();
                Arc::new(DegreeBasis {
                    degree,
                    monomials,
                    index,
                })
            })
            .clone()
    }

    fn enumerate(&self, degree: u32) -> Vec<Monomial> {
        // Remaining capacity after position i, for pruning.
        let mut tail = vec![0u32; self.ngens() + 1];
        for i in (0..self.ngens()).rev() {
            let g = &self.generators[i];
            tail[i] = tail[i + 1] + (g.nilpotency - 1) * g.degree;
        }
        let mut out = Vec::new();
        let mut current = vec![0u16; self.ngens()];
        self.enumerate_rec(0, degree, &tail, &mut current, &mut out);
        out
    }

    fn enumerate_rec(
        &self,
        pos: usize,
        remaining: u32,
        tail: &[u32],
        current: &mut Vec<u16>,
        out: &mut Vec<Monomial>,
    ) {
        if pos == self.ngens() {
            if remaining == 0 {
                out.push(Monomial(current.clone()));
            }
            return;
        }
        if remaining > tail[pos] {
            return;
        }
        let g = &self.generators[pos];
        let max_e = (g.nilpotency - 1).min(remaining / g.degree);
        for e in (0..=max_e).rev() {
            current[pos] = e as u16;
            self.enumerate_rec(pos + 1, remaining - e * g.degree, tail, current, out);
        }
        current[pos] = 0;
    }

    /// Dimensions of the graded pieces in degrees `0..=max_degree`.
    pub fn poincare_series(&self, max_degree: u32) -> Vec<usize> {
        // Polynomial product of the truncated series 1 + t^d + ... + t^{(h-1)d}.
        let len = max_degree as usize + 1;
        let mut series = vec![0usize; len];
        series[0] = 1;
        for g in &self.generators {
            let mut next = vec![0usize; len];
            for (i, &c) in series.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for e in 0..g.nilpotency as usize {
                    let j = i + e * g.degree as usize;
                    if j >= len {
                        break;
                    }
                    next[j] += c;
                }
            }
            series = next;
        }
        series
    }

    /// Product of two monomials with its Koszul sign (`true` means negate),
    /// or `None` when a truncation relation kills it.
    pub fn multiply_monomials(&self, a: &Monomial, b: &Monomial) -> Option<(Monomial, bool)> {
        let mut exps = Vec::with_capacity(self.ngens());
        for (i, g) in self.generators.iter().enumerate() {
            let e = a.0[i] as u32 + b.0[i] as u32;
            if e >= g.nilpotency {
                return None;
            }
            exps.push(e as u16);
        }
        let mut negative = false;
        if self.prime != 2 {
            // Each odd factor of b passes the odd factors of a with larger index.
            let mut odd_in_a_after = 0u32;
            for i in (0..self.ngens()).rev() {
                if self.generators[i].degree % 2 == 1 {
                    if b.0[i] % 2 == 1 && odd_in_a_after % 2 == 1 {
                        negative = !negative;
                    }
                    odd_in_a_after += a.0[i] as u32;
                }
            }
        }
        Some((Monomial(exps), negative))
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Element {
        let p = self.prime;
        let mut out = Element::zero();
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                if let Some((m, negative)) = self.multiply_monomials(ma, mb) {
                    let c = ca * cb % p;
                    out.add_term(m, if negative { p - c } else { c }, p);
                }
            }
        }
        out
    }

    pub fn pow(&self, a: &Element, e: u32) -> Element {
        let mut out = self.unit();
        for _ in 0..e {
            if out.is_zero() {
                break;
            }
            out = self.multiply(&out, a);
        }
        out
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        let parts: Vec<String> = m
            .0
            .iter()
            .zip(&self.generators)
            .filter(|(&e, _)| e > 0)
            .map(|(&e, g)| {
                if e == 1 {
                    g.name.clone()
                } else {
                    format!("{}^{}", g.name, e)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }

    /// Canonical string: terms joined by `" + "`, each `c*g1^e1*g2^e2` with
    /// `c` omitted when 1 and `^1` omitted.
    pub fn format_element(&self, e: &Element) -> String {
        if e.is_zero() {
            return "0".to_string();
        }
        e.terms()
            .map(|(m, c)| {
                let mono = self.format_monomial(m);
                match (c, m.is_unit()) {
                    (1, _) => mono,
                    (c, true) => c.to_string(),
                    (c, false) => format!("{c}*{mono}"),
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Inverse of [`Presentation::format_element`]. Also accepts `-` between
    /// terms and factors written without `*` only when separated by `*`.
    pub fn parse_element(&self, s: &str) -> Result<Element, AlgebraError> {
        let p = self.prime;
        let mut out = Element::zero();
        let mut pieces: Vec<(bool, String)> = Vec::new();
        let mut current = String::new();
        let mut negative = false;
        for ch in s.chars() {
            if ch == '+' || ch == '-' {
                if !current.trim().is_empty() {
                    pieces.push((negative, std::mem::take(&mut current)));
                    negative = false;
                } else if !pieces.is_empty() || !current.is_empty() && ch == '+' {
                    // Sign directly after another sign, e.g. "a + - b".
                    if ch == '+' {
                        return Err(AlgebraError::Syntax(s.to_string()));
                    }
                }
                if ch == '-' {
                    negative = !negative;
                }
                current.clear();
            } else {
                current.push(ch);
            }
        }
        if current.trim().is_empty() {
            return Err(AlgebraError::Syntax(s.to_string()));
        }
        pieces.push((negative, current));
        for (negative, raw) in pieces {
            let term = raw.trim();
            let mut coeff: u32 = 1;
            let mut exps = vec![0u32; self.ngens()];
            for factor in term.split('*') {
                let factor = factor.trim();
                if factor.is_empty() {
                    return Err(AlgebraError::Syntax(s.to_string()));
                }
                if let Ok(c) = factor.parse::<u64>() {
                    coeff = ((coeff as u64 * (c % p as u64)) % p as u64) as u32;
                    continue;
                }
                let (name, exp) = match factor.split_once('^') {
                    Some((n, e)) => (
                        n.trim(),
                        e.trim()
                            .parse::<u32>()
                            .map_err(|_| AlgebraError::Syntax(s.to_string()))?,
                    ),
                    None => (factor, 1),
                };
                let i = self
                    .generator_index(name)
                    .ok_or_else(|| AlgebraError::UnknownGenerator(name.to_string()))?;
                exps[i] += exp;
                let g = &self.generators[i];
                if exps[i] >= g.nilpotency {
                    return Err(AlgebraError::Truncated {
                        name: g.name.clone(),
                        exponent: exps[i],
                        nilpotency: g.nilpotency,
                    });
                }
            }
            // Factors may be written out of canonical order; reorder through
            // multiplication so Koszul signs are respected.
            let mut value = Element::from_term(Monomial::unit(self.ngens()), coeff);
            for factor in term.split('*') {
                let factor = factor.trim();
                if factor.parse::<u64>().is_ok() {
                    continue;
                }
                let (name, exp) = match factor.split_once('^') {
                    Some((n, e)) => (n.trim(), e.trim().parse::<u32>().unwrap_or(1)),
                    None => (factor, 1),
                };
                let i = self.generator_index(name).expect("checked above");
                value = self.multiply(&value, &self.generator_power(i, exp));
            }
            if negative {
                value = value.negated(p);
            }
            out.add_assign(&value, p);
        }
        Ok(out)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}[", self.prime)?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}|{}|^{}", g.name, g.degree, g.nilpotency)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn so5() -> Presentation {
        Presentation::new(
            2,
            vec![Generator::new("u1", 1, 8), Generator::exterior("u3", 3)],
        )
        .unwrap()
    }

    fn e7_mod3_fragment() -> Presentation {
        Presentation::new(
            3,
            vec![
                Generator::new("x8", 8, 3),
                Generator::exterior("x3", 3),
                Generator::exterior("x7", 7),
            ],
        )
        .unwrap()
    }

    #[test]
    fn basis_order_and_unit() {
        let a = so5();
        let b = a.basis(3);
        let names: Vec<_> = b.monomials.iter().map(|m| a.format_monomial(m)).collect();
        assert_eq!(names, ["u1^3", "u3"]);
        assert_eq!(a.basis(0).monomials, vec![Monomial::unit(2)]);
        assert!(a.basis(11).is_empty());
    }

    #[test]
    fn so5_series() {
        let a = so5();
        let s = a.poincare_series(20);
        assert_eq!(s.iter().sum::<usize>(), 16);
        assert_eq!(a.top_degree(), 10);
        assert_eq!(s[10], 1);
        assert!(s[11..].iter().all(|&c| c == 0));
        for d in 0..=10 {
            assert_eq!(a.basis(d).len(), s[d as usize]);
        }
    }

    #[test]
    fn truncation_and_products() {
        let a = so5();
        let u1 = a.generator(0);
        let u1_7 = a.generator_power(0, 7);
        assert!(a.multiply(&u1_7, &u1).is_zero());
        let prod = a.multiply(&a.generator_power(0, 3), &a.generator(1));
        assert_eq!(a.format_element(&prod), "u1^3*u3");
    }

    #[test]
    fn koszul_sign() {
        let a = e7_mod3_fragment();
        let x3 = a.parse_element("x3").unwrap();
        let x7 = a.parse_element("x7").unwrap();
        let prod = a.multiply(&x7, &x3);
        assert_eq!(a.format_element(&prod), "2*x3*x7");
        assert_eq!(a.multiply(&x3, &x7), a.parse_element("x3*x7").unwrap());
    }

    #[test]
    fn formatting_and_parsing() {
        let a = so5();
        let e = a.parse_element("u3 + u1^3").unwrap();
        assert_eq!(a.format_element(&e), "u1^3 + u3");
        assert!(matches!(
            a.parse_element("u1^8"),
            Err(AlgebraError::Truncated { .. })
        ));
        assert!(matches!(
            a.parse_element("w2"),
            Err(AlgebraError::UnknownGenerator(_))
        ));
        assert_eq!(a.format_element(&Element::zero()), "0");
        assert_eq!(a.parse_element("0").unwrap(), Element::zero());
        let b = e7_mod3_fragment();
        let e = b.parse_element("-x8").unwrap();
        assert_eq!(b.format_element(&e), "2*x8");
        assert_eq!(b.parse_element("x7*x3").unwrap(), b.parse_element("2*x3*x7").unwrap());
    }

    #[test]
    fn rejects_bad_presentations() {
        assert!(matches!(
            Presentation::new(4, vec![]),
            Err(AlgebraError::NotPrime(4))
        ));
        assert!(matches!(
            Presentation::new(3, vec![Generator::new("x", 3, 3)]),
            Err(AlgebraError::OddNotExterior(_))
        ));
        assert!(matches!(
            Presentation::new(2, vec![Generator::new("x", 1, 2), Generator::new("x", 2, 2)]),
            Err(AlgebraError::DuplicateGenerator(_))
        ));
    }
}
