//! Steenrod squares, reduced powers, the Bockstein and the Milnor operation
//! `Q_1` acting on a presented algebra.
//!
//! Each group supplies the action of a few operations on its generators. The
//! action on monomials follows from the Cartan formula: `Sq` and `P` are
//! multiplicative as total operations, and `β` is a signed derivation. Table
//! entries that the catalog leaves unspecified are ABSENT; they evaluate to zero
//! and mark the result as tainted, so any conclusion that depends on them can
//! be told apart from one that does not.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::fpalg::{Element, Monomial, Presentation};
use crate::linalg::FpVector;
use crate::par;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SteenrodError {
    #[error("operation {0} is not defined at p = {1}")]
    WrongPrime(OpId, u32),
    #[error("element is not homogeneous")]
    Inhomogeneous,
    #[error("cannot parse operation `{0}`")]
    Syntax(String),
    #[error("operation word is empty")]
    EmptyWord,
    #[error("table entry for {op} on generator {generator} has the wrong degree")]
    BadEntry { op: OpId, generator: String },
}

/// Lucas' theorem: `C(j, k) mod p` as the product of digit binomials.
pub fn binom_mod_p(mut j: u64, mut k: u64, p: u32) -> u32 {
    let p64 = p as u64;
    let mut result = 1u64;
    while k > 0 || j > 0 {
        let (a, b) = (j % p64, k % p64);
        if b > a {
            return 0;
        }
        result = result * small_binom(a, b, p64) % p64;
        j /= p64;
        k /= p64;
    }
    result as u32
}

fn small_binom(a: u64, b: u64, p: u64) -> u64 {
    // a < p, so the factorials are invertible.
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..b {
        num = num * ((a - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    num * crate::linalg::inverse_mod(den as u32, p as u32) as u64 % p
}

/// Signed binomial lookup used by the catalog formulas; negative arguments
/// give zero.
pub fn binom_signed(j: i64, k: i64, p: u32) -> u32 {
    if j < 0 || k < 0 {
        0
    } else {
        binom_mod_p(j as u64, k as u64, p)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum DivisibilityVerdict {
    Pass,
    NotApplicable,
    Counterexample { k: u64, j: u64, value: u32 },
}

/// Checks that `C(p^{r-1} + k - kp - 1, k) ≡ 0 mod p` for every `k` in
/// `1..=bound` where the top entry is non-negative. This is the vanishing that
/// rules out reduced powers hitting the Bockstein target in the `SU(n)`
/// quotients.
pub fn verify_an_divisibility(p: u32, r: u32, bound: u64) -> DivisibilityVerdict {
    if r < 2 {
        return DivisibilityVerdict::NotApplicable;
    }
    let base = (p as i64).pow(r - 1);
    for k in 1..=bound as i64 {
        let j = base + k - k * p as i64 - 1;
        if j < 0 {
            continue;
        }
        let value = binom_mod_p(j as u64, k as u64, p);
        if value != 0 {
            return DivisibilityVerdict::Counterexample {
                k: k as u64,
                j: j as u64,
                value,
            };
        }
    }
    DivisibilityVerdict::Pass
}

/// A single cohomology operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OpId {
    Beta,
    Sq(u32),
    P(u32),
    Q1,
}

impl OpId {
    /// Degree shift at the prime `p`.
    pub fn shift(self, p: u32) -> u32 {
        match self {
            OpId::Beta => 1,
            OpId::Sq(j) => j,
            OpId::P(k) => 2 * k * (p - 1),
            OpId::Q1 => 2 * p - 1,
        }
    }

    /// At `p = 2` the Bockstein is `Sq^1`.
    pub fn canonical(self, p: u32) -> OpId {
        match self {
            OpId::Beta if p == 2 => OpId::Sq(1),
            other => other,
        }
    }

    pub fn valid_at(self, p: u32) -> bool {
        match self {
            OpId::Beta => true,
            OpId::Sq(_) => p == 2,
            OpId::P(_) | OpId::Q1 => p != 2,
        }
    }

    fn is_bockstein(self, p: u32) -> bool {
        self.canonical(p) == OpId::Beta.canonical(p)
    }
}

impl fmt::Display for OpId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OpId::Beta => write!(f, "beta"),
            OpId::Sq(j) => write!(f, "Sq{j}"),
            OpId::P(k) => write!(f, "P{k}"),
            OpId::Q1 => write!(f, "Q1"),
        }
    }
}

impl FromStr for OpId {
    type Err = SteenrodError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_lowercase().replace('^', "");
        let err = || SteenrodError::Syntax(s.to_string());
        if t == "beta" || t == "b" || s.trim() == "β" {
            return Ok(OpId::Beta);
        }
        if t == "q1" {
            return Ok(OpId::Q1);
        }
        if let Some(rest) = t.strip_prefix("sq") {
            return rest.parse().map(OpId::Sq).map_err(|_| err());
        }
        if let Some(rest) = t.strip_prefix('p') {
            return rest.parse().map(OpId::P).map_err(|_| err());
        }
        Err(err())
    }
}

impl Serialize for OpId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A composite of operations, written left to right and applied right to left.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OperationWord(pub Vec<OpId>);

impl OperationWord {
    pub fn total_degree(&self, p: u32) -> u32 {
        self.0.iter().map(|op| op.shift(p)).sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for OperationWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|op| op.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for OperationWord {
    type Err = SteenrodError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let ops = s
            .split(',')
            .map(str::parse)
            .collect::<Result<Vec<OpId>, _>>()?;
        if ops.is_empty() {
            return Err(SteenrodError::EmptyWord);
        }
        Ok(OperationWord(ops))
    }
}

impl Serialize for OperationWord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The value of an operation on one generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Action {
    Known(Element),
    Absent,
}

/// Generator actions of the atomic operations of one group at one prime.
#[derive(Debug, Clone)]
pub struct OperationTable {
    prime: u32,
    atomics: Vec<OpId>,
    actions: BTreeMap<(OpId, usize), Action>,
}

impl OperationTable {
    pub fn new(prime: u32, atomics: Vec<OpId>) -> Self {
        OperationTable {
            prime,
            atomics: atomics.into_iter().map(|op| op.canonical(prime)).collect(),
            actions: BTreeMap::new(),
        }
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    /// Operations used when searching for obstructions.
    pub fn atomics(&self) -> &[OpId] {
        &self.atomics
    }

    pub fn set(&mut self, op: OpId, generator: usize, value: Element) {
        self.actions
            .insert((op.canonical(self.prime), generator), Action::Known(value));
    }

    pub fn set_absent(&mut self, op: OpId, generator: usize) {
        self.actions
            .insert((op.canonical(self.prime), generator), Action::Absent);
    }

    pub fn entry(&self, op: OpId, generator: usize) -> Option<&Action> {
        self.actions.get(&(op.canonical(self.prime), generator))
    }

    pub fn entries(&self) -> impl Iterator<Item = (OpId, usize, &Action)> + '_ {
        self.actions.iter().map(|(&(op, g), a)| (op, g, a))
    }
}

/// An element together with a flag recording whether an ABSENT table entry
/// was consumed with nonzero multiplicity while computing it.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TaintedElement {
    pub value: Element,
    pub tainted: bool,
}

impl TaintedElement {
    pub fn clean(value: Element) -> Self {
        TaintedElement {
            value,
            tainted: false,
        }
    }
}

/// Partially known value: the known part plus a flag for an unknown summand.
#[derive(Debug, Clone, Default)]
struct Factor {
    value: Element,
    uncertain: bool,
}

impl Factor {
    fn known(value: Element) -> Self {
        Factor {
            value,
            uncertain: false,
        }
    }

    fn unknown() -> Self {
        Factor {
            value: Element::zero(),
            uncertain: true,
        }
    }

    fn is_zero(&self) -> bool {
        self.value.is_zero() && !self.uncertain
    }

    fn mul(&self, other: &Factor, pres: &Presentation) -> Factor {
        // (a + ?)(b + ?) has an unknown part unless every unknown meets a zero.
        let uncertain = (self.uncertain && (!other.value.is_zero() || other.uncertain))
            || (other.uncertain && (!self.value.is_zero() || self.uncertain));
        Factor {
            value: pres.multiply(&self.value, &other.value),
            uncertain,
        }
    }

    fn add_scaled(&mut self, other: &Factor, c: u32, p: u32) {
        if c % p == 0 {
            return;
        }
        self.value.add_scaled(&other.value, c, p);
        self.uncertain |= other.uncertain;
    }
}

/// Images of one operation on the monomial basis of one degree.
#[derive(Debug, Clone)]
pub struct OpMatrix {
    pub op: OpId,
    pub source_degree: u32,
    pub target_degree: u32,
    pub target_len: usize,
    /// Image of each source basis monomial in target coordinates.
    pub columns: Vec<FpVector>,
    /// Whether the image of each source monomial depends on an ABSENT entry.
    pub uncertain: Vec<bool>,
}

impl OpMatrix {
    pub fn is_uncertain(&self) -> bool {
        self.uncertain.iter().any(|&u| u)
    }
}

/// Evaluator for the operations of one (presentation, table) pair. Operation
/// matrices are computed on demand and cached per degree.
pub struct Steenrod {
    pres: Arc<Presentation>,
    table: Arc<OperationTable>,
    cache: Mutex<HashMap<(OpId, u32), Arc<OpMatrix>>>,
}

impl fmt::Debug for Steenrod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Steenrod")
            .field("presentation", &self.pres)
            .field("table", &self.table)
            .finish()
    }
}

impl Steenrod {
    pub fn new(pres: Arc<Presentation>, table: Arc<OperationTable>) -> Result<Self, SteenrodError> {
        assert_eq!(pres.prime(), table.prime(), "prime mismatch");
        let p = pres.prime();
        for (op, g, action) in table.entries() {
            if let Action::Known(e) = action {
                let expected = pres.generators()[g].degree + op.shift(p);
                let deg = pres
                    .degree_of(e)
                    .map_err(|_| SteenrodError::Inhomogeneous)?;
                if deg.is_some_and(|d| d != expected) {
                    return Err(SteenrodError::BadEntry {
                        op,
                        generator: pres.generators()[g].name.clone(),
                    });
                }
            }
        }
        Ok(Steenrod {
            pres,
            table,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.pres
    }

    pub fn table(&self) -> &Arc<OperationTable> {
        &self.table
    }

    pub fn prime(&self) -> u32 {
        self.pres.prime()
    }

    fn check_op(&self, op: OpId) -> Result<OpId, SteenrodError> {
        let p = self.prime();
        if !op.valid_at(p) {
            return Err(SteenrodError::WrongPrime(op, p));
        }
        Ok(op.canonical(p))
    }

    /// Action on generator `g`, applying the forced rules before the table.
    fn generator_action(&self, op: OpId, g: usize) -> Factor {
        let p = self.prime();
        let gen = &self.pres.generators()[g];
        let deg = gen.degree;
        let forced = match op {
            OpId::Sq(0) | OpId::P(0) => Some(self.pres.generator(g)),
            OpId::Sq(j) if j == deg => Some(self.pres.generator_power(g, 2)),
            OpId::Sq(j) if j > deg => Some(Element::zero()),
            OpId::P(k) if 2 * k == deg => Some(self.pres.generator_power(g, p)),
            OpId::P(k) if 2 * k > deg => Some(Element::zero()),
            _ => None,
        };
        if let Some(e) = forced {
            return Factor::known(e);
        }
        match self.table.entry(op, g) {
            Some(Action::Known(e)) => Factor::known(e.clone()),
            _ => {
                if self.pres.basis(deg + op.shift(p)).is_empty() {
                    Factor::known(Element::zero())
                } else {
                    Factor::unknown()
                }
            }
        }
    }

    /// `op^d` applied to `g^e` for `d = 0..=max_index`, using
    /// `(sum_s op^s g)^e` expanded with multinomial coefficients.
    fn power_components(&self, op_of: impl Fn(u32) -> OpId, g: usize, e: u32, max_index: u32) -> Vec<Factor> {
        let p = self.prime();
        let support: Vec<(u32, Factor)> = (0..=max_index)
            .map(|s| (s, self.generator_action(op_of(s), g)))
            .filter(|(_, f)| !f.is_zero())
            .collect();
        let mut out = vec![Factor::default(); max_index as usize + 1];
        let mut counts = vec![0u32; support.len()];
        self.compositions(&support, 0, e, 0, max_index, &mut counts, &mut out, p);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn compositions(
        &self,
        support: &[(u32, Factor)],
        pos: usize,
        remaining: u32,
        index: u32,
        max_index: u32,
        counts: &mut Vec<u32>,
        out: &mut [Factor],
        p: u32,
    ) {
        if pos == support.len() {
            if remaining != 0 {
                return;
            }
            let mut coeff = 1u32;
            let mut total = 0u64;
            for &c in counts.iter() {
                total += c as u64;
                coeff = coeff * binom_mod_p(total, c as u64, p) % p;
                if coeff == 0 {
                    return;
                }
            }
            let mut term = Factor::known(self.pres.unit());
            for ((_, f), &c) in support.iter().zip(counts.iter()) {
                for _ in 0..c {
                    term = term.mul(f, &self.pres);
                }
            }
            out[index as usize].add_scaled(&term, coeff, p);
            return;
        }
        let s = support[pos].0;
        for c in 0..=remaining {
            let next = index + c * s;
            if next > max_index {
                break;
            }
            counts[pos] = c;
            self.compositions(support, pos + 1, remaining - c, next, max_index, counts, out, p);
            if s == 0 && c == remaining {
                break;
            }
        }
        counts[pos] = 0;
    }

    /// Image of a monomial under an atomic operation, with uncertainty.
    fn monomial_image(&self, op: OpId, m: &Monomial) -> Factor {
        let p = self.prime();
        let result = match op {
            OpId::Sq(j) => self.total_operation(m, j, OpId::Sq),
            OpId::P(k) => self.total_operation(m, k, OpId::P),
            OpId::Beta => self.derivation(m),
            OpId::Q1 => unreachable!("Q1 is evaluated as a composite"),
        };
        let target = self.pres.monomial_degree(m) + op.shift(p);
        if result.uncertain && self.pres.basis(target).is_empty() {
            return Factor::known(Element::zero());
        }
        result
    }

    fn total_operation(&self, m: &Monomial, index: u32, op_of: fn(u32) -> OpId) -> Factor {
        let mut acc = vec![Factor::default(); index as usize + 1];
        acc[0] = Factor::known(self.pres.unit());
        for (g, &e) in m.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            let comps = self.power_components(op_of, g, e as u32, index);
            let mut next = vec![Factor::default(); index as usize + 1];
            for (a, fa) in acc.iter().enumerate() {
                if fa.is_zero() {
                    continue;
                }
                for (b, fb) in comps.iter().enumerate().take(index as usize + 1 - a) {
                    if fb.is_zero() {
                        continue;
                    }
                    next[a + b].add_scaled(&fa.mul(fb, &self.pres), 1, self.prime());
                }
            }
            acc = next;
        }
        acc.swap_remove(index as usize)
    }

    /// Odd-prime Bockstein as a signed derivation over the factors of `m` in
    /// canonical order.
    fn derivation(&self, m: &Monomial) -> Factor {
        let p = self.prime();
        let n = self.pres.ngens();
        let mut out = Factor::default();
        let mut prefix_degree = 0u32;
        for g in 0..n {
            let e = m.exponents()[g] as u32;
            if e == 0 {
                continue;
            }
            let gen = &self.pres.generators()[g];
            let bg = self.generator_action(OpId::Beta, g);
            if !bg.is_zero() {
                let mut prefix = Monomial::unit(n);
                prefix.0[..g].copy_from_slice(&m.exponents()[..g]);
                let mut suffix = Monomial::unit(n);
                suffix.0[g + 1..].copy_from_slice(&m.exponents()[g + 1..]);
                // β(g^e) = e g^{e-1} β(g) for even g; odd g is exterior.
                let local = Factor::known(self.pres.generator_power(g, e - 1)).mul(&bg, &self.pres);
                let term = Factor::known(Element::from_monomial(prefix))
                    .mul(&local, &self.pres)
                    .mul(&Factor::known(Element::from_monomial(suffix)), &self.pres);
                let mut c = e % p;
                if prefix_degree % 2 == 1 {
                    c = (p - c) % p;
                }
                out.add_scaled(&term, c, p);
            }
            prefix_degree += e * gen.degree;
        }
        out
    }

    /// Evaluate one operation on a homogeneous element.
    pub fn apply_atomic(&self, op: OpId, e: &Element) -> Result<TaintedElement, SteenrodError> {
        let op = self.check_op(op)?;
        self.pres
            .degree_of(e)
            .map_err(|_| SteenrodError::Inhomogeneous)?;
        if op == OpId::Q1 {
            return self.milnor_q1(e);
        }
        let p = self.prime();
        let mut out = Factor::default();
        for (m, c) in e.terms() {
            let img = self.monomial_image(op, m);
            if !img.is_zero() {
                out.add_scaled(&img, c, p);
            }
        }
        Ok(TaintedElement {
            value: out.value,
            tainted: out.uncertain,
        })
    }

    /// Apply a word right to left; taint accumulates.
    pub fn apply_word(&self, w: &OperationWord, e: &Element) -> Result<TaintedElement, SteenrodError> {
        if w.is_empty() {
            return Err(SteenrodError::EmptyWord);
        }
        let mut cur = TaintedElement::clean(e.clone());
        for &op in w.0.iter().rev() {
            let next = self.apply_atomic(op, &cur.value)?;
            cur = TaintedElement {
                value: next.value,
                tainted: cur.tainted || next.tainted,
            };
        }
        Ok(cur)
    }

    /// `Q_1 = P^1 β − β P^1`.
    pub fn milnor_q1(&self, e: &Element) -> Result<TaintedElement, SteenrodError> {
        let p = self.prime();
        if p == 2 {
            return Err(SteenrodError::WrongPrime(OpId::Q1, p));
        }
        let a = self.apply_word(&OperationWord(vec![OpId::P(1), OpId::Beta]), e)?;
        let b = self.apply_word(&OperationWord(vec![OpId::Beta, OpId::P(1)]), e)?;
        Ok(TaintedElement {
            value: a.value.difference(&b.value, p),
            tainted: a.tainted || b.tainted,
        })
    }

    /// Matrix of an operation on the given degree, cached.
    pub fn matrix(&self, op: OpId, degree: u32) -> Result<Arc<OpMatrix>, SteenrodError> {
        let op = self.check_op(op)?;
        if let Some(m) = self.cache.lock().unwrap().get(&(op, degree)) {
            return Ok(m.clone());
        }
        let p = self.prime();
        let source = self.pres.basis(degree);
        let target_degree = degree + op.shift(p);
        let target = self.pres.basis(target_degree);
        let computed: Vec<(FpVector, bool)> = if op == OpId::Q1 {
            let pb = self.matrix(OpId::P(1), degree + 1)?;
            let b = self.matrix(OpId::Beta, degree)?;
            let bp = self.matrix(OpId::Beta, degree + op.shift(p) - 1)?;
            let pp = self.matrix(OpId::P(1), degree)?;
            (0..source.len())
                .map(|i| {
                    let (x, tx) = pb.apply(&b.columns[i]);
                    let (y, ty) = bp.apply(&pp.columns[i]);
                    let mut v = x;
                    v.add_scaled(&y, p - 1);
                    (v, tx || ty || b.uncertain[i] || pp.uncertain[i])
                })
                .collect()
        } else {
            par::map(&source.monomials, |m| {
                let img = self.monomial_image(op, m);
                let v = if target.is_empty() {
                    FpVector::zero(p, 0)
                } else {
                    FpVector::from_entries(p, &target.coordinates(&img.value))
                };
                (v, img.uncertain)
            })
        };
        let (columns, uncertain) = computed.into_iter().unzip();
        let m = Arc::new(OpMatrix {
            op,
            source_degree: degree,
            target_degree,
            target_len: target.len(),
            columns,
            uncertain,
        });
        self.cache
            .lock()
            .unwrap()
            .insert((op, degree), m.clone());
        Ok(m)
    }

    /// Apply an operation to a coordinate vector in the given degree.
    pub fn apply_vector(&self, op: OpId, degree: u32, v: &FpVector) -> Result<(FpVector, bool), SteenrodError> {
        Ok(self.matrix(op, degree)?.apply(v))
    }

    /// Whether `op` is the Bockstein at this prime.
    pub fn is_bockstein(&self, op: OpId) -> bool {
        op.is_bockstein(self.prime())
    }
}

impl OpMatrix {
    /// Image of a coordinate vector and whether any column it uses is uncertain.
    pub fn apply(&self, v: &FpVector) -> (FpVector, bool) {
        let p = v.prime();
        let mut out = FpVector::zero(p, self.target_len);
        let mut tainted = false;
        for i in v.nonzero_positions() {
            out.add_scaled(&self.columns[i], v.get(i));
            tainted |= self.uncertain[i];
        }
        (out, tainted)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpalg::Generator;

    fn so5() -> Steenrod {
        let pres = Presentation::new(
            2,
            vec![Generator::new("u1", 1, 8), Generator::exterior("u3", 3)],
        )
        .unwrap();
        let mut table = OperationTable::new(2, vec![OpId::Sq(1), OpId::Sq(2)]);
        // Sq^1 u3 = u4 = u1^4, Sq^2 u3 = 3 u5 = 0 since u5 = 0 in SO(5).
        table.set(OpId::Sq(1), 1, pres.parse_element("u1^4").unwrap());
        table.set(OpId::Sq(2), 1, Element::zero());
        Steenrod::new(Arc::new(pres), Arc::new(table)).unwrap()
    }

    #[test]
    fn lucas() {
        assert_eq!(binom_mod_p(7, 3, 2), 1);
        assert_eq!(binom_mod_p(2, 1, 2), 0);
        assert_eq!(binom_mod_p(0, 0, 3), 1);
        assert_eq!(binom_mod_p(0, 1, 3), 0);
        assert_eq!(binom_mod_p(10, 3, 5), 120 % 5);
        assert_eq!(binom_mod_p(6, 2, 7), 15 % 7);
    }

    #[test]
    fn divisibility() {
        assert_eq!(verify_an_divisibility(3, 2, 100), DivisibilityVerdict::Pass);
        assert_eq!(verify_an_divisibility(2, 3, 100), DivisibilityVerdict::Pass);
        assert_eq!(
            verify_an_divisibility(3, 1, 10),
            DivisibilityVerdict::NotApplicable
        );
    }

    #[test]
    fn op_parsing() {
        let w: OperationWord = "Sq1,Sq2,Sq4,Sq8".parse().unwrap();
        assert_eq!(w.total_degree(2), 15);
        assert_eq!(w.to_string(), "Sq1,Sq2,Sq4,Sq8");
        assert_eq!("beta".parse::<OpId>().unwrap(), OpId::Beta);
        assert_eq!("P^3".parse::<OpId>().unwrap(), OpId::P(3));
        assert!("Sqx".parse::<OpId>().is_err());
        assert_eq!(OpId::Q1.shift(3), 5);
    }

    #[test]
    fn so5_values() {
        let s = so5();
        let pres = s.presentation().clone();
        let x = pres.parse_element("u1^3 + u3").unwrap();
        let w: OperationWord = "Sq1,Sq2".parse().unwrap();
        let r = s.apply_word(&w, &x).unwrap();
        assert!(!r.tainted);
        assert_eq!(pres.format_element(&r.value), "u1^6");
        let b = s.apply_atomic(OpId::Beta, &pres.parse_element("u3").unwrap()).unwrap();
        assert_eq!(pres.format_element(&b.value), "u1^4");
        let id = s.apply_atomic(OpId::Sq(0), &x).unwrap();
        assert_eq!(id.value, x);
    }

    #[test]
    fn absent_entries_taint() {
        let pres = Arc::new(
            Presentation::new(2, vec![Generator::new("x3", 3, 4), Generator::exterior("x5", 5)]).unwrap(),
        );
        let table = OperationTable::new(2, vec![OpId::Sq(1), OpId::Sq(2)]);
        let s = Steenrod::new(pres.clone(), Arc::new(table)).unwrap();
        let r = s.apply_atomic(OpId::Sq(2), &pres.parse_element("x3").unwrap()).unwrap();
        assert!(r.tainted);
        assert!(r.value.is_zero());
        // Sq^1 x5 lands in degree 6 = x3^2, which is nonempty, so still tainted;
        // Sq^1 x3 lands in degree 4 which is empty, so it is forced to zero.
        let r = s.apply_atomic(OpId::Sq(1), &pres.parse_element("x3").unwrap()).unwrap();
        assert!(!r.tainted);
    }

    #[test]
    fn matrix_matches_direct() {
        let s = so5();
        let pres = s.presentation().clone();
        for d in 0..=10 {
            for op in [OpId::Sq(1), OpId::Sq(2), OpId::Sq(3)] {
                let m = s.matrix(op, d).unwrap();
                let basis = pres.basis(d);
                let target = pres.basis(d + op.shift(2));
                for (i, mono) in basis.monomials.iter().enumerate() {
                    let direct = s
                        .apply_atomic(op, &Element::from_monomial(mono.clone()))
                        .unwrap();
                    assert_eq!(target.element(&m.columns[i].entries()), direct.value);
                }
            }
        }
    }

    #[test]
    fn q1_requires_odd_prime() {
        let s = so5();
        assert!(matches!(
            s.milnor_q1(&Element::zero()),
            Err(SteenrodError::WrongPrime(OpId::Q1, 2))
        ));
    }
}
