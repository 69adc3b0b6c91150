//! Catalog of compact simple Lie groups: dimensions, rational cohomology and,
//! for each relevant prime, the mod-p cohomology ring with its operations.
//!
//! Group specs are written `SO(5)`, `Spin(10)`, `Ss(12)`, `PSO(8)`, `Sp(3)`,
//! `PSp(2)`, `SU(6)`, `SUq(4,2)` (the quotient of `SU(n)` by the central
//! subgroup of order `l`), `G2`, `F4`, `E6`, `E6ad`, `E7`, `E7ad` and `E8`.
//!
//! Classes written `u_k` in the orthogonal families follow the convention
//! `u_{2i} = u_i^2`: only odd `u_k` (and `u_{2q-2}` where it is a generator)
//! appear in a presentation, even indices are resolved to powers.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::fpalg::{Element, Generator, Presentation};
use crate::steenrod::{binom_mod_p, OpId, OperationTable, Steenrod};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("cannot parse group spec `{0}`")]
    Syntax(String),
    #[error("invalid group: {0}")]
    Invalid(String),
    #[error("{group} has no mod-{prime} data in the catalog")]
    UnsupportedPrime { group: String, prime: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    SO,
    Spin,
    Ss,
    PSO,
    Sp,
    PSp,
    SU,
    SUq,
    G2,
    F4,
    E6,
    E6ad,
    E7,
    E7ad,
    E8,
}

impl Family {
    fn name(self) -> &'static str {
        match self {
            Family::SO => "SO",
            Family::Spin => "Spin",
            Family::Ss => "Ss",
            Family::PSO => "PSO",
            Family::Sp => "Sp",
            Family::PSp => "PSp",
            Family::SU => "SU",
            Family::SUq => "SUq",
            Family::G2 => "G2",
            Family::F4 => "F4",
            Family::E6 => "E6",
            Family::E6ad => "E6ad",
            Family::E7 => "E7",
            Family::E7ad => "E7ad",
            Family::E8 => "E8",
        }
    }

    const ALL: [Family; 15] = [
        Family::SO,
        Family::Spin,
        Family::Ss,
        Family::PSO,
        Family::Sp,
        Family::PSp,
        Family::SU,
        Family::SUq,
        Family::G2,
        Family::F4,
        Family::E6,
        Family::E6ad,
        Family::E7,
        Family::E7ad,
        Family::E8,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupSpec {
    pub family: Family,
    pub n: Option<u32>,
    pub l: Option<u32>,
}

impl GroupSpec {
    pub fn new(family: Family, n: Option<u32>, l: Option<u32>) -> Result<Self, CatalogError> {
        let spec = GroupSpec { family, n, l };
        spec.validate()?;
        Ok(spec)
    }

    pub fn rank(family: Family, n: u32) -> Result<Self, CatalogError> {
        Self::new(family, Some(n), None)
    }

    fn validate(&self) -> Result<(), CatalogError> {
        let bad = |msg: String| Err(CatalogError::Invalid(msg));
        let exceptional = matches!(
            self.family,
            Family::G2 | Family::F4 | Family::E6 | Family::E6ad | Family::E7 | Family::E7ad | Family::E8
        );
        if exceptional {
            if self.n.is_some() || self.l.is_some() {
                return bad(format!("{} takes no parameters", self.family.name()));
            }
            return Ok(());
        }
        let Some(n) = self.n else {
            return bad(format!("{} needs a rank parameter", self.family.name()));
        };
        if n == 0 {
            return bad(format!("{}(0) is not a group in the catalog", self.family.name()));
        }
        match self.family {
            Family::SO | Family::Spin | Family::PSO | Family::SU if n < 2 => {
                bad(format!("{}({n}) is not a group in the catalog", self.family.name()))
            }
            Family::Ss if n % 4 != 0 => bad(format!("Ss({n}) requires 4 | n")),
            Family::SUq => match self.l {
                Some(l) if l >= 2 && n % l == 0 => Ok(()),
                Some(l) => bad(format!("SUq({n},{l}) requires l >= 2 and l | n")),
                None => bad("SUq needs two parameters".into()),
            },
            _ if self.l.is_some() => bad(format!("{} takes one parameter", self.family.name())),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.n, self.l) {
            (Some(n), Some(l)) => write!(f, "{}({n},{l})", self.family.name()),
            (Some(n), None) => write!(f, "{}({n})", self.family.name()),
            _ => write!(f, "{}", self.family.name()),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let syntax = || CatalogError::Syntax(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (head, args) = match t.find('(') {
            Some(i) => {
                let rest = t[i + 1..].strip_suffix(')').ok_or_else(syntax)?;
                (&t[..i], Some(rest))
            }
            None => (t.as_str(), None),
        };
        let family = Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(head))
            .ok_or_else(syntax)?;
        let (n, l) = match args {
            None => (None, None),
            Some(a) => {
                let nums = a
                    .split(',')
                    .map(|x| x.parse::<u32>().map_err(|_| syntax()))
                    .collect::<Result<Vec<_>, _>>()?;
                match nums.as_slice() {
                    [n] => (Some(*n), None),
                    [n, l] => (Some(*n), Some(*l)),
                    _ => return Err(syntax()),
                }
            }
        };
        GroupSpec::new(family, n, l)
    }
}

impl Serialize for GroupSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Largest power of 2 dividing `n`.
pub fn q_of(n: u32) -> u32 {
    1 << n.trailing_zeros()
}

/// Least power of 2 that is at least `n`.
pub fn t_of(n: u32) -> u32 {
    n.max(1).next_power_of_two()
}

/// Least power of 2 with `i * k >= n`.
pub fn k_of(i: u32, n: u32) -> u32 {
    let mut k = 1;
    while i * k < n {
        k *= 2;
    }
    k
}

/// Exponent of the largest power of `p` dividing `n`.
pub fn valuation(mut n: u32, p: u32) -> u32 {
    let mut r = 0;
    while n > 0 && n % p == 0 {
        n /= p;
        r += 1;
    }
    r
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DerivedParams {
    pub q: u32,
    pub t: u32,
    pub r: u32,
}

pub fn derived_params(n: u32) -> DerivedParams {
    DerivedParams {
        q: q_of(n),
        t: t_of(n),
        r: valuation(n, 2),
    }
}

/// Mod-p data of a group: presentation, table and evaluator.
#[derive(Debug)]
pub struct PrimeData {
    pub prime: u32,
    pub ops: Steenrod,
}

impl PrimeData {
    pub fn presentation(&self) -> &Arc<Presentation> {
        self.ops.presentation()
    }

    pub fn table(&self) -> &Arc<OperationTable> {
        self.ops.table()
    }
}

#[derive(Debug)]
pub struct GroupData {
    pub spec: GroupSpec,
    pub dim: u32,
    pub rational_degrees: Vec<u32>,
    /// Primes at which the integral cohomology has torsion.
    pub torsion_primes: Vec<u32>,
    /// Mod-p data; torsion-free groups still carry their mod-2 ring.
    pub primes: BTreeMap<u32, PrimeData>,
}

impl GroupData {
    pub fn prime_data(&self, p: u32) -> Result<&PrimeData, CatalogError> {
        self.primes.get(&p).ok_or(CatalogError::UnsupportedPrime {
            group: self.spec.to_string(),
            prime: p,
        })
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion_primes.is_empty()
    }

    /// Free ranks of `H^n(G; Z)`, the coefficients of `prod (1 + s^e)`.
    pub fn free_ranks(&self) -> Vec<u64> {
        let mut series = vec![0u64; self.dim as usize + 1];
        series[0] = 1;
        for &e in &self.rational_degrees {
            for d in (e as usize..series.len()).rev() {
                series[d] += series[d - e as usize];
            }
        }
        series
    }
}

enum Resolved {
    Value(Element),
    Omitted,
}

/// Symbols `u_k` (or `b_k`, `z_k`) mapped to generator positions, with the
/// rule for indices that are not generators.
struct Symbols {
    index: BTreeMap<u32, usize>,
    omitted: BTreeSet<u32>,
    /// Indices at or beyond this vanish.
    bound: u32,
    /// Resolve even indices as squares of half the index.
    square_even: bool,
}

impl Symbols {
    fn resolve(&self, pres: &Presentation, k: u32) -> Resolved {
        if k >= self.bound {
            return Resolved::Value(Element::zero());
        }
        if let Some(&g) = self.index.get(&k) {
            return Resolved::Value(pres.generator(g));
        }
        if self.omitted.contains(&k) {
            return Resolved::Omitted;
        }
        if self.square_even && k % 2 == 0 {
            return match self.resolve(pres, k / 2) {
                Resolved::Value(e) => Resolved::Value(pres.multiply(&e, &e)),
                Resolved::Omitted => Resolved::Omitted,
            };
        }
        Resolved::Value(Element::zero())
    }

    /// Set `op(g) = coeff * symbol(k)`, marking ABSENT when the target is an
    /// omitted class with nonzero coefficient.
    fn set(&self, table: &mut OperationTable, pres: &Presentation, op: OpId, g: usize, coeff: u32, k: u32) {
        let p = pres.prime();
        if coeff % p == 0 {
            table.set(op, g, Element::zero());
            return;
        }
        match self.resolve(pres, k) {
            Resolved::Value(e) => table.set(op, g, e.scaled(coeff, p)),
            Resolved::Omitted => table.set_absent(op, g),
        }
    }
}

fn mod2_atomics(dim: u32) -> Vec<OpId> {
    let mut ops = Vec::new();
    let mut j = 1;
    while j <= dim.max(1) {
        ops.push(OpId::Sq(j));
        j *= 2;
    }
    ops
}

fn odd_atomics(p: u32, dim: u32) -> Vec<OpId> {
    let mut ops = vec![OpId::Beta];
    let mut k = 1;
    while 2 * k * (p - 1) <= dim {
        ops.push(OpId::P(k));
        k *= p;
    }
    ops
}

fn finish(pres: Presentation, table: OperationTable) -> PrimeData {
    let prime = pres.prime();
    let ops = Steenrod::new(Arc::new(pres), Arc::new(table)).expect("catalog table degrees are consistent");
    PrimeData { prime, ops }
}

fn rational_orthogonal(n: u32) -> Vec<u32> {
    if n % 2 == 1 {
        (3..=2 * n - 3).step_by(4).collect()
    } else {
        let mut v: Vec<u32> = if n >= 4 { (3..=2 * n - 5).step_by(4).collect() } else { vec![] };
        if n >= 2 {
            v.push(n - 1);
        }
        v.sort_unstable();
        v
    }
}

/// Shape of an orthogonal-family presentation.
struct OrthogonalShape {
    n: u32,
    /// `(v, nilpotency)` when a degree-1 class `v` is present.
    v: Option<u32>,
    /// Degree of the exterior class `z`, if present.
    z: Option<u32>,
    /// Odd `u_k` start here.
    first_u: u32,
    omitted: Option<u32>,
    extra_even: Option<u32>,
    /// `Sq^1(u_k)` exception: `(k, v exponent, also add u_{k+1})`.
    exception: Option<(u32, u32, bool)>,
}

fn orthogonal(shape: OrthogonalShape, dim: u32) -> PrimeData {
    let n = shape.n;
    let mut gens = Vec::new();
    let mut v_pos = None;
    if let Some(h) = shape.v {
        v_pos = Some(gens.len());
        gens.push(Generator::new("v", 1, h));
    }
    if let Some(d) = shape.z {
        gens.push(Generator::exterior("z", d));
    }
    let mut index = BTreeMap::new();
    let mut ks: Vec<u32> = (shape.first_u..n).step_by(2).filter(|&k| Some(k) != shape.omitted).collect();
    if let Some(e) = shape.extra_even {
        if e < n {
            ks.push(e);
        }
    }
    ks.sort_unstable();
    for &k in &ks {
        index.insert(k, gens.len());
        gens.push(Generator::new(format!("u{k}"), k, k_of(k, n)));
    }
    let pres = Presentation::new(2, gens).expect("valid orthogonal presentation");
    let symbols = Symbols {
        index,
        omitted: shape.omitted.into_iter().collect(),
        bound: n,
        square_even: true,
    };
    let mut table = OperationTable::new(2, mod2_atomics(dim));
    for (&k, &g) in &symbols.index {
        for j in 1..k {
            let op = OpId::Sq(j);
            if j == 1 {
                if let Some((ek, vexp, with_u)) = shape.exception {
                    if ek == k {
                        let mut value = pres.generator_power(v_pos.expect("exception needs v"), vexp);
                        if with_u {
                            if let Resolved::Value(u) = symbols.resolve(&pres, k + 1) {
                                value.add_assign(&u, 2);
                            }
                        }
                        table.set(op, g, value);
                        continue;
                    }
                }
            }
            symbols.set(&mut table, &pres, op, g, binom_mod_p(k as u64, j as u64, 2), k + j);
        }
    }
    // Actions on z beyond the forced ones stay ABSENT.
    finish(pres, table)
}

fn build_so(n: u32) -> PrimeData {
    orthogonal(
        OrthogonalShape {
            n,
            v: None,
            z: None,
            first_u: 1,
            omitted: None,
            extra_even: None,
            exception: None,
        },
        n * (n - 1) / 2,
    )
}

fn build_spin(n: u32) -> PrimeData {
    let t = t_of(n);
    orthogonal(
        OrthogonalShape {
            n,
            v: None,
            z: (n >= 2).then_some(t - 1),
            first_u: 3,
            omitted: None,
            extra_even: None,
            exception: None,
        },
        n * (n - 1) / 2,
    )
}

fn build_ss(n: u32) -> PrimeData {
    let q = q_of(n);
    let t = t_of(n);
    let mut data = orthogonal(
        OrthogonalShape {
            n,
            v: Some(q),
            z: Some(t - 1),
            first_u: 3,
            omitted: Some(q - 1),
            extra_even: Some(2 * q - 2),
            exception: (q >= 8).then_some((q / 2 - 1, q / 2, false)),
        },
        n * (n - 1) / 2,
    );
    if n == 4 {
        // Ss(4) carries the ring and operations of SO(4), with z in the role
        // of u3, so Sq^1 z = Sq^2 z = 0.
        let pres = data.presentation().clone();
        let mut table = (**data.table()).clone();
        let z = pres.generator_index("z").expect("Ss has z");
        table.set(OpId::Sq(1), z, Element::zero());
        table.set(OpId::Sq(2), z, Element::zero());
        data = finish((*pres).clone(), table);
    }
    data
}

fn build_pso(n: u32) -> PrimeData {
    if n % 2 == 1 {
        return build_so(n);
    }
    let q = q_of(n);
    orthogonal(
        OrthogonalShape {
            n,
            v: Some(q),
            z: None,
            first_u: 1,
            omitted: Some(q - 1),
            extra_even: Some(2 * q - 2),
            exception: (q >= 8).then_some((q / 2 - 1, q / 2, true)),
        },
        n * (n - 1) / 2,
    )
}

/// `Sp(n)` (`projective = false`) or `PSp(n)`.
fn build_symplectic(n: u32, projective: bool) -> PrimeData {
    let q = q_of(n);
    let dim = n * (2 * n + 1);
    let mut gens = Vec::new();
    let mut v_pos = None;
    if projective {
        v_pos = Some(0);
        gens.push(Generator::new("v", 1, 4 * q));
    }
    let omitted = projective.then_some(4 * q - 1);
    let mut index = BTreeMap::new();
    for k in 0..n {
        let d = 4 * k + 3;
        if Some(d) == omitted {
            continue;
        }
        index.insert(d, gens.len());
        gens.push(Generator::exterior(format!("b{d}"), d));
    }
    let pres = Presentation::new(2, gens).expect("valid symplectic presentation");
    let symbols = Symbols {
        index,
        omitted: omitted.into_iter().collect(),
        bound: 4 * n,
        square_even: false,
    };
    let mut table = OperationTable::new(2, mod2_atomics(dim));
    for (&d, &g) in &symbols.index {
        let k = (d - 3) / 4;
        for j in 1..d {
            let op = OpId::Sq(j);
            if projective && n % 2 == 0 && j == 1 && d == 2 * q - 1 {
                table.set(op, g, pres.generator_power(v_pos.unwrap(), 2 * q));
            } else if j % 4 == 0 {
                symbols.set(&mut table, &pres, op, g, binom_mod_p(k as u64, (j / 4) as u64, 2), d + j);
            } else {
                table.set(op, g, Element::zero());
            }
        }
    }
    finish(pres, table)
}

fn build_su(n: u32) -> PrimeData {
    let mut gens = Vec::new();
    let mut index = BTreeMap::new();
    for i in 2..=n {
        let d = 2 * i - 1;
        index.insert(d, gens.len());
        gens.push(Generator::exterior(format!("z{d}"), d));
    }
    let pres = Presentation::new(2, gens).expect("valid SU presentation");
    let symbols = Symbols {
        index,
        omitted: BTreeSet::new(),
        bound: 2 * n,
        square_even: false,
    };
    let mut table = OperationTable::new(2, mod2_atomics(n * n - 1));
    fill_unitary_squares(&mut table, &pres, &symbols);
    finish(pres, table)
}

/// `Sq^{2k}(z_{2i-1}) = C(i-1, k) z_{2i-1+2k}` and odd squares zero.
fn fill_unitary_squares(table: &mut OperationTable, pres: &Presentation, symbols: &Symbols) {
    for (&d, &g) in &symbols.index {
        let i = (d + 1) / 2;
        for j in 1..d {
            let op = OpId::Sq(j);
            if j % 2 == 1 {
                table.set(op, g, Element::zero());
            } else {
                let c = binom_mod_p((i - 1) as u64, (j / 2) as u64, 2);
                symbols.set(table, pres, op, g, c, d + j);
            }
        }
    }
}

/// `SU(n) / Γ_l` at a prime `p` dividing `l`.
fn build_suq(n: u32, l: u32, p: u32) -> PrimeData {
    let r = valuation(n, p);
    let dim = n * n - 1;
    if p == 2 && l % 4 == 2 {
        // Z/2[z1]/(z1^{2^{r+1}}) ⊗ Λ(z3, ..., omit z_{2^{r+1}-1}, ..., z_{2n-1})
        let omitted = (1 << (r + 1)) - 1;
        let mut gens = vec![Generator::new("z1", 1, 1 << (r + 1))];
        let mut index = BTreeMap::new();
        index.insert(1, 0);
        for i in 2..=n {
            let d = 2 * i - 1;
            if d == omitted {
                continue;
            }
            index.insert(d, gens.len());
            gens.push(Generator::exterior(format!("z{d}"), d));
        }
        let pres = Presentation::new(2, gens).expect("valid SUq presentation");
        let symbols = Symbols {
            index,
            omitted: [omitted].into_iter().collect(),
            bound: 2 * n,
            square_even: false,
        };
        let mut table = OperationTable::new(2, mod2_atomics(dim));
        fill_unitary_squares(&mut table, &pres, &symbols);
        let special = (1u32 << r) - 1;
        if special > 1 {
            if let Some(&g) = symbols.index.get(&special) {
                table.set(OpId::Sq(1), g, pres.generator_power(0, 1 << r));
            }
        }
        return finish(pres, table);
    }
    if p == 2 {
        // 4 | l: Z/2[y]/(y^{2^r}) ⊗ Λ(z1, ..., omit z_{2^{r+1}-1}, ..., z_{2n-1})
        let omitted = (1 << (r + 1)) - 1;
        let mut gens = vec![Generator::new("y", 2, 1 << r)];
        let mut index = BTreeMap::new();
        for i in 1..=n {
            let d = 2 * i - 1;
            if d == omitted {
                continue;
            }
            index.insert(d, gens.len());
            gens.push(Generator::exterior(format!("z{d}"), d));
        }
        let pres = Presentation::new(2, gens).expect("valid SUq presentation");
        let symbols = Symbols {
            index,
            omitted: [omitted].into_iter().collect(),
            bound: 2 * n,
            square_even: false,
        };
        let mut table = OperationTable::new(2, mod2_atomics(dim));
        fill_unitary_squares(&mut table, &pres, &symbols);
        table.set(OpId::Sq(1), 0, Element::zero());
        let special = (1u32 << r) - 1;
        if let Some(&g) = symbols.index.get(&special) {
            table.set(OpId::Sq(1), g, pres.generator_power(0, 1 << (r - 1)));
        }
        return finish(pres, table);
    }
    // Odd p: Z/p[y]/(y^{p^r}) ⊗ Λ(z1, ..., omit z_{2p^r-1}, ..., z_{2n-1})
    let pr = p.pow(r);
    let omitted = 2 * pr - 1;
    let mut gens = vec![Generator::new("y", 2, pr)];
    let mut index = BTreeMap::new();
    for i in 1..=n {
        let d = 2 * i - 1;
        if d == omitted {
            continue;
        }
        index.insert(d, gens.len());
        gens.push(Generator::exterior(format!("z{d}"), d));
    }
    let pres = Presentation::new(p, gens).expect("valid SUq presentation");
    let symbols = Symbols {
        index,
        omitted: [omitted].into_iter().collect(),
        bound: 2 * n,
        square_even: false,
    };
    let mut table = OperationTable::new(p, odd_atomics(p, dim));
    table.set(OpId::Beta, 0, Element::zero());
    let special = 2 * p.pow(r.saturating_sub(1)) - 1;
    for (&d, &g) in &symbols.index {
        let i = (d + 1) / 2;
        for k in 1..=d / 2 {
            let c = binom_mod_p((i - 1) as u64, k as u64, p);
            symbols.set(&mut table, &pres, OpId::P(k), g, c, d + 2 * k * (p - 1));
        }
        if d == special && r >= 1 {
            table.set(OpId::Beta, g, pres.generator_power(0, p.pow(r - 1)));
        } else {
            table.set(OpId::Beta, g, Element::zero());
        }
    }
    finish(pres, table)
}

/// Exceptional group data from explicit generator lists and action tables.
struct ExplicitRing<'a> {
    prime: u32,
    gens: &'a [(&'a str, u32, u32)],
    /// `(op, generator, value)` with value parsed in the ring.
    actions: &'a [(OpId, &'a str, &'a str)],
    /// Operations whose unlisted generator actions are zero.
    listed_ops: &'a [OpId],
    atomics: Vec<OpId>,
}

fn explicit(ring: ExplicitRing<'_>) -> PrimeData {
    let gens = ring
        .gens
        .iter()
        .map(|&(name, d, h)| Generator::new(name, d, h))
        .collect();
    let pres = Presentation::new(ring.prime, gens).expect("valid exceptional presentation");
    let mut table = OperationTable::new(ring.prime, ring.atomics);
    for &op in ring.listed_ops {
        for g in 0..pres.ngens() {
            table.set(op, g, Element::zero());
        }
    }
    for &(op, g, value) in ring.actions {
        let gi = pres.generator_index(g).expect("known generator");
        table.set(op, gi, pres.parse_element(value).expect("valid table entry"));
    }
    finish(pres, table)
}

const SQ1248: [OpId; 4] = [OpId::Sq(1), OpId::Sq(2), OpId::Sq(4), OpId::Sq(8)];

fn build_g2f4e6(extra: &[(&str, u32, u32)], dim: u32) -> PrimeData {
    let mut gens = vec![("x3", 3, 4), ("x5", 5, 2)];
    gens.extend_from_slice(extra);
    // Only forced actions are known; Sq^3 is included as an atomic operation
    // since Sq^3 x3 = x3^2 is the one operation these rings are probed with.
    let mut atomics = mod2_atomics(dim);
    atomics.insert(2, OpId::Sq(3));
    explicit(ExplicitRing {
        prime: 2,
        gens: &gens,
        actions: &[],
        listed_ops: &[],
        atomics,
    })
}

fn build_e7_mod2(adjoint: bool) -> PrimeData {
    let tail = [("x15", 15, 2), ("x17", 17, 2), ("x23", 23, 2), ("x27", 27, 2)];
    let (gens, actions): (Vec<(&str, u32, u32)>, Vec<(OpId, &str, &str)>) = if adjoint {
        let mut g = vec![("x1", 1, 4), ("x5", 5, 4), ("x9", 9, 4), ("x6", 6, 2)];
        g.extend_from_slice(&tail);
        (
            g,
            vec![
                (OpId::Sq(1), "x5", "x6"),
                (OpId::Sq(1), "x9", "x5^2"),
                (OpId::Sq(1), "x15", "x5^2*x6"),
                (OpId::Sq(1), "x17", "x9^2"),
                (OpId::Sq(1), "x23", "x9^2*x6"),
                (OpId::Sq(1), "x27", "x5^2*x9^2"),
                (OpId::Sq(2), "x15", "x17"),
                (OpId::Sq(4), "x5", "x9"),
                (OpId::Sq(4), "x23", "x27"),
                (OpId::Sq(8), "x9", "x17"),
                (OpId::Sq(8), "x15", "x23"),
            ],
        )
    } else {
        let mut g = vec![("x3", 3, 4), ("x5", 5, 4), ("x9", 9, 4)];
        g.extend_from_slice(&tail);
        (
            g,
            vec![
                (OpId::Sq(1), "x5", "x3^2"),
                (OpId::Sq(1), "x9", "x5^2"),
                (OpId::Sq(1), "x15", "x3^2*x5^2"),
                (OpId::Sq(1), "x17", "x9^2"),
                (OpId::Sq(1), "x23", "x3^2*x9^2"),
                (OpId::Sq(1), "x27", "x5^2*x9^2"),
                (OpId::Sq(2), "x3", "x5"),
                (OpId::Sq(2), "x15", "x17"),
                (OpId::Sq(4), "x5", "x9"),
                (OpId::Sq(4), "x23", "x27"),
                (OpId::Sq(8), "x9", "x17"),
                (OpId::Sq(8), "x15", "x23"),
            ],
        )
    };
    explicit(ExplicitRing {
        prime: 2,
        gens: &gens,
        actions: &actions,
        listed_ops: &SQ1248,
        atomics: SQ1248.to_vec(),
    })
}

fn build_e7_mod3() -> PrimeData {
    let gens = [
        ("x8", 8, 3),
        ("x3", 3, 2),
        ("x7", 7, 2),
        ("x11", 11, 2),
        ("x15", 15, 2),
        ("x19", 19, 2),
        ("x27", 27, 2),
        ("x35", 35, 2),
    ];
    explicit(ExplicitRing {
        prime: 3,
        gens: &gens,
        actions: &[
            (OpId::P(1), "x3", "x7"),
            (OpId::P(3), "x7", "x19"),
            (OpId::Beta, "x7", "x8"),
            // x8 = β x7, so β x8 = 0.
            (OpId::Beta, "x8", "0"),
        ],
        listed_ops: &[],
        atomics: odd_atomics(3, 133),
    })
}

fn build_e8() -> PrimeData {
    let gens = [
        ("x3", 3, 16),
        ("x5", 5, 8),
        ("x9", 9, 4),
        ("x15", 15, 4),
        ("x17", 17, 2),
        ("x23", 23, 2),
        ("x27", 27, 2),
        ("x29", 29, 2),
    ];
    explicit(ExplicitRing {
        prime: 2,
        gens: &gens,
        actions: &[
            (OpId::Sq(1), "x5", "x3^2"),
            (OpId::Sq(1), "x9", "x5^2"),
            (OpId::Sq(1), "x15", "x3^2*x5^2"),
            (OpId::Sq(1), "x17", "x9^2"),
            (OpId::Sq(1), "x23", "x3^2*x9^2"),
            (OpId::Sq(1), "x27", "x5^2*x9^2"),
            (OpId::Sq(1), "x29", "x15^2"),
            (OpId::Sq(2), "x3", "x5"),
            (OpId::Sq(2), "x15", "x17"),
            (OpId::Sq(2), "x27", "x29"),
            (OpId::Sq(4), "x5", "x9"),
            (OpId::Sq(4), "x23", "x27"),
            (OpId::Sq(8), "x9", "x17"),
            (OpId::Sq(8), "x15", "x23"),
        ],
        listed_ops: &SQ1248,
        atomics: SQ1248.to_vec(),
    })
}

/// Build the catalog entry for a spec.
pub fn build_group(spec: GroupSpec) -> Result<GroupData, CatalogError> {
    spec.validate()?;
    let n = spec.n.unwrap_or(0);
    let mut primes = BTreeMap::new();
    let mut insert = |d: PrimeData| {
        primes.insert(d.prime, d);
    };
    let (dim, rational, torsion): (u32, Vec<u32>, Vec<u32>) = match spec.family {
        Family::SO => {
            insert(build_so(n));
            (n * (n - 1) / 2, rational_orthogonal(n), if n >= 3 { vec![2] } else { vec![] })
        }
        Family::Spin => {
            insert(build_spin(n));
            (n * (n - 1) / 2, rational_orthogonal(n), if n >= 7 { vec![2] } else { vec![] })
        }
        Family::Ss => {
            insert(build_ss(n));
            (n * (n - 1) / 2, rational_orthogonal(n), vec![2])
        }
        Family::PSO => {
            insert(build_pso(n));
            let torsion = if n >= 3 { vec![2] } else { vec![] };
            (n * (n - 1) / 2, rational_orthogonal(n), torsion)
        }
        Family::Sp => {
            insert(build_symplectic(n, false));
            (n * (2 * n + 1), (0..n).map(|k| 4 * k + 3).collect(), vec![])
        }
        Family::PSp => {
            insert(build_symplectic(n, true));
            (n * (2 * n + 1), (0..n).map(|k| 4 * k + 3).collect(), vec![2])
        }
        Family::SU => {
            insert(build_su(n));
            (n * n - 1, (2..=n).map(|i| 2 * i - 1).collect(), vec![])
        }
        Family::SUq => {
            let l = spec.l.expect("validated");
            let ps: Vec<u32> = (2..=l).filter(|&p| l % p == 0 && crate::fpalg::is_prime(p)).collect();
            for &p in &ps {
                insert(build_suq(n, l, p));
            }
            (n * n - 1, (2..=n).map(|i| 2 * i - 1).collect(), ps)
        }
        Family::G2 => {
            insert(build_g2f4e6(&[], 14));
            (14, vec![3, 11], vec![2])
        }
        Family::F4 => {
            insert(build_g2f4e6(&[("x15", 15, 2), ("x23", 23, 2)], 52));
            (52, vec![3, 11, 15, 23], vec![2])
        }
        Family::E6 | Family::E6ad => {
            insert(build_g2f4e6(
                &[("x9", 9, 2), ("x15", 15, 2), ("x17", 17, 2), ("x23", 23, 2)],
                78,
            ));
            (78, vec![3, 9, 11, 15, 17, 23], vec![2])
        }
        Family::E7 | Family::E7ad => {
            insert(build_e7_mod2(spec.family == Family::E7ad));
            insert(build_e7_mod3());
            (133, vec![3, 11, 15, 19, 23, 27, 35], vec![2, 3])
        }
        Family::E8 => {
            insert(build_e8());
            (248, vec![3, 15, 23, 27, 35, 39, 47, 59], vec![2])
        }
    };
    Ok(GroupData {
        spec,
        dim,
        rational_degrees: rational,
        torsion_primes: torsion,
        primes,
    })
}

/// Parse and build in one step.
pub fn group(spec: &str) -> Result<GroupData, CatalogError> {
    build_group(spec.parse()?)
}

/// The instance list reproduced by the table command.
pub const TABLE1_INSTANCES: [&str; 33] = [
    "SO(4)", "SO(5)", "SO(8)", "SO(10)", "Spin(6)", "Spin(7)", "Spin(10)", "Ss(4)", "Ss(8)",
    "Ss(12)", "Ss(16)", "PSO(4)", "PSO(6)", "PSO(8)", "PSO(10)", "PSO(12)", "PSO(16)", "Sp(2)",
    "Sp(3)", "PSp(2)", "PSp(3)", "PSp(4)", "SU(4)", "SUq(4,2)", "SUq(4,4)", "SUq(9,3)", "G2",
    "F4", "E6", "E6ad", "E7", "E7ad", "E8",
];

/// Serializable description of a catalog entry.
#[derive(Debug, Clone, Serialize)]
pub struct CatalogDump {
    pub group: String,
    pub dim: u32,
    pub rational_degrees: Vec<u32>,
    pub torsion_primes: Vec<u32>,
    pub primes: Vec<PrimeDump>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PrimeDump {
    pub prime: u32,
    pub ring: String,
    pub atomics: Vec<String>,
    pub actions: Vec<String>,
}

impl GroupData {
    pub fn dump(&self) -> CatalogDump {
        CatalogDump {
            group: self.spec.to_string(),
            dim: self.dim,
            rational_degrees: self.rational_degrees.clone(),
            torsion_primes: self.torsion_primes.clone(),
            primes: self
                .primes
                .values()
                .map(|d| {
                    let pres = d.presentation();
                    PrimeDump {
                        prime: d.prime,
                        ring: pres.to_string(),
                        atomics: d.table().atomics().iter().map(|op| op.to_string()).collect(),
                        actions: d
                            .table()
                            .entries()
                            .filter_map(|(op, g, a)| match a {
                                crate::steenrod::Action::Known(e) if !e.is_zero() => Some(format!(
                                    "{op}({}) = {}",
                                    pres.generators()[g].name,
                                    pres.format_element(e)
                                )),
                                crate::steenrod::Action::Absent => {
                                    Some(format!("{op}({}) = ABSENT", pres.generators()[g].name))
                                }
                                _ => None,
                            })
                            .collect(),
                    }
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::steenrod::OperationWord;

    fn names(d: &PrimeData) -> Vec<String> {
        d.presentation().generators().iter().map(|g| format!("{}^{}", g.name, g.nilpotency)).collect()
    }

    #[test]
    fn params() {
        assert_eq!((q_of(12), t_of(12)), (4, 16));
        assert_eq!((q_of(8), t_of(8)), (8, 8));
        assert_eq!(k_of(3, 5), 2);
        assert_eq!(valuation(9, 3), 2);
    }

    #[test]
    fn parse_specs() {
        for s in TABLE1_INSTANCES {
            let spec: GroupSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert_eq!("so(5)".parse::<GroupSpec>().unwrap().to_string(), "SO(5)");
        assert!("Ss(6)".parse::<GroupSpec>().is_err());
        assert!("SUq(4,3)".parse::<GroupSpec>().is_err());
        assert!("Foo(3)".parse::<GroupSpec>().is_err());
        assert!("E8(2)".parse::<GroupSpec>().is_err());
    }

    #[test]
    fn top_degree_is_dimension() {
        for s in TABLE1_INSTANCES {
            let g = group(s).unwrap();
            for d in g.primes.values() {
                assert_eq!(d.presentation().top_degree(), g.dim, "{s} mod {}", d.prime);
            }
            assert_eq!(g.rational_degrees.iter().sum::<u32>(), g.dim, "{s}");
        }
    }

    #[test]
    fn so5_ring() {
        let g = group("SO(5)").unwrap();
        let d = g.prime_data(2).unwrap();
        assert_eq!(names(d), ["u1^8", "u3^2"]);
        assert_eq!(g.rational_degrees, [3, 7]);
        let pres = d.presentation();
        let b = d.ops.apply_atomic(OpId::Beta, &pres.parse_element("u3").unwrap()).unwrap();
        assert_eq!(pres.format_element(&b.value), "u1^4");
    }

    #[test]
    fn psp2_ring() {
        let g = group("PSp(2)").unwrap();
        let d = g.prime_data(2).unwrap();
        assert_eq!(names(d), ["v^8", "b3^2"]);
        let pres = d.presentation();
        let b = d.ops.apply_atomic(OpId::Sq(1), &pres.parse_element("b3").unwrap()).unwrap();
        assert_eq!(pres.format_element(&b.value), "v^4");
    }

    #[test]
    fn orthogonal_exceptions() {
        let g = group("PSO(8)").unwrap();
        let d = g.prime_data(2).unwrap();
        let pres = d.presentation();
        let b = d.ops.apply_atomic(OpId::Sq(1), &pres.parse_element("u3").unwrap()).unwrap();
        assert_eq!(pres.format_element(&b.value), "v^4 + u1^4");
        let g = group("Ss(8)").unwrap();
        let d = g.prime_data(2).unwrap();
        let pres = d.presentation();
        let b = d.ops.apply_atomic(OpId::Sq(1), &pres.parse_element("u3").unwrap()).unwrap();
        assert_eq!(pres.format_element(&b.value), "v^4");
        let g = group("Ss(12)").unwrap();
        let d = g.prime_data(2).unwrap();
        assert_eq!(names(d), ["v^4", "z^2", "u5^4", "u6^2", "u7^2", "u9^2", "u11^2"]);
    }

    #[test]
    fn pso_odd_is_so() {
        let a = group("PSO(7)").unwrap();
        let b = group("SO(7)").unwrap();
        assert_eq!(**a.prime_data(2).unwrap().presentation(), **b.prime_data(2).unwrap().presentation());
    }

    #[test]
    fn suq_rings() {
        let g = group("SUq(4,2)").unwrap();
        assert_eq!(names(g.prime_data(2).unwrap()), ["z1^8", "z3^2", "z5^2"]);
        let g = group("SUq(4,4)").unwrap();
        assert_eq!(names(g.prime_data(2).unwrap()), ["y^4", "z1^2", "z3^2", "z5^2"]);
        let g = group("SUq(9,3)").unwrap();
        let d = g.prime_data(3).unwrap();
        assert_eq!(d.presentation().ngens(), 9);
        let pres = d.presentation();
        let b = d.ops.apply_atomic(OpId::Beta, &pres.parse_element("z5").unwrap()).unwrap();
        assert_eq!(pres.format_element(&b.value), "y^3");
    }

    #[test]
    fn e7_mod3_q1() {
        let g = group("E7").unwrap();
        let d = g.prime_data(3).unwrap();
        let pres = d.presentation();
        let r = d.ops.milnor_q1(&pres.parse_element("x3").unwrap()).unwrap();
        assert!(!r.tainted);
        assert_eq!(pres.format_element(&r.value), "2*x8");
        let w: OperationWord = "Q1,Q1".parse().unwrap();
        assert!(d.ops.apply_word(&w, &pres.parse_element("x3").unwrap()).unwrap().value.is_zero());
    }

    #[test]
    fn dump_lists_actions() {
        let g = group("E8").unwrap();
        let dump = g.dump();
        assert!(dump.primes[0].actions.iter().any(|a| a == "Sq1(x29) = x15^2"));
    }
}
