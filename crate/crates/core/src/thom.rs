//! Obstructions to surjectivity of the Thom morphism `MU^*(G) -> H^*(G; Z)`.
//!
//! An integral class `α` in degree `n` is in the image only if every
//! differential of the Atiyah–Hirzebruch spectral sequence vanishes on it.
//! Those differentials reduce mod p to composites of Steenrod operations of
//! odd degree at least 3, so a composite `W` with `W(ρ(α)) ≠ 0` for every
//! admissible reduction `ρ(α)` shows `α` is not in the image. Conversely, if
//! every such composite kills all of `Ker β` in degrees `>= 3` at every torsion
//! prime, nothing can obstruct and the morphism is surjective.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

use crate::bockstein::{reconstruct_integral, reduction_candidates, BocksteinError, BocksteinPage, CandidateSet, IntegralPattern};
use crate::linalg::{FpVector, Subspace};
use crate::liegroups::{CatalogError, GroupData};
use crate::par;
use crate::steenrod::{OpId, OperationWord, Steenrod, SteenrodError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ThomError {
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Bockstein(#[from] BocksteinError),
    #[error(transparent)]
    Steenrod(#[from] SteenrodError),
    #[error("H^{degree}({group}; Z) has no free generator")]
    NoFreeGenerator { group: String, degree: u32 },
    #[error("integral pattern of {group} at p = {prime} is inconclusive: {detail}")]
    Inconclusive { group: String, prime: u32, detail: String },
}

/// Bounds on the composite search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchConfig {
    pub max_word_length: usize,
    /// Largest total degree of a composite; `dim G − n` when unset.
    pub max_degree: Option<u32>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_word_length: 6,
            max_degree: None,
        }
    }
}

/// Words over `atomics` of odd total degree in `[3, max_total_degree]` and
/// length at most `max_word_length`, ordered by length then lexicographically.
pub fn odd_composites(atomics: &[OpId], p: u32, max_total_degree: u32, max_word_length: usize) -> Vec<OperationWord> {
    let mut ops: Vec<OpId> = atomics.iter().map(|op| op.canonical(p)).collect();
    ops.sort_unstable();
    ops.dedup();
    let mut out = Vec::new();
    let mut layer: Vec<(Vec<OpId>, u32)> = vec![(Vec::new(), 0)];
    for _ in 0..max_word_length {
        let mut next = Vec::new();
        for (w, deg) in &layer {
            for &op in &ops {
                let d = deg + op.shift(p);
                if d > max_total_degree {
                    continue;
                }
                let mut v = w.clone();
                v.push(op);
                next.push((v, d));
            }
        }
        next.sort();
        out.extend(next.iter().filter(|(_, d)| d % 2 == 1 && *d >= 3).map(|(w, _)| OperationWord(w.clone())));
        layer = next;
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    NotInImage,
    NoObstructionFound,
    Tainted,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::NotInImage => "NOT_IN_IMAGE",
            Status::NoObstructionFound => "NO_OBSTRUCTION_FOUND",
            Status::Tainted => "TAINTED",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub candidate: String,
    pub word: OperationWord,
    pub value: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ObstructionVerdict {
    pub group: String,
    pub prime: u32,
    pub degree: u32,
    pub status: Status,
    pub ambiguous: bool,
    pub classes: Vec<String>,
    pub ambiguity: Vec<String>,
    pub candidate_count: usize,
    /// One entry per candidate when the status is NOT_IN_IMAGE.
    pub witnesses: Vec<Witness>,
    /// For TAINTED: the would-be witnesses that consumed an ABSENT entry.
    pub tainted_words: Vec<OperationWord>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Surjectivity {
    Yes,
    No,
    Conditional,
}

impl fmt::Display for Surjectivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Surjectivity::Yes => "yes",
            Surjectivity::No => "no",
            Surjectivity::Conditional => "conditional",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Table1Row {
    pub group: String,
    pub surjective: Surjectivity,
    pub minimal_failing_degree: Option<u32>,
    /// How the answer was reached.
    pub reason: String,
    pub verdict: Option<ObstructionVerdict>,
}

/// Outcome of a search for one class.
enum ClassSearch {
    Witness(OperationWord),
    TaintedOnly(OperationWord),
    Nothing,
}

#[derive(Clone)]
struct State {
    /// Operations as written; the last one was applied first.
    word: Vec<OpId>,
    total: u32,
    rep: FpVector,
    ambiguity: Subspace,
    tainted: bool,
}

/// Per-group analysis with Bockstein pages cached per prime.
pub struct Analyzer<'g> {
    group: &'g GroupData,
    config: SearchConfig,
    pages: BTreeMap<u32, BocksteinPage<'g>>,
}

impl<'g> Analyzer<'g> {
    pub fn new(group: &'g GroupData, config: SearchConfig) -> Self {
        let pages = group
            .primes
            .iter()
            .map(|(&p, d)| (p, BocksteinPage::new(&d.ops)))
            .collect();
        Analyzer { group, config, pages }
    }

    pub fn group(&self) -> &'g GroupData {
        self.group
    }

    pub fn page(&self, p: u32) -> Result<&BocksteinPage<'g>, ThomError> {
        self.pages.get(&p).ok_or_else(|| {
            CatalogError::UnsupportedPrime {
                group: self.group.spec.to_string(),
                prime: p,
            }
            .into()
        })
    }

    fn ops(&self, p: u32) -> Result<&'g Steenrod, ThomError> {
        Ok(&self.group.prime_data(p)?.ops)
    }

    /// Atomic operations used by the search; `Q_1` joins at odd primes.
    pub fn search_atomics(&self, p: u32) -> Result<Vec<OpId>, ThomError> {
        let ops = self.ops(p)?;
        let mut atomics: Vec<OpId> = ops.table().atomics().iter().map(|op| op.canonical(p)).collect();
        if p != 2 {
            atomics.push(OpId::Q1);
        }
        atomics.sort_unstable();
        atomics.dedup();
        Ok(atomics)
    }

    pub fn integral(&self, p: u32) -> Result<IntegralPattern, ThomError> {
        Ok(reconstruct_integral(self.page(p)?, &self.group.free_ranks())?)
    }

    pub fn candidates(&self, p: u32, degree: u32, index: usize) -> Result<CandidateSet, ThomError> {
        let free = self.group.free_ranks().get(degree as usize).copied().unwrap_or(0);
        if free == 0 {
            return Err(ThomError::NoFreeGenerator {
                group: self.group.spec.to_string(),
                degree,
            });
        }
        Ok(reduction_candidates(self.page(p)?, free, degree, index)?)
    }

    fn search(&self, p: u32, degree: u32, rep: &FpVector, ambiguity: &[FpVector]) -> Result<ClassSearch, ThomError> {
        let ops = self.ops(p)?;
        let atomics = self.search_atomics(p)?;
        let dim = self.group.dim;
        let max_total = self.config.max_degree.unwrap_or(dim.saturating_sub(degree));
        let start = State {
            word: Vec::new(),
            total: 0,
            rep: rep.clone(),
            ambiguity: Subspace::spanned_by(p, rep.len(), ambiguity),
            tainted: false,
        };
        if start.ambiguity.contains(rep) {
            return Ok(ClassSearch::Nothing);
        }
        let mut frontier = vec![start];
        let mut tainted_witness: Option<OperationWord> = None;
        for _ in 0..self.config.max_word_length {
            let expanded: Vec<Result<Vec<State>, SteenrodError>> = par::map(&frontier, |s| {
                let mut out = Vec::new();
                for &op in &atomics {
                    if ops.is_bockstein(op) && s.word.first().is_some_and(|&w| ops.is_bockstein(w)) {
                        continue;
                    }
                    let total = s.total + op.shift(p);
                    if total > max_total || degree + total > dim {
                        continue;
                    }
                    let m = ops.matrix(op, degree + s.total)?;
                    let (rep, t0) = m.apply(&s.rep);
                    let mut tainted = s.tainted || t0;
                    let mut amb = Subspace::new(p, m.target_len);
                    for b in s.ambiguity.basis() {
                        let (img, t) = m.apply(b);
                        tainted |= t;
                        amb.insert(img);
                    }
                    if amb.contains(&rep) {
                        continue;
                    }
                    let mut word = Vec::with_capacity(s.word.len() + 1);
                    word.push(op);
                    word.extend_from_slice(&s.word);
                    out.push(State {
                        word,
                        total,
                        rep,
                        ambiguity: amb,
                        tainted,
                    });
                }
                Ok(out)
            });
            let mut next = Vec::new();
            for e in expanded {
                next.extend(e?);
            }
            let witness = |clean: bool| {
                next.iter()
                    .filter(|s| s.total % 2 == 1 && s.total >= 3 && s.tainted != clean)
                    .map(|s| &s.word)
                    .min()
                    .cloned()
            };
            if let Some(w) = witness(true) {
                return Ok(ClassSearch::Witness(OperationWord(w)));
            }
            if tainted_witness.is_none() {
                tainted_witness = witness(false).map(OperationWord);
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        Ok(match tainted_witness {
            Some(w) => ClassSearch::TaintedOnly(w),
            None => ClassSearch::Nothing,
        })
    }

    /// Decide whether the free generators of `H^degree` can be obstructed
    /// at `p`.
    pub fn verdict(&self, p: u32, degree: u32) -> Result<ObstructionVerdict, ThomError> {
        let ops = self.ops(p)?;
        let pres = ops.presentation();
        let page = self.page(p)?;
        let set = self.candidates(p, degree, 0)?;
        let mut notes = Vec::new();
        if set.ambiguous {
            notes.push(format!(
                "AMBIGUOUS: dim BH^{degree} = {} with free rank {}; every nonzero class is a candidate",
                set.class_vectors.len().max(page.bh_dimension(degree)?),
                self.group.free_ranks()[degree as usize]
            ));
        }
        let mut witnesses_per_class = Vec::new();
        let mut tainted_words = Vec::new();
        let mut missing = false;
        for class in &set.class_vectors {
            match self.search(p, degree, class, &set.ambiguity_vectors)? {
                ClassSearch::Witness(w) => witnesses_per_class.push((class.clone(), w)),
                ClassSearch::TaintedOnly(w) => tainted_words.push(w),
                ClassSearch::Nothing => {
                    missing = true;
                    break;
                }
            }
        }
        let mut status = if missing {
            Status::NoObstructionFound
        } else if !tainted_words.is_empty() {
            Status::Tainted
        } else {
            Status::NotInImage
        };
        if status == Status::NotInImage && set.truncated && set.ambiguous {
            notes.push("class list truncated; verdict withheld".into());
            status = Status::NoObstructionFound;
        }
        let beta_uncertain = page.is_uncertain(degree)? || (degree > 0 && page.is_uncertain(degree - 1)?);
        if status == Status::NotInImage && beta_uncertain {
            notes.push("β near this degree uses an ABSENT entry; candidate set is uncertain".into());
            status = Status::Tainted;
        }
        let mut witnesses = Vec::new();
        if status == Status::NotInImage {
            for (class, word) in &witnesses_per_class {
                let members: Vec<crate::fpalg::Element> = if set.ambiguous || set.truncated {
                    vec![page.element(degree, class)]
                } else {
                    set.candidates.clone()
                };
                for c in members {
                    let value = ops.apply_word(word, &c)?;
                    witnesses.push(Witness {
                        candidate: pres.format_element(&c),
                        word: word.clone(),
                        value: pres.format_element(&value.value),
                    });
                }
            }
        }
        Ok(ObstructionVerdict {
            group: self.group.spec.to_string(),
            prime: p,
            degree,
            status,
            ambiguous: set.ambiguous,
            classes: set.classes.iter().map(|e| pres.format_element(e)).collect(),
            ambiguity: set.ambiguity.iter().map(|e| pres.format_element(e)).collect(),
            candidate_count: if set.truncated {
                set.class_vectors.len() * (p as usize).pow(set.ambiguity_vectors.len() as u32)
            } else {
                set.candidates.len()
            },
            witnesses,
            tainted_words,
            notes,
        })
    }

    /// Whether every odd composite of degree at least 3 vanishes on `Ker β`
    /// in all degrees `>= 3`. Returns `Ok(Some(clean))` when it does, with
    /// `clean` false if an ABSENT entry was consumed, and `Ok(None)` as soon
    /// as some composite is nonzero.
    fn odd_composites_vanish(&self, p: u32) -> Result<Option<bool>, ThomError> {
        let ops = self.ops(p)?;
        let page = self.page(p)?;
        let atomics = self.search_atomics(p)?;
        let dim = self.group.dim;
        let pres = ops.presentation();
        // even[e]: span of even-degree composites (including the empty word)
        // applied to Ker β in degrees >= 3, landing in degree e.
        let mut even: Vec<Subspace> = (0..=dim).map(|e| Subspace::new(p, pres.basis(e).len())).collect();
        let mut tainted = false;
        for e in 3..=dim {
            for k in page.kernel(e)?.iter() {
                even[e as usize].insert(k.clone());
            }
            for &op in &atomics {
                let s = op.shift(p);
                if s > e - 3 || s == 0 {
                    continue;
                }
                let src = e - s;
                let m = ops.matrix(op, src)?;
                let images = par::map(even[src as usize].basis(), |b| m.apply(b));
                for (img, t) in images {
                    if img.is_zero() {
                        continue;
                    }
                    tainted |= t;
                    if s % 2 == 1 {
                        return Ok(None);
                    }
                    even[e as usize].insert(img);
                }
            }
        }
        Ok(Some(!tainted))
    }

    /// Smallest degree with a NOT_IN_IMAGE verdict at some torsion prime.
    /// A TAINTED verdict met first ends the search inconclusively.
    pub fn minimal_failing_degree(&self) -> Result<(Option<ObstructionVerdict>, Option<ObstructionVerdict>), ThomError> {
        let free = self.group.free_ranks();
        for n in 3..=self.group.dim {
            if free[n as usize] == 0 {
                continue;
            }
            let mut tainted = None;
            for &p in &self.group.torsion_primes {
                let v = self.verdict(p, n)?;
                match v.status {
                    Status::NotInImage => return Ok((Some(v), None)),
                    Status::Tainted if tainted.is_none() => tainted = Some(v),
                    _ => {}
                }
            }
            if tainted.is_some() {
                return Ok((None, tainted));
            }
        }
        Ok((None, None))
    }

    /// Surjectivity verdict and minimal failing degree for this group.
    pub fn scan(&self) -> Result<Table1Row, ThomError> {
        let group = self.group.spec.to_string();
        if self.group.is_torsion_free() {
            return Ok(Table1Row {
                group,
                surjective: Surjectivity::Yes,
                minimal_failing_degree: None,
                reason: "integral cohomology is torsion-free".into(),
                verdict: None,
            });
        }
        let mut all_vanish = true;
        for &p in &self.group.torsion_primes {
            if self.odd_composites_vanish(p)? != Some(true) {
                all_vanish = false;
                break;
            }
        }
        if all_vanish {
            return Ok(Table1Row {
                group,
                surjective: Surjectivity::Yes,
                minimal_failing_degree: None,
                reason: "every odd composite of degree >= 3 vanishes on Ker β in degrees >= 3".into(),
                verdict: None,
            });
        }
        Ok(match self.minimal_failing_degree()? {
            (Some(v), _) => Table1Row {
                group,
                surjective: Surjectivity::No,
                minimal_failing_degree: Some(v.degree),
                reason: format!("obstructed at p = {}", v.prime),
                verdict: Some(v),
            },
            (None, Some(v)) => Table1Row {
                group,
                surjective: Surjectivity::Conditional,
                minimal_failing_degree: None,
                reason: format!("degree {} at p = {} depends on ABSENT table entries", v.degree, v.prime),
                verdict: Some(v),
            },
            (None, None) => Table1Row {
                group,
                surjective: Surjectivity::Conditional,
                minimal_failing_degree: None,
                reason: "some odd composite is nonzero on Ker β but no free generator is obstructed".into(),
                verdict: None,
            },
        })
    }

    /// An integer `m` such that `m α` is in the image of the Thom morphism for
    /// every `α ∈ H^degree(G; Z)`: the product over degrees above `degree` of
    /// the exponents of the torsion, with `Z/p^{>=2}` priced at `p^2`.
    pub fn multiplier_bound(&self, degree: u32) -> Result<BigUint, ThomError> {
        let mut bound = BigUint::from(1u32);
        for &p in &self.group.torsion_primes {
            let pattern = self.integral(p).map_err(|e| ThomError::Inconclusive {
                group: self.group.spec.to_string(),
                prime: p,
                detail: e.to_string(),
            })?;
            if pattern.tainted {
                return Err(ThomError::Inconclusive {
                    group: self.group.spec.to_string(),
                    prime: p,
                    detail: "β uses ABSENT table entries".into(),
                });
            }
            for d in degree + 1..=self.group.dim {
                let c = pattern.at(d);
                if c.zk > 0 {
                    bound *= p * p;
                } else if c.z1 > 0 {
                    bound *= p;
                }
            }
        }
        Ok(bound)
    }
}

/// Analyze every group in `specs` with default settings.
pub fn table1(specs: &[&str], config: SearchConfig) -> Result<Vec<Table1Row>, ThomError> {
    specs
        .iter()
        .map(|s| {
            let g = crate::liegroups::group(s)?;
            Analyzer::new(&g, config).scan()
        })
        .collect()
}
