//! The Bockstein complex of a mod-p cohomology ring, its cohomology, and the
//! integral summand pattern it determines.
//!
//! Each degree is computed on first use: the obstruction search only needs a
//! handful of low degrees, while the largest rings have pieces of several
//! thousand dimensions further up.

use std::fmt::Write as _;
use std::sync::{Arc, OnceLock};

use serde::Serialize;
use thiserror::Error;

use crate::fpalg::Element;
use crate::linalg::{rank_and_kernel, FpVector, Subspace};
use crate::steenrod::{OpId, OpMatrix, Steenrod, SteenrodError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BocksteinError {
    #[error(transparent)]
    Steenrod(#[from] SteenrodError),
    #[error("inconsistent Bockstein data in degree {degree}: {detail}")]
    Inconsistent { degree: u32, detail: String },
    #[error("no free summand in degree {degree}")]
    NoFreeSummand { degree: u32 },
    #[error("free summand index {index} out of range (rank {rank}) in degree {degree}")]
    BadIndex { degree: u32, index: usize, rank: u64 },
}

/// Lazily computed data of `β` on one degree.
struct DegreeData {
    matrix: Arc<OpMatrix>,
    /// Image of `β_n`, a subspace of degree `n + 1`, in reduced echelon form.
    image: Subspace,
}

/// The chain complex `(H^*(X; F_p), β)`.
pub struct BocksteinPage<'a> {
    ops: &'a Steenrod,
    top: u32,
    degrees: Vec<OnceLock<Arc<DegreeData>>>,
    kernels: Vec<OnceLock<Arc<Vec<FpVector>>>>,
}

impl<'a> BocksteinPage<'a> {
    pub fn new(ops: &'a Steenrod) -> Self {
        let top = ops.presentation().top_degree();
        let n = top as usize + 1;
        BocksteinPage {
            ops,
            top,
            degrees: (0..n).map(|_| OnceLock::new()).collect(),
            kernels: (0..n).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn prime(&self) -> u32 {
        self.ops.prime()
    }

    pub fn ops(&self) -> &'a Steenrod {
        self.ops
    }

    pub fn top_degree(&self) -> u32 {
        self.top
    }

    /// Dimension of `H^n(X; F_p)`.
    pub fn dimension(&self, n: u32) -> usize {
        self.ops.presentation().basis(n).len()
    }

    fn data(&self, n: u32) -> Result<Arc<DegreeData>, BocksteinError> {
        let slot = &self.degrees[n as usize];
        if let Some(d) = slot.get() {
            return Ok(d.clone());
        }
        let matrix = self.ops.matrix(OpId::Beta, n)?;
        let mut image = Subspace::spanned_by(self.prime(), matrix.target_len, &matrix.columns);
        image.make_reduced();
        Ok(slot.get_or_init(|| Arc::new(DegreeData { matrix, image })).clone())
    }

    /// Matrix of `β_n : H^n -> H^{n+1}`; columns follow the monomial basis.
    pub fn matrix(&self, n: u32) -> Result<Arc<OpMatrix>, BocksteinError> {
        if n > self.top {
            return Ok(self.ops.matrix(OpId::Beta, n)?);
        }
        Ok(self.data(n)?.matrix.clone())
    }

    pub fn rank(&self, n: u32) -> Result<usize, BocksteinError> {
        if n > self.top {
            return Ok(0);
        }
        Ok(self.data(n)?.image.dimension())
    }

    /// `Im β_{n-1}` as a subspace of degree `n`.
    pub fn incoming_image(&self, n: u32) -> Result<Subspace, BocksteinError> {
        if n == 0 || n > self.top + 1 {
            return Ok(Subspace::new(self.prime(), self.dimension(n)));
        }
        Ok(self.data(n - 1)?.image.clone())
    }

    /// Basis of `Ker β_n` in coordinates of degree `n`.
    pub fn kernel(&self, n: u32) -> Result<Arc<Vec<FpVector>>, BocksteinError> {
        if n > self.top {
            return Ok(Arc::new(Vec::new()));
        }
        let slot = &self.kernels[n as usize];
        if let Some(k) = slot.get() {
            return Ok(k.clone());
        }
        let m = self.matrix(n)?;
        let (_, kernel) = rank_and_kernel(self.prime(), &m.columns);
        Ok(slot.get_or_init(|| Arc::new(kernel)).clone())
    }

    /// Whether `β_n` depends on an ABSENT table entry.
    pub fn is_uncertain(&self, n: u32) -> Result<bool, BocksteinError> {
        if n > self.top {
            return Ok(false);
        }
        Ok(self.data(n)?.matrix.is_uncertain())
    }

    /// `dim BH^n = dim Ker β_n − rank β_{n−1}`.
    pub fn bh_dimension(&self, n: u32) -> Result<usize, BocksteinError> {
        if n > self.top {
            return Ok(0);
        }
        let kernel = self.dimension(n) - self.rank(n)?;
        let incoming = if n == 0 { 0 } else { self.rank(n - 1)? };
        kernel.checked_sub(incoming).ok_or_else(|| BocksteinError::Inconsistent {
            degree: n,
            detail: "image of β exceeds its kernel".into(),
        })
    }

    /// Canonical representatives of a basis of `BH^n`: kernel vectors reduced
    /// modulo the reduced echelon basis of the incoming image, then brought to
    /// reduced echelon form themselves.
    pub fn bh_representatives(&self, n: u32) -> Result<Vec<FpVector>, BocksteinError> {
        let image = self.incoming_image(n)?;
        let mut reps = Subspace::new(self.prime(), self.dimension(n));
        for k in self.kernel(n)?.iter() {
            let mut v = k.clone();
            image.reduce(&mut v);
            reps.insert(v);
        }
        reps.make_reduced();
        Ok(reps.basis().to_vec())
    }

    /// `β_{n+1} ∘ β_n`, checked column by column.
    pub fn squares_to_zero(&self, n: u32) -> Result<bool, BocksteinError> {
        let first = self.matrix(n)?;
        let second = self.matrix(n + 1)?;
        Ok(first.columns.iter().all(|c| second.apply(c).0.is_zero()))
    }

    pub fn element(&self, n: u32, v: &FpVector) -> Element {
        self.ops.presentation().basis(n).element(&v.entries())
    }

    pub fn vector(&self, n: u32, e: &Element) -> FpVector {
        let basis = self.ops.presentation().basis(n);
        FpVector::from_entries(self.prime(), &basis.coordinates(e))
    }

    /// Graph of the nonzero `β` entries in DOT format, degrees `0..=max`.
    pub fn diagram_dot(&self, name: &str, max: u32) -> Result<String, BocksteinError> {
        let pres = self.ops.presentation();
        let mut out = String::new();
        writeln!(out, "digraph \"{}\" {{", name.replace('"', "'")).unwrap();
        writeln!(out, "  rankdir=LR;").unwrap();
        writeln!(out, "  node [shape=plaintext];").unwrap();
        let max = max.min(self.top);
        for n in 0..=max {
            let basis = pres.basis(n);
            if basis.is_empty() {
                continue;
            }
            writeln!(out, "  subgraph cluster_{n} {{ label=\"{n}\";").unwrap();
            for (i, m) in basis.monomials.iter().enumerate() {
                writeln!(out, "    d{n}_{i} [label=\"{}\"];", pres.format_monomial(m)).unwrap();
            }
            writeln!(out, "  }}").unwrap();
        }
        for n in 0..max {
            let m = self.matrix(n)?;
            for (i, col) in m.columns.iter().enumerate() {
                for j in col.nonzero_positions() {
                    let c = col.get(j);
                    if c == 1 {
                        writeln!(out, "  d{n}_{i} -> d{}_{j};", n + 1).unwrap();
                    } else {
                        writeln!(out, "  d{n}_{i} -> d{}_{j} [label=\"{c}\"];", n + 1).unwrap();
                    }
                }
            }
        }
        out.push_str("}\n");
        Ok(out)
    }
}

/// Summand counts of `H^n(X; Z)` localized at `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IntegralCounts {
    pub degree: u32,
    pub free: u64,
    /// Number of `Z/p` summands.
    pub z1: u64,
    /// Number of `Z/p^k` summands with `k >= 2`.
    pub zk: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntegralPattern {
    pub prime: u32,
    pub degrees: Vec<IntegralCounts>,
    /// Some `β` matrix used an ABSENT table entry.
    pub tainted: bool,
}

impl IntegralPattern {
    pub fn at(&self, n: u32) -> IntegralCounts {
        self.degrees.get(n as usize).copied().unwrap_or(IntegralCounts {
            degree: n,
            free: 0,
            z1: 0,
            zk: 0,
        })
    }

    pub fn has_torsion(&self) -> bool {
        self.degrees.iter().any(|c| c.z1 > 0 || c.zk > 0)
    }
}

/// Solve for the summand pattern from `dim H^n(F_p) = f_n + t_n + t_{n+1}`
/// and `dim BH^n = f_n + zk_n + zk_{n+1}`, from the top degree down.
pub fn reconstruct_integral(page: &BocksteinPage<'_>, free_ranks: &[u64]) -> Result<IntegralPattern, BocksteinError> {
    let top = page.top_degree();
    let ranks: Vec<usize> = crate::par::map_range(top as usize + 1, |n| page.rank(n as u32))
        .into_iter()
        .collect::<Result<_, _>>()?;
    let mut tainted = false;
    for n in 0..=top {
        tainted |= page.is_uncertain(n)?;
    }
    let mut degrees = vec![
        IntegralCounts {
            degree: 0,
            free: 0,
            z1: 0,
            zk: 0
        };
        top as usize + 1
    ];
    let (mut zk_above, mut t_above) = (0i64, 0i64);
    for n in (0..=top).rev() {
        let i = n as usize;
        let h = page.dimension(n) as i64;
        let incoming = if n == 0 { 0 } else { ranks[i - 1] as i64 };
        let bh = h - ranks[i] as i64 - incoming;
        let f = free_ranks.get(i).copied().unwrap_or(0) as i64;
        let zk = bh - f - zk_above;
        let t = h - f - t_above;
        let z1 = t - zk;
        if bh < 0 || zk < 0 || t < 0 || z1 < 0 {
            return Err(BocksteinError::Inconsistent {
                degree: n,
                detail: format!("dim H = {h}, dim BH = {bh}, free rank {f} give negative torsion counts"),
            });
        }
        degrees[i] = IntegralCounts {
            degree: n,
            free: f as u64,
            z1: z1 as u64,
            zk: zk as u64,
        };
        zk_above = zk;
        t_above = t;
    }
    Ok(IntegralPattern {
        prime: page.prime(),
        degrees,
        tainted,
    })
}

/// Candidate mod-p reductions of a free integral generator.
#[derive(Debug, Clone)]
pub struct CandidateSet {
    pub prime: u32,
    pub degree: u32,
    /// Set when several `BH` classes could carry the free generator.
    pub ambiguous: bool,
    /// Possible `BH` class representatives of the reduction; a single entry
    /// unless ambiguous, and then taken up to nonzero scalars.
    pub classes: Vec<Element>,
    /// Basis of `Im β_{n-1}`; any multiple may be added to a class.
    pub ambiguity: Vec<Element>,
    /// Every candidate, when there are at most [`CANDIDATE_LIMIT`].
    pub candidates: Vec<Element>,
    /// The candidate list or the class list was cut at the limit.
    pub truncated: bool,
    pub class_vectors: Vec<FpVector>,
    pub ambiguity_vectors: Vec<FpVector>,
}

impl CandidateSet {
    /// The first class representative.
    pub fn base(&self) -> &Element {
        &self.classes[0]
    }
}

pub const CANDIDATE_LIMIT: usize = 4096;

/// Nonzero vectors of `F_p^k` with leading coefficient 1, at most `limit`.
fn projective_points(p: u32, k: usize, limit: usize) -> (Vec<Vec<u32>>, bool) {
    let mut out = Vec::new();
    for lead in 0..k {
        let free = k - lead - 1;
        let count = (p as u128).checked_pow(free as u32).unwrap_or(u128::MAX);
        let mut i: u128 = 0;
        while i < count {
            if out.len() >= limit {
                return (out, true);
            }
            let mut v = vec![0; k];
            v[lead] = 1;
            let mut x = i;
            for slot in v.iter_mut().skip(lead + 1).rev() {
                *slot = (x % p as u128) as u32;
                x /= p as u128;
            }
            out.push(v);
            i += 1;
        }
    }
    (out, false)
}

/// All vectors of `F_p^k`, at most `limit`.
fn all_points(p: u32, k: usize, limit: usize) -> (Vec<Vec<u32>>, bool) {
    let count = (p as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    let truncated = count > limit as u128;
    let n = count.min(limit as u128);
    let out = (0..n)
        .map(|mut x| {
            let mut v = vec![0; k];
            for slot in v.iter_mut().rev() {
                *slot = (x % p as u128) as u32;
                x /= p as u128;
            }
            v
        })
        .collect();
    (out, truncated)
}

fn combine(p: u32, len: usize, coeffs: &[u32], vectors: &[FpVector]) -> FpVector {
    let mut v = FpVector::zero(p, len);
    for (c, w) in coeffs.iter().zip(vectors) {
        v.add_scaled(w, *c);
    }
    v
}

/// Candidate reductions of the `index`-th free generator of `H^n(X; Z)`.
///
/// When `dim BH^n = f_n = 1` the reduction is the unique `BH` class, up to
/// `Im β_{n-1}`. Otherwise the assignment of classes to free summands is not
/// determined and every nonzero class is a candidate.
pub fn reduction_candidates(
    page: &BocksteinPage<'_>,
    free_rank: u64,
    degree: u32,
    index: usize,
) -> Result<CandidateSet, BocksteinError> {
    if free_rank == 0 {
        return Err(BocksteinError::NoFreeSummand { degree });
    }
    if index as u64 >= free_rank {
        return Err(BocksteinError::BadIndex {
            degree,
            index,
            rank: free_rank,
        });
    }
    let p = page.prime();
    let len = page.dimension(degree);
    let reps = page.bh_representatives(degree)?;
    if (reps.len() as u64) < free_rank {
        return Err(BocksteinError::Inconsistent {
            degree,
            detail: format!("dim BH = {} is below the free rank {free_rank}", reps.len()),
        });
    }
    let image = page.incoming_image(degree)?;
    let ambiguity_vectors = image.basis().to_vec();
    let ambiguous = reps.len() > 1;
    let (class_vectors, mut truncated) = if ambiguous {
        let (points, cut) = projective_points(p, reps.len(), CANDIDATE_LIMIT);
        let classes = points.iter().map(|c| combine(p, len, c, &reps)).collect();
        (classes, cut)
    } else {
        (reps, false)
    };
    let (shifts, cut) = all_points(p, ambiguity_vectors.len(), CANDIDATE_LIMIT);
    truncated |= cut;
    let mut candidates = Vec::new();
    if class_vectors.len().saturating_mul(shifts.len()) <= CANDIDATE_LIMIT && !cut {
        for c in &class_vectors {
            for s in &shifts {
                let mut v = combine(p, len, s, &ambiguity_vectors);
                v.add(c);
                candidates.push(page.element(degree, &v));
            }
        }
    } else {
        truncated = true;
    }
    Ok(CandidateSet {
        prime: p,
        degree,
        ambiguous,
        classes: class_vectors.iter().map(|v| page.element(degree, v)).collect(),
        ambiguity: ambiguity_vectors.iter().map(|v| page.element(degree, v)).collect(),
        candidates,
        truncated,
        class_vectors,
        ambiguity_vectors,
    })
}
