//! The integral cellular chain complex of `SO(n)`.
//!
//! `SO(n)` has one cell `e^{i_1} × … × e^{i_m}` of dimension `i_1 + … + i_m`
//! for each sequence `n > i_1 > … > i_m > 0`, built from the cells of real
//! projective spaces. The boundary is the product rule applied to
//! `d(e^i) = (1 + (-1)^i) e^{i-1}`, where a term whose sequence stops being
//! strictly decreasing and positive is dropped.

use std::fmt;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::fpalg::{Generator, Presentation};
use crate::liegroups::k_of;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell(pub Vec<u32>);

impl Cell {
    pub fn dimension(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_valid(&self, n: u32) -> bool {
        self.0.iter().all(|&i| i > 0 && i < n) && self.0.windows(2).all(|w| w[0] > w[1])
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("(0)");
        }
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Serialize for Cell {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// All cells of `SO(n)`, grouped by dimension (index = dimension).
pub fn cells_so(n: u32) -> Vec<Vec<Cell>> {
    let n = n.max(1);
    let top = n * (n - 1) / 2;
    let mut by_dim = vec![Vec::new(); top as usize + 1];
    let m = n - 1;
    for mask in 0u64..(1u64 << m) {
        let seq: Vec<u32> = (1..=m).rev().filter(|&i| mask & (1 << (i - 1)) != 0).collect();
        let c = Cell(seq);
        by_dim[c.dimension() as usize].push(c);
    }
    for cells in &mut by_dim {
        cells.sort();
    }
    by_dim
}

/// `∂(cell)` as (coefficient, cell) pairs with nonzero coefficients.
pub fn boundary(cell: &Cell) -> Vec<(i64, Cell)> {
    let s = &cell.0;
    let mut out = Vec::new();
    let mut prefix = 0u32;
    for j in 0..s.len() {
        let i = s[j];
        let sign = if prefix % 2 == 0 { 1 } else { -1 };
        prefix += i;
        if i % 2 == 1 {
            continue;
        }
        let lowered = i - 1;
        if lowered == 0 || s.get(j + 1) == Some(&lowered) {
            continue;
        }
        let mut t = s.clone();
        t[j] = lowered;
        out.push((2 * sign, Cell(t)));
    }
    out
}

/// Coefficient of `face` in `∂(cell)`.
pub fn incidence(cell: &Cell, face: &Cell) -> i64 {
    boundary(cell).into_iter().filter(|(_, c)| c == face).map(|(k, _)| k).sum()
}

#[derive(Debug, Clone)]
pub struct IntegerChainComplex {
    pub n: u32,
    pub cells: Vec<Vec<Cell>>,
    /// `boundaries[k]` is `∂_k : C_k -> C_{k-1}` with rows indexed by
    /// `(k-1)`-cells and columns by `k`-cells; `boundaries[0]` is empty.
    pub boundaries: Vec<Vec<Vec<BigInt>>>,
}

impl IntegerChainComplex {
    pub fn so(n: u32) -> Self {
        let cells = cells_so(n);
        let mut boundaries = vec![Vec::new()];
        for k in 1..cells.len() {
            let rows = &cells[k - 1];
            let mut m = vec![vec![BigInt::zero(); cells[k].len()]; rows.len()];
            for (col, c) in cells[k].iter().enumerate() {
                for (coeff, face) in boundary(c) {
                    let row = rows.binary_search(&face).expect("faces are cells");
                    m[row][col] += coeff;
                }
            }
            boundaries.push(m);
        }
        IntegerChainComplex { n, cells, boundaries }
    }

    pub fn top_dimension(&self) -> u32 {
        self.cells.len() as u32 - 1
    }

    /// Whether `∂_{k-1} ∘ ∂_k = 0` for every `k`.
    pub fn squares_to_zero(&self) -> bool {
        (2..self.cells.len()).all(|k| {
            let a = &self.boundaries[k - 1];
            let b = &self.boundaries[k];
            (0..self.cells[k - 2].len()).all(|i| {
                (0..self.cells[k].len()).all(|j| {
                    let s: BigInt = (0..self.cells[k - 1].len()).map(|l| &a[i][l] * &b[l][j]).sum();
                    s.is_zero()
                })
            })
        })
    }

    pub fn homology(&self) -> Vec<HomologySummands> {
        let snf: Vec<SmithForm> = self.boundaries.iter().map(|m| smith_normal_form(m)).collect();
        (0..self.cells.len())
            .map(|k| {
                let rank_out = snf[k].rank;
                let rank_in = snf.get(k + 1).map_or(0, |s| s.rank);
                let torsion: Vec<BigInt> = snf
                    .get(k + 1)
                    .map(|s| s.divisors.iter().filter(|d| !d.is_one()).cloned().collect())
                    .unwrap_or_default();
                HomologySummands {
                    degree: k as u32,
                    free: (self.cells[k].len() - rank_out - rank_in) as u64,
                    torsion,
                }
            })
            .collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cells
            .iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 0 { c.len() as i64 } else { -(c.len() as i64) })
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologySummands {
    pub degree: u32,
    pub free: u64,
    #[serde(serialize_with = "serialize_bigints")]
    pub torsion: Vec<BigInt>,
}

fn serialize_bigints<S: serde::Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|d| d.to_string()))
}

impl fmt::Display for HomologySummands {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    /// Nonzero diagonal entries, positive, each dividing the next.
    pub divisors: Vec<BigInt>,
    pub rank: usize,
}

/// Elementary divisors of an integer matrix given as rows.
pub fn smith_normal_form(matrix: &[Vec<BigInt>]) -> SmithForm {
    let mut a: Vec<Vec<BigInt>> = matrix.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // Pivot on an entry of least absolute value in the remaining block.
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, x) in row.iter().enumerate().skip(t) {
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = a[t][t].clone();
            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = &a[i][t] / &p;
                for j in t..cols {
                    let sub = &q * &a[t][j];
                    a[i][j] -= sub;
                }
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = &a[t][j] / &p;
                for i in t..rows {
                    let sub = &q * &a[i][t];
                    a[i][j] -= sub;
                }
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
            // A remainder is smaller than the pivot: move it into place.
            let mut best = (t, t);
            for i in t..rows {
                if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..cols {
                if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            a.swap(t, best.0);
            for row in a.iter_mut() {
                row.swap(t, best.1);
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    // Enforce the divisibility chain.
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            let g = gcd(&diag[i], &diag[j]);
            if g != diag[i] {
                let l = &diag[i] / &g * &diag[j];
                diag[i] = g;
                diag[j] = l;
            }
        }
    }
    let rank = diag.len();
    SmithForm { divisors: diag, rank }
}

fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut a, mut b) = (a.abs(), b.abs());
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

pub fn integral_homology_so(n: u32) -> Vec<HomologySummands> {
    IntegerChainComplex::so(n).homology()
}

/// Edges of the incidence diagram: `face -> cell` whenever `cell` arises from
/// `face` by raising one index by 1 or appending a trailing 1, labeled by the
/// coefficient of `face` in `∂(cell)`.
pub fn incidence_edges(n: u32) -> Vec<(Cell, Cell, i64)> {
    let mut edges = Vec::new();
    for cells in cells_so(n) {
        for c in cells {
            let s = &c.0;
            let mut faces = Vec::new();
            for j in 0..s.len() {
                let mut t = s.clone();
                t[j] -= 1;
                faces.push(Cell(t));
            }
            if s.last() == Some(&1) {
                faces.push(Cell(s[..s.len() - 1].to_vec()));
            }
            for f in faces {
                if f.is_valid(n) {
                    let k = incidence(&c, &f);
                    edges.push((f, c.clone(), k));
                }
            }
        }
    }
    edges.sort_by(|a, b| (a.0.dimension(), &a.0, &a.1).cmp(&(b.0.dimension(), &b.0, &b.1)));
    edges
}

/// The incidence diagram in DOT format.
pub fn incidence_diagram(n: u32) -> String {
    let mut out = String::new();
    writeln!(out, "digraph \"SO({n})\" {{").unwrap();
    writeln!(out, "  rankdir=BT;").unwrap();
    for (d, cells) in cells_so(n).iter().enumerate() {
        writeln!(out, "  {{ rank=same;").unwrap();
        for c in cells {
            writeln!(out, "    \"{c}\" [label=\"{c}\", tooltip=\"dimension {d}\"];").unwrap();
        }
        writeln!(out, "  }}").unwrap();
    }
    for (a, b, k) in incidence_edges(n) {
        writeln!(out, "  \"{a}\" -> \"{b}\" [label=\"{k}\"];").unwrap();
    }
    out.push_str("}\n");
    out
}

/// The mod-2 cohomology ring of `SO(n)`, `F_2[u_1, u_3, …]/(u_i^{k_i})`.
fn so_mod2_ring(n: u32) -> Presentation {
    let gens = (1..n)
        .step_by(2)
        .map(|k| Generator::new(format!("u{k}"), k, k_of(k, n)))
        .collect();
    Presentation::new(2, gens).expect("valid presentation")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mod2Comparison {
    pub degree: u32,
    pub cells: usize,
    pub monomials: usize,
    pub pass: bool,
}

/// Compare cell counts (the mod-2 homology, as every incidence number is
/// even) with the monomial basis of the mod-2 cohomology ring, per degree.
pub fn mod2_consistency(n: u32) -> Vec<Mod2Comparison> {
    let cells = cells_so(n);
    let ring = so_mod2_ring(n);
    (0..cells.len() as u32 + 1)
        .map(|d| {
            let c = cells.get(d as usize).map_or(0, |v| v.len());
            let m = ring.basis(d).len();
            Mod2Comparison {
                degree: d,
                cells: c,
                monomials: m,
                pass: c == m,
            }
        })
        .collect()
}
