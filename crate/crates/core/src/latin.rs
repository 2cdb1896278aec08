//! Latin squares and their three-way intersections.
//!
//! A *three-way triple* is a set of three Latin squares of the same
//! order that agree in some set of cells and, in every other cell, hold
//! three pairwise distinct entries. The number of agreement cells is
//! the triple's intersection size. [`realize_three_way`] produces a
//! triple with a requested intersection size; [`realize_diagonal_triple`]
//! does the same for triples whose squares share a constant secondary
//! diagonal of `0`s (used to anchor a flower when three triple systems
//! are assembled from a Latin triple).

use alloc::vec;
use alloc::vec::Vec;

use crate::design::{OneFactorization, Permutation};
use crate::rng::Rng;
use crate::spectrum::{published_jprime3, SpectrumSet};

/// An `n × n` array over symbols `0..n-1` with no repeats in any row or
/// column. Constructors in this module always return validated squares;
/// data read from files must pass [`LatinSquare::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatinSquare {
    n: usize,
    cells: Vec<u16>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatinError {
    NotSquare { row: usize, expected: usize, got: usize },
    SymbolOutOfRange { row: usize, col: usize },
    DuplicateInRow { row: usize, symbol: u16 },
    DuplicateInColumn { col: usize, symbol: u16 },
    OrderMismatch { a: usize, b: usize },
    NotPrimePower { q: usize },
    UnsupportedFieldOrder { q: usize },
    CountOutOfRange { q: usize, count: usize },
    NotSymmetric,
    DiagonalNotConstant,
    OddOrder { n: usize },
}

impl core::fmt::Display for LatinError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            LatinError::NotSquare { row, expected, got } => {
                write!(f, "row {row} has {got} entries, expected {expected}")
            }
            LatinError::SymbolOutOfRange { row, col } => {
                write!(f, "symbol out of range at ({row}, {col})")
            }
            LatinError::DuplicateInRow { row, symbol } => {
                write!(f, "symbol {symbol} repeats in row {row}")
            }
            LatinError::DuplicateInColumn { col, symbol } => {
                write!(f, "symbol {symbol} repeats in column {col}")
            }
            LatinError::OrderMismatch { a, b } => {
                write!(f, "order mismatch: {a} vs {b}")
            }
            LatinError::NotPrimePower { q } => write!(f, "{q} is not a prime power"),
            LatinError::UnsupportedFieldOrder { q } => {
                write!(f, "no field tables embedded for order {q}")
            }
            LatinError::CountOutOfRange { q, count } => {
                write!(f, "cannot produce {count} squares of order {q} (max {})", q - 1)
            }
            LatinError::NotSymmetric => write!(f, "square is not symmetric"),
            LatinError::DiagonalNotConstant => {
                write!(f, "main diagonal is not constant 0")
            }
            LatinError::OddOrder { n } => write!(f, "order {n} is odd, expected even"),
        }
    }
}

impl LatinSquare {
    pub fn from_rows(rows: Vec<Vec<u16>>) -> Result<LatinSquare, LatinError> {
        let n = rows.len();
        let mut cells = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(LatinError::NotSquare { row: i, expected: n, got: row.len() });
            }
            for (j, &s) in row.iter().enumerate() {
                if (s as usize) >= n {
                    return Err(LatinError::SymbolOutOfRange { row: i, col: j });
                }
                cells.push(s);
            }
        }
        Ok(LatinSquare { n, cells })
    }

    /// The cyclic square `(i + j) mod n`.
    pub fn cyclic(n: usize) -> LatinSquare {
        let mut cells = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                cells.push(((i + j) % n) as u16);
            }
        }
        LatinSquare { n, cells }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u16 {
        self.cells[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<u16>> {
        (0..self.n)
            .map(|i| self.cells[i * self.n..(i + 1) * self.n].to_vec())
            .collect()
    }

    /// Check the Latin property (shape and range are constructor-checked).
    pub fn validate(&self) -> Result<(), LatinError> {
        let n = self.n;
        for i in 0..n {
            let mut seen = vec![false; n];
            for j in 0..n {
                let s = self.get(i, j) as usize;
                if seen[s] {
                    return Err(LatinError::DuplicateInRow { row: i, symbol: s as u16 });
                }
                seen[s] = true;
            }
        }
        for j in 0..n {
            let mut seen = vec![false; n];
            for i in 0..n {
                let s = self.get(i, j) as usize;
                if seen[s] {
                    return Err(LatinError::DuplicateInColumn { col: j, symbol: s as u16 });
                }
                seen[s] = true;
            }
        }
        Ok(())
    }

    pub fn transpose(&self) -> LatinSquare {
        let n = self.n;
        let mut cells = vec![0u16; n * n];
        for i in 0..n {
            for j in 0..n {
                cells[j * n + i] = self.get(i, j);
            }
        }
        LatinSquare { n, cells }
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Replace each symbol `s` by `p(s)`.
    pub fn relabel_symbols(&self, p: &Permutation) -> LatinSquare {
        let cells = self.cells.iter().map(|&s| p.apply(s)).collect();
        LatinSquare { n: self.n, cells }
    }

    /// Row `i` of the result is row `p(i)` of the input.
    pub fn permute_rows(&self, p: &Permutation) -> LatinSquare {
        let n = self.n;
        let mut cells = Vec::with_capacity(n * n);
        for i in 0..n {
            let src = p.apply(i as u16) as usize;
            cells.extend_from_slice(&self.cells[src * n..(src + 1) * n]);
        }
        LatinSquare { n, cells }
    }

    /// Column `j` of the result is column `p(j)` of the input.
    pub fn permute_cols(&self, p: &Permutation) -> LatinSquare {
        let n = self.n;
        let mut cells = vec![0u16; n * n];
        for i in 0..n {
            for j in 0..n {
                cells[i * n + j] = self.get(i, p.apply(j as u16) as usize);
            }
        }
        LatinSquare { n, cells }
    }

    /// The symbol shared by all cells `(i, n-1-i)`, if constant.
    pub fn secondary_diagonal_constant(&self) -> Option<u16> {
        let n = self.n;
        let s = self.get(0, n - 1);
        (1..n).all(|i| self.get(i, n - 1 - i) == s).then_some(s)
    }
}

// ---------------------------------------------------------------------
// Orthogonality and finite-field MOLS.
// ---------------------------------------------------------------------

/// True iff the ordered pairs of entries cover all `n²` combinations.
pub fn are_orthogonal(a: &LatinSquare, b: &LatinSquare) -> Result<bool, LatinError> {
    if a.n != b.n {
        return Err(LatinError::OrderMismatch { a: a.n, b: b.n });
    }
    let n = a.n;
    let mut seen = vec![false; n * n];
    for i in 0..n {
        for j in 0..n {
            let key = a.get(i, j) as usize * n + b.get(i, j) as usize;
            if seen[key] {
                return Ok(false);
            }
            seen[key] = true;
        }
    }
    Ok(true)
}

fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_power_decompose(q: usize) -> Option<(usize, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|&d| q % d == 0)?;
    if !is_prime(p) {
        return None;
    }
    let mut m = q;
    let mut d = 0;
    while m % p == 0 {
        m /= p;
        d += 1;
    }
    (m == 1).then_some((p, d))
}

/// Addition and multiplication tables of the field with `q` elements.
/// Elements are indexed `0..q` by base-`p` digit vectors of polynomial
/// coefficients; non-prime orders use an embedded irreducible polynomial
/// (available for q ∈ {4, 8, 9, 16, 25, 27, 32}).
struct FieldTables {
    q: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
}

fn field_tables(q: usize) -> Result<FieldTables, LatinError> {
    let (p, deg) = prime_power_decompose(q).ok_or(LatinError::NotPrimePower { q })?;
    let d = deg as usize;
    // Lower coefficients of a monic irreducible polynomial of degree d,
    // ascending: x^d + low[d-1]·x^(d-1) + … + low[0].
    let low: Vec<usize> = if d == 1 {
        vec![0]
    } else {
        match q {
            4 => vec![1, 1],
            8 => vec![1, 1, 0],
            9 => vec![1, 0],
            16 => vec![1, 1, 0, 0],
            25 => vec![1, 1],
            27 => vec![1, 2, 0],
            32 => vec![1, 0, 1, 0, 0],
            _ => return Err(LatinError::UnsupportedFieldOrder { q }),
        }
    };
    let digits = |mut e: usize| -> Vec<usize> {
        let mut v = vec![0usize; d];
        for slot in v.iter_mut() {
            *slot = e % p;
            e /= p;
        }
        v
    };
    let pack = |v: &[usize]| -> usize { v.iter().rev().fold(0, |acc, &c| acc * p + c) };
    let mut add = vec![0u16; q * q];
    let mut mul = vec![0u16; q * q];
    for a in 0..q {
        let da = digits(a);
        for b in 0..q {
            let db = digits(b);
            let sum: Vec<usize> = da.iter().zip(&db).map(|(&x, &y)| (x + y) % p).collect();
            add[a * q + b] = pack(&sum) as u16;
            let mut conv = vec![0usize; 2 * d - 1];
            for (i, &x) in da.iter().enumerate() {
                for (j, &y) in db.iter().enumerate() {
                    conv[i + j] = (conv[i + j] + x * y) % p;
                }
            }
            for i in (d..2 * d - 1).rev() {
                let c = conv[i];
                if c != 0 {
                    conv[i] = 0;
                    for (j, &l) in low.iter().enumerate() {
                        conv[i - d + j] = (conv[i - d + j] + c * (p - l) % p) % p;
                    }
                }
            }
            mul[a * q + b] = pack(&conv[..d]) as u16;
        }
    }
    Ok(FieldTables { q, add, mul })
}

impl FieldTables {
    fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.q + b] as usize
    }
    fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.q + b] as usize
    }
}

/// The classical mutually orthogonal squares `L_a(i, j) = a·i + j` over
/// the field with `q` elements, for `a = 1..=count`.
pub fn mols_prime_power(q: usize, count: usize) -> Result<Vec<LatinSquare>, LatinError> {
    let ft = field_tables(q)?;
    if count == 0 || count > q - 1 {
        return Err(LatinError::CountOutOfRange { q, count });
    }
    let mut out = Vec::with_capacity(count);
    for a in 1..=count {
        let mut cells = Vec::with_capacity(q * q);
        for i in 0..q {
            for j in 0..q {
                cells.push(ft.add(ft.mul(a, i), j) as u16);
            }
        }
        let sq = LatinSquare { n: q, cells };
        debug_assert!(sq.validate().is_ok());
        out.push(sq);
    }
    Ok(out)
}

// ---------------------------------------------------------------------
// Three-way triples.
// ---------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TripleError {
    OrderMismatch,
    Invalid(LatinError),
    /// A cell where exactly two of the three entries coincide — the
    /// configuration a three-way triple excludes.
    TwoAgreeOneDiffers { row: usize, col: usize },
}

impl core::fmt::Display for TripleError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            TripleError::OrderMismatch => write!(f, "squares have different orders"),
            TripleError::Invalid(e) => write!(f, "square is not Latin: {e}"),
            TripleError::TwoAgreeOneDiffers { row, col } => {
                write!(f, "exactly two entries agree at cell ({row}, {col})")
            }
        }
    }
}

/// Cells where all three squares agree, provided every other cell has
/// three pairwise distinct entries.
pub fn three_way_cells(
    a: &LatinSquare,
    b: &LatinSquare,
    c: &LatinSquare,
) -> Result<Vec<(u16, u16)>, TripleError> {
    if a.n != b.n || a.n != c.n {
        return Err(TripleError::OrderMismatch);
    }
    for sq in [a, b, c] {
        sq.validate().map_err(TripleError::Invalid)?;
    }
    let n = a.n;
    let mut agree = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let (x, y, z) = (a.get(i, j), b.get(i, j), c.get(i, j));
            if x == y && y == z {
                agree.push((i as u16, j as u16));
            } else if x == y || y == z || x == z {
                return Err(TripleError::TwoAgreeOneDiffers { row: i, col: j });
            }
        }
    }
    Ok(agree)
}

/// Three squares of one order that pairwise agree on the same cell set
/// and are pairwise distinct everywhere else. Construction re-derives
/// and stores the agreement set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatinTriple {
    squares: [LatinSquare; 3],
    agreement: Vec<(u16, u16)>,
}

impl LatinTriple {
    pub fn new(squares: [LatinSquare; 3]) -> Result<LatinTriple, TripleError> {
        let agreement = three_way_cells(&squares[0], &squares[1], &squares[2])?;
        Ok(LatinTriple { squares, agreement })
    }

    pub fn order(&self) -> usize {
        self.squares[0].n
    }

    pub fn squares(&self) -> &[LatinSquare; 3] {
        &self.squares
    }

    pub fn agreement(&self) -> &[(u16, u16)] {
        &self.agreement
    }

    pub fn k(&self) -> u32 {
        self.agreement.len() as u32
    }

    /// Apply the same row, column, and symbol permutations to all three
    /// squares; the agreement pattern moves along, its size unchanged.
    pub fn apply_common(
        &self,
        rows: &Permutation,
        cols: &Permutation,
        symbols: &Permutation,
    ) -> LatinTriple {
        let mapped = self.squares.clone().map(|sq| {
            sq.permute_rows(rows).permute_cols(cols).relabel_symbols(symbols)
        });
        LatinTriple::new(mapped).expect("common relabeling preserves the triple")
    }

    /// True iff all three squares have row `i` identical.
    pub fn has_common_row(&self, i: usize) -> bool {
        let n = self.order();
        (0..n).all(|j| {
            let s = self.squares[0].get(i, j);
            self.squares[1].get(i, j) == s && self.squares[2].get(i, j) == s
        })
    }

    /// True iff all three squares have column `j` identical.
    pub fn has_common_col(&self, j: usize) -> bool {
        let n = self.order();
        (0..n).all(|i| {
            let s = self.squares[0].get(i, j);
            self.squares[1].get(i, j) == s && self.squares[2].get(i, j) == s
        })
    }
}

/// `(S, S, S)`: agreement everywhere.
pub fn identical_triple(base: &LatinSquare) -> Result<LatinTriple, TripleError> {
    LatinTriple::new([base.clone(), base.clone(), base.clone()])
}

/// Cyclic squares shifted by 0, 1, 2: agreement nowhere (needs `n ≥ 3`).
pub fn shift_triple(n: usize) -> Option<LatinTriple> {
    if n < 3 {
        return None;
    }
    let base = LatinSquare::cyclic(n);
    let shifted = |t: u16| LatinSquare {
        n,
        cells: base.cells.iter().map(|&s| (s + t) % n as u16).collect(),
    };
    Some(LatinTriple::new([shifted(0), shifted(1), shifted(2)]).expect("shift triple"))
}

/// Two maps on `0..m` that move every element, disagree everywhere, and
/// can thus accompany the identity in a three-way pattern: rotations of
/// the full cycle by 1 and 2. Exists iff `m = 0` or `m ≥ 3`.
fn rotation_pair(m: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    match m {
        0 => Some((Vec::new(), Vec::new())),
        1 | 2 => None,
        _ => Some((
            (0..m).map(|i| (i + 1) % m).collect(),
            (0..m).map(|i| (i + 2) % m).collect(),
        )),
    }
}

fn rotation_permutations(n: usize, fixed: usize) -> Option<(Permutation, Permutation)> {
    let (r1, r2) = rotation_pair(n - fixed)?;
    let build = |rot: &[usize]| {
        let image: Vec<u16> = (0..n)
            .map(|i| if i < fixed { i as u16 } else { (fixed + rot[i - fixed]) as u16 })
            .collect();
        Permutation::from_image(image).expect("rotation is a bijection")
    };
    Some((build(&r1), build(&r2)))
}

/// `(L, σ₂∘L, σ₃∘L)` where the symbol maps fix the first `fixed` symbols
/// and rotate the rest: agreement on `fixed · n` cells. Requires
/// `fixed ≤ n-3` or `fixed = n`.
pub fn symbol_rotation_triple(base: &LatinSquare, fixed: usize) -> Option<LatinTriple> {
    let n = base.n;
    let (p2, p3) = rotation_permutations(n, fixed)?;
    LatinTriple::new([
        base.clone(),
        base.relabel_symbols(&p2),
        base.relabel_symbols(&p3),
    ])
    .ok()
}

/// Row-permuted copies fixing the first `fixed` rows and rotating the
/// rest. Distinct rows of a Latin square differ in every column, so the
/// agreement set is exactly the `fixed` common rows (`fixed · n` cells).
pub fn row_rotation_triple(base: &LatinSquare, fixed: usize) -> Option<LatinTriple> {
    let n = base.n;
    let (p2, p3) = rotation_permutations(n, fixed)?;
    LatinTriple::new([base.clone(), base.permute_rows(&p2), base.permute_rows(&p3)]).ok()
}

/// Direct product: cell `((i1,i2),(j1,j2))` holds the pair of component
/// symbols. A product cell agrees iff both component cells agree, so the
/// intersection size is the product of the component sizes.
pub fn product_triple(t1: &LatinTriple, t2: &LatinTriple) -> LatinTriple {
    let (m, n) = (t1.order(), t2.order());
    let build = |a: &LatinSquare, b: &LatinSquare| {
        let mn = m * n;
        let mut cells = Vec::with_capacity(mn * mn);
        for i1 in 0..m {
            for i2 in 0..n {
                for j1 in 0..m {
                    for j2 in 0..n {
                        cells.push(
                            a.get(i1, j1) * n as u16 + b.get(i2, j2),
                        );
                    }
                }
            }
        }
        LatinSquare { n: mn, cells }
    };
    let squares = [
        build(&t1.squares[0], &t2.squares[0]),
        build(&t1.squares[1], &t2.squares[1]),
        build(&t1.squares[2], &t2.squares[2]),
    ];
    LatinTriple::new(squares).expect("product of triples is a triple")
}

// ---------------------------------------------------------------------
// Exhaustive enumeration (practical through order 5).
// ---------------------------------------------------------------------

/// All Latin squares of order `n`, by cell-wise backtracking.
pub fn enumerate_latin_squares(n: usize) -> Vec<LatinSquare> {
    let mut out = Vec::new();
    let mut cells = vec![0u16; n * n];
    let mut row_used = vec![0u32; n];
    let mut col_used = vec![0u32; n];
    fn rec(
        pos: usize,
        n: usize,
        cells: &mut Vec<u16>,
        row_used: &mut Vec<u32>,
        col_used: &mut Vec<u32>,
        out: &mut Vec<LatinSquare>,
    ) {
        if pos == n * n {
            out.push(LatinSquare { n, cells: cells.clone() });
            return;
        }
        let (i, j) = (pos / n, pos % n);
        let taken = row_used[i] | col_used[j];
        for s in 0..n {
            if taken & (1 << s) == 0 {
                cells[pos] = s as u16;
                row_used[i] |= 1 << s;
                col_used[j] |= 1 << s;
                rec(pos + 1, n, cells, row_used, col_used, out);
                row_used[i] &= !(1 << s);
                col_used[j] &= !(1 << s);
            }
        }
    }
    rec(0, n, &mut cells, &mut row_used, &mut col_used, &mut out);
    out
}

/// Squares whose first row and first column are `0, 1, …, n-1`.
pub fn reduced_latin_squares(n: usize) -> Vec<LatinSquare> {
    enumerate_latin_squares(n)
        .into_iter()
        .filter(|sq| {
            (0..n).all(|j| sq.get(0, j) == j as u16)
                && (0..n).all(|i| sq.get(i, 0) == i as u16)
        })
        .collect()
}

// ---------------------------------------------------------------------
// Realizers.
// ---------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatinRealizeError {
    /// The target is not an achievable intersection size for this order.
    TargetNotInSpectrum { n: usize, k: u32 },
    /// The search budget ran out without a verified witness.
    Unrealized { n: usize, k: u32 },
    /// No parameter decomposition exists for the requested diagonal
    /// triple intersection size.
    NoDecomposition { order: usize, k: u32 },
    /// Diagonal triples need an odd order.
    EvenOrder { order: usize },
}

impl core::fmt::Display for LatinRealizeError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            LatinRealizeError::TargetNotInSpectrum { n, k } => {
                write!(f, "{k} is not an achievable 3-way intersection size at order {n}")
            }
            LatinRealizeError::Unrealized { n, k } => {
                write!(f, "no triple of order {n} with {k} agreement cells found in budget")
            }
            LatinRealizeError::NoDecomposition { order, k } => write!(
                f,
                "{k} has no valid parameter decomposition for a diagonal triple of order {order}"
            ),
            LatinRealizeError::EvenOrder { order } => {
                write!(f, "diagonal triples need an odd order, got {order}")
            }
        }
    }
}

/// Exhaustively search for a triple with `k` agreement cells at tiny
/// orders. The first square ranges over reduced squares only: any triple
/// can be brought to that form by common row/column/symbol permutations,
/// which preserve the agreement pattern.
fn exhaustive_three_way(n: usize, k: u32) -> Option<LatinTriple> {
    if n > 4 {
        return None;
    }
    let all = enumerate_latin_squares(n);
    let reduced = reduced_latin_squares(n);
    for a in &reduced {
        for b in &all {
            for c in &all {
                if let Ok(cells) = three_way_cells(a, b, c) {
                    if cells.len() as u32 == k {
                        return Some(
                            LatinTriple::new([a.clone(), b.clone(), c.clone()])
                                .expect("checked triple"),
                        );
                    }
                }
            }
        }
    }
    None
}

/// Deterministic constructions only (no randomized search): identical,
/// shifts, rotation families, products of these, and exhaustive search
/// at orders ≤ 4.
pub fn deterministic_three_way(n: usize, k: u32) -> Option<LatinTriple> {
    if n <= 4 {
        return exhaustive_three_way(n, k);
    }
    let sq = (n * n) as u32;
    if k == sq {
        return identical_triple(&LatinSquare::cyclic(n)).ok();
    }
    if k == 0 {
        return shift_triple(n);
    }
    if k % n as u32 == 0 {
        let f = (k / n as u32) as usize;
        if f <= n - 3 {
            return symbol_rotation_triple(&LatinSquare::cyclic(n), f);
        }
    }
    // Products over factorizations n = d · m, k = k1 · k2.
    for d in 2..=n / 2 {
        if n % d != 0 {
            continue;
        }
        let m = n / d;
        let d_sizes = published_jprime3(d);
        let m_sizes = published_jprime3(m);
        for k1 in 1..=((d * d) as u32).min(k) {
            if k % k1 != 0 || k / k1 > (m * m) as u32 {
                continue;
            }
            // Achievable sizes lie inside the published spectrum, so
            // factor sizes outside it need no recursive probe.
            if !d_sizes.contains(&k1) || !m_sizes.contains(&(k / k1)) {
                continue;
            }
            if let (Some(t1), Some(t2)) =
                (deterministic_three_way(d, k1), deterministic_three_way(m, k / k1))
            {
                return Some(product_triple(&t1, &t2));
            }
        }
    }
    None
}

/// Find a triple of order `n` with exactly `k` agreement cells: first by
/// the deterministic families, then (for `n ≥ 5`) by seeded
/// hill-climbing within `budget` candidate moves. Output is always
/// revalidated cell-by-cell before being returned.
pub fn realize_three_way(
    n: usize,
    k: u32,
    seed: u64,
    budget: u64,
) -> Result<LatinTriple, LatinRealizeError> {
    if !published_jprime3(n).contains(&k) {
        return Err(LatinRealizeError::TargetNotInSpectrum { n, k });
    }
    if let Some(t) = deterministic_three_way(n, k) {
        debug_assert_eq!(t.k(), k);
        return Ok(t);
    }
    if n <= 4 {
        // The exhaustive search above is complete at these orders.
        return Err(LatinRealizeError::Unrealized { n, k });
    }
    climb_three_way(n, k, seed, budget).ok_or(LatinRealizeError::Unrealized { n, k })
}

/// Achievable sizes at order `n` without randomized search; used by
/// planners to rank parameter choices.
pub fn deterministic_three_way_sizes(n: usize) -> SpectrumSet {
    published_jprime3(n)
        .into_iter()
        .filter(|&k| deterministic_three_way(n, k).is_some())
        .collect()
}

// --- hill-climbing over the incidence-cube random walk ---------------

/// A Latin square as a 0/1 incidence cube `x[row][col][symbol]`; the
/// random-walk moves below keep every line sum at 1, passing through at
/// most one `-1` cell between proper states.
struct Cube {
    n: usize,
    x: Vec<i8>,
}

impl Cube {
    fn from_square(sq: &LatinSquare) -> Cube {
        let n = sq.n;
        let mut x = vec![0i8; n * n * n];
        for i in 0..n {
            for j in 0..n {
                x[(i * n + j) * n + sq.get(i, j) as usize] = 1;
            }
        }
        Cube { n, x }
    }

    #[inline]
    fn idx(&self, r: usize, c: usize, s: usize) -> usize {
        (r * self.n + c) * self.n + s
    }

    fn symbol_at(&self, r: usize, c: usize) -> u16 {
        (0..self.n)
            .find(|&s| self.x[self.idx(r, c, s)] == 1)
            .expect("proper cube has one symbol per cell") as u16
    }

    /// Entries of value 1 on the line through `(r, c, s)` along one axis
    /// (0: symbols, 1: columns, 2: rows), excluding `s`/`c`/`r` itself.
    fn line_ones(&self, r: usize, c: usize, s: usize, axis: usize) -> [usize; 2] {
        let mut out = [usize::MAX; 2];
        let mut m = 0;
        for t in 0..self.n {
            let (i, skip) = match axis {
                0 => (self.idx(r, c, t), t == s),
                1 => (self.idx(r, t, s), t == c),
                _ => (self.idx(t, c, s), t == r),
            };
            if !skip && self.x[i] == 1 {
                out[m] = t;
                m += 1;
                if m == 2 {
                    break;
                }
            }
        }
        out
    }
}

/// One proper-to-proper random-walk step starting from a random cell
/// and symbol.
fn cube_walk(
    cube: &mut Cube,
    rng: &mut Rng,
    touched: &mut Vec<(u16, u16)>,
    undo: &mut Vec<(usize, i8)>,
) -> bool {
    let n = cube.n;
    let r = rng.below(n);
    let c = rng.below(n);
    let cur = cube.symbol_at(r, c) as usize;
    let mut s = rng.below(n - 1);
    if s >= cur {
        s += 1;
    }
    cube_walk_from(cube, rng, r, c, s, touched, undo)
}

/// One proper-to-proper random-walk step whose first change writes
/// symbol `s` into cell `(r, c)` (`s` must differ from the current
/// entry). Touched `(row, col)` pairs are appended to `touched`; every
/// cube delta is logged in `undo` so the caller can revert. Returns
/// false if the walk failed to terminate within the step cap (caller
/// must revert).
fn cube_walk_from(
    cube: &mut Cube,
    rng: &mut Rng,
    mut r: usize,
    mut c: usize,
    mut s: usize,
    touched: &mut Vec<(u16, u16)>,
    undo: &mut Vec<(usize, i8)>,
) -> bool {
    let n = cube.n;
    let mut improper = false;
    for _ in 0..(4 * n * n) {
        let pick = |opts: [usize; 2], rng: &mut Rng, multi: bool| -> usize {
            if multi && opts[1] != usize::MAX && rng.below(2) == 1 {
                opts[1]
            } else {
                opts[0]
            }
        };
        let s1 = pick(cube.line_ones(r, c, s, 0), rng, improper);
        let c1 = pick(cube.line_ones(r, c, s, 1), rng, improper);
        let r1 = pick(cube.line_ones(r, c, s, 2), rng, improper);
        let deltas = [
            (cube.idx(r, c, s), 1i8),
            (cube.idx(r, c1, s1), 1),
            (cube.idx(r1, c, s1), 1),
            (cube.idx(r1, c1, s), 1),
            (cube.idx(r, c, s1), -1),
            (cube.idx(r, c1, s), -1),
            (cube.idx(r1, c, s), -1),
            (cube.idx(r1, c1, s1), -1),
        ];
        for (i, d) in deltas {
            cube.x[i] += d;
            undo.push((i, d));
        }
        touched.extend([
            (r as u16, c as u16),
            (r as u16, c1 as u16),
            (r1 as u16, c as u16),
            (r1 as u16, c1 as u16),
        ]);
        if cube.x[cube.idx(r1, c1, s1)] < 0 {
            (r, c, s) = (r1, c1, s1);
            improper = true;
        } else {
            return true;
        }
    }
    false
}

fn revert(cube: &mut Cube, undo: &[(usize, i8)]) {
    for &(i, d) in undo.iter().rev() {
        cube.x[i] -= d;
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum CellClass {
    Agree,
    AllDiffer,
    TwoAgree,
}

fn classify(a: u16, b: u16, c: u16) -> CellClass {
    if a == b && b == c {
        CellClass::Agree
    } else if a != b && b != c && a != c {
        CellClass::AllDiffer
    } else {
        CellClass::TwoAgree
    }
}

/// Hill-climb three squares toward exactly `k` agreement cells with no
/// two-agree cells. Objective: `|k - agree| + 10·two_agree`.
///
/// Candidate moves mix plain random walks with targeted walks aimed at a
/// specific cell. Because a single-square change can only turn an
/// all-differ cell into a two-agree cell (a big objective penalty), the
/// seeding and dissolving moves walk *two* squares in one candidate so
/// the barrier is crossed atomically; two-agree cells left behind by
/// side effects are cleaned up by dedicated repair moves.
fn climb_three_way(n: usize, k: u32, seed: u64, budget: u64) -> Option<LatinTriple> {
    if n < 3 {
        return None;
    }
    let mut rng = Rng::derive(seed, "latin-three-way-climb");
    let mut cubes: Vec<Cube> = Vec::new();
    let mut mirrors: Vec<Vec<u16>> = Vec::new();
    let mut agree = 0u32;
    let mut two = 0u32;
    let mut restart_no = 0u64;

    let init = |rng: &mut Rng, cubes: &mut Vec<Cube>, mirrors: &mut Vec<Vec<u16>>, agree: &mut u32, two: &mut u32, restart_no: &mut u64| {
        // Mix a random base square, then branch into one of three start
        // shapes: agreement 0, agreement near the target, agreement n².
        let mut base = Cube::from_square(&LatinSquare::cyclic(n));
        let mut scratch_t = Vec::new();
        let mut scratch_u = Vec::new();
        for _ in 0..(6 * n * n) {
            scratch_t.clear();
            scratch_u.clear();
            if !cube_walk(&mut base, rng, &mut scratch_t, &mut scratch_u) {
                revert(&mut base, &scratch_u);
            }
        }
        let base_sq = LatinSquare {
            n,
            cells: (0..n * n).map(|p| base.symbol_at(p / n, p % n)).collect(),
        };
        let triple = match *restart_no % 3 {
            0 => {
                // Pairwise-everywhere-distinct start: agreement 0.
                let shifted = |t: u16| LatinSquare {
                    n,
                    cells: base_sq.cells.iter().map(|&s| (s + t) % n as u16).collect(),
                };
                [shifted(0), shifted(1), shifted(2)]
            }
            1 => {
                let f = ((k as usize + n / 2) / n).min(n.saturating_sub(3));
                match symbol_rotation_triple(&base_sq, f) {
                    Some(t) => t.squares().clone(),
                    None => [base_sq.clone(), base_sq.clone(), base_sq.clone()],
                }
            }
            _ => [base_sq.clone(), base_sq.clone(), base_sq.clone()],
        };
        *cubes = triple.iter().map(Cube::from_square).collect();
        *mirrors = triple.iter().map(|sq| sq.cells.clone()).collect();
        *agree = 0;
        *two = 0;
        for p in 0..n * n {
            match classify(mirrors[0][p], mirrors[1][p], mirrors[2][p]) {
                CellClass::Agree => *agree += 1,
                CellClass::TwoAgree => *two += 1,
                CellClass::AllDiffer => {}
            }
        }
        *restart_no += 1;
    };
    init(&mut rng, &mut cubes, &mut mirrors, &mut agree, &mut two, &mut restart_no);

    let objective = |agree: u32, two: u32| -> u64 {
        (k.abs_diff(agree) as u64) + 10 * two as u64
    };
    let mut obj = objective(agree, two);
    let stall_limit = 30_000 + 500 * (n * n) as u64;
    let mut stall = 0u64;
    let mut cells: Vec<(u16, u16)> = Vec::new();
    let mut undo_a: Vec<(usize, i8)> = Vec::new();
    let mut undo_b: Vec<(usize, i8)> = Vec::new();

    // Find a cell of the wanted class: a few random probes, then a linear
    // scan from a random offset.
    let find_cell = |mirrors: &[Vec<u16>], rng: &mut Rng, want: CellClass| -> Option<usize> {
        let nn = n * n;
        for _ in 0..8 {
            let p = rng.below(nn);
            if classify(mirrors[0][p], mirrors[1][p], mirrors[2][p]) == want {
                return Some(p);
            }
        }
        let start = rng.below(nn);
        (0..nn)
            .map(|i| (start + i) % nn)
            .find(|&p| classify(mirrors[0][p], mirrors[1][p], mirrors[2][p]) == want)
    };
    // A uniformly random symbol outside {a, b} (requires a != b, n >= 3).
    let pick_other = |rng: &mut Rng, a: usize, b: usize| -> usize {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let mut s = rng.below(n - 2);
        if s >= lo {
            s += 1;
        }
        if s >= hi {
            s += 1;
        }
        s
    };

    for _ in 0..budget {
        if obj == 0 {
            break;
        }
        if stall > stall_limit {
            init(&mut rng, &mut cubes, &mut mirrors, &mut agree, &mut two, &mut restart_no);
            obj = objective(agree, two);
            stall = 0;
        }
        cells.clear();
        undo_a.clear();
        undo_b.clear();
        let mut sq_a = usize::MAX;
        let mut sq_b = usize::MAX;
        let mut plain = rng.below(4) == 0;
        let mut ok = true;
        if !plain {
            if two > 0 {
                match find_cell(&mirrors, &mut rng, CellClass::TwoAgree) {
                    Some(p) => {
                        let (r, c) = (p / n, p % n);
                        let e = [mirrors[0][p], mirrors[1][p], mirrors[2][p]];
                        let o = if e[0] == e[1] { 2 } else if e[0] == e[2] { 1 } else { 0 };
                        let common = e[(o + 1) % 3] as usize;
                        if agree < k {
                            // Complete the cell into full agreement.
                            sq_a = o;
                            ok = cube_walk_from(&mut cubes[o], &mut rng, r, c, common, &mut cells, &mut undo_a);
                        } else {
                            // Dissolve the cell into all-differ.
                            let u = [(o + 1) % 3, (o + 2) % 3][rng.below(2)];
                            let s_new = pick_other(&mut rng, common, e[o] as usize);
                            sq_a = u;
                            ok = cube_walk_from(&mut cubes[u], &mut rng, r, c, s_new, &mut cells, &mut undo_a);
                        }
                    }
                    None => plain = true,
                }
            } else if agree < k {
                // Seed a new agreement cell: walk the two non-master
                // squares onto the master's symbol in one candidate.
                match find_cell(&mirrors, &mut rng, CellClass::AllDiffer) {
                    Some(p) => {
                        let (r, c) = (p / n, p % n);
                        let m = rng.below(3);
                        let (u, v) = ((m + 1) % 3, (m + 2) % 3);
                        let s = mirrors[m][p] as usize;
                        sq_a = u;
                        ok = cube_walk_from(&mut cubes[u], &mut rng, r, c, s, &mut cells, &mut undo_a);
                        if ok {
                            sq_b = v;
                            ok = cube_walk_from(&mut cubes[v], &mut rng, r, c, s, &mut cells, &mut undo_b);
                        }
                    }
                    None => plain = true,
                }
            } else if agree > k {
                // Break an agreement cell into all-differ: move two of the
                // squares to fresh, mutually distinct symbols.
                match find_cell(&mirrors, &mut rng, CellClass::Agree) {
                    Some(p) => {
                        let (r, c) = (p / n, p % n);
                        let s = mirrors[0][p] as usize;
                        let u = rng.below(3);
                        let v = (u + 1 + rng.below(2)) % 3;
                        let mut s1 = rng.below(n - 1);
                        if s1 >= s {
                            s1 += 1;
                        }
                        let s2 = pick_other(&mut rng, s, s1);
                        sq_a = u;
                        ok = cube_walk_from(&mut cubes[u], &mut rng, r, c, s1, &mut cells, &mut undo_a);
                        if ok {
                            sq_b = v;
                            ok = cube_walk_from(&mut cubes[v], &mut rng, r, c, s2, &mut cells, &mut undo_b);
                        }
                    }
                    None => plain = true,
                }
            } else {
                plain = true;
            }
        }
        if plain {
            sq_a = rng.below(3);
            sq_b = usize::MAX;
            ok = cube_walk(&mut cubes[sq_a], &mut rng, &mut cells, &mut undo_a);
        }
        if !ok {
            if sq_b != usize::MAX {
                revert(&mut cubes[sq_b], &undo_b);
            }
            revert(&mut cubes[sq_a], &undo_a);
            stall += 1;
            continue;
        }
        cells.sort_unstable();
        cells.dedup();
        let (mut da, mut dt) = (0i64, 0i64);
        for &(r, c) in &cells {
            let p = r as usize * n + c as usize;
            let before = classify(mirrors[0][p], mirrors[1][p], mirrors[2][p]);
            let now = [0, 1, 2].map(|t: usize| cubes[t].symbol_at(r as usize, c as usize));
            let after = classify(now[0], now[1], now[2]);
            if before == after {
                continue;
            }
            match before {
                CellClass::Agree => da -= 1,
                CellClass::TwoAgree => dt -= 1,
                CellClass::AllDiffer => {}
            }
            match after {
                CellClass::Agree => da += 1,
                CellClass::TwoAgree => dt += 1,
                CellClass::AllDiffer => {}
            }
        }
        let new_agree = (agree as i64 + da) as u32;
        let new_two = (two as i64 + dt) as u32;
        let new_obj = objective(new_agree, new_two);
        let accept = new_obj <= obj || (new_obj - obj <= 12 && rng.below(48) == 0);
        if accept {
            for &(r, c) in &cells {
                let p = r as usize * n + c as usize;
                for (t, m) in mirrors.iter_mut().enumerate() {
                    m[p] = cubes[t].symbol_at(r as usize, c as usize);
                }
            }
            if new_obj < obj {
                stall = 0;
            } else {
                stall += 1;
            }
            agree = new_agree;
            two = new_two;
            obj = new_obj;
        } else {
            if sq_b != usize::MAX {
                revert(&mut cubes[sq_b], &undo_b);
            }
            revert(&mut cubes[sq_a], &undo_a);
            stall += 1;
        }
    }
    if obj != 0 {
        return None;
    }
    let squares = [0, 1, 2].map(|t: usize| LatinSquare { n, cells: mirrors[t].clone() });
    let triple = LatinTriple::new(squares).ok()?;
    (triple.k() == k).then_some(triple)
}

// ---------------------------------------------------------------------
// Diagonal triples.
// ---------------------------------------------------------------------

/// A three-way triple of odd order whose squares share the constant
/// secondary diagonal `(i, m-1-i) = 0`; those `m` cells are agreement
/// cells by construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalLatinTriple {
    triple: LatinTriple,
}

impl DiagonalLatinTriple {
    pub fn new(triple: LatinTriple) -> Result<DiagonalLatinTriple, TripleError> {
        let m = triple.order();
        for sq in triple.squares() {
            match sq.secondary_diagonal_constant() {
                Some(0) => {}
                _ => return Err(TripleError::Invalid(LatinError::DiagonalNotConstant)),
            }
        }
        if m % 2 == 0 {
            return Err(TripleError::Invalid(LatinError::OddOrder { n: m }));
        }
        Ok(DiagonalLatinTriple { triple })
    }

    pub fn order(&self) -> usize {
        self.triple.order()
    }

    pub fn triple(&self) -> &LatinTriple {
        &self.triple
    }

    /// Agreement cells including the shared diagonal.
    pub fn total_agreement(&self) -> u32 {
        self.triple.k()
    }

    /// Agreement cells beyond the forced diagonal.
    pub fn off_diagonal_agreement(&self) -> u32 {
        self.triple.k() - self.order() as u32
    }
}

/// Parameters `(a, e, f)` realizing a diagonal-triple agreement of
/// `a + (n+1)·e + (2n+1)·f` at order `2n+1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DiagonalDecomposition {
    pub a: u32,
    pub e: usize,
    pub f: usize,
}

fn valid_e(n: usize, e: usize) -> bool {
    e == n || (e + 3 <= n)
}

fn valid_f(n: usize, f: usize) -> bool {
    f == n + 1 || (1 <= f && f + 3 <= n + 1)
}

/// Assemble a diagonal triple of order `2n+1` from a three-way triple of
/// order `n` and the two rotation-family parameters.
///
/// The base square has four zones: an upper-left `n × n` block on the
/// high symbols `n+1..=2n` (replaced by the component triple), cyclic
/// strips on the low symbols `0..=n` along the right and bottom edges
/// and the bottom-right block diagonal, and a cyclic-difference pattern
/// on the high symbols in the rest of the bottom-right block. Square `t`
/// relabels the low symbols fixing `0..f` and the bottom-right high
/// symbols fixing `e` of them, by the rotation pair; a common column
/// permutation then moves the `0`-cells onto the secondary diagonal.
pub fn build_diagonal_triple(
    a_triple: &LatinTriple,
    e: usize,
    f: usize,
) -> Result<DiagonalLatinTriple, LatinRealizeError> {
    let n = a_triple.order();
    let m = 2 * n + 1;
    if !valid_e(n, e) || !valid_f(n, f) {
        return Err(LatinRealizeError::NoDecomposition {
            order: m,
            k: a_triple.k() + ((n + 1) * e + m * f) as u32,
        });
    }
    // Rotation pairs acting on the low symbols 0..=n (fixing 0..f) and
    // on the high-symbol offsets 1..=n within the bottom-right block
    // (fixing e of them). The identity serves as the first map.
    let low_id: Vec<u16> = (0..=n as u16).collect();
    let (low2, low3) = {
        let (p2, p3) = rotation_permutations(n + 1, f)
            .ok_or(LatinRealizeError::NoDecomposition { order: m, k: 0 })?;
        ((0..=n as u16).map(|s| p2.apply(s)).collect::<Vec<u16>>(),
         (0..=n as u16).map(|s| p3.apply(s)).collect::<Vec<u16>>())
    };
    let hi_id: Vec<u16> = (0..n as u16).collect();
    let (hi2, hi3) = {
        let (p2, p3) = rotation_permutations(n, e)
            .ok_or(LatinRealizeError::NoDecomposition { order: m, k: 0 })?;
        ((0..n as u16).map(|s| p2.apply(s)).collect::<Vec<u16>>(),
         (0..n as u16).map(|s| p3.apply(s)).collect::<Vec<u16>>())
    };
    let lows = [&low_id, &low2, &low3];
    let his = [&hi_id, &hi2, &hi3];

    let mut squares = Vec::with_capacity(3);
    for t in 0..3 {
        let a = &a_triple.squares()[t];
        let low = lows[t];
        let hi = his[t];
        let mut cells = vec![0u16; m * m];
        for i in 0..m {
            for j in 0..m {
                cells[i * m + j] = if i < n && j < n {
                    a.get(i, j) + (n + 1) as u16
                } else if i < n {
                    low[(i + (j - n)) % (n + 1)]
                } else if j < n {
                    low[((i - n) + j) % (n + 1)]
                } else {
                    let (ti, u) = (i - n, j - n);
                    if ti == u {
                        low[(ti + n) % (n + 1)]
                    } else {
                        // High symbol n+1+d with offset d-1 permuted.
                        let d = (u + (n + 1) - ti) % (n + 1);
                        n as u16 + 1 + hi[d - 1]
                    }
                };
            }
        }
        squares.push(LatinSquare { n: m, cells });
    }
    // Common column permutation: the 0-cells form a transversal (one per
    // row and column, unchanged by the relabelings); send the 0-cell of
    // row i to column m-1-i.
    let mut image = vec![0u16; m];
    for i in 0..m {
        let z = (0..m)
            .find(|&j| squares[0].get(i, j) == 0)
            .expect("each row holds symbol 0 once");
        image[m - 1 - i] = z as u16;
    }
    let psi = Permutation::from_image(image).expect("transversal gives a bijection");
    let squares: Vec<LatinSquare> =
        squares.into_iter().map(|sq| sq.permute_cols(&psi)).collect();
    let triple = LatinTriple::new([
        squares[0].clone(),
        squares[1].clone(),
        squares[2].clone(),
    ])
    .expect("assembled diagonal triple is three-way");
    let out = DiagonalLatinTriple::new(triple).expect("secondary diagonal is constant 0");
    debug_assert_eq!(
        out.total_agreement(),
        a_triple.k() + ((n + 1) * e + m * f) as u32
    );
    Ok(out)
}

/// Find a diagonal triple of odd order `m = 2n+1` whose total agreement
/// (diagonal included) is exactly `k`: enumerate decompositions
/// `k = a + (n+1)·e + (2n+1)·f`, preferring ones whose order-`n`
/// component needs no randomized search.
pub fn realize_diagonal_triple(
    order: usize,
    k: u32,
    seed: u64,
    budget: u64,
) -> Result<(DiagonalLatinTriple, DiagonalDecomposition), LatinRealizeError> {
    if order % 2 == 0 || order < 3 {
        return Err(LatinRealizeError::EvenOrder { order });
    }
    let n = (order - 1) / 2;
    let spectrum = published_jprime3(n);
    let mut candidates: Vec<DiagonalDecomposition> = Vec::new();
    let fs: Vec<usize> = (1..=n + 1).filter(|&f| valid_f(n, f)).collect();
    let es: Vec<usize> = (0..=n).filter(|&e| valid_e(n, e)).collect();
    for &f in &fs {
        for &e in &es {
            let fixed = ((n + 1) * e + order * f) as u32;
            if fixed > k {
                continue;
            }
            let a = k - fixed;
            if spectrum.contains(&a) {
                candidates.push(DiagonalDecomposition { a, e, f });
            }
        }
    }
    if candidates.is_empty() {
        return Err(LatinRealizeError::NoDecomposition { order, k });
    }
    candidates.sort_by_key(|d| (d.a, d.e, d.f));
    for pass in 0..2 {
        for &d in &candidates {
            let component = if pass == 0 {
                deterministic_three_way(n, d.a)
            } else {
                realize_three_way(n, d.a, seed, budget).ok()
            };
            if let Some(at) = component {
                let triple = build_diagonal_triple(&at, d.e, d.f)?;
                debug_assert_eq!(triple.total_agreement(), k);
                return Ok((triple, d));
            }
        }
    }
    Err(LatinRealizeError::Unrealized { n: order, k })
}

// ---------------------------------------------------------------------
// Symmetric block squares of orders 8 and 16.
// ---------------------------------------------------------------------

/// The XOR square of order 4: symmetric, constant 0 diagonal, and
/// constant on the diagonals of its 2×2 blocks.
fn xor_square4() -> LatinSquare {
    LatinSquare {
        n: 4,
        cells: vec![0, 1, 2, 3, 1, 0, 3, 2, 2, 3, 0, 1, 3, 2, 1, 0],
    }
}

pub(crate) fn assemble8_one(a: &LatinSquare) -> LatinSquare {
    let p = xor_square4();
    let mut cells = vec![0u16; 64];
    for i in 0..8 {
        for j in 0..8 {
            cells[i * 8 + j] = match (i < 4, j < 4) {
                (true, true) => p.get(i, j),
                (true, false) => a.get(i, j - 4) + 4,
                (false, true) => a.get(j, i - 4) + 4,
                (false, false) => p.get(i - 4, j - 4),
            };
        }
    }
    LatinSquare { n: 8, cells }
}

/// Agreement cells strictly above the 2×2 diagonal blocks: cells
/// `(i, j)` with `⌊j/2⌋ > ⌊i/2⌋`.
pub fn count_agreement_above_diagonal_blocks(t: &LatinTriple) -> u32 {
    let n = t.order();
    let mut count = 0;
    for i in 0..n {
        for j in 0..n {
            if j / 2 > i / 2 {
                let s = t.squares()[0].get(i, j);
                if t.squares()[1].get(i, j) == s && t.squares()[2].get(i, j) == s {
                    count += 1;
                }
            }
        }
    }
    count
}

/// Build three symmetric order-8 squares with constant 0 diagonal from a
/// three-way triple of order 4 (placed, shifted to symbols 4..=7, in the
/// upper-right block and transposed below). Returns the triple and the
/// number of agreement cells above the 2×2 diagonal blocks, which is the
/// component agreement plus the 8 fixed cells holding symbols 2 and 3.
pub fn assemble_special8(a_triple: &LatinTriple) -> Result<(LatinTriple, u32), TripleError> {
    if a_triple.order() != 4 {
        return Err(TripleError::OrderMismatch);
    }
    let squares = [0, 1, 2].map(|t: usize| assemble8_one(&a_triple.squares()[t]));
    for sq in &squares {
        debug_assert!(sq.validate().is_ok() && sq.is_symmetric());
    }
    let triple = LatinTriple::new(squares)?;
    let k = count_agreement_above_diagonal_blocks(&triple);
    Ok((triple, k))
}

pub(crate) fn assemble16_one(a: &LatinSquare, c: &LatinSquare, b: &LatinSquare) -> LatinSquare {
    let top = assemble8_one(a);
    let bottom = assemble8_one(c);
    let mut cells = vec![0u16; 256];
    for i in 0..16 {
        for j in 0..16 {
            cells[i * 16 + j] = match (i < 8, j < 8) {
                (true, true) => top.get(i, j),
                (true, false) => b.get(i, j - 8) + 8,
                (false, true) => b.get(j, i - 8) + 8,
                (false, false) => bottom.get(i - 8, j - 8),
            };
        }
    }
    LatinSquare { n: 16, cells }
}

/// Build three symmetric order-16 squares with constant 0 diagonal from
/// two order-4 triples (`a` upper-left, `c` lower-right, each inside the
/// order-8 pattern) and an order-8 triple (`b`, shifted to symbols
/// 8..=15, in the upper-right block). Returns the triple and the
/// agreement count above the 2×2 diagonal blocks, which equals
/// `a + b + c + 16`.
pub fn assemble_special16(
    a_triple: &LatinTriple,
    c_triple: &LatinTriple,
    b_triple: &LatinTriple,
) -> Result<(LatinTriple, u32), TripleError> {
    if a_triple.order() != 4 || c_triple.order() != 4 || b_triple.order() != 8 {
        return Err(TripleError::OrderMismatch);
    }
    let squares = [0, 1, 2].map(|t: usize| {
        assemble16_one(
            &a_triple.squares()[t],
            &c_triple.squares()[t],
            &b_triple.squares()[t],
        )
    });
    for sq in &squares {
        debug_assert!(sq.validate().is_ok() && sq.is_symmetric());
    }
    let triple = LatinTriple::new(squares)?;
    let m = count_agreement_above_diagonal_blocks(&triple);
    Ok((triple, m))
}

/// Read a one-factorization of the complete graph off a symmetric Latin
/// square of even order with constant 0 diagonal: the cells of each
/// symbol `s ≥ 1` form a perfect matching.
pub fn one_factorization_from_symmetric(
    sq: &LatinSquare,
) -> Result<OneFactorization, LatinError> {
    let n = sq.n;
    sq.validate()?;
    if n % 2 != 0 {
        return Err(LatinError::OddOrder { n });
    }
    if !sq.is_symmetric() {
        return Err(LatinError::NotSymmetric);
    }
    if (0..n).any(|i| sq.get(i, i) != 0) {
        return Err(LatinError::DiagonalNotConstant);
    }
    let mut factors = vec![Vec::new(); n - 1];
    for i in 0..n {
        for j in (i + 1)..n {
            let s = sq.get(i, j) as usize;
            factors[s - 1].push([i as u16, j as u16]);
        }
    }
    for f in &mut factors {
        f.sort_unstable();
    }
    let of = OneFactorization { order: n, factors };
    debug_assert!(of.validate());
    Ok(of)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::iprime3;

    #[test]
    fn validation_and_cyclic() {
        for n in [1usize, 2, 5, 9] {
            assert!(LatinSquare::cyclic(n).validate().is_ok());
        }
        let bad = LatinSquare::from_rows(vec![vec![0, 1], vec![0, 1]]).unwrap();
        assert!(matches!(bad.validate(), Err(LatinError::DuplicateInColumn { .. })));
        assert!(matches!(
            LatinSquare::from_rows(vec![vec![0, 2], vec![1, 0]]),
            Err(LatinError::SymbolOutOfRange { .. })
        ));
    }

    #[test]
    fn orthogonality_and_mols() {
        let l1 = LatinSquare::cyclic(3);
        let l2 = LatinSquare::from_rows(vec![vec![0, 1, 2], vec![2, 0, 1], vec![1, 2, 0]])
            .unwrap();
        assert!(are_orthogonal(&l1, &l2).unwrap());
        assert!(!are_orthogonal(&l1, &l1).unwrap());
        for q in [4usize, 5, 7, 8, 9, 11, 13, 16, 25, 27, 32] {
            let ms = mols_prime_power(q, (q - 1).min(4)).unwrap();
            for s in &ms {
                assert!(s.validate().is_ok(), "q = {q}");
            }
            for i in 0..ms.len() {
                for j in (i + 1)..ms.len() {
                    assert!(are_orthogonal(&ms[i], &ms[j]).unwrap(), "q = {q}");
                }
            }
        }
        assert!(matches!(
            mols_prime_power(6, 2),
            Err(LatinError::NotPrimePower { q: 6 })
        ));
        assert!(matches!(
            mols_prime_power(5, 5),
            Err(LatinError::CountOutOfRange { .. })
        ));
    }

    #[test]
    fn three_way_basics() {
        let l = LatinSquare::cyclic(3);
        let t = identical_triple(&l).unwrap();
        assert_eq!(t.k(), 9);
        let s = shift_triple(3).unwrap();
        assert_eq!(s.k(), 0);
        // Two squares equal, third different: rejected.
        let other = LatinSquare::from_rows(vec![vec![1, 2, 0], vec![2, 0, 1], vec![0, 1, 2]])
            .unwrap();
        assert!(matches!(
            three_way_cells(&l, &l, &other),
            Err(TripleError::TwoAgreeOneDiffers { .. })
        ));
    }

    #[test]
    fn rotation_families() {
        for n in [5usize, 6, 8] {
            let base = LatinSquare::cyclic(n);
            for f in (0..=n - 3).chain([n]) {
                let t = symbol_rotation_triple(&base, f).unwrap();
                assert_eq!(t.k(), (f * n) as u32, "symbol n={n} f={f}");
                let t = row_rotation_triple(&base, f).unwrap();
                assert_eq!(t.k(), (f * n) as u32, "row n={n} f={f}");
                for i in 0..f {
                    assert!(t.has_common_row(i));
                }
            }
            assert!(symbol_rotation_triple(&base, n - 1).is_none());
        }
    }

    #[test]
    fn products_multiply_agreement() {
        let t9 = identical_triple(&LatinSquare::cyclic(3)).unwrap();
        let t0 = shift_triple(3).unwrap();
        assert_eq!(product_triple(&t9, &t9).k(), 81);
        assert_eq!(product_triple(&t0, &t9).k(), 0);
        assert_eq!(product_triple(&t9, &t0).k(), 0);
        let t4 = exhaustive_three_way(4, 4).unwrap();
        let p = product_triple(&t4, &t0);
        assert_eq!(p.order(), 12);
        assert_eq!(p.k(), 0);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_latin_squares(1).len(), 1);
        assert_eq!(enumerate_latin_squares(2).len(), 2);
        assert_eq!(enumerate_latin_squares(3).len(), 12);
        assert_eq!(enumerate_latin_squares(4).len(), 576);
        assert_eq!(reduced_latin_squares(3).len(), 1);
        assert_eq!(reduced_latin_squares(4).len(), 4);
    }

    #[test]
    fn realize_small_orders() {
        for (n, k) in [(3, 0), (3, 9), (4, 0), (4, 1), (4, 4), (4, 16)] {
            let t = realize_three_way(n, k, 0, 1000).unwrap();
            assert_eq!(t.k(), k, "n={n} k={k}");
        }
        assert!(matches!(
            realize_three_way(4, 7, 0, 1000),
            Err(LatinRealizeError::TargetNotInSpectrum { n: 4, k: 7 })
        ));
        assert!(matches!(
            realize_three_way(2, 0, 0, 1000),
            Err(LatinRealizeError::TargetNotInSpectrum { .. })
        ));
    }

    #[test]
    fn realize_deterministic_families() {
        for (n, k) in [(5, 0), (5, 10), (5, 25), (6, 12), (6, 36), (9, 81), (8, 64)] {
            let t = realize_three_way(n, k as u32, 0, 0).unwrap();
            assert_eq!(t.k(), k as u32, "n={n} k={k}");
        }
    }

    #[test]
    fn realize_by_climbing() {
        // Not covered by any deterministic family at order 5.
        let t = realize_three_way(5, 1, 7, 3_000_000).unwrap();
        assert_eq!(t.k(), 1);
        let t = realize_three_way(5, 6, 11, 3_000_000).unwrap();
        assert_eq!(t.k(), 6);
    }

    #[test]
    fn diagonal_triples() {
        // Identity-style maximal decomposition.
        let (t, d) = realize_diagonal_triple(7, 49, 0, 1000).unwrap();
        assert_eq!(t.total_agreement(), 49);
        assert_eq!((d.e, d.f), (3, 4));
        // Diagonal-only agreement.
        let (t, d) = realize_diagonal_triple(7, 7, 0, 1000).unwrap();
        assert_eq!(t.total_agreement(), 7);
        assert_eq!(t.off_diagonal_agreement(), 0);
        assert_eq!((d.a, d.e, d.f), (0, 0, 1));
        // The decomposition used for the order-7 value 40 = 0 + 4·3 + 7·4.
        let (t, _) = realize_diagonal_triple(7, 40, 0, 1000).unwrap();
        assert_eq!(t.total_agreement(), 40);
        // Order 9: 18 = 4 + 5·1 + 9·1.
        let (t, _) = realize_diagonal_triple(9, 18, 0, 1000).unwrap();
        assert_eq!(t.total_agreement(), 18);
        // A size with no decomposition at order 7.
        assert!(matches!(
            realize_diagonal_triple(7, 8, 0, 1000),
            Err(LatinRealizeError::NoDecomposition { .. })
        ));
        assert!(matches!(
            realize_diagonal_triple(8, 8, 0, 1000),
            Err(LatinRealizeError::EvenOrder { .. })
        ));
        // Order 3 admits only the identical triple.
        let (t, _) = realize_diagonal_triple(3, 9, 0, 1000).unwrap();
        assert_eq!(t.total_agreement(), 9);
    }

    #[test]
    fn special_squares() {
        for (a, expect) in [(0u32, 8u32), (1, 9), (4, 12)] {
            let at = exhaustive_three_way(4, a).unwrap();
            let (triple, k) = assemble_special8(&at).unwrap();
            assert_eq!(k, expect);
            for sq in triple.squares() {
                assert!(sq.validate().is_ok());
                assert!(sq.is_symmetric());
                assert!((0..8).all(|i| sq.get(i, i) == 0));
                let of = one_factorization_from_symmetric(sq).unwrap();
                assert!(of.validate());
            }
        }
        let a0 = exhaustive_three_way(4, 0).unwrap();
        let b0 = shift_triple(8).unwrap();
        let (_, m) = assemble_special16(&a0, &a0, &b0).unwrap();
        assert_eq!(m, 16);
        let a16 = exhaustive_three_way(4, 16).unwrap();
        let b64 = identical_triple(&LatinSquare::cyclic(8)).unwrap();
        let (triple, m) = assemble_special16(&a16, &a16, &b64).unwrap();
        assert_eq!(m, 112);
        let of = one_factorization_from_symmetric(&triple.squares()[0]).unwrap();
        assert_eq!(of.order, 16);
    }

    #[test]
    fn iprime_and_published_are_consistent() {
        for n in 0..=9 {
            assert!(published_jprime3(n).is_subset(&iprime3(n)), "n = {n}");
        }
    }
}
