//! Exact integer matrix algebra: Smith normal form with unimodular
//! transforms, elementary divisors, and kernel/cokernel presentations.
//!
//! Everything here is deterministic: the pivot rule is fixed (smallest
//! nonzero absolute value, ties broken by lowest (row, col) index), so a
//! given input always produces the same normal form and transforms.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::fgab::{FgAbGroup, GroupMap};
use crate::{Error, Result};

/// Dense rectangular matrix of arbitrary-precision integers, row-major.
///
/// Empty matrices (zero rows or zero columns) are permitted; as relation
/// matrices they present free groups.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Builds a matrix from rows of integers. Panics on ragged input.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(nrows * ncols);
        for row in rows {
            assert_eq!(row.len(), ncols, "ragged rows");
            entries.extend(row.iter().cloned().map(Into::into));
        }
        IntMatrix {
            rows: nrows,
            cols: ncols,
            entries,
        }
    }

    pub fn from_fn<F: FnMut(usize, usize) -> BigInt>(rows: usize, cols: usize, mut f: F) -> Self {
        let mut m = IntMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        self.entries[i * self.cols + j] = value;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// The diagonal, of length min(rows, cols).
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i).clone())
            .collect()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Matrix product. Panics on incompatible dimensions.
    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "incompatible dimensions for product");
        IntMatrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = BigInt::zero();
            for k in 0..self.cols {
                acc += self.get(i, k) * rhs.get(k, j);
            }
            acc
        })
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, x.len(), "incompatible dimensions for product");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &x[j]).sum())
            .collect()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    /// Panics unless the matrix is square. The 0×0 determinant is 1.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&r| !a.get(r, k).is_zero()) {
                    Some(r) => {
                        a.swap_rows(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j);
                    a.set(i, j, num / &prev);
                }
            }
            prev = a.get(k, k).clone();
        }
        sign * a.get(n - 1, n - 1).clone()
    }

    pub(crate) fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    pub(crate) fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.entries.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    pub(crate) fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            let idx = i * self.cols + c;
            let v = std::mem::take(&mut self.entries[idx]);
            self.entries[idx] = -v;
        }
    }

    pub(crate) fn negate_col(&mut self, j: usize) {
        for r in 0..self.rows {
            let idx = r * self.cols + j;
            let v = std::mem::take(&mut self.entries[idx]);
            self.entries[idx] = -v;
        }
    }

    /// row(dst) += c * row(src)
    pub(crate) fn add_row_multiple(&mut self, dst: usize, src: usize, c: &BigInt) {
        assert_ne!(dst, src);
        for col in 0..self.cols {
            let t = self.get(src, col) * c;
            let idx = dst * self.cols + col;
            self.entries[idx] += t;
        }
    }

    /// col(dst) += c * col(src)
    pub(crate) fn add_col_multiple(&mut self, dst: usize, src: usize, c: &BigInt) {
        assert_ne!(dst, src);
        for row in 0..self.rows {
            let t = self.get(row, src) * c;
            let idx = row * self.cols + dst;
            self.entries[idx] += t;
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix({}x{}) {}", self.rows, self.cols, self)
    }
}

/// Smith normal form u·m·v = s with u, v unimodular and s diagonal with
/// nonnegative entries in a divisibility chain (zeros last).
#[derive(Debug, Clone)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

pub(crate) struct SnfInverses {
    pub u_inv: IntMatrix,
}

/// Elimination state; every operation keeps u·m·v = s and the inverse
/// transforms in sync.
struct Workspace {
    s: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
}

impl Workspace {
    fn new(m: &IntMatrix) -> Self {
        Workspace {
            s: m.clone(),
            u: IntMatrix::identity(m.rows()),
            u_inv: IntMatrix::identity(m.rows()),
            v: IntMatrix::identity(m.cols()),
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.s.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.s.swap_cols(i, j);
        self.v.swap_cols(i, j);
    }

    fn negate_row(&mut self, i: usize) {
        self.s.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    /// row(i) += c * row(k)
    fn add_row(&mut self, i: usize, k: usize, c: &BigInt) {
        self.s.add_row_multiple(i, k, c);
        self.u.add_row_multiple(i, k, c);
        // (I + c e_ik)^-1 = I - c e_ik, applied on the right of u_inv
        self.u_inv.add_col_multiple(k, i, &-c);
    }

    /// col(j) += c * col(k)
    fn add_col(&mut self, j: usize, k: usize, c: &BigInt) {
        self.s.add_col_multiple(j, k, c);
        self.v.add_col_multiple(j, k, c);
    }
}

/// Smallest nonzero absolute value in the trailing submatrix starting at
/// (k, k); ties broken by lowest (row, col) in row-major scan order.
fn pivot_at(s: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in k..s.rows() {
        for j in k..s.cols() {
            let e = s.get(i, j);
            if e.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if s.get(bi, bj).abs() <= e.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

/// First entry of the trailing submatrix (k+1.., k+1..) not divisible by
/// the pivot s[k][k].
fn first_nondivisible(s: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let d = s.get(k, k);
    for i in k + 1..s.rows() {
        for j in k + 1..s.cols() {
            if !s.get(i, j).mod_floor(d).is_zero() {
                return Some((i, j));
            }
        }
    }
    None
}

pub(crate) fn snf_with_inverses(m: &IntMatrix) -> (SnfResult, SnfInverses) {
    let rows = m.rows();
    let cols = m.cols();
    let mut ws = Workspace::new(m);
    'outer: for k in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = pivot_at(&ws.s, k) else {
                break 'outer;
            };
            ws.swap_rows(k, pi);
            ws.swap_cols(k, pj);
            if ws.s.get(k, k).is_negative() {
                ws.negate_row(k);
            }
            let pivot = ws.s.get(k, k).clone();
            let mut dirty = false;
            for i in k + 1..rows {
                let e = ws.s.get(i, k).clone();
                if e.is_zero() {
                    continue;
                }
                let q = &e / &pivot;
                if !q.is_zero() {
                    ws.add_row(i, k, &-q);
                }
                if !ws.s.get(i, k).is_zero() {
                    dirty = true;
                }
            }
            for j in k + 1..cols {
                let e = ws.s.get(k, j).clone();
                if e.is_zero() {
                    continue;
                }
                let q = &e / &pivot;
                if !q.is_zero() {
                    ws.add_col(j, k, &-q);
                }
                if !ws.s.get(k, j).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            if let Some((i, _)) = first_nondivisible(&ws.s, k) {
                // Pull the offending row up so the next pass shrinks the pivot.
                ws.add_row(k, i, &BigInt::one());
                continue;
            }
            break;
        }
    }
    (
        SnfResult {
            u: ws.u,
            s: ws.s,
            v: ws.v,
        },
        SnfInverses { u_inv: ws.u_inv },
    )
}

/// Smith normal form. Total and deterministic.
pub fn snf(m: &IntMatrix) -> SnfResult {
    snf_with_inverses(m).0
}

/// The full diagonal of the Smith normal form, including unit entries and
/// trailing zeros; length min(rows, cols).
pub fn elementary_divisors(m: &IntMatrix) -> Vec<BigInt> {
    snf(m).s.diagonal()
}

/// The 2×2 relation matrix [[-n, (n²-n)/2], [-n, (n²+n)/2]] whose cokernel
/// carries the diagonal building-block K-groups. Rejects n < 1.
pub fn flip_matrix<T: Into<BigInt>>(n: T) -> Result<IntMatrix> {
    let n: BigInt = n.into();
    if n < BigInt::one() {
        return Err(Error::InvalidBlockParameter(n));
    }
    let n2 = &n * &n;
    let lower = (&n2 - &n) / 2;
    let upper = (&n2 + &n) / 2;
    Ok(IntMatrix::from_rows(&[
        vec![-n.clone(), lower],
        vec![-n, upper],
    ]))
}

/// Presentation of ℤ^rows / im(m) in canonical form, together with the
/// unimodular base change needed to transport endomorphisms of the
/// generators onto the canonical generators.
#[derive(Debug, Clone)]
pub struct Cokernel {
    group: FgAbGroup,
    relations: IntMatrix,
    snf: SnfResult,
    u_inv: IntMatrix,
    /// SNF-coordinate indices of the canonical generators: free positions
    /// first, then torsion positions in invariant-factor order.
    positions: Vec<usize>,
}

impl Cokernel {
    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    /// The relation matrix this cokernel was computed from.
    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    /// Coordinates of the class of `x` (given on the original generators)
    /// on the canonical generators, torsion coordinates reduced into [0, t).
    pub fn class_of(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(
            x.len(),
            self.snf.u.rows(),
            "vector length must match generators"
        );
        let y = self.snf.u.mul_vec(x);
        let orders = self.group.orders();
        self.positions
            .iter()
            .zip(orders.iter())
            .map(|(&p, t)| {
                if t.is_zero() {
                    y[p].clone()
                } else {
                    y[p].mod_floor(t)
                }
            })
            .collect()
    }

    /// Lifts of the canonical generators, expressed on the original
    /// generators (columns of u⁻¹ at the canonical positions).
    pub fn generator_lifts(&self) -> Vec<Vec<BigInt>> {
        self.positions
            .iter()
            .map(|&p| self.u_inv.column(p))
            .collect()
    }

    /// Transports an endomorphism of the original generator module onto the
    /// canonical generators. Fails unless the endomorphism maps the relation
    /// lattice into itself (otherwise it does not descend to the quotient).
    pub fn transport(&self, action: &IntMatrix) -> Result<GroupMap> {
        let n = self.snf.u.rows();
        if action.rows() != n || action.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: format!("{n}x{n}"),
                found: format!("{}x{}", action.rows(), action.cols()),
            });
        }
        for j in 0..self.relations.cols() {
            let image = action.mul_vec(&self.relations.column(j));
            if solve_against(&self.snf, &image).is_none() {
                return Err(Error::IllDefined(format!(
                    "image of relation {j} leaves the relation lattice"
                )));
            }
        }
        let conj = self.snf.u.mul(action).mul(&self.u_inv);
        let k = self.positions.len();
        let matrix = IntMatrix::from_fn(k, k, |r, c| {
            conj.get(self.positions[r], self.positions[c]).clone()
        });
        GroupMap::new(self.group.clone(), self.group.clone(), matrix)
    }
}

/// Canonical form of ℤ^rows / im(m) with base-change data.
pub fn cokernel(m: &IntMatrix) -> Cokernel {
    let (res, inv) = snf_with_inverses(m);
    let min = m.rows().min(m.cols());
    let mut free = Vec::new();
    let mut torsion_pos = Vec::new();
    let mut torsion = Vec::new();
    for i in 0..m.rows() {
        let d = if i < min {
            res.s.get(i, i).clone()
        } else {
            BigInt::zero()
        };
        if d.is_zero() {
            free.push(i);
        } else if !d.is_one() {
            torsion_pos.push(i);
            torsion.push(d);
        }
    }
    let group = FgAbGroup::from_canonical_parts(free.len(), torsion);
    let mut positions = free;
    positions.extend(torsion_pos);
    Cokernel {
        group,
        relations: m.clone(),
        snf: res,
        u_inv: inv.u_inv,
        positions,
    }
}

/// Kernel of the map ℤ^cols → ℤ^rows presented by m: a free group of rank
/// cols − rank(m).
pub fn kernel(m: &IntMatrix) -> FgAbGroup {
    let rank = elementary_divisors(m)
        .iter()
        .filter(|d| !d.is_zero())
        .count();
    FgAbGroup::free(m.cols() - rank)
}

/// Solves m·z = x over ℤ. Returns None when x is not in the column lattice.
pub fn solve(m: &IntMatrix, x: &[BigInt]) -> Option<Vec<BigInt>> {
    solve_against(&snf(m), x)
}

/// `solve` against a precomputed normal form of the same matrix.
fn solve_against(res: &SnfResult, x: &[BigInt]) -> Option<Vec<BigInt>> {
    let rows = res.u.rows();
    let cols = res.v.rows();
    assert_eq!(x.len(), rows, "vector length must match rows");
    let y = res.u.mul_vec(x);
    let min = rows.min(cols);
    let mut w = vec![BigInt::zero(); cols];
    for i in 0..rows {
        let d = if i < min {
            res.s.get(i, i).clone()
        } else {
            BigInt::zero()
        };
        if d.is_zero() {
            if !y[i].is_zero() {
                return None;
            }
        } else {
            let (q, r) = y[i].div_rem(&d);
            if !r.is_zero() {
                return None;
            }
            w[i] = q;
        }
    }
    Some(res.v.mul_vec(&w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::FgAbGroup;

    fn z(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn divisors_of(rows: &[Vec<i64>]) -> Vec<BigInt> {
        elementary_divisors(&IntMatrix::from_rows(rows))
    }

    fn check_snf_contract(m: &IntMatrix) {
        let res = snf(m);
        assert_eq!(res.u.mul(m).mul(&res.v), res.s, "u*m*v != s for {m:?}");
        assert!(res.u.det().abs().is_one());
        assert!(res.v.det().abs().is_one());
        assert!(res.s.is_diagonal());
        let diag = res.s.diagonal();
        for d in &diag {
            assert!(!d.is_negative());
        }
        for pair in diag.windows(2) {
            if pair[0].is_zero() {
                assert!(pair[1].is_zero(), "zero not last in {diag:?}");
            } else {
                assert!(pair[1].mod_floor(&pair[0]).is_zero(), "chain broken: {diag:?}");
            }
        }
    }

    #[test]
    fn snf_identity() {
        let m = IntMatrix::identity(2);
        let res = snf(&m);
        assert_eq!(res.s, IntMatrix::identity(2));
        check_snf_contract(&m);
    }

    #[test]
    fn snf_flip_examples() {
        // n = 3: diagonal (3, 3); n = 2: diagonal (1, 4)
        let m3 = IntMatrix::from_rows(&[vec![-3, 3], vec![-3, 6]]);
        assert_eq!(snf(&m3).s.diagonal(), vec![z(3), z(3)]);
        check_snf_contract(&m3);
        let m2 = IntMatrix::from_rows(&[vec![-2, 1], vec![-2, 3]]);
        assert_eq!(snf(&m2).s.diagonal(), vec![z(1), z(4)]);
        check_snf_contract(&m2);
    }

    #[test]
    fn snf_inverse_transform_bookkeeping() {
        let m = IntMatrix::from_rows(&[vec![6, 111, -36], vec![5, -672, 210], vec![0, -255, 81]]);
        let (res, inv) = snf_with_inverses(&m);
        assert_eq!(res.u.mul(&inv.u_inv), IntMatrix::identity(3));
        // u m v = s implies m v = u^-1 s
        assert_eq!(m.mul(&res.v), inv.u_inv.mul(&res.s));
    }

    #[test]
    fn snf_empty_and_zero() {
        check_snf_contract(&IntMatrix::zeros(0, 0));
        check_snf_contract(&IntMatrix::zeros(0, 3));
        check_snf_contract(&IntMatrix::zeros(3, 0));
        let zero = IntMatrix::zeros(2, 2);
        assert_eq!(elementary_divisors(&zero), vec![z(0), z(0)]);
        check_snf_contract(&zero);
    }

    #[test]
    fn elementary_divisor_examples() {
        assert_eq!(divisors_of(&[vec![-1, 0], vec![-1, 1]]), vec![z(1), z(1)]);
        assert_eq!(divisors_of(&[vec![-4, 6], vec![-4, 10]]), vec![z(2), z(8)]);
    }

    #[test]
    fn flip_matrix_examples() {
        assert_eq!(
            flip_matrix(1).unwrap(),
            IntMatrix::from_rows(&[vec![-1, 0], vec![-1, 1]])
        );
        assert_eq!(
            flip_matrix(2).unwrap(),
            IntMatrix::from_rows(&[vec![-2, 1], vec![-2, 3]])
        );
        assert_eq!(
            flip_matrix(3).unwrap(),
            IntMatrix::from_rows(&[vec![-3, 3], vec![-3, 6]])
        );
        assert_eq!(
            flip_matrix(0),
            Err(Error::InvalidBlockParameter(BigInt::zero()))
        );
    }

    #[test]
    fn cokernel_examples() {
        let ck3 = cokernel(&flip_matrix(3).unwrap());
        assert_eq!(ck3.group(), &FgAbGroup::canonicalize(0, &[z(3), z(3)]).unwrap());
        let ck2 = cokernel(&flip_matrix(2).unwrap());
        assert_eq!(ck2.group(), &FgAbGroup::cyclic(4));
        let free = cokernel(&IntMatrix::zeros(2, 2));
        assert_eq!(free.group(), &FgAbGroup::free(2));
    }

    #[test]
    fn kernel_examples() {
        for n in 1..6 {
            assert!(kernel(&flip_matrix(n).unwrap()).is_trivial());
        }
        assert_eq!(kernel(&IntMatrix::zeros(2, 2)), FgAbGroup::free(2));
        assert!(kernel(&IntMatrix::identity(3)).is_trivial());
    }

    #[test]
    fn det_matches_divisor_product() {
        let m = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]);
        let product: BigInt = elementary_divisors(&m)
            .into_iter()
            .filter(|d| !d.is_zero())
            .product();
        assert_eq!(product, m.det().abs());
        check_snf_contract(&m);
    }

    #[test]
    fn solve_finds_lattice_members() {
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        let sol = solve(&m, &[z(4), z(-9)]).unwrap();
        assert_eq!(m.mul_vec(&sol), vec![z(4), z(-9)]);
        assert!(solve(&m, &[z(1), z(0)]).is_none());
    }

    #[test]
    fn transport_rejects_non_descending_action() {
        // x -> x + y does not preserve the lattice spanned by (2, 0), (0, 3)
        let ck = cokernel(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]));
        let bad = IntMatrix::from_rows(&[vec![1, 1], vec![0, 1]]);
        assert!(ck.transport(&bad).is_err());
        let good = IntMatrix::from_rows(&[vec![-1, 0], vec![0, 1]]);
        assert!(ck.transport(&good).is_ok());
    }

    #[test]
    fn class_of_reduces_modulo_orders() {
        let ck = cokernel(&flip_matrix(3).unwrap());
        // e+ + e- and 3*(e+) should reduce inside Z3 + Z3
        let coords = ck.class_of(&[z(3), z(0)]);
        let zero = vec![z(0); coords.len()];
        assert_eq!(coords, zero);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_matrix() -> impl Strategy<Value = IntMatrix> {
            (0usize..=6, 0usize..=6).prop_flat_map(|(r, c)| {
                proptest::collection::vec(-50i64..=50, r * c).prop_map(move |vals| {
                    let mut m = IntMatrix::zeros(r, c);
                    for (idx, v) in vals.into_iter().enumerate() {
                        m.set(idx / c.max(1), idx % c.max(1), BigInt::from(v));
                    }
                    m
                })
            })
        }

        type ElementaryOps = Vec<(u8, usize, usize, i64)>;

        fn arb_ops() -> impl Strategy<Value = ElementaryOps> {
            proptest::collection::vec((0u8..3, 0usize..6, 0usize..6, -3i64..=3), 0..8)
        }

        /// Unimodular n×n matrix built as a product of elementary operations.
        fn unimodular_from_ops(n: usize, ops: &ElementaryOps) -> IntMatrix {
            let mut m = IntMatrix::identity(n);
            if n == 0 {
                return m;
            }
            for &(kind, i, j, c) in ops {
                let i = i % n;
                let j = j % n;
                match kind {
                    0 => m.swap_rows(i, j),
                    1 => m.negate_row(i),
                    _ if i != j => m.add_row_multiple(i, j, &BigInt::from(c)),
                    _ => {}
                }
            }
            m
        }

        proptest! {
            #[test]
            fn snf_contract_holds(m in arb_matrix()) {
                check_snf_contract(&m);
            }

            #[test]
            fn divisor_product_is_abs_det(m in arb_matrix()) {
                if m.is_square() && m.rows() > 0 {
                    let det = m.det();
                    if !det.is_zero() {
                        let product: BigInt = elementary_divisors(&m)
                            .into_iter()
                            .filter(|d| !d.is_zero())
                            .product();
                        prop_assert_eq!(product, det.abs());
                    }
                }
            }

            #[test]
            fn cokernel_is_basis_independent(
                m in arb_matrix(), ops_p in arb_ops(), ops_q in arb_ops(),
            ) {
                let p = unimodular_from_ops(m.cols(), &ops_p);
                let q = unimodular_from_ops(m.rows(), &ops_q);
                prop_assert!(p.det().abs().is_one());
                prop_assert!(q.det().abs().is_one());
                let mp = m.mul(&p);
                let qm = q.mul(&m);
                let base = cokernel(&m).group().clone();
                let col_changed = cokernel(&mp).group().clone();
                let row_changed = cokernel(&qm).group().clone();
                prop_assert_eq!(col_changed, base.clone());
                prop_assert_eq!(row_changed, base);
            }
            #[test]
            fn lemma_ed_closed_form(n in 1u64..=1000) {
                let ed = elementary_divisors(&flip_matrix(n).unwrap());
                let n = BigInt::from(n);
                let expected = if n.is_odd() {
                    vec![n.clone(), n]
                } else {
                    vec![&n / 2, &n * 2]
                };
                prop_assert_eq!(ed, expected);
            }
        }
    }
}
