//! Small exact linear algebra: characteristic polynomials of integer
//! matrices, integer root extraction, rational kernels and solves, and a
//! mod-p rank screen. Everything here works on matrices of at most a few
//! hundred rows; growth is handled by `BigInt`/`BigRational`.

use crate::error::{Error, Result};
use crate::{Int, Rat};
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<Int>>;
pub type RatMatrix = Vec<Vec<Rat>>;

pub fn int_matrix_from_u64(rows: &[Vec<u64>]) -> IntMatrix {
    rows.iter()
        .map(|r| r.iter().map(|&x| Int::from(x)).collect())
        .collect()
}

/// Characteristic polynomial of a square integer matrix by the
/// Faddeev–LeVerrier recurrence; all divisions are exact over the integers.
/// Returns monic coefficients `c[0] + c[1] x + ... + c[n] x^n` with `c[n] = 1`.
pub fn charpoly_int(a: &IntMatrix) -> Vec<Int> {
    let n = a.len();
    if n == 0 {
        return vec![Int::one()];
    }
    let mut coeffs = vec![Int::zero(); n + 1];
    coeffs[n] = Int::one();
    // m = A, c_{n-1} = -tr(m); m <- A (m + c I), c_{n-i} = -tr(m)/i
    let mut m = a.clone();
    for i in 1..=n {
        let tr: Int = (0..n).map(|d| m[d][d].clone()).sum();
        let (q, r) = num_integer::Integer::div_rem(&tr, &Int::from(i));
        debug_assert!(r.is_zero(), "Faddeev-LeVerrier trace division must be exact");
        let c = -q;
        coeffs[n - i] = c.clone();
        if i == n {
            break;
        }
        for d in 0..n {
            m[d][d] += &c;
        }
        m = mat_mul_int(a, &m);
    }
    coeffs
}

pub fn mat_mul_int(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = a.len();
    let p = b[0].len();
    let mut out = vec![vec![Int::zero(); p]; n];
    for i in 0..n {
        for (l, ail) in a[i].iter().enumerate() {
            if ail.is_zero() {
                continue;
            }
            for j in 0..p {
                out[i][j] += ail * &b[l][j];
            }
        }
    }
    out
}

/// Horner evaluation.
pub fn poly_eval(coeffs: &[Int], x: &Int) -> Int {
    let mut acc = Int::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Divides a monic-led polynomial by `(x - r)` in place; the root must be
/// exact (checked by caller).
fn deflate(coeffs: &mut Vec<Int>, r: &Int) {
    let n = coeffs.len() - 1;
    let mut out = vec![Int::zero(); n];
    let mut carry = coeffs[n].clone();
    for i in (0..n).rev() {
        out[i] = carry.clone();
        carry = &coeffs[i] + r * carry;
    }
    debug_assert!(carry.is_zero());
    *coeffs = out;
}

/// Gershgorin-style spectral bound: max over rows of the absolute entry sum.
pub fn row_abs_bound(a: &IntMatrix) -> Int {
    a.iter()
        .map(|row| row.iter().map(|e| e.abs()).sum::<Int>())
        .max()
        .unwrap_or_else(Int::zero)
}

/// All integer roots (with multiplicity) of a monic integer polynomial, by
/// divisor search over `-bound..=bound`: candidates must divide the constant
/// term and are verified by exact evaluation. Returns the roots and the
/// non-constant factor left over (empty when the polynomial splits).
pub fn integer_roots(coeffs: &[Int], bound: &Int) -> (Vec<(Int, usize)>, Vec<Int>) {
    use num_traits::ToPrimitive;
    let mut poly = coeffs.to_vec();
    let mut roots: Vec<(Int, usize)> = Vec::new();
    // strip x factors: multiplicity of the root 0
    let mut zero_mult = 0usize;
    while poly.len() > 1 && poly[0].is_zero() {
        poly.remove(0);
        zero_mult += 1;
    }
    if zero_mult > 0 {
        roots.push((Int::zero(), zero_mult));
    }
    let bound_i = bound.abs().to_i64().unwrap_or(i64::MAX / 2).min(1 << 27);
    let mut r = -bound_i;
    while r <= bound_i && poly.len() > 1 {
        if r == 0 {
            r += 1;
            continue;
        }
        let cand = Int::from(r);
        // constant-term divisibility prefilter
        if (&poly[0] % &cand).is_zero() && poly_eval(&poly, &cand).is_zero() {
            let mut mult = 0usize;
            while poly.len() > 1 && poly_eval(&poly, &cand).is_zero() {
                deflate(&mut poly, &cand);
                mult += 1;
            }
            roots.push((cand, mult));
        }
        r += 1;
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    let leftover = if poly.len() > 1 { poly } else { Vec::new() };
    (roots, leftover)
}

/// Numeric roots of an integer polynomial via the companion matrix, used only
/// to bracket factors that have no integer roots.
pub fn numeric_roots(coeffs: &[Int]) -> Vec<(f64, f64)> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return vec![];
    }
    let to_f = |x: &Int| -> f64 { x.to_string().parse::<f64>().unwrap_or(f64::NAN) };
    let lead = to_f(&coeffs[n]);
    let mut comp = nalgebra::DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        comp[(i, n - 1)] = -to_f(&coeffs[i]) / lead;
    }
    comp.complex_eigenvalues()
        .iter()
        .map(|c| (c.re, c.im))
        .collect()
}

/// Reduced row echelon form over the rationals, in place. Returns the pivot
/// column of each pivot row.
pub fn rref(m: &mut RatMatrix) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].clone();
        for c in col..cols {
            let v = m[row][c].clone() / inv.clone();
            m[row][c] = v;
        }
        for r in 0..rows {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..cols {
                    let v = m[r][c].clone() - f.clone() * m[row][c].clone();
                    m[r][c] = v;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == rows {
            break;
        }
    }
    pivots
}

/// Kernel basis of a rational matrix, as primitive integer vectors.
pub fn kernel_basis(a: &RatMatrix) -> Vec<Vec<Int>> {
    let cols = if a.is_empty() { 0 } else { a[0].len() };
    let mut m = a.clone();
    let pivots = rref(&mut m);
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivot_set.contains(c)) {
        let mut v = vec![Rat::zero(); cols];
        v[free] = Rat::one();
        for (prow, &pcol) in pivots.iter().enumerate() {
            v[pcol] = -m[prow][free].clone();
        }
        basis.push(clear_denominators(&v));
    }
    basis
}

/// Scales a rational vector to a primitive integer vector.
pub fn clear_denominators(v: &[Rat]) -> Vec<Int> {
    let mut lcm = Int::one();
    for x in v {
        lcm = num_integer::lcm(lcm, x.denom().clone());
    }
    let ints: Vec<Int> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut g = Int::zero();
    for x in &ints {
        g = num_integer::gcd(g, x.clone());
    }
    if g.is_zero() || g.is_one() {
        ints
    } else {
        ints.iter().map(|x| x / &g).collect()
    }
}

/// Solves `B X = C` exactly where the columns of `B` are independent and the
/// system is consistent (column space of `C` inside that of `B`); errors
/// otherwise.
pub fn solve_exact(b: &RatMatrix, c: &RatMatrix) -> Result<RatMatrix> {
    let rows = b.len();
    let bcols = if rows == 0 { 0 } else { b[0].len() };
    let ccols = if rows == 0 { 0 } else { c[0].len() };
    let mut aug: RatMatrix = (0..rows)
        .map(|r| {
            let mut row = b[r].clone();
            row.extend(c[r].iter().cloned());
            row
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.iter().any(|&p| p >= bcols) {
        return Err(Error::SingularSystem);
    }
    if pivots.len() < bcols {
        return Err(Error::SingularSystem);
    }
    // consistency: rows beyond the pivots must be fully zero
    for row in aug.iter().skip(pivots.len()) {
        if row.iter().any(|x| !x.is_zero()) {
            return Err(Error::SingularSystem);
        }
    }
    let mut x = vec![vec![Rat::zero(); ccols]; bcols];
    for (prow, &pcol) in pivots.iter().enumerate() {
        for j in 0..ccols {
            x[pcol][j] = aug[prow][bcols + j].clone();
        }
    }
    Ok(x)
}

/// Solves the square system `A x = rhs` exactly.
pub fn solve_square(a: &RatMatrix, rhs: &[Rat]) -> Result<Vec<Rat>> {
    let c: RatMatrix = rhs.iter().map(|v| vec![v.clone()]).collect();
    let x = solve_exact(a, &c)?;
    Ok(x.into_iter().map(|mut r| r.remove(0)).collect())
}

const MODP: u64 = (1 << 61) - 1;

#[inline]
fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MODP as u128) as u64
}

fn powmod(mut base: u64, mut e: u64) -> u64 {
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, base);
        }
        base = mulmod(base, base);
        e >>= 1;
    }
    acc
}

/// Rank of an integer matrix modulo a fixed 61-bit prime. Full rank mod p
/// proves full rank over the rationals; a deficient mod-p rank is only a
/// screen.
pub fn rank_mod_p(a: &[Vec<i64>]) -> usize {
    let rows = a.len();
    if rows == 0 {
        return 0;
    }
    let cols = a[0].len();
    let mut m: Vec<Vec<u64>> = a
        .iter()
        .map(|r| r.iter().map(|&x| x.rem_euclid(MODP as i64) as u64).collect())
        .collect();
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, p);
        let inv = powmod(m[rank][col], MODP - 2);
        for c in col..cols {
            m[rank][c] = mulmod(m[rank][c], inv);
        }
        for r in 0..rows {
            if r != rank && m[r][col] != 0 {
                let f = m[r][col];
                for c in col..cols {
                    let sub = mulmod(f, m[rank][c]);
                    m[r][c] = (m[r][c] + MODP - sub) % MODP;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

pub fn int_to_rat_matrix(a: &IntMatrix) -> RatMatrix {
    a.iter()
        .map(|r| r.iter().map(|x| Rat::from_integer(x.clone())).collect())
        .collect()
}
