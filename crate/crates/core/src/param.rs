//! Good semigroups from a two-branch parametrization: exact linear algebra
//! over the rationals on series truncated at a fixed order.
//!
//! Each generator is a pair of polynomials (one per branch). The generated
//! algebra is closed under products inside the truncation window, reduced to
//! a row echelon basis, and the achievable order pairs are read off the
//! basis. Orders below the truncation are exact: a monomial of degree d has
//! order at least d in every branch where it does not vanish, so degree-N
//! monomials are invisible and the closure terminates.

use crate::plane::{Grid, GoodSemigroupPlane, PlaneError, Pt};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// One branch of a generator: (exponent, coefficient) terms.
pub type BranchSeries = Vec<(u64, BigRational)>;

/// Exact coefficient from a num/den pair; the denominator must be nonzero.
pub fn coefficient(num: i64, den: i64) -> Result<BigRational, PlaneError> {
    if den == 0 {
        return Err(PlaneError::InvalidCoefficient);
    }
    Ok(BigRational::new(BigInt::from(num), BigInt::from(den)))
}

/// Dense truncated pair series: branch coefficients for exponents 0..n,
/// stored as one vector of length 2n (first branch, then second).
#[derive(Clone, PartialEq)]
struct Series {
    n: usize,
    co: Vec<BigRational>,
}

impl Series {
    fn zero(n: usize) -> Self {
        Series {
            n,
            co: vec![BigRational::zero(); 2 * n],
        }
    }

    fn one(n: usize) -> Self {
        let mut s = Self::zero(n);
        s.co[0] = BigRational::one();
        s.co[n] = BigRational::one();
        s
    }

    fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zero(n);
        for branch in 0..2 {
            let base = branch * n;
            for i in 0..n {
                if self.co[base + i].is_zero() {
                    continue;
                }
                for j in 0..n - i {
                    if other.co[base + j].is_zero() {
                        continue;
                    }
                    let prod = &self.co[base + i] * &other.co[base + j];
                    out.co[base + i + j] += prod;
                }
            }
        }
        out
    }
}

/// Row echelon basis with full back-substitution; rows are kept normalized
/// (leading coefficient one) and sorted by pivot.
struct Echelon {
    rows: Vec<Vec<BigRational>>,
    pivots: Vec<usize>,
}

impl Echelon {
    fn new() -> Self {
        Echelon {
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    fn reduce(&self, v: &mut [BigRational]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let factor = v[p].clone();
            for (vi, ri) in v.iter_mut().zip(row) {
                if !ri.is_zero() {
                    *vi -= &factor * ri;
                }
            }
        }
    }

    /// Returns the pivot index if the vector was independent and inserted.
    fn insert(&mut self, mut v: Vec<BigRational>) -> Option<usize> {
        self.reduce(&mut v);
        let pivot = v.iter().position(|c| !c.is_zero())?;
        let lead = v[pivot].clone();
        for c in &mut v {
            if !c.is_zero() {
                *c /= &lead;
            }
        }
        for row in &mut self.rows {
            if row[pivot].is_zero() {
                continue;
            }
            let factor = row[pivot].clone();
            for (ri, vi) in row.iter_mut().zip(&v) {
                if !vi.is_zero() {
                    *ri -= &factor * vi;
                }
            }
        }
        let at = self.pivots.partition_point(|&p| p < pivot);
        self.pivots.insert(at, pivot);
        self.rows.insert(at, v);
        Some(pivot)
    }
}

/// Value semigroup of the algebra generated by the given branch pairs,
/// truncated at order `truncation` on each branch.
pub fn from_parametrization(
    generators: &[(BranchSeries, BranchSeries)],
    truncation: usize,
) -> Result<GoodSemigroupPlane, PlaneError> {
    let n = truncation;
    if n < 2 {
        return Err(PlaneError::TruncationTooSmall);
    }
    let mut gens: Vec<Series> = Vec::new();
    for (b1, b2) in generators {
        let mut s = Series::zero(n);
        for (branch, terms) in [b1, b2].into_iter().enumerate() {
            for &(exp, ref c) in terms {
                if (exp as usize) < n {
                    s.co[branch * n + exp as usize] += c;
                }
            }
        }
        if s.co.iter().all(|c| c.is_zero()) {
            return Err(PlaneError::ZeroGenerator);
        }
        if !s.co[0].is_zero() || !s.co[n].is_zero() {
            return Err(PlaneError::UnitGenerator);
        }
        gens.push(s);
    }

    // Closure of the generated algebra under products, as an echelon basis.
    // Every monomial is a previous monomial times a generator, so reducing
    // the products of each inserted row with every generator reaches all of
    // them; insertions are bounded by the dimension 2n.
    let mut basis = Echelon::new();
    let mut worklist: Vec<Series> = vec![Series::one(n)];
    worklist.extend(gens.iter().cloned());
    while let Some(s) = worklist.pop() {
        if basis.insert(s.co.clone()).is_none() {
            continue;
        }
        for g in &gens {
            worklist.push(s.mul(g));
        }
    }

    // Read off the achievable order pairs. Rows led in the first branch are
    // processed by descending pivot; the second-branch span of the strictly
    // larger rows plus the branch-two-only rows gives the reachable orders:
    // every pivot below the residual order, and the residual order itself.
    let mut t_rows: Vec<(usize, Vec<BigRational>)> = Vec::new();
    let mut u_span = Echelon::new();
    for (row, &p) in basis.rows.iter().zip(&basis.pivots) {
        let u_part = row[n..].to_vec();
        if p < n {
            t_rows.push((p, u_part));
        } else {
            u_span.insert(u_part);
        }
    }
    t_rows.sort_by(|a, b| b.0.cmp(&a.0));
    let window = (n as u64 - 1, n as u64 - 1);
    let mut trace = Grid::new((0, 0), window);
    for (a, u_part) in t_rows {
        let mut residual = u_part.clone();
        u_span.reduce(&mut residual);
        let res_ord = residual
            .iter()
            .position(|c| !c.is_zero())
            .unwrap_or(n);
        for &p in &u_span.pivots {
            if p < res_ord {
                trace.set((a as u64, p as u64));
            }
        }
        if res_ord < n {
            trace.set((a as u64, res_ord as u64));
        }
        u_span.insert(u_part);
    }

    // The conductor must stabilize inside half the window, and every row and
    // column below it must be constant across the tail, so the window trace
    // determines the semigroup.
    let gamma = trace
        .minimal_full_corner()
        .ok_or(PlaneError::TruncationTooSmall)?;
    if gamma.0 > window.0 / 2 || gamma.1 > window.1 / 2 {
        return Err(PlaneError::TruncationTooSmall);
    }
    for x in 0..gamma.0 {
        let v = trace.get((x, gamma.1));
        if (gamma.1..=window.1).any(|y| trace.get((x, y)) != v) {
            return Err(PlaneError::TruncationTooSmall);
        }
    }
    for y in 0..gamma.1 {
        let v = trace.get((gamma.0, y));
        if (gamma.0..=window.0).any(|x| trace.get((x, y)) != v) {
            return Err(PlaneError::TruncationTooSmall);
        }
    }
    let mut small: Vec<Pt> = Vec::new();
    for x in 0..=gamma.0 {
        for y in 0..=gamma.1 {
            if trace.get((x, y)) {
                small.push((x, y));
            }
        }
    }
    GoodSemigroupPlane::from_small_elements(&small, gamma)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> BigRational {
        BigRational::one()
    }

    fn mono(exp: u64) -> BranchSeries {
        vec![(exp, one())]
    }

    #[test]
    fn two_axes_give_the_figure_semigroup() {
        let gens = vec![
            (mono(3), vec![]),
            (mono(4), vec![]),
            (vec![], mono(3)),
            (vec![], mono(4)),
        ];
        let s = from_parametrization(&gens, 16).unwrap();
        assert_eq!(s.gamma(), (6, 6));
        let expected = GoodSemigroupPlane::from_small_elements(
            &[
                (0, 0),
                (3, 3),
                (3, 4),
                (4, 3),
                (4, 4),
                (3, 6),
                (4, 6),
                (6, 3),
                (6, 4),
                (6, 6),
            ],
            (6, 6),
        )
        .unwrap();
        assert_eq!(s, expected);
    }

    #[test]
    fn cusp_pair_with_cancellation() {
        // (t,u^2), (t^2,u^3), (t^3,u^4): the combination g2 - g1^2 kills the
        // first branch, so (3,3) is reachable even though no single monomial
        // lands there.
        let gens = vec![
            (mono(1), mono(2)),
            (mono(2), mono(3)),
            (mono(3), mono(4)),
        ];
        let s = from_parametrization(&gens, 16).unwrap();
        assert_eq!(s.gamma(), (2, 3));
        assert_eq!(
            s.small_elements(),
            vec![(0, 0), (1, 2), (2, 3)]
        );
        let (p1, p2) = s.projections();
        assert_eq!(p1.minimal_generators(), &[1]);
        assert_eq!(p2.minimal_generators(), &[2, 3]);
        assert_eq!(s.multiplicity(), 3);
        assert_eq!(s.conductor_degree(), 5);
        let report = s.invariants_plane(3).unwrap();
        assert_eq!(report.len_r_c, 2);
        assert_eq!(report.e, 3);
        assert_eq!(report.e_c, 5);
        assert_eq!(report.multiplicity_vector, (1, 2));
        assert_eq!(report.bookkeeping.len_xrbar_m, 1);
        assert_eq!(report.bookkeeping.len_m_xc, 4);
        assert_eq!(report.bookkeeping.len_ker_phi, 2);
    }

    #[test]
    fn coordinate_axes_give_pinched_plane() {
        let gens = vec![(mono(1), vec![]), (vec![], mono(1))];
        let s = from_parametrization(&gens, 16).unwrap();
        assert_eq!(s.gamma(), (1, 1));
        assert_eq!(s.small_elements(), vec![(0, 0), (1, 1)]);
    }

    #[test]
    fn scalar_multiples_do_not_change_values() {
        let half = coefficient(1, 2).unwrap();
        let third = coefficient(-1, 3).unwrap();
        let gens = vec![
            (vec![(1, half)], vec![(2, third)]),
            (mono(2), mono(3)),
            (mono(3), mono(4)),
        ];
        let s = from_parametrization(&gens, 16).unwrap();
        assert_eq!(s.gamma(), (2, 3));
        assert_eq!(s.small_elements(), vec![(0, 0), (1, 2), (2, 3)]);
    }

    #[test]
    fn degenerate_generators_are_rejected() {
        assert_eq!(
            from_parametrization(&[(vec![], vec![])], 16),
            Err(PlaneError::ZeroGenerator)
        );
        assert_eq!(
            from_parametrization(&[(vec![(0, one()), (1, one())], mono(1))], 16),
            Err(PlaneError::UnitGenerator)
        );
        assert_eq!(coefficient(1, 0), Err(PlaneError::InvalidCoefficient));
    }

    #[test]
    fn insufficient_truncation_is_reported() {
        let gens = vec![
            (mono(3), vec![]),
            (mono(4), vec![]),
            (vec![], mono(3)),
            (vec![], mono(4)),
        ];
        // Conductor (6,6) needs the full corner at or below half the window.
        assert_eq!(
            from_parametrization(&gens, 8),
            Err(PlaneError::TruncationTooSmall)
        );
        assert_eq!(
            from_parametrization(&gens, 1),
            Err(PlaneError::TruncationTooSmall)
        );
    }
}
