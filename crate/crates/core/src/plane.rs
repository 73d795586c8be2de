//! Good semigroups of N^2 (two-branch value semigroups) and their good
//! ideals: validation, distance (chain length) computation, and the derived
//! invariants.
//!
//! Everything is stored as a finite grid trace. A good set with conductor
//! vector d satisfies: p is a member iff min(p, d) is a stored member. All
//! axiom checks run on stored cells; each check is point-faithful because
//! componentwise min commutes with the cap, sums cap correctly when the
//! addend grid spans up to max(cap, gamma), and completion candidates beyond
//! the border cap onto the pair's meet (covered by the min-closure check).

use crate::bits::Bits;
use crate::bounds::{scalar_verdicts, BookkeepingReport, InequalityVerdict};
use crate::semigroup::NumericalSemigroup;
use serde::Serialize;
use std::collections::{HashMap, HashSet, VecDeque};

pub type Pt = (u64, u64);

#[inline]
fn meet(a: Pt, b: Pt) -> Pt {
    (a.0.min(b.0), a.1.min(b.1))
}

#[inline]
fn cap(p: Pt, hi: Pt) -> Pt {
    meet(p, hi)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlaneError {
    /// (0,0) is not among the elements.
    MissingOrigin,
    /// The conductor vector is not a member, so no tail box is contained.
    NoConductor,
    /// Two members whose componentwise minimum is missing.
    NotMinClosed(Pt, Pt),
    /// Two members sharing a coordinate with no completion above them.
    CompletionFails(Pt, Pt),
    /// A sum of members (capped) falls outside the set.
    NotAdditivelyClosed(Pt, Pt),
    /// No componentwise-minimal nonzero member exists.
    MultiplicityVectorMissing,
    /// Binary operation across two different parent semigroups.
    ParentMismatch,
    /// Containment required; the witness is in the alleged subset only.
    NotContained { witness: Pt },
    /// An operation result failed re-validation at the witness point.
    NotGoodIdeal { witness: Pt },
    /// A translation would leave the first quadrant.
    TranslationOutOfRange { point: (i64, i64) },
    /// Two saturated chains of different lengths; an implementation defect.
    ChainAmbiguity { left: u64, right: u64 },
    /// The difference region is too large for exact chain search.
    BoxTooLarge { cells: usize },
    /// nu * l(R/c) came out below l(m/xc); the supplied nu is too small.
    KernelLengthNegative { nu_n: u64, len_m_xc: u64 },
    /// Truncated series: the conductor did not stabilize below truncation.
    TruncationTooSmall,
    /// A parametrization generator is identically zero on both branches.
    ZeroGenerator,
    /// A generator with a nonzero constant term is a unit, not admissible.
    UnitGenerator,
    /// A rational coefficient with zero denominator.
    InvalidCoefficient,
}

impl std::fmt::Display for PlaneError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PlaneError::MissingOrigin => write!(f, "(0,0) is not an element"),
            PlaneError::NoConductor => write!(f, "conductor vector is not a member"),
            PlaneError::NotMinClosed(a, b) => {
                write!(f, "minimum of {a:?} and {b:?} is missing")
            }
            PlaneError::CompletionFails(a, b) => {
                write!(f, "no completion above {a:?} and {b:?}")
            }
            PlaneError::NotAdditivelyClosed(a, b) => {
                write!(f, "sum of {a:?} and {b:?} is missing")
            }
            PlaneError::MultiplicityVectorMissing => {
                write!(f, "no componentwise-minimal nonzero member")
            }
            PlaneError::ParentMismatch => {
                write!(f, "ideals belong to different ambient semigroups")
            }
            PlaneError::NotContained { witness } => {
                write!(f, "containment fails at {witness:?}")
            }
            PlaneError::NotGoodIdeal { witness } => {
                write!(f, "result is not a good ideal, witness {witness:?}")
            }
            PlaneError::TranslationOutOfRange { point } => {
                write!(f, "translation sends {point:?} outside N^2")
            }
            PlaneError::ChainAmbiguity { left, right } => {
                write!(f, "saturated chains of lengths {left} and {right}")
            }
            PlaneError::BoxTooLarge { cells } => {
                write!(f, "difference region of {cells} cells exceeds chain search")
            }
            PlaneError::KernelLengthNegative { nu_n, len_m_xc } => {
                write!(f, "kernel length negative: {nu_n} < {len_m_xc}")
            }
            PlaneError::TruncationTooSmall => {
                write!(f, "conductor not stabilized below the truncation order")
            }
            PlaneError::ZeroGenerator => write!(f, "generator vanishes on both branches"),
            PlaneError::UnitGenerator => {
                write!(f, "generator has a unit component (nonzero constant term)")
            }
            PlaneError::InvalidCoefficient => write!(f, "coefficient denominator is zero"),
        }
    }
}

impl std::error::Error for PlaneError {}

/// Dense membership grid over the box [lo, hi], both corners inclusive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Grid {
    lo: Pt,
    hi: Pt,
    bits: Bits,
}

impl Grid {
    pub(crate) fn new(lo: Pt, hi: Pt) -> Self {
        debug_assert!(lo.0 <= hi.0 && lo.1 <= hi.1);
        let cells = ((hi.0 - lo.0 + 1) * (hi.1 - lo.1 + 1)) as usize;
        Grid {
            lo,
            hi,
            bits: Bits::new(cells),
        }
    }

    #[inline]
    fn idx(&self, p: Pt) -> usize {
        debug_assert!(self.in_box(p));
        ((p.0 - self.lo.0) * (self.hi.1 - self.lo.1 + 1) + (p.1 - self.lo.1)) as usize
    }

    #[inline]
    fn in_box(&self, p: Pt) -> bool {
        p.0 >= self.lo.0 && p.0 <= self.hi.0 && p.1 >= self.lo.1 && p.1 <= self.hi.1
    }

    #[inline]
    pub(crate) fn get(&self, p: Pt) -> bool {
        self.bits.get(self.idx(p))
    }

    pub(crate) fn set(&mut self, p: Pt) {
        let i = self.idx(p);
        self.bits.set(i);
    }

    fn points(&self) -> Vec<Pt> {
        let h = self.hi.1 - self.lo.1 + 1;
        self.bits
            .ones()
            .map(|i| (self.lo.0 + i as u64 / h, self.lo.1 + i as u64 % h))
            .collect()
    }

    /// Componentwise-minimal point whose upper rectangle is fully set, if a
    /// unique one exists.
    pub(crate) fn minimal_full_corner(&self) -> Option<Pt> {
        let w = (self.hi.0 - self.lo.0 + 1) as usize;
        let h = (self.hi.1 - self.lo.1 + 1) as usize;
        let mut full = vec![false; w * h];
        for x in (0..w).rev() {
            for y in (0..h).rev() {
                let here = self.bits.get(x * h + y);
                let right = x + 1 >= w || full[(x + 1) * h + y];
                let up = y + 1 >= h || full[x * h + y + 1];
                full[x * h + y] = here && right && up;
            }
        }
        let mut minimals: Vec<Pt> = Vec::new();
        for x in 0..w {
            for y in 0..h {
                if !full[x * h + y] {
                    continue;
                }
                let p = (self.lo.0 + x as u64, self.lo.1 + y as u64);
                if minimals
                    .iter()
                    .any(|&m| m.0 <= p.0 && m.1 <= p.1)
                {
                    continue;
                }
                minimals.retain(|&m| !(p.0 <= m.0 && p.1 <= m.1));
                minimals.push(p);
            }
        }
        if minimals.len() == 1 {
            Some(minimals[0])
        } else {
            None
        }
    }
}

/// A good semigroup of N^2: additively closed, min-closed, satisfying the
/// completion axiom, with conductor box gamma + N^2 contained.
#[derive(Debug, Clone)]
pub struct GoodSemigroupPlane {
    gamma: Pt,
    small: Grid,
    projections: [NumericalSemigroup; 2],
}

impl PartialEq for GoodSemigroupPlane {
    fn eq(&self, other: &Self) -> bool {
        self.gamma == other.gamma && self.small == other.small
    }
}

impl Eq for GoodSemigroupPlane {}

impl GoodSemigroupPlane {
    /// Validate and build from the member list below the conductor. Points
    /// beyond the conductor are capped onto the box. The conductor is
    /// normalized to the minimal one afterwards.
    pub fn from_small_elements(points: &[Pt], conductor: Pt) -> Result<Self, PlaneError> {
        let mut grid = Grid::new((0, 0), conductor);
        for &p in points {
            grid.set(cap(p, conductor));
        }
        if !grid.get((0, 0)) {
            return Err(PlaneError::MissingOrigin);
        }
        if !grid.get(conductor) {
            return Err(PlaneError::NoConductor);
        }
        let cells = grid.points();
        check_min_closed(&grid, &cells)?;
        check_completion(&grid, &cells)?;
        // Additive closure of the capped sums.
        for (i, &a) in cells.iter().enumerate() {
            for &b in &cells[i..] {
                if !grid.get(cap((a.0 + b.0, a.1 + b.1), conductor)) {
                    return Err(PlaneError::NotAdditivelyClosed(a, b));
                }
            }
        }

        // Shrink to the true conductor and re-cap the trace.
        let gamma = grid.minimal_full_corner().ok_or(PlaneError::NoConductor)?;
        let mut small = Grid::new((0, 0), gamma);
        for &p in &cells {
            small.set(cap(p, gamma));
        }

        let projections = [project(&small, gamma, 0), project(&small, gamma, 1)];
        Ok(GoodSemigroupPlane {
            gamma,
            small,
            projections,
        })
    }

    #[inline]
    pub fn contains(&self, p: Pt) -> bool {
        self.small.get(cap(p, self.gamma))
    }

    pub fn gamma(&self) -> Pt {
        self.gamma
    }

    /// Stored members of the box [0, gamma], ascending.
    pub fn small_elements(&self) -> Vec<Pt> {
        self.small.points()
    }

    pub fn projections(&self) -> (&NumericalSemigroup, &NumericalSemigroup) {
        (&self.projections[0], &self.projections[1])
    }

    /// Sum of the projection multiplicities.
    pub fn multiplicity(&self) -> u64 {
        self.projections[0].multiplicity() + self.projections[1].multiplicity()
    }

    /// Conductor degree: gamma_1 + gamma_2.
    pub fn conductor_degree(&self) -> u64 {
        self.gamma.0 + self.gamma.1
    }

    /// Componentwise-minimal nonzero member, when it is itself a member.
    pub fn multiplicity_vector(&self) -> Result<Pt, PlaneError> {
        let mut mx = u64::MAX;
        let mut my = u64::MAX;
        for p in self.small.points() {
            if p == (0, 0) {
                continue;
            }
            mx = mx.min(p.0);
            my = my.min(p.1);
        }
        if mx == u64::MAX {
            return Err(PlaneError::MultiplicityVectorMissing);
        }
        let v = (mx, my);
        if v == (0, 0) || !self.contains(v) {
            return Err(PlaneError::MultiplicityVectorMissing);
        }
        Ok(v)
    }

    /// The semigroup viewed as an ideal over itself.
    pub fn as_ideal(&self) -> GoodIdealPlane<'_> {
        GoodIdealPlane {
            parent: self,
            grid: self.small.clone(),
        }
    }

    /// gamma + N^2.
    pub fn conductor_ideal(&self) -> GoodIdealPlane<'_> {
        GoodIdealPlane::corner(self, self.gamma)
    }

    /// v + N^2, a good ideal for any v.
    pub fn corner_ideal(&self, v: Pt) -> GoodIdealPlane<'_> {
        GoodIdealPlane::corner(self, v)
    }

    /// The nonzero members, validated as a good ideal.
    pub fn maximal_ideal(&self) -> Result<GoodIdealPlane<'_>, PlaneError> {
        let hi = (self.gamma.0 + 1, self.gamma.1 + 1);
        let mut pts = Vec::new();
        for x in 0..=hi.0 {
            for y in 0..=hi.1 {
                if (x, y) != (0, 0) && self.contains((x, y)) {
                    pts.push((x, y));
                }
            }
        }
        GoodIdealPlane::from_elements(self, &pts, hi)
    }

    /// Invariants of the associated ring data, with the embedding dimension
    /// supplied by the caller.
    pub fn invariants_plane(&self, nu: u64) -> Result<PlaneInvariantReport, PlaneError> {
        let e = self.multiplicity();
        let e_c = self.conductor_degree();
        let s_ideal = self.as_ideal();
        let c_ideal = self.conductor_ideal();
        let len_r_c = distance(&s_ideal, &c_ideal)?;

        let e_vec = self.multiplicity_vector()?;
        let m = self.maximal_ideal()?;
        let x_c = c_ideal.translate((e_vec.0 as i64, e_vec.1 as i64))?;
        let len_m_xc = distance(&m, &x_c)?;
        let x_rbar = self.corner_ideal(e_vec);
        let len_xrbar_m = distance(&x_rbar, &m)?;
        let nu_n = nu * len_r_c;
        if nu_n < len_m_xc {
            return Err(PlaneError::KernelLengthNegative { nu_n, len_m_xc });
        }
        let bookkeeping = BookkeepingReport {
            len_m_xc,
            len_xrbar_m,
            len_ker_phi: nu_n - len_m_xc,
            e_c,
        };
        let verdicts = scalar_verdicts(&[], e, nu, e_c, len_r_c, None, Some(&bookkeeping));
        Ok(PlaneInvariantReport {
            gamma: self.gamma,
            nu,
            e,
            e_c,
            len_r_c,
            multiplicity_vector: e_vec,
            projections: [
                self.projections[0].minimal_generators().to_vec(),
                self.projections[1].minimal_generators().to_vec(),
            ],
            bookkeeping,
            verdicts,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PlaneInvariantReport {
    pub gamma: Pt,
    pub nu: u64,
    pub e: u64,
    pub e_c: u64,
    /// l(R/c) = d(S minus C)
    pub len_r_c: u64,
    pub multiplicity_vector: Pt,
    pub projections: [Vec<u64>; 2],
    pub bookkeeping: BookkeepingReport,
    pub verdicts: Vec<InequalityVerdict>,
}

fn project(small: &Grid, gamma: Pt, coord: usize) -> NumericalSemigroup {
    let max = if coord == 0 { gamma.0 } else { gamma.1 };
    let mut memb = Bits::new(max as usize + 1);
    for p in small.points() {
        let v = if coord == 0 { p.0 } else { p.1 };
        memb.set(v as usize);
    }
    NumericalSemigroup::from_member_bits(&memb)
}

fn check_min_closed(grid: &Grid, cells: &[Pt]) -> Result<(), PlaneError> {
    for (i, &a) in cells.iter().enumerate() {
        for &b in &cells[i + 1..] {
            if !grid.get(meet(a, b)) {
                return Err(PlaneError::NotMinClosed(a, b));
            }
        }
    }
    Ok(())
}

/// Completion axiom over stored cells. Pairs sharing a border coordinate
/// pass automatically: a point beyond the border caps onto the pair's meet,
/// which min-closure already guarantees.
fn check_completion(grid: &Grid, cells: &[Pt]) -> Result<(), PlaneError> {
    for (i, &a) in cells.iter().enumerate() {
        for &b in &cells[i + 1..] {
            if a.0 == b.0 && a.0 < grid.hi.0 {
                let m = a.1.min(b.1);
                if !(a.0 + 1..=grid.hi.0).any(|x| grid.get((x, m))) {
                    return Err(PlaneError::CompletionFails(a, b));
                }
            }
            if a.1 == b.1 && a.1 < grid.hi.1 {
                let m = a.0.min(b.0);
                if !(a.1 + 1..=grid.hi.1).any(|y| grid.get((m, y))) {
                    return Err(PlaneError::CompletionFails(a, b));
                }
            }
        }
    }
    Ok(())
}

/// A good ideal of a good semigroup, stored as its trace on [lo, cond]
/// where lo is the componentwise-minimal member and cond the minimal
/// conductor vector: p is a member iff min(p, cond) is stored.
#[derive(Debug, Clone)]
pub struct GoodIdealPlane<'s> {
    parent: &'s GoodSemigroupPlane,
    grid: Grid,
}

impl PartialEq for GoodIdealPlane<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.parent == other.parent && self.grid == other.grid
    }
}

impl Eq for GoodIdealPlane<'_> {}

impl<'s> GoodIdealPlane<'s> {
    fn corner(parent: &'s GoodSemigroupPlane, v: Pt) -> Self {
        let mut grid = Grid::new(v, v);
        grid.set(v);
        GoodIdealPlane { parent, grid }
    }

    /// Validate and build from an element list; points beyond `bound` are
    /// capped onto it. `bound` must dominate the true conductor.
    pub fn from_elements(
        parent: &'s GoodSemigroupPlane,
        points: &[Pt],
        bound: Pt,
    ) -> Result<Self, PlaneError> {
        if points.is_empty() {
            return Err(PlaneError::NotGoodIdeal { witness: bound });
        }
        let mut lo = (u64::MAX, u64::MAX);
        for &p in points {
            let p = cap(p, bound);
            lo = meet(lo, p);
        }
        let mut grid = Grid::new(lo, bound);
        for &p in points {
            grid.set(cap(p, bound));
        }
        // Validate on the raw box first (the axiom checks are faithful for
        // any cap box), so witnesses point at the input rather than at a
        // failed conductor normalization.
        let raw = GoodIdealPlane { parent, grid };
        raw.validate()?;
        Self::normalize(parent, raw.grid)
    }

    /// Shrink the box to [min member, minimal conductor].
    fn normalize(parent: &'s GoodSemigroupPlane, grid: Grid) -> Result<Self, PlaneError> {
        let pts = grid.points();
        let Some(&first) = pts.first() else {
            return Err(PlaneError::NotGoodIdeal { witness: grid.lo });
        };
        let mut lo = first;
        for &p in &pts {
            lo = meet(lo, p);
        }
        let cond = grid.minimal_full_corner().ok_or(PlaneError::NotGoodIdeal {
            witness: grid.hi,
        })?;
        let mut out = Grid::new(lo, cond);
        for &p in &pts {
            out.set(cap(p, cond));
        }
        Ok(GoodIdealPlane { parent, grid: out })
    }

    /// Axiom check of the capped extension against the parent.
    fn validate(&self) -> Result<(), PlaneError> {
        let cells = self.grid.points();
        check_min_closed(&self.grid, &cells)?;
        check_completion(&self.grid, &cells)?;
        // Stability under parent addition; addends span up to
        // max(cond, gamma) so capped sums are point-faithful.
        let g = self.parent.gamma();
        let u = (self.grid.hi.0.max(g.0), self.grid.hi.1.max(g.1));
        for &e in &cells {
            for sx in 0..=u.0 {
                for sy in 0..=u.1 {
                    let s = (sx, sy);
                    if !self.parent.contains(s) {
                        continue;
                    }
                    if !self.grid.get(cap((e.0 + s.0, e.1 + s.1), self.grid.hi)) {
                        return Err(PlaneError::NotAdditivelyClosed(e, s));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn parent(&self) -> &'s GoodSemigroupPlane {
        self.parent
    }

    /// Componentwise-minimal member.
    pub fn lower_corner(&self) -> Pt {
        self.grid.lo
    }

    /// Minimal vector whose upper box is fully contained.
    pub fn conductor(&self) -> Pt {
        self.grid.hi
    }

    #[inline]
    pub fn contains(&self, p: Pt) -> bool {
        if p.0 < self.grid.lo.0 || p.1 < self.grid.lo.1 {
            return false;
        }
        self.grid.get(cap(p, self.grid.hi))
    }

    /// Stored trace, ascending.
    pub fn elements(&self) -> Vec<Pt> {
        self.grid.points()
    }

    pub fn translate(&self, v: (i64, i64)) -> Result<Self, PlaneError> {
        let shift = |p: Pt| -> Result<Pt, PlaneError> {
            let x = p.0 as i64 + v.0;
            let y = p.1 as i64 + v.1;
            if x < 0 || y < 0 {
                return Err(PlaneError::TranslationOutOfRange { point: v });
            }
            Ok((x as u64, y as u64))
        };
        let lo = shift(self.grid.lo)?;
        let hi = shift(self.grid.hi)?;
        let mut grid = Grid::new(lo, hi);
        for p in self.grid.points() {
            grid.set(shift(p)?);
        }
        let out = GoodIdealPlane {
            parent: self.parent,
            grid,
        };
        out.validate().map_err(|e| out.demote(e))?;
        Ok(out)
    }

    pub fn intersect(&self, other: &Self) -> Result<Self, PlaneError> {
        self.check_parent(other)?;
        let lo = (
            self.grid.lo.0.max(other.grid.lo.0),
            self.grid.lo.1.max(other.grid.lo.1),
        );
        let hi = (
            self.grid.hi.0.max(other.grid.hi.0).max(lo.0),
            self.grid.hi.1.max(other.grid.hi.1).max(lo.1),
        );
        let mut grid = Grid::new(lo, hi);
        for x in lo.0..=hi.0 {
            for y in lo.1..=hi.1 {
                if self.contains((x, y)) && other.contains((x, y)) {
                    grid.set((x, y));
                }
            }
        }
        let out = Self::normalize(self.parent, grid)?;
        out.validate().map_err(|e| out.demote(e))?;
        Ok(out)
    }

    /// Is `other` a subset of `self`? Checked on the joint box, which is
    /// complete by cap determinedness.
    pub fn contains_ideal(&self, other: &Self) -> Result<bool, PlaneError> {
        self.check_parent(other)?;
        Ok(self.containment_witness(other).is_none())
    }

    fn containment_witness(&self, other: &Self) -> Option<Pt> {
        let lo = meet(self.grid.lo, other.grid.lo);
        let hi = (
            self.grid.hi.0.max(other.grid.hi.0),
            self.grid.hi.1.max(other.grid.hi.1),
        );
        for x in lo.0..=hi.0 {
            for y in lo.1..=hi.1 {
                if other.contains((x, y)) && !self.contains((x, y)) {
                    return Some((x, y));
                }
            }
        }
        None
    }

    fn check_parent(&self, other: &Self) -> Result<(), PlaneError> {
        if std::ptr::eq(self.parent, other.parent) || self.parent == other.parent {
            Ok(())
        } else {
            Err(PlaneError::ParentMismatch)
        }
    }

    /// Map a validation error on an operation result to the safety-net form.
    fn demote(&self, e: PlaneError) -> PlaneError {
        let witness = match e {
            PlaneError::NotMinClosed(a, b) => meet(a, b),
            PlaneError::CompletionFails(a, _) => a,
            PlaneError::NotAdditivelyClosed(a, b) => {
                cap((a.0 + b.0, a.1 + b.1), self.grid.hi)
            }
            PlaneError::NotGoodIdeal { witness } => witness,
            other => return other,
        };
        PlaneError::NotGoodIdeal { witness }
    }
}

/// The shared workspace for chain-length computation between F and E,
/// F inside E: the common box [lo_E, cond_F], the frozen F-trace, the
/// difference cells, and the parent's addend points.
struct ChainSpace {
    hi: Pt,
    f_grid: Grid,
    diff: Vec<Pt>,
    diff_index: HashMap<Pt, usize>,
    addends: Vec<Pt>,
}

type Mask = u128;

impl ChainSpace {
    fn build(e: &GoodIdealPlane<'_>, f: &GoodIdealPlane<'_>) -> Result<Self, PlaneError> {
        e.check_parent(f)?;
        if let Some(witness) = e.containment_witness(f) {
            return Err(PlaneError::NotContained { witness });
        }
        let lo = e.grid.lo;
        let hi = f.grid.hi;
        debug_assert!(lo.0 <= hi.0 && lo.1 <= hi.1);
        let mut f_grid = Grid::new(lo, hi);
        let mut diff = Vec::new();
        for x in lo.0..=hi.0 {
            for y in lo.1..=hi.1 {
                let p = (x, y);
                if f.contains(p) {
                    f_grid.set(p);
                } else if e.contains(p) {
                    diff.push(p);
                }
            }
        }
        if diff.len() > 127 {
            return Err(PlaneError::BoxTooLarge { cells: diff.len() });
        }
        let diff_index = diff.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let g = e.parent.gamma();
        let u = (hi.0.max(g.0), hi.1.max(g.1));
        let mut addends = Vec::new();
        for x in 0..=u.0 {
            for y in 0..=u.1 {
                if (x, y) != (0, 0) && e.parent.contains((x, y)) {
                    addends.push((x, y));
                }
            }
        }
        Ok(ChainSpace {
            hi,
            f_grid,
            diff,
            diff_index,
            addends,
        })
    }

    #[inline]
    fn live(&self, p: Pt, present: Mask) -> bool {
        if self.f_grid.get(p) {
            return true;
        }
        match self.diff_index.get(&p) {
            Some(&i) => present >> i & 1 == 1,
            None => false,
        }
    }

    fn live_cells(&self, present: Mask) -> Vec<Pt> {
        let mut out = self.f_grid.points();
        for (i, &p) in self.diff.iter().enumerate() {
            if present >> i & 1 == 1 {
                out.push(p);
            }
        }
        out.sort_unstable();
        out
    }

    /// First axiom violation of the capped extension of the live set, with
    /// the cells whose removal can repair it. Any valid larger removal must
    /// include one of the returned options, and none of them is frozen.
    fn first_violation(&self, present: Mask) -> Option<Vec<usize>> {
        let cells = self.live_cells(present);
        let frozen = |p: Pt| self.f_grid.get(p);
        // Min-closure.
        for (i, &a) in cells.iter().enumerate() {
            for &b in &cells[i + 1..] {
                if !self.live(meet(a, b), present) {
                    let opts: Vec<usize> = [a, b]
                        .into_iter()
                        .filter(|&p| !frozen(p))
                        .map(|p| self.diff_index[&p])
                        .collect();
                    debug_assert!(!opts.is_empty());
                    return Some(opts);
                }
            }
        }
        // Completion; border pairs are covered by min-closure.
        for (i, &a) in cells.iter().enumerate() {
            for &b in &cells[i + 1..] {
                let mut bad = false;
                if a.0 == b.0 && a.0 < self.hi.0 {
                    let m = a.1.min(b.1);
                    bad |= !(a.0 + 1..=self.hi.0).any(|x| self.live((x, m), present));
                }
                if !bad && a.1 == b.1 && a.1 < self.hi.1 {
                    let m = a.0.min(b.0);
                    bad |= !(a.1 + 1..=self.hi.1).any(|y| self.live((m, y), present));
                }
                if bad {
                    let opts: Vec<usize> = [a, b]
                        .into_iter()
                        .filter(|&p| !frozen(p))
                        .map(|p| self.diff_index[&p])
                        .collect();
                    debug_assert!(!opts.is_empty());
                    return Some(opts);
                }
            }
        }
        // Stability under parent addition: a missing capped sum forces the
        // summand out (the sum cell was necessarily removed earlier).
        for (i, &e) in self.diff.iter().enumerate() {
            if present >> i & 1 == 0 {
                continue;
            }
            for &s in &self.addends {
                if !self.live(cap((e.0 + s.0, e.1 + s.1), self.hi), present) {
                    return Some(vec![i]);
                }
            }
        }
        None
    }

    /// Breadth-first search over removal sets, seeded with singletons,
    /// branching on the repair options of the first violation. With
    /// `collect_all`, gathers every inclusion-minimal valid removal;
    /// otherwise stops at the first (minimum-cardinality) one.
    fn removal_search(&self, present: Mask, collect_all: bool) -> Vec<Mask> {
        let mut queue: VecDeque<Mask> = VecDeque::new();
        let mut seen: HashSet<Mask> = HashSet::new();
        let mut found: Vec<Mask> = Vec::new();
        for i in 0..self.diff.len() {
            if present >> i & 1 == 1 {
                let m = 1 << i;
                seen.insert(m);
                queue.push_back(m);
            }
        }
        while let Some(removal) = queue.pop_front() {
            if found.iter().any(|&f| f & removal == f) {
                continue;
            }
            match self.first_violation(present & !removal) {
                None => {
                    found.push(removal);
                    if !collect_all {
                        return found;
                    }
                }
                Some(opts) => {
                    for i in opts {
                        if present >> i & 1 == 0 || removal >> i & 1 == 1 {
                            continue;
                        }
                        let next = removal | 1 << i;
                        if seen.insert(next) {
                            queue.push_back(next);
                        }
                    }
                }
            }
        }
        // Keep inclusion-minimal removals only.
        let mut minimal: Vec<Mask> = Vec::new();
        for &r in &found {
            if !found.iter().any(|&o| o != r && o & r == o) {
                minimal.push(r);
            }
        }
        minimal
    }
}

/// d(E minus F): the common length of saturated chains of good ideals from
/// F to E, by greedy minimal-step descent from E.
pub fn distance(e: &GoodIdealPlane<'_>, f: &GoodIdealPlane<'_>) -> Result<u64, PlaneError> {
    let space = ChainSpace::build(e, f)?;
    let mut present: Mask = if space.diff.is_empty() {
        0
    } else {
        (Mask::MAX >> (128 - space.diff.len() as u32)) as Mask
    };
    let mut steps = 0u64;
    while present != 0 {
        let covers = space.removal_search(present, false);
        debug_assert!(!covers.is_empty());
        present &= !covers[0];
        steps += 1;
    }
    Ok(steps)
}

/// Exhaustive cross-check of `distance`: walks every saturated chain via
/// memoized descent and reports ChainAmbiguity if two lengths disagree.
pub fn distance_exhaustive(
    e: &GoodIdealPlane<'_>,
    f: &GoodIdealPlane<'_>,
) -> Result<u64, PlaneError> {
    let space = ChainSpace::build(e, f)?;
    let extent = (space.hi.0 - e.grid.lo.0, space.hi.1 - e.grid.lo.1);
    if extent.0 > 8 || extent.1 > 8 {
        return Err(PlaneError::BoxTooLarge {
            cells: space.diff.len(),
        });
    }
    let mut memo: HashMap<Mask, u64> = HashMap::new();
    fn height(
        space: &ChainSpace,
        present: Mask,
        memo: &mut HashMap<Mask, u64>,
    ) -> Result<u64, PlaneError> {
        if present == 0 {
            return Ok(0);
        }
        if let Some(&h) = memo.get(&present) {
            return Ok(h);
        }
        let covers = space.removal_search(present, true);
        debug_assert!(!covers.is_empty());
        let mut result: Option<u64> = None;
        for r in covers {
            let h = 1 + height(space, present & !r, memo)?;
            match result {
                None => result = Some(h),
                Some(prev) if prev != h => {
                    return Err(PlaneError::ChainAmbiguity {
                        left: prev,
                        right: h,
                    });
                }
                _ => {}
            }
        }
        let h = result.unwrap();
        memo.insert(present, h);
        Ok(h)
    }
    let full: Mask = if space.diff.is_empty() {
        0
    } else {
        (Mask::MAX >> (128 - space.diff.len() as u32)) as Mask
    };
    height(&space, full, &mut memo)
}
