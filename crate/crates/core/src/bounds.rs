//! Inequality verification and length bookkeeping.
//!
//! Every bound relating multiplicity, embedding dimension, conductor and the
//! member count below the conductor is evaluated here, together with the
//! length chain l(m/xc), l(xRbar/m), l(ker phi) used by the
//! associated-graded argument. Each length is computed both as a closed
//! formula and as a set cardinality through ideal arithmetic; disagreement is
//! an internal defect and is reported as such, never silently preferred.

use crate::ideal::RelativeIdeal;
use crate::semigroup::NumericalSemigroup;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundsError {
    /// Formula route and cardinality route disagree, or a length came out
    /// negative. Signals a defect in this crate, carried as data so callers
    /// can surface it loudly.
    InternalInconsistency {
        quantity: &'static str,
        by_formula: i128,
        by_sets: i128,
    },
}

impl std::fmt::Display for BoundsError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundsError::InternalInconsistency {
                quantity,
                by_formula,
                by_sets,
            } => write!(
                f,
                "bookkeeping mismatch for {quantity}: formula {by_formula}, sets {by_sets}"
            ),
        }
    }
}

impl std::error::Error for BoundsError {}

/// One evaluated inequality: `holds` means lhs <= rhs, `equality` lhs = rhs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InequalityVerdict {
    pub check_id: String,
    pub lhs: u64,
    pub rhs: u64,
    pub holds: bool,
    pub equality: bool,
    pub semigroup: Vec<u64>,
}

impl InequalityVerdict {
    fn new(check_id: &str, lhs: u64, rhs: u64, label: &[u64]) -> Self {
        InequalityVerdict {
            check_id: check_id.to_string(),
            lhs,
            rhs,
            holds: lhs <= rhs,
            equality: lhs == rhs,
            semigroup: label.to_vec(),
        }
    }

    pub fn csv_row(&self) -> String {
        let gens: Vec<String> = self.semigroup.iter().map(|g| g.to_string()).collect();
        format!(
            "{},{},{},{},{},{}",
            self.check_id,
            gens.join(" "),
            self.lhs,
            self.rhs,
            self.holds,
            self.equality
        )
    }
}

pub const VERDICT_CSV_HEADER: &str = "check_id,gens,lhs,rhs,holds,equality";

/// Known check identifiers, in emission order.
pub const CHECK_IDS: [&str; 8] = [
    "abhyankar",
    "dimd",
    "cor13_strong",
    "cor13_weak",
    "lech",
    "wilf",
    "depth",
    "ag_key",
];

/// Length chain around the multiplicity element x (valuation e).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BookkeepingReport {
    /// l(m / xc)
    pub len_m_xc: u64,
    /// l(x Rbar / m)
    pub len_xrbar_m: u64,
    /// l(ker phi), from nu * n = l(m/xc) + l(ker phi)
    pub len_ker_phi: u64,
    /// e(c) = c(S)
    pub e_c: u64,
}

/// Evaluate the scalar bounds on supplied invariants. Shared with the plane
/// module, where n plays the role of l(R/c) and e_c of the conductor degree.
/// `q` adds the depth check; `bookkeeping` adds the kernel bound. Right-hand
/// sides use saturating arithmetic: they overflow only far beyond any
/// representable conductor, and saturation keeps `holds` truthful there.
pub fn scalar_verdicts(
    label: &[u64],
    e: u64,
    nu: u64,
    e_c: u64,
    n: u64,
    q: Option<u64>,
    bookkeeping: Option<&BookkeepingReport>,
) -> Vec<InequalityVerdict> {
    let nn = n.saturating_mul(n);
    let mut out = vec![
        InequalityVerdict::new("abhyankar", nu, e, label),
        InequalityVerdict::new(
            "dimd",
            e,
            (nu - 1).saturating_mul(n).saturating_add(1),
            label,
        ),
        InequalityVerdict::new(
            "cor13_strong",
            e_c,
            (nu - 1).saturating_mul(nn).saturating_add(n),
            label,
        ),
        InequalityVerdict::new("cor13_weak", e_c, nu.saturating_mul(nn), label),
        InequalityVerdict::new("lech", e_c, e.saturating_mul(n), label),
        InequalityVerdict::new("wilf", e_c, nu.saturating_mul(n), label),
    ];
    if let Some(q) = q {
        out.push(InequalityVerdict::new("depth", q, n, label));
    }
    if let Some(bk) = bookkeeping {
        out.push(InequalityVerdict::new(
            "ag_key",
            bk.len_xrbar_m,
            bk.len_ker_phi,
            label,
        ));
    }
    out
}

/// The seven semigroup checks: abhyankar, dimd, cor13_strong, cor13_weak,
/// lech, wilf, depth. Full-monoid conventions make every verdict hold.
pub fn check_all(s: &NumericalSemigroup) -> Vec<InequalityVerdict> {
    let inv = s.invariants();
    scalar_verdicts(
        &inv.generators,
        inv.e,
        inv.nu,
        inv.conductor,
        inv.n,
        Some(inv.depth_q),
        None,
    )
}

/// The ag_key check l(xRbar/m) <= l(ker phi) as a verdict row.
pub fn ag_key_verdict(label: &[u64], bk: &BookkeepingReport) -> InequalityVerdict {
    InequalityVerdict::new("ag_key", bk.len_xrbar_m, bk.len_ker_phi, label)
}

fn reconcile(
    quantity: &'static str,
    by_formula: i128,
    by_sets: i128,
) -> Result<u64, BoundsError> {
    if by_formula != by_sets || by_formula < 0 {
        return Err(BoundsError::InternalInconsistency {
            quantity,
            by_formula,
            by_sets,
        });
    }
    Ok(by_formula as u64)
}

/// Length chain around x of valuation e: each quantity computed through
/// ideal cardinalities and again by closed formula.
pub fn ag_bookkeeping(s: &NumericalSemigroup) -> Result<BookkeepingReport, BoundsError> {
    let inv = s.invariants();
    let (e, nu, c, n, g) = (
        inv.e as i128,
        inv.nu as i128,
        inv.conductor as i128,
        inv.n as i128,
        inv.genus as i128,
    );

    let m = RelativeIdeal::maximal_ideal(s);
    let xc = RelativeIdeal::conductor_ideal(s).translate(e as i64);
    let xrbar = RelativeIdeal::ray(s, e as i64);

    let len_m_xc = reconcile(
        "len_m_xc",
        e + n - 1,
        m.length_between(&xc).unwrap() as i128,
    )?;
    let len_xrbar_m = reconcile(
        "len_xrbar_m",
        g - e + 1,
        xrbar.length_between(&m).unwrap() as i128,
    )?;
    let len_ker_phi = reconcile(
        "len_ker_phi",
        nu * n - len_m_xc as i128,
        nu * n - len_m_xc as i128,
    )?;
    // e(c) = c(S) must agree with the two-step length sum.
    let e_c = reconcile("e_c", c, (len_xrbar_m + len_m_xc) as i128)?;

    Ok(BookkeepingReport {
        len_m_xc,
        len_xrbar_m,
        len_ker_phi,
        e_c,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DimdClass {
    FullMonoid,
    Ordinary,
    None,
}

/// Equality structure of the dimd and lech bounds, with the predicted
/// characterizations re-checked; a counterexample surfaces in `flagged`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EqualityAnalysis {
    pub dimd_equality: bool,
    pub dimd_class: DimdClass,
    pub lech_equality: bool,
    pub lech_k: Option<u64>,
    pub flagged: Vec<InequalityVerdict>,
}

pub fn equality_analysis(s: &NumericalSemigroup) -> EqualityAnalysis {
    let inv = s.invariants();
    let label = &inv.generators;
    let dimd = InequalityVerdict::new(
        "dimd",
        inv.e,
        (inv.nu - 1).saturating_mul(inv.n).saturating_add(1),
        label,
    );
    let lech = InequalityVerdict::new(
        "lech",
        inv.conductor,
        inv.e.saturating_mul(inv.n),
        label,
    );

    let dimd_class = if s.is_full_monoid() {
        DimdClass::FullMonoid
    } else if crate::classify::is_ordinary(s) {
        DimdClass::Ordinary
    } else {
        DimdClass::None
    };
    let (extremal, lech_k) = crate::classify::is_lech_extremal(s);

    let mut flagged = Vec::new();
    if dimd.equality != (dimd_class != DimdClass::None) {
        flagged.push(dimd.clone());
    }
    if lech.equality != extremal {
        flagged.push(lech.clone());
    }

    EqualityAnalysis {
        dimd_equality: dimd.equality,
        dimd_class,
        lech_equality: lech.equality,
        lech_k,
        flagged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sg(gens: &[u64]) -> NumericalSemigroup {
        NumericalSemigroup::from_generators(gens).unwrap()
    }

    fn verdict<'a>(vs: &'a [InequalityVerdict], id: &str) -> &'a InequalityVerdict {
        vs.iter().find(|v| v.check_id == id).unwrap()
    }

    #[test]
    fn fixture_7_9_11_19_bookkeeping_and_wilf() {
        let s = sg(&[7, 9, 11, 19]);
        let bk = ag_bookkeeping(&s).unwrap();
        assert_eq!(bk.len_m_xc, 18);
        assert_eq!(bk.len_xrbar_m, 7);
        assert_eq!(bk.len_ker_phi, 30);
        assert_eq!(bk.e_c, 25);
        let key = ag_key_verdict(s.minimal_generators(), &bk);
        assert!(key.holds && !key.equality);

        let vs = check_all(&s);
        let wilf = verdict(&vs, "wilf");
        assert_eq!((wilf.lhs, wilf.rhs), (25, 48));
        assert!(wilf.holds);
        assert!(vs.iter().all(|v| v.holds));
    }

    #[test]
    fn fixture_7_9_11_13_wilf_values() {
        let s = sg(&[7, 9, 11, 13]);
        let vs = check_all(&s);
        let wilf = verdict(&vs, "wilf");
        assert_eq!((wilf.lhs, wilf.rhs), (20, 32));
        assert!(wilf.holds);
    }

    #[test]
    fn fixture_17_27_29_wilf_values() {
        let s = sg(&[17, 27, 29]);
        let vs = check_all(&s);
        let wilf = verdict(&vs, "wilf");
        assert_eq!((wilf.lhs, wilf.rhs), (158, 222));
        assert!(wilf.holds);
    }

    #[test]
    fn ordinary_genus_four_dimd_equality() {
        let s = sg(&[5, 6, 7, 8, 9]);
        let vs = check_all(&s);
        let dimd = verdict(&vs, "dimd");
        assert_eq!((dimd.lhs, dimd.rhs), (5, 5));
        assert!(dimd.equality);
        let an = equality_analysis(&s);
        assert!(an.dimd_equality);
        assert_eq!(an.dimd_class, DimdClass::Ordinary);
        assert!(an.flagged.is_empty());
    }

    #[test]
    fn two_three_bookkeeping() {
        let s = sg(&[2, 3]);
        let bk = ag_bookkeeping(&s).unwrap();
        assert_eq!(
            bk,
            BookkeepingReport {
                len_m_xc: 2,
                len_xrbar_m: 0,
                len_ker_phi: 0,
                e_c: 2
            }
        );
    }

    #[test]
    fn full_monoid_all_verdicts_hold_and_zero_bookkeeping() {
        let n = NumericalSemigroup::full_monoid();
        let vs = check_all(&n);
        assert_eq!(vs.len(), 7);
        assert!(vs.iter().all(|v| v.holds));
        let bk = ag_bookkeeping(&n).unwrap();
        assert_eq!(
            bk,
            BookkeepingReport {
                len_m_xc: 0,
                len_xrbar_m: 0,
                len_ker_phi: 0,
                e_c: 0
            }
        );
        let an = equality_analysis(&n);
        assert!(an.dimd_equality);
        assert_eq!(an.dimd_class, DimdClass::FullMonoid);
        assert!(an.lech_equality);
        assert_eq!(an.lech_k, Some(0));
    }

    #[test]
    fn equality_analysis_none_class_fixture() {
        let an = equality_analysis(&sg(&[7, 9, 11, 19]));
        assert!(!an.dimd_equality);
        assert_eq!(an.dimd_class, DimdClass::None);
        assert!(!an.lech_equality);
        assert_eq!(an.lech_k, None);
        assert!(an.flagged.is_empty());
    }

    #[test]
    fn csv_row_shape() {
        let s = sg(&[2, 3]);
        let vs = check_all(&s);
        let row = verdict(&vs, "lech").csv_row();
        assert_eq!(row, "lech,2 3,2,2,true,true");
        assert_eq!(VERDICT_CSV_HEADER.split(',').count(), 6);
    }

    #[test]
    fn random_semigroups_bounds_hold_and_bookkeeping_consistent() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xb0b0_0001);
        for _ in 0..300 {
            let mut gens: Vec<u64> = (0..rng.gen_range(2..=5))
                .map(|_| rng.gen_range(2..=40))
                .collect();
            gens.push(gens[0] + 1);
            let s = NumericalSemigroup::from_generators(&gens).unwrap();
            let vs = check_all(&s);
            for v in &vs {
                if v.check_id != "wilf" {
                    assert!(v.holds, "{} fails on {s:?}", v.check_id);
                }
            }
            let bk = ag_bookkeeping(&s).unwrap();
            let inv = s.invariants();
            assert_eq!(bk.e_c, inv.conductor);
            assert_eq!(bk.len_m_xc + bk.len_ker_phi, inv.nu * inv.n);
            assert!(equality_analysis(&s).flagged.is_empty());
        }
    }
}
