use crate::error::{Error, Result};
use crate::kinematics::{Rot3, SegmentKind, TurnGeometry};
use crate::linkage::{family_tag, LinkageProblem, MiddleConstraint};
use crate::scalar::Real;

use SegmentKind::{G, L, R};

/// Which families to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CatalogMode {
    /// The proven candidate set for the radius regime.
    #[default]
    Table,
    /// The table plus audit families that are never needed in theory.
    All,
}

/// Distance from a regime boundary within which the adjacent catalogs are merged.
pub const BOUNDARY_BAND: f64 = 1e-12;

/// Largest unit turning radius with a proven candidate set.
pub fn max_radius<T: Real>() -> T {
    T::lit(3.0).sqrt() / T::two()
}

/// A family to solve: the axis pattern plus its interior constraint.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyTemplate<T> {
    pub tag: String,
    pub kinds: Vec<SegmentKind>,
    pub middle: MiddleConstraint<T>,
    /// Fixed-middle patterns win deduplication against free-middle ones.
    pub priority: u8,
}

impl<T: Real> FamilyTemplate<T> {
    fn new(kinds: &[SegmentKind], middle: MiddleConstraint<T>) -> Self {
        let priority = match middle {
            MiddleConstraint::Fixed(_) => 1,
            _ => 0,
        };
        Self {
            tag: family_tag(kinds, &middle),
            kinds: kinds.to_vec(),
            middle,
            priority,
        }
    }

    pub fn problem(&self, target: Rot3<T>, geom: TurnGeometry<T>) -> LinkageProblem<T> {
        LinkageProblem::new(target, self.kinds.clone(), self.middle, false, geom)
            .expect("catalog patterns are valid")
    }

    pub fn is_free_ccc(&self) -> bool {
        self.kinds.len() == 3
            && self.kinds.iter().all(|k| k.is_turn())
            && self.middle == MiddleConstraint::Free
    }

    pub fn is_fixed_pi(&self) -> bool {
        matches!(self.middle, MiddleConstraint::Fixed(_))
    }
}

fn common<T: Real>() -> Vec<FamilyTemplate<T>> {
    let free = MiddleConstraint::Free;
    let patterns: [&[SegmentKind]; 16] = [
        &[],
        &[G],
        &[L],
        &[R],
        &[L, G],
        &[R, G],
        &[G, L],
        &[G, R],
        &[L, R],
        &[R, L],
        &[L, G, L],
        &[L, G, R],
        &[R, G, L],
        &[R, G, R],
        &[L, R, L],
        &[R, L, R],
    ];
    patterns.iter().map(|p| FamilyTemplate::new(p, free)).collect()
}

fn cpc<T: Real>() -> Vec<FamilyTemplate<T>> {
    let pi = MiddleConstraint::Fixed(T::PI());
    vec![FamilyTemplate::new(&[L, R, L], pi), FamilyTemplate::new(&[R, L, R], pi)]
}

fn four<T: Real>() -> Vec<FamilyTemplate<T>> {
    let eq = MiddleConstraint::EqualOffset;
    vec![FamilyTemplate::new(&[L, R, L, R], eq), FamilyTemplate::new(&[R, L, R, L], eq)]
}

fn five<T: Real>() -> Vec<FamilyTemplate<T>> {
    let eq = MiddleConstraint::EqualOffset;
    vec![
        FamilyTemplate::new(&[L, R, L, R, L], eq),
        FamilyTemplate::new(&[R, L, R, L, R], eq),
    ]
}

fn audit<T: Real>() -> Vec<FamilyTemplate<T>> {
    let free = MiddleConstraint::Free;
    let patterns: [&[SegmentKind]; 6] = [
        &[G, L, G],
        &[G, R, G],
        &[G, L, R],
        &[G, R, L],
        &[L, R, G],
        &[R, L, G],
    ];
    patterns.iter().map(|p| FamilyTemplate::new(p, free)).collect()
}

/// Extra families required at `r`: `(four-segment chains, CC_πC and five-segment chains)`.
///
/// Membership uses exact comparisons; a radius within [`BOUNDARY_BAND`] of a
/// boundary without sitting on it receives both neighbouring catalogs.
pub fn regime_extras<T: Real>(r: T) -> (bool, bool) {
    let band = T::lit(BOUNDARY_BAND);
    let half = T::half();
    let crit = T::FRAC_1_SQRT_2();
    let on_boundary = r == half || r == crit;
    let four = !on_boundary && r > half - band;
    let upper = !on_boundary && r > crit - band;
    (four, upper)
}

/// Ordered family list for the radius regime of `r`.
pub fn family_catalog<T: Real>(r: T, mode: CatalogMode) -> Result<Vec<FamilyTemplate<T>>> {
    let mut out = common();
    match mode {
        CatalogMode::Table => {
            if !(r > T::zero()) || r > max_radius::<T>() + T::lit(BOUNDARY_BAND) {
                return Err(Error::RadiusOutOfRange { r: r.to_f64_lossy() });
            }
            let (has_four, has_upper) = regime_extras(r);
            if has_upper {
                out.extend(cpc());
            }
            if has_four {
                out.extend(four());
            }
            if has_upper {
                out.extend(five());
            }
        }
        CatalogMode::All => {
            let (_, has_upper) = regime_extras(r);
            if has_upper {
                out.extend(cpc());
            }
            out.extend(four());
            out.extend(five());
            out.extend(audit());
        }
    }
    Ok(out)
}
