//! Lower bound for the continuous analytic capacity of the Cantor square
//! `C = C(1/3) × C(1/3)`.
//!
//! The natural self-similar probability measure `μ` on `C` has growth
//! `μ(B(x, r)) <= C_F r^d`, `d = log₃4`. Summing over triadic annuli bounds
//! its Cauchy potential by `B = 3 C_F / (1 - 3^(1-d)) + 1 = 12 C_F + 1`, so the
//! normalized Cauchy transform of `μ` is admissible with `|f'(∞)| = 1/B`.

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::enclosure::{Enclosure, EnclosureJson, Precision};
use crate::error::{Error, Result};
use crate::geometry::{cantor_interval, TriadicInterval};
use crate::rational::{from_pair as unpair, int, inv_pow3, pow_u, rat, to_pair as pair, Pair, Rational};

/// How the Frostman constant is obtained from cell counting.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrostmanScheme {
    /// A disk of radius `r < 3^-k` meets at most `3 × 3` level-`k` grid cells.
    #[default]
    Crude,
    /// Of those `3 × 3` cells at most `2 × 2` belong to the Cantor square,
    /// since no two level-`k` Cantor intervals are adjacent.
    Refined,
}

impl FrostmanScheme {
    /// Grid cells a disk can meet.
    pub fn cell_count(self) -> u32 {
        match self {
            FrostmanScheme::Crude => 9,
            FrostmanScheme::Refined => 4,
        }
    }
}

impl std::str::FromStr for FrostmanScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "crude" => Ok(FrostmanScheme::Crude),
            "refined" => Ok(FrostmanScheme::Refined),
            other => Err(Error::Parse(format!("unknown Frostman scheme {other:?}"))),
        }
    }
}

/// The uniform self-similar measure on the Cantor square: four similitudes
/// of ratio 1/3 fixing the corners of the unit square, weight 1/4 each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfSimilarMeasure {
    dimension: Enclosure,
}

impl SelfSimilarMeasure {
    pub fn new(prec: Precision) -> Self {
        SelfSimilarMeasure { dimension: dimension(prec) }
    }

    pub fn ratio(&self) -> Rational {
        rat(1, 3)
    }

    pub fn weight(&self) -> Rational {
        rat(1, 4)
    }

    /// Fixed points of the four maps.
    pub fn fixed_points(&self) -> [(Rational, Rational); 4] {
        [(int(0), int(0)), (int(1), int(0)), (int(0), int(1)), (int(1), int(1))]
    }

    pub fn dimension(&self) -> &Enclosure {
        &self.dimension
    }

    pub fn total_mass(&self) -> Rational {
        Rational::one()
    }

    /// `μ` of a level-`k` cell: `4^-k`.
    pub fn cell_mass(&self, level: u32) -> Rational {
        pow_u(&rat(1, 4), level)
    }

    /// The level-`k` cell `I_k^i × I_k^j`.
    pub fn cell(&self, level: u32, ix: u64, iy: u64) -> Result<(TriadicInterval, TriadicInterval)> {
        Ok((cantor_interval(level, ix)?, cantor_interval(level, iy)?))
    }
}

/// `d = ln 4 / ln 3`.
pub fn dimension(prec: Precision) -> Enclosure {
    let w = prec.working();
    Enclosure::ln2(w).scale(&int(2), w).div(&Enclosure::ln3(w), w).expect("ln 3 > 0").round(prec)
}

/// `C_F` with `μ(B(x, r)) <= C_F r^d` for `r <= 1`: cell count times the
/// per-cell factor `4^-k <= 4 r^d` (when `3^(-k-1) <= r < 3^-k`).
pub fn frostman_constant(scheme: FrostmanScheme) -> Enclosure {
    Enclosure::exact(int(4 * scheme.cell_count() as i64))
}

/// `3^(1-d)`, which is exactly `3/4`.
pub fn annulus_ratio() -> Rational {
    rat(3, 4)
}

/// Bound on `sup_z ∫ dμ(w)/|z-w|`: the annulus `3^(-n-1) <= |z-w| < 3^-n`
/// contributes at most `3^(n+1) C_F 3^(-nd)`, and `|z-w| >= 1` at most `μ(C) = 1`.
pub fn potential_sup_bound(scheme: FrostmanScheme) -> Enclosure {
    let cf = frostman_constant(scheme);
    let geometric = Rational::one() / (Rational::one() - annulus_ratio());
    let near = cf.hi() * int(3) * geometric;
    Enclosure::exact(near + Rational::one())
}

/// Citation for a fact the numeric chain relies on but does not verify.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Assumption {
    pub id: String,
    pub statement: String,
    pub citation: String,
}

impl Assumption {
    pub fn new(id: &str, statement: &str, citation: &str) -> Self {
        Assumption { id: id.into(), statement: statement.into(), citation: citation.into() }
    }
}

/// Facts assumed by [`alpha_lower_bound`].
pub fn capacity_assumptions() -> Vec<Assumption> {
    vec![
        Assumption::new(
            "frostman-growth",
            "The uniform self-similar measure on C(1/3)×C(1/3) gives mass 4^-k to each level-k cell.",
            "Hutchinson, Fractals and self-similarity, Indiana Univ. Math. J. 30 (1981)",
        ),
        Assumption::new(
            "cauchy-potential-continuity",
            "If μ(B(x,r)) <= C r^d with d > 1, the Cauchy transform of μ is continuous on the plane and analytic off supp μ.",
            "Garnett, Analytic capacity and measure, LNM 297 (1972), Ch. III",
        ),
        Assumption::new(
            "capacity-definition",
            "α(F) >= |f'(∞)| for every continuous f on the plane, analytic off F, with |f| <= 1; for f = (Cauchy transform of μ)/B, f'(∞) = μ(F)/B.",
            "Vitushkin, The analytic capacity of sets in problems of approximation theory, Russian Math. Surveys 22 (1967)",
        ),
    ]
}

/// Record of how [`CapacityLB`] was derived.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CapacityDerivation {
    pub scheme: FrostmanScheme,
    pub dimension: Enclosure,
    pub cells_per_disk: u32,
    pub cell_mass_factor: Rational,
    pub frostman_constant: Enclosure,
    pub annulus_ratio: Rational,
    pub annulus_factor: Rational,
    pub far_field: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CapacityLB {
    pub value: Enclosure,
    pub potential_bound: Enclosure,
    pub derivation: CapacityDerivation,
    pub assumptions: Vec<Assumption>,
}

/// `L = 1/B`: the lower end of the returned enclosure is `1 / B.hi`.
pub fn alpha_lower_bound(scheme: FrostmanScheme, prec: Precision) -> Result<CapacityLB> {
    let d = dimension(prec);
    if d.lo() <= &Rational::one() {
        return Err(Error::Inconclusive { link: "d > 1".into(), bits: prec.get() });
    }
    let b = potential_sup_bound(scheme);
    if b.lo() <= &Rational::zero() {
        return Err(Error::Domain("potential bound must be positive".into()));
    }
    let value = Enclosure::new(Rational::one() / b.hi(), Rational::one() / b.lo())?;
    Ok(CapacityLB {
        value,
        potential_bound: b,
        derivation: CapacityDerivation {
            scheme,
            dimension: d,
            cells_per_disk: scheme.cell_count(),
            cell_mass_factor: int(4),
            frostman_constant: frostman_constant(scheme),
            annulus_ratio: annulus_ratio(),
            annulus_factor: int(3),
            far_field: Rational::one(),
        },
        assumptions: capacity_assumptions(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapacityDerivationJson {
    pub scheme: FrostmanScheme,
    pub dimension: EnclosureJson,
    pub cells_per_disk: u32,
    pub cell_mass_factor: Pair,
    pub frostman_constant: EnclosureJson,
    pub annulus_ratio: Pair,
    pub annulus_factor: Pair,
    pub far_field: Pair,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapacityLBJson {
    pub value: EnclosureJson,
    pub potential_bound: EnclosureJson,
    pub derivation: CapacityDerivationJson,
    pub assumptions: Vec<Assumption>,
}

impl CapacityLB {
    pub fn to_json(&self, prec: Precision) -> CapacityLBJson {
        let d = &self.derivation;
        CapacityLBJson {
            value: self.value.to_json(prec),
            potential_bound: self.potential_bound.to_json(prec),
            derivation: CapacityDerivationJson {
                scheme: d.scheme,
                dimension: d.dimension.to_json(prec),
                cells_per_disk: d.cells_per_disk,
                cell_mass_factor: pair(&d.cell_mass_factor),
                frostman_constant: d.frostman_constant.to_json(prec),
                annulus_ratio: pair(&d.annulus_ratio),
                annulus_factor: pair(&d.annulus_factor),
                far_field: pair(&d.far_field),
            },
            assumptions: self.assumptions.clone(),
        }
    }
}

impl CapacityLBJson {
    /// Re-derive the bound from the recorded scheme and check every stored
    /// quantity against the recomputation. Returns the recomputed bound.
    pub fn replay(&self, prec: Precision) -> Result<CapacityLB> {
        let fresh = alpha_lower_bound(self.derivation.scheme, prec)?;
        let d = &self.derivation;
        let mismatch = |what: &str| Err(Error::Schema(format!("capacity derivation: {what} does not replay")));
        if d.cells_per_disk != fresh.derivation.cells_per_disk {
            return mismatch("cells_per_disk");
        }
        for (stored, want, name) in [
            (&d.cell_mass_factor, &fresh.derivation.cell_mass_factor, "cell_mass_factor"),
            (&d.annulus_ratio, &fresh.derivation.annulus_ratio, "annulus_ratio"),
            (&d.annulus_factor, &fresh.derivation.annulus_factor, "annulus_factor"),
            (&d.far_field, &fresh.derivation.far_field, "far_field"),
        ] {
            if &unpair(stored)? != want {
                return mismatch(name);
            }
        }
        for (stored, want, name) in [
            (&d.frostman_constant, &fresh.derivation.frostman_constant, "frostman_constant"),
            (&self.potential_bound, &fresh.potential_bound, "potential_bound"),
        ] {
            if &stored.parse()? != want {
                return mismatch(name);
            }
        }
        // a lower bound may be stored loosely, never above what the derivation gives
        let stored_value = self.value.parse()?;
        if stored_value.lo() > fresh.value.lo() {
            return mismatch("value");
        }
        Ok(fresh)
    }
}

/// Level `k` with `3^(-k-1) <= r < 3^-k`, for `0 < r <= 1`.
pub fn annulus_level(r: &Rational) -> Option<u32> {
    if r <= &Rational::zero() || r > &Rational::one() {
        return None;
    }
    let mut k = 0;
    while r < &inv_pow3(k + 1) {
        k += 1;
    }
    Some(k)
}
