//! Configuration types: the ordered tuples `(a,b)` and `(a,b,x,y)` of
//! distinct vertices, their classification into the five split patterns
//! `t1..t5` with the refinements `phi1..phi4`, and membership in the sets
//! `S(d)` (some pattern holds) and `S'(d)` (some refinement holds).
//!
//! A 4-configuration `(a,b,x,y)` reads: loose path from `a` to `b` omitting
//! `x` and `y`. Patterns are evaluated per split coordinate and per `(x,y)`
//! order, with values compared only for equality, so the reported
//! assignments are constant on symmetry orbits.

use alloc::vec::Vec;
use core::fmt;

use crate::cube::{CubeError, TritVector};

/// Errors from configuration construction and classification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConfigError {
    Cube(CubeError),
    /// The tuple has repeated vertices.
    NotDistinct,
    /// Operation defined only for 4-configurations.
    NotAQuad,
    /// The penultimate row is not one of the 14 normalised patterns.
    InvalidRow([u8; 4]),
    /// The configuration has fewer than two coordinates.
    DimTooSmall(usize),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Cube(e) => write!(f, "{e}"),
            ConfigError::NotDistinct => write!(f, "configuration vertices are not distinct"),
            ConfigError::NotAQuad => write!(f, "operation requires a 4-vertex configuration"),
            ConfigError::InvalidRow(r) => write!(
                f,
                "row {}{}{}{} is not a valid normalised penultimate row",
                r[0], r[1], r[2], r[3]
            ),
            ConfigError::DimTooSmall(d) => write!(f, "dimension {d} too small"),
        }
    }
}

impl core::error::Error for ConfigError {}

impl From<CubeError> for ConfigError {
    fn from(e: CubeError) -> Self {
        ConfigError::Cube(e)
    }
}

/// An ordered tuple of 2 or 4 pairwise distinct vertices of equal dimension.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration {
    verts: Vec<TritVector>,
}

impl Configuration {
    /// Two-vertex configuration `(a, b)`.
    pub fn pair(a: TritVector, b: TritVector) -> Result<Self, ConfigError> {
        Self::from_vertices(alloc::vec![a, b])
    }

    /// Four-vertex configuration `(a, b, x, y)`.
    pub fn quad(
        a: TritVector,
        b: TritVector,
        x: TritVector,
        y: TritVector,
    ) -> Result<Self, ConfigError> {
        Self::from_vertices(alloc::vec![a, b, x, y])
    }

    fn from_vertices(verts: Vec<TritVector>) -> Result<Self, ConfigError> {
        debug_assert!(verts.len() == 2 || verts.len() == 4);
        let d = verts[0].dim();
        for v in &verts {
            if v.dim() != d {
                return Err(ConfigError::Cube(CubeError::DimMismatch(d, v.dim())));
            }
        }
        for i in 0..verts.len() {
            for j in (i + 1)..verts.len() {
                if verts[i] == verts[j] {
                    return Err(ConfigError::NotDistinct);
                }
            }
        }
        Ok(Configuration { verts })
    }

    pub fn vertices(&self) -> &[TritVector] {
        &self.verts
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.verts[0].dim()
    }

    pub fn a(&self) -> &TritVector {
        &self.verts[0]
    }

    pub fn b(&self) -> &TritVector {
        &self.verts[1]
    }

    /// First omitted vertex (4-configurations).
    pub fn x(&self) -> Result<&TritVector, ConfigError> {
        self.verts.get(2).ok_or(ConfigError::NotAQuad)
    }

    /// Second omitted vertex (4-configurations).
    pub fn y(&self) -> Result<&TritVector, ConfigError> {
        self.verts.get(3).ok_or(ConfigError::NotAQuad)
    }

    /// Copy with the omitted vertices `x, y` swapped.
    pub fn swap_xy(&self) -> Result<Self, ConfigError> {
        if self.verts.len() != 4 {
            return Err(ConfigError::NotAQuad);
        }
        let mut verts = self.verts.clone();
        verts.swap(2, 3);
        Ok(Configuration { verts })
    }

    /// Copy with the endpoints `a, b` swapped.
    pub fn swap_ab(&self) -> Self {
        let mut verts = self.verts.clone();
        verts.swap(0, 1);
        Configuration { verts }
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.verts.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The five split patterns of a 4-configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BaseType {
    T1,
    T2,
    T3,
    T4,
    T5,
}

impl fmt::Display for BaseType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self {
            BaseType::T1 => 1,
            BaseType::T2 => 2,
            BaseType::T3 => 3,
            BaseType::T4 => 4,
            BaseType::T5 => 5,
        };
        write!(f, "t{k}")
    }
}

/// The four refinements; each is tied to base types as `phi1<->t1`,
/// `phi2<->t2 or t5`, `phi3<->t3`, `phi4<->t4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Phi {
    Phi1,
    Phi2,
    Phi3,
    Phi4,
}

impl fmt::Display for Phi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self {
            Phi::Phi1 => 1,
            Phi::Phi2 => 2,
            Phi::Phi3 => 3,
            Phi::Phi4 => 4,
        };
        write!(f, "{k}")
    }
}

/// One way a configuration matches a pattern: base type, 1-based split
/// coordinate, whether `x` and `y` were swapped, and the refinement when its
/// agreement condition holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypeAssignment {
    pub base: BaseType,
    pub split_coordinate: usize,
    pub xy_swapped: bool,
    pub phi: Option<Phi>,
}

impl fmt::Display for TypeAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} i={} swap={} phi=",
            self.base,
            self.split_coordinate,
            if self.xy_swapped { 1 } else { 0 },
        )?;
        match self.phi {
            Some(p) => write!(f, "{p}"),
            None => write!(f, "-"),
        }
    }
}

// u differs from each of the others in some coordinate != skip (0-based):
// the "does not share a lifting edge" condition of t1/t2/t4/t5.
fn off_split_distinct(u: &TritVector, others: [&TritVector; 3], skip: usize) -> bool {
    let d = u.dim();
    others.iter().all(|o| (0..d).any(|k| k != skip && u.trits()[k] != o.trits()[k]))
}

fn all_distinct3(a: u8, b: u8, c: u8) -> bool {
    a != b && b != c && a != c
}

// whether (a,b,x,y) matches `base` at 0-based split coordinate k, values
// compared for equality only
fn matches_base(
    base: BaseType,
    a: &TritVector,
    b: &TritVector,
    x: &TritVector,
    y: &TritVector,
    k: usize,
) -> bool {
    let (ta, tb, tx, ty) =
        (a.trits()[k], b.trits()[k], x.trits()[k], y.trits()[k]);
    match base {
        BaseType::T1 => ta == tx && all_distinct3(ta, tb, ty) && off_split_distinct(a, [b, x, y], k),
        BaseType::T2 => ta == tb && all_distinct3(ta, tx, ty) && off_split_distinct(a, [b, x, y], k),
        BaseType::T3 => ta == tx && tb == ty && ta != tb,
        BaseType::T4 => tb == tx && all_distinct3(ta, tb, ty) && off_split_distinct(b, [a, x, y], k),
        BaseType::T5 => ta == tb && all_distinct3(ta, tx, ty) && off_split_distinct(b, [a, x, y], k),
    }
}

// the refinement's agreement condition, evaluated off the 0-based split
// coordinate k
fn phi_holds(
    base: BaseType,
    a: &TritVector,
    b: &TritVector,
    x: &TritVector,
    y: &TritVector,
    k: usize,
) -> Option<Phi> {
    let d = a.dim();
    let agree_somewhere = |u: &TritVector, vs: [&TritVector; 3]| {
        (0..d).any(|j| j != k && vs.iter().any(|v| u.trits()[j] == v.trits()[j]))
    };
    let agreements = |u: &TritVector, v: &TritVector| {
        (0..d).filter(|&j| j != k && u.trits()[j] == v.trits()[j]).count()
    };
    match base {
        BaseType::T1 => agree_somewhere(b, [a, x, y]).then_some(Phi::Phi1),
        BaseType::T2 | BaseType::T5 => {
            let two = [a, b]
                .iter()
                .any(|u| [x, y].iter().any(|v| agreements(u, v) >= 2));
            two.then_some(Phi::Phi2)
        }
        BaseType::T3 => {
            let holds = (0..d).any(|j| {
                j != k && (a.trits()[j] == y.trits()[j] || b.trits()[j] == x.trits()[j])
            });
            holds.then_some(Phi::Phi3)
        }
        BaseType::T4 => agree_somewhere(a, [b, x, y]).then_some(Phi::Phi4),
    }
}

const ALL_BASES: [BaseType; 5] =
    [BaseType::T1, BaseType::T2, BaseType::T3, BaseType::T4, BaseType::T5];

/// Every `(base, split, xy-order)` assignment the configuration satisfies,
/// with the refinement attached when its agreement condition holds.
///
/// For the patterns that are insensitive to the `x,y` order (`t2`, `t5`) the
/// swapped variant is suppressed to avoid duplicate reports.
pub fn classify(c: &Configuration) -> Result<Vec<TypeAssignment>, ConfigError> {
    if c.len() != 4 {
        return Err(ConfigError::NotAQuad);
    }
    let d = c.dim();
    let (a, b) = (c.a(), c.b());
    let mut out = Vec::new();
    for i in 1..=d {
        let k = i - 1;
        for swapped in [false, true] {
            let (x, y) = if swapped {
                (c.y()?, c.x()?)
            } else {
                (c.x()?, c.y()?)
            };
            for base in ALL_BASES {
                if swapped && matches!(base, BaseType::T2 | BaseType::T5) {
                    continue;
                }
                if matches_base(base, a, b, x, y, k) {
                    out.push(TypeAssignment {
                        base,
                        split_coordinate: i,
                        xy_swapped: swapped,
                        phi: phi_holds(base, a, b, x, y, k),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Whether the configuration matches `base` at the 1-based split coordinate
/// `i`, with `x` and `y` optionally swapped (pattern and lifting-edge
/// condition, values compared for equality only).
pub fn pattern_holds(
    c: &Configuration,
    base: BaseType,
    i: usize,
    swapped: bool,
) -> Result<bool, ConfigError> {
    if c.len() != 4 {
        return Err(ConfigError::NotAQuad);
    }
    if i == 0 || i > c.dim() {
        return Err(ConfigError::Cube(CubeError::CoordOutOfRange { coord: i, dim: c.dim() }));
    }
    let (x, y) = if swapped { (c.y()?, c.x()?) } else { (c.x()?, c.y()?) };
    Ok(matches_base(base, c.a(), c.b(), x, y, i - 1))
}

/// Membership in `S(d)`: some pattern holds at some split.
pub fn in_s(c: &Configuration) -> Result<bool, ConfigError> {
    Ok(!classify(c)?.is_empty())
}

/// Membership in `S'(d)`: some assignment carries a refinement.
pub fn in_sprime(c: &Configuration) -> Result<bool, ConfigError> {
    Ok(classify(c)?.iter().any(|t| t.phi.is_some()))
}

/// The 14 normalised penultimate-row patterns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PenultimateRow {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
    R9,
    R10,
    R11,
    R12,
    R13,
    R14,
}

pub const ALL_ROWS: [PenultimateRow; 14] = [
    PenultimateRow::R1,
    PenultimateRow::R2,
    PenultimateRow::R3,
    PenultimateRow::R4,
    PenultimateRow::R5,
    PenultimateRow::R6,
    PenultimateRow::R7,
    PenultimateRow::R8,
    PenultimateRow::R9,
    PenultimateRow::R10,
    PenultimateRow::R11,
    PenultimateRow::R12,
    PenultimateRow::R13,
    PenultimateRow::R14,
];

impl PenultimateRow {
    /// The row values `(a,b,x,y)` at the penultimate coordinate.
    pub fn pattern(self) -> [u8; 4] {
        match self {
            PenultimateRow::R1 => [0, 0, 0, 0],
            PenultimateRow::R2 => [0, 0, 0, 1],
            PenultimateRow::R3 => [0, 0, 1, 0],
            PenultimateRow::R4 => [0, 0, 1, 1],
            PenultimateRow::R5 => [0, 0, 1, 2],
            PenultimateRow::R6 => [0, 1, 0, 0],
            PenultimateRow::R7 => [0, 1, 0, 1],
            PenultimateRow::R8 => [0, 1, 0, 2],
            PenultimateRow::R9 => [0, 1, 1, 0],
            PenultimateRow::R10 => [0, 1, 1, 1],
            PenultimateRow::R11 => [0, 1, 1, 2],
            PenultimateRow::R12 => [0, 1, 2, 0],
            PenultimateRow::R13 => [0, 1, 2, 1],
            PenultimateRow::R14 => [0, 1, 2, 2],
        }
    }

    pub fn from_pattern(row: [u8; 4]) -> Result<Self, ConfigError> {
        ALL_ROWS
            .into_iter()
            .find(|r| r.pattern() == row)
            .ok_or(ConfigError::InvalidRow(row))
    }
}

impl fmt::Display for PenultimateRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = ALL_ROWS.iter().position(|r| r == self).unwrap() + 1;
        write!(f, "r{k}")
    }
}

/// Reads row `d-1` of a 4-configuration already split at the last coordinate
/// and matches it against the 14 normalised patterns.
pub fn penultimate_row(c: &Configuration) -> Result<PenultimateRow, ConfigError> {
    if c.len() != 4 {
        return Err(ConfigError::NotAQuad);
    }
    let d = c.dim();
    if d < 2 {
        return Err(ConfigError::DimTooSmall(d));
    }
    let k = d - 2;
    let row = [
        c.a().trits()[k],
        c.b().trits()[k],
        c.x()?.trits()[k],
        c.y()?.trits()[k],
    ];
    PenultimateRow::from_pattern(row)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;
    use alloc::string::ToString;

    fn v(s: &str) -> TritVector {
        s.parse().unwrap()
    }

    fn quad(a: &str, b: &str, x: &str, y: &str) -> Configuration {
        Configuration::quad(v(a), v(b), v(x), v(y)).unwrap()
    }

    /// The four uncovered matrices in column (vertex) form.
    pub(crate) fn matrix_a() -> Configuration {
        quad("0000", "1111", "1122", "2211")
    }
    pub(crate) fn matrix_b() -> Configuration {
        quad("0000", "1111", "0022", "2200")
    }
    pub(crate) fn matrix_c() -> Configuration {
        quad("0000", "0001", "1110", "2221")
    }
    pub(crate) fn matrix_d() -> Configuration {
        quad("0000", "0011", "1100", "1111")
    }

    fn base_types(c: &Configuration) -> BTreeSet<BaseType> {
        classify(c).unwrap().into_iter().map(|t| t.base).collect()
    }

    #[test]
    fn distinctness_enforced() {
        assert!(Configuration::quad(v("00"), v("00"), v("01"), v("02")).is_err());
        assert!(Configuration::pair(v("01"), v("01")).is_err());
    }

    #[test]
    fn fixture_a_is_t4_only_without_phi() {
        let a = matrix_a();
        let ts = classify(&a).unwrap();
        assert!(!ts.is_empty());
        assert!(ts.iter().all(|t| t.base == BaseType::T4));
        assert!(ts.iter().all(|t| t.phi.is_none()));
        // the t4 pattern holds at every coordinate, the x,y order flipping
        // between the first two and last two
        for (i, swapped) in [(1, false), (2, false), (3, true), (4, true)] {
            assert!(ts.iter().any(|t| t.split_coordinate == i && t.xy_swapped == swapped));
        }
        assert!(in_s(&a).unwrap());
        assert!(!in_sprime(&a).unwrap());
    }

    #[test]
    fn fixture_b_is_t1_only() {
        let b = matrix_b();
        assert_eq!(base_types(&b), BTreeSet::from([BaseType::T1]));
        assert!(!in_sprime(&b).unwrap());
    }

    #[test]
    fn fixture_d_is_t3_only() {
        let d = matrix_d();
        assert_eq!(base_types(&d), BTreeSet::from([BaseType::T3]));
        assert!(!in_sprime(&d).unwrap());
    }

    #[test]
    fn fixture_c_types_by_split() {
        let c = matrix_c();
        let ts = classify(&c).unwrap();
        // t3 exactly at the last coordinate, t2 and t5 at every other one
        for t in &ts {
            match t.base {
                BaseType::T3 => assert_eq!(t.split_coordinate, 4),
                BaseType::T2 | BaseType::T5 => assert_ne!(t.split_coordinate, 4),
                other => panic!("unexpected base {other}"),
            }
            assert!(t.phi.is_none());
        }
        for i in 1..=3 {
            assert!(ts.iter().any(|t| t.base == BaseType::T2 && t.split_coordinate == i));
            assert!(ts.iter().any(|t| t.base == BaseType::T5 && t.split_coordinate == i));
        }
        assert!(ts.iter().any(|t| t.base == BaseType::T3));
        assert!(!in_sprime(&c).unwrap());
    }

    #[test]
    fn t1_t4_and_t2_t5_duality_under_ab_swap() {
        let c = quad("0000", "0001", "1110", "2221");
        let r = c.swap_ab();
        let cs = classify(&c).unwrap();
        let rs = classify(&r).unwrap();
        let dual = |b: BaseType| match b {
            BaseType::T1 => BaseType::T4,
            BaseType::T4 => BaseType::T1,
            BaseType::T2 => BaseType::T5,
            BaseType::T5 => BaseType::T2,
            BaseType::T3 => BaseType::T3,
        };
        let cset: BTreeSet<_> = cs.iter().map(|t| (dual(t.base), t.split_coordinate)).collect();
        let rset: BTreeSet<_> = rs.iter().map(|t| (t.base, t.split_coordinate)).collect();
        assert_eq!(cset, rset);
    }

    #[test]
    fn penultimate_row_fixtures() {
        // rows are read off the configuration's coordinate d-1
        let c = quad("0000", "0001", "1110", "0121");
        // row d-1 of this quad is (0,0,1,2) = r5
        assert_eq!(penultimate_row(&c).unwrap(), PenultimateRow::R5);
        assert_eq!(PenultimateRow::from_pattern([0, 0, 1, 0]).unwrap(), PenultimateRow::R3);
        assert_eq!(PenultimateRow::from_pattern([0, 1, 2, 2]).unwrap(), PenultimateRow::R14);
        assert_eq!(
            PenultimateRow::from_pattern([0, 0, 2, 1]),
            Err(ConfigError::InvalidRow([0, 0, 2, 1]))
        );
        assert_eq!(PenultimateRow::R14.to_string(), "r14");
    }

    #[test]
    fn assignment_display_format() {
        let t = TypeAssignment {
            base: BaseType::T2,
            split_coordinate: 3,
            xy_swapped: false,
            phi: Some(Phi::Phi2),
        };
        assert_eq!(t.to_string(), "t2 i=3 swap=0 phi=2");
        let t = TypeAssignment { phi: None, xy_swapped: true, ..t };
        assert_eq!(t.to_string(), "t2 i=3 swap=1 phi=-");
    }
}
