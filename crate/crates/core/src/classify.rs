//! Point and plane classes with respect to the cubic.
//!
//! Classes are computed from their definitions (secant count, osculating
//! count, chord type) and numbered as the orbits `N_1..N_5` and `M_1..M_5`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cubic::{osculating_coeffs, ChordInventory, ChordType, CubicError, OsculatingDevelopable, TwistedCubic};
use crate::gf::{field_of_order, FieldSpec, GfError};
use crate::pg3::{Coords, Pg3, ProjPlane, ProjPoint};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Cubic(#[from] CubicError),
    #[error("point {0} lies on the cubic")]
    OnCurve(String),
    #[error("inconsistent labels at {point}: chord {chord:?}, {osc} osculating planes, q ≡ {xi} (mod 3)")]
    Inconsistent { point: String, chord: ChordType, osc: usize, xi: i32 },
    #[error("{kind} orbit {orbit}: expected {expected} members, found {found}")]
    SizeMismatch { kind: &'static str, orbit: usize, expected: usize, found: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PlaneClass {
    Gamma,
    TwoSec,
    ThreeSec,
    OneSecNonGamma,
    External,
}

impl PlaneClass {
    pub const ALL: [PlaneClass; 5] =
        [PlaneClass::Gamma, PlaneClass::TwoSec, PlaneClass::ThreeSec, PlaneClass::OneSecNonGamma, PlaneClass::External];

    /// Orbit number `i` of `N_i`.
    pub fn orbit(self) -> usize {
        self as usize + 1
    }

    pub fn label(self) -> &'static str {
        match self {
            PlaneClass::Gamma => "Γ-planes",
            PlaneClass::TwoSec => "2_C-planes",
            PlaneClass::ThreeSec => "3_C-planes",
            PlaneClass::OneSecNonGamma => "1_C\\Γ-planes",
            PlaneClass::External => "0_C-planes",
        }
    }

    /// Number of curve points on a plane of this class.
    pub fn secant_count(self) -> usize {
        match self {
            PlaneClass::Gamma | PlaneClass::OneSecNonGamma => 1,
            PlaneClass::TwoSec => 2,
            PlaneClass::ThreeSec => 3,
            PlaneClass::External => 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PointClass {
    OnCubic,
    /// Off-curve point on a tangent, `q ≢ 0 (mod 3)`.
    T,
    /// Off-curve tangent point on one osculating plane, `q ≡ 0 (mod 3)`.
    TO,
    ThreeOsc,
    OneOsc,
    ZeroOsc,
    /// Point of the pencil axis, `q ≡ 0 (mod 3)`.
    AllOsc,
    RC,
    IC,
}

impl PointClass {
    /// Orbit number `j` of `M_j`.
    pub fn orbit(self) -> usize {
        match self {
            PointClass::OnCubic => 1,
            PointClass::T | PointClass::AllOsc => 2,
            PointClass::ThreeOsc | PointClass::TO => 3,
            PointClass::OneOsc | PointClass::RC => 4,
            PointClass::ZeroOsc | PointClass::IC => 5,
        }
    }

    /// The classes in orbit order for a given `ξ`.
    pub fn classes_for(xi: i32) -> [PointClass; 5] {
        use PointClass::*;
        if xi == 0 {
            [OnCubic, AllOsc, TO, RC, IC]
        } else {
            [OnCubic, T, ThreeOsc, OneOsc, ZeroOsc]
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            PointClass::OnCubic => "C-points",
            PointClass::T => "T-points",
            PointClass::TO => "TO-points",
            PointClass::ThreeOsc => "3_Γ-points",
            PointClass::OneOsc => "1_Γ-points",
            PointClass::ZeroOsc => "0_Γ-points",
            PointClass::AllOsc => "(q+1)_Γ-points",
            PointClass::RC => "RC-points",
            PointClass::IC => "IC-points",
        }
    }
}

/// Plane orbit sizes `#N_1..#N_5`.
pub fn expected_plane_sizes(q: usize) -> [usize; 5] {
    let t = q * (q * q - 1);
    [q + 1, q * (q + 1), t / 6, t / 2, t / 3]
}

/// Point orbit sizes `#M_1..#M_5`.
pub fn expected_point_sizes(q: usize, xi: i32) -> [usize; 5] {
    let t = q * (q * q - 1);
    if xi == 0 {
        [q + 1, q + 1, q * q - 1, t / 2, t / 2]
    } else {
        expected_plane_sizes(q)
    }
}

/// The space, the cubic and everything derived from it.
#[derive(Debug, Clone)]
pub struct Geometry {
    space: Pg3,
    cubic: TwistedCubic,
    developable: OsculatingDevelopable,
    chords: ChordInventory,
    osc: Vec<Coords>,
    is_gamma: Vec<bool>,
    xi: i32,
}

impl Geometry {
    pub fn new(field: FieldSpec) -> Result<Self, ClassifyError> {
        let xi = field.xi();
        let space = Pg3::new(field);
        let cubic = TwistedCubic::new(&space);
        let developable = OsculatingDevelopable::new(&space, &cubic)?;
        let chords = ChordInventory::new(&space, &cubic)?;
        let osc = cubic.params().iter().map(|&t| osculating_coeffs(&space, t)).collect();
        let mut is_gamma = vec![false; space.size()];
        for &p in developable.plane_indices() {
            is_gamma[p] = true;
        }
        Ok(Geometry { space, cubic, developable, chords, osc, is_gamma, xi })
    }

    pub fn for_order(q: u64) -> Result<Self, ClassifyError> {
        Self::new(field_of_order(q)?)
    }

    pub fn space(&self) -> &Pg3 {
        &self.space
    }

    pub fn cubic(&self) -> &TwistedCubic {
        &self.cubic
    }

    pub fn developable(&self) -> &OsculatingDevelopable {
        &self.developable
    }

    pub fn chords(&self) -> &ChordInventory {
        &self.chords
    }

    pub fn q(&self) -> usize {
        self.space.q()
    }

    pub fn xi(&self) -> i32 {
        self.xi
    }

    /// Number of curve points on the plane with the given coefficients.
    pub fn curve_hits(&self, plane: &Coords) -> usize {
        self.cubic.point_indices().iter().filter(|&&p| self.space.dot(&self.space.coords_at(p), plane) == 0).count()
    }

    pub fn is_gamma_plane(&self, plane_index: usize) -> bool {
        self.is_gamma[plane_index]
    }

    pub fn classify_plane(&self, plane: &ProjPlane) -> PlaneClass {
        self.plane_class_at(self.space.plane_index(plane))
    }

    pub fn plane_class_at(&self, index: usize) -> PlaneClass {
        if self.is_gamma[index] {
            return PlaneClass::Gamma;
        }
        match self.curve_hits(&self.space.coords_at(index)) {
            0 => PlaneClass::External,
            1 => PlaneClass::OneSecNonGamma,
            2 => PlaneClass::TwoSec,
            _ => PlaneClass::ThreeSec,
        }
    }

    fn osc_count_at(&self, index: usize) -> usize {
        let x = self.space.coords_at(index);
        self.osc.iter().filter(|c| self.space.dot(&x, c) == 0).count()
    }

    /// Number of osculating planes through a point off the cubic.
    pub fn osc_count(&self, point: &ProjPoint) -> Result<usize, ClassifyError> {
        let idx = self.space.point_index(point);
        if self.cubic.contains(idx) {
            return Err(ClassifyError::OnCurve(point.to_string()));
        }
        Ok(self.osc_count_at(idx))
    }

    pub fn classify_point(&self, point: &ProjPoint) -> Result<PointClass, ClassifyError> {
        self.point_class_at(self.space.point_index(point))
    }

    /// Class of the point with the given index. Chord type and osculating
    /// count are both computed and must agree.
    pub fn point_class_at(&self, index: usize) -> Result<PointClass, ClassifyError> {
        let Some(chord) = self.chords.chord_type(index) else {
            return Ok(PointClass::OnCubic);
        };
        let osc = self.osc_count_at(index);
        let q = self.q();
        let class = match (self.xi, chord, osc) {
            (0, ChordType::Tangent, n) if n == q + 1 => Some(PointClass::AllOsc),
            (0, ChordType::Tangent, 1) => Some(PointClass::TO),
            (0, ChordType::RealChord, _) => Some(PointClass::RC),
            (0, ChordType::ImaginaryChord, _) => Some(PointClass::IC),
            (_, ChordType::Tangent, 2) => Some(PointClass::T),
            (1, ChordType::RealChord, 3) | (-1, ChordType::ImaginaryChord, 3) => Some(PointClass::ThreeOsc),
            (1, ChordType::RealChord, 0) | (-1, ChordType::ImaginaryChord, 0) => Some(PointClass::ZeroOsc),
            (1, ChordType::ImaginaryChord, 1) | (-1, ChordType::RealChord, 1) => Some(PointClass::OneOsc),
            _ => None,
        };
        class.ok_or_else(|| ClassifyError::Inconsistent {
            point: self.space.point_at(index).to_string(),
            chord,
            osc,
            xi: self.xi,
        })
    }

    /// Classifies every point and plane and checks the orbit sizes.
    pub fn partition(&self) -> Result<OrbitPartition, ClassifyError> {
        let n = self.space.size();
        let plane_class: Vec<PlaneClass> = (0..n).map(|i| self.plane_class_at(i)).collect();
        let point_class = (0..n).map(|i| self.point_class_at(i)).collect::<Result<Vec<_>, _>>()?;
        let mut plane_orbits: [Vec<usize>; 5] = Default::default();
        let mut point_orbits: [Vec<usize>; 5] = Default::default();
        for i in 0..n {
            plane_orbits[plane_class[i].orbit() - 1].push(i);
            point_orbits[point_class[i].orbit() - 1].push(i);
        }
        let part = OrbitPartition { q: self.q(), xi: self.xi, plane_class, point_class, plane_orbits, point_orbits };
        part.check_sizes()?;
        Ok(part)
    }
}

/// The five plane orbits and five point orbits.
#[derive(Debug, Clone)]
pub struct OrbitPartition {
    q: usize,
    xi: i32,
    plane_class: Vec<PlaneClass>,
    point_class: Vec<PointClass>,
    plane_orbits: [Vec<usize>; 5],
    point_orbits: [Vec<usize>; 5],
}

impl OrbitPartition {
    fn check_sizes(&self) -> Result<(), ClassifyError> {
        let checks = [
            ("plane", expected_plane_sizes(self.q), self.plane_sizes()),
            ("point", expected_point_sizes(self.q, self.xi), self.point_sizes()),
        ];
        for (kind, expected, found) in checks {
            for k in 0..5 {
                if expected[k] != found[k] {
                    return Err(ClassifyError::SizeMismatch {
                        kind,
                        orbit: k + 1,
                        expected: expected[k],
                        found: found[k],
                    });
                }
            }
        }
        Ok(())
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn xi(&self) -> i32 {
        self.xi
    }

    pub fn plane_sizes(&self) -> [usize; 5] {
        std::array::from_fn(|k| self.plane_orbits[k].len())
    }

    pub fn point_sizes(&self) -> [usize; 5] {
        std::array::from_fn(|k| self.point_orbits[k].len())
    }

    /// Plane indices of `N_i`, ascending (`i` in `1..=5`).
    pub fn plane_orbit(&self, i: usize) -> &[usize] {
        &self.plane_orbits[i - 1]
    }

    /// Point indices of `M_j`, ascending (`j` in `1..=5`).
    pub fn point_orbit(&self, j: usize) -> &[usize] {
        &self.point_orbits[j - 1]
    }

    pub fn plane_class(&self, index: usize) -> PlaneClass {
        self.plane_class[index]
    }

    pub fn point_class(&self, index: usize) -> PointClass {
        self.point_class[index]
    }

    /// Orbit number of every plane, by plane index.
    pub fn plane_orbit_of(&self) -> Vec<u8> {
        self.plane_class.iter().map(|c| c.orbit() as u8).collect()
    }

    /// Orbit number of every point, by point index.
    pub fn point_orbit_of(&self) -> Vec<u8> {
        self.point_class.iter().map(|c| c.orbit() as u8).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubic::{tangent_line, Param};

    #[test]
    fn plane_examples() {
        let g = Geometry::for_order(7).unwrap();
        let s = g.space();
        assert_eq!(g.classify_plane(&s.plane([0, 0, 0, 1]).unwrap()), PlaneClass::Gamma);
        assert_eq!(g.classify_plane(&s.plane([1, 4, 2, 0]).unwrap()), PlaneClass::ThreeSec);
        assert_eq!(g.classify_plane(&s.plane([0, 6, 1, 0]).unwrap()), PlaneClass::ThreeSec);
    }

    #[test]
    fn w_point_examples() {
        let g = Geometry::for_order(5).unwrap();
        let w = g.space().point([0, 1, 4, 0]).unwrap();
        assert_eq!(g.osc_count(&w).unwrap(), 3);
        assert_eq!(g.classify_point(&w).unwrap(), PointClass::ThreeOsc);
        let on = g.space().point([1, 0, 0, 0]).unwrap();
        assert!(matches!(g.osc_count(&on), Err(ClassifyError::OnCurve(_))));
    }

    #[test]
    fn tangent_points_are_t_points() {
        let g = Geometry::for_order(7).unwrap();
        let line = tangent_line(g.space(), g.cubic(), Param::Finite(0)).unwrap();
        for &p in line.point_indices().iter().filter(|&&p| !g.cubic().contains(p)) {
            assert_eq!(g.point_class_at(p).unwrap(), PointClass::T);
            assert_eq!(g.osc_count(&g.space().point_at(p)).unwrap(), 2);
        }
    }

    #[test]
    fn axis_points_in_characteristic_3() {
        let g = Geometry::for_order(9).unwrap();
        let axis = g.developable().axis().unwrap();
        for &p in axis.point_indices() {
            assert_eq!(g.point_class_at(p).unwrap(), PointClass::AllOsc);
        }
    }

    #[test]
    fn orbit_sizes() {
        let p7 = Geometry::for_order(7).unwrap().partition().unwrap();
        assert_eq!(p7.point_sizes(), [8, 56, 56, 168, 112]);
        let p9 = Geometry::for_order(9).unwrap().partition().unwrap();
        assert_eq!(p9.point_sizes(), [10, 10, 80, 360, 360]);
        let p5 = Geometry::for_order(5).unwrap().partition().unwrap();
        assert_eq!(p5.plane_sizes(), [6, 30, 20, 60, 40]);
    }

    #[test]
    fn small_orders_partition() {
        for q in [2u64, 3, 4] {
            let g = Geometry::for_order(q).unwrap();
            g.partition().unwrap();
        }
    }
}
