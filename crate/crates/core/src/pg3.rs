//! The projective space PG(3,q): canonical points and planes, incidence,
//! spans and deterministic enumeration.
//!
//! Points and planes share one representation: a nonzero 4-vector scaled so
//! that its rightmost nonzero entry is 1. Enumeration order sorts canonical
//! vectors by `x0 + q·x1 + q²·x2 + q³·x3` (last coordinate most significant),
//! and the index of a vector in that order has a closed form, so no lookup
//! table is needed.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::gf::{FieldId, FieldSpec};

pub type Coords = [u16; 4];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Pg3Error {
    #[error("the zero vector is not a projective point")]
    ZeroVector,
    #[error("objects from different fields")]
    FieldMismatch,
    #[error("points are not independent (rank {rank}, need {needed})")]
    Dependent { rank: usize, needed: usize },
    #[error("coordinate {0} out of range")]
    CoordinateOutOfRange(u16),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    field: FieldId,
    coords: Coords,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProjPlane {
    field: FieldId,
    coeffs: Coords,
}

fn enumeration_order(a: &Coords, b: &Coords) -> Ordering {
    a.iter().rev().cmp(b.iter().rev())
}

impl ProjPoint {
    pub fn coords(&self) -> Coords {
        self.coords
    }
}

impl ProjPlane {
    pub fn coeffs(&self) -> Coords {
        self.coeffs
    }
}

impl PartialOrd for ProjPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ProjPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.field.cmp(&other.field).then(enumeration_order(&self.coords, &other.coords))
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}", format_coords(&self.coords))
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_coords(&self.coords))
    }
}

impl fmt::Debug for ProjPlane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "π{}", format_coords(&self.coeffs))
    }
}

impl fmt::Display for ProjPlane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_coords(&self.coeffs))
    }
}

pub fn format_coords(c: &Coords) -> String {
    format!("({},{},{},{})", c[0], c[1], c[2], c[3])
}

/// A line, kept as the sorted indices of its `q+1` points.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjLine {
    field: FieldId,
    points: Vec<usize>,
}

impl ProjLine {
    /// Point indices in enumeration order.
    pub fn point_indices(&self) -> &[usize] {
        &self.points
    }

    /// The two smallest points, which identify the line.
    pub fn base(&self) -> (usize, usize) {
        (self.points[0], self.points[1])
    }

    pub fn contains(&self, index: usize) -> bool {
        self.points.binary_search(&index).is_ok()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// PG(3,q) over a fixed field.
#[derive(Debug, Clone)]
pub struct Pg3 {
    field: FieldSpec,
}

impl Pg3 {
    pub fn new(field: FieldSpec) -> Self {
        Pg3 { field }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn q(&self) -> usize {
        self.field.order() as usize
    }

    /// θ_{3,q} = q³+q²+q+1, the number of points (and of planes).
    pub fn size(&self) -> usize {
        let q = self.q();
        q * q * q + q * q + q + 1
    }

    /// Scales a nonzero vector so its rightmost nonzero entry is 1.
    pub fn normalize(&self, raw: Coords) -> Result<Coords, Pg3Error> {
        let f = &self.field;
        if let Some(&bad) = raw.iter().find(|&&c| u32::from(c) >= f.order()) {
            return Err(Pg3Error::CoordinateOutOfRange(bad));
        }
        let lead = raw.iter().rev().find(|&&c| c != 0).ok_or(Pg3Error::ZeroVector)?;
        let s = f.inv(*lead);
        Ok(raw.map(|c| f.mul(c, s)))
    }

    /// Normalization for vectors already known to be nonzero and in range.
    #[inline]
    pub(crate) fn canon(&self, raw: Coords) -> Coords {
        let f = &self.field;
        let lead = *raw.iter().rev().find(|&&c| c != 0).expect("nonzero vector");
        if lead == 1 {
            return raw;
        }
        let s = f.inv(lead);
        raw.map(|c| f.mul(c, s))
    }

    pub fn point(&self, raw: Coords) -> Result<ProjPoint, Pg3Error> {
        Ok(ProjPoint { field: self.field.id(), coords: self.normalize(raw)? })
    }

    pub fn plane(&self, raw: Coords) -> Result<ProjPlane, Pg3Error> {
        Ok(ProjPlane { field: self.field.id(), coeffs: self.normalize(raw)? })
    }

    fn check_point(&self, p: &ProjPoint) -> Result<(), Pg3Error> {
        (p.field == self.field.id()).then_some(()).ok_or(Pg3Error::FieldMismatch)
    }

    fn check_plane(&self, p: &ProjPlane) -> Result<(), Pg3Error> {
        (p.field == self.field.id()).then_some(()).ok_or(Pg3Error::FieldMismatch)
    }

    /// Position of a canonical vector in enumeration order.
    #[inline]
    pub fn index_of(&self, c: &Coords) -> usize {
        let q = self.q();
        let (a, b, d) = (c[0] as usize, c[1] as usize, c[2] as usize);
        if c[3] != 0 {
            1 + q + q * q + a + q * b + q * q * d
        } else if c[2] != 0 {
            1 + q + a + q * b
        } else if c[1] != 0 {
            1 + a
        } else {
            0
        }
    }

    /// Inverse of [`Pg3::index_of`].
    pub fn coords_at(&self, index: usize) -> Coords {
        let q = self.q();
        let off3 = 1 + q + q * q;
        if index >= off3 {
            let r = index - off3;
            [(r % q) as u16, ((r / q) % q) as u16, (r / (q * q)) as u16, 1]
        } else if index > q {
            let r = index - 1 - q;
            [(r % q) as u16, (r / q) as u16, 1, 0]
        } else if index >= 1 {
            [(index - 1) as u16, 1, 0, 0]
        } else {
            [1, 0, 0, 0]
        }
    }

    pub fn point_index(&self, p: &ProjPoint) -> usize {
        self.index_of(&p.coords)
    }

    pub fn plane_index(&self, p: &ProjPlane) -> usize {
        self.index_of(&p.coeffs)
    }

    pub fn point_at(&self, index: usize) -> ProjPoint {
        ProjPoint { field: self.field.id(), coords: self.coords_at(index) }
    }

    pub fn plane_at(&self, index: usize) -> ProjPlane {
        ProjPlane { field: self.field.id(), coeffs: self.coords_at(index) }
    }

    pub fn enumerate_points(&self) -> Vec<ProjPoint> {
        (0..self.size()).map(|i| self.point_at(i)).collect()
    }

    pub fn enumerate_planes(&self) -> Vec<ProjPlane> {
        (0..self.size()).map(|i| self.plane_at(i)).collect()
    }

    #[inline]
    pub fn dot(&self, a: &Coords, b: &Coords) -> u16 {
        let f = &self.field;
        let mut s = 0;
        for k in 0..4 {
            s = f.add(s, f.mul(a[k], b[k]));
        }
        s
    }

    pub fn incident(&self, p: &ProjPoint, pi: &ProjPlane) -> Result<bool, Pg3Error> {
        self.check_point(p)?;
        self.check_plane(pi)?;
        Ok(self.dot(&p.coords, &pi.coeffs) == 0)
    }

    /// Reduces `rows` in place to reduced row echelon form and returns the
    /// pivot columns.
    pub fn row_reduce(&self, rows: &mut Vec<Coords>) -> Vec<usize> {
        let f = &self.field;
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..4 {
            let Some(sel) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
                continue;
            };
            rows.swap(r, sel);
            let s = f.inv(rows[r][col]);
            rows[r] = rows[r].map(|c| f.mul(c, s));
            for i in 0..rows.len() {
                if i != r && rows[i][col] != 0 {
                    let m = rows[i][col];
                    let pivot_row = rows[r];
                    for k in 0..4 {
                        rows[i][k] = f.sub(rows[i][k], f.mul(m, pivot_row[k]));
                    }
                }
            }
            pivots.push(col);
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        rows.truncate(r);
        pivots
    }

    pub fn rank(&self, rows: &[Coords]) -> usize {
        let mut m = rows.to_vec();
        self.row_reduce(&mut m).len()
    }

    /// A basis of `{x : row·x = 0 for every row}`.
    pub fn null_space(&self, rows: &[Coords]) -> Vec<Coords> {
        let f = &self.field;
        let mut m = rows.to_vec();
        let pivots = self.row_reduce(&mut m);
        (0..4)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v = [0u16; 4];
                v[free] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(m[r][free]);
                }
                v
            })
            .collect()
    }

    /// Canonical vectors of every projective point in the span of
    /// `basis` (assumed independent), in no particular order.
    pub fn span(&self, basis: &[Coords]) -> Vec<Coords> {
        let f = &self.field;
        let q = self.q();
        let k = basis.len();
        let mut out = Vec::new();
        let mut coef = vec![0u16; k];
        for lead in 0..k {
            for combo in 0..q.pow(lead as u32) {
                let mut c = combo;
                for slot in coef.iter_mut().take(lead) {
                    *slot = (c % q) as u16;
                    c /= q;
                }
                coef[lead] = 1;
                for slot in coef.iter_mut().skip(lead + 1) {
                    *slot = 0;
                }
                let mut v = [0u16; 4];
                for (b, &a) in basis.iter().zip(&coef) {
                    if a != 0 {
                        for t in 0..4 {
                            v[t] = f.add(v[t], f.mul(a, b[t]));
                        }
                    }
                }
                out.push(self.canon(v));
            }
        }
        out
    }

    /// Indices of the `q²+q+1` points of a plane, sorted.
    pub fn points_on_plane(&self, plane: &Coords) -> Vec<usize> {
        let basis = self.null_space(&[*plane]);
        let mut idx: Vec<usize> = self.span(&basis).iter().map(|c| self.index_of(c)).collect();
        idx.sort_unstable();
        idx
    }

    pub fn plane_through(&self, p1: &ProjPoint, p2: &ProjPoint, p3: &ProjPoint) -> Result<ProjPlane, Pg3Error> {
        for p in [p1, p2, p3] {
            self.check_point(p)?;
        }
        let rows = [p1.coords, p2.coords, p3.coords];
        let ns = self.null_space(&rows);
        if ns.len() != 1 {
            return Err(Pg3Error::Dependent { rank: 4 - ns.len(), needed: 3 });
        }
        self.plane(ns[0])
    }

    pub(crate) fn line_from_coords(&self, a: &Coords, b: &Coords) -> Result<ProjLine, Pg3Error> {
        let r = self.rank(&[*a, *b]);
        if r != 2 {
            return Err(Pg3Error::Dependent { rank: r, needed: 2 });
        }
        let mut points: Vec<usize> = self.span(&[*a, *b]).iter().map(|c| self.index_of(c)).collect();
        points.sort_unstable();
        Ok(ProjLine { field: self.field.id(), points })
    }

    pub fn line_through(&self, p1: &ProjPoint, p2: &ProjPoint) -> Result<ProjLine, Pg3Error> {
        self.check_point(p1)?;
        self.check_point(p2)?;
        self.line_from_coords(&p1.coords, &p2.coords)
    }

    /// Plane indices of the `q+1` planes containing `line`, sorted.
    pub fn plane_indices_through_line(&self, line: &ProjLine) -> Vec<usize> {
        let (a, b) = line.base();
        let basis = self.null_space(&[self.coords_at(a), self.coords_at(b)]);
        let mut idx: Vec<usize> = self.span(&basis).iter().map(|c| self.index_of(c)).collect();
        idx.sort_unstable();
        idx
    }

    pub fn planes_through_line(&self, line: &ProjLine) -> Result<Vec<ProjPlane>, Pg3Error> {
        if line.field != self.field.id() {
            return Err(Pg3Error::FieldMismatch);
        }
        Ok(self.plane_indices_through_line(line).into_iter().map(|i| self.plane_at(i)).collect())
    }
}
