//! The twisted cubic `C = {P(t) : t ∈ F_q ∪ {∞}}`, its osculating planes,
//! tangents and the chord structure of the points off the curve.

use thiserror::Error;

use crate::pg3::{Coords, Pg3, Pg3Error, ProjLine, ProjPlane, ProjPoint};

/// A curve parameter: a field element or the point at infinity.
///
/// Orders finite parameters by field encoding, then `Infinity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Param {
    Finite(u16),
    Infinity,
}

impl std::fmt::Display for Param {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Param::Finite(t) => write!(f, "{t}"),
            Param::Infinity => f.write_str("∞"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CubicError {
    #[error("repeated curve parameter {0}")]
    RepeatedParameter(Param),
    #[error("point {0} lies on the cubic")]
    OnCurve(String),
    #[error("tangent at t = {param} violates one-point contact: {detail}")]
    ContactViolation { param: Param, detail: String },
    #[error("osculating plane at t = {param} meets the cubic in {hits} points")]
    OsculatingContact { param: Param, hits: usize },
    #[error("four coplanar curve points at parameters {0:?}")]
    NotAnArc([Param; 4]),
    #[error("two chords meet off the cubic at {0}")]
    ChordsMeet(String),
    #[error("imaginary chord meets the cubic at {0}")]
    ImaginaryChordMeetsCurve(String),
    #[error("point {0} lies on no chord or tangent")]
    Uncovered(String),
    #[error("{what}: expected {expected}, found {found}")]
    CountMismatch { what: &'static str, expected: usize, found: usize },
    #[error("osculating planes of a characteristic-3 cubic do not share a line external to C")]
    AxisViolation,
    #[error(transparent)]
    Geometry(#[from] Pg3Error),
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// The `q+1` points of the cubic in parameter order.
#[derive(Debug, Clone)]
pub struct TwistedCubic {
    params: Vec<Param>,
    points: Vec<usize>,
    /// point index -> position in `params`
    position: Vec<Option<u32>>,
}

/// Homogeneous coordinates of `P(t)` (already canonical).
pub fn curve_coords(space: &Pg3, t: Param) -> Coords {
    let f = space.field();
    match t {
        Param::Finite(t) => [f.mul(f.mul(t, t), t), f.mul(t, t), t, 1],
        Param::Infinity => [1, 0, 0, 0],
    }
}

impl TwistedCubic {
    pub fn new(space: &Pg3) -> Self {
        let params: Vec<Param> =
            space.field().codes().map(Param::Finite).chain(std::iter::once(Param::Infinity)).collect();
        let points: Vec<usize> = params.iter().map(|&t| space.index_of(&curve_coords(space, t))).collect();
        let mut position = vec![None; space.size()];
        for (k, &p) in points.iter().enumerate() {
            position[p] = Some(k as u32);
        }
        TwistedCubic { params, points, position }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn params(&self) -> &[Param] {
        &self.params
    }

    /// Point indices in parameter order.
    pub fn point_indices(&self) -> &[usize] {
        &self.points
    }

    pub fn points(&self, space: &Pg3) -> Vec<ProjPoint> {
        self.points.iter().map(|&i| space.point_at(i)).collect()
    }

    pub fn contains(&self, point: usize) -> bool {
        self.position[point].is_some()
    }

    /// Position in parameter order of a curve point.
    pub fn position_of(&self, point: usize) -> Option<usize> {
        self.position[point].map(|p| p as usize)
    }

    pub fn param_of(&self, point: usize) -> Option<Param> {
        self.position_of(point).map(|k| self.params[k])
    }

    pub fn point_of(&self, t: Param) -> usize {
        let k = match t {
            Param::Finite(c) => c as usize,
            Param::Infinity => self.params.len() - 1,
        };
        self.points[k]
    }

    /// Checks that no four curve points are coplanar.
    pub fn verify_arc(&self, space: &Pg3) -> Result<(), CubicError> {
        let n = self.len();
        let c: Vec<Coords> = self.points.iter().map(|&i| space.coords_at(i)).collect();
        for a in 0..n {
            for b in a + 1..n {
                for d in b + 1..n {
                    for e in d + 1..n {
                        if space.rank(&[c[a], c[b], c[d], c[e]]) < 4 {
                            let p = self.params.clone();
                            return Err(CubicError::NotAnArc([p[a], p[b], p[d], p[e]]));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// The plane through `P(t1), P(t2), P(t3)`.
///
/// Finite parameters use the closed form `(1, −σ1, σ2, −σ3)` in the
/// elementary symmetric functions; a triple containing `∞` falls back to the
/// generic null-space construction.
pub fn plane_through_params(space: &Pg3, t1: Param, t2: Param, t3: Param) -> Result<ProjPlane, CubicError> {
    if t1 == t2 || t1 == t3 {
        return Err(CubicError::RepeatedParameter(t1));
    }
    if t2 == t3 {
        return Err(CubicError::RepeatedParameter(t2));
    }
    match (t1, t2, t3) {
        (Param::Finite(a), Param::Finite(b), Param::Finite(c)) => {
            let f = space.field();
            let s1 = f.add(f.add(a, b), c);
            let s2 = f.add(f.add(f.mul(a, b), f.mul(a, c)), f.mul(b, c));
            let s3 = f.mul(f.mul(a, b), c);
            Ok(space.plane([1, f.neg(s1), s2, f.neg(s3)])?)
        }
        _ => {
            let p = |t| space.point(curve_coords(space, t));
            Ok(space.plane_through(&p(t1)?, &p(t2)?, &p(t3)?)?)
        }
    }
}

/// Raw coefficients of the osculating plane at `t`.
pub fn osculating_coeffs(space: &Pg3, t: Param) -> Coords {
    let f = space.field();
    match t {
        Param::Finite(t) => {
            let three = f.from_int(3);
            let t2 = f.mul(t, t);
            [1, f.neg(f.mul(three, t)), f.mul(three, t2), f.neg(f.mul(t2, t))]
        }
        Param::Infinity => [0, 0, 0, 1],
    }
}

pub fn osculating_plane(space: &Pg3, t: Param) -> ProjPlane {
    space.plane(osculating_coeffs(space, t)).expect("osculating coefficients are nonzero")
}

/// The tangent at `P(t)`, spanned by `P(t)` and the derivative direction
/// `(3t², 2t, 1, 0)` (for `∞`: `(1,0,0,0)` and `(0,1,0,0)`).
///
/// The construction is validated, not trusted: the line must meet the cubic
/// only in `P(t)` and lie in the osculating plane at `t`.
pub fn tangent_line(space: &Pg3, cubic: &TwistedCubic, t: Param) -> Result<ProjLine, CubicError> {
    let f = space.field();
    let (a, b) = match t {
        Param::Finite(t) => {
            let d = [f.mul(f.from_int(3), f.mul(t, t)), f.mul(f.from_int(2), t), 1, 0];
            (curve_coords(space, Param::Finite(t)), d)
        }
        Param::Infinity => ([1, 0, 0, 0], [0, 1, 0, 0]),
    };
    let line = space.line_from_coords(&a, &b).map_err(|e| CubicError::ContactViolation {
        param: t,
        detail: format!("derivative direction is degenerate ({e})"),
    })?;
    let hits: Vec<usize> = line.point_indices().iter().copied().filter(|&p| cubic.contains(p)).collect();
    if hits != [cubic.point_of(t)] {
        return Err(CubicError::ContactViolation {
            param: t,
            detail: format!("line meets the cubic in {} points", hits.len()),
        });
    }
    let osc = osculating_coeffs(space, t);
    if line.point_indices().iter().any(|&p| space.dot(&space.coords_at(p), &osc) != 0) {
        return Err(CubicError::ContactViolation {
            param: t,
            detail: "line is not contained in the osculating plane".into(),
        });
    }
    Ok(line)
}

/// The osculating planes, and for `q ≡ 0 (mod 3)` their common axis.
#[derive(Debug, Clone)]
pub struct OsculatingDevelopable {
    planes: Vec<usize>,
    axis: Option<ProjLine>,
}

impl OsculatingDevelopable {
    pub fn new(space: &Pg3, cubic: &TwistedCubic) -> Result<Self, CubicError> {
        let mut planes = Vec::with_capacity(cubic.len());
        let mut rows = Vec::with_capacity(cubic.len());
        for &t in cubic.params() {
            let c = osculating_coeffs(space, t);
            let hits = cubic.point_indices().iter().filter(|&&p| space.dot(&space.coords_at(p), &c) == 0).count();
            if hits != 1 || space.dot(&space.coords_at(cubic.point_of(t)), &c) != 0 {
                return Err(CubicError::OsculatingContact { param: t, hits });
            }
            planes.push(space.index_of(&space.canon(c)));
            rows.push(c);
        }
        let axis = if space.field().order().is_multiple_of(3) {
            let common = space.null_space(&rows);
            if common.len() != 2 {
                return Err(CubicError::AxisViolation);
            }
            let line = space.line_from_coords(&common[0], &common[1])?;
            if line.point_indices().iter().any(|&p| cubic.contains(p)) {
                return Err(CubicError::AxisViolation);
            }
            Some(line)
        } else {
            None
        };
        Ok(OsculatingDevelopable { planes, axis })
    }

    /// Plane indices in parameter order.
    pub fn plane_indices(&self) -> &[usize] {
        &self.planes
    }

    pub fn axis(&self) -> Option<&ProjLine> {
        self.axis.as_ref()
    }
}

/// True when the `q+1` planes through `line` each contain exactly one curve point.
#[cfg(test)]
fn pencil_splits_curve(space: &Pg3, cubic: &TwistedCubic, line: &ProjLine) -> bool {
    let pts = line.point_indices();
    let (a, b) = (space.coords_at(pts[0]), space.coords_at(pts[1]));
    let mut planes: Vec<Coords> = cubic
        .point_indices()
        .iter()
        .filter_map(|&c| {
            let ns = space.null_space(&[a, b, space.coords_at(c)]);
            (ns.len() == 1).then(|| space.canon(ns[0]))
        })
        .collect();
    if planes.len() != cubic.len() {
        return false;
    }
    planes.sort_unstable();
    planes.dedup();
    planes.len() == cubic.len()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum ChordType {
    RealChord,
    Tangent,
    ImaginaryChord,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct ChordRef {
    kind: ChordType,
    id: u32,
}

/// Every chord of the cubic and the chord through each point off it.
#[derive(Debug, Clone)]
pub struct ChordInventory {
    real: Vec<(Param, Param, ProjLine)>,
    tangents: Vec<(Param, ProjLine)>,
    imaginary: Vec<ProjLine>,
    assignment: Vec<Option<ChordRef>>,
}

impl ChordInventory {
    /// Builds all chords and assigns each off-curve point to its chord.
    ///
    /// Imaginary chords are built over GF(q) from the monic irreducible
    /// quadratics whose roots are the conjugate parameter pairs.
    pub fn new(space: &Pg3, cubic: &TwistedCubic) -> Result<Self, CubicError> {
        let n = space.size();
        let q = space.q();
        let mut assignment: Vec<Option<ChordRef>> = vec![None; n];

        let assign = |assignment: &mut Vec<Option<ChordRef>>, line: &ProjLine, r: ChordRef| {
            for &p in line.point_indices() {
                if cubic.contains(p) {
                    continue;
                }
                if assignment[p].is_some() {
                    return Err(CubicError::ChordsMeet(space.point_at(p).to_string()));
                }
                assignment[p] = Some(r);
            }
            Ok(())
        };

        let params = cubic.params();
        let mut real = Vec::with_capacity(binomial(q + 1, 2));
        for a in 0..params.len() {
            for b in a + 1..params.len() {
                let line = space.line_from_coords(&curve_coords(space, params[a]), &curve_coords(space, params[b]))?;
                let r = ChordRef { kind: ChordType::RealChord, id: real.len() as u32 };
                assign(&mut assignment, &line, r)?;
                real.push((params[a], params[b], line));
            }
        }

        let mut tangents = Vec::with_capacity(q + 1);
        for &t in params {
            let line = tangent_line(space, cubic, t)?;
            let r = ChordRef { kind: ChordType::Tangent, id: tangents.len() as u32 };
            assign(&mut assignment, &line, r)?;
            tangents.push((t, line));
        }

        // x² − s x + p irreducible with roots τ, τ̄: the chord is spanned by
        // P(τ) + P(τ̄) and τP(τ) + τ̄P(τ̄), whose entries are the power sums
        // e_k = τ^k + τ̄^k.
        let f = space.field();
        let mut imaginary = Vec::with_capacity(binomial(q, 2));
        for s in f.codes() {
            for p in f.codes() {
                if f.codes().any(|x| f.add(f.sub(f.mul(x, x), f.mul(s, x)), p) == 0) {
                    continue;
                }
                let mut e = [f.from_int(2), s, 0, 0, 0];
                for k in 2..5 {
                    e[k] = f.sub(f.mul(s, e[k - 1]), f.mul(p, e[k - 2]));
                }
                let a = [e[3], e[2], e[1], e[0]];
                let b = [e[4], e[3], e[2], e[1]];
                let line = space.line_from_coords(&a, &b)?;
                if let Some(&hit) = line.point_indices().iter().find(|&&x| cubic.contains(x)) {
                    return Err(CubicError::ImaginaryChordMeetsCurve(space.point_at(hit).to_string()));
                }
                let r = ChordRef { kind: ChordType::ImaginaryChord, id: imaginary.len() as u32 };
                assign(&mut assignment, &line, r)?;
                imaginary.push(line);
            }
        }
        if let Some(p) = (0..n).find(|&p| !cubic.contains(p) && assignment[p].is_none()) {
            return Err(CubicError::Uncovered(space.point_at(p).to_string()));
        }

        let inv = ChordInventory { real, tangents, imaginary, assignment };
        inv.check_counts(q)?;
        Ok(inv)
    }

    fn check_counts(&self, q: usize) -> Result<(), CubicError> {
        let checks = [
            ("real chords", binomial(q + 1, 2), self.real.len()),
            ("tangents", q + 1, self.tangents.len()),
            ("imaginary chords", binomial(q, 2), self.imaginary.len()),
        ];
        for (what, expected, found) in checks {
            if expected != found {
                return Err(CubicError::CountMismatch { what, expected, found });
            }
        }
        Ok(())
    }

    /// `(real, tangent, imaginary)` chord counts.
    pub fn counts(&self) -> (usize, usize, usize) {
        (self.real.len(), self.tangents.len(), self.imaginary.len())
    }

    pub fn real_chords(&self) -> &[(Param, Param, ProjLine)] {
        &self.real
    }

    pub fn tangents(&self) -> &[(Param, ProjLine)] {
        &self.tangents
    }

    pub fn imaginary_chords(&self) -> &[ProjLine] {
        &self.imaginary
    }

    /// Chord type of a point off the cubic, `None` on the cubic.
    pub fn chord_type(&self, point: usize) -> Option<ChordType> {
        self.assignment[point].map(|r| r.kind)
    }

    /// The chord through an off-curve point and its type.
    pub fn classify_chord_of(&self, space: &Pg3, point: &ProjPoint) -> Result<(ChordType, &ProjLine), CubicError> {
        let idx = space.point_index(point);
        let r = self.assignment[idx].ok_or_else(|| CubicError::OnCurve(point.to_string()))?;
        let line = match r.kind {
            ChordType::RealChord => &self.real[r.id as usize].2,
            ChordType::Tangent => &self.tangents[r.id as usize].1,
            ChordType::ImaginaryChord => &self.imaginary[r.id as usize],
        };
        Ok((r.kind, line))
    }
}
