//! The point-plane incidence matrix split along the orbits: the 25
//! submatrices `I_ij` with their parameters `k_ij` and `r_ij`, and the
//! counting identities they satisfy.
//!
//! The θ×θ matrix is never stored. One pass over the planes fills per-plane
//! and per-point counters, from which everything else is read.

use std::fmt::Write as _;

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::check::Check;
use crate::classify::{Geometry, OrbitPartition, PlaneClass, PointClass};
use crate::cubic::{ChordType, Param};
use crate::pg3::{format_coords, Coords};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_CELL_CEILING: usize = 4_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IncidenceError {
    #[error("submatrix I_{i}{j} is not tactical: {witness}")]
    NotTactical { i: usize, j: usize, witness: String },
    #[error("orbit index out of range: ({0}, {1})")]
    BadIndex(usize, usize),
    #[error("submatrix has {cells} cells, above the ceiling of {ceiling}")]
    CeilingExceeded { cells: usize, ceiling: usize },
    #[error("null polarity is degenerate in characteristic 3")]
    DegeneratePolarity,
    #[error("table entry {0} is not an integer for this q")]
    NonIntegral(&'static str),
}

/// Per-plane and per-point incidence counters.
#[derive(Debug, Clone)]
pub struct IncidenceCounts {
    /// plane -> number of points of each `M_j` on it
    pub row: Vec<[u32; 5]>,
    /// point -> number of planes of each `N_i` through it
    pub col: Vec<[u32; 5]>,
    /// point -> number of `d_C`-planes through it, `d = 0..3`
    pub nd: Vec<[u32; 4]>,
}

struct Partial {
    col: Vec<[u32; 5]>,
    nd: Vec<[u32; 4]>,
}

impl Partial {
    fn new(n: usize) -> Self {
        Partial { col: vec![[0; 5]; n], nd: vec![[0; 4]; n] }
    }

    fn merge(mut self, other: Partial) -> Partial {
        for (a, b) in self.col.iter_mut().zip(&other.col) {
            for k in 0..5 {
                a[k] += b[k];
            }
        }
        for (a, b) in self.nd.iter_mut().zip(&other.nd) {
            for k in 0..4 {
                a[k] += b[k];
            }
        }
        self
    }
}

/// Streams every plane once and accumulates the counters.
pub fn count_incidences(geom: &Geometry, part: &OrbitPartition) -> IncidenceCounts {
    let space = geom.space();
    let n = space.size();
    let point_orbit = part.point_orbit_of();

    let scan = |plane: usize, partial: &mut Partial| -> [u32; 5] {
        let class = part.plane_class(plane);
        let (i, d) = (class.orbit() - 1, class.secant_count());
        let mut row = [0u32; 5];
        for p in space.points_on_plane(&space.coords_at(plane)) {
            row[point_orbit[p] as usize - 1] += 1;
            partial.col[p][i] += 1;
            partial.nd[p][d] += 1;
        }
        row
    };

    const CHUNK: usize = 64;
    let chunks: Vec<(usize, usize)> = (0..n).step_by(CHUNK).map(|s| (s, (s + CHUNK).min(n))).collect();
    let run = |&(lo, hi): &(usize, usize)| {
        let mut partial = Partial::new(n);
        let rows: Vec<[u32; 5]> = (lo..hi).map(|pl| scan(pl, &mut partial)).collect();
        (rows, partial)
    };

    #[cfg(feature = "parallel")]
    let results: Vec<(Vec<[u32; 5]>, Partial)> = chunks.par_iter().map(run).collect();
    #[cfg(not(feature = "parallel"))]
    let results: Vec<(Vec<[u32; 5]>, Partial)> = chunks.iter().map(run).collect();

    let mut row = Vec::with_capacity(n);
    let mut total = Partial::new(n);
    for (rows, partial) in results {
        row.extend(rows);
        total = total.merge(partial);
    }
    IncidenceCounts { row, col: total.col, nd: total.nd }
}

/// Parameters of one submatrix `I_ij`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubmatrixStats {
    pub i: usize,
    pub j: usize,
    pub rows: usize,
    pub cols: usize,
    /// ones per row
    pub k: u32,
    /// ones per column
    pub r: u32,
    pub tactical: bool,
}

fn stats_from_counts(
    part: &OrbitPartition,
    counts: &IncidenceCounts,
    i: usize,
    j: usize,
) -> (SubmatrixStats, Option<String>) {
    let planes = part.plane_orbit(i);
    let points = part.point_orbit(j);
    let k = counts.row[planes[0]][j - 1];
    let r = counts.col[points[0]][i - 1];
    let bad_row = planes.iter().find(|&&pl| counts.row[pl][j - 1] != k);
    let bad_col = points.iter().find(|&&p| counts.col[p][i - 1] != r);
    let witness = match (bad_row, bad_col) {
        (Some(&pl), _) => Some(format!("plane #{pl} has {} ones, plane #{} has {k}", counts.row[pl][j - 1], planes[0])),
        (_, Some(&p)) => Some(format!("point #{p} has {} ones, point #{} has {r}", counts.col[p][i - 1], points[0])),
        _ => None,
    };
    let stats = SubmatrixStats { i, j, rows: planes.len(), cols: points.len(), k, r, tactical: witness.is_none() };
    (stats, witness)
}

/// Parameters of `I_ij`; fails if the submatrix is not tactical.
pub fn submatrix_stats(
    part: &OrbitPartition,
    counts: &IncidenceCounts,
    i: usize,
    j: usize,
) -> Result<SubmatrixStats, IncidenceError> {
    if !(1..=5).contains(&i) || !(1..=5).contains(&j) {
        return Err(IncidenceError::BadIndex(i, j));
    }
    match stats_from_counts(part, counts, i, j) {
        (s, None) => Ok(s),
        (_, Some(witness)) => Err(IncidenceError::NotTactical { i, j, witness }),
    }
}

/// `(k_ij, r_ij)` from the closed-form tables, indexed `[i-1][j-1]`.
pub fn expected_grid(q: usize, xi: i32) -> Result<[[(u32, u32); 5]; 5], IncidenceError> {
    let q = q as i64;
    let x = xi as i64;
    let q2 = q * q;
    let d = |num: i64, den: i64, what: &'static str| -> Result<u32, IncidenceError> {
        if num < 0 || num % den != 0 {
            Err(IncidenceError::NonIntegral(what))
        } else {
            Ok((num / den) as u32)
        }
    };
    let k: [[u32; 5]; 5];
    let r: [[u32; 5]; 5];
    if xi == 0 {
        k = [
            [1, d(q + 1, 1, "")?, d(q - 1, 1, "")?, d(q2 - q, 2, "k14")?, d(q2 - q, 2, "k15")?],
            [2, 1, d(2 * q - 2, 1, "")?, d(q2 - q, 2, "k24")?, d(q2 - q, 2, "k25")?],
            [3, 1, d(q - 3, 1, "k33")?, d(q2 + q, 2, "k34")?, d(q2 - q, 2, "k35")?],
            [1, 1, d(q - 1, 1, "")?, d(q2 - q, 2, "k44")?, d(q2 + q, 2, "k45")?],
            [0, 1, d(q, 1, "")?, d(q2 + q, 2, "k54")?, d(q2 - q, 2, "k55")?],
        ];
        let h = d(q2 - q, 2, "r4j")?;
        r = [
            [1, d(q + 1, 1, "")?, 1, 1, 1],
            [d(2 * q, 1, "")?, d(q, 1, "")?, d(2 * q, 1, "")?, d(q, 1, "")?, d(q, 1, "")?],
            [h, d(q2 - q, 6, "r32")?, d(q2 - 3 * q, 6, "r33")?, d(q2 + q, 6, "r34")?, d(q2 - q, 6, "r35")?],
            [h, h, h, h, d(q2 + q, 2, "r45")?],
            [0, d(q2 - q, 3, "r52")?, d(q2, 3, "r53")?, d(q2 + q, 3, "r54")?, d(q2 - q, 3, "r55")?],
        ];
    } else {
        let h = d(q2 - q, 2, "(q²−q)/2")?;
        k = [
            [1, d(2 * q, 1, "")?, h, h, 0],
            [2, d(2 * q - 1, 1, "")?, d(q2 - 3 * q + 2, 6, "k23")?, h, d(q2 - 1, 3, "k25")?],
            [
                3,
                d(q - 2, 1, "k32")?,
                d(q2 + x * q + 4, 6, "k33")?,
                d(q2 - x * q, 2, "k34")?,
                d(q2 + x * q - 2, 3, "k35")?,
            ],
            [1, d(q, 1, "")?, d(q2 - x * q, 6, "k43")?, d(q2 + x * q, 2, "k44")?, d(q2 - x * q, 3, "k45")?],
            [0, d(q + 1, 1, "")?, d(q2 + x * q - 2, 6, "k53")?, d(q2 - x * q, 2, "k54")?, d(q2 + x * q + 1, 3, "k55")?],
        ];
        r = [
            [1, 2, 3, 1, 0],
            [d(2 * q, 1, "")?, d(2 * q - 1, 1, "")?, d(q - 2, 1, "r23")?, d(q, 1, "")?, d(q + 1, 1, "")?],
            [
                h,
                d(q2 - 3 * q + 2, 6, "r32")?,
                d(q2 + x * q + 4, 6, "r33")?,
                d(q2 - x * q, 6, "r34")?,
                d(q2 + x * q - 2, 6, "r35")?,
            ],
            [h, h, d(q2 - x * q, 2, "r43")?, d(q2 + x * q, 2, "r44")?, d(q2 - x * q, 2, "r45")?],
            [
                0,
                d(q2 - 1, 3, "r52")?,
                d(q2 + x * q - 2, 3, "r53")?,
                d(q2 - x * q, 3, "r54")?,
                d(q2 + x * q + 1, 3, "r55")?,
            ],
        ];
    }
    Ok(std::array::from_fn(|i| std::array::from_fn(|j| (k[i][j], r[i][j]))))
}

/// The 25 submatrix parameters and the per-class plane counts.
#[derive(Debug, Clone)]
pub struct IncidenceReport {
    pub q: usize,
    pub xi: i32,
    pub plane_sizes: [usize; 5],
    pub point_sizes: [usize; 5],
    /// `grid[i-1][j-1]` describes `I_ij`
    pub grid: [[SubmatrixStats; 5]; 5],
    /// `n_d` through a point of `M_j`, read from the first member
    pub nd_by_orbit: [[u32; 4]; 5],
    /// whether `n_d` is constant on every point orbit
    pub nd_constant: bool,
    /// total number of `d_C`-planes
    pub nd_sigma: [usize; 4],
    pub counts: IncidenceCounts,
}

/// Counts incidences and collects all 25 submatrix parameters.
pub fn full_report(geom: &Geometry, part: &OrbitPartition) -> Result<IncidenceReport, IncidenceError> {
    let counts = count_incidences(geom, part);
    let mut grid = [[SubmatrixStats { i: 0, j: 0, rows: 0, cols: 0, k: 0, r: 0, tactical: false }; 5]; 5];
    for i in 1..=5 {
        for j in 1..=5 {
            grid[i - 1][j - 1] = submatrix_stats(part, &counts, i, j)?;
        }
    }
    let mut nd_by_orbit = [[0u32; 4]; 5];
    let mut nd_constant = true;
    for j in 1..=5 {
        let pts = part.point_orbit(j);
        nd_by_orbit[j - 1] = counts.nd[pts[0]];
        nd_constant &= pts.iter().all(|&p| counts.nd[p] == nd_by_orbit[j - 1]);
    }
    let mut nd_sigma = [0usize; 4];
    for pl in 0..geom.space().size() {
        nd_sigma[part.plane_class(pl).secant_count()] += 1;
    }
    Ok(IncidenceReport {
        q: part.q(),
        xi: part.xi(),
        plane_sizes: part.plane_sizes(),
        point_sizes: part.point_sizes(),
        grid,
        nd_by_orbit,
        nd_constant,
        nd_sigma,
        counts,
    })
}

impl IncidenceReport {
    pub fn k(&self, i: usize, j: usize) -> u32 {
        self.grid[i - 1][j - 1].k
    }

    pub fn r(&self, i: usize, j: usize) -> u32 {
        self.grid[i - 1][j - 1].r
    }

    /// `n_d` for points of the given class.
    pub fn n(&self, class: PointClass, d: usize) -> u32 {
        self.nd_by_orbit[class.orbit() - 1][d]
    }

    /// Table match, the double-counting identity and the row/column sums.
    pub fn table_checks(&self) -> Vec<Check> {
        let mut out = Vec::new();
        let theta2 = (self.q * self.q + self.q + 1) as u64;
        match expected_grid(self.q, self.xi) {
            Ok(expected) => {
                let mut bad = Vec::new();
                for i in 0..5 {
                    for j in 0..5 {
                        let s = &self.grid[i][j];
                        if (s.k, s.r) != expected[i][j] {
                            bad.push(format!(
                                "I{}{}: (k,r)=({},{}) expected {:?}",
                                i + 1,
                                j + 1,
                                s.k,
                                s.r,
                                expected[i][j]
                            ));
                        }
                    }
                }
                let branch = if self.xi == 0 { "q ≡ 0 (mod 3)" } else { "q ≢ 0 (mod 3)" };
                out.push(Check::from_bool(format!("closed-form k_ij, r_ij for {branch}"), bad.is_empty(), || {
                    bad.join("; ")
                }));
            }
            Err(e) => out.push(Check::fail("table values", e.to_string())),
        }
        let mut bad = Vec::new();
        for row in &self.grid {
            for s in row {
                if s.k as u64 * s.rows as u64 != s.r as u64 * s.cols as u64 {
                    bad.push(format!("I{}{}", s.i, s.j));
                }
            }
        }
        out.push(Check::from_bool("k_ij·#N_i = r_ij·#M_j", bad.is_empty(), || bad.join(", ")));
        let row_sums: Vec<u64> = (0..5).map(|i| (0..5).map(|j| self.grid[i][j].k as u64).sum()).collect();
        let col_sums: Vec<u64> = (0..5).map(|j| (0..5).map(|i| self.grid[i][j].r as u64).sum()).collect();
        out.push(Check::equal("Σ_j k_ij = q²+q+1", row_sums, vec![theta2; 5]));
        out.push(Check::equal("Σ_i r_ij = q²+q+1", col_sums, vec![theta2; 5]));
        out.push(Check::from_bool("n_d constant on point orbits", self.nd_constant, || {
            "a point orbit has varying d_C-plane counts".into()
        }));
        out
    }

    pub fn to_json(&self, checks: &[Check]) -> serde_json::Value {
        let grid: Vec<serde_json::Value> = self
            .grid
            .iter()
            .flatten()
            .map(|s| serde_json::json!({"i": s.i, "j": s.j, "k": s.k, "r": s.r, "rows": s.rows, "cols": s.cols}))
            .collect();
        serde_json::json!({
            "schema_version": SCHEMA_VERSION,
            "q": self.q,
            "xi": self.xi,
            "orbit_sizes": {"planes": self.plane_sizes, "points": self.point_sizes},
            "grid": grid,
            "nd_sigma": self.nd_sigma,
            "checks": checks,
        })
    }
}

fn exact(num: i64, den: i64) -> Option<u32> {
    (num >= 0 && num % den == 0).then(|| (num / den) as u32)
}

fn binom(n: i64, k: i64) -> i64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// The counting identities on real chords, totals, weighted sums and
/// imaginary chords, each re-derived from the raw counts.
pub fn verify_section4_relations(geom: &Geometry, part: &OrbitPartition, report: &IncidenceReport) -> Vec<Check> {
    let space = geom.space();
    let q = report.q as i64;
    let mut out = Vec::new();

    let mut bad = None;
    for (a, b, line) in geom.chords().real_chords() {
        let mut n = [0i64; 4];
        for pl in space.plane_indices_through_line(line) {
            n[part.plane_class(pl).secant_count()] += 1;
        }
        if n[3] != q - 1 || n[2] != 2 {
            bad = Some(format!("chord P({a})P({b}): n3={}, n2={}", n[3], n[2]));
            break;
        }
    }
    out.push(Check::from_bool("real chord: q−1 3_C-planes and 2 2_C-planes", bad.is_none(), || bad.unwrap()));

    let t = q * (q * q - 1);
    let sigma: Vec<i64> = report.nd_sigma.iter().map(|&v| v as i64).collect();
    out.push(Check::equal("n_d^Σ totals", sigma, vec![t / 3, (q * q * q + q + 2) / 2, q * (q + 1), t / 6]));

    let n = |c: PointClass, d: usize| report.n(c, d) as i64;
    if report.xi != 0 {
        use PointClass::*;
        let lhs: Vec<i64> = (0..4)
            .map(|d| 6 * n(T, d) + 2 * (q - 1) * n(ZeroOsc, d) + 3 * (q - 1) * n(OneOsc, d) + (q - 1) * n(ThreeOsc, d))
            .collect();
        let rhs = vec![2 * (q * q * q - 1), 3 * (q * q * q + q + 2), 6 * (q * q + q - 1), (q - 1) * (q - 1) * (q + 2)];
        out.push(Check::equal("weighted sum, q ≢ 0 (mod 3) (×6)", lhs, rhs));
    } else {
        use PointClass::*;
        let lhs: Vec<i64> = (0..4)
            .map(|d| 6 * (q - 1) * n(TO, d) + 6 * n(AllOsc, d) + 3 * q * (q - 1) * (n(RC, d) + n(IC, d)))
            .collect();
        let rhs = vec![
            2 * q * (q * q * q - 1),
            3 * q * (q * q * q + q + 2),
            6 * q * (q * q + q - 1),
            q * (q - 1) * (q - 1) * (q + 2),
        ];
        out.push(Check::equal("weighted sum, q ≡ 0 (mod 3) (×6)", lhs, rhs));
    }

    let theta2 = (q * q + q + 1) as u32;
    let sums: Vec<u32> = report.nd_by_orbit[1..].iter().map(|v| v.iter().sum()).collect();
    out.push(Check::equal("Σ_d n_d = q²+q+1 on each off-curve class", sums, vec![theta2; 4]));

    let cubic = geom.cubic();
    let (mut off_rc, mut on_rc, mut squares) = (None, None, None);
    for p in 0..space.size() {
        if cubic.contains(p) {
            continue;
        }
        let nd = report.counts.nd[p].map(|v| v as i64);
        let v = nd[2] + 3 * nd[3];
        if geom.chords().chord_type(p) == Some(ChordType::RealChord) {
            if v != (q * q + 3 * q) / 2 && on_rc.is_none() {
                on_rc = Some(format!("point #{p}: n2+3n3 = {v}"));
            }
        } else if v != binom(q + 1, 2) && off_rc.is_none() {
            off_rc = Some(format!("point #{p}: n2+3n3 = {v}"));
        }
        let w = nd[1] + 2 * nd[2] + 3 * nd[3];
        if w != (q + 1) * (q + 1) && squares.is_none() {
            squares = Some(format!("point #{p}: n1+2n2+3n3 = {w}"));
        }
    }
    out.push(Check::from_bool("n2+3n3 = C(q+1,2) off real chords", off_rc.is_none(), || off_rc.unwrap()));
    out.push(Check::from_bool("n2+3n3 = (q²+3q)/2 on real chords", on_rc.is_none(), || on_rc.unwrap()));
    out.push(Check::from_bool("n1+2n2+3n3 = (q+1)²", squares.is_none(), || squares.unwrap()));

    let mut bad = None;
    for (k, line) in geom.chords().imaginary_chords().iter().enumerate() {
        let planes = space.plane_indices_through_line(line);
        if planes.len() != report.q + 1 {
            bad = Some(format!("imaginary chord {k}: {} planes", planes.len()));
            break;
        }
        if let Some(&pl) = planes.iter().find(|&&pl| part.plane_class(pl) != PlaneClass::OneSecNonGamma) {
            bad = Some(format!("imaginary chord {k} lies on plane #{pl} of class {:?}", part.plane_class(pl)));
            break;
        }
    }
    out.push(Check::from_bool("planes through an imaginary chord are 1_C\\Γ", bad.is_none(), || bad.unwrap()));
    out
}

/// Counts `3_C`-planes through `point`, split by whether they contain `P(∞)`.
fn three_sec_through(geom: &Geometry, part: &OrbitPartition, point: &Coords) -> (usize, usize) {
    let space = geom.space();
    let inf = space.coords_at(geom.cubic().point_of(Param::Infinity));
    let mut with_inf = 0;
    let mut without = 0;
    let idx = space.index_of(&space.canon(*point));
    for pl in 0..space.size() {
        if part.plane_class(pl) != PlaneClass::ThreeSec {
            continue;
        }
        let c = space.coords_at(pl);
        if space.dot(&space.coords_at(idx), &c) != 0 {
            continue;
        }
        if space.dot(&inf, &c) == 0 {
            with_inf += 1;
        } else {
            without += 1;
        }
    }
    (with_inf, without)
}

/// The exact `n_{d,•}` values per class, plus the auxiliary counts
/// (the point `W`, the square-value count and the cube-product count).
pub fn verify_section5_values(geom: &Geometry, part: &OrbitPartition, report: &IncidenceReport) -> Vec<Check> {
    use PointClass::*;
    let q = report.q as i64;
    let q2 = q * q;
    let f = geom.space().field();
    let mut out = Vec::new();

    let mut expect = |name: &str, class: PointClass, values: [(i64, i64); 4]| {
        let want: Vec<Option<u32>> = values.iter().map(|&(n, d)| exact(n, d)).collect();
        let got: Vec<Option<u32>> = (0..4).map(|d| Some(report.n(class, d))).collect();
        out.push(Check::equal(format!("{name}: n_d for {}", class.label()), got, want));
    };

    expect("cubic points", OnCubic, [(0, 1), (q2 - q + 2, 2), (2 * q, 1), (q2 - q, 2)]);
    let ic_like = [(q2 - q, 3), (q2 + q + 2, 2), (q, 1), (q2 - q, 6)];
    let rc_like = [(q2 + q, 3), (q2 - q + 2, 2), (q, 1), (q2 + q, 6)];
    match report.xi {
        1 => {
            expect("1_Γ points, q ≡ 1", OneOsc, ic_like);
            expect("tangent points", T, [(q2 - 1, 3), (q2 - q + 4, 2), (2 * q - 1, 1), (q2 - 3 * q + 2, 6)]);
            expect("0_Γ points, q ≡ 1", ZeroOsc, [(q2 + q + 1, 3), (q2 - q, 2), (q + 1, 1), (q2 + q - 2, 6)]);
            expect("3_Γ points, q ≡ 1", ThreeOsc, [(q2 + q - 2, 3), (q2 - q + 6, 2), (q - 2, 1), (q2 + q + 4, 6)]);
        }
        -1 => {
            expect("1_Γ points, q ≡ −1", OneOsc, rc_like);
            expect("tangent points", T, [(q2 - 1, 3), (q2 - q + 4, 2), (2 * q - 1, 1), (q2 - 3 * q + 2, 6)]);
            expect("0_Γ points, q ≡ −1", ZeroOsc, [(q2 - q + 1, 3), (q2 + q, 2), (q + 1, 1), (q2 - q - 2, 6)]);
            expect("3_Γ points, q ≡ −1", ThreeOsc, [(q2 - q - 2, 3), (q2 + q + 6, 2), (q - 2, 1), (q2 - q + 4, 6)]);
            let lhs: Vec<i64> =
                (0..4).map(|d| 2 * report.n(ZeroOsc, d) as i64 + report.n(ThreeOsc, d) as i64).collect();
            let rhs = vec![q2 - q, 3 * (q2 + q + 2) / 2, 3 * q, (q2 - q) / 2];
            out.push(Check::equal("2n_{d,0Γ} + n_{d,3Γ}, q ≡ −1", lhs, rhs));
        }
        _ => {
            expect("axis points", AllOsc, ic_like);
            expect("IC points, q ≡ 0", IC, ic_like);
            expect("RC points, q ≡ 0", RC, rc_like);
            expect("TO points", TO, [(q2, 3), (q2 - q + 2, 2), (2 * q, 1), (q2 - 3 * q, 6)]);
        }
    }

    if report.xi == -1 {
        let space = geom.space();
        let w: Coords = [0, 1, f.neg(1), 0];
        let idx = space.index_of(&w);
        let on = geom
            .cubic()
            .params()
            .iter()
            .copied()
            .filter(|&t| space.dot(&w, &crate::cubic::osculating_coeffs(space, t)) == 0)
            .collect::<Vec<Param>>();
        let mut want = vec![Param::Finite(0), Param::Finite(f.neg(1)), Param::Infinity];
        want.sort();
        out.push(Check::equal("W = (0,1,−1,0) lies on π_osc(0), π_osc(−1), π_osc(∞)", on, want));
        out.push(Check::equal("W is a 3_Γ-point", part.point_class(idx), ThreeOsc));
        let (n1, n2) = three_sec_through(geom, part, &w);
        let even = q % 2 == 0;
        let want1 = if even { q / 2 } else { (q - 1) / 2 };
        let want2 = if even { exact(q2 - 4 * q + 4, 6) } else { exact(q2 - 4 * q + 7, 6) };
        out.push(Check::equal("W: n′ planes through P(∞)", Some(n1 as u32), exact(want1, 1)));
        out.push(Check::equal("W: n″ planes off P(∞)", Some(n2 as u32), want2));
        out.push(Check::equal("W: 3_C-planes through W", Some((n1 + n2) as u32), exact(q2 - q + 4, 6)));
        if !even {
            match f.count_square_values_of_f() {
                Ok(v) => out.push(Check::equal("#V = (q−1)/2", v as i64, (q - 1) / 2)),
                Err(e) => out.push(Check::fail("#V = (q−1)/2", e.to_string())),
            }
        }
    }

    if report.xi == 1 {
        match f.triple_product_class_counts() {
            Ok((mc, mnc)) => {
                out.push(Check::equal(
                    "cube-product counts (m_c, m_nc)",
                    (Some(mc as u32), Some(mnc as u32)),
                    (exact((q - 1) * (q2 - 5 * q + 10), 18), exact(2 * (q - 1) * (q2 - 5 * q + 4), 18)),
                ));
                let (gc, gnc) = cube_product_geometry(geom, part);
                out.push(Check::equal(
                    "3_C-planes through chord P(0)P(∞) points, off its endpoints",
                    (gc, gnc),
                    (mc, mnc),
                ));
            }
            Err(e) => out.push(Check::fail("cube-product counts", e.to_string())),
        }
    }
    out
}

/// Sums, over the points `(c,0,0,1)` with `c` a nonzero cube (resp.
/// non-cube), the `3_C`-planes through them missing `P(0)` and `P(∞)`.
pub fn cube_product_geometry(geom: &Geometry, part: &OrbitPartition) -> (u64, u64) {
    let space = geom.space();
    let f = space.field();
    let p0 = space.coords_at(geom.cubic().point_of(Param::Finite(0)));
    let pinf = space.coords_at(geom.cubic().point_of(Param::Infinity));
    let mut cubes = 0u64;
    let mut non = 0u64;
    let three: Vec<Coords> = (0..space.size())
        .filter(|&pl| part.plane_class(pl) == PlaneClass::ThreeSec)
        .map(|pl| space.coords_at(pl))
        .filter(|c| space.dot(&p0, c) != 0 && space.dot(&pinf, c) != 0)
        .collect();
    for c in f.codes().filter(|&c| c != 0) {
        let pt = [c, 0, 0, 1];
        let n = three.iter().filter(|pl| space.dot(&pt, pl) == 0).count() as u64;
        if f.is_cube(c) {
            cubes += n;
        } else {
            non += n;
        }
    }
    (cubes, non)
}

/// The null polarity `x ↦ (x3, −3x2, 3x1, −x0)`.
#[derive(Debug, Clone, Copy)]
pub struct NullPolarity {
    matrix: [[u16; 4]; 4],
}

impl NullPolarity {
    pub fn new(geom: &Geometry) -> Result<Self, IncidenceError> {
        if geom.xi() == 0 {
            return Err(IncidenceError::DegeneratePolarity);
        }
        let f = geom.space().field();
        let three = f.from_int(3);
        let mut m = [[0u16; 4]; 4];
        m[0][3] = 1;
        m[1][2] = f.neg(three);
        m[2][1] = three;
        m[3][0] = f.neg(1);
        Ok(NullPolarity { matrix: m })
    }

    pub fn matrix(&self) -> [[u16; 4]; 4] {
        self.matrix
    }

    /// Raw image of a vector.
    pub fn apply(&self, geom: &Geometry, x: &Coords) -> Coords {
        let f = geom.space().field();
        std::array::from_fn(|r| (0..4).fold(0, |acc, c| f.add(acc, f.mul(self.matrix[r][c], x[c]))))
    }

    /// Inverse map: `A² = −diag(1, 9, 9, 1)`, so `A⁻¹ = −diag(1, 1/9, 1/9, 1)·A`.
    pub fn apply_inverse(&self, geom: &Geometry, c: &Coords) -> Coords {
        let f = geom.space().field();
        let ninth = f.inv(f.from_int(9));
        let y = self.apply(geom, c);
        [f.neg(y[0]), f.neg(f.mul(ninth, y[1])), f.neg(f.mul(ninth, y[2])), f.neg(y[3])]
    }
}

/// Verifies that the polarity is antisymmetric and invertible, sends
/// `P(t)` to `π_osc(t)`, and maps each point orbit onto the plane orbit
/// with the same number.
pub fn null_polarity_check(geom: &Geometry, part: &OrbitPartition) -> Result<Vec<Check>, IncidenceError> {
    let pol = NullPolarity::new(geom)?;
    let space = geom.space();
    let f = space.field();
    let m = pol.matrix();
    let mut out = Vec::new();
    let anti = (0..4).all(|r| (0..4).all(|c| m[r][c] == f.neg(m[c][r])));
    let rows: Vec<Coords> = m.to_vec();
    let invertible = space.rank(&rows) == 4;
    out.push(Check::from_bool("polarity matrix antisymmetric and invertible", anti && invertible, || {
        format!("antisymmetric={anti}, invertible={invertible}")
    }));

    let mut bad = None;
    for (k, &t) in geom.cubic().params().iter().enumerate() {
        let img = space.index_of(&space.canon(pol.apply(geom, &space.coords_at(geom.cubic().point_indices()[k]))));
        if img != geom.developable().plane_indices()[k] {
            bad = Some(format!("P({t}) maps to plane #{img}"));
            break;
        }
    }
    out.push(Check::from_bool("P(t) ↦ π_osc(t)", bad.is_none(), || bad.unwrap()));

    let mut bad = Vec::new();
    for j in 1..=5 {
        let mut img: Vec<usize> = part
            .point_orbit(j)
            .iter()
            .map(|&p| space.index_of(&space.canon(pol.apply(geom, &space.coords_at(p)))))
            .collect();
        img.sort_unstable();
        if img != part.plane_orbit(j) {
            bad.push(format!("M{j}"));
        }
    }
    out.push(Check::from_bool("M_i 𝔄 = N_i", bad.is_empty(), || format!("mismatch at {}", bad.join(", "))));
    Ok(out)
}

/// Dense 0/1 submatrix, rows in orbit order.
pub fn submatrix_bits(geom: &Geometry, part: &OrbitPartition, i: usize, j: usize) -> Vec<Vec<bool>> {
    let space = geom.space();
    let cols = part.point_orbit(j);
    let mut pos = vec![usize::MAX; space.size()];
    for (k, &p) in cols.iter().enumerate() {
        pos[p] = k;
    }
    part.plane_orbit(i)
        .iter()
        .map(|&pl| {
            let mut row = vec![false; cols.len()];
            for p in space.points_on_plane(&space.coords_at(pl)) {
                if pos[p] != usize::MAX {
                    row[pos[p]] = true;
                }
            }
            row
        })
        .collect()
}

fn transpose(m: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|c| m.iter().map(|row| row[c]).collect()).collect()
}

/// Sorts rows, then columns, repeatedly until nothing moves. Equal results
/// imply equivalence under row and column permutations. The converse holds
/// when every column (or every row) has weight one.
pub fn canonical_form(m: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let mut cur = m.to_vec();
    for _ in 0..64 {
        let mut next = cur.clone();
        next.sort();
        let mut t = transpose(&next);
        t.sort();
        next = transpose(&t);
        if next == cur {
            break;
        }
        cur = next;
    }
    cur
}

/// Transpose relations between submatrices.
///
/// Parameter level always. With `matrix_level` and `q ≢ 0 (mod 3)`, the
/// polarity is checked to be an explicit row/column bijection realising
/// `I_ij^tr = I_ji`; for `q ≡ 0 (mod 3)` the canonical forms are compared.
pub fn transpose_relations_check(
    geom: &Geometry,
    part: &OrbitPartition,
    report: &IncidenceReport,
    matrix_level: bool,
) -> Vec<Check> {
    let mut out = Vec::new();
    let pairs: Vec<((usize, usize), (usize, usize))> = if report.xi != 0 {
        (1..=5).flat_map(|i| (1..=5).map(move |j| ((i, j), (j, i)))).collect()
    } else {
        vec![((4, 1), (1, 4)), ((4, 1), (1, 5)), ((4, 2), (1, 4)), ((4, 2), (1, 5))]
    };
    let mut bad = Vec::new();
    for &((a, b), (c, d)) in &pairs {
        let x = &report.grid[a - 1][b - 1];
        let y = &report.grid[c - 1][d - 1];
        if x.rows != y.cols || x.cols != y.rows || x.k != y.r || x.r != y.k {
            bad.push(format!("I{a}{b}^tr vs I{c}{d}"));
        }
    }
    out.push(Check::from_bool("transpose relations (parameters)", bad.is_empty(), || bad.join(", ")));
    if report.xi != 0 {
        out.push(Check::equal("#N_i = #M_i", report.plane_sizes, report.point_sizes));
    }

    if matrix_level {
        match NullPolarity::new(geom) {
            Ok(pol) => out.push(polarity_transpose_witness(geom, part, &pol)),
            Err(_) => {
                let mut bad = Vec::new();
                for &((a, b), (c, d)) in &pairs {
                    let lhs = canonical_form(&transpose(&submatrix_bits(geom, part, a, b)));
                    let rhs = canonical_form(&submatrix_bits(geom, part, c, d));
                    if lhs != rhs {
                        bad.push(format!("I{a}{b}^tr vs I{c}{d}"));
                    }
                }
                out.push(Check::from_bool("transpose relations (canonical forms)", bad.is_empty(), || bad.join(", ")));
            }
        }
    }
    out
}

/// For a plane `π` and point `P`: `P ∈ π` iff `𝔄⁻¹(π) ∈ 𝔄(P)`, and the
/// orbit of `𝔄⁻¹(π)` (resp. `𝔄(P)`) is that of `π` (resp. `P`).
fn polarity_transpose_witness(geom: &Geometry, part: &OrbitPartition, pol: &NullPolarity) -> Check {
    let space = geom.space();
    let n = space.size();
    let img: Vec<usize> = (0..n).map(|p| space.index_of(&space.canon(pol.apply(geom, &space.coords_at(p))))).collect();
    let pre: Vec<usize> =
        (0..n).map(|pl| space.index_of(&space.canon(pol.apply_inverse(geom, &space.coords_at(pl))))).collect();
    for pl in 0..n {
        if part.point_class(pre[pl]).orbit() != part.plane_class(pl).orbit() {
            return Check::fail("polarity realises I_ij^tr = I_ji", format!("plane #{pl} changes orbit"));
        }
        let c = space.coords_at(pl);
        let y = space.coords_at(pre[pl]);
        for p in 0..n {
            let lhs = space.dot(&space.coords_at(p), &c) == 0;
            let rhs = space.dot(&y, &space.coords_at(img[p])) == 0;
            if lhs != rhs {
                return Check::fail("polarity realises I_ij^tr = I_ji", format!("plane #{pl}, point #{p}"));
            }
        }
    }
    Check::pass("polarity realises I_ij^tr = I_ji")
}

/// A `t-(v,k,λ)` design verification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignCheck {
    pub name: String,
    pub t: usize,
    pub v: usize,
    pub k: usize,
    pub lambda: usize,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
    /// For a decomposition: the row positions of each part.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub parts: Option<(Vec<usize>, Vec<usize>)>,
}

impl DesignCheck {
    pub fn to_check(&self) -> Check {
        let name = format!("{}: {}-({},{},{})", self.name, self.t, self.v, self.k, self.lambda);
        match &self.witness {
            None if self.pass => Check::pass(name),
            w => Check::fail(name, w.clone().unwrap_or_default()),
        }
    }
}

fn subsets(v: usize, t: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, v: usize, t: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == t {
            out.push(cur.clone());
            return;
        }
        for x in start..v {
            cur.push(x);
            go(x + 1, v, t, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, v, t, &mut Vec::new(), &mut out);
    out
}

/// Checks that `blocks` (subsets of `0..v`) form a `t-(v,k,λ)` design.
pub fn check_design(name: &str, blocks: &[Vec<usize>], v: usize, k: usize, t: usize, lambda: usize) -> DesignCheck {
    let mut witness = None;
    if let Some(b) = blocks.iter().find(|b| b.len() != k) {
        witness = Some(format!("block {b:?} has size {}", b.len()));
    } else {
        for s in subsets(v, t) {
            let c = blocks.iter().filter(|b| s.iter().all(|x| b.contains(x))).count();
            if c != lambda {
                witness = Some(format!("{t}-subset {s:?} lies in {c} blocks"));
                break;
            }
        }
    }
    DesignCheck { name: name.into(), t, v, k, lambda, pass: witness.is_none(), witness, parts: None }
}

/// Curve-point positions on each plane of `N_i`.
fn blocks_of(geom: &Geometry, part: &OrbitPartition, i: usize) -> Vec<Vec<usize>> {
    let space = geom.space();
    let cubic = geom.cubic();
    part.plane_orbit(i)
        .iter()
        .map(|&pl| {
            let c = space.coords_at(pl);
            (0..cubic.len()).filter(|&k| space.dot(&space.coords_at(cubic.point_indices()[k]), &c) == 0).collect()
        })
        .collect()
}

/// `I_21` as a decomposable `2-(q+1,2,2)` design, `I_31` as a
/// `3-(q+1,3,1)` and a `2-(q+1,3,q−1)` design.
pub fn design_checks(geom: &Geometry, part: &OrbitPartition) -> Vec<DesignCheck> {
    let v = geom.cubic().len();
    let q = geom.q();
    let b2 = blocks_of(geom, part, 2);
    let b3 = blocks_of(geom, part, 3);
    let mut out = vec![check_design("I21", &b2, v, 2, 2, 2)];

    let space = geom.space();
    let rows = part.plane_orbit(2);
    let mut first = Vec::new();
    let mut second = Vec::new();
    let mut witness = None;
    for (a, b, line) in geom.chords().real_chords() {
        let two: Vec<usize> = space
            .plane_indices_through_line(line)
            .into_iter()
            .filter(|&pl| part.plane_class(pl) == PlaneClass::TwoSec)
            .map(|pl| rows.binary_search(&pl).expect("2_C-plane in N_2"))
            .collect();
        if two.len() != 2 {
            witness = Some(format!("chord P({a})P({b}) lies on {} 2_C-planes", two.len()));
            break;
        }
        first.push(two[0]);
        second.push(two[1]);
    }
    let mut all: Vec<usize> = first.iter().chain(&second).copied().collect();
    all.sort_unstable();
    all.dedup();
    if witness.is_none() && all.len() != rows.len() {
        witness = Some(format!("parts cover {} of {} rows", all.len(), rows.len()));
    }
    for (label, idx) in [("B1", &first), ("B2", &second)] {
        let blocks: Vec<Vec<usize>> = idx.iter().map(|&r| b2[r].clone()).collect();
        let d = check_design(label, &blocks, v, 2, 2, 1);
        if witness.is_none() && !d.pass {
            witness = Some(format!("{label}: {}", d.witness.unwrap_or_default()));
        }
    }
    out.push(DesignCheck {
        name: "I21 decomposition".into(),
        t: 2,
        v,
        k: 2,
        lambda: 1,
        pass: witness.is_none(),
        witness,
        parts: Some((first, second)),
    });

    out.push(check_design("I31", &b3, v, 3, 3, 1));
    out.push(check_design("I31", &b3, v, 3, 2, q - 1));
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DumpFormat {
    Csv,
    RunLength,
}

/// Writes `I_ij` with plane and point coordinates as headers.
///
/// Run-length format: a header line `I<i><j> <rows>x<cols>`, a `cols` line
/// listing column coordinates, then one line per row: plane coordinates and
/// alternating run lengths starting with a (possibly empty) run of zeros.
pub fn dump_submatrix(
    geom: &Geometry,
    part: &OrbitPartition,
    i: usize,
    j: usize,
    format: DumpFormat,
    ceiling: usize,
) -> Result<String, IncidenceError> {
    if !(1..=5).contains(&i) || !(1..=5).contains(&j) {
        return Err(IncidenceError::BadIndex(i, j));
    }
    let rows = part.plane_orbit(i);
    let cols = part.point_orbit(j);
    let cells = rows.len() * cols.len();
    if cells > ceiling {
        return Err(IncidenceError::CeilingExceeded { cells, ceiling });
    }
    let space = geom.space();
    let bits = submatrix_bits(geom, part, i, j);
    let label = |idx: usize| format_coords(&space.coords_at(idx));
    let mut s = String::new();
    match format {
        DumpFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let header: Vec<String> =
                std::iter::once("plane\\point".to_string()).chain(cols.iter().map(|&p| label(p))).collect();
            w.write_record(&header).expect("in-memory write");
            for (r, &pl) in rows.iter().enumerate() {
                let rec: Vec<String> = std::iter::once(label(pl))
                    .chain(bits[r].iter().map(|&b| if b { "1".into() } else { "0".into() }))
                    .collect();
                w.write_record(&rec).expect("in-memory write");
            }
            s = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii");
        }
        DumpFormat::RunLength => {
            let _ = writeln!(s, "I{i}{j} {}x{}", rows.len(), cols.len());
            let heads: Vec<String> = cols.iter().map(|&p| label(p)).collect();
            let _ = writeln!(s, "cols {}", heads.join(" "));
            for (r, &pl) in rows.iter().enumerate() {
                let mut runs = Vec::new();
                let mut cur = false;
                let mut len = 0usize;
                for &b in &bits[r] {
                    if b == cur {
                        len += 1;
                    } else {
                        runs.push(len);
                        cur = b;
                        len = 1;
                    }
                }
                runs.push(len);
                let runs: Vec<String> = runs.iter().map(usize::to_string).collect();
                let _ = writeln!(s, "{} {}", label(pl), runs.join(" "));
            }
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(q: u64) -> (Geometry, OrbitPartition, IncidenceReport) {
        let g = Geometry::for_order(q).unwrap();
        let p = g.partition().unwrap();
        let r = full_report(&g, &p).unwrap();
        (g, p, r)
    }

    #[test]
    fn stats_examples() {
        let (_, _, r7) = setup(7);
        assert_eq!((r7.k(3, 3), r7.r(3, 3)), (10, 10));
        assert_eq!(r7.k(2, 5), 16);
        let (_, _, r9) = setup(9);
        assert_eq!((r9.k(5, 3), r9.r(5, 3)), (9, 27));
        assert_eq!((r9.k(5, 1), r9.r(5, 1)), (0, 0));
        let (_, _, r5) = setup(5);
        assert_eq!(r5.r(3, 1), 10);
        let (_, _, r8) = setup(8);
        assert_eq!(r8.r(3, 3), 10);
    }

    #[test]
    fn tables_hold_on_small_grid() {
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            let (_, _, r) = setup(q);
            for c in r.table_checks() {
                assert!(c.pass, "q={q}: {c:?}");
            }
        }
    }

    #[test]
    fn bad_index_rejected() {
        let (g, p, r) = setup(5);
        assert_eq!(submatrix_stats(&p, &r.counts, 6, 1), Err(IncidenceError::BadIndex(6, 1)));
        assert!(matches!(dump_submatrix(&g, &p, 0, 1, DumpFormat::Csv, 100), Err(IncidenceError::BadIndex(0, 1))));
    }

    #[test]
    fn polarity_examples() {
        let g = Geometry::for_order(7).unwrap();
        let pol = NullPolarity::new(&g).unwrap();
        let s = g.space();
        let img = s.canon(pol.apply(&g, &[1, 4, 2, 1]));
        assert_eq!(img, s.plane([1, 1, 5, 6]).unwrap().coeffs());
        assert_eq!(s.canon(pol.apply(&g, &[1, 0, 0, 0])), [0, 0, 0, 1]);
        let g9 = Geometry::for_order(9).unwrap();
        let p9 = g9.partition().unwrap();
        assert_eq!(null_polarity_check(&g9, &p9), Err(IncidenceError::DegeneratePolarity));
    }

    #[test]
    fn canonical_form_is_permutation_invariant() {
        let m = vec![vec![true, false, true], vec![false, false, true], vec![true, true, false]];
        let p = [m[2].clone(), m[0].clone(), m[1].clone()];
        let pc: Vec<Vec<bool>> = p.iter().map(|r| vec![r[1], r[2], r[0]]).collect();
        assert_eq!(canonical_form(&m), canonical_form(&pc));
    }

    #[test]
    fn dump_shapes() {
        let (g, p, _) = setup(5);
        let csv = dump_submatrix(&g, &p, 2, 1, DumpFormat::Csv, DEFAULT_CELL_CEILING).unwrap();
        let mut reader = csv::Reader::from_reader(csv.as_bytes());
        assert_eq!(reader.headers().unwrap().len(), 7);
        let records: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
        assert_eq!(records.len(), 30);
        for rec in &records {
            assert_eq!(rec.iter().skip(1).filter(|c| *c == "1").count(), 2);
        }
        let rl = dump_submatrix(&g, &p, 2, 1, DumpFormat::RunLength, DEFAULT_CELL_CEILING).unwrap();
        assert!(rl.starts_with("I21 30x6\n"));
        assert_eq!(
            dump_submatrix(&g, &p, 4, 4, DumpFormat::Csv, 100),
            Err(IncidenceError::CeilingExceeded { cells: 3600, ceiling: 100 })
        );
    }

    #[test]
    fn relation_checks_hold() {
        for q in [4u64, 5, 7, 8, 9, 11] {
            let (g, p, r) = setup(q);
            let mut checks = verify_section4_relations(&g, &p, &r);
            checks.extend(verify_section5_values(&g, &p, &r));
            checks.extend(transpose_relations_check(&g, &p, &r, q <= 8));
            if let Ok(c) = null_polarity_check(&g, &p) {
                checks.extend(c);
            }
            checks.extend(design_checks(&g, &p).iter().map(DesignCheck::to_check));
            let failed: Vec<_> = checks.iter().filter(|c| !c.pass).collect();
            assert!(failed.is_empty(), "q={q}: {failed:#?}");
        }
    }
}
