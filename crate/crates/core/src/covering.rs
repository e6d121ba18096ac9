//! The `[q+1, q−3, 5]_q` GDRS code whose parity-check columns are the cubic
//! points: syndrome census, covering radius, multiplicities and μ-density.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::check::Check;
use crate::classify::{Geometry, OrbitPartition, PointClass};
use crate::cubic::{plane_through_params, ChordType};
use crate::gf::FieldSpec;
use crate::incidence::{IncidenceCounts, SCHEMA_VERSION};
use crate::pg3::Coords;

/// Largest `q^(q−3)` for which the codewords are enumerated.
pub const CODEWORD_ENUMERATION_CAP: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoveringError {
    #[error("the code needs q >= 5, got q = {0}")]
    TooSmall(usize),
    #[error("columns {0:?} of the parity-check matrix are dependent")]
    NotMds([usize; 4]),
    #[error("covering radius is {radius}, not 3; witness syndrome {witness:?}")]
    Radius { radius: u8, witness: Coords },
}

/// Parity-check matrix `H` (4 × (q+1)) stored by columns.
#[derive(Debug, Clone)]
pub struct GdrsCode {
    field: FieldSpec,
    columns: Vec<Coords>,
}

fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Builds the code from the cubic points in parameter order and checks
/// that every four columns are independent.
pub fn build_gdrs(geom: &Geometry) -> Result<GdrsCode, CoveringError> {
    let q = geom.q();
    if q < 5 {
        return Err(CoveringError::TooSmall(q));
    }
    let space = geom.space();
    let columns: Vec<Coords> = geom.cubic().point_indices().iter().map(|&p| space.coords_at(p)).collect();
    let n = columns.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    if space.rank(&[columns[a], columns[b], columns[c], columns[d]]) != 4 {
                        return Err(CoveringError::NotMds([a, b, c, d]));
                    }
                }
            }
        }
    }
    Ok(GdrsCode { field: space.field().clone(), columns })
}

impl GdrsCode {
    pub fn q(&self) -> usize {
        self.field.order() as usize
    }

    pub fn n(&self) -> usize {
        self.columns.len()
    }

    pub fn k(&self) -> usize {
        self.n() - 4
    }

    pub fn d(&self) -> usize {
        5
    }

    pub fn columns(&self) -> &[Coords] {
        &self.columns
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn syndrome_index(&self, s: &Coords) -> usize {
        let q = self.q();
        s.iter().rev().fold(0, |acc, &c| acc * q + c as usize)
    }

    pub fn syndrome_at(&self, index: usize) -> Coords {
        let q = self.q();
        std::array::from_fn(|i| ((index / q.pow(i as u32)) % q) as u16)
    }

    /// `H·x` for a word given as `(position, coefficient)` pairs.
    pub fn syndrome(&self, word: &[(usize, u16)]) -> Coords {
        let f = &self.field;
        word.iter().fold([0; 4], |acc, &(pos, c)| {
            let col = &self.columns[pos];
            std::array::from_fn(|i| f.add(acc[i], f.mul(c, col[i])))
        })
    }

    /// `A_5` by running over all `q^(q−3)` codewords, if that is at most `cap`.
    pub fn enumerate_weight5(&self, cap: u64) -> Option<u64> {
        let q = self.q() as u64;
        let k = self.k();
        if q.checked_pow(k as u32).is_none_or(|total| total > cap) {
            return None;
        }
        let f = &self.field;
        let inv = invert4(f, &self.columns[..4])?;
        // x_A = −H_A⁻¹ H_B x_B
        let m: Vec<Coords> = self.columns[4..]
            .iter()
            .map(|col| std::array::from_fn(|r| f.neg((0..4).fold(0, |acc, c| f.add(acc, f.mul(inv[r][c], col[c]))))))
            .collect();
        let mut xb = vec![0u16; k];
        let mut count = 0u64;
        loop {
            let mut xa = [0u16; 4];
            for (i, &c) in xb.iter().enumerate() {
                if c != 0 {
                    for r in 0..4 {
                        xa[r] = f.add(xa[r], f.mul(c, m[i][r]));
                    }
                }
            }
            let w = xb.iter().chain(&xa).filter(|&&c| c != 0).count();
            if w == 5 {
                count += 1;
            }
            let mut pos = 0;
            while pos < k {
                xb[pos] += 1;
                if (xb[pos] as u64) < q {
                    break;
                }
                xb[pos] = 0;
                pos += 1;
            }
            if pos == k {
                break;
            }
        }
        Some(count)
    }
}

/// Inverse of the 4×4 matrix with the given columns.
fn invert4(f: &FieldSpec, columns: &[Coords]) -> Option<[[u16; 4]; 4]> {
    let mut a: [[u16; 8]; 4] =
        std::array::from_fn(|r| std::array::from_fn(|c| if c < 4 { columns[c][r] } else { (c - 4 == r) as u16 }));
    for col in 0..4 {
        let piv = (col..4).find(|&r| a[r][col] != 0)?;
        a.swap(col, piv);
        let s = f.inv(a[col][col]);
        for c in 0..8 {
            a[col][c] = f.mul(s, a[col][c]);
        }
        for r in 0..4 {
            if r != col && a[r][col] != 0 {
                let t = a[r][col];
                for c in 0..8 {
                    a[r][c] = f.sub(a[r][c], f.mul(t, a[col][c]));
                }
            }
        }
    }
    Some(std::array::from_fn(|r| std::array::from_fn(|c| a[r][c + 4])))
}

/// Coset-leader weights and multiplicities for all `q⁴` syndromes.
#[derive(Debug, Clone)]
pub struct SyndromeCensus {
    /// leader weight, `u8::MAX` if above 3
    pub weight: Vec<u8>,
    /// number of weight-2 words with each syndrome
    pub m2: Vec<u32>,
    /// number of weight-3 words with each syndrome
    pub m3: Vec<u32>,
}

impl SyndromeCensus {
    /// Number of syndromes of leader weight 0, 1, 2, 3 and above 3.
    pub fn histogram(&self) -> [u64; 5] {
        let mut h = [0u64; 5];
        for &w in &self.weight {
            h[(w as usize).min(4)] += 1;
        }
        h
    }

    pub fn deep_holes(&self) -> impl Iterator<Item = usize> + '_ {
        self.weight.iter().enumerate().filter(|&(_, &w)| w == 3).map(|(s, _)| s)
    }

    /// CSV `weight,count` of the leader-weight histogram.
    pub fn histogram_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["weight", "count"]).expect("in-memory write");
        for (k, c) in self.histogram().iter().enumerate() {
            let label = if k == 4 { ">3".to_string() } else { k.to_string() };
            w.write_record([label, c.to_string()]).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii")
    }
}

/// Marks syndromes reachable by words of weight 0, 1, 2, 3 and counts the
/// weight-2 and weight-3 words landing on each.
pub fn syndrome_census(code: &GdrsCode) -> SyndromeCensus {
    let q = code.q();
    let n = code.n();
    let size = q.pow(4);
    let f = code.field();
    let nonzero: Vec<u16> = f.codes().filter(|&c| c != 0).collect();
    let scaled: Vec<Vec<Coords>> =
        code.columns().iter().map(|col| nonzero.iter().map(|&l| col.map(|x| f.mul(l, x))).collect()).collect();
    let add = |a: &Coords, b: &Coords| -> Coords { std::array::from_fn(|i| f.add(a[i], b[i])) };

    let mut weight = vec![u8::MAX; size];
    weight[0] = 0;
    for col in &scaled {
        for v in col {
            weight[code.syndrome_index(v)] = weight[code.syndrome_index(v)].min(1);
        }
    }
    let mut m2 = vec![0u32; size];
    for a in 0..n {
        for b in a + 1..n {
            for va in &scaled[a] {
                for vb in &scaled[b] {
                    let s = code.syndrome_index(&add(va, vb));
                    m2[s] += 1;
                    weight[s] = weight[s].min(2);
                }
            }
        }
    }

    let triples: Vec<(usize, usize, usize)> =
        (0..n).flat_map(|a| (a + 1..n).flat_map(move |b| (b + 1..n).map(move |c| (a, b, c)))).collect();
    let count = |chunk: &[(usize, usize, usize)]| {
        let mut m = vec![0u32; size];
        for &(a, b, c) in chunk {
            for va in &scaled[a] {
                for vb in &scaled[b] {
                    let ab = add(va, vb);
                    for vc in &scaled[c] {
                        m[code.syndrome_index(&add(&ab, vc))] += 1;
                    }
                }
            }
        }
        m
    };
    let merge = |mut x: Vec<u32>, y: Vec<u32>| {
        for (a, b) in x.iter_mut().zip(y) {
            *a += b;
        }
        x
    };
    #[cfg(feature = "parallel")]
    let m3 = triples.par_chunks(16).map(count).reduce(|| vec![0u32; size], merge);
    #[cfg(not(feature = "parallel"))]
    let m3 = triples.chunks(16).map(count).fold(vec![0u32; size], merge);

    for (s, &m) in m3.iter().enumerate() {
        if m > 0 {
            weight[s] = weight[s].min(3);
        }
    }
    SyndromeCensus { weight, m2, m3 }
}

/// Largest leader weight; fails unless it is 3.
pub fn covering_radius(code: &GdrsCode, census: &SyndromeCensus) -> Result<u8, CoveringError> {
    let (s, &radius) = census.weight.iter().enumerate().max_by_key(|&(_, &w)| w).expect("nonempty census");
    if radius != 3 {
        return Err(CoveringError::Radius { radius, witness: code.syndrome_at(s) });
    }
    Ok(radius)
}

/// `μ = (q²−3q+2)/6` for `q ≢ 0 (mod 3)`, `(q²−3q)/6` otherwise.
pub fn mu_formula(q: u64) -> u64 {
    if q.is_multiple_of(3) {
        (q * q - 3 * q) / 6
    } else {
        (q * q - 3 * q + 2) / 6
    }
}

/// The density formula for a code with `d = 2R−1 = 5`.
pub fn gamma_formula(q: u64, mu: u64, a5: u64) -> BigRational {
    let n = q + 1;
    let big = |v: u64| BigInt::from(v);
    let num = big(binom(n, 3)) * big(q - 1).pow(3) - big(10) * big(a5);
    let covered: u64 = (0..3).map(|i| binom(n, i) * (q - 1).pow(i as u32)).sum();
    let den = big(mu) * (big(q).pow(4) - big(covered));
    BigRational::new(num, den)
}

/// The closed form printed for `μ = (q²−3q+2)/6`, as a ratio of two sextics.
pub fn gamma_printed_closed_form(q: u64) -> BigRational {
    let q = BigInt::from(q);
    let num = q.pow(6) - 6 * q.pow(4) + 4 * q.pow(3) + 5 * q.pow(2) - 4 * &q;
    let den = q.pow(6) - 9 * q.pow(4) + 8 * q.pow(3) + 8 * q.pow(2) - 8 * &q;
    BigRational::new(num, den)
}

/// Covering radius, multiplicity and density figures of the code.
#[derive(Debug, Clone)]
pub struct McfReport {
    pub q: usize,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub radius: u8,
    pub mu_formula: u64,
    pub mu_min: u64,
    pub deep_holes: u64,
    pub sum_m: u64,
    pub a5_formula: u64,
    pub a5_enumerated: Option<u64>,
    pub gamma_direct: BigRational,
    pub gamma_formula: BigRational,
    pub histogram: [u64; 5],
}

/// Collects the figures; mismatches show up in [`McfReport::checks`].
pub fn mu_and_density(code: &GdrsCode, census: &SyndromeCensus) -> Result<McfReport, CoveringError> {
    let radius = covering_radius(code, census)?;
    let q = code.q() as u64;
    let mu = mu_formula(q);
    let (mut deep, mut sum, mut min) = (0u64, 0u64, u64::MAX);
    for s in census.deep_holes() {
        let m = census.m3[s] as u64;
        deep += 1;
        sum += m;
        min = min.min(m);
    }
    let a5 = (q - 1) * binom(q + 1, 5);
    Ok(McfReport {
        q: code.q(),
        n: code.n(),
        k: code.k(),
        d: code.d(),
        radius,
        mu_formula: mu,
        mu_min: min,
        deep_holes: deep,
        sum_m: sum,
        a5_formula: a5,
        a5_enumerated: code.enumerate_weight5(CODEWORD_ENUMERATION_CAP),
        gamma_direct: BigRational::new(sum.into(), BigInt::from(mu) * BigInt::from(deep)),
        gamma_formula: gamma_formula(q, mu, a5),
        histogram: census.histogram(),
    })
}

fn ratio_json(r: &BigRational) -> serde_json::Value {
    serde_json::json!({
        "num": r.numer().to_string(),
        "den": r.denom().to_string(),
        "approx": r.to_f64().unwrap_or(f64::NAN),
    })
}

impl McfReport {
    /// `[n,k,d]_q R=.. mu=.. gamma=a/b≈x`
    pub fn summary(&self) -> String {
        let g = &self.gamma_direct;
        let approx = g.to_f64().unwrap_or(f64::NAN);
        let frac = format!("{}/{}", g.numer(), g.denom());
        let dec = format!("{approx:.4}");
        let dec = dec.trim_end_matches('0').trim_end_matches('.');
        let rel = if (g * BigRational::from_integer(10_000.into())).is_integer() { "=" } else { "≈" };
        format!(
            "[{},{},{}]_{} R={} mu={} D={} gamma={frac}{rel}{dec}",
            self.n, self.k, self.d, self.q, self.radius, self.mu_min, self.deep_holes
        )
    }

    pub fn checks(&self) -> Vec<Check> {
        let q = self.q as u64;
        let n = self.n as u64;
        let mut out = vec![
            Check::equal("[n, k, d] = [q+1, q−3, 5]", [self.n, self.k, self.d], [self.q + 1, self.q - 3, 5]),
            Check::equal("covering radius", self.radius, 3),
            Check::equal(
                "leader weights 0, 1, 2",
                self.histogram[..3].to_vec(),
                vec![1, n * (q - 1), binom(n, 2) * (q - 1) * (q - 1)],
            ),
            Check::equal("μ_min = μ", self.mu_min, self.mu_formula),
            Check::equal("γ_direct = γ_formula", &self.gamma_direct, &self.gamma_formula),
            Check::from_bool("γ > 1", self.gamma_direct > BigRational::from_integer(1.into()), || {
                format!("γ = {}", self.gamma_direct)
            }),
        ];
        match self.a5_enumerated {
            Some(a5) => out.push(Check::equal("A5 by codeword enumeration", a5, self.a5_formula)),
            None => {
                out.push(Check::skip("A5 by codeword enumeration", format!("q^(q−3) above {CODEWORD_ENUMERATION_CAP}")))
            }
        }
        out
    }

    /// Printed sextic ratio against the direct value, when `q ≢ 0 (mod 3)`.
    pub fn printed_closed_form(&self) -> Option<(BigRational, bool)> {
        (!self.q.is_multiple_of(3)).then(|| {
            let p = gamma_printed_closed_form(self.q as u64);
            let same = p == self.gamma_direct;
            (p, same)
        })
    }

    pub fn to_json(&self, checks: &[Check]) -> serde_json::Value {
        let mut v = serde_json::json!({
            "schema_version": SCHEMA_VERSION,
            "q": self.q,
            "n": self.n,
            "k": self.k,
            "d": self.d,
            "R": self.radius,
            "mu": self.mu_min,
            "D": self.deep_holes,
            "gamma": ratio_json(&self.gamma_direct),
            "A5": self.a5_formula,
            "checks": checks,
        });
        if let Some((p, same)) = self.printed_closed_form() {
            v["printed_closed_form"] = serde_json::json!({"gamma": ratio_json(&p), "matches_direct": same});
        }
        v
    }
}

/// Unique weight-2 leaders, and every deep hole reached by at least two
/// weight-3 words.
pub fn newton_radius_check(census: &SyndromeCensus) -> Vec<Check> {
    let bad2 = census.weight.iter().zip(&census.m2).position(|(&w, &m)| w == 2 && m != 1);
    let bad3 = census.deep_holes().find(|&s| census.m3[s] < 2);
    vec![
        Check::from_bool("weight-2 cosets have one weight-2 word", bad2.is_none(), || {
            format!("syndrome #{} has {}", bad2.unwrap(), census.m2[bad2.unwrap()])
        }),
        Check::from_bool("deep holes have at least two weight-3 words", bad3.is_none(), || {
            format!("syndrome #{} has {}", bad3.unwrap(), census.m3[bad3.unwrap()])
        }),
    ]
}

/// `m(λs) = m(s)` for every deep hole and every nonzero `λ`.
pub fn scalar_invariance_check(code: &GdrsCode, census: &SyndromeCensus) -> Check {
    let f = code.field();
    for s in census.deep_holes() {
        let v = code.syndrome_at(s);
        for l in f.codes().filter(|&c| c > 1) {
            let t = code.syndrome_index(&v.map(|x| f.mul(l, x)));
            if census.weight[t] != 3 || census.m3[t] != census.m3[s] {
                return Check::fail("m(λs) = m(s)", format!("syndrome {v:?}, λ code {l}"));
            }
        }
    }
    Check::pass("m(λs) = m(s)")
}

/// Deep holes against the geometry: each is a point off `C` and off every
/// real chord, its multiplicity is its number of `3_C`-planes, the minimum
/// sits exactly on T-points (TO-points if `q ≡ 0 mod 3`), and
/// `D = (q−1)·#{points off C and off real chords}`.
pub fn geometric_cross_check(
    geom: &Geometry,
    part: &OrbitPartition,
    counts: &IncidenceCounts,
    code: &GdrsCode,
    census: &SyndromeCensus,
) -> Vec<Check> {
    let space = geom.space();
    let q = geom.q() as u64;
    let mut bad = None;
    let mut min = u32::MAX;
    for s in census.deep_holes() {
        let p = space.index_of(&space.canon(code.syndrome_at(s)));
        if geom.cubic().contains(p) || geom.chords().chord_type(p) == Some(ChordType::RealChord) {
            bad = Some(format!("deep hole {:?} is on C or a real chord", code.syndrome_at(s)));
            break;
        }
        if census.m3[s] != counts.nd[p][3] {
            bad = Some(format!("deep hole {:?}: m = {}, n3 = {}", code.syndrome_at(s), census.m3[s], counts.nd[p][3]));
            break;
        }
        min = min.min(census.m3[s]);
    }
    let mut out = vec![Check::from_bool("m(s) = n3 of the point of s", bad.is_none(), || bad.unwrap())];

    let target = if geom.xi() == 0 { PointClass::TO } else { PointClass::T };
    let off: Vec<usize> = (0..space.size())
        .filter(|&p| !geom.cubic().contains(p) && geom.chords().chord_type(p) != Some(ChordType::RealChord))
        .collect();
    let argmin: Vec<usize> = off.iter().copied().filter(|&p| counts.nd[p][3] == min).collect();
    let expected = part.point_orbit(target.orbit());
    out.push(Check::from_bool(
        format!("minimum multiplicity exactly on {} points", target.label()),
        argmin == expected,
        || format!("{} points attain the minimum, {} expected", argmin.len(), expected.len()),
    ));
    let deep = census.deep_holes().count() as u64;
    out.push(Check::equal("D = (q−1)·#(points off C and off real chords)", deep, (q - 1) * off.len() as u64));
    out
}

/// Saturation profile of a subset of the cubic, given by positions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SaturationProfile {
    pub spans: bool,
    /// points on no bisecant of the subset
    pub free_points: usize,
    /// fewest subset-triple planes through a free point, with that point
    pub min_planes: Option<(usize, u32)>,
}

impl SaturationProfile {
    pub fn is_saturating(&self, mu: u32) -> bool {
        self.spans && self.min_planes.is_some_and(|(_, m)| m >= mu)
    }
}

pub fn saturation_profile(geom: &Geometry, subset: &[usize]) -> SaturationProfile {
    let space = geom.space();
    let cubic = geom.cubic();
    let coords: Vec<Coords> = subset.iter().map(|&k| space.coords_at(cubic.point_indices()[k])).collect();
    let spans = space.rank(&coords) == 4;
    let mut on_bisecant = vec![false; space.size()];
    for a in 0..coords.len() {
        for b in a + 1..coords.len() {
            let line = space.line_from_coords(&coords[a], &coords[b]).expect("distinct points");
            for &p in line.point_indices() {
                on_bisecant[p] = true;
            }
        }
    }
    let mut planes = vec![0u32; space.size()];
    let params = cubic.params();
    for a in 0..subset.len() {
        for b in a + 1..subset.len() {
            for c in b + 1..subset.len() {
                let pl = plane_through_params(space, params[subset[a]], params[subset[b]], params[subset[c]])
                    .expect("three curve points span a plane");
                for p in space.points_on_plane(&pl.coeffs()) {
                    planes[p] += 1;
                }
            }
        }
    }
    let free: Vec<usize> = (0..space.size()).filter(|&p| !on_bisecant[p]).collect();
    let min_planes = free.iter().map(|&p| (p, planes[p])).min_by_key(|&(_, m)| m);
    SaturationProfile { spans, free_points: free.len(), min_planes }
}

/// The three saturating conditions for the whole cubic and, optionally,
/// failure of each single-point deletion.
pub fn verify_saturating(geom: &Geometry, part: &OrbitPartition, minimality: bool) -> Vec<Check> {
    let q = geom.q() as u64;
    let mu = mu_formula(q) as u32;
    let all: Vec<usize> = (0..geom.cubic().len()).collect();
    let prof = saturation_profile(geom, &all);
    let mut out = vec![
        Check::from_bool("M1: the cubic spans PG(3,q)", prof.spans, || "rank below 4".into()),
        Check::from_bool("M2: some point is on no bisecant", prof.free_points > 0, || {
            "every point is on a bisecant".into()
        }),
    ];
    match prof.min_planes {
        Some((p, m)) => {
            out.push(Check::from_bool(
                format!("M3: free points lie on at least μ = {mu} triple planes"),
                m >= mu,
                || format!("point #{p} lies on {m}"),
            ));
            let target = if geom.xi() == 0 { PointClass::TO } else { PointClass::T };
            out.push(Check::from_bool(
                format!("M3 minimum {mu} attained on a {} point", target.label()),
                m == mu && part.point_class(p) == target,
                || format!("minimum {m} at point #{p} of class {}", part.point_class(p).label()),
            ));
        }
        None => out.push(Check::fail("M3", "no free points")),
    }
    if minimality {
        let mut kept = Vec::new();
        for skip in 0..all.len() {
            let rest: Vec<usize> = all.iter().copied().filter(|&k| k != skip).collect();
            if saturation_profile(geom, &rest).is_saturating(mu) {
                kept.push(skip);
            }
        }
        out.push(Check::from_bool("minimal: every single deletion breaks saturation", kept.is_empty(), || {
            format!("still saturating after deleting positions {kept:?}")
        }));
    }
    out
}

/// Everything the code suite reports for one `q`.
pub struct CodeSuite {
    pub code: GdrsCode,
    pub census: SyndromeCensus,
    pub report: McfReport,
    pub checks: Vec<Check>,
}

/// Builds the code, runs the census and collects the code-level checks.
/// Geometric cross-checks need the incidence counts and are run separately.
pub fn run_code_suite(geom: &Geometry) -> Result<CodeSuite, CoveringError> {
    let code = build_gdrs(geom)?;
    let census = syndrome_census(&code);
    let report = mu_and_density(&code, &census)?;
    let mut checks = report.checks();
    checks.extend(newton_radius_check(&census));
    checks.push(scalar_invariance_check(&code, &census));
    let all_above = census.deep_holes().all(|s| census.m3[s] as u64 >= report.mu_formula);
    checks.push(Check::from_bool("every deep hole has multiplicity at least μ", all_above, || {
        format!("minimum {}", report.mu_min)
    }));
    Ok(CodeSuite { code, census, report, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::incidence::count_incidences;

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn small_q_rejected() {
        let g = Geometry::for_order(4).unwrap();
        assert!(matches!(build_gdrs(&g), Err(CoveringError::TooSmall(4))));
    }

    #[test]
    fn q5_census() {
        let g = Geometry::for_order(5).unwrap();
        let code = build_gdrs(&g).unwrap();
        assert_eq!((code.n(), code.k(), code.d()), (6, 2, 5));
        let census = syndrome_census(&code);
        assert_eq!(census.histogram(), [1, 24, 240, 360, 0]);
        let r = mu_and_density(&code, &census).unwrap();
        assert_eq!((r.radius, r.mu_min, r.deep_holes, r.sum_m), (3, 2, 360, 1040));
        assert_eq!(r.gamma_direct, ratio(13, 9));
        assert_eq!(r.a5_enumerated, Some(r.a5_formula));
        assert_eq!(r.summary(), "[6,2,5]_5 R=3 mu=2 D=360 gamma=13/9≈1.4444");
        let (printed, same) = r.printed_closed_form().unwrap();
        assert_eq!(printed, ratio(1040, 930));
        assert!(!same);
    }

    #[test]
    fn q7_density() {
        assert_eq!(gamma_formula(7, 5, 336), ratio(13, 10));
        let g = Geometry::for_order(7).unwrap();
        let suite = run_code_suite(&g).unwrap();
        assert_eq!(suite.report.gamma_direct, ratio(13, 10));
        assert!(suite.report.summary().ends_with("gamma=13/10=1.3"), "{}", suite.report.summary());
        assert!(suite.checks.iter().all(|c| c.pass), "{:#?}", suite.checks);
    }

    #[test]
    fn mu_values() {
        let got: Vec<u64> = [5, 7, 8, 9, 11, 13].iter().map(|&q| mu_formula(q)).collect();
        assert_eq!(got, vec![2, 5, 7, 9, 15, 22]);
    }

    #[test]
    fn geometry_agrees_with_census() {
        for q in [5u64, 7, 8, 9] {
            let g = Geometry::for_order(q).unwrap();
            let p = g.partition().unwrap();
            let counts = count_incidences(&g, &p);
            let suite = run_code_suite(&g).unwrap();
            let mut checks = suite.checks.clone();
            checks.extend(geometric_cross_check(&g, &p, &counts, &suite.code, &suite.census));
            checks.extend(verify_saturating(&g, &p, q <= 7));
            assert!(checks.iter().all(|c| c.pass), "q={q}: {checks:#?}");
        }
    }

    #[test]
    fn histogram_csv_shape() {
        let g = Geometry::for_order(5).unwrap();
        let code = build_gdrs(&g).unwrap();
        let csv = syndrome_census(&code).histogram_csv();
        assert_eq!(csv, "weight,count\n0,1\n1,24\n2,240\n3,360\n>3,0\n");
    }
}
