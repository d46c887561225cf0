//! Conley–Zehnder index of piecewise-exponential paths of symplectic
//! matrices, computed as a Robbin–Salamon crossing sum.
//!
//! Coordinates are ordered `(x1, y1, x2, y2, ...)` so the standard complex
//! structure `J0` is block diagonal with blocks `[[0, -1], [1, 0]]` and a
//! direct sum of paths is a plain block-diagonal sum. On each segment the
//! path is `start · exp(s · J0 · S)` for a symmetric generator `S`.

use std::fmt;
use std::ops::Add;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::parse_rational;

const SYMPLECTIC_TOL: f64 = 1e-9;
const ROOT_TOL: f64 = 1e-10;
const DEGENERATE_TOL: f64 = 1e-8;
const ENDPOINT_TOL: f64 = 1e-8;
const MINIMUM_ACCEPT: f64 = 1e-7;
const KERNEL_TOL: f64 = 1e-6;
const MERGE_TOL: f64 = 1e-7;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CzError {
    #[error("matrices must be 2n x 2n, got {0} x {1}")]
    BadShape(usize, usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("generator of segment {0} is not symmetric")]
    NotSymmetric(usize),
    #[error("segment {0} has non-positive duration")]
    NonPositiveDuration(usize),
    #[error("start matrix is not symplectic")]
    NotSymplectic,
    #[error("a path needs at least one segment")]
    EmptyPath,
    #[error("end of the first path does not match the start of the second")]
    EndpointMismatch,
    #[error("paths have different total durations: {0} vs {1}")]
    DurationMismatch(f64, f64),
    #[error("degenerate crossing at t = {time}: crossing form eigenvalue {eigenvalue:e}")]
    DegenerateCrossing { time: f64, eigenvalue: f64 },
    #[error("invalid path file: {0}")]
    Parse(String),
}

/// Exact half-integer, stored doubled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInteger(i64);

impl HalfInteger {
    pub fn from_doubled(twice: i64) -> Self {
        HalfInteger(twice)
    }

    pub fn from_int(n: i64) -> Self {
        HalfInteger(2 * n)
    }

    pub fn doubled(self) -> i64 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn to_integer(self) -> Option<i64> {
        self.is_integer().then_some(self.0 / 2)
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl Add for HalfInteger {
    type Output = HalfInteger;
    fn add(self, rhs: HalfInteger) -> HalfInteger {
        HalfInteger(self.0 + rhs.0)
    }
}

impl std::iter::Sum for HalfInteger {
    fn sum<I: Iterator<Item = HalfInteger>>(iter: I) -> HalfInteger {
        iter.fold(HalfInteger(0), Add::add)
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl Serialize for HalfInteger {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for HalfInteger {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let bad = || serde::de::Error::custom(format!("not a half-integer: {s}"));
        match s.strip_suffix("/2") {
            Some(n) => n.parse::<i64>().map(HalfInteger).map_err(|_| bad()),
            None => s.parse::<i64>().map(HalfInteger::from_int).map_err(|_| bad()),
        }
    }
}

/// Standard complex structure on `R^dim`.
pub fn j0(dim: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(dim, dim);
    for k in 0..dim / 2 {
        j[(2 * k, 2 * k + 1)] = -1.0;
        j[(2 * k + 1, 2 * k)] = 1.0;
    }
    j
}

pub fn is_symplectic(a: &DMatrix<f64>) -> bool {
    if !a.is_square() || a.nrows() % 2 != 0 {
        return false;
    }
    let j = j0(a.nrows());
    let scale = 1.0 + a.norm() * a.norm();
    (a.transpose() * &j * a - j).amax() <= SYMPLECTIC_TOL * scale
}

#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    pub generator: DMatrix<f64>,
    pub duration: f64,
    pub start: DMatrix<f64>,
}

impl Segment {
    fn velocity_matrix(&self) -> DMatrix<f64> {
        j0(self.generator.nrows()) * &self.generator
    }

    pub fn at(&self, s: f64) -> DMatrix<f64> {
        &self.start * (self.velocity_matrix() * s).exp()
    }

    pub fn end(&self) -> DMatrix<f64> {
        self.at(self.duration)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticPath {
    dimension: usize,
    segments: Vec<Segment>,
}

impl SymplecticPath {
    /// Chains `(generator, duration)` segments from `start` (identity when
    /// `None`).
    pub fn new(start: Option<DMatrix<f64>>, pieces: Vec<(DMatrix<f64>, f64)>) -> Result<Self, CzError> {
        let Some((first, _)) = pieces.first() else {
            return Err(CzError::EmptyPath);
        };
        let dim = first.nrows();
        let mut current = start.unwrap_or_else(|| DMatrix::identity(dim, dim));
        if !current.is_square() || current.nrows() % 2 != 0 {
            return Err(CzError::BadShape(current.nrows(), current.ncols()));
        }
        if current.nrows() != dim {
            return Err(CzError::DimensionMismatch(current.nrows(), dim));
        }
        if !is_symplectic(&current) {
            return Err(CzError::NotSymplectic);
        }
        let mut segments = Vec::with_capacity(pieces.len());
        for (i, (generator, duration)) in pieces.into_iter().enumerate() {
            if !generator.is_square() || generator.nrows() % 2 != 0 {
                return Err(CzError::BadShape(generator.nrows(), generator.ncols()));
            }
            if generator.nrows() != dim {
                return Err(CzError::DimensionMismatch(dim, generator.nrows()));
            }
            if (&generator - generator.transpose()).amax() > SYMPLECTIC_TOL * (1.0 + generator.amax()) {
                return Err(CzError::NotSymmetric(i));
            }
            if !(duration > 0.0 && duration.is_finite()) {
                return Err(CzError::NonPositiveDuration(i));
            }
            let seg = Segment {
                generator,
                duration,
                start: current,
            };
            current = seg.end();
            segments.push(seg);
        }
        Ok(SymplecticPath {
            dimension: dim,
            segments,
        })
    }

    /// `e^{it}` on `[0, duration]` in `C^1`.
    pub fn rotation(duration: f64) -> Self {
        Self::new(None, vec![(DMatrix::identity(2, 2), duration)]).expect("valid rotation")
    }

    /// The constant path at a symplectic matrix.
    pub fn constant(at: DMatrix<f64>, duration: f64) -> Result<Self, CzError> {
        let n = at.nrows();
        Self::new(Some(at), vec![(DMatrix::zeros(n, n), duration)])
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn start(&self) -> &DMatrix<f64> {
        &self.segments[0].start
    }

    pub fn end(&self) -> DMatrix<f64> {
        self.segments.last().unwrap().end()
    }

    pub fn duration(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }

    /// The matrix at global time `t`, clamped to the path's interval.
    pub fn at(&self, t: f64) -> DMatrix<f64> {
        let mut t = t.max(0.0);
        for seg in &self.segments {
            if t <= seg.duration {
                return seg.at(t);
            }
            t -= seg.duration;
        }
        self.end()
    }

    /// Same image traversed `factor` times faster.
    pub fn time_scaled(&self, factor: f64) -> Self {
        let pieces = self
            .segments
            .iter()
            .map(|s| (&s.generator * factor, s.duration / factor))
            .collect();
        Self::new(Some(self.start().clone()), pieces).expect("scaling keeps a valid path")
    }

    fn pieces(&self) -> Vec<(DMatrix<f64>, f64)> {
        self.segments.iter().map(|s| (s.generator.clone(), s.duration)).collect()
    }
}

/// `p1` followed by `p2`; requires `end(p1) = start(p2)`.
pub fn concatenate(p1: &SymplecticPath, p2: &SymplecticPath) -> Result<SymplecticPath, CzError> {
    if p1.dimension != p2.dimension {
        return Err(CzError::DimensionMismatch(p1.dimension, p2.dimension));
    }
    let end = p1.end();
    if (&end - p2.start()).amax() > SYMPLECTIC_TOL.sqrt() * (1.0 + end.amax()) {
        return Err(CzError::EndpointMismatch);
    }
    let mut pieces = p1.pieces();
    pieces.extend(p2.pieces());
    SymplecticPath::new(Some(p1.start().clone()), pieces)
}

fn block_diag(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let (n, m) = (a.nrows(), b.nrows());
    let mut out = DMatrix::zeros(n + m, n + m);
    out.view_mut((0, 0), (n, n)).copy_from(a);
    out.view_mut((n, n), (m, m)).copy_from(b);
    out
}

/// Pointwise direct sum over a common refinement of the two segmentations.
pub fn direct_sum(p1: &SymplecticPath, p2: &SymplecticPath) -> Result<SymplecticPath, CzError> {
    let (d1, d2) = (p1.duration(), p2.duration());
    if (d1 - d2).abs() > 1e-12 * d1.max(d2) {
        return Err(CzError::DurationMismatch(d1, d2));
    }
    let (s1, s2) = (p1.segments(), p2.segments());
    let (mut i, mut j) = (0, 0);
    let (mut left1, mut left2) = (s1[0].duration, s2[0].duration);
    let mut pieces = Vec::new();
    while i < s1.len() && j < s2.len() {
        let step = left1.min(left2);
        pieces.push((block_diag(&s1[i].generator, &s2[j].generator), step));
        left1 -= step;
        left2 -= step;
        let eps = 1e-12 * d1.max(1.0);
        if left1 <= eps {
            i += 1;
            left1 = s1.get(i).map_or(0.0, |s| s.duration);
        }
        if left2 <= eps {
            j += 1;
            left2 = s2.get(j).map_or(0.0, |s| s.duration);
        }
    }
    SymplecticPath::new(Some(block_diag(p1.start(), p2.start())), pieces)
}

/// Half weight at segment endpoints, full weight in the interior.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    /// Global time along the path.
    pub time: f64,
    pub segment: usize,
    pub kernel_dim: usize,
    pub signature: i64,
    pub endpoint: bool,
}

impl Crossing {
    pub fn contribution(&self) -> HalfInteger {
        if self.endpoint {
            HalfInteger::from_doubled(self.signature)
        } else {
            HalfInteger::from_int(self.signature)
        }
    }
}

fn shifted(a: &DMatrix<f64>) -> DMatrix<f64> {
    a - DMatrix::identity(a.nrows(), a.ncols())
}

fn sigma_min(a: &DMatrix<f64>) -> f64 {
    shifted(a).singular_values().min()
}

fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let mut flo = f(lo);
    while hi - lo > ROOT_TOL {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn golden_min(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - r * (hi - lo);
    let mut d = lo + r * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    while hi - lo > 1e-13 * (1.0 + hi.abs()) {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - r * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + r * (hi - lo);
            fd = f(d);
        }
    }
    let t = 0.5 * (lo + hi);
    (t, f(t))
}

/// Signature and kernel dimension of the crossing form at local time `s`.
fn classify(seg: &Segment, s: f64, time: f64) -> Result<Option<(usize, i64)>, CzError> {
    let a = seg.at(s);
    let svd = shifted(&a).svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let kernel: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] < KERNEL_TOL)
        .collect();
    if kernel.is_empty() {
        return Ok(None);
    }
    let dim = a.nrows();
    let mut k = DMatrix::zeros(dim, kernel.len());
    for (c, &i) in kernel.iter().enumerate() {
        k.set_column(c, &v_t.row(i).transpose());
    }
    // ω(u, v) = <J0 u, v>, so the form is v ↦ vᵀ J0ᵀ Ȧ v.
    let a_dot = &a * seg.velocity_matrix();
    let m = j0(dim).transpose() * a_dot;
    let sym = (&m + m.transpose()) * 0.5;
    let gamma = k.transpose() * sym * &k;
    let eig = SymmetricEigen::new(gamma);
    let mut signature = 0;
    for &ev in eig.eigenvalues.iter() {
        if ev.abs() < DEGENERATE_TOL {
            return Err(CzError::DegenerateCrossing { time, eigenvalue: ev });
        }
        signature += if ev > 0.0 { 1 } else { -1 };
    }
    Ok(Some((kernel.len(), signature)))
}

fn segment_crossings(seg: &Segment, index: usize, offset: f64) -> Result<Vec<Crossing>, CzError> {
    let tau = seg.duration;
    let x = seg.velocity_matrix();
    let n = ((64.0 * (1.0 + x.norm() * tau)).ceil() as usize).clamp(64, 200_000);
    let h = tau / n as f64;
    let times: Vec<f64> = (0..=n).map(|i| if i == n { tau } else { i as f64 * h }).collect();
    let step = (&x * h).exp();
    let mut mats: Vec<DMatrix<f64>> = Vec::with_capacity(n + 1);
    mats.push(seg.start.clone());
    for i in 1..n {
        let next = &mats[i - 1] * &step;
        mats.push(next);
    }
    mats.push(seg.end());
    let dets: Vec<f64> = mats.iter().map(|a| shifted(a).determinant()).collect();
    let sig: Vec<f64> = mats.iter().map(sigma_min).collect();

    let start_hit = sig[0] < ENDPOINT_TOL;
    let end_hit = sig[n] < ENDPOINT_TOL;
    let det_at = |s: f64| shifted(&seg.at(s)).determinant();
    let sig_at = |s: f64| sigma_min(&seg.at(s));

    let mut interior = Vec::new();
    for i in 0..n {
        if dets[i] != 0.0 && dets[i + 1] != 0.0 && (dets[i] > 0.0) != (dets[i + 1] > 0.0) {
            interior.push(bisect(times[i], times[i + 1], det_at));
        }
    }
    // σ_min(A − I) moves at speed at most ‖A X‖, so a sampled minimum can
    // only hide a zero nearby when it is below that speed times the step.
    let speed: Vec<f64> = mats.iter().map(|a| a.norm() * x.norm()).collect();
    for i in 0..=n {
        let left_ok = i == 0 || sig[i] <= sig[i - 1];
        let right_ok = i == n || sig[i] <= sig[i + 1];
        if !(left_ok && right_ok) {
            continue;
        }
        let (lo, hi) = (i.saturating_sub(1), (i + 1).min(n));
        let reach = speed[lo..=hi].iter().fold(0.0f64, |m, &v| m.max(v)) * h;
        if sig[i] > 1.5 * reach {
            continue;
        }
        let (lo, hi) = (times[lo], times[hi]);
        let (s, v) = golden_min(lo, hi, sig_at);
        if v < MINIMUM_ACCEPT {
            interior.push(s);
        }
    }
    interior.retain(|&s| !((start_hit && s < MERGE_TOL) || (end_hit && tau - s < MERGE_TOL)));
    interior.retain(|&s| s > 0.0 && s < tau);
    interior.sort_by(f64::total_cmp);
    interior.dedup_by(|a, b| (*a - *b).abs() < MERGE_TOL);

    let mut out = Vec::new();
    let mut push = |s: f64, endpoint: bool| -> Result<(), CzError> {
        if let Some((kernel_dim, signature)) = classify(seg, s, offset + s)? {
            out.push(Crossing {
                time: offset + s,
                segment: index,
                kernel_dim,
                signature,
                endpoint,
            });
        }
        Ok(())
    };
    if start_hit {
        push(0.0, true)?;
    }
    for s in interior {
        push(s, false)?;
    }
    if end_hit {
        push(tau, true)?;
    }
    Ok(out)
}

/// Crossings of the path with the Maslov cycle `{det(A − I) = 0}`, segment
/// by segment in time order.
pub fn find_crossings(path: &SymplecticPath) -> Result<Vec<Crossing>, CzError> {
    let mut out = Vec::new();
    let mut offset = 0.0;
    for (i, seg) in path.segments.iter().enumerate() {
        out.extend(segment_crossings(seg, i, offset)?);
        offset += seg.duration;
    }
    Ok(out)
}

pub fn cz_index(path: &SymplecticPath) -> Result<HalfInteger, CzError> {
    Ok(find_crossings(path)?.iter().map(Crossing::contribution).sum())
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Scalar {
    Number(f64),
    Text(String),
}

impl Scalar {
    fn value(&self) -> Result<f64, CzError> {
        match self {
            Scalar::Number(x) => Ok(*x),
            Scalar::Text(s) => parse_scalar(s),
        }
    }
}

/// Parses `3`, `-1/2`, `0.25`, `pi`, `2*pi`, `-pi/2` or `3/4*pi`.
pub fn parse_scalar(text: &str) -> Result<f64, CzError> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || CzError::Parse(format!("cannot read number {text:?}"));
    let plain = |t: &str| -> Result<f64, CzError> {
        if let Some(q) = parse_rational(t) {
            let (n, d) = (q.numer().to_string(), q.denom().to_string());
            Ok(n.parse::<f64>().map_err(|_| bad())? / d.parse::<f64>().map_err(|_| bad())?)
        } else {
            t.parse::<f64>().map_err(|_| bad())
        }
    };
    let Some(at) = s.find("pi") else {
        return plain(&s);
    };
    let coef = match s[..at].trim_end_matches('*') {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => plain(c)?,
    };
    let div = match &s[at + 2..] {
        "" => 1.0,
        rest => plain(rest.strip_prefix('/').ok_or_else(bad)?)?,
    };
    Ok(coef * std::f64::consts::PI / div)
}

#[derive(Deserialize)]
struct SegmentFile {
    generator: Vec<Vec<Scalar>>,
    duration: Scalar,
}

#[derive(Deserialize)]
struct PathFile {
    segments: Vec<SegmentFile>,
    #[serde(default)]
    start: Option<Vec<Vec<Scalar>>>,
}

fn matrix(rows: &[Vec<Scalar>]) -> Result<DMatrix<f64>, CzError> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(CzError::BadShape(n, rows.first().map_or(0, Vec::len)));
    }
    let mut m = DMatrix::zeros(n, n);
    for (i, r) in rows.iter().enumerate() {
        for (j, v) in r.iter().enumerate() {
            m[(i, j)] = v.value()?;
        }
    }
    Ok(m)
}

/// Reads a path from its JSON description.
pub fn parse_path_json(text: &str) -> Result<SymplecticPath, CzError> {
    let file: PathFile = serde_json::from_str(text).map_err(|e| CzError::Parse(e.to_string()))?;
    let start = file.start.as_deref().map(matrix).transpose()?;
    let pieces = file
        .segments
        .iter()
        .map(|s| Ok((matrix(&s.generator)?, s.duration.value()?)))
        .collect::<Result<Vec<_>, CzError>>()?;
    SymplecticPath::new(start, pieces)
}
