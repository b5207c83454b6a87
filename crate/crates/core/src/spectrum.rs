//! Bifurcation-diagram assembly, sampled image clouds and their CSV/JSON forms.
//!
//! Floats are written in shortest round-trip form, so a write followed by a read
//! reproduces every value bit for bit.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::config::MIN_CURVE_SAMPLES;
use crate::error::{Error, Result};
use crate::hopf::{
    admissible, critical_curve_point, cusps, origin_slopes, regime, CurveSample, HopfParams, Regime, SegmentKind,
};
use crate::models::CriticalValuePoint;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub j_min: f64,
    pub j_max: f64,
    pub h_min: f64,
    pub h_max: f64,
}

/// Sampled points of the image of a momentum map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumCloud {
    points: Vec<(f64, f64)>,
    bounds: Option<Bounds>,
    seed: Option<u64>,
}

impl SpectrumCloud {
    pub fn new(points: Vec<(f64, f64)>, seed: Option<u64>) -> Self {
        let bounds = points.split_first().map(|(&(j0, h0), rest)| {
            rest.iter().fold(Bounds { j_min: j0, j_max: j0, h_min: h0, h_max: h0 }, |b, &(j, h)| Bounds {
                j_min: b.j_min.min(j),
                j_max: b.j_max.max(j),
                h_min: b.h_min.min(h),
                h_max: b.h_max.max(h),
            })
        });
        Self { points, bounds, seed }
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn bounds(&self) -> Option<Bounds> {
        self.bounds
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn count(&self) -> usize {
        self.points.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub s: f64,
    #[serde(rename = "J")]
    pub j: f64,
    #[serde(rename = "H")]
    pub h: f64,
}

impl From<&CurveSample> for CurvePoint {
    fn from(c: &CurveSample) -> Self {
        Self { s: c.s, j: c.j, h: c.h }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValuePoint {
    #[serde(rename = "J")]
    pub j: f64,
    #[serde(rename = "H")]
    pub h: f64,
}

/// One of the three closed parameter intervals between cusps and endpoints,
/// restricted to its admissible samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub kind: SegmentKind,
    pub points: Vec<CurveSample>,
}

/// A maximal run of inadmissible curve samples, `d(s) < 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gap {
    pub s_from: f64,
    pub s_to: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagram {
    pub params: HopfParams,
    pub regime: Regime,
    pub cusps: Vec<CurvePoint>,
    pub endpoints: Vec<CurvePoint>,
    /// `[ω + σ√ν, ω − σ√ν]`, present when the elliptic segments are admissible.
    pub slopes: Option<[f64; 2]>,
    /// The `s = 0` hyperbolic point `(0, −ν²/(8D))`, when admissible.
    pub anchor: Option<ValuePoint>,
    pub segments: Vec<Segment>,
    pub gaps: Vec<Gap>,
}

impl Diagram {
    /// Admissible samples in increasing `s`, shared cusp rows written once.
    pub fn unique_samples(&self) -> Vec<CurveSample> {
        let mut out: Vec<CurveSample> = Vec::new();
        for seg in &self.segments {
            for p in &seg.points {
                if out.last().is_none_or(|l| l.s < p.s) {
                    out.push(*p);
                }
            }
        }
        out
    }
}

/// The `s`-grid `√ν(2i − n)/n`, `i = 0..=n`, with the cusp parameters inserted.
fn curve_grid(params: &HopfParams, samples: usize) -> Vec<f64> {
    let r = params.nu().sqrt();
    let n = samples as f64;
    let mut s: Vec<f64> = (0..=samples).map(|i| r * (2.0 * i as f64 - n) / n).collect();
    s.extend(cusps(params));
    s.sort_by(f64::total_cmp);
    s.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * r);
    s
}

pub fn assemble_hopf_diagram(params: &HopfParams, samples: usize) -> Result<Diagram> {
    if samples < MIN_CURVE_SAMPLES {
        return Err(Error::InvalidParams(format!("need at least {MIN_CURVE_SAMPLES} curve samples, got {samples}")));
    }
    if !params.is_specialized() {
        return Err(Error::InvalidParams("diagram assembly needs the a = B = C = 0, b = 1 unfolding".into()));
    }
    let mut d = Diagram {
        params: *params,
        regime: regime(params),
        cusps: Vec::new(),
        endpoints: Vec::new(),
        slopes: None,
        anchor: None,
        segments: Vec::new(),
        gaps: Vec::new(),
    };
    if params.nu() <= 0.0 {
        return Ok(d);
    }
    let r = params.nu().sqrt();
    let c = cusps(params)[1];
    let all: Vec<CurveSample> = curve_grid(params, samples).into_iter().map(|s| critical_curve_point(params, s)).collect();

    let mut gap_start: Option<f64> = None;
    let mut last_bad = 0.0;
    for p in &all {
        if admissible(params, p.s) {
            if let Some(s0) = gap_start.take() {
                d.gaps.push(Gap { s_from: s0, s_to: last_bad });
            }
        } else {
            gap_start.get_or_insert(p.s);
            last_bad = p.s;
        }
    }
    if let Some(s0) = gap_start {
        d.gaps.push(Gap { s_from: s0, s_to: last_bad });
    }

    for (lo, hi) in [(-r, -c), (-c, c), (c, r)] {
        let pts: Vec<CurveSample> =
            all.iter().filter(|p| p.s >= lo && p.s <= hi && admissible(params, p.s)).copied().collect();
        let interior = pts.iter().any(|p| p.s > lo && p.s < hi);
        if interior {
            let kind = crate::hopf::segment_kind(params, 0.5 * (lo + hi));
            d.segments.push(Segment { kind, points: pts });
        }
    }

    for p in all.iter().filter(|p| admissible(params, p.s)) {
        match p.kind {
            SegmentKind::Cusp => d.cusps.push(p.into()),
            SegmentKind::EquilibriumEndpoint => d.endpoints.push(p.into()),
            _ => {}
        }
    }
    if admissible(params, 0.0) {
        let a = critical_curve_point(params, 0.0);
        d.anchor = Some(ValuePoint { j: a.j, h: a.h });
    }
    if d.segments.iter().any(|s| s.kind == SegmentKind::TransversallyElliptic) {
        let (p, m) = origin_slopes(params)?;
        d.slopes = Some([p, m]);
    }
    Ok(d)
}

/// Occupancy counts on a grid aligned with the cloud bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct Raster {
    pub nj: usize,
    pub nh: usize,
    pub bounds: Bounds,
    /// Row-major, `counts[ih * nj + ij]`.
    pub counts: Vec<u64>,
}

impl Raster {
    pub fn count(&self, ij: usize, ih: usize) -> u64 {
        self.counts[ih * self.nj + ij]
    }

    pub fn cell_center(&self, ij: usize, ih: usize) -> (f64, f64) {
        let b = &self.bounds;
        (
            b.j_min + (b.j_max - b.j_min) * (ij as f64 + 0.5) / self.nj as f64,
            b.h_min + (b.h_max - b.h_min) * (ih as f64 + 0.5) / self.nh as f64,
        )
    }
}

fn cell(v: f64, lo: f64, hi: f64, n: usize) -> usize {
    if hi > lo {
        (((v - lo) / (hi - lo) * n as f64) as usize).min(n - 1)
    } else {
        0
    }
}

pub fn rasterize(cloud: &SpectrumCloud, nj: usize, nh: usize) -> Result<Raster> {
    let bounds = cloud.bounds().ok_or(Error::EmptyCloud)?;
    if nj == 0 || nh == 0 {
        return Err(Error::InvalidParams("raster needs at least one cell per axis".into()));
    }
    let mut counts = vec![0u64; nj * nh];
    for &(j, h) in cloud.points() {
        let ij = cell(j, bounds.j_min, bounds.j_max, nj);
        let ih = cell(h, bounds.h_min, bounds.h_max, nh);
        counts[ih * nj + ij] += 1;
    }
    Ok(Raster { nj, nh, bounds, counts })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryRow {
    #[serde(rename = "J")]
    pub j: f64,
    #[serde(rename = "H_min")]
    pub h_min: f64,
    #[serde(rename = "H_max")]
    pub h_max: f64,
}

/// Per-J-bin envelope of the cloud; empty bins are omitted. `J` is the bin centre.
pub fn boundary(cloud: &SpectrumCloud, bins: usize) -> Result<Vec<BoundaryRow>> {
    if bins == 0 {
        return Err(Error::InvalidParams("boundary needs at least one bin".into()));
    }
    let Some(b) = cloud.bounds() else {
        return Ok(Vec::new());
    };
    let mut env: Vec<Option<(f64, f64)>> = vec![None; bins];
    for &(j, h) in cloud.points() {
        let e = &mut env[cell(j, b.j_min, b.j_max, bins)];
        *e = Some(e.map_or((h, h), |(lo, hi)| (lo.min(h), hi.max(h))));
    }
    Ok(env
        .into_iter()
        .enumerate()
        .filter_map(|(i, e)| {
            e.map(|(h_min, h_max)| BoundaryRow {
                j: b.j_min + (b.j_max - b.j_min) * (i as f64 + 0.5) / bins as f64,
                h_min,
                h_max,
            })
        })
        .collect())
}

// ---- serialization ----

fn write_rows<W: Write, T: Serialize>(w: W, header: &[&str], rows: &[T]) -> Result<()> {
    let mut wr = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    wr.write_record(header)?;
    for r in rows {
        wr.serialize(r)?;
    }
    wr.flush()?;
    Ok(())
}

fn read_rows<R: Read, T: for<'de> Deserialize<'de>>(r: R, header: &[&str]) -> Result<Vec<T>> {
    let mut rd = csv::Reader::from_reader(r);
    let got: Vec<String> = rd.headers()?.iter().map(str::to_owned).collect();
    if got != header {
        return Err(Error::Parse(format!("expected header {}, found {}", header.join(","), got.join(","))));
    }
    Ok(rd.deserialize().collect::<std::result::Result<Vec<T>, _>>()?)
}

pub const CURVE_HEADER: [&str; 6] = ["s", "J", "H", "z_double", "hessdet", "kind"];
pub const CRITICAL_HEADER: [&str; 5] = ["J", "H", "z", "branch", "kind"];
pub const CLOUD_HEADER: [&str; 2] = ["J", "H"];
pub const RASTER_HEADER: [&str; 3] = ["J", "H", "count"];
pub const BOUNDARY_HEADER: [&str; 3] = ["J", "H_min", "H_max"];

pub fn write_curve_csv<W: Write>(w: W, samples: &[CurveSample]) -> Result<()> {
    write_rows(w, &CURVE_HEADER, samples)
}

pub fn read_curve_csv<R: Read>(r: R) -> Result<Vec<CurveSample>> {
    read_rows(r, &CURVE_HEADER)
}

pub fn write_critical_csv<W: Write>(w: W, rows: &[CriticalValuePoint]) -> Result<()> {
    write_rows(w, &CRITICAL_HEADER, rows)
}

pub fn read_critical_csv<R: Read>(r: R) -> Result<Vec<CriticalValuePoint>> {
    read_rows(r, &CRITICAL_HEADER)
}

pub fn write_cloud_csv<W: Write>(w: W, cloud: &SpectrumCloud) -> Result<()> {
    write_rows(w, &CLOUD_HEADER, cloud.points())
}

pub fn read_cloud_csv<R: Read>(r: R, seed: Option<u64>) -> Result<SpectrumCloud> {
    Ok(SpectrumCloud::new(read_rows(r, &CLOUD_HEADER)?, seed))
}

pub fn write_raster_csv<W: Write>(w: W, raster: &Raster) -> Result<()> {
    let mut rows = Vec::with_capacity(raster.counts.len());
    for ih in 0..raster.nh {
        for ij in 0..raster.nj {
            let (j, h) = raster.cell_center(ij, ih);
            rows.push((j, h, raster.count(ij, ih)));
        }
    }
    write_rows(w, &RASTER_HEADER, &rows)
}

pub fn write_boundary_csv<W: Write>(w: W, rows: &[BoundaryRow]) -> Result<()> {
    write_rows(w, &BOUNDARY_HEADER, rows)
}

pub fn write_diagram_json<W: Write>(mut w: W, d: &Diagram) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, d)?;
    w.write_all(b"\n")?;
    Ok(())
}

pub fn read_diagram_json<R: Read>(r: R) -> Result<Diagram> {
    Ok(serde_json::from_reader(r)?)
}
