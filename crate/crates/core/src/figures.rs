//! Data behind the G-versus-concurrence plots: random-state scatter with
//! the two analytic boundary curves, and fixed-purity slices.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::concurrence::concurrence_mixed;
use crate::ensembles::{fixed_purity, ginibre, EnsembleSpec};
use crate::error::{Error, Result};
use crate::gmeasure::{analyze, lower_bound_g, upper_bound_g, Verdict};
use crate::states::{purity, DensityMatrix};

/// Slack allowed when checking a sample against the boundary curves.
pub const BOUND_TOL: f64 = 1e-9;
/// Points per boundary curve in [`scan_bounds`].
pub const BOUND_CURVE_POINTS: usize = 200;
/// Concurrence bin width in [`purity_slice`].
pub const BIN_WIDTH: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowKind {
    Sample,
    LowerBound,
    UpperBound,
}

/// One row of the scan-bounds table. Column order is fixed:
/// `kind, concurrence, g, purity, rank, violates`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub kind: RowKind,
    pub concurrence: f64,
    pub g: f64,
    pub purity: f64,
    pub rank: usize,
    /// 1 if the sample lies outside `C²(2+C²) ≤ G ≤ 1 + 2C²` (beyond [`BOUND_TOL`]).
    pub violates: u8,
}

/// Whether `(c, g)` lies outside the region between the two curves.
pub fn violates_bounds(concurrence: f64, g: f64) -> bool {
    g < lower_bound_g(concurrence) - BOUND_TOL || g > upper_bound_g(concurrence) + BOUND_TOL
}

/// `count` Ginibre states cycling through `ranks`, followed by both
/// boundary curves. Lower-curve points are pure states (rank 1, purity 1);
/// upper-curve points are the phase-correlated family with `C = 2γ`
/// (rank 2, purity `½ + C²/2`).
pub fn scan_bounds(count: u64, seed: u64, ranks: &[usize]) -> Result<Vec<ScanRow>> {
    if count == 0 {
        return Err(Error::InvalidArgument("count must be >= 1".into()));
    }
    if ranks.is_empty() {
        return Err(Error::InvalidArgument("at least one rank required".into()));
    }
    let mut rows: Vec<ScanRow> = (0..count)
        .into_par_iter()
        .map(|i| {
            let rank = ranks[(i % ranks.len() as u64) as usize];
            let rho = ginibre(seed, i, rank)?;
            let conc = concurrence_mixed(&rho);
            let g = analyze(&rho).g;
            Ok(ScanRow {
                kind: RowKind::Sample,
                concurrence: conc,
                g,
                purity: purity(&rho),
                rank,
                violates: violates_bounds(conc, g) as u8,
            })
        })
        .collect::<Result<_>>()?;

    let last = (BOUND_CURVE_POINTS - 1) as f64;
    for k in 0..BOUND_CURVE_POINTS {
        let conc = k as f64 / last;
        rows.push(ScanRow {
            kind: RowKind::LowerBound,
            concurrence: conc,
            g: lower_bound_g(conc),
            purity: 1.0,
            rank: 1,
            violates: 0,
        });
    }
    for k in 0..BOUND_CURVE_POINTS {
        let conc = k as f64 / last;
        rows.push(ScanRow {
            kind: RowKind::UpperBound,
            concurrence: conc,
            g: upper_bound_g(conc),
            purity: 0.5 + conc * conc / 2.0,
            rank: 2,
            violates: 0,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SliceRow {
    pub index: u64,
    pub concurrence: f64,
    pub g: f64,
    pub purity: f64,
}

/// Spread of G among the samples of one concurrence bin.
///
/// `g_spread` is the plain `max(G) − min(G)`; it includes the slope of any
/// curve across the bin width. `residual_spread` is the same spread of
/// `G − C²(2+C²)`, which vanishes when all samples of the bin lie on a
/// single curve `G(C)` of the pure-state form, and is the quantity used to
/// tell an area from a line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinSummary {
    pub c_lo: f64,
    pub c_hi: f64,
    pub n: usize,
    pub g_min: f64,
    pub g_max: f64,
    pub g_spread: f64,
    pub residual_spread: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PuritySlice {
    pub rows: Vec<SliceRow>,
    pub bins: Vec<BinSummary>,
}

impl PuritySlice {
    pub fn max_residual_spread(&self) -> f64 {
        self.bins.iter().map(|b| b.residual_spread).fold(0.0, f64::max)
    }

    pub fn max_g_spread(&self) -> f64 {
        self.bins.iter().map(|b| b.g_spread).fold(0.0, f64::max)
    }
}

/// Bins of width [`BIN_WIDTH`] over `[0, 1]`; only non-empty bins are returned.
pub fn bin_by_concurrence(rows: &[SliceRow]) -> Vec<BinSummary> {
    let nbins = (1.0 / BIN_WIDTH).round() as usize;
    let mut acc: Vec<Option<(usize, f64, f64, f64, f64)>> = vec![None; nbins];
    for r in rows {
        let b = ((r.concurrence / BIN_WIDTH).floor() as usize).min(nbins - 1);
        let resid = r.g - lower_bound_g(r.concurrence);
        let e = acc[b].get_or_insert((0, f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY));
        e.0 += 1;
        e.1 = e.1.min(r.g);
        e.2 = e.2.max(r.g);
        e.3 = e.3.min(resid);
        e.4 = e.4.max(resid);
    }
    acc.into_iter()
        .enumerate()
        .filter_map(|(b, e)| {
            e.map(|(n, gmin, gmax, rmin, rmax)| BinSummary {
                c_lo: b as f64 * BIN_WIDTH,
                c_hi: (b + 1) as f64 * BIN_WIDTH,
                n,
                g_min: gmin,
                g_max: gmax,
                g_spread: gmax - gmin,
                residual_spread: rmax - rmin,
            })
        })
        .collect()
}

/// `count` states with purity in `[purity − window, purity + window]` and
/// the per-bin spread of G.
pub fn purity_slice(target: f64, window: f64, count: u64, seed: u64) -> Result<PuritySlice> {
    if count == 0 {
        return Err(Error::InvalidArgument("count must be >= 1".into()));
    }
    let rows: Vec<SliceRow> = (0..count)
        .into_par_iter()
        .map(|i| {
            let rho = fixed_purity(seed, i, target, window)?;
            Ok(SliceRow {
                index: i,
                concurrence: concurrence_mixed(&rho),
                g: analyze(&rho).g,
                purity: purity(&rho),
            })
        })
        .collect::<Result<_>>()?;
    let bins = bin_by_concurrence(&rows);
    Ok(PuritySlice { rows, bins })
}

/// Per-state summary of an ensemble run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleRow {
    pub index: u64,
    pub concurrence: f64,
    pub g: f64,
    pub g_hs: f64,
    pub l3: f64,
    pub purity: f64,
    pub verdict: Verdict,
    pub c_min: f64,
    pub c_max: f64,
}

pub fn ensemble_row(index: u64, rho: &DensityMatrix) -> EnsembleRow {
    let r = analyze(rho);
    EnsembleRow {
        index,
        concurrence: concurrence_mixed(rho),
        g: r.g,
        g_hs: r.g_hs,
        l3: r.l3,
        purity: purity(rho),
        verdict: r.verdict,
        c_min: r.c_min,
        c_max: r.c_max,
    }
}

pub fn ensemble_rows(spec: &EnsembleSpec) -> Result<Vec<EnsembleRow>> {
    spec.validate()?;
    (0..spec.count)
        .into_par_iter()
        .map(|i| Ok(ensemble_row(i, &spec.sample(i)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_curves_meet_at_the_ends() {
        let rows = scan_bounds(10, 1, &[2, 3, 4]).unwrap();
        assert_eq!(rows.len(), 10 + 2 * BOUND_CURVE_POINTS);
        let lower: Vec<_> = rows.iter().filter(|r| r.kind == RowKind::LowerBound).collect();
        let upper: Vec<_> = rows.iter().filter(|r| r.kind == RowKind::UpperBound).collect();
        assert_eq!((lower[0].concurrence, lower[0].g), (0.0, 0.0));
        assert_eq!((upper[0].concurrence, upper[0].g), (0.0, 1.0));
        let (l, u) = (lower.last().unwrap(), upper.last().unwrap());
        assert_eq!((l.concurrence, l.g, u.g), (1.0, 3.0, 3.0));
        assert!(rows.iter().all(|r| r.violates == 0));
    }

    #[test]
    fn scan_rejects_bad_input() {
        assert!(scan_bounds(0, 1, &[4]).is_err());
        assert!(scan_bounds(5, 1, &[]).is_err());
        assert!(scan_bounds(5, 1, &[5]).is_err());
    }

    #[test]
    fn violation_check() {
        assert!(!violates_bounds(0.5, 1.2));
        assert!(violates_bounds(0.0, 1.1));
        assert!(violates_bounds(0.5, 0.5));
        assert!(!violates_bounds(0.5, lower_bound_g(0.5) - 0.5 * BOUND_TOL));
    }

    #[test]
    fn binning() {
        let rows = [
            SliceRow { index: 0, concurrence: 0.0, g: 0.5, purity: 0.5 },
            SliceRow { index: 1, concurrence: 0.01, g: 0.9, purity: 0.5 },
            SliceRow { index: 2, concurrence: 1.0, g: 3.0, purity: 0.5 },
        ];
        let bins = bin_by_concurrence(&rows);
        assert_eq!(bins.len(), 2);
        assert_eq!(bins[0].n, 2);
        assert!((bins[0].g_spread - 0.4).abs() < 1e-15);
        assert_eq!(bins[1].c_hi, 1.0);
        assert_eq!(bins[1].g_spread, 0.0);
    }

    #[test]
    fn pure_slice_lies_on_a_line() {
        let slice = purity_slice(1.0, 1e-6, 300, 5).unwrap();
        assert!(slice.max_residual_spread() <= 1e-6);
        // The curve itself still rises across each bin.
        assert!(slice.max_g_spread() > 1e-3);
    }
}
