//! Empirical p-adic radius of a truncated series.

use rug::Rational;

use crate::error::{Error, Result};
use crate::exactmath::{valuation, FieldElem, PlaceId, TruncSeries, Valuation};

/// `slope = min_{N/2 ≤ n ≤ N} w(a_n)/n`; the radius is `p^{slope}`.
#[derive(Clone, Debug, PartialEq)]
pub struct RadiusEstimate {
    pub place: PlaceId,
    pub slope: Valuation,
    /// `slope·log p`, or `+∞`.
    pub radius_log: f64,
    pub order: usize,
    /// `−1/(p(p−1))`.
    pub threshold: Rational,
    /// `slope − threshold`, `None` when the slope is infinite.
    pub margin: Option<Rational>,
    pub pass: bool,
}

/// Estimates the radius of convergence at a finite place from the tail
/// window `[N/2, N]`.
///
/// ```
/// use pcurve::connection::radius_estimate;
/// use pcurve::exactmath::{FieldElem, PlaceId, TruncSeries, Valuation};
///
/// let poly = TruncSeries::new(FieldElem::rational(0), (0..=40).map(|n| FieldElem::rational(i64::from(n < 3))).collect());
/// let r = radius_estimate(&poly, &PlaceId::rational(2)).unwrap();
/// assert_eq!(r.slope, Valuation::Infinity);
/// ```
pub fn radius_estimate(series: &TruncSeries<FieldElem>, place: &PlaceId) -> Result<RadiusEstimate> {
    let p = place.prime()?;
    let n_max = series.order();
    if n_max < 32 {
        return Err(Error::Domain(format!(
            "radius estimates need N >= 32, got {n_max}"
        )));
    }
    let mut slope = Valuation::Infinity;
    for n in n_max.div_ceil(2).max(1)..=n_max {
        if let Valuation::Finite(v) = valuation(series.coeff(n), place)? {
            slope = slope.min(Valuation::Finite(v / n as u64));
        }
    }
    let threshold = Rational::from((-1, p * (p - 1)));
    let (radius_log, margin, pass) = match &slope {
        Valuation::Finite(s) => {
            let m = Rational::from(s - &threshold);
            (s.to_f64() * (p as f64).ln(), Some(m.clone()), m >= 0)
        }
        Valuation::Infinity => (f64::INFINITY, None, true),
    };
    Ok(RadiusEstimate {
        place: *place,
        slope,
        radius_log,
        order: n_max,
        threshold,
        margin,
        pass,
    })
}
