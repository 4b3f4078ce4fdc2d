//! The `[0, infinity]` view of the same semantics: distances are `-ln` of
//! hom values, conjunction becomes pointwise max, disjunction pointwise min,
//! and copresheaves form a module over the semi-tropical semiring
//! `([0, inf], min, +)`.
//!
//! Infinity is represented explicitly as `f64::INFINITY` with total
//! arithmetic: `inf + a = inf`, `inf - inf = 0`, `inf - finite = inf`,
//! `finite - inf = 0`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::semantics::{representable, Copresheaf, SemanticsError};
use crate::syntax::{neg_ln, Category};
use crate::verify::{Sampling, VerificationReport, ViolationTracker};

/// A total `[0, inf]`-valued map on the objects of a fixed category.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricCopresheaf {
    values: Vec<f64>,
}

impl MetricCopresheaf {
    /// Wraps a dense value vector; entries must be non-negative or `+inf`.
    pub fn new(values: Vec<f64>) -> Result<Self, MetricError> {
        for &v in &values {
            if v.is_nan() || v < 0.0 {
                return Err(MetricError::NegativeDistance { value: v });
            }
        }
        let values = values.into_iter().map(|v| if v == 0.0 { 0.0 } else { v }).collect();
        Ok(MetricCopresheaf { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, id: usize) -> f64 {
        self.values[id]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// A scalar of the semi-tropical semiring: a value in `[0, inf]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct TropicalScalar(f64);

impl TropicalScalar {
    pub fn new(value: f64) -> Result<Self, MetricError> {
        if value.is_nan() || value < 0.0 {
            return Err(MetricError::NegativeDistance { value });
        }
        Ok(TropicalScalar(value))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// Truncated subtraction `max(g - f, 0)`, the internal hom of `[0, inf]`.
/// Total on infinities: `inf - inf = 0`, `inf - finite = inf`,
/// `finite - inf = 0`.
pub fn truncated_sub(f: f64, g: f64) -> f64 {
    if g.is_infinite() {
        if f.is_infinite() {
            0.0
        } else {
            f64::INFINITY
        }
    } else if f.is_infinite() {
        0.0
    } else {
        (g - f).max(0.0)
    }
}

/// Transports a unit-interval copresheaf to the metric side by `-ln`,
/// sending 0 to `+inf` exactly.
pub fn to_metric(f: &Copresheaf) -> MetricCopresheaf {
    MetricCopresheaf {
        values: f.values().iter().map(|&v| neg_ln(v)).collect(),
    }
}

/// Transports a metric copresheaf back by `exp(-a)`, sending `+inf` to 0
/// exactly.
pub fn to_unit(f: &MetricCopresheaf) -> Result<Copresheaf, SemanticsError> {
    Copresheaf::new(f.values.iter().map(|&v| (-v).exp()).collect())
}

/// The representable metric copresheaf `d(x, -)`.
pub fn metric_representable<C: Category>(cat: &C, x: usize) -> MetricCopresheaf {
    to_metric(&representable(cat, x))
}

/// The hom distance between metric copresheaves: the supremum over objects
/// of the truncated subtraction `g(x) - f(x)`.
pub fn metric_hom_copresheaves(f: &MetricCopresheaf, g: &MetricCopresheaf) -> f64 {
    assert_eq!(f.len(), g.len(), "copresheaves over different categories");
    let mut sup = 0.0_f64;
    for x in 0..f.len() {
        let v = truncated_sub(f.value(x), g.value(x));
        if v > sup {
            sup = v;
            if sup.is_infinite() {
                break;
            }
        }
    }
    sup
}

/// Metric product: pointwise maximum, the `-ln` image of pointwise min.
pub fn metric_product(f: &MetricCopresheaf, g: &MetricCopresheaf) -> MetricCopresheaf {
    assert_eq!(f.len(), g.len(), "copresheaves over different categories");
    MetricCopresheaf {
        values: f
            .values
            .iter()
            .zip(&g.values)
            .map(|(&a, &b)| a.max(b))
            .collect(),
    }
}

/// Metric coproduct: pointwise minimum, realizing disjunction.
pub fn metric_coproduct(f: &MetricCopresheaf, g: &MetricCopresheaf) -> MetricCopresheaf {
    assert_eq!(f.len(), g.len(), "copresheaves over different categories");
    MetricCopresheaf {
        values: f
            .values
            .iter()
            .zip(&g.values)
            .map(|(&a, &b)| a.min(b))
            .collect(),
    }
}

/// Tropical addition `(f + g)(x) = min(f(x), g(x))`; coincides with the
/// metric coproduct.
pub fn tropical_add(f: &MetricCopresheaf, g: &MetricCopresheaf) -> MetricCopresheaf {
    metric_coproduct(f, g)
}

/// Tropical scaling `(s * f)(x) = f(x) + s`, with `inf + s = inf`.
pub fn tropical_scale(s: TropicalScalar, f: &MetricCopresheaf) -> MetricCopresheaf {
    MetricCopresheaf {
        values: f.values.iter().map(|&v| v + s.0).collect(),
    }
}

/// Checks the metric functor inequality
/// `d(x, y) >= max(f(y) - f(x), 0)` over object pairs.
pub fn is_metric_copresheaf<C: Category>(
    cat: &C,
    f: &MetricCopresheaf,
    tol: f64,
) -> VerificationReport {
    is_metric_copresheaf_sampled(
        cat,
        f,
        tol,
        &crate::semantics::default_sampling(cat.object_count()),
    )
}

/// As [`is_metric_copresheaf`], with explicit pair sampling.
pub fn is_metric_copresheaf_sampled<C: Category>(
    cat: &C,
    f: &MetricCopresheaf,
    tol: f64,
    sampling: &Sampling,
) -> VerificationReport {
    assert_eq!(f.len(), cat.object_count(), "copresheaf over wrong category");
    let mut tracker = ViolationTracker::new("metric-functoriality");
    for (x, y) in sampling.pairs(cat.object_count()) {
        let bound = truncated_sub(f.value(x), f.value(y));
        let d = neg_ln(cat.hom_by_ids(x, y));
        tracker.observe(excess(bound, d), || vec![cat.label(x), cat.label(y)]);
    }
    VerificationReport::new(vec![tracker.finish()], sampling.seed(), tol)
}

/// By how much `required` exceeds `available`, with 0 when it does not;
/// total on infinities.
pub(crate) fn excess(required: f64, available: f64) -> f64 {
    truncated_sub(available, required)
}

/// Direction of a nearest-meaning query in the asymmetric metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankMode {
    /// Distance from the candidate's representable to the query.
    Forward,
    /// Distance from the query to the candidate's representable.
    Backward,
    /// The larger of the two directions.
    Symmetric,
}

impl FromStr for RankMode {
    type Err = MetricError;

    fn from_str(s: &str) -> Result<Self, MetricError> {
        match s {
            "forward" => Ok(RankMode::Forward),
            "backward" => Ok(RankMode::Backward),
            "symmetric" => Ok(RankMode::Symmetric),
            other => Err(MetricError::BadMode {
                mode: other.to_string(),
            }),
        }
    }
}

impl fmt::Display for RankMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RankMode::Forward => "forward",
            RankMode::Backward => "backward",
            RankMode::Symmetric => "symmetric",
        })
    }
}

/// Ranks every object by its metric distance to the given meaning and
/// returns the `k` nearest as `(object id, distance)`. Ties break by object
/// order, so the ranking is deterministic.
pub fn nearest_meanings<C: Category>(
    cat: &C,
    f: &Copresheaf,
    k: usize,
    mode: RankMode,
) -> Vec<(usize, f64)> {
    let query = to_metric(f);
    let n = cat.object_count();
    let mut ranked: Vec<(usize, f64)> = (0..n)
        .map(|x| {
            let dx = metric_representable(cat, x);
            let d = match mode {
                RankMode::Forward => metric_hom_copresheaves(&dx, &query),
                RankMode::Backward => metric_hom_copresheaves(&query, &dx),
                RankMode::Symmetric => metric_hom_copresheaves(&dx, &query)
                    .max(metric_hom_copresheaves(&query, &dx)),
            };
            (x, d)
        })
        .collect();
    ranked.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    ranked.truncate(k);
    ranked
}

/// Renders a ranking as TSV `rank<TAB>label<TAB>distance`, with the `inf`
/// literal for infinite distances.
pub fn ranking_tsv<C: Category>(cat: &C, ranking: &[(usize, f64)]) -> String {
    let mut out = String::new();
    for (rank, &(id, d)) in ranking.iter().enumerate() {
        out.push_str(&format!(
            "{}\t{}\t{}\n",
            rank + 1,
            cat.label(id),
            crate::format_value(d)
        ));
    }
    out
}

#[derive(Debug, Error)]
pub enum MetricError {
    #[error("distance {value} is negative or NaN")]
    NegativeDistance { value: f64 },
    #[error("unknown mode {mode:?}: expected forward, backward, or symmetric")]
    BadMode { mode: String },
}
