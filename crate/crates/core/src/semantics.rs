//! The semantic side: `[0, 1]`-valued copresheaves over a syntax category.
//!
//! A copresheaf assigns a value in `[0, 1]` to every object, subject to the
//! functor inequality `hom(c, d) <= [F(c), F(d)]` where `[ , ]` is truncated
//! division. Meanings of texts are representables `h^x = hom(x, -)`;
//! conjunction is pointwise min, disjunction pointwise max, and implication
//! comes from the internal hom.

use thiserror::Error;

use crate::syntax::Category;
use crate::verify::{Sampling, VerificationReport, ViolationTracker};

/// Pairs sampled exhaustively up to this many objects; seeded above it.
pub(crate) const EXHAUSTIVE_LIMIT: usize = 64;
const DEFAULT_SAMPLE_COUNT: usize = 4096;

/// Largest object count the weighted-limit grid oracle will accept.
pub const ORACLE_OBJECT_LIMIT: usize = 16;

/// The internal hom of the unit interval under multiplication: the largest
/// `u` with `u * a <= b`. This is `b / a` when `b <= a`, and 1 otherwise
/// (including `a = 0`, where every `u` satisfies `u * 0 <= b`).
pub fn truncated_div(a: f64, b: f64) -> f64 {
    if b >= a {
        1.0
    } else {
        b / a
    }
}

/// A total `[0, 1]`-valued map on the objects of a fixed category, stored
/// densely by object id.
#[derive(Debug, Clone, PartialEq)]
pub struct Copresheaf {
    values: Vec<f64>,
}

impl Copresheaf {
    /// Wraps a dense value vector, requiring every entry to lie in `[0, 1]`.
    pub fn new(values: Vec<f64>) -> Result<Self, SemanticsError> {
        for &v in &values {
            if !(0.0..=1.0).contains(&v) {
                return Err(SemanticsError::ValueOutOfRange { value: v });
            }
        }
        Ok(Copresheaf { values })
    }

    /// The constant copresheaf at `v`.
    pub fn constant(len: usize, v: f64) -> Result<Self, SemanticsError> {
        Copresheaf::new(vec![v; len])
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

    /// Object ids where the value is nonzero.
    pub fn support(&self) -> Vec<usize> {
        (0..self.values.len())
            .filter(|&i| self.values[i] > 0.0)
            .collect()
    }
}

/// The representable copresheaf `h^x = hom(x, -)`: the meaning of `x`.
/// Its support is exactly the set of objects containing `x`.
pub fn representable<C: Category>(cat: &C, x: usize) -> Copresheaf {
    let values = (0..cat.object_count())
        .map(|c| cat.hom_by_ids(x, c))
        .collect();
    Copresheaf { values }
}

/// Checks the functor inequality `hom(c, d) <= [F(c), F(d)] + tol` over all
/// object pairs, exhaustively for small categories and seeded-sampled above
/// that.
pub fn is_copresheaf<C: Category>(cat: &C, f: &Copresheaf, tol: f64) -> VerificationReport {
    is_copresheaf_sampled(cat, f, tol, &default_sampling(cat.object_count()))
}

/// As [`is_copresheaf`], with explicit pair sampling.
pub fn is_copresheaf_sampled<C: Category>(
    cat: &C,
    f: &Copresheaf,
    tol: f64,
    sampling: &Sampling,
) -> VerificationReport {
    let entry = functor_inequality(cat, f, "copresheaf-functoriality", sampling);
    VerificationReport::new(vec![entry], sampling.seed(), tol)
}

pub(crate) fn functor_inequality<C: Category>(
    cat: &C,
    f: &Copresheaf,
    law: &str,
    sampling: &Sampling,
) -> crate::verify::LawEntry {
    assert_eq!(f.len(), cat.object_count(), "copresheaf over wrong category");
    let mut tracker = ViolationTracker::new(law);
    for (c, d) in sampling.pairs(cat.object_count()) {
        let bound = truncated_div(f.value(c), f.value(d));
        tracker.observe(cat.hom_by_ids(c, d) - bound, || {
            vec![cat.label(c), cat.label(d)]
        });
    }
    tracker.finish()
}

pub(crate) fn default_sampling(n: usize) -> Sampling {
    if n <= EXHAUSTIVE_LIMIT {
        Sampling::Exhaustive
    } else {
        Sampling::Random {
            seed: 0,
            count: DEFAULT_SAMPLE_COUNT,
        }
    }
}

/// The hom value between two copresheaves: the minimum over all objects of
/// the truncated division `[F(c), G(c)]`.
pub fn hom_copresheaves(f: &Copresheaf, g: &Copresheaf) -> f64 {
    assert_eq!(f.len(), g.len(), "copresheaves over different categories");
    let mut min = 1.0_f64;
    for c in 0..f.len() {
        let v = truncated_div(f.value(c), g.value(c));
        if v < min {
            min = v;
            if min == 0.0 {
                break;
            }
        }
    }
    min
}

/// Categorical product: pointwise minimum. Supports intersect.
pub fn product(f: &Copresheaf, g: &Copresheaf) -> Copresheaf {
    assert_eq!(f.len(), g.len(), "copresheaves over different categories");
    Copresheaf {
        values: f
            .values
            .iter()
            .zip(&g.values)
            .map(|(&a, &b)| a.min(b))
            .collect(),
    }
}

/// Categorical coproduct: pointwise maximum. Supports unite.
pub fn coproduct(f: &Copresheaf, g: &Copresheaf) -> Copresheaf {
    assert_eq!(f.len(), g.len(), "copresheaves over different categories");
    Copresheaf {
        values: f
            .values
            .iter()
            .zip(&g.values)
            .map(|(&a, &b)| a.max(b))
            .collect(),
    }
}

/// A finite diagram of copresheaves, each leg carrying a weight in `[0, 1]`.
#[derive(Debug, Clone)]
pub struct WeightedDiagram {
    legs: Vec<(f64, Copresheaf)>,
}

impl WeightedDiagram {
    pub fn new(legs: Vec<(f64, Copresheaf)>) -> Result<Self, SemanticsError> {
        let mut lens = legs.iter().map(|(_, f)| f.len());
        let first = lens.next().ok_or(SemanticsError::EmptyDiagram)?;
        if lens.any(|l| l != first) {
            return Err(SemanticsError::LengthMismatch);
        }
        for &(w, _) in &legs {
            if !(0.0..=1.0).contains(&w) {
                return Err(SemanticsError::ValueOutOfRange { value: w });
            }
        }
        Ok(WeightedDiagram { legs })
    }

    pub fn legs(&self) -> &[(f64, Copresheaf)] {
        &self.legs
    }

    fn object_count(&self) -> usize {
        self.legs[0].1.len()
    }
}

/// The weighted limit: `c -> min over legs of [w_i, F_i(c)]`. With all
/// weights 1 this reduces to the product of the legs.
pub fn weighted_limit(diagram: &WeightedDiagram) -> Copresheaf {
    let n = diagram.object_count();
    let values = (0..n)
        .map(|c| {
            diagram
                .legs
                .iter()
                .map(|&(w, ref f)| truncated_div(w, f.value(c)))
                .fold(1.0_f64, f64::min)
        })
        .collect();
    Copresheaf { values }
}

/// The weighted colimit: `c -> max over legs of w_i * F_i(c)`. With all
/// weights 1 this reduces to the coproduct of the legs.
pub fn weighted_colimit(diagram: &WeightedDiagram) -> Copresheaf {
    let n = diagram.object_count();
    let values = (0..n)
        .map(|c| {
            diagram
                .legs
                .iter()
                .map(|&(w, ref f)| w * f.value(c))
                .fold(0.0_f64, f64::max)
        })
        .collect();
    Copresheaf { values }
}

fn grid_floor(v: f64, step: f64) -> f64 {
    let k = (v / step + 1e-9).floor();
    (k * step).clamp(0.0, 1.0)
}

fn grid_ceil(v: f64, step: f64) -> f64 {
    let k = (v / step - 1e-9).ceil();
    (k * step).clamp(0.0, 1.0)
}

/// Brute-force reference for [`weighted_limit`], working only from the
/// universal property: among grid-valued candidates `Z` with
/// `Z(c) <= [w_i, F_i(c)]` for every leg and object, it returns the
/// pointwise-largest one that satisfies the functor inequality.
///
/// The candidate set is closed under pointwise max, so the largest candidate
/// is reached by starting from the per-object caps and shrinking until the
/// functor inequality holds on the grid; this equals the maximum over a full
/// enumeration of grid candidates.
pub fn oracle_weighted_limit<C: Category>(
    cat: &C,
    diagram: &WeightedDiagram,
    grid_step: f64,
) -> Result<Copresheaf, SemanticsError> {
    oracle_guard(cat, diagram, grid_step)?;
    let n = cat.object_count();
    let caps: Vec<f64> = (0..n)
        .map(|c| {
            diagram
                .legs
                .iter()
                .map(|&(w, ref f)| truncated_div(w, f.value(c)))
                .fold(1.0_f64, f64::min)
        })
        .collect();

    let mut z: Vec<f64> = caps.iter().map(|&v| grid_floor(v, grid_step)).collect();
    loop {
        let mut changed = false;
        for c in 0..n {
            let mut bound = caps[c];
            for (d, &zd) in z.iter().enumerate() {
                let h = cat.hom_by_ids(c, d);
                if h > 0.0 {
                    // functor inequality: z[c] * h <= z[d]
                    bound = bound.min(truncated_div(h, zd));
                }
            }
            let g = grid_floor(bound, grid_step);
            if g < z[c] {
                z[c] = g;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Ok(Copresheaf { values: z })
}

/// Dual brute-force reference for [`weighted_colimit`]: the pointwise-least
/// grid candidate above every `w_i * F_i` that satisfies the functor
/// inequality.
pub fn oracle_weighted_colimit<C: Category>(
    cat: &C,
    diagram: &WeightedDiagram,
    grid_step: f64,
) -> Result<Copresheaf, SemanticsError> {
    oracle_guard(cat, diagram, grid_step)?;
    let n = cat.object_count();
    let floors: Vec<f64> = (0..n)
        .map(|c| {
            diagram
                .legs
                .iter()
                .map(|&(w, ref f)| w * f.value(c))
                .fold(0.0_f64, f64::max)
        })
        .collect();

    let mut z: Vec<f64> = floors.iter().map(|&v| grid_ceil(v, grid_step)).collect();
    loop {
        let mut changed = false;
        for d in 0..n {
            let mut bound = floors[d];
            for (c, &zc) in z.iter().enumerate() {
                let h = cat.hom_by_ids(c, d);
                if h > 0.0 {
                    bound = bound.max(h * zc);
                }
            }
            let g = grid_ceil(bound, grid_step);
            if g > z[d] {
                z[d] = g;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Ok(Copresheaf { values: z })
}

fn oracle_guard<C: Category>(
    cat: &C,
    diagram: &WeightedDiagram,
    grid_step: f64,
) -> Result<(), SemanticsError> {
    if cat.object_count() > ORACLE_OBJECT_LIMIT {
        return Err(SemanticsError::OracleGuard {
            objects: cat.object_count(),
            limit: ORACLE_OBJECT_LIMIT,
        });
    }
    if diagram.object_count() != cat.object_count() {
        return Err(SemanticsError::LengthMismatch);
    }
    if !(grid_step > 0.0 && grid_step <= 1.0) {
        return Err(SemanticsError::BadGridStep { step: grid_step });
    }
    Ok(())
}

/// The internal hom `[G, H]`: on an object `c` it is the hom value from the
/// product `h^c x G` to `H`, i.e.
/// `min over d of [min(hom(c, d), G(d)), H(d)]`.
///
/// Its value at `c` is zero exactly when some `d` containing `c` has
/// `G(d) > 0` and `H(d) = 0`.
pub fn internal_hom<C: Category>(cat: &C, g: &Copresheaf, h: &Copresheaf) -> Copresheaf {
    let n = cat.object_count();
    assert_eq!(g.len(), n, "copresheaf over wrong category");
    assert_eq!(h.len(), n, "copresheaf over wrong category");
    let values = (0..n).map(|c| internal_hom_at(cat, g, h, c)).collect();
    Copresheaf { values }
}

/// The internal hom `[G, H]` evaluated at a single object.
pub fn internal_hom_at<C: Category>(cat: &C, g: &Copresheaf, h: &Copresheaf, c: usize) -> f64 {
    let n = cat.object_count();
    let mut min = 1.0_f64;
    for d in 0..n {
        let premise = cat.hom_by_ids(c, d).min(g.value(d));
        let v = truncated_div(premise, h.value(d));
        if v < min {
            min = v;
            if min == 0.0 {
                break;
            }
        }
    }
    min
}

/// Checks the contravariant Yoneda inequality
/// `hom(y, x) <= hom_copresheaves(h^x, h^y)` over object pairs.
pub fn yoneda_check<C: Category>(cat: &C, tol: f64) -> VerificationReport {
    yoneda_check_sampled(cat, tol, &default_sampling(cat.object_count()))
}

/// As [`yoneda_check`], with explicit pair sampling.
pub fn yoneda_check_sampled<C: Category>(
    cat: &C,
    tol: f64,
    sampling: &Sampling,
) -> VerificationReport {
    let entry = yoneda_entry(cat, sampling);
    VerificationReport::new(vec![entry], sampling.seed(), tol)
}

pub(crate) fn yoneda_entry<C: Category>(cat: &C, sampling: &Sampling) -> crate::verify::LawEntry {
    let mut tracker = ViolationTracker::new("yoneda-inequality");
    for (x, y) in sampling.pairs(cat.object_count()) {
        let embedded = hom_copresheaves(&representable(cat, x), &representable(cat, y));
        tracker.observe(cat.hom_by_ids(y, x) - embedded, || {
            vec![cat.label(x), cat.label(y)]
        });
    }
    tracker.finish()
}

/// Largest gap `hom_copresheaves(h^x, h^y) - hom(y, x)` over all pairs: how
/// far the embedding is from being full. Reported, never asserted.
pub fn yoneda_equality_gap<C: Category>(cat: &C) -> f64 {
    let n = cat.object_count();
    let mut gap = 0.0_f64;
    for x in 0..n {
        let hx = representable(cat, x);
        for y in 0..n {
            let hy = representable(cat, y);
            gap = gap.max(hom_copresheaves(&hx, &hy) - cat.hom_by_ids(y, x));
        }
    }
    gap
}

/// Exploratory diagnostic for the currying identity
/// `hom(F x G, H) = hom(F, [G, H])`: returns the absolute difference of the
/// two routes. The identity mixes the min-product with the multiplicative
/// hom, so it is not asserted anywhere.
pub fn currying_gap<C: Category>(
    cat: &C,
    f: &Copresheaf,
    g: &Copresheaf,
    h: &Copresheaf,
) -> f64 {
    let direct = hom_copresheaves(&product(f, g), h);
    let curried = hom_copresheaves(f, &internal_hom(cat, g, h));
    (direct - curried).abs()
}

/// The least copresheaf pointwise above the given values:
/// `c -> max over d of seed(d) * hom(d, c)`.
pub fn functorial_closure<C: Category>(cat: &C, seed: &[f64]) -> Copresheaf {
    let n = cat.object_count();
    assert_eq!(seed.len(), n, "seed over wrong category");
    let values = (0..n)
        .map(|c| {
            (0..n)
                .map(|d| seed[d] * cat.hom_by_ids(d, c))
                .fold(0.0_f64, f64::max)
                .min(1.0)
        })
        .collect();
    Copresheaf { values }
}

/// Renders a copresheaf as TSV, one `label<TAB>value` line per object in
/// object order, values printed with 12 significant digits.
pub fn export_tsv<C: Category>(cat: &C, f: &Copresheaf) -> String {
    assert_eq!(f.len(), cat.object_count(), "copresheaf over wrong category");
    let mut out = String::new();
    for c in 0..f.len() {
        out.push_str(&cat.label(c));
        out.push('\t');
        out.push_str(&crate::format_value(f.value(c)));
        out.push('\n');
    }
    out
}

#[derive(Debug, Error)]
pub enum SemanticsError {
    #[error("value {value} outside [0, 1]")]
    ValueOutOfRange { value: f64 },
    #[error("weighted diagram needs at least one leg")]
    EmptyDiagram,
    #[error("copresheaves span different object sets")]
    LengthMismatch,
    #[error("oracle guard: {objects} objects exceeds limit {limit}")]
    OracleGuard { objects: usize, limit: usize },
    #[error("grid step {step} outside (0, 1]")]
    BadGridStep { step: f64 },
}
