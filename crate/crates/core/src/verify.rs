//! Law verification: report types, seeded sampling, a generator of random
//! enriched categories that satisfy the axioms by construction, and the
//! orchestrated suite that re-checks every law on a given category.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::metric::{
    metric_hom_copresheaves, metric_product, metric_representable, to_metric, tropical_add,
    tropical_scale, truncated_sub, TropicalScalar,
};
use crate::semantics::{
    coproduct, functor_inequality, hom_copresheaves, internal_hom, internal_hom_at,
    oracle_weighted_limit, product, representable, weighted_colimit, weighted_limit,
    yoneda_entry, WeightedDiagram, ORACLE_OBJECT_LIMIT,
};
use crate::syntax::{neg_ln, Category};

/// How pair and triple checks walk the object set.
#[derive(Debug, Clone)]
pub enum Sampling {
    /// Every pair or triple.
    Exhaustive,
    /// A fixed number of seeded draws from a counter-based generator, so the
    /// same seed yields the same checks on every platform.
    Random { seed: u64, count: usize },
}

impl Sampling {
    pub fn seed(&self) -> u64 {
        match self {
            Sampling::Exhaustive => 0,
            Sampling::Random { seed, .. } => *seed,
        }
    }

    fn rng(&self, domain: u64) -> ChaCha20Rng {
        ChaCha20Rng::seed_from_u64(self.seed() ^ domain)
    }

    pub fn objects(&self, n: usize) -> Vec<usize> {
        match self {
            Sampling::Exhaustive => (0..n).collect(),
            Sampling::Random { count, .. } => {
                if n == 0 {
                    return Vec::new();
                }
                let mut rng = self.rng(0x6f626a73);
                (0..*count.min(&n)).map(|_| rng.gen_range(0..n)).collect()
            }
        }
    }

    pub fn pairs(&self, n: usize) -> Vec<(usize, usize)> {
        match self {
            Sampling::Exhaustive => (0..n)
                .flat_map(|x| (0..n).map(move |y| (x, y)))
                .collect(),
            Sampling::Random { count, .. } => {
                if n == 0 {
                    return Vec::new();
                }
                let mut rng = self.rng(0x70616972);
                (0..*count)
                    .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
                    .collect()
            }
        }
    }

    pub fn triples(&self, n: usize) -> Vec<(usize, usize, usize)> {
        match self {
            Sampling::Exhaustive => (0..n)
                .flat_map(|x| {
                    (0..n).flat_map(move |y| (0..n).map(move |z| (x, y, z)))
                })
                .collect(),
            Sampling::Random { count, .. } => {
                if n == 0 {
                    return Vec::new();
                }
                let mut rng = self.rng(0x74726970);
                (0..*count)
                    .map(|_| {
                        (
                            rng.gen_range(0..n),
                            rng.gen_range(0..n),
                            rng.gen_range(0..n),
                        )
                    })
                    .collect()
            }
        }
    }

    /// Seeded triples that actually lie along the order, `x <= y <= z`,
    /// found by scanning from random starting points. Empty in exhaustive
    /// mode, where the plain triples already cover every chain.
    pub fn chain_triples<C: Category>(&self, cat: &C) -> Vec<(usize, usize, usize)> {
        let Sampling::Random { count, .. } = self else {
            return Vec::new();
        };
        let n = cat.object_count();
        if n == 0 {
            return Vec::new();
        }
        let mut rng = self.rng(0x6368616e);
        let mut out = Vec::new();
        let scan = |from: usize, start: usize| {
            (0..n)
                .map(|off| (start + off) % n)
                .find(|&cand| cand != from && cat.leq_by_ids(from, cand))
        };
        for _ in 0..*count {
            let x = rng.gen_range(0..n);
            let start = rng.gen_range(0..n);
            if let Some(y) = scan(x, start) {
                if let Some(z) = scan(y, rng.gen_range(0..n)) {
                    out.push((x, y, z));
                }
            }
        }
        out
    }
}

/// One verified law: how many checks ran, the worst violation seen, and the
/// objects witnessing it when the violation is positive.
#[derive(Debug, Clone, Serialize)]
pub struct LawEntry {
    pub law: String,
    pub checked: u64,
    #[serde(serialize_with = "serialize_extended")]
    pub max_violation: f64,
    pub witness: Option<Vec<String>>,
}

impl LawEntry {
    /// Folds another entry for the same law into this one.
    pub fn absorb(&mut self, other: LawEntry) {
        self.checked += other.checked;
        if other.max_violation > self.max_violation {
            self.max_violation = other.max_violation;
            self.witness = other.witness;
        }
    }
}

fn serialize_extended<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_str("inf")
    }
}

/// Accumulates the worst violation of one law across many checks.
pub struct ViolationTracker {
    law: String,
    checked: u64,
    max: f64,
    witness: Option<Vec<String>>,
}

impl ViolationTracker {
    pub fn new(law: &str) -> Self {
        ViolationTracker {
            law: law.to_string(),
            checked: 0,
            max: 0.0,
            witness: None,
        }
    }

    /// Records one check; a positive violation beyond the current worst
    /// replaces the witness.
    pub fn observe<F: FnOnce() -> Vec<String>>(&mut self, violation: f64, witness: F) {
        self.checked += 1;
        if violation > self.max {
            self.max = violation;
            self.witness = Some(witness());
        }
    }

    pub fn finish(self) -> LawEntry {
        LawEntry {
            law: self.law,
            checked: self.checked,
            max_violation: self.max.max(0.0),
            witness: self.witness,
        }
    }
}

/// The outcome of a verification run: one entry per law, the seed that drove
/// any sampling, and the tolerance every entry is held to.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    entries: Vec<LawEntry>,
    seed: u64,
    tolerance: f64,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    pass: bool,
    seed: u64,
    tolerance: f64,
    entries: &'a [LawEntry],
}

impl VerificationReport {
    pub fn new(entries: Vec<LawEntry>, seed: u64, tolerance: f64) -> Self {
        VerificationReport {
            entries,
            seed,
            tolerance,
        }
    }

    pub fn entries(&self) -> &[LawEntry] {
        &self.entries
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// True when every law's worst violation is within tolerance.
    pub fn pass(&self) -> bool {
        self.entries
            .iter()
            .all(|e| e.max_violation <= self.tolerance)
    }

    /// Deterministic JSON rendering with a top-level `pass` flag.
    pub fn to_json(&self) -> String {
        let json = ReportJson {
            pass: self.pass(),
            seed: self.seed,
            tolerance: self.tolerance,
            entries: &self.entries,
        };
        serde_json::to_string_pretty(&json).expect("report serialization cannot fail")
    }
}

/// Parameters for the random category generator.
#[derive(Debug, Clone)]
pub struct RandomCategorySpec {
    pub n_objects: usize,
    pub seed: u64,
    /// Probability of a covering edge between two objects; 0 gives a
    /// discrete category, 1 a single chain.
    pub chain_density: f64,
}

/// An explicit hom table with its underlying order and measure. Random
/// categories come in this form, and any category can be snapshotted into
/// one so that single hom values can be perturbed for fault-injection tests.
#[derive(Debug, Clone)]
pub struct HomTable {
    labels: Vec<String>,
    measures: Vec<u64>,
    leq: Vec<bool>,
    hom: Vec<f64>,
    n: usize,
}

impl HomTable {
    /// Copies any category into table form.
    pub fn snapshot<C: Category>(cat: &C) -> HomTable {
        let n = cat.object_count();
        let mut leq = vec![false; n * n];
        let mut hom = vec![0.0; n * n];
        for x in 0..n {
            for y in 0..n {
                leq[x * n + y] = cat.leq_by_ids(x, y);
                hom[x * n + y] = cat.hom_by_ids(x, y);
            }
        }
        HomTable {
            labels: (0..n).map(|i| cat.label(i)).collect(),
            measures: (0..n).map(|i| cat.measure_by_id(i)).collect(),
            leq,
            hom,
            n,
        }
    }

    /// Adds `delta` to a single hom value, leaving the order and measures
    /// untouched. Exists to plant faults for verifying the verifier.
    pub fn perturb_hom(&mut self, x: usize, y: usize, delta: f64) {
        self.hom[x * self.n + y] += delta;
    }
}

impl Category for HomTable {
    fn object_count(&self) -> usize {
        self.n
    }

    fn label(&self, id: usize) -> String {
        self.labels[id].clone()
    }

    fn hom_by_ids(&self, x: usize, y: usize) -> f64 {
        self.hom[x * self.n + y]
    }

    fn leq_by_ids(&self, x: usize, y: usize) -> bool {
        self.leq[x * self.n + y]
    }

    fn measure_by_id(&self, id: usize) -> u64 {
        self.measures[id]
    }
}

/// Measures are drawn from the divisors of 20, so every hom ratio lands on
/// the 0.05 grid and chain products are exact in binary floating point.
const MEASURE_CHOICES: [u64; 6] = [20, 10, 5, 4, 2, 1];

/// Generates a random enriched category satisfying the axioms by
/// construction: a random partial order with a monotone non-increasing
/// measure, and `hom(x, y) = m(y) / m(x)` on related pairs.
pub fn random_category(spec: &RandomCategorySpec) -> Result<HomTable, VerifyError> {
    if spec.n_objects == 0 {
        return Err(VerifyError::BadSpec {
            detail: "n_objects must be at least 1".to_string(),
        });
    }
    if !(0.0..=1.0).contains(&spec.chain_density) {
        return Err(VerifyError::BadSpec {
            detail: format!("chain_density {} outside [0, 1]", spec.chain_density),
        });
    }
    let n = spec.n_objects;
    let mut rng = ChaCha20Rng::seed_from_u64(spec.seed);

    let mut leq = vec![false; n * n];
    for i in 0..n {
        leq[i * n + i] = true;
        for j in i + 1..n {
            if rng.gen_bool(spec.chain_density) {
                leq[i * n + j] = true;
            }
        }
    }
    // transitive closure
    for k in 0..n {
        for i in 0..n {
            if leq[i * n + k] {
                for j in 0..n {
                    if leq[k * n + j] {
                        leq[i * n + j] = true;
                    }
                }
            }
        }
    }

    // measures shrink along the order
    let mut measures = vec![0u64; n];
    for j in 0..n {
        let draw = MEASURE_CHOICES[rng.gen_range(0..MEASURE_CHOICES.len())];
        let ceiling = (0..j)
            .filter(|&i| leq[i * n + j])
            .map(|i| measures[i])
            .min()
            .unwrap_or(u64::MAX);
        measures[j] = draw.min(ceiling);
    }

    let mut hom = vec![0.0; n * n];
    for x in 0..n {
        for y in 0..n {
            if leq[x * n + y] {
                hom[x * n + y] = measures[y] as f64 / measures[x] as f64;
            }
        }
    }

    Ok(HomTable {
        labels: (0..n).map(|i| format!("t{i}")).collect(),
        measures,
        leq,
        hom,
        n,
    })
}

/// Configuration of [`run_suite`].
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub tolerance: f64,
    pub seed: u64,
    /// Pair and triple checks are exhaustive up to this many objects.
    pub exhaustive_limit: usize,
    /// Draws per check above the exhaustive limit.
    pub sample_count: usize,
    /// Grid step for the weighted-limit oracle.
    pub grid_step: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            tolerance: 1e-9,
            seed: 0,
            exhaustive_limit: 64,
            sample_count: 2048,
            grid_step: 0.05,
        }
    }
}

// Internal-hom checks cost a factor of the object count per triple, so they
// go exhaustive only on smaller categories.
const IMPLICATION_EXHAUSTIVE_LIMIT: usize = 32;
const DIAGRAM_PAIR_LIMIT: usize = 12;
const OBJECT_SAMPLE_CAP: usize = 64;
const WEIGHT_PATTERNS: [(f64, f64); 3] = [(1.0, 1.0), (0.5, 1.0), (0.25, 0.2)];

/// Runs every law against the given category, in a fixed order:
/// category axioms, representable functoriality, the Yoneda inequality,
/// the product and coproduct case tables, weighted limits against the grid
/// oracle, internal-hom support and functoriality, metric transport, the
/// metric triangle inequality, and the tropical module laws.
pub fn run_suite<C: Category>(cat: &C, config: &SuiteConfig) -> VerificationReport {
    let n = cat.object_count();
    let sampling = |limit: usize| {
        if n <= limit {
            Sampling::Exhaustive
        } else {
            Sampling::Random {
                seed: config.seed,
                count: config.sample_count,
            }
        }
    };
    let pair_sampling = sampling(config.exhaustive_limit);
    let implication_sampling = sampling(IMPLICATION_EXHAUSTIVE_LIMIT);
    // entries that scan all objects per draw get proportionally fewer draws
    let object_sampling = if n <= config.exhaustive_limit {
        Sampling::Exhaustive
    } else {
        Sampling::Random {
            seed: config.seed,
            count: OBJECT_SAMPLE_CAP,
        }
    };
    let table_sampling = if n <= config.exhaustive_limit {
        Sampling::Exhaustive
    } else {
        Sampling::Random {
            seed: config.seed,
            count: (config.sample_count / 8).max(1),
        }
    };

    let mut entries = Vec::new();

    // category axioms
    let axioms = crate::syntax::verify_category_axioms(cat, &pair_sampling, config.tolerance);
    entries.extend(axioms.entries().iter().cloned());

    // representable functoriality
    let mut rep_entry = ViolationTracker::new("representable-functoriality").finish();
    for x in object_sampling.objects(n) {
        let hx = representable(cat, x);
        rep_entry.absorb(functor_inequality(
            cat,
            &hx,
            "representable-functoriality",
            &pair_sampling,
        ));
    }
    entries.push(rep_entry);

    // Yoneda inequality
    entries.push(yoneda_entry(cat, &pair_sampling));

    entries.push(product_table_entry(cat, &table_sampling));
    entries.push(coproduct_table_entry(cat, &table_sampling));

    let diagram_pairs = diagram_pairs(n, &pair_sampling);
    entries.extend(weighted_limit_entries(cat, &diagram_pairs, config));

    entries.push(implication_support_entry(cat, &implication_sampling));
    entries.push(implication_functoriality_entry(
        cat,
        &diagram_pairs,
        &pair_sampling,
    ));

    entries.push(metric_transport_entry(cat, &object_sampling, &pair_sampling, &diagram_pairs));
    entries.push(metric_triangle_entry(cat, &pair_sampling));
    entries.push(tropical_module_entry(cat, &pair_sampling, config.seed));

    VerificationReport::new(entries, config.seed, config.tolerance)
}

fn measure_ratio<C: Category>(cat: &C, x: usize, c: usize) -> f64 {
    cat.measure_by_id(c) as f64 / cat.measure_by_id(x) as f64
}

fn product_table_entry<C: Category>(cat: &C, sampling: &Sampling) -> LawEntry {
    let mut tracker = ViolationTracker::new("product-table");
    let n = cat.object_count();
    for (x, y) in sampling.pairs(n) {
        let (hx, hy) = (representable(cat, x), representable(cat, y));
        let prod = product(&hx, &hy);
        for c in 0..n {
            let expected = if cat.leq_by_ids(x, c) && cat.leq_by_ids(y, c) {
                measure_ratio(cat, x, c).min(measure_ratio(cat, y, c))
            } else {
                0.0
            };
            tracker.observe((prod.value(c) - expected).abs(), || {
                vec![cat.label(x), cat.label(y), cat.label(c)]
            });
        }
    }
    tracker.finish()
}

fn coproduct_table_entry<C: Category>(cat: &C, sampling: &Sampling) -> LawEntry {
    let mut tracker = ViolationTracker::new("coproduct-table");
    let n = cat.object_count();
    for (x, y) in sampling.pairs(n) {
        let (hx, hy) = (representable(cat, x), representable(cat, y));
        let co = coproduct(&hx, &hy);
        for c in 0..n {
            let expected = match (cat.leq_by_ids(x, c), cat.leq_by_ids(y, c)) {
                (true, true) => measure_ratio(cat, x, c).max(measure_ratio(cat, y, c)),
                (true, false) => measure_ratio(cat, x, c),
                (false, true) => measure_ratio(cat, y, c),
                (false, false) => 0.0,
            };
            tracker.observe((co.value(c) - expected).abs(), || {
                vec![cat.label(x), cat.label(y), cat.label(c)]
            });
        }
    }
    tracker.finish()
}

fn diagram_pairs(n: usize, sampling: &Sampling) -> Vec<(usize, usize)> {
    match sampling {
        Sampling::Exhaustive => {
            let mut pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|x| (x..n).map(move |y| (x, y)))
                .collect();
            pairs.truncate(DIAGRAM_PAIR_LIMIT);
            pairs
        }
        random => {
            let mut pairs = random.pairs(n);
            pairs.truncate(DIAGRAM_PAIR_LIMIT);
            pairs
        }
    }
}

fn weighted_limit_entries<C: Category>(
    cat: &C,
    pairs: &[(usize, usize)],
    config: &SuiteConfig,
) -> Vec<LawEntry> {
    let mut trivial = ViolationTracker::new("weighted-limit-trivial");
    let mut oracle = ViolationTracker::new("weighted-limit-oracle");
    let mut functorial = ViolationTracker::new("weighted-limit-functorial").finish();
    let n = cat.object_count();
    let pair_sampling = if n <= config.exhaustive_limit {
        Sampling::Exhaustive
    } else {
        Sampling::Random {
            seed: config.seed,
            count: config.sample_count,
        }
    };

    for &(x, y) in pairs {
        let (hx, hy) = (representable(cat, x), representable(cat, y));

        // trivial weights reduce to the product; a single weight-1 leg is the identity
        let trivial_diagram =
            WeightedDiagram::new(vec![(1.0, hx.clone()), (1.0, hy.clone())]).unwrap();
        let lim = weighted_limit(&trivial_diagram);
        let prod = product(&hx, &hy);
        for c in 0..n {
            trivial.observe((lim.value(c) - prod.value(c)).abs(), || {
                vec![cat.label(x), cat.label(y), cat.label(c)]
            });
        }
        let single = WeightedDiagram::new(vec![(1.0, hx.clone())]).unwrap();
        let single_lim = weighted_limit(&single);
        for c in 0..n {
            trivial.observe((single_lim.value(c) - hx.value(c)).abs(), || {
                vec![cat.label(x), cat.label(c)]
            });
        }

        for &(w1, w2) in &WEIGHT_PATTERNS {
            let diagram =
                WeightedDiagram::new(vec![(w1, hx.clone()), (w2, hy.clone())]).unwrap();
            let closed = weighted_limit(&diagram);
            functorial.absorb(functor_inequality(
                cat,
                &closed,
                "weighted-limit-functorial",
                &pair_sampling,
            ));
            let colim = weighted_colimit(&diagram);
            functorial.absorb(functor_inequality(
                cat,
                &colim,
                "weighted-limit-functorial",
                &pair_sampling,
            ));

            // the closed form must dominate every grid candidate
            if n <= ORACLE_OBJECT_LIMIT {
                let reference = oracle_weighted_limit(cat, &diagram, config.grid_step)
                    .expect("guarded oracle call");
                for c in 0..n {
                    oracle.observe(reference.value(c) - closed.value(c), || {
                        vec![cat.label(x), cat.label(y), cat.label(c)]
                    });
                }
            }
        }
    }

    vec![trivial.finish(), oracle.finish(), functorial]
}

fn implication_support_entry<C: Category>(cat: &C, sampling: &Sampling) -> LawEntry {
    let mut tracker = ViolationTracker::new("implication-support");
    let n = cat.object_count();
    for (x, y, c) in sampling.triples(n) {
        let (hx, hy) = (representable(cat, x), representable(cat, y));
        let value = internal_hom_at(cat, &hx, &hy, c);
        let zero_expected = (0..n).any(|d| {
            cat.leq_by_ids(c, d) && cat.leq_by_ids(x, d) && !cat.leq_by_ids(y, d)
        });
        let mismatch = (value == 0.0) != zero_expected;
        tracker.observe(if mismatch { 1.0 } else { 0.0 }, || {
            vec![cat.label(x), cat.label(y), cat.label(c)]
        });
    }
    tracker.finish()
}

fn implication_functoriality_entry<C: Category>(
    cat: &C,
    pairs: &[(usize, usize)],
    sampling: &Sampling,
) -> LawEntry {
    let mut entry = ViolationTracker::new("implication-functorial").finish();
    for &(x, y) in pairs {
        let imp = internal_hom(cat, &representable(cat, x), &representable(cat, y));
        entry.absorb(functor_inequality(
            cat,
            &imp,
            "implication-functorial",
            sampling,
        ));
    }
    entry
}

fn diff_extended(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else if a.is_infinite() || b.is_infinite() {
        f64::INFINITY
    } else {
        (a - b).abs()
    }
}

fn metric_transport_entry<C: Category>(
    cat: &C,
    object_sampling: &Sampling,
    pair_sampling: &Sampling,
    pairs: &[(usize, usize)],
) -> LawEntry {
    let mut tracker = ViolationTracker::new("metric-transport");
    let n = cat.object_count();

    // round trip through -ln and exp
    for x in object_sampling.objects(n) {
        let hx = representable(cat, x);
        for c in 0..n {
            let v = hx.value(c);
            let round = (-neg_ln(v)).exp();
            let violation = if v == 0.0 || v == 1.0 {
                (round - v).abs()
            } else {
                (round - v).abs() / v
            };
            tracker.observe(violation, || vec![cat.label(x), cat.label(c)]);
        }

        // transport carries copresheaves to metric copresheaves:
        // d(c, d) must dominate the truncated difference of -ln h^x
        let mx = to_metric(&hx);
        for (c, d) in pair_sampling.pairs(n) {
            let required = truncated_sub(mx.value(c), mx.value(d));
            let available = neg_ln(cat.hom_by_ids(c, d));
            tracker.observe(truncated_sub(available, required), || {
                vec![cat.label(x), cat.label(c), cat.label(d)]
            });
        }
    }

    for &(x, y) in pairs {
        let (hx, hy) = (representable(cat, x), representable(cat, y));
        let (mx, my) = (to_metric(&hx), to_metric(&hy));

        // conjugation identities for product and coproduct
        let unit_prod = to_metric(&product(&hx, &hy));
        let metric_prod = metric_product(&mx, &my);
        let unit_co = to_metric(&coproduct(&hx, &hy));
        let metric_co = crate::metric::metric_coproduct(&mx, &my);
        for c in 0..n {
            tracker.observe(diff_extended(unit_prod.value(c), metric_prod.value(c)), || {
                vec![cat.label(x), cat.label(y), cat.label(c)]
            });
            tracker.observe(diff_extended(unit_co.value(c), metric_co.value(c)), || {
                vec![cat.label(x), cat.label(y), cat.label(c)]
            });
        }

        // hom values agree through the transport
        let metric_side = metric_hom_copresheaves(&mx, &my);
        let unit_side = neg_ln(hom_copresheaves(&hx, &hy));
        let violation = if metric_side.is_infinite() || unit_side.is_infinite() {
            diff_extended(metric_side, unit_side)
        } else {
            (metric_side - unit_side).abs() / unit_side.abs().max(1.0)
        };
        tracker.observe(violation, || vec![cat.label(x), cat.label(y)]);
    }
    tracker.finish()
}

fn metric_triangle_entry<C: Category>(cat: &C, sampling: &Sampling) -> LawEntry {
    let mut tracker = ViolationTracker::new("metric-triangle");
    for (x, y, z) in sampling.triples(cat.object_count()) {
        let via = neg_ln(cat.hom_by_ids(x, y)) + neg_ln(cat.hom_by_ids(y, z));
        let direct = neg_ln(cat.hom_by_ids(x, z));
        tracker.observe(truncated_sub(via, direct), || {
            vec![cat.label(x), cat.label(y), cat.label(z)]
        });
    }
    tracker.finish()
}

fn tropical_module_entry<C: Category>(cat: &C, sampling: &Sampling, seed: u64) -> LawEntry {
    let mut tracker = ViolationTracker::new("tropical-module");
    let n = cat.object_count();
    if n == 0 {
        return tracker.finish();
    }

    let mut rng = ChaCha20Rng::seed_from_u64(seed ^ 0x74726f70);
    let mut ids = sampling.objects(n);
    ids.truncate(8);
    let elements: Vec<_> = ids.iter().map(|&x| metric_representable(cat, x)).collect();
    // dyadic scalars keep the additive laws exact
    let s = TropicalScalar::new(rng.gen_range(0..64) as f64 / 16.0).unwrap();
    let t = TropicalScalar::new(rng.gen_range(0..64) as f64 / 16.0).unwrap();
    let both = TropicalScalar::new(s.value() + t.value()).unwrap();
    let zero = TropicalScalar::new(0.0).unwrap();

    for (i, f) in elements.iter().enumerate() {
        let label = || vec![cat.label(ids[i])];

        // unit and identity laws
        let top = crate::metric::MetricCopresheaf::new(vec![f64::INFINITY; n]).unwrap();
        let unit = tropical_add(f, &top);
        let ident = tropical_scale(zero, f);
        for c in 0..n {
            tracker.observe(diff_extended(unit.value(c), f.value(c)), label);
            tracker.observe(diff_extended(ident.value(c), f.value(c)), label);
        }

        // scalar action composes additively
        let once = tropical_scale(both, f);
        let twice = tropical_scale(s, &tropical_scale(t, f));
        for c in 0..n {
            tracker.observe(diff_extended(once.value(c), twice.value(c)), label);
        }

        // scaling preserves the metric functor inequality
        let scaled = tropical_scale(s, f);
        for (x, y) in sampling.pairs(n) {
            let bound = truncated_sub(scaled.value(x), scaled.value(y));
            let d = neg_ln(cat.hom_by_ids(x, y));
            tracker.observe(truncated_sub(d, bound).min(f64::INFINITY), || {
                vec![cat.label(ids[i]), cat.label(x), cat.label(y)]
            });
        }

        for (j, g) in elements.iter().enumerate() {
            let pair_label = || vec![cat.label(ids[i]), cat.label(ids[j])];
            // commutativity and idempotence
            let fg = tropical_add(f, g);
            let gf = tropical_add(g, f);
            for c in 0..n {
                tracker.observe(diff_extended(fg.value(c), gf.value(c)), pair_label);
            }
            // distributivity of the action over addition
            let lhs = tropical_scale(s, &fg);
            let rhs = tropical_add(&tropical_scale(s, f), &tropical_scale(s, g));
            for c in 0..n {
                tracker.observe(diff_extended(lhs.value(c), rhs.value(c)), pair_label);
            }
            for h in &elements {
                let assoc_l = tropical_add(&fg, h);
                let assoc_r = tropical_add(f, &tropical_add(g, h));
                for c in 0..n {
                    tracker.observe(diff_extended(assoc_l.value(c), assoc_r.value(c)), pair_label);
                }
            }
        }
    }
    tracker.finish()
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("invalid random category spec: {detail}")]
    BadSpec { detail: String },
}
