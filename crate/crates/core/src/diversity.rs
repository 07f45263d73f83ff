//! Stirling diversity over a set of recognized, enriched actors.
//!
//! Δ = Σ_{i≠j} d_ij^α · (p_i · p_j)^β, summed over ordered pairs. Variety is
//! the number of distinct entities, balance the share vector `p`, disparity
//! the pairwise dissimilarity matrix `d`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DiversityError {
    #[error("no occurrences: every count is zero")]
    NoOccurrences,
    #[error("unknown disparity metric `{0}`")]
    UnknownMetric(String),
    #[error("entity id sets of balance and disparity differ")]
    IdMismatch,
    #[error("invalid parameters: alpha={alpha}, beta={beta} (both must be finite and >= 0)")]
    InvalidParams { alpha: f64, beta: f64 },
    #[error("invalid disparity matrix: {0}")]
    InvalidMatrix(String),
    #[error("duplicate entity id `{0}`")]
    DuplicateEntity(String),
}

/// Opaque resource identifier (an IRI, or an unnamed-category label).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EntityId(pub String);

impl EntityId {
    pub fn new(id: impl Into<String>) -> Self {
        EntityId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for EntityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<String> for EntityId {
    fn from(s: String) -> Self {
        EntityId(s)
    }
}

impl From<&str> for EntityId {
    fn from(s: &str) -> Self {
        EntityId(s.to_owned())
    }
}

/// The three kinds of actor with socio-political agency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ActorType {
    Person,
    Organisation,
    GeopoliticalEntity,
}

impl ActorType {
    pub fn as_str(self) -> &'static str {
        match self {
            ActorType::Person => "person",
            ActorType::Organisation => "organisation",
            ActorType::GeopoliticalEntity => "geopolitical-entity",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "person" => Some(ActorType::Person),
            "organisation" | "organization" => Some(ActorType::Organisation),
            "geopolitical-entity" | "gpe" => Some(ActorType::GeopoliticalEntity),
            _ => None,
        }
    }
}

/// A single `feature_name: feature_value` pair.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Feature {
    pub name: String,
    pub value: String,
}

impl Feature {
    pub fn new(name: impl Into<String>, value: impl Into<String>) -> Self {
        Feature {
            name: name.into(),
            value: value.into(),
        }
    }
}

/// Set of feature pairs. Several values per name are allowed; exact duplicates
/// collapse.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureSet {
    pairs: BTreeSet<Feature>,
}

impl FeatureSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns `false` if the pair was already present.
    pub fn insert(&mut self, name: impl Into<String>, value: impl Into<String>) -> bool {
        self.pairs.insert(Feature::new(name, value))
    }

    pub fn contains(&self, name: &str, value: &str) -> bool {
        self.pairs.contains(&Feature::new(name, value))
    }

    pub fn values<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.pairs
            .iter()
            .filter(move |f| f.name == name)
            .map(|f| f.value.as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = &Feature> {
        self.pairs.iter()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn extend(&mut self, other: FeatureSet) {
        self.pairs.extend(other.pairs);
    }

    pub fn intersection_len(&self, other: &FeatureSet) -> usize {
        self.pairs.intersection(&other.pairs).count()
    }

    pub fn union_len(&self, other: &FeatureSet) -> usize {
        self.pairs.len() + other.pairs.len() - self.intersection_len(other)
    }
}

impl<N: Into<String>, V: Into<String>> FromIterator<(N, V)> for FeatureSet {
    fn from_iter<I: IntoIterator<Item = (N, V)>>(iter: I) -> Self {
        let mut set = FeatureSet::new();
        for (n, v) in iter {
            set.insert(n, v);
        }
        set
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntityRecord {
    pub id: EntityId,
    pub label: String,
    pub actor_type: ActorType,
    pub features: FeatureSet,
}

impl EntityRecord {
    pub fn new(id: impl Into<String>, actor_type: ActorType, features: FeatureSet) -> Self {
        let id = id.into();
        EntityRecord {
            label: id.clone(),
            id: EntityId(id),
            actor_type,
            features,
        }
    }
}

/// Share of each entity among all mentions; sums to one unless empty.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BalanceVector {
    shares: BTreeMap<EntityId, f64>,
}

impl BalanceVector {
    /// Builds a vector from explicit shares. Shares must be non-negative and
    /// sum to one within 1e-9.
    pub fn from_shares<I>(shares: I) -> Result<Self, DiversityError>
    where
        I: IntoIterator<Item = (EntityId, f64)>,
    {
        let mut map = BTreeMap::new();
        for (id, p) in shares {
            if !(p.is_finite() && p >= 0.0) {
                return Err(DiversityError::InvalidMatrix(format!(
                    "share for `{id}` is {p}"
                )));
            }
            if map.insert(id.clone(), p).is_some() {
                return Err(DiversityError::DuplicateEntity(id.0));
            }
        }
        let total: f64 = map.values().sum();
        if !map.is_empty() && (total - 1.0).abs() > 1e-9 {
            return Err(DiversityError::InvalidMatrix(format!(
                "shares sum to {total}, expected 1"
            )));
        }
        Ok(BalanceVector { shares: map })
    }

    pub fn get(&self, id: &EntityId) -> Option<f64> {
        self.shares.get(id).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&EntityId, f64)> {
        self.shares.iter().map(|(k, v)| (k, *v))
    }

    pub fn ids(&self) -> impl Iterator<Item = &EntityId> {
        self.shares.keys()
    }

    pub fn len(&self) -> usize {
        self.shares.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shares.is_empty()
    }
}

/// Symmetric pairwise dissimilarity in [0, 1] with a zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DisparityMatrix {
    ids: Vec<EntityId>,
    index: HashMap<EntityId, usize>,
    values: Vec<f64>,
}

impl DisparityMatrix {
    /// Builds a matrix from a row-major `n × n` buffer, validating symmetry,
    /// the zero diagonal and the [0, 1] range.
    pub fn from_dense(ids: Vec<EntityId>, values: Vec<f64>) -> Result<Self, DiversityError> {
        let n = ids.len();
        if values.len() != n * n {
            return Err(DiversityError::InvalidMatrix(format!(
                "expected {} values for {n} entities, got {}",
                n * n,
                values.len()
            )));
        }
        let mut index = HashMap::with_capacity(n);
        for (i, id) in ids.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(DiversityError::DuplicateEntity(id.0.clone()));
            }
        }
        for i in 0..n {
            if values[i * n + i] != 0.0 {
                return Err(DiversityError::InvalidMatrix(format!(
                    "d({0},{0}) = {1}, expected 0",
                    ids[i],
                    values[i * n + i]
                )));
            }
            for j in 0..n {
                let v = values[i * n + j];
                if !(0.0..=1.0).contains(&v) {
                    return Err(DiversityError::InvalidMatrix(format!(
                        "d({},{}) = {v} outside [0,1]",
                        ids[i], ids[j]
                    )));
                }
                if v != values[j * n + i] {
                    return Err(DiversityError::InvalidMatrix(format!(
                        "d({},{}) != d({},{})",
                        ids[i], ids[j], ids[j], ids[i]
                    )));
                }
            }
        }
        Ok(DisparityMatrix { ids, index, values })
    }

    /// Builds a matrix by evaluating `f` on every unordered pair.
    pub fn from_fn<F>(ids: Vec<EntityId>, mut f: F) -> Result<Self, DiversityError>
    where
        F: FnMut(&EntityId, &EntityId) -> f64,
    {
        let n = ids.len();
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = f(&ids[i], &ids[j]);
                values[i * n + j] = v;
                values[j * n + i] = v;
            }
        }
        Self::from_dense(ids, values)
    }

    pub fn ids(&self) -> &[EntityId] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn get(&self, a: &EntityId, b: &EntityId) -> Option<f64> {
        let i = *self.index.get(a)?;
        let j = *self.index.get(b)?;
        Some(self.values[i * self.ids.len() + j])
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.ids.len() + j]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiversityParams {
    pub alpha: f64,
    pub beta: f64,
}

impl Default for DiversityParams {
    fn default() -> Self {
        DiversityParams {
            alpha: 1.0,
            beta: 1.0,
        }
    }
}

impl DiversityParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self, DiversityError> {
        let p = DiversityParams { alpha, beta };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<(), DiversityError> {
        let ok = |x: f64| x.is_finite() && x >= 0.0;
        if ok(self.alpha) && ok(self.beta) {
            Ok(())
        } else {
            Err(DiversityError::InvalidParams {
                alpha: self.alpha,
                beta: self.beta,
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiversityResult {
    pub delta: f64,
    pub variety: usize,
    pub balance_vector: BalanceVector,
    pub params: DiversityParams,
    /// Contribution of each ordered pair; only filled by
    /// [`stirling_delta_with_terms`].
    pub per_pair_terms: Option<BTreeMap<(EntityId, EntityId), f64>>,
}

/// Normalizes raw occurrence counts into shares.
pub fn compute_balance<K>(counts: &BTreeMap<K, u64>) -> Result<BalanceVector, DiversityError>
where
    K: Clone + Into<EntityId>,
{
    if counts.is_empty() {
        return Ok(BalanceVector::default());
    }
    let total: u64 = counts.values().sum();
    if total == 0 {
        return Err(DiversityError::NoOccurrences);
    }
    let shares = counts
        .iter()
        .map(|(k, &c)| (k.clone().into(), c as f64 / total as f64))
        .collect();
    Ok(BalanceVector { shares })
}

/// A pairwise dissimilarity between feature sets.
pub trait DisparityMetric: Send + Sync {
    fn id(&self) -> &str;
    fn dissimilarity(&self, a: &FeatureSet, b: &FeatureSet) -> f64;
}

/// `1 − |A ∩ B| / |A ∪ B|`; two empty sets are indistinguishable (0).
#[derive(Debug, Clone, Copy, Default)]
pub struct JaccardDistance;

impl DisparityMetric for JaccardDistance {
    fn id(&self) -> &str {
        "jaccard"
    }

    fn dissimilarity(&self, a: &FeatureSet, b: &FeatureSet) -> f64 {
        let union = a.union_len(b);
        if union == 0 {
            return 0.0;
        }
        1.0 - a.intersection_len(b) as f64 / union as f64
    }
}

pub const DEFAULT_METRIC: &str = "jaccard";

pub fn metric_by_id(id: &str) -> Result<Box<dyn DisparityMetric>, DiversityError> {
    match id {
        "jaccard" => Ok(Box::new(JaccardDistance)),
        other => Err(DiversityError::UnknownMetric(other.to_owned())),
    }
}

/// Pairwise disparity between entities using a registered metric id.
pub fn compute_disparity(
    entities: &[EntityRecord],
    metric: &str,
) -> Result<DisparityMatrix, DiversityError> {
    let metric = metric_by_id(metric)?;
    compute_disparity_with(entities, metric.as_ref())
}

pub fn compute_disparity_with(
    entities: &[EntityRecord],
    metric: &dyn DisparityMetric,
) -> Result<DisparityMatrix, DiversityError> {
    let ids: Vec<EntityId> = entities.iter().map(|e| e.id.clone()).collect();
    let by_id: HashMap<&EntityId, &FeatureSet> =
        entities.iter().map(|e| (&e.id, &e.features)).collect();
    if by_id.len() != entities.len() {
        let mut seen = BTreeSet::new();
        let dup = ids.iter().find(|id| !seen.insert(*id)).cloned();
        return Err(DiversityError::DuplicateEntity(dup.map(|d| d.0).unwrap_or_default()));
    }
    DisparityMatrix::from_fn(ids.clone(), |a, b| metric.dissimilarity(by_id[a], by_id[b]))
}

fn check_ids(balance: &BalanceVector, disparity: &DisparityMatrix) -> Result<(), DiversityError> {
    if balance.len() != disparity.len() || balance.ids().any(|id| !disparity.index.contains_key(id))
    {
        return Err(DiversityError::IdMismatch);
    }
    Ok(())
}

fn pair_term(d: f64, pi: f64, pj: f64, params: DiversityParams) -> f64 {
    // Zero-disparity pairs add nothing, whatever alpha is (no 0^0).
    if d == 0.0 {
        return 0.0;
    }
    d.powf(params.alpha) * (pi * pj).powf(params.beta)
}

/// Stirling's Δ over ordered pairs `i ≠ j`.
pub fn stirling_delta(
    balance: &BalanceVector,
    disparity: &DisparityMatrix,
    params: DiversityParams,
) -> Result<DiversityResult, DiversityError> {
    delta_impl(balance, disparity, params, false)
}

/// As [`stirling_delta`], also recording each ordered pair's term.
pub fn stirling_delta_with_terms(
    balance: &BalanceVector,
    disparity: &DisparityMatrix,
    params: DiversityParams,
) -> Result<DiversityResult, DiversityError> {
    delta_impl(balance, disparity, params, true)
}

fn delta_impl(
    balance: &BalanceVector,
    disparity: &DisparityMatrix,
    params: DiversityParams,
    keep_terms: bool,
) -> Result<DiversityResult, DiversityError> {
    params.validate()?;
    check_ids(balance, disparity)?;
    let n = disparity.len();
    let shares: Vec<f64> = disparity
        .ids
        .iter()
        .map(|id| balance.shares[id])
        .collect();
    let mut terms = keep_terms.then(BTreeMap::new);
    let mut delta = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let t = pair_term(disparity.at(i, j), shares[i], shares[j], params);
            delta += t;
            if let Some(terms) = terms.as_mut() {
                terms.insert((disparity.ids[i].clone(), disparity.ids[j].clone()), t);
            }
        }
    }
    Ok(DiversityResult {
        delta,
        variety: n,
        balance_vector: balance.clone(),
        params,
        per_pair_terms: terms,
    })
}

/// `1 − Σ p_i²`, the α = 0, β = 1 special case of Δ.
pub fn gini_simpson(balance: &BalanceVector) -> f64 {
    if balance.is_empty() {
        return 0.0;
    }
    1.0 - balance.iter().map(|(_, p)| p * p).sum::<f64>()
}

/// Convenience: counts and entities to Δ in one go. Entities without a count
/// are ignored; counted ids without an entity record are an error.
pub fn diversity_of(
    counts: &BTreeMap<EntityId, u64>,
    entities: &[EntityRecord],
    metric: &dyn DisparityMetric,
    params: DiversityParams,
) -> Result<DiversityResult, DiversityError> {
    let balance = compute_balance(counts)?;
    let present: Vec<EntityRecord> = entities
        .iter()
        .filter(|e| counts.contains_key(&e.id))
        .cloned()
        .collect();
    let disparity = compute_disparity_with(&present, metric)?;
    stirling_delta(&balance, &disparity, params)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(names: &[&str]) -> Vec<EntityId> {
        names.iter().map(|s| EntityId::from(*s)).collect()
    }

    fn counts(pairs: &[(&str, u64)]) -> BTreeMap<EntityId, u64> {
        pairs.iter().map(|(k, v)| (EntityId::from(*k), *v)).collect()
    }

    fn features(pairs: &[(&str, &str)]) -> FeatureSet {
        pairs.iter().copied().collect()
    }

    #[test]
    fn balance_normalizes_counts() {
        let b = compute_balance(&counts(&[("A", 3), ("B", 1)])).unwrap();
        assert_eq!(b.get(&"A".into()), Some(0.75));
        assert_eq!(b.get(&"B".into()), Some(0.25));

        let b = compute_balance(&counts(&[("A", 5)])).unwrap();
        assert_eq!(b.get(&"A".into()), Some(1.0));

        let b = compute_balance(&counts(&[("A", 2), ("B", 2), ("C", 2)])).unwrap();
        for (_, p) in b.iter() {
            assert!((p - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn balance_edge_cases() {
        assert!(compute_balance(&BTreeMap::<EntityId, u64>::new())
            .unwrap()
            .is_empty());
        assert_eq!(
            compute_balance(&counts(&[("A", 0), ("B", 0)])),
            Err(DiversityError::NoOccurrences)
        );
    }

    #[test]
    fn jaccard_examples() {
        let ab = features(&[("a", "1"), ("b", "2")]);
        assert_eq!(JaccardDistance.dissimilarity(&ab, &ab.clone()), 0.0);
        let cd = features(&[("c", "1"), ("d", "2")]);
        assert_eq!(JaccardDistance.dissimilarity(&ab, &cd), 1.0);
        let abc = features(&[("a", "x"), ("b", "x"), ("c", "x")]);
        let bcd = features(&[("b", "x"), ("c", "x"), ("d", "x")]);
        assert_eq!(JaccardDistance.dissimilarity(&abc, &bcd), 0.5);
        let empty = FeatureSet::new();
        assert_eq!(JaccardDistance.dissimilarity(&empty, &empty), 0.0);
        assert_eq!(JaccardDistance.dissimilarity(&empty, &ab), 1.0);
    }

    #[test]
    fn unknown_metric_is_rejected() {
        let e = [EntityRecord::new("A", ActorType::Person, FeatureSet::new())];
        assert_eq!(
            compute_disparity(&e, "cosine").unwrap_err(),
            DiversityError::UnknownMetric("cosine".into())
        );
    }

    #[test]
    fn disparity_matrix_validation() {
        let bad_diag = DisparityMatrix::from_dense(ids(&["A", "B"]), vec![0.1, 0.5, 0.5, 0.0]);
        assert!(bad_diag.is_err());
        let asym = DisparityMatrix::from_dense(ids(&["A", "B"]), vec![0.0, 0.5, 0.4, 0.0]);
        assert!(asym.is_err());
        let range = DisparityMatrix::from_dense(ids(&["A", "B"]), vec![0.0, 1.5, 1.5, 0.0]);
        assert!(range.is_err());
        let dup = DisparityMatrix::from_dense(ids(&["A", "A"]), vec![0.0; 4]);
        assert!(matches!(dup, Err(DiversityError::DuplicateEntity(_))));
    }

    #[test]
    fn delta_single_entity_is_zero() {
        let b = compute_balance(&counts(&[("A", 4)])).unwrap();
        let d = DisparityMatrix::from_dense(ids(&["A"]), vec![0.0]).unwrap();
        for (a, be) in [(0.0, 0.0), (1.0, 1.0), (2.5, 0.3)] {
            let r = stirling_delta(&b, &d, DiversityParams::new(a, be).unwrap()).unwrap();
            assert_eq!(r.delta, 0.0);
            assert_eq!(r.variety, 1);
        }
    }

    #[test]
    fn delta_two_entities_hand_value() {
        let b = compute_balance(&counts(&[("A", 1), ("B", 1)])).unwrap();
        let d = DisparityMatrix::from_dense(ids(&["A", "B"]), vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        let r = stirling_delta_with_terms(&b, &d, DiversityParams::default()).unwrap();
        assert_eq!(r.delta, 0.5);
        let terms = r.per_pair_terms.unwrap();
        assert_eq!(terms.len(), 2);
        assert_eq!(terms[&("A".into(), "B".into())], 0.25);
    }

    #[test]
    fn delta_gini_simpson_reduction() {
        let b = BalanceVector::from_shares(vec![
            ("A".into(), 0.5),
            ("B".into(), 0.3),
            ("C".into(), 0.2),
        ])
        .unwrap();
        let d = DisparityMatrix::from_fn(ids(&["A", "B", "C"]), |_, _| 0.4).unwrap();
        let r = stirling_delta(&b, &d, DiversityParams::new(0.0, 1.0).unwrap()).unwrap();
        assert!((r.delta - 0.62).abs() < 1e-12);
        assert!((gini_simpson(&b) - 0.62).abs() < 1e-12);
    }

    #[test]
    fn zero_disparity_contributes_nothing_for_alpha_zero() {
        let b = compute_balance(&counts(&[("A", 1), ("B", 1)])).unwrap();
        let d = DisparityMatrix::from_dense(ids(&["A", "B"]), vec![0.0; 4]).unwrap();
        let r = stirling_delta(&b, &d, DiversityParams::new(0.0, 1.0).unwrap()).unwrap();
        assert_eq!(r.delta, 0.0);
    }

    #[test]
    fn gini_simpson_examples() {
        let uniform = compute_balance(&counts(&[("A", 1), ("B", 1)])).unwrap();
        assert_eq!(gini_simpson(&uniform), 0.5);
        let single = compute_balance(&counts(&[("A", 1)])).unwrap();
        assert_eq!(gini_simpson(&single), 0.0);
    }

    #[test]
    fn id_mismatch_is_rejected() {
        let b = compute_balance(&counts(&[("A", 1), ("B", 1)])).unwrap();
        let d = DisparityMatrix::from_dense(ids(&["A", "C"]), vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        assert_eq!(
            stirling_delta(&b, &d, DiversityParams::default()).unwrap_err(),
            DiversityError::IdMismatch
        );
    }

    #[test]
    fn negative_params_rejected() {
        assert!(DiversityParams::new(-0.1, 1.0).is_err());
        assert!(DiversityParams::new(1.0, f64::NAN).is_err());
    }

    #[test]
    fn uniform_maximizes_delta_on_three_entities() {
        let d = DisparityMatrix::from_fn(ids(&["A", "B", "C"]), |_, _| 1.0).unwrap();
        let at = |p: [f64; 3]| {
            let b = BalanceVector::from_shares(ids(&["A", "B", "C"]).into_iter().zip(p)).unwrap();
            stirling_delta(&b, &d, DiversityParams::default()).unwrap().delta
        };
        let uniform = at([1.0 / 3.0; 3]);
        let steps = 60;
        for i in 0..=steps {
            for j in 0..=(steps - i) {
                let a = i as f64 / steps as f64;
                let b = j as f64 / steps as f64;
                let c = (1.0 - a - b).max(0.0);
                assert!(at([a, b, c]) <= uniform + 1e-12);
            }
        }
    }

    #[test]
    fn diversity_of_combines_steps() {
        let ents = vec![
            EntityRecord::new("A", ActorType::Person, features(&[("party", "X")])),
            EntityRecord::new("B", ActorType::Person, features(&[("party", "Y")])),
            EntityRecord::new("C", ActorType::Person, features(&[("party", "Z")])),
        ];
        let r = diversity_of(
            &counts(&[("A", 2), ("B", 2)]),
            &ents,
            &JaccardDistance,
            DiversityParams::default(),
        )
        .unwrap();
        assert_eq!(r.variety, 2);
        assert_eq!(r.delta, 0.5);
    }
}
