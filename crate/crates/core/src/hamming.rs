//! The Hamming space of finite subsets of the naturals, its canonical copy in
//! `⊕ Z_2`, and embeddings `F ↦ Σ_{i∈F} b_i` into other groups.
//!
//! [`greedy_select`] picks a subsequence `(b_n)` of a generator sequence so
//! that subset sums are pairwise distinct and no signed sum of `k + 1`
//! distinct terms lands in `A_k`. Those two conditions make the subset-sum map
//! an isometry from the Hamming space onto its image under the word metric;
//! [`verify_isometric_embedding`] checks that conclusion directly.

use std::collections::{BTreeSet, HashMap};
use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use rayon::prelude::*;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec};
use crate::metric::GeneratorSystem;

/// Longest sequence accepted by [`fs_strict_check`].
pub const MAX_FS_LEN: usize = 24;
/// Longest sequence accepted by the signed-sum checker.
pub const MAX_SIGNED_LEN: usize = 16;
/// Longest output of [`greedy_select`].
pub const MAX_TARGET_LEN: usize = 14;

/// A finite subset of the naturals.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, JsonSchema)]
#[serde(transparent)]
pub struct HammingPoint(Vec<usize>);

impl HammingPoint {
    pub fn new(indices: impl IntoIterator<Item = usize>) -> Self {
        let set: BTreeSet<usize> = indices.into_iter().collect();
        HammingPoint(set.into_iter().collect())
    }

    pub fn empty() -> Self {
        HammingPoint(Vec::new())
    }

    /// The subset of `0..64` whose members are the set bits of `mask`.
    pub fn from_mask(mask: u64) -> Self {
        HammingPoint((0..64).filter(|i| mask >> i & 1 == 1).collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn symmetric_difference(&self, other: &HammingPoint) -> HammingPoint {
        let (a, b): (BTreeSet<_>, BTreeSet<_>) = (self.0.iter().collect(), other.0.iter().collect());
        HammingPoint(a.symmetric_difference(&b).map(|&&i| i).collect())
    }
}

/// `|F △ H|`.
pub fn hamming_distance(f: &HammingPoint, h: &HammingPoint) -> usize {
    let (mut i, mut j, mut common) = (0, 0, 0);
    let (a, b) = (&f.0, &h.0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                common += 1;
                i += 1;
                j += 1;
            }
        }
    }
    a.len() + b.len() - 2 * common
}

/// Support map `⊕ Z_2 → H`.
pub fn to_hamming(x: &Element, spec: &GroupSpec) -> Result<HammingPoint> {
    if !spec.is_boolean() {
        return Err(Error::WrongGroup);
    }
    spec.check(x)?;
    Ok(HammingPoint(x.support().collect()))
}

/// Inverse of [`to_hamming`].
pub fn from_hamming(h: &HammingPoint, spec: &GroupSpec) -> Result<Element> {
    if !spec.is_boolean() {
        return Err(Error::WrongGroup);
    }
    spec.element(h.0.iter().map(|&i| (i, 1)))
}

/// Two index sets with equal subset sums.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct SumCollision {
    pub f: HammingPoint,
    pub h: HammingPoint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct FsStrictness {
    pub strict: bool,
    pub collision: Option<SumCollision>,
}

fn subset_sum(b: &[Element], mask: u64, spec: &GroupSpec) -> Result<Element> {
    let mut acc = Element::identity();
    for (i, x) in b.iter().enumerate() {
        if mask >> i & 1 == 1 {
            acc = spec.add(&acc, x)?;
        }
    }
    Ok(acc)
}

fn fingerprint(x: &Element) -> u64 {
    let mut h = DefaultHasher::new();
    x.hash(&mut h);
    h.finish()
}

/// Whether all `2^|b|` subset sums are pairwise distinct.
///
/// On failure the witness is `(F, H)` with `H` the least subset (as a bit
/// mask) whose sum repeats an earlier one and `F` the least earlier subset
/// with that sum.
pub fn fs_strict_check(b: &[Element], spec: &GroupSpec) -> Result<FsStrictness> {
    if b.len() > MAX_FS_LEN {
        return Err(Error::TooLong {
            len: b.len(),
            max: MAX_FS_LEN,
        });
    }
    for x in b {
        spec.check(x)?;
    }
    let n = b.len();
    // Gray-code walk: each step adds or removes one term.
    let mut prints: Vec<(u64, u32)> = Vec::with_capacity(1 << n);
    let mut acc = Element::identity();
    let mut mask = 0u64;
    prints.push((fingerprint(&acc), 0));
    for step in 1u64..(1 << n) {
        let i = step.trailing_zeros() as usize;
        acc = if mask >> i & 1 == 1 {
            spec.sub(&acc, &b[i])?
        } else {
            spec.add(&acc, &b[i])?
        };
        mask ^= 1 << i;
        prints.push((fingerprint(&acc), mask as u32));
    }
    prints.par_sort_unstable();
    let mut best: Option<(u32, u32)> = None;
    let mut start = 0;
    while start < prints.len() {
        let mut end = start + 1;
        while end < prints.len() && prints[end].0 == prints[start].0 {
            end += 1;
        }
        if end - start > 1 {
            // equal fingerprints: compare actual sums, masks ascending
            let group: Vec<u32> = prints[start..end].iter().map(|p| p.1).collect();
            let sums: Vec<Element> = group
                .iter()
                .map(|&m| subset_sum(b, m as u64, spec))
                .collect::<Result<_>>()?;
            let mut first_of: HashMap<&Element, u32> = HashMap::new();
            for (m, s) in group.iter().zip(&sums) {
                match first_of.get(s) {
                    Some(&f) => {
                        if best.is_none_or(|(_, h)| *m < h) {
                            best = Some((f, *m));
                        }
                    }
                    None => {
                        first_of.insert(s, *m);
                    }
                }
            }
        }
        start = end;
    }
    Ok(match best {
        None => FsStrictness {
            strict: true,
            collision: None,
        },
        Some((f, h)) => FsStrictness {
            strict: false,
            collision: Some(SumCollision {
                f: HammingPoint::from_mask(f as u64),
                h: HammingPoint::from_mask(h as u64),
            }),
        },
    })
}

/// A signed sum of `k + 1` distinct terms that lies in `A_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct SignedSumViolation {
    /// Term indices `i_0 < ... < i_k`.
    pub indices: Vec<usize>,
    /// `+1` or `-1` for each index.
    pub signs: Vec<i8>,
    pub k: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct SignedSumReport {
    pub holds: bool,
    pub violation: Option<SignedSumViolation>,
}

/// Signed sum of the terms of `b` at `indices`; bit `j` of `signs`
/// negates the `j`-th selected term.
fn signed_sum(b: &[Element], indices: &[usize], signs: u64, spec: &GroupSpec) -> Element {
    let mut acc = Element::identity();
    for (j, &i) in indices.iter().enumerate() {
        acc = if signs >> j & 1 == 1 {
            spec.sub(&acc, &b[i])
        } else {
            spec.add(&acc, &b[i])
        }
        .expect("terms respect the coordinate bound");
    }
    acc
}

/// Checks that for every `i_0 < ... < i_k` and every choice of signs, the sum
/// `±b_{i_0} ± ... ± b_{i_k}` is not in `A_k`.
///
/// Subsets are visited in increasing bit-mask order and sign patterns in
/// increasing order with bit `j` negating the `j`-th term; the reported
/// violation is the first one in that order. Only patterns with the last term
/// positive are evaluated, since `A_k = -A_k`.
pub fn signed_sum_condition_check(b: &[Element], sys: &GeneratorSystem) -> Result<SignedSumReport> {
    if b.len() > MAX_SIGNED_LEN {
        return Err(Error::TooLong {
            len: b.len(),
            max: MAX_SIGNED_LEN,
        });
    }
    let spec = sys.spec();
    for x in b {
        spec.check(x)?;
    }
    let violation = (1u64..(1 << b.len())).into_par_iter().find_map_first(|mask| {
        let indices: Vec<usize> = (0..b.len()).filter(|i| mask >> i & 1 == 1).collect();
        let k = indices.len() - 1;
        (0u64..(1 << k)).find_map(|signs| {
            let s = signed_sum(b, &indices, signs, spec);
            sys.in_sumset(&s, k as u32).then(|| SignedSumViolation {
                signs: (0..=k).map(|j| if signs >> j & 1 == 1 { -1 } else { 1 }).collect(),
                indices: indices.clone(),
                k,
            })
        })
    });
    Ok(SignedSumReport {
        holds: violation.is_none(),
        violation,
    })
}

/// Selected subsequence together with the outcome of its checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct EmbeddingCertificate {
    pub b_seq: Vec<Element>,
    /// Position of each `b_i` in the input sequence; strictly increasing.
    pub source_indices: Vec<usize>,
    pub fs_strict: FsStrictness,
    pub signed_sums: SignedSumReport,
    /// All pairs `F, H ⊆ {0, ..., support_bound - 1}` were checked for
    /// isometry; 0 until [`EmbeddingCertificate::record_isometry`] runs.
    pub support_bound: usize,
    pub verified: bool,
    pub counterexample: Option<IsometryCounterexample>,
}

impl EmbeddingCertificate {
    /// Folds an isometry verdict into the certificate.
    pub fn record_isometry(&mut self, verdict: &IsometryVerdict) {
        self.support_bound = verdict.support_bound;
        match &verdict.status {
            IsometryStatus::Verified => {}
            IsometryStatus::Violated(c) => {
                self.verified = false;
                self.counterexample = Some(c.clone());
            }
            IsometryStatus::Inconclusive { .. } => self.verified = false,
        }
    }
}

/// Which incremental condition rejected a candidate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Rejection {
    SubsetSumDifference,
    SignedSum,
}

impl Rejection {
    fn describe(self) -> &'static str {
        match self {
            Rejection::SubsetSumDifference => {
                "candidate equals a difference of two subset sums of the chosen prefix"
            }
            Rejection::SignedSum => "a signed sum with the candidate lies in A_(k+1)",
        }
    }
}

/// Chooses `b_0, b_1, ...` from `a` in order of increasing source index.
///
/// `b_0` is the first nonzero term. A later candidate `c` is accepted when it
/// avoids every difference `Σ_F b - Σ_H b` of prefix subset sums and when, for
/// every nonempty `{i_0 < ... < i_k}` of the prefix and all signs,
/// `±b_{i_0} ± ... ± b_{i_k} ± c ∉ A_{k+1}`. Only source indices below
/// `scan_limit` are examined.
pub fn greedy_select(
    a: &[Element],
    sys: &GeneratorSystem,
    target_len: usize,
    scan_limit: usize,
) -> Result<EmbeddingCertificate> {
    if target_len > MAX_TARGET_LEN {
        return Err(Error::TooLong {
            len: target_len,
            max: MAX_TARGET_LEN,
        });
    }
    let spec = sys.spec();
    for x in a {
        spec.check(x)?;
    }
    let limit = scan_limit.min(a.len());
    let mut b: Vec<Element> = Vec::new();
    let mut source = Vec::new();
    // all Σ t_i b_i with t_i ∈ {-1, 0, 1}
    let mut differences: std::collections::HashSet<Element> = [Element::identity()].into();
    // prefix signed sums with at least one term, tagged with the term count
    let mut signed: Vec<(Element, u32)> = Vec::new();
    let mut next = 0usize;
    let mut last_failure: Option<Rejection> = None;
    while b.len() < target_len {
        let mut accepted = None;
        while next < limit {
            let m = next;
            next += 1;
            let c = &a[m];
            if c.is_identity() {
                continue;
            }
            if differences.contains(c) {
                last_failure = Some(Rejection::SubsetSumDifference);
                continue;
            }
            let bad = signed.par_iter().any(|(s, terms)| {
                [spec.add(s, c), spec.sub(s, c)]
                    .into_iter()
                    .any(|v| sys.in_sumset(&v.expect("bounded"), *terms))
            });
            if bad {
                last_failure = Some(Rejection::SignedSum);
                continue;
            }
            accepted = Some(m);
            break;
        }
        let Some(m) = accepted else {
            return Err(Error::ScanExhausted {
                selected: b.len(),
                scan_limit: limit,
                last_failure: last_failure
                    .map(Rejection::describe)
                    .unwrap_or("input sequence has no further nonzero terms")
                    .to_string(),
            });
        };
        let c = a[m].clone();
        let mut grown = Vec::with_capacity(signed.len() * 2 + 2);
        for (s, terms) in &signed {
            grown.push((spec.add(s, &c)?, terms + 1));
            grown.push((spec.sub(s, &c)?, terms + 1));
        }
        grown.push((c.clone(), 1));
        grown.push((spec.neg(&c), 1));
        signed.extend(grown);
        let shifted: Vec<Element> = differences
            .iter()
            .flat_map(|d| [spec.add(d, &c), spec.sub(d, &c)])
            .collect::<Result<_>>()?;
        differences.extend(shifted);
        b.push(c);
        source.push(m);
    }
    let fs_strict = fs_strict_check(&b, spec)?;
    let signed_sums = signed_sum_condition_check(&b, sys)?;
    let verified = fs_strict.strict && signed_sums.holds;
    Ok(EmbeddingCertificate {
        b_seq: b,
        source_indices: source,
        fs_strict,
        signed_sums,
        support_bound: 0,
        verified,
        counterexample: None,
    })
}

/// `Σ_{i∈H} b_i`.
pub fn fs_map(h: &HammingPoint, b_seq: &[Element], spec: &GroupSpec) -> Result<Element> {
    let mut acc = Element::identity();
    for &i in h.indices() {
        let term = b_seq.get(i).ok_or(Error::IndexOutOfRange {
            index: i,
            len: b_seq.len(),
        })?;
        acc = spec.add(&acc, term)?;
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct IsometryCounterexample {
    pub f: HammingPoint,
    pub h: HammingPoint,
    /// `|F △ H|`.
    pub expected: usize,
    /// Word distance between the images; `None` beyond the search bound.
    pub got: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum IsometryStatus {
    Verified,
    Violated(IsometryCounterexample),
    /// A distance search hit its bound before deciding the pair.
    Inconclusive { f: HammingPoint, h: HammingPoint, search_bound: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct IsometryVerdict {
    pub support_bound: usize,
    pub status: IsometryStatus,
    /// `modulus[i]` is the largest image distance over checked pairs at
    /// Hamming distance at most `i`.
    pub modulus: Vec<u32>,
    pub pairs_checked: u64,
}

impl IsometryVerdict {
    pub fn is_verified(&self) -> bool {
        self.status == IsometryStatus::Verified
    }
}

/// Compares `d(f(F), f(H))` with `|F △ H|` for all `F, H ⊆ {0..support_bound-1}`.
///
/// Distances are searched up to `max_r`; a pair left undecided makes the
/// verdict inconclusive rather than violated.
pub fn verify_isometric_embedding(
    b_seq: &[Element],
    sys: &GeneratorSystem,
    support_bound: usize,
    max_r: u32,
) -> Result<IsometryVerdict> {
    if support_bound > b_seq.len() {
        return Err(Error::IndexOutOfRange {
            index: support_bound,
            len: b_seq.len(),
        });
    }
    if support_bound > 20 {
        return Err(Error::TooLong {
            len: support_bound,
            max: 20,
        });
    }
    let spec = sys.spec();
    let n = support_bound;
    let images: Vec<Element> = (0..1u64 << n)
        .map(|m| subset_sum(&b_seq[..n], m, spec))
        .collect::<Result<_>>()?;
    // f(F) - f(H) depends only on the signed pattern over F △ H
    let mut cache: HashMap<Element, Option<u32>> = HashMap::new();
    let mut modulus = vec![0u32; n + 1];
    let mut status = IsometryStatus::Verified;
    let mut pairs = 0u64;
    'outer: for fm in 0..1u64 << n {
        for hm in 0..1u64 << n {
            pairs += 1;
            let expected = (fm ^ hm).count_ones() as usize;
            let z = spec.sub(&images[fm as usize], &images[hm as usize])?;
            let got = *cache.entry(z).or_insert_with_key(|z| sys.norm(z, max_r).value);
            match got {
                Some(d) => {
                    modulus[expected] = modulus[expected].max(d);
                    if d as usize != expected {
                        status = IsometryStatus::Violated(IsometryCounterexample {
                            f: HammingPoint::from_mask(fm),
                            h: HammingPoint::from_mask(hm),
                            expected,
                            got: Some(d),
                        });
                        break 'outer;
                    }
                }
                None => {
                    status = IsometryStatus::Inconclusive {
                        f: HammingPoint::from_mask(fm),
                        h: HammingPoint::from_mask(hm),
                        search_bound: max_r,
                    };
                    break 'outer;
                }
            }
        }
    }
    for i in 1..modulus.len() {
        modulus[i] = modulus[i].max(modulus[i - 1]);
    }
    Ok(IsometryVerdict {
        support_bound,
        status,
        modulus,
        pairs_checked: pairs,
    })
}
