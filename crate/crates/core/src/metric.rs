//! Generator systems, sumsets `A_n` of the symmetric alphabet
//! `A = {0} ∪ {±a_n}`, and the word metric of the Cayley graph.
//!
//! A [`GeneratorSystem`] holds a finite truncation `a_0, ..., a_{N-1}` of a
//! generator sequence. All answers are exact for that truncation. Membership
//! `x ∈ A_n` is therefore a sound under-approximation of membership for the
//! full infinite sequence: every positive answer stays positive.
//!
//! Distances are computed from a table of exact distances for every element
//! of `A_T`, built once by layered sumset expansion. A query `z` outside the
//! table is resolved by meet in the middle: `z ∈ A_{j+T}` iff `z - w ∈ A_T`
//! for some `w ∈ A_j`, where `w` ranges over table layers when `j ≤ T` and
//! over signed generator multisets of size `j` otherwise.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::One;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Element, ElementRepr, GroupSpec, IntValue};

/// Default cap on enumerated ball sizes.
pub const DEFAULT_BALL_CAP: usize = 1_000_000;

/// Default cap on the number of elements held by the distance table.
pub const DEFAULT_TABLE_CAP: usize = 1 << 18;

/// An element as written in configuration files: a bare integer (coordinate
/// 0), an entry list `[[i, v], ...]`, or `{"entries": [...]}`.
#[derive(Clone, Debug, Serialize, Deserialize, JsonSchema)]
#[serde(untagged)]
pub enum ElementLiteral {
    Integer(IntValue),
    Entries(Vec<(usize, IntValue)>),
    Object(ElementRepr),
}

impl ElementLiteral {
    pub fn resolve(&self, spec: &GroupSpec) -> Result<Element> {
        let x = match self {
            ElementLiteral::Integer(v) => spec.scalar(v.0.clone())?,
            ElementLiteral::Entries(entries) | ElementLiteral::Object(ElementRepr { entries }) => {
                spec.element(entries.iter().map(|(i, v)| (*i, v.0.clone())))?
            }
        };
        Ok(x)
    }
}

impl From<&Element> for ElementLiteral {
    fn from(x: &Element) -> Self {
        ElementLiteral::Entries(
            x.entries().iter().map(|(i, v)| (*i, IntValue(v.clone()))).collect(),
        )
    }
}

/// How a generator list is written in configuration files.
#[derive(Clone, Debug, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeneratorSpec {
    /// Explicit values.
    List { values: Vec<ElementLiteral> },
    /// `base^0, base^1, ..., base^(count-1)` on coordinate 0.
    Powers { base: IntValue, count: usize },
    /// `e_0, e_1, ..., e_(count-1)`.
    Basis { count: usize },
}

impl GeneratorSpec {
    pub fn elements(&self, spec: &GroupSpec) -> Result<Vec<Element>> {
        match self {
            GeneratorSpec::List { values } => values.iter().map(|v| v.resolve(spec)).collect(),
            GeneratorSpec::Powers { base, count } => {
                let mut p = BigInt::one();
                let mut out = Vec::with_capacity(*count);
                for _ in 0..*count {
                    out.push(spec.scalar(p.clone())?);
                    p *= &base.0;
                }
                Ok(out)
            }
            GeneratorSpec::Basis { count } => (0..*count).map(|i| spec.unit(i)).collect(),
        }
    }

    pub fn build(&self, spec: &GroupSpec) -> Result<GeneratorSystem> {
        GeneratorSystem::new(spec.clone(), self.elements(spec)?)
    }
}

/// Result of a bounded distance search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DistanceResult {
    /// `None` when the distance exceeds `search_bound`.
    pub value: Option<u32>,
    pub search_bound: u32,
}

impl DistanceResult {
    pub fn within(&self, r: u32) -> bool {
        self.value.is_some_and(|d| d <= r)
    }
}

impl fmt::Display for DistanceResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value {
            Some(d) => write!(f, "{d}"),
            None => write!(f, "> {}", self.search_bound),
        }
    }
}

#[derive(Serialize, Deserialize, JsonSchema)]
#[serde(untagged)]
enum DistanceValue {
    Finite(u32),
    Exceeds(ExceedsTag),
}

#[derive(Serialize, Deserialize, JsonSchema)]
enum ExceedsTag {
    #[serde(rename = "exceeds-bound")]
    ExceedsBound,
}

#[derive(Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
struct DistanceResultRepr {
    distance: DistanceValue,
    search_bound: u32,
}

impl Serialize for DistanceResult {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DistanceResultRepr {
            distance: match self.value {
                Some(d) => DistanceValue::Finite(d),
                None => DistanceValue::Exceeds(ExceedsTag::ExceedsBound),
            },
            search_bound: self.search_bound,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DistanceResult {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = DistanceResultRepr::deserialize(d)?;
        Ok(DistanceResult {
            value: match r.distance {
                DistanceValue::Finite(v) => Some(v),
                DistanceValue::Exceeds(_) => None,
            },
            search_bound: r.search_bound,
        })
    }
}

impl JsonSchema for DistanceResult {
    fn schema_name() -> std::borrow::Cow<'static, str> {
        "DistanceResult".into()
    }

    fn json_schema(generator: &mut schemars::SchemaGenerator) -> schemars::Schema {
        DistanceResultRepr::json_schema(generator)
    }
}

/// Exact distances to the identity for every element of `A_T`.
#[derive(Debug)]
struct SumsetTable {
    dist: HashMap<Element, u32>,
    /// `layers[k]` holds the elements at distance exactly `k`.
    layers: Vec<Vec<Element>>,
    /// The table holds the whole subgroup generated by the alphabet.
    complete: bool,
    /// Growth stopped at the size cap.
    capped: bool,
}

impl SumsetTable {
    fn new() -> Self {
        let mut dist = HashMap::new();
        dist.insert(Element::identity(), 0);
        SumsetTable {
            dist,
            layers: vec![vec![Element::identity()]],
            complete: false,
            capped: false,
        }
    }

    fn radius(&self) -> u32 {
        (self.layers.len() - 1) as u32
    }

    fn settled(&self, radius: u32) -> bool {
        self.complete || self.capped || self.radius() >= radius
    }

    fn grow(&mut self, spec: &GroupSpec, letters: &[Element], radius: u32, cap: usize) {
        while !self.settled(radius) {
            let last = self.layers.last().expect("layer 0 exists");
            if self.dist.len() + last.len() * letters.len() > cap {
                self.capped = true;
                break;
            }
            let k = self.layers.len() as u32;
            let mut next = Vec::new();
            for u in last {
                for a in letters {
                    let v = spec.add(u, a).expect("letters respect the coordinate bound");
                    if !self.dist.contains_key(&v) {
                        self.dist.insert(v.clone(), k);
                        next.push(v);
                    }
                }
            }
            if next.is_empty() {
                self.complete = true;
                break;
            }
            next.sort();
            self.layers.push(next);
        }
    }
}

/// A truncated generator sequence with its symmetric alphabet.
#[derive(Debug)]
pub struct GeneratorSystem {
    spec: GroupSpec,
    generators: Vec<Element>,
    letters: Vec<Element>,
    table_cap: usize,
    table: RwLock<SumsetTable>,
}

impl Clone for GeneratorSystem {
    fn clone(&self) -> Self {
        GeneratorSystem {
            spec: self.spec.clone(),
            generators: self.generators.clone(),
            letters: self.letters.clone(),
            table_cap: self.table_cap,
            table: RwLock::new(SumsetTable::new()),
        }
    }
}

impl GeneratorSystem {
    pub fn new(spec: GroupSpec, generators: Vec<Element>) -> Result<Self> {
        Self::with_table_cap(spec, generators, DEFAULT_TABLE_CAP)
    }

    pub fn with_table_cap(spec: GroupSpec, generators: Vec<Element>, table_cap: usize) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidGenerators("generator list is empty".into()));
        }
        let mut letters = BTreeSet::new();
        for (n, a) in generators.iter().enumerate() {
            spec.check(a)?;
            if a.is_identity() {
                return Err(Error::InvalidGenerators(format!("generator a_{n} is the identity")));
            }
            letters.insert(spec.neg(a));
            letters.insert(a.clone());
        }
        Ok(GeneratorSystem {
            spec,
            generators,
            letters: letters.into_iter().collect(),
            table_cap: table_cap.max(1),
            table: RwLock::new(SumsetTable::new()),
        })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    /// The distinct nonzero members `±a_n` of the alphabet, sorted.
    pub fn letters(&self) -> &[Element] {
        &self.letters
    }

    /// Runs `f` on the distance table after growing it towards `radius`.
    fn with_table<R>(&self, radius: u32, f: impl FnOnce(&SumsetTable) -> R) -> R {
        {
            let table = self.table.read().expect("table lock");
            if table.settled(radius) {
                return f(&table);
            }
        }
        self.table
            .write()
            .expect("table lock")
            .grow(&self.spec, &self.letters, radius, self.table_cap);
        f(&self.table.read().expect("table lock"))
    }

    /// Radius of the exact distance table built so far.
    pub fn table_radius(&self) -> u32 {
        self.table.read().expect("table lock").radius()
    }

    /// Word distance from `z` to the identity, searched up to `max_r`.
    pub fn norm(&self, z: &Element, max_r: u32) -> DistanceResult {
        self.with_table(max_r.div_ceil(2), |table| self.norm_with(z, max_r, table))
    }

    fn norm_with(&self, z: &Element, max_r: u32, table: &SumsetTable) -> DistanceResult {
        let found = |value: Option<u32>| DistanceResult {
            value,
            search_bound: max_r,
        };
        if let Some(&d) = table.dist.get(z) {
            return found((d <= max_r).then_some(d));
        }
        if table.complete {
            return found(None);
        }
        let t = table.radius();
        for r in t + 1..=max_r {
            if self.splits(z, r - t, table) {
                return found(Some(r));
            }
        }
        found(None)
    }

    /// Whether `z - w ∈ A_T` for some `w ∈ A_j`.
    fn splits(&self, z: &Element, j: u32, table: &SumsetTable) -> bool {
        let hit = |w: &Element| {
            let rest = self.spec.sub(z, w).expect("operands respect the coordinate bound");
            table.dist.contains_key(&rest)
        };
        if j <= table.radius() {
            return table.layers[..=j as usize].iter().flatten().any(hit);
        }
        // multisets of j letters, nondecreasing letter index
        fn walk<F: Fn(&Element) -> bool>(
            sys: &GeneratorSystem,
            start: usize,
            left: u32,
            acc: &Element,
            hit: &F,
        ) -> bool {
            if left == 0 {
                return hit(acc);
            }
            (start..sys.letters.len()).any(|i| {
                let next = sys.spec.add(acc, &sys.letters[i]).expect("bounded");
                walk(sys, i, left - 1, &next, hit)
            })
        }
        walk(self, 0, j, &Element::identity(), &hit)
    }

    /// Least `r ≤ max_r` such that `x - y` is a sum of `r` letters.
    pub fn word_distance(&self, x: &Element, y: &Element, max_r: u32) -> Result<DistanceResult> {
        let z = self.spec.sub(x, y)?;
        Ok(self.norm(&z, max_r))
    }

    /// `x ∈ A_n`.
    pub fn in_sumset(&self, x: &Element, n: u32) -> bool {
        self.norm(x, n).value.is_some()
    }

    /// Elements of `A_n`, unsorted.
    fn sumset(&self, n: u32, cap: usize) -> Result<Vec<Element>> {
        self.with_table(n, |table| self.sumset_with(n, cap, table))
    }

    fn sumset_with(&self, n: u32, cap: usize, table: &SumsetTable) -> Result<Vec<Element>> {
        let t = table.radius();
        let upto = n.min(t) as usize;
        let size: usize = table.layers[..=upto].iter().map(Vec::len).sum();
        if size > cap {
            return Err(Error::BallTooLarge { cap });
        }
        let mut out: Vec<Element> = table.layers[..=upto].iter().flatten().cloned().collect();
        if n <= t || table.complete {
            return Ok(out);
        }
        let mut seen: HashSet<Element> = out.iter().cloned().collect();
        let mut frontier = table.layers[t as usize].clone();
        for _ in t..n {
            let mut next = Vec::new();
            for u in &frontier {
                for a in &self.letters {
                    let v = self.spec.add(u, a)?;
                    if seen.insert(v.clone()) {
                        next.push(v);
                        if seen.len() > cap {
                            return Err(Error::BallTooLarge { cap });
                        }
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        Ok(out)
    }

    /// `A_n + x`, the ball of radius `n` around `x`.
    pub fn ball(&self, x: &Element, n: u32, cap: usize) -> Result<BTreeSet<Element>> {
        self.spec.check(x)?;
        self.sumset(n, cap)?
            .iter()
            .map(|u| self.spec.add(x, u))
            .collect()
    }

    /// `F + A_n`.
    pub fn ideal_ball(&self, centers: &[Element], n: u32, cap: usize) -> Result<BTreeSet<Element>> {
        let mut out = BTreeSet::new();
        if centers.is_empty() {
            return Ok(out);
        }
        let shifts = self.sumset(n, cap)?;
        for f in centers {
            self.spec.check(f)?;
            for u in &shifts {
                out.insert(self.spec.add(f, u)?);
            }
            if out.len() > cap {
                return Err(Error::BallTooLarge { cap });
            }
        }
        Ok(out)
    }

    /// Least `n` (with witnessing centers) such that `set ⊆ F + A_n` for some
    /// `F` of at most `k` elements. Candidate centers are restricted to points
    /// within the current radius of `set`; among optimal center sets the
    /// lexicographically least sorted list is returned.
    pub fn cover_radius(&self, set: &[Element], k: usize, max_r: u32, cap: usize) -> Result<CoverRadius> {
        let points: Vec<Element> = set.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        for p in &points {
            self.spec.check(p)?;
        }
        if points.is_empty() {
            return Ok(CoverRadius {
                radius: 0,
                centers: Vec::new(),
            });
        }
        if k == 0 {
            return Err(Error::InvalidArgument("cover_radius needs k ≥ 1".into()));
        }
        let search = KCenter {
            sys: self,
            points: &points,
            k,
            cap,
        };
        // gallop upward so large radii are only enumerated when needed
        let mut lo = 0u32;
        let mut hi = 0u32;
        while search.solve(hi)?.is_none() {
            if hi == max_r {
                return Err(Error::ExceedsBound { max_r });
            }
            lo = hi + 1;
            hi = (hi.max(1) * 2).min(max_r);
        }
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if search.solve(mid)?.is_some() {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        let centers = search.solve(lo)?.expect("feasible at the bisection limit");
        let shifted = self.ideal_ball(&centers, lo, cap)?;
        debug_assert!(points.iter().all(|p| shifted.contains(p)));
        if !points.iter().all(|p| shifted.contains(p)) {
            return Err(Error::InvalidArgument("center set failed the membership re-check".into()));
        }
        Ok(CoverRadius { radius: lo, centers })
    }
}

/// Optimal radius and centers for a k-center query.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct CoverRadius {
    pub radius: u32,
    pub centers: Vec<Element>,
}

struct KCenter<'a> {
    sys: &'a GeneratorSystem,
    points: &'a [Element],
    k: usize,
    cap: usize,
}

type Bits = Vec<u64>;

fn bit(bits: &Bits, i: usize) -> bool {
    bits[i / 64] >> (i % 64) & 1 == 1
}

impl KCenter<'_> {
    /// Lexicographically least center set of size ≤ k covering at radius `rho`.
    fn solve(&self, rho: u32) -> Result<Option<Vec<Element>>> {
        let sys = self.sys;
        if self.k >= self.points.len() && rho == 0 {
            return Ok(Some(self.points.to_vec()));
        }
        if self.k == 1 {
            // the single center lies within rho of the first point
            let pool = sys.ball(&self.points[0], rho, self.cap)?;
            for c in pool {
                let covers = self.points.iter().all(|p| {
                    let z = sys.spec.sub(p, &c).expect("bounded");
                    sys.in_sumset(&z, rho)
                });
                if covers {
                    return Ok(Some(vec![c]));
                }
            }
            return Ok(None);
        }
        let mut pool = BTreeSet::new();
        for p in self.points {
            pool.extend(sys.ball(p, rho, self.cap)?);
            if pool.len() > self.cap {
                return Err(Error::BallTooLarge { cap: self.cap });
            }
        }
        let pool: Vec<Element> = pool.into_iter().collect();
        let words = self.points.len().div_ceil(64);
        let mut masks = vec![vec![0u64; words]; pool.len()];
        let mut by_point: Vec<Vec<usize>> = vec![Vec::new(); self.points.len()];
        for (ci, c) in pool.iter().enumerate() {
            for (pi, p) in self.points.iter().enumerate() {
                let z = sys.spec.sub(p, c)?;
                if sys.in_sumset(&z, rho) {
                    masks[ci][pi / 64] |= 1 << (pi % 64);
                    by_point[pi].push(ci);
                }
            }
        }
        let mut uncovered: Bits = vec![0; words];
        for pi in 0..self.points.len() {
            uncovered[pi / 64] |= 1 << (pi % 64);
        }
        let mut chosen = Vec::new();
        let mut floor = 0usize;
        let mut left = self.k;
        while uncovered.iter().any(|&w| w != 0) {
            let pick = (floor..pool.len()).find(|&ci| {
                let rest = minus(&uncovered, &masks[ci]);
                rest != uncovered && feasible(&rest, left - 1, ci + 1, &masks, &by_point)
            });
            match pick {
                Some(ci) => {
                    uncovered = minus(&uncovered, &masks[ci]);
                    chosen.push(pool[ci].clone());
                    floor = ci + 1;
                    left -= 1;
                }
                None => return Ok(None),
            }
        }
        Ok(Some(chosen))
    }
}

fn minus(a: &Bits, b: &Bits) -> Bits {
    a.iter().zip(b).map(|(x, y)| x & !y).collect()
}

/// Whether `left` centers with pool index ≥ `floor` cover `uncovered`.
fn feasible(uncovered: &Bits, left: usize, floor: usize, masks: &[Bits], by_point: &[Vec<usize>]) -> bool {
    let first = match (0..uncovered.len() * 64).find(|&i| i < by_point.len() && bit(uncovered, i)) {
        None => return true,
        Some(i) => i,
    };
    if left == 0 {
        return false;
    }
    by_point[first]
        .iter()
        .filter(|&&ci| ci >= floor)
        .any(|&ci| feasible(&minus(uncovered, &masks[ci]), left - 1, floor, masks, by_point))
}

/// Round-robin interleaving: every input appears in order as a subsequence
/// of the output, and exhausted inputs are skipped.
pub fn merge_sequences<T: Clone>(seqs: &[Vec<T>]) -> Vec<T> {
    let total = seqs.iter().map(Vec::len).sum();
    let longest = seqs.iter().map(Vec::len).max().unwrap_or(0);
    let mut out = Vec::with_capacity(total);
    for n in 0..longest {
        out.extend(seqs.iter().filter_map(|s| s.get(n).cloned()));
    }
    out
}
