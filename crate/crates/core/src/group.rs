//! Countable abelian groups presented as restricted direct sums of cyclic
//! groups, with sparse canonical elements and finite windows.
//!
//! Three families are supported: bounded sums `⊕ Z_{m_i}` (a repeated modulus
//! or an explicit list), the integers `Z`, and lattices `Z^d`. Every element
//! is a finitely supported coordinate list; coordinate values of infinite
//! cyclic factors are arbitrary-precision integers.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest number of points a window may enumerate.
pub const WINDOW_LIMIT: usize = 1 << 22;

/// The moduli of a bounded direct sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Moduli {
    Uniform(u64),
    List(Vec<u64>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupKind {
    BoundedSum(Moduli),
    Integers,
    Lattice { rank: usize },
}

/// A group together with the number of coordinates a run may touch.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(try_from = "GroupSpecRepr", into = "GroupSpecRepr")]
pub struct GroupSpec {
    kind: GroupKind,
    coordinate_bound: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
enum KindTag {
    BoundedSum,
    Integers,
    Lattice,
}

/// Wire form of [`GroupSpec`].
#[derive(Clone, Debug, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
struct GroupSpecRepr {
    kind: KindTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    modulus: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    moduli: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coordinate_bound: Option<usize>,
}

/// Coordinate bound used for a repeated modulus when none is given.
const DEFAULT_COORDINATE_BOUND: usize = 64;

impl TryFrom<GroupSpecRepr> for GroupSpec {
    type Error = Error;

    fn try_from(r: GroupSpecRepr) -> Result<Self> {
        let bad = |msg: &str| Err(Error::InvalidSpec(msg.to_string()));
        match r.kind {
            KindTag::BoundedSum => {
                if r.rank.is_some() {
                    return bad("`rank` only applies to lattices");
                }
                match (r.modulus, r.moduli) {
                    (Some(m), None) => GroupSpec::bounded_uniform(
                        m,
                        r.coordinate_bound.unwrap_or(DEFAULT_COORDINATE_BOUND),
                    ),
                    (None, Some(list)) => {
                        let spec = GroupSpec::bounded(list)?;
                        match r.coordinate_bound {
                            None => Ok(spec),
                            Some(b) if b >= 1 && b <= spec.coordinate_bound => Ok(GroupSpec {
                                coordinate_bound: b,
                                ..spec
                            }),
                            Some(_) => bad("coordinate_bound must lie in 1..=moduli.len()"),
                        }
                    }
                    _ => bad("bounded_sum needs exactly one of `modulus` or `moduli`"),
                }
            }
            KindTag::Integers => {
                if r.modulus.is_some() || r.moduli.is_some() || r.rank.is_some() {
                    return bad("integers take no parameters");
                }
                match r.coordinate_bound {
                    None | Some(1) => Ok(GroupSpec::integers()),
                    Some(_) => bad("the integers have exactly one coordinate"),
                }
            }
            KindTag::Lattice => {
                if r.modulus.is_some() || r.moduli.is_some() {
                    return bad("lattices take no moduli");
                }
                let rank = r.rank.ok_or_else(|| Error::InvalidSpec("lattice needs `rank`".into()))?;
                match r.coordinate_bound {
                    None => GroupSpec::lattice(rank),
                    Some(b) if b == rank => GroupSpec::lattice(rank),
                    Some(_) => bad("a lattice's coordinate_bound equals its rank"),
                }
            }
        }
    }
}

impl From<GroupSpec> for GroupSpecRepr {
    fn from(spec: GroupSpec) -> Self {
        let mut repr = GroupSpecRepr {
            kind: KindTag::Integers,
            modulus: None,
            moduli: None,
            rank: None,
            coordinate_bound: None,
        };
        match spec.kind {
            GroupKind::BoundedSum(Moduli::Uniform(m)) => {
                repr.kind = KindTag::BoundedSum;
                repr.modulus = Some(m);
                repr.coordinate_bound = Some(spec.coordinate_bound);
            }
            GroupKind::BoundedSum(Moduli::List(list)) => {
                repr.kind = KindTag::BoundedSum;
                if spec.coordinate_bound != list.len() {
                    repr.coordinate_bound = Some(spec.coordinate_bound);
                }
                repr.moduli = Some(list);
            }
            GroupKind::Integers => {}
            GroupKind::Lattice { rank } => {
                repr.kind = KindTag::Lattice;
                repr.rank = Some(rank);
            }
        }
        repr
    }
}

impl GroupSpec {
    /// `⊕ Z_m` over coordinates `0..coordinate_bound`.
    pub fn bounded_uniform(modulus: u64, coordinate_bound: usize) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::InvalidSpec(format!("modulus {modulus} is below 2")));
        }
        if coordinate_bound == 0 {
            return Err(Error::InvalidSpec("coordinate_bound must be at least 1".into()));
        }
        Ok(GroupSpec {
            kind: GroupKind::BoundedSum(Moduli::Uniform(modulus)),
            coordinate_bound,
        })
    }

    /// `⊕ Z_{m_i}` with one coordinate per listed modulus.
    pub fn bounded(moduli: Vec<u64>) -> Result<Self> {
        if moduli.is_empty() {
            return Err(Error::InvalidSpec("moduli list is empty".into()));
        }
        if let Some(m) = moduli.iter().find(|&&m| m < 2) {
            return Err(Error::InvalidSpec(format!("modulus {m} is below 2")));
        }
        Ok(GroupSpec {
            coordinate_bound: moduli.len(),
            kind: GroupKind::BoundedSum(Moduli::List(moduli)),
        })
    }

    pub fn integers() -> Self {
        GroupSpec {
            kind: GroupKind::Integers,
            coordinate_bound: 1,
        }
    }

    pub fn lattice(rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidSpec("lattice rank must be at least 1".into()));
        }
        Ok(GroupSpec {
            kind: GroupKind::Lattice { rank },
            coordinate_bound: rank,
        })
    }

    /// The Boolean group `⊕ Z_2` of the Hamming-space examples.
    pub fn boolean(coordinate_bound: usize) -> Result<Self> {
        Self::bounded_uniform(2, coordinate_bound)
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    /// Coordinates `0..coordinate_bound()` are usable.
    pub fn coordinate_bound(&self) -> usize {
        self.coordinate_bound
    }

    /// Order of the cyclic factor at `index`; `None` for infinite cyclic factors.
    pub fn modulus(&self, index: usize) -> Option<u64> {
        match &self.kind {
            GroupKind::BoundedSum(Moduli::Uniform(m)) => Some(*m),
            GroupKind::BoundedSum(Moduli::List(list)) => list.get(index).copied(),
            GroupKind::Integers | GroupKind::Lattice { .. } => None,
        }
    }

    /// True when every factor has order 2.
    pub fn is_boolean(&self) -> bool {
        match &self.kind {
            GroupKind::BoundedSum(Moduli::Uniform(m)) => *m == 2,
            GroupKind::BoundedSum(Moduli::List(list)) => {
                list[..self.coordinate_bound].iter().all(|&m| m == 2)
            }
            _ => false,
        }
    }

    pub fn is_bounded_sum(&self) -> bool {
        matches!(self.kind, GroupKind::BoundedSum(_))
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index >= self.coordinate_bound {
            return Err(Error::BoundExceeded {
                index,
                bound: self.coordinate_bound,
            });
        }
        Ok(())
    }

    fn reduce(&self, index: usize, value: BigInt) -> BigInt {
        match self.modulus(index) {
            Some(m) => value.mod_floor(&BigInt::from(m)),
            None => value,
        }
    }

    /// Builds the canonical element with the given coordinate values.
    /// Repeated indices are summed; values are reduced and zeros dropped.
    pub fn element<I, V>(&self, entries: I) -> Result<Element>
    where
        I: IntoIterator<Item = (usize, V)>,
        V: Into<BigInt>,
    {
        let mut raw: Vec<(usize, BigInt)> = entries.into_iter().map(|(i, v)| (i, v.into())).collect();
        raw.sort_by_key(|(i, _)| *i);
        let mut out: Vec<(usize, BigInt)> = Vec::with_capacity(raw.len());
        for (i, v) in raw {
            self.check_index(i)?;
            match out.last_mut() {
                Some((j, acc)) if *j == i => *acc += v,
                _ => out.push((i, v)),
            }
        }
        let entries = out
            .into_iter()
            .map(|(i, v)| (i, self.reduce(i, v)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        Ok(Element { entries })
    }

    /// The basis element `e_index`.
    pub fn unit(&self, index: usize) -> Result<Element> {
        self.element([(index, 1)])
    }

    /// The integer `n` as an element of `Z`, or `n e_0` in general.
    pub fn scalar(&self, n: impl Into<BigInt>) -> Result<Element> {
        self.element([(0, n)])
    }

    /// Confirms `x` is canonical for this group.
    pub fn check(&self, x: &Element) -> Result<()> {
        let mut prev: Option<usize> = None;
        for (i, v) in &x.entries {
            self.check_index(*i)?;
            if prev.is_some_and(|p| p >= *i) {
                return Err(Error::NotCanonical("coordinates not strictly increasing".into()));
            }
            if v.is_zero() {
                return Err(Error::NotCanonical(format!("zero value at coordinate {i}")));
            }
            if let Some(m) = self.modulus(*i) {
                if v.is_negative() || *v >= BigInt::from(m) {
                    return Err(Error::NotCanonical(format!(
                        "value {v} at coordinate {i} is not reduced mod {m}"
                    )));
                }
            }
            prev = Some(*i);
        }
        Ok(())
    }

    pub fn add(&self, x: &Element, y: &Element) -> Result<Element> {
        self.combine(x, y, false)
    }

    pub fn sub(&self, x: &Element, y: &Element) -> Result<Element> {
        self.combine(x, y, true)
    }

    pub fn neg(&self, x: &Element) -> Element {
        let entries = x
            .entries
            .iter()
            .map(|(i, v)| (*i, self.reduce(*i, -v)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        Element { entries }
    }

    /// Sorted merge of two coordinate lists.
    fn combine(&self, x: &Element, y: &Element, subtract: bool) -> Result<Element> {
        let mut out = Vec::with_capacity(x.entries.len() + y.entries.len());
        let (mut a, mut b) = (x.entries.iter().peekable(), y.entries.iter().peekable());
        loop {
            let (i, v) = match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some((i, v)), None) => {
                    a.next();
                    (*i, v.clone())
                }
                (None, Some((j, w))) => {
                    b.next();
                    (*j, if subtract { -w } else { w.clone() })
                }
                (Some((i, v)), Some((j, w))) => {
                    if i < j {
                        a.next();
                        (*i, v.clone())
                    } else if j < i {
                        b.next();
                        (*j, if subtract { -w } else { w.clone() })
                    } else {
                        a.next();
                        b.next();
                        (*i, if subtract { v - w } else { v + w })
                    }
                }
            };
            self.check_index(i)?;
            let v = self.reduce(i, v);
            if !v.is_zero() {
                out.push((i, v));
            }
        }
        Ok(Element { entries: out })
    }

    /// Enumerates the finite window described by `shape`.
    pub fn window(&self, shape: WindowShape) -> Result<Window> {
        Window::enumerate(self.clone(), shape)
    }
}

/// One point of the group: a strictly increasing list of
/// `(coordinate, nonzero value)` pairs.
///
/// The derived order is lexicographic on the entry list, so the identity
/// (empty list) is the least element.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "ElementRepr", into = "ElementRepr")]
pub struct Element {
    entries: Vec<(usize, BigInt)>,
}

impl Element {
    pub fn identity() -> Self {
        Element::default()
    }

    pub fn is_identity(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(usize, BigInt)] {
        &self.entries
    }

    /// Coordinates with a nonzero value.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|(i, _)| *i)
    }

    pub fn value(&self, index: usize) -> BigInt {
        self.entries
            .binary_search_by_key(&index, |(i, _)| *i)
            .map(|k| self.entries[k].1.clone())
            .unwrap_or_default()
    }

    /// Value at coordinate 0 as an `i64`, when it fits. Convenient for `Z`.
    pub fn as_i64(&self) -> Option<i64> {
        match self.entries.as_slice() {
            [] => Some(0),
            [(0, v)] => v.to_i64(),
            _ => None,
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "0");
        }
        for (k, (i, v)) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{v}·e{i}")?;
        }
        Ok(())
    }
}

/// An integer that serializes as a JSON number when it fits in 64 bits and
/// as a decimal string otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntValue(pub BigInt);

impl Serialize for IntValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for IntValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(IntValue(v.into())),
            Raw::Text(t) => t
                .trim()
                .parse::<BigInt>()
                .map(IntValue)
                .map_err(|e| serde::de::Error::custom(format!("bad integer {t:?}: {e}"))),
        }
    }
}

impl JsonSchema for IntValue {
    fn schema_name() -> std::borrow::Cow<'static, str> {
        "IntValue".into()
    }

    fn json_schema(_: &mut schemars::SchemaGenerator) -> schemars::Schema {
        schemars::json_schema!({
            "anyOf": [
                { "type": "integer" },
                { "type": "string", "pattern": "^-?[0-9]+$" }
            ]
        })
    }
}

/// Wire form of [`Element`]: `{"entries": [[i, v], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct ElementRepr {
    pub entries: Vec<(usize, IntValue)>,
}

impl TryFrom<ElementRepr> for Element {
    type Error = Error;

    fn try_from(r: ElementRepr) -> Result<Self> {
        let entries: Vec<(usize, BigInt)> = r.entries.into_iter().map(|(i, v)| (i, v.0)).collect();
        if entries.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::NotCanonical("coordinates not strictly increasing".into()));
        }
        if entries.iter().any(|(_, v)| v.is_zero()) {
            return Err(Error::NotCanonical("zero entry".into()));
        }
        Ok(Element { entries })
    }
}

impl From<Element> for ElementRepr {
    fn from(x: Element) -> Self {
        ElementRepr {
            entries: x.entries.into_iter().map(|(i, v)| (i, IntValue(v))).collect(),
        }
    }
}

impl JsonSchema for Element {
    fn schema_name() -> std::borrow::Cow<'static, str> {
        "Element".into()
    }

    fn json_schema(generator: &mut schemars::SchemaGenerator) -> schemars::Schema {
        ElementRepr::json_schema(generator)
    }
}

/// Which finite part of the group a window covers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "shape", rename_all = "snake_case", deny_unknown_fields)]
pub enum WindowShape {
    /// Every element supported on the listed coordinates (finite moduli only).
    Support { coords: Vec<usize> },
    /// Inclusive integer intervals for coordinates `0, 1, ...` (Z and Z^d).
    Box { ranges: Vec<(i64, i64)> },
}

/// A finite, deterministically ordered set of group elements.
#[derive(Clone, Debug)]
pub struct Window {
    spec: GroupSpec,
    shape: WindowShape,
    elements: Vec<Element>,
    index: HashMap<Element, usize>,
}

impl Window {
    fn enumerate(spec: GroupSpec, shape: WindowShape) -> Result<Window> {
        let axes: Vec<(usize, Vec<BigInt>)> = match &shape {
            WindowShape::Support { coords } => {
                let mut sorted = coords.clone();
                sorted.sort_unstable();
                if sorted.windows(2).any(|w| w[0] == w[1]) {
                    return Err(Error::InvalidWindow("repeated coordinate in support".into()));
                }
                let mut axes = Vec::new();
                for &i in &sorted {
                    spec.check_index(i)?;
                    let m = spec.modulus(i).ok_or(Error::UnboundedWindow(i))?;
                    axes.push((i, (0..m).map(BigInt::from).collect()));
                }
                axes
            }
            WindowShape::Box { ranges } => {
                if spec.is_bounded_sum() {
                    return Err(Error::InvalidWindow(
                        "box windows apply to Z and Z^d; use a support window".into(),
                    ));
                }
                if ranges.is_empty() {
                    return Err(Error::InvalidWindow("box needs at least one range".into()));
                }
                let mut axes = Vec::new();
                for (i, &(lo, hi)) in ranges.iter().enumerate() {
                    spec.check_index(i)?;
                    if lo > hi {
                        return Err(Error::InvalidWindow(format!("empty range [{lo}, {hi}]")));
                    }
                    let len = (hi as i128 - lo as i128 + 1) as u128;
                    if len > WINDOW_LIMIT as u128 {
                        return Err(Error::WindowTooLarge {
                            size: len,
                            limit: WINDOW_LIMIT,
                        });
                    }
                    axes.push((i, (lo..=hi).map(BigInt::from).collect()));
                }
                axes
            }
        };
        let size = axes
            .iter()
            .try_fold(1u128, |acc, (_, vals)| acc.checked_mul(vals.len() as u128))
            .unwrap_or(u128::MAX);
        if size > WINDOW_LIMIT as u128 {
            return Err(Error::WindowTooLarge {
                size,
                limit: WINDOW_LIMIT,
            });
        }
        let mut elements = vec![Element::identity()];
        for (i, vals) in &axes {
            let mut next = Vec::with_capacity(elements.len() * vals.len());
            for x in &elements {
                for v in vals {
                    let mut entries = x.entries.clone();
                    if !v.is_zero() {
                        entries.push((*i, v.clone()));
                    }
                    next.push(Element { entries });
                }
            }
            elements = next;
        }
        elements.sort();
        let index = elements.iter().cloned().enumerate().map(|(k, x)| (x, k)).collect();
        Ok(Window {
            spec,
            shape,
            elements,
            index,
        })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn shape(&self) -> &WindowShape {
        &self.shape
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: &Element) -> bool {
        self.index.contains_key(x)
    }

    /// Position of `x` in the enumeration order.
    pub fn position(&self, x: &Element) -> Option<usize> {
        self.index.get(x).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> GroupSpec {
        GroupSpec::boolean(8).unwrap()
    }

    #[test]
    fn order_two_generator_cancels() {
        let g = z2();
        let e0 = g.unit(0).unwrap();
        assert!(g.add(&e0, &e0).unwrap().is_identity());
        assert_eq!(g.neg(&g.unit(5).unwrap()), g.unit(5).unwrap());
    }

    #[test]
    fn integer_addition_and_negation() {
        let z = GroupSpec::integers();
        let sum = z.add(&z.scalar(1).unwrap(), &z.scalar(2).unwrap()).unwrap();
        assert_eq!(sum, z.scalar(3).unwrap());
        assert_eq!(z.neg(&z.scalar(3).unwrap()), z.scalar(-3).unwrap());
        assert!(z.neg(&Element::identity()).is_identity());
    }

    #[test]
    fn boolean_sum_is_symmetric_difference() {
        let g = z2();
        let x = g.element([(0, 1), (1, 1)]).unwrap();
        let y = g.element([(1, 1), (2, 1)]).unwrap();
        assert_eq!(g.add(&x, &y).unwrap(), g.element([(0, 1), (2, 1)]).unwrap());
    }

    #[test]
    fn reduction_in_mixed_moduli() {
        let g = GroupSpec::bounded(vec![2, 3, 4]).unwrap();
        let x = g.element([(1, 2), (2, 3)]).unwrap();
        let y = g.element([(1, 2), (2, 3)]).unwrap();
        assert_eq!(g.add(&x, &y).unwrap(), g.element([(1, 1), (2, 2)]).unwrap());
        assert_eq!(g.neg(&x), g.element([(1, 1), (2, 1)]).unwrap());
        assert!(g.element([(1, -3)]).unwrap().is_identity());
    }

    #[test]
    fn coordinate_bound_is_enforced() {
        let g = GroupSpec::boolean(4).unwrap();
        assert_eq!(
            g.unit(4),
            Err(Error::BoundExceeded { index: 4, bound: 4 })
        );
        let z = GroupSpec::integers();
        assert!(matches!(z.element([(1, 1)]), Err(Error::BoundExceeded { .. })));
    }

    #[test]
    fn check_rejects_non_canonical() {
        let g = GroupSpec::bounded_uniform(3, 4).unwrap();
        let raw: Element = serde_json::from_str(r#"{"entries":[[0,5]]}"#).unwrap();
        assert!(matches!(g.check(&raw), Err(Error::NotCanonical(_))));
        assert!(serde_json::from_str::<Element>(r#"{"entries":[[1,1],[0,1]]}"#).is_err());
        assert!(serde_json::from_str::<Element>(r#"{"entries":[[0,0]]}"#).is_err());
    }

    #[test]
    fn window_cardinalities() {
        let w = z2().window(WindowShape::Support { coords: vec![0, 1, 2] }).unwrap();
        assert_eq!(w.len(), 8);
        let z = GroupSpec::integers();
        assert_eq!(z.window(WindowShape::Box { ranges: vec![(-3, 3)] }).unwrap().len(), 7);
        let z2d = GroupSpec::lattice(2).unwrap();
        assert_eq!(
            z2d.window(WindowShape::Box { ranges: vec![(0, 1), (0, 1)] }).unwrap().len(),
            4
        );
        let mixed = GroupSpec::bounded(vec![2, 3, 5]).unwrap();
        assert_eq!(
            mixed.window(WindowShape::Support { coords: vec![0, 1, 2] }).unwrap().len(),
            30
        );
    }

    #[test]
    fn support_window_on_integers_is_rejected() {
        let z = GroupSpec::integers();
        assert_eq!(
            z.window(WindowShape::Support { coords: vec![0] }).unwrap_err(),
            Error::UnboundedWindow(0)
        );
    }

    #[test]
    fn window_order_is_sorted_and_contains_identity() {
        let z = GroupSpec::integers();
        let w = z.window(WindowShape::Box { ranges: vec![(2, 5)] }).unwrap();
        assert!(!w.contains(&Element::identity()));
        let w = z.window(WindowShape::Box { ranges: vec![(-2, 2)] }).unwrap();
        assert_eq!(w.elements()[0], Element::identity());
        assert!(w.elements().windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn spec_json_forms() {
        let g: GroupSpec =
            serde_json::from_str(r#"{"kind":"bounded_sum","modulus":2,"coordinate_bound":32}"#).unwrap();
        assert!(g.is_boolean());
        assert_eq!(g.coordinate_bound(), 32);
        let g: GroupSpec = serde_json::from_str(r#"{"kind":"bounded_sum","moduli":[2,3,4]}"#).unwrap();
        assert_eq!(g.modulus(2), Some(4));
        let g: GroupSpec = serde_json::from_str(r#"{"kind":"integers"}"#).unwrap();
        assert_eq!(g, GroupSpec::integers());
        let g: GroupSpec = serde_json::from_str(r#"{"kind":"lattice","rank":2}"#).unwrap();
        assert_eq!(g.coordinate_bound(), 2);
        assert!(serde_json::from_str::<GroupSpec>(r#"{"kind":"bounded_sum","modulus":1}"#).is_err());
        assert!(serde_json::from_str::<GroupSpec>(r#"{"kind":"integers","extra":1}"#).is_err());
        assert!(serde_json::from_str::<GroupSpec>(r#"{"kind":"lattice","rank":0}"#).is_err());
    }

    #[test]
    fn big_values_serialize_as_strings() {
        let z = GroupSpec::integers();
        let big = BigInt::from(3).pow(50);
        let x = z.scalar(big.clone()).unwrap();
        let text = serde_json::to_string(&x).unwrap();
        assert!(text.contains('"'));
        let back: Element = serde_json::from_str(&text).unwrap();
        assert_eq!(back, x);
        assert_eq!(serde_json::to_string(&z.scalar(-7).unwrap()).unwrap(), r#"{"entries":[[0,-7]]}"#);
    }
}
