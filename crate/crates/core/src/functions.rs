//! Function classes on a finite window.
//!
//! Every function on a finite window is bounded, so the asymptotic classes
//! (bornologous, macro-uniform, eventually macro-uniform, slowly oscillating)
//! are reported as staged evidence: oscillation tables across scales and
//! excisions plus threshold flags.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use rayon::prelude::*;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Element, GroupKind, Window};
use crate::metric::{ElementLiteral, GeneratorSystem};

/// An exact rational, written `"p"` or `"p/q"` (integers may also be given
/// as JSON numbers).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(pub BigRational);

impl Rational {
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("bad rational {s:?}"));
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Rational(BigRational::new(n, d)))
    }
}

impl Serialize for Rational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(Rational::integer(v)),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl JsonSchema for Rational {
    fn schema_name() -> std::borrow::Cow<'static, str> {
        "Rational".into()
    }

    fn json_schema(_: &mut schemars::SchemaGenerator) -> schemars::Schema {
        schemars::json_schema!({
            "anyOf": [
                { "type": "integer" },
                { "type": "string", "pattern": "^-?[0-9]+(/[0-9]+)?$" }
            ]
        })
    }
}

/// Built-in function families and explicit tables.
#[derive(Clone, Debug, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionSpec {
    Constant { value: Rational },
    /// Number of nonzero coordinates.
    SupportSize,
    /// Support size mod 2.
    Parity,
    /// `base^|support(x)|`.
    SupportPower { base: Rational },
    /// 1 when coordinate `index` is nonzero.
    CoordinateIndicator { index: usize },
    PointIndicator { point: ElementLiteral },
    /// `slope * x + intercept` on Z.
    Affine { slope: Rational, intercept: Rational },
    /// One value per window point, in window order.
    Table { values: Vec<Rational> },
}

/// A total function from a window to the rationals.
#[derive(Clone, Debug)]
pub struct WindowFunction {
    window: Window,
    values: Vec<BigRational>,
}

impl WindowFunction {
    pub fn new(window: Window, values: Vec<BigRational>) -> Result<Self> {
        if values.len() != window.len() {
            return Err(Error::FunctionShape {
                expected: window.len(),
                got: values.len(),
            });
        }
        Ok(WindowFunction { window, values })
    }

    pub fn from_fn(window: Window, f: impl Fn(&Element) -> BigRational) -> Self {
        let values = window.elements().iter().map(f).collect();
        WindowFunction { window, values }
    }

    pub fn from_spec(window: Window, spec: &FunctionSpec) -> Result<Self> {
        let int = |n: usize| BigRational::from_integer(BigInt::from(n));
        match spec {
            FunctionSpec::Constant { value } => Ok(Self::from_fn(window, |_| value.0.clone())),
            FunctionSpec::SupportSize => Ok(Self::from_fn(window, |x| int(x.entries().len()))),
            FunctionSpec::Parity => Ok(Self::from_fn(window, |x| int(x.entries().len() % 2))),
            FunctionSpec::SupportPower { base } => {
                Ok(Self::from_fn(window, |x| Pow::pow(&base.0, x.entries().len())))
            }
            FunctionSpec::CoordinateIndicator { index } => {
                Ok(Self::from_fn(window, |x| int(usize::from(!x.value(*index).is_zero()))))
            }
            FunctionSpec::PointIndicator { point } => {
                let p = point.resolve(window.spec())?;
                Ok(Self::from_fn(window, |x| int(usize::from(*x == p))))
            }
            FunctionSpec::Affine { slope, intercept } => {
                if !matches!(window.spec().kind(), GroupKind::Integers) {
                    return Err(Error::InvalidArgument("affine functions are defined on Z".into()));
                }
                Ok(Self::from_fn(window, |x| {
                    &slope.0 * BigRational::from_integer(x.value(0)) + &intercept.0
                }))
            }
            FunctionSpec::Table { values } => {
                Self::new(window, values.iter().map(|v| v.0.clone()).collect())
            }
        }
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn get(&self, x: &Element) -> Option<&BigRational> {
        self.window.position(x).map(|i| &self.values[i])
    }

    pub fn is_binary(&self) -> bool {
        self.values.iter().all(|v| v.is_zero() || v.is_one())
    }
}

/// Per-point neighborhoods at one scale, restricted to the window.
#[derive(Clone, Debug)]
pub struct Neighborhoods {
    r: u32,
    margin: u32,
    /// window positions of `ball(x, r) ∩ window`
    nbrs: Vec<Vec<usize>>,
    /// `ball(x, margin) ⊆ window`
    interior: Vec<bool>,
}

impl Neighborhoods {
    pub fn new(window: &Window, sys: &GeneratorSystem, r: u32, margin: u32, cap: usize) -> Result<Self> {
        if margin < r {
            return Err(Error::InvalidArgument(format!(
                "interior margin {margin} is below the radius {r}"
            )));
        }
        let rows: Vec<(Vec<usize>, bool)> = window
            .elements()
            .par_iter()
            .map(|x| {
                let nbrs = sys.ball(x, r, cap)?.iter().filter_map(|y| window.position(y)).collect();
                let interior = sys.ball(x, margin, cap)?.iter().all(|y| window.contains(y));
                Ok((nbrs, interior))
            })
            .collect::<Result<_>>()?;
        let (nbrs, interior) = rows.into_iter().unzip();
        Ok(Neighborhoods { r, margin, nbrs, interior })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn margin(&self) -> u32 {
        self.margin
    }

    pub fn is_interior(&self, i: usize) -> bool {
        self.interior[i]
    }

    pub fn interior_count(&self) -> usize {
        self.interior.iter().filter(|b| **b).count()
    }

    /// Whether `values` takes a single value on the neighborhood of `i`.
    pub fn flat_at<T: PartialEq>(&self, values: &[T], i: usize) -> bool {
        self.nbrs[i].iter().all(|&j| values[j] == values[i])
    }

    fn diam(&self, values: &[BigRational], i: usize) -> BigRational {
        let mut it = self.nbrs[i].iter().map(|&j| &values[j]);
        let first = it.next().expect("a ball contains its center");
        let (lo, hi) = it.fold((first, first), |(lo, hi), v| (lo.min(v), hi.max(v)));
        hi - lo
    }

    /// Largest `|f(y) - f(x)|` over the neighborhood of `x`.
    fn step(&self, values: &[BigRational], i: usize) -> BigRational {
        self.nbrs[i]
            .iter()
            .map(|&j| (&values[j] - &values[i]).abs())
            .max()
            .unwrap_or_else(BigRational::zero)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct OscEntry {
    pub x: Element,
    pub diam: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct OscTable {
    pub r: u32,
    pub margin: u32,
    pub entries: Vec<OscEntry>,
    pub max: Rational,
}

/// Diameter of `f` over `ball(x, r) ∩ window` at every interior point `x`,
/// where interior means `ball(x, margin)` lies inside the window.
pub fn oscillation(f: &WindowFunction, r: u32, sys: &GeneratorSystem, margin: u32, cap: usize) -> Result<OscTable> {
    let nb = Neighborhoods::new(&f.window, sys, r, margin, cap)?;
    if nb.interior_count() == 0 {
        return Err(Error::EmptyInterior { margin });
    }
    let entries: Vec<OscEntry> = (0..f.window.len())
        .filter(|&i| nb.interior[i])
        .map(|i| OscEntry {
            x: f.window.elements()[i].clone(),
            diam: Rational(nb.diam(&f.values, i)),
        })
        .collect();
    let max = entries.iter().map(|e| e.diam.clone()).max().unwrap_or_else(Rational::zero);
    Ok(OscTable { r, margin, entries, max })
}

/// Word norms of window points, capped at `limit`: `None` means above it.
fn norms(window: &Window, sys: &GeneratorSystem, limit: u32) -> Vec<Option<u32>> {
    window.elements().par_iter().map(|x| sys.norm(x, limit).value).collect()
}

fn outside(norm: Option<u32>, m: u32) -> bool {
    norm.is_none_or(|n| n > m)
}

/// Precomputed data for repeated eventual-constancy queries on one window.
#[derive(Clone, Debug)]
pub struct ConstancyIndex {
    nb: Neighborhoods,
    norms: Vec<Option<u32>>,
    max_m: u32,
}

impl ConstancyIndex {
    /// Interior points are those whose radius-`r` ball stays in the window;
    /// excisions `A_m` are tried for `m ≤ max_m`.
    pub fn new(window: &Window, sys: &GeneratorSystem, r: u32, max_m: u32, cap: usize) -> Result<Self> {
        if !window.contains(&Element::identity()) {
            return Err(Error::InvalidWindow("the window must contain the identity".into()));
        }
        Ok(ConstancyIndex {
            nb: Neighborhoods::new(window, sys, r, r, cap)?,
            norms: norms(window, sys, max_m),
            max_m,
        })
    }

    /// Least `m` such that `values` is constant off `A_m` and flat on the
    /// radius-`r` ball of every interior point off `A_m`. Excisions that
    /// leave nothing of the window (other than `m = 0`) are not counted.
    pub fn index_of<T: PartialEq>(&self, values: &[T]) -> Option<u32> {
        (0..=self.max_m).find_map(|m| self.holds_at(values, m)?.then_some(m))
    }

    /// `None` when `m > 0` and the excision swallows the window.
    pub fn holds_at<T: PartialEq>(&self, values: &[T], m: u32) -> Option<bool> {
        let mut off = (0..values.len()).filter(|&i| outside(self.norms[i], m)).peekable();
        let Some(&first) = off.peek() else {
            return (m == 0).then_some(true);
        };
        Some(off.all(|i| values[i] == values[first] && (!self.nb.interior[i] || self.nb.flat_at(values, i))))
    }

    /// Whether every interior point off `A_m` has a flat neighborhood.
    /// `None` when no interior point is left.
    pub fn flat_off<T: PartialEq>(&self, values: &[T], m: u32) -> Option<bool> {
        let mut pts = (0..values.len())
            .filter(|&i| self.nb.interior[i] && outside(self.norms[i], m))
            .peekable();
        pts.peek()?;
        Some(pts.all(|i| self.nb.flat_at(values, i)))
    }
}

/// Eventual-constancy index of a binary function at scale `r`, searching
/// `m ≤ max_m`.
pub fn eventual_constancy_index(
    f: &WindowFunction,
    r: u32,
    sys: &GeneratorSystem,
    max_m: u32,
    cap: usize,
) -> Result<Option<u32>> {
    if !f.is_binary() {
        return Err(Error::NotBinary);
    }
    Ok(ConstancyIndex::new(&f.window, sys, r, max_m, cap)?.index_of(&f.values))
}

/// Thresholds for [`classify`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct ClassifyOptions {
    /// Largest oscillation accepted as a macro-uniform modulus.
    pub modulus_bound: Rational,
    /// Oscillation off an excision must be strictly below this.
    pub epsilon: Rational,
    /// Largest excision radius tried.
    pub max_m: u32,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            modulus_bound: Rational::integer(64),
            epsilon: Rational::integer(1),
            max_m: 64,
        }
    }
}

/// One bornologous stage `F + A_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct Stage {
    pub n: u32,
    pub centers: Vec<Element>,
}

/// Stages `{0} + A_n` for `n = 0..=8`.
pub fn default_stages() -> Vec<Stage> {
    (0..=8)
        .map(|n| Stage {
            n,
            centers: vec![Element::identity()],
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct StageRow {
    pub n: u32,
    /// Window points in the stage.
    pub points: usize,
    /// `sup |f|` over those points.
    pub sup_abs: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct BornologousReport {
    pub stages: Vec<StageRow>,
    /// Always true on a window: each stage meets it in a finite set.
    pub bounded_on_stages: bool,
    /// `sup |f|` strictly increases from stage to stage.
    pub growth_flag: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct OscRow {
    pub r: u32,
    pub osc: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct MacroUniformReport {
    pub modulus_bound: Rational,
    /// Largest `|f(y) - f(x)|` with `y` in the radius-`r` ball of an interior `x`.
    pub step: Vec<OscRow>,
    pub holds: bool,
    /// Least scale whose oscillation exceeds the bound.
    pub fails_at: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct ExcisionRow {
    pub m: u32,
    /// Oscillation per scale over interior points off `A_m`.
    pub osc: Vec<OscRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct EventualReport {
    pub rows: Vec<ExcisionRow>,
    /// Least `m` after which every scale is within the modulus bound.
    pub least_m: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct SlowRow {
    pub r: u32,
    /// Least `m` with oscillation below epsilon off `A_m`.
    pub m: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct SlowReport {
    pub epsilon: Rational,
    pub rows: Vec<SlowRow>,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct ConstancyRow {
    pub r: u32,
    pub m: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct ClassReport {
    /// Common interior margin: the largest scale.
    pub margin: u32,
    pub osc: Vec<OscRow>,
    pub bornologous: BornologousReport,
    pub macro_uniform: MacroUniformReport,
    pub eventually_macro_uniform: EventualReport,
    pub slowly_oscillating: SlowReport,
    /// Filled for binary functions only.
    pub eventual_constancy: Vec<ConstancyRow>,
}

/// Staged evidence for the four function classes.
///
/// All scales share the interior margin `max(r_list)`, which keeps the
/// oscillation table non-decreasing in `r`. Excision rows stop once no
/// interior point is left off `A_m`.
pub fn classify(
    f: &WindowFunction,
    sys: &GeneratorSystem,
    r_list: &[u32],
    stages: &[Stage],
    opts: &ClassifyOptions,
    cap: usize,
) -> Result<ClassReport> {
    let mut scales = r_list.to_vec();
    scales.sort_unstable();
    scales.dedup();
    let margin = scales.last().copied().unwrap_or(0);
    let window = &f.window;
    let hoods: Vec<Neighborhoods> = scales
        .iter()
        .map(|&r| Neighborhoods::new(window, sys, r, margin, cap))
        .collect::<Result<_>>()?;
    let interior: Vec<usize> = match hoods.first() {
        Some(h) => (0..window.len()).filter(|&i| h.interior[i]).collect(),
        None => (0..window.len()).collect(),
    };
    if !scales.is_empty() && interior.is_empty() {
        return Err(Error::EmptyInterior { margin });
    }
    let diams: Vec<Vec<BigRational>> = hoods
        .iter()
        .map(|h| interior.iter().map(|&i| h.diam(&f.values, i)).collect())
        .collect();
    let norms = norms(window, sys, opts.max_m);

    let osc_over = |keep: &dyn Fn(usize) -> bool| -> Vec<OscRow> {
        scales
            .iter()
            .zip(&diams)
            .map(|(&r, d)| OscRow {
                r,
                osc: Rational(
                    interior
                        .iter()
                        .zip(d)
                        .filter(|(i, _)| keep(**i))
                        .map(|(_, v)| v.clone())
                        .max()
                        .unwrap_or_else(BigRational::zero),
                ),
            })
            .collect()
    };

    let osc = osc_over(&|_| true);

    let mut stage_rows = Vec::with_capacity(stages.len());
    for st in stages {
        let pts = sys.ideal_ball(&st.centers, st.n, cap)?;
        let vals: Vec<BigRational> = pts.iter().filter_map(|x| f.get(x)).map(|v| v.abs()).collect();
        stage_rows.push(StageRow {
            n: st.n,
            points: vals.len(),
            sup_abs: vals.into_iter().max().map(Rational),
        });
    }
    let growth_flag = stage_rows.len() >= 2
        && stage_rows.windows(2).all(|w| match (&w[0].sup_abs, &w[1].sup_abs) {
            (Some(a), Some(b)) => a < b,
            _ => false,
        });
    let bornologous = BornologousReport {
        stages: stage_rows,
        bounded_on_stages: true,
        growth_flag,
    };

    let fails_at = osc.iter().find(|row| row.osc > opts.modulus_bound).map(|row| row.r);
    let step = scales
        .iter()
        .zip(&hoods)
        .map(|(&r, h)| OscRow {
            r,
            osc: Rational(
                interior
                    .iter()
                    .map(|&i| h.step(&f.values, i))
                    .max()
                    .unwrap_or_else(BigRational::zero),
            ),
        })
        .collect();
    let macro_uniform = MacroUniformReport {
        modulus_bound: opts.modulus_bound.clone(),
        step,
        holds: fails_at.is_none(),
        fails_at,
    };

    let mut rows = Vec::new();
    for m in 0..=opts.max_m {
        if !interior.iter().any(|&i| outside(norms[i], m)) {
            break;
        }
        rows.push(ExcisionRow {
            m,
            osc: osc_over(&|i| outside(norms[i], m)),
        });
    }
    let least_m = rows
        .iter()
        .find(|row| row.osc.iter().all(|o| o.osc <= opts.modulus_bound))
        .map(|row| row.m);
    let eventually_macro_uniform = EventualReport { rows, least_m };

    let slow_rows: Vec<SlowRow> = scales
        .iter()
        .enumerate()
        .map(|(k, &r)| SlowRow {
            r,
            m: eventually_macro_uniform
                .rows
                .iter()
                .find(|row| row.osc[k].osc < opts.epsilon)
                .map(|row| row.m),
        })
        .collect();
    let slowly_oscillating = SlowReport {
        epsilon: opts.epsilon.clone(),
        holds: slow_rows.iter().all(|row| row.m.is_some()),
        rows: slow_rows,
    };

    let mut eventual_constancy = Vec::new();
    if f.is_binary() && window.contains(&Element::identity()) {
        for &r in &scales {
            let idx = ConstancyIndex::new(window, sys, r, opts.max_m, cap)?;
            eventual_constancy.push(ConstancyRow {
                r,
                m: idx.index_of(&f.values),
            });
        }
    }

    Ok(ClassReport {
        margin,
        osc,
        bornologous,
        macro_uniform,
        eventually_macro_uniform,
        slowly_oscillating,
        eventual_constancy,
    })
}
