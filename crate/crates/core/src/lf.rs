//! Locally finite homotopy types, encoded by the orders of their homotopy
//! groups, and the push-forward / pullback calculus on finite-support
//! rational functions.
//!
//! A component with orders `[a1, a2, a3, ...]` has `|π_i| = a_i` and
//! contributes `a1^-1 · a2 · a3^-1 · ...` to a push-forward.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::{BigRational, One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{HallError, Result};
use crate::io::{abs_diff, format_rational, parse_rational, rational_pow};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LfComponent {
    /// `[|π_1|, |π_2|, ...]`; missing entries are trivial groups.
    #[serde(default)]
    pub orders: Vec<u64>,
}

impl LfComponent {
    pub fn point() -> LfComponent {
        LfComponent { orders: vec![] }
    }

    pub fn with_orders(orders: Vec<u64>) -> LfComponent {
        LfComponent { orders }
    }

    /// `∏_{i>0} |π_i|^{(-1)^i}`.
    pub fn cardinality(&self) -> BigRational {
        self.orders
            .iter()
            .enumerate()
            .fold(BigRational::one(), |acc, (k, &n)| {
                let exp = if k % 2 == 0 { -1 } else { 1 };
                acc * rational_pow(n, exp)
            })
    }

    fn product(&self, other: &LfComponent) -> LfComponent {
        let len = self.orders.len().max(other.orders.len());
        let get = |v: &[u64], i: usize| v.get(i).copied().unwrap_or(1);
        let mut orders: Vec<u64> = (0..len).map(|i| get(&self.orders, i) * get(&other.orders, i)).collect();
        while orders.last() == Some(&1) {
            orders.pop();
        }
        LfComponent { orders }
    }

    /// Equal homotopy group orders, ignoring trailing trivial groups.
    pub fn same_orders(&self, other: &LfComponent) -> bool {
        let trim = |v: &[u64]| {
            let mut v = v.to_vec();
            while v.last() == Some(&1) {
                v.pop();
            }
            v
        };
        trim(&self.orders) == trim(&other.orders)
    }
}

/// A locally finite homotopy type with finitely many components; component
/// ids are indices into `components`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LFType {
    pub components: Vec<LfComponent>,
}

impl LFType {
    pub fn new(components: Vec<LfComponent>) -> LFType {
        LFType { components }
    }

    pub fn point() -> LFType {
        LFType::new(vec![LfComponent::point()])
    }

    /// Disjoint union of `B(Z/n)`-like components, one per entry.
    pub fn from_pi1(orders: &[u64]) -> LFType {
        LFType::new(orders.iter().map(|&n| LfComponent::with_orders(vec![n])).collect())
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        for (i, c) in self.components.iter().enumerate() {
            if c.orders.contains(&0) {
                return Err(HallError::InvalidLf(format!("component {i} has a homotopy group of order 0")));
            }
        }
        Ok(())
    }

    /// `Σ_components ∏ |π_i|^{(-1)^i}`.
    pub fn homotopy_cardinality(&self) -> BigRational {
        self.components.iter().map(LfComponent::cardinality).sum()
    }
}

/// `X × Y`; component `(a, b)` has id `a * |Y| + b`.
pub fn lf_product(x: &LFType, y: &LFType) -> LFType {
    LFType::new(
        x.components
            .iter()
            .flat_map(|a| y.components.iter().map(move |b| a.product(b)))
            .collect(),
    )
}

/// A rational function on `π_0(base)` with finite support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSupportFn {
    base: Arc<LFType>,
    values: BTreeMap<usize, BigRational>,
}

impl FiniteSupportFn {
    pub fn zero(base: Arc<LFType>) -> FiniteSupportFn {
        FiniteSupportFn {
            base,
            values: BTreeMap::new(),
        }
    }

    /// Characteristic function `χ_c`.
    pub fn indicator(base: Arc<LFType>, component: usize) -> Result<FiniteSupportFn> {
        let mut f = FiniteSupportFn::zero(base);
        f.set(component, BigRational::one())?;
        Ok(f)
    }

    pub fn constant_one(base: Arc<LFType>) -> FiniteSupportFn {
        let values = (0..base.len()).map(|c| (c, BigRational::one())).collect();
        FiniteSupportFn { base, values }
    }

    pub fn from_values(base: Arc<LFType>, values: impl IntoIterator<Item = (usize, BigRational)>) -> Result<FiniteSupportFn> {
        let mut f = FiniteSupportFn::zero(base);
        for (c, v) in values {
            let cur = f.get(c);
            f.set(c, cur + v)?;
        }
        Ok(f)
    }

    pub fn base(&self) -> &Arc<LFType> {
        &self.base
    }

    pub fn get(&self, component: usize) -> BigRational {
        self.values.get(&component).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn set(&mut self, component: usize, value: BigRational) -> Result<()> {
        if component >= self.base.len() {
            return Err(HallError::InvalidLf(format!(
                "component {component} outside base of {} components",
                self.base.len()
            )));
        }
        if value.is_zero() {
            self.values.remove(&component);
        } else {
            self.values.insert(component, value);
        }
        Ok(())
    }

    /// Nonzero values in component order.
    pub fn support(&self) -> impl Iterator<Item = (usize, &BigRational)> {
        self.values.iter().map(|(&c, v)| (c, v))
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn add(&self, other: &FiniteSupportFn) -> Result<FiniteSupportFn> {
        if self.base != other.base {
            return Err(HallError::BaseMismatch);
        }
        let mut out = self.clone();
        for (c, v) in other.support() {
            let cur = out.get(c);
            out.set(c, cur + v)?;
        }
        Ok(out)
    }

    pub fn scale(&self, s: &BigRational) -> FiniteSupportFn {
        let mut out = FiniteSupportFn::zero(self.base.clone());
        if !s.is_zero() {
            out.values = self.values.iter().map(|(&c, v)| (c, v * s)).collect();
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "schema": crate::io::SCHEMA_VERSION,
            "base": self.base.as_ref(),
            "values": self.support().map(|(c, v)| serde_json::json!({"component": c, "value": format_rational(v)})).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(text: &str) -> Result<FiniteSupportFn> {
        #[derive(Deserialize)]
        struct Entry {
            component: usize,
            value: String,
        }
        #[derive(Deserialize)]
        struct Doc {
            base: LFType,
            #[serde(default)]
            values: Vec<Entry>,
        }
        let doc: Doc = serde_json::from_str(text)?;
        doc.base.validate()?;
        let values = doc
            .values
            .into_iter()
            .map(|e| Ok((e.component, parse_rational(&e.value)?)))
            .collect::<Result<Vec<_>>>()?;
        FiniteSupportFn::from_values(Arc::new(doc.base), values)
    }
}

/// `f ⊗ g` on `X × Y`: `(a, b) ↦ f(a) · g(b)`.
pub fn tensor(f: &FiniteSupportFn, g: &FiniteSupportFn) -> FiniteSupportFn {
    let base = Arc::new(lf_product(&f.base, &g.base));
    let width = g.base.len();
    let values = f
        .support()
        .flat_map(|(a, fa)| g.support().map(move |(b, gb)| (a * width + b, fa * gb)))
        .collect();
    FiniteSupportFn { base, values }
}

/// The homotopy fiber over one target component, with its map to the source.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fiber {
    pub fiber: LFType,
    /// `incl[z]` is the source component hit by fiber component `z`.
    pub incl: Vec<usize>,
}

/// A proper map `X -> Y` on `π_0`, with explicit fibers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProperMapData {
    pub source: Arc<LFType>,
    pub target: Arc<LFType>,
    pub component_map: Vec<usize>,
    /// One fiber per target component.
    pub fibers: Vec<Fiber>,
}

impl ProperMapData {
    pub fn new(source: Arc<LFType>, target: Arc<LFType>, component_map: Vec<usize>, fibers: Vec<Fiber>) -> Result<ProperMapData> {
        let f = ProperMapData {
            source,
            target,
            component_map,
            fibers,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn identity(x: Arc<LFType>) -> ProperMapData {
        let fibers = (0..x.len())
            .map(|c| Fiber {
                fiber: LFType::point(),
                incl: vec![c],
            })
            .collect();
        ProperMapData {
            source: x.clone(),
            target: x.clone(),
            component_map: (0..x.len()).collect(),
            fibers,
        }
    }

    /// `X -> pt`, whose only fiber is `X` itself.
    pub fn to_point(x: Arc<LFType>) -> ProperMapData {
        ProperMapData {
            source: x.clone(),
            target: Arc::new(LFType::point()),
            component_map: vec![0; x.len()],
            fibers: vec![Fiber {
                fiber: x.as_ref().clone(),
                incl: (0..x.len()).collect(),
            }],
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.source.validate()?;
        self.target.validate()?;
        let bad = |msg: String| Err(HallError::InvalidLf(msg));
        if self.component_map.len() != self.source.len() {
            return bad(format!(
                "component_map has {} entries for {} source components",
                self.component_map.len(),
                self.source.len()
            ));
        }
        if let Some(&y) = self.component_map.iter().find(|&&y| y >= self.target.len()) {
            return bad(format!("component_map points at missing target component {y}"));
        }
        if self.fibers.len() != self.target.len() {
            return bad(format!(
                "{} fibers for {} target components",
                self.fibers.len(),
                self.target.len()
            ));
        }
        for (y, fib) in self.fibers.iter().enumerate() {
            fib.fiber.validate()?;
            if fib.incl.len() != fib.fiber.len() {
                return bad(format!("fiber over {y}: incl has {} entries for {} components", fib.incl.len(), fib.fiber.len()));
            }
            for &x in &fib.incl {
                if x >= self.source.len() || self.component_map[x] != y {
                    return bad(format!("fiber over {y} includes component {x}, which does not lie over {y}"));
                }
            }
            for (x, _) in self.component_map.iter().enumerate().filter(|&(_, &t)| t == y) {
                if !fib.incl.contains(&x) {
                    return bad(format!("source component {x} lies over {y} but misses its fiber"));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("map data serializes");
        v["schema"] = serde_json::json!(crate::io::SCHEMA_VERSION);
        v
    }

    pub fn from_json(text: &str) -> Result<ProperMapData> {
        let f: ProperMapData = serde_json::from_str(text)?;
        f.validate()?;
        Ok(f)
    }
}

/// `f_!(α)(y) = Σ_{z ∈ π_0(F_y)} α(i(z)) · ∏_{i>0} |π_i(F_y, z)|^{(-1)^i}`.
pub fn pushforward(f: &ProperMapData, alpha: &FiniteSupportFn) -> Result<FiniteSupportFn> {
    if alpha.base() != &f.source {
        return Err(HallError::BaseMismatch);
    }
    let mut out = FiniteSupportFn::zero(f.target.clone());
    for (y, fib) in f.fibers.iter().enumerate() {
        let mut acc = BigRational::zero();
        for (z, comp) in fib.fiber.components.iter().enumerate() {
            let a = alpha.get(fib.incl[z]);
            if !a.is_zero() {
                acc += a * comp.cardinality();
            }
        }
        out.set(y, acc)?;
    }
    Ok(out)
}

/// `f^*(β)(x) = β(f(x))`.
pub fn pullback(f: &ProperMapData, beta: &FiniteSupportFn) -> Result<FiniteSupportFn> {
    if beta.base() != &f.target {
        return Err(HallError::BaseMismatch);
    }
    let mut out = FiniteSupportFn::zero(f.source.clone());
    for (x, &y) in f.component_map.iter().enumerate() {
        out.set(x, beta.get(y))?;
    }
    Ok(out)
}

/// A commutative square
///
/// ```text
///   X' --v--> X
///   |         |
///   g         f
///   v         v
///   Y' --u--> Y
/// ```
///
/// with a witness that the fiber of `g` over `y'` is the fiber of `f` over `u(y')`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseChangeSquare {
    pub f: ProperMapData,
    pub u: ProperMapData,
    pub g: ProperMapData,
    pub v: ProperMapData,
    /// `witness[y'][z]`: the component of `F^f_{u(y')}` matched with component `z` of `F^g_{y'}`.
    pub witness: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseChangeReport {
    pub equal: bool,
    pub max_deviation: BigRational,
    pub functions_checked: usize,
}

impl BaseChangeSquare {
    pub fn validate(&self) -> Result<()> {
        for m in [&self.f, &self.u, &self.g, &self.v] {
            m.validate()?;
        }
        let bad = |msg: &str| Err(HallError::InvalidLf(msg.to_string()));
        if self.u.target != self.f.target
            || self.g.target != self.u.source
            || self.v.source != self.g.source
            || self.v.target != self.f.source
        {
            return bad("square corners do not match");
        }
        for (xp, &x) in self.v.component_map.iter().enumerate() {
            if self.f.component_map[x] != self.u.component_map[self.g.component_map[xp]] {
                return bad("square does not commute on components");
            }
        }
        if self.witness.len() != self.g.target.len() {
            return bad("one fiber witness per component of Y' required");
        }
        for (yp, phi) in self.witness.iter().enumerate() {
            let fg = &self.g.fibers[yp];
            let ff = &self.f.fibers[self.u.component_map[yp]];
            if phi.len() != fg.fiber.len() || fg.fiber.len() != ff.fiber.len() {
                return bad("fiber witness is not a bijection");
            }
            let mut seen = vec![false; ff.fiber.len()];
            for (z, &w) in phi.iter().enumerate() {
                if w >= seen.len() || std::mem::replace(&mut seen[w], true) {
                    return bad("fiber witness is not a bijection");
                }
                if !fg.fiber.components[z].same_orders(&ff.fiber.components[w]) {
                    return bad("fiber witness matches components with different homotopy orders");
                }
                if self.v.component_map[fg.incl[z]] != ff.incl[w] {
                    return bad("fiber witness is not compatible with v");
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("square serializes");
        v["schema"] = serde_json::json!(crate::io::SCHEMA_VERSION);
        v
    }

    pub fn from_json(text: &str) -> Result<BaseChangeSquare> {
        let sq: BaseChangeSquare = serde_json::from_str(text)?;
        sq.validate()?;
        Ok(sq)
    }
}

/// Evaluates `u^* ∘ f_!` and `g_! ∘ v^*` on `χ_c` for every component `c` of `X`.
pub fn check_base_change(square: &BaseChangeSquare) -> Result<BaseChangeReport> {
    square.validate()?;
    let mut max_deviation = BigRational::zero();
    let x = square.f.source.clone();
    for c in 0..x.len() {
        let chi = FiniteSupportFn::indicator(x.clone(), c)?;
        let lhs = pullback(&square.u, &pushforward(&square.f, &chi)?)?;
        let rhs = pushforward(&square.g, &pullback(&square.v, &chi)?)?;
        for y in 0..square.g.target.len() {
            let d = abs_diff(&lhs.get(y), &rhs.get(y));
            if d > max_deviation {
                max_deviation = d;
            }
        }
    }
    Ok(BaseChangeReport {
        equal: max_deviation.is_zero(),
        max_deviation,
        functions_checked: x.len(),
    })
}

fn random_component<R: Rng>(rng: &mut R, max_order: u64) -> LfComponent {
    let len = rng.gen_range(0..=3);
    LfComponent::with_orders((0..len).map(|_| rng.gen_range(1..=max_order)).collect())
}

fn random_fibers<R: Rng>(rng: &mut R, component_map: &[usize], targets: usize, max_order: u64) -> Vec<Fiber> {
    (0..targets)
        .map(|y| {
            let over: Vec<usize> = (0..component_map.len()).filter(|&x| component_map[x] == y).collect();
            let mut incl = over.clone();
            if !over.is_empty() {
                for _ in 0..rng.gen_range(0..=1) {
                    incl.push(over[rng.gen_range(0..over.len())]);
                }
            }
            let fiber = LFType::new(incl.iter().map(|_| random_component(rng, max_order)).collect());
            Fiber { fiber, incl }
        })
        .collect()
}

/// A random commutative square whose left column is the base change of the
/// right one along `u`: `X'` has one component per pair `(y', x)` with
/// `f(x) = u(y')`, and the fibers of `g` copy those of `f`. Retries until
/// every corner has at most `max_components` components.
pub fn random_square<R: Rng>(rng: &mut R, max_components: usize, max_order: u64) -> BaseChangeSquare {
    loop {
        let ny = rng.gen_range(1..=max_components);
        let nx = rng.gen_range(0..=max_components);
        let nyp = rng.gen_range(1..=max_components);
        let y = Arc::new(LFType::new((0..ny).map(|_| random_component(rng, max_order)).collect()));
        let x = Arc::new(LFType::new((0..nx).map(|_| random_component(rng, max_order)).collect()));
        let yp = Arc::new(LFType::new((0..nyp).map(|_| random_component(rng, max_order)).collect()));
        let f_map: Vec<usize> = (0..nx).map(|_| rng.gen_range(0..ny)).collect();
        let u_map: Vec<usize> = (0..nyp).map(|_| rng.gen_range(0..ny)).collect();
        let f_fibers = random_fibers(rng, &f_map, ny, max_order);
        let u_fibers = random_fibers(rng, &u_map, ny, max_order);

        let pairs: Vec<(usize, usize)> = (0..nyp)
            .flat_map(|a| (0..nx).filter(|&b| f_map[b] == u_map[a]).map(move |b| (a, b)).collect::<Vec<_>>())
            .collect();
        if pairs.len() > max_components {
            continue;
        }
        let xp = Arc::new(LFType::new(pairs.iter().map(|_| random_component(rng, max_order)).collect()));
        let g_map: Vec<usize> = pairs.iter().map(|&(a, _)| a).collect();
        let v_map: Vec<usize> = pairs.iter().map(|&(_, b)| b).collect();
        let g_fibers: Vec<Fiber> = (0..nyp)
            .map(|a| {
                let ff = &f_fibers[u_map[a]];
                let incl = ff
                    .incl
                    .iter()
                    .map(|&b| pairs.iter().position(|&pr| pr == (a, b)).expect("pair exists"))
                    .collect();
                Fiber {
                    fiber: ff.fiber.clone(),
                    incl,
                }
            })
            .collect();
        let v_fibers = random_fibers(rng, &v_map, nx, max_order);
        let witness = (0..nyp).map(|a| (0..f_fibers[u_map[a]].fiber.len()).collect()).collect();
        let square = BaseChangeSquare {
            f: ProperMapData {
                source: x.clone(),
                target: y.clone(),
                component_map: f_map,
                fibers: f_fibers,
            },
            u: ProperMapData {
                source: yp.clone(),
                target: y,
                component_map: u_map,
                fibers: u_fibers,
            },
            g: ProperMapData {
                source: xp.clone(),
                target: yp,
                component_map: g_map,
                fibers: g_fibers,
            },
            v: ProperMapData {
                source: xp,
                target: x,
                component_map: v_map,
                fibers: v_fibers,
            },
            witness,
        };
        debug_assert!(square.validate().is_ok());
        return square;
    }
}
