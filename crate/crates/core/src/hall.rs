//! Hall numbers and the two Hall algebras.
//!
//! [`ClassicalContext`] multiplies iso classes of representations with
//! `g^z_{x,y} = #{U ≤ z : U ≅ x, z/U ≅ y}`. [`DerivedContext`] multiplies
//! derived classes with Toën's formula
//!
//! ```text
//! g^z_{x,y} = |[x,z]_y| · ∏_{i>0} |Ext^{-i}(x,z)|^{(-1)^i}
//!             / (|Aut(x)| · ∏_{i>0} |Ext^{-i}(x,x)|^{(-1)^i})
//! ```
//!
//! where `[x,z]_y` is the set of maps `x -> z` in the derived category whose
//! cone is isomorphic to `y`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::Hash;
use std::sync::{Arc, Mutex};

use num::{BigRational, One, Zero};

use crate::catalog::{dims_add, dims_le, Catalog, ClassId};
use crate::derived::{hom_classes, mapping_cone, try_derived_class_of, DerivedClass};
use crate::error::{HallError, Result};
use crate::hom::{enumerate_subreps, hom_basis, is_short_exact};
use crate::io::{rational_from_int, rational_pow};

/// A finite-support rational combination of basis classes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HallElement<B: Ord> {
    values: BTreeMap<B, BigRational>,
}

impl<B: Ord> Default for HallElement<B> {
    fn default() -> Self {
        HallElement {
            values: BTreeMap::new(),
        }
    }
}

impl<B: Ord + Clone> HallElement<B> {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `χ_b`.
    pub fn basis(b: B) -> Self {
        let mut e = Self::zero();
        e.add_term(b, BigRational::one());
        e
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (B, BigRational)>) -> Self {
        let mut e = Self::zero();
        for (b, c) in terms {
            e.add_term(b, c);
        }
        e
    }

    pub fn add_term(&mut self, b: B, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.values.entry(b.clone()).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.values.remove(&b);
        }
    }

    pub fn get(&self, b: &B) -> BigRational {
        self.values.get(b).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&B, &BigRational)> {
        self.values.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (b, c) in other.terms() {
            out.add_term(b.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self::from_terms(self.values.iter().map(|(b, c)| (b.clone(), c * s)))
    }
}

impl<B: Ord + fmt::Display> fmt::Display for HallElement<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.values.is_empty() {
            return write!(f, "0");
        }
        for (k, (b, c)) in self.values.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if c.is_one() {
                write!(f, "[{b}]")?;
            } else {
                write!(f, "{c}·[{b}]")?;
            }
        }
        Ok(())
    }
}

/// A Hall algebra given by structure constants on a finite basis.
pub trait HallAlgebra: Sync {
    type Basis: Clone + Ord + Hash + Send + Sync + fmt::Debug + fmt::Display;

    /// Basis classes, in canonical order.
    fn basis(&self) -> Vec<Self::Basis>;

    /// The class of the zero object.
    fn unit(&self) -> Self::Basis;

    /// Whether the product of `x` and `y` stays inside the universe.
    fn fits(&self, x: &Self::Basis, y: &Self::Basis) -> bool;

    /// `χ_x · χ_y`; fails with [`HallError::OutOfUniverse`] if `!fits(x, y)`.
    fn product(&self, x: &Self::Basis, y: &Self::Basis) -> Result<HallElement<Self::Basis>>;

    fn label(&self) -> String;
}

/// Bilinear extension of [`HallAlgebra::product`].
pub fn multiply<A: HallAlgebra>(
    alg: &A,
    a: &HallElement<A::Basis>,
    b: &HallElement<A::Basis>,
) -> Result<HallElement<A::Basis>> {
    let mut out = HallElement::zero();
    for (x, cx) in a.terms() {
        for (y, cy) in b.terms() {
            let prod = alg.product(x, y)?;
            let s = cx * cy;
            for (z, cz) in prod.terms() {
                out.add_term(z.clone(), cz * &s);
            }
        }
    }
    Ok(out)
}

type Census<K> = Mutex<HashMap<K, Arc<BTreeMap<(ClassId, ClassId), u64>>>>;

/// The classical Hall algebra of the representations in a catalog.
#[derive(Debug)]
pub struct ClassicalContext {
    catalog: Arc<Catalog>,
    cap: u64,
    census: Census<ClassId>,
    products: Mutex<HashMap<(ClassId, ClassId), HallElement<ClassId>>>,
}

impl ClassicalContext {
    pub fn new(catalog: Arc<Catalog>) -> ClassicalContext {
        let cap = catalog.cap();
        ClassicalContext {
            catalog,
            cap,
            census: Mutex::new(HashMap::new()),
            products: Mutex::new(HashMap::new()),
        }
    }

    pub fn catalog(&self) -> &Arc<Catalog> {
        &self.catalog
    }

    /// `(class of U, class of z/U) -> count` over all subrepresentations `U ≤ z`.
    pub fn subrep_census(&self, z: ClassId) -> Result<Arc<BTreeMap<(ClassId, ClassId), u64>>> {
        if let Some(c) = self.census.lock().expect("census lock").get(&z) {
            return Ok(c.clone());
        }
        let mut counts = BTreeMap::new();
        for s in enumerate_subreps(self.catalog.rep(z)?, self.cap)? {
            let key = (self.catalog.classify(&s.sub)?, self.catalog.classify(&s.quotient)?);
            *counts.entry(key).or_insert(0) += 1;
        }
        let counts = Arc::new(counts);
        self.census.lock().expect("census lock").insert(z, counts.clone());
        Ok(counts)
    }

    /// `g^z_{x,y} = #{U ≤ z : U ≅ x, z/U ≅ y}`.
    pub fn hall_number(&self, x: ClassId, y: ClassId, z: ClassId) -> Result<u64> {
        let cat = &self.catalog;
        if dims_add(cat.dims(x)?, cat.dims(y)?) != cat.dims(z)? {
            return Ok(0);
        }
        Ok(self.subrep_census(z)?.get(&(x, y)).copied().unwrap_or(0))
    }

    /// Number of pairs `(i: x -> z, q: z -> y)` forming a short exact sequence,
    /// by enumerating `Hom(x, z) × Hom(z, y)`.
    pub fn count_exact_sequences(&self, x: ClassId, y: ClassId, z: ClassId) -> Result<u64> {
        let cat = &self.catalog;
        let (xr, yr, zr) = (cat.rep(x)?, cat.rep(y)?, cat.rep(z)?);
        let hi = hom_basis(xr, zr)?;
        let hq = hom_basis(zr, yr)?;
        hi.checked_count(self.cap, "enumerating Hom(x, z)")?;
        hq.checked_count(self.cap, "enumerating Hom(z, y)")?;
        let injections: Vec<_> = hi.elements(self.cap)?.filter(|i| i.is_injective()).collect();
        if injections.is_empty() {
            return Ok(0);
        }
        let surjections: Vec<_> = hq.elements(self.cap)?.filter(|q| q.is_surjective()).collect();
        let pairs = injections.len() as u128 * surjections.len() as u128;
        if pairs > self.cap as u128 {
            return Err(HallError::cap("enumerating exact sequences", pairs, self.cap));
        }
        let mut count = 0;
        for i in &injections {
            for q in &surjections {
                if is_short_exact(i, q) {
                    count += 1;
                }
            }
        }
        Ok(count)
    }
}

impl HallAlgebra for ClassicalContext {
    type Basis = ClassId;

    fn basis(&self) -> Vec<ClassId> {
        self.catalog.ids().collect()
    }

    fn unit(&self) -> ClassId {
        self.catalog.zero()
    }

    fn fits(&self, x: &ClassId, y: &ClassId) -> bool {
        let cat = &self.catalog;
        match (cat.dims(*x), cat.dims(*y)) {
            (Ok(a), Ok(b)) => dims_le(&dims_add(a, b), cat.bound()),
            _ => false,
        }
    }

    fn product(&self, x: &ClassId, y: &ClassId) -> Result<HallElement<ClassId>> {
        if let Some(p) = self.products.lock().expect("product lock").get(&(*x, *y)) {
            return Ok(p.clone());
        }
        let cat = &self.catalog;
        let dims = dims_add(cat.dims(*x)?, cat.dims(*y)?);
        if !dims_le(&dims, cat.bound()) {
            return Err(HallError::OutOfUniverse(format!(
                "[{x}]·[{y}] has dimension vector {dims:?} beyond bound {:?}",
                cat.bound()
            )));
        }
        let mut out = HallElement::zero();
        for &z in cat.classes_with_dims(&dims) {
            out.add_term(z, rational_from_int(self.hall_number(*x, *y, z)?));
        }
        self.products.lock().expect("product lock").insert((*x, *y), out.clone());
        Ok(out)
    }

    fn label(&self) -> String {
        "classical".into()
    }
}

/// Cone classes of every map `x -> z` in the derived category.
#[derive(Clone, Debug)]
pub struct ConeCensus {
    /// `dim Hom_D(x, z)`.
    pub hom_dim: usize,
    /// Number of classes whose cone has the given derived class.
    pub counts: BTreeMap<DerivedClass, u64>,
    /// Classes whose cone has homology beyond the catalog bound.
    pub beyond_catalog: u64,
}

/// The derived Hall algebra on derived classes whose homology sits in a
/// degree window and has total dimension vector within a bound.
#[derive(Debug)]
pub struct DerivedContext {
    catalog: Arc<Catalog>,
    window: (i32, i32),
    bound: Vec<usize>,
    universe: Vec<DerivedClass>,
    cap: u64,
    cones: Mutex<HashMap<(DerivedClass, DerivedClass), Arc<ConeCensus>>>,
    products: Mutex<HashMap<(DerivedClass, DerivedClass), HallElement<DerivedClass>>>,
}

/// Default cap on `|Hom_D(x, z)|`: `2^20`.
pub const DEFAULT_HOM_CLASS_CAP: u64 = 1 << 20;

impl DerivedContext {
    pub fn new(catalog: Arc<Catalog>, window: (i32, i32), bound: Vec<usize>) -> Result<DerivedContext> {
        Self::with_cap(catalog, window, bound, DEFAULT_HOM_CLASS_CAP)
    }

    pub fn with_cap(catalog: Arc<Catalog>, window: (i32, i32), bound: Vec<usize>, cap: u64) -> Result<DerivedContext> {
        if !catalog.quiver().is_acyclic() {
            return Err(HallError::NotAcyclic);
        }
        if window.0 > window.1 {
            return Err(HallError::DimensionMismatch(format!("empty degree window {window:?}")));
        }
        if bound.len() != catalog.quiver().vertex_count() || !dims_le(&bound, catalog.bound()) {
            return Err(HallError::DimensionMismatch(format!(
                "derived bound {bound:?} must fit inside catalog bound {:?}",
                catalog.bound()
            )));
        }
        let mut universe = vec![];
        let zero_dims = vec![0; bound.len()];
        enumerate_universe(&catalog, window.0, window.1, &bound, &zero_dims, &mut vec![], &mut universe)?;
        universe.sort();
        Ok(DerivedContext {
            catalog,
            window,
            bound,
            universe,
            cap,
            cones: Mutex::new(HashMap::new()),
            products: Mutex::new(HashMap::new()),
        })
    }

    pub fn catalog(&self) -> &Arc<Catalog> {
        &self.catalog
    }

    pub fn window(&self) -> (i32, i32) {
        self.window
    }

    pub fn bound(&self) -> &[usize] {
        &self.bound
    }

    pub fn universe(&self) -> &[DerivedClass] {
        &self.universe
    }

    pub fn contains(&self, x: &DerivedClass) -> bool {
        self.universe.binary_search(x).is_ok()
    }

    fn check_member(&self, x: &DerivedClass) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(HallError::OutOfUniverse(format!(
                "{x} is outside window {:?} / bound {:?}",
                self.window, self.bound
            )))
        }
    }

    /// Classifies the cone of every class in `Hom_D(x, z)`.
    pub fn cone_census(&self, x: &DerivedClass, z: &DerivedClass) -> Result<Arc<ConeCensus>> {
        let key = (x.clone(), z.clone());
        if let Some(c) = self.cones.lock().expect("cone lock").get(&key) {
            return Ok(c.clone());
        }
        let hs = hom_classes(x, z, &self.catalog)?;
        let n = hs.checked_class_count(self.cap)?;
        let mut counts = BTreeMap::new();
        let mut beyond_catalog = 0;
        for k in 0..n {
            let cone = mapping_cone(&hs.representative(k))?;
            match try_derived_class_of(&cone, &self.catalog)? {
                Some(c) => *counts.entry(c).or_insert(0) += 1,
                None => beyond_catalog += 1,
            }
        }
        let census = Arc::new(ConeCensus {
            hom_dim: hs.dim(),
            counts,
            beyond_catalog,
        });
        self.cones.lock().expect("cone lock").insert(key, census.clone());
        Ok(census)
    }

    /// `|[x, z]_y|`.
    pub fn maps_with_cone(&self, x: &DerivedClass, z: &DerivedClass, y: &DerivedClass) -> Result<u64> {
        Ok(self.cone_census(x, z)?.counts.get(y).copied().unwrap_or(0))
    }

    /// Isomorphisms in the derived category: classes in `Hom_D(x, x)` with zero cone.
    pub fn aut_order(&self, x: &DerivedClass) -> Result<u64> {
        self.maps_with_cone(x, x, &DerivedClass::zero())
    }

    /// Largest `i` with possibly nonzero `Ext^{-i}(x, z)`.
    fn negative_ext_reach(&self, x: &DerivedClass, z: &DerivedClass) -> i32 {
        match (x.entries().last(), z.entries().first()) {
            (Some(a), Some(c)) => (a.degree - c.degree).max(0),
            _ => 0,
        }
    }

    /// `∏_{i>0} |Ext^{-i}(x, z)|^{(-1)^i}`.
    pub fn negative_ext_factor(&self, x: &DerivedClass, z: &DerivedClass) -> Result<BigRational> {
        let p = self.catalog.modulus() as u64;
        let mut out = BigRational::one();
        for i in 1..=self.negative_ext_reach(x, z) {
            let d = crate::derived::ext_dim(x, z, -i, &self.catalog)? as i64;
            let exp = if i % 2 == 0 { d } else { -d };
            out *= rational_pow(p, exp);
        }
        Ok(out)
    }

    /// Toën's derived Hall number `g^z_{x,y}`.
    pub fn hall_number(&self, x: &DerivedClass, y: &DerivedClass, z: &DerivedClass) -> Result<BigRational> {
        let count = self.maps_with_cone(x, z, y)?;
        if count == 0 {
            return Ok(BigRational::zero());
        }
        let num = rational_from_int(count) * self.negative_ext_factor(x, z)?;
        let den = rational_from_int(self.aut_order(x)?) * self.negative_ext_factor(x, x)?;
        Ok(num / den)
    }

    /// Universe classes that can occur in `χ_x · χ_y`: homology in the degrees
    /// of `x` or `y`, bounded degreewise by `H^n(x) ⊕ H^n(y)`, and with the
    /// same class in `K_0` (alternating sum of dimension vectors).
    pub fn product_candidates(&self, x: &DerivedClass, y: &DerivedClass) -> Result<Vec<DerivedClass>> {
        let cat = &self.catalog;
        let (dx, dy) = (x.degree_dims(cat), y.degree_dims(cat));
        let zeros = vec![0; self.bound.len()];
        let k0 = |d: &BTreeMap<i32, Vec<usize>>| -> Vec<i64> {
            let mut out = vec![0i64; zeros.len()];
            for (n, v) in d {
                for (o, &a) in out.iter_mut().zip(v) {
                    *o += if n.rem_euclid(2) == 0 { a as i64 } else { -(a as i64) };
                }
            }
            out
        };
        let target_k0: Vec<i64> = k0(&dx).iter().zip(k0(&dy)).map(|(a, b)| a + b).collect();
        Ok(self
            .universe
            .iter()
            .filter(|z| {
                let dz = z.degree_dims(cat);
                dz.iter().all(|(n, v)| {
                    let cap = dims_add(dx.get(n).unwrap_or(&zeros), dy.get(n).unwrap_or(&zeros));
                    dims_le(v, &cap)
                }) && k0(&dz) == target_k0
            })
            .cloned()
            .collect())
    }

    /// `χ_x · χ_y` summed over every universe class, without candidate filtering.
    pub fn product_unfiltered(&self, x: &DerivedClass, y: &DerivedClass) -> Result<HallElement<DerivedClass>> {
        let mut out = HallElement::zero();
        for z in &self.universe {
            out.add_term(z.clone(), self.hall_number(x, y, z)?);
        }
        Ok(out)
    }
}

fn enumerate_universe(
    cat: &Catalog,
    degree: i32,
    hi: i32,
    bound: &[usize],
    used: &[usize],
    current: &mut Vec<(ClassId, i32)>,
    out: &mut Vec<DerivedClass>,
) -> Result<()> {
    if degree > hi {
        out.push(DerivedClass::from_entries(current, cat)?);
        return Ok(());
    }
    for id in cat.ids() {
        let total = dims_add(used, cat.dims(id)?);
        if !dims_le(&total, bound) {
            continue;
        }
        let zero = id == cat.zero();
        if !zero {
            current.push((id, degree));
        }
        enumerate_universe(cat, degree + 1, hi, bound, &total, current, out)?;
        if !zero {
            current.pop();
        }
    }
    Ok(())
}

impl HallAlgebra for DerivedContext {
    type Basis = DerivedClass;

    fn basis(&self) -> Vec<DerivedClass> {
        self.universe.clone()
    }

    fn unit(&self) -> DerivedClass {
        DerivedClass::zero()
    }

    fn fits(&self, x: &DerivedClass, y: &DerivedClass) -> bool {
        self.contains(x)
            && self.contains(y)
            && dims_le(
                &dims_add(&x.total_dims(&self.catalog), &y.total_dims(&self.catalog)),
                &self.bound,
            )
    }

    fn product(&self, x: &DerivedClass, y: &DerivedClass) -> Result<HallElement<DerivedClass>> {
        let key = (x.clone(), y.clone());
        if let Some(p) = self.products.lock().expect("product lock").get(&key) {
            return Ok(p.clone());
        }
        self.check_member(x)?;
        self.check_member(y)?;
        if !self.fits(x, y) {
            return Err(HallError::OutOfUniverse(format!(
                "[{x}]·[{y}] may leave total dimension bound {:?}",
                self.bound
            )));
        }
        let mut out = HallElement::zero();
        for z in self.product_candidates(x, y)? {
            let g = self.hall_number(x, y, &z)?;
            out.add_term(z, g);
        }
        self.products.lock().expect("product lock").insert(key, out.clone());
        Ok(out)
    }

    fn label(&self) -> String {
        "derived".into()
    }
}
