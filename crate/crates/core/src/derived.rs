//! The bounded derived category of a hereditary path algebra.
//!
//! Complexes are cohomological: the differential raises degree and
//! `(x[1])^n = x^{n+1}`, so a module stalk in degree 0 shifted by `[1]` sits
//! in degree -1. Because the algebra is hereditary, every complex is
//! quasi-isomorphic to its homology, and a [`DerivedClass`] records exactly
//! the catalog class of `H^n` for each degree `n`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::catalog::{dims_add, Catalog, ClassId};
use crate::error::{HallError, Result};
use crate::fq::{checked_power, digits, mul_mod, rref_rank_kernel, undigits, FqMatrix};
use crate::hom::{extend_rows, hom_basis, image_spaces, kernel_spaces, subquotient};
use crate::quiver::{Quiver, RepMorphism, Representation};

/// A bounded cochain complex of representations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    lo: i32,
    terms: Vec<Representation>,
    /// `diffs[k]: terms[k] -> terms[k + 1]`.
    diffs: Vec<RepMorphism>,
    zero: Representation,
}

impl Complex {
    /// `terms[k]` sits in degree `lo + k`; `diffs` has one entry fewer than `terms`.
    pub fn new(
        quiver: Arc<Quiver>,
        modulus: u32,
        lo: i32,
        terms: Vec<Representation>,
        diffs: Vec<RepMorphism>,
    ) -> Result<Complex> {
        let zero = Representation::zero(quiver, modulus);
        if diffs.len() + 1 != terms.len().max(1) {
            return Err(HallError::MalformedComplex(format!(
                "{} terms need {} differentials, got {}",
                terms.len(),
                terms.len().saturating_sub(1),
                diffs.len()
            )));
        }
        for t in &terms {
            t.same_context(&zero)?;
        }
        for (k, d) in diffs.iter().enumerate() {
            d.validate(&terms[k], &terms[k + 1])
                .map_err(|e| HallError::MalformedComplex(format!("differential at degree {}: {e}", lo + k as i32)))?;
        }
        for k in 1..diffs.len() {
            if !diffs[k].compose(&diffs[k - 1]).is_zero() {
                return Err(HallError::MalformedComplex(format!(
                    "d^2 != 0 at degree {}",
                    lo + k as i32 - 1
                )));
            }
        }
        Ok(Complex {
            lo,
            terms,
            diffs,
            zero,
        })
    }

    pub fn empty(quiver: Arc<Quiver>, modulus: u32) -> Complex {
        Complex {
            lo: 0,
            terms: vec![],
            diffs: vec![],
            zero: Representation::zero(quiver, modulus),
        }
    }

    pub fn stalk(m: Representation, degree: i32) -> Complex {
        let zero = Representation::zero(m.quiver().clone(), m.modulus());
        Complex {
            lo: degree,
            terms: vec![m],
            diffs: vec![],
            zero,
        }
    }

    /// Complex with the given terms and zero differentials.
    pub fn with_zero_differentials(quiver: Arc<Quiver>, modulus: u32, lo: i32, terms: Vec<Representation>) -> Complex {
        let diffs = terms.windows(2).map(|w| RepMorphism::zero(&w[0], &w[1])).collect();
        Complex {
            lo,
            terms,
            diffs,
            zero: Representation::zero(quiver, modulus),
        }
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        self.zero.quiver()
    }

    pub fn modulus(&self) -> u32 {
        self.zero.modulus()
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    /// Highest degree with a stored term; `lo - 1` for the empty complex.
    pub fn hi(&self) -> i32 {
        self.lo + self.terms.len() as i32 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        self.lo..=self.hi()
    }

    pub fn term(&self, n: i32) -> &Representation {
        if n < self.lo || n > self.hi() {
            &self.zero
        } else {
            &self.terms[(n - self.lo) as usize]
        }
    }

    /// `d^n: C^n -> C^{n+1}`.
    pub fn differential(&self, n: i32) -> RepMorphism {
        if n >= self.lo && n < self.hi() {
            self.diffs[(n - self.lo) as usize].clone()
        } else {
            RepMorphism::zero(self.term(n), self.term(n + 1))
        }
    }

    /// `x[k]`: `(x[k])^n = x^{n+k}` with differential `(-1)^k d`.
    pub fn shift(&self, k: i32) -> Complex {
        let p = self.modulus();
        let diffs = if k.rem_euclid(2) == 1 {
            self.diffs.iter().map(|d| d.scale(p - 1)).collect()
        } else {
            self.diffs.clone()
        };
        Complex {
            lo: self.lo - k,
            terms: self.terms.clone(),
            diffs,
            zero: self.zero.clone(),
        }
    }
}

/// `H^n` for every stored degree.
pub fn homology(c: &Complex) -> Result<Vec<(i32, Representation)>> {
    c.degrees()
        .map(|n| {
            let d_out = c.differential(n);
            let d_in = c.differential(n - 1);
            if !d_out.compose(&d_in).is_zero() {
                return Err(HallError::MalformedComplex(format!("d^2 != 0 at degree {}", n - 1)));
            }
            let h = subquotient(c.term(n), &kernel_spaces(&d_out), &image_spaces(&d_in))?;
            Ok((n, h.rep))
        })
        .collect()
}

/// A chain map `f: X -> Y`, one component per degree of the source.
#[derive(Clone, Debug)]
pub struct ChainMap {
    source: Arc<Complex>,
    target: Arc<Complex>,
    comps: Vec<RepMorphism>,
}

impl ChainMap {
    pub fn new(source: Arc<Complex>, target: Arc<Complex>, comps: Vec<RepMorphism>) -> Result<ChainMap> {
        let f = ChainMap {
            source,
            target,
            comps,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn zero(source: Arc<Complex>, target: Arc<Complex>) -> ChainMap {
        let comps = source
            .degrees()
            .map(|n| RepMorphism::zero(source.term(n), target.term(n)))
            .collect();
        ChainMap {
            source,
            target,
            comps,
        }
    }

    pub fn identity(c: Arc<Complex>) -> ChainMap {
        let comps = c.degrees().map(|n| RepMorphism::identity(c.term(n))).collect();
        ChainMap {
            source: c.clone(),
            target: c,
            comps,
        }
    }

    pub fn source(&self) -> &Arc<Complex> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Complex> {
        &self.target
    }

    /// `f^n`.
    pub fn component(&self, n: i32) -> RepMorphism {
        if n < self.source.lo() || n > self.source.hi() {
            RepMorphism::zero(self.source.term(n), self.target.term(n))
        } else {
            self.comps[(n - self.source.lo()) as usize].clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (x, y) = (&self.source, &self.target);
        if self.comps.len() != x.degrees().count() {
            return Err(HallError::MalformedMorphism("one component per source degree required".into()));
        }
        for n in x.degrees() {
            self.component(n).validate(x.term(n), y.term(n))?;
        }
        let lo = x.lo().min(y.lo()) - 1;
        let hi = x.hi().max(y.hi());
        for n in lo..=hi {
            let lhs = y.differential(n).compose(&self.component(n));
            let rhs = self.component(n + 1).compose(&x.differential(n));
            if lhs != rhs {
                return Err(HallError::MalformedMorphism(format!(
                    "chain map does not commute with differentials at degree {n}"
                )));
            }
        }
        Ok(())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ChainMap) -> ChainMap {
        let comps = other
            .source
            .degrees()
            .map(|n| self.component(n).compose(&other.component(n)))
            .collect();
        ChainMap {
            source: other.source.clone(),
            target: self.target.clone(),
            comps,
        }
    }

    pub fn add(&self, other: &ChainMap) -> ChainMap {
        let comps = self.comps.iter().zip(&other.comps).map(|(a, b)| a.add(b)).collect();
        ChainMap {
            source: self.source.clone(),
            target: self.target.clone(),
            comps,
        }
    }
}

pub fn direct_sum_all(quiver: &Arc<Quiver>, modulus: u32, parts: &[&Representation]) -> Representation {
    parts
        .iter()
        .fold(Representation::zero(quiver.clone(), modulus), |acc, r| {
            acc.direct_sum(r).expect("same context")
        })
}

/// Block morphism `⊕ src -> ⊕ dst`; `blocks[i][j]: src[j] -> dst[i]`.
pub fn assemble(src: &[&Representation], dst: &[&Representation], blocks: &[Vec<Option<RepMorphism>>]) -> RepMorphism {
    let p = src.first().or(dst.first()).map_or(2, |r| r.modulus());
    let nv = src.first().or(dst.first()).map_or(0, |r| r.dims().len());
    let maps = (0..nv)
        .map(|v| {
            let rows: usize = dst.iter().map(|r| r.dims()[v]).sum();
            let cols: usize = src.iter().map(|r| r.dims()[v]).sum();
            let mut m = FqMatrix::zeros(rows, cols, p);
            let mut r0 = 0;
            for (i, d) in dst.iter().enumerate() {
                let mut c0 = 0;
                for (j, s) in src.iter().enumerate() {
                    if let Some(b) = &blocks[i][j] {
                        m.set_block(r0, c0, &b.maps()[v]);
                    }
                    c0 += s.dims()[v];
                }
                r0 += d.dims()[v];
            }
            m
        })
        .collect();
    RepMorphism::new(maps)
}

/// Standard mapping cone: `cone^n = X^{n+1} ⊕ Y^n`, `d(a, b) = (-d_X a, f a + d_Y b)`.
pub fn mapping_cone(f: &ChainMap) -> Result<Complex> {
    f.validate()?;
    let (x, y) = (&f.source, &f.target);
    let q = x.quiver().clone();
    let p = x.modulus();
    let lo = (x.lo() - 1).min(y.lo());
    let hi = (x.hi() - 1).max(y.hi());
    if hi < lo {
        return Ok(Complex::empty(q, p));
    }
    let terms: Vec<Representation> = (lo..=hi)
        .map(|n| x.term(n + 1).direct_sum(y.term(n)))
        .collect::<Result<_>>()?;
    let diffs = (lo..hi)
        .map(|n| {
            assemble(
                &[x.term(n + 1), y.term(n)],
                &[x.term(n + 2), y.term(n + 1)],
                &[
                    vec![Some(x.differential(n + 1).neg()), None],
                    vec![Some(f.component(n + 1)), Some(y.differential(n))],
                ],
            )
        })
        .collect();
    Complex::new(q, p, lo, terms, diffs)
}

/// One summand `H^degree` of a derived class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DerivedEntry {
    pub class_id: ClassId,
    pub degree: i32,
}

impl PartialOrd for DerivedEntry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DerivedEntry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.degree, self.class_id).cmp(&(other.degree, other.class_id))
    }
}

/// Quasi-isomorphism class of a complex: `⊕_n H^n[-n]`, one entry per
/// nonzero degree, sorted by degree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DerivedClass {
    entries: Vec<DerivedEntry>,
}

impl fmt::Display for DerivedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "0");
        }
        for (k, e) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, "+")?;
            }
            write!(f, "{}@{}", e.class_id, e.degree)?;
        }
        Ok(())
    }
}

impl DerivedClass {
    pub fn zero() -> DerivedClass {
        DerivedClass::default()
    }

    pub fn stalk(id: ClassId, degree: i32, cat: &Catalog) -> DerivedClass {
        if id == cat.zero() {
            DerivedClass::zero()
        } else {
            DerivedClass {
                entries: vec![DerivedEntry { class_id: id, degree }],
            }
        }
    }

    /// Normalises arbitrary `(class, degree)` pairs: same-degree entries are
    /// summed in the catalog and zero classes dropped.
    pub fn from_entries(entries: &[(ClassId, i32)], cat: &Catalog) -> Result<DerivedClass> {
        let mut by_degree: BTreeMap<i32, ClassId> = BTreeMap::new();
        for &(id, deg) in entries {
            cat.entry(id)?;
            let merged = match by_degree.get(&deg) {
                Some(&prev) => cat.direct_sum(prev, id)?,
                None => id,
            };
            by_degree.insert(deg, merged);
        }
        Ok(DerivedClass {
            entries: by_degree
                .into_iter()
                .filter(|&(_, id)| id != cat.zero())
                .map(|(degree, class_id)| DerivedEntry { class_id, degree })
                .collect(),
        })
    }

    pub fn entries(&self) -> &[DerivedEntry] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn at(&self, degree: i32) -> Option<ClassId> {
        self.entries.iter().find(|e| e.degree == degree).map(|e| e.class_id)
    }

    /// `x[k]`.
    pub fn shift(&self, k: i32) -> DerivedClass {
        DerivedClass {
            entries: self
                .entries
                .iter()
                .map(|e| DerivedEntry {
                    class_id: e.class_id,
                    degree: e.degree - k,
                })
                .collect(),
        }
    }

    /// `true` if this is a module sitting in degree 0 (or zero).
    pub fn is_module_stalk(&self) -> bool {
        self.entries.iter().all(|e| e.degree == 0)
    }

    pub fn total_dims(&self, cat: &Catalog) -> Vec<usize> {
        self.entries.iter().fold(vec![0; cat.quiver().vertex_count()], |acc, e| {
            dims_add(&acc, cat.dims(e.class_id).expect("catalog class"))
        })
    }

    pub fn degree_dims(&self, cat: &Catalog) -> BTreeMap<i32, Vec<usize>> {
        self.entries
            .iter()
            .map(|e| (e.degree, cat.dims(e.class_id).expect("catalog class").to_vec()))
            .collect()
    }

    /// Realisation with the catalog representatives and zero differentials.
    pub fn stalk_complex(&self, cat: &Catalog) -> Result<Complex> {
        let q = cat.quiver().clone();
        let p = cat.modulus();
        let Some(first) = self.entries.first() else {
            return Ok(Complex::empty(q, p));
        };
        let lo = first.degree;
        let hi = self.entries.last().expect("nonempty").degree;
        let terms = (lo..=hi)
            .map(|n| match self.at(n) {
                Some(id) => cat.rep(id).cloned(),
                None => Ok(Representation::zero(q.clone(), p)),
            })
            .collect::<Result<_>>()?;
        Ok(Complex::with_zero_differentials(q, p, lo, terms))
    }

    /// Each summand `M` in degree `a` replaced by its two-term projective
    /// resolution in degrees `a - 1, a`.
    pub fn projective_complex(&self, cat: &Catalog) -> Result<Complex> {
        let q = cat.quiver().clone();
        let p = cat.modulus();
        let Some(first) = self.entries.first() else {
            return Ok(Complex::empty(q, p));
        };
        let resolutions: HashMap<i32, Resolution> = self
            .entries
            .iter()
            .map(|e| Ok((e.degree, projective_resolution(cat.rep(e.class_id)?)?)))
            .collect::<Result<_>>()?;
        let zero = Representation::zero(q.clone(), p);
        let p0 = |n: i32| resolutions.get(&n).map_or(&zero, |r| &r.p0);
        let p1 = |n: i32| resolutions.get(&n).map_or(&zero, |r| &r.p1);
        let lo = first.degree - 1;
        let hi = self.entries.last().expect("nonempty").degree;
        let terms: Vec<Representation> = (lo..=hi)
            .map(|n| p0(n).direct_sum(p1(n + 1)))
            .collect::<Result<_>>()?;
        let diffs = (lo..hi)
            .map(|n| {
                let d = resolutions.get(&(n + 1)).map(|r| r.d.clone());
                assemble(
                    &[p0(n), p1(n + 1)],
                    &[p0(n + 1), p1(n + 2)],
                    &[vec![None, d], vec![None, None]],
                )
            })
            .collect();
        Complex::new(q, p, lo, terms, diffs)
    }

    /// The quasi-isomorphism `projective_complex -> stalk_complex` given by the augmentations.
    pub fn augmentation(&self, cat: &Catalog) -> Result<ChainMap> {
        let src = Arc::new(self.projective_complex(cat)?);
        let dst = Arc::new(self.stalk_complex(cat)?);
        let comps = src
            .degrees()
            .map(|n| {
                let (s, t) = (src.term(n), dst.term(n));
                match self.at(n) {
                    Some(id) => {
                        let r = projective_resolution(cat.rep(id)?)?;
                        let zero_p1 = {
                            let next = self.at(n + 1).map(|i| cat.rep(i)).transpose()?;
                            match next {
                                Some(m) => projective_resolution(m)?.p1,
                                None => Representation::zero(cat.quiver().clone(), cat.modulus()),
                            }
                        };
                        Ok(assemble(&[&r.p0, &zero_p1], &[t], &[vec![Some(r.augmentation), None]]))
                    }
                    None => Ok(RepMorphism::zero(s, t)),
                }
            })
            .collect::<Result<_>>()?;
        ChainMap::new(src, dst, comps)
    }
}

/// `0 -> P1 -d-> P0 -aug-> M -> 0`.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub p1: Representation,
    pub p0: Representation,
    pub d: RepMorphism,
    pub augmentation: RepMorphism,
}

/// The standard resolution `0 -> ⊕_{a: i->j} P_j ⊗ M_i -> ⊕_i P_i ⊗ M_i -> M -> 0`,
/// where `P_i` has basis the paths starting at `i`.
pub fn projective_resolution(m: &Representation) -> Result<Resolution> {
    let q = m.quiver().clone();
    let p = m.modulus();
    let nv = q.vertex_count();
    let paths: Vec<Vec<Vec<Vec<usize>>>> = (0..nv).map(|i| q.paths_from(i)).collect::<Result<_>>()?;

    // P0 basis at vertex k: (i, path i->k, r < d_i)
    type Key = (usize, Vec<usize>, usize);
    let mut p0_basis: Vec<Vec<Key>> = vec![Vec::new(); nv];
    for i in 0..nv {
        for k in 0..nv {
            for path in &paths[i][k] {
                for r in 0..m.dims()[i] {
                    p0_basis[k].push((i, path.clone(), r));
                }
            }
        }
    }
    // P1 basis at vertex k: (arrow a: i->j, path j->k, r < d_i)
    let mut p1_basis: Vec<Vec<Key>> = vec![Vec::new(); nv];
    for (a_idx, a) in q.arrows().iter().enumerate() {
        for k in 0..nv {
            for path in &paths[a.dst][k] {
                for r in 0..m.dims()[a.src] {
                    p1_basis[k].push((a_idx, path.clone(), r));
                }
            }
        }
    }
    let index = |basis: &Vec<Vec<Key>>| -> Vec<HashMap<Key, usize>> {
        basis
            .iter()
            .map(|b| b.iter().cloned().enumerate().map(|(n, k)| (k, n)).collect())
            .collect()
    };
    let p0_idx = index(&p0_basis);
    let p1_idx = index(&p1_basis);

    // arrow maps: extend the path by the arrow
    let path_rep = |basis: &Vec<Vec<Key>>, idx: &Vec<HashMap<Key, usize>>| -> Result<Representation> {
        let maps = q
            .arrows()
            .iter()
            .enumerate()
            .map(|(b_idx, b)| {
                let mut mat = FqMatrix::zeros(basis[b.dst].len(), basis[b.src].len(), p);
                for (col, (head, path, r)) in basis[b.src].iter().enumerate() {
                    let mut next = path.clone();
                    next.push(b_idx);
                    let row = idx[b.dst][&(*head, next, *r)];
                    mat.set(row, col, 1);
                }
                mat
            })
            .collect();
        Representation::new(q.clone(), p, basis.iter().map(|b| b.len()).collect(), maps)
    };
    let p0 = path_rep(&p0_basis, &p0_idx)?;
    let p1 = path_rep(&p1_basis, &p1_idx)?;

    let d_maps = (0..nv)
        .map(|k| {
            let mut mat = FqMatrix::zeros(p0_basis[k].len(), p1_basis[k].len(), p);
            for (col, (a_idx, path, r)) in p1_basis[k].iter().enumerate() {
                let a = q.arrows()[*a_idx];
                let mut longer = vec![*a_idx];
                longer.extend_from_slice(path);
                let row = p0_idx[k][&(a.src, longer, *r)];
                mat.set(row, col, (mat.get(row, col) + 1) % p);
                let ma = &m.maps()[*a_idx];
                for s in 0..m.dims()[a.dst] {
                    let coeff = ma.get(s, *r);
                    if coeff == 0 {
                        continue;
                    }
                    let row = p0_idx[k][&(a.dst, path.clone(), s)];
                    mat.set(row, col, (mat.get(row, col) + p - coeff) % p);
                }
            }
            mat
        })
        .collect();
    let d = RepMorphism::new(d_maps);

    let aug_maps = (0..nv)
        .map(|k| {
            let mut mat = FqMatrix::zeros(m.dims()[k], p0_basis[k].len(), p);
            for (col, (i, path, r)) in p0_basis[k].iter().enumerate() {
                let mut v = vec![0u32; m.dims()[*i]];
                v[*r] = 1;
                for &a_idx in path {
                    v = m.maps()[a_idx].mul_vec(&v);
                }
                for (row, &val) in v.iter().enumerate() {
                    mat.set(row, col, val);
                }
            }
            mat
        })
        .collect();
    let augmentation = RepMorphism::new(aug_maps);
    d.validate(&p1, &p0)?;
    augmentation.validate(&p0, m)?;
    Ok(Resolution {
        p1,
        p0,
        d,
        augmentation,
    })
}

fn require_hereditary(cat: &Catalog) -> Result<()> {
    if cat.quiver().is_acyclic() {
        Ok(())
    } else {
        Err(HallError::NotAcyclic)
    }
}

/// Derived class of `c`, or `None` if some `H^n` falls outside the catalog bound.
pub fn try_derived_class_of(c: &Complex, cat: &Catalog) -> Result<Option<DerivedClass>> {
    require_hereditary(cat)?;
    let mut entries = Vec::new();
    for (n, h) in homology(c)? {
        if h.is_zero() {
            continue;
        }
        match cat.try_classify(&h)? {
            Some(id) => entries.push(DerivedEntry { class_id: id, degree: n }),
            None => return Ok(None),
        }
    }
    Ok(Some(DerivedClass { entries }))
}

pub fn derived_class_of(c: &Complex, cat: &Catalog) -> Result<DerivedClass> {
    try_derived_class_of(c, cat)?.ok_or_else(|| {
        HallError::OutOfUniverse(format!(
            "complex has homology beyond catalog bound {:?}",
            cat.bound()
        ))
    })
}

/// Chain maps `X -> Y` modulo null-homotopic ones, with a fixed set of class
/// representatives.
///
/// Chain maps are handled as flat vectors: for each source degree `n` (in
/// order) and vertex `v`, the row-major entries of `f^n_v`.
#[derive(Clone, Debug)]
pub struct ChainHomSpace {
    source: Arc<Complex>,
    target: Arc<Complex>,
    raw_len: usize,
    cycles: Vec<Vec<u32>>,
    boundaries: Vec<Vec<u32>>,
    complement: Vec<Vec<u32>>,
    /// `raw_len x dim`: a cycle `v` has class coordinates `v · coord`.
    coord: FqMatrix,
}

fn flatten_chain(source: &Complex, target: &Complex, comps: &BTreeMap<i32, RepMorphism>) -> Vec<u32> {
    let mut out = Vec::new();
    for n in source.degrees() {
        match comps.get(&n) {
            Some(f) => out.extend(f.flatten()),
            None => {
                let len: usize = source
                    .term(n)
                    .dims()
                    .iter()
                    .zip(target.term(n).dims())
                    .map(|(a, b)| a * b)
                    .sum();
                out.extend(std::iter::repeat_n(0, len));
            }
        }
    }
    out
}

impl ChainHomSpace {
    pub fn new(source: Arc<Complex>, target: Arc<Complex>) -> Result<ChainHomSpace> {
        source.term(0).same_context(target.term(0))?;
        let p = source.modulus();
        let degrees: Vec<i32> = source.degrees().collect();
        let raw_len: usize = degrees
            .iter()
            .map(|&n| {
                source
                    .term(n)
                    .dims()
                    .iter()
                    .zip(target.term(n).dims())
                    .map(|(a, b)| a * b)
                    .sum::<usize>()
            })
            .sum();

        // unknowns: Hom(X^n, Y^n) coordinates for each source degree
        let homs: Vec<(i32, crate::hom::HomBasis)> = degrees
            .iter()
            .map(|&n| Ok((n, hom_basis(source.term(n), target.term(n))?)))
            .collect::<Result<_>>()?;
        let unknowns: Vec<(i32, RepMorphism)> = homs
            .iter()
            .flat_map(|(n, hb)| hb.basis().iter().map(move |b| (*n, b.clone())))
            .collect();

        // residual of d_Y f - f d_X, flattened over m in [lo - 1, hi] as maps X^m -> Y^{m+1}
        let eq_lo = source.lo() - 1;
        let eq_hi = source.hi();
        let residual = |n: i32, f: &RepMorphism| -> Vec<u32> {
            let mut comps: BTreeMap<i32, RepMorphism> = BTreeMap::new();
            comps.insert(n, target.differential(n).compose(f));
            let prev = f.compose(&source.differential(n - 1)).neg();
            comps.insert(n - 1, prev);
            let mut out = Vec::new();
            for m in eq_lo..=eq_hi {
                match comps.get(&m) {
                    Some(g) => out.extend(g.flatten()),
                    None => {
                        let len: usize = source
                            .term(m)
                            .dims()
                            .iter()
                            .zip(target.term(m + 1).dims())
                            .map(|(a, b)| a * b)
                            .sum();
                        out.extend(std::iter::repeat_n(0, len));
                    }
                }
            }
            out
        };
        let cols: Vec<Vec<u32>> = unknowns.iter().map(|(n, b)| residual(*n, b)).collect();
        let eq_rows = cols.first().map_or(0, |c| c.len());
        let mut sys = FqMatrix::zeros(eq_rows, unknowns.len(), p);
        for (j, col) in cols.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                sys.set(i, j, v);
            }
        }
        let kernel = rref_rank_kernel(&sys).kernel;
        let raw_of_unknown: Vec<Vec<u32>> = unknowns
            .iter()
            .map(|(n, b)| {
                let mut comps = BTreeMap::new();
                comps.insert(*n, b.clone());
                flatten_chain(&source, &target, &comps)
            })
            .collect();
        let combine = |coeffs: &[u32]| -> Vec<u32> {
            let mut acc = vec![0u32; raw_len];
            for (c, v) in coeffs.iter().zip(&raw_of_unknown) {
                if *c == 0 {
                    continue;
                }
                for (a, &x) in acc.iter_mut().zip(v) {
                    *a = (*a + mul_mod(*c, x, p)) % p;
                }
            }
            acc
        };
        let cycles: Vec<Vec<u32>> = (0..kernel.rows()).map(|r| combine(kernel.row(r))).collect();

        // null-homotopic maps: h^n: X^n -> Y^{n-1} contributes d_Y h^n to f^n and h^n d_X to f^{n-1}
        let mut boundaries = Vec::new();
        for n in source.lo()..=source.hi() {
            let hb = hom_basis(source.term(n), target.term(n - 1))?;
            for h in hb.basis() {
                let mut comps = BTreeMap::new();
                comps.insert(n, target.differential(n - 1).compose(h));
                comps.insert(n - 1, h.compose(&source.differential(n - 1)));
                boundaries.push(flatten_chain(&source, &target, &comps));
            }
        }
        let bmat = FqMatrix::from_row_vectors(&boundaries, raw_len, p).row_space();
        let zmat = FqMatrix::from_row_vectors(&cycles, raw_len, p);
        let comp = extend_rows(&bmat, &zmat);
        let bc = bmat.vstack(&comp);
        let rest = extend_rows(&bc, &FqMatrix::identity(raw_len, p));
        let full = bc.vstack(&rest);
        let inv = full.inverse().expect("extended basis");
        let coord = inv.block(0, bmat.rows(), raw_len, comp.rows());
        let complement = (0..comp.rows()).map(|r| comp.row(r).to_vec()).collect();
        let boundaries = (0..bmat.rows()).map(|r| bmat.row(r).to_vec()).collect();
        Ok(ChainHomSpace {
            source,
            target,
            raw_len,
            cycles,
            boundaries,
            complement,
            coord,
        })
    }

    pub fn source(&self) -> &Arc<Complex> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Complex> {
        &self.target
    }

    pub fn modulus(&self) -> u32 {
        self.source.modulus()
    }

    /// Dimension of chain maps modulo homotopy.
    pub fn dim(&self) -> usize {
        self.complement.len()
    }

    pub fn class_count(&self) -> Option<u64> {
        checked_power(self.modulus(), self.dim())
    }

    pub fn checked_class_count(&self, cap: u64) -> Result<u64> {
        self.class_count()
            .filter(|&n| n <= cap)
            .ok_or_else(|| HallError::cap("enumerating Hom classes", format!("{}^{}", self.modulus(), self.dim()), cap))
    }

    pub fn cycle_basis(&self) -> &[Vec<u32>] {
        &self.cycles
    }

    pub fn boundary_basis(&self) -> &[Vec<u32>] {
        &self.boundaries
    }

    pub fn raw_len(&self) -> usize {
        self.raw_len
    }

    pub fn chain_map(&self, raw: &[u32]) -> ChainMap {
        let mut off = 0;
        let comps = self
            .source
            .degrees()
            .map(|n| {
                let (x, y) = (self.source.term(n), self.target.term(n));
                let len: usize = x.dims().iter().zip(y.dims()).map(|(a, b)| a * b).sum();
                let f = RepMorphism::unflatten(x, y, &raw[off..off + len]);
                off += len;
                f
            })
            .collect();
        ChainMap {
            source: self.source.clone(),
            target: self.target.clone(),
            comps,
        }
    }

    pub fn raw(&self, f: &ChainMap) -> Vec<u32> {
        let comps: BTreeMap<i32, RepMorphism> = self.source.degrees().map(|n| (n, f.component(n))).collect();
        flatten_chain(&self.source, &self.target, &comps)
    }

    /// Linear combination of raw basis vectors.
    pub fn combine(&self, coeffs: &[u32], basis: &[Vec<u32>]) -> Vec<u32> {
        let p = self.modulus();
        let mut acc = vec![0u32; self.raw_len];
        for (c, v) in coeffs.iter().zip(basis) {
            if *c == 0 {
                continue;
            }
            for (a, &x) in acc.iter_mut().zip(v) {
                *a = (*a + mul_mod(*c, x, p)) % p;
            }
        }
        acc
    }

    /// The fixed representative of class number `index`.
    pub fn representative(&self, index: u64) -> ChainMap {
        let coeffs = digits(index, self.dim(), self.modulus());
        self.chain_map(&self.combine(&coeffs, &self.complement))
    }

    pub fn class_coords(&self, f: &ChainMap) -> Vec<u32> {
        let raw = self.raw(f);
        let row = FqMatrix::from_row_vectors(&[raw], self.raw_len, self.modulus());
        row.mul(&self.coord).row(0).to_vec()
    }

    /// Index of the class of a chain map `X -> Y`.
    pub fn class_index(&self, f: &ChainMap) -> u64 {
        undigits(&self.class_coords(f), self.modulus())
    }
}

/// `Hom_D(x, z)`: chain maps from the projective realisation of `x` to the
/// stalk realisation of `z`, modulo homotopy.
pub fn hom_classes(x: &DerivedClass, z: &DerivedClass, cat: &Catalog) -> Result<ChainHomSpace> {
    require_hereditary(cat)?;
    ChainHomSpace::new(Arc::new(x.projective_complex(cat)?), Arc::new(z.stalk_complex(cat)?))
}

/// `dim Hom_D(x, z[i])`.
pub fn ext_dim(x: &DerivedClass, z: &DerivedClass, i: i32, cat: &Catalog) -> Result<usize> {
    Ok(hom_classes(x, &z.shift(i), cat)?.dim())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::{hom_basis, is_isomorphic};

    fn a2(p: u32, bound: usize) -> Catalog {
        Catalog::build(Arc::new(Quiver::linear(2)), p, vec![bound, bound]).unwrap()
    }

    fn class(cat: &Catalog, dims: &[usize], k: usize) -> ClassId {
        cat.classes_with_dims(dims)[k]
    }

    #[test]
    fn resolution_is_exact() {
        let cat = a2(2, 2);
        for e in cat.entries() {
            let r = projective_resolution(&e.rep).unwrap();
            assert!(r.d.is_injective());
            assert!(r.augmentation.is_surjective());
            assert_eq!(image_spaces(&r.d), kernel_spaces(&r.augmentation));
        }
    }

    #[test]
    fn stalk_homology() {
        let cat = a2(2, 1);
        let m = cat.rep(class(&cat, &[1, 1], 1)).unwrap().clone();
        let c = Complex::stalk(m.clone(), 0);
        let h = homology(&c).unwrap();
        assert_eq!(h.len(), 1);
        assert!(is_isomorphic(&h[0].1, &m, 1000).unwrap());
    }

    #[test]
    fn identity_complex_is_exact() {
        let cat = a2(2, 1);
        let m = cat.rep(class(&cat, &[1, 1], 1)).unwrap().clone();
        let c = Complex::new(
            cat.quiver().clone(),
            2,
            -1,
            vec![m.clone(), m.clone()],
            vec![RepMorphism::identity(&m)],
        )
        .unwrap();
        assert!(homology(&c).unwrap().iter().all(|(_, h)| h.is_zero()));
        assert!(derived_class_of(&c, &cat).unwrap().is_zero());
    }

    #[test]
    fn inclusion_s2_into_p1() {
        let cat = a2(2, 1);
        let s1 = class(&cat, &[1, 0], 0);
        let s2 = cat.rep(class(&cat, &[0, 1], 0)).unwrap().clone();
        let p1 = cat.rep(class(&cat, &[1, 1], 1)).unwrap().clone();
        let inc = hom_basis(&s2, &p1).unwrap().basis()[0].clone();
        let c = Complex::new(cat.quiver().clone(), 2, -1, vec![s2, p1], vec![inc]).unwrap();
        let d = derived_class_of(&c, &cat).unwrap();
        assert_eq!(d, DerivedClass::stalk(s1, 0, &cat));
    }

    #[test]
    fn d_squared_rejected() {
        let cat = a2(2, 1);
        let m = cat.rep(class(&cat, &[1, 0], 0)).unwrap().clone();
        let id = RepMorphism::identity(&m);
        let err = Complex::new(cat.quiver().clone(), 2, 0, vec![m.clone(), m.clone(), m], vec![id.clone(), id]);
        assert!(matches!(err, Err(HallError::MalformedComplex(_))));
    }

    #[test]
    fn shift_convention() {
        let cat = a2(2, 1);
        let s1 = class(&cat, &[1, 0], 0);
        let x = DerivedClass::stalk(s1, 0, &cat);
        assert_eq!(x.shift(1), DerivedClass::stalk(s1, -1, &cat));
        let c = x.stalk_complex(&cat).unwrap().shift(1);
        assert_eq!(derived_class_of(&c, &cat).unwrap(), x.shift(1));
    }

    #[test]
    fn cone_of_zero_map_splits() {
        let cat = a2(2, 1);
        let m = class(&cat, &[1, 0], 0);
        let n = class(&cat, &[1, 1], 1);
        let x = Arc::new(DerivedClass::stalk(m, 0, &cat).stalk_complex(&cat).unwrap());
        let z = Arc::new(DerivedClass::stalk(n, 0, &cat).stalk_complex(&cat).unwrap());
        let cone = mapping_cone(&ChainMap::zero(x, z)).unwrap();
        let expected = DerivedClass::from_entries(&[(m, -1), (n, 0)], &cat).unwrap();
        assert_eq!(derived_class_of(&cone, &cat).unwrap(), expected);
    }

    #[test]
    fn cone_of_identity_vanishes() {
        let cat = a2(2, 1);
        let x = DerivedClass::from_entries(&[(class(&cat, &[1, 0], 0), 0), (class(&cat, &[0, 1], 0), 1)], &cat).unwrap();
        let c = Arc::new(x.projective_complex(&cat).unwrap());
        let cone = mapping_cone(&ChainMap::identity(c)).unwrap();
        assert!(derived_class_of(&cone, &cat).unwrap().is_zero());
    }

    #[test]
    fn augmentation_is_quasi_iso() {
        let cat = a2(2, 2);
        for id in cat.ids() {
            let x = DerivedClass::from_entries(&[(id, 0), (class(&cat, &[0, 1], 0), -1)], &cat).unwrap();
            let aug = x.augmentation(&cat).unwrap();
            let cone = mapping_cone(&aug).unwrap();
            assert!(derived_class_of(&cone, &cat).unwrap().is_zero());
            assert_eq!(derived_class_of(&x.projective_complex(&cat).unwrap(), &cat).unwrap(), x);
        }
    }

    #[test]
    fn hom_classes_examples() {
        let a1 = Catalog::build(Arc::new(Quiver::a1()), 2, vec![1]).unwrap();
        let v1 = DerivedClass::stalk(ClassId(1), 0, &a1);
        let hs = hom_classes(&v1, &v1.shift(-1), &a1).unwrap();
        assert_eq!(hs.dim(), 0);
        let hs = hom_classes(&v1, &v1, &a1).unwrap();
        assert_eq!(hs.dim(), 1);

        let cat = a2(2, 1);
        let s1 = DerivedClass::stalk(class(&cat, &[1, 0], 0), 0, &cat);
        let s2 = DerivedClass::stalk(class(&cat, &[0, 1], 0), 0, &cat);
        let hs = hom_classes(&s1, &s2.shift(1), &cat).unwrap();
        assert_eq!(hs.class_count(), Some(2));
        for i in 0..2 {
            hs.representative(i).validate().unwrap();
            assert_eq!(hs.class_index(&hs.representative(i)), i);
        }
    }

    #[test]
    fn ext_dims_of_modules() {
        let cat = a2(2, 2);
        for x in cat.ids() {
            for z in cat.ids() {
                let dx = DerivedClass::stalk(x, 0, &cat);
                let dz = DerivedClass::stalk(z, 0, &cat);
                assert_eq!(ext_dim(&dx, &dz, 0, &cat).unwrap(), cat.hom_dim(x, z).unwrap());
                assert_eq!(ext_dim(&dx, &dz, 1, &cat).unwrap(), cat.ext1_dim(x, z).unwrap());
                assert_eq!(ext_dim(&dx, &dz, -1, &cat).unwrap(), 0);
                assert_eq!(ext_dim(&dx, &dz, 2, &cat).unwrap(), 0);
            }
        }
    }

    #[test]
    fn json_shape() {
        let cat = a2(2, 1);
        let x = DerivedClass::from_entries(&[(ClassId(1), -1), (ClassId(2), 0)], &cat).unwrap();
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"[{"class_id":1,"degree":-1},{"class_id":2,"degree":0}]"#);
    }

    #[test]
    fn cyclic_quiver_rejected() {
        let q = Arc::new(Quiver::new(1, vec![crate::quiver::Arrow { src: 0, dst: 0 }]).unwrap());
        let cat = Catalog::build(q, 2, vec![1]).unwrap();
        let x = DerivedClass::stalk(ClassId(1), 0, &cat);
        assert!(matches!(hom_classes(&x, &x, &cat), Err(HallError::NotAcyclic)));
    }
}
