//! Bounded catalog of isomorphism classes of representations.
//!
//! Built by scanning every arrow-matrix tuple for each dimension vector in
//! lexicographic order; the first tuple met in an orbit is its canonical
//! representative.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{HallError, Result};
use crate::fq::{check_prime, checked_power, digits, FqMatrix};
use crate::hom::{aut_order, ext1_dim_reps, find_isomorphism, hom_dim, DEFAULT_ENUMERATION_CAP};
use crate::quiver::{Quiver, Representation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClassId(pub usize);

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

#[derive(Debug)]
pub struct CatalogEntry {
    pub id: ClassId,
    pub rep: Representation,
    pub indecomposable: bool,
    /// `dim Hom(I, -)` over the catalog's indecomposables, in id order.
    pub fingerprint: Vec<usize>,
    aut: OnceLock<u64>,
}

impl CatalogEntry {
    pub fn dims(&self) -> &[usize] {
        self.rep.dims()
    }
}

#[derive(Debug)]
pub struct Catalog {
    quiver: Arc<Quiver>,
    modulus: u32,
    bound: Vec<usize>,
    cap: u64,
    entries: Vec<CatalogEntry>,
    by_dims: BTreeMap<Vec<usize>, Vec<ClassId>>,
    indecomposables: Vec<ClassId>,
    hom_dims: Vec<Vec<usize>>,
    ext1_dims: Vec<Vec<usize>>,
}

/// Every dimension vector `<= bound`, ordered by total dimension then lexicographically.
pub fn dim_vectors_up_to(bound: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &b in bound {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<usize>| {
                (0..=b).map(move |d| {
                    let mut v = prefix.clone();
                    v.push(d);
                    v
                })
            })
            .collect();
    }
    out.sort_by_key(|v| (v.iter().sum::<usize>(), v.clone()));
    out
}

pub fn dims_le(a: &[usize], b: &[usize]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn dims_add(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

impl Catalog {
    pub fn build(quiver: Arc<Quiver>, modulus: u32, bound: Vec<usize>) -> Result<Catalog> {
        Self::build_with_cap(quiver, modulus, bound, DEFAULT_ENUMERATION_CAP)
    }

    pub fn build_with_cap(quiver: Arc<Quiver>, modulus: u32, bound: Vec<usize>, cap: u64) -> Result<Catalog> {
        check_prime(modulus)?;
        if bound.len() != quiver.vertex_count() {
            return Err(HallError::DimensionMismatch(format!(
                "bound has {} entries for {} vertices",
                bound.len(),
                quiver.vertex_count()
            )));
        }
        let mut reps: Vec<Representation> = Vec::new();
        let mut by_dims: BTreeMap<Vec<usize>, Vec<ClassId>> = BTreeMap::new();
        for dims in dim_vectors_up_to(&bound) {
            let shapes: Vec<(usize, usize)> = quiver
                .arrows()
                .iter()
                .map(|a| (dims[a.dst], dims[a.src]))
                .collect();
            let slots: usize = shapes.iter().map(|(r, c)| r * c).sum();
            let count = checked_power(modulus, slots)
                .filter(|&n| n <= cap)
                .ok_or_else(|| HallError::cap("scanning arrow matrices", format!("{modulus}^{slots}"), cap))?;
            let mut classes: Vec<ClassId> = Vec::new();
            for idx in 0..count {
                let entries = digits(idx, slots, modulus);
                let mut off = 0;
                let maps = shapes
                    .iter()
                    .map(|&(r, c)| {
                        let m = FqMatrix::from_vec(r, c, modulus, entries[off..off + r * c].to_vec())
                            .expect("shape");
                        off += r * c;
                        m
                    })
                    .collect();
                let cand = Representation::new(quiver.clone(), modulus, dims.clone(), maps)?;
                let mut known = false;
                for id in &classes {
                    if find_isomorphism(&reps[id.0], &cand, cap)?.is_some() {
                        known = true;
                        break;
                    }
                }
                if !known {
                    let id = ClassId(reps.len());
                    reps.push(cand);
                    classes.push(id);
                }
            }
            by_dims.insert(dims, classes);
        }

        let n = reps.len();
        let mut indecomposable = vec![false; n];
        for (i, x) in reps.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let mut split = false;
            'search: for a in 1..n {
                if reps[a].is_zero() || !dims_le(reps[a].dims(), x.dims()) || a == i {
                    continue;
                }
                let rest: Vec<usize> = x.dims().iter().zip(reps[a].dims()).map(|(p, q)| p - q).collect();
                for b in by_dims.get(&rest).into_iter().flatten() {
                    if reps[b.0].is_zero() {
                        continue;
                    }
                    let sum = reps[a].direct_sum(&reps[b.0])?;
                    if find_isomorphism(&sum, x, cap)?.is_some() {
                        split = true;
                        break 'search;
                    }
                }
            }
            indecomposable[i] = !split;
        }
        let indecomposables: Vec<ClassId> = (0..n).filter(|&i| indecomposable[i]).map(ClassId).collect();

        let mut hom_dims = vec![vec![0; n]; n];
        let mut ext1_dims = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..n {
                hom_dims[i][j] = hom_dim(&reps[i], &reps[j])?;
                ext1_dims[i][j] = ext1_dim_reps(&reps[i], &reps[j])?;
            }
        }
        let entries = reps
            .into_iter()
            .enumerate()
            .map(|(i, rep)| CatalogEntry {
                id: ClassId(i),
                fingerprint: indecomposables.iter().map(|k| hom_dims[k.0][i]).collect(),
                rep,
                indecomposable: indecomposable[i],
                aut: OnceLock::new(),
            })
            .collect();
        Ok(Catalog {
            quiver,
            modulus,
            bound,
            cap,
            entries,
            by_dims,
            indecomposables,
            hom_dims,
            ext1_dims,
        })
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn bound(&self) -> &[usize] {
        &self.bound
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = ClassId> + '_ {
        (0..self.entries.len()).map(ClassId)
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn entry(&self, id: ClassId) -> Result<&CatalogEntry> {
        self.entries.get(id.0).ok_or(HallError::UnknownClass(id.0))
    }

    pub fn rep(&self, id: ClassId) -> Result<&Representation> {
        Ok(&self.entry(id)?.rep)
    }

    pub fn dims(&self, id: ClassId) -> Result<&[usize]> {
        Ok(self.entry(id)?.dims())
    }

    pub fn zero(&self) -> ClassId {
        ClassId(0)
    }

    pub fn indecomposables(&self) -> &[ClassId] {
        &self.indecomposables
    }

    pub fn classes_with_dims(&self, dims: &[usize]) -> &[ClassId] {
        self.by_dims.get(dims).map_or(&[], |v| v.as_slice())
    }

    /// `|Aut(x)|`, enumerated on first use and cached.
    pub fn aut_order(&self, id: ClassId) -> Result<u64> {
        let e = self.entry(id)?;
        if let Some(&v) = e.aut.get() {
            return Ok(v);
        }
        let v = aut_order(&e.rep, self.cap)?;
        Ok(*e.aut.get_or_init(|| v))
    }

    pub fn hom_dim(&self, x: ClassId, y: ClassId) -> Result<usize> {
        self.entry(x)?;
        self.entry(y)?;
        Ok(self.hom_dims[x.0][y.0])
    }

    pub fn ext1_dim(&self, x: ClassId, y: ClassId) -> Result<usize> {
        self.entry(x)?;
        self.entry(y)?;
        Ok(self.ext1_dims[x.0][y.0])
    }

    pub fn fingerprint_of(&self, rep: &Representation) -> Result<Vec<usize>> {
        self.indecomposables
            .iter()
            .map(|k| hom_dim(&self.entries[k.0].rep, rep))
            .collect()
    }

    /// The catalog class of `rep`. Fails if `rep` lies outside the bound.
    pub fn classify(&self, rep: &Representation) -> Result<ClassId> {
        self.try_classify(rep)?.ok_or_else(|| {
            HallError::OutOfUniverse(format!(
                "dimension vector {:?} exceeds catalog bound {:?}",
                rep.dims(),
                self.bound
            ))
        })
    }

    /// `Ok(None)` if `rep` is outside the bound.
    pub fn try_classify(&self, rep: &Representation) -> Result<Option<ClassId>> {
        if rep.modulus() != self.modulus || **rep.quiver() != *self.quiver {
            return Err(HallError::ContextMismatch);
        }
        if !dims_le(rep.dims(), &self.bound) {
            return Ok(None);
        }
        let cands = self.classes_with_dims(rep.dims());
        if cands.len() == 1 {
            return Ok(Some(cands[0]));
        }
        let fp = self.fingerprint_of(rep)?;
        for id in cands {
            let e = &self.entries[id.0];
            if e.fingerprint == fp && find_isomorphism(&e.rep, rep, self.cap)?.is_some() {
                return Ok(Some(*id));
            }
        }
        Err(HallError::OutOfUniverse(format!(
            "representation with dims {:?} matches no catalog class",
            rep.dims()
        )))
    }

    pub fn direct_sum(&self, a: ClassId, b: ClassId) -> Result<ClassId> {
        let sum = self.rep(a)?.direct_sum(self.rep(b)?)?;
        self.classify(&sum)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::is_isomorphic;

    #[test]
    fn a1_catalog() {
        let c = Catalog::build(Arc::new(Quiver::a1()), 2, vec![2]).unwrap();
        assert_eq!(c.len(), 3);
        let auts: Vec<u64> = c.ids().map(|i| c.aut_order(i).unwrap()).collect();
        assert_eq!(auts, vec![1, 1, 6]);
        assert_eq!(c.indecomposables(), &[ClassId(1)]);
    }

    #[test]
    fn a2_catalog_small() {
        let c = Catalog::build(Arc::new(Quiver::linear(2)), 2, vec![1, 1]).unwrap();
        assert_eq!(c.len(), 5);
        let (s1, s2) = (c.classes_with_dims(&[1, 0])[0], c.classes_with_dims(&[0, 1])[0]);
        let top = c.classes_with_dims(&[1, 1]);
        assert_eq!(top.len(), 2);
        // the lexicographically least tuple is the zero map: S_1 ⊕ S_2
        assert_eq!(c.rep(top[0]).unwrap().maps()[0].get(0, 0), 0);
        assert!(!c.entry(top[0]).unwrap().indecomposable);
        assert!(c.entry(top[1]).unwrap().indecomposable);
        assert_eq!(c.direct_sum(s1, s2).unwrap(), top[0]);
        assert_eq!(c.ext1_dim(s1, s2).unwrap(), 1);
        assert_eq!(c.ext1_dim(s2, s1).unwrap(), 0);
        assert_eq!(c.ext1_dim(top[1], s2).unwrap(), 0);
    }

    #[test]
    fn zero_bound() {
        let c = Catalog::build(Arc::new(Quiver::linear(3)), 3, vec![0, 0, 0]).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.aut_order(c.zero()).unwrap(), 1);
    }

    #[test]
    fn unknown_and_out_of_bound() {
        let c = Catalog::build(Arc::new(Quiver::a1()), 2, vec![1]).unwrap();
        assert!(matches!(c.ext1_dim(ClassId(9), ClassId(0)), Err(HallError::UnknownClass(9))));
        let big = Representation::semisimple(Arc::new(Quiver::a1()), 2, vec![2]);
        assert!(matches!(c.classify(&big), Err(HallError::OutOfUniverse(_))));
    }

    #[test]
    fn fingerprints_separate_classes_a2() {
        for p in [2, 3] {
            let c = Catalog::build(Arc::new(Quiver::linear(2)), p, vec![2, 2]).unwrap();
            for a in c.entries() {
                for b in c.entries() {
                    let iso = is_isomorphic(&a.rep, &b.rep, c.cap()).unwrap();
                    assert_eq!(iso, a.id == b.id);
                    assert_eq!(a.fingerprint == b.fingerprint, a.id == b.id);
                }
            }
        }
    }

    #[test]
    fn euler_form_identity() {
        let c = Catalog::build(Arc::new(Quiver::linear(2)), 2, vec![2, 2]).unwrap();
        for x in c.ids() {
            for y in c.ids() {
                let lhs = c.hom_dim(x, y).unwrap() as i64 - c.ext1_dim(x, y).unwrap() as i64;
                let rhs = c.quiver().euler_form(c.dims(x).unwrap(), c.dims(y).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }
}
