//! Hom spaces, automorphism groups, kernels, cokernels and subrepresentations.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::{HallError, Result};
use crate::fq::{
    checked_power, digits, enumerate_all_subspaces, free_columns, mul_mod, rref_rank_kernel,
    FqMatrix, FqSubspace,
};
use crate::quiver::{RepMorphism, Representation};

/// Default bound on exhaustive candidate enumeration.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

/// A basis of `Hom(x, y)` read off the intertwining system.
///
/// Coordinates of a morphism are its entries at `free` (flattened layout),
/// because every basis vector is 1 at its own free position and 0 at the others.
#[derive(Clone, Debug)]
pub struct HomBasis {
    source: Representation,
    target: Representation,
    basis: Vec<RepMorphism>,
    flat: Vec<Vec<u32>>,
    free: Vec<usize>,
}

impl HomBasis {
    pub fn source(&self) -> &Representation {
        &self.source
    }

    pub fn target(&self) -> &Representation {
        &self.target
    }

    pub fn basis(&self) -> &[RepMorphism] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `|Hom(x, y)|`, if it fits in a `u64`.
    pub fn cardinality(&self) -> Option<u64> {
        checked_power(self.source.modulus(), self.dim())
    }

    pub fn coords(&self, f: &RepMorphism) -> Vec<u32> {
        let flat = f.flatten();
        self.free.iter().map(|&i| flat[i]).collect()
    }

    pub fn index_of(&self, f: &RepMorphism) -> u64 {
        crate::fq::undigits(&self.coords(f), self.source.modulus())
    }

    pub fn combine(&self, coeffs: &[u32]) -> RepMorphism {
        let p = self.source.modulus();
        let len: usize = self.free_len();
        let mut acc = vec![0u32; len];
        for (c, b) in coeffs.iter().zip(&self.flat) {
            if *c == 0 {
                continue;
            }
            for (a, &v) in acc.iter_mut().zip(b) {
                *a = ((*a as u64 + mul_mod(*c, v, p) as u64) % p as u64) as u32;
            }
        }
        RepMorphism::unflatten(&self.source, &self.target, &acc)
    }

    fn free_len(&self) -> usize {
        self.source
            .dims()
            .iter()
            .zip(self.target.dims())
            .map(|(a, b)| a * b)
            .sum()
    }

    /// The element with base-`p` coordinate digits given by `index`.
    pub fn element(&self, index: u64) -> RepMorphism {
        self.combine(&digits(index, self.dim(), self.source.modulus()))
    }

    /// Iterates every element of `Hom(x, y)`; fails if there are more than `cap`.
    pub fn elements(&self, cap: u64) -> Result<impl Iterator<Item = RepMorphism> + '_> {
        let count = self.checked_count(cap, "enumerating a Hom space")?;
        Ok((0..count).map(move |i| self.element(i)))
    }

    pub fn checked_count(&self, cap: u64, what: &str) -> Result<u64> {
        match self.cardinality() {
            Some(n) if n <= cap => Ok(n),
            _ => Err(HallError::cap(
                what,
                format!("{}^{}", self.source.modulus(), self.dim()),
                cap,
            )),
        }
    }
}

/// Builds the matrix of the linear map `f -> (f_dst x_a - y_a f_src)_a` on
/// flattened vertex maps.
fn intertwining_system(x: &Representation, y: &Representation) -> FqMatrix {
    let p = x.modulus();
    let nv = x.dims().len();
    let mut offsets = Vec::with_capacity(nv);
    let mut n = 0;
    for v in 0..nv {
        offsets.push(n);
        n += x.dims()[v] * y.dims()[v];
    }
    let arrows = x.quiver().arrows();
    let rows: usize = arrows.iter().map(|a| y.dims()[a.dst] * x.dims()[a.src]).sum();
    let mut m = FqMatrix::zeros(rows, n, p);
    let mut row = 0;
    for (k, a) in arrows.iter().enumerate() {
        let (s, t) = (a.src, a.dst);
        let xa = &x.maps()[k];
        let ya = &y.maps()[k];
        let (dxs, dxt, dys, dyt) = (x.dims()[s], x.dims()[t], y.dims()[s], y.dims()[t]);
        for r in 0..dyt {
            for c in 0..dxs {
                // (f_t x_a)[r][c] = sum_k f_t[r][k] x_a[k][c]
                for kk in 0..dxt {
                    let col = offsets[t] + r * dxt + kk;
                    let v = (m.get(row, col) + xa.get(kk, c)) % p;
                    m.set(row, col, v);
                }
                // -(y_a f_s)[r][c] = -sum_k y_a[r][k] f_s[k][c]
                for kk in 0..dys {
                    let col = offsets[s] + kk * dxs + c;
                    let v = (m.get(row, col) + p - ya.get(r, kk)) % p;
                    m.set(row, col, v);
                }
                row += 1;
            }
        }
    }
    m
}

/// A basis of `Hom(x, y)`.
pub fn hom_basis(x: &Representation, y: &Representation) -> Result<HomBasis> {
    x.same_context(y)?;
    let sys = intertwining_system(x, y);
    let red = rref_rank_kernel(&sys);
    let free = free_columns(&red);
    let flat: Vec<Vec<u32>> = (0..red.kernel.rows()).map(|r| red.kernel.row(r).to_vec()).collect();
    let basis = flat.iter().map(|v| RepMorphism::unflatten(x, y, v)).collect();
    Ok(HomBasis {
        source: x.clone(),
        target: y.clone(),
        basis,
        flat,
        free,
    })
}

pub fn hom_dim(x: &Representation, y: &Representation) -> Result<usize> {
    x.same_context(y)?;
    let sys = intertwining_system(x, y);
    Ok(sys.cols() - sys.rank())
}

/// `dim Ext^1(x, y)` as the cokernel of `⊕_i Hom(x_i, y_i) -> ⊕_{a: i->j} Hom(x_i, y_j)`,
/// i.e. `Hom(-, y)` applied to the standard two-term projective resolution of `x`.
pub fn ext1_dim_reps(x: &Representation, y: &Representation) -> Result<usize> {
    x.same_context(y)?;
    let sys = intertwining_system(x, y);
    Ok(sys.rows() - sys.rank())
}

/// All automorphisms of `x`, in enumeration order of `End(x)`.
pub fn automorphisms(x: &Representation, cap: u64) -> Result<Vec<RepMorphism>> {
    let end = hom_basis(x, x)?;
    let out = end.elements(cap)?.filter(|f| f.is_invertible()).collect();
    Ok(out)
}

/// `|Aut(x)|` by exhaustive enumeration of `End(x)`.
pub fn aut_order(x: &Representation, cap: u64) -> Result<u64> {
    let end = hom_basis(x, x)?;
    let n = end.elements(cap)?.filter(|f| f.is_invertible()).count() as u64;
    Ok(n)
}

/// A subquotient `W / U` of a representation, with the maps relating it to the ambient one.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub rep: Representation,
    /// Per vertex `ambient x m`: columns are chosen lifts of the basis of `W / U`.
    pub lift: Vec<FqMatrix>,
    /// Per vertex `m x ambient`: on `W`, reads off coordinates in `W / U`; kills `U`.
    pub project: Vec<FqMatrix>,
}

/// Rows of `candidates` that extend the row space of `current`, chosen greedily.
pub(crate) fn extend_rows(current: &FqMatrix, candidates: &FqMatrix) -> FqMatrix {
    let mut acc = current.clone();
    let mut rank = acc.rank();
    let mut picked = FqMatrix::zeros(0, candidates.cols(), candidates.modulus());
    for r in 0..candidates.rows() {
        let row = candidates.block(r, 0, 1, candidates.cols());
        let next = acc.vstack(&row);
        let nr = next.rank();
        if nr > rank {
            acc = next;
            rank = nr;
            picked = picked.vstack(&row);
        }
    }
    picked
}

/// Builds `upper / lower` where both are arrow-closed per-vertex subspaces with
/// `lower ⊆ upper`.
pub fn subquotient(v: &Representation, upper: &[FqSubspace], lower: &[FqSubspace]) -> Result<Subquotient> {
    let p = v.modulus();
    let nv = v.dims().len();
    if upper.len() != nv || lower.len() != nv {
        return Err(HallError::DimensionMismatch("one subspace per vertex required".into()));
    }
    let mut lift = Vec::with_capacity(nv);
    let mut project = Vec::with_capacity(nv);
    let mut dims = Vec::with_capacity(nv);
    for i in 0..nv {
        let n = v.dims()[i];
        let (u, w) = (&lower[i], &upper[i]);
        if u.ambient_dim() != n || w.ambient_dim() != n || !w.contains_subspace(u) {
            return Err(HallError::DimensionMismatch(format!(
                "vertex {i}: lower subspace is not contained in upper"
            )));
        }
        let c = extend_rows(u.basis(), w.basis());
        let uc = u.basis().vstack(&c);
        let e = extend_rows(&uc, &FqMatrix::identity(n, p));
        let full = uc.vstack(&e);
        let inv = full.inverse().expect("extended basis is invertible");
        let m = c.rows();
        lift.push(c.transpose());
        project.push(inv.block(0, u.dim(), n, m).transpose());
        dims.push(m);
    }
    let maps = v
        .quiver()
        .arrows()
        .iter()
        .enumerate()
        .map(|(k, a)| project[a.dst].mul(&v.maps()[k]).mul(&lift[a.src]))
        .collect();
    let rep = Representation::new(v.quiver().clone(), p, dims, maps)?;
    Ok(Subquotient { rep, lift, project })
}

/// Per-vertex image of `f`, as subspaces of the target.
pub fn image_spaces(f: &RepMorphism) -> Vec<FqSubspace> {
    f.maps().iter().map(|m| FqSubspace::span(&m.transpose())).collect()
}

/// Per-vertex kernel of `f`, as subspaces of the source.
pub fn kernel_spaces(f: &RepMorphism) -> Vec<FqSubspace> {
    f.maps()
        .iter()
        .map(|m| {
            let k = rref_rank_kernel(m).kernel;
            if k.rows() == 0 {
                FqSubspace::zero(m.cols(), m.modulus())
            } else {
                FqSubspace::span(&k)
            }
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct KernelCokernel {
    pub kernel: Representation,
    pub inclusion: RepMorphism,
    pub cokernel: Representation,
    pub projection: RepMorphism,
}

/// Kernel and cokernel of an intertwiner `f: x -> y`.
pub fn kernel_cokernel(x: &Representation, y: &Representation, f: &RepMorphism) -> Result<KernelCokernel> {
    f.validate(x, y)?;
    let p = x.modulus();
    let zero_x: Vec<FqSubspace> = x.dims().iter().map(|&d| FqSubspace::zero(d, p)).collect();
    let full_y: Vec<FqSubspace> = y.dims().iter().map(|&d| FqSubspace::full(d, p)).collect();
    let ker = subquotient(x, &kernel_spaces(f), &zero_x)?;
    let coker = subquotient(y, &full_y, &image_spaces(f))?;
    Ok(KernelCokernel {
        kernel: ker.rep,
        inclusion: RepMorphism::new(ker.lift),
        cokernel: coker.rep,
        projection: RepMorphism::new(coker.project),
    })
}

/// A subrepresentation `U ≤ z` with its induced representation and quotient.
#[derive(Clone, Debug)]
pub struct Subrep {
    pub spaces: Vec<FqSubspace>,
    pub sub: Representation,
    pub quotient: Representation,
}

/// Every subrepresentation of `z`: tuples of subspaces closed under all arrows.
pub fn enumerate_subreps(z: &Representation, cap: u64) -> Result<Vec<Subrep>> {
    let p = z.modulus();
    let per_vertex: Vec<Vec<FqSubspace>> = z
        .dims()
        .iter()
        .map(|&d| {
            let count: u128 = (0..=d as u32)
                .map(|k| crate::fq::gaussian_binomial(d as u32, k, p as u64) as u128)
                .sum();
            if count > cap as u128 {
                Err(HallError::cap("enumerating subspaces", count, cap))
            } else {
                Ok(enumerate_all_subspaces(d, p))
            }
        })
        .collect::<Result<_>>()?;
    let total: u128 = per_vertex.iter().map(|v| v.len() as u128).product();
    if total > cap as u128 {
        return Err(HallError::cap("enumerating subrepresentations", total, cap));
    }
    let full: Vec<FqSubspace> = z.dims().iter().map(|&d| FqSubspace::full(d, p)).collect();
    let zero: Vec<FqSubspace> = z.dims().iter().map(|&d| FqSubspace::zero(d, p)).collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; per_vertex.len()];
    'outer: loop {
        let spaces: Vec<FqSubspace> = idx.iter().enumerate().map(|(v, &i)| per_vertex[v][i].clone()).collect();
        let closed = z.quiver().arrows().iter().enumerate().all(|(k, a)| {
            let src = &spaces[a.src];
            if src.dim() == 0 {
                return true;
            }
            let images = src.basis().mul(&z.maps()[k].transpose());
            spaces[a.dst].contains_subspace(&FqSubspace::span(&images))
        });
        if closed {
            let sub = subquotient(z, &spaces, &zero)?.rep;
            let quotient = subquotient(z, &full, &spaces)?.rep;
            out.push(Subrep {
                spaces,
                sub,
                quotient,
            });
        }
        for v in (0..idx.len()).rev() {
            idx[v] += 1;
            if idx[v] < per_vertex[v].len() {
                continue 'outer;
            }
            idx[v] = 0;
        }
        break;
    }
    Ok(out)
}

const ISO_PROBES: usize = 256;

/// Searches `Hom(x, y)` for an invertible element.
pub fn find_isomorphism(x: &Representation, y: &Representation, cap: u64) -> Result<Option<RepMorphism>> {
    x.same_context(y)?;
    if x.dims() != y.dims() {
        return Ok(None);
    }
    let hb = hom_basis(x, y)?;
    if hb.dim() != hom_dim(x, x)? || hb.dim() != hom_dim(y, y)? || hb.dim() != hom_dim(y, x)? {
        return Ok(None);
    }
    // Units are a sizeable fraction of Hom(x, y) when x ≅ y, so a short
    // seeded random probe usually settles the positive case; a negative
    // answer still needs the exhaustive scan.
    let mut rng = StdRng::seed_from_u64(0x4a11);
    let p = x.modulus();
    for _ in 0..ISO_PROBES {
        let coeffs: Vec<u32> = (0..hb.dim()).map(|_| rng.gen_range(0..p)).collect();
        let f = hb.combine(&coeffs);
        if f.is_invertible() {
            return Ok(Some(f));
        }
    }
    for f in hb.elements(cap)? {
        if f.is_invertible() {
            return Ok(Some(f));
        }
    }
    Ok(None)
}

/// Dimension vector, then Hom-dimension filters, then exhaustive search.
pub fn is_isomorphic(x: &Representation, y: &Representation, cap: u64) -> Result<bool> {
    Ok(find_isomorphism(x, y, cap)?.is_some())
}

/// `true` if the sequence `0 -> x -i-> z -q-> y -> 0` is exact.
pub fn is_short_exact(i: &RepMorphism, q: &RepMorphism) -> bool {
    if !i.is_injective() || !q.is_surjective() {
        return false;
    }
    image_spaces(i) == kernel_spaces(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::Quiver;
    use std::sync::Arc;

    fn a2() -> Arc<Quiver> {
        Arc::new(Quiver::linear(2))
    }

    fn p1(p: u32) -> Representation {
        Representation::new(a2(), p, vec![1, 1], vec![FqMatrix::identity(1, p)]).unwrap()
    }

    fn s(v: usize, p: u32) -> Representation {
        Representation::simple(a2(), p, v)
    }

    const CAP: u64 = DEFAULT_ENUMERATION_CAP;

    #[test]
    fn hom_examples() {
        let m = p1(2);
        let end = hom_basis(&m, &m).unwrap();
        assert!(end.dim() >= 1);
        assert!(end.elements(CAP).unwrap().any(|f| f == RepMorphism::identity(&m)));
        assert_eq!(hom_dim(&s(0, 2), &s(1, 2)).unwrap(), 0);
        assert_eq!(hom_dim(&p1(2), &s(0, 2)).unwrap(), 1);
        for f in end.basis() {
            f.validate(&m, &m).unwrap();
        }
    }

    #[test]
    fn aut_examples() {
        let q1 = Arc::new(Quiver::a1());
        assert_eq!(aut_order(&Representation::zero(q1.clone(), 2), CAP).unwrap(), 1);
        let v2 = Representation::semisimple(q1, 2, vec![2]);
        assert_eq!(aut_order(&v2, CAP).unwrap(), 6);
        assert_eq!(aut_order(&p1(2), CAP).unwrap(), 1);
        assert_eq!(aut_order(&p1(3), CAP).unwrap(), 2);
    }

    #[test]
    fn kernel_cokernel_examples() {
        let m = p1(2);
        let kc = kernel_cokernel(&m, &m, &RepMorphism::identity(&m)).unwrap();
        assert!(kc.kernel.is_zero() && kc.cokernel.is_zero());

        let (x, y) = (s(0, 2), p1(2));
        let kc = kernel_cokernel(&x, &y, &RepMorphism::zero(&x, &y)).unwrap();
        assert!(is_isomorphic(&kc.kernel, &x, CAP).unwrap());
        assert!(is_isomorphic(&kc.cokernel, &y, CAP).unwrap());

        // P_1 -> S_1
        let proj = hom_basis(&p1(2), &s(0, 2)).unwrap().basis()[0].clone();
        let kc = kernel_cokernel(&p1(2), &s(0, 2), &proj).unwrap();
        assert!(is_isomorphic(&kc.kernel, &s(1, 2), CAP).unwrap());
        assert!(kc.cokernel.is_zero());
        assert!(proj.compose(&kc.inclusion).is_zero());
        kc.inclusion.validate(&kc.kernel, &p1(2)).unwrap();
    }

    #[test]
    fn bad_morphism_rejected() {
        let y = p1(2);
        let f = RepMorphism::new(vec![FqMatrix::identity(1, 2), FqMatrix::zeros(1, 1, 2)]);
        assert!(matches!(
            kernel_cokernel(&y, &y, &f),
            Err(HallError::MalformedMorphism(_))
        ));
    }

    #[test]
    fn subrep_examples() {
        let q1 = Arc::new(Quiver::a1());
        assert_eq!(enumerate_subreps(&Representation::zero(q1.clone(), 2), CAP).unwrap().len(), 1);
        let v2 = Representation::semisimple(q1, 2, vec![2]);
        let lines = enumerate_subreps(&v2, CAP)
            .unwrap()
            .into_iter()
            .filter(|s| s.sub.total_dim() == 1)
            .count();
        assert_eq!(lines, 3);

        let proper: Vec<Subrep> = enumerate_subreps(&p1(2), CAP)
            .unwrap()
            .into_iter()
            .filter(|s| s.sub.total_dim() == 1)
            .collect();
        assert_eq!(proper.len(), 1);
        assert!(is_isomorphic(&proper[0].sub, &s(1, 2), CAP).unwrap());
        assert!(is_isomorphic(&proper[0].quotient, &s(0, 2), CAP).unwrap());
    }

    #[test]
    fn subrep_cap_is_enforced() {
        let q1 = Arc::new(Quiver::a1());
        let v = Representation::semisimple(q1, 3, vec![4]);
        assert!(matches!(enumerate_subreps(&v, 10), Err(HallError::CapExceeded { .. })));
    }

    #[test]
    fn isomorphism_examples() {
        let m = p1(2);
        assert!(is_isomorphic(&m, &m, CAP).unwrap());
        let ss = s(0, 2).direct_sum(&s(1, 2)).unwrap();
        assert!(!is_isomorphic(&ss, &m, CAP).unwrap());
        let q1 = Arc::new(Quiver::a1());
        let a = Representation::semisimple(q1.clone(), 3, vec![2]);
        let b = Representation::new(q1, 3, vec![2], vec![]).unwrap();
        assert!(is_isomorphic(&a, &b, CAP).unwrap());
    }

    #[test]
    fn ext1_examples() {
        assert_eq!(ext1_dim_reps(&s(0, 2), &s(1, 2)).unwrap(), 1);
        assert_eq!(ext1_dim_reps(&s(1, 2), &s(0, 2)).unwrap(), 0);
        assert_eq!(ext1_dim_reps(&p1(2), &s(1, 2)).unwrap(), 0);
        assert_eq!(ext1_dim_reps(&s(1, 2), &s(0, 2)).unwrap(), 0);
    }

    #[test]
    fn coords_roundtrip() {
        let m = p1(3).direct_sum(&s(0, 3)).unwrap();
        let end = hom_basis(&m, &m).unwrap();
        for i in 0..end.cardinality().unwrap() {
            let f = end.element(i);
            assert_eq!(end.index_of(&f), i);
        }
    }
}
