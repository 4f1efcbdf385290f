//! Quivers, their representations over `F_p`, and morphisms between them.
//!
//! Arrows act source to target: a representation assigns `F_p^{d_i}` to each
//! vertex and a `d_dst x d_src` matrix to each arrow.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{HallError, Result};
use crate::fq::{check_prime, FqMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arrow {
    pub src: usize,
    pub dst: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quiver {
    vertices: usize,
    arrows: Vec<Arrow>,
}

#[derive(Serialize, Deserialize)]
struct QuiverFile {
    vertices: usize,
    arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn new(vertices: usize, arrows: Vec<Arrow>) -> Result<Self> {
        if vertices == 0 {
            return Err(HallError::InvalidQuiver("needs at least one vertex".into()));
        }
        for (k, a) in arrows.iter().enumerate() {
            if a.src >= vertices || a.dst >= vertices {
                return Err(HallError::InvalidQuiver(format!(
                    "arrow {k} ({} -> {}) has an endpoint outside 0..{vertices}",
                    a.src, a.dst
                )));
            }
        }
        Ok(Quiver { vertices, arrows })
    }

    /// One vertex, no arrows.
    pub fn a1() -> Self {
        Quiver {
            vertices: 1,
            arrows: vec![],
        }
    }

    /// Linearly oriented `A_n`: `0 -> 1 -> ... -> n-1`.
    pub fn linear(n: usize) -> Self {
        Quiver {
            vertices: n,
            arrows: (1..n).map(|i| Arrow { src: i - 1, dst: i }).collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: QuiverFile = serde_json::from_str(text)?;
        Quiver::new(f.vertices, f.arrows)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&QuiverFile {
            vertices: self.vertices,
            arrows: self.arrows.clone(),
        })
        .expect("quiver serializes")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn is_acyclic(&self) -> bool {
        // Kahn's algorithm
        let mut indeg = vec![0usize; self.vertices];
        for a in &self.arrows {
            indeg[a.dst] += 1;
        }
        let mut stack: Vec<usize> = (0..self.vertices).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for a in self.arrows.iter().filter(|a| a.src == v) {
                indeg[a.dst] -= 1;
                if indeg[a.dst] == 0 {
                    stack.push(a.dst);
                }
            }
        }
        seen == self.vertices
    }

    /// Euler form `sum_i a_i b_i - sum_{i->j} a_i b_j`.
    pub fn euler_form(&self, a: &[usize], b: &[usize]) -> i64 {
        let diag: i64 = a.iter().zip(b).map(|(&x, &y)| (x * y) as i64).sum();
        let off: i64 = self
            .arrows
            .iter()
            .map(|ar| (a[ar.src] * b[ar.dst]) as i64)
            .sum();
        diag - off
    }

    /// All paths (as arrow-index sequences, first arrow first) starting at
    /// `from`, grouped by end vertex. Requires an acyclic quiver.
    pub fn paths_from(&self, from: usize) -> Result<Vec<Vec<Vec<usize>>>> {
        if !self.is_acyclic() {
            return Err(HallError::NotAcyclic);
        }
        let mut out = vec![Vec::new(); self.vertices];
        let mut frontier = vec![(from, Vec::<usize>::new())];
        while let Some((v, path)) = frontier.pop() {
            out[v].push(path.clone());
            for (k, a) in self.arrows.iter().enumerate() {
                if a.src == v {
                    let mut next = path.clone();
                    next.push(k);
                    frontier.push((a.dst, next));
                }
            }
        }
        for paths in &mut out {
            paths.sort();
        }
        Ok(out)
    }
}

/// A finite-dimensional representation of a quiver over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Representation {
    quiver: Arc<Quiver>,
    modulus: u32,
    dims: Vec<usize>,
    maps: Vec<FqMatrix>,
}

impl Representation {
    pub fn new(quiver: Arc<Quiver>, modulus: u32, dims: Vec<usize>, maps: Vec<FqMatrix>) -> Result<Self> {
        check_prime(modulus)?;
        if dims.len() != quiver.vertex_count() {
            return Err(HallError::DimensionMismatch(format!(
                "dimension vector has {} entries for {} vertices",
                dims.len(),
                quiver.vertex_count()
            )));
        }
        if maps.len() != quiver.arrows().len() {
            return Err(HallError::DimensionMismatch(format!(
                "{} arrow maps for {} arrows",
                maps.len(),
                quiver.arrows().len()
            )));
        }
        for (k, (a, m)) in quiver.arrows().iter().zip(&maps).enumerate() {
            if m.rows() != dims[a.dst] || m.cols() != dims[a.src] || m.modulus() != modulus {
                return Err(HallError::DimensionMismatch(format!(
                    "arrow {k} map is {}x{} over F_{}, expected {}x{} over F_{modulus}",
                    m.rows(),
                    m.cols(),
                    m.modulus(),
                    dims[a.dst],
                    dims[a.src]
                )));
            }
        }
        Ok(Representation {
            quiver,
            modulus,
            dims,
            maps,
        })
    }

    /// All arrow maps zero.
    pub fn semisimple(quiver: Arc<Quiver>, modulus: u32, dims: Vec<usize>) -> Self {
        let maps = quiver
            .arrows()
            .iter()
            .map(|a| FqMatrix::zeros(dims[a.dst], dims[a.src], modulus))
            .collect();
        Representation {
            quiver,
            modulus,
            dims,
            maps,
        }
    }

    pub fn zero(quiver: Arc<Quiver>, modulus: u32) -> Self {
        let n = quiver.vertex_count();
        Self::semisimple(quiver, modulus, vec![0; n])
    }

    pub fn simple(quiver: Arc<Quiver>, modulus: u32, vertex: usize) -> Self {
        let mut dims = vec![0; quiver.vertex_count()];
        dims[vertex] = 1;
        Self::semisimple(quiver, modulus, dims)
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn maps(&self) -> &[FqMatrix] {
        &self.maps
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn same_context(&self, other: &Representation) -> Result<()> {
        if self.modulus != other.modulus || self.quiver != other.quiver {
            return Err(HallError::ContextMismatch);
        }
        Ok(())
    }

    pub fn direct_sum(&self, other: &Representation) -> Result<Representation> {
        self.same_context(other)?;
        let dims = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let maps = self
            .maps
            .iter()
            .zip(&other.maps)
            .map(|(a, b)| FqMatrix::block_diag(a, b))
            .collect();
        Ok(Representation {
            quiver: self.quiver.clone(),
            modulus: self.modulus,
            dims,
            maps,
        })
    }

    /// Concatenated arrow-matrix entries; the order used for canonical representatives.
    pub fn arrow_key(&self) -> Vec<u32> {
        self.maps.iter().flat_map(|m| m.entries().iter().copied()).collect()
    }
}

/// A morphism of representations: one matrix per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RepMorphism {
    maps: Vec<FqMatrix>,
}

impl RepMorphism {
    pub fn new(maps: Vec<FqMatrix>) -> Self {
        RepMorphism { maps }
    }

    pub fn zero(x: &Representation, y: &Representation) -> Self {
        RepMorphism {
            maps: x
                .dims
                .iter()
                .zip(&y.dims)
                .map(|(&dx, &dy)| FqMatrix::zeros(dy, dx, x.modulus))
                .collect(),
        }
    }

    pub fn identity(x: &Representation) -> Self {
        RepMorphism {
            maps: x.dims.iter().map(|&d| FqMatrix::identity(d, x.modulus)).collect(),
        }
    }

    pub fn maps(&self) -> &[FqMatrix] {
        &self.maps
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &RepMorphism) -> RepMorphism {
        RepMorphism {
            maps: self.maps.iter().zip(&other.maps).map(|(a, b)| a.mul(b)).collect(),
        }
    }

    pub fn add(&self, other: &RepMorphism) -> RepMorphism {
        RepMorphism {
            maps: self.maps.iter().zip(&other.maps).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, other: &RepMorphism) -> RepMorphism {
        RepMorphism {
            maps: self.maps.iter().zip(&other.maps).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn scale(&self, s: u32) -> RepMorphism {
        RepMorphism {
            maps: self.maps.iter().map(|a| a.scale(s)).collect(),
        }
    }

    pub fn neg(&self) -> RepMorphism {
        RepMorphism {
            maps: self.maps.iter().map(|a| a.neg()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.maps.iter().all(|m| m.is_zero())
    }

    pub fn is_injective(&self) -> bool {
        self.maps.iter().all(|m| m.rank() == m.cols())
    }

    pub fn is_surjective(&self) -> bool {
        self.maps.iter().all(|m| m.rank() == m.rows())
    }

    pub fn is_invertible(&self) -> bool {
        self.maps.iter().all(|m| m.is_invertible())
    }

    pub fn flatten(&self) -> Vec<u32> {
        self.maps.iter().flat_map(|m| m.entries().iter().copied()).collect()
    }

    /// Shape and intertwining check: `f_dst x_a = y_a f_src` for every arrow.
    pub fn validate(&self, x: &Representation, y: &Representation) -> Result<()> {
        x.same_context(y)?;
        if self.maps.len() != x.dims.len() {
            return Err(HallError::MalformedMorphism("wrong number of vertex maps".into()));
        }
        for (v, m) in self.maps.iter().enumerate() {
            if m.rows() != y.dims[v] || m.cols() != x.dims[v] {
                return Err(HallError::MalformedMorphism(format!(
                    "vertex {v} map is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    y.dims[v],
                    x.dims[v]
                )));
            }
        }
        for (k, a) in x.quiver.arrows().iter().enumerate() {
            let lhs = self.maps[a.dst].mul(&x.maps[k]);
            let rhs = y.maps[k].mul(&self.maps[a.src]);
            if lhs != rhs {
                return Err(HallError::MalformedMorphism(format!(
                    "does not intertwine along arrow {k}"
                )));
            }
        }
        Ok(())
    }

    /// Rebuilds a morphism `x -> y` from its flattened entries.
    pub fn unflatten(x: &Representation, y: &Representation, flat: &[u32]) -> RepMorphism {
        let mut off = 0;
        let maps = x
            .dims
            .iter()
            .zip(&y.dims)
            .map(|(&dx, &dy)| {
                let m = FqMatrix::from_vec(dy, dx, x.modulus, flat[off..off + dx * dy].to_vec())
                    .expect("layout");
                off += dx * dy;
                m
            })
            .collect();
        RepMorphism { maps }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quiver_validation() {
        assert!(Quiver::new(0, vec![]).is_err());
        assert!(Quiver::new(2, vec![Arrow { src: 0, dst: 2 }]).is_err());
        let q = Quiver::from_json(r#"{"vertices": 2, "arrows": [{"src": 0, "dst": 1}]}"#).unwrap();
        assert_eq!(q, Quiver::linear(2));
        assert!(q.is_acyclic());
        let jordan = Quiver::new(1, vec![Arrow { src: 0, dst: 0 }]).unwrap();
        assert!(!jordan.is_acyclic());
        assert!(jordan.paths_from(0).is_err());
    }

    #[test]
    fn paths_in_a3() {
        let q = Quiver::linear(3);
        let p = q.paths_from(0).unwrap();
        assert_eq!(p[0], vec![Vec::<usize>::new()]);
        assert_eq!(p[1], vec![vec![0]]);
        assert_eq!(p[2], vec![vec![0, 1]]);
    }

    #[test]
    fn euler_form_a2() {
        let q = Quiver::linear(2);
        assert_eq!(q.euler_form(&[1, 0], &[0, 1]), -1);
        assert_eq!(q.euler_form(&[0, 1], &[1, 0]), 0);
    }

    #[test]
    fn representation_shape_checked() {
        let q = Arc::new(Quiver::linear(2));
        let bad = FqMatrix::zeros(2, 1, 2);
        assert!(Representation::new(q.clone(), 2, vec![1, 1], vec![bad]).is_err());
        assert!(Representation::new(q.clone(), 4, vec![1, 1], vec![FqMatrix::zeros(1, 1, 4)]).is_err());
        let ok = Representation::new(q, 2, vec![1, 1], vec![FqMatrix::identity(1, 2)]).unwrap();
        assert_eq!(ok.total_dim(), 2);
    }
}
