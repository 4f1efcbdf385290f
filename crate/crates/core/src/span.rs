//! The span `X0 × X0 <-(s×c)- X1 -t-> X0` for the abelian category of
//! representations, built from finite groupoids.
//!
//! `X0` has one component per iso class `a`, with `π_1 = Aut(a)`. `X1` has
//! one component per iso class of morphisms `f: a -> b`, i.e. per orbit of
//! `Aut(a) × Aut(b)` on `Hom(a, b)`, with `π_1` the stabilizer of `f`. The
//! cone of a morphism is a module only when `f` is injective, so `s × c`
//! lives on the sub-type `X1_mono` of monomorphisms, and the product is
//!
//! ```text
//! μ(α, β) = t_! ι_! (s × c)^* (α ⊗ β)
//! ```
//!
//! with `ι: X1_mono -> X1` the inclusion of components.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use num::BigRational;

use crate::catalog::{Catalog, ClassId};
use crate::error::{HallError, Result};
use crate::hall::{ClassicalContext, HallElement};
use crate::hom::{automorphisms, hom_basis, kernel_cokernel, HomBasis};
use crate::lf::{lf_product, pullback, pushforward, tensor, Fiber, FiniteSupportFn, LFType, LfComponent, ProperMapData};
use crate::quiver::RepMorphism;

/// A finite matrix group given by its elements and a generating set.
#[derive(Clone, Debug)]
pub struct AutGroup {
    pub elements: Vec<RepMorphism>,
    pub generators: Vec<RepMorphism>,
}

fn closure(gens: &[RepMorphism], identity: &RepMorphism) -> HashSet<Vec<u32>> {
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut queue = VecDeque::from([identity.clone()]);
    seen.insert(identity.flatten());
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = s.compose(&g);
            if seen.insert(h.flatten()) {
                queue.push_back(h);
            }
        }
    }
    seen
}

impl AutGroup {
    /// Enumerates `Aut(x)` and picks generators greedily in enumeration order.
    pub fn of(cat: &Catalog, id: ClassId) -> Result<AutGroup> {
        let rep = cat.rep(id)?;
        let elements = automorphisms(rep, cat.cap())?;
        let identity = RepMorphism::identity(rep);
        let mut generators = Vec::new();
        let mut span = closure(&generators, &identity);
        for g in &elements {
            if span.len() == elements.len() {
                break;
            }
            if !span.contains(&g.flatten()) {
                generators.push(g.clone());
                span = closure(&generators, &identity);
            }
        }
        Ok(AutGroup { elements, generators })
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }
}

/// Orbits of a group acting on `Hom(a, b)`, given by its generators as
/// maps on morphisms. Orbits are listed by least member index.
/// A generator of a group acting on a Hom space.
type Move<'a> = Box<dyn Fn(&RepMorphism) -> RepMorphism + 'a>;

fn orbits(hb: &HomBasis, count: u64, moves: &[Move<'_>]) -> Vec<(u64, Vec<u64>)> {
    let mut seen = vec![false; count as usize];
    let mut out = Vec::new();
    for start in 0..count {
        if seen[start as usize] {
            continue;
        }
        seen[start as usize] = true;
        let mut members = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            let f = hb.element(i);
            for mv in moves {
                let j = hb.index_of(&mv(&f));
                if !seen[j as usize] {
                    seen[j as usize] = true;
                    members.push(j);
                    queue.push_back(j);
                }
            }
        }
        members.sort_unstable();
        out.push((start, members));
    }
    out
}

/// One component of `X1`: an iso class of morphisms `f: source -> target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismClass {
    pub source: ClassId,
    pub target: ClassId,
    /// Index in `Hom(source, target)` of the least member of the orbit.
    pub least: u64,
    pub orbit_size: u64,
    /// `|{(g, h) ∈ Aut(source) × Aut(target) : h f = f g}|`.
    pub stabilizer: u64,
    /// Class of the cokernel, when `f` is injective.
    pub cokernel: Option<ClassId>,
}

/// One component of the fiber of `t` over `z`: an `Aut(a)`-orbit of maps `a -> z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowOverZ {
    pub source: ClassId,
    pub least: u64,
    pub orbit_size: u64,
    /// `|Aut(f/z)| = |{g ∈ Aut(a) : f g = f}|`.
    pub automorphisms: u64,
    /// Component of `X1` containing this arrow.
    pub x1_component: usize,
}

#[derive(Clone, Debug)]
pub struct SpanModel {
    pub x0: Arc<LFType>,
    pub x1: Arc<LFType>,
    pub x1_mono: Arc<LFType>,
    pub x0_squared: Arc<LFType>,
    pub morphisms: Vec<MorphismClass>,
    /// `X1_mono` component `k` is `X1` component `mono[k]`.
    pub mono: Vec<usize>,
    /// Fiber components of `t`, per target class.
    pub arrows_over: Vec<Vec<ArrowOverZ>>,
    pub t: ProperMapData,
    pub iota: ProperMapData,
    pub s_times_c: ProperMapData,
}

fn order_component(n: u64) -> LfComponent {
    LfComponent::with_orders(vec![n])
}

/// Builds `X0`, `X1`, `t`, `ι` and `s × c` for a classical context.
pub fn build_span_model(ctx: &ClassicalContext) -> Result<SpanModel> {
    let cat = ctx.catalog();
    let cap = cat.cap();
    let ids: Vec<ClassId> = cat.ids().collect();
    let n = ids.len();
    let groups: Vec<AutGroup> = ids.iter().map(|&a| AutGroup::of(cat, a)).collect::<Result<_>>()?;
    let x0 = Arc::new(LFType::new(groups.iter().map(|g| order_component(g.order())).collect()));

    let mut morphisms = Vec::new();
    let mut locate: HashMap<(ClassId, ClassId, u64), usize> = HashMap::new();
    let mut arrows_over: Vec<Vec<ArrowOverZ>> = vec![Vec::new(); n];
    for &a in &ids {
        for &b in &ids {
            let (ra, rb) = (cat.rep(a)?, cat.rep(b)?);
            let hb = hom_basis(ra, rb)?;
            let count = hb.checked_count(cap, "enumerating morphisms for the span model")?;
            let (ga, gb) = (&groups[a.0], &groups[b.0]);
            let pre: Vec<Move<'_>> = ga
                .generators
                .iter()
                .map(|g| Box::new(move |f: &RepMorphism| f.compose(g)) as Move<'_>)
                .collect();
            let mut both = pre;
            for h in &gb.generators {
                both.push(Box::new(move |f: &RepMorphism| h.compose(f)));
            }
            let group_order = ga.order() * gb.order();
            for (least, members) in orbits(&hb, count, &both) {
                let f = hb.element(least);
                let cokernel = if f.is_injective() {
                    Some(cat.classify(&kernel_cokernel(ra, rb, &f)?.cokernel)?)
                } else {
                    None
                };
                let k = morphisms.len();
                for &m in &members {
                    locate.insert((a, b, m), k);
                }
                morphisms.push(MorphismClass {
                    source: a,
                    target: b,
                    least,
                    orbit_size: members.len() as u64,
                    stabilizer: group_order / members.len() as u64,
                    cokernel,
                });
            }
            // fiber of t over b: orbits of Aut(a) alone
            let pre: Vec<Move<'_>> = ga
                .generators
                .iter()
                .map(|g| Box::new(move |f: &RepMorphism| f.compose(g)) as Move<'_>)
                .collect();
            for (least, members) in orbits(&hb, count, &pre) {
                arrows_over[b.0].push(ArrowOverZ {
                    source: a,
                    least,
                    orbit_size: members.len() as u64,
                    automorphisms: ga.order() / members.len() as u64,
                    x1_component: locate[&(a, b, least)],
                });
            }
        }
    }

    let x1 = Arc::new(LFType::new(morphisms.iter().map(|m| order_component(m.stabilizer)).collect()));
    let t = ProperMapData::new(
        x1.clone(),
        x0.clone(),
        morphisms.iter().map(|m| m.target.0).collect(),
        arrows_over
            .iter()
            .map(|over| Fiber {
                fiber: LFType::new(over.iter().map(|w| order_component(w.automorphisms)).collect()),
                incl: over.iter().map(|w| w.x1_component).collect(),
            })
            .collect(),
    )?;

    let mono: Vec<usize> = (0..morphisms.len()).filter(|&k| morphisms[k].cokernel.is_some()).collect();
    let x1_mono = Arc::new(LFType::new(mono.iter().map(|&k| x1.components[k].clone()).collect()));
    let iota = ProperMapData::new(
        x1_mono.clone(),
        x1.clone(),
        mono.clone(),
        (0..x1.len())
            .map(|k| match mono.iter().position(|&m| m == k) {
                Some(pos) => Fiber {
                    fiber: LFType::point(),
                    incl: vec![pos],
                },
                None => Fiber {
                    fiber: LFType::default(),
                    incl: vec![],
                },
            })
            .collect(),
    )?;

    // (s × c)(f: a -> z) = (a, coker f). On π_1 this is Stab(f) -> Aut(a) × Aut(coker f),
    // whose kernel is {(1, 1 + f k q) : k ∈ Hom(coker f, a)}; the homotopy fiber
    // has |Aut(a) × Aut(y)| / |image| components, each with π_1 = kernel.
    let x0_squared = Arc::new(lf_product(&x0, &x0));
    let pair_index = |a: ClassId, y: ClassId| a.0 * n + y.0;
    let sc_map: Vec<usize> = mono
        .iter()
        .map(|&k| pair_index(morphisms[k].source, morphisms[k].cokernel.expect("mono")))
        .collect();
    let mut sc_fibers: Vec<Fiber> = (0..n * n)
        .map(|_| Fiber {
            fiber: LFType::default(),
            incl: vec![],
        })
        .collect();
    for (pos, &k) in mono.iter().enumerate() {
        let m = &morphisms[k];
        let y = m.cokernel.expect("mono");
        let kernel = crate::fq::checked_power(cat.modulus(), cat.hom_dim(y, m.source)?)
            .ok_or_else(|| HallError::cap("sizing span fibers", "Hom(y, x)", u64::MAX))?;
        let base = groups[m.source.0].order() * groups[y.0].order();
        let image = m.stabilizer / kernel;
        if m.stabilizer % kernel != 0 || base % image != 0 {
            return Err(HallError::InvalidLf(format!(
                "inconsistent stabilizer data for a morphism {} -> {}",
                m.source, m.target
            )));
        }
        let fib = &mut sc_fibers[sc_map[pos]];
        for _ in 0..base / image {
            fib.fiber.components.push(order_component(kernel));
            fib.incl.push(pos);
        }
    }
    let s_times_c = ProperMapData::new(x1_mono.clone(), x0_squared.clone(), sc_map, sc_fibers)?;

    Ok(SpanModel {
        x0,
        x1,
        x1_mono,
        x0_squared,
        morphisms,
        mono,
        arrows_over,
        t,
        iota,
        s_times_c,
    })
}

impl SpanModel {
    pub fn element_to_fn(&self, a: &HallElement<ClassId>) -> Result<FiniteSupportFn> {
        FiniteSupportFn::from_values(self.x0.clone(), a.terms().map(|(id, c)| (id.0, c.clone())))
    }

    pub fn fn_to_element(&self, f: &FiniteSupportFn) -> HallElement<ClassId> {
        HallElement::from_terms(f.support().map(|(c, v)| (ClassId(c), v.clone())))
    }

    /// Components of the fiber of `t` over `z` with source `x` and cokernel `y`.
    pub fn arrows_with_cone(&self, x: ClassId, z: ClassId, y: ClassId) -> Vec<&ArrowOverZ> {
        self.arrows_over[z.0]
            .iter()
            .filter(|w| w.source == x && self.morphisms[w.x1_component].cokernel == Some(y))
            .collect()
    }
}

/// `μ(a, b) = t_! ι_! (s × c)^* (a ⊗ b)`.
pub fn mu_span(a: &HallElement<ClassId>, b: &HallElement<ClassId>, span: &SpanModel) -> Result<HallElement<ClassId>> {
    let ab = tensor(&span.element_to_fn(a)?, &span.element_to_fn(b)?);
    let on_monos = pullback(&span.s_times_c, &ab)?;
    let on_x1 = pushforward(&span.iota, &on_monos)?;
    let out = pushforward(&span.t, &on_x1)?;
    Ok(span.fn_to_element(&out))
}

/// `Σ_orbits |Stab|^{-1}` over the `t`-fiber components with source `x` and cone `y`.
pub fn fiber_cardinality(span: &SpanModel, x: ClassId, z: ClassId, y: ClassId) -> BigRational {
    span.arrows_with_cone(x, z, y)
        .iter()
        .map(|w| BigRational::new(1.into(), w.automorphisms.into()))
        .sum()
}
